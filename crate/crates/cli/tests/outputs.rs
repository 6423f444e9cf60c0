use onepath::config::parse_config;
use onepath::gcode::{emit_gcode, extrusion_amount, parse_gcode};
use onepath::pipeline::{run_pipeline, RunOptions};
use onepath::render::{render_dep, render_plan};
use onepath_core::fixtures;
use onepath_core::toolpath::plan_transfers;
use onepath_core::PrinterConfig;

fn run(name: &str) -> onepath::pipeline::PipelineRun {
    let model = fixtures::by_name::<f64>(name).unwrap();
    run_pipeline(name, &model, &PrinterConfig::ceramic(), &RunOptions::default()).unwrap()
}

/// Planned extrusion summed directly from the toolpath vertices.
fn planned_extrusion(r: &onepath::pipeline::PipelineRun, cfg: &PrinterConfig) -> f64 {
    r.output
        .plan
        .toolpaths
        .iter()
        .flat_map(|tp| tp.vertices.windows(2))
        .filter(|w| w[1].extruding)
        .map(|w| extrusion_amount(cfg, w[0].position.dist(w[1].position), w[1].local_thickness))
        .sum()
}

#[test]
fn gcode_round_trip_recovers_vertices_and_extrusion() {
    let cfg = PrinterConfig::ceramic();
    let r = run("gentle_y");
    let doc = emit_gcode(&r.output.plan, &cfg);
    let moves = parse_gcode(&doc.to_string());
    let extruding: Vec<_> = moves.iter().filter(|m| m.extruding).collect();
    let planned: Vec<_> =
        r.output.plan.toolpaths.iter().flat_map(|tp| tp.vertices.iter().skip(1).filter(|v| v.extruding)).collect();
    assert_eq!(extruding.len(), planned.len());
    for (m, v) in extruding.iter().zip(&planned) {
        assert!(m.position.dist(v.position) < 1e-5);
    }
    let total = moves.last().unwrap().e;
    let want = planned_extrusion(&r, &cfg);
    assert!(((total - want) / want).abs() < 1e-6, "{total} vs {want}");
}

#[test]
fn extrusion_is_monotone_and_travel_is_dry() {
    let cfg = PrinterConfig::ceramic();
    let r = run("twin_walls");
    let text = emit_gcode(&r.output.plan, &cfg).to_string();
    assert!(text.contains("; transfer"));
    assert_eq!(text.matches("; OPP").count(), 2);
    let moves = parse_gcode(&text);
    assert!(moves.windows(2).all(|w| w[1].e >= w[0].e));
    for line in text.lines().filter(|l| l.starts_with("G0")) {
        assert!(!line.contains('E'), "{line}");
    }
}

#[test]
fn gcode_is_byte_identical_across_runs() {
    let cfg = PrinterConfig::ceramic();
    for name in ["gentle_y", "twin_towers", "comb"] {
        let a = emit_gcode(&run(name).output.plan, &cfg).to_string();
        let b = emit_gcode(&run(name).output.plan, &cfg).to_string();
        assert_eq!(a, b, "{name}");
    }
    assert_eq!(run("comb").report.without_timings(), run("comb").report.without_timings());
}

#[test]
fn report_relations_hold() {
    for (name, _) in fixtures::corpus::<f64>() {
        let rep = run(name).report;
        assert!(rep.curved_opps <= rep.flat_opps, "{name}");
        assert!(rep.estimated_time_s > 0.0, "{name}");
        assert_eq!(rep.transfer_count + 1, rep.curved_opps, "{name}");
    }
}

#[test]
fn dep_svg_draws_one_arrow_per_edge() {
    let r = run("gentle_y");
    let svg = render_dep(&r.output.dep).to_string();
    assert_eq!(svg.matches("class=\"edge ").count(), r.output.dep.dag.edge_count());
    assert_eq!(svg.matches("class=\"edge collision\"").count(), r.output.dep.collision_edge_count());
}

#[test]
fn collision_edges_are_dashed() {
    // A short nozzle under a wide carriage forces ordering between the walls.
    let cfg = parse_config("[nozzle]\nlength = 15.0\ncarriage_radius = 60.0\n").unwrap();
    let model = fixtures::twin_walls::<f64>();
    let r = run_pipeline("twin_walls", &model, &cfg, &RunOptions::default()).unwrap();
    assert!(r.output.dep.collision_edge_count() > 0);
    let svg = render_dep(&r.output.dep).to_string();
    let dashed = svg.lines().filter(|l| l.contains("edge collision") && l.contains("stroke-dasharray")).count();
    assert_eq!(dashed, r.output.dep.collision_edge_count());
}

#[test]
fn two_opp_plan_uses_two_colors_and_one_transfer() {
    let r = run("twin_walls");
    let svg = render_plan(&r.output.plan).to_string();
    assert_eq!(svg.matches("class=\"transfer\"").count(), 1);
    let colors: std::collections::BTreeSet<_> = svg
        .lines()
        .filter(|l| l.contains("class=\"toolpath\""))
        .filter_map(|l| l.split("stroke=\"").nth(1).and_then(|s| s.split('"').next()))
        .collect();
    assert_eq!(colors.len(), 2);
}

#[test]
fn empty_plan_is_an_empty_canvas() {
    let svg = render_plan(&plan_transfers(Vec::new(), 5.0, 25.0)).to_string();
    assert!(!svg.contains("<polyline") && !svg.contains("<line") && !svg.contains("<g"));
    assert!(svg.contains("viewBox=\"0 0 1 1\""));
}

mod properties {
    use onepath::gcode::{emit_gcode, extrusion_amount, parse_gcode};
    use onepath_core::toolpath::{plan_transfers, Toolpath, ToolpathVertex};
    use onepath_core::{Point, PrinterConfig};
    use proptest::prelude::*;

    fn toolpath() -> impl Strategy<Value = Vec<(f64, f64, f64, bool, f64)>> {
        prop::collection::vec(
            (-50.0f64..50.0, -50.0f64..50.0, 0.0f64..40.0, prop::bool::weighted(0.8), 0.5f64..2.5),
            1..30,
        )
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn round_trip_recovers_moves_and_extrusion(paths in prop::collection::vec(toolpath(), 0..4)) {
            let cfg = PrinterConfig::ceramic();
            let toolpaths: Vec<Toolpath<f64>> = paths
                .iter()
                .enumerate()
                .map(|(id, p)| Toolpath {
                    opp_id: id,
                    vertices: p
                        .iter()
                        .map(|&(x, y, z, ext, th)| {
                            let pt = Point::new(x, y, z);
                            if ext { ToolpathVertex::extruding(pt, th, Some(0)) } else { ToolpathVertex::travel(pt) }
                        })
                        .collect(),
                })
                .collect();
            let plan = plan_transfers(toolpaths, 5.0, cfg.speed);
            let text = emit_gcode(&plan, &cfg).to_string();
            let moves = parse_gcode(&text);
            prop_assert!(moves.windows(2).all(|w| w[1].e >= w[0].e));

            let mut want = 0.0;
            let mut expected = Vec::new();
            for (i, tp) in plan.toolpaths.iter().enumerate() {
                match i.checked_sub(1).map(|j| &plan.transfers[j]) {
                    Some(t) => expected.extend(t.moves.iter().copied()),
                    None => expected.push(tp.vertices[0].position),
                }
                for w in tp.vertices.windows(2) {
                    if w[1].extruding {
                        want += extrusion_amount(&cfg, w[0].position.dist(w[1].position), w[1].local_thickness);
                    }
                    expected.push(w[1].position);
                }
            }
            prop_assert_eq!(moves.len(), expected.len());
            for (m, p) in moves.iter().zip(&expected) {
                prop_assert!(m.position.dist(*p) < 1e-5);
            }
            let got = moves.last().map_or(0.0, |m| m.e);
            prop_assert!((got - want).abs() <= 1e-6 * want.max(1.0));
        }
    }
}
