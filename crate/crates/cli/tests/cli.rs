use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

use onepath::model_io::load_model;
use onepath::pipeline::{run_pipeline, RunOptions};
use onepath::CliError;
use onepath_core::fixtures;
use onepath_core::geometry::ModelMode;
use onepath_core::{PrinterConfig, SurfaceModel};

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data").join(name)
}

fn onepath(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_onepath")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn plan_writes_three_files() {
    let dir = tempfile::tempdir().unwrap();
    let y = data("y.profile");
    let o = onepath(&["plan", y.to_str().unwrap(), "--config", "ceramic", "--out", dir.path().to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    for ext in ["gcode", "svg", "report.json"] {
        let p = dir.path().join(format!("y.{ext}"));
        assert!(fs::metadata(&p).map(|m| m.len() > 0).unwrap_or(false), "{}", p.display());
    }
    let report: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("y.report.json")).unwrap()).unwrap();
    assert_eq!(report["#OF"], 2);
    assert_eq!(report["#OO"], 1);
    assert!(report["timings_ms"]["total"].as_f64().unwrap() >= 0.0);
}

#[test]
fn unknown_preset_fails() {
    let o = onepath(&["stats", "fixture:rectangle", "--config", "porcelain"]);
    assert!(!o.status.success());
    assert!(String::from_utf8_lossy(&o.stderr).contains("porcelain"));
}

#[test]
fn oracle_counts_diamond() {
    let o = onepath(&["oracle", data("diamond.graph").to_str().unwrap()]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).trim(), "2");
}

#[test]
fn oracle_rejects_cycles() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("cycle.graph");
    fs::write(&p, "nodes 2\nedge 0 1\nedge 1 0\n").unwrap();
    assert!(!onepath(&["oracle", p.to_str().unwrap()]).status.success());
}

#[test]
fn stats_flags_change_the_run() {
    let base = onepath(&["stats", "fixture:gentle_y", "--no-timings"]);
    let flat = onepath(&["stats", "fixture:gentle_y", "--no-timings", "--no-curving"]);
    assert!(base.status.success() && flat.status.success());
    let (a, b): (serde_json::Value, serde_json::Value) =
        (serde_json::from_str(&stdout(&base)).unwrap(), serde_json::from_str(&stdout(&flat)).unwrap());
    assert_eq!((a["#OO"].as_u64(), b["#OO"].as_u64()), (Some(1), Some(2)));
    assert!(a.get("timings_ms").is_none());
    let narrow = onepath(&["stats", "fixture:comb", "--beam-width", "1", "--seed", "3", "--no-timings"]);
    assert!(narrow.status.success());
}

#[test]
fn mode_mismatch_is_an_error() {
    let o = onepath(&["stats", "fixture:rectangle", "--mode", "mesh3d"]);
    assert!(!o.status.success());
    assert!(String::from_utf8_lossy(&o.stderr).contains("mesh3d"));
}

#[test]
fn visualize_each_stage() {
    let dir = tempfile::tempdir().unwrap();
    for stage in ["layers", "dep", "init", "opps", "plan"] {
        let out = dir.path().join(format!("{stage}.svg"));
        let o = onepath(&["visualize", stage, "fixture:twin_towers", "--out", out.to_str().unwrap()]);
        assert!(o.status.success(), "{stage}");
        assert!(fs::read_to_string(&out).unwrap().starts_with("<svg"), "{stage}");
    }
}

fn cylinder_obj() -> String {
    let Ok(SurfaceModel::Mesh(m)) = fixtures::cylinder::<f64>(20.0, 30.0, 48) else { unreachable!() };
    let mut s = String::from("# cylinder\n");
    for v in &m.vertices {
        let _ = writeln!(s, "v {} {} {}", v.x, v.y, v.z);
    }
    for t in &m.triangles {
        let _ = writeln!(s, "f {} {} {}", t[0] + 1, t[1] + 1, t[2] + 1);
    }
    s
}

#[test]
fn obj_and_stl_cylinders_plan_as_one_opp() {
    let dir = tempfile::tempdir().unwrap();
    let obj = dir.path().join("cyl.obj");
    fs::write(&obj, cylinder_obj()).unwrap();
    let (name, model) = load_model(obj.to_str().unwrap()).unwrap();
    assert_eq!(name, "cyl");
    let SurfaceModel::Mesh(mesh) = &model else { panic!("expected a mesh") };
    let stl = dir.path().join("cyl.stl");
    let tris: Vec<stl_io::Triangle> = mesh
        .triangles
        .iter()
        .map(|t| {
            let v = |i: usize| {
                let p = mesh.vertices[t[i]];
                stl_io::Vertex::new([p.x as f32, p.y as f32, p.z as f32])
            };
            stl_io::Triangle { normal: stl_io::Normal::new([0.0, 0.0, 0.0]), vertices: [v(0), v(1), v(2)] }
        })
        .collect();
    stl_io::write_stl(&mut fs::File::create(&stl).unwrap(), tris.iter()).unwrap();

    let cfg = PrinterConfig::ceramic();
    let opts = RunOptions { mode: Some(ModelMode::Mesh3d), ..RunOptions::default() };
    for path in [&obj, &stl] {
        let (name, model) = load_model(path.to_str().unwrap()).unwrap();
        let r = run_pipeline(&name, &model, &cfg, &opts).unwrap();
        assert_eq!((r.report.flat_opps, r.report.curved_opps, r.report.transfer_count), (1, 1, 0), "{name}");
        assert!(!r.report.curving);
    }
}

#[test]
fn missing_model_reports_path() {
    let e = load_model("/no/such/model.stl").unwrap_err();
    assert!(matches!(e, CliError::Io { .. }));
    assert!(e.to_string().contains("model.stl"));
}
