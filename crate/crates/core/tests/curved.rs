use onepath_core::curved::{
    curving_merge, pairwise_merge, select_best, stacking_merge, CurvedOppGraph, MergeContext, OppPatch, PatchType,
};
use onepath_core::fixtures;
use onepath_core::geometry::{LayerElement, Point};
use onepath_core::graph::{Dag, EdgeKind::Geometric as G, InitGraph};
use onepath_core::plan::{plan_model, PlanOptions};
use onepath_core::PrinterConfig;
use proptest::prelude::*;

fn seg(id: usize, layer: usize, x0: f64, x1: f64) -> LayerElement<f64> {
    let z = layer as f64 + 0.5;
    LayerElement::segment(id, layer, z, vec![Point::xz(x0, z), Point::xz(x1, z)])
}

fn singletons(n: usize, edges: &[(usize, usize)]) -> InitGraph {
    InitGraph {
        nodes: (0..n).map(|i| vec![i]).collect(),
        dag: Dag::from_edges(n, edges.iter().map(|&(a, b)| (a, b, G))),
    }
}

fn patch(ctx: &MergeContext<'_, f64>, id: usize, nodes: &[usize]) -> OppPatch<f64> {
    OppPatch::new(id, nodes.iter().map(|&n| ctx.flat_sub(vec![n])).collect())
}

#[test]
fn stacked_rectangles_stack() {
    let cfg = PrinterConfig::ceramic();
    let els = vec![seg(0, 0, 0.0, 20.0), seg(1, 1, 0.0, 20.0)];
    let init = singletons(2, &[(0, 1)]);
    let ctx = MergeContext::new(&els, &init, &cfg, true);
    let m = stacking_merge(&patch(&ctx, 1, &[1]), &patch(&ctx, 0, &[0]), &ctx).unwrap();
    assert_eq!(m.sub_opps.len(), 2);
    assert_eq!(m.patch_type, PatchType::I);
    assert_eq!(m.sub_opps[0].init_nodes, vec![0]);
}

#[test]
fn empty_layer_between_refuses() {
    let cfg = PrinterConfig::ceramic();
    let els = vec![seg(0, 0, 0.0, 20.0), seg(1, 2, 0.0, 20.0)];
    let init = singletons(2, &[(0, 1)]);
    let ctx = MergeContext::new(&els, &init, &cfg, true);
    assert!(stacking_merge(&patch(&ctx, 1, &[1]), &patch(&ctx, 0, &[0]), &ctx).is_none());
}

#[test]
fn far_endpoints_need_extra_path() {
    let cfg = PrinterConfig::ceramic();
    // The upper segment starts 10 mm in from both ends of the lower one.
    let els = vec![seg(0, 0, 0.0, 40.0), seg(1, 1, 10.0, 30.0)];
    let init = singletons(2, &[(0, 1)]);
    let mut ctx = MergeContext::new(&els, &init, &cfg, true);
    let (a, b) = (patch(&ctx, 1, &[1]), patch(&ctx, 0, &[0]));
    assert!(stacking_merge(&a, &b, &ctx).is_some());
    ctx.allow_extra_path = false;
    assert!(stacking_merge(&a, &b, &ctx).is_none());
}

#[test]
fn steep_arm_stacks_but_does_not_curve() {
    let cfg = PrinterConfig::ceramic();
    let out = plan_model(&fixtures::steep_y::<f64>(), &cfg, &PlanOptions::default()).unwrap();
    let ctx = out.context(&cfg);
    let stem = out.init.nodes.iter().position(|n| out.dep.elements[n[0]].layer_index == 0).unwrap();
    let left = out
        .init
        .nodes
        .iter()
        .position(|n| out.dep.elements[n[0]].layer_index == 20 && out.dep.elements[n[0]].x_range().0 == 0.0)
        .unwrap();
    let (s, l) = (ctx.flat_sub(vec![stem]), ctx.flat_sub(vec![left]));
    assert!(ctx.stackable(&s, &l));
    assert!(curving_merge(&l, &s, &ctx).is_none());
}

#[test]
fn curving_disabled_in_mesh_mode() {
    let cfg = PrinterConfig::ceramic();
    let els = vec![seg(0, 0, 0.0, 20.0), seg(1, 1, 0.0, 20.0)];
    let init = singletons(2, &[(0, 1)]);
    let ctx = MergeContext::new(&els, &init, &cfg, false);
    assert!(curving_merge(&ctx.flat_sub(vec![1]), &ctx.flat_sub(vec![0]), &ctx).is_none());
}

#[test]
fn two_path_edge_never_merges() {
    let cfg = PrinterConfig::ceramic();
    // Node 0 and 2 would stack, but a detour through the far wall makes two paths.
    let els = vec![seg(0, 0, 0.0, 20.0), seg(1, 0, 60.0, 80.0), seg(2, 1, 0.0, 20.0)];
    let init = singletons(3, &[(0, 1), (1, 2), (0, 2)]);
    let ctx = MergeContext::new(&els, &init, &cfg, true);
    let g = CurvedOppGraph { patches: (0..3).map(|i| patch(&ctx, i, &[i])).collect(), dag: init.dag.clone() };
    let out = pairwise_merge(&g, &ctx, 0);
    assert_eq!(out.node_count(), 3);
}

#[test]
fn distant_patches_are_a_fixpoint() {
    let cfg = PrinterConfig::ceramic();
    let els = vec![seg(0, 0, 0.0, 10.0), seg(1, 0, 60.0, 70.0)];
    let init = singletons(2, &[]);
    let ctx = MergeContext::new(&els, &init, &cfg, true);
    let g = CurvedOppGraph { patches: (0..2).map(|i| patch(&ctx, i, &[i])).collect(), dag: init.dag.clone() };
    assert_eq!(pairwise_merge(&g, &ctx, 7), g);
}

#[test]
fn select_best_prefers_fewest_nodes_then_first() {
    let cfg = PrinterConfig::ceramic();
    let els: Vec<_> = (0..3).map(|i| seg(i, i, 0.0, 20.0)).collect();
    let init = singletons(3, &[(0, 1), (1, 2)]);
    let ctx = MergeContext::new(&els, &init, &cfg, false);
    let three = CurvedOppGraph { patches: (0..3).map(|i| patch(&ctx, i, &[i])).collect(), dag: init.dag.clone() };
    let two = CurvedOppGraph {
        patches: vec![patch(&ctx, 0, &[0, 1]), patch(&ctx, 1, &[2])],
        dag: Dag::from_edges(2, [(0, 1, G)]),
    };
    let other_two = CurvedOppGraph {
        patches: vec![patch(&ctx, 0, &[0]), patch(&ctx, 1, &[1, 2])],
        dag: Dag::from_edges(2, [(0, 1, G)]),
    };
    assert_eq!(select_best(vec![three.clone(), two.clone()]), Some(two.clone()));
    assert_eq!(select_best(vec![two.clone(), other_two.clone()]), Some(two.clone()));
    assert_eq!(select_best(vec![other_two.clone(), two]), Some(other_two));
    assert_eq!(select_best::<f64>(Vec::new()), None);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn any_seed_keeps_dependencies(seed in any::<u64>(), pick in 0usize..4) {
        let name = ["gentle_y", "steep_y", "twin_towers", "comb"][pick];
        let mut cfg = PrinterConfig::ceramic();
        cfg.rng_seed = seed;
        let out = plan_model(&fixtures::by_name::<f64>(name).unwrap(), &cfg, &PlanOptions::default()).unwrap();
        prop_assert!(out.curved.respects(&out.init.dag));
        prop_assert!(out.curved_opp_count() <= out.flat_opp_count());
        prop_assert!(out.curved.dag.is_acyclic());
        let tan = cfg.slope_limits().tan_max();
        for p in &out.curved.patches {
            for s in &p.sub_opps {
                if let onepath_core::curved::SubOppLayers::Curved(st) = &s.layers {
                    prop_assert!(st.audit(cfg.t_min, cfg.t_max, tan).is_empty());
                }
            }
        }
    }
}
