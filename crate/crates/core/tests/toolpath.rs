use onepath_core::curved::{CurvedOppGraph, MergeContext, OppPatch};
use onepath_core::geometry::{LayerElement, Point, PrinterConfig};
use onepath_core::graph::{is_valid_topological_order, Dag, EdgeKind, InitGraph};
use onepath_core::toolpath::{order_opps, spiral_connection_dp, spiralize_contours, zigzag_entries};
use proptest::prelude::*;

/// Minimum over every assignment of one connecting point per contour.
fn spiral_brute(cs: &[Vec<Point<f64>>]) -> f64 {
    fn rec(cs: &[Vec<Point<f64>>], i: usize, prev: usize, acc: f64, best: &mut f64) {
        if i == cs.len() {
            *best = best.min(acc);
            return;
        }
        for j in 0..cs[i].len() {
            rec(cs, i + 1, j, acc + cs[i - 1][prev].dist(cs[i][j]), best);
        }
    }
    let mut best = f64::INFINITY;
    for j in 0..cs[0].len() {
        if cs.len() == 1 {
            best = 0.0;
        } else {
            rec(cs, 1, j, 0.0, &mut best);
        }
    }
    best
}

fn zigzag_brute(ends: &[(Point<f64>, Point<f64>)]) -> f64 {
    let n = ends.len();
    (0..1u32 << n)
        .map(|mask| {
            let oriented = |i: usize| if mask >> i & 1 == 1 { (ends[i].1, ends[i].0) } else { ends[i] };
            (1..n).map(|i| oriented(i - 1).1.dist(oriented(i).0)).sum::<f64>()
        })
        .fold(f64::INFINITY, f64::min)
}

fn contour_stack() -> impl Strategy<Value = Vec<Vec<Point<f64>>>> {
    (1usize..=4, 3usize..=6).prop_flat_map(|(n, m)| {
        prop::collection::vec(prop::collection::vec((-20.0f64..20.0, -20.0f64..20.0), m), n).prop_map(|rings| {
            rings
                .into_iter()
                .enumerate()
                .map(|(i, r)| r.into_iter().map(|(x, y)| Point::new(x, y, i as f64 + 0.5)).collect())
                .collect()
        })
    })
}

fn segment_stack() -> impl Strategy<Value = Vec<(Point<f64>, Point<f64>)>> {
    prop::collection::vec((-10.0f64..10.0, 10.0f64..40.0, -5.0f64..5.0, -5.0f64..5.0), 1..=12).prop_map(|v| {
        v.into_iter()
            .enumerate()
            .map(|(i, (a, b, ya, yb))| {
                let z = i as f64 + 0.5;
                (Point::new(a, ya, z), Point::new(b, yb, z))
            })
            .collect()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn spiral_dp_matches_brute_force(cs in contour_stack()) {
        let (cost, pick) = spiral_connection_dp(&cs);
        prop_assert!((cost - spiral_brute(&cs)).abs() < 1e-9);
        let replay: f64 = (1..cs.len()).map(|i| cs[i - 1][pick[i - 1]].dist(cs[i][pick[i]])).sum();
        prop_assert!((replay - cost).abs() < 1e-9);
    }

    #[test]
    fn zigzag_dp_matches_brute_force(ends in segment_stack()) {
        let (cost, rev) = zigzag_entries(&ends);
        prop_assert!((cost - zigzag_brute(&ends)).abs() < 1e-9);
        prop_assert_eq!(rev.len(), ends.len());
    }

    #[test]
    fn order_is_topological(n in 1usize..12, p in 0.2f64..0.5, seed in any::<u64>()) {
        let dag = random_dag(n, p, seed);
        let cfg = PrinterConfig::<f64>::ceramic();
        let els: Vec<LayerElement<f64>> = (0..n)
            .map(|i| LayerElement::segment(i, 0, 0.5, vec![Point::xz(0.0, 0.5), Point::xz(1.0, 0.5)]))
            .collect();
        let init = InitGraph { nodes: (0..n).map(|i| vec![i]).collect(), dag: dag.clone() };
        let ctx = MergeContext::new(&els, &init, &cfg, false);
        let g = CurvedOppGraph {
            patches: (0..n).map(|i| OppPatch::new(i, vec![ctx.flat_sub(vec![i])])).collect(),
            dag,
        };
        let order = order_opps(&g, 100);
        prop_assert!(is_valid_topological_order(&g.dag, &order));
        prop_assert_eq!(order_opps(&g, 100), order);
    }
}

fn random_dag(n: usize, p: f64, seed: u64) -> Dag {
    let mut s = seed;
    let mut next = move || {
        s = s.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = s;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    };
    let mut g = Dag::new(n);
    for i in 0..n {
        for j in i + 1..n {
            if (next() as f64 / u64::MAX as f64) < p {
                g.add_edge(i, j, EdgeKind::Geometric);
            }
        }
    }
    g
}

#[test]
fn identical_contours_cost_layer_height() {
    for n in 2..=6 {
        let cs: Vec<Vec<Point<f64>>> = (0..n)
            .map(|i| {
                (0..6)
                    .map(|k| {
                        let a = std::f64::consts::TAU * k as f64 / 6.0;
                        Point::new(10.0 * a.cos(), 10.0 * a.sin(), 1.5 * i as f64)
                    })
                    .collect()
            })
            .collect();
        let (cost, _) = spiral_connection_dp(&cs);
        assert!((cost - (n - 1) as f64 * 1.5).abs() < 1e-9);
    }
}

#[test]
fn spiral_is_one_open_polyline() {
    let cs: Vec<Vec<Point<f64>>> = (0..5)
        .map(|i| {
            (0..40)
                .map(|k| {
                    let a = std::f64::consts::TAU * k as f64 / 40.0;
                    Point::new(15.0 * a.cos(), 15.0 * a.sin(), i as f64 + 0.5)
                })
                .collect()
        })
        .collect();
    let v = spiralize_contours(&cs, &[1.0; 5], 40);
    assert_eq!(v.len(), 4 * 41 + 41);
    let max_step = v.windows(2).map(|w| w[0].position.dist(w[1].position)).fold(0.0, f64::max);
    assert!(max_step < 3.0);
    assert!(v.iter().all(|x| x.extruding && x.local_thickness == 1.0));
}
