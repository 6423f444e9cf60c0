use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::curved::patch::{curving_merge, MergeContext, OppPatch, SubOpp, SubOppLayers};
use crate::flat::FlatOppGraph;
use crate::graph::{has_multiple_paths, Dag, EdgeKind};
use crate::scalar::Real;

/// Patches and their dependencies.
#[derive(Debug, Clone, PartialEq)]
pub struct CurvedOppGraph<T> {
    pub patches: Vec<OppPatch<T>>,
    pub dag: Dag,
}

impl<T: Real> CurvedOppGraph<T> {
    /// One flat patch per path of `flat`.
    pub fn from_flat(flat: &FlatOppGraph, ctx: &MergeContext<'_, T>) -> Self {
        let patches = flat
            .paths
            .iter()
            .enumerate()
            .map(|(i, p)| OppPatch::new(i, p.iter().map(|&n| ctx.flat_sub(vec![n])).collect()))
            .collect();
        Self { patches, dag: flat.dag.clone() }
    }

    pub fn node_count(&self) -> usize {
        self.patches.len()
    }

    pub fn total_layers(&self) -> usize {
        self.patches.iter().map(OppPatch::layer_count).sum()
    }

    /// Replaces the patches at `u` and `v` by `merged`, stored at the smaller index.
    fn contract(&self, u: usize, v: usize, merged: OppPatch<T>) -> Self {
        let keep = u.min(v);
        let gone = u.max(v);
        let remap = |x: usize| {
            let x = if x == gone { keep } else { x };
            if x > gone {
                x - 1
            } else {
                x
            }
        };
        let mut patches: Vec<OppPatch<T>> = Vec::with_capacity(self.patches.len() - 1);
        for (i, p) in self.patches.iter().enumerate() {
            if i == keep {
                patches.push(merged.clone());
            } else if i != gone {
                patches.push(p.clone());
            }
        }
        for (i, p) in patches.iter_mut().enumerate() {
            p.id = i;
        }
        let mut dag = Dag::new(patches.len());
        for (a, b, k) in self.dag.edges() {
            let (a, b) = (remap(a), remap(b));
            if a != b {
                dag.add_edge(a, b, k);
            }
        }
        Self { patches, dag }
    }

    /// Whether every initial-graph edge is respected by patch order and in-patch order.
    pub fn respects(&self, init: &Dag) -> bool {
        let mut owner = vec![(usize::MAX, 0usize); init.node_count()];
        for (pi, p) in self.patches.iter().enumerate() {
            for (si, s) in p.sub_opps.iter().enumerate() {
                for &n in &s.init_nodes {
                    if owner[n].0 != usize::MAX {
                        return false;
                    }
                    owner[n] = (pi, si);
                }
            }
        }
        if owner.iter().any(|o| o.0 == usize::MAX) {
            return false;
        }
        let Ok(reach) = self.dag.reachability() else {
            return false;
        };
        init.edges().all(|(a, b, _)| {
            let (pa, sa) = owner[a];
            let (pb, sb) = owner[b];
            if pa == pb {
                sa <= sb
            } else {
                reach[pa].contains(pb)
            }
        })
    }
}

/// Merges patches of `g` along single-path edges until no merge succeeds.
///
/// Each patch is first curved internally. Then, for a random edge, the parts of both
/// endpoints form a small dependency graph; parts touching the crossing edges are curved
/// together where possible, and the merge is kept when the result is one stackable chain.
pub fn pairwise_merge<T: Real>(g: &CurvedOppGraph<T>, ctx: &MergeContext<'_, T>, seed: u64) -> CurvedOppGraph<T> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut g = g.clone();
    for p in &mut g.patches {
        let subs = restack(std::mem::take(&mut p.sub_opps), ctx);
        *p = OppPatch::new(p.id, initial_merge(subs, ctx, &mut rng));
    }
    loop {
        let mut edges: Vec<(usize, usize)> = g.dag.edges().map(|(a, b, _)| (a, b)).collect();
        edges.shuffle(&mut rng);
        let mut merged = None;
        for (u, v) in edges {
            if has_multiple_paths(&g.dag, u, v) {
                continue;
            }
            if let Some(p) = merge_patches(&g.patches[u], &g.patches[v], ctx, &mut rng) {
                merged = Some((u, v, p));
                break;
            }
        }
        match merged {
            Some((u, v, p)) => g = g.contract(u, v, p),
            None => return g,
        }
    }
}

/// Joins consecutive flat parts that belong to one collision-free chain.
fn restack<T: Real>(subs: Vec<SubOpp<T>>, ctx: &MergeContext<'_, T>) -> Vec<SubOpp<T>> {
    let Some(chains) = &ctx.restack_chains else {
        return subs;
    };
    let chain_of = |s: &SubOpp<T>| -> Option<usize> {
        let SubOppLayers::Flat(ids) = &s.layers else { return None };
        let c = chains[*ids.first()?];
        ids.iter().all(|&i| chains[i] == c).then_some(c)
    };
    let mut out: Vec<SubOpp<T>> = Vec::new();
    for s in subs {
        if let Some(last) = out.last() {
            if chain_of(last).is_some() && chain_of(last) == chain_of(&s) && ctx.stackable(last, &s) {
                let mut nodes = last.init_nodes.clone();
                nodes.extend(&s.init_nodes);
                out.pop();
                out.push(ctx.flat_sub(nodes));
                continue;
            }
        }
        out.push(s);
    }
    out
}

/// Curves consecutive parts of one patch until no pair merges.
fn initial_merge<T: Real>(mut subs: Vec<SubOpp<T>>, ctx: &MergeContext<'_, T>, rng: &mut ChaCha8Rng) -> Vec<SubOpp<T>> {
    if !ctx.curving {
        return subs;
    }
    loop {
        let mut idx: Vec<usize> = (0..subs.len().saturating_sub(1)).collect();
        idx.shuffle(rng);
        let mut done = true;
        for i in idx {
            let Some(m) = curving_merge(&subs[i + 1], &subs[i], ctx) else { continue };
            let below_ok = i == 0 || ctx.stackable(&subs[i - 1], &m);
            let above_ok = i + 2 >= subs.len() || ctx.stackable(&m, &subs[i + 2]);
            if below_ok && above_ok {
                subs[i] = m;
                subs.remove(i + 1);
                done = false;
                break;
            }
        }
        if done {
            return subs;
        }
    }
}

/// Part-level graph of two patches: init edges between parts plus each patch's own order.
struct SubGraph<T> {
    subs: Vec<SubOpp<T>>,
    /// Side each part came from, or both after a merge.
    side: Vec<u8>,
    labeled: Vec<bool>,
}

impl<T: Real> SubGraph<T> {
    fn dag(&self, ctx: &MergeContext<'_, T>, chains: &[(usize, usize)]) -> Dag {
        let n = self.subs.len();
        let mut node_of = vec![usize::MAX; ctx.init.node_count()];
        for (i, s) in self.subs.iter().enumerate() {
            for &v in &s.init_nodes {
                node_of[v] = i;
            }
        }
        let mut dag = Dag::new(n);
        for (a, b, k) in ctx.init.dag.edges() {
            let (x, y) = (node_of[a], node_of[b]);
            if x != usize::MAX && y != usize::MAX && x != y {
                dag.add_edge(x, y, k);
            }
        }
        for &(a, b) in chains {
            let (x, y) = (node_of[a], node_of[b]);
            if x != y {
                dag.add_edge(x, y, EdgeKind::Geometric);
            }
        }
        dag
    }
}

/// In-patch order as pairs of representative init nodes.
fn chain_pairs<T: Real>(p: &OppPatch<T>) -> Vec<(usize, usize)> {
    p.sub_opps.windows(2).map(|w| (w[0].init_nodes[0], w[1].init_nodes[0])).collect()
}

/// Attempts to merge patch `pu` with its successor `pv`.
fn merge_patches<T: Real>(
    pu: &OppPatch<T>,
    pv: &OppPatch<T>,
    ctx: &MergeContext<'_, T>,
    rng: &mut ChaCha8Rng,
) -> Option<OppPatch<T>> {
    let mut chains = chain_pairs(pu);
    chains.extend(chain_pairs(pv));
    let mut sg = SubGraph {
        subs: pu.sub_opps.iter().chain(&pv.sub_opps).cloned().collect(),
        side: std::iter::repeat_n(1u8, pu.sub_opps.len()).chain(std::iter::repeat_n(2u8, pv.sub_opps.len())).collect(),
        labeled: Vec::new(),
    };
    let dag = sg.dag(ctx, &chains);
    sg.labeled = vec![false; sg.subs.len()];
    for (a, b, _) in dag.edges() {
        if sg.side[a] != sg.side[b] {
            sg.labeled[a] = true;
            sg.labeled[b] = true;
        }
    }
    if ctx.curving {
        curve_labeled(&mut sg, ctx, &chains, rng);
    }
    let dag = sg.dag(ctx, &chains);
    let order = dag.topological_order().ok()?;
    for w in order.windows(2) {
        let (lo, hi) = (w[0], w[1]);
        if dag.kind(lo, hi) != Some(EdgeKind::Geometric) {
            return None;
        }
        if !ctx.stackable(&sg.subs[lo], &sg.subs[hi]) {
            return None;
        }
    }
    let subs = order.into_iter().map(|i| sg.subs[i].clone()).collect();
    Some(OppPatch::new(pu.id.min(pv.id), subs))
}

/// Curves labeled parts along single-path edges until nothing merges.
fn curve_labeled<T: Real>(
    sg: &mut SubGraph<T>,
    ctx: &MergeContext<'_, T>,
    chains: &[(usize, usize)],
    rng: &mut ChaCha8Rng,
) {
    loop {
        let dag = sg.dag(ctx, chains);
        let mut edges: Vec<(usize, usize)> =
            dag.edges().filter(|&(a, b, _)| sg.labeled[a] && sg.labeled[b]).map(|(a, b, _)| (a, b)).collect();
        edges.shuffle(rng);
        let mut hit = None;
        for (x, y) in edges {
            if has_multiple_paths(&dag, x, y) {
                continue;
            }
            if let Some(m) = curving_merge(&sg.subs[y], &sg.subs[x], ctx) {
                hit = Some((x, y, m));
                break;
            }
        }
        let Some((x, y, m)) = hit else { return };
        let (keep, gone) = (x.min(y), x.max(y));
        sg.subs[keep] = m;
        sg.side[keep] = 3;
        sg.labeled[keep] = true;
        sg.subs.remove(gone);
        sg.side.remove(gone);
        sg.labeled.remove(gone);
    }
}

/// Smallest patch count, then fewest layers; ties keep the earlier graph.
pub fn select_best<T: Real>(graphs: Vec<CurvedOppGraph<T>>) -> Option<CurvedOppGraph<T>> {
    let mut best: Option<CurvedOppGraph<T>> = None;
    for g in graphs {
        let better = match &best {
            None => true,
            Some(b) => (g.node_count(), g.total_layers()) < (b.node_count(), b.total_layers()),
        };
        if better {
            best = Some(g);
        }
    }
    best
}

/// Curved graphs for every flat cover, merged with one seed each.
pub fn curve_all<T: Real>(flats: &[FlatOppGraph], ctx: &MergeContext<'_, T>, seed: u64) -> Vec<CurvedOppGraph<T>> {
    let mut seen = BTreeSet::new();
    flats
        .iter()
        .filter(|f| seen.insert(f.partition()))
        .map(|f| pairwise_merge(&CurvedOppGraph::from_flat(f, ctx), ctx, seed))
        .collect()
}
