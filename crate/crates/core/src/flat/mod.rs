//! Precedence-constrained minimum path cover over the initial OPP graph.

mod beam;
mod exact;

pub use beam::{beam_search_path_covers, MAX_RETAINED_COVERS};
pub use exact::{exact_min_path_cover, ORACLE_NODE_LIMIT};

use fixedbitset::FixedBitSet;

use crate::graph::{Dag, EdgeKind};

/// Merged flat OPPs: each node is a path of initial-graph nodes, listed in print order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlatOppGraph {
    pub paths: Vec<Vec<usize>>,
    /// Edges between paths induced by the initial graph. Not reduced, so that
    /// parallel dependencies stay visible to the merge deadlock test.
    pub dag: Dag,
}

impl FlatOppGraph {
    /// Builds the quotient graph of `init` under the path partition `paths`.
    /// An edge is a collision edge if any contributing edge is one.
    pub fn from_paths(init: &Dag, paths: Vec<Vec<usize>>) -> Self {
        let mut of = vec![usize::MAX; init.node_count()];
        for (i, p) in paths.iter().enumerate() {
            for &u in p {
                of[u] = i;
            }
        }
        let mut dag = Dag::new(paths.len());
        for (u, v, k) in init.edges() {
            let (a, b) = (of[u], of[v]);
            if a == b {
                continue;
            }
            match dag.kind(a, b) {
                Some(EdgeKind::Collision) => {}
                Some(EdgeKind::Geometric) if k == EdgeKind::Collision => {
                    dag.remove_edge(a, b);
                    dag.add_edge(a, b, k);
                }
                Some(EdgeKind::Geometric) => {}
                None => dag.add_edge(a, b, k),
            }
        }
        Self { paths, dag }
    }

    pub fn node_count(&self) -> usize {
        self.paths.len()
    }

    /// Paths as a sorted set, ignoring print order.
    pub fn partition(&self) -> Vec<Vec<usize>> {
        let mut p = self.paths.clone();
        p.sort();
        p
    }
}

/// Whether `v` may be appended after `path` given the `covered` set.
fn traversable(g: &Dag, covered: &FixedBitSet, path: &[usize], v: usize) -> bool {
    !covered.contains(v) && !path.contains(&v) && g.predecessors(v).all(|p| covered.contains(p) || path.contains(&p))
}

/// Every maximal precedence-feasible path over geometric edges, from every ready start.
pub fn greedy_traversals(g: &Dag, covered: &FixedBitSet) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for s in 0..g.node_count() {
        if traversable(g, covered, &[], s) {
            extend(g, covered, &mut vec![s], &mut out);
        }
    }
    out
}

fn extend(g: &Dag, covered: &FixedBitSet, path: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    let last = path[path.len() - 1];
    let mut extended = false;
    for v in g.successors(last) {
        if g.kind(last, v) == Some(EdgeKind::Geometric) && traversable(g, covered, path, v) {
            extended = true;
            path.push(v);
            extend(g, covered, path, out);
            path.pop();
        }
    }
    if !extended {
        out.push(path.clone());
    }
}

/// Replays `paths` in order: checks the partition and that every node's dependencies
/// are printed before it, and that consecutive path nodes share a geometric edge.
pub fn is_valid_cover(g: &Dag, paths: &[Vec<usize>]) -> bool {
    let n = g.node_count();
    let mut covered = FixedBitSet::with_capacity(n);
    for p in paths {
        if p.is_empty() {
            return false;
        }
        for (i, &v) in p.iter().enumerate() {
            if v >= n || covered.contains(v) {
                return false;
            }
            if i > 0 && g.kind(p[i - 1], v) != Some(EdgeKind::Geometric) {
                return false;
            }
            if !g.predecessors(v).all(|u| covered.contains(u)) {
                return false;
            }
            covered.insert(v);
        }
    }
    covered.count_ones(..) == n
}

#[cfg(test)]
mod tests {
    use super::*;
    use EdgeKind::Geometric as G;

    #[test]
    fn chain_traversal() {
        let g = Dag::from_edges(3, [(0, 1, G), (1, 2, G)]);
        assert_eq!(greedy_traversals(&g, &FixedBitSet::with_capacity(3)), vec![vec![0, 1, 2]]);
    }

    #[test]
    fn traversal_does_not_stop_early() {
        // 1 -> 3, 2 -> 3 is absent here: 3 depends only on 1, then 6 on 3.
        // Nodes: 0:"1" 1:"2" 2:"3" 3:"6"; 2 must extend to 3 once 1 is covered.
        let g = Dag::from_edges(4, [(0, 2, G), (1, 3, G), (2, 3, G)]);
        let mut covered = FixedBitSet::with_capacity(4);
        covered.insert(1);
        let t = greedy_traversals(&g, &covered);
        assert!(t.contains(&vec![0, 2, 3]));
        assert!(!t.contains(&vec![0, 2]));
    }

    #[test]
    fn all_covered_gives_nothing() {
        let g = Dag::from_edges(2, [(0, 1, G)]);
        let mut covered = FixedBitSet::with_capacity(2);
        covered.insert_range(..);
        assert!(greedy_traversals(&g, &covered).is_empty());
    }

    #[test]
    fn collision_edges_are_not_walked() {
        let g = Dag::from_edges(2, [(0, 1, EdgeKind::Collision)]);
        assert_eq!(greedy_traversals(&g, &FixedBitSet::with_capacity(2)), vec![vec![0]]);
    }

    #[test]
    fn quotient_keeps_collision_kind() {
        let g = Dag::from_edges(4, [(0, 2, G), (1, 3, EdgeKind::Collision)]);
        let f = FlatOppGraph::from_paths(&g, vec![vec![0, 1], vec![2, 3]]);
        assert_eq!(f.dag.kind(0, 1), Some(EdgeKind::Collision));
    }
}
