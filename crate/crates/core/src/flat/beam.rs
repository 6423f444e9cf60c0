use std::collections::{BTreeSet, HashMap};

use fixedbitset::FixedBitSet;

use crate::flat::{greedy_traversals, FlatOppGraph};
use crate::graph::Dag;

/// Upper bound on the number of distinct optimal covers returned.
pub const MAX_RETAINED_COVERS: usize = 64;

/// Parent chains explored while collecting optimal covers.
const MAX_SEQUENCES: usize = 20_000;

struct Candidate {
    covered: FixedBitSet,
    ids: Vec<usize>,
    last: Vec<usize>,
    parents: Vec<usize>,
}

/// Level-by-level beam search over partial path covers.
///
/// Each level appends one maximal traversal to every kept candidate. Candidates with
/// the same covered set and the same last path share one solution node. The search
/// stops at the first level containing complete covers and returns every distinct
/// path partition reachable from them (at most [`MAX_RETAINED_COVERS`]).
pub fn beam_search_path_covers(g: &Dag, width: usize) -> Vec<FlatOppGraph> {
    let n = g.node_count();
    let width = width.max(1);
    if n == 0 {
        return vec![FlatOppGraph::from_paths(g, Vec::new())];
    }
    let mut levels: Vec<Vec<Candidate>> = vec![vec![Candidate {
        covered: FixedBitSet::with_capacity(n),
        ids: Vec::new(),
        last: Vec::new(),
        parents: Vec::new(),
    }]];
    loop {
        let current = levels.last().expect("root level");
        let mut next: Vec<Candidate> = Vec::new();
        let mut index: HashMap<(FixedBitSet, Vec<usize>), usize> = HashMap::new();
        for (ci, cand) in current.iter().enumerate() {
            for path in greedy_traversals(g, &cand.covered) {
                let mut covered = cand.covered.clone();
                for &v in &path {
                    covered.insert(v);
                }
                let key = (covered, path);
                if let Some(&k) = index.get(&key) {
                    next[k].parents.push(ci);
                    continue;
                }
                let (covered, last) = key.clone();
                index.insert(key, next.len());
                next.push(Candidate { ids: covered.ones().collect(), covered, last, parents: vec![ci] });
            }
        }
        if next.is_empty() {
            // Unreachable for a DAG: some node is always ready.
            return Vec::new();
        }
        next.sort_by(|a, b| {
            b.ids.len().cmp(&a.ids.len()).then_with(|| a.ids.cmp(&b.ids)).then_with(|| a.last.cmp(&b.last))
        });
        next.truncate(width);
        let done = next[0].ids.len() == n;
        levels.push(next);
        if done {
            break;
        }
    }
    collect_covers(g, &levels)
}

fn collect_covers(g: &Dag, levels: &[Vec<Candidate>]) -> Vec<FlatOppGraph> {
    let n = g.node_count();
    let depth = levels.len() - 1;
    let mut seen: BTreeSet<Vec<Vec<usize>>> = BTreeSet::new();
    let mut out = Vec::new();
    let mut budget = MAX_SEQUENCES;
    for (ci, cand) in levels[depth].iter().enumerate() {
        if cand.ids.len() != n {
            break;
        }
        let mut stack: Vec<Vec<usize>> = Vec::new();
        walk(levels, depth, ci, &mut stack, &mut |seq| {
            let paths: Vec<Vec<usize>> = seq.iter().rev().cloned().collect();
            let mut key = paths.clone();
            key.sort();
            if seen.insert(key) {
                out.push(FlatOppGraph::from_paths(g, paths));
            }
            budget = budget.saturating_sub(1);
            out.len() < MAX_RETAINED_COVERS && budget > 0
        });
        if out.len() >= MAX_RETAINED_COVERS || budget == 0 {
            break;
        }
    }
    out
}

/// Depth-first over parent links; `emit` returns whether to continue.
fn walk(
    levels: &[Vec<Candidate>],
    level: usize,
    ci: usize,
    stack: &mut Vec<Vec<usize>>,
    emit: &mut dyn FnMut(&[Vec<usize>]) -> bool,
) -> bool {
    if level == 0 {
        return emit(stack);
    }
    let cand = &levels[level][ci];
    stack.push(cand.last.clone());
    for &p in &cand.parents {
        if !walk(levels, level - 1, p, stack, emit) {
            stack.pop();
            return false;
        }
    }
    stack.pop();
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::flat::{exact_min_path_cover, is_valid_cover};
    use crate::graph::EdgeKind::Geometric as G;

    #[test]
    fn chain_one_path() {
        let g = Dag::from_edges(4, [(0, 1, G), (1, 2, G), (2, 3, G)]);
        let covers = beam_search_path_covers(&g, 10);
        assert_eq!(covers.len(), 1);
        assert_eq!(covers[0].paths, vec![vec![0, 1, 2, 3]]);
    }

    #[test]
    fn diamond_two_paths() {
        let g = Dag::from_edges(4, [(0, 1, G), (0, 2, G), (1, 3, G), (2, 3, G)]);
        let covers = beam_search_path_covers(&g, 10_000);
        assert!(!covers.is_empty());
        for c in &covers {
            assert_eq!(c.node_count(), 2);
            assert!(is_valid_cover(&g, &c.paths));
            assert!(c.dag.is_acyclic());
        }
        let partitions: Vec<_> = covers.iter().map(|c| c.partition()).collect();
        // The apex needs both arms printed, so it can only continue the second arm.
        assert_eq!(partitions, vec![vec![vec![0, 2], vec![1, 3]], vec![vec![0, 1], vec![2, 3]]]);
        assert_eq!(exact_min_path_cover(&g).unwrap().0, 2);
    }

    #[test]
    fn empty_graph() {
        let covers = beam_search_path_covers(&Dag::new(0), 5);
        assert_eq!(covers.len(), 1);
        assert_eq!(covers[0].node_count(), 0);
    }

    #[test]
    fn width_one_still_valid() {
        let g = Dag::from_edges(6, [(0, 2, G), (1, 2, G), (2, 3, G), (2, 4, G), (3, 5, G), (4, 5, G)]);
        let covers = beam_search_path_covers(&g, 1);
        assert!(!covers.is_empty());
        assert!(covers.iter().all(|c| is_valid_cover(&g, &c.paths)));
    }
}
