use std::collections::HashMap;

use crate::error::{OppError, Result};
use crate::graph::{Dag, EdgeKind};

/// Largest graph the exhaustive oracle accepts.
pub const ORACLE_NODE_LIMIT: usize = 16;

/// Exact precedence-constrained minimum path cover by exhaustive search.
///
/// Memoised depth-first search over covered sets; from each state every
/// precedence-feasible path (any length, geometric edges only) is tried.
/// Returns the minimum path count and one optimal cover in print order.
pub fn exact_min_path_cover(g: &Dag) -> Result<(usize, Vec<Vec<usize>>)> {
    let n = g.node_count();
    if n > ORACLE_NODE_LIMIT {
        return Err(OppError::OracleTooLarge { nodes: n, limit: ORACLE_NODE_LIMIT });
    }
    if !g.is_acyclic() {
        return Err(OppError::Cyclic);
    }
    let preds: Vec<u32> = (0..n).map(|v| g.predecessors(v).fold(0u32, |m, u| m | (1 << u))).collect();
    let geo: Vec<Vec<usize>> =
        (0..n).map(|u| g.successors(u).filter(|&v| g.kind(u, v) == Some(EdgeKind::Geometric)).collect()).collect();
    let full: u32 = if n == 32 { u32::MAX } else { (1u32 << n) - 1 };
    let mut solver = Solver { preds, geo, full, memo: HashMap::new() };
    let count = solver.solve(0);
    let mut cover = Vec::new();
    let mut mask = 0u32;
    while mask != full {
        let path = solver.memo[&mask].1.clone();
        for &v in &path {
            mask |= 1 << v;
        }
        cover.push(path);
    }
    Ok((count, cover))
}

struct Solver {
    preds: Vec<u32>,
    geo: Vec<Vec<usize>>,
    full: u32,
    memo: HashMap<u32, (usize, Vec<usize>)>,
}

impl Solver {
    fn solve(&mut self, covered: u32) -> usize {
        if covered == self.full {
            return 0;
        }
        if let Some((c, _)) = self.memo.get(&covered) {
            return *c;
        }
        let mut paths = Vec::new();
        for s in 0..self.preds.len() {
            if covered & (1 << s) == 0 && self.preds[s] & !covered == 0 {
                self.paths_from(covered, vec![s], &mut paths);
            }
        }
        let mut best = (usize::MAX, Vec::new());
        for p in paths {
            let mask = p.iter().fold(covered, |m, &v| m | (1 << v));
            let c = 1 + self.solve(mask);
            if c < best.0 {
                best = (c, p);
            }
        }
        let c = best.0;
        self.memo.insert(covered, best);
        c
    }

    /// Every feasible path starting with `path`, including `path` itself.
    fn paths_from(&self, covered: u32, path: Vec<usize>, out: &mut Vec<Vec<usize>>) {
        let in_path = path.iter().fold(covered, |m, &v| m | (1 << v));
        let last = path[path.len() - 1];
        for &v in &self.geo[last] {
            if in_path & (1 << v) == 0 && self.preds[v] & !in_path == 0 {
                let mut p = path.clone();
                p.push(v);
                self.paths_from(covered, p, out);
            }
        }
        out.push(path);
    }
}
