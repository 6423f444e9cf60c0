use std::cmp::Reverse;
use std::collections::{BTreeMap, BTreeSet, BinaryHeap};

use fixedbitset::FixedBitSet;

use crate::error::{OppError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum EdgeKind {
    /// Adjacent-layer support dependency.
    Geometric,
    /// Ordering forced by the nozzle hitting taller printed material.
    Collision,
}

impl EdgeKind {
    pub fn as_str(self) -> &'static str {
        match self {
            EdgeKind::Geometric => "geometric",
            EdgeKind::Collision => "collision",
        }
    }
}

/// Directed graph over `0..n` with typed edges and deterministic iteration order.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Dag {
    succ: Vec<BTreeSet<usize>>,
    pred: Vec<BTreeSet<usize>>,
    kinds: BTreeMap<(usize, usize), EdgeKind>,
}

impl Dag {
    pub fn new(n: usize) -> Self {
        Self { succ: vec![BTreeSet::new(); n], pred: vec![BTreeSet::new(); n], kinds: BTreeMap::new() }
    }

    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (usize, usize, EdgeKind)>) -> Self {
        let mut g = Self::new(n);
        for (u, v, k) in edges {
            g.add_edge(u, v, k);
        }
        g
    }

    pub fn node_count(&self) -> usize {
        self.succ.len()
    }

    pub fn edge_count(&self) -> usize {
        self.kinds.len()
    }

    /// Adds `u -> v`. A geometric edge wins over a collision edge on the same pair.
    pub fn add_edge(&mut self, u: usize, v: usize, kind: EdgeKind) {
        assert!(u < self.node_count() && v < self.node_count() && u != v, "bad edge {u}->{v}");
        self.succ[u].insert(v);
        self.pred[v].insert(u);
        self.kinds.entry((u, v)).and_modify(|k| *k = (*k).min(kind)).or_insert(kind);
    }

    pub fn remove_edge(&mut self, u: usize, v: usize) -> Option<EdgeKind> {
        self.succ[u].remove(&v);
        self.pred[v].remove(&u);
        self.kinds.remove(&(u, v))
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.kinds.contains_key(&(u, v))
    }

    pub fn kind(&self, u: usize, v: usize) -> Option<EdgeKind> {
        self.kinds.get(&(u, v)).copied()
    }

    /// Edges sorted by `(from, to)`.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, EdgeKind)> + '_ {
        self.kinds.iter().map(|(&(u, v), &k)| (u, v, k))
    }

    pub fn successors(&self, u: usize) -> impl DoubleEndedIterator<Item = usize> + '_ {
        self.succ[u].iter().copied()
    }

    pub fn predecessors(&self, u: usize) -> impl DoubleEndedIterator<Item = usize> + '_ {
        self.pred[u].iter().copied()
    }

    pub fn out_degree(&self, u: usize) -> usize {
        self.succ[u].len()
    }

    pub fn in_degree(&self, u: usize) -> usize {
        self.pred[u].len()
    }

    /// Kahn's algorithm, smallest ready id first.
    pub fn topological_order(&self) -> Result<Vec<usize>> {
        let n = self.node_count();
        let mut indeg: Vec<usize> = (0..n).map(|u| self.in_degree(u)).collect();
        let mut ready: BinaryHeap<Reverse<usize>> = (0..n).filter(|&u| indeg[u] == 0).map(Reverse).collect();
        let mut order = Vec::with_capacity(n);
        while let Some(Reverse(u)) = ready.pop() {
            order.push(u);
            for v in self.successors(u) {
                indeg[v] -= 1;
                if indeg[v] == 0 {
                    ready.push(Reverse(v));
                }
            }
        }
        if order.len() == n {
            Ok(order)
        } else {
            Err(OppError::Cyclic)
        }
    }

    pub fn is_acyclic(&self) -> bool {
        self.topological_order().is_ok()
    }

    /// `reach[u]` holds every node reachable from `u` by a non-empty path.
    pub fn reachability(&self) -> Result<Vec<FixedBitSet>> {
        let n = self.node_count();
        let order = self.topological_order()?;
        let mut reach = vec![FixedBitSet::with_capacity(n); n];
        for &u in order.iter().rev() {
            let mut r = FixedBitSet::with_capacity(n);
            for v in self.successors(u) {
                r.insert(v);
                r.union_with(&reach[v]);
            }
            reach[u] = r;
        }
        Ok(reach)
    }

    /// Subgraph induced by keeping only the edges accepted by `keep`.
    pub fn filter_edges(&self, mut keep: impl FnMut(usize, usize, EdgeKind) -> bool) -> Dag {
        Dag::from_edges(self.node_count(), self.edges().filter(|&(u, v, k)| keep(u, v, k)))
    }
}

/// Unique transitive reduction of a DAG; kept edges retain their kind.
pub fn transitive_reduce(g: &Dag) -> Result<Dag> {
    let reach = g.reachability()?;
    Ok(g.filter_edges(|u, v, _| !g.successors(u).any(|w| w != v && reach[w].contains(v))))
}

/// Whether at least two distinct directed paths lead from `u` to `v` (counts saturate at 2).
pub fn has_multiple_paths(g: &Dag, u: usize, v: usize) -> bool {
    let Ok(order) = g.topological_order() else {
        return true;
    };
    let mut count = vec![0u8; g.node_count()];
    count[v] = 1;
    for &x in order.iter().rev() {
        if x == v {
            continue;
        }
        let c: u8 = g.successors(x).map(|y| count[y]).fold(0, |a, b| a.saturating_add(b).min(2));
        count[x] = c;
        if x == u {
            break;
        }
    }
    u != v && count[u] >= 2
}

/// Whether `order` is a permutation of the nodes that puts every edge tail before its head.
pub fn is_valid_topological_order(g: &Dag, order: &[usize]) -> bool {
    let n = g.node_count();
    if order.len() != n {
        return false;
    }
    let mut pos = vec![usize::MAX; n];
    for (i, &u) in order.iter().enumerate() {
        if u >= n || pos[u] != usize::MAX {
            return false;
        }
        pos[u] = i;
    }
    g.edges().all(|(u, v, _)| pos[u] < pos[v])
}
