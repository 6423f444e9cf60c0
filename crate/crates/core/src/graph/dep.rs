use std::collections::VecDeque;

use crate::error::{OppError, Result};
use crate::geometry::element::elements_within;
use crate::geometry::{nozzle_collides, Layer, LayerElement, NozzleModel};
use crate::graph::dag::{transitive_reduce, Dag, EdgeKind};
use crate::scalar::Real;

/// Dependency graph over sliced elements; node `i` is the element with id `i`.
#[derive(Debug, Clone, PartialEq)]
pub struct DepGraph<T> {
    pub dag: Dag,
    pub elements: Vec<LayerElement<T>>,
}

impl<T: Real> DepGraph<T> {
    pub fn node_count(&self) -> usize {
        self.elements.len()
    }

    pub fn collision_edge_count(&self) -> usize {
        self.dag.edges().filter(|&(_, _, k)| k == EdgeKind::Collision).count()
    }

    /// Contracts stackable chains; a chain never mixes segments and contours.
    pub fn init_graph(&self) -> InitGraph {
        build_init_graph_with(&self.dag, |u, v| self.elements[u].kind == self.elements[v].kind)
    }
}

/// Geometric edge `a -> b` for every element pair on consecutive layers closer than `path_width`.
pub fn build_dep_graph<T: Real>(layers: &[Layer<T>], path_width: T) -> DepGraph<T> {
    let elements: Vec<LayerElement<T>> = layers.iter().flat_map(|l| l.elements.iter().cloned()).collect();
    debug_assert!(elements.iter().enumerate().all(|(i, e)| e.id == i));
    let mut dag = Dag::new(elements.len());
    for w in layers.windows(2) {
        for a in &w[0].elements {
            for b in &w[1].elements {
                if elements_within(a, b, path_width) {
                    dag.add_edge(a.id, b.id, EdgeKind::Geometric);
                }
            }
        }
    }
    DepGraph { dag, elements }
}

/// Adds `x -> y` whenever printing `x` after `y` would hit `y`, then re-reduces.
pub fn add_collision_edges<T: Real>(
    g: &DepGraph<T>,
    nozzle: &NozzleModel<T>,
    path_width: T,
    layer_thickness: T,
) -> Result<DepGraph<T>> {
    let n = g.node_count();
    let mut dag = g.dag.clone();
    let mut reach = dag.reachability()?;
    for x in 0..n {
        for y in 0..n {
            if x == y || reach[x].contains(y) {
                continue;
            }
            if !nozzle_collides(&g.elements[x], &g.elements[y], nozzle, path_width, layer_thickness) {
                continue;
            }
            if reach[y].contains(x) {
                let mut cycle = path_between(&dag, y, x);
                cycle.push(y);
                return Err(OppError::CollisionCycle(cycle));
            }
            dag.add_edge(x, y, EdgeKind::Collision);
            let mut gained = reach[y].clone();
            gained.insert(y);
            for u in 0..n {
                if u == x || reach[u].contains(x) {
                    reach[u].union_with(&gained);
                }
            }
        }
    }
    Ok(DepGraph { dag: transitive_reduce(&dag)?, elements: g.elements.clone() })
}

/// Shortest directed path `from -> .. -> to` (both ends included), empty if unreachable.
fn path_between(g: &Dag, from: usize, to: usize) -> Vec<usize> {
    let mut prev = vec![usize::MAX; g.node_count()];
    let mut queue = VecDeque::from([from]);
    prev[from] = from;
    while let Some(u) = queue.pop_front() {
        if u == to {
            let mut path = vec![to];
            let mut c = to;
            while c != from {
                c = prev[c];
                path.push(c);
            }
            path.reverse();
            return path;
        }
        for v in g.successors(u) {
            if prev[v] == usize::MAX {
                prev[v] = u;
                queue.push_back(v);
            }
        }
    }
    Vec::new()
}

/// Chains of stackable elements (sub-OPPs) and the edges between them.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct InitGraph {
    /// Element ids of each node, bottom to top.
    pub nodes: Vec<Vec<usize>>,
    pub dag: Dag,
}

impl InitGraph {
    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    /// Node containing each element.
    pub fn node_of(&self) -> Vec<usize> {
        let n = self.nodes.iter().map(|c| c.len()).sum();
        let mut of = vec![usize::MAX; n];
        for (i, chain) in self.nodes.iter().enumerate() {
            for &e in chain {
                if e >= of.len() {
                    of.resize(e + 1, usize::MAX);
                }
                of[e] = i;
            }
        }
        of
    }

    /// Expands a cover of this graph into a cover of the element graph.
    pub fn expand_paths(&self, paths: &[Vec<usize>]) -> Vec<Vec<usize>> {
        paths.iter().map(|p| p.iter().flat_map(|&i| self.nodes[i].iter().copied()).collect()).collect()
    }
}

/// Contracts every geometric edge `u -> v` with `out_degree(u) == 1` and `in_degree(v) == 1`.
pub fn build_init_graph(g: &Dag) -> InitGraph {
    build_init_graph_with(g, |_, _| true)
}

/// As [`build_init_graph`], contracting only edges also accepted by `stackable`.
pub fn build_init_graph_with(g: &Dag, mut stackable: impl FnMut(usize, usize) -> bool) -> InitGraph {
    let n = g.node_count();
    let mut next = vec![usize::MAX; n];
    let mut has_prev = vec![false; n];
    for (u, v, k) in g.edges() {
        if k == EdgeKind::Geometric && g.out_degree(u) == 1 && g.in_degree(v) == 1 && stackable(u, v) {
            next[u] = v;
            has_prev[v] = true;
        }
    }
    let mut nodes = Vec::new();
    let mut node_of = vec![usize::MAX; n];
    for start in (0..n).filter(|&u| !has_prev[u]) {
        let mut chain = vec![start];
        let mut c = start;
        while next[c] != usize::MAX {
            c = next[c];
            chain.push(c);
        }
        for &e in &chain {
            node_of[e] = nodes.len();
        }
        nodes.push(chain);
    }
    let mut dag = Dag::new(nodes.len());
    for (u, v, k) in g.edges() {
        if next[u] != v {
            dag.add_edge(node_of[u], node_of[v], k);
        }
    }
    InitGraph { nodes, dag }
}
