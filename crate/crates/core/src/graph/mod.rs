//! Dependency graphs over sliced elements and their chain contraction.

pub mod dag;
pub mod dep;
pub mod text;

pub use dag::{has_multiple_paths, is_valid_topological_order, transitive_reduce, Dag, EdgeKind};
pub use dep::{add_collision_edges, build_dep_graph, build_init_graph, build_init_graph_with, DepGraph, InitGraph};
