//! Decomposition of shell models into one-path patches and continuous toolpath planning.
//!
//! Geometry and toolpath types are generic over [`Real`] (`f32` or `f64`); the aliases
//! at the crate root fix the scalar to `f64`.

#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod curved;
pub mod error;
pub mod fixtures;
pub mod flat;
pub mod geometry;
pub mod graph;
pub mod plan;
pub mod scalar;
pub mod toolpath;

pub use error::{OppError, Result};
pub use scalar::Real;

pub type Point = geometry::Point<f64>;
pub type LayerElement = geometry::LayerElement<f64>;
pub type Layer = geometry::Layer<f64>;
pub type SurfaceModel = geometry::SurfaceModel<f64>;
pub type Profile = geometry::Profile<f64>;
pub type TriMesh = geometry::TriMesh<f64>;
pub type NozzleModel = geometry::NozzleModel<f64>;
pub type SlopeLimits = geometry::SlopeLimits<f64>;
pub type PrinterConfig = geometry::PrinterConfig<f64>;
pub type CurvedLayerStack = curved::CurvedLayerStack<f64>;
pub type OppPatch = curved::OppPatch<f64>;
pub type CurvedOppGraph = curved::CurvedOppGraph<f64>;
pub type ToolpathVertex = toolpath::ToolpathVertex<f64>;
pub type Toolpath = toolpath::Toolpath<f64>;
pub type PrintPlan = toolpath::PrintPlan<f64>;
