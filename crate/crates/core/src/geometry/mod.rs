//! Model input, slicing, element proximity and the nozzle model.

pub mod element;
pub mod model;
pub mod nozzle;
pub mod point;
pub mod printer;
pub mod slice;
pub mod support;

pub use element::{element_distance, ElementId, ElementKind, LayerElement};
pub use model::{ModelMode, Profile, ProfilePolygon, SurfaceModel, TriMesh};
pub use nozzle::{compute_slope_limits, nozzle_collides, NozzleModel, SlopeLimits};
pub use point::Point;
pub use printer::PrinterConfig;
pub use slice::{slice_model, Layer};
pub use support::{support_feasible, SupportRegion, SupportReport};
