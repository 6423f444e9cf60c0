//! Curved-layer merging of flat patches.

pub mod merge;
pub mod patch;
pub mod region;
pub mod stack;

pub use merge::{curve_all, pairwise_merge, select_best, CurvedOppGraph};
pub use patch::{
    curved_layers, curving_merge, stacking_merge, MergeContext, OppPatch, PatchLayer, PatchType, SubOpp, SubOppLayers,
};
pub use region::{
    combine_target_areas, curved_layer_feasibility, solve_columns, FlatArea, Region, RegionShape, TargetFlatAreas,
};
pub use stack::{CurvedLayerStack, StackViolation};
