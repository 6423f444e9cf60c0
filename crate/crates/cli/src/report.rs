//! Plan statistics in the column naming used for OPP-count comparisons.

use std::time::Duration;

use onepath_core::plan::StageTimings;
use serde::Serialize;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TimingsMs {
    pub slice: f64,
    pub dep_graph: f64,
    pub init_graph: f64,
    pub flat_merge: f64,
    pub curved_merge: f64,
    pub toolpath: f64,
    pub total: f64,
}

impl From<&StageTimings> for TimingsMs {
    fn from(t: &StageTimings) -> Self {
        let ms = |d: Duration| d.as_secs_f64() * 1e3;
        Self {
            slice: ms(t.slice),
            dep_graph: ms(t.dep_graph),
            init_graph: ms(t.init_graph),
            flat_merge: ms(t.flat_merge),
            curved_merge: ms(t.curved_merge),
            toolpath: ms(t.toolpath),
            total: ms(t.total()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LowSlopeEntry {
    pub opp: usize,
    pub first_layer: usize,
    pub last_layer: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PlanReport {
    pub model: String,
    pub mode: &'static str,
    pub elements: usize,
    pub layers: usize,
    pub init_nodes: usize,
    pub collision_edges: usize,
    #[serde(rename = "#OF")]
    pub flat_opps: usize,
    #[serde(rename = "#OO")]
    pub curved_opps: usize,
    pub curving: bool,
    pub transfer_count: usize,
    pub total_path_length_mm: f64,
    pub transfer_length_mm: f64,
    pub estimated_time_s: f64,
    pub support_feasible: bool,
    pub support_regions: usize,
    pub low_slope_regions: Vec<LowSlopeEntry>,
    pub spacing_max_displacement_mm: f64,
    pub spacing_violations: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timings_ms: Option<TimingsMs>,
}

impl PlanReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report fields are plain data")
    }

    /// The report without wall-clock fields, for reproducibility checks.
    pub fn without_timings(&self) -> Self {
        Self { timings_ms: None, ..self.clone() }
    }
}
