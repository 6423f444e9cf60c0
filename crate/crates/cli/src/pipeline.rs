use onepath_core::geometry::point::resample_loop;
use onepath_core::geometry::ModelMode;
use onepath_core::plan::{plan_model, PlanOptions, PlanOutput};
use onepath_core::toolpath::{detect_low_slope_regions, LOW_SLOPE_THRESHOLD_DEG};
use onepath_core::{PrinterConfig, SurfaceModel};

use crate::error::{CliError, Result};
use crate::model_io::mode_name;
use crate::report::{LowSlopeEntry, PlanReport, TimingsMs};

#[derive(Debug, Clone, Default)]
pub struct RunOptions {
    /// Expected model kind; a mismatch is an error rather than a silent switch.
    pub mode: Option<ModelMode>,
    pub plan: PlanOptions,
}

#[derive(Debug, Clone)]
pub struct PipelineRun {
    pub output: PlanOutput<f64>,
    pub report: PlanReport,
}

pub fn run_pipeline(name: &str, model: &SurfaceModel, cfg: &PrinterConfig, opts: &RunOptions) -> Result<PipelineRun> {
    if let Some(want) = opts.mode {
        if want != model.mode() {
            return Err(CliError::Mode { found: mode_name(model.mode()), requested: mode_name(want) });
        }
    }
    let output = plan_model(model, cfg, &opts.plan)?;
    let report = build_report(name, &output, cfg);
    Ok(PipelineRun { output, report })
}

/// Runs of stacked contours inside each patch whose matching edges are nearly flat.
fn low_slope_regions(out: &PlanOutput<f64>, cfg: &PrinterConfig) -> Vec<LowSlopeEntry> {
    let ctx = out.context(cfg);
    let m = cfg.contour_samples.max(3);
    let mut found = Vec::new();
    for (opp, patch) in out.curved.patches.iter().enumerate() {
        let layers = patch.layers(&ctx);
        let mut start = 0;
        while start < layers.len() {
            let end = (start..layers.len()).find(|&i| !layers[i].closed).unwrap_or(layers.len());
            if end - start >= 2 {
                let contours: Vec<_> = layers[start..end].iter().map(|l| resample_loop(&l.points, m)).collect();
                found.extend(
                    detect_low_slope_regions(&contours, LOW_SLOPE_THRESHOLD_DEG).into_iter().map(|r| LowSlopeEntry {
                        opp,
                        first_layer: start + r.first,
                        last_layer: start + r.last,
                    }),
                );
            }
            start = end + 1;
        }
    }
    found
}

pub fn build_report(name: &str, out: &PlanOutput<f64>, cfg: &PrinterConfig) -> PlanReport {
    let stats = &out.plan.stats;
    PlanReport {
        model: name.to_string(),
        mode: mode_name(out.model.mode()),
        elements: out.dep.node_count(),
        layers: out.layers.len(),
        init_nodes: out.init.node_count(),
        collision_edges: out.dep.collision_edge_count(),
        flat_opps: out.flat_opp_count(),
        curved_opps: out.curved_opp_count(),
        curving: out.curving,
        transfer_count: stats.transfer_count,
        total_path_length_mm: stats.total_extruded_length,
        transfer_length_mm: stats.transfer_length,
        estimated_time_s: stats.estimated_time,
        support_feasible: out.support.feasible,
        support_regions: out.support.support_regions.len(),
        low_slope_regions: low_slope_regions(out, cfg),
        spacing_max_displacement_mm: out.spacing.max_displacement,
        spacing_violations: out.spacing.violations,
        timings_ms: Some(TimingsMs::from(&out.timings)),
    }
}
