//! End-to-end planning: slicing through toolpaths, keeping every intermediate stage.

use std::time::{Duration, Instant};

use crate::curved::{curve_all, select_best, CurvedOppGraph, MergeContext};
use crate::error::{OppError, Result};
use crate::flat::{beam_search_path_covers, FlatOppGraph};
use crate::geometry::{slice_model, support_feasible, Layer, ModelMode, PrinterConfig, SupportReport, SurfaceModel};
use crate::graph::{add_collision_edges, build_dep_graph, DepGraph, InitGraph};
use crate::scalar::Real;
use crate::toolpath::{optimize_spacing, plan_print, PrintPlan, SpacingReport};

#[derive(Debug, Clone, PartialEq)]
pub struct PlanOptions {
    /// Overrides the mode default (curving on for profiles, off for meshes).
    pub curving: Option<bool>,
    pub collisions: bool,
    pub spacing_iterations: usize,
    /// Candidate orientations tried for support feasibility; 0 keeps the input pose.
    pub orientations: usize,
}

impl Default for PlanOptions {
    fn default() -> Self {
        Self { curving: None, collisions: true, spacing_iterations: 10, orientations: 0 }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct StageTimings {
    pub slice: Duration,
    pub dep_graph: Duration,
    pub init_graph: Duration,
    pub flat_merge: Duration,
    pub curved_merge: Duration,
    pub toolpath: Duration,
}

impl StageTimings {
    pub fn total(&self) -> Duration {
        self.slice + self.dep_graph + self.init_graph + self.flat_merge + self.curved_merge + self.toolpath
    }
}

#[derive(Debug, Clone)]
pub struct PlanOutput<T> {
    pub model: SurfaceModel<T>,
    pub layers: Vec<Layer<T>>,
    pub dep: DepGraph<T>,
    pub init: InitGraph,
    pub flat: Vec<FlatOppGraph>,
    pub curved: CurvedOppGraph<T>,
    pub plan: PrintPlan<T>,
    pub spacing: SpacingReport<T>,
    pub support: SupportReport<T>,
    pub curving: bool,
    pub timings: StageTimings,
}

impl<T: Real> PlanOutput<T> {
    /// Patch count after flat merging.
    pub fn flat_opp_count(&self) -> usize {
        self.flat.first().map_or(0, FlatOppGraph::node_count)
    }

    pub fn curved_opp_count(&self) -> usize {
        self.curved.node_count()
    }

    /// Merge context over this output's elements, for re-deriving patch layers.
    pub fn context<'a>(&'a self, cfg: &'a PrinterConfig<T>) -> MergeContext<'a, T> {
        MergeContext::new(&self.dep.elements, &self.init, cfg, self.curving)
    }
}

/// Chooses the first support-feasible orientation among `count` candidates.
fn orient<T: Real>(model: &SurfaceModel<T>, cfg: &PrinterConfig<T>, count: usize) -> Result<SurfaceModel<T>> {
    if count == 0 {
        return Ok(model.clone());
    }
    let slope = cfg.slope_limits();
    for cand in model.candidate_orientations(count)? {
        if support_feasible(&cand, &slope, cfg.flat_layer_thickness, cfg.path_width)?.feasible {
            return Ok(cand);
        }
    }
    Ok(model.clone())
}

/// Runs every stage on `model`.
pub fn plan_model<T: Real>(
    model: &SurfaceModel<T>,
    cfg: &PrinterConfig<T>,
    opts: &PlanOptions,
) -> Result<PlanOutput<T>> {
    cfg.validate()?;
    if opts.curving == Some(true) && model.mode() == ModelMode::Mesh3d {
        return Err(OppError::InvalidConfig(vec!["curving is only available for profile models".into()]));
    }
    let curving = opts.curving.unwrap_or(model.mode() == ModelMode::Profile2d);
    let mut timings = StageTimings::default();

    let t = Instant::now();
    let model = orient(model, cfg, opts.orientations)?;
    let support = support_feasible(&model, &cfg.slope_limits(), cfg.flat_layer_thickness, cfg.path_width)?;
    let layers = slice_model(&model, cfg.flat_layer_thickness)?;
    timings.slice = t.elapsed();

    let t = Instant::now();
    let geometric = build_dep_graph(&layers, cfg.path_width);
    let dep = if opts.collisions {
        add_collision_edges(&geometric, &cfg.nozzle, cfg.path_width, cfg.flat_layer_thickness)?
    } else {
        geometric.clone()
    };
    timings.dep_graph = t.elapsed();

    let t = Instant::now();
    let init = dep.init_graph();
    let restack = (dep.collision_edge_count() > 0).then(|| {
        let free = geometric.init_graph();
        let mut chain = vec![0; geometric.node_count()];
        for (i, n) in free.nodes.iter().enumerate() {
            for &e in n {
                chain[e] = i;
            }
        }
        chain
    });
    timings.init_graph = t.elapsed();

    let t = Instant::now();
    let flat = beam_search_path_covers(&init.dag, cfg.beam_width);
    timings.flat_merge = t.elapsed();

    let t = Instant::now();
    let mut ctx = MergeContext::new(&dep.elements, &init, cfg, curving);
    ctx.restack_chains = restack;
    let curved = select_best(curve_all(&flat, &ctx, cfg.rng_seed))
        .unwrap_or_else(|| CurvedOppGraph { patches: Vec::new(), dag: init.dag.clone() });
    timings.curved_merge = t.elapsed();

    let t = Instant::now();
    let raw = plan_print(&curved, &ctx);
    let (plan, spacing) = optimize_spacing(&raw, cfg, cfg.flat_layer_thickness, opts.spacing_iterations);
    timings.toolpath = t.elapsed();
    drop(ctx);

    Ok(PlanOutput { model, layers, dep, init, flat, curved, plan, spacing, support, curving, timings })
}
