//! Continuous deposition paths for patches, their print order, and transfer moves.

pub mod spacing;
pub mod spiral;
pub mod zigzag;

use crate::curved::{CurvedOppGraph, MergeContext, PatchLayer};
use crate::flat::beam_search_path_covers;
use crate::geometry::point::polyline_length;
use crate::geometry::{Point, PrinterConfig};
use crate::graph::is_valid_topological_order;
use crate::scalar::Real;

pub use spacing::{optimize_spacing, spacing_error, SpacingReport};
pub use spiral::{detect_low_slope_regions, spiral_connection_dp, spiralize_contours, LowSlopeRegion};
pub use zigzag::{inter_layer_connection, zigzag_connect, zigzag_entries};

/// Angle below which adjacent contours count as low-slope, in degrees.
pub const LOW_SLOPE_THRESHOLD_DEG: f64 = 20.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ToolpathVertex<T> {
    pub position: Point<T>,
    /// Whether the move into this vertex deposits material.
    pub extruding: bool,
    /// Zero on travel vertices.
    pub local_thickness: T,
    /// Layer of the owning toolpath; `None` on connectors and spiral turns.
    pub layer: Option<usize>,
}

impl<T: Real> ToolpathVertex<T> {
    pub fn extruding(position: Point<T>, local_thickness: T, layer: Option<usize>) -> Self {
        Self { position, extruding: true, local_thickness, layer }
    }

    pub fn travel(position: Point<T>) -> Self {
        Self { position, extruding: false, local_thickness: T::zero(), layer: None }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Toolpath<T> {
    pub opp_id: usize,
    pub vertices: Vec<ToolpathVertex<T>>,
}

impl<T: Real> Toolpath<T> {
    /// Length of the extruding moves.
    pub fn extruded_length(&self) -> T {
        self.vertices
            .windows(2)
            .filter(|w| w[1].extruding)
            .map(|w| w[0].position.dist(w[1].position))
            .fold(T::zero(), |a, b| a + b)
    }

    /// Largest distance between consecutive extruding vertices.
    pub fn max_gap(&self) -> T {
        self.vertices
            .windows(2)
            .filter(|w| w[1].extruding)
            .map(|w| w[0].position.dist(w[1].position))
            .fold(T::zero(), T::max)
    }

    pub fn max_z(&self) -> T {
        self.vertices.iter().map(|v| v.position.z).fold(T::neg_infinity(), T::max)
    }
}

/// Non-extruding move between two toolpaths: raise, travel, descend.
#[derive(Debug, Clone, PartialEq)]
pub struct Transfer<T> {
    pub from_opp: usize,
    pub to_opp: usize,
    pub moves: Vec<Point<T>>,
}

impl<T: Real> Transfer<T> {
    /// Length from the end of the previous toolpath through every move.
    pub fn length(&self, start: Point<T>) -> T {
        let mut pts = vec![start];
        pts.extend(&self.moves);
        polyline_length(&pts)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlanStats<T> {
    pub opp_count: usize,
    pub transfer_count: usize,
    pub total_extruded_length: T,
    pub transfer_length: T,
    pub estimated_time: T,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PrintPlan<T> {
    pub toolpaths: Vec<Toolpath<T>>,
    /// `transfers[i]` joins `toolpaths[i]` to `toolpaths[i + 1]`.
    pub transfers: Vec<Transfer<T>>,
    pub stats: PlanStats<T>,
}

impl<T: Real> PrintPlan<T> {
    pub fn order(&self) -> Vec<usize> {
        self.toolpaths.iter().map(|t| t.opp_id).collect()
    }

    /// Recomputes statistics after the vertices changed.
    pub fn refresh_stats(&mut self, speed: T) {
        self.stats = compute_stats(&self.toolpaths, &self.transfers, speed);
    }
}

/// One continuous path through every layer of a patch.
///
/// Runs of open layers are zig-zagged, runs of closed contours spiralized; runs are
/// joined by the inter-layer connection rule.
pub fn build_toolpath<T: Real>(opp_id: usize, layers: &[PatchLayer<T>], cfg: &PrinterConfig<T>) -> Toolpath<T> {
    let mut vertices: Vec<ToolpathVertex<T>> = Vec::new();
    let mut start = 0;
    while start < layers.len() {
        let closed = layers[start].closed;
        let end = (start..layers.len()).find(|&i| layers[i].closed != closed).unwrap_or(layers.len());
        let run = &layers[start..end];
        let mut part = if closed {
            let contours: Vec<Vec<Point<T>>> = run.iter().map(|l| l.points.clone()).collect();
            let th: Vec<T> = run.iter().map(|l| l.thickness[0]).collect();
            spiralize_contours(&contours, &th, cfg.contour_samples)
        } else {
            zigzag_connect(run, cfg, start)
        };
        if let (Some(last), false) = (vertices.last(), part.is_empty()) {
            let printed = &layers[start - 1];
            let th = printed.thickness.iter().copied().sum::<T>() / T::from_count(printed.thickness.len());
            let recent: Vec<Point<T>> = recent_layer_points(&vertices, printed);
            let conn = inter_layer_connection(
                last.position,
                part[0].position,
                &recent,
                th,
                part[0].local_thickness,
                cfg.connect_threshold,
                cfg.t_min,
            );
            let hop_layer = part[0].layer;
            vertices.extend(conn.into_iter().map(|mut v| {
                if v.position == part[0].position {
                    v.layer = hop_layer;
                }
                v
            }));
            part.remove(0);
        }
        vertices.extend(part);
        start = end;
    }
    Toolpath { opp_id, vertices }
}

/// Trailing vertices that trace the last printed layer, in print order.
fn recent_layer_points<T: Real>(vertices: &[ToolpathVertex<T>], layer: &PatchLayer<T>) -> Vec<Point<T>> {
    if layer.closed {
        return vec![vertices[vertices.len() - 1].position];
    }
    let tail = vertices.iter().rev().take_while(|v| v.layer.is_some() && v.layer == vertices[vertices.len() - 1].layer);
    let mut pts: Vec<Point<T>> = tail.map(|v| v.position).collect();
    pts.reverse();
    pts
}

/// Print order of the patches: the concatenated paths of the first beam-search cover.
pub fn order_opps<T: Real>(g: &CurvedOppGraph<T>, beam_width: usize) -> Vec<usize> {
    let order: Vec<usize> =
        beam_search_path_covers(&g.dag, beam_width).into_iter().next().map(|c| c.paths.concat()).unwrap_or_default();
    if order.len() == g.node_count() && is_valid_topological_order(&g.dag, &order) {
        order
    } else {
        g.dag.topological_order().unwrap_or_default()
    }
}

/// Joins ordered toolpaths with raise, travel and descend moves.
///
/// Each raise goes to `clearance` above the highest point printed so far.
pub fn plan_transfers<T: Real>(toolpaths: Vec<Toolpath<T>>, clearance: T, speed: T) -> PrintPlan<T> {
    let mut transfers = Vec::new();
    let mut top = T::neg_infinity();
    for w in toolpaths.windows(2) {
        let (a, b) = (&w[0], &w[1]);
        top = top.max(a.max_z());
        let (Some(from), Some(to)) = (a.vertices.last(), b.vertices.first()) else {
            continue;
        };
        let safe = top.max(to.position.z) + clearance;
        let (p, q) = (from.position, to.position);
        transfers.push(Transfer {
            from_opp: a.opp_id,
            to_opp: b.opp_id,
            moves: vec![Point::new(p.x, p.y, safe), Point::new(q.x, q.y, safe), q],
        });
    }
    let stats = compute_stats(&toolpaths, &transfers, speed);
    PrintPlan { toolpaths, transfers, stats }
}

fn compute_stats<T: Real>(toolpaths: &[Toolpath<T>], transfers: &[Transfer<T>], speed: T) -> PlanStats<T> {
    let extruded = toolpaths.iter().map(Toolpath::extruded_length).fold(T::zero(), |a, b| a + b);
    let moved: T = transfers
        .iter()
        .zip(toolpaths)
        .map(|(t, tp)| t.length(tp.vertices.last().map(|v| v.position).unwrap_or(t.moves[0])))
        .fold(T::zero(), |a, b| a + b);
    PlanStats {
        opp_count: toolpaths.len(),
        transfer_count: transfers.len(),
        total_extruded_length: extruded,
        transfer_length: moved,
        estimated_time: if speed > T::zero() { (extruded + moved) / speed } else { T::zero() },
    }
}

/// Orders the patches of `g` and builds one toolpath each, joined by transfers.
pub fn plan_print<T: Real>(g: &CurvedOppGraph<T>, ctx: &MergeContext<'_, T>) -> PrintPlan<T> {
    let cfg = ctx.config;
    let toolpaths =
        order_opps(g, cfg.beam_width).into_iter().map(|i| build_toolpath(i, &g.patches[i].layers(ctx), cfg)).collect();
    plan_transfers(toolpaths, cfg.t_max * T::lit(2.0), cfg.speed)
}
