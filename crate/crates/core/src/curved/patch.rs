use crate::curved::region::{combine_target_areas, curved_layer_feasibility, Region, TargetFlatAreas};
use crate::curved::stack::CurvedLayerStack;
use crate::geometry::element::elements_within;
use crate::geometry::{LayerElement, Point, PrinterConfig, SlopeLimits};
use crate::graph::{EdgeKind, InitGraph};
use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PatchType {
    /// Flat layers only.
    I,
    /// A single curved layer stack.
    II,
    /// Several stacked parts, at least one curved.
    III,
}

#[derive(Debug, Clone, PartialEq)]
pub enum SubOppLayers<T> {
    /// Element ids, bottom to top.
    Flat(Vec<usize>),
    Curved(CurvedLayerStack<T>),
}

/// A stacked piece of a patch, made of one or more initial-graph nodes.
#[derive(Debug, Clone, PartialEq)]
pub struct SubOpp<T> {
    pub init_nodes: Vec<usize>,
    pub layers: SubOppLayers<T>,
    /// Profile-plane footprint; absent when curving is disabled.
    pub region: Option<Region<T>>,
}

impl<T: Real> SubOpp<T> {
    pub fn layer_count(&self) -> usize {
        match &self.layers {
            SubOppLayers::Flat(e) => e.len(),
            SubOppLayers::Curved(s) => s.layer_count(),
        }
    }

    pub fn is_curved(&self) -> bool {
        matches!(self.layers, SubOppLayers::Curved(_))
    }
}

/// One deposition layer of a patch, ready for path planning.
#[derive(Debug, Clone, PartialEq)]
pub struct PatchLayer<T> {
    pub points: Vec<Point<T>>,
    /// Local layer thickness at each point.
    pub thickness: Vec<T>,
    pub closed: bool,
    /// Slicing layer index for flat layers.
    pub layer_index: Option<usize>,
    pub element: Option<usize>,
}

impl<T: Real> PatchLayer<T> {
    /// Height and thickness at horizontal position `x` (profile layers are x-monotone).
    pub fn at_x(&self, x: T) -> (T, T) {
        let p = &self.points;
        let n = p.len();
        if n == 1 {
            return (p[0].z, self.thickness[0]);
        }
        let (lo, hi) = if p[0].x <= p[n - 1].x { (0, n - 1) } else { (n - 1, 0) };
        if x <= p[lo].x {
            return (p[lo].z, self.thickness[lo]);
        }
        if x >= p[hi].x {
            return (p[hi].z, self.thickness[hi]);
        }
        for i in 1..n {
            let (a, b) = (p[i - 1], p[i]);
            let (x0, x1) = (a.x.min(b.x), a.x.max(b.x));
            if x >= x0 && x <= x1 {
                let w = if x1 > x0 { (x - a.x) / (b.x - a.x) } else { T::zero() };
                let z = a.z + (b.z - a.z) * w;
                let t = self.thickness[i - 1] + (self.thickness[i] - self.thickness[i - 1]) * w;
                return (z, t);
            }
        }
        (p[hi].z, self.thickness[hi])
    }

    pub fn x_range(&self) -> (T, T) {
        self.points.iter().fold((T::infinity(), T::neg_infinity()), |(lo, hi), p| (lo.min(p.x), hi.max(p.x)))
    }

    pub fn endpoints(&self) -> (Point<T>, Point<T>) {
        (self.points[0], self.points[self.points.len() - 1])
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OppPatch<T> {
    pub id: usize,
    pub patch_type: PatchType,
    /// Print order, bottom first.
    pub sub_opps: Vec<SubOpp<T>>,
}

impl<T: Real> OppPatch<T> {
    pub fn new(id: usize, sub_opps: Vec<SubOpp<T>>) -> Self {
        let patch_type = classify(&sub_opps);
        Self { id, patch_type, sub_opps }
    }

    pub fn layer_count(&self) -> usize {
        self.sub_opps.iter().map(SubOpp::layer_count).sum()
    }

    pub fn init_nodes(&self) -> impl Iterator<Item = usize> + '_ {
        self.sub_opps.iter().flat_map(|s| s.init_nodes.iter().copied())
    }

    /// Bottom areas of the first part and top areas of the last.
    pub fn target_areas(&self) -> Option<TargetFlatAreas<T>> {
        let first = self.sub_opps.first()?.region.as_ref()?;
        let last = self.sub_opps.last()?.region.as_ref()?;
        Some(TargetFlatAreas {
            top: last.areas.top.clone(),
            bottom: first.areas.bottom.clone(),
            obliques: last.areas.obliques.clone(),
            closed: first.areas.closed || last.areas.closed,
        })
    }

    /// Every layer in print order.
    pub fn layers(&self, ctx: &MergeContext<'_, T>) -> Vec<PatchLayer<T>> {
        self.sub_opps.iter().flat_map(|s| ctx.sub_layers(s)).collect()
    }
}

fn classify<T: Real>(subs: &[SubOpp<T>]) -> PatchType {
    if subs.iter().all(|s| !s.is_curved()) {
        PatchType::I
    } else if subs.len() == 1 {
        PatchType::II
    } else {
        PatchType::III
    }
}

/// Inputs shared by every merge decision.
#[derive(Debug, Clone)]
pub struct MergeContext<'a, T> {
    pub elements: &'a [LayerElement<T>],
    pub init: &'a InitGraph,
    pub config: &'a PrinterConfig<T>,
    pub slope: SlopeLimits<T>,
    /// Curving is only available for profile models.
    pub curving: bool,
    /// Whether stacking may rely on an extra connecting path when endpoints are far apart.
    pub allow_extra_path: bool,
    /// Collision-free chain of each element; consecutive parts of one chain are re-stacked.
    pub restack_chains: Option<Vec<usize>>,
}

impl<'a, T: Real> MergeContext<'a, T> {
    pub fn new(
        elements: &'a [LayerElement<T>],
        init: &'a InitGraph,
        config: &'a PrinterConfig<T>,
        curving: bool,
    ) -> Self {
        Self {
            elements,
            init,
            config,
            slope: config.slope_limits(),
            curving,
            allow_extra_path: true,
            restack_chains: None,
        }
    }

    /// Flat part made of the given initial-graph nodes, stacked in order.
    pub fn flat_sub(&self, init_nodes: Vec<usize>) -> SubOpp<T> {
        let ids: Vec<usize> = init_nodes.iter().flat_map(|&n| self.init.nodes[n].iter().copied()).collect();
        let region = self.flat_region(&ids);
        SubOpp { init_nodes, layers: SubOppLayers::Flat(ids), region }
    }

    fn flat_region(&self, ids: &[usize]) -> Option<Region<T>> {
        if !self.curving || ids.is_empty() {
            return None;
        }
        let chain: Vec<&LayerElement<T>> = ids.iter().map(|&i| &self.elements[i]).collect();
        if chain.iter().any(|e| e.is_contour()) {
            return None;
        }
        Some(Region::from_segments(&chain, self.config.flat_layer_thickness, self.config.path_width * T::lit(0.5)))
    }

    pub fn sub_layers(&self, s: &SubOpp<T>) -> Vec<PatchLayer<T>> {
        match &s.layers {
            SubOppLayers::Flat(ids) => ids
                .iter()
                .map(|&i| {
                    let e = &self.elements[i];
                    PatchLayer {
                        points: e.points.clone(),
                        thickness: vec![self.config.flat_layer_thickness; e.points.len()],
                        closed: e.is_contour(),
                        layer_index: Some(e.layer_index),
                        element: Some(e.id),
                    }
                })
                .collect(),
            SubOppLayers::Curved(stack) => curved_layers(stack),
        }
    }

    /// Whether an initial-graph collision edge joins the two parts, in either direction.
    pub fn collision_between(&self, a: &SubOpp<T>, b: &SubOpp<T>) -> bool {
        a.init_nodes.iter().any(|&u| {
            b.init_nodes.iter().any(|&v| {
                self.init.dag.kind(u, v) == Some(EdgeKind::Collision)
                    || self.init.dag.kind(v, u) == Some(EdgeKind::Collision)
            })
        })
    }

    /// Whether `upper` can be printed directly on top of `lower` as one path.
    pub fn stackable(&self, lower: &SubOpp<T>, upper: &SubOpp<T>) -> bool {
        let (Some(l), Some(u)) = (self.sub_layers(lower).pop(), self.sub_layers(upper).into_iter().next()) else {
            return false;
        };
        let adjacent = match (&lower.layers, &upper.layers, l.element, u.element) {
            (SubOppLayers::Flat(_), SubOppLayers::Flat(_), Some(a), Some(b)) => {
                let (a, b) = (&self.elements[a], &self.elements[b]);
                b.layer_index == a.layer_index + 1 && elements_within(a, b, self.config.path_width)
            }
            _ => self.resting_on(&l, &u),
        };
        if !adjacent {
            return false;
        }
        if self.allow_extra_path || l.closed || u.closed {
            return true;
        }
        let (l0, l1) = l.endpoints();
        let (u0, u1) = u.endpoints();
        let d = l0.dist(u0).min(l0.dist(u1)).min(l1.dist(u0)).min(l1.dist(u1));
        d <= self.config.connect_threshold
    }

    /// Profile check: over the shared x-range the upper layer sits one half-thickness pair above.
    fn resting_on(&self, lower: &PatchLayer<T>, upper: &PatchLayer<T>) -> bool {
        let (a0, a1) = lower.x_range();
        let (b0, b1) = upper.x_range();
        let (x0, x1) = (a0.max(b0), a1.min(b1));
        if x1 < x0 {
            return false;
        }
        let tol = self.config.t_min * T::lit(0.05) + T::tolerance();
        let samples = 16;
        (0..=samples).all(|k| {
            let x = x0 + (x1 - x0) * T::from_count(k) / T::from_count(samples);
            let (zl, tl) = lower.at_x(x);
            let (zu, tu) = upper.at_x(x);
            ((zu - zl) - (tl + tu) * T::lit(0.5)).abs() <= tol
        })
    }
}

/// Layer polylines of a curved stack: column samples plus the two extent ends.
pub fn curved_layers<T: Real>(stack: &CurvedLayerStack<T>) -> Vec<PatchLayer<T>> {
    let mids = stack.layer_heights();
    (0..stack.layer_count())
        .map(|k| {
            let th: Vec<T> = (0..stack.columns.len()).map(|j| stack.thickness(k, j)).collect();
            let mut points = vec![Point::xz(stack.x_min, mids[k][0])];
            let mut thickness = vec![th[0]];
            for (j, &x) in stack.columns.iter().enumerate() {
                points.push(Point::xz(x, mids[k][j]));
                thickness.push(th[j]);
            }
            points.push(Point::xz(stack.x_max, mids[k][mids[k].len() - 1]));
            thickness.push(th[th.len() - 1]);
            PatchLayer { points, thickness, closed: false, layer_index: None, element: None }
        })
        .collect()
}

/// Stacks `a` on top of `b`; refused across a collision edge or when the layers do not meet.
pub fn stacking_merge<T: Real>(a: &OppPatch<T>, b: &OppPatch<T>, ctx: &MergeContext<'_, T>) -> Option<OppPatch<T>> {
    let lower = b.sub_opps.last()?;
    let upper = a.sub_opps.first()?;
    let collides = b.sub_opps.iter().any(|x| a.sub_opps.iter().any(|y| ctx.collision_between(x, y)));
    if collides || !ctx.stackable(lower, upper) {
        return None;
    }
    let subs = b.sub_opps.iter().chain(&a.sub_opps).cloned().collect();
    Some(OppPatch::new(b.id.min(a.id), subs))
}

/// Curves `upper` and `lower` into one layer stack.
pub fn curving_merge<T: Real>(upper: &SubOpp<T>, lower: &SubOpp<T>, ctx: &MergeContext<'_, T>) -> Option<SubOpp<T>> {
    if !ctx.curving || ctx.collision_between(upper, lower) {
        return None;
    }
    let (ru, rl) = (upper.region.as_ref()?, lower.region.as_ref()?);
    let tol = ctx.config.path_width * T::lit(0.125);
    let areas = combine_target_areas(&ru.areas, &rl.areas, &ctx.slope, tol)?;
    let stack = curved_layer_feasibility(&[rl, ru], ctx.config, &ctx.slope)?;
    let mut init_nodes: Vec<usize> = lower.init_nodes.iter().chain(&upper.init_nodes).copied().collect();
    init_nodes.sort_unstable();
    Some(SubOpp {
        init_nodes,
        layers: SubOppLayers::Curved(stack.clone()),
        region: Some(Region::from_stack(stack, areas)),
    })
}
