use crate::curved::stack::CurvedLayerStack;
use crate::geometry::slice::vertical_intervals;
use crate::geometry::{LayerElement, Point, PrinterConfig, SlopeLimits};
use crate::scalar::Real;

/// A horizontal boundary interval of a patch.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FlatArea<T> {
    pub x0: T,
    pub x1: T,
    pub z: T,
}

/// Top and bottom boundary areas of a patch, plus the oblique sides a curving keeps.
#[derive(Debug, Clone, PartialEq)]
pub struct TargetFlatAreas<T> {
    pub top: Vec<FlatArea<T>>,
    pub bottom: Vec<FlatArea<T>>,
    pub obliques: Vec<(Point<T>, Point<T>)>,
    /// Built from closed contours.
    pub closed: bool,
}

impl<T: Real> TargetFlatAreas<T> {
    fn hull(areas: &[FlatArea<T>]) -> Option<FlatArea<T>> {
        let first = *areas.first()?;
        Some(areas.iter().fold(first, |h, a| FlatArea { x0: h.x0.min(a.x0), x1: h.x1.max(a.x1), z: h.z.max(a.z) }))
    }
}

/// Material occupied by a sub-OPP in the profile plane.
#[derive(Debug, Clone, PartialEq)]
pub enum RegionShape<T> {
    /// Closed ring through the element endpoints.
    Polygon(Vec<Point<T>>),
    Stack(CurvedLayerStack<T>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Region<T> {
    pub shape: RegionShape<T>,
    pub areas: TargetFlatAreas<T>,
}

impl<T: Real> Region<T> {
    /// Region of a stack of flat segments, one per layer, bottom to top.
    ///
    /// The sides follow the segment endpoints and are extended by half a layer at the
    /// bottom and top along the local side slope (at most `max_shift` sideways).
    pub fn from_segments(chain: &[&LayerElement<T>], thickness: T, max_shift: T) -> Self {
        let half = thickness * T::lit(0.5);
        let ranges: Vec<(T, T, T)> = chain
            .iter()
            .map(|e| {
                let (a, b) = e.x_range();
                (a, b, e.z)
            })
            .collect();
        let k = ranges.len() - 1;
        let extend = |from: T, to: T, dz: T| -> T {
            if dz <= T::zero() {
                return from;
            }
            let shift = (from - to) * half / dz;
            from + shift.max(-max_shift).min(max_shift)
        };
        let (mut lb, mut rb, mut lt, mut rt) = (ranges[0].0, ranges[0].1, ranges[k].0, ranges[k].1);
        if k >= 1 {
            let dz0 = ranges[1].2 - ranges[0].2;
            let dzk = ranges[k].2 - ranges[k - 1].2;
            lb = extend(ranges[0].0, ranges[1].0, dz0);
            rb = extend(ranges[0].1, ranges[1].1, dz0);
            lt = extend(ranges[k].0, ranges[k - 1].0, dzk);
            rt = extend(ranges[k].1, ranges[k - 1].1, dzk);
        }
        let fix = |l: T, r: T| if l <= r { (l, r) } else { ((l + r) * T::lit(0.5), (l + r) * T::lit(0.5)) };
        let (lb, rb) = fix(lb, rb);
        let (lt, rt) = fix(lt, rt);
        let z_bot = ranges[0].2 - half;
        let z_top = ranges[k].2 + half;
        let mut ring = vec![Point::xz(lb, z_bot)];
        ring.extend(ranges.iter().map(|&(a, _, z)| Point::xz(a, z)));
        ring.push(Point::xz(lt, z_top));
        ring.push(Point::xz(rt, z_top));
        ring.extend(ranges.iter().rev().map(|&(_, b, z)| Point::xz(b, z)));
        ring.push(Point::xz(rb, z_bot));
        Self {
            shape: RegionShape::Polygon(ring),
            areas: TargetFlatAreas {
                top: vec![FlatArea { x0: lt, x1: rt, z: z_top }],
                bottom: vec![FlatArea { x0: lb, x1: rb, z: z_bot }],
                obliques: Vec::new(),
                closed: false,
            },
        }
    }

    pub fn from_stack(stack: CurvedLayerStack<T>, areas: TargetFlatAreas<T>) -> Self {
        Self { shape: RegionShape::Stack(stack), areas }
    }

    pub fn x_range(&self) -> (T, T) {
        match &self.shape {
            RegionShape::Polygon(ring) => {
                ring.iter().fold((T::infinity(), T::neg_infinity()), |(lo, hi), p| (lo.min(p.x), hi.max(p.x)))
            }
            RegionShape::Stack(s) => (s.x_min, s.x_max),
        }
    }

    /// Material intervals `(z0, z1)` on the vertical line at `x`.
    pub fn intervals_at(&self, x: T) -> Vec<(T, T)> {
        match &self.shape {
            RegionShape::Polygon(ring) => {
                let n = ring.len();
                vertical_intervals((0..n).map(|i| (ring[i], ring[(i + 1) % n])), x)
            }
            RegionShape::Stack(s) => {
                if x < s.x_min || x > s.x_max {
                    Vec::new()
                } else {
                    vec![(s.bottom_at(x), s.top_at(x))]
                }
            }
        }
    }
}

/// Boundary areas after curving `a` (upper) together with `b` (lower).
///
/// A side of `a` is exposed when `b`'s top reaches beyond `a`'s bottom on that side by
/// more than `tol`; the oblique line from `a`'s top corner down to its bottom corner then
/// becomes part of the merged top surface and must respect the slope limit. Refuses
/// when both sides are exposed and too steep, or when both patches are closed contours.
pub fn combine_target_areas<T: Real>(
    a: &TargetFlatAreas<T>,
    b: &TargetFlatAreas<T>,
    slope: &SlopeLimits<T>,
    tol: T,
) -> Option<TargetFlatAreas<T>> {
    if a.closed && b.closed {
        return None;
    }
    let at = TargetFlatAreas::hull(&a.top)?;
    let ab = TargetFlatAreas::hull(&a.bottom)?;
    let bt = TargetFlatAreas::hull(&b.top)?;
    let tan = slope.tan_max();
    let steep = |top: Point<T>, bottom: Point<T>| {
        let dx = (top.x - bottom.x).abs();
        let dz = (top.z - bottom.z).abs();
        dz > tan * dx + T::tolerance()
    };
    let left = (Point::xz(at.x0, at.z), Point::xz(ab.x0, ab.z));
    let right = (Point::xz(at.x1, at.z), Point::xz(ab.x1, ab.z));
    let left_exposed = bt.x0 < ab.x0 - tol;
    let right_exposed = bt.x1 > ab.x1 + tol;
    let left_bad = left_exposed && steep(left.0, left.1);
    let right_bad = right_exposed && steep(right.0, right.1);
    if left_bad && right_bad {
        return None;
    }
    let mut top = a.top.clone();
    let mut obliques = a.obliques.clone();
    for area in &b.top {
        if area.x0 < ab.x0 - tol {
            top.push(FlatArea { x0: area.x0, x1: area.x1.min(ab.x0), z: area.z });
        }
        if area.x1 > ab.x1 + tol {
            top.push(FlatArea { x0: area.x0.max(ab.x1), x1: area.x1, z: area.z });
        }
    }
    if left_exposed && !left_bad {
        obliques.push(left);
    }
    if right_exposed && !right_bad {
        obliques.push(right);
    }
    obliques.extend(b.obliques.iter().copied());
    top.sort_by(|p, q| p.x0.partial_cmp(&q.x0).unwrap_or(std::cmp::Ordering::Equal));
    Some(TargetFlatAreas { top, bottom: b.bottom.clone(), obliques, closed: a.closed || b.closed })
}

/// Column-wise curved-layer solver over the union of `regions`.
///
/// Columns are cell centres no wider than a quarter path width. Every column must meet
/// the union in one interval; layer `k` of `n` is placed at `bottom + k * height / n`.
/// Returns the stack for the smallest `n` keeping every gap in `[t_min, t_max]` and every
/// boundary surface within the slope limit.
pub fn curved_layer_feasibility<T: Real>(
    regions: &[&Region<T>],
    cfg: &PrinterConfig<T>,
    slope: &SlopeLimits<T>,
) -> Option<CurvedLayerStack<T>> {
    let (x0, x1) = regions
        .iter()
        .map(|r| r.x_range())
        .fold((T::infinity(), T::neg_infinity()), |(lo, hi), (a, b)| (lo.min(a), hi.max(b)));
    if !(x1 > x0) {
        return None;
    }
    let max_dx = cfg.path_width * T::lit(0.25);
    let m = ((x1 - x0) / max_dx).ceil().to_usize()?.max(1);
    let dx = (x1 - x0) / T::from_count(m);
    let gap_tol = cfg.t_min * T::lit(0.1);
    let mut columns = Vec::with_capacity(m);
    let mut bottoms = Vec::with_capacity(m);
    let mut tops = Vec::with_capacity(m);
    for j in 0..m {
        let x = x0 + dx * (T::from_count(j) + T::lit(0.5));
        let mut iv: Vec<(T, T)> = regions.iter().flat_map(|r| r.intervals_at(x)).collect();
        iv.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap_or(std::cmp::Ordering::Equal));
        let mut merged: Vec<(T, T)> = Vec::new();
        for (lo, hi) in iv {
            match merged.last_mut() {
                Some(last) if lo <= last.1 + gap_tol => last.1 = last.1.max(hi),
                _ => merged.push((lo, hi)),
            }
        }
        if merged.len() != 1 {
            return None;
        }
        columns.push(x);
        bottoms.push(merged[0].0);
        tops.push(merged[0].1);
    }
    solve_columns(x0, x1, columns, &bottoms, &tops, cfg.t_min, cfg.t_max, slope.tan_max())
}

/// Shared-layer-count interpolation between per-column bottom and top heights.
#[allow(clippy::too_many_arguments)]
pub fn solve_columns<T: Real>(
    x_min: T,
    x_max: T,
    columns: Vec<T>,
    bottoms: &[T],
    tops: &[T],
    t_min: T,
    t_max: T,
    tan_max: T,
) -> Option<CurvedLayerStack<T>> {
    let m = columns.len();
    if m == 0 || bottoms.len() != m || tops.len() != m {
        return None;
    }
    let eps = T::lit(1e-9);
    let mut n_lo = 1usize;
    let mut n_hi = usize::MAX;
    for j in 0..m {
        let h = tops[j] - bottoms[j];
        if !(h > T::zero()) {
            return None;
        }
        n_lo = n_lo.max((h / t_max - eps).ceil().to_usize()?.max(1));
        n_hi = n_hi.min((h / t_min + eps).floor().to_usize()?);
    }
    if n_lo > n_hi {
        return None;
    }
    let dx = (x_max - x_min) / T::from_count(m);
    let limit = tan_max * dx + T::lit(1e-12);
    // Surface k's step between columns is linear in k, so the outer surfaces bound it.
    for j in 1..m {
        if (bottoms[j] - bottoms[j - 1]).abs() > limit || (tops[j] - tops[j - 1]).abs() > limit {
            return None;
        }
    }
    let n = n_lo;
    let surfaces = (0..=n)
        .map(|k| {
            let w = T::from_count(k) / T::from_count(n);
            (0..m).map(|j| if k == n { tops[j] } else { bottoms[j] + (tops[j] - bottoms[j]) * w }).collect()
        })
        .collect();
    let stack = CurvedLayerStack { x_min, x_max, columns, surfaces };
    if stack.audit(t_min, t_max, tan_max).is_empty() {
        Some(stack)
    } else {
        None
    }
}
