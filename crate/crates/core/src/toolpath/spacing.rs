use crate::geometry::element::point_segment_dist_xy;
use crate::geometry::{Point, PrinterConfig};
use crate::scalar::Real;
use crate::toolpath::{PrintPlan, Toolpath};

/// Per-iteration record of a spacing relaxation.
#[derive(Debug, Clone, PartialEq)]
pub struct SpacingReport<T> {
    /// Mean spacing error before the first and after every accepted iteration.
    pub errors: Vec<T>,
    pub max_displacement: T,
    /// Constraint violations found after the last iteration.
    pub violations: usize,
}

/// Vertex indices of each layer of one toolpath, in print order.
struct Layers {
    rows: Vec<(usize, Vec<usize>)>,
}

impl Layers {
    fn of<T: Real>(tp: &Toolpath<T>) -> Self {
        let mut rows: Vec<(usize, Vec<usize>)> = Vec::new();
        for (i, v) in tp.vertices.iter().enumerate() {
            let Some(l) = v.layer else { continue };
            match rows.last_mut() {
                Some((k, idx)) if *k == l => idx.push(i),
                _ => rows.push((l, vec![i])),
            }
        }
        Self { rows }
    }

    /// Rows paired with the row directly beneath them.
    fn stacked(&self) -> impl Iterator<Item = (&[usize], &[usize])> {
        self.rows.windows(2).filter(|w| w[1].0 == w[0].0 + 1).map(|w| (w[1].1.as_slice(), w[0].1.as_slice()))
    }
}

/// Projection of a row vertex onto the row beneath, with its neighbours in the row.
///
/// Spacing relaxation moves vertices only vertically, so this is computed once.
#[derive(Debug, Clone, Copy)]
struct Link<T> {
    vertex: usize,
    prev: usize,
    succ: usize,
    a: usize,
    b: usize,
    f: T,
}

impl<T: Real> Link<T> {
    fn z_below(&self, z: &[T]) -> T {
        z[self.a] + (z[self.b] - z[self.a]) * self.f
    }
}

/// Rows and row-beneath links of one toolpath, bottom up.
struct Frame<T> {
    layers: Layers,
    links: Vec<Link<T>>,
}

impl<T: Real> Frame<T> {
    fn of(tp: &Toolpath<T>) -> Self {
        let layers = Layers::of(tp);
        let pos: Vec<Point<T>> = tp.vertices.iter().map(|v| v.position).collect();
        let mut links = Vec::new();
        for (row, below) in layers.stacked() {
            for (k, &i) in row.iter().enumerate() {
                let (a, b, f) = project(pos[i], below, &pos);
                links.push(Link {
                    vertex: i,
                    prev: row[k.saturating_sub(1)],
                    succ: row[(k + 1).min(row.len() - 1)],
                    a,
                    b,
                    f,
                });
            }
        }
        Self { layers, links }
    }

    fn error(&self, z: &[T], target: T) -> (T, usize) {
        let sum = self.links.iter().map(|l| (z[l.vertex] - l.z_below(z) - target).abs()).fold(T::zero(), |a, b| a + b);
        (sum, self.links.len())
    }
}

/// Nearest segment of `below` to `p` in the horizontal plane, as endpoints and parameter.
fn project<T: Real>(p: Point<T>, below: &[usize], pos: &[Point<T>]) -> (usize, usize, T) {
    if below.len() == 1 {
        return (below[0], below[0], T::zero());
    }
    let mut best = (T::infinity(), below[0], below[0], T::zero());
    for w in below.windows(2) {
        let (a, b) = (pos[w[0]], pos[w[1]]);
        let d = point_segment_dist_xy(p, a, b);
        if d < best.0 {
            let e = (b - a).flatten();
            let len2 = e.dot(e);
            let f = if len2 > T::zero() {
                ((p - a).flatten().dot(e) / len2).max(T::zero()).min(T::one())
            } else {
                T::zero()
            };
            best = (d, w[0], w[1], f);
        }
    }
    (best.1, best.2, best.3)
}

fn heights<T: Real>(tp: &Toolpath<T>) -> Vec<T> {
    tp.vertices.iter().map(|v| v.position.z).collect()
}

fn mean_error<T: Real>(plan: &PrintPlan<T>, frames: &[Frame<T>], target: T) -> T {
    let (sum, count) = plan
        .toolpaths
        .iter()
        .zip(frames)
        .map(|(tp, f)| f.error(&heights(tp), target))
        .fold((T::zero(), 0), |(s, c), (a, b)| (s + a, c + b));
    if count == 0 {
        T::zero()
    } else {
        sum / T::from_count(count)
    }
}

/// Mean absolute deviation of vertical spacing from `target` over all stacked rows.
pub fn spacing_error<T: Real>(plan: &PrintPlan<T>, target: T) -> T {
    let frames: Vec<Frame<T>> = plan.toolpaths.iter().map(Frame::of).collect();
    mean_error(plan, &frames, target)
}

/// Thickness, gap and slope violations of one toolpath.
fn violations<T: Real>(tp: &Toolpath<T>, frame: &Frame<T>, cfg: &PrinterConfig<T>) -> usize {
    let tol = T::lit(1e-9);
    let tan = cfg.slope_limits().tan_max() + T::lit(1e-6);
    let z = heights(tp);
    let mut bad = 0;
    for l in &frame.links {
        let gap = z[l.vertex] - l.z_below(&z);
        if gap < cfg.t_min - tol || gap > cfg.t_max + tol {
            bad += 1;
        }
    }
    for (_, row) in &frame.layers.rows {
        for &i in row {
            let th = tp.vertices[i].local_thickness;
            if th < cfg.t_min - tol || th > cfg.t_max + tol {
                bad += 1;
            }
        }
        for w in row.windows(2) {
            let h = tp.vertices[w[0]].position.horizontal_dist(tp.vertices[w[1]].position);
            if (z[w[1]] - z[w[0]]).abs() > tan * h + tol {
                bad += 1;
            }
        }
    }
    bad
}

fn total_violations<T: Real>(plan: &PrintPlan<T>, frames: &[Frame<T>], cfg: &PrinterConfig<T>) -> usize {
    plan.toolpaths.iter().zip(frames).map(|(tp, f)| violations(tp, f, cfg)).sum()
}

/// Vertical relaxation of stacked rows toward spacing `target`, with Laplacian smoothing.
///
/// Only layer vertices above a toolpath's first layer move; toolpath endpoints and
/// connectors stay fixed. A step is kept only when it adds no violation and does not
/// raise the mean error; otherwise it is halved, and the loop stops when no step helps.
/// No vertex moves more than `path_width` from its start.
pub fn optimize_spacing<T: Real>(
    plan: &PrintPlan<T>,
    cfg: &PrinterConfig<T>,
    target: T,
    iterations: usize,
) -> (PrintPlan<T>, SpacingReport<T>) {
    let alpha = T::lit(0.5);
    let beta = T::lit(0.25);
    let frames: Vec<Frame<T>> = plan.toolpaths.iter().map(Frame::of).collect();
    let mut out = plan.clone();
    let origin: Vec<Vec<T>> = plan.toolpaths.iter().map(heights).collect();
    let mut errors = vec![mean_error(&out, &frames, target)];
    let mut before = total_violations(&out, &frames, cfg);
    for _ in 0..iterations {
        let current = *errors.last().expect("initial error");
        let mut accepted = None;
        let mut scale = T::one();
        for _ in 0..8 {
            let cand = relax_step(&out, &frames, cfg, target, alpha * scale, beta * scale, &origin);
            let after = total_violations(&cand, &frames, cfg);
            let err = mean_error(&cand, &frames, target);
            if after <= before && err <= current {
                accepted = Some((cand, err, after));
                break;
            }
            scale *= T::lit(0.5);
        }
        match accepted {
            Some((cand, err, after)) if err < current => {
                out = cand;
                errors.push(err);
                before = after;
            }
            _ => break,
        }
    }
    out.refresh_stats(cfg.speed);
    let max_displacement = out
        .toolpaths
        .iter()
        .zip(&origin)
        .flat_map(|(tp, z0)| tp.vertices.iter().zip(z0).map(|(v, &z)| (v.position.z - z).abs()))
        .fold(T::zero(), T::max);
    (out, SpacingReport { errors, max_displacement, violations: before })
}

fn relax_step<T: Real>(
    plan: &PrintPlan<T>,
    frames: &[Frame<T>],
    cfg: &PrinterConfig<T>,
    target: T,
    alpha: T,
    beta: T,
    origin: &[Vec<T>],
) -> PrintPlan<T> {
    let mut out = plan.clone();
    for ((tp, frame), z0) in out.toolpaths.iter_mut().zip(frames).zip(origin) {
        let n = tp.vertices.len();
        let z = heights(tp);
        // Links run bottom up, so each reads the already-updated row beneath.
        let mut next = z.clone();
        for l in &frame.links {
            let i = l.vertex;
            if i == 0 || i + 1 == n {
                continue;
            }
            let zb = l.z_below(&next);
            let lap = (z[l.prev] + z[l.succ]) * T::lit(0.5) - z[i];
            let mut zi = z[i] + alpha * (zb + target - z[i]) + beta * lap;
            zi = zi.max(zb + cfg.t_min).min(zb + cfg.t_max);
            zi = zi.max(z0[i] - cfg.path_width).min(z0[i] + cfg.path_width);
            next[i] = zi;
        }
        for (v, &zi) in tp.vertices.iter_mut().zip(&next) {
            let dz = zi - v.position.z;
            if dz != T::zero() {
                v.position.z = zi;
                v.local_thickness += dz;
            }
        }
    }
    out
}
