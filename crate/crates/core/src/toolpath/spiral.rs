use crate::geometry::element::point_segment_dist_xy;
use crate::geometry::point::{loop_length, resample_loop};
use crate::geometry::Point;
use crate::scalar::{atan_deg, Real};
use crate::toolpath::ToolpathVertex;

/// Connecting point per contour minimizing the summed jumps between consecutive contours.
///
/// `d[0][j] = 0` and `d[i][j] = min_k d[i-1][k] + |P[i-1][k] - P[i][j]|`.
pub fn spiral_connection_dp<T: Real>(contours: &[Vec<Point<T>>]) -> (T, Vec<usize>) {
    let n = contours.len();
    if n == 0 {
        return (T::zero(), Vec::new());
    }
    let mut d = vec![T::zero(); contours[0].len()];
    let mut from: Vec<Vec<usize>> = vec![Vec::new(); n];
    for i in 1..n {
        let (prev, cur) = (&contours[i - 1], &contours[i]);
        let mut next = Vec::with_capacity(cur.len());
        let mut arg = Vec::with_capacity(cur.len());
        for p in cur {
            let (k, c) = prev
                .iter()
                .enumerate()
                .map(|(k, q)| (k, d[k] + q.dist(*p)))
                .fold((0, T::infinity()), |b, x| if x.1 < b.1 { x } else { b });
            next.push(c);
            arg.push(k);
        }
        d = next;
        from[i] = arg;
    }
    let (mut j, best) = d.iter().copied().enumerate().fold((0, T::infinity()), |b, x| if x.1 < b.1 { x } else { b });
    let mut pick = vec![0; n];
    for i in (0..n).rev() {
        pick[i] = j;
        if i > 0 {
            j = from[i][j];
        }
    }
    (best, pick)
}

/// Nearest point on a closed loop (horizontal distance), z interpolated along the edge.
fn nearest_on_loop<T: Real>(p: Point<T>, ring: &[Point<T>]) -> Point<T> {
    let n = ring.len();
    let mut best = (T::infinity(), ring[0]);
    for i in 0..n {
        let (a, b) = (ring[i], ring[(i + 1) % n]);
        let d = point_segment_dist_xy(p, a, b);
        if d < best.0 {
            let e = (b - a).flatten();
            let len2 = e.dot(e);
            let w = if len2 > T::zero() {
                ((p - a).flatten().dot(e) / len2).max(T::zero()).min(T::one())
            } else {
                T::zero()
            };
            best = (d, a.lerp(b, w));
        }
    }
    best.1
}

/// One continuous spiral through stacked contours, bottom first.
///
/// Each contour is resampled to `m` points and rotated to start at its connecting point.
/// Every turn but the last blends from the contour (w = 0) to the nearest points of the
/// contour above (w = 1) by arc fraction; the top contour is printed as is and closed.
pub fn spiralize_contours<T: Real>(contours: &[Vec<Point<T>>], thickness: &[T], m: usize) -> Vec<ToolpathVertex<T>> {
    let n = contours.len();
    if n == 0 || m == 0 {
        return Vec::new();
    }
    let rings: Vec<Vec<Point<T>>> = contours.iter().map(|c| resample_loop(c, m)).collect();
    let (_, pick) = spiral_connection_dp(&rings);
    let rotated: Vec<Vec<Point<T>>> =
        rings.iter().zip(&pick).map(|(r, &j)| r[j..].iter().chain(&r[..j]).copied().collect()).collect();
    let mut out = Vec::new();
    for i in 0..n - 1 {
        let (ring, above) = (&rotated[i], &rotated[i + 1]);
        let total = loop_length(ring);
        let mut s = T::zero();
        for k in 0..=m {
            if k > 0 {
                s += ring[k - 1].dist(ring[k % m]);
            }
            let pb = ring[k % m];
            let pa = nearest_on_loop(pb, above);
            let w = if total > T::zero() { s / total } else { T::one() };
            let th = thickness[i] + (thickness[i + 1] - thickness[i]) * w;
            out.push(ToolpathVertex::extruding(pa * w + pb * (T::one() - w), th, None));
        }
    }
    let top = &rotated[n - 1];
    for k in 0..=m {
        out.push(ToolpathVertex::extruding(top[k % m], thickness[n - 1], None));
    }
    out
}

/// Consecutive contour pairs whose sample matchings all lie below `threshold_deg`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LowSlopeRegion {
    /// Index of the lowest contour.
    pub first: usize,
    /// Index of the highest contour.
    pub last: usize,
}

/// Flags contour pairs where every matching edge (sample to nearest sample above) is
/// flatter than `threshold_deg`, merging consecutive flagged pairs into regions.
pub fn detect_low_slope_regions<T: Real>(contours: &[Vec<Point<T>>], threshold_deg: T) -> Vec<LowSlopeRegion> {
    let eps = T::lit(1e-9);
    let low = |lo: &[Point<T>], hi: &[Point<T>]| {
        !lo.is_empty()
            && !hi.is_empty()
            && lo.iter().all(|p| {
                let q = hi
                    .iter()
                    .copied()
                    .fold((T::infinity(), hi[0]), |b, q| {
                        let d = p.dist(q);
                        if d < b.0 {
                            (d, q)
                        } else {
                            b
                        }
                    })
                    .1;
                let h = p.horizontal_dist(q);
                let v = (q.z - p.z).abs();
                let angle = if h > T::zero() { atan_deg(v / h) } else { T::lit(90.0) };
                angle < threshold_deg - eps
            })
    };
    let mut out: Vec<LowSlopeRegion> = Vec::new();
    for i in 1..contours.len() {
        if !low(&contours[i - 1], &contours[i]) {
            continue;
        }
        match out.last_mut() {
            Some(r) if r.last == i - 1 => r.last = i,
            _ => out.push(LowSlopeRegion { first: i - 1, last: i }),
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::tan_deg;

    fn circle(r: f64, z: f64, m: usize, phase: f64) -> Vec<Point<f64>> {
        (0..m)
            .map(|k| {
                let a = phase + std::f64::consts::TAU * k as f64 / m as f64;
                Point::new(r * a.cos(), r * a.sin(), z)
            })
            .collect()
    }

    #[test]
    fn identical_circles_align() {
        let cs: Vec<_> = (0..4).map(|i| circle(10.0, 0.5 + i as f64, 12, 0.0)).collect();
        let (cost, pick) = spiral_connection_dp(&cs);
        assert!((cost - 3.0).abs() < 1e-9);
        assert!(pick.iter().all(|&j| j == pick[0]));
    }

    #[test]
    fn single_contour_is_closed_loop() {
        let c = circle(5.0, 1.0, 8, 0.0);
        let v = spiralize_contours(std::slice::from_ref(&c), &[1.0], 8);
        assert_eq!(v.len(), 9);
        assert!(v[0].position.dist(v[8].position) < 1e-12);
    }

    #[test]
    fn spiral_rises_from_lower_to_upper() {
        let cs = vec![circle(10.0, 0.5, 16, 0.0), circle(10.0, 1.5, 16, 0.0)];
        let v = spiralize_contours(&cs, &[1.0, 1.0], 16);
        assert!((v[0].position.z - 0.5).abs() < 1e-12);
        assert!((v[16].position.z - 1.5).abs() < 1e-9);
        for w in v.windows(2) {
            assert!(w[1].position.z >= w[0].position.z - 1e-12);
        }
    }

    #[test]
    fn vertical_cylinder_not_low_slope() {
        let cs: Vec<_> = (0..5).map(|i| circle(10.0, i as f64, 32, 0.0)).collect();
        assert!(detect_low_slope_regions(&cs, 20.0).is_empty());
    }

    #[test]
    fn flat_cap_is_low_slope() {
        let step = 1.0 / tan_deg(10.0);
        let cs: Vec<_> = (0..4).map(|i| circle(40.0 - step * i as f64, i as f64, 64, 0.0)).collect();
        assert_eq!(detect_low_slope_regions(&cs, 20.0), vec![LowSlopeRegion { first: 0, last: 3 }]);
    }

    #[test]
    fn cone_at_threshold_not_reported() {
        let step = 1.0 / tan_deg(20.0);
        let cs: Vec<_> = (0..3).map(|i| circle(30.0 - step * i as f64, i as f64, 64, 0.0)).collect();
        assert!(detect_low_slope_regions(&cs, 20.0).is_empty());
    }
}
