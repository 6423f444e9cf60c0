use crate::curved::PatchLayer;
use crate::geometry::element::point_segment_dist_xy;
use crate::geometry::point::densify;
use crate::geometry::{Point, PrinterConfig};
use crate::scalar::Real;
use crate::toolpath::ToolpathVertex;

/// Minimum summed hop length over the two entry choices of every layer.
///
/// `ends[i]` are the endpoints of layer `i`. Returns the cost and, per layer, whether it
/// is entered at its second endpoint.
pub fn zigzag_entries<T: Real>(ends: &[(Point<T>, Point<T>)]) -> (T, Vec<bool>) {
    let n = ends.len();
    if n == 0 {
        return (T::zero(), Vec::new());
    }
    let entry = |i: usize, rev: bool| if rev { ends[i].1 } else { ends[i].0 };
    let exit = |i: usize, rev: bool| if rev { ends[i].0 } else { ends[i].1 };
    let mut cost = [T::zero(), T::zero()];
    let mut from: Vec<[bool; 2]> = vec![[false; 2]; n];
    for i in 1..n {
        let mut next = [T::zero(); 2];
        for (c, rev) in [(0usize, false), (1, true)] {
            let a = cost[0] + exit(i - 1, false).dist(entry(i, rev));
            let b = cost[1] + exit(i - 1, true).dist(entry(i, rev));
            if b < a {
                next[c] = b;
                from[i][c] = true;
            } else {
                next[c] = a;
            }
        }
        cost = next;
    }
    let mut rev = cost[1] < cost[0];
    let best = if rev { cost[1] } else { cost[0] };
    let mut choice = vec![false; n];
    for i in (0..n).rev() {
        choice[i] = rev;
        rev = from[i][usize::from(rev)];
    }
    (best, choice)
}

/// Connector from the exit of the current layer to the entry of the next.
///
/// Within `threshold` the hop is one straight extruding move. Otherwise an extra path
/// runs back along the current layer (`printed`, in print order, ending at `exit`) at
/// thickness `t_min` on top of it, up to the point nearest `entry`, then hops across.
/// The returned list ends with the entry vertex.
pub fn inter_layer_connection<T: Real>(
    exit: Point<T>,
    entry: Point<T>,
    printed: &[Point<T>],
    printed_thickness: T,
    entry_thickness: T,
    threshold: T,
    t_min: T,
) -> Vec<ToolpathVertex<T>> {
    let hop = ToolpathVertex::extruding(entry, entry_thickness, None);
    if exit.dist(entry) <= threshold || printed.len() < 2 {
        return vec![hop];
    }
    let lift = (printed_thickness + t_min) * T::lit(0.5);
    let raise = |p: Point<T>| Point::new(p.x, p.y, p.z + lift);
    let n = printed.len();
    let mut best = (T::infinity(), n - 1, exit);
    for i in (1..n).rev() {
        let (a, b) = (printed[i - 1], printed[i]);
        let d = point_segment_dist_xy(entry, a, b);
        if d < best.0 {
            best = (d, i, closest_on_segment(entry, a, b));
        }
    }
    let (_, seg, target) = best;
    let mut out = vec![ToolpathVertex::extruding(raise(exit), t_min, None)];
    for &p in printed[seg..n - 1].iter().rev() {
        out.push(ToolpathVertex::extruding(raise(p), t_min, None));
    }
    out.push(ToolpathVertex::extruding(raise(target), t_min, None));
    out.push(hop);
    out
}

/// Horizontal projection of `p` onto segment `ab`, with z interpolated along the segment.
fn closest_on_segment<T: Real>(p: Point<T>, a: Point<T>, b: Point<T>) -> Point<T> {
    let d = (b - a).flatten();
    let len2 = d.dot(d);
    if len2 <= T::zero() {
        return a;
    }
    let w = ((p - a).flatten().dot(d) / len2).max(T::zero()).min(T::one());
    a.lerp(b, w)
}

/// Continuous path through open layers, reversing layers as the entry DP chooses.
pub fn zigzag_connect<T: Real>(
    layers: &[PatchLayer<T>],
    cfg: &PrinterConfig<T>,
    first_layer: usize,
) -> Vec<ToolpathVertex<T>> {
    let ends: Vec<_> = layers.iter().map(PatchLayer::endpoints).collect();
    let (_, rev) = zigzag_entries(&ends);
    let step = cfg.path_width * T::lit(0.5);
    let mut out: Vec<ToolpathVertex<T>> = Vec::new();
    let mut prev: Option<(Vec<Point<T>>, T)> = None;
    for (i, layer) in layers.iter().enumerate() {
        let mut pts: Vec<(Point<T>, T)> = layer.points.iter().copied().zip(layer.thickness.iter().copied()).collect();
        if rev[i] {
            pts.reverse();
        }
        let dense = densify_with_thickness(&pts, step);
        let tag = Some(first_layer + i);
        if let Some((printed, th)) = &prev {
            let exit = *printed.last().expect("non-empty layer");
            let mut conn =
                inter_layer_connection(exit, dense[0].0, printed, *th, dense[0].1, cfg.connect_threshold, cfg.t_min);
            if let Some(last) = conn.last_mut() {
                last.layer = tag;
            }
            out.extend(conn);
        } else {
            out.push(ToolpathVertex::extruding(dense[0].0, dense[0].1, tag));
        }
        out.extend(dense[1..].iter().map(|&(p, t)| ToolpathVertex::extruding(p, t, tag)));
        let avg = dense.iter().map(|d| d.1).sum::<T>() / T::from_count(dense.len());
        prev = Some((dense.into_iter().map(|d| d.0).collect(), avg));
    }
    out
}

fn densify_with_thickness<T: Real>(pts: &[(Point<T>, T)], step: T) -> Vec<(Point<T>, T)> {
    let mut out = vec![pts[0]];
    for w in pts.windows(2) {
        let ((a, ta), (b, tb)) = (w[0], w[1]);
        let seg = densify(&[a, b], step);
        let len = a.dist(b);
        for p in &seg[1..] {
            let f = if len > T::zero() { a.dist(*p) / len } else { T::one() };
            out.push((*p, ta + (tb - ta) * f));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute(ends: &[(Point<f64>, Point<f64>)]) -> f64 {
        let n = ends.len();
        (0..1u32 << n)
            .map(|mask| {
                let pick = |i: usize| {
                    let r = mask >> i & 1 == 1;
                    if r {
                        (ends[i].1, ends[i].0)
                    } else {
                        ends[i]
                    }
                };
                (1..n).map(|i| pick(i - 1).1.dist(pick(i).0)).sum::<f64>()
            })
            .fold(f64::INFINITY, f64::min)
    }

    #[test]
    fn single_segment_is_itself() {
        let ends = [(Point::xz(0.0, 0.0), Point::xz(10.0, 0.0))];
        assert_eq!(zigzag_entries(&ends), (0.0, vec![false]));
    }

    #[test]
    fn two_segments_turn_at_near_end() {
        let ends: [(Point<f64>, Point<f64>); 2] =
            [(Point::xz(0.0, 0.5), Point::xz(10.0, 0.5)), (Point::xz(0.0, 1.5), Point::xz(10.0, 1.5))];
        let (cost, rev) = zigzag_entries(&ends);
        assert!((cost - 1.0).abs() < 1e-12);
        assert_eq!(rev[1], !rev[0]);
        assert!((cost - brute(&ends)).abs() < 1e-12);
    }

    #[test]
    fn tower_matches_brute_force() {
        let ends: Vec<_> = (0..10)
            .map(|i| {
                let z = i as f64 + 0.5;
                let s = (i as f64 * 1.7).sin();
                (Point::xz(s, z), Point::xz(20.0 + 3.0 * s, z))
            })
            .collect();
        assert!((zigzag_entries(&ends).0 - brute(&ends)).abs() < 1e-9);
    }

    #[test]
    fn near_hop_is_direct() {
        let layer = [Point::xz(0.0, 0.5), Point::xz(10.0, 0.5)];
        let v = inter_layer_connection(layer[1], Point::xz(10.0, 1.5), &layer, 1.0, 1.0, 5.0, 0.5);
        assert_eq!(v.len(), 1);
        let v = inter_layer_connection(layer[1], layer[1], &layer, 1.0, 1.0, 5.0, 0.5);
        assert_eq!(v.len(), 1);
    }

    #[test]
    fn far_hop_follows_u_layer() {
        // U-shaped layer in plan view; the next layer starts near the left arm.
        let z = 0.5;
        let u =
            [Point::new(0.0, 30.0, z), Point::new(0.0, 0.0, z), Point::new(30.0, 0.0, z), Point::new(30.0, 30.0, z)];
        let entry = Point::new(0.0, 28.0, 1.5);
        let v = inter_layer_connection(u[3], entry, &u, 1.0, 1.0, 5.0, 0.5);
        assert!(v.len() > 2);
        let last = v.last().unwrap();
        assert_eq!(last.position, entry);
        let before = v[v.len() - 2].position;
        assert!(before.dist(entry) <= 5.0);
        for x in &v[..v.len() - 1] {
            let d =
                (1..u.len()).map(|i| point_segment_dist_xy(x.position, u[i - 1], u[i])).fold(f64::INFINITY, f64::min);
            assert!(d <= 6.0);
            assert!((x.position.z - 1.25).abs() < 1e-12);
            assert_eq!(x.local_thickness, 0.5);
        }
    }
}
