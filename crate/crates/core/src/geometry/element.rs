use crate::geometry::Point;
use crate::scalar::Real;

pub type ElementId = usize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ElementKind {
    /// Open polyline.
    Segment,
    /// Closed polyline; the closing edge back to the first point is implicit.
    Contour,
}

/// One connected component of a slicing plane's intersection with the model.
#[derive(Debug, Clone, PartialEq)]
pub struct LayerElement<T> {
    pub id: ElementId,
    pub layer_index: usize,
    pub z: T,
    pub kind: ElementKind,
    pub points: Vec<Point<T>>,
}

impl<T: Real> LayerElement<T> {
    pub fn segment(id: ElementId, layer_index: usize, z: T, points: Vec<Point<T>>) -> Self {
        Self { id, layer_index, z, kind: ElementKind::Segment, points }
    }

    pub fn contour(id: ElementId, layer_index: usize, z: T, points: Vec<Point<T>>) -> Self {
        Self { id, layer_index, z, kind: ElementKind::Contour, points }
    }

    pub fn is_contour(&self) -> bool {
        self.kind == ElementKind::Contour
    }

    /// Edges of the polyline, including the closing edge of a contour.
    pub fn edges(&self) -> impl Iterator<Item = (Point<T>, Point<T>)> + '_ {
        let n = self.points.len();
        let count = match (self.kind, n) {
            (_, 0) => 0,
            (ElementKind::Segment, _) | (ElementKind::Contour, 1 | 2) => n - 1,
            (ElementKind::Contour, _) => n,
        };
        (0..count).map(move |i| (self.points[i], self.points[(i + 1) % n]))
    }

    /// Length of the horizontal projection.
    pub fn projected_length(&self) -> T {
        self.edges().map(|(a, b)| a.horizontal_dist(b)).fold(T::zero(), |a, b| a + b)
    }

    /// Elements much shorter than the bead width are kept but flagged.
    pub fn is_degenerate(&self, path_width: T) -> bool {
        self.projected_length() < T::lit(0.25) * path_width
    }

    pub fn first(&self) -> Point<T> {
        self.points[0]
    }

    pub fn last(&self) -> Point<T> {
        self.points[self.points.len() - 1]
    }

    pub fn midpoint_set(&self) -> Vec<Point<T>> {
        self.edges().map(|(a, b)| a.lerp(b, T::lit(0.5))).collect()
    }

    /// Horizontal bounding box `(min_x, min_y, max_x, max_y)`.
    pub fn bbox_xy(&self) -> (T, T, T, T) {
        let mut b = (T::infinity(), T::infinity(), T::neg_infinity(), T::neg_infinity());
        for p in &self.points {
            b.0 = b.0.min(p.x);
            b.1 = b.1.min(p.y);
            b.2 = b.2.max(p.x);
            b.3 = b.3.max(p.y);
        }
        b
    }

    pub fn x_range(&self) -> (T, T) {
        let (x0, _, x1, _) = self.bbox_xy();
        (x0, x1)
    }
}

fn cross2<T: Real>(ax: T, ay: T, bx: T, by: T) -> T {
    ax * by - ay * bx
}

/// Distance in the XY plane from `p` to the segment `[a, b]`.
pub fn point_segment_dist_xy<T: Real>(p: Point<T>, a: Point<T>, b: Point<T>) -> T {
    let (dx, dy) = (b.x - a.x, b.y - a.y);
    let len2 = dx * dx + dy * dy;
    let t = if len2 > T::zero() {
        (((p.x - a.x) * dx + (p.y - a.y) * dy) / len2).max(T::zero()).min(T::one())
    } else {
        T::zero()
    };
    let (qx, qy) = (a.x + dx * t, a.y + dy * t);
    ((p.x - qx) * (p.x - qx) + (p.y - qy) * (p.y - qy)).sqrt()
}

fn on_segment_xy<T: Real>(p: Point<T>, a: Point<T>, b: Point<T>) -> bool {
    p.x >= a.x.min(b.x) && p.x <= a.x.max(b.x) && p.y >= a.y.min(b.y) && p.y <= a.y.max(b.y)
}

/// Exact distance between two segments projected on the XY plane.
pub fn segment_segment_dist_xy<T: Real>(a: Point<T>, b: Point<T>, c: Point<T>, d: Point<T>) -> T {
    let d1 = cross2(b.x - a.x, b.y - a.y, c.x - a.x, c.y - a.y);
    let d2 = cross2(b.x - a.x, b.y - a.y, d.x - a.x, d.y - a.y);
    let d3 = cross2(d.x - c.x, d.y - c.y, a.x - c.x, a.y - c.y);
    let d4 = cross2(d.x - c.x, d.y - c.y, b.x - c.x, b.y - c.y);
    let zero = T::zero();
    let straddle = |u: T, v: T| (u > zero && v < zero) || (u < zero && v > zero);
    if straddle(d1, d2) && straddle(d3, d4) {
        return zero;
    }
    if (d1 == zero && on_segment_xy(c, a, b))
        || (d2 == zero && on_segment_xy(d, a, b))
        || (d3 == zero && on_segment_xy(a, c, d))
        || (d4 == zero && on_segment_xy(b, c, d))
    {
        return zero;
    }
    point_segment_dist_xy(a, c, d)
        .min(point_segment_dist_xy(b, c, d))
        .min(point_segment_dist_xy(c, a, b))
        .min(point_segment_dist_xy(d, a, b))
}

/// Minimum distance between the horizontal projections of two elements, edge against edge.
pub fn element_distance<T: Real>(a: &LayerElement<T>, b: &LayerElement<T>) -> T {
    let mut best = T::infinity();
    if a.points.len() == 1 || b.points.len() == 1 {
        for p in &a.points {
            for q in &b.points {
                best = best.min(p.horizontal_dist(*q));
            }
        }
    }
    for (p, q) in a.edges() {
        for (r, s) in b.edges() {
            best = best.min(segment_segment_dist_xy(p, q, r, s));
            if best == T::zero() {
                return best;
            }
        }
    }
    if a.points.len() == 1 && b.points.len() > 1 {
        for (r, s) in b.edges() {
            best = best.min(point_segment_dist_xy(a.points[0], r, s));
        }
    }
    if b.points.len() == 1 && a.points.len() > 1 {
        for (r, s) in a.edges() {
            best = best.min(point_segment_dist_xy(b.points[0], r, s));
        }
    }
    best
}

/// `element_distance(a, b) < limit`, with a bounding-box early exit.
pub fn elements_within<T: Real>(a: &LayerElement<T>, b: &LayerElement<T>, limit: T) -> bool {
    let (ax0, ay0, ax1, ay1) = a.bbox_xy();
    let (bx0, by0, bx1, by1) = b.bbox_xy();
    let gx = (bx0 - ax1).max(ax0 - bx1).max(T::zero());
    let gy = (by0 - ay1).max(ay0 - by1).max(T::zero());
    if (gx * gx + gy * gy).sqrt() >= limit {
        return false;
    }
    element_distance(a, b) < limit
}

/// Horizontal distance from a point to an element's polyline.
pub fn point_element_dist<T: Real>(p: Point<T>, e: &LayerElement<T>) -> T {
    if e.points.len() == 1 {
        return p.horizontal_dist(e.points[0]);
    }
    e.edges().map(|(a, b)| point_segment_dist_xy(p, a, b)).fold(T::infinity(), T::min)
}
