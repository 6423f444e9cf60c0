use std::ops::{Add, Mul, Neg, Sub};

use crate::scalar::Real;

/// A position in millimetres. Profile mode keeps `y == 0`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Point<T> {
    pub x: T,
    pub y: T,
    pub z: T,
}

impl<T: Real> Point<T> {
    pub fn new(x: T, y: T, z: T) -> Self {
        Self { x, y, z }
    }

    /// A point in the vertical profile plane.
    pub fn xz(x: T, z: T) -> Self {
        Self { x, y: T::zero(), z }
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }

    pub fn dot(self, o: Self) -> T {
        self.x * o.x + self.y * o.y + self.z * o.z
    }

    pub fn cross(self, o: Self) -> Self {
        Self::new(self.y * o.z - self.z * o.y, self.z * o.x - self.x * o.z, self.x * o.y - self.y * o.x)
    }

    pub fn norm(self) -> T {
        self.dot(self).sqrt()
    }

    pub fn dist(self, o: Self) -> T {
        (self - o).norm()
    }

    /// Distance between the projections onto the build plate.
    pub fn horizontal_dist(self, o: Self) -> T {
        let dx = self.x - o.x;
        let dy = self.y - o.y;
        (dx * dx + dy * dy).sqrt()
    }

    /// Drops the height.
    pub fn flatten(self) -> Self {
        Self::new(self.x, self.y, T::zero())
    }

    /// `self + (o - self) * w`.
    pub fn lerp(self, o: Self, w: T) -> Self {
        self + (o - self) * w
    }
}

impl<T: Real> Add for Point<T> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self::new(self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl<T: Real> Sub for Point<T> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self::new(self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl<T: Real> Mul<T> for Point<T> {
    type Output = Self;
    fn mul(self, s: T) -> Self {
        Self::new(self.x * s, self.y * s, self.z * s)
    }
}

impl<T: Real> Neg for Point<T> {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.x, -self.y, -self.z)
    }
}

/// Length of an open polyline.
pub fn polyline_length<T: Real>(points: &[Point<T>]) -> T {
    points.windows(2).map(|w| w[0].dist(w[1])).fold(T::zero(), |a, b| a + b)
}

/// Perimeter of a closed polyline (the closing edge is implicit).
pub fn loop_length<T: Real>(points: &[Point<T>]) -> T {
    match points.len() {
        0 | 1 => T::zero(),
        n => polyline_length(points) + points[n - 1].dist(points[0]),
    }
}

/// Resamples a polyline so that no edge is longer than `max_step`; original vertices are kept.
pub fn densify<T: Real>(points: &[Point<T>], max_step: T) -> Vec<Point<T>> {
    let mut out = Vec::with_capacity(points.len());
    for (i, &p) in points.iter().enumerate() {
        if i > 0 {
            let q = points[i - 1];
            let len = q.dist(p);
            if len > max_step {
                let parts = (len / max_step).ceil().to_usize().unwrap_or(1).max(1);
                for k in 1..parts {
                    out.push(q.lerp(p, T::from_count(k) / T::from_count(parts)));
                }
            }
        }
        out.push(p);
    }
    out
}

/// Arc-length uniform resampling of a closed loop into `m` points, starting at `points[0]`.
pub fn resample_loop<T: Real>(points: &[Point<T>], m: usize) -> Vec<Point<T>> {
    let n = points.len();
    if n == 0 || m == 0 {
        return Vec::new();
    }
    let total = loop_length(points);
    if total <= T::zero() {
        return vec![points[0]; m];
    }
    let step = total / T::from_count(m);
    let mut out = Vec::with_capacity(m);
    let mut edge = 0usize;
    let mut edge_start = T::zero();
    for k in 0..m {
        let target = step * T::from_count(k);
        loop {
            let a = points[edge % n];
            let b = points[(edge + 1) % n];
            let len = a.dist(b);
            if target <= edge_start + len || edge + 1 >= n {
                let w = if len > T::zero() {
                    ((target - edge_start) / len).min(T::one()).max(T::zero())
                } else {
                    T::zero()
                };
                out.push(a.lerp(b, w));
                break;
            }
            edge_start += len;
            edge += 1;
        }
    }
    out
}
