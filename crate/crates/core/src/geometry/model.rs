use crate::error::{OppError, Result};
use crate::geometry::Point;
use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ModelMode {
    /// Material cross-section in the vertical XZ plane.
    Profile2d,
    /// Triangle surface in 3D.
    Mesh3d,
}

/// One polygon of a profile: an outer ring with optional holes, vertices in the XZ plane.
#[derive(Debug, Clone, PartialEq)]
pub struct ProfilePolygon<T> {
    pub outer: Vec<Point<T>>,
    pub holes: Vec<Vec<Point<T>>>,
}

impl<T: Real> ProfilePolygon<T> {
    pub fn new(outer: Vec<Point<T>>, holes: Vec<Vec<Point<T>>>) -> Self {
        Self { outer, holes }
    }

    /// Builds a hole-free polygon from `(x, z)` pairs.
    pub fn from_xz(vertices: &[(T, T)]) -> Self {
        Self::new(vertices.iter().map(|&(x, z)| Point::xz(x, z)).collect(), Vec::new())
    }

    pub fn rings(&self) -> impl Iterator<Item = &Vec<Point<T>>> {
        std::iter::once(&self.outer).chain(self.holes.iter())
    }
}

/// Signed area of a ring in the XZ plane (counter-clockwise positive).
pub fn signed_area_xz<T: Real>(ring: &[Point<T>]) -> T {
    let n = ring.len();
    let mut acc = T::zero();
    for i in 0..n {
        let a = ring[i];
        let b = ring[(i + 1) % n];
        acc += a.x * b.z - b.x * a.z;
    }
    acc * T::lit(0.5)
}

/// Signed area of a ring projected on the XY plane.
pub fn signed_area_xy<T: Real>(ring: &[Point<T>]) -> T {
    let n = ring.len();
    let mut acc = T::zero();
    for i in 0..n {
        let a = ring[i];
        let b = ring[(i + 1) % n];
        acc += a.x * b.y - b.x * a.y;
    }
    acc * T::lit(0.5)
}

fn orient2(a: (f64, f64), b: (f64, f64), c: (f64, f64)) -> f64 {
    (b.0 - a.0) * (c.1 - a.1) - (b.1 - a.1) * (c.0 - a.0)
}

fn proper_cross(a: (f64, f64), b: (f64, f64), c: (f64, f64), d: (f64, f64)) -> bool {
    let d1 = orient2(a, b, c);
    let d2 = orient2(a, b, d);
    let d3 = orient2(c, d, a);
    let d4 = orient2(c, d, b);
    ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0)) && ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0))
}

/// Material cross-section in a vertical plane: a set of simple polygons with holes.
#[derive(Debug, Clone, PartialEq)]
pub struct Profile<T> {
    polygons: Vec<ProfilePolygon<T>>,
}

impl<T: Real> Profile<T> {
    /// Validates simplicity and normalises orientation (outer rings CCW, holes CW).
    pub fn new(mut polygons: Vec<ProfilePolygon<T>>) -> Result<Self> {
        for (pi, poly) in polygons.iter_mut().enumerate() {
            for (ri, ring) in std::iter::once(&mut poly.outer).chain(poly.holes.iter_mut()).enumerate() {
                if ring.len() > 1 && ring.first() == ring.last() {
                    ring.pop();
                }
                if ring.len() < 3 {
                    return Err(OppError::InvalidModel(format!("polygon {pi} ring {ri} has fewer than 3 vertices")));
                }
                if ring.iter().any(|p| !p.is_finite()) {
                    return Err(OppError::InvalidModel(format!("polygon {pi} ring {ri} has a non-finite vertex")));
                }
                for p in ring.iter_mut() {
                    p.y = T::zero();
                }
                let area = signed_area_xz(ring);
                if area == T::zero() {
                    return Err(OppError::InvalidModel(format!("polygon {pi} ring {ri} has zero area")));
                }
                let want_ccw = ri == 0;
                if (area > T::zero()) != want_ccw {
                    ring.reverse();
                }
            }
            let edges: Vec<((f64, f64), (f64, f64))> = poly
                .rings()
                .flat_map(|ring| {
                    let n = ring.len();
                    (0..n).map(move |i| {
                        let a = ring[i];
                        let b = ring[(i + 1) % n];
                        ((a.x.as_f64(), a.z.as_f64()), (b.x.as_f64(), b.z.as_f64()))
                    })
                })
                .collect();
            for i in 0..edges.len() {
                for j in i + 1..edges.len() {
                    if proper_cross(edges[i].0, edges[i].1, edges[j].0, edges[j].1) {
                        return Err(OppError::InvalidModel(format!(
                            "polygon {pi} self-intersects (edges {i} and {j})"
                        )));
                    }
                }
            }
        }
        Ok(Self { polygons })
    }

    pub fn polygons(&self) -> &[ProfilePolygon<T>] {
        &self.polygons
    }

    /// All ring edges as point pairs.
    pub fn edges(&self) -> impl Iterator<Item = (Point<T>, Point<T>)> + '_ {
        self.polygons.iter().flat_map(|poly| {
            poly.rings().flat_map(|ring| {
                let n = ring.len();
                (0..n).map(move |i| (ring[i], ring[(i + 1) % n]))
            })
        })
    }

    pub fn area(&self) -> T {
        self.polygons.iter().map(|p| p.rings().map(|r| signed_area_xz(r)).sum::<T>()).fold(T::zero(), |a, b| a + b)
    }

    /// Rotates the profile in its plane by `deg` degrees about the origin.
    pub fn rotated(&self, deg: T) -> Result<Self> {
        let (s, c) = deg.to_radians().sin_cos();
        let rot = |p: &Point<T>| Point::xz(c * p.x - s * p.z, s * p.x + c * p.z);
        Self::new(
            self.polygons
                .iter()
                .map(|poly| {
                    ProfilePolygon::new(
                        poly.outer.iter().map(rot).collect(),
                        poly.holes.iter().map(|h| h.iter().map(rot).collect()).collect(),
                    )
                })
                .collect(),
        )
    }
}

/// Indexed triangle surface.
#[derive(Debug, Clone, PartialEq)]
pub struct TriMesh<T> {
    pub vertices: Vec<Point<T>>,
    pub triangles: Vec<[usize; 3]>,
}

impl<T: Real> TriMesh<T> {
    pub fn new(vertices: Vec<Point<T>>, triangles: Vec<[usize; 3]>) -> Result<Self> {
        if let Some((ti, _)) = triangles.iter().enumerate().find(|(_, t)| t.iter().any(|&v| v >= vertices.len())) {
            return Err(OppError::InvalidModel(format!("triangle {ti} references a missing vertex")));
        }
        if vertices.iter().any(|p| !p.is_finite()) {
            return Err(OppError::InvalidModel("non-finite vertex".into()));
        }
        Ok(Self { vertices, triangles })
    }

    /// Builds an indexed mesh from triangle soup, welding identical vertices.
    pub fn from_soup(tris: &[[Point<T>; 3]]) -> Result<Self> {
        let mut index = std::collections::HashMap::new();
        let mut vertices = Vec::new();
        let mut triangles = Vec::with_capacity(tris.len());
        for tri in tris {
            let mut ids = [0usize; 3];
            for (k, p) in tri.iter().enumerate() {
                let key = (p.x.as_f64().to_bits(), p.y.as_f64().to_bits(), p.z.as_f64().to_bits());
                ids[k] = *index.entry(key).or_insert_with(|| {
                    vertices.push(*p);
                    vertices.len() - 1
                });
            }
            if ids[0] != ids[1] && ids[1] != ids[2] && ids[0] != ids[2] {
                triangles.push(ids);
            }
        }
        Self::new(vertices, triangles)
    }

    /// Rotation taking `dir` onto +z.
    pub fn oriented(&self, dir: Point<T>) -> Result<Self> {
        let d = dir * (T::one() / dir.norm());
        let z = Point::new(T::zero(), T::zero(), T::one());
        let axis = d.cross(z);
        let s = axis.norm();
        let c = d.dot(z);
        let vertices = if s <= T::tolerance() {
            if c > T::zero() {
                self.vertices.clone()
            } else {
                self.vertices.iter().map(|p| Point::new(p.x, -p.y, -p.z)).collect()
            }
        } else {
            let k = axis * (T::one() / s);
            // Rodrigues
            self.vertices.iter().map(|&p| p * c + k.cross(p) * s + k * (k.dot(p) * (T::one() - c))).collect()
        };
        Self::new(vertices, self.triangles.clone())
    }
}

/// Input shell model.
#[derive(Debug, Clone, PartialEq)]
pub enum SurfaceModel<T> {
    Profile(Profile<T>),
    Mesh(TriMesh<T>),
}

impl<T: Real> SurfaceModel<T> {
    pub fn mode(&self) -> ModelMode {
        match self {
            SurfaceModel::Profile(_) => ModelMode::Profile2d,
            SurfaceModel::Mesh(_) => ModelMode::Mesh3d,
        }
    }

    pub fn is_empty(&self) -> bool {
        match self {
            SurfaceModel::Profile(p) => p.polygons().is_empty(),
            SurfaceModel::Mesh(m) => m.triangles.is_empty(),
        }
    }

    /// `(min, max)` corners of the bounding box, `None` for an empty model.
    pub fn bounds(&self) -> Option<(Point<T>, Point<T>)> {
        let mut it: Box<dyn Iterator<Item = Point<T>> + '_> = match self {
            SurfaceModel::Profile(p) => Box::new(p.edges().map(|(a, _)| a)),
            SurfaceModel::Mesh(m) => Box::new(m.triangles.iter().flat_map(|t| t.iter().map(|&i| m.vertices[i]))),
        };
        let first = it.next()?;
        Some(it.fold((first, first), |(lo, hi), p| {
            (
                Point::new(lo.x.min(p.x), lo.y.min(p.y), lo.z.min(p.z)),
                Point::new(hi.x.max(p.x), hi.y.max(p.y), hi.z.max(p.z)),
            )
        }))
    }

    /// Maximum horizontal extent (bounding-box diagonal in XY).
    pub fn horizontal_extent(&self) -> T {
        self.bounds().map(|(lo, hi)| lo.horizontal_dist(hi)).unwrap_or_else(T::zero)
    }

    /// Candidate printing directions for orientation search.
    ///
    /// Profiles are rotated in-plane in `count` equal steps; meshes use a Fibonacci
    /// sampling of the upper-and-lower sphere starting at +z.
    pub fn candidate_orientations(&self, count: usize) -> Result<Vec<SurfaceModel<T>>> {
        let count = count.max(1);
        match self {
            SurfaceModel::Profile(p) => (0..count)
                .map(|k| {
                    let deg = T::lit(360.0) * T::from_count(k) / T::from_count(count);
                    Ok(SurfaceModel::Profile(p.rotated(deg)?))
                })
                .collect(),
            SurfaceModel::Mesh(m) => {
                let golden = T::PI() * (T::lit(3.0) - T::lit(5.0).sqrt());
                (0..count)
                    .map(|k| {
                        let z = if count == 1 {
                            T::one()
                        } else {
                            T::one() - T::lit(2.0) * T::from_count(k) / T::from_count(count - 1)
                        };
                        let r = (T::one() - z * z).max(T::zero()).sqrt();
                        let phi = golden * T::from_count(k);
                        let dir = Point::new(r * phi.cos(), r * phi.sin(), z);
                        Ok(SurfaceModel::Mesh(m.oriented(dir)?))
                    })
                    .collect()
            }
        }
    }
}
