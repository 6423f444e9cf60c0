use crate::error::Result;
use crate::geometry::element::point_element_dist;
use crate::geometry::point::densify;
use crate::geometry::slice::{slice_model, Layer};
use crate::geometry::{Point, SlopeLimits, SurfaceModel, TriMesh};
use crate::scalar::Real;

/// Overhanging samples of one element whose downward rays reach the build plate.
#[derive(Debug, Clone, PartialEq)]
pub struct SupportRegion<T> {
    pub layer_index: usize,
    pub element: usize,
    pub points: Vec<Point<T>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SupportReport<T> {
    pub feasible: bool,
    pub support_regions: Vec<SupportRegion<T>>,
    /// Overhanging samples whose rays hit the model below the adjacent layer.
    pub blocked: Vec<Point<T>>,
}

/// Downward ray test for overhangs steeper than the slope limit.
///
/// A sample on layer `i` needs support when no element of layer `i - 1` lies within the
/// horizontal allowance `thickness / tan(theta_max)`. Its ray must then miss the model
/// (other than the adjacent layer) for the orientation to be printable.
pub fn support_feasible<T: Real>(
    model: &SurfaceModel<T>,
    slope: &SlopeLimits<T>,
    thickness: T,
    path_width: T,
) -> Result<SupportReport<T>> {
    let layers = slice_model(model, thickness)?;
    let allowance = thickness / slope.tan_max().max(T::epsilon());
    let step = path_width * T::lit(0.25);
    let mut report = SupportReport { feasible: true, support_regions: Vec::new(), blocked: Vec::new() };
    for i in 1..layers.len() {
        let below = &layers[i - 1];
        for e in &layers[i].elements {
            let mut pts = e.points.clone();
            if e.is_contour() {
                pts.push(pts[0]);
            }
            let mut region: Vec<Point<T>> = Vec::new();
            for p in densify(&pts, step) {
                let supported = below.elements.iter().any(|b| point_element_dist(p, b) <= allowance);
                if supported {
                    flush(&mut report, &mut region, i, e.id);
                    continue;
                }
                if ray_hits_model(model, &layers[..i - 1], p, thickness) {
                    report.feasible = false;
                    report.blocked.push(p);
                    flush(&mut report, &mut region, i, e.id);
                } else {
                    region.push(p);
                }
            }
            flush(&mut report, &mut region, i, e.id);
        }
    }
    Ok(report)
}

fn flush<T: Real>(report: &mut SupportReport<T>, region: &mut Vec<Point<T>>, layer: usize, element: usize) {
    if !region.is_empty() {
        report.support_regions.push(SupportRegion { layer_index: layer, element, points: std::mem::take(region) });
    }
}

fn ray_hits_model<T: Real>(model: &SurfaceModel<T>, lower: &[Layer<T>], p: Point<T>, thickness: T) -> bool {
    match model {
        // Profile layers are exact material intervals.
        SurfaceModel::Profile(_) => {
            lower.iter().any(|l| l.elements.iter().any(|e| point_element_dist(p, e) <= T::tolerance()))
        }
        SurfaceModel::Mesh(m) => ray_hits_mesh(m, p, p.z - thickness * T::lit(1.5)),
    }
}

/// Whether the downward vertical ray from `p` meets a triangle below height `below`.
fn ray_hits_mesh<T: Real>(mesh: &TriMesh<T>, p: Point<T>, below: T) -> bool {
    mesh.triangles.iter().any(|t| {
        let (a, b, c) = (mesh.vertices[t[0]], mesh.vertices[t[1]], mesh.vertices[t[2]]);
        let det = (b.x - a.x) * (c.y - a.y) - (c.x - a.x) * (b.y - a.y);
        if det.abs() <= T::epsilon() {
            return false;
        }
        let u = ((p.x - a.x) * (c.y - a.y) - (c.x - a.x) * (p.y - a.y)) / det;
        let v = ((b.x - a.x) * (p.y - a.y) - (p.x - a.x) * (b.y - a.y)) / det;
        if u < T::zero() || v < T::zero() || u + v > T::one() {
            return false;
        }
        let z = a.z + u * (b.z - a.z) + v * (c.z - a.z);
        z < below
    })
}
