//! Uniform flat slicing of profiles and meshes into per-layer elements.

use std::collections::HashMap;

use crate::error::{OppError, Result};
use crate::geometry::model::signed_area_xy;
use crate::geometry::{LayerElement, Point, Profile, SurfaceModel, TriMesh};
use crate::scalar::Real;

/// Elements of one slicing plane.
#[derive(Debug, Clone, PartialEq)]
pub struct Layer<T> {
    pub index: usize,
    pub z: T,
    pub elements: Vec<LayerElement<T>>,
}

/// Slices `model` with horizontal planes at `min_z + (i + 0.5) * thickness`.
pub fn slice_model<T: Real>(model: &SurfaceModel<T>, thickness: T) -> Result<Vec<Layer<T>>> {
    if !(thickness > T::zero()) {
        return Err(OppError::InvalidConfig(vec![format!("slicing thickness must be positive, got {thickness}")]));
    }
    let Some((lo, hi)) = model.bounds() else {
        return Ok(Vec::new());
    };
    if let SurfaceModel::Mesh(mesh) = model {
        check_manifold(mesh)?;
    }
    let mut layers = Vec::new();
    let mut next_id = 0usize;
    let mut i = 0usize;
    loop {
        let z = lo.z + (T::from_count(i) + T::lit(0.5)) * thickness;
        if z >= hi.z {
            break;
        }
        let polylines = match model {
            SurfaceModel::Profile(p) => slice_profile_at(p, z)
                .into_iter()
                .map(|(x0, x1)| (false, vec![Point::xz(x0, z), Point::xz(x1, z)]))
                .collect(),
            SurfaceModel::Mesh(m) => slice_mesh_at(m, z),
        };
        let mut elements: Vec<LayerElement<T>> = polylines
            .into_iter()
            .map(
                |(closed, pts)| {
                    if closed {
                        LayerElement::contour(0, i, z, pts)
                    } else {
                        LayerElement::segment(0, i, z, pts)
                    }
                },
            )
            .collect();
        elements.sort_by(|a, b| {
            let (ax, ay, _, _) = a.bbox_xy();
            let (bx, by, _, _) = b.bbox_xy();
            ax.partial_cmp(&bx)
                .unwrap_or(std::cmp::Ordering::Equal)
                .then(ay.partial_cmp(&by).unwrap_or(std::cmp::Ordering::Equal))
        });
        for e in &mut elements {
            e.id = next_id;
            next_id += 1;
        }
        layers.push(Layer { index: i, z, elements });
        i += 1;
    }
    Ok(layers)
}

/// Material intervals `(x0, x1)` of the profile on the line at height `z`, sorted by `x0`.
pub fn slice_profile_at<T: Real>(profile: &Profile<T>, z: T) -> Vec<(T, T)> {
    let mut xs: Vec<T> = profile.edges().filter_map(|(a, b)| crossing(a.z, a.x, b.z, b.x, z)).collect();
    pair_crossings(&mut xs)
}

/// Material intervals `(z0, z1)` of the rings on the vertical line at `x`.
pub fn vertical_intervals<T: Real>(edges: impl Iterator<Item = (Point<T>, Point<T>)>, x: T) -> Vec<(T, T)> {
    let mut zs: Vec<T> = edges.filter_map(|(a, b)| crossing(a.x, a.z, b.x, b.z, x)).collect();
    pair_crossings(&mut zs)
}

/// Half-open crossing rule: the edge from `(u0, v0)` to `(u1, v1)` crosses `u = at`.
fn crossing<T: Real>(u0: T, v0: T, u1: T, v1: T, at: T) -> Option<T> {
    if (u0 <= at && at < u1) || (u1 <= at && at < u0) {
        Some(v0 + (at - u0) * (v1 - v0) / (u1 - u0))
    } else {
        None
    }
}

fn pair_crossings<T: Real>(vals: &mut [T]) -> Vec<(T, T)> {
    vals.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
    let mut out: Vec<(T, T)> = Vec::new();
    for pair in vals.chunks_exact(2) {
        let (a, b) = (pair[0], pair[1]);
        if b - a <= T::tolerance() {
            continue;
        }
        match out.last_mut() {
            Some(last) if a - last.1 <= T::tolerance() => last.1 = b,
            _ => out.push((a, b)),
        }
    }
    out
}

fn check_manifold<T: Real>(mesh: &TriMesh<T>) -> Result<()> {
    let mut uses: HashMap<(usize, usize), usize> = HashMap::new();
    for t in &mesh.triangles {
        for k in 0..3 {
            let (a, b) = (t[k], t[(k + 1) % 3]);
            *uses.entry((a.min(b), a.max(b))).or_default() += 1;
        }
    }
    let mut bad: Vec<_> = uses.into_iter().filter(|&(_, n)| n > 2).collect();
    bad.sort();
    if let Some(&((a, b), n)) = bad.first() {
        return Err(OppError::NonManifold(format!(
            "edge ({a}, {b}) is shared by {n} triangles ({} such edges)",
            bad.len()
        )));
    }
    Ok(())
}

/// Polylines `(closed, points)` of the mesh cross-section at height `z`.
fn slice_mesh_at<T: Real>(mesh: &TriMesh<T>, z: T) -> Vec<(bool, Vec<Point<T>>)> {
    type Key = (usize, usize);
    let above = |v: usize| mesh.vertices[v].z >= z;
    let cut = |a: usize, b: usize| -> Point<T> {
        let (p, q) = (mesh.vertices[a], mesh.vertices[b]);
        let w = (z - p.z) / (q.z - p.z);
        let mut r = p.lerp(q, w);
        r.z = z;
        r
    };
    // Each crossing triangle contributes one segment between two cut edges.
    let mut segs: Vec<(Key, Key)> = Vec::new();
    let mut points: HashMap<Key, Point<T>> = HashMap::new();
    for t in &mesh.triangles {
        let mut keys = Vec::with_capacity(2);
        for k in 0..3 {
            let (a, b) = (t[k], t[(k + 1) % 3]);
            if above(a) != above(b) {
                let key = (a.min(b), a.max(b));
                points.entry(key).or_insert_with(|| cut(key.0, key.1));
                keys.push(key);
            }
        }
        if keys.len() == 2 {
            segs.push((keys[0], keys[1]));
        }
    }
    let mut incident: HashMap<Key, Vec<usize>> = HashMap::new();
    for (i, &(a, b)) in segs.iter().enumerate() {
        incident.entry(a).or_default().push(i);
        incident.entry(b).or_default().push(i);
    }
    let mut used = vec![false; segs.len()];
    let mut out = Vec::new();
    let other = |s: usize, k: Key| if segs[s].0 == k { segs[s].1 } else { segs[s].0 };

    // Open chains start at cut edges used once; the remaining ones are loops.
    let mut starts: Vec<Key> = incident.iter().filter(|(_, v)| v.len() == 1).map(|(k, _)| *k).collect();
    starts.sort();
    let walk = |start: Key, used: &mut Vec<bool>| -> Option<(bool, Vec<Key>)> {
        let first = *incident[&start].iter().find(|&&s| !used[s])?;
        let mut chain = vec![start];
        let mut cur_seg = first;
        let mut cur = start;
        loop {
            used[cur_seg] = true;
            let nxt = other(cur_seg, cur);
            if nxt == start {
                return Some((true, chain));
            }
            chain.push(nxt);
            cur = nxt;
            match incident[&cur].iter().find(|&&s| !used[s]) {
                Some(&s) => cur_seg = s,
                None => return Some((false, chain)),
            }
        }
    };
    for s in starts {
        if let Some(c) = walk(s, &mut used) {
            out.push(c);
        }
    }
    let mut rest: Vec<Key> = incident.keys().copied().collect();
    rest.sort();
    for k in rest {
        if incident[&k].iter().any(|&s| !used[s]) {
            if let Some(c) = walk(k, &mut used) {
                out.push(c);
            }
        }
    }
    out.into_iter()
        .filter_map(|(closed, keys)| {
            let mut pts: Vec<Point<T>> = keys.iter().map(|k| points[k]).collect();
            pts.dedup_by(|a, b| a.dist(*b) <= T::tolerance());
            if closed {
                if pts.len() < 3 {
                    return None;
                }
                if signed_area_xy(&pts) < T::zero() {
                    pts.reverse();
                }
                let start = (0..pts.len())
                    .min_by(|&i, &j| {
                        (pts[i].x, pts[i].y).partial_cmp(&(pts[j].x, pts[j].y)).unwrap_or(std::cmp::Ordering::Equal)
                    })
                    .unwrap_or(0);
                pts.rotate_left(start);
            } else if pts.len() < 2 || pts[0].dist(pts[pts.len() - 1]) <= T::tolerance() {
                return None;
            }
            Some((closed, pts))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::ProfilePolygon;

    fn rect(x0: f64, z0: f64, x1: f64, z1: f64) -> ProfilePolygon<f64> {
        ProfilePolygon::from_xz(&[(x0, z0), (x1, z0), (x1, z1), (x0, z1)])
    }

    #[test]
    fn rectangle_gives_one_segment_per_layer() {
        let model = SurfaceModel::Profile(Profile::new(vec![rect(0.0, 0.0, 20.0, 40.0)]).unwrap());
        let layers = slice_model(&model, 1.0).unwrap();
        assert_eq!(layers.len(), 40);
        for (i, l) in layers.iter().enumerate() {
            assert_eq!(l.elements.len(), 1);
            assert!((l.z - (i as f64 + 0.5)).abs() < 1e-12);
        }
        let ids: Vec<_> = layers.iter().flat_map(|l| l.elements.iter().map(|e| e.id)).collect();
        assert_eq!(ids, (0..40).collect::<Vec<_>>());
    }

    #[test]
    fn layers_measured_from_model_bottom() {
        let model = SurfaceModel::Profile(Profile::new(vec![rect(0.0, 10.0, 5.0, 13.0)]).unwrap());
        let layers = slice_model(&model, 1.0).unwrap();
        assert_eq!(layers.len(), 3);
        assert!((layers[0].z - 10.5).abs() < 1e-12);
    }

    #[test]
    fn hole_splits_layer() {
        let mut p = rect(0.0, 0.0, 30.0, 10.0);
        p.holes.push(vec![Point::xz(10.0, 2.0), Point::xz(20.0, 2.0), Point::xz(20.0, 8.0), Point::xz(10.0, 8.0)]);
        let model = SurfaceModel::Profile(Profile::new(vec![p]).unwrap());
        let counts: Vec<_> = slice_model(&model, 1.0).unwrap().iter().map(|l| l.elements.len()).collect();
        assert_eq!(counts, vec![1, 1, 2, 2, 2, 2, 2, 2, 1, 1]);
    }

    #[test]
    fn empty_model_gives_no_layers() {
        let model = SurfaceModel::Profile(Profile::<f64>::new(vec![]).unwrap());
        assert!(slice_model(&model, 1.0).unwrap().is_empty());
    }

    #[test]
    fn rejects_non_positive_thickness() {
        let model = SurfaceModel::Profile(Profile::new(vec![rect(0.0, 0.0, 1.0, 1.0)]).unwrap());
        assert!(slice_model(&model, 0.0).is_err());
    }

    #[test]
    fn non_manifold_mesh_rejected() {
        let v = vec![
            Point::new(0.0, 0.0, 0.0),
            Point::new(1.0, 0.0, 0.0),
            Point::new(0.0, 1.0, 1.0),
            Point::new(0.0, -1.0, 1.0),
            Point::new(1.0, 1.0, 1.0),
        ];
        let mesh = TriMesh::new(v, vec![[0, 1, 2], [0, 1, 3], [0, 1, 4]]).unwrap();
        let err = slice_model(&SurfaceModel::Mesh(mesh), 0.25).unwrap_err();
        assert!(matches!(err, OppError::NonManifold(_)));
    }

    #[test]
    fn open_strip_gives_segments() {
        // vertical strip x in [0, 10], y = 0, z in [0, 3]
        let v: Vec<Point<f64>> = vec![
            Point::new(0.0, 0.0, 0.0),
            Point::new(10.0, 0.0, 0.0),
            Point::new(10.0, 0.0, 3.0),
            Point::new(0.0, 0.0, 3.0),
        ];
        let mesh = TriMesh::new(v, vec![[0, 1, 2], [0, 2, 3]]).unwrap();
        let layers = slice_model::<f64>(&SurfaceModel::Mesh(mesh), 1.0).unwrap();
        assert_eq!(layers.len(), 3);
        for l in &layers {
            assert_eq!(l.elements.len(), 1);
            let e = &l.elements[0];
            assert!(!e.is_contour());
            assert!((e.projected_length() - 10.0).abs() < 1e-9);
        }
    }
}
