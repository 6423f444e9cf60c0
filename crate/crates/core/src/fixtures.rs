//! Small reference models used by tests, benchmarks and the command line `--fixture` flag.
//!
//! Dimensions are in mm and sized for the ceramic preset (1 mm layers, 6 mm paths).

use crate::error::Result;
use crate::geometry::{Point, Profile, ProfilePolygon, SurfaceModel, TriMesh};
use crate::scalar::Real;

fn profile<T: Real>(polys: &[&[(f64, f64)]]) -> SurfaceModel<T> {
    let polys = polys
        .iter()
        .map(|p| ProfilePolygon::from_xz(&p.iter().map(|&(x, z)| (T::lit(x), T::lit(z))).collect::<Vec<_>>()))
        .collect();
    SurfaceModel::Profile(Profile::new(polys).expect("fixture profile is valid"))
}

/// Solid 20 x 40 wall: forty stacked segments.
pub fn rectangle<T: Real>() -> SurfaceModel<T> {
    profile(&[&[(0.0, 0.0), (20.0, 0.0), (20.0, 40.0), (0.0, 40.0)]])
}

/// Stem `[0,60] x [0,20]` splitting into a left arm `[0,10]` and a right arm whose inner
/// side leans at about 22 degrees, both 10 tall.
pub fn gentle_y<T: Real>() -> SurfaceModel<T> {
    profile(&[&[
        (0.0, 0.0),
        (60.0, 0.0),
        (60.0, 30.0),
        (50.0, 30.0),
        (25.0, 20.0),
        (10.0, 20.0),
        (10.0, 30.0),
        (0.0, 30.0),
    ]])
}

/// As [`gentle_y`] but with a vertical right arm `[40,60]`.
pub fn steep_y<T: Real>() -> SurfaceModel<T> {
    profile(&[&[
        (0.0, 0.0),
        (60.0, 0.0),
        (60.0, 30.0),
        (40.0, 30.0),
        (40.0, 20.0),
        (10.0, 20.0),
        (10.0, 30.0),
        (0.0, 30.0),
    ]])
}

/// Two legs joined by a roof: a 50 x 10 slab with a trapezoid notch under the middle
/// whose sides rise at about 27 degrees.
pub fn twin_towers<T: Real>() -> SurfaceModel<T> {
    profile(&[&[
        (0.0, 0.0),
        (10.0, 0.0),
        (20.0, 5.0),
        (30.0, 5.0),
        (40.0, 0.0),
        (50.0, 0.0),
        (50.0, 10.0),
        (0.0, 10.0),
    ]])
}

/// Stem under a wide bar; the bar ends overhang and need support from the plate.
pub fn t_shape<T: Real>() -> SurfaceModel<T> {
    profile(&[&[
        (20.0, 0.0),
        (30.0, 0.0),
        (30.0, 20.0),
        (50.0, 20.0),
        (50.0, 25.0),
        (0.0, 25.0),
        (0.0, 20.0),
        (20.0, 20.0),
    ]])
}

/// A shelf reaching back over the foot; the overhang's rays hit the foot.
pub fn c_shape<T: Real>() -> SurfaceModel<T> {
    profile(&[&[
        (0.0, 0.0),
        (30.0, 0.0),
        (30.0, 5.0),
        (10.0, 5.0),
        (10.0, 20.0),
        (30.0, 20.0),
        (30.0, 25.0),
        (0.0, 25.0),
    ]])
}

/// A 120 wide, 20 tall base carrying three 100 tall teeth: 260 elements.
pub fn comb<T: Real>() -> SurfaceModel<T> {
    profile(&[&[
        (0.0, 0.0),
        (120.0, 0.0),
        (120.0, 100.0),
        (110.0, 100.0),
        (110.0, 20.0),
        (60.0, 20.0),
        (60.0, 100.0),
        (50.0, 100.0),
        (50.0, 20.0),
        (10.0, 20.0),
        (10.0, 100.0),
        (0.0, 100.0),
    ]])
}

/// Two separate walls far apart.
pub fn twin_walls<T: Real>() -> SurfaceModel<T> {
    profile(&[
        &[(0.0, 0.0), (10.0, 0.0), (10.0, 20.0), (0.0, 20.0)],
        &[(60.0, 0.0), (70.0, 0.0), (70.0, 20.0), (60.0, 20.0)],
    ])
}

/// Closed cylinder of radius `r` and height `h`, `sides` facets around.
pub fn cylinder<T: Real>(r: f64, h: f64, sides: usize) -> Result<SurfaceModel<T>> {
    let mut v: Vec<Point<T>> = Vec::with_capacity(2 * sides + 2);
    for z in [0.0, h] {
        for k in 0..sides {
            let a = std::f64::consts::TAU * k as f64 / sides as f64;
            v.push(Point::new(T::lit(r * a.cos()), T::lit(r * a.sin()), T::lit(z)));
        }
    }
    let (bottom, top) = (2 * sides, 2 * sides + 1);
    v.push(Point::new(T::zero(), T::zero(), T::zero()));
    v.push(Point::new(T::zero(), T::zero(), T::lit(h)));
    let mut tris = Vec::with_capacity(4 * sides);
    for k in 0..sides {
        let n = (k + 1) % sides;
        tris.push([k, n, sides + n]);
        tris.push([k, sides + n, sides + k]);
        tris.push([bottom, n, k]);
        tris.push([top, sides + k, sides + n]);
    }
    Ok(SurfaceModel::Mesh(TriMesh::new(v, tris)?))
}

/// Every named fixture, for corpus-wide checks.
pub fn corpus<T: Real>() -> Vec<(&'static str, SurfaceModel<T>)> {
    vec![
        ("rectangle", rectangle()),
        ("gentle_y", gentle_y()),
        ("steep_y", steep_y()),
        ("twin_towers", twin_towers()),
        ("t_shape", t_shape()),
        ("c_shape", c_shape()),
        ("twin_walls", twin_walls()),
        ("comb", comb()),
        ("cylinder", cylinder(20.0, 30.0, 48).expect("valid cylinder")),
    ]
}

/// Fixture by name.
pub fn by_name<T: Real>(name: &str) -> Option<SurfaceModel<T>> {
    corpus().into_iter().find(|(n, _)| *n == name).map(|(_, m)| m)
}
