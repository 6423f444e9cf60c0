use crate::geometry::element::elements_within;
use crate::geometry::LayerElement;
use crate::scalar::{atan_deg, tan_deg, Real};

/// Extruder head: a truncated cone ending in the outlet, topped by a wide carriage.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NozzleModel<T> {
    /// Outlet radius `w`.
    pub outlet_radius: T,
    /// Vertical distance `h` from the tip to the carriage.
    pub nozzle_length: T,
    /// Angle between the cone flank and the horizontal, in degrees.
    pub cone_angle: T,
    /// Reference layer thickness `t` used for the outlet angle.
    pub reference_thickness: T,
    /// Horizontal extent of the carriage above the cone.
    pub carriage_radius: T,
}

impl<T: Real> NozzleModel<T> {
    /// Carriage radius defaults to ten outlet radii.
    pub fn new(outlet_radius: T, nozzle_length: T, cone_angle: T, reference_thickness: T) -> Self {
        Self {
            outlet_radius,
            nozzle_length,
            cone_angle,
            reference_thickness,
            carriage_radius: T::lit(10.0) * outlet_radius,
        }
    }

    pub fn with_carriage_radius(mut self, r: T) -> Self {
        self.carriage_radius = r;
        self
    }

    /// Field diagnostics; empty when valid.
    pub fn diagnostics(&self) -> Vec<String> {
        let mut out = Vec::new();
        if !(self.outlet_radius > T::zero()) {
            out.push(format!("nozzle.outlet_radius must be > 0 (got {})", self.outlet_radius));
        }
        if !(self.nozzle_length > T::zero()) {
            out.push(format!("nozzle.nozzle_length must be > 0 (got {})", self.nozzle_length));
        }
        if !(self.cone_angle > T::zero() && self.cone_angle < T::lit(90.0)) {
            out.push(format!("nozzle.cone_angle must be in (0, 90) (got {})", self.cone_angle));
        }
        if !(self.reference_thickness > T::zero()) {
            out.push(format!("nozzle.reference_thickness must be > 0 (got {})", self.reference_thickness));
        }
        if !(self.carriage_radius >= self.outlet_radius) {
            out.push(format!("nozzle.carriage_radius must be >= outlet_radius (got {})", self.carriage_radius));
        }
        out
    }

    /// Radius of the head at height `dz` above the tip (zero below the tip).
    pub fn radius_at(&self, dz: T) -> T {
        if dz < T::zero() {
            T::zero()
        } else if dz >= self.nozzle_length {
            self.carriage_radius
        } else {
            (self.outlet_radius + dz / tan_deg(self.cone_angle)).min(self.carriage_radius)
        }
    }
}

/// Slope-angle limits in degrees.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SlopeLimits<T> {
    pub nozzle: T,
    pub object: T,
    pub outlet: T,
    pub max: T,
}

impl<T: Real> SlopeLimits<T> {
    pub fn tan_max(&self) -> T {
        tan_deg(self.max)
    }
}

/// `object_extent` is the largest XY extent of the already printed object; zero disables the term.
pub fn compute_slope_limits<T: Real>(nozzle: &NozzleModel<T>, object_extent: T) -> SlopeLimits<T> {
    let right = T::lit(90.0);
    let object = if object_extent <= T::zero() { right } else { atan_deg(nozzle.nozzle_length / object_extent) };
    let outlet = atan_deg(nozzle.reference_thickness / nozzle.outlet_radius);
    let nozzle_angle = nozzle.cone_angle.min(right);
    SlopeLimits { nozzle: nozzle_angle, object, outlet, max: nozzle_angle.min(object).min(outlet) }
}

/// Whether depositing `printing` would hit the already printed `printed`.
///
/// Printed material is the polyline thickened by `path_width / 2` horizontally and by
/// `layer_thickness` vertically around its plane. Elements up to one layer above the
/// printing layer never collide. Because the head widens monotonically with height,
/// testing the top of the ribbon against the horizontal distance is exact.
pub fn nozzle_collides<T: Real>(
    printing: &LayerElement<T>,
    printed: &LayerElement<T>,
    nozzle: &NozzleModel<T>,
    path_width: T,
    layer_thickness: T,
) -> bool {
    if printed.layer_index <= printing.layer_index + 1 {
        return false;
    }
    let top = printed.z + layer_thickness * T::lit(0.5) - printing.z;
    if top <= layer_thickness {
        return false;
    }
    let reach = nozzle.radius_at(top) + path_width * T::lit(0.5);
    elements_within(printing, printed, reach)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Point;
    use approx::assert_abs_diff_eq;

    #[test]
    fn preset_angles() {
        let ceramic = NozzleModel::new(2.6, 90.0, 80.0, 1.5);
        let s = compute_slope_limits(&ceramic, 0.0);
        assert_abs_diff_eq!(s.outlet, 29.982, epsilon = 1e-3);
        assert_abs_diff_eq!(s.max, 30.0, epsilon = 0.5);
        let fdm = NozzleModel::new(0.5, 8.0, 80.0, 0.35);
        assert_abs_diff_eq!(compute_slope_limits(&fdm, 0.0).max, 35.0, epsilon = 0.5);
    }

    #[test]
    fn zero_thickness_limit() {
        let n = NozzleModel::new(2.6, 90.0, 80.0, 1e-12);
        assert!(compute_slope_limits(&n, 0.0).max < 1e-9);
    }

    #[test]
    fn object_term_takes_over() {
        let n = NozzleModel::new(2.6, 90.0, 80.0, 1.5);
        let s = compute_slope_limits(&n, 1000.0);
        assert_abs_diff_eq!(s.object, (90.0f64 / 1000.0).atan().to_degrees(), epsilon = 1e-9);
        assert_eq!(s.max, s.object);
    }

    fn wall(id: usize, layer: usize, x: f64) -> LayerElement<f64> {
        let z = layer as f64 + 0.5;
        LayerElement::segment(id, layer, z, vec![Point::xz(x, z), Point::xz(x + 10.0, z)])
    }

    /// Dense sampling of head and ribbon volumes in the profile plane.
    fn sampled_collision(
        printing: &LayerElement<f64>,
        printed: &LayerElement<f64>,
        n: &NozzleModel<f64>,
        pw: f64,
        t: f64,
    ) -> bool {
        if printed.layer_index <= printing.layer_index + 1 {
            return false;
        }
        let (px0, px1) = printing.x_range();
        let (qx0, qx1) = printed.x_range();
        let steps = 200;
        for i in 0..=steps {
            let tip = px0 + (px1 - px0) * i as f64 / steps as f64;
            for j in 0..=steps {
                let x = qx0 - pw / 2.0 + (qx1 - qx0 + pw) * j as f64 / steps as f64;
                for k in 0..=20 {
                    let z = printed.z - t / 2.0 + t * k as f64 / 20.0;
                    let dz = z - printing.z;
                    if dz >= 0.0 && (x - tip).abs() < n.radius_at(dz) {
                        return true;
                    }
                }
            }
        }
        false
    }

    #[test]
    fn tall_wall_nearby_collides() {
        let n = NozzleModel::new(0.5, 8.0, 80.0, 0.35);
        let printing = wall(0, 4, 0.0); // z = 4.5
        let printed = LayerElement::segment(1, 19, 19.5, vec![Point::xz(11.0, 19.5), Point::xz(12.0, 19.5)]);
        assert!(nozzle_collides(&printing, &printed, &n, 1.5, 1.0));
        assert!(sampled_collision(&printing, &printed, &n, 1.5, 1.0));
    }

    #[test]
    fn lower_geometry_exempt() {
        let n = NozzleModel::new(0.5, 8.0, 80.0, 0.35);
        assert!(!nozzle_collides(&wall(0, 10, 0.0), &wall(1, 3, 0.0), &n, 1.5, 1.0));
        assert!(!nozzle_collides(&wall(0, 10, 0.0), &wall(1, 11, 0.0), &n, 1.5, 1.0));
    }

    #[test]
    fn distant_wall_out_of_reach() {
        let n = NozzleModel::new(0.5, 8.0, 80.0, 0.35);
        assert!(!nozzle_collides(&wall(0, 0, 0.0), &wall(1, 30, 500.0), &n, 1.5, 1.0));
    }

    #[test]
    fn matches_sampling_oracle_on_grid() {
        let n = NozzleModel::new(1.0, 6.0, 60.0, 0.5);
        for layer in 2..14 {
            for gap in [0.0, 0.9, 1.6, 2.5, 4.0, 8.0, 12.0] {
                let printing = wall(0, 0, 0.0);
                let printed = wall(1, layer, 10.0 + gap);
                let exact = nozzle_collides(&printing, &printed, &n, 1.0, 1.0);
                let sampled = sampled_collision(&printing, &printed, &n, 1.0, 1.0);
                // Sampling can miss contacts thinner than its grid, never invent them.
                if sampled {
                    assert!(exact, "layer {layer} gap {gap}");
                }
                if exact && !sampled {
                    let reach = n.radius_at(printed.z + 0.5 - printing.z) + 0.5;
                    assert!((gap - reach).abs() < 0.1, "layer {layer} gap {gap}");
                }
            }
        }
    }
}
