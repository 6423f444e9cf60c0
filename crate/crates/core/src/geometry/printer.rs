use crate::error::{OppError, Result};
use crate::geometry::nozzle::{compute_slope_limits, NozzleModel, SlopeLimits};
use crate::scalar::Real;

/// Process parameters shared by every planning stage. Lengths in mm, speed in mm/s.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PrinterConfig<T> {
    pub t_min: T,
    pub t_max: T,
    pub flat_layer_thickness: T,
    pub path_width: T,
    /// Largest endpoint gap bridged by a direct inter-layer connection.
    pub connect_threshold: T,
    pub beam_width: usize,
    pub speed: T,
    pub nozzle: NozzleModel<T>,
    pub extrusion_coefficient: T,
    pub rng_seed: u64,
    pub contour_samples: usize,
    /// Extent `e` fed to the object slope term; zero leaves it at 90 degrees.
    pub object_extent: T,
}

impl<T: Real> PrinterConfig<T> {
    /// Clay extrusion.
    pub fn ceramic() -> Self {
        Self {
            t_min: T::lit(0.5),
            t_max: T::lit(2.5),
            flat_layer_thickness: T::lit(1.0),
            path_width: T::lit(6.0),
            connect_threshold: T::lit(5.0),
            beam_width: 10_000,
            speed: T::lit(25.0),
            nozzle: NozzleModel::new(T::lit(2.6), T::lit(90.0), T::lit(80.0), T::lit(1.5)),
            extrusion_coefficient: T::one(),
            rng_seed: 0,
            contour_samples: 100,
            object_extent: T::zero(),
        }
    }

    /// Thermoplastic filament.
    pub fn fdm() -> Self {
        Self {
            t_min: T::lit(0.05),
            t_max: T::lit(0.7),
            flat_layer_thickness: T::lit(0.2),
            path_width: T::lit(1.5),
            connect_threshold: T::lit(2.0),
            beam_width: 10_000,
            speed: T::lit(25.0),
            nozzle: NozzleModel::new(T::lit(0.5), T::lit(8.0), T::lit(80.0), T::lit(0.35)),
            extrusion_coefficient: T::one(),
            rng_seed: 0,
            contour_samples: 100,
            object_extent: T::zero(),
        }
    }

    pub fn preset(name: &str) -> Option<Self> {
        match name {
            "ceramic" => Some(Self::ceramic()),
            "fdm" => Some(Self::fdm()),
            _ => None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let mut d = Vec::new();
        if !(self.t_min > T::zero()) {
            d.push(format!("t_min must be > 0 (got {})", self.t_min));
        }
        if !(self.t_min <= self.t_max) {
            d.push(format!("t_min ({}) must be <= t_max ({})", self.t_min, self.t_max));
        }
        if !(self.t_min <= self.flat_layer_thickness && self.flat_layer_thickness <= self.t_max) {
            d.push(format!(
                "flat_layer_thickness ({}) must lie in [t_min, t_max] = [{}, {}]",
                self.flat_layer_thickness, self.t_min, self.t_max
            ));
        }
        if !(self.path_width > T::zero()) {
            d.push(format!("path_width must be > 0 (got {})", self.path_width));
        }
        if !(self.connect_threshold >= T::zero()) {
            d.push(format!("connect_threshold must be >= 0 (got {})", self.connect_threshold));
        }
        if self.beam_width < 1 {
            d.push("beam_width must be >= 1".to_string());
        }
        if !(self.speed > T::zero()) {
            d.push(format!("speed must be > 0 (got {})", self.speed));
        }
        if !(self.extrusion_coefficient > T::zero()) {
            d.push(format!("extrusion_coefficient must be > 0 (got {})", self.extrusion_coefficient));
        }
        if self.contour_samples < 3 {
            d.push(format!("contour_samples must be >= 3 (got {})", self.contour_samples));
        }
        if !(self.object_extent >= T::zero()) {
            d.push(format!("object_extent must be >= 0 (got {})", self.object_extent));
        }
        d.extend(self.nozzle.diagnostics());
        if d.is_empty() {
            Ok(())
        } else {
            Err(OppError::InvalidConfig(d))
        }
    }

    pub fn slope_limits(&self) -> SlopeLimits<T> {
        compute_slope_limits(&self.nozzle, self.object_extent)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn presets_validate() {
        PrinterConfig::<f64>::ceramic().validate().unwrap();
        PrinterConfig::<f64>::fdm().validate().unwrap();
        PrinterConfig::<f32>::fdm().validate().unwrap();
    }

    #[test]
    fn inverted_thickness_range_rejected() {
        let mut c = PrinterConfig::<f64>::ceramic();
        c.t_min = 3.0;
        let Err(OppError::InvalidConfig(d)) = c.validate() else {
            panic!("expected rejection");
        };
        assert!(d.iter().any(|m| m.contains("t_min")));
    }

    #[test]
    fn unknown_preset() {
        assert!(PrinterConfig::<f64>::preset("resin").is_none());
    }
}
