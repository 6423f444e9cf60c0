//! TOML printer configuration layered over a named preset.
//!
//! ```toml
//! preset = "ceramic"
//! t_min = 0.4
//! [nozzle]
//! length = 60.0
//! ```

use std::path::Path;

use onepath_core::geometry::NozzleModel;
use onepath_core::PrinterConfig;
use serde::Deserialize;

use crate::error::{io_err, CliError, Result};

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigFile {
    preset: Option<String>,
    t_min: Option<f64>,
    t_max: Option<f64>,
    layer_thickness: Option<f64>,
    path_width: Option<f64>,
    connect_threshold: Option<f64>,
    beam_width: Option<usize>,
    speed: Option<f64>,
    extrusion_coefficient: Option<f64>,
    seed: Option<u64>,
    contour_samples: Option<usize>,
    object_extent: Option<f64>,
    nozzle: Option<NozzleSection>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct NozzleSection {
    outlet_radius: Option<f64>,
    length: Option<f64>,
    cone_angle: Option<f64>,
    reference_thickness: Option<f64>,
    carriage_radius: Option<f64>,
}

pub fn preset(name: &str) -> Result<PrinterConfig> {
    PrinterConfig::preset(name).ok_or_else(|| CliError::UnknownPreset(name.to_string()))
}

/// Parses a TOML config; unset keys come from `preset` (ceramic when absent).
pub fn parse_config(text: &str) -> Result<PrinterConfig> {
    let file: ConfigFile = toml::from_str(text).map_err(|e| CliError::Config(e.message().to_string()))?;
    let mut cfg = preset(file.preset.as_deref().unwrap_or("ceramic"))?;
    let set = |dst: &mut f64, v: Option<f64>| {
        if let Some(v) = v {
            *dst = v;
        }
    };
    set(&mut cfg.t_min, file.t_min);
    set(&mut cfg.t_max, file.t_max);
    set(&mut cfg.flat_layer_thickness, file.layer_thickness);
    set(&mut cfg.path_width, file.path_width);
    set(&mut cfg.connect_threshold, file.connect_threshold);
    set(&mut cfg.speed, file.speed);
    set(&mut cfg.extrusion_coefficient, file.extrusion_coefficient);
    set(&mut cfg.object_extent, file.object_extent);
    cfg.beam_width = file.beam_width.unwrap_or(cfg.beam_width);
    cfg.rng_seed = file.seed.unwrap_or(cfg.rng_seed);
    cfg.contour_samples = file.contour_samples.unwrap_or(cfg.contour_samples);
    if let Some(n) = file.nozzle {
        let old = cfg.nozzle;
        let nozzle = NozzleModel::new(
            n.outlet_radius.unwrap_or(old.outlet_radius),
            n.length.unwrap_or(old.nozzle_length),
            n.cone_angle.unwrap_or(old.cone_angle),
            n.reference_thickness.unwrap_or(old.reference_thickness),
        );
        // A new outlet radius rescales the default carriage; otherwise keep the preset's.
        let carriage =
            n.carriage_radius.or(n.outlet_radius.map(|_| nozzle.carriage_radius)).unwrap_or(old.carriage_radius);
        let nozzle = nozzle.with_carriage_radius(carriage);
        cfg.nozzle = nozzle;
    }
    cfg.validate()?;
    Ok(cfg)
}

/// A preset name or a path to a TOML file.
pub fn load_config(arg: &str) -> Result<PrinterConfig> {
    if let Some(cfg) = PrinterConfig::preset(arg) {
        return Ok(cfg);
    }
    let path = Path::new(arg);
    if !path.exists() {
        return Err(CliError::UnknownPreset(arg.to_string()));
    }
    parse_config(&std::fs::read_to_string(path).map_err(io_err(path))?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn presets_match_published_values() {
        let c = preset("ceramic").unwrap();
        assert_eq!((c.t_min, c.t_max, c.flat_layer_thickness, c.path_width), (0.5, 2.5, 1.0, 6.0));
        assert_eq!((c.connect_threshold, c.speed, c.nozzle.nozzle_length), (5.0, 25.0, 90.0));
        assert_eq!(c.nozzle.outlet_radius * 2.0, 5.2);
        assert!((c.slope_limits().max - 30.0).abs() < 0.5);
        let f = preset("fdm").unwrap();
        assert_eq!((f.t_min, f.t_max, f.flat_layer_thickness, f.path_width), (0.05, 0.7, 0.2, 1.5));
        assert_eq!((f.connect_threshold, f.speed, f.nozzle.nozzle_length), (2.0, 25.0, 8.0));
        assert_eq!(f.nozzle.outlet_radius * 2.0, 1.0);
        assert!((f.slope_limits().max - 35.0).abs() < 0.5);
    }

    #[test]
    fn overrides_apply_on_preset() {
        let c = parse_config("preset = \"fdm\"\nspeed = 40.0\n[nozzle]\nlength = 10.0\n").unwrap();
        assert_eq!(c.speed, 40.0);
        assert_eq!(c.nozzle.nozzle_length, 10.0);
        assert_eq!(c.t_min, 0.05);
    }

    #[test]
    fn inverted_thickness_rejected() {
        let err = parse_config("t_min = 3.0\nt_max = 2.5\n").unwrap_err();
        assert!(err.to_string().contains("t_min"), "{err}");
    }

    #[test]
    fn unknown_keys_and_presets_rejected() {
        assert!(parse_config("bogus = 1\n").is_err());
        assert!(matches!(preset("resin"), Err(CliError::UnknownPreset(_))));
        assert!(load_config("no-such-preset").is_err());
    }
}
