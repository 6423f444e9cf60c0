//! G-code emission and a small reader for round-trip checks.
//!
//! Positions are absolute. The E axis accumulates (`M82`) and is reset once in the
//! header, so it is monotone over the whole file.

use std::fmt;

use onepath_core::{Point, PrintPlan, PrinterConfig};

const DECIMALS: usize = 6;

#[derive(Debug, Clone, PartialEq)]
pub enum GcodeCommand {
    Comment(String),
    Travel(Point),
    Extrude { to: Point, e: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct GcodeDocument {
    pub header: Vec<String>,
    pub commands: Vec<GcodeCommand>,
    pub footer: Vec<String>,
}

impl GcodeDocument {
    /// Final value of the extrusion axis.
    pub fn total_extrusion(&self) -> f64 {
        self.commands
            .iter()
            .rev()
            .find_map(|c| match c {
                GcodeCommand::Extrude { e, .. } => Some(*e),
                _ => None,
            })
            .unwrap_or(0.0)
    }
}

fn xyz(f: &mut fmt::Formatter<'_>, p: Point) -> fmt::Result {
    write!(f, "X{:.d$} Y{:.d$} Z{:.d$}", p.x, p.y, p.z, d = DECIMALS)
}

impl fmt::Display for GcodeCommand {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GcodeCommand::Comment(c) => write!(f, "; {c}"),
            GcodeCommand::Travel(p) => {
                f.write_str("G0 ")?;
                xyz(f, *p)
            }
            GcodeCommand::Extrude { to, e } => {
                f.write_str("G1 ")?;
                xyz(f, *to)?;
                write!(f, " E{e:.DECIMALS$}")
            }
        }
    }
}

impl fmt::Display for GcodeDocument {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in &self.header {
            writeln!(f, "{l}")?;
        }
        for c in &self.commands {
            writeln!(f, "{c}")?;
        }
        for l in &self.footer {
            writeln!(f, "{l}")?;
        }
        Ok(())
    }
}

/// Extrusion for one segment: `k * length * width * thickness`.
pub fn extrusion_amount(cfg: &PrinterConfig, length: f64, thickness: f64) -> f64 {
    cfg.extrusion_coefficient * length * cfg.path_width * thickness
}

pub fn emit_gcode(plan: &PrintPlan, cfg: &PrinterConfig) -> GcodeDocument {
    let feed = cfg.speed * 60.0;
    let header = vec![
        "; generated by onepath".to_string(),
        format!("; opps {} transfers {}", plan.stats.opp_count, plan.stats.transfer_count),
        "G21".to_string(),
        "G90".to_string(),
        "M82".to_string(),
        "G92 E0".to_string(),
        format!("G1 F{feed:.1}"),
    ];
    let footer = vec!["M400".to_string(), "; end".to_string()];

    let mut commands = Vec::new();
    let mut e = 0.0;
    for (i, tp) in plan.toolpaths.iter().enumerate() {
        let Some(first) = tp.vertices.first() else { continue };
        match i.checked_sub(1).and_then(|j| plan.transfers.get(j)) {
            Some(t) => {
                commands.push(GcodeCommand::Comment(format!("transfer {} -> {}", t.from_opp, t.to_opp)));
                commands.extend(t.moves.iter().map(|&p| GcodeCommand::Travel(p)));
            }
            None => commands.push(GcodeCommand::Travel(first.position)),
        }
        commands.push(GcodeCommand::Comment(format!("OPP {}", tp.opp_id)));
        for w in tp.vertices.windows(2) {
            let (a, b) = (w[0], w[1]);
            if b.extruding {
                e += extrusion_amount(cfg, a.position.dist(b.position), b.local_thickness);
                commands.push(GcodeCommand::Extrude { to: b.position, e });
            } else {
                commands.push(GcodeCommand::Travel(b.position));
            }
        }
    }
    GcodeDocument { header, commands, footer }
}

/// One motion line read back from G-code text.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParsedMove {
    pub position: Point,
    pub e: f64,
    pub extruding: bool,
}

/// Reads G0/G1 moves with modal coordinates; `G92 E` resets the extrusion axis.
pub fn parse_gcode(text: &str) -> Vec<ParsedMove> {
    let mut pos = Point::new(0.0, 0.0, 0.0);
    let mut e = 0.0;
    let mut moves = Vec::new();
    for raw in text.lines() {
        let line = raw.split(';').next().unwrap_or("").trim();
        let mut words = line.split_whitespace();
        let Some(code) = words.next() else { continue };
        let mut new_e = None;
        let mut moved = false;
        for w in words {
            let (axis, value) = w.split_at(1);
            let Ok(v) = value.parse::<f64>() else { continue };
            match axis {
                "X" => (pos.x, moved) = (v, true),
                "Y" => (pos.y, moved) = (v, true),
                "Z" => (pos.z, moved) = (v, true),
                "E" => new_e = Some(v),
                _ => {}
            }
        }
        match code {
            "G92" => e = new_e.unwrap_or(e),
            "G0" | "G1" if moved => {
                let extruding = new_e.is_some_and(|v| v > e);
                e = new_e.unwrap_or(e);
                moves.push(ParsedMove { position: pos, e, extruding });
            }
            _ => {}
        }
    }
    moves
}
