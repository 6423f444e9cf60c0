use std::fmt::Write;

use crate::error::{OppError, Result};
use crate::scalar::Real;

/// Curved layers sampled on vertical columns.
///
/// `surfaces[k][j]` is the height of boundary surface `k` at column `j`; layer `k`
/// lies between surfaces `k` and `k + 1`. Columns are cell centres on
/// `[x_min, x_max]` with uniform spacing.
#[derive(Debug, Clone, PartialEq)]
pub struct CurvedLayerStack<T> {
    pub x_min: T,
    pub x_max: T,
    pub columns: Vec<T>,
    pub surfaces: Vec<Vec<T>>,
}

/// A sample where the stack breaks a fabrication constraint.
#[derive(Debug, Clone, PartialEq)]
pub enum StackViolation {
    Thickness { layer: usize, column: usize, gap: f64 },
    Slope { surface: usize, column: usize, slope: f64 },
    Order { surface: usize, column: usize },
}

impl<T: Real> CurvedLayerStack<T> {
    pub fn layer_count(&self) -> usize {
        self.surfaces.len().saturating_sub(1)
    }

    pub fn spacing(&self) -> T {
        (self.x_max - self.x_min) / T::from_count(self.columns.len().max(1))
    }

    pub fn thickness(&self, layer: usize, column: usize) -> T {
        self.surfaces[layer + 1][column] - self.surfaces[layer][column]
    }

    /// Mid-heights of every layer, one row per layer.
    pub fn layer_heights(&self) -> Vec<Vec<T>> {
        self.surfaces
            .windows(2)
            .map(|w| w[0].iter().zip(&w[1]).map(|(&a, &b)| (a + b) * T::lit(0.5)).collect())
            .collect()
    }

    /// Linear interpolation of `row` at `x`, constant beyond the outer columns.
    pub fn sample(&self, row: &[T], x: T) -> T {
        let n = self.columns.len();
        if n == 1 || x <= self.columns[0] {
            return row[0];
        }
        if x >= self.columns[n - 1] {
            return row[n - 1];
        }
        let dx = self.columns[1] - self.columns[0];
        let f = (x - self.columns[0]) / dx;
        let j = f.floor().to_usize().unwrap_or(0).min(n - 2);
        let w = f - T::from_count(j);
        row[j] + (row[j + 1] - row[j]) * w
    }

    pub fn bottom_at(&self, x: T) -> T {
        self.sample(&self.surfaces[0], x)
    }

    pub fn top_at(&self, x: T) -> T {
        self.sample(&self.surfaces[self.surfaces.len() - 1], x)
    }

    /// Replays the thickness and slope constraints at every sample.
    pub fn audit(&self, t_min: T, t_max: T, tan_max: T) -> Vec<StackViolation> {
        let gap_tol = T::lit(1e-9);
        let slope_tol = T::lit(1e-6);
        let dx = self.spacing();
        let mut out = Vec::new();
        for k in 0..self.layer_count() {
            for j in 0..self.columns.len() {
                let gap = self.thickness(k, j);
                if gap < t_min - gap_tol || gap > t_max + gap_tol {
                    out.push(StackViolation::Thickness { layer: k, column: j, gap: gap.as_f64() });
                }
            }
        }
        for (s, row) in self.surfaces.iter().enumerate() {
            for j in 1..row.len() {
                let slope = (row[j] - row[j - 1]).abs() / dx;
                if slope > tan_max + slope_tol {
                    out.push(StackViolation::Slope { surface: s, column: j, slope: slope.as_f64() });
                }
            }
            if s > 0 {
                for j in 0..row.len() {
                    if row[j] < self.surfaces[s - 1][j] {
                        out.push(StackViolation::Order { surface: s, column: j });
                    }
                }
            }
        }
        out
    }

    /// Text form: a `columns` line of x positions, then one `surface` line per boundary.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "extent {} {}", self.x_min, self.x_max);
        let cols: Vec<String> = self.columns.iter().map(|x| x.to_string()).collect();
        let _ = writeln!(out, "columns {}", cols.join(" "));
        for row in &self.surfaces {
            let zs: Vec<String> = row.iter().map(|z| z.to_string()).collect();
            let _ = writeln!(out, "surface {}", zs.join(" "));
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let err = |line: usize, message: &str| OppError::GraphParse { line, message: message.into() };
        let mut extent = None;
        let mut columns = None;
        let mut surfaces = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let mut tok = line.split_whitespace();
            let Some(head) = tok.next() else { continue };
            let vals: Vec<T> = tok
                .map(|t| t.parse::<f64>().map(T::lit))
                .collect::<std::result::Result<_, _>>()
                .map_err(|_| err(i + 1, "bad number"))?;
            match head {
                "extent" if vals.len() == 2 => extent = Some((vals[0], vals[1])),
                "columns" => columns = Some(vals),
                "surface" => surfaces.push(vals),
                _ => return Err(err(i + 1, "unknown line")),
            }
        }
        let (x_min, x_max) = extent.ok_or_else(|| err(0, "missing extent"))?;
        let columns = columns.ok_or_else(|| err(0, "missing columns"))?;
        if surfaces.iter().any(|r| r.len() != columns.len()) {
            return Err(err(0, "surface length differs from column count"));
        }
        Ok(Self { x_min, x_max, columns, surfaces })
    }
}
