//! Pressure p(β) of βφ with certified brackets, slant fits and freeze
//! detection.

pub mod renewal;
pub mod slant;
pub mod torus;
pub mod transfer;

use std::io::{Read, Write};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use renewal::renewal_pressure;
pub use slant::{detect_freeze, fit_slant, FreezeReport, FreezeVerdict, SlackPolicy, SlantFit, MIN_FLAT_POINTS};
pub use torus::{torus_pressure_2d, TorusHistogram, MAX_TORUS_CONFIGS};
pub use transfer::{transfer_curve, transfer_pressure_1d, LumpedOperator, MAX_TRANSFER_WINDOWS};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum PressureMethod {
    #[serde(rename = "transfer-1d")]
    Transfer1d,
    #[serde(rename = "renewal")]
    Renewal,
    #[serde(rename = "torus-2d")]
    Torus2d,
}

impl PressureMethod {
    pub fn as_str(&self) -> &'static str {
        match self {
            PressureMethod::Transfer1d => "transfer-1d",
            PressureMethod::Renewal => "renewal",
            PressureMethod::Torus2d => "torus-2d",
        }
    }
}

impl FromStr for PressureMethod {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "transfer-1d" => Ok(PressureMethod::Transfer1d),
            "renewal" => Ok(PressureMethod::Renewal),
            "torus-2d" => Ok(PressureMethod::Torus2d),
            _ => Err(Error::input(format!("unknown pressure method '{s}'"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PressurePoint {
    pub beta: f64,
    pub estimate: f64,
    pub lower: f64,
    pub upper: f64,
    pub method: PressureMethod,
    /// Truncation radius R (renewal: the table depth N_max).
    pub radius: usize,
    /// Numerical tolerance of the solver behind the bracket.
    pub tol: f64,
    /// Torus only: |p_n − p_{n−1}|, not a rigorous bound.
    pub finite_size_slack: Option<f64>,
    pub note: Option<String>,
}

impl PressurePoint {
    pub fn width(&self) -> f64 {
        self.upper - self.lower
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct PressureCurve {
    pub points: Vec<PressurePoint>,
    pub label: String,
}

impl PressureCurve {
    pub fn new(mut points: Vec<PressurePoint>, label: impl Into<String>) -> Self {
        points.sort_by(|a, b| a.beta.total_cmp(&b.beta));
        PressureCurve {
            points,
            label: label.into(),
        }
    }

    pub fn betas(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.beta).collect()
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["beta", "estimate", "lower", "upper", "method", "R", "tol"])?;
        for p in &self.points {
            w.write_record([
                crate::fmt_sig(p.beta),
                crate::fmt_sig(p.estimate),
                crate::fmt_sig(p.lower),
                crate::fmt_sig(p.upper),
                p.method.as_str().to_string(),
                p.radius.to_string(),
                crate::fmt_sig(p.tol),
            ])?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn read_csv<R: Read>(input: R) -> Result<Self> {
        let mut r = csv::Reader::from_reader(input);
        let headers = r.headers()?.clone();
        let col = |name: &str| headers.iter().position(|h| h.trim() == name);
        let need = |name: &str| col(name).ok_or_else(|| Error::input(format!("curve CSV lacks column '{name}'")));
        let (cb, ce, cl, cu, cm, cr) = (
            need("beta")?,
            need("estimate")?,
            need("lower")?,
            need("upper")?,
            need("method")?,
            need("R")?,
        );
        let ct = col("tol");
        let num = |s: &str| -> Result<f64> {
            s.trim()
                .parse::<f64>()
                .map_err(|_| Error::input(format!("bad number '{s}' in curve CSV")))
        };
        let mut points = Vec::new();
        for rec in r.records() {
            let rec = rec?;
            let field = |i: usize| rec.get(i).unwrap_or("");
            let p = PressurePoint {
                beta: num(field(cb))?,
                estimate: num(field(ce))?,
                lower: num(field(cl))?,
                upper: num(field(cu))?,
                method: field(cm).trim().parse()?,
                radius: field(cr)
                    .trim()
                    .parse()
                    .map_err(|_| Error::input("bad R in curve CSV"))?,
                tol: match ct {
                    Some(i) => num(field(i))?,
                    None => 0.0,
                },
                finite_size_slack: None,
                note: None,
            };
            if !(p.lower <= p.estimate && p.estimate <= p.upper) {
                return Err(Error::input(format!("bracket violated at beta = {}", p.beta)));
            }
            points.push(p);
        }
        if points.is_empty() {
            return Err(Error::input("curve CSV has no rows"));
        }
        Ok(PressureCurve::new(points, "csv"))
    }
}

/// β = 0 plus `count` geometric points from `start` to `end`.
pub fn beta_grid(start: f64, end: f64, count: usize) -> Vec<f64> {
    let mut g = vec![0.0];
    if count == 1 {
        g.push(start);
    } else {
        let ratio = (end / start).powf(1.0 / (count - 1) as f64);
        g.extend((0..count).map(|i| if i + 1 == count { end } else { start * ratio.powi(i as i32) }));
    }
    g
}

pub fn default_beta_grid() -> Vec<f64> {
    beta_grid(0.05, 8.0, 60)
}

/// Largest step between consecutive grid points not exceeding `beta`.
pub fn grid_step_near(grid: &[f64], beta: f64) -> f64 {
    grid.windows(2)
        .filter(|w| w[0] <= beta)
        .map(|w| w[1] - w[0])
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_grid_shape() {
        let g = default_beta_grid();
        assert_eq!(g.len(), 61);
        assert_eq!(g[0], 0.0);
        assert_eq!(g[1], 0.05);
        assert_eq!(g[60], 8.0);
        assert!(g.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn csv_round_trip() {
        let c = PressureCurve::new(
            vec![PressurePoint {
                beta: 0.5,
                estimate: 0.6,
                lower: 0.5,
                upper: 0.7,
                method: PressureMethod::Renewal,
                radius: 12,
                tol: 1e-10,
                finite_size_slack: None,
                note: None,
            }],
            "x",
        );
        let mut buf = Vec::new();
        c.write_csv(&mut buf).unwrap();
        let back = PressureCurve::read_csv(&buf[..]).unwrap();
        assert_eq!(back.points, c.points);
    }
}
