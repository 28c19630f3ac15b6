use serde::{Deserialize, Serialize};

use super::PressureCurve;
use crate::error::{Error, Result};

/// Fewest tested β values that must sit on the affine tail before a freeze is
/// reported.
pub const MIN_FLAT_POINTS: usize = 3;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SlantFit {
    pub s_hat: f64,
    pub h_hat: f64,
    /// Residual standard error of the tail fit.
    pub fit_se: f64,
    pub tail_points: usize,
    pub betas: Vec<f64>,
    /// g(β) = p(β) − (s_hat β + h_hat) at every curve point.
    pub residuals: Vec<f64>,
    /// Indices i where g rises from i to i+1 by more than the two bracket slacks.
    pub non_monotone: Vec<usize>,
}

impl SlantFit {
    /// |s_hat| is "within slack of 0" when the line moves by no more than the
    /// largest tail slack across the tail's β span.
    pub fn slope_within_slack(&self, curve: &PressureCurve, policy: &SlackPolicy) -> bool {
        let n = curve.points.len();
        let tail = &curve.points[n - self.tail_points..];
        let span = tail[tail.len() - 1].beta - tail[0].beta;
        let slack = tail.iter().map(|p| policy.slack(p, self)).fold(0.0, f64::max);
        self.s_hat.abs() * span <= slack
    }
}

fn point_slack(p: &super::PressurePoint) -> f64 {
    p.width() + p.tol
}

pub fn fit_slant(curve: &PressureCurve, tail_fraction: f64) -> Result<SlantFit> {
    if !(tail_fraction > 0.0 && tail_fraction <= 1.0) {
        return Err(Error::input("tail fraction must lie in (0, 1]"));
    }
    let n = curve.points.len();
    let k = ((tail_fraction * n as f64).ceil() as usize).min(n);
    if k < 3 {
        return Err(Error::input(format!("slant fit needs at least 3 tail points, have {k}")));
    }
    let tail = &curve.points[n - k..];
    let (s_hat, h_hat) = if tail.iter().all(|p| p.estimate == tail[0].estimate) {
        (0.0, tail[0].estimate)
    } else {
        let kb = tail.iter().map(|p| p.beta).sum::<f64>() / k as f64;
        let kp = tail.iter().map(|p| p.estimate).sum::<f64>() / k as f64;
        let sxy: f64 = tail.iter().map(|p| (p.beta - kb) * (p.estimate - kp)).sum();
        let sxx: f64 = tail.iter().map(|p| (p.beta - kb) * (p.beta - kb)).sum();
        if sxx == 0.0 {
            return Err(Error::input("slant fit needs distinct tail β values"));
        }
        let s = sxy / sxx;
        (s, kp - s * kb)
    };
    let residuals: Vec<f64> = curve
        .points
        .iter()
        .map(|p| p.estimate - (s_hat * p.beta + h_hat))
        .collect();
    let ssr: f64 = residuals[n - k..].iter().map(|r| r * r).sum();
    let fit_se = if k > 2 { (ssr / (k - 2) as f64).sqrt() } else { 0.0 };
    let non_monotone = (0..n.saturating_sub(1))
        .filter(|&i| {
            residuals[i + 1] - residuals[i] > point_slack(&curve.points[i]) + point_slack(&curve.points[i + 1])
        })
        .collect();
    Ok(SlantFit {
        s_hat,
        h_hat,
        fit_se,
        tail_points: k,
        betas: curve.betas(),
        residuals,
        non_monotone,
    })
}

/// Residual threshold at a point: bracket width + solver tolerance
/// + `fit_se_multiplier`·(fit standard error) + `extra`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SlackPolicy {
    pub fit_se_multiplier: f64,
    pub extra: f64,
}

impl Default for SlackPolicy {
    fn default() -> Self {
        SlackPolicy {
            fit_se_multiplier: 0.0,
            extra: 0.0,
        }
    }
}

impl SlackPolicy {
    pub fn slack(&self, p: &super::PressurePoint, fit: &SlantFit) -> f64 {
        point_slack(p) + self.fit_se_multiplier * fit.fit_se + self.extra
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "verdict")]
pub enum FreezeVerdict {
    FrozenBeyond { beta_c_lower: f64, beta_c_upper: f64 },
    NotDetected,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResidualRow {
    pub beta: f64,
    pub residual: f64,
    pub slack: f64,
    pub flat: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FreezeReport {
    pub verdict: FreezeVerdict,
    /// Every tested β is on the line: affine everywhere, no transition.
    pub affine_everywhere: bool,
    pub s_hat: f64,
    pub h_hat: f64,
    /// max |g| over the flat tail (0 when nothing is flat).
    pub max_tail_residual: f64,
    pub policy: SlackPolicy,
    pub residuals: Vec<ResidualRow>,
}

impl FreezeReport {
    pub fn is_frozen(&self) -> bool {
        matches!(self.verdict, FreezeVerdict::FrozenBeyond { .. }) && !self.affine_everywhere
    }

    pub fn beta_c(&self) -> Option<(f64, f64)> {
        match self.verdict {
            FreezeVerdict::FrozenBeyond {
                beta_c_lower,
                beta_c_upper,
            } => Some((beta_c_lower, beta_c_upper)),
            FreezeVerdict::NotDetected => None,
        }
    }
}

/// β_c is bracketed by the last tested β off the line and the first β from
/// which every tested point is on it.
pub fn detect_freeze(curve: &PressureCurve, slant: &SlantFit, policy: &SlackPolicy) -> FreezeReport {
    let rows: Vec<ResidualRow> = curve
        .points
        .iter()
        .zip(&slant.residuals)
        .map(|(p, &g)| {
            let slack = policy.slack(p, slant);
            ResidualRow {
                beta: p.beta,
                residual: g,
                slack,
                flat: g.abs() <= slack,
            }
        })
        .collect();
    let n = rows.len();
    let start = rows.iter().rposition(|r| !r.flat).map_or(0, |i| i + 1);
    let flat_count = n - start;
    let max_tail_residual = rows[start..].iter().map(|r| r.residual.abs()).fold(0.0, f64::max);
    let (verdict, affine_everywhere) = if flat_count < MIN_FLAT_POINTS.min(n) || flat_count == 0 {
        (FreezeVerdict::NotDetected, false)
    } else if start == 0 {
        let b = rows[0].beta;
        (
            FreezeVerdict::FrozenBeyond {
                beta_c_lower: b,
                beta_c_upper: b,
            },
            true,
        )
    } else {
        (
            FreezeVerdict::FrozenBeyond {
                beta_c_lower: rows[start - 1].beta,
                beta_c_upper: rows[start].beta,
            },
            false,
        )
    };
    FreezeReport {
        verdict,
        affine_everywhere,
        s_hat: slant.s_hat,
        h_hat: slant.h_hat,
        max_tail_residual: if flat_count == 0 { 0.0 } else { max_tail_residual },
        policy: *policy,
        residuals: rows,
    }
}
