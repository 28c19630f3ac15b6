use super::{PressureMethod, PressurePoint};
use crate::error::{Error, Result};
use crate::potential::FreezingSequence;
use crate::subshift::{SpecKind, Subshift};

const ROUNDING: f64 = 1e-12;
const NEGLIGIBLE: f64 = 1e-18;

/// Renewal bracket for X₀ = {s^∞} one-sided: an excursion of length n (one
/// symbol ≠ s, then n − 1 copies of s) carries φ-sum S_n = −(a_0 + … + a_{n−1}),
/// and p solves Σ_n (|𝒜|−1) e^{βS_n − nP} = 1 (p = 0 when the sum at P = 0
/// stays below 1). Terms beyond N_max are bounded using S_N − (n−N)a_N ≤ S_n ≤ S_N.
pub fn renewal_pressure(spec: &Subshift, sequence: &FreezingSequence, beta: f64, n_max: usize) -> Result<PressurePoint> {
    if spec.dim() != 1 || !spec.is_one_sided() || !matches!(spec.spec().kind, SpecKind::SinglePoint { .. }) {
        return Err(Error::input("renewal pressure needs a one-sided d = 1 single-point spec"));
    }
    if !(beta >= 0.0) || !beta.is_finite() {
        return Err(Error::input("beta must be finite and non-negative"));
    }
    if n_max == 0 {
        return Err(Error::input("N_max must be positive"));
    }
    let m = (spec.alphabet_size() - 1) as f64;
    let point = |lower: f64, upper: f64, note: Option<String>| PressurePoint {
        beta,
        estimate: 0.5 * (lower + upper),
        lower,
        upper,
        method: PressureMethod::Renewal,
        radius: n_max,
        tol: ROUNDING,
        finite_size_slack: None,
        note,
    };
    if m == 0.0 {
        return Ok(point(0.0, 0.0, None));
    }
    let a = sequence.values(n_max);
    let mut weights = Vec::with_capacity(n_max);
    let mut s = 0.0;
    for &ak in a.iter().take(n_max) {
        s -= ak;
        weights.push(m * (beta * s).exp());
    }
    let w_last = weights[n_max - 1];
    let a_last = a[n_max];
    let p_max = (m + 1.0).ln() + 1.0;

    let upper_f = |p: f64| -> f64 {
        let q = (-p).exp();
        let mut sum = 0.0;
        let mut pw = 1.0;
        for (n, &w) in weights.iter().enumerate() {
            pw *= q;
            sum += w * pw;
            let rest = m * pw * q / (1.0 - q);
            if rest < NEGLIGIBLE {
                return sum + rest;
            }
            if n + 1 == weights.len() {
                return sum + w_last * pw * q / (1.0 - q);
            }
        }
        sum
    };
    let lower_f = |p: f64| -> f64 {
        let q = (-p).exp();
        let mut sum = 0.0;
        let mut pw = 1.0;
        for &w in &weights {
            pw *= q;
            sum += w * pw;
            if m * pw * q / (1.0 - q) < NEGLIGIBLE {
                return sum;
            }
        }
        let rho = (-(beta * a_last + p)).exp();
        if rho >= 1.0 {
            return f64::INFINITY;
        }
        sum + w_last * pw * rho / (1.0 - rho)
    };

    let hi = root_decreasing(&upper_f, p_max);
    let lo = if lower_f(0.0) <= 1.0 {
        0.0
    } else {
        root_decreasing(&lower_f, p_max)
    };
    let note = (lo == 0.0).then(|| "frozen at this beta: renewal mass at P = 0 is below 1".to_string());
    let lower = (lo - ROUNDING * lo.max(1e-300)).max(0.0);
    let upper = hi + ROUNDING * hi;
    Ok(point(lower.min(upper), upper, note))
}

/// Root of a decreasing function f(P) = 1 on (0, p_max]; 0 when f stays below 1.
fn root_decreasing<F: Fn(f64) -> f64>(f: &F, p_max: f64) -> f64 {
    let mut lo = 1e-300;
    let mut hi = p_max;
    if f(lo) <= 1.0 {
        return 0.0;
    }
    for _ in 0..400 {
        let mid = if hi / lo > 4.0 { (lo * hi).sqrt() } else { 0.5 * (lo + hi) };
        if f(mid) > 1.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 1e-15 * hi {
            break;
        }
    }
    hi
}
