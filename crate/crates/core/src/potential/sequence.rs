use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::complexity::{kappa_from_table, ComplexityTable, KappaSequence};
use crate::error::{Error, Result};

/// Which construction produced a sequence.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "recipe", rename_all = "snake_case")]
pub enum Recipe {
    Thm34 {
        h_ref: f64,
        i_max: usize,
        dim: usize,
        kappa: Vec<f64>,
    },
    Thm51 {
        c: f64,
    },
    Thm52 {
        kappa: Vec<f64>,
        j_max: usize,
    },
    Cor53,
    Custom {
        label: String,
    },
}

/// Symbolic growth class of (a_j), used by the summability classifier.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "class", rename_all = "snake_case")]
pub enum AsymptoticClass {
    /// O(log log j / j^d)
    LogLogOverJd,
    /// O(log j / j^d)
    LogOverJd,
    /// O(log² j / j)
    Log2OverJ,
    /// c / j^p; p = 1 is the c/j class, p = d + ε the summable one.
    InversePower { exponent: f64 },
    Custom,
}

impl AsymptoticClass {
    pub fn label(&self) -> String {
        match self {
            AsymptoticClass::LogLogOverJd => "O(loglog j/j^d)".into(),
            AsymptoticClass::LogOverJd => "O(log j/j^d)".into(),
            AsymptoticClass::Log2OverJ => "O(log^2 j/j)".into(),
            AsymptoticClass::InversePower { exponent } if *exponent == 1.0 => "c/j".into(),
            AsymptoticClass::InversePower { exponent } => format!("1/j^{exponent}"),
            AsymptoticClass::Custom => "custom".into(),
        }
    }
}

/// Closed-form description of a_j beyond the stored table.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "tail", rename_all = "snake_case")]
pub enum Tail {
    /// Dyadic-range formula with κ halved per range past the last computed one.
    Thm34 { kappa_last: f64, i_last: usize, dim: usize },
    Thm51 { c: f64 },
    /// Running maximum of the super-pin formula, κ halved past its depth.
    /// `jump_sup[i]` is the largest formula value at the powers 2^{i'}, i' ≥ i.
    Thm52 { kappa: Vec<f64>, jump_sup: Vec<f64> },
    Cor53,
    InversePower { c: f64, p: f64 },
    Hofbauer { gamma: f64, shift: f64 },
    Harmonic { last: f64, at: usize },
}

fn log_plus(i: usize) -> f64 {
    if i <= 1 {
        0.0
    } else {
        (i as f64).ln()
    }
}

/// i with 2^i < j ≤ 2^{i+1}, for j ≥ 2.
pub fn dyadic_range(j: usize) -> Option<usize> {
    (j >= 2).then(|| (usize::BITS - (j - 1).leading_zeros()) as usize - 1)
}

fn thm34_range_value(kappa: f64, i: usize, dim: usize) -> f64 {
    kappa + (2.0 * log_plus(i) + 3.0) / 2f64.powi((i * dim) as i32)
}

fn kappa_ext(kappa: &[f64], i: usize) -> f64 {
    let last = kappa.len() - 1;
    if i <= last {
        kappa[i]
    } else {
        kappa[last] * 0.5f64.powi((i - last) as i32)
    }
}

/// (2 log j)/j + (1/j) Σ_{i ≤ ⌊log₂ j⌋} 2^i κ_i + 1/j.
fn thm52_raw(kappa: &[f64], j: usize) -> f64 {
    let jf = j as f64;
    let top = (usize::BITS - 1 - j.leading_zeros()) as usize;
    let sum: f64 = (0..=top).map(|i| 2f64.powi(i as i32) * kappa_ext(kappa, i)).sum();
    (2.0 * jf.ln() + sum + 1.0) / jf
}

fn thm52_jump_sup(kappa: &[f64]) -> Vec<f64> {
    let mut sup = vec![0.0f64; 63];
    for i in (0..62).rev() {
        sup[i] = sup[i + 1].max(thm52_raw(kappa, 1usize << i));
    }
    sup
}

/// sup_{j' ≥ j} of the raw formula: between powers of two it decreases, so
/// only the jump points 2^i > j compete.
fn thm52_envelope(kappa: &[f64], jump_sup: &[f64], j: usize) -> f64 {
    let next = (usize::BITS - j.leading_zeros()) as usize;
    thm52_raw(kappa, j).max(jump_sup[next.min(62)])
}

fn cor53_raw(j: usize) -> f64 {
    let l = (j as f64).ln();
    l * l / j as f64
}

impl Tail {
    pub fn eval(&self, j: usize) -> f64 {
        let jf = j.max(1) as f64;
        match self {
            Tail::Thm34 {
                kappa_last,
                i_last,
                dim,
            } => {
                let i = dyadic_range(j).unwrap_or(0);
                let k = if i > *i_last {
                    kappa_last * 0.5f64.powi((i - i_last) as i32)
                } else {
                    *kappa_last
                };
                thm34_range_value(k, i, *dim)
            }
            Tail::Thm51 { c } => 2.0 * (c + 2.0) / jf,
            Tail::Thm52 { kappa, jump_sup } => thm52_envelope(kappa, jump_sup, j.div_ceil(3).max(1)),
            Tail::Cor53 => cor53_raw(j.max(7)),
            Tail::InversePower { c, p } => c / jf.powf(*p),
            Tail::Hofbauer { gamma, shift } => gamma * ((jf + 1.0 + shift) / (jf + shift)).ln(),
            Tail::Harmonic { last, at } => last * *at as f64 / jf,
        }
    }
}

/// A positive, non-increasing sequence (a_j) tending to 0.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FreezingSequence {
    pub table: Vec<f64>,
    pub tail: Tail,
    pub recipe: Recipe,
    pub class: AsymptoticClass,
    /// First index whose value comes from extrapolated data.
    pub extrapolated_from: Option<usize>,
    pub repaired: bool,
    pub conditional: bool,
}

impl FreezingSequence {
    pub fn value(&self, j: usize) -> f64 {
        self.table.get(j).copied().unwrap_or_else(|| self.tail.eval(j))
    }

    pub fn values(&self, upto: usize) -> Vec<f64> {
        (0..=upto).map(|j| self.value(j)).collect()
    }

    pub fn is_extrapolated(&self, j: usize) -> bool {
        self.extrapolated_from.is_some_and(|e| j >= e)
    }

    /// Replace table entries by the running maximum of the tail, returning
    /// whether anything changed.
    fn enforce_monotone(&mut self) -> bool {
        let n = self.table.len();
        let mut floor = self.tail.eval(n);
        let mut changed = false;
        for j in (0..n).rev() {
            if self.table[j] < floor {
                self.table[j] = floor;
                changed = true;
            }
            floor = self.table[j];
        }
        changed
    }

    pub fn write_csv<W: Write>(&self, out: W, upto: usize) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["j", "a_j", "range_i", "extrapolated"])?;
        for j in 0..=upto {
            let range = match j {
                0 => String::new(),
                1 => "-1".into(),
                _ => dyadic_range(j).unwrap().to_string(),
            };
            w.write_record([
                j.to_string(),
                crate::fmt_sig(self.value(j)),
                range,
                self.is_extrapolated(j).to_string(),
            ])?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Dyadic recipe: a_j = κ_i + (2 log⁺ i + 3)/2^{id} on 2^i < j ≤ 2^{i+1}, with
/// a_0 = a_1 = a_2.
pub fn build_thm34_sequence(table: &ComplexityTable, h_ref: f64, i_max: usize) -> Result<FreezingSequence> {
    let kappa = kappa_from_table(table, i_max, h_ref)?;
    Ok(thm34_from_kappa(&kappa))
}

pub fn thm34_from_kappa(kappa: &KappaSequence) -> FreezingSequence {
    let d = kappa.dim;
    let i_max = kappa.kappa.len() - 1;
    let top = 1usize << (i_max + 1);
    let mut table = Vec::with_capacity(top + 1);
    for j in 0..=top {
        let i = dyadic_range(j).unwrap_or(0);
        table.push(thm34_range_value(kappa.kappa[i], i, d));
    }
    let mut seq = FreezingSequence {
        table,
        tail: Tail::Thm34 {
            kappa_last: kappa.kappa[i_max],
            i_last: i_max,
            dim: d,
        },
        recipe: Recipe::Thm34 {
            h_ref: kappa.h_ref,
            i_max,
            dim: d,
            kappa: kappa.kappa.clone(),
        },
        class: AsymptoticClass::LogLogOverJd,
        extrapolated_from: Some(top + 1),
        repaired: false,
        conditional: kappa.conditional,
    };
    seq.repaired = seq.enforce_monotone();
    seq
}

/// Harmonic recipe a_i = 2(c+2)/i, a_0 = a_1.
pub fn build_thm51_sequence(c: f64) -> Result<FreezingSequence> {
    if !(c > 0.0) || !c.is_finite() {
        return Err(Error::input(format!("thm51 needs c > 0, got {c}")));
    }
    let v = 2.0 * (c + 2.0);
    Ok(FreezingSequence {
        table: vec![v, v],
        tail: Tail::Thm51 { c },
        recipe: Recipe::Thm51 { c },
        class: AsymptoticClass::InversePower { exponent: 1.0 },
        extrapolated_from: None,
        repaired: false,
        conditional: false,
    })
}

/// Super-pin recipe: a_{3j} = (2 log j)/j + (1/j)Σ_{i ≤ ⌊log₂ j⌋} 2^i κ_i + 1/j, other
/// indices take the value at the next multiple of 3, then a running maximum.
pub fn build_thm52_sequence(kappa: &KappaSequence, j_max: usize) -> Result<FreezingSequence> {
    if j_max == 0 {
        return Err(Error::input("thm52 needs j_max ≥ 1"));
    }
    let need = (usize::BITS - 1 - j_max.leading_zeros()) as usize;
    if kappa.kappa.len() <= need {
        return Err(Error::input(format!(
            "thm52 with j_max = {j_max} needs kappa through i = {need}, have {}",
            kappa.kappa.len() - 1
        )));
    }
    let k = kappa.kappa.clone();
    let sup = thm52_jump_sup(&k);
    let top = 3 * j_max;
    let table: Vec<f64> = (0..=top)
        .map(|m| thm52_envelope(&k, &sup, m.div_ceil(3).max(1)))
        .collect();
    let repaired = (1..=j_max).any(|j| thm52_envelope(&k, &sup, j) != thm52_raw(&k, j));
    Ok(FreezingSequence {
        table,
        tail: Tail::Thm52 {
            kappa: k.clone(),
            jump_sup: sup,
        },
        recipe: Recipe::Thm52 { kappa: k, j_max },
        class: AsymptoticClass::LogOverJd,
        extrapolated_from: Some(3 * (1usize << kappa.kappa.len())),
        repaired,
        conditional: kappa.conditional,
    })
}

/// a_j = log² j / j from j = 8 on, constant at its maximum before.
pub fn build_cor53_sequence() -> FreezingSequence {
    FreezingSequence {
        table: (0..8).map(|j| cor53_raw(j.max(7))).collect(),
        tail: Tail::Cor53,
        recipe: Recipe::Cor53,
        class: AsymptoticClass::Log2OverJ,
        extrapolated_from: None,
        repaired: false,
        conditional: false,
    }
}

/// a_j = c / j^p for j ≥ 1, a_0 = c.
pub fn inverse_power_sequence(c: f64, p: f64) -> Result<FreezingSequence> {
    if !(c > 0.0 && p > 0.0) {
        return Err(Error::input("inverse-power sequence needs c > 0 and p > 0"));
    }
    Ok(FreezingSequence {
        table: vec![c, c],
        tail: Tail::InversePower { c, p },
        recipe: Recipe::Custom {
            label: format!("{c}/n^{p}"),
        },
        class: AsymptoticClass::InversePower { exponent: p },
        extrapolated_from: None,
        repaired: false,
        conditional: false,
    })
}

/// Hurwitz zeta ζ(s, q) for s > 1 by direct summation plus Euler–Maclaurin.
pub fn hurwitz_zeta(s: f64, q: f64) -> f64 {
    let n = 64usize;
    let mut sum = 0.0;
    for k in 0..n {
        sum += (k as f64 + q).powf(-s);
    }
    let x = n as f64 + q;
    sum += x.powf(1.0 - s) / (s - 1.0) + 0.5 * x.powf(-s) + s / 12.0 * x.powf(-s - 1.0)
        - s * (s + 1.0) * (s + 2.0) / 720.0 * x.powf(-s - 3.0);
    sum
}

/// Renewal-normalized sequence with e^{-(a_0+…+a_{n-1})} = (n+shift)^{-γ}/ζ(γ, 1+shift):
/// a_0 = γ ln(1+shift) + ln ζ(γ, 1+shift), a_k = γ ln((k+1+shift)/(k+shift)).
/// The excursion weights then sum to exactly 1 at β = 1.
pub fn hofbauer_sequence(gamma: f64, shift: f64) -> Result<FreezingSequence> {
    if !(gamma > 1.0 && shift >= 0.0) {
        return Err(Error::input("hofbauer sequence needs gamma > 1 and shift ≥ 0"));
    }
    let a0 = gamma * (1.0 + shift).ln() + hurwitz_zeta(gamma, 1.0 + shift).ln();
    let tail = Tail::Hofbauer { gamma, shift };
    if a0 < tail.eval(1) {
        return Err(Error::input("hofbauer shift too small for a monotone sequence"));
    }
    Ok(FreezingSequence {
        table: vec![a0],
        tail,
        recipe: Recipe::Custom {
            label: format!("hofbauer(gamma={gamma}, shift={shift})"),
        },
        class: AsymptoticClass::InversePower { exponent: 1.0 },
        extrapolated_from: None,
        repaired: false,
        conditional: false,
    })
}

/// A user-supplied finite table; values beyond it decay like 1/j and are
/// flagged extrapolated.
pub fn custom_sequence(values: Vec<f64>, label: &str) -> Result<FreezingSequence> {
    if values.is_empty() {
        return Err(Error::input("custom sequence needs at least one value"));
    }
    if values.iter().any(|&v| !(v > 0.0) || !v.is_finite()) {
        return Err(Error::input("custom sequence values must be positive and finite"));
    }
    if values.windows(2).any(|w| w[1] > w[0]) {
        return Err(Error::input("custom sequence must be non-increasing"));
    }
    let n = values.len();
    let last = values[n - 1];
    Ok(FreezingSequence {
        table: values,
        tail: Tail::Harmonic {
            last,
            at: (n - 1).max(1),
        },
        recipe: Recipe::Custom {
            label: label.to_string(),
        },
        class: AsymptoticClass::Custom,
        extrapolated_from: Some(n),
        repaired: false,
        conditional: false,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn kappa(k: Vec<f64>, dim: usize) -> KappaSequence {
        KappaSequence {
            kappa: k,
            h_ref: 0.0,
            dim,
            conditional: false,
        }
    }

    #[test]
    fn dyadic_ranges() {
        assert_eq!(dyadic_range(2), Some(0));
        assert_eq!(dyadic_range(3), Some(1));
        assert_eq!(dyadic_range(4), Some(1));
        assert_eq!(dyadic_range(5), Some(2));
        assert_eq!(dyadic_range(8), Some(2));
        assert_eq!(dyadic_range(9), Some(3));
    }

    #[test]
    fn thm34_single_point_values() {
        let s = thm34_from_kappa(&kappa(vec![0.0; 6], 1));
        assert_eq!(s.value(2), 3.0);
        assert_eq!(s.value(0), 3.0);
        assert_eq!(s.value(3), 1.5);
        assert_eq!(s.value(4), 1.5);
        assert!((s.value(5) - (2.0 * 2f64.ln() + 3.0) / 4.0).abs() < 1e-15);
        assert!((s.value(8) - 1.0965735902799727).abs() < 1e-12);
        assert!(!s.repaired);
        for j in 0..5000 {
            assert!(s.value(j + 1) <= s.value(j));
        }
    }

    #[test]
    fn thm34_repairs_increasing_kappa() {
        let s = thm34_from_kappa(&kappa(vec![0.0, 0.0, 5.0], 1));
        assert!(s.repaired);
        assert!(s.value(2) >= s.value(5));
    }

    #[test]
    fn thm51_values() {
        let s = build_thm51_sequence(0.5).unwrap();
        assert_eq!(s.value(10), 0.5);
        assert_eq!(s.value(0), s.value(1));
        assert!(build_thm51_sequence(0.0).is_err());
    }

    #[test]
    fn thm52_zero_kappa() {
        let s = build_thm52_sequence(&kappa(vec![0.0; 8], 1), 100).unwrap();
        for j in 2..=100usize {
            let want = (2.0 * (j as f64).ln() + 1.0) / j as f64;
            assert!((s.value(3 * j) - want).abs() < 1e-14, "j = {j}");
        }
        assert!(s.repaired);
        assert!(build_thm52_sequence(&kappa(vec![0.0; 3], 1), 100).is_err());
    }

    #[test]
    fn cor53_values() {
        let s = build_cor53_sequence();
        assert!((s.value(8) - 0.5405096406579765).abs() < 1e-13);
        for j in 8..200 {
            let l = (j as f64).ln();
            assert!((s.value(j) * j as f64 / (l * l) - 1.0).abs() < 1e-14);
        }
        for j in 0..200 {
            assert!(s.value(j + 1) <= s.value(j));
            if j >= 2 {
                let l = (j as f64).ln();
                assert!(s.value(j) >= l * l / j as f64);
            }
        }
    }

    #[test]
    fn hurwitz_matches_apery() {
        assert!((hurwitz_zeta(3.0, 1.0) - 1.2020569031595942).abs() < 1e-12);
        let s = hofbauer_sequence(3.0, 5.0).unwrap();
        let mut total = 0.0;
        let mut acc = 0.0;
        for n in 1..200_000 {
            acc += s.value(n - 1);
            total += (-acc).exp();
        }
        assert!((total - 1.0).abs() < 1e-8, "{total}");
    }

    #[test]
    fn custom_rejects_increasing() {
        assert!(custom_sequence(vec![1.0, 2.0], "x").is_err());
        let s = custom_sequence(vec![2.0, 1.0], "x").unwrap();
        assert!(s.is_extrapolated(2));
        assert_eq!(s.value(2), 0.5);
    }
}
