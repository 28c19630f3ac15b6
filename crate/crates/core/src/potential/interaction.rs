use std::sync::Arc;

use super::sequence::FreezingSequence;
use super::truncated::nested_region;
use crate::error::{Error, Result};
use crate::subshift::{Pattern, Subshift};

/// Φ_{Λ_n}(x) = a_{n+1} − a_n when x|Λ_n ∉ ℒ, else 0, on the nested boxes
/// Λ_n and their translates.
#[derive(Clone, Debug)]
pub struct InteractionFamily {
    spec: Arc<Subshift>,
    values: Vec<f64>,
    s_partial: Vec<f64>,
    b_partial: Vec<f64>,
}

impl InteractionFamily {
    pub fn n_max(&self) -> usize {
        self.values.len() - 1
    }

    pub fn spec(&self) -> &Arc<Subshift> {
        &self.spec
    }

    /// a_{n+1} − a_n, the value on an inadmissible Λ_n pattern.
    pub fn value(&self, n: usize) -> f64 {
        self.values[n]
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Σ_{k ≤ n} |Λ_k| ‖Φ_{Λ_k}‖_∞.
    pub fn s_norm(&self, n: usize) -> f64 {
        self.s_partial[n.min(self.n_max())]
    }

    /// Σ_{k ≤ n} ‖Φ_{Λ_k}‖_∞.
    pub fn b_norm(&self, n: usize) -> f64 {
        self.b_partial[n.min(self.n_max())]
    }

    pub fn s_partial(&self) -> &[f64] {
        &self.s_partial
    }

    pub fn b_partial(&self) -> &[f64] {
        &self.b_partial
    }

    pub fn box_volume(&self, n: usize) -> usize {
        nested_region(&self.spec, n).volume()
    }

    /// Φ on a pattern occupying a translate of Λ_n.
    pub fn evaluate(&self, n: usize, p: &Pattern) -> Result<f64> {
        if n > self.n_max() {
            return Err(Error::input(format!("box index {n} beyond n_max {}", self.n_max())));
        }
        let want = nested_region(&self.spec, n);
        if p.dims() != want.dims.as_slice() || !p.is_full() {
            return Err(Error::input("pattern does not fill a translate of the box"));
        }
        Ok(if self.spec.admissible(p)? { 0.0 } else { self.values[n] })
    }

    /// Σ_{n ≤ n_max} Φ_{Λ_n} on the centered boxes of a window covering Λ_{n_max}.
    pub fn centered_sum(&self, window: &Pattern) -> Result<f64> {
        let mut total = 0.0;
        for n in 0..=self.n_max() {
            let part = window.sub_box(&nested_region(&self.spec, n))?;
            total += self.evaluate(n, &part)?;
        }
        Ok(total)
    }
}

pub fn generate_interaction(sequence: &FreezingSequence, spec: Arc<Subshift>, n_max: usize) -> InteractionFamily {
    let a = sequence.values(n_max + 1);
    let values: Vec<f64> = (0..=n_max).map(|n| a[n + 1] - a[n]).collect();
    let mut s_partial = Vec::with_capacity(n_max + 1);
    let mut b_partial = Vec::with_capacity(n_max + 1);
    let (mut s, mut b) = (0.0, 0.0);
    for (n, v) in values.iter().enumerate() {
        let vol = nested_region(&spec, n).volume() as f64;
        s += vol * v.abs();
        b += v.abs();
        s_partial.push(s);
        b_partial.push(b);
    }
    InteractionFamily {
        spec,
        values,
        s_partial,
        b_partial,
    }
}
