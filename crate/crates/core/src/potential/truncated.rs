use std::collections::BTreeMap;
use std::sync::{Arc, Mutex, OnceLock};

use serde::{Deserialize, Serialize};

use super::sequence::FreezingSequence;
use crate::error::{Error, Result};
use crate::pressure::{LumpedOperator, TorusHistogram};
use crate::subshift::{BoxRegion, BoxWindow, Pattern, Subshift};

/// Depth j at which a configuration leaves the language around the origin.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum DistanceExponent {
    Exact(usize),
    AtLeast(usize),
}

impl DistanceExponent {
    pub fn exact(&self) -> Option<usize> {
        match self {
            DistanceExponent::Exact(j) => Some(*j),
            DistanceExponent::AtLeast(_) => None,
        }
    }
}

/// Region read by a radius-R evaluation centered at `center`:
/// StatBox(R) two-sided, [c, c+R] one-sided.
pub fn window_region(spec: &Subshift, radius: usize, center: &[i64]) -> BoxRegion {
    let base = if spec.is_one_sided() {
        BoxWindow::prefix(radius + 1).region()
    } else {
        BoxWindow::stat(radius, spec.dim()).region()
    };
    base.translate(center)
}

/// The n-th nested region around the origin: StatBox(n), or the prefix [0, n].
pub(crate) fn nested_region(spec: &Subshift, n: usize) -> BoxRegion {
    window_region(spec, n, &vec![0; spec.dim()])
}

fn window_radius(spec: &Subshift, window: &Pattern) -> Result<usize> {
    if window.dim() != spec.dim() || !window.is_full() {
        return Err(Error::input("distance window must be a full pattern of the spec dimension"));
    }
    let side = window.dims()[0];
    let r = if spec.is_one_sided() {
        side.checked_sub(1)
    } else if side % 2 == 1 {
        Some(side / 2)
    } else {
        None
    };
    match r {
        Some(r) if window.region() == nested_region(spec, r) => Ok(r),
        _ => Err(Error::input(if spec.is_one_sided() {
            "one-sided window must be a prefix anchored at 0"
        } else {
            "two-sided window must be a StatBox centered at the origin"
        })),
    }
}

/// Two-sided: the smallest r with the StatBox(r) restriction inadmissible.
/// One-sided: the length of the longest admissible prefix x_0…x_{j-1}.
/// Either way Exact(0) means the origin symbol is itself inadmissible.
pub fn distance_exponent(spec: &Subshift, window: &Pattern) -> Result<DistanceExponent> {
    let radius = window_radius(spec, window)?;
    if spec.dim() == 1 {
        let cells = window.cells();
        for r in 0..=radius {
            let slice = if spec.is_one_sided() {
                &cells[..=r]
            } else {
                &cells[radius - r..=radius + r]
            };
            if !spec.admissible_word(slice)? {
                return Ok(DistanceExponent::Exact(r));
            }
        }
        return Ok(DistanceExponent::AtLeast(radius + 1));
    }
    for r in 0..=radius {
        let part = window.sub_box(&nested_region(spec, r))?;
        if !spec.admissible(&part)? {
            return Ok(DistanceExponent::Exact(r));
        }
    }
    Ok(DistanceExponent::AtLeast(radius + 1))
}

/// φ_R: the freezing potential read through a radius-R window.
#[derive(Debug)]
pub struct TruncatedPotential {
    spec: Arc<Subshift>,
    sequence: Arc<FreezingSequence>,
    radius: usize,
    values: Vec<f64>,
    pub(crate) operator: OnceLock<Arc<LumpedOperator>>,
    pub(crate) torus: Mutex<BTreeMap<usize, Arc<TorusHistogram>>>,
}

impl Clone for TruncatedPotential {
    fn clone(&self) -> Self {
        TruncatedPotential {
            spec: self.spec.clone(),
            sequence: self.sequence.clone(),
            radius: self.radius,
            values: self.values.clone(),
            operator: self.operator.clone(),
            torus: Mutex::new(self.torus.lock().unwrap().clone()),
        }
    }
}

impl TruncatedPotential {
    pub fn new(spec: Arc<Subshift>, sequence: Arc<FreezingSequence>, radius: usize) -> Self {
        let values = sequence.values(radius + 1);
        TruncatedPotential {
            spec,
            sequence,
            radius,
            values,
            operator: OnceLock::new(),
            torus: Mutex::new(BTreeMap::new()),
        }
    }

    pub fn spec(&self) -> &Arc<Subshift> {
        &self.spec
    }

    pub fn sequence(&self) -> &Arc<FreezingSequence> {
        &self.sequence
    }

    pub fn radius(&self) -> usize {
        self.radius
    }

    pub fn a(&self, j: usize) -> f64 {
        self.values.get(j).copied().unwrap_or_else(|| self.sequence.value(j))
    }

    /// ‖φ − φ_R‖_∞ ≤ a_R.
    pub fn error_bound(&self) -> f64 {
        self.a(self.radius)
    }

    pub fn value_of(&self, d: DistanceExponent) -> f64 {
        match d {
            DistanceExponent::Exact(j) => -self.a(j),
            DistanceExponent::AtLeast(_) => 0.0,
        }
    }

    pub fn window_region(&self, center: &[i64]) -> BoxRegion {
        window_region(&self.spec, self.radius, center)
    }

    pub fn eval(&self, window: &Pattern) -> Result<f64> {
        if window_radius(&self.spec, window)? != self.radius {
            return Err(Error::input(format!(
                "window radius differs from the potential radius {}",
                self.radius
            )));
        }
        Ok(self.value_of(distance_exponent(&self.spec, window)?))
    }

    /// φ_R(σ^c x) for a pattern x covering the window around c.
    pub fn eval_at(&self, x: &Pattern, center: &[i64]) -> Result<f64> {
        let region = self.window_region(center);
        let neg: Vec<i64> = center.iter().map(|v| -v).collect();
        let w = x.sub_box(&region)?.translate(&neg);
        if !w.is_full() {
            return Err(Error::input("pattern has holes inside the evaluation window"));
        }
        self.eval(&w)
    }
}

pub fn eval_truncated(potential: &TruncatedPotential, window: &Pattern) -> Result<f64> {
    potential.eval(window)
}

/// Σ_{j∈S} φ_R(σ^j x′) − φ_R(σ^j x), where x′ is x with the copy of W at
/// `anchor` replaced by W′.
pub fn replacement_gain(
    potential: &TruncatedPotential,
    x: &Pattern,
    anchor: &[i64],
    w: &Pattern,
    w_prime: &Pattern,
    s: &BoxWindow,
) -> Result<f64> {
    if w.dims() != w_prime.dims() || !w.is_full() || !w_prime.is_full() {
        return Err(Error::input("W and W′ must be full patterns on the same box"));
    }
    if anchor.len() != x.dim() || w.dim() != x.dim() || s.dim != x.dim() {
        return Err(Error::input("dimension mismatch in replacement"));
    }
    let place = BoxRegion::new(anchor.to_vec(), w.dims().to_vec());
    let current = x.sub_box(&place)?;
    if current.cells() != w.cells() {
        return Err(Error::input("x does not contain W at the anchor"));
    }
    let mut x2 = x.clone();
    for (i, p) in place.points().enumerate() {
        x2.set(&p, w_prime.cells()[i])?;
    }
    let shifts = s.region();
    if !shifts.contains_box(&place) {
        return Err(Error::input("S must contain the anchored box"));
    }
    let mut gain = 0.0;
    for c in shifts.points() {
        if !x.region().contains_box(&potential.window_region(&c)) {
            return Err(Error::input("x must cover every window centered in S"));
        }
        gain += potential.eval_at(&x2, &c)? - potential.eval_at(x, &c)?;
    }
    Ok(gain)
}
