use std::collections::BTreeMap;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::potential::{window_region, InteractionFamily};
use crate::subshift::{BoxRegion, BoxWindow, Pattern};

/// Largest |𝒜|^{|Λ|} enumerated for exact conditional weights.
pub const MAX_GIBBS_CONFIGS: usize = 1 << 20;

/// γ_Λ(·|y) for the interaction truncated at its n_max.
#[derive(Clone, Debug)]
pub struct FiniteSpecification {
    pub interaction: Arc<InteractionFamily>,
    pub region: BoxRegion,
    /// Covers `region` widened by the collar; cells inside `region` are ignored.
    pub boundary: Pattern,
    pub beta: f64,
}

impl FiniteSpecification {
    /// Width of the boundary collar: every box Λ′ meeting Λ lies in Λ widened by it.
    pub fn collar(interaction: &InteractionFamily) -> usize {
        let n = interaction.n_max();
        if interaction.spec().is_one_sided() {
            n
        } else {
            2 * n
        }
    }

    pub fn new(interaction: Arc<InteractionFamily>, region: BoxRegion, boundary: Pattern, beta: f64) -> Result<Self> {
        if region.dim() != interaction.spec().dim() || boundary.dim() != region.dim() {
            return Err(Error::input("dimension mismatch in finite specification"));
        }
        if !(beta >= 0.0) {
            return Err(Error::input("beta must be non-negative"));
        }
        let outer = region.expand(Self::collar(&interaction));
        let own = boundary.region();
        if !own.contains_box(&outer) {
            return Err(Error::input("boundary condition must cover the box plus its collar"));
        }
        for p in outer.points() {
            if !region.contains(&p) && boundary.get(&p).is_none() {
                return Err(Error::input("boundary condition has holes in the collar"));
            }
        }
        Ok(FiniteSpecification {
            interaction,
            region,
            boundary,
            beta,
        })
    }

    pub fn from_window(interaction: Arc<InteractionFamily>, window: &BoxWindow, boundary: Pattern, beta: f64) -> Result<Self> {
        Self::new(interaction, window.region(), boundary, beta)
    }

    /// U_Λ(x|y) = Σ_{Λ′ ∩ Λ ≠ ∅} Φ_{Λ′}(x ∨ y).
    pub fn energy(&self, x: &[u8]) -> Result<f64> {
        let mut full = self.boundary.clone();
        for (i, p) in self.region.points().enumerate() {
            full.set(&p, x[i])?;
        }
        let spec = self.interaction.spec();
        let zero = vec![0i64; self.region.dim()];
        let mut total = 0.0;
        for n in 0..=self.interaction.n_max() {
            let base = window_region(spec, n, &zero);
            let reach = BoxRegion::new(
                self.region
                    .origin
                    .iter()
                    .zip(&base.origin)
                    .zip(&base.dims)
                    .map(|((o, b), d)| o - b - *d as i64 + 1)
                    .collect(),
                self.region
                    .dims
                    .iter()
                    .zip(&base.dims)
                    .map(|(a, d)| a + d - 1)
                    .collect(),
            );
            for t in reach.points() {
                let part = full.sub_box(&base.translate(&t))?;
                total += self.interaction.evaluate(n, &part.normalized())?;
            }
        }
        Ok(total)
    }
}

/// Exact γ_Λ(x|y) = e^{βU_Λ(x|y)} / Z_Λ(y) for every x on Λ.
pub fn conditional_weights(fs: &FiniteSpecification) -> Result<BTreeMap<Pattern, f64>> {
    let a = fs.interaction.spec().alphabet_size();
    let vol = fs.region.volume();
    let total = (a as f64).powi(vol as i32);
    if total > MAX_GIBBS_CONFIGS as f64 {
        return Err(Error::guard("Gibbs configurations |A|^|Λ|", total, MAX_GIBBS_CONFIGS as f64));
    }
    let total = total as usize;
    let energies = crate::par::map_range(total, |code| {
        let x = decode(code, a, vol);
        fs.energy(&x).map(|u| (x, u))
    });
    let energies = energies.into_iter().collect::<Result<Vec<_>>>()?;
    let top = energies
        .iter()
        .map(|(_, u)| fs.beta * u)
        .fold(f64::NEG_INFINITY, f64::max);
    let z: f64 = energies.iter().map(|(_, u)| (fs.beta * u - top).exp()).sum();
    let mut out = BTreeMap::new();
    for (x, u) in energies {
        out.insert(Pattern::on_region(&fs.region, x)?, (fs.beta * u - top).exp() / z);
    }
    Ok(out)
}

fn decode(mut code: usize, a: usize, len: usize) -> Vec<u8> {
    let mut w = vec![0u8; len];
    for i in (0..len).rev() {
        w[i] = (code % a) as u8;
        code /= a;
    }
    w
}

/// ρ = |𝒜|^{-1} e^{−2‖Φ‖}, with ‖Φ‖ the truncated 𝒮-norm of βΦ.
pub fn full_support_rho(interaction: &InteractionFamily, trunc_norm: f64) -> f64 {
    (-2.0 * trunc_norm).exp() / interaction.spec().alphabet_size() as f64
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RhoCheck {
    pub rho: f64,
    pub bound: f64,
    pub min_weight: f64,
    pub holds: bool,
}

/// Every exact weight against ρ^{|Λ|}.
pub fn check_rho_bound(fs: &FiniteSpecification) -> Result<RhoCheck> {
    let w = conditional_weights(fs)?;
    let norm = fs.beta * fs.interaction.s_norm(fs.interaction.n_max());
    let rho = full_support_rho(&fs.interaction, norm);
    let bound = rho.powi(fs.region.volume() as i32);
    let min_weight = w.values().copied().fold(f64::INFINITY, f64::min);
    Ok(RhoCheck {
        rho,
        bound,
        min_weight,
        holds: min_weight >= bound,
    })
}
