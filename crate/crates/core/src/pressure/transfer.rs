use std::sync::Arc;

use rustc_hash::FxHashMap;

use super::{PressureCurve, PressureMethod, PressurePoint};
use crate::error::{Error, Result};
use crate::par;
use crate::potential::TruncatedPotential;
use crate::spectral::perron_root;
use crate::subshift::Subshift;

const NONE: u32 = u32::MAX;

/// Largest number of W-windows |𝒜|^W tabulated by the transfer method.
pub const MAX_TRANSFER_WINDOWS: usize = 1 << 26;

const MAX_POWER_ITERATIONS: usize = 2_000_000;

/// Transfer structure on (W−1)-words with edges labelled by the distance
/// code of the W-window they spell, lumped by forward bisimulation.
#[derive(Clone, Debug)]
pub struct LumpedOperator {
    pub radius: usize,
    pub window: usize,
    pub states: usize,
    pub classes: usize,
    /// (from class, to class, code); code j ≤ R is Exact(j), R + 1 admissible.
    pub edges: Vec<(u32, u32, u8)>,
}

impl LumpedOperator {
    pub fn build(potential: &TruncatedPotential) -> Result<Self> {
        let spec = potential.spec();
        if spec.dim() != 1 {
            return Err(Error::input("transfer pressure needs d = 1"));
        }
        let r = potential.radius();
        if r >= 250 {
            return Err(Error::guard("transfer radius", r as f64, 249.0));
        }
        let a = spec.alphabet_size();
        let w = if spec.is_one_sided() { r + 1 } else { 2 * r + 1 };
        let windows = (a as f64).powi(w as i32);
        if windows > MAX_TRANSFER_WINDOWS as f64 {
            return Err(Error::guard("transfer windows |A|^W", windows, MAX_TRANSFER_WINDOWS as f64));
        }
        let codes = distance_codes(spec, w)?;
        let states = codes.len() / a;
        let (cls, classes) = lump(&codes, a, states);
        let mut rep = vec![u32::MAX; classes];
        for (u, &c) in cls.iter().enumerate() {
            if rep[c as usize] == u32::MAX {
                rep[c as usize] = u as u32;
            }
        }
        let mut edges = Vec::with_capacity(classes * a);
        for (c, &u) in rep.iter().enumerate() {
            for s in 0..a {
                let idx = u as usize * a + s;
                edges.push((c as u32, cls[idx % states], codes[idx]));
            }
        }
        Ok(LumpedOperator {
            radius: r,
            window: w,
            states,
            classes,
            edges,
        })
    }

    /// Certified enclosure of the spectral radius of the weighted structure
    /// with weight `weights[code]` on each edge.
    pub fn perron(&self, weights: &[f64], tol: f64) -> Result<crate::spectral::CwBounds> {
        let n = self.classes;
        let mut rows: Vec<Vec<(u32, f64)>> = vec![Vec::new(); n];
        for &(from, to, code) in &self.edges {
            let wgt = weights[code as usize];
            if wgt > 0.0 {
                rows[from as usize].push((to, wgt));
            }
        }
        perron_root(
            n,
            |u, y| {
                for (i, row) in rows.iter().enumerate() {
                    y[i] = row.iter().map(|&(t, wgt)| wgt * u[t as usize]).sum();
                }
            },
            None,
            tol,
            MAX_POWER_ITERATIONS,
        )
    }
}

/// Admissibility of every word of length 1..=w, handed to `visit` in order.
fn for_each_length<F>(spec: &Subshift, w: usize, mut visit: F) -> Result<()>
where
    F: FnMut(usize, &[bool]),
{
    let a = spec.alphabet_size();
    if let Some(g) = spec.follower_graph() {
        let l = g.word_len();
        let mut state: Vec<u32> = Vec::new();
        for len in 1..=w {
            let size = a.pow(len as u32);
            if len < l {
                let mut adm = vec![false; size];
                for v in 0..g.vertex_count() {
                    adm[encode(&g.vertex_word(v)[..len], a)] = true;
                }
                visit(len, &adm);
            } else if len == l {
                state = vec![NONE; size];
                for v in 0..g.vertex_count() {
                    state[encode(g.vertex_word(v), a)] = v as u32;
                }
                let adm: Vec<bool> = state.iter().map(|&s| s != NONE).collect();
                visit(len, &adm);
            } else {
                let prev = std::mem::take(&mut state);
                let mut next = vec![NONE; size];
                par::fill(&mut next, |idx| {
                    let p = prev[idx / a];
                    if p == NONE {
                        NONE
                    } else {
                        g.successor(p as usize, (idx % a) as u8).map_or(NONE, |t| t as u32)
                    }
                });
                state = next;
                let adm: Vec<bool> = state.iter().map(|&s| s != NONE).collect();
                visit(len, &adm);
            }
        }
        return Ok(());
    }
    for len in 1..=w {
        let size = a.pow(len as u32);
        let adm = par::map_range(size, |idx| spec.admissible_word(&decode(idx, a, len)));
        let adm = adm.into_iter().collect::<Result<Vec<bool>>>()?;
        visit(len, &adm);
    }
    Ok(())
}

fn encode(word: &[u8], a: usize) -> usize {
    word.iter().fold(0, |acc, &s| acc * a + s as usize)
}

fn decode(mut idx: usize, a: usize, len: usize) -> Vec<u8> {
    let mut w = vec![0u8; len];
    for i in (0..len).rev() {
        w[i] = (idx % a) as u8;
        idx /= a;
    }
    w
}

/// Distance code of every W-window (most significant symbol first).
/// Two-sided windows are centered; one-sided windows are prefixes.
pub(crate) fn distance_codes(spec: &Subshift, w: usize) -> Result<Vec<u8>> {
    let a = spec.alphabet_size();
    let one_sided = spec.is_one_sided();
    let mut codes: Vec<u8> = Vec::new();
    for_each_length(spec, w, |len, adm| {
        if one_sided {
            if len == 1 {
                codes = adm.iter().map(|&ok| ok as u8).collect();
            } else {
                let prev = std::mem::take(&mut codes);
                let l = len as u8;
                let mut next = vec![0u8; adm.len()];
                par::fill(&mut next, |idx| {
                    let p = prev[idx / a];
                    if p < l - 1 {
                        p
                    } else if adm[idx] {
                        l
                    } else {
                        l - 1
                    }
                });
                codes = next;
            }
        } else if len % 2 == 1 {
            let k = (len / 2) as u8;
            if len == 1 {
                codes = adm.iter().map(|&ok| ok as u8).collect();
            } else {
                let prev = std::mem::take(&mut codes);
                let inner = prev.len();
                let mut next = vec![0u8; adm.len()];
                par::fill(&mut next, |idx| {
                    let p = prev[(idx / a) % inner];
                    if p < k {
                        p
                    } else if adm[idx] {
                        k + 1
                    } else {
                        k
                    }
                });
                codes = next;
            }
        }
    })?;
    Ok(codes)
}

/// Coarsest partition of the states such that equivalent states see the
/// same edge codes and move to equivalent states.
fn lump(codes: &[u8], a: usize, states: usize) -> (Vec<u32>, usize) {
    let mut cls = vec![0u32; states];
    let mut count = 1usize;
    let mut keys = vec![0u128; states];
    loop {
        if a <= 3 {
            par::fill(&mut keys, |u| {
                let mut k = 0u128;
                for s in 0..a {
                    let idx = u * a + s;
                    k = (k << 40) | ((codes[idx] as u128) << 32) | cls[idx % states] as u128;
                }
                k
            });
        } else {
            let mut stage: FxHashMap<u128, u32> = FxHashMap::default();
            for u in 0..states {
                let mut acc = 0u32;
                for s in 0..a {
                    let idx = u * a + s;
                    let key = ((s as u128) << 80)
                        | ((acc as u128) << 40)
                        | ((codes[idx] as u128) << 32)
                        | cls[idx % states] as u128;
                    let fresh = stage.len() as u32;
                    acc = *stage.entry(key).or_insert(fresh);
                }
                keys[u] = acc as u128;
            }
        }
        let mut ids: FxHashMap<u128, u32> = FxHashMap::default();
        let mut next = vec![0u32; states];
        for u in 0..states {
            let fresh = ids.len() as u32;
            next[u] = *ids.entry(keys[u]).or_insert(fresh);
        }
        let new_count = ids.len();
        cls = next;
        if new_count == count {
            return (cls, count);
        }
        count = new_count;
    }
}

fn operator(potential: &TruncatedPotential) -> Result<Arc<LumpedOperator>> {
    if let Some(op) = potential.operator.get() {
        return Ok(op.clone());
    }
    let op = Arc::new(LumpedOperator::build(potential)?);
    let _ = potential.operator.set(op.clone());
    Ok(potential.operator.get().cloned().unwrap_or(op))
}

/// p(β) for φ_R via the Perron root of the lumped transfer structure, with
/// the bracket ln(lo) − β a_R ≤ p_φ(β) ≤ ln(hi).
pub fn transfer_pressure_1d(potential: &TruncatedPotential, beta: f64, tol: f64) -> Result<PressurePoint> {
    if !(beta >= 0.0) || !beta.is_finite() {
        return Err(Error::input("beta must be finite and non-negative"));
    }
    let op = operator(potential)?;
    let r = potential.radius();
    let weights: Vec<f64> = (0..=r + 1)
        .map(|code| if code > r { 1.0 } else { (-beta * potential.a(code)).exp() })
        .collect();
    let b = op.perron(&weights, tol)?;
    let lower = b.lower.ln() - beta * potential.error_bound();
    let upper = b.upper.ln();
    let estimate = b.mid().ln().clamp(b.lower.ln(), upper);
    Ok(PressurePoint {
        beta,
        estimate,
        lower,
        upper,
        method: PressureMethod::Transfer1d,
        radius: r,
        tol,
        finite_size_slack: None,
        note: None,
    })
}

/// Transfer pressure over a β grid, in parallel across β.
pub fn transfer_curve(potential: &TruncatedPotential, betas: &[f64], tol: f64) -> Result<PressureCurve> {
    operator(potential)?;
    let points = par::map(betas.to_vec(), |b| transfer_pressure_1d(potential, b, tol));
    Ok(PressureCurve::new(
        points.into_iter().collect::<Result<Vec<_>>>()?,
        "transfer-1d",
    ))
}
