use std::collections::BTreeMap;
use std::sync::Arc;

use rustc_hash::FxHashMap;

use super::{PressureMethod, PressurePoint};
use crate::error::{Error, Result};
use crate::par;
use crate::potential::TruncatedPotential;

/// Largest |𝒜|^{n^d} enumerated by the torus method.
pub const MAX_TORUS_CONFIGS: usize = 1 << 26;

/// Occurrences of forbidden local patterns on the periodic lattice (Z/n)^d,
/// with, for every center, the radius at which each occurrence first fits
/// in the periodic window around it. Admissibility of a periodic window is
/// read as absence of forbidden occurrences.
#[derive(Clone, Debug)]
pub(crate) struct TorusModel {
    pub sites: usize,
    pub radius: usize,
    /// cells (site, symbol) of each possible occurrence
    pub occ: Vec<Vec<(u32, u8)>>,
    /// occurrences touching each site
    pub by_site: Vec<Vec<u32>>,
    /// per center: (occurrence, radius ≤ R) pairs
    pub near: Vec<Vec<(u32, u8)>>,
}

impl TorusModel {
    pub fn new(potential: &TruncatedPotential, n: usize) -> Result<Self> {
        let spec = potential.spec();
        let rules = spec
            .local_rules()
            .ok_or_else(|| Error::input("torus methods need an SFT, full-shift or single-point spec"))?;
        if n == 0 {
            return Err(Error::input("torus side must be positive"));
        }
        let d = spec.dim();
        let one_sided = spec.is_one_sided();
        let sites = n.pow(d as u32);
        let r = potential.radius();
        let coords = |mut s: usize| -> Vec<i64> {
            let mut c = vec![0i64; d];
            for i in (0..d).rev() {
                c[i] = (s % n) as i64;
                s /= n;
            }
            c
        };
        let site_of = |c: &[i64]| -> u32 {
            c.iter().fold(0usize, |acc, &v| acc * n + v.rem_euclid(n as i64) as usize) as u32
        };
        let mut occ = Vec::new();
        let mut anchors: Vec<(Vec<i64>, usize)> = Vec::new();
        for (ri, rule) in rules.rules().iter().enumerate() {
            for s in 0..sites {
                let a = coords(s);
                let mut cells: Vec<(u32, u8)> = rule
                    .iter()
                    .map(|(o, sym)| {
                        let p: Vec<i64> = a.iter().zip(o).map(|(x, y)| x + y).collect();
                        (site_of(&p), *sym)
                    })
                    .collect();
                cells.sort_unstable();
                let clash = cells.windows(2).any(|w| w[0].0 == w[1].0 && w[0].1 != w[1].1);
                if clash {
                    continue;
                }
                cells.dedup();
                occ.push(cells);
                anchors.push((a, ri));
            }
        }
        let mut by_site = vec![Vec::new(); sites];
        for (k, cells) in occ.iter().enumerate() {
            for &(s, _) in cells {
                by_site[s as usize].push(k as u32);
            }
        }
        let nn = n as i64;
        let near = par::map_range(sites, |c| {
            let cc = coords(c);
            let mut list = Vec::new();
            for (k, (a, ri)) in anchors.iter().enumerate() {
                let rule = &rules.rules()[*ri];
                let mut rad = 0i64;
                let mut ok = true;
                for axis in 0..d {
                    let offs: Vec<i64> = rule.iter().map(|(o, _)| a[axis] + o[axis] - cc[axis]).collect();
                    let lo = *offs.iter().min().unwrap();
                    let hi = *offs.iter().max().unwrap();
                    // lifts t with the shifted span inside [-R, R] (one-sided [0, R])
                    let rr = r as i64;
                    let floor_lo = if one_sided { 0 } else { -rr };
                    let t_min = (floor_lo - lo).div_euclid(nn) + ((floor_lo - lo).rem_euclid(nn) != 0) as i64;
                    let t_max = (rr - hi).div_euclid(nn);
                    let mut best = i64::MAX;
                    for t in t_min..=t_max {
                        let (l, h) = (lo + t * nn, hi + t * nn);
                        let reach = if one_sided { h } else { l.abs().max(h.abs()) };
                        best = best.min(reach);
                    }
                    if best == i64::MAX {
                        ok = false;
                        break;
                    }
                    rad = rad.max(best);
                }
                if ok && rad <= r as i64 {
                    list.push((k as u32, rad as u8));
                }
            }
            list
        });
        Ok(TorusModel {
            sites,
            radius: r,
            occ,
            by_site,
            near,
        })
    }

    pub fn occurrence_present(&self, k: usize, cells: &[u8]) -> bool {
        self.occ[k].iter().all(|&(s, sym)| cells[s as usize] == sym)
    }
}

/// Energy-level histogram of all configurations on the torus: for each
/// vector (#centers with code j)_{j ≤ R}, how many configurations realize it.
#[derive(Clone, Debug)]
pub struct TorusHistogram {
    pub n: usize,
    pub sites: usize,
    pub radius: usize,
    pub levels: Vec<(Vec<u16>, u64)>,
}

impl TorusHistogram {
    pub fn build(potential: &TruncatedPotential, n: usize) -> Result<Self> {
        let model = TorusModel::new(potential, n)?;
        let a = potential.spec().alphabet_size();
        let total = (a as f64).powi(model.sites as i32);
        if total > MAX_TORUS_CONFIGS as f64 {
            return Err(Error::guard("torus configurations |A|^(n^d)", total, MAX_TORUS_CONFIGS as f64));
        }
        if model.occ.len() > 128 {
            return Err(Error::guard("forbidden occurrences on the torus", model.occ.len() as f64, 128.0));
        }
        let r = model.radius;
        let base = (model.sites + 1) as u64;
        if (base as f64).powi(r as i32 + 1) >= u64::MAX as f64 {
            return Err(Error::guard("torus energy key", (base as f64).powi(r as i32 + 1), u64::MAX as f64));
        }
        let total = total as usize;
        let masks: Vec<Vec<u128>> = model
            .near
            .iter()
            .map(|list| {
                let mut m = vec![0u128; r + 1];
                for &(k, rad) in list {
                    for slot in m.iter_mut().skip(rad as usize) {
                        *slot |= 1u128 << k;
                    }
                }
                m
            })
            .collect();
        let sites = model.sites;
        let chunk = 1 << 16;
        let maps = par::chunked(total, chunk, |range| {
            let mut map: FxHashMap<u64, u64> = FxHashMap::default();
            let mut cells = vec![0u8; sites];
            for x in range {
                let mut v = x;
                for c in cells.iter_mut() {
                    *c = (v % a) as u8;
                    v /= a;
                }
                let mut present = 0u128;
                for k in 0..model.occ.len() {
                    if model.occurrence_present(k, &cells) {
                        present |= 1u128 << k;
                    }
                }
                let mut key = 0u64;
                for m in &masks {
                    if let Some(j) = m.iter().position(|&mask| mask & present != 0) {
                        key += base.pow(j as u32);
                    }
                }
                *map.entry(key).or_insert(0) += 1;
            }
            map
        });
        let mut merged: BTreeMap<u64, u64> = BTreeMap::new();
        for m in maps {
            for (k, v) in m {
                *merged.entry(k).or_insert(0) += v;
            }
        }
        let levels = merged
            .into_iter()
            .map(|(mut key, mult)| {
                let mut counts = vec![0u16; r + 1];
                for c in counts.iter_mut() {
                    *c = (key % base) as u16;
                    key /= base;
                }
                (counts, mult)
            })
            .collect();
        Ok(TorusHistogram {
            n,
            sites,
            radius: r,
            levels,
        })
    }

    /// (1/n^d) ln Σ_x exp(β Σ_c φ_R(x, c)).
    pub fn pressure(&self, a: &[f64], beta: f64) -> f64 {
        let exps: Vec<(f64, f64)> = self
            .levels
            .iter()
            .map(|(counts, mult)| {
                let e: f64 = counts.iter().enumerate().map(|(j, &c)| c as f64 * a[j]).sum();
                (-beta * e, *mult as f64)
            })
            .collect();
        let top = exps.iter().map(|e| e.0).fold(f64::NEG_INFINITY, f64::max);
        let sum: f64 = exps.iter().map(|(e, m)| m * (e - top).exp()).sum();
        (top + sum.ln()) / self.sites as f64
    }
}

fn histogram(potential: &TruncatedPotential, n: usize) -> Result<Arc<TorusHistogram>> {
    if let Some(h) = potential.torus.lock().unwrap().get(&n) {
        return Ok(h.clone());
    }
    let h = Arc::new(TorusHistogram::build(potential, n)?);
    potential.torus.lock().unwrap().insert(n, h.clone());
    Ok(h)
}

/// Exact finite-torus pressure of φ_R. The bracket [est − β a_R, est] only
/// reflects truncation; the n vs n−1 difference is reported as finite-size
/// slack without any rigor claim.
pub fn torus_pressure_2d(potential: &TruncatedPotential, beta: f64, n: usize) -> Result<PressurePoint> {
    if potential.spec().dim() != 2 {
        return Err(Error::input("torus pressure needs d = 2"));
    }
    if !(beta >= 0.0) || !beta.is_finite() {
        return Err(Error::input("beta must be finite and non-negative"));
    }
    let a: Vec<f64> = (0..=potential.radius()).map(|j| potential.a(j)).collect();
    let h = histogram(potential, n)?;
    let estimate = h.pressure(&a, beta);
    let finite_size_slack = if n >= 2 {
        let prev = histogram(potential, n - 1)?;
        Some((estimate - prev.pressure(&a, beta)).abs())
    } else {
        None
    };
    Ok(PressurePoint {
        beta,
        estimate,
        lower: estimate - beta * potential.error_bound(),
        upper: estimate,
        method: PressureMethod::Torus2d,
        radius: potential.radius(),
        tol: 0.0,
        finite_size_slack,
        note: Some("finite-size slack is an estimate, not a rigorous bound".into()),
    })
}
