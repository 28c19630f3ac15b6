use std::io::Write;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::potential::TruncatedPotential;
use crate::pressure::torus::TorusModel;
use crate::subshift::Pattern;

/// Identifier of the generator recorded with every run.
pub const RNG_ALGORITHM: &str = "chacha8";

/// Largest torus side^d accepted by the sampler.
pub const MAX_CHAIN_SITES: usize = 1 << 20;

#[derive(Clone, Debug, Serialize)]
pub struct TelemetryRow {
    pub step: u64,
    pub energy: f64,
    pub inadmissible_mass: f64,
}

#[derive(Clone, Debug)]
pub struct ChainConfig {
    /// Steps discarded before statistics are collected.
    pub burn_in: u64,
    /// Steps between statistic samples (default: one sweep).
    pub sample_every: Option<u64>,
    /// Steps between telemetry rows; 0 disables telemetry.
    pub telemetry_every: u64,
    /// Cylinders whose occurrence frequency is tracked (patterns anchored anywhere on the torus).
    pub cylinders: Vec<Pattern>,
    pub initial: Option<Vec<u8>>,
}

impl Default for ChainConfig {
    fn default() -> Self {
        ChainConfig {
            burn_in: 0,
            sample_every: None,
            telemetry_every: 0,
            cylinders: Vec::new(),
            initial: None,
        }
    }
}

/// State and accumulated statistics of one chain.
#[derive(Clone, Debug, Serialize)]
pub struct ChainState {
    pub n: usize,
    pub dim: usize,
    pub seed: u64,
    pub algorithm: &'static str,
    pub beta: f64,
    pub steps: u64,
    pub accepted: u64,
    pub cells: Vec<u8>,
    /// Σ_c φ_R at the current configuration.
    pub energy: f64,
    pub samples: u64,
    /// Σ over samples of the fraction of sites whose radius-R window is inadmissible.
    pub inadmissible_mass_sum: f64,
    /// Σ over samples of per-symbol site counts.
    pub symbol_counts: Vec<u64>,
    /// Σ over samples of cylinder occurrence counts.
    pub cylinder_counts: Vec<u64>,
    pub telemetry: Vec<TelemetryRow>,
}

impl ChainState {
    pub fn inadmissible_mass(&self) -> f64 {
        if self.samples == 0 {
            0.0
        } else {
            self.inadmissible_mass_sum / self.samples as f64
        }
    }

    pub fn symbol_frequencies(&self) -> Vec<f64> {
        let total: u64 = self.symbol_counts.iter().sum();
        self.symbol_counts
            .iter()
            .map(|&c| if total == 0 { 0.0 } else { c as f64 / total as f64 })
            .collect()
    }

    /// Per-site frequency of each designated cylinder.
    pub fn cylinder_frequencies(&self) -> Vec<f64> {
        let denom = (self.samples as f64) * (self.n.pow(self.dim as u32) as f64);
        self.cylinder_counts
            .iter()
            .map(|&c| if denom == 0.0 { 0.0 } else { c as f64 / denom })
            .collect()
    }

    pub fn write_telemetry<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["step", "energy", "inadmissible_mass"])?;
        for r in &self.telemetry {
            w.write_record([
                r.step.to_string(),
                crate::fmt_sig(r.energy),
                crate::fmt_sig(r.inadmissible_mass),
            ])?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Incrementally maintained occurrence counts and distance codes.
struct Lattice {
    model: TorusModel,
    /// per occurrence: (center, radius) pairs within R
    occ_near: Vec<Vec<(u32, u8)>>,
    present: Vec<bool>,
    counts: Vec<u16>,
    codes: Vec<u8>,
    values: Vec<f64>,
    cells: Vec<u8>,
    inadmissible: usize,
    energy: f64,
    stamp: Vec<u32>,
    epoch: u32,
}

impl Lattice {
    fn new(model: TorusModel, values: Vec<f64>, cells: Vec<u8>) -> Self {
        let r1 = model.radius + 1;
        let mut occ_near = vec![Vec::new(); model.occ.len()];
        for (c, list) in model.near.iter().enumerate() {
            for &(k, r) in list {
                occ_near[k as usize].push((c as u32, r));
            }
        }
        let sites = model.sites;
        let mut lat = Lattice {
            present: vec![false; model.occ.len()],
            counts: vec![0; sites * r1],
            codes: vec![r1 as u8; sites],
            occ_near,
            values,
            cells,
            inadmissible: 0,
            energy: 0.0,
            stamp: vec![0; sites],
            epoch: 0,
            model,
        };
        for k in 0..lat.present.len() {
            if lat.model.occurrence_present(k, &lat.cells) {
                lat.toggle(k, true);
            }
        }
        for c in 0..sites {
            lat.codes[c] = lat.code(c);
        }
        lat.inadmissible = lat.codes.iter().filter(|&&j| (j as usize) < r1).count();
        lat.energy = (0..sites).map(|c| lat.phi(lat.codes[c])).sum();
        lat
    }

    fn phi(&self, code: u8) -> f64 {
        if (code as usize) > self.model.radius {
            0.0
        } else {
            -self.values[code as usize]
        }
    }

    fn code(&self, c: usize) -> u8 {
        let r1 = self.model.radius + 1;
        let row = &self.counts[c * r1..(c + 1) * r1];
        row.iter().position(|&n| n > 0).unwrap_or(r1) as u8
    }

    fn toggle(&mut self, k: usize, on: bool) {
        let r1 = self.model.radius + 1;
        self.present[k] = on;
        for &(c, r) in &self.occ_near[k] {
            let slot = &mut self.counts[c as usize * r1 + r as usize];
            if on {
                *slot += 1;
            } else {
                *slot -= 1;
            }
        }
    }

    /// Set site s to symbol v, returning the energy change; the previous
    /// symbol is returned so the move can be undone.
    fn set(&mut self, s: usize, v: u8) -> (f64, u8) {
        let old = self.cells[s];
        self.cells[s] = v;
        self.epoch = self.epoch.wrapping_add(1);
        if self.epoch == 0 {
            self.stamp.iter_mut().for_each(|x| *x = 0);
            self.epoch = 1;
        }
        let mut touched: Vec<u32> = Vec::new();
        let ks = self.model.by_site[s].clone();
        for k in ks {
            let k = k as usize;
            let now = self.model.occurrence_present(k, &self.cells);
            if now != self.present[k] {
                self.toggle(k, now);
                for i in 0..self.occ_near[k].len() {
                    let c = self.occ_near[k][i].0;
                    if self.stamp[c as usize] != self.epoch {
                        self.stamp[c as usize] = self.epoch;
                        touched.push(c);
                    }
                }
            }
        }
        let r1 = self.model.radius + 1;
        let mut delta = 0.0;
        for c in touched {
            let c = c as usize;
            let before = self.codes[c];
            let after = self.code(c);
            if before != after {
                delta += self.phi(after) - self.phi(before);
                self.codes[c] = after;
                match ((before as usize) < r1, (after as usize) < r1) {
                    (false, true) => self.inadmissible += 1,
                    (true, false) => self.inadmissible -= 1,
                    _ => {}
                }
            }
        }
        self.energy += delta;
        (delta, old)
    }

    fn full_energy(&self) -> f64 {
        (0..self.model.sites).map(|c| self.phi(self.code(c))).sum()
    }
}

fn cylinder_hits(cells: &[u8], n: usize, dim: usize, cyl: &Pattern) -> u64 {
    let sites = cells.len();
    let defined = cyl.defined();
    let site_of = |c: &[i64]| -> usize {
        c.iter().fold(0usize, |acc, &v| acc * n + v.rem_euclid(n as i64) as usize)
    };
    let mut hits = 0;
    let mut coord = vec![0i64; dim];
    for s in 0..sites {
        let mut t = s;
        for i in (0..dim).rev() {
            coord[i] = (t % n) as i64;
            t /= n;
        }
        let ok = defined.iter().all(|(p, sym)| {
            let q: Vec<i64> = p.iter().zip(&coord).map(|(a, b)| a + b).collect();
            cells[site_of(&q)] == *sym
        });
        hits += ok as u64;
    }
    hits
}

pub fn metropolis_run(potential: &TruncatedPotential, beta: f64, n: usize, steps: u64, seed: u64) -> Result<ChainState> {
    metropolis_run_with(potential, beta, n, steps, seed, &ChainConfig::default())
}

/// Single-site Metropolis on the torus (Z/n)^d targeting exp(β Σ_c φ_R(σ^c x)).
/// Proposals pick a uniform site and a uniform different symbol.
pub fn metropolis_run_with(
    potential: &TruncatedPotential,
    beta: f64,
    n: usize,
    steps: u64,
    seed: u64,
    config: &ChainConfig,
) -> Result<ChainState> {
    let spec = potential.spec();
    let dim = spec.dim();
    if !(1..=2).contains(&dim) {
        return Err(Error::input("sampler supports d = 1 and d = 2"));
    }
    if !(beta >= 0.0) || !beta.is_finite() {
        return Err(Error::input("beta must be finite and non-negative"));
    }
    let sites = (n as f64).powi(dim as i32);
    if sites > MAX_CHAIN_SITES as f64 || n == 0 {
        return Err(Error::guard("torus sites", sites, MAX_CHAIN_SITES as f64));
    }
    let sites = sites as usize;
    let a = spec.alphabet_size();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let cells = match &config.initial {
        Some(init) => {
            if init.len() != sites || init.iter().any(|&s| s as usize >= a) {
                return Err(Error::input("initial configuration does not fit the torus"));
            }
            init.clone()
        }
        None => (0..sites).map(|_| rng.gen_range(0..a) as u8).collect(),
    };
    for cyl in &config.cylinders {
        if cyl.dim() != dim {
            return Err(Error::input("cylinder dimension differs from the spec"));
        }
    }
    let model = TorusModel::new(potential, n)?;
    let values: Vec<f64> = (0..=potential.radius()).map(|j| potential.a(j)).collect();
    let mut lat = Lattice::new(model, values, cells);
    let sample_every = config.sample_every.unwrap_or(sites as u64).max(1);
    let mut state = ChainState {
        n,
        dim,
        seed,
        algorithm: RNG_ALGORITHM,
        beta,
        steps: 0,
        accepted: 0,
        cells: Vec::new(),
        energy: 0.0,
        samples: 0,
        inadmissible_mass_sum: 0.0,
        symbol_counts: vec![0; a],
        cylinder_counts: vec![0; config.cylinders.len()],
        telemetry: Vec::new(),
    };
    for step in 1..=steps {
        if a > 1 {
            let s = rng.gen_range(0..sites);
            let cur = lat.cells[s] as usize;
            let mut v = rng.gen_range(0..a - 1);
            if v >= cur {
                v += 1;
            }
            let (delta, old) = lat.set(s, v as u8);
            let accept = delta >= 0.0 || rng.gen::<f64>() < (beta * delta).exp();
            if accept {
                state.accepted += 1;
            } else {
                lat.set(s, old);
            }
        }
        if step > config.burn_in && (step - config.burn_in) % sample_every == 0 {
            state.samples += 1;
            state.inadmissible_mass_sum += lat.inadmissible as f64 / sites as f64;
            for &c in &lat.cells {
                state.symbol_counts[c as usize] += 1;
            }
            for (i, cyl) in config.cylinders.iter().enumerate() {
                state.cylinder_counts[i] += cylinder_hits(&lat.cells, n, dim, cyl);
            }
        }
        if config.telemetry_every > 0 && step % config.telemetry_every == 0 {
            state.telemetry.push(TelemetryRow {
                step,
                energy: lat.energy,
                inadmissible_mass: lat.inadmissible as f64 / sites as f64,
            });
        }
    }
    state.steps = steps;
    state.energy = lat.full_energy();
    state.cells = lat.cells;
    Ok(state)
}

/// Independent chains, one per seed, run in parallel.
pub fn metropolis_runs(
    potential: &TruncatedPotential,
    beta: f64,
    n: usize,
    steps: u64,
    seeds: &[u64],
    config: &ChainConfig,
) -> Result<Vec<ChainState>> {
    crate::par::map(seeds.to_vec(), |seed| metropolis_run_with(potential, beta, n, steps, seed, config))
        .into_iter()
        .collect()
}

/// For the move x → x′ (site `site` set to `symbol`): the ratio of Metropolis
/// transition probabilities P(x→x′)/P(x′→x) and the target weight ratio
/// π(x′)/π(x) from full energy recomputation.
pub fn detailed_balance_check(
    potential: &TruncatedPotential,
    beta: f64,
    n: usize,
    cells: &[u8],
    site: usize,
    symbol: u8,
) -> Result<(f64, f64)> {
    let model = TorusModel::new(potential, n)?;
    if cells.len() != model.sites || site >= model.sites {
        return Err(Error::input("configuration does not fit the torus"));
    }
    if cells[site] == symbol {
        return Err(Error::input("the move must change the symbol"));
    }
    let values: Vec<f64> = (0..=potential.radius()).map(|j| potential.a(j)).collect();
    let mut lat = Lattice::new(model.clone(), values.clone(), cells.to_vec());
    let e0 = lat.full_energy();
    let (delta, _) = lat.set(site, symbol);
    let e1 = Lattice::new(model, values, lat.cells.clone()).full_energy();
    let forward = (beta * delta).exp().min(1.0);
    let backward = (-beta * delta).exp().min(1.0);
    Ok((forward / backward, (beta * (e1 - e0)).exp()))
}
