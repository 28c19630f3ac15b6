//! Block counting, entropy brackets and the gap sequence κ_i.

use std::collections::BTreeMap;
use std::io::Write;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};
use rustc_hash::FxHashMap;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::par;
use crate::spectral::spectral_radius;
use crate::subshift::{enumerate_language, BoxWindow, Pattern, SpecKind, Subshift, HOLE};

/// Default cap on the row width of the two-dimensional transfer count.
pub const ROW_WIDTH_CAP: usize = 22;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CountMethod {
    Brute,
    Transfer1d,
    RowTransfer2d,
    Substitution,
    ClosedForm,
}

impl CountMethod {
    pub fn as_str(&self) -> &'static str {
        match self {
            CountMethod::Brute => "brute",
            CountMethod::Transfer1d => "transfer-1d",
            CountMethod::RowTransfer2d => "row-transfer-2d",
            CountMethod::Substitution => "substitution",
            CountMethod::ClosedForm => "closed-form",
        }
    }
}

/// Natural log of a big integer, accurate to double rounding.
pub fn ln_big(x: &BigUint) -> f64 {
    let bits = x.bits();
    if bits <= 1000 {
        return x.to_f64().unwrap().ln();
    }
    let shift = bits - 64;
    let top = (x >> shift).to_f64().unwrap();
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

/// Exact counts |ℒ_{ErgBox(n)}(X₀)| with the method used for each.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ComplexityTable {
    pub dim: usize,
    pub counts: BTreeMap<usize, (BigUint, CountMethod)>,
}

impl ComplexityTable {
    pub fn build(spec: &Subshift, ns: impl IntoIterator<Item = usize>) -> Result<Self> {
        let mut counts = BTreeMap::new();
        for n in ns {
            counts.insert(n, count_blocks_with_method(spec, n)?);
        }
        Ok(ComplexityTable {
            dim: spec.dim(),
            counts,
        })
    }

    pub fn get(&self, n: usize) -> Option<&BigUint> {
        self.counts.get(&n).map(|c| &c.0)
    }

    /// log(count(n)) / n^d.
    pub fn rate(&self, n: usize) -> Option<f64> {
        self.get(n)
            .map(|c| ln_big(c) / (n as f64).powi(self.dim as i32))
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["n", "count", "method"])?;
        for (n, (c, m)) in &self.counts {
            w.write_record([n.to_string(), c.to_string(), m.as_str().to_string()])?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Exact number of admissible patterns on ErgBox(n).
pub fn count_blocks(spec: &Subshift, n: usize) -> Result<BigUint> {
    count_blocks_with_method(spec, n).map(|c| c.0)
}

pub fn count_blocks_with_method(spec: &Subshift, n: usize) -> Result<(BigUint, CountMethod)> {
    if n == 0 {
        return Err(Error::input("count_blocks needs n ≥ 1"));
    }
    let d = spec.dim();
    let vol = n.checked_pow(d as u32).ok_or_else(|| Error::guard("box volume", f64::INFINITY, usize::MAX as f64))?;
    match &spec.spec().kind {
        SpecKind::SinglePoint { .. } => Ok((BigUint::one(), CountMethod::ClosedForm)),
        SpecKind::FullShift { sub_alphabet } => Ok((
            BigUint::from(sub_alphabet.len()).pow(vol as u32),
            CountMethod::ClosedForm,
        )),
        SpecKind::Substitution { .. } => {
            let s = spec.substitution().expect("compiled substitution");
            let set = s.factor_set(&vec![n; d])?;
            Ok((BigUint::from(set.len()), CountMethod::Substitution))
        }
        SpecKind::Sft { forbidden } => {
            if let Some(g) = spec.follower_graph() {
                return Ok((g.count(n), CountMethod::Transfer1d));
            }
            if d == 2 && forbidden.iter().all(|p| p.dims()[0] <= 2) {
                return Ok((row_transfer_count(spec.alphabet_size(), forbidden, n, ROW_WIDTH_CAP)?, CountMethod::RowTransfer2d));
            }
            let words = enumerate_language(spec, &BoxWindow::erg(n, d))?;
            Ok((BigUint::from(words.len()), CountMethod::Brute))
        }
    }
}

/// Number of n×n blocks avoiding every forbidden pattern (height ≤ 2),
/// by a cell-by-cell transfer over the last `n + w - 1` placed cells.
///
/// Counts locally admissible blocks; for SFTs whose locally admissible
/// blocks all extend (hard squares, for example) this equals the language count.
pub fn row_transfer_count(alphabet: usize, forbidden: &[Pattern], n: usize, width_cap: usize) -> Result<BigUint> {
    if n > width_cap {
        return Err(Error::guard("row width", n as f64, width_cap as f64));
    }
    let rules: Vec<(usize, usize, Vec<(usize, usize, u8)>)> = forbidden
        .iter()
        .map(|p| {
            let (h, w) = (p.dims()[0], p.dims()[1]);
            let cells = p
                .cells()
                .iter()
                .enumerate()
                .filter(|(_, &c)| c != HOLE)
                .map(|(i, &c)| (i / w, i % w, c))
                .collect();
            (h, w, cells)
        })
        .collect();
    if rules.iter().any(|r| r.0 > 2) {
        return Err(Error::input("row transfer supports forbidden patterns of height at most 2"));
    }
    let wmax = rules.iter().map(|r| r.1).max().unwrap_or(1);
    let mem = n + wmax - 1;
    let base = alphabet as u128 + 1;
    if (mem as f64) * (base as f64).log2() > 127.0 {
        return Err(Error::guard("row transfer state bits", mem as f64 * (base as f64).log2(), 127.0));
    }
    let modulus = base.pow(mem as u32);
    // digit j of the key (0 = most recent) holds the cell placed j+1 steps back, 0 = empty
    let digit = |key: u128, back: usize| -> Option<u8> {
        let v = (key / base.pow(back as u32 - 1)) % base;
        (v != 0).then(|| (v - 1) as u8)
    };
    let mut states: FxHashMap<u128, BigUint> = FxHashMap::default();
    states.insert(0, BigUint::one());
    for r in 0..n {
        for c in 0..n {
            let entries: Vec<(u128, BigUint)> = states.drain().collect();
            let parts = par::chunked(entries.len(), 2048, |range| {
                let mut out: Vec<(u128, BigUint)> = Vec::new();
                for (key, count) in &entries[range] {
                    'sym: for s in 0..alphabet as u8 {
                        // cell (r - dr, c - dc) sits dr*n + dc steps back
                        for (h, w, cells) in &rules {
                            if r + 1 < *h || c + 1 < *w {
                                continue;
                            }
                            let hit = cells.iter().all(|&(i, j, sym)| {
                                let dr = h - 1 - i;
                                let dc = w - 1 - j;
                                let back = dr * n + dc;
                                let v = if back == 0 { Some(s) } else { digit(*key, back) };
                                v == Some(sym)
                            });
                            if hit {
                                continue 'sym;
                            }
                        }
                        let nk = (key * base + s as u128 + 1) % modulus;
                        out.push((nk, count.clone()));
                    }
                }
                out
            });
            for part in parts {
                for (k, v) in part {
                    *states.entry(k).or_default() += v;
                }
            }
        }
    }
    Ok(states.into_values().sum())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EntropyProvenance {
    Perron1d,
    ZeroSubstitution,
    ClosedForm,
    UserSupplied,
}

/// Bracket on h_top(X₀) in nats.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EntropyEstimate {
    pub upper: f64,
    pub lower: f64,
    pub exact: Option<f64>,
    pub provenance: Option<EntropyProvenance>,
}

impl EntropyEstimate {
    /// Entropy value for the κ formulas: the exact value when known, else the
    /// best upper bound (flagged conditional).
    pub fn reference(&self) -> (f64, bool) {
        match self.exact {
            Some(h) => (h, false),
            None => (self.upper, true),
        }
    }
}

pub fn entropy_bounds(spec: &Subshift, n_max: usize) -> Result<EntropyEstimate> {
    if n_max == 0 {
        return Err(Error::input("entropy_bounds needs n_max ≥ 1"));
    }
    let mut upper = f64::INFINITY;
    for n in 1..=n_max {
        let c = count_blocks(spec, n)?;
        upper = upper.min(ln_big(&c) / (n as f64).powi(spec.dim() as i32));
    }
    let (exact, provenance) = match &spec.spec().kind {
        SpecKind::SinglePoint { .. } => (Some(0.0), Some(EntropyProvenance::ClosedForm)),
        SpecKind::FullShift { sub_alphabet } => (
            Some((sub_alphabet.len() as f64).ln()),
            Some(EntropyProvenance::ClosedForm),
        ),
        SpecKind::Substitution { .. } => (Some(0.0), Some(EntropyProvenance::ZeroSubstitution)),
        SpecKind::Sft { .. } => match spec.follower_graph() {
            Some(g) => {
                let edges: Vec<(usize, usize, f64)> = g.edges().into_iter().map(|(a, b)| (a, b, 1.0)).collect();
                let b = spectral_radius(g.vertex_count(), &edges, 1e-15)?;
                (Some(b.mid().ln()), Some(EntropyProvenance::Perron1d))
            }
            None => (None, None),
        },
    };
    let lower = exact.unwrap_or(0.0).min(upper);
    let upper = exact.map_or(upper, |h| upper.max(h));
    Ok(EntropyEstimate {
        upper,
        lower,
        exact,
        provenance,
    })
}

/// κ_i = log(n_i)/2^{id} − h_ref for i = 0..=i_max, with n_i = count(2^i).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KappaSequence {
    pub kappa: Vec<f64>,
    pub h_ref: f64,
    pub dim: usize,
    pub conditional: bool,
}

pub fn kappa_sequence(spec: &Subshift, i_max: usize, h_ref: f64) -> Result<KappaSequence> {
    let table = ComplexityTable::build(spec, (0..=i_max).map(|i| 1usize << i))?;
    kappa_from_table(&table, i_max, h_ref)
}

pub fn kappa_from_table(table: &ComplexityTable, i_max: usize, h_ref: f64) -> Result<KappaSequence> {
    let mut kappa = Vec::with_capacity(i_max + 1);
    for i in 0..=i_max {
        let rate = table
            .rate(1usize << i)
            .ok_or_else(|| Error::input(format!("complexity table lacks n = 2^{i}")))?;
        let k = rate - h_ref;
        if k < -1e-12 {
            return Err(Error::InconsistentHRef { index: i, kappa: k });
        }
        kappa.push(k.max(0.0));
    }
    Ok(KappaSequence {
        kappa,
        h_ref,
        dim: table.dim,
        conditional: false,
    })
}

/// (Q, C) with count(n) ≤ C·n^Q for a constant-box substitution.
pub fn substitution_complexity_bound(spec: &Subshift) -> Result<(f64, f64)> {
    let s = spec
        .substitution()
        .ok_or_else(|| Error::input("substitution_complexity_bound needs a substitution spec"))?;
    let m = s.box_dims();
    let d = m.len();
    let prod: f64 = m.iter().map(|&x| x as f64).product();
    let min = *m.iter().min().unwrap() as f64;
    let q = prod.ln() / min.ln();
    let c = (spec.alphabet_size() as f64).powi(1 << d) * min.powf(q);
    Ok((q, c))
}

/// c = max_j j·(log n_j / j − h) over the tabulated one-dimensional counts.
pub fn perron_constant(table: &ComplexityTable, h: f64) -> f64 {
    table
        .counts
        .iter()
        .map(|(&j, (c, _))| ln_big(c) - j as f64 * h)
        .fold(f64::NEG_INFINITY, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::subshift::SubshiftSpec;

    fn sub(spec: SubshiftSpec) -> Subshift {
        Subshift::new(spec).unwrap()
    }

    #[test]
    fn golden_mean_counts() {
        let g = sub(SubshiftSpec::golden_mean());
        let c: Vec<BigUint> = (1..=4).map(|n| count_blocks(&g, n).unwrap()).collect();
        assert_eq!(c, [2u32, 3, 5, 8].map(BigUint::from));
    }

    #[test]
    fn hard_squares_two() {
        let h = sub(SubshiftSpec::hard_squares());
        assert_eq!(count_blocks(&h, 2).unwrap(), BigUint::from(7u32));
        assert_eq!(count_blocks_with_method(&h, 3).unwrap().1, CountMethod::RowTransfer2d);
    }

    #[test]
    fn ln_big_large() {
        let x = BigUint::from(3u32).pow(2000);
        assert!((ln_big(&x) - 2000.0 * 3f64.ln()).abs() < 1e-9);
    }

    #[test]
    fn golden_entropy() {
        let e = entropy_bounds(&sub(SubshiftSpec::golden_mean()), 8).unwrap();
        let h = ((1.0 + 5f64.sqrt()) / 2.0).ln();
        assert!((e.exact.unwrap() - h).abs() < 1e-12);
        assert!(e.lower <= e.exact.unwrap() && e.exact.unwrap() <= e.upper);
    }

    #[test]
    fn full_shift_entropy() {
        let e = entropy_bounds(&sub(SubshiftSpec::full(3, &[0, 1, 2], 1)), 3).unwrap();
        assert_eq!(e.exact, Some(3f64.ln()));
    }

    #[test]
    fn kappa_examples() {
        let sp = sub(SubshiftSpec::single_point(2, 0, 1));
        assert!(kappa_sequence(&sp, 5, 0.0).unwrap().kappa.iter().all(|&k| k == 0.0));
        let g = sub(SubshiftSpec::golden_mean());
        let h = ((1.0 + 5f64.sqrt()) / 2.0).ln();
        let k = kappa_sequence(&g, 6, h).unwrap();
        assert!((k.kappa[0] - 0.211935).abs() < 1e-6);
        assert!(matches!(
            kappa_sequence(&g, 3, 0.6),
            Err(Error::InconsistentHRef { .. })
        ));
    }

    #[test]
    fn substitution_bounds() {
        let tm = sub(SubshiftSpec::thue_morse());
        let (q, c) = substitution_complexity_bound(&tm).unwrap();
        assert_eq!(q, 1.0);
        assert_eq!(c, 8.0);
    }
}
