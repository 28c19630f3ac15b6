//! Finite descriptions of subshifts and their languages.

mod json;
mod language;
mod pattern;
mod sft;
mod substitution;

pub use json::{load_spec, parse_spec, spec_to_json};
pub use language::{enumerate_language, generate_configuration, MAX_ENUMERATION};
pub use pattern::{Alphabet, BoxRegion, BoxWindow, Pattern, WindowKind, HOLE};
pub use sft::{FollowerGraph, LocalRules, MAX_EXTENSION_NODES, MAX_FOLLOWER_STATES};
pub use substitution::{SubstitutionShift, MAX_IMAGE_CELLS};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Sidedness {
    Two,
    One,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SpecKind {
    FullShift { sub_alphabet: Vec<u8> },
    Sft { forbidden: Vec<Pattern> },
    Substitution { box_dims: Vec<usize>, rules: Vec<Pattern> },
    SinglePoint { symbol: u8 },
}

/// Raw description of a subshift X₀.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubshiftSpec {
    pub alphabet: Alphabet,
    pub dimension: usize,
    pub sided: Sidedness,
    pub kind: SpecKind,
}

impl SubshiftSpec {
    pub fn validate(&self) -> Result<()> {
        let k = self.alphabet.size();
        let d = self.dimension;
        if d == 0 {
            return Err(Error::input("dimension must be at least 1"));
        }
        if self.sided == Sidedness::One && d != 1 {
            return Err(Error::input("one-sided specs are only supported for d = 1"));
        }
        let check = |p: &Pattern, what: &str| -> Result<()> {
            if p.dim() != d {
                return Err(Error::input(format!("{what} has dimension {} but spec has {d}", p.dim())));
            }
            if p.max_symbol().is_some_and(|s| s as usize >= k) {
                return Err(Error::input(format!("{what} uses a symbol outside the alphabet")));
            }
            Ok(())
        };
        match &self.kind {
            SpecKind::FullShift { sub_alphabet } => {
                if sub_alphabet.is_empty() || sub_alphabet.iter().any(|&s| s as usize >= k) {
                    return Err(Error::input("full-shift sub-alphabet must be a non-empty subset"));
                }
            }
            SpecKind::Sft { forbidden } => {
                for p in forbidden {
                    check(p, "forbidden pattern")?;
                }
            }
            SpecKind::Substitution { box_dims, rules } => {
                if box_dims.len() != d {
                    return Err(Error::input("substitution box_dims length must equal dimension"));
                }
                if rules.len() != k {
                    return Err(Error::input("substitution rules must cover every symbol"));
                }
                for r in rules {
                    check(r, "substitution rule")?;
                    if r.dims() != box_dims.as_slice() || !r.is_full() {
                        return Err(Error::input("substitution rule shape differs from the declared box"));
                    }
                }
            }
            SpecKind::SinglePoint { symbol } => {
                if *symbol as usize >= k {
                    return Err(Error::input("single-point symbol not in alphabet"));
                }
            }
        }
        Ok(())
    }

    /// Full shift on the first `k` numeric symbols, restricted to `sub`.
    pub fn full(k: usize, sub: &[u8], dimension: usize) -> Self {
        SubshiftSpec {
            alphabet: Alphabet::numeric(k),
            dimension,
            sided: Sidedness::Two,
            kind: SpecKind::FullShift {
                sub_alphabet: sub.to_vec(),
            },
        }
    }

    /// The golden-mean shift: binary words without "11".
    pub fn golden_mean() -> Self {
        SubshiftSpec {
            alphabet: Alphabet::numeric(2),
            dimension: 1,
            sided: Sidedness::Two,
            kind: SpecKind::Sft {
                forbidden: vec![Pattern::word(&[1, 1])],
            },
        }
    }

    /// Hard squares: no two 1s horizontally or vertically adjacent.
    pub fn hard_squares() -> Self {
        SubshiftSpec {
            alphabet: Alphabet::numeric(2),
            dimension: 2,
            sided: Sidedness::Two,
            kind: SpecKind::Sft {
                forbidden: vec![
                    Pattern::new(vec![0, 0], vec![1, 2], vec![1, 1]).unwrap(),
                    Pattern::new(vec![0, 0], vec![2, 1], vec![1, 1]).unwrap(),
                ],
            },
        }
    }

    /// Thue–Morse: 0 → 01, 1 → 10.
    pub fn thue_morse() -> Self {
        SubshiftSpec {
            alphabet: Alphabet::numeric(2),
            dimension: 1,
            sided: Sidedness::Two,
            kind: SpecKind::Substitution {
                box_dims: vec![2],
                rules: vec![Pattern::word(&[0, 1]), Pattern::word(&[1, 0])],
            },
        }
    }

    /// The fixed configuration `symbol^∞` inside the full shift on `k` symbols.
    pub fn single_point(k: usize, symbol: u8, dimension: usize) -> Self {
        SubshiftSpec {
            alphabet: Alphabet::numeric(k),
            dimension,
            sided: Sidedness::Two,
            kind: SpecKind::SinglePoint { symbol },
        }
    }

    pub fn one_sided(mut self) -> Self {
        self.sided = Sidedness::One;
        self
    }
}

#[derive(Clone, Debug)]
enum Oracle {
    Full(Vec<bool>),
    Single(u8),
    Graph(FollowerGraph),
    Local(LocalRules),
    Subst(SubstitutionShift),
}

/// A validated spec together with its compiled admissibility oracle.
///
/// Immutable after construction apart from internal memo tables, and safe
/// to share across threads.
#[derive(Clone, Debug)]
pub struct Subshift {
    spec: SubshiftSpec,
    oracle: Oracle,
    extension_radius: usize,
}

impl Subshift {
    pub fn new(spec: SubshiftSpec) -> Result<Self> {
        spec.validate()?;
        let k = spec.alphabet.size();
        let one = spec.sided == Sidedness::One;
        let oracle = match &spec.kind {
            SpecKind::FullShift { sub_alphabet } => {
                let mut allowed = vec![false; k];
                for &s in sub_alphabet {
                    allowed[s as usize] = true;
                }
                Oracle::Full(allowed)
            }
            SpecKind::SinglePoint { symbol } => Oracle::Single(*symbol),
            SpecKind::Sft { forbidden } if spec.dimension == 1 => {
                let g = FollowerGraph::build(k, forbidden, one)?;
                if g.is_empty() {
                    return Err(Error::EmptyWindow("the SFT has no infinite configuration".into()));
                }
                Oracle::Graph(g)
            }
            SpecKind::Sft { forbidden } => Oracle::Local(LocalRules::new(k, forbidden)),
            SpecKind::Substitution { box_dims, rules } => Oracle::Subst(SubstitutionShift::new(
                k,
                box_dims.clone(),
                rules.iter().map(|r| r.cells().to_vec()).collect(),
            )?),
        };
        let extension_radius = match &oracle {
            Oracle::Local(r) => r.diameter(),
            _ => 0,
        };
        Ok(Subshift {
            spec,
            oracle,
            extension_radius,
        })
    }

    /// Override the extension radius used for SFTs with d ≥ 2.
    pub fn with_extension_radius(mut self, r: usize) -> Self {
        self.extension_radius = r;
        self
    }

    pub fn extension_radius(&self) -> usize {
        self.extension_radius
    }

    pub fn spec(&self) -> &SubshiftSpec {
        &self.spec
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.spec.alphabet
    }

    pub fn alphabet_size(&self) -> usize {
        self.spec.alphabet.size()
    }

    pub fn dim(&self) -> usize {
        self.spec.dimension
    }

    pub fn is_one_sided(&self) -> bool {
        self.spec.sided == Sidedness::One
    }

    pub fn follower_graph(&self) -> Option<&FollowerGraph> {
        match &self.oracle {
            Oracle::Graph(g) => Some(g),
            _ => None,
        }
    }

    pub fn substitution(&self) -> Option<&SubstitutionShift> {
        match &self.oracle {
            Oracle::Subst(s) => Some(s),
            _ => None,
        }
    }

    /// Forbidden local patterns whose absence characterizes admissibility of
    /// hole-free windows in the local sense: SFT forbidden list, and
    /// single-cell exclusions for full shifts and single points.
    pub fn local_rules(&self) -> Option<LocalRules> {
        let k = self.alphabet_size();
        let d = self.dim();
        let singles = |bad: Vec<u8>| {
            let pats: Vec<Pattern> = bad
                .into_iter()
                .map(|s| Pattern::new(vec![0; d], vec![1; d], vec![s]).unwrap())
                .collect();
            LocalRules::new(k, &pats)
        };
        match &self.spec.kind {
            SpecKind::Sft { forbidden } => Some(LocalRules::new(k, forbidden)),
            SpecKind::FullShift { sub_alphabet } => {
                Some(singles((0..k as u8).filter(|s| !sub_alphabet.contains(s)).collect()))
            }
            SpecKind::SinglePoint { symbol } => {
                Some(singles((0..k as u8).filter(|s| s != symbol).collect()))
            }
            SpecKind::Substitution { .. } => None,
        }
    }

    fn check_symbols(&self, p: &Pattern) -> Result<()> {
        if p.dim() != self.dim() {
            return Err(Error::input(format!(
                "pattern dimension {} differs from spec dimension {}",
                p.dim(),
                self.dim()
            )));
        }
        if p.max_symbol().is_some_and(|s| s as usize >= self.alphabet_size()) {
            return Err(Error::input("pattern symbol outside alphabet"));
        }
        Ok(())
    }

    /// Membership in the language ℒ(X₀). Exact for d = 1 and for
    /// substitutions; bounded-radius extension search for SFTs with d ≥ 2.
    pub fn admissible(&self, p: &Pattern) -> Result<bool> {
        self.check_symbols(p)?;
        let defined = || p.cells().iter().copied().filter(|&c| c != HOLE);
        Ok(match &self.oracle {
            Oracle::Full(allowed) => defined().all(|c| allowed[c as usize]),
            Oracle::Single(s) => defined().all(|c| c == *s),
            Oracle::Graph(g) => g.admits(p.cells()),
            Oracle::Local(r) => r.extendable(p, self.extension_radius)?,
            Oracle::Subst(s) => s.admits(p)?,
        })
    }

    /// Fast path for 1D words without holes.
    pub fn admissible_word(&self, w: &[u8]) -> Result<bool> {
        match &self.oracle {
            Oracle::Full(allowed) => Ok(w.iter().all(|&c| allowed[c as usize])),
            Oracle::Single(s) => Ok(w.iter().all(|c| c == s)),
            Oracle::Graph(g) => Ok(g.admits(w)),
            _ => self.admissible(&Pattern::word(w)),
        }
    }
}

/// Free-function form of [`Subshift::admissible`].
pub fn pattern_admissible(spec: &Subshift, p: &Pattern) -> Result<bool> {
    spec.admissible(p)
}

/// k-fold substitution image of a symbol.
pub fn substitution_expand(spec: &Subshift, symbol: u8, k: u32) -> Result<Pattern> {
    match spec.substitution() {
        Some(s) => {
            if symbol as usize >= spec.alphabet_size() {
                return Err(Error::input("symbol outside alphabet"));
            }
            s.expand(symbol, k)
        }
        None => Err(Error::input("substitution_expand needs a substitution spec")),
    }
}
