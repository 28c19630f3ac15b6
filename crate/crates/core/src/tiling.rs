//! Dyadic tilings of finite windows and the one-sided pin decomposition.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::par;
use crate::subshift::{BoxRegion, Pattern, Subshift};

/// A point of the dyadic odometer truncated at depth N: level-n grid lines sit
/// at o_i mod 2^n on axis i.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OdometerOffset {
    pub offsets: Vec<u64>,
    pub depth: u32,
}

impl OdometerOffset {
    pub fn new(offsets: Vec<u64>, depth: u32) -> Result<Self> {
        if depth >= 62 {
            return Err(Error::input("odometer depth must be below 62"));
        }
        if offsets.iter().any(|&o| o >= 1u64 << depth) {
            return Err(Error::input("odometer offsets must lie in [0, 2^depth)"));
        }
        Ok(OdometerOffset { offsets, depth })
    }

    pub fn zero(dim: usize, depth: u32) -> Self {
        OdometerOffset {
            offsets: vec![0; dim],
            depth,
        }
    }

    /// The level-n tile containing `j`.
    pub fn tile(&self, j: &[i64], n: u32) -> BoxRegion {
        let side = 1i64 << n;
        let origin = j
            .iter()
            .zip(&self.offsets)
            .map(|(&p, &o)| {
                let o = (o as i64) & (side - 1);
                o + (p - o).div_euclid(side) * side
            })
            .collect();
        BoxRegion::new(origin, vec![side as usize; j.len()])
    }

    /// Offset seen from a translated configuration: shifting x by t moves the
    /// grid by t as well.
    pub fn shifted(&self, t: &[i64]) -> Self {
        let m = 1i64 << self.depth;
        OdometerOffset {
            offsets: self
                .offsets
                .iter()
                .zip(t)
                .map(|(&o, &s)| (o as i64 + s).rem_euclid(m) as u64)
                .collect(),
            depth: self.depth,
        }
    }
}

/// n^{(x,y)}(j): the largest n with x restricted to the level-n tile through j
/// admissible, 0 when even that cell is inadmissible.
pub fn tile_level(spec: &Subshift, x: &Pattern, offset: &OdometerOffset, j: &[i64]) -> Result<u32> {
    check_inputs(spec, x, offset)?;
    let own = x.region();
    if !own.contains(j) {
        return Err(Error::input("lattice point outside the pattern"));
    }
    for n in 0..=offset.depth + 1 {
        if n > offset.depth {
            return Err(Error::Undetermined { reached: offset.depth });
        }
        let t = offset.tile(j, n);
        if !own.contains_box(&t) {
            return Err(Error::Undetermined {
                reached: n.saturating_sub(1),
            });
        }
        if !spec.admissible(&x.sub_box(&t)?)? {
            return Ok(n.saturating_sub(1));
        }
    }
    unreachable!()
}

fn check_inputs(spec: &Subshift, x: &Pattern, offset: &OdometerOffset) -> Result<()> {
    if x.dim() != spec.dim() || offset.offsets.len() != spec.dim() {
        return Err(Error::input("dimension mismatch between spec, pattern and offset"));
    }
    if !x.is_full() {
        return Err(Error::input("tiling needs a pattern without holes"));
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Tile {
    pub origin: Vec<i64>,
    pub level: u32,
    pub admissible: bool,
}

impl Tile {
    pub fn region(&self) -> BoxRegion {
        BoxRegion::new(self.origin.clone(), vec![1usize << self.level; self.origin.len()])
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DyadicTiling {
    pub window: BoxRegion,
    pub tiles: Vec<Tile>,
    /// Points whose tile is undetermined or not contained in the window.
    pub margin: Vec<Vec<i64>>,
}

impl DyadicTiling {
    pub fn covered_volume(&self) -> usize {
        self.tiles.iter().map(|t| t.region().volume()).sum()
    }
}

pub fn tile_decomposition(spec: &Subshift, x: &Pattern, offset: &OdometerOffset, window: &BoxRegion) -> Result<DyadicTiling> {
    check_inputs(spec, x, offset)?;
    if !x.region().contains_box(window) {
        return Err(Error::input("window must lie inside the pattern"));
    }
    let levels = par::map_range(window.volume(), |i| {
        let p = window.point(i);
        match tile_level(spec, x, offset, &p) {
            Ok(n) => Ok(Some(n)),
            Err(Error::Undetermined { .. }) => Ok(None),
            Err(e) => Err(e),
        }
    });
    let mut tiles = BTreeSet::new();
    let mut margin = Vec::new();
    for (i, level) in levels.into_iter().enumerate() {
        let p = window.point(i);
        match level? {
            Some(n) => {
                let t = offset.tile(&p, n);
                if window.contains_box(&t) {
                    tiles.insert((t.origin, n));
                } else {
                    margin.push(p);
                }
            }
            None => margin.push(p),
        }
    }
    let tiles = tiles
        .into_iter()
        .map(|(origin, level)| {
            let region = BoxRegion::new(origin.clone(), vec![1usize << level; origin.len()]);
            let admissible = spec.admissible(&x.sub_box(&region)?)?;
            Ok(Tile {
                origin,
                level,
                admissible,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(DyadicTiling {
        window: window.clone(),
        tiles,
        margin,
    })
}

/// Pins split a one-sided word into maximal admissible dyadic blocks.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PinSequence {
    pub pins: Vec<usize>,
    /// Superpin flag per pin; only interior pins (with a gap on both sides)
    /// can be superpins.
    pub superpin: Vec<bool>,
    /// First position from which the decomposition is undetermined.
    pub margin_start: Option<usize>,
}

impl PinSequence {
    pub fn gaps(&self) -> Vec<usize> {
        self.pins.windows(2).map(|w| w[1] - w[0]).collect()
    }

    pub fn superpin_count(&self) -> usize {
        self.superpin.iter().filter(|&&s| s).count()
    }
}

/// Greedy pin placement from a pin at 0: the next pin sits 2^k further on,
/// with k maximal such that the block of length 2^k is admissible (or k = 0).
pub fn pin_decomposition(spec: &Subshift, x: &[u8]) -> Result<PinSequence> {
    if spec.dim() != 1 || !spec.is_one_sided() {
        return Err(Error::input("pin decomposition needs a one-sided d = 1 spec"));
    }
    let mut pins = vec![0usize];
    let mut margin_start = None;
    let mut i = 0usize;
    while i < x.len() {
        let mut k = 0u32;
        loop {
            let next = 1usize << (k + 1);
            if i + next > x.len() {
                margin_start = Some(i);
                break;
            }
            if !spec.admissible_word(&x[i..i + next])? {
                break;
            }
            k += 1;
        }
        if margin_start.is_some() {
            break;
        }
        i += 1usize << k;
        pins.push(i);
    }
    if margin_start.is_none() {
        margin_start = Some(x.len());
    }
    if margin_start == Some(x.len()) {
        margin_start = None;
    }
    let mut superpin = vec![false; pins.len()];
    for p in 1..pins.len().saturating_sub(1) {
        superpin[p] = pins[p + 1] - pins[p] <= pins[p] - pins[p - 1];
    }
    Ok(PinSequence {
        pins,
        superpin,
        margin_start,
    })
}
