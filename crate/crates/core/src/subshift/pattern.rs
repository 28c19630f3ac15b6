use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Marker for a lattice point inside the bounding box that is not part of the shape.
pub const HOLE: u8 = u8::MAX;

/// Ordered list of distinct symbol tokens.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Alphabet {
    symbols: Vec<String>,
}

impl Alphabet {
    pub fn new<S: Into<String>>(symbols: impl IntoIterator<Item = S>) -> Result<Self> {
        let symbols: Vec<String> = symbols.into_iter().map(Into::into).collect();
        if symbols.is_empty() {
            return Err(Error::input("alphabet must contain at least one symbol"));
        }
        if symbols.len() >= HOLE as usize {
            return Err(Error::input(format!(
                "alphabet of size {} exceeds the supported maximum {}",
                symbols.len(),
                HOLE as usize - 1
            )));
        }
        for (i, s) in symbols.iter().enumerate() {
            if symbols[..i].contains(s) {
                return Err(Error::input(format!("duplicate symbol {s:?}")));
            }
        }
        Ok(Alphabet { symbols })
    }

    /// Alphabet "0", "1", ..., "k-1".
    pub fn numeric(k: usize) -> Self {
        Alphabet::new((0..k).map(|i| i.to_string())).expect("valid numeric alphabet")
    }

    pub fn size(&self) -> usize {
        self.symbols.len()
    }

    pub fn symbols(&self) -> &[String] {
        &self.symbols
    }

    pub fn index_of(&self, token: &str) -> Option<u8> {
        self.symbols.iter().position(|s| s == token).map(|i| i as u8)
    }

    pub fn symbol(&self, index: u8) -> &str {
        &self.symbols[index as usize]
    }

    pub fn parse_index(&self, token: &str) -> Result<u8> {
        self.index_of(token)
            .ok_or_else(|| Error::input(format!("symbol {token:?} not in alphabet")))
    }

    /// Parse a word of single-character symbols, e.g. "0101".
    pub fn parse_word(&self, word: &str) -> Result<Vec<u8>> {
        word.chars()
            .filter(|c| !c.is_whitespace())
            .map(|c| self.parse_index(&c.to_string()))
            .collect()
    }

    /// Render symbol indices, separating multi-character tokens by spaces.
    pub fn render(&self, cells: &[u8]) -> String {
        let single = self.symbols.iter().all(|s| s.chars().count() == 1);
        let toks = cells.iter().map(|&c| {
            if c == HOLE {
                "_"
            } else {
                self.symbol(c)
            }
        });
        if single {
            toks.collect()
        } else {
            toks.collect::<Vec<_>>().join(" ")
        }
    }
}

/// An axis-aligned box `origin + [0, dims)` in Z^d.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BoxRegion {
    pub origin: Vec<i64>,
    pub dims: Vec<usize>,
}

impl BoxRegion {
    pub fn new(origin: Vec<i64>, dims: Vec<usize>) -> Self {
        assert_eq!(origin.len(), dims.len(), "origin/dims dimension mismatch");
        BoxRegion { origin, dims }
    }

    pub fn dim(&self) -> usize {
        self.dims.len()
    }

    pub fn volume(&self) -> usize {
        self.dims.iter().product()
    }

    pub fn contains(&self, p: &[i64]) -> bool {
        p.iter()
            .zip(&self.origin)
            .zip(&self.dims)
            .all(|((&x, &o), &n)| x >= o && x < o + n as i64)
    }

    pub fn contains_box(&self, other: &BoxRegion) -> bool {
        other.dims.iter().all(|&n| n > 0)
            && other
                .origin
                .iter()
                .zip(&other.dims)
                .zip(self.origin.iter().zip(&self.dims))
                .all(|((&o2, &n2), (&o, &n))| o2 >= o && o2 + n2 as i64 <= o + n as i64)
    }

    /// Row-major index of `p`, axis 0 slowest.
    pub fn index_of(&self, p: &[i64]) -> Option<usize> {
        let mut idx = 0usize;
        for ((&x, &o), &n) in p.iter().zip(&self.origin).zip(&self.dims) {
            let r = x - o;
            if r < 0 || r >= n as i64 {
                return None;
            }
            idx = idx * n + r as usize;
        }
        Some(idx)
    }

    pub fn point(&self, mut index: usize) -> Vec<i64> {
        let d = self.dims.len();
        let mut p = vec![0i64; d];
        for axis in (0..d).rev() {
            let n = self.dims[axis];
            p[axis] = self.origin[axis] + (index % n) as i64;
            index /= n;
        }
        p
    }

    pub fn points(&self) -> impl Iterator<Item = Vec<i64>> + '_ {
        (0..self.volume()).map(move |i| self.point(i))
    }

    pub fn translate(&self, t: &[i64]) -> BoxRegion {
        BoxRegion {
            origin: self.origin.iter().zip(t).map(|(a, b)| a + b).collect(),
            dims: self.dims.clone(),
        }
    }

    /// Grow by `r` on every side of every axis.
    pub fn expand(&self, r: usize) -> BoxRegion {
        BoxRegion {
            origin: self.origin.iter().map(|o| o - r as i64).collect(),
            dims: self.dims.iter().map(|n| n + 2 * r).collect(),
        }
    }
}

/// The standard windows: `ErgBox(n) = [0,n-1]^d`, `StatBox(n) = [-n,n]^d`,
/// `OneSidedPrefix(n) = [0,n-1]` (d = 1).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum WindowKind {
    ErgBox(usize),
    StatBox(usize),
    OneSidedPrefix(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct BoxWindow {
    pub kind: WindowKind,
    pub dim: usize,
}

impl BoxWindow {
    pub fn erg(n: usize, dim: usize) -> Self {
        BoxWindow {
            kind: WindowKind::ErgBox(n),
            dim,
        }
    }

    pub fn stat(n: usize, dim: usize) -> Self {
        BoxWindow {
            kind: WindowKind::StatBox(n),
            dim,
        }
    }

    pub fn prefix(n: usize) -> Self {
        BoxWindow {
            kind: WindowKind::OneSidedPrefix(n),
            dim: 1,
        }
    }

    pub fn side(&self) -> usize {
        match self.kind {
            WindowKind::ErgBox(n) | WindowKind::OneSidedPrefix(n) => n,
            WindowKind::StatBox(n) => 2 * n + 1,
        }
    }

    pub fn volume(&self) -> usize {
        self.side().pow(self.dim as u32)
    }

    pub fn region(&self) -> BoxRegion {
        let origin = match self.kind {
            WindowKind::StatBox(n) => -(n as i64),
            _ => 0,
        };
        BoxRegion::new(vec![origin; self.dim], vec![self.side(); self.dim])
    }
}

/// A finite pattern: symbols on a shape inside a bounding box.
///
/// Cells are stored row-major (axis 0 slowest); points of the bounding box
/// outside the shape hold [`HOLE`].
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Pattern {
    dims: Vec<usize>,
    origin: Vec<i64>,
    cells: Vec<u8>,
}

impl Pattern {
    pub fn new(origin: Vec<i64>, dims: Vec<usize>, cells: Vec<u8>) -> Result<Self> {
        if origin.len() != dims.len() || dims.is_empty() {
            return Err(Error::input("pattern origin and dims must have equal positive length"));
        }
        if cells.len() != dims.iter().product::<usize>() {
            return Err(Error::input(format!(
                "pattern has {} cells but its box {:?} holds {}",
                cells.len(),
                dims,
                dims.iter().product::<usize>()
            )));
        }
        if cells.iter().all(|&c| c == HOLE) {
            return Err(Error::input("pattern shape must be non-empty"));
        }
        Ok(Pattern {
            dims,
            origin,
            cells,
        })
    }

    /// A one-dimensional word placed at offset 0.
    pub fn word(cells: &[u8]) -> Self {
        Pattern::new(vec![0], vec![cells.len()], cells.to_vec()).expect("non-empty word")
    }

    pub fn on_region(region: &BoxRegion, cells: Vec<u8>) -> Result<Self> {
        Pattern::new(region.origin.clone(), region.dims.clone(), cells)
    }

    pub fn filled(region: &BoxRegion, symbol: u8) -> Self {
        Pattern::on_region(region, vec![symbol; region.volume()]).expect("non-empty region")
    }

    /// Build from explicit (offset, symbol) pairs; the bounding box is the
    /// smallest box containing all offsets.
    pub fn from_cells(points: &[(Vec<i64>, u8)]) -> Result<Self> {
        let first = points
            .first()
            .ok_or_else(|| Error::input("pattern shape must be non-empty"))?;
        let d = first.0.len();
        let mut lo = first.0.clone();
        let mut hi = first.0.clone();
        for (p, _) in points {
            if p.len() != d {
                return Err(Error::input("mixed dimensions in pattern offsets"));
            }
            for a in 0..d {
                lo[a] = lo[a].min(p[a]);
                hi[a] = hi[a].max(p[a]);
            }
        }
        let dims: Vec<usize> = (0..d).map(|a| (hi[a] - lo[a] + 1) as usize).collect();
        let region = BoxRegion::new(lo, dims);
        let mut cells = vec![HOLE; region.volume()];
        for (p, s) in points {
            let i = region.index_of(p).expect("inside bounding box");
            if cells[i] != HOLE && cells[i] != *s {
                return Err(Error::input(format!("conflicting symbols at offset {p:?}")));
            }
            cells[i] = *s;
        }
        Pattern::on_region(&region, cells)
    }

    pub fn dim(&self) -> usize {
        self.dims.len()
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn origin(&self) -> &[i64] {
        &self.origin
    }

    pub fn cells(&self) -> &[u8] {
        &self.cells
    }

    pub fn region(&self) -> BoxRegion {
        BoxRegion::new(self.origin.clone(), self.dims.clone())
    }

    /// True when every point of the bounding box is defined.
    pub fn is_full(&self) -> bool {
        !self.cells.contains(&HOLE)
    }

    pub fn defined_count(&self) -> usize {
        self.cells.iter().filter(|&&c| c != HOLE).count()
    }

    pub fn get(&self, p: &[i64]) -> Option<u8> {
        let region = self.region();
        region
            .index_of(p)
            .map(|i| self.cells[i])
            .filter(|&c| c != HOLE)
    }

    pub fn set(&mut self, p: &[i64], symbol: u8) -> Result<()> {
        let i = self
            .region()
            .index_of(p)
            .ok_or_else(|| Error::input(format!("point {p:?} outside pattern box")))?;
        self.cells[i] = symbol;
        Ok(())
    }

    /// Defined (offset, symbol) pairs in row-major order.
    pub fn defined(&self) -> Vec<(Vec<i64>, u8)> {
        let region = self.region();
        self.cells
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != HOLE)
            .map(|(i, &c)| (region.point(i), c))
            .collect()
    }

    pub fn translate(&self, t: &[i64]) -> Pattern {
        Pattern {
            dims: self.dims.clone(),
            origin: self.origin.iter().zip(t).map(|(a, b)| a + b).collect(),
            cells: self.cells.clone(),
        }
    }

    /// Translate so the bounding box starts at the origin.
    pub fn normalized(&self) -> Pattern {
        Pattern {
            dims: self.dims.clone(),
            origin: vec![0; self.dims.len()],
            cells: self.cells.clone(),
        }
    }

    /// Restriction to `region`; points outside the pattern become holes.
    pub fn restrict(&self, region: &BoxRegion) -> Result<Pattern> {
        let own = self.region();
        let cells: Vec<u8> = region
            .points()
            .map(|p| own.index_of(&p).map_or(HOLE, |i| self.cells[i]))
            .collect();
        Pattern::on_region(region, cells)
    }

    /// Restriction to a region that must lie inside the bounding box.
    pub fn sub_box(&self, region: &BoxRegion) -> Result<Pattern> {
        if !self.region().contains_box(region) {
            return Err(Error::input(format!(
                "region {:?}+{:?} not inside pattern box {:?}+{:?}",
                region.origin, region.dims, self.origin, self.dims
            )));
        }
        self.restrict(region)
    }

    pub fn max_symbol(&self) -> Option<u8> {
        self.cells.iter().copied().filter(|&c| c != HOLE).max()
    }
}

impl fmt::Display for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let row = *self.dims.last().unwrap_or(&1);
        for (i, chunk) in self.cells.chunks(row).enumerate() {
            if i > 0 {
                write!(f, "/")?;
            }
            for &c in chunk {
                if c == HOLE {
                    write!(f, "_")?;
                } else {
                    write!(f, "{c}")?;
                }
            }
        }
        Ok(())
    }
}
