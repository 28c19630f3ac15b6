use std::collections::{HashMap, HashSet};
use std::sync::{Arc, RwLock};

use super::pattern::{BoxRegion, Pattern, HOLE};
use crate::error::{Error, Result};

/// Cap on the number of cells held by all cached k-fold block images.
pub const MAX_IMAGE_CELLS: f64 = (1u64 << 26) as f64;

/// Compiled constant-box substitution with lazily cached block images and
/// factor sets.
#[derive(Debug)]
pub struct SubstitutionShift {
    alphabet: usize,
    m: Vec<usize>,
    rules: Vec<Vec<u8>>,
    blocks: Vec<Vec<u8>>,
    images: RwLock<HashMap<u32, Arc<Vec<Vec<u8>>>>>,
    factors: RwLock<HashMap<Vec<usize>, Arc<HashSet<Vec<u8>>>>>,
}

impl Clone for SubstitutionShift {
    fn clone(&self) -> Self {
        SubstitutionShift {
            alphabet: self.alphabet,
            m: self.m.clone(),
            rules: self.rules.clone(),
            blocks: self.blocks.clone(),
            images: RwLock::new(HashMap::new()),
            factors: RwLock::new(HashMap::new()),
        }
    }
}

fn zero_region(dims: &[usize]) -> BoxRegion {
    BoxRegion::new(vec![0; dims.len()], dims.to_vec())
}

/// Sub-box of `cells` (on a box at the origin with `dims`) at `offset`.
pub(crate) fn window(cells: &[u8], dims: &[usize], offset: &[usize], wdims: &[usize]) -> Vec<u8> {
    let wr = zero_region(wdims);
    let src = zero_region(dims);
    let mut q = vec![0i64; dims.len()];
    wr.points()
        .map(|p| {
            for a in 0..dims.len() {
                q[a] = p[a] + offset[a] as i64;
            }
            cells[src.index_of(&q).expect("window inside box")]
        })
        .collect()
}

/// All window offsets of size `wdims` inside `dims`.
pub(crate) fn offsets(dims: &[usize], wdims: &[usize]) -> Vec<Vec<usize>> {
    if dims.iter().zip(wdims).any(|(n, w)| w > n) {
        return Vec::new();
    }
    let ranges: Vec<usize> = dims.iter().zip(wdims).map(|(n, w)| n - w + 1).collect();
    let r = zero_region(&ranges);
    r.points()
        .map(|p| p.into_iter().map(|x| x as usize).collect())
        .collect()
}

impl SubstitutionShift {
    pub fn new(alphabet: usize, m: Vec<usize>, rules: Vec<Vec<u8>>) -> Result<Self> {
        let d = m.len();
        if m.iter().any(|&x| x < 2) {
            return Err(Error::input("substitution box sides must be at least 2"));
        }
        let vol: usize = m.iter().product();
        if rules.len() != alphabet || rules.iter().any(|r| r.len() != vol) {
            return Err(Error::input("substitution needs one full rule per symbol on the declared box"));
        }
        if rules.iter().flatten().any(|&c| c == HOLE || c as usize >= alphabet) {
            return Err(Error::input("substitution rule uses a symbol outside the alphabet"));
        }
        if !Self::primitive(alphabet, &rules) {
            return Err(Error::input("substitution incidence matrix is not primitive"));
        }
        let mut shift = SubstitutionShift {
            alphabet,
            m,
            rules,
            blocks: Vec::new(),
            images: RwLock::new(HashMap::new()),
            factors: RwLock::new(HashMap::new()),
        };
        let two = vec![2usize; d];
        let mut seen: HashSet<Vec<u8>> = HashSet::new();
        let mut work: Vec<Vec<u8>> = Vec::new();
        for r in &shift.rules {
            for off in offsets(&shift.m, &two) {
                let b = window(r, &shift.m, &off, &two);
                if seen.insert(b.clone()) {
                    work.push(b);
                }
            }
        }
        while let Some(b) = work.pop() {
            let (img, idims) = shift.apply_once(&b, &two);
            for off in offsets(&idims, &two) {
                let w = window(&img, &idims, &off, &two);
                if seen.insert(w.clone()) {
                    work.push(w);
                }
            }
        }
        let mut blocks: Vec<Vec<u8>> = seen.into_iter().collect();
        blocks.sort();
        shift.blocks = blocks;
        Ok(shift)
    }

    /// Incidence-matrix primitivity via boolean powers (Wielandt bound).
    pub fn primitive(alphabet: usize, rules: &[Vec<u8>]) -> bool {
        let n = alphabet;
        let mut base = vec![vec![false; n]; n];
        for (x, r) in rules.iter().enumerate() {
            for &y in r {
                base[x][y as usize] = true;
            }
        }
        let mut power = base.clone();
        let bound = (n - 1) * (n - 1) + 1;
        for _ in 0..bound {
            if power.iter().all(|row| row.iter().all(|&b| b)) {
                return true;
            }
            let mut next = vec![vec![false; n]; n];
            for i in 0..n {
                for k in 0..n {
                    if power[i][k] {
                        for j in 0..n {
                            next[i][j] |= base[k][j];
                        }
                    }
                }
            }
            power = next;
        }
        power.iter().all(|row| row.iter().all(|&b| b))
    }

    pub fn box_dims(&self) -> &[usize] {
        &self.m
    }

    pub fn legal_blocks(&self) -> &[Vec<u8>] {
        &self.blocks
    }

    /// One application of the rules to a box pattern.
    pub fn apply_once(&self, cells: &[u8], dims: &[usize]) -> (Vec<u8>, Vec<usize>) {
        let d = dims.len();
        let ndims: Vec<usize> = dims.iter().zip(&self.m).map(|(e, m)| e * m).collect();
        let src = zero_region(dims);
        let inner = zero_region(&self.m);
        let dst = zero_region(&ndims);
        let mut c = vec![0i64; d];
        let mut r = vec![0i64; d];
        let out = dst
            .points()
            .map(|q| {
                for a in 0..d {
                    c[a] = q[a] / self.m[a] as i64;
                    r[a] = q[a] % self.m[a] as i64;
                }
                let s = cells[src.index_of(&c).unwrap()];
                if s == HOLE {
                    HOLE
                } else {
                    self.rules[s as usize][inner.index_of(&r).unwrap()]
                }
            })
            .collect();
        (out, ndims)
    }

    pub fn expand_cells(&self, cells: &[u8], dims: &[usize], k: u32) -> Result<(Vec<u8>, Vec<usize>)> {
        let vol = dims.iter().product::<usize>() as f64
            * self.m.iter().map(|&m| (m as f64).powi(k as i32)).product::<f64>();
        if vol > MAX_IMAGE_CELLS {
            return Err(Error::guard("substitution image cells", vol, MAX_IMAGE_CELLS));
        }
        let mut cur = (cells.to_vec(), dims.to_vec());
        for _ in 0..k {
            cur = self.apply_once(&cur.0, &cur.1);
        }
        Ok(cur)
    }

    /// k-fold image of a single symbol.
    pub fn expand(&self, symbol: u8, k: u32) -> Result<Pattern> {
        let d = self.m.len();
        let (cells, dims) = self.expand_cells(&[symbol], &vec![1; d], k)?;
        Pattern::new(vec![0; d], dims, cells)
    }

    /// Smallest k with m_i^k ≥ e_i on every axis.
    pub fn level_for(&self, e: &[usize]) -> u32 {
        let mut k = 0u32;
        while e
            .iter()
            .zip(&self.m)
            .any(|(&e, &m)| (m as u128).pow(k) < e as u128)
        {
            k += 1;
        }
        k
    }

    /// k-fold images of every legal 2^d block.
    pub fn block_images(&self, k: u32) -> Result<Arc<Vec<Vec<u8>>>> {
        if let Some(v) = self.images.read().unwrap().get(&k) {
            return Ok(v.clone());
        }
        let d = self.m.len();
        let two = vec![2usize; d];
        let per = 2f64.powi(d as i32)
            * self.m.iter().map(|&m| (m as f64).powi(k as i32)).product::<f64>();
        let total = per * self.blocks.len() as f64;
        if total > MAX_IMAGE_CELLS {
            return Err(Error::guard("substitution image cells", total, MAX_IMAGE_CELLS));
        }
        let imgs: Vec<Vec<u8>> = self
            .blocks
            .iter()
            .map(|b| self.expand_cells(b, &two, k).map(|x| x.0))
            .collect::<Result<_>>()?;
        let imgs = Arc::new(imgs);
        self.images.write().unwrap().insert(k, imgs.clone());
        Ok(imgs)
    }

    pub fn image_dims(&self, k: u32) -> Vec<usize> {
        self.m.iter().map(|&m| 2 * m.pow(k)).collect()
    }

    /// All factors on a box of the given dimensions.
    pub fn factor_set(&self, e: &[usize]) -> Result<Arc<HashSet<Vec<u8>>>> {
        if let Some(v) = self.factors.read().unwrap().get(e) {
            return Ok(v.clone());
        }
        let k = self.level_for(e);
        let imgs = self.block_images(k)?;
        let idims = self.image_dims(k);
        let mut set = HashSet::new();
        for img in imgs.iter() {
            for off in offsets(&idims, e) {
                set.insert(window(img, &idims, &off, e));
            }
        }
        let set = Arc::new(set);
        self.factors.write().unwrap().insert(e.to_vec(), set.clone());
        Ok(set)
    }

    pub fn admits(&self, p: &Pattern) -> Result<bool> {
        let e = p.dims();
        if p.is_full() {
            return Ok(self.factor_set(e)?.contains(p.cells()));
        }
        let set = self.factor_set(e)?;
        Ok(set.iter().any(|w| {
            w.iter()
                .zip(p.cells())
                .all(|(&s, &c)| c == HOLE || c == s)
        }))
    }
}
