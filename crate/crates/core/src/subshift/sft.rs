use num_bigint::BigUint;
use num_traits::{One, Zero};

use super::pattern::{BoxRegion, Pattern, HOLE};
use crate::error::{Error, Result};

pub(crate) const NONE: u32 = u32::MAX;

/// Largest number of candidate higher-block states built for a 1D SFT.
pub const MAX_FOLLOWER_STATES: usize = 1 << 22;

/// A forbidden 1D pattern as a normalized word with holes.
fn normalized_words(forbidden: &[Pattern]) -> Vec<Vec<u8>> {
    forbidden.iter().map(|p| p.cells().to_vec()).collect()
}

fn contains_forbidden(word: &[u8], forbidden: &[Vec<u8>]) -> bool {
    forbidden.iter().any(|f| {
        f.len() <= word.len()
            && (0..=word.len() - f.len()).any(|start| {
                f.iter()
                    .zip(&word[start..])
                    .all(|(&a, &b)| a == HOLE || a == b)
            })
    })
}

fn decode(mut code: usize, a: usize, len: usize) -> Vec<u8> {
    let mut w = vec![0u8; len];
    for i in (0..len).rev() {
        w[i] = (code % a) as u8;
        code /= a;
    }
    w
}

/// Higher-block presentation of a one-dimensional SFT restricted to its
/// essential part: every vertex lies on a bi-infinite path (two-sided) or on
/// an infinite forward path (one-sided).
#[derive(Clone, Debug)]
pub struct FollowerGraph {
    alphabet: usize,
    len: usize,
    words: Vec<Vec<u8>>,
    next: Vec<u32>,
}

impl FollowerGraph {
    pub fn build(alphabet: usize, forbidden: &[Pattern], one_sided: bool) -> Result<Self> {
        let forb = normalized_words(forbidden);
        let span = forb.iter().map(Vec::len).max().unwrap_or(1);
        let len = span.saturating_sub(1).max(1);
        let total = (alphabet as f64).powi(len as i32);
        if total > MAX_FOLLOWER_STATES as f64 {
            return Err(Error::guard("follower-graph states", total, MAX_FOLLOWER_STATES as f64));
        }
        let total = total as usize;
        let valid: Vec<bool> = (0..total)
            .map(|c| !contains_forbidden(&decode(c, alphabet, len), &forb))
            .collect();
        let mut next = vec![NONE; total * alphabet];
        let mut outdeg = vec![0u32; total];
        let mut indeg = vec![0u32; total];
        let modulus = total / alphabet;
        for c in 0..total {
            if !valid[c] {
                continue;
            }
            let w = decode(c, alphabet, len);
            for s in 0..alphabet {
                let t = (c % modulus) * alphabet + s;
                if !valid[t] {
                    continue;
                }
                let mut ext = w.clone();
                ext.push(s as u8);
                if contains_forbidden(&ext, &forb) {
                    continue;
                }
                next[c * alphabet + s] = t as u32;
                outdeg[c] += 1;
                indeg[t] += 1;
            }
        }
        let mut alive = valid;
        let mut queue: Vec<usize> = (0..total)
            .filter(|&c| alive[c] && (outdeg[c] == 0 || (!one_sided && indeg[c] == 0)))
            .collect();
        let mut preds: Vec<Vec<u32>> = vec![Vec::new(); total];
        for c in 0..total {
            for s in 0..alphabet {
                let t = next[c * alphabet + s];
                if t != NONE {
                    preds[t as usize].push(c as u32);
                }
            }
        }
        while let Some(c) = queue.pop() {
            if !alive[c] {
                continue;
            }
            alive[c] = false;
            for s in 0..alphabet {
                let t = next[c * alphabet + s];
                if t != NONE && alive[t as usize] {
                    indeg[t as usize] -= 1;
                    if !one_sided && indeg[t as usize] == 0 {
                        queue.push(t as usize);
                    }
                }
            }
            for &p in &preds[c] {
                let p = p as usize;
                if alive[p] {
                    outdeg[p] -= 1;
                    if outdeg[p] == 0 {
                        queue.push(p);
                    }
                }
            }
        }
        let mut index = vec![NONE; total];
        let mut words = Vec::new();
        for c in 0..total {
            if alive[c] {
                index[c] = words.len() as u32;
                words.push(decode(c, alphabet, len));
            }
        }
        let mut compact = vec![NONE; words.len() * alphabet];
        for c in 0..total {
            if !alive[c] {
                continue;
            }
            for s in 0..alphabet {
                let t = next[c * alphabet + s];
                if t != NONE && alive[t as usize] {
                    compact[index[c] as usize * alphabet + s] = index[t as usize];
                }
            }
        }
        Ok(FollowerGraph {
            alphabet,
            len,
            words,
            next: compact,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.words.len()
    }

    /// Length of the words labelling vertices.
    pub fn word_len(&self) -> usize {
        self.len
    }

    pub fn vertex_word(&self, v: usize) -> &[u8] {
        &self.words[v]
    }

    pub fn successor(&self, v: usize, s: u8) -> Option<usize> {
        let t = self.next[v * self.alphabet + s as usize];
        (t != NONE).then_some(t as usize)
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    /// Decide whether a word (holes allowed) occurs in the subshift.
    pub fn admits(&self, cells: &[u8]) -> bool {
        let n = cells.len();
        let head = &cells[..n.min(self.len)];
        let matches = |w: &[u8]| head.iter().zip(w).all(|(&c, &s)| c == HOLE || c == s);
        if n <= self.len {
            return self.words.iter().any(|w| matches(w));
        }
        let nv = self.words.len();
        let mut mark = vec![false; nv];
        let mut cur: Vec<usize> = (0..nv).filter(|&v| matches(&self.words[v])).collect();
        let mut nxt: Vec<usize> = Vec::new();
        for &c in &cells[self.len..] {
            nxt.clear();
            for &v in &cur {
                let mut visit = |s: usize| {
                    let t = self.next[v * self.alphabet + s];
                    if t != NONE && !mark[t as usize] {
                        mark[t as usize] = true;
                        nxt.push(t as usize);
                    }
                };
                if c == HOLE {
                    (0..self.alphabet).for_each(&mut visit);
                } else {
                    visit(c as usize);
                }
            }
            for &t in &nxt {
                mark[t] = false;
            }
            if nxt.is_empty() {
                return false;
            }
            std::mem::swap(&mut cur, &mut nxt);
        }
        true
    }

    /// Exact number of words of length `n` in the language.
    pub fn count(&self, n: usize) -> BigUint {
        if n == 0 {
            return BigUint::one();
        }
        if n <= self.len {
            let mut prefixes: Vec<&[u8]> = self.words.iter().map(|w| &w[..n]).collect();
            prefixes.sort();
            prefixes.dedup();
            return BigUint::from(prefixes.len());
        }
        let nv = self.words.len();
        let mut cur = vec![BigUint::one(); nv];
        for _ in 0..(n - self.len) {
            let mut nxt = vec![BigUint::zero(); nv];
            for (v, value) in cur.iter().enumerate() {
                if value.is_zero() {
                    continue;
                }
                for s in 0..self.alphabet {
                    let t = self.next[v * self.alphabet + s];
                    if t != NONE {
                        nxt[t as usize] += value;
                    }
                }
            }
            cur = nxt;
        }
        cur.into_iter().sum()
    }

    /// Edge list `(from, to)` of the essential graph.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for v in 0..self.words.len() {
            for s in 0..self.alphabet {
                let t = self.next[v * self.alphabet + s];
                if t != NONE {
                    out.push((v, t as usize));
                }
            }
        }
        out
    }
}

/// Forbidden-pattern data for SFTs in any dimension, with a bounded-radius
/// extension search standing in for the (undecidable) extension problem.
#[derive(Clone, Debug)]
pub struct LocalRules {
    pub(crate) alphabet: usize,
    pub(crate) rules: Vec<Vec<(Vec<i64>, u8)>>,
}

/// Cap on search nodes during one extension search.
pub const MAX_EXTENSION_NODES: usize = 4_000_000;

impl LocalRules {
    pub fn new(alphabet: usize, forbidden: &[Pattern]) -> Self {
        let rules = forbidden
            .iter()
            .map(|p| {
                let o = p.origin().to_vec();
                p.defined()
                    .into_iter()
                    .map(|(q, s)| (q.iter().zip(&o).map(|(a, b)| a - b).collect(), s))
                    .collect()
            })
            .collect();
        LocalRules { alphabet, rules }
    }

    pub fn alphabet(&self) -> usize {
        self.alphabet
    }

    /// Each rule as (offset from the rule's corner, symbol) pairs.
    pub fn rules(&self) -> &[Vec<(Vec<i64>, u8)>] {
        &self.rules
    }

    /// Largest bounding-box side over all forbidden patterns.
    pub fn diameter(&self) -> usize {
        self.rules
            .iter()
            .map(|r| {
                let d = r[0].0.len();
                (0..d)
                    .map(|a| {
                        let lo = r.iter().map(|(o, _)| o[a]).min().unwrap();
                        let hi = r.iter().map(|(o, _)| o[a]).max().unwrap();
                        (hi - lo + 1) as usize
                    })
                    .max()
                    .unwrap_or(1)
            })
            .max()
            .unwrap_or(1)
    }

    /// True if some forbidden pattern occurs entirely within the defined cells.
    pub fn has_occurrence(&self, grid: &BoxRegion, cells: &[u8]) -> bool {
        let vol = grid.volume();
        for anchor_idx in 0..vol {
            let anchor = grid.point(anchor_idx);
            for rule in &self.rules {
                if self.placed(grid, cells, &anchor, rule) {
                    return true;
                }
            }
        }
        false
    }

    fn placed(&self, grid: &BoxRegion, cells: &[u8], anchor: &[i64], rule: &[(Vec<i64>, u8)]) -> bool {
        let mut q = anchor.to_vec();
        rule.iter().all(|(o, s)| {
            for a in 0..q.len() {
                q[a] = anchor[a] + o[a];
            }
            match grid.index_of(&q) {
                Some(i) => cells[i] == *s,
                None => false,
            }
        })
    }

    /// True if assigning `cells[idx]` completed a forbidden occurrence.
    pub(crate) fn conflict_at(&self, grid: &BoxRegion, cells: &[u8], idx: usize) -> bool {
        let p = grid.point(idx);
        let sym = cells[idx];
        let mut anchor = p.clone();
        for rule in &self.rules {
            for (o, s) in rule {
                if *s != sym {
                    continue;
                }
                for a in 0..p.len() {
                    anchor[a] = p[a] - o[a];
                }
                if self.placed(grid, cells, &anchor, rule) {
                    return true;
                }
            }
        }
        false
    }

    /// Fill every hole of `cells` on `grid` without creating a forbidden
    /// occurrence. `order` gives the symbol preference per hole position.
    pub(crate) fn fill<F>(&self, grid: &BoxRegion, cells: &mut [u8], mut order: F) -> Result<bool>
    where
        F: FnMut(usize) -> Vec<u8>,
    {
        if self.has_occurrence(grid, cells) {
            return Ok(false);
        }
        let holes: Vec<usize> = (0..cells.len()).filter(|&i| cells[i] == HOLE).collect();
        if holes.is_empty() {
            return Ok(true);
        }
        let mut choices: Vec<Vec<u8>> = Vec::with_capacity(holes.len());
        let mut cursor: Vec<usize> = Vec::with_capacity(holes.len());
        let mut nodes = 0usize;
        let mut depth = 0usize;
        choices.push(order(holes[0]));
        cursor.push(0);
        loop {
            nodes += 1;
            if nodes > MAX_EXTENSION_NODES {
                return Err(Error::guard(
                    "extension search nodes",
                    nodes as f64,
                    MAX_EXTENSION_NODES as f64,
                ));
            }
            let idx = holes[depth];
            if cursor[depth] >= choices[depth].len() {
                cells[idx] = HOLE;
                if depth == 0 {
                    return Ok(false);
                }
                choices.pop();
                cursor.pop();
                depth -= 1;
                cursor[depth] += 1;
                continue;
            }
            cells[idx] = choices[depth][cursor[depth]];
            if self.conflict_at(grid, cells, idx) {
                cursor[depth] += 1;
                continue;
            }
            if depth + 1 == holes.len() {
                return Ok(true);
            }
            depth += 1;
            choices.push(order(holes[depth]));
            cursor.push(0);
        }
    }

    /// Bounded-radius extension test: the pattern, padded by `radius` on
    /// every side, admits a hole-free fill avoiding every forbidden pattern.
    pub fn extendable(&self, p: &Pattern, radius: usize) -> Result<bool> {
        let grid = p.region().expand(radius);
        let mut cells: Vec<u8> = grid
            .points()
            .map(|q| p.get(&q).unwrap_or(HOLE))
            .collect();
        let a = self.alphabet as u8;
        self.fill(&grid, &mut cells, |_| (0..a).collect())
    }
}
