use std::sync::atomic::{AtomicUsize, Ordering};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::pattern::{BoxWindow, Pattern, HOLE};
use super::substitution::{offsets, window as sub_window};
use super::{SpecKind, Subshift};
use crate::error::{Error, Result};
use crate::par;

/// Largest language size `enumerate_language` will materialize.
pub const MAX_ENUMERATION: usize = 5_000_000;

/// All admissible patterns on `window`, sorted by row-major symbol indices.
pub fn enumerate_language(spec: &Subshift, window: &BoxWindow) -> Result<Vec<Pattern>> {
    if window.dim != spec.dim() {
        return Err(Error::input("window dimension differs from spec dimension"));
    }
    let region = window.region();
    let vol = region.volume();
    if vol == 0 {
        return Err(Error::input("window must be non-empty"));
    }
    let k = spec.alphabet_size();
    let mut words: Vec<Vec<u8>> = match &spec.spec().kind {
        SpecKind::SinglePoint { symbol } => vec![vec![*symbol; vol]],
        SpecKind::FullShift { sub_alphabet } => {
            let total = (sub_alphabet.len() as f64).powi(vol as i32);
            if total > MAX_ENUMERATION as f64 {
                return Err(Error::guard("language size", total, MAX_ENUMERATION as f64));
            }
            let mut sub = sub_alphabet.clone();
            sub.sort();
            let mut out = vec![Vec::with_capacity(vol)];
            for _ in 0..vol {
                out = out
                    .into_iter()
                    .flat_map(|w| {
                        sub.iter().map(move |&s| {
                            let mut w2 = w.clone();
                            w2.push(s);
                            w2
                        })
                    })
                    .collect();
            }
            out
        }
        SpecKind::Substitution { .. } => {
            let s = spec.substitution().expect("compiled substitution");
            let set = s.factor_set(&region.dims)?;
            if set.len() > MAX_ENUMERATION {
                return Err(Error::guard("language size", set.len() as f64, MAX_ENUMERATION as f64));
            }
            set.iter().cloned().collect()
        }
        SpecKind::Sft { .. } => {
            let produced = AtomicUsize::new(0);
            let classes = par::map((0..k as u8).collect(), |first| {
                search_class(spec, &region, first, &produced)
            });
            let mut out = Vec::new();
            for c in classes {
                out.extend(c?);
            }
            out
        }
    };
    words.sort();
    words
        .into_iter()
        .map(|w| Pattern::on_region(&region, w))
        .collect()
}

fn search_class(
    spec: &Subshift,
    region: &super::BoxRegion,
    first: u8,
    produced: &AtomicUsize,
) -> Result<Vec<Vec<u8>>> {
    let vol = region.volume();
    let k = spec.alphabet_size() as u8;
    let local = spec.local_rules().expect("sft has local rules");
    let one_d = spec.dim() == 1;
    let mut cells = vec![HOLE; vol];
    let mut out = Vec::new();
    let mut pos = 0usize;
    cells[0] = first;
    loop {
        let ok = if one_d {
            spec.admissible_word(&cells[..=pos])?
        } else {
            !local.conflict_at(region, &cells, pos)
        };
        let mut advance = ok;
        if ok && pos + 1 == vol {
            let full = one_d || spec.admissible(&Pattern::on_region(region, cells.clone())?)?;
            if full {
                if produced.fetch_add(1, Ordering::Relaxed) >= MAX_ENUMERATION {
                    return Err(Error::guard("language size", MAX_ENUMERATION as f64 + 1.0, MAX_ENUMERATION as f64));
                }
                out.push(cells.clone());
            }
            advance = false;
        }
        if advance {
            pos += 1;
            cells[pos] = 0;
            continue;
        }
        // next sibling, backtracking as needed
        loop {
            if pos == 0 {
                return Ok(out);
            }
            if cells[pos] + 1 < k {
                cells[pos] += 1;
                break;
            }
            cells[pos] = HOLE;
            pos -= 1;
        }
    }
}

/// A deterministic admissible pattern covering `window`.
pub fn generate_configuration(spec: &Subshift, window: &BoxWindow, seed: u64) -> Result<Pattern> {
    if window.dim != spec.dim() {
        return Err(Error::input("window dimension differs from spec dimension"));
    }
    let region = window.region();
    let vol = region.volume();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let k = spec.alphabet_size() as u8;
    match &spec.spec().kind {
        SpecKind::SinglePoint { symbol } => Ok(Pattern::filled(&region, *symbol)),
        SpecKind::FullShift { sub_alphabet } => {
            let cells = (0..vol)
                .map(|_| sub_alphabet[rng.gen_range(0..sub_alphabet.len())])
                .collect();
            Pattern::on_region(&region, cells)
        }
        SpecKind::Substitution { .. } => {
            let s = spec.substitution().expect("compiled substitution");
            let kk = s.level_for(&region.dims);
            let imgs = s.block_images(kk)?;
            let idims = s.image_dims(kk);
            let img = &imgs[rng.gen_range(0..imgs.len())];
            let offs = offsets(&idims, &region.dims);
            let off = &offs[rng.gen_range(0..offs.len())];
            Pattern::on_region(&region, sub_window(img, &idims, off, &region.dims))
        }
        SpecKind::Sft { .. } => {
            if let Some(g) = spec.follower_graph() {
                let mut v = rng.gen_range(0..g.vertex_count());
                let mut cells = g.vertex_word(v).to_vec();
                while cells.len() < vol {
                    let succ: Vec<(u8, usize)> = (0..k)
                        .filter_map(|s| g.successor(v, s).map(|t| (s, t)))
                        .collect();
                    let (s, t) = succ[rng.gen_range(0..succ.len())];
                    cells.push(s);
                    v = t;
                }
                cells.truncate(vol);
                return Pattern::on_region(&region, cells);
            }
            let local = spec.local_rules().expect("sft has local rules");
            for _attempt in 0..16 {
                let mut cells = vec![HOLE; vol];
                let orders: Vec<Vec<u8>> = (0..vol)
                    .map(|_| {
                        let mut o: Vec<u8> = (0..k).collect();
                        o.shuffle(&mut rng);
                        o
                    })
                    .collect();
                if local.fill(&region, &mut cells, |i| orders[i].clone())? {
                    let p = Pattern::on_region(&region, cells)?;
                    if spec.admissible(&p)? {
                        return Ok(p);
                    }
                }
            }
            Err(Error::EmptyWindow(format!(
                "no admissible fill of a window of volume {vol} found"
            )))
        }
    }
}
