#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use subfreeze::subshift::{BoxRegion, Pattern, Subshift, SubshiftSpec};
use subfreeze::tiling::{tile_decomposition, DyadicTiling, OdometerOffset};

/// Admissibility without the library: symbol 0 forever, or no "11".
pub fn naive_admissible(golden: bool, w: &[u8]) -> bool {
    if golden {
        !w.windows(2).any(|p| p == [1, 1])
    } else {
        w.iter().all(|&s| s == 0)
    }
}

pub fn target(golden: bool) -> Subshift {
    let spec = if golden {
        SubshiftSpec::golden_mean()
    } else {
        SubshiftSpec::single_point(2, 0, 1)
    };
    Subshift::new(spec).unwrap()
}

/// Sparse defects on top of an admissible background.
pub fn defect_word(golden: bool, len: usize, rate: f64, rng: &mut ChaCha8Rng) -> Vec<u8> {
    let mut w = vec![0u8; len];
    if golden {
        let mut i = 0;
        while i < len {
            if rng.gen_bool(0.4) {
                w[i] = 1;
                i += 1;
            }
            i += 1;
        }
    }
    for s in w.iter_mut() {
        if rng.gen_bool(rate) {
            *s = 1;
        }
    }
    w
}

pub struct TilingCase {
    pub golden: bool,
    pub x: Pattern,
    pub offset: OdometerOffset,
    pub window: BoxRegion,
}

pub const CASE_DEPTH: u32 = 9;

pub fn tiling_case(seed: u64) -> TilingCase {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let golden = seed % 2 == 1;
    let rate = [0.002, 0.01, 0.05, 0.2][rng.gen_range(0..4)];
    let len = 1usize << (CASE_DEPTH + 1);
    let x = Pattern::new(vec![-(len as i64) / 2], vec![len], defect_word(golden, len, rate, &mut rng)).unwrap();
    let width = 1usize << rng.gen_range(0..=7);
    let start = rng.gen_range(-64i64..=64 - width as i64);
    let offset = OdometerOffset::new(vec![rng.gen_range(0..1u64 << CASE_DEPTH)], CASE_DEPTH).unwrap();
    TilingCase {
        golden,
        x,
        offset,
        window: BoxRegion::new(vec![start], vec![width]),
    }
}

/// Violations of disjoint cover, admissible tiles and parent maximality.
pub fn tiling_violations(case: &TilingCase, t: &DyadicTiling) -> Vec<String> {
    let mut out = Vec::new();
    let w = &case.window;
    let mut owner = vec![0usize; w.volume()];
    for tile in &t.tiles {
        let r = tile.region();
        if !w.contains_box(&r) {
            out.push(format!("tile {:?} leaves the window", tile.origin));
        }
        for p in r.points() {
            if let Some(i) = w.index_of(&p) {
                owner[i] += 1;
            }
        }
        let cells = case.x.sub_box(&r).unwrap();
        let ok = naive_admissible(case.golden, cells.cells());
        if ok != tile.admissible {
            out.push(format!("admissible flag wrong at {:?}", tile.origin));
        }
        if tile.level > 0 && !ok {
            out.push(format!("inadmissible tile of level {} at {:?}", tile.level, tile.origin));
        }
        let parent = case.offset.tile(&tile.origin, tile.level + 1);
        if case.x.region().contains_box(&parent) && ok {
            let pc = case.x.sub_box(&parent).unwrap();
            if naive_admissible(case.golden, pc.cells()) {
                out.push(format!("admissible parent above {:?}", tile.origin));
            }
        }
        let own = case.offset.tile(&tile.origin, tile.level);
        if own != r {
            out.push(format!("tile {:?} is off the level-{} grid", tile.origin, tile.level));
        }
    }
    for p in &t.margin {
        if let Some(i) = w.index_of(p) {
            owner[i] += 1;
        }
    }
    for (i, &c) in owner.iter().enumerate() {
        if c != 1 {
            out.push(format!("point {:?} covered {c} times", w.point(i)));
        }
    }
    out
}

pub fn decompose(case: &TilingCase) -> DyadicTiling {
    tile_decomposition(&target(case.golden), &case.x, &case.offset, &case.window).unwrap()
}

/// Shifting x, the window and the odometer by t translates every tile by t.
pub fn equivariance_holds(case: &TilingCase, t: i64) -> bool {
    let base = decompose(case);
    let moved = TilingCase {
        golden: case.golden,
        x: case.x.translate(&[t]),
        offset: case.offset.shifted(&[t]),
        window: case.window.translate(&[t]),
    };
    let shifted = decompose(&moved);
    let mut expect: Vec<_> = base
        .tiles
        .iter()
        .map(|tile| (tile.origin[0] + t, tile.level, tile.admissible))
        .collect();
    let mut got: Vec<_> = shifted.tiles.iter().map(|tile| (tile.origin[0], tile.level, tile.admissible)).collect();
    expect.sort();
    got.sort();
    let mut em: Vec<i64> = base.margin.iter().map(|p| p[0] + t).collect();
    let mut gm: Vec<i64> = shifted.margin.iter().map(|p| p[0]).collect();
    em.sort();
    gm.sort();
    expect == got && em == gm
}

/// Pins from scratch: from each pin, the longest admissible block of length
/// 2^k whose doubling still fits in the word.
pub fn naive_pins(golden: bool, x: &[u8]) -> (Vec<usize>, Option<usize>) {
    let mut pins = vec![0];
    let mut i = 0;
    while i < x.len() {
        let mut k = 0;
        while i + (2 << k) <= x.len() && naive_admissible(golden, &x[i..i + (2 << k)]) {
            k += 1;
        }
        if i + (2 << k) > x.len() {
            return (pins, Some(i));
        }
        i += 1 << k;
        pins.push(i);
    }
    (pins, None)
}
