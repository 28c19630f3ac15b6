mod common;

use common::*;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use subfreeze::subshift::{BoxRegion, Pattern, Subshift, SubshiftSpec};
use subfreeze::tiling::*;

#[test]
fn seeded_cases_satisfy_tiling_laws() {
    let mut tiles = 0;
    for seed in 0..200 {
        let case = tiling_case(seed);
        let t = decompose(&case);
        let bad = tiling_violations(&case, &t);
        assert!(bad.is_empty(), "seed {seed}: {bad:?}");
        tiles += t.tiles.len();
    }
    assert!(tiles > 200);
}

#[test]
fn shifted_pairs_are_equivariant() {
    for seed in 0..50u64 {
        let case = tiling_case(1000 + seed);
        let t = (seed as i64 * 37) % 91 - 45;
        assert!(equivariance_holds(&case, t), "seed {seed} shift {t}");
    }
}

#[test]
fn clean_window_is_all_margin() {
    let spec = target(false);
    let x = Pattern::new(vec![-64], vec![256], vec![0; 256]).unwrap();
    let off = OdometerOffset::zero(1, 8);
    let window = BoxRegion::new(vec![0], vec![64]);
    let t = tile_decomposition(&spec, &x, &off, &window).unwrap();
    assert!(t.tiles.is_empty());
    assert_eq!(t.margin.len(), 64);
    // the level-8 tile [0, 256) sticks out of x
    assert!(matches!(
        tile_level(&spec, &x, &off, &[0]),
        Err(subfreeze::Error::Undetermined { reached: 7 })
    ));
}

#[test]
fn two_dimensional_single_point() {
    let spec = Subshift::new(SubshiftSpec::single_point(2, 0, 2)).unwrap();
    let region = BoxRegion::new(vec![0, 0], vec![32, 32]);
    let mut x = Pattern::filled(&region, 0);
    x.set(&[9, 3], 1).unwrap();
    let off = OdometerOffset::new(vec![0, 0], 5).unwrap();
    let window = BoxRegion::new(vec![0, 0], vec![16, 16]);
    let t = tile_decomposition(&spec, &x, &off, &window).unwrap();
    assert!(t.margin.is_empty());
    assert_eq!(t.covered_volume(), 256);
    let defect = t.tiles.iter().find(|tile| !tile.admissible).unwrap();
    assert_eq!((defect.origin.clone(), defect.level), (vec![9, 3], 0));
    // the 16×16 window contains the 2×2, 4×4, 8×8 tiles around the defect
    assert!(t.tiles.iter().any(|tile| tile.level == 3 && tile.origin == vec![8, 8]));
}

#[test]
fn pins_match_naive_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    for case in 0..200 {
        let golden = case % 2 == 0;
        let mut spec = if golden { SubshiftSpec::golden_mean() } else { SubshiftSpec::single_point(2, 0, 1) };
        spec = spec.one_sided();
        let spec = Subshift::new(spec).unwrap();
        let len = 16 + case % 200;
        let x = defect_word(golden, len, [0.01, 0.05, 0.2][case % 3], &mut rng);
        let got = pin_decomposition(&spec, &x).unwrap();
        let (pins, margin) = naive_pins(golden, &x);
        assert_eq!(got.pins, pins, "case {case}");
        assert_eq!(got.margin_start, margin, "case {case}");
        for (p, gap) in got.pins.iter().zip(got.gaps()) {
            assert!(gap.is_power_of_two());
            assert!(naive_admissible(golden, &x[*p..p + gap]) || gap == 1);
        }
        for (i, &s) in got.superpin.iter().enumerate() {
            if s {
                assert!(i > 0 && i + 1 < got.pins.len());
                assert!(got.pins[i + 1] - got.pins[i] <= got.pins[i] - got.pins[i - 1]);
            }
        }
    }
}

#[test]
fn pins_need_one_sided_spec() {
    let spec = target(true);
    assert!(pin_decomposition(&spec, &[0, 1, 0]).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn tiling_laws_hold(seed in 0u64..1_000_000) {
        let case = tiling_case(seed);
        let t = decompose(&case);
        prop_assert!(tiling_violations(&case, &t).is_empty());
    }

    #[test]
    fn equivariance_holds_for_any_shift(seed in 0u64..1_000_000, shift in -200i64..200) {
        prop_assert!(equivariance_holds(&tiling_case(seed), shift));
    }

    #[test]
    fn pin_blocks_tile_the_determined_prefix(words in prop::collection::vec(0u8..2, 1..300)) {
        let spec = Subshift::new(SubshiftSpec::golden_mean().one_sided()).unwrap();
        let p = pin_decomposition(&spec, &words).unwrap();
        let end = p.margin_start.unwrap_or(words.len());
        prop_assert_eq!(*p.pins.last().unwrap(), end);
        prop_assert_eq!(p.gaps().iter().sum::<usize>(), end);
    }
}
