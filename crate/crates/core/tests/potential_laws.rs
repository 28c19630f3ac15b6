use std::sync::Arc;

use proptest::prelude::*;
use subfreeze::complexity::*;
use subfreeze::potential::*;
use subfreeze::subshift::*;

fn single_point() -> Arc<Subshift> {
    Arc::new(Subshift::new(SubshiftSpec::single_point(2, 0, 1)).unwrap())
}

fn golden() -> Arc<Subshift> {
    Arc::new(Subshift::new(SubshiftSpec::golden_mean()).unwrap())
}

fn thm34_for(spec: &Subshift, i_max: usize) -> FreezingSequence {
    let table = ComplexityTable::build(spec, (0..=i_max).map(|i| 1usize << i)).unwrap();
    let h = entropy_bounds(spec, 1 << i_max.min(6)).unwrap().reference().0;
    build_thm34_sequence(&table, h, i_max).unwrap()
}

/// StatBox(R) window with the given cells listed left to right.
fn centered(cells: &[u8]) -> Pattern {
    let r = (cells.len() / 2) as i64;
    Pattern::new(vec![-r], vec![cells.len()], cells.to_vec()).unwrap()
}

fn with_one_at(radius: usize, at: i64) -> Pattern {
    let mut w = centered(&vec![0; 2 * radius + 1]);
    w.set(&[at], 1).unwrap();
    w
}

#[test]
fn thm34_single_point_hand_values() {
    let seq = thm34_for(&single_point(), 5);
    assert_eq!(seq.value(2), 3.0);
    assert_eq!(seq.value(3), 1.5);
    assert_eq!(seq.value(4), 1.5);
    let want = (2.0 * 2f64.ln() + 3.0) / 4.0;
    for j in 5..=8 {
        assert!((seq.value(j) - want).abs() < 1e-15);
    }
    assert!((want - 1.09657).abs() < 1e-5);
}

#[test]
fn thm34_golden_mean_a2() {
    let seq = thm34_for(&golden(), 6);
    let h = ((1.0 + 5f64.sqrt()) / 2.0).ln();
    let kappa0 = 2f64.ln() - h;
    assert!((seq.value(2) - (kappa0 + 3.0)).abs() < 1e-12);
    assert!((seq.value(2) - 3.21193).abs() < 1e-5);
}

#[test]
fn thm34_meets_its_hypothesis() {
    for spec in [single_point(), golden()] {
        let i_max = 8;
        let table = ComplexityTable::build(&spec, (0..=i_max).map(|i| 1usize << i)).unwrap();
        let h = entropy_bounds(&spec, 16).unwrap().reference().0;
        let kappa = kappa_from_table(&table, i_max, h).unwrap();
        let seq = build_thm34_sequence(&table, h, i_max).unwrap();
        for (i, k) in kappa.kappa.iter().enumerate() {
            let log_plus = if i > 1 { (i as f64).ln() } else { 0.0 };
            let need = k + (2.0 * log_plus + 3.0) / 2f64.powi(i as i32);
            assert!(seq.value(1 << (i + 1)) >= need - 1e-15, "i = {i}");
        }
    }
}

#[test]
fn thm51_closed_form() {
    let seq = build_thm51_sequence(0.5).unwrap();
    assert_eq!(seq.value(10), 0.5);
    for i in 1..1000 {
        assert!((seq.value(i) * i as f64 - 5.0).abs() < 1e-12);
    }
}

#[test]
fn thm51_constant_for_golden_mean_is_positive() {
    let spec = golden();
    let table = ComplexityTable::build(&spec, 1..=64).unwrap();
    let h = entropy_bounds(&spec, 8).unwrap().reference().0;
    let c = perron_constant(&table, h);
    assert!(c > 0.0);
    assert!(build_thm51_sequence(c).is_ok());
}

#[test]
fn thm52_thue_morse_at_eight() {
    let spec = Subshift::new(SubshiftSpec::thue_morse()).unwrap();
    let kappa = kappa_sequence(&spec, 6, 0.0).unwrap();
    let seq = build_thm52_sequence(&kappa, 64).unwrap();
    let k = &kappa.kappa;
    let want = (2.0 * 8f64.ln()) / 8.0 + (k[0] + 2.0 * k[1] + 4.0 * k[2] + 8.0 * k[3]) / 8.0 + 1.0 / 8.0;
    assert!((seq.value(24) - want).abs() < 1e-12, "{} vs {want}", seq.value(24));
    let late: Vec<f64> = [100usize, 1000, 10_000, 100_000].iter().map(|&j| seq.value(j)).collect();
    assert!(late.windows(2).all(|w| w[1] < w[0]));
    assert!(late[3] < 0.01);
}

#[test]
fn cor53_tag_and_value() {
    let seq = build_cor53_sequence();
    assert_eq!(seq.class.label(), "O(log^2 j/j)");
    assert!((seq.value(8) - 8f64.ln().powi(2) / 8.0).abs() < 1e-15);
}

#[test]
fn distance_examples() {
    let sp = single_point();
    assert_eq!(distance_exponent(&sp, &with_one_at(8, 5)).unwrap(), DistanceExponent::Exact(5));
    assert_eq!(distance_exponent(&sp, &with_one_at(8, -5)).unwrap(), DistanceExponent::Exact(5));
    assert_eq!(distance_exponent(&sp, &centered(&[0; 17])).unwrap(), DistanceExponent::AtLeast(9));
    let g = golden();
    assert_eq!(distance_exponent(&g, &centered(&[0, 0, 1, 1, 0])).unwrap(), DistanceExponent::Exact(1));
    assert_eq!(distance_exponent(&g, &centered(&[1, 0, 1, 0, 1])).unwrap(), DistanceExponent::AtLeast(3));
}

#[test]
fn one_sided_distance_is_longest_admissible_prefix() {
    let sp = Arc::new(Subshift::new(SubshiftSpec::single_point(2, 0, 1).one_sided()).unwrap());
    let w = Pattern::word(&[0, 0, 0, 1, 0, 0]);
    assert_eq!(distance_exponent(&sp, &w).unwrap(), DistanceExponent::Exact(3));
    assert_eq!(distance_exponent(&sp, &Pattern::word(&[1, 0])).unwrap(), DistanceExponent::Exact(0));
    assert!(distance_exponent(&sp, &centered(&[0, 0, 0])).is_err());
}

#[test]
fn eval_truncated_examples() {
    let spec = single_point();
    let seq = Arc::new(thm34_for(&spec, 5));
    let pot = TruncatedPotential::new(spec, seq.clone(), 8);
    assert_eq!(eval_truncated(&pot, &centered(&[0; 17])).unwrap(), 0.0);
    assert_eq!(eval_truncated(&pot, &with_one_at(8, 0)).unwrap(), -seq.value(0));
    assert_eq!(eval_truncated(&pot, &with_one_at(8, 3)).unwrap(), -1.5);
    assert_eq!(pot.error_bound(), seq.value(8));
}

#[test]
fn interaction_examples() {
    let spec = single_point();
    let seq = thm34_for(&spec, 6);
    let inter = generate_interaction(&seq, spec, 40);
    assert!(inter.values().iter().all(|&v| v <= 0.0));
    assert_eq!(inter.value(2), -1.5);
    assert_eq!(inter.box_volume(2), 5);
}

#[test]
fn interaction_telescopes_to_the_potential() {
    let spec = single_point();
    let seq = thm34_for(&spec, 6);
    let n_max = 12;
    let inter = generate_interaction(&seq, spec.clone(), n_max);
    for j in 0..=n_max {
        let w = with_one_at(n_max, j as i64);
        let got = inter.centered_sum(&w).unwrap();
        let want = -seq.value(j) + seq.value(n_max + 1);
        assert!((got - want).abs() < 1e-12, "j = {j}");
    }
}

#[test]
fn thm34_interaction_in_b_not_s() {
    let spec = golden();
    let seq = thm34_for(&spec, 8);
    let inter = generate_interaction(&seq, spec, 10_000);
    let b = inter.b_partial();
    assert!(b[10_000] - b[9_000] < 1e-6 * 1000.0);
    assert!(inter.s_norm(10_000) > 10.0 * inter.b_norm(10_000));
    assert!(inter.s_norm(10_000) > inter.s_norm(1_000) + 1.0);
}

#[test]
fn replacement_gain_examples() {
    let spec = single_point();
    let seq = Arc::new(thm34_for(&spec, 5));
    let r = 4;
    let pot = TruncatedPotential::new(spec, seq.clone(), r);
    let big = BoxRegion::new(vec![-20], vec![41]);
    let mut x = Pattern::filled(&big, 0);
    x.set(&[0], 1).unwrap();
    let one = Pattern::word(&[1]);
    let zero = Pattern::word(&[0]);
    let s = BoxWindow::stat(r, 1);
    assert_eq!(replacement_gain(&pot, &x, &[0], &one, &one, &s).unwrap(), 0.0);
    let gain = replacement_gain(&pot, &x, &[0], &one, &zero, &s).unwrap();
    // every center within R sees the defect at distance |c|
    let want: f64 = (-(r as i64)..=r as i64).map(|c| seq.value(c.unsigned_abs() as usize)).sum();
    assert!((gain - want).abs() < 1e-12);
    assert!(gain > 0.0);
    let x2 = Pattern::filled(&big, 0);
    let back = replacement_gain(&pot, &x2, &[0], &zero, &one, &s).unwrap();
    assert!((gain + back).abs() < 1e-12);
}

#[test]
fn nogo_examples() {
    assert_eq!(nogo_classify(&inverse_power_sequence(1.0, 1.5).unwrap(), 1).verdict, NoGoVerdict::NoGo);
    assert_eq!(nogo_classify(&inverse_power_sequence(1.0, 2.5).unwrap(), 2).verdict, NoGoVerdict::NoGo);
    assert_eq!(nogo_classify(&build_cor53_sequence(), 1).verdict, NoGoVerdict::CandidateFreezing);
    let custom = nogo_classify(&custom_sequence(vec![3.0, 2.0, 1.0], "table").unwrap(), 1);
    assert_eq!(custom.verdict, NoGoVerdict::Inconclusive);
    assert!(!custom.trace.is_empty());
}

#[test]
fn sequence_csv_marks_extrapolation() {
    let seq = custom_sequence(vec![2.0, 1.0], "x").unwrap();
    let mut buf = Vec::new();
    seq.write_csv(&mut buf, 3).unwrap();
    let text = String::from_utf8(buf).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "j,a_j,range_i,extrapolated");
    assert_eq!(lines.len(), 5);
    assert!(lines[3].ends_with("true"));
}

fn all_words(len: usize) -> Vec<Vec<u8>> {
    (0..1usize << len)
        .map(|m| (0..len).map(|i| ((m >> (len - 1 - i)) & 1) as u8).collect())
        .collect()
}

/// var_j over pairs with dist(x, y) ≤ 2^{-j}, i.e. agreeing on StatBox(j − 1).
#[test]
fn variation_of_truncation_is_a_j() {
    let r = 3;
    for spec in [single_point(), golden()] {
        let seq = Arc::new(thm34_for(&spec, 5));
        let pot = TruncatedPotential::new(spec.clone(), seq.clone(), r);
        let words = all_words(2 * r + 1);
        let vals: Vec<f64> = words.iter().map(|w| pot.eval(&centered(w)).unwrap()).collect();
        for j in 0..=r + 1 {
            let core = |w: &Vec<u8>| if j == 0 { Vec::new() } else { w[r + 1 - j..r + j].to_vec() };
            let mut var = 0.0f64;
            for (a, va) in words.iter().zip(&vals) {
                for (b, vb) in words.iter().zip(&vals) {
                    if core(a) == core(b) {
                        var = var.max((va - vb).abs());
                    }
                }
            }
            let want = if j <= r { seq.value(j) } else { 0.0 };
            assert!((var - want).abs() < 1e-15, "j = {j}: {var} vs {want}");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn truncation_is_monotone(cells in prop::collection::vec(0u8..2, 21), r in 1usize..9, extra in 1usize..2) {
        let spec = golden();
        let seq = Arc::new(thm34_for(&spec, 5));
        let rr = (r + extra).min(10);
        let lo = TruncatedPotential::new(spec.clone(), seq.clone(), r);
        let hi = TruncatedPotential::new(spec.clone(), seq.clone(), rr);
        let x = centered(&cells);
        let a = lo.eval_at(&x, &[0]).unwrap();
        let b = hi.eval_at(&x, &[0]).unwrap();
        prop_assert!(b <= a);
        prop_assert!(a - b <= seq.value(r) + 1e-15);
    }

    #[test]
    fn sequences_are_non_increasing(c in 0.01f64..10.0, p in 0.2f64..4.0, j in 0usize..100_000) {
        let a = build_thm51_sequence(c).unwrap();
        prop_assert!(a.value(j + 1) <= a.value(j));
        let b = inverse_power_sequence(c, p).unwrap();
        prop_assert!(b.value(j + 1) <= b.value(j));
        let s = build_cor53_sequence();
        prop_assert!(s.value(j + 1) <= s.value(j));
    }

    #[test]
    fn gain_is_antisymmetric(bits in prop::collection::vec(0u8..2, 3), pos in -6i64..4) {
        let spec = golden();
        let seq = Arc::new(thm34_for(&spec, 5));
        let pot = TruncatedPotential::new(spec, seq, 3);
        let big = BoxRegion::new(vec![-20], vec![41]);
        let mut x = Pattern::filled(&big, 0);
        for (i, &b) in bits.iter().enumerate() {
            x.set(&[pos + i as i64], b).unwrap();
        }
        let w = Pattern::word(&bits);
        let wp = Pattern::word(&[0, 1, 0]);
        let mut x2 = x.clone();
        for i in 0..3 {
            x2.set(&[pos + i], wp.cells()[i as usize]).unwrap();
        }
        let s = BoxWindow::stat(8, 1);
        let g = replacement_gain(&pot, &x, &[pos], &w, &wp, &s).unwrap();
        let back = replacement_gain(&pot, &x2, &[pos], &wp, &w, &s).unwrap();
        prop_assert!((g + back).abs() < 1e-12);
    }
}
