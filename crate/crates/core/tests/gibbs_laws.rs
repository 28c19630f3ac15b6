use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use subfreeze::gibbs::*;
use subfreeze::potential::*;
use subfreeze::subshift::*;

fn golden_interaction(n_max: usize) -> Arc<InteractionFamily> {
    let spec = Arc::new(Subshift::new(SubshiftSpec::golden_mean()).unwrap());
    let seq = inverse_power_sequence(1.0, 1.0).unwrap();
    Arc::new(generate_interaction(&seq, spec, n_max))
}

fn random_boundary(region: &BoxRegion, collar: usize, k: u8, rng: &mut ChaCha8Rng) -> Pattern {
    let outer = region.expand(collar);
    let cells = (0..outer.volume()).map(|_| rng.gen_range(0..k)).collect();
    Pattern::on_region(&outer, cells).unwrap()
}

#[test]
fn zero_interaction_is_uniform() {
    let spec = Arc::new(Subshift::new(SubshiftSpec::golden_mean()).unwrap());
    let seq = custom_sequence(vec![1.0; 8], "flat").unwrap();
    let inter = Arc::new(generate_interaction(&seq, spec, 2));
    let region = BoxRegion::new(vec![0], vec![4]);
    let y = Pattern::filled(&region.expand(FiniteSpecification::collar(&inter)), 1);
    let fs = FiniteSpecification::new(inter.clone(), region, y, 3.0).unwrap();
    let w = conditional_weights(&fs).unwrap();
    assert_eq!(w.len(), 16);
    for v in w.values() {
        assert!((v - 1.0 / 16.0).abs() < 1e-15);
    }
    assert_eq!(full_support_rho(&inter, 0.0), 0.5);
}

#[test]
fn weights_normalize() {
    let inter = golden_interaction(2);
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for len in 1..=6 {
        let region = BoxRegion::new(vec![0], vec![len]);
        let y = random_boundary(&region, FiniteSpecification::collar(&inter), 2, &mut rng);
        let fs = FiniteSpecification::new(inter.clone(), region, y, 1.7).unwrap();
        let w = conditional_weights(&fs).unwrap();
        let total: f64 = w.values().sum();
        assert!((total - 1.0).abs() < 1e-12);
        assert!(w.values().all(|&v| v > 0.0));
    }
}

#[test]
fn boundary_must_cover_collar() {
    let inter = golden_interaction(2);
    let region = BoxRegion::new(vec![0], vec![3]);
    let short = Pattern::filled(&region.expand(1), 0);
    assert!(FiniteSpecification::new(inter, region, short, 1.0).is_err());
}

fn decode(mut code: usize, len: usize) -> Vec<u8> {
    let mut w = vec![0u8; len];
    for i in (0..len).rev() {
        w[i] = (code % 2) as u8;
        code /= 2;
    }
    w
}

/// max |γ_Λ(x′ ∨ z | y) / γ_Λ(· ∨ z | y)(Λ′) − γ_Λ′(x′ | z ∨ y)| over x′, z.
fn dlr_gap(inter: &Arc<InteractionFamily>, region: &BoxRegion, inner: &BoxRegion, beta: f64, seed: u64) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let y = random_boundary(region, FiniteSpecification::collar(inter), 2, &mut rng);
    let outer = conditional_weights(&FiniteSpecification::new(inter.clone(), region.clone(), y.clone(), beta).unwrap()).unwrap();
    let off: Vec<Vec<i64>> = region.points().filter(|p| !inner.contains(p)).collect();
    let mut worst = 0.0f64;
    for zc in 0..1usize << off.len() {
        let z = decode(zc, off.len());
        let mut boundary = y.clone();
        for (p, &s) in off.iter().zip(&z) {
            boundary.set(p, s).unwrap();
        }
        let inner_w = conditional_weights(&FiniteSpecification::new(inter.clone(), inner.clone(), boundary.clone(), beta).unwrap()).unwrap();
        let joint: Vec<(Pattern, f64)> = inner_w
            .keys()
            .map(|xp| {
                let mut full = boundary.clone();
                for p in inner.points() {
                    full.set(&p, xp.get(&p).unwrap()).unwrap();
                }
                (xp.clone(), outer[&full.sub_box(region).unwrap()])
            })
            .collect();
        let mass: f64 = joint.iter().map(|(_, w)| w).sum();
        for (xp, w) in joint {
            worst = worst.max((w / mass - inner_w[&xp]).abs());
        }
    }
    worst
}

#[test]
fn dlr_nesting_is_exact() {
    let inter = golden_interaction(2);
    for len in 2..=6usize {
        let region = BoxRegion::new(vec![0], vec![len]);
        for start in 0..len as i64 {
            for width in 1..=(len - start as usize).min(3) {
                let inner = BoxRegion::new(vec![start], vec![width]);
                let gap = dlr_gap(&inter, &region, &inner, 2.5, 11 + len as u64);
                assert!(gap < 1e-12, "len {len} inner {start}+{width}: {gap}");
            }
        }
    }
}

#[test]
fn rho_bound_holds_on_small_boxes() {
    for n_max in [1usize, 2, 3] {
        let inter = golden_interaction(n_max);
        let mut rng = ChaCha8Rng::seed_from_u64(n_max as u64);
        for len in 1..=6 {
            for beta in [0.0, 0.5, 3.0] {
                let region = BoxRegion::new(vec![0], vec![len]);
                let y = random_boundary(&region, FiniteSpecification::collar(&inter), 2, &mut rng);
                let fs = FiniteSpecification::new(inter.clone(), region, y, beta).unwrap();
                let check = check_rho_bound(&fs).unwrap();
                assert!(check.holds, "{check:?}");
            }
        }
    }
}

#[test]
fn rho_vanishes_for_thm34_family() {
    let spec = Arc::new(Subshift::new(SubshiftSpec::golden_mean()).unwrap());
    let table = subfreeze::complexity::ComplexityTable::build(&spec, (0..=8).map(|i| 1usize << i)).unwrap();
    let h = subfreeze::complexity::entropy_bounds(&spec, 4).unwrap().reference().0;
    let seq = build_thm34_sequence(&table, h, 8).unwrap();
    let mut last = f64::INFINITY;
    for n_max in [4usize, 16, 64, 256] {
        let inter = generate_interaction(&seq, spec.clone(), n_max);
        let rho = full_support_rho(&inter, inter.s_norm(n_max));
        assert!(rho < last);
        last = rho;
    }
    assert!(last < 1e-3);
}

fn hard_squares_potential(r: usize) -> TruncatedPotential {
    let spec = Arc::new(Subshift::new(SubshiftSpec::hard_squares()).unwrap());
    let seq = Arc::new(inverse_power_sequence(1.0, 1.0).unwrap());
    TruncatedPotential::new(spec, seq, r)
}

fn golden_potential(r: usize) -> TruncatedPotential {
    let spec = Arc::new(Subshift::new(SubshiftSpec::golden_mean()).unwrap());
    let seq = Arc::new(inverse_power_sequence(1.0, 1.0).unwrap());
    TruncatedPotential::new(spec, seq, r)
}

#[test]
fn chains_are_deterministic_per_seed() {
    let pot = golden_potential(3);
    let a = metropolis_run(&pot, 1.0, 40, 20_000, 5).unwrap();
    let b = metropolis_run(&pot, 1.0, 40, 20_000, 5).unwrap();
    let c = metropolis_run(&pot, 1.0, 40, 20_000, 6).unwrap();
    assert_eq!(a.cells, b.cells);
    assert_eq!(a.accepted, b.accepted);
    assert_ne!(a.cells, c.cells);
    assert_eq!(a.algorithm, RNG_ALGORITHM);
}

#[test]
fn incremental_energy_matches_recomputation() {
    let pot = hard_squares_potential(2);
    let cfg = ChainConfig {
        telemetry_every: 1000,
        ..Default::default()
    };
    let s = metropolis_run_with(&pot, 2.0, 6, 20_000, 9, &cfg).unwrap();
    let last = s.telemetry.last().unwrap();
    assert!((last.energy - s.energy).abs() < 1e-9);
    assert!(s.samples <= s.steps && s.accepted <= s.steps);
    assert!(s.cells.iter().all(|&c| c < 2));
}

#[test]
fn uniform_at_beta_zero() {
    let pot = golden_potential(2);
    let cfg = ChainConfig {
        burn_in: 10_000,
        sample_every: Some(400),
        ..Default::default()
    };
    let s = metropolis_run_with(&pot, 0.0, 64, 400_000, 1, &cfg).unwrap();
    let total: u64 = s.symbol_counts.iter().sum();
    // samples are a sweep apart, so treat each sampled site as independent
    let sigma = (total as f64 * 0.25).sqrt();
    let dev = (s.symbol_counts[0] as f64 - total as f64 / 2.0).abs();
    assert!(dev < 4.0 * sigma, "dev {dev} sigma {sigma}");
}

#[test]
fn two_seeds_agree_at_beta_zero() {
    let pot = golden_potential(2);
    let cfg0 = ChainConfig {
        burn_in: 5_000,
        sample_every: Some(200),
        cylinders: vec![Pattern::word(&[1, 1]), Pattern::word(&[0, 1, 0])],
        initial: Some(vec![0; 50]),
        telemetry_every: 0,
    };
    let mut cfg1 = cfg0.clone();
    cfg1.initial = Some(vec![1; 50]);
    let a = metropolis_run_with(&pot, 0.0, 50, 300_000, 21, &cfg0).unwrap();
    let b = metropolis_run_with(&pot, 0.0, 50, 300_000, 22, &cfg1).unwrap();
    let fa = a.cylinder_frequencies();
    let fb = b.cylinder_frequencies();
    let m = (a.samples * 50) as f64;
    for (i, p) in [0.25f64, 0.125].iter().enumerate() {
        let sigma = (2.0 * p * (1.0 - p) / m).sqrt();
        assert!((fa[i] - fb[i]).abs() < 5.0 * sigma, "cylinder {i}: {} vs {}", fa[i], fb[i]);
    }
}

#[test]
fn detailed_balance_on_random_moves() {
    let pot = hard_squares_potential(2);
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for _ in 0..20 {
        let cells: Vec<u8> = (0..36).map(|_| rng.gen_range(0..2)).collect();
        let site = rng.gen_range(0..36);
        let sym = 1 - cells[site];
        let (ratio, weight) = detailed_balance_check(&pot, 1.3, 6, &cells, site, sym).unwrap();
        assert!((ratio / weight - 1.0).abs() < 1e-12);
    }
}

#[test]
fn frozen_chain_avoids_forbidden_windows() {
    let pot = golden_potential(3);
    let cfg = ChainConfig {
        burn_in: 50_000,
        ..Default::default()
    };
    let hot = metropolis_run_with(&pot, 0.0, 64, 200_000, 2, &cfg).unwrap();
    let cold = metropolis_run_with(&pot, 8.0, 64, 200_000, 2, &cfg).unwrap();
    assert!(cold.inadmissible_mass() * 10.0 <= hot.inadmissible_mass());
}

#[test]
fn parallel_chains_match_single_runs() {
    let pot = golden_potential(2);
    let cfg = ChainConfig::default();
    let many = metropolis_runs(&pot, 1.0, 20, 5_000, &[1, 2, 3], &cfg).unwrap();
    for (s, seed) in many.iter().zip([1u64, 2, 3]) {
        assert_eq!(s.cells, metropolis_run_with(&pot, 1.0, 20, 5_000, seed, &cfg).unwrap().cells);
    }
}

#[test]
fn telemetry_csv_has_header() {
    let pot = golden_potential(2);
    let cfg = ChainConfig {
        telemetry_every: 100,
        ..Default::default()
    };
    let s = metropolis_run_with(&pot, 1.0, 16, 1_000, 1, &cfg).unwrap();
    let mut buf = Vec::new();
    s.write_telemetry(&mut buf).unwrap();
    let text = String::from_utf8(buf).unwrap();
    assert!(text.starts_with("step,energy,inadmissible_mass\n"));
    assert_eq!(text.lines().count(), 11);
}
