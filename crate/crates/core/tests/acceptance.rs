//! Acceptance suite: executes the library's headline claims at desk scale,
//! one test per criterion, each printing a pass line with its runtime.

mod common;

use std::time::Instant;

use nalgebra::{DMatrix, DVector, dvector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::{
    grid_dominates, majority_prefers, prefer_count, random_ideal_situation, random_matrix,
    sample_interior, uncovered_oracle,
};
use spatialvote::generator::{gen_even_pairs, gen_odd_plott, GeneratorConfig, Parity};
use spatialvote::geometry::{clip_line, generate_directions};
use spatialvote::line_analysis::{count_ideals_at_anchor, induced_ideal, lemma1_witness};
use spatialvote::majority::{
    certify_singleton_core, is_condorcet_winner, is_in_core, verify_proposition1,
    verify_proposition1prime, CondorcetBudget, CondorcetStatus, Prop1Options, Prop1Outcome,
};
use spatialvote::model::{PolicySpace, Voter, VotingSituation};
use spatialvote::tournament::{build_tournament, grid_alternatives};

fn even_config(index: usize, seed_base: u64) -> GeneratorConfig {
    let n_voters = [4, 6, 8][index % 3];
    let dimension = [2, 3][(index / 3) % 2];
    let ideals_at_z = [0, 1][(index / 6) % 2];
    let mut config = GeneratorConfig::new(
        Parity::Even,
        n_voters / 2,
        dimension,
        seed_base + index as u64,
    );
    config.ideals_at_z = ideals_at_z;
    config
}

fn odd_config(index: usize, seed_base: u64) -> GeneratorConfig {
    let pair_count = [1, 2, 3][index % 3];
    let dimension = [2, 3][(index / 3) % 2];
    GeneratorConfig::new(Parity::Odd, pair_count, dimension, seed_base + index as u64)
}

/// Criterion 1: 200 seeded even instances (|N| in {4,6,8}, k in {2,3},
/// 0 or 1 ideals at z) are all refuted with a validated witness in under
/// 30 seconds.
#[test]
fn criterion_1_proposition1_suite() {
    let start = Instant::now();
    for index in 0..200 {
        let config = even_config(index, 9000);
        let situation = gen_even_pairs(&config).expect("generator");
        let z = DVector::zeros(config.dimension);
        let report = verify_proposition1(
            &situation,
            &z,
            &Prop1Options {
                lines: 64,
                grid_per_axis: None,
                seed: config.seed,
            },
        )
        .expect("harness");
        match &report.outcome {
            Prop1Outcome::Refuted {
                witness, prefer_z, ..
            } => {
                // Re-validate by exhaustive voter count: no strict majority
                // for z over the witness.
                let direct = prefer_count(&situation, &z, witness);
                assert_eq!(direct, *prefer_z, "instance {index}: count mismatch");
                assert!(
                    direct < situation.majority_threshold(),
                    "instance {index}: z dominates its witness"
                );
            }
            other => panic!(
                "instance {index} (|N|={}, k={}, at_z={}): expected refutation, got {other:?}",
                situation.voter_count(),
                config.dimension,
                config.ideals_at_z
            ),
        }
    }
    let elapsed = start.elapsed();
    assert!(
        elapsed.as_secs_f64() < 30.0,
        "criterion 1 exceeded 30 s: {elapsed:?}"
    );
    println!(
        "[acceptance] criterion 1 (proposition 1 suite, 200/200 refuted): PASS ({:.2} s)",
        elapsed.as_secs_f64()
    );
}

/// Criterion 2: 200 seeded odd Plott instances (|N| in {3,5,7}, k in
/// {2,3}) all pass with 10,000 challengers and an analytic certificate in
/// under 60 seconds.
#[test]
fn criterion_2_proposition1prime_suite() {
    let start = Instant::now();
    for index in 0..200 {
        let config = odd_config(index, 5000);
        let situation = gen_odd_plott(&config).expect("generator");
        let z = DVector::zeros(config.dimension);
        let report =
            verify_proposition1prime(&situation, &z, 10_000, config.seed).expect("harness");
        assert!(
            report.passed,
            "instance {index}: failing challenger {:?}",
            report.failing_challenger
        );
        assert_eq!(report.challenges_run, 10_000, "instance {index}");
        assert!(
            report.certificate.is_some(),
            "instance {index}: missing analytic certificate"
        );
    }
    let elapsed = start.elapsed();
    assert!(
        elapsed.as_secs_f64() < 60.0,
        "criterion 2 exceeded 60 s: {elapsed:?}"
    );
    println!(
        "[acceptance] criterion 2 (proposition 1' suite, 200/200 passed): PASS ({:.2} s)",
        elapsed.as_secs_f64()
    );
}

/// Criterion 3: the two-voter edge cases. Coincident ideals give a core
/// point that is a certified Condorcet winner; distinct ideals leave the
/// whole segment between them undominated, so the singleton oracle
/// reports non-singleton.
#[test]
fn criterion_3_two_voter_edge_cases() {
    let start = Instant::now();
    let space = PolicySpace::unit_box(2);
    let z = dvector![0.2, -0.1];
    let coincident = VotingSituation::new(
        space.clone(),
        vec![Voter::euclidean(z.clone()), Voter::euclidean(z.clone())],
    )
    .unwrap();
    assert!(is_in_core(&coincident, &z).unwrap().in_core);
    let verdict =
        is_condorcet_winner(&coincident, &z, &CondorcetBudget::default(), 0).unwrap();
    assert_eq!(verdict.status, CondorcetStatus::CertifiedWinner);

    let distinct = VotingSituation::new(
        space.clone(),
        vec![
            Voter::euclidean(dvector![-0.5, 0.0]),
            Voter::euclidean(dvector![0.5, 0.0]),
        ],
    )
    .unwrap();
    let report = certify_singleton_core(&distinct, &dvector![0.0, 0.0], 41, 0).unwrap();
    assert!(!report.singleton, "distinct ideals must not certify");
    // The whole segment between the ideals is undominated on the grid:
    // grid points on the segment have no grid dominator.
    let grid = space.grid(41);
    for step in -10i32..=10 {
        let g = dvector![0.05 * step as f64, 0.0];
        let dominated = grid
            .iter()
            .any(|y| (y - &g).norm() > 1e-12 && majority_prefers(&distinct, y, &g));
        assert!(!dominated, "segment point {g:?} dominated on the grid");
    }
    println!(
        "[acceptance] criterion 3 (two-voter edge cases): PASS ({:.2} s)",
        start.elapsed().as_secs_f64()
    );
}

/// Criterion 4: the directional core criterion agrees with the 41x41
/// grid-dominance oracle on 50 instances x 100 interior points.
#[test]
fn criterion_4_core_criterion_vs_grid_oracle() {
    let start = Instant::now();
    let mut agreements = 0usize;
    for index in 0..50 {
        let seed = 700 + index as u64;
        let situation = match index % 3 {
            0 => random_ideal_situation(2, [3, 5, 7][(index / 3) % 3], seed),
            1 => gen_odd_plott(&GeneratorConfig::new(
                Parity::Odd,
                [1, 2, 3][(index / 3) % 3],
                2,
                seed,
            ))
            .unwrap(),
            _ => {
                let mut config = GeneratorConfig::new(
                    Parity::Even,
                    [1, 2, 3][(index / 3) % 3],
                    2,
                    seed,
                );
                config.ideals_at_z = 2;
                gen_even_pairs(&config).unwrap()
            }
        };
        let z_gen = DVector::zeros(2);
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xa5a5_a5a5);
        for point_index in 0..100 {
            let z = sample_interior(&situation, &mut rng);
            let verdict = is_in_core(&situation, &z).unwrap();
            let oracle_dominated =
                grid_dominates(&situation, &z, 41, std::slice::from_ref(&z_gen));
            assert_eq!(
                verdict.in_core, !oracle_dominated,
                "instance {index}, point {point_index}: criterion {} vs oracle {} at {:?}",
                verdict.in_core, !oracle_dominated, z.as_slice()
            );
            agreements += 1;
        }
    }
    assert_eq!(agreements, 5000);
    println!(
        "[acceptance] criterion 4 (core criterion vs grid oracle, 5000/5000 agree): PASS ({:.2} s)",
        start.elapsed().as_secs_f64()
    );
}

/// Criterion 5: the witness mechanism. Every voter whose induced ideal
/// lies strictly on the witness's side strictly prefers the witness, and
/// z-preferrers never exceed half the voters.
#[test]
fn criterion_5_lemma1_mechanism() {
    let start = Instant::now();
    let mut witnesses = 0usize;
    for index in 0..40 {
        let config = even_config(index, 3100);
        let situation = gen_even_pairs(&config).expect("generator");
        let z = DVector::zeros(config.dimension);
        for direction in generate_directions(config.dimension, 8, config.seed) {
            let line = clip_line(situation.space(), &z, &direction).unwrap();
            let report = count_ideals_at_anchor(&situation, &line).unwrap();
            let Some(witness) = lemma1_witness(&situation, &z, &line).unwrap() else {
                continue;
            };
            witnesses += 1;
            let t_witness = direction.dot(&(&witness - &z));
            let eps = line.eps_point();
            for (voter_index, voter) in situation.voters().iter().enumerate() {
                let peak = induced_ideal(voter, &line).unwrap().t_star;
                let on_witness_side = if t_witness > 0.0 {
                    peak > eps
                } else {
                    peak < -eps
                };
                if on_witness_side {
                    assert!(
                        voter.evaluate_utility(&witness).unwrap()
                            > voter.evaluate_utility(&z).unwrap(),
                        "instance {index}, voter {voter_index}: side voter must strictly prefer the witness"
                    );
                }
            }
            let z_preferrers = prefer_count(&situation, &z, &witness);
            assert!(
                z_preferrers <= situation.half_count(),
                "instance {index}: {z_preferrers} z-preferrers exceed |N|/2"
            );
            let _ = report;
        }
    }
    assert!(witnesses >= 200, "only {witnesses} witnesses exercised");
    println!(
        "[acceptance] criterion 5 (witness mechanism, {witnesses} witnesses): PASS ({:.2} s)",
        start.elapsed().as_secs_f64()
    );
}

/// Criterion 6: the finite-grid contrast. Even singleton-core instances
/// have no grid Condorcet winner and the uncovered set is not {z}; odd
/// Plott instances have z as grid Condorcet winner and uncovered set {z}.
#[test]
fn criterion_6_grid_tournament_contrast() {
    let start = Instant::now();
    let z = dvector![0.0, 0.0];
    for index in 0..20 {
        let mut config = even_config(index, 4200);
        config.dimension = 2;
        let situation = gen_even_pairs(&config).expect("generator");
        let alternatives = grid_alternatives(situation.space(), 21, std::slice::from_ref(&z));
        let t = build_tournament(&situation, alternatives).unwrap();
        let z_index = t
            .alternatives()
            .iter()
            .position(|a| (a - &z).norm() <= situation.eps_point())
            .expect("z injected");
        assert_eq!(
            t.finite_condorcet(),
            None,
            "even instance {index}: unexpected grid Condorcet winner"
        );
        assert_ne!(
            t.gillies_uncovered(),
            vec![z_index],
            "even instance {index}: uncovered set collapsed to z"
        );
    }
    for index in 0..20 {
        let mut config = odd_config(index, 4300);
        config.dimension = 2;
        let situation = gen_odd_plott(&config).expect("generator");
        let alternatives = grid_alternatives(situation.space(), 21, std::slice::from_ref(&z));
        let t = build_tournament(&situation, alternatives).unwrap();
        let z_index = t
            .alternatives()
            .iter()
            .position(|a| (a - &z).norm() <= situation.eps_point())
            .expect("z injected");
        assert_eq!(
            t.finite_condorcet(),
            Some(z_index),
            "odd instance {index}: z is not the grid Condorcet winner"
        );
        assert_eq!(
            t.gillies_uncovered(),
            vec![z_index],
            "odd instance {index}: uncovered set is not {{z}}"
        );
    }
    println!(
        "[acceptance] criterion 6 (grid tournaments, 20 even + 20 odd): PASS ({:.2} s)",
        start.elapsed().as_secs_f64()
    );
}

/// Criterion 7: oracle equivalence. The uncovered set matches the
/// independent triple-loop oracle on 50 random matrices, and tournament
/// counts match a per-pair exhaustive recomputation.
#[test]
fn criterion_7_oracle_equivalence() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(1234);
    for round in 0..50 {
        let m = rng.gen_range(2..=40);
        let voters = rng.gen_range(3..=7);
        let t = random_matrix(m, voters, &mut rng);
        assert_eq!(
            t.gillies_uncovered(),
            uncovered_oracle(&t),
            "round {round}: uncovered set disagrees with the oracle"
        );
    }
    // Per-pair recomputation of tournament counts on spatial instances.
    for seed in 0..5 {
        let situation = random_ideal_situation(2, 5, 40 + seed);
        let mut rng = ChaCha8Rng::seed_from_u64(90 + seed);
        let alternatives: Vec<_> = (0..10)
            .map(|_| situation.space().sample(&mut rng))
            .collect();
        let t = build_tournament(&situation, alternatives.clone()).unwrap();
        for a in 0..alternatives.len() {
            for b in 0..alternatives.len() {
                let direct = if a == b {
                    0
                } else {
                    prefer_count(&situation, &alternatives[a], &alternatives[b])
                };
                assert_eq!(t.pref(a, b), direct, "count mismatch at ({a},{b})");
            }
        }
    }
    println!(
        "[acceptance] criterion 7 (uncovered oracle + count recomputation): PASS ({:.2} s)",
        start.elapsed().as_secs_f64()
    );
}

/// Criterion 8: numerical hygiene. Gradients match central finite
/// differences on 1000 random voter/point pairs; induced ideals match a
/// one-dimensional grid search on 100 voter/line pairs.
#[test]
fn criterion_8_numerical_hygiene() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(777);
    for round in 0..1000 {
        let k = if round % 2 == 0 { 2 } else { 3 };
        let a = DMatrix::<f64>::from_fn(k, k, |_, _| rng.gen_range(-1.0..1.0));
        let metric = &a.transpose() * &a + DMatrix::identity(k, k) * 0.1;
        let voter = Voter::new(
            DVector::from_fn(k, |_, _| rng.gen_range(-0.9..0.9)),
            metric,
        )
        .unwrap();
        let x = DVector::from_fn(k, |_, _| rng.gen_range(-1.0..1.0));
        let gradient = voter.gradient(&x).unwrap();
        let h = 1e-5;
        for i in 0..k {
            let mut xp = x.clone();
            let mut xm = x.clone();
            xp[i] += h;
            xm[i] -= h;
            let fd = (voter.evaluate_utility(&xp).unwrap()
                - voter.evaluate_utility(&xm).unwrap())
                / (2.0 * h);
            assert!(
                (gradient[i] - fd).abs() <= 1e-6,
                "round {round}: component {i} differs from finite difference by {}",
                (gradient[i] - fd).abs()
            );
        }
    }

    let space = PolicySpace::unit_box(2);
    let mut checked = 0;
    while checked < 100 {
        let voter = Voter::euclidean(dvector![
            rng.gen_range(-0.9..0.9),
            rng.gen_range(-0.9..0.9)
        ]);
        let anchor = dvector![rng.gen_range(-0.6..0.6), rng.gen_range(-0.6..0.6)];
        let direction = dvector![rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)];
        if direction.norm() < 0.1 {
            continue;
        }
        let line = clip_line(&space, &anchor, &direction).unwrap();
        let closed_form = induced_ideal(&voter, &line).unwrap().t_star;
        let steps = 10_000;
        let mut best_t = line.t_min();
        let mut best_u = f64::NEG_INFINITY;
        for i in 0..=steps {
            let t = line.t_min() + (line.t_max() - line.t_min()) * i as f64 / steps as f64;
            let u = voter.evaluate_utility(&line.point_at(t)).unwrap();
            if u > best_u {
                best_u = u;
                best_t = t;
            }
        }
        assert!(
            (closed_form - best_t).abs() <= 1e-3,
            "induced ideal {closed_form} vs grid search {best_t}"
        );
        checked += 1;
    }
    println!(
        "[acceptance] criterion 8 (numerical hygiene): PASS ({:.2} s)",
        start.elapsed().as_secs_f64()
    );
}
