//! Shared test support: independent oracles and instance builders.
//!
//! Every oracle here recomputes its answer from first principles (raw
//! utility comparisons, exhaustive scans, finite differences) so that the
//! production implementations are checked against a separate route.
#![allow(dead_code)] // each integration test target uses a subset
#![allow(clippy::needless_range_loop)] // cross-indexed matrix loops

use nalgebra::DVector;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use spatialvote::model::{Point, PolicySpace, Voter, VotingSituation};
use spatialvote::tournament::TournamentMatrix;

/// Direct per-voter count of strict preferences for `x` over `y`.
pub fn prefer_count(situation: &VotingSituation, x: &Point, y: &Point) -> usize {
    situation
        .voters()
        .iter()
        .filter(|v| v.evaluate_utility(x).unwrap() > v.evaluate_utility(y).unwrap())
        .count()
}

/// Whether a strict majority strictly prefers `x` to `y`.
pub fn majority_prefers(situation: &VotingSituation, x: &Point, y: &Point) -> bool {
    prefer_count(situation, x, y) >= situation.majority_threshold()
}

/// Brute-force core oracle: does any point of an axis-uniform lattice
/// (plus the injected extras) dominate `z`?
pub fn grid_dominates(
    situation: &VotingSituation,
    z: &Point,
    per_axis: usize,
    inject: &[Point],
) -> bool {
    let eps = situation.eps_point();
    let mut candidates = situation.space().grid(per_axis);
    candidates.extend(inject.iter().cloned());
    candidates
        .iter()
        .any(|y| (y - z).norm() > eps && majority_prefers(situation, y, z))
}

/// Independent triple-loop uncovered-set oracle, straight from the
/// definition: x covers y when x beats y and everything beating x beats y.
pub fn uncovered_oracle(t: &TournamentMatrix) -> Vec<usize> {
    let m = t.len();
    let beats = |a: usize, b: usize| 2 * t.pref(a, b) > t.voter_count();
    let covers = |x: usize, y: usize| {
        if !beats(x, y) {
            return false;
        }
        for w in 0..m {
            if beats(w, x) && !beats(w, y) {
                return false;
            }
        }
        true
    };
    (0..m)
        .filter(|&y| !(0..m).any(|x| x != y && covers(x, y)))
        .collect()
}

/// Instance with iid uniform ideals (identity metrics) in a margin-shrunk
/// unit box.
pub fn random_ideal_situation(k: usize, voters: usize, seed: u64) -> VotingSituation {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let space = PolicySpace::unit_box(k);
    let voters = (0..voters)
        .map(|_| {
            Voter::euclidean(DVector::from_fn(k, |_, _| rng.gen_range(-0.85..0.85)))
        })
        .collect();
    VotingSituation::new(space, voters).unwrap()
}

/// Uniform interior point of the space.
pub fn sample_interior(situation: &VotingSituation, rng: &mut ChaCha8Rng) -> Point {
    loop {
        let p = situation.space().sample(rng);
        if situation.space().is_interior(&p) {
            return p;
        }
    }
}

/// Random preference matrix over `m` abstract alternatives, allowing
/// voter indifference on any pair.
pub fn random_matrix(m: usize, voters: usize, rng: &mut ChaCha8Rng) -> TournamentMatrix {
    let mut pref = vec![vec![0usize; m]; m];
    for a in 0..m {
        for b in (a + 1)..m {
            let wins = rng.gen_range(0..=voters);
            let losses = rng.gen_range(0..=(voters - wins));
            pref[a][b] = wins;
            pref[b][a] = losses;
        }
    }
    TournamentMatrix::from_counts(
        (0..m).map(|i| DVector::from_vec(vec![i as f64])).collect(),
        pref,
        voters,
    )
    .unwrap()
}
