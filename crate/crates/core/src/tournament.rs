//! Majority tournaments over finite alternative sets.
//!
//! A [`TournamentMatrix`] stores, for every ordered pair of alternatives,
//! the number of voters strictly preferring the first to the second.
//! Strict dominance `a > b` holds when that count is a strict majority;
//! indifferent voters never break ties, so dominance is irreflexive and
//! asymmetric but not necessarily complete.
//!
//! The covering relation used here is the Gillies one: `x` covers `y` when
//! `x` beats `y` and everything that beats `x` also beats `y`. The
//! uncovered set is the set of alternatives covered by nothing; since
//! covering is a strict partial order on a finite set, it is never empty.

// Pairwise counts are cross-indexed (pref[a][b] vs pref[b][a]); plain
// index loops read better than enumerate contortions here.
#![allow(clippy::needless_range_loop)]

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{Point, PolicySpace, VotingSituation};

#[derive(Debug, Clone)]
pub struct TournamentMatrix {
    alternatives: Vec<Point>,
    /// `pref[a][b]` = number of voters with `u(a) > u(b)`.
    pref: Vec<Vec<usize>>,
    voter_count: usize,
}

/// Serialized form: alternatives as coordinate arrays, counts row-major.
#[derive(Debug, Serialize, Deserialize)]
struct TournamentFile {
    voter_count: usize,
    alternatives: Vec<Vec<f64>>,
    pref: Vec<Vec<usize>>,
}

impl TournamentMatrix {
    /// Build from precomputed counts, validating the matrix invariants.
    pub fn from_counts(
        alternatives: Vec<Point>,
        pref: Vec<Vec<usize>>,
        voter_count: usize,
    ) -> Result<Self> {
        let m = alternatives.len();
        if pref.len() != m || pref.iter().any(|row| row.len() != m) {
            return Err(Error::Tournament(format!(
                "preference matrix must be {m}x{m}"
            )));
        }
        for a in 0..m {
            if pref[a][a] != 0 {
                return Err(Error::Tournament(format!(
                    "diagonal entry ({a},{a}) must be zero"
                )));
            }
            for b in 0..m {
                if pref[a][b] + pref[b][a] > voter_count {
                    return Err(Error::Tournament(format!(
                        "counts for pair ({a},{b}) exceed the voter count"
                    )));
                }
            }
        }
        Ok(Self {
            alternatives,
            pref,
            voter_count,
        })
    }

    /// All pairwise strict-preference counts for the given alternatives.
    ///
    /// Alternatives must be pairwise distinct (beyond the space tolerance)
    /// and contained in the space.
    pub fn build(situation: &VotingSituation, alternatives: Vec<Point>) -> Result<Self> {
        let eps = situation.eps_point();
        for (i, a) in alternatives.iter().enumerate() {
            if !situation.space().contains(a) {
                return Err(Error::Tournament(format!(
                    "alternative {i} lies outside the policy space"
                )));
            }
            for (j, b) in alternatives.iter().enumerate().skip(i + 1) {
                if (a - b).norm() <= eps {
                    return Err(Error::Tournament(format!(
                        "alternatives {i} and {j} coincide"
                    )));
                }
            }
        }
        let m = alternatives.len();
        let utilities: Vec<Vec<f64>> = alternatives
            .iter()
            .map(|a| {
                situation
                    .voters()
                    .iter()
                    .map(|v| v.evaluate_utility(a).expect("validated dimensions"))
                    .collect()
            })
            .collect();
        let mut pref = vec![vec![0usize; m]; m];
        for a in 0..m {
            for b in (a + 1)..m {
                for voter in 0..situation.voter_count() {
                    if utilities[a][voter] > utilities[b][voter] {
                        pref[a][b] += 1;
                    } else if utilities[b][voter] > utilities[a][voter] {
                        pref[b][a] += 1;
                    }
                }
            }
        }
        Ok(Self {
            alternatives,
            pref,
            voter_count: situation.voter_count(),
        })
    }

    pub fn len(&self) -> usize {
        self.alternatives.len()
    }

    pub fn is_empty(&self) -> bool {
        self.alternatives.is_empty()
    }

    pub fn alternatives(&self) -> &[Point] {
        &self.alternatives
    }

    pub fn voter_count(&self) -> usize {
        self.voter_count
    }

    pub fn pref(&self, a: usize, b: usize) -> usize {
        self.pref[a][b]
    }

    /// Strict majority dominance on the finite set.
    pub fn beats(&self, a: usize, b: usize) -> bool {
        2 * self.pref[a][b] > self.voter_count
    }

    /// Alternatives beaten by nothing.
    pub fn finite_core(&self) -> Vec<usize> {
        (0..self.len())
            .filter(|&y| !(0..self.len()).any(|x| self.beats(x, y)))
            .collect()
    }

    /// The alternative beating all others, if any.
    pub fn finite_condorcet(&self) -> Option<usize> {
        (0..self.len()).find(|&x| (0..self.len()).all(|y| y == x || self.beats(x, y)))
    }

    /// Gillies covering: `x` beats `y` and inherits all of `y`'s dominators.
    pub fn covers(&self, x: usize, y: usize) -> bool {
        self.beats(x, y)
            && (0..self.len()).all(|w| !self.beats(w, x) || self.beats(w, y))
    }

    /// Alternatives covered by no other alternative.
    pub fn gillies_uncovered(&self) -> Vec<usize> {
        (0..self.len())
            .filter(|&y| !(0..self.len()).any(|x| x != y && self.covers(x, y)))
            .collect()
    }

    pub fn to_json_string(&self) -> String {
        let file = TournamentFile {
            voter_count: self.voter_count,
            alternatives: self
                .alternatives
                .iter()
                .map(|p| p.iter().copied().collect())
                .collect(),
            pref: self.pref.clone(),
        };
        serde_json::to_string_pretty(&file).expect("tournament serialization cannot fail")
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        let file: TournamentFile = serde_json::from_str(text).map_err(|source| Error::Parse {
            path: "<tournament>".into(),
            source,
        })?;
        Self::from_counts(
            file.alternatives
                .into_iter()
                .map(nalgebra::DVector::from_vec)
                .collect(),
            file.pref,
            file.voter_count,
        )
    }
}

/// Convenience: build a tournament from the situation with the standard
/// pairwise counting.
pub fn build_tournament(
    situation: &VotingSituation,
    alternatives: Vec<Point>,
) -> Result<TournamentMatrix> {
    TournamentMatrix::build(situation, alternatives)
}

/// Axis-uniform grid of alternatives with extra points injected exactly.
///
/// Grid points within the space tolerance of an injected point are replaced
/// by it, so a candidate core point is always one of the alternatives.
pub fn grid_alternatives(space: &PolicySpace, per_axis: usize, inject: &[Point]) -> Vec<Point> {
    let eps = space.eps_point();
    let mut points = space.grid(per_axis);
    for extra in inject {
        if !space.contains(extra) {
            continue;
        }
        match points.iter_mut().find(|p| (&**p - extra).norm() <= eps) {
            Some(slot) => *slot = extra.clone(),
            None => points.push(extra.clone()),
        }
    }
    points
}
