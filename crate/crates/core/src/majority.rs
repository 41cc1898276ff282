//! Majority-rule solution concepts: dominance, core membership, Condorcet
//! testing, and the even/odd verification harnesses.
//!
//! Core membership of an interior point `z` is decided by a directional
//! criterion: `z` is undominated if and only if no unit direction gives a
//! strict majority of voters a strictly positive directional derivative.
//! Necessity is immediate (move a step along the direction); sufficiency
//! holds because strict concavity makes each utility's difference quotient
//! along the segment from `z` to any dominating point nonincreasing, so
//! every member of a dominating coalition has strictly positive derivative
//! toward it. In two dimensions the count as a function of the angle only
//! changes at the perpendiculars of the voters' gradients, so a sweep over
//! those critical angles and the sector midpoints is exact. In higher
//! dimensions the criterion is checked over a seeded direction sample:
//! a negative verdict is certified by its violating direction, a positive
//! verdict is sample-limited and flagged as such.

use nalgebra::DVector;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{clip_line, generate_directions, ClippedLine};
use crate::line_analysis::{count_ideals_at_anchor, witness_from_report};
use crate::model::{point_serde, Coalition, Point, VotingSituation};

// ---------------------------------------------------------------------------
// Dominance
// ---------------------------------------------------------------------------

/// Outcome of one pairwise majority comparison.
#[derive(Debug, Clone, Serialize)]
pub struct DominanceVerdict {
    /// Whether x beats y: strictly more than half the voters strictly
    /// prefer x.
    pub dominates: bool,
    pub prefer_x: usize,
    pub prefer_y: usize,
    pub indifferent: usize,
    /// The full set of strict x-preferrers, present exactly when x wins.
    pub coalition: Option<Coalition>,
}

/// Count the voters strictly preferring `x` to `y` (exact comparison of
/// computed utilities; indifference is never broken).
pub(crate) fn count_strictly_preferring(
    situation: &VotingSituation,
    x: &Point,
    y: &Point,
) -> usize {
    situation
        .voters()
        .iter()
        .filter(|v| {
            v.evaluate_utility(x).expect("dimension checked")
                > v.evaluate_utility(y).expect("dimension checked")
        })
        .count()
}

/// Majority comparison of two policies in the space.
pub fn dominates(situation: &VotingSituation, x: &Point, y: &Point) -> Result<DominanceVerdict> {
    if !situation.space().contains(x) || !situation.space().contains(y) {
        return Err(Error::OutsideSpace);
    }
    let mut prefer_x_indices = Vec::new();
    let mut prefer_y = 0;
    let mut indifferent = 0;
    for (i, v) in situation.voters().iter().enumerate() {
        let ux = v.evaluate_utility(x)?;
        let uy = v.evaluate_utility(y)?;
        if ux > uy {
            prefer_x_indices.push(i);
        } else if uy > ux {
            prefer_y += 1;
        } else {
            indifferent += 1;
        }
    }
    let prefer_x = prefer_x_indices.len();
    let wins = prefer_x >= situation.majority_threshold();
    Ok(DominanceVerdict {
        dominates: wins,
        prefer_x,
        prefer_y,
        indifferent,
        coalition: wins
            .then(|| Coalition::new(prefer_x_indices, situation.voter_count()).expect("valid")),
    })
}

// ---------------------------------------------------------------------------
// Core membership
// ---------------------------------------------------------------------------

/// How a core verdict was reached.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CoreMethod {
    /// Exhaustive over all directions (k <= 2): both verdicts are exact.
    ExactSweep,
    /// Seeded direction sample (k >= 3): a false verdict is certified by
    /// the violating direction, a true verdict means "not falsified".
    Sampled { directions: usize },
}

/// Core-membership verdict for an interior point.
#[derive(Debug, Clone, Serialize)]
pub struct CoreVerdict {
    pub in_core: bool,
    /// Unit direction along which a strict majority strictly improves,
    /// present exactly when `in_core` is false.
    #[serde(with = "point_serde::option")]
    pub violating_direction: Option<Point>,
    /// Number of voters with strictly positive directional derivative
    /// along the violating direction.
    pub positive_count: Option<usize>,
    pub method: CoreMethod,
}

/// Options for the sampled high-dimensional core check.
#[derive(Debug, Clone, Copy)]
pub struct CoreOptions {
    pub sample_directions: usize,
    pub seed: u64,
}

impl Default for CoreOptions {
    fn default() -> Self {
        Self {
            sample_directions: 4096,
            seed: 0,
        }
    }
}

/// Search for a direction along which at least `threshold` of the gradients
/// have strictly positive dot product. Exact sweep for k <= 2, sampled
/// (plus the gradients themselves as targeted candidates) for k >= 3.
fn violation_direction(
    gradients: &[Point],
    k: usize,
    threshold: usize,
    options: &CoreOptions,
) -> Option<(Point, usize)> {
    let positive_count = |v: &Point| gradients.iter().filter(|g| g.dot(v) > 0.0).count();
    match k {
        1 => {
            let plus = DVector::from_vec(vec![1.0]);
            let minus = DVector::from_vec(vec![-1.0]);
            [plus, minus]
                .into_iter()
                .map(|v| {
                    let c = positive_count(&v);
                    (v, c)
                })
                .filter(|(_, c)| *c >= threshold)
                .max_by_key(|(_, c)| *c)
        }
        2 => {
            let mut criticals: Vec<f64> = gradients
                .iter()
                .filter(|g| g.norm() > 0.0)
                .flat_map(|g| {
                    let phi = g[1].atan2(g[0]);
                    [
                        (phi + std::f64::consts::FRAC_PI_2).rem_euclid(std::f64::consts::TAU),
                        (phi - std::f64::consts::FRAC_PI_2).rem_euclid(std::f64::consts::TAU),
                    ]
                })
                .collect();
            if criticals.is_empty() {
                return None;
            }
            criticals.sort_by(f64::total_cmp);
            // Candidates: every critical angle plus every sector midpoint.
            // The count is constant on open sectors and can only dip at the
            // criticals themselves, so this covers the maximum; the widest
            // winning sector gives the most robust certificate.
            let mut best: Option<(Point, usize, f64)> = None;
            let mut consider = |angle: f64, width: f64| {
                let v = DVector::from_vec(vec![angle.cos(), angle.sin()]);
                let c = positive_count(&v);
                if c >= threshold
                    && best
                        .as_ref()
                        .map(|(_, bc, bw)| c > *bc || (c == *bc && width > *bw))
                        .unwrap_or(true)
                {
                    best = Some((v, c, width));
                }
            };
            for &theta in &criticals {
                consider(theta, 0.0);
            }
            for i in 0..criticals.len() {
                let a = criticals[i];
                let b = if i + 1 < criticals.len() {
                    criticals[i + 1]
                } else {
                    criticals[0] + std::f64::consts::TAU
                };
                consider((a + b) / 2.0, b - a);
            }
            best.map(|(v, c, _)| (v, c))
        }
        _ => {
            let mut candidates = generate_directions(k, options.sample_directions, options.seed);
            candidates.extend(
                gradients
                    .iter()
                    .filter(|g| g.norm() > 1e-15)
                    .map(|g| g / g.norm()),
            );
            for v in candidates {
                let pos = positive_count(&v);
                if pos >= threshold {
                    return Some((v, pos));
                }
                let neg = gradients.iter().filter(|g| g.dot(&v) < 0.0).count();
                if neg >= threshold {
                    return Some((-v, neg));
                }
            }
            None
        }
    }
}

/// Core membership for an interior point, with default sampling options.
pub fn is_in_core(situation: &VotingSituation, z: &Point) -> Result<CoreVerdict> {
    is_in_core_with(situation, z, &CoreOptions::default())
}

/// Core membership with explicit sampling options (relevant for k >= 3).
pub fn is_in_core_with(
    situation: &VotingSituation,
    z: &Point,
    options: &CoreOptions,
) -> Result<CoreVerdict> {
    if !situation.space().is_interior(z) {
        return Err(if situation.space().contains(z) {
            Error::NotInterior
        } else {
            Error::OutsideSpace
        });
    }
    let gradients: Vec<Point> = situation
        .voters()
        .iter()
        .map(|v| v.gradient(z))
        .collect::<Result<_>>()?;
    let k = situation.dimension();
    let threshold = situation.majority_threshold();
    let method = if k <= 2 {
        CoreMethod::ExactSweep
    } else {
        CoreMethod::Sampled {
            directions: options.sample_directions,
        }
    };
    match violation_direction(&gradients, k, threshold, options) {
        Some((v, count)) => Ok(CoreVerdict {
            in_core: false,
            violating_direction: Some(v),
            positive_count: Some(count),
            method,
        }),
        None => Ok(CoreVerdict {
            in_core: true,
            violating_direction: None,
            positive_count: None,
            method,
        }),
    }
}

// ---------------------------------------------------------------------------
// Antipodal structure recognition
// ---------------------------------------------------------------------------

/// Decomposition of the voter set relative to a point z: voters whose
/// ideals coincide with z, antipodal pairs through z sharing a metric, and
/// the unmatched rest.
#[derive(Debug, Clone)]
pub(crate) struct AntipodalStructure {
    pub centers: Vec<usize>,
    pub pairs: Vec<(usize, usize)>,
    pub unmatched: Vec<usize>,
}

pub(crate) fn antipodal_structure(situation: &VotingSituation, z: &Point) -> AntipodalStructure {
    let eps = situation.eps_point();
    let mut centers = Vec::new();
    let mut rest: Vec<usize> = Vec::new();
    for (i, v) in situation.voters().iter().enumerate() {
        if (v.ideal() - z).norm() <= eps {
            centers.push(i);
        } else {
            rest.push(i);
        }
    }
    let mut pairs = Vec::new();
    let mut unmatched = Vec::new();
    let mut used = vec![false; situation.voter_count()];
    for (pos, &i) in rest.iter().enumerate() {
        if used[i] {
            continue;
        }
        let vi = &situation.voters()[i];
        let mut partner = None;
        for &j in rest.iter().skip(pos + 1) {
            if used[j] {
                continue;
            }
            let vj = &situation.voters()[j];
            let antipodal = ((vi.ideal() - z) + (vj.ideal() - z)).norm() <= eps;
            let same_metric = (vi.metric() - vj.metric()).amax() <= 1e-9;
            if antipodal && same_metric {
                partner = Some(j);
                break;
            }
        }
        match partner {
            Some(j) => {
                used[i] = true;
                used[j] = true;
                pairs.push((i, j));
            }
            None => {
                used[i] = true;
                unmatched.push(i);
            }
        }
    }
    AntipodalStructure {
        centers,
        pairs,
        unmatched,
    }
}

/// Analytic Condorcet certificate, when the configuration supports one.
///
/// - `unanimity`: every ideal coincides with z, so every voter strictly
///   prefers z to any other policy.
/// - `antipodal-pairs`: at least one ideal at z and every other voter
///   matched in an antipodal pair sharing its metric. Each pair's summed
///   utility is strictly larger at z than at any y != z, so at least one
///   member strictly prefers z per pair; with the centers this is a strict
///   majority against every challenger.
fn analytic_certificate(situation: &VotingSituation, z: &Point) -> Option<&'static str> {
    let structure = antipodal_structure(situation, z);
    if structure.centers.len() == situation.voter_count() {
        return Some("unanimity");
    }
    if structure.unmatched.is_empty() && !structure.centers.is_empty() {
        return Some("antipodal-pairs");
    }
    None
}

// ---------------------------------------------------------------------------
// Condorcet testing
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CondorcetStatus {
    CertifiedWinner,
    CertifiedNotWinner,
    NotFalsified,
}

/// Search budget for Condorcet falsification.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct CondorcetBudget {
    /// Directions swept for the even-voter induced-ideal argument.
    pub lines: usize,
    /// Random challengers tested for any parity.
    pub challenges: usize,
}

impl Default for CondorcetBudget {
    fn default() -> Self {
        Self {
            lines: 64,
            challenges: 10_000,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CondorcetVerdict {
    pub status: CondorcetStatus,
    /// A policy z fails to beat, present exactly for `CertifiedNotWinner`.
    #[serde(with = "point_serde::option")]
    pub witness: Option<Point>,
    /// Name of the analytic argument, present exactly for `CertifiedWinner`.
    pub certificate: Option<String>,
    pub lines_used: usize,
    pub challenges_used: usize,
}

/// Decide Condorcet-winner status for z, in order: analytic certificates,
/// the even-voter line sweep, then random challengers. A returned witness
/// is always re-validated: `dominates(z, witness)` is false.
pub fn is_condorcet_winner(
    situation: &VotingSituation,
    z: &Point,
    budget: &CondorcetBudget,
    seed: u64,
) -> Result<CondorcetVerdict> {
    if !situation.space().contains(z) {
        return Err(Error::OutsideSpace);
    }
    let mut lines_used = 0;
    let mut challenges_used = 0;

    if let Some(tag) = analytic_certificate(situation, z) {
        return Ok(CondorcetVerdict {
            status: CondorcetStatus::CertifiedWinner,
            witness: None,
            certificate: Some(tag.to_string()),
            lines_used,
            challenges_used,
        });
    }

    // Even |N|: sweep lines through z and look for one with at most one
    // induced ideal at the anchor; the half-line construction then yields
    // a policy z cannot beat.
    if situation.has_even_voters() && situation.space().is_interior(z) {
        for direction in generate_directions(situation.dimension(), budget.lines, seed) {
            lines_used += 1;
            let line = clip_line(situation.space(), z, &direction)?;
            let report = count_ideals_at_anchor(situation, &line)?;
            if report.count_at_anchor <= 1 {
                if let Some(w) = witness_from_report(situation, &report) {
                    if !dominates(situation, z, &w)?.dominates {
                        return Ok(CondorcetVerdict {
                            status: CondorcetStatus::CertifiedNotWinner,
                            witness: Some(w),
                            certificate: None,
                            lines_used,
                            challenges_used,
                        });
                    }
                }
            }
        }
    }

    // Any parity: random challengers.
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let eps = situation.eps_point();
    while challenges_used < budget.challenges {
        let y = situation.space().sample(&mut rng);
        if (&y - z).norm() <= eps {
            continue;
        }
        challenges_used += 1;
        if !dominates(situation, z, &y)?.dominates {
            return Ok(CondorcetVerdict {
                status: CondorcetStatus::CertifiedNotWinner,
                witness: Some(y),
                certificate: None,
                lines_used,
                challenges_used,
            });
        }
    }

    Ok(CondorcetVerdict {
        status: CondorcetStatus::NotFalsified,
        witness: None,
        certificate: None,
        lines_used,
        challenges_used,
    })
}

// ---------------------------------------------------------------------------
// Singleton-core certification
// ---------------------------------------------------------------------------

/// Desk-scale evidence that the core is exactly {z}: every lattice point
/// other than z is shown dominated by an explicit policy, each domination
/// verified by an exhaustive per-voter count.
#[derive(Debug, Clone, Serialize)]
pub struct SingletonCoreReport {
    pub grid_per_axis: usize,
    pub points_checked: usize,
    pub singleton: bool,
    /// A lattice point no candidate dominated, present when not singleton.
    #[serde(with = "point_serde::option")]
    pub counterexample: Option<Point>,
}

/// Default certification lattice resolution by dimension.
pub fn default_grid_per_axis(dimension: usize) -> usize {
    if dimension <= 2 {
        41
    } else {
        21
    }
}

/// Step sizes (relative to the space diameter) tried when stepping from a
/// lattice point along a proposed improvement direction.
const STEP_LADDER: [f64; 8] = [1e-1, 3e-2, 1e-2, 3e-3, 1e-3, 1e-4, 1e-5, 1e-6];

pub fn certify_singleton_core(
    situation: &VotingSituation,
    z: &Point,
    grid_per_axis: usize,
    seed: u64,
) -> Result<SingletonCoreReport> {
    if !situation.space().contains(z) {
        return Err(Error::OutsideSpace);
    }
    let space = situation.space();
    let k = situation.dimension();
    let eps = situation.eps_point();
    let threshold = situation.majority_threshold();
    let diameter = space.diameter();
    let structure = antipodal_structure(situation, z);

    let (lower, upper) = space.bounding_box();
    let step: Vec<f64> = (0..k)
        .map(|i| (upper[i] - lower[i]) / (grid_per_axis - 1) as f64)
        .collect();
    let lattice_point = |index: &[usize]| -> Point {
        DVector::from_fn(k, |i, _| lower[i] + step[i] * index[i] as f64)
    };

    let beats = |y: &Point, g: &Point| -> bool {
        space.contains(y)
            && (y - g).norm() > eps
            && count_strictly_preferring(situation, y, g) >= threshold
    };

    // Improvement directions that double up an antipodal pair: the
    // component of (z - g) orthogonal, in the pair's metric, to the pair
    // axis keeps both members' derivatives equal and positive while the
    // move still points toward z for everyone else.
    let pair_directions = |g: &Point| -> Vec<Point> {
        let w = z - g;
        structure
            .pairs
            .iter()
            .filter_map(|&(i, _)| {
                let voter = &situation.voters()[i];
                let p = voter.ideal() - z;
                let mp = voter.metric() * &p;
                let denom = p.dot(&mp);
                if denom <= 0.0 {
                    return None;
                }
                let v = &w - &p * (w.dot(&mp) / denom);
                let norm = v.norm();
                (norm > 1e-12).then(|| v / norm)
            })
            .collect()
    };

    let has_verified_dominator = |index: &[usize], g: &Point| -> Result<bool> {
        // Candidate 1: z itself.
        if beats(z, g) {
            return Ok(true);
        }
        // Candidate 2: pair-orthogonal steps from g.
        for v in pair_directions(g) {
            for rel in STEP_LADDER {
                if beats(&(g + &v * (rel * diameter)), g) {
                    return Ok(true);
                }
            }
        }
        // Candidate 3: points on the segment from g toward z.
        for s in [0.5, 0.25, 0.1, 0.02] {
            if beats(&(g + (z - g) * s), g) {
                return Ok(true);
            }
        }
        // Candidate 4: neighbouring lattice points (Chebyshev distance 1).
        let mut offsets = vec![-1i64; k];
        loop {
            if !offsets.iter().all(|&o| o == 0) {
                let neighbor: Option<Vec<usize>> = (0..k)
                    .map(|i| {
                        let moved = index[i] as i64 + offsets[i];
                        (moved >= 0 && moved < grid_per_axis as i64).then_some(moved as usize)
                    })
                    .collect();
                if let Some(neighbor) = neighbor {
                    if beats(&lattice_point(&neighbor), g) {
                        return Ok(true);
                    }
                }
            }
            let mut axis = 0;
            loop {
                if axis == k {
                    break;
                }
                offsets[axis] += 1;
                if offsets[axis] <= 1 {
                    break;
                }
                offsets[axis] = -1;
                axis += 1;
            }
            if axis == k {
                break;
            }
        }
        // Candidate 5: directional-criterion proposal at g, with escalation
        // for the sampled high-dimensional search.
        let gradients: Vec<Point> = situation
            .voters()
            .iter()
            .map(|v| v.gradient(g))
            .collect::<Result<_>>()?;
        for sample in [256, 4096] {
            let options = CoreOptions {
                sample_directions: sample,
                seed,
            };
            if let Some((v, _)) = violation_direction(&gradients, k, threshold, &options) {
                for rel in STEP_LADDER {
                    if beats(&(g + &v * (rel * diameter)), g) {
                        return Ok(true);
                    }
                }
            }
            if k <= 2 {
                break;
            }
        }
        Ok(false)
    };

    let mut points_checked = 0;
    let mut index = vec![0usize; k];
    loop {
        let g = lattice_point(&index);
        if space.contains(&g) && (&g - z).norm() > eps {
            points_checked += 1;
            if !has_verified_dominator(&index, &g)? {
                return Ok(SingletonCoreReport {
                    grid_per_axis,
                    points_checked,
                    singleton: false,
                    counterexample: Some(g),
                });
            }
        }
        // odometer increment
        let mut axis = 0;
        loop {
            if axis == k {
                return Ok(SingletonCoreReport {
                    grid_per_axis,
                    points_checked,
                    singleton: true,
                    counterexample: None,
                });
            }
            index[axis] += 1;
            if index[axis] < grid_per_axis {
                break;
            }
            index[axis] = 0;
            axis += 1;
        }
    }
}

// ---------------------------------------------------------------------------
// Proposition harnesses
// ---------------------------------------------------------------------------

/// One named assumption check with its outcome.
#[derive(Debug, Clone, Serialize)]
pub struct AssumptionCheck {
    pub name: String,
    pub ok: bool,
    pub detail: String,
}

/// Result of the even-voter refutation harness.
#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum Prop1Outcome {
    /// All hypotheses held and a witness was constructed: z is certified
    /// not to be the Condorcet winner.
    Refuted {
        #[serde(with = "point_serde")]
        witness: Point,
        line: ClippedLine,
        prefer_z: usize,
        prefer_witness: usize,
        indifferent: usize,
    },
    AssumptionNotMet { clause: String },
    /// Hypotheses held but no witness line was found within budget.
    NotFalsified,
}

#[derive(Debug, Clone, Serialize)]
pub struct Prop1Report {
    pub assumptions: Vec<AssumptionCheck>,
    pub outcome: Prop1Outcome,
    pub grid_per_axis: usize,
    pub lines_swept: usize,
}

impl Prop1Report {
    pub fn refuted(&self) -> bool {
        matches!(self.outcome, Prop1Outcome::Refuted { .. })
    }
}

#[derive(Debug, Clone, Copy)]
pub struct Prop1Options {
    pub lines: usize,
    /// Certification lattice resolution; defaults by dimension.
    pub grid_per_axis: Option<usize>,
    pub seed: u64,
}

impl Default for Prop1Options {
    fn default() -> Self {
        Self {
            lines: 64,
            grid_per_axis: None,
            seed: 0,
        }
    }
}

/// Even-voter harness: verify the hypotheses (even count, interior z, core
/// membership, at most one ideal at z, singleton core at lattice scale) and
/// then construct a policy z fails to beat.
pub fn verify_proposition1(
    situation: &VotingSituation,
    z: &Point,
    options: &Prop1Options,
) -> Result<Prop1Report> {
    let grid_per_axis = options
        .grid_per_axis
        .unwrap_or_else(|| default_grid_per_axis(situation.dimension()));
    let mut assumptions = Vec::new();
    let fail = |assumptions: Vec<AssumptionCheck>, clause: &str| Prop1Report {
        assumptions,
        outcome: Prop1Outcome::AssumptionNotMet {
            clause: clause.to_string(),
        },
        grid_per_axis,
        lines_swept: 0,
    };

    let even = situation.has_even_voters();
    assumptions.push(AssumptionCheck {
        name: "even_voter_count".into(),
        ok: even,
        detail: format!("|N| = {}", situation.voter_count()),
    });
    if !even {
        return Ok(fail(assumptions, "even_voter_count"));
    }

    let interior = situation.space().is_interior(z);
    assumptions.push(AssumptionCheck {
        name: "interior_core_point".into(),
        ok: interior,
        detail: if interior {
            "z is interior to the policy space".into()
        } else {
            "z is on the boundary or outside".into()
        },
    });
    if !interior {
        return Ok(fail(assumptions, "interior_core_point"));
    }

    let core = is_in_core_with(
        situation,
        z,
        &CoreOptions {
            seed: options.seed,
            ..CoreOptions::default()
        },
    )?;
    assumptions.push(AssumptionCheck {
        name: "core_membership".into(),
        ok: core.in_core,
        detail: match (&core.violating_direction, core.positive_count) {
            (Some(_), Some(c)) => format!("violated: {c} voters improve along a direction"),
            _ => format!("no improving majority direction ({:?})", core.method),
        },
    });
    if !core.in_core {
        return Ok(fail(assumptions, "core_membership"));
    }

    let eps = situation.eps_point();
    let ideals_at_z = situation
        .voters()
        .iter()
        .filter(|v| (v.ideal() - z).norm() <= eps)
        .count();
    assumptions.push(AssumptionCheck {
        name: "at_most_one_ideal_at_z".into(),
        ok: ideals_at_z <= 1,
        detail: format!("{ideals_at_z} ideal(s) within eps of z"),
    });
    if ideals_at_z > 1 {
        return Ok(fail(assumptions, "at_most_one_ideal_at_z"));
    }

    let singleton = certify_singleton_core(situation, z, grid_per_axis, options.seed)?;
    assumptions.push(AssumptionCheck {
        name: "singleton_core".into(),
        ok: singleton.singleton,
        detail: match &singleton.counterexample {
            None => format!(
                "all {} lattice points dominated ({} per axis)",
                singleton.points_checked, grid_per_axis
            ),
            Some(p) => format!("undominated lattice point at {:?}", p.as_slice()),
        },
    });
    if !singleton.singleton {
        return Ok(fail(assumptions, "singleton_core"));
    }

    // All hypotheses hold; sweep lines for the witness.
    let mut lines_swept = 0;
    for direction in generate_directions(situation.dimension(), options.lines, options.seed) {
        lines_swept += 1;
        let line = clip_line(situation.space(), z, &direction)?;
        let report = count_ideals_at_anchor(situation, &line)?;
        if report.count_at_anchor <= 1 {
            if let Some(witness) = witness_from_report(situation, &report) {
                let verdict = dominates(situation, z, &witness)?;
                if !verdict.dominates {
                    return Ok(Prop1Report {
                        assumptions,
                        outcome: Prop1Outcome::Refuted {
                            witness,
                            line,
                            prefer_z: verdict.prefer_x,
                            prefer_witness: verdict.prefer_y,
                            indifferent: verdict.indifferent,
                        },
                        grid_per_axis,
                        lines_swept,
                    });
                }
            }
        }
    }

    Ok(Prop1Report {
        assumptions,
        outcome: Prop1Outcome::NotFalsified,
        grid_per_axis,
        lines_swept,
    })
}

/// Result of the odd-voter confirmation harness.
#[derive(Debug, Clone, Serialize)]
pub struct Prop1PrimeReport {
    pub assumptions: Vec<AssumptionCheck>,
    pub passed: bool,
    /// Analytic certificate tag when the configuration is recognized.
    pub certificate: Option<String>,
    pub challenges_run: usize,
    #[serde(with = "point_serde::option")]
    pub failing_challenger: Option<Point>,
}

/// Odd-voter harness: verify core membership of z, the necessary condition
/// that some ideal sits at an interior core point, then require z to beat
/// every sampled challenger; attaches the analytic certificate when the
/// instance matches a recognized symmetric construction.
pub fn verify_proposition1prime(
    situation: &VotingSituation,
    z: &Point,
    challenges: usize,
    seed: u64,
) -> Result<Prop1PrimeReport> {
    if situation.has_even_voters() {
        return Err(Error::RequiresOddVoters);
    }
    let mut assumptions = Vec::new();

    let interior = situation.space().is_interior(z);
    assumptions.push(AssumptionCheck {
        name: "interior_core_point".into(),
        ok: interior,
        detail: if interior {
            "z is interior to the policy space".into()
        } else {
            "z is on the boundary or outside".into()
        },
    });
    if !interior {
        return Ok(Prop1PrimeReport {
            assumptions,
            passed: false,
            certificate: None,
            challenges_run: 0,
            failing_challenger: None,
        });
    }

    let core = is_in_core_with(situation, z, &CoreOptions { seed, ..CoreOptions::default() })?;
    assumptions.push(AssumptionCheck {
        name: "core_membership".into(),
        ok: core.in_core,
        detail: match (&core.violating_direction, core.positive_count) {
            (Some(v), Some(c)) => format!(
                "violated: {c} voters improve along {:?}",
                v.as_slice()
            ),
            _ => format!("no improving majority direction ({:?})", core.method),
        },
    });
    if !core.in_core {
        return Ok(Prop1PrimeReport {
            assumptions,
            passed: false,
            certificate: None,
            challenges_run: 0,
            failing_challenger: None,
        });
    }

    // Necessary condition for odd interior core points: some voter's ideal
    // coincides with z.
    let eps = situation.eps_point();
    let ideal_at_core = situation
        .voters()
        .iter()
        .any(|v| (v.ideal() - z).norm() <= eps);
    assumptions.push(AssumptionCheck {
        name: "ideal_at_core".into(),
        ok: ideal_at_core,
        detail: if ideal_at_core {
            "a voter ideal coincides with z".into()
        } else {
            "no voter ideal within eps of z".into()
        },
    });
    if !ideal_at_core {
        return Ok(Prop1PrimeReport {
            assumptions,
            passed: false,
            certificate: None,
            challenges_run: 0,
            failing_challenger: None,
        });
    }

    let certificate = analytic_certificate(situation, z).map(str::to_string);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut challenges_run = 0;
    while challenges_run < challenges {
        let y = situation.space().sample(&mut rng);
        if (&y - z).norm() <= eps {
            continue;
        }
        challenges_run += 1;
        if !dominates(situation, z, &y)?.dominates {
            return Ok(Prop1PrimeReport {
                assumptions,
                passed: false,
                certificate,
                challenges_run,
                failing_challenger: Some(y),
            });
        }
    }

    Ok(Prop1PrimeReport {
        assumptions,
        passed: true,
        certificate,
        challenges_run,
        failing_challenger: None,
    })
}
