//! Induced ideal points on clipped lines and pair-at-anchor counting.
//!
//! Restricted to a line segment, each quadratic utility is single-peaked;
//! the peak (the induced ideal point) has the closed form
//! `t* = clamp(d' M (ideal - z) / (d' M d), t_min, t_max)` for anchor `z`
//! and unit direction `d`. Counting how many voters peak exactly at the
//! anchor versus on either open half-line is integer bookkeeping, and when
//! fewer than two voters peak at the anchor of an even-voter situation the
//! midpoint toward the innermost peak on the majority side is a policy the
//! anchor fails to beat.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{distance, ClippedLine};
use crate::model::{point_serde, Point, Voter, VotingSituation};

/// Peak of one voter's utility on a clipped line.
#[derive(Debug, Clone, Serialize)]
pub struct InducedIdeal {
    /// Parameter of the peak, in `[t_min, t_max]`.
    pub t_star: f64,
    /// `line.point_at(t_star)`.
    #[serde(with = "point_serde")]
    pub point: Point,
    /// Whether the peak parameter is within `eps` of the anchor.
    pub at_anchor: bool,
}

/// Classification of every voter's induced ideal relative to the anchor,
/// plus the constructed witness when one exists.
#[derive(Debug, Clone, Serialize)]
pub struct Lemma1Report {
    pub line: ClippedLine,
    /// Induced ideals in voter order.
    pub induced: Vec<InducedIdeal>,
    pub count_at_anchor: usize,
    pub plus_count: usize,
    pub minus_count: usize,
    #[serde(with = "point_serde::option")]
    pub witness: Option<Point>,
}

/// The unique maximizer of the voter's utility on the clipped segment.
pub fn induced_ideal(voter: &Voter, line: &ClippedLine) -> Result<InducedIdeal> {
    if voter.dimension() != line.anchor().len() {
        return Err(Error::DimensionMismatch {
            expected: line.anchor().len(),
            got: voter.dimension(),
        });
    }
    let d = line.direction();
    let md = voter.metric() * d;
    let denom = d.dot(&md);
    // M is positive definite and d is a unit vector, so denom > 0.
    let t_unconstrained = md.dot(&(voter.ideal() - line.anchor())) / denom;
    let t_star = t_unconstrained.clamp(line.t_min(), line.t_max());
    Ok(InducedIdeal {
        t_star,
        point: line.point_at(t_star),
        at_anchor: t_star.abs() <= line.eps_point(),
    })
}

/// Induced ideals of all voters, in voter order.
pub fn induced_ideals(situation: &VotingSituation, line: &ClippedLine) -> Result<Vec<InducedIdeal>> {
    situation
        .voters()
        .iter()
        .map(|v| induced_ideal(v, line))
        .collect()
}

/// Classify every voter's induced ideal as at-anchor / plus / minus.
///
/// The anchor must be interior to the space. The returned report carries
/// counts only (`witness` is `None`); see [`lemma1_witness`].
pub fn count_ideals_at_anchor(
    situation: &VotingSituation,
    line: &ClippedLine,
) -> Result<Lemma1Report> {
    if !situation.space().is_interior(line.anchor()) {
        return Err(Error::NotInterior);
    }
    let induced = induced_ideals(situation, line)?;
    let eps = line.eps_point();
    let mut count_at_anchor = 0;
    let mut plus_count = 0;
    let mut minus_count = 0;
    for ideal in &induced {
        if ideal.t_star.abs() <= eps {
            count_at_anchor += 1;
        } else if ideal.t_star > 0.0 {
            plus_count += 1;
        } else {
            minus_count += 1;
        }
    }
    Ok(Lemma1Report {
        line: line.clone(),
        induced,
        count_at_anchor,
        plus_count,
        minus_count,
        witness: None,
    })
}

/// Full classification report for a line through `z`, with the witness
/// filled in for even voter counts: present exactly when at most one
/// induced ideal sits at the anchor.
pub fn lemma1_report(
    situation: &VotingSituation,
    z: &Point,
    line: &ClippedLine,
) -> Result<Lemma1Report> {
    if distance(z, line.anchor())? > line.eps_point() {
        return Err(Error::AnchorMismatch);
    }
    let mut report = count_ideals_at_anchor(situation, line)?;
    if situation.has_even_voters() {
        report.witness = witness_from_report(situation, &report);
    }
    Ok(report)
}

/// Construct a point on the line that the anchor fails to beat, when fewer
/// than two induced ideals sit at the anchor.
///
/// Requires an even number of voters, an interior `z` equal to the line's
/// anchor, and (caller's responsibility) that `z` passes the core direction
/// criterion. Returns `None` when two or more induced ideals are at the
/// anchor. Otherwise, with `n = |N|/2`, takes the half-line holding at
/// least `n` induced ideals (the plus side on ties) and returns the point
/// halfway between the anchor and the innermost peak on that side. Every
/// voter peaking strictly on that side then strictly prefers the witness,
/// so at most `n` voters strictly prefer `z` and `z` does not dominate it.
pub fn lemma1_witness(
    situation: &VotingSituation,
    z: &Point,
    line: &ClippedLine,
) -> Result<Option<Point>> {
    if !situation.has_even_voters() {
        return Err(Error::RequiresEvenVoters);
    }
    Ok(lemma1_report(situation, z, line)?.witness)
}

/// Witness selection from an existing classification report.
pub(crate) fn witness_from_report(
    situation: &VotingSituation,
    report: &Lemma1Report,
) -> Option<Point> {
    if report.count_at_anchor >= 2 {
        return None;
    }
    let n = situation.half_count();
    let eps = report.line.eps_point();
    if report.plus_count >= n {
        let t_inner = report
            .induced
            .iter()
            .filter(|i| i.t_star > eps)
            .map(|i| i.t_star)
            .fold(f64::INFINITY, f64::min);
        (t_inner.is_finite()).then(|| report.line.point_at(t_inner / 2.0))
    } else if report.minus_count >= n {
        let t_inner = report
            .induced
            .iter()
            .filter(|i| i.t_star < -eps)
            .map(|i| i.t_star)
            .fold(f64::NEG_INFINITY, f64::max);
        t_inner.is_finite().then(|| report.line.point_at(t_inner / 2.0))
    } else {
        // Unreachable when count_at_anchor <= 1: the larger side holds at
        // least n of the 2n - count_at_anchor off-anchor peaks.
        None
    }
}
