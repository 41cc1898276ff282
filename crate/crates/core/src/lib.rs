//! Analysis of multidimensional spatial majority voting.
//!
//! A voting situation couples a compact convex policy space with a set of
//! voters, each holding a strictly concave quadratic utility peaked at an
//! ideal point. Under simple majority rule this crate computes:
//!
//! - pairwise dominance verdicts with supporting coalitions ([`majority::dominates`]),
//! - core membership for interior points via an exact directional sweep in
//!   two dimensions and a seeded direction sample in higher dimensions
//!   ([`majority::is_in_core`]),
//! - Condorcet-winner status with analytic certificates for recognized
//!   symmetric configurations and constructive falsification through
//!   induced-ideal counting on swept lines ([`majority::is_condorcet_winner`]),
//! - the even-voter and odd-voter verification harnesses
//!   ([`majority::verify_proposition1`], [`majority::verify_proposition1prime`]),
//! - finite-alternative tournaments with the Gillies uncovered set
//!   ([`tournament`]),
//! - seeded instance generators, a batch experiment runner, and SVG
//!   rendering for two-dimensional instances ([`generator`], [`experiment`],
//!   [`render`]).
//!
//! All operations are pure functions over immutable inputs and are
//! deterministic for a fixed seed.

pub mod error;
pub mod experiment;
pub mod generator;
pub mod geometry;
pub mod line_analysis;
pub mod majority;
pub mod model;
pub mod render;
pub mod tournament;

pub use error::{Error, Result};
pub use geometry::{clip_line, distance, generate_directions, ClippedLine, HalfLinePair};
pub use line_analysis::{count_ideals_at_anchor, induced_ideal, lemma1_witness, Lemma1Report};
pub use majority::{
    certify_singleton_core, dominates, is_condorcet_winner, is_in_core, verify_proposition1,
    verify_proposition1prime, CondorcetBudget, CondorcetStatus, CondorcetVerdict, CoreVerdict,
    DominanceVerdict,
};
pub use model::{Coalition, Point, PolicySpace, Voter, VotingSituation};
pub use tournament::TournamentMatrix;
