//! The voting situation: policy space, voters, and quadratic utilities.
//!
//! A [`PolicySpace`] is a compact, convex, full-dimensional subset of R^k —
//! either an axis-aligned box or a ball. A [`Voter`] holds an ideal point
//! and a symmetric positive-definite metric `M`; utility is the strictly
//! concave quadratic form `u(x) = -(x - ideal)' M (x - ideal)`, maximized
//! uniquely at the ideal. A [`VotingSituation`] bundles the space with an
//! ordered voter list and derives the majority threshold.
//!
//! All types are immutable after construction; every operation is a pure
//! function of its inputs.

use std::fs;
use std::path::Path;

use nalgebra::{Cholesky, DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A point (or vector) in R^k.
pub type Point = DVector<f64>;

/// Default scale for the point-equality tolerance: `eps_point` is this
/// scale times the space diameter.
pub const DEFAULT_EPS_SCALE: f64 = 1e-8;

/// Tolerance for the metric symmetry check.
const METRIC_SYMMETRY_TOL: f64 = 1e-12;

// ---------------------------------------------------------------------------
// Policy space
// ---------------------------------------------------------------------------

/// Shape of the feasible policy set.
#[derive(Debug, Clone)]
pub enum SpaceShape {
    /// Axis-aligned box with per-axis bounds, `lower[i] < upper[i]`.
    Box { lower: Point, upper: Point },
    /// Closed ball of positive radius.
    Ball { center: Point, radius: f64 },
}

/// Compact, convex, full-dimensional policy space.
#[derive(Debug, Clone)]
pub struct PolicySpace {
    shape: SpaceShape,
    eps_scale: f64,
}

impl PolicySpace {
    /// The centered unit box `[-1, 1]^k`.
    pub fn unit_box(dimension: usize) -> Self {
        let lower = DVector::from_element(dimension, -1.0);
        let upper = DVector::from_element(dimension, 1.0);
        Self::bounded_box(lower, upper).expect("unit box is valid")
    }

    /// Axis-aligned box from per-axis bounds.
    pub fn bounded_box(lower: Point, upper: Point) -> Result<Self> {
        if lower.is_empty() {
            return Err(Error::InvalidSpace("dimension must be at least 1".into()));
        }
        if lower.len() != upper.len() {
            return Err(Error::DimensionMismatch {
                expected: lower.len(),
                got: upper.len(),
            });
        }
        for i in 0..lower.len() {
            if !lower[i].is_finite() || !upper[i].is_finite() || lower[i] >= upper[i] {
                return Err(Error::InvalidSpace(format!(
                    "axis {i}: need finite lower < upper, got [{}, {}]",
                    lower[i], upper[i]
                )));
            }
        }
        Ok(Self {
            shape: SpaceShape::Box { lower, upper },
            eps_scale: DEFAULT_EPS_SCALE,
        })
    }

    /// Closed ball with the given center and radius.
    pub fn ball(center: Point, radius: f64) -> Result<Self> {
        if center.is_empty() {
            return Err(Error::InvalidSpace("dimension must be at least 1".into()));
        }
        if !radius.is_finite() || radius <= 0.0 {
            return Err(Error::InvalidSpace(format!(
                "ball radius must be positive and finite, got {radius}"
            )));
        }
        Ok(Self {
            shape: SpaceShape::Ball { center, radius },
            eps_scale: DEFAULT_EPS_SCALE,
        })
    }

    /// Override the point-tolerance scale (default [`DEFAULT_EPS_SCALE`]).
    pub fn with_eps_scale(mut self, scale: f64) -> Self {
        self.eps_scale = scale;
        self
    }

    pub fn shape(&self) -> &SpaceShape {
        &self.shape
    }

    pub fn dimension(&self) -> usize {
        match &self.shape {
            SpaceShape::Box { lower, .. } => lower.len(),
            SpaceShape::Ball { center, .. } => center.len(),
        }
    }

    /// Euclidean diameter of the space.
    pub fn diameter(&self) -> f64 {
        match &self.shape {
            SpaceShape::Box { lower, upper } => (upper - lower).norm(),
            SpaceShape::Ball { radius, .. } => 2.0 * radius,
        }
    }

    /// Absolute tolerance for point-equality comparisons, scaled by the
    /// space diameter.
    pub fn eps_point(&self) -> f64 {
        self.eps_scale * self.diameter()
    }

    /// Signed boundary measure: negative inside, zero on the boundary,
    /// positive outside. Per-axis for boxes, radial for balls.
    fn signed_boundary(&self, p: &Point) -> f64 {
        match &self.shape {
            SpaceShape::Box { lower, upper } => {
                let mut worst = f64::NEG_INFINITY;
                for i in 0..lower.len() {
                    worst = worst.max(lower[i] - p[i]).max(p[i] - upper[i]);
                }
                worst
            }
            SpaceShape::Ball { center, radius } => (p - center).norm() - radius,
        }
    }

    /// Membership in the closed set, up to `eps_point` past the boundary.
    pub fn contains(&self, p: &Point) -> bool {
        p.len() == self.dimension() && self.signed_boundary(p) <= self.eps_point()
    }

    /// Strict interiority, by more than `eps_point`. Implies [`contains`](Self::contains).
    pub fn is_interior(&self, p: &Point) -> bool {
        p.len() == self.dimension() && self.signed_boundary(p) < -self.eps_point()
    }

    /// Smallest axis-aligned box containing the space.
    pub fn bounding_box(&self) -> (Point, Point) {
        match &self.shape {
            SpaceShape::Box { lower, upper } => (lower.clone(), upper.clone()),
            SpaceShape::Ball { center, radius } => (
                center.map(|c| c - radius),
                center.map(|c| c + radius),
            ),
        }
    }

    /// Geometric center (box center or ball center).
    pub fn center(&self) -> Point {
        match &self.shape {
            SpaceShape::Box { lower, upper } => (lower + upper) / 2.0,
            SpaceShape::Ball { center, .. } => center.clone(),
        }
    }

    /// Uniform sample from the space (rejection sampling for balls).
    pub fn sample(&self, rng: &mut impl rand::Rng) -> Point {
        let (lower, upper) = self.bounding_box();
        loop {
            let p = DVector::from_fn(self.dimension(), |i, _| {
                rng.gen_range(lower[i]..=upper[i])
            });
            if self.contains(&p) {
                return p;
            }
        }
    }

    /// Axis-uniform lattice over the bounding box, restricted to the space.
    ///
    /// `per_axis` points per axis, endpoints included. For boxes this is the
    /// full lattice; for balls, lattice points outside the ball are dropped.
    pub fn grid(&self, per_axis: usize) -> Vec<Point> {
        assert!(per_axis >= 2, "grid needs at least 2 points per axis");
        let k = self.dimension();
        let (lower, upper) = self.bounding_box();
        let coords: Vec<Vec<f64>> = (0..k)
            .map(|i| {
                (0..per_axis)
                    .map(|j| lower[i] + (upper[i] - lower[i]) * j as f64 / (per_axis - 1) as f64)
                    .collect()
            })
            .collect();
        let mut points = Vec::new();
        let mut index = vec![0usize; k];
        loop {
            let p = DVector::from_fn(k, |i, _| coords[i][index[i]]);
            if self.contains(&p) {
                points.push(p);
            }
            // odometer increment
            let mut axis = 0;
            loop {
                if axis == k {
                    return points;
                }
                index[axis] += 1;
                if index[axis] < per_axis {
                    break;
                }
                index[axis] = 0;
                axis += 1;
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Voter
// ---------------------------------------------------------------------------

/// A voter with ideal point `ideal` and SPD metric `M`; utility
/// `u(x) = -(x - ideal)' M (x - ideal)`.
#[derive(Debug, Clone)]
pub struct Voter {
    ideal: Point,
    metric: DMatrix<f64>,
}

impl Voter {
    /// Construct with an explicit metric, validating symmetry and positive
    /// definiteness (via a successful Cholesky factorization).
    pub fn new(ideal: Point, metric: DMatrix<f64>) -> Result<Self> {
        let k = ideal.len();
        if metric.nrows() != k || metric.ncols() != k {
            return Err(Error::DimensionMismatch {
                expected: k,
                got: metric.nrows().max(metric.ncols()),
            });
        }
        for i in 0..k {
            for j in (i + 1)..k {
                if (metric[(i, j)] - metric[(j, i)]).abs() > METRIC_SYMMETRY_TOL {
                    return Err(Error::InvalidVoter {
                        index: 0,
                        reason: format!(
                            "metric not symmetric at ({i},{j}): {} vs {}",
                            metric[(i, j)],
                            metric[(j, i)]
                        ),
                    });
                }
            }
        }
        if Cholesky::new(metric.clone()).is_none() {
            return Err(Error::InvalidVoter {
                index: 0,
                reason: "metric is not positive definite".into(),
            });
        }
        Ok(Self { ideal, metric })
    }

    /// Euclidean voter (identity metric).
    pub fn euclidean(ideal: Point) -> Self {
        let k = ideal.len();
        Self {
            ideal,
            metric: DMatrix::identity(k, k),
        }
    }

    pub fn ideal(&self) -> &Point {
        &self.ideal
    }

    pub fn metric(&self) -> &DMatrix<f64> {
        &self.metric
    }

    pub fn dimension(&self) -> usize {
        self.ideal.len()
    }

    fn check_dimension(&self, x: &Point) -> Result<()> {
        if x.len() != self.ideal.len() {
            return Err(Error::DimensionMismatch {
                expected: self.ideal.len(),
                got: x.len(),
            });
        }
        Ok(())
    }

    /// `u(x) = -(x - ideal)' M (x - ideal)`. Zero exactly at the ideal,
    /// strictly negative elsewhere.
    pub fn evaluate_utility(&self, x: &Point) -> Result<f64> {
        self.check_dimension(x)?;
        // Allocation-free quadratic form; this sits in every counting loop.
        let k = self.ideal.len();
        let mut total = 0.0;
        for i in 0..k {
            let di = x[i] - self.ideal[i];
            let mut row = 0.0;
            for j in 0..k {
                row += self.metric[(i, j)] * (x[j] - self.ideal[j]);
            }
            total += di * row;
        }
        Ok(-total)
    }

    /// Gradient `-2 M (x - ideal)`; the zero vector exactly at the ideal.
    pub fn gradient(&self, x: &Point) -> Result<Point> {
        self.check_dimension(x)?;
        let d = x - &self.ideal;
        Ok(-2.0 * (&self.metric * d))
    }

    /// Membership of `candidate` in the upper contour set at `base`:
    /// `u(candidate) >= u(base)`, compared exactly on computed values.
    pub fn in_upper_contour(&self, base: &Point, candidate: &Point) -> Result<bool> {
        Ok(self.evaluate_utility(candidate)? >= self.evaluate_utility(base)?)
    }
}

// ---------------------------------------------------------------------------
// Voting situation
// ---------------------------------------------------------------------------

/// A spatial voting situation under simple majority rule: the policy space
/// together with an ordered list of voters.
#[derive(Debug, Clone)]
pub struct VotingSituation {
    space: PolicySpace,
    voters: Vec<Voter>,
}

impl VotingSituation {
    /// Validates that there is at least one voter, that dimensions agree,
    /// and that every ideal lies in the space (the first violation is
    /// reported with its voter index).
    pub fn new(space: PolicySpace, voters: Vec<Voter>) -> Result<Self> {
        if voters.is_empty() {
            return Err(Error::NoVoters);
        }
        for (index, v) in voters.iter().enumerate() {
            if v.dimension() != space.dimension() {
                return Err(Error::InvalidVoter {
                    index,
                    reason: format!(
                        "ideal has dimension {}, space has dimension {}",
                        v.dimension(),
                        space.dimension()
                    ),
                });
            }
            if !space.contains(v.ideal()) {
                return Err(Error::InvalidVoter {
                    index,
                    reason: "ideal lies outside the policy space".into(),
                });
            }
        }
        Ok(Self { space, voters })
    }

    pub fn space(&self) -> &PolicySpace {
        &self.space
    }

    pub fn voters(&self) -> &[Voter] {
        &self.voters
    }

    pub fn dimension(&self) -> usize {
        self.space.dimension()
    }

    pub fn voter_count(&self) -> usize {
        self.voters.len()
    }

    pub fn has_even_voters(&self) -> bool {
        self.voters.len().is_multiple_of(2)
    }

    /// `n = floor(|N| / 2)`.
    pub fn half_count(&self) -> usize {
        self.voters.len() / 2
    }

    /// Least coalition size that is a strict majority: `floor(|N|/2) + 1`.
    pub fn majority_threshold(&self) -> usize {
        self.voters.len() / 2 + 1
    }

    pub fn eps_point(&self) -> f64 {
        self.space.eps_point()
    }
}

// ---------------------------------------------------------------------------
// Coalition
// ---------------------------------------------------------------------------

/// A set of voters, stored as sorted distinct indices.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Coalition(Vec<usize>);

impl Coalition {
    pub fn new(mut indices: Vec<usize>, voter_count: usize) -> Result<Self> {
        indices.sort_unstable();
        for pair in indices.windows(2) {
            if pair[0] == pair[1] {
                return Err(Error::InvalidCoalition(format!(
                    "duplicate voter index {}",
                    pair[0]
                )));
            }
        }
        if let Some(&last) = indices.last() {
            if last >= voter_count {
                return Err(Error::InvalidCoalition(format!(
                    "voter index {last} out of range for {voter_count} voters"
                )));
            }
        }
        Ok(Self(indices))
    }

    pub fn members(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

// ---------------------------------------------------------------------------
// Instance files
// ---------------------------------------------------------------------------

/// On-disk instance schema. The metric accepts either a flat row-major
/// array of k*k entries or k rows of k entries; omitted means identity.
#[derive(Debug, Serialize, Deserialize)]
struct InstanceFile {
    dimension: usize,
    space: SpaceSpec,
    voters: Vec<VoterSpec>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
enum SpaceSpec {
    Box { lower: Vec<f64>, upper: Vec<f64> },
    Ball { center: Vec<f64>, radius: f64 },
}

#[derive(Debug, Serialize, Deserialize)]
struct VoterSpec {
    ideal: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    metric: Option<MetricSpec>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(untagged)]
enum MetricSpec {
    Rows(Vec<Vec<f64>>),
    Flat(Vec<f64>),
}

impl MetricSpec {
    fn to_matrix(&self, k: usize, index: usize) -> Result<DMatrix<f64>> {
        let flat: Vec<f64> = match self {
            MetricSpec::Flat(v) => v.clone(),
            MetricSpec::Rows(rows) => {
                for (r, row) in rows.iter().enumerate() {
                    if row.len() != k {
                        return Err(Error::InvalidVoter {
                            index,
                            reason: format!("metric row {r} has {} entries, expected {k}", row.len()),
                        });
                    }
                }
                rows.iter().flatten().copied().collect()
            }
        };
        if flat.len() != k * k {
            return Err(Error::InvalidVoter {
                index,
                reason: format!("metric has {} entries, expected {}", flat.len(), k * k),
            });
        }
        Ok(DMatrix::from_row_slice(k, k, &flat))
    }
}

impl VotingSituation {
    /// Parse an instance from JSON text, validating all invariants.
    pub fn from_json_str(text: &str) -> Result<Self> {
        Self::from_json_str_with_eps(text, DEFAULT_EPS_SCALE)
    }

    /// Parse with an explicit point-tolerance scale.
    pub fn from_json_str_with_eps(text: &str, eps_scale: f64) -> Result<Self> {
        let file: InstanceFile = serde_json::from_str(text).map_err(|source| Error::Parse {
            path: "<instance>".into(),
            source,
        })?;
        let k = file.dimension;
        let space = match file.space {
            SpaceSpec::Box { lower, upper } => {
                if lower.len() != k || upper.len() != k {
                    return Err(Error::InvalidSpace(format!(
                        "box bounds have dimensions {}/{}, expected {k}",
                        lower.len(),
                        upper.len()
                    )));
                }
                PolicySpace::bounded_box(DVector::from_vec(lower), DVector::from_vec(upper))?
            }
            SpaceSpec::Ball { center, radius } => {
                if center.len() != k {
                    return Err(Error::InvalidSpace(format!(
                        "ball center has dimension {}, expected {k}",
                        center.len()
                    )));
                }
                PolicySpace::ball(DVector::from_vec(center), radius)?
            }
        };
        let space = space.with_eps_scale(eps_scale);
        let mut voters = Vec::with_capacity(file.voters.len());
        for (index, spec) in file.voters.iter().enumerate() {
            if spec.ideal.len() != k {
                return Err(Error::InvalidVoter {
                    index,
                    reason: format!("ideal has dimension {}, expected {k}", spec.ideal.len()),
                });
            }
            let ideal = DVector::from_vec(spec.ideal.clone());
            let voter = match &spec.metric {
                None => Voter::euclidean(ideal),
                Some(m) => Voter::new(ideal, m.to_matrix(k, index)?).map_err(|e| match e {
                    Error::InvalidVoter { reason, .. } => Error::InvalidVoter { index, reason },
                    other => other,
                })?,
            };
            voters.push(voter);
        }
        Self::new(space, voters)
    }

    /// Serialize to the instance JSON schema.
    pub fn to_json_string(&self) -> String {
        let space = match self.space.shape() {
            SpaceShape::Box { lower, upper } => SpaceSpec::Box {
                lower: lower.iter().copied().collect(),
                upper: upper.iter().copied().collect(),
            },
            SpaceShape::Ball { center, radius } => SpaceSpec::Ball {
                center: center.iter().copied().collect(),
                radius: *radius,
            },
        };
        let k = self.dimension();
        let identity = DMatrix::<f64>::identity(k, k);
        let voters = self
            .voters
            .iter()
            .map(|v| VoterSpec {
                ideal: v.ideal().iter().copied().collect(),
                metric: if v.metric() == &identity {
                    None
                } else {
                    Some(MetricSpec::Rows(
                        (0..k)
                            .map(|i| (0..k).map(|j| v.metric()[(i, j)]).collect())
                            .collect(),
                    ))
                },
            })
            .collect();
        let file = InstanceFile {
            dimension: k,
            space,
            voters,
        };
        serde_json::to_string_pretty(&file).expect("instance serialization cannot fail")
    }

    /// Load an instance file from disk.
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::load_with_eps(path, DEFAULT_EPS_SCALE)
    }

    pub fn load_with_eps(path: impl AsRef<Path>, eps_scale: f64) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::from_json_str_with_eps(&text, eps_scale).map_err(|e| match e {
            Error::Parse { source, .. } => Error::Parse {
                path: path.display().to_string(),
                source,
            },
            other => other,
        })
    }

    /// Write the instance to disk in the JSON schema.
    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        fs::write(path, self.to_json_string()).map_err(|source| Error::Io {
            path: path.display().to_string(),
            source,
        })
    }
}

/// Serde adapters mapping `DVector<f64>` to plain JSON arrays.
pub(crate) mod point_serde {
    use super::Point;
    use nalgebra::DVector;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(p: &Point, s: S) -> std::result::Result<S::Ok, S::Error> {
        p.iter().copied().collect::<Vec<f64>>().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Point, D::Error> {
        Ok(DVector::from_vec(Vec::<f64>::deserialize(d)?))
    }

    pub mod option {
        use super::*;

        pub fn serialize<S: Serializer>(
            p: &Option<Point>,
            s: S,
        ) -> std::result::Result<S::Ok, S::Error> {
            p.as_ref()
                .map(|p| p.iter().copied().collect::<Vec<f64>>())
                .serialize(s)
        }

        #[allow(dead_code)] // kept symmetric with serialize for report consumers
        pub fn deserialize<'de, D: Deserializer<'de>>(
            d: D,
        ) -> std::result::Result<Option<Point>, D::Error> {
            Ok(Option::<Vec<f64>>::deserialize(d)?.map(DVector::from_vec))
        }
    }
}
