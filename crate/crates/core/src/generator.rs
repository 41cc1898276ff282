//! Seeded instance generators for the two parity regimes.
//!
//! The even regimes are built from antipodal ideal pairs around a designated
//! point z (each pair contributes at most one strict preferrer in any
//! direction, so z sits in the core while generically no ideal coincides
//! with it); the odd regime adds one ideal exactly at z. Voter counts by
//! regime:
//!
//! - even, `ideals_at_z = 0`: `pair_count` pairs, `|N| = 2 * pair_count`
//!   (at least two distinct pair directions, or the core is a segment);
//! - even, `ideals_at_z = 1`: one ideal at z, one unpaired ideal, and
//!   `pair_count - 1` full pairs, `|N| = 2 * pair_count` — the only way to
//!   keep the count even with a single ideal at z;
//! - even, `ideals_at_z = 2`: two ideals at z plus `pair_count` pairs,
//!   `|N| = 2 * pair_count + 2` (z beats every challenger);
//! - odd: one ideal at z plus `pair_count` pairs, `|N| = 2 * pair_count + 1`.
//!
//! Pair directions keep a pairwise line angle of at least
//! [`MIN_SEPARATION_DEGREES`] so the singleton-core lattice certification
//! stays decisive at default resolution. All sampling is driven by a
//! ChaCha stream: one seed, one instance.

use nalgebra::DVector;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{Point, PolicySpace, Voter, VotingSituation};

/// Minimum pairwise angle between generated pair lines, in degrees.
pub const MIN_SEPARATION_DEGREES: f64 = 5.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

/// Configuration for the seeded generators.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GeneratorConfig {
    pub parity: Parity,
    /// Number of antipodal pairs (see the module docs for the voter count).
    pub pair_count: usize,
    pub dimension: usize,
    pub seed: u64,
    /// Core point; defaults to the origin of the centered unit box.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub z: Option<Vec<f64>>,
    /// Radii are drawn uniformly from this range.
    #[serde(default = "default_radii")]
    pub radii: (f64, f64),
    /// Number of ideals placed exactly at z (even regimes: 0, 1, or 2).
    #[serde(default)]
    pub ideals_at_z: usize,
}

fn default_radii() -> (f64, f64) {
    (0.35, 0.9)
}

impl GeneratorConfig {
    pub fn new(parity: Parity, pair_count: usize, dimension: usize, seed: u64) -> Self {
        Self {
            parity,
            pair_count,
            dimension,
            seed,
            z: None,
            radii: default_radii(),
            ideals_at_z: match parity {
                Parity::Even => 0,
                Parity::Odd => 1,
            },
        }
    }

    fn core_point(&self) -> Result<Point> {
        match &self.z {
            None => Ok(DVector::zeros(self.dimension)),
            Some(z) => {
                if z.len() != self.dimension {
                    return Err(Error::Generator(format!(
                        "z has dimension {}, expected {}",
                        z.len(),
                        self.dimension
                    )));
                }
                Ok(DVector::from_vec(z.clone()))
            }
        }
    }

    fn validate(&self) -> Result<()> {
        if self.dimension == 0 {
            return Err(Error::Generator("dimension must be at least 1".into()));
        }
        let (lo, hi) = self.radii;
        if !(lo > 0.0 && lo <= hi) {
            return Err(Error::Generator(format!(
                "radii range must satisfy 0 < lo <= hi, got ({lo}, {hi})"
            )));
        }
        Ok(())
    }
}

/// Build an instance from explicit parts: antipodal pairs `(direction,
/// radius)` through z, `centers_at_z` ideals exactly at z, and an optional
/// unpaired `(direction, radius)` ideal. Directions are normalized; every
/// ideal must land inside the space.
pub fn antipodal_instance(
    space: PolicySpace,
    z: &Point,
    pairs: &[(Point, f64)],
    centers_at_z: usize,
    lone: Option<(Point, f64)>,
) -> Result<VotingSituation> {
    if !space.contains(z) {
        return Err(Error::Generator("z lies outside the policy space".into()));
    }
    let mut voters = Vec::new();
    for _ in 0..centers_at_z {
        voters.push(Voter::euclidean(z.clone()));
    }
    let place = |direction: &Point, radius: f64| -> Result<Point> {
        let norm = direction.norm();
        if norm <= f64::EPSILON {
            return Err(Error::Generator("pair direction must be nonzero".into()));
        }
        if radius <= 0.0 {
            return Err(Error::Generator("pair radius must be positive".into()));
        }
        Ok(z + direction * (radius / norm))
    };
    for (direction, radius) in pairs {
        let plus = place(direction, *radius)?;
        let minus = z - (&plus - z);
        for ideal in [plus, minus] {
            if !space.contains(&ideal) {
                return Err(Error::Generator(format!(
                    "radius {radius} places an ideal outside the space"
                )));
            }
            voters.push(Voter::euclidean(ideal));
        }
    }
    if let Some((direction, radius)) = lone {
        let ideal = place(&direction, radius)?;
        if !space.contains(&ideal) {
            return Err(Error::Generator(format!(
                "radius {radius} places an ideal outside the space"
            )));
        }
        voters.push(Voter::euclidean(ideal));
    }
    VotingSituation::new(space, voters)
}

/// Sample `count` unit directions whose pairwise line angles (and, in two
/// dimensions, whose angles to the axes of previously drawn directions)
/// stay at least [`MIN_SEPARATION_DEGREES`] apart.
fn separated_directions(k: usize, count: usize, rng: &mut ChaCha8Rng) -> Result<Vec<Point>> {
    let cos_min = (MIN_SEPARATION_DEGREES.to_radians()).cos();
    let mut dirs: Vec<Point> = Vec::with_capacity(count);
    let mut attempts = 0;
    while dirs.len() < count {
        attempts += 1;
        if attempts > 10_000 {
            return Err(Error::Generator(format!(
                "could not place {count} directions {MIN_SEPARATION_DEGREES} degrees apart in dimension {k}"
            )));
        }
        let candidate = if k == 1 {
            DVector::from_vec(vec![1.0])
        } else {
            let v = DVector::from_fn(k, |_, _| {
                let u1: f64 = rng.gen_range(f64::MIN_POSITIVE..1.0);
                let u2: f64 = rng.gen_range(0.0..1.0);
                (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
            });
            let norm = v.norm();
            if norm < 1e-9 {
                continue;
            }
            v / norm
        };
        if dirs.iter().any(|d| d.dot(&candidate).abs() > cos_min) {
            if k == 1 {
                return Err(Error::Generator(
                    "dimension 1 admits a single pair direction".into(),
                ));
            }
            continue;
        }
        dirs.push(candidate);
    }
    Ok(dirs)
}

fn interior_radius_check(space: &PolicySpace, z: &Point, direction: &Point, radius: f64) -> Result<()> {
    for sign in [1.0, -1.0] {
        let ideal = z + direction * (sign * radius);
        if !space.is_interior(&ideal) {
            return Err(Error::Generator(format!(
                "radius {radius} places an ideal outside the interior of the space"
            )));
        }
    }
    Ok(())
}

/// Generate an even-voter instance in the centered unit box (see the
/// module docs for the regime layouts).
pub fn gen_even_pairs(config: &GeneratorConfig) -> Result<VotingSituation> {
    config.validate()?;
    if config.parity != Parity::Even {
        return Err(Error::Generator("config parity is not even".into()));
    }
    if config.ideals_at_z > 2 {
        return Err(Error::Generator(
            "even regimes support at most two ideals at z".into(),
        ));
    }
    if config.ideals_at_z <= 1 && config.pair_count < 2 {
        return Err(Error::Generator(
            "need >= 2 directions: a single antipodal pair leaves a segment of undominated points"
                .into(),
        ));
    }
    if config.ideals_at_z == 2 && config.pair_count < 1 {
        return Err(Error::Generator("need at least one pair".into()));
    }
    let space = PolicySpace::unit_box(config.dimension);
    let z = config.core_point()?;
    if !space.is_interior(&z) {
        return Err(Error::Generator("z must be interior to the space".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let (lo, hi) = config.radii;

    // One direction per full pair, plus one for the unpaired ideal in the
    // single-ideal-at-z regime.
    let full_pairs = if config.ideals_at_z == 1 {
        config.pair_count - 1
    } else {
        config.pair_count
    };
    let lone_needed = config.ideals_at_z == 1;
    let directions = separated_directions(
        config.dimension,
        full_pairs + usize::from(lone_needed),
        &mut rng,
    )?;

    let mut pairs = Vec::with_capacity(full_pairs);
    for direction in directions.iter().take(full_pairs) {
        let radius = rng.gen_range(lo..=hi);
        interior_radius_check(&space, &z, direction, radius)?;
        pairs.push((direction.clone(), radius));
    }
    let lone = if lone_needed {
        let direction = directions[full_pairs].clone();
        let radius = rng.gen_range(lo..=hi);
        interior_radius_check(&space, &z, &direction, radius)?;
        Some((direction, radius))
    } else {
        None
    };

    let centers = if config.ideals_at_z == 1 { 1 } else { config.ideals_at_z };
    antipodal_instance(space, &z, &pairs, centers, lone)
}

/// Generate an odd Plott instance: one ideal at z plus antipodal pairs.
pub fn gen_odd_plott(config: &GeneratorConfig) -> Result<VotingSituation> {
    config.validate()?;
    if config.parity != Parity::Odd {
        return Err(Error::Generator("config parity is not odd".into()));
    }
    let space = PolicySpace::unit_box(config.dimension);
    let z = config.core_point()?;
    if !space.is_interior(&z) {
        return Err(Error::Generator("z must be interior to the space".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let (lo, hi) = config.radii;
    let directions = separated_directions(config.dimension, config.pair_count, &mut rng)?;
    let mut pairs = Vec::with_capacity(config.pair_count);
    for direction in directions {
        let radius = rng.gen_range(lo..=hi);
        interior_radius_check(&space, &z, &direction, radius)?;
        pairs.push((direction, radius));
    }
    antipodal_instance(space, &z, &pairs, 1, None)
}

/// Dispatch on the configured parity.
pub fn generate(config: &GeneratorConfig) -> Result<VotingSituation> {
    match config.parity {
        Parity::Even => gen_even_pairs(config),
        Parity::Odd => gen_odd_plott(config),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::majority::{self, CondorcetBudget};
    use nalgebra::dvector;

    #[test]
    fn explicit_parts_reproduce_square_instance() {
        let sit = antipodal_instance(
            PolicySpace::unit_box(2),
            &dvector![0.0, 0.0],
            &[(dvector![1.0, 0.0], 1.0), (dvector![0.0, 1.0], 1.0)],
            0,
            None,
        )
        .unwrap();
        assert_eq!(sit.voter_count(), 4);
        let ideals: Vec<_> = sit.voters().iter().map(|v| v.ideal().clone()).collect();
        assert!(ideals.contains(&dvector![1.0, 0.0]));
        assert!(ideals.contains(&dvector![-1.0, 0.0]));
        assert!(ideals.contains(&dvector![0.0, 1.0]));
        assert!(ideals.contains(&dvector![0.0, -1.0]));
    }

    #[test]
    fn single_pair_without_centers_refused() {
        let mut config = GeneratorConfig::new(Parity::Even, 1, 2, 0);
        config.ideals_at_z = 0;
        let err = gen_even_pairs(&config).unwrap_err();
        assert!(err.to_string().contains(">= 2 directions"));
    }

    #[test]
    fn even_regime_voter_counts() {
        for (pairs, at_z, expected) in [(2, 0, 4), (3, 0, 6), (2, 1, 4), (4, 1, 8), (2, 2, 6)] {
            let mut config = GeneratorConfig::new(Parity::Even, pairs, 2, 7);
            config.ideals_at_z = at_z;
            let sit = gen_even_pairs(&config).unwrap();
            assert_eq!(sit.voter_count(), expected);
            assert!(sit.has_even_voters());
            let eps = sit.eps_point();
            let at_core = sit
                .voters()
                .iter()
                .filter(|v| v.ideal().norm() <= eps)
                .count();
            assert_eq!(at_core, at_z);
        }
    }

    #[test]
    fn odd_plott_layout() {
        let config = GeneratorConfig::new(Parity::Odd, 1, 2, 3);
        let sit = gen_odd_plott(&config).unwrap();
        assert_eq!(sit.voter_count(), 3);
        // Reproducibility: the same seed yields the identical instance.
        let again = gen_odd_plott(&config).unwrap();
        assert_eq!(sit.to_json_string(), again.to_json_string());

        // Explicit parts: one pair along the x axis at radius 1 plus the
        // center gives exactly {(0,0), (1,0), (-1,0)}.
        let explicit = antipodal_instance(
            PolicySpace::unit_box(2),
            &dvector![0.0, 0.0],
            &[(dvector![1.0, 0.0], 1.0)],
            1,
            None,
        )
        .unwrap();
        let ideals: Vec<_> = explicit.voters().iter().map(|v| v.ideal().clone()).collect();
        assert_eq!(
            ideals,
            vec![dvector![0.0, 0.0], dvector![1.0, 0.0], dvector![-1.0, 0.0]]
        );
    }

    #[test]
    fn zero_pairs_is_a_single_voter_at_z() {
        let config = GeneratorConfig::new(Parity::Odd, 0, 2, 0);
        let sit = gen_odd_plott(&config).unwrap();
        assert_eq!(sit.voter_count(), 1);
        let verdict = majority::is_condorcet_winner(
            &sit,
            &dvector![0.0, 0.0],
            &CondorcetBudget::default(),
            0,
        )
        .unwrap();
        assert_eq!(verdict.certificate.as_deref(), Some("unanimity"));
    }

    #[test]
    fn generated_even_instances_are_deterministic_and_valid() {
        for seed in 0..10 {
            let config = GeneratorConfig::new(Parity::Even, 2, 2, seed);
            let a = gen_even_pairs(&config).unwrap();
            let b = gen_even_pairs(&config).unwrap();
            assert_eq!(a.to_json_string(), b.to_json_string());
            // Round-trips through the loader.
            let reloaded = VotingSituation::from_json_str(&a.to_json_string()).unwrap();
            assert_eq!(reloaded.voter_count(), a.voter_count());
            // z is in the core by pair symmetry.
            assert!(majority::is_in_core(&a, &dvector![0.0, 0.0]).unwrap().in_core);
        }
    }

    #[test]
    fn oversized_radii_rejected() {
        let mut config = GeneratorConfig::new(Parity::Odd, 1, 2, 0);
        config.radii = (1.5, 2.0);
        assert!(gen_odd_plott(&config).is_err());
        config.radii = (0.0, 0.5);
        assert!(gen_odd_plott(&config).is_err());
    }

    #[test]
    fn pair_directions_keep_min_separation() {
        let cos_min = MIN_SEPARATION_DEGREES.to_radians().cos();
        for seed in 0..20 {
            let config = GeneratorConfig::new(Parity::Even, 4, 2, seed);
            let sit = gen_even_pairs(&config).unwrap();
            let structure_dirs: Vec<Point> = sit
                .voters()
                .iter()
                .filter(|v| v.ideal().norm() > 1e-9)
                .map(|v| v.ideal() / v.ideal().norm())
                .collect();
            for i in 0..structure_dirs.len() {
                for j in (i + 1)..structure_dirs.len() {
                    let d = structure_dirs[i].dot(&structure_dirs[j]).abs();
                    // Either the same line (antipodal partners) or separated.
                    assert!(
                        d > 1.0 - 1e-9 || d <= cos_min + 1e-12,
                        "lines at cos {d} violate separation"
                    );
                }
            }
        }
    }

    #[test]
    fn translated_core_point() {
        let mut config = GeneratorConfig::new(Parity::Odd, 1, 2, 5);
        config.z = Some(vec![0.1, -0.05]);
        config.radii = (0.3, 0.5);
        let sit = gen_odd_plott(&config).unwrap();
        let z = dvector![0.1, -0.05];
        assert!(sit
            .voters()
            .iter()
            .any(|v| (v.ideal() - &z).norm() <= sit.eps_point()));
    }
}
