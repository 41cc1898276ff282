//! Lines through a point, clipped to the policy space.
//!
//! A [`ClippedLine`] is parametrized as `point(t) = anchor + t * direction`
//! with a unit direction and the anchor at `t = 0`, so the two half-lines at
//! the anchor are simply the sign ranges of the parameter. Boxes are clipped
//! by per-axis slab intersection, balls by the quadratic formula; both are
//! exact up to floating point.

use nalgebra::DVector;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{point_serde, Point, PolicySpace, SpaceShape};

/// Directions closer than this (in `1 - |dot|`) count as parallel.
const PARALLEL_TOL: f64 = 1e-10;

/// Fraction of the even spacing used for the deterministic 2-D jitter.
pub const JITTER_FRACTION: f64 = 0.25;

/// A maximal segment of a line inside the policy space, anchored at `t = 0`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ClippedLine {
    #[serde(with = "point_serde")]
    anchor: Point,
    #[serde(with = "point_serde")]
    direction: Point,
    t_min: f64,
    t_max: f64,
    /// Point tolerance inherited from the space the line was clipped against.
    eps_point: f64,
}

impl ClippedLine {
    pub fn anchor(&self) -> &Point {
        &self.anchor
    }

    /// Unit direction vector.
    pub fn direction(&self) -> &Point {
        &self.direction
    }

    pub fn t_min(&self) -> f64 {
        self.t_min
    }

    pub fn t_max(&self) -> f64 {
        self.t_max
    }

    pub fn eps_point(&self) -> f64 {
        self.eps_point
    }

    /// `anchor + t * direction`.
    pub fn point_at(&self, t: f64) -> Point {
        &self.anchor + &self.direction * t
    }

    pub fn param_in_range(&self, t: f64) -> bool {
        t >= self.t_min && t <= self.t_max
    }
}

/// The two closed half-lines obtained by splitting at the anchor; they
/// intersect exactly at parameter 0.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HalfLinePair {
    /// Parameter range `[0, t_max]`.
    pub plus: (f64, f64),
    /// Parameter range `[t_min, 0]`.
    pub minus: (f64, f64),
}

/// Clip the line through `z` with the given direction against the space.
///
/// Returns the maximal parameter interval whose image lies in the space;
/// the direction is normalized. Errors if `z` is outside the space or the
/// direction is zero.
pub fn clip_line(space: &PolicySpace, z: &Point, direction: &Point) -> Result<ClippedLine> {
    let k = space.dimension();
    if z.len() != k {
        return Err(Error::DimensionMismatch {
            expected: k,
            got: z.len(),
        });
    }
    if direction.len() != k {
        return Err(Error::DimensionMismatch {
            expected: k,
            got: direction.len(),
        });
    }
    if !space.contains(z) {
        return Err(Error::OutsideSpace);
    }
    let norm = direction.norm();
    if norm <= f64::EPSILON {
        return Err(Error::ZeroDirection);
    }
    let d = direction / norm;

    let (mut t_min, mut t_max) = match space.shape() {
        SpaceShape::Box { lower, upper } => {
            let mut lo = f64::NEG_INFINITY;
            let mut hi = f64::INFINITY;
            for i in 0..k {
                if d[i].abs() <= f64::EPSILON {
                    // Parallel to this slab; containment of z already checked.
                    continue;
                }
                let a = (lower[i] - z[i]) / d[i];
                let b = (upper[i] - z[i]) / d[i];
                lo = lo.max(a.min(b));
                hi = hi.min(a.max(b));
            }
            (lo, hi)
        }
        SpaceShape::Ball { center, radius } => {
            // |z + t d - c|^2 = r^2 with |d| = 1:
            // t^2 + 2 b t + c0 = 0, b = d.(z - c), c0 = |z - c|^2 - r^2.
            let w = z - center;
            let b = d.dot(&w);
            let c0 = w.norm_squared() - radius * radius;
            let disc = (b * b - c0).max(0.0);
            let root = disc.sqrt();
            (-b - root, -b + root)
        }
    };
    // z is contained, so 0 belongs to the interval up to rounding.
    t_min = t_min.min(0.0);
    t_max = t_max.max(0.0);

    Ok(ClippedLine {
        anchor: z.clone(),
        direction: d,
        t_min,
        t_max,
        eps_point: space.eps_point(),
    })
}

/// Split a clipped line into its two half-lines at the anchor.
pub fn split_half_lines(line: &ClippedLine) -> HalfLinePair {
    HalfLinePair {
        plus: (0.0, line.t_max),
        minus: (line.t_min, 0.0),
    }
}

/// Euclidean distance between two points of equal dimension.
pub fn distance(a: &Point, b: &Point) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::DimensionMismatch {
            expected: a.len(),
            got: b.len(),
        });
    }
    Ok((a - b).norm())
}

/// Deterministic family of unit directions, one line each.
///
/// For `k = 2`: `count` evenly spaced angles in `[0, pi)` plus a seeded
/// jitter of at most [`JITTER_FRACTION`] of the spacing, so distinct calls
/// with one seed reproduce exactly and no two directions are parallel.
/// For `k >= 3`: normalized Gaussian draws canonicalized to the half-sphere
/// with positive first nonzero coordinate; near-parallel draws are rejected.
/// For `k = 1` there is a single line through any point, so the one
/// direction `[1]` is returned regardless of `count`.
pub fn generate_directions(k: usize, count: usize, seed: u64) -> Vec<Point> {
    assert!(k >= 1, "dimension must be at least 1");
    assert!(count >= 1, "direction count must be at least 1");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    match k {
        1 => vec![DVector::from_vec(vec![1.0])],
        2 => {
            let spacing = std::f64::consts::PI / count as f64;
            (0..count)
                .map(|m| {
                    let jitter = rng.gen_range(0.0..JITTER_FRACTION) * spacing;
                    let angle = m as f64 * spacing + jitter;
                    DVector::from_vec(vec![angle.cos(), angle.sin()])
                })
                .collect()
        }
        _ => {
            let mut dirs: Vec<Point> = Vec::with_capacity(count);
            while dirs.len() < count {
                let mut v = DVector::from_fn(k, |_, _| {
                    // Box-Muller from two uniforms.
                    let u1: f64 = rng.gen_range(f64::MIN_POSITIVE..1.0);
                    let u2: f64 = rng.gen_range(0.0..1.0);
                    (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
                });
                let norm = v.norm();
                if norm < 1e-12 {
                    continue;
                }
                v /= norm;
                // Canonical half-sphere: first nonzero coordinate positive.
                if let Some(lead) = v.iter().find(|c| c.abs() > 1e-15) {
                    if *lead < 0.0 {
                        v = -v;
                    }
                }
                if dirs.iter().any(|w| 1.0 - v.dot(w).abs() < PARALLEL_TOL) {
                    continue;
                }
                dirs.push(v);
            }
            dirs
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use nalgebra::dvector;
    use proptest::prelude::*;

    fn unit_box2() -> PolicySpace {
        PolicySpace::unit_box(2)
    }

    #[test]
    fn clip_axis_aligned_box() {
        let line = clip_line(&unit_box2(), &dvector![0.0, 0.0], &dvector![1.0, 0.0]).unwrap();
        assert_relative_eq!(line.t_min(), -1.0);
        assert_relative_eq!(line.t_max(), 1.0);
    }

    #[test]
    fn clip_shifted_anchor() {
        let line = clip_line(&unit_box2(), &dvector![0.5, 0.0], &dvector![1.0, 0.0]).unwrap();
        assert_relative_eq!(line.t_min(), -1.5);
        assert_relative_eq!(line.t_max(), 0.5);
    }

    #[test]
    fn clip_ball_diameter() {
        let ball = PolicySpace::ball(dvector![0.0, 0.0], 1.0).unwrap();
        let line = clip_line(&ball, &dvector![0.0, 0.0], &dvector![1.0, 1.0]).unwrap();
        assert_relative_eq!(line.t_min(), -1.0, epsilon = 1e-12);
        assert_relative_eq!(line.t_max(), 1.0, epsilon = 1e-12);
        assert_relative_eq!(line.direction().norm(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn clip_diagonal_box_hits_corner() {
        let line = clip_line(&unit_box2(), &dvector![0.0, 0.0], &dvector![1.0, 1.0]).unwrap();
        let end = line.point_at(line.t_max());
        assert_relative_eq!(end[0], 1.0, epsilon = 1e-12);
        assert_relative_eq!(end[1], 1.0, epsilon = 1e-12);
    }

    #[test]
    fn clip_rejects_outside_anchor_and_zero_direction() {
        assert!(matches!(
            clip_line(&unit_box2(), &dvector![2.0, 0.0], &dvector![1.0, 0.0]),
            Err(Error::OutsideSpace)
        ));
        assert!(matches!(
            clip_line(&unit_box2(), &dvector![0.0, 0.0], &dvector![0.0, 0.0]),
            Err(Error::ZeroDirection)
        ));
    }

    #[test]
    fn clip_at_corner_is_degenerate() {
        // Anchored at a corner with both rays leaving the box immediately:
        // the intersection is the single anchor point.
        let line = clip_line(&unit_box2(), &dvector![1.0, 1.0], &dvector![1.0, -1.0]).unwrap();
        assert_relative_eq!(line.t_min(), 0.0, epsilon = 1e-9);
        assert_relative_eq!(line.t_max(), 0.0, epsilon = 1e-9);
        let halves = split_half_lines(&line);
        assert_eq!(halves.plus, (0.0, line.t_max()));
        assert_eq!(halves.minus, (line.t_min(), 0.0));
    }

    #[test]
    fn split_ranges() {
        let line = clip_line(&unit_box2(), &dvector![0.5, 0.0], &dvector![1.0, 0.0]).unwrap();
        let halves = split_half_lines(&line);
        assert_eq!(halves.plus, (0.0, 0.5));
        assert_eq!(halves.minus, (-1.5, 0.0));
        // The two ranges cover [t_min, t_max] and overlap exactly at 0.
        assert_eq!(halves.minus.1, halves.plus.0);
    }

    #[test]
    fn distance_examples() {
        let a = dvector![1.0, 2.0];
        assert_eq!(distance(&a, &a).unwrap(), 0.0);
        assert_eq!(
            distance(&dvector![0.0, 0.0], &dvector![1.0, 0.0]).unwrap(),
            1.0
        );
        assert_eq!(
            distance(&dvector![1.0, 2.0], &dvector![4.0, 6.0]).unwrap(),
            5.0
        );
        assert!(distance(&dvector![0.0], &dvector![0.0, 0.0]).is_err());
    }

    #[test]
    fn line_points_stay_in_space() {
        let spaces = [
            PolicySpace::unit_box(2),
            PolicySpace::ball(dvector![0.1, -0.2], 0.7).unwrap(),
        ];
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for space in &spaces {
            for dir in generate_directions(2, 8, 17) {
                let z = space.center();
                let line = clip_line(space, &z, &dir).unwrap();
                for _ in 0..100 {
                    let t = rng.gen_range(line.t_min()..=line.t_max());
                    assert!(space.contains(&line.point_at(t)));
                }
                // Endpoints lie on the boundary (or at the box extremes).
                assert!(space.contains(&line.point_at(line.t_min())));
                assert!(space.contains(&line.point_at(line.t_max())));
                assert!(!space.is_interior(&line.point_at(line.t_max() + 10.0 * space.eps_point())));
            }
        }
    }

    #[test]
    fn directions_2d_evenly_spaced_with_bounded_jitter() {
        let dirs = generate_directions(2, 2, 0);
        let spacing = std::f64::consts::PI / 2.0;
        for (m, d) in dirs.iter().enumerate() {
            let angle = d[1].atan2(d[0]).rem_euclid(std::f64::consts::PI);
            let base = m as f64 * spacing;
            assert!(
                angle >= base - 1e-12 && angle <= base + JITTER_FRACTION * spacing,
                "angle {angle} out of jitter band around {base}"
            );
        }
    }

    #[test]
    fn directions_deterministic_and_nonparallel() {
        for k in [2usize, 3, 4] {
            let a = generate_directions(k, 32, 42);
            let b = generate_directions(k, 32, 42);
            assert_eq!(a.len(), 32);
            for (x, y) in a.iter().zip(&b) {
                assert_eq!(x, y);
            }
            for i in 0..a.len() {
                for j in (i + 1)..a.len() {
                    assert!(1.0 - a[i].dot(&a[j]).abs() >= PARALLEL_TOL);
                }
            }
        }
    }

    #[test]
    fn directions_3d_unit_norm_and_canonical() {
        let dirs = generate_directions(3, 100, 9);
        for d in &dirs {
            assert_relative_eq!(d.norm(), 1.0, epsilon = 1e-12);
            let lead = d.iter().find(|c| c.abs() > 1e-15).unwrap();
            assert!(*lead > 0.0);
        }
    }

    #[test]
    fn directions_1d_single_line() {
        let dirs = generate_directions(1, 10, 0);
        assert_eq!(dirs.len(), 1);
        assert_eq!(dirs[0], dvector![1.0]);
    }

    proptest! {
        #[test]
        fn distance_symmetry_and_triangle(
            ax in -5.0f64..5.0, ay in -5.0f64..5.0,
            bx in -5.0f64..5.0, by in -5.0f64..5.0,
            cx in -5.0f64..5.0, cy in -5.0f64..5.0,
        ) {
            let a = dvector![ax, ay];
            let b = dvector![bx, by];
            let c = dvector![cx, cy];
            let ab = distance(&a, &b).unwrap();
            let ba = distance(&b, &a).unwrap();
            prop_assert!((ab - ba).abs() <= 1e-12);
            let ac = distance(&a, &c).unwrap();
            let cb = distance(&c, &b).unwrap();
            prop_assert!(ab <= ac + cb + 1e-12);
        }
    }
}
