//! Batch experiment runner: generate seeded instances, run the matching
//! parity harness on each, and aggregate the verdicts into a JSON report.
//!
//! Reports are deterministic functions of the config: instance `i` uses
//! seed `config.seed + i`, and results appear in instance order. The
//! `wall_clock_ms` field is the one non-reproducible datum; it is omitted
//! when `None`, which is what the byte-for-byte reproducibility test uses.

use std::fs;
use std::path::Path;
use std::time::Instant;

use nalgebra::DVector;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::generator::{generate, GeneratorConfig, Parity};
use crate::majority::{
    default_grid_per_axis, verify_proposition1, verify_proposition1prime, Prop1Options,
    Prop1Outcome,
};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub parity: Parity,
    /// Number of instances to generate and verify.
    pub instances: usize,
    pub pair_count: usize,
    pub dimension: usize,
    #[serde(default)]
    pub ideals_at_z: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_radii")]
    pub radii: (f64, f64),
    /// Line budget for the even-voter sweep.
    #[serde(default = "default_lines")]
    pub lines: usize,
    /// Challenger budget for the odd-voter harness.
    #[serde(default = "default_challenges")]
    pub challenges: usize,
    /// Singleton-certification lattice resolution (defaults by dimension).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid_per_axis: Option<usize>,
}

fn default_radii() -> (f64, f64) {
    (0.35, 0.9)
}

fn default_lines() -> usize {
    64
}

fn default_challenges() -> usize {
    10_000
}

impl ExperimentConfig {
    pub fn from_json_str(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|source| Error::Parse {
            path: "<experiment config>".into(),
            source,
        })
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.display().to_string(),
            source,
        })?;
        serde_json::from_str(&text).map_err(|source| Error::Parse {
            path: path.display().to_string(),
            source,
        })
    }
}

/// Verdict summary for one generated instance.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct InstanceResult {
    pub index: usize,
    pub seed: u64,
    pub voter_count: usize,
    pub dimension: usize,
    /// Outcome tag: `refuted` / `passed` / `assumption_not_met` /
    /// `not_falsified` / `failed`.
    pub outcome: String,
    pub passed: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub certificate: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
    pub grid_per_axis: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct Aggregate {
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct ExperimentReport {
    pub config: ExperimentConfig,
    pub results: Vec<InstanceResult>,
    pub aggregate: Aggregate,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wall_clock_ms: Option<u64>,
}

impl ExperimentReport {
    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization cannot fail")
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|source| Error::Parse {
            path: "<experiment report>".into(),
            source,
        })
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        fs::write(path, self.to_json_string()).map_err(|source| Error::Io {
            path: path.display().to_string(),
            source,
        })
    }

    /// Copy with the volatile timing removed; two runs of the same config
    /// serialize identically after this.
    pub fn without_wall_clock(&self) -> Self {
        Self {
            wall_clock_ms: None,
            ..self.clone()
        }
    }
}

/// Run the configured verifier over all generated instances.
pub fn run_experiment(config: &ExperimentConfig) -> Result<ExperimentReport> {
    let start = Instant::now();
    let grid_per_axis = config
        .grid_per_axis
        .unwrap_or_else(|| default_grid_per_axis(config.dimension));
    let mut results = Vec::with_capacity(config.instances);
    for index in 0..config.instances {
        let seed = config.seed.wrapping_add(index as u64);
        let mut gen_config = GeneratorConfig::new(config.parity, config.pair_count, config.dimension, seed);
        gen_config.radii = config.radii;
        if config.parity == Parity::Even {
            gen_config.ideals_at_z = config.ideals_at_z;
        }
        let situation = generate(&gen_config)?;
        let z = DVector::zeros(config.dimension);
        let result = match config.parity {
            Parity::Even => {
                let report = verify_proposition1(
                    &situation,
                    &z,
                    &Prop1Options {
                        lines: config.lines,
                        grid_per_axis: Some(grid_per_axis),
                        seed,
                    },
                )?;
                match report.outcome {
                    Prop1Outcome::Refuted {
                        witness,
                        prefer_z,
                        prefer_witness,
                        ..
                    } => InstanceResult {
                        index,
                        seed,
                        voter_count: situation.voter_count(),
                        dimension: config.dimension,
                        outcome: "refuted".into(),
                        passed: true,
                        witness: Some(witness.iter().copied().collect()),
                        certificate: None,
                        detail: Some(format!(
                            "prefer z: {prefer_z}, prefer witness: {prefer_witness}"
                        )),
                        grid_per_axis,
                    },
                    Prop1Outcome::AssumptionNotMet { clause } => InstanceResult {
                        index,
                        seed,
                        voter_count: situation.voter_count(),
                        dimension: config.dimension,
                        outcome: "assumption_not_met".into(),
                        passed: false,
                        witness: None,
                        certificate: None,
                        detail: Some(clause),
                        grid_per_axis,
                    },
                    Prop1Outcome::NotFalsified => InstanceResult {
                        index,
                        seed,
                        voter_count: situation.voter_count(),
                        dimension: config.dimension,
                        outcome: "not_falsified".into(),
                        passed: false,
                        witness: None,
                        certificate: None,
                        detail: None,
                        grid_per_axis,
                    },
                }
            }
            Parity::Odd => {
                let report = verify_proposition1prime(&situation, &z, config.challenges, seed)?;
                InstanceResult {
                    index,
                    seed,
                    voter_count: situation.voter_count(),
                    dimension: config.dimension,
                    outcome: if report.passed { "passed" } else { "failed" }.into(),
                    passed: report.passed,
                    witness: report
                        .failing_challenger
                        .map(|p| p.iter().copied().collect()),
                    certificate: report.certificate,
                    detail: None,
                    grid_per_axis,
                }
            }
        };
        results.push(result);
    }
    let passed = results.iter().filter(|r| r.passed).count();
    Ok(ExperimentReport {
        config: config.clone(),
        aggregate: Aggregate {
            total: results.len(),
            passed,
            failed: results.len() - passed,
        },
        results,
        wall_clock_ms: Some(start.elapsed().as_millis() as u64),
    })
}
