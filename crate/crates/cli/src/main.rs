//! Command-line driver for spatial majority voting analysis.
//!
//! Exit status: 0 whenever a verdict was reached (including "assumption
//! not met" and "not falsified"), nonzero on input or validation errors.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use nalgebra::DVector;
use serde_json::json;

use spatialvote::experiment::{run_experiment, ExperimentConfig};
use spatialvote::generator::{generate, GeneratorConfig, Parity};
use spatialvote::geometry::clip_line;
use spatialvote::majority::{
    self, CondorcetBudget, Prop1Options, Prop1Outcome,
};
use spatialvote::model::{Point, VotingSituation, DEFAULT_EPS_SCALE};
use spatialvote::render::{render_svg, RenderAnnotations};
use spatialvote::tournament::{build_tournament, grid_alternatives};

#[derive(Parser)]
#[command(
    name = "spatialvote",
    version,
    about = "Dominance, core, Condorcet, and tournament analysis for spatial majority voting"
)]
struct Cli {
    #[command(subcommand)]
    command: Commands,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ParityArg {
    Even,
    Odd,
}

impl From<ParityArg> for Parity {
    fn from(value: ParityArg) -> Self {
        match value {
            ParityArg::Even => Parity::Even,
            ParityArg::Odd => Parity::Odd,
        }
    }
}

#[derive(Subcommand)]
enum Commands {
    /// Core membership and Condorcet status of a point.
    Analyze {
        instance: PathBuf,
        /// Candidate point, comma-separated (default: the space center).
        #[arg(long)]
        z: Option<String>,
        #[arg(long, default_value_t = 64)]
        lines: usize,
        #[arg(long, default_value_t = 10_000)]
        challenges: usize,
        #[arg(long, default_value_t = DEFAULT_EPS_SCALE)]
        eps: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        json_out: Option<PathBuf>,
    },
    /// Even-voter harness: hypotheses plus a constructed witness.
    VerifyProp1 {
        instance: PathBuf,
        #[arg(long)]
        z: Option<String>,
        #[arg(long, default_value_t = 64)]
        lines: usize,
        /// Certification lattice resolution (default 41, or 21 above 2-D).
        #[arg(long)]
        grid: Option<usize>,
        #[arg(long, default_value_t = DEFAULT_EPS_SCALE)]
        eps: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        json_out: Option<PathBuf>,
    },
    /// Odd-voter harness: core checks plus challenger sampling.
    VerifyProp1prime {
        instance: PathBuf,
        #[arg(long)]
        z: Option<String>,
        #[arg(long, default_value_t = 10_000)]
        challenges: usize,
        #[arg(long, default_value_t = DEFAULT_EPS_SCALE)]
        eps: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        json_out: Option<PathBuf>,
    },
    /// Finite tournament over a grid of alternatives.
    Tournament {
        instance: PathBuf,
        /// Grid points per axis.
        #[arg(long, default_value_t = 21)]
        grid: usize,
        /// Extra alternative injected exactly (default: the space center).
        #[arg(long)]
        z: Option<String>,
        #[arg(long, default_value_t = DEFAULT_EPS_SCALE)]
        eps: f64,
        #[arg(long)]
        json_out: Option<PathBuf>,
    },
    /// Generate a seeded instance file.
    Generate {
        #[arg(long, value_enum)]
        parity: ParityArg,
        #[arg(long)]
        pairs: usize,
        #[arg(long, default_value_t = 2)]
        dim: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Ideals placed exactly at z (even regimes: 0, 1, or 2).
        #[arg(long, default_value_t = 0)]
        ideals_at_z: usize,
        /// Radii range as "lo,hi".
        #[arg(long)]
        radii: Option<String>,
        #[arg(long)]
        z: Option<String>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Render a 2-D instance to SVG.
    Render {
        instance: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Mark a core point.
        #[arg(long)]
        z: Option<String>,
        /// Mark a witness policy.
        #[arg(long)]
        witness: Option<String>,
        /// Draw the line through z with this direction.
        #[arg(long)]
        line: Option<String>,
        #[arg(long, default_value_t = DEFAULT_EPS_SCALE)]
        eps: f64,
    },
    /// Run a batch experiment from a JSON config.
    Experiment {
        config: PathBuf,
        #[arg(long)]
        json_out: Option<PathBuf>,
    },
}

fn parse_point(text: &str, dimension: usize) -> Result<Point> {
    let coords: Vec<f64> = text
        .split(',')
        .map(|c| c.trim().parse::<f64>().context("invalid coordinate"))
        .collect::<Result<_>>()?;
    if coords.len() != dimension {
        bail!(
            "point has {} coordinates, instance has dimension {}",
            coords.len(),
            dimension
        );
    }
    Ok(DVector::from_vec(coords))
}

fn resolve_z(arg: &Option<String>, situation: &VotingSituation) -> Result<Point> {
    match arg {
        Some(text) => parse_point(text, situation.dimension()),
        None => Ok(situation.space().center()),
    }
}

fn write_json(path: &Option<PathBuf>, value: &serde_json::Value) -> Result<()> {
    if let Some(path) = path {
        fs::write(path, serde_json::to_string_pretty(value)?)
            .with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(())
}

fn load_instance(path: &Path, eps: f64) -> Result<VotingSituation> {
    VotingSituation::load_with_eps(path, eps)
        .with_context(|| format!("loading instance {}", path.display()))
}

fn main() -> Result<()> {
    match Cli::parse().command {
        Commands::Analyze {
            instance,
            z,
            lines,
            challenges,
            eps,
            seed,
            json_out,
        } => {
            let sit = load_instance(&instance, eps)?;
            let z = resolve_z(&z, &sit)?;
            let core = if sit.space().is_interior(&z) {
                let verdict = majority::is_in_core(&sit, &z)?;
                println!(
                    "core: {}",
                    if verdict.in_core {
                        "z is in the core".to_string()
                    } else {
                        format!(
                            "z is dominated ({} voters improve along a common direction)",
                            verdict.positive_count.unwrap_or(0)
                        )
                    }
                );
                serde_json::to_value(&verdict)?
            } else {
                println!("core: skipped (z is not interior to the space)");
                json!({ "skipped": "z is not interior to the space" })
            };
            let budget = CondorcetBudget { lines, challenges };
            let condorcet = majority::is_condorcet_winner(&sit, &z, &budget, seed)?;
            println!(
                "condorcet: {:?}{}{}",
                condorcet.status,
                condorcet
                    .certificate
                    .as_deref()
                    .map(|c| format!(" (certificate: {c})"))
                    .unwrap_or_default(),
                condorcet
                    .witness
                    .as_ref()
                    .map(|w| format!(" (witness: {:?})", w.as_slice()))
                    .unwrap_or_default(),
            );
            write_json(
                &json_out,
                &json!({
                    "z": z.as_slice(),
                    "core": core,
                    "condorcet": serde_json::to_value(&condorcet)?,
                }),
            )?;
        }
        Commands::VerifyProp1 {
            instance,
            z,
            lines,
            grid,
            eps,
            seed,
            json_out,
        } => {
            let sit = load_instance(&instance, eps)?;
            let z = resolve_z(&z, &sit)?;
            let report = majority::verify_proposition1(
                &sit,
                &z,
                &Prop1Options {
                    lines,
                    grid_per_axis: grid,
                    seed,
                },
            )?;
            for check in &report.assumptions {
                println!(
                    "assumption {}: {} ({})",
                    check.name,
                    if check.ok { "ok" } else { "FAILED" },
                    check.detail
                );
            }
            match &report.outcome {
                Prop1Outcome::Refuted {
                    witness,
                    prefer_z,
                    prefer_witness,
                    ..
                } => println!(
                    "outcome: refuted — z is not the Condorcet winner; witness {:?} (prefer z: {prefer_z}, prefer witness: {prefer_witness})",
                    witness.as_slice()
                ),
                Prop1Outcome::AssumptionNotMet { clause } => {
                    println!("outcome: assumption not met: {clause}")
                }
                Prop1Outcome::NotFalsified => println!("outcome: not falsified within budget"),
            }
            write_json(&json_out, &serde_json::to_value(&report)?)?;
        }
        Commands::VerifyProp1prime {
            instance,
            z,
            challenges,
            eps,
            seed,
            json_out,
        } => {
            let sit = load_instance(&instance, eps)?;
            let z = resolve_z(&z, &sit)?;
            let report = majority::verify_proposition1prime(&sit, &z, challenges, seed)?;
            for check in &report.assumptions {
                println!(
                    "assumption {}: {} ({})",
                    check.name,
                    if check.ok { "ok" } else { "FAILED" },
                    check.detail
                );
            }
            println!(
                "outcome: {} after {} challenges{}",
                if report.passed { "passed" } else { "failed" },
                report.challenges_run,
                report
                    .certificate
                    .as_deref()
                    .map(|c| format!(" (certificate: {c})"))
                    .unwrap_or_default(),
            );
            write_json(&json_out, &serde_json::to_value(&report)?)?;
        }
        Commands::Tournament {
            instance,
            grid,
            z,
            eps,
            json_out,
        } => {
            let sit = load_instance(&instance, eps)?;
            let z = resolve_z(&z, &sit)?;
            let alternatives = grid_alternatives(sit.space(), grid, std::slice::from_ref(&z));
            let t = build_tournament(&sit, alternatives)?;
            let core = t.finite_core();
            let condorcet = t.finite_condorcet();
            let uncovered = t.gillies_uncovered();
            println!(
                "alternatives: {} (grid {grid} per axis, z injected)",
                t.len()
            );
            println!(
                "finite core: {} alternative(s){}",
                core.len(),
                if core.len() <= 4 {
                    format!(
                        " {:?}",
                        core.iter()
                            .map(|&i| t.alternatives()[i].as_slice().to_vec())
                            .collect::<Vec<_>>()
                    )
                } else {
                    String::new()
                }
            );
            match condorcet {
                Some(i) => println!(
                    "finite condorcet winner: {:?}",
                    t.alternatives()[i].as_slice()
                ),
                None => println!("finite condorcet winner: none"),
            }
            println!("gillies uncovered set: {} alternative(s)", uncovered.len());
            if let Some(path) = &json_out {
                fs::write(path, t.to_json_string())
                    .with_context(|| format!("writing {}", path.display()))?;
            }
        }
        Commands::Generate {
            parity,
            pairs,
            dim,
            seed,
            ideals_at_z,
            radii,
            z,
            out,
        } => {
            let mut config = GeneratorConfig::new(parity.into(), pairs, dim, seed);
            if let Some(radii) = radii {
                let parts: Vec<f64> = radii
                    .split(',')
                    .map(|p| p.trim().parse::<f64>().context("invalid radius"))
                    .collect::<Result<_>>()?;
                if parts.len() != 2 {
                    bail!("--radii expects \"lo,hi\"");
                }
                config.radii = (parts[0], parts[1]);
            }
            if let Some(z) = z {
                config.z = Some(
                    parse_point(&z, dim)?
                        .iter()
                        .copied()
                        .collect(),
                );
            }
            if matches!(parity, ParityArg::Even) {
                config.ideals_at_z = ideals_at_z;
            }
            let sit = generate(&config)?;
            sit.save(&out)?;
            println!(
                "wrote {} ({} voters, dimension {dim}, seed {seed})",
                out.display(),
                sit.voter_count()
            );
        }
        Commands::Render {
            instance,
            out,
            z,
            witness,
            line,
            eps,
        } => {
            let sit = load_instance(&instance, eps)?;
            let core = z
                .as_ref()
                .map(|text| parse_point(text, sit.dimension()))
                .transpose()?;
            let witness = witness
                .as_ref()
                .map(|text| parse_point(text, sit.dimension()))
                .transpose()?;
            let line = match (&line, &core) {
                (Some(text), Some(anchor)) => {
                    let direction = parse_point(text, sit.dimension())?;
                    Some(clip_line(sit.space(), anchor, &direction)?)
                }
                (Some(text), None) => {
                    let direction = parse_point(text, sit.dimension())?;
                    Some(clip_line(sit.space(), &sit.space().center(), &direction)?)
                }
                _ => None,
            };
            let svg = render_svg(
                &sit,
                &RenderAnnotations {
                    core,
                    witness,
                    line,
                },
            )?;
            fs::write(&out, svg).with_context(|| format!("writing {}", out.display()))?;
            println!("wrote {}", out.display());
        }
        Commands::Experiment { config, json_out } => {
            let config = ExperimentConfig::load(&config)?;
            let report = run_experiment(&config)?;
            println!(
                "{}/{} instances passed in {} ms",
                report.aggregate.passed,
                report.aggregate.total,
                report.wall_clock_ms.unwrap_or(0)
            );
            for result in &report.results {
                println!(
                    "  instance {} (seed {}): {}{}",
                    result.index,
                    result.seed,
                    result.outcome,
                    result
                        .detail
                        .as_deref()
                        .map(|d| format!(" ({d})"))
                        .unwrap_or_default()
                );
            }
            if let Some(path) = &json_out {
                report.save(path)?;
                println!("report written to {}", path.display());
            }
        }
    }
    Ok(())
}
