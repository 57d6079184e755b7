//! `lca`: analyze, invert, and evolve one-dimensional linear cellular
//! automata over Z_m from the command line.
//!
//! Exit codes: 0 success, 1 parse/usage, 2 semantic error, 3 budget.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use lca_core::error::{LcaError, Result};
use lca_core::oracle::{self, TrajectoryMethod};
use lca_core::report;
use lca_core::{FiniteConfiguration, LinearCA};

#[derive(Parser)]
#[command(
    name = "lca",
    about = "Exact analysis of one-dimensional linear cellular automata over Z_m",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, Default, ValueEnum)]
enum MethodArg {
    /// Breadth-first subgroup closure (exact, small instances only).
    Closure,
    /// Smith-normal-form order computation (exact, scales much further).
    #[default]
    Snf,
}

impl From<MethodArg> for TrajectoryMethod {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::Closure => TrajectoryMethod::Closure,
            MethodArg::Snf => TrajectoryMethod::Snf,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Full structural and entropy report for a rule, as JSON.
    Analyze {
        /// Rule file: {"m": 6, "lambda": {"-1": 4, "0": 3}}
        rule: PathBuf,
        /// Accept coefficients outside [0, m) and reduce them mod m.
        #[arg(long)]
        reduce: bool,
        /// Pretty-print the JSON output.
        #[arg(long)]
        pretty: bool,
    },
    /// Print the inverse rule, or fail with exit code 2 if none exists.
    Invert {
        rule: PathBuf,
        #[arg(long)]
        reduce: bool,
        #[arg(long)]
        pretty: bool,
    },
    /// Apply the rule to a configuration a number of times.
    Evolve {
        rule: PathBuf,
        /// Configuration file: {"m": 6, "cells": {"0": 1}}
        config: PathBuf,
        #[arg(long)]
        steps: u64,
        #[arg(long)]
        reduce: bool,
        #[arg(long)]
        pretty: bool,
    },
    /// Render the evolution as a text diagram, one row per time step.
    Spacetime {
        rule: PathBuf,
        config: PathBuf,
        #[arg(long)]
        steps: u64,
        /// Cells from -width to width are shown.
        #[arg(long)]
        width: u32,
        /// Force space-separated decimal cells (automatic for m > 36).
        #[arg(long)]
        decimal: bool,
        #[arg(long)]
        reduce: bool,
    },
    /// Brute-force trajectory growth table and comparison with the formula.
    Oracle {
        rule: PathBuf,
        /// Window bounds s t: the subgroup of configurations in P_{s,t}.
        #[arg(long, num_args = 2, value_names = ["S", "T"], allow_negative_numbers = true)]
        window: Vec<i64>,
        /// Number of trajectory steps N.
        #[arg(long)]
        steps: u64,
        #[arg(long, value_enum, default_value_t = MethodArg::Snf)]
        method: MethodArg,
        /// Cap on closure enumeration size.
        #[arg(long, default_value_t = oracle::DEFAULT_CLOSURE_BUDGET)]
        budget: u64,
        #[arg(long)]
        reduce: bool,
    },
}

fn read_file(path: &Path) -> Result<String> {
    std::fs::read_to_string(path)
        .map_err(|e| LcaError::Parse(format!("cannot read {}: {e}", path.display())))
}

fn load_rule(path: &Path, reduce: bool) -> Result<LinearCA> {
    LinearCA::from_json_str(&read_file(path)?, reduce)
}

fn load_config(path: &Path, reduce: bool) -> Result<FiniteConfiguration> {
    FiniteConfiguration::from_json_str(&read_file(path)?, reduce)
}

fn print_json(value: &serde_json::Value, pretty: bool) {
    if pretty {
        println!("{}", serde_json::to_string_pretty(value).unwrap());
    } else {
        println!("{value}");
    }
}

const EVOLVE_CELL_BUDGET: u64 = 10_000_000;

fn evolve(rule: &LinearCA, config: &FiniteConfiguration, steps: u64) -> Result<FiniteConfiguration> {
    // support grows by at most the rule span per step
    let span = rule
        .memory_bounds()
        .map(|(l, r)| (r - l) as u64)
        .unwrap_or(0);
    let initial = config
        .support_bounds()
        .map(|(l, r)| (r - l + 1) as u64)
        .unwrap_or(0);
    let bound = initial.saturating_add(steps.saturating_mul(span.max(1)));
    if bound > EVOLVE_CELL_BUDGET {
        return Err(LcaError::Budget {
            what: format!("evolving {steps} steps over span {span}"),
            limit: EVOLVE_CELL_BUDGET,
        });
    }
    let mut current = config.clone();
    for _ in 0..steps {
        current = rule.apply(&current)?;
    }
    Ok(current)
}

fn spacetime_rows(
    rule: &LinearCA,
    config: &FiniteConfiguration,
    steps: u64,
    width: u32,
    decimal: bool,
) -> Result<Vec<String>> {
    let m = rule.modulus().value();
    let decimal = decimal || m > 36;
    let w = width as i64;
    let mut rows = Vec::with_capacity(steps as usize + 1);
    let mut current = config.clone();
    for step in 0..=steps {
        let mut cells = Vec::with_capacity((2 * w + 1) as usize);
        for n in -w..=w {
            cells.push(current.cell(n));
        }
        let row = if decimal {
            cells
                .iter()
                .map(|v| v.to_string())
                .collect::<Vec<_>>()
                .join(" ")
        } else {
            cells
                .iter()
                .map(|&v| char::from_digit(v as u32, 36).unwrap())
                .collect()
        };
        rows.push(row);
        if step < steps {
            current = evolve(rule, &current, 1)?;
        }
    }
    Ok(rows)
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Analyze {
            rule,
            reduce,
            pretty,
        } => {
            let rule = load_rule(&rule, reduce)?;
            print_json(&report::analyze(&rule), pretty);
        }
        Command::Invert {
            rule,
            reduce,
            pretty,
        } => {
            let rule = load_rule(&rule, reduce)?;
            let inverse = rule.invert()?;
            // round-trip check before emission
            debug_assert_eq!(
                rule.compose(&inverse).unwrap(),
                LinearCA::identity(rule.modulus())
            );
            print_json(&inverse.to_json_value(), pretty);
        }
        Command::Evolve {
            rule,
            config,
            steps,
            reduce,
            pretty,
        } => {
            let rule = load_rule(&rule, reduce)?;
            let config = load_config(&config, reduce)?;
            let result = evolve(&rule, &config, steps)?;
            print_json(&result.to_json_value(), pretty);
        }
        Command::Spacetime {
            rule,
            config,
            steps,
            width,
            decimal,
            reduce,
        } => {
            let rule = load_rule(&rule, reduce)?;
            let config = load_config(&config, reduce)?;
            for row in spacetime_rows(&rule, &config, steps, width, decimal)? {
                println!("{row}");
            }
        }
        Command::Oracle {
            rule,
            window,
            steps,
            method,
            budget,
            reduce,
        } => {
            let rule = load_rule(&rule, reduce)?;
            let (s, t) = (window[0], window[1]);
            let (table, err) = oracle::trajectory_sizes_partial(
                &rule,
                s,
                t,
                steps as usize,
                method.into(),
                budget,
            );
            let slope = oracle::entropy_slope(&table).ok();
            print_json(&report::oracle_report(&table, slope.as_ref()), false);
            if let Some(e) = err {
                eprintln!("{e} (completed {} of {} steps)", table.steps(), steps);
                return Err(e);
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // clap's own exit code conventions differ; ours is 1 for usage
            let _ = e.print();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
                    ExitCode::SUCCESS
                }
                _ => ExitCode::from(1),
            };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
