use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use typeseq_core::doc::{gsr_section, RingSummary};
use typeseq_core::{
    analyze, run_fuzz, run_suite_with_generators, semigroup_from_generators, semigroup_ts_oracle, FuzzMode,
    FuzzParams, RingDocument,
};

/// Type sequences and Gorenstein-type classification of one-dimensional
/// analytically irreducible rings.
#[derive(Parser)]
#[command(name = "typeseq", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct DocFlags {
    /// Ring document (JSON).
    file: PathBuf,
    /// Write the report here instead of standard output.
    #[arg(short, long)]
    output: Option<PathBuf>,
    /// Largest working degree when closing generated rings [default: 512].
    #[arg(long)]
    max_degree_cap: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Full analysis report.
    Analyze {
        #[command(flatten)]
        doc: DocFlags,
        /// Include every dual ideal of the chain, printed.
        #[arg(long)]
        emit_duals: bool,
        /// Include the associated GSR and the comparison verdicts.
        #[arg(long)]
        emit_gsr: bool,
        /// Include the invariant suite.
        #[arg(long)]
        suite: bool,
    },
    /// Compare the ring with its associated GSR.
    CompareGsr {
        #[command(flatten)]
        doc: DocFlags,
    },
    /// Run the invariant suite; exits nonzero if any check fails.
    Check {
        #[command(flatten)]
        doc: DocFlags,
    },
    /// Run the invariant suite over a random corpus; exits nonzero on any failure.
    Fuzz {
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value_t = 200)]
        count: usize,
        #[arg(long, default_value_t = 4)]
        max_n: usize,
        #[arg(long = "max-N", default_value_t = 12)]
        max_conductor: usize,
        #[arg(long, default_value = "both")]
        mode: FuzzMode,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Combinatorial type sequence of the numerical semigroup with the given
    /// generators, e.g. "4,6,11,13".
    Oracle { generators: String },
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn load(flags: &DocFlags) -> Result<RingDocument> {
    let text = fs::read_to_string(&flags.file).with_context(|| format!("reading {}", flags.file.display()))?;
    let mut doc = RingDocument::from_json(&text).with_context(|| format!("parsing {}", flags.file.display()))?;
    if let Some(cap) = flags.max_degree_cap {
        doc.options.max_degree_cap = cap;
    }
    Ok(doc)
}

fn emit<T: Serialize>(value: &T, output: Option<&Path>) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    match output {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

#[derive(Serialize)]
struct Comparison {
    ring: RingSummary,
    gsr: RingSummary,
    verdicts: typeseq_core::doc::ComparisonVerdicts,
}

#[derive(Serialize)]
struct CheckOutput {
    passed: bool,
    checks: Vec<typeseq_core::CheckResult>,
}

#[derive(Serialize)]
struct OracleOutput {
    generators: Vec<usize>,
    s_list: Vec<usize>,
    gaps: Vec<usize>,
    c: usize,
    type_sequence: Vec<usize>,
}

fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Analyze {
            doc,
            emit_duals,
            emit_gsr,
            suite,
        } => {
            let mut d = load(&doc)?;
            d.options.emit_duals |= emit_duals;
            d.options.emit_gsr |= emit_gsr;
            d.options.suite |= suite;
            let report = analyze(&d)?;
            emit(&report, doc.output.as_deref())?;
            Ok(report.suite.is_none_or(|s| s.iter().all(|c| c.passed)))
        }
        Command::CompareGsr { doc } => {
            let loaded = load(&doc)?.build()?;
            let section = gsr_section(&loaded.ring)?;
            let out = Comparison {
                ring: RingSummary::new(&loaded.ring)?,
                gsr: section.ring,
                verdicts: section.comparison,
            };
            emit(&out, doc.output.as_deref())?;
            Ok(true)
        }
        Command::Check { doc } => {
            let loaded = load(&doc)?.build()?;
            let report = run_suite_with_generators(&loaded.ring, loaded.generators.as_deref());
            let passed = report.all_passed();
            emit(
                &CheckOutput {
                    passed,
                    checks: report.checks,
                },
                doc.output.as_deref(),
            )?;
            Ok(passed)
        }
        Command::Fuzz {
            seed,
            count,
            max_n,
            max_conductor,
            mode,
            output,
        } => {
            let params = FuzzParams {
                seed,
                max_n,
                max_conductor,
                count,
                mode,
            };
            let report = run_fuzz(&params)?;
            emit(&report, output.as_deref())?;
            Ok(report.all_passed())
        }
        Command::Oracle { generators } => {
            let gens = generators
                .split(',')
                .map(|g| g.trim().parse::<usize>())
                .collect::<Result<Vec<_>, _>>()
                .with_context(|| format!("'{generators}' is not a comma-separated list of positive integers"))?;
            let s = semigroup_from_generators(&gens)?;
            let ts = semigroup_ts_oracle(&s)?;
            emit(
                &OracleOutput {
                    generators: gens,
                    s_list: s.s_list,
                    gaps: s.gaps,
                    c: s.c,
                    type_sequence: ts,
                },
                None,
            )?;
            Ok(true)
        }
    }
}
