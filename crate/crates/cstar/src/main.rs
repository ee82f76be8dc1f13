use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use cstar::analyze::{analyze, AnalyzeOptions};
use cstar::channel::ChannelSpec;
use cstar::check::first_failure;
use cstar::format::{sig12, FamilyJson};
use cstar::verify::verify_family;
use cstar::{acceptance, CliError};
use cstar_core::analysis::pair_norms;
use cstar_core::constructions::{
    complementary_family, harmonic_rank_one, rotation_family, simplex_two_uniform, tensor_lift,
};
use cstar_core::encoding::WeightedProjectionFamily;

#[derive(Parser)]
#[command(name = "cstar", version, about = "Optimal encodings against phase-damping channels")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
#[value(rename_all = "snake_case")]
enum Kind {
    Harmonic,
    TensorLift,
    Rotation,
    Simplex,
    Complementary,
}

#[derive(Subcommand)]
enum Command {
    /// Build a weighted projective resolution of the identity.
    Construct {
        #[arg(long, value_enum)]
        kind: Kind,
        #[arg(long)]
        d: Option<usize>,
        #[arg(long)]
        m: Option<usize>,
        #[arg(long)]
        l: Option<usize>,
        #[arg(long)]
        q: Option<usize>,
        /// Family JSON destination; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Worst-case errors, bounds and pair norms for a family.
    Analyze {
        #[arg(long)]
        family: PathBuf,
        /// Inline JSON, e.g. '{"type":"pair","K":[1,2]}' or '{"type":"Q1"}'.
        #[arg(long, default_value = r#"{"type":"Q1"}"#)]
        channel: String,
        /// Report destination; stdout when omitted.
        #[arg(long)]
        report: Option<PathBuf>,
        /// Random samples for the brute-force search (skipped when omitted).
        #[arg(long)]
        brute: Option<usize>,
        #[arg(long, env = "CSTAR_SEED", default_value_t = 0)]
        seed: u64,
        /// Coordinate-operator height; defaults to the largest rank.
        #[arg(long)]
        l: Option<usize>,
    },
    /// Check a family file, or run the full acceptance suite.
    Verify {
        #[arg(long, required_unless_present = "all_builtin", conflicts_with = "all_builtin")]
        family: Option<PathBuf>,
        #[arg(long)]
        all_builtin: bool,
        #[arg(long, env = "CSTAR_SEED", default_value_t = 0)]
        seed: u64,
    },
}

fn need(value: Option<usize>, flag: &str, kind: &str) -> Result<usize, CliError> {
    value.ok_or_else(|| CliError::Invariant(format!("--kind {kind} requires --{flag}")))
}

fn construct(kind: Kind, d: Option<usize>, m: Option<usize>, l: Option<usize>, q: Option<usize>) -> Result<WeightedProjectionFamily, CliError> {
    Ok(match kind {
        Kind::Harmonic => harmonic_rank_one(need(d, "d", "harmonic")?, need(m, "m", "harmonic")?)?,
        Kind::TensorLift => {
            let base = harmonic_rank_one(need(d, "d", "tensor_lift")?, need(m, "m", "tensor_lift")?)?;
            tensor_lift(&base, need(l, "l", "tensor_lift")?)?
        }
        Kind::Rotation => rotation_family(need(l, "l", "rotation")?, need(m, "m", "rotation")?)?,
        Kind::Simplex => simplex_two_uniform(need(q, "q", "simplex")?)?,
        Kind::Complementary => {
            let base = harmonic_rank_one(need(d, "d", "complementary")?, need(m, "m", "complementary")?)?;
            complementary_family(&base)?
        }
    })
}

fn write_json(path: Option<&Path>, value: &impl serde::Serialize) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(value).expect("report serializes");
    text.push('\n');
    match path {
        Some(p) => fs::write(p, text).map_err(|source| CliError::Write {
            path: p.to_path_buf(),
            source,
        }),
        None => {
            std::io::stdout().write_all(text.as_bytes()).map_err(|source| CliError::Write {
                path: PathBuf::from("<stdout>"),
                source,
            })
        }
    }
}

fn read_family(path: &Path) -> Result<FamilyJson, CliError> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Read {
        path: path.to_path_buf(),
        source,
    })?;
    serde_json::from_str(&text).map_err(|source| CliError::Parse {
        what: "family file",
        source,
    })
}

fn summary(fam: &WeightedProjectionFamily) -> String {
    let mut s = format!("d: {}\nm: {}\nuniform: {}\n", fam.d(), fam.m(), fam.is_uniform());
    if fam.is_uniform() {
        s += &format!("k: {}\n", sig12(fam.uniform_weight()));
    }
    if let Ok(t) = pair_norms(fam.projections()) {
        s += &format!(
            "pair norms: max {} min {} all_equal {}\n",
            sig12(t.max),
            sig12(t.min),
            t.all_equal
        );
    }
    s
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Construct { kind, d, m, l, q, out } => {
            let fam = construct(kind, d, m, l, q)?;
            write_json(out.as_deref(), &FamilyJson::from(&fam))?;
            if out.is_some() {
                print!("{}", summary(&fam));
            } else {
                eprint!("{}", summary(&fam));
            }
        }
        Command::Analyze {
            family,
            channel,
            report,
            brute,
            seed,
            l,
        } => {
            let fam = read_family(&family)?.to_family()?;
            let opts = AnalyzeOptions {
                channel: ChannelSpec::parse(&channel)?,
                brute,
                seed,
                l,
            };
            let r = analyze(&fam, &opts)?;
            write_json(report.as_deref(), &r)?;
            if report.is_some() {
                println!("worst kappa: {}", r.worst_kappa);
                println!("worst closed form: {}", r.worst_closed_form);
                if let Some(b) = r.worst_brute_force {
                    println!("worst brute force: {b}");
                }
                if let Some(o) = r.optimal {
                    println!("optimal: {o}");
                }
            }
        }
        Command::Verify {
            family,
            all_builtin,
            seed,
        } => {
            let mut failed: Option<String> = None;
            if all_builtin {
                for outcome in acceptance::run_all() {
                    println!("{outcome}");
                    if failed.is_none() && !outcome.passed() {
                        let name = outcome.checks.iter().find(|c| !c.passed).map_or("", |c| c.name.as_str());
                        failed = Some(format!("criterion {}: {name}", outcome.id));
                    }
                }
            } else if let Some(path) = family {
                let checks = verify_family(&read_family(&path)?, seed);
                for c in &checks {
                    println!("{c}");
                }
                failed = first_failure(&checks).map(str::to_owned);
            }
            if let Some(check) = failed {
                return Err(CliError::Verification { check });
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
