//! Command-line surface of the pairing laboratory.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use pairlab::bench::{run_bench, BenchFamily, BenchOpts};
use pairlab::chain::{self, Policy};
use pairlab::config::CurveConfig;
use pairlab::ec_pairings::{self, EcPairingOpts};
use pairlab::error::Error;
use pairlab::golden;
use pairlab::hec_pairings::{self, HecPairingOpts};
use pairlab::report::PairingReport;
use pairlab::verify;

#[derive(Parser)]
#[command(
    name = "pairlab",
    version,
    about = "Squared Weil/Tate pairing laboratory with field-operation counting"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Evaluate one pairing on a configured curve
    Pair {
        #[command(subcommand)]
        target: PairTarget,
    },
    /// Measure per-step operation counts of a baseline/squared pair
    Bench {
        #[arg(long, value_enum)]
        family: BenchFamily,
        #[arg(long, default_value_t = 5)]
        trials: usize,
        /// Multiplication-equivalents per division (default 5 for elliptic
        /// families, 4 for the genus-2 family)
        #[arg(long)]
        div_weight: Option<f64>,
        #[arg(long, default_value_t = pairlab::bench::BENCH_ORDER)]
        m: u64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long)]
        json: bool,
    },
    /// Print an addition-subtraction chain, one step per line
    Chain {
        #[arg(long)]
        m: u64,
        #[arg(long, value_enum, default_value = "naf")]
        policy: Policy,
        #[arg(long)]
        json: bool,
    },
    /// Run the embedded genus-2 worked example and verify every value
    ExampleGenus2 {
        #[arg(long, default_value_t = 7)]
        seed: u64,
        #[arg(long)]
        json: bool,
    },
    /// Run the named property suites on derived test curves
    Verify {
        #[arg(long)]
        property: Option<String>,
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Subcommand)]
enum PairTarget {
    /// Elliptic-curve pairings (config keys: p, k, modulus, a4, a6)
    Ec {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        m: u64,
        #[arg(long, value_enum)]
        alg: EcAlg,
        /// Point as comma-separated coordinates (k values per coordinate) or `inf`
        #[arg(long = "P")]
        p: String,
        #[arg(long = "Q")]
        q: String,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Divide the raw squared-Weil output by (-1)^m
        #[arg(long)]
        normalized: bool,
        #[arg(long, value_enum, default_value = "naf")]
        chain: Policy,
        #[arg(long)]
        json: bool,
    },
    /// Genus-2 pairings (config keys: p, f)
    Hec {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        m: u64,
        #[arg(long, value_enum)]
        alg: HecAlg,
        /// Divisor as `a0,a1,..;b0,b1,..`
        #[arg(long = "D")]
        d: String,
        #[arg(long = "E")]
        e: String,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Walk a chain for m+1 to reroute past a colliding chain divisor
        #[arg(long)]
        alt_chain: bool,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum EcAlg {
    /// Miller's Weil pairing
    Weil,
    /// Squared Weil pairing
    Weil2,
    /// Miller's Tate pairing
    Tate,
    /// Squared Tate pairing
    Tate2,
}

#[derive(Clone, Copy, ValueEnum)]
enum HecAlg {
    /// Squared Tate pairing
    Tate2,
    /// Frey-Rueck-style baseline
    TateStd,
}

fn run(cli: Cli) -> Result<(), Error> {
    match cli.cmd {
        Cmd::Pair { target } => match target {
            PairTarget::Ec {
                config,
                m,
                alg,
                p,
                q,
                seed,
                normalized,
                chain,
                json,
            } => {
                let curve = CurveConfig::load(&config)?.ec_curve()?;
                let pp = curve.parse_point(&p)?;
                let qq = curve.parse_point(&q)?;
                let opts = EcPairingOpts {
                    policy: chain,
                    normalized,
                    seed,
                    check_preconditions: true,
                };
                let (name, res) = match alg {
                    EcAlg::Weil => (
                        "weil",
                        ec_pairings::miller_weil(&curve, &pp, &qq, m, &opts)?,
                    ),
                    EcAlg::Weil2 => (
                        "weil2",
                        ec_pairings::squared_weil(&curve, &pp, &qq, m, &opts)?,
                    ),
                    EcAlg::Tate => (
                        "tate",
                        ec_pairings::miller_tate(&curve, &pp, &qq, m, &opts)?,
                    ),
                    EcAlg::Tate2 => (
                        "tate2",
                        ec_pairings::squared_tate(&curve, &pp, &qq, m, &opts)?,
                    ),
                };
                let report = PairingReport::from_ec(name, m, &res);
                emit(&report, json, |r| r.human())
            }
            PairTarget::Hec {
                config,
                m,
                alg,
                d,
                e,
                seed,
                alt_chain,
                json,
            } => {
                let curve = CurveConfig::load(&config)?.hec_curve()?;
                let dd = curve.parse_divisor(&d)?;
                let ee = curve.parse_divisor(&e)?;
                let opts = HecPairingOpts {
                    alt_chain,
                    seed,
                    check_preconditions: true,
                };
                let (name, res) = match alg {
                    HecAlg::Tate2 => (
                        "tate2",
                        hec_pairings::squared_tate_hec(&curve, &dd, &ee, m, &opts)?,
                    ),
                    HecAlg::TateStd => (
                        "tate-std",
                        hec_pairings::standard_tate_hec(&curve, &dd, &ee, m, &opts)?,
                    ),
                };
                let report = PairingReport::from_hec(name, m, &res);
                emit(&report, json, |r| r.human())
            }
        },
        Cmd::Bench {
            family,
            trials,
            div_weight,
            m,
            seed,
            json,
        } => {
            let opts = BenchOpts {
                trials,
                m,
                div_weight,
                seed,
            };
            let report = run_bench(family, &opts)?;
            emit(&report, json, |r| r.human())
        }
        Cmd::Chain { m, policy, json } => {
            let steps = chain::build_chain(m, policy)?;
            if json {
                println!(
                    "{}",
                    serde_json::json!({"schema": 1, "m": m, "steps": steps})
                );
            } else {
                print!("{}", chain::format_chain(&steps));
            }
            Ok(())
        }
        Cmd::ExampleGenus2 { seed, json } => {
            let checks = golden::run_worked_example(seed)?;
            let all_pass = checks.iter().all(|c| c.pass);
            if json {
                println!(
                    "{}",
                    serde_json::json!({"schema": 1, "checks": checks, "pass": all_pass})
                );
            } else {
                for c in &checks {
                    if c.pass {
                        println!("PASS {}", c.name);
                    } else {
                        println!(
                            "FAIL {} (expected {}, got {})",
                            c.name, c.expected, c.actual
                        );
                    }
                }
            }
            if all_pass {
                Ok(())
            } else {
                Err(Error::InvalidInput("worked example mismatch".into()))
            }
        }
        Cmd::Verify {
            property,
            samples,
            seed,
            json,
        } => {
            let reports = verify::run_properties(property.as_deref(), samples, seed)?;
            let all_pass = reports.iter().all(|r| r.pass());
            if json {
                println!(
                    "{}",
                    serde_json::json!({"schema": 1, "properties": reports, "pass": all_pass})
                );
            } else {
                for r in &reports {
                    println!(
                        "{} {:<20} {} samples, {} failures",
                        if r.pass() { "PASS" } else { "FAIL" },
                        r.name,
                        r.samples,
                        r.failures
                    );
                }
            }
            if all_pass {
                Ok(())
            } else {
                Err(Error::InvalidInput("property failures".into()))
            }
        }
    }
}

fn emit<T: serde::Serialize>(
    report: &T,
    json: bool,
    human: impl Fn(&T) -> String,
) -> Result<(), Error> {
    if json {
        println!(
            "{}",
            serde_json::to_string_pretty(report).expect("report serializes")
        );
    } else {
        print!("{}", human(report));
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
