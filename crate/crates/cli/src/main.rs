mod output;
mod verify;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use quatf_core::exactmath::fmt_rational;
use quatf_core::flagcohom::{reduce, top_pairing};
use quatf_core::genus::{ell_closed, ell_const, ell_oracle_level3, todd_series};
use quatf_core::modforms::{eisenstein_e, eisenstein_g, fault, level_generator};
use quatf_core::transfer::{e_single, flag_report, transfer_report};
use quatf_core::{ChernGrid, CoinvariantPoly, Error, Generator, Level};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use output::{rationals, SeriesOut, Status, TransferReport, VerificationReport, ORIENTATION};

#[derive(Parser)]
#[command(name = "quatf", version, about = "Exact f-invariants of double quaternionic transfers")]
struct Cli {
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Which {
    /// Closed-form elliptic genus coefficients.
    Ell,
    /// Constant terms of the elliptic genus.
    Ell0,
    /// Todd genus in c2.
    Todd,
    /// Elliptic genus from the characteristic series (level 3).
    Oracle,
}

#[derive(Subcommand)]
enum Command {
    /// q-expansion of a generator or Eisenstein series.
    Eis {
        #[arg(long, default_value_t = 3)]
        level: u32,
        /// E1, E3, delta4, epsilon, G<2k> or E<2k>.
        #[arg(long)]
        name: String,
        #[arg(long, default_value_t = 20)]
        prec: usize,
    },
    /// Genus series in c2.
    Series {
        #[arg(long, value_enum)]
        which: Which,
        #[arg(long, default_value_t = 3)]
        level: u32,
        #[arg(long)]
        deg: usize,
        #[arg(long, default_value_t = 20)]
        prec: usize,
    },
    /// Normal form in the cohomology of Sp(n)/Sp(1)^n.
    ReduceCohomology {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        poly: String,
    },
    /// f-invariant of a transfer given by a Chern pairing grid (JSON file).
    FTransfer {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        prec: Option<usize>,
    },
    /// f-invariant of the transfer along Sp(n)/Sp(1)^n with two tautological lines.
    Flag {
        #[arg(long)]
        n: usize,
        /// Two distinct line indices, e.g. `1,2`.
        #[arg(long, value_delimiter = ',', required = true)]
        lines: Vec<usize>,
        #[arg(long, default_value_t = 3)]
        level: u32,
        #[arg(long)]
        prec: Option<usize>,
    },
    /// e-invariant of a single quaternionic transfer.
    ETransfer {
        #[arg(long)]
        n: u32,
        #[arg(long, allow_hyphen_values = true)]
        index: BigInt,
    },
    /// Recompute every published identity and report pass/fail per item.
    VerifyPaper {
        #[arg(long)]
        prec: Option<usize>,
        #[arg(long, hide = true)]
        inject_fault: Option<String>,
    },
}

enum Failure {
    Input(String),
    Compute(String),
    Verification,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_input_error() {
            Failure::Input(e.to_string())
        } else {
            Failure::Compute(e.to_string())
        }
    }
}

type Outcome = Result<(), Failure>;

fn emit<T: Serialize>(json: bool, value: &T, text: impl FnOnce() -> String) {
    if json {
        println!("{}", serde_json::to_string_pretty(value).expect("serializable"));
    } else {
        println!("{}", text());
    }
}

fn series_text(s: &SeriesOut) -> String {
    let terms: Vec<String> = s
        .coefficients
        .iter()
        .enumerate()
        .filter(|(_, c)| c.as_str() != "0")
        .map(|(j, c)| match j {
            0 => c.clone(),
            1 => format!("({c})*q"),
            _ => format!("({c})*q^{j}"),
        })
        .collect();
    let body = if terms.is_empty() { "0".to_string() } else { terms.join(" + ") };
    format!("{} = {} + O(q^{})", s.name, body, s.precision)
}

fn run_eis(json: bool, level: u32, name: &str, prec: usize) -> Outcome {
    let level = Level::new(level)?;
    let series = if let Ok(g) = name.parse::<Generator>() {
        if g.level() != level {
            return Err(Failure::Input(format!("{name} is not a generator at level {level}")));
        }
        level_generator(level, g, prec)?
    } else {
        let weight = name
            .get(1..)
            .and_then(|w| w.parse::<u32>().ok())
            .ok_or_else(|| Failure::Input(format!("unknown series {name:?}")))?;
        match &name[..1] {
            "G" => eisenstein_g(weight, prec)?,
            "E" => eisenstein_e(weight, prec)?,
            _ => return Err(Failure::Input(format!("unknown series {name:?}"))),
        }
    };
    let out = SeriesOut::new(name, &series);
    emit(json, &out, || series_text(&out));
    Ok(())
}

#[derive(Serialize)]
struct GenusOut {
    which: &'static str,
    level: u32,
    degree: usize,
    coefficients: Vec<SeriesOut>,
}

#[derive(Serialize)]
struct ConstantsOut {
    which: &'static str,
    level: u32,
    degree: usize,
    coefficients: Vec<String>,
}

fn run_series(json: bool, which: Which, level: u32, deg: usize, prec: usize) -> Outcome {
    let level = Level::new(level)?;
    let constants = |name, values: Vec<_>| {
        let out = ConstantsOut {
            which: name,
            level: level.n(),
            degree: deg,
            coefficients: rationals(&values),
        };
        emit(json, &out, || {
            out.coefficients
                .iter()
                .enumerate()
                .map(|(a, c)| format!("c2^{a}: {c}"))
                .collect::<Vec<_>>()
                .join("\n")
        });
    };
    let series = match which {
        Which::Ell0 => return {
            let _: () = constants("ell0", ell_const(level, deg)?);
            Ok(())
        },
        Which::Todd => return {
            let _: () = constants("todd", todd_series(deg)?);
            Ok(())
        },
        Which::Ell => ("ell", ell_closed(level, deg, prec)?),
        Which::Oracle => {
            if level != Level::Three {
                return Err(Failure::Input("the oracle series exists only at level 3".into()));
            }
            ("oracle", ell_oracle_level3(deg, prec)?)
        }
    };
    let out = GenusOut {
        which: series.0,
        level: level.n(),
        degree: deg,
        coefficients: series
            .1
            .coeffs
            .iter()
            .enumerate()
            .map(|(a, s)| SeriesOut::new(format!("c2^{a}"), s))
            .collect(),
    };
    emit(json, &out, || out.coefficients.iter().map(series_text).collect::<Vec<_>>().join("\n"));
    Ok(())
}

#[derive(Serialize)]
struct ReduceOut {
    n: usize,
    input: String,
    normal_form: String,
    pairing: String,
    orientation: &'static str,
}

fn run_reduce(json: bool, n: usize, poly: &str) -> Outcome {
    let p = CoinvariantPoly::parse(n, poly)?;
    let r = reduce(&p);
    let out = ReduceOut {
        n,
        input: p.to_string(),
        normal_form: r.to_string(),
        pairing: top_pairing(&r).to_string(),
        orientation: ORIENTATION,
    };
    emit(json, &out, || {
        format!(
            "normal form: {}\npairing: {}\norientation: {}",
            out.normal_form, out.pairing, out.orientation
        )
    });
    Ok(())
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct GridFile {
    n: usize,
    #[serde(default = "default_level")]
    level: u32,
    pairings: Vec<Value>,
}

fn default_level() -> u32 {
    3
}

fn parse_pairing(v: &Value) -> Result<BigInt, Failure> {
    let text = match v {
        Value::Number(n) if n.is_i64() || n.is_u64() => n.to_string(),
        Value::String(s) => s.trim().to_string(),
        _ => return Err(Failure::Input(format!("pairing {v} is not an integer"))),
    };
    text.parse()
        .map_err(|_| Failure::Input(format!("pairing {v} is not an integer")))
}

fn run_f_transfer(json: bool, input: &PathBuf, prec: Option<usize>) -> Outcome {
    let text = std::fs::read_to_string(input)
        .map_err(|e| Failure::Input(format!("cannot read {}: {e}", input.display())))?;
    let file: GridFile =
        serde_json::from_str(&text).map_err(|e| Failure::Input(format!("malformed grid file: {e}")))?;
    let pairings = file.pairings.iter().map(parse_pairing).collect::<Result<Vec<_>, _>>()?;
    let grid = ChernGrid::new(file.n, Level::new(file.level)?, pairings)?;
    let report = TransferReport::from(&transfer_report(&grid, prec)?);
    emit(json, &report, || report.render());
    Ok(())
}

fn run_flag(json: bool, n: usize, lines: &[usize], level: u32, prec: Option<usize>) -> Outcome {
    let &[i, j] = lines else {
        return Err(Failure::Input("--lines takes exactly two indices".into()));
    };
    let report = TransferReport::from(&flag_report(n, i, j, Level::new(level)?, prec)?);
    emit(json, &report, || report.render());
    Ok(())
}

#[derive(Serialize)]
struct EOut {
    n: u32,
    index: String,
    e: String,
}

fn run_e_transfer(json: bool, n: u32, index: &BigInt) -> Outcome {
    let out = EOut {
        n,
        index: index.to_string(),
        e: fmt_rational(&e_single(n, index)?),
    };
    emit(json, &out, || format!("e = {} mod 1", out.e));
    Ok(())
}

fn run_verify(json: bool, prec: Option<usize>, fault_name: Option<&str>) -> Outcome {
    let items = match fault_name {
        Some(name) => {
            let g: Generator = name.parse()?;
            fault::with_corrupted_generator(g, || verify::run_verify_paper(prec))
        }
        None => verify::run_verify_paper(prec),
    };
    let count = |s| items.iter().filter(|i| i.status == s).count();
    let report = VerificationReport {
        passed: count(Status::Pass),
        failed: count(Status::Fail),
        errors: count(Status::Error),
        items,
    };
    emit(json, &report, || {
        let mut lines: Vec<String> = report
            .items
            .iter()
            .map(|i| {
                let tag = match i.status {
                    Status::Pass => "PASS",
                    Status::Fail => "FAIL",
                    Status::Error => "ERROR",
                };
                format!("{tag:5} {:40} [{}] {}", i.id, i.anchor, i.details)
            })
            .collect();
        lines.push(format!(
            "{} passed, {} failed, {} errors",
            report.passed, report.failed, report.errors
        ));
        lines.join("\n")
    });
    if report.failed > 0 {
        Err(Failure::Verification)
    } else if report.errors > 0 {
        Err(Failure::Compute(format!("{} items could not be evaluated", report.errors)))
    } else {
        Ok(())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let json = cli.json;
    let outcome = match &cli.command {
        Command::Eis { level, name, prec } => run_eis(json, *level, name, *prec),
        Command::Series {
            which,
            level,
            deg,
            prec,
        } => run_series(json, *which, *level, *deg, *prec),
        Command::ReduceCohomology { n, poly } => run_reduce(json, *n, poly),
        Command::FTransfer { input, prec } => run_f_transfer(json, input, *prec),
        Command::Flag { n, lines, level, prec } => run_flag(json, *n, lines, *level, *prec),
        Command::ETransfer { n, index } => run_e_transfer(json, *n, index),
        Command::VerifyPaper { prec, inject_fault } => run_verify(json, *prec, inject_fault.as_deref()),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Compute(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Verification) => ExitCode::from(3),
    }
}
