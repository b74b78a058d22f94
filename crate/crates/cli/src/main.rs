//! `cohbell`: evaluate, scan, threshold-search and optimize the tripartite
//! coherence and skew-information functionals, and run the verification suite.

mod spec;

use std::fmt::Write as _;
use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use coherence_bell::bell::{threshold_bisect, DEFAULT_BISECT_TOLERANCE};
use coherence_bell::verify::{self, BoundTable};
use coherence_bell::{
    evaluate_family, optimize_settings, product_bound, BellReport, Error, Family, FamilyCurve,
    FunctionalKind,
};
use rayon::prelude::*;
use serde::Serialize;

use spec::{Bracket, Grid, SettingsSpec, StateSpec};

#[derive(Debug)]
pub enum CliError {
    Verify,
    Parse(String),
    State(String),
    Io(String),
    Threshold(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Verify => 1,
            CliError::Parse(_) => 2,
            CliError::State(_) => 3,
            CliError::Io(_) => 4,
            CliError::Threshold(_) => 5,
        }
    }
}

#[derive(Parser)]
#[command(
    name = "cohbell",
    version,
    about = "Tripartite Bell-type functionals for coherence and skew information"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate one functional on one state and print a JSON report.
    Eval {
        /// w, ghz, w-pure:θ,φ, ghz-pure:θ, w-werner:p, ghz-werner:p or file:path
        #[arg(long)]
        state: StateSpec,
        /// example1, example2 or angles:<12 comma-separated radians>
        #[arg(long, default_value = "example1")]
        settings: SettingsSpec,
        /// mabk, l1, rel-ent or skew
        #[arg(long)]
        kind: FunctionalKind,
    },
    /// Evaluate a functional over a parameter grid of a state family.
    Scan {
        /// w-pure, ghz-pure, w-werner or ghz-werner
        family: Family,
        #[arg(long)]
        kind: FunctionalKind,
        #[arg(long, default_value = "example1")]
        settings: SettingsSpec,
        /// Axes joined by `x`: each `lo:hi:n` (closed) or `n` (interior points of the domain)
        #[arg(long)]
        grid: Grid,
        /// Output file; stdout when absent
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
    },
    /// Locate where a one-parameter family crosses the product bound.
    Threshold {
        family: Family,
        #[arg(long)]
        kind: FunctionalKind,
        #[arg(long, default_value = "example1")]
        settings: SettingsSpec,
        /// lo..hi
        #[arg(long, default_value = "0..1")]
        bracket: Bracket,
    },
    /// Search measurement directions that maximize a functional.
    Optimize {
        #[arg(long)]
        state: StateSpec,
        #[arg(long)]
        kind: FunctionalKind,
        #[arg(long, default_value_t = 8)]
        restarts: usize,
        #[arg(long, default_value_t = 200)]
        iterations: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Run the verification suite; exit 1 if any row fails.
    Verify {
        /// Override a product bound, e.g. `l1=13`
        #[arg(long = "bound", value_parser = parse_bound_override)]
        bounds: Vec<(FunctionalKind, f64)>,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
    },
}

fn parse_bound_override(s: &str) -> Result<(FunctionalKind, f64), String> {
    let (k, v) = s.split_once('=').ok_or("expected KIND=VALUE")?;
    let kind = k.parse::<FunctionalKind>().map_err(|e| e.to_string())?;
    let value = v.parse::<f64>().map_err(|e| e.to_string())?;
    Ok((kind, value))
}

#[derive(Serialize)]
struct ReportJson<'a> {
    kind: &'a str,
    value: f64,
    bound: f64,
    violated: bool,
    settings: &'a str,
    state: &'a str,
}

impl<'a> From<&'a BellReport> for ReportJson<'a> {
    fn from(r: &'a BellReport) -> Self {
        Self {
            kind: r.kind.name(),
            value: r.value,
            bound: r.bound,
            violated: r.violated,
            settings: &r.settings,
            state: &r.state,
        }
    }
}

#[derive(Serialize)]
struct ScanRow {
    param1: f64,
    param2: Option<f64>,
    value: f64,
    bound: f64,
    violated: bool,
}

fn json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("plain data serializes")
}

fn core_error(e: Error) -> CliError {
    match e {
        Error::NoSignChange { .. } | Error::NotMonotone { .. } => {
            CliError::Threshold(e.to_string())
        }
        Error::ParameterOutOfRange(_) => CliError::Parse(e.to_string()),
        _ => CliError::State(e.to_string()),
    }
}

fn emit(text: &str, out: Option<&PathBuf>) -> Result<(), CliError> {
    match out {
        Some(path) => {
            fs::write(path, text).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
        }
        None => io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| CliError::Io(e.to_string())),
    }
}

fn scan(
    family: Family,
    kind: FunctionalKind,
    settings: SettingsSpec,
    grid: &Grid,
    format: Format,
) -> Result<String, CliError> {
    let points = grid.points(family)?;
    let curve = FamilyCurve::new(family, kind, settings.0);
    let bound = product_bound(kind);
    let rows = points
        .par_iter()
        .map(|p| {
            let value = evaluate_family(&curve, p)?;
            Ok(ScanRow {
                param1: p[0],
                param2: p.get(1).copied(),
                value,
                bound,
                violated: value > bound + coherence_bell::bell::VIOLATION_TOLERANCE,
            })
        })
        .collect::<Result<Vec<ScanRow>, Error>>()
        .map_err(core_error)?;
    Ok(match format {
        Format::Json => json(&rows) + "\n",
        Format::Csv => {
            let mut s = String::from("param1,param2,value,bound,violated\n");
            for r in &rows {
                let p2 = r.param2.map(|x| format!("{x:.16e}")).unwrap_or_default();
                writeln!(
                    s,
                    "{:.16e},{p2},{:.16e},{:.16e},{}",
                    r.param1, r.value, r.bound, r.violated
                )
                .unwrap();
            }
            s
        }
    })
}

fn run_verify(overrides: &[(FunctionalKind, f64)], format: Format) -> Result<(), CliError> {
    let mut bounds = BoundTable::default();
    for &(kind, value) in overrides {
        bounds.set(kind, value);
    }
    let rows = verify::run_suite(&bounds);
    let findings = verify::adjudication();
    let failed: Vec<_> = rows.iter().filter(|r| !r.passed).collect();
    match format {
        Format::Json => {
            #[derive(Serialize)]
            struct RowJson<'a> {
                criterion: u8,
                name: &'a str,
                value: f64,
                expected: &'a str,
                passed: bool,
            }
            #[derive(Serialize)]
            struct FindingJson<'a> {
                topic: &'a str,
                reference: &'a str,
                direct: &'a str,
                verdict: &'a str,
            }
            #[derive(Serialize)]
            struct Out<'a> {
                rows: Vec<RowJson<'a>>,
                adjudication: Vec<FindingJson<'a>>,
                passed: bool,
            }
            let out = Out {
                rows: rows
                    .iter()
                    .map(|r| RowJson {
                        criterion: r.criterion,
                        name: &r.name,
                        value: r.value,
                        expected: &r.expected,
                        passed: r.passed,
                    })
                    .collect(),
                adjudication: findings
                    .iter()
                    .map(|f| FindingJson {
                        topic: &f.topic,
                        reference: &f.reference,
                        direct: &f.direct,
                        verdict: &f.verdict,
                    })
                    .collect(),
                passed: failed.is_empty(),
            };
            println!("{}", json(&out));
        }
        Format::Csv => {
            for r in &rows {
                println!(
                    "{} [{:>2}] {}: value {:.15e}, expected {}",
                    if r.passed { "PASS" } else { "FAIL" },
                    r.criterion,
                    r.name,
                    r.value,
                    r.expected
                );
            }
            println!("\nadjudication:");
            for f in &findings {
                println!(
                    "- {}\n    reference: {}\n    direct:    {}\n    verdict:   {}",
                    f.topic, f.reference, f.direct, f.verdict
                );
            }
            println!("\n{}/{} rows passed", rows.len() - failed.len(), rows.len());
            if !failed.is_empty() {
                println!("failing rows:");
                for r in &failed {
                    println!("  [{}] {}", r.criterion, r.name);
                }
            }
        }
    }
    if failed.is_empty() {
        Ok(())
    } else {
        Err(CliError::Verify)
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Eval {
            state,
            settings,
            kind,
        } => {
            let rho = state.load()?;
            let label = state.to_string();
            let report =
                BellReport::evaluate(kind, &rho, &settings.0, label).map_err(core_error)?;
            println!("{}", json(&ReportJson::from(&report)));
        }
        Command::Scan {
            family,
            kind,
            settings,
            grid,
            out,
            format,
        } => {
            let text = scan(family, kind, settings, &grid, format)?;
            emit(&text, out.as_ref())?;
        }
        Command::Threshold {
            family,
            kind,
            settings,
            bracket,
        } => {
            let curve = FamilyCurve::new(family, kind, settings.0);
            let p = threshold_bisect(&curve, (bracket.0, bracket.1), DEFAULT_BISECT_TOLERANCE)
                .map_err(core_error)?;
            let value = evaluate_family(&curve, &[p]).map_err(core_error)?;
            #[derive(Serialize)]
            struct Out {
                p_star: f64,
                value_at_p_star: f64,
                bound: f64,
            }
            println!(
                "{}",
                json(&Out {
                    p_star: p,
                    value_at_p_star: value,
                    bound: product_bound(kind)
                })
            );
        }
        Command::Optimize {
            state,
            kind,
            restarts,
            iterations,
            seed,
        } => {
            let rho = state.load()?;
            let best =
                optimize_settings(&rho, kind, restarts, iterations, seed).map_err(core_error)?;
            let bound = product_bound(kind);
            #[derive(Serialize)]
            struct Out {
                kind: &'static str,
                value: f64,
                bound: f64,
                violated: bool,
                angles: [f64; 12],
                seed: u64,
            }
            println!(
                "{}",
                json(&Out {
                    kind: kind.name(),
                    value: best.value,
                    bound,
                    violated: best.value > bound + coherence_bell::bell::VIOLATION_TOLERANCE,
                    angles: best.angles,
                    seed,
                })
            );
        }
        Command::Verify { bounds, format } => run_verify(&bounds, format)?,
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let text = e.to_string();
            eprintln!("{}", text.lines().next().unwrap_or("invalid arguments"));
            return ExitCode::from(2);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            match &e {
                CliError::Verify => eprintln!("verification failed"),
                CliError::Parse(m)
                | CliError::State(m)
                | CliError::Io(m)
                | CliError::Threshold(m) => {
                    eprintln!("error: {m}")
                }
            }
            ExitCode::from(e.code())
        }
    }
}
