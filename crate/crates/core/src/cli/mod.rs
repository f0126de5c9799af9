//! Command implementations for the `hypoent` binary.
//!
//! Exit codes: 0 success, 1 verification failure, 2 argument error,
//! 3 quadrature did not converge, 4 I/O failure.

pub mod figure;
pub mod format;
pub mod verify;

use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde::ser::{SerializeMap, Serializer};
use serde::Serialize;
use thiserror::Error;

use crate::dist::{HypoexpTwo, RatePair};
use crate::entropy::{cond_entropy_light, hypoexp_entropy, mutual_info_aen, LightGatedModel};
use crate::error::Error as LibError;
use crate::oracle::{entropy_monte_carlo, entropy_quadrature, QuadratureConfig};
use figure::{fig1_rows, fig2_rows, FigureId, FIG1_HEADER, FIG2_HEADER};
use format::sig17;

#[derive(Debug, Parser)]
#[command(
    name = "hypoent",
    version,
    about = "Differential entropy of the sum of two independent exponentials"
)]
pub struct Cli {
    /// Output format for records and figure data.
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Csv)]
    pub format: OutputFormat,

    /// Write output to this file instead of stdout.
    #[arg(long, global = true, value_name = "PATH")]
    pub out: Option<PathBuf>,

    /// Absolute tolerance for quadrature (default 1e-10).
    #[arg(long, global = true, value_parser = positive_real)]
    pub tol: Option<f64>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Closed,
    Quad,
    Mc,
}

impl Method {
    fn as_str(self) -> &'static str {
        match self {
            Method::Closed => "closed",
            Method::Quad => "quad",
            Method::Mc => "mc",
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Entropy of W + X in nats.
    Entropy {
        /// Rate of the noise stage W.
        #[arg(long, allow_negative_numbers = true, value_parser = positive_real)]
        lambda_w: f64,
        /// Rate of the signal stage X.
        #[arg(long, allow_negative_numbers = true, value_parser = positive_real)]
        lambda_x: f64,
        /// Closed form, quadrature or Monte-Carlo.
        #[arg(long, value_enum, default_value_t = Method::Closed)]
        method: Method,
        /// Sample count (required for --method mc).
        #[arg(long)]
        n: Option<usize>,
        /// Generator seed (required for --method mc).
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Mutual information of the additive exponential noise channel.
    Mi {
        /// Rate of the exponential signal.
        #[arg(long, allow_negative_numbers = true, value_parser = positive_real)]
        signal_rate: f64,
        /// Rate of the exponential noise.
        #[arg(long, allow_negative_numbers = true, value_parser = positive_real)]
        noise_rate: f64,
    },
    /// Conditional entropy h(Y | L) of the light-gated model.
    CondEntropy {
        /// Rate of the signal stage X.
        #[arg(long, allow_negative_numbers = true, value_parser = positive_real)]
        lambda_x: f64,
        /// Noise rate while the light is on.
        #[arg(long, allow_negative_numbers = true, value_parser = positive_real)]
        lambda_w_on: f64,
        /// Noise rate while the light is off.
        #[arg(long, allow_negative_numbers = true, value_parser = positive_real)]
        lambda_w_off: f64,
        /// Probability that the light is on.
        #[arg(long, allow_negative_numbers = true, value_parser = probability)]
        p_on: f64,
    },
    /// Data behind figure 1 or figure 2.
    Figure {
        /// Which figure to tabulate.
        #[arg(long, value_enum)]
        figure: FigureId,
        /// Points per curve.
        #[arg(long, default_value_t = 200, value_parser = at_least_two)]
        grid_points: usize,
    },
    /// Compare the closed forms against the numerical oracles.
    Verify {
        /// First Monte-Carlo seed; five consecutive seeds are used.
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Monte-Carlo samples per run.
        #[arg(long, default_value_t = 100_000, value_parser = at_least_two)]
        samples: usize,
        /// Added to every closed-form value; used to check the suite fails.
        #[arg(
            long,
            hide = true,
            default_value_t = 0.0,
            allow_negative_numbers = true
        )]
        perturb_closed: f64,
    },
}

fn positive_real(s: &str) -> Result<f64, String> {
    let v: f64 = s.parse().map_err(|_| format!("`{s}` is not a number"))?;
    if v.is_finite() && v > 0.0 {
        Ok(v)
    } else {
        Err(format!("must be positive and finite, got {s}"))
    }
}

fn probability(s: &str) -> Result<f64, String> {
    let v: f64 = s.parse().map_err(|_| format!("`{s}` is not a number"))?;
    if (0.0..=1.0).contains(&v) {
        Ok(v)
    } else {
        Err(format!("must lie in [0, 1], got {s}"))
    }
}

fn at_least_two(s: &str) -> Result<usize, String> {
    let v: usize = s.parse().map_err(|_| format!("`{s}` is not a count"))?;
    if v >= 2 {
        Ok(v)
    } else {
        Err(format!("must be at least 2, got {s}"))
    }
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Convergence(String),
    #[error("{0}")]
    Io(String),
    #[error("verification failed")]
    VerificationFailed,
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::VerificationFailed => 1,
            CliError::Usage(_) => 2,
            CliError::Convergence(_) => 3,
            CliError::Io(_) => 4,
        }
    }
}

impl From<LibError> for CliError {
    fn from(e: LibError) -> Self {
        match e {
            LibError::Domain(_) => CliError::Usage(e.to_string()),
            LibError::Convergence { .. } => CliError::Convergence(e.to_string()),
        }
    }
}

/// One value in a printed record.
#[derive(Debug, Clone)]
enum Field {
    Real(f64),
    Count(u64),
    Text(&'static str),
}

impl Field {
    fn render(&self) -> String {
        match self {
            Field::Real(x) => sig17(*x),
            Field::Count(n) => n.to_string(),
            Field::Text(s) => (*s).to_owned(),
        }
    }
}

impl Serialize for Field {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Field::Real(x) => s.serialize_f64(*x),
            Field::Count(n) => s.serialize_u64(*n),
            Field::Text(t) => s.serialize_str(t),
        }
    }
}

/// Ordered key/value record, printed as a one-row CSV or a JSON object.
struct Record(Vec<(&'static str, Field)>);

impl Serialize for Record {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(self.0.len()))?;
        for (k, v) in &self.0 {
            map.serialize_entry(k, v)?;
        }
        map.end()
    }
}

fn csv_bytes<I, R>(header: &[&str], rows: I) -> Result<Vec<u8>, CliError>
where
    I: IntoIterator<Item = R>,
    R: IntoIterator<Item = String>,
{
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    let io = |e: csv::Error| CliError::Io(e.to_string());
    w.write_record(header).map_err(io)?;
    for row in rows {
        w.write_record(row).map_err(io)?;
    }
    w.into_inner().map_err(|e| CliError::Io(e.to_string()))
}

fn json_bytes<T: Serialize + ?Sized>(value: &T) -> Result<Vec<u8>, CliError> {
    let mut bytes = serde_json::to_vec_pretty(value).map_err(|e| CliError::Io(e.to_string()))?;
    bytes.push(b'\n');
    Ok(bytes)
}

fn render_record(format: OutputFormat, record: &Record) -> Result<Vec<u8>, CliError> {
    match format {
        OutputFormat::Csv => {
            let header: Vec<&str> = record.0.iter().map(|(k, _)| *k).collect();
            csv_bytes(&header, [record.0.iter().map(|(_, v)| v.render())])
        }
        OutputFormat::Json => json_bytes(record),
    }
}

/// Produces the output of a command without writing it anywhere.
///
/// A failed verification still returns its report alongside the error.
pub fn render(cli: &Cli) -> Result<Vec<u8>, (Option<Vec<u8>>, CliError)> {
    let cfg = match cli.tol {
        Some(tol) => QuadratureConfig::new(tol, QuadratureConfig::default().max_subdivisions)
            .map_err(|e| (None, e.into()))?,
        None => QuadratureConfig::default(),
    };
    match &cli.command {
        Command::Verify {
            seed,
            samples,
            perturb_closed,
        } => {
            let results = verify::run_suite(*seed, *samples, &cfg, *perturb_closed);
            let ok = results.iter().all(verify::CheckResult::passed);
            let bytes = match cli.format {
                OutputFormat::Csv => verify::render_report(&results).into_bytes(),
                OutputFormat::Json => {
                    let rows: Vec<Record> = results
                        .iter()
                        .map(|r| {
                            Record(vec![
                                ("check", Field::Text(r.name)),
                                ("cases", Field::Count(r.cases as u64)),
                                ("worst", Field::Real(r.worst)),
                                ("limit", Field::Real(r.limit)),
                                (
                                    "status",
                                    Field::Text(if r.passed() { "pass" } else { "fail" }),
                                ),
                            ])
                        })
                        .collect();
                    json_bytes(&rows).map_err(|e| (None, e))?
                }
            };
            if ok {
                Ok(bytes)
            } else {
                Err((Some(bytes), CliError::VerificationFailed))
            }
        }
        other => render_simple(other, cli.format, &cfg).map_err(|e| (None, e)),
    }
}

fn render_simple(
    command: &Command,
    format: OutputFormat,
    cfg: &QuadratureConfig,
) -> Result<Vec<u8>, CliError> {
    match *command {
        Command::Entropy {
            lambda_w,
            lambda_x,
            method,
            n,
            seed,
        } => {
            let rates = RatePair::new(lambda_w, lambda_x)?;
            let mut fields = vec![
                ("method", Field::Text(method.as_str())),
                ("lambda_w", Field::Real(lambda_w)),
                ("lambda_x", Field::Real(lambda_x)),
            ];
            match method {
                Method::Closed => {
                    fields.push(("entropy_nats", Field::Real(hypoexp_entropy(rates).value())));
                }
                Method::Quad => {
                    let h = entropy_quadrature(&HypoexpTwo::new(rates), cfg)?;
                    fields.push(("entropy_nats", Field::Real(h.value())));
                }
                Method::Mc => {
                    let (n, seed) = match (n, seed) {
                        (Some(n), Some(seed)) => (n, seed),
                        _ => {
                            return Err(CliError::Usage(
                                "--method mc requires both --n and --seed".into(),
                            ))
                        }
                    };
                    if n < 2 {
                        return Err(CliError::Usage(format!("--n must be at least 2, got {n}")));
                    }
                    let est = entropy_monte_carlo(&HypoexpTwo::new(rates), n, seed)?;
                    fields.push(("entropy_nats", Field::Real(est.estimate)));
                    fields.push(("std_error", Field::Real(est.std_error)));
                    fields.push(("n_samples", Field::Count(est.n_samples as u64)));
                }
            }
            render_record(format, &Record(fields))
        }
        Command::Mi {
            signal_rate,
            noise_rate,
        } => {
            let mi = mutual_info_aen(signal_rate, noise_rate)?;
            render_record(
                format,
                &Record(vec![
                    ("signal_rate", Field::Real(signal_rate)),
                    ("noise_rate", Field::Real(noise_rate)),
                    ("mutual_info_nats", Field::Real(mi.value())),
                    ("units", Field::Text("nats per server request")),
                ]),
            )
        }
        Command::CondEntropy {
            lambda_x,
            lambda_w_on,
            lambda_w_off,
            p_on,
        } => {
            let model = LightGatedModel::new(lambda_x, lambda_w_on, lambda_w_off, p_on)?;
            render_record(
                format,
                &Record(vec![
                    ("lambda_x", Field::Real(lambda_x)),
                    ("lambda_w_on", Field::Real(lambda_w_on)),
                    ("lambda_w_off", Field::Real(lambda_w_off)),
                    ("p_on", Field::Real(p_on)),
                    ("entropy_off_nats", Field::Real(model.entropy_off().value())),
                    ("entropy_on_nats", Field::Real(model.entropy_on().value())),
                    (
                        "cond_entropy_nats",
                        Field::Real(cond_entropy_light(&model).value()),
                    ),
                ]),
            )
        }
        Command::Figure {
            figure,
            grid_points,
        } => match (figure, format) {
            (FigureId::Fig1, OutputFormat::Csv) => csv_bytes(
                &FIG1_HEADER,
                fig1_rows(grid_points)?.iter().map(|r| r.csv_fields()),
            ),
            (FigureId::Fig1, OutputFormat::Json) => json_bytes(&fig1_rows(grid_points)?),
            (FigureId::Fig2, OutputFormat::Csv) => csv_bytes(
                &FIG2_HEADER,
                fig2_rows(grid_points)?.iter().map(|r| r.csv_fields()),
            ),
            (FigureId::Fig2, OutputFormat::Json) => json_bytes(&fig2_rows(grid_points)?),
        },
        Command::Verify { .. } => unreachable!("handled by render"),
    }
}

/// Runs a parsed command, sending output to `--out` or `stdout`.
pub fn run<W: Write>(cli: &Cli, stdout: &mut W) -> Result<(), CliError> {
    let (bytes, outcome) = match render(cli) {
        Ok(bytes) => (bytes, Ok(())),
        Err((Some(bytes), err)) => (bytes, Err(err)),
        Err((None, err)) => return Err(err),
    };
    match &cli.out {
        Some(path) => std::fs::write(path, &bytes)
            .map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display())))?,
        None => stdout
            .write_all(&bytes)
            .and_then(|_| stdout.flush())
            .map_err(|e| CliError::Io(e.to_string()))?,
    }
    outcome
}
