use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, Subcommand, ValueEnum};
use spherilink::{ProjectiveReal, SectorAngles};
use spherilink_cli::document::DEFAULT_TOLERANCE;
use spherilink_cli::{
    angles_in, exit, oracle, sample_document, uniform_grid, AngleUnit, BranchDocument, ClassifyReport, DocumentError,
};

#[derive(Parser)]
#[command(name = "spherilink", version, about = "Kinematics of degree-4 origami vertices")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(clap::Args)]
struct Angles {
    /// Sector angles α β γ δ, radians unless --deg.
    #[arg(num_args = 4, value_names = ["ALPHA", "BETA", "GAMMA", "DELTA"], required = true)]
    angles: Vec<f64>,
    /// Read the angles in degrees.
    #[arg(long)]
    deg: bool,
}

impl Angles {
    fn parse(&self) -> spherilink::Result<SectorAngles> {
        let unit = if self.deg { AngleUnit::Deg } else { AngleUnit::Rad };
        angles_in(unit, [self.angles[0], self.angles[1], self.angles[2], self.angles[3]])
    }
}

#[derive(Subcommand)]
enum Command {
    /// Print the vertex type, σ, relation coefficients and, when defined, M and amplitudes.
    Classify {
        #[command(flatten)]
        angles: Angles,
        /// Emit JSON instead of the text report.
        #[arg(long, value_enum)]
        format: Option<Format>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Sample every branch and emit the branch document.
    Sample {
        #[command(flatten)]
        angles: Angles,
        /// Samples per branch.
        #[arg(long, default_value_t = 257, value_parser = clap::value_parser!(u32).range(2..))]
        n: u32,
        /// Closure residual every sample must stay below.
        #[arg(long, default_value_t = DEFAULT_TOLERANCE)]
        tol: f64,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Solve the relations at given x values and keep the tuples that close.
    #[command(allow_negative_numbers = true)]
    Oracle {
        #[command(flatten)]
        angles: Angles,
        /// Comma-separated x values (`inf` allowed).
        #[arg(long, value_delimiter = ',', num_args = 0..=1, allow_hyphen_values = true, conflicts_with = "n")]
        xs: Option<Vec<String>>,
        /// Uniform grid of n fold angles for x.
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, default_value_t = DEFAULT_TOLERANCE)]
        tol: f64,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Recompute the closure residual of every row of a branch document.
    Verify { document: PathBuf },
}

fn emit(out: &Option<PathBuf>, body: &[u8]) -> anyhow::Result<()> {
    match out {
        Some(path) => fs::write(path, body).with_context(|| format!("writing {}", path.display())),
        None => io::stdout().write_all(body).context("writing stdout"),
    }
}

fn json(value: &impl serde::Serialize) -> anyhow::Result<Vec<u8>> {
    let mut body = serde_json::to_vec_pretty(value)?;
    body.push(b'\n');
    Ok(body)
}

fn parse_x(text: &str) -> anyhow::Result<ProjectiveReal> {
    let t = text.trim();
    if t == "inf" {
        return Ok(ProjectiveReal::Infinity);
    }
    Ok(ProjectiveReal::from_f64(t.parse().with_context(|| format!("bad x value {t:?}"))?))
}

/// Exit code for a library error.
fn code_for(err: &spherilink::Error) -> u8 {
    match err {
        spherilink::Error::NearDegenerate(_) => exit::NEAR_DEGENERATE,
        spherilink::Error::OutOfRange { .. }
        | spherilink::Error::QuadrilateralInequality(_)
        | spherilink::Error::NonFinite(_) => exit::INVALID_INPUT,
        _ => 1,
    }
}

fn fail(code: u8, msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(code)
}

fn run(cli: Cli) -> anyhow::Result<ExitCode> {
    match cli.command {
        Command::Classify { angles, format, out } => {
            let angles = match angles.parse() {
                Ok(a) => a,
                Err(e) => return Ok(fail(code_for(&e), e)),
            };
            let report = ClassifyReport::new(&angles);
            match format {
                None => emit(&out, report.to_string().as_bytes())?,
                Some(Format::Json) => emit(&out, &json(&report)?)?,
                Some(Format::Csv) => return Ok(fail(exit::INVALID_INPUT, "classify has no CSV form")),
            }
        }
        Command::Sample { angles, n, tol, format, out } => {
            let angles = match angles.parse() {
                Ok(a) => a,
                Err(e) => return Ok(fail(code_for(&e), e)),
            };
            let doc = match sample_document(&angles, n as usize, tol) {
                Ok(d) => d,
                Err(DocumentError::Library(e)) => return Ok(fail(code_for(&e), e)),
                Err(e @ DocumentError::Residual { .. }) => return Ok(fail(exit::VERIFY_FAILED, e)),
                Err(e) => return Err(e.into()),
            };
            match format {
                Format::Json => emit(&out, &json(&doc)?)?,
                Format::Csv => {
                    let mut body = Vec::new();
                    doc.write_csv(&mut body)?;
                    emit(&out, &body)?;
                }
            }
        }
        Command::Oracle { angles, xs, n, tol, format, out } => {
            let angles = match angles.parse() {
                Ok(a) => a,
                Err(e) => return Ok(fail(code_for(&e), e)),
            };
            let grid = match (xs, n) {
                (Some(xs), _) => {
                    xs.iter().filter(|t| !t.trim().is_empty()).map(|t| parse_x(t)).collect::<anyhow::Result<Vec<_>>>()?
                }
                (None, Some(n)) => uniform_grid(n),
                (None, None) => uniform_grid(101),
            };
            let cloud = oracle(&angles, &grid, tol);
            match format {
                Format::Json => emit(&out, &json(&cloud)?)?,
                Format::Csv => {
                    let mut body = Vec::new();
                    cloud.write_csv(&mut body)?;
                    emit(&out, &body)?;
                }
            }
        }
        Command::Verify { document } => {
            let text = fs::read_to_string(&document).with_context(|| format!("reading {}", document.display()))?;
            let doc = match BranchDocument::from_json(&text) {
                Ok(d) => d,
                Err(e) => return Ok(fail(exit::SCHEMA, e)),
            };
            let bad = doc.failing_rows();
            if !bad.is_empty() {
                for r in &bad {
                    eprintln!("branch {} row {} (s = {}): residual {:e}", r.branch_id, r.index, r.s, r.residual);
                }
                return Ok(fail(exit::VERIFY_FAILED, format!("{} rows reach tolerance {:e}", bad.len(), doc.tolerance)));
            }
            let rows: usize = doc.branches.iter().map(|b| b.samples.len()).sum();
            println!("ok: {rows} rows below {:e}", doc.tolerance);
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => fail(1, format!("{e:#}")),
    }
}
