//! The `bernstein` command line.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::certifier::{build_fejer_family, check_condition, Certificate, Verdict, DEFAULT_TOL};
use crate::io::{parse_polynomial, write_polynomial};
use crate::poly::SparsePolynomial;
use crate::roots::{find_roots, RootError, RootFindReport, DEFAULT_ROOT_TOL};
use crate::verifier::{self, VerificationReport, VerifyError};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 2;
pub const EXIT_INCONCLUSIVE: i32 = 3;
pub const EXIT_INPUT: i32 = 64;
pub const EXIT_NUMERIC: i32 = 65;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Parser)]
#[command(
    name = "bernstein",
    version,
    about = "Certify and verify pointwise Bernstein inequalities"
)]
struct Args {
    #[command(subcommand)]
    command: CommandArgs,
    /// Certification tolerance.
    #[arg(long, global = true, default_value_t = DEFAULT_TOL)]
    tol: f64,
    /// Random disk samples per verification check.
    #[arg(long, global = true, default_value_t = 100_000)]
    samples: usize,
    #[arg(long, global = true, default_value_t = 42)]
    seed: u64,
    /// Output path (stdout when absent).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Debug, Subcommand)]
enum CommandArgs {
    /// Decide the tail condition and print a certificate.
    Certify { input: PathBuf },
    /// Run every applicable inequality check (or dump a CSV ratio grid).
    Verify {
        input: PathBuf,
        /// Grid points per axis for `--format csv`.
        #[arg(long, default_value_t = 101)]
        grid: usize,
    },
    /// Find all zeros.
    Roots { input: PathBuf },
    /// Write the Fejér example polynomial of index N.
    Fejer {
        #[arg(long)]
        n: u32,
    },
    /// Certify, verify and find roots in one report.
    Suite { input: PathBuf },
}

#[derive(Debug, Clone, PartialEq)]
pub enum Command {
    Certify,
    Verify { grid: usize },
    Roots,
    Fejer { n: u32 },
    Suite,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub input_path: Option<PathBuf>,
    pub tol: f64,
    pub samples: usize,
    pub seed: u64,
    pub output: Option<PathBuf>,
    pub format: Format,
}

impl RunConfig {
    fn from_args(args: Args) -> Result<Self, String> {
        if !(args.tol > 0.0 && args.tol.is_finite()) {
            return Err(format!("--tol must be positive, got {}", args.tol));
        }
        if args.samples == 0 {
            return Err("--samples must be at least 1".into());
        }
        let (command, input_path) = match args.command {
            CommandArgs::Certify { input } => (Command::Certify, Some(input)),
            CommandArgs::Verify { input, grid } => (Command::Verify { grid }, Some(input)),
            CommandArgs::Roots { input } => (Command::Roots, Some(input)),
            CommandArgs::Fejer { n } => (Command::Fejer { n }, None),
            CommandArgs::Suite { input } => (Command::Suite, Some(input)),
        };
        if args.format == Format::Csv && !matches!(command, Command::Verify { .. }) {
            return Err("--format csv is only available for `verify` grid dumps".into());
        }
        Ok(RunConfig {
            command,
            input_path,
            tol: args.tol,
            samples: args.samples,
            seed: args.seed,
            output: args.out,
            format: args.format,
        })
    }
}

/// Text to emit and the exit status.
struct Outcome {
    body: String,
    code: i32,
    summary: Option<String>,
}

#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn input(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_INPUT,
            message: message.into(),
        }
    }
}

impl From<RootError> for Failure {
    fn from(e: RootError) -> Self {
        Failure {
            code: EXIT_NUMERIC,
            message: e.to_string(),
        }
    }
}

fn load(path: &Path) -> Result<SparsePolynomial, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
    parse_polynomial(&text).map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

fn pretty<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("report serializes");
    s.push('\n');
    s
}

fn certify_code(cert: &Certificate) -> i32 {
    match cert.verdict {
        Verdict::Certified | Verdict::CertifiedTight => EXIT_OK,
        Verdict::Rejected => EXIT_FAILED,
        Verdict::Inconclusive => EXIT_INCONCLUSIVE,
    }
}

fn certify(p: &SparsePolynomial, tol: f64) -> Result<Certificate, Failure> {
    check_condition(p, tol).map_err(|e| Failure::input(e.to_string()))
}

fn roots_report(p: &SparsePolynomial) -> Result<RootFindReport, Failure> {
    if p.degree() == 0 {
        return Ok(RootFindReport {
            roots: Default::default(),
            max_residual: 0.0,
            iterations: 0,
            inferred_multiplicity: false,
        });
    }
    Ok(find_roots(p, DEFAULT_ROOT_TOL)?)
}

struct VerifySet {
    reports: Vec<VerificationReport>,
    skipped: Vec<(String, String)>,
}

impl VerifySet {
    fn code(&self) -> i32 {
        if self.reports.iter().all(|r| r.passed) {
            EXIT_OK
        } else {
            EXIT_FAILED
        }
    }

    fn to_value(&self) -> Value {
        let reports: Vec<Value> = self
            .reports
            .iter()
            .map(|r| serde_json::to_value(r.to_json()).expect("report serializes"))
            .collect();
        let skipped: Vec<Value> = self
            .skipped
            .iter()
            .map(|(check, reason)| json!({ "check": check, "reason": reason }))
            .collect();
        json!({ "reports": reports, "not_applicable": skipped })
    }
}

/// Checks whose hypotheses hold for `p`. The tail-condition conclusions are
/// only checked when the condition certifies.
fn verify_all(p: &SparsePolynomial, cert: &Certificate, samples: usize, seed: u64) -> Result<VerifySet, Failure> {
    let mut set = VerifySet {
        reports: Vec::new(),
        skipped: Vec::new(),
    };
    let mut push = |name: &str, r: Result<VerificationReport, VerifyError>| -> Result<(), Failure> {
        match r {
            Ok(report) => set.reports.push(report),
            Err(VerifyError::NotApplicable(reason)) => set.skipped.push((name.to_string(), reason)),
            Err(VerifyError::Roots(e)) => return Err(e.into()),
            Err(e) => return Err(Failure::input(e.to_string())),
        }
        Ok(())
    };
    let uncertified = || {
        Err(VerifyError::NotApplicable(format!(
            "tail condition is {:?}",
            cert.verdict
        )))
    };
    let certified = cert.verdict.holds();

    push(
        "pointwise_bernstein",
        if certified {
            verifier::verify_pointwise_bernstein(p, samples, seed)
        } else {
            uncertified()
        },
    )?;
    push(
        "strict_interior",
        if certified {
            verifier::verify_strict_interior(p, samples, seed)
        } else {
            uncertified()
        },
    )?;
    push(
        "tail_chain",
        if certified {
            verifier::verify_tail_chain(p, samples, seed)
        } else {
            uncertified()
        },
    )?;
    push("aziz", verifier::verify_aziz(p, samples, seed))?;
    push("combined_min", verifier::verify_combined_min(p, samples, seed))?;
    push(
        "circle_bernstein",
        verifier::verify_circle_bernstein(p, samples.min(1 << 16), seed),
    )?;
    Ok(set)
}

fn execute(config: &RunConfig) -> Result<Outcome, Failure> {
    let input = || load(config.input_path.as_deref().expect("command takes an input"));
    match config.command {
        Command::Fejer { n } => {
            let p = build_fejer_family(n).map_err(|e| Failure::input(e.to_string()))?;
            let mut body = write_polynomial(&p);
            body.push('\n');
            Ok(Outcome {
                body,
                code: EXIT_OK,
                summary: None,
            })
        }
        Command::Certify => {
            let p = input()?;
            let cert = certify(&p, config.tol)?;
            Ok(Outcome {
                body: pretty(&cert.to_json()),
                code: certify_code(&cert),
                summary: None,
            })
        }
        Command::Roots => {
            let p = input()?;
            Ok(Outcome {
                body: pretty(&roots_report(&p)?.to_json()),
                code: EXIT_OK,
                summary: None,
            })
        }
        Command::Verify { grid } => {
            let p = input()?;
            if config.format == Format::Csv {
                let body = verifier::bernstein_grid_csv(&p, grid).map_err(|e| Failure::input(e.to_string()))?;
                return Ok(Outcome {
                    body,
                    code: EXIT_OK,
                    summary: None,
                });
            }
            let cert = certify(&p, config.tol)?;
            let set = verify_all(&p, &cert, config.samples, config.seed)?;
            Ok(Outcome {
                body: pretty(&set.to_value()),
                code: set.code(),
                summary: None,
            })
        }
        Command::Suite => {
            let p = input()?;
            let cert = certify(&p, config.tol)?;
            let set = verify_all(&p, &cert, config.samples, config.seed)?;
            let (roots, roots_code) = match roots_report(&p) {
                Ok(r) => (serde_json::to_value(r.to_json()).expect("report serializes"), EXIT_OK),
                Err(f) => (json!({ "error": f.message }), f.code),
            };
            let code = certify_code(&cert).max(set.code()).max(roots_code);
            let passed = set.reports.iter().filter(|r| r.passed).count();
            let summary = format!(
                "verdict {:?}, margin {:.3e}; {}/{} checks passed, {} not applicable; exit {}",
                cert.verdict,
                cert.margin,
                passed,
                set.reports.len(),
                set.skipped.len(),
                code
            );
            let body = pretty(&json!({
                "certificate": serde_json::to_value(cert.to_json()).expect("certificate serializes"),
                "verification": set.to_value(),
                "roots": roots,
                "summary": summary,
            }));
            Ok(Outcome {
                body,
                code,
                summary: Some(summary),
            })
        }
    }
}

/// Replaces `path` with `body` via a sibling temporary file.
fn write_atomic(path: &Path, body: &str) -> std::io::Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(body.as_bytes())?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}

/// Parses `argv` (program name first), runs, and returns the exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let args = match Args::try_parse_from(argv) {
        Ok(a) => a,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
        }
    };
    let config = match RunConfig::from_args(args) {
        Ok(c) => c,
        Err(msg) => {
            eprintln!("error: {msg}");
            return EXIT_INPUT;
        }
    };
    match execute(&config) {
        Ok(outcome) => {
            let written = match &config.output {
                Some(path) => write_atomic(path, &outcome.body),
                None => std::io::stdout().write_all(outcome.body.as_bytes()),
            };
            if let Err(e) = written {
                eprintln!("error: writing output: {e}");
                return EXIT_INPUT;
            }
            if let Some(s) = outcome.summary {
                eprintln!("{s}");
            }
            outcome.code
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            f.code
        }
    }
}
