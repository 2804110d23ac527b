//! `mbp`: moments, operators, orthogonal polynomials and the verification suite for
//! weights `W = T W~ T^T`, driven by JSON config files.

mod config;
mod output;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use mbp_core::diffops::bochner_parts;
use mbp_core::orthopoly::{monic_sequence_with, Precision, DEFAULT_N_MAX};
use mbp_core::verify::{run_suite, CheckStatus, SuiteKind, SuiteOptions, VerificationReport, DEFAULT_SEED};
use mbp_core::weights::{matrix_moments, MatrixWeightSpec, ValidatedSpec};
use mbp_core::MbpError;
use serde_json::{json, Value};

use crate::output::{matrix, matpoly, num, operator, SCHEMA};

#[derive(Parser)]
#[command(name = "mbp", version, about = "Singular Matrix Bochner weights from the command line")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum SuiteArg {
    All,
    Fast,
}

#[derive(Subcommand)]
enum Command {
    /// Check a config against every validity condition.
    Validate {
        #[arg(short, long)]
        config: PathBuf,
    },
    /// Moment matrices M_0..=M_K.
    Moments {
        #[arg(short, long)]
        config: PathBuf,
        #[arg(short = 'k', long = "order")]
        k: usize,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// The second-order operator D together with D~, K~, A and T.
    Operator {
        #[arg(short, long)]
        config: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Monic orthogonal polynomials with H_n, B_n and C_n.
    Orthopoly {
        #[arg(short, long)]
        config: PathBuf,
        #[arg(short = 'n', long = "n-max", default_value_t = DEFAULT_N_MAX)]
        n_max: usize,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Run the verification suite.
    Verify {
        #[arg(short, long)]
        config: PathBuf,
        #[arg(long, value_enum, default_value = "all")]
        suite: SuiteArg,
        /// Residual bound for the suite checks.
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        /// Write zero for every runtime so reports can be diffed.
        #[arg(long)]
        no_timings: bool,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

/// Failure with the process exit code it maps to.
#[derive(Debug)]
enum Failure {
    /// Unreadable or invalid configuration: exit 2.
    Config(anyhow::Error),
    /// Floating-point conditioning ran out: exit 3.
    Numerical(anyhow::Error),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Config(_) => 2,
            Failure::Numerical(_) => 3,
        }
    }
}

impl From<MbpError> for Failure {
    fn from(e: MbpError) -> Self {
        if e.is_numerical() {
            Failure::Numerical(e.into())
        } else {
            Failure::Config(e.into())
        }
    }
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Config(e)
    }
}

fn header(command: &str, spec: &MatrixWeightSpec) -> serde_json::Map<String, Value> {
    let mut m = serde_json::Map::new();
    m.insert("schema".into(), json!(SCHEMA));
    m.insert("command".into(), json!(command));
    m.insert("spec".into(), output::spec(spec));
    m
}

fn emit(doc: Value, path: Option<&Path>) -> Result<(), Failure> {
    let text = output::to_string(&doc);
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| Failure::Config(anyhow::anyhow!("writing {}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn validated(spec: &MatrixWeightSpec) -> Result<ValidatedSpec, Failure> {
    spec.validate().map_err(|e| {
        let names: Vec<&str> = spec.violations().iter().map(|v| v.name()).collect();
        Failure::Config(anyhow::anyhow!("{} ({})", e, names.join(", ")))
    })
}

fn precision_name(p: Precision) -> &'static str {
    match p {
        Precision::Binary64 => "f64",
        Precision::Extended => "extended",
    }
}

fn validate(config: &Path) -> Result<ExitCode, Failure> {
    let loaded = config::load(config)?;
    let violations = loaded.spec.violations();
    let mut doc = header("validate", &loaded.spec);
    doc.insert("valid".into(), json!(violations.is_empty()));
    doc.insert(
        "violations".into(),
        Value::Array(violations.iter().map(|v| json!({ "name": v.name(), "message": v.to_string() })).collect()),
    );
    emit(Value::Object(doc), None)?;
    if violations.is_empty() {
        eprintln!("valid");
        Ok(ExitCode::SUCCESS)
    } else {
        for v in &violations {
            eprintln!("{v}");
        }
        Ok(ExitCode::from(2))
    }
}

fn moments(config: &Path, k: usize, out: Option<&Path>) -> Result<ExitCode, Failure> {
    let loaded = config::load(config)?;
    let spec = validated(&loaded.spec)?;
    let table = matrix_moments(&spec, k)?;
    let mut doc = header("moments", &loaded.spec);
    doc.insert("k".into(), json!(k));
    doc.insert("moments".into(), Value::Array(table.entries().iter().map(matrix).collect()));
    // binary64 rounding error of each entry, so the exact double-double values survive
    doc.insert("tails".into(), Value::Array(table.tails().iter().map(matrix).collect()));
    emit(Value::Object(doc), out)?;
    Ok(ExitCode::SUCCESS)
}

fn operator_cmd(config: &Path, out: Option<&Path>) -> Result<ExitCode, Failure> {
    let loaded = config::load(config)?;
    let spec = validated(&loaded.spec)?;
    let parts = bochner_parts(&spec)?;
    let mut doc = header("operator", &loaded.spec);
    doc.insert("operator".into(), operator(&parts.operator));
    doc.insert("tilde".into(), operator(&parts.tilde));
    doc.insert("correction".into(), matrix(&parts.correction));
    doc.insert("nilpotent".into(), matrix(&parts.nilpotent));
    doc.insert("unipotent".into(), matpoly(&parts.unipotent));
    emit(Value::Object(doc), out)?;
    Ok(ExitCode::SUCCESS)
}

fn orthopoly(config: &Path, n_max: usize, out: Option<&Path>) -> Result<ExitCode, Failure> {
    let loaded = config::load(config)?;
    let spec = validated(&loaded.spec)?;
    let table = matrix_moments(&spec, 2 * n_max + 1)?;
    let seq = monic_sequence_with(&table, n_max, loaded.precision)?;
    let mut doc = header("orthopoly", &loaded.spec);
    doc.insert("n_max".into(), json!(n_max));
    doc.insert("precision".into(), json!(precision_name(seq.precision)));
    doc.insert("polys".into(), Value::Array(seq.polys.iter().map(matpoly).collect()));
    doc.insert("norms".into(), Value::Array(seq.norms.iter().map(matrix).collect()));
    doc.insert("b".into(), Value::Array(seq.b.iter().map(matrix).collect()));
    doc.insert("c".into(), Value::Array(seq.c.iter().map(matrix).collect()));
    doc.insert("path_discrepancy".into(), num(seq.path_discrepancy));
    doc.insert("orthogonality".into(), num(seq.orthogonality));
    emit(Value::Object(doc), out)?;
    Ok(ExitCode::SUCCESS)
}

fn report_doc(report: &VerificationReport) -> Value {
    let mut doc = header("verify", &report.spec);
    let o = &report.options;
    doc.insert(
        "options".into(),
        json!({
            "suite": match o.suite { SuiteKind::All => "all", SuiteKind::Fast => "fast" },
            "seed": o.seed,
            "tolerance": num(o.tolerance),
            "n_max": o.n_max,
            "degree_cap": o.degree_cap,
            "max_power": o.max_power,
            "commutant_orders": o.commutant_orders,
            "precision": precision_name(o.precision),
        }),
    );
    doc.insert(
        "violations".into(),
        Value::Array(report.violations.iter().map(|v| json!({ "name": v.name(), "message": v.to_string() })).collect()),
    );
    doc.insert("construction_error".into(), json!(report.construction_error));
    let checks = report
        .checks
        .iter()
        .map(|c| {
            json!({
                "id": c.id,
                "name": c.name,
                "status": c.status.as_str(),
                "residual": c.residual.map(num),
                "tolerance": c.tolerance.map(num),
                "runtime_ms": num(c.runtime_ms),
                "detail": c.detail,
            })
        })
        .collect();
    doc.insert("checks".into(), Value::Array(checks));
    doc.insert(
        "summary".into(),
        json!({
            "pass": report.count(CheckStatus::Pass),
            "fail": report.count(CheckStatus::Fail),
            "skipped": report.count(CheckStatus::Skipped),
            "max_residual": num(report.max_residual()),
        }),
    );
    doc.insert("passed".into(), json!(report.passed));
    Value::Object(doc)
}

fn verify(
    config: &Path,
    suite: SuiteArg,
    tol: Option<f64>,
    seed: u64,
    no_timings: bool,
    out: Option<&Path>,
) -> Result<ExitCode, Failure> {
    let loaded = config::load(config)?;
    let mut opts = SuiteOptions {
        suite: match suite {
            SuiteArg::All => SuiteKind::All,
            SuiteArg::Fast => SuiteKind::Fast,
        },
        seed,
        precision: loaded.precision,
        record_timings: !no_timings,
        ..SuiteOptions::default()
    };
    if let Some(t) = tol {
        if !(t > 0.0 && t.is_finite()) {
            return Err(Failure::Config(anyhow::anyhow!("--tol must be a positive number, got {t}")));
        }
        opts.tolerance = t;
    }
    let report = run_suite(&loaded.spec, &opts);
    emit(report_doc(&report), out)?;
    for v in &report.violations {
        eprintln!("{v}");
    }
    for c in report.checks.iter().filter(|c| c.status == CheckStatus::Fail) {
        eprintln!("check {} {} failed: {}", c.id, c.name, c.detail);
    }
    eprintln!(
        "{}/{} checks passed, {} skipped",
        report.count(CheckStatus::Pass),
        report.checks.len(),
        report.count(CheckStatus::Skipped)
    );
    Ok(if report.passed {
        ExitCode::SUCCESS
    } else if report.has_numerical_failure() {
        ExitCode::from(3)
    } else {
        ExitCode::from(1)
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Validate { config } => validate(config),
        Command::Moments { config, k, output } => moments(config, *k, output.as_deref()),
        Command::Operator { config, output } => operator_cmd(config, output.as_deref()),
        Command::Orthopoly { config, n_max, output } => orthopoly(config, *n_max, output.as_deref()),
        Command::Verify { config, suite, tol, seed, no_timings, output } => {
            verify(config, *suite, *tol, *seed, *no_timings, output.as_deref())
        }
    };
    match result {
        Ok(code) => code,
        Err(f) => {
            let code = f.code();
            let (Failure::Config(e) | Failure::Numerical(e)) = f;
            eprintln!("error: {e:#}");
            ExitCode::from(code)
        }
    }
}
