//! Command-line front end. [`run`] parses arguments, writes the result to
//! `out` and returns the process exit status: 0 on success, 1 when a
//! verification sweep finds a counterexample, 2 on usage or validation errors.

use std::ffi::OsString;
use std::io::Write;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::basis::{Basis, DivisorClass, Moduli};
use crate::curves::{build_matrix, enumerate_test_curves};
use crate::dr::{dr_expansion, DEFAULT_MONOMIAL_CAP};
use crate::error::{Error, Result};
use crate::rational;
use crate::solver::certify_basis;
use crate::sweep::{run_sweep, Check};
use crate::theta::{class_d_direct, class_t, class_theta, correction_ledger, PlusConvention, WeightVector};

pub const MONOMIAL_CAP_ENV: &str = "THETACLASS_MONOMIAL_CAP";

#[derive(Debug, Parser)]
#[command(name = "thetaclass", version, about = "Exact divisor classes of theta pullbacks on M̄_{g,n}")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Ordered generator list of the divisor basis.
    Basis(Signature),
    /// Test curves used to certify the basis.
    Curves(Signature),
    /// Intersection numbers of test curves with the basis generators.
    Matrix(Signature),
    /// A theta-pullback class or the effective-locus class.
    Class {
        #[arg(value_enum)]
        kind: ClassKind,
        #[command(flatten)]
        weights: Weighted,
    },
    /// Boundary components along which the theta function vanishes identically.
    Ledger(Weighted),
    /// Formal expansion of the double ramification cycle on compact type.
    Dr(Weighted),
    /// Seeded identity sweep.
    Verify {
        #[arg(value_enum)]
        check: VerifyKind,
        #[command(flatten)]
        sig: Signature,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Debug, Clone, Args)]
struct Signature {
    #[arg(long)]
    g: usize,
    #[arg(long)]
    n: usize,
    #[arg(long, value_enum, default_value_t = Format::Pretty)]
    format: Format,
    #[arg(long, value_enum, default_value_t = Convention::Nonneg)]
    convention: Convention,
}

#[derive(Debug, Clone, Args)]
struct Weighted {
    #[command(flatten)]
    sig: Signature,
    /// Comma-separated integer weights, e.g. `3,-1`.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
    d: Vec<i64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Pretty,
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Convention {
    Nonneg,
    Strict,
}

impl From<Convention> for PlusConvention {
    fn from(c: Convention) -> Self {
        match c {
            Convention::Nonneg => PlusConvention::NonNegative,
            Convention::Strict => PlusConvention::Strict,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ClassKind {
    #[value(name = "T")]
    T,
    Theta,
    #[value(name = "mueller")]
    EffectiveLocus,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum VerifyKind {
    Rank,
    #[value(name = "T")]
    T,
    Theta,
    #[value(name = "mueller")]
    EffectiveLocus,
}

enum Outcome {
    Ok,
    Failed,
}

#[derive(Debug)]
enum CliError {
    Domain(Error),
    Io(std::io::Error),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Domain(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Io(e.into())
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Io(e.into())
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let rendered = e.render().to_string();
            let _ = if code == 0 { out.write_all(rendered.as_bytes()) } else { err.write_all(rendered.as_bytes()) };
            return code;
        }
    };
    match dispatch(cli.command, out, err) {
        Ok(Outcome::Ok) => 0,
        Ok(Outcome::Failed) => 1,
        Err(CliError::Domain(e)) => {
            let _ = writeln!(err, "error: {e}");
            2
        }
        Err(CliError::Io(e)) => {
            let _ = writeln!(err, "error: {e}");
            2
        }
    }
}

fn moduli(sig: &Signature, err: &mut dyn Write) -> Result<Moduli> {
    let m = Moduli::new(sig.g, sig.n)?;
    if m.g < 3 {
        let _ = writeln!(err, "warning: for g < 3 the generators are not independent; results are formal");
    }
    Ok(m)
}

fn weights(w: &Weighted, err: &mut dyn Write) -> Result<(Arc<Basis>, WeightVector)> {
    let m = moduli(&w.sig, err)?;
    let d = WeightVector::new(w.d.clone(), m)?;
    Ok((Basis::new(m), d))
}

fn monomial_cap() -> Result<u128> {
    match std::env::var(MONOMIAL_CAP_ENV) {
        Ok(s) => s.trim().parse().map_err(|_| Error::Parse(format!("{MONOMIAL_CAP_ENV}={s} is not a count"))),
        Err(_) => Ok(DEFAULT_MONOMIAL_CAP),
    }
}

fn write_json<S: Serialize>(out: &mut dyn Write, value: &S) -> CliResult<()> {
    serde_json::to_writer(&mut *out, value)?;
    writeln!(out)?;
    Ok(())
}

fn dispatch(command: Command, out: &mut dyn Write, err: &mut dyn Write) -> CliResult<Outcome> {
    match command {
        Command::Basis(sig) => {
            let basis = Basis::new(moduli(&sig, err)?);
            let labels: Vec<String> = basis.generators().map(|g| g.label()).collect();
            print_labels(out, sig.format, "generator", &labels)?;
        }
        Command::Curves(sig) => {
            let m = moduli(&sig, err)?;
            let labels: Vec<String> = enumerate_test_curves(m)?.iter().map(|c| c.label()).collect();
            print_labels(out, sig.format, "curve", &labels)?;
        }
        Command::Matrix(sig) => {
            let matrix = build_matrix(moduli(&sig, err)?)?;
            match sig.format {
                Format::Json => write_json(out, &matrix.to_json())?,
                Format::Csv => matrix.write_csv(&mut *out)?,
                Format::Pretty => {
                    let cols: Vec<String> = matrix.cols.iter().map(|c| c.label()).collect();
                    let mut table = vec![std::iter::once(String::new()).chain(cols).collect::<Vec<_>>()];
                    for (curve, row) in matrix.rows.iter().zip(&matrix.entries) {
                        table.push(std::iter::once(curve.label()).chain(row.iter().map(rational::to_string)).collect());
                    }
                    print_table(out, &table)?;
                }
            }
        }
        Command::Class { kind, weights: w } => {
            let (basis, d) = weights(&w, err)?;
            let class = match kind {
                ClassKind::T => class_t(&basis, &d)?,
                ClassKind::Theta => class_theta(&basis, &d)?,
                ClassKind::EffectiveLocus => class_d_direct(&basis, &d, w.sig.convention.into())?,
            };
            print_class(out, w.sig.format, &class)?;
        }
        Command::Ledger(w) => {
            let (basis, d) = weights(&w, err)?;
            let ledger = correction_ledger(&basis, &d, w.sig.convention.into())?;
            match w.sig.format {
                Format::Json => write_json(out, &ledger.to_json())?,
                Format::Csv => {
                    let mut writer = csv::Writer::from_writer(&mut *out);
                    writer.write_record(["h", "P", "mult"])?;
                    for t in &ledger.terms {
                        writer.write_record([t.h.to_string(), t.points.to_string(), t.multiplicity.to_string()])?;
                    }
                    writer.write_record(["irr", "", &rational::to_string(&ledger.irr_order)])?;
                    writer.flush()?;
                }
                Format::Pretty => {
                    for t in &ledger.terms {
                        writeln!(out, "{} * {}    (h = {}, P = {})", t.multiplicity, t.class, t.h, t.points)?;
                    }
                    writeln!(out, "{} * delta_irr", rational::to_string(&ledger.irr_order))?;
                }
            }
        }
        Command::Dr(w) => {
            let (basis, d) = weights(&w, err)?;
            let cycle = dr_expansion(&basis, &d, monomial_cap()?)?;
            match w.sig.format {
                Format::Json => write_json(out, &cycle.to_json())?,
                Format::Csv => cycle.write_csv(&mut *out)?,
                Format::Pretty => {
                    if cycle.is_zero() {
                        writeln!(out, "0")?;
                    }
                    for (mono, c) in cycle.terms() {
                        writeln!(out, "{} * {}", rational::to_string(c), mono)?;
                    }
                }
            }
        }
        Command::Verify { check, sig, trials, seed } => {
            let m = moduli(&sig, err)?;
            let (passed, json, summary) = match check {
                VerifyKind::Rank => {
                    let report = certify_basis(m)?;
                    let summary = format!(
                        "rank g={} n={}: rank {} of {}, determinant {}",
                        m.g,
                        m.n,
                        report.rank,
                        report.expected,
                        if report.det_nonzero { "nonzero" } else { "zero" }
                    );
                    (report.passed(), serde_json::to_string(&report)?, summary)
                }
                other => {
                    let check = match other {
                        VerifyKind::T => Check::T,
                        VerifyKind::Theta => Check::Theta,
                        _ => Check::EffectiveLocus,
                    };
                    let report = run_sweep(check, m, trials, seed, sig.convention.into())?;
                    let summary = format!(
                        "{} g={} n={} seed={}: {}/{} identities hold",
                        serde_json::to_value(check)?.as_str().unwrap_or_default(),
                        m.g,
                        m.n,
                        seed,
                        report.passed,
                        report.trials
                    );
                    (report.ok(), serde_json::to_string(&report)?, summary)
                }
            };
            if sig.format == Format::Json || !passed {
                writeln!(out, "{json}")?;
            } else {
                writeln!(out, "pass {summary}")?;
            }
            if !passed {
                writeln!(err, "fail {summary}")?;
                return Ok(Outcome::Failed);
            }
        }
    }
    Ok(Outcome::Ok)
}

fn print_labels(out: &mut dyn Write, format: Format, header: &str, labels: &[String]) -> CliResult<()> {
    match format {
        Format::Json => write_json(out, &labels)?,
        Format::Csv => {
            let mut writer = csv::Writer::from_writer(&mut *out);
            writer.write_record(["index", header])?;
            for (k, l) in labels.iter().enumerate() {
                writer.write_record([k.to_string(), l.clone()])?;
            }
            writer.flush()?;
        }
        Format::Pretty => {
            for (k, l) in labels.iter().enumerate() {
                writeln!(out, "{k:>4}  {l}")?;
            }
        }
    }
    Ok(())
}

fn print_class(out: &mut dyn Write, format: Format, class: &DivisorClass) -> CliResult<()> {
    match format {
        Format::Json => write_json(out, &class.to_json())?,
        Format::Csv => {
            let mut writer = csv::Writer::from_writer(&mut *out);
            writer.write_record(["generator", "c"])?;
            for (gen, c) in class.basis().generators().zip(class.coeffs()) {
                writer.write_record([gen.label(), rational::to_string(c)])?;
            }
            writer.flush()?;
        }
        Format::Pretty => writeln!(out, "{class}")?,
    }
    Ok(())
}

fn print_table(out: &mut dyn Write, table: &[Vec<String>]) -> CliResult<()> {
    let width = table.iter().flat_map(|r| r.iter().map(|s| s.chars().count())).max().unwrap_or(0);
    for row in table {
        let line: Vec<String> = row.iter().map(|s| format!("{s:>width$}")).collect();
        writeln!(out, "{}", line.join(" "))?;
    }
    Ok(())
}
