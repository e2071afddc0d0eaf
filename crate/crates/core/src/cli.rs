//! Command-line front end.
//!
//! Exit codes: 0 success, 1 bound violation (the refuted upper bound never
//! counts), 2 usage or parse error, 3 numerical failure, 4 aborted fuzz run.

use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::bounds::{self, BoundId, BoundReport, Evaluator, OperatorProfile, Partner};
use crate::error::{Error, Result};
use crate::harness::{self, parse_class_list, FuzzConfig};
use crate::linalg::{ComplexMatrix, MatrixFile};
use crate::norms::{parse_norm_list, NormSpec};
use crate::radii::{self, RadiusResult, SphereSearch, Witness};
use crate::reference_cases;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VIOLATION: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;
pub const EXIT_ABORTED: i32 = 4;

#[derive(Debug, Parser)]
#[command(name = "dwradius", version, about = "Numerical and Davis-Wielandt radii under pluggable norms")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Debug, clap::Args)]
pub struct Output {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Write to this file instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// w, w_N, dw and dw_N of a matrix.
    Compute {
        /// Matrix file (JSON: {"n", "re", "im"}).
        #[arg(long)]
        matrix: PathBuf,
        /// Comma-separated norms: op, fro, tr, sp:<p>, w.
        #[arg(long, default_value = "op")]
        norms: String,
        /// Seed of the sphere search used for the classical dw.
        #[arg(long)]
        seed: Option<u64>,
        #[command(flatten)]
        output: Output,
    },
    /// Evaluates the whole inequality catalog on a matrix.
    Bounds {
        /// One matrix file, or two separated by a comma for the triangle bounds.
        #[arg(long)]
        matrix: String,
        #[arg(long, default_value = "op")]
        norms: String,
        #[arg(long)]
        seed: Option<u64>,
        #[command(flatten)]
        output: Output,
    },
    /// Runs the randomized verification campaign.
    Fuzz {
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Comma-separated dimensions.
        #[arg(long, default_value = "2,3,5")]
        dims: String,
        /// Comma-separated matrix classes, or `all`.
        #[arg(long, default_value = "all")]
        classes: String,
        #[arg(long, default_value = "op,fro,tr,sp:3,w")]
        norms: String,
        /// Samples per (class, dimension) cell.
        #[arg(long, default_value_t = 200)]
        count: usize,
        /// Violation slack override.
        #[arg(long)]
        tolerance: Option<f64>,
        /// Samples of the w oracle on dimensions up to 3 (0 disables it).
        #[arg(long, default_value_t = 100_000)]
        oracle_samples: usize,
        #[command(flatten)]
        output: Output,
    },
    /// Reproduces the worked examples and checks every value.
    PaperExamples {
        #[command(flatten)]
        output: Output,
    },
    /// Shows that the refuted upper bound on dw_N fails.
    Counterexample {
        /// Matrix file; defaults to the 2x2 identity.
        #[arg(long)]
        matrix: Option<PathBuf>,
        #[arg(long, default_value = "op")]
        norms: String,
        #[command(flatten)]
        output: Output,
    },
}

/// Maps a library error to an exit code.
pub fn exit_code(e: &Error) -> i32 {
    if e.is_numerical() {
        EXIT_NUMERICAL
    } else {
        EXIT_USAGE
    }
}

/// 9 significant digits.
pub fn sig9(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let e = x.abs().log10().floor() as i32;
    if (-4..9).contains(&e) {
        format!("{:.*}", (8 - e) as usize, x)
    } else {
        format!("{x:.8e}")
    }
}

fn read_matrix(path: &std::path::Path) -> Result<ComplexMatrix> {
    MatrixFile::read(path)
}

fn unsupported(format: Format, command: &str) -> Error {
    Error::InvalidConfig(format!("{command} does not support {format:?} output"))
}

fn emit(output: &Output, text: &str) -> Result<()> {
    match &output.out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| Error::Parse(format!("cannot write {}: {e}", path.display()))),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|e| Error::Parse(format!("cannot write to stdout: {e}")))
        }
    }
}

fn witness_text(r: &RadiusResult) -> String {
    match &r.witness {
        Witness::Theta(t) => format!("theta* = {}", sig9(t.theta_star)),
        Witness::Vector(v) => {
            let parts: Vec<String> = v
                .iter()
                .map(|z| {
                    let sign = if z.im.is_sign_negative() { '-' } else { '+' };
                    format!("{}{sign}{}i", sig9(z.re), sig9(z.im.abs()))
                })
                .collect();
            format!("x = [{}]", parts.join(", "))
        }
    }
}

#[derive(Serialize)]
struct NormedRadii {
    norm: String,
    #[serde(rename = "w_N")]
    w_n: RadiusResult,
    #[serde(rename = "dw_N")]
    dw_n: RadiusResult,
}

#[derive(Serialize)]
struct ComputeReport {
    n: usize,
    w: RadiusResult,
    dw: RadiusResult,
    norms: Vec<NormedRadii>,
}

fn compute(matrix: &std::path::Path, norms: &str, seed: Option<u64>, output: &Output) -> Result<i32> {
    let t = read_matrix(matrix)?;
    let norms = parse_norm_list(norms)?;
    let sphere = seed.map(SphereSearch::with_seed).unwrap_or_default();
    let mut report = ComputeReport {
        n: t.n(),
        w: radii::numerical_radius(&t)?,
        dw: radii::classical_dw_radius_with(&t, &sphere)?,
        norms: Vec::new(),
    };
    for norm in &norms {
        report.norms.push(NormedRadii {
            norm: norm.to_string(),
            w_n: radii::generalized_numerical_radius(&t, norm)?,
            dw_n: radii::generalized_dw_radius(&t, norm)?,
        });
    }
    let text = match output.format {
        Format::Json => serde_json::to_string_pretty(&report).expect("serializable") + "\n",
        Format::Text => {
            let mut s = String::new();
            let line = |s: &mut String, label: &str, r: &RadiusResult| {
                let _ = writeln!(
                    s,
                    "{label:<6} {:>16}   est_error {:<10}  {}",
                    sig9(r.value),
                    sig9(r.est_error),
                    witness_text(r)
                );
            };
            let _ = writeln!(s, "n = {}", t.n());
            line(&mut s, "w", &report.w);
            line(&mut s, "dw", &report.dw);
            for r in &report.norms {
                let _ = writeln!(s, "norm {}", r.norm);
                line(&mut s, "  w_N", &r.w_n);
                line(&mut s, "  dw_N", &r.dw_n);
            }
            s
        }
        Format::Csv => {
            let mut s = String::from("quantity,norm,value,est_error\n");
            let _ = writeln!(s, "w,,{:e},{:e}", report.w.value, report.w.est_error);
            let _ = writeln!(s, "dw,,{:e},{:e}", report.dw.value, report.dw.est_error);
            for r in &report.norms {
                let _ = writeln!(s, "w_N,{},{:e},{:e}", r.norm, r.w_n.value, r.w_n.est_error);
                let _ = writeln!(s, "dw_N,{},{:e},{:e}", r.norm, r.dw_n.value, r.dw_n.est_error);
            }
            s
        }
    };
    emit(output, &text)?;
    Ok(EXIT_OK)
}

#[derive(Serialize)]
struct NormedBoundReport {
    norm: String,
    #[serde(flatten)]
    report: BoundReport,
}

fn status(r: &BoundReport) -> &'static str {
    match (r.applicable, r.satisfied) {
        (false, _) => "n/a",
        (true, true) => "ok",
        (true, false) => "VIOLATED",
    }
}

fn bound_rows(
    t: &ComplexMatrix,
    s: Option<&ComplexMatrix>,
    norms: &[NormSpec],
    sphere: SphereSearch,
) -> Result<Vec<NormedBoundReport>> {
    let search = radii::ThetaSearch::default();
    let tp = OperatorProfile::with_searches(t.clone(), sphere, search)?;
    let sp = s.map(|s| OperatorProfile::with_searches(s.clone(), sphere, search)).transpose()?;
    let sum = s.map(|s| OperatorProfile::with_searches(t + s, sphere, search)).transpose()?;
    let mut rows = Vec::new();
    for &norm in norms {
        let tn = tp.normed(norm);
        let sn = sp.as_ref().map(|p| p.normed(norm));
        let sumn = sum.as_ref().map(|p| p.normed(norm));
        let mut ev = Evaluator::new(&tn);
        if let (Some(other), Some(sum)) = (&sn, &sumn) {
            ev = ev.with_partner(Partner { other, sum });
        }
        for report in ev.evaluate_all()? {
            rows.push(NormedBoundReport {
                norm: norm.to_string(),
                report,
            });
        }
    }
    Ok(rows)
}

fn bounds_table(rows: &[NormedBoundReport]) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        "{:<6} {:<16} {:<9} {:>16} {:>16} {:>16}",
        "norm", "bound", "status", "lhs", "rhs", "margin"
    );
    for row in rows {
        let r = &row.report;
        let (lhs, rhs, margin) = if r.applicable {
            (sig9(r.lhs), sig9(r.rhs), sig9(r.margin))
        } else {
            ("-".into(), "-".into(), "-".into())
        };
        let _ = writeln!(
            s,
            "{:<6} {:<16} {:<9} {lhs:>16} {rhs:>16} {margin:>16}",
            row.norm,
            r.bound.as_str(),
            status(r)
        );
    }
    s
}

fn bounds_cmd(matrix: &str, norms: &str, seed: Option<u64>, output: &Output) -> Result<i32> {
    let paths: Vec<&str> = matrix.split(',').map(str::trim).filter(|p| !p.is_empty()).collect();
    let (t, s) = match paths.as_slice() {
        [a] => (read_matrix(a.as_ref())?, None),
        [a, b] => (read_matrix(a.as_ref())?, Some(read_matrix(b.as_ref())?)),
        _ => return Err(Error::Parse("--matrix takes one or two comma-separated paths".into())),
    };
    if let Some(s) = &s {
        if s.n() != t.n() {
            return Err(Error::InvalidMatrix(format!("dimensions differ: {} and {}", t.n(), s.n())));
        }
    }
    let norms = parse_norm_list(norms)?;
    let sphere = seed.map(SphereSearch::with_seed).unwrap_or_default();
    let rows = bound_rows(&t, s.as_ref(), &norms, sphere)?;
    let violated = rows
        .iter()
        .any(|r| r.report.applicable && !r.report.satisfied && r.report.bound != BoundId::RefutedUp);

    let text = match output.format {
        Format::Text => bounds_table(&rows),
        Format::Json => rows
            .iter()
            .map(|r| serde_json::to_string(r).expect("serializable") + "\n")
            .collect(),
        Format::Csv => {
            let mut s = String::from("norm,bound,applicable,satisfied,lhs,rhs,margin\n");
            for row in &rows {
                let r = &row.report;
                let _ = writeln!(
                    s,
                    "{},{},{},{},{:e},{:e},{:e}",
                    row.norm, r.bound, r.applicable, r.satisfied, r.lhs, r.rhs, r.margin
                );
            }
            s
        }
    };
    emit(output, &text)?;
    Ok(if violated { EXIT_VIOLATION } else { EXIT_OK })
}

fn fuzz_summary(report: &harness::FuzzReport) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        "seed {}  dims {:?}  classes {}  norms {}  count {}",
        report.seed,
        report.dims,
        report.classes.len(),
        report.norms.join(","),
        report.count_per_cell
    );
    let _ = writeln!(
        s,
        "samples {}/{}  numerical failures {}{}",
        report.samples,
        report.planned_samples,
        report.numerical_failures,
        if report.aborted { "  ABORTED" } else { "" }
    );
    let _ = writeln!(s, "{:<16} {:>9} {:>10} {:>16} {:>10}", "bound", "checked", "violations", "min margin", "witnesses");
    for id in BoundId::ALL {
        let cells: Vec<_> = report.cells.iter().filter(|c| c.bound == id).collect();
        let checked: u64 = cells.iter().map(|c| c.checked).sum();
        let violations: u64 = cells.iter().map(|c| c.violations).sum();
        let witnesses: u64 = cells.iter().map(|c| c.witness_count).sum();
        let min = cells
            .iter()
            .filter_map(|c| c.min_margin)
            .min_by(f64::total_cmp)
            .map_or("-".to_string(), sig9);
        let _ = writeln!(s, "{:<16} {checked:>9} {violations:>10} {min:>16} {witnesses:>10}", id.as_str());
    }
    let _ = writeln!(
        s,
        "dominance chain: {} checked, {} failures",
        report.dominance.checked, report.dominance.failures
    );
    let _ = writeln!(
        s,
        "w oracle: {} checked, {} failures, max |diff| {}",
        report.oracle.checked,
        report.oracle.failures,
        sig9(report.oracle.max_abs_diff)
    );
    let _ = writeln!(
        s,
        "equality cases: dw_N = w_N {}x, dw_N = N^2(|T|) {}x over {} evaluations",
        report.equality.radius_equalities, report.equality.abs_equalities, report.equality.checked
    );
    let _ = writeln!(s, "unexpected violations: {}", report.unexpected_violations());
    if let Some(f) = &report.first_failure {
        let _ = writeln!(s, "first numerical failure: {f}");
    }
    s
}

fn parse_dims(s: &str) -> Result<Vec<usize>> {
    s.split(',')
        .map(str::trim)
        .filter(|p| !p.is_empty())
        .map(|p| p.parse::<usize>().map_err(|_| Error::Parse(format!("bad dimension `{p}`"))))
        .collect()
}

#[allow(clippy::too_many_arguments)]
fn fuzz_cmd(
    seed: u64,
    dims: &str,
    classes: &str,
    norms: &str,
    count: usize,
    tolerance: Option<f64>,
    oracle_samples: usize,
    output: &Output,
) -> Result<i32> {
    let cfg = FuzzConfig {
        seed,
        dims: parse_dims(dims)?,
        classes: parse_class_list(classes)?,
        norms: parse_norm_list(norms)?,
        count_per_cell: count,
        tolerance,
        oracle_samples,
    };
    let report = harness::run_fuzz(&cfg)?;
    let text = match output.format {
        Format::Json => report.to_json() + "\n",
        Format::Csv => report.to_csv()?,
        Format::Text => fuzz_summary(&report),
    };
    emit(output, &text)?;
    Ok(if report.aborted {
        EXIT_ABORTED
    } else if report.is_clean() {
        EXIT_OK
    } else {
        EXIT_VIOLATION
    })
}

fn paper_examples_cmd(output: &Output) -> Result<i32> {
    let checks = reference_cases::paper_examples()?;
    let text = match output.format {
        Format::Json => serde_json::to_string_pretty(&checks).expect("serializable") + "\n",
        Format::Text => {
            let mut s = String::new();
            for c in &checks {
                let _ = write!(
                    s,
                    "{:<20} {}: computed {} expected {} (tol {:e})",
                    c.status.to_string(),
                    c.name,
                    sig9(c.computed),
                    sig9(c.expected),
                    c.tolerance
                );
                if let Some(note) = &c.note {
                    let _ = write!(s, " [{note}]");
                }
                s.push('\n');
            }
            s
        }
        Format::Csv => return Err(unsupported(Format::Csv, "paper-examples")),
    };
    emit(output, &text)?;
    Ok(if reference_cases::all_pass(&checks) { EXIT_OK } else { EXIT_VIOLATION })
}

#[derive(Serialize)]
struct CounterexampleRow {
    norm: String,
    dw_n: f64,
    refuted_bound: f64,
    theta_star: f64,
    violated: bool,
}

fn counterexample_cmd(matrix: Option<&std::path::Path>, norms: &str, output: &Output) -> Result<i32> {
    let t = match matrix {
        Some(p) => read_matrix(p)?,
        None => ComplexMatrix::identity(2),
    };
    let mut rows = Vec::new();
    for norm in parse_norm_list(norms)? {
        let dw = radii::generalized_dw_radius(&t, &norm)?.value;
        let opt = bounds::refuted_upper_optimum(&t, &norm)?;
        rows.push(CounterexampleRow {
            norm: norm.to_string(),
            dw_n: dw,
            refuted_bound: opt.value,
            theta_star: opt.theta_star,
            violated: dw > opt.value + bounds::VIOLATION_TOL.max(bounds::VIOLATION_TOL * opt.value),
        });
    }
    let text = match output.format {
        Format::Json => serde_json::to_string_pretty(&rows).expect("serializable") + "\n",
        Format::Text => {
            let mut s = String::from(
                "dw_N(T) <= inf_theta sqrt(N^2(Re e^{i theta}T) + N^2(Im e^{i theta}T) + N^4(Re e^{i theta}|T|))\n",
            );
            for r in &rows {
                let _ = writeln!(
                    s,
                    "norm {:<6} dw_N = {}  bound = {} at theta = {}  {}",
                    r.norm,
                    sig9(r.dw_n),
                    sig9(r.refuted_bound),
                    sig9(r.theta_star),
                    if r.violated { "VIOLATED" } else { "holds" }
                );
            }
            s
        }
        Format::Csv => {
            let mut s = String::from("norm,dw_n,refuted_bound,theta_star,violated\n");
            for r in &rows {
                let _ = writeln!(s, "{},{:e},{:e},{:e},{}", r.norm, r.dw_n, r.refuted_bound, r.theta_star, r.violated);
            }
            s
        }
    };
    emit(output, &text)?;
    Ok(EXIT_OK)
}

/// Runs a parsed command and returns its exit code.
pub fn run(cli: Cli) -> i32 {
    let result = match &cli.command {
        Command::Compute {
            matrix,
            norms,
            seed,
            output,
        } => compute(matrix, norms, *seed, output),
        Command::Bounds {
            matrix,
            norms,
            seed,
            output,
        } => bounds_cmd(matrix, norms, *seed, output),
        Command::Fuzz {
            seed,
            dims,
            classes,
            norms,
            count,
            tolerance,
            oracle_samples,
            output,
        } => fuzz_cmd(*seed, dims, classes, norms, *count, *tolerance, *oracle_samples, output),
        Command::PaperExamples { output } => paper_examples_cmd(output),
        Command::Counterexample { matrix, norms, output } => counterexample_cmd(matrix.as_deref(), norms, output),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

/// Entry point used by the binary.
pub fn main() -> i32 {
    run(Cli::parse())
}
