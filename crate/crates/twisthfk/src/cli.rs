//! Command-line surface: compute one twist count, sweep a range, verify
//! structures, or run the curve oracle.

use crate::box_tensor::build_bigraded_pair;
use crate::curves::{fit_curve_from_dims, CurveSystem};
use crate::error::{Error, Result};
use crate::invariants::{alexander_polynomial, hfk_table, tau, thickness};
use crate::sweep::{sweep, SweepReport, Verdict};
use crate::type_a::{TypeAStructure, View};
use crate::type_d::TypeDStructure;
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use std::io::Write as _;
use std::path::{Path, PathBuf};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT_ERROR: i32 = 1;
pub const EXIT_VERIFICATION_FAILED: i32 = 2;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Tsv,
    Json,
    Text,
}

#[derive(Parser, Debug)]
#[command(
    name = "twisthfk",
    about = "Knot Floer homology of twist families via bordered pairing"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Invariants of a single twist count.
    Compute {
        /// Pattern file (JSON).
        #[arg(long)]
        pattern: PathBuf,
        /// Twist count (at least 1).
        #[arg(long)]
        m: u32,
        /// Output format; inferred from the --out extension when omitted.
        #[arg(long, value_enum)]
        format: Option<Format>,
        /// Write the report here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Invariants over a twist range with stabilization verdicts.
    Sweep {
        #[arg(long)]
        pattern: PathBuf,
        /// First twist count.
        #[arg(long)]
        from: u32,
        /// Last twist count.
        #[arg(long)]
        to: u32,
        /// Number of extremal columns to track.
        #[arg(long, default_value = "1")]
        k: usize,
        /// Length of the exactly-affine tail demanded by the fits.
        #[arg(long = "tail-window", default_value = "8")]
        tail_window: usize,
        /// Worker threads.
        #[arg(long, default_value = "1")]
        jobs: usize,
        /// Output format; inferred from the --out extension when omitted.
        #[arg(long, value_enum)]
        format: Option<Format>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Structure checks: composability, relations, gradings.
    Verify {
        #[arg(long)]
        pattern: PathBuf,
        /// Depth of the bounded A-infinity relation check.
        #[arg(long = "max-args", default_value = "6")]
        max_args: usize,
        /// Twist range for the built-in type D family self-check.
        #[arg(long, default_value = "1")]
        from: u32,
        #[arg(long, default_value = "20")]
        to: u32,
        /// Fail (exit 2) on any flagged operation.
        #[arg(long)]
        strict: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Dimension predictions from a curve file.
    Predict {
        /// Curve system file (JSON).
        #[arg(long)]
        pattern: PathBuf,
        #[arg(long)]
        from: u32,
        #[arg(long)]
        to: u32,
        /// Points used for the trailing (D, d) fit.
        #[arg(long = "tail-window", default_value = "8")]
        tail_window: usize,
        /// Output format; inferred from the --out extension when omitted.
        #[arg(long, value_enum)]
        format: Option<Format>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Explicit format, else the --out extension, else text.
fn resolve_format(explicit: Option<Format>, out: &Option<PathBuf>) -> Format {
    if let Some(f) = explicit {
        return f;
    }
    match out
        .as_ref()
        .and_then(|p| p.extension())
        .and_then(|e| e.to_str())
    {
        Some("tsv") => Format::Tsv,
        Some("json") => Format::Json,
        _ => Format::Text,
    }
}

fn emit(out: &Option<PathBuf>, content: &str) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, content)
            .map_err(|e| Error::Invalid(format!("cannot write {}: {e}", path.display()))),
        None => {
            std::io::stdout()
                .write_all(content.as_bytes())
                .map_err(|e| Error::Invalid(format!("cannot write stdout: {e}")))?;
            Ok(())
        }
    }
}

#[derive(Serialize)]
struct ComputeReport {
    m: u32,
    total_dim: u64,
    genus: i64,
    tau: i64,
    thickness: i64,
    alexander: String,
    table: Vec<((i64, i64), usize)>,
}

fn run_compute(
    pattern: &Path,
    m: u32,
    format: Option<Format>,
    out: &Option<PathBuf>,
) -> Result<i32> {
    let format = resolve_format(format, out);
    if m == 0 {
        return Err(Error::Invalid("--m must be at least 1".into()));
    }
    let a = TypeAStructure::load_pattern(pattern)?;
    let (knot, z) = build_bigraded_pair(&a, m)?;
    let table = hfk_table(&knot)?;
    let poly = alexander_polynomial(&table)?;
    let tau_val = tau(&knot, &z)?;
    let th = thickness(&table);
    let report = ComputeReport {
        m,
        total_dim: table.total_dim() as u64,
        genus: table.genus(),
        tau: tau_val,
        thickness: th,
        alexander: poly.to_string(),
        table: table.dims.iter().map(|(&k, &v)| (k, v)).collect(),
    };
    let content = match format {
        Format::Json => format!("{}\n", serde_json::to_string_pretty(&report).unwrap()),
        Format::Tsv | Format::Text => {
            let mut s = String::new();
            s.push_str(&format!("# m = {m}\n"));
            for (&(a, h), &d) in &table.dims {
                s.push_str(&format!("({a},{h}): {d}\n"));
            }
            s.push_str(&format!("total_dim = {}\n", report.total_dim));
            s.push_str(&format!("genus = {}\n", report.genus));
            s.push_str(&format!("alexander = {}\n", report.alexander));
            s.push_str(&format!("tau = {}\n", report.tau));
            s.push_str(&format!("thickness = {}\n", report.thickness));
            s
        }
    };
    emit(out, &content)?;
    Ok(EXIT_OK)
}

fn render_sweep(report: &SweepReport, format: Format) -> String {
    match format {
        Format::Tsv => report.tsv(),
        Format::Json => format!("{}\n", serde_json::to_string_pretty(report).unwrap()),
        Format::Text => {
            let mut s = report.tsv();
            s.push('\n');
            for (name, fit) in &report.fits {
                match fit {
                    Some(f) => s.push_str(&format!(
                        "fit {name}: value = {}*m + {} (from m = {})\n",
                        f.slope, f.intercept, f.tail_start
                    )),
                    None => s.push_str(&format!("fit {name}: none\n")),
                }
            }
            s.push_str(&format!(
                "omega = {}, lk = {}, wind = {}\n",
                report.derived.omega, report.derived.lk, report.derived.wind
            ));
            if let (Some(x), Some(f)) = (report.derived.x_norm, report.derived.f_k) {
                s.push_str(&format!("x_norm = {x}, F_K = {f}\n"));
            }
            for (name, verdict) in &report.verdicts {
                let line = match verdict {
                    Verdict::Pass => format!("PASS {name}\n"),
                    Verdict::Fail(msg) => format!("FAIL {name}: {msg}\n"),
                    Verdict::Skipped(msg) => format!("SKIP {name}: {msg}\n"),
                };
                s.push_str(&line);
            }
            s
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn run_sweep(
    pattern: &Path,
    from: u32,
    to: u32,
    k: usize,
    tail_window: usize,
    jobs: usize,
    format: Option<Format>,
    out: &Option<PathBuf>,
) -> Result<i32> {
    let format = resolve_format(format, out);
    let a = TypeAStructure::load_pattern(pattern)?;
    let report = sweep(&a, from, to, k, tail_window, jobs)?;
    emit(out, &render_sweep(&report, format))?;
    Ok(if report.all_passed() {
        EXIT_OK
    } else {
        EXIT_VERIFICATION_FAILED
    })
}

fn run_verify(
    pattern: &Path,
    max_args: usize,
    from: u32,
    to: u32,
    strict: bool,
    out: &Option<PathBuf>,
) -> Result<i32> {
    let a = TypeAStructure::load_pattern(pattern)?;
    let mut s = String::new();
    let mut flagged = false;

    for (view, name) in [(View::Knot, "knot"), (View::Full, "full")] {
        let gradings = a.verify_op_gradings_view(view, max_args);
        if gradings.passed() {
            s.push_str(&format!("op gradings ({name} view): ok\n"));
        } else {
            flagged = true;
            s.push_str(&format!(
                "op gradings ({name} view): {} flagged\n",
                gradings.violations.len()
            ));
            for v in &gradings.violations {
                s.push_str(&format!("  flagged: {v}\n"));
            }
        }
        let relations = a.verify_a_infinity(view, max_args);
        if relations.passed() {
            s.push_str(&format!(
                "a-infinity relations ({name} view, depth {max_args}): ok\n"
            ));
        } else {
            flagged = true;
            s.push_str(&format!(
                "a-infinity relations ({name} view, depth {max_args}): {} violated\n",
                relations.violations.len()
            ));
            for v in relations.violations.iter().take(20) {
                s.push_str(&format!("  violated: {v}\n"));
            }
        }
    }

    let mut family_ok = true;
    for m in from..=to.max(from) {
        let d = TypeDStructure::build_cfd_one_over_m(m)?;
        let report = d.verify();
        if !report.all_ok() {
            family_ok = false;
            flagged = true;
            s.push_str(&format!(
                "type D family self-check failed at m = {m}: {report:?}\n"
            ));
        }
    }
    if family_ok {
        s.push_str(&format!(
            "type D family self-checks (m in [{from}, {}]): ok\n",
            to.max(from)
        ));
    }

    emit(out, &s)?;
    Ok(if flagged && strict {
        EXIT_VERIFICATION_FAILED
    } else {
        EXIT_OK
    })
}

#[derive(Serialize)]
struct PredictReport {
    dims: Vec<(u32, u64)>,
    fit: Option<(u64, i64)>,
}

fn run_predict(
    pattern: &Path,
    from: u32,
    to: u32,
    tail_window: usize,
    format: Option<Format>,
    out: &Option<PathBuf>,
) -> Result<i32> {
    let format = resolve_format(format, out);
    if from == 0 || from > to {
        return Err(Error::Invalid(format!("bad twist range [{from}, {to}]")));
    }
    let system = CurveSystem::load(pattern)?;
    let mut dims = Vec::new();
    for m in from..=to {
        dims.push((m, system.predicted_dim(m)?));
    }
    let tail_len = tail_window.min(dims.len());
    let fit = fit_curve_from_dims(&dims[dims.len() - tail_len..]).ok();
    let report = PredictReport { dims, fit };
    let content = match format {
        Format::Json => format!("{}\n", serde_json::to_string_pretty(&report).unwrap()),
        Format::Tsv | Format::Text => {
            let mut s = String::from("m\tpredicted_dim\n");
            for &(m, d) in &report.dims {
                s.push_str(&format!("{m}\t{d}\n"));
            }
            match report.fit {
                Some((dd, d)) => s.push_str(&format!("fit: total = {dd}*m - {d}\n")),
                None => s.push_str("fit: none\n"),
            }
            s
        }
    };
    emit(out, &content)?;
    Ok(EXIT_OK)
}

/// Runs a parsed command; returns the process exit code.
pub fn run(cli: Cli) -> Result<i32> {
    match &cli.command {
        Command::Compute {
            pattern,
            m,
            format,
            out,
        } => run_compute(pattern, *m, *format, out),
        Command::Sweep {
            pattern,
            from,
            to,
            k,
            tail_window,
            jobs,
            format,
            out,
        } => run_sweep(pattern, *from, *to, *k, *tail_window, *jobs, *format, out),
        Command::Verify {
            pattern,
            max_args,
            from,
            to,
            strict,
            out,
        } => run_verify(pattern, *max_args, *from, *to, *strict, out),
        Command::Predict {
            pattern,
            from,
            to,
            tail_window,
            format,
            out,
        } => run_predict(pattern, *from, *to, *tail_window, *format, out),
    }
}
