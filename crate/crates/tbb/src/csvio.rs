//! CSV formats.
//!
//! | file | header |
//! |------|--------|
//! | trace | `k,f,gnorm,alpha_bar,lambda,p` |
//! | records | `problem,n,rule,status,iters,f_evals,g_evals,time_s,f_gap` |
//! | profile | `tau,<solver>…` with `P_s(τ)` per column |
//! | ratios | `problem,n,<solver>…` with `r_{p,s}` per column |
//!
//! Reals are written with 17 significant digits, failed ratios as `inf` and
//! an unknown `f_gap` as `NA`. A trace may be followed by a diagnostics block
//! starting with the line `# diagnostics`.
//!
//! Performance-profile costs are clamped below by one unit of the metric
//! (one iteration or evaluation, one microsecond), so a zero count in a
//! records file never divides.

use std::fs::{File, OpenOptions};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use thiserror::Error;

use tbb_core::solver::{IterationRecord, Status};
use tbb_core::{BenchRecord, PerformanceProfile, RateReport};

#[derive(Debug, Error)]
pub enum CsvError {
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: io::Error },
    #[error("{}: {source}", path.display())]
    Csv { path: PathBuf, source: csv::Error },
    #[error("{}: line {line}: {msg}", path.display())]
    Parse { path: PathBuf, line: u64, msg: String },
}

pub const TRACE_HEADER: [&str; 6] = ["k", "f", "gnorm", "alpha_bar", "lambda", "p"];
pub const RECORDS_HEADER: [&str; 9] =
    ["problem", "n", "rule", "status", "iters", "f_evals", "g_evals", "time_s", "f_gap"];
pub const DIAGNOSTICS_MARKER: &str = "# diagnostics";

pub fn fmt_real(v: f64) -> String {
    if v.is_nan() {
        "NaN".into()
    } else if v.is_infinite() {
        if v > 0.0 { "inf" } else { "-inf" }.into()
    } else {
        format!("{v:.16e}")
    }
}

fn parse_real(s: &str) -> Option<f64> {
    match s {
        "inf" => Some(f64::INFINITY),
        "-inf" => Some(f64::NEG_INFINITY),
        _ => s.parse().ok(),
    }
}

fn io_err(path: &Path) -> impl FnOnce(io::Error) -> CsvError + '_ {
    move |source| CsvError::Io { path: path.to_path_buf(), source }
}

fn csv_err(path: &Path) -> impl FnOnce(csv::Error) -> CsvError + '_ {
    move |source| {
        // surface plain I/O failures as such
        if source.is_io_error() {
            match source.into_kind() {
                csv::ErrorKind::Io(e) => CsvError::Io { path: path.to_path_buf(), source: e },
                _ => unreachable!(),
            }
        } else {
            CsvError::Csv { path: path.to_path_buf(), source }
        }
    }
}

fn create(path: &Path) -> Result<BufWriter<File>, CsvError> {
    File::create(path).map(BufWriter::new).map_err(io_err(path))
}

pub fn trace_to_writer<W: Write>(w: W, trace: &[IterationRecord]) -> csv::Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(TRACE_HEADER)?;
    for r in trace {
        out.write_record([
            r.k.to_string(),
            fmt_real(r.f),
            fmt_real(r.gnorm),
            fmt_real(r.alpha_bar),
            fmt_real(r.lambda),
            r.p.to_string(),
        ])?;
    }
    out.flush()?;
    Ok(())
}

pub fn write_trace(path: &Path, trace: &[IterationRecord]) -> Result<(), CsvError> {
    trace_to_writer(create(path)?, trace).map_err(csv_err(path))
}

/// ```text
/// # diagnostics
/// root_rate,<r or NA>
/// monotone,<true|false>
/// k,error_ratio,secant_residual
/// 0,…
/// ```
pub fn diagnostics_to_writer<W: Write>(mut w: W, report: &RateReport) -> io::Result<()> {
    writeln!(w, "{DIAGNOSTICS_MARKER}")?;
    writeln!(w, "root_rate,{}", report.root_rate.map_or("NA".into(), fmt_real))?;
    writeln!(w, "monotone,{}", report.monotone)?;
    writeln!(w, "k,error_ratio,secant_residual")?;
    let residuals = report.secant_residuals.as_deref().unwrap_or(&[]);
    let rows = report.superlinear_ratios.len().max(residuals.len());
    for k in 0..rows {
        let ratio = report.superlinear_ratios.get(k).map_or("NA".into(), |&v| fmt_real(v));
        let res = residuals.get(k).copied().flatten().map_or("NA".into(), fmt_real);
        writeln!(w, "{k},{ratio},{res}")?;
    }
    w.flush()
}

pub fn append_diagnostics(path: &Path, report: &RateReport) -> Result<(), CsvError> {
    let file = OpenOptions::new().append(true).open(path).map_err(io_err(path))?;
    diagnostics_to_writer(BufWriter::new(file), report).map_err(io_err(path))
}

pub fn records_to_writer<W: Write>(w: W, records: &[BenchRecord]) -> csv::Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(RECORDS_HEADER)?;
    for r in records {
        out.write_record([
            r.problem.clone(),
            r.n.to_string(),
            r.rule.clone(),
            r.status.to_string(),
            r.iters.to_string(),
            r.f_evals.to_string(),
            r.g_evals.to_string(),
            fmt_real(r.time_seconds),
            r.f_gap.map_or("NA".into(), fmt_real),
        ])?;
    }
    out.flush()?;
    Ok(())
}

pub fn write_records(path: &Path, records: &[BenchRecord]) -> Result<(), CsvError> {
    records_to_writer(create(path)?, records).map_err(csv_err(path))
}

pub fn read_records(path: &Path) -> Result<Vec<BenchRecord>, CsvError> {
    let file = File::open(path).map_err(io_err(path))?;
    let mut rdr = csv::Reader::from_reader(file);
    let header = rdr.headers().map_err(csv_err(path))?.clone();
    if header.iter().ne(RECORDS_HEADER) {
        return Err(CsvError::Parse {
            path: path.to_path_buf(),
            line: 1,
            msg: format!("expected header `{}`", RECORDS_HEADER.join(",")),
        });
    }
    let mut records = Vec::new();
    for row in rdr.records() {
        let row = row.map_err(csv_err(path))?;
        let line = row.position().map_or(0, |p| p.line());
        let bad = |msg: String| CsvError::Parse { path: path.to_path_buf(), line, msg };
        let int = |i: usize| -> Result<usize, CsvError> {
            row[i].parse().map_err(|_| bad(format!("{}: not an integer: `{}`", RECORDS_HEADER[i], &row[i])))
        };
        let status = Status::parse(&row[3]).ok_or_else(|| bad(format!("unknown status `{}`", &row[3])))?;
        let time_seconds =
            parse_real(&row[7]).ok_or_else(|| bad(format!("time_s: not a number: `{}`", &row[7])))?;
        let f_gap = match &row[8] {
            "NA" => None,
            s => Some(parse_real(s).ok_or_else(|| bad(format!("f_gap: not a number: `{s}`")))?),
        };
        records.push(BenchRecord {
            problem: row[0].to_string(),
            n: int(1)?,
            rule: row[2].to_string(),
            status,
            iters: int(4)?,
            f_evals: int(5)?,
            g_evals: int(6)?,
            time_seconds,
            f_gap,
        });
    }
    Ok(records)
}

pub fn profile_to_writer<W: Write>(w: W, profile: &PerformanceProfile) -> csv::Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(std::iter::once("tau").chain(profile.solver_names.iter().map(String::as_str)))?;
    for (t, &tau) in profile.tau.iter().enumerate() {
        out.write_record(
            std::iter::once(fmt_real(tau)).chain(profile.p_values.iter().map(|c| fmt_real(c[t]))),
        )?;
    }
    out.flush()?;
    Ok(())
}

pub fn write_profile(path: &Path, profile: &PerformanceProfile) -> Result<(), CsvError> {
    profile_to_writer(create(path)?, profile).map_err(csv_err(path))
}

pub fn ratios_to_writer<W: Write>(w: W, profile: &PerformanceProfile) -> csv::Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(
        ["problem", "n"]
            .into_iter()
            .chain(profile.solver_names.iter().map(String::as_str)),
    )?;
    for ((name, n), row) in profile.problems.iter().zip(&profile.ratios) {
        out.write_record(
            [name.clone(), n.to_string()]
                .into_iter()
                .chain(row.iter().map(|&r| fmt_real(r))),
        )?;
    }
    out.flush()?;
    Ok(())
}

pub fn write_ratios(path: &Path, profile: &PerformanceProfile) -> Result<(), CsvError> {
    ratios_to_writer(create(path)?, profile).map_err(csv_err(path))
}
