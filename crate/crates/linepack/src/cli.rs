//! Batch front end: bound tables, certificates, LP reports, figure data.
//!
//! Every command is a plain function writing to supplied streams and
//! returning the process exit code, so the binary stays a thin argument
//! parser and tests can drive the commands directly. Exit conventions:
//! `0` success, `1` a certificate ran but failed, `2` input or usage error.
//!
//! Numbers in text and CSV output are formatted to 9 significant digits with
//! `.` as decimal separator and `\n` line endings, so repeated runs on the
//! same inputs are byte-identical.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;
use thiserror::Error;

use crate::bounds::{bound_report_with, BoundError};
use crate::certify::{
    diagnose_theorem3_equality, lemma_certificate, welch_equality_check, CertifyError,
};
use crate::delsarte::{self, DelsarteError};
use crate::frames::{Field, FrameError};
use crate::ingest::{self, IngestError};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CERT_FAIL: i32 = 1;
pub const EXIT_INPUT_ERROR: i32 = 2;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("cannot write {path}: {source}")]
    Output { path: PathBuf, source: std::io::Error },
    #[error(transparent)]
    Bound(#[from] BoundError),
    #[error(transparent)]
    Lp(#[from] DelsarteError),
    #[error(transparent)]
    Certify(#[from] CertifyError),
    #[error(transparent)]
    Ingest(#[from] IngestError),
    #[error(transparent)]
    Frame(#[from] FrameError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

/// 9 significant digits, positional notation.
pub fn fmt_sig9(v: f64) -> String {
    if v == 0.0 {
        return "0.000000000".to_string();
    }
    let exp = v.abs().log10().floor() as i32;
    let prec = (8 - exp).max(0) as usize;
    format!("{v:.prec$}")
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map(fmt_sig9).unwrap_or_default()
}

// ---------------------------------------------------------------- bounds --

#[derive(Debug, Clone)]
pub struct BoundsCmd {
    pub d: usize,
    pub n: usize,
    pub field: Field,
    pub json: bool,
}

pub fn cmd_bounds(cmd: &BoundsCmd, out: &mut dyn Write) -> Result<i32, CliError> {
    let report = bound_report_with(cmd.d, cmd.n, cmd.field, false)?;
    if cmd.json {
        writeln!(out, "{}", serde_json::to_string_pretty(&report)?)?;
    } else {
        writeln!(out, "d = {}, n = {}, field = {}", report.d, report.n, report.field)?;
        let rows = [
            ("welch", report.welch),
            ("bukh_cox", Some(report.bukh_cox)),
            ("orthoplex", report.orthoplex),
            ("levenshtein", report.levenshtein),
        ];
        for (name, value) in rows {
            let cell = value.map(fmt_sig9).unwrap_or_else(|| "n/a".to_string());
            writeln!(out, "{name:<12} {cell}")?;
        }
        writeln!(out, "{:<12} {}  ({})", "best", fmt_sig9(report.best), report.achiever)?;
    }
    Ok(EXIT_OK)
}

// -------------------------------------------------------------------- lp --

#[derive(Debug, Clone)]
pub struct LpCmd {
    pub k: usize,
    pub field: Field,
    pub minimize: bool,
    pub grid: usize,
    pub json: bool,
}

#[derive(Serialize)]
struct LpReportJson {
    tangency: delsarte::LpSolution,
    #[serde(skip_serializing_if = "Option::is_none")]
    minimized: Option<delsarte::LpSolution>,
    #[serde(skip_serializing_if = "Option::is_none")]
    gap: Option<f64>,
}

pub fn cmd_lp(cmd: &LpCmd, out: &mut dyn Write) -> Result<i32, CliError> {
    if cmd.k < 1 {
        return Err(CliError::Usage("k must be at least 1".into()));
    }
    let tangency = delsarte::tangency_solve(cmd.k, cmd.field)?;
    let minimized = if cmd.minimize {
        Some(delsarte::minimize_c0(cmd.k, cmd.field, cmd.grid.max(65))?)
    } else {
        None
    };
    let gap = minimized.as_ref().map(|m| (m.c0 - tangency.c0).abs());

    if cmd.json {
        let payload = LpReportJson { tangency, minimized, gap };
        writeln!(out, "{}", serde_json::to_string_pretty(&payload)?)?;
    } else {
        writeln!(out, "field = {}, k = {}", tangency.field, tangency.k)?;
        writeln!(out, "x* = {}", fmt_sig9(tangency.x_star))?;
        writeln!(
            out,
            "c0 = {}, c1 = {}, c2 = {}",
            fmt_sig9(tangency.c0),
            fmt_sig9(tangency.c1),
            fmt_sig9(tangency.c2)
        )?;
        let cert = &tangency.feasibility;
        writeln!(
            out,
            "feasibility: min slack {:.3e} at x = {} on {} grid points ({})",
            cert.min_slack,
            fmt_sig9(cert.argmin_x),
            cert.grid_size,
            if cert.pass { "pass" } else { "FAIL" }
        )?;
        if let (Some(m), Some(g)) = (&minimized, gap) {
            writeln!(out, "minimized c0 = {} (gap {:.3e})", fmt_sig9(m.c0), g)?;
        }
    }
    Ok(EXIT_OK)
}

// --------------------------------------------------------------- certify --

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CertifyMode {
    Lemma,
    Theorem3,
    WelchEquality,
}

#[derive(Debug, Clone)]
pub struct CertifyCmd {
    pub input: PathBuf,
    pub mode: CertifyMode,
    pub dims: Option<(usize, usize)>,
    pub field: Field,
    pub tol: f64,
}

#[derive(Serialize)]
struct LemmaJson {
    kind: &'static str,
    #[serde(flatten)]
    certificate: crate::certify::LemmaCertificate,
}

#[derive(Serialize)]
struct Theorem3Json {
    kind: &'static str,
    diagnosis: crate::certify::EqualityDiagnosis,
    one_norm: f64,
    gram_bound: f64,
}

#[derive(Serialize)]
struct WelchJson {
    kind: &'static str,
    #[serde(flatten)]
    report: crate::certify::WelchEqualityReport,
}

pub fn cmd_certify(cmd: &CertifyCmd, out: &mut dyn Write) -> Result<i32, CliError> {
    let record = ingest::load_packing(&cmd.input, cmd.dims, cmd.field)?;
    let config = &record.configuration;
    match cmd.mode {
        CertifyMode::Lemma => {
            let cert = lemma_certificate(config)?;
            let valid = cert.valid;
            let payload = LemmaJson { kind: "lemma", certificate: cert };
            writeln!(out, "{}", serde_json::to_string_pretty(&payload)?)?;
            Ok(if valid { EXIT_OK } else { EXIT_CERT_FAIL })
        }
        CertifyMode::Theorem3 => {
            let diagnosis = diagnose_theorem3_equality(config, cmd.tol)?;
            let ok = diagnosis.all_satisfied;
            let one_norm = config.gram_report().one_norm;
            let gram_bound =
                delsarte::gram_one_norm_bound_bc(config.d(), config.n(), config.field())?;
            let payload = Theorem3Json { kind: "theorem3", diagnosis, one_norm, gram_bound };
            writeln!(out, "{}", serde_json::to_string_pretty(&payload)?)?;
            Ok(if ok { EXIT_OK } else { EXIT_CERT_FAIL })
        }
        CertifyMode::WelchEquality => {
            let report = welch_equality_check(config, cmd.tol)?;
            let ok = report.equal;
            let payload = WelchJson { kind: "welch-equality", report };
            writeln!(out, "{}", serde_json::to_string_pretty(&payload)?)?;
            Ok(if ok { EXIT_OK } else { EXIT_CERT_FAIL })
        }
    }
}

// ---------------------------------------------------------------- figure --

#[derive(Debug, Clone)]
pub struct FigureCmd {
    pub d: usize,
    pub n_min: usize,
    pub n_max: usize,
    pub field: Field,
    pub packings_dir: Option<PathBuf>,
    pub out_path: Option<PathBuf>,
    pub orthoplex_inclusive: bool,
    pub json: bool,
}

/// One line of the figure table.
#[derive(Debug, Clone, Serialize)]
pub struct FigureRow {
    pub n: usize,
    pub packing_coherence: Option<f64>,
    pub welch: Option<f64>,
    pub bukh_cox: Option<f64>,
    pub orthoplex: Option<f64>,
    pub levenshtein: Option<f64>,
    pub best_bound: f64,
    pub achiever: String,
}

/// Looks for a packing file for `(d, n)` under the accepted names.
pub fn find_packing_file(dir: &Path, d: usize, n: usize) -> Option<PathBuf> {
    let candidates = [
        format!("packing_d{d}_n{n}.txt"),
        format!("grass.{d}.{n}.txt"),
        format!("grass.{d}.{n}"),
    ];
    candidates.into_iter().map(|name| dir.join(name)).find(|p| p.is_file())
}

/// Computes the figure rows for `n ∈ [n_min, n_max]`; values of `n ≤ d` are
/// skipped (the bounds need `n > d`).
pub fn figure_rows(cmd: &FigureCmd, warn: &mut dyn Write) -> Result<Vec<FigureRow>, CliError> {
    if cmd.n_min > cmd.n_max {
        return Err(CliError::Usage(format!(
            "empty range: n_min = {} > n_max = {}",
            cmd.n_min, cmd.n_max
        )));
    }
    let mut rows = Vec::new();
    for n in cmd.n_min..=cmd.n_max {
        if n <= cmd.d {
            writeln!(warn, "warning: skipping n = {n} (bounds need n > d = {})", cmd.d)?;
            continue;
        }
        let report = bound_report_with(cmd.d, n, cmd.field, cmd.orthoplex_inclusive)?;
        let packing_coherence = match &cmd.packings_dir {
            Some(dir) => match find_packing_file(dir, cmd.d, n) {
                Some(path) => {
                    let rec = ingest::load_packing(&path, Some((cmd.d, n)), cmd.field)?;
                    Some(ingest::packing_coherence(&rec))
                }
                None => None,
            },
            None => None,
        };
        rows.push(FigureRow {
            n,
            packing_coherence,
            welch: report.welch,
            bukh_cox: Some(report.bukh_cox),
            orthoplex: report.orthoplex,
            levenshtein: report.levenshtein,
            best_bound: report.best,
            achiever: report.achiever.to_string(),
        });
    }
    Ok(rows)
}

/// Renders rows in the stable CSV schema.
pub fn render_csv(rows: &[FigureRow]) -> String {
    let mut out = String::from(
        "n,packing_coherence,welch,bukh_cox,orthoplex,levenshtein,best_bound,achiever\n",
    );
    for row in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{}\n",
            row.n,
            fmt_opt(row.packing_coherence),
            fmt_opt(row.welch),
            fmt_opt(row.bukh_cox),
            fmt_opt(row.orthoplex),
            fmt_opt(row.levenshtein),
            fmt_sig9(row.best_bound),
            row.achiever
        ));
    }
    out
}

pub fn cmd_figure(
    cmd: &FigureCmd,
    out: &mut dyn Write,
    warn: &mut dyn Write,
) -> Result<i32, CliError> {
    let rows = figure_rows(cmd, warn)?;
    let csv = render_csv(&rows);
    match &cmd.out_path {
        Some(path) => {
            fs::write(path, csv)
                .map_err(|source| CliError::Output { path: path.clone(), source })?;
            if cmd.json {
                writeln!(out, "{}", serde_json::to_string_pretty(&rows)?)?;
            }
        }
        None => {
            if cmd.json {
                writeln!(out, "{}", serde_json::to_string_pretty(&rows)?)?;
            } else {
                out.write_all(csv.as_bytes())?;
            }
        }
    }
    Ok(EXIT_OK)
}

// ----------------------------------------------------------------- fetch --

#[derive(Debug, Clone)]
pub struct FetchCmd {
    /// Full url for a single file.
    pub url: Option<String>,
    /// Template with `{d}` and `{n}` placeholders for a sweep.
    pub url_template: Option<String>,
    pub d: usize,
    pub n: Option<usize>,
    pub n_min: Option<usize>,
    pub n_max: Option<usize>,
    pub field: Field,
    pub cache_dir: PathBuf,
    /// When set, fetched packings are also written as
    /// `packing_d{d}_n{n}.txt` under this directory for `figure` to find.
    pub out_dir: Option<PathBuf>,
}

pub fn cmd_fetch(
    cmd: &FetchCmd,
    transport: &dyn ingest::Transport,
    out: &mut dyn Write,
) -> Result<i32, CliError> {
    let jobs: Vec<(String, usize)> = match (&cmd.url, &cmd.url_template, cmd.n) {
        (Some(url), None, Some(n)) => vec![(url.clone(), n)],
        (None, Some(template), _) => {
            let (lo, hi) = match (cmd.n_min, cmd.n_max) {
                (Some(lo), Some(hi)) if lo <= hi => (lo, hi),
                _ => {
                    return Err(CliError::Usage(
                        "--url-template needs --n-min and --n-max".into(),
                    ))
                }
            };
            (lo..=hi)
                .map(|n| {
                    let url = template
                        .replace("{d}", &cmd.d.to_string())
                        .replace("{n}", &n.to_string());
                    (url, n)
                })
                .collect()
        }
        (Some(_), None, None) => {
            return Err(CliError::Usage("--url needs --n for the packing shape".into()))
        }
        _ => {
            return Err(CliError::Usage(
                "supply either --url with --n, or --url-template with --n-min/--n-max \
                 (LINEPACK_DB_URL can hold the template)"
                    .into(),
            ))
        }
    };

    for (url, n) in jobs {
        let rec = ingest::fetch_packing(
            transport,
            &url,
            &cmd.cache_dir,
            Some((cmd.d, n)),
            cmd.field,
        )?;
        writeln!(
            out,
            "fetched d={} n={} coherence={} checksum={}",
            rec.d,
            rec.n,
            fmt_sig9(ingest::packing_coherence(&rec)),
            &rec.checksum[..16]
        )?;
        if let Some(dir) = &cmd.out_dir {
            fs::create_dir_all(dir)?;
            let path = dir.join(format!("packing_d{}_n{}.txt", cmd.d, n));
            fs::write(&path, ingest::serialize_packing(&rec.configuration, false))
                .map_err(|source| CliError::Output { path: path.clone(), source })?;
        }
    }
    Ok(EXIT_OK)
}
