//! Parsing, caching, and fetching of packing files.
//!
//! A packing file is whitespace/newline-separated decimal scalars describing
//! `n` vectors of `d` coordinates, vectors consecutive. Two layouts are
//! accepted: one coordinate per line (raw database dumps) and one vector per
//! line; both carry the same token stream, so layout detection reduces to
//! counting. Complex entries are written as `re im` pairs, doubling the
//! token count. An optional first line `d n` declares the shape.
//!
//! Network access happens only in [`fetch_packing`]; everything else runs
//! offline. Fetched bytes are cached under their content hash with a
//! sidecar metadata file, written atomically via rename.

use std::fs;
use std::io::Read;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::frames::{Field, FrameError, VectorConfiguration};
use crate::tolerances::{PACKING_NORM_TOL, RENORM_REPORT_TOL};

#[derive(Debug, Error)]
pub enum IngestError {
    #[error("expected {expected} scalar tokens, got {got}")]
    TokenCountMismatch { expected: usize, got: usize },
    #[error("column {column} has norm {norm} (must be within {tol} of 1)", tol = PACKING_NORM_TOL)]
    NormViolation { column: usize, norm: f64 },
    #[error("malformed scalar on line {line}: `{token}`")]
    Parse { line: usize, token: String },
    #[error("missing `d n` header and no dimensions supplied by the caller")]
    MissingDimensions,
    #[error("HTTP status {status} fetching {url}")]
    Network { status: u16, url: String },
    #[error("transport failure fetching {url}: {message}")]
    Transport { url: String, message: String },
    #[error("cached bytes for {url} fail their checksum")]
    CacheCorrupt { url: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Frame(#[from] FrameError),
}

/// Where a record came from.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PackingSource {
    LocalFile(PathBuf),
    Remote(String),
    Builtin,
}

/// A parsed and validated packing file.
#[derive(Debug, Clone)]
pub struct PackingRecord {
    pub d: usize,
    pub n: usize,
    pub field: Field,
    pub configuration: VectorConfiguration,
    pub source: PackingSource,
    /// SHA-256 of the raw bytes, lowercase hex.
    pub checksum: String,
    /// True when any column needed a correction above [`RENORM_REPORT_TOL`].
    pub renormalized: bool,
}

fn sha256_hex(bytes: &[u8]) -> String {
    let digest = Sha256::digest(bytes);
    let mut out = String::with_capacity(64);
    for b in digest {
        out.push_str(&format!("{b:02x}"));
    }
    out
}

fn tokenize(text: &str) -> Result<Vec<f64>, IngestError> {
    let mut tokens = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let body = line.split('#').next().unwrap_or("");
        for raw in body.split_whitespace() {
            let value = raw.parse::<f64>().map_err(|_| IngestError::Parse {
                line: idx + 1,
                token: raw.to_string(),
            })?;
            tokens.push(value);
        }
    }
    Ok(tokens)
}

/// Reads an optional `d n` header: a first line of exactly two positive
/// integers that is consistent with the remaining token count.
fn split_header(text: &str, field: Field) -> Option<((usize, usize), &str)> {
    let mut lines = text.lines();
    let first = lines.next()?;
    let head: Vec<&str> = first.split('#').next().unwrap_or("").split_whitespace().collect();
    if head.len() != 2 {
        return None;
    }
    let d = head[0].parse::<usize>().ok()?;
    let n = head[1].parse::<usize>().ok()?;
    if d == 0 || n == 0 {
        return None;
    }
    let rest = &text[first.len().min(text.len())..];
    let rest = rest.strip_prefix('\n').unwrap_or(rest);
    let expected = d * n * scalars_per_entry(field);
    let count = rest
        .lines()
        .map(|l| l.split('#').next().unwrap_or("").split_whitespace().count())
        .sum::<usize>();
    (count == expected).then_some(((d, n), rest))
}

fn scalars_per_entry(field: Field) -> usize {
    match field {
        Field::Real => 1,
        Field::Complex => 2,
    }
}

/// Parses a packing file. Dimensions come from the caller or from a header
/// line; with both present the token count decides (an exact body match
/// without a header wins over a coincidental two-integer first line).
pub fn parse_packing(
    bytes: &[u8],
    dims: Option<(usize, usize)>,
    field: Field,
) -> Result<PackingRecord, IngestError> {
    let checksum = sha256_hex(bytes);
    let text = String::from_utf8_lossy(bytes);

    let (d, n, body) = match dims {
        Some((d, n)) => {
            let expected = d * n * scalars_per_entry(field);
            let total = text
                .lines()
                .map(|l| l.split('#').next().unwrap_or("").split_whitespace().count())
                .sum::<usize>();
            if total == expected {
                (d, n, text.as_ref().to_string())
            } else if let Some(((hd, hn), rest)) = split_header(&text, field) {
                if (hd, hn) != (d, n) {
                    return Err(IngestError::TokenCountMismatch {
                        expected,
                        got: total,
                    });
                }
                (d, n, rest.to_string())
            } else {
                return Err(IngestError::TokenCountMismatch { expected, got: total });
            }
        }
        None => {
            let ((d, n), rest) =
                split_header(&text, field).ok_or(IngestError::MissingDimensions)?;
            (d, n, rest.to_string())
        }
    };

    let tokens = tokenize(&body)?;
    let expected = d * n * scalars_per_entry(field);
    if tokens.len() != expected {
        return Err(IngestError::TokenCountMismatch { expected, got: tokens.len() });
    }

    let mut entries: Vec<Complex64> = Vec::with_capacity(d * n);
    match field {
        Field::Real => {
            entries.extend(tokens.iter().map(|&re| Complex64::new(re, 0.0)));
        }
        Field::Complex => {
            for pair in tokens.chunks_exact(2) {
                entries.push(Complex64::new(pair[0], pair[1]));
            }
        }
    }

    // Token order is vector-major, i.e. column-major for the d×n matrix.
    let configuration = VectorConfiguration::from_complex_columns(d, n, &entries)?;
    let configuration = match field {
        Field::Real => {
            // Re-tag: entries were built with zero imaginary parts.
            VectorConfiguration::from_matrix(Field::Real, configuration.matrix().clone())?
        }
        Field::Complex => configuration,
    };

    let mut renormalized = false;
    for (j, norm) in configuration.column_norms().into_iter().enumerate() {
        let dev = (norm - 1.0).abs();
        if dev > PACKING_NORM_TOL {
            return Err(IngestError::NormViolation { column: j, norm });
        }
        if dev > RENORM_REPORT_TOL {
            renormalized = true;
        }
    }
    let configuration =
        if renormalized { configuration.normalized()? } else { configuration };

    Ok(PackingRecord {
        d,
        n,
        field,
        configuration,
        source: PackingSource::Builtin,
        checksum,
        renormalized,
    })
}

/// Parses a packing from disk.
pub fn load_packing(
    path: &Path,
    dims: Option<(usize, usize)>,
    field: Field,
) -> Result<PackingRecord, IngestError> {
    let bytes = fs::read(path)?;
    let mut rec = parse_packing(&bytes, dims, field)?;
    rec.source = PackingSource::LocalFile(path.to_path_buf());
    Ok(rec)
}

/// Renders a configuration in the row-per-vector layout (17 significant
/// digits, reparses to the same Gram matrix up to rounding). With `header`
/// the first line carries `d n`.
pub fn serialize_packing(config: &VectorConfiguration, header: bool) -> String {
    let mut out = String::new();
    if header {
        out.push_str(&format!("{} {}\n", config.d(), config.n()));
    }
    let m = config.matrix();
    for j in 0..config.n() {
        let mut parts: Vec<String> = Vec::with_capacity(config.d() * 2);
        for i in 0..config.d() {
            let z = m[(i, j)];
            match config.field() {
                Field::Real => parts.push(format!("{:.17e}", z.re)),
                Field::Complex => {
                    parts.push(format!("{:.17e}", z.re));
                    parts.push(format!("{:.17e}", z.im));
                }
            }
        }
        out.push_str(&parts.join(" "));
        out.push('\n');
    }
    out
}

/// Coherence of a parsed record.
pub fn packing_coherence(rec: &PackingRecord) -> f64 {
    rec.configuration.gram_report().coherence
}

/// Byte fetcher; swapping it out lets tests run against canned responses and
/// observe network activity.
pub trait Transport {
    fn get(&self, url: &str) -> Result<Vec<u8>, IngestError>;
}

/// Live HTTP transport.
#[derive(Debug, Default)]
pub struct HttpTransport;

impl Transport for HttpTransport {
    fn get(&self, url: &str) -> Result<Vec<u8>, IngestError> {
        match ureq::get(url).call() {
            Ok(mut resp) => {
                let mut buf = Vec::new();
                resp.body_mut()
                    .as_reader()
                    .read_to_end(&mut buf)
                    .map_err(|e| IngestError::Transport {
                        url: url.to_string(),
                        message: e.to_string(),
                    })?;
                Ok(buf)
            }
            Err(ureq::Error::StatusCode(status)) => {
                Err(IngestError::Network { status, url: url.to_string() })
            }
            Err(e) => Err(IngestError::Transport { url: url.to_string(), message: e.to_string() }),
        }
    }
}

#[derive(Debug, Serialize, Deserialize)]
struct CacheMeta {
    url: String,
    d: usize,
    n: usize,
    field: String,
    timestamp: u64,
}

fn atomic_write(path: &Path, bytes: &[u8]) -> Result<(), IngestError> {
    let tmp = path.with_extension("tmp");
    fs::write(&tmp, bytes)?;
    fs::rename(&tmp, path)?;
    Ok(())
}

fn cached_lookup(cache_dir: &Path, url: &str) -> Option<(PathBuf, String)> {
    let entries = fs::read_dir(cache_dir).ok()?;
    for entry in entries.flatten() {
        let path = entry.path();
        if path.extension().and_then(|e| e.to_str()) != Some("meta") {
            continue;
        }
        let Ok(raw) = fs::read_to_string(&path) else { continue };
        let Ok(meta) = serde_json::from_str::<CacheMeta>(&raw) else { continue };
        if meta.url == url {
            let checksum = path.file_stem()?.to_str()?.to_string();
            let dat = path.with_extension("dat");
            if dat.exists() {
                return Some((dat, checksum));
            }
        }
    }
    None
}

/// Fetches a packing file, serving repeats from the cache.
///
/// Cache layout: `<cache_dir>/<sha256>.dat` for the raw bytes plus
/// `<sha256>.meta` recording url, dimensions, field, and fetch time. A hit
/// is found by scanning metadata for the url, so no second request is made.
pub fn fetch_packing(
    transport: &dyn Transport,
    url: &str,
    cache_dir: &Path,
    dims: Option<(usize, usize)>,
    field: Field,
) -> Result<PackingRecord, IngestError> {
    fs::create_dir_all(cache_dir)?;

    if let Some((dat, checksum)) = cached_lookup(cache_dir, url) {
        let bytes = fs::read(&dat)?;
        if sha256_hex(&bytes) != checksum {
            return Err(IngestError::CacheCorrupt { url: url.to_string() });
        }
        let mut rec = parse_packing(&bytes, dims, field)?;
        rec.source = PackingSource::Remote(url.to_string());
        return Ok(rec);
    }

    let bytes = transport.get(url)?;
    let mut rec = parse_packing(&bytes, dims, field)?;
    rec.source = PackingSource::Remote(url.to_string());

    let dat = cache_dir.join(format!("{}.dat", rec.checksum));
    atomic_write(&dat, &bytes)?;
    let meta = CacheMeta {
        url: url.to_string(),
        d: rec.d,
        n: rec.n,
        field: rec.field.to_string(),
        timestamp: SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0),
    };
    let meta_path = cache_dir.join(format!("{}.meta", rec.checksum));
    atomic_write(&meta_path, serde_json::to_string_pretty(&meta).unwrap().as_bytes())?;
    Ok(rec)
}
