//! Command-line front end over the library commands.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{ArgGroup, Parser, Subcommand};

use linepack::cli::{
    self, BoundsCmd, CertifyCmd, CertifyMode, FetchCmd, FigureCmd, LpCmd, EXIT_INPUT_ERROR,
};
use linepack::frames::Field;
use linepack::ingest::HttpTransport;

#[derive(Parser)]
#[command(
    name = "linepack",
    version,
    about = "Coherence bounds, certificates, and figure data for line packings"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the coherence lower bounds for one (d, n, field).
    Bounds {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value = "real")]
        field: Field,
        /// Machine-readable report on stdout.
        #[arg(long)]
        json: bool,
    },
    /// Run a certificate on a packing file (JSON report on stdout).
    #[command(group(
        ArgGroup::new("mode").required(true).args(["lemma", "theorem3", "welch_equality"])
    ))]
    Certify {
        /// Packing file; dimensions from --d/--n or a `d n` header line.
        input: PathBuf,
        /// Replay the coherence-duality inequality chain.
        #[arg(long)]
        lemma: bool,
        /// Diagnose the polynomial Gram bound equality conditions.
        #[arg(long)]
        theorem3: bool,
        /// Test equality in the Cauchy–Schwarz Gram bound.
        #[arg(long = "welch-equality")]
        welch_equality: bool,
        #[arg(long)]
        d: Option<usize>,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, default_value = "real")]
        field: Field,
        /// Margin tolerance for equality diagnoses.
        #[arg(long, default_value_t = 1e-7)]
        tol: f64,
        /// Accepted for uniformity; certify output is always JSON.
        #[arg(long)]
        json: bool,
    },
    /// Solve the polynomial LP for one (k, field).
    Lp {
        #[arg(long)]
        k: usize,
        #[arg(long, default_value = "complex")]
        field: Field,
        /// Also minimize c0 over the discretized LP and report the gap.
        #[arg(long)]
        minimize: bool,
        /// Grid size for the discretized LP and certificates.
        #[arg(long, default_value_t = 4097)]
        grid: usize,
        #[arg(long)]
        json: bool,
    },
    /// Emit the bound-comparison table as CSV.
    Figure {
        #[arg(long)]
        d: usize,
        #[arg(long = "n-min")]
        n_min: usize,
        #[arg(long = "n-max")]
        n_max: usize,
        #[arg(long, default_value = "real")]
        field: Field,
        /// Directory searched for packing_d{d}_n{n}.txt / grass.{d}.{n} files.
        #[arg(long = "packings-dir")]
        packings_dir: Option<PathBuf>,
        /// CSV destination; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Treat n equal to the orthoplex threshold as applicable too.
        #[arg(long = "orthoplex-inclusive")]
        orthoplex_inclusive: bool,
        /// Print rows as JSON instead of CSV on stdout.
        #[arg(long)]
        json: bool,
    },
    /// Download packing files into the cache (and optionally a packings dir).
    Fetch {
        /// Full url of a single packing file.
        #[arg(long)]
        url: Option<String>,
        /// Url template with {d} and {n} placeholders; defaults to
        /// LINEPACK_DB_URL when unset.
        #[arg(long = "url-template")]
        url_template: Option<String>,
        #[arg(long)]
        d: usize,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long = "n-min")]
        n_min: Option<usize>,
        #[arg(long = "n-max")]
        n_max: Option<usize>,
        #[arg(long, default_value = "real")]
        field: Field,
        #[arg(long = "cache-dir", default_value = "packing-cache")]
        cache_dir: PathBuf,
        /// Also write fetched packings as packing_d{d}_n{n}.txt here.
        #[arg(long = "out-dir")]
        out_dir: Option<PathBuf>,
    },
}

fn run() -> Result<i32, cli::CliError> {
    let args = Cli::parse();
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    let stderr = std::io::stderr();
    let mut err = stderr.lock();

    match args.command {
        Command::Bounds { d, n, field, json } => {
            cli::cmd_bounds(&BoundsCmd { d, n, field, json }, &mut out)
        }
        Command::Certify { input, lemma, theorem3, welch_equality, d, n, field, tol, json: _ } => {
            let mode = if lemma {
                CertifyMode::Lemma
            } else if theorem3 {
                CertifyMode::Theorem3
            } else {
                debug_assert!(welch_equality);
                CertifyMode::WelchEquality
            };
            let dims = match (d, n) {
                (Some(d), Some(n)) => Some((d, n)),
                (None, None) => None,
                _ => {
                    return Err(cli::CliError::Usage(
                        "--d and --n must be given together".into(),
                    ))
                }
            };
            cli::cmd_certify(&CertifyCmd { input, mode, dims, field, tol }, &mut out)
        }
        Command::Lp { k, field, minimize, grid, json } => {
            cli::cmd_lp(&LpCmd { k, field, minimize, grid, json }, &mut out)
        }
        Command::Figure {
            d,
            n_min,
            n_max,
            field,
            packings_dir,
            out: out_path,
            orthoplex_inclusive,
            json,
        } => cli::cmd_figure(
            &FigureCmd {
                d,
                n_min,
                n_max,
                field,
                packings_dir,
                out_path,
                orthoplex_inclusive,
                json,
            },
            &mut out,
            &mut err,
        ),
        Command::Fetch { url, url_template, d, n, n_min, n_max, field, cache_dir, out_dir } => {
            let url_template =
                url_template.or_else(|| std::env::var("LINEPACK_DB_URL").ok().filter(|t| {
                    t.contains("{n}")
                }));
            cli::cmd_fetch(
                &FetchCmd { url, url_template, d, n, n_min, n_max, field, cache_dir, out_dir },
                &HttpTransport,
                &mut out,
            )
        }
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("linepack: {e}");
            ExitCode::from(EXIT_INPUT_ERROR as u8)
        }
    }
}
