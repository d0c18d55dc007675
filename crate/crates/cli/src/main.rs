//! `frobenius`: command-line driver for the Frobenius-statistics experiments.
//!
//! Every run writes its tables and reports into `--out` together with a
//! `manifest.json`. Exit codes: 0 success, 2 usage error, 3 capacity refusal,
//! 4 invariant violation; failures print one `error kind=... code=...` line
//! on stderr.

mod commands;
mod manifest;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};
use frobenius_core::kloosterman::DEFAULT_CEILING;
use frobenius_core::{Error, ErrorClass, FieldConfig};

use commands::{AsymptoticTest, Family, Group};
use manifest::RunRequest;

/// Overrides the default field-order ceiling when `--ceiling` is absent.
pub const CEILING_ENV: &str = "FROBENIUS_CEILING";

#[derive(Debug, Parser)]
#[command(name = "frobenius", version, about = "Frobenius eigenvalue statistics over finite fields")]
struct Cli {
    /// Worker threads (default: logical cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Normalized Sym^{2i} traces of the Legendre family against their limits.
    LegendreMoments {
        #[arg(long)]
        p: u32,
        #[arg(long, default_value_t = 4)]
        n_max: u32,
        #[arg(long, default_value_t = 100_000)]
        i_max: u64,
        #[arg(long, default_value = "frobenius-out")]
        out: PathBuf,
        /// Largest field order built.
        #[arg(long)]
        ceiling: Option<u64>,
    },
    /// Characteristic polynomials of Frobenius on H¹ for the listed i.
    LegendreCharpoly {
        #[arg(long)]
        p: u32,
        /// Comma-separated list, e.g. "2,3,4".
        #[arg(long)]
        i_list: String,
        #[arg(long, default_value = "frobenius-out")]
        out: PathBuf,
        #[arg(long)]
        ceiling: Option<u64>,
    },
    /// Local classes, regular semisimplicity, character decay and limiting
    /// moments for hyper-Kloosterman sums.
    Kloosterman {
        #[arg(long)]
        p: u32,
        #[arg(long = "bigN")]
        big_n: u32,
        #[arg(long, default_value_t = 2)]
        n_max: u32,
        /// Weight direction and count, e.g. "1,1x40".
        #[arg(long, default_value = "1,1x40")]
        weights: String,
        /// Hypothesized period of the boundary contribution.
        #[arg(long, default_value_t = 1)]
        b: u32,
        #[arg(long, default_value = "frobenius-out")]
        out: PathBuf,
        #[arg(long)]
        ceiling: Option<u64>,
    },
    /// Tabulate a limiting density with its CDF.
    Measure {
        #[arg(long)]
        q: f64,
        #[arg(long, value_enum)]
        family: Family,
        /// Grid nodes in the density and CDF tables.
        #[arg(long, default_value_t = 1024)]
        samples: usize,
        #[arg(long, default_value = "frobenius-out")]
        out: PathBuf,
    },
    /// Decay of normalized characters and nilpotent kernels along a ray of
    /// dominant weights.
    Asymptotics {
        #[arg(long, value_enum)]
        group: Group,
        #[arg(long, value_enum)]
        test: AsymptoticTest,
        #[arg(long, default_value_t = 40)]
        steps: u32,
        /// Comma-separated direction in fundamental-weight coordinates.
        #[arg(long)]
        direction: Option<String>,
        /// Comma-separated eigenvalue angles of the class (N - 1 of them).
        #[arg(long, allow_hyphen_values = true)]
        angles: Option<String>,
        #[arg(long, default_value_t = 0.05)]
        tolerance: f64,
        #[arg(long, default_value = "frobenius-out")]
        out: PathBuf,
    },
}

fn ceiling(flag: Option<u64>, default: u64) -> Result<u64, Error> {
    if let Some(c) = flag {
        return Ok(c);
    }
    match std::env::var(CEILING_ENV) {
        Ok(v) => v.trim().parse().map_err(|_| {
            Error::InvalidArgument(format!("{CEILING_ENV}={v:?} is not an unsigned integer"))
        }),
        Err(_) => Ok(default),
    }
}

fn run(cli: Cli) -> Result<(), Error> {
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Error::InvalidArgument(format!("--threads: {e}")))?;
    }
    let start = Instant::now();
    let (request, outputs, out) = match cli.command {
        Command::LegendreMoments {
            p,
            n_max,
            i_max,
            out,
            ceiling: c,
        } => {
            let c = ceiling(c, FieldConfig::default().max_order)?;
            let request = RunRequest::new("legendre-moments")
                .param("p", p)
                .param("n_max", n_max)
                .param("i_max", i_max)
                .ceiling("field_order", c);
            let files = commands::legendre_moments(&request, p, n_max, i_max, c)?;
            (request, files, out)
        }
        Command::LegendreCharpoly {
            p,
            i_list,
            out,
            ceiling: c,
        } => {
            let c = ceiling(c, FieldConfig::default().max_order)?;
            let list = commands::parse_list::<u32>(&i_list)?;
            let request = RunRequest::new("legendre-charpoly")
                .param("p", p)
                .param("i_list", &list)
                .ceiling("field_order", c);
            let files = commands::legendre_charpoly(&request, p, &list, c)?;
            (request, files, out)
        }
        Command::Kloosterman {
            p,
            big_n,
            n_max,
            weights,
            b,
            out,
            ceiling: c,
        } => {
            let c = ceiling(c, DEFAULT_CEILING)?;
            let request = RunRequest::new("kloosterman")
                .param("p", p)
                .param("N", big_n)
                .param("n_max", n_max)
                .param("weights", &weights)
                .param("b", b)
                .ceiling("field_order", c);
            let files = commands::kloosterman(&request, p, big_n, n_max, &weights, b, c)?;
            (request, files, out)
        }
        Command::Measure {
            q,
            family,
            samples,
            out,
        } => {
            let request = RunRequest::new("measure")
                .param("q", q)
                .param("family", format!("{family:?}").to_lowercase())
                .param("samples", samples);
            let files = commands::measure(&request, q, family, samples)?;
            (request, files, out)
        }
        Command::Asymptotics {
            group,
            test,
            steps,
            direction,
            angles,
            tolerance,
            out,
        } => {
            let direction = direction.as_deref().map(commands::parse_list::<u32>).transpose()?;
            let angles = angles.as_deref().map(commands::parse_list::<f64>).transpose()?;
            let request = RunRequest::new("asymptotics")
                .param("group", format!("{group:?}").to_lowercase())
                .param("test", format!("{test:?}"))
                .param("steps", steps)
                .param("direction", &direction)
                .param("angles", &angles)
                .param("tolerance", tolerance);
            let files =
                commands::asymptotics(&request, group, test, steps, direction, angles, tolerance)?;
            (request, files, out)
        }
    };
    outputs.write(&out, &request, start.elapsed())
}

fn report(kind: &str, code: &str, detail: &str) {
    let detail = detail.lines().next().unwrap_or("").trim();
    eprintln!("error kind={kind} code={code} detail={detail:?}");
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            // --help and --version
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let text = e.to_string();
            let detail = text.strip_prefix("error: ").unwrap_or(&text);
            report("usage", "invalid_command_line", detail);
            return ExitCode::from(2);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let (kind, status) = match e.class() {
                ErrorClass::Usage => ("usage", 2),
                ErrorClass::Capacity => ("capacity", 3),
                ErrorClass::Invariant => ("invariant", 4),
            };
            report(kind, e.code(), &e.to_string());
            ExitCode::from(status)
        }
    }
}
