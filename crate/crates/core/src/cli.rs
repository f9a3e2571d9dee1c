//! Command-line front end. stdout carries only answers; diagnostics go to
//! stderr.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

use crate::bench;
use crate::error::{Error, Result};
use crate::exactmath::Rational;
use crate::farey::{self, Algorithm};
use crate::geometry::Polygon;
use crate::primitive::{self, Options};
use crate::selftest::{self, Scale};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_INTERNAL: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "farey-lattice", version, about = "Exact Farey rank queries and primitive lattice point counts")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum AlgoArg {
    Improved,
    Pawlewicz,
    Brute,
}

impl From<AlgoArg> for Algorithm {
    fn from(a: AlgoArg) -> Self {
        match a {
            AlgoArg::Improved => Algorithm::Improved,
            AlgoArg::Pawlewicz => Algorithm::Pawlewicz,
            AlgoArg::Brute => Algorithm::Brute,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ScaleArg {
    Small,
    Medium,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Number of members of F_n that are at most x
    Rank {
        #[arg(long)]
        n: u64,
        /// Exact fraction P/Q in [0, 1]
        #[arg(long)]
        x: String,
        #[arg(long, value_enum, default_value = "improved")]
        algo: AlgoArg,
    },
    /// The k-th smallest member of F_n
    Stat {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        k: u128,
    },
    /// φ(1) + ... + φ(n)
    Totsum {
        #[arg(long)]
        n: u64,
    },
    /// Lattice points in a closed polygon
    Lattice {
        #[arg(long)]
        poly: PathBuf,
    },
    /// Primitive lattice points in a closed polygon
    Primitive {
        #[arg(long)]
        poly: PathBuf,
        /// Use the bounding-box scan instead
        #[arg(long, conflicts_with = "tau")]
        brute: bool,
        #[arg(long)]
        tau: Option<u64>,
    },
    /// Oracle-equivalence suites
    Selftest {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value = "small")]
        scale: ScaleArg,
    },
    /// Time a rank algorithm over a size grid; CSV on stdout
    Bench {
        #[arg(long, value_enum)]
        algo: AlgoArg,
        #[arg(long, value_delimiter = ',', required = true)]
        sizes: Vec<u64>,
        #[arg(long, default_value_t = 3)]
        reps: usize,
        /// Also print the fitted log-log slope
        #[arg(long)]
        fit: bool,
    },
}

fn read_polygon(path: &PathBuf) -> Result<Polygon> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    Polygon::parse(&text)
}

/// Writes the answer and returns the exit code.
fn dispatch(cmd: Command, out: &mut dyn Write) -> Result<i32> {
    let io = |e: std::io::Error| Error::internal(format!("write failed: {e}"));
    match cmd {
        Command::Rank { n, x, algo } => {
            let x: Rational = x.parse()?;
            writeln!(out, "{}", farey::rank(&x, n, algo.into())?).map_err(io)?;
        }
        Command::Stat { n, k } => {
            writeln!(out, "{}", farey::statistic(k, n)?).map_err(io)?;
        }
        Command::Totsum { n } => {
            writeln!(out, "{}", farey::totient_sum(n)?).map_err(io)?;
        }
        Command::Lattice { poly } => {
            writeln!(out, "{}", read_polygon(&poly)?.count_lattice()).map_err(io)?;
        }
        Command::Primitive { poly, brute, tau } => {
            let p = read_polygon(&poly)?;
            let s = if brute {
                primitive::primitive_brute(&p)?
            } else {
                primitive::primitive_count_with(&p, Options { tau, ..Options::default() })?
            };
            writeln!(out, "{s}").map_err(io)?;
        }
        Command::Selftest { seed, scale } => {
            let scale = match scale {
                ScaleArg::Small => Scale::Small,
                ScaleArg::Medium => Scale::Medium,
            };
            let report = selftest::run(seed, scale)?;
            write!(out, "{}", report.render()).map_err(io)?;
            if !report.passed() {
                return Ok(EXIT_INTERNAL);
            }
        }
        Command::Bench { algo, sizes, reps, fit } => {
            let records = bench::run_grid(algo.into(), &sizes, reps)?;
            write!(out, "{}", bench::to_csv(&records)).map_err(io)?;
            if fit {
                writeln!(out, "fit,{:.3}", bench::fit_exponent(&records)?).map_err(io)?;
            }
        }
    }
    Ok(EXIT_OK)
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Internal(_) => EXIT_INTERNAL,
        _ => EXIT_INVALID,
    }
}

/// Parses `args` (including the program name) and runs one subcommand.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        // --help and --version also arrive here, on the stdout side
        Err(e) if !e.use_stderr() => {
            let _ = write!(out, "{}", e.render());
            return EXIT_OK;
        }
        Err(e) => {
            let _ = write!(err, "{}", e.render());
            return EXIT_USAGE;
        }
    };
    match dispatch(cli.command, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}
