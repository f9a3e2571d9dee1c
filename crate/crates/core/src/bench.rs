//! Wall-clock timing of the rank algorithms and log-log exponent fitting.

use std::fmt::Write as _;
use std::hint::black_box;
use std::time::Instant;

use crate::error::{Error, Result};
use crate::exactmath::Rational;
use crate::farey::{self, Algorithm};

#[derive(Clone, Debug, PartialEq)]
pub struct BenchRecord {
    pub algo: Algorithm,
    pub n: u64,
    pub reps: usize,
    pub median_ns: u128,
}

/// `F_44 / F_45`, a golden-ratio convergent: all partial quotients are 1,
/// which maximizes the depth of the floor-sum recursion for its size.
pub fn golden_x() -> Rational {
    Rational::new(701_408_733i64, 1_134_903_170i64).unwrap()
}

fn check_grid(sizes: &[u64], reps: usize) -> Result<()> {
    if reps < 3 {
        return Err(Error::domain(format!("need at least 3 repetitions, got {reps}")));
    }
    if sizes.len() < 4 {
        return Err(Error::domain(format!("need at least 4 sizes, got {}", sizes.len())));
    }
    if sizes.windows(2).any(|w| w[0] >= w[1]) || sizes[0] == 0 {
        return Err(Error::domain("sizes must be positive and strictly ascending"));
    }
    if sizes[sizes.len() - 1] < sizes[0].saturating_mul(100) {
        return Err(Error::domain("sizes must span at least two decades"));
    }
    Ok(())
}

/// Median wall time of `reps` timed runs, after one discarded warm-up run.
pub fn time_rank(algo: Algorithm, x: &Rational, n: u64, reps: usize) -> Result<u128> {
    black_box(farey::rank(x, n, algo)?);
    let mut times: Vec<u128> = Vec::with_capacity(reps);
    for _ in 0..reps {
        let start = Instant::now();
        black_box(farey::rank(black_box(x), black_box(n), algo)?);
        times.push(start.elapsed().as_nanos());
    }
    times.sort_unstable();
    Ok(times[times.len() / 2])
}

pub fn run_grid(algo: Algorithm, sizes: &[u64], reps: usize) -> Result<Vec<BenchRecord>> {
    check_grid(sizes, reps)?;
    let x = golden_x();
    sizes
        .iter()
        .map(|&n| {
            Ok(BenchRecord {
                algo,
                n,
                reps,
                median_ns: time_rank(algo, &x, n, reps)?,
            })
        })
        .collect()
}

pub const CSV_HEADER: &str = "algo,n,reps,median_ns";

pub fn to_csv(records: &[BenchRecord]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in records {
        let _ = writeln!(out, "{},{},{},{}", r.algo, r.n, r.reps, r.median_ns);
    }
    out
}

/// Least-squares slope of `ln(time)` against `ln(n)`.
pub fn fit_exponent(records: &[BenchRecord]) -> Result<f64> {
    if records.len() < 4 {
        return Err(Error::domain(format!(
            "need at least 4 records to fit, got {}",
            records.len()
        )));
    }
    if records.iter().any(|r| r.algo != records[0].algo) {
        return Err(Error::domain("records mix algorithms"));
    }
    if records.iter().any(|r| r.median_ns == 0) {
        return Err(Error::domain("zero timing cannot be fitted on a log scale"));
    }
    let pts: Vec<(f64, f64)> = records
        .iter()
        .map(|r| ((r.n as f64).ln(), (r.median_ns as f64).ln()))
        .collect();
    let len = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / len;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / len;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    if sxx == 0.0 {
        return Err(Error::domain("all sizes are equal"));
    }
    Ok(sxy / sxx)
}
