//! Oracle-equivalence suites runnable from the command line.

use std::fmt::Write as _;

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::exactmath::{floor_sum, Rational};
use crate::farey::{self, Algorithm};
use crate::fixtures;
use crate::geometry::Polygon;
use crate::primitive::{self, Options};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Scale {
    Small,
    Medium,
}

impl Scale {
    fn pick<T>(self, small: T, medium: T) -> T {
        match self {
            Scale::Small => small,
            Scale::Medium => medium,
        }
    }
}

#[derive(Clone, Debug)]
pub struct SuiteResult {
    pub name: &'static str,
    pub cases: usize,
    /// First mismatch, if any.
    pub failure: Option<String>,
}

impl SuiteResult {
    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }
}

#[derive(Clone, Debug)]
pub struct Report {
    pub suites: Vec<SuiteResult>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.suites.iter().all(SuiteResult::passed)
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for s in &self.suites {
            match &s.failure {
                None => writeln!(out, "PASS {} ({} cases)", s.name, s.cases),
                Some(why) => writeln!(out, "FAIL {} ({} cases): {why}", s.name, s.cases),
            }
            .unwrap();
        }
        let ok = self.suites.iter().filter(|s| s.passed()).count();
        writeln!(out, "{ok}/{} suites passed", self.suites.len()).unwrap();
        out
    }
}

type Check = Result<Option<String>>;

fn suite(name: &'static str, cases: usize, body: impl FnOnce() -> Check) -> Result<SuiteResult> {
    Ok(SuiteResult {
        name,
        cases,
        failure: body()?,
    })
}

fn random_fraction(rng: &mut ChaCha8Rng, max_den: i64) -> Rational {
    let b = rng.gen_range(1..=max_den);
    let a = rng.gen_range(0..=b);
    Rational::new(a, b).unwrap()
}

fn lattice_scan(p: &Polygon) -> u64 {
    let (x0, x1, y0, y1) = p.lattice_bbox_scaled(1);
    let (x0, x1, y0, y1) = (
        x0.to_i64().unwrap(),
        x1.to_i64().unwrap(),
        y0.to_i64().unwrap(),
        y1.to_i64().unwrap(),
    );
    let mut count = 0;
    for x in x0..=x1 {
        for y in y0..=y1 {
            if p.contains_lattice_scaled(x, y, 1) {
                count += 1;
            }
        }
    }
    count
}

fn floor_sum_suite(rng: &mut ChaCha8Rng, scale: Scale) -> Check {
    let max_n = scale.pick(200u64, 1000);
    for _ in 0..scale.pick(20, 100) {
        let x = random_fraction(rng, 1 << 20);
        let mut acc = BigUint::default();
        for n in 1..=max_n {
            acc += (BigUint::from(n) * x.numer().magnitude()) / x.denom().magnitude();
            if floor_sum(n, &x)? != acc {
                return Ok(Some(format!("floor_sum({n}, {x})")));
            }
        }
    }
    Ok(None)
}

fn rank_suite(rng: &mut ChaCha8Rng, scale: Scale) -> Check {
    for _ in 0..scale.pick(100, 400) {
        let n = rng.gen_range(1..=scale.pick(300u64, 2000));
        let x = random_fraction(rng, 500);
        let expect = farey::rank_brute(&x, n)?;
        for algo in [Algorithm::Pawlewicz, Algorithm::Improved] {
            let got = farey::rank(&x, n, algo)?;
            if got != expect {
                return Ok(Some(format!("{algo} rank({x}, {n}) = {got}, brute {expect}")));
            }
        }
    }
    for _ in 0..scale.pick(10, 40) {
        let n = rng.gen_range(1..=scale.pick(1_000_000u64, 10_000_000));
        let x = random_fraction(rng, 1 << 30);
        let a = farey::rank_pawlewicz(&x, n)?;
        let b = farey::rank_improved(&x, n)?;
        if a != b {
            return Ok(Some(format!("rank({x}, {n}): pawlewicz {a}, improved {b}")));
        }
    }
    Ok(None)
}

fn round_trip_suite(scale: Scale) -> Check {
    for n in 1..=scale.pick(30u64, 60) {
        let total = farey::rank_improved(&Rational::one(), n)?;
        for k in 1..=total {
            let f = farey::statistic(k, n)?;
            let back = farey::rank_improved(&f, n)?;
            if back != k {
                return Ok(Some(format!("rank(statistic({k}, {n})) = {back}")));
            }
        }
    }
    Ok(None)
}

fn totient_suite(scale: Scale) -> Check {
    let limit = scale.pick(2_000usize, 20_000);
    let mut phi: Vec<u64> = (0..=limit as u64).collect();
    for p in 2..=limit {
        if phi[p] == p as u64 {
            for m in (p..=limit).step_by(p) {
                phi[m] -= phi[m] / p as u64;
            }
        }
    }
    let mut acc = 0u128;
    for (n, &ph) in phi.iter().enumerate().skip(1) {
        acc += u128::from(ph);
        if n % 97 == 0 || n == limit {
            let got = farey::totient_sum(n as u64)?;
            if got != acc {
                return Ok(Some(format!("totient_sum({n}) = {got}, sieve {acc}")));
            }
        }
    }
    Ok(None)
}

fn lattice_suite(rng: &mut ChaCha8Rng, scale: Scale) -> Check {
    for _ in 0..scale.pick(60, 300) {
        let r = fixtures::log_uniform_radius(rng, 2, 90);
        let p = fixtures::random_polygon(rng, r);
        let got = p.count_lattice();
        let expect = lattice_scan(&p);
        if got != BigUint::from(expect) {
            return Ok(Some(format!("count_lattice = {got}, scan {expect} for\n{p}")));
        }
    }
    Ok(None)
}

fn primitive_suite(rng: &mut ChaCha8Rng, scale: Scale) -> Check {
    for _ in 0..scale.pick(40, 200) {
        let r = fixtures::log_uniform_radius(rng, 3, scale.pick(200, 900));
        let p = fixtures::random_polygon(rng, r);
        let expect = primitive::primitive_brute(&p)?;
        for grouping in [true, false] {
            let got = primitive::primitive_count_with(&p, Options { tau: None, grouping })?;
            if got != expect {
                return Ok(Some(format!(
                    "primitive_count (grouping {grouping}) = {got}, brute {expect} for\n{p}"
                )));
            }
        }
    }
    Ok(None)
}

fn triangle_suite() -> Check {
    for n in [10u64, 50, 100] {
        for (a, b) in [(1, 3), (1, 2), (2, 3), (1, 1)] {
            let x = Rational::new(a, b)?;
            let tri = fixtures::farey_triangle(n, &x)?;
            let got = primitive::primitive_count(&tri)?;
            let expect = farey::rank_improved(&x, n)?;
            if got != expect {
                return Ok(Some(format!("triangle({n}, {x}): {got} vs rank {expect}")));
            }
        }
    }
    Ok(None)
}

pub fn run(seed: u64, scale: Scale) -> Result<Report> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let suites = vec![
        suite("floor_sum", scale.pick(20, 100), || floor_sum_suite(&mut rng, scale))?,
        suite("rank", scale.pick(110, 440), || rank_suite(&mut rng, scale))?,
        suite("round_trip", scale.pick(30, 60), || round_trip_suite(scale))?,
        suite("totient_sum", scale.pick(2_000, 20_000), || totient_suite(scale))?,
        suite("count_lattice", scale.pick(60, 300), || lattice_suite(&mut rng, scale))?,
        suite("primitive", scale.pick(40, 200), || primitive_suite(&mut rng, scale))?,
        suite("farey_triangle", 12, triangle_suite)?,
    ];
    Ok(Report { suites })
}

impl std::str::FromStr for Scale {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "small" => Ok(Scale::Small),
            "medium" => Ok(Scale::Medium),
            _ => Err(Error::Parse(format!("unknown scale {s:?}"))),
        }
    }
}
