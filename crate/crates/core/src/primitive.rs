//! Counting primitive lattice points `S(P)` in a star-shaped polygon.
//!
//! Every non-origin lattice point of `P` is `g·q` for a unique primitive `q`
//! and `g = gcd ≥ 1`, and `q ∈ P_{/g}`. Hence
//!
//! ```text
//! S(P_{/i}) = A(P_{/i}) − 1 − Σ_{d≥2} S(P_{/(i·d)})
//! ```
//!
//! where the `−1` removes the origin. Star-shapedness makes the scaled
//! copies nested, so `S(P_{/j})` is non-increasing in `j` and vanishes once
//! `j > D`. Scales `j ≥ τ` are answered from an [`ImplicitTail`]: the sorted
//! list of exit scales `φ` of the primitive points of `P_{/τ}`. Scales below
//! `τ` are filled top-down by [`dp_term`].

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::ToPrimitive;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::exactmath::root_round;
use crate::geometry::Polygon;

/// Largest diameter accepted by [`primitive_brute`].
pub const BRUTE_DIAMETER_LIMIT: u64 = 5000;

/// Largest diameter the counting routines accept; lattice coordinates are
/// handled as `i64`.
pub const DIAMETER_LIMIT: u64 = 1 << 31;

/// Sorted exit scales of the primitive points of `P_{/τ}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ImplicitTail {
    tau: u64,
    /// non-increasing
    phis: Vec<u64>,
}

impl ImplicitTail {
    pub fn tau(&self) -> u64 {
        self.tau
    }

    pub fn phis(&self) -> &[u64] {
        &self.phis
    }

    /// `S(P_{/i}) = #{φ > i}` for `i ≥ τ`.
    pub fn query(&self, i: u64) -> Result<u128> {
        if i < self.tau {
            return Err(Error::domain(format!(
                "tail answers scales >= {}, asked for {i}",
                self.tau
            )));
        }
        Ok(self.phis.partition_point(|&phi| phi > i) as u128)
    }
}

pub fn tail_query(tail: &ImplicitTail, i: u64) -> Result<u128> {
    tail.query(i)
}

/// `S(P_{/i})` for the scales below the crossover.
#[derive(Clone, Debug)]
pub struct PrimitiveRun {
    /// `small[i]` for `1 ≤ i < tau`; index 0 unused
    small: Vec<Option<u128>>,
    diameter: u64,
    tau: u64,
}

impl PrimitiveRun {
    pub fn new(diameter: u64, tau: u64) -> Self {
        PrimitiveRun {
            small: vec![None; tau.max(1) as usize],
            diameter,
            tau,
        }
    }

    pub fn diameter(&self) -> u64 {
        self.diameter
    }

    pub fn tau(&self) -> u64 {
        self.tau
    }

    pub fn get(&self, i: u64) -> Option<u128> {
        self.small.get(i as usize).copied().flatten()
    }

    pub fn set(&mut self, i: u64, value: u128) {
        assert!((1..self.tau).contains(&i), "scale {i} outside 1..{}", self.tau);
        self.small[i as usize] = Some(value);
    }

    fn require(&self, i: u64) -> Result<u128> {
        self.get(i)
            .ok_or_else(|| Error::internal(format!("S(P/{i}) read before it was computed")))
    }
}

/// Knobs for [`primitive_count_with`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Options {
    /// Crossover scale; `round(D^{4/7})` when `None`.
    pub tau: Option<u64>,
    /// Sum the far tail by runs of equal value instead of term by term.
    pub grouping: bool,
}

impl Default for Options {
    fn default() -> Self {
        Options {
            tau: None,
            grouping: true,
        }
    }
}

fn diameter_u64(p: &Polygon) -> Result<u64> {
    p.diameter_bound()
        .to_u64()
        .filter(|&d| d <= DIAMETER_LIMIT)
        .ok_or_else(|| {
            Error::domain(format!(
                "diameter bound {} exceeds {DIAMETER_LIMIT}",
                p.diameter_bound()
            ))
        })
}

/// `round(D^{4/7})` clamped to `[1, D]`.
pub fn default_tau(diameter: u64) -> u64 {
    let d4 = BigUint::from(diameter).pow(4u32);
    let tau = root_round(&d4, &BigUint::from(1u32), 7).to_u64().unwrap_or(u64::MAX);
    tau.clamp(1, diameter.max(1))
}

/// `round(D^{2/3} i^{1/3})`
fn split_point(diameter: u64, i: u64) -> u64 {
    let v = BigUint::from(diameter).pow(2u32) * i;
    root_round(&v, &BigUint::from(1u32), 3).to_u64().unwrap_or(u64::MAX)
}

/// Least `i` with `pt ∉ P_{/i}`, given `pt ∈ P_{/lo}` and `pt ∉ P_{/hi}`.
fn exit_scale(p: &Polygon, x: i64, y: i64, mut lo: u64, mut hi: u64) -> u64 {
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if p.contains_lattice_scaled(x, y, mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    hi
}

/// `φ(pt) = min{ i ≥ 1 : pt ∉ P_{/i} }`, searched over `[1, D+2]`.
pub fn phi_value(p: &Polygon, pt: (i64, i64), diameter: u64) -> Result<u64> {
    let (x, y) = pt;
    if (x, y) == (0, 0) {
        return Err(Error::domain("the origin has no exit scale"));
    }
    if !p.contains_lattice_scaled(x, y, 1) {
        return Err(Error::domain(format!("({x}, {y}) is not in the polygon")));
    }
    Ok(exit_scale(p, x, y, 1, diameter + 2))
}

fn to_i64(v: &BigInt) -> i64 {
    v.to_i64().expect("lattice coordinate fits i64 below the diameter limit")
}

/// Enumerates the primitive points of `P_{/τ}` and sorts their exit scales.
pub fn precompute_tail(p: &Polygon, tau: u64) -> Result<ImplicitTail> {
    let diameter = diameter_u64(p)?;
    if tau < 1 {
        return Err(Error::domain("tau must be at least 1"));
    }
    let (x0, x1, y0, y1) = p.lattice_bbox_scaled(tau);
    let (x0, x1, y0, y1) = (to_i64(&x0), to_i64(&x1), to_i64(&y0), to_i64(&y1));
    // nothing but the origin survives past D + 1
    let hi = diameter + 1;
    let mut phis: Vec<u64> = (x0..=x1)
        .into_par_iter()
        .flat_map_iter(|x| {
            (y0..=y1).filter_map(move |y| {
                if x.unsigned_abs().gcd(&y.unsigned_abs()) != 1 || tau >= hi {
                    return None;
                }
                if !p.contains_lattice_scaled(x, y, tau) {
                    return None;
                }
                Some(exit_scale(p, x, y, tau, hi))
            })
        })
        .collect();
    phis.sort_unstable_by(|a, b| b.cmp(a));
    Ok(ImplicitTail { tau, phis })
}

/// `S(P_{/i})` from the already-known larger scales.
pub fn dp_term(i: u64, tail: &ImplicitTail, run: &PrimitiveRun, p: &Polygon) -> Result<u128> {
    dp_term_with(i, tail, run, p, true)
}

/// [`dp_term`], optionally summing the far terms one by one.
///
/// Terms `i·d < τ` come from `run`, terms `τ ≤ i·d < δ` are single tail
/// queries, and terms `i·d ≥ δ` are summed by runs: the tail value is
/// constant on stretches of `d`, and the end of each stretch is found by
/// binary search.
pub fn dp_term_with(
    i: u64,
    tail: &ImplicitTail,
    run: &PrimitiveRun,
    p: &Polygon,
    grouping: bool,
) -> Result<u128> {
    if i == 0 {
        return Err(Error::domain("scale must be at least 1"));
    }
    let diameter = run.diameter;
    let tau = tail.tau;
    let lattice = p
        .count_lattice_scaled(i)
        .to_u128()
        .ok_or_else(|| Error::internal("lattice count overflows u128"))?;
    let d_max = (diameter + 1) / i;

    let mut sum = 0u128;
    let mut d = 2u64;
    while d <= d_max && i * d < tau {
        sum += run.require(i * d)?;
        d += 1;
    }
    if grouping {
        let delta = split_point(diameter, i);
        while d <= d_max && i * d < delta {
            sum += tail.query(i * d)?;
            d += 1;
        }
        while d <= d_max {
            let value = tail.query(i * d)?;
            if value == 0 {
                break;
            }
            // first d' in (d, d_max + 1] whose value drops; S vanishes past D + 1
            let (mut lo, mut hi) = (d, d_max + 1);
            while hi - lo > 1 {
                let mid = lo + (hi - lo) / 2;
                if tail.query(i * mid)? < value {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            sum += value * u128::from(hi - d);
            d = hi;
        }
    } else {
        while d <= d_max {
            sum += tail.query(i * d)?;
            d += 1;
        }
    }

    lattice
        .checked_sub(1 + sum)
        .ok_or_else(|| Error::internal(format!("negative primitive count at scale {i}")))
}

/// `S(P)`: primitive lattice points of the closed polygon.
pub fn primitive_count(p: &Polygon) -> Result<u128> {
    primitive_count_with(p, Options::default())
}

pub fn primitive_count_with(p: &Polygon, opts: Options) -> Result<u128> {
    let diameter = diameter_u64(p)?;
    let tau = match opts.tau {
        Some(t) if (1..=diameter).contains(&t) => t,
        Some(t) => {
            return Err(Error::domain(format!("tau must lie in [1, {diameter}], got {t}")));
        }
        None => default_tau(diameter),
    };
    let tail = precompute_tail(p, tau)?;
    if tau == 1 {
        return tail.query(1);
    }
    let mut run = PrimitiveRun::new(diameter, tau);
    for i in (1..tau).rev() {
        let s = dp_term_with(i, &tail, &run, p, opts.grouping)?;
        run.set(i, s);
    }
    run.require(1)
}

/// Scans the bounding box and keeps the points with `gcd(|x|, |y|) = 1`.
pub fn primitive_brute(p: &Polygon) -> Result<u128> {
    let diameter = diameter_u64(p).ok().filter(|&d| d <= BRUTE_DIAMETER_LIMIT);
    if diameter.is_none() {
        return Err(Error::OracleScale {
            what: "diameter bound",
            value: p.diameter_bound().to_string(),
            limit: BRUTE_DIAMETER_LIMIT,
        });
    }
    let (x0, x1, y0, y1) = p.lattice_bbox_scaled(1);
    let (x0, x1, y0, y1) = (to_i64(&x0), to_i64(&x1), to_i64(&y0), to_i64(&y1));
    let count = (x0..=x1)
        .into_par_iter()
        .map(|x| {
            (y0..=y1)
                .filter(|&y| x.unsigned_abs().gcd(&y.unsigned_abs()) == 1)
                .filter(|&y| p.contains_lattice_scaled(x, y, 1))
                .count() as u128
        })
        .sum();
    Ok(count)
}
