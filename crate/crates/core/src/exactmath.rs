//! Exact integer and rational arithmetic.
//!
//! Everything here is arbitrary precision. The floor sums have a `u128`
//! fast path that is only taken when the operand bit lengths rule out
//! overflow, so results never depend on which path ran.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// A normalized arbitrary-precision fraction.
///
/// The denominator is always positive and coprime to the numerator, so
/// structural equality coincides with numeric equality.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Rational(BigRational);

impl Rational {
    pub fn new(num: impl Into<BigInt>, den: impl Into<BigInt>) -> Result<Self> {
        let den = den.into();
        if den.is_zero() {
            return Err(Error::domain("zero denominator"));
        }
        Ok(Rational(BigRational::new(num.into(), den)))
    }

    pub fn from_integer(n: impl Into<BigInt>) -> Self {
        Rational(BigRational::from_integer(n.into()))
    }

    pub fn zero() -> Self {
        Rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Rational(BigRational::one())
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn floor(&self) -> BigInt {
        self.numer().div_floor(self.denom())
    }

    pub fn ceil(&self) -> BigInt {
        -((-self.numer()).div_floor(self.denom()))
    }

    /// Divides by a positive integer.
    pub fn div_int(&self, d: u64) -> Self {
        assert!(d > 0, "division by zero");
        Rational(&self.0 / BigRational::from_integer(BigInt::from(d)))
    }

    /// Largest bit length of numerator or denominator.
    pub fn bits(&self) -> u64 {
        self.numer().bits().max(self.denom().bits())
    }

    pub fn as_big_rational(&self) -> &BigRational {
        &self.0
    }
}

impl From<BigRational> for Rational {
    fn from(r: BigRational) -> Self {
        Rational(r)
    }
}

impl From<i64> for Rational {
    fn from(n: i64) -> Self {
        Rational::from_integer(n)
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.numer(), self.denom())
    }
}

fn is_ascii_digits(s: &str) -> bool {
    !s.is_empty() && s.bytes().all(|b| b.is_ascii_digit())
}

/// Parses `P/Q` or `P`, with an optional sign on `P` only.
impl FromStr for Rational {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("invalid fraction {s:?}"));
        let (num, den) = match s.split_once('/') {
            Some((p, q)) => (p, Some(q)),
            None => (s, None),
        };
        let digits = num.strip_prefix(['-', '+']).unwrap_or(num);
        if !is_ascii_digits(digits) {
            return Err(bad());
        }
        let mut p: BigInt = digits.parse().map_err(|_| bad())?;
        if num.starts_with('-') {
            p = -p;
        }
        let q: BigInt = match den {
            Some(q) if is_ascii_digits(q) => q.parse().map_err(|_| bad())?,
            Some(_) => return Err(bad()),
            None => BigInt::one(),
        };
        if q.is_zero() {
            return Err(Error::Parse(format!("zero denominator in {s:?}")));
        }
        Rational::new(p, q)
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident) => {
        impl $tr<&Rational> for &Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                Rational((&self.0).$method(&rhs.0))
            }
        }

        impl $tr for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational(self.0.$method(rhs.0))
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);
forward_binop!(Div, div);

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0)
    }
}

impl Neg for &Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-&self.0)
    }
}

/// Greatest common divisor; `gcd(0, 0) = 0`.
pub fn gcd<T: Integer>(a: T, b: T) -> T {
    a.gcd(&b)
}

/// `Σ_{b=1}^{n} ⌊b·x⌋` for `x ≥ 0`.
pub fn floor_sum(n: u64, x: &Rational) -> Result<BigUint> {
    if x.is_negative() {
        return Err(Error::domain(format!("floor_sum needs x >= 0, got {x}")));
    }
    let p = x.numer().magnitude();
    let q = x.denom().magnitude();
    // Σ_{b=1}^{n} ⌊b p / q⌋ = Σ_{i=0}^{n} ⌊p i / q⌋
    let count = u128::from(n) + 1;
    let count_bits = u64::from(128 - count.leading_zeros());
    if p.bits() + 2 * count_bits <= 126 && q.bits() + count_bits <= 126 {
        let p = p.to_u128().unwrap();
        let q = q.to_u128().unwrap();
        return Ok(BigUint::from(floor_sum_u128(count, q, p, 0)));
    }
    Ok(floor_sum_biguint(BigUint::from(count), q.clone(), p.clone(), BigUint::zero()))
}

/// `Σ_{i=0}^{n-1} ⌊(a·i + b)/m⌋` for nonnegative operands and `m > 0`.
///
/// Caller guarantees the result and `a·n + b` fit in a `u128`.
/// `(x / y, x % y)`, in 64-bit registers when both operands fit.
#[inline]
pub(crate) fn div_rem_u128(x: u128, y: u128) -> (u128, u128) {
    match (u64::try_from(x), u64::try_from(y)) {
        (Ok(x), Ok(y)) => (u128::from(x / y), u128::from(x % y)),
        _ => (x / y, x % y),
    }
}

pub(crate) fn floor_sum_u128(mut n: u128, mut m: u128, mut a: u128, mut b: u128) -> u128 {
    debug_assert!(m > 0);
    let mut acc = 0u128;
    if n == 0 {
        return 0;
    }
    loop {
        if a >= m {
            let (q, r) = div_rem_u128(a, m);
            acc += n * (n - 1) / 2 * q;
            a = r;
        }
        if b >= m {
            let (q, r) = div_rem_u128(b, m);
            acc += n * q;
            b = r;
        }
        let y_max = a * n + b;
        if y_max < m {
            break;
        }
        (n, b) = div_rem_u128(y_max, m);
        std::mem::swap(&mut m, &mut a);
    }
    acc
}

fn floor_sum_biguint(mut n: BigUint, mut m: BigUint, mut a: BigUint, mut b: BigUint) -> BigUint {
    let mut acc = BigUint::zero();
    if n.is_zero() {
        return acc;
    }
    loop {
        if a >= m {
            let (q, r) = a.div_rem(&m);
            acc += (&n * (&n - 1u32)) / 2u32 * q;
            a = r;
        }
        if b >= m {
            let (q, r) = b.div_rem(&m);
            acc += &n * q;
            b = r;
        }
        let y_max = &a * &n + &b;
        if y_max < m {
            break;
        }
        let (q, r) = y_max.div_rem(&m);
        n = q;
        b = r;
        std::mem::swap(&mut m, &mut a);
    }
    acc
}

/// `Σ_{i=0}^{n-1} ⌊(a·i + b)/m⌋` for any signs of `a` and `b`, `m > 0`, `n ≥ 0`.
pub fn floor_sum_linear(n: &BigInt, m: &BigInt, a: &BigInt, b: &BigInt) -> BigInt {
    assert!(m.is_positive(), "floor_sum_linear needs m > 0");
    assert!(!n.is_negative(), "floor_sum_linear needs n >= 0");
    if n.is_zero() {
        return BigInt::zero();
    }
    let (qa, ra) = a.div_mod_floor(m);
    let (qb, rb) = b.div_mod_floor(m);
    let pairs = n * (n - 1) / 2;
    let shift = qa * pairs + qb * n;
    let rest = floor_sum_biguint(
        n.magnitude().clone(),
        m.magnitude().clone(),
        ra.magnitude().clone(),
        rb.magnitude().clone(),
    );
    shift + BigInt::from_biguint(Sign::Plus, rest)
}

/// Finds the fraction of smallest denominator in the half-open interval
/// `(lo, hi]` by Stern-Brocot descent with continued-fraction jumps, and
/// returns it if its denominator is at most `qmax`.
///
/// When the interval is narrower than `1/qmax²` at most one fraction with
/// denominator `≤ qmax` lies inside, so the result is that fraction.
pub fn best_approximation_in(lo: &Rational, hi: &Rational, qmax: u64) -> Result<Rational> {
    if lo.is_negative() || hi > &Rational::one() || lo > hi {
        return Err(Error::domain(format!(
            "best_approximation_in needs 0 <= lo <= hi <= 1, got ({lo}, {hi}]"
        )));
    }
    let not_found = || Error::NotFound {
        lo: lo.to_string(),
        hi: hi.to_string(),
        qmax,
    };
    if lo == hi {
        return Err(not_found());
    }
    let (u, v) = (lo.numer(), lo.denom());
    let (w, z) = (hi.numer(), hi.denom());
    // left bound L = lp/lq <= lo, right bound R = rp/rq > hi (1/0 initially)
    let (mut lp, mut lq) = (BigInt::zero(), BigInt::one());
    let (mut rp, mut rq) = (BigInt::one(), BigInt::zero());
    loop {
        // Move right while the mediant stays <= lo.
        let num = u * &lq - v * &lp;
        let den = v * &rp - u * &rq;
        let t = num.div_floor(&den);
        lp += &t * &rp;
        lq += &t * &rq;

        let (mp, mq) = (&lp + &rp, &lq + &rq);
        if z * &mp <= w * &mq {
            return finish(mp, mq, qmax).ok_or_else(not_found);
        }

        // Move left while the mediant stays > hi.
        let num = z * &rp - w * &rq;
        let den = w * &lq - z * &lp;
        let s = (num - 1u32).div_floor(&den);
        rp += &s * &lp;
        rq += &s * &lq;

        let (mp, mq) = (&lp + &rp, &lq + &rq);
        if v * &mp > u * &mq {
            return finish(mp, mq, qmax).ok_or_else(not_found);
        }
    }
}

fn finish(p: BigInt, q: BigInt, qmax: u64) -> Option<Rational> {
    if q > BigInt::from(qmax) {
        return None;
    }
    Rational::new(p, q).ok()
}

/// `⌊√n⌋` for machine integers.
pub fn isqrt(n: u64) -> u64 {
    let mut r = (n as f64).sqrt() as u64;
    while r.checked_mul(r).is_none_or(|sq| sq > n) {
        r -= 1;
    }
    while (r + 1).checked_mul(r + 1).is_some_and(|sq| sq <= n) {
        r += 1;
    }
    r
}

/// `⌈√n⌉` for arbitrary-precision integers.
pub fn ceil_sqrt(n: &BigUint) -> BigUint {
    let r = n.sqrt();
    if &(&r * &r) == n {
        r
    } else {
        r + 1u32
    }
}

/// The integer nearest to `(num/den)^(1/k)`, ties rounded up.
pub fn root_round(num: &BigUint, den: &BigUint, k: u32) -> BigUint {
    assert!(!den.is_zero() && k > 0);
    let r = (num / den).nth_root(k);
    // round up iff num/den >= (r + 1/2)^k, i.e. 2^k num >= (2r+1)^k den
    let lhs = num << k as usize;
    let rhs = (&r * 2u32 + 1u32).pow(k) * den;
    match lhs.cmp(&rhs) {
        Ordering::Less => r,
        _ => r + 1u32,
    }
}
