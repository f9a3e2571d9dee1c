//! Rank and order-statistic queries on the Farey sequence `F_n`.
//!
//! `S_v(x)` counts the irreducible `a/b ≤ x` with `1 ≤ a ≤ b ≤ v`; the rank
//! of `x` in `F_n` is `S_n(x) + 1`, the extra one being `0/1`. Grouping the
//! lattice pairs under the line `a = b·x` by their gcd gives
//!
//! ```text
//! S_v(x) = A_v(x) − Σ_{d≥2} S_{⌊v/d⌋}(x),    A_v(x) = Σ_{b≤v} ⌊b·x⌋
//! ```
//!
//! and since `⌊⌊n/d₁⌋/d₂⌋ = ⌊n/(d₁d₂)⌋` only the values `S_{⌊n/d⌋}` are
//! ever needed. [`STable`] stores them: a dense prefix `S_0..S_cut` and a
//! tail indexed by `d` for every `⌊n/d⌋ > cut`.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::exactmath::{best_approximation_in, div_rem_u128, floor_sum_u128, isqrt, root_round, Rational};

/// Largest order accepted by [`rank_brute`].
pub const BRUTE_LIMIT: u64 = 10_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Algorithm {
    Brute,
    Pawlewicz,
    Improved,
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Algorithm::Brute => "brute",
            Algorithm::Pawlewicz => "pawlewicz",
            Algorithm::Improved => "improved",
        })
    }
}

/// The query value `x ∈ [0, 1]` in whichever integer width it fits.
#[derive(Clone, Debug)]
enum Slope {
    Small { p: u64, q: u64 },
    Big { p: BigUint, q: BigUint },
}

impl Slope {
    fn new(x: &Rational) -> Result<Self> {
        let p = x.numer().magnitude();
        let q = x.denom().magnitude();
        if x.is_negative() || p > q {
            return Err(Error::domain(format!("x must lie in [0, 1], got {x}")));
        }
        Ok(match (p.to_u64(), q.to_u64()) {
            (Some(p), Some(q)) => Slope::Small { p, q },
            _ => Slope::Big {
                p: p.clone(),
                q: q.clone(),
            },
        })
    }

    /// `⌊i·x⌋`
    fn floor_mul(&self, i: u64) -> u128 {
        match self {
            Slope::Small { p, q } => div_rem_u128(u128::from(i) * u128::from(*p), u128::from(*q)).0,
            Slope::Big { p, q } => (p * i / q).to_u128().expect("floor(i x) <= i"),
        }
    }

    /// `A_v(x) = Σ_{b=1}^{v} ⌊b·x⌋`
    fn floor_sum(&self, v: u64) -> u128 {
        match self {
            Slope::Small { p, q } if v < 1 << 62 => {
                floor_sum_u128(u128::from(v) + 1, u128::from(*q), u128::from(*p), 0)
            }
            _ => {
                let (p, q) = self.big_parts();
                let x = Rational::new(BigInt::from(p), BigInt::from(q)).unwrap();
                crate::exactmath::floor_sum(v, &x)
                    .unwrap()
                    .to_u128()
                    .expect("A_v(x) <= v(v+1)/2")
            }
        }
    }

    fn big_parts(&self) -> (BigUint, BigUint) {
        match self {
            Slope::Small { p, q } => (BigUint::from(*p), BigUint::from(*q)),
            Slope::Big { p, q } => (p.clone(), q.clone()),
        }
    }
}

fn check_order(n: u64) -> Result<()> {
    if n == 0 {
        return Err(Error::domain("Farey order n must be at least 1"));
    }
    Ok(())
}

/// Divisor lists for `1..=limit`, stored flat.
#[derive(Clone, Debug)]
pub struct DivisorTable {
    limit: usize,
    offsets: Vec<usize>,
    entries: Vec<u32>,
}

impl DivisorTable {
    pub fn limit(&self) -> usize {
        self.limit
    }

    /// Sorted divisors of `i`, for `1 ≤ i ≤ limit`.
    pub fn divisors(&self, i: usize) -> &[u32] {
        assert!((1..=self.limit).contains(&i), "index {i} outside 1..={}", self.limit);
        &self.entries[self.offsets[i]..self.offsets[i + 1]]
    }

    pub fn total_entries(&self) -> usize {
        self.entries.len()
    }
}

/// Builds the divisor lists by adding every `d` to each of its multiples.
pub fn divisor_table(k: usize) -> DivisorTable {
    assert!(k <= u32::MAX as usize, "divisor table limit too large");
    let mut counts = vec![0usize; k + 1];
    for d in 1..=k {
        for m in (d..=k).step_by(d) {
            counts[m] += 1;
        }
    }
    let mut offsets = vec![0usize; k + 2];
    for i in 1..=k {
        offsets[i + 1] = offsets[i] + counts[i];
    }
    let mut fill = offsets.clone();
    let mut entries = vec![0u32; offsets[k + 1]];
    for d in 1..=k {
        for m in (d..=k).step_by(d) {
            entries[fill[m]] = d as u32;
            fill[m] += 1;
        }
    }
    DivisorTable {
        limit: k,
        offsets,
        entries,
    }
}

/// Memo of `S_{⌊n/d⌋}(x)` for one query.
#[derive(Clone, Debug)]
pub struct STable {
    n: u64,
    x: Rational,
    cut: u64,
    /// `dense[v] = S_v(x)` for `0 ≤ v ≤ cut`
    dense: Vec<u128>,
    /// `tail[d] = S_{⌊n/d⌋}(x)` for `1 ≤ d ≤ n/(cut+1)`; index 0 unused
    tail: Vec<u128>,
}

impl STable {
    /// Fills every entry with the √-grouped recursion; `cut = ⌊√n⌋`.
    pub fn pawlewicz(x: &Rational, n: u64) -> Result<Self> {
        check_order(n)?;
        let slope = Slope::new(x)?;
        let cut = isqrt(n);
        let mut dense = vec![0u128; cut as usize + 1];
        let mut a = 0u128;
        for v in 1..=cut {
            a += slope.floor_mul(v);
            let below = grouped_dense_sum(v, &dense);
            dense[v as usize] = a - below;
        }
        Ok(Self::with_tail(x, n, cut, dense, &slope))
    }

    /// Fills the dense prefix with [`sieved_prefix`] up to the crossover, then
    /// the tail with the √-grouped recursion.
    pub fn improved(x: &Rational, n: u64) -> Result<Self> {
        check_order(n)?;
        let slope = Slope::new(x)?;
        let cut = crossover(n).max(isqrt(n));
        let dense = sieve(&slope, cut as usize);
        Ok(Self::with_tail(x, n, cut, dense, &slope))
    }

    fn with_tail(x: &Rational, n: u64, cut: u64, dense: Vec<u128>, slope: &Slope) -> Self {
        let top = n / (cut + 1);
        let mut table = STable {
            n,
            x: x.clone(),
            cut,
            dense,
            tail: vec![0u128; top as usize + 1],
        };
        // ascending ⌊n/d⌋, so every read below hits a finished entry
        for d0 in (1..=top).rev() {
            let v = n / d0;
            let below = table.grouped_tail_sum(d0, v);
            table.tail[d0 as usize] = slope.floor_sum(v) - below;
        }
        table
    }

    /// `Σ_{d≥2} S_{⌊v/d⌋}` for `v = ⌊n/d0⌋ > cut`.
    fn grouped_tail_sum(&self, d0: u64, v: u64) -> u128 {
        let mut sum = 0u128;
        let mut d = 2u64;
        while d <= v {
            let (q, hi) = block(v, d);
            let s = if q > self.cut {
                // ⌊v/d⌋ = ⌊n/(d0·d)⌋
                self.tail[(d0 * d) as usize]
            } else {
                self.dense[q as usize]
            };
            sum += u128::from(hi - d + 1) * s;
            d = hi + 1;
        }
        sum
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn x(&self) -> &Rational {
        &self.x
    }

    /// Size of the dense prefix.
    pub fn cut(&self) -> u64 {
        self.cut
    }

    /// `S_v(x)` for any `v` of the form `⌊n/d⌋` (every `v ≤ cut` qualifies).
    pub fn s(&self, v: u64) -> Option<u128> {
        if v <= self.cut {
            return Some(self.dense[v as usize]);
        }
        if v > self.n {
            return None;
        }
        let d = self.n / v;
        (self.n / d == v).then(|| self.tail[d as usize])
    }

    /// `S_n(x) + 1`
    pub fn rank(&self) -> u128 {
        self.s(self.n).expect("S_n is always stored") + 1
    }
}

fn grouped_dense_sum(v: u64, dense: &[u128]) -> u128 {
    let mut sum = 0u128;
    let mut d = 2u64;
    while d <= v {
        let (q, hi) = block(v, d);
        sum += u128::from(hi - d + 1) * dense[q as usize];
        d = hi + 1;
    }
    sum
}

/// Dense-prefix size `round((n / ⌈log₂ n⌉)^{2/3})`, clamped to `[1, n]`.
pub fn crossover(n: u64) -> u64 {
    let lg = u64::from(64 - (n.max(1) - 1).leading_zeros()).max(1);
    if n < 1 << 40 {
        // nearest k: (2k − 1)³·lg² ≤ 8n² < (2k + 1)³·lg²
        let (n2, lg2) = (u128::from(n) * u128::from(n) * 8, u128::from(lg * lg));
        let above = |k: u64| u128::from(2 * k + 1).pow(3) * lg2 <= n2;
        let mut k = ((n as f64) / lg as f64).powf(2.0 / 3.0).round() as u64;
        while k > 0 && !above(k - 1) {
            k -= 1;
        }
        while above(k) {
            k += 1;
        }
        return k.clamp(1, n.max(1));
    }
    crossover_big(n, lg)
}

fn crossover_big(n: u64, lg: u64) -> u64 {
    let num = BigUint::from(n).pow(2u32);
    let den = BigUint::from(lg).pow(2u32);
    let k = root_round(&num, &den, 3).to_u64().unwrap_or(u64::MAX);
    k.clamp(1, n.max(1))
}

/// `(⌊v/d⌋, last d' with the same quotient)`; 32-bit division is markedly
/// cheaper, and most blocks qualify.
#[inline]
fn block(v: u64, d: u64) -> (u64, u64) {
    match u32::try_from(v) {
        Ok(v32) => {
            let q = v32 / d as u32;
            (u64::from(q), u64::from(v32 / q))
        }
        Err(_) => {
            let q = v / d;
            (q, v / q)
        }
    }
}

/// `S_0..=S_k` by the divisor-sieve recurrence.
fn sieve(slope: &Slope, k: usize) -> Vec<u128> {
    let table = divisor_table(k);
    let mut s = vec![0u128; k + 1];
    let mut a = 0u128;
    // running Σ_{d≥2} S_{⌊i/d⌋}
    let mut running = 0u128;
    for i in 1..=k {
        a += slope.floor_mul(i as u64);
        for &d in &table.divisors(i)[1..] {
            // ⌊i/d⌋ moved from i/d − 1 to i/d
            let j = i / d as usize;
            running += s[j] - s[j - 1];
        }
        s[i] = a - running;
    }
    s
}

/// `S_1(x), …, S_k(x)` in O(k lg k).
pub fn sieved_prefix(x: &Rational, k: usize) -> Result<Vec<u128>> {
    let slope = Slope::new(x)?;
    let mut s = sieve(&slope, k);
    s.remove(0);
    Ok(s)
}

/// Rank by direct enumeration of every `a/b` with `b ≤ n`.
pub fn rank_brute(x: &Rational, n: u64) -> Result<u128> {
    check_order(n)?;
    if n > BRUTE_LIMIT {
        return Err(Error::OracleScale {
            what: "n",
            value: n.to_string(),
            limit: BRUTE_LIMIT,
        });
    }
    let slope = Slope::new(x)?;
    let (p, q) = slope.big_parts();
    // a/b ≤ p/q
    let at_most = |a: u64, b: u64| match &slope {
        Slope::Small { p: ps, q: qs } => u128::from(a) * u128::from(*qs) <= u128::from(b) * u128::from(*ps),
        Slope::Big { .. } => BigUint::from(a) * &q <= BigUint::from(b) * &p,
    };
    let mut count = 0u128;
    for b in 1..=n {
        for a in 0..=b {
            if a.gcd(&b) == 1 && at_most(a, b) {
                count += 1;
            }
        }
    }
    Ok(count)
}

pub fn rank_pawlewicz(x: &Rational, n: u64) -> Result<u128> {
    Ok(STable::pawlewicz(x, n)?.rank())
}

pub fn rank_improved(x: &Rational, n: u64) -> Result<u128> {
    Ok(STable::improved(x, n)?.rank())
}

pub fn rank(x: &Rational, n: u64, algo: Algorithm) -> Result<u128> {
    match algo {
        Algorithm::Brute => rank_brute(x, n),
        Algorithm::Pawlewicz => rank_pawlewicz(x, n),
        Algorithm::Improved => rank_improved(x, n),
    }
}

/// `Φ(n) = Σ_{b≤n} φ(b) = |F_n| − 1`.
pub fn totient_sum(n: u64) -> Result<u128> {
    Ok(rank_improved(&Rational::one(), n)? - 1)
}

/// The `k`-th smallest member of `F_n` (1-based).
pub fn statistic(k: u128, n: u64) -> Result<Rational> {
    statistic_with(k, n, Algorithm::Improved)
}

/// [`statistic`] with an explicit rank comparator.
pub fn statistic_with(k: u128, n: u64, algo: Algorithm) -> Result<Rational> {
    check_order(n)?;
    let size = rank(&Rational::one(), n, algo)?;
    if k < 1 || k > size {
        return Err(Error::domain(format!("k must lie in [1, {size}], got {k}")));
    }
    if k == 1 {
        return Ok(Rational::zero());
    }
    // rank(lo) < k ≤ rank(hi); bisect on dyadics until hi − lo < 1/n²
    let mut lo = Rational::zero();
    let mut hi = Rational::one();
    let n_sq = Rational::from_integer(BigInt::from(n) * BigInt::from(n));
    let half = Rational::new(1, 2)?;
    while (&(&hi - &lo) * &n_sq) >= Rational::one() {
        let mid = &(&lo + &hi) * &half;
        if rank(&mid, n, algo)? >= k {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    best_approximation_in(&lo, &hi, n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn r(p: i64, q: i64) -> Rational {
        Rational::new(p, q).unwrap()
    }

    /// φ(1..=n) by the classic multiplicative sieve.
    fn phi_sieve(n: usize) -> Vec<u64> {
        let mut phi: Vec<u64> = (0..=n as u64).collect();
        for p in 2..=n {
            if phi[p] == p as u64 {
                for m in (p..=n).step_by(p) {
                    phi[m] -= phi[m] / p as u64;
                }
            }
        }
        phi
    }

    /// Sorted members of F_n.
    fn farey(n: i64) -> Vec<Rational> {
        let mut v: Vec<Rational> = (1..=n)
            .flat_map(|b| (0..=b).filter(move |a| a.gcd(&b) == 1).map(move |a| r(a, b)))
            .collect();
        v.sort();
        v
    }

    #[test]
    fn divisor_table_examples() {
        assert_eq!(divisor_table(1).divisors(1), &[1]);
        assert_eq!(divisor_table(12).divisors(12), &[1, 2, 3, 4, 6, 12]);
        let t = divisor_table(100);
        assert_eq!(t.total_entries(), 482);
        assert_eq!(t.total_entries(), (1..=100).map(|d| 100 / d).sum::<usize>());
        for i in 1..=100usize {
            let expect: Vec<u32> = (1..=i as u32).filter(|d| (i as u32).is_multiple_of(*d)).collect();
            assert_eq!(t.divisors(i), &expect[..]);
        }
    }

    #[test]
    fn rank_brute_examples() {
        assert_eq!(rank_brute(&r(0, 1), 7).unwrap(), 1);
        assert_eq!(rank_brute(&r(1, 2), 4).unwrap(), 4);
        assert_eq!(rank_brute(&r(1, 1), 5).unwrap(), 11);
        assert!(matches!(rank_brute(&r(1, 2), BRUTE_LIMIT + 1), Err(Error::OracleScale { .. })));
    }

    #[test]
    fn rank_pawlewicz_examples() {
        assert_eq!(rank_pawlewicz(&r(1, 2), 4).unwrap(), 4);
        assert_eq!(rank_pawlewicz(&r(1, 1), 10).unwrap(), 33);
        assert_eq!(rank_pawlewicz(&r(0, 1), 1_000_000).unwrap(), 1);
    }

    #[test]
    fn rank_improved_examples() {
        assert_eq!(rank_improved(&r(1, 2), 4).unwrap(), 4);
        let phi = phi_sieve(100);
        let expect = 1 + phi[1..].iter().sum::<u64>() as u128;
        assert_eq!(expect, 3045);
        assert_eq!(rank_improved(&r(1, 1), 100).unwrap(), expect);
        assert_eq!(rank_improved(&r(1, 1), 1).unwrap(), 2);
    }

    #[test]
    fn domain_errors() {
        for f in [rank_brute, rank_pawlewicz, rank_improved] {
            assert!(matches!(f(&r(3, 2), 5), Err(Error::Domain(_))));
            assert!(matches!(f(&r(-1, 2), 5), Err(Error::Domain(_))));
            assert!(matches!(f(&r(1, 2), 0), Err(Error::Domain(_))));
        }
        assert!(matches!(statistic(0, 5), Err(Error::Domain(_))));
        assert!(matches!(statistic(12, 5), Err(Error::Domain(_))));
    }

    #[test]
    fn sieved_prefix_examples() {
        assert_eq!(sieved_prefix(&r(1, 1), 5).unwrap(), vec![1, 2, 4, 6, 10]);
        assert_eq!(sieved_prefix(&r(0, 1), 9).unwrap(), vec![0; 9]);
        let s = sieved_prefix(&r(1, 2), 4).unwrap();
        assert_eq!(s[3], 3);
    }

    #[test]
    fn sieved_prefix_matches_brute() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let mut xs = vec![r(0, 1), r(1, 1), r(1, 2), r(2, 3), r(13, 21)];
        for _ in 0..10 {
            let q = rng.gen_range(1..500i64);
            xs.push(r(rng.gen_range(0..=q), q));
        }
        for x in &xs {
            let s = sieved_prefix(x, 200).unwrap();
            for i in 1..=200u64 {
                assert_eq!(s[i as usize - 1], rank_brute(x, i).unwrap() - 1, "x={x} i={i}");
            }
        }
    }

    #[test]
    fn stable_entries_match_brute() {
        for n in [1u64, 2, 17, 64, 99, 150] {
            for x in [r(0, 1), r(1, 3), r(5, 8), r(1, 1)] {
                for table in [STable::pawlewicz(&x, n).unwrap(), STable::improved(&x, n).unwrap()] {
                    for d in 1..=n {
                        let v = n / d;
                        assert_eq!(
                            table.s(v).unwrap(),
                            rank_brute(&x, v).unwrap() - 1,
                            "n={n} v={v} x={x}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn totient_sum_matches_phi_sieve() {
        let phi = phi_sieve(2000);
        let mut acc = 0u128;
        for n in 1..=2000u64 {
            acc += u128::from(phi[n as usize]);
            if n <= 200 || n % 37 == 0 {
                assert_eq!(totient_sum(n).unwrap(), acc, "n={n}");
            }
        }
        assert_eq!(totient_sum(1).unwrap(), 1);
        assert_eq!(totient_sum(10).unwrap(), 32);
        assert_eq!(totient_sum(100).unwrap(), 3044);
    }

    #[test]
    fn tiers_agree_on_farey_points() {
        for n in 1..=60u64 {
            for x in farey(60) {
                let b = rank_brute(&x, n).unwrap();
                assert_eq!(rank_pawlewicz(&x, n).unwrap(), b, "n={n} x={x}");
                assert_eq!(rank_improved(&x, n).unwrap(), b, "n={n} x={x}");
            }
        }
    }

    #[test]
    fn fast_tiers_agree_at_scale() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..8 {
            let n = rng.gen_range(1..3_000_000u64);
            let q = rng.gen_range(1..1_000_000_000i64);
            let x = r(rng.gen_range(0..=q), q);
            assert_eq!(rank_pawlewicz(&x, n).unwrap(), rank_improved(&x, n).unwrap(), "n={n} x={x}");
        }
    }

    #[test]
    fn huge_denominator_query() {
        // 2^70 denominator forces the arbitrary-precision slope
        let q = BigInt::from(1u8) << 70;
        let p = (&q * 3) / 7;
        let x = Rational::new(p, q).unwrap();
        for n in [1u64, 9, 250] {
            let b = rank_brute(&x, n).unwrap();
            assert_eq!(rank_pawlewicz(&x, n).unwrap(), b);
            assert_eq!(rank_improved(&x, n).unwrap(), b);
        }
    }

    #[test]
    fn statistic_examples() {
        for n in 1..=12 {
            assert_eq!(statistic(1, n).unwrap(), r(0, 1));
        }
        assert_eq!(statistic(4, 4).unwrap(), r(1, 2));
        assert_eq!(statistic(11, 5).unwrap(), r(1, 1));
    }

    #[test]
    fn statistic_round_trip_small() {
        for n in 1..=30 {
            let members = farey(n as i64);
            for (idx, f) in members.iter().enumerate() {
                let k = idx as u128 + 1;
                assert_eq!(&statistic(k, n).unwrap(), f, "n={n} k={k}");
                assert_eq!(rank_improved(f, n).unwrap(), k);
            }
        }
    }

    #[test]
    fn monotone_in_x_and_n() {
        let xs = farey(25);
        for n in [1u64, 5, 24, 80] {
            let ranks: Vec<u128> = xs.iter().map(|x| rank_improved(x, n).unwrap()).collect();
            assert!(ranks.windows(2).all(|w| w[0] <= w[1]));
        }
        for x in [r(2, 7), r(1, 1)] {
            let ranks: Vec<u128> = (1..200).map(|n| rank_improved(&x, n).unwrap()).collect();
            assert!(ranks.windows(2).all(|w| w[0] <= w[1]));
        }
    }

    #[test]
    fn crossover_fast_path_matches_big() {
        let mut n = 1u64;
        while n < 1 << 40 {
            for m in [n, n + 1, n * 3 / 2] {
                let lg = u64::from(64 - (m.max(1) - 1).leading_zeros()).max(1);
                assert_eq!(crossover(m), crossover_big(m, lg), "n = {m}");
            }
            n = n * 5 / 4 + 1;
        }
    }

    #[test]
    fn crossover_is_clamped() {
        assert_eq!(crossover(1), 1);
        assert_eq!(crossover(2), 2);
        for n in 1..500 {
            assert!((1..=n).contains(&crossover(n)));
        }
        // (10^6 / 20)^{2/3} = 1357.2
        assert_eq!(crossover(1_000_000), 1357);
    }
}
