//! Exact rational polygons that are star-shaped about the origin.
//!
//! Vertices are kept both as [`Rational`] points and as integers over a
//! common denominator, so every predicate reduces to integer sign tests.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Mul, Sub};

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::error::{Error, Result};
use crate::exactmath::{ceil_sqrt, floor_sum_linear, Rational};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Point {
    pub x: Rational,
    pub y: Rational,
}

impl Point {
    pub fn new(x: Rational, y: Rational) -> Self {
        Point { x, y }
    }

    pub fn from_ints(x: i64, y: i64) -> Self {
        Point::new(Rational::from_integer(x), Rational::from_integer(y))
    }

    pub fn origin() -> Self {
        Point::from_ints(0, 0)
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.x, self.y)
    }
}

/// First invariant a vertex list breaks. Edge `i` runs from vertex `i` to
/// vertex `i + 1 (mod k)`.
#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum Violation {
    #[error("a polygon needs at least 3 vertices, got {0}")]
    TooFewVertices(usize),
    #[error("edge {0} has zero length")]
    RepeatedVertex(usize),
    #[error("polygon has zero area")]
    ZeroArea,
    #[error("polygon is not simple: edges {0} and {1} intersect")]
    SelfIntersecting(usize, usize),
    #[error("origin lies outside the polygon")]
    OriginOutside,
    #[error("polygon is not star-shaped about the origin: origin is strictly right of edge {0}")]
    NotStarShaped(usize),
}

/// Integer form: vertex `j` is `(xs[j], ys[j]) / den`.
#[derive(Clone, Debug)]
struct IntForm {
    xs: Vec<BigInt>,
    ys: Vec<BigInt>,
    den: BigInt,
    /// Copy of `xs`/`ys` when every coordinate is below `SMALL_BOUND`.
    small: Option<Vec<(i128, i128)>>,
}

const SMALL_BOUND: i128 = 1 << 62;

impl IntForm {
    fn new(vertices: &[Point]) -> Self {
        let den = vertices.iter().fold(BigInt::one(), |acc, p| {
            acc.lcm(p.x.denom()).lcm(p.y.denom())
        });
        let scale = |r: &Rational| r.numer() * (&den / r.denom());
        let xs: Vec<BigInt> = vertices.iter().map(|p| scale(&p.x)).collect();
        let ys: Vec<BigInt> = vertices.iter().map(|p| scale(&p.y)).collect();
        let small = xs
            .iter()
            .zip(&ys)
            .map(|(x, y)| Some((fits_small(x)?, fits_small(y)?)))
            .collect();
        IntForm { xs, ys, den, small }
    }

    fn len(&self) -> usize {
        self.xs.len()
    }

    fn scaled(&self, d: u64) -> IntForm {
        IntForm {
            den: &self.den * d,
            ..self.clone()
        }
    }

    fn reverse(&mut self) {
        self.xs.reverse();
        self.ys.reverse();
        if let Some(s) = self.small.as_mut() {
            s.reverse();
        }
    }

    /// Closed membership of the lattice point `(c, m)` in this polygon
    /// shrunk by a further factor `d`.
    fn contains_lattice(&self, c: i64, m: i64, d: u64) -> bool {
        if let (Some(small), Some(s)) = (&self.small, self.den.to_i128()) {
            let s = s.checked_mul(i128::from(d));
            let px = s.and_then(|s| s.checked_mul(i128::from(c)));
            let py = s.and_then(|s| s.checked_mul(i128::from(m)));
            if let (Some(px), Some(py)) = (px, py) {
                if px.abs() < SMALL_BOUND && py.abs() < SMALL_BOUND {
                    return closed_contains(small.iter().map(|(x, y)| (x, y)), &px, &py);
                }
            }
        }
        let s = &self.den * d;
        let px = &s * c;
        let py = &s * m;
        closed_contains(self.xs.iter().zip(&self.ys), &px, &py)
    }

    fn rational_vertices(&self) -> (Vec<BigRational>, Vec<BigRational>) {
        let to = |v: &BigInt| BigRational::new(v.clone(), self.den.clone());
        (self.xs.iter().map(to).collect(), self.ys.iter().map(to).collect())
    }

    /// Integer bounding box `(xmin, xmax, ymin, ymax)` of the lattice points.
    fn lattice_bbox(&self) -> (BigInt, BigInt, BigInt, BigInt) {
        let lo = |v: &[BigInt]| v.iter().min().unwrap().div_ceil(&self.den);
        let hi = |v: &[BigInt]| v.iter().max().unwrap().div_floor(&self.den);
        (lo(&self.xs), hi(&self.xs), lo(&self.ys), hi(&self.ys))
    }

    fn diameter_bound(&self) -> BigUint {
        let k = self.len();
        let mut best = BigInt::zero();
        for i in 0..k {
            for j in i + 1..k {
                let dx = &self.xs[i] - &self.xs[j];
                let dy = &self.ys[i] - &self.ys[j];
                best = best.max(&dx * &dx + &dy * &dy);
            }
        }
        // smallest D with D² ≥ best / den²
        let den_sq = &self.den * &self.den;
        let ceil_ratio = (-((-best).div_floor(&den_sq))).to_biguint().unwrap();
        ceil_sqrt(&ceil_ratio).max(BigUint::one())
    }

    /// Lattice points in the closed region.
    ///
    /// Every integer column `c` contributes `Σ_top ⌊y⌋ − Σ_bottom (⌈y⌉ − 1)`
    /// over the edges crossing it, edges going left being the tops of the
    /// cross-section intervals for a counter-clockwise boundary. Each edge
    /// covers the half-open column range `[xmin, xmax)`, which is exact for
    /// every column that passes through no vertex; the few columns that do
    /// are recounted directly.
    fn count_lattice(&self) -> BigInt {
        let k = self.len();
        let den = &self.den;
        let mut total = BigInt::zero();
        for j in 0..k {
            let (x1, y1) = (&self.xs[j], &self.ys[j]);
            let (x2, y2) = (&self.xs[(j + 1) % k], &self.ys[(j + 1) % k]);
            if x1 == x2 {
                continue;
            }
            let c0 = x1.min(x2).div_ceil(den);
            let c_end = x1.max(x2).div_ceil(den);
            let cnt = &c_end - &c0;
            if !cnt.is_positive() {
                continue;
            }
            let dx = x2 - x1;
            let dy = y2 - y1;
            // y(c0 + t) = (den·dy·t + y1·dx + (c0·den − x1)·dy) / (den·dx)
            let mut a = den * &dy;
            let mut b = y1 * &dx + (&c0 * den - x1) * &dy;
            let mut m = den * &dx;
            let top = dx.is_negative();
            if top {
                a = -a;
                b = -b;
                m = -m;
                total += floor_sum_linear(&cnt, &m, &a, &b);
            } else {
                // ⌈y⌉ − 1 = −⌊−y⌋ − 1
                total += floor_sum_linear(&cnt, &m, &-a, &-b) + &cnt;
            }
        }

        let mut columns: Vec<BigInt> = self
            .xs
            .iter()
            .filter(|x| x.is_multiple_of(den))
            .map(|x| x / den)
            .collect();
        columns.sort();
        columns.dedup();
        if !columns.is_empty() {
            let verts = self.rational_vertices();
            for c in &columns {
                total += self.column_count(c, &verts) - self.column_formula(c);
            }
        }
        total
    }

    /// What the edge sum in [`count_lattice`] assigns to column `c`.
    fn column_formula(&self, c: &BigInt) -> BigInt {
        let k = self.len();
        let cx = c * &self.den;
        let mut sum = BigInt::zero();
        for j in 0..k {
            let (x1, y1) = (&self.xs[j], &self.ys[j]);
            let (x2, y2) = (&self.xs[(j + 1) % k], &self.ys[(j + 1) % k]);
            if x1 == x2 || cx < *x1.min(x2) || cx >= *x1.max(x2) {
                continue;
            }
            let y = edge_y_at(x1, y1, x2, y2, &cx) / BigRational::from_integer(self.den.clone());
            if x2 < x1 {
                sum += y.floor().to_integer();
            } else {
                sum += (-y).floor().to_integer() + 1;
            }
        }
        sum
    }

    /// Lattice points of the closed region on the vertical line `x = c`.
    fn column_count(&self, c: &BigInt, verts: &(Vec<BigRational>, Vec<BigRational>)) -> BigInt {
        let k = self.len();
        let cx = c * &self.den;
        let den = BigRational::from_integer(self.den.clone());
        let mut hits: Vec<BigRational> = Vec::new();
        for j in 0..k {
            let (x1, y1) = (&self.xs[j], &self.ys[j]);
            let (x2, y2) = (&self.xs[(j + 1) % k], &self.ys[(j + 1) % k]);
            if x1 == x2 {
                if *x1 == cx {
                    hits.push(BigRational::from_integer(y1.clone()) / &den);
                    hits.push(BigRational::from_integer(y2.clone()) / &den);
                }
            } else if cx >= *x1.min(x2) && cx <= *x1.max(x2) {
                hits.push(edge_y_at(x1, y1, x2, y2, &cx) / &den);
            }
        }
        hits.sort();
        hits.dedup();
        let px = BigRational::from_integer(c.clone());
        let mut count = BigInt::from(hits.iter().filter(|y| y.is_integer()).count());
        for w in hits.windows(2) {
            let mid = (&w[0] + &w[1]) / BigRational::from_integer(BigInt::from(2));
            // the open gap is uniformly inside or outside
            if closed_contains(verts.0.iter().zip(&verts.1), &px, &mid) {
                count += w[1].ceil().to_integer() - w[0].floor().to_integer() - 1;
            }
        }
        count
    }
}

fn fits_small(v: &BigInt) -> Option<i128> {
    v.to_i128().filter(|v| v.abs() < SMALL_BOUND)
}

/// `y` on the line through `(x1, y1)`, `(x2, y2)` at `x = cx`; `x1 ≠ x2`.
fn edge_y_at(x1: &BigInt, y1: &BigInt, x2: &BigInt, y2: &BigInt, cx: &BigInt) -> BigRational {
    let dx = x2 - x1;
    let num = y1 * &dx + (cx - x1) * (y2 - y1);
    BigRational::new(num, dx)
}

/// Sign of `(b − a) × (p − a)`.
fn orient<T>(ax: &T, ay: &T, bx: &T, by: &T, px: &T, py: &T) -> Ordering
where
    T: Ord + Zero,
    for<'a> &'a T: Sub<&'a T, Output = T>,
    T: Mul<T, Output = T>,
{
    let lhs = (bx - ax) * (py - ay);
    let rhs = (by - ay) * (px - ax);
    lhs.cmp(&rhs)
}

fn within<T: Ord>(a: &T, b: &T, v: &T) -> bool {
    let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
    lo <= v && v <= hi
}

/// Closed point-in-polygon: boundary check, then winding number.
fn closed_contains<'v, T, I>(vertices: I, px: &T, py: &T) -> bool
where
    T: Ord + Zero + 'v,
    for<'a> &'a T: Sub<&'a T, Output = T>,
    T: Mul<T, Output = T>,
    I: Iterator<Item = (&'v T, &'v T)> + Clone,
{
    let first = vertices.clone().next();
    let next = vertices.clone().skip(1).chain(first);
    let mut winding = 0i64;
    for ((ax, ay), (bx, by)) in vertices.zip(next) {
        let o = orient(ax, ay, bx, by, px, py);
        if o == Ordering::Equal && within(ax, bx, px) && within(ay, by, py) {
            return true;
        }
        if ay <= py {
            if by > py && o == Ordering::Greater {
                winding += 1;
            }
        } else if by <= py && o == Ordering::Less {
            winding -= 1;
        }
    }
    winding != 0
}

/// Closed segments `[a, b]` and `[c, d]` share a point.
fn segments_touch(
    (ax, ay): (&BigInt, &BigInt),
    (bx, by): (&BigInt, &BigInt),
    (cx, cy): (&BigInt, &BigInt),
    (dx, dy): (&BigInt, &BigInt),
) -> bool {
    let o1 = orient(ax, ay, bx, by, cx, cy);
    let o2 = orient(ax, ay, bx, by, dx, dy);
    let o3 = orient(cx, cy, dx, dy, ax, ay);
    let o4 = orient(cx, cy, dx, dy, bx, by);
    if o1 != o2 && o3 != o4 && o1 != Ordering::Equal && o2 != Ordering::Equal
        && o3 != Ordering::Equal && o4 != Ordering::Equal
    {
        return true;
    }
    let on = |o: Ordering, (px, py): (&BigInt, &BigInt), (qx, qy): (&BigInt, &BigInt), (rx, ry): (&BigInt, &BigInt)| {
        o == Ordering::Equal && within(px, qx, rx) && within(py, qy, ry)
    };
    on(o1, (ax, ay), (bx, by), (cx, cy))
        || on(o2, (ax, ay), (bx, by), (dx, dy))
        || on(o3, (cx, cy), (dx, dy), (ax, ay))
        || on(o4, (cx, cy), (dx, dy), (bx, by))
}

/// Checks every polygon invariant; returns the vertices in counter-clockwise
/// order (clockwise input is reversed).
pub fn validate(vertices: &[Point]) -> Result<Vec<Point>, Violation> {
    let k = vertices.len();
    if k < 3 {
        return Err(Violation::TooFewVertices(k));
    }
    if let Some(j) = (0..k).find(|&j| vertices[j] == vertices[(j + 1) % k]) {
        return Err(Violation::RepeatedVertex(j));
    }
    let mut form = IntForm::new(vertices);
    let mut ordered = vertices.to_vec();
    let area2: BigInt = (0..k)
        .map(|j| {
            let n = (j + 1) % k;
            &form.xs[j] * &form.ys[n] - &form.xs[n] * &form.ys[j]
        })
        .sum();
    match area2.sign() {
        num_bigint::Sign::NoSign => return Err(Violation::ZeroArea),
        num_bigint::Sign::Minus => {
            ordered.reverse();
            form.reverse();
        }
        num_bigint::Sign::Plus => {}
    }
    let (xs, ys) = (&form.xs, &form.ys);
    let v = |j: usize| (&xs[j % k], &ys[j % k]);
    for i in 0..k {
        for j in i + 1..k {
            let adjacent = j == i + 1 || (i == 0 && j == k - 1);
            if adjacent {
                // consecutive edges a→b→c must not fold back onto each other
                let (a, b, c) = if j == i + 1 { (i, j, j + 1) } else { (k - 1, 0, 1) };
                let (ux, uy) = (v(b).0 - v(a).0, v(b).1 - v(a).1);
                let (wx, wy) = (v(c).0 - v(b).0, v(c).1 - v(b).1);
                let cross = &ux * &wy - &uy * &wx;
                let dot = ux * wx + uy * wy;
                if cross.is_zero() && dot.is_negative() {
                    return Err(Violation::SelfIntersecting(i, j));
                }
            } else if segments_touch(v(i), v(i + 1), v(j), v(j + 1)) {
                return Err(Violation::SelfIntersecting(i, j));
            }
        }
    }
    let zero = BigInt::zero();
    if !closed_contains(xs.iter().zip(ys), &zero, &zero) {
        return Err(Violation::OriginOutside);
    }
    // the origin must see every edge from its inner side
    for j in 0..k {
        if orient(v(j).0, v(j).1, v(j + 1).0, v(j + 1).1, &zero, &zero) == Ordering::Less {
            return Err(Violation::NotStarShaped(j));
        }
    }
    Ok(ordered)
}

/// A validated, counter-clockwise polygon, star-shaped about the origin.
#[derive(Clone, Debug)]
pub struct Polygon {
    vertices: Vec<Point>,
    form: IntForm,
    bits: u64,
    diameter: BigUint,
}

impl Polygon {
    pub fn new(vertices: Vec<Point>) -> Result<Self> {
        let vertices = validate(&vertices)?;
        let form = IntForm::new(&vertices);
        Ok(Self::assemble(vertices, form))
    }

    fn assemble(vertices: Vec<Point>, form: IntForm) -> Self {
        let bits = vertices
            .iter()
            .map(|p| p.x.bits().max(p.y.bits()))
            .max()
            .unwrap_or(0);
        let diameter = form.diameter_bound();
        Polygon {
            vertices,
            form,
            bits,
            diameter,
        }
    }

    /// Convenience constructor from integer vertices.
    pub fn from_ints(vertices: &[(i64, i64)]) -> Result<Self> {
        Polygon::new(vertices.iter().map(|&(x, y)| Point::from_ints(x, y)).collect())
    }

    /// Parses the polygon text format and validates the result.
    pub fn parse(text: &str) -> Result<Self> {
        Polygon::new(parse_vertices(text)?)
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    /// Vertex count `k`.
    pub fn k(&self) -> usize {
        self.vertices.len()
    }

    /// Largest bit length over all coordinate numerators and denominators.
    pub fn bits(&self) -> u64 {
        self.bits
    }

    /// Smallest integer at least the largest vertex-to-vertex distance.
    pub fn diameter_bound(&self) -> &BigUint {
        &self.diameter
    }

    pub fn contains(&self, q: &Point) -> bool {
        let (xs, ys) = (
            self.vertices.iter().map(|p| p.x.as_big_rational()),
            self.vertices.iter().map(|p| p.y.as_big_rational()),
        );
        closed_contains(xs.zip(ys), q.x.as_big_rational(), q.y.as_big_rational())
    }

    /// Closed membership of the lattice point `(x, y)` in `P_{/d}`.
    pub fn contains_lattice_scaled(&self, x: i64, y: i64, d: u64) -> bool {
        assert!(d >= 1);
        self.form.contains_lattice(x, y, d)
    }

    /// `P_{/d}`: every coordinate divided by `d`.
    pub fn scale_down(&self, d: u64) -> Result<Polygon> {
        if d == 0 {
            return Err(Error::domain("scale factor must be at least 1"));
        }
        let vertices = self
            .vertices
            .iter()
            .map(|p| Point::new(p.x.div_int(d), p.y.div_int(d)))
            .collect();
        Ok(Self::assemble(vertices, self.form.scaled(d)))
    }

    /// `A(P)`: lattice points in the closed region.
    pub fn count_lattice(&self) -> BigUint {
        self.form
            .count_lattice()
            .to_biguint()
            .expect("lattice count is nonnegative")
    }

    /// `A(P_{/d})` without materializing the scaled polygon.
    pub fn count_lattice_scaled(&self, d: u64) -> BigUint {
        assert!(d >= 1);
        self.form
            .scaled(d)
            .count_lattice()
            .to_biguint()
            .expect("lattice count is nonnegative")
    }

    /// Integer bounding box of the lattice points of `P_{/d}` as
    /// `(xmin, xmax, ymin, ymax)`; empty ranges are possible.
    pub fn lattice_bbox_scaled(&self, d: u64) -> (BigInt, BigInt, BigInt, BigInt) {
        assert!(d >= 1);
        self.form.scaled(d).lattice_bbox()
    }
}

impl fmt::Display for Polygon {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for p in &self.vertices {
            writeln!(f, "{p}")?;
        }
        Ok(())
    }
}

/// Reads one vertex per line as `PX/QX PY/QY`; `#` lines and blank lines
/// are skipped.
pub fn parse_vertices(text: &str) -> Result<Vec<Point>> {
    let mut out = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        let [x, y] = fields[..] else {
            return Err(Error::Parse(format!(
                "line {}: expected two coordinates, got {:?}",
                idx + 1,
                line
            )));
        };
        let coord = |s: &str| {
            s.parse::<Rational>()
                .map_err(|e| Error::Parse(format!("line {}: {e}", idx + 1)))
        };
        out.push(Point::new(coord(x)?, coord(y)?));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn square(h: i64) -> Polygon {
        Polygon::from_ints(&[(-h, -h), (h, -h), (h, h), (-h, h)]).unwrap()
    }

    fn brute_count(p: &Polygon) -> u64 {
        let (x0, x1, y0, y1) = p.lattice_bbox_scaled(1);
        let (x0, x1, y0, y1) = (x0.to_i64().unwrap(), x1.to_i64().unwrap(), y0.to_i64().unwrap(), y1.to_i64().unwrap());
        let mut n = 0;
        for x in x0..=x1 {
            for y in y0..=y1 {
                if p.contains(&Point::from_ints(x, y)) {
                    n += 1;
                }
            }
        }
        n
    }

    fn pt(x: (i64, i64), y: (i64, i64)) -> Point {
        Point::new(Rational::new(x.0, x.1).unwrap(), Rational::new(y.0, y.1).unwrap())
    }

    #[test]
    fn validate_examples() {
        assert!(Polygon::from_ints(&[(-2, -2), (2, -2), (2, 2), (-2, 2)]).is_ok());
        assert!(Polygon::from_ints(&[(0, 0), (4, 0), (4, 2)]).is_ok());
        // the symmetric bowtie has zero signed area, which is reported first
        let bowtie = Polygon::from_ints(&[(-2, -2), (2, 2), (2, -2), (-2, 2)]);
        assert!(matches!(bowtie, Err(Error::Invalid(Violation::ZeroArea))));
        let bowtie = Polygon::from_ints(&[(-2, -2), (4, 3), (4, -2), (-2, 2)]);
        assert!(matches!(bowtie, Err(Error::Invalid(Violation::SelfIntersecting(..)))));
    }

    #[test]
    fn validate_violations() {
        let v = |pts: &[(i64, i64)]| match Polygon::from_ints(pts) {
            Err(Error::Invalid(v)) => v,
            other => panic!("expected violation, got {other:?}"),
        };
        assert_eq!(v(&[(0, 0), (1, 1)]), Violation::TooFewVertices(2));
        assert_eq!(v(&[(0, 0), (1, 0), (1, 0), (0, 1)]), Violation::RepeatedVertex(1));
        assert_eq!(v(&[(0, 0), (1, 1), (2, 2)]), Violation::ZeroArea);
        assert_eq!(v(&[(1, 1), (3, 1), (3, 3)]), Violation::OriginOutside);
        // a dent whose reflex corner hides part of the boundary from the origin
        let dented = [(-4, -4), (4, -4), (4, 4), (1, 4), (1, -2), (-1, -2), (-1, 4), (-4, 4)];
        assert!(matches!(v(&dented), Violation::NotStarShaped(_) | Violation::OriginOutside));
        let hooked = [(-4, -4), (4, -4), (4, 4), (2, 4), (2, 1), (-2, 1), (-2, 4), (-4, 4)];
        assert!(matches!(v(&hooked), Violation::NotStarShaped(_)));
        // fold-back along one line
        assert!(matches!(
            v(&[(-2, -1), (2, -1), (0, -1), (0, 3)]),
            Violation::SelfIntersecting(..)
        ));
    }

    #[test]
    fn clockwise_input_is_reversed() {
        let cw = Polygon::from_ints(&[(-2, 2), (2, 2), (2, -2), (-2, -2)]).unwrap();
        let ccw = square(2);
        assert_eq!(cw.count_lattice(), ccw.count_lattice());
        let first: Vec<_> = cw.vertices().to_vec();
        assert_eq!(first[0], Point::from_ints(-2, -2));
    }

    #[test]
    fn contains_examples() {
        let s = square(2);
        assert!(s.contains(&Point::origin()));
        assert!(s.contains(&Point::from_ints(2, 2)));
        assert!(s.contains(&Point::from_ints(2, 0)));
        assert!(!s.contains(&Point::from_ints(3, 0)));
        assert!(!s.contains(&pt((201, 100), (0, 1))));
        assert!(s.contains(&pt((199, 100), (-199, 100))));
        assert!(s.contains_lattice_scaled(1, 1, 2));
        assert!(!s.contains_lattice_scaled(1, 1, 3));
    }

    #[test]
    fn scale_down_examples() {
        let s = square(2);
        assert_eq!(s.scale_down(1).unwrap().vertices(), s.vertices());
        assert_eq!(s.scale_down(2).unwrap().vertices(), square(1).vertices());
        assert!(s.scale_down(0).is_err());
        for d in 1..10u64 {
            let big = s.diameter_bound().to_u64().unwrap();
            let small = s.scale_down(d).unwrap().diameter_bound().to_u64().unwrap();
            assert!(small <= big.div_ceil(d).max(1) && small + 1 >= big / d);
        }
    }

    #[test]
    fn diameter_examples() {
        assert_eq!(square(2).diameter_bound(), &BigUint::from(6u32));
        let tri = Polygon::from_ints(&[(0, 0), (4, 0), (4, 2)]).unwrap();
        assert_eq!(tri.diameter_bound(), &BigUint::from(5u32));
        let tiny = Polygon::new(vec![pt((-1, 3), (-1, 3)), pt((1, 3), (-1, 3)), pt((0, 1), (1, 3))]).unwrap();
        assert_eq!(tiny.diameter_bound(), &BigUint::from(1u32));
    }

    #[test]
    fn count_lattice_examples() {
        assert_eq!(square(2).count_lattice(), BigUint::from(25u32));
        let tri = Polygon::from_ints(&[(0, 0), (4, 0), (4, 2)]).unwrap();
        assert_eq!(tri.count_lattice(), BigUint::from(9u32));
        let tiny = Polygon::new(vec![pt((-2, 5), (-1, 3)), pt((2, 5), (-1, 3)), pt((0, 1), (2, 5))]).unwrap();
        assert_eq!(tiny.count_lattice(), BigUint::one());
    }

    #[test]
    fn count_lattice_vertical_edges_and_vertex_columns() {
        let shapes: Vec<Vec<(i64, i64)>> = vec![
            vec![(-3, -1), (0, -4), (3, -1), (3, 2), (0, 5), (-3, 2)],
            vec![(0, 0), (7, 0), (7, 3)],
            vec![(-5, 0), (0, -1), (5, 0), (0, 1)],
            vec![(-1, -1), (1, -1), (1, 1), (-1, 1)],
            vec![(-6, -2), (0, -3), (6, -2), (1, 0), (6, 2), (0, 3), (-6, 2), (-1, 0)],
        ];
        for s in shapes {
            let p = Polygon::from_ints(&s).unwrap();
            assert_eq!(p.count_lattice().to_u64().unwrap(), brute_count(&p), "{s:?}");
            for d in 1..5 {
                let q = p.scale_down(d).unwrap();
                assert_eq!(q.count_lattice().to_u64().unwrap(), brute_count(&q));
                assert_eq!(p.count_lattice_scaled(d), q.count_lattice());
            }
        }
    }

    #[test]
    fn count_lattice_rational_vertices() {
        let p = Polygon::new(vec![
            pt((-7, 3), (-5, 2)),
            pt((11, 4), (-1, 3)),
            pt((9, 2), (17, 5)),
            pt((-1, 7), (13, 3)),
            pt((-10, 3), (1, 2)),
        ])
        .unwrap();
        assert_eq!(p.count_lattice().to_u64().unwrap(), brute_count(&p));
    }

    #[test]
    fn beyond_diameter_only_origin() {
        let tri = Polygon::from_ints(&[(0, 0), (4, 0), (4, 2)]).unwrap();
        for p in [square(2), tri] {
            let d = p.diameter_bound().to_u64().unwrap();
            assert_eq!(p.scale_down(d + 1).unwrap().count_lattice(), BigUint::one());
        }
    }

    #[test]
    fn parse_format() {
        let text = "# square\n-2 -2\n2/1 -2\n\n2 4/2\n# c\n-2 2\n";
        let p = Polygon::parse(text).unwrap();
        assert_eq!(p.vertices(), square(2).vertices());
        assert!(matches!(Polygon::parse("0 0\n1.5 0\n0 1\n"), Err(Error::Parse(_))));
        assert!(matches!(Polygon::parse("0 0 0\n"), Err(Error::Parse(_))));
        assert!(matches!(Polygon::parse("NaN 0\n"), Err(Error::Parse(_))));
        assert!(matches!(Polygon::parse("1 1\n3 1\n3 3\n"), Err(Error::Invalid(Violation::OriginOutside))));
    }
}
