//! Fixed and seeded random polygons for tests, the self-test and benchmarks.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_traits::Signed;
use rand::Rng;

use crate::error::Result;
use crate::exactmath::Rational;
use crate::geometry::{Point, Polygon};

/// Axis-aligned square with corners `(±h, ±h)`.
pub fn square(h: i64) -> Polygon {
    Polygon::from_ints(&[(-h, -h), (h, -h), (h, h), (-h, h)]).expect("square is valid")
}

/// The triangle `(0,0), (n,0), (n, x·n)` whose primitive points are the
/// members of `F_n` up to `x`, read as `(b, a)`.
pub fn farey_triangle(n: u64, x: &Rational) -> Result<Polygon> {
    let n_r = Rational::from_integer(BigInt::from(n));
    Polygon::new(vec![
        Point::origin(),
        Point::new(n_r.clone(), Rational::zero()),
        Point::new(n_r.clone(), &n_r * x),
    ])
}

/// A near-regular octagon of circumradius `r` with half-integer vertices.
pub fn octagon(r: i64) -> Polygon {
    // r/√2 rounded to a multiple of 1/2
    let s = ((r as f64) * std::f64::consts::FRAC_1_SQRT_2 * 2.0).round() as i64;
    let h = |v: i64| Rational::new(v, 2).unwrap();
    let i = |v: i64| Rational::from_integer(v);
    Polygon::new(vec![
        Point::new(i(r), i(0)),
        Point::new(h(s), h(s)),
        Point::new(i(0), i(r)),
        Point::new(h(-s), h(s)),
        Point::new(i(-r), i(0)),
        Point::new(h(-s), h(-s)),
        Point::new(i(0), i(-r)),
        Point::new(h(s), h(-s)),
    ])
    .expect("octagon is valid")
}

/// A rational point `(X/q, Y/q)` with `r/4 ≤ |(X, Y)/q| ≤ r`.
fn annulus_point<R: Rng>(rng: &mut R, r: i64) -> Point {
    let q = rng.gen_range(1..=6i64);
    let outer = r * q;
    let inner = (r * q) / 4;
    loop {
        let x = rng.gen_range(-outer..=outer);
        let y = rng.gen_range(-outer..=outer);
        let norm = x * x + y * y;
        if norm <= outer * outer && norm >= inner * inner {
            return Point::new(Rational::new(x, q).unwrap(), Rational::new(y, q).unwrap());
        }
    }
}

fn cross(o: &Point, a: &Point, b: &Point) -> Rational {
    &(&(&a.x - &o.x) * &(&b.y - &o.y)) - &(&(&a.y - &o.y) * &(&b.x - &o.x))
}

/// Andrew's monotone chain; counter-clockwise, collinear points dropped.
fn convex_hull(mut pts: Vec<Point>) -> Vec<Point> {
    pts.sort_by(|a, b| a.x.cmp(&b.x).then_with(|| a.y.cmp(&b.y)));
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }
    let mut hull: Vec<Point> = Vec::with_capacity(2 * pts.len());
    for pass in 0..2 {
        let start = hull.len();
        let iter: Box<dyn Iterator<Item = &Point>> = if pass == 0 {
            Box::new(pts.iter())
        } else {
            Box::new(pts.iter().rev())
        };
        for p in iter {
            while hull.len() >= start + 2
                && !cross(&hull[hull.len() - 2], &hull[hull.len() - 1], p).as_big_rational().is_positive()
            {
                hull.pop();
            }
            hull.push(p.clone());
        }
        hull.pop();
    }
    hull
}

/// Convex hull of random annulus points; retried until it contains the origin.
pub fn random_convex_polygon<R: Rng>(rng: &mut R, max_radius: i64) -> Polygon {
    loop {
        let count = rng.gen_range(3..=10);
        let pts: Vec<Point> = (0..count).map(|_| annulus_point(rng, max_radius)).collect();
        let hull = convex_hull(pts);
        if let Ok(p) = Polygon::new(hull) {
            return p;
        }
    }
}

fn lower_half(p: &Point) -> bool {
    p.y.is_negative() || (p.y.is_zero() && p.x.is_negative())
}

/// Counter-clockwise angle order around the origin starting at the +x axis.
fn angle_cmp(a: &Point, b: &Point) -> Ordering {
    lower_half(a).cmp(&lower_half(b)).then_with(|| {
        let c = &(&a.x * &b.y) - &(&a.y * &b.x);
        Rational::zero().cmp(&c)
    })
}

/// Random annulus points joined in angular order: star-shaped, usually not
/// convex. Retried until valid.
pub fn random_star_polygon<R: Rng>(rng: &mut R, max_radius: i64) -> Polygon {
    loop {
        let count = rng.gen_range(3..=12);
        let mut pts: Vec<Point> = (0..count).map(|_| annulus_point(rng, max_radius)).collect();
        pts.sort_by(angle_cmp);
        if pts.windows(2).any(|w| angle_cmp(&w[0], &w[1]) == Ordering::Equal) {
            continue;
        }
        if let Ok(p) = Polygon::new(pts) {
            return p;
        }
    }
}

/// Convex or star-shaped with equal probability.
pub fn random_polygon<R: Rng>(rng: &mut R, max_radius: i64) -> Polygon {
    if rng.gen_bool(0.5) {
        random_convex_polygon(rng, max_radius)
    } else {
        random_star_polygon(rng, max_radius)
    }
}

/// Radius drawn log-uniformly from `[lo, hi]`.
pub fn log_uniform_radius<R: Rng>(rng: &mut R, lo: i64, hi: i64) -> i64 {
    let t: f64 = rng.gen_range((lo as f64).ln()..=(hi as f64).ln());
    (t.exp().round() as i64).clamp(lo, hi)
}
