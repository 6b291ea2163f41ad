//! Integer frames: a batch of rational points translated to a chosen
//! origin and scaled by a common denominator, so predicates reduce to
//! integer cross products.
//!
//! When every scaled coordinate fits comfortably in an `i64` the fast
//! path computes cross products in `i128`; otherwise the same generic
//! code runs on `BigInt`.

use std::cmp::Ordering;
use std::fmt::Debug;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive};

use crate::kernel::{Point, Rational};

/// Scaled coordinates stay below this magnitude on the fast path, so
/// differences fit in 62 bits and cross products of differences in 126.
const SMALL_LIMIT: i64 = 1 << 60;

pub trait FrameNum: Clone + Ord + Debug + Send + Sync {
    type Wide: Clone + Ord + Debug;

    fn diff(&self, o: &Self) -> Self;
    fn sum(&self, o: &Self) -> Self;
    fn negated(&self) -> Self;
    fn signum_i8(&self) -> i8;
    fn to_f64(&self) -> f64;
    /// `ax * by - ay * bx`
    fn cross(ax: &Self, ay: &Self, bx: &Self, by: &Self) -> Self::Wide;
    /// `ax * bx + ay * by`
    fn dot(ax: &Self, ay: &Self, bx: &Self, by: &Self) -> Self::Wide;
    fn wide_sign(w: &Self::Wide) -> i8;
    fn wide_to_f64(w: &Self::Wide) -> f64;
    /// Compares `a * b` with `c * d` exactly.
    fn wide_mul_cmp(a: &Self::Wide, b: &Self::Wide, c: &Self::Wide, d: &Self::Wide) -> Ordering;
}

pub type V<T> = [T; 2];

#[inline]
pub fn vsub<T: FrameNum>(a: &V<T>, b: &V<T>) -> V<T> {
    [a[0].diff(&b[0]), a[1].diff(&b[1])]
}

/// Sign of `u x w`.
#[inline]
pub fn cross_sign<T: FrameNum>(u: &V<T>, w: &V<T>) -> i8 {
    T::wide_sign(&T::cross(&u[0], &u[1], &w[0], &w[1]))
}

/// Orientation of `a b c`.
#[inline]
pub fn orient<T: FrameNum>(a: &V<T>, b: &V<T>, c: &V<T>) -> i8 {
    cross_sign(&vsub(b, a), &vsub(c, a))
}

/// Upper half-plane (angle in `[0, pi)`) test for a nonzero vector.
#[inline]
fn upper<T: FrameNum>(u: &V<T>) -> bool {
    let sy = u[1].signum_i8();
    sy > 0 || (sy == 0 && u[0].signum_i8() > 0)
}

/// Counter-clockwise angle order of nonzero vectors, starting at the
/// positive x axis.
pub fn angle_cmp<T: FrameNum>(u: &V<T>, w: &V<T>) -> Ordering {
    let (hu, hw) = (upper(u), upper(w));
    if hu != hw {
        return if hu { Ordering::Less } else { Ordering::Greater };
    }
    match cross_sign(u, w) {
        1 => Ordering::Less,
        -1 => Ordering::Greater,
        _ => Ordering::Equal,
    }
}

/// Counter-clockwise angle order measured from the reference direction
/// `r` (which itself sorts first).
pub fn angle_cmp_from<T: FrameNum>(r: &V<T>, u: &V<T>, w: &V<T>) -> Ordering {
    let key = |v: &V<T>| -> u8 {
        let c = cross_sign(r, v);
        if c > 0 {
            1
        } else if c < 0 {
            3
        } else if T::wide_sign(&T::dot(&r[0], &r[1], &v[0], &v[1])) > 0 {
            0
        } else {
            2
        }
    };
    let (ku, kw) = (key(u), key(w));
    if ku != kw {
        return ku.cmp(&kw);
    }
    match cross_sign(u, w) {
        1 => Ordering::Less,
        -1 => Ordering::Greater,
        _ => Ordering::Equal,
    }
}

/// Same or opposite direction.
#[inline]
pub fn parallel<T: FrameNum>(u: &V<T>, w: &V<T>) -> bool {
    cross_sign(u, w) == 0
}

impl FrameNum for i64 {
    type Wide = i128;

    #[inline]
    fn diff(&self, o: &Self) -> Self {
        self - o
    }
    #[inline]
    fn sum(&self, o: &Self) -> Self {
        self + o
    }
    #[inline]
    fn negated(&self) -> Self {
        -self
    }
    #[inline]
    fn signum_i8(&self) -> i8 {
        self.signum() as i8
    }
    fn to_f64(&self) -> f64 {
        *self as f64
    }
    #[inline]
    fn cross(ax: &Self, ay: &Self, bx: &Self, by: &Self) -> i128 {
        *ax as i128 * *by as i128 - *ay as i128 * *bx as i128
    }
    #[inline]
    fn dot(ax: &Self, ay: &Self, bx: &Self, by: &Self) -> i128 {
        *ax as i128 * *bx as i128 + *ay as i128 * *by as i128
    }
    #[inline]
    fn wide_sign(w: &i128) -> i8 {
        w.signum() as i8
    }
    fn wide_to_f64(w: &i128) -> f64 {
        *w as f64
    }
    fn wide_mul_cmp(a: &i128, b: &i128, c: &i128, d: &i128) -> Ordering {
        let left = signed_wide_mul(*a, *b);
        let right = signed_wide_mul(*c, *d);
        left.cmp(&right)
    }
}

/// 256-bit signed product, ordered correctly by `Ord`.
#[derive(PartialEq, Eq, PartialOrd, Ord)]
enum Wide256 {
    Neg(std::cmp::Reverse<(u128, u128)>),
    Zero,
    Pos((u128, u128)),
}

fn signed_wide_mul(a: i128, b: i128) -> Wide256 {
    if a == 0 || b == 0 {
        return Wide256::Zero;
    }
    let neg = (a < 0) != (b < 0);
    let mag = mul_u128(a.unsigned_abs(), b.unsigned_abs());
    if neg {
        Wide256::Neg(std::cmp::Reverse(mag))
    } else {
        Wide256::Pos(mag)
    }
}

/// Full product as `(high, low)` words.
fn mul_u128(a: u128, b: u128) -> (u128, u128) {
    let mask = u64::MAX as u128;
    let (a_hi, a_lo) = (a >> 64, a & mask);
    let (b_hi, b_lo) = (b >> 64, b & mask);
    let ll = a_lo * b_lo;
    let lh = a_lo * b_hi;
    let hl = a_hi * b_lo;
    let hh = a_hi * b_hi;
    let mid = (ll >> 64) + (lh & mask) + (hl & mask);
    let lo = (ll & mask) | (mid << 64);
    let hi = hh + (lh >> 64) + (hl >> 64) + (mid >> 64);
    (hi, lo)
}

impl FrameNum for BigInt {
    type Wide = BigInt;

    fn diff(&self, o: &Self) -> Self {
        self - o
    }
    fn sum(&self, o: &Self) -> Self {
        self + o
    }
    fn negated(&self) -> Self {
        -self
    }
    fn signum_i8(&self) -> i8 {
        match self.sign() {
            Sign::Minus => -1,
            Sign::NoSign => 0,
            Sign::Plus => 1,
        }
    }
    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
    fn cross(ax: &Self, ay: &Self, bx: &Self, by: &Self) -> BigInt {
        ax * by - ay * bx
    }
    fn dot(ax: &Self, ay: &Self, bx: &Self, by: &Self) -> BigInt {
        ax * bx + ay * by
    }
    fn wide_sign(w: &BigInt) -> i8 {
        w.signum_i8()
    }
    fn wide_to_f64(w: &BigInt) -> f64 {
        ToPrimitive::to_f64(w).unwrap_or(f64::NAN)
    }
    fn wide_mul_cmp(a: &BigInt, b: &BigInt, c: &BigInt, d: &BigInt) -> Ordering {
        (a * b).cmp(&(c * d))
    }
}

/// Points in an integer frame, on the fast or the big path.
#[derive(Clone, Debug)]
pub enum FramePoints {
    Small(Vec<V<i64>>),
    Big(Vec<V<BigInt>>),
}

impl FramePoints {
    pub fn len(&self) -> usize {
        match self {
            FramePoints::Small(v) => v.len(),
            FramePoints::Big(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Rational points stored as integer numerators over one common
/// denominator, ready to be re-framed around any origin.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntGrid {
    den: BigInt,
    pts: Vec<V<BigInt>>,
}

impl IntGrid {
    pub fn new<'a>(points: impl IntoIterator<Item = &'a Point> + Clone) -> Self {
        let mut den = BigInt::from(1);
        for p in points.clone() {
            den = den.lcm(p.x.denom()).lcm(p.y.denom());
        }
        let pts = points
            .into_iter()
            .map(|p| [scale(&p.x, &den), scale(&p.y, &den)])
            .collect();
        IntGrid { den, pts }
    }

    pub fn len(&self) -> usize {
        self.pts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pts.is_empty()
    }

    /// All points translated so `origin` sits at zero, scaled to integers.
    pub fn framed(&self, origin: &Point) -> FramePoints {
        let den = self.den.lcm(origin.x.denom()).lcm(origin.y.denom());
        let factor = &den / &self.den;
        let ox = scale(&origin.x, &den);
        let oy = scale(&origin.y, &den);
        let big: Vec<V<BigInt>> = self
            .pts
            .iter()
            .map(|[x, y]| [x * &factor - &ox, y * &factor - &oy])
            .collect();
        shrink(big)
    }
}

fn scale(r: &Rational, den: &BigInt) -> BigInt {
    r.numer() * (den / r.denom())
}

fn shrink(big: Vec<V<BigInt>>) -> FramePoints {
    let limit = BigInt::from(SMALL_LIMIT);
    if big.iter().all(|[x, y]| x.abs() < limit && y.abs() < limit) {
        FramePoints::Small(
            big.iter()
                .map(|[x, y]| [x.to_i64().unwrap(), y.to_i64().unwrap()])
                .collect(),
        )
    } else {
        FramePoints::Big(big)
    }
}

/// Frames an arbitrary list of points around `origin`.
pub fn frame_points(points: &[Point], origin: &Point) -> FramePoints {
    IntGrid::new(points.iter()).framed(origin)
}

/// True for the zero vector.
pub fn is_zero_vec<T: FrameNum>(v: &V<T>) -> bool {
    v[0].signum_i8() == 0 && v[1].signum_i8() == 0
}
