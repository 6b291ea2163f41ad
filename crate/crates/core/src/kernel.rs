//! Exact rational geometry: points, segments, lines, rays and the
//! predicates everything else is built on.
//!
//! Coordinates are [`Rational`]s (reduced `BigRational`s), so every
//! predicate answers exactly. Hot loops that need speed go through
//! [`crate::frame`], which rescales a batch of points to integers.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::scene::Scene;

/// Arbitrary precision rational, always kept in lowest terms with a
/// positive denominator.
pub type Rational = BigRational;

/// Shorthand for an integer-valued rational.
pub fn rat(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

/// Shorthand for `num / den`.
pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// A point with exact coordinates. Read `x` and `y` freely but build
/// points through [`Point::new`]: a rounded copy rides along for filtered
/// predicates.
#[derive(Clone)]
pub struct Point {
    pub x: Rational,
    pub y: Rational,
    approx: (f64, f64),
}

impl PartialEq for Point {
    fn eq(&self, o: &Self) -> bool {
        self.x == o.x && self.y == o.y
    }
}

impl Eq for Point {}

impl std::hash::Hash for Point {
    fn hash<H: std::hash::Hasher>(&self, h: &mut H) {
        self.x.hash(h);
        self.y.hash(h);
    }
}

impl PartialOrd for Point {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

impl Ord for Point {
    fn cmp(&self, o: &Self) -> Ordering {
        self.x.cmp(&o.x).then_with(|| self.y.cmp(&o.y))
    }
}

impl Point {
    pub fn new(x: Rational, y: Rational) -> Self {
        let approx = (to_f64(&x), to_f64(&y));
        Point { x, y, approx }
    }

    pub fn from_ints(x: i64, y: i64) -> Self {
        Point::new(rat(x), rat(y))
    }

    pub fn sub(&self, o: &Point) -> (Rational, Rational) {
        (&self.x - &o.x, &self.y - &o.y)
    }

    /// `self + t * (dx, dy)`.
    pub fn offset(&self, dx: &Rational, dy: &Rational, t: &Rational) -> Point {
        Point::new(&self.x + dx * t, &self.y + dy * t)
    }

    pub fn lerp(&self, o: &Point, t: &Rational) -> Point {
        let (dx, dy) = o.sub(self);
        self.offset(&dx, &dy, t)
    }

    pub fn midpoint(&self, o: &Point) -> Point {
        self.lerp(o, &ratio(1, 2))
    }

    pub fn to_f64(&self) -> (f64, f64) {
        self.approx
    }
}

impl fmt::Debug for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

pub fn to_f64(r: &Rational) -> f64 {
    use num_traits::ToPrimitive;
    r.to_f64().unwrap_or(f64::NAN)
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Segment {
    pub a: Point,
    pub b: Point,
    pub id: usize,
}

impl Segment {
    /// Returns `None` for a zero-length segment.
    pub fn new(a: Point, b: Point, id: usize) -> Option<Self> {
        if a == b {
            None
        } else {
            Some(Segment { a, b, id })
        }
    }

    pub fn supporting_line(&self) -> Line {
        Line::through(&self.a, &self.b).expect("segment endpoints are distinct")
    }

    pub fn endpoints(&self) -> [&Point; 2] {
        [&self.a, &self.b]
    }

    pub fn has_endpoint(&self, p: &Point) -> bool {
        &self.a == p || &self.b == p
    }

    /// True iff `p` lies on the closed segment.
    pub fn contains(&self, p: &Point) -> bool {
        orientation(&self.a, &self.b, p) == Orientation::Collinear && in_box(&self.a, &self.b, p)
    }
}

/// `A x + B y = C`, scaled so that the first nonzero of `(A, B)` is 1.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Line {
    pub a: Rational,
    pub b: Rational,
    pub c: Rational,
}

impl Line {
    pub fn new(a: Rational, b: Rational, c: Rational) -> Option<Self> {
        if a.is_zero() && b.is_zero() {
            return None;
        }
        let lead = if a.is_zero() { b.clone() } else { a.clone() };
        Some(Line {
            a: a / &lead,
            b: b / &lead,
            c: c / &lead,
        })
    }

    pub fn through(p: &Point, q: &Point) -> Option<Self> {
        if p == q {
            return None;
        }
        let a = &q.y - &p.y;
        let b = &p.x - &q.x;
        let c = &a * &p.x + &b * &p.y;
        Line::new(a, b, c)
    }

    /// Sign of `A x + B y - C`.
    pub fn side(&self, p: &Point) -> Ordering {
        (&self.a * &p.x + &self.b * &p.y).cmp(&self.c)
    }

    pub fn contains(&self, p: &Point) -> bool {
        self.side(p) == Ordering::Equal
    }

    pub fn is_vertical(&self) -> bool {
        self.b.is_zero()
    }

    /// Direction vector `(B, -A)`.
    pub fn direction(&self) -> (Rational, Rational) {
        (self.b.clone(), -self.a.clone())
    }

    /// Some point on the line.
    pub fn anchor(&self) -> Point {
        if self.a.is_zero() {
            Point::new(Rational::zero(), &self.c / &self.b)
        } else {
            Point::new(&self.c / &self.a, Rational::zero())
        }
    }

    /// Monotone coordinate along the line: `x`, or `y` for vertical lines.
    pub fn param(&self, p: &Point) -> Rational {
        if self.is_vertical() {
            p.y.clone()
        } else {
            p.x.clone()
        }
    }

    pub fn at_param(&self, t: &Rational) -> Point {
        if self.is_vertical() {
            Point::new(&self.c / &self.a, t.clone())
        } else {
            Point::new(t.clone(), (&self.c - &self.a * t) / &self.b)
        }
    }
}

impl fmt::Display for Line {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}x + {}y = {}", self.a, self.b, self.c)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Ray {
    pub origin: Point,
    pub dx: Rational,
    pub dy: Rational,
}

impl Ray {
    pub fn new(origin: Point, dx: Rational, dy: Rational) -> Option<Self> {
        if dx.is_zero() && dy.is_zero() {
            None
        } else {
            Some(Ray { origin, dx, dy })
        }
    }

    /// Ray from `from` pointing away from `away`.
    pub fn away_from(from: &Point, away: &Point) -> Option<Self> {
        let (dx, dy) = from.sub(away);
        Ray::new(from.clone(), dx, dy)
    }

    pub fn at(&self, t: &Rational) -> Point {
        self.origin.offset(&self.dx, &self.dy, t)
    }

    pub fn supporting_line(&self) -> Line {
        let q = self.at(&Rational::one());
        Line::through(&self.origin, &q).expect("nonzero direction")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Orientation {
    Clockwise,
    Collinear,
    CounterClockwise,
}

impl Orientation {
    pub fn as_i8(self) -> i8 {
        match self {
            Orientation::Clockwise => -1,
            Orientation::Collinear => 0,
            Orientation::CounterClockwise => 1,
        }
    }

    pub fn from_ordering(o: Ordering) -> Self {
        match o {
            Ordering::Less => Orientation::Clockwise,
            Ordering::Equal => Orientation::Collinear,
            Ordering::Greater => Orientation::CounterClockwise,
        }
    }
}

/// Sign of `u x w` for vectors `u` and `w`.
pub fn cross_sign(ux: &Rational, uy: &Rational, wx: &Rational, wy: &Rational) -> Ordering {
    (ux * wy).cmp(&(uy * wx))
}

/// Float sign of `(q - p) x (r - p)` when rounding cannot flip it.
fn orientation_filter(p: &Point, q: &Point, r: &Point) -> Option<Ordering> {
    let ((px, py), (qx, qy), (rx, ry)) = (p.approx, q.approx, r.approx);
    let (t1, t2) = ((qx - px) * (ry - py), (qy - py) * (rx - px));
    let bound = 8.0 * f64::EPSILON * ((qx.abs() + px.abs()) * (ry.abs() + py.abs()) + (qy.abs() + py.abs()) * (rx.abs() + px.abs()));
    let det = t1 - t2;
    // far from overflow and underflow, input rounding stays inside `bound`
    if !bound.is_finite() || !det.is_finite() || det.abs() < 1e-250 {
        return None;
    }
    if det > bound {
        Some(Ordering::Greater)
    } else if det < -bound {
        Some(Ordering::Less)
    } else {
        None
    }
}

/// Orientation of the triangle `p q r`.
pub fn orientation(p: &Point, q: &Point, r: &Point) -> Orientation {
    if let Some(o) = orientation_filter(p, q, r) {
        return Orientation::from_ordering(o);
    }
    let (ux, uy) = q.sub(p);
    let (wx, wy) = r.sub(p);
    Orientation::from_ordering(cross_sign(&ux, &uy, &wx, &wy))
}

/// `r` inside the axis-aligned box spanned by `p` and `q` (closed).
fn in_box(p: &Point, q: &Point, r: &Point) -> bool {
    let (lx, hx) = if p.x <= q.x { (&p.x, &q.x) } else { (&q.x, &p.x) };
    let (ly, hy) = if p.y <= q.y { (&p.y, &q.y) } else { (&q.y, &p.y) };
    lx <= &r.x && &r.x <= hx && ly <= &r.y && &r.y <= hy
}

fn dot(ux: &Rational, uy: &Rational, wx: &Rational, wy: &Rational) -> Rational {
    ux * wx + uy * wy
}

/// True iff the relatively open segment `(p, q)` meets the closed segment `s`.
pub fn open_segment_blocked(p: &Point, q: &Point, s: &Segment) -> bool {
    let o1 = orientation(p, q, &s.a).as_i8();
    let o2 = orientation(p, q, &s.b).as_i8();
    if o1 == 0 && o2 == 0 {
        // Collinear: project onto p->q, with p at 0 and q at |pq|^2.
        let (dx, dy) = q.sub(p);
        let len2 = dot(&dx, &dy, &dx, &dy);
        let (ax, ay) = s.a.sub(p);
        let (bx, by) = s.b.sub(p);
        let ta = dot(&ax, &ay, &dx, &dy);
        let tb = dot(&bx, &by, &dx, &dy);
        let (lo, hi) = if ta <= tb { (ta, tb) } else { (tb, ta) };
        return lo < len2 && hi.is_positive();
    }
    if o1 * o2 > 0 {
        return false;
    }
    let o3 = orientation(&s.a, &s.b, p).as_i8();
    let o4 = orientation(&s.a, &s.b, q).as_i8();
    o3 * o4 < 0
}

/// Closed segments `s` and `t` share at least one point.
pub fn segments_touch(s: &Segment, t: &Segment) -> bool {
    let o1 = orientation(&s.a, &s.b, &t.a).as_i8();
    let o2 = orientation(&s.a, &s.b, &t.b).as_i8();
    let o3 = orientation(&t.a, &t.b, &s.a).as_i8();
    let o4 = orientation(&t.a, &t.b, &s.b).as_i8();
    if o1 == 0 && o2 == 0 {
        return s.contains(&t.a) || s.contains(&t.b) || t.contains(&s.a) || t.contains(&s.b);
    }
    o1 * o2 <= 0 && o3 * o4 <= 0
}

/// Segments violate the non-crossing rule: they share a point other than
/// a common endpoint (or overlap along a common line).
pub fn segments_conflict(s: &Segment, t: &Segment) -> bool {
    if !segments_touch(s, t) {
        return false;
    }
    let shared = [&s.a, &s.b].into_iter().find(|p| t.has_endpoint(p));
    match shared {
        None => true,
        Some(c) => {
            let so = if &s.a == c { &s.b } else { &s.a };
            let to = if &t.a == c { &t.b } else { &t.a };
            if so == to {
                return true;
            }
            if orientation(c, so, to) != Orientation::Collinear {
                return false;
            }
            // Collinear with a shared endpoint: fine only if they leave in
            // opposite directions.
            let (ux, uy) = so.sub(c);
            let (wx, wy) = to.sub(c);
            dot(&ux, &uy, &wx, &wy).is_positive()
        }
    }
}

pub fn line_intersection(l1: &Line, l2: &Line) -> Option<Point> {
    let det = &l1.a * &l2.b - &l1.b * &l2.a;
    if det.is_zero() {
        return None;
    }
    let x = (&l1.c * &l2.b - &l1.b * &l2.c) / &det;
    let y = (&l1.a * &l2.c - &l1.c * &l2.a) / &det;
    Some(Point::new(x, y))
}

/// Parameter `t > 0` at which the ray meets the closed segment first, or
/// `None`. Touches at `t = 0` are ignored.
pub fn ray_segment_hit(r: &Ray, s: &Segment) -> Option<Rational> {
    // origin + t d = a + u (b - a)
    let (ex, ey) = s.b.sub(&s.a);
    let (wx, wy) = s.a.sub(&r.origin);
    let den = &r.dx * &ey - &r.dy * &ex;
    if den.is_zero() {
        // Parallel; only a collinear overlap can hit.
        if !(&wx * &r.dy - &wy * &r.dx).is_zero() {
            return None;
        }
        let d2 = dot(&r.dx, &r.dy, &r.dx, &r.dy);
        let (vx, vy) = s.b.sub(&r.origin);
        let ta = dot(&wx, &wy, &r.dx, &r.dy) / &d2;
        let tb = dot(&vx, &vy, &r.dx, &r.dy) / &d2;
        let (lo, hi) = if ta <= tb { (ta, tb) } else { (tb, ta) };
        if !hi.is_positive() {
            return None;
        }
        return if lo.is_positive() {
            Some(lo)
        } else {
            // Origin on the segment or the segment straddles it.
            None
        };
    }
    let t = (&wx * &ey - &wy * &ex) / &den;
    let u = (&wx * &r.dy - &wy * &r.dx) / &den;
    if t.is_positive() && !u.is_negative() && u <= Rational::one() {
        Some(t)
    } else {
        None
    }
}

/// First non-skipped segment hit by `r` (smallest positive parameter),
/// with the exact hit point. Ties go to the smallest id.
pub fn ray_first_hit(scene: &Scene, r: &Ray, skip: &BTreeSet<usize>) -> Option<(usize, Point)> {
    let mut best: Option<(Rational, usize)> = None;
    let tip = r.at(&Rational::one());
    for s in scene.segments() {
        if skip.contains(&s.id) {
            continue;
        }
        // both endpoints strictly on one side of the supporting line
        let (oa, ob) = (orientation(&r.origin, &tip, &s.a), orientation(&r.origin, &tip, &s.b));
        if oa == ob && oa != Orientation::Collinear {
            continue;
        }
        if let Some(t) = ray_segment_hit(r, s) {
            let better = match &best {
                None => true,
                Some((bt, bid)) => t < *bt || (&t == bt && s.id < *bid),
            };
            if better {
                best = Some((t, s.id));
            }
        }
    }
    best.map(|(t, id)| (id, r.at(&t)))
}

/// The simplest rational (smallest denominator, then smallest magnitude)
/// strictly between `lo` and `hi`. Requires `lo < hi`.
pub fn simplest_between(lo: &Rational, hi: &Rational) -> Rational {
    assert!(lo < hi, "empty interval");
    if lo.is_negative() && hi.is_positive() {
        return Rational::zero();
    }
    if !hi.is_positive() {
        return -simplest_between(&-hi.clone(), &-lo.clone());
    }
    // 0 <= lo < hi
    let fl = lo.floor();
    let next = &fl + Rational::one();
    if next < *hi {
        return next;
    }
    // lo and hi both in [fl, fl + 1]
    let lo_frac = lo - &fl;
    let hi_frac = hi - &fl;
    if lo_frac.is_zero() {
        // (0, hi_frac): 1 / (something above 1 / hi_frac)
        let inv = hi_frac.recip();
        let k = inv.floor() + Rational::one();
        return fl + k.recip();
    }
    fl + simplest_between(&hi_frac.recip(), &lo_frac.recip()).recip()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(x: i64, y: i64) -> Point {
        Point::from_ints(x, y)
    }

    fn seg(a: (i64, i64), b: (i64, i64), id: usize) -> Segment {
        Segment::new(p(a.0, a.1), p(b.0, b.1), id).unwrap()
    }

    #[test]
    fn orientation_examples() {
        assert_eq!(orientation(&p(0, 0), &p(1, 0), &p(2, 0)).as_i8(), 0);
        assert_eq!(orientation(&p(0, 0), &p(1, 0), &p(0, 1)).as_i8(), 1);
        // det [[1, 0], [1, -1]] = -1
        assert_eq!(orientation(&p(0, 0), &p(1, 0), &p(1, -1)).as_i8(), -1);
    }

    #[test]
    fn open_segment_examples() {
        let (a, b) = (p(0, 0), p(2, 0));
        assert!(open_segment_blocked(&a, &b, &seg((1, -1), (1, 1), 0)));
        assert!(!open_segment_blocked(&a, &b, &seg((0, 1), (2, 1), 0)));
        assert!(open_segment_blocked(&a, &b, &seg((1, 0), (1, 1), 0)));
        // touching only at the excluded endpoints
        assert!(!open_segment_blocked(&a, &b, &seg((2, 0), (3, 1), 0)));
        assert!(!open_segment_blocked(&a, &b, &seg((0, -1), (0, 1), 0)));
        // collinear overlap and collinear disjoint
        assert!(open_segment_blocked(&a, &b, &seg((1, 0), (5, 0), 0)));
        assert!(!open_segment_blocked(&a, &b, &seg((2, 0), (5, 0), 0)));
    }

    #[test]
    fn line_intersection_examples() {
        let x0 = Line::new(rat(1), rat(0), rat(0)).unwrap();
        let y0 = Line::new(rat(0), rat(1), rat(0)).unwrap();
        let y1 = Line::new(rat(0), rat(1), rat(1)).unwrap();
        assert_eq!(line_intersection(&x0, &y0), Some(p(0, 0)));
        assert_eq!(line_intersection(&y0, &y1), None);
        // y = x and y = -x + 2
        let l1 = Line::through(&p(0, 0), &p(1, 1)).unwrap();
        let l2 = Line::through(&p(0, 2), &p(2, 0)).unwrap();
        assert_eq!(line_intersection(&l1, &l2), Some(p(1, 1)));
    }

    #[test]
    fn line_normalization() {
        let l = Line::through(&p(0, 0), &p(2, 4)).unwrap();
        assert_eq!(l.a, rat(1));
        let v = Line::through(&p(3, 0), &p(3, 7)).unwrap();
        assert!(v.is_vertical());
        assert_eq!(v.c, rat(3));
        let h = Line::through(&p(0, 5), &p(3, 5)).unwrap();
        assert_eq!((h.a.clone(), h.b.clone(), h.c.clone()), (rat(0), rat(1), rat(5)));
    }

    #[test]
    fn ray_hits_collinear_segment_at_entry() {
        let r = Ray::new(p(0, 0), rat(1), rat(0)).unwrap();
        assert_eq!(ray_segment_hit(&r, &seg((3, 0), (5, 0), 0)), Some(rat(3)));
        assert_eq!(ray_segment_hit(&r, &seg((-3, 0), (-1, 0), 0)), None);
        // touch at the origin only
        assert_eq!(ray_segment_hit(&r, &seg((0, 0), (0, 4), 0)), None);
    }

    #[test]
    fn conflicts() {
        assert!(segments_conflict(&seg((0, 0), (2, 2), 0), &seg((0, 2), (2, 0), 1)));
        assert!(!segments_conflict(&seg((0, 0), (1, 0), 0), &seg((1, 0), (1, 1), 1)));
        assert!(segments_conflict(&seg((0, 0), (2, 0), 0), &seg((1, 0), (1, 1), 1)));
        assert!(segments_conflict(&seg((0, 0), (2, 0), 0), &seg((1, 0), (3, 0), 1)));
        assert!(!segments_conflict(&seg((0, 0), (1, 0), 0), &seg((1, 0), (3, 0), 1)));
        assert!(segments_conflict(&seg((0, 0), (2, 0), 0), &seg((0, 0), (1, 0), 1)));
    }

    #[test]
    fn simplest_rationals() {
        assert_eq!(simplest_between(&ratio(1, 3), &ratio(1, 2)), ratio(2, 5));
        assert_eq!(simplest_between(&ratio(-1, 2), &ratio(1, 2)), rat(0));
        assert_eq!(simplest_between(&rat(3), &rat(5)), rat(4));
        assert_eq!(simplest_between(&rat(3), &ratio(7, 2)), ratio(10, 3));
        assert_eq!(simplest_between(&ratio(-7, 2), &rat(-3)), ratio(-10, 3));
    }
}
