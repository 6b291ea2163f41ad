//! Planar subdivisions induced by lines, rays and segments, with exact
//! slab point location.
//!
//! Unbounded pieces are clipped to a box that strictly contains every
//! vertex; the part of the plane outside the box holds only the outward
//! tails of unbounded edges, so far queries walk across those tails
//! instead of extending the box.

use std::cmp::Ordering;
use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;
use rayon::prelude::*;

use crate::kernel::{simplest_between, to_f64, Line, Point, Rational, Ray};
use crate::treap::{Treap, NIL};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Curve {
    Line(Line),
    Ray(Ray),
    Segment(Point, Point),
}

impl Curve {
    fn line(&self) -> Option<Line> {
        match self {
            Curve::Line(l) => Some(l.clone()),
            Curve::Ray(r) => Some(r.supporting_line()),
            Curve::Segment(a, b) => Line::through(a, b),
        }
    }

    /// Parameter interval on `line`; `None` bounds are infinite.
    fn interval(&self, line: &Line) -> (Option<Rational>, Option<Rational>) {
        match self {
            Curve::Line(_) => (None, None),
            Curve::Ray(r) => {
                let t = line.param(&r.origin);
                let forward = if line.is_vertical() {
                    r.dy.is_positive()
                } else {
                    r.dx.is_positive()
                };
                if forward {
                    (Some(t), None)
                } else {
                    (None, Some(t))
                }
            }
            Curve::Segment(a, b) => {
                let (ta, tb) = (line.param(a), line.param(b));
                if ta <= tb {
                    (Some(ta), Some(tb))
                } else {
                    (Some(tb), Some(ta))
                }
            }
        }
    }
}

/// `a x + b y = c` with coprime integers, `b > 0` or `b = 0 < a`.
#[derive(Clone, Debug)]
struct ILine {
    a: BigInt,
    b: BigInt,
    c: BigInt,
    /// `a, b, c` rounded, for filtered comparisons.
    f: [f64; 3],
}

impl ILine {
    fn from_line(l: &Line) -> ILine {
        let den = l.a.denom().lcm(l.b.denom()).lcm(l.c.denom());
        let s = |r: &Rational| r.numer() * (&den / r.denom());
        let (mut a, mut b, mut c) = (s(&l.a), s(&l.b), s(&l.c));
        let g = a.gcd(&b).gcd(&c);
        if !g.is_zero() && !g.is_one() {
            a /= &g;
            b /= &g;
            c /= &g;
        }
        if b.is_negative() || (b.is_zero() && a.is_negative()) {
            a = -a;
            b = -b;
            c = -c;
        }
        let f = [a.to_f64(), b.to_f64(), c.to_f64()].map(|v| v.unwrap_or(f64::NAN));
        ILine { a, b, c, f }
    }

    fn vertical(&self) -> bool {
        self.b.is_zero()
    }

    fn param(&self, p: &Point) -> Rational {
        if self.vertical() {
            p.y.clone()
        } else {
            p.x.clone()
        }
    }

    /// Direction in which the parameter grows.
    fn dir_plus(&self) -> [BigInt; 2] {
        if self.vertical() {
            [BigInt::zero(), BigInt::one()]
        } else {
            [self.b.clone(), -self.a.clone()]
        }
    }

    fn meet(&self, o: &ILine) -> Option<Point> {
        let det = &self.a * &o.b - &o.a * &self.b;
        if det.is_zero() {
            return None;
        }
        let x = &self.c * &o.b - &o.c * &self.b;
        let y = &self.a * &o.c - &o.a * &self.c;
        Some(Point::new(
            Rational::new(x, det.clone()),
            Rational::new(y, det),
        ))
    }

    /// Float height at `x` with an error bound; `None` if out of range.
    fn y_approx(&self, x: f64) -> Option<(f64, f64)> {
        let [a, b, c] = self.f;
        let y = (c - a * x) / b;
        let err = 8.0 * f64::EPSILON * (c.abs() + (a * x).abs()) / b.abs();
        (y.is_finite() && err.is_finite()).then_some((y, err))
    }

    /// `c * xd - a * xn`, the numerator of `y(x) * b * xd`.
    fn ynum(&self, x: &Rational) -> BigInt {
        &self.c * x.denom() - &self.a * x.numer()
    }
}

/// An exact value with its rounding.
struct Approx<'a, T> {
    v: &'a T,
    f: (f64, f64),
}

fn approx_x(x: &Rational) -> Approx<'_, Rational> {
    Approx {
        v: x,
        f: (to_f64(x), 0.0),
    }
}

fn approx_point(p: &Point) -> Approx<'_, Point> {
    Approx { v: p, f: p.to_f64() }
}

/// Sign of `u - w` when the error bounds settle it.
fn filtered(u: f64, eu: f64, w: f64, ew: f64) -> Option<Ordering> {
    let gap = u - w;
    let tol = 2.0 * (eu + ew) + f64::MIN_POSITIVE;
    if gap > tol {
        Some(Ordering::Greater)
    } else if gap < -tol {
        Some(Ordering::Less)
    } else {
        None
    }
}

/// Compares the heights of two non-vertical lines at `x`.
fn cmp_lines_at(e: &ILine, f: &ILine, x: &Approx<Rational>) -> Ordering {
    if let (Some((ye, ee)), Some((yf, ef))) = (e.y_approx(x.f.0), f.y_approx(x.f.0)) {
        if let Some(o) = filtered(ye, ee, yf, ef) {
            return o;
        }
    }
    (e.ynum(x.v) * &f.b).cmp(&(f.ynum(x.v) * &e.b))
}

/// Compares the height of non-vertical `e` at `p.x` with `p.y`.
fn cmp_line_point(e: &ILine, p: &Approx<Point>) -> Ordering {
    if let Some((ye, ee)) = e.y_approx(p.f.0) {
        if let Some(o) = filtered(ye, ee, p.f.1, 2.0 * f64::EPSILON * p.f.1.abs()) {
            return o;
        }
    }
    let p = p.v;
    (e.ynum(&p.x) * p.y.denom()).cmp(&(p.y.numer() * &e.b * p.x.denom()))
}

/// Lexicographic comparison of points with rounded coordinates.
fn cmp_points(p: &Point, pf: (f64, f64), q: &Point, qf: (f64, f64)) -> Ordering {
    let e = |a: f64, b: f64| 2.0 * f64::EPSILON * (a.abs() + b.abs());
    let ox = filtered(pf.0, 0.0, qf.0, e(pf.0, qf.0));
    match ox {
        Some(o) => o,
        None => match p.x.cmp(&q.x) {
            Ordering::Equal => filtered(pf.1, 0.0, qf.1, e(pf.1, qf.1)).unwrap_or_else(|| p.y.cmp(&q.y)),
            o => o,
        },
    }
}

fn y_at(e: &ILine, x: &Rational) -> Rational {
    Rational::new(e.ynum(x), &e.b * x.denom())
}

fn angle_key(u: &[BigInt; 2]) -> bool {
    u[1].is_positive() || (u[1].is_zero() && u[0].is_positive())
}

fn cross_big(u: &[BigInt; 2], w: &[BigInt; 2]) -> BigInt {
    &u[0] * &w[1] - &u[1] * &w[0]
}

fn angle_cmp_big(u: &[BigInt; 2], w: &[BigInt; 2]) -> Ordering {
    let (hu, hw) = (angle_key(u), angle_key(w));
    if hu != hw {
        return if hu { Ordering::Less } else { Ordering::Greater };
    }
    // u before w when w is counterclockwise of u
    BigInt::zero().cmp(&cross_big(u, w))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Boundary {
    Edge(usize),
    Vertex(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LocateResult {
    pub face: usize,
    pub on_boundary: Option<Boundary>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SubdivisionStats {
    pub vertices: usize,
    pub edges: usize,
    pub faces: usize,
    pub boundary_segments: usize,
}

#[derive(Clone, Debug)]
struct EdgeRec {
    a: usize,
    b: usize,
    line: usize,
}

#[derive(Clone, Debug)]
pub struct Subdivision {
    vertices: Vec<Point>,
    real_vertices: usize,
    lines: Vec<ILine>,
    edges: Vec<EdgeRec>,
    real_edges: usize,
    /// Face to the left of each half-edge (`2e` runs `a -> b`).
    he_face: Vec<usize>,
    face_count: usize,
    /// One boundary half-edge of each face's outer cycle.
    face_he: Vec<usize>,
    /// Next half-edge around the same face.
    next: Vec<usize>,
    xs: Vec<Rational>,
    roots: Vec<u32>,
    treap: Treap,
    /// Vertical edges by the index of their x in `xs`.
    verticals: HashMap<usize, Vec<usize>>,
    vertex_index: HashMap<Point, usize>,
    bbox: [Rational; 4],
    /// Unbounded edges: (edge, vertex on the box).
    tails: Vec<(usize, usize)>,
    reps: Vec<Point>,
}

const EXTERIOR: usize = usize::MAX;

/// Builds the arrangement of `curves`. Duplicate and overlapping curves
/// on a common line are merged.
pub fn build_arrangement(curves: &[Curve]) -> Subdivision {
    build_arrangement_with(curves, &[])
}

/// As [`build_arrangement`], with the clipping box also covering `extra`.
pub fn build_arrangement_with(curves: &[Curve], extra: &[Point]) -> Subdivision {
    // group by supporting line and merge intervals
    let mut line_ids: HashMap<Line, usize> = HashMap::new();
    let mut rlines: Vec<Line> = Vec::new();
    let mut ivals: Vec<Vec<(Option<Rational>, Option<Rational>)>> = Vec::new();
    for c in curves {
        let Some(l) = c.line() else { continue };
        let id = *line_ids.entry(l.clone()).or_insert_with(|| {
            rlines.push(l.clone());
            ivals.push(Vec::new());
            rlines.len() - 1
        });
        ivals[id].push(c.interval(&l));
    }
    for iv in ivals.iter_mut() {
        *iv = merge_intervals(std::mem::take(iv));
    }
    let mut lines: Vec<ILine> = rlines.iter().map(ILine::from_line).collect();
    let nl = lines.len();

    let mut vertices: Vec<Point> = Vec::new();
    let mut vertex_index: HashMap<Point, usize> = HashMap::new();
    let mut on_line: Vec<Vec<(Rational, usize)>> = vec![Vec::new(); nl];
    let mut add_vertex = |p: Point, vs: &mut Vec<Point>| -> usize {
        *vertex_index.entry(p.clone()).or_insert_with(|| {
            vs.push(p);
            vs.len() - 1
        })
    };
    let fivals: Vec<Vec<(f64, f64)>> = ivals
        .iter()
        .map(|iv| {
            iv.iter()
                .map(|(lo, hi)| {
                    (
                        lo.as_ref().map_or(f64::NEG_INFINITY, to_f64),
                        hi.as_ref().map_or(f64::INFINITY, to_f64),
                    )
                })
                .collect()
        })
        .collect();
    // rounded bounding boxes of bounded pieces, to skip far pairs
    let mut extent: Vec<Option<[f64; 4]>> = vec![Some([f64::INFINITY, -f64::INFINITY, f64::INFINITY, -f64::INFINITY]); nl];
    for (li, iv) in ivals.iter().enumerate() {
        for (lo, hi) in iv {
            if lo.is_none() || hi.is_none() {
                extent[li] = None;
            }
            for t in [lo, hi].into_iter().flatten() {
                let p = rlines[li].at_param(t);
                if let Some(b) = &mut extent[li] {
                    let (x, y) = p.to_f64();
                    *b = [b[0].min(x), b[1].max(x), b[2].min(y), b[3].max(y)];
                }
                let v = add_vertex(p, &mut vertices);
                on_line[li].push((t.clone(), v));
            }
        }
    }
    let hits: Vec<Vec<(usize, Point, Rational, Rational)>> = (0..nl)
        .into_par_iter()
        .map(|i| {
            (i + 1..nl)
                .filter_map(|j| {
                    let apart = match (&extent[i], &extent[j]) {
                        (Some(a), Some(b)) => boxes_apart(a, b) || box_beside(a, &lines[j]) || box_beside(b, &lines[i]),
                        (Some(a), None) => box_beside(a, &lines[j]),
                        (None, Some(b)) => box_beside(b, &lines[i]),
                        (None, None) => false,
                    } || meets_outside(&lines[i], &fivals[i], &lines[j], &fivals[j]);
                    if apart {
                        return None;
                    }
                    let p = lines[i].meet(&lines[j])?;
                    let (ti, tj) = (lines[i].param(&p), lines[j].param(&p));
                    (in_intervals(&ivals[i], &ti) && in_intervals(&ivals[j], &tj)).then_some((j, p, ti, tj))
                })
                .collect()
        })
        .collect();
    for (i, list) in hits.into_iter().enumerate() {
        for (j, p, ti, tj) in list {
            let v = add_vertex(p, &mut vertices);
            on_line[i].push((ti, v));
            on_line[j].push((tj, v));
        }
    }
    let real_vertices = vertices.len();

    // clipping box
    let mut pts: Vec<&Point> = vertices.iter().chain(extra.iter()).collect();
    let anchors: Vec<Point> = rlines.iter().map(|l| l.anchor()).collect();
    pts.extend(anchors.iter());
    let bbox = clip_box(&pts);
    let [x0, x1, y0, y1] = bbox.clone();

    // real edges
    let mut edges: Vec<EdgeRec> = Vec::new();
    let mut tails: Vec<(usize, usize)> = Vec::new();
    for li in 0..nl {
        let list = &mut on_line[li];
        list.sort_by(|a, b| a.0.cmp(&b.0));
        list.dedup_by(|a, b| a.1 == b.1);
        let (tmin, tmax) = clip_range(&rlines[li], &bbox);
        for (lo, hi) in &ivals[li] {
            let mut chain: Vec<usize> = Vec::new();
            let mut clip_lo = None;
            let mut clip_hi = None;
            if lo.is_none() {
                let v = add_vertex(rlines[li].at_param(&tmin), &mut vertices);
                chain.push(v);
                clip_lo = Some(v);
            }
            for (t, v) in list.iter() {
                let above = lo.as_ref().is_none_or(|l| t >= l);
                let below = hi.as_ref().is_none_or(|h| t <= h);
                if above && below {
                    chain.push(*v);
                }
            }
            if hi.is_none() {
                let v = add_vertex(rlines[li].at_param(&tmax), &mut vertices);
                chain.push(v);
                clip_hi = Some(v);
            }
            for w in chain.windows(2) {
                edges.push(EdgeRec {
                    a: w[0],
                    b: w[1],
                    line: li,
                });
                let e = edges.len() - 1;
                if Some(w[0]) == clip_lo {
                    tails.push((e, w[0]));
                }
                if Some(w[1]) == clip_hi {
                    tails.push((e, w[1]));
                }
            }
        }
    }
    let real_edges = edges.len();

    // box edges: corners plus every clip vertex, side by side
    for c in [
        Point::new(x0.clone(), y0.clone()),
        Point::new(x1.clone(), y0.clone()),
        Point::new(x1.clone(), y1.clone()),
        Point::new(x0.clone(), y1.clone()),
    ] {
        add_vertex(c, &mut vertices);
    }
    let box_lines = [
        Line::new(Rational::zero(), Rational::one(), y0.clone()).unwrap(),
        Line::new(Rational::one(), Rational::zero(), x1.clone()).unwrap(),
        Line::new(Rational::zero(), Rational::one(), y1.clone()).unwrap(),
        Line::new(Rational::one(), Rational::zero(), x0.clone()).unwrap(),
    ];
    for bl in &box_lines {
        lines.push(ILine::from_line(bl));
        let li = lines.len() - 1;
        let mut on: Vec<(Rational, usize)> = (real_vertices..vertices.len())
            .filter(|&v| bl.contains(&vertices[v]))
            .map(|v| (bl.param(&vertices[v]), v))
            .collect();
        on.sort();
        for w in on.windows(2) {
            edges.push(EdgeRec {
                a: w[0].1,
                b: w[1].1,
                line: li,
            });
        }
    }

    Subdivision::assemble(
        vertices,
        real_vertices,
        lines,
        edges,
        real_edges,
        vertex_index,
        bbox,
        tails,
    )
}

fn boxes_apart(a: &[f64; 4], b: &[f64; 4]) -> bool {
    let tol = 1e-9 * (1.0 + a.iter().chain(b).fold(0.0f64, |m, v| m.max(v.abs())));
    a[1] + tol < b[0] || b[1] + tol < a[0] || a[3] + tol < b[2] || b[3] + tol < a[2]
}

/// The rounded crossing point of two lines is clearly outside the
/// parameter intervals of one of them.
#[allow(clippy::neg_cmp_op_on_partial_ord)] // NaN must take the exact path
fn meets_outside(l: &ILine, li: &[(f64, f64)], m: &ILine, mi: &[(f64, f64)]) -> bool {
    let ([a1, b1, c1], [a2, b2, c2]) = (l.f, m.f);
    let (d1, d2) = (a1 * b2, a2 * b1);
    let det = d1 - d2;
    if !(det.abs() > 1e-6 * (d1.abs() + d2.abs())) {
        return false;
    }
    let (x1, x2) = (c1 * b2, c2 * b1);
    let (y1, y2) = (a1 * c2, a2 * c1);
    let x = (x1 - x2) / det;
    let y = (y1 - y2) / det;
    let tx = 1e-6 * (x1.abs() + x2.abs()) / det.abs();
    let ty = 1e-6 * (y1.abs() + y2.abs()) / det.abs();
    let outside = |line: &ILine, iv: &[(f64, f64)]| {
        let (t, tol) = if line.vertical() { (y, ty) } else { (x, tx) };
        t.is_finite()
            && tol.is_finite()
            && iv.iter().all(|&(lo, hi)| {
                let mag = |v: f64| if v.is_finite() { v.abs() } else { 0.0 };
                let slack = tol + 1e-12 * (mag(lo) + mag(hi));
                t < lo - slack || t > hi + slack
            })
    };
    outside(l, li) || outside(m, mi)
}

/// The box lies strictly on one side of the line.
fn box_beside(bx: &[f64; 4], l: &ILine) -> bool {
    let [a, b, c] = l.f;
    let mut sides = [bx[0], bx[1]]
        .into_iter()
        .flat_map(|x| [bx[2], bx[3]].map(|y| (x, y)))
        .map(|(x, y)| {
            let v = a * x + b * y - c;
            let tol = 1e-9 * ((a * x).abs() + (b * y).abs() + c.abs());
            if v > tol {
                1
            } else if v < -tol {
                -1
            } else {
                0
            }
        });
    let first = sides.next().unwrap_or(0);
    first != 0 && sides.all(|s| s == first)
}

fn merge_intervals(
    mut v: Vec<(Option<Rational>, Option<Rational>)>,
) -> Vec<(Option<Rational>, Option<Rational>)> {
    v.sort_by(|a, b| match (&a.0, &b.0) {
        (None, None) => Ordering::Equal,
        (None, _) => Ordering::Less,
        (_, None) => Ordering::Greater,
        (Some(x), Some(y)) => x.cmp(y),
    });
    let mut out: Vec<(Option<Rational>, Option<Rational>)> = Vec::new();
    for (lo, hi) in v {
        if let Some(last) = out.last_mut() {
            let touches = match (&last.1, &lo) {
                (None, _) | (_, None) => true,
                (Some(h), Some(l)) => l <= h,
            };
            if touches {
                last.1 = match (&last.1, &hi) {
                    (None, _) | (_, None) => None,
                    (Some(a), Some(b)) => Some(a.max(b).clone()),
                };
                continue;
            }
        }
        out.push((lo, hi));
    }
    out
}

fn in_intervals(iv: &[(Option<Rational>, Option<Rational>)], t: &Rational) -> bool {
    // last interval whose lower bound is <= t
    let k = iv.partition_point(|(lo, _)| lo.as_ref().is_none_or(|l| l <= t));
    k > 0 && iv[k - 1].1.as_ref().is_none_or(|h| t <= h)
}

/// `[xmin, xmax, ymin, ymax]`, padded by the larger side length.
fn clip_box(pts: &[&Point]) -> [Rational; 4] {
    if pts.is_empty() {
        let one = Rational::one();
        return [-one.clone(), one.clone(), -one.clone(), one];
    }
    let mut b = [
        pts[0].x.clone(),
        pts[0].x.clone(),
        pts[0].y.clone(),
        pts[0].y.clone(),
    ];
    for p in pts {
        if p.x < b[0] {
            b[0] = p.x.clone();
        }
        if p.x > b[1] {
            b[1] = p.x.clone();
        }
        if p.y < b[2] {
            b[2] = p.y.clone();
        }
        if p.y > b[3] {
            b[3] = p.y.clone();
        }
    }
    let w = (&b[1] - &b[0]).max(&b[3] - &b[2]).max(Rational::one());
    // round outward to integers to keep box coordinates small
    let m = w.ceil();
    [
        (&b[0] - &m).floor(),
        (&b[1] + &m).ceil(),
        (&b[2] - &m).floor(),
        (&b[3] + &m).ceil(),
    ]
}

/// Parameter range of `line` inside the box.
fn clip_range(line: &Line, bx: &[Rational; 4]) -> (Rational, Rational) {
    let [x0, x1, y0, y1] = bx;
    if line.is_vertical() {
        return (y0.clone(), y1.clone());
    }
    if line.a.is_zero() {
        return (x0.clone(), x1.clone());
    }
    // x where y = y0 and y = y1
    let xa = (&line.c - &line.b * y0) / &line.a;
    let xb = (&line.c - &line.b * y1) / &line.a;
    let (lo, hi) = if xa <= xb { (xa, xb) } else { (xb, xa) };
    (lo.max(x0.clone()), hi.min(x1.clone()))
}

impl Subdivision {
    #[allow(clippy::too_many_arguments)]
    fn assemble(
        vertices: Vec<Point>,
        real_vertices: usize,
        lines: Vec<ILine>,
        edges: Vec<EdgeRec>,
        real_edges: usize,
        vertex_index: HashMap<Point, usize>,
        bbox: [Rational; 4],
        tails: Vec<(usize, usize)>,
    ) -> Subdivision {
        let nv = vertices.len();
        let nh = 2 * edges.len();
        let tail = |h: usize| if h.is_multiple_of(2) { edges[h / 2].a } else { edges[h / 2].b };
        let head = |h: usize| tail(h ^ 1);
        let dir = |h: usize| -> [BigInt; 2] {
            let e = &edges[h / 2];
            let l = &lines[e.line];
            let d = l.dir_plus();
            let forward = l.param(&vertices[head(h)]) > l.param(&vertices[tail(h)]);
            if forward {
                d
            } else {
                [-d[0].clone(), -d[1].clone()]
            }
        };
        let mut out: Vec<Vec<usize>> = vec![Vec::new(); nv];
        for h in 0..nh {
            out[tail(h)].push(h);
        }
        let mut pos = vec![0usize; nh];
        for list in out.iter_mut() {
            let dirs: HashMap<usize, [BigInt; 2]> = list.iter().map(|&h| (h, dir(h))).collect();
            list.sort_by(|&g, &h| angle_cmp_big(&dirs[&g], &dirs[&h]));
            for (k, &h) in list.iter().enumerate() {
                pos[h] = k;
            }
        }
        let mut next = vec![0usize; nh];
        for h in 0..nh {
            let t = h ^ 1;
            let list = &out[head(h)];
            let k = pos[t];
            next[h] = list[(k + list.len() - 1) % list.len()];
        }

        // cycles and their orientation; the turn at the lowest-leftmost vertex
        // decides it unless the cycle pinches there
        let vf: Vec<(f64, f64)> = vertices.iter().map(|p| p.to_f64()).collect();
        let lex = |u: usize, w: usize| cmp_points(&vertices[u], vf[u], &vertices[w], vf[w]);
        let mut cycle = vec![usize::MAX; nh];
        let mut cycle_start: Vec<usize> = Vec::new();
        let mut cycle_area: Vec<Ordering> = Vec::new();
        let mut cycle_min: Vec<usize> = Vec::new();
        for h0 in 0..nh {
            if cycle[h0] != usize::MAX {
                continue;
            }
            let c = cycle_start.len();
            cycle_start.push(h0);
            let (mut best, mut best_in) = (h0, usize::MAX);
            let mut visits = 1;
            let mut h = h0;
            loop {
                cycle[h] = c;
                let from = h;
                h = next[h];
                if h == h0 {
                    if best_in == usize::MAX {
                        best_in = from;
                    }
                    break;
                }
                let (v, b) = (tail(h), tail(best));
                if v == b {
                    visits += 1;
                } else if lex(v, b) == Ordering::Less {
                    (best, best_in) = (h, from);
                    visits = 1;
                }
            }
            let area = if visits == 1 {
                let (v, p, q) = (tail(best), tail(best_in), head(best));
                let ((vx, vy), (px, py), (qx, qy)) = (vf[v], vf[p], vf[q]);
                let (t1, t2) = ((qx - vx) * (py - vy), (qy - vy) * (px - vx));
                let err = 8.0 * f64::EPSILON * ((qx.abs() + vx.abs()) * (py.abs() + vy.abs()) + (qy.abs() + vy.abs()) * (px.abs() + vx.abs()));
                filtered(t1, 0.0, t2, err).unwrap_or_else(|| {
                    let (v, p, q) = (&vertices[v], &vertices[p], &vertices[q]);
                    let cross = (&q.x - &v.x) * (&p.y - &v.y) - (&q.y - &v.y) * (&p.x - &v.x);
                    cross.cmp(&Rational::zero())
                })
            } else {
                let origin = &vertices[tail(h0)];
                let mut area = Rational::zero();
                let mut h = h0;
                loop {
                    let (p, q) = (&vertices[tail(h)], &vertices[head(h)]);
                    let (px, py) = (&p.x - &origin.x, &p.y - &origin.y);
                    let (qx, qy) = (&q.x - &origin.x, &q.y - &origin.y);
                    area += &px * &qy - &py * &qx;
                    h = next[h];
                    if h == h0 {
                        break;
                    }
                }
                area.cmp(&Rational::zero())
            };
            cycle_area.push(area);
            cycle_min.push(tail(best));
        }

        // exterior: the box traversed clockwise, e.g. up the left side
        let corner = vertex_index[&Point::new(bbox[0].clone(), bbox[2].clone())];
        let up = out[corner]
            .iter()
            .copied()
            .find(|&h| vertices[head(h)].x == bbox[0])
            .expect("box corner has a left-side edge");
        let exterior = cycle[up];

        let mut cycle_face = vec![usize::MAX; cycle_start.len()];
        let mut face_he = Vec::new();
        for (c, &h) in cycle_start.iter().enumerate() {
            if c != exterior && cycle_area[c] == Ordering::Greater {
                cycle_face[c] = face_he.len();
                face_he.push(h);
            }
        }
        cycle_face[exterior] = EXTERIOR;
        let mut holes: Vec<(usize, usize)> = (0..cycle_start.len())
            .filter(|&c| c != exterior && cycle_face[c] == usize::MAX)
            .map(|c| (c, cycle_min[c]))
            .collect();
        holes.sort_by(|a, b| lex(a.1, b.1));

        // slab structure over non-vertical edges
        let mut xs: Vec<Rational> = vertices.iter().map(|p| p.x.clone()).collect();
        xs.sort();
        xs.dedup();
        let xi = |x: &Rational| xs.binary_search(x).expect("vertex x is indexed");
        let mut starts: Vec<Vec<usize>> = vec![Vec::new(); xs.len()];
        let mut ends: Vec<Vec<usize>> = vec![Vec::new(); xs.len()];
        let mut verticals: HashMap<usize, Vec<usize>> = HashMap::new();
        for (e, rec) in edges.iter().enumerate() {
            let (pa, pb) = (&vertices[rec.a], &vertices[rec.b]);
            if lines[rec.line].vertical() {
                verticals.entry(xi(&pa.x)).or_default().push(e);
                continue;
            }
            let (l, r) = if pa.x < pb.x { (pa, pb) } else { (pb, pa) };
            starts[xi(&l.x)].push(e);
            ends[xi(&r.x)].push(e);
        }
        let mut treap = Treap::new();
        let mut roots = Vec::with_capacity(xs.len());
        let mut root = NIL;
        for i in 0..xs.len() {
            if i > 0 {
                let xm = (&xs[i - 1] + &xs[i]) / Rational::from_integer(2.into());
                let xm = approx_x(&xm);
                for &e in &ends[i] {
                    let le = &lines[edges[e].line];
                    root = treap.remove(root, |x| cmp_lines_at(&lines[edges[x as usize].line], le, &xm));
                }
            }
            if i + 1 < xs.len() {
                let xm = (&xs[i] + &xs[i + 1]) / Rational::from_integer(2.into());
                let xm = approx_x(&xm);
                for &e in &starts[i] {
                    let le = &lines[edges[e].line];
                    root = treap.insert(root, e as u32, |x| {
                        cmp_lines_at(&lines[edges[x as usize].line], le, &xm)
                    });
                }
            }
            roots.push(root);
        }

        let mut sub = Subdivision {
            vertices,
            real_vertices,
            lines,
            edges,
            real_edges,
            he_face: vec![usize::MAX; nh],
            face_count: face_he.len(),
            face_he,
            next,
            xs,
            roots,
            treap,
            verticals,
            vertex_index,
            bbox,
            tails,
            reps: Vec::new(),
        };

        // holes: resolve in order of their lowest-leftmost vertex
        for (c, v) in holes {
            let p = sub.vertices[v].clone();
            let i = sub.xs.binary_search(&p.x).unwrap();
            let p = approx_point(&p);
            let above = sub
                .treap
                .first_where(sub.roots[i - 1], |x| {
                    cmp_line_point(&sub.lines[sub.edges[x as usize].line], &p) == Ordering::Greater
                })
                .expect("the box top lies above every hole") as usize;
            let below_he = sub.he_going_left(above);
            let owner = cycle_face[cycle[below_he]];
            debug_assert!(owner != usize::MAX);
            cycle_face[c] = owner;
        }
        for h in 0..nh {
            sub.he_face[h] = cycle_face[cycle[h]];
        }
        sub.reps = (0..sub.face_count).map(|f| sub.compute_rep(f)).collect();
        sub
    }

    fn tail(&self, h: usize) -> usize {
        if h.is_multiple_of(2) {
            self.edges[h / 2].a
        } else {
            self.edges[h / 2].b
        }
    }

    fn head(&self, h: usize) -> usize {
        self.tail(h ^ 1)
    }

    /// Half-edge of non-vertical edge `e` pointing towards smaller x; the
    /// region below `e` lies on its left.
    fn he_going_left(&self, e: usize) -> usize {
        let rec = &self.edges[e];
        if self.vertices[rec.a].x > self.vertices[rec.b].x {
            2 * e
        } else {
            2 * e + 1
        }
    }

    fn face_below(&self, e: usize) -> usize {
        self.he_face[self.he_going_left(e)]
    }

    fn face_above(&self, e: usize) -> usize {
        self.he_face[self.he_going_left(e) ^ 1]
    }

    fn is_vertical(&self, e: usize) -> bool {
        self.lines[self.edges[e].line].vertical()
    }

    pub fn stats(&self) -> SubdivisionStats {
        SubdivisionStats {
            vertices: self.real_vertices,
            edges: self.real_edges,
            faces: self.face_count,
            boundary_segments: self.real_edges,
        }
    }

    pub fn face_count(&self) -> usize {
        self.face_count
    }

    pub fn edge_count(&self) -> usize {
        self.real_edges
    }

    pub fn vertex_count(&self) -> usize {
        self.real_vertices
    }

    pub fn vertex(&self, v: usize) -> &Point {
        &self.vertices[v]
    }

    /// Endpoints of real edge `e`; unbounded edges end on the clipping box.
    pub fn edge_endpoints(&self, e: usize) -> (&Point, &Point) {
        let rec = &self.edges[e];
        (&self.vertices[rec.a], &self.vertices[rec.b])
    }

    pub fn edge_is_unbounded(&self, e: usize) -> bool {
        self.tails.iter().any(|&(t, _)| t == e)
    }

    /// Faces on the two sides of real edge `e`.
    pub fn edge_faces(&self, e: usize) -> (usize, usize) {
        (self.he_face[2 * e], self.he_face[2 * e + 1])
    }

    /// A point strictly inside face `f`.
    pub fn representative(&self, f: usize) -> &Point {
        &self.reps[f]
    }

    /// Total nodes in the persistent slab structure.
    pub fn location_nodes(&self) -> usize {
        self.treap.node_count()
    }

    /// Number of components of the edge graph, counting all unbounded
    /// edges as attached to one vertex at infinity.
    pub fn components(&self) -> usize {
        let inf = self.vertices.len();
        let mut parent: Vec<usize> = (0..=inf).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            let mut y = x;
            while p[y] != r {
                let n = p[y];
                p[y] = r;
                y = n;
            }
            r
        }
        let unite = |a: usize, b: usize, p: &mut Vec<usize>| {
            let (ra, rb) = (find(p, a), find(p, b));
            if ra != rb {
                p[ra] = rb;
            }
        };
        for e in 0..self.real_edges {
            let rec = &self.edges[e];
            unite(rec.a, rec.b, &mut parent);
        }
        for &(_, v) in &self.tails {
            unite(v, inf, &mut parent);
        }
        let mut used = vec![false; inf + 1];
        for e in 0..self.real_edges {
            used[self.edges[e].a] = true;
            used[self.edges[e].b] = true;
        }
        if !self.tails.is_empty() {
            used[inf] = true;
        }
        let mut roots: Vec<usize> = (0..=inf)
            .filter(|&v| used[v])
            .map(|v| find(&mut parent, v))
            .collect();
        roots.sort();
        roots.dedup();
        roots.len()
    }

    /// True when the vertex at infinity is needed (some edge is unbounded).
    pub fn has_unbounded(&self) -> bool {
        !self.tails.is_empty()
    }

    fn inside_box(&self, p: &Point) -> bool {
        let [x0, x1, y0, y1] = &self.bbox;
        &p.x > x0 && &p.x < x1 && &p.y > y0 && &p.y < y1
    }

    pub fn locate(&self, p: &Point) -> LocateResult {
        if !self.inside_box(p) {
            return self.locate_far(p);
        }
        if let Some(&v) = self.vertex_index.get(p) {
            return LocateResult {
                face: self.vertex_min_face(v),
                on_boundary: Some(Boundary::Vertex(v)),
            };
        }
        let (slab, exact) = match self.xs.binary_search(&p.x) {
            Ok(i) => (i, true),
            Err(i) => (i - 1, false),
        };
        if exact {
            if let Some(list) = self.verticals.get(&slab) {
                for &e in list {
                    let (a, b) = self.edge_endpoints(e);
                    let (lo, hi) = if a.y < b.y { (&a.y, &b.y) } else { (&b.y, &a.y) };
                    if &p.y > lo && &p.y < hi {
                        return self.on_edge(e);
                    }
                }
            }
        }
        let pa = approx_point(p);
        let e = self
            .treap
            .first_where(self.roots[slab], |x| {
                cmp_line_point(&self.lines[self.edges[x as usize].line], &pa) != Ordering::Less
            })
            .expect("the box top lies above every interior point") as usize;
        if cmp_line_point(&self.lines[self.edges[e].line], &pa) == Ordering::Equal {
            return self.on_edge(e);
        }
        LocateResult {
            face: self.face_below(e),
            on_boundary: None,
        }
    }

    fn on_edge(&self, e: usize) -> LocateResult {
        let (l, r) = self.edge_faces(e);
        LocateResult {
            face: l.min(r),
            on_boundary: Some(Boundary::Edge(e)),
        }
    }

    fn vertex_min_face(&self, v: usize) -> usize {
        (0..self.edges.len())
            .flat_map(|e| [2 * e, 2 * e + 1])
            .filter(|&h| self.tail(h) == v)
            .map(|h| self.he_face[h])
            .min()
            .unwrap_or(0)
    }

    /// Locates a point outside (or on) the clipping box by walking from
    /// the box towards it across the tails of unbounded edges.
    fn locate_far(&self, p: &Point) -> LocateResult {
        if let Some(&v) = self.vertex_index.get(p) {
            // a clip vertex or a box corner
            if let Some(&(e, _)) = self.tails.iter().find(|t| t.1 == v) {
                return self.on_edge(e);
            }
            let e = (self.real_edges..self.edges.len())
                .find(|&e| self.edges[e].a == v || self.edges[e].b == v)
                .unwrap();
            let (f, g) = (self.he_face[2 * e], self.he_face[2 * e + 1]);
            return LocateResult {
                face: f.min(g),
                on_boundary: None,
            };
        }
        let [x0, x1, y0, y1] = &self.bbox;
        let two = Rational::from_integer(2.into());
        let cx = (x0 + x1) / &two;
        let cy = (y0 + y1) / &two;
        for k in 0i64.. {
            // aim at a point near the centre, moved off any degeneracy
            let c = Point::new(
                &cx + (x1 - x0) * Rational::new(k.into(), 97.into()) / &two,
                &cy + (y1 - y0) * Rational::new((k * k).into(), 89.into()) / &two,
            );
            if let Some(r) = self.walk_in(p, &c) {
                return r;
            }
        }
        unreachable!()
    }

    fn walk_in(&self, p: &Point, c: &Point) -> Option<LocateResult> {
        // entry point q of the segment p -> c into the box
        let q = self.box_entry(p, c)?;
        if self.vertex_index.contains_key(&q) {
            return None;
        }
        let mut crossings: Vec<(Rational, usize)> = Vec::new();
        for &(e, v) in &self.tails {
            let w = &self.vertices[v];
            let (a, b) = self.edge_endpoints(e);
            let inner = if a == w { b } else { a };
            let (dx, dy) = w.sub(inner);
            // tail: w + s (dx, dy), s >= 0; path: q + t (p - q), t in [0, 1]
            let (ex, ey) = p.sub(&q);
            let den = &dx * &ey - &dy * &ex;
            let (wx, wy) = q.sub(w);
            if den.is_zero() {
                // parallel paths meet a tail only at q, which is retried
                continue;
            }
            // solve w + s d = q + t e
            let s = (&ex * &wy - &ey * &wx) / &den * Rational::from_integer((-1).into());
            let t = (&dx * &wy - &dy * &wx) / &den * Rational::from_integer((-1).into());
            if s.is_negative() || t.is_negative() || t > Rational::one() {
                continue;
            }
            if t == Rational::one() {
                return Some(self.on_edge(e));
            }
            crossings.push((t, e));
        }
        let mut face = self.box_face_at(&q)?;
        crossings.sort_by(|a, b| a.0.cmp(&b.0));
        for w in crossings.windows(2) {
            if w[0].0 == w[1].0 {
                return None;
            }
        }
        for (_, e) in crossings {
            let (l, r) = self.edge_faces(e);
            face = if face == l { r } else { l };
        }
        Some(LocateResult {
            face,
            on_boundary: None,
        })
    }

    fn box_entry(&self, p: &Point, c: &Point) -> Option<Point> {
        if !self.inside_box(p) {
            let [x0, x1, y0, y1] = &self.bbox;
            let (dx, dy) = c.sub(p);
            let mut t_in = Rational::zero();
            for (pc, dc, lo, hi) in [(&p.x, &dx, x0, x1), (&p.y, &dy, y0, y1)] {
                if dc.is_zero() {
                    continue;
                }
                let t1 = (lo - pc) / dc;
                let t2 = (hi - pc) / dc;
                let enter = t1.min(t2);
                if enter > t_in {
                    t_in = enter;
                }
            }
            Some(p.offset(&dx, &dy, &t_in))
        } else {
            Some(p.clone())
        }
    }

    /// Face just inside the box at boundary point `q` (not a box vertex).
    fn box_face_at(&self, q: &Point) -> Option<usize> {
        for e in self.real_edges..self.edges.len() {
            let (a, b) = self.edge_endpoints(e);
            let l = &self.lines[self.edges[e].line];
            let on = if l.vertical() {
                q.x == a.x && q.y > a.y.clone().min(b.y.clone()) && q.y < a.y.clone().max(b.y.clone())
            } else {
                q.y == a.y && q.x > a.x.clone().min(b.x.clone()) && q.x < a.x.clone().max(b.x.clone())
            };
            if on {
                let (f, g) = (self.he_face[2 * e], self.he_face[2 * e + 1]);
                return Some(if f == EXTERIOR { g } else { f });
            }
        }
        None
    }

    /// Representative: inside the trapezoid next to a non-vertical
    /// boundary edge, with coordinates as simple as possible.
    fn compute_rep(&self, f: usize) -> Point {
        let (e, slab) = self.face_anchor(f, 0);
        self.trapezoid_point(f, e, slab, None::<&mut rand_chacha::ChaCha8Rng>)
    }

    /// The `k`-th (cyclically) non-vertical boundary edge of `f`'s outer
    /// cycle and the first slab it spans.
    fn face_anchor(&self, f: usize, k: usize) -> (usize, usize) {
        let h0 = self.face_he[f];
        let mut cands = Vec::new();
        let mut h = h0;
        loop {
            if !self.is_vertical(h / 2) {
                cands.push(h / 2);
            }
            h = self.next[h];
            if h == h0 {
                break;
            }
        }
        let e = cands[k % cands.len()];
        let (a, b) = self.edge_endpoints(e);
        let lx = a.x.clone().min(b.x.clone());
        (e, self.xs.binary_search(&lx).unwrap())
    }

    fn trapezoid_point<R: Rng>(&self, f: usize, e: usize, slab: usize, rng: Option<&mut R>) -> Point {
        let (lo, hi) = (&self.xs[slab], &self.xs[slab + 1]);
        let le = &self.lines[self.edges[e].line];
        let up = self.face_above(e) == f;
        let (x, pick) = match rng {
            None => (simplest_between(lo, hi), None),
            Some(r) => {
                let k: i64 = r.gen_range(1..1024);
                let j: i64 = r.gen_range(1..1024);
                (lo + (hi - lo) * Rational::new(k.into(), 1024.into()), Some(j))
            }
        };
        let xm = (lo + hi) / Rational::from_integer(2.into());
        let xm = approx_x(&xm);
        let root = self.roots[slab];
        let nb = if up {
            self.treap.first_where(root, |t| {
                cmp_lines_at(&self.lines[self.edges[t as usize].line], le, &xm) == Ordering::Greater
            })
        } else {
            self.treap.last_where_not(root, |t| {
                cmp_lines_at(&self.lines[self.edges[t as usize].line], le, &xm) != Ordering::Less
            })
        }
        .expect("box edges bound every trapezoid") as usize;
        let ya = y_at(le, &x);
        let yb = y_at(&self.lines[self.edges[nb].line], &x);
        let (ylo, yhi) = if ya < yb { (ya, yb) } else { (yb, ya) };
        let y = match pick {
            None => simplest_between(&ylo, &yhi),
            Some(j) => &ylo + (&yhi - &ylo) * Rational::new(j.into(), 1024.into()),
        };
        Point::new(x, y)
    }

    /// A random point strictly inside face `f`.
    pub fn sample_in_face<R: Rng>(&self, f: usize, rng: &mut R) -> Point {
        let k = rng.gen_range(0..1usize << 20);
        let (e, first) = self.face_anchor(f, k);
        let (a, b) = self.edge_endpoints(e);
        let rx = a.x.clone().max(b.x.clone());
        let last = self.xs.binary_search(&rx).unwrap();
        let slab = rng.gen_range(first..last);
        self.trapezoid_point(f, e, slab, Some(rng))
    }

    /// Real boundary edges of face `f` (outer cycle and holes).
    pub fn face_edges(&self, f: usize) -> Vec<usize> {
        let mut out: Vec<usize> = (0..self.real_edges)
            .filter(|&e| self.he_face[2 * e] == f || self.he_face[2 * e + 1] == f)
            .collect();
        out.dedup();
        out
    }

    /// Half-edges with `f` on their left, as (tail, head) points.
    pub fn face_boundary(&self, f: usize) -> Vec<(Point, Point)> {
        (0..2 * self.edges.len())
            .filter(|&h| self.he_face[h] == f)
            .map(|h| (self.vertices[self.tail(h)].clone(), self.vertices[self.head(h)].clone()))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::{orientation, rat, ratio, Orientation};
    use rand::SeedableRng;

    fn line(a: i64, b: i64, c: i64) -> Curve {
        Curve::Line(Line::new(rat(a), rat(b), rat(c)).unwrap())
    }

    fn stats4(s: &Subdivision) -> (usize, usize, usize, usize) {
        let st = s.stats();
        (st.vertices, st.edges, st.faces, st.boundary_segments)
    }

    fn euler_holds(s: &Subdivision) -> bool {
        let st = s.stats();
        let inf = usize::from(s.has_unbounded());
        st.vertices + inf + st.faces == st.edges + 1 + s.components()
    }

    #[test]
    fn spec_examples() {
        let two = build_arrangement(&[line(1, 0, 0), line(0, 1, 0)]);
        assert_eq!(stats4(&two), (1, 4, 4, 4));
        let one = build_arrangement(&[line(0, 1, 0)]);
        assert_eq!(stats4(&one), (0, 1, 2, 1));
        let three = build_arrangement(&[line(0, 1, 0), line(1, 0, 0), line(1, 1, 2)]);
        assert_eq!(stats4(&three), (3, 9, 7, 9));
        for s in [&two, &one, &three] {
            assert!(euler_holds(s));
        }
    }

    #[test]
    fn locate_examples() {
        let two = build_arrangement(&[line(1, 0, 0), line(0, 1, 0)]);
        let q = two.locate(&Point::from_ints(1, 1));
        assert_eq!(q.on_boundary, None);
        let r = two.locate(&Point::from_ints(3, 7));
        assert_eq!(q.face, r.face);
        let b = two.locate(&Point::from_ints(0, 5));
        match b.on_boundary {
            Some(Boundary::Edge(e)) => {
                let (a, c) = two.edge_endpoints(e);
                assert!(a.x.is_zero() && c.x.is_zero());
                assert!(a.y.is_positive() || c.y.is_positive());
            }
            other => panic!("expected an edge, got {other:?}"),
        }
        let v = two.locate(&Point::from_ints(0, 0));
        assert_eq!(v.on_boundary, Some(Boundary::Vertex(0)));
        // far away, each quadrant keeps its face
        for (x, y) in [(1, 1), (-1, 1), (-1, -1), (1, -1)] {
            let near = two.locate(&Point::from_ints(x, y)).face;
            let far = two.locate(&Point::from_ints(1000 * x, 37 * y)).face;
            assert_eq!(near, far);
        }
    }

    #[test]
    fn segments_rays_and_holes() {
        // a triangle of segments floating inside a big square of segments
        let seg = |a: (i64, i64), b: (i64, i64)| {
            Curve::Segment(Point::from_ints(a.0, a.1), Point::from_ints(b.0, b.1))
        };
        let curves = vec![
            seg((0, 0), (10, 0)),
            seg((10, 0), (10, 10)),
            seg((10, 10), (0, 10)),
            seg((0, 10), (0, 0)),
            seg((3, 3), (6, 3)),
            seg((6, 3), (4, 6)),
            seg((4, 6), (3, 3)),
        ];
        let s = build_arrangement(&curves);
        assert_eq!(s.stats().faces, 3);
        assert!(euler_holds(&s));
        let inner = s.locate(&Point::new(ratio(9, 2), ratio(4, 1))).face;
        let ring = s.locate(&Point::from_ints(1, 1)).face;
        let ring2 = s.locate(&Point::from_ints(8, 9)).face;
        let outside = s.locate(&Point::from_ints(-5, 3)).face;
        assert_eq!(ring, ring2);
        assert!(inner != ring && ring != outside && inner != outside);
        // a lone segment and a ray
        let t = build_arrangement(&[
            seg((0, 0), (1, 0)),
            Curve::Ray(Ray::new(Point::from_ints(0, 5), rat(1), rat(1)).unwrap()),
        ]);
        assert_eq!(t.stats().faces, 1);
        assert!(euler_holds(&t));
        // overlapping pieces on one line merge
        let u = build_arrangement(&[seg((0, 0), (2, 0)), seg((1, 0), (3, 0)), seg((3, 0), (4, 0))]);
        assert_eq!(stats4(&u), (2, 1, 1, 1));
    }

    /// Point-in-convex-face oracle: `p` is strictly left of every boundary
    /// half-edge of exactly one face.
    fn scan_locate(s: &Subdivision, p: &Point) -> Option<usize> {
        let hits: Vec<usize> = (0..s.face_count())
            .filter(|&f| {
                s.face_boundary(f)
                    .iter()
                    .all(|(a, b)| orientation(a, b, p) == Orientation::CounterClockwise)
            })
            .collect();
        (hits.len() == 1).then(|| hits[0])
    }

    fn generic_lines(seed: u64, g: usize) -> Vec<Curve> {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        (0..g)
            .map(|_| {
                let a = rng.gen_range(-50i64..=50);
                let b = rng.gen_range(1i64..=50);
                let c = rng.gen_range(-500i64..=500);
                line(a, b, c)
            })
            .collect()
    }

    #[test]
    fn locate_matches_linear_scan() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for seed in 0..4 {
            let curves = generic_lines(seed, 7);
            let s = build_arrangement(&curves);
            let mut checked = 0;
            let [x0, x1, y0, y1] = s.bbox.clone();
            for _ in 0..250 {
                let p = Point::new(
                    &x0 + (&x1 - &x0) * ratio(rng.gen_range(-100..1110), 1009),
                    &y0 + (&y1 - &y0) * ratio(rng.gen_range(-100..1110), 1013),
                );
                let r = s.locate(&p);
                if r.on_boundary.is_some() {
                    continue;
                }
                // faces touching the box are clipped, so the convex test
                // applies to every face inside the box
                if s.inside_box(&p) {
                    assert_eq!(Some(r.face), scan_locate(&s, &p), "{p}");
                    checked += 1;
                }
            }
            assert!(checked > 100);
        }
    }

    #[test]
    fn faces_match_sign_vectors_far_and_near() {
        // for full lines a face is exactly a cell of equal side signs
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let curves = generic_lines(21, 6);
        let ls: Vec<Line> = curves.iter().filter_map(|c| c.line()).collect();
        let s = build_arrangement(&curves);
        let mut seen: HashMap<Vec<Ordering>, usize> = HashMap::new();
        for i in 0..600 {
            let scale = if i % 2 == 0 { 1 } else { 1_000_000 };
            let p = Point::new(
                ratio(rng.gen_range(-3000..3000) * scale, 7),
                ratio(rng.gen_range(-3000..3000) * scale, 3),
            );
            let key: Vec<Ordering> = ls.iter().map(|l| l.side(&p)).collect();
            let r = s.locate(&p);
            if key.contains(&Ordering::Equal) {
                assert!(r.on_boundary.is_some());
                continue;
            }
            assert_eq!(r.on_boundary, None);
            assert_eq!(*seen.entry(key).or_insert(r.face), r.face);
        }
        let distinct: std::collections::HashSet<usize> = seen.values().copied().collect();
        assert_eq!(distinct.len(), seen.len());
    }

    #[test]
    fn generic_line_counts_and_representatives() {
        for (seed, g) in [(1, 3), (2, 5), (3, 8)] {
            let curves = generic_lines(seed, g);
            let s = build_arrangement(&curves);
            let st = s.stats();
            let distinct = {
                let mut ls: Vec<Line> = curves.iter().filter_map(|c| c.line()).collect();
                ls.sort();
                ls.dedup();
                ls.len()
            };
            if distinct == g && st.vertices == g * (g - 1) / 2 {
                assert_eq!(st.faces, 1 + g + g * (g - 1) / 2);
                assert_eq!(st.edges, g * g);
            }
            assert!(euler_holds(&s));
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            for f in 0..s.face_count() {
                let r = s.locate(s.representative(f));
                assert_eq!(r, LocateResult { face: f, on_boundary: None });
                let q = s.sample_in_face(f, &mut rng);
                assert_eq!(s.locate(&q).face, f);
            }
        }
    }

    #[test]
    fn input_order_does_not_matter() {
        let curves = generic_lines(9, 6);
        let mut rev = curves.clone();
        rev.reverse();
        let (a, b) = (build_arrangement(&curves), build_arrangement(&rev));
        assert_eq!(a.stats(), b.stats());
        let canon = |s: &Subdivision| {
            let mut v: Vec<Vec<(Point, Point)>> = (0..s.face_count())
                .map(|f| {
                    let mut e = s.face_boundary(f);
                    e.sort();
                    e
                })
                .collect();
            v.sort();
            v
        };
        assert_eq!(canon(&a), canon(&b));
    }
}
