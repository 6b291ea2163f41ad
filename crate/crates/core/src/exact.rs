//! Exact visibility from a viewpoint: a rotational sweep, an independent
//! ray-shooting oracle, single-target visibility, and the endpoint
//! visibility graph.
//!
//! Every routine reframes the scene around the viewpoint on an integer
//! grid and works with exact cross products only.

use std::cmp::Ordering;
use std::collections::BTreeSet;

use rand::Rng;

use crate::error::{Error, Result};
use crate::frame::{self, FrameNum, FramePoints, V};
use crate::kernel::{Point, Rational};
use crate::scene::Scene;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VisibleSet {
    pub viewpoint: Point,
    pub visible: BTreeSet<usize>,
}

impl VisibleSet {
    pub fn count(&self) -> usize {
        self.visible.len()
    }

    pub fn contains(&self, id: usize) -> bool {
        self.visible.contains(&id)
    }
}

/// Ids of the scene segments weakly visible from `p`.
pub fn visible_set(scene: &Scene, p: &Point) -> Result<VisibleSet> {
    let ids = match scene.framed(p) {
        FramePoints::Small(v) => sweep(&v),
        FramePoints::Big(v) => sweep(&v),
    }
    .map_err(|id| Error::ViewpointOnSegment(Box::new(p.clone()), id))?;
    Ok(VisibleSet {
        viewpoint: p.clone(),
        visible: ids,
    })
}

pub fn visibility_count(scene: &Scene, p: &Point) -> Result<usize> {
    Ok(visible_set(scene, p)?.count())
}

/// First segment containing the origin, if any.
fn origin_on_segment<T: FrameNum>(pts: &[V<T>]) -> Option<usize> {
    (0..pts.len() / 2).find(|&i| {
        let (a, b) = (&pts[2 * i], &pts[2 * i + 1]);
        frame::cross_sign(a, b) == 0 && {
            let d = T::dot(&a[0], &a[1], &b[0], &b[1]);
            T::wide_sign(&d) <= 0
        }
    })
}

/// A direction strictly inside the counter-clockwise gap from `u` to `w`.
/// `u == w` (as directions) means the gap is everything but `u`.
fn gap_direction<T: FrameNum>(u: &V<T>, w: &V<T>) -> V<T> {
    match frame::cross_sign(u, w) {
        1 => [u[0].sum(&w[0]), u[1].sum(&w[1])],
        -1 => [u[0].sum(&w[0]).negated(), u[1].sum(&w[1]).negated()],
        _ => {
            let same = T::wide_sign(&T::dot(&u[0], &u[1], &w[0], &w[1])) > 0;
            if same {
                [u[0].negated(), u[1].negated()]
            } else {
                [u[1].negated(), u[0].clone()]
            }
        }
    }
}

/// Squared length comparison of two vectors pointing the same way.
fn nearer<T: FrameNum>(u: &V<T>, w: &V<T>) -> Ordering {
    let du = T::dot(&u[0], &u[1], &u[0], &u[1]);
    let dw = T::dot(&w[0], &w[1], &w[0], &w[1]);
    du.cmp(&dw)
}

/// Distinct endpoint directions around the origin, counter-clockwise,
/// each with the endpoint indices in that direction.
fn direction_groups<T: FrameNum>(pts: &[V<T>]) -> Vec<Vec<usize>> {
    let mut order: Vec<usize> = (0..pts.len()).collect();
    order.sort_by(|&i, &j| frame::angle_cmp(&pts[i], &pts[j]));
    let mut groups: Vec<Vec<usize>> = Vec::new();
    for i in order {
        match groups.last_mut() {
            Some(g) if frame::angle_cmp(&pts[g[0]], &pts[i]) == Ordering::Equal => g.push(i),
            _ => groups.push(vec![i]),
        }
    }
    groups
}

/// Segment `i` seen from the origin, endpoints ordered counter-clockwise.
/// `None` for segments collinear with the origin.
fn oriented<T: FrameNum>(pts: &[V<T>], i: usize) -> Option<(usize, usize)> {
    match frame::cross_sign(&pts[2 * i], &pts[2 * i + 1]) {
        1 => Some((2 * i, 2 * i + 1)),
        -1 => Some((2 * i + 1, 2 * i)),
        _ => None,
    }
}

fn zero<T: FrameNum>(pts: &[V<T>]) -> V<T> {
    [pts[0][0].diff(&pts[0][0]), pts[0][1].diff(&pts[0][1])]
}

/// Radial order of two segments that both cross one ray from the origin
/// and do not cross each other: `Less` means `i` is nearer.
fn front_cmp<T: FrameNum>(pts: &[V<T>], i: usize, j: usize) -> Ordering {
    if i == j {
        return Ordering::Equal;
    }
    let origin = zero(pts);
    let side = |s: usize, q: &V<T>| frame::orient(&pts[2 * s], &pts[2 * s + 1], q);
    let closed_side = |s: usize, t: usize| -> Option<i8> {
        let (a, b) = (side(s, &pts[2 * t]), side(s, &pts[2 * t + 1]));
        if a * b < 0 {
            None
        } else {
            Some(if a != 0 { a } else { b })
        }
    };
    let in_front = |s: usize, t: usize| -> Option<bool> {
        let st = closed_side(s, t)?;
        if st == 0 {
            return None;
        }
        Some(side(s, &origin) == -st)
    };
    let res = match in_front(i, j) {
        Some(f) => Some(f),
        None => in_front(j, i).map(|f| !f),
    };
    match res {
        Some(true) => Ordering::Less,
        Some(false) => Ordering::Greater,
        // Collinear pair: not reachable on valid scenes; keep the order total.
        None => i.cmp(&j),
    }
}

struct Front<'a, T: FrameNum> {
    id: usize,
    pts: &'a [V<T>],
}

impl<T: FrameNum> PartialEq for Front<'_, T> {
    fn eq(&self, o: &Self) -> bool {
        self.id == o.id
    }
}
impl<T: FrameNum> Eq for Front<'_, T> {}
impl<T: FrameNum> PartialOrd for Front<'_, T> {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}
impl<T: FrameNum> Ord for Front<'_, T> {
    fn cmp(&self, o: &Self) -> Ordering {
        front_cmp(self.pts, self.id, o.id)
    }
}

/// Rotational sweep around the origin. `Err(id)` if the origin lies on
/// segment `id`.
fn sweep<T: FrameNum>(pts: &[V<T>]) -> std::result::Result<BTreeSet<usize>, usize> {
    if let Some(id) = origin_on_segment(pts) {
        return Err(id);
    }
    let n = pts.len() / 2;
    let mut visible = BTreeSet::new();
    if n == 0 {
        return Ok(visible);
    }
    let origin = zero(pts);
    let mut groups = direction_groups(pts);
    let d0 = gap_direction(&pts[groups.last().unwrap()[0]], &pts[groups[0][0]]);
    groups.sort_by(|g, h| frame::angle_cmp_from(&d0, &pts[g[0]], &pts[h[0]]));

    let mut active: BTreeSet<Front<T>> = BTreeSet::new();
    for i in 0..n {
        if let Some((s, e)) = oriented(pts, i) {
            if frame::cross_sign(&pts[s], &d0) > 0 && frame::cross_sign(&d0, &pts[e]) > 0 {
                active.insert(Front { id: i, pts });
            }
        }
    }
    if let Some(f) = active.first() {
        visible.insert(f.id);
    }
    for g in &groups {
        let near = *g
            .iter()
            .min_by(|&&a, &&b| nearer(&pts[a], &pts[b]))
            .unwrap();
        let q = &pts[near];
        let seen = match active.first() {
            None => true,
            Some(f) => {
                let (a, b) = (&pts[2 * f.id], &pts[2 * f.id + 1]);
                a == q || b == q || frame::orient(a, b, q) == frame::orient(a, b, &origin)
            }
        };
        if seen {
            for &k in g {
                if &pts[k] == q {
                    visible.insert(k / 2);
                }
            }
        }
        for &k in g {
            if let Some((_, e)) = oriented(pts, k / 2) {
                if e == k {
                    active.remove(&Front { id: k / 2, pts });
                }
            }
        }
        for &k in g {
            if let Some((s, _)) = oriented(pts, k / 2) {
                if s == k {
                    active.insert(Front { id: k / 2, pts });
                }
            }
        }
        if let Some(f) = active.first() {
            visible.insert(f.id);
        }
    }
    Ok(visible)
}

/// Exact check that `p` lies on no segment and on no line through two
/// distinct endpoints.
pub fn check_general_position(scene: &Scene, p: &Point) -> Result<()> {
    match scene.framed(p) {
        FramePoints::Small(v) => general_position_in(&v, p),
        FramePoints::Big(v) => general_position_in(&v, p),
    }
}

pub fn is_general_position(scene: &Scene, p: &Point) -> bool {
    check_general_position(scene, p).is_ok()
}

fn general_position_in<T: FrameNum>(pts: &[V<T>], p: &Point) -> Result<()> {
    if let Some(id) = origin_on_segment(pts) {
        return Err(Error::ViewpointOnSegment(Box::new(p.clone()), id));
    }
    // Fold every direction into the upper half plane; then two distinct
    // endpoints lie on a line through the origin iff their folded
    // directions coincide.
    let dirs: Vec<V<T>> = pts
        .iter()
        .map(|u| {
            let sy = u[1].signum_i8();
            if sy < 0 || (sy == 0 && u[0].signum_i8() < 0) {
                [u[0].negated(), u[1].negated()]
            } else {
                u.clone()
            }
        })
        .collect();
    let mut idx: Vec<usize> = (0..pts.len()).collect();
    idx.sort_by(|&i, &j| frame::angle_cmp(&dirs[i], &dirs[j]));
    for w in idx.windows(2) {
        let (i, j) = (w[0], w[1]);
        if pts[i] != pts[j] && frame::parallel(&dirs[i], &dirs[j]) {
            return Err(Error::NotGeneralPosition {
                point: Box::new(p.clone()),
                reason: format!(
                    "collinear with endpoints of segments {} and {}",
                    i / 2,
                    j / 2
                ),
            });
        }
    }
    Ok(())
}

/// Reference implementation: one ray strictly inside every angular gap
/// between consecutive endpoint directions, plus one ray through every
/// endpoint, each resolved by a linear scan.
pub fn visible_set_oracle(scene: &Scene, p: &Point) -> Result<VisibleSet> {
    check_general_position(scene, p)?;
    let visible = match scene.framed(p) {
        FramePoints::Small(v) => oracle_in(&v),
        FramePoints::Big(v) => oracle_in(&v),
    };
    Ok(VisibleSet {
        viewpoint: p.clone(),
        visible,
    })
}

fn oracle_in<T: FrameNum>(pts: &[V<T>]) -> BTreeSet<usize> {
    let mut visible = BTreeSet::new();
    if pts.is_empty() {
        return visible;
    }
    let mut order: Vec<usize> = (0..pts.len()).collect();
    order.sort_by(|&i, &j| frame::angle_cmp(&pts[i], &pts[j]));
    order.dedup_by(|a, b| frame::angle_cmp(&pts[*a], &pts[*b]) == Ordering::Equal);
    let segs = Segs::new(pts);
    let k = order.len();
    for idx in 0..k {
        let u = &pts[order[idx]];
        let w = &pts[order[(idx + 1) % k]];
        let d = gap_direction(u, w);
        visible.extend(first_hits(&segs, &d));
        visible.extend(first_hits(&segs, u));
    }
    visible
}

/// Framed segments with edge vectors and their f64 images.
struct Segs<'a, T: FrameNum> {
    pts: &'a [V<T>],
    edges: Vec<V<T>>,
    approx: Vec<([f64; 2], [f64; 2])>,
}

impl<'a, T: FrameNum> Segs<'a, T> {
    fn new(pts: &'a [V<T>]) -> Self {
        let edges: Vec<V<T>> = (0..pts.len() / 2).map(|i| frame::vsub(&pts[2 * i + 1], &pts[2 * i])).collect();
        let f = |v: &V<T>| [v[0].to_f64(), v[1].to_f64()];
        let approx = (0..edges.len()).map(|i| (f(&pts[2 * i]), f(&edges[i]))).collect();
        Segs { pts, edges, approx }
    }
}

/// Float cross product with a bound on its error, for inputs each within
/// one rounding of the exact value.
fn cross_f(u: [f64; 2], w: [f64; 2]) -> (f64, f64) {
    let (p, q) = (u[0] * w[1], u[1] * w[0]);
    (p - q, 8.0 * f64::EPSILON * (p.abs() + q.abs()) + f64::MIN_POSITIVE)
}

/// The ray from the origin along `d` certainly misses segment `i`.
fn surely_misses(a: [f64; 2], e: [f64; 2], d: [f64; 2]) -> bool {
    let (den, eden) = cross_f(d, e);
    let (tn, etn) = cross_f(a, e);
    let (un, eun) = cross_f(a, d);
    if !(den.is_finite() && tn.is_finite() && un.is_finite()) || den.abs() <= eden {
        return false;
    }
    let s = den.signum();
    // behind the origin, before the first endpoint, past the second
    (tn * s < -etn) || (un * s < -eun) || ((un - den) * s > 2.0 * (eun + eden))
}

/// All segments at the smallest positive hit parameter along the ray
/// from the origin in direction `d`.
fn first_hits<T: FrameNum>(segs: &Segs<T>, d: &V<T>) -> Vec<usize> {
    let pts = segs.pts;
    let df = [d[0].to_f64(), d[1].to_f64()];
    let mut best: Option<(T::Wide, T::Wide)> = None;
    let mut ids = Vec::new();
    for i in 0..pts.len() / 2 {
        let (af, ef) = segs.approx[i];
        if surely_misses(af, ef, df) {
            continue;
        }
        let a = &pts[2 * i];
        let e = &segs.edges[i];
        let den = T::cross(&d[0], &d[1], &e[0], &e[1]);
        let sd = T::wide_sign(&den);
        if sd == 0 {
            continue;
        }
        let tn = T::cross(&a[0], &a[1], &e[0], &e[1]);
        let un = T::cross(&a[0], &a[1], &d[0], &d[1]);
        // t = tn / den > 0, 0 <= un / den <= 1
        if T::wide_sign(&tn) * sd <= 0 {
            continue;
        }
        let us = T::wide_sign(&un) * sd;
        if us < 0 {
            continue;
        }
        let over = if sd > 0 { un > den } else { un < den };
        if over {
            continue;
        }
        let ord = match &best {
            None => Ordering::Less,
            Some((bn, bd)) => {
                let c = T::wide_mul_cmp(&tn, bd, bn, &den);
                if T::wide_sign(&den) * T::wide_sign(bd) < 0 {
                    c.reverse()
                } else {
                    c
                }
            }
        };
        match ord {
            Ordering::Less => {
                best = Some((tn, den));
                ids.clear();
                ids.push(i);
            }
            Ordering::Equal => ids.push(i),
            Ordering::Greater => {}
        }
    }
    ids
}

/// Weak visibility of the segment `a b` through the scene. The target is
/// appended as an extra segment and swept together with the scene.
pub fn is_target_visible(scene: &Scene, p: &Point, a: &Point, b: &Point) -> Result<bool> {
    let with = scene.with_extra(a, b)?;
    Ok(visible_set(&with, p)?.contains(scene.len()))
}

/// Fraction of sampled ids (with multiplicity) whose segment is weakly
/// visible from `p` when every other segment occludes it.
pub fn sampled_ratio(scene: &Scene, sample: &[usize], p: &Point) -> Result<Rational> {
    if sample.is_empty() {
        return Err(Error::Domain("empty sample".into()));
    }
    let vis = visible_set(scene, p)?;
    let hits = sample.iter().filter(|&&id| vis.contains(id)).count();
    Ok(Rational::new(hits.into(), sample.len().into()))
}

/// Endpoint visibility graph. Vertex `2 * id + k` is endpoint `k` of
/// segment `id`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VisibilityGraph {
    pub vertex_count: usize,
    pub edges: Vec<(usize, usize)>,
}

impl VisibilityGraph {
    pub fn m(&self) -> usize {
        self.edges.len()
    }
}

/// Occluders of the open segment between two endpoints.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Blockers {
    /// Same position; no segment between them.
    Coincident,
    None,
    One(usize),
    Many,
}

/// Blocker summary for every endpoint pair `(u, v)`, `u < v`, in
/// lexicographic order.
pub fn endpoint_pair_blockers(scene: &Scene) -> Vec<((usize, usize), Blockers)> {
    match scene.framed(&Point::from_ints(0, 0)) {
        FramePoints::Small(v) => pair_blockers_in(&v),
        FramePoints::Big(v) => pair_blockers_in(&v),
    }
}

fn bbox<T: FrameNum>(a: &V<T>, b: &V<T>) -> [T; 4] {
    let (lx, hx) = if a[0] <= b[0] { (&a[0], &b[0]) } else { (&b[0], &a[0]) };
    let (ly, hy) = if a[1] <= b[1] { (&a[1], &b[1]) } else { (&b[1], &a[1]) };
    [lx.clone(), hx.clone(), ly.clone(), hy.clone()]
}

/// Open segment `p q` meets closed segment `a b`.
pub(crate) fn open_blocked<T: FrameNum>(p: &V<T>, q: &V<T>, a: &V<T>, b: &V<T>) -> bool {
    let o1 = frame::orient(p, q, a);
    let o2 = frame::orient(p, q, b);
    if o1 == 0 && o2 == 0 {
        let d = frame::vsub(q, p);
        let len2 = T::dot(&d[0], &d[1], &d[0], &d[1]);
        let pa = frame::vsub(a, p);
        let pb = frame::vsub(b, p);
        let ta = T::dot(&pa[0], &pa[1], &d[0], &d[1]);
        let tb = T::dot(&pb[0], &pb[1], &d[0], &d[1]);
        let (lo, hi) = if ta <= tb { (ta, tb) } else { (tb, ta) };
        return lo < len2 && T::wide_sign(&hi) > 0;
    }
    let o3 = frame::orient(a, b, p);
    let o4 = frame::orient(a, b, q);
    o1 * o2 <= 0 && o3 * o4 < 0
}

fn pair_blockers_in<T: FrameNum>(pts: &[V<T>]) -> Vec<((usize, usize), Blockers)> {
    let n = pts.len() / 2;
    let boxes: Vec<[T; 4]> = (0..n).map(|i| bbox(&pts[2 * i], &pts[2 * i + 1])).collect();
    let mut out = Vec::with_capacity(pts.len() * pts.len().saturating_sub(1) / 2);
    for u in 0..pts.len() {
        for v in u + 1..pts.len() {
            if pts[u] == pts[v] {
                out.push(((u, v), Blockers::Coincident));
                continue;
            }
            if u / 2 == v / 2 {
                out.push(((u, v), Blockers::None));
                continue;
            }
            let pb = bbox(&pts[u], &pts[v]);
            let mut found = Blockers::None;
            for (s, sb) in boxes.iter().enumerate() {
                if sb[1] < pb[0] || sb[0] > pb[1] || sb[3] < pb[2] || sb[2] > pb[3] {
                    continue;
                }
                if open_blocked(&pts[u], &pts[v], &pts[2 * s], &pts[2 * s + 1]) {
                    found = match found {
                        Blockers::None => Blockers::One(s),
                        _ => Blockers::Many,
                    };
                    if found == Blockers::Many {
                        break;
                    }
                }
            }
            out.push(((u, v), found));
        }
    }
    out
}

pub fn visibility_graph(scene: &Scene) -> VisibilityGraph {
    let edges = endpoint_pair_blockers(scene)
        .into_iter()
        .filter(|(_, b)| *b == Blockers::None)
        .map(|(e, _)| e)
        .collect();
    VisibilityGraph {
        vertex_count: 2 * scene.len(),
        edges,
    }
}

/// Moves `p` by small random grid steps until it is in general position.
/// `step` sets the jitter scale.
pub fn nudge_to_general_position<R: Rng>(
    scene: &Scene,
    p: &Point,
    step: &Rational,
    rng: &mut R,
) -> Point {
    let mut q = p.clone();
    let mut scale = step.clone();
    for round in 0.. {
        if is_general_position(scene, &q) {
            return q;
        }
        let dx: i64 = rng.gen_range(-1000..=1000);
        let dy: i64 = rng.gen_range(-1000..=1000);
        q = Point::new(
            &p.x + &scale * Rational::from_integer(dx.into()) / Rational::from_integer(1000.into()),
            &p.y + &scale * Rational::from_integer(dy.into()) / Rational::from_integer(1000.into()),
        );
        if round % 16 == 15 {
            scale = &scale / Rational::from_integer(2.into());
        }
    }
    unreachable!()
}
