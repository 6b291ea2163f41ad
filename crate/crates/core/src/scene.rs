//! Scenes of non-crossing segments: construction, the plain-text file
//! format, and the nondegeneracy audit.
//!
//! A scene file holds one segment per line as four coordinates
//! `ax ay bx by`. A coordinate is a decimal integer or `p/q` with `q > 0`.
//! Lines starting with `#` and blank lines are ignored.

use std::collections::{BTreeSet, HashMap};
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::frame::{self, FrameNum, FramePoints, IntGrid, V};
use crate::kernel::{Point, Rational, Segment};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Scene {
    segments: Vec<Segment>,
    /// Endpoints `2 * id` and `2 * id + 1` on a common integer grid.
    grid: IntGrid,
}

impl Scene {
    /// Builds a scene with ids in input order, rejecting zero-length and
    /// crossing segments.
    pub fn new(pairs: Vec<(Point, Point)>) -> Result<Self> {
        let scene = Self::from_pairs_unchecked(pairs)?;
        if let Some((i, j)) = scene.crossing_pairs(true).into_iter().next() {
            return Err(Error::CrossingSegments(i, j));
        }
        Ok(scene)
    }

    /// Builds a scene without the crossing check. Zero-length segments are
    /// still rejected.
    pub fn from_pairs_unchecked(pairs: Vec<(Point, Point)>) -> Result<Self> {
        let mut segments = Vec::with_capacity(pairs.len());
        for (id, (a, b)) in pairs.into_iter().enumerate() {
            segments.push(Segment::new(a, b, id).ok_or(Error::ZeroLength(id))?);
        }
        let grid = IntGrid::new(segments.iter().flat_map(|s| [&s.a, &s.b]));
        Ok(Scene { segments, grid })
    }

    pub fn empty() -> Self {
        Scene {
            segments: Vec::new(),
            grid: IntGrid::new(std::iter::empty::<&Point>()),
        }
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    pub fn segment(&self, id: usize) -> &Segment {
        &self.segments[id]
    }

    pub fn len(&self) -> usize {
        self.segments.len()
    }

    pub fn is_empty(&self) -> bool {
        self.segments.is_empty()
    }

    pub fn pairs(&self) -> Vec<(Point, Point)> {
        self.segments
            .iter()
            .map(|s| (s.a.clone(), s.b.clone()))
            .collect()
    }

    /// The scene with segment `id` removed; later ids shift down by one.
    pub fn without(&self, id: usize) -> Scene {
        let pairs = self
            .segments
            .iter()
            .filter(|s| s.id != id)
            .map(|s| (s.a.clone(), s.b.clone()))
            .collect();
        Scene::from_pairs_unchecked(pairs).expect("segments were valid")
    }

    /// The scene with `t` appended as id `len()`; checks that `t` crosses
    /// nothing.
    pub fn with_extra(&self, a: &Point, b: &Point) -> Result<Scene> {
        let t = Segment::new(a.clone(), b.clone(), self.len()).ok_or(Error::ZeroLength(self.len()))?;
        for s in &self.segments {
            if crate::kernel::segments_conflict(s, &t) {
                return Err(Error::CrossingTarget(s.id));
            }
        }
        let mut pairs = self.pairs();
        pairs.push((t.a, t.b));
        Scene::from_pairs_unchecked(pairs)
    }

    /// Endpoints as a flat list, `2 * id + k`.
    pub fn endpoints(&self) -> impl Iterator<Item = &Point> {
        self.segments.iter().flat_map(|s| [&s.a, &s.b])
    }

    /// Distinct endpoint positions in first-seen order.
    pub fn distinct_endpoints(&self) -> Vec<Point> {
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for p in self.endpoints() {
            if seen.insert(p.clone()) {
                out.push(p.clone());
            }
        }
        out
    }

    /// Endpoints framed around `origin` (see [`crate::frame`]).
    pub fn framed(&self, origin: &Point) -> FramePoints {
        self.grid.framed(origin)
    }

    /// Axis-aligned bounding box `(min, max)`; `None` for an empty scene.
    pub fn bounding_box(&self) -> Option<(Point, Point)> {
        let mut it = self.endpoints();
        let first = it.next()?;
        let (mut lx, mut ly, mut hx, mut hy) = (
            first.x.clone(),
            first.y.clone(),
            first.x.clone(),
            first.y.clone(),
        );
        for p in it {
            if p.x < lx {
                lx = p.x.clone();
            }
            if p.x > hx {
                hx = p.x.clone();
            }
            if p.y < ly {
                ly = p.y.clone();
            }
            if p.y > hy {
                hy = p.y.clone();
            }
        }
        Some((Point::new(lx, ly), Point::new(hx, hy)))
    }

    /// Pairs of segments that share a point other than a common endpoint.
    /// With `first_only` the scan stops at the first hit.
    pub fn crossing_pairs(&self, first_only: bool) -> Vec<(usize, usize)> {
        match self.framed(&Point::from_ints(0, 0)) {
            FramePoints::Small(v) => crossing_pairs_in(&v, first_only),
            FramePoints::Big(v) => crossing_pairs_in(&v, first_only),
        }
    }

    /// Writes the canonical text form.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for s in &self.segments {
            let _ = writeln!(out, "{} {} {} {}", s.a.x, s.a.y, s.b.x, s.b.y);
        }
        out
    }

    pub fn parse(text: &str) -> Result<Scene> {
        let mut pairs = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let parse_err = |message: String| Error::Parse {
                line: idx + 1,
                message,
            };
            let fields: Vec<&str> = line.split_whitespace().collect();
            if fields.len() != 4 {
                return Err(parse_err(format!(
                    "expected 4 coordinates, found {}",
                    fields.len()
                )));
            }
            let mut c = Vec::with_capacity(4);
            for f in fields {
                c.push(parse_rational(f).map_err(parse_err)?);
            }
            let by = c.pop().unwrap();
            let bx = c.pop().unwrap();
            let ay = c.pop().unwrap();
            let ax = c.pop().unwrap();
            pairs.push((Point::new(ax, ay), Point::new(bx, by)));
        }
        match Scene::new(pairs) {
            Err(Error::ZeroLength(id)) => Err(Error::Parse {
                line: nth_data_line(text, id),
                message: "zero-length segment".into(),
            }),
            other => other,
        }
    }
}

fn nth_data_line(text: &str, n: usize) -> usize {
    text.lines()
        .enumerate()
        .filter(|(_, l)| {
            let t = l.trim();
            !t.is_empty() && !t.starts_with('#')
        })
        .nth(n)
        .map(|(i, _)| i + 1)
        .unwrap_or(0)
}

/// Parses `"-12"` or `"3/4"`.
pub fn parse_rational(s: &str) -> std::result::Result<Rational, String> {
    let int = |t: &str| -> std::result::Result<BigInt, String> {
        let digits = t.strip_prefix(['-', '+']).unwrap_or(t);
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(format!("invalid coordinate {s:?}"));
        }
        t.parse::<BigInt>().map_err(|e| format!("invalid coordinate {s:?}: {e}"))
    };
    match s.split_once('/') {
        None => Ok(Rational::from_integer(int(s)?)),
        Some((p, q)) => {
            let (p, q) = (int(p)?, int(q)?);
            if !q.is_positive() || q.is_zero() || q.to_string().starts_with('+') {
                return Err(format!("denominator must be a positive integer in {s:?}"));
            }
            Ok(Rational::new(p, q))
        }
    }
}

pub fn load_scene(text: &str) -> Result<Scene> {
    Scene::parse(text)
}

pub fn save_scene(scene: &Scene) -> String {
    scene.to_text()
}

fn conflict_int<T: FrameNum>(a: &V<T>, b: &V<T>, c: &V<T>, d: &V<T>) -> bool {
    let o1 = frame::orient(a, b, c);
    let o2 = frame::orient(a, b, d);
    let o3 = frame::orient(c, d, a);
    let o4 = frame::orient(c, d, b);
    let on = |p: &V<T>, q: &V<T>, r: &V<T>| -> bool {
        // r on closed pq, given collinear
        let lo = |i: usize| if p[i] <= q[i] { (&p[i], &q[i]) } else { (&q[i], &p[i]) };
        let (lx, hx) = lo(0);
        let (ly, hy) = lo(1);
        lx <= &r[0] && &r[0] <= hx && ly <= &r[1] && &r[1] <= hy
    };
    let touch = if o1 == 0 && o2 == 0 {
        on(a, b, c) || on(a, b, d) || on(c, d, a) || on(c, d, b)
    } else {
        o1 * o2 <= 0 && o3 * o4 <= 0
    };
    if !touch {
        return false;
    }
    let shared = if a == c || a == d {
        Some((a, b))
    } else if b == c || b == d {
        Some((b, a))
    } else {
        None
    };
    match shared {
        None => true,
        Some((s, so)) => {
            let to = if s == c { d } else { c };
            if so == to {
                return true;
            }
            if frame::orient(s, so, to) != 0 {
                return false;
            }
            let u = frame::vsub(so, s);
            let w = frame::vsub(to, s);
            T::wide_sign(&T::dot(&u[0], &u[1], &w[0], &w[1])) > 0
        }
    }
}

fn crossing_pairs_in<T: FrameNum>(pts: &[V<T>], first_only: bool) -> Vec<(usize, usize)> {
    let n = pts.len() / 2;
    let xr = |i: usize| -> (&T, &T) {
        let (a, b) = (&pts[2 * i][0], &pts[2 * i + 1][0]);
        if a <= b {
            (a, b)
        } else {
            (b, a)
        }
    };
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| xr(i).0.cmp(xr(j).0));
    let mut out = Vec::new();
    for (k, &i) in order.iter().enumerate() {
        let hi = xr(i).1;
        for &j in &order[k + 1..] {
            if xr(j).0 > hi {
                break;
            }
            if conflict_int(&pts[2 * i], &pts[2 * i + 1], &pts[2 * j], &pts[2 * j + 1]) {
                out.push((i.min(j), i.max(j)));
                if first_only {
                    return out;
                }
            }
        }
    }
    out.sort();
    out
}

/// Everything that keeps a scene from being nondegenerate.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DegeneracyReport {
    pub crossing_pairs: Vec<(usize, usize)>,
    /// Three distinct endpoint positions on one line.
    pub collinear_triples: Vec<[Point; 3]>,
    /// Two distinct lines, each through two endpoints, that are parallel.
    pub parallel_endpoint_line_pairs: Vec<[[Point; 2]; 2]>,
}

impl DegeneracyReport {
    pub fn is_nondegenerate(&self) -> bool {
        self.crossing_pairs.is_empty()
            && self.collinear_triples.is_empty()
            && self.parallel_endpoint_line_pairs.is_empty()
    }
}

/// Pairs per pass when bucketing endpoint-pair directions.
const PASS_PAIRS: usize = 1 << 22;

pub fn validate_nondegenerate(scene: &Scene) -> DegeneracyReport {
    let crossing_pairs = scene.crossing_pairs(false);
    let distinct = scene.distinct_endpoints();
    let framed = frame::frame_points(&distinct, &Point::from_ints(0, 0));
    let (triples, parallels) = match &framed {
        FramePoints::Small(v) => line_degeneracies(v),
        FramePoints::Big(v) => line_degeneracies(v),
    };
    DegeneracyReport {
        crossing_pairs,
        collinear_triples: triples
            .into_iter()
            .map(|[i, j, k]| [distinct[i].clone(), distinct[j].clone(), distinct[k].clone()])
            .collect(),
        parallel_endpoint_line_pairs: parallels
            .into_iter()
            .map(|[[i, j], [k, l]]| {
                [
                    [distinct[i].clone(), distinct[j].clone()],
                    [distinct[k].clone(), distinct[l].clone()],
                ]
            })
            .collect(),
    }
}

/// Direction key shared by parallel vectors: the slope as an `f64`
/// (vertical is infinity). Equal directions always share a key; distinct
/// ones may collide and are separated exactly afterwards.
fn slope_key<T: FrameNum>(u: &V<T>) -> u64 {
    let (dx, dy) = (u[0].to_f64(), u[1].to_f64());
    let s = if dx == 0.0 { f64::INFINITY } else { dy / dx };
    let s = if s == 0.0 { 0.0 } else { s };
    s.to_bits()
}

type LineDegeneracies = (Vec<[usize; 3]>, Vec<[[usize; 2]; 2]>);

fn line_degeneracies<T: FrameNum>(pts: &[V<T>]) -> LineDegeneracies {
    let n = pts.len();
    let total = n * n.saturating_sub(1) / 2;
    let passes = total.div_ceil(PASS_PAIRS).max(1) as u64;
    let mut triples: BTreeSet<[usize; 3]> = BTreeSet::new();
    let mut parallels: BTreeSet<[[usize; 2]; 2]> = BTreeSet::new();
    for pass in 0..passes {
        let mut keys: Vec<(u64, u32, u32)> = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                let k = slope_key(&frame::vsub(&pts[j], &pts[i]));
                if passes == 1 || mix(k) % passes == pass {
                    keys.push((k, i as u32, j as u32));
                }
            }
        }
        keys.sort_unstable();
        let mut start = 0;
        while start < keys.len() {
            let mut end = start + 1;
            while end < keys.len() && keys[end].0 == keys[start].0 {
                end += 1;
            }
            for x in start..end {
                for y in x + 1..end {
                    let (i, j) = (keys[x].1 as usize, keys[x].2 as usize);
                    let (k, l) = (keys[y].1 as usize, keys[y].2 as usize);
                    let u = frame::vsub(&pts[j], &pts[i]);
                    let w = frame::vsub(&pts[l], &pts[k]);
                    if !frame::parallel(&u, &w) {
                        continue;
                    }
                    let other = if k != i && k != j { k } else { l };
                    if frame::orient(&pts[i], &pts[j], &pts[other]) == 0 {
                        let mut s: Vec<usize> = vec![i, j, k, l];
                        s.sort_unstable();
                        s.dedup();
                        for a in 0..s.len() {
                            for b in a + 1..s.len() {
                                for c in b + 1..s.len() {
                                    triples.insert([s[a], s[b], s[c]]);
                                }
                            }
                        }
                    } else {
                        let (p, q) = ([i, j], [k, l]);
                        parallels.insert(if p <= q { [p, q] } else { [q, p] });
                    }
                }
            }
            start = end;
        }
    }
    (triples.into_iter().collect(), parallels.into_iter().collect())
}

fn mix(k: u64) -> u64 {
    let mut x = k ^ (k >> 33);
    x = x.wrapping_mul(0xff51_afd7_ed55_8ccd);
    x ^ (x >> 33)
}

/// Groups segment ids by shared endpoint position.
pub fn endpoint_incidence(scene: &Scene) -> HashMap<Point, Vec<usize>> {
    let mut map: HashMap<Point, Vec<usize>> = HashMap::new();
    for s in scene.segments() {
        map.entry(s.a.clone()).or_default().push(s.id);
        map.entry(s.b.clone()).or_default().push(s.id);
    }
    map
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::{ratio, Point};

    fn p(x: i64, y: i64) -> Point {
        Point::from_ints(x, y)
    }

    #[test]
    fn load_examples() {
        let s = load_scene("0 0 1 0\n0 1 1 1\n").unwrap();
        assert_eq!(s.len(), 2);
        assert!(matches!(
            load_scene("0 0 2 2\n0 2 2 0\n"),
            Err(Error::CrossingSegments(0, 1))
        ));
        let r = load_scene("1/2 0 3/2 0\n").unwrap();
        assert_eq!(r.segment(0).a, Point::new(ratio(1, 2), ratio(0, 1)));
        assert_eq!(r.segment(0).b, Point::new(ratio(3, 2), ratio(0, 1)));
    }

    #[test]
    fn parse_errors_report_line_numbers() {
        match load_scene("# header\n0 0 1 0\n0 0 x 1\n") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(load_scene("0 0 1\n"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(load_scene("0 0 1/0 1\n"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(load_scene("0 0 1/-2 1\n"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(load_scene("\n5 5 5 5\n"), Err(Error::Parse { line: 2, .. })));
    }

    #[test]
    fn save_is_canonical() {
        let s = load_scene("# c\n2/4 -0 6/3 1\n").unwrap();
        assert_eq!(save_scene(&s), "1/2 0 2 1\n");
        assert_eq!(load_scene(&save_scene(&s)).unwrap(), s);
    }

    #[test]
    fn validation_examples() {
        let s = Scene::new(vec![(p(0, 0), p(1, 0)), (p(2, 0), p(3, 0))]).unwrap();
        let r = validate_nondegenerate(&s);
        assert_eq!(r.collinear_triples.len(), 4);
        assert!(r.crossing_pairs.is_empty());

        // no collinear triple, but x = 0 and x = 1 are both endpoint lines
        let s = Scene::new(vec![(p(0, 0), p(1, 1)), (p(0, 1), p(1, 3))]).unwrap();
        let r = validate_nondegenerate(&s);
        assert!(r.crossing_pairs.is_empty());
        assert!(r.collinear_triples.is_empty());
        assert_eq!(
            r.parallel_endpoint_line_pairs,
            vec![[[p(0, 0), p(0, 1)], [p(1, 1), p(1, 3)]]]
        );

        let s = Scene::new(vec![(p(0, 0), p(1, 1)), (p(0, 1), p(2, 5))]).unwrap();
        assert!(validate_nondegenerate(&s).is_nondegenerate());

        let s = Scene::new(vec![(p(0, 0), p(1, 0)), (p(1, 0), p(1, 1))]).unwrap();
        let r = validate_nondegenerate(&s);
        assert!(r.crossing_pairs.is_empty());
        assert!(r.collinear_triples.is_empty());
        assert!(r.is_nondegenerate());
    }

    #[test]
    fn parallel_lines_are_reported() {
        // (0,0)-(2,1) is parallel to (0,3)-(2,4)
        let s = Scene::new(vec![(p(0, 0), p(2, 1)), (p(0, 3), p(2, 4))]).unwrap();
        let r = validate_nondegenerate(&s);
        assert!(r.collinear_triples.is_empty());
        assert_eq!(r.parallel_endpoint_line_pairs.len(), 2);
    }

    #[test]
    fn t_junction_is_a_crossing() {
        let s = Scene::from_pairs_unchecked(vec![(p(0, 0), p(4, 0)), (p(2, 0), p(2, 3))]).unwrap();
        assert_eq!(validate_nondegenerate(&s).crossing_pairs, vec![(0, 1)]);
    }
}
