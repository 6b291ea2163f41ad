//! Sampling estimates of the visibility ratio: sample sizes, the direct
//! estimator, per-target space/time tradeoff structures and the
//! preprocessed counter built from them.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::atomic::{AtomicUsize, Ordering as AtomicOrdering};

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::arrangement::{build_arrangement, Curve, Subdivision};
use crate::error::{Error, Result};
use crate::exact::{endpoint_pair_blockers, is_general_position, sampled_ratio, visible_set, Blockers};
use crate::kernel::{
    line_intersection, open_segment_blocked, orientation, ray_first_hit, segments_touch, Line, Point, Rational, Ray,
    Segment,
};
use crate::scene::Scene;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SampleMode {
    Chernoff,
    Vc,
    Practical,
}

impl std::str::FromStr for SampleMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "chernoff" => Ok(SampleMode::Chernoff),
            "vc" => Ok(SampleMode::Vc),
            "practical" | "paper_practical" => Ok(SampleMode::Practical),
            _ => Err(Error::Domain(format!("unknown sample mode {s:?}"))),
        }
    }
}

#[derive(Clone, Debug)]
pub struct SampleConfig {
    pub delta: f64,
    pub fail_prob: f64,
    pub mode: SampleMode,
    pub explicit_m: Option<usize>,
    pub seed: u64,
    /// Constant of the VC bound.
    pub vc_c: f64,
}

impl SampleConfig {
    pub fn new(mode: SampleMode, delta: f64, fail_prob: f64, seed: u64) -> Self {
        SampleConfig {
            delta,
            fail_prob,
            mode,
            explicit_m: None,
            seed,
            vc_c: 0.25,
        }
    }

    pub fn sample_size(&self, n: usize) -> Result<usize> {
        if let Some(m) = self.explicit_m {
            return if m == 0 {
                Err(Error::Domain("sample size must be positive".into()))
            } else {
                Ok(m)
            };
        }
        match self.mode {
            SampleMode::Chernoff => chernoff_sample_size(self.delta, self.fail_prob),
            SampleMode::Vc => vc_sample_size(n, self.delta, self.fail_prob, self.vc_c),
            SampleMode::Practical => practical_sample_size(n),
        }
    }
}

fn check_unit(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v < 1.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!("{name} must lie in (0,1), got {v}")))
    }
}

/// Smallest `m` with `2 exp(-2 m delta^2) <= fail_prob`.
pub fn chernoff_sample_size(delta: f64, fail_prob: f64) -> Result<usize> {
    check_unit("delta", delta)?;
    check_unit("fail_prob", fail_prob)?;
    let holds = |m: f64| 2.0 * (-2.0 * m * delta * delta).exp() <= fail_prob;
    let mut m = ((2.0 / fail_prob).ln() / (2.0 * delta * delta)).ceil().max(1.0);
    // settle rounding at the boundary by direct evaluation
    while m > 1.0 && holds(m - 1.0) {
        m -= 1.0;
    }
    while !holds(m) {
        m += 1.0;
    }
    Ok(m as usize)
}

/// `ceil(C d^2 log2(n) log2(d log2(n) / delta) / delta^2)` with `d = 2`.
pub fn vc_sample_size(n: usize, delta: f64, fail_prob: f64, c: f64) -> Result<usize> {
    check_unit("delta", delta)?;
    check_unit("fail_prob", fail_prob)?;
    if n < 2 || c <= 0.0 {
        return Err(Error::Domain("need n >= 2 and C > 0".into()));
    }
    let d = 2.0f64;
    let ln = (n as f64).log2();
    let m = c * d * d * ln * (d * ln / delta).log2() / (delta * delta);
    Ok((m - 1e-9).ceil().max(1.0) as usize)
}

/// Sample size that guarantees some sampled segment is visible whenever a
/// `delta` fraction is: the VC bound with `1/delta` in place of
/// `1/delta^2`.
pub fn hit_sample_size(n: usize, delta: f64, c: f64) -> Result<usize> {
    check_unit("delta", delta)?;
    if n < 2 || c <= 0.0 {
        return Err(Error::Domain("need n >= 2 and C > 0".into()));
    }
    let d = 2.0f64;
    let ln = (n as f64).log2();
    let m = c * d * d * ln * (d * ln / delta).log2() / delta;
    Ok((m - 1e-9).ceil().max(1.0) as usize)
}

/// `ceil(10 log2(n)^2)`.
pub fn practical_sample_size(n: usize) -> Result<usize> {
    if n < 2 {
        return Ok(1);
    }
    let l = (n as f64).log2();
    Ok(((10.0 * l * l) - 1e-9).ceil().max(1.0) as usize)
}

/// `m` uniform draws with replacement from `0..n`.
pub fn draw_sample(n: usize, m: usize, seed: u64) -> Result<Vec<usize>> {
    if m == 0 || n == 0 {
        return Err(Error::Domain("need a non-empty scene and m >= 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok((0..m).map(|_| rng.gen_range(0..n)).collect())
}

/// Fraction of sampled targets weakly visible from `p`, with multiplicity.
pub fn sample_estimate(scene: &Scene, sample: &[usize], p: &Point) -> Result<Rational> {
    crate::exact::check_general_position(scene, p)?;
    sampled_ratio(scene, sample, p)
}

/// Which endpoint-pair lines are split among the pieces of a target.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum CandidateLines {
    /// Lines through mutually visible endpoints.
    #[default]
    Pruned,
    /// All endpoint-pair lines, with full pencil and supporting lines.
    All,
}

#[derive(Debug)]
pub struct TargetPiece {
    pub a: Point,
    pub b: Point,
    pub sub: Subdivision,
    /// Per face: is the piece weakly visible.
    pub labels: Vec<bool>,
    /// Candidate lines meeting this piece.
    pub lines: usize,
}

#[derive(Debug)]
pub struct TargetStructure {
    pub target: usize,
    pub ell: usize,
    pub pieces: Vec<TargetPiece>,
    /// Candidate lines meeting the target.
    pub lines_hitting: usize,
    /// Point locations performed so far.
    locations: AtomicUsize,
}

impl TargetStructure {
    pub fn edges(&self) -> usize {
        self.pieces.iter().map(|p| p.sub.edge_count()).sum()
    }

    pub fn faces(&self) -> usize {
        self.pieces.iter().map(|p| p.sub.face_count()).sum()
    }

    /// Stored edges plus faces.
    pub fn memory_proxy(&self) -> usize {
        self.edges() + self.faces()
    }

    pub fn locations(&self) -> usize {
        self.locations.load(AtomicOrdering::Relaxed)
    }
}

/// Position of `p` along `a -> b`, for `p` on that line.
fn param_on(a: &Point, b: &Point, p: &Point) -> Rational {
    if a.x != b.x {
        (&p.x - &a.x) / (&b.x - &a.x)
    } else {
        (&p.y - &a.y) / (&b.y - &a.y)
    }
}

/// Candidate lines with the parameter at which each meets the target.
fn lines_meeting_target(scene: &Scene, t: usize, mode: CandidateLines) -> Vec<(Rational, Line)> {
    let seg = scene.segment(t);
    let (a, b) = (&seg.a, &seg.b);
    let tl = seg.supporting_line();
    let pt = |v: usize| {
        let s = scene.segment(v / 2);
        if v.is_multiple_of(2) {
            &s.a
        } else {
            &s.b
        }
    };
    let mut lines = BTreeSet::new();
    for ((u, v), bl) in endpoint_pair_blockers(scene) {
        if u / 2 == t || v / 2 == t {
            continue;
        }
        let (p, q) = (pt(u), pt(v));
        if p == a || p == b || q == a || q == b {
            continue;
        }
        let keep = match mode {
            CandidateLines::Pruned => bl == Blockers::None,
            CandidateLines::All => bl != Blockers::Coincident,
        };
        if keep {
            if let Some(l) = Line::through(p, q) {
                lines.insert(l);
            }
        }
    }
    let zero = Rational::zero();
    let one = Rational::one();
    lines
        .into_iter()
        .filter_map(|l| {
            let x = line_intersection(&l, &tl)?;
            let s = param_on(a, b, &x);
            (s >= zero && s <= one).then_some((s, l))
        })
        .collect()
}

/// Number of candidate lines meeting target `t`.
pub fn candidate_lines_meeting(scene: &Scene, t: usize, mode: CandidateLines) -> usize {
    lines_meeting_target(scene, t, mode).len()
}

/// [`candidate_lines_meeting`] for every target at once.
pub fn candidate_line_counts(scene: &Scene, mode: CandidateLines) -> Vec<usize> {
    let pt = |v: usize| {
        let s = scene.segment(v / 2);
        if v.is_multiple_of(2) {
            &s.a
        } else {
            &s.b
        }
    };
    let mut ids: HashMap<Line, usize> = HashMap::new();
    let mut pairs = Vec::new();
    for ((u, v), bl) in endpoint_pair_blockers(scene) {
        let keep = match mode {
            CandidateLines::Pruned => bl == Blockers::None,
            CandidateLines::All => bl != Blockers::Coincident,
        };
        if let (true, Some(l)) = (keep, Line::through(pt(u), pt(v))) {
            let next = ids.len();
            pairs.push((u, v, *ids.entry(l).or_insert(next)));
        }
    }
    (0..scene.len())
        .map(|t| {
            let seg = scene.segment(t);
            let mut seen = vec![false; ids.len()];
            for &(u, v, id) in &pairs {
                let (p, q) = (pt(u), pt(v));
                if seen[id] || u / 2 == t || v / 2 == t || seg.has_endpoint(p) || seg.has_endpoint(q) {
                    continue;
                }
                let (oa, ob) = (orientation(p, q, &seg.a).as_i8(), orientation(p, q, &seg.b).as_i8());
                if oa * ob <= 0 && (oa, ob) != (0, 0) {
                    seen[id] = true;
                }
            }
            seen.iter().filter(|&&s| s).count()
        })
        .collect()
}

/// `ell - 1` cut parameters in `(0,1)`, none on a hit, splitting the
/// sorted hits into groups of nearly equal size.
fn cut_params(hits: &[Rational], ell: usize) -> Vec<Rational> {
    let zero = Rational::zero();
    let one = Rational::one();
    let mut marks: Vec<Rational> = vec![zero.clone()];
    marks.extend(hits.iter().cloned());
    marks.push(one.clone());
    marks.dedup();
    // gaps between consecutive distinct marks, with hits at or before lo
    let gaps: Vec<(Rational, Rational, usize)> = marks
        .windows(2)
        .map(|w| {
            let below = hits.partition_point(|h| h <= &w[0]);
            (w[0].clone(), w[1].clone(), below)
        })
        .collect();
    let h = hits.len();
    let mut per_gap = vec![0usize; gaps.len()];
    let mut g = 0;
    for j in 1..ell {
        // first gap whose count reaches the ideal rank, never moving back
        let want = (j * h) as f64 / ell as f64;
        while g + 1 < gaps.len() && ((gaps[g + 1].2 as f64 - want).abs() <= (gaps[g].2 as f64 - want).abs()) {
            g += 1;
        }
        per_gap[g] += 1;
    }
    let mut out = Vec::with_capacity(ell - 1);
    for (k, (lo, hi, _)) in gaps.iter().enumerate() {
        let c = per_gap[k];
        for i in 1..=c {
            out.push(lo + (hi - lo) * Rational::new(i.into(), (c + 1).into()));
        }
    }
    out
}

/// Splits target `t` into `ell` pieces and labels the arrangement of each
/// with the weak visibility of the piece, occluders being every other
/// segment.
pub fn build_target_structure(scene: &Scene, t: usize, ell: usize) -> Result<TargetStructure> {
    build_target_structure_with(scene, t, ell, CandidateLines::Pruned)
}

pub fn build_target_structure_with(
    scene: &Scene,
    t: usize,
    ell: usize,
    mode: CandidateLines,
) -> Result<TargetStructure> {
    if ell == 0 || t >= scene.len() {
        return Err(Error::Domain("need ell >= 1 and a valid target id".into()));
    }
    let seg = scene.segment(t).clone();
    let occ = scene.without(t);
    let mut hits = lines_meeting_target(scene, t, mode);
    hits.sort();
    let params: Vec<Rational> = hits.iter().map(|(s, _)| s.clone()).collect();
    let mut cuts = vec![Rational::zero()];
    cuts.extend(cut_params(&params, ell));
    cuts.push(Rational::one());
    let occ_points = occ.distinct_endpoints();
    let pieces = cuts
        .windows(2)
        .map(|w| {
            let pa = seg.a.lerp(&seg.b, &w[0]);
            let pb = seg.a.lerp(&seg.b, &w[1]);
            let mine: Vec<&Line> = hits
                .iter()
                .filter(|(s, _)| s >= &w[0] && s <= &w[1])
                .map(|(_, l)| l)
                .collect();
            let curves = piece_curves(&occ, &seg.a, &seg.b, &pa, &pb, &mine, &occ_points, mode);
            let sub = build_arrangement(&curves);
            let labels = label_piece(&occ, &pa, &pb, &sub)?;
            Ok(TargetPiece {
                a: pa,
                b: pb,
                sub,
                labels,
                lines: mine.len(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(TargetStructure {
        target: t,
        ell,
        pieces,
        lines_hitting: hits.len(),
        locations: AtomicUsize::new(0),
    })
}

#[allow(clippy::too_many_arguments)]
fn piece_curves(
    occ: &Scene,
    ta: &Point,
    tb: &Point,
    pa: &Point,
    pb: &Point,
    lines: &[&Line],
    occ_points: &[Point],
    mode: CandidateLines,
) -> Vec<Curve> {
    let mut curves: Vec<Curve> = lines.iter().map(|l| Curve::Line((*l).clone())).collect();
    let mut sources: Vec<&Point> = occ_points.iter().collect();
    sources.push(ta);
    sources.push(tb);
    match mode {
        CandidateLines::All => {
            curves.extend(occ.segments().iter().map(|s| Curve::Line(s.supporting_line())));
            curves.push(Curve::Line(Line::through(ta, tb).unwrap()));
            for q in [pa, pb] {
                for e in &sources {
                    if let Some(l) = Line::through(e, q) {
                        curves.push(Curve::Line(l));
                    }
                }
            }
        }
        CandidateLines::Pruned => {
            curves.extend(occ.segments().iter().map(|s| Curve::Segment(s.a.clone(), s.b.clone())));
            curves.push(Curve::Segment(ta.clone(), tb.clone()));
            let none = BTreeSet::new();
            for q in [pa, pb] {
                for e in &sources {
                    if *e == q {
                        continue;
                    }
                    // an occluder endpoint e in front of q sweeps its
                    // shadow edge over q along the ray beyond e
                    if occ.segments().iter().any(|s| open_segment_blocked(e, q, s)) {
                        continue;
                    }
                    let ray = Ray::away_from(e, q).unwrap();
                    curves.push(match ray_first_hit(occ, &ray, &none) {
                        Some((_, hit)) => Curve::Segment((*e).clone(), hit),
                        None => Curve::Ray(ray),
                    });
                }
            }
        }
    }
    curves
}

fn label_piece(occ: &Scene, pa: &Point, pb: &Point, sub: &Subdivision) -> Result<Vec<bool>> {
    occ.with_extra(pa, pb)?;
    // only occluders meeting the triangle p, pa, pb can block the piece
    let local_scene = |p: &Point| {
        let mut pairs: Vec<(Point, Point)> = occ
            .segments()
            .iter()
            .filter(|s| meets_triangle(s, p, pa, pb))
            .map(|s| (s.a.clone(), s.b.clone()))
            .collect();
        pairs.push((pa.clone(), pb.clone()));
        Scene::from_pairs_unchecked(pairs).expect("occluders stay valid")
    };
    Ok((0..sub.face_count())
        .into_par_iter()
        .map(|f| {
            let mut p = sub.representative(f).clone();
            let mut local = local_scene(&p);
            let mut rng = ChaCha8Rng::seed_from_u64(f as u64);
            while !is_general_position(&local, &p) {
                p = sub.sample_in_face(f, &mut rng);
                local = local_scene(&p);
            }
            visible_set(&local, &p).expect("general position").contains(local.len() - 1)
        })
        .collect())
}

/// Closed segment `s` meets the closed triangle `p a b`.
fn meets_triangle(s: &Segment, p: &Point, a: &Point, b: &Point) -> bool {
    let sides = [(p, a), (a, b), (b, p)];
    let o = sides.map(|(u, w)| orientation(u, w, &s.a).as_i8());
    if o.iter().all(|&v| v > 0) || o.iter().all(|&v| v < 0) {
        return true;
    }
    sides.iter().any(|(u, w)| match Segment::new((*u).clone(), (*w).clone(), 0) {
        Some(e) => segments_touch(s, &e),
        None => s.contains(u),
    })
}

/// Weak visibility of the target from `p`: one point location per piece.
pub fn target_query(ts: &TargetStructure, p: &Point) -> Result<bool> {
    let mut seen = false;
    for piece in &ts.pieces {
        let r = piece.sub.locate(p);
        ts.locations.fetch_add(1, AtomicOrdering::Relaxed);
        if r.on_boundary.is_some() {
            return Err(Error::BoundaryQuery(Box::new(p.clone())));
        }
        seen |= piece.labels[r.face];
    }
    Ok(seen)
}

#[derive(Debug)]
pub struct ApproxCounter {
    pub sample: Vec<usize>,
    pub ell: usize,
    /// One structure per distinct sampled id.
    pub structures: BTreeMap<usize, TargetStructure>,
}

impl ApproxCounter {
    pub fn memory_proxy(&self) -> usize {
        self.structures.values().map(|s| s.memory_proxy()).sum()
    }

    pub fn edges(&self) -> usize {
        self.structures.values().map(|s| s.edges()).sum()
    }

    pub fn faces(&self) -> usize {
        self.structures.values().map(|s| s.faces()).sum()
    }

    pub fn locations(&self) -> usize {
        self.structures.values().map(|s| s.locations()).sum()
    }
}

pub fn build_approx_counter(scene: &Scene, cfg: &SampleConfig, ell: usize) -> Result<ApproxCounter> {
    let m = cfg.sample_size(scene.len())?;
    let sample = draw_sample(scene.len(), m, cfg.seed)?;
    build_approx_counter_for(scene, sample, ell)
}

/// Counter over a given sample.
pub fn build_approx_counter_for(scene: &Scene, sample: Vec<usize>, ell: usize) -> Result<ApproxCounter> {
    let ids: BTreeSet<usize> = sample.iter().copied().collect();
    let built = ids
        .into_par_iter()
        .map(|id| build_target_structure(scene, id, ell).map(|s| (id, s)))
        .collect::<Result<Vec<_>>>()?;
    Ok(ApproxCounter {
        sample,
        ell,
        structures: built.into_iter().collect(),
    })
}

/// Fraction of sampled draws whose target structure reports visibility;
/// every draw queries its structure, so a query costs `ell * m` point
/// locations.
pub fn approx_query(counter: &ApproxCounter, p: &Point) -> Result<Rational> {
    let mut hits = 0usize;
    for id in &counter.sample {
        if target_query(&counter.structures[id], p)? {
            hits += 1;
        }
    }
    Ok(Rational::new(hits.into(), counter.sample.len().into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{is_target_visible, visibility_count};
    use crate::generate::{generate, SceneGenSpec, SceneKind};
    use crate::kernel::ratio;

    #[test]
    fn sample_size_formulas() {
        assert_eq!(chernoff_sample_size(0.5, 0.5).unwrap(), 3);
        assert_eq!(chernoff_sample_size(0.1, 0.05).unwrap(), 185);
        // 2 e^{-2 * 0.99^2} <= 0.5 already holds at m = 1
        assert_eq!(chernoff_sample_size(0.99, 0.5).unwrap(), 1);
        assert!(chernoff_sample_size(1.0, 0.5).is_err());
        assert!(chernoff_sample_size(0.1, 0.0).is_err());
        assert_eq!(vc_sample_size(256, 0.25, 0.1, 1.0).unwrap(), 3072);
        assert!(vc_sample_size(1024, 0.1, 0.1, 1.0).unwrap() >= vc_sample_size(64, 0.1, 0.1, 1.0).unwrap());
        assert_eq!(practical_sample_size(1024).unwrap(), 1000);
        assert_eq!(practical_sample_size(16).unwrap(), 160);
        // the hit bound is the VC bound times delta
        assert_eq!(hit_sample_size(256, 0.25, 1.0).unwrap(), 768);
    }

    #[test]
    fn drawing() {
        assert!(draw_sample(4, 0, 1).is_err());
        assert_eq!(draw_sample(1, 5, 3).unwrap(), vec![0; 5]);
        assert_eq!(draw_sample(50, 20, 9).unwrap(), draw_sample(50, 20, 9).unwrap());
        assert_ne!(draw_sample(50, 20, 9).unwrap(), draw_sample(50, 20, 10).unwrap());
    }

    #[test]
    fn estimate_identities() {
        let s = generate(&SceneGenSpec::new(SceneKind::A, 16, 2)).unwrap().scene;
        let p = Point::new(ratio(1 << 29, 3), ratio(1 << 29, 7));
        let all: Vec<usize> = (0..s.len()).collect();
        let truth = visibility_count(&s, &p).unwrap();
        assert_eq!(
            sample_estimate(&s, &all, &p).unwrap(),
            Rational::new(truth.into(), s.len().into())
        );
        let one = Scene::new(vec![(Point::from_ints(0, 0), Point::from_ints(1, 0))]).unwrap();
        assert_eq!(sample_estimate(&one, &[0, 0, 0], &Point::from_ints(5, 5)).unwrap(), Rational::one());
    }

    #[test]
    fn bulk_line_counts_match() {
        for (kind, seed) in [(SceneKind::A, 3), (SceneKind::B, 1), (SceneKind::C, 2)] {
            let s = generate(&SceneGenSpec::new(kind, 9, seed)).unwrap().scene;
            for mode in [CandidateLines::Pruned, CandidateLines::All] {
                let bulk = candidate_line_counts(&s, mode);
                let single: Vec<usize> = (0..s.len()).map(|t| candidate_lines_meeting(&s, t, mode)).collect();
                assert_eq!(bulk, single, "{kind}");
            }
        }
    }

    #[test]
    fn cuts_avoid_hits_and_balance() {
        let hits: Vec<Rational> = (1..=9).map(|i| ratio(i, 10)).collect();
        let c = cut_params(&hits, 3);
        assert_eq!(c, vec![ratio(7, 20), ratio(13, 20)]);
        let c = cut_params(&[], 4);
        assert_eq!(c, vec![ratio(1, 4), ratio(1, 2), ratio(3, 4)]);
        let c = cut_params(&[ratio(1, 2)], 5);
        assert_eq!(c.len(), 4);
        assert!(c.windows(2).all(|w| w[0] < w[1]));
        assert!(!c.contains(&ratio(1, 2)));
    }

    fn gp_points(scene: &Scene, count: usize, seed: u64) -> Vec<Point> {
        let (lo, hi) = scene.bounding_box().unwrap();
        let (w, h) = (&hi.x - &lo.x, &hi.y - &lo.y);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut out = Vec::new();
        while out.len() < count {
            let p = Point::new(
                &lo.x - &w / Rational::from_integer(4.into()) + &w * ratio(rng.gen_range(0..1_500_001), 1_000_000),
                &lo.y - &h / Rational::from_integer(4.into()) + &h * ratio(rng.gen_range(0..1_500_001), 1_000_000),
            );
            if is_general_position(scene, &p) {
                out.push(p);
            }
        }
        out
    }

    #[test]
    fn target_structure_matches_direct_test() {
        let s = generate(&SceneGenSpec::new(SceneKind::B, 8, 5)).unwrap().scene;
        let pts = gp_points(&s, 120, 1);
        for t in [0, 3] {
            let occ = s.without(t);
            let seg = s.segment(t).clone();
            for (ell, mode) in [(1, CandidateLines::Pruned), (3, CandidateLines::Pruned), (2, CandidateLines::All)] {
                let ts = build_target_structure_with(&s, t, ell, mode).unwrap();
                assert_eq!(ts.pieces.len(), ell);
                for p in &pts {
                    let before = ts.locations();
                    let got = match target_query(&ts, p) {
                        Ok(v) => v,
                        Err(Error::BoundaryQuery(_)) => continue,
                        Err(e) => panic!("{e}"),
                    };
                    assert_eq!(ts.locations() - before, ell);
                    assert_eq!(got, is_target_visible(&occ, p, &seg.a, &seg.b).unwrap(), "t={t} ell={ell} p={p}");
                }
            }
        }
    }

    #[test]
    fn empty_occluders_see_everything() {
        let s = Scene::new(vec![(Point::from_ints(0, 0), Point::from_ints(4, 1))]).unwrap();
        let ts = build_target_structure(&s, 0, 3).unwrap();
        assert!(ts.pieces.iter().all(|p| p.labels.iter().all(|&l| l)));
        assert!(target_query(&ts, &Point::from_ints(-7, 9)).unwrap());
    }

    #[test]
    fn peephole_probes() {
        let g = generate(&SceneGenSpec::new(SceneKind::Peephole, 3, 1)).unwrap();
        let ts = build_target_structure(&g.scene, 0, 2).unwrap();
        assert!(target_query(&ts, &g.probes[0]).unwrap());
        assert!(!target_query(&ts, &g.probes[1]).unwrap());
    }

    #[test]
    fn counter_equals_estimator() {
        let s = generate(&SceneGenSpec::new(SceneKind::A, 9, 3)).unwrap().scene;
        let cfg = SampleConfig {
            explicit_m: Some(6),
            ..SampleConfig::new(SampleMode::Chernoff, 0.1, 0.05, 4)
        };
        let counter = build_approx_counter(&s, &cfg, 2).unwrap();
        for p in gp_points(&s, 40, 2) {
            match approx_query(&counter, &p) {
                Ok(v) => assert_eq!(v, sample_estimate(&s, &counter.sample, &p).unwrap()),
                Err(Error::BoundaryQuery(_)) => {}
                Err(e) => panic!("{e}"),
            }
        }
        let one = Scene::new(vec![(Point::from_ints(0, 0), Point::from_ints(1, 0))]).unwrap();
        let c1 = build_approx_counter(&one, &cfg, 1).unwrap();
        assert_eq!(approx_query(&c1, &Point::from_ints(3, 8)).unwrap(), Rational::one());
    }
}
