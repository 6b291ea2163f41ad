//! Visibility space partitions: arrangements of endpoint lines whose
//! faces carry a constant visible set, plus k-relaxed coarsenings.

use std::collections::{BTreeSet, HashMap};
use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::arrangement::{build_arrangement, Boundary, Curve, Subdivision};
use crate::error::{Error, Result};
use crate::exact::{is_general_position, visibility_graph, visible_set};
use crate::kernel::{ray_first_hit, Line, Point, Ray};
use crate::scene::Scene;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VspMode {
    Full,
    Pruned,
}

impl std::str::FromStr for VspMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "full" => Ok(VspMode::Full),
            "pruned" => Ok(VspMode::Pruned),
            _ => Err(Error::Domain(format!("unknown vsp mode {s:?}"))),
        }
    }
}

/// Fixed-width bit set over segment ids.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IdSet(Vec<u64>);

impl IdSet {
    pub fn from_ids(n: usize, ids: impl IntoIterator<Item = usize>) -> Self {
        let mut w = vec![0u64; n.div_ceil(64)];
        for i in ids {
            w[i / 64] |= 1 << (i % 64);
        }
        IdSet(w)
    }

    pub fn contains(&self, i: usize) -> bool {
        self.0.get(i / 64).is_some_and(|w| w >> (i % 64) & 1 == 1)
    }

    pub fn count(&self) -> usize {
        self.0.iter().map(|w| w.count_ones() as usize).sum()
    }
}

#[derive(Clone, Debug)]
pub struct VspConfig {
    pub keep_drop_test: bool,
    /// Per-face visible sets are kept only up to this scene size.
    pub store_sets_max: usize,
}

impl Default for VspConfig {
    fn default() -> Self {
        VspConfig {
            keep_drop_test: false,
            store_sets_max: 4096,
        }
    }
}

/// A kept piece of an endpoint-pair line. `pair` holds endpoint indices
/// (`2 * id + k`); `cut` is the first scene hit that bounds a ray.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrunedPiece {
    pub curve: Curve,
    pub pair: (usize, usize),
    pub cut: Option<Point>,
}

#[derive(Clone, Debug)]
pub struct VspStructure {
    pub sub: Arc<Subdivision>,
    pub counts: Vec<usize>,
    pub sets: Option<Vec<IdSet>>,
    pub mode: VspMode,
    /// Interior point per face at which the label was computed.
    pub label_points: Vec<Point>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct VspStats {
    pub vertices: usize,
    pub edges: usize,
    pub faces: usize,
    /// Boundary segment count, the size of the partition.
    pub n: usize,
    /// Edges whose two sides carry different counts.
    pub n_sep: usize,
}

fn endpoint(scene: &Scene, v: usize) -> &Point {
    let s = scene.segment(v / 2);
    if v.is_multiple_of(2) {
        &s.a
    } else {
        &s.b
    }
}

/// Every distinct line through two distinct endpoint positions.
pub fn candidate_lines_full(scene: &Scene) -> Vec<Line> {
    let pts = scene.distinct_endpoints();
    let mut set = BTreeSet::new();
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            if let Some(l) = Line::through(&pts[i], &pts[j]) {
                set.insert(l);
            }
        }
    }
    set.into_iter().collect()
}

/// Supporting lines of all segments, then for every visibility-graph edge
/// between different segments the two outward rays, each cut at its first
/// scene hit.
pub fn candidate_pieces_pruned(scene: &Scene) -> Vec<PrunedPiece> {
    let mut out: Vec<PrunedPiece> = scene
        .segments()
        .iter()
        .map(|s| PrunedPiece {
            curve: Curve::Line(s.supporting_line()),
            pair: (2 * s.id, 2 * s.id + 1),
            cut: None,
        })
        .collect();
    for (u, v) in visibility_graph(scene).edges {
        if u / 2 == v / 2 {
            continue;
        }
        let skip: BTreeSet<usize> = [u / 2, v / 2].into();
        for (from, away) in [(u, v), (v, u)] {
            let a = endpoint(scene, from);
            let ray = Ray::away_from(a, endpoint(scene, away)).expect("distinct endpoints");
            let (curve, cut) = match ray_first_hit(scene, &ray, &skip) {
                Some((_, hit)) => (Curve::Segment(a.clone(), hit.clone()), Some(hit)),
                None => (Curve::Ray(ray), None),
            };
            out.push(PrunedPiece {
                curve,
                pair: (from, away),
                cut,
            });
        }
    }
    out
}

fn curve_contains(c: &Curve, p: &Point) -> bool {
    match c {
        Curve::Line(l) => l.contains(p),
        Curve::Segment(a, b) => crate::kernel::Segment::new(a.clone(), b.clone(), 0)
            .is_some_and(|s| s.contains(p)),
        Curve::Ray(r) => {
            let l = r.supporting_line();
            if !l.contains(p) {
                return false;
            }
            let (dx, dy) = p.sub(&r.origin);
            !(dx * &r.dx + dy * &r.dy < num_traits::Zero::zero())
        }
    }
}

pub fn build_vsp(scene: &Scene, mode: VspMode, cfg: &VspConfig) -> Result<VspStructure> {
    let curves: Vec<Curve> = match mode {
        VspMode::Full => candidate_lines_full(scene).into_iter().map(Curve::Line).collect(),
        VspMode::Pruned => {
            let pieces = candidate_pieces_pruned(scene);
            if cfg.keep_drop_test {
                return build_with_drop_test(scene, pieces, cfg);
            }
            pieces.into_iter().map(|p| p.curve).collect()
        }
    };
    Ok(label(scene, build_arrangement(&curves), mode, cfg))
}

/// Drops every non-supporting piece across none of whose edges the
/// visible set changes, then rebuilds.
fn build_with_drop_test(scene: &Scene, pieces: Vec<PrunedPiece>, cfg: &VspConfig) -> Result<VspStructure> {
    let curves: Vec<Curve> = pieces.iter().map(|p| p.curve.clone()).collect();
    let first = label(scene, build_arrangement(&curves), VspMode::Pruned, cfg);
    let mut by_line: HashMap<Line, Vec<usize>> = HashMap::new();
    for (i, p) in pieces.iter().enumerate() {
        if p.pair.0 / 2 != p.pair.1 / 2 {
            let l = Line::through(endpoint(scene, p.pair.0), endpoint(scene, p.pair.1)).unwrap();
            by_line.entry(l).or_default().push(i);
        }
    }
    let mut needed = vec![false; pieces.len()];
    for e in 0..first.sub.edge_count() {
        let (f, g) = first.sub.edge_faces(e);
        if first.same_label(f, g) {
            continue;
        }
        let (a, b) = first.sub.edge_endpoints(e);
        let m = a.midpoint(b);
        if let Some(ids) = Line::through(a, b).and_then(|l| by_line.get(&l)) {
            for &i in ids {
                if curve_contains(&pieces[i].curve, &m) {
                    needed[i] = true;
                }
            }
        }
    }
    let kept: Vec<Curve> = pieces
        .iter()
        .enumerate()
        .filter(|(i, p)| needed[*i] || p.pair.0 / 2 == p.pair.1 / 2)
        .map(|(_, p)| p.curve.clone())
        .collect();
    Ok(label(scene, build_arrangement(&kept), VspMode::Pruned, cfg))
}

/// Labels every face by a sweep at an interior point in general position.
fn label(scene: &Scene, sub: Subdivision, mode: VspMode, cfg: &VspConfig) -> VspStructure {
    let n = scene.len();
    let labelled: Vec<(Point, IdSet)> = (0..sub.face_count())
        .into_par_iter()
        .map(|f| {
            let mut p = sub.representative(f).clone();
            let mut rng = ChaCha8Rng::seed_from_u64(f as u64);
            while !is_general_position(scene, &p) {
                p = sub.sample_in_face(f, &mut rng);
            }
            let vis = visible_set(scene, &p).expect("general position");
            (p, IdSet::from_ids(n, vis.visible))
        })
        .collect();
    let counts = labelled.iter().map(|(_, s)| s.count()).collect();
    let (label_points, sets): (Vec<Point>, Vec<IdSet>) = labelled.into_iter().unzip();
    VspStructure {
        sub: Arc::new(sub),
        counts,
        sets: (n <= cfg.store_sets_max).then_some(sets),
        mode,
        label_points,
    }
}

impl VspStructure {
    fn same_label(&self, f: usize, g: usize) -> bool {
        match &self.sets {
            Some(s) => s[f] == s[g],
            None => self.counts[f] == self.counts[g],
        }
    }

    pub fn stats(&self) -> VspStats {
        let st = self.sub.stats();
        let n_sep = (0..st.edges)
            .filter(|&e| {
                let (f, g) = self.sub.edge_faces(e);
                self.counts[f] != self.counts[g]
            })
            .count();
        VspStats {
            vertices: st.vertices,
            edges: st.edges,
            faces: st.faces,
            n: st.boundary_segments,
            n_sep,
        }
    }

    /// Face containing `p`, or a boundary error.
    pub fn face_of(&self, p: &Point) -> Result<usize> {
        let r = self.sub.locate(p);
        match r.on_boundary {
            Some(_) => Err(Error::BoundaryQuery(Box::new(p.clone()))),
            None => Ok(r.face),
        }
    }
}

pub fn vsp_query(vsp: &VspStructure, p: &Point) -> Result<usize> {
    Ok(vsp.counts[vsp.face_of(p)?])
}

#[derive(Clone, Debug)]
pub struct RelaxedVsp {
    pub sub: Arc<Subdivision>,
    pub k: usize,
    pub kappa: usize,
    /// Super-face of every original face.
    pub super_of: Vec<usize>,
    pub super_counts: Vec<usize>,
    pub kept: Vec<bool>,
    pub kept_edges: usize,
    pub n_sep: usize,
}

impl RelaxedVsp {
    pub fn super_face_count(&self) -> usize {
        self.super_counts.len()
    }
}

/// Whether an edge between counts `lo < hi` passes a threshold `t`
/// (between levels `t` and `t + 1`) with `t ≡ kappa (mod k + 1)`.
fn crosses_residue(lo: usize, hi: usize, kappa: usize, k: usize) -> bool {
    let m = k + 1;
    if hi - lo >= m {
        return true;
    }
    let r = kappa % m;
    // smallest t >= lo with t ≡ r
    let t = lo + (r + m - lo % m) % m;
    t < hi
}

fn find(p: &mut [usize], mut x: usize) -> usize {
    while p[x] != x {
        p[x] = p[p[x]];
        x = p[x];
    }
    x
}

/// Union-find over faces with the count range of every class.
struct Merge {
    parent: Vec<usize>,
    range: Vec<(usize, usize)>,
}

impl Merge {
    fn new(counts: &[usize]) -> Self {
        Merge {
            parent: (0..counts.len()).collect(),
            range: counts.iter().map(|&c| (c, c)).collect(),
        }
    }

    /// Joins the classes of `f` and `g` if the joined range spans at most
    /// `limit`; true when they end up in one class.
    fn join(&mut self, f: usize, g: usize, limit: usize) -> bool {
        let (rf, rg) = (find(&mut self.parent, f), find(&mut self.parent, g));
        if rf == rg {
            return true;
        }
        let lo = self.range[rf].0.min(self.range[rg].0);
        let hi = self.range[rf].1.max(self.range[rg].1);
        if hi - lo > limit {
            return false;
        }
        let (a, b) = (rf.min(rg), rf.max(rg));
        self.parent[b] = a;
        self.range[a] = (lo, hi);
        true
    }
}

/// Keeps the count-separating edges of one residue class and merges faces
/// across all other edges. Kept edges whose two sides can still be joined
/// within a count range of `k` are then dropped greedily, smallest jump
/// first; edges jumping by more than one make this pass necessary for the
/// size bound.
pub fn coarsen_vsp(vsp: &VspStructure, k: usize) -> RelaxedVsp {
    let sub = &vsp.sub;
    let mut sep: Vec<(usize, usize, usize)> = (0..sub.edge_count())
        .filter_map(|e| {
            let (f, g) = sub.edge_faces(e);
            let (a, b) = (vsp.counts[f], vsp.counts[g]);
            (a != b).then(|| (e, a.min(b), a.max(b)))
        })
        .collect();
    sep.sort_by_key(|&(e, lo, hi)| (hi - lo, e));
    let attempt = |kappa: usize| {
        let mut kept = vec![false; sub.edge_count()];
        for &(e, lo, hi) in &sep {
            kept[e] = crosses_residue(lo, hi, kappa, k);
        }
        let mut m = Merge::new(&vsp.counts);
        // within a residue block every range stays below k + 1 counts
        for (e, &keep) in kept.iter().enumerate() {
            if !keep {
                let (f, g) = sub.edge_faces(e);
                m.join(f, g, usize::MAX);
            }
        }
        loop {
            let mut changed = false;
            for &(e, _, _) in &sep {
                let (f, g) = sub.edge_faces(e);
                if kept[e] && m.join(f, g, k) {
                    kept[e] = false;
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        (kept, m)
    };
    let (kappa, (kept, mut merge)) = (1..=k + 1)
        .map(|kp| (kp, attempt(kp)))
        .min_by_key(|(_, (kept, _))| kept.iter().filter(|&&b| b).count())
        .unwrap();
    let nf = sub.face_count();
    let mut ids: HashMap<usize, usize> = HashMap::new();
    let mut super_of = vec![0; nf];
    let mut super_counts = Vec::new();
    for (f, slot) in super_of.iter_mut().enumerate() {
        let r = find(&mut merge.parent, f);
        *slot = *ids.entry(r).or_insert_with(|| {
            super_counts.push(vsp.counts[r]);
            super_counts.len() - 1
        });
    }
    RelaxedVsp {
        sub: Arc::clone(&vsp.sub),
        k,
        kappa,
        super_of,
        super_counts,
        kept_edges: kept.iter().filter(|&&b| b).count(),
        kept,
        n_sep: sep.len(),
    }
}

pub fn relaxed_query(rvsp: &RelaxedVsp, p: &Point) -> Result<usize> {
    let r = rvsp.sub.locate(p);
    match r.on_boundary {
        Some(Boundary::Edge(e)) if !rvsp.kept[e] => {}
        Some(_) => return Err(Error::BoundaryQuery(Box::new(p.clone()))),
        None => {}
    }
    Ok(rvsp.super_counts[rvsp.super_of[r.face]])
}
