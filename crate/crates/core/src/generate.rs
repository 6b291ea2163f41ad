//! Benchmark scene generators.
//!
//! Coordinates live on an integer grid (scene C adds dyadic fractions), so
//! validation stays exact and cheap. Every generator draws from a ChaCha8
//! stream seeded with `seed_from_u64(seed)`, validates the result, and on
//! failure redraws from the same stream, up to [`MAX_ATTEMPTS`] times.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::exact::nudge_to_general_position;
use crate::kernel::{rat, ratio, Point, Rational};
use crate::scene::{validate_nondegenerate, Scene};

pub const MAX_ATTEMPTS: usize = 32;

/// Side of the square that scenes A, B and C occupy.
pub const EXTENT: i64 = 1 << 30;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SceneKind {
    A,
    B,
    C,
    Peephole,
    Shatter,
}

impl fmt::Display for SceneKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SceneKind::A => "A",
            SceneKind::B => "B",
            SceneKind::C => "C",
            SceneKind::Peephole => "peephole",
            SceneKind::Shatter => "shatter",
        })
    }
}

impl FromStr for SceneKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "A" | "a" => SceneKind::A,
            "B" | "b" => SceneKind::B,
            "C" | "c" => SceneKind::C,
            "peephole" => SceneKind::Peephole,
            "shatter" => SceneKind::Shatter,
            _ => return Err(Error::Domain(format!("unknown scene kind {s:?}"))),
        })
    }
}

/// `size` is the segment budget for A/B/C, the gap count for peephole and
/// the target count for shatter.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SceneGenSpec {
    pub kind: SceneKind,
    pub size: usize,
    pub seed: u64,
}

impl SceneGenSpec {
    pub fn new(kind: SceneKind, size: usize, seed: u64) -> Self {
        SceneGenSpec { kind, size, seed }
    }
}

#[derive(Clone, Debug)]
pub struct GenConfig {
    /// Second shrink applied to scene B to obtain scene C.
    pub c_shrink: Rational,
}

impl Default for GenConfig {
    fn default() -> Self {
        GenConfig {
            c_shrink: ratio(1, 2),
        }
    }
}

#[derive(Clone, Debug)]
pub struct GeneratedScene {
    pub scene: Scene,
    pub targets: Option<Vec<usize>>,
    /// Construction viewpoints in general position: for peephole an
    /// aligned and a blocked point, for shatter one per target subset
    /// (subset `j` holds target `i` iff bit `i` of `j` is set).
    pub probes: Vec<Point>,
}

pub fn generate(spec: &SceneGenSpec) -> Result<GeneratedScene> {
    generate_with(spec, &GenConfig::default())
}

pub fn generate_with(spec: &SceneGenSpec, cfg: &GenConfig) -> Result<GeneratedScene> {
    if spec.size == 0 {
        return Err(Error::Domain("size must be at least 1".into()));
    }
    match spec.kind {
        SceneKind::Peephole if spec.size < 2 => {
            return Err(Error::Domain("peephole needs at least 2 gaps".into()))
        }
        SceneKind::Shatter if spec.size > 16 => {
            return Err(Error::Domain("shatter supports at most 16 targets".into()))
        }
        _ => {}
    }
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    for _ in 0..MAX_ATTEMPTS {
        let attempt = match spec.kind {
            SceneKind::A => scene_a(spec.size, &mut rng).map(plain),
            SceneKind::B => scene_b(spec.size, &mut rng).map(plain),
            SceneKind::C => scene_c(spec.size, &cfg.c_shrink, &mut rng).map(plain),
            SceneKind::Peephole => peephole(spec.size, &mut rng),
            SceneKind::Shatter => shatter(spec.size, &mut rng),
        };
        if let Some(g) = attempt {
            if validate_nondegenerate(&g.scene).is_nondegenerate() {
                return Ok(g);
            }
        }
    }
    Err(Error::Generation(format!(
        "{} scene of size {} stayed degenerate after {MAX_ATTEMPTS} attempts",
        spec.kind, spec.size
    )))
}

fn plain(scene: Scene) -> GeneratedScene {
    GeneratedScene {
        scene,
        targets: None,
        probes: Vec::new(),
    }
}

type P = [i64; 2];

fn pt(p: P) -> Point {
    Point::from_ints(p[0], p[1])
}

fn from_int_pairs(pairs: &[(P, P)]) -> Option<Scene> {
    Scene::new(pairs.iter().map(|&(a, b)| (pt(a), pt(b))).collect()).ok()
}

/// A random direction scaled to length `len`, drawn by rejection from a
/// disk (no trigonometry, so results are identical on every platform).
fn random_offset<R: Rng>(len: f64, rng: &mut R) -> P {
    loop {
        let x: i64 = rng.gen_range(-(1 << 20)..=(1 << 20));
        let y: i64 = rng.gen_range(-(1 << 20)..=(1 << 20));
        let r2 = (x * x + y * y) as f64;
        if r2 > (1u64 << 38) as f64 && r2 <= (1u64 << 40) as f64 {
            let s = len / r2.sqrt();
            return [(x as f64 * s).round() as i64, (y as f64 * s).round() as i64];
        }
    }
}

fn grid_side(n: usize) -> usize {
    let mut m = (n as f64).sqrt() as usize;
    while (m + 1) * (m + 1) <= n {
        m += 1;
    }
    while m * m > n {
        m -= 1;
    }
    m.max(1)
}

/// One randomly oriented segment per cell of the `m x m` grid, each of
/// length `cell / m`.
fn layout_a<R: Rng>(n: usize, rng: &mut R) -> Vec<(P, P)> {
    let m = grid_side(n) as i64;
    let cell = EXTENT / m;
    let len = (cell / m.max(2)).max(8);
    let mut out = Vec::with_capacity((m * m) as usize);
    for row in 0..m {
        for col in 0..m {
            let h = random_offset(len as f64 / 2.0, rng);
            let lo = len / 2 + 1;
            let cx = col * cell + rng.gen_range(lo..=cell - lo);
            let cy = row * cell + rng.gen_range(lo..=cell - lo);
            out.push(([cx - h[0], cy - h[1]], [cx + h[0], cy + h[1]]));
        }
    }
    out
}

fn scene_a<R: Rng>(n: usize, rng: &mut R) -> Option<Scene> {
    from_int_pairs(&layout_a(n, rng))
}

fn cross(u: P, w: P) -> i128 {
    u[0] as i128 * w[1] as i128 - u[1] as i128 * w[0] as i128
}

fn sub(a: P, b: P) -> P {
    [a[0] - b[0], a[1] - b[1]]
}

/// `num / den` with `den > 0`.
#[derive(Clone, Copy)]
struct Frac {
    num: i128,
    den: i128,
}

impl Frac {
    fn new(num: i128, den: i128) -> Self {
        if den < 0 {
            Frac { num: -num, den: -den }
        } else {
            Frac { num, den }
        }
    }

    fn lt(self, o: Frac) -> bool {
        self.num * o.den < o.num * self.den
    }
}

/// Where the ray `e + t d` first meets segment `a b`, as `(t, on_a, on_b)`.
fn ray_hit(e: P, d: P, a: P, b: P) -> Option<(Frac, bool, bool)> {
    let s = sub(b, a);
    let den = cross(d, s);
    if den == 0 {
        return None;
    }
    let ea = sub(a, e);
    let t = Frac::new(cross(ea, s), den);
    let u = Frac::new(cross(ea, d), den);
    if t.num <= 0 || u.num < 0 || u.num > u.den {
        return None;
    }
    Some((t, u.num == 0, u.num == u.den))
}

fn at(e: P, d: P, t: Frac) -> P {
    let r = |c: i64, dc: i64| -> i64 {
        let v = t.num * dc as i128;
        // round half away from zero
        let q = (2 * v + v.signum() * t.den) / (2 * t.den);
        c + q as i64
    };
    [r(e[0], d[0]), r(e[1], d[1])]
}

/// Scene B: every segment of an A layout, in id order, is grown at both
/// free ends until it touches another segment or nears the boundary.
/// A touched segment is split at the contact point, which becomes an
/// endpoint shared by three segments.
fn layout_b<R: Rng>(n: usize, rng: &mut R) -> Vec<(P, P)> {
    let orig = layout_a(n, rng);
    let mut pieces: Vec<(P, P)> = orig.clone();
    let mut owner: Vec<usize> = (0..orig.len()).collect();
    let mut ends: Vec<[usize; 2]> = (0..orig.len()).map(|i| [i, i]).collect();
    let mut shared: HashSet<P> = HashSet::new();
    for i in 0..orig.len() {
        for side in 0..2 {
            let pi = ends[i][side];
            let e = if side == 0 { pieces[pi].0 } else { pieces[pi].1 };
            if shared.contains(&e) {
                continue;
            }
            let d = if side == 0 {
                sub(orig[i].0, orig[i].1)
            } else {
                sub(orig[i].1, orig[i].0)
            };
            let mut best: Option<(Frac, usize, bool, bool)> = None;
            for (k, &(a, b)) in pieces.iter().enumerate() {
                if k == pi {
                    continue;
                }
                if let Some((t, ua, ub)) = ray_hit(e, d, a, b) {
                    if best.is_none_or(|(bt, ..)| t.lt(bt)) {
                        best = Some((t, k, ua, ub));
                    }
                }
            }
            let exit = box_exit(e, d);
            let new_end = match best {
                Some((t, k, ua, ub)) if t.lt(exit) => {
                    let (a, b) = pieces[k];
                    let x = if ua {
                        a
                    } else if ub {
                        b
                    } else {
                        let mut x = at(e, d, t);
                        if x != a && x != b && cross(sub(b, a), sub(x, a)) == 0 {
                            // keep the bend off the old line, on e's side
                            let sgn = cross(sub(b, a), sub(e, a)).signum() as i64;
                            let nrm = [-(b[1] - a[1]).signum(), (b[0] - a[0]).signum()];
                            x = [x[0] + sgn * nrm[0], x[1] + sgn * nrm[1]];
                        }
                        x
                    };
                    if x != a && x != b {
                        pieces[k] = (a, x);
                        pieces.push((x, b));
                        owner.push(owner[k]);
                        let o = owner[k];
                        if ends[o][1] == k {
                            ends[o][1] = pieces.len() - 1;
                        }
                    }
                    shared.insert(x);
                    x
                }
                _ => {
                    let f = rng.gen_range(1..=64) as f64 / 65536.0;
                    let t = exit.num as f64 / exit.den as f64 * (1.0 - f);
                    [
                        e[0] + (d[0] as f64 * t).round() as i64,
                        e[1] + (d[1] as f64 * t).round() as i64,
                    ]
                }
            };
            if side == 0 {
                pieces[pi].0 = new_end;
            } else {
                pieces[pi].1 = new_end;
            }
        }
    }
    pieces
}

/// Parameter at which `e + t d` leaves `[0, EXTENT]^2`.
fn box_exit(e: P, d: P) -> Frac {
    let mut best: Option<Frac> = None;
    for c in 0..2 {
        if d[c] == 0 {
            continue;
        }
        let wall = if d[c] > 0 { EXTENT } else { 0 };
        let t = Frac::new((wall - e[c]) as i128, d[c] as i128);
        if best.is_none_or(|b| t.lt(b)) {
            best = Some(t);
        }
    }
    best.expect("nonzero direction")
}

fn scene_b<R: Rng>(n: usize, rng: &mut R) -> Option<Scene> {
    from_int_pairs(&layout_b(n, rng))
}

/// Scene C: scene B with every segment shrunk about its midpoint. Each
/// end moves by a slightly jittered amount; an exact common factor would
/// make the pieces around a junction homothetic and their endpoint lines
/// parallel.
fn scene_c<R: Rng>(n: usize, shrink: &Rational, rng: &mut R) -> Option<Scene> {
    let half = (rat(1) - shrink) / rat(2);
    let pairs = layout_b(n, rng)
        .into_iter()
        .map(|(a, b)| {
            let (a, b) = (pt(a), pt(b));
            let ja = &half + ratio(rng.gen_range(-4096..=4096), 1 << 20);
            let jb = &half + ratio(rng.gen_range(-4096..=4096), 1 << 20);
            (a.lerp(&b, &ja), b.lerp(&a, &jb))
        })
        .collect();
    Scene::new(pairs).ok()
}

fn jitter<R: Rng>(p: P, j: i64, rng: &mut R) -> P {
    [p[0] + rng.gen_range(-j..=j), p[1] + rng.gen_range(-j..=j)]
}

/// Two fences with `g` gaps each above a long target (id 0).
fn peephole<R: Rng>(g: usize, rng: &mut R) -> Option<GeneratedScene> {
    let gap_step: i64 = 1 << 20;
    let gap_w = gap_step / 4;
    let h: i64 = 1 << 22;
    let jit = gap_step / 64;
    let gi = g as i64;
    let fence_half = (gi + 2) * gap_step * 4;
    // gap centres, doubled to stay integral for even g
    let centre = |j: i64| (2 * j - (gi - 1)) * gap_step / 2;
    let target_half = (gi + 1) * gap_step / 2;
    let mut pairs: Vec<(P, P)> = vec![(
        jitter([-target_half, 0], jit, rng),
        jitter([target_half, 0], jit, rng),
    )];
    for level in [h, 2 * h] {
        let mut left = -fence_half;
        for j in 0..gi {
            let right = centre(j) - gap_w / 2;
            pairs.push((jitter([left, level], jit, rng), jitter([right, level], jit, rng)));
            left = centre(j) + gap_w / 2;
        }
        pairs.push((
            jitter([left, level], jit, rng),
            jitter([fence_half, level], jit, rng),
        ));
    }
    let scene = from_int_pairs(&pairs)?;
    let mid = (gi - 1) / 2;
    let aligned = pt([centre(mid), 3 * h]);
    let blocked = pt([centre(0) + gap_step / 2, 3 * h]);
    let probes = [aligned, blocked]
        .iter()
        .map(|q| nudge_to_general_position(&scene, q, &rat(64), rng))
        .collect();
    Some(GeneratedScene {
        scene,
        targets: Some(vec![0]),
        probes,
    })
}

/// `k` short targets (ids `0..k`) along the x axis, one viewpoint per
/// target subset on a far arc, and for every viewpoint one shield per
/// target outside its subset, placed halfway along the sight cone.
fn shatter<R: Rng>(k: usize, rng: &mut R) -> Option<GeneratedScene> {
    let r: i64 = 1 << 12;
    let s = 8 * r;
    let ki = k as i64;
    let radius: i64 = (1i64 << 31).max(ki * s * (1i64 << (k + 3)));
    let subsets = 1usize << k;
    let mut pairs: Vec<(P, P)> = Vec::new();
    for i in 0..ki {
        let x = i * s - (ki - 1) * s / 2;
        let tilt = rng.gen_range(1..=r / 64);
        let y = rng.gen_range(-r / 16..=r / 16);
        pairs.push(([x - r / 2, y], [x + r / 2, y + tilt]));
    }
    // rational parametrisation of the arc from 45 to 135 degrees
    let (t_lo, t_hi) = (2f64.sqrt() - 1.0, 2f64.sqrt() + 1.0);
    let mut views: Vec<P> = Vec::with_capacity(subsets);
    for j in 0..subsets {
        let u = (j as f64 + 0.5) / subsets as f64;
        let t = t_hi + (t_lo - t_hi) * u;
        let q = 1.0 + t * t;
        views.push([
            ((1.0 - t * t) / q * radius as f64).round() as i64,
            (2.0 * t / q * radius as f64).round() as i64,
        ]);
    }
    let margin = r / 4;
    let jit = r / 64;
    for (j, v) in views.iter().enumerate() {
        for i in 0..k {
            if j >> i & 1 == 1 {
                continue;
            }
            let (ta, tb) = pairs[i];
            let half = |a: P| [(a[0] + v[0]).div_euclid(2), (a[1] + v[1]).div_euclid(2)];
            let (ca, cb) = (half(ta), half(tb));
            let dir = sub(cb, ca);
            let len = ((dir[0] as f64).powi(2) + (dir[1] as f64).powi(2)).sqrt();
            let ext = [
                (dir[0] as f64 / len * margin as f64).round() as i64,
                (dir[1] as f64 / len * margin as f64).round() as i64,
            ];
            pairs.push((
                jitter(sub(ca, ext), jit, rng),
                jitter([cb[0] + ext[0], cb[1] + ext[1]], jit, rng),
            ));
        }
    }
    let scene = from_int_pairs(&pairs)?;
    let probes = views
        .iter()
        .map(|&v| nudge_to_general_position(&scene, &pt(v), &rat(16), rng))
        .collect();
    Some(GeneratedScene {
        scene,
        targets: Some((0..k).collect()),
        probes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{visible_set, visible_set_oracle};
    use crate::scene::save_scene;

    #[test]
    fn scene_a_has_one_segment_per_cell() {
        let g = generate(&SceneGenSpec::new(SceneKind::A, 4, 1)).unwrap();
        assert_eq!(g.scene.len(), 4);
        let cell = rat(EXTENT / 2);
        let mut cells: Vec<(i64, i64)> = g
            .scene
            .segments()
            .iter()
            .map(|s| {
                let c = s.a.midpoint(&s.b);
                let cx = (&c.x / &cell).floor().to_integer().try_into().unwrap();
                let cy = (&c.y / &cell).floor().to_integer().try_into().unwrap();
                (cx, cy)
            })
            .collect();
        cells.sort();
        assert_eq!(cells, vec![(0, 0), (0, 1), (1, 0), (1, 1)]);
        let g = generate(&SceneGenSpec::new(SceneKind::A, 10, 1)).unwrap();
        assert_eq!(g.scene.len(), 9);
    }

    #[test]
    fn generation_is_deterministic() {
        for kind in [SceneKind::A, SceneKind::B, SceneKind::C, SceneKind::Peephole, SceneKind::Shatter] {
            let spec = SceneGenSpec::new(kind, 3, 7);
            let x = save_scene(&generate(&spec).unwrap().scene);
            let y = save_scene(&generate(&spec).unwrap().scene);
            assert_eq!(x, y, "{kind}");
        }
    }

    #[test]
    fn grown_scenes_are_valid_and_larger() {
        for seed in 0..3 {
            let b = generate(&SceneGenSpec::new(SceneKind::B, 25, seed)).unwrap();
            assert!(b.scene.len() >= 25);
            let c = generate(&SceneGenSpec::new(SceneKind::C, 25, seed)).unwrap();
            assert_eq!(c.scene.len(), b.scene.len());
        }
    }

    #[test]
    fn shatter_sizes() {
        for k in 1..=4usize {
            let g = generate(&SceneGenSpec::new(SceneKind::Shatter, k, 0)).unwrap();
            assert_eq!(g.scene.len(), k + (1 << k) * k / 2);
            assert_eq!(g.probes.len(), 1 << k);
        }
    }

    #[test]
    fn shatter_realizes_every_subset() {
        for k in 2..=4usize {
            let g = generate(&SceneGenSpec::new(SceneKind::Shatter, k, 0)).unwrap();
            for (j, q) in g.probes.iter().enumerate() {
                let vis = visible_set_oracle(&g.scene, q).unwrap();
                let got: usize = (0..k).filter(|&i| vis.contains(i)).map(|i| 1 << i).sum();
                assert_eq!(got, j, "k={k} probe {j}");
            }
        }
    }

    #[test]
    fn peephole_gaps_and_probes() {
        let g = generate(&SceneGenSpec::new(SceneKind::Peephole, 3, 0)).unwrap();
        assert_eq!(g.scene.len(), 1 + 2 * 4);
        let [aligned, blocked] = [&g.probes[0], &g.probes[1]];
        assert!(visible_set_oracle(&g.scene, aligned).unwrap().contains(0));
        assert!(!visible_set_oracle(&g.scene, blocked).unwrap().contains(0));
        assert!(!visible_set(&g.scene, blocked).unwrap().contains(0));
    }

    #[test]
    fn bad_sizes_are_rejected() {
        assert!(generate(&SceneGenSpec::new(SceneKind::A, 0, 0)).is_err());
        assert!(generate(&SceneGenSpec::new(SceneKind::Peephole, 1, 0)).is_err());
        assert!(generate(&SceneGenSpec::new(SceneKind::Shatter, 17, 0)).is_err());
    }
}
