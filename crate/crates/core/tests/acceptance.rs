// Acceptance suite. Runs without the test harness so every criterion prints
// one pass/fail line. Tolerances are pinned below.

use std::collections::BTreeSet;
use std::process::{Command, ExitCode};
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use viscount::approx::{
    approx_query, build_approx_counter_for, build_target_structure, candidate_line_counts, chernoff_sample_size,
    draw_sample, sample_estimate, target_query, CandidateLines,
};
use viscount::bench::{loglog_slope, probe_grid, run, strip_wall_time, Experiment, ExperimentSpec};
use viscount::exact::{
    is_general_position, is_target_visible, visibility_count, visibility_graph, visible_set, visible_set_oracle,
};
use viscount::generate::{generate, SceneGenSpec, SceneKind};
use viscount::kernel::to_f64;
use viscount::vsp::{build_vsp, coarsen_vsp, relaxed_query, vsp_query, VspConfig, VspMode, VspStructure};
use viscount::{validate_nondegenerate, Error, Point, Result, Scene};

// criterion 1
const C1_SIZES: [usize; 4] = [9, 16, 36, 64];
const C1_SCENES: u64 = 50;
const C1_VIEWPOINTS: usize = 100;
const C1_MAX_SECS: f64 = 120.0;
// criterion 2
const C2_MAX_N: usize = 12;
const C2_POINTS: usize = 1000;
const C2_FACE_SAMPLES: usize = 5;
// criterion 3
const C3_SLOPE: f64 = 4.0;
const C3_SLOPE_TOL: f64 = 0.7;
// criterion 4
const C4_KS: [usize; 4] = [0, 1, 2, 4];
const C4_POINTS: usize = 500;
// criterion 5
const C5_CELLS: [(SceneKind, usize); 5] = [
    (SceneKind::A, 16),
    (SceneKind::B, 16),
    (SceneKind::C, 16),
    (SceneKind::A, 64),
    (SceneKind::B, 64),
];
const C5_POINTS: usize = 500;
// criterion 6
const C6_DELTA: f64 = 0.1;
const C6_FAIL: f64 = 0.05;
const C6_M: usize = 185;
const C6_RESAMPLES: usize = 400;
const C6_SLACK: f64 = 0.033;
// criterion 7
const C7_SIZES: [usize; 4] = [16, 64, 256, 1024];
const C7_SEEDS: usize = 5;
const C7_LAWS: [(SceneKind, f64, f64); 3] = [(SceneKind::A, 1.0, 0.25), (SceneKind::B, 0.0, 0.2), (SceneKind::C, 0.3, 0.2)];
// criterion 9
const C9_POINTS: usize = 100;

/// Criteria with a part that cannot be met as stated. Each has a ledger
/// entry, still prints FAIL, and must pass every other part.
const KNOWN_UNATTAINABLE: [usize; 2] = [4, 5];

struct Outcome {
    pass: bool,
    /// Every part that can be met was met. Checked even for known
    /// unattainable criteria.
    attainable: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Result<Outcome> {
    Ok(Outcome {
        pass,
        attainable: pass,
        detail,
    })
}

fn scene(kind: SceneKind, n: usize, seed: u64) -> Result<Scene> {
    Ok(generate(&SceneGenSpec::new(kind, n, seed))?.scene)
}

/// `count` general-position viewpoints from a jittered grid.
fn viewpoints(scene: &Scene, count: usize, seed: u64) -> Vec<Point> {
    let side = (count as f64).sqrt().ceil() as usize;
    probe_grid(scene, side, seed).into_iter().take(count).collect()
}

fn criterion_1() -> Result<Outcome> {
    let start = Instant::now();
    let mut checked = 0usize;
    let mut bad = Vec::new();
    for kind in [SceneKind::A, SceneKind::B, SceneKind::C] {
        for n in C1_SIZES {
            for seed in 1..=C1_SCENES {
                let s = scene(kind, n, seed)?;
                if !validate_nondegenerate(&s).is_nondegenerate() {
                    bad.push(format!("{kind}{n}/{seed} degenerate"));
                    continue;
                }
                for p in viewpoints(&s, C1_VIEWPOINTS, seed) {
                    checked += 1;
                    if visible_set(&s, &p)? != visible_set_oracle(&s, &p)? {
                        bad.push(format!("{kind}{n}/{seed} at {p}"));
                    }
                }
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    outcome(
        bad.is_empty() && secs < C1_MAX_SECS,
        format!("{checked} viewpoints, {} mismatches {:?}, {secs:.1}s (limit {C1_MAX_SECS}s)", bad.len(), bad.first()),
    )
}

/// Scenes with at most 12 segments.
fn small_scenes() -> Result<Vec<(String, Scene)>> {
    let mut out = Vec::new();
    for (kind, size) in [(SceneKind::A, 8), (SceneKind::A, 12), (SceneKind::B, 4), (SceneKind::C, 4), (SceneKind::C, 5)] {
        for seed in 1..=2 {
            let s = scene(kind, size, seed)?;
            if s.len() <= C2_MAX_N {
                out.push((format!("{kind}{size}/{seed}"), s));
            }
        }
    }
    for g in [2, 3] {
        out.push((format!("peephole{g}"), scene(SceneKind::Peephole, g, 1)?));
    }
    out.push(("shatter2".into(), scene(SceneKind::Shatter, 2, 1)?));
    Ok(out)
}

fn face_constant(s: &Scene, vsp: &VspStructure, rng: &mut ChaCha8Rng) -> Result<bool> {
    for f in 0..vsp.sub.face_count() {
        let mut got = 0;
        while got < C2_FACE_SAMPLES {
            let p = vsp.sub.sample_in_face(f, rng);
            if !is_general_position(s, &p) {
                continue;
            }
            got += 1;
            if visibility_count(s, &p)? != vsp.counts[f] {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

fn criterion_2_and_3(vsps: &[(String, Scene, VspStructure, VspStructure)]) -> Result<Outcome> {
    let mut bad = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for (name, s, full, pruned) in vsps {
        for (i, p) in viewpoints(s, C2_POINTS, 7).iter().enumerate() {
            let want = visibility_count(s, p)?;
            if vsp_query(full, p)? != want || vsp_query(pruned, p)? != want {
                bad.push(format!("{name} point {i}"));
            }
        }
        for (mode, vsp) in [("full", full), ("pruned", pruned)] {
            if !face_constant(s, vsp, &mut rng)? {
                bad.push(format!("{name} {mode} face"));
            }
        }
    }
    outcome(
        bad.is_empty(),
        format!("{} scenes x {C2_POINTS} points, {} failures {:?}", vsps.len(), bad.len(), bad.first()),
    )
}

fn criterion_3(vsps: &[(String, Scene, VspStructure, VspStructure)]) -> Result<Outcome> {
    let mut incomplete = 0;
    let mut bad = Vec::new();
    for (name, s, full, pruned) in vsps {
        let k = 2 * s.len();
        if visibility_graph(s).m() == k * (k - 1) / 2 {
            continue;
        }
        incomplete += 1;
        if pruned.stats().n >= full.stats().n {
            bad.push(name.clone());
        }
    }
    let mut points = Vec::new();
    for g in 2..=5 {
        let s = scene(SceneKind::Peephole, g, 1)?;
        let full = build_vsp(&s, VspMode::Full, &VspConfig::default())?;
        points.push((s.len() as f64, full.stats().faces as f64));
    }
    let slope = loglog_slope(&points);
    let slope_ok = (slope - C3_SLOPE).abs() <= C3_SLOPE_TOL;
    outcome(
        bad.is_empty() && slope_ok,
        format!(
            "pruned < full on {}/{incomplete} incomplete-graph scenes; peephole face slope {slope:.2} (want {C3_SLOPE} +- {C3_SLOPE_TOL})",
            incomplete - bad.len()
        ),
    )
}

fn criterion_4(vsps: &[(String, Scene, VspStructure, VspStructure)]) -> Result<Outcome> {
    let mut size_bad = Vec::new();
    let mut error_bad = Vec::new();
    let mut weighted_bad = 0;
    let mut worst = 0i64;
    for (name, s, _, pruned) in vsps {
        let points = viewpoints(s, C4_POINTS, 11);
        let truth = points.iter().map(|p| visibility_count(s, p)).collect::<Result<Vec<_>>>()?;
        // sum of count jumps over separating edges
        let weighted: usize = (0..pruned.sub.edge_count())
            .map(|e| {
                let (f, g) = pruned.sub.edge_faces(e);
                pruned.counts[f].abs_diff(pruned.counts[g])
            })
            .sum();
        for k in C4_KS {
            let r = coarsen_vsp(pruned, k);
            if r.kept_edges > r.n_sep / (k + 1) {
                size_bad.push(format!("{name} k={k} kept {} > {}", r.kept_edges, r.n_sep / (k + 1)));
            }
            weighted_bad += usize::from(r.kept_edges > weighted / (k + 1));
            for (p, &want) in points.iter().zip(&truth) {
                let d = (relaxed_query(&r, p)? as i64 - want as i64).abs();
                worst = worst.max(d - k as i64);
                if d > k as i64 {
                    error_bad.push(format!("{name} k={k} off by {d}"));
                }
            }
        }
    }
    let attainable = error_bad.is_empty() && weighted_bad == 0;
    let mut o = outcome(
        size_bad.is_empty() && attainable,
        format!(
            "{} scenes, k in {C4_KS:?}: {} error violations (max excess {worst}); size bound violations {size_bad:?}; \
             bound with edges weighted by count jump violated {weighted_bad} times",
            vsps.len(),
            error_bad.len()
        ),
    )?;
    o.attainable = attainable;
    Ok(o)
}

fn criterion_5() -> Result<Outcome> {
    let mut bad = Vec::new();
    // failures other than memory at ell = n
    let mut hard = 0;
    let mut notes = Vec::new();
    for (kind, n) in C5_CELLS {
        let s = scene(kind, n, 1)?;
        let counts = candidate_line_counts(&s, CandidateLines::Pruned);
        let t = (0..s.len()).max_by_key(|&i| (counts[i], std::cmp::Reverse(i))).unwrap();
        let seg = s.segment(t);
        let occ = s.without(t);
        // a few spare points replace queries that land on a piece boundary
        let pool = viewpoints(&s, C5_POINTS + 50, 5);
        let truth = pool
            .iter()
            .map(|p| is_target_visible(&occ, p, &seg.a, &seg.b))
            .collect::<Result<Vec<_>>>()?;
        let ells: BTreeSet<usize> = [1, (n as f64).powf(0.25).ceil() as usize, (n as f64).sqrt().ceil() as usize, n]
            .into_iter()
            .collect();
        let mut memory = Vec::new();
        for &ell in &ells {
            let ts = build_target_structure(&s, t, ell)?;
            let mut answered = 0;
            let mut wrong = 0;
            let mut located = true;
            for (p, &want) in pool.iter().zip(&truth) {
                if answered == C5_POINTS {
                    break;
                }
                let before = ts.locations();
                match target_query(&ts, p) {
                    Ok(got) => {
                        answered += 1;
                        wrong += usize::from(got != want);
                        located &= ts.locations() - before == ell;
                    }
                    Err(Error::BoundaryQuery(_)) => {}
                    Err(e) => return Err(e),
                }
            }
            if wrong > 0 || answered < C5_POINTS || !located {
                hard += 1;
                bad.push(format!("{kind}{n} ell={ell}: {wrong} wrong of {answered}, locations ok {located}"));
            }
            memory.push((ell, ts.memory_proxy(), ts.lines_hitting));
        }
        let lines = memory[0].2;
        let mem: Vec<String> = memory.iter().map(|(l, m, _)| format!("{l}:{m}")).collect();
        if lines >= 2 * n {
            let decreasing = memory.windows(2).all(|w| w[1].1 < w[0].1);
            let below_n = memory[..memory.len() - 1].windows(2).all(|w| w[1].1 < w[0].1);
            hard += usize::from(!below_n);
            if !decreasing {
                bad.push(format!("{kind}{n} memory not decreasing [{}]", mem.join(" ")));
            }
        }
        notes.push(format!("{kind}{n} T={t} lines={lines} [{}]", mem.join(" ")));
    }
    let mut o = outcome(bad.is_empty(), format!("{}; failures {:?}", notes.join("; "), bad))?;
    o.attainable = hard == 0;
    Ok(o)
}

fn criterion_6() -> Result<Outcome> {
    let m = chernoff_sample_size(C6_DELTA, C6_FAIL)?;
    let s = scene(SceneKind::A, 64, 1)?;
    let p = viewpoints(&s, 1, 6).remove(0);
    let truth = visibility_count(&s, &p)? as f64 / s.len() as f64;
    let mut failures = 0;
    for r in 0..C6_RESAMPLES {
        let sample = draw_sample(s.len(), C6_M, 600 + r as u64)?;
        let est = to_f64(&sample_estimate(&s, &sample, &p)?);
        failures += usize::from((est - truth).abs() > C6_DELTA);
    }
    let frac = failures as f64 / C6_RESAMPLES as f64;
    outcome(
        m == C6_M && frac <= C6_FAIL + C6_SLACK,
        format!("m={m}, failure fraction {frac:.4} (limit {:.3})", C6_FAIL + C6_SLACK),
    )
}

fn criterion_7() -> Result<Outcome> {
    let kinds: Vec<SceneKind> = C7_LAWS.iter().map(|l| l.0).collect();
    let spec = ExperimentSpec::new(Experiment::Counts, kinds, C7_SIZES.to_vec(), C7_SEEDS);
    let csv = run(&spec)?;
    let mut pass = true;
    let mut notes = Vec::new();
    for (kind, want, tol) in C7_LAWS {
        let points: Vec<(f64, f64)> = csv
            .lines()
            .skip(1)
            .map(|row| row.split(',').collect::<Vec<_>>())
            .filter(|c| c[0] == kind.to_string())
            .map(|c| (c[1].parse().unwrap(), c[5].parse().unwrap()))
            .collect();
        let slope = loglog_slope(&points);
        let ok = (slope - want).abs() <= tol;
        pass &= ok;
        notes.push(format!("{kind} slope {slope:.3} (want {want} +- {tol})"));
    }
    outcome(pass, notes.join(", "))
}

fn criterion_8() -> Result<Outcome> {
    let mut notes = Vec::new();
    let mut pass = true;
    for k in [2usize, 3] {
        let g = generate(&SceneGenSpec::new(SceneKind::Shatter, k, 1))?;
        let targets = g.targets.clone().unwrap_or_default();
        let size_ok = g.scene.len() == k + (1 << k) * k / 2;
        let mut realized = BTreeSet::new();
        for (j, p) in g.probes.iter().enumerate() {
            let vis = visible_set_oracle(&g.scene, p)?;
            let bits: usize = targets.iter().enumerate().filter(|(_, &t)| vis.contains(t)).map(|(i, _)| 1 << i).sum();
            if bits == j {
                realized.insert(bits);
            }
        }
        let all = realized.len() == 1 << k;
        pass &= size_ok && all;
        notes.push(format!("k={k}: n={} size ok {size_ok}, {}/{} subsets", g.scene.len(), realized.len(), 1 << k));
    }
    outcome(pass, notes.join("; "))
}

fn criterion_9() -> Result<Outcome> {
    let mut checked = 0;
    let mut bad = 0;
    for (kind, n, m, ell) in [(SceneKind::A, 16, 12, 1), (SceneKind::A, 16, 12, 3), (SceneKind::C, 9, 10, 2)] {
        let s = scene(kind, n, 3)?;
        let counter = build_approx_counter_for(&s, draw_sample(s.len(), m, 9)?, ell)?;
        let mut answered = 0;
        for p in viewpoints(&s, C9_POINTS + 20, 9) {
            if answered == C9_POINTS {
                break;
            }
            match approx_query(&counter, &p) {
                Ok(r) => {
                    answered += 1;
                    bad += usize::from(r != sample_estimate(&s, &counter.sample, &p)?);
                }
                Err(Error::BoundaryQuery(_)) => {}
                Err(e) => return Err(e),
            }
        }
        checked += answered;
        bad += C9_POINTS - answered;
    }
    outcome(bad == 0, format!("{checked} queries over 3 configurations, {bad} mismatches"))
}

fn cli(args: &[&str]) -> Vec<u8> {
    let out = Command::new(env!("CARGO_BIN_EXE_viscount")).args(args).output().expect("run viscount");
    assert!(out.status.success(), "viscount {args:?}: {}", String::from_utf8_lossy(&out.stderr));
    out.stdout
}

fn criterion_10() -> Result<Outcome> {
    let dir = std::env::temp_dir().join(format!("viscount-accept-{}", std::process::id()));
    std::fs::create_dir_all(&dir)?;
    let path = |name: &str| dir.join(name).to_string_lossy().into_owned();
    let mut diffs = Vec::new();
    let gens = [("A", "40"), ("B", "20"), ("C", "20"), ("peephole", "4"), ("shatter", "3")];
    for (kind, n) in gens {
        let mut files = Vec::new();
        for run in 0..2 {
            let f = path(&format!("{kind}-{run}.txt"));
            cli(&["gen", "--kind", kind, "--n", n, "--seed", "17", "--out", &f]);
            files.push(std::fs::read(&f)?);
        }
        if files[0] != files[1] {
            diffs.push(format!("gen {kind}"));
        }
    }
    let benches = [
        ("counts", "A,C", "9,16"),
        ("variance", "A,C", "9,16"),
        ("memtime", "A", "9,16"),
    ];
    for (exp, kinds, sizes) in benches {
        let mut outs = Vec::new();
        for run in 0..2 {
            let f = path(&format!("{exp}-{run}.csv"));
            cli(&["bench", "--experiment", exp, "--kinds", kinds, "--sizes", sizes, "--seeds", "2", "--out", &f]);
            outs.push(strip_wall_time(&std::fs::read_to_string(&f)?));
        }
        if outs[0] != outs[1] {
            diffs.push(format!("bench {exp}"));
        }
    }
    std::fs::remove_dir_all(&dir)?;
    outcome(
        diffs.is_empty(),
        format!("{} gen + {} bench invocations repeated, differing: {diffs:?}", gens.len(), benches.len()),
    )
}

fn main() -> ExitCode {
    let small = small_scenes().expect("small scenes");
    let t = Instant::now();
    let vsps: Vec<_> = small
        .into_iter()
        .map(|(name, s)| {
            let full = build_vsp(&s, VspMode::Full, &VspConfig::default()).expect("full vsp");
            let pruned = build_vsp(&s, VspMode::Pruned, &VspConfig::default()).expect("pruned vsp");
            (name, s, full, pruned)
        })
        .collect();
    let vsp_secs = t.elapsed().as_secs_f64();

    type Check<'a> = Box<dyn Fn() -> Result<Outcome> + 'a>;
    let checks: Vec<(usize, &str, Check)> = vec![
        (1, "oracle equivalence", Box::new(criterion_1)),
        (2, "vsp correctness", Box::new(|| criterion_2_and_3(&vsps))),
        (3, "pruning effectiveness", Box::new(|| criterion_3(&vsps))),
        (4, "relaxed vsp", Box::new(|| criterion_4(&vsps))),
        (5, "tradeoff structure", Box::new(criterion_5)),
        (6, "chernoff coverage", Box::new(criterion_6)),
        (7, "scene laws", Box::new(criterion_7)),
        (8, "shatter", Box::new(criterion_8)),
        (9, "structural identity", Box::new(criterion_9)),
        (10, "determinism", Box::new(criterion_10)),
    ];
    println!("acceptance: built {} partition pairs in {vsp_secs:.1}s", vsps.len());
    // VISCOUNT_ACCEPT=4,5 runs a subset
    let only: Option<Vec<usize>> = std::env::var("VISCOUNT_ACCEPT")
        .ok()
        .map(|v| v.split(',').filter_map(|x| x.trim().parse().ok()).collect());
    let mut unexpected = Vec::new();
    for (id, name, check) in checks {
        if only.as_ref().is_some_and(|o| !o.contains(&id)) {
            continue;
        }
        let t = Instant::now();
        let (pass, attainable, detail) = match check() {
            Ok(o) => (o.pass, o.attainable, o.detail),
            Err(e) => (false, false, format!("error: {e}")),
        };
        let verdict = if pass { "PASS" } else { "FAIL" };
        println!("criterion {id} ({name}): {verdict} [{:.1}s] {detail}", t.elapsed().as_secs_f64());
        if !pass && !(attainable && KNOWN_UNATTAINABLE.contains(&id)) {
            unexpected.push(id);
        }
    }
    if unexpected.is_empty() {
        println!("acceptance: no unexpected failures (known unattainable: {KNOWN_UNATTAINABLE:?})");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: unexpected failures {unexpected:?}");
        ExitCode::FAILURE
    }
}
