//! The three experiments: visibility count statistics over a probe grid,
//! spread of the sampled estimate, and memory against query time of the
//! preprocessed counter. Each emits CSV.

use std::fmt::Write as _;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::approx::{
    approx_query, build_approx_counter_for, draw_sample, sample_estimate, SampleConfig, SampleMode,
};
use crate::error::{Error, Result};
use crate::exact::{nudge_to_general_position, visibility_count};
use crate::generate::{generate, SceneGenSpec, SceneKind};
use crate::kernel::{ratio, to_f64, Point, Rational};
use crate::scene::Scene;

pub const COUNTS_HEADER: &str = "kind,n,seed,probe_count,min,avg,max";
pub const VARIANCE_HEADER: &str = "kind,n,m,trials,sigma";
pub const MEMTIME_HEADER: &str =
    "kind,n,ell,m,edges,faces,build_ms,query_us_mean,locations_per_query";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Experiment {
    Counts,
    Variance,
    Memtime,
}

impl std::str::FromStr for Experiment {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "counts" => Ok(Experiment::Counts),
            "variance" => Ok(Experiment::Variance),
            "memtime" => Ok(Experiment::Memtime),
            _ => Err(Error::Domain(format!("unknown experiment {s:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EllPolicy {
    One,
    QuarterRoot,
    Sqrt,
    Fixed(usize),
}

impl EllPolicy {
    pub fn ell(self, n: usize) -> usize {
        match self {
            EllPolicy::One => 1,
            EllPolicy::QuarterRoot => ((n as f64).powf(0.25).ceil() as usize).max(1),
            EllPolicy::Sqrt => ((n as f64).sqrt().ceil() as usize).max(1),
            EllPolicy::Fixed(l) => l.max(1),
        }
    }
}

impl std::str::FromStr for EllPolicy {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "1" | "one" => Ok(EllPolicy::One),
            "quarter_root" => Ok(EllPolicy::QuarterRoot),
            "sqrt" => Ok(EllPolicy::Sqrt),
            _ => s
                .parse::<usize>()
                .ok()
                .filter(|&l| l >= 1)
                .map(EllPolicy::Fixed)
                .ok_or_else(|| Error::Domain(format!("bad ell {s:?}"))),
        }
    }
}

#[derive(Clone, Debug)]
pub struct ExperimentSpec {
    pub experiment: Experiment,
    pub kinds: Vec<SceneKind>,
    pub sizes: Vec<usize>,
    pub seeds: usize,
    pub ell_policies: Vec<EllPolicy>,
    pub sample_mode: SampleMode,
    /// Overrides the sample size of the variance and memtime runs.
    pub sample_m: Option<usize>,
    /// Independent samples per scene in the variance run.
    pub variance_trials: usize,
    pub variance_viewpoints: usize,
    pub memtime_queries: usize,
    /// Probe grid side of the counts run.
    pub grid: usize,
}

impl ExperimentSpec {
    pub fn new(experiment: Experiment, kinds: Vec<SceneKind>, sizes: Vec<usize>, seeds: usize) -> Self {
        ExperimentSpec {
            experiment,
            kinds,
            sizes,
            seeds,
            ell_policies: vec![EllPolicy::One, EllPolicy::QuarterRoot, EllPolicy::Sqrt],
            sample_mode: SampleMode::Practical,
            sample_m: None,
            variance_trials: 30,
            variance_viewpoints: 20,
            memtime_queries: 100,
            grid: 10,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.seeds == 0 {
            return Err(Error::Domain("seeds must be at least 1".into()));
        }
        if self.sizes.is_empty() || self.sizes.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Domain("size ladder must be non-empty and strictly increasing".into()));
        }
        if self.kinds.is_empty() {
            return Err(Error::Domain("no scene kinds given".into()));
        }
        Ok(())
    }

    fn cells(&self) -> Vec<(SceneKind, usize, u64)> {
        let mut out = Vec::new();
        for &k in &self.kinds {
            for &n in &self.sizes {
                for s in 1..=self.seeds as u64 {
                    out.push((k, n, s));
                }
            }
        }
        out
    }

    fn sample_size(&self, n: usize) -> Result<usize> {
        let mut cfg = SampleConfig::new(self.sample_mode, 0.1, 0.05, 0);
        cfg.explicit_m = self.sample_m;
        cfg.sample_size(n)
    }
}

pub fn run(spec: &ExperimentSpec) -> Result<String> {
    match spec.experiment {
        Experiment::Counts => run_counts(spec),
        Experiment::Variance => run_variance(spec),
        Experiment::Memtime => run_memtime(spec),
    }
}

/// Jittered `side x side` grid over the scene's bounding box, each probe
/// moved into general position.
pub fn probe_grid(scene: &Scene, side: usize, seed: u64) -> Vec<Point> {
    let Some((lo, hi)) = scene.bounding_box() else {
        return Vec::new();
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5EED_9A1D);
    let (w, h) = (&hi.x - &lo.x, &hi.y - &lo.y);
    let side_r = Rational::from_integer(side.into());
    let step = (&w / &side_r).min(&h / &side_r) / Rational::from_integer(1000.into());
    let mut out = Vec::with_capacity(side * side);
    for i in 0..side {
        for j in 0..side {
            let jx = ratio(rng.gen_range(-400..=400), 1000);
            let jy = ratio(rng.gen_range(-400..=400), 1000);
            let fx = (Rational::from_integer(i.into()) + ratio(1, 2) + jx) / &side_r;
            let fy = (Rational::from_integer(j.into()) + ratio(1, 2) + jy) / &side_r;
            let p = Point::new(&lo.x + &w * fx, &lo.y + &h * fy);
            out.push(nudge_to_general_position(scene, &p, &step, &mut rng));
        }
    }
    out
}

fn scene_for(kind: SceneKind, n: usize, seed: u64) -> Result<Scene> {
    Ok(generate(&SceneGenSpec::new(kind, n, seed))?.scene)
}

pub fn run_counts(spec: &ExperimentSpec) -> Result<String> {
    spec.validate()?;
    let rows = spec
        .cells()
        .into_par_iter()
        .map(|(kind, n, seed)| {
            let scene = scene_for(kind, n, seed)?;
            let probes = probe_grid(&scene, spec.grid, seed);
            let counts = probes
                .iter()
                .map(|p| visibility_count(&scene, p))
                .collect::<Result<Vec<_>>>()?;
            let min = counts.iter().min().copied().unwrap_or(0);
            let max = counts.iter().max().copied().unwrap_or(0);
            let avg = counts.iter().sum::<usize>() as f64 / counts.len().max(1) as f64;
            Ok(format!("{kind},{n},{seed},{},{min},{avg:.4},{max}", counts.len()))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(csv(COUNTS_HEADER, rows))
}

/// Spread of the sampled ratio around the true ratio. The estimate is the
/// direct estimator, which the preprocessed counter reproduces exactly.
pub fn run_variance(spec: &ExperimentSpec) -> Result<String> {
    spec.validate()?;
    let rows = spec
        .cells()
        .into_par_iter()
        .map(|(kind, n, seed)| {
            let scene = scene_for(kind, n, seed)?;
            let m = spec.sample_size(scene.len())?;
            let sigma = estimate_sigma(&scene, m, spec.variance_trials, spec.variance_viewpoints, seed)?;
            Ok(format!("{kind},{n},{m},{},{sigma:.6}", spec.variance_trials))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(csv(VARIANCE_HEADER, rows))
}

/// Standard deviation of `estimate - truth`, mean-centred, over `trials`
/// fresh samples times `viewpoints` probe points.
pub fn estimate_sigma(scene: &Scene, m: usize, trials: usize, viewpoints: usize, seed: u64) -> Result<f64> {
    let side = (viewpoints as f64).sqrt().ceil() as usize;
    let probes: Vec<Point> = probe_grid(scene, side, seed).into_iter().take(viewpoints).collect();
    let n = scene.len();
    let truths = probes
        .iter()
        .map(|p| Ok(visibility_count(scene, p)? as f64 / n as f64))
        .collect::<Result<Vec<f64>>>()?;
    let mut devs = Vec::with_capacity(trials * probes.len());
    for t in 0..trials {
        let sample = draw_sample(n, m, seed.wrapping_mul(1_000_003).wrapping_add(t as u64))?;
        for (p, truth) in probes.iter().zip(&truths) {
            devs.push(to_f64(&sample_estimate(scene, &sample, p)?) - truth);
        }
    }
    let mean = devs.iter().sum::<f64>() / devs.len() as f64;
    let var = devs.iter().map(|d| (d - mean) * (d - mean)).sum::<f64>() / devs.len() as f64;
    Ok(var.sqrt())
}

pub fn run_memtime(spec: &ExperimentSpec) -> Result<String> {
    spec.validate()?;
    let mut cells = Vec::new();
    for (kind, n, seed) in spec.cells() {
        for &pol in &spec.ell_policies {
            cells.push((kind, n, seed, pol));
        }
    }
    // timings are measured one cell at a time
    let mut rows = Vec::new();
    for (kind, n, seed, pol) in cells {
        let scene = scene_for(kind, n, seed)?;
        let ell = pol.ell(scene.len());
        let m = spec.sample_size(scene.len())?;
        let sample = draw_sample(scene.len(), m, seed)?;
        let t0 = Instant::now();
        let counter = build_approx_counter_for(&scene, sample, ell)?;
        let build_ms = t0.elapsed().as_secs_f64() * 1e3;
        let side = (spec.memtime_queries as f64).sqrt().ceil() as usize;
        let probes: Vec<Point> = probe_grid(&scene, side, seed ^ 0xA5A5)
            .into_iter()
            .take(spec.memtime_queries)
            .collect();
        let before = counter.locations();
        let t1 = Instant::now();
        let mut answered = 0usize;
        for p in &probes {
            match approx_query(&counter, p) {
                Ok(_) => answered += 1,
                Err(Error::BoundaryQuery(_)) => {}
                Err(e) => return Err(e),
            }
        }
        let query_us = t1.elapsed().as_secs_f64() * 1e6 / answered.max(1) as f64;
        let per_query = (counter.locations() - before) / answered.max(1);
        rows.push(format!(
            "{kind},{n},{ell},{m},{},{},{build_ms:.3},{query_us:.3},{per_query}",
            counter.edges(),
            counter.faces()
        ));
    }
    Ok(csv(MEMTIME_HEADER, rows))
}

fn csv(header: &str, rows: Vec<String>) -> String {
    let mut out = String::with_capacity(64 * (rows.len() + 1));
    out.push_str(header);
    out.push('\n');
    for r in rows {
        let _ = writeln!(out, "{r}");
    }
    out
}

/// Drops the wall-time columns so runs can be compared byte for byte.
pub fn strip_wall_time(csv: &str) -> String {
    let mut lines = csv.lines();
    let Some(header) = lines.next() else {
        return String::new();
    };
    let cols: Vec<&str> = header.split(',').collect();
    let keep: Vec<usize> = (0..cols.len())
        .filter(|&i| cols[i] != "build_ms" && cols[i] != "query_us_mean")
        .collect();
    std::iter::once(header)
        .chain(lines)
        .map(|l| {
            let f: Vec<&str> = l.split(',').collect();
            keep.iter().map(|&i| f[i]).collect::<Vec<_>>().join(",")
        })
        .collect::<Vec<_>>()
        .join("\n")
}

/// Least-squares slope of `ln y` against `ln x`.
pub fn loglog_slope(points: &[(f64, f64)]) -> f64 {
    let pts: Vec<(f64, f64)> = points.iter().map(|(x, y)| (x.ln(), y.ln())).collect();
    let k = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / k;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / k;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    sxy / sxx
}
