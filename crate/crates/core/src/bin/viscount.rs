use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};

use viscount::approx::{approx_query, build_approx_counter, SampleConfig, SampleMode};
use viscount::bench::{run, EllPolicy, Experiment, ExperimentSpec};
use viscount::exact::{visibility_graph, visible_set, visible_set_oracle};
use viscount::generate::{generate, SceneGenSpec, SceneKind};
use viscount::scene::parse_rational;
use viscount::vsp::{build_vsp, coarsen_vsp, relaxed_query, vsp_query, VspConfig, VspMode};
use viscount::{load_scene, save_scene, validate_nondegenerate, Error, Point, Rational, Result, Scene};

#[derive(Parser)]
#[command(name = "viscount", version, about = "Visibility counting among segments in the plane")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Generate a scene file.
    Gen {
        #[arg(long)]
        kind: SceneKind,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Check a scene for crossings, collinear endpoints and parallel endpoint lines.
    Validate { file: PathBuf },
    /// Exact visibility count from a viewpoint.
    Count {
        file: PathBuf,
        #[arg(long, value_parser = parse_rat, allow_hyphen_values = true)]
        x: Rational,
        #[arg(long, value_parser = parse_rat, allow_hyphen_values = true)]
        y: Rational,
        /// Use the slow reference implementation.
        #[arg(long)]
        oracle: bool,
    },
    /// Endpoint visibility graph.
    Vgraph {
        file: PathBuf,
        #[arg(long)]
        stats: bool,
    },
    /// Visibility space partition.
    Vsp {
        file: PathBuf,
        #[arg(long)]
        mode: VspMode,
        #[arg(long)]
        keep_drop_test: bool,
        #[arg(long)]
        stats: bool,
        #[arg(long, value_parser = parse_point, allow_hyphen_values = true)]
        query: Option<Point>,
    },
    /// k-relaxed partition, coarsened from the pruned partition.
    Relax {
        file: PathBuf,
        #[arg(long)]
        k: usize,
        #[arg(long, value_parser = parse_point, allow_hyphen_values = true)]
        query: Option<Point>,
    },
    /// Sampled visibility ratio through per-target tradeoff structures.
    Approx {
        file: PathBuf,
        #[arg(long)]
        mode: SampleMode,
        #[arg(long)]
        delta: f64,
        #[arg(long)]
        fail_prob: f64,
        #[arg(long)]
        ell: EllPolicy,
        #[arg(long)]
        seed: u64,
        #[arg(long, value_parser = parse_point, allow_hyphen_values = true)]
        query: Option<Point>,
    },
    /// Run one experiment and write its CSV.
    Bench {
        #[arg(long)]
        experiment: Experiment,
        #[arg(long, value_delimiter = ',')]
        kinds: Vec<SceneKind>,
        #[arg(long, value_delimiter = ',')]
        sizes: Vec<usize>,
        #[arg(long)]
        seeds: usize,
        #[arg(long)]
        out: PathBuf,
    },
}

fn parse_rat(s: &str) -> std::result::Result<Rational, String> {
    parse_rational(s.trim())
}

fn parse_point(s: &str) -> std::result::Result<Point, String> {
    let (x, y) = s.split_once(',').ok_or_else(|| format!("expected X,Y, got {s:?}"))?;
    Ok(Point::new(parse_rat(x)?, parse_rat(y)?))
}

fn read_scene(path: &Path) -> Result<Scene> {
    load_scene(&std::fs::read_to_string(path)?)
}

fn join<T: ToString>(items: impl IntoIterator<Item = T>) -> String {
    items.into_iter().map(|v| v.to_string()).collect::<Vec<_>>().join(" ")
}

fn main() -> ExitCode {
    match dispatch(Cli::parse().cmd) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn dispatch(cmd: Cmd) -> Result<ExitCode> {
    match cmd {
        Cmd::Gen { kind, n, seed, out } => {
            let g = generate(&SceneGenSpec::new(kind, n, seed))?;
            std::fs::write(&out, save_scene(&g.scene))?;
            println!("wrote {} segments to {}", g.scene.len(), out.display());
        }
        Cmd::Validate { file } => {
            let scene = read_scene(&file)?;
            let report = validate_nondegenerate(&scene);
            for (i, j) in &report.crossing_pairs {
                println!("crossing segments {i} {j}");
            }
            for [a, b, c] in &report.collinear_triples {
                println!("collinear endpoints {a} {b} {c}");
            }
            for [[a, b], [c, d]] in &report.parallel_endpoint_line_pairs {
                println!("parallel endpoint lines {a}{b} and {c}{d}");
            }
            if !report.is_nondegenerate() {
                println!("degenerate");
                return Ok(ExitCode::FAILURE);
            }
            println!("nondegenerate: {} segments", scene.len());
        }
        Cmd::Count { file, x, y, oracle } => {
            let scene = read_scene(&file)?;
            let p = Point::new(x, y);
            let vis = if oracle {
                visible_set_oracle(&scene, &p)?
            } else {
                visible_set(&scene, &p)?
            };
            println!("count {}", vis.count());
            println!("visible {}", join(vis.visible.iter()));
        }
        Cmd::Vgraph { file, stats } => {
            let scene = read_scene(&file)?;
            let g = visibility_graph(&scene);
            if stats {
                println!("vertices {}", g.vertex_count);
                println!("edges {}", g.m());
            } else {
                for (u, v) in &g.edges {
                    println!("{u} {v}");
                }
            }
        }
        Cmd::Vsp {
            file,
            mode,
            keep_drop_test,
            stats,
            query,
        } => {
            let scene = read_scene(&file)?;
            let cfg = VspConfig {
                keep_drop_test,
                ..VspConfig::default()
            };
            let t = Instant::now();
            let vsp = build_vsp(&scene, mode, &cfg)?;
            let ms = t.elapsed().as_secs_f64() * 1e3;
            if stats {
                let s = vsp.stats();
                println!("V {}", s.vertices);
                println!("E {}", s.edges);
                println!("F {}", s.faces);
                println!("N {}", s.n);
                println!("N_sep {}", s.n_sep);
                println!("build_ms {ms:.1}");
            }
            if let Some(p) = query {
                println!("count {}", vsp_query(&vsp, &p)?);
            }
        }
        Cmd::Relax { file, k, query } => {
            let scene = read_scene(&file)?;
            let vsp = build_vsp(&scene, VspMode::Pruned, &VspConfig::default())?;
            let r = coarsen_vsp(&vsp, k);
            println!("kappa {}", r.kappa);
            println!("N_sep {}", r.n_sep);
            println!("kept_edges {}", r.kept_edges);
            println!("super_faces {}", r.super_face_count());
            if let Some(p) = query {
                println!("count {}", relaxed_query(&r, &p)?);
            }
        }
        Cmd::Approx {
            file,
            mode,
            delta,
            fail_prob,
            ell,
            seed,
            query,
        } => {
            let scene = read_scene(&file)?;
            if scene.is_empty() {
                return Err(Error::Domain("empty scene".into()));
            }
            let cfg = SampleConfig::new(mode, delta, fail_prob, seed);
            let ell = ell.ell(scene.len());
            let t = Instant::now();
            let counter = build_approx_counter(&scene, &cfg, ell)?;
            let ms = t.elapsed().as_secs_f64() * 1e3;
            println!("m {}", counter.sample.len());
            println!("ell {ell}");
            println!("edges {}", counter.edges());
            println!("faces {}", counter.faces());
            println!("build_ms {ms:.1}");
            if let Some(p) = query {
                let ratio = approx_query(&counter, &p)?;
                println!("ratio {ratio}");
                println!("estimate {:.3}", viscount::kernel::to_f64(&ratio) * scene.len() as f64);
            }
        }
        Cmd::Bench {
            experiment,
            kinds,
            sizes,
            seeds,
            out,
        } => {
            let spec = ExperimentSpec::new(experiment, kinds, sizes, seeds);
            std::fs::write(&out, run(&spec)?)?;
            println!("wrote {}", out.display());
        }
    }
    Ok(ExitCode::SUCCESS)
}
