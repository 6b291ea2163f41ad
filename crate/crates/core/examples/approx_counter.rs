// Sampled visibility ratio: one tradeoff structure per sampled target.

use viscount::approx::{approx_query, build_approx_counter, sample_estimate, SampleConfig, SampleMode};
use viscount::exact::visibility_count;
use viscount::generate::{generate, SceneGenSpec, SceneKind};
use viscount::kernel::{ratio, to_f64};
use viscount::Point;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let scene = generate(&SceneGenSpec::new(SceneKind::A, 9, 11))?.scene;
    let cfg = SampleConfig::new(SampleMode::Chernoff, 0.3, 0.2, 5);
    let counter = build_approx_counter(&scene, &cfg, 2)?;
    println!("m = {}, memory {}", counter.sample.len(), counter.memory_proxy());

    let p = Point::new(ratio(400_000_001, 1), ratio(1, 3) + ratio(600_000_003, 1));
    let est = approx_query(&counter, &p)?;
    // the structure answers exactly what the direct estimator answers
    assert_eq!(est, sample_estimate(&scene, &counter.sample, &p)?);
    assert_eq!(counter.locations(), 2 * counter.sample.len());

    let truth = visibility_count(&scene, &p)? as f64 / scene.len() as f64;
    println!("estimate {:.3} true {:.3}", to_f64(&est), truth);
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
