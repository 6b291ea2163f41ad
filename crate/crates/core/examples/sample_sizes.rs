// Sample sizes for the sampled visibility ratio.

use viscount::approx::{
    chernoff_sample_size, hit_sample_size, practical_sample_size, vc_sample_size, SampleConfig,
    SampleMode,
};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    // one fixed viewpoint, two-sided deviation
    println!("chernoff(0.1, 0.05) = {}", chernoff_sample_size(0.1, 0.05)?);
    assert_eq!(chernoff_sample_size(0.1, 0.05)?, 185);

    for n in [16, 256, 1024] {
        println!(
            "n={n}: practical {} vc {} hit {}",
            practical_sample_size(n)?,
            vc_sample_size(n, 0.1, 0.05, 0.25)?,
            hit_sample_size(n, 0.1, 0.25)?
        );
    }
    assert_eq!(practical_sample_size(1024)?, 1000);

    let cfg = SampleConfig::new(SampleMode::Practical, 0.1, 0.05, 9);
    assert_eq!(cfg.sample_size(16)?, 160);
    assert!(chernoff_sample_size(0.0, 0.05).is_err());
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
