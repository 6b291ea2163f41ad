// The count-statistics experiment as CSV, and a log-log slope over the
// size ladder.

use viscount::bench::{loglog_slope, run, Experiment, ExperimentSpec, COUNTS_HEADER};
use viscount::generate::SceneKind;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let mut spec = ExperimentSpec::new(Experiment::Counts, vec![SceneKind::A], vec![9, 16, 36], 1);
    spec.grid = 4;
    let csv = run(&spec)?;
    print!("{csv}");
    assert_eq!(csv.lines().next(), Some(COUNTS_HEADER));
    assert_eq!(csv, run(&spec)?);

    let points: Vec<(f64, f64)> = csv
        .lines()
        .skip(1)
        .map(|row| {
            let cols: Vec<&str> = row.split(',').collect();
            (cols[1].parse().unwrap(), cols[5].parse().unwrap())
        })
        .collect();
    println!("avg-count slope {:.2}", loglog_slope(&points));
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
