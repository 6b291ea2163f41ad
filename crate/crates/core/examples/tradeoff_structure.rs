// Per-target structure: split the target into ell pieces, one arrangement
// per piece. Larger ell stores less and locates more per query.

use viscount::approx::{build_target_structure, candidate_line_counts, target_query, CandidateLines};
use viscount::exact::{is_general_position, is_target_visible};
use viscount::generate::{generate, SceneGenSpec, SceneKind};
use viscount::kernel::ratio;
use viscount::Point;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let scene = generate(&SceneGenSpec::new(SceneKind::A, 9, 4))?.scene;
    let counts = candidate_line_counts(&scene, CandidateLines::Pruned);
    let t = (0..scene.len()).max_by_key(|&i| counts[i]).unwrap();
    println!("target {t} meets {} candidate lines", counts[t]);

    let seg = scene.segment(t);
    let occ = scene.without(t);
    let probes: Vec<Point> = (0..30i64)
        .map(|i| {
            let x = ratio(i * 37_000_017 + 5, 1) + ratio(1, 3);
            let y = ratio((i * i) % 29 * 35_000_011 + 7, 1) + ratio(1, 7);
            Point::new(x, y)
        })
        .filter(|p| is_general_position(&scene, p))
        .collect();

    for ell in [1, 2, 4] {
        let ts = build_target_structure(&scene, t, ell)?;
        for p in &probes {
            assert_eq!(target_query(&ts, p)?, is_target_visible(&occ, p, &seg.a, &seg.b)?);
        }
        println!(
            "ell={ell}: memory {} locations/query {}",
            ts.memory_proxy(),
            ts.locations() / probes.len()
        );
        assert_eq!(ts.locations(), ell * probes.len());
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
