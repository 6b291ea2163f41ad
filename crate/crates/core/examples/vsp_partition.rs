// Visibility space partition: every face stores its visible count, so a
// query is one point location.

use viscount::exact::visibility_count;
use viscount::generate::{generate, SceneGenSpec, SceneKind};
use viscount::vsp::{build_vsp, vsp_query, VspConfig, VspMode};
use viscount::Point;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let scene = generate(&SceneGenSpec::new(SceneKind::A, 5, 3))?.scene;
    let full = build_vsp(&scene, VspMode::Full, &VspConfig::default())?;
    let pruned = build_vsp(&scene, VspMode::Pruned, &VspConfig::default())?;
    for (name, vsp) in [("full", &full), ("pruned", &pruned)] {
        let s = vsp.stats();
        println!("{name}: V {} E {} F {} N {} N_sep {}", s.vertices, s.edges, s.faces, s.n, s.n_sep);
    }

    // queries agree with the sweep at the label points of the pruned faces
    for p in pruned.label_points.iter().take(20) {
        let want = visibility_count(&scene, p)?;
        assert_eq!(vsp_query(&pruned, p)?, want);
        assert_eq!(vsp_query(&full, p)?, want);
    }

    let far = Point::from_ints(-(1 << 40), 1 << 41);
    println!("count far away: {}", vsp_query(&pruned, &far)?);
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
