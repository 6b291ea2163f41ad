// k-relaxed partition: merge faces across edges until each region spans at
// most k+1 counts, trading accuracy for size.

use viscount::exact::visibility_count;
use viscount::generate::{generate, SceneGenSpec, SceneKind};
use viscount::vsp::{build_vsp, coarsen_vsp, relaxed_query, VspConfig, VspMode};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let scene = generate(&SceneGenSpec::new(SceneKind::A, 6, 2))?.scene;
    let vsp = build_vsp(&scene, VspMode::Pruned, &VspConfig::default())?;
    for k in [0, 1, 2, 4] {
        let r = coarsen_vsp(&vsp, k);
        println!(
            "k={k}: kappa {} kept {} of {} separating edges, {} regions",
            r.kappa,
            r.kept_edges,
            r.n_sep,
            r.super_face_count()
        );
        assert!(r.kept_edges <= r.n_sep / (k + 1));
        for p in vsp.label_points.iter().take(10) {
            let got = relaxed_query(&r, p)? as i64;
            let want = visibility_count(&scene, p)? as i64;
            assert!((got - want).abs() <= k as i64);
        }
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
