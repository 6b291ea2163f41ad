// Deterministic scene generators: random families A, B, C and the two
// lower-bound constructions.

use viscount::generate::{generate, SceneGenSpec, SceneKind};
use viscount::validate_nondegenerate;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    for kind in [SceneKind::A, SceneKind::B, SceneKind::C] {
        let g = generate(&SceneGenSpec::new(kind, 16, 1))?;
        assert!(validate_nondegenerate(&g.scene).is_nondegenerate());
        println!("{kind}: {} segments", g.scene.len());
    }

    // same seed, same bytes
    let a = generate(&SceneGenSpec::new(SceneKind::B, 16, 7))?.scene.to_text();
    let b = generate(&SceneGenSpec::new(SceneKind::B, 16, 7))?.scene.to_text();
    assert_eq!(a, b);

    let peep = generate(&SceneGenSpec::new(SceneKind::Peephole, 3, 1))?;
    println!("peephole(3): {} segments, {} probes", peep.scene.len(), peep.probes.len());
    assert_eq!(peep.scene.len(), 2 * 3 + 3);

    let shat = generate(&SceneGenSpec::new(SceneKind::Shatter, 2, 1))?;
    println!("shatter(2): {} segments, targets {:?}", shat.scene.len(), shat.targets);
    assert_eq!(shat.scene.len(), 2 + 4 * 2 / 2);
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
