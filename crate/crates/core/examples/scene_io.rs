// Parse a scene from text, check it for degeneracies and write it back.

use viscount::{load_scene, save_scene, validate_nondegenerate};

const TEXT: &str = "\
# x1 y1 x2 y2, one segment per line
0 0 5 1
1 3 2 7
-3 2 -1 23/2
";

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let scene = load_scene(TEXT)?;
    println!("{} segments", scene.len());

    let report = validate_nondegenerate(&scene);
    println!("nondegenerate: {}", report.is_nondegenerate());
    assert!(report.is_nondegenerate());

    let text = save_scene(&scene);
    assert_eq!(load_scene(&text)?, scene);
    print!("{text}");

    // crossing segments are rejected at load time
    assert!(load_scene("0 0 2 2\n0 2 2 0\n").is_err());
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
