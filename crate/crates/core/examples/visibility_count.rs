// Exact visibility count from a viewpoint, with the reference scan as a
// cross-check.

use viscount::exact::{is_general_position, visibility_count, visible_set, visible_set_oracle};
use viscount::kernel::ratio;
use viscount::{load_scene, Point};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let scene = load_scene("0 2 4 2\n1 4 3 4\n-2 6 6 6\n5 0 5 1\n")?;
    let p = Point::new(ratio(2, 3), ratio(-1, 7));
    assert!(is_general_position(&scene, &p));

    let fast = visible_set(&scene, &p)?;
    let slow = visible_set_oracle(&scene, &p)?;
    assert_eq!(fast, slow);
    println!("visible from {p}: {:?}", fast.visible);

    // the middle segment hides behind the bottom one
    assert!(!fast.contains(1));
    assert_eq!(visibility_count(&scene, &p)?, 3);

    // a viewpoint on a segment is rejected
    assert!(visibility_count(&scene, &Point::from_ints(2, 2)).is_err());
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
