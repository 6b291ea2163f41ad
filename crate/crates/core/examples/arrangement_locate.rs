// Build a planar subdivision from lines, rays and segments and locate
// points in it exactly.

use viscount::arrangement::{build_arrangement, Curve};
use viscount::kernel::ratio;
use viscount::{Line, Point, Ray};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let p = Point::from_ints;
    let curves = vec![
        Curve::Line(Line::through(&p(0, 0), &p(1, 1)).unwrap()),
        Curve::Line(Line::through(&p(0, 4), &p(4, 0)).unwrap()),
        Curve::Ray(Ray::away_from(&p(0, 3), &p(-1, 3)).unwrap()),
        Curve::Segment(p(3, -2), p(3, 6)),
    ];
    let sub = build_arrangement(&curves);
    let s = sub.stats();
    println!("V {} E {} F {}", s.vertices, s.edges, s.faces);

    let q = Point::new(ratio(1, 3), ratio(-5, 2));
    let hit = sub.locate(&q);
    println!("{q} lies in face {}", hit.face);
    assert!(hit.on_boundary.is_none());

    // the representative point of a face locates back to it
    for f in 0..sub.face_count() {
        assert_eq!(sub.locate(sub.representative(f)).face, f);
    }

    // points on curves report the boundary they touch
    assert!(sub.locate(&p(2, 2)).on_boundary.is_some());
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
