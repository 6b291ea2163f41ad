// The endpoint visibility graph.

use viscount::exact::visibility_graph;
use viscount::load_scene;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    // a long wall between two short segments
    let scene = load_scene("0 0 1 1\n-5 3 5 4\n0 6 1 8\n")?;
    let g = visibility_graph(&scene);
    println!("{} vertices, {} edges", g.vertex_count, g.m());
    for (u, v) in &g.edges {
        println!("  {u} -- {v}");
    }
    // nothing below the wall sees anything above it
    assert!(!g.edges.iter().any(|&(u, v)| u < 2 && v >= 4));
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
