//! Generate a random regular graph with a girth floor, inspect it, and
//! round-trip it through the edge-list format.
//!
//! ```text
//! cargo run --release --example high_girth_graph -- 20000 5 8
//! ```

use wavecut::graph::{generate_regular, load_edge_list, tree_ball_size};

fn main() -> wavecut::Result<()> {
    let args: Vec<usize> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let (n, d, girth) = match args[..] {
        [n, d, g, ..] => (n, d, g),
        _ => (20_000, 5, 8),
    };
    let t = std::time::Instant::now();
    let g = generate_regular(n, d, 42, girth, 50)?;
    println!("n = {}, m = {}, girth {} ({:.2?})", g.n(), g.edge_count(), g.girth(), t.elapsed());
    println!("degree histogram {:?}", g.degree_histogram());

    let r = (girth - 2) / 2;
    let tree_like = (0..g.n() as u32).step_by(g.n() / 100).filter(|&u| g.is_locally_tree_like(u, r).unwrap()).count();
    println!("radius-{r} balls that are trees: {tree_like}/100 sampled (tree size {})", tree_ball_size(d, r));
    let shells = g.shells(0, 3);
    println!("shell sizes around vertex 0: {:?}", shells.sizes());

    let dir = std::env::temp_dir().join("wavecut_example_graph.txt");
    g.save_edge_list(&dir)?;
    let back = load_edge_list(&dir)?;
    println!("round trip through {}: {}", dir.display(), if back == g { "identical" } else { "DIFFERENT" });
    Ok(())
}
