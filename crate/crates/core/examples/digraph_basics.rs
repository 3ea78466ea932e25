//! Build a small digraph, query it through the oracle and look for a 2-star.

use qptest::graph::{
    bfs_limited, contains_copy, count_source_disjoint_copies, find_any_copy, verify_embedding,
    BoundedOutDigraph, OracleView, PatternGraph,
};

fn main() -> qptest::Result<()> {
    // Two leaves 1 and 2 point at 0; 3 -> 4 -> 5 is a path.
    let g = BoundedOutDigraph::from_edges(6, 2, &[(1, 0), (2, 0), (3, 4), (4, 5)])?;
    print!("{}", g.to_text());

    let mut view = OracleView::new(&g);
    println!("slot 1 of vertex 3: {:?}", view.out_neighbor_query(3, 1)?);
    let ball = bfs_limited(&mut view, 3, 2)?;
    println!("depth-2 ball of 3: {:?}, edges {:?}", ball.vertices, ball.edges);
    println!("queries so far: {}", view.ledger().classical);

    let star = PatternGraph::k_star(2);
    println!("contains 2-star: {}", contains_copy(&g, &star));
    if let Some(emb) = find_any_copy(&g, &star) {
        println!("copy {:?}, verified {}", emb.map, verify_embedding(&g, &star, &emb));
    }
    println!("source-disjoint copies: {}", count_source_disjoint_copies(&g, &star));

    let cycle = PatternGraph::directed_cycle(3)?;
    println!("contains 3-cycle: {}", contains_copy(&g, &cycle));
    Ok(())
}
