//! Benchmark-only crate; see `benches/pipeline.rs`.

/// A 12-cycle, the largest fixture the benches exercise.
pub fn cycle(n: u64) -> edgelap::Graph {
    let edges: Vec<(u64, u64)> = (0..n).map(|i| (i, (i + 1) % n)).collect();
    edgelap::Graph::from_edges(&edges, &[]).unwrap()
}
