//! Graph sources for exhaustive and randomized checks.

use rand::seq::IndexedRandom;
use rand::Rng;
use thiserror::Error;

use crate::format::edge_pairs;
use crate::graph::Graph;

/// Default cap on the order of exhaustive enumeration (2^21 graphs at 7).
pub const DEFAULT_ENUMERATION_CAP: usize = 7;

/// Edge probabilities for random graphs, one drawn uniformly per graph.
pub const EDGE_PROBABILITIES: [f64; 3] = [0.2, 0.5, 0.8];

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("exhaustive enumeration of order {n} exceeds the cap {cap}")]
pub struct EnumerationError {
    pub n: usize,
    pub cap: usize,
}

/// Number of vertex pairs on `n` vertices.
pub fn pair_count(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

/// The labelled graph on `n` vertices whose edges are the set bits of
/// `mask`, indexed by [`edge_pairs`] order.
pub fn graph_from_mask(n: usize, mask: u64) -> Graph {
    let edges = edge_pairs(n)
        .enumerate()
        .filter(|&(k, _)| mask >> k & 1 == 1)
        .map(|(_, e)| e);
    Graph::from_edges(n, edges).expect("mask graph is simple")
}

/// Inverse of [`graph_from_mask`]; only defined for orders up to 11.
pub fn edge_mask(g: &Graph) -> u64 {
    assert!(pair_count(g.vertex_count()) <= 64, "edge mask needs order <= 11");
    edge_pairs(g.vertex_count())
        .enumerate()
        .filter(|&(_, (i, j))| g.has_edge(i, j))
        .fold(0u64, |m, (k, _)| m | 1 << k)
}

/// Every labelled simple graph on `n` vertices, in increasing edge-mask order.
pub fn enumerate_labeled_graphs(
    n: usize,
    cap: usize,
) -> Result<impl Iterator<Item = Graph>, EnumerationError> {
    if n > cap || pair_count(n) >= 64 {
        return Err(EnumerationError { n, cap });
    }
    let total = 1u64 << pair_count(n);
    Ok((0..total).map(move |mask| graph_from_mask(n, mask)))
}

/// Erdős–Rényi graph on `n` vertices with `p` drawn from [`EDGE_PROBABILITIES`].
pub fn random_graph<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Graph {
    let p = *EDGE_PROBABILITIES.choose(rng).unwrap();
    let edges: Vec<_> = edge_pairs(n).filter(|_| rng.random_bool(p)).collect();
    Graph::from_edges(n, edges).expect("random graph is simple")
}

/// Random bipartite graph: each vertex picks a side uniformly, then each
/// cross pair is an edge with a probability drawn from [`EDGE_PROBABILITIES`].
pub fn random_bipartite_graph<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Graph {
    let p = *EDGE_PROBABILITIES.choose(rng).unwrap();
    let side: Vec<bool> = (0..n).map(|_| rng.random_bool(0.5)).collect();
    let edges: Vec<_> = edge_pairs(n)
        .filter(|&(i, j)| side[i] != side[j])
        .filter(|_| rng.random_bool(p))
        .collect();
    Graph::from_edges(n, edges).expect("random graph is simple")
}
