//! Fixtures shared by the benchmarks: seeded embeddings and the simplex
//! boundary pairs of `K^n_{2n+4}`.

use ilink_core::geom::{random_embedding_of, RationalEmbedding};
use ilink_core::{ids, IntegerChain, VertexId};

/// Boundary of the simplex on `vs`.
pub fn simplex_boundary(vs: &[u32]) -> IntegerChain {
    IntegerChain::simplex(&ids(vs))
        .and_then(|s| s.boundary())
        .expect("a simplex has a boundary")
}

/// A seeded embedding of `K^n_{2n+4}` with the split `{0..n+1} | {n+2..2n+3}`.
pub fn base_pair(n: usize, seed: u64) -> (RationalEmbedding, IntegerChain, IntegerChain) {
    let m = 2 * n as u32 + 4;
    let e = random_embedding_of(n, m as usize, seed, 1000).expect("embedding");
    let half = n as u32 + 2;
    let a: Vec<u32> = (0..half).collect();
    let b: Vec<u32> = (half..m).collect();
    (e, simplex_boundary(&a), simplex_boundary(&b))
}

/// Vertex ids `0..count`.
pub fn vertices(count: u32) -> Vec<VertexId> {
    (0..count).map(VertexId).collect()
}

pub fn embedding(n: usize, count: usize, seed: u64) -> RationalEmbedding {
    random_embedding_of(n, count, seed, 1000).expect("embedding")
}
