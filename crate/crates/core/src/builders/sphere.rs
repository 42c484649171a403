use crate::chain::{check_sphere, IntegerChain, SphereWitness, VertexId};
use crate::error::{Error, Result};

/// Boundary of a stack of `blocks` glued (n+1)-simplices on vertices
/// `0..n+blocks+1`. Block i is `[i-1, ..., i+n]`; consecutive blocks share
/// an n-face whose two copies cancel.
pub fn stacked_sphere(n: usize, blocks: usize) -> Result<SphereWitness> {
    let verts: Vec<VertexId> = (0..(n + blocks + 1) as u32).map(VertexId).collect();
    stacked_sphere_on(n, blocks, &verts)
}

/// As [`stacked_sphere`], placed on the given vertices (in order).
pub fn stacked_sphere_on(n: usize, blocks: usize, verts: &[VertexId]) -> Result<SphereWitness> {
    if n == 0 || blocks == 0 {
        return Err(Error::Domain(format!(
            "stacked sphere needs n >= 1 and at least one block, got n={n}, blocks={blocks}"
        )));
    }
    if verts.len() < n + blocks + 1 {
        return Err(Error::size(
            "stacked sphere vertices",
            (n + blocks + 1) as u64,
            verts.len() as u64,
        ));
    }
    let mut disc = IntegerChain::zero(n + 1);
    for i in 0..blocks {
        let sign = if (n * i).is_multiple_of(2) { 1 } else { -1 };
        disc.add_ordered(&verts[i..i + n + 2], sign)?;
    }
    let witness = check_sphere(&disc.boundary()?)?;
    Ok(witness.with_note(format!("stacked sphere n={n} blocks={blocks}")))
}

/// Stacked sphere with `ceil(k/n)` blocks, hence at least `k+2` cells.
pub fn sphere_with_k_simplices(n: usize, k: usize) -> Result<SphereWitness> {
    if k == 0 {
        return Err(Error::Domain("need k >= 1".into()));
    }
    stacked_sphere(n, k.div_ceil(n.max(1)))
}
