//! Two-component links in an embedded `K^n_{2n+4}`.

use itertools::Itertools;
use rayon::prelude::*;
use serde::Serialize;

use super::{class, parity, Component};
use crate::builders::TriangulatedCompleteComplex;
use crate::chain::{check_sphere, IntegerChain, VertexId};
use crate::error::{Error, Result};
use crate::geom::RationalEmbedding;

/// Splits of `0..2n+4` into two (n+2)-sets, each unordered split listed once
/// (the first set always contains 0).
pub fn partitions(n: usize) -> Vec<(Vec<usize>, Vec<usize>)> {
    let m = 2 * n + 4;
    (0..m)
        .combinations(n + 2)
        .filter(|a| a[0] == 0)
        .map(|a| {
            let b = (0..m).filter(|v| !a.contains(v)).collect();
            (a, b)
        })
        .collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct PartitionValue {
    pub first: Vec<usize>,
    pub second: Vec<usize>,
    pub value: i64,
}

/// The first split with odd linking number, plus the full table.
#[derive(Clone, Debug)]
pub struct BaseLink {
    pub first: Component,
    pub second: Component,
    /// Linking number of `first` with `second`.
    pub value: i64,
    pub table: Vec<PartitionValue>,
}

impl BaseLink {
    pub fn odd_count(&self) -> usize {
        self.table.iter().filter(|p| parity(p.value) == 1).count()
    }
}

fn pick(
    table: Vec<PartitionValue>,
    mut build: impl FnMut(&[usize], &[usize]) -> Result<(Component, Component)>,
) -> Result<BaseLink> {
    let odd = table.iter().position(|p| parity(p.value) == 1).ok_or_else(|| {
        Error::Falsification(format!(
            "no split of the {} corners has odd linking number",
            table.first().map_or(0, |p| p.first.len() * 2)
        ))
    })?;
    let (first, second) = build(&table[odd].first, &table[odd].second)?;
    Ok(BaseLink {
        first,
        second,
        value: table[odd].value,
        table,
    })
}

fn simplex_sphere(vs: &[VertexId]) -> Result<IntegerChain> {
    IntegerChain::simplex(vs)?.boundary()
}

/// Scans every split of the 2n+4 given vertices into two simplex boundaries.
pub fn find_base_link(e: &RationalEmbedding, vertices: &[VertexId]) -> Result<BaseLink> {
    let n = e.n();
    if vertices.len() != 2 * n + 4 {
        return Err(Error::Domain(format!(
            "a base link needs exactly {} vertices, got {}",
            2 * n + 4,
            vertices.len()
        )));
    }
    let label = |idx: &[usize]| -> Vec<VertexId> { idx.iter().map(|&i| vertices[i]).collect() };
    let table = partitions(n)
        .par_iter()
        .map(|(a, b)| {
            let value = class(e, &simplex_sphere(&label(a))?, &simplex_sphere(&label(b))?)?;
            Ok(PartitionValue {
                first: a.iter().map(|&i| vertices[i].0 as usize).collect(),
                second: b.iter().map(|&i| vertices[i].0 as usize).collect(),
                value,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    pick(table, |a, b| {
        let ids = |x: &[usize]| -> Vec<VertexId> { x.iter().map(|&v| VertexId(v as u32)).collect() };
        let name = |x: &[usize]| format!("boundary of simplex {x:?}");
        let first = check_sphere(&simplex_sphere(&ids(a))?)?.with_note(name(a));
        let second = check_sphere(&simplex_sphere(&ids(b))?)?.with_note(name(b));
        Ok((Component::new("J", first), Component::new("X", second)))
    })
}

/// As [`find_base_link`] on a triangulated complete complex: the two
/// components are subdivided simplex boundaries whose faces are recorded.
pub fn find_subdivided_base_link(e: &RationalEmbedding, c: &TriangulatedCompleteComplex) -> Result<BaseLink> {
    let n = e.n();
    if c.n() != n || c.corners() != 2 * n + 4 {
        return Err(Error::Domain(format!(
            "expected a triangulated K^{n}_{}, got {} corners of dimension {}",
            2 * n + 4,
            c.corners(),
            c.n()
        )));
    }
    let table = partitions(n)
        .par_iter()
        .map(|(a, b)| {
            let sa = c.sphere_on(a)?;
            let sb = c.sphere_on(b)?;
            let value = class(e, sa.witness.chain(), sb.witness.chain())?;
            Ok(PartitionValue {
                first: a.clone(),
                second: b.clone(),
                value,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    pick(table, |a, b| {
        Ok((
            Component::from_subdivided("J", &c.sphere_on(a)?),
            Component::from_subdivided("X", &c.sphere_on(b)?),
        ))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::random_embedding_of;

    #[test]
    fn partition_counts() {
        assert_eq!(partitions(1).len(), 10);
        assert_eq!(partitions(2).len(), 35);
        assert_eq!(partitions(3).len(), 126);
    }

    #[test]
    fn base_links_exist() {
        for n in 1..=2usize {
            for seed in 0..3u64 {
                let e = random_embedding_of(n, 2 * n + 4, seed, 1000).unwrap();
                let vs: Vec<VertexId> = (0..2 * n as u32 + 4).map(VertexId).collect();
                let b = find_base_link(&e, &vs).unwrap();
                assert_eq!(parity(b.value), 1);
                assert_eq!(class(&e, b.first.chain(), b.second.chain()).unwrap(), b.value);
                if n == 1 {
                    assert_eq!(b.odd_count() % 2, 1);
                }
            }
        }
    }

    #[test]
    fn subdivided_base_link() {
        let c = crate::builders::triangulated_complete_complex(6, 1, 2).unwrap();
        let e = random_embedding_of(1, c.vertex_count(), 4, 1000).unwrap();
        let b = find_subdivided_base_link(&e, &c).unwrap();
        assert_eq!(parity(b.value), 1);
        assert_eq!(b.first.patches.len(), 3);
        assert_eq!(b.first.chain().len(), 6);
    }
}
