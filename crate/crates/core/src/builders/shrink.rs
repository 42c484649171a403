use serde::Serialize;

use super::lattice::{subdivide_simplex, SubdividedSimplex};
use crate::error::{Error, Result};

/// The corner sub-simplex `{x_corner >= offset}` of a subdivided simplex.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CornerBlock {
    pub corner: usize,
    pub offset: u32,
    pub side: u32,
    /// Vertex of the parent for each lattice vertex of the side-`side` template.
    pub vertex_map: Vec<usize>,
    /// Cells of the parent lying in the block.
    pub cells: Vec<usize>,
    pub transcript: Vec<String>,
}

/// After deleting `deleted`, finds a corner block of side `floor(Mℓ/(M+1))`
/// that avoids it. The corner is the smallest index whose barycentric
/// coordinate on the deleted cell's barycentre is at most `1/(M+1)`.
pub fn shrink_after_delete(t: &SubdividedSimplex, deleted: usize) -> Result<CornerBlock> {
    let m = t.dim();
    let side = t.side();
    if deleted >= t.cells().len() {
        return Err(Error::Domain(format!("cell {deleted} does not exist")));
    }
    // barycentre coordinate x_i / ℓ <= 1/(M+1)  <=>  Σ_v x_i(v) <= ℓ
    let scaled = t.scaled_barycentre(deleted);
    let candidates: Vec<usize> = (0..=m).filter(|&i| scaled[i] <= side).collect();
    let corner = *candidates
        .first()
        .ok_or_else(|| Error::Falsification("no small barycentric coordinate".into()))?;
    let offset = side.div_ceil(m as u32 + 1);
    let block_side = side - offset;
    let mut transcript = vec![format!(
        "deleted cell {deleted}; corners with small barycentric coordinate {candidates:?}; chose {corner}"
    )];
    transcript.push(format!("block x_{corner} >= {offset}, side {block_side}"));

    let vertex_map: Vec<usize> = if block_side == 0 {
        let mut x = vec![0u32; m + 1];
        x[corner] = side;
        vec![t.vertex_id(&x).expect("corner exists")]
    } else {
        let template = subdivide_simplex(m, block_side)?;
        template
            .vertices()
            .iter()
            .map(|local| {
                let mut x = local.clone();
                x[corner] += offset;
                t.vertex_id(&x).expect("shifted lattice point exists")
            })
            .collect()
    };
    let cells: Vec<usize> = (0..t.cells().len())
        .filter(|&c| {
            t.cells()[c]
                .vertices
                .iter()
                .all(|&v| t.vertices()[v][corner] >= offset)
        })
        .collect();
    if cells.contains(&deleted) {
        return Err(Error::Falsification(format!(
            "corner block still contains deleted cell {deleted}"
        )));
    }
    Ok(CornerBlock {
        corner,
        offset,
        side: block_side,
        vertex_map,
        cells,
        transcript,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn side_lengths() {
        let t = subdivide_simplex(2, 3).unwrap();
        for c in 0..t.cells().len() {
            let b = shrink_after_delete(&t, c).unwrap();
            assert_eq!(b.side, 2);
            assert_eq!(b.cells.len(), 4);
        }
        let t = subdivide_simplex(1, 2).unwrap();
        assert_eq!(shrink_after_delete(&t, 0).unwrap().side, 1);
    }

    #[test]
    fn central_cell_of_three_simplex() {
        let t = subdivide_simplex(3, 4).unwrap();
        // a cell whose barycentre is closest to the centre
        let centre = (0..t.cells().len())
            .min_by_key(|&c| {
                t.scaled_barycentre(c)
                    .iter()
                    .map(|&x| (x as i64 - 4).pow(2))
                    .sum::<i64>()
            })
            .unwrap();
        let b = shrink_after_delete(&t, centre).unwrap();
        assert_eq!(b.side, 3);
        assert!(!b.cells.contains(&centre));
        // containment audit: every block vertex satisfies the halfspace bound
        for &v in &b.vertex_map {
            assert!(t.vertices()[v][b.corner] >= b.offset);
        }
        let deleted_outside = t.cells()[centre]
            .vertices
            .iter()
            .any(|&v| t.vertices()[v][b.corner] < b.offset);
        assert!(deleted_outside);
    }

    #[test]
    fn block_is_a_full_subdivided_simplex() {
        for m in 1..=3usize {
            for side in 1..=4u32 {
                let t = subdivide_simplex(m, side).unwrap();
                for c in 0..t.cells().len() {
                    let b = shrink_after_delete(&t, c).unwrap();
                    assert_eq!(b.side, (m as u32 * side) / (m as u32 + 1));
                    assert_eq!(b.cells.len(), (b.side as usize).pow(m as u32));
                }
            }
        }
    }
}
