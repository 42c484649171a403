//! Ordered discs cut out of a subdivided n-simplex by a generic ray.
//!
//! The ray `t * a / a_n` with integer `0 < a_1 < ... < a_n` runs from the
//! origin of the ordered simplex to its top facet. A direction is accepted
//! when all crossing parameters with the dividing planes `y_i = k` and
//! `y_j - y_i = k` inside `(0, ℓ]` are pairwise distinct; the cells crossed
//! are then read off from the midpoints between consecutive crossings.

use num_rational::Ratio;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::lattice::SubdividedSimplex;
use crate::error::{Error, Result};

const DIRECTION_ATTEMPTS: usize = 1000;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OrderedDisc {
    /// Integer ray direction in y-coordinates.
    pub direction: Vec<i64>,
    /// Cell indices of the subdivided simplex, in the order the ray meets them.
    pub cells: Vec<usize>,
}

impl OrderedDisc {
    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    /// Cells `c..=d` (0-based, inclusive).
    pub fn run(&self, c: usize, d: usize) -> &[usize] {
        &self.cells[c..=d]
    }
}

fn crossings(a: &[i64], side: i64) -> Option<Vec<Ratio<i128>>> {
    let an = *a.last().unwrap() as i128;
    let side = side as i128;
    let mut out = Vec::new();
    let mut push_family = |coef: i128| {
        // t = k * a_n / coef for k >= 1 with t <= side
        let mut k = 1i128;
        while k * an <= side * coef {
            out.push(Ratio::new(k * an, coef));
            k += 1;
        }
    };
    for i in 0..a.len() {
        push_family(a[i] as i128);
        for j in i + 1..a.len() {
            push_family((a[j] - a[i]) as i128);
        }
    }
    out.sort();
    if out.windows(2).any(|w| w[0] == w[1]) {
        return None;
    }
    Some(out)
}

fn floor_ratio(r: &Ratio<i128>) -> i128 {
    r.floor().to_integer()
}

/// Ordered run of at least `required` cells of `t` crossed by a generic ray.
pub fn linear_disc(t: &SubdividedSimplex, required: usize) -> Result<OrderedDisc> {
    let n = t.dim();
    let side = t.side() as i64;
    if (side as usize) < required {
        return Err(Error::size("linear disc side length", required as u64, side as u64));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x11d1_5c00 ^ ((n as u64) << 32) ^ side as u64);
    let bound = 1000 * (side + 1) * (side + 1);
    for _ in 0..DIRECTION_ATTEMPTS {
        let mut a: Vec<i64> = if n == 1 {
            vec![1]
        } else {
            (0..n).map(|_| rng.gen_range(1..=bound)).collect()
        };
        a.sort_unstable();
        if a.windows(2).any(|w| w[0] == w[1]) {
            continue;
        }
        let Some(ts) = crossings(&a, side) else {
            continue;
        };
        let an = *a.last().unwrap() as i128;
        let mut cells = Vec::with_capacity(ts.len());
        let mut prev = Ratio::from_integer(0i128);
        for t_next in &ts {
            let mid = (prev + t_next) / 2;
            let y: Vec<Ratio<i128>> = a.iter().map(|&ai| mid * Ratio::new(ai as i128, an)).collect();
            let base: Vec<u32> = y.iter().map(|v| floor_ratio(v) as u32).collect();
            let frac: Vec<Ratio<i128>> = y
                .iter()
                .map(|v| v - Ratio::from_integer(floor_ratio(v)))
                .collect();
            let mut perm: Vec<usize> = (0..n).collect();
            perm.sort_by(|&i, &j| frac[i].cmp(&frac[j]));
            let cell = t.cell_by_name(&base, &perm).ok_or_else(|| {
                Error::Construction(format!("ray left the simplex at base {base:?}"))
            })?;
            cells.push(cell);
            prev = *t_next;
        }
        if cells.len() < required {
            return Err(Error::Falsification(format!(
                "ray met {} cells, expected at least {required}",
                cells.len()
            )));
        }
        return Ok(OrderedDisc { direction: a, cells });
    }
    Err(Error::Degenerate(format!(
        "no generic ray direction found in {DIRECTION_ATTEMPTS} attempts"
    )))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builders::subdivide_simplex;
    use crate::chain::{check_disc, VertexId};

    fn shared(t: &SubdividedSimplex, a: usize, b: usize) -> usize {
        let va = &t.cells()[a].vertices;
        t.cells()[b].vertices.iter().filter(|v| va.contains(v)).count()
    }

    #[test]
    fn interval_in_order() {
        let t = subdivide_simplex(1, 4).unwrap();
        let d = linear_disc(&t, 4).unwrap();
        assert_eq!(d.len(), 4);
        let lows: Vec<u32> = d
            .cells
            .iter()
            .map(|&c| t.cells()[c].base[0])
            .collect();
        assert_eq!(lows, vec![0, 1, 2, 3]);
    }

    #[test]
    fn adjacency_and_separation() {
        for (n, side) in [(2usize, 4u32), (2, 3), (3, 3), (3, 4), (4, 2)] {
            let t = subdivide_simplex(n, side).unwrap();
            let d = linear_disc(&t, side as usize).unwrap();
            assert!(d.len() >= side as usize);
            for i in 0..d.len() {
                for j in i + 1..d.len() {
                    let s = shared(&t, d.cells[i], d.cells[j]);
                    if j == i + 1 {
                        assert_eq!(s, n, "consecutive cells share a ridge");
                    } else {
                        assert!(s < n, "cells {i},{j} share {s} vertices");
                    }
                }
            }
        }
    }

    #[test]
    fn every_contiguous_run_is_a_disc() {
        for (n, side) in [(2usize, 3u32), (2, 4), (3, 3)] {
            let t = subdivide_simplex(n, side).unwrap();
            let d = linear_disc(&t, side as usize).unwrap();
            for i in 0..d.len() {
                for j in i..d.len() {
                    let chain = t
                        .cells_chain(d.run(i, j).iter().copied(), |v| VertexId(v as u32))
                        .unwrap();
                    check_disc(&chain).unwrap_or_else(|e| panic!("run {i}..{j}: {e}"));
                }
            }
        }
    }

    #[test]
    fn short_side_is_a_size_error() {
        let t = subdivide_simplex(2, 2).unwrap();
        assert!(matches!(linear_disc(&t, 3), Err(Error::Size { .. })));
    }
}
