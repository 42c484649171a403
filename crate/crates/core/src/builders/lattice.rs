//! The side-length-ℓ subdivision of an M-simplex.
//!
//! Work happens in the ordered simplex `0 <= y_1 <= ... <= y_M <= ℓ`, tiled by
//! translates of the cube cells `0 <= z_σ(1) <= ... <= z_σ(M) <= 1`. Lattice
//! points are stored in barycentric coordinates `x` (M+1 entries summing to ℓ)
//! via `y_k = x_1 + ... + x_k`.

use std::collections::HashMap;

use itertools::Itertools;
use serde::Serialize;

use crate::chain::{IntegerChain, VertexId};
use crate::error::{Error, Result};
use crate::exact::det_sign;

/// One M-simplex of the subdivision, named by its cube base point and permutation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LatticeCell {
    /// Lower corner of the unit cube in y-coordinates.
    pub base: Vec<u32>,
    /// Coordinate order inside the cube: `z_perm[0] <= z_perm[1] <= ...`.
    pub perm: Vec<usize>,
    /// Lattice vertex indices, ascending.
    pub vertices: Vec<usize>,
    /// Sign of this cell in the fundamental chain, relative to ascending order.
    pub orientation: i8,
}

#[derive(Clone, Debug, Serialize)]
pub struct SubdividedSimplex {
    m: usize,
    side: u32,
    vertices: Vec<Vec<u32>>,
    cells: Vec<LatticeCell>,
    #[serde(skip)]
    vertex_index: HashMap<Vec<u32>, usize>,
    #[serde(skip)]
    cell_index: HashMap<Vec<usize>, usize>,
}

fn y_to_x(y: &[u32], side: u32) -> Vec<u32> {
    let mut x = Vec::with_capacity(y.len() + 1);
    let mut prev = 0;
    for &v in y {
        x.push(v - prev);
        prev = v;
    }
    x.push(side - prev);
    x
}

fn x_to_y(x: &[u32]) -> Vec<i64> {
    x[..x.len() - 1]
        .iter()
        .scan(0i64, |acc, &v| {
            *acc += v as i64;
            Some(*acc)
        })
        .collect()
}

/// Sign of the frame `[p_1 - p_0, ..., p_M - p_0]` of points given in y-coordinates.
fn frame_sign(points: &[Vec<i64>]) -> i8 {
    let rows: Vec<Vec<i64>> = points[1..]
        .iter()
        .map(|p| p.iter().zip(&points[0]).map(|(a, b)| a - b).collect())
        .collect();
    det_sign(&rows)
}

/// All lattice points of the subdivided M-simplex, in lexicographic order.
fn lattice_points(m: usize, side: u32) -> Vec<Vec<u32>> {
    fn rec(left: usize, remaining: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if left == 1 {
            prefix.push(remaining);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for v in 0..=remaining {
            prefix.push(v);
            rec(left - 1, remaining - v, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(m + 1, side, &mut Vec::new(), &mut out);
    out
}

/// Subdivides the M-simplex of side length `side` into `side^M` cells.
pub fn subdivide_simplex(m: usize, side: u32) -> Result<SubdividedSimplex> {
    if m == 0 || side == 0 {
        return Err(Error::Domain(format!(
            "subdivision needs M >= 1 and side >= 1, got M={m}, side={side}"
        )));
    }
    let vertices = lattice_points(m, side);
    let vertex_index: HashMap<Vec<u32>, usize> = vertices
        .iter()
        .enumerate()
        .map(|(i, v)| (v.clone(), i))
        .collect();

    // orientation of the corner frame ℓe_1, ..., ℓe_{M+1} in y-coordinates
    let corners: Vec<Vec<i64>> = (0..=m)
        .map(|i| {
            let mut x = vec![0u32; m + 1];
            x[i] = side;
            x_to_y(&x)
        })
        .collect();
    let corner_sign = frame_sign(&corners);

    let mut cells = Vec::new();
    for base in (0..m).map(|_| 0..side).multi_cartesian_product() {
        for perm in (0..m).permutations(m) {
            // p_k has ones on coordinates perm[k..]
            let mut ys: Vec<Vec<u32>> = Vec::with_capacity(m + 1);
            for k in 0..=m {
                let mut y = base.clone();
                for &c in &perm[k..] {
                    y[c] += 1;
                }
                ys.push(y);
            }
            let inside = ys
                .iter()
                .all(|y| y.windows(2).all(|w| w[0] <= w[1]) && y[m - 1] <= side);
            if !inside {
                continue;
            }
            let mut ids: Vec<usize> = ys.iter().map(|y| vertex_index[&y_to_x(y, side)]).collect();
            ids.sort_unstable();
            let frame: Vec<Vec<i64>> = ids.iter().map(|&i| x_to_y(&vertices[i])).collect();
            let orientation = frame_sign(&frame) * corner_sign;
            debug_assert_ne!(orientation, 0);
            cells.push(LatticeCell {
                base: base.clone(),
                perm: perm.clone(),
                vertices: ids,
                orientation,
            });
        }
    }
    cells.sort_by(|a, b| a.vertices.cmp(&b.vertices));
    let cell_index = cells
        .iter()
        .enumerate()
        .map(|(i, c)| (c.vertices.clone(), i))
        .collect();
    Ok(SubdividedSimplex {
        m,
        side,
        vertices,
        cells,
        vertex_index,
        cell_index,
    })
}

impl SubdividedSimplex {
    pub fn dim(&self) -> usize {
        self.m
    }

    pub fn side(&self) -> u32 {
        self.side
    }

    /// Barycentric lattice coordinates, indexed by lattice vertex id.
    pub fn vertices(&self) -> &[Vec<u32>] {
        &self.vertices
    }

    pub fn cells(&self) -> &[LatticeCell] {
        &self.cells
    }

    pub fn vertex_id(&self, coords: &[u32]) -> Option<usize> {
        self.vertex_index.get(coords).copied()
    }

    pub fn cell_id(&self, sorted_vertices: &[usize]) -> Option<usize> {
        self.cell_index.get(sorted_vertices).copied()
    }

    /// Index of the cell named by cube base and permutation, if it lies in the simplex.
    pub fn cell_by_name(&self, base: &[u32], perm: &[usize]) -> Option<usize> {
        let mut ids = Vec::with_capacity(self.m + 1);
        for k in 0..=self.m {
            let mut y = base.to_vec();
            for &c in &perm[k..] {
                y[c] += 1;
            }
            if y.windows(2).any(|w| w[0] > w[1]) || y[self.m - 1] > self.side {
                return None;
            }
            ids.push(self.vertex_id(&y_to_x(&y, self.side))?);
        }
        ids.sort_unstable();
        self.cell_id(&ids)
    }

    /// The fundamental chain pushed along `label`, oriented so its boundary is
    /// the subdivided boundary of `[ℓe_1, ..., ℓe_{M+1}]`.
    pub fn fundamental_chain<F>(&self, mut label: F) -> Result<IntegerChain>
    where
        F: FnMut(usize) -> VertexId,
    {
        self.cells_chain(0..self.cells.len(), &mut label)
    }

    /// Sub-chain of the fundamental chain on the given cells.
    pub fn cells_chain<I, F>(&self, cells: I, mut label: F) -> Result<IntegerChain>
    where
        I: IntoIterator<Item = usize>,
        F: FnMut(usize) -> VertexId,
    {
        let mut chain = IntegerChain::zero(self.m);
        for c in cells {
            let cell = &self.cells[c];
            let mapped: Vec<VertexId> = cell.vertices.iter().map(|&v| label(v)).collect();
            chain.add_ordered(&mapped, cell.orientation as i64)?;
        }
        Ok(chain)
    }

    /// Lattice vertices whose support lies in the given corners.
    pub fn face_vertices(&self, corners: &[usize]) -> Vec<usize> {
        (0..self.vertices.len())
            .filter(|&i| {
                self.vertices[i]
                    .iter()
                    .enumerate()
                    .all(|(k, &x)| x == 0 || corners.contains(&k))
            })
            .collect()
    }

    /// Barycentre of a cell, scaled by M+1 so it stays integral.
    pub fn scaled_barycentre(&self, cell: usize) -> Vec<u32> {
        let mut acc = vec![0u32; self.m + 1];
        for &v in &self.cells[cell].vertices {
            for (a, x) in acc.iter_mut().zip(&self.vertices[v]) {
                *a += x;
            }
        }
        acc
    }
}

/// A simplicial automorphism induced by a dihedral permutation of the corners.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LatticeAutomorphism {
    /// Image of corner i.
    pub corner_map: Vec<usize>,
    /// Image of lattice vertex i.
    pub vertex_map: Vec<usize>,
    /// Image of cell i.
    pub cell_map: Vec<usize>,
    /// +1 if the fundamental chain is preserved, -1 if it is negated.
    pub orientation: i8,
}

fn is_dihedral(g: &[usize]) -> bool {
    let k = g.len();
    let mut seen = vec![false; k];
    for &x in g {
        if x >= k || seen[x] {
            return false;
        }
        seen[x] = true;
    }
    if k <= 3 {
        return true;
    }
    let step = (g[1] + k - g[0]) % k;
    if step != 1 && step != k - 1 {
        return false;
    }
    (0..k).all(|i| (g[(i + 1) % k] + k - g[i]) % k == step)
}

/// Applies the corner permutation `g` (corner i goes to corner `g[i]`).
/// Only the cyclic-order preserving or reversing permutations are symmetries.
pub fn symmetry_action(t: &SubdividedSimplex, g: &[usize]) -> Result<LatticeAutomorphism> {
    if g.len() != t.m + 1 || !is_dihedral(g) {
        return Err(Error::Domain(format!(
            "{g:?} is not a dihedral permutation of {} corners",
            t.m + 1
        )));
    }
    let vertex_map: Vec<usize> = t
        .vertices
        .iter()
        .map(|x| {
            let mut image = vec![0u32; x.len()];
            for (i, &xi) in x.iter().enumerate() {
                image[g[i]] = xi;
            }
            t.vertex_index[&image]
        })
        .collect();
    let mut cell_map = Vec::with_capacity(t.cells.len());
    let mut orientation = 0i8;
    for cell in &t.cells {
        let mut image: Vec<usize> = cell.vertices.iter().map(|&v| vertex_map[v]).collect();
        let mut labels: Vec<VertexId> = image.iter().map(|&v| VertexId(v as u32)).collect();
        let parity = crate::chain::sort_with_parity(&mut labels).expect("vertex map is a bijection");
        image.sort_unstable();
        let target = t.cell_index.get(&image).copied().ok_or_else(|| {
            Error::Construction(format!("corner map {g:?} does not preserve the cell set"))
        })?;
        let sign = (cell.orientation as i64 * parity * t.cells[target].orientation as i64) as i8;
        if orientation == 0 {
            orientation = sign;
        } else if orientation != sign {
            return Err(Error::Construction(format!(
                "corner map {g:?} has inconsistent orientation character"
            )));
        }
        cell_map.push(target);
    }
    Ok(LatticeAutomorphism {
        corner_map: g.to_vec(),
        vertex_map,
        cell_map,
        orientation,
    })
}

/// All 2(M+1) elements of the dihedral group on M+1 corners (fewer when M+1 <= 2).
pub fn dihedral_elements(k: usize) -> Vec<Vec<usize>> {
    let mut out: Vec<Vec<usize>> = Vec::new();
    for shift in 0..k {
        for reflect in [false, true] {
            let g: Vec<usize> = (0..k)
                .map(|i| if reflect { (shift + k - i) % k } else { (shift + i) % k })
                .collect();
            if !out.contains(&g) {
                out.push(g);
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_integer::binomial;
    use std::collections::BTreeSet;

    use crate::chain::check_disc;

    fn identity(v: usize) -> VertexId {
        VertexId(v as u32)
    }

    #[test]
    fn small_counts() {
        let t = subdivide_simplex(2, 2).unwrap();
        assert_eq!((t.cells().len(), t.vertices().len()), (4, 6));
        let t = subdivide_simplex(3, 2).unwrap();
        assert_eq!((t.cells().len(), t.vertices().len()), (8, 10));
        let t = subdivide_simplex(2, 3).unwrap();
        assert_eq!((t.cells().len(), t.vertices().len()), (9, 10));
    }

    #[test]
    fn counts_up_to_four() {
        for m in 1..=4usize {
            for l in 1..=4u32 {
                let t = subdivide_simplex(m, l).unwrap();
                assert_eq!(t.cells().len(), (l as usize).pow(m as u32));
                assert_eq!(t.vertices().len(), binomial(l as usize + m, m));
                // double count by open face
                let by_face: usize = (0..=m)
                    .map(|k| {
                        binomial(m + 1, k + 1)
                            * if l as usize > k { binomial(l as usize - 1, k) } else { 0 }
                    })
                    .sum();
                assert_eq!(by_face, t.vertices().len());
            }
        }
    }

    /// Independent enumeration: (M+1)-sets of lattice points that are affinely
    /// independent and on which every contiguous coordinate sum varies by at most one.
    fn slicing_oracle(m: usize, l: u32) -> BTreeSet<Vec<Vec<u32>>> {
        let pts = lattice_points(m, l);
        let mut out = BTreeSet::new();
        for subset in pts.iter().combinations(m + 1) {
            let ok = (0..m).all(|i| {
                (i..m).all(|j| {
                    let sums: Vec<u32> = subset.iter().map(|x| x[i..=j].iter().sum()).collect();
                    sums.iter().max().unwrap() - sums.iter().min().unwrap() <= 1
                })
            });
            if !ok {
                continue;
            }
            let frame: Vec<Vec<i64>> = subset.iter().map(|x| x_to_y(x)).collect();
            if frame_sign(&frame) != 0 {
                out.insert(subset.into_iter().cloned().collect());
            }
        }
        out
    }

    #[test]
    fn cube_tiling_matches_plane_slicing() {
        for (m, l) in [(2, 3), (2, 2), (3, 2), (1, 4)] {
            let t = subdivide_simplex(m, l).unwrap();
            let ours: BTreeSet<Vec<Vec<u32>>> = t
                .cells()
                .iter()
                .map(|c| c.vertices.iter().map(|&v| t.vertices()[v].clone()).collect())
                .collect();
            assert_eq!(ours, slicing_oracle(m, l), "M={m} side={l}");
        }
    }

    #[test]
    fn fundamental_chain_is_a_disc_with_subdivided_boundary() {
        for m in 1..=3usize {
            for l in 1..=3u32 {
                let t = subdivide_simplex(m, l).unwrap();
                let f = t.fundamental_chain(identity).unwrap();
                check_disc(&f).unwrap();
                if m >= 2 {
                    // boundary = Σ (-1)^k (face opposite corner k), each face
                    // carrying the induced subdivision in its own corner order
                    let face_t = subdivide_simplex(m - 1, l).unwrap();
                    let mut expected = IntegerChain::zero(m - 1);
                    for k in 0..=m {
                        let corners: Vec<usize> = (0..=m).filter(|&c| c != k).collect();
                        let chain = face_t
                            .fundamental_chain(|v| {
                                let local = &face_t.vertices()[v];
                                let mut x = vec![0u32; m + 1];
                                for (i, &c) in corners.iter().enumerate() {
                                    x[c] = local[i];
                                }
                                identity(t.vertex_id(&x).unwrap())
                            })
                            .unwrap();
                        expected += &chain.scaled(if k % 2 == 0 { 1 } else { -1 });
                    }
                    assert_eq!(f.boundary().unwrap(), expected, "M={m} side={l}");
                }
            }
        }
    }

    #[test]
    fn ridges_lie_in_one_or_two_cells() {
        for m in 1..=4usize {
            for l in 1..=3u32 {
                let t = subdivide_simplex(m, l).unwrap();
                let mut count: HashMap<Vec<usize>, usize> = HashMap::new();
                for c in t.cells() {
                    for face in c.vertices.iter().copied().combinations(m) {
                        *count.entry(face).or_default() += 1;
                    }
                }
                for (face, k) in count {
                    // a ridge is on the boundary iff some barycentric coordinate
                    // vanishes on all its vertices
                    let on_boundary = (0..=m).any(|i| face.iter().all(|&v| t.vertices()[v][i] == 0));
                    assert_eq!(k, if on_boundary { 1 } else { 2 });
                }
            }
        }
    }

    #[test]
    fn dihedral_elements_preserve_cells() {
        for m in 1..=4usize {
            for l in 1..=3u32 {
                let t = subdivide_simplex(m, l).unwrap();
                for g in dihedral_elements(m + 1) {
                    let a = symmetry_action(&t, &g).unwrap();
                    let mut image = a.cell_map.clone();
                    image.sort_unstable();
                    assert_eq!(image, (0..t.cells().len()).collect::<Vec<_>>());
                    // the orientation character agrees with pushing the chain
                    let f = t.fundamental_chain(identity).unwrap();
                    let pushed = f.relabel(|v| identity(a.vertex_map[v.0 as usize])).unwrap();
                    assert_eq!(pushed, f.scaled(a.orientation as i64));
                }
            }
        }
    }

    #[test]
    fn reversing_symmetry_exists_unless_m_divisible_by_four() {
        for m in 1..=8usize {
            let t = subdivide_simplex(m, 1).unwrap();
            let reversing = dihedral_elements(m + 1)
                .iter()
                .any(|g| symmetry_action(&t, g).unwrap().orientation == -1);
            assert_eq!(reversing, m % 4 != 0, "M={m}");
        }
        let t = subdivide_simplex(4, 2).unwrap();
        assert!(dihedral_elements(5)
            .iter()
            .all(|g| symmetry_action(&t, g).unwrap().orientation == 1));
    }

    #[test]
    fn rotation_of_subdivided_triangle_fixes_centre() {
        let t = subdivide_simplex(2, 2).unwrap();
        let id = symmetry_action(&t, &[0, 1, 2]).unwrap();
        assert_eq!(id.cell_map, (0..4).collect::<Vec<_>>());
        let rot = symmetry_action(&t, &[1, 2, 0]).unwrap();
        let centre = t
            .cells()
            .iter()
            .position(|c| c.vertices.iter().all(|&v| t.vertices()[v].iter().all(|&x| x <= 1)))
            .unwrap();
        assert_eq!(rot.cell_map[centre], centre);
        let mut image = rot.cell_map.clone();
        image.sort_unstable();
        assert_eq!(image, vec![0, 1, 2, 3]);
    }

    #[test]
    fn non_dihedral_permutation_rejected() {
        let t = subdivide_simplex(3, 2).unwrap();
        assert!(matches!(symmetry_action(&t, &[0, 2, 1, 3]), Err(Error::Domain(_))));
        assert!(symmetry_action(&t, &[1, 2, 3, 0]).is_ok());
        assert!(symmetry_action(&t, &[3, 2, 1, 0]).is_ok());
    }
}
