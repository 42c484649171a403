//! Complete n-complexes whose n-faces are subdivided with a common side length.

use std::sync::Arc;

use num_bigint::BigUint;
use num_integer::binomial;
use serde::Serialize;

use super::lattice::{subdivide_simplex, SubdividedSimplex};
use crate::chain::{check_sphere, IntegerChain, SimplicialComplex, SphereWitness, VertexId};
use crate::error::{Error, Result};

/// A copy of the subdivided n-simplex inside a larger complex.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TriangulatedFace {
    /// Corner indices of the face in the ambient complex.
    pub corners: Vec<usize>,
    /// Global label of each lattice vertex of the template.
    pub labels: Vec<VertexId>,
    /// Coefficient of the face's fundamental chain in the enclosing chain.
    pub sign: i8,
}

impl TriangulatedFace {
    pub fn label(&self, local: usize) -> VertexId {
        self.labels[local]
    }

    /// The face's cells with the orientation they carry in the enclosing chain.
    pub fn chain(&self, template: &SubdividedSimplex) -> Result<IntegerChain> {
        Ok(template
            .fundamental_chain(|v| self.labels[v])?
            .scaled(self.sign as i64))
    }

    pub fn cells_chain(
        &self,
        template: &SubdividedSimplex,
        cells: impl IntoIterator<Item = usize>,
    ) -> Result<IntegerChain> {
        Ok(template
            .cells_chain(cells, |v| self.labels[v])?
            .scaled(self.sign as i64))
    }
}

/// A sphere made of n+2 subdivided n-faces: the subdivided boundary of an (n+1)-simplex.
#[derive(Clone, Debug, Serialize)]
pub struct SubdividedSphere {
    pub witness: SphereWitness,
    #[serde(skip)]
    pub template: Arc<SubdividedSimplex>,
    pub faces: Vec<TriangulatedFace>,
}

impl SubdividedSphere {
    pub fn flipped(&self) -> Self {
        SubdividedSphere {
            witness: self.witness.flipped(),
            template: self.template.clone(),
            faces: self
                .faces
                .iter()
                .map(|f| TriangulatedFace {
                    sign: -f.sign,
                    ..f.clone()
                })
                .collect(),
        }
    }

    /// Replaces the witness (e.g. after a connect sum) keeping the face data.
    pub fn with_witness(&self, witness: SphereWitness) -> Self {
        SubdividedSphere {
            witness,
            template: self.template.clone(),
            faces: self.faces.clone(),
        }
    }
}

/// Lattice points of the subdivided (M-1)-simplex with support on at most n+1 corners.
#[derive(Clone, Debug, Serialize)]
pub struct TriangulatedCompleteComplex {
    m: usize,
    n: usize,
    side: u32,
    offset: u32,
    coords: Vec<Vec<u32>>,
    #[serde(skip)]
    template: Arc<SubdividedSimplex>,
}

impl TriangulatedCompleteComplex {
    /// Builds the complex with vertex labels starting at `offset`.
    pub fn new(m: usize, n: usize, side: u32, offset: u32) -> Result<Self> {
        if n == 0 || m < n + 1 || side == 0 {
            return Err(Error::Domain(format!(
                "triangulated complete complex needs 1 <= n < M and side >= 1, got M={m} n={n} side={side}"
            )));
        }
        let template = Arc::new(subdivide_simplex(n, side)?);
        let mut coords = Vec::new();
        let mut prefix = Vec::with_capacity(m);
        collect(m, side, n + 1, &mut prefix, &mut coords);
        Ok(TriangulatedCompleteComplex {
            m,
            n,
            side,
            offset,
            coords,
            template,
        })
    }

    pub fn corners(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn side(&self) -> u32 {
        self.side
    }

    pub fn template(&self) -> &Arc<SubdividedSimplex> {
        &self.template
    }

    pub fn vertex_count(&self) -> usize {
        self.coords.len()
    }

    /// Barycentric coordinates of every vertex, in label order.
    pub fn coords(&self) -> &[Vec<u32>] {
        &self.coords
    }

    pub fn vertex_id(&self, coords: &[u32]) -> Option<VertexId> {
        self.coords
            .binary_search_by(|c| c.as_slice().cmp(coords))
            .ok()
            .map(|i| VertexId(self.offset + i as u32))
    }

    pub fn labels(&self) -> impl Iterator<Item = VertexId> + '_ {
        (0..self.coords.len() as u32).map(move |i| VertexId(self.offset + i))
    }

    pub fn corner_vertex(&self, corner: usize) -> VertexId {
        let mut x = vec![0u32; self.m];
        x[corner] = self.side;
        self.vertex_id(&x).expect("corner exists")
    }

    /// The subdivided n-face spanned by the given corners, in ascending order.
    pub fn face(&self, corners: &[usize]) -> Result<TriangulatedFace> {
        if corners.len() != self.n + 1
            || corners.windows(2).any(|w| w[0] >= w[1])
            || corners.iter().any(|&c| c >= self.m)
        {
            return Err(Error::Domain(format!(
                "{corners:?} is not an ascending set of {} corners below {}",
                self.n + 1,
                self.m
            )));
        }
        let labels = self
            .template
            .vertices()
            .iter()
            .map(|local| {
                let mut x = vec![0u32; self.m];
                for (i, &c) in corners.iter().enumerate() {
                    x[c] = local[i];
                }
                self.vertex_id(&x).expect("face vertex has small support")
            })
            .collect();
        Ok(TriangulatedFace {
            corners: corners.to_vec(),
            labels,
            sign: 1,
        })
    }

    /// Every n-cell of every subdivided face.
    pub fn complex(&self) -> Result<SimplicialComplex> {
        let mut cells = Vec::new();
        for corners in itertools::Itertools::combinations(0..self.m, self.n + 1) {
            let face = self.face(&corners)?;
            for cell in self.template.cells() {
                cells.push(cell.vertices.iter().map(|&v| face.labels[v]).collect());
            }
        }
        Ok(SimplicialComplex::from_simplices(cells))
    }

    /// Subdivided boundary of the (n+1)-simplex on the given n+2 corners.
    pub fn sphere_on(&self, corners: &[usize]) -> Result<SubdividedSphere> {
        if corners.len() != self.n + 2 {
            return Err(Error::Domain(format!(
                "a subdivided sphere needs {} corners, got {}",
                self.n + 2,
                corners.len()
            )));
        }
        let mut sorted = corners.to_vec();
        sorted.sort_unstable();
        let mut chain = IntegerChain::zero(self.n);
        let mut faces = Vec::with_capacity(self.n + 2);
        for k in 0..sorted.len() {
            let face_corners: Vec<usize> = sorted
                .iter()
                .enumerate()
                .filter(|&(i, _)| i != k)
                .map(|(_, &c)| c)
                .collect();
            let mut face = self.face(&face_corners)?;
            face.sign = if k % 2 == 0 { 1 } else { -1 };
            chain += &face.chain(&self.template)?;
            faces.push(face);
        }
        let witness = check_sphere(&chain)?.with_note(format!(
            "subdivided sphere on corners {sorted:?}, side {}",
            self.side
        ));
        Ok(SubdividedSphere {
            witness,
            template: self.template.clone(),
            faces,
        })
    }
}

fn collect(left: usize, remaining: u32, max_support: usize, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
    let support = prefix.iter().filter(|&&x| x > 0).count();
    if left == 1 {
        if remaining == 0 || support < max_support {
            prefix.push(remaining);
            out.push(prefix.clone());
            prefix.pop();
        }
        return;
    }
    for v in 0..=remaining {
        if v > 0 && support == max_support {
            break;
        }
        prefix.push(v);
        collect(left - 1, remaining - v, max_support, prefix, out);
        prefix.pop();
    }
}

/// The M-corner complete n-complex with every n-face subdivided to side `side`.
pub fn triangulated_complete_complex(m: usize, n: usize, side: u32) -> Result<TriangulatedCompleteComplex> {
    TriangulatedCompleteComplex::new(m, n, side, 0)
}

/// Vertex count of the triangulated complete n-complex on 2n+4 corners.
pub fn vertex_count_formula(n: usize, side: u64) -> BigUint {
    let mut total = BigUint::from(0u32);
    for k in 0..=n {
        if side < 1 + k as u64 {
            continue;
        }
        total += binomial(BigUint::from(2 * n + 4), BigUint::from(k + 1))
            * binomial(BigUint::from(side - 1), BigUint::from(k));
    }
    total
}

/// The cruder bound `(n+1) C(2n+4, n+1) side^n`.
pub fn vertex_count_bound(n: usize, side: u64) -> BigUint {
    BigUint::from(n + 1)
        * binomial(BigUint::from(2 * n + 4), BigUint::from(n + 1))
        * BigUint::from(side).pow(n as u32)
}
