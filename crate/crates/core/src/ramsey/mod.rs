//! Procedures that find links with prescribed linking behaviour inside a
//! concrete embedding of a complete n-complex.
//!
//! Throughout, `class(x, around)` is the linking number of `x` with `around`
//! computed as the intersection of `x` with the cone over `around`; it is
//! additive in `x`, which is what every connect-sum argument relies on.

mod base;
mod chains;
mod keyring;
mod modq;
mod sums;
mod splice;

use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::ToPrimitive;

use crate::builders::{subdivide_simplex, vertex_count_formula, SubdividedSimplex, SubdividedSphere};
use crate::cert::{Claim, ComponentRecord, LinkCertificate};
use crate::chain::{IntegerChain, SphereWitness, VertexId};
use crate::error::{Error, Result};
use crate::geom::{linking_number, RationalEmbedding};
use crate::surgery::DiscIso;

pub use base::{find_base_link, find_subdivided_base_link, partitions, BaseLink, PartitionValue};
pub use chains::{build_chain_link, build_necklace, four_to_three_mod2, FourToThreeMod2};
pub use keyring::{build_keyring, keyring_from_links, row_subset_search, Gf2Matrix, Keyring, RowSubset};
pub use modq::build_modq_link;
pub use splice::{
    alternate_linking, alternate_sides, four_to_three_integral, four_to_two, three_to_two_integral, FourToThree,
    ThreeToTwo,
};
pub use sums::{amplify_linking, build_modp_link, realizable_residues, subsequence_sum_mod_p};

/// A side-length-ℓ subdivided n-simplex sitting inside a component.
#[derive(Clone, Debug)]
pub struct SimplexPatch {
    pub template: Arc<SubdividedSimplex>,
    /// Global label of each lattice vertex of the template.
    pub labels: Vec<VertexId>,
}

impl SimplexPatch {
    pub fn side(&self) -> u32 {
        self.template.side()
    }

    /// Cells as sorted global vertex lists, in template order.
    pub fn cells(&self) -> Vec<Vec<VertexId>> {
        self.template
            .cells()
            .iter()
            .map(|c| {
                let mut v: Vec<VertexId> = c.vertices.iter().map(|&i| self.labels[i]).collect();
                v.sort();
                v
            })
            .collect()
    }

    pub fn cell(&self, index: usize) -> Vec<VertexId> {
        let mut v: Vec<VertexId> = self.template.cells()[index].vertices.iter().map(|&i| self.labels[i]).collect();
        v.sort();
        v
    }

    /// The corner sub-simplex `{x_corner >= offset}` as a patch of its own.
    pub fn corner_block(&self, corner: usize, offset: u32) -> Result<SimplexPatch> {
        let side = self.side();
        if offset >= side || corner > self.template.dim() {
            return Err(Error::Domain(format!(
                "corner block x_{corner} >= {offset} is empty in a patch of side {side}"
            )));
        }
        let template = Arc::new(subdivide_simplex(self.template.dim(), side - offset)?);
        let labels = template
            .vertices()
            .iter()
            .map(|local| {
                let mut x = local.clone();
                x[corner] += offset;
                self.labels[self.template.vertex_id(&x).expect("shifted lattice point exists")]
            })
            .collect();
        Ok(SimplexPatch { template, labels })
    }

    /// A sub-patch of exactly the given side length.
    pub fn shrink_to(&self, side: u32) -> Result<SimplexPatch> {
        match self.side().cmp(&side) {
            std::cmp::Ordering::Equal => Ok(self.clone()),
            std::cmp::Ordering::Greater => self.corner_block(0, self.side() - side),
            std::cmp::Ordering::Less => Err(Error::size("patch side length", side as u64, self.side() as u64)),
        }
    }
}

/// An oriented sphere together with the subdivided simplices it is known to contain.
#[derive(Clone, Debug)]
pub struct Component {
    pub name: String,
    pub witness: SphereWitness,
    pub patches: Vec<SimplexPatch>,
}

impl Component {
    pub fn new(name: impl Into<String>, witness: SphereWitness) -> Self {
        Component {
            name: name.into(),
            witness,
            patches: Vec::new(),
        }
    }

    pub fn from_subdivided(name: impl Into<String>, s: &SubdividedSphere) -> Self {
        Component {
            name: name.into(),
            witness: s.witness.clone(),
            patches: s
                .faces
                .iter()
                .map(|f| SimplexPatch {
                    template: s.template.clone(),
                    labels: f.labels.clone(),
                })
                .collect(),
        }
    }

    pub fn chain(&self) -> &IntegerChain {
        self.witness.chain()
    }

    pub fn flipped(&self) -> Self {
        Component {
            name: self.name.clone(),
            witness: self.witness.flipped(),
            patches: self.patches.clone(),
        }
    }

    pub fn renamed(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn record(&self) -> ComponentRecord {
        ComponentRecord {
            name: self.name.clone(),
            chain: self.chain().clone(),
        }
    }

    /// Largest patch side length.
    pub fn max_side(&self) -> u32 {
        self.patches.iter().map(|p| p.side()).max().unwrap_or(0)
    }
}

/// Outcome of a procedure: components, the claims about them, and a transcript.
#[derive(Clone, Debug)]
pub struct Link {
    pub components: Vec<Component>,
    pub claims: Vec<Claim>,
    pub transcript: Vec<String>,
}

impl Link {
    pub fn certify(&self, theorem: &str, params: BTreeMap<String, i64>, e: &RationalEmbedding) -> Result<LinkCertificate> {
        LinkCertificate::assemble(
            theorem,
            params,
            e,
            self.components.iter().map(Component::record).collect(),
            self.claims.clone(),
            self.transcript.clone(),
        )
    }
}

/// Linking number of `x` with `around`.
pub fn class(e: &RationalEmbedding, x: &IntegerChain, around: &IntegerChain) -> Result<i64> {
    Ok(linking_number(e, x, around)?.value)
}

pub fn parity(v: i64) -> u8 {
    v.rem_euclid(2) as u8
}

fn ceil_div(a: u64, b: u64) -> u64 {
    a.div_ceil(b)
}

/// Vertices of `K^n_{key(r)}` that guarantee an r-key generalised keyring.
pub fn key(n: usize, r: u64) -> u64 {
    let n = n as u64;
    4 * r * r * (2 * n + 4) + n + ceil_div((4 * r * r).saturating_sub(2), n) + 1
}

/// For circles the auxiliary sphere is unnecessary and `24 r^2` vertices suffice.
pub fn key_circles(r: u64) -> u64 {
    24 * r * r
}

pub fn chain_bound(n: usize, r: u64) -> u64 {
    (2 * n as u64 + 4) * (r - 1)
}

pub fn necklace_bound(n: usize, r: u64) -> u64 {
    (2 * n as u64 + 4) * r
}

pub fn keyring_bound(n: usize, r: u64) -> u64 {
    if n == 1 {
        key_circles(r)
    } else {
        key(n, r)
    }
}

pub fn amplify_bound(n: usize, lambda: u64) -> u64 {
    key(n, 2 * lambda - 1) + n as u64 + ceil_div(2 * lambda - 1, n as u64) + 1
}

pub fn modp_bound(n: usize, p: u64) -> u64 {
    key(n, 2 * p - 1) + n as u64 + ceil_div(2 * p - 3, n as u64) + 1
}

pub fn modq_bound(n: usize, q: u64) -> Result<u64> {
    let v = vertex_count_formula(n, q)
        .to_u64()
        .ok_or_else(|| Error::Domain("vertex count exceeds u64".into()))?;
    Ok(4 * q * q * v + n as u64 + ceil_div((4 * q * q).saturating_sub(2), n as u64) + 1)
}

/// Vertex ids of the embedding, which must be exactly `0..N`.
pub(crate) fn universe(e: &RationalEmbedding) -> Result<Vec<VertexId>> {
    let vs: Vec<VertexId> = e.points().keys().copied().collect();
    if vs.iter().enumerate().any(|(i, v)| v.0 as usize != i) {
        return Err(Error::Domain("embedded vertices must be labelled 0..N".into()));
    }
    Ok(vs)
}

pub(crate) fn require_size(what: &str, required: u64, actual: usize) -> Result<()> {
    if (actual as u64) < required {
        return Err(Error::size(what, required, actual as u64));
    }
    Ok(())
}

/// Orientation-reversing isomorphisms between two patches of equal side,
/// restricted to the given cells of the first, one per dihedral relabelling
/// of the target that reverses orientation.
pub(crate) fn reversing_patch_isos(
    s1: &IntegerChain,
    p1: &SimplexPatch,
    cells: &[usize],
    s2: &IntegerChain,
    p2: &SimplexPatch,
) -> Result<Vec<(DiscIso, Vec<usize>)>> {
    use crate::builders::{dihedral_elements, symmetry_action};
    if p1.side() != p2.side() || p1.template.dim() != p2.template.dim() {
        return Err(Error::Domain("patches differ in shape".into()));
    }
    let cell_lists: Vec<Vec<VertexId>> = cells.iter().map(|&c| p1.cell(c)).collect();
    let mut out = Vec::new();
    for g in dihedral_elements(p1.template.dim() + 1) {
        let auto = symmetry_action(&p1.template, &g)?;
        let map: BTreeMap<VertexId, VertexId> = (0..p1.labels.len())
            .map(|v| (p1.labels[v], p2.labels[auto.vertex_map[v]]))
            .collect();
        let iso = DiscIso::new(s1, &cell_lists, s2, map)?;
        if iso.character == -1 {
            out.push((iso, g));
        }
    }
    Ok(out)
}

/// Prefix-sum pigeonhole: indices `0 <= a < b <= values.len()` with
/// `values[a..b]` summing to 0 mod q, preferring the earliest collision.
pub(crate) fn zero_sum_window(values: &[i64], q: i64) -> Option<(usize, usize)> {
    let mut seen: BTreeMap<i64, usize> = BTreeMap::new();
    seen.insert(0, 0);
    let mut acc = 0i64;
    for (k, v) in values.iter().enumerate() {
        acc = (acc + v).rem_euclid(q);
        if let Some(&a) = seen.get(&acc) {
            return Some((a, k + 1));
        }
        seen.insert(acc, k + 1);
    }
    None
}
