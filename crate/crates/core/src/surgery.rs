//! Chain-level surgery: mapping cylinders between discs, prism spheres,
//! connect sums and the connecting sphere.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::chain::{check_disc, check_sphere, IntegerChain, SimplicialComplex, SphereWitness, VertexId};
use crate::error::{Error, Result};

/// A simplicial isomorphism between a disc of one sphere and a disc of another.
#[derive(Clone, Debug, Serialize)]
pub struct DiscIso {
    /// The disc `D_1` with the coefficients it carries in `S_1`.
    pub source: IntegerChain,
    /// The disc `D_2` with the coefficients it carries in `S_2`.
    pub target: IntegerChain,
    pub map: BTreeMap<VertexId, VertexId>,
    /// -1 when `φ♯ D_1 = -D_2`, +1 when `φ♯ D_1 = D_2`.
    pub character: i8,
}

impl DiscIso {
    /// Restricts `s1` to `cells` and pushes it along `map` into `s2`.
    pub fn new(
        s1: &IntegerChain,
        cells: &[Vec<VertexId>],
        s2: &IntegerChain,
        map: BTreeMap<VertexId, VertexId>,
    ) -> Result<DiscIso> {
        let mut source = IntegerChain::zero(s1.dim());
        for cell in cells {
            let mut key = cell.clone();
            key.sort();
            let coeff = s1.coefficient(&key);
            if coeff == 0 {
                return Err(Error::Precondition(format!("{key:?} is not a cell of the first sphere")));
            }
            source.add_sorted(key, coeff);
        }
        check_disc(&source).map_err(|e| Error::Precondition(format!("source is not a disc: {e}")))?;
        let source_vertices = source.vertices();
        let mut images = BTreeSet::new();
        for v in &source_vertices {
            let w = map
                .get(v)
                .ok_or_else(|| Error::Precondition(format!("map undefined on vertex {v}")))?;
            if !images.insert(*w) {
                return Err(Error::Precondition(format!("map is not injective at {w}")));
            }
        }
        let pushed = source.relabel(|v| map[&v])?;
        let target = s2.restrict(|s| pushed.coefficient(s) != 0);
        if target.len() != pushed.len() {
            return Err(Error::Precondition("image of the disc is not in the second sphere".into()));
        }
        let character = if pushed == -&target {
            -1
        } else if pushed == target {
            1
        } else {
            return Err(Error::Orientation(
                "map reverses orientation on some cells and preserves it on others".into(),
            ));
        };
        let map = map
            .into_iter()
            .filter(|(v, _)| source_vertices.contains(v))
            .collect();
        Ok(DiscIso {
            source,
            target,
            map,
            character,
        })
    }

    fn phi(&self, v: VertexId) -> VertexId {
        self.map[&v]
    }

    /// `φ♯` applied to a chain supported on the source disc.
    pub fn push(&self, c: &IntegerChain) -> Result<IntegerChain> {
        c.relabel(|v| self.phi(v))
    }

    /// The prism operator `𝒫` on a chain of the source disc's skeleton.
    /// Vertices are labelled in ascending order, `w_i = φ(v_i)`.
    pub fn prism(&self, c: &IntegerChain) -> Result<IntegerChain> {
        let mut out = IntegerChain::zero(c.dim() + 1);
        for (simplex, coeff) in c.terms() {
            for j in 0..simplex.len() {
                let mut tuple: Vec<VertexId> = simplex[..=j].to_vec();
                tuple.extend(simplex[j..].iter().map(|&v| self.phi(v)));
                let sign = if j % 2 == 0 { 1 } else { -1 };
                out.add_ordered(&tuple, sign * coeff)?;
            }
        }
        Ok(out)
    }

    /// Vertex sets of the simplices making up `δ × I` for a face `δ`.
    pub fn crossed(&self, face: &[VertexId]) -> Vec<Vec<VertexId>> {
        let mut sorted = face.to_vec();
        sorted.sort();
        (0..sorted.len())
            .map(|j| {
                let mut s: Vec<VertexId> = sorted[..=j].to_vec();
                s.extend(sorted[j..].iter().map(|&v| self.phi(v)));
                s.sort();
                s
            })
            .collect()
    }
}

fn require_disjoint(a: &IntegerChain, b: &IntegerChain, what: &str) -> Result<()> {
    let va = a.vertices();
    if let Some(v) = b.vertices().iter().find(|v| va.contains(v)) {
        return Err(Error::Precondition(format!("{what} share vertex {v}")));
    }
    Ok(())
}

/// The union of the prisms over every (n-1)-simplex of the source disc.
#[derive(Clone, Debug)]
pub struct MappingCylinder {
    pub simplices: BTreeSet<Vec<VertexId>>,
}

impl MappingCylinder {
    pub fn complex(&self) -> SimplicialComplex {
        SimplicialComplex::from_simplices(self.simplices.iter().cloned())
    }
}

pub fn mapping_cylinder(s1: &SphereWitness, s2: &SphereWitness, iso: &DiscIso) -> Result<MappingCylinder> {
    require_disjoint(s1.chain(), s2.chain(), "spheres")?;
    let n = s1.n();
    let mut simplices = BTreeSet::new();
    if n == 0 {
        return Ok(MappingCylinder { simplices });
    }
    for ridge in iso.source.closure().faces_of_dim(n - 1) {
        simplices.extend(iso.crossed(&ridge));
    }
    Ok(MappingCylinder { simplices })
}

/// The spheres `P_0, ..., P_k` of a prism surgery between two spheres.
#[derive(Clone, Debug, Serialize)]
pub struct PrismFamily {
    pub spheres: Vec<SphereWitness>,
    /// `Δ_i` for i >= 1 (index i-1), sorted vertices.
    pub cells: Vec<Vec<VertexId>>,
    /// `φ(Δ_i)`, sorted vertices.
    pub images: Vec<Vec<VertexId>>,
}

impl PrismFamily {
    /// Builds only `P_i` for the listed `i >= 1`, skipping the rest.
    pub fn partial(s1: &SphereWitness, s2: &SphereWitness, iso: &DiscIso, which: &[usize]) -> Result<Vec<SphereWitness>> {
        check_prism_inputs(s1, s2, iso)?;
        let cells: Vec<(&[VertexId], i64)> = iso.source.terms().collect();
        which
            .iter()
            .map(|&i| {
                let (cell, eps) = cells
                    .get(i.wrapping_sub(1))
                    .ok_or_else(|| Error::Domain(format!("no prism sphere P_{i}")))?;
                prism_cell(iso, cell, *eps, i)
            })
            .collect()
    }
}

fn check_prism_inputs(s1: &SphereWitness, s2: &SphereWitness, iso: &DiscIso) -> Result<()> {
    require_disjoint(s1.chain(), s2.chain(), "spheres")?;
    if iso.character != -1 {
        return Err(Error::Orientation(
            "disc isomorphism preserves orientation; choose faces of opposite orientation".into(),
        ));
    }
    Ok(())
}

fn prism_cell(iso: &DiscIso, cell: &[VertexId], eps: i64, i: usize) -> Result<SphereWitness> {
    let delta = IntegerChain::simplex(cell)?;
    let p = (&delta + &iso.prism(&delta.boundary()?)?) - iso.push(&delta)?;
    let p = p.scaled(-eps);
    let w = check_sphere(&p)?;
    Ok(w.with_note(format!("prism sphere P_{i} over cell {:?}", raw(cell))))
}

fn raw(v: &[VertexId]) -> Vec<u32> {
    v.iter().map(|x| x.0).collect()
}

/// All prism spheres, with `∂P_i = 0` and `S_1 + S_2 + ΣP_i = 0` verified.
pub fn prism_spheres(s1: &SphereWitness, s2: &SphereWitness, iso: &DiscIso) -> Result<PrismFamily> {
    check_prism_inputs(s1, s2, iso)?;
    let d1 = &iso.source;
    let d2 = &iso.target;
    let p0 = (d1 - s1.chain()) + (d2 - s2.chain()) + iso.prism(&d1.boundary()?)?;
    let mut spheres = vec![check_sphere(&p0)?.with_note("prism sphere P_0 over the disc complement")];
    let mut cells = Vec::new();
    let mut images = Vec::new();
    for (i, (cell, eps)) in d1.terms().enumerate() {
        spheres.push(prism_cell(iso, cell, eps, i + 1)?);
        cells.push(cell.to_vec());
        let mut image: Vec<VertexId> = cell.iter().map(|&v| iso.map[&v]).collect();
        image.sort();
        images.push(image);
    }
    let mut total = s1.chain() + s2.chain();
    for p in &spheres {
        total += p.chain();
    }
    if !total.is_zero() {
        return Err(Error::Falsification(format!(
            "prism identity left {} nonzero terms",
            total.len()
        )));
    }
    Ok(PrismFamily { spheres, cells, images })
}

/// Sum of two spheres that share an oppositely oriented disc and nothing else.
pub fn connect_sum(a: &SphereWitness, b: &SphereWitness) -> Result<SphereWitness> {
    if a.n() != b.n() {
        return Err(Error::Domain("connect sum of spheres of different dimension".into()));
    }
    let shared = a.chain().restrict(|s| b.chain().coefficient(s) != 0);
    if shared.is_zero() {
        return Err(Error::Precondition("spheres share no cell".into()));
    }
    for (s, coeff) in shared.terms() {
        if coeff + b.chain().coefficient(s) != 0 {
            return Err(Error::Orientation(format!(
                "cancellation failure: cell {:?} has the same orientation in both spheres",
                raw(s)
            )));
        }
    }
    check_disc(&shared).map_err(|e| Error::Precondition(format!("shared cells are not a disc: {e}")))?;
    let common = a.chain().closure().intersection(&b.chain().closure());
    let disc_faces = shared.closure().all_faces();
    if common != disc_faces {
        return Err(Error::Precondition(
            "spheres meet outside the shared disc".into(),
        ));
    }
    let sum = a.chain() + b.chain();
    Ok(check_sphere(&sum)?.with_note(format!("connect sum along {} cells", shared.len())))
}

/// The sphere meeting each `S_i` in a single cell, with the attachment cells.
#[derive(Clone, Debug, Serialize)]
pub struct ConnectingSphere {
    pub sphere: SphereWitness,
    /// `δ_i`, the cell shared with the i-th sphere.
    pub attachments: Vec<Vec<VertexId>>,
    pub transcript: Vec<String>,
}

/// Orientation-reversing map from cell `a` of `sa` onto cell `b` of `sb`:
/// sorted vertices to sorted vertices, with the last two targets swapped if needed.
pub fn reversing_cell_map(
    sa: &IntegerChain,
    a: &[VertexId],
    sb: &IntegerChain,
    b: &[VertexId],
) -> Result<DiscIso> {
    let mut targets = b.to_vec();
    let ea = sa.coefficient(a);
    let eb = sb.coefficient(b);
    if ea == eb {
        let k = targets.len();
        if k < 2 {
            return Err(Error::Orientation("a vertex admits no orientation reversal".into()));
        }
        targets.swap(k - 2, k - 1);
    }
    let map = a.iter().copied().zip(targets).collect();
    DiscIso::new(sa, &[a.to_vec()], sb, map)
}

/// Connects `others` through `s0`, which must have at least `others.len()` cells.
pub fn connecting_sphere(s0: &SphereWitness, others: &[SphereWitness]) -> Result<ConnectingSphere> {
    let k = others.len();
    if s0.chain().len() < k {
        return Err(Error::size("auxiliary sphere cells", k as u64, s0.chain().len() as u64));
    }
    for (i, s) in others.iter().enumerate() {
        require_disjoint(s0.chain(), s.chain(), "auxiliary sphere and component")?;
        for t in &others[i + 1..] {
            require_disjoint(s.chain(), t.chain(), "components")?;
        }
    }
    let targets: Vec<Vec<VertexId>> = s0.chain().support().take(k).map(|s| s.to_vec()).collect();
    let mut transcript = Vec::new();
    let mut current = s0.clone();
    let mut attachments = Vec::with_capacity(k);
    for (i, s) in others.iter().enumerate() {
        let delta = s.chain().support().next().expect("sphere is nonempty").to_vec();
        let iso = reversing_cell_map(s.chain(), &delta, s0.chain(), &targets[i])?;
        let q = PrismFamily::partial(s, s0, &iso, &[1])?.remove(0);
        transcript.push(format!(
            "component {i}: cell {:?} joined to auxiliary cell {:?}",
            raw(&delta),
            raw(&targets[i])
        ));
        current = connect_sum(&current, &q)?;
        attachments.push(delta);
    }
    for (s, delta) in others.iter().zip(&attachments) {
        let common = current.chain().closure().intersection(&s.chain().closure());
        let expected = SimplicialComplex::from_simplices([delta.clone()]).all_faces();
        if common != expected {
            return Err(Error::Falsification("connecting sphere meets a component outside its attachment cell".into()));
        }
    }
    let sphere = current.with_note(format!("connecting sphere through {k} components"));
    Ok(ConnectingSphere {
        sphere,
        attachments,
        transcript,
    })
}

/// For circles no auxiliary sphere is needed: join the components in a
/// cycle by edges between consecutive circles.
pub fn connecting_cycle(others: &[SphereWitness]) -> Result<ConnectingSphere> {
    let k = others.len();
    if k < 2 {
        return Err(Error::size("components for a connecting cycle", 2, k as u64));
    }
    if others.iter().any(|s| s.n() != 1) {
        return Err(Error::Domain("connecting cycles exist only for circles".into()));
    }
    for (i, s) in others.iter().enumerate() {
        for t in &others[i + 1..] {
            require_disjoint(s.chain(), t.chain(), "components")?;
        }
    }
    // δ_i traversed a_i -> b_i in S_i; the cycle runs b_i -> a_i -> b_{i+1}
    let ends: Vec<(VertexId, VertexId)> = others
        .iter()
        .map(|s| {
            let (edge, coeff) = s.chain().terms().next().expect("sphere is nonempty");
            if coeff > 0 {
                (edge[0], edge[1])
            } else {
                (edge[1], edge[0])
            }
        })
        .collect();
    let mut cycle = IntegerChain::zero(1);
    let mut transcript = Vec::new();
    for i in 0..k {
        let (a, b) = ends[i];
        let (_, b_next) = ends[(i + 1) % k];
        cycle.add_ordered(&[b, a], 1)?;
        cycle.add_ordered(&[a, b_next], 1)?;
        transcript.push(format!("edge {a}-{b_next} joins component {i} to {}", (i + 1) % k));
    }
    let sphere = check_sphere(&cycle)?.with_note(format!("connecting cycle through {k} circles"));
    let attachments = ends
        .iter()
        .map(|&(a, b)| {
            let mut e = vec![a, b];
            e.sort();
            e
        })
        .collect();
    Ok(ConnectingSphere {
        sphere,
        attachments,
        transcript,
    })
}
