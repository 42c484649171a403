//! Splicing links with integral linking numbers through subdivided simplices
//! carried by the components.

use rayon::prelude::*;

use super::{class, find_subdivided_base_link, require_size, reversing_patch_isos, universe, Component, Link, SimplexPatch};
use crate::builders::{shrink_after_delete, TriangulatedCompleteComplex};
use crate::cert::{Claim, Predicate};
use crate::chain::IntegerChain;
use crate::error::{Error, Result};
use crate::geom::RationalEmbedding;
use crate::surgery::{connect_sum, prism_spheres, DiscIso, PrismFamily};

/// Outcome of the integral four-to-three lemma: `lk(L, Z) = p1 >= 1` and
/// `lk(L, W) = p2 >= p`.
#[derive(Clone, Debug)]
pub struct FourToThree {
    pub l: Component,
    pub z: Component,
    pub w: Component,
    pub p1: i64,
    pub p2: i64,
    /// Index of the prism sphere used, if any.
    pub q: Option<usize>,
    pub case: String,
    pub transcript: Vec<String>,
}

/// Outcome of the three-to-two lemma: `lk(J, L) = value >= p1 + p2`.
#[derive(Clone, Debug)]
pub struct ThreeToTwo {
    pub j: Component,
    pub value: i64,
    pub q: usize,
    pub transcript: Vec<String>,
}

fn pow(side: u32, n: usize) -> i64 {
    (side as i64).saturating_pow(n as u32)
}

fn dropped_side(side: u32, n: usize) -> u32 {
    n as u32 * side / (n as u32 + 1)
}

/// `c` reoriented so that `lk(of, c)` (or `lk(c, of)` when `c_first`) is positive.
fn orient(e: &RationalEmbedding, c: &Component, of: &Component, c_first: bool, log: &mut Vec<String>) -> Result<(Component, i64)> {
    let v = if c_first {
        class(e, c.chain(), of.chain())?
    } else {
        class(e, of.chain(), c.chain())?
    };
    if v < 0 {
        log.push(format!("flipped {}", c.name));
        Ok((c.flipped(), -v))
    } else {
        Ok((c.clone(), v))
    }
}

fn patches_of_side(c: &Component, side: u32) -> Result<Vec<SimplexPatch>> {
    c.patches.iter().filter(|p| p.side() >= side).map(|p| p.shrink_to(side)).collect()
}

/// Patches whose cells all survive in `chain`.
fn surviving<'a>(chain: &IntegerChain, candidates: impl IntoIterator<Item = &'a SimplexPatch>) -> Vec<SimplexPatch> {
    candidates
        .into_iter()
        .filter(|p| p.cells().iter().all(|c| chain.coefficient(c) != 0))
        .cloned()
        .collect()
}

/// A reversing isomorphism from a side-`side` patch of `a` onto one of `b`.
fn pair_patches(a: &Component, b: &Component, side: u32) -> Result<Option<(SimplexPatch, SimplexPatch, DiscIso)>> {
    for pa in patches_of_side(a, side)? {
        let all: Vec<usize> = (0..pa.template.cells().len()).collect();
        for pb in patches_of_side(b, side)? {
            if let Some((iso, _)) = reversing_patch_isos(a.chain(), &pa, &all, b.chain(), &pb)?.into_iter().next() {
                return Ok(Some((pa, pb, iso)));
            }
        }
    }
    Ok(None)
}

/// Prism classes around `around`, and the first index with nonnegative class.
fn prism_classes(e: &RationalEmbedding, family: &PrismFamily, around: &Component, expected_sum: i64) -> Result<(Vec<i64>, usize)> {
    let vals: Vec<i64> = family
        .spheres
        .par_iter()
        .map(|p| class(e, p.chain(), around.chain()))
        .collect::<Result<_>>()?;
    let sum: i64 = vals.iter().sum();
    if sum != expected_sum {
        return Err(Error::Falsification(format!(
            "prism classes sum to {sum}, expected {expected_sum}"
        )));
    }
    let q = vals
        .iter()
        .position(|&v| v >= 0)
        .ok_or_else(|| Error::Falsification(format!("no prism sphere has nonnegative class among {vals:?}")))?;
    Ok((vals, q))
}

/// The patch of `target` left after deleting the image of prism cell `q`.
fn shrunk_patch(family: &PrismFamily, target: &SimplexPatch, q: usize, log: &mut Vec<String>) -> Result<SimplexPatch> {
    if q == 0 {
        return Ok(target.clone());
    }
    let image = &family.images[q - 1];
    let idx = target
        .cells()
        .iter()
        .position(|c| c == image)
        .ok_or_else(|| Error::Falsification("prism image is not a cell of the target patch".into()))?;
    let block = shrink_after_delete(&target.template, idx)?;
    log.extend(block.transcript.iter().cloned());
    target.corner_block(block.corner, block.offset)
}

/// Given `lk(X1, Y1) >= 1` and `lk(X2, Y2) = p >= 1` (after reorienting
/// the Y's) and side-`side` patches with `side^n >= p` in every component,
/// spheres `L, Z, W` with `lk(L, Z) >= 1` and `lk(L, W) >= p`.
pub fn four_to_three_integral(
    e: &RationalEmbedding,
    x1: &Component,
    y1: &Component,
    x2: &Component,
    y2: &Component,
    side: u32,
) -> Result<FourToThree> {
    let n = e.n();
    let mut log = Vec::new();
    let (y1, a) = orient(e, y1, x1, false, &mut log)?;
    let (y2, p) = orient(e, y2, x2, false, &mut log)?;
    if a < 1 || p < 1 {
        return Err(Error::Input(format!("need lk(X1, Y1) >= 1 and lk(X2, Y2) >= 1, got {a} and {p}")));
    }
    if pow(side, n) < p {
        return Err(Error::Input(format!("side {side} has {side}^{n} < p = {p}")));
    }
    for c in [x1, &y1, x2, &y2] {
        if c.max_side() < side {
            return Err(Error::Input(format!("{} has no subdivided simplex of side {side}", c.name)));
        }
    }
    log.push(format!("lk(X1, Y1) = {a}, lk(X2, Y2) = p = {p}"));
    let finish = |l: Component, z: Component, w: Component, q: Option<usize>, case: &str, mut log: Vec<String>| -> Result<FourToThree> {
        let mut log2 = Vec::new();
        let (z, p1) = orient(e, &z, &l, false, &mut log2)?;
        let (w, p2) = orient(e, &w, &l, false, &mut log2)?;
        log.extend(log2);
        if p1 < 1 || p2 < p {
            return Err(Error::Falsification(format!("case '{case}' gave lk(L, Z) = {p1}, lk(L, W) = {p2}")));
        }
        let need = if q.is_some_and(|q| q > 0) { dropped_side(side, n) } else { side };
        if l.max_side() < need {
            return Err(Error::Falsification(format!("L keeps side {} < {need}", l.max_side())));
        }
        log.push(format!("{case}: lk(L, Z) = {p1}, lk(L, W) = {p2}, side {}", l.max_side()));
        Ok(FourToThree {
            l: l.renamed("L"),
            z: z.renamed("Z"),
            w: w.renamed("W"),
            p1,
            p2,
            q,
            case: case.to_string(),
            transcript: log,
        })
    };
    if class(e, x2.chain(), y1.chain())? != 0 {
        return finish(x2.clone(), y1.clone(), y2.clone(), None, "L = X2", log);
    }
    if class(e, y2.chain(), x1.chain())? != 0 {
        return finish(y2.clone(), x1.clone(), x2.clone(), None, "L = Y2", log);
    }
    let mut chosen = None;
    for flip in [false, true] {
        let (x1f, y1f) = if flip { (x1.flipped(), y1.flipped()) } else { (x1.clone(), y1.clone()) };
        if let Some(found) = pair_patches(&x1f, x2, side)? {
            if flip {
                log.push("reversed X1 and Y1 so the disc map reverses orientation".into());
            }
            chosen = Some((x1f, y1f, found));
            break;
        }
    }
    let (x1, y1, (_, d2, iso)) =
        chosen.ok_or_else(|| Error::Construction("no orientation-reversing map between the discs".into()))?;
    let family = prism_spheres(&x1.witness, &x2.witness, &iso)?;
    let base = class(e, x1.chain(), y2.chain())?;
    let (vals, q) = prism_classes(e, &family, &y2, -base - p)?;
    log.push(format!("prism classes around Y2: {vals:?}; q = {q}"));
    let pq = &family.spheres[q];
    let patch = shrunk_patch(&family, &d2, q, &mut log)?;
    let (sphere, case) = if class(e, pq.chain(), y1.chain())? != 0 {
        (connect_sum(pq, &x2.witness)?, "L = P_q + X2")
    } else {
        (connect_sum(&connect_sum(&x1.witness, pq)?, &x2.witness)?, "L = X1 + P_q + X2")
    };
    let mut l = Component::new("L", sphere);
    l.patches = surviving(l.chain(), std::iter::once(&patch).chain(&x2.patches).chain(&x1.patches));
    finish(l, y1, y2, Some(q), case, log)
}

/// Given `lk(L, Z) = p1 > 0`, `lk(L, W) = p2 > 0` and side-`side` patches
/// in `Z` and `W` with `side^n >= p1 + p2`, a sphere `J` disjoint from `L`
/// with `lk(J, L) >= p1 + p2`. The orientation-reversing map between the
/// patches is found by searching the dihedral relabellings.
pub fn three_to_two_integral(e: &RationalEmbedding, l: &Component, z: &Component, w: &Component, side: u32) -> Result<ThreeToTwo> {
    let n = e.n();
    let mut log = Vec::new();
    let (z, p1) = orient(e, z, l, true, &mut log)?;
    let (w, p2) = orient(e, w, l, true, &mut log)?;
    if p1 < 1 || p2 < 1 {
        return Err(Error::Input(format!("need nonzero linking with L, got {p1} and {p2}")));
    }
    if pow(side, n) < p1 + p2 {
        return Err(Error::Input(format!("side {side} has {side}^{n} < p1 + p2 = {}", p1 + p2)));
    }
    let (_, dw, iso) = pair_patches(&z, &w, side)?.ok_or_else(|| {
        Error::Construction("no orientation-reversing map between the subdivided simplices of Z and W".into())
    })?;
    let family = prism_spheres(&z.witness, &w.witness, &iso)?;
    let (vals, q) = prism_classes(e, &family, l, -(p1 + p2))?;
    log.push(format!("p1 = {p1}, p2 = {p2}; prism classes around L: {vals:?}; q = {q}"));
    let pq = &family.spheres[q];
    let patch = shrunk_patch(&family, &dw, q, &mut log)?;
    let sphere = connect_sum(&connect_sum(&z.witness, pq)?, &w.witness)?;
    if sphere.vertices().intersection(&l.witness.vertices()).next().is_some() {
        return Err(Error::Falsification("J meets L".into()));
    }
    let mut j = Component::new("J", sphere);
    j.patches = surviving(j.chain(), std::iter::once(&patch).chain(&w.patches).chain(&z.patches));
    let value = class(e, j.chain(), l.chain())?;
    if value < p1 + p2 || j.max_side() < dropped_side(side, n) {
        return Err(Error::Falsification(format!(
            "J has lk {value} < {} or side {} too small",
            p1 + p2,
            j.max_side()
        )));
    }
    log.push(format!("lk(J, L) = {value}"));
    Ok(ThreeToTwo {
        j,
        value,
        q,
        transcript: log,
    })
}

/// Composition of the two lemmas: a link `A ∪ B` with `lk(A, B) >= p + 1`
/// where `p = lk(X2, Y2)`, each component keeping a patch of side at least
/// `floor(n side / (n + 1))`. Returned as a two-component link.
pub fn four_to_two(
    e: &RationalEmbedding,
    x1: &Component,
    y1: &Component,
    x2: &Component,
    y2: &Component,
    side: u32,
) -> Result<Link> {
    let n = e.n();
    let p = class(e, x2.chain(), y2.chain())?.abs();
    if pow(side, n) < 2 * p {
        return Err(Error::Input(format!("side {side} has {side}^{n} < 2p = {}", 2 * p)));
    }
    let t = four_to_three_integral(e, x1, y1, x2, y2, side)?;
    let mut transcript = t.transcript.clone();
    transcript.push(format!("four-to-three: {}", t.case));
    let (a, b, value) = if pow(side, n) < t.p1 + t.p2 {
        // then one of p1, p2 already exceeds p
        if t.p1 > p {
            transcript.push("side too short for three-to-two; J = Z".into());
            (t.l, t.z, t.p1)
        } else {
            transcript.push("side too short for three-to-two; J = W".into());
            (t.l, t.w, t.p2)
        }
    } else {
        let s = three_to_two_integral(e, &t.l, &t.z, &t.w, side)?;
        transcript.extend(s.transcript);
        (s.j, t.l, s.value)
    };
    if value < p + 1 {
        return Err(Error::Falsification(format!("four-to-two reached lk {value} < {}", p + 1)));
    }
    Ok(Link {
        claims: vec![Claim::new(0, 1, value, Predicate::AtLeast { bound: p + 1 })],
        components: vec![a.renamed("A"), b.renamed("B")],
        transcript,
    })
}

/// Smallest μ with μ^n >= 2(λ - 1).
fn mu(n: usize, lambda: u64) -> u32 {
    let target = 2 * (lambda as i64 - 1);
    (1u32..).find(|&m| pow(m, n) >= target).expect("μ exists")
}

/// Side lengths of the blocks `C_1, ..., C_λ`.
pub fn alternate_sides(n: usize, lambda: u64) -> Result<Vec<u32>> {
    if lambda < 2 {
        return Err(Error::Domain("λ must be at least 2".into()));
    }
    let m = mu(n, lambda);
    let side = |i: u64| (1u32 << (lambda - i)) * m;
    let mut sides = vec![side(2)];
    sides.extend((2..=lambda).map(side));
    Ok(sides)
}

/// A link `L ∪ J` with `lk(L, J) >= λ`, built by repeated splicing of base
/// links on triangulated complete complexes of decreasing side length.
pub fn alternate_linking(e: &RationalEmbedding, lambda: u64) -> Result<Link> {
    let n = e.n();
    let sides = alternate_sides(n, lambda)?;
    let verts = universe(e)?;
    let mut blocks = Vec::new();
    let mut offset = 0u32;
    for &s in &sides {
        let c = TriangulatedCompleteComplex::new(2 * n + 4, n, s, offset)?;
        offset += c.vertex_count() as u32;
        blocks.push(c);
    }
    require_size("alternate construction vertices", offset as u64, verts.len())?;
    let mut transcript = vec![format!("block sides {sides:?} on {offset} vertices")];
    let pairs: Vec<(Component, Component)> = blocks
        .par_iter()
        .map(|c| {
            let b = find_subdivided_base_link(e, c)?;
            let (s, t) = (b.first.renamed("S"), b.second.renamed("T"));
            Ok(if b.value < 0 { (s, t.flipped()) } else { (s, t) })
        })
        .collect::<Result<_>>()?;
    let (mut l, mut j) = pairs[0].clone();
    let mut p = class(e, l.chain(), j.chain())?;
    for (i, (s, t)) in pairs.iter().enumerate().take(lambda as usize).skip(1) {
        if p >= lambda as i64 {
            break;
        }
        let side = (1u32 << (lambda as usize - i - 1)) * mu(n, lambda);
        let link = four_to_two(e, s, t, &l, &j, side)?;
        transcript.push(format!("step {i}: lk {p} -> {} at side {side}", link.claims[0].value));
        transcript.extend(link.transcript);
        let mut comps = link.components.into_iter();
        l = comps.next().expect("two components");
        j = comps.next().expect("two components");
        p = class(e, l.chain(), j.chain())?;
    }
    if p < lambda as i64 {
        return Err(Error::Falsification(format!("alternate construction ended with lk {p} < {lambda}")));
    }
    Ok(Link {
        components: vec![l.renamed("L"), j.renamed("J")],
        claims: vec![Claim::new(0, 1, p, Predicate::AtLeast { bound: lambda as i64 })],
        transcript,
    })
}
