//! Two-component links whose linking number is a nonzero multiple of an
//! arbitrary positive integer q, built from keys that are subdivided
//! simplex boundaries.

use rayon::prelude::*;

use super::keyring::keyring_from_links;
use super::{
    class, find_subdivided_base_link, modq_bound, require_size, reversing_patch_isos, universe, zero_sum_window,
    Component, Link,
};
use crate::builders::{linear_disc, stacked_sphere_on, TriangulatedCompleteComplex};
use crate::cert::{Claim, Predicate};
use crate::chain::{check_sphere, IntegerChain, SphereWitness};
use crate::error::{Error, Result};
use crate::geom::RationalEmbedding;
use crate::surgery::{connect_sum, DiscIso, PrismFamily};

fn finish(ring: Component, other: Component, value: i64, q: u64, transcript: Vec<String>) -> Link {
    Link {
        components: vec![ring, other],
        claims: vec![Claim::new(1, 0, value, Predicate::NonzeroMultipleOf { modulus: q as i64 })],
        transcript,
    }
}

/// Prism spheres over the disc cells in ray order.
fn ordered_prisms(a: &SphereWitness, b: &SphereWitness, iso: &DiscIso, disc: &[Vec<crate::chain::VertexId>]) -> Result<Vec<SphereWitness>> {
    let order: Vec<&[crate::chain::VertexId]> = iso.source.support().collect();
    let which = disc
        .iter()
        .map(|cell| {
            order
                .iter()
                .position(|c| *c == cell.as_slice())
                .map(|i| i + 1)
                .ok_or_else(|| Error::Falsification("disc cell missing from the source disc".into()))
        })
        .collect::<Result<Vec<_>>>()?;
    PrismFamily::partial(a, b, iso, &which)
}

/// A link `R ∪ S` with `lk(S, R)` a nonzero multiple of `q`.
pub fn build_modq_link(e: &RationalEmbedding, q: u64) -> Result<Link> {
    if q == 0 {
        return Err(Error::Domain("q must be at least 1".into()));
    }
    let n = e.n();
    let verts = universe(e)?;
    require_size("mod q vertices", modq_bound(n, q)?, verts.len())?;
    let side = u32::try_from(q).map_err(|_| Error::Domain("q is too large".into()))?;
    let m = 2 * q as usize;
    let count = m * m;
    let probe = TriangulatedCompleteComplex::new(2 * n + 4, n, side, 0)?;
    let v = probe.vertex_count();
    let blocks: Vec<TriangulatedCompleteComplex> = (0..count)
        .map(|i| TriangulatedCompleteComplex::new(2 * n + 4, n, side, (i * v) as u32))
        .collect::<Result<_>>()?;
    let links: Vec<(Component, Component)> = blocks
        .par_iter()
        .enumerate()
        .map(|(i, c)| {
            let b = find_subdivided_base_link(e, c)?;
            Ok((b.first.renamed(format!("J{i}")), b.second.renamed(format!("X{i}"))))
        })
        .collect::<Result<_>>()?;
    let mut transcript = vec![format!("{count} triangulated blocks of side {q} with {v} vertices each")];
    let ell = (count.saturating_sub(2)).div_ceil(n);
    let start = count * v;
    let aux = stacked_sphere_on(n, ell, &verts[start..start + n + ell + 1])?;
    transcript.push(format!("auxiliary stacked sphere with {ell} blocks on vertices {start}..{}", start + n + ell));
    let kr = keyring_from_links(e, Some(&aux), &links, m)?;
    transcript.extend(kr.transcript.iter().cloned());
    let keys = kr.oriented_keys(e, q as usize, &mut transcript)?;
    let ring = kr.ring.renamed("R");
    let vals: Vec<i64> = keys.iter().map(|(_, v)| *v).collect();
    let prefix: Vec<i64> = vals
        .iter()
        .scan(0i64, |acc, v| {
            *acc += v;
            Some(acc.rem_euclid(q as i64))
        })
        .collect();
    let (a, b) = zero_sum_window(&vals, q as i64)
        .ok_or_else(|| Error::Falsification("no key window sums to 0 mod q".into()))?;
    transcript.push(format!(
        "lk(L_i, R) = {vals:?}; prefix sums mod {q} = {prefix:?}; window a = {}, b = {}",
        a + 1,
        b
    ));
    if b - a == 1 {
        let (key, value) = keys[a].clone();
        transcript.push(format!("single key L{} suffices", a + 1));
        return Ok(finish(ring, key, value, q, transcript));
    }
    let template = keys[a].0.patches[0].template.clone();
    let disc = linear_disc(&template, q as usize)?;
    transcript.push(format!(
        "linear disc along direction {:?} with {} cells",
        disc.direction,
        disc.len()
    ));
    let mut s = keys[a].0.witness.clone();
    let mut used: Option<usize> = None;
    for i in a..b - 1 {
        let (li, lj) = (&keys[i].0, &keys[i + 1].0);
        let mut any_iso = false;
        let mut accepted = None;
        'search: for fi in (0..li.patches.len()).filter(|f| Some(*f) != used) {
            let pi = &li.patches[fi];
            let cells: Vec<Vec<crate::chain::VertexId>> = disc.cells.iter().map(|&c| pi.cell(c)).collect();
            for fj in 0..lj.patches.len() {
                for (iso, g) in reversing_patch_isos(li.chain(), pi, &disc.cells, lj.chain(), &lj.patches[fj])? {
                    any_iso = true;
                    let prisms = ordered_prisms(&li.witness, &lj.witness, &iso, &cells)?;
                    let pv: Vec<i64> = prisms
                        .par_iter()
                        .map(|p| class(e, p.chain(), ring.chain()))
                        .collect::<Result<_>>()?;
                    let (c, d) = zero_sum_window(&pv, q as i64)
                        .ok_or_else(|| Error::Falsification(format!("no prism window sums to 0 mod {q}")))?;
                    let mut chain = IntegerChain::zero(n);
                    for p in &prisms[c..d] {
                        chain += p.chain();
                    }
                    let qi = check_sphere(&chain)?.with_note(format!("Q{} from prisms {}..={}", i + 1, c + 1, d));
                    let vq = class(e, qi.chain(), ring.chain())?;
                    let step = format!(
                        "pair L{}-L{}: faces {fi} -> {fj}, relabelling {g:?}, prism classes {pv:?}, window c = {}, d = {d}, lk(Q, R) = {vq}",
                        i + 1,
                        i + 2,
                        c + 1
                    );
                    if vq.rem_euclid(q as i64) != 0 {
                        return Err(Error::Falsification(format!("{step}: not divisible by {q}")));
                    }
                    if vq != 0 {
                        transcript.push(step);
                        transcript.push(format!("early exit with Q{}", i + 1));
                        return Ok(finish(ring, Component::new(format!("Q{}", i + 1), qi), vq, q, transcript));
                    }
                    match connect_sum(&s, &qi).and_then(|t| connect_sum(&t, &lj.witness)) {
                        Ok(next) => {
                            transcript.push(step);
                            accepted = Some((next, fj));
                            break 'search;
                        }
                        Err(err) => transcript.push(format!("{step}: rejected ({err})")),
                    }
                }
            }
        }
        let (next, fj) = match accepted {
            Some(found) => found,
            None if !any_iso => {
                return Err(Error::Construction(format!(
                    "no orientation-reversing face pairing between L{} and L{}",
                    i + 1,
                    i + 2
                )))
            }
            None => {
                return Err(Error::Falsification(format!(
                    "no face pairing between L{} and L{} yields a connect sum",
                    i + 1,
                    i + 2
                )))
            }
        };
        s = next;
        used = Some(fj);
    }
    let value = class(e, s.chain(), ring.chain())?;
    let expected: i64 = vals[a..b].iter().sum();
    if value != expected || value <= 0 || value.rem_euclid(q as i64) != 0 {
        return Err(Error::Falsification(format!(
            "final sphere has lk {value}, expected {expected} divisible by {q}"
        )));
    }
    transcript.push(format!("S = L{}..L{} joined by the Q_i, lk(S, R) = {value}", a + 1, b));
    Ok(finish(ring, Component::new("S", s), value, q, transcript))
}
