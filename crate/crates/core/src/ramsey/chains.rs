//! Chains and necklaces of spheres with consecutive odd linking numbers.

use super::keyring::base_links_on;
use super::{chain_bound, class, necklace_bound, parity, require_size, universe, Component, Link};
use crate::cert::{Claim, Predicate};
use crate::chain::SphereWitness;
use crate::error::{Error, Result};
use crate::geom::RationalEmbedding;
use crate::surgery::{connect_sum, prism_spheres, reversing_cell_map};

/// The sphere produced by the mod 2 four-to-three lemma and the branch taken.
#[derive(Clone, Debug)]
pub struct FourToThreeMod2 {
    pub x: SphereWitness,
    pub case: String,
    pub transcript: Vec<String>,
}

fn lk2(e: &RationalEmbedding, a: &SphereWitness, b: &SphereWitness) -> Result<u8> {
    Ok(parity(class(e, a.chain(), b.chain())?))
}

/// Given `lk2(X_1, Y_1) = lk2(X_2, Y_2) = 1`, a sphere on the vertices of
/// `X_1 ∪ X_2` linking both `Y_1` and `Y_2` oddly.
pub fn four_to_three_mod2(
    e: &RationalEmbedding,
    y1: &SphereWitness,
    x1: &SphereWitness,
    x2: &SphereWitness,
    y2: &SphereWitness,
) -> Result<FourToThreeMod2> {
    if lk2(e, x1, y1)? != 1 || lk2(e, x2, y2)? != 1 {
        return Err(Error::Input("lk2(X1, Y1) and lk2(X2, Y2) must both be 1".into()));
    }
    let done = |x: SphereWitness, case: &str, transcript: Vec<String>| -> Result<FourToThreeMod2> {
        if lk2(e, y1, &x)? != 1 || lk2(e, &x, y2)? != 1 {
            return Err(Error::Falsification(format!("four-to-three case '{case}' produced an unlinked sphere")));
        }
        Ok(FourToThreeMod2 {
            x,
            case: case.to_string(),
            transcript,
        })
    };
    if lk2(e, x1, y2)? == 1 {
        return done(x1.clone(), "X = X1", vec!["lk2(X1, Y2) = 1".into()]);
    }
    if lk2(e, x2, y1)? == 1 {
        return done(x2.clone(), "X = X2", vec!["lk2(X2, Y1) = 1".into()]);
    }
    let d1 = x1.chain().support().next().expect("sphere is nonempty").to_vec();
    let d2 = x2.chain().support().next().expect("sphere is nonempty").to_vec();
    let iso = reversing_cell_map(x1.chain(), &d1, x2.chain(), &d2)?;
    let family = prism_spheres(x1, x2, &iso)?;
    let (p0, p1) = (&family.spheres[0], &family.spheres[1]);
    let (b1, b2) = (lk2(e, p1, y1)?, lk2(e, p1, y2)?);
    let mut transcript = vec![format!(
        "prism over cells {d1:?} -> {d2:?}: [P1] = {b1} around Y1, {b2} around Y2"
    )];
    match (b1, b2) {
        (0, 0) => done(p0.clone(), "X = P0", transcript),
        (1, 1) => done(p1.clone(), "X = P1", transcript),
        (0, _) => {
            transcript.push("X = X1 # P1".into());
            done(connect_sum(x1, p1)?, "X = X1 + P1", transcript)
        }
        _ => {
            transcript.push("X = X2 # P1".into());
            done(connect_sum(x2, p1)?, "X = X2 + P1", transcript)
        }
    }
}

fn chain_components(e: &RationalEmbedding, r: usize, transcript: &mut Vec<String>) -> Result<Vec<Component>> {
    let n = e.n();
    let block = 2 * n + 4;
    let verts = universe(e)?;
    let links = base_links_on(e, &verts, r - 1, block)?;
    transcript.push(format!("{} base links on blocks of {block} vertices", r - 1));
    let mut iter = links.into_iter();
    let (j, k) = iter.next().expect("r >= 2");
    let mut comps = vec![j.witness, k.witness];
    for (step, (j, k)) in iter.enumerate() {
        let len = comps.len();
        let out = four_to_three_mod2(e, &comps[len - 2], &comps[len - 1], &j.witness, &k.witness)?;
        transcript.push(format!("step {}: {}", step + 1, out.case));
        transcript.extend(out.transcript);
        comps[len - 1] = out.x;
        comps.push(k.witness);
    }
    Ok(comps
        .into_iter()
        .enumerate()
        .map(|(i, w)| Component::new(format!("L{}", i + 1), w))
        .collect())
}

fn odd_claims(e: &RationalEmbedding, comps: &[Component], pairs: &[(usize, usize)]) -> Result<Vec<Claim>> {
    pairs
        .iter()
        .map(|&(a, b)| {
            let value = class(e, comps[a].chain(), comps[b].chain())?;
            if parity(value) != 1 {
                return Err(Error::Falsification(format!(
                    "lk({}, {}) = {value} is even",
                    comps[a].name, comps[b].name
                )));
            }
            Ok(Claim::new(a, b, value, Predicate::Odd))
        })
        .collect()
}

/// Components `L_1..L_r` with `lk2(L_i, L_{i+1}) = 1`.
pub fn build_chain_link(e: &RationalEmbedding, r: usize) -> Result<Link> {
    if r < 2 {
        return Err(Error::Domain("a chain needs r >= 2".into()));
    }
    require_size("chain vertices", chain_bound(e.n(), r as u64), e.points().len())?;
    let mut transcript = Vec::new();
    let components = chain_components(e, r, &mut transcript)?;
    let pairs: Vec<(usize, usize)> = (0..r - 1).map(|i| (i, i + 1)).collect();
    let claims = odd_claims(e, &components, &pairs)?;
    Ok(Link {
        components,
        claims,
        transcript,
    })
}

/// Components `L_1..L_r` with `lk2(L_i, L_{i+1}) = 1`, indices mod r.
pub fn build_necklace(e: &RationalEmbedding, r: usize) -> Result<Link> {
    if r < 3 {
        return Err(Error::Domain("a necklace needs r >= 3".into()));
    }
    require_size("necklace vertices", necklace_bound(e.n(), r as u64), e.points().len())?;
    let mut transcript = Vec::new();
    let comps = chain_components(e, r + 1, &mut transcript)?;
    let out = four_to_three_mod2(
        e,
        &comps[r - 1].witness,
        &comps[r].witness,
        &comps[0].witness,
        &comps[1].witness,
    )?;
    transcript.push(format!("closing the necklace: {}", out.case));
    transcript.extend(out.transcript);
    let mut ring: Vec<SphereWitness> = comps[1..r].iter().map(|c| c.witness.clone()).collect();
    ring.push(out.x);
    let components: Vec<Component> = ring
        .into_iter()
        .enumerate()
        .map(|(i, w)| Component::new(format!("L{}", i + 1), w))
        .collect();
    let pairs: Vec<(usize, usize)> = (0..r).map(|i| (i, (i + 1) % r)).collect();
    let claims = odd_claims(e, &components, &pairs)?;
    Ok(Link {
        components,
        claims,
        transcript,
    })
}
