//! Two-component links from partial connect sums of keyring keys: large
//! linking number, and linking number a nonzero multiple of a prime.

use std::collections::{BTreeMap, BTreeSet};

use num_integer::Integer;

use super::keyring::keyring_on;
use super::{amplify_bound, class, key, modp_bound, require_size, universe, Component, Link};
use crate::builders::stacked_sphere_on;
use crate::cert::{Claim, Predicate};
use crate::chain::{SphereWitness, VertexId};
use crate::error::{Error, Result};
use crate::geom::RationalEmbedding;
use crate::surgery::{connect_sum, connecting_sphere};

fn is_prime(p: u64) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d))
}

fn residue(x: i64, p: u64) -> u64 {
    x.mod_floor(&(p as i64)) as u64
}

/// Indices (0-based) of a subsequence of `seq` summing to `s` mod `p`.
///
/// Grows the set of realised residues one term at a time: for the next
/// term `t`, the least `k >= 1` with `k t` not yet realised is reached by
/// extending the witness for `(k-1) t`.
pub fn subsequence_sum_mod_p(seq: &[i64], p: u64, s: i64) -> Result<Vec<usize>> {
    if !is_prime(p) {
        return Err(Error::Domain(format!("{p} is not prime")));
    }
    if (seq.len() as u64) < p - 1 {
        return Err(Error::Domain(format!(
            "need at least {} terms, got {}",
            p - 1,
            seq.len()
        )));
    }
    if let Some(i) = seq.iter().position(|&x| residue(x, p) == 0) {
        return Err(Error::Domain(format!("term {i} is divisible by {p}")));
    }
    let target = residue(s, p);
    let mut witness: BTreeMap<u64, Vec<usize>> = BTreeMap::from([(0, Vec::new())]);
    for (j, &x) in seq.iter().enumerate() {
        if witness.contains_key(&target) {
            break;
        }
        let t = residue(x, p);
        let k = (1..p)
            .find(|k| !witness.contains_key(&(k * t % p)))
            .expect("realised residues are a proper subset");
        let mut w = witness[&((k - 1) * t % p)].clone();
        w.push(j);
        witness.insert(k * t % p, w);
    }
    witness
        .remove(&target)
        .ok_or_else(|| Error::Falsification(format!("residue {target} mod {p} was not realised")))
}

/// Residues mod `p` realised by subsequence sums of `seq`.
pub fn realizable_residues(seq: &[i64], p: u64) -> BTreeSet<u64> {
    let mut seen = BTreeSet::from([0u64]);
    for &x in seq {
        let t = residue(x, p);
        let next: Vec<u64> = seen.iter().map(|&r| (r + t) % p).collect();
        seen.extend(next);
    }
    seen
}

/// Keyring with `keys` keys on the first `key(keys)` vertices, keys
/// oriented positively, and an auxiliary sphere on the next vertices.
struct Setup {
    ring: Component,
    keys: Vec<(Component, i64)>,
    transcript: Vec<String>,
    aux: SphereWitness,
}

fn setup(e: &RationalEmbedding, verts: &[VertexId], keys: u64, aux_blocks: usize) -> Result<Setup> {
    let n = e.n();
    let split = key(n, keys) as usize;
    let kr = keyring_on(e, &verts[..split], keys)?;
    let mut transcript = kr.transcript.clone();
    let oriented = kr.oriented_keys(e, keys as usize, &mut transcript)?;
    let aux = stacked_sphere_on(n, aux_blocks, &verts[split..split + n + aux_blocks + 1])?;
    transcript.push(format!(
        "sphere S with {aux_blocks} blocks on vertices {split}..{}",
        split + n + aux_blocks
    ));
    Ok(Setup {
        ring: kr.ring.renamed("R"),
        keys: oriented,
        transcript,
        aux,
    })
}

fn two_component(ring: Component, other: Component, value: i64, predicate: Predicate, transcript: Vec<String>) -> Link {
    Link {
        components: vec![ring, other],
        claims: vec![Claim::new(1, 0, value, predicate)],
        transcript,
    }
}

/// A sphere `S` with `lk(S, R) >= λ`.
pub fn amplify_linking(e: &RationalEmbedding, lambda: u64) -> Result<Link> {
    if lambda == 0 {
        return Err(Error::Domain("λ must be at least 1".into()));
    }
    let verts = universe(e)?;
    let n = e.n();
    require_size("amplify vertices", amplify_bound(n, lambda), verts.len())?;
    let count = 2 * lambda - 1;
    let blocks = count.div_ceil(n as u64) as usize;
    let mut s = setup(e, &verts, count, blocks)?;
    let bound = Predicate::AtLeast { bound: lambda as i64 };
    if lambda == 1 {
        let (key, v) = s.keys.remove(0);
        s.transcript.push(format!("λ = 1: key L1 links R with lk = {v}"));
        return Ok(two_component(s.ring, key, v, bound, s.transcript));
    }
    let witnesses: Vec<SphereWitness> = s.keys.iter().map(|(c, _)| c.witness.clone()).collect();
    let cs = connecting_sphere(&s.aux, &witnesses)?;
    s.transcript.extend(cs.transcript);
    let mut current = cs.sphere;
    let mut values = vec![class(e, current.chain(), s.ring.chain())?];
    let mut partials = vec![current.clone()];
    for (key, _) in &s.keys {
        current = connect_sum(&current, &key.witness)?;
        values.push(class(e, current.chain(), s.ring.chain())?);
        partials.push(current.clone());
    }
    s.transcript.push(format!("lk(S_i, R) = {values:?}"));
    if values.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Falsification(format!("partial sums {values:?} are not strictly increasing")));
    }
    let i = values
        .iter()
        .position(|v| v.abs() >= lambda as i64)
        .ok_or_else(|| Error::Falsification(format!("no partial sum reaches |lk| >= {lambda}")))?;
    let (sphere, v) = if values[i] < 0 {
        s.transcript.push(format!("flipped S_{i} so that lk > 0"));
        (partials[i].flipped(), -values[i])
    } else {
        (partials[i].clone(), values[i])
    };
    s.transcript.push(format!("chose S_{i} with lk = {v}"));
    Ok(two_component(s.ring, Component::new(format!("S{i}"), sphere), v, bound, s.transcript))
}

/// A sphere `S` with `lk(S, R)` a nonzero multiple of the prime `p`.
pub fn build_modp_link(e: &RationalEmbedding, p: u64) -> Result<Link> {
    if !is_prime(p) {
        return Err(Error::Domain(format!("{p} is not prime")));
    }
    let verts = universe(e)?;
    let n = e.n();
    require_size("mod p vertices", modp_bound(n, p), verts.len())?;
    let count = 2 * p - 1;
    let blocks = (2 * p - 3).div_ceil(n as u64) as usize;
    modp_from_setup(e, setup(e, &verts, count, blocks)?, p)
}

fn modp_from_setup(e: &RationalEmbedding, mut s: Setup, p: u64) -> Result<Link> {
    let pred = Predicate::NonzeroMultipleOf { modulus: p as i64 };
    let vals: Vec<i64> = s.keys.iter().map(|(_, v)| *v).collect();
    s.transcript.push(format!("lk(L_i, R) = {vals:?}"));
    if let Some(i) = vals.iter().position(|&v| residue(v, p) == 0) {
        s.transcript.push(format!("early exit: lk(L{}, R) = {} is divisible by {p}", i + 1, vals[i]));
        let (key, v) = s.keys.swap_remove(i);
        return Ok(two_component(s.ring, key, v, pred, s.transcript));
    }
    if (s.keys.len() as u64) < 2 * p - 1 {
        return Err(Error::size("keys", 2 * p - 1, s.keys.len() as u64));
    }
    let witnesses: Vec<SphereWitness> = s.keys.iter().map(|(c, _)| c.witness.clone()).collect();
    let cs = connecting_sphere(&s.aux, &witnesses)?;
    s.transcript.extend(cs.transcript);
    let base = class(e, cs.sphere.chain(), s.ring.chain())?;
    let pu = p as usize;
    let a = subsequence_sum_mod_p(&vals[..pu - 1], p, -base)?;
    let b: Vec<usize> = subsequence_sum_mod_p(&vals[pu..], p, -vals[pu - 1])?
        .into_iter()
        .map(|i| i + pu)
        .collect();
    let mut c = vec![pu - 1];
    c.extend(&b);
    let human = |set: &[usize]| set.iter().map(|i| i + 1).collect::<Vec<_>>();
    s.transcript.push(format!("lk(S, R) = {base}; A = {:?}, C = {:?}", human(&a), human(&c)));
    let mut s1 = cs.sphere;
    for &i in &a {
        s1 = connect_sum(&s1, &s.keys[i].0.witness)?;
    }
    let mut s2 = s1.clone();
    for &i in &c {
        s2 = connect_sum(&s2, &s.keys[i].0.witness)?;
    }
    let v1 = class(e, s1.chain(), s.ring.chain())?;
    let v2 = class(e, s2.chain(), s.ring.chain())?;
    s.transcript.push(format!("lk(S1, R) = {v1}, lk(S2, R) = {v2}"));
    if residue(v1, p) != 0 || residue(v2, p) != 0 || v1 == v2 {
        return Err(Error::Falsification(format!(
            "partial sums {v1}, {v2} violate the mod {p} bookkeeping"
        )));
    }
    let (name, sphere, v) = if v1 != 0 { ("S1", s1, v1) } else { ("S2", s2, v2) };
    s.transcript.push(format!("chose {name}"));
    Ok(two_component(s.ring, Component::new(name, sphere), v, pred, s.transcript))
}
