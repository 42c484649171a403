//! Generalised keyrings: one ring component linked mod 2 with every key.

use itertools::Itertools;
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::{class, find_base_link, key, key_circles, keyring_bound, parity, require_size, universe, Component, Link};
use crate::builders::stacked_sphere_on;
use crate::cert::{Claim, Predicate};
use crate::chain::{SphereWitness, VertexId};
use crate::error::{Error, Result};
use crate::geom::RationalEmbedding;
use crate::seed::{rng, tags};
use crate::surgery::{connect_sum, connecting_cycle, connecting_sphere};

const RANDOM_RESTARTS: usize = 4096;
const FULL_EXHAUSTIVE_ROWS: usize = 24;
const MAX_SUBSET_SIZE: usize = 6;

/// Square matrix over GF(2) whose ij-entry is the mod 2 linking number of
/// the i-th J with the j-th X. Its diagonal is all ones.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Gf2Matrix {
    rows: Vec<Vec<u8>>,
}

impl Gf2Matrix {
    pub fn new(rows: Vec<Vec<u8>>) -> Result<Self> {
        let k = rows.len();
        if rows.iter().any(|r| r.len() != k || r.iter().any(|&b| b > 1)) {
            return Err(Error::Domain("GF(2) matrix must be square with 0/1 entries".into()));
        }
        if let Some(i) = (0..k).find(|&i| rows[i][i] != 1) {
            return Err(Error::Falsification(format!("diagonal entry {i} of the linking matrix is zero")));
        }
        Ok(Gf2Matrix { rows })
    }

    pub fn size(&self) -> usize {
        self.rows.len()
    }

    pub fn entry(&self, i: usize, j: usize) -> u8 {
        self.rows[i][j]
    }

    pub fn row(&self, i: usize) -> &[u8] {
        &self.rows[i]
    }

    pub fn row_sum(&self, rows: &[usize]) -> Vec<u8> {
        let mut sum = vec![0u8; self.size()];
        for &i in rows {
            for (s, b) in sum.iter_mut().zip(&self.rows[i]) {
                *s ^= b;
            }
        }
        sum
    }
}

fn ones(v: &[u8]) -> usize {
    v.iter().filter(|&&b| b == 1).count()
}

/// A set of rows whose sum has at least the requested number of ones.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RowSubset {
    pub rows: Vec<usize>,
    pub sum: Vec<u8>,
    pub ones: usize,
    /// Search layer that produced the subset.
    pub layer: String,
}

fn accept(m: &Gf2Matrix, rows: Vec<usize>, target: usize, layer: &str) -> Option<RowSubset> {
    let sum = m.row_sum(&rows);
    let k = ones(&sum);
    (k >= target && !rows.is_empty()).then(|| RowSubset {
        rows,
        sum,
        ones: k,
        layer: layer.to_string(),
    })
}

fn greedy(m: &Gf2Matrix, target: usize) -> Option<RowSubset> {
    let mut chosen = Vec::new();
    let mut sum = vec![0u8; m.size()];
    loop {
        let best = (0..m.size())
            .filter(|i| !chosen.contains(i))
            .map(|i| {
                let s: Vec<u8> = sum.iter().zip(m.row(i)).map(|(a, b)| a ^ b).collect();
                (ones(&s), i, s)
            })
            .max_by_key(|(k, i, _)| (*k, std::cmp::Reverse(*i)))?;
        if best.0 <= ones(&sum) {
            return None;
        }
        chosen.push(best.1);
        sum = best.2;
        if ones(&sum) >= target {
            chosen.sort();
            return accept(m, chosen, target, "greedy");
        }
    }
}

/// Rows with no off-diagonal ones between them: their sum has a one in
/// every chosen column.
fn independent(m: &Gf2Matrix, target: usize) -> Option<RowSubset> {
    let k = m.size();
    let adjacent = |i: usize, j: usize| i != j && (m.entry(i, j) == 1 || m.entry(j, i) == 1);
    let order: Vec<usize> = (0..k).sorted_by_key(|&i| ((0..k).filter(|&j| adjacent(i, j)).count(), i)).collect();
    let mut chosen: Vec<usize> = Vec::new();
    for i in order {
        if chosen.iter().all(|&j| !adjacent(i, j)) {
            chosen.push(i);
        }
    }
    chosen.sort();
    accept(m, chosen, target, "independent rows")
}

fn random(m: &Gf2Matrix, target: usize, seed: u64) -> Option<RowSubset> {
    let mut r = rng(seed, &[tags::GF2_SEARCH]);
    for _ in 0..RANDOM_RESTARTS {
        let rows: Vec<usize> = (0..m.size()).filter(|_| r.gen_bool(0.5)).collect();
        if let Some(found) = accept(m, rows, target, "random restart") {
            return Some(found);
        }
    }
    None
}

fn exhaustive(m: &Gf2Matrix, target: usize) -> Option<RowSubset> {
    let k = m.size();
    let max = if k <= FULL_EXHAUSTIVE_ROWS { k } else { MAX_SUBSET_SIZE };
    (1..=max).find_map(|size| (0..k).combinations(size).find_map(|rows| accept(m, rows, target, "exhaustive")))
}

/// Layered search for rows whose sum has at least `target` ones: single
/// rows, greedy accumulation, pairwise independent rows, seeded random
/// restarts, then exhaustive enumeration.
pub fn row_subset_search(m: &Gf2Matrix, target: usize, seed: u64) -> Result<RowSubset> {
    (0..m.size())
        .find_map(|i| accept(m, vec![i], target, "single row"))
        .or_else(|| greedy(m, target))
        .or_else(|| independent(m, target))
        .or_else(|| random(m, target, seed))
        .or_else(|| exhaustive(m, target))
        .ok_or_else(|| {
            Error::SearchFailure(format!(
                "no subset of the {} rows sums to at least {target} ones",
                m.size()
            ))
        })
}

/// A ring `R` and keys `X_j` (j in `index_set`) with odd linking number.
#[derive(Clone, Debug)]
pub struct Keyring {
    pub ring: Component,
    pub keys: Vec<Component>,
    pub index_set: Vec<usize>,
    pub matrix: Option<Gf2Matrix>,
    pub subset: Option<RowSubset>,
    pub transcript: Vec<String>,
}

impl Keyring {
    /// The link `R ∪ L_1 ∪ ... ∪ L_r` using the first `r` keys.
    pub fn link(&self, e: &RationalEmbedding, r: usize) -> Result<Link> {
        if self.keys.len() < r {
            return Err(Error::Falsification(format!(
                "keyring has {} keys, {r} requested",
                self.keys.len()
            )));
        }
        let mut components = vec![self.ring.clone().renamed("R")];
        let mut claims = Vec::new();
        for (k, x) in self.keys[..r].iter().enumerate() {
            let value = class(e, x.chain(), self.ring.chain())?;
            claims.push(Claim::new(k + 1, 0, value, Predicate::Odd));
            components.push(x.clone().renamed(format!("L{}", k + 1)));
        }
        Ok(Link {
            components,
            claims,
            transcript: self.transcript.clone(),
        })
    }

    /// Keys reoriented so each links the ring positively; returns the keys
    /// and their linking numbers.
    pub(crate) fn oriented_keys(&self, e: &RationalEmbedding, r: usize, transcript: &mut Vec<String>) -> Result<Vec<(Component, i64)>> {
        self.keys
            .iter()
            .take(r)
            .enumerate()
            .map(|(k, x)| {
                let v = class(e, x.chain(), self.ring.chain())?;
                if v == 0 {
                    return Err(Error::Falsification(format!("key {} does not link the ring", k + 1)));
                }
                let name = format!("L{}", k + 1);
                if v < 0 {
                    transcript.push(format!("flipped {name} so that lk({name}, R) = {} > 0", -v));
                    Ok((x.flipped().renamed(name), -v))
                } else {
                    Ok((x.clone().renamed(name), v))
                }
            })
            .collect()
    }
}

/// Runs the keyring construction on given base links `J_i ∪ X_i`
/// (`m^2` of them) joined through `aux`, or through a cycle of edges when
/// `aux` is `None` (circles only).
pub fn keyring_from_links(
    e: &RationalEmbedding,
    aux: Option<&SphereWitness>,
    links: &[(Component, Component)],
    m: usize,
) -> Result<Keyring> {
    if m == 0 || links.len() != m * m {
        return Err(Error::Domain(format!("need m^2 = {} base links, got {}", m * m, links.len())));
    }
    let mut transcript = Vec::new();
    let diag: Vec<i64> = links
        .par_iter()
        .map(|(j, x)| class(e, j.chain(), x.chain()))
        .collect::<Result<_>>()?;
    if let Some(i) = diag.iter().position(|&v| parity(v) != 1) {
        return Err(Error::Input(format!("base link {i} has even linking number")));
    }
    let js: Vec<SphereWitness> = links.iter().map(|(j, _)| j.witness.clone()).collect();
    let connecting = match aux {
        Some(s) => connecting_sphere(s, &js)?,
        None => connecting_cycle(&js)?,
    };
    transcript.push(format!(
        "connecting sphere through {} J components via {}",
        js.len(),
        if aux.is_some() { "an auxiliary sphere" } else { "a cycle of edges" }
    ));
    let big_s = connecting.sphere;
    let s_vals: Vec<u8> = links
        .par_iter()
        .map(|(_, x)| Ok(parity(class(e, big_s.chain(), x.chain())?)))
        .collect::<Result<_>>()?;
    transcript.push(format!("lk2(S, X_j) = {s_vals:?}"));
    let linked = s_vals.iter().filter(|&&b| b == 1).count();
    let (ring, index_set, matrix, subset) = if 2 * linked >= m {
        transcript.push(format!("{linked} X_j link S already; Z = S"));
        let set: Vec<usize> = (0..s_vals.len()).filter(|&j| s_vals[j] == 1).collect();
        (big_s, set, None, None)
    } else {
        let size = links.len();
        let entries: Vec<u8> = (0..size * size)
            .into_par_iter()
            .map(|k| {
                let (i, j) = (k / size, k % size);
                Ok(parity(class(e, links[i].0.chain(), links[j].1.chain())?))
            })
            .collect::<Result<_>>()?;
        let matrix = Gf2Matrix::new(entries.chunks(size).map(|c| c.to_vec()).collect())?;
        let subset = row_subset_search(&matrix, m, e.seed())?;
        transcript.push(format!(
            "row subset {:?} found by {} search has {} ones (the selection procedure is a layered search)",
            subset.rows, subset.layer, subset.ones
        ));
        let mut z = big_s;
        for &i in &subset.rows {
            z = connect_sum(&z, &links[i].0.witness)?;
        }
        let set: Vec<usize> = (0..size).filter(|&j| s_vals[j] != subset.sum[j]).collect();
        (z, set, Some(matrix), Some(subset))
    };
    if 2 * index_set.len() < m {
        return Err(Error::Falsification(format!(
            "index set {index_set:?} has fewer than m/2 = {m}/2 elements"
        )));
    }
    let keys: Vec<Component> = index_set.iter().map(|&j| links[j].1.clone()).collect();
    let parities: Vec<u8> = keys
        .par_iter()
        .map(|x| Ok(parity(class(e, x.chain(), ring.chain())?)))
        .collect::<Result<_>>()?;
    if let Some(k) = parities.iter().position(|&b| b != 1) {
        return Err(Error::Falsification(format!(
            "key X_{} does not link Z mod 2",
            index_set[k]
        )));
    }
    transcript.push(format!("index set I = {index_set:?}, |I| = {}", index_set.len()));
    Ok(Keyring {
        ring: Component::new("R", ring),
        keys,
        index_set,
        matrix,
        subset,
        transcript,
    })
}

/// Base links on consecutive blocks of `block` vertices.
pub(crate) fn base_links_on(e: &RationalEmbedding, verts: &[VertexId], count: usize, block: usize) -> Result<Vec<(Component, Component)>> {
    (0..count)
        .into_par_iter()
        .map(|i| {
            let b = find_base_link(e, &verts[i * block..(i + 1) * block])?;
            Ok((b.first.renamed(format!("J{i}")), b.second.renamed(format!("X{i}"))))
        })
        .collect()
}

/// Keyring with at least `r` keys on the given vertices. Uses an auxiliary
/// stacked sphere when there are `key(r)` vertices, otherwise (circles
/// only) a connecting cycle on `24 r^2` vertices.
pub(crate) fn keyring_on(e: &RationalEmbedding, verts: &[VertexId], r: u64) -> Result<Keyring> {
    let n = e.n();
    let m = 2 * r as usize;
    let block = 2 * n + 4;
    let full = key(n, r);
    let use_aux = verts.len() as u64 >= full;
    if !use_aux {
        if n != 1 {
            return Err(Error::size("keyring vertices", full, verts.len() as u64));
        }
        require_size("keyring vertices", key_circles(r), verts.len())?;
    }
    let links = base_links_on(e, verts, m * m, block)?;
    let mut transcript = vec![format!("{} base links on blocks of {block} vertices", m * m)];
    let aux = if use_aux {
        let ell = ((m * m).saturating_sub(2)).div_ceil(n);
        let start = m * m * block;
        let s = stacked_sphere_on(n, ell, &verts[start..start + n + ell + 1])?;
        transcript.push(format!(
            "auxiliary stacked sphere with {ell} blocks on vertices {}..{}",
            start,
            start + n + ell
        ));
        Some(s)
    } else {
        None
    };
    let mut kr = keyring_from_links(e, aux.as_ref(), &links, m)?;
    transcript.append(&mut kr.transcript);
    kr.transcript = transcript;
    Ok(kr)
}

/// Keyring with `r` keys in the embedding, which must have at least
/// `key(r)` vertices (`24 r^2` for circles).
pub fn build_keyring(e: &RationalEmbedding, r: u64) -> Result<Keyring> {
    if r == 0 {
        return Err(Error::Domain("a keyring needs r >= 1".into()));
    }
    let verts = universe(e)?;
    require_size("keyring vertices", keyring_bound(e.n(), r), verts.len())?;
    keyring_on(e, &verts, r)
}
