//! Self-check suites: count formulas by enumeration, the prism chain
//! identity on random configurations, and cross-validation of the linking
//! number oracles.

use std::collections::BTreeMap;

use ilink_core::builders::{stacked_sphere_on, subdivide_simplex, vertex_count_formula, TriangulatedCompleteComplex};
use ilink_core::geom::{linking_mod2_projection, linking_number, linking_number_seeded, random_embedding_of};
use ilink_core::seed::rng;
use ilink_core::surgery::{prism_spheres, DiscIso};
use ilink_core::{IntegerChain, SphereWitness, VertexId};
use rand::seq::SliceRandom;
use rand::Rng;

pub struct Suite {
    pub name: &'static str,
    pub cases: usize,
    pub failures: Vec<String>,
}

impl Suite {
    fn new(name: &'static str) -> Self {
        Suite {
            name,
            cases: 0,
            failures: Vec::new(),
        }
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.failures.push(what());
        }
    }
}

const CHAIN_IDENTITY: u64 = 11;
const CYCLE_PAIRS: u64 = 12;
const APEX_PAIRS: u64 = 13;

pub fn run_all(seed: u64, configs: usize, pairs: usize, apex_pairs: usize) -> Vec<Suite> {
    vec![
        count_formulas(),
        chain_identity(seed, configs),
        lk_oracle(seed, pairs, apex_pairs),
    ]
}

fn binomial(n: u64, k: u64) -> u64 {
    (1..=k).fold(1, |acc, i| acc * (n - k + i) / i)
}

fn count_formulas() -> Suite {
    let mut s = Suite::new("count-formula");
    for m in 1..=4usize {
        for side in 1..=4u32 {
            match subdivide_simplex(m, side) {
                Ok(t) => {
                    let cells = (side as u64).pow(m as u32);
                    s.check(t.cells().len() as u64 == cells, || {
                        format!("M={m}, side={side}: {} cells, expected {cells}", t.cells().len())
                    });
                    let verts = binomial(side as u64 + m as u64, m as u64);
                    s.check(t.vertices().len() as u64 == verts, || {
                        format!("M={m}, side={side}: {} vertices, expected {verts}", t.vertices().len())
                    });
                }
                Err(err) => s.check(false, || format!("M={m}, side={side}: {err}")),
            }
        }
    }
    for q in 1..=5u64 {
        let expected = 6 + 15 * (q - 1);
        let formula = u64::try_from(&vertex_count_formula(1, q)).ok();
        s.check(formula == Some(expected), || format!("V(1,{q}) = {formula:?}, expected {expected}"));
        let built = TriangulatedCompleteComplex::new(6, 1, q as u32, 0).map(|c| c.vertex_count() as u64);
        s.check(matches!(built, Ok(v) if v == expected), || {
            format!("triangulated K_6 of side {q} has {built:?} vertices, expected {expected}")
        });
    }
    for n in 1..=3usize {
        for blocks in 1..=5usize {
            let verts: Vec<VertexId> = (0..(n + blocks + 1) as u32).map(VertexId).collect();
            match stacked_sphere_on(n, blocks, &verts) {
                Ok(w) => {
                    let (v, c) = (w.vertices().len(), w.chain().len());
                    s.check(v == n + blocks + 1 && c == blocks * n + 2, || {
                        format!("stacked sphere n={n}, blocks={blocks}: {v} vertices, {c} cells")
                    });
                }
                Err(err) => s.check(false, || format!("stacked sphere n={n}, blocks={blocks}: {err}")),
            }
        }
    }
    s
}

/// A random prism configuration: a stacked sphere, a flipped copy on fresh
/// vertices, and a disc (a vertex star or a single cell) mapped across.
pub fn prism_config(seed: u64, index: u64) -> ilink_core::Result<(SphereWitness, SphereWitness, DiscIso)> {
    let mut r = rng(seed, &[CHAIN_IDENTITY, index]);
    let n = r.gen_range(1..=3usize);
    let blocks = r.gen_range(1..=5usize);
    let count = n + blocks + 1;
    let mut first: Vec<VertexId> = (0..count as u32).map(VertexId).collect();
    first.shuffle(&mut r);
    let s1 = stacked_sphere_on(n, blocks, &first)?;
    let mut fresh: Vec<u32> = (100..100 + count as u32).collect();
    fresh.shuffle(&mut r);
    let map: BTreeMap<VertexId, VertexId> = (0..count as u32).map(|v| (VertexId(v), VertexId(fresh[v as usize]))).collect();
    let s2 = s1.relabel(|v| map[&v])?.flipped();
    let cells: Vec<Vec<VertexId>> = if r.gen_bool(0.5) {
        let centre = VertexId(r.gen_range(0..count as u32));
        s1.chain().support().filter(|c| c.contains(&centre)).map(|c| c.to_vec()).collect()
    } else {
        let all: Vec<&[VertexId]> = s1.chain().support().collect();
        vec![all[r.gen_range(0..all.len())].to_vec()]
    };
    let iso = DiscIso::new(s1.chain(), &cells, s2.chain(), map)?;
    Ok((s1, s2, iso))
}

fn chain_identity(seed: u64, configs: usize) -> Suite {
    let mut s = Suite::new("chain-identity");
    for i in 0..configs as u64 {
        let family = prism_config(seed, i).and_then(|(s1, s2, iso)| Ok((prism_spheres(&s1, &s2, &iso)?, s1, s2)));
        let (family, s1, s2) = match family {
            Ok(f) => f,
            Err(err) => {
                s.check(false, || format!("config {i}: {err}"));
                continue;
            }
        };
        let mut total = s1.chain() + s2.chain();
        for (k, p) in family.spheres.iter().enumerate() {
            let closed = p.chain().boundary().is_ok_and(|b| b.is_zero());
            s.check(closed, || format!("config {i}: boundary of P_{k} is nonzero"));
            total += p.chain();
        }
        s.check(total.is_zero(), || format!("config {i}: S1 + S2 + sum P_i has {} terms", total.len()));
    }
    s
}

/// Two disjoint stacked spheres on random vertices of a random embedding.
fn random_pair(seed: u64, tag: u64, index: u64, n: usize) -> ilink_core::Result<(ilink_core::geom::RationalEmbedding, IntegerChain, IntegerChain)> {
    let mut r = rng(seed, &[tag, index]);
    let blocks = [r.gen_range(1..=3usize), r.gen_range(1..=3usize)];
    let count = 2 * n + blocks[0] + blocks[1] + 2 + r.gen_range(0..3usize);
    let mut verts: Vec<VertexId> = (0..count as u32).map(VertexId).collect();
    verts.shuffle(&mut r);
    let k = n + blocks[0] + 1;
    let a = stacked_sphere_on(n, blocks[0], &verts[..k])?;
    let b = stacked_sphere_on(n, blocks[1], &verts[k..])?;
    let e = random_embedding_of(n, count, r.gen(), 1000)?;
    Ok((e, a.into_chain(), b.into_chain()))
}

fn lk_oracle(seed: u64, pairs: usize, apex_pairs: usize) -> Suite {
    let mut s = Suite::new("lk-oracle");
    for i in 0..pairs as u64 {
        let out = random_pair(seed, CYCLE_PAIRS, i, 1).and_then(|(e, a, b)| {
            let cone = linking_number(&e, &a, &b)?.value;
            Ok((cone, linking_mod2_projection(&e, &a, &b)?))
        });
        match out {
            Ok((cone, proj)) => s.check(cone.rem_euclid(2) as u8 == proj, || {
                format!("cycle pair {i}: cone gives {cone}, projection parity {proj}")
            }),
            Err(err) => s.check(false, || format!("cycle pair {i}: {err}")),
        }
    }
    for i in 0..apex_pairs as u64 {
        let n = 1 + (i % 2) as usize;
        let out = random_pair(seed, APEX_PAIRS, i, n).and_then(|(e, a, b)| {
            (0..3u64)
                .map(|k| Ok(linking_number_seeded(&e, &a, &b, seed ^ (i << 8) ^ k)?.value))
                .collect::<ilink_core::Result<Vec<i64>>>()
        });
        match out {
            Ok(vals) => s.check(vals.windows(2).all(|w| w[0] == w[1]), || {
                format!("sphere pair {i} (n={n}): apexes disagree {vals:?}")
            }),
            Err(err) => s.check(false, || format!("sphere pair {i} (n={n}): {err}")),
        }
    }
    s
}
