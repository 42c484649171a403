//! Linking numbers as signed intersection counts of `A` with the cone over `B`.
//!
//! For an n-simplex σ of A with vertices P_0..P_n and an (n+1)-simplex
//! τ = [c, β] of the cone, the homogeneous matrix H has the 2n+3 columns
//! (X, W) of the P's and the Q's (Q_0 = c). Its kernel is spanned by the
//! signed maximal minors; σ meets τ in an interior point exactly when the
//! P-part and the negated Q-part of the kernel are strictly of one sign.

use num_bigint::BigInt;
use num_rational::Ratio;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::RationalEmbedding;
use crate::chain::{IntegerChain, VertexId};
use crate::error::{Error, Result};
use crate::exact::{det, sign_of};
use crate::seed::{rng, tags};

/// Apex candidates tried before giving up.
pub const APEX_ATTEMPTS: usize = 64;

/// Apexes are drawn from a box this many times larger than the embedding box.
const APEX_SCALE: i64 = 10;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinkingValue {
    pub value: i64,
    /// Integer apex of the cone over the second chain.
    pub apex: Vec<i64>,
    /// Number of apex candidates tried, including the successful one.
    pub attempts: usize,
}

#[derive(Clone, Debug)]
struct Cell {
    coeff: i64,
    ids: Vec<VertexId>,
    /// Homogeneous columns (X, W).
    cols: Vec<Vec<i64>>,
    lo: Vec<Ratio<i64>>,
    hi: Vec<Ratio<i64>>,
}

fn cells(e: &RationalEmbedding, c: &IntegerChain) -> Result<Vec<Cell>> {
    c.terms()
        .map(|(vs, coeff)| {
            let mut cols = Vec::with_capacity(vs.len());
            let mut lo: Vec<Ratio<i64>> = e.point(vs[0])?.clone();
            let mut hi = lo.clone();
            for &v in vs {
                let (x, w) = e.homogeneous(v)?;
                cols.push(x.iter().copied().chain([*w]).collect());
                for (k, coord) in e.point(v)?.iter().enumerate() {
                    if *coord < lo[k] {
                        lo[k] = *coord;
                    }
                    if *coord > hi[k] {
                        hi[k] = *coord;
                    }
                }
            }
            Ok(Cell {
                coeff,
                ids: vs.to_vec(),
                cols,
                lo,
                hi,
            })
        })
        .collect()
}

fn boxes_overlap(alo: &[Ratio<i64>], ahi: &[Ratio<i64>], blo: &[Ratio<i64>], bhi: &[Ratio<i64>]) -> bool {
    (0..alo.len()).all(|k| alo[k] <= bhi[k] && blo[k] <= ahi[k])
}

/// Determinant of the square matrix whose columns are given.
fn det_cols(cols: &[&[i64]]) -> BigInt {
    let rows: Vec<Vec<i64>> = (0..cols.len())
        .map(|r| cols.iter().map(|c| c[r]).collect())
        .collect();
    det(&rows)
}

fn validate(e: &RationalEmbedding, a: &IntegerChain, b: &IntegerChain) -> Result<()> {
    let n = e.n();
    for (name, c) in [("first", a), ("second", b)] {
        if c.is_zero() {
            return Err(Error::NotALink(format!("{name} chain is empty")));
        }
        if c.dim() != n {
            return Err(Error::Domain(format!(
                "{name} chain has dimension {}, embedding is for n={n}",
                c.dim()
            )));
        }
        if n > 0 && !c.boundary()?.is_zero() {
            return Err(Error::NotALink(format!("{name} chain is not a cycle")));
        }
    }
    let va = a.vertices();
    if let Some(v) = b.vertices().iter().find(|v| va.contains(v)) {
        return Err(Error::NotALink(format!("components share vertex {v}")));
    }
    Ok(())
}

/// Certifies that no simplex of A meets a simplex of B.
fn certify_disjoint(a: &[Cell], b: &[Cell]) -> Result<()> {
    // collected in order so the reported pair does not depend on scheduling
    let checks: Vec<Result<()>> = a.par_iter().map(|s| {
        for t in b {
            if !boxes_overlap(&s.lo, &s.hi, &t.lo, &t.hi) {
                continue;
            }
            let cols: Vec<&[i64]> = s.cols.iter().chain(&t.cols).map(|c| c.as_slice()).collect();
            if det_cols(&cols) == BigInt::from(0) {
                return Err(Error::Degenerate(format!(
                    "simplices {:?} and {:?} span a degenerate point set; disjointness cannot be certified",
                    s.ids.iter().map(|v| v.0).collect::<Vec<_>>(),
                    t.ids.iter().map(|v| v.0).collect::<Vec<_>>()
                )));
            }
        }
        Ok(())
    }).collect();
    checks.into_iter().collect()
}

enum Pair {
    Miss,
    Hit(i64),
    Degenerate,
}

fn strict_sign(xs: &[BigInt]) -> Option<i8> {
    let s = sign_of(&xs[0]);
    if s != 0 && xs.iter().all(|x| sign_of(x) == s) {
        Some(s)
    } else {
        None
    }
}

fn mixed(xs: &[BigInt]) -> bool {
    xs.iter().any(|x| sign_of(x) > 0) && xs.iter().any(|x| sign_of(x) < 0)
}

/// Signed intersection of σ with the cone [apex, β].
fn cone_pair(s: &Cell, t: &Cell, apex: &[i64]) -> Pair {
    let mut qcols: Vec<&[i64]> = Vec::with_capacity(t.cols.len() + 1);
    qcols.push(apex);
    qcols.extend(t.cols.iter().map(|c| c.as_slice()));
    let all: Vec<&[i64]> = s.cols.iter().map(|c| c.as_slice()).chain(qcols.iter().copied()).collect();
    let total = all.len();
    let kernel: Vec<BigInt> = (0..total)
        .map(|k| {
            let minor: Vec<&[i64]> = all
                .iter()
                .enumerate()
                .filter(|&(i, _)| i != k)
                .map(|(_, c)| *c)
                .collect();
            let d = det_cols(&minor);
            if k % 2 == 0 {
                d
            } else {
                -d
            }
        })
        .collect();
    let p = s.cols.len();
    let lambda = &kernel[..p];
    let mu: Vec<BigInt> = kernel[p..].iter().map(|x| -x).collect();
    let zero = |xs: &[BigInt]| xs.iter().all(|x| sign_of(x) == 0);
    if zero(&kernel) || zero(lambda) || zero(&mu) {
        return Pair::Degenerate;
    }
    if mixed(lambda) || mixed(&mu) {
        return Pair::Miss;
    }
    let sl = lambda.iter().map(sign_of).find(|&x| x != 0).unwrap();
    let sm = mu.iter().map(sign_of).find(|&x| x != 0).unwrap();
    if sl != sm {
        return Pair::Miss;
    }
    if strict_sign(lambda).is_none() || strict_sign(&mu).is_none() {
        return Pair::Degenerate;
    }
    // orientation of (σ, τ): columns (X, W, 0) for σ and (Y, 0, W) for τ
    let dim = apex.len() - 1;
    let lift = |c: &[i64], first: bool| -> Vec<i64> {
        let w = c[dim];
        let mut v = c[..dim].to_vec();
        if first {
            v.extend([w, 0]);
        } else {
            v.extend([0, w]);
        }
        v
    };
    let big: Vec<Vec<i64>> = s
        .cols
        .iter()
        .map(|c| lift(c, true))
        .chain(qcols.iter().map(|c| lift(c, false)))
        .collect();
    let refs: Vec<&[i64]> = big.iter().map(|c| c.as_slice()).collect();
    let sign = sign_of(&det_cols(&refs)) as i64;
    if sign == 0 {
        return Pair::Degenerate;
    }
    Pair::Hit(sign * s.coeff * t.coeff)
}

fn cone_count(a: &[Cell], b: &[Cell], apex: &[i64]) -> Option<i64> {
    let dim = apex.len() - 1;
    let apex_pt: Vec<Ratio<i64>> = apex[..dim].iter().map(|&x| Ratio::from_integer(x)).collect();
    let per_cell: Vec<Option<i64>> = a
        .par_iter()
        .map(|s| {
            let mut sum = 0i64;
            for t in b {
                let lo: Vec<Ratio<i64>> = (0..dim).map(|k| t.lo[k].min(apex_pt[k])).collect();
                let hi: Vec<Ratio<i64>> = (0..dim).map(|k| t.hi[k].max(apex_pt[k])).collect();
                if !boxes_overlap(&s.lo, &s.hi, &lo, &hi) {
                    continue;
                }
                match cone_pair(s, t, apex) {
                    Pair::Miss => {}
                    Pair::Hit(v) => sum += v,
                    Pair::Degenerate => return None,
                }
            }
            Some(sum)
        })
        .collect();
    per_cell.into_iter().sum()
}

fn prepare(e: &RationalEmbedding, a: &IntegerChain, b: &IntegerChain) -> Result<(Vec<Cell>, Vec<Cell>)> {
    validate(e, a, b)?;
    let ca = cells(e, a)?;
    let cb = cells(e, b)?;
    certify_disjoint(&ca, &cb)?;
    Ok((ca, cb))
}

fn with_apex_stream(e: &RationalEmbedding, a: &IntegerChain, b: &IntegerChain, seed: u64, tag: u64) -> Result<LinkingValue> {
    let (ca, cb) = prepare(e, a, b)?;
    let bound = e.box_size().saturating_mul(APEX_SCALE);
    let mut r = rng(seed, &[tag]);
    for attempt in 1..=APEX_ATTEMPTS {
        let mut apex: Vec<i64> = (0..e.ambient_dim()).map(|_| r.gen_range(-bound..=bound)).collect();
        apex.push(1);
        if let Some(value) = cone_count(&ca, &cb, &apex) {
            apex.pop();
            return Ok(LinkingValue {
                value,
                apex,
                attempts: attempt,
            });
        }
    }
    Err(Error::Degenerate(format!(
        "no generic cone apex found in {APEX_ATTEMPTS} attempts"
    )))
}

/// Linking number of two disjoint n-cycles in R^{2n+1}: the signed count of
/// intersections of `a` with the cone over `b`. The apex stream is derived
/// from the embedding seed.
pub fn linking_number(e: &RationalEmbedding, a: &IntegerChain, b: &IntegerChain) -> Result<LinkingValue> {
    with_apex_stream(e, a, b, e.seed(), tags::APEX)
}

/// As [`linking_number`] with apexes drawn from an independent stream.
pub fn linking_number_seeded(e: &RationalEmbedding, a: &IntegerChain, b: &IntegerChain, apex_seed: u64) -> Result<LinkingValue> {
    with_apex_stream(e, a, b, apex_seed, tags::FRESH_APEX)
}

/// Linking number computed with a fixed integer apex. A degenerate apex is an error.
pub fn linking_number_at(e: &RationalEmbedding, a: &IntegerChain, b: &IntegerChain, apex: &[i64]) -> Result<i64> {
    if apex.len() != e.ambient_dim() {
        return Err(Error::Domain(format!(
            "apex has {} coordinates, expected {}",
            apex.len(),
            e.ambient_dim()
        )));
    }
    let (ca, cb) = prepare(e, a, b)?;
    let mut h = apex.to_vec();
    h.push(1);
    cone_count(&ca, &cb, &h).ok_or_else(|| Error::Degenerate(format!("apex {apex:?} is not generic")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chain::{ids, IntegerChain};
    use std::collections::BTreeMap;

    fn triangle(a: u32, b: u32, c: u32) -> IntegerChain {
        IntegerChain::simplex(&ids(&[a, b, c])).unwrap().boundary().unwrap()
    }

    fn hopf() -> RationalEmbedding {
        let pts: BTreeMap<VertexId, Vec<i64>> = [
            (0, vec![1, 0, 0]),
            (1, vec![-1, 1, 0]),
            (2, vec![-1, -1, 0]),
            (3, vec![0, 0, 1]),
            (4, vec![0, 0, -1]),
            (5, vec![5, 0, 3]),
        ]
        .into_iter()
        .map(|(v, p)| (VertexId(v), p))
        .collect();
        RationalEmbedding::from_integer_points(1, 10, 0, pts).unwrap()
    }

    /// Exhaustive segment-triangle piercing count, independent of the cone code.
    fn piercings(e: &RationalEmbedding, tri: [u32; 3], edges: &[[u32; 2]]) -> usize {
        let p = |v: u32| -> Vec<Ratio<i64>> { e.point(VertexId(v)).unwrap().clone() };
        let sub = |a: &[Ratio<i64>], b: &[Ratio<i64>]| -> Vec<Ratio<i64>> {
            a.iter().zip(b).map(|(x, y)| x - y).collect()
        };
        let det3 = |a: &[Ratio<i64>], b: &[Ratio<i64>], c: &[Ratio<i64>]| {
            a[0] * (b[1] * c[2] - b[2] * c[1]) - a[1] * (b[0] * c[2] - b[2] * c[0])
                + a[2] * (b[0] * c[1] - b[1] * c[0])
        };
        let (t0, t1, t2) = (p(tri[0]), p(tri[1]), p(tri[2]));
        let mut count = 0;
        for &[u, v] in edges {
            let (a, b) = (p(u), p(v));
            let side = |x: &[Ratio<i64>]| det3(&sub(&t1, &t0), &sub(&t2, &t0), &sub(x, &t0));
            let (da, db) = (side(&a), side(&b));
            if da * db >= Ratio::from_integer(0) {
                continue;
            }
            let s0 = det3(&sub(&t0, &a), &sub(&t1, &a), &sub(&b, &a));
            let s1 = det3(&sub(&t1, &a), &sub(&t2, &a), &sub(&b, &a));
            let s2 = det3(&sub(&t2, &a), &sub(&t0, &a), &sub(&b, &a));
            let zero = Ratio::from_integer(0);
            if (s0 > zero && s1 > zero && s2 > zero) || (s0 < zero && s1 < zero && s2 < zero) {
                count += 1;
            }
        }
        count
    }

    #[test]
    fn hopf_triangles_link_once() {
        let e = hopf();
        let a = triangle(0, 1, 2);
        let b = triangle(3, 4, 5);
        assert_eq!(piercings(&e, [0, 1, 2], &[[3, 4], [4, 5], [5, 3]]), 1);
        let lk = linking_number(&e, &a, &b).unwrap();
        assert_eq!(lk.value.abs(), 1);
        // recorded sign under the crate's orientation convention
        assert_eq!(lk.value, 1);
        assert_eq!(linking_number(&e, &(-&a), &b).unwrap().value, -lk.value);
        // symmetric for n = 1
        assert_eq!(linking_number(&e, &b, &a).unwrap().value, lk.value);
        for s in 0..5 {
            assert_eq!(linking_number_seeded(&e, &a, &b, s).unwrap().value, lk.value);
        }
    }

    #[test]
    fn separated_triangles_do_not_link() {
        let pts: BTreeMap<VertexId, Vec<i64>> = [
            (0, vec![0, 0, 0]),
            (1, vec![1, 0, 0]),
            (2, vec![0, 1, 1]),
            (3, vec![50, 50, 50]),
            (4, vec![52, 51, 50]),
            (5, vec![50, 53, 51]),
        ]
        .into_iter()
        .map(|(v, p)| (VertexId(v), p))
        .collect();
        let e = RationalEmbedding::from_integer_points(1, 60, 3, pts).unwrap();
        assert_eq!(linking_number(&e, &triangle(0, 1, 2), &triangle(3, 4, 5)).unwrap().value, 0);
    }

    #[test]
    fn shared_vertices_and_non_cycles_are_rejected() {
        let e = hopf();
        assert!(matches!(
            linking_number(&e, &triangle(0, 1, 2), &triangle(2, 3, 4)),
            Err(Error::NotALink(_))
        ));
        let path = IntegerChain::simplex(&ids(&[3, 4])).unwrap();
        assert!(matches!(linking_number(&e, &triangle(0, 1, 2), &path), Err(Error::NotALink(_))));
    }

    #[test]
    fn degenerate_apex_is_reported() {
        let e = hopf();
        // the apex on the line through vertices 3 and 4 puts the cone edge on a cell face
        assert!(matches!(
            linking_number_at(&e, &triangle(0, 1, 2), &triangle(3, 4, 5), &[0, 0, 7]),
            Err(Error::Degenerate(_))
        ));
        assert_eq!(
            linking_number_at(&e, &triangle(0, 1, 2), &triangle(3, 4, 5), &[3, -7, 11]).unwrap(),
            linking_number(&e, &triangle(0, 1, 2), &triangle(3, 4, 5)).unwrap().value
        );
    }

    #[test]
    fn intersecting_images_cannot_be_certified() {
        // edge [3,4] passes through the edge [0,1]
        let pts: BTreeMap<VertexId, Vec<i64>> = [
            (0, vec![0, 0, 0]),
            (1, vec![4, 0, 0]),
            (2, vec![0, 4, 0]),
            (3, vec![1, 0, -1]),
            (4, vec![1, 0, 1]),
            (5, vec![2, 3, 5]),
        ]
        .into_iter()
        .map(|(v, p)| (VertexId(v), p))
        .collect();
        let e = RationalEmbedding::from_integer_points(1, 10, 0, pts).unwrap();
        assert!(matches!(
            linking_number(&e, &triangle(0, 1, 2), &triangle(3, 4, 5)),
            Err(Error::Degenerate(_))
        ));
    }
}
