//! Mod-2 linking of two polygons in R^3 from a generic planar projection.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use rand::Rng;

use super::RationalEmbedding;
use crate::chain::IntegerChain;
use crate::error::{Error, Result};
use crate::exact::det;
use crate::seed::{rng, tags};

const DIRECTION_ATTEMPTS: usize = 64;
const DIRECTION_BOUND: i64 = 1000;

struct Segment {
    parity: bool,
    /// Projected endpoints (u, v) and heights h.
    a: [BigRational; 2],
    b: [BigRational; 2],
    ha: BigRational,
    hb: BigRational,
}

fn orient(p: &[BigRational; 2], q: &[BigRational; 2], r: &[BigRational; 2]) -> BigRational {
    (&q[0] - &p[0]) * (&r[1] - &p[1]) - (&q[1] - &p[1]) * (&r[0] - &p[0])
}

fn bbox_overlap(s: &Segment, t: &Segment) -> bool {
    (0..2).all(|k| {
        let (slo, shi) = if s.a[k] <= s.b[k] { (&s.a[k], &s.b[k]) } else { (&s.b[k], &s.a[k]) };
        let (tlo, thi) = if t.a[k] <= t.b[k] { (&t.a[k], &t.b[k]) } else { (&t.b[k], &t.a[k]) };
        slo <= thi && tlo <= shi
    })
}

fn project(e: &RationalEmbedding, c: &IntegerChain, m: &[Vec<i64>]) -> Result<Vec<Segment>> {
    let apply = |v| -> Result<([BigRational; 2], BigRational)> {
        let p = e.point(v)?;
        let row = |r: &[i64]| -> BigRational {
            r.iter()
                .zip(p)
                .map(|(&a, x)| {
                    BigRational::new(BigInt::from(*x.numer()), BigInt::from(*x.denom())) * BigInt::from(a)
                })
                .sum()
        };
        Ok(([row(&m[0]), row(&m[1])], row(&m[2])))
    };
    c.terms()
        .map(|(vs, coeff)| {
            let (a, ha) = apply(vs[0])?;
            let (b, hb) = apply(vs[1])?;
            Ok(Segment {
                parity: coeff % 2 != 0,
                a,
                b,
                ha,
                hb,
            })
        })
        .collect()
}

/// Number of crossings where `s` passes over `t`, or `None` when the
/// projection is not generic for this pair.
fn over(s: &Segment, t: &Segment) -> Option<bool> {
    if !bbox_overlap(s, t) {
        return Some(false);
    }
    let o1 = orient(&s.a, &s.b, &t.a);
    let o2 = orient(&s.a, &s.b, &t.b);
    let o3 = orient(&t.a, &t.b, &s.a);
    let o4 = orient(&t.a, &t.b, &s.b);
    if o1.is_zero() || o2.is_zero() || o3.is_zero() || o4.is_zero() {
        return None;
    }
    if o1.signum() == o2.signum() || o3.signum() == o4.signum() {
        return Some(false);
    }
    // crossing parameters: s.a + α (s.b - s.a) = t.a + β (t.b - t.a)
    let alpha = &o3 / (&o3 - &o4);
    let beta = &o1 / (&o1 - &o2);
    let hs = &s.ha + (&s.hb - &s.ha) * alpha;
    let ht = &t.ha + (&t.hb - &t.ha) * beta;
    if hs == ht {
        return None;
    }
    Some(hs > ht)
}

/// Parity of the crossings where `a` passes over `b` in a generic planar
/// projection. Only defined for n = 1.
pub fn linking_mod2_projection(e: &RationalEmbedding, a: &IntegerChain, b: &IntegerChain) -> Result<u8> {
    if e.n() != 1 || a.dim() != 1 || b.dim() != 1 {
        return Err(Error::Domain("projection parity is only defined for polygons in R^3".into()));
    }
    for (name, c) in [("first", a), ("second", b)] {
        if c.is_zero() || !c.boundary()?.is_zero() {
            return Err(Error::NotALink(format!("{name} chain is not a nonempty cycle")));
        }
    }
    let va = a.vertices();
    if let Some(v) = b.vertices().iter().find(|v| va.contains(v)) {
        return Err(Error::NotALink(format!("components share vertex {v}")));
    }
    let mut r = rng(e.seed(), &[tags::PROJECTION]);
    'direction: for _ in 0..DIRECTION_ATTEMPTS {
        let m: Vec<Vec<i64>> = (0..3)
            .map(|_| (0..3).map(|_| r.gen_range(-DIRECTION_BOUND..=DIRECTION_BOUND)).collect())
            .collect();
        if det(&m).is_zero() {
            continue;
        }
        let sa = project(e, a, &m)?;
        let sb = project(e, b, &m)?;
        let mut parity = false;
        for s in &sa {
            for t in &sb {
                match over(s, t) {
                    None => continue 'direction,
                    Some(true) if s.parity && t.parity => parity = !parity,
                    Some(_) => {}
                }
            }
        }
        return Ok(parity as u8);
    }
    Err(Error::Degenerate(format!(
        "no generic projection found in {DIRECTION_ATTEMPTS} attempts"
    )))
}
