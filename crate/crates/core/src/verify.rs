//! Independent replay of a link certificate.
//!
//! Only the chain algebra and the geometric layer are used: every component
//! is re-checked as a sphere and every claim is recomputed with the recorded
//! apex and with fresh apexes.

use serde::Serialize;

use crate::cert::LinkCertificate;
use crate::chain::check_sphere;
use crate::geom::{linking_number_at, linking_number_seeded};

/// Fresh apex streams used by the verifier.
pub const FRESH_APEXES: u64 = 2;
const FRESH_SEED: u64 = 0x7e51_f1ed;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ComponentCheck {
    pub name: String,
    pub ok: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClaimCheck {
    pub index: usize,
    pub pair: (String, String),
    pub claimed: i64,
    /// Values obtained with the recorded apex, then each fresh apex.
    pub recomputed: Vec<Option<i64>>,
    pub predicate_holds: bool,
    pub ok: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerifyReport {
    pub components: Vec<ComponentCheck>,
    pub claims: Vec<ClaimCheck>,
}

impl VerifyReport {
    pub fn ok(&self) -> bool {
        self.components.iter().all(|c| c.ok) && self.claims.iter().all(|c| c.ok)
    }

    /// First failing item, for error messages.
    pub fn first_failure(&self) -> Option<String> {
        if let Some(c) = self.components.iter().find(|c| !c.ok) {
            return Some(format!("component {}: {}", c.name, c.detail));
        }
        self.claims
            .iter()
            .find(|c| !c.ok)
            .map(|c| format!("claim {} lk({}, {}): {}", c.index, c.pair.0, c.pair.1, c.detail))
    }
}

pub fn verify(cert: &LinkCertificate) -> VerifyReport {
    let e = &cert.embedding;
    let components = cert
        .components
        .iter()
        .map(|c| {
            let mut detail = String::from("sphere");
            let mut ok = true;
            if c.chain.dim() != cert.n {
                ok = false;
                detail = format!("dimension {} differs from n={}", c.chain.dim(), cert.n);
            } else if let Err(failure) = check_sphere(&c.chain) {
                ok = false;
                detail = failure.to_string();
            } else if let Some(v) = c.chain.vertices().iter().find(|v| e.point(**v).is_err()) {
                ok = false;
                detail = format!("vertex {v} is not embedded");
            }
            ComponentCheck {
                name: c.name.clone(),
                ok,
                detail,
            }
        })
        .collect();
    let claims = cert
        .claims
        .iter()
        .enumerate()
        .map(|(index, claim)| {
            let names = |i: usize| cert.components.get(i).map(|c| c.name.clone()).unwrap_or_else(|| format!("#{i}"));
            let pair = (names(claim.a), names(claim.b));
            let (Some(a), Some(b)) = (cert.components.get(claim.a), cert.components.get(claim.b)) else {
                return ClaimCheck {
                    index,
                    pair,
                    claimed: claim.value,
                    recomputed: Vec::new(),
                    predicate_holds: false,
                    ok: false,
                    detail: "claim refers to a missing component".into(),
                };
            };
            let mut recomputed = Vec::new();
            let mut errors = Vec::new();
            match linking_number_at(e, &a.chain, &b.chain, &claim.apex) {
                Ok(v) => recomputed.push(Some(v)),
                Err(err) => {
                    recomputed.push(None);
                    errors.push(format!("recorded apex: {err}"));
                }
            }
            for k in 0..FRESH_APEXES {
                match linking_number_seeded(e, &a.chain, &b.chain, FRESH_SEED.wrapping_add(k)) {
                    Ok(v) => recomputed.push(Some(v.value)),
                    Err(err) => {
                        recomputed.push(None);
                        errors.push(format!("fresh apex {k}: {err}"));
                    }
                }
            }
            let matches = recomputed.iter().all(|v| *v == Some(claim.value));
            let predicate_holds = claim.predicate.holds(claim.value);
            let detail = if !errors.is_empty() {
                errors.join("; ")
            } else if !matches {
                format!("claimed {} but recomputed {:?}", claim.value, recomputed)
            } else if !predicate_holds {
                format!("value {} violates {:?}", claim.value, claim.predicate)
            } else {
                "match".into()
            };
            ClaimCheck {
                index,
                pair,
                claimed: claim.value,
                recomputed,
                predicate_holds,
                ok: matches && predicate_holds,
                detail,
            }
        })
        .collect();
    VerifyReport { components, claims }
}
