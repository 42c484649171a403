//! Link certificates: serialized components, claimed linking numbers and the
//! embedding they were computed in.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::chain::IntegerChain;
use crate::error::{Error, Result};
use crate::geom::{linking_number, RationalEmbedding};

pub const SCHEMA: &str = "linkcert/1";

/// Property a claimed linking number must have beyond matching exactly.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Predicate {
    Exact,
    Odd,
    Nonzero,
    AtLeast { bound: i64 },
    NonzeroMultipleOf { modulus: i64 },
}

impl Predicate {
    pub fn holds(&self, value: i64) -> bool {
        match self {
            Predicate::Exact => true,
            Predicate::Odd => value.rem_euclid(2) == 1,
            Predicate::Nonzero => value != 0,
            Predicate::AtLeast { bound } => value >= *bound,
            Predicate::NonzeroMultipleOf { modulus } => value != 0 && value.rem_euclid(*modulus) == 0,
        }
    }
}

/// `value` is the linking number of components `a` and `b`: the signed
/// intersection count of `a` with the cone over `b`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Claim {
    pub a: usize,
    pub b: usize,
    pub value: i64,
    pub predicate: Predicate,
    /// Cone apex used when the claim was recorded.
    #[serde(default)]
    pub apex: Vec<i64>,
}

impl Claim {
    pub fn new(a: usize, b: usize, value: i64, predicate: Predicate) -> Self {
        Claim {
            a,
            b,
            value,
            predicate,
            apex: Vec::new(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComponentRecord {
    pub name: String,
    pub chain: IntegerChain,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinkCertificate {
    pub schema: String,
    pub theorem: String,
    pub n: usize,
    pub params: BTreeMap<String, i64>,
    pub embedding: RationalEmbedding,
    pub components: Vec<ComponentRecord>,
    pub claims: Vec<Claim>,
    pub transcript: Vec<String>,
}

impl LinkCertificate {
    /// Assembles a certificate, recomputing every claim with the embedding's
    /// apex stream and recording the apex used. A claim that does not match
    /// its recomputation is a falsification alert.
    pub fn assemble(
        theorem: &str,
        params: BTreeMap<String, i64>,
        embedding: &RationalEmbedding,
        components: Vec<ComponentRecord>,
        claims: Vec<Claim>,
        transcript: Vec<String>,
    ) -> Result<Self> {
        let mut recorded = Vec::with_capacity(claims.len());
        for mut claim in claims {
            let (a, b) = match (components.get(claim.a), components.get(claim.b)) {
                (Some(a), Some(b)) => (a, b),
                _ => return Err(Error::Domain(format!("claim refers to a missing component: {claim:?}"))),
            };
            let lk = linking_number(embedding, &a.chain, &b.chain)?;
            if lk.value != claim.value || !claim.predicate.holds(lk.value) {
                return Err(Error::Falsification(format!(
                    "claim lk({}, {}) = {} recomputes to {}",
                    a.name, b.name, claim.value, lk.value
                )));
            }
            claim.apex = lk.apex;
            recorded.push(claim);
        }
        Ok(LinkCertificate {
            schema: SCHEMA.to_string(),
            theorem: theorem.to_string(),
            n: embedding.n(),
            params,
            embedding: embedding.clone(),
            components,
            claims: recorded,
            transcript,
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificates always serialize")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let cert: LinkCertificate =
            serde_json::from_str(text).map_err(|e| Error::Schema(e.to_string()))?;
        if cert.schema != SCHEMA {
            return Err(Error::Schema(format!(
                "unsupported schema {:?}, expected {SCHEMA:?}",
                cert.schema
            )));
        }
        if cert.embedding.n() != cert.n {
            return Err(Error::Schema(format!(
                "certificate is for n={} but its embedding is for n={}",
                cert.n,
                cert.embedding.n()
            )));
        }
        Ok(cert)
    }
}
