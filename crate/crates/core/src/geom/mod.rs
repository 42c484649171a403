//! Exact geometry in R^{2n+1}: rational embeddings, disjointness
//! certification and linking numbers.

mod linking;
mod projection;

use std::collections::BTreeMap;

use itertools::Itertools;
use num_integer::Integer;
use num_rational::Ratio;
use rand::Rng;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::chain::{SimplicialComplex, VertexId};
use crate::error::{Error, Result};
use crate::exact::det;
use crate::seed::{rng, tags};

pub use linking::{
    linking_number, linking_number_at, linking_number_seeded, LinkingValue, APEX_ATTEMPTS,
};
pub use projection::linking_mod2_projection;

pub type RationalPoint = Vec<Ratio<i64>>;

/// Full general position is certified up front only below this many subsets.
const FULL_CHECK_LIMIT: u128 = 200_000;
const RESAMPLE_BUDGET: usize = 10_000;

/// Exact rational positions of vertices in R^{2n+1}.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalEmbedding {
    n: usize,
    box_size: i64,
    seed: u64,
    points: BTreeMap<VertexId, RationalPoint>,
    homogeneous: BTreeMap<VertexId, (Vec<i64>, i64)>,
}

fn homogenise(p: &RationalPoint) -> Result<(Vec<i64>, i64)> {
    let w = p.iter().fold(1i64, |acc, c| acc.lcm(c.denom()));
    let xs = p
        .iter()
        .map(|c| {
            (*c.numer() as i128 * (w / c.denom()) as i128)
                .try_into()
                .map_err(|_| Error::Domain("homogeneous coordinate overflows i64".into()))
        })
        .collect::<Result<Vec<i64>>>()?;
    Ok((xs, w))
}

impl RationalEmbedding {
    pub fn new(n: usize, box_size: i64, seed: u64, points: BTreeMap<VertexId, RationalPoint>) -> Result<Self> {
        let dim = 2 * n + 1;
        let mut homogeneous = BTreeMap::new();
        for (v, p) in &points {
            if p.len() != dim {
                return Err(Error::Domain(format!(
                    "vertex {v} has {} coordinates, expected {dim}",
                    p.len()
                )));
            }
            homogeneous.insert(*v, homogenise(p)?);
        }
        Ok(RationalEmbedding {
            n,
            box_size,
            seed,
            points,
            homogeneous,
        })
    }

    /// Embedding with integer coordinates.
    pub fn from_integer_points(n: usize, box_size: i64, seed: u64, points: BTreeMap<VertexId, Vec<i64>>) -> Result<Self> {
        let points = points
            .into_iter()
            .map(|(v, p)| (v, p.into_iter().map(Ratio::from_integer).collect()))
            .collect();
        RationalEmbedding::new(n, box_size, seed, points)
    }

    /// Integer points sampled uniformly from `[-box, box]^{2n+1}`. Points are
    /// distinct; when the number of (2n+2)-subsets is small every subset is
    /// certified affinely independent, resampling offending points.
    pub fn random(n: usize, vertices: &[VertexId], seed: u64, box_size: i64) -> Result<Self> {
        let dim = 2 * n + 1;
        if box_size < 1 {
            return Err(Error::Domain("box must be at least 1".into()));
        }
        let capacity = (2 * box_size as u128 + 1).saturating_pow(dim as u32);
        if capacity < vertices.len() as u128 {
            return Err(Error::Domain(format!(
                "box {box_size} holds only {capacity} lattice points for {} vertices",
                vertices.len()
            )));
        }
        let mut r = rng(seed, &[tags::EMBEDDING]);
        let sample = |r: &mut rand_chacha::ChaCha8Rng| -> Vec<i64> {
            (0..dim).map(|_| r.gen_range(-box_size..=box_size)).collect()
        };
        let mut pts: Vec<Vec<i64>> = Vec::with_capacity(vertices.len());
        let mut budget = RESAMPLE_BUDGET;
        for _ in vertices {
            let mut p = sample(&mut r);
            while pts.contains(&p) {
                budget = budget
                    .checked_sub(1)
                    .ok_or_else(|| Error::Degenerate("could not sample distinct points".into()))?;
                p = sample(&mut r);
            }
            pts.push(p);
        }
        let k = dim + 1;
        if vertices.len() >= k && binomial_u128(vertices.len(), k) <= FULL_CHECK_LIMIT {
            'outer: loop {
                for subset in (0..pts.len()).combinations(k) {
                    let rows: Vec<Vec<i64>> = subset
                        .iter()
                        .map(|&i| pts[i].iter().copied().chain([1]).collect())
                        .collect();
                    if det(&rows) == 0.into() {
                        budget = budget.checked_sub(1).ok_or_else(|| {
                            Error::Degenerate(format!(
                                "resample budget exhausted; dependent point set {:?}",
                                subset.iter().map(|&i| vertices[i].0).collect::<Vec<_>>()
                            ))
                        })?;
                        let last = *subset.last().unwrap();
                        let mut p = sample(&mut r);
                        while pts.contains(&p) {
                            p = sample(&mut r);
                        }
                        pts[last] = p;
                        continue 'outer;
                    }
                }
                break;
            }
        }
        let points = vertices.iter().copied().zip(pts).collect();
        RationalEmbedding::from_integer_points(n, box_size, seed, points)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn ambient_dim(&self) -> usize {
        2 * self.n + 1
    }

    pub fn box_size(&self) -> i64 {
        self.box_size
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn points(&self) -> &BTreeMap<VertexId, RationalPoint> {
        &self.points
    }

    pub fn point(&self, v: VertexId) -> Result<&RationalPoint> {
        self.points
            .get(&v)
            .ok_or_else(|| Error::Domain(format!("vertex {v} is not embedded")))
    }

    /// Integer homogeneous coordinates `(X, W)` with `W > 0`.
    pub fn homogeneous(&self, v: VertexId) -> Result<&(Vec<i64>, i64)> {
        self.homogeneous
            .get(&v)
            .ok_or_else(|| Error::Domain(format!("vertex {v} is not embedded")))
    }

    /// Keeps only the given vertices.
    pub fn restricted(&self, keep: impl Fn(VertexId) -> bool) -> Self {
        let points: BTreeMap<_, _> = self.points.iter().filter(|(v, _)| keep(**v)).map(|(v, p)| (*v, p.clone())).collect();
        let homogeneous = self
            .homogeneous
            .iter()
            .filter(|(v, _)| points.contains_key(v))
            .map(|(v, h)| (*v, h.clone()))
            .collect();
        RationalEmbedding {
            n: self.n,
            box_size: self.box_size,
            seed: self.seed,
            points,
            homogeneous,
        }
    }

    /// Replaces one vertex position.
    pub fn with_point(&self, v: VertexId, p: RationalPoint) -> Result<Self> {
        let mut points = self.points.clone();
        points.insert(v, p);
        RationalEmbedding::new(self.n, self.box_size, self.seed, points)
    }
}

fn binomial_u128(n: usize, k: usize) -> u128 {
    num_integer::binomial(n as u128, k as u128)
}

/// Random integer embedding of the vertices of `c` in R^{2n+1}, n = dim(c).
pub fn random_embedding(c: &SimplicialComplex, seed: u64, box_size: i64) -> Result<RationalEmbedding> {
    let n = c
        .dim()
        .ok_or_else(|| Error::Domain("cannot embed an empty complex".into()))?;
    let vertices: Vec<VertexId> = c.vertices().into_iter().collect();
    RationalEmbedding::random(n, &vertices, seed, box_size)
}

/// Embedding of vertices `0..count` for n-dimensional complexes.
pub fn random_embedding_of(n: usize, count: usize, seed: u64, box_size: i64) -> Result<RationalEmbedding> {
    let vertices: Vec<VertexId> = (0..count as u32).map(VertexId).collect();
    RationalEmbedding::random(n, &vertices, seed, box_size)
}

#[derive(Serialize, Deserialize)]
struct EmbeddingJson {
    n: usize,
    #[serde(rename = "box")]
    box_size: i64,
    seed: u64,
    vertices: BTreeMap<u32, Vec<String>>,
}

pub fn format_ratio(r: &Ratio<i64>) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

pub fn parse_ratio(s: &str) -> Result<Ratio<i64>> {
    let bad = || Error::Schema(format!("{s:?} is not a rational of the form num/den"));
    let (num, den) = match s.split_once('/') {
        Some((a, b)) => (a.trim().parse::<i64>().map_err(|_| bad())?, b.trim().parse::<i64>().map_err(|_| bad())?),
        None => (s.trim().parse::<i64>().map_err(|_| bad())?, 1),
    };
    if den == 0 {
        return Err(bad());
    }
    Ok(Ratio::new(num, den))
}

impl Serialize for RationalEmbedding {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        EmbeddingJson {
            n: self.n,
            box_size: self.box_size,
            seed: self.seed,
            vertices: self
                .points
                .iter()
                .map(|(v, p)| (v.0, p.iter().map(format_ratio).collect()))
                .collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for RationalEmbedding {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw = EmbeddingJson::deserialize(deserializer)?;
        let points = raw
            .vertices
            .into_iter()
            .map(|(v, p)| {
                let coords = p.iter().map(|s| parse_ratio(s)).collect::<Result<Vec<_>>>()?;
                Ok((VertexId(v), coords))
            })
            .collect::<Result<BTreeMap<_, _>>>()
            .map_err(D::Error::custom)?;
        RationalEmbedding::new(raw.n, raw.box_size, raw.seed, points).map_err(D::Error::custom)
    }
}
