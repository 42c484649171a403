//! Simplicial complexes and exact integer chain algebra.
//!
//! Chains are stored sparsely, keyed by the strictly increasing vertex tuple
//! of each simplex, with the orientation folded into the integer coefficient.
//! A simplex written in some other vertex order contributes the parity of the
//! sorting permutation. Cancellation of shared discs in connect sums is then
//! plain integer addition.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::ops::{Add, AddAssign, Neg, Sub};

use itertools::Itertools;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::error::{Error, Result};

/// Index into the global vertex universe of a complete complex.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VertexId(pub u32);

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl From<u32> for VertexId {
    fn from(v: u32) -> Self {
        VertexId(v)
    }
}

/// Convenience for tests and builders: `ids(&[0, 1, 2])`.
pub fn ids(raw: &[u32]) -> Vec<VertexId> {
    raw.iter().copied().map(VertexId).collect()
}

/// Sorts `vertices` in place and returns the sign of the sorting permutation,
/// or `None` if a vertex repeats.
pub(crate) fn sort_with_parity(vertices: &mut [VertexId]) -> Option<i64> {
    let mut sign = 1i64;
    // insertion sort: tuples are short and the swap count gives the parity
    for i in 1..vertices.len() {
        let mut j = i;
        while j > 0 && vertices[j - 1] > vertices[j] {
            vertices.swap(j - 1, j);
            sign = -sign;
            j -= 1;
        }
    }
    if vertices.windows(2).any(|w| w[0] == w[1]) {
        None
    } else {
        Some(sign)
    }
}

/// A simplex with strictly increasing vertices and an orientation sign.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct OrientedSimplex {
    vertices: Vec<VertexId>,
    sign: i8,
}

impl OrientedSimplex {
    /// Builds the oriented simplex `[v_0, ..., v_k]` from an arbitrary vertex order.
    pub fn new(ordered: &[VertexId]) -> Result<Self> {
        if ordered.is_empty() {
            return Err(Error::Domain("simplex needs at least one vertex".into()));
        }
        let mut vertices = ordered.to_vec();
        let sign = sort_with_parity(&mut vertices)
            .ok_or_else(|| Error::Domain(format!("repeated vertex in simplex {ordered:?}")))?;
        Ok(OrientedSimplex {
            vertices,
            sign: sign as i8,
        })
    }

    pub fn vertices(&self) -> &[VertexId] {
        &self.vertices
    }

    pub fn sign(&self) -> i8 {
        self.sign
    }

    pub fn dim(&self) -> usize {
        self.vertices.len() - 1
    }

    pub fn negated(&self) -> Self {
        OrientedSimplex {
            vertices: self.vertices.clone(),
            sign: -self.sign,
        }
    }
}

/// Finite formal sum of oriented simplices of one dimension.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntegerChain {
    dim: usize,
    terms: BTreeMap<Vec<VertexId>, i64>,
}

impl IntegerChain {
    pub fn zero(dim: usize) -> Self {
        IntegerChain {
            dim,
            terms: BTreeMap::new(),
        }
    }

    /// The chain `1 * [v_0, ..., v_k]` for an arbitrarily ordered simplex.
    pub fn simplex(ordered: &[VertexId]) -> Result<Self> {
        let mut c = IntegerChain::zero(ordered.len().saturating_sub(1));
        c.add_ordered(ordered, 1)?;
        Ok(c)
    }

    pub fn from_oriented(s: &OrientedSimplex) -> Self {
        let mut c = IntegerChain::zero(s.dim());
        c.add_sorted(s.vertices.clone(), s.sign as i64);
        c
    }

    /// Builds a chain from `(sorted vertices, coefficient)` pairs.
    pub fn from_terms<I>(dim: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<VertexId>, i64)>,
    {
        let mut c = IntegerChain::zero(dim);
        for (verts, coeff) in terms {
            c.add_ordered(&verts, coeff)?;
        }
        Ok(c)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Adds `coeff * [ordered]`, folding the permutation parity into the coefficient.
    pub fn add_ordered(&mut self, ordered: &[VertexId], coeff: i64) -> Result<()> {
        if ordered.len() != self.dim + 1 {
            return Err(Error::Domain(format!(
                "simplex {ordered:?} does not have dimension {}",
                self.dim
            )));
        }
        let mut key = ordered.to_vec();
        let sign = sort_with_parity(&mut key)
            .ok_or_else(|| Error::Domain(format!("repeated vertex in simplex {ordered:?}")))?;
        self.add_sorted(key, sign * coeff);
        Ok(())
    }

    /// Adds `coeff` to an already sorted key. Callers guarantee the key is valid.
    pub(crate) fn add_sorted(&mut self, key: Vec<VertexId>, coeff: i64) {
        if coeff == 0 {
            return;
        }
        debug_assert_eq!(key.len(), self.dim + 1);
        match self.terms.entry(key) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = *o.get() + coeff;
                if sum == 0 {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    /// Coefficient of the simplex with the given (sorted) vertices.
    pub fn coefficient(&self, sorted: &[VertexId]) -> i64 {
        self.terms.get(sorted).copied().unwrap_or(0)
    }

    /// Coefficient of `[ordered]` taking the vertex order into account.
    pub fn oriented_coefficient(&self, ordered: &[VertexId]) -> i64 {
        let mut key = ordered.to_vec();
        match sort_with_parity(&mut key) {
            Some(sign) => sign * self.coefficient(&key),
            None => 0,
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[VertexId], i64)> + '_ {
        self.terms.iter().map(|(k, &c)| (k.as_slice(), c))
    }

    pub fn support(&self) -> impl Iterator<Item = &[VertexId]> + '_ {
        self.terms.keys().map(|k| k.as_slice())
    }

    pub fn vertices(&self) -> BTreeSet<VertexId> {
        self.terms.keys().flatten().copied().collect()
    }

    pub fn scaled(&self, k: i64) -> Self {
        if k == 0 {
            return IntegerChain::zero(self.dim);
        }
        IntegerChain {
            dim: self.dim,
            terms: self.terms.iter().map(|(s, &c)| (s.clone(), c * k)).collect(),
        }
    }

    /// Alternating-sign face sum.
    pub fn boundary(&self) -> Result<IntegerChain> {
        if self.dim == 0 {
            return Err(Error::Domain("boundary of a 0-chain is undefined here".into()));
        }
        let mut out = IntegerChain::zero(self.dim - 1);
        for (simplex, &coeff) in &self.terms {
            for i in 0..simplex.len() {
                let mut face = simplex.clone();
                face.remove(i);
                let sign = if i % 2 == 0 { 1 } else { -1 };
                out.add_sorted(face, sign * coeff);
            }
        }
        Ok(out)
    }

    /// Pushes the chain forward along a vertex map that is injective on every simplex.
    pub fn relabel<F>(&self, mut f: F) -> Result<IntegerChain>
    where
        F: FnMut(VertexId) -> VertexId,
    {
        let mut out = IntegerChain::zero(self.dim);
        for (simplex, &coeff) in &self.terms {
            let image: Vec<VertexId> = simplex.iter().map(|&v| f(v)).collect();
            out.add_ordered(&image, coeff)?;
        }
        Ok(out)
    }

    /// Keeps only the terms whose simplex satisfies `keep`.
    pub fn restrict<F>(&self, mut keep: F) -> IntegerChain
    where
        F: FnMut(&[VertexId]) -> bool,
    {
        IntegerChain {
            dim: self.dim,
            terms: self
                .terms
                .iter()
                .filter(|(s, _)| keep(s))
                .map(|(s, &c)| (s.clone(), c))
                .collect(),
        }
    }

    /// The face closure of the support.
    pub fn closure(&self) -> SimplicialComplex {
        SimplicialComplex::from_simplices(self.terms.keys().cloned())
    }

    fn merge_dim(&self, other: &IntegerChain) -> usize {
        if self.is_zero() {
            other.dim
        } else {
            assert!(
                other.is_zero() || other.dim == self.dim,
                "adding chains of dimensions {} and {}",
                self.dim,
                other.dim
            );
            self.dim
        }
    }
}

impl AddAssign<&IntegerChain> for IntegerChain {
    fn add_assign(&mut self, rhs: &IntegerChain) {
        self.dim = self.merge_dim(rhs);
        for (s, &c) in &rhs.terms {
            self.add_sorted(s.clone(), c);
        }
    }
}

impl Add<&IntegerChain> for &IntegerChain {
    type Output = IntegerChain;
    fn add(self, rhs: &IntegerChain) -> IntegerChain {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Add for IntegerChain {
    type Output = IntegerChain;
    fn add(mut self, rhs: IntegerChain) -> IntegerChain {
        self += &rhs;
        self
    }
}

impl Neg for &IntegerChain {
    type Output = IntegerChain;
    fn neg(self) -> IntegerChain {
        self.scaled(-1)
    }
}

impl Neg for IntegerChain {
    type Output = IntegerChain;
    fn neg(self) -> IntegerChain {
        self.scaled(-1)
    }
}

impl Sub<&IntegerChain> for &IntegerChain {
    type Output = IntegerChain;
    fn sub(self, rhs: &IntegerChain) -> IntegerChain {
        self + &(-rhs)
    }
}

impl Sub for IntegerChain {
    type Output = IntegerChain;
    fn sub(self, rhs: IntegerChain) -> IntegerChain {
        &self - &rhs
    }
}

impl std::iter::Sum for IntegerChain {
    fn sum<I: Iterator<Item = IntegerChain>>(iter: I) -> Self {
        let mut acc = IntegerChain::zero(0);
        for c in iter {
            acc += &c;
        }
        acc
    }
}

#[derive(Serialize, Deserialize)]
struct ChainTerm {
    vertices: Vec<u32>,
    coeff: i64,
}

impl Serialize for IntegerChain {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_seq(self.terms.iter().map(|(s, &coeff)| ChainTerm {
            vertices: s.iter().map(|v| v.0).collect(),
            coeff,
        }))
    }
}

impl<'de> Deserialize<'de> for IntegerChain {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let raw: Vec<ChainTerm> = Vec::deserialize(deserializer)?;
        let dim = raw.first().map(|t| t.vertices.len().saturating_sub(1)).unwrap_or(0);
        let mut chain = IntegerChain::zero(dim);
        let mut previous: Option<Vec<VertexId>> = None;
        for term in raw {
            let key: Vec<VertexId> = term.vertices.iter().copied().map(VertexId).collect();
            if key.len() != dim + 1 {
                return Err(D::Error::custom("chain terms of mixed dimension"));
            }
            if key.windows(2).any(|w| w[0] >= w[1]) {
                return Err(D::Error::custom(format!(
                    "vertices {:?} are not strictly ascending",
                    term.vertices
                )));
            }
            if term.coeff == 0 {
                return Err(D::Error::custom("zero coefficient in canonical chain"));
            }
            if previous.as_ref().is_some_and(|p| p >= &key) {
                return Err(D::Error::custom("chain terms not in canonical order"));
            }
            previous = Some(key.clone());
            chain.add_sorted(key, term.coeff);
        }
        Ok(chain)
    }
}

/// A complex given by generating simplices; faces are implied.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SimplicialComplex {
    generators: BTreeSet<Vec<VertexId>>,
}

impl SimplicialComplex {
    pub fn from_simplices<I>(simplices: I) -> Self
    where
        I: IntoIterator<Item = Vec<VertexId>>,
    {
        SimplicialComplex {
            generators: simplices
                .into_iter()
                .map(|mut s| {
                    s.sort();
                    s.dedup();
                    s
                })
                .filter(|s| !s.is_empty())
                .collect(),
        }
    }

    pub fn generators(&self) -> &BTreeSet<Vec<VertexId>> {
        &self.generators
    }

    pub fn dim(&self) -> Option<usize> {
        self.generators.iter().map(|s| s.len() - 1).max()
    }

    pub fn vertices(&self) -> BTreeSet<VertexId> {
        self.generators.iter().flatten().copied().collect()
    }

    /// Every face of every generator, including the generators.
    pub fn all_faces(&self) -> BTreeSet<Vec<VertexId>> {
        let mut out = BTreeSet::new();
        for s in &self.generators {
            for k in 1..=s.len() {
                for face in s.iter().copied().combinations(k) {
                    out.insert(face);
                }
            }
        }
        out
    }

    pub fn faces_of_dim(&self, k: usize) -> BTreeSet<Vec<VertexId>> {
        let mut out = BTreeSet::new();
        for s in &self.generators {
            if s.len() > k {
                for face in s.iter().copied().combinations(k + 1) {
                    out.insert(face);
                }
            }
        }
        out
    }

    /// `f[k]` = number of k-faces.
    pub fn f_vector(&self) -> Vec<usize> {
        let Some(d) = self.dim() else {
            return Vec::new();
        };
        (0..=d).map(|k| self.faces_of_dim(k).len()).collect()
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.f_vector()
            .iter()
            .enumerate()
            .map(|(k, &f)| if k % 2 == 0 { f as i64 } else { -(f as i64) })
            .sum()
    }

    pub fn contains(&self, face: &[VertexId]) -> bool {
        let mut f = face.to_vec();
        f.sort();
        self.generators
            .iter()
            .any(|g| f.iter().all(|v| g.binary_search(v).is_ok()))
    }

    /// Faces common to both complexes.
    pub fn intersection(&self, other: &SimplicialComplex) -> BTreeSet<Vec<VertexId>> {
        let theirs = other.all_faces();
        self.all_faces()
            .into_iter()
            .filter(|f| theirs.contains(f))
            .collect()
    }
}

/// The n-skeleton of the (N-1)-simplex on vertices `0..N`.
pub fn complete_complex(n: usize, vertex_count: usize) -> Result<SimplicialComplex> {
    if vertex_count <= n {
        return Err(Error::Domain(format!(
            "complete {n}-complex needs more than {n} vertices, got {vertex_count}"
        )));
    }
    let simplices = (0..vertex_count as u32)
        .map(VertexId)
        .combinations(n + 1);
    Ok(SimplicialComplex::from_simplices(simplices))
}

/// Why a chain failed to certify as a combinatorial sphere.
#[derive(Clone, Debug, PartialEq, Eq, Error, Serialize, Deserialize)]
pub enum SphereFailure {
    #[error("empty chain")]
    Empty,
    #[error("coefficient {coeff} on {simplex:?} is not +-1")]
    NonUnitCoefficient { simplex: Vec<u32>, coeff: i64 },
    #[error("nonzero boundary ({terms} terms)")]
    NonzeroBoundary { terms: usize },
    #[error("face {face:?} lies in {count} simplices, expected {expected}")]
    NotPseudomanifold {
        face: Vec<u32>,
        count: usize,
        expected: String,
    },
    #[error("support is not strongly connected ({components} components)")]
    Disconnected { components: usize },
    #[error("Euler characteristic {found}, expected {expected}")]
    EulerCharacteristic { expected: i64, found: i64 },
    #[error("not a disc: {0}")]
    NotADisc(String),
}

fn raw(v: &[VertexId]) -> Vec<u32> {
    v.iter().map(|x| x.0).collect()
}

fn check_units(c: &IntegerChain) -> Result<(), SphereFailure> {
    if c.is_zero() {
        return Err(SphereFailure::Empty);
    }
    for (s, coeff) in c.terms() {
        if coeff.abs() != 1 {
            return Err(SphereFailure::NonUnitCoefficient {
                simplex: raw(s),
                coeff,
            });
        }
    }
    Ok(())
}

/// Counts how many support simplices contain each codimension-one face.
fn ridge_incidence(c: &IntegerChain) -> HashMap<Vec<VertexId>, Vec<usize>> {
    let mut incidence: HashMap<Vec<VertexId>, Vec<usize>> = HashMap::new();
    for (idx, s) in c.support().enumerate() {
        for i in 0..s.len() {
            let mut face = s.to_vec();
            face.remove(i);
            incidence.entry(face).or_default().push(idx);
        }
    }
    incidence
}

fn strong_components(cells: usize, incidence: &HashMap<Vec<VertexId>, Vec<usize>>) -> usize {
    let mut parent: Vec<usize> = (0..cells).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        let mut y = x;
        while p[y] != r {
            let next = p[y];
            p[y] = r;
            y = next;
        }
        r
    }
    for members in incidence.values() {
        for w in members.windows(2) {
            let a = find(&mut parent, w[0]);
            let b = find(&mut parent, w[1]);
            if a != b {
                parent[a] = b;
            }
        }
    }
    (0..cells).filter(|&i| find(&mut parent, i) == i).count()
}

/// A chain certified to be a combinatorial n-sphere, with its provenance.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SphereWitness {
    n: usize,
    chain: IntegerChain,
    transcript: Vec<String>,
}

impl SphereWitness {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn chain(&self) -> &IntegerChain {
        &self.chain
    }

    pub fn into_chain(self) -> IntegerChain {
        self.chain
    }

    pub fn transcript(&self) -> &[String] {
        &self.transcript
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.transcript.push(note.into());
        self
    }

    /// Same sphere with reversed orientation.
    pub fn flipped(&self) -> Self {
        let mut out = SphereWitness {
            n: self.n,
            chain: -&self.chain,
            transcript: self.transcript.clone(),
        };
        out.transcript.push("orientation flipped".into());
        out
    }

    /// Pushes the sphere along an injective vertex map and re-certifies it.
    pub fn relabel<F>(&self, f: F) -> Result<SphereWitness>
    where
        F: FnMut(VertexId) -> VertexId,
    {
        let chain = self.chain.relabel(f)?;
        let mut w = check_sphere(&chain)?;
        w.transcript = self.transcript.clone();
        Ok(w)
    }

    pub fn vertices(&self) -> BTreeSet<VertexId> {
        self.chain.vertices()
    }
}

/// Certifies `c` as a combinatorial sphere: unit coefficients, zero boundary,
/// closed strongly connected pseudomanifold support and the Euler
/// characteristic of a sphere. Not a full PL-sphere recognition.
pub fn check_sphere(c: &IntegerChain) -> Result<SphereWitness, SphereFailure> {
    check_units(c)?;
    let n = c.dim();
    if n == 0 {
        // S^0: two points with opposite signs
        let coeffs: Vec<i64> = c.terms().map(|(_, k)| k).collect();
        if coeffs.len() != 2 || coeffs[0] + coeffs[1] != 0 {
            return Err(SphereFailure::NonzeroBoundary {
                terms: coeffs.len(),
            });
        }
        return Ok(SphereWitness {
            n,
            chain: c.clone(),
            transcript: Vec::new(),
        });
    }
    let boundary = c.boundary().expect("dimension checked above");
    if !boundary.is_zero() {
        return Err(SphereFailure::NonzeroBoundary {
            terms: boundary.len(),
        });
    }
    let incidence = ridge_incidence(c);
    let mut ridges: Vec<_> = incidence.iter().collect();
    ridges.sort_by(|a, b| a.0.cmp(b.0));
    for (face, members) in ridges {
        if members.len() != 2 {
            return Err(SphereFailure::NotPseudomanifold {
                face: raw(face),
                count: members.len(),
                expected: "2".into(),
            });
        }
    }
    let components = strong_components(c.len(), &incidence);
    if components != 1 {
        return Err(SphereFailure::Disconnected { components });
    }
    let expected = if n.is_multiple_of(2) { 2 } else { 0 };
    let found = c.closure().euler_characteristic();
    if found != expected {
        return Err(SphereFailure::EulerCharacteristic { expected, found });
    }
    Ok(SphereWitness {
        n,
        chain: c.clone(),
        transcript: Vec::new(),
    })
}

/// Certifies `c` as a combinatorial n-disc: unit coefficients, strongly
/// connected, every ridge in one or two cells, Euler characteristic one, and
/// a boundary that is itself a sphere.
pub fn check_disc(c: &IntegerChain) -> Result<(), SphereFailure> {
    check_units(c)?;
    let n = c.dim();
    if n == 0 {
        return if c.len() == 1 {
            Ok(())
        } else {
            Err(SphereFailure::NotADisc("a 0-disc is a single point".into()))
        };
    }
    let incidence = ridge_incidence(c);
    let mut ridges: Vec<_> = incidence.iter().collect();
    ridges.sort_by(|a, b| a.0.cmp(b.0));
    for (face, members) in ridges {
        if members.is_empty() || members.len() > 2 {
            return Err(SphereFailure::NotPseudomanifold {
                face: raw(face),
                count: members.len(),
                expected: "1 or 2".into(),
            });
        }
    }
    let components = strong_components(c.len(), &incidence);
    if components != 1 {
        return Err(SphereFailure::Disconnected { components });
    }
    let found = c.closure().euler_characteristic();
    if found != 1 {
        return Err(SphereFailure::EulerCharacteristic { expected: 1, found });
    }
    let boundary = c.boundary().expect("dimension checked above");
    check_sphere(&boundary)
        .map_err(|e| SphereFailure::NotADisc(format!("boundary is not a sphere: {e}")))?;
    Ok(())
}
