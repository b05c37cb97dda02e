//! Sparse vectors: index-keyed (`SparseVec`) for kernels, label-keyed (`Element`) for the API.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::generator::{Basis, GeneratorId};
use crate::scalar::Scalar;

/// Sorted `(index, coefficient)` pairs with no stored zeros.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct SparseVec(Vec<(usize, Scalar)>);

impl SparseVec {
    pub fn zero() -> Self {
        Self(Vec::new())
    }

    pub fn unit(k: usize) -> Self {
        Self(vec![(k, Scalar::one())])
    }

    pub fn from_map(map: BTreeMap<usize, Scalar>) -> Self {
        Self(map.into_iter().filter(|(_, c)| !c.is_zero()).collect())
    }

    /// Sums duplicate indices and drops zeros.
    pub fn from_terms<I: IntoIterator<Item = (usize, Scalar)>>(terms: I) -> Self {
        let mut acc: BTreeMap<usize, Scalar> = BTreeMap::new();
        for (k, c) in terms {
            *acc.entry(k).or_default() += c;
        }
        Self::from_map(acc)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &(usize, Scalar)> {
        self.0.iter()
    }

    pub fn get(&self, k: usize) -> Option<&Scalar> {
        self.0
            .binary_search_by_key(&k, |(i, _)| *i)
            .ok()
            .map(|p| &self.0[p].1)
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self(self.0.iter().map(|(k, v)| (*k, v * c)).collect())
    }

    pub fn neg(&self) -> Self {
        Self(self.0.iter().map(|(k, v)| (*k, -v)).collect())
    }

    pub fn add(&self, other: &SparseVec) -> Self {
        self.add_scaled(&Scalar::one(), other)
    }

    pub fn sub(&self, other: &SparseVec) -> Self {
        self.add_scaled(&Scalar::from_int(-1), other)
    }

    /// `self + c·other`.
    pub fn add_scaled(&self, c: &Scalar, other: &SparseVec) -> Self {
        let mut acc: BTreeMap<usize, Scalar> = self.0.iter().cloned().collect();
        for (k, v) in other.iter() {
            *acc.entry(*k).or_default() += v * c;
        }
        Self::from_map(acc)
    }

    pub fn map_coeffs(&self, f: impl Fn(&Scalar) -> Scalar) -> Self {
        Self::from_terms(self.0.iter().map(|(k, v)| (*k, f(v))))
    }

    pub fn to_element(&self, basis: &Basis) -> Element {
        Element::from_terms(self.0.iter().map(|(k, v)| (basis.id(*k), v.clone())))
    }
}

impl fmt::Debug for SparseVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.0.iter().map(|(k, v)| (k, v))).finish()
    }
}

/// Running sum of index-keyed terms.
#[derive(Default, Clone)]
pub struct Accumulator(BTreeMap<usize, Scalar>);

impl Accumulator {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, k: usize, c: &Scalar) {
        *self.0.entry(k).or_default() += c;
    }

    pub fn add_vec(&mut self, c: &Scalar, v: &SparseVec) {
        for (k, x) in v.iter() {
            *self.0.entry(*k).or_default() += x * c;
        }
    }

    pub fn finish(self) -> SparseVec {
        SparseVec::from_map(self.0)
    }
}

/// A linear combination of generators, keyed by label.
#[derive(Clone, Default, PartialEq, Eq)]
pub struct Element {
    terms: BTreeMap<GeneratorId, Scalar>,
}

impl Element {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn generator(g: GeneratorId) -> Self {
        Self::term(g, Scalar::one())
    }

    pub fn term(g: GeneratorId, c: Scalar) -> Self {
        Self::from_terms([(g, c)])
    }

    pub fn from_terms<I: IntoIterator<Item = (GeneratorId, Scalar)>>(terms: I) -> Self {
        let mut acc: BTreeMap<GeneratorId, Scalar> = BTreeMap::new();
        for (g, c) in terms {
            *acc.entry(g).or_default() += c;
        }
        acc.retain(|_, c| !c.is_zero());
        Self { terms: acc }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&GeneratorId, &Scalar)> {
        self.terms.iter()
    }

    pub fn coeff(&self, g: &GeneratorId) -> Scalar {
        self.terms.get(g).cloned().unwrap_or_default()
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        Self::from_terms(self.terms.iter().map(|(g, v)| (*g, v * c)))
    }

    pub fn add(&self, other: &Element) -> Self {
        Self::from_terms(self.terms.iter().chain(other.terms.iter()).map(|(g, v)| (*g, v.clone())))
    }

    pub fn sub(&self, other: &Element) -> Self {
        self.add(&other.scale(&Scalar::from_int(-1)))
    }

    /// Coordinates in `basis`; fails on a generator outside it.
    pub fn to_sparse(&self, basis: &Basis) -> Result<SparseVec> {
        let mut out = Vec::with_capacity(self.terms.len());
        for (g, c) in &self.terms {
            out.push((basis.require(g)?, c.clone()));
        }
        Ok(SparseVec::from_terms(out))
    }
}

impl From<GeneratorId> for Element {
    fn from(g: GeneratorId) -> Self {
        Element::generator(g)
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (g, c)) in self.terms.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            if c.is_one() {
                write!(f, "{g}")?;
            } else {
                write!(f, "({c})·{g}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// One `{"gen": ..., "coeff": [...]}` entry of the JSON wire format.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    pub gen: GeneratorId,
    pub coeff: Scalar,
}

impl Serialize for Element {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let terms: Vec<TermJson> = self
            .terms
            .iter()
            .map(|(g, c)| TermJson { gen: *g, coeff: c.clone() })
            .collect();
        terms.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Element {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let terms: Vec<TermJson> = Vec::deserialize(d)?;
        Ok(Element::from_terms(terms.into_iter().map(|t| (t.gen, t.coeff))))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zeros_are_dropped() {
        let v = SparseVec::from_terms([(3, Scalar::one()), (1, Scalar::i()), (3, Scalar::from_int(-1))]);
        assert_eq!(v.len(), 1);
        assert_eq!(v.get(1), Some(&Scalar::i()));
        assert_eq!(v.get(3), None);

        let h = GeneratorId::h(1);
        let e = Element::generator(h).sub(&Element::generator(h));
        assert!(e.is_zero());
    }

    #[test]
    fn foreign_generator_rejected() {
        let basis = Basis::new(vec![GeneratorId::h(1), GeneratorId::h(2)]);
        let e = Element::generator(GeneratorId::f(1, 2));
        assert!(e.to_sparse(&basis).is_err());
    }
}
