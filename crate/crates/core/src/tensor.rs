//! Sparse 2- and 3-tensors over an algebra basis.
//!
//! Wedge convention: `a ∧ b = a⊗b − b⊗a`. Antisymmetric 2-tensors are
//! normalized to [`Wedge2`], keyed by `(a, b)` with `a < b` in basis order.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::element::SparseVec;
use crate::generator::{Basis, GeneratorId};
use crate::scalar::Scalar;
use crate::table::StructureTable;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TensorTermJson {
    pub slots: Vec<GeneratorId>,
    pub coeff: Scalar,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WedgeTermJson {
    pub a: GeneratorId,
    pub b: GeneratorId,
    pub coeff: Scalar,
}

fn accumulate<K: Ord>(map: &mut BTreeMap<K, Scalar>, key: K, c: &Scalar) {
    if c.is_zero() {
        return;
    }
    let e = map.entry(key).or_default();
    *e += c;
}

fn prune<K: Ord>(map: &mut BTreeMap<K, Scalar>) {
    map.retain(|_, c| !c.is_zero());
}

#[derive(Clone, Default, PartialEq, Eq)]
pub struct Tensor2(BTreeMap<(usize, usize), Scalar>);

impl Tensor2 {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn add_term(&mut self, a: usize, b: usize, c: &Scalar) {
        accumulate(&mut self.0, (a, b), c);
    }

    /// Adds `c · (a ∧ b)`.
    pub fn add_wedge(&mut self, a: usize, b: usize, c: &Scalar) {
        self.add_term(a, b, c);
        self.add_term(b, a, &-c);
    }

    /// `x ⊗ y`.
    pub fn outer(x: &SparseVec, y: &SparseVec) -> Self {
        let mut t = Self::zero();
        t.add_outer(&Scalar::one(), x, y);
        t
    }

    /// Adds `c · x ⊗ y`.
    pub fn add_outer(&mut self, c: &Scalar, x: &SparseVec, y: &SparseVec) {
        for (a, xa) in x.iter() {
            let cx = c * xa;
            for (b, yb) in y.iter() {
                self.add_term(*a, *b, &(&cx * yb));
            }
        }
    }

    pub fn add_scaled(&mut self, c: &Scalar, other: &Tensor2) {
        for ((a, b), v) in &other.0 {
            self.add_term(*a, *b, &(v * c));
        }
    }

    pub fn finish(mut self) -> Self {
        prune(&mut self.0);
        self
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        let mut t = Self::zero();
        t.add_scaled(c, self);
        t.finish()
    }

    pub fn sub(&self, other: &Tensor2) -> Self {
        let mut t = self.clone();
        t.add_scaled(&Scalar::from_int(-1), other);
        t.finish()
    }

    pub fn add(&self, other: &Tensor2) -> Self {
        let mut t = self.clone();
        t.add_scaled(&Scalar::one(), other);
        t.finish()
    }

    pub fn is_zero(&self) -> bool {
        self.0.values().all(Scalar::is_zero)
    }

    pub fn get(&self, a: usize, b: usize) -> Scalar {
        self.0.get(&(a, b)).cloned().unwrap_or_default()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(usize, usize), &Scalar)> {
        self.0.iter().filter(|(_, c)| !c.is_zero())
    }

    pub fn len(&self) -> usize {
        self.terms().count()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Slot swap `a⊗b → b⊗a`.
    pub fn transpose(&self) -> Self {
        let mut t = Self::zero();
        for ((a, b), c) in self.terms() {
            t.add_term(*b, *a, c);
        }
        t
    }

    /// `½ (t − τ t)`.
    pub fn antisymmetrize(&self) -> Self {
        self.sub(&self.transpose()).scale(&Scalar::rational(1, 2))
    }

    pub fn is_antisymmetric(&self) -> bool {
        self.add(&self.transpose()).is_zero()
    }

    /// `(ad_x ⊗ 1 + 1 ⊗ ad_x) t`.
    pub fn ad(&self, table: &StructureTable, x: &SparseVec) -> Self {
        let mut t = Self::zero();
        for ((a, b), c) in self.terms() {
            let xa = table.bracket_vec(x, &SparseVec::unit(*a));
            let xb = table.bracket_vec(x, &SparseVec::unit(*b));
            t.add_outer(c, &xa, &SparseVec::unit(*b));
            t.add_outer(c, &SparseVec::unit(*a), &xb);
        }
        t.finish()
    }

    /// Applies the linear map `e_k ↦ image(k)` in both slots.
    pub fn map(&self, image: impl Fn(usize) -> SparseVec) -> Self {
        let mut t = Self::zero();
        for ((a, b), c) in self.terms() {
            t.add_outer(c, &image(*a), &image(*b));
        }
        t.finish()
    }

    /// Antisymmetric part in wedge normal form. Only meaningful when `self` is antisymmetric.
    pub fn to_wedge(&self) -> Wedge2 {
        let mut w = Wedge2::zero();
        for ((a, b), c) in self.terms() {
            if a < b {
                w.0.insert((*a, *b), c.clone());
            }
        }
        w
    }

    pub fn to_json(&self, basis: &Basis) -> Vec<TensorTermJson> {
        self.terms()
            .map(|((a, b), c)| TensorTermJson {
                slots: vec![basis.id(*a), basis.id(*b)],
                coeff: c.clone(),
            })
            .collect()
    }
}

impl std::fmt::Debug for Tensor2 {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_map().entries(self.terms()).finish()
    }
}

/// Antisymmetric 2-tensor in wedge normal form: `Σ c_ab a∧b` over `a < b`.
#[derive(Clone, Default, PartialEq, Eq)]
pub struct Wedge2(BTreeMap<(usize, usize), Scalar>);

impl Wedge2 {
    pub fn zero() -> Self {
        Self::default()
    }

    /// Adds `c · (a ∧ b)`, reordering to normal form. `a ∧ a = 0`.
    pub fn add(&mut self, a: usize, b: usize, c: &Scalar) {
        match a.cmp(&b) {
            std::cmp::Ordering::Less => accumulate(&mut self.0, (a, b), c),
            std::cmp::Ordering::Greater => accumulate(&mut self.0, (b, a), &-c),
            std::cmp::Ordering::Equal => {}
        }
    }

    /// Adds `c · x ∧ y` for vectors `x`, `y`.
    pub fn add_vec_wedge(&mut self, c: &Scalar, x: &SparseVec, y: &SparseVec) {
        for (a, xa) in x.iter() {
            for (b, yb) in y.iter() {
                self.add(*a, *b, &(c * &(xa * yb)));
            }
        }
    }

    pub fn add_scaled(&mut self, c: &Scalar, other: &Wedge2) {
        for ((a, b), v) in other.terms() {
            accumulate(&mut self.0, (*a, *b), &(v * c));
        }
    }

    pub fn finish(mut self) -> Self {
        prune(&mut self.0);
        self
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(usize, usize), &Scalar)> {
        self.0.iter().filter(|(_, c)| !c.is_zero())
    }

    pub fn is_zero(&self) -> bool {
        self.0.values().all(Scalar::is_zero)
    }

    pub fn len(&self) -> usize {
        self.terms().count()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn get(&self, a: usize, b: usize) -> Scalar {
        self.0.get(&(a, b)).cloned().unwrap_or_default()
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        Self(self.0.iter().map(|(k, v)| (*k, v * c)).collect()).finish()
    }

    pub fn to_tensor(&self) -> Tensor2 {
        let mut t = Tensor2::zero();
        for ((a, b), c) in self.terms() {
            t.add_wedge(*a, *b, c);
        }
        t.finish()
    }

    pub fn sub(&self, other: &Wedge2) -> Wedge2 {
        let mut w = self.clone();
        for ((a, b), c) in other.terms() {
            accumulate(&mut w.0, (*a, *b), &-c);
        }
        w.finish()
    }

    pub fn to_json(&self, basis: &Basis) -> Vec<WedgeTermJson> {
        self.terms()
            .map(|((a, b), c)| WedgeTermJson { a: basis.id(*a), b: basis.id(*b), coeff: c.clone() })
            .collect()
    }

    pub fn residual_json(&self, basis: &Basis) -> Vec<TensorTermJson> {
        self.terms()
            .map(|((a, b), c)| TensorTermJson {
                slots: vec![basis.id(*a), basis.id(*b)],
                coeff: c.clone(),
            })
            .collect()
    }
}

impl std::fmt::Debug for Wedge2 {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_map().entries(self.terms()).finish()
    }
}

#[derive(Clone, Default, PartialEq, Eq)]
pub struct Tensor3(BTreeMap<(usize, usize, usize), Scalar>);

impl Tensor3 {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn add_term(&mut self, a: usize, b: usize, c: usize, v: &Scalar) {
        accumulate(&mut self.0, (a, b, c), v);
    }

    /// Adds `v · x ⊗ y ⊗ z`.
    pub fn add_outer(&mut self, v: &Scalar, x: &SparseVec, y: &SparseVec, z: &SparseVec) {
        for (a, xa) in x.iter() {
            let va = v * xa;
            for (b, yb) in y.iter() {
                let vab = &va * yb;
                for (c, zc) in z.iter() {
                    self.add_term(*a, *b, *c, &(&vab * zc));
                }
            }
        }
    }

    pub fn finish(mut self) -> Self {
        prune(&mut self.0);
        self
    }

    /// `u⊗v⊗w ↦ w⊗u⊗v`.
    pub fn cycle(&self) -> Self {
        let mut t = Self::zero();
        for ((a, b, c), v) in &self.0 {
            t.add_term(*c, *a, *b, v);
        }
        t
    }

    pub fn add(&self, other: &Tensor3) -> Self {
        let mut t = self.clone();
        for ((a, b, c), v) in &other.0 {
            t.add_term(*a, *b, *c, v);
        }
        t.finish()
    }

    pub fn is_zero(&self) -> bool {
        self.0.values().all(Scalar::is_zero)
    }

    pub fn len(&self) -> usize {
        self.0.values().filter(|c| !c.is_zero()).count()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn to_json(&self, basis: &Basis) -> Vec<TensorTermJson> {
        self.0
            .iter()
            .filter(|(_, c)| !c.is_zero())
            .map(|((a, b, c), v)| TensorTermJson {
                slots: vec![basis.id(*a), basis.id(*b), basis.id(*c)],
                coeff: v.clone(),
            })
            .collect()
    }
}

impl std::fmt::Debug for Tensor3 {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_map().entries(self.0.iter()).finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wedge_normal_form() {
        let mut w = Wedge2::zero();
        w.add(3, 1, &Scalar::one());
        w.add(1, 3, &Scalar::from_int(2));
        w.add(2, 2, &Scalar::from_int(5));
        let w = w.finish();
        assert_eq!(w.len(), 1);
        assert_eq!(w.get(1, 3), Scalar::one());
        let t = w.to_tensor();
        assert!(t.is_antisymmetric());
        assert_eq!(t.get(3, 1), Scalar::from_int(-1));
        assert_eq!(t.to_wedge(), w);
    }

    #[test]
    fn antisymmetrize_outer() {
        let x = SparseVec::unit(0);
        let y = SparseVec::unit(1);
        let t = Tensor2::outer(&x, &y).antisymmetrize();
        let mut w = Wedge2::zero();
        w.add(0, 1, &Scalar::rational(1, 2));
        assert_eq!(t.to_wedge(), w.finish());
    }

    #[test]
    fn cycling_three_times_is_identity() {
        let mut t = Tensor3::zero();
        t.add_term(0, 1, 2, &Scalar::i());
        t.add_term(2, 2, 1, &Scalar::one());
        assert_eq!(t.cycle().cycle().cycle(), t);
        assert_ne!(t.cycle(), t);
    }
}
