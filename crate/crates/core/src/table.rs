//! Sparse structure constants of a finite-dimensional Lie algebra.

use crate::element::{Accumulator, Element, SparseVec};
use crate::error::Result;
use crate::generator::{Basis, GeneratorId};
use crate::scalar::Scalar;

/// All brackets `[e_p, e_q]` of an ordered basis.
///
/// Both orders are stored, with `[e_q, e_p] = −[e_p, e_q]` kept in sync by
/// [`StructureTable::set`], so lookups never branch on index order.
#[derive(Clone, PartialEq, Eq)]
pub struct StructureTable {
    basis: Basis,
    entries: Vec<SparseVec>,
}

impl StructureTable {
    pub fn zero(basis: Basis) -> Self {
        let n = basis.len();
        Self { basis, entries: vec![SparseVec::zero(); n * n] }
    }

    pub fn basis(&self) -> &Basis {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Sets `[e_p, e_q] = value` and `[e_q, e_p] = −value`. Diagonal entries are ignored.
    pub fn set(&mut self, p: usize, q: usize, value: SparseVec) {
        if p == q {
            return;
        }
        let n = self.dim();
        self.entries[q * n + p] = value.neg();
        self.entries[p * n + q] = value;
    }

    /// Overwrites a single ordered entry without touching its mirror.
    /// Only useful for building deliberately broken tables.
    pub fn set_one_sided(&mut self, p: usize, q: usize, value: SparseVec) {
        let n = self.dim();
        self.entries[p * n + q] = value;
    }

    pub fn get(&self, p: usize, q: usize) -> &SparseVec {
        &self.entries[p * self.dim() + q]
    }

    /// Structure constant: coefficient of `e_r` in `[e_p, e_q]`.
    pub fn coeff(&self, p: usize, q: usize, r: usize) -> Option<&Scalar> {
        self.get(p, q).get(r)
    }

    /// Bilinear extension to index-keyed vectors.
    pub fn bracket_vec(&self, x: &SparseVec, y: &SparseVec) -> SparseVec {
        let mut acc = Accumulator::new();
        for (p, a) in x.iter() {
            for (q, b) in y.iter() {
                let e = self.get(*p, *q);
                if e.is_zero() {
                    continue;
                }
                acc.add_vec(&(a * b), e);
            }
        }
        acc.finish()
    }

    /// `[e_p, y]` for a basis vector `e_p`.
    pub fn ad_basis(&self, p: usize, y: &SparseVec) -> SparseVec {
        let mut acc = Accumulator::new();
        for (q, b) in y.iter() {
            acc.add_vec(b, self.get(p, *q));
        }
        acc.finish()
    }

    pub fn bracket(&self, x: &Element, y: &Element) -> Result<Element> {
        let xs = x.to_sparse(&self.basis)?;
        let ys = y.to_sparse(&self.basis)?;
        Ok(self.bracket_vec(&xs, &ys).to_element(&self.basis))
    }

    pub fn bracket_ids(&self, x: GeneratorId, y: GeneratorId) -> Result<Element> {
        let p = self.basis.require(&x)?;
        let q = self.basis.require(&y)?;
        Ok(self.get(p, q).to_element(&self.basis))
    }

    /// Pairs `p < q` with a nonzero bracket, in basis order.
    pub fn nonzero_pairs(&self) -> impl Iterator<Item = (usize, usize, &SparseVec)> + '_ {
        let n = self.dim();
        (0..n).flat_map(move |p| {
            ((p + 1)..n).filter_map(move |q| {
                let e = self.get(p, q);
                (!e.is_zero()).then_some((p, q, e))
            })
        })
    }

    /// Ordered pairs whose two stored entries are not negatives of each other,
    /// plus any nonzero diagonal entry.
    pub fn antisymmetry_defects(&self) -> Vec<(usize, usize)> {
        let n = self.dim();
        let mut out = Vec::new();
        for p in 0..n {
            if !self.get(p, p).is_zero() {
                out.push((p, p));
            }
            for q in (p + 1)..n {
                if self.get(p, q) != &self.get(q, p).neg() {
                    out.push((p, q));
                }
            }
        }
        out
    }
}

impl std::fmt::Debug for StructureTable {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut m = f.debug_map();
        for (p, q, e) in self.nonzero_pairs() {
            m.entry(
                &format!("[{}, {}]", self.basis.id(p), self.basis.id(q)),
                &e.to_element(&self.basis),
            );
        }
        m.finish()
    }
}
