//! Bracket tables of `g ⊕ t` for the four classical series in the oscillator basis.
//!
//! Index conventions for references produced by the commutation rules:
//!
//! * `F_ii` never exists as a generator. Wherever a rule produces it, the
//!   rule also carries an explicit Cartan term for the diagonal case, so the
//!   `F_ii` reference is dropped.
//! * `P_lk`, `Q_lk` with `l > k` are rewritten to `P_kl`, `Q_kl` (symmetric).
//! * `S_lk`, `T_lk` with `l > k` are rewritten to `−S_kl`, `−T_kl`; `S_kk = T_kk = 0`.
//! * In `[F_ij, P_kl]` and `[F_ij, Q_kl]` with `k < l`, the Kronecker terms whose
//!   target would be diagonal are carried by the separate `√2 P_ii` / `−√2 Q_jj`
//!   term, not by the `P_il`-style terms. Both coincidences (`i=l, j=k` and
//!   `i=k, j=l`) target `P_ii` (resp. `Q_jj`); the bosonic representation
//!   check in `reps` confirms this reading.

use rayon::prelude::*;

use crate::element::{Accumulator, Element, SparseVec};
use crate::error::{Error, Result};
use crate::generator::{enumerate_generators, Basis, GeneratorId, Kind, Series};
use crate::report::{Report, Residual, Violation};
use crate::scalar::Scalar;
use crate::table::StructureTable;

#[derive(Clone, Debug)]
pub struct LieAlgebra {
    series: Series,
    rank: usize,
    table: StructureTable,
}

impl LieAlgebra {
    pub fn from_table(series: Series, rank: usize, table: StructureTable) -> Self {
        Self { series, rank, table }
    }

    pub fn series(&self) -> Series {
        self.series
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn table(&self) -> &StructureTable {
        &self.table
    }

    pub fn basis(&self) -> &Basis {
        self.table.basis()
    }

    pub fn dim(&self) -> usize {
        self.table.dim()
    }

    pub fn index(&self, g: &GeneratorId) -> Result<usize> {
        self.basis().require(g)
    }

    pub fn vector(&self, x: &Element) -> Result<SparseVec> {
        x.to_sparse(self.basis())
    }

    pub fn element(&self, v: &SparseVec) -> Element {
        v.to_element(self.basis())
    }

    pub fn bracket(&self, x: &Element, y: &Element) -> Result<Element> {
        self.table.bracket(x, y)
    }

    pub fn bracket_ids(&self, x: GeneratorId, y: GeneratorId) -> Result<Element> {
        self.table.bracket_ids(x, y)
    }

    /// Number of Cartan indices (`n+1` for A).
    pub fn cartan_count(&self) -> usize {
        self.series.cartan_count(self.rank)
    }

    /// Copy of this algebra with `[x, y]` replaced (and `[y, x]` set to its negative).
    /// Produces tables that need not satisfy Jacobi; used for mutation fixtures.
    pub fn with_bracket(&self, x: GeneratorId, y: GeneratorId, value: &Element) -> Result<Self> {
        let p = self.index(&x)?;
        let q = self.index(&y)?;
        let v = self.vector(value)?;
        let mut table = self.table.clone();
        table.set(p, q, v);
        Ok(Self { table, ..self.clone() })
    }

    /// The subalgebra spanned by a subset of basis generators, in the order given.
    pub fn restrict(&self, ids: &[GeneratorId]) -> Result<Self> {
        let sub = Basis::new(ids.to_vec());
        let mut table = StructureTable::zero(sub.clone());
        for (a, x) in ids.iter().enumerate() {
            for (b, y) in ids.iter().enumerate().skip(a + 1) {
                let e = self.bracket_ids(*x, *y)?;
                let v = e.to_sparse(&sub).map_err(|_| Error::NotSubalgebra {
                    left: x.to_string(),
                    right: y.to_string(),
                })?;
                table.set(a, b, v);
            }
        }
        Ok(Self { series: self.series, rank: self.rank, table })
    }
}

/// Builds `g ⊕ t` for the given series and rank from the oscillator-basis
/// commutation rules. The central `I_i` bracket to zero with everything.
pub fn build_series(series: Series, rank: usize) -> Result<LieAlgebra> {
    let ids = enumerate_generators(series, rank)?;
    let basis = Basis::new(ids.clone());
    let mut table = StructureTable::zero(basis.clone());
    for p in 0..ids.len() {
        for q in (p + 1)..ids.len() {
            let terms = match rule(ids[p], ids[q]) {
                Some(t) => t,
                None => match rule(ids[q], ids[p]) {
                    Some(t) => t.into_iter().map(|(c, g)| (-c, g)).collect(),
                    None => Vec::new(),
                },
            };
            let mut acc = Accumulator::new();
            for (c, g) in terms {
                let k = basis.position(&g).unwrap_or_else(|| {
                    panic!("rule [{}, {}] produced {g} outside {series}{rank}", ids[p], ids[q])
                });
                acc.add(k, &c);
            }
            table.set(p, q, acc.finish());
        }
    }
    Ok(LieAlgebra { series, rank, table })
}

/// Terms of a commutation rule before index normalization.
struct Terms(Vec<(Scalar, GeneratorId)>);

fn delta(a: u16, b: u16) -> i64 {
    i64::from(a == b)
}

impl Terms {
    fn new() -> Self {
        Self(Vec::new())
    }

    /// Adds `c · kind_{i,j}` after index normalization. Zero coefficients are skipped.
    fn push(&mut self, c: Scalar, kind: Kind, i: u16, j: u16) {
        if c.is_zero() {
            return;
        }
        let (sign, g) = match kind {
            Kind::F if i == j => return,
            Kind::P | Kind::Q if i > j => (1, GeneratorId::new(kind, j, i)),
            Kind::S | Kind::T if i == j => return,
            Kind::S | Kind::T if i > j => (-1, GeneratorId::new(kind, j, i)),
            _ => (1, GeneratorId::new(kind, i, j)),
        };
        let c = if sign < 0 { -c } else { c };
        self.0.push((c, g));
    }

    fn int(&mut self, c: i64, kind: Kind, i: u16, j: u16) {
        self.push(Scalar::from_int(c), kind, i, j);
    }

    fn root2(&mut self, c: i64, kind: Kind, i: u16, j: u16) {
        self.push(Scalar::from_int(c) * Scalar::sqrt2(), kind, i, j);
    }
}

/// `[x, y]` for the ordered pair when a rule is written in that order.
fn rule(x: GeneratorId, y: GeneratorId) -> Option<Vec<(Scalar, GeneratorId)>> {
    use Kind::*;
    let (i, j, k, l) = (x.i, x.j, y.i, y.j);
    let d = delta;
    let mut t = Terms::new();
    match (x.kind, y.kind) {
        (I, _) | (_, I) => {}
        (H, H) | (P, P) | (Q, Q) | (S, S) | (T, T) | (S, U) | (T, V) => {}

        // [H_i, F_jk] = (δ_ij − δ_ik) F_jk
        (H, F) => t.int(d(i, k) - d(i, l), F, k, l),
        // [F_ij, F_kl] = δ_jk F_il − δ_il F_kj + δ_jk δ_il (H_i − H_j)
        (F, F) => {
            t.int(d(j, k), F, i, l);
            t.int(-d(i, l), F, k, j);
            t.int(d(j, k) * d(i, l), H, i, 0);
            t.int(-d(j, k) * d(i, l), H, j, 0);
        }

        (H, P) if k == l => t.int(2 * d(i, k), P, k, k),
        (H, P) => t.int(d(i, k) + d(i, l), P, k, l),
        (H, Q) if k == l => t.int(-2 * d(i, k), Q, k, k),
        (H, Q) => t.int(-(d(i, k) + d(i, l)), Q, k, l),
        // [F_ij, P_kk] = √2 δ_jk P_ik
        (F, P) if k == l => t.root2(d(j, k), P, i, k),
        // [F_ij, P_kl] = δ_jk P_il + δ_jl P_ik + √2 (δ_il δ_jk + δ_ik δ_jl) P_ii
        (F, P) => {
            if i != l {
                t.int(d(j, k), P, i, l);
            }
            if i != k {
                t.int(d(j, l), P, i, k);
            }
            t.root2(d(i, l) * d(j, k) + d(i, k) * d(j, l), P, i, i);
        }
        // [F_ij, Q_kk] = −√2 δ_ik Q_jk
        (F, Q) if k == l => t.root2(-d(i, k), Q, j, k),
        // [F_ij, Q_kl] = −(δ_ik Q_jl + δ_il Q_jk) − √2 (δ_il δ_jk + δ_ik δ_jl) Q_jj
        (F, Q) => {
            if j != l {
                t.int(-d(i, k), Q, j, l);
            }
            if j != k {
                t.int(-d(i, l), Q, j, k);
            }
            t.root2(-(d(i, l) * d(j, k) + d(i, k) * d(j, l)), Q, j, j);
        }
        // [P_ii, Q_jj] = 2 δ_ij H_i
        (P, Q) if i == j && k == l => t.int(2 * d(i, k), H, i, 0),
        // [P_ii, Q_kl] = √2 (δ_ik F_il + δ_il F_ik)
        (P, Q) if i == j => {
            t.root2(d(i, k), F, i, l);
            t.root2(d(i, l), F, i, k);
        }
        // [P_ij, Q_kk] = √2 (δ_ik F_jk + δ_jk F_ik)
        (P, Q) if k == l => {
            t.root2(d(i, k), F, j, k);
            t.root2(d(j, k), F, i, k);
        }
        // [P_ij, Q_kl] = (δ_ik F_jl + δ_jl F_ik + δ_jk F_il + δ_il F_jk) + (δ_ik δ_jl + δ_jk δ_il)(H_i + H_j)
        (P, Q) => {
            t.int(d(i, k), F, j, l);
            t.int(d(j, l), F, i, k);
            t.int(d(j, k), F, i, l);
            t.int(d(i, l), F, j, k);
            let c = d(i, k) * d(j, l) + d(j, k) * d(i, l);
            t.int(c, H, i, 0);
            t.int(c, H, j, 0);
        }

        (H, S) => t.int(d(i, k) + d(i, l), S, k, l),
        (H, T) => t.int(-(d(i, k) + d(i, l)), T, k, l),
        // [F_ij, S_kl] = δ_jk S_il − δ_jl S_ik
        (F, S) => {
            t.int(d(j, k), S, i, l);
            t.int(-d(j, l), S, i, k);
        }
        // [F_ij, T_kl] = −δ_ik T_jl + δ_il T_jk
        (F, T) => {
            t.int(-d(i, k), T, j, l);
            t.int(d(i, l), T, j, k);
        }
        // [S_ij, T_kl] = (−δ_jk F_il − δ_il F_jk + δ_ik F_jl + δ_jl F_ik) + (δ_ik δ_jl − δ_jk δ_il)(H_i + H_j)
        (S, T) => {
            t.int(-d(j, k), F, i, l);
            t.int(-d(i, l), F, j, k);
            t.int(d(i, k), F, j, l);
            t.int(d(j, l), F, i, k);
            let c = d(i, k) * d(j, l) - d(j, k) * d(i, l);
            t.int(c, H, i, 0);
            t.int(c, H, j, 0);
        }

        (H, U) => t.int(d(i, k), U, k, 0),
        (H, V) => t.int(-d(i, k), V, k, 0),
        // [F_ij, U_k] = δ_jk U_i ; [F_ij, V_k] = −δ_ik V_j
        (F, U) => t.int(d(j, k), U, i, 0),
        (F, V) => t.int(-d(i, k), V, j, 0),
        // [T_ij, U_k] = δ_ik V_j − δ_jk V_i ; [S_ij, V_k] = −δ_ik U_j + δ_jk U_i
        (T, U) => {
            t.int(d(i, k), V, j, 0);
            t.int(-d(j, k), V, i, 0);
        }
        (S, V) => {
            t.int(-d(i, k), U, j, 0);
            t.int(d(j, k), U, i, 0);
        }
        // [U_i, U_j] = S_ij ; [V_i, V_j] = −T_ij ; [U_i, V_j] = (1 − δ_ij) F_ij + δ_ij H_i
        (U, U) => t.int(1, S, i, k),
        (V, V) => t.int(-1, T, i, k),
        (U, V) => {
            t.int(1 - d(i, k), F, i, k);
            t.int(d(i, k), H, i, 0);
        }
        _ => return None,
    }
    Some(t.0)
}

/// Checks `[[p,q],r] + [[q,r],p] + [[r,p],q] = 0` on every basis triple.
pub fn verify_jacobi(table: &StructureTable) -> Report {
    let n = table.dim();
    let basis = table.basis();
    let mut violations: Vec<(usize, usize, usize, SparseVec)> = (0..n)
        .into_par_iter()
        .flat_map_iter(|p| {
            let mut found = Vec::new();
            for q in (p + 1)..n {
                for r in (q + 1)..n {
                    let pq = table.get(p, q);
                    let qr = table.get(q, r);
                    let rp = table.get(r, p);
                    if pq.is_zero() && qr.is_zero() && rp.is_zero() {
                        continue;
                    }
                    let mut acc = Accumulator::new();
                    let one = Scalar::one();
                    acc.add_vec(&one, &table.bracket_vec(pq, &SparseVec::unit(r)));
                    acc.add_vec(&one, &table.bracket_vec(qr, &SparseVec::unit(p)));
                    acc.add_vec(&one, &table.bracket_vec(rp, &SparseVec::unit(q)));
                    let res = acc.finish();
                    if !res.is_zero() {
                        found.push((p, q, r, res));
                    }
                }
            }
            found
        })
        .collect();
    violations.sort_by_key(|(p, q, r, _)| (*p, *q, *r));
    let checked = if n >= 3 { n * (n - 1) * (n - 2) / 6 } else { 0 };
    let violations = violations
        .into_iter()
        .map(|(p, q, r, res)| {
            Violation::new(
                [basis.id(p), basis.id(q), basis.id(r)],
                Residual::Element(res.to_element(basis)),
            )
        })
        .collect();
    Report::new("jacobi", checked, violations)
}

/// Checks that every bracket of `small` maps, under the label-preserving
/// injection, to the corresponding bracket of `big`.
pub fn verify_bracket_embedding(small: &StructureTable, big: &StructureTable) -> Report {
    verify_bracket_embedding_with(small, big, |g| g)
}

/// Checks `inject([x, y]) = [inject(x), inject(y)]` on every basis pair of `small`.
pub fn verify_bracket_embedding_with(
    small: &StructureTable,
    big: &StructureTable,
    inject: impl Fn(GeneratorId) -> GeneratorId,
) -> Report {
    let sb = small.basis();
    let mut violations = Vec::new();
    let mut checked = 0;
    for g in sb.ids() {
        if !big.basis().contains(&inject(*g)) {
            violations.push(Violation::new([g], Residual::Note("generator missing in target".into())));
        }
    }
    if !violations.is_empty() {
        return Report::new("bracket-embedding", sb.len(), violations);
    }
    let map = |e: Element| Element::from_terms(e.terms().map(|(g, c)| (inject(*g), c.clone())));
    for p in 0..sb.len() {
        for q in (p + 1)..sb.len() {
            checked += 1;
            let lhs = map(small.get(p, q).to_element(sb));
            let rhs = big
                .bracket_ids(inject(sb.id(p)), inject(sb.id(q)))
                .expect("generators checked above");
            if lhs != rhs {
                violations.push(Violation::new(
                    [sb.id(p), sb.id(q)],
                    Residual::Element(rhs.sub(&lhs)),
                ));
            }
        }
    }
    Report::new("bracket-embedding", checked, violations)
}
