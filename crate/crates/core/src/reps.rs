//! Oscillator (Fock-space) matrix representations.
//!
//! Fermionic representations of A, B and D are exact over `ℚ(i,√2)`.
//! Bosonic representations of A and C are truncated at a total occupation
//! `cutoff` and use `Complex64`; identities are only asserted on the
//! *protected subspace*, the columns whose total occupation leaves room for
//! every creation operator applied along the way.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Debug;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::One;
use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::LieAlgebra;
use crate::double::ManinTriple;
use crate::element::Element;
use crate::error::{Error, Result};
use crate::generator::{enumerate_generators, GeneratorId, Kind, Series};
use crate::report::{Report, Residual, Violation};
use crate::scalar::Scalar;

/// Per-entry tolerance for truncated bosonic checks.
pub const BOSONIC_TOLERANCE: f64 = 1e-12;

/// Matrix entry: exact `Scalar` or floating `Complex64`.
pub trait Entry: Clone + Debug + PartialEq + Send + Sync {
    fn zero() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    fn from_scalar(s: &Scalar) -> Self;
    fn magnitude(&self) -> f64;
    /// Exact entries accept only zero; floating entries accept `|x| ≤ tol`.
    fn negligible(&self, tol: f64) -> bool;
    /// Whitespace-separated fields for coordinate-list dumps.
    fn dump_fields(&self) -> String;
}

impl Entry for Scalar {
    fn zero() -> Self {
        Scalar::zero()
    }
    fn is_zero(&self) -> bool {
        Scalar::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn from_scalar(s: &Scalar) -> Self {
        s.clone()
    }
    fn magnitude(&self) -> f64 {
        let (re, im) = self.to_f64_pair();
        re.hypot(im)
    }
    fn negligible(&self, _tol: f64) -> bool {
        Scalar::is_zero(self)
    }
    fn dump_fields(&self) -> String {
        self.to_strings().join(" ")
    }
}

impl Entry for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn is_zero(&self) -> bool {
        self.re == 0.0 && self.im == 0.0
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn from_scalar(s: &Scalar) -> Self {
        let (re, im) = s.to_f64_pair();
        Complex64::new(re, im)
    }
    fn magnitude(&self) -> f64 {
        self.norm()
    }
    fn negligible(&self, tol: f64) -> bool {
        self.norm() <= tol
    }
    fn dump_fields(&self) -> String {
        if self.im == 0.0 {
            format!("{}", self.re)
        } else {
            format!("{} {}", self.re, self.im)
        }
    }
}

/// Square sparse matrix stored by columns; each column is sorted by row with no stored zeros.
#[derive(Clone, Debug, PartialEq)]
pub struct SparseMatrix<T> {
    dim: usize,
    cols: Vec<Vec<(usize, T)>>,
}

impl<T: Entry> SparseMatrix<T> {
    pub fn zeros(dim: usize) -> Self {
        Self { dim, cols: vec![Vec::new(); dim] }
    }

    pub fn identity(dim: usize) -> Self {
        Self::scalar(dim, &T::from_scalar(&Scalar::one()))
    }

    pub fn scalar(dim: usize, c: &T) -> Self {
        if c.is_zero() {
            return Self::zeros(dim);
        }
        Self { dim, cols: (0..dim).map(|k| vec![(k, c.clone())]).collect() }
    }

    /// Sums duplicate `(row, col)` entries.
    pub fn from_triplets(dim: usize, entries: impl IntoIterator<Item = (usize, usize, T)>) -> Self {
        let mut cols: Vec<BTreeMap<usize, T>> = vec![BTreeMap::new(); dim];
        for (r, c, v) in entries {
            assert!(r < dim && c < dim, "entry ({r}, {c}) outside a {dim}×{dim} matrix");
            let slot = cols[c].entry(r).or_insert_with(T::zero);
            *slot = slot.add(&v);
        }
        Self::from_columns(dim, cols)
    }

    fn from_columns(dim: usize, cols: Vec<BTreeMap<usize, T>>) -> Self {
        let cols = cols.into_iter().map(|c| c.into_iter().filter(|(_, v)| !v.is_zero()).collect()).collect();
        Self { dim, cols }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn column(&self, c: usize) -> &[(usize, T)] {
        &self.cols[c]
    }

    pub fn get(&self, r: usize, c: usize) -> T {
        self.cols[c].iter().find(|(k, _)| *k == r).map_or_else(T::zero, |(_, v)| v.clone())
    }

    pub fn nnz(&self) -> usize {
        self.cols.iter().map(Vec::len).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.cols.iter().all(Vec::is_empty)
    }

    /// Nonzero entries ordered by `(row, col)`.
    pub fn triplets(&self) -> Vec<(usize, usize, T)> {
        let mut out: Vec<_> =
            self.cols.iter().enumerate().flat_map(|(c, col)| col.iter().map(move |(r, v)| (*r, c, v.clone()))).collect();
        out.sort_by_key(|(r, c, _)| (*r, *c));
        out
    }

    pub fn transpose(&self) -> Self {
        Self::from_triplets(self.dim, self.triplets().into_iter().map(|(r, c, v)| (c, r, v)))
    }

    pub fn scale(&self, k: &T) -> Self {
        let cols = self
            .cols
            .iter()
            .map(|col| col.iter().map(|(r, v)| (*r, v.mul(k))).filter(|(_, v)| !v.is_zero()).collect())
            .collect();
        Self { dim: self.dim, cols }
    }

    pub fn add_scaled(&self, k: &T, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim);
        let cols = self
            .cols
            .iter()
            .zip(&other.cols)
            .map(|(a, b)| {
                let mut acc: BTreeMap<usize, T> = a.iter().cloned().collect();
                for (r, v) in b {
                    let slot = acc.entry(*r).or_insert_with(T::zero);
                    *slot = slot.add(&v.mul(k));
                }
                acc
            })
            .collect();
        Self::from_columns(self.dim, cols)
    }

    pub fn add(&self, other: &Self) -> Self {
        self.add_scaled(&T::from_scalar(&Scalar::one()), other)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add_scaled(&T::from_scalar(&Scalar::from_int(-1)), other)
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim);
        let cols = other
            .cols
            .iter()
            .map(|col| {
                let mut acc: BTreeMap<usize, T> = BTreeMap::new();
                for (k, b) in col {
                    for (r, a) in &self.cols[*k] {
                        let slot = acc.entry(*r).or_insert_with(T::zero);
                        *slot = slot.add(&a.mul(b));
                    }
                }
                acc
            })
            .collect();
        Self::from_columns(self.dim, cols)
    }

    /// `AB − BA`
    pub fn commutator(&self, other: &Self) -> Self {
        self.mul(other).sub(&other.mul(self))
    }

    /// `AB + BA`
    pub fn anticommutator(&self, other: &Self) -> Self {
        self.mul(other).add(&other.mul(self))
    }

    /// Largest entry magnitude over the selected columns.
    pub fn max_magnitude_where(&self, keep: impl Fn(usize) -> bool) -> f64 {
        self.cols
            .iter()
            .enumerate()
            .filter(|(c, _)| keep(*c))
            .flat_map(|(_, col)| col.iter().map(|(_, v)| v.magnitude()))
            .fold(0.0, f64::max)
    }

    /// True when every entry in the selected columns is negligible.
    pub fn negligible_where(&self, tol: f64, keep: impl Fn(usize) -> bool) -> bool {
        self.cols.iter().enumerate().filter(|(c, _)| keep(*c)).all(|(_, col)| col.iter().all(|(_, v)| v.negligible(tol)))
    }

    /// Coordinate-list text: one `row col <fields>` line per nonzero entry.
    pub fn to_coo(&self) -> String {
        let mut s = String::new();
        for (r, c, v) in self.triplets() {
            s.push_str(&format!("{r} {c} {}\n", v.dump_fields()));
        }
        s
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Statistics {
    Fermionic,
    Bosonic,
}

/// Occupation-number basis. Fermionic states are ordered by the binary value
/// of the occupation string (mode 1 is the lowest bit); bosonic states by
/// total occupation, then lexicographically.
#[derive(Debug, Clone)]
pub struct FockBasis {
    mode_count: usize,
    statistics: Statistics,
    cutoff: Option<u32>,
    states: Vec<Vec<u32>>,
    index: HashMap<Vec<u32>, usize>,
}

impl FockBasis {
    pub fn fermionic(mode_count: usize) -> Result<Self> {
        if mode_count == 0 || mode_count > 16 {
            return Err(Error::Representation(format!("fermionic mode count {mode_count} outside 1..=16")));
        }
        let states =
            (0..1usize << mode_count).map(|m| (0..mode_count).map(|k| ((m >> k) & 1) as u32).collect()).collect();
        Ok(Self::from_states(mode_count, Statistics::Fermionic, None, states))
    }

    pub fn bosonic(mode_count: usize, cutoff: u32) -> Result<Self> {
        if mode_count == 0 {
            return Err(Error::Representation("bosonic basis needs at least one mode".into()));
        }
        let mut states = Vec::new();
        let mut cur = vec![0u32; mode_count];
        fill_bosonic(&mut cur, 0, cutoff, &mut states);
        states.sort_by(|a: &Vec<u32>, b| (a.iter().sum::<u32>(), a).cmp(&(b.iter().sum::<u32>(), b)));
        Ok(Self::from_states(mode_count, Statistics::Bosonic, Some(cutoff), states))
    }

    fn from_states(mode_count: usize, statistics: Statistics, cutoff: Option<u32>, states: Vec<Vec<u32>>) -> Self {
        let index = states.iter().enumerate().map(|(k, s)| (s.clone(), k)).collect();
        Self { mode_count, statistics, cutoff, states, index }
    }

    pub fn mode_count(&self) -> usize {
        self.mode_count
    }

    pub fn statistics(&self) -> Statistics {
        self.statistics
    }

    pub fn cutoff(&self) -> Option<u32> {
        self.cutoff
    }

    pub fn dim(&self) -> usize {
        self.states.len()
    }

    pub fn state(&self, k: usize) -> &[u32] {
        &self.states[k]
    }

    pub fn position(&self, occupation: &[u32]) -> Option<usize> {
        self.index.get(occupation).copied()
    }

    pub fn total(&self, k: usize) -> u32 {
        self.states[k].iter().sum()
    }

    /// Columns on which a product raising total occupation by at most `raise` is untruncated.
    pub fn protected(&self, k: usize, raise: u32) -> bool {
        match self.cutoff {
            None => true,
            Some(cut) => self.total(k) + raise <= cut,
        }
    }

    /// `a_i†` (1-based mode) with the sign string over lower-indexed modes.
    pub fn fermionic_creation(&self, i: usize) -> SparseMatrix<Scalar> {
        assert_eq!(self.statistics, Statistics::Fermionic);
        let m = i - 1;
        let entries = self.states.iter().enumerate().filter(|(_, s)| s[m] == 0).map(|(c, s)| {
            let parity: u32 = s[..m].iter().sum();
            let mut t = s.clone();
            t[m] = 1;
            let sign = if parity % 2 == 0 { Scalar::one() } else { Scalar::from_int(-1) };
            (self.index[&t], c, sign)
        });
        SparseMatrix::from_triplets(self.dim(), entries.collect::<Vec<_>>())
    }

    /// Truncated `b_i†`: `|…k…⟩ ↦ √(k+1)|…k+1…⟩` while the total stays within the cutoff.
    pub fn bosonic_creation(&self, i: usize) -> SparseMatrix<Complex64> {
        assert_eq!(self.statistics, Statistics::Bosonic);
        let m = i - 1;
        let entries = self.states.iter().enumerate().filter_map(|(c, s)| {
            let mut t = s.clone();
            t[m] += 1;
            let r = *self.index.get(&t)?;
            Some((r, c, Complex64::new(f64::from(s[m] + 1).sqrt(), 0.0)))
        });
        SparseMatrix::from_triplets(self.dim(), entries.collect::<Vec<_>>())
    }
}

fn fill_bosonic(cur: &mut Vec<u32>, pos: usize, left: u32, out: &mut Vec<Vec<u32>>) {
    if pos == cur.len() {
        out.push(cur.clone());
        return;
    }
    for k in 0..=left {
        cur[pos] = k;
        fill_bosonic(cur, pos + 1, left - k, out);
    }
    cur[pos] = 0;
}

/// A representation `ρ` of the extended algebra on a Fock space.
#[derive(Debug, Clone)]
pub struct MatrixRep<T> {
    series: Series,
    rank: usize,
    basis: FockBasis,
    map: BTreeMap<GeneratorId, SparseMatrix<T>>,
    central_values: Vec<BigRational>,
}

pub type ExactRep = MatrixRep<Scalar>;
pub type FloatRep = MatrixRep<Complex64>;

impl<T: Entry> MatrixRep<T> {
    pub fn series(&self) -> Series {
        self.series
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn basis(&self) -> &FockBasis {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.dim()
    }

    /// `λ_k` with `ρ(I_k) = λ_k·1`, indexed from `I_1`.
    pub fn central_values(&self) -> &[BigRational] {
        &self.central_values
    }

    pub fn generators(&self) -> impl Iterator<Item = (&GeneratorId, &SparseMatrix<T>)> {
        self.map.iter()
    }

    pub fn get(&self, g: &GeneratorId) -> Option<&SparseMatrix<T>> {
        self.map.get(g)
    }

    /// Replaces one generator's matrix; for building broken fixtures.
    pub fn with_matrix(&self, g: GeneratorId, m: SparseMatrix<T>) -> Self {
        let mut out = self.clone();
        out.map.insert(g, m);
        out
    }

    /// `ρ` extended linearly to an element of the ambient basis.
    pub fn image(&self, x: &Element) -> Result<SparseMatrix<T>> {
        let mut acc = SparseMatrix::zeros(self.dim());
        for (g, c) in x.terms() {
            let m = self.map.get(g).ok_or_else(|| Error::ForeignGenerator(g.to_string()))?;
            acc = acc.add_scaled(&T::from_scalar(c), m);
        }
        Ok(acc)
    }

    /// Writes `<label>.coo` per generator into `dir`, in basis order of labels.
    pub fn dump(&self, dir: &Path) -> io::Result<Vec<PathBuf>> {
        fs::create_dir_all(dir)?;
        let mut written = Vec::new();
        for (g, m) in &self.map {
            let path = dir.join(format!("{}.coo", g.to_string().replace(',', "_").replace('^', "")));
            fs::write(&path, m.to_coo())?;
            written.push(path);
        }
        Ok(written)
    }
}

/// Number of creation operators a generator applies, an upper bound on how
/// far it can push total occupation above the starting state.
pub fn raise(g: &GeneratorId) -> u32 {
    match g.kind {
        Kind::P => 2,
        Kind::S => 2,
        Kind::U => 1,
        _ => 0,
    }
}

fn element_raise(x: &Element) -> u32 {
    x.terms().map(|(g, _)| raise(g)).max().unwrap_or(0)
}

fn mode_count(series: Series, rank: usize) -> usize {
    series.cartan_count(rank)
}

fn resolve_central(series: Series, rank: usize, central: Option<&[BigRational]>) -> Result<Vec<BigRational>> {
    let n = series.cartan_count(rank);
    match central {
        None => Ok(vec![BigRational::one(); n]),
        Some(v) if v.len() == n => Ok(v.to_vec()),
        Some(v) => Err(Error::Representation(format!("expected {n} central values, got {}", v.len()))),
    }
}

/// Builds every generator from ladder operators. `h_shift` is the constant in
/// `ρ(H_i) = c_i†c_i + h_shift`: `−½` for fermions, `+½` for bosons.
fn assemble<T: Entry>(
    series: Series,
    rank: usize,
    dim: usize,
    cre: &[SparseMatrix<T>],
    ann: &[SparseMatrix<T>],
    h_shift: &Scalar,
    central: &[BigRational],
) -> Result<BTreeMap<GeneratorId, SparseMatrix<T>>> {
    let r2 = T::from_scalar(&Scalar::inv_sqrt2());
    let minus = T::from_scalar(&Scalar::from_int(-1));
    let id = SparseMatrix::<T>::identity(dim);
    let c = |k: u16| &cre[k as usize - 1];
    let a = |k: u16| &ann[k as usize - 1];
    let mut map = BTreeMap::new();
    for g in enumerate_generators(series, rank)? {
        let (i, j) = (g.i, g.j);
        let m = match g.kind {
            Kind::H => c(i).mul(a(i)).add_scaled(&T::from_scalar(h_shift), &id),
            Kind::I => SparseMatrix::scalar(dim, &T::from_scalar(&Scalar::one().scale(&central[i as usize - 1]))),
            Kind::F => c(i).mul(a(j)),
            Kind::P if i == j => c(i).mul(c(i)).scale(&r2),
            Kind::P => c(i).mul(c(j)),
            Kind::Q if i == j => a(i).mul(a(i)).scale(&r2).scale(&minus),
            Kind::Q => a(i).mul(a(j)).scale(&minus),
            Kind::S => c(i).mul(c(j)),
            Kind::T => a(i).mul(a(j)).scale(&minus),
            Kind::U => c(i).scale(&r2),
            Kind::V => a(i).scale(&r2),
            _ => return Err(Error::Representation(format!("no oscillator realization for {g}"))),
        };
        map.insert(g, m);
    }
    Ok(map)
}

/// Exact fermionic representation of A (`N = n+1` modes), B or D (`N = n`).
/// `central` defaults to `λ_k = 1`.
pub fn fermionic_rep(series: Series, rank: usize, central: Option<&[BigRational]>) -> Result<ExactRep> {
    series.check_rank(rank)?;
    if series == Series::C {
        return Err(Error::Representation("series C has no fermionic realization".into()));
    }
    let central = resolve_central(series, rank, central)?;
    let basis = FockBasis::fermionic(mode_count(series, rank))?;
    let cre: Vec<_> = (1..=basis.mode_count()).map(|i| basis.fermionic_creation(i)).collect();
    let ann: Vec<_> = cre.iter().map(SparseMatrix::transpose).collect();
    let map = assemble(series, rank, basis.dim(), &cre, &ann, &Scalar::rational(-1, 2), &central)?;
    Ok(MatrixRep { series, rank, basis, map, central_values: central })
}

/// Truncated bosonic representation of A (`N = n+1` modes) or C (`N = n`), `cutoff ≥ 4`.
pub fn bosonic_rep(series: Series, rank: usize, cutoff: u32, central: Option<&[BigRational]>) -> Result<FloatRep> {
    series.check_rank(rank)?;
    if !matches!(series, Series::A | Series::C) {
        return Err(Error::Representation(format!("series {series} has no bosonic realization")));
    }
    if cutoff < 4 {
        return Err(Error::Representation(format!("cutoff {cutoff} is below the minimum of 4")));
    }
    let central = resolve_central(series, rank, central)?;
    let basis = FockBasis::bosonic(mode_count(series, rank), cutoff)?;
    let cre: Vec<_> = (1..=basis.mode_count()).map(|i| basis.bosonic_creation(i)).collect();
    let ann: Vec<_> = cre.iter().map(SparseMatrix::transpose).collect();
    let map = assemble(series, rank, basis.dim(), &cre, &ann, &Scalar::rational(1, 2), &central)?;
    Ok(MatrixRep { series, rank, basis, map, central_values: central })
}

fn mismatch(check: &str, msg: String) -> Report {
    Report::new(check, 0, vec![Violation::new(Vec::<String>::new(), Residual::Note(msg))])
}

/// Checks `[ρ(x), ρ(y)] = ρ([x, y])` for every generator pair; bosonic
/// residuals are only inspected on the protected subspace of the pair.
pub fn verify_rep_homomorphism<T: Entry>(rep: &MatrixRep<T>, alg: &LieAlgebra) -> Report {
    if rep.series != alg.series() || rep.rank != alg.rank() {
        return mismatch(
            "rep",
            format!("representation of {}{} against algebra {}{}", rep.series, rep.rank, alg.series(), alg.rank()),
        );
    }
    let ids = alg.basis().ids().to_vec();
    if let Some(g) = ids.iter().find(|g| !rep.map.contains_key(g)) {
        return mismatch("rep", format!("generator {g} has no matrix"));
    }
    let n = ids.len();
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|p| ((p + 1)..n).map(move |q| (p, q))).collect();
    let violations: Vec<Violation> = pairs
        .par_iter()
        .filter_map(|&(p, q)| {
            let (x, y) = (&ids[p], &ids[q]);
            let lhs = rep.map[x].commutator(&rep.map[y]);
            let bracket = alg.element(alg.table().get(p, q));
            let rhs = match rep.image(&bracket) {
                Ok(m) => m,
                Err(e) => return Some(Violation::new([*x, *y], Residual::Note(e.to_string()))),
            };
            let diff = lhs.sub(&rhs);
            let deg = raise(x) + raise(y);
            let keep = |c: usize| rep.basis.protected(c, deg);
            if diff.negligible_where(BOSONIC_TOLERANCE, keep) {
                None
            } else {
                Some(Violation::new([*x, *y], Residual::Float(diff.max_magnitude_where(keep))))
            }
        })
        .collect();
    Report::new("rep", pairs.len(), violations)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ProductKind {
    Anticommutator,
    Square,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CasimirTerm {
    pub left: Element,
    pub right: Element,
    pub kind: ProductKind,
}

/// Quadratic element `Σ ρ(l)ρ(r) + ρ(r)ρ(l)` (anticommutator) or `Σ ρ(l)²` (square).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CasimirElement {
    pub terms: Vec<CasimirTerm>,
}

impl CasimirElement {
    /// `C₂ = Σ H_i² + Σ_{α>0} [X_α, X_{−α}]₊`.
    pub fn quadratic(alg: &LieAlgebra) -> Self {
        let mut terms = Vec::new();
        for g in alg.basis().ids() {
            if g.kind == Kind::H {
                terms.push(CasimirTerm { left: (*g).into(), right: (*g).into(), kind: ProductKind::Square });
            }
        }
        for g in alg.basis().ids() {
            if let (true, Some(partner)) = (g.is_positive_root(), g.partner()) {
                terms.push(CasimirTerm { left: (*g).into(), right: partner.into(), kind: ProductKind::Anticommutator });
            }
        }
        Self { terms }
    }

    /// `C_D = Σ_p [z^p, Z_p]₊` over the dual bases of a Manin triple with identity pairing.
    pub fn of_double(triple: &ManinTriple) -> Self {
        let terms = triple
            .s_minus_elements()
            .into_iter()
            .zip(triple.s_plus_elements())
            .map(|(z, zz)| CasimirTerm { left: z, right: zz, kind: ProductKind::Anticommutator })
            .collect();
        Self { terms }
    }

    pub fn evaluate<T: Entry>(&self, rep: &MatrixRep<T>) -> Result<SparseMatrix<T>> {
        let mut acc = SparseMatrix::zeros(rep.dim());
        for t in &self.terms {
            let l = rep.image(&t.left)?;
            let piece = match t.kind {
                ProductKind::Square => l.mul(&l),
                ProductKind::Anticommutator => l.anticommutator(&rep.image(&t.right)?),
            };
            acc = acc.add(&piece);
        }
        Ok(acc)
    }

    /// Creation-operator budget of the worst product.
    pub fn raise(&self) -> u32 {
        self.terms.iter().map(|t| element_raise(&t.left) + element_raise(&t.right)).max().unwrap_or(0)
    }
}

/// Checks that `ρ(C)` commutes with every represented generator.
pub fn casimir_check<T: Entry>(rep: &MatrixRep<T>, cas: &CasimirElement) -> Report {
    let c = match cas.evaluate(rep) {
        Ok(c) => c,
        Err(e) => return mismatch("casimir", e.to_string()),
    };
    let ids: Vec<_> = rep.map.keys().copied().collect();
    let violations: Vec<Violation> = ids
        .par_iter()
        .filter_map(|g| {
            let res = c.commutator(&rep.map[g]);
            let keep = |k: usize| rep.basis.protected(k, cas.raise() + raise(g));
            if res.negligible_where(BOSONIC_TOLERANCE, keep) {
                None
            } else {
                Some(Violation::new([*g], Residual::Float(res.max_magnitude_where(keep))))
            }
        })
        .collect();
    Report::new("casimir", ids.len(), violations)
}
