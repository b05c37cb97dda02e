//! Manin triples `(s₊, s₋, g ⊕ t)` and the Drinfeld-double reconstruction.
//!
//! The Cartan-plus-center directions are rotated to `X_k = (H_k + i I_k)/√2`,
//! `x^k = (H_k − i I_k)/√2` (canonical splitting) or, for mixed splittings,
//! partly to `Y_ij = (H_i + i H_j)/√2`, `y^ij = (H_i − i H_j)/√2` with the
//! corresponding `I`'s dropped. `s₊` holds the `+` rotated generators and the
//! positive roots, `s₋` the `−` rotated generators and the negative roots,
//! listed so that `s₋[a]` is paired with `s₊[a]`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::{build_series, LieAlgebra};
use crate::element::{Accumulator, Element, SparseVec};
use crate::error::{Error, Result};
use crate::generator::{Basis, GeneratorId, Kind, Series};
use crate::linalg::{self, Matrix};
use crate::report::{Report, Residual, Violation};
use crate::scalar::Scalar;
use crate::table::StructureTable;
use crate::tensor::Tensor2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SplitMode {
    Canonical,
    Mixed,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SplittingSpec {
    pub mode: SplitMode,
    pub pairs: Vec<(u16, u16)>,
    pub central_set: Vec<u16>,
}

impl SplittingSpec {
    /// Every Cartan index paired with its own central generator.
    pub fn canonical(series: Series, rank: usize) -> Self {
        let m = series.cartan_count(rank) as u16;
        Self { mode: SplitMode::Canonical, pairs: Vec::new(), central_set: (1..=m).collect() }
    }

    pub fn mixed(pairs: Vec<(u16, u16)>, central_set: Vec<u16>) -> Self {
        Self { mode: SplitMode::Mixed, pairs, central_set }
    }

    /// Fills an empty canonical `central_set` and sorts the index lists.
    pub fn normalized(&self, series: Series, rank: usize) -> Self {
        if self.mode == SplitMode::Canonical && self.pairs.is_empty() && self.central_set.is_empty() {
            return Self::canonical(series, rank);
        }
        let mut s = self.clone();
        s.pairs.sort_unstable();
        s.central_set.sort_unstable();
        s
    }

    pub fn validate(&self, series: Series, rank: usize) -> Result<()> {
        series.check_rank(rank)?;
        let m = series.cartan_count(rank) as u16;
        let mut seen = vec![false; m as usize + 1];
        let mut mark = |k: u16| -> Result<()> {
            if k == 0 || k > m {
                return Err(Error::SpecMismatch(format!("Cartan index {k} outside 1..={m}")));
            }
            if std::mem::replace(&mut seen[k as usize], true) {
                return Err(Error::SpecMismatch(format!("Cartan index {k} used twice")));
            }
            Ok(())
        };
        for &(i, j) in &self.pairs {
            mark(i)?;
            mark(j)?;
        }
        for &k in &self.central_set {
            mark(k)?;
        }
        if seen[1..].iter().any(|s| !s) {
            return Err(Error::SpecMismatch("pairs and central_set must cover every Cartan index".into()));
        }
        if self.mode == SplitMode::Canonical && !self.pairs.is_empty() {
            return Err(Error::SpecMismatch("canonical mode takes no pairs".into()));
        }
        Ok(())
    }

    /// Parses `canonical` or `mixed:pairs=1-2,3-4;central=5,6`.
    pub fn parse(s: &str, series: Series, rank: usize) -> Result<Self> {
        let s = s.trim();
        if s == "canonical" {
            return Ok(Self::canonical(series, rank));
        }
        let body = s
            .strip_prefix("mixed:")
            .or_else(|| (s == "mixed").then_some(""))
            .ok_or_else(|| Error::Parse(format!("unknown splitting {s:?}")))?;
        let mut pairs = Vec::new();
        let mut central = Vec::new();
        let num = |t: &str| -> Result<u16> {
            t.trim().parse().map_err(|_| Error::Parse(format!("bad index {t:?} in {s:?}")))
        };
        for part in body.split(';').filter(|p| !p.trim().is_empty()) {
            let (key, val) = part
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("expected key=value in {part:?}")))?;
            let items = val.split(',').filter(|v| !v.trim().is_empty());
            match key.trim() {
                "pairs" => {
                    for item in items {
                        let (a, b) = item
                            .split_once('-')
                            .ok_or_else(|| Error::Parse(format!("pair {item:?} needs i-j")))?;
                        pairs.push((num(a)?, num(b)?));
                    }
                }
                "central" => {
                    for item in items {
                        central.push(num(item)?);
                    }
                }
                other => return Err(Error::Parse(format!("unknown splitting key {other:?}"))),
            }
        }
        let spec = Self::mixed(pairs, central).normalized(series, rank);
        spec.validate(series, rank)?;
        Ok(spec)
    }

    /// Stable textual key, also accepted by [`SplittingSpec::parse`].
    pub fn key(&self) -> String {
        match self.mode {
            SplitMode::Canonical => "canonical".into(),
            SplitMode::Mixed => {
                let pairs: Vec<String> = self.pairs.iter().map(|(i, j)| format!("{i}-{j}")).collect();
                let central: Vec<String> = self.central_set.iter().map(u16::to_string).collect();
                format!("mixed:pairs={};central={}", pairs.join(","), central.join(","))
            }
        }
    }
}

impl fmt::Display for SplittingSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.key())
    }
}

fn minus_i_over_sqrt2() -> Scalar {
    // 1/(i√2) = −i√2/2
    Scalar::from_ratios((0, 1), (0, 1), (0, 1), (-1, 2))
}

/// Change of basis between `{H_k, I_k}` and the rotated `{X_k, x^k}` (plus
/// `{Y_ij, y^ij}` for mixed pairs).
#[derive(Debug, Clone)]
pub struct CartanRotation {
    /// Rotated label → expression in `H`, `I`.
    forward: BTreeMap<GeneratorId, Element>,
    /// `H`/`I` label → expression in rotated labels.
    inverse: BTreeMap<GeneratorId, Element>,
}

impl CartanRotation {
    pub fn for_spec(spec: &SplittingSpec) -> Self {
        let r = Scalar::inv_sqrt2();
        let ir = &Scalar::i() * &r;
        let mut forward = BTreeMap::new();
        let mut inverse = BTreeMap::new();
        let h = |k| Element::generator(GeneratorId::h(k));
        let combo = |a: GeneratorId, ca: &Scalar, b: GeneratorId, cb: &Scalar| {
            Element::from_terms([(a, ca.clone()), (b, cb.clone())])
        };
        for &(i, j) in &spec.pairs {
            let (y, yd) = (GeneratorId::y_plus(i, j), GeneratorId::y_minus(i, j));
            let hj = GeneratorId::h(j);
            forward.insert(y, h(i).scale(&r).add(&Element::term(hj, ir.clone())));
            forward.insert(yd, h(i).scale(&r).sub(&Element::term(hj, ir.clone())));
            inverse.insert(GeneratorId::h(i), combo(y, &r, yd, &r));
            inverse.insert(hj, combo(y, &minus_i_over_sqrt2(), yd, &-minus_i_over_sqrt2()));
        }
        for &k in &spec.central_set {
            let (x, xd) = (GeneratorId::x_plus(k), GeneratorId::x_minus(k));
            let ik = GeneratorId::central(k);
            forward.insert(x, h(k).scale(&r).add(&Element::term(ik, ir.clone())));
            forward.insert(xd, h(k).scale(&r).sub(&Element::term(ik, ir.clone())));
            inverse.insert(GeneratorId::h(k), combo(x, &r, xd, &r));
            inverse.insert(ik, combo(x, &minus_i_over_sqrt2(), xd, &-minus_i_over_sqrt2()));
        }
        Self { forward, inverse }
    }

    pub fn forward(&self, rotated: &GeneratorId) -> Option<&Element> {
        self.forward.get(rotated)
    }

    pub fn inverse(&self, original: &GeneratorId) -> Option<&Element> {
        self.inverse.get(original)
    }

    /// Rewrites rotated labels in terms of `H`, `I`; other labels pass through.
    pub fn to_original(&self, x: &Element) -> Element {
        substitute(x, &self.forward)
    }

    /// Rewrites `H`, `I` labels in terms of rotated ones; other labels pass through.
    pub fn to_rotated(&self, x: &Element) -> Element {
        substitute(x, &self.inverse)
    }

    /// Rotated labels whose `forward∘inverse` round trip is not the identity.
    pub fn round_trip_defects(&self) -> Vec<GeneratorId> {
        self.forward
            .keys()
            .filter(|g| {
                let e = Element::generator(**g);
                self.to_rotated(&self.to_original(&e)) != e
            })
            .chain(self.inverse.keys().filter(|g| {
                let e = Element::generator(**g);
                self.to_original(&self.to_rotated(&e)) != e
            }))
            .copied()
            .collect()
    }
}

fn substitute(x: &Element, map: &BTreeMap<GeneratorId, Element>) -> Element {
    let mut out = Element::zero();
    for (g, c) in x.terms() {
        let img = map.get(g).cloned().unwrap_or_else(|| Element::generator(*g));
        out = out.add(&img.scale(c));
    }
    out
}

/// The canonical rotation of an algebra built by [`build_series`].
pub fn cartan_rotation(alg: &LieAlgebra) -> CartanRotation {
    CartanRotation::for_spec(&SplittingSpec::canonical(alg.series(), alg.rank()))
}

/// The invariant symmetric form of `g ⊕ t` in the oscillator basis:
/// orthonormal on the `H`'s and on the `I`'s, and `⟨R, R'⟩ = 1` for each
/// positive/negative root partner pair.
pub fn invariant_form(a: &GeneratorId, b: &GeneratorId) -> Scalar {
    let one = match (a.kind, b.kind) {
        (Kind::H, Kind::H) | (Kind::I, Kind::I) => a.i == b.i,
        _ => a.partner() == Some(*b),
    };
    if one {
        Scalar::one()
    } else {
        Scalar::zero()
    }
}

fn form_on(basis: &Basis, x: &SparseVec, y: &SparseVec) -> Scalar {
    let mut s = Scalar::zero();
    for (a, ca) in x.iter() {
        for (b, cb) in y.iter() {
            let f = invariant_form(&basis.id(*a), &basis.id(*b));
            if !f.is_zero() {
                s += &(&(ca * cb) * &f);
            }
        }
    }
    s
}

#[derive(Debug, Clone)]
pub struct ManinTriple {
    ambient: LieAlgebra,
    spec: SplittingSpec,
    rotation: CartanRotation,
    /// `s₊` labels followed by `s₋` labels.
    rotated: Basis,
    /// Column `a`: rotated basis vector `a` in ambient coordinates.
    rotated_vecs: Vec<SparseVec>,
    /// Entry `k`: ambient basis vector `k` in rotated coordinates.
    to_rotated: Vec<SparseVec>,
    /// The ambient table transported to the rotated basis.
    rotated_table: StructureTable,
    plus_table: StructureTable,
    minus_table: StructureTable,
    /// `pairing[a][b] = ⟨s₋[a], s₊[b]⟩`.
    pairing: Matrix,
}

/// Splits `alg` into a Manin triple. Closure of both halves, isotropy, and
/// the identity pairing are certified here; any failure is an error.
pub fn split(alg: &LieAlgebra, spec: &SplittingSpec) -> Result<ManinTriple> {
    let spec = spec.normalized(alg.series(), alg.rank());
    spec.validate(alg.series(), alg.rank())?;

    let keep: Vec<GeneratorId> = alg
        .basis()
        .ids()
        .iter()
        .copied()
        .filter(|g| !g.is_central() || spec.central_set.contains(&g.i))
        .collect();
    let ambient = alg.restrict(&keep)?;
    let rotation = CartanRotation::for_spec(&spec);

    let mut plus = Vec::new();
    let mut minus = Vec::new();
    for &(i, j) in &spec.pairs {
        plus.push(GeneratorId::y_plus(i, j));
        minus.push(GeneratorId::y_minus(i, j));
    }
    for &k in &spec.central_set {
        plus.push(GeneratorId::x_plus(k));
        minus.push(GeneratorId::x_minus(k));
    }
    for g in ambient.basis().ids().iter().filter(|g| g.is_positive_root()) {
        plus.push(*g);
        minus.push(g.partner().expect("root has a partner"));
    }
    let vecs = |ids: &[GeneratorId]| -> Result<Vec<SparseVec>> {
        ids.iter()
            .map(|g| ambient.vector(&rotation.to_original(&Element::generator(*g))))
            .collect()
    };
    let plus_vecs = vecs(&plus)?;
    let minus_vecs = vecs(&minus)?;
    let n = plus.len();
    if n != minus.len() || 2 * n != ambient.dim() {
        return Err(Error::SpecMismatch(format!(
            "halves of size {n} and {} do not fill dimension {}",
            minus.len(),
            ambient.dim()
        )));
    }
    let ids: Vec<GeneratorId> = plus.iter().chain(minus.iter()).copied().collect();
    let rotated_vecs: Vec<SparseVec> = plus_vecs.into_iter().chain(minus_vecs).collect();
    let triple = ManinTriple::assemble(ambient, spec, rotation, Basis::new(ids), rotated_vecs)?;

    for (a, b) in triple.closure_failures() {
        let r = &triple.rotated;
        return Err(Error::ClosureFailure { left: r.id(a).to_string(), right: r.id(b).to_string() });
    }
    let basis = triple.ambient.basis();
    for a in 0..n {
        for b in 0..n {
            let expect = if a == b { Scalar::one() } else { Scalar::zero() };
            let zz = form_on(basis, &triple.rotated_vecs[a], &triple.rotated_vecs[b]);
            let ww = form_on(basis, &triple.rotated_vecs[n + a], &triple.rotated_vecs[n + b]);
            if !zz.is_zero() || !ww.is_zero() || triple.pairing[a][b] != expect {
                return Err(Error::SpecMismatch(format!(
                    "pairing is not isotropic/identity at ({}, {})",
                    triple.rotated.id(n + a),
                    triple.rotated.id(b)
                )));
            }
        }
    }
    Ok(triple)
}

impl ManinTriple {
    fn assemble(
        ambient: LieAlgebra,
        spec: SplittingSpec,
        rotation: CartanRotation,
        rotated: Basis,
        rotated_vecs: Vec<SparseVec>,
    ) -> Result<Self> {
        let dim = ambient.dim();
        let n = dim / 2;
        let mut t = vec![vec![Scalar::zero(); dim]; dim];
        for (a, v) in rotated_vecs.iter().enumerate() {
            for (k, c) in v.iter() {
                t[*k][a] = c.clone();
            }
        }
        let inv = linalg::inverse(&t)?;
        let to_rotated: Vec<SparseVec> = (0..dim)
            .map(|k| SparseVec::from_terms((0..dim).map(|a| (a, inv[a][k].clone()))))
            .collect();

        let mut rotated_table = StructureTable::zero(rotated.clone());
        let pairs: Vec<(usize, usize)> = (0..dim).flat_map(|a| ((a + 1)..dim).map(move |b| (a, b))).collect();
        let entries: Vec<(usize, usize, SparseVec)> = pairs
            .into_par_iter()
            .map(|(a, b)| {
                let amb = ambient.table().bracket_vec(&rotated_vecs[a], &rotated_vecs[b]);
                (a, b, express(&amb, &to_rotated))
            })
            .collect();
        for (a, b, v) in entries {
            rotated_table.set(a, b, v);
        }

        let plus_basis = Basis::new(rotated.ids()[..n].to_vec());
        let minus_basis = Basis::new(rotated.ids()[n..].to_vec());
        let mut plus_table = StructureTable::zero(plus_basis);
        let mut minus_table = StructureTable::zero(minus_basis);
        for a in 0..n {
            for b in (a + 1)..n {
                let pp = rotated_table.get(a, b);
                plus_table.set(a, b, SparseVec::from_terms(pp.iter().filter(|(k, _)| *k < n).cloned()));
                let mm = rotated_table.get(n + a, n + b);
                minus_table.set(
                    a,
                    b,
                    SparseVec::from_terms(mm.iter().filter(|(k, _)| *k >= n).map(|(k, c)| (k - n, c.clone()))),
                );
            }
        }
        let basis = ambient.basis();
        let pairing: Matrix = (0..n)
            .map(|a| (0..n).map(|b| form_on(basis, &rotated_vecs[n + a], &rotated_vecs[b])).collect())
            .collect();
        Ok(Self {
            ambient,
            spec,
            rotation,
            rotated,
            rotated_vecs,
            to_rotated,
            rotated_table,
            plus_table,
            minus_table,
            pairing,
        })
    }

    /// Rotated-basis pairs inside one half whose bracket leaves that half.
    fn closure_failures(&self) -> Vec<(usize, usize)> {
        let n = self.half_dim();
        let mut out = Vec::new();
        for a in 0..n {
            for b in (a + 1)..n {
                if self.rotated_table.get(a, b).iter().any(|(k, _)| *k >= n) {
                    out.push((a, b));
                }
                if self.rotated_table.get(n + a, n + b).iter().any(|(k, _)| *k < n) {
                    out.push((n + a, n + b));
                }
            }
        }
        out
    }

    /// The double `g ⊕ t_m` in the original `H, I`, root basis.
    pub fn double(&self) -> &LieAlgebra {
        &self.ambient
    }

    pub fn spec(&self) -> &SplittingSpec {
        &self.spec
    }

    pub fn rotation(&self) -> &CartanRotation {
        &self.rotation
    }

    pub fn half_dim(&self) -> usize {
        self.rotated.len() / 2
    }

    /// `s₊` labels followed by `s₋` labels.
    pub fn rotated_basis(&self) -> &Basis {
        &self.rotated
    }

    pub fn s_plus(&self) -> &[GeneratorId] {
        &self.rotated.ids()[..self.half_dim()]
    }

    pub fn s_minus(&self) -> &[GeneratorId] {
        &self.rotated.ids()[self.half_dim()..]
    }

    /// Rotated basis vector `a` in ambient coordinates.
    pub fn rotated_vector(&self, a: usize) -> &SparseVec {
        &self.rotated_vecs[a]
    }

    /// The `s₊` (resp. `s₋`) halves as elements of the double.
    pub fn s_plus_elements(&self) -> Vec<Element> {
        (0..self.half_dim()).map(|a| self.ambient.element(&self.rotated_vecs[a])).collect()
    }

    pub fn s_minus_elements(&self) -> Vec<Element> {
        let n = self.half_dim();
        (n..2 * n).map(|a| self.ambient.element(&self.rotated_vecs[a])).collect()
    }

    /// Brackets of the double transported directly to the rotated basis.
    pub fn rotated_table(&self) -> &StructureTable {
        &self.rotated_table
    }

    /// Structure constants `f` of `s₊`.
    pub fn plus_table(&self) -> &StructureTable {
        &self.plus_table
    }

    /// Structure constants `c` of `s₋`, indexed like `s₊`.
    pub fn minus_table(&self) -> &StructureTable {
        &self.minus_table
    }

    pub fn pairing(&self) -> &Matrix {
        &self.pairing
    }

    /// Ambient coordinates → rotated coordinates.
    pub fn to_rotated_vec(&self, v: &SparseVec) -> SparseVec {
        express(v, &self.to_rotated)
    }

    /// Rotated coordinates → ambient coordinates.
    pub fn to_ambient_vec(&self, v: &SparseVec) -> SparseVec {
        express(v, &self.rotated_vecs)
    }

    /// An element given in rotated labels, ambient labels, or a mix, in rotated coordinates.
    pub fn rotated_coords(&self, x: &Element) -> Result<SparseVec> {
        let mut acc = Accumulator::new();
        for (g, c) in x.terms() {
            if let Some(a) = self.rotated.position(g) {
                acc.add(a, c);
            } else {
                let k = self.ambient.index(g)?;
                acc.add_vec(c, &self.to_rotated[k]);
            }
        }
        Ok(acc.finish())
    }

    /// Same triple with a replacement pairing matrix. No certification.
    pub fn with_pairing(&self, pairing: Matrix) -> Self {
        Self { pairing, ..self.clone() }
    }

    /// Same triple with replacement `s₋` structure constants. No certification.
    pub fn with_minus_table(&self, minus_table: StructureTable) -> Self {
        Self { minus_table, ..self.clone() }
    }

    /// Same triple with replacement `s₊` structure constants. No certification.
    pub fn with_plus_table(&self, plus_table: StructureTable) -> Self {
        Self { plus_table, ..self.clone() }
    }

    /// Same triple with a replacement rotated-basis table of the double. No certification.
    pub fn with_rotated_table(&self, rotated_table: StructureTable) -> Self {
        Self { rotated_table, ..self.clone() }
    }

    /// Rescales every `s₋` generator by `factor`, keeping the identity pairing
    /// (the form itself is rescaled by `1/factor`). Still a Manin triple, but
    /// no longer self-dual unless `factor = 1`.
    pub fn rescale_minus(&self, factor: &Scalar) -> Result<Self> {
        let n = self.half_dim();
        let vecs: Vec<SparseVec> = self
            .rotated_vecs
            .iter()
            .enumerate()
            .map(|(a, v)| if a >= n { v.scale(factor) } else { v.clone() })
            .collect();
        let mut t = Self::assemble(
            self.ambient.clone(),
            self.spec.clone(),
            self.rotation.clone(),
            self.rotated.clone(),
            vecs,
        )?;
        t.pairing = linalg::identity(n);
        Ok(t)
    }
}

/// `Σ_k v_k · images[k]`.
fn express(v: &SparseVec, images: &[SparseVec]) -> SparseVec {
    let mut acc = Accumulator::new();
    for (k, c) in v.iter() {
        acc.add_vec(c, &images[*k]);
    }
    acc.finish()
}

/// `⟨u, v⟩` for the isotropic form defined by the triple's pairing.
pub fn pairing_eval(triple: &ManinTriple, u: &Element, v: &Element) -> Result<Scalar> {
    let x = triple.rotated_coords(u)?;
    let y = triple.rotated_coords(v)?;
    let mut s = Scalar::zero();
    for (a, ca) in x.iter() {
        for (b, cb) in y.iter() {
            let f = rotated_form(triple, *a, *b);
            if !f.is_zero() {
                s += &(&(ca * cb) * &f);
            }
        }
    }
    Ok(s)
}

fn rotated_form(triple: &ManinTriple, a: usize, b: usize) -> Scalar {
    let n = triple.half_dim();
    match (a >= n, b >= n) {
        (true, false) => triple.pairing[a - n][b].clone(),
        (false, true) => triple.pairing[b - n][a].clone(),
        _ => Scalar::zero(),
    }
}

/// The full double table on the rotated basis, assembled from `f`, `c` and
/// the pairing alone:
///
/// `[z^p, Z_q] = Σ_s ⟨z^p, [Z_q, Z_s]⟩ ẑ_s − Σ_s ⟨Z_q, [z^p, z^s]⟩ Ẑ^s`
///
/// where `ẑ_s ∈ s₋` and `Ẑ^s ∈ s₊` are dual to `Z_s` and `z^s`. For the identity
/// pairing this is `f^p_{q,r} z^r − c^{p,r}_q Z_r`.
pub fn crossed_brackets(triple: &ManinTriple) -> Result<StructureTable> {
    let n = triple.half_dim();
    let f = &triple.plus_table;
    let c = &triple.minus_table;
    let m = &triple.pairing;
    let minv = linalg::inverse(m)?;
    let mut table = StructureTable::zero(triple.rotated.clone());
    for a in 0..n {
        for b in (a + 1)..n {
            table.set(a, b, f.get(a, b).clone());
            let shifted = c.get(a, b).iter().map(|(k, v)| (k + n, v.clone()));
            table.set(n + a, n + b, SparseVec::from_terms(shifted));
        }
    }
    for p in 0..n {
        for q in 0..n {
            let mut acc = Accumulator::new();
            for s in 0..n {
                // ⟨z^p, [Z_q, Z_s]⟩
                let mut along = Scalar::zero();
                for (r, v) in f.get(q, s).iter() {
                    along += &(v * &m[p][*r]);
                }
                if !along.is_zero() {
                    for a in 0..n {
                        if !minv[s][a].is_zero() {
                            acc.add(n + a, &(&along * &minv[s][a]));
                        }
                    }
                }
                // −⟨Z_q, [z^p, z^s]⟩
                let mut against = Scalar::zero();
                for (r, v) in c.get(p, s).iter() {
                    against -= &(v * &m[*r][q]);
                }
                if !against.is_zero() {
                    for b in 0..n {
                        if !minv[b][s].is_zero() {
                            acc.add(b, &(&against * &minv[b][s]));
                        }
                    }
                }
            }
            table.set(n + p, q, acc.finish());
        }
    }
    Ok(table)
}

/// Compares the crossed-bracket reconstruction, transported back to the
/// original basis, with the directly built table entry by entry.
pub fn verify_reconstruction(triple: &ManinTriple) -> Report {
    let crossed = match crossed_brackets(triple) {
        Ok(t) => t,
        Err(e) => {
            return Report::new(
                "reconstruction",
                0,
                vec![Violation::new(["pairing"], Residual::Note(e.to_string()))],
            )
        }
    };
    let amb = triple.double();
    let basis = amb.basis();
    let dim = amb.dim();
    let mut violations = Vec::new();
    let mut checked = 0;
    for k in 0..dim {
        for l in (k + 1)..dim {
            checked += 1;
            let x = &triple.to_rotated[k];
            let y = &triple.to_rotated[l];
            let rebuilt = triple.to_ambient_vec(&crossed.bracket_vec(x, y));
            let direct = amb.table().get(k, l);
            if &rebuilt != direct {
                violations.push(Violation::new(
                    [basis.id(k), basis.id(l)],
                    Residual::Element(amb.element(&rebuilt.sub(direct))),
                ));
            }
        }
    }
    Report::new("reconstruction", checked, violations)
}

fn dense3(table: &StructureTable) -> Vec<Scalar> {
    let n = table.dim();
    let mut out = vec![Scalar::zero(); n * n * n];
    for p in 0..n {
        for q in 0..n {
            for (r, v) in table.get(p, q).iter() {
                out[(p * n + q) * n + r] = v.clone();
            }
        }
    }
    out
}

/// Checks
/// `c^{p,q}_r f^r_{s,t} = c^{p,r}_s f^q_{r,t} + c^{r,q}_s f^p_{r,t} + c^{p,r}_t f^q_{s,r} + c^{r,q}_t f^p_{s,r}`
/// for every `(p, q, s, t)`.
pub fn verify_compatibility(triple: &ManinTriple) -> Report {
    let n = triple.half_dim();
    let f = dense3(&triple.plus_table);
    let c = dense3(&triple.minus_table);
    // f^r_{s,t} = f[(s n + t) n + r] ; c^{p,q}_r = c[(p n + q) n + r]
    let fi = |r: usize, s: usize, t: usize| &f[(s * n + t) * n + r];
    let ci = |p: usize, q: usize, r: usize| &c[(p * n + q) * n + r];
    let mul_acc = |acc: &mut Scalar, a: &Scalar, b: &Scalar| {
        if !a.is_zero() && !b.is_zero() {
            *acc += &(a * b);
        }
    };
    let mut found: Vec<(usize, usize, usize, usize, Scalar)> = (0..n)
        .into_par_iter()
        .flat_map_iter(|p| {
            let mut out = Vec::new();
            for q in 0..n {
                for s in 0..n {
                    for t in 0..n {
                        let mut lhs = Scalar::zero();
                        let mut rhs = Scalar::zero();
                        for r in 0..n {
                            mul_acc(&mut lhs, ci(p, q, r), fi(r, s, t));
                            mul_acc(&mut rhs, ci(p, r, s), fi(q, r, t));
                            mul_acc(&mut rhs, ci(r, q, s), fi(p, r, t));
                            mul_acc(&mut rhs, ci(p, r, t), fi(q, s, r));
                            mul_acc(&mut rhs, ci(r, q, t), fi(p, s, r));
                        }
                        if lhs != rhs {
                            out.push((p, q, s, t, &lhs - &rhs));
                        }
                    }
                }
            }
            out
        })
        .collect();
    found.sort_by_key(|(p, q, s, t, _)| (*p, *q, *s, *t));
    let minus = triple.s_minus();
    let plus = triple.s_plus();
    let violations = found
        .into_iter()
        .map(|(p, q, s, t, res)| {
            Violation::new([minus[p], minus[q], plus[s], plus[t]], Residual::Scalar(res))
        })
        .collect();
    Report::new("compatibility", n * n * n * n, violations)
}

/// Canonical splitting: `c^{p,q}_r = −f^r_{p,q}`. Mixed splitting: `c = −conj_i(f)`.
pub fn verify_self_duality(triple: &ManinTriple) -> Report {
    let n = triple.half_dim();
    let conj = triple.spec.mode == SplitMode::Mixed;
    let mut violations = Vec::new();
    let mut checked = 0;
    for p in 0..n {
        for q in (p + 1)..n {
            checked += 1;
            let f = triple.plus_table.get(p, q);
            let expect = if conj { f.map_coeffs(|v| -v.conj_i()) } else { f.neg() };
            let c = triple.minus_table.get(p, q);
            if c != &expect {
                let diff = c.sub(&expect);
                violations.push(Violation::new(
                    [triple.s_minus()[p], triple.s_minus()[q]],
                    Residual::Element(diff.to_element(triple.plus_table.basis())),
                ));
            }
        }
    }
    Report::new("selfdual", checked, violations)
}

/// Ad-invariance `B([x,y],z) + B(y,[x,z]) = 0` of the symmetric form induced
/// by the pairing, over every basis triple of the double.
pub fn verify_form_invariance(triple: &ManinTriple) -> Report {
    let dim = triple.rotated.len();
    let table = &triple.rotated_table;
    let form_vec = |v: &SparseVec, z: usize| -> Scalar {
        let mut s = Scalar::zero();
        for (a, c) in v.iter() {
            let f = rotated_form(triple, *a, z);
            if !f.is_zero() {
                s += &(c * &f);
            }
        }
        s
    };
    let mut found: Vec<(usize, usize, usize, Scalar)> = (0..dim)
        .into_par_iter()
        .flat_map_iter(|x| {
            let mut out = Vec::new();
            for y in 0..dim {
                for z in 0..dim {
                    let lhs = form_vec(table.get(x, y), z);
                    let rhs = form_vec(table.get(x, z), y);
                    let res = &lhs + &rhs;
                    if !res.is_zero() {
                        out.push((x, y, z, res));
                    }
                }
            }
            out
        })
        .collect();
    found.sort_by_key(|(x, y, z, _)| (*x, *y, *z));
    let r = &triple.rotated;
    let violations = found
        .into_iter()
        .map(|(x, y, z, res)| Violation::new([r.id(x), r.id(y), r.id(z)], Residual::Scalar(res)))
        .collect();
    Report::new("forminv", dim * dim * dim, violations)
}

/// Closure of both halves, re-run on the stored tables (the certificate of [`split`]).
pub fn verify_closure(triple: &ManinTriple) -> Report {
    let n = triple.half_dim();
    let failures = triple.closure_failures();
    let r = &triple.rotated;
    let violations = failures
        .into_iter()
        .map(|(a, b)| {
            Violation::new(
                [r.id(a), r.id(b)],
                Residual::Element(triple.rotated_table.get(a, b).to_element(r)),
            )
        })
        .collect();
    Report::new("closure", n * (n - 1), violations)
}

/// Isotropy of `s±` under the ambient invariant form and identity pairing between them.
pub fn verify_pairing(triple: &ManinTriple) -> Report {
    let n = triple.half_dim();
    let basis = triple.ambient.basis();
    let r = &triple.rotated;
    let mut violations = Vec::new();
    for a in 0..n {
        for b in 0..n {
            let expect = if a == b { Scalar::one() } else { Scalar::zero() };
            let zz = form_on(basis, &triple.rotated_vecs[a], &triple.rotated_vecs[b]);
            let ww = form_on(basis, &triple.rotated_vecs[n + a], &triple.rotated_vecs[n + b]);
            let zw = form_on(basis, &triple.rotated_vecs[n + a], &triple.rotated_vecs[b]);
            if !zz.is_zero() {
                violations.push(Violation::new([r.id(a), r.id(b)], Residual::Scalar(zz)));
            }
            if !ww.is_zero() {
                violations.push(Violation::new([r.id(n + a), r.id(n + b)], Residual::Scalar(ww)));
            }
            if zw != expect || triple.pairing[a][b] != expect {
                violations.push(Violation::new([r.id(n + a), r.id(b)], Residual::Scalar(zw)));
            }
        }
    }
    Report::new("pairing", 3 * n * n, violations)
}

/// `Σ_k (H_k⊗H_k + I_k⊗I_k)` and `Σ_k (x^k⊗X_k + X_k⊗x^k)` as 2-tensors on the
/// double's basis, for a canonical triple.
pub fn cartan_casimir_tensors(triple: &ManinTriple) -> (Tensor2, Tensor2) {
    let amb = triple.double();
    let mut direct = Tensor2::zero();
    let mut rotated = Tensor2::zero();
    let one = Scalar::one();
    for &k in &triple.spec.central_set {
        for g in [GeneratorId::h(k), GeneratorId::central(k)] {
            let v = SparseVec::unit(amb.index(&g).expect("canonical basis"));
            direct.add_outer(&one, &v, &v);
        }
        let x = triple.rotated.position(&GeneratorId::x_plus(k)).expect("rotated X");
        let xd = triple.rotated.position(&GeneratorId::x_minus(k)).expect("rotated x");
        let (vx, vxd) = (&triple.rotated_vecs[x], &triple.rotated_vecs[xd]);
        rotated.add_outer(&one, vxd, vx);
        rotated.add_outer(&one, vx, vxd);
    }
    (direct.finish(), rotated.finish())
}

/// Memoizes triples per `(series, rank, splitting)`.
#[derive(Default)]
pub struct TripleCache {
    inner: Mutex<HashMap<(Series, usize, String), Arc<ManinTriple>>>,
}

impl TripleCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, series: Series, rank: usize, spec: &SplittingSpec) -> Result<Arc<ManinTriple>> {
        let spec = spec.normalized(series, rank);
        let key = (series, rank, spec.key());
        if let Some(t) = self.inner.lock().expect("cache lock").get(&key) {
            return Ok(Arc::clone(t));
        }
        let triple = Arc::new(split(&build_series(series, rank)?, &spec)?);
        self.inner.lock().expect("cache lock").insert(key, Arc::clone(&triple));
        Ok(triple)
    }

    pub fn len(&self) -> usize {
        self.inner.lock().expect("cache lock").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}
