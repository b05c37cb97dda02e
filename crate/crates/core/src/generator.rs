//! Series tags, generator labels and ordered bases.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Series {
    A,
    B,
    C,
    D,
}

impl Series {
    pub const ALL: [Series; 4] = [Series::A, Series::B, Series::C, Series::D];

    pub fn min_rank(self) -> usize {
        match self {
            Series::D => 2,
            _ => 1,
        }
    }

    pub fn check_rank(self, rank: usize) -> Result<()> {
        if rank < self.min_rank() || rank > 64 {
            return Err(Error::RankOutOfRange { series: self, rank });
        }
        Ok(())
    }

    /// Number of Cartan generators `H_i` (and central `I_i`): `n + 1` for A, `n` otherwise.
    pub fn cartan_count(self, rank: usize) -> usize {
        match self {
            Series::A => rank + 1,
            _ => rank,
        }
    }

    /// Dimension of the simple (A: reductive `gl`) part, without the central extension.
    pub fn simple_dim(self, rank: usize) -> usize {
        let n = rank;
        match self {
            Series::A => (n + 1) * (n + 1),
            Series::B | Series::C => n * (2 * n + 1),
            Series::D => n * (2 * n - 1),
        }
    }

    /// Dimension including the central generators.
    pub fn extended_dim(self, rank: usize) -> usize {
        self.simple_dim(rank) + self.cartan_count(rank)
    }
}

impl fmt::Display for Series {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Series::A => "A",
            Series::B => "B",
            Series::C => "C",
            Series::D => "D",
        };
        f.write_str(s)
    }
}

impl FromStr for Series {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "A" | "a" => Ok(Series::A),
            "B" | "b" => Ok(Series::B),
            "C" | "c" => Ok(Series::C),
            "D" | "d" => Ok(Series::D),
            other => Err(Error::Parse(format!("unknown series {other:?}"))),
        }
    }
}

/// Generator families. `X`/`XDual` are the rotated Cartan-plus-center
/// generators `X_i`, `x^i`; `Y`/`YDual` are the pair-mixed Cartan generators
/// `(H_i ± i·H_j)/√2` used by mixed splittings.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Kind {
    H,
    I,
    F,
    P,
    Q,
    S,
    T,
    U,
    V,
    X,
    XDual,
    Y,
    YDual,
}

impl Kind {
    fn two_indices(self) -> bool {
        matches!(
            self,
            Kind::F | Kind::P | Kind::Q | Kind::S | Kind::T | Kind::Y | Kind::YDual
        )
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GeneratorId {
    pub kind: Kind,
    pub i: u16,
    /// Second index; zero for single-index kinds.
    pub j: u16,
}

impl GeneratorId {
    pub const fn new(kind: Kind, i: u16, j: u16) -> Self {
        Self { kind, i, j }
    }
    pub const fn h(i: u16) -> Self {
        Self::new(Kind::H, i, 0)
    }
    pub const fn central(i: u16) -> Self {
        Self::new(Kind::I, i, 0)
    }
    pub const fn f(i: u16, j: u16) -> Self {
        Self::new(Kind::F, i, j)
    }
    pub const fn p(i: u16, j: u16) -> Self {
        Self::new(Kind::P, i, j)
    }
    pub const fn q(i: u16, j: u16) -> Self {
        Self::new(Kind::Q, i, j)
    }
    pub const fn s(i: u16, j: u16) -> Self {
        Self::new(Kind::S, i, j)
    }
    pub const fn t(i: u16, j: u16) -> Self {
        Self::new(Kind::T, i, j)
    }
    pub const fn u(i: u16) -> Self {
        Self::new(Kind::U, i, 0)
    }
    pub const fn v(i: u16) -> Self {
        Self::new(Kind::V, i, 0)
    }
    pub const fn x_plus(i: u16) -> Self {
        Self::new(Kind::X, i, 0)
    }
    pub const fn x_minus(i: u16) -> Self {
        Self::new(Kind::XDual, i, 0)
    }
    pub const fn y_plus(i: u16, j: u16) -> Self {
        Self::new(Kind::Y, i, j)
    }
    pub const fn y_minus(i: u16, j: u16) -> Self {
        Self::new(Kind::YDual, i, j)
    }

    pub fn is_cartan(&self) -> bool {
        self.kind == Kind::H
    }

    pub fn is_central(&self) -> bool {
        self.kind == Kind::I
    }

    /// Cartan, central, or one of the rotated/mixed Cartan-plus-center labels.
    pub fn is_toral(&self) -> bool {
        matches!(
            self.kind,
            Kind::H | Kind::I | Kind::X | Kind::XDual | Kind::Y | Kind::YDual
        )
    }

    pub fn is_positive_root(&self) -> bool {
        match self.kind {
            Kind::F => self.i < self.j,
            Kind::P | Kind::S | Kind::U => true,
            _ => false,
        }
    }

    pub fn is_negative_root(&self) -> bool {
        match self.kind {
            Kind::F => self.i > self.j,
            Kind::Q | Kind::T | Kind::V => true,
            _ => false,
        }
    }

    /// The opposite-root generator paired with this one (`F_ij ↔ F_ji`, `P ↔ Q`, `S ↔ T`, `U ↔ V`).
    pub fn partner(&self) -> Option<GeneratorId> {
        let (i, j) = (self.i, self.j);
        Some(match self.kind {
            Kind::F => Self::f(j, i),
            Kind::P => Self::q(i, j),
            Kind::Q => Self::p(i, j),
            Kind::S => Self::t(i, j),
            Kind::T => Self::s(i, j),
            Kind::U => Self::v(i),
            Kind::V => Self::u(i),
            _ => return None,
        })
    }

    /// Cartan weight of a root generator: eigenvalue of `ad H_k` for `k = 1..=cartan_count`.
    pub fn weight(&self, cartan_count: usize) -> Vec<i64> {
        let mut w = vec![0i64; cartan_count];
        let (i, j) = (self.i as usize, self.j as usize);
        let mut bump = |k: usize, by: i64| {
            if (1..=cartan_count).contains(&k) {
                w[k - 1] += by;
            }
        };
        match self.kind {
            Kind::F => {
                bump(i, 1);
                bump(j, -1);
            }
            Kind::P | Kind::S => {
                bump(i, 1);
                bump(j, 1);
            }
            Kind::Q | Kind::T => {
                bump(i, -1);
                bump(j, -1);
            }
            Kind::U => bump(i, 1),
            Kind::V => bump(i, -1),
            _ => {}
        }
        w
    }

    /// Checks index ranges and ordering for a generator of the given series and rank.
    pub fn belongs_to(&self, series: Series, rank: usize) -> bool {
        let m = series.cartan_count(rank) as u16;
        let (i, j) = (self.i, self.j);
        let in_range = |k: u16| (1..=m).contains(&k);
        match self.kind {
            Kind::H | Kind::I | Kind::X | Kind::XDual => in_range(i) && j == 0,
            Kind::F => in_range(i) && in_range(j) && i != j,
            Kind::P | Kind::Q => series == Series::C && in_range(i) && in_range(j) && i <= j,
            Kind::S | Kind::T => {
                matches!(series, Series::B | Series::D) && in_range(i) && in_range(j) && i < j
            }
            Kind::U | Kind::V => series == Series::B && in_range(i) && j == 0,
            Kind::Y | Kind::YDual => in_range(i) && in_range(j) && i != j,
        }
    }
}

impl fmt::Display for GeneratorId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self.kind {
            Kind::H => "H",
            Kind::I => "I",
            Kind::F => "F",
            Kind::P => "P",
            Kind::Q => "Q",
            Kind::S => "S",
            Kind::T => "T",
            Kind::U => "U",
            Kind::V => "V",
            Kind::X => "X",
            Kind::XDual => "x^",
            Kind::Y => "Y",
            Kind::YDual => "y^",
        };
        if self.kind.two_indices() {
            write!(f, "{name}{},{}", self.i, self.j)
        } else {
            write!(f, "{name}{}", self.i)
        }
    }
}

impl fmt::Debug for GeneratorId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl FromStr for GeneratorId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("bad generator label {s:?}"));
        let (kind, rest) = if let Some(r) = s.strip_prefix("x^") {
            (Kind::XDual, r)
        } else if let Some(r) = s.strip_prefix("y^") {
            (Kind::YDual, r)
        } else {
            let mut chars = s.chars();
            let k = match chars.next().ok_or_else(bad)? {
                'H' => Kind::H,
                'I' => Kind::I,
                'F' => Kind::F,
                'P' => Kind::P,
                'Q' => Kind::Q,
                'S' => Kind::S,
                'T' => Kind::T,
                'U' => Kind::U,
                'V' => Kind::V,
                'X' => Kind::X,
                'Y' => Kind::Y,
                _ => return Err(bad()),
            };
            (k, chars.as_str())
        };
        let idx: Vec<u16> = rest
            .split(',')
            .map(|p| p.parse::<u16>().map_err(|_| bad()))
            .collect::<Result<_>>()?;
        match (kind.two_indices(), idx.as_slice()) {
            (true, [i, j]) if *i > 0 && *j > 0 => Ok(Self::new(kind, *i, *j)),
            (false, [i]) if *i > 0 => Ok(Self::new(kind, *i, 0)),
            _ => Err(bad()),
        }
    }
}

impl Serialize for GeneratorId {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for GeneratorId {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Canonical generator ordering: all `H` ascending, all `I` ascending, the
/// positive roots (`F_ij` with `i<j`, then `P`, `S`, `U`, each lexicographic),
/// then the negative roots mirroring the positive list one-for-one.
pub fn enumerate_generators(series: Series, rank: usize) -> Result<Vec<GeneratorId>> {
    series.check_rank(rank)?;
    let m = series.cartan_count(rank) as u16;
    let mut out: Vec<GeneratorId> = (1..=m).map(GeneratorId::h).collect();
    out.extend((1..=m).map(GeneratorId::central));

    let mut positive = Vec::new();
    for i in 1..=m {
        for j in (i + 1)..=m {
            positive.push(GeneratorId::f(i, j));
        }
    }
    if series == Series::C {
        for i in 1..=m {
            for j in i..=m {
                positive.push(GeneratorId::p(i, j));
            }
        }
    }
    if matches!(series, Series::B | Series::D) {
        for i in 1..=m {
            for j in (i + 1)..=m {
                positive.push(GeneratorId::s(i, j));
            }
        }
    }
    if series == Series::B {
        positive.extend((1..=m).map(GeneratorId::u));
    }
    let negative: Vec<GeneratorId> = positive
        .iter()
        .map(|g| g.partner().expect("root generator has a partner"))
        .collect();
    out.extend(positive);
    out.extend(negative);
    debug_assert_eq!(out.len(), series.extended_dim(rank));
    Ok(out)
}

/// An ordered list of generator labels with constant-time index lookup.
#[derive(Clone, PartialEq, Eq)]
pub struct Basis {
    ids: Vec<GeneratorId>,
    index: HashMap<GeneratorId, usize>,
}

impl Basis {
    pub fn new(ids: Vec<GeneratorId>) -> Self {
        let index = ids.iter().enumerate().map(|(k, g)| (*g, k)).collect();
        Self { ids, index }
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn ids(&self) -> &[GeneratorId] {
        &self.ids
    }

    pub fn id(&self, k: usize) -> GeneratorId {
        self.ids[k]
    }

    pub fn position(&self, g: &GeneratorId) -> Option<usize> {
        self.index.get(g).copied()
    }

    pub fn require(&self, g: &GeneratorId) -> Result<usize> {
        self.position(g).ok_or_else(|| Error::ForeignGenerator(g.to_string()))
    }

    pub fn contains(&self, g: &GeneratorId) -> bool {
        self.index.contains_key(g)
    }
}

impl fmt::Debug for Basis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.ids.iter()).finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn labels(series: Series, rank: usize) -> Vec<String> {
        enumerate_generators(series, rank)
            .unwrap()
            .iter()
            .map(ToString::to_string)
            .collect()
    }

    #[test]
    fn a1_basis() {
        assert_eq!(labels(Series::A, 1), ["H1", "H2", "I1", "I2", "F1,2", "F2,1"]);
    }

    #[test]
    fn small_bases() {
        assert_eq!(labels(Series::C, 2).len(), 12);
        assert_eq!(
            labels(Series::D, 2),
            ["H1", "H2", "I1", "I2", "F1,2", "S1,2", "F2,1", "T1,2"]
        );
        assert_eq!(labels(Series::B, 1), ["H1", "I1", "U1", "V1"]);
        assert_eq!(
            labels(Series::C, 2),
            ["H1", "H2", "I1", "I2", "F1,2", "P1,1", "P1,2", "P2,2", "F2,1", "Q1,1", "Q1,2", "Q2,2"]
        );
    }

    #[test]
    fn dimension_formulas() {
        for series in Series::ALL {
            for n in series.min_rank()..=6 {
                let len = enumerate_generators(series, n).unwrap().len();
                let expect = match series {
                    Series::A => (n + 1) * (n + 1) + (n + 1),
                    Series::B | Series::C => n * (2 * n + 1) + n,
                    Series::D => n * (2 * n - 1) + n,
                };
                assert_eq!(len, expect, "{series}{n}");
            }
        }
    }

    #[test]
    fn rank_gate() {
        assert!(matches!(
            enumerate_generators(Series::D, 1),
            Err(Error::RankOutOfRange { .. })
        ));
        assert!(enumerate_generators(Series::A, 0).is_err());
    }

    #[test]
    fn every_generator_validates() {
        for series in Series::ALL {
            let n = 3;
            for g in enumerate_generators(series, n).unwrap() {
                assert!(g.belongs_to(series, n), "{g}");
            }
        }
        assert!(!GeneratorId::s(2, 1).belongs_to(Series::D, 3));
        assert!(!GeneratorId::p(1, 1).belongs_to(Series::D, 3));
        assert!(!GeneratorId::f(1, 1).belongs_to(Series::A, 3));
    }

    #[test]
    fn label_parsing() {
        for s in ["H1", "I3", "F1,2", "P2,2", "x^2", "Y1,2", "y^3,4", "U4"] {
            let g: GeneratorId = s.parse().unwrap();
            assert_eq!(g.to_string(), s);
        }
        for s in ["", "F1", "H1,2", "Z1", "H0", "x^"] {
            assert!(s.parse::<GeneratorId>().is_err(), "{s}");
        }
    }
}
