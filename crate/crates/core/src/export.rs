//! Byte-stable JSON and text renderings of tables, cocommutators, r-matrices,
//! pairings and representation matrices.
//!
//! Every list is emitted in basis order, coefficients use canonical rational
//! strings, and JSON is pretty-printed with a trailing newline, so identical
//! inputs give identical bytes.

use serde::{Deserialize, Serialize};

use crate::bialgebra::{CocommutatorTable, RMatrix};
use crate::double::ManinTriple;
use crate::element::{Element, TermJson};
use crate::error::{Error, Result};
use crate::generator::{Basis, GeneratorId, Series};
use crate::reps::{Entry, MatrixRep, Statistics};
use crate::scalar::Scalar;
use crate::table::StructureTable;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Text,
}

impl std::str::FromStr for Format {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(Format::Json),
            "text" => Ok(Format::Text),
            _ => Err(Error::Parse(format!("unknown format {s:?} (expected json or text)"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BracketJson {
    pub p: GeneratorId,
    pub q: GeneratorId,
    pub out: Vec<TermJson>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StructureTableJson {
    pub series: Series,
    pub rank: usize,
    pub basis: Vec<GeneratorId>,
    /// Nonzero brackets with `p` before `q` in basis order.
    pub brackets: Vec<BracketJson>,
}

impl StructureTableJson {
    pub fn new(series: Series, rank: usize, table: &StructureTable) -> Self {
        let basis = table.basis();
        let n = table.dim();
        let mut brackets = Vec::new();
        for p in 0..n {
            for q in (p + 1)..n {
                let v = table.get(p, q);
                if v.is_zero() {
                    continue;
                }
                let out = v.iter().map(|(r, c)| TermJson { gen: basis.id(*r), coeff: c.clone() }).collect();
                brackets.push(BracketJson { p: basis.id(p), q: basis.id(q), out });
            }
        }
        Self { series, rank, basis: basis.ids().to_vec(), brackets }
    }

    pub fn to_table(&self) -> Result<StructureTable> {
        let basis = Basis::new(self.basis.clone());
        let mut table = StructureTable::zero(basis.clone());
        for b in &self.brackets {
            let value = Element::from_terms(b.out.iter().map(|t| (t.gen, t.coeff.clone())));
            table.set(basis.require(&b.p)?, basis.require(&b.q)?, value.to_sparse(&basis)?);
        }
        Ok(table)
    }
}

fn pretty<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("export types serialize infallibly");
    s.push('\n');
    s
}

fn element_text(e: &Element) -> String {
    if e.is_zero() {
        "0".into()
    } else {
        e.to_string()
    }
}

pub fn structure_table(series: Series, rank: usize, table: &StructureTable, format: Format) -> String {
    let json = StructureTableJson::new(series, rank, table);
    match format {
        Format::Json => pretty(&json),
        Format::Text => {
            let mut s = format!("# {series}{rank} basis: {}\n", labels(&json.basis));
            for b in &json.brackets {
                let out = Element::from_terms(b.out.iter().map(|t| (t.gen, t.coeff.clone())));
                s.push_str(&format!("[{}, {}] = {}\n", b.p, b.q, element_text(&out)));
            }
            s
        }
    }
}

fn labels(ids: &[GeneratorId]) -> String {
    ids.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ")
}

pub fn cocommutator(delta: &CocommutatorTable, format: Format) -> String {
    match format {
        Format::Json => pretty(&delta.to_json()),
        Format::Text => (0..delta.basis().len())
            .map(|k| format!("δ({}) = {}\n", delta.basis().id(k), delta.display_delta(k)))
            .collect(),
    }
}

pub fn r_matrix(r: &RMatrix, format: Format) -> String {
    let rows = r.to_json();
    match format {
        Format::Json => pretty(&rows),
        Format::Text => rows.iter().map(|t| format!("{} ({})·{}∧{}\n", t.part, t.coeff, t.a, t.b)).collect(),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PairingJson {
    pub s_plus: Vec<GeneratorId>,
    pub s_minus: Vec<GeneratorId>,
    /// `matrix[a][b] = ⟨s₋[a], s₊[b]⟩`.
    pub matrix: Vec<Vec<Scalar>>,
}

pub fn pairing(triple: &ManinTriple, format: Format) -> String {
    let json = PairingJson {
        s_plus: triple.s_plus().to_vec(),
        s_minus: triple.s_minus().to_vec(),
        matrix: triple.pairing().clone(),
    };
    match format {
        Format::Json => pretty(&json),
        Format::Text => {
            let mut s = String::new();
            for (a, row) in json.matrix.iter().enumerate() {
                for (b, c) in row.iter().enumerate() {
                    if !c.is_zero() {
                        s.push_str(&format!("<{}, {}> = {c}\n", json.s_minus[a], json.s_plus[b]));
                    }
                }
            }
            s
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MatrixJson {
    pub gen: GeneratorId,
    /// `[row, col, fields...]` with the fields of the coordinate-list dump.
    pub entries: Vec<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RepJson {
    pub series: Series,
    pub rank: usize,
    pub statistics: Statistics,
    pub cutoff: Option<u32>,
    pub dim: usize,
    pub generators: Vec<MatrixJson>,
}

pub fn rep_matrices<T: Entry>(rep: &MatrixRep<T>, format: Format) -> String {
    match format {
        Format::Json => {
            let generators = rep
                .generators()
                .map(|(g, m)| MatrixJson {
                    gen: *g,
                    entries: m
                        .triplets()
                        .into_iter()
                        .map(|(r, c, v)| {
                            let mut row = vec![r.to_string(), c.to_string()];
                            row.extend(v.dump_fields().split(' ').map(str::to_owned));
                            row
                        })
                        .collect(),
                })
                .collect();
            pretty(&RepJson {
                series: rep.series(),
                rank: rep.rank(),
                statistics: rep.basis().statistics(),
                cutoff: rep.basis().cutoff(),
                dim: rep.dim(),
                generators,
            })
        }
        Format::Text => rep.generators().map(|(g, m)| format!("# {g}\n{}", m.to_coo())).collect(),
    }
}
