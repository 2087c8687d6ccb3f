//! Model documents: the one input format the CLI ingests. A document
//! declares a group model, a length function over it, and optional caps;
//! it compiles to exactly one `(GroupModel, LengthFunction)` pair and
//! re-serialization round-trips. Vector literals use the `(a1,...,an)`
//! grammar everywhere.
//!
//! A built-in corpus ships with the binary so every check is runnable out
//! of the box: the word-length free group `F2-wordlen`, the weighted free
//! group `W2`, the lexicographic free abelian plane `Z2-lexabs`, the
//! uniform-weight truncations `Fm-uniform-<m>`, a product-construction demo
//! `Z4-product`, and one planted-violation document per checker.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{GroupModel, Word};
use crate::length::LengthFunction;
use crate::lexvec::LexVec;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelDocument {
    pub name: String,
    pub arity: usize,
    pub group: GroupSpec,
    pub length: LengthSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub caps: Option<Caps>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum GroupSpec {
    Free {
        generators: Vec<String>,
    },
    FreeAbelian {
        generators: Vec<String>,
    },
    Table {
        generators: Vec<String>,
        elements: Vec<String>,
        identity: String,
        /// `table[i][j]` is the element name of `elements[i] * elements[j]`.
        table: Vec<Vec<String>>,
        #[serde(default)]
        torsion_free: bool,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum LengthSpec {
    WordLength,
    WeightedFree {
        /// generator name -> `(a1,...,an)` literal
        weights: BTreeMap<String, String>,
    },
    LexabsAbelian,
    Product {
        first: Box<LengthSpec>,
        second: Box<LengthSpec>,
    },
    Table {
        /// canonical word -> `(a1,...,an)` literal
        values: BTreeMap<String, String>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Caps {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ball_cap: Option<usize>,
}

impl ModelDocument {
    pub fn compile(&self) -> Result<(Arc<GroupModel>, LengthFunction)> {
        if self.arity == 0 {
            return Err(Error::Document("arity must be at least 1".into()));
        }
        let mut model = match &self.group {
            GroupSpec::Free { generators } => GroupModel::new_free(generators.clone())?,
            GroupSpec::FreeAbelian { generators } => {
                GroupModel::new_free_abelian(generators.clone())?
            }
            GroupSpec::Table {
                generators,
                elements,
                identity,
                table,
                torsion_free,
            } => {
                if table.len() != elements.len()
                    || table.iter().any(|row| row.len() != elements.len())
                {
                    return Err(Error::Document(
                        "multiplication table must be square over the universe".into(),
                    ));
                }
                let index: BTreeMap<&str, usize> = elements
                    .iter()
                    .enumerate()
                    .map(|(i, e)| (e.as_str(), i))
                    .collect();
                let mult = |a: &str, b: &str| -> Option<String> {
                    let i = *index.get(a)?;
                    let j = *index.get(b)?;
                    Some(table[i][j].clone())
                };
                GroupModel::new_table(
                    generators.clone(),
                    elements.clone(),
                    identity,
                    &mult,
                    *torsion_free,
                )?
            }
        };
        if let Some(caps) = &self.caps {
            if let Some(cap) = caps.ball_cap {
                model.ball_cap = cap;
            }
        }
        let model = Arc::new(model);
        let lf = build_length(&self.length, &model)?;
        if lf.arity() != self.arity {
            return Err(Error::Document(format!(
                "declared arity {} but the length function has arity {}",
                self.arity,
                lf.arity()
            )));
        }
        Ok((model, lf))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("documents serialize")
    }

    pub fn from_json(s: &str) -> Result<ModelDocument> {
        Ok(serde_json::from_str(s)?)
    }
}

fn build_length(spec: &LengthSpec, model: &Arc<GroupModel>) -> Result<LengthFunction> {
    match spec {
        LengthSpec::WordLength => Ok(LengthFunction::word_length(model.clone())),
        LengthSpec::WeightedFree { weights } => {
            let mut parsed = Vec::with_capacity(model.rank());
            for g in &model.generators {
                let lit = weights.get(&g.name).ok_or_else(|| {
                    Error::Document(format!("missing weight for generator `{}`", g.name))
                })?;
                parsed.push(lit.parse::<LexVec>()?);
            }
            if weights.len() != model.rank() {
                return Err(Error::Document(
                    "weights listed for unknown generators".into(),
                ));
            }
            LengthFunction::weighted_free(model.clone(), parsed)
        }
        LengthSpec::LexabsAbelian => LengthFunction::lexabs_abelian(model.clone()),
        LengthSpec::Product { first, second } => {
            let a = build_length(first, model)?;
            let b = build_length(second, model)?;
            LengthFunction::product(a, b)
        }
        LengthSpec::Table { values } => {
            let mut parsed: BTreeMap<Word, LexVec> = BTreeMap::new();
            for (key, lit) in values {
                let w = model.parse_word(key)?;
                parsed.insert(w, lit.parse::<LexVec>()?);
            }
            LengthFunction::table(model.clone(), parsed)
        }
    }
}

/// Loads a document from `builtin:NAME` or a JSON file path.
pub fn load(spec: &str) -> Result<ModelDocument> {
    if let Some(name) = spec.strip_prefix("builtin:") {
        return builtin(name)
            .ok_or_else(|| Error::Document(format!("unknown builtin model `{name}`")));
    }
    let text = std::fs::read_to_string(spec)?;
    ModelDocument::from_json(&text)
}

pub fn builtin_names() -> Vec<String> {
    let mut names: Vec<String> = [
        "F2-wordlen",
        "W2",
        "Z2-lexabs",
        "Z3-lexabs",
        "Z4-product",
        "Fm-uniform-4",
        "planted-negative-length",
        "planted-zero-length",
        "planted-regularity-gap",
        "planted-power-height",
        "planted-isolation",
        "planted-conjugation",
    ]
    .iter()
    .map(|s| s.to_string())
    .collect();
    names.push("Fm-uniform (family; properness trend over ranks 2, 4, 8)".into());
    names
}

pub fn builtin(name: &str) -> Option<ModelDocument> {
    if let Some(m) = name.strip_prefix("Fm-uniform-") {
        let m: usize = m.parse().ok().filter(|&m| (1..=64).contains(&m))?;
        return Some(uniform_free_doc(m));
    }
    match name {
        "F2-wordlen" => Some(ModelDocument {
            name: "F2-wordlen".into(),
            arity: 1,
            group: GroupSpec::Free {
                generators: vec!["a".into(), "b".into()],
            },
            length: LengthSpec::WordLength,
            caps: None,
        }),
        "W2" => Some(ModelDocument {
            name: "W2".into(),
            arity: 2,
            group: GroupSpec::Free {
                generators: vec!["a".into(), "t".into()],
            },
            length: LengthSpec::WeightedFree {
                weights: [
                    ("a".to_string(), "(1,0)".to_string()),
                    ("t".to_string(), "(0,1)".to_string()),
                ]
                .into_iter()
                .collect(),
            },
            caps: None,
        }),
        "Z2-lexabs" => Some(ModelDocument {
            name: "Z2-lexabs".into(),
            arity: 2,
            group: GroupSpec::FreeAbelian {
                generators: vec!["a".into(), "t".into()],
            },
            length: LengthSpec::LexabsAbelian,
            caps: None,
        }),
        "Z3-lexabs" => Some(ModelDocument {
            name: "Z3-lexabs".into(),
            arity: 3,
            group: GroupSpec::FreeAbelian {
                generators: vec!["a".into(), "t".into(), "u".into()],
            },
            length: LengthSpec::LexabsAbelian,
            caps: None,
        }),
        "Z4-product" => Some(z4_product_doc()),
        "planted-negative-length" => Some(cyclic_table_doc(
            "planted-negative-length",
            2,
            1,
            &[("1", "(0)"), ("g", "(-1)")],
        )),
        "planted-zero-length" => Some(cyclic_table_doc(
            "planted-zero-length",
            2,
            1,
            &[("1", "(0)"), ("g", "(0)")],
        )),
        "planted-regularity-gap" => Some(klein_four_doc()),
        "planted-power-height" => Some(cyclic_table_doc(
            "planted-power-height",
            4,
            2,
            &[
                ("1", "(0,0)"),
                ("g", "(0,1)"),
                ("g^2", "(1,0)"),
                ("g^-1", "(0,1)"),
            ],
        )),
        "planted-isolation" => Some(cyclic_table_doc(
            "planted-isolation",
            4,
            2,
            &[
                ("1", "(0,0)"),
                ("g", "(0,1)"),
                ("g^2", "(2,0)"),
                ("g^-1", "(0,1)"),
            ],
        )),
        "planted-conjugation" => Some(z7_z3_doc()),
        _ => None,
    }
}

/// The uniform-weight truncation family used to exhibit the proper versus
/// non-proper contrast at finite scale.
pub fn uniform_family() -> Vec<(String, ModelDocument)> {
    [2usize, 4, 8]
        .iter()
        .map(|&m| (format!("Fm-uniform-{m}"), uniform_free_doc(m)))
        .collect()
}

fn uniform_free_doc(m: usize) -> ModelDocument {
    ModelDocument {
        name: format!("Fm-uniform-{m}"),
        arity: 1,
        group: GroupSpec::Free {
            generators: (1..=m).map(|i| format!("x{i}")).collect(),
        },
        length: LengthSpec::WordLength,
        caps: None,
    }
}

fn cyclic_elements(order: usize) -> Vec<String> {
    (0..order)
        .map(|i| match i {
            0 => "1".to_string(),
            1 => "g".to_string(),
            i => format!("g{i}"),
        })
        .collect()
}

fn cyclic_table(order: usize) -> Vec<Vec<String>> {
    let names = cyclic_elements(order);
    (0..order)
        .map(|i| (0..order).map(|j| names[(i + j) % order].clone()).collect())
        .collect()
}

/// Cyclic table group of the given order with an explicit planted length
/// table keyed by canonical words.
fn cyclic_table_doc(
    name: &str,
    order: usize,
    arity: usize,
    values: &[(&str, &str)],
) -> ModelDocument {
    ModelDocument {
        name: name.into(),
        arity,
        group: GroupSpec::Table {
            generators: vec!["g".into()],
            elements: cyclic_elements(order),
            identity: "1".into(),
            table: cyclic_table(order),
            torsion_free: false,
        },
        length: LengthSpec::Table {
            values: values
                .iter()
                .map(|(k, v)| (k.to_string(), v.to_string()))
                .collect(),
        },
        caps: None,
    }
}

fn klein_four_doc() -> ModelDocument {
    let names = ["1", "g", "h", "gh"];
    let table: Vec<Vec<String>> = (0..4)
        .map(|i| (0..4).map(|j| names[i ^ j].to_string()).collect())
        .collect();
    ModelDocument {
        name: "planted-regularity-gap".into(),
        arity: 1,
        group: GroupSpec::Table {
            generators: vec!["g".into(), "h".into()],
            elements: names.iter().map(|s| s.to_string()).collect(),
            identity: "1".into(),
            table,
            torsion_free: false,
        },
        length: LengthSpec::Table {
            values: [
                ("1".to_string(), "(0)".to_string()),
                ("g".to_string(), "(2)".to_string()),
                ("h".to_string(), "(2)".to_string()),
                ("g h".to_string(), "(2)".to_string()),
            ]
            .into_iter()
            .collect(),
        },
        caps: None,
    }
}

/// Z/4 carrying the two-action product construction: the word length (the
/// 4-cycle, defect 1) in the minor coordinate and the zero tree length in
/// the dominant one.
fn z4_product_doc() -> ModelDocument {
    let zero_values: BTreeMap<String, String> =
        [("1", "(0)"), ("g", "(0)"), ("g^2", "(0)"), ("g^-1", "(0)")]
            .into_iter()
            .map(|(k, v)| (k.to_string(), v.to_string()))
            .collect();
    ModelDocument {
        name: "Z4-product".into(),
        arity: 2,
        group: GroupSpec::Table {
            generators: vec!["g".into()],
            elements: cyclic_elements(4),
            identity: "1".into(),
            table: cyclic_table(4),
            torsion_free: false,
        },
        length: LengthSpec::Product {
            first: Box::new(LengthSpec::WordLength),
            second: Box::new(LengthSpec::Table {
                values: zero_values,
            }),
        },
        caps: None,
    }
}

// --- the Z/7 x| Z/3 conjugation demo -------------------------------------

const Z7_POW4: [usize; 3] = [1, 4, 2]; // 4^j mod 7

fn z7_z3_name(i: usize, j: usize) -> String {
    match (i, j) {
        (0, 0) => "1".to_string(),
        (1, 0) => "a".to_string(),
        (0, 1) => "t".to_string(),
        (i, 0) => format!("a{i}"),
        (0, j) => format!("t{j}"),
        (i, j) => format!("a{i}t{j}"),
    }
}

fn z7_z3_index(name: &str) -> Option<(usize, usize)> {
    for i in 0..7 {
        for j in 0..3 {
            if z7_z3_name(i, j) == name {
                return Some((i, j));
            }
        }
    }
    None
}

/// `(a^i t^j)(a^p t^q) = a^(i + p*4^j mod 7) t^(j+q mod 3)`, realizing
/// `t^-1 a t = a^2`.
fn z7_z3_mult(x: &str, y: &str) -> Option<String> {
    let (i, j) = z7_z3_index(x)?;
    let (p, q) = z7_z3_index(y)?;
    Some(z7_z3_name((i + p * Z7_POW4[j]) % 7, (j + q) % 3))
}

fn z7_z3_elements() -> Vec<String> {
    let mut out = Vec::new();
    for j in 0..3 {
        for i in 0..7 {
            out.push(z7_z3_name(i, j));
        }
    }
    out
}

pub(crate) fn z7_z3_model() -> Result<GroupModel> {
    GroupModel::new_table(
        vec!["a".into(), "t".into()],
        z7_z3_elements(),
        "1",
        &|x, y| z7_z3_mult(x, y),
        false,
    )
}

/// Word-metric lengths on the Cayley graph with generator weights
/// `w(a) = (1,0)` and `w(t) = (0,1)`: an exact single-source shortest path
/// over the 21 elements. Symmetric by construction, so the length axioms
/// hold.
fn z7_z3_lengths(model: &GroupModel) -> Vec<LexVec> {
    let table = match &model.kind {
        crate::group::ModelKind::Table(t) => t,
        _ => unreachable!("z7_z3_model is a table model"),
    };
    let m = table.size();
    let gen_weights = [
        (table.gen_elem[0], LexVec::new(vec![1, 0])),
        (table.inv[table.gen_elem[0]], LexVec::new(vec![1, 0])),
        (table.gen_elem[1], LexVec::new(vec![0, 1])),
        (table.inv[table.gen_elem[1]], LexVec::new(vec![0, 1])),
    ];
    let mut dist: Vec<Option<LexVec>> = vec![None; m];
    let mut done = vec![false; m];
    dist[table.identity] = Some(LexVec::zeros(2));
    loop {
        let mut current: Option<usize> = None;
        for v in 0..m {
            if done[v] || dist[v].is_none() {
                continue;
            }
            if current.is_none_or(|c| dist[v] < dist[c]) {
                current = Some(v);
            }
        }
        let Some(v) = current else { break };
        done[v] = true;
        for (step, w) in &gen_weights {
            let u = table.mult[v][*step];
            let cand = dist[v].as_ref().unwrap() + w;
            if dist[u].as_ref().is_none_or(|d| cand < *d) {
                dist[u] = Some(cand);
            }
        }
    }
    dist.into_iter()
        .map(|d| d.expect("graph is connected"))
        .collect()
}

fn z7_z3_doc() -> ModelDocument {
    let model = z7_z3_model().expect("the semidirect product table is a group");
    let lengths = z7_z3_lengths(&model);
    let table = match &model.kind {
        crate::group::ModelKind::Table(t) => t,
        _ => unreachable!(),
    };
    let values: BTreeMap<String, String> = (0..table.size())
        .map(|i| {
            (
                model.render_word(&table.canonical[i]),
                lengths[i].to_string(),
            )
        })
        .collect();
    ModelDocument {
        name: "planted-conjugation".into(),
        arity: 2,
        group: GroupSpec::Table {
            generators: vec!["a".into(), "t".into()],
            elements: z7_z3_elements(),
            identity: "1".into(),
            table: (0..21)
                .map(|i| {
                    (0..21)
                        .map(|j| z7_z3_mult(&z7_z3_elements()[i], &z7_z3_elements()[j]).unwrap())
                        .collect()
                })
                .collect(),
            torsion_free: false,
        },
        length: LengthSpec::Table { values },
        caps: None,
    }
}

/// A synthetic table instance on the semidirect product whose planted level
/// lengths break both colinearity branches for `c = a` against the letter
/// `t`. Used to exercise the structural checkers; it does not satisfy the
/// length axioms and is not part of the built-in corpus.
pub fn colinearity_breaking_instance() -> Result<(LengthFunction, Word, Word)> {
    let model = Arc::new(z7_z3_model()?);
    let table = match &model.kind {
        crate::group::ModelKind::Table(t) => t.clone(),
        _ => unreachable!(),
    };
    let mut values: BTreeMap<Word, LexVec> = BTreeMap::new();
    for idx in 0..table.size() {
        let name = &table.elements[idx];
        let (i, j) = z7_z3_index(name).expect("universe names");
        let v = match (i, j) {
            (i, 0) => LexVec::new(vec![std::cmp::min(i, 7 - i) as i128, 0]),
            (0, _) => LexVec::new(vec![0, 1]),
            _ => LexVec::new(vec![1, 3]),
        };
        values.insert(table.canonical[idx].clone(), v);
    }
    let lf = LengthFunction::table(model.clone(), values)?;
    let t = model.parse_word("t")?;
    let a = model.parse_word("a")?;
    Ok((lf, t, a))
}
