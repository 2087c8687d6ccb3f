//! Z^n-valued length functions on group models and the quantities derived
//! from them: Gromov products `c` and their level projections `c_k`, the
//! pseudometric `d_l`, the `evaluate`-additivity predicate behind the
//! circle-decomposition notation, and the hyperbolic-translation lift
//! `l_1^h(g) = l_1(g^2) - l_1(g)`.
//!
//! Built-in kinds are defined by closed formulas; the based form
//! `l_v(g) = d(v, g v)` is realized implicitly (weighted-free equals the
//! based length on the weighted Cayley tree).

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::group::{GroupModel, Word};
use crate::lexvec::{HalfVec, LexVec};

#[derive(Debug, Clone)]
pub enum LengthKind {
    /// Reduced word length with respect to the model's generators; arity 1.
    WordLength,
    /// Sum of positive letter weights over the reduced word; free models.
    WeightedFree { weights: Vec<LexVec> },
    /// `l(v) = lex_abs(v)` on the exponent vector; free-abelian models.
    LexAbsAbelian,
    /// Concatenation `(l_X, l_Y)` of two lengths over the same model; the
    /// second component sits in the dominant coordinates.
    Product {
        first: Box<LengthFunction>,
        second: Box<LengthFunction>,
    },
    /// Explicit canonical-word table. Out-of-domain evaluation is an error,
    /// never an extrapolation.
    Table { values: BTreeMap<Word, LexVec> },
}

#[derive(Debug, Clone)]
pub struct LengthFunction {
    model: Arc<GroupModel>,
    arity: usize,
    kind: LengthKind,
}

impl LengthFunction {
    pub fn word_length(model: Arc<GroupModel>) -> LengthFunction {
        LengthFunction {
            model,
            arity: 1,
            kind: LengthKind::WordLength,
        }
    }

    pub fn weighted_free(model: Arc<GroupModel>, weights: Vec<LexVec>) -> Result<LengthFunction> {
        if !matches!(model.kind, crate::group::ModelKind::Free) {
            return Err(Error::Document(
                "weighted-free length requires a free model".into(),
            ));
        }
        if weights.len() != model.rank() {
            return Err(Error::Document(format!(
                "expected {} weights, got {}",
                model.rank(),
                weights.len()
            )));
        }
        let arity = weights[0].arity();
        for w in &weights {
            if w.arity() != arity {
                return Err(Error::ArityMismatch {
                    left: arity,
                    right: w.arity(),
                });
            }
            if !w.is_positive() {
                return Err(Error::Document(format!(
                    "letter weights must be lexicographically positive, got {w}"
                )));
            }
        }
        Ok(LengthFunction {
            model,
            arity,
            kind: LengthKind::WeightedFree { weights },
        })
    }

    pub fn lexabs_abelian(model: Arc<GroupModel>) -> Result<LengthFunction> {
        if !matches!(model.kind, crate::group::ModelKind::FreeAbelian) {
            return Err(Error::Document(
                "lexabs-abelian length requires a free-abelian model".into(),
            ));
        }
        let arity = model.rank();
        Ok(LengthFunction {
            model,
            arity,
            kind: LengthKind::LexAbsAbelian,
        })
    }

    /// Both components must act on the same model instance; mixed models are
    /// rejected.
    pub fn product(first: LengthFunction, second: LengthFunction) -> Result<LengthFunction> {
        if !Arc::ptr_eq(&first.model, &second.model) {
            return Err(Error::Document(
                "product length requires both components over the same model".into(),
            ));
        }
        let model = first.model.clone();
        let arity = first.arity + second.arity;
        Ok(LengthFunction {
            model,
            arity,
            kind: LengthKind::Product {
                first: Box::new(first),
                second: Box::new(second),
            },
        })
    }

    pub fn table(model: Arc<GroupModel>, values: BTreeMap<Word, LexVec>) -> Result<LengthFunction> {
        let arity = values
            .values()
            .next()
            .map(|v| v.arity())
            .ok_or_else(|| Error::Document("table length function is empty".into()))?;
        for v in values.values() {
            if v.arity() != arity {
                return Err(Error::ArityMismatch {
                    left: arity,
                    right: v.arity(),
                });
            }
        }
        Ok(LengthFunction {
            model,
            arity,
            kind: LengthKind::Table { values },
        })
    }

    pub fn model(&self) -> &Arc<GroupModel> {
        &self.model
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn kind(&self) -> &LengthKind {
        &self.kind
    }

    /// Exact length value of (the canonical form of) `g`.
    pub fn evaluate(&self, g: &Word) -> Result<LexVec> {
        let g = self.model.normalize(g)?;
        self.eval_canonical(&g)
    }

    fn eval_canonical(&self, g: &Word) -> Result<LexVec> {
        match &self.kind {
            LengthKind::WordLength => Ok(LexVec::new(vec![g.len() as i128])),
            LengthKind::WeightedFree { weights } => {
                let mut acc = LexVec::zeros(self.arity);
                for l in g.letters() {
                    acc = &acc + &weights[l.gen];
                }
                Ok(acc)
            }
            LengthKind::LexAbsAbelian => {
                let exps = self.model.exponents(g)?;
                Ok(LexVec::new(exps).lex_abs())
            }
            LengthKind::Product { first, second } => {
                let a = first.eval_canonical(g)?;
                let b = second.eval_canonical(g)?;
                let mut coords = a.coords().to_vec();
                coords.extend_from_slice(b.coords());
                Ok(LexVec::new(coords))
            }
            LengthKind::Table { values } => values
                .get(g)
                .cloned()
                .ok_or_else(|| Error::OutsideDomain(self.model.render_word(g))),
        }
    }

    /// Gromov product `c(g,h) = (l(g) + l(h) - l(g^-1 h)) / 2`.
    pub fn gromov_product(&self, g: &Word, h: &Word) -> Result<HalfVec> {
        let lg = self.evaluate(g)?;
        let lh = self.evaluate(h)?;
        let gh = self.model.multiply(&self.model.invert(g)?, h)?;
        let lgh = self.eval_canonical(&gh)?;
        Ok(HalfVec::half_of(&(&lg + &lh) - &lgh))
    }

    /// `c_k(g,h)`: the Gromov product with the `k` leftmost coordinates
    /// dropped. Halving and projection commute.
    pub fn projected_product(&self, g: &Word, h: &Word, k: usize) -> Result<HalfVec> {
        self.gromov_product(g, h)?.project(k)
    }

    /// `d_l(g,h) = l(g^-1 h)`; a pseudometric under the length axioms, a
    /// metric exactly when `l` is positive on non-identity elements.
    pub fn pseudometric(&self, g: &Word, h: &Word) -> Result<LexVec> {
        let gh = self.model.multiply(&self.model.invert(g)?, h)?;
        self.eval_canonical(&gh)
    }

    /// True iff `l(ab) = l(a) + l(b)`, i.e. the product is length-additive.
    pub fn is_circ(&self, a: &Word, b: &Word) -> Result<bool> {
        let la = self.evaluate(a)?;
        let lb = self.evaluate(b)?;
        let lab = self.eval_canonical(&self.model.multiply(a, b)?)?;
        Ok(lab == &la + &lb)
    }

    /// `l_k(g^2) - l_k(g)`, the translation-length lift at level `k`
    /// (default 1 gives `l_1^h`). May be negative for pathological inputs;
    /// callers report that rather than clamp.
    pub fn hyp_translation(&self, g: &Word, k: usize) -> Result<LexVec> {
        let g2 = self.model.power(g, 2)?;
        let a = self.eval_canonical(&g2)?.project(k)?;
        let b = self.evaluate(g)?.project(k)?;
        Ok(&a - &b)
    }

    /// Coordinate `level` (0-based) of `l(g)`: the integer path length the
    /// level-`level` coset tree uses.
    pub fn level_value(&self, g: &Word, level: usize) -> Result<i128> {
        let l = self.evaluate(g)?;
        if level >= l.arity() {
            return Err(Error::ProjectionRange {
                level,
                arity: l.arity(),
            });
        }
        Ok(l.coord(level))
    }

    /// Height of `l(g)`.
    pub fn height_of(&self, g: &Word) -> Result<usize> {
        Ok(self.evaluate(g)?.height().0)
    }
}
