use serde::Serialize;

use super::arith::{ArithFormula, ArithTerm};
use super::flatten::{flatten_multiplications, FlattenResult, Triple};
use super::ReductionError;
use crate::geometry::{two_sum, L1Params, NormedSpace, L1};
use crate::logic::{check_aia_shape, Formula, Gadgets, ScalarTerm, Sort};
use crate::rational::Rational;

/// The sentences `A`, `B` (or `A′`, `B′` above dimension 2) for one input.
#[derive(Clone, Debug)]
pub struct ReductionOutput {
    pub a: Formula,
    pub b: Formula,
    pub dimension: usize,
    pub flat: FlattenResult,
    pub manifest: VariableManifest,
    pub params: L1Params,
    /// `check_aia_shape(A ⇒ B)`.
    pub aia_shape: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VariableManifest {
    pub m: usize,
    pub k: usize,
    pub q1: String,
    pub triples: Vec<Triple>,
    pub vectors: Vec<String>,
    pub scalars: Vec<String>,
}

impl ReductionOutput {
    /// `("A", "B")`, or `("A'", "B'")` when the dimension exceeds 2.
    pub fn sentence_names(&self) -> (&'static str, &'static str) {
        if self.dimension > 2 {
            ("A'", "B'")
        } else {
            ("A", "B")
        }
    }

    /// `A ⇒ B`.
    pub fn implication(&self) -> Formula {
        Formula::implies(self.a.clone(), self.b.clone())
    }
}

/// `𝓛₁` for `d = 2`, `𝓛₁ ×₂ Euclidean(d−2)` above.
pub fn space_for_dimension(l1: &L1, d: usize) -> Result<NormedSpace, ReductionError> {
    match d {
        0 | 1 => Err(ReductionError::InvalidDimension(d)),
        2 => Ok(l1.space()),
        _ => Ok(two_sum(l1.space(), NormedSpace::euclidean(d - 2))),
    }
}

fn render_term(t: &ArithTerm) -> Result<ScalarTerm, ReductionError> {
    Ok(match t {
        ArithTerm::Var(v) => ScalarTerm::var(v.to_string()),
        ArithTerm::Nat(n) => {
            let n = i64::try_from(*n).map_err(|_| ReductionError::SortError(format!("constant {n} too large")))?;
            ScalarTerm::constant(Rational::from_integer(n))
        }
        ArithTerm::Add(a, b) => render_term(a)? + render_term(b)?,
        ArithTerm::Mul(..) => {
            return Err(ReductionError::SortError(format!("product {t} in the additive formula")))
        }
    })
}

/// An additive arithmetic formula as a formula over scalar variables;
/// `a < b` becomes `a ≤ b ∧ ¬(a = b)`.
pub fn render_additive(f: &ArithFormula) -> Result<Formula, ReductionError> {
    Ok(match f {
        ArithFormula::Eq(a, b) => Formula::Eq(render_term(a)?, render_term(b)?),
        ArithFormula::Le(a, b) => Formula::Le(render_term(a)?, render_term(b)?),
        ArithFormula::Lt(a, b) => {
            let (a, b) = (render_term(a)?, render_term(b)?);
            Formula::And(vec![Formula::Le(a.clone(), b.clone()), Formula::not(Formula::Eq(a, b))])
        }
        ArithFormula::Not(g) => Formula::not(render_additive(g)?),
        ArithFormula::And(a, b) => Formula::And(vec![render_additive(a)?, render_additive(b)?]),
        ArithFormula::Or(a, b) => Formula::Or(vec![render_additive(a)?, render_additive(b)?]),
    })
}

/// Compiles `q` into the sentences `A` and `B` over the constants of
/// `params`, adding the decomposition `(*)` for `d > 2`.
pub fn compile(q: &ArithFormula, d: usize, params: &L1Params) -> Result<ReductionOutput, ReductionError> {
    compile_with(q, d, params, &Gadgets::from_params(params))
}

pub fn compile_with(
    q: &ArithFormula,
    d: usize,
    params: &L1Params,
    gadgets: &Gadgets,
) -> Result<ReductionOutput, ReductionError> {
    if d < 2 {
        return Err(ReductionError::InvalidDimension(d));
    }
    let flat = flatten_multiplications(q)?;
    let q1 = render_additive(&flat.q1)?;
    let (a, b) = if d > 2 {
        (gadgets.sentence_a_prime(), gadgets.sentence_b_prime(&q1, flat.m, flat.k)?)
    } else {
        (gadgets.sentence_a(), gadgets.sentence_b(&q1, flat.m, flat.k)?)
    };
    let mut vectors = Vec::new();
    let mut scalars = Vec::new();
    if let Formula::Forall(bs, _) = &b {
        for binder in bs {
            match binder.sort {
                Sort::Vector => vectors.push(binder.name.clone()),
                Sort::Scalar => scalars.push(binder.name.clone()),
            }
        }
    }
    let manifest = VariableManifest {
        m: flat.m,
        k: flat.k,
        q1: flat.q1.to_string(),
        triples: flat.triples.clone(),
        vectors,
        scalars,
    };
    let aia_shape = check_aia_shape(&Formula::implies(a.clone(), b.clone()));
    Ok(ReductionOutput { a, b, dimension: d, flat, manifest, params: params.clone(), aia_shape })
}
