use std::collections::{BTreeMap, BTreeSet};

use super::ast::{Binder, Formula};
use super::LogicError;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Quantifier {
    Forall,
    Exists,
}

fn look_through(f: &Formula) -> &Formula {
    match f {
        Formula::Macro(m) => look_through(&m.body),
        _ => f,
    }
}

/// Leading quantifier blocks and the remaining matrix.
pub fn quantifier_prefix(f: &Formula) -> (Vec<(Quantifier, Binder)>, &Formula) {
    let mut prefix = Vec::new();
    let mut cur = look_through(f);
    loop {
        match cur {
            Formula::Forall(bs, g) => {
                prefix.extend(bs.iter().map(|b| (Quantifier::Forall, b.clone())));
                cur = look_through(g);
            }
            Formula::Exists(bs, g) => {
                prefix.extend(bs.iter().map(|b| (Quantifier::Exists, b.clone())));
                cur = look_through(g);
            }
            _ => return (prefix, cur),
        }
    }
}

/// `Some((binders, matrix))` if `f` is `∀x̄ φ` with `φ` quantifier-free
/// (the prefix may be empty).
pub fn universal_form(f: &Formula) -> Option<(Vec<Binder>, &Formula)> {
    let (prefix, matrix) = quantifier_prefix(f);
    if prefix.iter().any(|(q, _)| *q == Quantifier::Exists) || !matrix.is_quantifier_free() {
        return None;
    }
    Some((prefix.into_iter().map(|(_, b)| b).collect(), matrix))
}

/// Whether `f` is `A ⇒ B` with `A` and `B` purely universal prenex formulas.
pub fn check_aia_shape(f: &Formula) -> bool {
    match look_through(f) {
        Formula::Implies(a, b) => universal_form(a).is_some() && universal_form(b).is_some(),
        _ => false,
    }
}

/// For a closed `∀x̄ α ⇒ ∀ȳ β`, returns the equivalent prenex forms
/// `(∀ȳ ∃x̄′ (α′ ⇒ β), ∃x̄′ ∀ȳ (α′ ⇒ β))`, renaming the antecedent's
/// variables apart from the consequent's by appending `'`.
pub fn prenex_variants(f: &Formula) -> Result<(Formula, Formula), LogicError> {
    if !f.sort_check()?.is_empty() {
        return Err(LogicError::NotClosed);
    }
    let Formula::Implies(a, b) = look_through(f) else {
        return Err(LogicError::NotAiaShape);
    };
    let ((xs, alpha), (ys, beta)) = match (universal_form(a), universal_form(b)) {
        (Some(x), Some(y)) => (x, y),
        _ => return Err(LogicError::NotAiaShape),
    };
    let mut taken = BTreeSet::new();
    b.all_names(&mut taken);
    let mut renaming = BTreeMap::new();
    let mut new_xs = Vec::with_capacity(xs.len());
    for x in &xs {
        let mut name = x.name.clone();
        while taken.contains(&name) {
            name.push('\'');
        }
        taken.insert(name.clone());
        if name != x.name {
            renaming.insert(x.name.clone(), name.clone());
        }
        new_xs.push(Binder { name, sort: x.sort });
    }
    let alpha = alpha.expand().rename_free(&|n| renaming.get(n).cloned());
    let body = Formula::implies(alpha, beta.expand());
    let ae = Formula::forall(ys.clone(), Formula::exists(new_xs.clone(), body.clone()));
    let ea = Formula::exists(new_xs, Formula::forall(ys, body));
    Ok((ae, ea))
}

/// Whether every quantifier of type `first` precedes every quantifier of
/// the other type and the matrix is quantifier-free.
pub fn is_prenex_ordered(f: &Formula, first: Quantifier) -> bool {
    let (prefix, matrix) = quantifier_prefix(f);
    let switch = prefix.iter().position(|(q, _)| *q != first).unwrap_or(prefix.len());
    matrix.is_quantifier_free() && prefix[switch..].iter().all(|(q, _)| *q != first)
}
