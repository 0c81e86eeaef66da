//! Conjunct extraction and the syntactic drop-entailment check.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::term::{Nameless, Term};
use crate::types::{Atom, SemType};
use crate::typing::{typecheck, TypeError, TypingEnv};

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum FormulaError {
    #[error("not a proposition: term has type {0}")]
    NotAProposition(SemType),
    #[error(transparent)]
    Type(#[from] TypeError),
}

/// A formula split into its existential prefix and flat conjunct list.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Conjunction {
    pub prefix: Vec<(String, SemType)>,
    pub conjuncts: Vec<Term>,
}

/// Strips the existential prefix of a proposition and flattens the
/// remaining conjunction left to right, whatever its association.
pub fn conjuncts(t: &Term, env: &TypingEnv) -> Result<Conjunction, FormulaError> {
    let ty = typecheck(t, env)?;
    if !ty.is_atom(Atom::Prop) {
        return Err(FormulaError::NotAProposition(ty));
    }
    let mut prefix = Vec::new();
    let mut body = t;
    while let Term::Exists(x, ty, b) = body {
        prefix.push((x.clone(), ty.clone()));
        body = b;
    }
    let mut out = Vec::new();
    flatten(body, &mut out);
    Ok(Conjunction {
        prefix,
        conjuncts: out,
    })
}

fn flatten(t: &Term, out: &mut Vec<Term>) {
    match t {
        Term::And(l, r) => {
            flatten(l, out);
            flatten(r, out);
        }
        other => out.push(other.clone()),
    }
}

/// True iff every conjunct of `reduced` occurs in `full` at least as often,
/// after identifying the existential prefixes position by position.
///
/// This is the purely syntactic drop property: removing conjuncts (e.g.
/// modifiers) from an existentially closed conjunction yields a formula the
/// original entails.
pub fn drop_entails(full: &Term, reduced: &Term) -> Result<bool, FormulaError> {
    let env = TypingEnv::new();
    let full = conjuncts(full, &env)?;
    let reduced = conjuncts(reduced, &env)?;
    if reduced.prefix.len() > full.prefix.len() {
        return Ok(false);
    }
    if full
        .prefix
        .iter()
        .zip(&reduced.prefix)
        .any(|((_, a), (_, b))| a != b)
    {
        return Ok(false);
    }
    let full_bag = bag(&full);
    let reduced_bag = bag(&reduced);
    Ok(reduced_bag
        .iter()
        .all(|(k, n)| full_bag.get(k).is_some_and(|m| m >= n)))
}

/// Conjuncts as a multiset, with prefix variables replaced by positional
/// placeholders so that differently named binders compare equal.
fn bag(c: &Conjunction) -> BTreeMap<Nameless, usize> {
    let mut out = BTreeMap::new();
    for conj in &c.conjuncts {
        let mut t = conj.clone();
        // Innermost first, so a shadowed outer binder never steals occurrences.
        for (i, (x, _)) in c.prefix.iter().enumerate().rev() {
            t = t.substitute(x, &Term::Var(placeholder(i)));
        }
        *out.entry(t.to_nameless()).or_insert(0) += 1;
    }
    out
}

fn placeholder(i: usize) -> String {
    // Not a valid surface identifier, so it cannot clash with user names.
    format!("#{i}")
}
