//! β-normalization and the canonical shape of formulas.
//!
//! The canonical normal form is β-normal, with every conjunction flattened
//! and re-nested to the right, and existentials that sit inside a
//! conjunction lifted in front of it (`A ∧ ∃x.B` becomes `∃x.(A ∧ B)`,
//! renaming `x` when it would capture). Conjunct order is never changed.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::term::{fresh_name, Term};
use crate::types::SemType;

#[derive(Clone, Debug, Error, PartialEq, Eq)]
#[error("normalization did not finish within {0} β-steps")]
pub struct FuelExhausted(pub u64);

/// Result of a bounded normalization run.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Normalized {
    pub term: Term,
    pub beta_steps: u64,
}

/// Full β-normal form in canonical formula shape.
///
/// Terminates on every well-typed term. Callers holding untrusted input
/// should use [`normalize_with_fuel`].
pub fn beta_normalize(t: &Term) -> Term {
    let mut steps = 0;
    let nf = reduce(t, &mut steps, u64::MAX).expect("unbounded fuel");
    canonicalize(&nf)
}

/// Like [`beta_normalize`] but gives up after `fuel` contractions.
pub fn normalize_with_fuel(t: &Term, fuel: u64) -> Result<Normalized, FuelExhausted> {
    let mut steps = 0;
    let nf = reduce(t, &mut steps, fuel)?;
    Ok(Normalized {
        term: canonicalize(&nf),
        beta_steps: steps,
    })
}

fn reduce(t: &Term, steps: &mut u64, fuel: u64) -> Result<Term, FuelExhausted> {
    Ok(match t {
        Term::Var(_) | Term::Const(..) => t.clone(),
        Term::Lam(x, ty, b) => Term::lam(x.clone(), ty.clone(), reduce(b, steps, fuel)?),
        Term::Exists(x, ty, b) => Term::exists(x.clone(), ty.clone(), reduce(b, steps, fuel)?),
        Term::And(l, r) => Term::and(reduce(l, steps, fuel)?, reduce(r, steps, fuel)?),
        Term::Cons(l, r) => Term::cons(reduce(l, steps, fuel)?, reduce(r, steps, fuel)?),
        Term::App(f, a) => match reduce(f, steps, fuel)? {
            Term::Lam(x, _, body) => {
                if *steps >= fuel {
                    return Err(FuelExhausted(fuel));
                }
                *steps += 1;
                reduce(&body.substitute(&x, a), steps, fuel)?
            }
            head => Term::app(head, reduce(a, steps, fuel)?),
        },
    })
}

/// Flattens conjunctions to the right and lifts existentials out of them.
/// Does not β-reduce.
pub fn canonicalize(t: &Term) -> Term {
    match t {
        Term::Var(_) | Term::Const(..) => t.clone(),
        Term::Lam(x, ty, b) => Term::lam(x.clone(), ty.clone(), canonicalize(b)),
        Term::Exists(x, ty, b) => Term::exists(x.clone(), ty.clone(), canonicalize(b)),
        Term::App(l, r) => Term::app(canonicalize(l), canonicalize(r)),
        Term::Cons(l, r) => Term::cons(canonicalize(l), canonicalize(r)),
        Term::And(l, r) => {
            let l = canonicalize(l);
            let r = canonicalize(r);
            let mut lift = Lift {
                avoid: t.free_vars(),
                prefix: Vec::new(),
                items: Vec::new(),
            };
            lift.push(l);
            lift.push(r);
            let body = Term::conjoin(lift.items).expect("conjunction has two sides");
            lift.prefix
                .into_iter()
                .rev()
                .fold(body, |acc, (x, ty)| Term::exists(x, ty, acc))
        }
    }
}

struct Lift {
    avoid: BTreeSet<String>,
    prefix: Vec<(String, SemType)>,
    items: Vec<Term>,
}

impl Lift {
    fn push(&mut self, t: Term) {
        match t {
            Term::And(l, r) => {
                self.push(*l);
                self.push(*r);
            }
            Term::Exists(x, ty, body) => {
                let (name, body) = if self.avoid.contains(&x) {
                    let y = fresh_name(&x, &self.avoid);
                    let body = body.substitute(&x, &Term::Var(y.clone()));
                    (y, body)
                } else {
                    (x, *body)
                };
                self.avoid.insert(name.clone());
                self.prefix.push((name, ty));
                self.push(body);
            }
            other => self.items.push(other),
        }
    }
}

/// An upper bound on the length of any β-reduction sequence from `t`:
/// a tower of exponentials of height `d + 1` over the term size, where `d`
/// bounds the height of every redex type occurring in `t`. Saturates at
/// `u64::MAX`.
pub fn step_bound(t: &Term) -> u64 {
    let mut height = 0;
    t.visit(&mut |s| match s {
        Term::Lam(_, ty, _) | Term::Exists(_, ty, _) | Term::Const(_, ty) => {
            height = height.max(ty.height());
        }
        _ => {}
    });
    // Subterm types are at most one level above the largest annotation,
    // which bounds the degree of every redex; one more level for the tower.
    let degree = height + 2;
    let mut bound = t.size() as u64;
    for _ in 0..degree {
        bound = if bound >= 64 { u64::MAX } else { 1u64 << bound };
        if bound == u64::MAX {
            break;
        }
    }
    bound
}
