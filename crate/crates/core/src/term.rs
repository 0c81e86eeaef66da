//! Typed λ-terms with named variables.
//!
//! Binders carry their type, constants carry theirs. Conjunction,
//! existential quantification and the context-list constructor `::` are
//! dedicated nodes rather than curried constants so that formulas can be
//! flattened and quantifier prefixes extracted.

use std::collections::{BTreeMap, BTreeSet};

use crate::types::SemType;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Term {
    Var(String),
    Const(String, SemType),
    Lam(String, SemType, Box<Term>),
    App(Box<Term>, Box<Term>),
    And(Box<Term>, Box<Term>),
    Exists(String, SemType, Box<Term>),
    Cons(Box<Term>, Box<Term>),
}

impl Term {
    pub fn var(name: impl Into<String>) -> Term {
        Term::Var(name.into())
    }

    pub fn constant(name: impl Into<String>, ty: SemType) -> Term {
        Term::Const(name.into(), ty)
    }

    pub fn lam(name: impl Into<String>, ty: SemType, body: Term) -> Term {
        Term::Lam(name.into(), ty, Box::new(body))
    }

    pub fn exists(name: impl Into<String>, ty: SemType, body: Term) -> Term {
        Term::Exists(name.into(), ty, Box::new(body))
    }

    pub fn app(fun: Term, arg: Term) -> Term {
        Term::App(Box::new(fun), Box::new(arg))
    }

    /// Left-nested application `fun a1 a2 ...`.
    pub fn apply<I: IntoIterator<Item = Term>>(fun: Term, args: I) -> Term {
        args.into_iter().fold(fun, Term::app)
    }

    pub fn and(left: Term, right: Term) -> Term {
        Term::And(Box::new(left), Box::new(right))
    }

    /// Right-nested conjunction of a non-empty list.
    pub fn conjoin(mut conjuncts: Vec<Term>) -> Option<Term> {
        let last = conjuncts.pop()?;
        Some(
            conjuncts
                .into_iter()
                .rev()
                .fold(last, |acc, c| Term::and(c, acc)),
        )
    }

    pub fn cons(head: Term, tail: Term) -> Term {
        Term::Cons(Box::new(head), Box::new(tail))
    }

    /// Splits `f a1 ... an` into `(f, [a1, ..., an])`.
    pub fn spine(&self) -> (&Term, Vec<&Term>) {
        let mut args = Vec::new();
        let mut head = self;
        while let Term::App(f, a) = head {
            args.push(a.as_ref());
            head = f;
        }
        args.reverse();
        (head, args)
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        collect_free(self, &mut Vec::new(), &mut out);
        out
    }

    pub fn is_free(&self, name: &str) -> bool {
        match self {
            Term::Var(x) => x == name,
            Term::Const(..) => false,
            Term::Lam(x, _, b) | Term::Exists(x, _, b) => x != name && b.is_free(name),
            Term::App(l, r) | Term::And(l, r) | Term::Cons(l, r) => {
                l.is_free(name) || r.is_free(name)
            }
        }
    }

    pub fn is_closed(&self) -> bool {
        self.free_vars().is_empty()
    }

    /// Every variable name occurring in the term, bound or free.
    pub fn all_var_names(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.visit(&mut |t| match t {
            Term::Var(x) | Term::Lam(x, ..) | Term::Exists(x, ..) => {
                out.insert(x.clone());
            }
            _ => {}
        });
        out
    }

    /// Constants with their types, keyed by name.
    pub fn constants(&self) -> BTreeMap<String, BTreeSet<SemType>> {
        let mut out: BTreeMap<String, BTreeSet<SemType>> = BTreeMap::new();
        self.visit(&mut |t| {
            if let Term::Const(c, ty) = t {
                out.entry(c.clone()).or_default().insert(ty.clone());
            }
        });
        out
    }

    /// Pre-order traversal.
    pub fn visit<F: FnMut(&Term)>(&self, f: &mut F) {
        f(self);
        match self {
            Term::Var(_) | Term::Const(..) => {}
            Term::Lam(_, _, b) | Term::Exists(_, _, b) => b.visit(f),
            Term::App(l, r) | Term::And(l, r) | Term::Cons(l, r) => {
                l.visit(f);
                r.visit(f);
            }
        }
    }

    pub fn size(&self) -> usize {
        let mut n = 0;
        self.visit(&mut |_| n += 1);
        n
    }

    /// Capture-avoiding `[value/name]self`.
    pub fn substitute(&self, name: &str, value: &Term) -> Term {
        let fv = value.free_vars();
        subst(self, name, value, &fv)
    }

    pub fn alpha_eq(&self, other: &Term) -> bool {
        alpha_equal(self, other)
    }

    pub fn to_nameless(&self) -> Nameless {
        nameless(self, &mut Vec::new())
    }
}

fn collect_free(t: &Term, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
    match t {
        Term::Var(x) => {
            if !bound.iter().any(|b| b == x) {
                out.insert(x.clone());
            }
        }
        Term::Const(..) => {}
        Term::Lam(x, _, b) | Term::Exists(x, _, b) => {
            bound.push(x.clone());
            collect_free(b, bound, out);
            bound.pop();
        }
        Term::App(l, r) | Term::And(l, r) | Term::Cons(l, r) => {
            collect_free(l, bound, out);
            collect_free(r, bound, out);
        }
    }
}

/// Picks `base` with the smallest numeric suffix (≥ 1) that is not in
/// `avoid`. Trailing digits and primes of `base` are stripped first, so
/// `e`, `e1` and `e'` all freshen to `e<n>`.
pub fn fresh_name(base: &str, avoid: &BTreeSet<String>) -> String {
    let stem = base.trim_end_matches(|c: char| c.is_ascii_digit() || c == '\'');
    let stem = if stem.is_empty() { "x" } else { stem };
    (1..)
        .map(|n| format!("{stem}{n}"))
        .find(|cand| !avoid.contains(cand))
        .expect("unbounded suffix search")
}

fn subst(t: &Term, x: &str, s: &Term, fv_s: &BTreeSet<String>) -> Term {
    match t {
        Term::Var(y) => {
            if y == x {
                s.clone()
            } else {
                t.clone()
            }
        }
        Term::Const(..) => t.clone(),
        Term::App(l, r) => Term::app(subst(l, x, s, fv_s), subst(r, x, s, fv_s)),
        Term::And(l, r) => Term::and(subst(l, x, s, fv_s), subst(r, x, s, fv_s)),
        Term::Cons(l, r) => Term::cons(subst(l, x, s, fv_s), subst(r, x, s, fv_s)),
        Term::Lam(y, ty, body) | Term::Exists(y, ty, body) => {
            let rebuild = |name: String, body: Term| match t {
                Term::Lam(..) => Term::Lam(name, ty.clone(), Box::new(body)),
                _ => Term::Exists(name, ty.clone(), Box::new(body)),
            };
            if y == x || !body.is_free(x) {
                return t.clone();
            }
            if fv_s.contains(y) {
                let mut avoid = fv_s.clone();
                avoid.extend(body.free_vars());
                avoid.insert(x.to_string());
                let y2 = fresh_name(y, &avoid);
                let renamed = body.substitute(y, &Term::Var(y2.clone()));
                rebuild(y2, subst(&renamed, x, s, fv_s))
            } else {
                rebuild(y.clone(), subst(body, x, s, fv_s))
            }
        }
    }
}

/// Locally nameless view: bound variables become de Bruijn indices, free
/// variables keep their names. Two terms are α-equivalent iff their
/// nameless forms are equal.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Nameless {
    Bound(usize),
    Free(String),
    Const(String, SemType),
    Lam(SemType, Box<Nameless>),
    App(Box<Nameless>, Box<Nameless>),
    And(Box<Nameless>, Box<Nameless>),
    Exists(SemType, Box<Nameless>),
    Cons(Box<Nameless>, Box<Nameless>),
}

fn nameless(t: &Term, scope: &mut Vec<String>) -> Nameless {
    match t {
        Term::Var(x) => match scope.iter().rev().position(|b| b == x) {
            Some(i) => Nameless::Bound(i),
            None => Nameless::Free(x.clone()),
        },
        Term::Const(c, ty) => Nameless::Const(c.clone(), ty.clone()),
        Term::Lam(x, ty, b) | Term::Exists(x, ty, b) => {
            scope.push(x.clone());
            let body = Box::new(nameless(b, scope));
            scope.pop();
            match t {
                Term::Lam(..) => Nameless::Lam(ty.clone(), body),
                _ => Nameless::Exists(ty.clone(), body),
            }
        }
        Term::App(l, r) => {
            Nameless::App(Box::new(nameless(l, scope)), Box::new(nameless(r, scope)))
        }
        Term::And(l, r) => {
            Nameless::And(Box::new(nameless(l, scope)), Box::new(nameless(r, scope)))
        }
        Term::Cons(l, r) => {
            Nameless::Cons(Box::new(nameless(l, scope)), Box::new(nameless(r, scope)))
        }
    }
}

/// True iff the terms differ only by consistent renaming of bound variables.
pub fn alpha_equal(t1: &Term, t2: &Term) -> bool {
    t1.to_nameless() == t2.to_nameless()
}

pub fn substitute(t: &Term, x: &str, s: &Term) -> Term {
    t.substitute(x, s)
}
