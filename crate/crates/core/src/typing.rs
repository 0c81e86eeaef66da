//! Type checking of fully annotated terms.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::term::Term;
use crate::types::{Atom, SemType};

/// Types of the free variables of a term.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TypingEnv {
    vars: BTreeMap<String, SemType>,
}

impl TypingEnv {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with(mut self, name: impl Into<String>, ty: SemType) -> Self {
        self.vars.insert(name.into(), ty);
        self
    }

    pub fn insert(&mut self, name: impl Into<String>, ty: SemType) -> Option<SemType> {
        self.vars.insert(name.into(), ty)
    }

    pub fn get(&self, name: &str) -> Option<&SemType> {
        self.vars.get(name)
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.vars.keys().map(String::as_str)
    }
}

/// One step from a term to one of its children.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PathStep {
    Fun,
    Arg,
    Body,
    Left,
    Right,
    Head,
    Tail,
}

/// Position of a subterm, as the steps taken from the root.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TermPath(pub Vec<PathStep>);

impl fmt::Display for TermPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("<root>");
        }
        let parts: Vec<&str> = self
            .0
            .iter()
            .map(|s| match s {
                PathStep::Fun => "fun",
                PathStep::Arg => "arg",
                PathStep::Body => "body",
                PathStep::Left => "left",
                PathStep::Right => "right",
                PathStep::Head => "head",
                PathStep::Tail => "tail",
            })
            .collect();
        f.write_str(&parts.join("."))
    }
}

/// What the checker wanted at a position.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expected {
    Type(SemType),
    /// A function accepting the given argument type.
    FunctionFrom(SemType),
    /// ι or v, the element types allowed in a context list.
    ContextElement,
}

impl fmt::Display for Expected {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expected::Type(t) => write!(f, "{t}"),
            Expected::FunctionFrom(t) => write!(f, "{t}→?"),
            Expected::ContextElement => f.write_str("ι or v"),
        }
    }
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum TypeError {
    #[error("type mismatch at {location}: expected {expected}, found {found}")]
    TypeMismatch {
        location: TermPath,
        expected: Expected,
        found: SemType,
    },
    #[error("unbound variable `{0}`")]
    UnboundVariable(String),
}

/// Returns the type of `t` given types for its free variables.
pub fn typecheck(t: &Term, env: &TypingEnv) -> Result<SemType, TypeError> {
    let mut scope: Vec<(String, SemType)> = Vec::new();
    let mut path = Vec::new();
    check(t, env, &mut scope, &mut path)
}

fn mismatch(path: &[PathStep], expected: Expected, found: SemType) -> TypeError {
    TypeError::TypeMismatch {
        location: TermPath(path.to_vec()),
        expected,
        found,
    }
}

fn check(
    t: &Term,
    env: &TypingEnv,
    scope: &mut Vec<(String, SemType)>,
    path: &mut Vec<PathStep>,
) -> Result<SemType, TypeError> {
    let child = |step, sub: &Term, scope: &mut Vec<(String, SemType)>, path: &mut Vec<PathStep>| {
        path.push(step);
        let r = check(sub, env, scope, path);
        path.pop();
        r
    };
    match t {
        Term::Var(x) => scope
            .iter()
            .rev()
            .find(|(n, _)| n == x)
            .map(|(_, ty)| ty.clone())
            .or_else(|| env.get(x).cloned())
            .ok_or_else(|| TypeError::UnboundVariable(x.clone())),
        Term::Const(_, ty) => Ok(ty.clone()),
        Term::Lam(x, ty, body) => {
            scope.push((x.clone(), ty.clone()));
            let body_ty = child(PathStep::Body, body, scope, path);
            scope.pop();
            Ok(SemType::arrow(ty.clone(), body_ty?))
        }
        Term::Exists(x, ty, body) => {
            scope.push((x.clone(), ty.clone()));
            let body_ty = child(PathStep::Body, body, scope, path);
            scope.pop();
            let body_ty = body_ty?;
            if !body_ty.is_atom(Atom::Prop) {
                path.push(PathStep::Body);
                let e = mismatch(path, Expected::Type(SemType::PROP), body_ty);
                path.pop();
                return Err(e);
            }
            Ok(SemType::PROP)
        }
        Term::App(f, a) => {
            let f_ty = child(PathStep::Fun, f, scope, path)?;
            let a_ty = child(PathStep::Arg, a, scope, path)?;
            match f_ty.as_arrow() {
                Some((dom, cod)) if *dom == a_ty => Ok(cod.clone()),
                Some((dom, _)) => {
                    path.push(PathStep::Arg);
                    let e = mismatch(path, Expected::Type(dom.clone()), a_ty);
                    path.pop();
                    Err(e)
                }
                None => {
                    path.push(PathStep::Fun);
                    let e = mismatch(path, Expected::FunctionFrom(a_ty), f_ty);
                    path.pop();
                    Err(e)
                }
            }
        }
        Term::And(l, r) => {
            for (step, side) in [(PathStep::Left, l), (PathStep::Right, r)] {
                let ty = child(step, side, scope, path)?;
                if !ty.is_atom(Atom::Prop) {
                    path.push(step);
                    let e = mismatch(path, Expected::Type(SemType::PROP), ty);
                    path.pop();
                    return Err(e);
                }
            }
            Ok(SemType::PROP)
        }
        Term::Cons(h, tl) => {
            let h_ty = child(PathStep::Head, h, scope, path)?;
            if !(h_ty.is_atom(Atom::Ind) || h_ty.is_atom(Atom::Event)) {
                path.push(PathStep::Head);
                let e = mismatch(path, Expected::ContextElement, h_ty);
                path.pop();
                return Err(e);
            }
            let t_ty = child(PathStep::Tail, tl, scope, path)?;
            if !t_ty.is_atom(Atom::Ctx) {
                path.push(PathStep::Tail);
                let e = mismatch(path, Expected::Type(SemType::CTX), t_ty);
                path.pop();
                return Err(e);
            }
            Ok(SemType::CTX)
        }
    }
}
