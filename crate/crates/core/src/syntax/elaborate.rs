//! Turns surface syntax into fully annotated terms.
//!
//! Identifiers bound by an enclosing λ/∃ (or listed as free variables)
//! become variables; every other identifier is a constant. Missing binder
//! annotations and unknown constant types are inferred by first-order
//! unification. Whatever is still undetermined afterwards is defaulted:
//! ∃-binders, context-list heads and the first argument of an unknown
//! constant become `v`, results of applying an unknown constant become `t`,
//! and everything else becomes `ι`.

use std::collections::BTreeMap;

use super::parser::{Range, Surface};
use super::{ParseError, SourceSpan, SyntaxError};
use crate::term::Term;
use crate::types::{Atom, SemType};
use crate::typing::TypingEnv;

/// Known constant types. Constants missing from the signature get their
/// type inferred and recorded.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Signature {
    consts: BTreeMap<String, SemType>,
}

impl Signature {
    pub fn new() -> Self {
        Self::default()
    }

    /// The mode-independent operators: freezing constants, the empty
    /// context, context selectors and discourse-relation constants.
    pub fn core() -> Self {
        let ctx = SemType::CTX;
        let prop = SemType::PROP;
        let ev = SemType::EVENT;
        let mut s = Signature::new();
        s.insert("A", ctx.clone());
        s.insert("B", SemType::arrow(ctx.clone(), prop.clone()));
        s.insert("nil", ctx.clone());
        s.insert("Sel", SemType::arrow(ctx.clone(), ev.clone()));
        s.insert("Del", SemType::arrow(ctx.clone(), ctx.clone()));
        s.insert(
            "Rel2",
            SemType::curried([ev.clone(), ev.clone()], prop.clone()),
        );
        s.insert("Rel3", SemType::curried([ev.clone(), ev.clone(), ev], prop));
        for pronoun in ["sel_she", "sel_he", "sel_it"] {
            s.insert(pronoun, SemType::arrow(ctx.clone(), SemType::IND));
        }
        s
    }

    pub fn insert(&mut self, name: impl Into<String>, ty: SemType) -> Option<SemType> {
        self.consts.insert(name.into(), ty)
    }

    pub fn get(&self, name: &str) -> Option<&SemType> {
        self.consts.get(name)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &SemType)> {
        self.consts.iter().map(|(k, v)| (k.as_str(), v))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum MType {
    Atom(Atom),
    Arrow(Box<MType>, Box<MType>),
    Meta(usize),
}

impl From<&SemType> for MType {
    fn from(t: &SemType) -> Self {
        match t {
            SemType::Atom(a) => MType::Atom(*a),
            SemType::Arrow(d, c) => MType::Arrow(
                Box::new(MType::from(d.as_ref())),
                Box::new(MType::from(c.as_ref())),
            ),
        }
    }
}

/// Elaborated term with possibly unresolved types.
enum ETerm {
    Var(String),
    Const(String, MType),
    Lam(String, MType, Box<ETerm>),
    Exists(String, MType, Box<ETerm>),
    App(Box<ETerm>, Box<ETerm>),
    And(Box<ETerm>, Box<ETerm>),
    Cons(Box<ETerm>, Box<ETerm>),
}

struct Elab<'a> {
    src: &'a str,
    metas: Vec<Option<MType>>,
    /// Metas that default to v instead of ι.
    event_defaults: Vec<usize>,
    /// Metas that default to t instead of ι.
    prop_defaults: Vec<usize>,
    /// Constants whose type is being inferred.
    unknown: std::collections::BTreeSet<String>,
    /// Context-list heads, checked for ι/v after defaulting.
    cons_heads: Vec<(MType, Range)>,
    sig: &'a Signature,
    local_consts: BTreeMap<String, MType>,
    free: BTreeMap<String, MType>,
    scope: Vec<(String, MType)>,
}

impl<'a> Elab<'a> {
    fn fresh(&mut self) -> MType {
        self.metas.push(None);
        MType::Meta(self.metas.len() - 1)
    }

    fn resolve(&self, t: &MType) -> MType {
        match t {
            MType::Meta(m) => match &self.metas[*m] {
                Some(b) => self.resolve(b),
                None => t.clone(),
            },
            MType::Arrow(d, c) => {
                MType::Arrow(Box::new(self.resolve(d)), Box::new(self.resolve(c)))
            }
            MType::Atom(_) => t.clone(),
        }
    }

    fn occurs(&self, m: usize, t: &MType) -> bool {
        match self.resolve(t) {
            MType::Meta(n) => n == m,
            MType::Arrow(d, c) => self.occurs(m, &d) || self.occurs(m, &c),
            MType::Atom(_) => false,
        }
    }

    fn unify(&mut self, a: &MType, b: &MType) -> bool {
        let a = self.resolve(a);
        let b = self.resolve(b);
        match (&a, &b) {
            (MType::Meta(m), MType::Meta(n)) if m == n => true,
            (MType::Meta(m), other) | (other, MType::Meta(m)) => {
                if self.occurs(*m, other) {
                    return false;
                }
                self.metas[*m] = Some(other.clone());
                true
            }
            (MType::Atom(x), MType::Atom(y)) => x == y,
            (MType::Arrow(d1, c1), MType::Arrow(d2, c2)) => {
                self.unify(d1, d2) && self.unify(c1, c2)
            }
            _ => false,
        }
    }

    fn show(&self, t: &MType) -> String {
        fn go(t: &MType, out: &mut String) {
            match t {
                MType::Atom(a) => out.push_str(a.unicode()),
                MType::Meta(_) => out.push('?'),
                MType::Arrow(d, c) => {
                    if matches!(**d, MType::Arrow(..)) {
                        out.push('(');
                        go(d, out);
                        out.push(')');
                    } else {
                        go(d, out);
                    }
                    out.push('→');
                    go(c, out);
                }
            }
        }
        let mut s = String::new();
        go(&self.resolve(t), &mut s);
        s
    }

    fn expect(&mut self, range: Range, expected: &MType, found: &MType) -> Result<(), SyntaxError> {
        if self.unify(expected, found) {
            Ok(())
        } else {
            Err(SyntaxError::TypeMismatch {
                span: SourceSpan::from_bytes(self.src, range.start, range.end - range.start),
                expected: self.show(expected),
                found: self.show(found),
            })
        }
    }

    fn infer(&mut self, s: &Surface) -> Result<(ETerm, MType), SyntaxError> {
        match s {
            Surface::Ident(name, _) => {
                if let Some((_, ty)) = self.scope.iter().rev().find(|(n, _)| n == name) {
                    return Ok((ETerm::Var(name.clone()), ty.clone()));
                }
                if let Some(ty) = self.free.get(name) {
                    return Ok((ETerm::Var(name.clone()), ty.clone()));
                }
                let ty = match self.local_consts.get(name) {
                    Some(t) => t.clone(),
                    None => {
                        let t = match self.sig.get(name) {
                            Some(t) => MType::from(t),
                            None => {
                                self.unknown.insert(name.clone());
                                self.fresh()
                            }
                        };
                        self.local_consts.insert(name.clone(), t.clone());
                        t
                    }
                };
                Ok((ETerm::Const(name.clone(), ty.clone()), ty))
            }
            Surface::Ascribe(inner, ty, range) => {
                let want = MType::from(ty);
                // An ascribed constant is typed by its ascription alone, so
                // one name may appear at several types.
                if let Surface::Ident(name, _) = inner.as_ref() {
                    let bound =
                        self.scope.iter().any(|(n, _)| n == name) || self.free.contains_key(name);
                    if !bound {
                        return Ok((ETerm::Const(name.clone(), want.clone()), want));
                    }
                }
                let (t, found) = self.infer(inner)?;
                self.expect(*range, &want, &found)?;
                Ok((t, want))
            }
            Surface::Lam(binders, body, _) | Surface::Exists(binders, body, _) => {
                let is_lam = matches!(s, Surface::Lam(..));
                let mut tys = Vec::new();
                for b in binders {
                    let ty = match &b.ty {
                        Some(t) => MType::from(t),
                        None => {
                            let m = self.fresh();
                            if !is_lam {
                                if let MType::Meta(i) = m {
                                    self.event_defaults.push(i);
                                }
                            }
                            m
                        }
                    };
                    self.scope.push((b.name.clone(), ty.clone()));
                    tys.push(ty);
                }
                let result = self.infer(body);
                for _ in binders {
                    self.scope.pop();
                }
                let (mut term, mut ty) = result?;
                if !is_lam {
                    let prop = MType::Atom(Atom::Prop);
                    self.expect(body.range(), &prop, &ty)?;
                }
                for (b, bty) in binders.iter().zip(tys).rev() {
                    if is_lam {
                        ty = MType::Arrow(Box::new(bty.clone()), Box::new(ty));
                        term = ETerm::Lam(b.name.clone(), bty, Box::new(term));
                    } else {
                        term = ETerm::Exists(b.name.clone(), bty, Box::new(term));
                    }
                }
                Ok((term, ty))
            }
            Surface::App(f, a, _) => {
                let (ft, fty) = self.infer(f)?;
                let (at, aty) = self.infer(a)?;
                let res = self.fresh();
                let want = MType::Arrow(Box::new(aty.clone()), Box::new(res.clone()));
                if !self.unify(&fty, &want) {
                    let fty_r = self.resolve(&fty);
                    return Err(match fty_r {
                        MType::Arrow(d, _) => SyntaxError::TypeMismatch {
                            span: span_of(self.src, a.range()),
                            expected: self.show(&d),
                            found: self.show(&aty),
                        },
                        other => SyntaxError::TypeMismatch {
                            span: span_of(self.src, f.range()),
                            expected: format!("{}→?", self.show(&aty)),
                            found: self.show(&other),
                        },
                    });
                }
                let (head, depth) = spine_head(f);
                if let Surface::Ident(name, _) = head {
                    if self.unknown.contains(name) && !self.is_bound(name) {
                        if depth == 0 {
                            if let MType::Meta(i) = self.resolve(&aty) {
                                self.event_defaults.push(i);
                            }
                        }
                        if let MType::Meta(i) = self.resolve(&res) {
                            self.prop_defaults.push(i);
                        }
                    }
                }
                Ok((ETerm::App(Box::new(ft), Box::new(at)), res))
            }
            Surface::And(l, r, _) => {
                let prop = MType::Atom(Atom::Prop);
                let (lt, lty) = self.infer(l)?;
                self.expect(l.range(), &prop, &lty)?;
                let (rt, rty) = self.infer(r)?;
                self.expect(r.range(), &prop, &rty)?;
                Ok((ETerm::And(Box::new(lt), Box::new(rt)), prop))
            }
            Surface::Cons(h, t, _) => {
                let (ht, hty) = self.infer(h)?;
                if let MType::Meta(i) = self.resolve(&hty) {
                    self.event_defaults.push(i);
                }
                self.cons_heads.push((hty, h.range()));
                let (tt, tty) = self.infer(t)?;
                let ctx = MType::Atom(Atom::Ctx);
                self.expect(t.range(), &ctx, &tty)?;
                Ok((ETerm::Cons(Box::new(ht), Box::new(tt)), ctx))
            }
        }
    }

    fn is_bound(&self, name: &str) -> bool {
        self.scope.iter().any(|(n, _)| n == name) || self.free.contains_key(name)
    }

    fn apply_defaults(&mut self) {
        let event = std::mem::take(&mut self.event_defaults);
        let prop = std::mem::take(&mut self.prop_defaults);
        for (metas, atom) in [(event, Atom::Event), (prop, Atom::Prop)] {
            for i in metas {
                if let MType::Meta(m) = self.resolve(&MType::Meta(i)) {
                    self.metas[m] = Some(MType::Atom(atom));
                }
            }
        }
    }

    fn ground(&mut self, t: &MType) -> SemType {
        match self.resolve(t) {
            MType::Atom(a) => SemType::Atom(a),
            MType::Arrow(d, c) => SemType::arrow(self.ground(&d), self.ground(&c)),
            MType::Meta(m) => {
                self.metas[m] = Some(MType::Atom(Atom::Ind));
                SemType::IND
            }
        }
    }

    fn zonk(&mut self, t: ETerm) -> Term {
        match t {
            ETerm::Var(x) => Term::Var(x),
            ETerm::Const(c, ty) => Term::Const(c, self.ground(&ty)),
            ETerm::Lam(x, ty, b) => {
                let ty = self.ground(&ty);
                Term::lam(x, ty, self.zonk(*b))
            }
            ETerm::Exists(x, ty, b) => {
                let ty = self.ground(&ty);
                Term::exists(x, ty, self.zonk(*b))
            }
            ETerm::App(f, a) => Term::app(self.zonk(*f), self.zonk(*a)),
            ETerm::And(l, r) => Term::and(self.zonk(*l), self.zonk(*r)),
            ETerm::Cons(h, t) => Term::cons(self.zonk(*h), self.zonk(*t)),
        }
    }
}

/// Head of an application spine and the number of arguments between it
/// and `s`.
fn spine_head(s: &Surface) -> (&Surface, usize) {
    match s {
        Surface::App(f, _, _) => {
            let (h, d) = spine_head(f);
            (h, d + 1)
        }
        other => (other, 0),
    }
}

fn span_of(src: &str, r: Range) -> SourceSpan {
    SourceSpan::from_bytes(src, r.start, r.end - r.start)
}

/// Elaborates `surface`, optionally against an expected type. Newly
/// inferred constant types are added to `sig`.
pub(crate) fn elaborate(
    src: &str,
    surface: &Surface,
    sig: &mut Signature,
    expected: Option<&SemType>,
    free: &TypingEnv,
) -> Result<(Term, SemType), SyntaxError> {
    let snapshot = sig.clone();
    let mut e = Elab {
        src,
        metas: Vec::new(),
        event_defaults: Vec::new(),
        prop_defaults: Vec::new(),
        unknown: Default::default(),
        cons_heads: Vec::new(),
        sig: &snapshot,
        local_consts: BTreeMap::new(),
        free: free
            .names()
            .map(|n| {
                (
                    n.to_string(),
                    MType::from(free.get(n).expect("listed name")),
                )
            })
            .collect(),
        scope: Vec::new(),
    };
    let (term, ty) = e.infer(surface)?;
    if let Some(want) = expected {
        e.expect(surface.range(), &MType::from(want), &ty)?;
    }
    e.apply_defaults();
    for (hty, range) in std::mem::take(&mut e.cons_heads) {
        let g = e.ground(&hty);
        if !(g.is_atom(Atom::Ind) || g.is_atom(Atom::Event)) {
            return Err(SyntaxError::TypeMismatch {
                span: span_of(src, range),
                expected: "ι or v".into(),
                found: g.to_string(),
            });
        }
    }
    let term = e.zonk(term);
    let ty = e.ground(&ty);
    let inferred: Vec<(String, MType)> = e.local_consts.clone().into_iter().collect();
    for (name, mty) in inferred {
        if snapshot.get(&name).is_none() {
            let g = e.ground(&mty);
            sig.insert(name, g);
        }
    }
    Ok((term, ty))
}

impl ParseError {
    pub(crate) fn at(
        src: &str,
        start: usize,
        len: usize,
        message: impl Into<String>,
    ) -> ParseError {
        ParseError {
            span: SourceSpan::from_bytes(src, start, len),
            message: message.into(),
        }
    }
}
