//! Term printing.
//!
//! [`render`] prints as little type information as it can get away with:
//! it tries the bare form first, then annotates binders, then ascribes
//! every constant, and returns the first form that parses back to an
//! α-equal term.

use std::collections::BTreeSet;

use super::lexer::is_identifier;
use crate::term::{alpha_equal, fresh_name, Term};
use crate::types::{SemType, Style};

/// How much type information to print.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Annotation {
    Bare,
    Binders,
    Full,
}

/// Renders `t` so that it parses back to an α-equal term (for closed,
/// well-typed terms).
pub fn render(t: &Term, style: Style) -> String {
    let t = sanitize_binders(t);
    for level in [Annotation::Bare, Annotation::Binders] {
        if let Some(text) = render_selective(&t, style, level) {
            return text;
        }
    }
    render_with(&t, style, Annotation::Full)
}

/// Renders at `level`, ascribing just the constants that read back at the
/// wrong type. Atomic constants go first since they usually pin down the
/// predicates around them.
fn render_selective(t: &Term, style: Style, level: Annotation) -> Option<String> {
    let actual = t.constants();
    let mut chosen = BTreeSet::new();
    loop {
        let text = Printer::new(style, level, &chosen).print(t);
        let back = super::parse_term(&text).ok()?;
        if alpha_equal(&back, t) {
            return Some(text);
        }
        let read = back.constants();
        let wrong: Vec<&String> = actual
            .iter()
            .filter(|(c, tys)| !chosen.contains(*c) && read.get(*c) != Some(tys))
            .map(|(c, _)| c)
            .collect();
        let atomic: Vec<&String> = wrong
            .iter()
            .copied()
            .filter(|c| actual[*c].iter().all(|ty| matches!(ty, SemType::Atom(_))))
            .collect();
        let add = if atomic.is_empty() { wrong } else { atomic };
        if add.is_empty() {
            return None;
        }
        chosen.extend(add.into_iter().cloned());
    }
}

/// Renders `t` at a fixed annotation level, without a round-trip check.
pub fn render_with(t: &Term, style: Style, level: Annotation) -> String {
    Printer::new(style, level, &BTreeSet::new()).print(t)
}

/// Renames binders that would read back as something else: names that are
/// not identifiers, and names shared with a constant.
fn sanitize_binders(t: &Term) -> Term {
    let consts: BTreeSet<String> = t.constants().into_keys().collect();
    let mut avoid = t.all_var_names();
    avoid.extend(consts.iter().cloned());
    go(t, &consts, &mut avoid)
}

fn go(t: &Term, consts: &BTreeSet<String>, avoid: &mut BTreeSet<String>) -> Term {
    let rebind = |x: &String, body: &Term, avoid: &mut BTreeSet<String>| -> (String, Term) {
        if is_identifier(x) && !consts.contains(x) {
            return (x.clone(), body.clone());
        }
        let base = if is_identifier(x) { x.as_str() } else { "x" };
        let y = fresh_name(base, avoid);
        avoid.insert(y.clone());
        (y.clone(), body.substitute(x, &Term::Var(y)))
    };
    match t {
        Term::Var(_) | Term::Const(..) => t.clone(),
        Term::Lam(x, ty, b) => {
            let (y, b) = rebind(x, b, avoid);
            Term::lam(y, ty.clone(), go(&b, consts, avoid))
        }
        Term::Exists(x, ty, b) => {
            let (y, b) = rebind(x, b, avoid);
            Term::exists(y, ty.clone(), go(&b, consts, avoid))
        }
        Term::App(f, a) => Term::app(go(f, consts, avoid), go(a, consts, avoid)),
        Term::And(l, r) => Term::and(go(l, consts, avoid), go(r, consts, avoid)),
        Term::Cons(h, tl) => Term::cons(go(h, consts, avoid), go(tl, consts, avoid)),
    }
}

struct Printer<'a> {
    style: Style,
    level: Annotation,
    /// Constants ascribed below the `Full` level.
    ascribe: &'a BTreeSet<String>,
}

impl<'a> Printer<'a> {
    fn new(style: Style, level: Annotation, ascribe: &'a BTreeSet<String>) -> Self {
        Printer {
            style,
            level,
            ascribe,
        }
    }

    fn print(&self, t: &Term) -> String {
        let mut out = String::new();
        self.term(t, &mut out);
        out
    }

    fn ascribed(&self, c: &str) -> bool {
        self.level == Annotation::Full || self.ascribe.contains(c)
    }

    fn unicode(&self) -> bool {
        self.style == Style::Unicode
    }

    fn ty(&self, t: &SemType) -> String {
        t.display(self.style).to_string()
    }

    /// Any term, in a position that extends to the end of the enclosing
    /// group.
    fn term(&self, t: &Term, out: &mut String) {
        match t {
            Term::Lam(..) | Term::Exists(..) => self.binder(t, out),
            Term::And(..) => self.conj(t, out),
            _ => self.app_level(t, out),
        }
    }

    fn binder(&self, t: &Term, out: &mut String) {
        let is_lam = matches!(t, Term::Lam(..));
        let mut binders = Vec::new();
        let mut body = t;
        while let (Term::Lam(x, ty, b), true) | (Term::Exists(x, ty, b), false) = (body, is_lam) {
            binders.push((x, ty));
            body = b;
        }
        out.push_str(match (is_lam, self.unicode()) {
            (true, true) => "λ",
            (true, false) => "\\",
            (false, true) => "∃",
            (false, false) => "EX ",
        });
        let annotate = self.level >= Annotation::Binders;
        for (i, (x, ty)) in binders.iter().enumerate() {
            if i > 0 {
                out.push_str(if annotate { ", " } else { " " });
            }
            out.push_str(x);
            if annotate {
                out.push(':');
                out.push_str(&self.ty(ty));
            }
        }
        out.push('.');
        if !self.unicode() {
            out.push(' ');
        }
        if matches!(body, Term::And(..)) {
            out.push('(');
            self.conj(body, out);
            out.push(')');
        } else {
            self.term(body, out);
        }
    }

    fn conj(&self, t: &Term, out: &mut String) {
        let sep = if self.unicode() { " ∧ " } else { " & " };
        let mut cur = t;
        loop {
            match cur {
                Term::And(l, r) => {
                    self.conj_operand(l, out);
                    out.push_str(sep);
                    cur = r;
                }
                last => {
                    self.conj_operand(last, out);
                    break;
                }
            }
        }
    }

    fn conj_operand(&self, t: &Term, out: &mut String) {
        match t {
            Term::And(..) | Term::Lam(..) | Term::Exists(..) => self.parens(t, out),
            _ => self.app_level(t, out),
        }
    }

    fn app_level(&self, t: &Term, out: &mut String) {
        match t {
            Term::App(..) => self.app(t, out),
            Term::Cons(h, tl) => self.cons(h, tl, out),
            _ => self.primary(t, out),
        }
    }

    fn sugar_head<'t>(&self, t: &'t Term) -> Option<&'t str> {
        match t {
            Term::Var(x) => Some(x),
            Term::Const(c, _) if !self.ascribed(c) => Some(c),
            _ => None,
        }
    }

    fn app(&self, t: &Term, out: &mut String) {
        let (head, args) = t.spine();
        if let Some(name) = self.sugar_head(head) {
            out.push_str(name);
            out.push('(');
            for (i, a) in args.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                self.term(a, out);
            }
            out.push(')');
            return;
        }
        self.primary(head, out);
        for a in args {
            out.push(' ');
            self.primary(a, out);
        }
    }

    fn cons(&self, head: &Term, tail: &Term, out: &mut String) {
        self.primary(head, out);
        out.push_str("::");
        match tail {
            Term::Cons(h, t) => self.cons(h, t, out),
            other => self.primary(other, out),
        }
    }

    /// A self-delimiting rendering.
    fn primary(&self, t: &Term, out: &mut String) {
        match t {
            Term::Var(x) => out.push_str(x),
            Term::Const(c, ty) => {
                if self.ascribed(c) {
                    out.push('(');
                    out.push_str(c);
                    out.push_str(" : ");
                    out.push_str(&self.ty(ty));
                    out.push(')');
                } else {
                    out.push_str(c);
                }
            }
            Term::App(..) if self.sugar_head(t.spine().0).is_some() => self.app(t, out),
            _ => self.parens(t, out),
        }
    }

    fn parens(&self, t: &Term, out: &mut String) {
        out.push('(');
        self.term(t, out);
        out.push(')');
    }
}
