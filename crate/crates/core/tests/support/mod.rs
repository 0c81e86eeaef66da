//! Shared generators and reference implementations for the integration
//! tests. The oracles here are written independently of the library's own
//! algorithms.

#![allow(dead_code)]

pub mod criteria;
pub mod props;

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use discsem::graph::{DiscourseGraph, Relation};
use discsem::{SemType, Term};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

// ---------------------------------------------------------------------------
// Random well-typed terms

/// Binder names are drawn from a small pool so shadowing and capture
/// situations come up often.
const NAMES: [&str; 5] = ["x", "y", "z", "e", "a"];

fn atoms() -> [SemType; 4] {
    [SemType::IND, SemType::PROP, SemType::EVENT, SemType::CTX]
}

fn small_type(rng: &mut impl Rng, depth: u32) -> SemType {
    if depth == 0 || rng.gen_bool(0.6) {
        atoms().choose(rng).unwrap().clone()
    } else {
        SemType::arrow(small_type(rng, depth - 1), small_type(rng, depth - 1))
    }
}

/// Constants have one type per name, so the only overloading comes from
/// the generator's deliberate reuse below.
fn constant_of(rng: &mut impl Rng, ty: &SemType) -> Term {
    let name = match ty {
        t if *t == SemType::IND => ["john", "mary"].choose(rng).unwrap().to_string(),
        t if *t == SemType::PROP => ["p", "q"].choose(rng).unwrap().to_string(),
        t if *t == SemType::EVENT => "ev".to_string(),
        t if *t == SemType::CTX => "nil".to_string(),
        t if *t == SemType::arrow(SemType::EVENT, SemType::PROP) => {
            ["Smile", "Run"].choose(rng).unwrap().to_string()
        }
        other => format!("k{}", type_tag(other)),
    };
    Term::constant(name, ty.clone())
}

fn type_tag(t: &SemType) -> String {
    match t.as_arrow() {
        None => t.display(discsem::Style::Ascii).to_string(),
        Some((d, c)) => {
            format!("{}{}", type_tag(d), type_tag(c)).replace(['(', ')', '-', '>', ' '], "")
        }
    }
}

pub struct TermGen<'r, R: Rng> {
    pub rng: &'r mut R,
    pub budget: usize,
}

impl<'r, R: Rng> TermGen<'r, R> {
    pub fn new(rng: &'r mut R, budget: usize) -> Self {
        TermGen { rng, budget }
    }

    /// A term of type `ty` whose free variables are among `ctx`.
    pub fn term(&mut self, ty: &SemType, ctx: &[(String, SemType)], depth: u32) -> Term {
        self.budget = self.budget.saturating_sub(1);
        // Only the innermost binding of a name is visible.
        let vars: Vec<&String> = ctx
            .iter()
            .enumerate()
            .filter(|(i, (x, t))| t == ty && !ctx[i + 1..].iter().any(|(y, _)| y == x))
            .map(|(_, (x, _))| x)
            .collect();
        if depth == 0 || self.budget == 0 {
            return self.leaf(ty, ctx, &vars);
        }
        let choice = self.rng.gen_range(0..10);
        if choice < 2 {
            return self.leaf(ty, ctx, &vars);
        }
        if choice < 5 || (ty.as_arrow().is_none() && *ty != SemType::PROP && *ty != SemType::CTX) {
            let arg_ty = small_type(self.rng, 1);
            let fun_ty = SemType::arrow(arg_ty.clone(), ty.clone());
            let f = if self.rng.gen_bool(0.6) {
                self.lambda(&fun_ty, ctx, depth)
            } else {
                self.term(&fun_ty, ctx, depth - 1)
            };
            return Term::app(f, self.term(&arg_ty, ctx, depth - 1));
        }
        if ty.as_arrow().is_some() {
            return self.lambda(ty, ctx, depth);
        }
        if *ty == SemType::CTX {
            let hty = [SemType::IND, SemType::EVENT]
                .choose(self.rng)
                .unwrap()
                .clone();
            return Term::cons(
                self.term(&hty, ctx, depth - 1),
                self.term(ty, ctx, depth - 1),
            );
        }
        if choice < 8 {
            Term::and(self.term(ty, ctx, depth - 1), self.term(ty, ctx, depth - 1))
        } else {
            let x = NAMES.choose(self.rng).unwrap().to_string();
            let bty = [SemType::IND, SemType::EVENT]
                .choose(self.rng)
                .unwrap()
                .clone();
            let mut inner = ctx.to_vec();
            inner.push((x.clone(), bty.clone()));
            Term::exists(x, bty, self.term(ty, &inner, depth - 1))
        }
    }

    fn lambda(&mut self, ty: &SemType, ctx: &[(String, SemType)], depth: u32) -> Term {
        let (d, c) = ty.as_arrow().expect("arrow");
        let x = NAMES.choose(self.rng).unwrap().to_string();
        let mut inner = ctx.to_vec();
        inner.push((x.clone(), d.clone()));
        Term::lam(x, d.clone(), self.term(c, &inner, depth.saturating_sub(1)))
    }

    fn leaf(&mut self, ty: &SemType, ctx: &[(String, SemType)], vars: &[&String]) -> Term {
        if !vars.is_empty() && self.rng.gen_bool(0.7) {
            return Term::var(vars.choose(self.rng).unwrap().as_str());
        }
        if ty.as_arrow().is_some() && self.rng.gen_bool(0.5) {
            return self.lambda(ty, ctx, 0);
        }
        constant_of(self.rng, ty)
    }
}

/// A closed well-typed term of a random type.
pub fn closed_term(seed: u64, max_depth: u32) -> (Term, SemType) {
    let mut r = rng(seed);
    let ty = small_type(&mut r, 2);
    let depth = r.gen_range(1..=max_depth);
    let t = TermGen::new(&mut r, 60).term(&ty, &[], depth);
    (t, ty)
}

// ---------------------------------------------------------------------------
// Substitution oracle: rename every binder apart first, then replace.

fn names_of(t: &Term, out: &mut BTreeSet<String>) {
    match t {
        Term::Var(x) => {
            out.insert(x.clone());
        }
        Term::Const(..) => {}
        Term::Lam(x, _, b) | Term::Exists(x, _, b) => {
            out.insert(x.clone());
            names_of(b, out);
        }
        Term::App(l, r) | Term::And(l, r) | Term::Cons(l, r) => {
            names_of(l, out);
            names_of(r, out);
        }
    }
}

fn rename_apart(t: &Term, env: &BTreeMap<String, String>, counter: &mut usize) -> Term {
    match t {
        Term::Var(x) => Term::var(env.get(x).cloned().unwrap_or_else(|| x.clone())),
        Term::Const(..) => t.clone(),
        Term::Lam(x, ty, b) | Term::Exists(x, ty, b) => {
            *counter += 1;
            let y = format!("_v{counter}");
            let mut env = env.clone();
            env.insert(x.clone(), y.clone());
            let b = rename_apart(b, &env, counter);
            if matches!(t, Term::Lam(..)) {
                Term::lam(y, ty.clone(), b)
            } else {
                Term::exists(y, ty.clone(), b)
            }
        }
        Term::App(l, r) => Term::app(rename_apart(l, env, counter), rename_apart(r, env, counter)),
        Term::And(l, r) => Term::and(rename_apart(l, env, counter), rename_apart(r, env, counter)),
        Term::Cons(l, r) => {
            Term::cons(rename_apart(l, env, counter), rename_apart(r, env, counter))
        }
    }
}

fn replace_free(t: &Term, x: &str, s: &Term) -> Term {
    match t {
        Term::Var(y) if y == x => s.clone(),
        Term::Var(_) | Term::Const(..) => t.clone(),
        // Binders were renamed apart, so none of them can be `x`.
        Term::Lam(y, ty, b) => Term::lam(y.clone(), ty.clone(), replace_free(b, x, s)),
        Term::Exists(y, ty, b) => Term::exists(y.clone(), ty.clone(), replace_free(b, x, s)),
        Term::App(l, r) => Term::app(replace_free(l, x, s), replace_free(r, x, s)),
        Term::And(l, r) => Term::and(replace_free(l, x, s), replace_free(r, x, s)),
        Term::Cons(l, r) => Term::cons(replace_free(l, x, s), replace_free(r, x, s)),
    }
}

/// `t[x := s]` by the textbook route: rename all binders of `t` to names
/// that occur nowhere, then replace free occurrences.
pub fn substitute_oracle(t: &Term, x: &str, s: &Term) -> Term {
    let mut used = BTreeSet::new();
    names_of(t, &mut used);
    names_of(s, &mut used);
    assert!(
        used.iter().all(|n| !n.starts_with("_v")),
        "reserved prefix in input"
    );
    let mut counter = 0;
    let renamed = rename_apart(t, &BTreeMap::new(), &mut counter);
    replace_free(&renamed, x, s)
}

/// An open term over free variables `x: τ` plus a few others, and a
/// replacement of type `τ` whose free variables collide with the binder
/// pool.
pub fn substitution_case(seed: u64) -> (Term, String, Term) {
    let mut r = rng(seed);
    let tau = small_type(&mut r, 1);
    let mut ctx = vec![("x".to_string(), tau.clone())];
    for n in ["y", "z", "e"] {
        if r.gen_bool(0.5) {
            ctx.push((n.to_string(), atoms().choose(&mut r).unwrap().clone()));
        }
    }
    let ty = small_type(&mut r, 1);
    let t = TermGen::new(&mut r, 40).term(&ty, &ctx, 6);
    let sctx: Vec<(String, SemType)> = ["y", "z", "a", "e"]
        .iter()
        .map(|n| (n.to_string(), atoms().choose(&mut r).unwrap().clone()))
        .collect();
    let s = TermGen::new(&mut r, 10).term(&tau, &sctx, 3);
    (t, "x".to_string(), s)
}

// ---------------------------------------------------------------------------
// Discourse graphs

/// A random sequence of valid attachments, each aimed at a random frontier
/// node. Returns the graph and the log used to build it.
pub fn random_graph(seed: u64, size: usize) -> DiscourseGraph {
    let mut r = rng(seed);
    let mut g = DiscourseGraph::new();
    g.insert_root("e1").unwrap();
    let mut abstracts = 0;
    for i in 2..=size {
        let frontier = g.frontier_labels().unwrap();
        let target = frontier.choose(&mut r).unwrap().clone();
        let label = format!("e{i}");
        if r.gen_bool(0.5) {
            g.attach(&label, Relation::Subordinating, &target, None, None)
                .unwrap();
        } else {
            abstracts += 1;
            let cover = format!("c{abstracts}");
            g.attach(&label, Relation::Coordinating, &target, Some(&cover), None)
                .unwrap();
        }
    }
    g
}

/// The right frontier recomputed from the attachment log alone: rebuild
/// parent and cover links with an independent model, then collect every
/// node reachable from the last attached one by upward links.
pub fn frontier_oracle(g: &DiscourseGraph) -> BTreeSet<String> {
    let log = g.attachments();
    let mut alias: BTreeMap<String, String> = BTreeMap::new();
    let mut parent: BTreeMap<String, String> = BTreeMap::new();
    let mut cover: BTreeMap<String, String> = BTreeMap::new();
    let canon = |alias: &BTreeMap<String, String>, l: &str| {
        alias.get(l).cloned().unwrap_or_else(|| l.to_string())
    };
    let mut last = String::new();
    for a in log {
        let label = a.label.clone();
        last = label.clone();
        let Some(target) = a.target.as_deref() else {
            continue;
        };
        let target = canon(&alias, target);
        match a.relation {
            Some(Relation::Subordinating) => {
                parent.insert(label, target);
            }
            Some(Relation::Coordinating) => match cover.get(&target).cloned() {
                Some(c) => {
                    if let Some(cl) = a.cover_label.clone() {
                        alias.insert(cl, c.clone());
                    }
                    cover.insert(label, c);
                }
                None => {
                    let cl = a
                        .cover_label
                        .clone()
                        .unwrap_or_else(|| format!("{}&{}", a.target.as_deref().unwrap(), label));
                    if let Some(p) = parent.get(&target).cloned() {
                        parent.insert(cl.clone(), p);
                    }
                    cover.insert(target.clone(), cl.clone());
                    cover.insert(label, cl);
                }
            },
            None => {}
        }
    }
    let mut seen = BTreeSet::new();
    let mut queue = VecDeque::from([last]);
    while let Some(n) = queue.pop_front() {
        if !seen.insert(n.clone()) {
            continue;
        }
        for next in [cover.get(&n), parent.get(&n)].into_iter().flatten() {
            queue.push_back(next.clone());
        }
    }
    seen
}

/// Canonical label set of the library's frontier.
pub fn frontier_set(g: &DiscourseGraph) -> BTreeSet<String> {
    g.right_frontier()
        .unwrap()
        .into_iter()
        .map(|n| g.node(n).label.clone())
        .collect()
}

// ---------------------------------------------------------------------------
// Conjunct multisets

/// Splits a closed formula into its existential prefix length and its
/// conjuncts, with the prefix variables replaced by position-named
/// constants so conjuncts from different formulas compare directly.
pub fn open_formula(t: &Term) -> (usize, Vec<Term>) {
    let mut body = t.clone();
    let mut n = 0;
    while let Term::Exists(x, ty, b) = body {
        n += 1;
        body = discsem::substitute(&b, &x, &Term::constant(format!("#{n}"), ty));
    }
    let mut out = Vec::new();
    let mut stack = vec![body];
    while let Some(t) = stack.pop() {
        match t {
            Term::And(l, r) => {
                stack.push(*r);
                stack.push(*l);
            }
            other => out.push(other),
        }
    }
    (n, out)
}

/// Multiset equality up to α, by repeated matching and removal.
pub fn same_multiset(xs: &[Term], ys: &[Term]) -> bool {
    if xs.len() != ys.len() {
        return false;
    }
    let mut rest: Vec<&Term> = ys.iter().collect();
    for x in xs {
        match rest.iter().position(|y| discsem::alpha_equal(x, y)) {
            Some(i) => {
                rest.swap_remove(i);
            }
            None => return false,
        }
    }
    true
}

pub fn parse(s: &str) -> Term {
    discsem::parse_term(s).unwrap_or_else(|e| panic!("{s}: {e}"))
}
