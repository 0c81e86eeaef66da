//! Sentence and discourse meanings.
//!
//! Sentences are built by applying lexical entries along an application
//! tree. In event mode a discourse is grown one sentence at a time by the
//! subordinating or coordinating composition functions; the first sentence
//! always uses the basic form, every later one the advanced form that adds
//! a discourse relation (and, for coordination, an abstract event). In
//! baseline mode sentences are merged with the plain continuation merge.

use std::fmt;

use thiserror::Error;

use crate::graph::{resolve_term, DiscourseGraph, GraphError, Relation, ResolveError, SelStrategy};
use crate::lexicon::{Lexicon, Mode, UnknownWord};
use crate::normalize::beta_normalize;
use crate::syntax::ParseError;
use crate::term::Term;
use crate::types::{Atom, SemType};
use crate::typing::{typecheck, TypingEnv};

/// A binary application tree over lexicon words.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AppTree {
    Leaf(String),
    Node(Box<AppTree>, Box<AppTree>),
}

impl AppTree {
    pub fn leaf(word: impl Into<String>) -> Self {
        AppTree::Leaf(word.into())
    }

    pub fn node(fun: AppTree, arg: AppTree) -> Self {
        AppTree::Node(Box::new(fun), Box::new(arg))
    }

    /// Parses `word`, `(f x)` and `(f x y)` (left-nested) forms. A bare
    /// sequence at top level is read as if it were parenthesized.
    pub fn parse(text: &str) -> Result<AppTree, ParseError> {
        let toks = tree_tokens(text)?;
        let mut pos = 0;
        let tree = parse_seq(text, &toks, &mut pos, None)?;
        Ok(tree)
    }

    pub fn leaves(&self) -> Vec<&str> {
        match self {
            AppTree::Leaf(w) => vec![w],
            AppTree::Node(f, a) => {
                let mut v = f.leaves();
                v.extend(a.leaves());
                v
            }
        }
    }
}

impl fmt::Display for AppTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AppTree::Leaf(w) => f.write_str(w),
            AppTree::Node(fun, arg) => write!(f, "({fun} {arg})"),
        }
    }
}

#[derive(Debug)]
enum TreeTok {
    Open,
    Close,
    Word(String),
}

fn tree_tokens(text: &str) -> Result<Vec<(TreeTok, usize, usize)>, ParseError> {
    let mut out = Vec::new();
    let mut it = text.char_indices().peekable();
    while let Some(&(i, c)) = it.peek() {
        match c {
            c if c.is_whitespace() => {
                it.next();
            }
            '(' => {
                it.next();
                out.push((TreeTok::Open, i, i + 1));
            }
            ')' => {
                it.next();
                out.push((TreeTok::Close, i, i + 1));
            }
            c if c.is_alphanumeric() || c == '_' => {
                let mut end = i;
                while let Some(&(j, d)) = it.peek() {
                    if d.is_alphanumeric() || d == '_' || d == '\'' {
                        end = j + d.len_utf8();
                        it.next();
                    } else {
                        break;
                    }
                }
                out.push((TreeTok::Word(text[i..end].to_string()), i, end));
            }
            other => {
                return Err(ParseError::at(
                    text,
                    i,
                    other.len_utf8(),
                    format!("unexpected character `{other}` in application tree"),
                ))
            }
        }
    }
    Ok(out)
}

/// Parses items until `)` (when `open` is set) or end of input and folds
/// them into a left-nested application.
fn parse_seq(
    text: &str,
    toks: &[(TreeTok, usize, usize)],
    pos: &mut usize,
    open: Option<usize>,
) -> Result<AppTree, ParseError> {
    let mut items: Vec<AppTree> = Vec::new();
    loop {
        match toks.get(*pos) {
            None => {
                if let Some(o) = open {
                    return Err(ParseError::at(text, o, 1, "unclosed `(`"));
                }
                break;
            }
            Some((TreeTok::Close, s, _)) => {
                if open.is_none() {
                    return Err(ParseError::at(text, *s, 1, "unmatched `)`"));
                }
                *pos += 1;
                break;
            }
            Some((TreeTok::Open, s, _)) => {
                *pos += 1;
                items.push(parse_seq(text, toks, pos, Some(*s))?);
            }
            Some((TreeTok::Word(w), _, _)) => {
                *pos += 1;
                items.push(AppTree::Leaf(w.clone()));
            }
        }
    }
    let mut it = items.into_iter();
    let Some(first) = it.next() else {
        let (at, len) = match open {
            Some(o) => (o, 1),
            None => (0, text.len().min(1)),
        };
        return Err(ParseError::at(text, at, len, "empty application tree"));
    };
    Ok(it.fold(first, AppTree::node))
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum ComposeError {
    #[error(transparent)]
    UnknownWord(#[from] UnknownWord),
    #[error("type mismatch at {location}: expected {expected}, found {found}")]
    TypeMismatch {
        location: String,
        expected: String,
        found: String,
    },
    #[error("{what} has type {found}, expected {expected}")]
    WrongType {
        what: &'static str,
        expected: SemType,
        found: SemType,
    },
    #[error("basic composition requires the empty discourse")]
    BasicOnNonEmpty,
    #[error("advanced composition requires a non-empty discourse")]
    AdvancedOnEmpty,
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// A closed, β-normal sentence meaning.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SentenceMeaning {
    pub term: Term,
    pub ty: SemType,
    pub mode: Mode,
}

impl SentenceMeaning {
    /// Wraps a closed term, checking its type.
    pub fn new(term: Term, mode: Mode) -> Result<Self, ComposeError> {
        let ty = typecheck(&term, &TypingEnv::new()).map_err(|e| ComposeError::TypeMismatch {
            location: "<sentence>".into(),
            expected: "a well-typed term".into(),
            found: e.to_string(),
        })?;
        Ok(SentenceMeaning {
            term: beta_normalize(&term),
            ty,
            mode,
        })
    }
}

fn path_string(path: &[&str]) -> String {
    if path.is_empty() {
        "<root>".into()
    } else {
        path.join(".")
    }
}

fn apply_tree(
    lex: &Lexicon,
    tree: &AppTree,
    path: &mut Vec<&'static str>,
) -> Result<(Term, SemType), ComposeError> {
    match tree {
        AppTree::Leaf(w) => {
            let e = lex.lookup(w)?;
            Ok((e.term.clone(), e.ty.clone()))
        }
        AppTree::Node(f, a) => {
            path.push("fun");
            let (ft, fty) = apply_tree(lex, f, path)?;
            path.pop();
            path.push("arg");
            let (at, aty) = apply_tree(lex, a, path)?;
            path.pop();
            match fty.as_arrow() {
                Some((d, c)) if *d == aty => Ok((Term::app(ft, at), c.clone())),
                Some((d, _)) => Err(ComposeError::TypeMismatch {
                    location: path_string(&[path.as_slice(), &["arg"]].concat()),
                    expected: d.to_string(),
                    found: aty.to_string(),
                }),
                None => Err(ComposeError::TypeMismatch {
                    location: path_string(&[path.as_slice(), &["fun"]].concat()),
                    expected: format!("{aty}→…"),
                    found: fty.to_string(),
                }),
            }
        }
    }
}

/// Applies the words of `tree` to one another and β-normalizes.
///
/// The result must be a sentence: of the lexicon mode's sentence type,
/// of the static type v→t, or already closed (t).
pub fn build_sentence(lex: &Lexicon, tree: &AppTree) -> Result<SentenceMeaning, ComposeError> {
    let (term, ty) = apply_tree(lex, tree, &mut Vec::new())?;
    let ok = ty == lex.mode().sentence_type()
        || (lex.mode() == Mode::Event && ty == SemType::static_sentence())
        || ty.is_atom(Atom::Prop);
    if !ok {
        return Err(ComposeError::WrongType {
            what: "sentence",
            expected: lex.mode().sentence_type(),
            found: ty,
        });
    }
    Ok(SentenceMeaning {
        term: beta_normalize(&term),
        ty,
        mode: lex.mode(),
    })
}

/// Existential closure of the sentence event.
///
/// Static: `∃e.P(e)`. Dynamic: `∃e.P e A B`, with the freezing constants
/// `A : γ` and `B : γ→t` standing for the empty left and right contexts.
pub fn eos_close(
    s: &SentenceMeaning,
    variant: crate::lexicon::Variant,
) -> Result<Term, ComposeError> {
    use crate::lexicon::Variant;
    let (want, args) = match variant {
        Variant::Static => (SemType::static_sentence(), vec![Term::var("e")]),
        Variant::Dynamic => (
            SemType::dynamic_sentence(),
            vec![Term::var("e"), freeze_left(), freeze_right()],
        ),
    };
    expect_type("sentence", &s.ty, &want)?;
    let body = Term::apply(s.term.clone(), args);
    Ok(beta_normalize(&Term::exists("e", SemType::EVENT, body)))
}

fn freeze_left() -> Term {
    Term::constant("A", SemType::CTX)
}

fn freeze_right() -> Term {
    Term::constant("B", SemType::arrow(SemType::CTX, SemType::PROP))
}

fn expect_type(
    what: &'static str,
    found: &SemType,
    expected: &SemType,
) -> Result<(), ComposeError> {
    if found == expected {
        Ok(())
    } else {
        Err(ComposeError::WrongType {
            what,
            expected: expected.clone(),
            found: found.clone(),
        })
    }
}

fn type_of(t: &Term) -> Result<SemType, ComposeError> {
    typecheck(t, &TypingEnv::new()).map_err(|e| ComposeError::TypeMismatch {
        location: "<term>".into(),
        expected: "a closed well-typed term".into(),
        found: e.to_string(),
    })
}

/// `λe φ. D e (λe'. S e' φ)`, β-normalized.
pub fn merge_baseline(d: &Term, s: &Term) -> Result<Term, ComposeError> {
    let ds = SemType::discourse();
    expect_type("discourse", &type_of(d)?, &ds)?;
    expect_type("sentence", &type_of(s)?, &ds)?;
    let right = SemType::arrow(SemType::CTX, SemType::PROP);
    let inner = Term::lam(
        "e'",
        SemType::CTX,
        Term::apply(s.clone(), [Term::var("e'"), Term::var("phi")]),
    );
    let merged = Term::lam(
        "e",
        SemType::CTX,
        Term::lam(
            "phi",
            right,
            Term::apply(d.clone(), [Term::var("e"), inner]),
        ),
    );
    Ok(beta_normalize(&merged))
}

/// An event bound in a discourse meaning.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiscourseEvent {
    pub name: String,
    pub is_abstract: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiscourseMeaning {
    pub term: Term,
    /// Events in order of introduction.
    pub events: Vec<DiscourseEvent>,
}

impl DiscourseMeaning {
    pub fn is_empty(&self) -> bool {
        self.events.is_empty()
    }

    pub fn concrete_events(&self) -> usize {
        self.events.iter().filter(|e| !e.is_abstract).count()
    }

    pub fn abstract_events(&self) -> usize {
        self.events.iter().filter(|e| e.is_abstract).count()
    }

    /// Name the next sentence event will get.
    pub fn next_event_name(&self) -> String {
        format!("e{}", self.concrete_events() + 1)
    }

    /// Name the next abstract event will get: `ec`, then `ec2`, `ec3`, …
    pub fn next_abstract_name(&self) -> String {
        match self.abstract_events() {
            0 => "ec".to_string(),
            n => format!("ec{}", n + 1),
        }
    }
}

/// `λa b. b a`: no events, no context change.
pub fn empty_discourse() -> DiscourseMeaning {
    let right = SemType::arrow(SemType::CTX, SemType::PROP);
    DiscourseMeaning {
        term: Term::lam(
            "a",
            SemType::CTX,
            Term::lam("b", right, Term::app(Term::var("b"), Term::var("a"))),
        ),
        events: Vec::new(),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ComposeVariant {
    Basic,
    Advanced,
}

impl ComposeVariant {
    /// The variant a discourse calls for: basic exactly when it is empty.
    pub fn for_discourse(d: &DiscourseMeaning) -> Self {
        if d.is_empty() {
            ComposeVariant::Basic
        } else {
            ComposeVariant::Advanced
        }
    }
}

fn check_variant(d: &DiscourseMeaning, v: ComposeVariant) -> Result<(), ComposeError> {
    match (v, d.is_empty()) {
        (ComposeVariant::Basic, false) => Err(ComposeError::BasicOnNonEmpty),
        (ComposeVariant::Advanced, true) => Err(ComposeError::AdvancedOnEmpty),
        _ => Ok(()),
    }
}

fn check_inputs(d: &DiscourseMeaning, s: &SentenceMeaning) -> Result<(), ComposeError> {
    expect_type("discourse", &type_of(&d.term)?, &SemType::discourse())?;
    expect_type("sentence", &s.ty, &SemType::dynamic_sentence())
}

fn rel(arity: usize, args: Vec<Term>) -> Term {
    let name = if arity == 2 { "Rel2" } else { "Rel3" };
    let ty = SemType::curried(vec![SemType::EVENT; arity], SemType::PROP);
    Term::apply(Term::constant(name, ty), args)
}

fn sel(ctx: Term) -> Term {
    Term::app(
        Term::constant("Sel", SemType::arrow(SemType::CTX, SemType::EVENT)),
        ctx,
    )
}

fn del(ctx: Term) -> Term {
    Term::app(
        Term::constant("Del", SemType::arrow(SemType::CTX, SemType::CTX)),
        ctx,
    )
}

/// `λa b. D a k` for a continuation `k`, optionally under `∃ec`.
fn wrap(d: &DiscourseMeaning, k: Term, abstract_event: Option<&str>) -> Term {
    let right = SemType::arrow(SemType::CTX, SemType::PROP);
    let mut body = Term::apply(d.term.clone(), [Term::var("a"), k]);
    if let Some(ec) = abstract_event {
        body = Term::exists(ec, SemType::EVENT, body);
    }
    Term::lam("a", SemType::CTX, Term::lam("b", right, body))
}

/// Subordinating composition.
///
/// Basic: `λa b. D a (λa'. ∃e. S e a' b)`.
/// Advanced: `λa b. D a (λa'. ∃e. (S e a' b ∧ Rel2(Sel(a'), e)))`.
pub fn compose_sub(
    d: &DiscourseMeaning,
    s: &SentenceMeaning,
    variant: ComposeVariant,
) -> Result<DiscourseMeaning, ComposeError> {
    check_variant(d, variant)?;
    check_inputs(d, s)?;
    let e = d.next_event_name();
    let a1 = Term::var("a'");
    let mut body = Term::apply(s.term.clone(), [Term::var(&e), a1.clone(), Term::var("b")]);
    if variant == ComposeVariant::Advanced {
        body = Term::and(body, rel(2, vec![sel(a1), Term::var(&e)]));
    }
    let k = Term::lam("a'", SemType::CTX, Term::exists(&e, SemType::EVENT, body));
    let mut events = d.events.clone();
    events.push(DiscourseEvent {
        name: e,
        is_abstract: false,
    });
    Ok(DiscourseMeaning {
        term: beta_normalize(&wrap(d, k, None)),
        events,
    })
}

/// Coordinating composition.
///
/// Basic is the same as for subordination. Advanced:
/// `λa b. ∃ec. D a (λa'. ∃e. (S e (ec::Del(a')) b ∧ Rel3(Sel(a'), e, ec)))`.
pub fn compose_coor(
    d: &DiscourseMeaning,
    s: &SentenceMeaning,
    variant: ComposeVariant,
) -> Result<DiscourseMeaning, ComposeError> {
    if variant == ComposeVariant::Basic {
        return compose_sub(d, s, variant);
    }
    check_variant(d, variant)?;
    check_inputs(d, s)?;
    let e = d.next_event_name();
    let ec = d.next_abstract_name();
    let a1 = Term::var("a'");
    let ctx = Term::cons(Term::var(&ec), del(a1.clone()));
    let body = Term::and(
        Term::apply(s.term.clone(), [Term::var(&e), ctx, Term::var("b")]),
        rel(3, vec![sel(a1), Term::var(&e), Term::var(&ec)]),
    );
    let k = Term::lam("a'", SemType::CTX, Term::exists(&e, SemType::EVENT, body));
    let mut events = d.events.clone();
    events.push(DiscourseEvent {
        name: ec.clone(),
        is_abstract: true,
    });
    events.push(DiscourseEvent {
        name: e,
        is_abstract: false,
    });
    Ok(DiscourseMeaning {
        term: beta_normalize(&wrap(d, k, Some(&ec))),
        events,
    })
}

/// `D A B`: the discourse with both contexts frozen.
pub fn finalize(d: &DiscourseMeaning) -> Term {
    beta_normalize(&Term::apply(
        d.term.clone(),
        [freeze_left(), freeze_right()],
    ))
}

/// A discourse meaning together with its structure graph.
#[derive(Clone, Debug)]
pub struct DiscourseState {
    pub meaning: DiscourseMeaning,
    pub graph: DiscourseGraph,
}

impl Default for DiscourseState {
    fn default() -> Self {
        Self::new()
    }
}

impl DiscourseState {
    pub fn new() -> Self {
        DiscourseState {
            meaning: empty_discourse(),
            graph: DiscourseGraph::new(),
        }
    }

    /// Adds a sentence related to `target` (default: the most recently
    /// attached event). The variant is chosen from the discourse unless
    /// given, in which case it must agree.
    pub fn compose(
        &self,
        relation: Relation,
        s: &SentenceMeaning,
        target: Option<&str>,
        relation_name: Option<&str>,
        variant: Option<ComposeVariant>,
    ) -> Result<DiscourseState, ComposeError> {
        let v = variant.unwrap_or_else(|| ComposeVariant::for_discourse(&self.meaning));
        let meaning = match relation {
            Relation::Subordinating => compose_sub(&self.meaning, s, v)?,
            Relation::Coordinating => compose_coor(&self.meaning, s, v)?,
        };
        let mut graph = self.graph.clone();
        let label = self.meaning.next_event_name();
        if graph.is_empty() {
            graph.insert_root(&label)?;
        } else {
            let default_target = graph
                .last_attached()
                .map(|n| graph.node(n).label.clone())
                .ok_or(GraphError::EmptyGraph)?;
            let target = target.unwrap_or(&default_target);
            let cover = match relation {
                Relation::Coordinating => Some(self.meaning.next_abstract_name()),
                Relation::Subordinating => None,
            };
            graph.attach(&label, relation, target, cover.as_deref(), relation_name)?;
        }
        Ok(DiscourseState { meaning, graph })
    }

    pub fn finalize(&self) -> Term {
        finalize(&self.meaning)
    }

    /// The finalized formula with `Sel` and `Del` evaluated on the graph.
    pub fn resolve(&self, strategy: &SelStrategy) -> Result<Term, ResolveError> {
        resolve_term(&self.graph, &self.finalize(), strategy)
    }
}
