//! Word meanings: the built-in lexicons, lexicon files, and entries
//! generated from thematic-role templates.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::syntax::{parse_lexicon, LexiconError, LexiconFile, Signature};
use crate::term::Term;
use crate::types::SemType;
use crate::typing::{typecheck, TypingEnv};

const EVENT_LEXICON: &str = include_str!("../lexicons/event.lex");
const BASELINE_LEXICON: &str = include_str!("../lexicons/baseline.lex");

/// Which semantic framework a lexicon belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// Sentences denote γ→(γ→t)→t and contexts hold individuals.
    Baseline,
    /// Sentences denote v→γ→(γ→t)→t and contexts hold events.
    Event,
}

impl Mode {
    /// Type of a sentence meaning in this mode.
    pub fn sentence_type(self) -> SemType {
        match self {
            Mode::Baseline => SemType::discourse(),
            Mode::Event => SemType::dynamic_sentence(),
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Baseline => "baseline",
            Mode::Event => "event",
        })
    }
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
#[error("unknown mode `{0}` (expected event or baseline)")]
pub struct UnknownMode(pub String);

impl FromStr for Mode {
    type Err = UnknownMode;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "event" => Ok(Mode::Event),
            "baseline" => Ok(Mode::Baseline),
            other => Err(UnknownMode(other.to_string())),
        }
    }
}

/// Static entries have no context arguments; dynamic ones take the left
/// and right contexts after the event.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Variant {
    Static,
    Dynamic,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LexEntry {
    pub word: String,
    pub ty: SemType,
    pub term: Term,
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
#[error("unknown word `{0}`")]
pub struct UnknownWord(pub String);

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lexicon {
    mode: Mode,
    entries: IndexMap<String, LexEntry>,
    signature: Signature,
}

impl Lexicon {
    pub fn new(mode: Mode) -> Self {
        Lexicon {
            mode,
            entries: IndexMap::new(),
            signature: Signature::core(),
        }
    }

    /// The shipped lexicon for `mode`.
    pub fn builtin(mode: Mode) -> Self {
        let text = match mode {
            Mode::Event => EVENT_LEXICON,
            Mode::Baseline => BASELINE_LEXICON,
        };
        let file = parse_lexicon(text).expect("built-in lexicon parses");
        let mut lex = Lexicon::new(mode);
        lex.extend(file);
        lex
    }

    /// Parses `text` as a lexicon file. Without a `mode:` header the file
    /// is taken to be in `default_mode`.
    pub fn from_text(text: &str, default_mode: Mode) -> Result<Self, LexiconError> {
        let file = parse_lexicon(text)?;
        let mut lex = Lexicon::new(file.mode.unwrap_or(default_mode));
        lex.extend(file);
        Ok(lex)
    }

    /// Adds every entry of `file`, replacing entries with the same word.
    pub fn extend(&mut self, file: LexiconFile) {
        for (name, ty) in file.signature.iter() {
            if self.signature.get(name).is_none() {
                self.signature.insert(name, ty.clone());
            }
        }
        for line in file.entries {
            self.insert(LexEntry {
                word: line.word,
                ty: line.ty,
                term: line.term,
            });
        }
    }

    pub fn insert(&mut self, entry: LexEntry) -> Option<LexEntry> {
        for (name, tys) in entry.term.constants() {
            if self.signature.get(&name).is_none() {
                if let Some(ty) = tys.into_iter().next() {
                    self.signature.insert(name, ty);
                }
            }
        }
        self.entries.insert(entry.word.clone(), entry)
    }

    pub fn lookup(&self, word: &str) -> Result<&LexEntry, UnknownWord> {
        self.entries
            .get(word)
            .ok_or_else(|| UnknownWord(word.to_string()))
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    /// Constant types used by the entries, for parsing further terms
    /// against this lexicon.
    pub fn signature(&self) -> &Signature {
        &self.signature
    }

    pub fn entries(&self) -> impl Iterator<Item = &LexEntry> {
        self.entries.values()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// `builtin_lexicon(mode)` as a free function.
pub fn builtin_lexicon(mode: Mode) -> Lexicon {
    Lexicon::builtin(mode)
}

pub fn lookup<'a>(lex: &'a Lexicon, word: &str) -> Result<&'a LexEntry, UnknownWord> {
    lex.lookup(word)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum ThematicRole {
    Agent,
    Theme,
    Goal,
    Benefactive,
    Instrument,
    Experiencer,
    Location,
    Time,
}

impl ThematicRole {
    pub const ALL: [ThematicRole; 8] = [
        ThematicRole::Agent,
        ThematicRole::Theme,
        ThematicRole::Goal,
        ThematicRole::Benefactive,
        ThematicRole::Instrument,
        ThematicRole::Experiencer,
        ThematicRole::Location,
        ThematicRole::Time,
    ];

    /// Default predicate symbol.
    pub fn predicate(self) -> &'static str {
        match self {
            ThematicRole::Agent => "Ag",
            ThematicRole::Theme => "Pat",
            ThematicRole::Goal => "Goal",
            ThematicRole::Benefactive => "Ben",
            ThematicRole::Instrument => "Instr",
            ThematicRole::Experiencer => "Exp",
            ThematicRole::Location => "Loc",
            ThematicRole::Time => "Time",
        }
    }

    /// Name of the λ-bound participant in generated entries.
    pub fn binder(self) -> &'static str {
        match self {
            ThematicRole::Agent => "s",
            ThematicRole::Theme => "o",
            ThematicRole::Goal => "gl",
            ThematicRole::Benefactive => "bn",
            ThematicRole::Instrument => "ins",
            ThematicRole::Experiencer => "ex",
            ThematicRole::Location => "loc",
            ThematicRole::Time => "tm",
        }
    }
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum TemplateError {
    #[error("template for `{0}` has no roles")]
    EmptyTemplate(String),
    #[error("template for `{verb}` lists {role:?} twice")]
    DuplicateRole { verb: String, role: ThematicRole },
}

/// A verb given by its event predicate and thematic roles.
///
/// Roles are listed subject first; the generated entry takes its
/// participants in reverse order (object first), as curried verbs do.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerbTemplate {
    pub word: String,
    pub predicate: String,
    pub roles: Vec<ThematicRole>,
    pub role_predicates: BTreeMap<ThematicRole, String>,
}

impl VerbTemplate {
    /// Template whose event predicate is `word` with an initial capital.
    pub fn new(word: impl Into<String>, roles: impl IntoIterator<Item = ThematicRole>) -> Self {
        let word = word.into();
        let mut chars = word.chars();
        let predicate = match chars.next() {
            Some(c) => c.to_uppercase().chain(chars).collect(),
            None => String::new(),
        };
        VerbTemplate {
            word,
            predicate,
            roles: roles.into_iter().collect(),
            role_predicates: BTreeMap::new(),
        }
    }

    pub fn with_predicate(mut self, predicate: impl Into<String>) -> Self {
        self.predicate = predicate.into();
        self
    }

    /// Uses `predicate` instead of the role's default symbol.
    pub fn with_role_predicate(mut self, role: ThematicRole, predicate: impl Into<String>) -> Self {
        self.role_predicates.insert(role, predicate.into());
        self
    }

    fn role_predicate(&self, role: ThematicRole) -> &str {
        self.role_predicates
            .get(&role)
            .map_or(role.predicate(), String::as_str)
    }
}

fn pred(name: &str, args: Vec<Term>) -> Term {
    let ty = SemType::curried(
        std::iter::once(SemType::EVENT)
            .chain(std::iter::repeat(SemType::IND))
            .take(args.len())
            .collect::<Vec<_>>(),
        SemType::PROP,
    );
    Term::apply(Term::constant(name, ty), args)
}

/// `b (e::a)`: the continuation applied to the extended context.
fn continue_with_event() -> Term {
    Term::app(Term::var("b"), Term::cons(Term::var("e"), Term::var("a")))
}

fn right_context() -> SemType {
    SemType::arrow(SemType::CTX, SemType::PROP)
}

/// Wraps `body` in `λe.` or `λe a b.`.
fn event_abstraction(body: Term, variant: Variant) -> Term {
    let body = match variant {
        Variant::Static => body,
        Variant::Dynamic => Term::lam("a", SemType::CTX, Term::lam("b", right_context(), body)),
    };
    Term::lam("e", SemType::EVENT, body)
}

fn category(variant: Variant) -> SemType {
    match variant {
        Variant::Static => SemType::static_sentence(),
        Variant::Dynamic => SemType::dynamic_sentence(),
    }
}

pub fn verb_from_template(tpl: &VerbTemplate, variant: Variant) -> Result<LexEntry, TemplateError> {
    if tpl.roles.is_empty() {
        return Err(TemplateError::EmptyTemplate(tpl.word.clone()));
    }
    for (i, role) in tpl.roles.iter().enumerate() {
        if tpl.roles[..i].contains(role) {
            return Err(TemplateError::DuplicateRole {
                verb: tpl.word.clone(),
                role: *role,
            });
        }
    }
    let mut conj = vec![pred(&tpl.predicate, vec![Term::var("e")])];
    for role in &tpl.roles {
        conj.push(pred(
            tpl.role_predicate(*role),
            vec![Term::var("e"), Term::var(role.binder())],
        ));
    }
    if variant == Variant::Dynamic {
        conj.push(continue_with_event());
    }
    let body = Term::conjoin(conj).expect("non-empty");
    let mut term = event_abstraction(body, variant);
    let mut ty = category(variant);
    for role in &tpl.roles {
        term = Term::lam(role.binder(), SemType::IND, term);
        ty = SemType::arrow(SemType::IND, ty);
    }
    debug_assert_eq!(typecheck(&term, &TypingEnv::new()).as_ref(), Ok(&ty));
    Ok(LexEntry {
        word: tpl.word.clone(),
        ty,
        term,
    })
}

/// An intersective event modifier: `pred(e)` or `pred(e, value)`.
///
/// The dynamic variant puts the new conjunct before the continuation,
/// `λP e a b. P e a (λa'. pred(e, value) ∧ b a')`, so the context update
/// stays the last conjunct however many modifiers are stacked.
pub fn modifier_entry(
    name: &str,
    predicate: &str,
    value: Option<&str>,
    variant: Variant,
) -> LexEntry {
    let mut args = vec![Term::var("e")];
    if let Some(v) = value {
        args.push(Term::constant(v, SemType::IND));
    }
    let condition = pred(predicate, args);
    let cat = category(variant);
    let body = match variant {
        Variant::Static => Term::and(Term::app(Term::var("P"), Term::var("e")), condition),
        Variant::Dynamic => {
            let rest = Term::lam(
                "a'",
                SemType::CTX,
                Term::and(condition, Term::app(Term::var("b"), Term::var("a'"))),
            );
            Term::apply(Term::var("P"), [Term::var("e"), Term::var("a"), rest])
        }
    };
    let term = Term::lam("P", cat.clone(), event_abstraction(body, variant));
    LexEntry {
        word: name.to_string(),
        ty: SemType::arrow(cat.clone(), cat),
        term,
    }
}
