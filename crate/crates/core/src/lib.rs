//! Event-style dynamic semantics for discourse.
//!
//! Typed λ-terms are built from a lexicon, β-normalized, and composed
//! sentence by sentence with continuation-passing composition functions.
//! A discourse graph tracks which events remain accessible and evaluates
//! the `Sel`/`Del` context operators against its right frontier.
//!
//! ```
//! use discsem::composer::{build_sentence, AppTree, DiscourseState};
//! use discsem::graph::Relation;
//! use discsem::{render, Lexicon, Mode, SelStrategy, Style};
//!
//! # fn main() -> Result<(), Box<dyn std::error::Error>> {
//! let lex = Lexicon::builtin(Mode::Event);
//! let s1 = build_sentence(&lex, &AppTree::parse("(in_the_plaza ((kiss Mary) John))")?)?;
//! let s2 = build_sentence(&lex, &AppTree::parse("(she smile)")?)?;
//! let d = DiscourseState::new()
//!     .compose(Relation::Subordinating, &s1, None, None, None)?
//!     .compose(Relation::Subordinating, &s2, None, None, None)?;
//! let resolved = render(&d.resolve(&SelStrategy::MostRecent)?, Style::Unicode);
//! assert!(resolved.ends_with("Rel2(e1, e2))"));
//! # Ok(())
//! # }
//! ```

pub mod composer;
pub mod formula;
pub mod graph;
pub mod lexicon;
pub mod normalize;
pub mod script;
pub mod syntax;
pub mod term;
pub mod types;
pub mod typing;

pub use composer::{AppTree, DiscourseState, SentenceMeaning};
pub use formula::{conjuncts, drop_entails, Conjunction, FormulaError};
pub use graph::{DiscourseGraph, SelStrategy};
pub use lexicon::{builtin_lexicon, LexEntry, Lexicon, Mode, Variant};
pub use normalize::beta_normalize;
pub use script::{run_script, ScriptOptions, ScriptRun};
pub use syntax::{parse_term, parse_type, render, ParseError, SourceSpan, SyntaxError};
pub use term::{alpha_equal, substitute, Term};
pub use types::{Atom, SemType, Style};
pub use typing::{typecheck, TypeError, TypingEnv};
