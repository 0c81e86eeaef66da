//! Discourse scripts: a line-oriented batch format for running
//! derivations.
//!
//! ```text
//! mode event
//! S1 := (in_the_plaza ((kiss Mary) John))
//! S2 := (she smile)
//! D1 := compose sub Empty S1
//! D2 := compose sub D1 S2 label=Elaboration
//! print D2
//! emit dot out/d2.dot D2
//! ```
//!
//! Statements: `mode event|baseline`, `lexicon <path>`, `resolve on|off`,
//! `<name> := <tree>`, `<name> := compose sub|coor <prev|Empty> <sentence>
//! [target=<event>] [label=<relation>] [variant=basic|advanced]`,
//! `print <name> [term|fol|trace|dot|json]` and
//! `emit <fol|term|dot|json|trace> <path> [<name>]`.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};

use serde::Serialize;
use thiserror::Error;

use crate::composer::{
    build_sentence, merge_baseline, AppTree, ComposeError, ComposeVariant, DiscourseState,
    SentenceMeaning,
};
use crate::graph::{GraphError, Relation, ResolveError, SelStrategy};
use crate::lexicon::{Lexicon, Mode};
use crate::normalize::beta_normalize;
use crate::syntax::{parse_lexicon, render, LexiconError};
use crate::term::Term;
use crate::types::{SemType, Style};

/// Output formats for `print`, `emit` and the `--emit` flag.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Format {
    /// The finalized formula.
    Fol,
    /// The discourse term before freezing.
    Term,
    Trace,
    Dot,
    Json,
}

impl std::str::FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "fol" => Ok(Format::Fol),
            "term" => Ok(Format::Term),
            "trace" => Ok(Format::Trace),
            "dot" => Ok(Format::Dot),
            "json" => Ok(Format::Json),
            other => Err(format!(
                "unknown format `{other}` (expected fol, term, trace, dot or json)"
            )),
        }
    }
}

/// Settings that override or complement the script.
#[derive(Clone, Debug)]
pub struct ScriptOptions {
    /// Overrides every `mode` statement.
    pub mode: Option<Mode>,
    /// Evaluate `Sel`/`Del` when printing formulas. A `resolve`
    /// statement changes it from that point on.
    pub resolve: bool,
    /// Also print the last discourse in this format when the script ends.
    pub emit: Option<Format>,
    pub style: Style,
    pub sel: SelStrategy,
    /// Directory that relative `lexicon` and `emit` paths start from.
    pub base_dir: PathBuf,
}

impl Default for ScriptOptions {
    fn default() -> Self {
        ScriptOptions {
            mode: None,
            resolve: false,
            emit: None,
            style: Style::Unicode,
            sel: SelStrategy::MostRecent,
            base_dir: PathBuf::from("."),
        }
    }
}

/// One derivation step.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TraceStep {
    pub op: String,
    /// Name the result was bound to, if any.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub inputs: Vec<String>,
    pub output: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub variant: Option<String>,
    /// Number of graph attachments at this point; `snapshot(k)` of the
    /// final graph reproduces the graph the step saw.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub graph: Option<usize>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct DerivationTrace {
    pub steps: Vec<TraceStep>,
}

/// The trace as pretty-printed JSON.
pub fn emit_trace(trace: &DerivationTrace) -> String {
    let mut s = serde_json::to_string_pretty(trace).expect("trace serializes");
    s.push('\n');
    s
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum ErrorKind {
    #[error("{0}")]
    Syntax(String),
    #[error("{0}")]
    Io(String),
    #[error("{0}")]
    Type(String),
    #[error(transparent)]
    Access(GraphError),
    #[error(transparent)]
    Resolve(ResolveError),
}

impl ErrorKind {
    /// Process exit status for this kind of failure.
    pub fn exit_code(&self) -> i32 {
        match self {
            ErrorKind::Syntax(_) | ErrorKind::Io(_) => 1,
            ErrorKind::Type(_) => 2,
            ErrorKind::Access(_) => 3,
            ErrorKind::Resolve(_) => 4,
        }
    }
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub struct ScriptError {
    /// 1-based index among the script's statements.
    pub statement: usize,
    pub line: usize,
    pub kind: ErrorKind,
}

impl fmt::Display for ScriptError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "statement {} (line {}): {}",
            self.statement, self.line, self.kind
        )
    }
}

impl ScriptError {
    pub fn exit_code(&self) -> i32 {
        self.kind.exit_code()
    }
}

/// What a run produced. Output written before a failure is kept.
#[derive(Clone, Debug, Default)]
pub struct ScriptRun {
    pub stdout: String,
    pub trace: DerivationTrace,
    pub files: Vec<PathBuf>,
    pub error: Option<ScriptError>,
}

impl ScriptRun {
    pub fn exit_code(&self) -> i32 {
        self.error.as_ref().map_or(0, ScriptError::exit_code)
    }
}

#[derive(Clone, Debug)]
enum Discourse {
    Event(Box<DiscourseState>),
    /// A baseline discourse; `None` until the first sentence.
    Baseline(Option<Term>),
}

#[derive(Clone, Debug)]
struct Named {
    value: Value,
    /// Steps that produced this value, in order.
    lineage: Vec<TraceStep>,
}

#[derive(Clone, Debug)]
enum Value {
    Sentence(SentenceMeaning),
    Discourse(Discourse),
}

struct Runner<'o> {
    opts: &'o ScriptOptions,
    mode: Option<Mode>,
    lexicon: Option<Lexicon>,
    resolve: bool,
    names: BTreeMap<String, Named>,
    last_discourse: Option<String>,
    run: ScriptRun,
}

type Step<T> = Result<T, ErrorKind>;

fn syntax(msg: impl Into<String>) -> ErrorKind {
    ErrorKind::Syntax(msg.into())
}

fn is_name(s: &str) -> bool {
    let mut cs = s.chars();
    matches!(cs.next(), Some(c) if c.is_alphabetic() || c == '_')
        && cs.all(|c| c.is_alphanumeric() || c == '_' || c == '\'')
}

impl From<ComposeError> for ErrorKind {
    fn from(e: ComposeError) -> Self {
        match e {
            ComposeError::Graph(g) => ErrorKind::Access(g),
            other => ErrorKind::Type(other.to_string()),
        }
    }
}

impl From<LexiconError> for ErrorKind {
    fn from(e: LexiconError) -> Self {
        match e {
            LexiconError::TypeMismatch { .. } => ErrorKind::Type(e.to_string()),
            other => ErrorKind::Syntax(other.to_string()),
        }
    }
}

impl<'o> Runner<'o> {
    fn style(&self) -> Style {
        self.opts.style
    }

    fn show(&self, t: &Term) -> String {
        render(t, self.style())
    }

    fn lexicon(&self) -> Step<&Lexicon> {
        self.lexicon.as_ref().ok_or_else(|| {
            syntax("no mode set; start the script with `mode event` or `mode baseline`")
        })
    }

    fn resolve_path(&self, p: &str) -> PathBuf {
        let path = Path::new(p);
        if path.is_absolute() {
            path.to_path_buf()
        } else {
            self.opts.base_dir.join(path)
        }
    }

    fn get(&self, name: &str) -> Step<&Named> {
        self.names
            .get(name)
            .ok_or_else(|| syntax(format!("`{name}` is not defined")))
    }

    fn record(&mut self, step: TraceStep) {
        self.run.trace.steps.push(step);
    }

    fn statement(&mut self, line: &str) -> Step<()> {
        let toks: Vec<&str> = line.split_whitespace().collect();
        match toks.as_slice() {
            ["mode", m] => self.set_mode(m),
            ["mode", ..] => Err(syntax("usage: mode event|baseline")),
            ["lexicon", _, ..] => {
                let path = line.trim_start()["lexicon".len()..].trim();
                self.load_lexicon(path)
            }
            ["resolve", "on"] => {
                self.resolve = true;
                Ok(())
            }
            ["resolve", "off"] => {
                self.resolve = false;
                Ok(())
            }
            ["resolve", ..] => Err(syntax("usage: resolve on|off")),
            ["print", name] => self.print(name, None),
            ["print", name, fmt] => self.print(name, Some(fmt.parse().map_err(syntax)?)),
            ["print", ..] => Err(syntax("usage: print <name> [term|fol|trace|dot|json]")),
            ["emit", fmt, path] => self.emit(fmt.parse().map_err(syntax)?, path, None),
            ["emit", fmt, path, name] => self.emit(fmt.parse().map_err(syntax)?, path, Some(name)),
            ["emit", ..] => Err(syntax("usage: emit <format> <path> [<name>]")),
            [name, ":=", rest @ ..] => {
                if !is_name(name) || *name == "Empty" {
                    return Err(syntax(format!("invalid name `{name}`")));
                }
                if self.names.contains_key(*name) {
                    return Err(syntax(format!("`{name}` is already defined")));
                }
                match rest {
                    ["compose", args @ ..] => self.compose(name, args),
                    [] => Err(syntax("missing right-hand side")),
                    _ => {
                        let rhs = &line[line.find(":=").expect("matched") + 2..];
                        self.define_sentence(name, rhs)
                    }
                }
            }
            _ => Err(syntax(format!("unrecognized statement `{}`", line.trim()))),
        }
    }

    fn set_mode(&mut self, m: &str) -> Step<()> {
        let mode: Mode = m
            .parse()
            .map_err(|e: crate::lexicon::UnknownMode| syntax(e.to_string()))?;
        if self.lexicon.is_some() && self.opts.mode.is_none() {
            return Err(syntax("the mode can only be set once"));
        }
        if self.opts.mode.is_none() {
            self.mode = Some(mode);
            self.lexicon = Some(Lexicon::builtin(mode));
        }
        Ok(())
    }

    fn load_lexicon(&mut self, path: &str) -> Step<()> {
        let mode = self
            .mode
            .ok_or_else(|| syntax("`lexicon` needs a mode to be set first"))?;
        let full = self.resolve_path(path);
        let text = std::fs::read_to_string(&full)
            .map_err(|e| ErrorKind::Io(format!("{}: {e}", full.display())))?;
        let file = parse_lexicon(&text).map_err(|e| match ErrorKind::from(e) {
            ErrorKind::Syntax(m) => ErrorKind::Syntax(format!("{}: {m}", full.display())),
            ErrorKind::Type(m) => ErrorKind::Type(format!("{}: {m}", full.display())),
            other => other,
        })?;
        if let Some(m) = file.mode {
            if m != mode {
                return Err(syntax(format!(
                    "{} is a {m} lexicon but the script runs in {mode} mode",
                    full.display()
                )));
            }
        }
        self.lexicon.as_mut().expect("mode set").extend(file);
        Ok(())
    }

    fn define_sentence(&mut self, name: &str, rhs: &str) -> Step<()> {
        let tree =
            AppTree::parse(rhs.trim()).map_err(|e| syntax(format!("in tree: {}", e.message)))?;
        let lex = self.lexicon()?;
        let s = build_sentence(lex, &tree)?;
        let step = TraceStep {
            op: "build_sentence".into(),
            name: Some(name.to_string()),
            inputs: vec![tree.to_string()],
            output: self.show(&s.term),
            variant: None,
            graph: None,
        };
        self.record(step.clone());
        self.names.insert(
            name.to_string(),
            Named {
                value: Value::Sentence(s),
                lineage: vec![step],
            },
        );
        Ok(())
    }

    fn compose(&mut self, name: &str, args: &[&str]) -> Step<()> {
        let (rel, prev, sent, opts) = match args {
            [rel, prev, sent, opts @ ..] => (*rel, *prev, *sent, opts),
            _ => {
                return Err(syntax(
                    "usage: compose sub|coor <discourse|Empty> <sentence> [target=..] [label=..] [variant=..]",
                ))
            }
        };
        let relation = match rel {
            "sub" => Relation::Subordinating,
            "coor" => Relation::Coordinating,
            other => {
                return Err(syntax(format!(
                    "unknown relation class `{other}` (expected sub or coor)"
                )))
            }
        };
        let mut target = None;
        let mut label = None;
        let mut variant = None;
        for o in opts {
            match o.split_once('=') {
                Some(("target", v)) => target = Some(v.to_string()),
                Some(("label", v)) => label = Some(v.to_string()),
                Some(("variant", "basic")) => variant = Some(ComposeVariant::Basic),
                Some(("variant", "advanced")) => variant = Some(ComposeVariant::Advanced),
                _ => return Err(syntax(format!("unknown option `{o}`"))),
            }
        }
        let mode = self.lexicon()?.mode();
        let (prev_value, mut lineage) = if prev == "Empty" {
            let d = match mode {
                Mode::Event => Discourse::Event(Box::default()),
                Mode::Baseline => Discourse::Baseline(None),
            };
            (d, Vec::new())
        } else {
            let named = self.get(prev)?;
            match &named.value {
                Value::Discourse(d) => (d.clone(), named.lineage.clone()),
                Value::Sentence(_) => {
                    return Err(syntax(format!("`{prev}` is a sentence, not a discourse")))
                }
            }
        };
        let s_named = self.get(sent)?;
        let s = match &s_named.value {
            Value::Sentence(s) => s.clone(),
            Value::Discourse(_) => {
                return Err(syntax(format!("`{sent}` is a discourse, not a sentence")))
            }
        };
        for step in &s_named.lineage {
            if !lineage.contains(step) {
                lineage.push(step.clone());
            }
        }

        let (value, step) = match prev_value {
            Discourse::Event(state) => {
                let v = variant.unwrap_or_else(|| ComposeVariant::for_discourse(&state.meaning));
                let next =
                    state.compose(relation, &s, target.as_deref(), label.as_deref(), Some(v))?;
                let op = match relation {
                    Relation::Subordinating => "compose_sub",
                    Relation::Coordinating => "compose_coor",
                };
                let step = TraceStep {
                    op: op.into(),
                    name: Some(name.to_string()),
                    inputs: vec![self.show(&state.meaning.term), self.show(&s.term)],
                    output: self.show(&next.meaning.term),
                    variant: Some(
                        match v {
                            ComposeVariant::Basic => "basic",
                            ComposeVariant::Advanced => "advanced",
                        }
                        .into(),
                    ),
                    graph: Some(next.graph.attachments().len()),
                };
                (Discourse::Event(Box::new(next)), step)
            }
            Discourse::Baseline(d) => {
                if target.is_some() {
                    return Err(syntax("`target=` needs event mode"));
                }
                if s.ty != SemType::discourse() {
                    return Err(ErrorKind::Type(format!(
                        "sentence `{sent}` has type {}, expected {}",
                        s.ty,
                        SemType::discourse()
                    )));
                }
                match d {
                    None => {
                        let step = TraceStep {
                            op: "lift".into(),
                            name: Some(name.to_string()),
                            inputs: vec![self.show(&s.term)],
                            output: self.show(&s.term),
                            variant: None,
                            graph: None,
                        };
                        (Discourse::Baseline(Some(s.term.clone())), step)
                    }
                    Some(d) => {
                        let merged = merge_baseline(&d, &s.term)?;
                        let step = TraceStep {
                            op: "merge_baseline".into(),
                            name: Some(name.to_string()),
                            inputs: vec![self.show(&d), self.show(&s.term)],
                            output: self.show(&merged),
                            variant: None,
                            graph: None,
                        };
                        (Discourse::Baseline(Some(merged)), step)
                    }
                }
            }
        };
        self.record(step.clone());
        lineage.push(step);
        self.names.insert(
            name.to_string(),
            Named {
                value: Value::Discourse(value),
                lineage,
            },
        );
        self.last_discourse = Some(name.to_string());
        Ok(())
    }

    /// The frozen (and, when enabled, resolved) formula of a discourse,
    /// with the steps that produced it.
    fn formula(&self, name: &str, d: &Discourse) -> Step<(Term, Vec<TraceStep>)> {
        let mut steps = Vec::new();
        let (frozen, graph) = match d {
            Discourse::Event(state) => (state.finalize(), Some(state)),
            Discourse::Baseline(t) => {
                let t = t
                    .clone()
                    .unwrap_or_else(|| crate::composer::empty_discourse().term);
                let frozen = beta_normalize(&Term::apply(
                    t.clone(),
                    [
                        Term::constant("A", SemType::CTX),
                        Term::constant("B", SemType::arrow(SemType::CTX, SemType::PROP)),
                    ],
                ));
                (frozen, None)
            }
        };
        let input = match d {
            Discourse::Event(state) => self.show(&state.meaning.term),
            Discourse::Baseline(t) => t.as_ref().map_or_else(String::new, |t| self.show(t)),
        };
        steps.push(TraceStep {
            op: "finalize".into(),
            name: Some(name.to_string()),
            inputs: vec![input],
            output: self.show(&frozen),
            variant: None,
            graph: graph.map(|s| s.graph.attachments().len()),
        });
        if !self.resolve {
            return Ok((frozen, steps));
        }
        let Some(state) = graph else {
            return Ok((frozen, steps));
        };
        let resolved = crate::graph::resolve_term(&state.graph, &frozen, &self.opts.sel)
            .map_err(ErrorKind::Resolve)?;
        steps.push(TraceStep {
            op: "resolve".into(),
            name: Some(name.to_string()),
            inputs: vec![self.show(&frozen)],
            output: self.show(&resolved),
            variant: None,
            graph: Some(state.graph.attachments().len()),
        });
        Ok((resolved, steps))
    }

    fn format(&mut self, name: &str, fmt: Format) -> Step<String> {
        let named = self.get(name)?.clone();
        match (&named.value, fmt) {
            (Value::Sentence(s), Format::Fol | Format::Term) => Ok(self.show(&s.term) + "\n"),
            (Value::Sentence(_), Format::Trace) => Ok(emit_trace(&DerivationTrace {
                steps: named.lineage.clone(),
            })),
            (Value::Sentence(_), _) => {
                Err(syntax(format!("`{name}` is a sentence and has no graph")))
            }
            (Value::Discourse(d), Format::Term) => Ok(match d {
                Discourse::Event(s) => self.show(&s.meaning.term),
                Discourse::Baseline(Some(t)) => self.show(t),
                Discourse::Baseline(None) => self.show(&crate::composer::empty_discourse().term),
            } + "\n"),
            (Value::Discourse(d), Format::Fol) => {
                let (t, steps) = self.formula(name, d)?;
                for s in steps {
                    self.record(s);
                }
                Ok(self.show(&t) + "\n")
            }
            (Value::Discourse(d), Format::Trace) => {
                let (_, steps) = self.formula(name, d)?;
                let mut all = named.lineage.clone();
                all.extend(steps);
                Ok(emit_trace(&DerivationTrace { steps: all }))
            }
            (Value::Discourse(Discourse::Event(s)), Format::Dot) => Ok(s.graph.to_dot()),
            (Value::Discourse(d @ Discourse::Event(s)), Format::Json) => {
                let (t, _) = self.formula(name, d)?;
                let v = serde_json::json!({
                    "name": name,
                    "formula": self.show(&t),
                    "events": s.meaning.events.iter().map(|e| serde_json::json!({
                        "name": e.name,
                        "abstract": e.is_abstract,
                    })).collect::<Vec<_>>(),
                    "graph": s.graph.to_json(),
                });
                Ok(serde_json::to_string_pretty(&v).expect("json") + "\n")
            }
            (Value::Discourse(Discourse::Baseline(_)), _) => Err(syntax(format!(
                "`{name}` is a baseline discourse and has no graph"
            ))),
        }
    }

    fn print(&mut self, name: &str, fmt: Option<Format>) -> Step<()> {
        let out = self.format(name, fmt.unwrap_or(Format::Fol))?;
        self.run.stdout.push_str(&out);
        Ok(())
    }

    fn emit(&mut self, fmt: Format, path: &str, name: Option<&str>) -> Step<()> {
        let text = match (fmt, name) {
            (Format::Trace, None) => emit_trace(&self.run.trace),
            (_, Some(n)) => self.format(n, fmt)?,
            (_, None) => {
                let n = self
                    .last_discourse
                    .clone()
                    .ok_or_else(|| syntax("nothing to emit: no discourse defined yet"))?;
                self.format(&n, fmt)?
            }
        };
        let full = self.resolve_path(path);
        if let Some(dir) = full.parent() {
            if !dir.as_os_str().is_empty() {
                std::fs::create_dir_all(dir)
                    .map_err(|e| ErrorKind::Io(format!("{}: {e}", dir.display())))?;
            }
        }
        std::fs::write(&full, text)
            .map_err(|e| ErrorKind::Io(format!("{}: {e}", full.display())))?;
        self.run.files.push(full);
        Ok(())
    }
}

/// Runs a script. Statements execute in order; the first failure stops
/// the run and is reported with its statement index and line.
pub fn run_script(text: &str, opts: &ScriptOptions) -> ScriptRun {
    let mut r = Runner {
        opts,
        mode: opts.mode,
        lexicon: opts.mode.map(Lexicon::builtin),
        resolve: opts.resolve,
        names: BTreeMap::new(),
        last_discourse: None,
        run: ScriptRun::default(),
    };
    let mut index = 0;
    for (i, raw) in text.lines().enumerate() {
        let line = match raw.find('#') {
            Some(p) => &raw[..p],
            None => raw,
        };
        if line.trim().is_empty() {
            continue;
        }
        index += 1;
        if let Err(kind) = r.statement(line) {
            r.run.error = Some(ScriptError {
                statement: index,
                line: i + 1,
                kind,
            });
            return r.run;
        }
    }
    if let Some(fmt) = opts.emit {
        let result = match (fmt, r.last_discourse.clone()) {
            (Format::Trace, None) => Ok(emit_trace(&r.run.trace)),
            (_, Some(name)) => r.format(&name, fmt),
            (_, None) => Err(syntax("--emit: the script defines no discourse")),
        };
        match result {
            Ok(out) => r.run.stdout.push_str(&out),
            Err(kind) => {
                r.run.error = Some(ScriptError {
                    statement: index + 1,
                    line: text.lines().count() + 1,
                    kind,
                })
            }
        }
    }
    r.run
}
