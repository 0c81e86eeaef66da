//! Discourse structure: events linked by subordinating (vertical) and
//! coordinating (horizontal) relations, with abstract nodes covering
//! coordinated groups.
//!
//! Only nodes on the right frontier accept new attachments and can be
//! picked by `Sel`. The frontier is found by walking up from the most
//! recently attached node, moving to a node's cover when it has one and
//! then to the subordinating parent.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::term::Term;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct NodeId(pub usize);

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "n{}", self.0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum NodeKind {
    Concrete,
    Abstract,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EventNode {
    pub id: NodeId,
    pub kind: NodeKind,
    pub label: String,
    /// Index of the sentence that introduced the event (concrete nodes).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sentence: Option<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Relation {
    Subordinating,
    Coordinating,
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Relation::Subordinating => "sub",
            Relation::Coordinating => "coor",
        })
    }
}

/// One entry of the attachment log, enough to replay it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Attachment {
    pub label: String,
    /// `None` for the root.
    pub relation: Option<Relation>,
    pub target: Option<String>,
    /// Requested label of the abstract node, for coordination.
    pub cover_label: Option<String>,
    /// Display name of the discourse relation (`Narration`, …).
    pub relation_name: Option<String>,
}

/// What an attachment created.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Attached {
    pub node: NodeId,
    /// The abstract node now covering the new node, if coordinating.
    pub cover: Option<NodeId>,
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("the discourse graph is empty")]
    EmptyGraph,
    #[error("the discourse graph already has a root")]
    RootExists,
    #[error("label `{0}` is already in use")]
    DuplicateLabel(String),
    #[error("no event labelled `{0}`")]
    UnknownLabel(String),
    #[error("event `{0}` is not on the right frontier")]
    InaccessibleTarget(String),
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DiscourseGraph {
    nodes: Vec<EventNode>,
    parent: BTreeMap<NodeId, NodeId>,
    sub_edges: Vec<(NodeId, NodeId)>,
    coor_edges: Vec<(NodeId, NodeId)>,
    cover: BTreeMap<NodeId, NodeId>,
    members: BTreeMap<NodeId, Vec<NodeId>>,
    /// Every name a node answers to, aliases included.
    labels: BTreeMap<String, NodeId>,
    /// Attachment index at which each label was introduced.
    label_step: BTreeMap<String, usize>,
    last: Option<NodeId>,
    log: Vec<Attachment>,
}

impl DiscourseGraph {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[EventNode] {
        &self.nodes
    }

    pub fn node(&self, id: NodeId) -> &EventNode {
        &self.nodes[id.0]
    }

    pub fn lookup(&self, label: &str) -> Result<NodeId, GraphError> {
        self.labels
            .get(label)
            .copied()
            .ok_or_else(|| GraphError::UnknownLabel(label.to_string()))
    }

    pub fn sub_edges(&self) -> &[(NodeId, NodeId)] {
        &self.sub_edges
    }

    pub fn coor_edges(&self) -> &[(NodeId, NodeId)] {
        &self.coor_edges
    }

    pub fn parent(&self, id: NodeId) -> Option<NodeId> {
        self.parent.get(&id).copied()
    }

    pub fn cover_of(&self, id: NodeId) -> Option<NodeId> {
        self.cover.get(&id).copied()
    }

    pub fn members(&self, id: NodeId) -> &[NodeId] {
        self.members.get(&id).map_or(&[], Vec::as_slice)
    }

    pub fn last_attached(&self) -> Option<NodeId> {
        self.last
    }

    pub fn attachments(&self) -> &[Attachment] {
        &self.log
    }

    /// Index of the attachment that introduced `label`.
    pub fn introduced_at(&self, label: &str) -> Option<usize> {
        self.label_step.get(label).copied()
    }

    fn add_node(&mut self, kind: NodeKind, label: &str) -> Result<NodeId, GraphError> {
        if self.labels.contains_key(label) {
            return Err(GraphError::DuplicateLabel(label.to_string()));
        }
        let id = NodeId(self.nodes.len());
        let sentence = match kind {
            NodeKind::Concrete => Some(
                self.nodes
                    .iter()
                    .filter(|n| n.kind == NodeKind::Concrete)
                    .count(),
            ),
            NodeKind::Abstract => None,
        };
        self.nodes.push(EventNode {
            id,
            kind,
            label: label.to_string(),
            sentence,
        });
        self.labels.insert(label.to_string(), id);
        self.label_step.insert(label.to_string(), self.log.len());
        Ok(id)
    }

    /// Inserts the first event.
    pub fn insert_root(&mut self, label: &str) -> Result<NodeId, GraphError> {
        if !self.is_empty() {
            return Err(GraphError::RootExists);
        }
        let id = self.add_node(NodeKind::Concrete, label)?;
        self.last = Some(id);
        self.log.push(Attachment {
            label: label.to_string(),
            relation: None,
            target: None,
            cover_label: None,
            relation_name: None,
        });
        Ok(id)
    }

    /// Attaches a new concrete event to `target`, which must be on the
    /// right frontier.
    ///
    /// Coordination creates an abstract node over `{target, new}` named
    /// `cover_label` (default `target&new`), or, when `target` is already
    /// covered, adds the new node to that cover and registers
    /// `cover_label` as another name for it.
    pub fn attach(
        &mut self,
        label: &str,
        relation: Relation,
        target: &str,
        cover_label: Option<&str>,
        relation_name: Option<&str>,
    ) -> Result<Attached, GraphError> {
        if self.is_empty() {
            return Err(GraphError::EmptyGraph);
        }
        let t = self.lookup(target)?;
        if !self.right_frontier()?.contains(&t) {
            return Err(GraphError::InaccessibleTarget(target.to_string()));
        }
        if self.labels.contains_key(label) {
            return Err(GraphError::DuplicateLabel(label.to_string()));
        }
        let default_cover = format!("{target}&{label}");
        let new_cover = match (relation, self.cover.contains_key(&t)) {
            (Relation::Coordinating, false) => Some(cover_label.unwrap_or(&default_cover)),
            (Relation::Coordinating, true) => cover_label,
            (Relation::Subordinating, _) => None,
        };
        if let Some(c) = new_cover {
            if c == label || self.labels.contains_key(c) {
                return Err(GraphError::DuplicateLabel(c.to_string()));
            }
        }
        let n = self.add_node(NodeKind::Concrete, label)?;
        let mut cover = None;
        match relation {
            Relation::Subordinating => {
                self.parent.insert(n, t);
                self.sub_edges.push((t, n));
            }
            Relation::Coordinating => {
                self.coor_edges.push((t, n));
                let c = match self.cover.get(&t).copied() {
                    Some(c) => {
                        if let Some(alias) = cover_label {
                            self.labels.insert(alias.to_string(), c);
                            self.label_step.insert(alias.to_string(), self.log.len());
                        }
                        c
                    }
                    None => {
                        let c =
                            self.add_node(NodeKind::Abstract, new_cover.expect("checked above"))?;
                        self.cover.insert(t, c);
                        self.members.insert(c, vec![t]);
                        if let Some(p) = self.parent.get(&t).copied() {
                            self.parent.insert(c, p);
                        }
                        c
                    }
                };
                self.cover.insert(n, c);
                self.members.entry(c).or_default().push(n);
                cover = Some(c);
            }
        }
        self.last = Some(n);
        self.log.push(Attachment {
            label: label.to_string(),
            relation: Some(relation),
            target: Some(target.to_string()),
            cover_label: cover_label.map(str::to_string),
            relation_name: relation_name.map(str::to_string),
        });
        Ok(Attached { node: n, cover })
    }

    /// Nodes on the right frontier, most recent first.
    pub fn right_frontier(&self) -> Result<Vec<NodeId>, GraphError> {
        let mut cur = Some(self.last.ok_or(GraphError::EmptyGraph)?);
        let mut out = Vec::new();
        while let Some(n) = cur {
            out.push(n);
            let mut top = n;
            while let Some(c) = self.cover.get(&top).copied() {
                out.push(c);
                top = c;
            }
            cur = self.parent.get(&top).copied();
        }
        Ok(out)
    }

    pub fn frontier_labels(&self) -> Result<Vec<String>, GraphError> {
        Ok(self
            .right_frontier()?
            .into_iter()
            .map(|n| self.node(n).label.clone())
            .collect())
    }

    /// The graph as it was after the first `k` attachments.
    pub fn snapshot(&self, k: usize) -> DiscourseGraph {
        let mut g = DiscourseGraph::new();
        for a in self.log.iter().take(k) {
            let replayed = match (&a.relation, &a.target) {
                (Some(rel), Some(target)) => g
                    .attach(
                        &a.label,
                        *rel,
                        target,
                        a.cover_label.as_deref(),
                        a.relation_name.as_deref(),
                    )
                    .map(|_| ()),
                _ => g.insert_root(&a.label).map(|_| ()),
            };
            replayed.expect("replaying a logged attachment");
        }
        g
    }

    /// Keeps the labels of `ctx` that name frontier nodes, in order.
    pub fn eval_del(&self, ctx: &[String]) -> Result<Vec<String>, ResolveError> {
        if ctx.is_empty() {
            return Ok(Vec::new());
        }
        let frontier = self.right_frontier()?;
        let mut out = Vec::new();
        for l in ctx {
            let id = self.lookup(l)?;
            if frontier.contains(&id) {
                out.push(l.clone());
            }
        }
        Ok(out)
    }

    /// Picks an antecedent event from `ctx`.
    pub fn eval_sel(
        &self,
        ctx: &[String],
        strategy: &SelStrategy,
    ) -> Result<Selection, ResolveError> {
        let accessible = self.eval_del(ctx)?;
        let chosen = match strategy {
            SelStrategy::MostRecent => accessible
                .first()
                .cloned()
                .ok_or(ResolveError::NoAntecedent)?,
            SelStrategy::FixedTarget(target) => {
                let id = self.lookup(target)?;
                if !self.right_frontier()?.contains(&id) {
                    return Err(ResolveError::InaccessibleTarget(target.clone()));
                }
                // Prefer the name the context uses for that node.
                accessible
                    .iter()
                    .find(|l| self.labels.get(*l) == Some(&id))
                    .cloned()
                    .unwrap_or_else(|| target.clone())
            }
            SelStrategy::Callback(hook) => {
                if accessible.is_empty() {
                    return Err(ResolveError::NoAntecedent);
                }
                let pick = hook.0(self, &accessible).ok_or(ResolveError::NoAntecedent)?;
                if !accessible.contains(&pick) {
                    return Err(ResolveError::InaccessibleTarget(pick));
                }
                pick
            }
        };
        let id = self.lookup(&chosen)?;
        Ok(Selection {
            node: self.node(id).clone(),
            name: chosen,
        })
    }

    /// Graphviz rendering: subordination solid, coordination dashed,
    /// abstract nodes boxed with dotted membership edges, frontier nodes
    /// filled.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph discourse {\n");
        if self.is_empty() {
            out.push_str("}\n");
            return out;
        }
        let frontier = self.right_frontier().unwrap_or_default();
        out.push_str("  rankdir=TB;\n");
        for n in &self.nodes {
            let shape = match n.kind {
                NodeKind::Concrete => "ellipse",
                NodeKind::Abstract => "box",
            };
            let fill = if frontier.contains(&n.id) {
                ", style=filled, fillcolor=lightblue"
            } else {
                ""
            };
            out.push_str(&format!(
                "  {} [label=\"{}\", shape={shape}{fill}];\n",
                n.id,
                n.label.replace('"', "\\\"")
            ));
        }
        for (p, c) in &self.sub_edges {
            out.push_str(&format!("  {p} -> {c};\n"));
        }
        for (l, r) in &self.coor_edges {
            out.push_str(&format!(
                "  {l} -> {r} [style=dashed, dir=none, constraint=false];\n"
            ));
            out.push_str(&format!("  {{ rank=same; {l}; {r}; }}\n"));
        }
        for (c, ms) in &self.members {
            for m in ms {
                out.push_str(&format!("  {c} -> {m} [style=dotted, arrowhead=none];\n"));
            }
        }
        out.push_str("}\n");
        out
    }

    /// JSON dump with `nodes`, `sub_edges`, `coor_edges`, `covers` and
    /// `frontier`.
    pub fn to_json(&self) -> serde_json::Value {
        #[derive(Serialize)]
        struct Dump<'a> {
            nodes: &'a [EventNode],
            sub_edges: Vec<[NodeId; 2]>,
            coor_edges: Vec<[NodeId; 2]>,
            covers: BTreeMap<String, &'a [NodeId]>,
            frontier: Vec<NodeId>,
        }
        let dump = Dump {
            nodes: &self.nodes,
            sub_edges: self.sub_edges.iter().map(|&(a, b)| [a, b]).collect(),
            coor_edges: self.coor_edges.iter().map(|&(a, b)| [a, b]).collect(),
            covers: self
                .members
                .iter()
                .map(|(c, ms)| (c.0.to_string(), ms.as_slice()))
                .collect(),
            frontier: self.right_frontier().unwrap_or_default(),
        };
        serde_json::to_value(dump).expect("graph dump serializes")
    }
}

/// The result of `Sel`: the chosen node and the name the term uses for it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Selection {
    pub node: EventNode,
    pub name: String,
}

type Hook = dyn Fn(&DiscourseGraph, &[String]) -> Option<String> + Send + Sync;

/// A user-supplied `Sel` implementation. It receives the accessible part of
/// the context (most recent first) and returns one of its labels.
#[derive(Clone)]
pub struct SelHook(pub Arc<Hook>);

impl fmt::Debug for SelHook {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("SelHook(..)")
    }
}

#[derive(Clone, Debug, Default)]
pub enum SelStrategy {
    /// The first accessible element of the context.
    #[default]
    MostRecent,
    /// A fixed node, by label.
    FixedTarget(String),
    Callback(SelHook),
}

impl SelStrategy {
    pub fn callback<F>(f: F) -> Self
    where
        F: Fn(&DiscourseGraph, &[String]) -> Option<String> + Send + Sync + 'static,
    {
        SelStrategy::Callback(SelHook(Arc::new(f)))
    }
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum ResolveError {
    #[error("no accessible antecedent in the context")]
    NoAntecedent,
    #[error("no event labelled `{0}`")]
    UnknownLabel(String),
    #[error("event `{0}` is not accessible")]
    InaccessibleTarget(String),
    #[error("context argument is not a concrete list: {0}")]
    NonConcreteContext(String),
    #[error("the discourse graph is empty")]
    EmptyGraph,
}

impl From<GraphError> for ResolveError {
    fn from(e: GraphError) -> Self {
        match e {
            GraphError::UnknownLabel(l) => ResolveError::UnknownLabel(l),
            GraphError::InaccessibleTarget(l) => ResolveError::InaccessibleTarget(l),
            _ => ResolveError::EmptyGraph,
        }
    }
}

/// A context list written out in full: labelled events ending in a frozen
/// constant (`A`, `nil`).
struct ConcreteList<'t> {
    items: Vec<&'t Term>,
    labels: Vec<String>,
    tail: &'t Term,
}

fn concrete_list(t: &Term) -> Result<ConcreteList<'_>, ResolveError> {
    let mut items = Vec::new();
    let mut labels = Vec::new();
    let mut cur = t;
    loop {
        match cur {
            Term::Cons(h, tl) => {
                match h.as_ref() {
                    Term::Var(l) | Term::Const(l, _) => labels.push(l.clone()),
                    other => {
                        return Err(ResolveError::NonConcreteContext(crate::syntax::render(
                            other,
                            crate::types::Style::Unicode,
                        )))
                    }
                }
                items.push(h.as_ref());
                cur = tl;
            }
            Term::Const(..) => {
                return Ok(ConcreteList {
                    items,
                    labels,
                    tail: cur,
                })
            }
            other => {
                return Err(ResolveError::NonConcreteContext(crate::syntax::render(
                    other,
                    crate::types::Style::Unicode,
                )))
            }
        }
    }
}

/// Replaces every `Sel(l)` and `Del(l)` in `t` by its value on `g`.
///
/// A list whose head is the event introduced by attachment `i` is the
/// context seen by attachment `i + 1`. `Sel` is evaluated on the graph
/// just before that attachment, `Del` on the graph just after it.
pub fn resolve_term(
    g: &DiscourseGraph,
    t: &Term,
    strategy: &SelStrategy,
) -> Result<Term, ResolveError> {
    Ok(match t {
        Term::Var(_) | Term::Const(..) => t.clone(),
        Term::Lam(x, ty, b) => Term::lam(x.clone(), ty.clone(), resolve_term(g, b, strategy)?),
        Term::Exists(x, ty, b) => {
            Term::exists(x.clone(), ty.clone(), resolve_term(g, b, strategy)?)
        }
        Term::And(l, r) => Term::and(resolve_term(g, l, strategy)?, resolve_term(g, r, strategy)?),
        Term::Cons(h, tl) => Term::cons(
            resolve_term(g, h, strategy)?,
            resolve_term(g, tl, strategy)?,
        ),
        Term::App(f, a) => {
            let a = resolve_term(g, a, strategy)?;
            match f.as_ref() {
                Term::Const(op, _) if op == "Sel" || op == "Del" => {
                    let list = concrete_list(&a)?;
                    let step = match list.labels.first() {
                        Some(h) => Some(
                            g.introduced_at(h)
                                .ok_or_else(|| ResolveError::UnknownLabel(h.clone()))?,
                        ),
                        None => None,
                    };
                    if op == "Sel" {
                        let Some(i) = step else {
                            return Err(ResolveError::NoAntecedent);
                        };
                        let before = g.snapshot(i + 1);
                        let chosen = before.eval_sel(&list.labels, strategy)?;
                        Term::Var(chosen.name)
                    } else {
                        let Some(i) = step else {
                            return Ok(list.tail.clone());
                        };
                        let after = if i + 2 <= g.attachments().len() {
                            g.snapshot(i + 2)
                        } else {
                            g.clone()
                        };
                        let kept = after.eval_del(&list.labels)?;
                        let mut out = list.tail.clone();
                        for (item, label) in list.items.iter().zip(&list.labels).rev() {
                            if kept.contains(label) {
                                out = Term::cons((*item).clone(), out);
                            }
                        }
                        out
                    }
                }
                _ => Term::app(resolve_term(g, f, strategy)?, a),
            }
        }
    })
}
