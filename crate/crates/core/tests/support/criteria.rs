//! The worked derivations, each as a check returning a description of
//! the first mismatch.

use discsem::composer::{
    build_sentence, eos_close, merge_baseline, AppTree, ComposeVariant, DiscourseState,
};
use discsem::graph::{DiscourseGraph, GraphError, NodeKind, Relation, SelStrategy};
use discsem::{
    alpha_equal, render, typecheck, Lexicon, Mode, SemType, Style, Term, TypingEnv, Variant,
};

use super::parse;

pub type Check = Result<(), String>;

fn same(what: &str, got: &Term, want: &str) -> Check {
    let want_t = parse(want);
    if alpha_equal(got, &want_t) {
        Ok(())
    } else {
        Err(format!(
            "{what}:\n  got  {}\n  want {want}",
            render(got, Style::Unicode)
        ))
    }
}

fn sentence(lex: &Lexicon, tree: &str) -> Result<discsem::SentenceMeaning, String> {
    build_sentence(lex, &AppTree::parse(tree).map_err(|e| e.to_string())?)
        .map_err(|e| e.to_string())
}

pub const KISS_PLAZA: &str = "∃e.(Kiss(e) ∧ Ag(e, john) ∧ Pat(e, mary) ∧ Loc(e, plaza))";

/// Static event semantics for the plaza sentence, closed by the static EOS.
pub fn static_sentence() -> Check {
    let lex = Lexicon::builtin(Mode::Event);
    let s = sentence(&lex, "(in_the_plaza_static ((kiss_static Mary) John))")?;
    same(
        "open sentence",
        &s.term,
        "λe.(Kiss(e) ∧ Ag(e, john) ∧ Pat(e, mary) ∧ Loc(e, plaza))",
    )?;
    let closed = eos_close(&s, Variant::Static).map_err(|e| e.to_string())?;
    same("closed sentence", &closed, KISS_PLAZA)?;
    let via_entry = sentence(
        &lex,
        "(EOS_static (in_the_plaza_static ((kiss_static Mary) John)))",
    )?;
    same("closed through the EOS entry", &via_entry.term, KISS_PLAZA)
}

/// The same sentence with dynamic entries and the dynamic EOS.
pub fn dynamic_sentence() -> Check {
    let lex = Lexicon::builtin(Mode::Event);
    let s = sentence(&lex, "(in_the_plaza ((kiss Mary) John))")?;
    same(
        "open sentence",
        &s.term,
        "λe a b.(Kiss(e) ∧ Ag(e, john) ∧ Pat(e, mary) ∧ Loc(e, plaza) ∧ b(e::a))",
    )?;
    let closed = eos_close(&s, Variant::Dynamic).map_err(|e| e.to_string())?;
    let want = "∃e.(Kiss(e) ∧ Ag(e, john) ∧ Pat(e, mary) ∧ Loc(e, plaza) ∧ B(e::A))";
    same("closed sentence", &closed, want)?;
    let via_entry = sentence(&lex, "(EOS (in_the_plaza ((kiss Mary) John)))")?;
    same("closed through the EOS entry", &via_entry.term, want)
}

/// Baseline continuation semantics: the two-sentence discourse.
pub fn baseline_discourse() -> Check {
    let lex = Lexicon::builtin(Mode::Baseline);
    let s1 = sentence(&lex, "((kisses Mary) John)")?;
    same(
        "first sentence",
        &s1.term,
        "λe phi.(Kiss((j : i), (m : i)) ∧ phi((j : i)::(m : i)::e))",
    )?;
    let s2 = sentence(&lex, "(smiles she)")?;
    same(
        "second sentence",
        &s2.term,
        "λe phi.(Smile(sel_she(e)) ∧ phi(e))",
    )?;
    let d = merge_baseline(&s1.term, &s2.term).map_err(|e| e.to_string())?;
    same(
        "merged discourse",
        &d,
        "λe phi.(Kiss((j : i), (m : i)) ∧ Smile(sel_she((j : i)::(m : i)::e)) ∧ phi((j : i)::(m : i)::e))",
    )?;
    let ty = typecheck(&d, &TypingEnv::new()).map_err(|e| e.to_string())?;
    if ty != SemType::discourse() {
        return Err(format!("merged discourse has type {ty}"));
    }
    Ok(())
}

pub const STEP_ONE: &str =
    "λa b.∃e1.(Kiss(e1) ∧ Ag(e1, john) ∧ Pat(e1, mary) ∧ Loc(e1, plaza) ∧ b(e1::a))";

pub const SUB_STEP_TWO: &str =
    "λa b.∃e1 e2.(Kiss(e1) ∧ Ag(e1, john) ∧ Pat(e1, mary) ∧ Loc(e1, plaza) \
     ∧ Smile(e2) ∧ Ag(e2, sel_she(e1::a)) ∧ b(e2::e1::a) ∧ Rel2(Sel(e1::a), e2))";

pub const COOR_STEP_TWO: &str = "λa b.∃ec e1 e2.(Kiss(e1) ∧ Ag(e1, john) ∧ Pat(e1, mary) ∧ Loc(e1, plaza) \
     ∧ Smile(e2) ∧ Ag(e2, sel_she(ec::Del(e1::a))) ∧ b(e2::ec::Del(e1::a)) ∧ Rel3(Sel(e1::a), e2, ec))";

/// The two-sentence event discourse composed under one relation class.
pub fn two_step(rel: Relation) -> Result<(DiscourseState, DiscourseState), String> {
    let lex = Lexicon::builtin(Mode::Event);
    let s1 = sentence(&lex, "(in_the_plaza ((kiss Mary) John))")?;
    let s2 = sentence(&lex, "(she smile)")?;
    let d0 = DiscourseState::new();
    let d1 = d0
        .compose(rel, &s1, None, None, Some(ComposeVariant::Basic))
        .map_err(|e| e.to_string())?;
    let d2 = d1
        .compose(rel, &s2, None, None, Some(ComposeVariant::Advanced))
        .map_err(|e| e.to_string())?;
    Ok((d1, d2))
}

pub fn sub_derivation() -> Check {
    let (d1, d2) = two_step(Relation::Subordinating)?;
    same("step 1", &d1.meaning.term, STEP_ONE)?;
    same("step 2", &d2.meaning.term, SUB_STEP_TWO)
}

pub fn coor_derivation() -> Check {
    let (d1, d2) = two_step(Relation::Coordinating)?;
    same("step 1", &d1.meaning.term, STEP_ONE)?;
    same("step 2", &d2.meaning.term, COOR_STEP_TWO)
}

/// e1 with e2 below it, e3 coordinated with e2, e4 below e3 and e5
/// coordinated with e4.
pub fn five_event_graph() -> DiscourseGraph {
    let mut g = DiscourseGraph::new();
    g.insert_root("e1").unwrap();
    g.attach("e2", Relation::Subordinating, "e1", None, None)
        .unwrap();
    g.attach("e3", Relation::Coordinating, "e2", None, None)
        .unwrap();
    g.attach("e4", Relation::Subordinating, "e3", None, None)
        .unwrap();
    g.attach("e5", Relation::Coordinating, "e4", None, None)
        .unwrap();
    g
}

pub fn concrete_frontier(g: &DiscourseGraph) -> Vec<String> {
    let mut v: Vec<String> = g
        .right_frontier()
        .unwrap()
        .into_iter()
        .filter(|n| g.node(*n).kind == NodeKind::Concrete)
        .map(|n| g.node(n).label.clone())
        .collect();
    v.sort();
    v
}

pub fn five_event_accessibility() -> Check {
    let g = five_event_graph();
    let f = concrete_frontier(&g);
    if f != ["e1", "e3", "e5"] {
        return Err(format!("frontier {f:?}"));
    }
    for blocked in ["e2", "e4"] {
        let mut h = g.clone();
        match h.attach("e6", Relation::Subordinating, blocked, None, None) {
            Err(GraphError::InaccessibleTarget(t)) if t == blocked => {}
            other => return Err(format!("attaching to {blocked}: {other:?}")),
        }
    }
    Ok(())
}

/// The evening discourse: (b) elaborates (a), (c) elaborates (b), (d)
/// continues (c) by Narration, and (e) continues (b) by Narration.
pub fn evening() -> DiscourseGraph {
    let mut g = DiscourseGraph::new();
    g.insert_root("a").unwrap();
    g.attach("b", Relation::Subordinating, "a", None, Some("Elaboration"))
        .unwrap();
    g.attach("c", Relation::Subordinating, "b", None, Some("Elaboration"))
        .unwrap();
    g.attach("d", Relation::Coordinating, "c", None, Some("Narration"))
        .unwrap();
    g.attach("e", Relation::Coordinating, "b", None, Some("Narration"))
        .unwrap();
    g
}

pub fn evening_accessibility() -> Check {
    let g = evening();
    let frontier = g.frontier_labels().map_err(|e| e.to_string())?;
    if frontier.iter().any(|l| l == "c") {
        return Err(format!("(c) still on the frontier {frontier:?}"));
    }
    let mut h = g.clone();
    match h.attach("f", Relation::Subordinating, "c", None, None) {
        Err(GraphError::InaccessibleTarget(_)) => {}
        other => return Err(format!("attaching (f) to (c): {other:?}")),
    }
    for target in &frontier {
        for rel in [Relation::Subordinating, Relation::Coordinating] {
            let mut h = g.clone();
            h.attach("f", rel, target, Some("fc"), None)
                .map_err(|e| format!("attaching (f) to frontier node {target}: {e}"))?;
        }
    }
    Ok(())
}

/// Sel and Del evaluated on the discourse graph, most recent antecedent.
pub fn resolution() -> Check {
    let (_, sub) = two_step(Relation::Subordinating)?;
    let r = sub
        .resolve(&SelStrategy::MostRecent)
        .map_err(|e| e.to_string())?;
    same(
        "resolved subordination",
        &r,
        "∃e1 e2.(Kiss(e1) ∧ Ag(e1, john) ∧ Pat(e1, mary) ∧ Loc(e1, plaza) \
         ∧ Smile(e2) ∧ Ag(e2, sel_she(e1::A)) ∧ B(e2::e1::A) ∧ Rel2(e1, e2))",
    )?;
    let (_, coor) = two_step(Relation::Coordinating)?;
    let r = coor
        .resolve(&SelStrategy::MostRecent)
        .map_err(|e| e.to_string())?;
    same(
        "resolved coordination",
        &r,
        "∃ec e1 e2.(Kiss(e1) ∧ Ag(e1, john) ∧ Pat(e1, mary) ∧ Loc(e1, plaza) \
         ∧ Smile(e2) ∧ Ag(e2, sel_she(ec::A)) ∧ B(e2::ec::A) ∧ Rel3(e1, e2, ec))",
    )
}

/// Every golden sentence and discourse term has its category's type.
pub fn golden_types() -> Check {
    let lex = Lexicon::builtin(Mode::Event);
    for tree in ["(in_the_plaza ((kiss Mary) John))", "(she smile)"] {
        let s = sentence(&lex, tree)?;
        let ty = typecheck(&s.term, &TypingEnv::new()).map_err(|e| e.to_string())?;
        if ty != SemType::dynamic_sentence() {
            return Err(format!("{tree} has type {ty}"));
        }
    }
    for rel in [Relation::Subordinating, Relation::Coordinating] {
        let (d1, d2) = two_step(rel)?;
        for d in [&DiscourseState::new(), &d1, &d2] {
            let ty = typecheck(&d.meaning.term, &TypingEnv::new()).map_err(|e| e.to_string())?;
            if ty != SemType::discourse() {
                return Err(format!("discourse has type {ty}"));
            }
        }
    }
    for text in [STEP_ONE, SUB_STEP_TWO, COOR_STEP_TWO] {
        let ty = typecheck(&parse(text), &TypingEnv::new()).map_err(|e| e.to_string())?;
        if ty != SemType::discourse() {
            return Err(format!("{text} has type {ty}"));
        }
    }
    Ok(())
}
