//! Property bodies shared by the property suite and the acceptance run.
//! Each takes a seed and fails with a message describing the case.

use discsem::composer::{build_sentence, AppTree, DiscourseState};
use discsem::formula::conjuncts;
use discsem::graph::{Relation, SelStrategy};
use discsem::lexicon::{modifier_entry, verb_from_template, ThematicRole, VerbTemplate};
use discsem::normalize::{normalize_with_fuel, step_bound};
use discsem::{
    alpha_equal, beta_normalize, drop_entails, parse_term, render, substitute, typecheck, Lexicon,
    Mode, SemType, Style, Term, TypingEnv, Variant,
};
use proptest::test_runner::TestCaseError;
use rand::seq::SliceRandom;
use rand::Rng;

use super::*;

pub type Outcome = Result<(), TestCaseError>;

fn check(ok: bool, msg: impl FnOnce() -> String) -> Outcome {
    if ok {
        Ok(())
    } else {
        Err(TestCaseError::fail(msg()))
    }
}

pub fn subject_reduction(seed: u64) -> Outcome {
    let (t, ty) = closed_term(seed, 8);
    let env = TypingEnv::new();
    let before = typecheck(&t, &env).map_err(|e| TestCaseError::fail(format!("generator: {e}")))?;
    check(before == ty, || {
        format!("generator produced {before}, wanted {ty}")
    })?;
    let after = typecheck(&beta_normalize(&t), &env);
    check(after.as_ref() == Ok(&ty), || {
        format!("{t:?}: {before} became {after:?}")
    })
}

pub fn termination(seed: u64) -> Outcome {
    let (t, _) = closed_term(seed, 8);
    let bound = step_bound(&t);
    let r = normalize_with_fuel(&t, bound);
    check(r.is_ok(), || {
        format!("{t:?} needed more than {bound} steps")
    })
}

pub fn normal_forms_respect_alpha(seed: u64) -> Outcome {
    let (t, _) = closed_term(seed, 6);
    // The oracle's renaming applied to a closed term is a pure α-variant.
    let variant = substitute_oracle(&t, "__unused", &Term::var("__unused"));
    check(alpha_equal(&t, &variant), || {
        "renamed variant not α-equal".into()
    })?;
    check(
        alpha_equal(&beta_normalize(&t), &beta_normalize(&variant)),
        || format!("normal forms of α-variants differ for {t:?}"),
    )
}

pub fn substitution_matches_oracle(seed: u64) -> Outcome {
    let (t, x, s) = substitution_case(seed);
    let got = substitute(&t, &x, &s);
    let want = substitute_oracle(&t, &x, &s);
    check(alpha_equal(&got, &want), || {
        format!("t = {t:?}\ns = {s:?}\ngot {got:?}\nwant {want:?}")
    })
}

pub fn render_round_trip(seed: u64) -> Outcome {
    let (t, _) = closed_term(seed, 6);
    for style in [Style::Unicode, Style::Ascii] {
        let text = render(&t, style);
        let back = parse_term(&text).map_err(|e| TestCaseError::fail(format!("{text}: {e}")))?;
        check(alpha_equal(&back, &t), || {
            format!("{style:?}: {text} read back as {back:?}, from {t:?}")
        })?;
    }
    Ok(())
}

pub fn conjunct_list_ignores_association(seed: u64) -> Outcome {
    let mut r = rng(seed);
    let n = r.gen_range(1..8);
    let atoms: Vec<Term> = (0..n)
        .map(|i| {
            Term::app(
                Term::constant(
                    format!("P{}", i % 3),
                    SemType::arrow(SemType::IND, SemType::PROP),
                ),
                Term::constant("john", SemType::IND),
            )
        })
        .collect();
    fn nest(r: &mut impl Rng, xs: &[Term]) -> Term {
        if xs.len() == 1 {
            return xs[0].clone();
        }
        let k = r.gen_range(1..xs.len());
        Term::and(nest(r, &xs[..k]), nest(r, &xs[k..]))
    }
    let t = nest(&mut r, &atoms);
    let c = conjuncts(&t, &TypingEnv::new()).map_err(|e| TestCaseError::fail(e.to_string()))?;
    check(c.conjuncts == atoms, || {
        format!("{t:?} flattened to {:?}", c.conjuncts)
    })
}

pub fn frontier_matches_oracle(seed: u64) -> Outcome {
    let mut r = rng(seed);
    let g = random_graph(seed, r.gen_range(1..12));
    check(frontier_set(&g) == frontier_oracle(&g), || {
        format!(
            "log {:?}: frontier {:?}, oracle {:?}",
            g.attachments(),
            frontier_set(&g),
            frontier_oracle(&g)
        )
    })
}

/// No cycles through parent links, at most one subordinating parent per
/// node, and coordination blocks its target.
pub fn attachment_structure(seed: u64) -> Outcome {
    let mut r = rng(seed);
    let mut g = random_graph(seed, r.gen_range(1..10));
    let mut children = std::collections::BTreeSet::new();
    for (_, c) in g.sub_edges() {
        check(children.insert(*c), || format!("{c} has two parents"))?;
    }
    for n in g.nodes() {
        let mut seen = std::collections::BTreeSet::new();
        let mut cur = Some(n.id);
        while let Some(x) = cur {
            check(seen.insert(x), || format!("cycle through {x}"))?;
            cur = g.parent(x);
        }
    }
    let frontier = g.frontier_labels().unwrap();
    let target = frontier.choose(&mut r).unwrap().clone();
    let a = g
        .attach("new", Relation::Coordinating, &target, Some("newc"), None)
        .map_err(|e| TestCaseError::fail(e.to_string()))?;
    let f = g.right_frontier().unwrap();
    let t = g.lookup(&target).unwrap();
    check(!f.contains(&t), || {
        format!("{target} still accessible after coordination")
    })?;
    check(f.contains(&a.node) && f.contains(&a.cover.unwrap()), || {
        "new node or cover missing".into()
    })
}

pub fn del_idempotent_subsequence(seed: u64) -> Outcome {
    let mut r = rng(seed);
    let g = random_graph(seed, r.gen_range(1..10));
    let labels: Vec<String> = g.nodes().iter().map(|n| n.label.clone()).collect();
    let ctx: Vec<String> = (0..r.gen_range(0..8))
        .map(|_| labels.choose(&mut r).unwrap().clone())
        .collect();
    let once = g.eval_del(&ctx).unwrap();
    let twice = g.eval_del(&once).unwrap();
    check(once == twice, || format!("del not idempotent on {ctx:?}"))?;
    let mut it = ctx.iter();
    check(once.iter().all(|x| it.any(|y| y == x)), || {
        format!("{once:?} not a subsequence of {ctx:?}")
    })?;
    if let Ok(sel) = g.eval_sel(&ctx, &SelStrategy::MostRecent) {
        let frontier = frontier_set(&g);
        check(
            ctx.contains(&sel.name) && frontier.contains(&sel.node.label),
            || format!("selected {} outside frontier ∩ ctx", sel.name),
        )?;
    }
    Ok(())
}

const MODIFIERS: [(&str, &str, Option<&str>); 5] = [
    ("slowly", "Slow", None),
    ("deliberately", "Deliberate", None),
    ("in_the_bathroom", "In", Some("bathroom")),
    ("at_midnight", "Time", Some("midnight")),
    ("with_a_knife", "Instr", Some("knife")),
];

fn closed_sentence(verb: &Term, roles: usize, mods: &[usize], variant: Variant) -> Term {
    let fillers = (0..roles).map(|i| Term::constant(format!("f{i}"), SemType::IND));
    let mut t = Term::apply(verb.clone(), fillers);
    for &m in mods {
        let (name, pred, value) = MODIFIERS[m];
        t = Term::app(modifier_entry(name, pred, value, variant).term, t);
    }
    let lex = Lexicon::builtin(Mode::Event);
    let eos = match variant {
        Variant::Static => "EOS_static",
        Variant::Dynamic => "EOS",
    };
    beta_normalize(&Term::app(lex.lookup(eos).unwrap().term.clone(), t))
}

/// Up to four modifiers on a template verb: every order gives the same
/// conjunct multiset, and dropping any one modifier gives a formula the
/// full one drop-entails.
pub fn modifier_permutation_and_drop(seed: u64) -> Outcome {
    let mut r = rng(seed);
    let mut roles = vec![ThematicRole::Agent];
    for role in ThematicRole::ALL {
        if role != ThematicRole::Agent && r.gen_bool(0.3) {
            roles.push(role);
        }
    }
    roles.shuffle(&mut r);
    let tpl = VerbTemplate::new(
        *["butter", "eat", "sing"].choose(&mut r).unwrap(),
        roles.clone(),
    );
    let variant = *[Variant::Static, Variant::Dynamic].choose(&mut r).unwrap();
    let verb = verb_from_template(&tpl, variant).map_err(|e| TestCaseError::fail(e.to_string()))?;

    let k = r.gen_range(0..=4);
    let mut mods: Vec<usize> = (0..MODIFIERS.len()).collect();
    mods.shuffle(&mut r);
    mods.truncate(k);
    let mut other = mods.clone();
    other.shuffle(&mut r);

    let full = closed_sentence(&verb.term, roles.len(), &mods, variant);
    let permuted = closed_sentence(&verb.term, roles.len(), &other, variant);
    let (n1, c1) = open_formula(&full);
    let (n2, c2) = open_formula(&permuted);
    check(n1 == 1 && n2 == 1, || {
        format!("expected one event binder: {full:?}")
    })?;
    check(same_multiset(&c1, &c2), || {
        format!("orders {mods:?} and {other:?} differ")
    })?;
    check(
        c1.len() == 1 + roles.len() + k + usize::from(variant == Variant::Dynamic),
        || format!("wrong conjunct count {}", c1.len()),
    )?;

    for i in 0..mods.len() {
        let mut fewer = mods.clone();
        fewer.remove(i);
        let reduced = closed_sentence(&verb.term, roles.len(), &fewer, variant);
        let entailed =
            drop_entails(&full, &reduced).map_err(|e| TestCaseError::fail(e.to_string()))?;
        check(entailed, || {
            format!("dropping modifier {} not entailed", MODIFIERS[mods[i]].0)
        })?;
        let (_, cr) = open_formula(&reduced);
        let mut rest = c1.clone();
        let contained = cr
            .iter()
            .all(|x| match rest.iter().position(|y| alpha_equal(x, y)) {
                Some(j) => {
                    rest.swap_remove(j);
                    true
                }
                None => false,
            });
        check(contained && rest.len() == 1, || {
            "reduced conjuncts are not a sub-multiset".into()
        })?;
    }
    Ok(())
}

pub const EVENT_TREES: [&str; 6] = [
    "(in_the_plaza ((kiss Mary) John))",
    "(she smile)",
    "((kiss John) Mary)",
    "(smile John)",
    "(in_the_plaza (she smile))",
    "(in_the_plaza (smile Mary))",
];

/// Random event-mode discourses: sentence and discourse types, event
/// accounting, one new binder per subordinating step, and the allowed
/// constant vocabulary.
pub fn discourse_discipline(seed: u64) -> Outcome {
    let mut r = rng(seed);
    let lex = Lexicon::builtin(Mode::Event);
    let mut state = DiscourseState::new();
    let mut advanced_coor = 0;
    let n = r.gen_range(1..7);
    let allowed: std::collections::BTreeSet<&str> = [
        "john", "mary", "plaza", "Kiss", "Smile", "Ag", "Pat", "Loc", "sel_she", "Rel2", "Rel3",
        "Sel", "Del", "A", "B", "nil",
    ]
    .into();
    for i in 0..n {
        let tree = AppTree::parse(EVENT_TREES.choose(&mut r).unwrap()).unwrap();
        let s = build_sentence(&lex, &tree).map_err(|e| TestCaseError::fail(e.to_string()))?;
        check(s.ty == SemType::dynamic_sentence(), || {
            format!("sentence type {}", s.ty)
        })?;
        let rel = if r.gen_bool(0.5) {
            Relation::Subordinating
        } else {
            Relation::Coordinating
        };
        let target = if i == 0 {
            None
        } else {
            let f = state.graph.frontier_labels().unwrap();
            Some(f.choose(&mut r).unwrap().clone())
        };
        let before = open_formula(&state.finalize()).0;
        let next = state
            .compose(rel, &s, target.as_deref(), None, None)
            .map_err(|e| TestCaseError::fail(e.to_string()))?;
        let ty = typecheck(&next.meaning.term, &TypingEnv::new())
            .map_err(|e| TestCaseError::fail(e.to_string()))?;
        check(ty == SemType::discourse(), || {
            format!("discourse type {ty}")
        })?;
        let after = open_formula(&next.finalize()).0;
        if rel == Relation::Coordinating && i > 0 {
            advanced_coor += 1;
            check(after == before + 2, || {
                format!("coordination added {} binders", after - before)
            })?;
        } else {
            check(after == before + 1, || {
                format!("step added {} binders", after - before)
            })?;
        }
        state = next;
    }
    let fin = state.finalize();
    check(
        typecheck(&fin, &TypingEnv::new()) == Ok(SemType::PROP),
        || "finalized term is not a proposition".into(),
    )?;
    check(open_formula(&fin).0 == n + advanced_coor, || {
        "event accounting".into()
    })?;
    check(state.meaning.events.len() == n + advanced_coor, || {
        "event list length".into()
    })?;
    for c in fin.constants().keys() {
        check(allowed.contains(c.as_str()), || {
            format!("unexpected constant {c}")
        })?;
    }
    Ok(())
}

/// The property suites of the acceptance run, by name.
pub type Suite = fn(u64) -> Outcome;

pub const SUITES: [(&str, Suite); 11] = [
    ("subject reduction", subject_reduction),
    ("termination within step bound", termination),
    ("normal forms respect alpha", normal_forms_respect_alpha),
    (
        "substitution vs fresh-rename oracle",
        substitution_matches_oracle,
    ),
    ("parse/render round trip", render_round_trip),
    (
        "conjunct list ignores association",
        conjunct_list_ignores_association,
    ),
    ("frontier vs path oracle", frontier_matches_oracle),
    ("attachment structure", attachment_structure),
    (
        "eval_del idempotence and subsequence",
        del_idempotent_subsequence,
    ),
    (
        "modifier permutation and drop",
        modifier_permutation_and_drop,
    ),
    ("discourse type discipline", discourse_discipline),
];
