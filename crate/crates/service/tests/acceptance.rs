//! Acceptance checks. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use serde_json::{json, Value};
use xplain::api::{self, Limits, Solved};
use xplain::http::Service;
use xplain::session::Session;
use xplain_core::aggregate::{
    forces_by_enumeration, satisfaction_witnesses, violation_witnesses, witnesses_for, ConstraintAtom, Polarity,
    Witness,
};
use xplain_core::ast::{AggregateFunction, Atom, BodyItem, Comparison, Head, Literal, Program, Rule};
use xplain_core::contrast::{abduce, contrast_all, split_facts, ContrastiveQuery};
use xplain_core::error::{ContrastError, JustifyError};
use xplain_core::ground::{ground, GroundProgram};
use xplain_core::inconsistency::{
    minimal_correction_sets, minimal_hitting_sets, minimal_inconsistent_subsets, SoftPartition,
};
use xplain_core::interp::{AtomId, Interpretation};
use xplain_core::justify::{justify, justify_absence, verify_justification, Label, NodeKind, Sign};
use xplain_core::parser::{parse_atom_list, parse_program};
use xplain_core::stable::{
    brute_force_answer_sets, enumerate_answer_sets, flp_reduct, gl_reduct, is_answer_set, is_minimal_model, is_model,
};
use xplain_core::testing::{
    brute_force_abduce, brute_force_contrast, engine_answer_sets, least_model, prop_atom, random_constraint_atom,
    random_contrast_instance, random_ground_program, random_interpretation, ContrastInstance, GenConfig,
};

const BUG_LP: &str = include_str!("../data/bug.lp");
const BUG_SPACE: &str = include_str!("../data/bug.space");
const INCONSISTENT_LP: &str = include_str!("../data/inconsistent.lp");

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(elapsed: Duration, limit: Duration) -> Result<(), String> {
    ensure(elapsed < limit, || format!("took {:.2} s, limit {:.0} s", elapsed.as_secs_f64(), limit.as_secs_f64()))
}

// 1 ------------------------------------------------------------------------

fn bug_scenario() -> Outcome {
    let start = Instant::now();
    let p = parse_program(BUG_LP).map_err(|e| e.to_string())?;
    let g = ground(&p).map_err(|e| e.to_string())?;
    let sets = enumerate_answer_sets(&g, None).map_err(|e| e.to_string())?;
    let names: Vec<Vec<String>> = sets.iter().map(|i| g.visible_atoms(i).map(Atom::to_string).collect()).collect();
    ensure(names.len() == 1, || format!("expected one answer set, got {names:?}"))?;
    ensure(names[0].contains(&"class(beetle)".to_string()), || format!("{names:?}"))?;
    let facts: BTreeSet<String> = p.facts().map(Atom::to_string).collect();
    let expected_f: BTreeSet<String> = ["legs(6)", "eyes(2)", "wings(2)"].map(String::from).into();
    ensure(facts == expected_f, || format!("instance facts {facts:?}"))?;

    let space = api::load_space(BUG_SPACE).map_err(|e| e.to_string())?;
    let query = api::contrast_query("not-an-answer-set", "class(beetle)").map_err(|e| e.to_string())?;
    let r = api::contrast(&p, &space, &query, usize::MAX, Limits::default()).map_err(|e| e.to_string())?;
    ensure(r.explanations.len() == 1, || format!("expected one minimal change, got {:?}", r.explanations))?;
    let e = &r.explanations[0];
    ensure(e.removed == ["eyes(2)"], || format!("removed {:?}", e.removed))?;
    ensure(e.added == ["eyes(5)"], || format!("added {:?}", e.added))?;
    ensure(e.distance == 2, || format!("distance {}", e.distance))?;
    ensure(e.new_facts == ["legs(6)", "eyes(5)", "wings(2)"], || format!("F' {:?}", e.new_facts))?;
    let elapsed = start.elapsed();
    within(elapsed, Duration::from_secs(1))?;
    Ok(format!(
        "I = {{{}}}; removed {{eyes(2)}}, added {{eyes(5)}}, distance 2 (exact; {:.3} s < 1 s)",
        names[0].join(", "),
        elapsed.as_secs_f64()
    ))
}

// 2 ------------------------------------------------------------------------

fn witness(must_true: &[u32], must_false: &[u32], polarity: Polarity) -> Witness {
    Witness {
        must_true: must_true.iter().map(|&k| AtomId(k)).collect(),
        must_false: must_false.iter().map(|&k| AtomId(k)).collect(),
        polarity,
    }
}

fn aggregate_witnesses() -> Outcome {
    let start = Instant::now();
    let (a, b, c) = (AtomId(0), AtomId(1), AtomId(2));
    let sum = ConstraintAtom::new([(a, 2), (b, 1), (c, 1)], AggregateFunction::Sum, Comparison::Gt, 1);
    let abc: Interpretation = [a, b, c].into_iter().collect();
    let sat = satisfaction_witnesses(&sum, &abc).map_err(|e| e.to_string())?;
    let expected = vec![witness(&[0], &[], Polarity::Satisfaction), witness(&[1, 2], &[], Polarity::Satisfaction)];
    ensure(sat.witnesses == expected, || format!("satisfaction witnesses {:?}", sat.witnesses))?;
    let only_b: Interpretation = [b].into_iter().collect();
    let vio = violation_witnesses(&sum, &only_b).map_err(|e| e.to_string())?;
    let expected_v = vec![witness(&[], &[0, 2], Polarity::Violation)];
    ensure(vio.witnesses == expected_v, || format!("violation witnesses {:?}", vio.witnesses))?;
    for w in sat.witnesses.iter().chain(&vio.witnesses) {
        ensure(forces_by_enumeration(&sum, w), || format!("{w:?} does not force"))?;
        ensure(weakenings(w).iter().all(|v| !forces_by_enumeration(&sum, v)), || format!("{w:?} not minimal"))?;
    }
    let elapsed = start.elapsed();
    within(elapsed, Duration::from_secs(1))?;
    Ok(format!(
        "#sum{{2:a;1:b;1:c}} > 1: sat {{a}}, {{b,c}}; violation (∅, {{a,c}}) (exact; {:.3} s < 1 s)",
        elapsed.as_secs_f64()
    ))
}

fn weakenings(w: &Witness) -> Vec<Witness> {
    let mut out = Vec::new();
    for x in &w.must_true {
        let mut v = w.clone();
        v.must_true.remove(x);
        out.push(v);
    }
    for x in &w.must_false {
        let mut v = w.clone();
        v.must_false.remove(x);
        out.push(v);
    }
    out
}

// 3 and 4 --------------------------------------------------------------------

fn corpus() -> Vec<GroundProgram> {
    let mut rng = StdRng::seed_from_u64(1001);
    let config = GenConfig {
        atoms: 10,
        max_rules: 15,
        ..Default::default()
    };
    (0..500).map(|_| random_ground_program(&mut rng, &config)).collect()
}

fn solver_oracle(corpus: &[GroundProgram]) -> Outcome {
    let start = Instant::now();
    let mut mismatches = 0;
    let mut features = [0usize; 4];
    for p in corpus {
        let fast = enumerate_answer_sets(p, None).map_err(|e| e.to_string())?;
        let slow = brute_force_answer_sets(p).map_err(|e| e.to_string())?;
        mismatches += usize::from(fast != slow);
        features[0] += usize::from(p.rules.iter().any(|r| r.head.len() > 1));
        features[1] += usize::from(p.rules.iter().any(|r| r.has_negation()));
        features[2] += usize::from(p.has_aggregates());
        features[3] += usize::from(p.rules.iter().any(|r| r.is_constraint()));
    }
    let elapsed = start.elapsed();
    ensure(mismatches == 0, || format!("{mismatches} mismatches"))?;
    ensure(features.iter().all(|&n| n > 0), || format!("corpus lacks a feature: {features:?}"))?;
    within(elapsed, Duration::from_secs(60))?;
    Ok(format!(
        "{} programs (≤10 atoms, ≤15 rules; disjunctive {}, negation {}, aggregates {}, constraints {}), 0 mismatches ({:.2} s < 60 s)",
        corpus.len(),
        features[0],
        features[1],
        features[2],
        features[3],
        elapsed.as_secs_f64()
    ))
}

fn all_interpretations(n: usize) -> impl Iterator<Item = Interpretation> {
    (0u64..(1 << n)).map(move |mask| (0..n).filter(|k| mask & (1 << k) != 0).map(|k| AtomId(k as u32)).collect())
}

fn reduct_laws(corpus: &[GroundProgram]) -> Outcome {
    let mut checked_sets = 0;
    let mut gl_programs = 0;
    let mut gl_checks = 0;
    for (k, p) in corpus.iter().enumerate() {
        for i in enumerate_answer_sets(p, None).map_err(|e| e.to_string())? {
            checked_sets += 1;
            let reduct = flp_reduct(p, &i);
            let minimal = is_model(&p.rules, &i) && is_minimal_model(&reduct.rules, &i).map_err(|e| e.to_string())?;
            ensure(minimal, || format!("program {k}: answer set is not a minimal model of its FLP reduct"))?;
        }
        if p.has_aggregates() {
            continue;
        }
        gl_programs += 1;
        for i in all_interpretations(p.atoms.len()) {
            if !is_model(&p.rules, &i) {
                continue;
            }
            gl_checks += 1;
            let gl = is_minimal_model(&gl_reduct(p, &i).map_err(|e| e.to_string())?.rules, &i)
                .map_err(|e| e.to_string())?;
            ensure(gl == is_answer_set(p, &i), || format!("program {k}: GL and FLP disagree"))?;
        }
    }
    let mut rng = StdRng::seed_from_u64(1002);
    for k in 0..500 {
        let p = random_ground_program(&mut rng, &GenConfig::positive(10, 15));
        let sets = enumerate_answer_sets(&p, None).map_err(|e| e.to_string())?;
        ensure(sets == vec![least_model(&p)], || format!("positive program {k}: {sets:?}"))?;
    }
    Ok(format!(
        "{checked_sets} answer sets minimal for FLP reduct; GL = FLP on {gl_checks} models of {gl_programs} aggregate-free programs; 500 positive programs = least fixpoint (0 violations)"
    ))
}

// 5 ------------------------------------------------------------------------

fn justification_soundness() -> Outcome {
    let mut rng = StdRng::seed_from_u64(1005);
    let config = GenConfig {
        atoms: 8,
        max_rules: 12,
        ..Default::default()
    };
    let (mut produced, mut accepted, mut in_q, mut out_q, mut no_acyclic) = (0, 0, 0, 0, 0);
    let (mut mutated, mut rejected) = (0usize, 0usize);
    while produced < 500 {
        let p = random_ground_program(&mut rng, &config);
        let sets = enumerate_answer_sets(&p, None).map_err(|e| e.to_string())?;
        let Some(i) = sets.choose(&mut rng) else { continue };
        if p.atoms.is_empty() {
            continue;
        }
        // Alternate membership and absence queries where possible.
        let wanted_in = produced % 2 == 0;
        let pool: Vec<AtomId> = p.atoms.ids().filter(|&a| i.contains(a) == wanted_in).collect();
        let Some(&a) = pool.choose(&mut rng) else { continue };
        let g = if wanted_in { justify(&p, i, a) } else { justify_absence(&p, i, a) };
        let g = match g {
            Ok(g) => g,
            Err(JustifyError::NoAcyclicSupport(_)) => {
                no_acyclic += 1;
                continue;
            }
            Err(e) => return Err(e.to_string()),
        };
        produced += 1;
        if wanted_in {
            in_q += 1;
        } else {
            out_q += 1;
        }
        accepted += usize::from(verify_justification(&p, i, &g));
        for k in 0..g.edges.len() {
            let mut m = g.clone();
            m.edges[k].label = match m.edges[k].label {
                Label::Pos => Label::Neg,
                Label::Neg => Label::Pos,
            };
            mutated += 1;
            rejected += usize::from(!verify_justification(&p, i, &m));
            if matches!(g.nodes[g.edges[k].from].kind, NodeKind::Atom(s) if s.sign == Sign::Out) {
                let mut m = g.clone();
                m.edges.remove(k);
                mutated += 1;
                rejected += usize::from(!verify_justification(&p, i, &m));
            }
        }
    }
    ensure(accepted == produced, || format!("{accepted}/{produced} graphs accepted"))?;
    let rate = rejected as f64 / mutated as f64;
    ensure(rate >= 0.99, || format!("mutation rejection {rejected}/{mutated} = {:.4} < 0.99", rate))?;
    Ok(format!(
        "{accepted}/{produced} graphs accepted ({in_q} membership, {out_q} absence); mutations rejected {rejected}/{mutated} = {:.2}% ≥ 99%; {no_acyclic} queries without acyclic support skipped",
        rate * 100.0
    ))
}

// 6 ------------------------------------------------------------------------

fn witness_soundness() -> Outcome {
    let mut rng = StdRng::seed_from_u64(1006);
    let (mut atoms, mut witnesses, mut violations) = (0, 0, 0);
    for _ in 0..1500 {
        let c = random_constraint_atom(&mut rng, 8);
        let i = random_interpretation(&mut rng, 8);
        let polarity = if c.eval(&i) { Polarity::Satisfaction } else { Polarity::Violation };
        atoms += 1;
        for w in witnesses_for(&c, &i, usize::MAX).witnesses {
            witnesses += 1;
            let sound = w.polarity == polarity && forces_by_enumeration(&c, &w);
            let minimal = weakenings(&w).iter().all(|v| !forces_by_enumeration(&c, v));
            violations += usize::from(!sound || !minimal);
        }
    }
    ensure(violations == 0, || format!("{violations} violations"))?;
    Ok(format!("{atoms} constraint atoms (|D| ≤ 8), {witnesses} witnesses, 0 violations"))
}

// 7 ------------------------------------------------------------------------

fn random_query(rng: &mut StdRng, inst: &ContrastInstance) -> ContrastiveQuery {
    match rng.gen_range(0..3) {
        0 => match engine_answer_sets(&inst.program).choose(rng) {
            Some(s) => ContrastiveQuery::NotAnAnswerSet(s.iter().cloned().collect()),
            None => ContrastiveQuery::FoilBecomesBrave(prop_atom(0)),
        },
        1 => ContrastiveQuery::FoilBecomesBrave(prop_atom(rng.gen_range(0..4))),
        _ => ContrastiveQuery::FactNoLongerBrave(prop_atom(rng.gen_range(0..4))),
    }
}

fn soft_instance(rng: &mut StdRng) -> SoftPartition {
    let soft_n = rng.gen_range(1..=10);
    let soft: Vec<Atom> = (0..soft_n).map(|i| Atom::prop(format!("s{i}"))).collect();
    let pool: Vec<Atom> = soft.iter().cloned().chain((0..3).map(|i| Atom::prop(format!("d{i}")))).collect();
    let mut hard = Program::default();
    let body = |rng: &mut StdRng, len: usize| -> Vec<BodyItem> {
        pool.choose_multiple(rng, len).map(|a| BodyItem::Literal(Literal::pos(a.clone()))).collect()
    };
    for _ in 0..rng.gen_range(1..=4) {
        let len = rng.gen_range(1..=2);
        let head = Head::Disjunction(vec![Atom::prop(format!("d{}", rng.gen_range(0..3)))]);
        hard.push(Rule { head, body: body(rng, len) });
    }
    for _ in 0..rng.gen_range(1..=4) {
        let len = rng.gen_range(1..=3);
        hard.push(Rule {
            head: Head::Disjunction(Vec::new()),
            body: body(rng, len),
        });
    }
    SoftPartition::new(hard, soft)
}

/// Minimal inconsistent subsets and minimal correction sets by checking
/// every subset of the soft facts.
fn brute_force_mus_mcs(sp: &SoftPartition) -> (BTreeSet<BTreeSet<Atom>>, BTreeSet<BTreeSet<Atom>>) {
    let n = sp.soft.len();
    let consistent: Vec<bool> = (0u32..(1 << n))
        .map(|m| {
            let s: BTreeSet<usize> = (0..n).filter(|k| m & (1 << k) != 0).collect();
            !engine_answer_sets(&sp.program_with(&s)).is_empty()
        })
        .collect();
    let full = (1u32 << n) - 1;
    let minimal = |keep: &dyn Fn(u32) -> bool| -> BTreeSet<BTreeSet<Atom>> {
        (0u32..(1 << n))
            .filter(|&m| keep(m) && !(0u32..(1 << n)).any(|o| o != m && o & m == o && keep(o)))
            .map(|m| (0..n).filter(|k| m & (1 << k) != 0).map(|k| sp.soft[k].clone()).collect())
            .collect()
    };
    (minimal(&|m| !consistent[m as usize]), minimal(&|m| consistent[(full & !m) as usize]))
}

fn to_sets(v: Vec<Vec<Atom>>) -> BTreeSet<BTreeSet<Atom>> {
    v.into_iter().map(|s| s.into_iter().collect()).collect()
}

fn check_mus_mcs(sp: &SoftPartition) -> Result<(), String> {
    let mus = to_sets(minimal_inconsistent_subsets(sp, usize::MAX).map_err(|e| e.to_string())?);
    let mcs = to_sets(minimal_correction_sets(sp, usize::MAX).map_err(|e| e.to_string())?);
    let (bf_mus, bf_mcs) = brute_force_mus_mcs(sp);
    ensure(mus == bf_mus && mcs == bf_mcs, || format!("MUS/MCS differ from enumeration on {:?}", sp.soft))?;
    if mus.is_empty() {
        return ensure(mcs == BTreeSet::from([BTreeSet::new()]), || "consistent instance with nonempty MCS".into());
    }
    let mus_v: Vec<_> = mus.iter().cloned().collect();
    let mcs_v: Vec<_> = mcs.iter().cloned().collect();
    let dual = minimal_hitting_sets(&mus_v).into_iter().collect::<BTreeSet<_>>() == mcs
        && minimal_hitting_sets(&mcs_v).into_iter().collect::<BTreeSet<_>>() == mus;
    ensure(dual, || format!("hitting-set duality fails on {:?}", sp.soft))
}

fn contrast_exactness() -> Outcome {
    let mut rng = StdRng::seed_from_u64(1007);
    let mut contrasts = 0;
    while contrasts < 200 {
        let size = rng.gen_range(1..=8);
        let inst = random_contrast_instance(&mut rng, size);
        let q = random_query(&mut rng, &inst);
        let oracle = brute_force_contrast(&inst.program, &q, &inst.space).map_err(|e| e.to_string())?;
        let got = match contrast_all(&inst.program, &q, &inst.space, usize::MAX) {
            Err(ContrastError::BaselineViolated(_)) => continue,
            other => other.map_err(|e| e.to_string())?,
        };
        contrasts += 1;
        let index = |a: &Atom| inst.space.index_of(a).expect("candidate");
        let bases: BTreeSet<BTreeSet<usize>> = got.iter().map(|e| e.new_facts.iter().map(index).collect()).collect();
        match oracle {
            None => ensure(got.is_empty(), || format!("instance {contrasts}: found a contrast the oracle lacks"))?,
            Some((d, expected)) => {
                ensure(got.iter().all(|e| e.distance == d), || format!("instance {contrasts}: distance differs"))?;
                ensure(bases == expected.into_iter().collect(), || format!("instance {contrasts}: bases differ"))?;
            }
        }
    }
    let mut abductions = 0;
    for _ in 0..200 {
        let size = rng.gen_range(1..=8);
        let inst = random_contrast_instance(&mut rng, size);
        let (fixed, _) = split_facts(&inst.program, &inst.space);
        let obs = prop_atom(rng.gen_range(0..4));
        let got: BTreeSet<BTreeSet<Atom>> = abduce(&fixed, &obs, &inst.space.candidates)
            .map_err(|e| e.to_string())?
            .into_iter()
            .map(|d| d.into_iter().collect())
            .collect();
        let expected: BTreeSet<BTreeSet<Atom>> =
            brute_force_abduce(&fixed, &obs, &inst.space.candidates).into_iter().collect();
        ensure(got == expected, || format!("abduction {abductions} differs"))?;
        abductions += 1;
    }
    let mut soft_instances = 0;
    for _ in 0..100 {
        check_mus_mcs(&soft_instance(&mut rng))?;
        soft_instances += 1;
    }
    // Non-monotone hard part: adding r to {a} restores consistency.
    let hard = parse_program("p :- a. :- p, not q. q :- r.").map_err(|e| e.to_string())?;
    let crafted = SoftPartition::new(hard, parse_atom_list("a, s, t").map_err(|e| e.to_string())?);
    check_mus_mcs(&crafted)?;
    let file = SoftPartition::from_markers(&parse_program(INCONSISTENT_LP).map_err(|e| e.to_string())?)
        .map_err(|e| e.to_string())?;
    check_mus_mcs(&file)?;
    Ok(format!(
        "{contrasts} contrasts and {abductions} abductions (≤ 8 candidates) equal exhaustive search; MUS/MCS exact and dual on {} instances (≤ 10 soft) incl. a non-monotone one",
        soft_instances + 2
    ))
}

// 8 ------------------------------------------------------------------------

fn cli(args: &[&str], input: &str) -> (i32, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("xplain").chain(args.iter().copied());
    let code = xplain::cli::run(argv, input.as_bytes(), &mut out, &mut err);
    (code, String::from_utf8(out).expect("utf-8"))
}

fn interface_determinism() -> Outcome {
    let dir = std::env::temp_dir().join(format!("xplain-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).map_err(|e| e.to_string())?;
    let bug = dir.join("bug.lp");
    let space = dir.join("bug.space");
    let inconsistent = dir.join("inconsistent.lp");
    std::fs::write(&bug, BUG_LP).map_err(|e| e.to_string())?;
    std::fs::write(&space, BUG_SPACE).map_err(|e| e.to_string())?;
    std::fs::write(&inconsistent, INCONSISTENT_LP).map_err(|e| e.to_string())?;
    let (bug, space, inconsistent) = (bug.to_str().unwrap(), space.to_str().unwrap(), inconsistent.to_str().unwrap());

    let service = Service::new(Limits::default());
    let create = |program: &str| -> Result<String, String> {
        let r = service.handle("POST", "/sessions", &json!({ "program": program, "space": BUG_SPACE }).to_string());
        let v: Value = serde_json::from_str(&r.body).map_err(|e| e.to_string())?;
        v["id"].as_str().map(String::from).ok_or(r.body)
    };
    let bug_id = create(BUG_LP)?;
    let inc_id = create(INCONSISTENT_LP)?;
    let http = |id: &str, method: &str, path: &str, body: Value| -> String {
        let body = if body.is_null() { String::new() } else { body.to_string() };
        format!("{}\n", service.handle(method, &format!("/sessions/{id}{path}"), &body).body)
    };

    let cases: Vec<(&str, String, String, String)> = vec![
        (
            "models",
            cli(&["solve", bug, "--json"], "").1,
            "json on\nmodels\n".into(),
            http(&bug_id, "GET", "/models", Value::Null),
        ),
        (
            "why",
            cli(&["why", bug, "--atom", "class(beetle)", "--json"], "").1,
            "json on\nwhy class(beetle)\n".into(),
            http(&bug_id, "POST", "/explain", json!({"atom": "class(beetle)", "mode": "in"})),
        ),
        (
            "whynot",
            cli(&["whynot", bug, "--atom", "class(fly)", "--alternatives", "2", "--json"], "").1,
            "json on\nwhynot class(fly) 2\n".into(),
            http(&bug_id, "POST", "/explain", json!({"atom": "class(fly)", "mode": "out", "alternatives": 2})),
        ),
        (
            "contrast",
            cli(
                &["contrast", bug, "--space", space, "--mode", "not-an-answer-set", "--target", "class(beetle)", "--json"],
                "",
            )
            .1,
            "json on\ncontrast not-an-answer-set class(beetle)\n".into(),
            http(&bug_id, "POST", "/contrast", json!({"mode": "not-an-answer-set", "target": ["class(beetle)"]})),
        ),
        (
            "abduce",
            cli(&["abduce", bug, "--obs", "class(fly)", "--abducibles", "eyes(5),legs(6)", "--json"], "").1,
            "json on\nabduce class(fly) eyes(5) legs(6)\n".into(),
            http(
                &bug_id,
                "POST",
                "/abduce",
                json!({"observation": "class(fly)", "abducibles": ["eyes(5)", "legs(6)"]}),
            ),
        ),
        (
            "mus",
            cli(&["mus", inconsistent, "--json"], "").1,
            "json on\nmus\n".into(),
            http(&inc_id, "POST", "/mus", Value::Null),
        ),
    ];
    for (name, cli_out, script, http_out) in &cases {
        let file = if *name == "mus" { inconsistent } else { bug };
        let repl_out = cli(&["repl", file, "--space", space], script).1;
        ensure(cli_out == &repl_out, || format!("{name}: CLI and REPL differ:\n{cli_out}\n{repl_out}"))?;
        ensure(cli_out == http_out, || format!("{name}: CLI and HTTP differ:\n{cli_out}\n{http_out}"))?;
    }

    // Replay: a scripted dialogue, then the same history on a fresh session.
    let mut live = Session::open(parse_program(BUG_LP).map_err(|e| e.to_string())?, Limits::default())
        .map_err(|e| e.to_string())?;
    let script = [
        format!("space {space}"),
        "models".into(),
        "assume eyes(5).".into(),
        "why class(fly)".into(),
        "retract eyes(2).".into(),
        "contrast fact-no-longer-brave class(fly)".into(),
        "undo".into(),
        "apply assume wings(4). retract legs(6).".into(),
        "whynot class(beetle)".into(),
        "undo".into(),
    ];
    for line in &script {
        live.execute(line).map_err(|e| format!("`{line}`: {e}"))?;
    }
    let mut replayed = Session::replay(live.base().clone(), Limits::default(), live.history())
        .map_err(|e| e.to_string())?;
    ensure(replayed.state() == live.state(), || "replayed state differs".into())?;
    ensure(replayed.program() == live.program(), || "replayed program differs".into())?;
    let m1 = api::to_json(&replayed.models(None).map_err(|e| e.to_string())?);
    let m2 = api::to_json(&live.models(None).map_err(|e| e.to_string())?);
    ensure(m1 == m2, || "replayed models differ".into())?;
    let check = |s: &mut Session| s.execute("whynot class(fly)").map(|r| r.render(true)).map_err(|e| e.to_string());
    ensure(check(&mut replayed)? == check(&mut live)?, || "replayed explanation differs".into())?;

    // The session answers reflect the overlay exactly like a fresh solve.
    let mut fresh = Solved::new(&live.program(), Limits::default()).map_err(|e| e.to_string())?;
    ensure(api::to_json(&api::models(&mut fresh, None).map_err(|e| e.to_string())?) == m2, || {
        "overlay models differ from a fresh solve".into()
    })?;
    let _ = std::fs::remove_dir_all(&dir);
    Ok(format!(
        "{} query kinds byte-identical across CLI, REPL and HTTP; {}-command history replays to identical state, models and graphs",
        cases.len(),
        script.len()
    ))
}

fn main() {
    let corpus = corpus();
    type Criterion<'a> = (&'static str, Box<dyn FnOnce() -> Outcome + 'a>);
    let criteria: Vec<Criterion> = vec![
        ("bug scenario end-to-end", Box::new(bug_scenario)),
        ("aggregate witnesses", Box::new(aggregate_witnesses)),
        ("solver oracle equivalence", Box::new(|| solver_oracle(&corpus))),
        ("reduct laws", Box::new(|| reduct_laws(&corpus))),
        ("justification soundness", Box::new(justification_soundness)),
        ("witness soundness/minimality", Box::new(witness_soundness)),
        ("contrast/abduce/MUS-MCS exactness", Box::new(contrast_exactness)),
        ("interface determinism", Box::new(interface_determinism)),
    ];
    let mut failed = 0;
    for (k, (name, run)) in criteria.into_iter().enumerate() {
        let outcome = std::panic::catch_unwind(std::panic::AssertUnwindSafe(run))
            .unwrap_or_else(|_| Err("panicked".to_string()));
        match outcome {
            Ok(detail) => println!("PASS [{}] {name}: {detail}", k + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL [{}] {name}: {why}", k + 1);
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
