//! The acceptance suite. Prints one PASS/FAIL line per criterion and fails
//! if any criterion fails.

mod common;

use std::time::{Duration, Instant};

use common::NameEqOracle;
use hopsi::cli::{parse_source, Program};
use hopsi::instance::{Lang, Signature};
use hopsi::instances::hopi::gen::{well_typed_candidate, HopiAssumptionGen, Sorting};
use hopsi::instances::hopi::{HopiAssertion, HopiProcess, HopiSig, HopiTerm, HopiTyping};
use hopsi::instances::hopi2::gen::{omega, well_typed, Channels, Hopi2AssumptionGen};
use hopsi::instances::hopi2::{
    embed, infer_level, termination_probe, Hopi2Assertion, Hopi2Sig, Hopi2Typing, LevelError, Termination,
};
use hopsi::instances::rho::correspond::correspondence_check;
use hopsi::instances::rho::encode::encode_typed;
use hopsi::instances::rho::gen::{typed, typed_preamble, untyped, RhoAssumptionGen};
use hopsi::instances::rho::{encode, encode_name, name_eq, processes_up_to, RhoName, RhoSig, RhoTypedSig, RhoTyping};
use hopsi::nominal::{Name, Nominal};
use hopsi::semantics::{ambient_of, eval_steps, explore_all, reduce_steps, run_trace};
use hopsi::syntax::{subst_process, Process};
use hopsi::typing::harness::mutants::{ExactOutput, ForgetfulCompose, InertSubst};
use hopsi::typing::harness::{run_assumptions, AssumptionGen, AssumptionReport};
use hopsi::typing::{Checker, RunPolicy, TypeEnv};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SR_PROCESSES: usize = 200;
const SR_SAMPLE: usize = 400;
const SR_MAX_SIZE: usize = 8;
const SR_DEPTH: usize = 5;
const SR_TIME_LIMIT: Duration = Duration::from_secs(300);
const SAFETY_PROCESSES: usize = 100;
const TERMINATION_PROCESSES: usize = 50;
const TERMINATION_BUDGET: usize = 10_000;
const CORRESPONDENCE_PROCESSES: usize = 50;
const CORRESPONDENCE_SAMPLE: usize = 100;
const CORRESPONDENCE_SIZE: usize = 6;
const CORRESPONDENCE_DEPTH: usize = 3;
const NAME_EQ_SIZE: usize = 4;
const NAME_EQ_UNIVERSE: usize = 8;
const ASSUMPTION_TRIALS: usize = 1000;
const ASSUMPTION_SIZE: usize = 6;
const LEMMA_CASES: usize = 500;

/// Cases and failures of one property, with the first failure kept.
#[derive(Default)]
struct Tally {
    cases: usize,
    failures: usize,
    first: Option<String>,
}

impl Tally {
    fn record(&mut self, ok: bool, why: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.failures += 1;
            if self.first.is_none() {
                self.first = Some(why());
            }
        }
    }

    fn passed(&self, min_cases: usize) -> bool {
        self.failures == 0 && self.cases >= min_cases
    }

    fn summary(&self) -> String {
        match &self.first {
            None => format!("{} cases, 0 failures", self.cases),
            Some(f) => format!("{} cases, {} failures, first: {f}", self.cases, self.failures),
        }
    }
}

/// A well-typed process with its context.
struct Typed<L: Lang> {
    env: TypeEnv<L::Type>,
    psi: L::Assertion,
    p: Process<L>,
}

/// Frame monotonicity on `→` steps and frame invariance on `≫` steps out of
/// `state`.
fn frame_lemmas<L: Lang>(sig: &dyn Signature<L>, psi: &L::Assertion, state: &Process<L>, mono: &mut Tally, inv: &mut Tally) {
    for s in reduce_steps(sig, psi, state) {
        mono.record(sig.specializes(&s.frame_before, &s.frame_after), || {
            format!("{state} -{}-> {}: frame {} not below {}", s.rule, s.after, s.frame_before, s.frame_after)
        });
    }
    for s in eval_steps(sig, psi, state) {
        inv.record(s.frame_before == s.frame_after, || {
            format!("{state} >> {}: frame {} became {}", s.after, s.frame_before, s.frame_after)
        });
    }
}

/// Weakening by a fresh name, then strengthening to the names in use.
fn weakening<L: Lang>(
    ck: &Checker<'_, L>,
    gen: &dyn AssumptionGen<L>,
    rng: &mut ChaCha8Rng,
    t: &Typed<L>,
    weak: &mut Tally,
    strong: &mut Tally,
) {
    let w = Name::fresh("w");
    let ty = gen.ty(rng, 3);
    let wide = t.env.extend(w.clone(), ty.clone()).expect("fresh name");
    weak.record(ck.check(&wide, &t.psi, &t.p).is_ok(), || format!("{} lost under {w} : {ty}", t.p));
    let mut used = t.p.support();
    used.extend(t.psi.support());
    let mut narrow = wide.clone();
    for x in wide.dom() {
        if !used.contains(&x) {
            narrow.remove(&x);
        }
    }
    strong.record(ck.check(&narrow, &t.psi, &t.p).is_ok(), || format!("{} lost in {{{narrow}}}", t.p));
}

fn assertion_weakening<L: Lang>(
    ck: &Checker<'_, L>,
    gen: &dyn AssumptionGen<L>,
    rng: &mut ChaCha8Rng,
    t: &Typed<L>,
    tally: &mut Tally,
) {
    let extra = gen.assertion(rng, &t.env, &t.psi, 3);
    let psi = ck.sig.compose(&t.psi, &extra);
    tally.record(ck.check(&t.env, &psi, &t.p).is_ok(), || format!("{} lost under {} ⊗ {extra}", t.p, t.psi));
}

/// Unguarded input prefixes of `p` with the environment at their position.
fn inputs<L: Lang>(env: &TypeEnv<L::Type>, p: &Process<L>, out: &mut Vec<(TypeEnv<L::Type>, Process<L>)>) {
    match p {
        Process::Par(a, b) => {
            inputs(env, a, out);
            inputs(env, b, out);
        }
        Process::Restrict(x, t, q) => {
            if let Ok(inner) = env.extend(x.clone(), t.clone()) {
                inputs(&inner, q, out);
            }
        }
        Process::Repl(q) => inputs(env, q, out),
        Process::Input { .. } => out.push((env.clone(), p.clone())),
        _ => {}
    }
}

/// Substitution: closing the continuation of an input by well-typed terms
/// for its binders, and replacing a name of `Γ` by a term of its type.
fn substitution<L: Lang>(
    ck: &Checker<'_, L>,
    gen: &dyn AssumptionGen<L>,
    rng: &mut ChaCha8Rng,
    t: &Typed<L>,
    tally: &mut Tally,
) {
    let sig = ck.sig;
    let amb = ambient_of(sig, &t.psi, &t.p);
    let mut found = Vec::new();
    inputs(&t.env, &t.p, &mut found);
    for (env, prefix) in found.iter().flat_map(|f| [f, f]) {
        let Process::Input { binders, cont, .. } = &prefix else { unreachable!() };
        let Ok(inner) = env.extend_all(binders) else { continue };
        if ck.check_inner(&inner, &amb, cont).is_err() {
            continue;
        }
        let s: Option<Vec<_>> = binders
            .iter()
            .map(|(x, ty)| {
                let l = gen.term_of(rng, &env, &amb, ty, 3)?;
                ck.has_type(&env, &amb, &l, ty).then(|| (x.clone(), l))
            })
            .collect();
        let Some(s) = s else { continue };
        let (q, psi) = (subst_process(sig, cont, &s), sig.subst_assertion(&amb, &s));
        let shown = || format!("{cont} under {s:?}");
        tally.record(ck.check_inner(&env, &psi, &q).is_ok(), shown);
    }
    let (names, psi_names) = (t.p.support(), t.psi.support());
    for x in t.env.dom() {
        if psi_names.contains(&x) || !names.contains(&x) {
            continue;
        }
        let ty = t.env.lookup(&x).expect("in domain").clone();
        let mut small = t.env.clone();
        small.remove(&x);
        if small.iter().any(|(_, u)| u.support().contains(&x)) {
            continue;
        }
        let Some(l) = gen.term_of(rng, &small, &t.psi, &ty, 3) else { continue };
        if l.support().contains(&x) || !ck.has_type(&small, &t.psi, &l, &ty) {
            continue;
        }
        let q = subst_process(sig, &t.p, &vec![(x.clone(), l.clone())]);
        tally.record(ck.check(&small, &t.psi, &q).is_ok(), || format!("{} with [{x} := {l}]", t.p));
    }
}

#[derive(Default)]
struct Lemmas {
    weak: Tally,
    strong: Tally,
    assertion: Tally,
    mono: Tally,
    inv: Tally,
    subst: Tally,
}

impl Lemmas {
    fn on<L: Lang>(&mut self, ck: &Checker<'_, L>, gen: &dyn AssumptionGen<L>, rng: &mut ChaCha8Rng, t: &Typed<L>) {
        weakening(ck, gen, rng, t, &mut self.weak, &mut self.strong);
        assertion_weakening(ck, gen, rng, t, &mut self.assertion);
        substitution(ck, gen, rng, t, &mut self.subst);
    }
}

struct Line {
    pass: bool,
    detail: String,
}

/// Subject reduction over the reduction tree of `t`; returns the number of
/// WRONG states seen.
fn preservation<L: Lang>(
    ck: &Checker<'_, L>,
    gen: &dyn AssumptionGen<L>,
    rng: &mut ChaCha8Rng,
    t: &Typed<L>,
    detect_wrong: bool,
    sr: &mut Tally,
    lemmas: &mut Lemmas,
) -> usize {
    let tree = explore_all(ck.sig, &t.psi, &t.p, SR_DEPTH, detect_wrong);
    for n in &tree.nodes {
        let ok = ck.check(&t.env, &t.psi, &n.state).is_ok();
        sr.record(ok, || format!("{} reduces to ill-typed {}", t.p, n.state));
        frame_lemmas(ck.sig, &t.psi, &n.state, &mut lemmas.mono, &mut lemmas.inv);
        if ok {
            lemmas.on(ck, gen, rng, &Typed { env: t.env.clone(), psi: t.psi.clone(), p: n.state.clone() });
        }
    }
    tree.nodes.iter().filter(|n| !n.wrong.is_empty()).count()
}

/// Process constructors of a HOπ process, names weighing nothing and a
/// transmitted process counting its own constructors. The assertion typing
/// the transmitted processes is context and not counted.
fn hopi_shape(p: &HopiProcess) -> usize {
    match p {
        Process::Par(a, b) if matches!(**b, Process::Assert(_)) => hopi_shape(a),
        Process::Nil | Process::Run(_) | Process::Assert(_) => 1,
        Process::Par(a, b) => 1 + hopi_shape(a) + hopi_shape(b),
        Process::Output { object, cont, .. } => {
            let payload = match object {
                HopiTerm::Proc(q) => hopi_shape(q),
                HopiTerm::Name(_) => 0,
            };
            1 + payload + hopi_shape(cont)
        }
        Process::Input { cont: q, .. } | Process::Restrict(_, _, q) | Process::Repl(q) => 1 + hopi_shape(q),
        Process::Case(bs) => 1 + bs.iter().map(|(_, q)| hopi_shape(q)).sum::<usize>(),
    }
}

/// Draws candidates until `SR_SAMPLE` of them check. Candidates come with
/// the size of their source process.
fn well_typed_sample<L: Lang>(
    ck: &Checker<'_, L>,
    mut candidate: impl FnMut(usize) -> Option<(usize, Typed<L>)>,
) -> Vec<Typed<L>> {
    let mut out = Vec::new();
    for i in 0..SR_SAMPLE * 20 {
        if out.len() == SR_SAMPLE {
            break;
        }
        let Some((size, t)) = candidate(i) else { continue };
        if size <= SR_MAX_SIZE && ck.check(&t.env, &t.psi, &t.p).is_ok() {
            out.push(t);
        }
    }
    out
}

/// Safety data carried from subject reduction to the HOπ safety criterion.
#[derive(Default)]
struct Safety {
    processes: usize,
    wrong: usize,
}

fn subject_reduction(lemmas: &mut Lemmas, safety: &mut Safety) -> Line {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut parts = Vec::new();
    let mut pass = true;

    let sorting = Sorting::new();
    let ck = Checker::new(&HopiSig, &HopiTyping);
    let gen = HopiAssumptionGen::default();
    let hopi = well_typed_sample(&ck, |i| {
        let p = well_typed_candidate(&mut rng, &sorting, 4 + i % (SR_MAX_SIZE - 3));
        Some((hopi_shape(&p), Typed { env: sorting.top(), psi: HopiAssertion::empty(), p }))
    });
    let mut sr = Tally::default();
    for t in &hopi {
        safety.wrong += preservation(&ck, &gen, &mut rng, t, true, &mut sr, lemmas);
    }
    safety.processes = hopi.len();
    pass &= hopi.len() >= SR_PROCESSES && sr.failures == 0;
    parts.push(format!("hopi {} processes, {} states, {} violations", hopi.len(), sr.cases, sr.failures));

    let ch = Channels::new();
    let env = ch.env();
    let ck = Checker::new(&Hopi2Sig, &Hopi2Typing).with_run_policy(RunPolicy::Lenient);
    let gen = Hopi2AssumptionGen::default();
    let hopi2 = well_typed_sample(&ck, |i| {
        let p = well_typed(&mut rng, &ch, 4 + i % (SR_MAX_SIZE - 3));
        let n = infer_level(&env, &p).ok()?;
        Some((p.size(), Typed { env: env.clone(), psi: Hopi2Assertion::Plain(n), p: embed(&env, &p).ok()? }))
    });
    let mut sr = Tally::default();
    for t in &hopi2 {
        preservation(&ck, &gen, &mut rng, t, false, &mut sr, lemmas);
    }
    pass &= hopi2.len() >= SR_PROCESSES && sr.failures == 0;
    parts.push(format!("hopi2 {} processes, {} states, {} violations", hopi2.len(), sr.cases, sr.failures));

    let sig = RhoTypedSig;
    let ck = Checker::new(&sig, &RhoTyping);
    let gen = RhoAssumptionGen::new(1);
    let rho = well_typed_sample(&ck, |_| {
        let p = typed(&mut rng, SR_MAX_SIZE);
        let q = Process::par(encode_typed(&p).ok()?, Process::Assert(typed_preamble()));
        Some((p.shape_size(), Typed { env: TypeEnv::new(), psi: sig.unit(), p: q }))
    });
    let mut sr = Tally::default();
    for t in &rho {
        preservation(&ck, &gen, &mut rng, t, false, &mut sr, lemmas);
    }
    pass &= rho.len() >= SR_PROCESSES && sr.failures == 0;
    parts.push(format!("rho-typed {} processes, {} states, {} violations", rho.len(), sr.cases, sr.failures));

    let elapsed = start.elapsed();
    pass &= elapsed < SR_TIME_LIMIT;
    parts.push(format!("{:.1}s", elapsed.as_secs_f64()));
    Line { pass, detail: parts.join("; ") }
}

fn hopi_safety(safety: &Safety) -> Line {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/tests/data/counterexample.hopi");
    let src = std::fs::read_to_string(path).expect("counterexample file");
    let Ok(Program::Hopi { env, assertion, body }) = parse_source(&src, None) else { panic!("counterexample does not parse") };
    let p = match assertion {
        Some(a) => Process::par(body, Process::Assert(a)),
        None => body,
    };
    let psi = HopiAssertion::empty();
    let rejected = Checker::new(&HopiSig, &HopiTyping).check(&env, &psi, &p).is_err();
    let wrong = explore_all(&HopiSig, &psi, &p, SR_DEPTH, true).any_wrong();
    let pass = rejected && wrong && safety.processes >= SAFETY_PROCESSES && safety.wrong == 0;
    let detail = format!(
        "counterexample rejected: {rejected}, reaches WRONG: {wrong}; {} well-typed processes, {} WRONG states",
        safety.processes, safety.wrong
    );
    Line { pass, detail }
}

fn termination(lemmas: &mut Lemmas) -> Line {
    let ch = Channels::new();
    let env = ch.env();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let (mut terminated, mut overruns, mut other) = (0, 0, 0);
    let mut longest = 0;
    for i in 0..TERMINATION_PROCESSES {
        let p = well_typed(&mut rng, &ch, 4 + i % (SR_MAX_SIZE - 3));
        match termination_probe(&env, &p, TERMINATION_BUDGET) {
            Ok(Termination::Terminated(d)) => {
                terminated += 1;
                longest = longest.max(d);
                let q = embed(&env, &p).expect("embeds");
                let psi = Hopi2Sig.unit();
                for n in explore_all(&Hopi2Sig, &psi, &q, d, false).nodes {
                    frame_lemmas(&Hopi2Sig, &psi, &n.state, &mut lemmas.mono, &mut lemmas.inv);
                }
            }
            Ok(Termination::BudgetExceeded) => overruns += 1,
            _ => other += 1,
        }
    }
    let a = &ch.channels[1].0;
    let omega_violation = matches!(infer_level(&env, &omega(a)), Err(LevelError::LevelViolation { .. }));
    let pass = terminated == TERMINATION_PROCESSES && overruns == 0 && omega_violation;
    let detail = format!(
        "{terminated}/{TERMINATION_PROCESSES} terminated (longest path {longest}), {overruns} budget overruns, {other} other; omega level violation: {omega_violation}"
    );
    Line { pass, detail }
}

fn correspondence(lemmas: &mut Lemmas) -> Line {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let (mut failed, mut states, mut steps) = (0, 0, 0);
    let mut first = None;
    for _ in 0..CORRESPONDENCE_SAMPLE {
        let p = untyped(&mut rng, CORRESPONDENCE_SIZE);
        let report = correspondence_check(&p, CORRESPONDENCE_DEPTH);
        states += report.states;
        steps += report.steps;
        if !report.passed() {
            failed += 1;
            first.get_or_insert_with(|| format!("{p}: {report}"));
        }
        let psi = RhoSig.unit();
        for n in explore_all(&RhoSig, &psi, &encode(&p), CORRESPONDENCE_DEPTH, false).nodes {
            frame_lemmas(&RhoSig, &psi, &n.state, &mut lemmas.mono, &mut lemmas.inv);
        }
    }
    let mut detail = format!("{CORRESPONDENCE_SAMPLE} processes, {states} states, {steps} steps, {failed} violations");
    if let Some(f) = first {
        detail.push_str(&format!("; first: {f}"));
    }
    Line { pass: failed == 0 && CORRESPONDENCE_SAMPLE >= CORRESPONDENCE_PROCESSES, detail }
}

fn name_equivalence() -> Line {
    let mut oracle = NameEqOracle::new(NAME_EQ_UNIVERSE);
    let names: Vec<RhoName> = processes_up_to(NAME_EQ_SIZE).into_iter().map(RhoName::quote).collect();
    let (sig, unit) = (RhoSig, RhoSig.unit());
    let (mut closure, mut entailment) = (Tally::default(), Tally::default());
    let mut equal = 0;
    for a in &names {
        for b in &names {
            let fast = name_eq(a, b);
            equal += fast as usize;
            closure.record(fast == oracle.equivalent(a, b), || format!("{a} vs {b}"));
            let entailed = sig.chan_eq(&unit, &encode_name(a), &encode_name(b));
            entailment.record(fast == entailed, || format!("{a} vs {b}"));
        }
    }
    let pass = closure.failures == 0 && entailment.failures == 0;
    let detail = format!(
        "{} names, {} pairs ({equal} equivalent); closure: {}; channel equivalence: {}",
        names.len(),
        closure.cases,
        closure.summary(),
        entailment.summary()
    );
    Line { pass, detail }
}

fn first_counterexample(r: &AssumptionReport) -> String {
    r.outcomes
        .iter()
        .find(|o| o.counterexample.is_some())
        .map_or("not caught".into(), |o| format!("caught by {} at trial {}", o.assumption, o.trials))
}

fn assumption_reports(seed: u64) -> Vec<AssumptionReport> {
    let (t, s) = (ASSUMPTION_TRIALS, ASSUMPTION_SIZE);
    vec![
        run_assumptions(&HopiSig, &HopiTyping, &HopiAssumptionGen::default(), t, s, seed),
        run_assumptions(&Hopi2Sig, &Hopi2Typing, &Hopi2AssumptionGen::default(), t, s, seed),
        run_assumptions(&RhoTypedSig, &RhoTyping, &RhoAssumptionGen::new(seed), t, s, seed),
    ]
}

fn assumptions() -> Line {
    let reports = assumption_reports(1);
    let mut parts: Vec<String> = reports
        .iter()
        .map(|r| {
            let exercised: usize = r.outcomes.iter().map(|o| o.exercised).sum();
            let failed = r.outcomes.iter().filter(|o| o.counterexample.is_some()).count();
            format!("{} {} assumptions x {ASSUMPTION_TRIALS} trials, {exercised} exercised, {failed} failing", r.instance, r.outcomes.len())
        })
        .collect();
    let (t, s) = (ASSUMPTION_TRIALS, ASSUMPTION_SIZE);
    let mutants = [
        ("broken composition", run_assumptions(&ForgetfulCompose(&HopiSig), &HopiTyping, &HopiAssumptionGen::default(), t, s, 1)),
        ("broken substitution", run_assumptions(&InertSubst(&HopiSig), &HopiTyping, &HopiAssumptionGen::default(), t, s, 1)),
        ("broken compatibility", run_assumptions(&Hopi2Sig, &ExactOutput(&Hopi2Typing), &Hopi2AssumptionGen::default(), t, s, 1)),
    ];
    for (what, r) in &mutants {
        parts.push(format!("{what} ({}): {}", r.instance, first_counterexample(r)));
    }
    let pass = reports.iter().all(|r| r.passed()) && mutants.iter().all(|(_, r)| !r.passed());
    for r in reports.iter().filter(|r| !r.passed()) {
        parts.push(first_counterexample(r));
    }
    Line { pass, detail: parts.join("; ") }
}

fn lemma_line(lemmas: &Lemmas) -> Line {
    let suites = [
        ("weakening", &lemmas.weak),
        ("strengthening", &lemmas.strong),
        ("assertion weakening", &lemmas.assertion),
        ("frame monotonicity", &lemmas.mono),
        ("frame invariance", &lemmas.inv),
        ("substitution", &lemmas.subst),
    ];
    let pass = suites.iter().all(|(_, t)| t.passed(LEMMA_CASES));
    let detail = suites.iter().map(|(n, t)| format!("{n}: {}", t.summary())).collect::<Vec<_>>().join("; ");
    Line { pass, detail }
}

/// Traces, trees and reports from one seed, as text.
fn transcript(seed: u64) -> String {
    fn traces<L: Lang>(sig: &dyn Signature<L>, psi: &L::Assertion, p: &Process<L>, seed: u64, out: &mut String) {
        let trace = run_trace(sig, psi, p, 20, Some(seed), true);
        out.push_str(&trace.render_text());
        out.push_str(&trace.render_json().to_string());
        for n in explore_all(sig, psi, p, 3, true).nodes {
            out.push_str(&format!("{} {:?}\n", n.state, n.children));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = String::new();
    let sorting = Sorting::new();
    let (ch, rho_psi) = (Channels::new(), RhoTypedSig.unit());
    for i in 0..20 {
        let size = 1 + i % SR_MAX_SIZE;
        let p = well_typed_candidate(&mut rng, &sorting, size);
        traces(&HopiSig, &HopiAssertion::empty(), &p, rng.gen(), &mut out);
        let q = embed(&ch.env(), &well_typed(&mut rng, &ch, size)).expect("embeds");
        traces(&Hopi2Sig, &Hopi2Sig.unit(), &q, rng.gen(), &mut out);
        if let Ok(r) = encode_typed(&typed(&mut rng, size)) {
            traces(&RhoTypedSig, &rho_psi, &Process::par(r, Process::Assert(typed_preamble())), rng.gen(), &mut out);
        }
    }
    for r in assumption_reports(seed) {
        out.push_str(&r.render_text());
        out.push_str(&serde_json::to_string(&r).expect("serialises"));
    }
    out
}

fn determinism() -> Line {
    let (a, b) = (transcript(7), transcript(7));
    let pass = a == b;
    let detail = if pass {
        format!("two runs with seed 7 give identical output ({} bytes)", a.len())
    } else {
        let at = a.bytes().zip(b.bytes()).position(|(x, y)| x != y).unwrap_or(a.len().min(b.len()));
        format!("runs differ at byte {at}")
    };
    Line { pass, detail }
}

fn main() {
    let mut lemmas = Lemmas::default();
    let mut safety = Safety::default();
    let criteria: Vec<(&str, Line)> = vec![
        ("subject reduction", subject_reduction(&mut lemmas, &mut safety)),
        ("hopi safety", hopi_safety(&safety)),
        ("hopi2 termination", termination(&mut lemmas)),
        ("rho operational correspondence", correspondence(&mut lemmas)),
        ("name equivalence oracle", name_equivalence()),
        ("instance assumptions", assumptions()),
        ("metatheory lemmas", lemma_line(&lemmas)),
        ("determinism", determinism()),
    ];
    for (i, (name, line)) in criteria.iter().enumerate() {
        let status = if line.pass { "PASS" } else { "FAIL" };
        println!("criterion {} [{status}] {name}: {}", i + 1, line.detail);
    }
    let failed = criteria.iter().filter(|(_, l)| !l.pass).count();
    println!("acceptance: {}/{} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
