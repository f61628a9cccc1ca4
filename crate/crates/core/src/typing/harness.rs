//! Randomised falsification of the instance assumptions the type system
//! relies on, the compatibility contract, and deliberately broken instances
//! used to show that the checks have teeth.

use std::fmt;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::instance::{Data, Lang, Signature, Subst};
use crate::nominal::{check_substitution_laws, Name, Nominal, SubstSample};
use crate::syntax::{canonical_data, canonicalize, Process};

use super::{Checker, Direction, RunPolicy, TypeEnv, TypingHooks};

/// A judgment `𝒥` for terms, conditions and assertions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Judgment<L: Lang> {
    Term(L::Term, L::Type),
    Cond(L::Condition),
    Assert(L::Assertion),
}

impl<L: Lang> Nominal for Judgment<L> {
    fn support_into(&self, acc: &mut std::collections::BTreeSet<Name>) {
        match self {
            Judgment::Term(m, t) => {
                m.support_into(acc);
                t.support_into(acc);
            }
            Judgment::Cond(c) => c.support_into(acc),
            Judgment::Assert(a) => a.support_into(acc),
        }
    }

    fn swap(&self, t: &crate::nominal::Transposition) -> Self {
        match self {
            Judgment::Term(m, ty) => Judgment::Term(m.swap(t), ty.swap(t)),
            Judgment::Cond(c) => Judgment::Cond(c.swap(t)),
            Judgment::Assert(a) => Judgment::Assert(a.swap(t)),
        }
    }
}

impl<L: Lang> fmt::Display for Judgment<L> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Judgment::Term(m, t) => write!(f, "{m} : {t}"),
            Judgment::Cond(c) => write!(f, "{c}"),
            Judgment::Assert(a) => write!(f, "(| {a} |)"),
        }
    }
}

impl<L: Lang> Judgment<L> {
    /// `𝒥[x̃ := L̃]`; types are never substituted into.
    pub fn subst(&self, sig: &dyn Signature<L>, s: &Subst<L>) -> Self {
        match self {
            Judgment::Term(m, t) => Judgment::Term(sig.subst_term(m, s), t.clone()),
            Judgment::Cond(c) => Judgment::Cond(sig.subst_condition(c, s)),
            Judgment::Assert(a) => Judgment::Assert(sig.subst_assertion(a, s)),
        }
    }
}

/// `Γ, Ψ ⊢ 𝒥`
pub fn judge<L: Lang>(ck: &Checker<'_, L>, env: &TypeEnv<L::Type>, psi: &L::Assertion, j: &Judgment<L>) -> bool {
    match j {
        Judgment::Term(m, t) => ck.has_type(env, psi, m, t),
        Judgment::Cond(c) => ck.hooks.check_condition(ck, env, psi, c).is_ok(),
        Judgment::Assert(a) => ck.hooks.check_assertion(ck, env, psi, a).is_ok(),
    }
}

/// Generators an instance supplies to the harness. All generated data only
/// mentions names of the environment it was generated for.
pub trait AssumptionGen<L: Lang>: Send + Sync {
    /// A context `Γ, Ψ` with `n(Ψ) ⊆ dom(Γ)`.
    fn context(&self, rng: &mut ChaCha8Rng, size: usize) -> (TypeEnv<L::Type>, L::Assertion);

    /// A term over `dom(env)`, well-typed more often than not.
    fn term(&self, rng: &mut ChaCha8Rng, env: &TypeEnv<L::Type>, psi: &L::Assertion, size: usize) -> L::Term;

    /// A term of type `t`, if the generator can find one.
    fn term_of(
        &self,
        rng: &mut ChaCha8Rng,
        env: &TypeEnv<L::Type>,
        psi: &L::Assertion,
        t: &L::Type,
        size: usize,
    ) -> Option<L::Term>;

    /// A term likely to be channel-equivalent to `m` under `psi`.
    fn partner(&self, _rng: &mut ChaCha8Rng, _psi: &L::Assertion, m: &L::Term) -> L::Term {
        m.clone()
    }

    fn condition(&self, rng: &mut ChaCha8Rng, env: &TypeEnv<L::Type>, psi: &L::Assertion, size: usize) -> L::Condition;

    /// An assertion over `dom(env)`; also used as a specialisation witness.
    fn assertion(&self, rng: &mut ChaCha8Rng, env: &TypeEnv<L::Type>, psi: &L::Assertion, size: usize) -> L::Assertion;

    fn ty(&self, rng: &mut ChaCha8Rng, size: usize) -> L::Type;
}

/// Result of one assumption over all trials.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AssumptionOutcome {
    pub assumption: &'static str,
    pub trials: usize,
    /// Trials whose premises held.
    pub exercised: usize,
    pub counterexample: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AssumptionReport {
    pub instance: String,
    pub outcomes: Vec<AssumptionOutcome>,
}

impl AssumptionReport {
    pub fn passed(&self) -> bool {
        self.outcomes.iter().all(|o| o.counterexample.is_none())
    }

    pub fn outcome(&self, name: &str) -> Option<&AssumptionOutcome> {
        self.outcomes.iter().find(|o| o.assumption == name)
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        for o in &self.outcomes {
            let status = if o.counterexample.is_some() { "FAIL" } else { "ok" };
            out.push_str(&format!("{}\t{}\t{} trials\t{} exercised\t{}\n", self.instance, o.assumption, o.trials, o.exercised, status));
            if let Some(c) = &o.counterexample {
                out.push_str(&format!("  counterexample: {c}\n"));
            }
        }
        out
    }
}

enum Outcome {
    Vacuous,
    Held,
    Violated(String),
}

pub const ASSUMPTIONS: &[&str] = &[
    "T-ENV-WEAK",
    "T-ENV-STRENGTH",
    "T-COMP-TERM",
    "T-ASS-WEAK",
    "T-WEAK-CHANEQ",
    "T-SUBS",
    "T-EQUAL",
    "T-ENV-CLAUS",
    "T-WEAK-ASS-CLAUS",
    "T-SUBS-RUN",
    "SUBST-LAW-1",
    "SUBST-LAW-2",
    "COMPAT-COMPARABLE",
    "COMPAT-CONTRAVARIANT",
    "COMPAT-COVARIANT",
];

struct Ctx<'a, L: Lang> {
    sig: &'a dyn Signature<L>,
    ck: Checker<'a, L>,
    gen: &'a dyn AssumptionGen<L>,
}

impl<'a, L: Lang> Ctx<'a, L> {
    fn judgment(&self, rng: &mut ChaCha8Rng, env: &TypeEnv<L::Type>, psi: &L::Assertion, size: usize) -> Judgment<L> {
        match rng.gen_range(0..4) {
            0 | 1 => {
                let m = self.gen.term(rng, env, psi, size);
                let t = match self.ck.synth(env, psi, &m) {
                    Ok(t) if rng.gen_bool(0.9) => t,
                    _ => self.gen.ty(rng, size),
                };
                Judgment::Term(m, t)
            }
            2 => Judgment::Cond(self.gen.condition(rng, env, psi, size)),
            _ => Judgment::Assert(self.gen.assertion(rng, env, psi, size)),
        }
    }

    fn within(env: &TypeEnv<L::Type>, names: &std::collections::BTreeSet<Name>) -> bool {
        names.iter().all(|n| env.contains(n))
    }

    /// A name of `env` together with a term of its type not mentioning it.
    fn substitution(
        &self,
        rng: &mut ChaCha8Rng,
        env: &TypeEnv<L::Type>,
        psi: &L::Assertion,
        size: usize,
    ) -> Option<(Name, L::Term)> {
        let dom: Vec<Name> = env.dom().into_iter().collect();
        let x = dom.choose(rng)?.clone();
        let tx = env.get(&x)?.clone();
        let l = self.gen.term_of(rng, env, psi, &tx, size)?;
        if l.support().contains(&x) || !self.ck.has_type(env, psi, &l, &tx) {
            return None;
        }
        Some((x, l))
    }

    fn handles_canonical(&self, psi: &L::Assertion, m: &L::Term) -> Vec<Process<L>> {
        let mut hs: Vec<_> = self.sig.handles(psi, m).iter().map(canonicalize).collect();
        hs.sort();
        hs
    }

    fn trial(&self, name: &str, rng: &mut ChaCha8Rng, size: usize) -> Outcome {
        let (env, psi) = self.gen.context(rng, size);
        let sig = self.sig;
        let ck = &self.ck;
        let show = |j: &dyn fmt::Display| format!("Γ = {{{env}}}; Ψ = {psi}; {j}");
        match name {
            "T-ENV-WEAK" => {
                let j = self.judgment(rng, &env, &psi, size);
                if !judge(ck, &env, &psi, &j) {
                    return Outcome::Vacuous;
                }
                let x = Name::fresh("w");
                let t = self.gen.ty(rng, size);
                let wider = env.extend(x.clone(), t.clone()).expect("fresh name");
                if judge(ck, &wider, &psi, &j) {
                    Outcome::Held
                } else {
                    Outcome::Violated(show(&format!("𝒥 = {j}; lost after adding {x}:{t}")))
                }
            }
            "T-ENV-STRENGTH" => {
                let j = self.judgment(rng, &env, &psi, size);
                let mut used = j.support();
                psi.support_into(&mut used);
                let spare: Vec<Name> = env.dom().into_iter().filter(|x| !used.contains(x)).collect();
                let Some(x) = spare.choose(rng).cloned() else { return Outcome::Vacuous };
                if !judge(ck, &env, &psi, &j) {
                    return Outcome::Vacuous;
                }
                let mut narrower = env.clone();
                narrower.remove(&x);
                if judge(ck, &narrower, &psi, &j) {
                    Outcome::Held
                } else {
                    Outcome::Violated(show(&format!("𝒥 = {j}; lost after removing unused {x}")))
                }
            }
            "T-COMP-TERM" => {
                // A well-typed instance M[x:=L] of a term mentioning x forces L to be typable.
                let Some(x) = env.dom().into_iter().collect::<Vec<_>>().choose(rng).cloned() else {
                    return Outcome::Vacuous;
                };
                let m = self.gen.term(rng, &env, &psi, size);
                if !m.support().contains(&x) || m.annotation_names().contains(&x) {
                    return Outcome::Vacuous;
                }
                let l = self.gen.term(rng, &env, &psi, size);
                let s = vec![(x.clone(), l.clone())];
                let ms = sig.subst_term(&m, &s);
                let psis = sig.subst_assertion(&psi, &s);
                if ck.synth(&env, &psis, &ms).is_err() {
                    return Outcome::Vacuous;
                }
                match ck.synth(&env, &psis, &l) {
                    Ok(_) => Outcome::Held,
                    Err(e) => Outcome::Violated(show(&format!("M = {m}; [{x} := {l}] typable but {l} is not: {e}"))),
                }
            }
            "T-ASS-WEAK" => {
                let j = self.judgment(rng, &env, &psi, size);
                if !judge(ck, &env, &psi, &j) {
                    return Outcome::Vacuous;
                }
                let ext = self.gen.assertion(rng, &env, &psi, size);
                let wider = sig.compose(&psi, &ext);
                let names = wider.support();
                if !Self::within(&env, &names) || !psi.support().is_subset(&names) {
                    return Outcome::Vacuous;
                }
                if judge(ck, &env, &wider, &j) {
                    Outcome::Held
                } else {
                    Outcome::Violated(show(&format!("𝒥 = {j}; lost under Ψ ⊗ {ext} = {wider}")))
                }
            }
            "T-WEAK-CHANEQ" => {
                let m1 = self.gen.term(rng, &env, &psi, size);
                let m2 = if rng.gen_bool(0.5) { self.gen.partner(rng, &psi, &m1) } else { self.gen.term(rng, &env, &psi, size) };
                if !sig.chan_eq(&psi, &m1, &m2) {
                    return Outcome::Vacuous;
                }
                let ext = self.gen.assertion(rng, &env, &psi, size);
                let wider = sig.compose(&psi, &ext);
                if sig.chan_eq(&wider, &m1, &m2) {
                    Outcome::Held
                } else {
                    Outcome::Violated(show(&format!("{m1} <-> {m2} lost under Ψ ⊗ {ext}")))
                }
            }
            "T-SUBS" => {
                let Some((x, l)) = self.substitution(rng, &env, &psi, size) else { return Outcome::Vacuous };
                let j = self.judgment(rng, &env, &psi, size);
                if !judge(ck, &env, &psi, &j) {
                    return Outcome::Vacuous;
                }
                let s = vec![(x.clone(), l.clone())];
                let (js, psis) = (j.subst(sig, &s), sig.subst_assertion(&psi, &s));
                if judge(ck, &env, &psis, &js) {
                    Outcome::Held
                } else {
                    Outcome::Violated(show(&format!("𝒥 = {j}; [{x} := {l}] gives {js} which fails")))
                }
            }
            "T-EQUAL" => {
                let m = self.gen.term(rng, &env, &psi, size);
                let n = if rng.gen_bool(0.7) { self.gen.partner(rng, &psi, &m) } else { self.gen.term(rng, &env, &psi, size) };
                let Ok(t) = ck.synth(&env, &psi, &m) else { return Outcome::Vacuous };
                if !sig.chan_eq(&psi, &m, &n) {
                    return Outcome::Vacuous;
                }
                if ck.has_type(&env, &psi, &n, &t) {
                    Outcome::Held
                } else {
                    Outcome::Violated(show(&format!("{m} : {t} and {m} <-> {n}, but {n} is not of type {t}")))
                }
            }
            "T-ENV-CLAUS" => {
                let m = self.gen.term(rng, &env, &psi, size);
                let Ok(t) = ck.synth(&env, &psi, &m) else { return Outcome::Vacuous };
                if sig.handles(&psi, &m).is_empty() {
                    return Outcome::Vacuous;
                }
                let Ok(inner) = ck.hooks.extract_env(&env, &t) else { return Outcome::Vacuous };
                if Self::within(&inner, &m.support()) {
                    Outcome::Held
                } else {
                    Outcome::Violated(show(&format!("handle {m} : {t} extracts {{{inner}}} missing some of its names")))
                }
            }
            "T-WEAK-ASS-CLAUS" => {
                let m = self.gen.term(rng, &env, &psi, size);
                let before = self.handles_canonical(&psi, &m);
                if before.is_empty() || ck.synth(&env, &psi, &m).is_err() {
                    return Outcome::Vacuous;
                }
                let ext = self.gen.assertion(rng, &env, &psi, size);
                let wider = sig.compose(&psi, &ext);
                if !psi.support().is_subset(&wider.support()) {
                    return Outcome::Vacuous;
                }
                let after = self.handles_canonical(&wider, &m);
                match before.iter().find(|p| !after.contains(p)) {
                    None => Outcome::Held,
                    Some(p) => Outcome::Violated(show(&format!("{m} stops being a handle for {p} under Ψ ⊗ {ext}"))),
                }
            }
            "T-SUBS-RUN" => {
                let Some((x, l)) = self.substitution(rng, &env, &psi, size) else { return Outcome::Vacuous };
                let m = self.gen.term(rng, &env, &psi, size);
                let Ok(t) = ck.synth(&env, &psi, &m) else { return Outcome::Vacuous };
                let Ok(inner) = ck.hooks.extract_env(&env, &t) else { return Outcome::Vacuous };
                let s = vec![(x.clone(), l.clone())];
                let (ms, psis) = (sig.subst_term(&m, &s), sig.subst_assertion(&psi, &s));
                let handles = sig.handles(&psis, &ms);
                if handles.is_empty() {
                    return Outcome::Vacuous;
                }
                for p in handles {
                    if let Err(e) = ck.check_inner(&inner, &ck.hooks.run_assertion(&psis, &t), &p) {
                        return Outcome::Violated(show(&format!("{m} : {t}, [{x} := {l}] runs {p}, ill-typed in {{{inner}}}: {e}")));
                    }
                }
                Outcome::Held
            }
            "SUBST-LAW-1" | "SUBST-LAW-2" => {
                let x = self.gen.term(rng, &env, &psi, size);
                let sup: Vec<Name> = x.support().difference(&x.annotation_names()).cloned().collect();
                let Some(a) = sup.choose(rng).cloned() else { return Outcome::Vacuous };
                let y = self.gen.term(rng, &env, &psi, size);
                let sample = SubstSample { value: x, names: vec![a], replacements: vec![y] };
                let subst = |v: &L::Term, ns: &[Name], ys: &[L::Term]| {
                    let s: Subst<L> = ns.iter().cloned().zip(ys.iter().cloned()).collect();
                    sig.subst_term(v, &s)
                };
                let eq = |p: &L::Term, q: &L::Term| canonical_data(p) == canonical_data(q);
                let law = if name == "SUBST-LAW-1" { 1 } else { 2 };
                match check_substitution_laws(subst, eq, &[sample]) {
                    crate::nominal::LawReport::Fail { law: l, counterexample, .. } if l == law => Outcome::Violated(counterexample),
                    _ => Outcome::Held,
                }
            }
            "COMPAT-COMPARABLE" | "COMPAT-CONTRAVARIANT" | "COMPAT-COVARIANT" => {
                let types: Vec<L::Type> = (0..3).map(|_| self.gen.ty(rng, size)).collect();
                match compat_violation(ck.hooks, name, &types) {
                    None => Outcome::Held,
                    Some(msg) => Outcome::Violated(msg),
                }
            }
            other => panic!("unknown assumption {other}"),
        }
    }
}

/// Checks one clause of the compatibility contract on every triple drawn
/// from `types`: `T` the channel type, `U₁`, `U₂` carried types.
fn compat_violation<L: Lang>(hooks: &dyn TypingHooks<L>, clause: &str, types: &[L::Type]) -> Option<String> {
    for t in types {
        for u1 in types {
            for u2 in types {
                for dir in [Direction::Out, Direction::In] {
                    let (c1, c2) = (hooks.carries(t, dir, u1), hooks.carries(t, dir, u2));
                    let le = hooks.subtype(u1, u2);
                    let bad = match clause {
                        "COMPAT-COMPARABLE" => c1 && c2 && u1 != u2 && !le && !hooks.subtype(u2, u1),
                        "COMPAT-CONTRAVARIANT" => dir == Direction::Out && c2 && le && !c1,
                        _ => dir == Direction::In && c1 && le && !c2,
                    };
                    if bad {
                        return Some(format!("{clause}: T = {t}, d = {dir}, U1 = {u1}, U2 = {u2}"));
                    }
                }
            }
        }
    }
    None
}

/// Report of [`check_compatibility_contract`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ContractReport {
    pub samples: usize,
    pub violations: Vec<String>,
}

/// The three requirements on `⇝ᵈ` relative to `≤`, checked on all triples
/// of the given sample types.
pub fn check_compatibility_contract<L: Lang>(hooks: &dyn TypingHooks<L>, samples: &[L::Type]) -> ContractReport {
    let violations = ["COMPAT-COMPARABLE", "COMPAT-CONTRAVARIANT", "COMPAT-COVARIANT"]
        .iter()
        .filter_map(|c| compat_violation(hooks, c, samples))
        .collect();
    ContractReport { samples: samples.len(), violations }
}

/// Runs `trials` randomised trials of every assumption. Trial sizes cycle
/// through `1..=max_size`. A violation is minimised by searching smaller
/// sizes for another one.
pub fn run_assumptions<L: Lang>(
    sig: &dyn Signature<L>,
    hooks: &dyn TypingHooks<L>,
    gen: &dyn AssumptionGen<L>,
    trials: usize,
    max_size: usize,
    seed: u64,
) -> AssumptionReport {
    let ctx = Ctx { sig, ck: Checker::new(sig, hooks), gen };
    let mut outcomes = Vec::new();
    if trials == 0 {
        return AssumptionReport { instance: sig.name().to_string(), outcomes };
    }
    let max_size = max_size.max(1);
    for (k, name) in ASSUMPTIONS.iter().enumerate() {
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add((k as u64) << 32));
        let mut exercised = 0;
        let mut counterexample = None;
        let mut done = 0;
        for i in 0..trials {
            done = i + 1;
            let size = 1 + i % max_size;
            match ctx.trial(name, &mut rng, size) {
                Outcome::Vacuous => {}
                Outcome::Held => exercised += 1,
                Outcome::Violated(msg) => {
                    exercised += 1;
                    counterexample = Some(minimise(&ctx, name, &mut rng, size).unwrap_or(msg));
                    break;
                }
            }
        }
        outcomes.push(AssumptionOutcome { assumption: name, trials: done, exercised, counterexample });
    }
    AssumptionReport { instance: sig.name().to_string(), outcomes }
}

fn minimise<L: Lang>(ctx: &Ctx<'_, L>, name: &str, rng: &mut ChaCha8Rng, size: usize) -> Option<String> {
    for s in 1..size {
        for _ in 0..50 {
            if let Outcome::Violated(msg) = ctx.trial(name, rng, s) {
                return Some(msg);
            }
        }
    }
    None
}

/// Deliberately broken instances.
pub mod mutants {
    use super::*;

    /// `Ψ₁ ⊗ Ψ₂ = Ψ₂`: composition forgets its left operand.
    pub struct ForgetfulCompose<'a, L: Lang>(pub &'a dyn Signature<L>);

    /// Substitution that leaves every term untouched.
    pub struct InertSubst<'a, L: Lang>(pub &'a dyn Signature<L>);

    macro_rules! delegate_signature {
        ($ty:ident, { $($override:item)* }) => {
            impl<'a, L: Lang> Signature<L> for $ty<'a, L> {
                fn name(&self) -> &'static str { self.0.name() }
                fn unit(&self) -> L::Assertion { self.0.unit() }
                fn entails(&self, psi: &L::Assertion, phi: &L::Condition) -> bool { self.0.entails(psi, phi) }
                fn chan_eq(&self, psi: &L::Assertion, m: &L::Term, k: &L::Term) -> bool { self.0.chan_eq(psi, m, k) }
                fn handles(&self, psi: &L::Assertion, m: &L::Term) -> Vec<Process<L>> { self.0.handles(psi, m) }
                fn var(&self, x: &Name) -> L::Term { self.0.var(x) }
                fn subst_condition(&self, c: &L::Condition, s: &Subst<L>) -> L::Condition { self.0.subst_condition(c, s) }
                fn subst_assertion(&self, a: &L::Assertion, s: &Subst<L>) -> L::Assertion { self.0.subst_assertion(a, s) }
                fn match_pattern(&self, p: &L::Term, b: &[Name], v: &L::Term) -> Option<Subst<L>> { self.0.match_pattern(p, b, v) }
                fn specializes(&self, a: &L::Assertion, b: &L::Assertion) -> bool { self.0.specializes(a, b) }
                fn wrong(&self, psi: &L::Assertion, atom: &Process<L>) -> Option<String> { self.0.wrong(psi, atom) }
                $($override)*
            }
        };
    }

    delegate_signature!(ForgetfulCompose, {
        fn compose(&self, _a: &L::Assertion, b: &L::Assertion) -> L::Assertion { b.clone() }
        fn subst_term(&self, t: &L::Term, s: &Subst<L>) -> L::Term { self.0.subst_term(t, s) }
    });

    delegate_signature!(InertSubst, {
        fn compose(&self, a: &L::Assertion, b: &L::Assertion) -> L::Assertion { self.0.compose(a, b) }
        fn subst_term(&self, t: &L::Term, _s: &Subst<L>) -> L::Term { t.clone() }
    });

    /// Output compatibility that accepts only the exact carried type.
    pub struct ExactOutput<'a, L: Lang>(pub &'a dyn TypingHooks<L>);

    impl<'a, L: Lang> TypingHooks<L> for ExactOutput<'a, L> {
        fn synth_term(&self, ck: &Checker<'_, L>, env: &TypeEnv<L::Type>, psi: &L::Assertion, m: &L::Term) -> Result<L::Type, String> {
            self.0.synth_term(ck, env, psi, m)
        }
        fn check_condition(&self, ck: &Checker<'_, L>, env: &TypeEnv<L::Type>, psi: &L::Assertion, c: &L::Condition) -> Result<(), String> {
            self.0.check_condition(ck, env, psi, c)
        }
        fn check_assertion(&self, ck: &Checker<'_, L>, env: &TypeEnv<L::Type>, psi: &L::Assertion, a: &L::Assertion) -> Result<(), String> {
            self.0.check_assertion(ck, env, psi, a)
        }
        fn subtype(&self, a: &L::Type, b: &L::Type) -> bool {
            self.0.subtype(a, b)
        }
        fn compat(&self, t: &L::Type, dir: Direction) -> Result<L::Type, String> {
            self.0.compat(t, dir)
        }
        fn carries(&self, t: &L::Type, dir: Direction, obj: &L::Type) -> bool {
            match dir {
                Direction::Out => self.0.compat(t, dir).map(|c| &c == obj).unwrap_or(false),
                Direction::In => self.0.carries(t, dir, obj),
            }
        }
        fn extract_env(&self, env: &TypeEnv<L::Type>, t: &L::Type) -> Result<TypeEnv<L::Type>, String> {
            self.0.extract_env(env, t)
        }
        fn run_policy(&self) -> RunPolicy {
            self.0.run_policy()
        }
        fn run_assertion(&self, psi: &L::Assertion, t: &L::Type) -> L::Assertion {
            self.0.run_assertion(psi, t)
        }
    }
}
