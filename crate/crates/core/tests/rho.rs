mod common;

use common::NameEqOracle;
use hopsi::instance::Signature;
use hopsi::instances::rho::correspond::correspondence_check;
use hopsi::instances::rho::encode::{encode_typed, RhoSig};
use hopsi::instances::rho::gen::{typed, typed_preamble, untyped, RhoAssumptionGen};
use hopsi::instances::rho::{
    behav_eq, encode, encode_name, name_eq, processes_of_size, processes_up_to, rho_step, rho_subst, RhoName, RhoProcess,
    RhoTypedSig, RhoTyping,
};
use hopsi::semantics::explore_all;
use hopsi::syntax::Process;
use hopsi::typing::harness::run_assumptions;
use hopsi::typing::{Checker, TypeEnv};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn zero() -> RhoName {
    RhoName::zero()
}

#[test]
fn enumeration_counts() {
    let counts: Vec<usize> = (1..=7).map(|s| processes_of_size(s).len()).collect();
    assert_eq!(counts, vec![1, 1, 3, 8, 25, 81, 274]);
}

#[test]
fn name_equivalence_examples() {
    let dropped = RhoName::quote(RhoProcess::Drop(zero()));
    assert!(name_eq(&dropped, &zero()));
    assert!(name_eq(&RhoName::quote(RhoProcess::par(RhoProcess::Nil, RhoProcess::Nil)), &zero()));
    assert!(!name_eq(&zero(), &RhoName::quote(RhoProcess::lift(zero(), RhoProcess::Nil))));
}

#[test]
fn substitution_examples() {
    let y = RhoName::quote(RhoProcess::lift(zero(), RhoProcess::Nil));
    assert_eq!(rho_subst(&RhoProcess::Drop(y.clone()), &y, &zero()), RhoProcess::Nil);
    assert_eq!(rho_subst(&RhoProcess::lift(y.clone(), RhoProcess::Nil), &y, &zero()), RhoProcess::lift(zero(), RhoProcess::Nil));
    let quoted = RhoProcess::Drop(RhoName::quote(RhoProcess::lift(y.clone(), RhoProcess::Nil)));
    assert_eq!(rho_subst(&quoted, &y, &zero()), quoted);
}

#[test]
fn step_examples() {
    let y = RhoName::quote(RhoProcess::lift(zero(), RhoProcess::Nil));
    let p = RhoProcess::par(RhoProcess::lift(zero(), RhoProcess::Nil), RhoProcess::input(zero(), y.clone(), RhoProcess::Drop(y)));
    let succ = rho_step(&p);
    assert_eq!(succ.len(), 1);
    assert!(hopsi::instances::rho::struct_congruent(&succ[0], &RhoProcess::Nil));
    let other = RhoName::quote(RhoProcess::lift(zero(), RhoProcess::Nil));
    let q = RhoProcess::par(RhoProcess::lift(zero(), RhoProcess::Nil), RhoProcess::input(other, zero(), RhoProcess::Nil));
    assert!(rho_step(&q).is_empty());
    assert!(rho_step(&RhoProcess::Nil).is_empty());
    assert!(rho_step(&RhoProcess::Drop(zero())).is_empty());
}

#[test]
fn name_eq_agrees_with_brute_force_closure() {
    let mut oracle = NameEqOracle::new(8);
    let names: Vec<RhoName> = processes_up_to(5).into_iter().map(RhoName::quote).collect();
    let sig = RhoSig;
    let mut equal = 0;
    for a in &names {
        for b in &names {
            let fast = name_eq(a, b);
            assert_eq!(fast, oracle.equivalent(a, b), "{a} vs {b}");
            assert_eq!(fast, sig.chan_eq(&sig.unit(), &encode_name(a), &encode_name(b)), "{a} vs {b}");
            equal += fast as usize;
        }
    }
    assert!(equal > names.len(), "only reflexive pairs are equivalent");
}

#[test]
fn correspondence_on_generated_processes() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut steps = 0;
    for _ in 0..60 {
        let p = untyped(&mut rng, 6);
        let report = correspondence_check(&p, 3);
        assert!(report.passed(), "{p}\n{report}");
        steps += report.steps;
    }
    assert!(steps > 0);
}

#[test]
fn behavioural_equivalence_examples() {
    let nil: Process<_> = Process::Nil;
    let run = Process::Run(hopsi::instances::rho::RhoTerm::Dyn(Box::new(encode(&RhoProcess::Nil))));
    assert!(behav_eq(&run, &nil));
    let lift = encode(&RhoProcess::lift(zero(), RhoProcess::Nil));
    assert!(!behav_eq(&nil, &lift));
    assert!(behav_eq(&lift, &lift));
}

#[test]
fn typed_processes_check_and_preserve_types() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let sig = RhoTypedSig;
    let ck = Checker::new(&sig, &RhoTyping);
    let env = TypeEnv::new();
    let psi = sig.unit();
    let mut nodes = 0;
    for i in 0..200 {
        let p = typed(&mut rng, 8);
        let q = Process::par(encode_typed(&p).expect("annotated"), Process::Assert(typed_preamble()));
        if let Err(e) = ck.check(&env, &psi, &q) {
            panic!("{i}: {p}\n{q}\n{e}");
        }
        let tree = explore_all(&sig, &psi, &q, 5, true);
        nodes += tree.nodes.len();
        for n in &tree.nodes {
            if let Err(e) = ck.check(&env, &psi, &n.state) {
                panic!("{p}\nreduct {}\n{e}", n.state);
            }
        }
    }
    assert!(nodes > 200);
}

#[test]
fn typed_assumptions_hold() {
    let gen = RhoAssumptionGen::new(1);
    let sig = RhoTypedSig;
    let report = run_assumptions(&sig, &RhoTyping, &gen, 300, 6, 11);
    assert!(report.passed(), "{}", report.render_text());
}
