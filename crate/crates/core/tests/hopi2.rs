use hopsi::instances::hopi2::gen::{omega, unconstrained, well_typed, Channels, Hopi2AssumptionGen};
use hopsi::instances::hopi2::{embed, infer_level, termination_probe, Hopi2Assertion, Hopi2Sig, Hopi2Typing, LevelError, Termination};
use hopsi::typing::harness::run_assumptions;
use hopsi::typing::Checker;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn agreement_with_direct_levels() {
    let ch = Channels::new();
    let env = ch.env();
    let ck = Checker::new(&Hopi2Sig, &Hopi2Typing).with_run_policy(hopsi::typing::RunPolicy::Lenient);
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let (mut ok, mut bad) = (0, 0);
    for i in 0..400 {
        let p = unconstrained(&mut rng, &ch, 1 + i % 8);
        let direct = infer_level(&env, &p);
        let q = embed(&env, &p).unwrap();
        for n in 0..5 {
            let emb = ck.check(&env, &Hopi2Assertion::Plain(n), &q).is_ok();
            let want = matches!(direct, Ok(m) if m <= n);
            assert_eq!(emb, want, "{p} at {n}: direct {direct:?}");
        }
        if direct.is_ok() { ok += 1 } else { bad += 1 }
    }
    assert!(ok > 0 && bad > 0, "ok {ok} bad {bad}");
}

#[test]
fn termination() {
    let ch = Channels::new();
    let env = ch.env();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut depths = vec![];
    for i in 0..50 {
        let p = well_typed(&mut rng, &ch, 4 + i % 5);
        match termination_probe(&env, &p, 10_000).unwrap() {
            Termination::Terminated(d) => depths.push(d),
            other => panic!("{p}: {other:?}"),
        }
    }
    assert_eq!(depths.len(), 50);
    let a = &ch.channels[1].0;
    assert!(matches!(infer_level(&env, &omega(a)), Err(LevelError::LevelViolation { .. })));
}

#[test]
fn assumptions_hold() {
    let report = run_assumptions(&Hopi2Sig, &Hopi2Typing, &Hopi2AssumptionGen::default(), 300, 6, 1);
    assert!(report.passed(), "{}", report.render_text());
}
