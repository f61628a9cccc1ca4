use hopsi::instances::hopi::gen::{well_typed_candidate, HopiAssumptionGen, Sorting};
use hopsi::instances::hopi::{HopiAssertion, HopiSig, HopiTyping};
use hopsi::semantics::explore_all;
use hopsi::typing::harness::run_assumptions;
use hopsi::typing::Checker;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn generated_processes_are_mostly_well_typed_and_preserve_types() {
    let sorting = Sorting::new();
    let env = sorting.top();
    let psi = HopiAssertion::empty();
    let ck = Checker::new(&HopiSig, &HopiTyping);
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut typed = 0;
    let mut states = 0;
    for i in 0..300 {
        let p = well_typed_candidate(&mut rng, &sorting, 1 + i % 8);
        match ck.check(&env, &psi, &p) {
            Ok(()) => typed += 1,
            Err(_) => continue,
        }
        let tree = explore_all(&HopiSig, &psi, &p, 5, true);
        states += tree.nodes.len();
        assert!(!tree.any_wrong(), "{p}");
        for n in &tree.nodes {
            if let Err(e) = ck.check(&env, &psi, &n.state) {
                panic!("{p}\n ~> {}\n {e}", n.state);
            }
        }
    }
    assert!(typed >= 200);
    assert!(states > typed);
}

#[test]
fn assumptions_hold() {
    let report = run_assumptions(&HopiSig, &HopiTyping, &HopiAssumptionGen::default(), 300, 6, 1);
    assert!(report.passed(), "{}", report.render_text());
}
