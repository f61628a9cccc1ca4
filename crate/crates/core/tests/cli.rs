use std::path::PathBuf;
use std::process::Command;

use hopsi::cli::{cmd_assumptions, cmd_run, parse_source, Instance, Program, RunConfig, StrategyArg, TraceFormat};
use hopsi::instances::hopi::gen::{well_typed_candidate, Sorting};
use hopsi::instances::hopi::{HopiTerm, HopiType};
use hopsi::instances::hopi2::gen::{unconstrained, Channels};
use hopsi::instances::rho::gen::{typed, untyped};
use hopsi::syntax::Process;
use hopsi::typing::TypeEnv;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

fn hopsi(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_hopsi")).args(args).env_remove("HOPSI_SEED").output().expect("binary runs");
    (out.status.code().expect("exit code"), String::from_utf8(out.stdout).expect("utf-8"))
}

fn path(name: &str) -> String {
    data(name).display().to_string()
}

#[test]
fn parses_nil() {
    let p = parse_source("0", Some(Instance::Hopi)).unwrap();
    assert!(matches!(p, Program::Hopi { body: Process::Nil, .. }));
}

#[test]
fn parses_output_and_input() {
    let p = parse_source("'a<b>.0 | a(\\x:drop())x.0", Some(Instance::Hopi)).unwrap();
    let Program::Hopi { body: Process::Par(l, r), .. } = p else { panic!("not a parallel composition") };
    let Process::Output { subject: HopiTerm::Name(a), object: HopiTerm::Name(b), cont } = *l else { panic!("not an output") };
    assert_eq!((a.hint(), b.hint()), ("a", "b"));
    assert!(cont.is_nil());
    let Process::Input { subject: HopiTerm::Name(a2), binders, pattern: HopiTerm::Name(x2), cont } = *r else {
        panic!("not an input")
    };
    assert_eq!(a2, a);
    assert_eq!(binders, vec![(x2, HopiType::Drop(TypeEnv::new()))]);
    assert!(cont.is_nil());
}

#[test]
fn lone_case_is_a_parse_error() {
    let e = parse_source("case", Some(Instance::Hopi)).unwrap_err();
    assert_eq!((e.line, e.col), (1, 5));
}

#[test]
fn parse_errors_carry_positions() {
    let e = parse_source("instance rho\n0 |\n  @0!(0", None).unwrap_err();
    assert_eq!(e.line, 3);
    let e = parse_source("instance hopi\ntype a : chan(drop())\n0", None).unwrap_err();
    assert_eq!((e.line, e.col), (2, 10));
    assert!(parse_source("0", None).is_err());
    assert!(parse_source("instance rho\n0", Some(Instance::Hopi)).is_err());
}

#[test]
fn golden_exit_codes() {
    let cases: &[(&[&str], i32)] = &[
        (&["check", &path("counterexample.hopi")], 1),
        (&["check", &path("mobility.hopi")], 0),
        (&["check", &path("normal_form.hopi")], 0),
        (&["check", &path("bad_case.hopi")], 2),
        (&["check", &path("levels.hopi2")], 0),
        (&["check", &path("omega.hopi2")], 1),
        (&["check", &path("typed.rho")], 0),
        (&["check", &path("drop.rho")], 0),
        (&["run", &path("counterexample.hopi"), "--detect-wrong"], 3),
        (&["run", &path("counterexample.hopi")], 0),
        (&["run", &path("mobility.hopi"), "--strategy", "all"], 0),
        (&["run", &path("levels.hopi2"), "--strategy", "random", "--seed", "4"], 0),
        (&["encode", &path("comm.rho")], 0),
        (&["encode", &path("typed.rho"), "--typed"], 0),
        (&["encode", &path("comm.rho"), "--typed"], 1),
        (&["eq", &path("drop.rho"), &path("drop.rho"), "--relation", "nameeq"], 0),
        (&["eq", &path("drop.rho"), &path("comm.rho"), "--relation", "structcong"], 4),
        (&["assumptions", "--instance", "hopi2", "--trials", "20"], 0),
    ];
    for (args, code) in cases {
        let (got, out) = hopsi(args);
        assert_eq!(got, *code, "{args:?}\n{out}");
    }
}

#[test]
fn run_on_a_normal_form_prints_an_empty_trace() {
    let (code, out) = hopsi(&["run", &path("normal_form.hopi"), "--strategy", "first"]);
    assert_eq!(code, 0);
    assert_eq!(out.lines().count(), 1, "{out}");
    assert!(out.starts_with("0\tINIT\t"));
}

#[test]
fn encode_of_a_free_drop_is_nil() {
    assert_eq!(hopsi(&["encode", &path("drop.rho")]), (0, "0\n".to_string()));
}

#[test]
fn counterexample_reaches_wrong() {
    let (code, out) = hopsi(&["run", &path("counterexample.hopi"), "--detect-wrong"]);
    assert_eq!(code, 3);
    assert!(out.contains("# WRONG"), "{out}");
}

#[test]
fn seed_from_the_environment_wins() {
    let file = path("levels.hopi2");
    let with_flag = hopsi(&["run", &file, "--strategy", "random", "--seed", "9", "--trace", "json"]);
    let out = Command::new(env!("CARGO_BIN_EXE_hopsi"))
        .args(["run", &file, "--strategy", "random", "--seed", "1", "--trace", "json"])
        .env("HOPSI_SEED", "9")
        .output()
        .unwrap();
    assert_eq!(String::from_utf8(out.stdout).unwrap(), with_flag.1);
}

#[test]
fn identical_seeds_give_identical_output() {
    for args in [
        vec!["run", "PATH", "--strategy", "random", "--seed", "17"],
        vec!["run", "PATH", "--strategy", "all", "--trace", "json"],
    ] {
        for file in ["mobility.hopi", "levels.hopi2", "typed.rho"] {
            let p = path(file);
            let args: Vec<&str> = args.iter().map(|a| if *a == "PATH" { p.as_str() } else { a }).collect();
            assert_eq!(hopsi(&args), hopsi(&args));
        }
    }
    let a = cmd_assumptions(Instance::RhoTyped, 30, 5, 3, true);
    let b = cmd_assumptions(Instance::RhoTyped, 30, 5, 3, true);
    assert_eq!(a, b);
}

#[test]
fn json_trace_is_valid_json() {
    let src = std::fs::read_to_string(data("mobility.hopi")).unwrap();
    let program = parse_source(&src, None).unwrap();
    let cfg = RunConfig { trace: TraceFormat::Json, strategy: StrategyArg::All, ..RunConfig::default() };
    let out = cmd_run(&program, &cfg);
    let v: serde_json::Value = serde_json::from_str(&out.stdout).unwrap();
    assert_eq!(v["nodes"].as_array().unwrap().len(), 2);
}

fn round_trip(program: &Program) {
    let printed = program.to_string();
    let reparsed = parse_source(&printed, None).unwrap_or_else(|e| panic!("{e}\n{printed}"));
    assert_eq!(reparsed.to_string(), printed);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn hopi_round_trip(seed in any::<u64>(), size in 1usize..9) {
        let sorting = Sorting::new();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let body = well_typed_candidate(&mut rng, &sorting, size);
        round_trip(&Program::Hopi { env: sorting.top(), assertion: None, body });
    }

    #[test]
    fn hopi2_round_trip(seed in any::<u64>(), size in 1usize..9) {
        let ch = Channels::new();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let body = unconstrained(&mut rng, &ch, size);
        round_trip(&Program::Hopi2 { env: ch.env(), body });
    }

    #[test]
    fn rho_round_trip_is_exact(seed in any::<u64>(), size in 1usize..9) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let body = untyped(&mut rng, size);
        let printed = Program::Rho { body: body.clone() }.to_string();
        prop_assert_eq!(parse_source(&printed, None).unwrap(), Program::Rho { body });
        let body = typed(&mut rng, size);
        let program = Program::RhoTyped { declared: vec![], body };
        prop_assert_eq!(parse_source(&program.to_string(), None).unwrap(), program);
    }
}
