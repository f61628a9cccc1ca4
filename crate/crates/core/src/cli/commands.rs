//! The five commands.

use serde_json::json;

use super::source::{Instance, Program};
use super::{Outcome, EXIT_COUNTEREXAMPLE, EXIT_OK, EXIT_PARSE_ERROR, EXIT_TYPE_ERROR, EXIT_WRONG};
use crate::instance::{Lang, Signature};
use crate::instances::hopi::gen::HopiAssumptionGen;
use crate::instances::hopi::{HopiSig, HopiTyping};
use crate::instances::hopi2::gen::Hopi2AssumptionGen;
use crate::instances::hopi2::{embed, infer_level, Hopi2Sig, Hopi2Typing};
use crate::instances::rho::encode::{encode_typed, RhoAssertion};
use crate::instances::rho::gen::RhoAssumptionGen;
use crate::instances::rho::{encode, encode_name, name_eq, struct_congruent, RhoName, RhoSig, RhoTypedSig, RhoTyping};
use crate::semantics::{explore, Exploration, Payload, ReductionTree, Strategy};
use crate::syntax::{struct_eq, Process};
use crate::typing::harness::{run_assumptions, AssumptionReport};
use crate::typing::{Checker, TypeEnv};

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum StrategyArg {
    All,
    Random,
    First,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum TraceFormat {
    Text,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Relation {
    Nameeq,
    Structcong,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RunConfig {
    pub max_steps: usize,
    pub strategy: StrategyArg,
    pub seed: u64,
    pub trace: TraceFormat,
    pub detect_wrong: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig { max_steps: 20, strategy: StrategyArg::First, seed: 0, trace: TraceFormat::Text, detect_wrong: false }
    }
}

impl RunConfig {
    fn strategy(&self) -> Strategy {
        match self.strategy {
            StrategyArg::All => Strategy::All,
            StrategyArg::Random => Strategy::Random(self.seed),
            StrategyArg::First => Strategy::First,
        }
    }
}

fn rho_preamble(declared: &[(RhoName, crate::instances::rho::RhoType)]) -> RhoAssertion {
    RhoAssertion(declared.iter().map(|(x, t)| (encode_name(x), t.clone())).collect())
}

fn with_assertion<L: Lang>(body: &Process<L>, a: Option<&L::Assertion>) -> Process<L> {
    match a {
        Some(a) => Process::par(body.clone(), Process::Assert(a.clone())),
        None => body.clone(),
    }
}

fn report(json: bool, ok: bool, code: i32, text: String, extra: serde_json::Value) -> Outcome {
    if json {
        let mut v = json!({ "ok": ok, "message": text });
        if let (Some(obj), serde_json::Value::Object(more)) = (v.as_object_mut(), extra) {
            obj.extend(more);
        }
        Outcome::new(code, format!("{v}\n"))
    } else {
        Outcome::new(code, format!("{text}\n"))
    }
}

/// `check`: exit 0 when well typed, 1 otherwise.
pub fn cmd_check(program: &Program, json: bool) -> Outcome {
    let verdict: Result<String, String> = match program {
        Program::Hopi { env, assertion, body } => {
            let ck = Checker::new(&HopiSig, &HopiTyping);
            let q = with_assertion(body, assertion.as_ref());
            ck.check(env, &HopiSig.unit(), &q).map(|()| "well-typed".to_string()).map_err(|e| e.to_string())
        }
        Program::Hopi2 { env, body } => infer_level(env, body).map(|n| format!("well-typed at level {n}")).map_err(|e| e.to_string()),
        Program::Rho { .. } => Ok("untyped instance: every process is accepted".to_string()),
        Program::RhoTyped { declared, body } => match encode_typed(body) {
            Err(e) => Err(e.to_string()),
            Ok(enc) => {
                let ck = Checker::new(&RhoTypedSig, &RhoTyping);
                let q = Process::par(enc, Process::Assert(rho_preamble(declared)));
                ck.check(&TypeEnv::new(), &RhoTypedSig.unit(), &q).map(|()| "well-typed".to_string()).map_err(|e| e.to_string())
            }
        },
    };
    let instance = program.instance().tag();
    match verdict {
        Ok(msg) => report(json, true, EXIT_OK, msg, json!({ "instance": instance })),
        Err(e) => report(json, false, EXIT_TYPE_ERROR, format!("type error: {e}"), json!({ "instance": instance })),
    }
}

/// `run`: explores the reductions of the program. Exit 3 when a WRONG
/// state is reached and detection is on.
pub fn cmd_run(program: &Program, cfg: &RunConfig) -> Outcome {
    match program {
        Program::Hopi { assertion, body, .. } => run_generic(&HopiSig, &with_assertion(body, assertion.as_ref()), cfg),
        Program::Hopi2 { env, body } => match embed(env, body) {
            Ok(q) => run_generic(&Hopi2Sig, &q, cfg),
            Err(e) => Outcome::new(EXIT_TYPE_ERROR, format!("cannot embed: {e}\n")),
        },
        Program::Rho { body } => run_generic(&RhoSig, &encode(body), cfg),
        Program::RhoTyped { declared, body } => match encode_typed(body) {
            Ok(enc) => run_generic(&RhoTypedSig, &Process::par(enc, Process::Assert(rho_preamble(declared))), cfg),
            Err(e) => Outcome::new(EXIT_TYPE_ERROR, format!("cannot encode: {e}\n")),
        },
    }
}

fn run_generic<L: Lang>(sig: &dyn Signature<L>, p: &Process<L>, cfg: &RunConfig) -> Outcome {
    let psi = sig.unit();
    match explore(sig, &psi, p, cfg.max_steps, cfg.strategy(), cfg.detect_wrong) {
        Exploration::Trace(t) => {
            let wrong = matches!(t.end, crate::semantics::TraceEnd::Wrong(_));
            let code = if wrong { EXIT_WRONG } else { EXIT_OK };
            match cfg.trace {
                TraceFormat::Text => Outcome::new(code, t.render_text()),
                TraceFormat::Json => Outcome::new(code, format!("{}\n", t.render_json())),
            }
        }
        Exploration::Tree(tree) => {
            let code = if tree.any_wrong() { EXIT_WRONG } else { EXIT_OK };
            match cfg.trace {
                TraceFormat::Text => Outcome::new(code, render_tree_text(&tree)),
                TraceFormat::Json => Outcome::new(code, format!("{}\n", render_tree_json(&tree))),
            }
        }
    }
}

fn wrong_messages<L: Lang>(tree: &ReductionTree<L>, i: usize) -> Vec<String> {
    tree.nodes[i]
        .wrong
        .iter()
        .map(|r| match &r.payload {
            Payload::Error(m) => m.clone(),
            _ => format!("{:?}", r.kind),
        })
        .collect()
}

/// One line per node: index, depth, edges `child:rule`, state.
pub fn render_tree_text<L: Lang>(tree: &ReductionTree<L>) -> String {
    let mut out = String::new();
    for (i, n) in tree.nodes.iter().enumerate() {
        let edges: Vec<String> = n.children.iter().map(|(j, r)| format!("{j}:{r}")).collect();
        let edges = if edges.is_empty() { "-".to_string() } else { edges.join(",") };
        out.push_str(&format!("{i}\t{}\t{edges}\t{}\n", n.depth, n.state));
        if n.depth_exceeded {
            out.push_str(&format!("# depth bound at {i}\n"));
        }
        for m in wrong_messages(tree, i) {
            out.push_str(&format!("# WRONG at {i}: {m}\n"));
        }
    }
    out
}

pub fn render_tree_json<L: Lang>(tree: &ReductionTree<L>) -> serde_json::Value {
    let nodes: Vec<_> = tree
        .nodes
        .iter()
        .enumerate()
        .map(|(i, n)| {
            json!({
                "node": i,
                "depth": n.depth,
                "process": n.state.to_string(),
                "children": n.children.iter().map(|(j, r)| json!({ "node": j, "rule": r })).collect::<Vec<_>>(),
                "depth_exceeded": n.depth_exceeded,
                "wrong": wrong_messages(tree, i),
            })
        })
        .collect();
    json!({ "nodes": nodes })
}

/// `encode`: prints the translation of a ρ program.
pub fn cmd_encode(program: &Program, typed: bool) -> Outcome {
    let body = match program {
        Program::Rho { body } | Program::RhoTyped { body, .. } => body,
        other => return Outcome::new(EXIT_PARSE_ERROR, format!("encode expects a rho program, got {}\n", other.instance())),
    };
    if !typed {
        return Outcome::new(EXIT_OK, format!("{}\n", encode(body)));
    }
    match encode_typed(body) {
        Ok(enc) => {
            let enc = match program {
                Program::RhoTyped { declared, .. } if !declared.is_empty() => {
                    Process::par(enc, Process::Assert(rho_preamble(declared)))
                }
                _ => enc,
            };
            Outcome::new(EXIT_OK, format!("{enc}\n"))
        }
        Err(e) => Outcome::new(EXIT_TYPE_ERROR, format!("cannot encode: {e}\n")),
    }
}

/// Runs the assumption harness of a typed instance. Exit 4 on any
/// counterexample.
pub fn assumption_report(instance: Instance, trials: usize, max_size: usize, seed: u64) -> Option<AssumptionReport> {
    Some(match instance {
        Instance::Hopi => run_assumptions(&HopiSig, &HopiTyping, &HopiAssumptionGen::default(), trials, max_size, seed),
        Instance::Hopi2 => run_assumptions(&Hopi2Sig, &Hopi2Typing, &Hopi2AssumptionGen::default(), trials, max_size, seed),
        Instance::RhoTyped => run_assumptions(&RhoTypedSig, &RhoTyping, &RhoAssumptionGen::new(seed), trials, max_size, seed),
        Instance::Rho => return None,
    })
}

pub fn cmd_assumptions(instance: Instance, trials: usize, max_size: usize, seed: u64, json: bool) -> Outcome {
    let Some(report) = assumption_report(instance, trials, max_size, seed) else {
        return Outcome::new(EXIT_PARSE_ERROR, "the untyped rho instance has no type system; use rho-typed\n");
    };
    let code = if report.passed() { EXIT_OK } else { EXIT_COUNTEREXAMPLE };
    if json {
        let text = serde_json::to_string_pretty(&report).expect("reports serialise");
        Outcome::new(code, format!("{text}\n"))
    } else {
        Outcome::new(code, report.render_text())
    }
}

/// `eq`: exit 0 when the two programs are related, 4 when they are not.
pub fn cmd_eq(a: &Program, b: &Program, relation: Relation, json: bool) -> Outcome {
    let related = match (relation, a, b) {
        (Relation::Nameeq, Program::Rho { body: p } | Program::RhoTyped { body: p, .. }, Program::Rho { body: q } | Program::RhoTyped { body: q, .. }) => {
            Ok(name_eq(&RhoName::quote(p.erase()), &RhoName::quote(q.erase())))
        }
        (Relation::Nameeq, ..) => Err("nameeq compares the quotes of two rho programs".to_string()),
        (Relation::Structcong, Program::Rho { body: p } | Program::RhoTyped { body: p, .. }, Program::Rho { body: q } | Program::RhoTyped { body: q, .. }) => {
            Ok(struct_congruent(p, q))
        }
        (Relation::Structcong, Program::Hopi { body: p, .. }, Program::Hopi { body: q, .. }) => Ok(struct_eq(p, q)),
        (Relation::Structcong, Program::Hopi2 { env: e1, body: p }, Program::Hopi2 { env: e2, body: q }) => {
            match (embed(e1, p), embed(e2, q)) {
                (Ok(p), Ok(q)) => Ok(struct_eq(&p, &q)),
                (Err(e), _) | (_, Err(e)) => Err(format!("cannot embed: {e}")),
            }
        }
        _ => Err(format!("cannot compare a {} program with a {} program", a.instance(), b.instance())),
    };
    match related {
        Ok(true) => report(json, true, EXIT_OK, "equivalent".into(), json!({})),
        Ok(false) => report(json, false, EXIT_COUNTEREXAMPLE, "not equivalent".into(), json!({})),
        Err(e) => report(json, false, EXIT_PARSE_ERROR, e, json!({})),
    }
}
