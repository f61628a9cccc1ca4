//! Evaluation (`≫`) and reduction (`→`) relative to a global assertion,
//! runtime-error detection and bounded state-space exploration.

use std::collections::{HashMap, VecDeque};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::instance::{Lang, Signature, Subst};
use crate::nominal::Name;
use crate::syntax::{canonicalize, frame_assertion, refresh, subst_process, Path, Process};

/// Nesting bound on case/run/replication openings while searching for a
/// communication. Each replication is unfolded at most once per level.
const EXPOSE_BUDGET: u32 = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RedexKind {
    Com,
    CaseBranch,
    RunUnfold,
    ReplUnfold,
    StructStep,
    Wrong,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Payload<L: Lang> {
    None,
    Subst(Subst<L>),
    Branch(usize),
    Handle(Process<L>),
    Error(String),
}

/// A live redex. `position` addresses an unguarded atom of the state; for a
/// communication `partner` addresses the atom holding the other prefix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Redex<L: Lang> {
    pub kind: RedexKind,
    pub position: Path,
    pub partner: Option<Path>,
    pub payload: Payload<L>,
}

/// One successor of a `≫` or `→` step. `after` is canonical; the frames are
/// taken before canonicalisation so that bound names agree between them.
#[derive(Clone, Debug)]
pub struct Step<L: Lang> {
    pub rule: String,
    pub redex: Redex<L>,
    pub after: Process<L>,
    pub frame_before: L::Assertion,
    pub frame_after: L::Assertion,
}

struct Prenex<L: Lang> {
    binders: Vec<(Name, L::Type)>,
    atoms: Vec<(Path, Process<L>)>,
}

/// Splits an already refreshed process into its unguarded restrictions and
/// its unguarded atoms, remembering where each atom sits.
fn prenex<L: Lang>(p: &Process<L>) -> Prenex<L> {
    fn go<L: Lang>(p: &Process<L>, path: &mut Path, out: &mut Prenex<L>) {
        match p {
            Process::Nil => {}
            Process::Par(a, b) => {
                path.push(0);
                go(a, path, out);
                path.pop();
                path.push(1);
                go(b, path, out);
                path.pop();
            }
            Process::Restrict(x, t, q) => {
                out.binders.push((x.clone(), t.clone()));
                path.push(0);
                go(q, path, out);
                path.pop();
            }
            atom => out.atoms.push((path.clone(), atom.clone())),
        }
    }
    let mut out = Prenex { binders: Vec::new(), atoms: Vec::new() };
    go(p, &mut Vec::new(), &mut out);
    out
}

fn wrap<L: Lang>(binders: &[(Name, L::Type)], atoms: Vec<Process<L>>) -> Process<L> {
    binders
        .iter()
        .rev()
        .fold(Process::par_all(atoms), |acc, (x, t)| Process::restrict(x.clone(), t.clone(), acc))
}

/// The ambient assertion `Ψ ⊗ F_Ψ(p)`.
pub fn ambient_of<L: Lang>(sig: &dyn Signature<L>, psi: &L::Assertion, p: &Process<L>) -> L::Assertion {
    sig.compose(psi, &frame_assertion(sig, p))
}

// ---------------------------------------------------------------------------
// Evaluation

struct Opening<L: Lang> {
    binders: Vec<(Name, L::Type)>,
    atoms: Vec<Process<L>>,
    residual: Option<Process<L>>,
    rule: &'static str,
    payload: Payload<L>,
    kind: RedexKind,
}

/// Every single `≫` step available at the atom itself.
fn openings<L: Lang>(sig: &dyn Signature<L>, amb: &L::Assertion, atom: &Process<L>) -> Vec<Opening<L>> {
    let split = |q: &Process<L>| {
        let pre = prenex(&refresh(q));
        (pre.binders, pre.atoms.into_iter().map(|(_, a)| a).collect::<Vec<_>>())
    };
    match atom {
        Process::Case(bs) => bs
            .iter()
            .enumerate()
            .filter(|(_, (c, _))| sig.entails(amb, c))
            .map(|(i, (_, q))| {
                let (binders, atoms) = split(q);
                Opening { binders, atoms, residual: None, rule: "E-CASE", payload: Payload::Branch(i), kind: RedexKind::CaseBranch }
            })
            .collect(),
        Process::Run(m) => sig
            .handles(amb, m)
            .into_iter()
            .map(|h| {
                let (binders, atoms) = split(&h);
                Opening { binders, atoms, residual: None, rule: "E-RUN", payload: Payload::Handle(h), kind: RedexKind::RunUnfold }
            })
            .collect(),
        Process::Repl(q) => {
            let (binders, atoms) = split(q);
            vec![Opening {
                binders,
                atoms,
                residual: Some(atom.clone()),
                rule: "E-REP",
                payload: Payload::None,
                kind: RedexKind::ReplUnfold,
            }]
        }
        _ => vec![],
    }
}

/// All one-step `≫` successors of `p` under the global assertion `psi`.
/// Structural rewrites are folded into the canonical forms of the results.
pub fn eval_steps<L: Lang>(sig: &dyn Signature<L>, psi: &L::Assertion, p: &Process<L>) -> Vec<Step<L>> {
    let q = refresh(p);
    let frame_before = frame_assertion(sig, &q);
    let amb = sig.compose(psi, &frame_before);
    let pre = prenex(&q);
    let mut out = Vec::new();
    for (i, (path, atom)) in pre.atoms.iter().enumerate() {
        for op in openings(sig, &amb, atom) {
            let mut binders = pre.binders.clone();
            binders.extend(op.binders);
            let mut atoms: Vec<Process<L>> =
                pre.atoms.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, (_, a))| a.clone()).collect();
            atoms.extend(op.atoms);
            atoms.extend(op.residual);
            let raw = wrap(&binders, atoms);
            out.push(Step {
                rule: op.rule.to_string(),
                redex: Redex { kind: op.kind, position: path.clone(), partner: None, payload: op.payload },
                frame_after: frame_assertion(sig, &raw),
                frame_before: frame_before.clone(),
                after: canonicalize(&raw),
            });
        }
    }
    dedup_steps(out)
}

fn dedup_steps<L: Lang>(steps: Vec<Step<L>>) -> Vec<Step<L>> {
    let mut seen = HashMap::new();
    let mut out: Vec<Step<L>> = Vec::new();
    for s in steps {
        if !seen.contains_key(&s.after) {
            seen.insert(s.after.clone(), ());
            out.push(s);
        }
    }
    out.sort_by(|a, b| a.after.cmp(&b.after).then_with(|| a.rule.cmp(&b.rule)));
    out
}

// ---------------------------------------------------------------------------
// Reduction

/// Prefixes made available from one atom through zero or more `≫` steps,
/// together with whatever else those steps released.
#[derive(Clone)]
struct Exposure<L: Lang> {
    prefixes: Vec<Process<L>>,
    rest: Vec<Process<L>>,
    binders: Vec<(Name, L::Type)>,
    rules: Vec<&'static str>,
}

/// Exposures of one prefix (`singles`) and of two prefixes (`doubles`).
fn expose<L: Lang>(
    sig: &dyn Signature<L>,
    amb: &L::Assertion,
    atom: &Process<L>,
    budget: u32,
) -> (Vec<Exposure<L>>, Vec<Exposure<L>>) {
    if matches!(atom, Process::Output { .. } | Process::Input { .. }) {
        let e = Exposure { prefixes: vec![atom.clone()], rest: vec![], binders: vec![], rules: vec![] };
        return (vec![e], vec![]);
    }
    let mut singles = Vec::new();
    let mut doubles = Vec::new();
    if budget == 0 {
        return (singles, doubles);
    }
    for op in openings(sig, amb, atom) {
        let mut cands = op.atoms.clone();
        cands.extend(op.residual.clone());
        let exposed: Vec<_> = cands.iter().map(|c| expose(sig, amb, c, budget - 1)).collect();
        let others = |skip: &[usize]| -> Vec<Process<L>> {
            cands.iter().enumerate().filter(|(k, _)| !skip.contains(k)).map(|(_, c)| c.clone()).collect()
        };
        let lift = |parts: &[&Exposure<L>], skip: &[usize]| {
            let mut e = Exposure { prefixes: vec![], rest: others(skip), binders: op.binders.clone(), rules: vec![op.rule] };
            for part in parts {
                e.prefixes.extend(part.prefixes.iter().cloned());
                e.rest.extend(part.rest.iter().cloned());
                e.binders.extend(part.binders.iter().cloned());
                e.rules.extend(part.rules.iter().copied());
            }
            e
        };
        for (i, (s, d)) in exposed.iter().enumerate() {
            singles.extend(s.iter().map(|e| lift(&[e], &[i])));
            doubles.extend(d.iter().map(|e| lift(&[e], &[i])));
            for (j, (s2, _)) in exposed.iter().enumerate().skip(i + 1) {
                for e in s {
                    for f in s2 {
                        doubles.push(lift(&[e, f], &[i, j]));
                    }
                }
            }
        }
    }
    (singles, doubles)
}

fn try_com<L: Lang>(
    sig: &dyn Signature<L>,
    amb: &L::Assertion,
    out: &Process<L>,
    inp: &Process<L>,
) -> Option<(Process<L>, Process<L>, Subst<L>)> {
    let (Process::Output { subject: m, object: n, cont: p }, Process::Input { subject: k, binders, pattern, cont: q }) =
        (out, inp)
    else {
        return None;
    };
    if !sig.chan_eq(amb, m, k) {
        return None;
    }
    let names: Vec<Name> = binders.iter().map(|(x, _)| x.clone()).collect();
    let sigma = sig.match_pattern(pattern, &names, n)?;
    let q2 = subst_process(sig, q, &sigma);
    Some(((**p).clone(), q2, sigma))
}

/// All one-step `→` successors of `p` under the global assertion `psi`,
/// deduplicated by canonical form and sorted.
pub fn reduce_steps<L: Lang>(sig: &dyn Signature<L>, psi: &L::Assertion, p: &Process<L>) -> Vec<Step<L>> {
    let q = refresh(p);
    let frame_before = frame_assertion(sig, &q);
    let amb = sig.compose(psi, &frame_before);
    let pre = prenex(&q);
    let exposed: Vec<_> = pre.atoms.iter().map(|(_, a)| expose(sig, &amb, a, EXPOSE_BUDGET)).collect();

    let mut out = Vec::new();
    let mut emit = |parts: &[(&Exposure<L>, usize)], skip: &[usize]| {
        let mut prefixes = Vec::new();
        for (e, i) in parts {
            for pf in &e.prefixes {
                prefixes.push((pf, *i));
            }
        }
        let [(a, ia), (b, ib)] = prefixes[..] else { return };
        for ((o, io), (n, inn)) in [((a, ia), (b, ib)), ((b, ib), (a, ia))] {
            let Some((p_cont, q_cont, sigma)) = try_com(sig, &amb, o, n) else { continue };
            let mut binders = pre.binders.clone();
            let mut atoms: Vec<Process<L>> =
                pre.atoms.iter().enumerate().filter(|(j, _)| !skip.contains(j)).map(|(_, (_, x))| x.clone()).collect();
            let mut rules: Vec<&str> = Vec::new();
            for (e, _) in parts {
                binders.extend(e.binders.iter().cloned());
                atoms.extend(e.rest.iter().cloned());
                rules.extend(e.rules.iter().copied());
            }
            atoms.push(p_cont);
            atoms.push(q_cont);
            rules.push("R-COM");
            let raw = wrap(&binders, atoms);
            out.push(Step {
                rule: rules.join("+"),
                redex: Redex {
                    kind: RedexKind::Com,
                    position: pre.atoms[io].0.clone(),
                    partner: Some(pre.atoms[inn].0.clone()),
                    payload: Payload::Subst(sigma),
                },
                frame_after: frame_assertion(sig, &raw),
                frame_before: frame_before.clone(),
                after: canonicalize(&raw),
            });
        }
    };
    for (i, (s, d)) in exposed.iter().enumerate() {
        for e in d {
            emit(&[(e, i)], &[i]);
        }
        for (j, (s2, _)) in exposed.iter().enumerate().skip(i + 1) {
            for e in s {
                for f in s2 {
                    emit(&[(e, i), (f, j)], &[i, j]);
                }
            }
        }
    }
    dedup_steps(out)
}

/// Positions where the instance's error predicate fires, on the state
/// itself and on states reachable from it by a few evaluation steps.
pub fn wrong_states<L: Lang>(sig: &dyn Signature<L>, psi: &L::Assertion, p: &Process<L>) -> Vec<Redex<L>> {
    let mut out = Vec::new();
    let mut seen = HashMap::new();
    let mut frontier = vec![(canonicalize(p), true)];
    for _ in 0..=EXPOSE_BUDGET {
        let mut next = Vec::new();
        for (state, root) in frontier {
            if seen.insert(state.clone(), ()).is_some() {
                continue;
            }
            let q = refresh(&state);
            let amb = ambient_of(sig, psi, &q);
            for (path, atom) in prenex(&q).atoms {
                if let Some(msg) = sig.wrong(&amb, &atom) {
                    let position = if root { path } else { Vec::new() };
                    let r = Redex { kind: RedexKind::Wrong, position, partner: None, payload: Payload::Error(msg) };
                    if !out.contains(&r) {
                        out.push(r);
                    }
                }
            }
            next.extend(eval_steps(sig, psi, &state).into_iter().map(|s| (s.after, false)));
        }
        frontier = next;
    }
    out
}

/// Every live redex of `p`: evaluation openings, communications and errors.
pub fn redexes<L: Lang>(sig: &dyn Signature<L>, psi: &L::Assertion, p: &Process<L>) -> Vec<Redex<L>> {
    let mut out: Vec<Redex<L>> = eval_steps(sig, psi, p).into_iter().map(|s| s.redex).collect();
    out.extend(reduce_steps(sig, psi, p).into_iter().map(|s| s.redex));
    out.extend(wrong_states(sig, psi, p));
    out
}

// ---------------------------------------------------------------------------
// Exploration

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Strategy {
    /// Breadth-first tree of all distinct canonical states.
    All,
    /// A single trace choosing uniformly among successors.
    Random(u64),
    /// A single trace always taking the least successor.
    First,
}

#[derive(Clone, Debug)]
pub struct TreeNode<L: Lang> {
    pub state: Process<L>,
    pub depth: usize,
    /// Edges as (child node index, rule).
    pub children: Vec<(usize, String)>,
    /// Set when the node sits at the depth bound and still has successors.
    pub depth_exceeded: bool,
    pub wrong: Vec<Redex<L>>,
}

#[derive(Clone, Debug)]
pub struct ReductionTree<L: Lang> {
    pub nodes: Vec<TreeNode<L>>,
}

impl<L: Lang> ReductionTree<L> {
    pub fn root(&self) -> &TreeNode<L> {
        &self.nodes[0]
    }

    pub fn contains(&self, p: &Process<L>) -> bool {
        let c = canonicalize(p);
        self.nodes.iter().any(|n| n.state == c)
    }

    pub fn any_wrong(&self) -> bool {
        self.nodes.iter().any(|n| !n.wrong.is_empty())
    }
}

#[derive(Clone, Debug)]
pub struct TraceStep<L: Lang> {
    pub index: usize,
    pub rule: String,
    /// `Ψ ⊗ F_Ψ(after)`, in the bound-name space of `after`.
    pub ambient: L::Assertion,
    pub before: Process<L>,
    pub after: Process<L>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TraceEnd {
    /// No further reduction.
    Terminal,
    DepthExceeded,
    Wrong(String),
}

#[derive(Clone, Debug)]
pub struct Trace<L: Lang> {
    pub initial: Process<L>,
    pub initial_ambient: L::Assertion,
    pub steps: Vec<TraceStep<L>>,
    pub end: TraceEnd,
}

#[derive(Clone, Debug)]
pub enum Exploration<L: Lang> {
    Tree(ReductionTree<L>),
    Trace(Trace<L>),
}

/// Bounded exploration of `→` from `p`. With `detect_wrong` every visited
/// state is also checked with the instance's error predicate.
pub fn explore<L: Lang>(
    sig: &dyn Signature<L>,
    psi: &L::Assertion,
    p: &Process<L>,
    max_depth: usize,
    strategy: Strategy,
    detect_wrong: bool,
) -> Exploration<L> {
    match strategy {
        Strategy::All => Exploration::Tree(explore_all(sig, psi, p, max_depth, detect_wrong)),
        Strategy::First => Exploration::Trace(run_trace(sig, psi, p, max_depth, None, detect_wrong)),
        Strategy::Random(seed) => Exploration::Trace(run_trace(sig, psi, p, max_depth, Some(seed), detect_wrong)),
    }
}

pub fn explore_all<L: Lang>(
    sig: &dyn Signature<L>,
    psi: &L::Assertion,
    p: &Process<L>,
    max_depth: usize,
    detect_wrong: bool,
) -> ReductionTree<L> {
    let root = canonicalize(p);
    let mut index: HashMap<Process<L>, usize> = HashMap::new();
    let mut nodes = vec![TreeNode { state: root.clone(), depth: 0, children: vec![], depth_exceeded: false, wrong: vec![] }];
    index.insert(root, 0);
    let mut queue = VecDeque::from([0usize]);
    while let Some(i) = queue.pop_front() {
        let state = nodes[i].state.clone();
        let depth = nodes[i].depth;
        if detect_wrong {
            nodes[i].wrong = wrong_states(sig, psi, &state);
        }
        let steps = reduce_steps(sig, psi, &state);
        if depth >= max_depth {
            nodes[i].depth_exceeded = !steps.is_empty();
            continue;
        }
        for s in steps {
            let j = match index.get(&s.after) {
                Some(&j) => j,
                None => {
                    let j = nodes.len();
                    nodes.push(TreeNode { state: s.after.clone(), depth: depth + 1, children: vec![], depth_exceeded: false, wrong: vec![] });
                    index.insert(s.after.clone(), j);
                    queue.push_back(j);
                    j
                }
            };
            nodes[i].children.push((j, s.rule));
        }
    }
    ReductionTree { nodes }
}

/// A single trace. `seed` selects random choice; `None` takes the first
/// successor in canonical order.
pub fn run_trace<L: Lang>(
    sig: &dyn Signature<L>,
    psi: &L::Assertion,
    p: &Process<L>,
    max_steps: usize,
    seed: Option<u64>,
    detect_wrong: bool,
) -> Trace<L> {
    let mut rng = seed.map(ChaCha8Rng::seed_from_u64);
    let initial = canonicalize(p);
    let initial_ambient = ambient_of(sig, psi, &initial);
    let mut state = initial.clone();
    let mut steps = Vec::new();
    let end = loop {
        if detect_wrong {
            if let Some(r) = wrong_states(sig, psi, &state).into_iter().next() {
                let msg = match r.payload {
                    Payload::Error(m) => m,
                    _ => String::new(),
                };
                break TraceEnd::Wrong(msg);
            }
        }
        let succ = reduce_steps(sig, psi, &state);
        if succ.is_empty() {
            break TraceEnd::Terminal;
        }
        if steps.len() >= max_steps {
            break TraceEnd::DepthExceeded;
        }
        let chosen = match rng.as_mut() {
            Some(r) => succ.choose(r).expect("non-empty").clone(),
            None => succ[0].clone(),
        };
        steps.push(TraceStep {
            index: steps.len() + 1,
            rule: chosen.rule,
            ambient: ambient_of(sig, psi, &chosen.after),
            before: state,
            after: chosen.after.clone(),
        });
        state = chosen.after;
    };
    Trace { initial, initial_ambient, steps, end }
}

impl<L: Lang> Trace<L> {
    pub fn final_state(&self) -> &Process<L> {
        self.steps.last().map(|s| &s.after).unwrap_or(&self.initial)
    }

    /// One tab-separated line per state: index, rule, ambient, process.
    pub fn render_text(&self) -> String {
        let mut out = format!("0\tINIT\t{}\t{}\n", self.initial_ambient, self.initial);
        for s in &self.steps {
            out.push_str(&format!("{}\t{}\t{}\t{}\n", s.index, s.rule, s.ambient, s.after));
        }
        match &self.end {
            TraceEnd::Terminal => {}
            TraceEnd::DepthExceeded => out.push_str("# depth exceeded\n"),
            TraceEnd::Wrong(m) => out.push_str(&format!("# WRONG: {m}\n")),
        }
        out
    }

    pub fn render_json(&self) -> serde_json::Value {
        let mut steps = vec![serde_json::json!({
            "step": 0,
            "rule": "INIT",
            "ambient": self.initial_ambient.to_string(),
            "process": self.initial.to_string(),
        })];
        for s in &self.steps {
            steps.push(serde_json::json!({
                "step": s.index,
                "rule": s.rule,
                "ambient": s.ambient.to_string(),
                "process": s.after.to_string(),
            }));
        }
        let end = match &self.end {
            TraceEnd::Terminal => serde_json::json!("terminal"),
            TraceEnd::DepthExceeded => serde_json::json!("depth_exceeded"),
            TraceEnd::Wrong(m) => serde_json::json!({ "wrong": m }),
        };
        serde_json::json!({ "steps": steps, "end": end })
    }
}
