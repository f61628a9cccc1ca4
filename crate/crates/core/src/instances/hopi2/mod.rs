//! HOπ₂ with the level-based termination type system: a direct level checker
//! and an embedding into the generic calculus with tagged level assertions.
//!
//! A channel of level `k` carries only processes of level below `k`, and
//! sending on it raises the level of the sender to at least `k`.

pub mod embed;
pub mod gen;

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;

use crate::instance::Signature;
use crate::nominal::{Name, Nominal, Transposition};
use crate::semantics::reduce_steps;
use crate::syntax::{canonicalize, Process};
use crate::typing::TypeEnv;

pub use embed::{embed, Hopi2, Hopi2Assertion, Hopi2Condition, Hopi2Sig, Hopi2Term, Hopi2Typing};

/// Types of the level system.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Hopi2Type {
    /// A process level `n`.
    Level(u32),
    /// `ch⁻ᵏ(⋄)`: an input use.
    ChIn(u32),
    /// `ch₊ᵏ(⋄)`: an output use.
    ChOut(u32),
    /// `chᵏ(⋄)`
    Ch(u32),
}

impl Hopi2Type {
    /// The level `k` of a channel type.
    pub fn channel_level(&self) -> Option<u32> {
        match self {
            Hopi2Type::Ch(k) | Hopi2Type::ChIn(k) | Hopi2Type::ChOut(k) => Some(*k),
            Hopi2Type::Level(_) => None,
        }
    }
}

impl Nominal for Hopi2Type {
    fn support_into(&self, _acc: &mut BTreeSet<Name>) {}

    fn swap(&self, _t: &Transposition) -> Self {
        self.clone()
    }
}

impl crate::instance::Data for Hopi2Type {}

impl fmt::Display for Hopi2Type {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Hopi2Type::Level(n) => write!(f, "{n}"),
            Hopi2Type::ChIn(k) => write!(f, "ch-^{k}"),
            Hopi2Type::ChOut(k) => write!(f, "ch+^{k}"),
            Hopi2Type::Ch(k) => write!(f, "ch^{k}"),
        }
    }
}

/// HOπ₂ processes: only processes are communicated.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Hopi2Process {
    Nil,
    /// `a(X).P`
    In(Name, Name, Box<Hopi2Process>),
    /// `ā⟨Q⟩.P`
    Out(Name, Box<Hopi2Process>, Box<Hopi2Process>),
    Par(Box<Hopi2Process>, Box<Hopi2Process>),
    /// `(νa:T)P`
    Restrict(Name, Hopi2Type, Box<Hopi2Process>),
    /// A process variable.
    Var(Name),
}

impl Hopi2Process {
    pub fn input(a: Name, x: Name, body: Hopi2Process) -> Self {
        Hopi2Process::In(a, x, Box::new(body))
    }

    pub fn output(a: Name, payload: Hopi2Process, cont: Hopi2Process) -> Self {
        Hopi2Process::Out(a, Box::new(payload), Box::new(cont))
    }

    pub fn par(p: Hopi2Process, q: Hopi2Process) -> Self {
        Hopi2Process::Par(Box::new(p), Box::new(q))
    }

    pub fn restrict(a: Name, t: Hopi2Type, body: Hopi2Process) -> Self {
        Hopi2Process::Restrict(a, t, Box::new(body))
    }

    pub fn size(&self) -> usize {
        match self {
            Hopi2Process::Nil | Hopi2Process::Var(_) => 1,
            Hopi2Process::In(_, _, p) | Hopi2Process::Restrict(_, _, p) => 1 + p.size(),
            Hopi2Process::Out(_, q, p) | Hopi2Process::Par(q, p) => 1 + q.size() + p.size(),
        }
    }

    /// Free channel names and free variables.
    pub fn free_names(&self) -> BTreeSet<Name> {
        let mut acc = BTreeSet::new();
        self.free_into(&mut acc);
        acc
    }

    fn free_into(&self, acc: &mut BTreeSet<Name>) {
        match self {
            Hopi2Process::Nil => {}
            Hopi2Process::Var(x) => {
                acc.insert(x.clone());
            }
            Hopi2Process::In(a, x, p) => {
                let mut inner = BTreeSet::new();
                p.free_into(&mut inner);
                inner.remove(x);
                acc.insert(a.clone());
                acc.extend(inner);
            }
            Hopi2Process::Out(a, q, p) => {
                acc.insert(a.clone());
                q.free_into(acc);
                p.free_into(acc);
            }
            Hopi2Process::Par(p, q) => {
                p.free_into(acc);
                q.free_into(acc);
            }
            Hopi2Process::Restrict(a, _, p) => {
                let mut inner = BTreeSet::new();
                p.free_into(&mut inner);
                inner.remove(a);
                acc.extend(inner);
            }
        }
    }
}

impl fmt::Display for Hopi2Process {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Hopi2Process::Par(p, q) => {
                fmt_atom(p, f)?;
                write!(f, " | {q}")
            }
            _ => fmt_atom(self, f),
        }
    }
}

fn fmt_atom(p: &Hopi2Process, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    match p {
        Hopi2Process::Nil => f.write_str("0"),
        Hopi2Process::Var(x) => write!(f, "{x}"),
        Hopi2Process::In(a, x, body) => {
            write!(f, "{a}({x}).")?;
            fmt_atom(body, f)
        }
        Hopi2Process::Out(a, q, body) => {
            write!(f, "'{a}<{q}>.")?;
            fmt_atom(body, f)
        }
        Hopi2Process::Restrict(a, t, body) => {
            write!(f, "(new {a}:{t})")?;
            fmt_atom(body, f)
        }
        Hopi2Process::Par(..) => write!(f, "({p})"),
    }
}

/// Failures of the direct level checker.
#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum LevelError {
    #[error("level violation: {payload} sent on {channel} needs level {level} < {bound}")]
    LevelViolation { channel: Name, payload: String, level: u32, bound: u32 },
    #[error("unbound name {0}")]
    Unbound(Name),
    #[error("{0} is not a channel")]
    NotAChannel(Name),
    #[error("{0} is not a process variable")]
    NotAVariable(Name),
    #[error("restriction of {0} needs a channel type")]
    BadRestriction(Name),
}

fn channel_of(env: &TypeEnv<Hopi2Type>, a: &Name) -> Result<u32, LevelError> {
    match env.get(a) {
        Some(Hopi2Type::Ch(k)) => Ok(*k),
        Some(_) => Err(LevelError::NotAChannel(a.clone())),
        None => Err(LevelError::Unbound(a.clone())),
    }
}

/// `Γ ⊢ P : n`, synthesising the level `n`.
pub fn infer_level(env: &TypeEnv<Hopi2Type>, p: &Hopi2Process) -> Result<u32, LevelError> {
    match p {
        Hopi2Process::Nil => Ok(0),
        Hopi2Process::Var(x) => match env.get(x) {
            Some(Hopi2Type::Level(n)) => Ok(*n),
            Some(_) => Err(LevelError::NotAVariable(x.clone())),
            None => Err(LevelError::Unbound(x.clone())),
        },
        Hopi2Process::Par(p, q) => Ok(infer_level(env, p)?.max(infer_level(env, q)?)),
        Hopi2Process::Restrict(a, t, body) => {
            if !matches!(t, Hopi2Type::Ch(k) if *k >= 1) {
                return Err(LevelError::BadRestriction(a.clone()));
            }
            let mut inner = env.clone();
            inner.insert(a.clone(), t.clone());
            infer_level(&inner, body)
        }
        Hopi2Process::In(a, x, body) => {
            let k = channel_of(env, a)?;
            let mut inner = env.clone();
            inner.insert(x.clone(), Hopi2Type::Level(k.saturating_sub(1)));
            infer_level(&inner, body)
        }
        Hopi2Process::Out(a, q, body) => {
            let k = channel_of(env, a)?;
            let m = infer_level(env, q)?;
            if m >= k {
                return Err(LevelError::LevelViolation { channel: a.clone(), payload: q.to_string(), level: m, bound: k });
            }
            Ok(k.max(infer_level(env, body)?))
        }
    }
}

/// Result of exhaustive exploration under a state budget.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Termination {
    /// Every path reaches a normal form; `depth` is the longest path.
    Terminated(usize),
    BudgetExceeded,
    /// The state graph has a cycle, so some path never ends.
    Diverges,
}

/// Explores every reduction of `p` breadth-first, visiting at most `budget`
/// distinct canonical states.
pub fn termination_probe(env: &TypeEnv<Hopi2Type>, p: &Hopi2Process, budget: usize) -> Result<Termination, LevelError> {
    let sig = Hopi2Sig;
    let psi = sig.unit();
    let root = canonicalize(&embed(env, p)?);
    let mut index: HashMap<Process<Hopi2>, usize> = HashMap::from([(root.clone(), 0)]);
    let mut states = vec![root];
    let mut edges: Vec<Vec<usize>> = vec![vec![]];
    let mut queue = VecDeque::from([0usize]);
    while let Some(i) = queue.pop_front() {
        for step in reduce_steps(&sig, &psi, &states[i].clone()) {
            let j = match index.get(&step.after) {
                Some(&j) => j,
                None => {
                    if states.len() >= budget {
                        return Ok(Termination::BudgetExceeded);
                    }
                    let j = states.len();
                    index.insert(step.after.clone(), j);
                    states.push(step.after);
                    edges.push(vec![]);
                    queue.push_back(j);
                    j
                }
            };
            edges[i].push(j);
        }
    }
    Ok(longest_path(&edges).map_or(Termination::Diverges, Termination::Terminated))
}

/// Length of the longest path from node 0, or `None` on a cycle.
fn longest_path(edges: &[Vec<usize>]) -> Option<usize> {
    let mut indegree = vec![0usize; edges.len()];
    for out in edges {
        for &j in out {
            indegree[j] += 1;
        }
    }
    let mut ready: Vec<usize> = (0..edges.len()).filter(|&i| indegree[i] == 0).collect();
    let mut depth = vec![0usize; edges.len()];
    let mut seen = 0;
    while let Some(i) = ready.pop() {
        seen += 1;
        for &j in &edges[i] {
            depth[j] = depth[j].max(depth[i] + 1);
            indegree[j] -= 1;
            if indegree[j] == 0 {
                ready.push(j);
            }
        }
    }
    (seen == edges.len()).then(|| depth.into_iter().max().unwrap_or(0))
}
