//! HOπ₂ as an instance of the generic calculus.
//!
//! Channels are plain names. A received process is bound to a pattern
//! variable `Bind(X)` and started with `run Var(X)`; after communication the
//! variable becomes a `Proc` term whose only handle is the process itself.
//!
//! The ambient assertion carries the level being checked against: a channel
//! of level `k` may be used for output only when `k` does not exceed it, so
//! `Γ, n ⊢ P` holds exactly when `P` has a level of at most `n`.

use std::collections::BTreeSet;
use std::fmt;

use super::{Hopi2Process, Hopi2Type, LevelError};
use crate::instance::{Data, Lang, Signature, Subst};
use crate::nominal::{Name, Nominal, Transposition};
use crate::syntax::{canonical_at, refresh, subst_process, Process};
use crate::typing::{Checker, Direction, RunPolicy, TypeEnv, TypingHooks};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Hopi2;

impl Lang for Hopi2 {
    type Term = Hopi2Term;
    type Condition = Hopi2Condition;
    type Assertion = Hopi2Assertion;
    type Type = Hopi2Type;
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Hopi2Term {
    /// A channel name.
    Chan(Name),
    /// A process variable in `run` position.
    Var(Name),
    /// A process variable in pattern position.
    Bind(Name),
    /// A transmitted process.
    Proc(Box<Process<Hopi2>>),
}

impl Hopi2Term {
    fn name(&self) -> Option<&Name> {
        match self {
            Hopi2Term::Chan(x) | Hopi2Term::Var(x) | Hopi2Term::Bind(x) => Some(x),
            Hopi2Term::Proc(_) => None,
        }
    }

    fn with_name(&self, x: Name) -> Self {
        match self {
            Hopi2Term::Chan(_) => Hopi2Term::Chan(x),
            Hopi2Term::Var(_) => Hopi2Term::Var(x),
            Hopi2Term::Bind(_) => Hopi2Term::Bind(x),
            Hopi2Term::Proc(_) => self.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Hopi2Condition {
    ChanEq(Hopi2Term, Hopi2Term),
    Top,
}

/// Level assertions `n`, `n⁻` and `n⁺`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Hopi2Assertion {
    Plain(u32),
    InTag(u32),
    OutTag(u32),
}

impl Hopi2Assertion {
    pub fn level(&self) -> u32 {
        match self {
            Hopi2Assertion::Plain(n) | Hopi2Assertion::InTag(n) | Hopi2Assertion::OutTag(n) => *n,
        }
    }

    /// `n ⊗ n⁻ = n`, `n ⊗ n⁺ = n`, `n₁ ⊗ n₂ = max(n₁, n₂)`; equal tags are
    /// kept and every other mix is plain.
    pub fn compose(&self, other: &Self) -> Self {
        let n = self.level().max(other.level());
        match (self, other) {
            (Hopi2Assertion::InTag(_), Hopi2Assertion::InTag(_)) => Hopi2Assertion::InTag(n),
            (Hopi2Assertion::OutTag(_), Hopi2Assertion::OutTag(_)) => Hopi2Assertion::OutTag(n),
            _ => Hopi2Assertion::Plain(n),
        }
    }
}

// ---------------------------------------------------------------------------
// Nominal structure

impl Nominal for Hopi2Term {
    fn support_into(&self, acc: &mut BTreeSet<Name>) {
        match self {
            Hopi2Term::Proc(p) => p.support_into(acc),
            _ => {
                acc.insert(self.name().expect("named term").clone());
            }
        }
    }

    fn swap(&self, t: &Transposition) -> Self {
        match self {
            Hopi2Term::Proc(p) => Hopi2Term::Proc(Box::new((**p).swap(t))),
            _ => self.with_name(t.apply(self.name().expect("named term"))),
        }
    }
}

impl Data for Hopi2Term {
    fn refresh(&self) -> Self {
        match self {
            Hopi2Term::Proc(p) => Hopi2Term::Proc(Box::new(refresh(p))),
            _ => self.clone(),
        }
    }

    fn canonical(&self, depth: u32) -> Self {
        match self {
            Hopi2Term::Proc(p) => Hopi2Term::Proc(Box::new(canonical_at(p, depth))),
            _ => self.clone(),
        }
    }

    fn size(&self) -> usize {
        match self {
            Hopi2Term::Proc(p) => 1 + p.size(),
            _ => 1,
        }
    }
}

impl Nominal for Hopi2Condition {
    fn support_into(&self, acc: &mut BTreeSet<Name>) {
        if let Hopi2Condition::ChanEq(a, b) = self {
            a.support_into(acc);
            b.support_into(acc);
        }
    }

    fn swap(&self, t: &Transposition) -> Self {
        match self {
            Hopi2Condition::ChanEq(a, b) => Hopi2Condition::ChanEq(a.swap(t), b.swap(t)),
            Hopi2Condition::Top => Hopi2Condition::Top,
        }
    }
}

impl Data for Hopi2Condition {
    fn refresh(&self) -> Self {
        match self {
            Hopi2Condition::ChanEq(a, b) => Hopi2Condition::ChanEq(a.refresh(), b.refresh()),
            Hopi2Condition::Top => Hopi2Condition::Top,
        }
    }

    fn canonical(&self, depth: u32) -> Self {
        match self {
            Hopi2Condition::ChanEq(a, b) => Hopi2Condition::ChanEq(a.canonical(depth), b.canonical(depth)),
            Hopi2Condition::Top => Hopi2Condition::Top,
        }
    }
}

impl Nominal for Hopi2Assertion {
    fn support_into(&self, _acc: &mut BTreeSet<Name>) {}

    fn swap(&self, _t: &Transposition) -> Self {
        *self
    }
}

impl Data for Hopi2Assertion {}

// ---------------------------------------------------------------------------
// Printing

impl fmt::Display for Hopi2Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Hopi2Term::Chan(x) | Hopi2Term::Var(x) | Hopi2Term::Bind(x) => write!(f, "{x}"),
            Hopi2Term::Proc(p) => write!(f, "{{{p}}}"),
        }
    }
}

impl fmt::Display for Hopi2Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Hopi2Condition::ChanEq(a, b) => write!(f, "{a} <-> {b}"),
            Hopi2Condition::Top => f.write_str("true"),
        }
    }
}

impl fmt::Display for Hopi2Assertion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Hopi2Assertion::Plain(n) => write!(f, "{n}"),
            Hopi2Assertion::InTag(n) => write!(f, "{n}-"),
            Hopi2Assertion::OutTag(n) => write!(f, "{n}+"),
        }
    }
}

// ---------------------------------------------------------------------------
// Embedding

/// Translates a HOπ₂ process. Input binders get the level `k − 1` of their
/// channel, so every channel must be bound in `env` or by a restriction.
pub fn embed(env: &TypeEnv<Hopi2Type>, p: &Hopi2Process) -> Result<Process<Hopi2>, LevelError> {
    Ok(match p {
        Hopi2Process::Nil => Process::Nil,
        Hopi2Process::Var(x) => Process::Run(Hopi2Term::Var(x.clone())),
        Hopi2Process::Par(a, b) => Process::par(embed(env, a)?, embed(env, b)?),
        Hopi2Process::Restrict(a, t, body) => {
            let mut inner = env.clone();
            inner.insert(a.clone(), t.clone());
            Process::restrict(a.clone(), t.clone(), embed(&inner, body)?)
        }
        Hopi2Process::In(a, x, body) => {
            let k = super::channel_of(env, a)?;
            let t = Hopi2Type::Level(k.saturating_sub(1));
            let mut inner = env.clone();
            inner.insert(x.clone(), t.clone());
            Process::input(Hopi2Term::Chan(a.clone()), vec![(x.clone(), t)], Hopi2Term::Bind(x.clone()), embed(&inner, body)?)
        }
        Hopi2Process::Out(a, q, body) => {
            super::channel_of(env, a)?;
            Process::output(Hopi2Term::Chan(a.clone()), Hopi2Term::Proc(Box::new(embed(env, q)?)), embed(env, body)?)
        }
    })
}

// ---------------------------------------------------------------------------
// Signature

pub struct Hopi2Sig;

impl Signature<Hopi2> for Hopi2Sig {
    fn name(&self) -> &'static str {
        "hopi2"
    }

    fn unit(&self) -> Hopi2Assertion {
        Hopi2Assertion::Plain(0)
    }

    fn compose(&self, a: &Hopi2Assertion, b: &Hopi2Assertion) -> Hopi2Assertion {
        a.compose(b)
    }

    fn entails(&self, psi: &Hopi2Assertion, phi: &Hopi2Condition) -> bool {
        match phi {
            Hopi2Condition::Top => true,
            Hopi2Condition::ChanEq(m, k) => self.chan_eq(psi, m, k),
        }
    }

    fn chan_eq(&self, _psi: &Hopi2Assertion, m: &Hopi2Term, k: &Hopi2Term) -> bool {
        matches!((m, k), (Hopi2Term::Chan(a), Hopi2Term::Chan(b)) if a == b)
    }

    fn handles(&self, _psi: &Hopi2Assertion, m: &Hopi2Term) -> Vec<Process<Hopi2>> {
        match m {
            Hopi2Term::Proc(p) => vec![(**p).clone()],
            _ => vec![],
        }
    }

    fn var(&self, x: &Name) -> Hopi2Term {
        Hopi2Term::Bind(x.clone())
    }

    fn subst_term(&self, t: &Hopi2Term, s: &Subst<Hopi2>) -> Hopi2Term {
        match t {
            Hopi2Term::Proc(p) => Hopi2Term::Proc(Box::new(subst_process(self, p, s))),
            _ => {
                let x = t.name().expect("named term");
                match s.iter().find(|(y, _)| y == x) {
                    None => t.clone(),
                    Some((_, l)) => l.clone(),
                }
            }
        }
    }

    fn subst_condition(&self, c: &Hopi2Condition, s: &Subst<Hopi2>) -> Hopi2Condition {
        match c {
            Hopi2Condition::ChanEq(a, b) => Hopi2Condition::ChanEq(self.subst_term(a, s), self.subst_term(b, s)),
            Hopi2Condition::Top => Hopi2Condition::Top,
        }
    }

    fn subst_assertion(&self, a: &Hopi2Assertion, _s: &Subst<Hopi2>) -> Hopi2Assertion {
        *a
    }

    fn specializes(&self, a: &Hopi2Assertion, b: &Hopi2Assertion) -> bool {
        (0..=b.level()).any(|l| {
            [Hopi2Assertion::Plain(l), Hopi2Assertion::InTag(l), Hopi2Assertion::OutTag(l)]
                .iter()
                .any(|c| a.compose(c) == *b)
        })
    }
}

// ---------------------------------------------------------------------------
// Typing

pub struct Hopi2Typing;

impl TypingHooks<Hopi2> for Hopi2Typing {
    fn synth_term(
        &self,
        ck: &Checker<'_, Hopi2>,
        env: &TypeEnv<Hopi2Type>,
        psi: &Hopi2Assertion,
        m: &Hopi2Term,
    ) -> Result<Hopi2Type, String> {
        let n = psi.level();
        match m {
            Hopi2Term::Chan(a) => {
                let k = match env.lookup(a)? {
                    Hopi2Type::Ch(k) => *k,
                    t => return Err(format!("{a} : {t} is not a channel")),
                };
                match psi {
                    Hopi2Assertion::InTag(_) => Ok(Hopi2Type::ChIn(k)),
                    Hopi2Assertion::OutTag(_) if k <= n => Ok(Hopi2Type::ChOut(k)),
                    Hopi2Assertion::OutTag(_) => Err(format!("output on {a} needs level {k}, have {n}")),
                    Hopi2Assertion::Plain(_) if k <= n => Ok(Hopi2Type::Ch(k)),
                    Hopi2Assertion::Plain(_) => Ok(Hopi2Type::ChIn(k)),
                }
            }
            Hopi2Term::Var(x) => match env.lookup(x)? {
                Hopi2Type::Level(l) if *l <= n => Ok(Hopi2Type::Level(*l)),
                Hopi2Type::Level(l) => Err(format!("{x} has level {l} above {n}")),
                t => Err(format!("{x} : {t} is not a process variable")),
            },
            Hopi2Term::Bind(x) => env.lookup(x).cloned(),
            Hopi2Term::Proc(q) => {
                if matches!(psi, Hopi2Assertion::OutTag(_)) {
                    // under an output tag every channel of the process must be usable for output
                    for x in q.support() {
                        if let Some(Hopi2Type::Ch(k)) = env.get(&x) {
                            if *k > n {
                                return Err(format!("{{{q}}} uses {x} of level {k} above {n}"));
                            }
                        }
                    }
                }
                (0..=n)
                .find(|&l| ck.check_inner(env, &Hopi2Assertion::Plain(l), q).is_ok())
                .map(Hopi2Type::Level)
                .ok_or_else(|| format!("{{{q}}} has no level up to {n}"))
            }
        }
    }

    fn check_condition(
        &self,
        ck: &Checker<'_, Hopi2>,
        env: &TypeEnv<Hopi2Type>,
        psi: &Hopi2Assertion,
        c: &Hopi2Condition,
    ) -> Result<(), String> {
        match c {
            Hopi2Condition::Top => Ok(()),
            Hopi2Condition::ChanEq(a, b) => {
                let (ta, tb) = (ck.synth(env, psi, a)?, ck.synth(env, psi, b)?);
                if ta.channel_level().is_none() || ta != tb {
                    return Err(format!("{a} : {ta} and {b} : {tb} are not channels of one type"));
                }
                Ok(())
            }
        }
    }

    fn check_assertion(
        &self,
        _ck: &Checker<'_, Hopi2>,
        _env: &TypeEnv<Hopi2Type>,
        _psi: &Hopi2Assertion,
        _a: &Hopi2Assertion,
    ) -> Result<(), String> {
        Ok(())
    }

    fn subtype(&self, a: &Hopi2Type, b: &Hopi2Type) -> bool {
        match (a, b) {
            (Hopi2Type::Level(m), Hopi2Type::Level(n)) => m <= n,
            (Hopi2Type::Ch(k), Hopi2Type::ChIn(j) | Hopi2Type::ChOut(j)) => k == j,
            _ => a == b,
        }
    }

    fn compat(&self, t: &Hopi2Type, dir: Direction) -> Result<Hopi2Type, String> {
        match (t, dir) {
            (Hopi2Type::Ch(k), _) | (Hopi2Type::ChIn(k), Direction::In) | (Hopi2Type::ChOut(k), Direction::Out)
                if *k >= 1 =>
            {
                Ok(Hopi2Type::Level(k - 1))
            }
            _ => Err(format!("{t} cannot be used with polarity {dir}")),
        }
    }

    fn extract_env(&self, env: &TypeEnv<Hopi2Type>, t: &Hopi2Type) -> Result<TypeEnv<Hopi2Type>, String> {
        match t {
            Hopi2Type::Level(_) => Ok(env.clone()),
            _ => Err(format!("{t} is not a process type")),
        }
    }

    /// A process term is typed at a plain level, so tags do not reach it.
    fn run_assertion(&self, psi: &Hopi2Assertion, _t: &Hopi2Type) -> Hopi2Assertion {
        Hopi2Assertion::Plain(psi.level())
    }

    fn run_policy(&self) -> RunPolicy {
        RunPolicy::Lenient
    }
}
