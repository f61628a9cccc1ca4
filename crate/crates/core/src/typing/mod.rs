//! The generic type checker for processes, parameterised by instance typing
//! hooks for terms, conditions and assertions.

pub mod harness;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::instance::{Lang, Signature};
use crate::nominal::{Name, Nominal, Transposition};
use crate::syntax::{assertion_guarded, frame_assertion, frame_names, refresh, well_formed, Path, Process};

/// A type environment `Γ`: a finite map from names to types.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct TypeEnv<T: Ord> {
    bindings: BTreeMap<Name, T>,
}

impl<T: Ord> Default for TypeEnv<T> {
    fn default() -> Self {
        TypeEnv { bindings: BTreeMap::new() }
    }
}

impl<T: Ord + Clone> TypeEnv<T> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, x: &Name) -> Option<&T> {
        self.bindings.get(x)
    }

    pub fn lookup(&self, x: &Name) -> Result<&T, String> {
        self.bindings.get(x).ok_or_else(|| format!("unbound name {x}"))
    }

    pub fn contains(&self, x: &Name) -> bool {
        self.bindings.contains_key(x)
    }

    /// `Γ, x:T`. Shadowing is refused; rename the binder first.
    pub fn extend(&self, x: Name, t: T) -> Result<Self, String> {
        if self.bindings.contains_key(&x) {
            return Err(format!("{x} is already bound"));
        }
        let mut out = self.clone();
        out.bindings.insert(x, t);
        Ok(out)
    }

    /// Inserts or overwrites a binding.
    pub fn insert(&mut self, x: Name, t: T) {
        self.bindings.insert(x, t);
    }

    pub fn remove(&mut self, x: &Name) -> Option<T> {
        self.bindings.remove(x)
    }

    pub fn extend_all(&self, items: &[(Name, T)]) -> Result<Self, String> {
        let mut out = self.clone();
        for (x, t) in items {
            out = out.extend(x.clone(), t.clone())?;
        }
        Ok(out)
    }

    pub fn dom(&self) -> BTreeSet<Name> {
        self.bindings.keys().cloned().collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Name, &T)> {
        self.bindings.iter()
    }

    pub fn len(&self) -> usize {
        self.bindings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bindings.is_empty()
    }
}

impl<T: Ord + Clone> FromIterator<(Name, T)> for TypeEnv<T> {
    fn from_iter<I: IntoIterator<Item = (Name, T)>>(iter: I) -> Self {
        TypeEnv { bindings: iter.into_iter().collect() }
    }
}

impl<T: Ord + Nominal> Nominal for TypeEnv<T> {
    fn support_into(&self, acc: &mut BTreeSet<Name>) {
        self.bindings.support_into(acc);
    }

    fn swap(&self, t: &Transposition) -> Self {
        TypeEnv { bindings: self.bindings.swap(t) }
    }
}

impl<T: Ord + fmt::Display> fmt::Display for TypeEnv<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (x, t)) in self.bindings.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{x}:{t}")?;
        }
        Ok(())
    }
}

/// Use direction of a channel: output (`+`) or input (`−`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Direction {
    Out,
    In,
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Direction::Out => "+",
            Direction::In => "-",
        })
    }
}

/// What `run M` does when no handle for `M` is entailed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum RunPolicy {
    /// A type error.
    #[default]
    Strict,
    /// Accepted; the process behaves as a deadlock.
    Lenient,
}

/// The typing parameters of an instance.
pub trait TypingHooks<L: Lang>: Send + Sync {
    /// `Γ, Ψ ⊢ M : T`, returning the least type of `M`.
    fn synth_term(&self, ck: &Checker<'_, L>, env: &TypeEnv<L::Type>, psi: &L::Assertion, m: &L::Term)
        -> Result<L::Type, String>;

    fn check_condition(
        &self,
        ck: &Checker<'_, L>,
        env: &TypeEnv<L::Type>,
        psi: &L::Assertion,
        c: &L::Condition,
    ) -> Result<(), String>;

    fn check_assertion(
        &self,
        ck: &Checker<'_, L>,
        env: &TypeEnv<L::Type>,
        psi: &L::Assertion,
        a: &L::Assertion,
    ) -> Result<(), String>;

    /// `T₁ ≤ T₂`
    fn subtype(&self, a: &L::Type, b: &L::Type) -> bool;

    /// The extremal type a channel of type `t` carries in direction `dir`:
    /// the largest for output, the smallest for input.
    fn compat(&self, t: &L::Type, dir: Direction) -> Result<L::Type, String>;

    /// `t ⇝ᵈ obj`: output accepts any subtype of the carried type, input any
    /// supertype.
    fn carries(&self, t: &L::Type, dir: Direction, obj: &L::Type) -> bool {
        match self.compat(t, dir) {
            Ok(c) => match dir {
                Direction::Out => self.subtype(obj, &c),
                Direction::In => self.subtype(&c, obj),
            },
            Err(_) => false,
        }
    }

    /// `T ↷ Γ′`. `env` is the environment the handle was typed in.
    fn extract_env(&self, env: &TypeEnv<L::Type>, t: &L::Type) -> Result<TypeEnv<L::Type>, String>;

    fn run_policy(&self) -> RunPolicy {
        RunPolicy::Strict
    }

    /// The assertion the processes of a handle of type `t` are checked under
    /// when run in `psi`.
    fn run_assertion(&self, psi: &L::Assertion, _t: &L::Type) -> L::Assertion {
        psi.clone()
    }
}

/// A failed process rule.
#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("{rule} at {position:?}: {message}")]
pub struct TypeError {
    pub position: Path,
    pub rule: &'static str,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum CheckError {
    #[error("ill-formed judgment: {0}")]
    IllFormedJudgment(String),
    #[error(transparent)]
    Type(#[from] TypeError),
}

/// `SUBSUME` at a leaf: whether `t1` may be used where `t2` is expected.
pub fn check_subsumption<L: Lang>(hooks: &dyn TypingHooks<L>, t1: &L::Type, t2: &L::Type) -> bool {
    hooks.subtype(t1, t2)
}

/// Names bound by input prefixes anywhere in `p`. Binders are assumed
/// distinct from each other and from free names.
fn input_binders<L: Lang>(p: &Process<L>) -> BTreeSet<Name> {
    let mut out = BTreeSet::new();
    fn go<L: Lang>(p: &Process<L>, out: &mut BTreeSet<Name>) {
        match p {
            Process::Input { binders, cont, .. } => {
                out.extend(binders.iter().map(|(x, _)| x.clone()));
                go(cont, out);
            }
            Process::Par(a, b) => {
                go(a, out);
                go(b, out);
            }
            Process::Output { cont, .. } => go(cont, out),
            Process::Case(bs) => bs.iter().for_each(|(_, q)| go(q, out)),
            Process::Restrict(_, _, q) | Process::Repl(q) => go(q, out),
            Process::Nil | Process::Run(_) | Process::Assert(_) => {}
        }
    }
    go(p, &mut out);
    out
}

/// The process rules, closed over an instance.
pub struct Checker<'a, L: Lang> {
    pub sig: &'a dyn Signature<L>,
    pub hooks: &'a dyn TypingHooks<L>,
    pub run_policy: RunPolicy,
}

impl<'a, L: Lang> Checker<'a, L> {
    pub fn new(sig: &'a dyn Signature<L>, hooks: &'a dyn TypingHooks<L>) -> Self {
        Checker { sig, hooks, run_policy: hooks.run_policy() }
    }

    pub fn with_run_policy(mut self, policy: RunPolicy) -> Self {
        self.run_policy = policy;
        self
    }

    /// `Γ, Ψ ⊢ P` for a well-formed judgment: `P` is well-formed and
    /// `n(Ψ) ∪ n(P) ⊆ dom(Γ)`.
    pub fn check(&self, env: &TypeEnv<L::Type>, psi: &L::Assertion, p: &Process<L>) -> Result<(), CheckError> {
        well_formed(p).map_err(|e| CheckError::IllFormedJudgment(e.to_string()))?;
        let mut names = psi.support();
        p.support_into(&mut names);
        let missing: Vec<String> = names.iter().filter(|n| !env.contains(n)).map(|n| n.to_string()).collect();
        if !missing.is_empty() {
            return Err(CheckError::IllFormedJudgment(format!("names not in the environment: {}", missing.join(", "))));
        }
        if self.run_policy == RunPolicy::Strict {
            // A free name is never substituted, so a handle type on it can only lead to a stuck run.
            for x in p.support() {
                let t = env.lookup(&x).map_err(CheckError::IllFormedJudgment)?;
                if self.hooks.extract_env(env, t).is_ok() {
                    return Err(CheckError::Type(TypeError {
                        position: Vec::new(),
                        rule: "T-RUN",
                        message: format!("free name {x} : {t} has a handle type but is never a handle"),
                    }));
                }
            }
        }
        Ok(self.check_inner(env, psi, p)?)
    }

    /// The process rules without the well-formedness precondition; used for
    /// processes reached through handles and embedded terms.
    pub fn check_inner(&self, env: &TypeEnv<L::Type>, psi: &L::Assertion, p: &Process<L>) -> Result<(), TypeError> {
        let q = refresh(p);
        let vars = input_binders(&q);
        self.go(env, psi, &q, &vars, &mut Vec::new())
    }

    pub fn synth(&self, env: &TypeEnv<L::Type>, psi: &L::Assertion, m: &L::Term) -> Result<L::Type, String> {
        self.hooks.synth_term(self, env, psi, m)
    }

    /// `Γ, Ψ ⊢ M : T` through synthesis and subsumption.
    pub fn has_type(&self, env: &TypeEnv<L::Type>, psi: &L::Assertion, m: &L::Term, t: &L::Type) -> bool {
        self.synth(env, psi, m).map(|s| self.hooks.subtype(&s, t)).unwrap_or(false)
    }

    fn go(
        &self,
        env: &TypeEnv<L::Type>,
        psi: &L::Assertion,
        p: &Process<L>,
        vars: &BTreeSet<Name>,
        path: &mut Path,
    ) -> Result<(), TypeError> {
        let err = |rule: &'static str, message: String, path: &Path| TypeError { position: path.clone(), rule, message };
        match p {
            Process::Nil => Ok(()),
            Process::Par(a, b) => {
                let (fa, fb) = (frame_assertion(self.sig, a), frame_assertion(self.sig, b));
                let (na, nb) = (frame_names(a), frame_names(b));
                let env_a = env.extend_all(&nb).map_err(|m| err("T-PAR", m, path))?;
                let env_b = env.extend_all(&na).map_err(|m| err("T-PAR", m, path))?;
                path.push(0);
                self.go(&env_a, &self.sig.compose(psi, &fb), a, vars, path)?;
                path.pop();
                path.push(1);
                self.go(&env_b, &self.sig.compose(psi, &fa), b, vars, path)?;
                path.pop();
                Ok(())
            }
            Process::Output { subject, object, cont } => {
                let t = self.synth(env, psi, subject).map_err(|m| err("T-OUT", format!("subject {subject}: {m}"), path))?;
                let o = self.synth(env, psi, object).map_err(|m| err("T-OUT", format!("object {object}: {m}"), path))?;
                if !self.hooks.carries(&t, Direction::Out, &o) {
                    return Err(err("T-OUT", format!("{subject} : {t} cannot send {object} : {o}"), path));
                }
                path.push(0);
                self.go(env, psi, cont, vars, path)?;
                path.pop();
                Ok(())
            }
            Process::Input { subject, binders, pattern, cont } => {
                let t = self.synth(env, psi, subject).map_err(|m| err("T-IN", format!("subject {subject}: {m}"), path))?;
                let inner = env.extend_all(binders).map_err(|m| err("T-IN", m, path))?;
                let o = self.synth(&inner, psi, pattern).map_err(|m| err("T-IN", format!("pattern {pattern}: {m}"), path))?;
                if !self.hooks.carries(&t, Direction::In, &o) {
                    return Err(err("T-IN", format!("{subject} : {t} cannot receive {pattern} : {o}"), path));
                }
                path.push(0);
                self.go(&inner, psi, cont, vars, path)?;
                path.pop();
                Ok(())
            }
            Process::Run(m) => {
                let t = self.synth(env, psi, m).map_err(|e| err("T-RUN", format!("{m}: {e}"), path))?;
                let inner = self.hooks.extract_env(env, &t).map_err(|e| err("T-RUN", format!("{m} : {t}: {e}"), path))?;
                let handles = self.sig.handles(psi, m);
                // A term built from input variables may still become a handle by substitution.
                let pending = m.support().iter().any(|x| vars.contains(x));
                if handles.is_empty() && self.run_policy == RunPolicy::Strict && !pending {
                    return Err(err("T-RUN", format!("{m} is not a handle for any process"), path));
                }
                let run_psi = self.hooks.run_assertion(psi, &t);
                for h in handles {
                    if !assertion_guarded(&h) {
                        return Err(err("T-RUN", format!("process {h} of handle {m} has an unguarded assertion"), path));
                    }
                    self.check_inner(&inner, &run_psi, &h)
                        .map_err(|e| err("T-RUN", format!("process {h} of handle {m}: {e}"), path))?;
                }
                Ok(())
            }
            Process::Case(bs) => {
                for (i, (c, q)) in bs.iter().enumerate() {
                    self.hooks.check_condition(self, env, psi, c).map_err(|m| err("T-CASE", format!("{c}: {m}"), path))?;
                    path.push(i);
                    self.go(env, psi, q, vars, path)?;
                    path.pop();
                }
                Ok(())
            }
            Process::Restrict(x, t, q) => {
                let inner = env.extend(x.clone(), t.clone()).map_err(|m| err("T-NEW", m, path))?;
                path.push(0);
                self.go(&inner, psi, q, vars, path)?;
                path.pop();
                Ok(())
            }
            Process::Repl(q) => {
                path.push(0);
                self.go(env, psi, q, vars, path)?;
                path.pop();
                Ok(())
            }
            Process::Assert(a) => self
                .hooks
                .check_assertion(self, env, psi, a)
                .map_err(|m| err("T-ASSERT", format!("{a}: {m}"), path)),
        }
    }
}
