//! The reflection type system: a name type `⟨T, Γ⟩` says what the name
//! carries and the environment its process runs in.

use std::collections::BTreeSet;
use std::fmt;

use super::encode::{strip, Rho, RhoAssertion, RhoCondition, RhoSig, RhoTerm};
use crate::instance::{Data, Signature, Subst};
use crate::nominal::{Name, Nominal, Transposition};
use crate::syntax::Process;
use crate::typing::{Checker, Direction, RunPolicy, TypeEnv, TypingHooks};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum RhoType {
    /// `⟨T, Γ⟩`
    Pair(Box<RhoType>, TypeEnv<RhoType>),
    /// `⟨B, Γ⟩`
    Base(TypeEnv<RhoType>),
}

impl RhoType {
    pub fn pair(carried: RhoType) -> Self {
        RhoType::Pair(Box::new(carried), TypeEnv::new())
    }

    pub fn base() -> Self {
        RhoType::Base(TypeEnv::new())
    }

    pub fn env(&self) -> &TypeEnv<RhoType> {
        match self {
            RhoType::Pair(_, g) | RhoType::Base(g) => g,
        }
    }
}

impl Nominal for RhoType {
    fn support_into(&self, acc: &mut BTreeSet<Name>) {
        match self {
            RhoType::Pair(t, g) => {
                t.support_into(acc);
                g.support_into(acc);
            }
            RhoType::Base(g) => g.support_into(acc),
        }
    }

    fn swap(&self, t: &Transposition) -> Self {
        match self {
            RhoType::Pair(u, g) => RhoType::Pair(Box::new((**u).swap(t)), g.swap(t)),
            RhoType::Base(g) => RhoType::Base(g.swap(t)),
        }
    }
}

impl Data for RhoType {
    fn size(&self) -> usize {
        match self {
            RhoType::Pair(t, g) => 1 + t.size() + g.len(),
            RhoType::Base(g) => 1 + g.len(),
        }
    }
}

impl fmt::Display for RhoType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RhoType::Pair(t, g) => write!(f, "<{t}, {{{g}}}>"),
            RhoType::Base(g) => write!(f, "<B, {{{g}}}>"),
        }
    }
}

fn union_env(env: &TypeEnv<RhoType>, inner: &TypeEnv<RhoType>) -> TypeEnv<RhoType> {
    let mut out = env.clone();
    for (x, t) in inner.iter() {
        out.insert(x.clone(), t.clone());
    }
    out
}

// ---------------------------------------------------------------------------
// Signature

/// The typed ρ-instance: channel equivalence also asks for equal declared
/// types.
pub struct RhoTypedSig;

impl Signature<Rho> for RhoTypedSig {
    fn name(&self) -> &'static str {
        "rho-typed"
    }

    fn unit(&self) -> RhoAssertion {
        RhoSig.unit()
    }

    fn compose(&self, a: &RhoAssertion, b: &RhoAssertion) -> RhoAssertion {
        RhoSig.compose(a, b)
    }

    fn entails(&self, psi: &RhoAssertion, phi: &RhoCondition) -> bool {
        match phi {
            RhoCondition::ChanEq(m, k) => self.chan_eq(psi, m, k),
            _ => RhoSig.entails(psi, phi),
        }
    }

    fn chan_eq(&self, psi: &RhoAssertion, m: &RhoTerm, k: &RhoTerm) -> bool {
        RhoSig.chan_eq(psi, m, k) && psi.types_of(m) == psi.types_of(k)
    }

    fn handles(&self, psi: &RhoAssertion, m: &RhoTerm) -> Vec<Process<Rho>> {
        RhoSig.handles(psi, m)
    }

    fn var(&self, x: &Name) -> RhoTerm {
        RhoSig.var(x)
    }

    fn subst_term(&self, t: &RhoTerm, s: &Subst<Rho>) -> RhoTerm {
        RhoSig.subst_term(t, s)
    }

    fn subst_condition(&self, c: &RhoCondition, s: &Subst<Rho>) -> RhoCondition {
        RhoSig.subst_condition(c, s)
    }

    fn subst_assertion(&self, a: &RhoAssertion, s: &Subst<Rho>) -> RhoAssertion {
        RhoSig.subst_assertion(a, s)
    }

    fn match_pattern(&self, pattern: &RhoTerm, binders: &[Name], value: &RhoTerm) -> Option<Subst<Rho>> {
        RhoSig.match_pattern(pattern, binders, value)
    }

    fn specializes(&self, a: &RhoAssertion, b: &RhoAssertion) -> bool {
        RhoSig.specializes(a, b)
    }
}

// ---------------------------------------------------------------------------
// Typing

pub struct RhoTyping;

impl TypingHooks<Rho> for RhoTyping {
    fn synth_term(
        &self,
        ck: &Checker<'_, Rho>,
        env: &TypeEnv<RhoType>,
        psi: &RhoAssertion,
        m: &RhoTerm,
    ) -> Result<RhoType, String> {
        let p = match m {
            RhoTerm::Atom(x) => return env.lookup(x).cloned(),
            RhoTerm::Static(p) | RhoTerm::Dyn(p) => strip(p),
        };
        let declared = psi.types_of(m);
        if declared.is_empty() {
            return Err(format!("{m} has no declared type"));
        }
        let mut last = String::new();
        for t in declared {
            match ck.check_inner(&union_env(env, t.env()), psi, &p) {
                Ok(()) => return Ok(t),
                Err(e) => last = format!("{m} : {t}: {e}"),
            }
        }
        Err(last)
    }

    fn check_condition(
        &self,
        ck: &Checker<'_, Rho>,
        env: &TypeEnv<RhoType>,
        psi: &RhoAssertion,
        c: &RhoCondition,
    ) -> Result<(), String> {
        match c {
            RhoCondition::Top => Ok(()),
            RhoCondition::ChanEq(a, b) => {
                ck.synth(env, psi, a)?;
                ck.synth(env, psi, b)?;
                Ok(())
            }
            RhoCondition::Congr(p, q) => {
                ck.check_inner(env, psi, p).map_err(|e| e.to_string())?;
                ck.check_inner(env, psi, q).map_err(|e| e.to_string())
            }
            RhoCondition::Handle(m, p) => {
                ck.synth(env, psi, m)?;
                ck.check_inner(env, psi, p).map_err(|e| e.to_string())
            }
        }
    }

    fn check_assertion(
        &self,
        _ck: &Checker<'_, Rho>,
        _env: &TypeEnv<RhoType>,
        _psi: &RhoAssertion,
        _a: &RhoAssertion,
    ) -> Result<(), String> {
        // every name type has an environment to extract
        Ok(())
    }

    fn subtype(&self, a: &RhoType, b: &RhoType) -> bool {
        a == b
    }

    fn compat(&self, t: &RhoType, _dir: Direction) -> Result<RhoType, String> {
        match t {
            RhoType::Pair(carried, _) => Ok((**carried).clone()),
            RhoType::Base(_) => Err(format!("{t} carries nothing")),
        }
    }

    fn extract_env(&self, env: &TypeEnv<RhoType>, t: &RhoType) -> Result<TypeEnv<RhoType>, String> {
        Ok(union_env(env, t.env()))
    }

    fn run_policy(&self) -> RunPolicy {
        RunPolicy::Lenient
    }
}
