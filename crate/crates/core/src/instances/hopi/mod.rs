//! A simplified higher-order pi-calculus: terms are names or processes,
//! every process is a handle for itself, and assertions double as type
//! environments for transmitted processes.

pub mod gen;

use std::collections::BTreeSet;
use std::fmt;

use crate::instance::{Data, Lang, Signature, Subst};
use crate::nominal::{Name, Nominal, Transposition};
use crate::syntax::{annotation_names, assertion_guarded, canonical_at, canonicalize, refresh, subst_process, Process};
use crate::typing::{Checker, Direction, TypeEnv, TypingHooks};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Hopi;

pub type HopiProcess = Process<Hopi>;

impl Lang for Hopi {
    type Term = HopiTerm;
    type Condition = HopiCondition;
    type Assertion = HopiAssertion;
    type Type = HopiType;
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum HopiTerm {
    Name(Name),
    Proc(Box<HopiProcess>),
}

impl HopiTerm {
    pub fn proc(p: HopiProcess) -> Self {
        HopiTerm::Proc(Box::new(p))
    }

    pub fn as_name(&self) -> Option<&Name> {
        match self {
            HopiTerm::Name(x) => Some(x),
            HopiTerm::Proc(_) => None,
        }
    }
}

/// `M ↔ N`, `P ⇐ Q` and `⊤`. Channel equivalence takes arbitrary terms so
/// that substitution stays total; only equal names are ever equivalent.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum HopiCondition {
    ChanEq(HopiTerm, HopiTerm),
    Handle(Box<HopiProcess>, Box<HopiProcess>),
    Top,
}

/// A finite set of bindings `P : T`.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct HopiAssertion(pub BTreeSet<(HopiProcess, HopiType)>);

impl HopiAssertion {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn single(p: HopiProcess, t: HopiType) -> Self {
        HopiAssertion([(p, t)].into_iter().collect())
    }

    /// Types bound to processes structurally congruent to `p`.
    pub fn types_of(&self, p: &HopiProcess) -> Vec<&HopiType> {
        let c = canonicalize(p);
        let mut out: Vec<&HopiType> = self.0.iter().filter(|(q, _)| canonicalize(q) == c).map(|(_, t)| t).collect();
        out.dedup();
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum HopiType {
    Ch(Box<HopiType>),
    Drop(TypeEnv<HopiType>),
}

impl HopiType {
    pub fn ch(t: HopiType) -> Self {
        HopiType::Ch(Box::new(t))
    }
}

// ---------------------------------------------------------------------------
// Nominal structure

impl Nominal for HopiTerm {
    fn support_into(&self, acc: &mut BTreeSet<Name>) {
        match self {
            HopiTerm::Name(x) => {
                acc.insert(x.clone());
            }
            HopiTerm::Proc(p) => p.support_into(acc),
        }
    }

    fn swap(&self, t: &Transposition) -> Self {
        match self {
            HopiTerm::Name(x) => HopiTerm::Name(t.apply(x)),
            HopiTerm::Proc(p) => HopiTerm::proc((**p).swap(t)),
        }
    }
}

impl Data for HopiTerm {
    fn refresh(&self) -> Self {
        match self {
            HopiTerm::Name(_) => self.clone(),
            HopiTerm::Proc(p) => HopiTerm::proc(refresh(p)),
        }
    }

    fn canonical(&self, depth: u32) -> Self {
        match self {
            HopiTerm::Name(_) => self.clone(),
            HopiTerm::Proc(p) => HopiTerm::proc(canonical_at(p, depth)),
        }
    }

    fn annotation_names(&self) -> BTreeSet<Name> {
        match self {
            HopiTerm::Name(_) => BTreeSet::new(),
            HopiTerm::Proc(p) => annotation_names(p),
        }
    }

    fn size(&self) -> usize {
        match self {
            HopiTerm::Name(_) => 1,
            HopiTerm::Proc(p) => 1 + p.size(),
        }
    }
}

impl Nominal for HopiCondition {
    fn support_into(&self, acc: &mut BTreeSet<Name>) {
        match self {
            HopiCondition::ChanEq(a, b) => {
                a.support_into(acc);
                b.support_into(acc);
            }
            HopiCondition::Handle(p, q) => {
                p.support_into(acc);
                q.support_into(acc);
            }
            HopiCondition::Top => {}
        }
    }

    fn swap(&self, t: &Transposition) -> Self {
        match self {
            HopiCondition::ChanEq(a, b) => HopiCondition::ChanEq(a.swap(t), b.swap(t)),
            HopiCondition::Handle(p, q) => HopiCondition::Handle(p.swap(t), q.swap(t)),
            HopiCondition::Top => HopiCondition::Top,
        }
    }
}

impl Data for HopiCondition {
    fn refresh(&self) -> Self {
        match self {
            HopiCondition::ChanEq(a, b) => HopiCondition::ChanEq(a.refresh(), b.refresh()),
            HopiCondition::Handle(p, q) => HopiCondition::Handle(Box::new(refresh(p)), Box::new(refresh(q))),
            HopiCondition::Top => HopiCondition::Top,
        }
    }

    fn canonical(&self, depth: u32) -> Self {
        match self {
            HopiCondition::ChanEq(a, b) => HopiCondition::ChanEq(a.canonical(depth), b.canonical(depth)),
            HopiCondition::Handle(p, q) => {
                HopiCondition::Handle(Box::new(canonical_at(p, depth)), Box::new(canonical_at(q, depth)))
            }
            HopiCondition::Top => HopiCondition::Top,
        }
    }

    fn size(&self) -> usize {
        match self {
            HopiCondition::ChanEq(a, b) => 1 + a.size() + b.size(),
            HopiCondition::Handle(p, q) => 1 + p.size() + q.size(),
            HopiCondition::Top => 1,
        }
    }

    fn annotation_names(&self) -> BTreeSet<Name> {
        match self {
            HopiCondition::ChanEq(a, b) => a.annotation_names().union(&b.annotation_names()).cloned().collect(),
            HopiCondition::Handle(p, q) => annotation_names(p).union(&annotation_names(q)).cloned().collect(),
            HopiCondition::Top => BTreeSet::new(),
        }
    }
}

impl Nominal for HopiAssertion {
    fn support_into(&self, acc: &mut BTreeSet<Name>) {
        self.0.support_into(acc);
    }

    fn swap(&self, t: &Transposition) -> Self {
        HopiAssertion(self.0.swap(t))
    }
}

impl Data for HopiAssertion {
    fn refresh(&self) -> Self {
        HopiAssertion(self.0.iter().map(|(p, t)| (refresh(p), t.clone())).collect())
    }

    fn canonical(&self, depth: u32) -> Self {
        HopiAssertion(self.0.iter().map(|(p, t)| (canonical_at(p, depth), t.clone())).collect())
    }

    fn size(&self) -> usize {
        1 + self.0.iter().map(|(p, t)| p.size() + t.size()).sum::<usize>()
    }

    fn annotation_names(&self) -> BTreeSet<Name> {
        let mut out = BTreeSet::new();
        for (p, t) in &self.0 {
            out.extend(annotation_names(p));
            t.support_into(&mut out);
        }
        out
    }
}

impl Nominal for HopiType {
    fn support_into(&self, acc: &mut BTreeSet<Name>) {
        match self {
            HopiType::Ch(t) => t.support_into(acc),
            HopiType::Drop(env) => env.support_into(acc),
        }
    }

    fn swap(&self, t: &Transposition) -> Self {
        match self {
            HopiType::Ch(u) => HopiType::Ch(u.swap(t)),
            HopiType::Drop(env) => HopiType::Drop(env.swap(t)),
        }
    }
}

impl Data for HopiType {
    fn size(&self) -> usize {
        match self {
            HopiType::Ch(t) => 1 + t.size(),
            HopiType::Drop(env) => 1 + env.iter().map(|(_, t)| 1 + t.size()).sum::<usize>(),
        }
    }
}

// ---------------------------------------------------------------------------
// Printing

impl fmt::Display for HopiTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HopiTerm::Name(x) => write!(f, "{x}"),
            HopiTerm::Proc(p) => write!(f, "{{{p}}}"),
        }
    }
}

impl fmt::Display for HopiCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HopiCondition::ChanEq(a, b) => write!(f, "{a} <-> {b}"),
            HopiCondition::Handle(p, q) => write!(f, "{{{p}}} <= {{{q}}}"),
            HopiCondition::Top => write!(f, "true"),
        }
    }
}

impl fmt::Display for HopiAssertion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        for (i, (p, t)) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{{{p}}} : {t}")?;
        }
        Ok(())
    }
}

impl fmt::Display for HopiType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HopiType::Ch(t) => write!(f, "ch({t})"),
            HopiType::Drop(env) => write!(f, "drop({env})"),
        }
    }
}

// ---------------------------------------------------------------------------
// Runtime parameters

/// The untyped runtime of the instance.
#[derive(Clone, Copy, Debug, Default)]
pub struct HopiSig;

fn canonical_set(a: &HopiAssertion) -> BTreeSet<(HopiProcess, HopiType)> {
    a.0.iter().map(|(p, t)| (canonicalize(p), t.clone())).collect()
}

impl Signature<Hopi> for HopiSig {
    fn name(&self) -> &'static str {
        "hopi"
    }

    fn unit(&self) -> HopiAssertion {
        HopiAssertion::empty()
    }

    fn compose(&self, a: &HopiAssertion, b: &HopiAssertion) -> HopiAssertion {
        HopiAssertion(a.0.union(&b.0).cloned().collect())
    }

    fn entails(&self, psi: &HopiAssertion, phi: &HopiCondition) -> bool {
        match phi {
            HopiCondition::Top => true,
            HopiCondition::ChanEq(a, b) => self.chan_eq(psi, a, b),
            HopiCondition::Handle(p, q) => assertion_guarded(p) && canonicalize(p) == canonicalize(q),
        }
    }

    fn chan_eq(&self, _psi: &HopiAssertion, m: &HopiTerm, k: &HopiTerm) -> bool {
        matches!((m, k), (HopiTerm::Name(a), HopiTerm::Name(b)) if a == b)
    }

    fn handles(&self, _psi: &HopiAssertion, m: &HopiTerm) -> Vec<HopiProcess> {
        match m {
            HopiTerm::Proc(p) if assertion_guarded(p) => vec![(**p).clone()],
            _ => vec![],
        }
    }

    fn var(&self, x: &Name) -> HopiTerm {
        HopiTerm::Name(x.clone())
    }

    fn subst_term(&self, t: &HopiTerm, s: &Subst<Hopi>) -> HopiTerm {
        match t {
            HopiTerm::Name(x) => s.iter().find(|(y, _)| y == x).map(|(_, l)| l.clone()).unwrap_or_else(|| t.clone()),
            HopiTerm::Proc(p) => HopiTerm::proc(subst_process(self, p, s)),
        }
    }

    fn subst_condition(&self, c: &HopiCondition, s: &Subst<Hopi>) -> HopiCondition {
        match c {
            HopiCondition::ChanEq(a, b) => HopiCondition::ChanEq(self.subst_term(a, s), self.subst_term(b, s)),
            HopiCondition::Handle(p, q) => {
                HopiCondition::Handle(Box::new(subst_process(self, p, s)), Box::new(subst_process(self, q, s)))
            }
            HopiCondition::Top => HopiCondition::Top,
        }
    }

    fn subst_assertion(&self, a: &HopiAssertion, s: &Subst<Hopi>) -> HopiAssertion {
        HopiAssertion(a.0.iter().map(|(p, t)| (subst_process(self, p, s), t.clone())).collect())
    }

    fn specializes(&self, a: &HopiAssertion, b: &HopiAssertion) -> bool {
        canonical_set(a).is_subset(&canonical_set(b))
    }

    /// A prefix whose subject is a process, or `run` on a name that is not
    /// a handle.
    fn wrong(&self, psi: &HopiAssertion, atom: &HopiProcess) -> Option<String> {
        match atom {
            Process::Output { subject: HopiTerm::Proc(p), .. } | Process::Input { subject: HopiTerm::Proc(p), .. } => {
                Some(format!("process {{{p}}} used as a channel"))
            }
            Process::Run(m @ HopiTerm::Name(x)) if self.handles(psi, m).is_empty() => {
                Some(format!("run on the name {x}, which is not a handle"))
            }
            _ => None,
        }
    }
}

// ---------------------------------------------------------------------------
// Typing

/// Channel types carry exactly their argument; processes get the drop type
/// recorded for them in the ambient assertion.
#[derive(Clone, Copy, Debug, Default)]
pub struct HopiTyping;

impl HopiTyping {
    /// The unique drop type bound to `p` in `psi`.
    fn bound_type<'a>(&self, psi: &'a HopiAssertion, p: &HopiProcess) -> Result<&'a TypeEnv<HopiType>, String> {
        match psi.types_of(p).as_slice() {
            [] => Err(format!("no assertion binds a type to {{{p}}}")),
            [HopiType::Drop(env)] => Ok(env),
            [t] => Err(format!("{{{p}}} is bound to the non-process type {t}")),
            ts => Err(format!("{{{p}}} is bound to {} conflicting types", ts.len())),
        }
    }
}

impl TypingHooks<Hopi> for HopiTyping {
    fn synth_term(
        &self,
        ck: &Checker<'_, Hopi>,
        env: &TypeEnv<HopiType>,
        psi: &HopiAssertion,
        m: &HopiTerm,
    ) -> Result<HopiType, String> {
        match m {
            HopiTerm::Name(x) => env.lookup(x).cloned(),
            HopiTerm::Proc(p) => {
                let inner = self.bound_type(psi, p)?;
                if !assertion_guarded(p) {
                    return Err(format!("{{{p}}} has an unguarded assertion"));
                }
                ck.check_inner(inner, psi, p).map_err(|e| format!("{{{p}}} is ill-typed: {e}"))?;
                Ok(HopiType::Drop(inner.clone()))
            }
        }
    }

    fn check_condition(
        &self,
        ck: &Checker<'_, Hopi>,
        env: &TypeEnv<HopiType>,
        psi: &HopiAssertion,
        c: &HopiCondition,
    ) -> Result<(), String> {
        match c {
            HopiCondition::Top => Ok(()),
            HopiCondition::ChanEq(a, b) => {
                let (ta, tb) = (ck.synth(env, psi, a)?, ck.synth(env, psi, b)?);
                if !matches!(ta, HopiType::Ch(_)) || ta != tb {
                    return Err(format!("{a} : {ta} and {b} : {tb} are not channels of one type"));
                }
                if !ck.sig.entails(psi, c) {
                    return Err(format!("{c} is never entailed"));
                }
                Ok(())
            }
            HopiCondition::Handle(p, _) => {
                ck.synth(env, psi, &HopiTerm::Proc(p.clone()))?;
                if !ck.sig.entails(psi, c) {
                    return Err(format!("{c} is never entailed"));
                }
                Ok(())
            }
        }
    }

    fn check_assertion(
        &self,
        ck: &Checker<'_, Hopi>,
        _env: &TypeEnv<HopiType>,
        psi: &HopiAssertion,
        a: &HopiAssertion,
    ) -> Result<(), String> {
        let all = ck.sig.compose(psi, a);
        for (p, _) in &a.0 {
            let inner = self.bound_type(&all, p)?;
            if !assertion_guarded(p) {
                return Err(format!("{{{p}}} has an unguarded assertion"));
            }
            ck.check_inner(inner, &all, p).map_err(|e| format!("{{{p}}} is ill-typed: {e}"))?;
        }
        Ok(())
    }

    fn subtype(&self, a: &HopiType, b: &HopiType) -> bool {
        a == b
    }

    fn compat(&self, t: &HopiType, _dir: Direction) -> Result<HopiType, String> {
        match t {
            HopiType::Ch(u) => Ok((**u).clone()),
            HopiType::Drop(_) => Err(format!("{t} is not a channel type")),
        }
    }

    fn extract_env(&self, _env: &TypeEnv<HopiType>, t: &HopiType) -> Result<TypeEnv<HopiType>, String> {
        match t {
            HopiType::Drop(env) => Ok(env.clone()),
            HopiType::Ch(_) => Err(format!("{t} is not a process type")),
        }
    }
}
