//! The ρ-calculus as an instance of the generic calculus.
//!
//! Bound ρ-names become atomic names. A free quoted name becomes a static
//! quote `⌜N⟦P⟧⌝`, and the object of a lift becomes a dynamic quote
//! `⟨⌜N⟦P⟧⌝⟩`. Both store the second-level translation, so name equivalence
//! can be read off the stored process. A dynamic quote is a handle for the
//! process it stands for once dropped, which is `N⟦P⟧` with every drop of a
//! free name replaced by `0`.

use std::collections::BTreeSet;
use std::fmt;

use super::typed::RhoType;
use super::{name_key, NameKey, ProcKey, RhoName, RhoProcess};
use crate::instance::{Data, Lang, Signature, Subst};
use crate::nominal::{Name, Nominal, Transposition};
use crate::syntax::{annotation_names, canonical_at, canonical_data, canonicalize, refresh, subst_process, Process};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Rho;

impl Lang for Rho {
    type Term = RhoTerm;
    type Condition = RhoCondition;
    type Assertion = RhoAssertion;
    type Type = RhoType;
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum RhoTerm {
    /// A bound name.
    Atom(Name),
    /// `⌜P⌝`: never substituted into and never dropped.
    Static(Box<Process<Rho>>),
    /// `⟨⌜P⌝⟩`: the object of a lift.
    Dyn(Box<Process<Rho>>),
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum RhoCondition {
    /// `M ↔ N`
    ChanEq(RhoTerm, RhoTerm),
    /// `P₁ ≡ P₂`
    Congr(Box<Process<Rho>>, Box<Process<Rho>>),
    /// `M ⇐ P`
    Handle(RhoTerm, Box<Process<Rho>>),
    Top,
}

/// A set of typed quotes; empty in the untyped encoding.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RhoAssertion(pub BTreeSet<(RhoTerm, RhoType)>);

impl RhoAssertion {
    pub fn single(m: RhoTerm, t: RhoType) -> Self {
        RhoAssertion(BTreeSet::from([(m, t)]))
    }

    pub fn union(&self, other: &Self) -> Self {
        RhoAssertion(self.0.union(&other.0).cloned().collect())
    }

    /// Types declared for terms equal to `m` up to alpha and `≡`.
    pub fn types_of(&self, m: &RhoTerm) -> BTreeSet<RhoType> {
        let target = canonical_data(m);
        self.0.iter().filter(|(n, _)| canonical_data(n) == target).map(|(_, t)| t.clone()).collect()
    }
}

// ---------------------------------------------------------------------------
// Nominal structure

impl Nominal for RhoTerm {
    fn support_into(&self, acc: &mut BTreeSet<Name>) {
        match self {
            RhoTerm::Atom(x) => {
                acc.insert(x.clone());
            }
            RhoTerm::Static(p) | RhoTerm::Dyn(p) => p.support_into(acc),
        }
    }

    fn swap(&self, t: &Transposition) -> Self {
        match self {
            RhoTerm::Atom(x) => RhoTerm::Atom(t.apply(x)),
            RhoTerm::Static(p) => RhoTerm::Static(Box::new((**p).swap(t))),
            RhoTerm::Dyn(p) => RhoTerm::Dyn(Box::new((**p).swap(t))),
        }
    }
}

impl Data for RhoTerm {
    fn refresh(&self) -> Self {
        match self {
            RhoTerm::Atom(_) => self.clone(),
            RhoTerm::Static(p) => RhoTerm::Static(Box::new(refresh(p))),
            RhoTerm::Dyn(p) => RhoTerm::Dyn(Box::new(refresh(p))),
        }
    }

    fn canonical(&self, depth: u32) -> Self {
        match self {
            RhoTerm::Atom(_) => self.clone(),
            RhoTerm::Static(p) => RhoTerm::Static(Box::new(canonical_at(p, depth))),
            RhoTerm::Dyn(p) => RhoTerm::Dyn(Box::new(canonical_at(p, depth))),
        }
    }

    fn size(&self) -> usize {
        match self {
            RhoTerm::Atom(_) => 1,
            RhoTerm::Static(p) | RhoTerm::Dyn(p) => 1 + p.size(),
        }
    }

    fn annotation_names(&self) -> BTreeSet<Name> {
        match self {
            RhoTerm::Atom(_) => BTreeSet::new(),
            RhoTerm::Static(p) | RhoTerm::Dyn(p) => annotation_names(p),
        }
    }
}

impl Nominal for RhoCondition {
    fn support_into(&self, acc: &mut BTreeSet<Name>) {
        match self {
            RhoCondition::ChanEq(a, b) => {
                a.support_into(acc);
                b.support_into(acc);
            }
            RhoCondition::Congr(p, q) => {
                p.support_into(acc);
                q.support_into(acc);
            }
            RhoCondition::Handle(m, p) => {
                m.support_into(acc);
                p.support_into(acc);
            }
            RhoCondition::Top => {}
        }
    }

    fn swap(&self, t: &Transposition) -> Self {
        match self {
            RhoCondition::ChanEq(a, b) => RhoCondition::ChanEq(a.swap(t), b.swap(t)),
            RhoCondition::Congr(p, q) => RhoCondition::Congr(Box::new((**p).swap(t)), Box::new((**q).swap(t))),
            RhoCondition::Handle(m, p) => RhoCondition::Handle(m.swap(t), Box::new((**p).swap(t))),
            RhoCondition::Top => RhoCondition::Top,
        }
    }
}

impl Data for RhoCondition {
    fn refresh(&self) -> Self {
        match self {
            RhoCondition::ChanEq(a, b) => RhoCondition::ChanEq(a.refresh(), b.refresh()),
            RhoCondition::Congr(p, q) => RhoCondition::Congr(Box::new(refresh(p)), Box::new(refresh(q))),
            RhoCondition::Handle(m, p) => RhoCondition::Handle(m.refresh(), Box::new(refresh(p))),
            RhoCondition::Top => RhoCondition::Top,
        }
    }

    fn canonical(&self, depth: u32) -> Self {
        match self {
            RhoCondition::ChanEq(a, b) => RhoCondition::ChanEq(a.canonical(depth), b.canonical(depth)),
            RhoCondition::Congr(p, q) => {
                RhoCondition::Congr(Box::new(canonical_at(p, depth)), Box::new(canonical_at(q, depth)))
            }
            RhoCondition::Handle(m, p) => RhoCondition::Handle(m.canonical(depth), Box::new(canonical_at(p, depth))),
            RhoCondition::Top => RhoCondition::Top,
        }
    }

    fn annotation_names(&self) -> BTreeSet<Name> {
        match self {
            RhoCondition::ChanEq(a, b) => a.annotation_names().union(&b.annotation_names()).cloned().collect(),
            RhoCondition::Congr(p, q) => annotation_names(p).union(&annotation_names(q)).cloned().collect(),
            RhoCondition::Handle(m, p) => m.annotation_names().union(&annotation_names(p)).cloned().collect(),
            RhoCondition::Top => BTreeSet::new(),
        }
    }
}

impl Nominal for RhoAssertion {
    fn support_into(&self, acc: &mut BTreeSet<Name>) {
        for (m, t) in &self.0 {
            m.support_into(acc);
            t.support_into(acc);
        }
    }

    fn swap(&self, t: &Transposition) -> Self {
        RhoAssertion(self.0.iter().map(|(m, u)| (m.swap(t), u.swap(t))).collect())
    }
}

impl Data for RhoAssertion {
    fn refresh(&self) -> Self {
        RhoAssertion(self.0.iter().map(|(m, t)| (m.refresh(), t.clone())).collect())
    }

    fn canonical(&self, depth: u32) -> Self {
        RhoAssertion(self.0.iter().map(|(m, t)| (m.canonical(depth), t.clone())).collect())
    }

    fn size(&self) -> usize {
        1 + self.0.iter().map(|(m, _)| m.size()).sum::<usize>()
    }

    fn annotation_names(&self) -> BTreeSet<Name> {
        let mut acc = BTreeSet::new();
        for (m, t) in &self.0 {
            acc.extend(m.annotation_names());
            t.support_into(&mut acc);
        }
        acc
    }
}

// ---------------------------------------------------------------------------
// Printing

impl fmt::Display for RhoTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RhoTerm::Atom(x) => write!(f, "{x}"),
            RhoTerm::Static(p) => write!(f, "[{p}]"),
            RhoTerm::Dyn(p) => write!(f, "<[{p}]>"),
        }
    }
}

impl fmt::Display for RhoCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RhoCondition::ChanEq(a, b) => write!(f, "{a} <-> {b}"),
            RhoCondition::Congr(p, q) => write!(f, "{{{p}}} == {{{q}}}"),
            RhoCondition::Handle(m, p) => write!(f, "{m} <= {{{p}}}"),
            RhoCondition::Top => f.write_str("true"),
        }
    }
}

impl fmt::Display for RhoAssertion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, (m, t)) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{m} : {t}")?;
        }
        f.write_str("}")
    }
}

// ---------------------------------------------------------------------------
// Translation

/// Failures of the typed translation.
#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum EncodeError {
    #[error("missing type annotation on {0}")]
    MissingAnnotation(String),
}

struct Encoder {
    typed: bool,
    counter: usize,
}

impl Encoder {
    fn fresh(&mut self) -> Name {
        self.counter += 1;
        Name::new(&format!("y{}", self.counter))
    }

    fn name(&mut self, x: &RhoName, binders: &[(NameKey, Name)]) -> Result<RhoTerm, EncodeError> {
        let k = name_key(x);
        if let Some((_, v)) = binders.iter().rev().find(|(b, _)| *b == k) {
            return Ok(RhoTerm::Atom(v.clone()));
        }
        let typed = std::mem::replace(&mut self.typed, false);
        let inner = self.process(x.process(), &mut Vec::new(), true);
        self.typed = typed;
        Ok(RhoTerm::Static(Box::new(inner?)))
    }

    /// `⟦P⟧`, or `N⟦P⟧` when `nform` is set.
    fn process(&mut self, p: &RhoProcess, binders: &mut Vec<(NameKey, Name)>, nform: bool) -> Result<Process<Rho>, EncodeError> {
        Ok(match p {
            RhoProcess::Nil => Process::Nil,
            RhoProcess::Par(a, b) => Process::par(self.process(a, binders, nform)?, self.process(b, binders, nform)?),
            RhoProcess::Drop(x) => match self.name(x, binders)? {
                m @ RhoTerm::Atom(_) => Process::Run(m),
                m if nform => Process::Run(m),
                _ => Process::Nil,
            },
            RhoProcess::Lift(x, q, t) => {
                let subject = self.name(x, binders)?;
                let mut hoisted = RhoAssertion::default();
                let payload = self.process(q, binders, true)?;
                let payload = if self.typed { hoist(payload, &mut hoisted) } else { payload };
                let object = RhoTerm::Dyn(Box::new(payload));
                let out = Process::output(subject, object.clone(), Process::Nil);
                match (self.typed, t) {
                    (false, _) => out,
                    (true, Some(t)) => {
                        let a = RhoAssertion::single(object, t.clone()).union(&hoisted);
                        Process::par(out, Process::Assert(a))
                    }
                    (true, None) => return Err(EncodeError::MissingAnnotation(p.to_string())),
                }
            }
            RhoProcess::Input(x, y, t, body) => {
                let subject = self.name(x, binders)?;
                let ty = match (self.typed, t) {
                    (_, Some(t)) => t.clone(),
                    (false, None) => RhoType::Base(Default::default()),
                    (true, None) => return Err(EncodeError::MissingAnnotation(p.to_string())),
                };
                let v = self.fresh();
                binders.push((name_key(y), v.clone()));
                let cont = self.process(body, binders, nform);
                binders.pop();
                Process::input(subject, vec![(v.clone(), ty)], RhoTerm::Atom(v), cont?)
            }
        })
    }
}

/// Moves the unguarded assertions of a lifted process into `acc`, so that
/// running the lifted process adds nothing to the frame.
fn hoist(p: Process<Rho>, acc: &mut RhoAssertion) -> Process<Rho> {
    match p {
        Process::Assert(a) => {
            *acc = acc.union(&a);
            Process::Nil
        }
        Process::Par(a, b) => match (hoist(*a, acc), hoist(*b, acc)) {
            (Process::Nil, q) | (q, Process::Nil) => q,
            (a, b) => Process::par(a, b),
        },
        q => q,
    }
}

/// `⟦P⟧` in the untyped encoding.
pub fn encode(p: &RhoProcess) -> Process<Rho> {
    Encoder { typed: false, counter: 0 }.process(p, &mut Vec::new(), false).expect("untyped encoding is total")
}

/// `⟦P⟧` with the typed assertions appended to every lift. Every lift and
/// input must be annotated.
pub fn encode_typed(p: &RhoProcess) -> Result<Process<Rho>, EncodeError> {
    Encoder { typed: true, counter: 0 }.process(p, &mut Vec::new(), false)
}

/// The object `⟨⌜N⟦P⟧⌝⟩` of a typed lift of `P`, with the assertions
/// hoisted out of `N⟦P⟧`.
pub fn encode_object_typed(p: &RhoProcess) -> Result<(RhoTerm, RhoAssertion), EncodeError> {
    let mut hoisted = RhoAssertion::default();
    let q = hoist(Encoder { typed: true, counter: 0 }.process(p, &mut Vec::new(), true)?, &mut hoisted);
    Ok((RhoTerm::Dyn(Box::new(q)), hoisted))
}

/// `⟦x⟧` for a free name: the static quote `⌜N⟦P⟧⌝`.
pub fn encode_name(x: &RhoName) -> RhoTerm {
    Encoder { typed: false, counter: 0 }.name(x, &[]).expect("untyped encoding is total")
}

/// The dropped form of a stored process: drops of static quotes become `0`
/// and drops of dynamic quotes become the process they stand for.
pub fn strip(p: &Process<Rho>) -> Process<Rho> {
    match p {
        Process::Run(RhoTerm::Static(_)) => Process::Nil,
        Process::Run(RhoTerm::Dyn(q)) => strip(q),
        Process::Par(a, b) => Process::par(strip(a), strip(b)),
        Process::Output { subject, object, cont } => Process::output(subject.clone(), object.clone(), strip(cont)),
        Process::Input { subject, binders, pattern, cont } => {
            Process::input(subject.clone(), binders.clone(), pattern.clone(), strip(cont))
        }
        Process::Case(bs) => Process::Case(bs.iter().map(|(c, q)| (c.clone(), strip(q))).collect()),
        Process::Restrict(x, t, q) => Process::restrict(x.clone(), t.clone(), strip(q)),
        Process::Repl(q) => Process::repl(strip(q)),
        Process::Nil | Process::Run(_) | Process::Assert(_) => p.clone(),
    }
}

// ---------------------------------------------------------------------------
// Normal forms of encoded processes

/// The normal form of a term used as a channel.
pub fn term_key(m: &RhoTerm) -> NameKey {
    occurrence(m, &[])
}

/// The normal form of an encoded process, read as the ρ-process it
/// translates. Assertions are ignored and `run ⟨⌜P⌝⟩` counts as `P`.
pub fn encoded_key(p: &Process<Rho>) -> ProcKey {
    key_in(p, &mut Vec::new())
}

fn occurrence(m: &RhoTerm, binders: &[Name]) -> NameKey {
    match m {
        RhoTerm::Atom(x) => match binders.iter().rposition(|b| b == x) {
            Some(i) => NameKey::Bound(i),
            None => NameKey::Free(x.clone()),
        },
        RhoTerm::Static(p) | RhoTerm::Dyn(p) => match key_in(p, &mut Vec::new()) {
            ProcKey::Drop(inner) => inner,
            k => NameKey::Quote(Box::new(k)),
        },
    }
}

fn key_in(p: &Process<Rho>, binders: &mut Vec<Name>) -> ProcKey {
    match p {
        Process::Nil | Process::Assert(_) => ProcKey::Par(vec![]),
        Process::Par(a, b) => join(vec![key_in(a, binders), key_in(b, binders)]),
        Process::Run(RhoTerm::Dyn(q)) => key_in(q, binders),
        Process::Run(m) => ProcKey::Drop(occurrence(m, binders)),
        Process::Output { subject, object: RhoTerm::Dyn(q), cont } => {
            let lift = ProcKey::Lift(occurrence(subject, binders), Box::new(key_in(q, binders)));
            join(vec![lift, key_in(cont, binders)])
        }
        Process::Input { subject, binders: bs, pattern, cont } if bs.len() == 1 && *pattern == RhoTerm::Atom(bs[0].0.clone()) => {
            let subject = occurrence(subject, binders);
            binders.push(bs[0].0.clone());
            let body = key_in(cont, binders);
            binders.pop();
            ProcKey::Input(subject, Box::new(body))
        }
        _ => ProcKey::Other(canonicalize(p).to_string()),
    }
}

fn join(parts: Vec<ProcKey>) -> ProcKey {
    let mut items = Vec::new();
    for k in parts {
        match k {
            ProcKey::Par(inner) => items.extend(inner),
            k => items.push(k),
        }
    }
    items.sort();
    if items.len() == 1 {
        items.pop().expect("one item")
    } else {
        ProcKey::Par(items)
    }
}

/// `P ≃ Q`: equal after rewriting `run ⟨⌜P⌝⟩` to the process it stands for
/// and dropping inert drops of static quotes, up to structural congruence.
pub fn behav_eq(p: &Process<Rho>, q: &Process<Rho>) -> bool {
    encoded_key(&strip(p)) == encoded_key(&strip(q))
}

// ---------------------------------------------------------------------------
// Signature

/// The untyped ρ-instance.
pub struct RhoSig;

impl Signature<Rho> for RhoSig {
    fn name(&self) -> &'static str {
        "rho"
    }

    fn unit(&self) -> RhoAssertion {
        RhoAssertion::default()
    }

    fn compose(&self, a: &RhoAssertion, b: &RhoAssertion) -> RhoAssertion {
        a.union(b)
    }

    fn entails(&self, psi: &RhoAssertion, phi: &RhoCondition) -> bool {
        match phi {
            RhoCondition::Top => true,
            RhoCondition::ChanEq(m, k) => self.chan_eq(psi, m, k),
            RhoCondition::Congr(p, q) => encoded_key(p) == encoded_key(q),
            RhoCondition::Handle(m, p) => {
                let target = encoded_key(p);
                self.handles(psi, m).iter().any(|h| encoded_key(h) == target)
            }
        }
    }

    fn chan_eq(&self, _psi: &RhoAssertion, m: &RhoTerm, k: &RhoTerm) -> bool {
        term_key(m) == term_key(k)
    }

    fn handles(&self, _psi: &RhoAssertion, m: &RhoTerm) -> Vec<Process<Rho>> {
        match m {
            RhoTerm::Static(p) | RhoTerm::Dyn(p) => vec![strip(p)],
            RhoTerm::Atom(_) => vec![],
        }
    }

    fn var(&self, x: &Name) -> RhoTerm {
        RhoTerm::Atom(x.clone())
    }

    fn subst_term(&self, t: &RhoTerm, s: &Subst<Rho>) -> RhoTerm {
        match t {
            RhoTerm::Atom(x) => match s.iter().find(|(y, _)| y == x) {
                Some((_, l)) => l.clone(),
                None => t.clone(),
            },
            RhoTerm::Static(_) => t.clone(),
            RhoTerm::Dyn(p) => RhoTerm::Dyn(Box::new(subst_process(self, p, s))),
        }
    }

    fn subst_condition(&self, c: &RhoCondition, s: &Subst<Rho>) -> RhoCondition {
        match c {
            RhoCondition::ChanEq(a, b) => RhoCondition::ChanEq(self.subst_term(a, s), self.subst_term(b, s)),
            RhoCondition::Congr(p, q) => {
                RhoCondition::Congr(Box::new(subst_process(self, p, s)), Box::new(subst_process(self, q, s)))
            }
            RhoCondition::Handle(m, p) => RhoCondition::Handle(self.subst_term(m, s), Box::new(subst_process(self, p, s))),
            RhoCondition::Top => RhoCondition::Top,
        }
    }

    fn subst_assertion(&self, a: &RhoAssertion, s: &Subst<Rho>) -> RhoAssertion {
        RhoAssertion(a.0.iter().map(|(m, t)| (self.subst_term(m, s), t.clone())).collect())
    }

    fn match_pattern(&self, pattern: &RhoTerm, binders: &[Name], value: &RhoTerm) -> Option<Subst<Rho>> {
        match (pattern, binders, value) {
            (RhoTerm::Atom(x), [y], RhoTerm::Dyn(_)) if x == y => Some(vec![(y.clone(), value.clone())]),
            _ => None,
        }
    }

    fn specializes(&self, a: &RhoAssertion, b: &RhoAssertion) -> bool {
        a.0.is_subset(&b.0)
    }
}
