//! The reflective higher-order calculus: names are quoted processes, drop
//! runs the process inside a name, and subjects are compared up to name
//! equivalence.
//!
//! Name equivalence and structural congruence are decided through
//! [`ProcKey`]/[`NameKey`], a normal form that flattens and sorts parallel
//! components, removes `0`, resolves bound occurrences to binder levels and
//! rewrites `⌜⌞x⌟⌝` to `x`.

pub mod correspond;
pub mod encode;
pub mod gen;
pub mod typed;

use std::fmt;

pub use encode::{behav_eq, encode, encode_name, Rho, RhoAssertion, RhoCondition, RhoSig, RhoTerm};
pub use typed::{RhoType, RhoTypedSig, RhoTyping};

/// A ρ-process. Lifts and inputs may carry the annotations used by the
/// typed encoding; everything else ignores them.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum RhoProcess {
    Nil,
    Par(Box<RhoProcess>, Box<RhoProcess>),
    /// `x⟨P⟩`, optionally annotated with the type of `⌜P⌝`.
    Lift(RhoName, Box<RhoProcess>, Option<RhoType>),
    /// `x(y).P`, optionally annotated with the type of `y`.
    Input(RhoName, RhoName, Option<RhoType>, Box<RhoProcess>),
    /// `⌞x⌟`
    Drop(RhoName),
}

/// `⌜P⌝`
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RhoName(pub Box<RhoProcess>);

impl RhoName {
    pub fn quote(p: RhoProcess) -> Self {
        RhoName(Box::new(p))
    }

    /// `⌜0⌝`
    pub fn zero() -> Self {
        RhoName::quote(RhoProcess::Nil)
    }

    pub fn process(&self) -> &RhoProcess {
        &self.0
    }

    pub fn size(&self) -> usize {
        self.0.size()
    }
}

impl RhoProcess {
    pub fn par(p: RhoProcess, q: RhoProcess) -> Self {
        RhoProcess::Par(Box::new(p), Box::new(q))
    }

    pub fn lift(x: RhoName, p: RhoProcess) -> Self {
        RhoProcess::Lift(x, Box::new(p), None)
    }

    pub fn input(x: RhoName, y: RhoName, p: RhoProcess) -> Self {
        RhoProcess::Input(x, y, None, Box::new(p))
    }

    pub fn par_all(items: Vec<RhoProcess>) -> Self {
        items.into_iter().reduce(RhoProcess::par).unwrap_or(RhoProcess::Nil)
    }

    /// Constructor count, with a quote adding nothing beyond its process.
    pub fn size(&self) -> usize {
        match self {
            RhoProcess::Nil => 1,
            RhoProcess::Par(p, q) => 1 + p.size() + q.size(),
            RhoProcess::Lift(x, p, _) => 1 + x.size() + p.size(),
            RhoProcess::Input(x, y, _, p) => 1 + x.size() + y.size() + p.size(),
            RhoProcess::Drop(x) => 1 + x.size(),
        }
    }

    /// Process constructors only; names count as leaves of weight zero.
    pub fn shape_size(&self) -> usize {
        match self {
            RhoProcess::Nil | RhoProcess::Drop(_) => 1,
            RhoProcess::Par(p, q) => 1 + p.shape_size() + q.shape_size(),
            RhoProcess::Lift(_, p, _) | RhoProcess::Input(_, _, _, p) => 1 + p.shape_size(),
        }
    }

    /// Parallel components, without `0`.
    pub fn components(&self) -> Vec<&RhoProcess> {
        let mut out = Vec::new();
        fn go<'a>(p: &'a RhoProcess, out: &mut Vec<&'a RhoProcess>) {
            match p {
                RhoProcess::Nil => {}
                RhoProcess::Par(a, b) => {
                    go(a, out);
                    go(b, out);
                }
                _ => out.push(p),
            }
        }
        go(self, &mut out);
        out
    }

    /// Removes every annotation.
    pub fn erase(&self) -> RhoProcess {
        match self {
            RhoProcess::Nil => RhoProcess::Nil,
            RhoProcess::Par(p, q) => RhoProcess::par(p.erase(), q.erase()),
            RhoProcess::Lift(x, p, _) => RhoProcess::lift(x.clone(), p.erase()),
            RhoProcess::Input(x, y, _, p) => RhoProcess::input(x.clone(), y.clone(), p.erase()),
            RhoProcess::Drop(x) => RhoProcess::Drop(x.clone()),
        }
    }
}

// ---------------------------------------------------------------------------
// Normal forms

/// Normal form of a process up to structural congruence.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ProcKey {
    /// Sorted components; never a single one. `0` is the empty list.
    Par(Vec<ProcKey>),
    Lift(NameKey, Box<ProcKey>),
    Input(NameKey, Box<ProcKey>),
    Drop(NameKey),
    /// A generic process outside the image of the encoding, by its canonical
    /// form.
    Other(String),
}

/// Normal form of a name up to name equivalence.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum NameKey {
    /// An occurrence of the binder at this nesting level.
    Bound(usize),
    Quote(Box<ProcKey>),
    /// A free atomic name of the encoding.
    Free(crate::nominal::Name),
}

/// The key of `p` with no binders in scope.
pub fn proc_key(p: &RhoProcess) -> ProcKey {
    key_in(p, &mut Vec::new())
}

/// The key of `x` as a free name.
pub fn name_key(x: &RhoName) -> NameKey {
    match proc_key(&x.0) {
        ProcKey::Drop(inner) => inner,
        k => NameKey::Quote(Box::new(k)),
    }
}

fn occurrence(x: &RhoName, binders: &[NameKey]) -> NameKey {
    let k = name_key(x);
    match binders.iter().rposition(|b| *b == k) {
        Some(i) => NameKey::Bound(i),
        None => k,
    }
}

fn key_in(p: &RhoProcess, binders: &mut Vec<NameKey>) -> ProcKey {
    match p {
        RhoProcess::Nil => ProcKey::Par(vec![]),
        RhoProcess::Par(..) => {
            let mut items: Vec<ProcKey> = Vec::new();
            for c in p.components() {
                match key_in(c, binders) {
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
        RhoProcess::Lift(x, q, _) => ProcKey::Lift(occurrence(x, binders), Box::new(key_in(q, binders))),
        RhoProcess::Input(x, y, _, q) => {
            let subject = occurrence(x, binders);
            binders.push(name_key(y));
            let body = key_in(q, binders);
            binders.pop();
            ProcKey::Input(subject, Box::new(body))
        }
        RhoProcess::Drop(x) => ProcKey::Drop(occurrence(x, binders)),
    }
}

/// `x₁ ≡_N x₂`
pub fn name_eq(x1: &RhoName, x2: &RhoName) -> bool {
    name_key(x1) == name_key(x2)
}

/// `P ≡ Q`
pub fn struct_congruent(p: &RhoProcess, q: &RhoProcess) -> bool {
    proc_key(p) == proc_key(q)
}

// ---------------------------------------------------------------------------
// Substitution and reduction

/// `P{⌜Q⌝/y}`: every free name equivalent to `y` becomes `n`, and a drop of
/// such a name becomes the process inside `n`. Quoted processes are atomic.
pub fn rho_subst(p: &RhoProcess, y: &RhoName, n: &RhoName) -> RhoProcess {
    replace(p, &name_key(y), n, true)
}

/// Name-for-name renaming; drops stay drops.
fn rename(p: &RhoProcess, y: &NameKey, n: &RhoName) -> RhoProcess {
    replace(p, y, n, false)
}

fn replace(p: &RhoProcess, y: &NameKey, n: &RhoName, unquote: bool) -> RhoProcess {
    let swap = |x: &RhoName| if name_key(x) == *y { n.clone() } else { x.clone() };
    match p {
        RhoProcess::Nil => RhoProcess::Nil,
        RhoProcess::Par(a, b) => RhoProcess::par(replace(a, y, n, unquote), replace(b, y, n, unquote)),
        RhoProcess::Lift(x, q, t) => RhoProcess::Lift(swap(x), Box::new(replace(q, y, n, unquote)), t.clone()),
        RhoProcess::Drop(x) if unquote && name_key(x) == *y => (*n.0).clone(),
        RhoProcess::Drop(x) => RhoProcess::Drop(swap(x)),
        RhoProcess::Input(x, b, t, q) => {
            let subject = swap(x);
            let bk = name_key(b);
            if bk == *y {
                return RhoProcess::Input(subject, b.clone(), t.clone(), q.clone());
            }
            if bk == name_key(n) {
                let fresh = fresh_name(q.size() + n.size() + p.size());
                let renamed = rename(q, &bk, &fresh);
                return RhoProcess::Input(subject, fresh, t.clone(), Box::new(replace(&renamed, y, n, unquote)));
            }
            RhoProcess::Input(subject, b.clone(), t.clone(), Box::new(replace(q, y, n, unquote)))
        }
    }
}

/// A name whose normal form has `k` components, so it differs from every
/// name of smaller size.
fn fresh_name(k: usize) -> RhoName {
    RhoName::quote(RhoProcess::par_all((0..=k).map(|_| RhoProcess::Drop(RhoName::zero())).collect()))
}

/// All one-step successors, one per class of structural congruence, in key
/// order.
pub fn rho_step(p: &RhoProcess) -> Vec<RhoProcess> {
    let comps = p.components();
    let mut out: Vec<(ProcKey, RhoProcess)> = Vec::new();
    for (i, a) in comps.iter().enumerate() {
        let RhoProcess::Input(x1, y, _, body) = a else { continue };
        for (j, b) in comps.iter().enumerate() {
            let RhoProcess::Lift(x2, q, _) = b else { continue };
            if i == j || !name_eq(x1, x2) {
                continue;
            }
            let mut rest: Vec<RhoProcess> =
                comps.iter().enumerate().filter(|(k, _)| *k != i && *k != j).map(|(_, c)| (*c).clone()).collect();
            rest.push(rho_subst(body, y, &RhoName::quote((**q).clone())));
            let next = RhoProcess::par_all(rest);
            let key = proc_key(&next);
            if !out.iter().any(|(k, _)| *k == key) {
                out.push((key, next));
            }
        }
    }
    out.sort_by(|a, b| a.0.cmp(&b.0));
    out.into_iter().map(|(_, p)| p).collect()
}

// ---------------------------------------------------------------------------
// Enumeration

/// Every process of exactly `size` constructors, without annotations.
pub fn processes_of_size(size: usize) -> Vec<RhoProcess> {
    let mut table: Vec<Vec<RhoProcess>> = vec![vec![]];
    for s in 1..=size {
        let mut here = Vec::new();
        if s == 1 {
            here.push(RhoProcess::Nil);
        }
        if s >= 2 {
            for x in &table[s - 1] {
                here.push(RhoProcess::Drop(RhoName::quote(x.clone())));
            }
            for i in 1..s - 1 {
                for a in &table[i] {
                    for b in &table[s - 1 - i] {
                        here.push(RhoProcess::lift(RhoName::quote(a.clone()), b.clone()));
                        here.push(RhoProcess::par(a.clone(), b.clone()));
                    }
                }
            }
            for i in 1..s {
                for j in 1..s - i {
                    let k = s - 1 - i - j;
                    if k == 0 {
                        continue;
                    }
                    for x in &table[i] {
                        for y in &table[j] {
                            for body in &table[k] {
                                here.push(RhoProcess::input(RhoName::quote(x.clone()), RhoName::quote(y.clone()), body.clone()));
                            }
                        }
                    }
                }
            }
        }
        table.push(here);
    }
    table.pop().unwrap_or_default()
}

/// Every process of at most `size` constructors.
pub fn processes_up_to(size: usize) -> Vec<RhoProcess> {
    (1..=size).flat_map(processes_of_size).collect()
}

// ---------------------------------------------------------------------------
// Printing

impl fmt::Display for RhoName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &*self.0 {
            RhoProcess::Nil | RhoProcess::Drop(_) => write!(f, "@{}", self.0),
            p => write!(f, "@({p})"),
        }
    }
}

impl fmt::Display for RhoProcess {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RhoProcess::Par(p, q) => {
                fmt_atom(p, f)?;
                write!(f, " | {q}")
            }
            _ => fmt_atom(self, f),
        }
    }
}

fn fmt_atom(p: &RhoProcess, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    match p {
        RhoProcess::Nil => f.write_str("0"),
        RhoProcess::Drop(x) => write!(f, "*{x}"),
        RhoProcess::Lift(x, q, None) => write!(f, "{x}!({q})"),
        RhoProcess::Lift(x, q, Some(t)) => write!(f, "{x}!({q} : {t})"),
        RhoProcess::Input(x, y, t, body) => {
            match t {
                None => write!(f, "{x}?({y}).")?,
                Some(t) => write!(f, "{x}?({y}:{t}).")?,
            }
            fmt_atom(body, f)
        }
        RhoProcess::Par(..) => write!(f, "({p})"),
    }
}
