//! Generic process syntax, well-formedness, frames, substitution and
//! structural congruence.

use std::collections::BTreeSet;
use std::fmt;

use crate::instance::{subst_names, Data, Lang, Signature, Subst};
use crate::nominal::{Name, Nominal, Transposition, CANON_BASE};

/// A position in a process tree. Children are numbered: `Par` 0/1, prefix
/// continuation 0, case branch `i`, restriction and replication body 0.
pub type Path = Vec<usize>;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Process<L: Lang> {
    Nil,
    Par(Box<Process<L>>, Box<Process<L>>),
    Output {
        subject: L::Term,
        object: L::Term,
        cont: Box<Process<L>>,
    },
    Input {
        subject: L::Term,
        binders: Vec<(Name, L::Type)>,
        pattern: L::Term,
        cont: Box<Process<L>>,
    },
    Run(L::Term),
    Case(Vec<(L::Condition, Process<L>)>),
    Restrict(Name, L::Type, Box<Process<L>>),
    Repl(Box<Process<L>>),
    Assert(L::Assertion),
}

impl<L: Lang> Process<L> {
    pub fn par(p: Process<L>, q: Process<L>) -> Self {
        Process::Par(Box::new(p), Box::new(q))
    }

    pub fn output(subject: L::Term, object: L::Term, cont: Process<L>) -> Self {
        Process::Output { subject, object, cont: Box::new(cont) }
    }

    pub fn input(subject: L::Term, binders: Vec<(Name, L::Type)>, pattern: L::Term, cont: Process<L>) -> Self {
        Process::Input { subject, binders, pattern, cont: Box::new(cont) }
    }

    pub fn restrict(x: Name, ty: L::Type, body: Process<L>) -> Self {
        Process::Restrict(x, ty, Box::new(body))
    }

    pub fn repl(body: Process<L>) -> Self {
        Process::Repl(Box::new(body))
    }

    /// Right-nested parallel composition of `items`; `0` when empty.
    pub fn par_all(items: Vec<Process<L>>) -> Self {
        let mut it = items.into_iter().rev();
        match it.next() {
            None => Process::Nil,
            Some(last) => it.fold(last, |acc, p| Process::par(p, acc)),
        }
    }

    /// Flattens nested `Par` nodes.
    pub fn components(&self) -> Vec<&Process<L>> {
        let mut out = Vec::new();
        fn go<'a, L: Lang>(p: &'a Process<L>, out: &mut Vec<&'a Process<L>>) {
            match p {
                Process::Par(a, b) => {
                    go(a, out);
                    go(b, out);
                }
                other => out.push(other),
            }
        }
        go(self, &mut out);
        out
    }

    pub fn is_nil(&self) -> bool {
        matches!(self, Process::Nil)
    }

    /// Number of constructors, counting instance data by its own size.
    pub fn size(&self) -> usize {
        match self {
            Process::Nil => 1,
            Process::Par(a, b) => 1 + a.size() + b.size(),
            Process::Output { subject, object, cont } => 1 + subject.size() + object.size() + cont.size(),
            Process::Input { subject, binders, pattern, cont } => {
                1 + subject.size() + binders.len() + pattern.size() + cont.size()
            }
            Process::Run(m) => 1 + m.size(),
            Process::Case(bs) => 1 + bs.iter().map(|(c, p)| c.size() + p.size()).sum::<usize>(),
            Process::Restrict(_, _, p) => 2 + p.size(),
            Process::Repl(p) => 1 + p.size(),
            Process::Assert(a) => 1 + a.size(),
        }
    }

    /// The subterm at `path`, if it exists.
    pub fn at(&self, path: &[usize]) -> Option<&Process<L>> {
        let Some((&i, rest)) = path.split_first() else {
            return Some(self);
        };
        let child = match (self, i) {
            (Process::Par(a, _), 0) => a,
            (Process::Par(_, b), 1) => b,
            (Process::Output { cont, .. }, 0) | (Process::Input { cont, .. }, 0) => cont,
            (Process::Case(bs), i) if i < bs.len() => return bs[i].1.at(rest),
            (Process::Restrict(_, _, p), 0) | (Process::Repl(p), 0) => p,
            _ => return None,
        };
        child.at(rest)
    }
}

impl<L: Lang> Default for Process<L> {
    fn default() -> Self {
        Process::Nil
    }
}

impl<L: Lang> Nominal for Process<L> {
    fn support_into(&self, acc: &mut BTreeSet<Name>) {
        match self {
            Process::Nil => {}
            Process::Par(a, b) => {
                a.support_into(acc);
                b.support_into(acc);
            }
            Process::Output { subject, object, cont } => {
                subject.support_into(acc);
                object.support_into(acc);
                cont.support_into(acc);
            }
            Process::Input { subject, binders, pattern, cont } => {
                subject.support_into(acc);
                let mut inner = BTreeSet::new();
                pattern.support_into(&mut inner);
                cont.support_into(&mut inner);
                for (x, t) in binders {
                    inner.remove(x);
                    t.support_into(acc);
                }
                acc.extend(inner);
            }
            Process::Run(m) => m.support_into(acc),
            Process::Case(bs) => {
                for (c, p) in bs {
                    c.support_into(acc);
                    p.support_into(acc);
                }
            }
            Process::Restrict(x, t, p) => {
                t.support_into(acc);
                let mut inner = p.support();
                inner.remove(x);
                acc.extend(inner);
            }
            Process::Repl(p) => p.support_into(acc),
            Process::Assert(a) => a.support_into(acc),
        }
    }

    fn swap(&self, t: &Transposition) -> Self {
        match self {
            Process::Nil => Process::Nil,
            Process::Par(a, b) => Process::par((**a).swap(t), (**b).swap(t)),
            Process::Output { subject, object, cont } => Process::output(subject.swap(t), object.swap(t), (**cont).swap(t)),
            Process::Input { subject, binders, pattern, cont } => Process::input(
                subject.swap(t),
                binders.iter().map(|(x, ty)| (t.apply(x), ty.swap(t))).collect(),
                pattern.swap(t),
                (**cont).swap(t),
            ),
            Process::Run(m) => Process::Run(m.swap(t)),
            Process::Case(bs) => Process::Case(bs.iter().map(|(c, p)| (c.swap(t), p.swap(t))).collect()),
            Process::Restrict(x, ty, p) => Process::restrict(t.apply(x), ty.swap(t), (**p).swap(t)),
            Process::Repl(p) => Process::repl((**p).swap(t)),
            Process::Assert(a) => Process::Assert(a.swap(t)),
        }
    }
}

// ---------------------------------------------------------------------------
// Well-formedness

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IllFormed {
    pub path: Path,
    pub reason: String,
}

impl fmt::Display for IllFormed {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ill-formed at {:?}: {}", self.path, self.reason)
    }
}

/// No assertion may occur unguarded inside a case branch or under
/// replication.
pub fn well_formed<L: Lang>(p: &Process<L>) -> Result<(), IllFormed> {
    fn go<L: Lang>(p: &Process<L>, restricted: Option<&'static str>, path: &mut Path) -> Result<(), IllFormed> {
        let child = |i: usize, q: &Process<L>, r: Option<&'static str>, path: &mut Path| {
            path.push(i);
            let res = go(q, r, path);
            path.pop();
            res
        };
        match p {
            Process::Nil | Process::Run(_) => Ok(()),
            Process::Assert(_) => match restricted {
                Some(ctx) => Err(IllFormed { path: path.clone(), reason: format!("unguarded assertion in {ctx}") }),
                None => Ok(()),
            },
            Process::Par(a, b) => {
                child(0, a, restricted, path)?;
                child(1, b, restricted, path)
            }
            Process::Output { cont, .. } | Process::Input { cont, .. } => child(0, cont, None, path),
            Process::Case(bs) => {
                for (i, (_, q)) in bs.iter().enumerate() {
                    child(i, q, Some("a case branch"), path)?;
                }
                Ok(())
            }
            Process::Restrict(_, _, q) => child(0, q, restricted, path),
            Process::Repl(q) => child(0, q, Some("a replicated process"), path),
        }
    }
    go(p, None, &mut Vec::new())
}

/// True when `p` has no unguarded assertion at all; required of processes
/// reachable through a handle.
pub fn assertion_guarded<L: Lang>(p: &Process<L>) -> bool {
    match p {
        Process::Assert(_) => false,
        Process::Nil | Process::Run(_) | Process::Output { .. } | Process::Input { .. } => true,
        Process::Par(a, b) => assertion_guarded(a) && assertion_guarded(b),
        Process::Case(bs) => bs.iter().all(|(_, q)| assertion_guarded(q)),
        Process::Restrict(_, _, q) | Process::Repl(q) => assertion_guarded(q),
    }
}

// ---------------------------------------------------------------------------
// Frames

/// `F_Ψ(p)`: composition of the unguarded assertions, `1` elsewhere.
pub fn frame_assertion<L: Lang>(sig: &dyn Signature<L>, p: &Process<L>) -> L::Assertion {
    match p {
        Process::Par(a, b) => sig.compose(&frame_assertion(sig, a), &frame_assertion(sig, b)),
        Process::Restrict(_, _, q) => frame_assertion(sig, q),
        Process::Assert(a) => a.clone(),
        _ => sig.unit(),
    }
}

/// `F_ν(p)`: unguarded restrictions in left-to-right order.
pub fn frame_names<L: Lang>(p: &Process<L>) -> Vec<(Name, L::Type)> {
    let mut out = Vec::new();
    fn go<L: Lang>(p: &Process<L>, out: &mut Vec<(Name, L::Type)>) {
        match p {
            Process::Par(a, b) => {
                go(a, out);
                go(b, out);
            }
            Process::Restrict(x, t, q) => {
                out.push((x.clone(), t.clone()));
                go(q, out);
            }
            _ => {}
        }
    }
    go(p, &mut out);
    out
}

/// Names occurring in the type annotations of `p`, including those inside
/// embedded instance data.
pub fn annotation_names<L: Lang>(p: &Process<L>) -> BTreeSet<Name> {
    let mut out = BTreeSet::new();
    fn go<L: Lang>(p: &Process<L>, out: &mut BTreeSet<Name>) {
        match p {
            Process::Nil => {}
            Process::Par(a, b) => {
                go(a, out);
                go(b, out);
            }
            Process::Output { subject, object, cont } => {
                out.extend(subject.annotation_names());
                out.extend(object.annotation_names());
                go(cont, out);
            }
            Process::Input { subject, binders, pattern, cont } => {
                out.extend(subject.annotation_names());
                for (_, t) in binders {
                    t.support_into(out);
                }
                out.extend(pattern.annotation_names());
                go(cont, out);
            }
            Process::Run(m) => out.extend(m.annotation_names()),
            Process::Case(branches) => {
                for (c, q) in branches {
                    out.extend(c.annotation_names());
                    go(q, out);
                }
            }
            Process::Restrict(_, t, q) => {
                t.support_into(out);
                go(q, out);
            }
            Process::Repl(q) => go(q, out),
            Process::Assert(a) => out.extend(a.annotation_names()),
        }
    }
    go(p, &mut out);
    out
}

// ---------------------------------------------------------------------------
// Renaming and substitution

/// Renames every binder (including those inside instance data) to a fresh
/// name. The result is alpha-equivalent to `p`.
pub fn refresh<L: Lang>(p: &Process<L>) -> Process<L> {
    match p {
        Process::Nil => Process::Nil,
        Process::Par(a, b) => Process::par(refresh(a), refresh(b)),
        Process::Output { subject, object, cont } => Process::output(subject.refresh(), object.refresh(), refresh(cont)),
        Process::Input { subject, binders, pattern, cont } => {
            let mut pattern = pattern.refresh();
            let mut cont = refresh(cont);
            let mut new_binders = Vec::with_capacity(binders.len());
            for (x, t) in binders {
                let y = x.freshen();
                let tr = Transposition::new(x.clone(), y.clone());
                pattern = pattern.swap(&tr);
                cont = cont.swap(&tr);
                new_binders.push((y, t.refresh()));
            }
            Process::input(subject.refresh(), new_binders, pattern, cont)
        }
        Process::Run(m) => Process::Run(m.refresh()),
        Process::Case(bs) => Process::Case(bs.iter().map(|(c, q)| (c.refresh(), refresh(q))).collect()),
        Process::Restrict(x, t, q) => {
            let y = x.freshen();
            let body = refresh(q).swap(&Transposition::new(x.clone(), y.clone()));
            Process::restrict(y, t.refresh(), body)
        }
        Process::Repl(q) => Process::repl(refresh(q)),
        Process::Assert(a) => Process::Assert(a.refresh()),
    }
}

/// Capture-avoiding simultaneous substitution. Types are never substituted
/// into.
pub fn subst_process<L: Lang>(sig: &dyn Signature<L>, p: &Process<L>, s: &Subst<L>) -> Process<L> {
    if s.is_empty() {
        return p.clone();
    }
    match p {
        Process::Nil => Process::Nil,
        Process::Par(a, b) => Process::par(subst_process(sig, a, s), subst_process(sig, b, s)),
        Process::Output { subject, object, cont } => Process::output(
            sig.subst_term(subject, s),
            sig.subst_term(object, s),
            subst_process(sig, cont, s),
        ),
        Process::Input { subject, binders, pattern, cont } => {
            let avoid = subst_names::<L>(s);
            let mut pattern = pattern.clone();
            let mut cont = (**cont).clone();
            let mut new_binders = Vec::with_capacity(binders.len());
            for (x, t) in binders {
                if avoid.contains(x) {
                    let y = x.freshen();
                    let tr = Transposition::new(x.clone(), y.clone());
                    pattern = pattern.swap(&tr);
                    cont = cont.swap(&tr);
                    new_binders.push((y, t.clone()));
                } else {
                    new_binders.push((x.clone(), t.clone()));
                }
            }
            Process::input(
                sig.subst_term(subject, s),
                new_binders,
                sig.subst_term(&pattern, s),
                subst_process(sig, &cont, s),
            )
        }
        Process::Run(m) => Process::Run(sig.subst_term(m, s)),
        Process::Case(bs) => Process::Case(
            bs.iter()
                .map(|(c, q)| (sig.subst_condition(c, s), subst_process(sig, q, s)))
                .collect(),
        ),
        Process::Restrict(x, t, q) => {
            if subst_names::<L>(s).contains(x) {
                let y = x.freshen();
                let body = q.swap(&Transposition::new(x.clone(), y.clone()));
                Process::restrict(y, t.clone(), subst_process(sig, &body, s))
            } else {
                Process::restrict(x.clone(), t.clone(), subst_process(sig, q, s))
            }
        }
        Process::Repl(q) => Process::repl(subst_process(sig, q, s)),
        Process::Assert(a) => Process::Assert(sig.subst_assertion(a, s)),
    }
}

// ---------------------------------------------------------------------------
// Structural congruence

/// Canonical representative of the structural-congruence class of `p`.
///
/// Restrictions are pushed to their narrowest scope (the parallel components
/// that mention the bound name; a restriction mentioned by no component
/// becomes its own `(νx:T)0` component), parallel compositions are
/// flattened with `0` units removed and sorted, and binders are renamed to
/// canonical names indexed by binding depth.
pub fn canonicalize<L: Lang>(p: &Process<L>) -> Process<L> {
    canonical_at(&refresh(p), canonical_base(&p.support()))
}

/// Canonical representative of instance data up to alpha-equivalence and
/// structural congruence of embedded processes.
pub fn canonical_data<D: Data>(d: &D) -> D {
    d.refresh().canonical(canonical_base(&d.support()))
}

fn canonical_base(names: &BTreeSet<Name>) -> u32 {
    names
        .iter()
        .filter(|n| n.is_canonical())
        .map(|n| (n.id() - CANON_BASE) as u32 + 1)
        .max()
        .unwrap_or(0)
}

/// Canonical form of an already refreshed process whose binders are
/// numbered from `depth`. Used by instance data that embeds processes.
pub fn canonical_at<L: Lang>(p: &Process<L>, depth: u32) -> Process<L> {
    rename_sort(scope_items(p), depth)
}

pub fn struct_eq<L: Lang>(p: &Process<L>, q: &Process<L>) -> bool {
    canonicalize(p) == canonicalize(q)
}

/// Scope-normal items of `p` (binder names untouched).
fn scope_items<L: Lang>(p: &Process<L>) -> Vec<Process<L>> {
    match p {
        Process::Nil => vec![],
        Process::Par(a, b) => {
            let mut v = scope_items(a);
            v.extend(scope_items(b));
            v
        }
        Process::Restrict(x, t, q) => {
            let items = scope_items(q);
            let (inside, outside): (Vec<_>, Vec<_>) = items.into_iter().partition(|i| i.support().contains(x));
            let mut out = outside;
            out.push(Process::restrict(x.clone(), t.clone(), Process::par_all(inside)));
            out
        }
        Process::Output { subject, object, cont } => {
            vec![Process::output(subject.clone(), object.clone(), Process::par_all(scope_items(cont)))]
        }
        Process::Input { subject, binders, pattern, cont } => vec![Process::input(
            subject.clone(),
            binders.clone(),
            pattern.clone(),
            Process::par_all(scope_items(cont)),
        )],
        Process::Case(bs) => vec![Process::Case(
            bs.iter().map(|(c, q)| (c.clone(), Process::par_all(scope_items(q)))).collect(),
        )],
        Process::Repl(q) => vec![Process::repl(Process::par_all(scope_items(q)))],
        Process::Run(_) | Process::Assert(_) => vec![p.clone()],
    }
}

fn rename_sort<L: Lang>(items: Vec<Process<L>>, depth: u32) -> Process<L> {
    let mut out: Vec<Process<L>> = items.iter().map(|i| rename_item(i, depth)).collect();
    out.sort();
    Process::par_all(out)
}

fn rename_item<L: Lang>(p: &Process<L>, depth: u32) -> Process<L> {
    let sub = |q: &Process<L>, d: u32| rename_sort(q.components().into_iter().cloned().collect(), d);
    match p {
        Process::Nil => Process::Nil,
        Process::Par(..) => sub(p, depth),
        Process::Restrict(x, t, q) => {
            let c = Name::canonical(depth, x.hint());
            let body = q.swap(&Transposition::new(x.clone(), c.clone()));
            Process::restrict(c, t.canonical(depth), sub(&body, depth + 1))
        }
        Process::Output { subject, object, cont } => {
            Process::output(subject.canonical(depth), object.canonical(depth), sub(cont, depth))
        }
        Process::Input { subject, binders, pattern, cont } => {
            let mut pattern = pattern.clone();
            let mut cont = (**cont).clone();
            let mut new_binders = Vec::with_capacity(binders.len());
            for (i, (x, t)) in binders.iter().enumerate() {
                let c = Name::canonical(depth + i as u32, x.hint());
                let tr = Transposition::new(x.clone(), c.clone());
                pattern = pattern.swap(&tr);
                cont = cont.swap(&tr);
                new_binders.push((c, t.canonical(depth)));
            }
            let inner = depth + binders.len() as u32;
            Process::input(subject.canonical(depth), new_binders, pattern.canonical(inner), sub(&cont, inner))
        }
        Process::Run(m) => Process::Run(m.canonical(depth)),
        Process::Case(bs) => Process::Case(bs.iter().map(|(c, q)| (c.canonical(depth), sub(q, depth))).collect()),
        Process::Repl(q) => Process::repl(sub(q, depth)),
        Process::Assert(a) => Process::Assert(a.canonical(depth)),
    }
}

// ---------------------------------------------------------------------------
// Printing

impl<L: Lang> fmt::Display for Process<L> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Process::Par(..) => {
                for (i, c) in self.components().into_iter().enumerate() {
                    if i > 0 {
                        write!(f, " | ")?;
                    }
                    fmt_atom(c, f, false)?;
                }
                Ok(())
            }
            other => fmt_atom(other, f, false),
        }
    }
}

/// Prints `p` in a position that only admits an atomic process. Parallel
/// compositions are parenthesised; `case` is parenthesised when `nested`.
fn fmt_atom<L: Lang>(p: &Process<L>, f: &mut fmt::Formatter<'_>, nested: bool) -> fmt::Result {
    match p {
        Process::Nil => write!(f, "0"),
        Process::Par(..) => write!(f, "({p})"),
        Process::Output { subject, object, cont } => {
            write!(f, "'{subject}<{object}>.")?;
            fmt_atom(cont, f, true)
        }
        Process::Input { subject, binders, pattern, cont } => {
            write!(f, "{subject}(\\")?;
            for (i, (x, t)) in binders.iter().enumerate() {
                if i > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{x}:{t}")?;
            }
            write!(f, "){pattern}.")?;
            fmt_atom(cont, f, true)
        }
        Process::Run(m) => write!(f, "run {m}"),
        Process::Case(bs) => {
            if nested {
                write!(f, "(")?;
            }
            write!(f, "case ")?;
            for (i, (c, q)) in bs.iter().enumerate() {
                if i > 0 {
                    write!(f, " [] ")?;
                }
                write!(f, "{c} : ")?;
                fmt_atom(q, f, true)?;
            }
            if nested {
                write!(f, ")")?;
            }
            Ok(())
        }
        Process::Restrict(x, t, q) => {
            write!(f, "(new {x}:{t})")?;
            fmt_atom(q, f, true)
        }
        Process::Repl(q) => {
            write!(f, "!")?;
            fmt_atom(q, f, true)
        }
        Process::Assert(a) => write!(f, "(| {a} |)"),
    }
}
