//! Atomic names, transpositions, support and freshness.
//!
//! Every datatype that can mention names implements [`Nominal`]. Binders are
//! handled by the owning datatype: `swap` goes under binders, `support_into`
//! removes bound names.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

/// Names with an id at or above this bound are canonical binder names
/// (`CANON_BASE + level`). The fresh supply never reaches this range.
pub(crate) const CANON_BASE: u64 = 1 << 62;

static SUPPLY: AtomicU64 = AtomicU64::new(1);

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Origin {
    /// Written by the user; printed verbatim.
    User,
    /// Drawn from the fresh supply; printed with its id.
    Fresh,
    /// Canonical binder (de Bruijn level).
    Canonical,
}

/// An atomic name. Equality, ordering and hashing use only the id.
#[derive(Clone)]
pub struct Name {
    id: u64,
    hint: Arc<str>,
    origin: Origin,
}

impl Name {
    /// A user-visible name with a new unique id.
    pub fn new(hint: &str) -> Name {
        Name {
            id: SUPPLY.fetch_add(1, Ordering::Relaxed),
            hint: Arc::from(hint),
            origin: Origin::User,
        }
    }

    /// A fresh name that shares this name's display hint.
    pub fn freshen(&self) -> Name {
        Name {
            id: SUPPLY.fetch_add(1, Ordering::Relaxed),
            hint: Arc::from(base_hint(&self.hint)),
            origin: Origin::Fresh,
        }
    }

    pub fn fresh(hint: &str) -> Name {
        Name {
            id: SUPPLY.fetch_add(1, Ordering::Relaxed),
            hint: Arc::from(base_hint(hint)),
            origin: Origin::Fresh,
        }
    }

    /// The canonical binder name for de Bruijn level `level`.
    pub fn canonical(level: u32, hint: &str) -> Name {
        Name {
            id: CANON_BASE + level as u64,
            hint: Arc::from(base_hint(hint)),
            origin: Origin::Canonical,
        }
    }

    pub fn id(&self) -> u64 {
        self.id
    }

    pub fn hint(&self) -> &str {
        &self.hint
    }

    pub fn is_canonical(&self) -> bool {
        self.origin == Origin::Canonical
    }
}

/// Strips a trailing `_<digits>` suffix so re-canonicalised names keep a
/// stable spelling.
fn base_hint(hint: &str) -> &str {
    match hint.rfind('_') {
        Some(i) if i > 0 && i + 1 < hint.len() && hint[i + 1..].bytes().all(|b| b.is_ascii_digit()) => {
            &hint[..i]
        }
        _ => hint,
    }
}

impl PartialEq for Name {
    fn eq(&self, other: &Self) -> bool {
        self.id == other.id
    }
}
impl Eq for Name {}

impl PartialOrd for Name {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Name {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.id.cmp(&other.id)
    }
}

impl Hash for Name {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.id.hash(state)
    }
}

impl fmt::Display for Name {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.origin {
            Origin::User => write!(f, "{}", self.hint),
            Origin::Fresh => write!(f, "{}_{}", self.hint, self.id),
            Origin::Canonical => write!(f, "{}_{}", self.hint, self.id - CANON_BASE),
        }
    }
}

impl fmt::Debug for Name {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}#{}", self, self.id)
    }
}

/// The transposition `(first, second)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Transposition {
    pub first: Name,
    pub second: Name,
}

impl Transposition {
    pub fn new(first: Name, second: Name) -> Self {
        Transposition { first, second }
    }

    pub fn apply(&self, n: &Name) -> Name {
        if *n == self.first {
            self.second.clone()
        } else if *n == self.second {
            self.first.clone()
        } else {
            n.clone()
        }
    }
}

/// A value affected by name swapping.
pub trait Nominal {
    /// Adds the free names of `self` to `acc`.
    fn support_into(&self, acc: &mut BTreeSet<Name>);

    fn swap(&self, t: &Transposition) -> Self
    where
        Self: Sized;

    fn support(&self) -> BTreeSet<Name> {
        let mut acc = BTreeSet::new();
        self.support_into(&mut acc);
        acc
    }
}

/// `a # v`
pub fn fresh_for<T: Nominal + ?Sized>(a: &Name, v: &T) -> bool {
    !v.support().contains(a)
}

/// `A # v1, ..., vn`
pub fn all_fresh_for<'a, T: Nominal + 'a>(names: &BTreeSet<Name>, values: impl IntoIterator<Item = &'a T>) -> bool {
    let vs: Vec<&T> = values.into_iter().collect();
    names.iter().all(|a| vs.iter().all(|v| fresh_for(a, *v)))
}

impl Nominal for Name {
    fn support_into(&self, acc: &mut BTreeSet<Name>) {
        acc.insert(self.clone());
    }
    fn swap(&self, t: &Transposition) -> Self {
        t.apply(self)
    }
}

impl<T: Nominal> Nominal for Box<T> {
    fn support_into(&self, acc: &mut BTreeSet<Name>) {
        (**self).support_into(acc)
    }
    fn swap(&self, t: &Transposition) -> Self {
        Box::new((**self).swap(t))
    }
}

impl<T: Nominal> Nominal for Vec<T> {
    fn support_into(&self, acc: &mut BTreeSet<Name>) {
        for v in self {
            v.support_into(acc);
        }
    }
    fn swap(&self, t: &Transposition) -> Self {
        self.iter().map(|v| v.swap(t)).collect()
    }
}

impl<T: Nominal> Nominal for Option<T> {
    fn support_into(&self, acc: &mut BTreeSet<Name>) {
        if let Some(v) = self {
            v.support_into(acc);
        }
    }
    fn swap(&self, t: &Transposition) -> Self {
        self.as_ref().map(|v| v.swap(t))
    }
}

impl<T: Nominal + Ord> Nominal for BTreeSet<T> {
    fn support_into(&self, acc: &mut BTreeSet<Name>) {
        for v in self {
            v.support_into(acc);
        }
    }
    fn swap(&self, t: &Transposition) -> Self {
        self.iter().map(|v| v.swap(t)).collect()
    }
}

impl<K: Nominal + Ord, V: Nominal> Nominal for BTreeMap<K, V> {
    fn support_into(&self, acc: &mut BTreeSet<Name>) {
        for (k, v) in self {
            k.support_into(acc);
            v.support_into(acc);
        }
    }
    fn swap(&self, t: &Transposition) -> Self {
        self.iter().map(|(k, v)| (k.swap(t), v.swap(t))).collect()
    }
}

impl<A: Nominal, B: Nominal> Nominal for (A, B) {
    fn support_into(&self, acc: &mut BTreeSet<Name>) {
        self.0.support_into(acc);
        self.1.support_into(acc);
    }
    fn swap(&self, t: &Transposition) -> Self {
        (self.0.swap(t), self.1.swap(t))
    }
}

/// Outcome of [`check_substitution_laws`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LawReport {
    Pass { samples: usize },
    Fail { law: u8, samples: usize, counterexample: String },
}

impl LawReport {
    pub fn passed(&self) -> bool {
        matches!(self, LawReport::Pass { .. })
    }
}

/// One sample for the substitution laws: a value `X`, the substituted names
/// `ã` and the replacement values `Ỹ`.
#[derive(Clone, Debug)]
pub struct SubstSample<X, Y> {
    pub value: X,
    pub names: Vec<Name>,
    pub replacements: Vec<Y>,
}

/// Checks the two substitution laws on every sample.
///
/// 1. if `ã ⊆ n(X)` and `b ∈ n(Ỹ)` then `b ∈ n(X[ã:=Ỹ])`
/// 2. if `ũ # X, ṽ` then `X[ṽ:=Ỹ] = ((ũ,ṽ)·X)[ũ:=Ỹ]`
///
/// Law 2 is checked with `ũ` drawn fresh. Samples that fail are shrunk by
/// dropping substitution pairs while the failure persists.
pub fn check_substitution_laws<X, Y, F, E>(subst: F, eq: E, samples: &[SubstSample<X, Y>]) -> LawReport
where
    X: Nominal + Clone + fmt::Debug,
    Y: Nominal + Clone + fmt::Debug,
    F: Fn(&X, &[Name], &[Y]) -> X,
    E: Fn(&X, &X) -> bool,
{
    let law1 = |s: &SubstSample<X, Y>| -> bool {
        let sup = s.value.support();
        if !s.names.iter().all(|a| sup.contains(a)) {
            return true;
        }
        let result = subst(&s.value, &s.names, &s.replacements).support();
        s.replacements.iter().all(|y| y.support().iter().all(|b| result.contains(b)))
    };
    let law2 = |s: &SubstSample<X, Y>| -> bool {
        let fresh: Vec<Name> = s.names.iter().map(|n| n.freshen()).collect();
        let mut swapped = s.value.clone();
        for (u, v) in fresh.iter().zip(&s.names) {
            swapped = swapped.swap(&Transposition::new(u.clone(), v.clone()));
        }
        let lhs = subst(&s.value, &s.names, &s.replacements);
        let rhs = subst(&swapped, &fresh, &s.replacements);
        eq(&lhs, &rhs)
    };
    for s in samples {
        for (law, check) in [(1u8, &law1 as &dyn Fn(&SubstSample<X, Y>) -> bool), (2u8, &law2)] {
            if !check(s) {
                let min = shrink(s, check);
                return LawReport::Fail {
                    law,
                    samples: samples.len(),
                    counterexample: format!(
                        "X = {:?}, names = {:?}, replacements = {:?}",
                        min.value, min.names, min.replacements
                    ),
                };
            }
        }
    }
    LawReport::Pass { samples: samples.len() }
}

fn shrink<X: Clone, Y: Clone>(s: &SubstSample<X, Y>, fails: &dyn Fn(&SubstSample<X, Y>) -> bool) -> SubstSample<X, Y> {
    let mut cur = s.clone();
    let mut i = 0;
    while i < cur.names.len() && cur.names.len() > 1 {
        let mut cand = cur.clone();
        cand.names.remove(i);
        cand.replacements.remove(i);
        if !fails(&cand) {
            cur = cand;
        } else {
            i += 1;
        }
    }
    cur
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_compare_by_token() {
        let a = Name::new("a");
        let a2 = Name::new("a");
        assert_ne!(a, a2);
        assert_eq!(a, a.clone());
        assert_ne!(a.freshen(), a);
    }

    #[test]
    fn transposition_on_names() {
        let (a, b, c) = (Name::new("a"), Name::new("b"), Name::new("c"));
        let t = Transposition::new(a.clone(), b.clone());
        assert_eq!(a.swap(&t), b);
        assert_eq!(b.swap(&t), a);
        assert_eq!(c.swap(&t), c);
        assert_eq!(a.swap(&t).swap(&t), a);
    }

    #[test]
    fn freshness_on_sets() {
        let (a, b) = (Name::new("a"), Name::new("b"));
        let s: BTreeSet<Name> = [a.clone()].into_iter().collect();
        assert!(fresh_for(&b, &s));
        assert!(!fresh_for(&a, &s));
        assert!(all_fresh_for(&[b.clone()].into_iter().collect(), [&s, &s]));
    }

    #[test]
    fn display_strips_suffixes_for_canonical_names() {
        let c = Name::canonical(3, "x_0");
        assert_eq!(c.to_string(), "x_3");
        assert!(c.is_canonical());
        assert_eq!(Name::new("y").to_string(), "y");
    }

    #[test]
    fn empty_sample_set_passes_vacuously() {
        let samples: Vec<SubstSample<Name, Name>> = vec![];
        let r = check_substitution_laws(|x: &Name, _: &[Name], _: &[Name]| x.clone(), |a, b| a == b, &samples);
        assert_eq!(r, LawReport::Pass { samples: 0 });
    }

    #[test]
    fn name_substitution_satisfies_both_laws() {
        let pool: Vec<Name> = ["a", "b", "c", "d"].iter().map(|h| Name::new(h)).collect();
        let subst = |x: &Name, ns: &[Name], ys: &[Name]| {
            ns.iter().position(|n| n == x).map(|i| ys[i].clone()).unwrap_or_else(|| x.clone())
        };
        let mut samples = vec![];
        for x in &pool {
            for a in &pool {
                for y in &pool {
                    samples.push(SubstSample { value: x.clone(), names: vec![a.clone()], replacements: vec![y.clone()] });
                }
            }
        }
        assert!(check_substitution_laws(subst, |a, b| a == b, &samples).passed());
    }

    #[test]
    fn name_deleting_substitution_breaks_law_one() {
        let (a, b) = (Name::new("a"), Name::new("b"));
        // "substitutes" by leaving the value alone, so b is lost
        let broken = |x: &Name, _: &[Name], _: &[Name]| x.clone();
        let samples = vec![SubstSample { value: a.clone(), names: vec![a.clone()], replacements: vec![b] }];
        match check_substitution_laws(broken, |x, y| x == y, &samples) {
            LawReport::Fail { law, .. } => assert_eq!(law, 1),
            other => panic!("expected failure, got {other:?}"),
        }
    }
}
