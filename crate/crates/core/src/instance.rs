//! The parameters that turn the generic calculus into a concrete one.
//!
//! A [`Lang`] fixes the four nominal datatypes (terms, conditions,
//! assertions, types). A [`Signature`] supplies the operations on them that
//! the semantics needs: composition, entailment, handles, substitution and
//! pattern matching. Typing hooks live in [`crate::typing::TypingHooks`].

use std::fmt;
use std::hash::Hash;

use crate::nominal::{Name, Nominal};
use crate::syntax::Process;

/// Requirements on every instance datatype.
pub trait Data: Nominal + Clone + Eq + Ord + Hash + fmt::Debug + fmt::Display + Send + Sync + 'static {
    /// Renames every binder inside embedded processes to a brand-new name.
    fn refresh(&self) -> Self {
        self.clone()
    }

    /// Canonicalises embedded processes, numbering their binders from `depth`.
    /// Only called on values whose binders were refreshed first.
    fn canonical(&self, _depth: u32) -> Self {
        self.clone()
    }

    /// Structural size used by generators and shrinking.
    fn size(&self) -> usize {
        1
    }

    /// Names occurring inside type annotations. Substitution never acts on
    /// them, so the substitution laws are stated for the other names.
    fn annotation_names(&self) -> std::collections::BTreeSet<Name> {
        std::collections::BTreeSet::new()
    }
}

/// Type-level bundle of the instance datatypes.
pub trait Lang: Clone + Copy + Eq + Ord + Hash + fmt::Debug + Default + Send + Sync + 'static {
    type Term: Data;
    type Condition: Data;
    type Assertion: Data;
    type Type: Data;
}

/// A simultaneous substitution `[x̃ := L̃]`.
pub type Subst<L> = Vec<(Name, <L as Lang>::Term)>;

/// Support of the range of a substitution together with its domain.
pub fn subst_names<L: Lang>(s: &Subst<L>) -> std::collections::BTreeSet<Name> {
    let mut acc = std::collections::BTreeSet::new();
    for (x, t) in s {
        acc.insert(x.clone());
        t.support_into(&mut acc);
    }
    acc
}

/// The runtime parameters of an instance.
pub trait Signature<L: Lang>: Send + Sync {
    fn name(&self) -> &'static str;

    /// The assertion unit `1`.
    fn unit(&self) -> L::Assertion;

    /// Assertion composition `⊗`.
    fn compose(&self, a: &L::Assertion, b: &L::Assertion) -> L::Assertion;

    /// `Ψ ⊩ φ`
    fn entails(&self, psi: &L::Assertion, phi: &L::Condition) -> bool;

    /// `Ψ ⊩ M ↔ K`
    fn chan_eq(&self, psi: &L::Assertion, m: &L::Term, k: &L::Term) -> bool;

    /// The finite set of processes `P` with `Ψ ⊩ M ⇐ P`.
    fn handles(&self, psi: &L::Assertion, m: &L::Term) -> Vec<Process<L>>;

    /// The term standing for a single variable; used by the default matcher.
    fn var(&self, x: &Name) -> L::Term;

    fn subst_term(&self, t: &L::Term, s: &Subst<L>) -> L::Term;
    fn subst_condition(&self, c: &L::Condition, s: &Subst<L>) -> L::Condition;
    fn subst_assertion(&self, a: &L::Assertion, s: &Subst<L>) -> L::Assertion;

    /// Matches a received value against `pattern` with pattern variables
    /// `binders`. A result `σ` must satisfy `pattern σ = value`.
    fn match_pattern(&self, pattern: &L::Term, binders: &[Name], value: &L::Term) -> Option<Subst<L>> {
        if binders.len() == 1 && *pattern == self.var(&binders[0]) {
            Some(vec![(binders[0].clone(), value.clone())])
        } else if binders.is_empty() && pattern == value {
            Some(vec![])
        } else {
            None
        }
    }

    /// The specialisation preorder `a ≤ b` (there is `c` with `b = a ⊗ c`
    /// and `n(a) ⊆ n(b)`).
    fn specializes(&self, a: &L::Assertion, b: &L::Assertion) -> bool;

    /// Runtime error predicate on an unguarded atom (prefix, `run`, ...).
    /// Returns a description when the atom is stuck in an error state.
    fn wrong(&self, _psi: &L::Assertion, _atom: &Process<L>) -> Option<String> {
        None
    }

    /// Composes a sequence of assertions left to right, starting from `1`.
    fn compose_all<'a>(&self, items: &mut dyn Iterator<Item = &'a L::Assertion>) -> L::Assertion {
        let mut acc = self.unit();
        for a in items {
            acc = self.compose(&acc, a);
        }
        acc
    }
}
