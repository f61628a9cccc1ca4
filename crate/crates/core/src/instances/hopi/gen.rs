//! Random HOπ data following a fixed sorting: two first-level channels
//! carrying closed processes, one channel carrying processes over those two,
//! and one channel carrying names of the latter kind.
//!
//! A transmitted process is typed in the smallest level environment that
//! covers its free names, so no process is ever bound to two types.

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::{Hopi, HopiAssertion, HopiCondition, HopiProcess, HopiTerm, HopiType};
use crate::instance::Data;
use crate::nominal::{Name, Nominal};
use crate::syntax::Process;
use crate::typing::harness::AssumptionGen;
use crate::typing::TypeEnv;

/// The names and types of the sorting.
#[derive(Clone, Debug)]
pub struct Sorting {
    /// Channels carrying closed processes.
    pub low: Vec<Name>,
    /// A channel carrying processes over `low`.
    pub mid: Name,
    /// A channel carrying names of `mid`'s type.
    pub high: Name,
}

impl Default for Sorting {
    fn default() -> Self {
        Self::new()
    }
}

impl Sorting {
    pub fn new() -> Self {
        Sorting { low: vec![Name::new("a"), Name::new("b")], mid: Name::new("p"), high: Name::new("q") }
    }

    /// `Γ₀ = ∅`
    pub fn env0(&self) -> TypeEnv<HopiType> {
        TypeEnv::new()
    }

    /// `Γ₁`: the low channels.
    pub fn env1(&self) -> TypeEnv<HopiType> {
        self.low.iter().map(|a| (a.clone(), HopiType::ch(HopiType::Drop(self.env0())))).collect()
    }

    /// The top environment: every channel of the sorting.
    pub fn top(&self) -> TypeEnv<HopiType> {
        let mut env = self.env1();
        env.insert(self.mid.clone(), self.mid_type());
        env.insert(self.high.clone(), HopiType::ch(self.mid_type()));
        env
    }

    pub fn mid_type(&self) -> HopiType {
        HopiType::ch(HopiType::Drop(self.env1()))
    }

    /// The drop type a transmitted process is bound to.
    pub fn process_type(&self, p: &HopiProcess) -> HopiType {
        if p.support().is_empty() {
            HopiType::Drop(self.env0())
        } else {
            HopiType::Drop(self.env1())
        }
    }

    /// Channel types that may be restricted.
    pub fn channel_types(&self) -> Vec<HopiType> {
        vec![HopiType::ch(HopiType::Drop(self.env0())), self.mid_type(), HopiType::ch(self.mid_type())]
    }

    /// All types used by the sorting.
    pub fn types(&self) -> Vec<HopiType> {
        let mut ts = self.channel_types();
        ts.push(HopiType::Drop(self.env0()));
        ts.push(HopiType::Drop(self.env1()));
        ts
    }
}

/// Generates well-typed processes, collecting the bindings for every
/// transmitted process.
pub struct ProcessGen<'r> {
    pub rng: &'r mut ChaCha8Rng,
    pub sorting: Sorting,
    pub bindings: Vec<(HopiProcess, HopiType)>,
    pub allow_replication: bool,
    counter: usize,
}

type Scope = Vec<(Name, HopiType)>;

impl<'r> ProcessGen<'r> {
    pub fn new(rng: &'r mut ChaCha8Rng, sorting: Sorting) -> Self {
        ProcessGen { rng, sorting, bindings: Vec::new(), allow_replication: true, counter: 0 }
    }

    /// A process over `scope` with at most `size` process constructors.
    pub fn process(&mut self, scope: &[(Name, HopiType)], size: usize) -> HopiProcess {
        if size <= 1 {
            return self.leaf(scope);
        }
        let channels: Vec<(Name, HopiType)> =
            scope.iter().filter(|(_, t)| matches!(t, HopiType::Ch(_))).cloned().collect();
        for _ in 0..8 {
            match self.rng.gen_range(0..10) {
                0 | 1 if !channels.is_empty() && size >= 3 && self.rng.gen_bool(0.6) => {
                    let (c, _) = channels.choose(self.rng).unwrap().clone();
                    return self.redex(scope, &c, size);
                }
                0 | 1 => {
                    let k = self.rng.gen_range(1..size);
                    return Process::par(self.process(scope, k), self.process(scope, size - k));
                }
                2 | 3 if !channels.is_empty() => {
                    let (c, t) = channels.choose(self.rng).unwrap().clone();
                    let HopiType::Ch(carried) = t else { unreachable!() };
                    if let Some(obj) = self.object(scope, &carried, size / 2) {
                        let used = obj.size().min(size - 1);
                        let cont = self.process(scope, size - used.max(1));
                        return Process::output(HopiTerm::Name(c), obj, cont);
                    }
                }
                4 | 5 if !channels.is_empty() => {
                    let (c, t) = channels.choose(self.rng).unwrap().clone();
                    let HopiType::Ch(carried) = t else { unreachable!() };
                    let x = self.fresh(if matches!(*carried, HopiType::Drop(_)) { "x" } else { "y" });
                    let mut inner = scope.to_vec();
                    inner.push((x.clone(), (*carried).clone()));
                    let cont = self.process(&inner, size - 1);
                    return Process::input(HopiTerm::Name(c), vec![(x.clone(), *carried)], HopiTerm::Name(x), cont);
                }
                6 => {
                    let t = self.sorting.channel_types().choose(self.rng).unwrap().clone();
                    let c = self.fresh("c");
                    let mut inner = scope.to_vec();
                    inner.push((c.clone(), t.clone()));
                    return Process::restrict(c, t, self.process(&inner, size - 1));
                }
                7 => {
                    let k = self.rng.gen_range(1..size);
                    let cond = match channels.choose(self.rng) {
                        Some((c, _)) if self.rng.gen_bool(0.3) => {
                            HopiCondition::ChanEq(HopiTerm::Name(c.clone()), HopiTerm::Name(c.clone()))
                        }
                        _ => HopiCondition::Top,
                    };
                    let left = self.process(scope, k.max(1));
                    let right = self.process(scope, (size - k).max(1));
                    return Process::Case(vec![(cond, left), (HopiCondition::Top, right)]);
                }
                8 if self.allow_replication && !channels.is_empty() && size >= 3 => {
                    let (c, t) = channels.choose(self.rng).unwrap().clone();
                    let HopiType::Ch(carried) = t else { unreachable!() };
                    let x = self.fresh("x");
                    let mut inner = scope.to_vec();
                    inner.push((x.clone(), (*carried).clone()));
                    let cont = self.process(&inner, (size - 2).min(2));
                    return Process::repl(Process::input(HopiTerm::Name(c), vec![(x.clone(), *carried)], HopiTerm::Name(x), cont));
                }
                _ => return self.leaf(scope),
            }
        }
        self.leaf(scope)
    }

    /// A name whose printed form is distinct from every other generated binder.
    fn fresh(&mut self, hint: &str) -> Name {
        self.counter += 1;
        Name::new(&format!("{hint}{}", self.counter))
    }

    /// An output and an input on `c` side by side.
    pub fn redex(&mut self, scope: &[(Name, HopiType)], c: &Name, size: usize) -> HopiProcess {
        let t = scope.iter().rev().find(|(x, _)| x == c).map(|(_, t)| t.clone()).expect("channel in scope");
        let HopiType::Ch(carried) = t else { unreachable!() };
        let budget = size - 2;
        let k = self.rng.gen_range(0..=budget);
        let Some(obj) = self.object(scope, &carried, (k / 2).max(1)) else {
            return self.leaf(scope);
        };
        let out = Process::output(HopiTerm::Name(c.clone()), obj, self.process(scope, (k - k / 2).max(1)));
        let x = self.fresh("x");
        let mut inner = scope.to_vec();
        inner.push((x.clone(), (*carried).clone()));
        let cont = self.process(&inner, (budget - k).max(1));
        Process::par(out, Process::input(HopiTerm::Name(c.clone()), vec![(x.clone(), *carried)], HopiTerm::Name(x), cont))
    }

    fn leaf(&mut self, scope: &[(Name, HopiType)]) -> HopiProcess {
        let vars: Vec<&Name> = scope.iter().filter(|(_, t)| matches!(t, HopiType::Drop(_))).map(|(x, _)| x).collect();
        match vars.choose(self.rng) {
            Some(x) if self.rng.gen_bool(0.6) => return Process::Run(HopiTerm::Name((*x).clone())),
            _ => {}
        }
        let channels: Vec<(Name, HopiType)> =
            scope.iter().filter(|(_, t)| matches!(t, HopiType::Ch(_))).cloned().collect();
        match channels.choose(self.rng) {
            Some((c, HopiType::Ch(carried))) if self.rng.gen_bool(0.4) => {
                let x = self.fresh("z");
                Process::input(HopiTerm::Name(c.clone()), vec![(x.clone(), (**carried).clone())], HopiTerm::Name(x), Process::Nil)
            }
            _ => Process::Nil,
        }
    }

    /// A term of type `t`: a name of that type, or for drop types possibly a
    /// freshly generated process.
    fn object(&mut self, scope: &[(Name, HopiType)], t: &HopiType, size: usize) -> Option<HopiTerm> {
        let names: Vec<&Name> = scope.iter().filter(|(_, u)| u == t).map(|(x, _)| x).collect();
        let HopiType::Drop(level) = t else {
            return names.choose(self.rng).map(|x| HopiTerm::Name((*x).clone()));
        };
        if !names.is_empty() && self.rng.gen_bool(0.4) {
            return names.choose(self.rng).map(|x| HopiTerm::Name((*x).clone()));
        }
        let inner: Scope = level.iter().map(|(x, u)| (x.clone(), u.clone())).collect();
        let mut p = self.process(&inner, size.clamp(1, 3));
        if !level.is_empty() && p.support().is_empty() {
            // a process over a level environment must mention it to get its type
            let a = inner[self.rng.gen_range(0..inner.len())].0.clone();
            let nil = HopiProcess::Nil;
            self.bind(&nil);
            p = Process::output(HopiTerm::Name(a), HopiTerm::proc(nil), p);
        }
        if level.is_empty() && !p.support().is_empty() {
            return None;
        }
        self.bind(&p);
        Some(HopiTerm::proc(p))
    }

    fn bind(&mut self, p: &HopiProcess) {
        let t = self.sorting.process_type(p);
        if !self.bindings.iter().any(|(q, _)| q == p) {
            self.bindings.push((p.clone(), t));
        }
    }

    pub fn assertion(&self) -> HopiAssertion {
        HopiAssertion(self.bindings.iter().cloned().collect())
    }
}

/// A process over the top environment of `sorting` together with the
/// assertion binding its transmitted processes, placed in parallel.
pub fn well_typed_candidate(rng: &mut ChaCha8Rng, sorting: &Sorting, size: usize) -> HopiProcess {
    let scope: Scope = sorting.top().iter().map(|(x, t)| (x.clone(), t.clone())).collect();
    let mut g = ProcessGen::new(rng, sorting.clone());
    let body = if size >= 3 && g.rng.gen_bool(0.8) {
        let c = scope[g.rng.gen_range(0..scope.len())].0.clone();
        let k = if size >= 6 { size / 3 } else { 0 };
        let r = g.redex(&scope, &c, size - k);
        if k > 0 {
            Process::par(r, g.process(&scope, k))
        } else {
            r
        }
    } else {
        g.process(&scope, size)
    };
    if g.bindings.is_empty() {
        body
    } else {
        Process::par(body, Process::Assert(g.assertion()))
    }
}

/// Generators for the assumption harness.
pub struct HopiAssumptionGen {
    pub sorting: Sorting,
}

impl Default for HopiAssumptionGen {
    fn default() -> Self {
        HopiAssumptionGen { sorting: Sorting::new() }
    }
}

impl HopiAssumptionGen {
    fn sent_process(&self, rng: &mut ChaCha8Rng, env: &TypeEnv<HopiType>, size: usize) -> (HopiProcess, HopiAssertion) {
        let mut g = ProcessGen::new(rng, self.sorting.clone());
        g.allow_replication = false;
        let level = if env.dom().is_superset(&self.sorting.env1().dom()) && g.rng.gen_bool(0.7) {
            HopiType::Drop(self.sorting.env1())
        } else {
            HopiType::Drop(self.sorting.env0())
        };
        match g.object(&[], &level, size) {
            Some(HopiTerm::Proc(p)) => (*p, g.assertion()),
            _ => (HopiProcess::Nil, HopiAssertion::single(HopiProcess::Nil, HopiType::Drop(self.sorting.env0()))),
        }
    }
}

impl AssumptionGen<Hopi> for HopiAssumptionGen {
    fn context(&self, rng: &mut ChaCha8Rng, size: usize) -> (TypeEnv<HopiType>, HopiAssertion) {
        let mut env = self.sorting.top();
        if rng.gen_bool(0.5) {
            env.insert(Name::new("x"), HopiType::Drop(self.sorting.env1()));
        }
        if rng.gen_bool(0.5) {
            env.insert(Name::new("c"), self.sorting.mid_type());
        }
        let mut psi = HopiAssertion::empty();
        for _ in 0..rng.gen_range(0..3) {
            let (_, a) = self.sent_process(rng, &env, size);
            psi.0.extend(a.0);
        }
        (env, psi)
    }

    fn term(&self, rng: &mut ChaCha8Rng, env: &TypeEnv<HopiType>, psi: &HopiAssertion, size: usize) -> HopiTerm {
        let keys: Vec<&HopiProcess> = psi.0.iter().map(|(p, _)| p).collect();
        match rng.gen_range(0..4) {
            0 | 1 => {
                let names: Vec<Name> = env.dom().into_iter().collect();
                HopiTerm::Name(names.choose(rng).expect("non-empty environment").clone())
            }
            2 if !keys.is_empty() => HopiTerm::proc((*keys.choose(rng).unwrap()).clone()),
            _ => HopiTerm::proc(self.sent_process(rng, env, size).0),
        }
    }

    fn term_of(
        &self,
        rng: &mut ChaCha8Rng,
        env: &TypeEnv<HopiType>,
        psi: &HopiAssertion,
        t: &HopiType,
        _size: usize,
    ) -> Option<HopiTerm> {
        let mut cands: Vec<HopiTerm> = env.iter().filter(|(_, u)| *u == t).map(|(x, _)| HopiTerm::Name(x.clone())).collect();
        cands.extend(psi.0.iter().filter(|(_, u)| u == t).map(|(p, _)| HopiTerm::proc(p.clone())));
        cands.choose(rng).cloned()
    }

    fn condition(&self, rng: &mut ChaCha8Rng, env: &TypeEnv<HopiType>, psi: &HopiAssertion, size: usize) -> HopiCondition {
        match rng.gen_range(0..4) {
            0 => HopiCondition::Top,
            1 => {
                let m = self.term(rng, env, psi, size);
                HopiCondition::ChanEq(m.clone(), m)
            }
            2 => HopiCondition::ChanEq(self.term(rng, env, psi, size), self.term(rng, env, psi, size)),
            _ => match self.term(rng, env, psi, size) {
                HopiTerm::Proc(p) => HopiCondition::Handle(p.clone(), p),
                _ => HopiCondition::Top,
            },
        }
    }

    fn assertion(&self, rng: &mut ChaCha8Rng, env: &TypeEnv<HopiType>, _psi: &HopiAssertion, size: usize) -> HopiAssertion {
        let mut out = HopiAssertion::empty();
        for _ in 0..rng.gen_range(1..3) {
            out.0.extend(self.sent_process(rng, env, size).1 .0);
        }
        out
    }

    fn ty(&self, rng: &mut ChaCha8Rng, _size: usize) -> HopiType {
        self.sorting.types().choose(rng).unwrap().clone()
    }
}
