//! Random ρ-processes, untyped and annotated, and the typed assumption
//! generators.
//!
//! Sizes count process constructors only; names are drawn from small pools
//! in which several spellings share a name-equivalence class.

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::encode::{encode_name, encode_object_typed, strip, Rho, RhoAssertion, RhoCondition, RhoTerm};
use super::typed::RhoType;
use super::{name_key, NameKey, RhoName, RhoProcess};
use crate::nominal::Name;
use crate::syntax::Process;
use crate::typing::harness::AssumptionGen;
use crate::typing::TypeEnv;

fn drops(k: usize) -> RhoProcess {
    RhoProcess::par_all((0..k).map(|_| RhoProcess::Drop(RhoName::zero())).collect())
}

/// Channel classes; each inner list holds equivalent spellings.
pub fn channel_classes() -> Vec<Vec<RhoName>> {
    let q = RhoName::quote;
    vec![
        vec![RhoName::zero(), q(RhoProcess::par(RhoProcess::Nil, RhoProcess::Nil)), q(RhoProcess::Drop(RhoName::zero()))],
        vec![q(RhoProcess::lift(RhoName::zero(), RhoProcess::Nil))],
        vec![q(drops(2)), q(RhoProcess::par(drops(2), RhoProcess::Nil))],
    ]
}

/// A binder name unrelated to every channel.
fn binder_name(k: usize) -> RhoName {
    let item = RhoProcess::input(RhoName::zero(), RhoName::zero(), RhoProcess::Nil);
    RhoName::quote(RhoProcess::par_all(vec![item; k + 1]))
}

pub struct RhoGen<'r> {
    pub rng: &'r mut ChaCha8Rng,
    classes: Vec<Vec<RhoName>>,
    counter: usize,
}

impl<'r> RhoGen<'r> {
    pub fn new(rng: &'r mut ChaCha8Rng) -> Self {
        RhoGen { rng, classes: channel_classes(), counter: 0 }
    }

    fn channel(&mut self) -> RhoName {
        let class = self.classes.choose(self.rng).expect("channels");
        class.choose(self.rng).expect("spelling").clone()
    }

    fn name(&mut self, scope: &[RhoName]) -> RhoName {
        match scope.choose(self.rng) {
            Some(y) if self.rng.gen_bool(0.3) => y.clone(),
            _ => self.channel(),
        }
    }

    fn binder(&mut self) -> RhoName {
        if self.rng.gen_bool(0.1) {
            return self.channel();
        }
        self.counter += 1;
        binder_name(self.counter)
    }

    fn leaf(&mut self, scope: &[RhoName]) -> RhoProcess {
        match scope.choose(self.rng) {
            Some(y) if self.rng.gen_bool(0.6) => RhoProcess::Drop(y.clone()),
            _ if self.rng.gen_bool(0.1) => RhoProcess::Drop(self.channel()),
            _ => RhoProcess::Nil,
        }
    }

    /// A process of at most `size` constructors.
    pub fn process(&mut self, scope: &[RhoName], size: usize) -> RhoProcess {
        if size <= 1 {
            return self.leaf(scope);
        }
        match self.rng.gen_range(0..10) {
            0..=3 if size >= 4 => self.redex(scope, size),
            4 | 5 if size >= 3 => {
                let k = self.rng.gen_range(1..size - 1);
                RhoProcess::par(self.process(scope, k), self.process(scope, size - 1 - k))
            }
            6 | 7 => {
                let x = self.name(scope);
                RhoProcess::lift(x, self.process(scope, size - 1))
            }
            _ => {
                let x = self.name(scope);
                let y = self.binder();
                let mut inner = scope.to_vec();
                inner.push(y.clone());
                RhoProcess::input(x, y, self.process(&inner, size - 1))
            }
        }
    }

    /// A lift and an input on equivalent subjects, of at most `size`
    /// constructors (at least 4).
    pub fn redex(&mut self, scope: &[RhoName], size: usize) -> RhoProcess {
        let class = self.classes.choose(self.rng).expect("channels").clone();
        let s1 = class.choose(self.rng).expect("spelling").clone();
        let s2 = class.choose(self.rng).expect("spelling").clone();
        let k = self.rng.gen_range(1..=size - 3);
        let payload = self.process(scope, k);
        let y = self.binder();
        let mut inner = scope.to_vec();
        inner.push(y.clone());
        let body = self.process(&inner, size - 2 - k);
        RhoProcess::par(RhoProcess::lift(s1, payload), RhoProcess::input(s2, y, body))
    }
}

/// A process of at most `max_size` constructors, usually with a redex at
/// the top.
pub fn untyped(rng: &mut ChaCha8Rng, max_size: usize) -> RhoProcess {
    // the larger of two draws, so that most processes have room for a redex
    let size = rng.gen_range(1..=max_size).max(rng.gen_range(1..=max_size));
    let mut g = RhoGen::new(rng);
    if size >= 4 && g.rng.gen_bool(0.8) {
        g.redex(&[], size)
    } else {
        g.process(&[], size)
    }
}

// ---------------------------------------------------------------------------
// Annotated processes

/// `⟨B, ∅⟩`, `⟨⟨B, ∅⟩, ∅⟩` and `⟨⟨⟨B, ∅⟩, ∅⟩, ∅⟩`.
pub fn type_ladder() -> [RhoType; 3] {
    let b0 = RhoType::base();
    let t1 = RhoType::pair(b0.clone());
    let t2 = RhoType::pair(t1.clone());
    [b0, t1, t2]
}

/// The typed channels: two carrying processes and one carrying names of
/// the first kind.
pub fn typed_channels() -> Vec<(RhoName, RhoType)> {
    let [_, t1, t2] = type_ladder();
    vec![(RhoName::zero(), t1.clone()), (RhoName::quote(drops(2)), t1), (RhoName::quote(drops(3)), t2)]
}

/// The initial assertion declaring every typed channel.
pub fn typed_preamble() -> RhoAssertion {
    RhoAssertion(typed_channels().into_iter().map(|(x, t)| (encode_name(&x), t)).collect())
}

pub struct TypedGen<'r> {
    pub rng: &'r mut ChaCha8Rng,
    channels: Vec<(RhoName, RhoType)>,
    counter: usize,
}

impl<'r> TypedGen<'r> {
    pub fn new(rng: &'r mut ChaCha8Rng) -> Self {
        TypedGen { rng, channels: typed_channels(), counter: 0 }
    }

    fn channel_keys(&self) -> Vec<NameKey> {
        self.channels.iter().map(|(x, _)| name_key(x)).collect()
    }

    /// A subject with the type it carries.
    fn subject(&mut self, scope: &[(RhoName, RhoType)]) -> (RhoName, RhoType) {
        let usable: Vec<(RhoName, RhoType)> = scope.iter().filter(|(_, t)| matches!(t, RhoType::Pair(..))).cloned().collect();
        let (x, t) = match usable.choose(self.rng) {
            Some(b) if self.rng.gen_bool(0.4) => b.clone(),
            _ => self.channels.choose(self.rng).expect("channels").clone(),
        };
        let RhoType::Pair(carried, _) = t else { unreachable!("channels carry something") };
        (x, *carried)
    }

    fn leaf(&mut self, scope: &[(RhoName, RhoType)]) -> RhoProcess {
        match scope.choose(self.rng) {
            Some((y, _)) if self.rng.gen_bool(0.6) => RhoProcess::Drop(y.clone()),
            _ => RhoProcess::Nil,
        }
    }

    pub fn process(&mut self, scope: &[(RhoName, RhoType)], size: usize) -> RhoProcess {
        if size <= 1 {
            return self.leaf(scope);
        }
        match self.rng.gen_range(0..10) {
            0..=3 if size >= 4 => self.redex(scope, size),
            4 | 5 if size >= 3 => {
                let k = self.rng.gen_range(1..size - 1);
                RhoProcess::par(self.process(scope, k), self.process(scope, size - 1 - k))
            }
            6 | 7 => {
                let (x, carried) = self.subject(scope);
                self.lift(scope, x, carried, size - 1)
            }
            _ => {
                let (x, carried) = self.subject(scope);
                self.input(scope, x, carried, size - 1)
            }
        }
    }

    fn lift(&mut self, scope: &[(RhoName, RhoType)], x: RhoName, carried: RhoType, size: usize) -> RhoProcess {
        let payload = if matches!(carried, RhoType::Base(_)) {
            let keys = self.channel_keys();
            let fresh = (0..8).map(|_| self.process(scope, size)).find(|p| !keys.contains(&name_key(&RhoName::quote(p.erase()))));
            fresh.unwrap_or_else(|| drops(4))
        } else {
            let fits: Vec<RhoName> = self.channels.iter().filter(|(_, t)| *t == carried).map(|(c, _)| c.clone()).collect();
            fits.choose(self.rng).expect("a channel of the carried type").process().clone()
        };
        RhoProcess::Lift(x, Box::new(payload), Some(carried))
    }

    fn input(&mut self, scope: &[(RhoName, RhoType)], x: RhoName, carried: RhoType, size: usize) -> RhoProcess {
        self.counter += 1;
        let y = binder_name(self.counter);
        let mut inner = scope.to_vec();
        inner.push((y.clone(), carried.clone()));
        let body = self.process(&inner, size);
        RhoProcess::Input(x, y, Some(carried), Box::new(body))
    }

    pub fn redex(&mut self, scope: &[(RhoName, RhoType)], size: usize) -> RhoProcess {
        let (x, carried) = self.subject(scope);
        let k = self.rng.gen_range(1..=size - 3);
        let out = self.lift(scope, x.clone(), carried.clone(), k);
        let inp = self.input(scope, x, carried, size - 2 - k);
        RhoProcess::par(out, inp)
    }
}

/// An annotated process of at most `max_size` constructors over
/// [`typed_channels`].
pub fn typed(rng: &mut ChaCha8Rng, max_size: usize) -> RhoProcess {
    // the larger of two draws, so that most processes have room for a redex
    let size = rng.gen_range(1..=max_size).max(rng.gen_range(1..=max_size));
    let mut g = TypedGen::new(rng);
    if size >= 4 && g.rng.gen_bool(0.8) {
        g.redex(&[], size)
    } else {
        g.process(&[], size)
    }
}

// ---------------------------------------------------------------------------
// Assumption generators

/// Contexts draw their assertions from a fixed table in which the declared
/// type is a function of the name-equivalence class, so that names that
/// are channel equivalent never disagree on their types.
pub struct RhoAssumptionGen {
    table: Vec<(RhoTerm, RhoType)>,
}

impl RhoAssumptionGen {
    pub fn new(seed: u64) -> Self {
        use rand::SeedableRng;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let [b0, t1, _] = type_ladder();
        let mut table: Vec<(RhoTerm, RhoType)> = typed_preamble().0.into_iter().collect();
        table.push((RhoTerm::Dyn(Box::new(Process::Nil)), t1));
        let taken: Vec<NameKey> = typed_channels().iter().map(|(x, _)| name_key(x)).collect();
        let mut seen = Vec::new();
        while seen.len() < 6 {
            let mut g = TypedGen::new(&mut rng);
            let p = g.process(&[], 4);
            let k = name_key(&RhoName::quote(p.erase()));
            if taken.contains(&k) || seen.contains(&k) {
                continue;
            }
            // objects relying on assertions of their own would need those in every context
            if let Ok((m, hoisted)) = encode_object_typed(&p) {
                if !hoisted.0.is_empty() {
                    continue;
                }
                seen.push(k);
                table.push((m, b0.clone()));
            }
        }
        RhoAssumptionGen { table }
    }

    fn subset(&self, rng: &mut ChaCha8Rng) -> RhoAssertion {
        RhoAssertion(self.table.iter().filter(|_| rng.gen_bool(0.6)).cloned().collect())
    }

    fn declared(psi: &RhoAssertion) -> Vec<RhoTerm> {
        psi.0.iter().map(|(m, _)| m.clone()).collect()
    }
}

impl AssumptionGen<Rho> for RhoAssumptionGen {
    fn context(&self, rng: &mut ChaCha8Rng, _size: usize) -> (TypeEnv<RhoType>, RhoAssertion) {
        let ladder = type_ladder();
        let mut env = TypeEnv::new();
        for i in 0..rng.gen_range(0..3) {
            env.insert(Name::new(&format!("z{i}")), ladder.choose(rng).expect("types").clone());
        }
        (env, self.subset(rng))
    }

    fn term(&self, rng: &mut ChaCha8Rng, env: &TypeEnv<RhoType>, psi: &RhoAssertion, _size: usize) -> RhoTerm {
        let mut cands: Vec<RhoTerm> = env.dom().into_iter().map(RhoTerm::Atom).collect();
        cands.extend(Self::declared(psi));
        if cands.is_empty() || rng.gen_bool(0.1) {
            return self.table.choose(rng).expect("table").0.clone();
        }
        cands.choose(rng).expect("candidates").clone()
    }

    fn term_of(
        &self,
        rng: &mut ChaCha8Rng,
        env: &TypeEnv<RhoType>,
        psi: &RhoAssertion,
        t: &RhoType,
        _size: usize,
    ) -> Option<RhoTerm> {
        let mut cands: Vec<RhoTerm> = env.iter().filter(|(_, u)| *u == t).map(|(x, _)| RhoTerm::Atom(x.clone())).collect();
        cands.extend(psi.0.iter().filter(|(_, u)| u == t).map(|(m, _)| m.clone()));
        cands.choose(rng).cloned()
    }

    fn partner(&self, rng: &mut ChaCha8Rng, psi: &RhoAssertion, m: &RhoTerm) -> RhoTerm {
        let key = super::encode::term_key(m);
        let same: Vec<RhoTerm> = Self::declared(psi).into_iter().filter(|n| super::encode::term_key(n) == key).collect();
        same.choose(rng).cloned().unwrap_or_else(|| m.clone())
    }

    fn condition(&self, rng: &mut ChaCha8Rng, env: &TypeEnv<RhoType>, psi: &RhoAssertion, size: usize) -> RhoCondition {
        let m = self.term(rng, env, psi, size);
        match rng.gen_range(0..4) {
            0 => RhoCondition::Top,
            1 => {
                let n = if rng.gen_bool(0.5) { self.partner(rng, psi, &m) } else { self.term(rng, env, psi, size) };
                RhoCondition::ChanEq(m, n)
            }
            2 => match &m {
                RhoTerm::Static(p) | RhoTerm::Dyn(p) => RhoCondition::Handle(m.clone(), Box::new(strip(p))),
                RhoTerm::Atom(_) => RhoCondition::Top,
            },
            _ => {
                let p = match &m {
                    RhoTerm::Static(p) | RhoTerm::Dyn(p) => strip(p),
                    RhoTerm::Atom(_) => Process::Run(m.clone()),
                };
                RhoCondition::Congr(Box::new(p.clone()), Box::new(Process::par(Process::Nil, p)))
            }
        }
    }

    fn assertion(&self, rng: &mut ChaCha8Rng, _env: &TypeEnv<RhoType>, _psi: &RhoAssertion, _size: usize) -> RhoAssertion {
        self.subset(rng)
    }

    fn ty(&self, rng: &mut ChaCha8Rng, _size: usize) -> RhoType {
        type_ladder().choose(rng).expect("types").clone()
    }
}
