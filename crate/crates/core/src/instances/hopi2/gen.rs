//! Random HOπ₂ processes over three channels of levels 1, 2 and 3.

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::embed::{embed, Hopi2, Hopi2Assertion, Hopi2Condition, Hopi2Term};
use super::{infer_level, Hopi2Process, Hopi2Type};
use crate::nominal::Name;
use crate::syntax::Process;
use crate::typing::harness::AssumptionGen;
use crate::typing::TypeEnv;

/// The highest channel level used by the generators.
pub const MAX_LEVEL: u32 = 3;

#[derive(Clone, Debug)]
pub struct Channels {
    /// `(name, level)` pairs.
    pub channels: Vec<(Name, u32)>,
}

impl Default for Channels {
    fn default() -> Self {
        Self::new()
    }
}

impl Channels {
    pub fn new() -> Self {
        Channels { channels: (1..=MAX_LEVEL).map(|k| (Name::new(["a", "b", "c"][k as usize - 1]), k)).collect() }
    }

    pub fn env(&self) -> TypeEnv<Hopi2Type> {
        self.channels.iter().map(|(a, k)| (a.clone(), Hopi2Type::Ch(*k))).collect()
    }
}

pub struct ProcessGen<'r> {
    pub rng: &'r mut ChaCha8Rng,
    counter: usize,
}

/// Names in scope: channels with their level and variables with theirs.
#[derive(Clone, Default)]
struct Scope {
    channels: Vec<(Name, u32)>,
    vars: Vec<(Name, u32)>,
}

impl<'r> ProcessGen<'r> {
    pub fn new(rng: &'r mut ChaCha8Rng) -> Self {
        ProcessGen { rng, counter: 0 }
    }

    fn fresh(&mut self, hint: &str) -> Name {
        self.counter += 1;
        Name::new(&format!("{hint}{}", self.counter))
    }

    /// A process over `channels`. With `bound` the process has at most that
    /// level; without it outputs ignore the level discipline.
    pub fn process(&mut self, channels: &Channels, size: usize, bound: Option<u32>) -> Hopi2Process {
        let scope = Scope { channels: channels.channels.clone(), vars: vec![] };
        if size >= 3 && self.rng.gen_bool(0.7) {
            if let Some(p) = self.comm(&scope, size, bound) {
                return p;
            }
        }
        self.go(&scope, size, bound)
    }

    /// An output and a matching input side by side.
    fn comm(&mut self, scope: &Scope, size: usize, bound: Option<u32>) -> Option<Hopi2Process> {
        let outs: Vec<(Name, u32)> = scope.channels.iter().filter(|(_, k)| bound.is_none_or(|n| *k <= n)).cloned().collect();
        let (a, k) = outs.choose(self.rng)?.clone();
        let budget = size - 2;
        let m = self.rng.gen_range(0..=budget);
        let out = self.output(scope, &a, k, m.max(1), 1, bound);
        let x = self.fresh("X");
        let mut inner = scope.clone();
        inner.vars.push((x.clone(), k - 1));
        let body = self.go(&inner, (budget - m).max(1), bound);
        let body = if self.rng.gen_bool(0.6) { Hopi2Process::par(Hopi2Process::Var(x.clone()), body) } else { body };
        Some(Hopi2Process::par(out, Hopi2Process::input(a, x, body)))
    }

    fn go(&mut self, scope: &Scope, size: usize, bound: Option<u32>) -> Hopi2Process {
        let fits = |k: u32| bound.is_none_or(|n| k <= n);
        if size <= 1 {
            let vars: Vec<&Name> = scope.vars.iter().filter(|(_, l)| fits(*l)).map(|(x, _)| x).collect();
            return match vars.choose(self.rng) {
                Some(x) if self.rng.gen_bool(0.7) => Hopi2Process::Var((*x).clone()),
                _ => Hopi2Process::Nil,
            };
        }
        let outs: Vec<(Name, u32)> = scope.channels.iter().filter(|(_, k)| fits(*k)).cloned().collect();
        match self.rng.gen_range(0..9) {
            0 | 1 if !outs.is_empty() && size >= 3 => self.comm(scope, size, bound).expect("a channel fits"),
            0..=2 => {
                let k = self.rng.gen_range(1..size);
                Hopi2Process::par(self.go(scope, k, bound), self.go(scope, size - k, bound))
            }
            3 | 4 if !outs.is_empty() => {
                let (a, k) = outs.choose(self.rng).unwrap().clone();
                let k1 = self.rng.gen_range(1..size);
                self.output(scope, &a, k, k1, size - k1, bound)
            }
            5 | 6 => {
                let (a, k) = scope.channels.choose(self.rng).unwrap().clone();
                let x = self.fresh("X");
                let mut inner = scope.clone();
                inner.vars.push((x.clone(), k - 1));
                Hopi2Process::input(a, x, self.go(&inner, size - 1, bound))
            }
            7 => {
                let k = self.rng.gen_range(1..=MAX_LEVEL);
                let d = self.fresh("d");
                let mut inner = scope.clone();
                inner.channels.push((d.clone(), k));
                Hopi2Process::restrict(d, Hopi2Type::Ch(k), self.go(&inner, size - 1, bound))
            }
            _ => self.go(scope, 1, bound),
        }
    }

    fn output(&mut self, scope: &Scope, a: &Name, k: u32, payload: usize, cont: usize, bound: Option<u32>) -> Hopi2Process {
        let inner_bound = match bound {
            Some(_) => Some(k - 1),
            None => None,
        };
        let q = self.go(scope, payload, inner_bound);
        let p = self.go(scope, cont, bound);
        Hopi2Process::output(a.clone(), q, p)
    }
}

/// A process accepted by [`infer_level`] over `channels`.
pub fn well_typed(rng: &mut ChaCha8Rng, channels: &Channels, size: usize) -> Hopi2Process {
    let env = channels.env();
    loop {
        let p = ProcessGen::new(rng).process(channels, size, Some(MAX_LEVEL));
        if infer_level(&env, &p).is_ok() {
            return p;
        }
    }
}

/// A process with no level discipline; roughly half are ill-typed.
pub fn unconstrained(rng: &mut ChaCha8Rng, channels: &Channels, size: usize) -> Hopi2Process {
    ProcessGen::new(rng).process(channels, size, None)
}

/// The self-replicating candidate `ā⟨Q⟩.0 | Q` with `Q = a(X).(X | ā⟨X⟩.0)`.
pub fn omega(a: &Name) -> Hopi2Process {
    let x = Name::new("X");
    let q = Hopi2Process::input(
        a.clone(),
        x.clone(),
        Hopi2Process::par(Hopi2Process::Var(x.clone()), Hopi2Process::output(a.clone(), Hopi2Process::Var(x), Hopi2Process::Nil)),
    );
    Hopi2Process::par(Hopi2Process::output(a.clone(), q.clone(), Hopi2Process::Nil), q)
}

/// Generators for the assumption harness.
pub struct Hopi2AssumptionGen {
    pub channels: Channels,
}

impl Default for Hopi2AssumptionGen {
    fn default() -> Self {
        Hopi2AssumptionGen { channels: Channels::new() }
    }
}

impl Hopi2AssumptionGen {
    fn embedded(&self, rng: &mut ChaCha8Rng, size: usize) -> Process<Hopi2> {
        let p = if rng.gen_bool(0.8) {
            well_typed(rng, &self.channels, size.min(5))
        } else {
            unconstrained(rng, &self.channels, size.min(5))
        };
        embed(&self.channels.env(), &p).expect("generated over the channel environment")
    }

    fn assertion_any(rng: &mut ChaCha8Rng) -> Hopi2Assertion {
        let n = rng.gen_range(0..=MAX_LEVEL + 1);
        match rng.gen_range(0..4) {
            0 => Hopi2Assertion::InTag(n),
            1 => Hopi2Assertion::OutTag(n),
            _ => Hopi2Assertion::Plain(n),
        }
    }
}

impl AssumptionGen<Hopi2> for Hopi2AssumptionGen {
    fn context(&self, rng: &mut ChaCha8Rng, _size: usize) -> (TypeEnv<Hopi2Type>, Hopi2Assertion) {
        let mut env = self.channels.env();
        for i in 0..rng.gen_range(0..3) {
            env.insert(Name::new(&format!("Y{i}")), Hopi2Type::Level(rng.gen_range(0..=MAX_LEVEL)));
        }
        (env, Self::assertion_any(rng))
    }

    fn term(&self, rng: &mut ChaCha8Rng, env: &TypeEnv<Hopi2Type>, _psi: &Hopi2Assertion, size: usize) -> Hopi2Term {
        let names: Vec<(Name, Hopi2Type)> = env.iter().map(|(x, t)| (x.clone(), t.clone())).collect();
        let (x, t) = names.choose(rng).expect("non-empty environment").clone();
        match rng.gen_range(0..5) {
            0 => Hopi2Term::Proc(Box::new(self.embedded(rng, size))),
            1 => Hopi2Term::Bind(x),
            _ if matches!(t, Hopi2Type::Level(_)) => Hopi2Term::Var(x),
            _ => Hopi2Term::Chan(x),
        }
    }

    fn term_of(
        &self,
        rng: &mut ChaCha8Rng,
        env: &TypeEnv<Hopi2Type>,
        _psi: &Hopi2Assertion,
        t: &Hopi2Type,
        size: usize,
    ) -> Option<Hopi2Term> {
        let mut cands: Vec<Hopi2Term> = env.iter().filter(|(_, u)| *u == t).map(|(x, _)| Hopi2Term::Bind(x.clone())).collect();
        if let Hopi2Type::Level(n) = t {
            cands.extend(env.iter().filter(|(_, u)| matches!(u, Hopi2Type::Level(m) if m <= n)).map(|(x, _)| Hopi2Term::Var(x.clone())));
            let p = self.embedded(rng, size);
            cands.push(Hopi2Term::Proc(Box::new(p)));
        }
        cands.choose(rng).cloned()
    }

    fn condition(&self, rng: &mut ChaCha8Rng, env: &TypeEnv<Hopi2Type>, psi: &Hopi2Assertion, size: usize) -> Hopi2Condition {
        match rng.gen_range(0..3) {
            0 => Hopi2Condition::Top,
            1 => {
                let m = self.term(rng, env, psi, size);
                Hopi2Condition::ChanEq(m.clone(), m)
            }
            _ => Hopi2Condition::ChanEq(self.term(rng, env, psi, size), self.term(rng, env, psi, size)),
        }
    }

    fn assertion(&self, rng: &mut ChaCha8Rng, _env: &TypeEnv<Hopi2Type>, _psi: &Hopi2Assertion, _size: usize) -> Hopi2Assertion {
        Self::assertion_any(rng)
    }

    fn ty(&self, rng: &mut ChaCha8Rng, _size: usize) -> Hopi2Type {
        let k = rng.gen_range(1..=MAX_LEVEL);
        match rng.gen_range(0..4) {
            0 => Hopi2Type::Level(rng.gen_range(0..=MAX_LEVEL)),
            1 => Hopi2Type::ChIn(k),
            2 => Hopi2Type::ChOut(k),
            _ => Hopi2Type::Ch(k),
        }
    }
}
