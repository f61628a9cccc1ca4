//! Test oracles shared by the integration suites.

#![allow(dead_code)]

use std::collections::HashMap;

use hopsi::instances::rho::{processes_up_to, RhoName, RhoProcess};

/// Name equivalence by brute force: the congruence closure of the monoid
/// laws for `|`, alpha renaming of binders and `⌜⌞x⌟⌝ ~ x`, computed over
/// every process of bounded size and every name quoting one of them.
pub struct NameEqOracle {
    procs: HashMap<RhoProcess, usize>,
    names: HashMap<RhoName, usize>,
    parent: Vec<usize>,
}

#[derive(Clone, PartialEq, Eq, Hash)]
enum Sig {
    Nil,
    Par(usize, usize),
    Lift(usize, usize),
    Input(usize, usize, usize),
    Drop(usize),
    Quote(usize),
}

impl NameEqOracle {
    pub fn new(universe: usize) -> Self {
        let all = processes_up_to(universe);
        let mut procs = HashMap::new();
        for p in &all {
            let n = procs.len();
            procs.insert(p.clone(), n);
        }
        let mut names = HashMap::new();
        for p in &all {
            let n = procs.len() + names.len();
            names.insert(RhoName::quote(p.clone()), n);
        }
        let total = procs.len() + names.len();
        let mut o = NameEqOracle { procs, names, parent: (0..total).collect() };
        o.axioms(&all);
        o.close();
        o
    }

    fn find(&mut self, i: usize) -> usize {
        let mut r = i;
        while self.parent[r] != r {
            r = self.parent[r];
        }
        let mut j = i;
        while self.parent[j] != r {
            let next = self.parent[j];
            self.parent[j] = r;
            j = next;
        }
        r
    }

    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.parent[ra.max(rb)] = ra.min(rb);
        true
    }

    fn union_procs(&mut self, p: &RhoProcess, q: &RhoProcess) {
        if let (Some(&a), Some(&b)) = (self.procs.get(p), self.procs.get(q)) {
            self.union(a, b);
        }
    }

    fn axioms(&mut self, all: &[RhoProcess]) {
        let names: Vec<RhoName> = self.names.keys().cloned().collect();
        for p in all {
            match p {
                RhoProcess::Par(a, b) => {
                    if **b == RhoProcess::Nil {
                        self.union_procs(p, a);
                    }
                    self.union_procs(p, &RhoProcess::Par(b.clone(), a.clone()));
                    if let RhoProcess::Par(a1, a2) = &**a {
                        let right = RhoProcess::par((**a1).clone(), RhoProcess::Par(a2.clone(), b.clone()));
                        self.union_procs(p, &right);
                    }
                }
                RhoProcess::Input(x, y, None, body) => {
                    for z in &names {
                        if z != y && only_names(body, y) {
                            let renamed = RhoProcess::input(x.clone(), z.clone(), rename(body, y, z));
                            self.union_procs(p, &renamed);
                        }
                    }
                }
                _ => {}
            }
        }
        for (x, &i) in &self.names.clone() {
            if let RhoProcess::Drop(inner) = x.process() {
                if let Some(&j) = self.names.get(inner) {
                    self.union(i, j);
                }
            }
        }
    }

    fn signature(&mut self, p: &RhoProcess) -> Option<Sig> {
        let name = |o: &mut Self, x: &RhoName| o.names.get(x).copied().map(|i| o.find(i));
        let proc = |o: &mut Self, q: &RhoProcess| o.procs.get(q).copied().map(|i| o.find(i));
        Some(match p {
            RhoProcess::Nil => Sig::Nil,
            RhoProcess::Par(a, b) => Sig::Par(proc(self, a)?, proc(self, b)?),
            RhoProcess::Lift(x, q, _) => Sig::Lift(name(self, x)?, proc(self, q)?),
            RhoProcess::Input(x, y, _, q) => Sig::Input(name(self, x)?, name(self, y)?, proc(self, q)?),
            RhoProcess::Drop(x) => Sig::Drop(name(self, x)?),
        })
    }

    fn close(&mut self) {
        loop {
            let mut changed = false;
            let mut table: HashMap<Sig, usize> = HashMap::new();
            let procs: Vec<(RhoProcess, usize)> = self.procs.iter().map(|(p, &i)| (p.clone(), i)).collect();
            for (p, i) in procs {
                let Some(s) = self.signature(&p) else { continue };
                match table.get(&s) {
                    Some(&j) => changed |= self.union(i, j),
                    None => {
                        table.insert(s, i);
                    }
                }
            }
            let names: Vec<(RhoName, usize)> = self.names.iter().map(|(x, &i)| (x.clone(), i)).collect();
            for (x, i) in names {
                let j = self.procs[x.process()];
                let s = Sig::Quote(self.find(j));
                match table.get(&s) {
                    Some(&k) => changed |= self.union(i, k),
                    None => {
                        table.insert(s, i);
                    }
                }
            }
            if !changed {
                break;
            }
        }
    }

    /// Whether the closure relates `x1` and `x2`; both must quote processes
    /// inside the universe.
    pub fn equivalent(&mut self, x1: &RhoName, x2: &RhoName) -> bool {
        let (a, b) = (self.names[x1], self.names[x2]);
        self.find(a) == self.find(b)
    }
}

/// Whether every name position of `p` outside quotes is `y` itself; only
/// then is syntactic renaming a sound alpha step without deciding `≡_N`.
fn only_names(p: &RhoProcess, y: &RhoName) -> bool {
    match p {
        RhoProcess::Nil => true,
        RhoProcess::Par(a, b) => only_names(a, y) && only_names(b, y),
        RhoProcess::Lift(x, q, _) => x == y && only_names(q, y),
        RhoProcess::Input(x, b, _, q) => x == y && b == y && only_names(q, y),
        RhoProcess::Drop(x) => x == y,
    }
}

/// Renames name positions syntactically equal to `y`, stopping at a binder
/// equal to `y`.
fn rename(p: &RhoProcess, y: &RhoName, z: &RhoName) -> RhoProcess {
    let sw = |x: &RhoName| if x == y { z.clone() } else { x.clone() };
    match p {
        RhoProcess::Nil => RhoProcess::Nil,
        RhoProcess::Par(a, b) => RhoProcess::par(rename(a, y, z), rename(b, y, z)),
        RhoProcess::Lift(x, q, _) => RhoProcess::lift(sw(x), rename(q, y, z)),
        RhoProcess::Input(x, b, _, q) if b == y => RhoProcess::input(sw(x), b.clone(), (**q).clone()),
        RhoProcess::Input(x, b, _, q) => RhoProcess::input(sw(x), b.clone(), rename(q, y, z)),
        RhoProcess::Drop(x) => RhoProcess::Drop(sw(x)),
    }
}
