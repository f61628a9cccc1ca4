//! Operational correspondence between the direct interpreter and the
//! encoding: `P → P′` exactly when `⟦P⟧ → ≃ ⟦P′⟧`.

use std::collections::HashSet;
use std::fmt;

use super::encode::{behav_eq, encode, RhoSig};
use super::{proc_key, rho_step, RhoProcess};
use crate::instance::Signature;
use crate::semantics::reduce_steps;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    /// A ρ-step with no matching step of the encoding.
    Forward,
    /// A step of the encoding with no matching ρ-step.
    Backward,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub direction: Direction,
    /// ρ-states from the root to the state where the check failed.
    pub trace: Vec<String>,
    /// The unmatched successor, ρ or encoded.
    pub successor: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CorrespondenceReport {
    pub states: usize,
    pub steps: usize,
    pub violations: Vec<Violation>,
}

impl CorrespondenceReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for CorrespondenceReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "states {} steps {} violations {}", self.states, self.steps, self.violations.len())?;
        for v in &self.violations {
            writeln!(f, "{:?}: {}", v.direction, v.successor)?;
            for (i, s) in v.trace.iter().enumerate() {
                writeln!(f, "  {i}\t{s}")?;
            }
        }
        Ok(())
    }
}

/// Checks both directions at every ρ-state reachable from `p` in at most
/// `depth` steps.
pub fn correspondence_check(p: &RhoProcess, depth: usize) -> CorrespondenceReport {
    let mut report = CorrespondenceReport::default();
    let mut seen = HashSet::from([proc_key(p)]);
    let mut frontier = vec![vec![p.clone()]];
    for level in 0..=depth {
        let mut next = Vec::new();
        for path in &frontier {
            let state = path.last().expect("non-empty path");
            let succ = check_state(state, path, &mut report);
            if level == depth {
                continue;
            }
            for s in succ {
                if seen.insert(proc_key(&s)) {
                    let mut longer = path.clone();
                    longer.push(s);
                    next.push(longer);
                }
            }
        }
        frontier = next;
    }
    report
}

fn check_state(state: &RhoProcess, path: &[RhoProcess], report: &mut CorrespondenceReport) -> Vec<RhoProcess> {
    report.states += 1;
    let sig = RhoSig;
    let rho = rho_step(state);
    let targets: Vec<_> = rho.iter().map(encode).collect();
    let encoded: Vec<_> = reduce_steps(&sig, &sig.unit(), &encode(state)).into_iter().map(|s| s.after).collect();
    report.steps += rho.len() + encoded.len();
    let trace = || path.iter().map(|s| s.to_string()).collect::<Vec<_>>();
    for (p2, t) in rho.iter().zip(&targets) {
        if !encoded.iter().any(|e| behav_eq(e, t)) {
            report.violations.push(Violation { direction: Direction::Forward, trace: trace(), successor: p2.to_string() });
        }
    }
    for e in &encoded {
        if !targets.iter().any(|t| behav_eq(e, t)) {
            report.violations.push(Violation { direction: Direction::Backward, trace: trace(), successor: e.to_string() });
        }
    }
    rho
}
