use crate::clock::Instant;

use super::atoms::Atom;
use super::{Abstraction, Mode, SynthStats};
use crate::domain::AbstractValue;
use crate::transformer::Construct;

pub(super) enum Flow {
    Continue,
    Found,
    Abort(&'static str),
}

/// Rank-ordered search over right-nested chains `Concat(a1, Concat(a2, … an))`.
///
/// A partial chain `Concat(a1, … Concat(ak, □))` is evaluated with `□ = ⊤`; since
/// transformer application is monotone, a partial whose state excludes some
/// output has no consistent completion and is cut.
pub(super) struct Search<'a> {
    pub atoms: &'a [Atom],
    pub abs: &'a Abstraction,
    pub outs: Vec<Vec<char>>,
    pub mode: Mode,
    pub stats: SynthStats,
    pub deadline: Option<Instant>,
    pub max_candidates: Option<u64>,
    pub stack: Vec<usize>,
    /// Emits each complete candidate as it is enumerated (for tests).
    pub trace: Option<&'a mut dyn FnMut(&[usize])>,
}

impl<'a> Search<'a> {
    pub fn run(&mut self, max_size: usize) -> Flow {
        for n in 1..=max_size {
            match self.dfs(n) {
                Flow::Continue => {}
                other => return other,
            }
        }
        Flow::Continue
    }

    fn tick(&mut self) -> Option<Flow> {
        self.stats.enumerated += 1;
        if self.max_candidates.is_some_and(|m| self.stats.enumerated > m) {
            return Some(Flow::Abort("candidate budget exhausted"));
        }
        if self.stats.enumerated % 1024 == 0 && self.deadline.is_some_and(|d| Instant::now() > d) {
            return Some(Flow::Abort("timeout"));
        }
        None
    }

    /// Abstract state of `Concat(stack…, tail)` on example `k`.
    fn chain_state(&self, k: usize, tail: Option<usize>) -> AbstractValue {
        let mut v = match tail {
            Some(a) => self.atoms[a].states[k].clone(),
            None => AbstractValue::top(),
        };
        for &a in self.stack.iter().rev() {
            v = self.abs.table.apply(&Construct::Concat, &[&self.atoms[a].states[k], &v], &[]);
        }
        v
    }

    fn consistent(&self, tail: Option<usize>) -> bool {
        if self.abs.is_trivial() {
            return true;
        }
        (0..self.outs.len()).all(|k| self.chain_state(k, tail).contains(&self.outs[k]))
    }

    fn concretely_correct(&self, last: usize) -> bool {
        (0..self.outs.len()).all(|k| {
            let out = &self.outs[k];
            let mut at = 0;
            for &a in self.stack.iter().chain([&last]) {
                let v = &self.atoms[a].values[k];
                if out.len() < at + v.len() || out[at..at + v.len()] != v[..] {
                    return false;
                }
                at += v.len();
            }
            at == out.len()
        })
    }

    fn dfs(&mut self, remaining: usize) -> Flow {
        // Complete chains ending here come first: an atom ranks below any Concat of the same size.
        for a in 0..self.atoms.len() {
            let size = self.atoms[a].size();
            if size > remaining {
                break;
            }
            if size != remaining {
                continue;
            }
            if let Some(f) = self.tick() {
                return f;
            }
            if let Some(trace) = self.trace.as_mut() {
                let mut chain = self.stack.clone();
                chain.push(a);
                trace(&chain);
            }
            if !self.consistent(Some(a)) {
                self.stats.pruned_abstract += 1;
                continue;
            }
            match self.mode {
                Mode::FirstConsistent => {
                    self.stack.push(a);
                    return Flow::Found;
                }
                Mode::Checked if self.concretely_correct(a) => {
                    self.stack.push(a);
                    return Flow::Found;
                }
                Mode::Checked => self.stats.concrete_rejects += 1,
            }
        }
        for a in 0..self.atoms.len() {
            let size = self.atoms[a].size();
            if size + 2 > remaining {
                break;
            }
            if let Some(f) = self.tick() {
                return f;
            }
            self.stack.push(a);
            if !self.consistent(None) {
                self.stats.pruned_abstract += 1;
                self.stack.pop();
                continue;
            }
            match self.dfs(remaining - size - 1) {
                Flow::Continue => {}
                other => return other,
            }
            self.stack.pop();
        }
        Flow::Continue
    }
}
