use std::collections::{BTreeSet, HashSet};

use super::{abstract_eval, Abstraction, SynthesisTask};
use crate::domain::{AbstractValue, ConstantPool};
use crate::dsl::{AstNode, Rank};

/// Longest constant drawn from the outputs.
pub const MAX_CONST_LEN: usize = 6;

/// A leaf-level building block of candidate programs, with its concrete value and
/// abstract state on every example.
#[derive(Clone, Debug)]
pub struct Atom {
    pub node: AstNode,
    pub rank: Rank,
    pub values: Vec<Vec<char>>,
    pub states: Vec<AbstractValue>,
}

impl Atom {
    pub fn size(&self) -> usize {
        self.rank.size()
    }
}

/// Candidate literals: substrings (up to [`MAX_CONST_LEN`]) shared by every output,
/// plus the task's own literals.
pub fn constant_pool(task: &SynthesisTask) -> BTreeSet<String> {
    let mut common: Option<BTreeSet<String>> = None;
    for (_, out) in &task.examples {
        let cs: Vec<char> = out.chars().collect();
        let mut subs = BTreeSet::new();
        for i in 0..cs.len() {
            for j in i + 1..=(i + MAX_CONST_LEN).min(cs.len()) {
                subs.insert(cs[i..j].iter().collect::<String>());
            }
        }
        common = Some(match common {
            None => subs,
            Some(c) => c.intersection(&subs).cloned().collect(),
        });
    }
    let mut pool = common.unwrap_or_default();
    pool.extend(task.literals.iter().filter(|l| !l.is_empty()).cloned());
    pool
}

/// Position operators worth trying on the task's inputs.
pub fn position_candidates(task: &SynthesisTask) -> Vec<AstNode> {
    let inputs: Vec<Vec<char>> = task.examples.iter().map(|(i, _)| i.chars().collect()).collect();
    let max_len = inputs.iter().map(Vec::len).max().unwrap_or(0) as i64;
    let mut out: Vec<AstNode> = (-(max_len + 1)..=max_len).map(AstNode::abspos).collect();
    let mut shared: Option<BTreeSet<char>> = None;
    for x in &inputs {
        let cs: BTreeSet<char> = x.iter().copied().collect();
        shared = Some(match shared {
            None => cs,
            Some(s) => s.intersection(&cs).copied().collect(),
        });
    }
    for c in shared.unwrap_or_default() {
        for j in [1, 2, 3, -1, -2, -3] {
            out.push(AstNode::cpos(c, j));
        }
    }
    out
}

/// All atoms in rank order, keeping one (the minimal-rank) atom per distinct vector
/// of concrete outputs. Returns the atoms and the number merged away.
pub fn build_atoms(task: &SynthesisTask, abs: &Abstraction, pool: &ConstantPool) -> (Vec<Atom>, u64) {
    let mut nodes = vec![AstNode::input()];
    nodes.extend(constant_pool(task).into_iter().map(AstNode::constant));
    let positions = position_candidates(task);
    for p1 in &positions {
        for p2 in &positions {
            nodes.push(AstNode::substr(p1.clone(), p2.clone()));
        }
    }
    let mut ranked: Vec<(Rank, AstNode)> = nodes.into_iter().map(|n| (Rank::of(&n), n)).collect();
    ranked.sort_by(|a, b| a.0.cmp(&b.0));

    let inputs: Vec<Vec<char>> = task.examples.iter().map(|(i, _)| i.chars().collect()).collect();
    let mut seen: HashSet<Vec<Vec<char>>> = HashSet::new();
    let mut atoms = Vec::new();
    let mut merged = 0;
    for (rank, node) in ranked {
        let values: Option<Vec<Vec<char>>> =
            inputs.iter().map(|x| crate::dsl::eval_node(&node, x).ok()?.as_str().map(<[char]>::to_vec)).collect();
        let Some(values) = values else { continue };
        if !seen.insert(values.clone()) {
            merged += 1;
            continue;
        }
        let states = if abs.is_trivial() {
            vec![AbstractValue::top(); inputs.len()]
        } else {
            inputs.iter().map(|x| abstract_eval(&node, x, abs, pool)).collect()
        };
        atoms.push(Atom { node, rank, values, states });
    }
    (atoms, merged)
}
