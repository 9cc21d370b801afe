//! The abstraction-guided synthesizer (AGS).
//!
//! Candidates are right-nested concatenations of atoms (`Input`, constants, and
//! substrings of the input), searched in rank order. Each candidate carries one
//! abstract state per example; candidates whose state excludes the expected output
//! are pruned, including partial candidates with an unfilled suffix.

mod atoms;
mod search;

use std::time::Duration;

use crate::clock::Instant;

use serde::{Deserialize, Serialize};

pub use atoms::{build_atoms, constant_pool, position_candidates, Atom, MAX_CONST_LEN};

use crate::domain::{top_domain, AbstractValue, ConstantPool, TemplateSet};
use crate::dsl::{AstNode, Op, Program};
use crate::transformer::{Construct, TransformerTable};
use search::{Flow, Search};

/// An abstract domain together with its transformers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Abstraction {
    pub templates: TemplateSet,
    pub table: TransformerTable,
}

impl Abstraction {
    /// `{⊤}` with ⊤ transformers.
    pub fn top() -> Self {
        Abstraction { templates: top_domain(), table: TransformerTable::top() }
    }

    /// Only `⊤`: every abstract state is ⊤.
    pub fn is_trivial(&self) -> bool {
        self.templates.iter().all(|t| *t == crate::domain::PredicateTemplate::Top)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bounds {
    pub max_size: usize,
    pub max_candidates: Option<u64>,
    pub timeout: Option<Duration>,
}

pub const DEFAULT_MAX_SIZE: usize = 14;

impl Default for Bounds {
    fn default() -> Self {
        Bounds { max_size: DEFAULT_MAX_SIZE, max_candidates: None, timeout: Some(Duration::from_secs(60)) }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SynthesisTask {
    pub examples: Vec<(String, String)>,
    pub literals: Vec<String>,
    pub bounds: Bounds,
}

impl SynthesisTask {
    pub fn new(examples: Vec<(String, String)>) -> Self {
        let mut deduped: Vec<(String, String)> = Vec::new();
        for e in examples {
            if !deduped.contains(&e) {
                deduped.push(e);
            }
        }
        SynthesisTask { examples: deduped, literals: vec![], bounds: Bounds::default() }
    }

    /// Default constant pool over every string in the task.
    pub fn pool(&self) -> ConstantPool {
        let strings: Vec<Vec<char>> =
            self.examples.iter().flat_map(|(i, o)| [i.chars().collect(), o.chars().collect()]).collect();
        ConstantPool::for_strings(strings.iter().map(Vec::as_slice))
    }
}

/// When to stop.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    /// Return the first (minimal-rank) abstractly consistent program.
    FirstConsistent,
    /// Keep going until an abstractly consistent program is also concretely correct.
    Checked,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SynthStats {
    pub enumerated: u64,
    pub pruned_abstract: u64,
    pub deduped: u64,
    pub concrete_rejects: u64,
    pub atoms: u64,
}

#[derive(Clone, Debug)]
pub struct SynthOutcome {
    pub program: Option<Program>,
    pub stats: SynthStats,
    /// Why the search stopped without a program.
    pub reason: Option<String>,
    pub elapsed: Duration,
}

/// Abstract semantics of a program on input `x`. Leaves get their best abstraction
/// under the domain, as do substrings of the input; `Concat` goes through the table.
pub fn abstract_eval(node: &AstNode, x: &[char], abs: &Abstraction, pool: &ConstantPool) -> AbstractValue {
    match &node.op {
        Op::Input => pool.alpha(x, &abs.templates),
        Op::ConstStr(s) => pool.alpha(&s.chars().collect::<Vec<_>>(), &abs.templates),
        Op::Concat => {
            let a = abstract_eval(&node.children[0], x, abs, pool);
            let b = abstract_eval(&node.children[1], x, abs, pool);
            abs.table.apply(&Construct::Concat, &[&a, &b], &[])
        }
        // The source is always the input and the positions are exact, so the
        // substring itself is known: abstract it directly.
        Op::SubStr => match crate::dsl::eval_node(node, x) {
            Ok(v) => pool.alpha(v.as_str().expect("substr yields a string"), &abs.templates),
            Err(_) => AbstractValue::Bottom,
        },
        Op::AbsPos(_) | Op::CPos(..) => AbstractValue::top(),
    }
}

pub fn is_correct(p: &Program, examples: &[(String, String)]) -> bool {
    examples.iter().all(|(i, o)| p.eval(i).is_ok_and(|v| v == *o))
}

fn chain_program(atoms: &[Atom], chain: &[usize]) -> Program {
    let mut it = chain.iter().rev();
    let mut node = atoms[*it.next().expect("non-empty chain")].node.clone();
    for &a in it {
        node = AstNode::concat(atoms[a].node.clone(), node);
    }
    Program::new(node).expect("atoms are well-typed")
}

pub fn synthesize(task: &SynthesisTask, abs: &Abstraction, mode: Mode) -> SynthOutcome {
    synthesize_traced(task, abs, mode, None)
}

/// Like [`synthesize`], calling `trace` on every complete candidate in enumeration order.
pub fn synthesize_traced(
    task: &SynthesisTask,
    abs: &Abstraction,
    mode: Mode,
    mut trace: Option<&mut dyn FnMut(&Program)>,
) -> SynthOutcome {
    let start = Instant::now();
    let pool = task.pool();
    let (atoms, merged) = build_atoms(task, abs, &pool);
    let mut stats = SynthStats { deduped: merged, atoms: atoms.len() as u64, ..Default::default() };
    if task.examples.is_empty() {
        return SynthOutcome { program: None, stats, reason: Some("no examples".into()), elapsed: start.elapsed() };
    }
    let traced = trace.is_some();
    let mut chain_trace = |chain: &[usize]| {
        if let Some(t) = trace.as_mut() {
            t(&chain_program(&atoms, chain));
        }
    };
    let mut search = Search {
        atoms: &atoms,
        abs,
        outs: task.examples.iter().map(|(_, o)| o.chars().collect()).collect(),
        mode,
        stats: std::mem::take(&mut stats),
        deadline: task.bounds.timeout.map(|t| start + t),
        max_candidates: task.bounds.max_candidates,
        stack: vec![],
        trace: if traced { Some(&mut chain_trace) } else { None },
    };
    let flow = search.run(task.bounds.max_size);
    let (stats, stack) = (search.stats, search.stack);
    let (program, reason) = match flow {
        Flow::Found => (Some(chain_program(&atoms, &stack)), None),
        Flow::Abort(why) => (None, Some(why.to_string())),
        Flow::Continue => (None, Some(format!("no program up to size {}", task.bounds.max_size))),
    };
    SynthOutcome { program, stats, reason, elapsed: start.elapsed() }
}
