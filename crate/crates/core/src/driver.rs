//! The training loop: synthesize under the current abstraction, and on a spurious
//! result learn new templates from its interpolants and rebuild the transformers.

use std::time::Duration;

use crate::clock::Instant;

use crate::ags::{abstract_eval, synthesize, Abstraction, Mode, SynthesisTask};
use crate::domain::{PredicateTemplate, TemplateSet};
use crate::dsl::Program;
use crate::interp::learn_abstract_domain;
use crate::transformer::{learn_transformers, LearnConfig, SamplingOracle};

#[derive(Clone, Debug)]
pub struct TrainingProblem {
    pub name: String,
    pub task: SynthesisTask,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DriverConfig {
    pub seed: u64,
    pub learn: LearnConfig,
    pub max_iterations: usize,
}

impl Default for DriverConfig {
    fn default() -> Self {
        DriverConfig { seed: 0, learn: LearnConfig::default(), max_iterations: 25 }
    }
}

/// One synthesize/refine round on one problem.
#[derive(Clone, Debug)]
pub struct IterationRecord {
    pub program: Program,
    pub correct: bool,
    /// Indices of the examples the program gets wrong.
    pub violated: Vec<usize>,
    pub templates_added: Vec<PredicateTemplate>,
    pub table_size: usize,
    /// The abstraction built after this round (spurious rounds that learned something).
    pub next: Option<Abstraction>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ProblemOutcome {
    Solved(Program),
    /// A spurious program taught nothing new, or the iteration cap was hit.
    NonProgress,
    /// The synthesizer found nothing within its bounds.
    Infeasible(String),
}

#[derive(Clone, Debug)]
pub struct ProblemRecord {
    pub name: String,
    pub iterations: Vec<IterationRecord>,
    pub outcome: ProblemOutcome,
    pub t_ags: Duration,
    pub t_domain: Duration,
    pub t_transformers: Duration,
}

impl ProblemRecord {
    pub fn templates_added(&self) -> Vec<PredicateTemplate> {
        self.iterations.iter().flat_map(|i| i.templates_added.iter().copied()).collect()
    }

    pub fn table_size(&self) -> usize {
        self.iterations.last().map_or(0, |i| i.table_size)
    }
}

#[derive(Clone, Debug)]
pub struct TrainingRun {
    pub abstraction: Abstraction,
    pub history: Vec<ProblemRecord>,
}

impl TrainingRun {
    pub fn all_solved(&self) -> bool {
        self.history.iter().all(|p| matches!(p.outcome, ProblemOutcome::Solved(_)))
    }
}

/// The oracle used for every transformer rebuild: the corpus alphabet plus `a-z0-9`.
pub fn training_oracle(problems: &[TrainingProblem], seed: u64) -> SamplingOracle {
    let chars = problems.iter().flat_map(|p| p.task.examples.iter().flat_map(|(i, o)| i.chars().chain(o.chars())));
    SamplingOracle::for_corpus(seed, chars.collect::<Vec<_>>())
}

pub fn learn_abstractions(problems: &[TrainingProblem], cfg: &DriverConfig) -> TrainingRun {
    let oracle = training_oracle(problems, cfg.seed);
    let mut abs = Abstraction::top();
    let mut history = Vec::new();
    for prob in problems {
        let mut rec = ProblemRecord {
            name: prob.name.clone(),
            iterations: vec![],
            outcome: ProblemOutcome::NonProgress,
            t_ags: Duration::ZERO,
            t_domain: Duration::ZERO,
            t_transformers: Duration::ZERO,
        };
        for _ in 0..cfg.max_iterations {
            let t = Instant::now();
            let result = synthesize(&prob.task, &abs, Mode::FirstConsistent);
            rec.t_ags += t.elapsed();
            let Some(p) = result.program else {
                rec.outcome = ProblemOutcome::Infeasible(result.reason.unwrap_or_default());
                break;
            };
            let violated: Vec<usize> = prob
                .task
                .examples
                .iter()
                .enumerate()
                .filter(|(_, (i, o))| p.eval(i).map_or(true, |v| v != *o))
                .map(|(k, _)| k)
                .collect();
            let mut it = IterationRecord {
                program: p.clone(),
                correct: violated.is_empty(),
                violated,
                templates_added: vec![],
                table_size: abs.table.len(),
                next: None,
            };
            if it.correct {
                rec.iterations.push(it);
                rec.outcome = ProblemOutcome::Solved(p);
                break;
            }
            let t = Instant::now();
            let learned = learn_abstract_domain(&p, &prob.task.examples);
            rec.t_domain += t.elapsed();
            let fresh: TemplateSet = learned.difference(&abs.templates).copied().collect();
            it.templates_added = fresh.iter().copied().collect();
            if fresh.is_empty() {
                rec.iterations.push(it);
                break;
            }
            let t = Instant::now();
            abs.templates.extend(fresh);
            abs.table = learn_transformers(&abs.templates, &oracle, &cfg.learn);
            rec.t_transformers += t.elapsed();
            it.table_size = abs.table.len();
            it.next = Some(abs.clone());
            rec.iterations.push(it);
        }
        history.push(rec);
    }
    TrainingRun { abstraction: abs, history }
}

/// Does `next` reject the spurious program of `it` on every example it violated?
pub fn rejects(task: &SynthesisTask, it: &IterationRecord, next: &Abstraction) -> bool {
    let pool = task.pool();
    it.violated.iter().all(|&k| {
        let (i, o) = &task.examples[k];
        let x: Vec<char> = i.chars().collect();
        !abstract_eval(it.program.root(), &x, next, &pool).contains_str(o)
    })
}
