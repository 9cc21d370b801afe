use std::collections::HashSet;

use super::construct::Construct;
use super::decide::row_is_valid;
use super::rational::{affine_apply, solve_linear, to_integer, IncrementalSystem, RationalMatrix};
use super::sampler::SamplingOracle;
use crate::domain::{ConcretePredicate, ConstantPool, PredicateTemplate};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LearnConfig {
    /// Samples drawn before a slot is declared rank-deficient.
    pub max_samples: usize,
    /// Fresh samples used to validate a candidate affine function.
    pub validity_samples: usize,
    /// Input-predicate combinations examined per sample.
    pub combo_cap: usize,
    /// Give up early on slots that have produced no valid row after this many samples.
    pub stall_samples: usize,
}

impl Default for LearnConfig {
    fn default() -> Self {
        LearnConfig { max_samples: 5000, validity_samples: 2000, combo_cap: 32, stall_samples: 500 }
    }
}

/// One concrete transformer instance `[p1, …, pn] ↦ p0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ExampleRow {
    pub inputs: Vec<ConcretePredicate>,
    /// Resolved positions (only for `SubStr`).
    pub positions: Vec<i64>,
    pub output: ConcretePredicate,
}

impl ExampleRow {
    /// The constant vector `c⃗`: input predicate arguments, then positions.
    pub fn constants(&self) -> Vec<i64> {
        self.inputs.iter().flat_map(|p| p.args().iter().copied()).chain(self.positions.iter().copied()).collect()
    }
}

#[derive(Clone, Debug)]
pub struct ExampleSet {
    pub construct: Construct,
    pub inputs: Vec<PredicateTemplate>,
    pub output: PredicateTemplate,
    pub rows: Vec<ExampleRow>,
    pub samples: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GenError {
    #[error("no full-rank example set after {samples} samples")]
    InsufficientRank { samples: usize },
}

pub fn num_constants(f: &Construct, inputs: &[PredicateTemplate]) -> usize {
    inputs.iter().map(|t| t.holes()).sum::<usize>() + f.pos_arity()
}

impl ExampleSet {
    /// `A`: one row per example, `c⃗` followed by a constant 1.
    pub fn a_matrix(&self) -> RationalMatrix {
        let rows: Vec<Vec<i64>> = self.rows.iter().map(|r| [r.constants(), vec![1]].concat()).collect();
        if rows.is_empty() {
            return RationalMatrix::zeros(0, num_constants(&self.construct, &self.inputs) + 1);
        }
        RationalMatrix::from_ints(&rows)
    }

    /// `B`: one row per example, the output predicate's arguments.
    pub fn b_matrix(&self) -> RationalMatrix {
        let rows: Vec<Vec<i64>> = self.rows.iter().map(|r| r.output.args().to_vec()).collect();
        if rows.is_empty() {
            return RationalMatrix::zeros(0, self.output.holes());
        }
        RationalMatrix::from_ints(&rows)
    }

    pub fn solve(&self) -> Option<RationalMatrix> {
        if self.rows.is_empty() {
            return None;
        }
        solve_linear(&self.a_matrix(), &self.b_matrix())
    }
}

/// Concrete arguments for one draw: strings, positions, and the construct's output.
pub(crate) struct Draw {
    pub strs: Vec<Vec<char>>,
    pub pos: Vec<i64>,
    pub out: Vec<char>,
}

pub(crate) fn draw(f: &Construct, oracle: &mut SamplingOracle) -> Option<Draw> {
    let strs: Vec<Vec<char>> = (0..f.str_arity()).map(|_| oracle.string()).collect();
    let pos = if f.pos_arity() == 2 {
        let (i1, i2) = oracle.positions(strs[0].len());
        vec![i1, i2]
    } else {
        vec![]
    };
    let out = f.eval(&strs, &pos)?;
    Some(Draw { strs, pos, out })
}

impl Draw {
    pub fn pool(&self) -> ConstantPool {
        ConstantPool::for_strings(self.strs.iter().map(Vec::as_slice).chain([self.out.as_slice()]))
    }
}

/// Sample concrete inputs, abstract them, and keep valid `[p1…pn] ↦ p0` rows until
/// the input matrix has full column rank.
///
/// Stops early (returning the rows so far) once the rows admit no affine solution.
pub fn generate_examples(
    f: &Construct,
    output: PredicateTemplate,
    inputs: &[PredicateTemplate],
    oracle: &mut SamplingOracle,
    cfg: &LearnConfig,
) -> Result<ExampleSet, GenError> {
    assert_eq!(inputs.len(), f.str_arity(), "template tuple arity");
    let ncols = num_constants(f, inputs) + 1;
    let mut set = ExampleSet { construct: f.clone(), inputs: inputs.to_vec(), output, rows: vec![], samples: 0 };
    let mut system = IncrementalSystem::new(ncols);
    let mut seen: HashSet<Vec<i64>> = HashSet::new();
    // The nullary construct is deterministic: one draw sees everything.
    let max_samples = if f.str_arity() == 0 { 1 } else { cfg.max_samples };

    while set.samples < max_samples {
        set.samples += 1;
        let Some(d) = draw(f, oracle) else { continue };
        let pool = d.pool();
        let args: Vec<Vec<ConcretePredicate>> = inputs.iter().zip(&d.strs).map(|(&t, s)| pool.abstractions(s, t)).collect();
        let outs = pool.abstractions(&d.out, output);
        if outs.is_empty() || args.iter().any(Vec::is_empty) {
            continue;
        }
        let mut added = false;
        for combo in combos(&args, cfg.combo_cap, oracle) {
            for out in &outs {
                if !row_is_valid(f, &combo, &d.pos, out) || has_redundant_premise(f, &combo, &d.pos, out) {
                    continue;
                }
                let row = ExampleRow { inputs: combo.clone(), positions: d.pos.clone(), output: *out };
                let aug: Vec<i64> = [row.constants(), vec![1], out.args().to_vec()].concat();
                if seen.insert(aug.clone()) {
                    system.push(&aug);
                    set.rows.push(row);
                    added = true;
                }
            }
        }
        if added && (system.is_inconsistent() || system.rank() == ncols) {
            return Ok(set);
        }
        if set.rows.is_empty() && set.samples >= cfg.stall_samples {
            break;
        }
    }
    Err(GenError::InsufficientRank { samples: set.samples })
}

/// A row stays valid with some input predicate weakened to ⊤. Such a row is the
/// business of the slot with ⊤ in that argument, and its output constant need not
/// depend on the dropped predicate's constants at all.
fn has_redundant_premise(f: &Construct, combo: &[ConcretePredicate], pos: &[i64], out: &ConcretePredicate) -> bool {
    (0..combo.len()).any(|i| {
        combo[i] != ConcretePredicate::TOP && {
            let mut weaker = combo.to_vec();
            weaker[i] = ConcretePredicate::TOP;
            row_is_valid(f, &weaker, pos, out)
        }
    })
}

/// All argument combinations, or a random subset of `cap` of them.
fn combos(args: &[Vec<ConcretePredicate>], cap: usize, oracle: &mut SamplingOracle) -> Vec<Vec<ConcretePredicate>> {
    let total = args.iter().try_fold(1usize, |acc, a| acc.checked_mul(a.len()));
    match total {
        Some(n) if n <= cap => (0..n)
            .map(|mut k| {
                args.iter()
                    .map(|a| {
                        let p = a[k % a.len()];
                        k /= a.len();
                        p
                    })
                    .collect()
            })
            .collect(),
        _ => (0..cap).map(|_| args.iter().map(|a| a[oracle.below(a.len())]).collect()).collect(),
    }
}

/// A sample on which a candidate transformer output fails.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Counterexample {
    pub strings: Vec<String>,
    pub positions: Vec<i64>,
    pub inputs: Vec<ConcretePredicate>,
    /// The instantiated output, or `None` if the affine function left the template's domain.
    pub output: Option<ConcretePredicate>,
}

/// Instantiate output template `t` with `P · [c⃗; 1]`, if integral and well-formed.
pub fn instantiate_output(t: PredicateTemplate, p: &RationalMatrix, c: &[i64]) -> Option<ConcretePredicate> {
    let args: Option<Vec<i64>> = affine_apply(p, c).iter().map(to_integer).collect();
    t.instantiate(&args?)
}

/// One implication check on a fresh draw. `None` if the draw was unusable (no
/// input abstraction of the requested template exists).
fn check_once(
    f: &Construct,
    inputs: &[PredicateTemplate],
    output: PredicateTemplate,
    p: &RationalMatrix,
    oracle: &mut SamplingOracle,
) -> Option<Result<(), Counterexample>> {
    let d = draw(f, oracle)?;
    let pool = d.pool();
    let mut chosen = Vec::with_capacity(inputs.len());
    for (&t, s) in inputs.iter().zip(&d.strs) {
        let options = pool.abstractions(s, t);
        if options.is_empty() {
            return None;
        }
        chosen.push(options[oracle.below(options.len())]);
    }
    let c: Vec<i64> = chosen.iter().flat_map(|q| q.args().iter().copied()).chain(d.pos.iter().copied()).collect();
    let inst = instantiate_output(output, p, &c);
    if inst.is_some_and(|q| q.holds(&d.out)) {
        return Some(Ok(()));
    }
    Some(Err(Counterexample {
        strings: d.strs.iter().map(|s| s.iter().collect()).collect(),
        positions: d.pos,
        inputs: chosen,
        output: inst,
    }))
}

/// Refutation by sampling: look for a draw where the instantiated output fails.
pub fn find_counterexample(
    f: &Construct,
    inputs: &[PredicateTemplate],
    output: PredicateTemplate,
    p: &RationalMatrix,
    oracle: &mut SamplingOracle,
    samples: usize,
) -> Option<Counterexample> {
    if output == PredicateTemplate::Top {
        return None;
    }
    (0..samples).find_map(|_| check_once(f, inputs, output, p, oracle)?.err())
}

/// Run exactly `checks` implication checks (skipping unusable draws, up to a
/// bounded number of attempts). Returns the number performed and the failures.
pub fn audit_output(
    f: &Construct,
    inputs: &[PredicateTemplate],
    output: PredicateTemplate,
    p: &RationalMatrix,
    oracle: &mut SamplingOracle,
    checks: usize,
) -> (usize, Vec<Counterexample>) {
    let (mut done, mut failures) = (0, Vec::new());
    let mut attempts = 0;
    while done < checks && attempts < checks.saturating_mul(20) {
        attempts += 1;
        match check_once(f, inputs, output, p, oracle) {
            None => {}
            Some(r) => {
                done += 1;
                failures.extend(r.err());
            }
        }
    }
    (done, failures)
}

pub fn check_valid(
    f: &Construct,
    inputs: &[PredicateTemplate],
    output: PredicateTemplate,
    p: &RationalMatrix,
    oracle: &mut SamplingOracle,
    samples: usize,
) -> bool {
    find_counterexample(f, inputs, output, p, oracle, samples).is_none()
}
