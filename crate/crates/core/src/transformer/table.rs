use std::collections::BTreeMap;

use num_traits::Zero;

use super::construct::Construct;
use super::examples::{audit_output, check_valid, generate_examples, instantiate_output, Counterexample, LearnConfig};
use super::rational::RationalMatrix;
use super::sampler::{stable_hash, SamplingOracle};
use crate::domain::{AbstractValue, ConcretePredicate, PredicateTemplate, TemplateSet};

/// One conjunct of a transformer's output: `χ'(y, P · [c⃗; 1])`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OutputFn {
    pub template: PredicateTemplate,
    pub matrix: RationalMatrix,
}

/// Abstract transformer for one construct and one tuple of input templates.
/// No outputs means the ⊤ transformer.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Transformer {
    pub construct: Construct,
    pub inputs: Vec<PredicateTemplate>,
    pub outputs: Vec<OutputFn>,
    pub validated_samples: usize,
    pub seed: u64,
}

impl Transformer {
    pub fn is_top(&self) -> bool {
        self.outputs.is_empty()
    }

    /// Column range of argument `i`'s holes within `c⃗`.
    fn columns(&self, i: usize) -> std::ops::Range<usize> {
        let start: usize = self.inputs[..i].iter().map(|t| t.holes()).sum();
        start..start + self.inputs[i].holes()
    }

    /// Does any output depend on argument `i`'s constants?
    fn uses_arg(&self, i: usize) -> bool {
        let cols = self.columns(i);
        self.outputs
            .iter()
            .any(|o| (0..o.matrix.rows()).any(|r| cols.clone().any(|c| !o.matrix.get(r, c).is_zero())))
    }

    /// Output conjuncts for concrete input predicates and positions.
    pub fn apply_concrete(&self, args: &[ConcretePredicate], pos: &[i64]) -> Vec<ConcretePredicate> {
        let c: Vec<i64> = args.iter().flat_map(|p| p.args().iter().copied()).chain(pos.iter().copied()).collect();
        self.outputs.iter().filter_map(|o| instantiate_output(o.template, &o.matrix, &c)).collect()
    }
}

/// Transformers keyed by construct and input template tuple.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TransformerTable {
    entries: BTreeMap<(Construct, Vec<PredicateTemplate>), Transformer>,
}

impl TransformerTable {
    pub fn new() -> Self {
        Self::default()
    }

    /// The table every domain starts with: ⊤ transformers for `(⊤, …, ⊤)`.
    pub fn top() -> Self {
        let mut t = TransformerTable::new();
        for f in Construct::TABLE {
            let inputs = vec![PredicateTemplate::Top; f.str_arity()];
            t.insert(Transformer { construct: f, inputs, outputs: vec![], validated_samples: 0, seed: 0 });
        }
        t
    }

    pub fn insert(&mut self, t: Transformer) {
        self.entries.insert((t.construct.clone(), t.inputs.clone()), t);
    }

    pub fn get(&self, f: &Construct, inputs: &[PredicateTemplate]) -> Option<&Transformer> {
        self.entries.get(&(f.clone(), inputs.to_vec()))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Transformer> {
        self.entries.values()
    }

    /// Abstract application: for each choice of one conjunct (or ⊤) per argument,
    /// look up and instantiate the matching transformer, then meet everything.
    pub fn apply(&self, f: &Construct, args: &[&AbstractValue], pos: &[i64]) -> AbstractValue {
        if args.iter().any(|a| a.is_bottom()) {
            return AbstractValue::Bottom;
        }
        // Per argument: (template, conjuncts of that template), ⊤ first.
        let groups: Vec<Vec<(PredicateTemplate, Vec<ConcretePredicate>)>> = args
            .iter()
            .map(|a| {
                let mut g: BTreeMap<PredicateTemplate, Vec<ConcretePredicate>> = BTreeMap::new();
                g.insert(PredicateTemplate::Top, vec![ConcretePredicate::TOP]);
                for p in a.conjuncts() {
                    g.entry(p.template()).or_default().push(*p);
                }
                g.into_iter().collect()
            })
            .collect();
        let mut out = Vec::new();
        for_each_product(&groups.iter().map(Vec::len).collect::<Vec<_>>(), |idx| {
            let templates: Vec<PredicateTemplate> = idx.iter().enumerate().map(|(i, &k)| groups[i][k].0).collect();
            let Some(t) = self.get(f, &templates) else { return };
            if t.is_top() {
                return;
            }
            // Arguments whose constants no output reads need only one representative.
            let choices: Vec<&[ConcretePredicate]> = idx
                .iter()
                .enumerate()
                .map(|(i, &k)| {
                    let all = groups[i][k].1.as_slice();
                    if t.uses_arg(i) {
                        all
                    } else {
                        &all[..1]
                    }
                })
                .collect();
            for_each_product(&choices.iter().map(|c| c.len()).collect::<Vec<_>>(), |sel| {
                let ps: Vec<ConcretePredicate> = sel.iter().enumerate().map(|(i, &k)| choices[i][k]).collect();
                out.extend(t.apply_concrete(&ps, pos));
            });
        });
        AbstractValue::from_conjuncts(out)
    }
}

fn for_each_product(sizes: &[usize], mut f: impl FnMut(&[usize])) {
    if sizes.iter().any(|&n| n == 0) {
        return;
    }
    let mut idx = vec![0; sizes.len()];
    loop {
        f(&idx);
        let mut i = 0;
        loop {
            if i == sizes.len() {
                return;
            }
            idx[i] += 1;
            if idx[i] < sizes[i] {
                break;
            }
            idx[i] = 0;
            i += 1;
        }
    }
}

fn slot_key(f: &Construct, inputs: &[PredicateTemplate]) -> String {
    let ts: Vec<String> = inputs.iter().map(|t| t.to_string()).collect();
    format!("{}[{}]", f.name(), ts.join(","))
}

/// Learn the transformer for one slot: every non-⊤ output template whose examples
/// admit a full-rank affine solution that survives validation.
pub fn learn_slot(
    f: &Construct,
    inputs: &[PredicateTemplate],
    templates: &TemplateSet,
    base: &SamplingOracle,
    cfg: &LearnConfig,
) -> Transformer {
    let slot = base.derive(stable_hash(&slot_key(f, inputs)));
    let mut outputs = Vec::new();
    for &out in templates.iter().filter(|&&t| t != PredicateTemplate::Top) {
        let salt = stable_hash(&out.to_string());
        let mut gen = slot.derive(salt);
        let Ok(set) = generate_examples(f, out, inputs, &mut gen, cfg) else { continue };
        let Some(p) = set.solve() else { continue };
        let mut val = slot.derive(salt ^ 0x5641_4c49_4441_5445);
        if check_valid(f, inputs, out, &p, &mut val, cfg.validity_samples) {
            outputs.push(OutputFn { template: out, matrix: p });
        }
    }
    Transformer {
        construct: f.clone(),
        inputs: inputs.to_vec(),
        outputs,
        validated_samples: cfg.validity_samples,
        seed: slot.seed(),
    }
}

/// Soundness audit of one transformer output.
#[derive(Clone, Debug)]
pub struct AuditEntry {
    pub slot: String,
    pub output: PredicateTemplate,
    pub checks: usize,
    pub failures: Vec<Counterexample>,
}

/// Re-validate every output of every transformer with `checks` fresh implication
/// checks each, drawn from `oracle` (use a seed disjoint from training).
pub fn audit_table(table: &TransformerTable, oracle: &SamplingOracle, checks: usize) -> Vec<AuditEntry> {
    let mut out = Vec::new();
    for t in table.iter() {
        let key = slot_key(&t.construct, &t.inputs);
        for o in &t.outputs {
            let mut rng = oracle.derive(stable_hash(&key) ^ stable_hash(&o.template.to_string()));
            let (n, failures) = audit_output(&t.construct, &t.inputs, o.template, &o.matrix, &mut rng, checks);
            out.push(AuditEntry { slot: key.clone(), output: o.template, checks: n, failures });
        }
    }
    out
}

/// All input template tuples of length `n` over `templates`, in order.
pub fn tuples(templates: &TemplateSet, n: usize) -> Vec<Vec<PredicateTemplate>> {
    let ts: Vec<PredicateTemplate> = templates.iter().copied().collect();
    let mut out = vec![vec![]];
    for _ in 0..n {
        out = out.into_iter().flat_map(|prefix| ts.iter().map(move |&t| [prefix.clone(), vec![t]].concat())).collect();
    }
    out
}

/// Learn transformers for every table construct and input tuple over `templates`.
/// Each slot samples from its own oracle derived from `(seed, slot)`, so the result
/// does not depend on scheduling.
pub fn learn_transformers(templates: &TemplateSet, oracle: &SamplingOracle, cfg: &LearnConfig) -> TransformerTable {
    let slots: Vec<(Construct, Vec<PredicateTemplate>)> = Construct::TABLE
        .iter()
        .flat_map(|f| tuples(templates, f.str_arity()).into_iter().map(move |t| (f.clone(), t)))
        .collect();
    #[cfg(feature = "parallel")]
    let learned: Vec<Transformer> = {
        use rayon::prelude::*;
        slots.par_iter().map(|(f, ins)| learn_slot(f, ins, templates, oracle, cfg)).collect()
    };
    #[cfg(not(feature = "parallel"))]
    let learned: Vec<Transformer> = slots.iter().map(|(f, ins)| learn_slot(f, ins, templates, oracle, cfg)).collect();
    let mut table = TransformerTable::new();
    for t in learned {
        table.insert(t);
    }
    table
}

/// Transformer for the nullary construct producing literal `lit`.
pub fn learn_literal_transformer(lit: &str, templates: &TemplateSet, oracle: &SamplingOracle, cfg: &LearnConfig) -> Transformer {
    learn_slot(&Construct::Const(lit.to_string()), &[], templates, oracle, cfg)
}
