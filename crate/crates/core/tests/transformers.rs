use std::collections::BTreeSet;

use atlas_core::domain::{AbstractValue, ConcretePredicate as P, PredicateTemplate as T};
use atlas_core::transformer::{
    audit_table, learn_transformers, solve_linear, to_integer, LearnConfig, RationalMatrix, SamplingOracle, TransformerTable,
};
use atlas_core::transformer::Construct::{Concat, SubStr};

fn learn(ts: &[T], seed: u64) -> TransformerTable {
    let templates: BTreeSet<T> = ts.iter().copied().collect();
    learn_transformers(&templates, &SamplingOracle::for_corpus(seed, "-.\\".chars()), &LearnConfig::default())
}

fn rows(table: &TransformerTable, a: T, b: T) -> Vec<(T, Vec<Vec<i64>>)> {
    let t = table.get(&Concat, &[a, b]).expect("slot learned");
    t.outputs
        .iter()
        .map(|o| {
            let m = o.matrix.to_rows().iter().map(|r| r.iter().map(|q| to_integer(q).expect("integral")).collect()).collect();
            (o.template, m)
        })
        .collect()
}

#[test]
fn length_domain_concat_table() {
    let table = learn(&[T::Top, T::LenEq, T::LenNeq], 0);
    assert_eq!(table.len(), 12);
    assert_eq!(rows(&table, T::LenEq, T::LenEq), [(T::LenEq, vec![vec![1, 1, 0]])]);
    assert_eq!(rows(&table, T::LenEq, T::LenNeq), [(T::LenNeq, vec![vec![1, 1, 0]])]);
    assert_eq!(rows(&table, T::LenNeq, T::LenEq), [(T::LenNeq, vec![vec![1, 1, 0]])]);
    for (a, b) in [(T::LenNeq, T::LenNeq), (T::Top, T::LenEq), (T::LenEq, T::Top), (T::Top, T::Top), (T::Top, T::LenNeq)] {
        assert!(rows(&table, a, b).is_empty(), "{a} {b}");
    }
    let sub = table.get(&SubStr, &[T::Top]).unwrap();
    assert_eq!(sub.outputs.len(), 1);
    assert_eq!(sub.outputs[0].matrix, RationalMatrix::from_ints(&[[-1, 1, 0]]));
}

#[test]
fn char_domain_adds_shifted_index_rows() {
    let table = learn(&[T::Top, T::LenEq, T::CharAtEq], 0);
    // charAt(x2, i) = c with len(x1) = n gives charAt(y, n + i) = c
    assert_eq!(rows(&table, T::LenEq, T::CharAtEq), [(T::CharAtEq, vec![vec![1, 1, 0, 0], vec![0, 0, 1, 0]])]);
    // a prefix keeps its characters
    assert!(rows(&table, T::CharAtEq, T::Top).contains(&(T::CharAtEq, vec![vec![1, 0, 0], vec![0, 1, 0]])));
}

#[test]
fn applying_the_table() {
    let table = learn(&[T::Top, T::LenEq, T::LenNeq], 0);
    let a = AbstractValue::from_conjuncts([P::len_eq(3)]);
    let b = AbstractValue::from_conjuncts([P::len_eq(2)]);
    let nb = AbstractValue::from_conjuncts([P::len_neq(2)]);
    assert_eq!(table.apply(&Concat, &[&a, &b], &[]), AbstractValue::from_conjuncts([P::len_eq(5)]));
    assert_eq!(table.apply(&Concat, &[&a, &nb], &[]), AbstractValue::from_conjuncts([P::len_neq(5)]));
    assert!(table.apply(&Concat, &[&nb, &nb], &[]).is_top());
    assert_eq!(table.apply(&SubStr, &[&AbstractValue::top()], &[2, 6]), AbstractValue::from_conjuncts([P::len_eq(4)]));
    assert!(table.apply(&Concat, &[&AbstractValue::Bottom, &b], &[]).is_bottom());
}

#[test]
fn worked_linear_system() {
    let a = RationalMatrix::from_ints(&[[3, 2, 1], [1, 4, 1], [6, 4, 1]]);
    let b = RationalMatrix::from_ints(&[[5], [5], [10]]);
    assert_eq!(solve_linear(&a, &b), Some(RationalMatrix::from_ints(&[[1, 1, 0]])));
}

#[test]
fn learning_is_deterministic_per_seed() {
    let ts = [T::Top, T::LenEq, T::CharAtNeq];
    assert_eq!(learn(&ts, 11), learn(&ts, 11));
}

#[test]
fn learned_tables_survive_a_fresh_audit() {
    let table = learn(&T::ALL, 3);
    let audit = audit_table(&table, &SamplingOracle::for_corpus(0xfeed, "-.\\ab".chars()), 1000);
    assert!(!audit.is_empty());
    for e in &audit {
        assert_eq!(e.checks, 1000, "{}", e.slot);
        assert!(e.failures.is_empty(), "{} -> {}: {:?}", e.slot, e.output, e.failures[0]);
    }
}
