use std::collections::BTreeSet;

use atlas_core::ags::{synthesize, Mode, SynthesisTask};
use atlas_core::domain::PredicateTemplate as T;
use atlas_core::driver::{learn_abstractions, rejects, DriverConfig, ProblemOutcome, TrainingProblem};

fn problem(name: &str, ex: &[(&str, &str)]) -> TrainingProblem {
    TrainingProblem {
        name: name.into(),
        task: SynthesisTask::new(ex.iter().map(|(i, o)| (i.to_string(), o.to_string())).collect()),
    }
}

fn e1() -> TrainingProblem {
    problem("e1", &[("CAV", "CAV2018"), ("SAS", "SAS2018"), ("FSE", "FSE2018")])
}

fn walkthrough() -> Vec<TrainingProblem> {
    vec![
        e1(),
        problem("e2", &[("510.220.5586", "510-220-5586")]),
        problem(
            "e3",
            &[(r"\Company\Code\index.html", r"\Company\Code\"), (r"\Company\Docs\Spec\specs.html", r"\Company\Docs\Spec\")],
        ),
    ]
}

#[test]
fn walkthrough_learns_lengths_then_characters() {
    let probs = walkthrough();
    let run = learn_abstractions(&probs, &DriverConfig::default());
    assert!(run.all_solved());
    let all: BTreeSet<T> = T::ALL.into_iter().collect();
    assert_eq!(run.abstraction.templates, all);
    let added: Vec<Vec<T>> = run.history.iter().map(|r| r.templates_added()).collect();
    assert_eq!(added[0], [T::LenNeq, T::LenEq]);
    assert_eq!(added[1], [T::CharAtNeq, T::CharAtEq]);
    assert!(added[2].is_empty());
    assert!(run.history.iter().all(|r| r.iterations.len() <= 10));

    for (rec, prob) in run.history.iter().zip(&probs) {
        // progress: each spurious program is rejected by the abstraction that follows it
        for it in rec.iterations.iter().filter(|i| !i.correct) {
            assert!(rejects(&prob.task, it, it.next.as_ref().unwrap()), "{}: {}", rec.name, it.program);
        }
        let programs: BTreeSet<String> = rec.iterations.iter().map(|i| i.program.to_string()).collect();
        assert_eq!(programs.len(), rec.iterations.len(), "spurious programs repeat in {}", rec.name);
    }

    // monotone growth of the domain
    let mut prev = BTreeSet::from([T::Top]);
    for it in run.history.iter().flat_map(|r| &r.iterations) {
        if let Some(next) = &it.next {
            assert!(prev.is_subset(&next.templates));
            prev = next.templates.clone();
        }
    }

    // idempotence: the final abstraction solves every problem right away
    for p in &probs {
        let o = synthesize(&p.task, &run.abstraction, Mode::FirstConsistent);
        let prog = o.program.unwrap();
        assert!(p.task.examples.iter().all(|(i, out)| prog.eval(i).as_deref() == Ok(out.as_str())), "{}", p.name);
    }
}

#[test]
fn e1_alone_discovers_length_domain() {
    let run = learn_abstractions(&[e1()], &DriverConfig::default());
    assert!(run.all_solved());
    assert_eq!(run.abstraction.templates, BTreeSet::from([T::Top, T::LenEq, T::LenNeq]));
    match &run.history[0].outcome {
        ProblemOutcome::Solved(p) => assert_eq!(p.to_string(), "(concat (input) (const \"2018\"))"),
        other => panic!("{other:?}"),
    }
}

#[test]
fn no_problems_keeps_top() {
    let run = learn_abstractions(&[], &DriverConfig::default());
    assert_eq!(run.abstraction.templates, BTreeSet::from([T::Top]));
    assert!(run.abstraction.table.iter().all(|t| t.is_top()));
    assert!(run.history.is_empty());
}

#[test]
fn same_seed_same_history() {
    let cfg = DriverConfig { seed: 7, ..Default::default() };
    let a = learn_abstractions(&[e1()], &cfg);
    let b = learn_abstractions(&[e1()], &cfg);
    assert_eq!(a.abstraction, b.abstraction);
    let progs = |r: &atlas_core::driver::TrainingRun| -> Vec<String> {
        r.history.iter().flat_map(|h| h.iterations.iter().map(|i| i.program.to_string())).collect()
    };
    assert_eq!(progs(&a), progs(&b));
}

#[test]
fn unsolvable_problem_is_infeasible() {
    let mut p = problem("nope", &[("a", "xyz"), ("b", "pqr")]);
    p.task.bounds.max_size = 5;
    let run = learn_abstractions(&[p, e1()], &DriverConfig::default());
    assert!(matches!(run.history[0].outcome, ProblemOutcome::Infeasible(_)));
    // the run continues with the next problem
    assert!(matches!(run.history[1].outcome, ProblemOutcome::Solved(_)));
}
