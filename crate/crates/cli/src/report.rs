//! JSON reports and the bench text table.

use std::fmt::Write as _;
use std::time::Duration;

use atlas_core::ags::SynthOutcome;
use atlas_core::driver::{ProblemOutcome, ProblemRecord, TrainingRun};
use serde::{Deserialize, Serialize};

fn ms(d: Duration) -> f64 {
    (d.as_secs_f64() * 1e6).round() / 1e3
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IterationReport {
    pub program: String,
    pub correct: bool,
    pub violated: Vec<usize>,
    pub templates_added: Vec<String>,
    pub table_size: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProblemReport {
    pub problem: String,
    /// `solved`, `non_progress` or `infeasible`.
    pub outcome: String,
    pub diagnostic: Option<String>,
    pub program: Option<String>,
    pub iterations: usize,
    pub templates_added: Vec<String>,
    pub table_size: usize,
    #[serde(rename = "T_AGS_ms")]
    pub t_ags_ms: Option<f64>,
    #[serde(rename = "T_A_ms")]
    pub t_a_ms: Option<f64>,
    #[serde(rename = "T_T_ms")]
    pub t_t_ms: Option<f64>,
    pub history: Vec<IterationReport>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrainingReport {
    pub seed: u64,
    pub templates: Vec<String>,
    pub table_size: usize,
    pub problems: Vec<ProblemReport>,
}

impl ProblemReport {
    pub fn new(r: &ProblemRecord, timings: bool) -> Self {
        let (outcome, diagnostic, program) = match &r.outcome {
            ProblemOutcome::Solved(p) => ("solved", None, Some(p.to_string())),
            ProblemOutcome::NonProgress => {
                ("non_progress", Some("a spurious program taught no new template".to_string()), None)
            }
            ProblemOutcome::Infeasible(why) => ("infeasible", Some(why.clone()), None),
        };
        let t = |d: Duration| timings.then(|| ms(d));
        ProblemReport {
            problem: r.name.clone(),
            outcome: outcome.into(),
            diagnostic,
            program,
            iterations: r.iterations.len(),
            templates_added: r.templates_added().iter().map(|t| t.to_string()).collect(),
            table_size: r.table_size(),
            t_ags_ms: t(r.t_ags),
            t_a_ms: t(r.t_domain),
            t_t_ms: t(r.t_transformers),
            history: r
                .iterations
                .iter()
                .map(|i| IterationReport {
                    program: i.program.to_string(),
                    correct: i.correct,
                    violated: i.violated.clone(),
                    templates_added: i.templates_added.iter().map(|t| t.to_string()).collect(),
                    table_size: i.table_size,
                })
                .collect(),
        }
    }
}

impl TrainingReport {
    pub fn new(run: &TrainingRun, seed: u64, timings: bool) -> Self {
        TrainingReport {
            seed,
            templates: run.abstraction.templates.iter().map(|t| t.to_string()).collect(),
            table_size: run.abstraction.table.len(),
            problems: run.history.iter().map(|r| ProblemReport::new(r, timings)).collect(),
        }
    }
}

/// One synthesis run, as logged by `synth` and embedded in bench reports.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunLog {
    pub task: String,
    /// `bundle` or `baseline_top`.
    pub abstraction: String,
    pub solved: bool,
    pub program: Option<String>,
    pub reason: Option<String>,
    pub enumerated: u64,
    pub pruned_abstract: u64,
    pub concrete_rejects: u64,
    pub deduped: u64,
    pub atoms: u64,
    pub elapsed_ms: f64,
}

impl RunLog {
    pub fn new(task: &str, abstraction: &str, o: &SynthOutcome, solved: bool) -> Self {
        RunLog {
            task: task.into(),
            abstraction: abstraction.into(),
            solved,
            program: o.program.as_ref().map(|p| p.to_string()),
            reason: if solved { None } else { Some(o.reason.clone().unwrap_or_else(|| "incorrect program".into())) },
            enumerated: o.stats.enumerated,
            pruned_abstract: o.stats.pruned_abstract,
            concrete_rejects: o.stats.concrete_rejects,
            deduped: o.stats.deduped,
            atoms: o.stats.atoms,
            elapsed_ms: ms(o.elapsed),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BenchEntry {
    pub task: String,
    pub bundle: RunLog,
    pub baseline: RunLog,
    /// Baseline over bundle enumerated candidates, when both solved.
    pub ratio: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BenchSummary {
    pub tasks: usize,
    pub solved_bundle: usize,
    pub solved_baseline: usize,
    pub solved_both: usize,
    pub median_ratio: Option<f64>,
    pub geomean_ratio: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BenchReport {
    pub timeout_ms: u64,
    pub max_size: usize,
    pub tasks: Vec<BenchEntry>,
    pub summary: BenchSummary,
}

pub fn median(xs: &[f64]) -> Option<f64> {
    if xs.is_empty() {
        return None;
    }
    let mut v = xs.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len();
    Some(if n % 2 == 1 { v[n / 2] } else { (v[n / 2 - 1] + v[n / 2]) / 2.0 })
}

impl BenchSummary {
    pub fn new(entries: &[BenchEntry]) -> Self {
        let ratios: Vec<f64> = entries.iter().filter_map(|e| e.ratio).collect();
        BenchSummary {
            tasks: entries.len(),
            solved_bundle: entries.iter().filter(|e| e.bundle.solved).count(),
            solved_baseline: entries.iter().filter(|e| e.baseline.solved).count(),
            solved_both: ratios.len(),
            median_ratio: median(&ratios),
            geomean_ratio: (!ratios.is_empty())
                .then(|| (ratios.iter().map(|r| r.ln()).sum::<f64>() / ratios.len() as f64).exp()),
        }
    }
}

impl BenchReport {
    pub fn table(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(
            s,
            "{:<20} {:>6} {:>12} {:>10} {:>6} {:>12} {:>10} {:>9}",
            "task", "bundle", "enumerated", "ms", "top", "enumerated", "ms", "ratio"
        );
        let yn = |b: bool| if b { "yes" } else { "no" };
        for e in &self.tasks {
            let ratio = e.ratio.map_or("-".to_string(), |r| format!("{r:.2}"));
            let _ = writeln!(
                s,
                "{:<20} {:>6} {:>12} {:>10.1} {:>6} {:>12} {:>10.1} {:>9}",
                e.task,
                yn(e.bundle.solved),
                e.bundle.enumerated,
                e.bundle.elapsed_ms,
                yn(e.baseline.solved),
                e.baseline.enumerated,
                e.baseline.elapsed_ms,
                ratio
            );
        }
        let m = &self.summary;
        let f = |x: Option<f64>| x.map_or("-".to_string(), |r| format!("{r:.2}"));
        let _ = writeln!(
            s,
            "solved: bundle {}/{}, baseline {}/{}; median ratio {} (geomean {}) over {} tasks solved by both",
            m.solved_bundle,
            m.tasks,
            m.solved_baseline,
            m.tasks,
            f(m.median_ratio),
            f(m.geomean_ratio),
            m.solved_both
        );
        s
    }
}
