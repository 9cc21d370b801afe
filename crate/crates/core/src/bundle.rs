//! Task files and serialized abstractions.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::ags::{Abstraction, SynthesisTask};
use crate::domain::PredicateTemplate;
use crate::transformer::{Construct, OutputFn, RationalMatrix, Transformer, TransformerTable, Q};

#[derive(Debug, thiserror::Error)]
pub enum BundleError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}:{line}:{column}: {msg}")]
    Json { path: String, line: usize, column: usize, msg: String },
    #[error("{path}: {msg}")]
    Invalid { path: String, msg: String },
}

fn read(path: &Path) -> Result<String, BundleError> {
    std::fs::read_to_string(path).map_err(|source| BundleError::Io { path: path.display().to_string(), source })
}

fn parse_json<T: for<'de> Deserialize<'de>>(path: &Path, text: &str) -> Result<T, BundleError> {
    serde_json::from_str(text).map_err(|e| BundleError::Json {
        path: path.display().to_string(),
        line: e.line(),
        column: e.column(),
        msg: e.to_string(),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExamplePair {
    pub input: String,
    pub output: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TaskFile {
    pub name: String,
    pub examples: Vec<ExamplePair>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub literals: Vec<String>,
}

impl TaskFile {
    pub fn load(path: &Path) -> Result<TaskFile, BundleError> {
        let t: TaskFile = parse_json(path, &read(path)?)?;
        if t.examples.is_empty() {
            return Err(BundleError::Invalid { path: path.display().to_string(), msg: "task has no examples".into() });
        }
        Ok(t)
    }

    pub fn to_task(&self) -> SynthesisTask {
        let mut task =
            SynthesisTask::new(self.examples.iter().map(|e| (e.input.clone(), e.output.clone())).collect());
        task.literals = self.literals.clone();
        task
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Provenance {
    pub seed: u64,
    pub version: String,
    pub tasks: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OutputEntry {
    pub template: String,
    /// Rows of `[numerator, denominator]` pairs.
    pub matrix: Vec<Vec<[i128; 2]>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TransformerEntry {
    pub op: String,
    pub inputs: Vec<String>,
    pub outputs: Vec<OutputEntry>,
    pub validated_samples: usize,
    pub seed: u64,
}

/// A learned abstraction as stored on disk.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AbstractionBundle {
    pub templates: Vec<String>,
    pub transformers: Vec<TransformerEntry>,
    pub provenance: Provenance,
}

impl AbstractionBundle {
    pub fn new(abs: &Abstraction, provenance: Provenance) -> Self {
        AbstractionBundle {
            templates: abs.templates.iter().map(|t| t.to_string()).collect(),
            transformers: abs.table.iter().map(entry).collect(),
            provenance,
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("bundle serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self, BundleError> {
        parse_json(Path::new("<bundle>"), text)
    }

    pub fn load(path: &Path) -> Result<Self, BundleError> {
        parse_json(path, &read(path)?)
    }

    pub fn save(&self, path: &Path) -> Result<(), BundleError> {
        std::fs::write(path, self.to_json()).map_err(|source| BundleError::Io { path: path.display().to_string(), source })
    }

    pub fn abstraction(&self) -> Result<Abstraction, BundleError> {
        let bad = |msg: String| BundleError::Invalid { path: "<bundle>".into(), msg };
        let template = |s: &str| s.parse::<PredicateTemplate>().map_err(|e| bad(e.to_string()));
        let templates = self.templates.iter().map(|s| template(s)).collect::<Result<_, _>>()?;
        let mut table = TransformerTable::new();
        for e in &self.transformers {
            let construct = Construct::parse(&e.op).ok_or_else(|| bad(format!("unknown construct {}", e.op)))?;
            let inputs: Vec<PredicateTemplate> = e.inputs.iter().map(|s| template(s)).collect::<Result<_, _>>()?;
            if inputs.len() != construct.str_arity() {
                return Err(bad(format!("{}: expected {} inputs", e.op, construct.str_arity())));
            }
            let mut outputs = Vec::new();
            for o in &e.outputs {
                let t = template(&o.template)?;
                let rows: Vec<Vec<Q>> = o
                    .matrix
                    .iter()
                    .map(|r| {
                        r.iter()
                            .map(|&[n, d]| if d == 0 { Err(bad("zero denominator".into())) } else { Ok(Q::new(n, d)) })
                            .collect()
                    })
                    .collect::<Result<_, _>>()?;
                let cols = crate::transformer::num_constants(&construct, &inputs) + 1;
                if rows.len() != t.holes() || rows.iter().any(|r| r.len() != cols) {
                    return Err(bad(format!("{}: matrix shape for {}", e.op, o.template)));
                }
                outputs.push(OutputFn { template: t, matrix: RationalMatrix::from_rows(rows) });
            }
            table.insert(Transformer {
                construct,
                inputs,
                outputs,
                validated_samples: e.validated_samples,
                seed: e.seed,
            });
        }
        Ok(Abstraction { templates, table })
    }
}

fn entry(t: &Transformer) -> TransformerEntry {
    TransformerEntry {
        op: t.construct.name(),
        inputs: t.inputs.iter().map(|i| i.to_string()).collect(),
        outputs: t
            .outputs
            .iter()
            .map(|o| OutputEntry {
                template: o.template.to_string(),
                matrix: o.matrix.to_rows().iter().map(|r| r.iter().map(|q| [*q.numer(), *q.denom()]).collect()).collect(),
            })
            .collect(),
        validated_samples: t.validated_samples,
        seed: t.seed,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::transformer::{learn_transformers, LearnConfig, SamplingOracle};

    #[test]
    fn round_trip_is_byte_identical() {
        let templates = [PredicateTemplate::Top, PredicateTemplate::LenEq, PredicateTemplate::LenNeq].into();
        let table = learn_transformers(&templates, &SamplingOracle::for_corpus(3, "ab".chars()), &LearnConfig::default());
        let abs = Abstraction { templates, table };
        let b = AbstractionBundle::new(&abs, Provenance { seed: 3, version: "t".into(), tasks: vec!["x".into()] });
        let text = b.to_json();
        let back = AbstractionBundle::from_json(&text).unwrap();
        assert_eq!(back.abstraction().unwrap(), abs);
        assert_eq!(AbstractionBundle::new(&back.abstraction().unwrap(), back.provenance.clone()).to_json(), text);
    }

    #[test]
    fn rejects_bad_shapes() {
        let mut b = AbstractionBundle::new(&Abstraction::top(), Provenance { seed: 0, version: "t".into(), tasks: vec![] });
        b.transformers[0].outputs.push(OutputEntry { template: "(len = c)".into(), matrix: vec![vec![[1, 1]]] });
        assert!(b.abstraction().is_ok());
        b.transformers[0].outputs[0].matrix = vec![vec![[1, 1], [2, 1]]];
        assert!(b.abstraction().is_err());
        b.transformers[0].outputs[0].matrix = vec![vec![[1, 0]]];
        assert!(b.abstraction().is_err());
        let err = AbstractionBundle::from_json("{\"templates\": [}").unwrap_err();
        assert!(matches!(err, BundleError::Json { line: 1, .. }));
    }
}
