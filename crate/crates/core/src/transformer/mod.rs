//! Data-driven synthesis of affine abstract transformers.
//!
//! For a construct `F` and input templates `χ1…χn`, sampled concrete executions are
//! abstracted into valid rows `[p1…pn] ↦ p0`; an exact linear solve recovers the
//! affine map from input constants to output constants, which is then validated
//! against fresh samples.

mod construct;
mod decide;
mod examples;
mod rational;
mod sampler;
mod table;

pub use construct::Construct;
pub use decide::row_is_valid;
pub use examples::{
    audit_output, check_valid, find_counterexample, generate_examples, instantiate_output, num_constants, Counterexample,
    ExampleRow, ExampleSet, GenError, LearnConfig,
};
pub use rational::{affine_apply, solve_linear, to_integer, IncrementalSystem, RationalMatrix, Q};
pub use sampler::{base_alphabet, mix, stable_hash, SamplingOracle, DEFAULT_MAX_LEN};
pub use table::{
    audit_table, learn_literal_transformer, learn_slot, learn_transformers, tuples, AuditEntry, OutputFn, Transformer, TransformerTable,
};
