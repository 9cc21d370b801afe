//! Learning abstractions for an abstraction-guided programming-by-example synthesizer.
//!
//! The pieces, bottom up:
//! - [`dsl`]: a small string-transformation DSL.
//! - [`domain`]: predicate templates and abstract values.
//! - [`interp`]: tree interpolation over spurious programs, yielding new templates.
//! - [`transformer`]: data-driven synthesis of affine abstract transformers.
//! - [`ags`]: the abstraction-guided synthesizer.
//! - [`driver`]: the training loop tying them together.
//! - [`bundle`]: task files and serialized abstractions.

pub mod ags;
pub mod bundle;
pub mod clock;
pub mod domain;
pub mod driver;
pub mod dsl;
pub mod interp;
pub mod transformer;
