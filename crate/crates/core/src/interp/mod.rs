//! Tree interpolation: explain why a spurious program fails an example, and
//! turn the explanation into predicate templates.

mod check;
mod tree;

pub use check::{check_interpolant, CheckError};
pub use tree::{
    construct_tree, learn_abstract_domain, Annotation, ItpError, ItpNode, Label, TreeInterpolant, TreeItpProblem,
};
