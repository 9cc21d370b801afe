//! Predicate templates, concrete predicates, and abstract values over strings.

mod pool;
mod predicate;
mod value;

use std::collections::BTreeSet;

pub use pool::{ConstantPool, DEFAULT_INDICES, DEFAULT_MAX_LENGTH};
pub use predicate::{ConcretePredicate, PredicateParseError, PredicateTemplate};
pub use value::AbstractValue;

/// An abstract domain: a set of templates, always including `Top`.
pub type TemplateSet = BTreeSet<PredicateTemplate>;

pub fn top_domain() -> TemplateSet {
    BTreeSet::from([PredicateTemplate::Top])
}
