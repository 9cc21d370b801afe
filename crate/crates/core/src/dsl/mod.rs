//! The string DSL: syntax, concrete semantics, exact facts, text form and ranking.

mod ast;
mod eval;
mod facts;
mod rank;
mod text;

pub use ast::{AstNode, Op, OpKind, Program, Sort, TypeError};
pub use eval::{eval_node, resolve_pos, substr, EvalError, Value};
pub use facts::{exact_facts, pos_fact, ChildFacts, FactSet};
pub use rank::Rank;
pub use text::{parse, print_node, ParseError};
