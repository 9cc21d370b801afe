use std::fmt;

use crate::dsl;

/// A DSL construct that abstract transformers are learned for.
///
/// `SubStr` takes the input string plus two exact (resolved) positions; `Const`
/// is the nullary construct for one literal.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Construct {
    Concat,
    SubStr,
    Const(String),
}

impl Construct {
    /// Constructs sharing one table, independent of any task's literals.
    pub const TABLE: [Construct; 2] = [Construct::Concat, Construct::SubStr];

    pub fn str_arity(&self) -> usize {
        match self {
            Construct::Concat => 2,
            Construct::SubStr => 1,
            Construct::Const(_) => 0,
        }
    }

    pub fn pos_arity(&self) -> usize {
        match self {
            Construct::SubStr => 2,
            _ => 0,
        }
    }

    pub fn eval(&self, strs: &[Vec<char>], pos: &[i64]) -> Option<Vec<char>> {
        match self {
            Construct::Concat => Some([strs[0].as_slice(), strs[1].as_slice()].concat()),
            Construct::SubStr => dsl::substr(&strs[0], pos[0], pos[1]).ok(),
            Construct::Const(s) => Some(s.chars().collect()),
        }
    }

    pub fn name(&self) -> String {
        match self {
            Construct::Concat => "concat".into(),
            Construct::SubStr => "substr".into(),
            Construct::Const(s) => format!("const {}", serde_json::to_string(s).expect("string")),
        }
    }

    pub fn parse(s: &str) -> Option<Construct> {
        match s {
            "concat" => Some(Construct::Concat),
            "substr" => Some(Construct::SubStr),
            _ => serde_json::from_str(s.strip_prefix("const ")?).ok().map(Construct::Const),
        }
    }
}

impl fmt::Display for Construct {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}
