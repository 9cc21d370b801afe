use std::fmt;

/// Value sort of a DSL expression.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Sort {
    Str,
    Pos,
}

/// Operator kind, without literal payload.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum OpKind {
    Input,
    ConstStr,
    SubStr,
    Concat,
    AbsPos,
    CPos,
}

impl OpKind {
    pub fn arity(self) -> usize {
        match self {
            OpKind::Input | OpKind::ConstStr | OpKind::AbsPos | OpKind::CPos => 0,
            OpKind::Concat => 2,
            OpKind::SubStr => 3,
        }
    }

    pub fn sort(self) -> Sort {
        match self {
            OpKind::AbsPos | OpKind::CPos => Sort::Pos,
            _ => Sort::Str,
        }
    }

    /// Position in the ranking order; string-producing operators come before positions.
    pub(crate) fn rank_id(self) -> u8 {
        self as u8
    }

    pub fn name(self) -> &'static str {
        match self {
            OpKind::Input => "input",
            OpKind::ConstStr => "const",
            OpKind::SubStr => "substr",
            OpKind::Concat => "concat",
            OpKind::AbsPos => "abspos",
            OpKind::CPos => "cpos",
        }
    }
}

/// An operator together with its literal payload.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Op {
    Input,
    ConstStr(String),
    Concat,
    SubStr,
    AbsPos(i64),
    /// `CPos(c, j)`: position next to the `j`-th occurrence of code point `c`.
    CPos(u32, i64),
}

impl Op {
    pub fn kind(&self) -> OpKind {
        match self {
            Op::Input => OpKind::Input,
            Op::ConstStr(_) => OpKind::ConstStr,
            Op::Concat => OpKind::Concat,
            Op::SubStr => OpKind::SubStr,
            Op::AbsPos(_) => OpKind::AbsPos,
            Op::CPos(..) => OpKind::CPos,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AstNode {
    pub op: Op,
    pub children: Vec<AstNode>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TypeError {
    #[error("{op} expects {expected} children, got {got}")]
    Arity {
        op: &'static str,
        expected: usize,
        got: usize,
    },
    #[error("{op}: argument {index} has the wrong sort")]
    Sort { op: &'static str, index: usize },
    #[error("substr must take (input) as its string argument")]
    SubStrSource,
    #[error("cpos occurrence index must be non-zero")]
    ZeroOccurrence,
    #[error("cpos code point {0} is not a valid character")]
    BadChar(u32),
    #[error("program root must be a string expression")]
    RootSort,
}

impl AstNode {
    pub fn input() -> Self {
        AstNode { op: Op::Input, children: vec![] }
    }

    pub fn constant(s: impl Into<String>) -> Self {
        AstNode { op: Op::ConstStr(s.into()), children: vec![] }
    }

    pub fn concat(a: AstNode, b: AstNode) -> Self {
        AstNode { op: Op::Concat, children: vec![a, b] }
    }

    pub fn substr(p1: AstNode, p2: AstNode) -> Self {
        AstNode { op: Op::SubStr, children: vec![AstNode::input(), p1, p2] }
    }

    pub fn abspos(k: i64) -> Self {
        AstNode { op: Op::AbsPos(k), children: vec![] }
    }

    pub fn cpos(c: char, j: i64) -> Self {
        AstNode { op: Op::CPos(c as u32, j), children: vec![] }
    }

    pub fn kind(&self) -> OpKind {
        self.op.kind()
    }

    /// Number of AST nodes.
    pub fn size(&self) -> usize {
        1 + self.children.iter().map(AstNode::size).sum::<usize>()
    }

    pub fn check(&self) -> Result<(), TypeError> {
        let kind = self.kind();
        if self.children.len() != kind.arity() {
            return Err(TypeError::Arity {
                op: kind.name(),
                expected: kind.arity(),
                got: self.children.len(),
            });
        }
        match &self.op {
            Op::Concat => {
                for (i, c) in self.children.iter().enumerate() {
                    if c.kind().sort() != Sort::Str {
                        return Err(TypeError::Sort { op: "concat", index: i });
                    }
                }
            }
            Op::SubStr => {
                if self.children[0].op != Op::Input {
                    return Err(TypeError::SubStrSource);
                }
                for i in 1..3 {
                    if self.children[i].kind().sort() != Sort::Pos {
                        return Err(TypeError::Sort { op: "substr", index: i });
                    }
                }
            }
            Op::CPos(c, j) => {
                if *j == 0 {
                    return Err(TypeError::ZeroOccurrence);
                }
                if char::from_u32(*c).is_none() {
                    return Err(TypeError::BadChar(*c));
                }
            }
            _ => {}
        }
        self.children.iter().try_for_each(AstNode::check)
    }
}

/// A well-typed program over the single input `x`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Program {
    root: AstNode,
}

impl Program {
    pub fn new(root: AstNode) -> Result<Self, TypeError> {
        root.check()?;
        if root.kind().sort() != Sort::Str {
            return Err(TypeError::RootSort);
        }
        Ok(Program { root })
    }

    pub fn root(&self) -> &AstNode {
        &self.root
    }

    pub fn size(&self) -> usize {
        self.root.size()
    }
}

impl fmt::Display for Program {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", super::text::print_node(&self.root))
    }
}
