use super::ast::{AstNode, Op, Program};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
enum Literal {
    None,
    Str(Vec<char>),
    Int(i64),
    CharOcc(u32, i64),
}

/// Total order on programs: AST size first, then operator, literal, and children
/// (compared recursively with the same key).
///
/// Two programs have equal ranks iff they are structurally identical.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Rank {
    size: usize,
    op: u8,
    literal: Literal,
    children: Vec<Rank>,
}

impl Rank {
    pub fn of(node: &AstNode) -> Rank {
        let children: Vec<Rank> = node.children.iter().map(Rank::of).collect();
        let literal = match &node.op {
            Op::ConstStr(s) => Literal::Str(s.chars().collect()),
            Op::AbsPos(k) => Literal::Int(*k),
            Op::CPos(c, j) => Literal::CharOcc(*c, *j),
            _ => Literal::None,
        };
        Rank {
            size: 1 + children.iter().map(|c| c.size).sum::<usize>(),
            op: node.kind().rank_id(),
            literal,
            children,
        }
    }

    pub fn size(&self) -> usize {
        self.size
    }
}

impl Program {
    pub fn rank(&self) -> Rank {
        Rank::of(self.root())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::AstNode as N;

    fn r(n: N) -> Rank {
        Rank::of(&n)
    }

    #[test]
    fn size_monotone() {
        assert!(r(N::input()) < r(N::concat(N::input(), N::constant("a"))));
        assert!(r(N::constant("zzzz")) < r(N::concat(N::input(), N::input())));
    }

    #[test]
    fn injective_on_literals() {
        assert_ne!(r(N::constant("a")), r(N::constant("b")));
        assert!(r(N::constant("a")) < r(N::constant("b")));
        assert!(r(N::abspos(-2)) < r(N::abspos(1)));
        assert!(r(N::abspos(9)) < r(N::cpos('a', 1)));
    }

    #[test]
    fn children_break_ties() {
        let a = N::concat(N::input(), N::constant("a"));
        let b = N::concat(N::constant("a"), N::input());
        assert!(r(a) < r(b));
    }
}
