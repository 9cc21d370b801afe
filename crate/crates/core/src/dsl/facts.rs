use std::collections::BTreeMap;

use super::ast::Op;
use super::eval::resolve_pos;

/// Exact equality facts about one string: `len(y) = k` and `charAt(y, i) = c`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FactSet {
    pub len: Option<i64>,
    pub chars: BTreeMap<i64, char>,
}

/// Facts about one child value.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ChildFacts {
    Str(FactSet),
    Pos(Option<i64>),
}

impl FactSet {
    /// Every fact about a fully known string.
    pub fn of(s: &[char]) -> Self {
        FactSet {
            len: Some(s.len() as i64),
            chars: s.iter().enumerate().map(|(i, &c)| (i as i64, c)).collect(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len.is_none() && self.chars.is_empty()
    }

    /// The string itself, when the facts pin it down completely.
    pub fn complete(&self) -> Option<Vec<char>> {
        let n = self.len?;
        (0..n).map(|i| self.chars.get(&i).copied()).collect()
    }

    pub fn holds_for(&self, s: &[char]) -> bool {
        self.len.map_or(true, |n| n == s.len() as i64)
            && self
                .chars
                .iter()
                .all(|(&i, &c)| usize::try_from(i).ok().and_then(|i| s.get(i)) == Some(&c))
    }
}

/// Facts derivable about the output of a string operator from facts about its children.
pub fn exact_facts(op: &Op, children: &[ChildFacts]) -> FactSet {
    let str_at = |i: usize| match children.get(i) {
        Some(ChildFacts::Str(f)) => Some(f),
        _ => None,
    };
    let pos_at = |i: usize| match children.get(i) {
        Some(ChildFacts::Pos(p)) => *p,
        _ => None,
    };
    let mut out = FactSet::default();
    match op {
        Op::ConstStr(s) => out = FactSet::of(&s.chars().collect::<Vec<_>>()),
        Op::Concat => {
            let (Some(a), Some(b)) = (str_at(0), str_at(1)) else { return out };
            out.len = a.len.zip(b.len).map(|(x, y)| x + y);
            out.chars = a.chars.clone();
            if let Some(la) = a.len {
                out.chars.extend(b.chars.iter().map(|(&i, &c)| (la + i, c)));
            }
        }
        Op::SubStr => {
            let (Some(x), Some(i1), Some(i2)) = (str_at(0), pos_at(1), pos_at(2)) else { return out };
            if i1 < 0 || i2 < i1 || x.len.is_some_and(|n| i2 > n) {
                return out;
            }
            out.len = Some(i2 - i1);
            out.chars = x
                .chars
                .range(i1..i2)
                .map(|(&i, &c)| (i - i1, c))
                .collect();
        }
        Op::Input | Op::AbsPos(_) | Op::CPos(..) => {}
    }
    out
}

/// Resolved index of a position operator given facts about the string it indexes.
pub fn pos_fact(op: &Op, x: &FactSet) -> Option<i64> {
    match *op {
        Op::AbsPos(k) if k >= 0 => Some(k),
        Op::AbsPos(k) => x.len.map(|n| n + k + 1),
        Op::CPos(..) => resolve_pos(op, &x.complete()?).ok(),
        _ => None,
    }
}
