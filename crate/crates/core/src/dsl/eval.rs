use super::ast::{AstNode, Op, Program};

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
pub enum EvalError {
    #[error("substring bounds [{0}, {1}) out of range for length {2}")]
    OutOfBounds(i64, i64, usize),
    #[error("fewer than {1} occurrences of {0:?}")]
    MissingOccurrence(char, i64),
}

/// A concrete value: a string (as code points) or a resolved position.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Value {
    Str(Vec<char>),
    Pos(i64),
}

impl Value {
    pub fn as_str(&self) -> Option<&[char]> {
        match self {
            Value::Str(s) => Some(s),
            Value::Pos(_) => None,
        }
    }

    pub fn as_pos(&self) -> Option<i64> {
        match self {
            Value::Pos(i) => Some(*i),
            Value::Str(_) => None,
        }
    }
}

/// Resolve a position operator against `x`.
///
/// `AbsPos(k)` is `k` for `k >= 0` and `len + k + 1` otherwise. `CPos(c, j)` is the
/// index just after the `|j|`-th occurrence of `c`, counting from the left for
/// positive `j` and from the right for negative `j`.
pub fn resolve_pos(op: &Op, x: &[char]) -> Result<i64, EvalError> {
    match *op {
        Op::AbsPos(k) => Ok(if k >= 0 { k } else { x.len() as i64 + k + 1 }),
        Op::CPos(c, j) => {
            let ch = char::from_u32(c).unwrap_or(char::REPLACEMENT_CHARACTER);
            let hits: Vec<usize> = x.iter().enumerate().filter(|(_, &d)| d == ch).map(|(i, _)| i).collect();
            let n = j.unsigned_abs() as usize;
            if n == 0 || n > hits.len() {
                return Err(EvalError::MissingOccurrence(ch, j));
            }
            let at = if j > 0 { hits[n - 1] } else { hits[hits.len() - n] };
            Ok(at as i64 + 1)
        }
        _ => unreachable!("not a position operator"),
    }
}

/// `x[i1..i2)` with bounds checking.
pub fn substr(x: &[char], i1: i64, i2: i64) -> Result<Vec<char>, EvalError> {
    if 0 <= i1 && i1 <= i2 && i2 <= x.len() as i64 {
        Ok(x[i1 as usize..i2 as usize].to_vec())
    } else {
        Err(EvalError::OutOfBounds(i1, i2, x.len()))
    }
}

pub fn eval_node(node: &AstNode, x: &[char]) -> Result<Value, EvalError> {
    match &node.op {
        Op::Input => Ok(Value::Str(x.to_vec())),
        Op::ConstStr(s) => Ok(Value::Str(s.chars().collect())),
        Op::Concat => {
            let mut a = eval_str(&node.children[0], x)?;
            a.extend(eval_str(&node.children[1], x)?);
            Ok(Value::Str(a))
        }
        Op::SubStr => {
            let src = eval_str(&node.children[0], x)?;
            let i1 = resolve_pos(&node.children[1].op, &src)?;
            let i2 = resolve_pos(&node.children[2].op, &src)?;
            substr(&src, i1, i2).map(Value::Str)
        }
        op @ (Op::AbsPos(_) | Op::CPos(..)) => resolve_pos(op, x).map(Value::Pos),
    }
}

fn eval_str(node: &AstNode, x: &[char]) -> Result<Vec<char>, EvalError> {
    match eval_node(node, x)? {
        Value::Str(s) => Ok(s),
        Value::Pos(_) => unreachable!("ill-typed program"),
    }
}

impl Program {
    pub fn eval(&self, input: &str) -> Result<String, EvalError> {
        let x: Vec<char> = input.chars().collect();
        self.eval_chars(&x).map(|s| s.into_iter().collect())
    }

    pub fn eval_chars(&self, x: &[char]) -> Result<Vec<char>, EvalError> {
        eval_str(self.root(), x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::AstNode as N;

    fn prog(n: N) -> Program {
        Program::new(n).unwrap()
    }

    #[test]
    fn concat_constants() {
        let p = prog(N::concat(N::input(), N::constant("18")));
        assert_eq!(p.eval("CAV").unwrap(), "CAV18");
        let p = prog(N::concat(N::input(), N::constant("2018")));
        assert_eq!(p.eval("CAV").unwrap(), "CAV2018");
    }

    #[test]
    fn last_separator_prefix() {
        let p = prog(N::substr(N::abspos(0), N::cpos('\\', -1)));
        assert_eq!(p.eval(r"\Company\Code\index.html").unwrap(), r"\Company\Code\");
        assert_eq!(p.eval(r"\Company\Docs\Spec\specs.html").unwrap(), r"\Company\Docs\Spec\");
    }

    #[test]
    fn positions() {
        let x: Vec<char> = "a.b.c".chars().collect();
        assert_eq!(resolve_pos(&Op::AbsPos(-1), &x), Ok(5));
        assert_eq!(resolve_pos(&Op::AbsPos(-6), &x), Ok(0));
        assert_eq!(resolve_pos(&Op::CPos('.' as u32, 1), &x), Ok(2));
        assert_eq!(resolve_pos(&Op::CPos('.' as u32, 2), &x), Ok(4));
        assert_eq!(resolve_pos(&Op::CPos('.' as u32, -2), &x), Ok(2));
        assert_eq!(resolve_pos(&Op::CPos('.' as u32, 3), &x), Err(EvalError::MissingOccurrence('.', 3)));
    }

    #[test]
    fn substr_bounds() {
        let p = prog(N::substr(N::abspos(2), N::abspos(9)));
        assert_eq!(p.eval("abc"), Err(EvalError::OutOfBounds(2, 9, 3)));
        let p = prog(N::substr(N::abspos(2), N::abspos(1)));
        assert!(p.eval("abc").is_err());
        let p = prog(N::substr(N::abspos(-3), N::abspos(-1)));
        assert_eq!(p.eval("abcd").unwrap(), "cd");
    }

    #[test]
    fn code_points_not_bytes() {
        let p = prog(N::substr(N::abspos(1), N::abspos(3)));
        assert_eq!(p.eval("añbü").unwrap(), "ñb");
    }
}
