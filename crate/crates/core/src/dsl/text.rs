//! S-expression program syntax, e.g. `(concat (input) (const "18"))`.

use super::ast::{AstNode, Op, Program, TypeError};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParseError {
    #[error("at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error(transparent)]
    Type(#[from] TypeError),
}

pub fn print_node(n: &AstNode) -> String {
    let mut out = String::new();
    write_node(n, &mut out);
    out
}

fn write_node(n: &AstNode, out: &mut String) {
    out.push('(');
    out.push_str(n.kind().name());
    match &n.op {
        Op::ConstStr(s) => {
            out.push(' ');
            out.push_str(&serde_json::to_string(s).expect("string literal"));
        }
        Op::AbsPos(k) => out.push_str(&format!(" {k}")),
        Op::CPos(c, j) => out.push_str(&format!(" {c} {j}")),
        _ => {}
    }
    for c in &n.children {
        out.push(' ');
        write_node(c, out);
    }
    out.push(')');
}

pub fn parse(text: &str) -> Result<Program, ParseError> {
    let mut p = Parser { src: text, pos: 0 };
    let node = p.node()?;
    p.skip_ws();
    if p.pos != text.len() {
        return Err(p.err("trailing input"));
    }
    Ok(Program::new(node)?)
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn err(&self, msg: impl Into<String>) -> ParseError {
        ParseError::Syntax { pos: self.pos, msg: msg.into() }
    }

    fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    fn skip_ws(&mut self) {
        let trimmed = self.rest().trim_start();
        self.pos = self.src.len() - trimmed.len();
    }

    fn expect(&mut self, c: char) -> Result<(), ParseError> {
        self.skip_ws();
        if self.rest().starts_with(c) {
            self.pos += c.len_utf8();
            Ok(())
        } else {
            Err(self.err(format!("expected '{c}'")))
        }
    }

    fn ident(&mut self) -> Result<&'a str, ParseError> {
        self.skip_ws();
        let rest = self.rest();
        let len = rest.find(|c: char| !c.is_ascii_alphabetic()).unwrap_or(rest.len());
        if len == 0 {
            return Err(self.err("expected operator name"));
        }
        self.pos += len;
        Ok(&rest[..len])
    }

    fn int(&mut self) -> Result<i64, ParseError> {
        self.skip_ws();
        let rest = self.rest();
        let len = rest
            .char_indices()
            .find(|&(i, c)| !(c.is_ascii_digit() || (i == 0 && c == '-')))
            .map_or(rest.len(), |(i, _)| i);
        let v = rest[..len].parse().map_err(|_| self.err("expected integer"))?;
        self.pos += len;
        Ok(v)
    }

    fn string(&mut self) -> Result<String, ParseError> {
        self.skip_ws();
        let rest = self.rest();
        if !rest.starts_with('"') {
            return Err(self.err("expected string literal"));
        }
        let mut escaped = false;
        let mut end = None;
        for (i, c) in rest.char_indices().skip(1) {
            match (escaped, c) {
                (true, _) => escaped = false,
                (false, '\\') => escaped = true,
                (false, '"') => {
                    end = Some(i + 1);
                    break;
                }
                _ => {}
            }
        }
        let end = end.ok_or_else(|| self.err("unterminated string literal"))?;
        let s = serde_json::from_str(&rest[..end]).map_err(|e| self.err(format!("bad string literal: {e}")))?;
        self.pos += end;
        Ok(s)
    }

    fn node(&mut self) -> Result<AstNode, ParseError> {
        self.expect('(')?;
        let start = self.pos;
        let name = self.ident()?;
        let (op, arity) = match name {
            "input" => (Op::Input, 0),
            "const" => (Op::ConstStr(self.string()?), 0),
            "concat" => (Op::Concat, 2),
            "substr" => (Op::SubStr, 3),
            "abspos" => (Op::AbsPos(self.int()?), 0),
            "cpos" => {
                let c = self.int()?;
                let c = u32::try_from(c).map_err(|_| self.err("code point out of range"))?;
                (Op::CPos(c, self.int()?), 0)
            }
            _ => return Err(ParseError::Syntax { pos: start, msg: format!("unknown operator '{name}'") }),
        };
        let children = (0..arity).map(|_| self.node()).collect::<Result<_, _>>()?;
        self.expect(')')?;
        Ok(AstNode { op, children })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::AstNode as N;

    #[test]
    fn round_trip_examples() {
        let text = r#"(concat (input) (const "18"))"#;
        let p = parse(text).unwrap();
        assert_eq!(p.root(), &N::concat(N::input(), N::constant("18")));
        assert_eq!(p.to_string(), text);

        let text = "(substr (input) (abspos 0) (cpos 92 -1))";
        let p = parse(text).unwrap();
        assert_eq!(p.root(), &N::substr(N::abspos(0), N::cpos('\\', -1)));
        assert_eq!(p.to_string(), text);
    }

    #[test]
    fn escapes() {
        let p = Program::new(N::constant("a\"b\\c\nñ")).unwrap();
        assert_eq!(parse(&p.to_string()).unwrap(), p);
    }

    #[test]
    fn errors_carry_position() {
        match parse("(concat (input)") {
            Err(ParseError::Syntax { pos, .. }) => assert_eq!(pos, 15),
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse("(frob)"), Err(ParseError::Syntax { pos: 1, .. })));
        assert!(matches!(parse("(input) x"), Err(ParseError::Syntax { .. })));
        assert!(matches!(parse("(substr (const \"a\") (abspos 0) (abspos 1))"), Err(ParseError::Type(_))));
    }

    #[test]
    fn whitespace_is_flexible() {
        let p = parse("  ( concat\n(input)   (const \"x\") ) ").unwrap();
        assert_eq!(p.to_string(), r#"(concat (input) (const "x"))"#);
    }
}
