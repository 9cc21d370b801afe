use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

/// A predicate over a single string value `α`, with integer holes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub enum PredicateTemplate {
    /// `true`
    Top,
    /// `len(α) = c`
    LenEq,
    /// `len(α) ≠ c`
    LenNeq,
    /// `charAt(α, i) = c`
    CharAtEq,
    /// `charAt(α, i) ≠ c`
    CharAtNeq,
}

impl PredicateTemplate {
    pub const ALL: [PredicateTemplate; 5] = [
        PredicateTemplate::Top,
        PredicateTemplate::LenEq,
        PredicateTemplate::LenNeq,
        PredicateTemplate::CharAtEq,
        PredicateTemplate::CharAtNeq,
    ];

    pub fn hole_names(self) -> &'static [&'static str] {
        match self {
            PredicateTemplate::Top => &[],
            PredicateTemplate::LenEq | PredicateTemplate::LenNeq => &["c"],
            PredicateTemplate::CharAtEq | PredicateTemplate::CharAtNeq => &["i", "c"],
        }
    }

    pub fn holes(self) -> usize {
        self.hole_names().len()
    }

    /// Fill the holes; `None` if the arguments don't form a well-formed predicate
    /// (wrong count, negative index, or a non-character code point).
    pub fn instantiate(self, args: &[i64]) -> Option<ConcretePredicate> {
        if args.len() != self.holes() {
            return None;
        }
        let mut a = [0i64; 2];
        a[..args.len()].copy_from_slice(args);
        if matches!(self, PredicateTemplate::CharAtEq | PredicateTemplate::CharAtNeq) {
            let ok_char = u32::try_from(a[1]).ok().and_then(char::from_u32).is_some();
            if a[0] < 0 || !ok_char {
                return None;
            }
        }
        Some(ConcretePredicate { template: self, args: a })
    }
}

impl fmt::Display for PredicateTemplate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PredicateTemplate::Top => "top",
            PredicateTemplate::LenEq => "(len = c)",
            PredicateTemplate::LenNeq => "(len != c)",
            PredicateTemplate::CharAtEq => "(char i = c)",
            PredicateTemplate::CharAtNeq => "(char i != c)",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("cannot parse predicate: {0}")]
pub struct PredicateParseError(pub String);

impl FromStr for PredicateTemplate {
    type Err = PredicateParseError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        PredicateTemplate::ALL
            .into_iter()
            .find(|t| t.to_string() == s.trim())
            .ok_or_else(|| PredicateParseError(s.to_string()))
    }
}

impl From<PredicateTemplate> for String {
    fn from(t: PredicateTemplate) -> String {
        t.to_string()
    }
}

impl TryFrom<String> for PredicateTemplate {
    type Error = PredicateParseError;
    fn try_from(s: String) -> Result<Self, Self::Error> {
        s.parse()
    }
}

/// A template with all holes filled. Unused argument slots are zero.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ConcretePredicate {
    template: PredicateTemplate,
    args: [i64; 2],
}

impl ConcretePredicate {
    pub const TOP: ConcretePredicate = ConcretePredicate { template: PredicateTemplate::Top, args: [0, 0] };

    pub fn len_eq(k: i64) -> Self {
        ConcretePredicate { template: PredicateTemplate::LenEq, args: [k, 0] }
    }

    pub fn len_neq(k: i64) -> Self {
        ConcretePredicate { template: PredicateTemplate::LenNeq, args: [k, 0] }
    }

    pub fn char_eq(i: usize, c: char) -> Self {
        ConcretePredicate { template: PredicateTemplate::CharAtEq, args: [i as i64, c as i64] }
    }

    pub fn char_neq(i: usize, c: char) -> Self {
        ConcretePredicate { template: PredicateTemplate::CharAtNeq, args: [i as i64, c as i64] }
    }

    pub fn template(&self) -> PredicateTemplate {
        self.template
    }

    /// Forget the constants.
    pub fn make_symbolic(&self) -> PredicateTemplate {
        self.template
    }

    pub fn args(&self) -> &[i64] {
        &self.args[..self.template.holes()]
    }

    /// The character argument of a `charAt` predicate.
    pub fn ch(&self) -> char {
        char::from_u32(self.args[1] as u32).unwrap_or(char::REPLACEMENT_CHARACTER)
    }

    pub fn holds(&self, s: &[char]) -> bool {
        let [a, _] = self.args;
        match self.template {
            PredicateTemplate::Top => true,
            PredicateTemplate::LenEq => s.len() as i64 == a,
            PredicateTemplate::LenNeq => s.len() as i64 != a,
            PredicateTemplate::CharAtEq => s.get(a as usize) == Some(&self.ch()),
            PredicateTemplate::CharAtNeq => s.get(a as usize) != Some(&self.ch()),
        }
    }

    pub fn holds_str(&self, s: &str) -> bool {
        self.holds(&s.chars().collect::<Vec<_>>())
    }
}

fn quote_char(c: char) -> String {
    match c {
        '\'' => "'\\''".into(),
        '\\' => "'\\\\'".into(),
        c if c.is_control() => format!("'\\u{{{:x}}}'", c as u32),
        c => format!("'{c}'"),
    }
}

fn unquote_char(s: &str) -> Option<char> {
    let inner = s.strip_prefix('\'')?.strip_suffix('\'')?;
    let mut it = inner.chars();
    match (it.next()?, it.as_str()) {
        ('\\', "'") => Some('\''),
        ('\\', "\\") => Some('\\'),
        ('\\', rest) => {
            let hex = rest.strip_prefix("u{")?.strip_suffix('}')?;
            char::from_u32(u32::from_str_radix(hex, 16).ok()?)
        }
        (c, "") => Some(c),
        _ => None,
    }
}

impl fmt::Display for ConcretePredicate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, _] = self.args;
        match self.template {
            PredicateTemplate::Top => write!(f, "top"),
            PredicateTemplate::LenEq => write!(f, "(len = {a})"),
            PredicateTemplate::LenNeq => write!(f, "(len != {a})"),
            PredicateTemplate::CharAtEq => write!(f, "(char {a} = {})", quote_char(self.ch())),
            PredicateTemplate::CharAtNeq => write!(f, "(char {a} != {})", quote_char(self.ch())),
        }
    }
}

impl FromStr for ConcretePredicate {
    type Err = PredicateParseError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || PredicateParseError(s.to_string());
        let t = s.trim();
        if t == "top" {
            return Ok(ConcretePredicate::TOP);
        }
        let body = t.strip_prefix('(').and_then(|b| b.strip_suffix(')')).ok_or_else(bad)?;
        let (head, rest) = body.split_once(' ').ok_or_else(bad)?;
        match head {
            "len" => {
                let (op, k) = rest.split_once(' ').ok_or_else(bad)?;
                let k: i64 = k.trim().parse().map_err(|_| bad())?;
                match op {
                    "=" => Ok(ConcretePredicate::len_eq(k)),
                    "!=" => Ok(ConcretePredicate::len_neq(k)),
                    _ => Err(bad()),
                }
            }
            "char" => {
                let mut parts = rest.splitn(3, ' ');
                let i: i64 = parts.next().ok_or_else(bad)?.parse().map_err(|_| bad())?;
                let op = parts.next().ok_or_else(bad)?;
                let c = unquote_char(parts.next().ok_or_else(bad)?).ok_or_else(bad)?;
                let t = match op {
                    "=" => PredicateTemplate::CharAtEq,
                    "!=" => PredicateTemplate::CharAtNeq,
                    _ => return Err(bad()),
                };
                t.instantiate(&[i, c as i64]).ok_or_else(bad)
            }
            _ => Err(bad()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn membership() {
        assert!(ConcretePredicate::len_eq(5).holds_str("CAV18"));
        assert!(!ConcretePredicate::len_neq(7).holds_str("CAV2018"));
        assert!(ConcretePredicate::char_eq(0, 'C').holds_str("CAV"));
        assert!(!ConcretePredicate::char_eq(3, 'C').holds_str("CAV"));
        assert!(ConcretePredicate::char_neq(3, 'C').holds_str("CAV"));
        assert!(ConcretePredicate::TOP.holds_str(""));
    }

    #[test]
    fn make_symbolic_forgets_constants() {
        assert_eq!(ConcretePredicate::len_neq(7).make_symbolic(), PredicateTemplate::LenNeq);
        assert_eq!(ConcretePredicate::len_eq(3).make_symbolic(), PredicateTemplate::LenEq);
        assert_eq!(ConcretePredicate::char_eq(2, 'V').make_symbolic(), PredicateTemplate::CharAtEq);
        for t in PredicateTemplate::ALL {
            let args = vec![1; t.holes()];
            assert_eq!(t.instantiate(&args).unwrap().make_symbolic(), t);
        }
    }

    #[test]
    fn instantiate_rejects_malformed() {
        assert!(PredicateTemplate::CharAtEq.instantiate(&[-1, 97]).is_none());
        assert!(PredicateTemplate::CharAtEq.instantiate(&[0, 0xD800]).is_none());
        assert!(PredicateTemplate::LenEq.instantiate(&[1, 2]).is_none());
        assert!(PredicateTemplate::LenEq.instantiate(&[-3]).is_some());
    }

    #[test]
    fn text_round_trip() {
        for t in PredicateTemplate::ALL {
            assert_eq!(t.to_string().parse::<PredicateTemplate>().unwrap(), t);
        }
        let preds = [
            ConcretePredicate::TOP,
            ConcretePredicate::len_eq(5),
            ConcretePredicate::len_neq(0),
            ConcretePredicate::char_eq(3, '-'),
            ConcretePredicate::char_neq(0, '\''),
            ConcretePredicate::char_neq(1, '\\'),
            ConcretePredicate::char_eq(2, '\n'),
            ConcretePredicate::char_eq(2, ' '),
        ];
        for p in preds {
            assert_eq!(p.to_string().parse::<ConcretePredicate>().unwrap(), p, "{p}");
        }
        assert_eq!(ConcretePredicate::char_neq(3, '-').to_string(), "(char 3 != '-')");
    }
}
