use std::collections::BTreeMap;
use std::fmt;

use super::predicate::{ConcretePredicate, PredicateTemplate as T};

/// A conjunction of concrete predicates over one value, or ⊥.
///
/// Conjuncts are kept sorted, deduplicated and free of conjuncts implied by others;
/// syntactic contradictions collapse to [`AbstractValue::Bottom`].
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum AbstractValue {
    Bottom,
    Conj(Vec<ConcretePredicate>),
}

impl Default for AbstractValue {
    fn default() -> Self {
        AbstractValue::top()
    }
}

impl AbstractValue {
    pub fn top() -> Self {
        AbstractValue::Conj(Vec::new())
    }

    pub fn is_top(&self) -> bool {
        matches!(self, AbstractValue::Conj(c) if c.is_empty())
    }

    pub fn is_bottom(&self) -> bool {
        matches!(self, AbstractValue::Bottom)
    }

    pub fn conjuncts(&self) -> &[ConcretePredicate] {
        match self {
            AbstractValue::Bottom => &[],
            AbstractValue::Conj(c) => c,
        }
    }

    pub fn from_conjuncts(preds: impl IntoIterator<Item = ConcretePredicate>) -> Self {
        let mut ps: Vec<ConcretePredicate> = preds.into_iter().filter(|p| p.template() != T::Top).collect();
        ps.sort_unstable();
        ps.dedup();
        normalize(ps)
    }

    pub fn meet(&self, other: &AbstractValue) -> AbstractValue {
        match (self, other) {
            (AbstractValue::Bottom, _) | (_, AbstractValue::Bottom) => AbstractValue::Bottom,
            (a, b) if a.is_top() => b.clone(),
            (a, b) if b.is_top() => a.clone(),
            (AbstractValue::Conj(a), AbstractValue::Conj(b)) => {
                AbstractValue::from_conjuncts(a.iter().chain(b.iter()).copied())
            }
        }
    }

    /// `s ∈ γ(self)`.
    pub fn contains(&self, s: &[char]) -> bool {
        match self {
            AbstractValue::Bottom => false,
            AbstractValue::Conj(c) => c.iter().all(|p| p.holds(s)),
        }
    }

    pub fn contains_str(&self, s: &str) -> bool {
        self.contains(&s.chars().collect::<Vec<_>>())
    }
}

fn normalize(ps: Vec<ConcretePredicate>) -> AbstractValue {
    let mut len_eq = None;
    let mut char_eq: BTreeMap<i64, i64> = BTreeMap::new();
    for p in &ps {
        let a = p.args();
        match p.template() {
            T::LenEq => {
                if len_eq.is_some_and(|k| k != a[0]) {
                    return AbstractValue::Bottom;
                }
                len_eq = Some(a[0]);
            }
            T::CharAtEq => {
                if char_eq.insert(a[0], a[1]).is_some_and(|c| c != a[1]) {
                    return AbstractValue::Bottom;
                }
            }
            _ => {}
        }
    }
    if let Some(k) = len_eq {
        if k < 0 || char_eq.range(k..).next().is_some() {
            return AbstractValue::Bottom;
        }
    }
    let mut out = Vec::with_capacity(ps.len());
    for p in ps {
        let a = p.args();
        match p.template() {
            T::LenNeq if len_eq == Some(a[0]) => return AbstractValue::Bottom,
            T::LenNeq if len_eq.is_some() => continue,
            T::CharAtNeq => match char_eq.get(&a[0]) {
                Some(&c) if c == a[1] => return AbstractValue::Bottom,
                Some(_) => continue,
                None if len_eq.is_some_and(|k| a[0] >= k) => continue,
                None => {}
            },
            _ => {}
        }
        out.push(p);
    }
    AbstractValue::Conj(out)
}

impl fmt::Display for AbstractValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AbstractValue::Bottom => write!(f, "bottom"),
            AbstractValue::Conj(c) if c.is_empty() => write!(f, "top"),
            AbstractValue::Conj(c) => {
                let parts: Vec<String> = c.iter().map(|p| p.to_string()).collect();
                write!(f, "{}", parts.join(" & "))
            }
        }
    }
}
