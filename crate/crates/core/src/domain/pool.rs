use std::collections::BTreeSet;

use super::predicate::{ConcretePredicate, PredicateTemplate as T};
use super::value::AbstractValue;

/// Bounds on the constants used to instantiate inequality templates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConstantPool {
    pub lengths: BTreeSet<i64>,
    pub indices: Vec<i64>,
    pub chars: BTreeSet<char>,
}

pub const DEFAULT_MAX_LENGTH: i64 = 16;
pub const DEFAULT_INDICES: i64 = 16;

impl ConstantPool {
    /// Default pool for a set of strings: lengths `0..=16` plus every length seen,
    /// indices `0..16`, and every character seen.
    pub fn for_strings<'a, I>(strings: I) -> Self
    where
        I: IntoIterator<Item = &'a [char]>,
    {
        let mut pool = ConstantPool {
            lengths: (0..=DEFAULT_MAX_LENGTH).collect(),
            indices: (0..DEFAULT_INDICES).collect(),
            chars: BTreeSet::new(),
        };
        for s in strings {
            pool.lengths.insert(s.len() as i64);
            pool.chars.extend(s.iter().copied());
        }
        pool
    }

    /// All pool-bounded best instantiations of `t` satisfied by `s`.
    pub fn abstractions(&self, s: &[char], t: T) -> Vec<ConcretePredicate> {
        let n = s.len() as i64;
        let in_range = || self.indices.iter().copied().filter(move |&i| i < n);
        match t {
            T::Top => vec![ConcretePredicate::TOP],
            T::LenEq => vec![ConcretePredicate::len_eq(n)],
            T::LenNeq => self.lengths.iter().filter(|&&k| k != n).map(|&k| ConcretePredicate::len_neq(k)).collect(),
            T::CharAtEq => in_range().map(|i| ConcretePredicate::char_eq(i as usize, s[i as usize])).collect(),
            T::CharAtNeq => in_range()
                .flat_map(|i| {
                    let here = s[i as usize];
                    self.chars.iter().filter(move |&&c| c != here).map(move |&c| ConcretePredicate::char_neq(i as usize, c))
                })
                .collect(),
        }
    }

    /// Best abstraction of `s` under the given templates: the meet of all instantiations.
    pub fn alpha<'a>(&self, s: &[char], templates: impl IntoIterator<Item = &'a T>) -> AbstractValue {
        let mut ps = Vec::new();
        let mut has_len_eq = false;
        let mut has_char_eq = false;
        let templates: Vec<T> = templates.into_iter().copied().collect();
        for &t in &templates {
            has_len_eq |= t == T::LenEq;
            has_char_eq |= t == T::CharAtEq;
        }
        for t in templates {
            // These would be normalized away anyway.
            if (t == T::LenNeq && has_len_eq) || (t == T::CharAtNeq && has_char_eq) {
                continue;
            }
            ps.extend(self.abstractions(s, t));
        }
        AbstractValue::from_conjuncts(ps)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chars(s: &str) -> Vec<char> {
        s.chars().collect()
    }

    #[test]
    fn equality_templates_are_singletons() {
        let pool = ConstantPool::for_strings([chars("abc").as_slice()]);
        assert_eq!(pool.abstractions(&chars("abc"), T::LenEq), vec![ConcretePredicate::len_eq(3)]);
        assert_eq!(pool.abstractions(&chars("de"), T::LenEq), vec![ConcretePredicate::len_eq(2)]);
    }

    #[test]
    fn inequalities_enumerate_pool() {
        let pool = ConstantPool { lengths: (0..=4).collect(), indices: vec![0, 1], chars: ['a', 'b', 'z'].into() };
        let got = pool.abstractions(&chars("ab"), T::LenNeq);
        let want: Vec<_> = [0, 1, 3, 4].into_iter().map(ConcretePredicate::len_neq).collect();
        assert_eq!(got, want);
        let got = pool.abstractions(&chars("ab"), T::CharAtNeq);
        assert_eq!(got.len(), 4);
        assert!(got.iter().all(|p| p.holds(&chars("ab"))));
    }

    #[test]
    fn alpha_contains_the_string() {
        let s = chars("510-220");
        let pool = ConstantPool::for_strings([s.as_slice()]);
        let v = pool.alpha(&s, &T::ALL);
        assert!(v.contains(&s));
        assert!(!v.contains(&chars("510.220")));
    }
}
