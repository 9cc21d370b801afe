//! Exact validity of one concrete transformer instance `p1 ∧ … ∧ pn ∧ y = F(x…) ⇒ p0`.
//!
//! Each argument is constrained by a single predicate, which fixes at most a length
//! set and one character position; everything else about the argument is free. The
//! decider searches for a counter-model over the few lengths that can matter, using
//! fresh characters wherever a character is unconstrained.

use super::construct::Construct;
use crate::domain::{ConcretePredicate, PredicateTemplate as T};

#[derive(Clone, Copy, Debug)]
enum CharCon {
    Is(i64),
    Not(i64),
}

#[derive(Clone, Copy, Debug)]
struct ArgModel {
    eq: Option<i64>,
    neq: Option<i64>,
    min: i64,
    ch: Option<(i64, CharCon)>,
}

impl ArgModel {
    fn of(p: &ConcretePredicate) -> ArgModel {
        let a = p.args();
        let mut m = ArgModel { eq: None, neq: None, min: 0, ch: None };
        match p.template() {
            T::Top => {}
            T::LenEq => m.eq = Some(a[0]),
            T::LenNeq => m.neq = Some(a[0]),
            T::CharAtEq => {
                m.min = a[0] + 1;
                m.ch = Some((a[0], CharCon::Is(a[1])));
            }
            T::CharAtNeq => m.ch = Some((a[0], CharCon::Not(a[1]))),
        }
        m
    }

    fn len_ok(&self, l: i64) -> bool {
        l >= self.min && self.eq.map_or(true, |e| e == l) && self.neq != Some(l)
    }

    fn satisfiable(&self) -> bool {
        self.exists_gt(-1)
    }

    /// Some admissible length `> m`.
    fn exists_gt(&self, m: i64) -> bool {
        match self.eq {
            Some(e) => e > m && self.len_ok(e),
            None => true,
        }
    }

    /// Some admissible length in `lo..=hi`.
    fn exists_in(&self, lo: i64, hi: i64) -> bool {
        (lo.max(0)..=hi).any(|l| self.len_ok(l))
    }

    /// Can the character at in-range index `t` differ from `c`?
    fn can_differ(&self, t: i64, c: i64) -> bool {
        !matches!(self.ch, Some((i, CharCon::Is(d))) if i == t && d == c)
    }

    /// Can the character at in-range index `t` equal `c`?
    fn can_equal(&self, t: i64, c: i64) -> bool {
        match self.ch {
            Some((i, CharCon::Is(d))) if i == t => d == c,
            Some((i, CharCon::Not(d))) if i == t => d != c,
            _ => true,
        }
    }
}

/// Is `args ∧ positions ⇒ out` valid for construct `f`?
pub fn row_is_valid(f: &Construct, args: &[ConcretePredicate], pos: &[i64], out: &ConcretePredicate) -> bool {
    match f {
        Construct::Const(s) => out.holds(&s.chars().collect::<Vec<_>>()),
        Construct::Concat => concat_valid(ArgModel::of(&args[0]), ArgModel::of(&args[1]), out),
        Construct::SubStr => substr_valid(ArgModel::of(&args[0]), pos[0], pos[1], out),
    }
}

fn concat_valid(x1: ArgModel, x2: ArgModel, out: &ConcretePredicate) -> bool {
    if !x1.satisfiable() || !x2.satisfiable() {
        return true;
    }
    let a = out.args();
    match out.template() {
        T::Top => true,
        T::LenEq => matches!((x1.eq, x2.eq), (Some(p), Some(q)) if p + q == a[0]),
        T::LenNeq => !(0..=a[0]).any(|l1| x1.len_ok(l1) && x2.len_ok(a[0] - l1)),
        T::CharAtEq => {
            let (j, c) = (a[0], a[1]);
            if j < 0 {
                return false;
            }
            for l1 in 0..=j {
                if !x1.len_ok(l1) {
                    continue;
                }
                let t = j - l1;
                // y too short, or the char comes from x2 and may differ.
                if x2.exists_in(0, t) || (x2.exists_gt(t) && x2.can_differ(t, c)) {
                    return false;
                }
            }
            !(x1.exists_gt(j) && x1.can_differ(j, c))
        }
        T::CharAtNeq => {
            let (j, c) = (a[0], a[1]);
            for l1 in 0..=j {
                if x1.len_ok(l1) && x2.exists_gt(j - l1) && x2.can_equal(j - l1, c) {
                    return false;
                }
            }
            !(x1.exists_gt(j) && x1.can_equal(j, c))
        }
    }
}

fn substr_valid(x: ArgModel, i1: i64, i2: i64, out: &ConcretePredicate) -> bool {
    if i1 < 0 || i2 < i1 || !x.exists_gt(i2 - 1) {
        return true;
    }
    let n = i2 - i1;
    let a = out.args();
    match out.template() {
        T::Top => true,
        T::LenEq => a[0] == n,
        T::LenNeq => a[0] != n,
        T::CharAtEq => 0 <= a[0] && a[0] < n && !x.can_differ(i1 + a[0], a[1]),
        T::CharAtNeq => a[0] >= n || !x.can_equal(i1 + a[0], a[1]),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use ConcretePredicate as P;

    const C: Construct = Construct::Concat;

    #[test]
    fn concat_lengths() {
        assert!(row_is_valid(&C, &[P::len_eq(3), P::len_eq(2)], &[], &P::len_eq(5)));
        assert!(!row_is_valid(&C, &[P::len_eq(3), P::len_eq(2)], &[], &P::len_eq(4)));
        assert!(row_is_valid(&C, &[P::len_eq(3), P::len_neq(2)], &[], &P::len_neq(5)));
        assert!(!row_is_valid(&C, &[P::len_eq(3), P::len_neq(2)], &[], &P::len_neq(6)));
        assert!(!row_is_valid(&C, &[P::len_neq(3), P::len_neq(2)], &[], &P::len_neq(5)));
        assert!(!row_is_valid(&C, &[P::TOP, P::len_eq(2)], &[], &P::len_eq(2)));
        // A char constraint bounds the length from below.
        assert!(row_is_valid(&C, &[P::char_eq(4, 'a'), P::len_eq(1)], &[], &P::len_neq(5)));
        assert!(!row_is_valid(&C, &[P::char_eq(4, 'a'), P::len_eq(1)], &[], &P::len_neq(6)));
    }

    #[test]
    fn concat_chars() {
        assert!(row_is_valid(&C, &[P::char_eq(1, 'a'), P::TOP], &[], &P::char_eq(1, 'a')));
        assert!(!row_is_valid(&C, &[P::char_eq(1, 'a'), P::TOP], &[], &P::char_eq(2, 'a')));
        assert!(row_is_valid(&C, &[P::len_eq(2), P::char_eq(0, 'b')], &[], &P::char_eq(2, 'b')));
        assert!(row_is_valid(&C, &[P::len_eq(2), P::char_neq(0, 'b')], &[], &P::char_neq(2, 'b')));
        assert!(!row_is_valid(&C, &[P::char_neq(1, 'a'), P::TOP], &[], &P::char_neq(1, 'a')));
        assert!(row_is_valid(&C, &[P::char_eq(1, 'a'), P::TOP], &[], &P::char_neq(1, 'b')));
        assert!(!row_is_valid(&C, &[P::len_eq(2), P::len_eq(2)], &[], &P::char_eq(0, 'x')));
    }

    #[test]
    fn substr_rows() {
        let s = Construct::SubStr;
        assert!(row_is_valid(&s, &[P::TOP], &[2, 5], &P::len_eq(3)));
        assert!(!row_is_valid(&s, &[P::TOP], &[2, 5], &P::len_eq(4)));
        assert!(row_is_valid(&s, &[P::char_eq(3, 'q')], &[2, 5], &P::char_eq(1, 'q')));
        assert!(!row_is_valid(&s, &[P::char_eq(3, 'q')], &[2, 5], &P::char_eq(0, 'q')));
        assert!(row_is_valid(&s, &[P::char_neq(3, 'q')], &[2, 5], &P::char_neq(1, 'q')));
        assert!(row_is_valid(&s, &[P::TOP], &[2, 5], &P::char_neq(3, 'q')));
        // Positions beyond any admissible length: vacuous.
        assert!(row_is_valid(&s, &[P::len_eq(1)], &[2, 5], &P::len_eq(9)));
    }

    #[test]
    fn constants() {
        let k = Construct::Const("ab".into());
        assert!(row_is_valid(&k, &[], &[], &P::len_eq(2)));
        assert!(!row_is_valid(&k, &[], &[], &P::char_eq(0, 'b')));
    }

    /// Brute-force cross-check over a tiny alphabet and bounded lengths.
    #[test]
    fn agrees_with_enumeration() {
        let alphabet = ['a', 'b', 'c'];
        let mut strings: Vec<Vec<char>> = vec![vec![]];
        for len in 1..=4 {
            let mut next = Vec::new();
            for s in strings.iter().filter(|s| s.len() == len - 1) {
                for &c in &alphabet {
                    let mut t = s.clone();
                    t.push(c);
                    next.push(t);
                }
            }
            strings.extend(next);
        }
        let preds: Vec<P> = [P::TOP, P::len_eq(1), P::len_eq(2), P::len_neq(1), P::len_neq(2)]
            .into_iter()
            .chain((0..2).flat_map(|i| ['a', 'b'].into_iter().flat_map(move |c| [P::char_eq(i, c), P::char_neq(i, c)])))
            .collect();
        // Outputs with small constants: counter-models with strings of length <= 4 suffice.
        let outs: Vec<P> = [P::len_eq(2), P::len_eq(3), P::len_neq(2), P::len_neq(3)]
            .into_iter()
            .chain((0..3).flat_map(|i| ['a', 'b'].into_iter().flat_map(move |c| [P::char_eq(i, c), P::char_neq(i, c)])))
            .collect();
        for p1 in &preds {
            for p2 in &preds {
                for out in &outs {
                    let brute = strings.iter().filter(|s| p1.holds(s)).all(|s1| {
                        strings.iter().filter(|s| p2.holds(s)).all(|s2| out.holds(&[s1.as_slice(), s2.as_slice()].concat()))
                    });
                    assert_eq!(row_is_valid(&C, &[*p1, *p2], &[], out), brute, "{p1} {p2} => {out}");
                }
            }
        }
    }
}
