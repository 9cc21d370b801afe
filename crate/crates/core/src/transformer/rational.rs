use std::fmt;

use num_rational::Ratio;
use num_traits::Zero;

pub type Q = Ratio<i128>;

/// Dense matrix of exact rationals.
#[derive(Clone, PartialEq, Eq)]
pub struct RationalMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Q>,
}

impl RationalMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RationalMatrix { rows, cols, data: vec![Q::zero(); rows * cols] }
    }

    pub fn from_rows(rows: Vec<Vec<Q>>) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == cols), "ragged matrix");
        RationalMatrix { rows: rows.len(), cols, data: rows.into_iter().flatten().collect() }
    }

    pub fn from_ints<R: AsRef<[i64]>>(rows: &[R]) -> Self {
        Self::from_rows(rows.iter().map(|r| r.as_ref().iter().map(|&v| Q::from_integer(v as i128)).collect()).collect())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> Q {
        self.data[r * self.cols + c]
    }

    pub fn row(&self, r: usize) -> &[Q] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<Q>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        m.row_reduce(self.cols).len()
    }

    /// Gauss-Jordan elimination on the first `lead_cols` columns; returns pivot columns.
    fn row_reduce(&mut self, lead_cols: usize) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..lead_cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| !self.get(i, c).is_zero()) else { continue };
            self.swap_rows(r, p);
            let inv = self.get(r, c).recip();
            for k in 0..self.cols {
                self.data[r * self.cols + k] *= inv;
            }
            for i in 0..self.rows {
                let f = self.get(i, c);
                if i != r && !f.is_zero() {
                    for k in 0..self.cols {
                        let v = self.get(r, k);
                        self.data[i * self.cols + k] -= f * v;
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for k in 0..self.cols {
                self.data.swap(a * self.cols + k, b * self.cols + k);
            }
        }
    }

    pub fn is_integral(&self) -> bool {
        self.data.iter().all(Ratio::is_integer)
    }
}

/// Solve `A · Pᵀ = B` exactly. Returns `P` (one row per column of `B`), with free
/// variables set to zero, or `None` if the system is inconsistent.
pub fn solve_linear(a: &RationalMatrix, b: &RationalMatrix) -> Option<RationalMatrix> {
    assert_eq!(a.rows, b.rows, "row count mismatch");
    let n = a.cols;
    let mut aug = RationalMatrix::zeros(a.rows, n + b.cols);
    for r in 0..a.rows {
        for c in 0..n {
            aug.data[r * aug.cols + c] = a.get(r, c);
        }
        for c in 0..b.cols {
            aug.data[r * aug.cols + n + c] = b.get(r, c);
        }
    }
    let pivots = aug.row_reduce(n);
    for r in pivots.len()..aug.rows {
        if (n..aug.cols).any(|c| !aug.get(r, c).is_zero()) {
            return None;
        }
    }
    let mut p = RationalMatrix::zeros(b.cols, n);
    for (r, &pc) in pivots.iter().enumerate() {
        for j in 0..b.cols {
            p.data[j * n + pc] = aug.get(r, n + j);
        }
    }
    Some(p)
}

/// Row space of an augmented system `[a | b]`, grown one row at a time.
#[derive(Clone, Debug, Default)]
pub struct IncrementalSystem {
    lead: usize,
    basis: Vec<(usize, Vec<Q>)>,
    inconsistent: bool,
}

impl IncrementalSystem {
    pub fn new(lead: usize) -> Self {
        IncrementalSystem { lead, basis: Vec::new(), inconsistent: false }
    }

    /// Add a row (`lead` coefficients followed by right-hand sides).
    pub fn push(&mut self, row: &[i64]) {
        let mut v: Vec<Q> = row.iter().map(|&x| Q::from_integer(x as i128)).collect();
        for (pc, b) in &self.basis {
            let f = v[*pc];
            if !f.is_zero() {
                for (x, y) in v.iter_mut().zip(b) {
                    *x -= f * y;
                }
            }
        }
        match (0..self.lead).find(|&c| !v[c].is_zero()) {
            Some(pc) => {
                let inv = v[pc].recip();
                v.iter_mut().for_each(|x| *x *= inv);
                for (_, b) in self.basis.iter_mut() {
                    let f = b[pc];
                    if !f.is_zero() {
                        for (x, y) in b.iter_mut().zip(&v) {
                            *x -= f * y;
                        }
                    }
                }
                self.basis.push((pc, v));
            }
            None => self.inconsistent |= v[self.lead..].iter().any(|x| !x.is_zero()),
        }
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn is_inconsistent(&self) -> bool {
        self.inconsistent
    }
}

impl fmt::Debug for RationalMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = (0..self.rows)
            .map(|r| self.row(r).iter().map(|q| q.to_string()).collect::<Vec<_>>().join(" "))
            .collect();
        write!(f, "[{}]", rows.join("; "))
    }
}

/// `Σ_k m[r][k]·v[k] + m[r][last]` for every row `r`.
pub fn affine_apply(m: &RationalMatrix, v: &[i64]) -> Vec<Q> {
    debug_assert_eq!(m.cols, v.len() + 1);
    (0..m.rows)
        .map(|r| {
            let row = m.row(r);
            let mut acc = row[v.len()];
            for (q, &x) in row.iter().zip(v) {
                if !q.is_zero() {
                    acc += q * Q::from_integer(x as i128);
                }
            }
            acc
        })
        .collect()
}

pub fn to_integer(q: &Q) -> Option<i64> {
    q.is_integer().then(|| q.to_integer()).and_then(|v| i64::try_from(v).ok())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i128, d: i128) -> Q {
        Q::new(n, d)
    }

    #[test]
    fn concat_length_system() {
        let a = RationalMatrix::from_ints(&[[3, 2, 1], [1, 4, 1], [6, 4, 1]]);
        let b = RationalMatrix::from_ints(&[[5], [5], [10]]);
        let p = solve_linear(&a, &b).unwrap();
        assert_eq!(p, RationalMatrix::from_ints(&[[1, 1, 0]]));
        assert_eq!(a.rank(), 3);
    }

    #[test]
    fn inconsistent_is_none() {
        let a = RationalMatrix::from_ints(&[[1], [1]]);
        let b = RationalMatrix::from_ints(&[[2], [3]]);
        assert_eq!(solve_linear(&a, &b), None);
    }

    #[test]
    fn constant_function() {
        let a = RationalMatrix::from_ints(&[[0, 1]]);
        let b = RationalMatrix::from_ints(&[[7]]);
        assert_eq!(solve_linear(&a, &b).unwrap(), RationalMatrix::from_ints(&[[0, 7]]));
    }

    #[test]
    fn fractional_solution() {
        let a = RationalMatrix::from_ints(&[[2, 1], [4, 1]]);
        let b = RationalMatrix::from_ints(&[[1], [2]]);
        let p = solve_linear(&a, &b).unwrap();
        assert_eq!(p.row(0), &[q(1, 2), q(0, 1)]);
        assert!(!p.is_integral());
    }

    #[test]
    fn incremental_matches_batch() {
        let mut s = IncrementalSystem::new(3);
        s.push(&[3, 2, 1, 5]);
        s.push(&[6, 4, 2, 10]);
        assert_eq!(s.rank(), 1);
        s.push(&[1, 4, 1, 5]);
        s.push(&[6, 4, 1, 10]);
        assert_eq!(s.rank(), 3);
        assert!(!s.is_inconsistent());
        s.push(&[1, 1, 1, 3]);
        assert!(s.is_inconsistent());
    }

    #[test]
    fn affine_application() {
        let m = RationalMatrix::from_ints(&[[1, 1, 0], [0, 0, 4]]);
        assert_eq!(affine_apply(&m, &[3, 2]), vec![q(5, 1), q(4, 1)]);
    }
}
