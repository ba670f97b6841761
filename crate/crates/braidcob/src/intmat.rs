//! Exact dense linear algebra over the integers.
//!
//! Coefficients are arbitrary-precision (`BigInt`) throughout; nothing here
//! reduces modulo a prime or falls back to floating point.  The three
//! workhorses are Smith normal form with unimodular transforms (decides
//! integer linear systems), kernel bases, and row-style Hermite normal form
//! (canonicalizes a lattice basis so cached bases are deterministic).

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

pub type Int = BigInt;

pub fn int(v: i64) -> Int {
    Int::from(v)
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct IMat {
    rows: usize,
    cols: usize,
    data: Vec<Int>,
}

impl IMat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IMat { rows, cols, data: vec![Int::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IMat::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Int::one());
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Int) -> Self {
        let mut m = IMat::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m.set(i, j, f(i, j));
            }
        }
        m
    }

    /// Test/fixture helper: build from small integer rows.
    pub fn from_rows(rows: &[&[i64]]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        IMat::from_fn(r, c, |i, j| int(rows[i][j]))
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn at(&self, i: usize, j: usize) -> &Int {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Int) {
        self.data[i * self.cols + j] = v;
    }

    pub fn add_at(&mut self, i: usize, j: usize, v: &Int) {
        let idx = i * self.cols + j;
        self.data[idx] += v;
    }

    pub fn row(&self, i: usize) -> &[Int] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col_vec(&self, j: usize) -> Vec<Int> {
        (0..self.rows).map(|i| self.at(i, j).clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    if i == j {
                        self.at(i, j).is_one()
                    } else {
                        self.at(i, j).is_zero()
                    }
                })
            })
    }

    pub fn is_neg_identity(&self) -> bool {
        self.clone().neg().is_identity()
    }

    pub fn transpose(&self) -> IMat {
        IMat::from_fn(self.cols, self.rows, |i, j| self.at(j, i).clone())
    }

    pub fn mul(&self, other: &IMat) -> IMat {
        assert_eq!(self.cols, other.rows, "matrix dimension mismatch");
        let mut out = IMat::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.at(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.at(k, j);
                    if !b.is_zero() {
                        let idx = i * out.cols + j;
                        out.data[idx] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn add(&self, other: &IMat) -> IMat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        IMat::from_fn(self.rows, self.cols, |i, j| self.at(i, j) + other.at(i, j))
    }

    pub fn sub(&self, other: &IMat) -> IMat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        IMat::from_fn(self.rows, self.cols, |i, j| self.at(i, j) - other.at(i, j))
    }

    pub fn neg(&self) -> IMat {
        IMat::from_fn(self.rows, self.cols, |i, j| -self.at(i, j))
    }

    pub fn scale(&self, c: &Int) -> IMat {
        IMat::from_fn(self.rows, self.cols, |i, j| self.at(i, j) * c)
    }

    /// Matrix times column vector.
    pub fn apply(&self, v: &[Int]) -> Vec<Int> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                let mut acc = Int::zero();
                for j in 0..self.cols {
                    let a = self.at(i, j);
                    if !a.is_zero() && !v[j].is_zero() {
                        acc += a * &v[j];
                    }
                }
                acc
            })
            .collect()
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// row[i] += c * row[t]
    fn add_row_multiple(&mut self, i: usize, t: usize, c: &Int) {
        if c.is_zero() {
            return;
        }
        for j in 0..self.cols {
            let v = self.at(t, j) * c;
            let idx = i * self.cols + j;
            self.data[idx] += v;
        }
    }

    /// col[j] += c * col[t]
    fn add_col_multiple(&mut self, j: usize, t: usize, c: &Int) {
        if c.is_zero() {
            return;
        }
        for i in 0..self.rows {
            let v = self.at(i, t) * c;
            let idx = i * self.cols + j;
            self.data[idx] += v;
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let idx = i * self.cols + j;
            let v = -std::mem::take(&mut self.data[idx]);
            self.data[idx] = v;
        }
    }
}

/// Smith normal form: `u * a * v = d` with `u`, `v` unimodular and `d`
/// diagonal with a divisibility chain.
pub struct Smith {
    pub u: IMat,
    pub d: IMat,
    pub v: IMat,
}

pub fn smith(a: &IMat) -> Smith {
    let m = a.rows;
    let n = a.cols;
    let mut d = a.clone();
    let mut u = IMat::identity(m);
    let mut v = IMat::identity(n);

    let mut t = 0;
    while t < m.min(n) {
        // Pivot: minimal nonzero absolute value in the trailing submatrix.
        let mut piv: Option<(usize, usize)> = None;
        for i in t..m {
            for j in t..n {
                if !d.at(i, j).is_zero()
                    && piv.map_or(true, |(pi, pj)| d.at(i, j).abs() < d.at(pi, pj).abs())
                {
                    piv = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = piv else { break };
        d.swap_rows(t, pi);
        u.swap_rows(t, pi);
        d.swap_cols(t, pj);
        v.swap_cols(t, pj);

        'elim: loop {
            for i in (t + 1)..m {
                if d.at(i, t).is_zero() {
                    continue;
                }
                let q = d.at(i, t) / d.at(t, t);
                let c = -q;
                d.add_row_multiple(i, t, &c);
                u.add_row_multiple(i, t, &c);
                if !d.at(i, t).is_zero() {
                    // |remainder| < |pivot|: promote it and redo.
                    d.swap_rows(t, i);
                    u.swap_rows(t, i);
                    continue 'elim;
                }
            }
            for j in (t + 1)..n {
                if d.at(t, j).is_zero() {
                    continue;
                }
                let q = d.at(t, j) / d.at(t, t);
                let c = -q;
                d.add_col_multiple(j, t, &c);
                v.add_col_multiple(j, t, &c);
                if !d.at(t, j).is_zero() {
                    d.swap_cols(t, j);
                    v.swap_cols(t, j);
                    continue 'elim;
                }
            }
            break;
        }

        // Divisibility chain: pivot must divide the trailing submatrix.
        let mut chained = true;
        'div: for i in (t + 1)..m {
            for j in (t + 1)..n {
                if !d.at(i, j).mod_floor(d.at(t, t)).is_zero() {
                    let one = Int::one();
                    d.add_row_multiple(t, i, &one);
                    u.add_row_multiple(t, i, &one);
                    chained = false;
                    break 'div;
                }
            }
        }
        if !chained {
            continue;
        }

        if d.at(t, t).is_negative() {
            d.negate_row(t);
            u.negate_row(t);
        }
        t += 1;
    }

    Smith { u, d, v }
}

impl Smith {
    pub fn rank(&self) -> usize {
        let k = self.d.rows.min(self.d.cols);
        (0..k).filter(|&i| !self.d.at(i, i).is_zero()).count()
    }

    /// Integer solution of `a x = b` for the factored matrix, if one exists.
    pub fn solve(&self, b: &[Int]) -> Option<Vec<Int>> {
        let m = self.d.rows;
        let n = self.d.cols;
        let y = self.u.apply(b);
        let mut xp = vec![Int::zero(); n];
        for (i, yi) in y.iter().enumerate().take(m) {
            let di = if i < n { self.d.at(i, i).clone() } else { Int::zero() };
            if di.is_zero() {
                if !yi.is_zero() {
                    return None;
                }
            } else {
                let (q, r) = yi.div_rem(&di);
                if !r.is_zero() {
                    return None;
                }
                xp[i] = q;
            }
        }
        Some(self.v.apply(&xp))
    }
}

/// Integer solution of `a x = b`, if one exists.
pub fn solve(a: &IMat, b: &[Int]) -> Option<Vec<Int>> {
    smith(a).solve(b)
}

/// Basis of the integer kernel of `a`, rows of the result, in Hermite normal
/// form so the basis is canonical.
pub fn nullspace(a: &IMat) -> IMat {
    let s = smith(a);
    let n = a.cols;
    let k = a.rows.min(n);
    let mut rows: Vec<Vec<Int>> = Vec::new();
    for j in 0..n {
        if j >= k || s.d.at(j, j).is_zero() {
            rows.push(s.v.col_vec(j));
        }
    }
    let mut m = IMat::zeros(rows.len(), n);
    for (i, r) in rows.into_iter().enumerate() {
        for (j, x) in r.into_iter().enumerate() {
            m.set(i, j, x);
        }
    }
    hnf_rows(&m)
}

/// Row-style Hermite normal form of the row space: pivots positive, entries
/// above a pivot reduced into `[0, pivot)`, zero rows dropped.  Canonical for
/// a given row space.
pub fn hnf_rows(a: &IMat) -> IMat {
    let mut m = a.clone();
    let rows = m.rows;
    let cols = m.cols;
    let mut r = 0;
    for col in 0..cols {
        if r == rows {
            break;
        }
        loop {
            let mut piv: Option<usize> = None;
            for i in r..rows {
                if !m.at(i, col).is_zero()
                    && piv.map_or(true, |p| m.at(i, col).abs() < m.at(p, col).abs())
                {
                    piv = Some(i);
                }
            }
            let Some(p) = piv else { break };
            m.swap_rows(r, p);
            let mut done = true;
            for i in (r + 1)..rows {
                if m.at(i, col).is_zero() {
                    continue;
                }
                let q = m.at(i, col) / m.at(r, col);
                let c = -q;
                m.add_row_multiple(i, r, &c);
                if !m.at(i, col).is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if !m.at(r, col).is_zero() {
            if m.at(r, col).is_negative() {
                m.negate_row(r);
            }
            for i in 0..r {
                let q = m.at(i, col).div_floor(m.at(r, col));
                let c = -q;
                m.add_row_multiple(i, r, &c);
            }
            r += 1;
        }
    }
    let mut out = IMat::zeros(r, cols);
    for i in 0..r {
        for j in 0..cols {
            out.set(i, j, m.at(i, j).clone());
        }
    }
    out
}

/// Exact determinant (Bareiss fraction-free elimination).
pub fn det(a: &IMat) -> Int {
    assert_eq!(a.rows, a.cols, "determinant of a non-square matrix");
    let n = a.rows;
    if n == 0 {
        return Int::one();
    }
    let mut m = a.clone();
    let mut sign = Int::one();
    let mut prev = Int::one();
    for k in 0..n - 1 {
        if m.at(k, k).is_zero() {
            let Some(i) = ((k + 1)..n).find(|&i| !m.at(i, k).is_zero()) else {
                return Int::zero();
            };
            m.swap_rows(k, i);
            sign = -sign;
        }
        for i in (k + 1)..n {
            for j in (k + 1)..n {
                let num = m.at(i, j) * m.at(k, k) - m.at(i, k) * m.at(k, j);
                m.set(i, j, num / &prev);
            }
        }
        for i in (k + 1)..n {
            m.set(i, k, Int::zero());
        }
        prev = m.at(k, k).clone();
    }
    sign * m.at(n - 1, n - 1)
}

pub fn is_unimodular(a: &IMat) -> bool {
    a.rows == a.cols && det(a).abs().is_one()
}

/// Inverse of a matrix with determinant ±1.
pub fn inverse_unimodular(a: &IMat) -> IMat {
    assert!(is_unimodular(a), "matrix is not unimodular");
    let s = smith(a);
    let n = a.rows;
    let mut inv = IMat::zeros(n, n);
    for j in 0..n {
        let mut e = vec![Int::zero(); n];
        e[j] = Int::one();
        let x = s.solve(&e).expect("unimodular matrix must be invertible");
        for (i, xi) in x.into_iter().enumerate() {
            inv.set(i, j, xi);
        }
    }
    inv
}
