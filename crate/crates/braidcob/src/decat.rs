//! Graded Euler characteristics over ℤ[q, q⁻¹].
//!
//! Every complex built from diagonal and crossing bimodules has a class in
//! the free ℤ[q, q⁻¹]-module on the indecomposable projectives, recorded
//! here as a square matrix: column `j` is the class of the complex tensored
//! with the `j`-th projective.  The class is multiplicative under tensor
//! product and invariant under simplification, so on word complexes it is a
//! braid-group representation; the generator matrices it produces are a
//! Burau variant, pinned to this crate's grading conventions.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::bimod::Kind;
use crate::braid::BraidWord;
use crate::complex::ChainComplex;
use crate::intmat::{int, Int};
use crate::zigzag::Ring;

/// Element of ℤ[q, q⁻¹].  No stored zero coefficients.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct LaurentPoly {
    coeffs: BTreeMap<i64, Int>,
}

impl LaurentPoly {
    pub fn zero() -> LaurentPoly {
        LaurentPoly { coeffs: BTreeMap::new() }
    }

    pub fn one() -> LaurentPoly {
        LaurentPoly::q_pow(0)
    }

    /// The monomial q^k.
    pub fn q_pow(k: i64) -> LaurentPoly {
        let mut p = LaurentPoly::zero();
        p.add_term(k, Int::one());
        p
    }

    pub fn constant(c: i64) -> LaurentPoly {
        let mut p = LaurentPoly::zero();
        p.add_term(0, int(c));
        p
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, k: i64) -> Int {
        self.coeffs.get(&k).cloned().unwrap_or_else(Int::zero)
    }

    pub fn add_term(&mut self, k: i64, c: Int) {
        if c.is_zero() {
            return;
        }
        let entry = self.coeffs.entry(k).or_insert_with(Int::zero);
        *entry += c;
        if entry.is_zero() {
            self.coeffs.remove(&k);
        }
    }

    pub fn add(&self, other: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (&k, c) in &other.coeffs {
            out.add_term(k, c.clone());
        }
        out
    }

    pub fn sub(&self, other: &LaurentPoly) -> LaurentPoly {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> LaurentPoly {
        LaurentPoly { coeffs: self.coeffs.iter().map(|(&k, c)| (k, -c.clone())).collect() }
    }

    pub fn mul(&self, other: &LaurentPoly) -> LaurentPoly {
        let mut out = LaurentPoly::zero();
        for (&a, c) in &self.coeffs {
            for (&b, d) in &other.coeffs {
                out.add_term(a + b, c * d);
            }
        }
        out
    }

    pub fn scaled(&self, k: i64, c: &Int) -> LaurentPoly {
        let mut out = LaurentPoly::zero();
        for (&a, x) in &self.coeffs {
            out.add_term(a + k, x * c);
        }
        out
    }

    /// Specialization q = 1: the sum of all coefficients.
    pub fn at_one(&self) -> Int {
        self.coeffs.values().sum()
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &Int)> {
        self.coeffs.iter().map(|(&k, c)| (k, c))
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        for (pos, (&k, c)) in self.coeffs.iter().enumerate() {
            let mag = c.abs();
            if pos == 0 {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            match k {
                0 => write!(f, "{}", mag)?,
                _ => {
                    if !mag.is_one() {
                        write!(f, "{}", mag)?;
                    }
                    if k == 1 {
                        write!(f, "q")?;
                    } else {
                        write!(f, "q^{}", k)?;
                    }
                }
            }
        }
        Ok(())
    }
}

// JSON form: a list of [exponent, coefficient] pairs, the coefficient as a
// decimal string so arbitrary precision survives the trip.
impl Serialize for LaurentPoly {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let pairs: Vec<(i64, String)> =
            self.coeffs.iter().map(|(&k, c)| (k, c.to_string())).collect();
        pairs.serialize(s)
    }
}

impl<'de> Deserialize<'de> for LaurentPoly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let pairs = Vec::<(i64, String)>::deserialize(d)?;
        let mut p = LaurentPoly::zero();
        for (k, c) in pairs {
            let c: Int = c.parse().map_err(|_| D::Error::custom("bad integer coefficient"))?;
            p.add_term(k, c);
        }
        Ok(p)
    }
}

/// Square matrix over ℤ[q, q⁻¹], indexed by the vertices 1..=n.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LaurentMatrix {
    rows: Vec<Vec<LaurentPoly>>,
}

impl LaurentMatrix {
    pub fn zero(n: usize) -> LaurentMatrix {
        LaurentMatrix { rows: vec![vec![LaurentPoly::zero(); n]; n] }
    }

    pub fn identity(n: usize) -> LaurentMatrix {
        let mut m = LaurentMatrix::zero(n);
        for i in 0..n {
            m.rows[i][i] = LaurentPoly::one();
        }
        m
    }

    pub fn size(&self) -> usize {
        self.rows.len()
    }

    pub fn at(&self, i: usize, j: usize) -> &LaurentPoly {
        &self.rows[i][j]
    }

    pub fn set(&mut self, i: usize, j: usize, p: LaurentPoly) {
        self.rows[i][j] = p;
    }

    pub fn add_at(&mut self, i: usize, j: usize, p: &LaurentPoly) {
        self.rows[i][j] = self.rows[i][j].add(p);
    }

    pub fn mul(&self, other: &LaurentMatrix) -> LaurentMatrix {
        let n = self.size();
        assert_eq!(n, other.size(), "matrix dimension mismatch");
        let mut out = LaurentMatrix::zero(n);
        for i in 0..n {
            for k in 0..n {
                let a = &self.rows[i][k];
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let prod = a.mul(&other.rows[k][j]);
                    out.add_at(i, j, &prod);
                }
            }
        }
        out
    }

    pub fn scaled(&self, p: &LaurentPoly) -> LaurentMatrix {
        let n = self.size();
        let mut out = LaurentMatrix::zero(n);
        for i in 0..n {
            for j in 0..n {
                out.rows[i][j] = self.rows[i][j].mul(p);
            }
        }
        out
    }

    pub fn is_identity(&self) -> bool {
        *self == LaurentMatrix::identity(self.size())
    }

    /// Laplace expansion along the first row; fine at these sizes.
    pub fn det(&self) -> LaurentPoly {
        let n = self.size();
        if n == 0 {
            return LaurentPoly::one();
        }
        if n == 1 {
            return self.rows[0][0].clone();
        }
        let mut d = LaurentPoly::zero();
        for j in 0..n {
            if self.rows[0][j].is_zero() {
                continue;
            }
            let mut minor = LaurentMatrix::zero(n - 1);
            for r in 1..n {
                let mut cc = 0;
                for c in 0..n {
                    if c == j {
                        continue;
                    }
                    minor.rows[r - 1][cc] = self.rows[r][c].clone();
                    cc += 1;
                }
            }
            let cof = self.rows[0][j].mul(&minor.det());
            d = if j % 2 == 0 { d.add(&cof) } else { d.sub(&cof) };
        }
        d
    }

    pub fn trace(&self) -> LaurentPoly {
        let mut t = LaurentPoly::zero();
        for i in 0..self.size() {
            t = t.add(&self.rows[i][i]);
        }
        t
    }

    /// Entrywise specialization q = 1.
    pub fn at_one(&self) -> LaurentMatrix {
        let n = self.size();
        let mut out = LaurentMatrix::zero(n);
        for i in 0..n {
            for j in 0..n {
                let mut p = LaurentPoly::zero();
                p.add_term(0, self.rows[i][j].at_one());
                out.rows[i][j] = p;
            }
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.rows).expect("matrix serializes")
    }

    pub fn from_json(text: &str) -> Result<LaurentMatrix, String> {
        let rows: Vec<Vec<LaurentPoly>> =
            serde_json::from_str(text).map_err(|e| e.to_string())?;
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err("matrix is not square".into());
        }
        Ok(LaurentMatrix { rows })
    }
}

impl Serialize for LaurentMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.rows.serialize(s)
    }
}

impl<'de> Deserialize<'de> for LaurentMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let rows = Vec::<Vec<LaurentPoly>>::deserialize(d)?;
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(D::Error::custom("matrix is not square"));
        }
        Ok(LaurentMatrix { rows })
    }
}

/// Graded rank of the space of paths from `a` to `b`, read off the basis:
/// 1 + q² on the diagonal, q for neighbors, 0 otherwise.
fn graded_rank(ring: &Ring, a: u8, b: u8) -> LaurentPoly {
    let mut g = LaurentPoly::zero();
    for p in ring.basis() {
        if p.source() == a && p.target() == b {
            g.add_term(p.degree(), Int::one());
        }
    }
    g
}

/// Class of a complex in the basis of indecomposable projectives: column
/// `j` is the alternating sum over homological degrees of the classes of
/// the terms tensored with the `j`-th projective.  A diagonal summand with
/// grading shift k contributes q^k down column j's own row; a crossing
/// summand `T(i, l){k}` contributes q^k times the graded rank of the path
/// space from `l` to `j`, in row i.
pub fn k_class(c: &ChainComplex) -> LaurentMatrix {
    let n = c.n;
    let ring = Ring::new(n);
    let mut m = LaurentMatrix::zero(n);
    for (&t, module) in &c.terms {
        let negate = t.rem_euclid(2) == 1;
        for s in &module.summands {
            match s.kind {
                Kind::Diag => {
                    for j in 0..n {
                        let mut p = LaurentPoly::zero();
                        let one = if negate { -Int::one() } else { Int::one() };
                        p.add_term(s.shift, one);
                        m.add_at(j, j, &p);
                    }
                }
                Kind::Tensor(i, l) => {
                    for j in 0..n {
                        let g = graded_rank(&ring, l, (j + 1) as u8);
                        if g.is_zero() {
                            continue;
                        }
                        let sign = if negate { -Int::one() } else { Int::one() };
                        let p = g.scaled(s.shift, &sign);
                        m.add_at(i as usize - 1, j, &p);
                    }
                }
            }
        }
    }
    m
}

/// The matrix a single letter acts by: the identity minus a rank-one
/// update supported on row |letter|, scaled by q⁻² for an inverse letter.
pub fn burau_generator(n: usize, letter: i32) -> LaurentMatrix {
    assert!(letter != 0 && letter.unsigned_abs() as usize <= n, "letter out of range");
    let i = letter.unsigned_abs() as usize;
    let ring = Ring::new(n);
    let scale = if letter > 0 { 0 } else { -2 };
    let mut m = LaurentMatrix::identity(n);
    for j in 0..n {
        let g = graded_rank(&ring, i as u8, (j + 1) as u8);
        if g.is_zero() {
            continue;
        }
        m.add_at(i - 1, j, &g.scaled(scale, &-Int::one()));
    }
    m
}

/// Product of the generator matrices along the word.
pub fn burau(w: &BraidWord) -> LaurentMatrix {
    let n = w.strands() - 1;
    let mut m = LaurentMatrix::identity(n);
    for &l in w.letters() {
        m = m.mul(&burau_generator(n, l));
    }
    m
}
