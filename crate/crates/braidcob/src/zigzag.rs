//! Zigzag algebra of the type A quiver on `n` vertices.
//!
//! The algebra is the quotient of the path algebra of the doubled A_n quiver
//! by the relations that kill every length-2 path except the round trips
//! `(i|i-1|i)` and `(i|i+1|i)`, and identify those two round trips at each
//! vertex.  It is graded by path length, has rank `4n - 2`, and every product
//! of basis paths is again a basis path or zero, so multiplication is a
//! table, not a rewriting process.
//!
//! Basis paths are stored as vertex sequences.  Degree 0: lazy paths `(i)`.
//! Degree 1: arrows `(i|i±1)`.  Degree 2: one loop per vertex, written
//! `X_i = (i|i-1|i)` for `i >= 2` and `X_1 = (1|2|1)`.  For `n = 1` the loop
//! `X_1` keeps the representative `(1|2|1)` even though vertex 2 is absent;
//! it is the one basis path allowed to mention an out-of-range vertex.

use crate::intmat::{nullspace, solve, IMat, Int};
use num_traits::Zero;
use once_cell::sync::Lazy;
use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, RwLock};

/// A basis path, as its vertex sequence (length 1, 2 or 3).
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Path(pub Vec<u8>);

impl Path {
    pub fn degree(&self) -> i64 {
        self.0.len() as i64 - 1
    }

    pub fn source(&self) -> u8 {
        self.0[0]
    }

    pub fn target(&self) -> u8 {
        *self.0.last().unwrap()
    }
}

impl fmt::Display for Path {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.len() == 3 {
            return write!(f, "X_{}", self.0[0]);
        }
        let verts: Vec<String> = self.0.iter().map(|v| v.to_string()).collect();
        write!(f, "({})", verts.join("|"))
    }
}

pub struct Ring {
    n: usize,
    basis: Vec<Path>,
    index: HashMap<Path, usize>,
    /// `mult[i][j]` is the product of basis paths `i` and `j`: either another
    /// basis path or zero.  Coefficients are always 0 or 1.
    mult: Vec<Vec<Option<usize>>>,
    center: Vec<Vec<Int>>,
}

/// An element, as coefficients over the ring basis.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Elt(pub Vec<Int>);

impl Elt {
    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|c| c.is_zero())
    }
}

static RINGS: Lazy<RwLock<HashMap<usize, Arc<Ring>>>> = Lazy::new(|| RwLock::new(HashMap::new()));

impl Ring {
    /// The zigzag algebra on `n >= 1` vertices, cached per `n`.
    pub fn new(n: usize) -> Arc<Ring> {
        assert!(n >= 1, "the quiver needs at least one vertex");
        if let Some(r) = RINGS.read().unwrap().get(&n) {
            return Arc::clone(r);
        }
        let ring = Arc::new(Ring::build(n));
        RINGS.write().unwrap().entry(n).or_insert(ring).clone()
    }

    fn build(n: usize) -> Ring {
        let nu = n as u8;
        let mut basis: Vec<Path> = Vec::with_capacity(4 * n - 2);
        for i in 1..=nu {
            basis.push(Path(vec![i]));
        }
        for i in 1..nu {
            basis.push(Path(vec![i, i + 1]));
            basis.push(Path(vec![i + 1, i]));
        }
        for i in 1..=nu {
            let j = if i >= 2 { i - 1 } else { 2 };
            basis.push(Path(vec![i, j, i]));
        }
        basis.sort_by_key(|p| (p.degree(), p.source(), p.target()));
        let index: HashMap<Path, usize> =
            basis.iter().enumerate().map(|(k, p)| (p.clone(), k)).collect();

        let rank = basis.len();
        let mut mult = vec![vec![None; rank]; rank];
        for (i, p) in basis.iter().enumerate() {
            for (j, q) in basis.iter().enumerate() {
                mult[i][j] = compose_paths(p, q).map(|r| index[&r]);
            }
        }

        let mut ring = Ring { n, basis, index, mult, center: Vec::new() };
        ring.center = ring.compute_center();
        ring
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Path] {
        &self.basis
    }

    pub fn idx(&self, p: &Path) -> usize {
        self.index[p]
    }

    pub fn degree(&self, idx: usize) -> i64 {
        self.basis[idx].degree()
    }

    /// Basis index of the lazy path `(i)`, vertices numbered from 1.
    pub fn idempotent(&self, i: usize) -> usize {
        self.index[&Path(vec![i as u8])]
    }

    /// Basis index of the arrow `(a|b)`, `|a - b| = 1`.
    pub fn arrow(&self, a: usize, b: usize) -> usize {
        self.index[&Path(vec![a as u8, b as u8])]
    }

    /// Basis index of the loop `X_i`.
    pub fn loop_x(&self, i: usize) -> usize {
        let j = if i >= 2 { i - 1 } else { 2 };
        self.index[&Path(vec![i as u8, j as u8, i as u8])]
    }

    pub fn mul_basis(&self, i: usize, j: usize) -> Option<usize> {
        self.mult[i][j]
    }

    pub fn zero(&self) -> Elt {
        Elt(vec![Int::zero(); self.rank()])
    }

    pub fn elt_basis(&self, idx: usize) -> Elt {
        let mut e = self.zero();
        e.0[idx] = Int::from(1);
        e
    }

    /// The unit, the sum of all lazy paths.
    pub fn one(&self) -> Elt {
        let mut e = self.zero();
        for i in 1..=self.n {
            e.0[self.idempotent(i)] = Int::from(1);
        }
        e
    }

    pub fn add(&self, x: &Elt, y: &Elt) -> Elt {
        Elt(x.0.iter().zip(&y.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, x: &Elt, y: &Elt) -> Elt {
        Elt(x.0.iter().zip(&y.0).map(|(a, b)| a - b).collect())
    }

    pub fn mul(&self, x: &Elt, y: &Elt) -> Elt {
        let mut out = self.zero();
        for (i, a) in x.0.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in y.0.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                if let Some(k) = self.mult[i][j] {
                    out.0[k] += a * b;
                }
            }
        }
        out
    }

    /// True when every nonzero coefficient of `x` sits in a single degree `d`.
    pub fn is_homogeneous(&self, x: &Elt, d: i64) -> bool {
        x.0.iter()
            .enumerate()
            .all(|(i, c)| c.is_zero() || self.degree(i) == d)
    }

    /// A basis of the center, as coefficient vectors over the ring basis.
    pub fn center_basis(&self) -> &[Vec<Int>] {
        &self.center
    }

    fn compute_center(&self) -> Vec<Vec<Int>> {
        let r = self.rank();
        // Stack the commutator conditions x*b_j - b_j*x = 0 over all j.
        let m = IMat::from_fn(r * r, r, |row, i| {
            let (j, k) = (row / r, row % r);
            let mut c = Int::zero();
            if self.mult[i][j] == Some(k) {
                c += 1;
            }
            if self.mult[j][i] == Some(k) {
                c -= 1;
            }
            c
        });
        let ker = nullspace(&m);
        (0..ker.rows()).map(|i| ker.row(i).to_vec()).collect()
    }

    /// Solve for `x` as a combination of the center basis; `None` when `x`
    /// is not central.
    pub fn central_coordinates(&self, x: &Elt) -> Option<Vec<Int>> {
        let b = IMat::from_fn(self.rank(), self.center.len(), |i, j| self.center[j][i].clone());
        solve(&b, &x.0)
    }
}

/// Concatenate two basis paths in the quotient algebra.  Returns the basis
/// path of the product, or `None` when the product is zero.
fn compose_paths(p: &Path, q: &Path) -> Option<Path> {
    if p.target() != q.source() {
        return None;
    }
    if p.degree() + q.degree() >= 3 {
        return None;
    }
    let mut v = p.0.clone();
    v.extend_from_slice(&q.0[1..]);
    match v.len() {
        1 | 2 => Some(Path(v)),
        3 => {
            if v[0] == v[2] {
                // Both round trips at a vertex are the same loop.
                let i = v[0];
                let j = if i >= 2 { i - 1 } else { 2 };
                Some(Path(vec![i, j, i]))
            } else {
                None
            }
        }
        _ => unreachable!("degree filter keeps paths short"),
    }
}
