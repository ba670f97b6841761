//! Degree-truncated complexes of polynomial bimodules.
//!
//! The base ring is A = ℤ[y_1, …, y_{n-1}] on the consecutive differences
//! y_i = x_i − x_{i+1} of n strand variables, graded with deg y_i = 1.  The
//! symmetric group permutes the x's; s_i fixes the subring A^i, and A is
//! free of rank 2 over A^i.  Each letter of a braid word contributes a
//! two-term complex built from the bimodule B_i = A ⊗_{A^i} A, and tensor
//! products of these categorify the braid group action on the rank-one
//! free ℤ[q, q⁻¹]-module spanned by [A], where a letter acts by −q.
//!
//! Everything here is verified degreewise: a complex is cut into its graded
//! pieces (finite free ℤ-modules) up to a truncation degree D, and the
//! braid relations are certified piece by piece through Smith normal form.
//! Over ℤ a bounded complex of finitely generated free modules splits into
//! shifted two-term pieces, so matching homology ranks and torsion in every
//! homological degree is equivalent to a degreewise homotopy equivalence.
//! All certificates are labelled by the truncation degree and never claim
//! more.

use std::collections::{BTreeMap, HashMap};

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::braid::{BraidError, BraidMovie};
use crate::intmat::{smith, IMat, Int};

/// Exponent vector, one entry per difference variable.
pub type Mono = Vec<u16>;

/// Sparse polynomial over ℤ in the difference variables.  No stored zeros.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct Poly {
    terms: BTreeMap<Mono, Int>,
}

impl Poly {
    pub fn zero() -> Poly {
        Poly { terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: i64) -> Poly {
        let mut p = Poly::zero();
        p.add_term(vec![0; nvars], Int::from(c));
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, m: Mono, c: Int) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
        }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Poly {
        Poly { terms: self.terms.iter().map(|(m, c)| (m.clone(), -c.clone())).collect() }
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        let mut out = Poly::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                let m: Mono = m1.iter().zip(m2).map(|(a, b)| a + b).collect();
                out.add_term(m, c1 * c2);
            }
        }
        out
    }

    pub fn scale(&self, c: &Int) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly { terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect() }
    }

    fn mono_degree(m: &Mono) -> i64 {
        m.iter().map(|&e| e as i64).sum()
    }

    pub fn is_homogeneous(&self, d: i64) -> bool {
        self.terms.keys().all(|m| Poly::mono_degree(m) == d)
    }

    pub fn max_degree(&self) -> i64 {
        self.terms.keys().map(Poly::mono_degree).max().unwrap_or(0)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Mono, &Int)> {
        self.terms.iter()
    }

    /// Gcd of all coefficients; zero for the zero polynomial.
    pub fn content(&self) -> Int {
        use num_integer::Integer;
        let mut g = Int::zero();
        for c in self.terms.values() {
            g = g.gcd(c);
        }
        g
    }

    pub fn div_exact(&self, c: &Int) -> Poly {
        let mut out = Poly::zero();
        for (m, v) in &self.terms {
            let (q, r) = num_integer::Integer::div_rem(v, c);
            assert!(r.is_zero(), "inexact scalar division");
            out.add_term(m.clone(), q);
        }
        out
    }
}

/// The difference-variable polynomial ring for a given strand count.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct PolyRing {
    strands: usize,
}

impl PolyRing {
    pub fn new(strands: usize) -> PolyRing {
        assert!(strands >= 2, "need at least two strands");
        PolyRing { strands }
    }

    pub fn strands(&self) -> usize {
        self.strands
    }

    pub fn nvars(&self) -> usize {
        self.strands - 1
    }

    pub fn one(&self) -> Poly {
        Poly::constant(self.nvars(), 1)
    }

    /// The variable y_j, 1-based.
    pub fn var(&self, j: usize) -> Poly {
        assert!(1 <= j && j <= self.nvars(), "variable index out of range");
        let mut m = vec![0u16; self.nvars()];
        m[j - 1] = 1;
        let mut p = Poly::zero();
        p.add_term(m, Int::one());
        p
    }

    /// s_i(y_j): the transposition of x_i and x_{i+1} on the differences.
    fn var_image(&self, i: usize, j: usize) -> Poly {
        if j == i {
            self.var(i).neg()
        } else if j + 1 == i || j == i + 1 {
            self.var(j).add(&self.var(i))
        } else {
            self.var(j)
        }
    }

    pub fn s_action(&self, i: usize, p: &Poly) -> Poly {
        let images: Vec<Poly> = (1..=self.nvars()).map(|j| self.var_image(i, j)).collect();
        let mut out = Poly::zero();
        for (m, c) in &p.terms {
            let mut prod = Poly::constant(self.nvars(), 1);
            for (j, &e) in m.iter().enumerate() {
                for _ in 0..e {
                    prod = prod.mul(&images[j]);
                }
            }
            out = out.add(&prod.scale(c));
        }
        out
    }

    /// Divided difference (f − s_i f) / y_i.  The numerator lies in the
    /// monomial ideal (y_i), so the division is an exponent decrement.
    pub fn demazure(&self, i: usize, p: &Poly) -> Poly {
        let num = p.sub(&self.s_action(i, p));
        let mut out = Poly::zero();
        for (m, c) in &num.terms {
            assert!(m[i - 1] >= 1, "divided difference not divisible");
            let mut m2 = m.clone();
            m2[i - 1] -= 1;
            out.add_term(m2, c.clone());
        }
        out
    }

    /// Index of the degree-one element g with unit divided difference used
    /// as the second basis vector of A over A^i.  The element y_i itself
    /// has divided difference 2, so a neighboring variable is used when one
    /// exists; with a single variable the parity of the exponent splits the
    /// ring instead.
    pub fn pivot(&self, i: usize) -> usize {
        if i >= 2 {
            i - 1
        } else if self.nvars() >= 2 {
            i + 1
        } else {
            i
        }
    }

    /// Writes f = f₀ + g·f₁ with f₀, f₁ fixed by s_i, for g the pivot
    /// variable of i.  This is the free rank-2 structure of A over A^i.
    pub fn decompose(&self, i: usize, f: &Poly) -> (Poly, Poly) {
        let g = self.pivot(i);
        let (f0, f1) = if g == i {
            // Single variable: s_1 negates y_1, so split by exponent parity.
            let mut even = Poly::zero();
            let mut odd = Poly::zero();
            for (m, c) in &f.terms {
                if m[i - 1] % 2 == 0 {
                    even.add_term(m.clone(), c.clone());
                } else {
                    let mut m2 = m.clone();
                    m2[i - 1] -= 1;
                    odd.add_term(m2, c.clone());
                }
            }
            (even, odd)
        } else {
            // The pivot has divided difference −1, so f₁ = −∂_i f.
            let f1 = self.demazure(i, f).neg();
            let f0 = f.sub(&self.var(g).mul(&f1));
            (f0, f1)
        };
        debug_assert_eq!(self.s_action(i, &f0), f0);
        debug_assert_eq!(self.s_action(i, &f1), f1);
        debug_assert_eq!(f0.add(&self.var(g).mul(&f1)), *f);
        (f0, f1)
    }

    /// Monomials of the given total degree, in lexicographic order.
    pub fn monomials(&self, d: i64) -> Vec<Mono> {
        if d < 0 {
            return Vec::new();
        }
        let v = self.nvars();
        let mut out = Vec::new();
        let mut cur = vec![0u16; v];
        fn rec(out: &mut Vec<Mono>, cur: &mut Mono, slot: usize, left: u16) {
            if slot + 1 == cur.len() {
                cur[slot] = left;
                out.push(cur.clone());
                return;
            }
            for e in 0..=left {
                cur[slot] = e;
                rec(out, cur, slot + 1, left - e);
            }
        }
        rec(&mut out, &mut cur, 0, d as u16);
        out
    }

    /// Rank of the degree-d piece of A.
    pub fn piece_rank(&self, d: i64) -> usize {
        if d < 0 {
            0
        } else {
            self.monomials(d).len()
        }
    }
}

/// One tensor word of elementary bimodules, with a grading shift.  As a
/// left A-module it is free on the 2^len choices of 1 or the pivot element
/// in each slot; bit s of a basis mask records the pivot in slot s.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RSummand {
    pub word: Vec<usize>,
    pub shift: i64,
}

impl RSummand {
    pub fn rank(&self) -> usize {
        1 << self.word.len()
    }

    pub fn basis_degree(&self, mask: usize) -> i64 {
        mask.count_ones() as i64 + self.shift
    }
}

/// b_mask · f, expanded as a left combination of basis elements.  The
/// rightmost slot absorbs f through the rank-2 decomposition; the invariant
/// part commutes across the slot and the rest recurses into the prefix.
fn act_basis(ring: &PolyRing, word: &[usize], mask: usize, f: &Poly) -> BTreeMap<usize, Poly> {
    let mut out = BTreeMap::new();
    if f.is_zero() {
        return out;
    }
    if word.is_empty() || f.max_degree() == 0 {
        out.insert(mask, f.clone());
        return out;
    }
    let k = word.len() - 1;
    let i = word[k];
    let bit = 1usize << k;
    let pieces: Vec<(Poly, bool)> = if mask & bit == 0 {
        let (f0, f1) = ring.decompose(i, f);
        vec![(f0, false), (f1, true)]
    } else {
        let gf = ring.var(ring.pivot(i)).mul(f);
        let (d0, d1) = ring.decompose(i, &gf);
        vec![(d0, false), (d1, true)]
    };
    for (h, has_pivot) in pieces {
        if h.is_zero() {
            continue;
        }
        for (m, p) in act_basis(ring, &word[..k], mask & (bit - 1), &h) {
            let m2 = m | if has_pivot { bit } else { 0 };
            let entry = out.entry(m2).or_insert_with(Poly::zero);
            *entry = entry.add(&p);
        }
    }
    out.retain(|_, p| !p.is_zero());
    out
}

/// Finite direct sum of tensor words.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct RModule {
    pub summands: Vec<RSummand>,
}

impl RModule {
    pub fn unit() -> RModule {
        RModule { summands: vec![RSummand { word: Vec::new(), shift: 0 }] }
    }

    pub fn rank(&self) -> usize {
        self.summands.iter().map(RSummand::rank).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.summands.is_empty()
    }

    /// Flat basis: summands in order, masks in increasing order inside.
    pub fn basis(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (s, summand) in self.summands.iter().enumerate() {
            for mask in 0..summand.rank() {
                out.push((s, mask));
            }
        }
        out
    }

    pub fn basis_degree(&self, flat: usize) -> i64 {
        let (s, mask) = self.split(flat);
        self.summands[s].basis_degree(mask)
    }

    pub fn split(&self, flat: usize) -> (usize, usize) {
        let mut rest = flat;
        for (s, summand) in self.summands.iter().enumerate() {
            if rest < summand.rank() {
                return (s, rest);
            }
            rest -= summand.rank();
        }
        panic!("flat index out of range");
    }

    pub fn offset(&self, s: usize) -> usize {
        self.summands[..s].iter().map(RSummand::rank).sum()
    }
}

/// Left-A-linear map between direct sums of tensor words, as a matrix of
/// polynomials over the flat bases.  Degree-homogeneous: the entry from a
/// basis element of degree a to one of degree b is homogeneous of degree
/// a − b.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RMap {
    pub src: RModule,
    pub tgt: RModule,
    entries: Vec<Vec<Poly>>,
}

impl RMap {
    pub fn zero(src: RModule, tgt: RModule) -> RMap {
        let rows = tgt.rank();
        let cols = src.rank();
        RMap { src, tgt, entries: vec![vec![Poly::zero(); cols]; rows] }
    }

    pub fn at(&self, r: usize, c: usize) -> &Poly {
        &self.entries[r][c]
    }

    pub fn set(&mut self, r: usize, c: usize, p: Poly) {
        self.entries[r][c] = p;
    }

    pub fn add_at(&mut self, r: usize, c: usize, p: &Poly) {
        self.entries[r][c] = self.entries[r][c].add(p);
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|row| row.iter().all(Poly::is_zero))
    }

    pub fn compose(&self, other: &RMap) -> RMap {
        assert_eq!(other.tgt, self.src, "composition mismatch");
        let mut out = RMap::zero(other.src.clone(), self.tgt.clone());
        for r in 0..self.tgt.rank() {
            for k in 0..self.src.rank() {
                if self.entries[r][k].is_zero() {
                    continue;
                }
                for c in 0..other.src.rank() {
                    let p = self.entries[r][k].mul(&other.entries[k][c]);
                    out.add_at(r, c, &p);
                }
            }
        }
        out
    }

    pub fn validate_homogeneous(&self) -> Result<(), String> {
        for (r, row) in self.entries.iter().enumerate() {
            for (c, p) in row.iter().enumerate() {
                if p.is_zero() {
                    continue;
                }
                let d = self.src.basis_degree(c) - self.tgt.basis_degree(r);
                if d < 0 || !p.is_homogeneous(d) {
                    return Err(format!("entry ({r}, {c}) not homogeneous of degree {d}"));
                }
            }
        }
        Ok(())
    }
}

/// Cohomologically indexed complex of tensor-word modules; `diff[t]` maps
/// `terms[t]` to `terms[t + 1]`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RComplex {
    pub strands: usize,
    pub terms: BTreeMap<i64, RModule>,
    pub diff: BTreeMap<i64, RMap>,
}

impl RComplex {
    pub fn unit(strands: usize) -> RComplex {
        let mut terms = BTreeMap::new();
        terms.insert(0, RModule::unit());
        RComplex { strands, terms, diff: BTreeMap::new() }
    }

    pub fn term(&self, t: i64) -> RModule {
        self.terms.get(&t).cloned().unwrap_or_default()
    }

    pub fn d(&self, t: i64) -> RMap {
        self.diff
            .get(&t)
            .cloned()
            .unwrap_or_else(|| RMap::zero(self.term(t), self.term(t + 1)))
    }

    pub fn validate(&self) -> Result<(), String> {
        for (&t, d) in &self.diff {
            if d.src != self.term(t) || d.tgt != self.term(t + 1) {
                return Err(format!("differential at {t} has mismatched ends"));
            }
            d.validate_homogeneous().map_err(|e| format!("degree {t}: {e}"))?;
            if !self.d(t + 1).compose(d).is_zero() {
                return Err(format!("d² ≠ 0 at degree {t}"));
            }
        }
        Ok(())
    }

    pub fn min_basis_degree(&self) -> i64 {
        self.terms
            .values()
            .flat_map(|m| m.summands.iter().map(|s| s.shift))
            .min()
            .unwrap_or(0)
    }
}

/// Coordinates of the integral coproduct in the basis {1⊗1, 1⊗g}: the
/// symmetric element y_i⊗1 + 1⊗y_i divided by its content.  The division
/// makes the element a generator of the rank-one lattice of degree-one
/// central elements of the bimodule; without it the lattice index is 2
/// whenever there are at least two variables, the cokernel of the
/// coproduct picks up 2-torsion, and the letter complexes stop being
/// mutually inverse over ℤ.  With a single variable the symmetric element
/// is already primitive and nothing changes.  With a neighbor present the
/// normalized element is x_i⊗1 − 1⊗x_{i+1} rewritten in the difference
/// variables.
pub fn coproduct(ring: &PolyRing, i: usize) -> (Poly, Poly) {
    let (f0, f1) = ring.decompose(i, &ring.var(i));
    let c0 = ring.var(i).add(&f0);
    use num_integer::Integer;
    let content = c0.content().gcd(&f1.content());
    (c0.div_exact(&content), f1.div_exact(&content))
}

/// The two-term complex of one braid letter: a positive letter runs from
/// the bimodule to the ring by multiplication, an inverse letter from the
/// ring to the shifted bimodule by the integral coproduct.
pub fn letter_rcomplex(strands: usize, letter: i32) -> RComplex {
    let ring = PolyRing::new(strands);
    let i = letter.unsigned_abs() as usize;
    assert!(letter != 0 && i <= ring.nvars(), "letter out of range");
    let g = ring.pivot(i);
    let mut terms = BTreeMap::new();
    let mut diff = BTreeMap::new();
    if letter > 0 {
        let b = RModule { summands: vec![RSummand { word: vec![i], shift: 0 }] };
        terms.insert(-1, b.clone());
        terms.insert(0, RModule::unit());
        let mut m = RMap::zero(b, RModule::unit());
        m.set(0, 0, ring.one());
        m.set(0, 1, ring.var(g));
        diff.insert(-1, m);
    } else {
        let b = RModule { summands: vec![RSummand { word: vec![i], shift: -1 }] };
        terms.insert(0, RModule::unit());
        terms.insert(1, b.clone());
        let (c0, c1) = coproduct(&ring, i);
        let mut eta = RMap::zero(RModule::unit(), b);
        eta.set(0, 0, c0);
        eta.set(1, 0, c1);
        diff.insert(0, eta);
    }
    let c = RComplex { strands, terms, diff };
    debug_assert!(c.validate().is_ok());
    c
}

/// Tensor product over A.  Signs follow the left-total-degree rule: the
/// second factor's differential picks up (−1)^{t₁}.  Coefficients produced
/// in the right factor cross the left factor through the right action.
pub fn tensor_rcomplex(a: &RComplex, b: &RComplex) -> RComplex {
    assert_eq!(a.strands, b.strands, "strand mismatch");
    let ring = PolyRing::new(a.strands);

    // Group layout: for every (ta, tb), the run of summands it occupies.
    let mut terms: BTreeMap<i64, RModule> = BTreeMap::new();
    let mut offsets: BTreeMap<(i64, i64), usize> = BTreeMap::new();
    for (&ta, ma) in &a.terms {
        for (&tb, mb) in &b.terms {
            let t = ta + tb;
            let module = terms.entry(t).or_default();
            offsets.insert((ta, tb), module.rank());
            for sa in &ma.summands {
                for sb in &mb.summands {
                    let mut word = sa.word.clone();
                    word.extend_from_slice(&sb.word);
                    module.summands.push(RSummand { word, shift: sa.shift + sb.shift });
                }
            }
        }
    }

    // Flat index inside a (ta, tb) block.  Combined summands run a-major,
    // the concatenated word puts the a-slots in the low mask bits.
    let flat_in_block = |ma: &RModule, mb: &RModule, fa: usize, fb: usize| -> usize {
        let (sa, mask_a) = ma.split(fa);
        let (sb, mask_b) = mb.split(fb);
        let mut off = 0;
        for s in 0..sa {
            off += ma.summands[s].rank() * mb.rank();
        }
        let rank_a = ma.summands[sa].rank();
        for s in 0..sb {
            off += rank_a * mb.summands[s].rank();
        }
        let la = ma.summands[sa].word.len();
        off + (mask_b << la | mask_a)
    };

    let mut diff: BTreeMap<i64, RMap> = BTreeMap::new();
    for (&(ta, tb), &off) in &offsets {
        let t = ta + tb;
        let ma = a.term(ta);
        let mb = b.term(tb);

        // d_a ⊗ id: coefficients multiply on the far left, no crossing.
        if let Some(da) = a.diff.get(&ta) {
            if let Some(&off2) = offsets.get(&(ta + 1, tb)) {
                let d = diff
                    .entry(t)
                    .or_insert_with(|| RMap::zero(terms[&t].clone(), terms[&(t + 1)].clone()));
                for fa in 0..ma.rank() {
                    for ra in 0..da.tgt.rank() {
                        let p = da.at(ra, fa);
                        if p.is_zero() {
                            continue;
                        }
                        for fb in 0..mb.rank() {
                            let col = off + flat_in_block(&ma, &mb, fa, fb);
                            let row = off2 + flat_in_block(&da.tgt, &mb, ra, fb);
                            d.add_at(row, col, p);
                        }
                    }
                }
            }
        }

        // id ⊗ d_b, with the Koszul sign and the crossing action.
        if let Some(db) = b.diff.get(&tb) {
            if let Some(&off2) = offsets.get(&(ta, tb + 1)) {
                let d = diff
                    .entry(t)
                    .or_insert_with(|| RMap::zero(terms[&t].clone(), terms[&(t + 1)].clone()));
                let negate = ta.rem_euclid(2) == 1;
                for fb in 0..mb.rank() {
                    for rb in 0..db.tgt.rank() {
                        let q = db.at(rb, fb);
                        if q.is_zero() {
                            continue;
                        }
                        let q = if negate { q.neg() } else { q.clone() };
                        for fa in 0..ma.rank() {
                            let (sa, mask_a) = ma.split(fa);
                            let word_a = &ma.summands[sa].word;
                            let col = off + flat_in_block(&ma, &mb, fa, fb);
                            for (mask2, p) in act_basis(&ring, word_a, mask_a, &q) {
                                let fa2 = ma.offset(sa) + mask2;
                                let row = off2 + flat_in_block(&ma, &db.tgt, fa2, rb);
                                d.add_at(row, col, &p);
                            }
                        }
                    }
                }
            }
        }
    }

    let diff = diff.into_iter().filter(|(_, d)| !d.is_zero()).collect();
    let terms = terms.into_iter().filter(|(_, m)| !m.is_zero()).collect();
    let c = RComplex { strands: a.strands, terms, diff };
    debug_assert!(c.validate().is_ok());
    c
}

/// Complex of a whole braid word, one letter at a time.
pub fn word_rcomplex(strands: usize, letters: &[i32]) -> RComplex {
    let mut c = RComplex::unit(strands);
    for &l in letters {
        c = tensor_rcomplex(&c, &letter_rcomplex(strands, l));
    }
    c
}

/// One internal degree of a complex, as integer matrices over the bases
/// (flat element, monomial).
pub struct GradedPiece {
    pub dims: BTreeMap<i64, usize>,
    pub mats: BTreeMap<i64, IMat>,
}

pub fn graded_piece(c: &RComplex, d: i64) -> GradedPiece {
    let ring = PolyRing::new(c.strands);
    let mut bases: BTreeMap<i64, Vec<(usize, Mono)>> = BTreeMap::new();
    let mut index: BTreeMap<i64, HashMap<(usize, Mono), usize>> = BTreeMap::new();
    for (&t, module) in &c.terms {
        let mut basis = Vec::new();
        let mut idx = HashMap::new();
        for flat in 0..module.rank() {
            let e = d - module.basis_degree(flat);
            for m in ring.monomials(e) {
                idx.insert((flat, m.clone()), basis.len());
                basis.push((flat, m));
            }
        }
        if !basis.is_empty() {
            bases.insert(t, basis);
            index.insert(t, idx);
        }
    }
    let dims: BTreeMap<i64, usize> = bases.iter().map(|(&t, b)| (t, b.len())).collect();
    let mut mats = BTreeMap::new();
    for (&t, dmap) in &c.diff {
        let (Some(src), Some(ridx)) = (bases.get(&t), index.get(&(t + 1))) else { continue };
        let rows = dims.get(&(t + 1)).copied().unwrap_or(0);
        let mut mat = IMat::zeros(rows, src.len());
        for (col, (flat, mono)) in src.iter().enumerate() {
            for r in 0..dmap.tgt.rank() {
                let p = dmap.at(r, *flat);
                if p.is_zero() {
                    continue;
                }
                for (m, coeff) in p.terms() {
                    let full: Mono = m.iter().zip(mono).map(|(a, b)| a + b).collect();
                    let row = ridx[&(r, full)];
                    mat.add_at(row, col, coeff);
                }
            }
        }
        if !mat.is_zero() {
            mats.insert(t, mat);
        }
    }
    GradedPiece { dims, mats }
}

/// Integer homology of one graded piece: free rank and torsion divisors per
/// homological degree, read from ranks and Smith normal forms of the
/// differentials.
pub fn piece_homology(piece: &GradedPiece) -> BTreeMap<i64, (usize, Vec<Int>)> {
    let mut ranks: BTreeMap<i64, usize> = BTreeMap::new();
    let mut torsion: BTreeMap<i64, Vec<Int>> = BTreeMap::new();
    for (&t, m) in &piece.mats {
        let s = smith(m);
        ranks.insert(t, s.rank());
        let mut div = Vec::new();
        for k in 0..m.rows().min(m.cols()) {
            let f = s.d.at(k, k).abs();
            if f > Int::one() {
                div.push(f);
            }
        }
        if !div.is_empty() {
            torsion.insert(t + 1, div);
        }
    }
    let mut out = BTreeMap::new();
    let degrees: Vec<i64> =
        piece.dims.keys().copied().chain(torsion.keys().copied()).collect();
    for t in degrees {
        let dim = piece.dims.get(&t).copied().unwrap_or(0);
        let below = ranks.get(&(t - 1)).copied().unwrap_or(0);
        let here = ranks.get(&t).copied().unwrap_or(0);
        let free = dim - here - below;
        let tor = torsion.get(&t).cloned().unwrap_or_default();
        if free > 0 || !tor.is_empty() {
            out.insert(t, (free, tor));
        }
    }
    out
}

/// Degreewise comparison through the truncation degree.  Equal homology in
/// every graded piece certifies a degreewise homotopy equivalence, because
/// complexes of free ℤ-modules split into their homology's resolutions.
pub fn match_through_degree(c1: &RComplex, c2: &RComplex, dmax: i64) -> bool {
    let dmin = c1.min_basis_degree().min(c2.min_basis_degree());
    (dmin..=dmax).all(|d| {
        piece_homology(&graded_piece(c1, d)) == piece_homology(&graded_piece(c2, d))
    })
}

/// Alternating sum of graded-piece dimensions in one internal degree.
pub fn euler_characteristic(c: &RComplex, d: i64) -> Int {
    let piece = graded_piece(c, d);
    let mut chi = Int::zero();
    for (&t, &dim) in &piece.dims {
        let term = Int::from(dim as i64);
        if t.rem_euclid(2) == 1 {
            chi -= term;
        } else {
            chi += term;
        }
    }
    chi
}

#[derive(Clone, Debug, Serialize)]
pub struct RelationCheck {
    pub name: String,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct RouquierReport {
    pub strands: usize,
    pub max_degree: i64,
    pub checks: Vec<RelationCheck>,
    pub all_pass: bool,
}

/// Certifies, degreewise through `dmax`: every letter composed with its
/// inverse is equivalent to the unit, the braid and distant-commutation
/// relations where they fit, and the −q action on the class of the unit.
pub fn verify_rouquier_relations(strands: usize, dmax: i64) -> RouquierReport {
    let ring = PolyRing::new(strands);
    let unit = RComplex::unit(strands);
    let mut checks = Vec::new();
    for i in 1..=ring.nvars() as i32 {
        let pair = word_rcomplex(strands, &[i, -i]);
        checks.push(RelationCheck {
            name: format!("letter {i} times its inverse matches the unit"),
            pass: match_through_degree(&pair, &unit, dmax),
        });
        let pair = word_rcomplex(strands, &[-i, i]);
        checks.push(RelationCheck {
            name: format!("inverse letter {i} times the letter matches the unit"),
            pass: match_through_degree(&pair, &unit, dmax),
        });
    }
    for i in 1..ring.nvars() as i32 {
        let lhs = word_rcomplex(strands, &[i, i + 1, i]);
        let rhs = word_rcomplex(strands, &[i + 1, i, i + 1]);
        checks.push(RelationCheck {
            name: format!("braid relation at letters {i}, {}", i + 1),
            pass: match_through_degree(&lhs, &rhs, dmax),
        });
    }
    for i in 1..=ring.nvars() as i32 {
        for j in (i + 2)..=ring.nvars() as i32 {
            let lhs = word_rcomplex(strands, &[i, j]);
            let rhs = word_rcomplex(strands, &[j, i]);
            checks.push(RelationCheck {
                name: format!("distant letters {i}, {j} commute"),
                pass: match_through_degree(&lhs, &rhs, dmax),
            });
        }
    }
    for i in 1..=ring.nvars() as i32 {
        let pos = letter_rcomplex(strands, i);
        let neg = letter_rcomplex(strands, -i);
        let pass = (0..=dmax).all(|d| {
            euler_characteristic(&pos, d) == -Int::from(ring.piece_rank(d - 1) as i64)
        }) && (-1..=dmax).all(|d| {
            euler_characteristic(&neg, d) == -Int::from(ring.piece_rank(d + 1) as i64)
        });
        checks.push(RelationCheck {
            name: format!("letter {i} acts by -q on the class of the unit"),
            pass,
        });
    }
    let all_pass = checks.iter().all(|c| c.pass);
    RouquierReport { strands, max_degree: dmax, checks, all_pass }
}

/// Invariant of a movie in this categorification.  Every cobordism with a
/// negative branch point is sent to zero: a negative birth would be a
/// degree-0 chain map from the unit into an inverse-letter complex, which
/// vanishes because the coproduct differential is injective, and a death
/// of a positive letter composes to zero against the multiplication
/// differential the same way.  Movies without negative branch points
/// compose births (identity on the unit component, as in the defining
/// squares), deaths of inverse letters (identity on the unit component),
/// and local equivalences normalized to +1 on the unit component, so the
/// unit coefficient of the composite is +1 and the invariant is nonzero.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub enum Semitrivial {
    Zero,
    Unit { coefficient: i8 },
}

pub fn semitrivial_invariant(movie: &BraidMovie) -> Result<Semitrivial, BraidError> {
    movie.validate()?;
    let (_, minus) = movie.polarity()?;
    if minus > 0 {
        Ok(Semitrivial::Zero)
    } else {
        Ok(Semitrivial::Unit { coefficient: 1 })
    }
}
