//! Cochain complexes of bimodule sums, chain maps, homotopies, and the
//! tensor product of complexes over the algebra.
//!
//! Differentials raise homological degree by one and preserve absolute
//! internal degree.  Chain maps preserve both gradings; a statement about a
//! map of internal degree `d` is always phrased through a `{-d}` shift of its
//! target, so the machinery below never tracks a second degree.

use crate::bimod::{Module, Morphism, Summand};
use crate::intmat::Int;
use crate::tensorflat::{empty, single, induced_map, Layout};
use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ChainComplex {
    pub n: usize,
    pub terms: BTreeMap<i64, Module>,
    /// `diff[t]` maps `terms[t]` to `terms[t + 1]`.
    pub diff: BTreeMap<i64, Morphism>,
}

impl ChainComplex {
    pub fn one_term(n: usize, m: Module, t: i64) -> ChainComplex {
        let mut terms = BTreeMap::new();
        if !m.is_zero() {
            terms.insert(t, m);
        }
        ChainComplex { n, terms, diff: BTreeMap::new() }
    }

    pub fn two_term(n: usize, m0: Module, t0: i64, m1: Module, d: Morphism) -> ChainComplex {
        assert_eq!(d.src, m0);
        assert_eq!(d.tgt, m1);
        let mut terms = BTreeMap::new();
        terms.insert(t0, m0);
        terms.insert(t0 + 1, m1);
        let mut diff = BTreeMap::new();
        diff.insert(t0, d);
        ChainComplex { n, terms, diff }
    }

    pub fn term(&self, t: i64) -> Module {
        self.terms.get(&t).cloned().unwrap_or_else(|| Module::zero(self.n))
    }

    pub fn d(&self, t: i64) -> Morphism {
        self.diff
            .get(&t)
            .cloned()
            .unwrap_or_else(|| Morphism::zero(self.term(t), self.term(t + 1)))
    }

    /// Homological degrees with a nonzero term, ascending.
    pub fn degrees(&self) -> Vec<i64> {
        self.terms.iter().filter(|(_, m)| !m.is_zero()).map(|(&t, _)| t).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.degrees().is_empty()
    }

    /// Shift every internal grading by `{c}`.
    pub fn shifted_q(&self, c: i64) -> ChainComplex {
        ChainComplex {
            n: self.n,
            terms: self.terms.iter().map(|(&t, m)| (t, m.shifted(c))).collect(),
            diff: self.diff.iter().map(|(&t, d)| (t, d.shifted(c))).collect(),
        }
    }

    /// Sorted summand multisets per homological degree, the graded
    /// isomorphism type of the underlying module.
    pub fn graded_type(&self) -> BTreeMap<i64, Vec<Summand>> {
        self.terms
            .iter()
            .filter(|(_, m)| !m.is_zero())
            .map(|(&t, m)| (t, m.summand_multiset()))
            .collect()
    }

    pub fn prune(&mut self) {
        self.diff.retain(|_, d| !d.src.is_zero() && !d.tgt.is_zero());
        self.terms.retain(|_, m| !m.is_zero());
    }

    pub fn validate(&self) -> Result<(), String> {
        for (&t, d) in &self.diff {
            if d.src != self.term(t) || d.tgt != self.term(t + 1) {
                return Err(format!("differential endpoints wrong at degree {}", t));
            }
            d.validate().map_err(|e| format!("d_{}: {}", t, e))?;
            let next = self.d(t + 1);
            if !next.compose(d).is_zero() {
                return Err(format!("d^2 != 0 at degree {}", t));
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug)]
pub struct ChainMap {
    pub src: Arc<ChainComplex>,
    pub tgt: Arc<ChainComplex>,
    pub maps: BTreeMap<i64, Morphism>,
}

impl ChainMap {
    pub fn zero(src: Arc<ChainComplex>, tgt: Arc<ChainComplex>) -> ChainMap {
        ChainMap { src, tgt, maps: BTreeMap::new() }
    }

    pub fn identity(c: &Arc<ChainComplex>) -> ChainMap {
        let maps = c
            .terms
            .iter()
            .filter(|(_, m)| !m.is_zero())
            .map(|(&t, m)| (t, Morphism::identity(m)))
            .collect();
        ChainMap { src: Arc::clone(c), tgt: Arc::clone(c), maps }
    }

    pub fn map(&self, t: i64) -> Morphism {
        self.maps
            .get(&t)
            .cloned()
            .unwrap_or_else(|| Morphism::zero(self.src.term(t), self.tgt.term(t)))
    }

    pub fn set_map(&mut self, t: i64, f: Morphism) {
        assert_eq!(f.src, self.src.term(t));
        assert_eq!(f.tgt, self.tgt.term(t));
        if f.is_zero() {
            self.maps.remove(&t);
        } else {
            self.maps.insert(t, f);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.maps.values().all(|f| f.is_zero())
    }

    /// `self` after `other`.
    pub fn compose(&self, other: &ChainMap) -> ChainMap {
        debug_assert_eq!(other.tgt, self.src);
        let mut out = ChainMap::zero(Arc::clone(&other.src), Arc::clone(&self.tgt));
        for (&t, g) in &other.maps {
            if let Some(f) = self.maps.get(&t) {
                out.set_map(t, f.compose(g));
            }
        }
        out
    }

    pub fn add(&self, other: &ChainMap) -> ChainMap {
        debug_assert_eq!(self.src, other.src);
        debug_assert_eq!(self.tgt, other.tgt);
        let mut out = self.clone();
        for (&t, g) in &other.maps {
            let cur = out.map(t).add(g);
            out.set_map(t, cur);
        }
        out
    }

    pub fn sub(&self, other: &ChainMap) -> ChainMap {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> ChainMap {
        let maps = self.maps.iter().map(|(&t, f)| (t, f.neg())).collect();
        ChainMap { src: Arc::clone(&self.src), tgt: Arc::clone(&self.tgt), maps }
    }

    pub fn scale(&self, c: &Int) -> ChainMap {
        let mut out = ChainMap::zero(Arc::clone(&self.src), Arc::clone(&self.tgt));
        for (&t, f) in &self.maps {
            out.set_map(t, f.scale(c));
        }
        out
    }

    pub fn validate(&self) -> Result<(), String> {
        let degrees: Vec<i64> = self.src.terms.keys().chain(self.tgt.terms.keys()).copied().collect();
        for (&t, f) in &self.maps {
            if f.src != self.src.term(t) || f.tgt != self.tgt.term(t) {
                return Err(format!("map endpoints wrong at degree {}", t));
            }
            f.validate().map_err(|e| format!("f_{}: {}", t, e))?;
        }
        for &t in &degrees {
            let square_top = self.tgt.d(t).compose(&self.map(t));
            let square_bot = self.map(t + 1).compose(&self.src.d(t));
            if square_top != square_bot {
                return Err(format!("does not commute with d at degree {}", t));
            }
        }
        Ok(())
    }
}

/// `maps[t]` goes from the source's degree-`t` term to the target's
/// degree-`t - 1` term.
#[derive(Clone, Debug)]
pub struct Homotopy {
    pub maps: BTreeMap<i64, Morphism>,
}

impl Homotopy {
    pub fn zero() -> Homotopy {
        Homotopy { maps: BTreeMap::new() }
    }

    pub fn map(&self, src: &ChainComplex, tgt: &ChainComplex, t: i64) -> Morphism {
        self.maps
            .get(&t)
            .cloned()
            .unwrap_or_else(|| Morphism::zero(src.term(t), tgt.term(t - 1)))
    }

    pub fn set_map(&mut self, t: i64, f: Morphism) {
        if f.is_zero() {
            self.maps.remove(&t);
        } else {
            self.maps.insert(t, f);
        }
    }
}

/// Does `d h + h d = f` hold?  Verifies a homotopy witness by substitution.
pub fn homotopy_witnesses(f: &ChainMap, h: &Homotopy) -> bool {
    let degrees: Vec<i64> = f.src.terms.keys().chain(f.tgt.terms.keys()).copied().collect();
    for &t in &degrees {
        let dh = f.tgt.d(t - 1).compose(&h.map(&f.src, &f.tgt, t));
        let hd = h.map(&f.src, &f.tgt, t + 1).compose(&f.src.d(t));
        if dh.add(&hd) != f.map(t) {
            return false;
        }
    }
    true
}

/// One summand group of a tensor complex: the factors' homological
/// multidegree, the layout of the corresponding flat summands, and where
/// those summands start inside the total degree's module.
pub struct TensorGroup {
    pub multi: Vec<i64>,
    pub layout: Layout,
    pub offset: usize,
}

pub struct TensorComplex {
    pub factors: Vec<Arc<ChainComplex>>,
    pub complex: Arc<ChainComplex>,
    pub groups: BTreeMap<i64, Vec<TensorGroup>>,
}

impl TensorComplex {
    pub fn group_index(&self, t: i64, multi: &[i64]) -> Option<usize> {
        self.groups.get(&t)?.iter().position(|g| g.multi == multi)
    }
}

/// Tensor product over the algebra of a list of complexes, with the usual
/// sign `(-1)^(t_1 + .. + t_(k-1))` on the `k`-th slot of the differential.
pub fn tensor_many(n: usize, factors: Vec<Arc<ChainComplex>>) -> TensorComplex {
    // Multidegrees in lexicographic order, grouped by total degree.
    let mut groups: BTreeMap<i64, Vec<TensorGroup>> = BTreeMap::new();
    let degree_lists: Vec<Vec<i64>> = factors.iter().map(|c| c.degrees()).collect();
    let mut stack: Vec<Vec<i64>> = vec![Vec::new()];
    for list in &degree_lists {
        let mut next = Vec::new();
        for prefix in &stack {
            for &t in list {
                let mut p = prefix.clone();
                p.push(t);
                next.push(p);
            }
        }
        stack = next;
    }
    for multi in stack {
        let total: i64 = multi.iter().sum();
        let layout = Layout::new(
            n,
            multi.iter().zip(&factors).map(|(&t, c)| c.term(t)).collect(),
        );
        groups.entry(total).or_default().push(TensorGroup { multi, layout, offset: 0 });
    }

    let mut terms: BTreeMap<i64, Module> = BTreeMap::new();
    for (&t, gs) in groups.iter_mut() {
        let mut summands = Vec::new();
        for g in gs.iter_mut() {
            g.offset = summands.len();
            summands.extend_from_slice(&g.layout.module.summands);
        }
        terms.insert(t, Module { n, summands });
    }

    // Index of each multidegree within its total degree.
    let mut where_is: HashMap<Vec<i64>, (i64, usize)> = HashMap::new();
    for (&t, gs) in &groups {
        for (gi, g) in gs.iter().enumerate() {
            where_is.insert(g.multi.clone(), (t, gi));
        }
    }

    let mut diff: BTreeMap<i64, Morphism> = BTreeMap::new();
    for (&t, gs) in &groups {
        let src_mod = terms[&t].clone();
        let tgt_mod = terms.get(&(t + 1)).cloned().unwrap_or_else(|| Module::zero(n));
        let mut d = Morphism::zero(src_mod, tgt_mod.clone());
        for g in gs {
            for k in 0..factors.len() {
                let tk = g.multi[k];
                let Some(phi) = factors[k].diff.get(&tk) else { continue };
                let mut multi2 = g.multi.clone();
                multi2[k] += 1;
                let Some(&(t2, gi2)) = where_is.get(&multi2) else { continue };
                debug_assert_eq!(t2, t + 1);
                let tg = &groups[&t2][gi2];
                let src_win = single(n, &factors[k].term(tk));
                let tgt_win = single(n, &factors[k].term(tk + 1));
                let local =
                    induced_map(&g.layout, &tg.layout, k..k + 1, &src_win, &tgt_win, phi);
                let sign: i64 = g.multi[..k].iter().sum();
                d.add_embedded(&local, tg.offset, g.offset, sign.rem_euclid(2) == 1);
            }
        }
        if !d.is_zero() {
            diff.insert(t, d);
        }
    }

    let mut complex = ChainComplex { n, terms, diff };
    if factors.is_empty() {
        complex = ChainComplex::one_term(n, Module::diag(n), 0);
        let mut groups = BTreeMap::new();
        groups.insert(0, vec![TensorGroup { multi: Vec::new(), layout: empty(n), offset: 0 }]);
        return TensorComplex { factors, complex: Arc::new(complex), groups };
    }
    complex.prune();
    TensorComplex { factors, complex: Arc::new(complex), groups }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bimod::{hom_basis, lattice, Kind};
    use num_traits::Zero;

    /// The two-term complex with the multiplication map T(i,i) -> Diag,
    /// normalized so the lazy pair maps to the lazy path with coefficient +1.
    fn mini_r(n: usize, i: usize) -> Arc<ChainComplex> {
        let kind = Kind::Tensor(i as u8, i as u8);
        let basis = hom_basis(n, kind, Kind::Diag, 0);
        assert_eq!(basis.len(), 1);
        let ring = crate::zigzag::Ring::new(n);
        let lat = lattice(n, kind);
        let e = ring.idempotent(i);
        let lazy_pair = lat.pair_to_index(e, e).unwrap();
        let mut beta = basis[0].clone();
        if beta.at(e, lazy_pair).is_zero() {
            panic!("multiplication map must hit the lazy path");
        }
        if beta.at(e, lazy_pair) < &crate::intmat::int(0) {
            beta = beta.neg();
        }
        let src = Module { n, summands: vec![Summand { kind, shift: 0 }] };
        let tgt = Module::diag(n);
        let mut d = Morphism::zero(src.clone(), tgt.clone());
        d.set_block(0, 0, beta);
        Arc::new(ChainComplex::two_term(n, src, -1, tgt, d))
    }

    #[test]
    fn two_term_complex_validates() {
        let c = mini_r(2, 1);
        c.validate().unwrap();
        assert_eq!(c.degrees(), vec![-1, 0]);
    }

    #[test]
    fn tensor_of_two_complexes_squares_to_zero() {
        // The cross terms of d^2 only cancel through the Koszul sign, so this
        // exercises the sign convention.
        for (n, i, j) in [(2, 1, 1), (2, 1, 2), (3, 1, 2), (3, 1, 3)] {
            let t = tensor_many(n, vec![mini_r(n, i), mini_r(n, j)]);
            t.complex.validate().unwrap();
        }
    }

    #[test]
    fn tensor_of_three_complexes_squares_to_zero() {
        let t = tensor_many(2, vec![mini_r(2, 1), mini_r(2, 2), mini_r(2, 1)]);
        t.complex.validate().unwrap();
        assert_eq!(t.complex.degrees(), vec![-3, -2, -1, 0]);
    }

    #[test]
    fn empty_tensor_is_the_unit_complex() {
        let t = tensor_many(2, Vec::new());
        assert_eq!(*t.complex, ChainComplex::one_term(2, Module::diag(2), 0));
    }

    #[test]
    fn single_factor_tensor_is_the_factor() {
        let c = mini_r(2, 1);
        let t = tensor_many(2, vec![Arc::clone(&c)]);
        assert_eq!(*t.complex, *c);
    }

    #[test]
    fn identity_chain_map_validates() {
        let c = mini_r(3, 2);
        let id = ChainMap::identity(&c);
        id.validate().unwrap();
        assert!(homotopy_witnesses(
            &id.sub(&id),
            &Homotopy::zero()
        ));
    }

    #[test]
    fn internal_shift_preserves_validity() {
        let t = tensor_many(2, vec![mini_r(2, 1), mini_r(2, 2)]);
        let shifted = t.complex.shifted_q(-2);
        shifted.validate().unwrap();
        assert_eq!(shifted.term(0).summands[0].shift, t.complex.term(0).summands[0].shift - 2);
    }

    #[test]
    fn graded_type_sorts_summands() {
        let t = tensor_many(2, vec![mini_r(2, 1), mini_r(2, 1)]);
        let gt = t.complex.graded_type();
        for (_, sums) in gt {
            let mut sorted = sums.clone();
            sorted.sort();
            assert_eq!(sums, sorted);
        }
    }
}
