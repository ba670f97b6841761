//! Null-homotopy as an integer linear system.
//!
//! The unknowns are the coordinates of each degree of the candidate homotopy
//! in the relevant morphism spaces; `d h + h d = f` is linear in them, and
//! solvability over the integers is decided exactly through Smith normal
//! form.  A returned homotopy is always an explicit witness; `None` means no
//! integral homotopy exists, which is meaningful information over the
//! integers even when a rational one does.

use crate::bimod::{hom_basis, lattice, Morphism};
use crate::complex::{ChainComplex, ChainMap, Homotopy};
use crate::intmat::{solve, IMat, Int};
use num_traits::Zero;
use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

/// Unknown coordinates for a family of degree-preserving maps
/// `g_t : a_t -> b_(t + off)`.
pub(crate) struct MapVars {
    pub a: Arc<ChainComplex>,
    pub b: Arc<ChainComplex>,
    pub off: i64,
    /// Per (degree, target summand, source summand): variable offset and the
    /// morphism-space basis.
    pub blocks: Vec<(i64, usize, usize, usize, Arc<Vec<IMat>>)>,
    index: HashMap<(i64, usize, usize), usize>,
    pub nvars: usize,
}

pub(crate) fn map_vars(a: &Arc<ChainComplex>, b: &Arc<ChainComplex>, off: i64) -> MapVars {
    let n = a.n;
    let mut blocks = Vec::new();
    let mut nvars = 0;
    for (&t, ma) in &a.terms {
        let mb = b.term(t + off);
        if ma.is_zero() || mb.is_zero() {
            continue;
        }
        for (tb, tsum) in mb.summands.iter().enumerate() {
            for (sa, ssum) in ma.summands.iter().enumerate() {
                let basis = hom_basis(n, ssum.kind, tsum.kind, ssum.shift - tsum.shift);
                if basis.is_empty() {
                    continue;
                }
                let len = basis.len();
                blocks.push((t, tb, sa, nvars, basis));
                nvars += len;
            }
        }
    }
    let index = blocks
        .iter()
        .enumerate()
        .map(|(i, (t, tb, sa, _, _))| ((*t, *tb, *sa), i))
        .collect();
    MapVars { a: Arc::clone(a), b: Arc::clone(b), off, blocks, index, nvars }
}

impl MapVars {
    /// Materialize a coordinate vector as one morphism per degree.
    pub fn build(&self, x: &[Int]) -> BTreeMap<i64, Morphism> {
        let mut out: BTreeMap<i64, Morphism> = BTreeMap::new();
        for (t, tb, sa, start, basis) in &self.blocks {
            let f = out.entry(*t).or_insert_with(|| {
                Morphism::zero(self.a.term(*t), self.b.term(*t + self.off))
            });
            for (ci, bmat) in basis.iter().enumerate() {
                let c = &x[start + ci];
                if !c.is_zero() {
                    f.add_to_block(*tb, *sa, &bmat.scale(c));
                }
            }
        }
        out
    }

    /// Variables of one block, as offset plus basis.
    fn vars_at(&self, t: i64, tb: usize, sa: usize) -> Option<(usize, &Arc<Vec<IMat>>)> {
        let &i = self.index.get(&(t, tb, sa))?;
        let (_, _, _, start, basis) = &self.blocks[i];
        Some((*start, basis))
    }
}

/// Sparse-ish accumulating linear system over the integers.
pub(crate) struct LinSys {
    pub nvars: usize,
    rows: Vec<(Vec<Int>, Int)>,
    inconsistent: bool,
}

impl LinSys {
    pub fn new(nvars: usize) -> LinSys {
        LinSys { nvars, rows: Vec::new(), inconsistent: false }
    }

    /// One matrix equation: sum of `coeff_mats[i]` scaled by variable blocks
    /// equals `rhs`.  `cols` pairs a variable index with its coefficient
    /// matrix; every matrix has the same shape.
    pub fn add_matrix_equation(&mut self, shape: (usize, usize), cols: &[(usize, IMat)], rhs: Option<&IMat>) {
        let (ru, rv) = shape;
        for u in 0..ru {
            for v in 0..rv {
                let mut row = vec![Int::zero(); self.nvars];
                let mut any = false;
                for (vi, m) in cols {
                    let c = m.at(u, v);
                    if !c.is_zero() {
                        row[*vi] += c;
                        any = true;
                    }
                }
                let b = rhs.map(|m| m.at(u, v).clone()).unwrap_or_else(Int::zero);
                if !any {
                    if !b.is_zero() {
                        self.inconsistent = true;
                    }
                    continue;
                }
                self.rows.push((row, b));
            }
        }
    }

    pub fn solve(mut self) -> Option<Vec<Int>> {
        if self.inconsistent {
            return None;
        }
        if self.nvars == 0 {
            return Some(Vec::new());
        }
        self.rows.sort();
        self.rows.dedup();
        let m = IMat::from_fn(self.rows.len(), self.nvars, |i, j| self.rows[i].0[j].clone());
        let b: Vec<Int> = self.rows.iter().map(|(_, b)| b.clone()).collect();
        solve(&m, &b)
    }

    pub fn nullspace_basis(mut self) -> Vec<Vec<Int>> {
        if self.inconsistent {
            return Vec::new();
        }
        self.rows.sort();
        self.rows.dedup();
        assert!(self.rows.iter().all(|(_, b)| b.is_zero()));
        let m = IMat::from_fn(self.rows.len(), self.nvars, |i, j| self.rows[i].0[j].clone());
        let k = crate::intmat::nullspace(&m);
        (0..k.rows()).map(|i| k.row(i).to_vec()).collect()
    }
}

fn rank_of(c: &ChainComplex, t: i64, s: usize) -> usize {
    lattice(c.n, c.term(t).summands[s].kind).rank
}

/// Find an integral homotopy `h` with `d h + h d = f`, subject to the
/// optional constraints that `rho . h = 0` degreewise for each given chain
/// map `rho` out of the target complex.
pub fn null_homotopy(f: &ChainMap, constraints: &[&ChainMap]) -> Option<Homotopy> {
    let src = &f.src;
    let tgt = &f.tgt;
    let hv = map_vars(src, tgt, -1);
    let mut sys = LinSys::new(hv.nvars);

    let degrees: Vec<i64> = {
        let mut d: Vec<i64> = src.terms.keys().chain(tgt.terms.keys()).copied().collect();
        d.sort();
        d.dedup();
        d
    };

    for &t in &degrees {
        let ms = src.term(t);
        let mt = tgt.term(t);
        if ms.is_zero() || mt.is_zero() {
            // f_t is zero here and so is every contribution.
            continue;
        }
        let d_tgt = tgt.d(t - 1); // tgt_(t-1) -> tgt_t
        let d_src = src.d(t); //  src_t -> src_(t+1)
        let ft = f.map(t);
        for tb in 0..mt.summands.len() {
            for sa in 0..ms.summands.len() {
                let shape = (rank_of(tgt, t, tb), rank_of(src, t, sa));
                let mut cols: Vec<(usize, IMat)> = Vec::new();
                // (d . h_t) block: sum over middle summands of tgt_(t-1).
                for mid in 0..tgt.term(t - 1).summands.len() {
                    let Some(dblk) = d_tgt.block(tb, mid) else { continue };
                    if let Some((start, basis)) = hv.vars_at(t, mid, sa) {
                        for (ci, bm) in basis.iter().enumerate() {
                            cols.push((start + ci, dblk.mul(bm)));
                        }
                    }
                }
                // (h_(t+1) . d) block: sum over middle summands of src_(t+1).
                for mid in 0..src.term(t + 1).summands.len() {
                    let Some(dblk) = d_src.block(mid, sa) else { continue };
                    if let Some((start, basis)) = hv.vars_at(t + 1, tb, mid) {
                        for (ci, bm) in basis.iter().enumerate() {
                            cols.push((start + ci, bm.mul(dblk)));
                        }
                    }
                }
                sys.add_matrix_equation(shape, &cols, ft.block(tb, sa));
            }
        }
    }

    for rho in constraints {
        debug_assert_eq!(rho.src, *tgt);
        for &t in &degrees {
            let ms = src.term(t);
            let mr = rho.tgt.term(t - 1);
            if ms.is_zero() || mr.is_zero() {
                continue;
            }
            let rmap = rho.map(t - 1);
            for cb in 0..mr.summands.len() {
                for sa in 0..ms.summands.len() {
                    let shape = (lattice(rho.tgt.n, mr.summands[cb].kind).rank, rank_of(src, t, sa));
                    let mut cols: Vec<(usize, IMat)> = Vec::new();
                    for mid in 0..tgt.term(t - 1).summands.len() {
                        let Some(rblk) = rmap.block(cb, mid) else { continue };
                        if let Some((start, basis)) = hv.vars_at(t, mid, sa) {
                            for (ci, bm) in basis.iter().enumerate() {
                                cols.push((start + ci, rblk.mul(bm)));
                            }
                        }
                    }
                    sys.add_matrix_equation(shape, &cols, None);
                }
            }
        }
    }

    let x = sys.solve()?;
    let mut h = Homotopy::zero();
    for (t, m) in hv.build(&x) {
        h.set_map(t, m);
    }
    debug_assert!(crate::complex::homotopy_witnesses(f, &h));
    Some(h)
}

/// Is `f` integrally null-homotopic?
pub fn is_null_homotopic(f: &ChainMap) -> bool {
    null_homotopy(f, &[]).is_some()
}

/// Canonical basis of the lattice of chain maps `src -> tgt`.
pub fn chain_map_lattice(src: &Arc<ChainComplex>, tgt: &Arc<ChainComplex>) -> Vec<ChainMap> {
    let tv = map_vars(src, tgt, 0);
    let mut sys = LinSys::new(tv.nvars);
    let degrees: Vec<i64> = {
        let mut d: Vec<i64> = src.terms.keys().chain(tgt.terms.keys()).copied().collect();
        d.sort();
        d.dedup();
        d
    };
    // d . theta_t - theta_(t+1) . d = 0, one equation per degree.
    for &t in &degrees {
        let ms = src.term(t);
        let mt = tgt.term(t + 1);
        if ms.is_zero() || mt.is_zero() {
            continue;
        }
        let d_tgt = tgt.d(t);
        let d_src = src.d(t);
        for tb in 0..mt.summands.len() {
            for sa in 0..ms.summands.len() {
                let shape = (rank_of(tgt, t + 1, tb), rank_of(src, t, sa));
                let mut cols: Vec<(usize, IMat)> = Vec::new();
                for mid in 0..tgt.term(t).summands.len() {
                    let Some(dblk) = d_tgt.block(tb, mid) else { continue };
                    if let Some((start, basis)) = tv.vars_at(t, mid, sa) {
                        for (ci, bm) in basis.iter().enumerate() {
                            cols.push((start + ci, dblk.mul(bm)));
                        }
                    }
                }
                for mid in 0..src.term(t + 1).summands.len() {
                    let Some(dblk) = d_src.block(mid, sa) else { continue };
                    if let Some((start, basis)) = tv.vars_at(t + 1, tb, mid) {
                        for (ci, bm) in basis.iter().enumerate() {
                            cols.push((start + ci, bm.mul(dblk).neg()));
                        }
                    }
                }
                sys.add_matrix_equation(shape, &cols, None);
            }
        }
    }
    sys.nullspace_basis()
        .into_iter()
        .map(|x| {
            let mut f = ChainMap::zero(Arc::clone(src), Arc::clone(tgt));
            for (t, m) in tv.build(&x) {
                f.set_map(t, m);
            }
            f
        })
        .collect()
}
