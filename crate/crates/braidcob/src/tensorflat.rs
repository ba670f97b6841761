//! Tensor products over the algebra, flattened in one pass.
//!
//! A pure tensor of summand elements contracts to a single summand: interior
//! `Diag` factors multiply into their neighbours, and between consecutive
//! `Tensor` factors the inner pair of path factors multiplies down to one
//! path, the contraction label.  A tensor product of modules is therefore a
//! direct sum of flat summands indexed by a choice of summand in each factor
//! together with a tuple of contraction labels.  Working with the flat form
//! directly keeps the product strictly associative: there are no associator
//! isomorphisms anywhere downstream.
//!
//! Every flat basis vector has a canonical representative pure tensor with
//! coefficient one (`rep`), and `flatten` sends any pure tensor back to flat
//! coordinates.  A map applied to a window of factors is computed as
//! representative, then window flatten, then the map's matrix, then window
//! representative, then full flatten (`induced_map`); exactness of the
//! contraction makes the result independent of the representatives.

use crate::bimod::{lattice, paths_between, Kind, Module, Morphism, Summand};
use crate::zigzag::Ring;
use num_traits::Zero;
use std::collections::HashMap;
use std::ops::Range;

/// Content of one slot of a pure tensor: a ring basis path for `Diag`, a
/// pair of ring basis paths for `Tensor`.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum SlotVal {
    Path(usize),
    Pair(usize, usize),
}

/// A flat summand: the summand chosen in each factor plus the ring basis
/// indices of the contraction labels between consecutive `Tensor` choices.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct FlatKey {
    pub choice: Vec<u32>,
    pub links: Vec<u32>,
}

pub struct Layout {
    pub n: usize,
    pub factors: Vec<Module>,
    pub flats: Vec<FlatKey>,
    /// One summand per flat key, in the same order.
    pub module: Module,
    lookup: HashMap<FlatKey, usize>,
}

impl Layout {
    pub fn new(n: usize, factors: Vec<Module>) -> Layout {
        let ring = Ring::new(n);
        let mut flats = Vec::new();
        let mut summands = Vec::new();

        if factors.iter().all(|m| !m.summands.is_empty()) {
            // Row-major odometer over summand choices; the empty factor list
            // contributes its single empty choice, the unit bimodule.
            let mut choice = vec![0u32; factors.len()];
            let mut done = false;
            while !done {
                let chosen: Vec<Summand> = factors
                    .iter()
                    .zip(&choice)
                    .map(|(m, &c)| m.summands[c as usize])
                    .collect();
                enumerate_links(&ring, &chosen, &mut flats, &mut summands, &choice);
                done = true;
                for s in (0..factors.len()).rev() {
                    choice[s] += 1;
                    if (choice[s] as usize) < factors[s].summands.len() {
                        done = false;
                        break;
                    }
                    choice[s] = 0;
                }
            }
        }

        let lookup = flats.iter().enumerate().map(|(i, k)| (k.clone(), i)).collect();
        Layout { n, factors, flats, module: Module { n, summands }, lookup }
    }

    pub fn flat_index(&self, key: &FlatKey) -> Option<usize> {
        self.lookup.get(key).copied()
    }

    /// Positions of the `Tensor` choices of a flat key.
    fn tensor_slots(&self, key: &FlatKey) -> Vec<usize> {
        key.choice
            .iter()
            .enumerate()
            .filter(|&(s, &c)| {
                matches!(self.factors[s].summands[c as usize].kind, Kind::Tensor(..))
            })
            .map(|(s, _)| s)
            .collect()
    }

    /// Canonical representative pure tensor of flat basis vector `v` in flat
    /// summand `flat`.  Requires at least one factor.
    pub fn rep(&self, flat: usize, v: usize) -> Vec<SlotVal> {
        assert!(!self.factors.is_empty(), "no representative in an empty tensor");
        let ring = Ring::new(self.n);
        let key = &self.flats[flat];
        let ts = self.tensor_slots(key);
        let kind = self.module.summands[flat].kind;
        let lat = lattice(self.n, kind);
        let mut out = vec![SlotVal::Path(0); self.factors.len()];

        if ts.is_empty() {
            // All factors Diag: put the path in slot 0, idempotents after.
            let c = lat.pairs[v].0;
            let e = ring.idempotent(ring.basis()[c].target() as usize);
            out[0] = SlotVal::Path(c);
            for slot in out.iter_mut().skip(1) {
                *slot = SlotVal::Path(e);
            }
            return out;
        }

        let (p, q) = lat.pairs[v];
        let e_src = ring.idempotent(ring.basis()[p].source() as usize);
        let e_tgt = ring.idempotent(ring.basis()[q].target() as usize);
        for (g, &t) in ts.iter().enumerate() {
            // Left component: the flat p at the first slot, afterwards the
            // incoming contraction label.
            let lp = if g == 0 { p } else { key.links[g - 1] as usize };
            // Right component: the flat q at the last slot, otherwise the
            // lazy path at the summand's outgoing vertex.
            let rq = if g + 1 == ts.len() {
                q
            } else {
                let Kind::Tensor(_, jj) = self.factors[t].summands[key.choice[t] as usize].kind
                else {
                    unreachable!()
                };
                ring.idempotent(jj as usize)
            };
            out[t] = SlotVal::Pair(lp, rq);
        }
        // Diag slots: idempotent at whichever vertex threads through them.
        for s in 0..self.factors.len() {
            if ts.contains(&s) {
                continue;
            }
            out[s] = if s < ts[0] {
                SlotVal::Path(e_src)
            } else if s > *ts.last().unwrap() {
                SlotVal::Path(e_tgt)
            } else {
                let g = ts.iter().position(|&t| t > s).unwrap();
                // Between tensor slots g-1 and g: the outgoing vertex of
                // tensor slot g-1 threads through.
                let t_prev = ts[g - 1];
                let Kind::Tensor(_, jj) =
                    self.factors[t_prev].summands[key.choice[t_prev] as usize].kind
                else {
                    unreachable!()
                };
                SlotVal::Path(ring.idempotent(jj as usize))
            };
        }
        out
    }

    /// Flat coordinates of a pure tensor.  `extra` injects an additional
    /// algebra element between slots `extra.0 - 1` and `extra.0`, which is
    /// how content lands in a window that flattens to no slots at all.
    /// `None` when the contraction multiplies to zero.
    pub fn flatten(
        &self,
        choice: &[u32],
        vals: &[SlotVal],
        extra: Option<(usize, usize)>,
    ) -> Option<(usize, usize)> {
        let ring = Ring::new(self.n);
        assert_eq!(choice.len(), self.factors.len());
        assert_eq!(vals.len(), self.factors.len());

        // Walk the slots, multiplying Diag content and splitting at Tensor
        // factors.
        let mut alpha: Option<usize> = None; // product before the first pair
        let mut first_p: Option<usize> = None;
        let mut rho: Option<usize> = None; // running product after a pair
        let mut links: Vec<u32> = Vec::new();

        let feed = |x: usize,
                        alpha: &mut Option<usize>,
                        first_p: &mut Option<usize>,
                        rho: &mut Option<usize>,
                        links: &mut Vec<u32>,
                        is_pair_left: bool|
         -> bool {
            // Returns false when the product dies.
            if first_p.is_none() && !is_pair_left {
                *alpha = match *alpha {
                    None => Some(x),
                    Some(a) => match ring.mul_basis(a, x) {
                        Some(ax) => Some(ax),
                        None => return false,
                    },
                };
                return true;
            }
            if is_pair_left {
                if first_p.is_none() {
                    let p = match *alpha {
                        None => x,
                        Some(a) => match ring.mul_basis(a, x) {
                            Some(ax) => ax,
                            None => return false,
                        },
                    };
                    *first_p = Some(p);
                } else {
                    let r = rho.expect("pair after a pair always has a running product");
                    match ring.mul_basis(r, x) {
                        Some(w) => links.push(w as u32),
                        None => return false,
                    }
                }
                return true;
            }
            // Diag content after the first pair.
            let r = rho.expect("running product exists after a pair");
            match ring.mul_basis(r, x) {
                Some(rx) => *rho = Some(rx),
                None => return false,
            }
            true
        };

        for s in 0..vals.len() + 1 {
            if let Some((pos, x)) = extra {
                if pos == s && !feed(x, &mut alpha, &mut first_p, &mut rho, &mut links, false) {
                    return None;
                }
            }
            if s == vals.len() {
                break;
            }
            match vals[s] {
                SlotVal::Path(c) => {
                    if !feed(c, &mut alpha, &mut first_p, &mut rho, &mut links, false) {
                        return None;
                    }
                }
                SlotVal::Pair(p, q) => {
                    if !feed(p, &mut alpha, &mut first_p, &mut rho, &mut links, true) {
                        return None;
                    }
                    rho = Some(q);
                }
            }
        }

        let key = FlatKey { choice: choice.to_vec(), links };
        let flat = self.flat_index(&key)?;
        let kind = self.module.summands[flat].kind;
        let lat = lattice(self.n, kind);
        match first_p {
            None => {
                let c = alpha.expect("a nonempty all-Diag tensor accumulates a path");
                lat.pair_to_index(c, c).map(|i| (flat, i))
            }
            Some(p) => {
                let q = rho.expect("running product exists after a pair");
                lat.pair_to_index(p, q).map(|i| (flat, i))
            }
        }
    }

    /// Vertex threading through the boundary between slots `a - 1` and `a`
    /// of a pure tensor.
    pub fn boundary_vertex(&self, vals: &[SlotVal], a: usize) -> usize {
        let ring = Ring::new(self.n);
        assert!(!vals.is_empty());
        if a < vals.len() {
            match vals[a] {
                SlotVal::Path(c) => ring.basis()[c].source() as usize,
                SlotVal::Pair(p, _) => ring.basis()[p].source() as usize,
            }
        } else {
            match vals[vals.len() - 1] {
                SlotVal::Path(c) => ring.basis()[c].target() as usize,
                SlotVal::Pair(_, q) => ring.basis()[q].target() as usize,
            }
        }
    }
}

fn enumerate_links(
    ring: &Ring,
    chosen: &[Summand],
    flats: &mut Vec<FlatKey>,
    summands: &mut Vec<Summand>,
    choice: &[u32],
) {
    let tslots: Vec<(usize, u8, u8)> = chosen
        .iter()
        .enumerate()
        .filter_map(|(s, sum)| match sum.kind {
            Kind::Tensor(i, j) => Some((s, i, j)),
            Kind::Diag => None,
        })
        .collect();
    let base_shift: i64 = chosen.iter().map(|s| s.shift).sum();

    if tslots.is_empty() {
        flats.push(FlatKey { choice: choice.to_vec(), links: Vec::new() });
        summands.push(Summand { kind: Kind::Diag, shift: base_shift });
        return;
    }

    let spaces: Vec<Vec<usize>> = (0..tslots.len() - 1)
        .map(|g| paths_between(ring, tslots[g].2 as usize, tslots[g + 1].1 as usize))
        .collect();
    if spaces.iter().any(|s| s.is_empty()) {
        // An empty contraction space kills every choice of labels.
        return;
    }
    let kind = Kind::Tensor(tslots[0].1, tslots[tslots.len() - 1].2);

    let mut idx = vec![0usize; spaces.len()];
    let mut done = false;
    while !done {
        let links: Vec<u32> = idx.iter().zip(&spaces).map(|(&i, sp)| sp[i] as u32).collect();
        let wdeg: i64 = links.iter().map(|&w| ring.degree(w as usize)).sum();
        flats.push(FlatKey { choice: choice.to_vec(), links });
        summands.push(Summand { kind, shift: base_shift + wdeg });
        done = true;
        for g in (0..spaces.len()).rev() {
            idx[g] += 1;
            if idx[g] < spaces[g].len() {
                done = false;
                break;
            }
            idx[g] = 0;
        }
    }
}

/// The map `id (x) phi (x) id` on flat coordinates, where `phi` sends the
/// flattened window `win` of `src.factors` to the flattened replacement
/// factors.  `src_win` and `tgt_win` are the layouts of the window factors
/// and of the replacement factors; `phi` maps `src_win.module` to
/// `tgt_win.module`.
pub fn induced_map(
    src: &Layout,
    tgt: &Layout,
    win: Range<usize>,
    src_win: &Layout,
    tgt_win: &Layout,
    phi: &Morphism,
) -> Morphism {
    assert_eq!(phi.src, src_win.module);
    assert_eq!(phi.tgt, tgt_win.module);
    assert_eq!(&tgt.factors[..win.start], &src.factors[..win.start]);
    assert_eq!(&tgt.factors[win.start..win.start + tgt_win.factors.len()], &tgt_win.factors[..]);

    let n = src.n;
    let ring = Ring::new(n);
    let mut out = Morphism::zero(src.module.clone(), tgt.module.clone());

    if src.factors.is_empty() {
        // The whole tensor is the window; the induced map is phi itself.
        assert!(win.start == 0 && win.end == 0);
        for (&(t, s), b) in phi.blocks() {
            out.add_to_block(t, s, b);
        }
        return out;
    }

    let mut acc: HashMap<(usize, usize), crate::intmat::IMat> = HashMap::new();
    for fs in 0..src.flats.len() {
        let src_kind = src.module.summands[fs].kind;
        let src_lat = lattice(n, src_kind);
        for v in 0..src_lat.rank {
            let slots = src.rep(fs, v);
            let wvals = &slots[win.clone()];
            let wchoice = &src.flats[fs].choice[win.clone()];

            // Window flat coordinates of the source representative.
            let (wflat, wv) = if win.is_empty() {
                let vert = src.boundary_vertex(&slots, win.start);
                let e = ring.idempotent(vert);
                let lat = lattice(n, Kind::Diag);
                (0, lat.pair_to_index(e, e).unwrap())
            } else {
                src_win
                    .flatten(wchoice, wvals, None)
                    .expect("a representative window always flattens")
            };

            for (&(wt, ws), b) in phi.blocks() {
                if ws != wflat {
                    continue;
                }
                for wv2 in 0..b.rows() {
                    let c = b.at(wv2, wv);
                    if c.is_zero() {
                        continue;
                    }
                    // Representative of the window image, spliced back in.
                    let (wslots, wchoice2, extra) = if tgt_win.factors.is_empty() {
                        let lat = lattice(n, Kind::Diag);
                        let path = lat.pairs[wv2].0;
                        (Vec::new(), Vec::new(), Some((win.start, path)))
                    } else {
                        (
                            tgt_win.rep(wt, wv2),
                            tgt_win.flats[wt].choice.clone(),
                            None,
                        )
                    };
                    let mut full_vals = Vec::with_capacity(
                        slots.len() - (win.end - win.start) + wslots.len(),
                    );
                    full_vals.extend_from_slice(&slots[..win.start]);
                    full_vals.extend_from_slice(&wslots);
                    full_vals.extend_from_slice(&slots[win.end..]);
                    let mut full_choice = Vec::with_capacity(full_vals.len());
                    full_choice.extend_from_slice(&src.flats[fs].choice[..win.start]);
                    full_choice.extend_from_slice(&wchoice2);
                    full_choice.extend_from_slice(&src.flats[fs].choice[win.end..]);

                    if let Some((ft, fv)) = tgt.flatten(&full_choice, &full_vals, extra) {
                        let blk = acc.entry((ft, fs)).or_insert_with(|| {
                            let lt = lattice(n, tgt.module.summands[ft].kind);
                            crate::intmat::IMat::zeros(lt.rank, src_lat.rank)
                        });
                        blk.add_at(fv, v, c);
                    }
                }
            }
        }
    }
    for ((ft, fs), blk) in acc {
        out.set_block(ft, fs, blk);
    }
    out
}

/// Layout of a single-factor tensor: flat coordinates coincide with the
/// factor itself, so morphisms transfer directly.
pub fn single(n: usize, m: &Module) -> Layout {
    let l = Layout::new(n, vec![m.clone()]);
    assert_eq!(l.module, *m);
    l
}

pub fn empty(n: usize) -> Layout {
    Layout::new(n, Vec::new())
}

/// Convenience: the layouts of a tensor product and all its factor windows
/// share `n`; recompute a window layout.
pub fn window_layout(layout: &Layout, win: Range<usize>) -> Layout {
    Layout::new(layout.n, layout.factors[win].to_vec())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t_module(n: usize, i: u8, j: u8, shift: i64) -> Module {
        Module { n, summands: vec![Summand { kind: Kind::Tensor(i, j), shift }] }
    }

    fn mixed_module(n: usize) -> Module {
        Module {
            n,
            summands: vec![
                Summand { kind: Kind::Diag, shift: 0 },
                Summand { kind: Kind::Tensor(1, 1), shift: -1 },
                Summand { kind: Kind::Tensor(2, 2), shift: 1 },
            ],
        }
    }

    #[test]
    fn empty_tensor_is_diag() {
        let l = empty(2);
        assert_eq!(l.module, Module::diag(2));
        assert_eq!(l.flats.len(), 1);
    }

    #[test]
    fn two_tensor_factors_contract_through_inner_paths() {
        // T(i,i) (x) T(i,i): inner space (i)A(i) has a lazy path and a loop,
        // so two copies of T(i,i), shifted by 0 and 2.
        let l = Layout::new(2, vec![t_module(2, 1, 1, 0), t_module(2, 1, 1, 0)]);
        assert_eq!(l.module.summands.len(), 2);
        assert_eq!(l.module.summands[0], Summand { kind: Kind::Tensor(1, 1), shift: 0 });
        assert_eq!(l.module.summands[1], Summand { kind: Kind::Tensor(1, 1), shift: 2 });
    }

    #[test]
    fn distant_tensor_factors_have_no_contraction() {
        // (1)A(3) = 0 in a 3-vertex quiver.
        let l = Layout::new(3, vec![t_module(3, 1, 1, 0), t_module(3, 3, 3, 0)]);
        assert!(l.module.summands.is_empty());
    }

    #[test]
    fn flatten_inverts_rep() {
        for factors in [
            vec![Module::diag(2), Module::diag(2)],
            vec![t_module(2, 1, 1, 0), Module::diag(2)],
            vec![Module::diag(2), t_module(2, 2, 2, -1)],
            vec![t_module(2, 1, 1, 0), t_module(2, 1, 1, 0), Module::diag(2)],
            vec![mixed_module(2), mixed_module(2)],
        ] {
            let l = Layout::new(2, factors);
            for flat in 0..l.flats.len() {
                let lat = lattice(l.n, l.module.summands[flat].kind);
                for v in 0..lat.rank {
                    let slots = l.rep(flat, v);
                    let got = l.flatten(&l.flats[flat].choice, &slots, None);
                    assert_eq!(got, Some((flat, v)));
                }
            }
        }
    }

    /// Moving a ring element across a tensor sign must not change the flat
    /// coordinates: contract x.a in slot s against a.y in slot s+1.
    #[test]
    fn flatten_respects_middle_relations() {
        let n = 3;
        let ring = Ring::new(n);
        let factors = vec![mixed_module(n), mixed_module(n)];
        let l = Layout::new(n, factors);
        for flat in 0..l.flats.len() {
            let lat = lattice(n, l.module.summands[flat].kind);
            for v in 0..lat.rank {
                let slots = l.rep(flat, v);
                for a in 0..ring.rank() {
                    // act on the right of slot 0
                    let moved_right = match slots[0] {
                        SlotVal::Path(c) => ring.mul_basis(c, a).map(SlotVal::Path),
                        SlotVal::Pair(p, q) => {
                            ring.mul_basis(q, a).map(|qa| SlotVal::Pair(p, qa))
                        }
                    };
                    // act on the left of slot 1
                    let moved_left = match slots[1] {
                        SlotVal::Path(c) => ring.mul_basis(a, c).map(SlotVal::Path),
                        SlotVal::Pair(p, q) => {
                            ring.mul_basis(a, p).map(|ap| SlotVal::Pair(ap, q))
                        }
                    };
                    let f1 = moved_right.and_then(|sv| {
                        l.flatten(&l.flats[flat].choice, &[sv, slots[1]], None)
                    });
                    let f2 = moved_left.and_then(|sv| {
                        l.flatten(&l.flats[flat].choice, &[slots[0], sv], None)
                    });
                    assert_eq!(f1, f2, "middle relation at basis element {}", a);
                }
            }
        }
    }

    #[test]
    fn flat_rank_multiplies_gracefully() {
        // Total lattice rank of T(1,1) (x) T(1,1) over the 2-vertex algebra:
        // |A(1)| * |(1)A(1)| * |(1)A| = 3 * 2 * 3, vertex 1 being a boundary
        // vertex with three paths in and three paths out.
        let l = Layout::new(2, vec![t_module(2, 1, 1, 0), t_module(2, 1, 1, 0)]);
        let total: usize = l.module.summands.iter().map(|s| lattice(2, s.kind).rank).sum();
        assert_eq!(total, 18);

        // Interior vertex of the 3-vertex algebra: 4 * 2 * 4.
        let l = Layout::new(3, vec![t_module(3, 2, 2, 0), t_module(3, 2, 2, 0)]);
        let total: usize = l.module.summands.iter().map(|s| lattice(3, s.kind).rank).sum();
        assert_eq!(total, 32);
    }

    #[test]
    fn induced_identity_window_is_identity() {
        let n = 2;
        let factors = vec![mixed_module(n), Module::diag(n), t_module(n, 1, 1, 0)];
        let l = Layout::new(n, factors.clone());
        for a in 0..factors.len() {
            let win = window_layout(&l, a..a + 1);
            let phi = Morphism::identity(&win.module);
            let f = induced_map(&l, &l, a..a + 1, &win, &win, &phi);
            assert_eq!(f, Morphism::identity(&l.module), "window at {}", a);
        }
    }

    /// Inserting a Diag factor via the unit map and deleting it again must
    /// compose to the identity.
    #[test]
    fn unit_insertion_roundtrip() {
        let n = 2;
        let factors = vec![t_module(n, 1, 1, 0), t_module(n, 2, 2, 0)];
        let l = Layout::new(n, factors.clone());
        let mut with_diag = factors.clone();
        with_diag.insert(1, Module::diag(n));
        let l2 = Layout::new(n, with_diag);

        let ew = empty(n);
        let dw = single(n, &Module::diag(n));
        let unit = Morphism::identity(&Module::diag(n));

        let ins = induced_map(&l, &l2, 1..1, &ew, &dw, &unit);
        let del = induced_map(&l2, &l, 1..2, &dw, &ew, &unit);
        let round = del.compose(&ins);
        assert_eq!(round, Morphism::identity(&l.module));

        // And the other way: delete then insert.
        let round2 = ins.compose(&del);
        assert_eq!(round2, Morphism::identity(&l2.module));
    }

    /// A window map made of left-multiplication acts the same whether the
    /// window is one factor or two.
    #[test]
    fn window_size_does_not_matter_for_central_maps() {
        let n = 3;
        let ring = Ring::new(n);
        let factors = vec![t_module(n, 2, 2, 0), t_module(n, 2, 2, 0)];
        let l = Layout::new(n, factors);
        let z = ring.elt_basis(ring.loop_x(2));

        // Multiply in the first factor alone.
        let w1 = window_layout(&l, 0..1);
        let phi1 = Morphism::left_mult(&w1.module, &z, 2);
        let shifted_l = Layout::new(
            n,
            vec![t_module(n, 2, 2, -2), t_module(n, 2, 2, 0)],
        );
        let f1 = induced_map(&l, &shifted_l, 0..1, &w1, &single(n, &phi1.tgt), &phi1);

        // Multiply across the whole window.
        let w2 = window_layout(&l, 0..2);
        let phi2 = Morphism::left_mult(&w2.module, &z, 2);
        let tgt_w2 = Layout::new(n, vec![t_module(n, 2, 2, -2), t_module(n, 2, 2, 0)]);
        assert_eq!(phi2.tgt, tgt_w2.module);
        let f2 = induced_map(&l, &shifted_l, 0..2, &w2, &tgt_w2, &phi2);
        assert_eq!(f1, f2);
        assert!(!f1.is_zero());
    }
}
