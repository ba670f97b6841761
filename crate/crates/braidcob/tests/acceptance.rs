//! The acceptance gate: one test per criterion, each printing a summary
//! line on success.  Everything here recomputes its claim from scratch
//! through the public API; nothing is read back from cached expectations.

use std::path::PathBuf;
use std::sync::Arc;
use std::time::Instant;

use braidcob::bimod::{Kind, Summand};
use braidcob::braid::{random_movie, random_word, BraidMovie, BraidWord, MoveFixture, MovieStep};
use braidcob::complex::homotopy_witnesses;
use braidcob::decat::{burau, burau_generator, k_class};
use braidcob::equiv::{homotopy_equivalent, Equiv};
use braidcob::functor::{
    invariant, left_mult_map, letter_complex, loop_difference, reduced_word_complex,
    right_mult_map, shift_chain_map, trailing_coevaluation, unit_coefficient, verify_move,
    word_complex, MoveVerdict,
};
use braidcob::homotopy::{is_null_homotopic, null_homotopy};
use braidcob::intmat::Int;
use braidcob::rouquier::{semitrivial_invariant, verify_rouquier_relations, Semitrivial};
use braidcob::simplify::simplify;
use braidcob::zigzag::{Elt, Ring};
use num_traits::{One, Signed};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn elt_eq(x: &Elt, y: &Elt) -> bool {
    x.0 == y.0
}

/// `sum of c_j X_j` over the loops, out-of-range indices dropped.
fn loops_combo(ring: &Ring, coeffs: &[(usize, i64)]) -> Elt {
    let mut e = ring.zero();
    for &(j, c) in coeffs {
        if (1..=ring.n()).contains(&j) {
            e.0[ring.loop_x(j)] += Int::from(c);
        }
    }
    e
}

fn scaled(e: &Elt, c: &Int) -> Elt {
    Elt(e.0.iter().map(|x| x * c).collect())
}

#[test]
fn criterion_1_ring_multiplication_is_exact_and_small() {
    let start = Instant::now();
    for n in 1..=4usize {
        let ring = Ring::new(n);
        assert_eq!(ring.basis().len(), 4 * n - 2, "basis rank at n = {n}");
        // Exhaustive associativity over basis triples, at the element level.
        for a in 0..ring.rank() {
            let ea = ring.elt_basis(a);
            for b in 0..ring.rank() {
                let eb = ring.elt_basis(b);
                let ab = ring.mul(&ea, &eb);
                for c in 0..ring.rank() {
                    let ec = ring.elt_basis(c);
                    let left = ring.mul(&ab, &ec);
                    let right = ring.mul(&ea, &ring.mul(&eb, &ec));
                    assert!(elt_eq(&left, &right), "associativity at ({a}, {b}, {c}), n = {n}");
                }
            }
        }
        // The center: honest rank, and every basis vector actually central.
        let center = ring.center_basis();
        assert_eq!(center.len(), n + 1, "center rank at n = {n}");
        for z in center {
            let z = Elt(z.clone());
            for b in 0..ring.rank() {
                let eb = ring.elt_basis(b);
                assert!(elt_eq(&ring.mul(&z, &eb), &ring.mul(&eb, &z)));
            }
        }
        // Products of loops vanish in every combination.
        for i in 1..=n {
            for j in 1..=n {
                let xi = ring.elt_basis(ring.loop_x(i));
                let xj = ring.elt_basis(ring.loop_x(j));
                assert!(ring.mul(&xi, &xj).is_zero(), "X_{i} X_{j} at n = {n}");
            }
        }
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 5.0, "ring checks took {elapsed:?}");
    println!(
        "criterion 1: PASS — associativity, rank 4n-2, center rank n+1, loop products zero, n <= 4 ({elapsed:?})"
    );
}

#[test]
fn criterion_2_letter_complexes_satisfy_the_three_relation_families() {
    let start = Instant::now();
    let seed = 0x1d_5eed;
    for n in 1..=3usize {
        let strands = n + 1;
        // A letter against its inverse reduces to the lone diagonal summand.
        for i in 1..=n as i32 {
            for letters in [[i, -i], [-i, i]] {
                let w = BraidWord::new(strands, letters.to_vec()).unwrap();
                let red = simplify(Arc::clone(&word_complex(&w).complex));
                let gt = red.reduced.graded_type();
                assert_eq!(gt.len(), 1, "one nonzero degree for {w}");
                let (t, summands) = gt.iter().next().unwrap();
                assert_eq!(*t, 0, "degree zero for {w}");
                assert_eq!(
                    summands.as_slice(),
                    &[Summand { kind: Kind::Diag, shift: 0 }],
                    "diagonal summand for {w}"
                );
            }
        }
        // The braid relation and distant commutation, with witnesses
        // verified by substitution on both sides.
        let mut pairs: Vec<(Vec<i32>, Vec<i32>)> = Vec::new();
        for i in 1..n as i32 {
            pairs.push((vec![i, i + 1, i], vec![i + 1, i, i + 1]));
        }
        for i in 1..=n as i32 {
            for j in (i + 2)..=n as i32 {
                pairs.push((vec![i, j], vec![j, i]));
            }
        }
        for (l1, l2) in pairs {
            let w1 = BraidWord::new(strands, l1).unwrap();
            let w2 = BraidWord::new(strands, l2).unwrap();
            let c1 = Arc::clone(&word_complex(&w1).complex);
            let c2 = Arc::clone(&word_complex(&w2).complex);
            match homotopy_equivalent(c1, c2, seed) {
                Equiv::Equivalent(w) => w.verify().unwrap_or_else(|e| {
                    panic!("witness for {w1} vs {w2} fails: {e}");
                }),
                Equiv::Distinct(m) => panic!("{w1} vs {w2} distinct: {m}"),
                Equiv::Unknown(m) => panic!("{w1} vs {w2} undecided: {m}"),
            }
        }
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 60.0, "relation checks took {elapsed:?}");
    println!(
        "criterion 2: PASS — cancellation to the diagonal, braid relation, distant commutation, n <= 3, witnesses round-trip ({elapsed:?})"
    );
}

#[test]
fn criterion_3_multiplication_interchange_witnesses_verify_exactly() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xa_c0_2);
    let mut solved = 0usize;
    for n in 1..=4usize {
        let ring = Ring::new(n);
        for i in 1..=n {
            for sign in [1i32, -1] {
                let c = letter_complex(n, sign * i as i32);
                // Left multiplication by a combination of loops agrees up
                // to homotopy with right multiplication by its reflection.
                let mut combos: Vec<Elt> =
                    (1..=n).map(|j| loops_combo(&ring, &[(j, 1)])).collect();
                for _ in 0..2 {
                    let coeffs: Vec<(usize, i64)> =
                        (1..=n).map(|j| (j, rng.gen_range(-2..=2))).collect();
                    combos.push(loops_combo(&ring, &coeffs));
                }
                for a in &combos {
                    let a_i = a.0[ring.loop_x(i)].clone();
                    let neighbors = loops_combo(&ring, &[(i - 1, 1), (i, 2), (i + 1, 1)]);
                    let reflected = ring.sub(a, &scaled(&neighbors, &a_i));
                    let f = left_mult_map(&c, a, 2).sub(&right_mult_map(&c, &reflected, 2));
                    let h = null_homotopy(&f, &[]).unwrap_or_else(|| {
                        panic!("no interchange homotopy at n = {n}, i = {i}, sign {sign}")
                    });
                    assert!(homotopy_witnesses(&f, &h), "witness fails substitution");
                    solved += 1;
                }
                // The three null-homotopic sum forms.
                let forms = [
                    (vec![(i - 1, 1), (i, 1)], vec![(i, 1), (i + 1, 1)]),
                    (vec![(i, 1), (i + 1, 1)], vec![(i - 1, 1), (i, 1)]),
                    (vec![(i - 1, 1), (i + 1, -1)], vec![(i + 1, 1), (i - 1, -1)]),
                ];
                for (lc, rc) in forms {
                    let u = loops_combo(&ring, &lc);
                    let v = loops_combo(&ring, &rc);
                    let f = left_mult_map(&c, &u, 2).add(&right_mult_map(&c, &v, 2));
                    let h = null_homotopy(&f, &[]).unwrap_or_else(|| {
                        panic!("sum form not null-homotopic at n = {n}, i = {i}, sign {sign}")
                    });
                    assert!(homotopy_witnesses(&f, &h), "witness fails substitution");
                    solved += 1;
                }
            }
        }
    }
    println!(
        "criterion 3: PASS — {solved} interchange and sum-form homotopies found and verified by substitution, n <= 4"
    );
}

fn fixtures_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures/movie_moves")
}

fn load_fixtures() -> Vec<MoveFixture> {
    let mut files: Vec<PathBuf> = std::fs::read_dir(fixtures_dir())
        .expect("fixture directory")
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    files.sort();
    files
        .iter()
        .map(|p| {
            MoveFixture::from_json(&std::fs::read_to_string(p).unwrap())
                .unwrap_or_else(|e| panic!("{}: {e}", p.display()))
        })
        .collect()
}

#[test]
fn criterion_4_every_fixture_pair_returns_a_signed_verdict() {
    let fixtures = load_fixtures();
    assert!(!fixtures.is_empty());
    let mut signs = std::collections::BTreeMap::new();
    for f in &fixtures {
        match verify_move(&f.movie1, &f.movie2) {
            Ok(MoveVerdict::Sign(s)) => {
                if let Some(e) = f.expected_sign {
                    assert_eq!(s, e, "{} disagrees with the pinned sign", f.name);
                }
                signs.insert(f.name.clone(), s);
            }
            Ok(MoveVerdict::Inequivalent(m)) => panic!("{}: inequivalent: {m}", f.name),
            Ok(MoveVerdict::Undecided(m)) => panic!("{}: undecided: {m}", f.name),
            Err(e) => panic!("{}: {e}", f.name),
        }
    }
    assert_eq!(signs["move12_branch_point_through_a_kink"], 1);
    assert_eq!(signs["move13_branch_point_through_a_triple_crossing"], -1);
    println!(
        "criterion 4: PASS — {} fixture pairs verified with signs, slide-through-kink +1, slide-through-triple-crossing -1",
        fixtures.len()
    );
}

#[test]
fn criterion_5_the_constrained_homotopy_for_the_triple_crossing_slide_exists() {
    // On the complex of two inverse letters, the sum of right
    // multiplication by the loop difference at the first letter and left
    // multiplication by the one at the second bounds via a homotopy that
    // also composes to zero with the reduced cone attachment.
    let w = BraidWord::new(4, vec![-1, -2]).unwrap();
    let c = word_complex(&w);
    let f = right_mult_map(&c.complex, &loop_difference(3, 1), 2)
        .add(&left_mult_map(&c.complex, &loop_difference(3, 2), 2));
    let coev = trailing_coevaluation(&w, 1);
    let red = simplify(Arc::clone(&coev.tgt));
    let rho = shift_chain_map(&red.proj.compose(&coev), -2);
    assert!(rho.validate().is_ok());
    let h = null_homotopy(&f, &[&rho]).expect("constrained homotopy");
    assert!(homotopy_witnesses(&f, &h), "witness fails substitution");
    for t in f.src.degrees() {
        let ht = h.map(&f.src, &f.tgt, t);
        assert!(rho.map(t - 1).compose(&ht).is_zero(), "constraint violated at degree {t}");
    }
    println!(
        "criterion 5: PASS — homotopy with dh + hd = r + l and zero composite against the cone attachment, solver certificate"
    );
}

#[test]
fn criterion_6_polarity_governs_degree_and_vanishing() {
    // Degree law on the whole fixture corpus.
    let mut checked = 0usize;
    for f in load_fixtures() {
        for m in [&f.movie1, &f.movie2] {
            let inv = invariant(m).unwrap();
            assert_eq!(inv.shift, -2 * inv.p_minus as i64, "degree law in {}", f.name);
            checked += 1;
        }
    }
    // Degree law on random movies of mixed polarity.
    let mut rng = ChaCha8Rng::seed_from_u64(0xdeca_11);
    for _ in 0..100 {
        let start = random_word(3, rng.gen_range(0..=3), &mut rng);
        let m = random_movie(&start, rng.gen_range(1..=4), 6, false, &mut rng);
        let (_, p_minus) = m.polarity().unwrap();
        let inv = invariant(&m).unwrap();
        assert_eq!(inv.shift, -2 * p_minus as i64);
        checked += 1;
    }
    // Movies without negative branch points carry a unit certificate.
    let mut certified = 0usize;
    while certified < 50 {
        let start = random_word(3, rng.gen_range(0..=3), &mut rng);
        let m = random_movie(&start, rng.gen_range(1..=4), 6, true, &mut rng);
        let inv = invariant(&m).unwrap();
        assert_eq!(inv.p_minus, 0, "positive-only movie grew a negative branch point");
        let c = unit_coefficient(&inv).unwrap();
        assert!(c.abs().is_one(), "unit coefficient {c} is not a unit");
        certified += 1;
    }
    // Two negative births of the same letter compose to zero up to
    // homotopy, for both generators.
    for gen in 1..=2usize {
        let m = BraidMovie {
            start: BraidWord::empty(3),
            steps: vec![
                MovieStep::Birth { pos: 0, gen, sign: -1 },
                MovieStep::Birth { pos: 0, gen, sign: -1 },
            ],
        };
        let inv = invariant(&m).unwrap();
        assert_eq!(inv.shift, -4);
        assert!(is_null_homotopic(&inv.map), "double negative birth at generator {gen}");
    }
    println!(
        "criterion 6: PASS — degree -2p on {checked} movies, {certified} unit certificates, double negative births bound"
    );
}

#[test]
fn criterion_7_class_matrices_decategorify_the_construction() {
    // The generator matrices satisfy the group relations symbolically.
    for n in 1..=6usize {
        for i in 1..=n as i32 {
            let pos = burau_generator(n, i);
            let neg = burau_generator(n, -i);
            assert!(pos.mul(&neg).is_identity(), "inverse pair at n = {n}, i = {i}");
            assert!(neg.mul(&pos).is_identity(), "inverse pair at n = {n}, i = {i}");
        }
        for i in 1..n as i32 {
            let a = burau_generator(n, i);
            let b = burau_generator(n, i + 1);
            assert_eq!(
                a.mul(&b).mul(&a),
                b.mul(&a).mul(&b),
                "braid relation at n = {n}, i = {i}"
            );
        }
        for i in 1..=n as i32 {
            for j in (i + 2)..=n as i32 {
                let a = burau_generator(n, i);
                let b = burau_generator(n, j);
                assert_eq!(a.mul(&b), b.mul(&a), "distant pair at n = {n}, ({i}, {j})");
            }
        }
    }
    // The class of a word complex is the product of generator matrices,
    // and survives reduction unchanged.
    let mut rng = ChaCha8Rng::seed_from_u64(0xc1a_55);
    for _ in 0..50 {
        let n = rng.gen_range(1..=3usize);
        let w = random_word(n + 1, rng.gen_range(0..=4), &mut rng);
        let c = word_complex(&w);
        let class = k_class(&c.complex);
        assert_eq!(class, burau(&w), "class vs matrix product for {w}");
        let red = reduced_word_complex(&w);
        assert_eq!(class, k_class(&red.reduced), "class changed under reduction for {w}");
    }
    println!(
        "criterion 7: PASS — generator matrices satisfy all relations to n = 6, 50 random word classes match and survive reduction"
    );
}

#[test]
fn criterion_8_truncated_polynomial_certificates_and_semitriviality() {
    let start = Instant::now();
    let report = verify_rouquier_relations(3, 6);
    for c in &report.checks {
        assert!(c.pass, "failed: {}", c.name);
    }
    assert!(report.all_pass);
    // The coarse invariant vanishes exactly on negative branch points.
    let mut rng = ChaCha8Rng::seed_from_u64(0x5e_31);
    let mut zero_seen = false;
    let mut unit_seen = false;
    for _ in 0..40 {
        let start_word = random_word(3, rng.gen_range(0..=3), &mut rng);
        let m = random_movie(&start_word, rng.gen_range(0..=4), 6, false, &mut rng);
        let (_, p_minus) = m.polarity().unwrap();
        let got = semitrivial_invariant(&m).unwrap();
        if p_minus > 0 {
            assert_eq!(got, Semitrivial::Zero);
            zero_seen = true;
        } else {
            assert_eq!(got, Semitrivial::Unit { coefficient: 1 });
            unit_seen = true;
        }
    }
    assert!(zero_seen && unit_seen, "the sample failed to cover both outcomes");
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 120.0, "polynomial checks took {elapsed:?}");
    println!(
        "criterion 8: PASS — inverse cancellation, braid relation and -q class action certified degreewise to 6; coarse invariant vanishes exactly on negative branch points ({elapsed:?})"
    );
}
