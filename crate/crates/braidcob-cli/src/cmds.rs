//! Subcommand bodies.  Each assembles a `Report` and returns whether every
//! check passed; hard resource limits are reported as errors rather than
//! silently shrinking the run.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use anyhow::{bail, Context, Result};
use braidcob::bimod::{lattice, Kind, Module, Summand};
use braidcob::braid::{random_word, BraidMovie, BraidWord, MoveFixture};
use braidcob::complex::{ChainComplex, ChainMap, Homotopy};
use braidcob::decat::{burau, k_class};
use braidcob::equiv::{find_iso, homotopy_equivalent, total_matrix, Equiv};
use braidcob::functor::{
    invariant, reduced_word_complex, shift_reduction, unit_coefficient, verify_move,
    word_complex, CobordismInvariant, MoveVerdict,
};
use braidcob::homotopy::null_homotopy;
use braidcob::intmat::{IMat, Int};
use braidcob::rouquier::{graded_piece, piece_homology, verify_rouquier_relations, word_rcomplex};
use braidcob::zigzag::Ring;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::cache::cached_reduced;
use crate::report::{digest, digest_bytes, CheckRecord, Report};
use crate::serial;

fn chain_map_is_zero(f: &ChainMap) -> bool {
    f.maps.values().all(|m| m.is_zero())
}

pub fn relations(n: usize, max_word_len: usize, seed: u64, json: bool) -> Result<bool> {
    if n == 0 {
        bail!("need a ring index n >= 1");
    }
    if n > 4 {
        bail!("resource limit: n <= 4 (witness search grows exponentially); requested n = {n}");
    }
    if max_word_len > 6 {
        bail!("resource limit: --max-word-len <= 6; requested {max_word_len}");
    }
    let strands = n + 1;
    let mut report = Report::new("verify-braid-relations", Some(seed));

    // A letter composed with its inverse reduces to the diagonal bimodule.
    let diagonal: BTreeMap<i64, Vec<Summand>> =
        BTreeMap::from([(0, vec![Summand { kind: Kind::Diag, shift: 0 }])]);
    for i in 1..=n as i32 {
        for letters in [[i, -i], [-i, i]] {
            let word = BraidWord::new(strands, letters.to_vec())?;
            report.check(
                format!("complex of \"{word}\" reduces to the diagonal bimodule"),
                digest(&["cancellation", &word.to_string()]),
                || {
                    let ok = cached_reduced(&word).graded_type() == diagonal;
                    (ok, None, None)
                },
            );
        }
    }

    // The braid relation, with a chain-level witness verified by
    // substitution on both sides.
    let witnessed = |w1: &BraidWord, w2: &BraidWord| {
        let c1 = Arc::clone(&word_complex(w1).complex);
        let c2 = Arc::clone(&word_complex(w2).complex);
        match homotopy_equivalent(c1, c2, seed) {
            Equiv::Equivalent(w) => match w.verify() {
                Ok(()) => (true, None, Some("equivalence witness round-trips".into())),
                Err(e) => (false, None, Some(format!("witness fails verification: {e}"))),
            },
            Equiv::Distinct(m) => (false, None, Some(m)),
            Equiv::Unknown(m) => (false, None, Some(m)),
        }
    };
    for i in 1..n as i32 {
        let w1 = BraidWord::new(strands, vec![i, i + 1, i])?;
        let w2 = BraidWord::new(strands, vec![i + 1, i, i + 1])?;
        report.check(
            format!("braid relation: \"{w1}\" is equivalent to \"{w2}\""),
            digest(&["braid", &w1.to_string(), &w2.to_string(), &seed.to_string()]),
            || witnessed(&w1, &w2),
        );
    }

    // Distant letters commute.
    for i in 1..=n as i32 {
        for j in (i + 2)..=n as i32 {
            let w1 = BraidWord::new(strands, vec![i, j])?;
            let w2 = BraidWord::new(strands, vec![j, i])?;
            report.check(
                format!("distant commutation: \"{w1}\" is equivalent to \"{w2}\""),
                digest(&["distant", &w1.to_string(), &w2.to_string(), &seed.to_string()]),
                || witnessed(&w1, &w2),
            );
        }
    }

    // Random word pairs one relation apart: their reduced complexes must be
    // isomorphic, and the isomorphism is verified invertible.
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..4 {
        let len = rng.gen_range(0..=max_word_len);
        let base = random_word(strands, len, &mut rng);
        let pos = rng.gen_range(0..=base.len());
        let mut families = vec![0];
        if n >= 2 {
            families.push(1);
        }
        if n >= 3 {
            families.push(2);
        }
        let (ins1, ins2): (Vec<i32>, Vec<i32>) = match families[rng.gen_range(0..families.len())]
        {
            0 => {
                let i = rng.gen_range(1..=n as i32);
                (vec![], vec![i, -i])
            }
            1 => {
                let i = rng.gen_range(1..n as i32);
                (vec![i, i + 1, i], vec![i + 1, i, i + 1])
            }
            _ => {
                let i = rng.gen_range(1..=n as i32 - 2);
                let j = rng.gen_range(i + 2..=n as i32);
                (vec![i, j], vec![j, i])
            }
        };
        let splice = |ins: &[i32]| {
            let mut letters = base.letters().to_vec();
            letters.splice(pos..pos, ins.iter().copied());
            BraidWord::new(strands, letters).expect("spliced letters stay in range")
        };
        let (w1, w2) = (splice(&ins1), splice(&ins2));
        report.check(
            format!("random pair one relation apart: \"{w1}\" vs \"{w2}\""),
            digest(&["random-pair", &w1.to_string(), &w2.to_string(), &seed.to_string()]),
            || {
                let r1 = cached_reduced(&w1);
                let r2 = cached_reduced(&w2);
                match find_iso(&r1, &r2, seed) {
                    Some((f, g)) => {
                        let ok = chain_map_is_zero(&g.compose(&f).sub(&ChainMap::identity(&r1)))
                            && chain_map_is_zero(&f.compose(&g).sub(&ChainMap::identity(&r2)));
                        (ok, None, Some("reduced complexes are isomorphic".into()))
                    }
                    None => (false, None, Some("no isomorphism of reduced forms found".into())),
                }
            },
        );
    }

    Ok(report.emit(json))
}

/// Flat lattice indices (with internal degrees) of the basis elements of a
/// term whose right path ends at the vertex `j`: the image of the module
/// under right multiplication by the `j`-th idempotent.
fn column_indices(module: &Module, ring: &Ring, j: usize) -> Vec<(usize, i64)> {
    let mut out = Vec::new();
    let mut off = 0usize;
    for s in &module.summands {
        let lat = lattice(module.n, s.kind);
        for (idx, &(_, q)) in lat.pairs.iter().enumerate() {
            if ring.basis()[q].target() as usize == j {
                out.push((off + idx, lat.degs[idx] + s.shift));
            }
        }
        off += lat.rank;
    }
    out
}

/// Alternating-sum graded dimensions of the `j`-th column, counted
/// directly from the lattice bases.
fn column_dims(c: &ChainComplex, ring: &Ring, j: usize) -> BTreeMap<i64, Int> {
    let mut out: BTreeMap<i64, Int> = BTreeMap::new();
    for (&t, m) in &c.terms {
        let sign = if t.rem_euclid(2) == 1 { -Int::one() } else { Int::one() };
        for (_, d) in column_indices(m, ring, j) {
            *out.entry(d).or_default() += sign.clone();
        }
    }
    out.retain(|_, v| !v.is_zero());
    out
}

/// The same graded dimensions predicted by the class of the complex in the
/// projective basis.
fn class_column_dims(c: &ChainComplex, ring: &Ring, j: usize) -> BTreeMap<i64, Int> {
    let class = k_class(c);
    let mut out: BTreeMap<i64, Int> = BTreeMap::new();
    for i in 0..class.size() {
        for (k, coeff) in class.at(i, j - 1).terms() {
            for p in ring.basis() {
                if p.target() as usize == i + 1 {
                    *out.entry(k + p.degree()).or_default() += coeff.clone();
                }
            }
        }
    }
    out.retain(|_, v| !v.is_zero());
    out
}

fn homotopy_value(h: &Homotopy) -> Value {
    let degrees: Vec<Value> = h
        .maps
        .iter()
        .filter(|(_, m)| !m.is_zero())
        .map(|(&t, m)| json!({ "t": t, "matrix": serial::matrix_value(&total_matrix(m)) }))
        .collect();
    json!({ "degrees": degrees })
}

fn column_payload(inv: &CobordismInvariant, ring: &Ring, j: usize) -> Value {
    let mut degrees = Vec::new();
    for (&t, f) in &inv.map.maps {
        let cols = column_indices(&f.src, ring, j);
        let rows = column_indices(&f.tgt, ring, j);
        if cols.is_empty() || rows.is_empty() {
            continue;
        }
        let total = total_matrix(f);
        let sub = IMat::from_fn(rows.len(), cols.len(), |r, c| {
            total.at(rows[r].0, cols[c].0).clone()
        });
        if sub.is_zero() {
            continue;
        }
        degrees.push(json!({
            "t": t,
            "src_degrees": cols.iter().map(|&(_, d)| d).collect::<Vec<_>>(),
            "tgt_degrees": rows.iter().map(|&(_, d)| d).collect::<Vec<_>>(),
            "matrix": serial::matrix_value(&sub),
        }));
    }
    json!({ "vertex": j, "degrees": degrees })
}

pub fn invariant_cmd(path: &Path, apply_to_module: Option<usize>, json: bool) -> Result<bool> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading movie file {}", path.display()))?;
    let movie = BraidMovie::from_json(&text)
        .with_context(|| format!("parsing movie file {}", path.display()))?;
    let inv = invariant(&movie).context("computing the invariant")?;
    let movie_digest = digest_bytes(text.as_bytes());
    let mut report = Report::new("invariant", None);

    report.check(
        "internal degree equals minus twice the negative branch point count",
        digest(&["degree", &movie_digest]),
        || {
            let ok = inv.shift == -2 * (inv.p_minus as i64);
            let w = format!(
                "degree {}, polarity ({}, {})",
                inv.shift, inv.p_plus, inv.p_minus
            );
            (ok, None, Some(w))
        },
    );
    report.check(
        "the invariant commutes with the differentials",
        digest(&["chain-map", &movie_digest]),
        || (inv.map.validate().is_ok(), None, None),
    );
    if movie.steps.is_empty() {
        report.check(
            "the identity movie yields the identity map",
            digest(&["identity", &movie_digest]),
            || {
                let id = ChainMap::identity(&inv.map.src);
                (chain_map_is_zero(&inv.map.sub(&id)), Some(1), None)
            },
        );
    }

    let mut reduced_h: Option<Homotopy> = None;
    if inv.p_minus == 0 {
        report.check(
            "unit coefficient certifies nonvanishing",
            digest(&["unit-coefficient", &movie_digest]),
            || match unit_coefficient(&inv) {
                Ok(c) => {
                    let sign = if c.is_positive() { 1 } else { -1 };
                    (c.abs().is_one(), Some(sign), Some(format!("unit coefficient {c}")))
                }
                Err(e) => (false, None, Some(e)),
            },
        );
    } else {
        // With negative branch points present the invariant may or may not
        // die; report which, and keep the witness when it does.
        let rs = reduced_word_complex(&inv.start);
        let rt = shift_reduction(&reduced_word_complex(&inv.end), inv.shift);
        let f_red = rt.proj.compose(&inv.map).compose(&rs.incl);
        reduced_h = null_homotopy(&f_red, &[]);
        report.check(
            "null-homotopy search on the reduced invariant",
            digest(&["null-homotopy", &movie_digest]),
            || match &reduced_h {
                Some(_) => {
                    (true, None, Some("null-homotopic; witness in the payload".into()))
                }
                None => (true, None, Some("not null-homotopic".into())),
            },
        );
    }

    let mut payload = json!({
        "start": inv.start.to_string(),
        "end": inv.end.to_string(),
        "p_plus": inv.p_plus,
        "p_minus": inv.p_minus,
        "degree": inv.shift,
        "map": serial::chain_map_value(&inv.map),
    });
    if let Some(h) = &reduced_h {
        payload["reduced_null_homotopy"] = homotopy_value(h);
    }

    if let Some(j) = apply_to_module {
        let verts = movie.strands() - 1;
        if j == 0 || j > verts {
            bail!("--apply-to-module takes a vertex index in 1..={verts}, got {j}");
        }
        let ring = Ring::new(verts);
        payload["column"] = column_payload(&inv, &ring, j);
        report.check(
            format!("projective column {j} dimensions match the decategorified class"),
            digest(&["column", &j.to_string(), &movie_digest]),
            || {
                let ok = [&inv.map.src, &inv.map.tgt].iter().all(|c| {
                    column_dims(c, &ring, j) == class_column_dims(c, &ring, j)
                });
                (ok, None, None)
            },
        );
    }

    report.payload = Some(payload);
    Ok(report.emit(json))
}

pub fn moves(dir: &Path, json: bool) -> Result<bool> {
    let mut files: Vec<PathBuf> = std::fs::read_dir(dir)
        .with_context(|| format!("reading fixture directory {}", dir.display()))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    files.sort();
    if files.is_empty() {
        bail!("no fixture files in {}", dir.display());
    }
    let fixtures: Vec<(String, MoveFixture)> = files
        .iter()
        .map(|p| {
            let text = std::fs::read_to_string(p)
                .with_context(|| format!("reading fixture {}", p.display()))?;
            let f = MoveFixture::from_json(&text)
                .with_context(|| format!("parsing fixture {}", p.display()))?;
            Ok((digest_bytes(text.as_bytes()), f))
        })
        .collect::<Result<_>>()?;

    // Fixtures verify in parallel; records assemble in file order.
    let results: Vec<CheckRecord> = fixtures
        .par_iter()
        .map(|(inputs, f)| {
            let start = std::time::Instant::now();
            let (ok, sign, witness) = match verify_move(&f.movie1, &f.movie2) {
                Ok(MoveVerdict::Sign(s)) => match f.expected_sign {
                    Some(e) if e != s => {
                        (false, Some(s), Some(format!("sign {s:+} but the catalog pins {e:+}")))
                    }
                    _ => (true, Some(s), Some("invariants agree up to the recorded sign".into())),
                },
                Ok(MoveVerdict::Inequivalent(m)) => (false, None, Some(m)),
                Ok(MoveVerdict::Undecided(m)) => (false, None, Some(format!("undecided: {m}"))),
                Err(e) => (false, None, Some(e.to_string())),
            };
            CheckRecord {
                name: f.name.clone(),
                inputs: inputs.clone(),
                verdict: if ok { "pass" } else { "fail" },
                sign,
                witness,
                elapsed: start.elapsed().as_secs_f64(),
            }
        })
        .collect();

    let mut report = Report::new("movie-moves", None);
    for r in results {
        report.push(r);
    }
    Ok(report.emit(json))
}

pub fn burau_cmd(word: &str, json: bool) -> Result<bool> {
    let w: BraidWord = word.parse().map_err(|e| anyhow::anyhow!("parsing the word: {e}"))?;
    let m = burau(&w);
    let mut report = Report::new("burau", None);
    report.check(
        "the matrix is invertible over the Laurent ring",
        digest(&["burau", &w.to_string()]),
        || {
            let d = m.det();
            let unit = d.terms().count() == 1 && d.terms().all(|(_, c)| c.abs().is_one());
            (unit, None, Some(format!("det = {d}")))
        },
    );
    report.payload = Some(json!({
        "word": w.to_string(),
        "strands": w.strands(),
        "size": m.size(),
        "identity": m.is_identity(),
        "matrix": m,
    }));
    if !json {
        for i in 0..m.size() {
            let row: Vec<String> = (0..m.size()).map(|j| m.at(i, j).to_string()).collect();
            println!("  [ {} ]", row.join(" | "));
        }
    }
    Ok(report.emit(json))
}

fn homology_value(h: &BTreeMap<i64, (usize, Vec<Int>)>) -> Value {
    let rows: Vec<Value> = h
        .iter()
        .map(|(&t, (free, torsion))| {
            json!({
                "t": t,
                "free": free,
                "torsion": torsion.iter().map(|d| d.to_string()).collect::<Vec<_>>(),
            })
        })
        .collect();
    Value::Array(rows)
}

/// Degreewise homology comparison of the complexes of two letter words,
/// every graded piece through the truncation degree.
fn pair_certificate(strands: usize, name: &str, l1: &[i32], l2: &[i32], dmax: i64) -> Value {
    let c1 = word_rcomplex(strands, l1);
    let c2 = word_rcomplex(strands, l2);
    let dmin = c1.min_basis_degree().min(c2.min_basis_degree());
    let degrees: Vec<Value> = (dmin..=dmax)
        .map(|d| {
            let h1 = piece_homology(&graded_piece(&c1, d));
            let h2 = piece_homology(&graded_piece(&c2, d));
            json!({
                "d": d,
                "match": h1 == h2,
                "lhs": homology_value(&h1),
                "rhs": homology_value(&h2),
            })
        })
        .collect();
    json!({ "relation": name, "lhs_word": l1, "rhs_word": l2, "degrees": degrees })
}

pub fn rouquier_cmd(strands: usize, degree: i64, json: bool) -> Result<bool> {
    if !(2..=4).contains(&strands) {
        bail!("resource limit: strands in 2..=4 (graded pieces grow quickly); requested {strands}");
    }
    if !(0..=8).contains(&degree) {
        bail!("resource limit: --degree in 0..=8; requested {degree}");
    }
    let mut report = Report::new("rouquier", None);
    let summary = verify_rouquier_relations(strands, degree);
    for c in &summary.checks {
        report.check(
            c.name.clone(),
            digest(&["rouquier", &strands.to_string(), &degree.to_string(), &c.name]),
            || (c.pass, None, None),
        );
    }

    let nv = strands - 1;
    let mut pairs: Vec<(String, Vec<i32>, Vec<i32>)> = Vec::new();
    for i in 1..=nv as i32 {
        pairs.push((format!("letter {i} times its inverse vs the unit"), vec![i, -i], vec![]));
        pairs.push((
            format!("inverse letter {i} times the letter vs the unit"),
            vec![-i, i],
            vec![],
        ));
    }
    for i in 1..nv as i32 {
        pairs.push((
            format!("braid relation at letters {i}, {}", i + 1),
            vec![i, i + 1, i],
            vec![i + 1, i, i + 1],
        ));
    }
    for i in 1..=nv as i32 {
        for j in (i + 2)..=nv as i32 {
            pairs.push((format!("distant letters {i}, {j}"), vec![i, j], vec![j, i]));
        }
    }
    let certificates: Vec<Value> = pairs
        .iter()
        .map(|(name, l1, l2)| pair_certificate(strands, name, l1, l2, degree))
        .collect();
    report.payload = Some(json!({
        "strands": strands,
        "max_degree": degree,
        "certificates": certificates,
    }));
    Ok(report.emit(json))
}
