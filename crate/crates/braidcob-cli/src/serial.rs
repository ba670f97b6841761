//! JSON forms for complexes and chain maps.  Matrices are written as
//! decimal-string grids so arbitrarily large integers survive the trip.

use std::collections::BTreeMap;
use std::sync::Arc;

use braidcob::bimod::{lattice, Kind, Module, Morphism, Summand};
use braidcob::complex::{ChainComplex, ChainMap};
use braidcob::equiv::total_matrix;
use braidcob::intmat::{IMat, Int};
use serde_json::{json, Value};

fn summand_value(s: &Summand) -> Value {
    match s.kind {
        Kind::Diag => json!({ "kind": "diag", "shift": s.shift }),
        Kind::Tensor(a, b) => json!({ "kind": "tensor", "a": a, "b": b, "shift": s.shift }),
    }
}

fn summand_from_value(v: &Value) -> Option<Summand> {
    let shift = v.get("shift")?.as_i64()?;
    let kind = match v.get("kind")?.as_str()? {
        "diag" => Kind::Diag,
        "tensor" => {
            let a = u8::try_from(v.get("a")?.as_u64()?).ok()?;
            let b = u8::try_from(v.get("b")?.as_u64()?).ok()?;
            Kind::Tensor(a, b)
        }
        _ => return None,
    };
    Some(Summand { kind, shift })
}

fn module_value(m: &Module) -> Value {
    Value::Array(m.summands.iter().map(summand_value).collect())
}

fn module_from_value(n: usize, v: &Value) -> Option<Module> {
    let summands = v.as_array()?.iter().map(summand_from_value).collect::<Option<Vec<_>>>()?;
    Some(Module { n, summands })
}

pub fn matrix_value(m: &IMat) -> Value {
    let entries: Vec<Vec<String>> = (0..m.rows())
        .map(|r| (0..m.cols()).map(|c| m.at(r, c).to_string()).collect())
        .collect();
    json!({ "rows": m.rows(), "cols": m.cols(), "entries": entries })
}

fn matrix_from_value(v: &Value) -> Option<IMat> {
    let rows = v.get("rows")?.as_u64()? as usize;
    let cols = v.get("cols")?.as_u64()? as usize;
    let entries = v.get("entries")?.as_array()?;
    if entries.len() != rows {
        return None;
    }
    let mut parsed: Vec<Vec<Int>> = Vec::with_capacity(rows);
    for row in entries {
        let row = row.as_array()?;
        if row.len() != cols {
            return None;
        }
        let row: Option<Vec<Int>> =
            row.iter().map(|e| e.as_str()?.parse::<Int>().ok()).collect();
        parsed.push(row?);
    }
    Some(IMat::from_fn(rows, cols, |r, c| parsed[r][c].clone()))
}

fn summand_offsets(m: &Module) -> Vec<usize> {
    let mut offs = vec![0];
    for s in &m.summands {
        offs.push(offs.last().unwrap() + lattice(m.n, s.kind).rank);
    }
    offs
}

/// Splits a flat lattice matrix back into per-summand blocks.
fn morphism_from_total(src: &Module, tgt: &Module, total: &IMat) -> Option<Morphism> {
    let so = summand_offsets(src);
    let to = summand_offsets(tgt);
    if total.rows() != *to.last().unwrap() || total.cols() != *so.last().unwrap() {
        return None;
    }
    let mut f = Morphism::zero(src.clone(), tgt.clone());
    for ti in 0..tgt.summands.len() {
        for si in 0..src.summands.len() {
            let block = IMat::from_fn(to[ti + 1] - to[ti], so[si + 1] - so[si], |r, c| {
                total.at(to[ti] + r, so[si] + c).clone()
            });
            if !block.is_zero() {
                f.set_block(ti, si, block);
            }
        }
    }
    Some(f)
}

pub fn complex_value(c: &ChainComplex) -> Value {
    let terms: Vec<Value> = c
        .terms
        .iter()
        .filter(|(_, m)| !m.is_zero())
        .map(|(&t, m)| json!({ "t": t, "summands": module_value(m) }))
        .collect();
    let diffs: Vec<Value> = c
        .diff
        .iter()
        .filter(|(_, d)| !d.is_zero())
        .map(|(&t, d)| json!({ "t": t, "matrix": matrix_value(&total_matrix(d)) }))
        .collect();
    json!({ "n": c.n, "terms": terms, "diffs": diffs })
}

pub fn complex_from_value(v: &Value) -> Option<ChainComplex> {
    let n = v.get("n")?.as_u64()? as usize;
    let mut terms: BTreeMap<i64, Module> = BTreeMap::new();
    for tv in v.get("terms")?.as_array()? {
        let t = tv.get("t")?.as_i64()?;
        terms.insert(t, module_from_value(n, tv.get("summands")?)?);
    }
    let lookup = |t: i64| terms.get(&t).cloned().unwrap_or_else(|| Module::zero(n));
    let mut diff: BTreeMap<i64, Morphism> = BTreeMap::new();
    for dv in v.get("diffs")?.as_array()? {
        let t = dv.get("t")?.as_i64()?;
        let m = matrix_from_value(dv.get("matrix")?)?;
        diff.insert(t, morphism_from_total(&lookup(t), &lookup(t + 1), &m)?);
    }
    Some(ChainComplex { n, terms, diff })
}

/// Per-degree flat matrices of a chain map, with the summand labels of
/// both ends.
pub fn chain_map_value(f: &ChainMap) -> Value {
    let labels = |m: &Module| -> Vec<String> {
        m.summands.iter().map(|s| s.to_string()).collect()
    };
    let degrees: Vec<Value> = f
        .maps
        .iter()
        .filter(|(_, m)| !m.is_zero())
        .map(|(&t, m)| {
            json!({
                "t": t,
                "src": labels(&m.src),
                "tgt": labels(&m.tgt),
                "matrix": matrix_value(&total_matrix(m)),
            })
        })
        .collect();
    json!({ "degrees": degrees })
}

/// Round-trip guard used by the cache: a parsed complex must validate and
/// agree with the stored ring index.
pub fn parse_cached_complex(text: &str, n: usize) -> Option<Arc<ChainComplex>> {
    let v: Value = serde_json::from_str(text).ok()?;
    let c = complex_from_value(&v)?;
    if c.n != n || c.validate().is_err() {
        return None;
    }
    Some(Arc::new(c))
}
