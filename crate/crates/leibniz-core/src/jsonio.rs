//! JSON interchange for tables, series profiles, and derivation spaces.
//!
//! Table schema: `{"dim": n, "labels": [...], "table": [{"i", "j", "k",
//! "c"}, ...]}` with 1-based indices and scalar-grammar coefficients;
//! absent triples are zero.

use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::algebra::AlgebraTable;
use crate::linalg::Matrix;
use crate::scalar::parse_scalar;
use crate::structure::{DerivationSpace, SeriesProfile};
use crate::Error;

#[derive(Serialize, Deserialize)]
struct TableEntry {
    i: usize,
    j: usize,
    k: usize,
    c: String,
}

#[derive(Serialize, Deserialize)]
struct TableDoc {
    dim: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    labels: Option<Vec<String>>,
    table: Vec<TableEntry>,
}

pub fn table_to_json(a: &AlgebraTable) -> serde_json::Value {
    let doc = TableDoc {
        dim: a.dim(),
        labels: a.labels().map(|l| l.to_vec()),
        table: a
            .entries()
            .map(|(i, j, k, c)| TableEntry { i: i + 1, j: j + 1, k: k + 1, c: c.to_string() })
            .collect(),
    };
    serde_json::to_value(doc).unwrap()
}

pub fn table_from_json(v: &serde_json::Value) -> Result<AlgebraTable, Error> {
    let doc: TableDoc =
        serde_json::from_value(v.clone()).map_err(|e| Error::Parse(format!("table JSON: {}", e)))?;
    if doc.dim == 0 {
        return Err(Error::Parse("table dimension must be at least 1".into()));
    }
    let mut t = AlgebraTable::new(doc.dim);
    if let Some(labels) = doc.labels {
        if labels.len() != doc.dim {
            return Err(Error::Parse("labels length must match dim".into()));
        }
        t = t.with_labels(labels);
    }
    for e in doc.table {
        if e.i == 0 || e.j == 0 || e.k == 0 || e.i > doc.dim || e.j > doc.dim || e.k > doc.dim {
            return Err(Error::Parse(format!("index out of range in entry ({},{},{})", e.i, e.j, e.k)));
        }
        let c = parse_scalar(&e.c)?;
        t.set(e.i - 1, e.j - 1, e.k - 1, c);
    }
    Ok(t)
}

pub fn parse_table_str(s: &str) -> Result<AlgebraTable, Error> {
    let v: serde_json::Value =
        serde_json::from_str(s).map_err(|e| Error::Parse(format!("JSON: {}", e)))?;
    table_from_json(&v)
}

/// `{"dims": [...], "index": n}` with `"infinite"` for series that
/// stabilize above zero.
pub fn series_to_json(p: &SeriesProfile) -> serde_json::Value {
    let index = match p.index {
        Some(n) => json!(n),
        None => json!("infinite"),
    };
    json!({"dims": p.dims, "index": index})
}

/// `{"dim": k, "basis": [[row-major scalars]]}`.
pub fn derivations_to_json(d: &DerivationSpace) -> serde_json::Value {
    let basis: Vec<Vec<String>> = d
        .basis
        .iter()
        .map(|m| {
            let mut flat = Vec::with_capacity(d.algebra_dim * d.algebra_dim);
            for i in 0..d.algebra_dim {
                for j in 0..d.algebra_dim {
                    flat.push(m.get(i, j).to_string());
                }
            }
            flat
        })
        .collect();
    json!({"dim": d.dim(), "basis": basis})
}

pub fn matrix_from_rows_json(v: &serde_json::Value) -> Result<Matrix, Error> {
    let rows: Vec<Vec<String>> =
        serde_json::from_value(v.clone()).map_err(|e| Error::Parse(format!("matrix JSON: {}", e)))?;
    let parsed = rows
        .into_iter()
        .map(|r| r.into_iter().map(|s| parse_scalar(&s)).collect::<Result<Vec<_>, _>>())
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Matrix::from_rows(parsed))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_round_trip() {
        let t = crate::catalog::instantiate("L2", &Default::default()).unwrap();
        let v = table_to_json(&t);
        let back = table_from_json(&v).unwrap();
        assert_eq!(t, back);
        assert_eq!(v["dim"], 4);
    }

    #[test]
    fn series_json_shapes() {
        let p = crate::structure::lower_central_series(
            &crate::catalog::instantiate("mu1", &Default::default()).unwrap(),
        );
        assert_eq!(series_to_json(&p), serde_json::json!({"dims": [2, 1, 0], "index": 3}));
        let d = crate::structure::derived_series(
            &crate::catalog::instantiate("sl2c", &Default::default()).unwrap(),
        );
        assert_eq!(series_to_json(&d)["index"], serde_json::json!("infinite"));
    }

    #[test]
    fn rejects_bad_tables() {
        assert!(parse_table_str("{\"dim\":0,\"table\":[]}").is_err());
        assert!(parse_table_str("{\"dim\":2,\"table\":[{\"i\":3,\"j\":1,\"k\":1,\"c\":\"1\"}]}").is_err());
        assert!(parse_table_str("{\"dim\":2,\"table\":[{\"i\":1,\"j\":1,\"k\":1,\"c\":\"1/0\"}]}").is_err());
    }
}
