//! JSON instance files: `{"name", "n", "vertices", "facets", "lambda"}`.
//!
//! `lambda` holds `n` rows of length `m = |vertices|` with 0/1 entries.
//! Emission is canonical (facets sorted, one facet or row per line), so
//! parsing an emitted file gives back the identical instance.

use serde::Deserialize;

use crate::charmap::CharacteristicMatrix;
use crate::error::{Error, Result};
use crate::gf2::BitMatrix;
use crate::simplicial::SimplicialComplex;

#[derive(Clone, Debug, PartialEq, Eq, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawInstance {
    #[serde(default)]
    name: String,
    n: Option<usize>,
    vertices: Vec<u32>,
    facets: Vec<Vec<u32>>,
    lambda: Option<Vec<Vec<u8>>>,
}

/// A named, validated pair `(K, Λ)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Instance {
    pub name: String,
    pub complex: SimplicialComplex,
    pub lambda: CharacteristicMatrix,
}

fn parse_error(e: serde_json::Error) -> Error {
    // serde appends its own " at line L column C"; the location is reported separately
    let message = e.to_string();
    let suffix = format!(" at line {} column {}", e.line(), e.column());
    Error::Parse {
        line: e.line(),
        column: e.column(),
        message: message.strip_suffix(&suffix).unwrap_or(&message).to_string(),
    }
}

fn read(text: &str) -> Result<RawInstance> {
    serde_json::from_str(text).map_err(parse_error)
}

/// Reads only the complex; `n` and `lambda` may be absent.
pub fn parse_complex(text: &str) -> Result<(String, SimplicialComplex)> {
    let raw = read(text)?;
    let k = SimplicialComplex::from_facets(&raw.vertices, &raw.facets)?;
    Ok((raw.name, k))
}

pub fn parse_instance(text: &str) -> Result<Instance> {
    let raw = read(text)?;
    let complex = SimplicialComplex::from_facets(&raw.vertices, &raw.facets)?;
    let rows = raw
        .lambda
        .ok_or_else(|| Error::Semantic("missing field `lambda`".into()))?;
    let n = raw.n.ok_or_else(|| Error::Semantic("missing field `n`".into()))?;
    if rows.len() != n {
        return Err(Error::Semantic(format!(
            "`n` is {n} but lambda has {} rows",
            rows.len()
        )));
    }
    let m = raw.vertices.len();
    for (r, row) in rows.iter().enumerate() {
        if row.len() != m {
            return Err(Error::Semantic(format!(
                "lambda row {} has {} entries, expected one per vertex ({m})",
                r + 1,
                row.len()
            )));
        }
        if let Some((c, &v)) = row.iter().enumerate().find(|(_, &v)| v > 1) {
            return Err(Error::Semantic(format!(
                "lambda entry at row {}, column {} (vertex {}) is {v}, expected 0 or 1",
                r + 1,
                c + 1,
                raw.vertices[c]
            )));
        }
    }
    if complex.dim() + 1 != n as i32 {
        return Err(Error::Semantic(format!(
            "complex has dimension {}, so `n` must be {}",
            complex.dim(),
            complex.dim() + 1
        )));
    }
    let matrix = if n == 0 {
        BitMatrix::zeros(0, m)
    } else {
        BitMatrix::from_u8_rows(&rows)?
    };
    let lambda = CharacteristicMatrix::validate(&complex, &matrix)?;
    Ok(Instance {
        name: raw.name,
        complex,
        lambda,
    })
}

fn join<T: ToString>(items: impl IntoIterator<Item = T>) -> String {
    items
        .into_iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(", ")
}

fn emit_lines(lines: &[String]) -> String {
    if lines.is_empty() {
        return "[]".into();
    }
    format!("[\n    {}\n  ]", lines.join(",\n    "))
}

/// Canonical JSON for a complex and optional characteristic matrix.
fn emit(name: &str, k: &SimplicialComplex, lambda: Option<&CharacteristicMatrix>) -> String {
    let facets: Vec<String> = k
        .facets()
        .iter()
        .map(|f| format!("[{}]", join(f)))
        .collect();
    let mut out = String::from("{\n");
    out += &format!("  \"name\": {},\n", serde_json::Value::from(name));
    if let Some(l) = lambda {
        out += &format!("  \"n\": {},\n", l.n());
    }
    out += &format!("  \"vertices\": [{}],\n", join(k.labels()));
    out += &format!("  \"facets\": {}", emit_lines(&facets));
    if let Some(l) = lambda {
        let rows: Vec<String> = l
            .matrix()
            .rows()
            .iter()
            .map(|r| format!("[{}]", join(r.to_bits())))
            .collect();
        out += &format!(",\n  \"lambda\": {}", emit_lines(&rows));
    }
    out += "\n}\n";
    out
}

pub fn emit_instance(instance: &Instance) -> String {
    emit(&instance.name, &instance.complex, Some(&instance.lambda))
}

pub fn emit_complex(name: &str, k: &SimplicialComplex) -> String {
    emit(name, k, None)
}

/// A facet order: a JSON array of facets.
pub fn parse_order(text: &str) -> Result<Vec<Vec<u32>>> {
    serde_json::from_str(text).map_err(parse_error)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::charmap::lambda_boundary_simplex;

    const RP2: &str = r#"{
  "name": "rp2",
  "n": 2,
  "vertices": [1, 2, 3],
  "facets": [
    [1, 2],
    [1, 3],
    [2, 3]
  ],
  "lambda": [
    [1, 0, 1],
    [0, 1, 1]
  ]
}
"#;

    #[test]
    fn round_trip() {
        let inst = parse_instance(RP2).unwrap();
        assert_eq!(inst.lambda, lambda_boundary_simplex(2));
        assert_eq!(emit_instance(&inst), RP2);
    }

    #[test]
    fn syntax_error_is_located() {
        match parse_instance("{\n  \"name\": \"x\",\n  \"n\": ]\n}") {
            Err(Error::Parse { line, column, .. }) => assert_eq!((line, column), (3, 8)),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn bad_entries_are_semantic_errors() {
        let text = RP2.replace("[0, 1, 1]", "[0, 2, 1]");
        assert!(matches!(parse_instance(&text), Err(Error::Semantic(_))));
        let text = RP2.replace("[0, 1, 1]", "[0, 1, 0]");
        match parse_instance(&text) {
            Err(Error::DependentFacet { facet }) => assert_eq!(facet, vec![1, 3]),
            other => panic!("unexpected {other:?}"),
        }
        let text = RP2.replace("\"n\": 2", "\"n\": 3");
        assert!(matches!(parse_instance(&text), Err(Error::Semantic(_))));
    }

    #[test]
    fn complex_only() {
        let (name, k) = parse_complex(r#"{"name": "k", "vertices": [1, 2], "facets": [[1], [2]]}"#)
            .unwrap();
        assert_eq!(name, "k");
        assert_eq!(k.facets(), vec![vec![1], vec![2]]);
        assert_eq!(parse_order("[[1, 2], [2, 3]]").unwrap(), vec![vec![1, 2], vec![2, 3]]);
    }
}
