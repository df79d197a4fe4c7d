//! Matrix files and element literals.
//!
//! A matrix file is either JSON (`[[2,1],[1,1]]` or `{"label": .., "matrix": ..}`)
//! or whitespace-separated rows, one per line, with `#` comments. The format is
//! chosen by the first non-whitespace byte.

use std::fs;
use std::io::Read;
use std::path::Path;

use num_bigint::BigInt;
use serde_json::Value;
use sha2::{Digest, Sha256};

use sftdim::{
    AdjacencyMatrix, CylinderK0Element, CylinderK1Element, HomoclinicElement, IntMatrix, Sft,
    SftError, StableElement, StableHom, UnstableElement,
};

use crate::CliError;

pub struct MatrixInput {
    pub label: Option<String>,
    pub adj: AdjacencyMatrix,
}

impl MatrixInput {
    /// SHA-256 of the compact JSON rows, e.g. `[[1,1],[1,0]]`.
    pub fn sha256(&self) -> String {
        let canonical = serde_json::to_string(self.adj.matrix()).expect("matrix serializes");
        format!("{:x}", Sha256::digest(canonical.as_bytes()))
    }
}

fn read_source(path: &Path) -> Result<String, CliError> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| CliError::Validation(format!("stdin: {e}")))?;
        return Ok(s);
    }
    fs::read_to_string(path).map_err(|e| CliError::Validation(format!("{}: {e}", path.display())))
}

pub fn read_matrix(path: &Path) -> Result<MatrixInput, CliError> {
    let text = read_source(path)?;
    parse_matrix(&text).map_err(|e| match e {
        CliError::Validation(m) => CliError::Validation(format!("{}: {m}", path.display())),
        other => other,
    })
}

pub fn parse_matrix(text: &str) -> Result<MatrixInput, CliError> {
    match text.trim_start().as_bytes().first() {
        Some(b'[') | Some(b'{') => parse_json_matrix(text),
        _ => parse_text_matrix(text),
    }
}

fn invalid(msg: impl Into<String>) -> CliError {
    CliError::Validation(msg.into())
}

fn parse_text_matrix(text: &str) -> Result<MatrixInput, CliError> {
    let mut rows = Vec::new();
    let mut lines = Vec::new();
    for (ln, raw) in text.lines().enumerate() {
        let body = raw.split('#').next().unwrap_or("");
        let tokens: Vec<&str> = body
            .split(|c: char| c.is_whitespace() || c == ',')
            .filter(|t| !t.is_empty())
            .collect();
        if tokens.is_empty() {
            continue;
        }
        let mut row = Vec::with_capacity(tokens.len());
        for (j, tok) in tokens.iter().enumerate() {
            let v: BigInt = tok.parse().map_err(|_| {
                invalid(format!(
                    "line {}, entry {}: '{tok}' is not an integer",
                    ln + 1,
                    j + 1
                ))
            })?;
            row.push(v);
        }
        rows.push(row);
        lines.push(ln + 1);
    }
    let adj = validate(&rows, |r| format!("line {}", lines[r]))?;
    Ok(MatrixInput { label: None, adj })
}

fn json_int(v: &Value, at: impl Fn() -> String) -> Result<BigInt, CliError> {
    match v {
        Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                Ok(BigInt::from(i))
            } else if let Some(u) = n.as_u64() {
                Ok(BigInt::from(u))
            } else {
                Err(invalid(format!("{}: {n} is not an integer", at())))
            }
        }
        Value::String(s) => s
            .trim()
            .parse()
            .map_err(|_| invalid(format!("{}: '{s}' is not an integer", at()))),
        other => Err(invalid(format!(
            "{}: expected an integer, found {other}",
            at()
        ))),
    }
}

fn json_rows(v: &Value, what: &str) -> Result<Vec<Vec<BigInt>>, CliError> {
    let rows = v
        .as_array()
        .ok_or_else(|| invalid(format!("{what}: expected a list of rows")))?;
    rows.iter()
        .enumerate()
        .map(|(i, row)| {
            let row = row
                .as_array()
                .ok_or_else(|| invalid(format!("{what} row {}: expected a list", i + 1)))?;
            row.iter()
                .enumerate()
                .map(|(j, x)| json_int(x, || format!("{what} row {}, entry {}", i + 1, j + 1)))
                .collect()
        })
        .collect()
}

fn parse_json(text: &str) -> Result<Value, CliError> {
    serde_json::from_str(text)
        .map_err(|e| invalid(format!("line {}, column {}: {e}", e.line(), e.column())))
}

fn parse_json_matrix(text: &str) -> Result<MatrixInput, CliError> {
    let v = parse_json(text)?;
    let (label, m) = match &v {
        Value::Object(o) => {
            let label = match o.get("label") {
                None | Some(Value::Null) => None,
                Some(Value::String(s)) => Some(s.clone()),
                Some(other) => {
                    return Err(invalid(format!("label: expected a string, found {other}")))
                }
            };
            let m = o
                .get("matrix")
                .ok_or_else(|| invalid("missing \"matrix\" field"))?;
            (label, m)
        }
        _ => (None, &v),
    };
    let rows = json_rows(m, "matrix")?;
    let adj = validate(&rows, |r| format!("row {}", r + 1))?;
    Ok(MatrixInput { label, adj })
}

/// Builds the adjacency matrix, locating errors with `row_at(row_index)`.
fn validate(
    rows: &[Vec<BigInt>],
    row_at: impl Fn(usize) -> String,
) -> Result<AdjacencyMatrix, CliError> {
    AdjacencyMatrix::from_rows(rows).map_err(|e| match e {
        SftError::NonSquare { row, len, expected } => invalid(format!(
            "{}: row has {len} entries, expected {expected} (matrix must be square)",
            row_at(row)
        )),
        SftError::NegativeEntry { row, col } => invalid(format!(
            "{}, entry {}: negative entry",
            row_at(row),
            col + 1
        )),
        SftError::ZeroRowOrColumn { line, index } => match line {
            sftdim::error::Line::Row => invalid(format!(
                "{}: zero row (vertex {} is a sink)",
                row_at(index),
                index + 1
            )),
            sftdim::error::Line::Column => invalid(format!(
                "column {}: zero column (vertex {} is a source)",
                index + 1,
                index + 1
            )),
        },
        other => invalid(other.to_string()),
    })
}

/// A parsed element literal.
#[derive(Clone, Debug)]
pub enum Element {
    S(StableElement),
    U(UnstableElement),
    H(HomoclinicElement),
    K0(CylinderK0Element),
    K1(CylinderK1Element),
    Hom(StableHom),
}

impl Element {
    pub fn flavor(&self) -> &'static str {
        match self {
            Element::S(_) => "s",
            Element::U(_) => "u",
            Element::H(_) => "h",
            Element::K0(_) => "k0",
            Element::K1(_) => "k1",
            Element::Hom(_) => "hom",
        }
    }

    pub fn to_json(&self) -> Value {
        let v = match self {
            Element::S(x) => serde_json::to_value(x),
            Element::U(x) => serde_json::to_value(x),
            Element::H(x) => serde_json::to_value(x),
            Element::K0(x) => serde_json::to_value(x),
            Element::K1(x) => serde_json::to_value(x),
            Element::Hom(x) => serde_json::to_value(x),
        };
        let mut v = v.expect("elements serialize");
        if let (Element::Hom(_), Value::Object(o)) = (self, &mut v) {
            o.insert("flavor".into(), Value::String("hom".into()));
        }
        v
    }
}

/// Symbolic matrix payloads: `I`, `0`, `A`, `A^n`.
fn symbolic(s: &str, sft: &Sft) -> Result<IntMatrix, CliError> {
    let k = sft.size();
    let t = s.trim();
    match t {
        "I" | "1" => Ok(IntMatrix::identity(k)),
        "0" => Ok(IntMatrix::zeros(k, k)),
        "A" => Ok(sft.a().clone()),
        _ => {
            let e = t
                .strip_prefix("A^")
                .and_then(|e| e.trim().parse::<usize>().ok())
                .ok_or_else(|| {
                    invalid(format!(
                        "payload: unknown symbol '{s}' (use I, 0, A or A^n)"
                    ))
                })?;
            Ok(sft.power(e))
        }
    }
}

fn matrix_payload(v: &Value, sft: &Sft) -> Result<IntMatrix, CliError> {
    if let Value::String(s) = v {
        return symbolic(s, sft);
    }
    let rows = json_rows(v, "payload")?;
    let k = sft.size();
    if rows.len() != k || rows.iter().any(|r| r.len() != k) {
        return Err(invalid(format!(
            "ambient mismatch: payload must be {k}x{k} for this matrix"
        )));
    }
    Ok(IntMatrix::from_vec(k, k, rows.concat()))
}

fn vector_payload(v: &Value, sft: &Sft, field: &str) -> Result<Vec<BigInt>, CliError> {
    let items = v
        .as_array()
        .ok_or_else(|| invalid(format!("{field}: expected a list of integers")))?;
    let out = items
        .iter()
        .enumerate()
        .map(|(i, x)| json_int(x, || format!("{field} entry {}", i + 1)))
        .collect::<Result<Vec<_>, _>>()?;
    if out.len() != sft.size() {
        return Err(invalid(format!(
            "ambient mismatch: {field} has length {}, matrix size is {}",
            out.len(),
            sft.size()
        )));
    }
    Ok(out)
}

/// Parses a JSON literal, or the contents of a file when written `@path`.
pub fn parse_element(arg: &str, sft: &Sft) -> Result<Element, CliError> {
    let text = match arg.strip_prefix('@') {
        Some(path) => read_source(Path::new(path))?,
        None => arg.to_string(),
    };
    let v = parse_json(&text).map_err(|e| match e {
        CliError::Validation(m) => invalid(format!("element literal: {m}")),
        other => other,
    })?;
    let o = v
        .as_object()
        .ok_or_else(|| invalid("element literal: expected a JSON object"))?;
    let level = match o.get("level") {
        None => 0,
        Some(l) => l
            .as_u64()
            .ok_or_else(|| invalid(format!("level: expected a non-negative integer, found {l}")))?
            as usize,
    };
    let flavor = match o.get("flavor") {
        Some(Value::String(f)) => f.as_str(),
        Some(other) => return Err(invalid(format!("flavor: expected a string, found {other}"))),
        None if o.contains_key("z") => "hom",
        None => {
            return Err(invalid(
                "element literal: missing \"flavor\" (s, u, h, k0, k1 or hom)",
            ))
        }
    };
    let payload = || {
        o.get("payload")
            .ok_or_else(|| invalid("element literal: missing \"payload\""))
    };
    Ok(match flavor {
        "s" => Element::S(StableElement::new(
            vector_payload(payload()?, sft, "payload")?,
            level,
        )),
        "u" => Element::U(UnstableElement::new(
            vector_payload(payload()?, sft, "payload")?,
            level,
        )),
        "h" => Element::H(HomoclinicElement::new(
            matrix_payload(payload()?, sft)?,
            level,
        )),
        "k0" => Element::K0(
            sft.k0(matrix_payload(payload()?, sft)?, level)
                .map_err(|e| invalid(format!("k0 payload: {e}")))?,
        ),
        "k1" => Element::K1(CylinderK1Element::new(
            matrix_payload(payload()?, sft)?,
            level,
        )),
        "hom" => {
            let z = o
                .get("z")
                .or_else(|| o.get("payload"))
                .ok_or_else(|| invalid("hom literal: missing \"z\""))?;
            Element::Hom(StableHom::new(vector_payload(z, sft, "z")?, level))
        }
        other => {
            return Err(invalid(format!(
                "unknown flavor '{other}' (use s, u, h, k0, k1 or hom)"
            )))
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn err(text: &str) -> String {
        match parse_matrix(text) {
            Err(CliError::Validation(m)) => m,
            Err(e) => panic!("unexpected error {e}"),
            Ok(_) => panic!("accepted {text:?}"),
        }
    }

    #[test]
    fn formats_agree() {
        let a = parse_matrix("[[1,1],[1,0]]").unwrap();
        let b = parse_matrix("# golden mean\n1 1\n\n1 0\n").unwrap();
        let c = parse_matrix(r#"{"label":"gm","matrix":[[1,"1"],[1,0]]}"#).unwrap();
        assert_eq!(a.adj, b.adj);
        assert_eq!(a.adj, c.adj);
        assert_eq!(a.sha256(), b.sha256());
        assert_eq!(c.label.as_deref(), Some("gm"));
    }

    #[test]
    fn errors_have_coordinates() {
        assert_eq!(err("1 1\n1 x\n"), "line 2, entry 2: 'x' is not an integer");
        assert_eq!(err("1 1\n\n1 -1\n"), "line 3, entry 2: negative entry");
        assert!(err("1 1 1\n1 1\n1 1 1\n").starts_with("line 2: row has 2 entries"));
        assert_eq!(
            err("[[1,1],[1,2.5]]"),
            "matrix row 2, entry 2: 2.5 is not an integer"
        );
        assert!(err("[[1,1],\n [1,0]").starts_with("line 2, column"));
        assert!(err("[[0,1],[0,1]]").starts_with("column 1: zero column"));
    }

    #[test]
    fn big_entries() {
        let m = parse_matrix("123456789012345678901234567890 1\n1 1").unwrap();
        assert_eq!(
            m.adj.matrix()[(0, 0)].to_string(),
            "123456789012345678901234567890"
        );
    }

    #[test]
    fn element_literals() {
        let s = Sft::new(parse_matrix("[[1,1],[1,0]]").unwrap().adj);
        let e = parse_element(r#"{"flavor":"k0","payload":"A^2","level":1}"#, &s).unwrap();
        assert!(matches!(e, Element::K0(ref x) if x.x() == &s.power(2) && x.level() == 1));
        let e = parse_element(r#"{"flavor":"s","payload":[1,-2],"level":3}"#, &s).unwrap();
        assert_eq!(
            e.to_json().to_string(),
            r#"{"flavor":"s","level":3,"payload":[1,-2]}"#
        );
        assert!(parse_element(r#"{"flavor":"s","payload":[1]}"#, &s).is_err());
        let bad = parse_element(r#"{"flavor":"k0","payload":[[1,0],[0,0]]}"#, &s);
        assert!(matches!(bad, Err(CliError::Validation(m)) if m.contains("commute")));
        let h = parse_element(r#"{"z":[1,0],"level":2}"#, &s).unwrap();
        assert_eq!(h.flavor(), "hom");
    }
}
