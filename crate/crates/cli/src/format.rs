//! The `.alg.json` presentation format.
//!
//! ```json
//! {"field":{"type":"Fp","p":5},"dim":2,"basis":["b1","b2"],
//!  "products":[{"left":"b2","right":"b2","result":{"b1":"1","b2":"1"}}]}
//! ```
//!
//! Scalars are strings so fractions stay exact. Products not listed are zero.

use std::collections::BTreeMap;
use std::path::Path;

use basisdiv::algebra::{RawPresentation, RawProduct};
use basisdiv::{AlgebraError, AlgebraPresentation, Field, FieldError, Scalar};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", deny_unknown_fields)]
pub enum FieldSpec {
    Q,
    Fp { p: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProductEntry {
    pub left: String,
    pub right: String,
    pub result: BTreeMap<String, String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraFile {
    pub field: FieldSpec,
    pub dim: usize,
    pub basis: Vec<String>,
    #[serde(default)]
    pub products: Vec<ProductEntry>,
}

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("field: {0}")]
    Field(FieldError),
    #[error("{location}: unknown label '{label}'")]
    UnknownLabel { location: String, label: String },
    #[error("{location}: {source}")]
    Scalar { location: String, source: FieldError },
    #[error("{0}")]
    Invalid(#[from] AlgebraError),
}

impl FieldSpec {
    pub fn to_field(&self) -> Result<Field, FieldError> {
        match self {
            FieldSpec::Q => Ok(Field::Rationals),
            FieldSpec::Fp { p } => Field::prime(*p),
        }
    }

    pub fn of(field: Field) -> Self {
        match field.modulus() {
            None => FieldSpec::Q,
            Some(p) => FieldSpec::Fp { p },
        }
    }
}

impl AlgebraFile {
    pub fn from_json(text: &str) -> Result<Self, FormatError> {
        serde_json::from_str(text).map_err(|e| FormatError::Syntax {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })
    }

    /// Compact JSON with a trailing newline; byte-stable.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string(self).expect("plain data serializes");
        s.push('\n');
        s
    }

    pub fn to_presentation(&self) -> Result<AlgebraPresentation, FormatError> {
        let field = self.field.to_field().map_err(FormatError::Field)?;
        let index = |label: &str, location: String| {
            self.basis
                .iter()
                .position(|l| l == label)
                .ok_or_else(|| FormatError::UnknownLabel {
                    location,
                    label: label.to_string(),
                })
        };
        let mut products = Vec::with_capacity(self.products.len());
        for (n, p) in self.products.iter().enumerate() {
            let at = |part: &str| format!("products[{n}].{part}");
            let left = index(&p.left, at("left"))?;
            let right = index(&p.right, at("right"))?;
            let mut result = Vec::with_capacity(p.result.len());
            for (label, text) in &p.result {
                let k = index(label, at("result"))?;
                let c = Scalar::parse(text, field).map_err(|source| FormatError::Scalar {
                    location: format!("products[{n}].result.{label}"),
                    source,
                })?;
                result.push((k, c));
            }
            products.push(RawProduct { left, right, result });
        }
        Ok(AlgebraPresentation::validate(RawPresentation {
            field,
            dim: self.dim,
            labels: self.basis.clone(),
            products,
        })?)
    }

    /// Lists nonzero products in index order, omitting zero coefficients.
    pub fn from_presentation(a: &AlgebraPresentation) -> Self {
        let labels = a.labels();
        let products = a
            .nonzero_products()
            .map(|(i, j, row)| ProductEntry {
                left: labels[i].clone(),
                right: labels[j].clone(),
                result: row.iter().map(|(&k, c)| (labels[k].clone(), c.to_string())).collect(),
            })
            .collect();
        AlgebraFile {
            field: FieldSpec::of(a.field()),
            dim: a.dim(),
            basis: labels.to_vec(),
            products,
        }
    }
}

pub fn parse_algebra_str(text: &str) -> Result<AlgebraPresentation, FormatError> {
    AlgebraFile::from_json(text)?.to_presentation()
}

pub fn parse_algebra_file(path: &Path) -> Result<AlgebraPresentation, FormatError> {
    let text = std::fs::read_to_string(path).map_err(|source| FormatError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_algebra_str(&text)
}

pub fn to_json(a: &AlgebraPresentation) -> String {
    AlgebraFile::from_presentation(a).to_json()
}

#[cfg(test)]
mod tests {
    use super::*;

    const EX1: &str = r#"{"field":{"type":"Q"},"dim":2,"basis":["b1","b2"],
        "products":[{"left":"b1","right":"b1","result":{"b1":"1"}},
                    {"left":"b2","right":"b2","result":{"b1":"1","b2":"1"}}]}"#;

    #[test]
    fn parses_and_round_trips() {
        let a = parse_algebra_str(EX1).unwrap();
        assert_eq!(a.dim(), 2);
        assert_eq!(a.labels(), ["b1", "b2"]);
        assert!(a.coefficient(1, 1, 0).is_one());
        let again = parse_algebra_str(&to_json(&a)).unwrap();
        assert_eq!(a, again);
        assert_eq!(to_json(&a), to_json(&again));
    }

    #[test]
    fn reports_errors_with_locations() {
        let dup = r#"{"field":{"type":"Q"},"dim":2,"basis":["b1","b1"],"products":[]}"#;
        let err = parse_algebra_str(dup).unwrap_err().to_string();
        assert!(err.contains("b1"), "{err}");

        let zero_den = EX1.replace(r#""b1":"1"}}"#, r#""b1":"1/0"}}"#);
        let err = parse_algebra_str(&zero_den).unwrap_err();
        assert!(matches!(err, FormatError::Scalar { .. }), "{err}");

        let unknown = EX1.replace(r#""left":"b1""#, r#""left":"b9""#);
        let err = parse_algebra_str(&unknown).unwrap_err().to_string();
        assert_eq!(err, "products[0].left: unknown label 'b9'");

        let err = parse_algebra_str("{\"field\":\n{\"type\":\"R\"}}").unwrap_err();
        assert!(matches!(err, FormatError::Syntax { line: 2, .. }), "{err}");
    }

    #[test]
    fn prime_field_values_reduce() {
        let text = r#"{"field":{"type":"Fp","p":3},"dim":1,"basis":["e"],
            "products":[{"left":"e","right":"e","result":{"e":"4"}}]}"#;
        let a = parse_algebra_str(text).unwrap();
        assert!(a.coefficient(0, 0, 0).is_one());
        let bad = text.replace("\"p\":3", "\"p\":4");
        assert!(matches!(parse_algebra_str(&bad), Err(FormatError::Field(_))));
    }
}
