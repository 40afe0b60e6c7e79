//! The polynomial file format: `{"terms": [[k, re, im], ...]}`.

use num_complex::Complex64;
use serde::Deserialize;
use serde_json::{json, Number, Value};
use thiserror::Error;

use crate::poly::{PolyError, SparsePolynomial, Term};

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("terms[{index}]: {source}")]
    Term { index: usize, source: PolyError },
    #[error("terms[{index}]: duplicate exponent {exponent}")]
    DuplicateExponent { index: usize, exponent: u32 },
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct PolyFile {
    terms: Vec<(u32, f64, f64)>,
}

pub fn parse_polynomial(text: &str) -> Result<SparsePolynomial, FormatError> {
    let file: PolyFile = serde_json::from_str(text).map_err(|e| FormatError::Syntax {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    let mut terms = Vec::with_capacity(file.terms.len());
    for (index, &(k, re, im)) in file.terms.iter().enumerate() {
        if index > 0 && file.terms[index - 1].0 == k {
            return Err(FormatError::DuplicateExponent { index, exponent: k });
        }
        terms.push(Term::new(k, Complex64::new(re, im)));
    }
    SparsePolynomial::new(terms).map_err(|source| {
        let index = match source {
            PolyError::NonIncreasingExponent { index }
            | PolyError::ZeroCoefficient { index }
            | PolyError::NonFiniteCoefficient { index } => index,
            _ => 0,
        };
        FormatError::Term { index, source }
    })
}

/// Integral values are written without a fractional part.
fn number(x: f64) -> Value {
    if x.fract() == 0.0 && x.abs() < 9.0e15 {
        Value::Number(Number::from(x as i64))
    } else {
        Number::from_f64(x).map_or(Value::Null, Value::Number)
    }
}

pub fn polynomial_to_value(p: &SparsePolynomial) -> Value {
    let terms: Vec<Value> = p
        .terms()
        .iter()
        .map(|t| json!([t.exponent, number(t.coeff.re), number(t.coeff.im)]))
        .collect();
    json!({ "terms": terms })
}

pub fn write_polynomial(p: &SparsePolynomial) -> String {
    polynomial_to_value(p).to_string()
}
