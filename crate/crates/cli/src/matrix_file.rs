//! JSON matrix documents.
//!
//! ```json
//! {"rows": 2, "cols": 2, "mode": "exact", "data": [["1", "-2/3"], ["0", "1+1/2i"]]}
//! ```
//!
//! Exact entries are strings holding a reduced fraction with an optional
//! imaginary part. Float entries are JSON numbers or `[re, im]` pairs.

use geninv::matcore::Mode;
use geninv::{Complex64, DynMatrix, Gaussian, Matrix};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixFile {
    pub rows: usize,
    pub cols: usize,
    pub mode: Mode,
    pub data: Vec<Vec<Value>>,
}

fn parse_error(msg: impl Into<String>) -> CliError {
    CliError::new("ParseError", msg)
}

fn float_entry(v: &Value) -> Option<Complex64> {
    match v {
        Value::Number(n) => Some(Complex64::new(n.as_f64()?, 0.0)),
        Value::Array(parts) if parts.len() == 2 => {
            Some(Complex64::new(parts[0].as_f64()?, parts[1].as_f64()?))
        }
        _ => None,
    }
}

fn float_value(z: &Complex64) -> Value {
    if z.im == 0.0 {
        Value::from(z.re)
    } else {
        Value::from(vec![z.re, z.im])
    }
}

impl MatrixFile {
    pub fn parse(text: &str) -> CliResult<MatrixFile> {
        serde_json::from_str(text)
            .map_err(|e| parse_error(format!("malformed matrix document: {e}")))
    }

    pub fn to_matrix(&self) -> CliResult<DynMatrix> {
        if self.data.len() != self.rows || self.data.iter().any(|r| r.len() != self.cols) {
            return Err(parse_error(format!(
                "data does not have the declared shape {}x{}",
                self.rows, self.cols
            )));
        }
        let entries = self.data.iter().flatten().enumerate();
        match self.mode {
            Mode::Exact => {
                let data = entries
                    .map(|(i, v)| match v {
                        Value::String(s) => s
                            .parse::<Gaussian>()
                            .map_err(|e| parse_error(e.to_string())),
                        other => Err(parse_error(format!(
                            "exact entry {i} must be a string, got {other}"
                        ))),
                    })
                    .collect::<CliResult<Vec<_>>>()?;
                Ok(DynMatrix::Exact(Matrix::from_vec(
                    self.rows, self.cols, data,
                )?))
            }
            Mode::Float => {
                let data = entries
                    .map(|(i, v)| {
                        float_entry(v).ok_or_else(|| {
                            parse_error(format!("float entry {i} must be a number or [re, im]"))
                        })
                    })
                    .collect::<CliResult<Vec<_>>>()?;
                Ok(DynMatrix::Float(Matrix::from_vec(
                    self.rows, self.cols, data,
                )?))
            }
        }
    }

    pub fn from_matrix(m: &DynMatrix) -> MatrixFile {
        let (rows, cols) = m.shape();
        let data = match m {
            DynMatrix::Exact(m) => m
                .to_rows()
                .iter()
                .map(|r| r.iter().map(|x| Value::String(x.to_string())).collect())
                .collect(),
            DynMatrix::Float(m) => m
                .to_rows()
                .iter()
                .map(|r| r.iter().map(float_value).collect())
                .collect(),
        };
        MatrixFile {
            rows,
            cols,
            mode: m.mode(),
            data,
        }
    }
}

/// `(1/d)·N` with `d` the least common denominator and `N` integral.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CommonDenominator {
    pub denominator: String,
    pub numerators: Vec<Vec<String>>,
}

impl CommonDenominator {
    pub fn of(m: &Matrix<Gaussian>) -> CommonDenominator {
        let d = m
            .data()
            .iter()
            .fold(BigInt::one(), |acc, x| acc.lcm(&x.denominator_lcm()));
        let scaled = |r: &num_rational::BigRational| {
            (r * num_rational::BigRational::from_integer(d.clone())).to_integer()
        };
        let numerators = m
            .to_rows()
            .iter()
            .map(|row| {
                row.iter()
                    .map(|x| {
                        let (re, im) = (scaled(x.re()), scaled(x.im()));
                        match (re.is_zero(), im.is_zero()) {
                            (_, true) => re.to_string(),
                            (true, false) => format!("{im}i"),
                            (false, false) => {
                                let sign = if im.is_negative() { '-' } else { '+' };
                                format!("{re}{sign}{}i", im.abs())
                            }
                        }
                    })
                    .collect()
            })
            .collect();
        CommonDenominator {
            denominator: d.to_string(),
            numerators,
        }
    }
}
