//! Machine-readable input and report formats.
//!
//! Every real number travels as a decimal string so extended-precision
//! values survive the round trip bit-exactly; complex numbers are always
//! `[re, im]` pairs of such strings.

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::poly::Polynomial;
use crate::scalar::{Cplx, Real};

/// A real in an input file: either a decimal string (preferred, lossless for
/// extended precision) or a bare JSON number.
#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(untagged)]
pub enum DecimalScalar {
    Text(String),
    Number(f64),
}

impl DecimalScalar {
    pub fn as_decimal(&self) -> String {
        match self {
            DecimalScalar::Text(s) => s.clone(),
            DecimalScalar::Number(x) => format!("{x:?}"),
        }
    }
}

/// Input file: dense coefficient list ascending by power, optional annulus
/// parameter, input accuracy for the coefficients.
#[derive(Clone, Debug, Deserialize, Serialize)]
pub struct InputFile {
    pub coefficients: Vec<[DecimalScalar; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rho: Option<DecimalScalar>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta: Option<DecimalScalar>,
}

impl InputFile {
    pub fn from_json(text: &str) -> Result<Self, Error> {
        let input: InputFile = serde_json::from_str(text)?;
        if input.coefficients.is_empty() {
            return Err(Error::InvalidInput("coefficient list is empty".into()));
        }
        Ok(input)
    }
}

/// Bound ledger of a run, all values as decimal strings.
#[derive(Clone, Debug, Deserialize, Serialize, PartialEq)]
pub struct LedgerJson {
    pub delta0: String,
    pub m1: String,
    #[serde(rename = "mK")]
    pub m_k: String,
    pub rho: String,
    pub eps1: String,
    pub eps2: String,
    pub eps: String,
    pub cond_bound: String,
    pub window_entry_bound: String,
    pub cond_bound_annulus: String,
    pub cond_bound_rough: String,
    pub norm_p: String,
    pub boyd_delta: String,
    pub delta: String,
    pub q: String,
    pub d: i32,
    pub d_tilde: i32,
    pub eps_tilde: String,
    pub eps_pow10: String,
}

#[derive(Clone, Debug, Deserialize, Serialize, PartialEq)]
pub struct PminusJson {
    pub coeffs: Vec<[String; 2]>,
    pub shift: i64,
}

/// Full factorization report.
#[derive(Clone, Debug, Deserialize, Serialize, PartialEq)]
pub struct Report {
    pub kappa: i64,
    pub n: usize,
    pub ell: usize,
    pub p1: Vec<[String; 2]>,
    pub p2: Vec<[String; 2]>,
    pub p_minus: PminusJson,
    pub residual: String,
    pub ledger: LedgerJson,
    pub path: String,
    pub precision: String,
    pub warnings: Vec<String>,
}

impl Report {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serialization");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self, Error> {
        Ok(serde_json::from_str(text)?)
    }
}

pub fn complex_to_pair<T: Real>(z: &Cplx<T>) -> [String; 2] {
    [z.re.to_decimal(), z.im.to_decimal()]
}

pub fn poly_to_pairs<T: Real>(p: &Polynomial<T>) -> Vec<[String; 2]> {
    p.coeffs().iter().map(complex_to_pair).collect()
}
