//! JSON form of a coin, shared by the CLI and matrix files.
//!
//! Exact entries are `"p/q"` strings. Floating entries are numbers, or
//! `[re, im]` pairs when the imaginary part is nonzero.

use serde::{Deserialize, Serialize};

use super::{Coin3, CoinFamily, Scalar};
use crate::error::{Error, Result};
use crate::exactnum::{ComplexF, Mat3, Rational};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Entry {
    Text(String),
    Real(f64),
    Complex([f64; 2]),
}

impl Entry {
    fn from_scalar(s: Scalar) -> Entry {
        match s {
            Scalar::Exact(r) => Entry::Text(r.to_string()),
            Scalar::Float(c) if c.im == 0.0 => Entry::Real(c.re),
            Scalar::Float(c) => Entry::Complex([c.re, c.im]),
        }
    }

    fn to_scalar(&self) -> Result<Scalar> {
        match self {
            Entry::Text(s) => Ok(Scalar::Exact(s.parse::<Rational>()?)),
            Entry::Real(v) => Ok(Scalar::Float(ComplexF::new(*v, 0.0))),
            Entry::Complex([re, im]) => Ok(Scalar::Float(ComplexF::new(*re, *im))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ParamsDocument {
    pub x: Entry,
    pub y: Entry,
    pub z: Entry,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoinDocument {
    pub repr: String,
    pub entries: [[Entry; 3]; 3],
    pub family: Option<CoinFamily>,
    pub params: Option<ParamsDocument>,
}

impl CoinDocument {
    pub fn from_coin(coin: &Coin3) -> CoinDocument {
        let (repr, entries) = match coin.matrix() {
            Mat3::Exact(q) => ("exact", q.map(|r| r.map(|v| Entry::from_scalar(Scalar::Exact(v))))),
            Mat3::Float(c) => ("float", c.map(|r| r.map(|v| Entry::from_scalar(Scalar::Float(v))))),
        };
        CoinDocument {
            repr: repr.to_string(),
            entries,
            family: coin.family(),
            params: coin.params().map(|[x, y, z]| ParamsDocument {
                x: Entry::from_scalar(x),
                y: Entry::from_scalar(y),
                z: Entry::from_scalar(z),
            }),
        }
    }

    /// Rebuilds and revalidates the coin. A stated family must match the
    /// classification of the entries.
    pub fn to_coin(&self) -> Result<Coin3> {
        let scalars = self
            .entries
            .iter()
            .map(|row| row.iter().map(Entry::to_scalar).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        let matrix = match self.repr.as_str() {
            "exact" => {
                let mut q = [[Rational::ZERO; 3]; 3];
                for (i, row) in scalars.iter().enumerate() {
                    for (j, s) in row.iter().enumerate() {
                        q[i][j] = s.exact().ok_or_else(|| {
                            Error::InvalidDocument(format!("entry ({i},{j}) is not a p/q string"))
                        })?;
                    }
                }
                Mat3::Exact(q)
            }
            "float" => {
                let mut c = [[ComplexF::new(0.0, 0.0); 3]; 3];
                for (i, row) in scalars.iter().enumerate() {
                    for (j, s) in row.iter().enumerate() {
                        let v = s.to_complex();
                        if !v.re.is_finite() || !v.im.is_finite() {
                            return Err(Error::InvalidDocument(format!("entry ({i},{j}) is not finite")));
                        }
                        c[i][j] = v;
                    }
                }
                Mat3::Float(c)
            }
            other => {
                return Err(Error::InvalidDocument(format!(
                    "repr must be \"exact\" or \"float\", got {other:?}"
                )))
            }
        };
        let coin = Coin3::from_matrix(matrix)?;
        if let Some(stated) = self.family {
            if coin.family() != Some(stated) {
                return Err(Error::InvalidDocument(format!(
                    "family {stated} does not match the entries ({})",
                    coin.family().map_or("none".to_string(), |f| f.to_string())
                )));
            }
        }
        Ok(coin)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("coin documents serialize")
    }

    pub fn parse(text: &str) -> Result<CoinDocument> {
        serde_json::from_str(text).map_err(|e| Error::InvalidDocument(e.to_string()))
    }
}
