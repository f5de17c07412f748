//! Weight-sharing schemes for the extended convolution layer and a reference
//! forward pass.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::VertexSet;
use crate::proxy::{decode, ProxyFamily};

const MAGIC: &[u8; 4] = b"GSCH";

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Activation {
    #[default]
    Identity,
    Relu,
}

impl Activation {
    pub fn apply(self, x: f64) -> f64 {
        match self {
            Activation::Identity => x,
            Activation::Relu => x.max(0.0),
        }
    }
}

impl FromStr for Activation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "identity" => Ok(Activation::Identity),
            "relu" => Ok(Activation::Relu),
            other => Err(Error::InvalidParameter(format!("unknown activation {other:?}"))),
        }
    }
}

impl fmt::Display for Activation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Activation::Identity => "identity",
            Activation::Relu => "relu",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConvLayerParams {
    pub weights: Vec<f64>,
    pub bias: f64,
    #[serde(default)]
    pub activation: Activation,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SchemeMeta {
    /// Seed of the family the scheme was compiled from; unknown for schemes
    /// read from the binary format.
    pub v0: Option<usize>,
    /// 0 for the full-resolution layer, then one per stride step.
    pub level: usize,
    /// Order of the input signal.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_in: Option<usize>,
}

/// `index[i][p]` is the input vertex feeding weight `p` at output `out[i]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConvScheme {
    pub kappa: usize,
    pub out: Vec<usize>,
    pub index: Vec<Vec<Option<usize>>>,
    pub meta: SchemeMeta,
}

/// Rows are the members of `out` in ascending order; `index[i][p] = ψ_p(out[i])`.
pub fn compile_scheme(f: &ProxyFamily, out: &VertexSet) -> Result<ConvScheme> {
    compile_scheme_at_level(f, out, 0)
}

pub fn compile_scheme_at_level(f: &ProxyFamily, out: &VertexSet, level: usize) -> Result<ConvScheme> {
    let n = f.n();
    let mut index = Vec::with_capacity(out.len());
    for c in out.iter() {
        if c >= n {
            return Err(Error::VertexOutOfRange { vertex: c, n });
        }
        if !f.is_reached(c) {
            return Err(Error::UnreachedCenter(c));
        }
        index.push((0..f.kappa).map(|p| f.psi[p][c]).collect());
    }
    Ok(ConvScheme {
        kappa: f.kappa,
        out: out.as_slice().to_vec(),
        index,
        meta: SchemeMeta { v0: Some(f.v0), level, n_in: Some(n) },
    })
}

/// Counts of defined and undefined entries.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SchemeStats {
    pub rows: usize,
    pub kappa: usize,
    pub defined: usize,
    pub bottoms: usize,
    pub fill_ratio: f64,
    /// Defined entries per kernel index.
    pub column_defined: Vec<usize>,
}

impl ConvScheme {
    pub fn rows(&self) -> usize {
        self.out.len()
    }

    /// Smallest input length the scheme can be applied to.
    pub fn min_input_len(&self) -> usize {
        self.index.iter().flatten().flatten().max().map_or(0, |&m| m + 1)
    }

    pub fn stats(&self) -> SchemeStats {
        let mut column_defined = vec![0; self.kappa];
        for row in &self.index {
            for (p, t) in row.iter().enumerate() {
                column_defined[p] += usize::from(t.is_some());
            }
        }
        let defined: usize = column_defined.iter().sum();
        let total = self.rows() * self.kappa;
        SchemeStats {
            rows: self.rows(),
            kappa: self.kappa,
            defined,
            bottoms: total - defined,
            fill_ratio: if total == 0 { 1.0 } else { defined as f64 / total as f64 },
            column_defined,
        }
    }

    /// `y[i] = h(Σ_p w_p x[index[i][p]] + b)`, skipping ⊥ entries.
    pub fn forward(&self, params: &ConvLayerParams, x: &[f64]) -> Result<Vec<f64>> {
        if params.weights.len() != self.kappa {
            return Err(Error::ShapeMismatch { what: "weights", expected: self.kappa, got: params.weights.len() });
        }
        let expected = self.meta.n_in.unwrap_or_else(|| self.min_input_len());
        let length_ok = if self.meta.n_in.is_some() { x.len() == expected } else { x.len() >= expected };
        if !length_ok {
            return Err(Error::ShapeMismatch { what: "input signal", expected, got: x.len() });
        }
        Ok(self
            .index
            .par_iter()
            .map(|row| {
                let acc: f64 = row.iter().zip(&params.weights).filter_map(|(t, w)| t.map(|t| w * x[t])).sum();
                params.activation.apply(acc + params.bias)
            })
            .collect())
    }

    pub fn validate(&self) -> Result<()> {
        if self.kappa == 0 {
            return Err(Error::Format("kappa must be at least 1".into()));
        }
        if self.index.len() != self.out.len() {
            return Err(Error::ShapeMismatch { what: "index rows", expected: self.out.len(), got: self.index.len() });
        }
        for row in &self.index {
            if row.len() != self.kappa {
                return Err(Error::ShapeMismatch { what: "index row", expected: self.kappa, got: row.len() });
            }
        }
        if let Some(n) = self.meta.n_in {
            if let Some(&t) = self.index.iter().flatten().flatten().chain(&self.out).find(|&&t| t >= n) {
                return Err(Error::VertexOutOfRange { vertex: t, n });
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> String {
        let file = SchemeFile {
            kappa: self.kappa,
            out: self.out.clone(),
            index: self.index.iter().map(|row| row.iter().map(|t| t.map_or(-1, |t| t as i64)).collect()).collect(),
            meta: self.meta.clone(),
        };
        let mut text = serde_json::to_string(&file).expect("scheme serializes");
        text.push('\n');
        text
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: SchemeFile = serde_json::from_str(text)?;
        let index = file
            .index
            .iter()
            .map(|row| row.iter().map(|&x| decode(x)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        let scheme = ConvScheme { kappa: file.kappa, out: file.out, index, meta: file.meta };
        scheme.validate()?;
        Ok(scheme)
    }

    /// `GSCH`, u32 rows, u32 kappa, then rows·kappa i32 (−1 = ⊥), all
    /// little-endian. Output ids and metadata are not stored.
    pub fn to_binary(&self) -> Vec<u8> {
        let mut buf = Vec::with_capacity(12 + 4 * self.rows() * self.kappa);
        buf.extend_from_slice(MAGIC);
        buf.extend_from_slice(&(self.rows() as u32).to_le_bytes());
        buf.extend_from_slice(&(self.kappa as u32).to_le_bytes());
        for t in self.index.iter().flatten() {
            buf.extend_from_slice(&t.map_or(-1i32, |t| t as i32).to_le_bytes());
        }
        buf
    }

    /// Inverse of [`to_binary`](Self::to_binary). Output ids are recovered
    /// from column 0, which must be fully defined.
    pub fn from_binary(bytes: &[u8]) -> Result<Self> {
        if bytes.len() < 12 || &bytes[..4] != MAGIC {
            return Err(Error::Format("missing GSCH header".into()));
        }
        let word = |i: usize| u32::from_le_bytes(bytes[i..i + 4].try_into().expect("4 bytes"));
        let (rows, kappa) = (word(4) as usize, word(8) as usize);
        let expected = 12 + 4 * rows * kappa;
        if bytes.len() != expected {
            return Err(Error::ShapeMismatch { what: "scheme payload bytes", expected, got: bytes.len() });
        }
        let mut entries = bytes[12..].chunks_exact(4).map(|c| i32::from_le_bytes(c.try_into().expect("4 bytes")));
        let mut index = Vec::with_capacity(rows);
        let mut out = Vec::with_capacity(rows);
        for i in 0..rows {
            let row = (&mut entries).take(kappa).map(|x| decode(x as i64)).collect::<Result<Vec<_>>>()?;
            match row.first().copied().flatten() {
                Some(v) => out.push(v),
                None => return Err(Error::Format(format!("row {i} has no identity entry in column 0"))),
            }
            index.push(row);
        }
        let scheme = ConvScheme { kappa, out, index, meta: SchemeMeta::default() };
        scheme.validate()?;
        Ok(scheme)
    }

    /// Reads either format, picking binary when the file starts with `GSCH`.
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let bytes = std::fs::read(path)?;
        if bytes.starts_with(MAGIC) {
            Self::from_binary(&bytes)
        } else {
            let text = String::from_utf8(bytes).map_err(|e| Error::Format(e.to_string()))?;
            Self::from_json(&text)
        }
    }

    pub fn save_json(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_json())?;
        Ok(())
    }

    pub fn save_binary(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_binary())?;
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct SchemeFile {
    kappa: usize,
    out: Vec<usize>,
    index: Vec<Vec<i64>>,
    meta: SchemeMeta,
}
