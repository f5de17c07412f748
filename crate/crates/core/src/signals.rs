//! Matrices of signals over the vertices (one row per sample) and their CSV
//! and binary encodings.

use std::io::{Read, Write};
use std::path::Path;

use crate::error::{Error, Result};

const MAGIC: &[u8; 4] = b"GSIG";

/// `m × n` row-major matrix of finite values.
#[derive(Clone, Debug, PartialEq)]
pub struct SignalMatrix {
    m: usize,
    n: usize,
    values: Vec<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SignalFormat {
    Csv,
    Binary,
}

impl SignalFormat {
    /// `.csv` selects CSV, anything else the binary format.
    pub fn from_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some(ext) if ext.eq_ignore_ascii_case("csv") => SignalFormat::Csv,
            _ => SignalFormat::Binary,
        }
    }
}

impl SignalMatrix {
    pub fn new(m: usize, n: usize, values: Vec<f64>) -> Result<Self> {
        if values.len() != m * n {
            return Err(Error::ShapeMismatch { what: "signal values", expected: m * n, got: values.len() });
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite { row: i / n, col: i % n });
        }
        Ok(SignalMatrix { m, n, values })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.first().map_or(0, Vec::len);
        if let Some(bad) = rows.iter().find(|r| r.len() != n) {
            return Err(Error::ShapeMismatch { what: "signal row", expected: n, got: bad.len() });
        }
        Self::new(rows.len(), n, rows.concat())
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.values[i * self.n..(i + 1) * self.n]
    }

    pub fn rows(&self) -> impl ExactSizeIterator<Item = &[f64]> {
        // chunks_exact rejects 0; an n = 0 matrix has no visible rows anyway.
        self.values.chunks_exact(self.n.max(1)).take(if self.n == 0 { 0 } else { self.m })
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.n + j]
    }

    /// Collapse `channels` channel-major blocks of `n / channels` columns
    /// into their per-vertex mean.
    pub fn average_channels(&self, channels: usize) -> Result<Self> {
        if channels == 0 || !self.n.is_multiple_of(channels) {
            return Err(Error::InvalidParameter(format!(
                "{} columns do not split into {channels} equal channel blocks",
                self.n
            )));
        }
        let width = self.n / channels;
        let mut values = Vec::with_capacity(self.m * width);
        for row in self.rows() {
            for j in 0..width {
                values.push((0..channels).map(|c| row[c * width + j]).sum::<f64>() / channels as f64);
            }
        }
        Self::new(self.m, width, values)
    }

    /// Rows of `self` followed by rows of `other`.
    pub fn append(&mut self, other: &SignalMatrix) -> Result<()> {
        if other.n != self.n {
            return Err(Error::ShapeMismatch { what: "signal columns", expected: self.n, got: other.n });
        }
        self.values.extend_from_slice(&other.values);
        self.m += other.m;
        Ok(())
    }

    /// CSV without header, one sample per line. A first line that does not
    /// parse as numbers is taken as a header and skipped.
    pub fn from_csv_reader(reader: impl Read) -> Result<Self> {
        let mut csv = csv::ReaderBuilder::new().has_headers(false).trim(csv::Trim::All).from_reader(reader);
        let mut rows: Vec<Vec<f64>> = Vec::new();
        for (i, record) in csv.records().enumerate() {
            let record = record?;
            let parsed: std::result::Result<Vec<f64>, _> = record.iter().map(str::parse::<f64>).collect();
            match parsed {
                Ok(row) => rows.push(row),
                Err(_) if i == 0 => continue,
                Err(e) => return Err(Error::Format(format!("line {}: {e}", i + 1))),
            }
        }
        Self::from_rows(&rows)
    }

    pub fn write_csv(&self, writer: impl Write) -> Result<()> {
        let mut csv = csv::WriterBuilder::new().has_headers(false).from_writer(writer);
        for row in self.rows() {
            csv.write_record(row.iter().map(|v| v.to_string()))?;
        }
        csv.flush()?;
        Ok(())
    }

    /// `GSIG`, u32 m, u32 n, then m·n f32 row-major, all little-endian.
    pub fn to_binary(&self) -> Vec<u8> {
        let mut buf = Vec::with_capacity(12 + 4 * self.values.len());
        buf.extend_from_slice(MAGIC);
        buf.extend_from_slice(&(self.m as u32).to_le_bytes());
        buf.extend_from_slice(&(self.n as u32).to_le_bytes());
        for &v in &self.values {
            buf.extend_from_slice(&(v as f32).to_le_bytes());
        }
        buf
    }

    pub fn from_binary(bytes: &[u8]) -> Result<Self> {
        if bytes.len() < 12 || &bytes[..4] != MAGIC {
            return Err(Error::Format("missing GSIG header".into()));
        }
        let word = |i: usize| u32::from_le_bytes(bytes[i..i + 4].try_into().expect("4 bytes")) as usize;
        let (m, n) = (word(4), word(8));
        let expected = 12 + 4 * m * n;
        if bytes.len() != expected {
            return Err(Error::ShapeMismatch { what: "signal payload bytes", expected, got: bytes.len() });
        }
        let values =
            bytes[12..].chunks_exact(4).map(|c| f32::from_le_bytes(c.try_into().expect("4 bytes")) as f64).collect();
        Self::new(m, n, values)
    }

    /// Binary when the file starts with `GSIG`, CSV otherwise.
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let bytes = std::fs::read(path)?;
        if bytes.starts_with(MAGIC) {
            Self::from_binary(&bytes)
        } else {
            Self::from_csv_reader(bytes.as_slice())
        }
    }

    pub fn save(&self, path: impl AsRef<Path>, format: SignalFormat) -> Result<()> {
        match format {
            SignalFormat::Binary => std::fs::write(path, self.to_binary())?,
            SignalFormat::Csv => self.write_csv(std::io::BufWriter::new(std::fs::File::create(path)?))?,
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn construction_checks() {
        assert!(SignalMatrix::new(2, 2, vec![0.0; 3]).is_err());
        let err = SignalMatrix::new(2, 2, vec![0.0, 1.0, f64::NAN, 0.0]).unwrap_err();
        assert!(matches!(err, Error::NonFinite { row: 1, col: 0 }));
        assert!(SignalMatrix::from_rows(&[vec![1.0], vec![1.0, 2.0]]).is_err());
    }

    #[test]
    fn csv_round_trip_and_header() {
        let s = SignalMatrix::from_rows(&[vec![1.5, -2.0, 0.1], vec![3.0, 4.0, 5.0]]).unwrap();
        let mut buf = Vec::new();
        s.write_csv(&mut buf).unwrap();
        assert_eq!(String::from_utf8(buf.clone()).unwrap(), "1.5,-2,0.1\n3,4,5\n");
        assert_eq!(SignalMatrix::from_csv_reader(buf.as_slice()).unwrap(), s);
        let with_header = "a,b,c\n1.5, -2, 0.1\n3,4,5\n";
        assert_eq!(SignalMatrix::from_csv_reader(with_header.as_bytes()).unwrap(), s);
        assert!(SignalMatrix::from_csv_reader("1,2\n3,x\n".as_bytes()).is_err());
    }

    #[test]
    fn binary_layout() {
        let s = SignalMatrix::from_rows(&[vec![1.0, 2.0], vec![0.5, -1.0]]).unwrap();
        let bin = s.to_binary();
        assert_eq!(&bin[..4], b"GSIG");
        assert_eq!(&bin[4..12], &[2, 0, 0, 0, 2, 0, 0, 0]);
        assert_eq!(&bin[12..16], &1.0f32.to_le_bytes());
        assert_eq!(SignalMatrix::from_binary(&bin).unwrap(), s);
        assert!(SignalMatrix::from_binary(&bin[..15]).is_err());
    }

    #[test]
    fn channel_average() {
        // two channels of two vertices
        let s = SignalMatrix::from_rows(&[vec![1.0, 2.0, 3.0, 6.0]]).unwrap();
        assert_eq!(s.average_channels(2).unwrap().row(0), &[2.0, 4.0]);
        assert!(s.average_channels(3).is_err());
    }

    #[test]
    fn load_sniffs_format() {
        let dir = tempfile::tempdir().unwrap();
        let s = SignalMatrix::from_rows(&[vec![1.0, 2.0], vec![3.0, 4.0]]).unwrap();
        for (name, fmt) in [("a.csv", SignalFormat::Csv), ("a.bin", SignalFormat::Binary)] {
            let p = dir.path().join(name);
            assert_eq!(SignalFormat::from_path(&p), fmt);
            s.save(&p, fmt).unwrap();
            assert_eq!(SignalMatrix::load(&p).unwrap(), s);
        }
    }
}
