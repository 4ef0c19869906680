//! Matrix and label file formats.
//!
//! CSV: one matrix row per line, comma-separated; lines starting with `#`
//! are comments. BIN: magic `SPKM`, `u16` version, `u32` rows, `u32` cols,
//! then little-endian `f64` values in column-major order.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::linalg::Matrix;

pub const BIN_MAGIC: &[u8; 4] = b"SPKM";
pub const BIN_VERSION: u16 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Bin,
}

impl Format {
    /// Guess from the file extension: `.bin` is binary, anything else CSV.
    pub fn from_path(path: &Path) -> Format {
        match path.extension().and_then(|e| e.to_str()) {
            Some(ext) if ext.eq_ignore_ascii_case("bin") => Format::Bin,
            _ => Format::Csv,
        }
    }
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(Format::Csv),
            "bin" => Ok(Format::Bin),
            other => Err(Error::InvalidConfig(format!("unknown matrix format `{other}`"))),
        }
    }
}

pub fn load_matrix(path: &Path, format: Format) -> Result<Matrix> {
    match format {
        Format::Csv => {
            let text = fs::read_to_string(path)?;
            parse_csv(&text).map_err(|e| with_path(e, path))
        }
        Format::Bin => {
            let bytes = fs::read(path)?;
            decode_bin(&bytes).map_err(|e| with_path(e, path))
        }
    }
}

pub fn save_matrix(path: &Path, a: &Matrix, format: Format) -> Result<()> {
    match format {
        Format::Csv => fs::write(path, to_csv(a))?,
        Format::Bin => fs::write(path, encode_bin(a))?,
    }
    Ok(())
}

fn with_path(e: Error, path: &Path) -> Error {
    match e {
        Error::Parse { location, message } => Error::Parse {
            location: format!("{}:{location}", path.display()),
            message,
        },
        other => other,
    }
}

pub fn parse_csv(text: &str) -> Result<Matrix> {
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let location = || format!("line {}", lineno + 1);
        let mut row = Vec::new();
        for (col, field) in line.split(',').enumerate() {
            let v: f64 = field.trim().parse().map_err(|_| {
                Error::parse(
                    location(),
                    format!("field {} is not a number: `{}`", col + 1, field.trim()),
                )
            })?;
            if !v.is_finite() {
                return Err(Error::parse(location(), format!("field {} is not finite", col + 1)));
            }
            row.push(v);
        }
        if let Some(first) = rows.first() {
            if row.len() != first.len() {
                return Err(Error::parse(
                    location(),
                    format!("expected {} fields, found {}", first.len(), row.len()),
                ));
            }
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(Error::parse("line 1", "no data rows"));
    }
    Matrix::from_rows(&rows)
}

/// Shortest round-trip formatting, so parsing recovers every value exactly.
pub fn to_csv(a: &Matrix) -> String {
    let mut out = String::new();
    for i in 0..a.rows() {
        for j in 0..a.cols() {
            if j > 0 {
                out.push(',');
            }
            write!(out, "{}", a.get(i, j)).expect("writing to a String");
        }
        out.push('\n');
    }
    out
}

pub fn encode_bin(a: &Matrix) -> Vec<u8> {
    let mut out = Vec::with_capacity(14 + 8 * a.as_slice().len());
    out.extend_from_slice(BIN_MAGIC);
    out.extend_from_slice(&BIN_VERSION.to_le_bytes());
    out.extend_from_slice(&dim_u32(a.rows()).to_le_bytes());
    out.extend_from_slice(&dim_u32(a.cols()).to_le_bytes());
    put_f64s(&mut out, a.as_slice());
    out
}

pub fn decode_bin(bytes: &[u8]) -> Result<Matrix> {
    let mut r = ByteReader::new(bytes);
    r.expect_magic(BIN_MAGIC)?;
    let version = r.u16()?;
    if version != BIN_VERSION {
        return Err(Error::parse("offset 4", format!("unsupported version {version}")));
    }
    let rows = r.u32()? as usize;
    let cols = r.u32()? as usize;
    let data = r.f64s(rows * cols)?;
    r.finish()?;
    Matrix::from_col_major(rows, cols, data)
}

pub(crate) fn dim_u32(n: usize) -> u32 {
    u32::try_from(n).expect("dimension exceeds u32 range")
}

pub(crate) fn put_f64s(out: &mut Vec<u8>, values: &[f64]) {
    for v in values {
        out.extend_from_slice(&v.to_le_bytes());
    }
}

/// Cursor over a little-endian byte buffer with offset-tagged errors.
pub(crate) struct ByteReader<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> ByteReader<'a> {
    pub fn new(bytes: &'a [u8]) -> Self {
        Self { bytes, pos: 0 }
    }

    fn take(&mut self, n: usize) -> Result<&'a [u8]> {
        let end = self.pos.checked_add(n).filter(|&e| e <= self.bytes.len());
        let Some(end) = end else {
            return Err(Error::parse(
                format!("offset {}", self.pos),
                format!("unexpected end of data (need {n} more bytes)"),
            ));
        };
        let s = &self.bytes[self.pos..end];
        self.pos = end;
        Ok(s)
    }

    pub fn expect_magic(&mut self, magic: &[u8]) -> Result<()> {
        let got = self.take(magic.len())?;
        if got != magic {
            return Err(Error::parse("offset 0", format!("bad magic {got:?}")));
        }
        Ok(())
    }

    pub fn u16(&mut self) -> Result<u16> {
        Ok(u16::from_le_bytes(self.take(2)?.try_into().expect("2 bytes")))
    }

    pub fn u32(&mut self) -> Result<u32> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().expect("4 bytes")))
    }

    pub fn f64s(&mut self, count: usize) -> Result<Vec<f64>> {
        let need = count
            .checked_mul(8)
            .ok_or_else(|| Error::parse("header", "dimensions overflow"))?;
        let remaining = self.bytes.len() - self.pos;
        if need > remaining {
            return Err(Error::DimensionMismatch(format!(
                "header declares {count} values but only {} bytes follow",
                remaining
            )));
        }
        let raw = self.take(need)?;
        Ok(raw
            .chunks_exact(8)
            .map(|c| f64::from_le_bytes(c.try_into().expect("8 bytes")))
            .collect())
    }

    pub fn u32s(&mut self, count: usize) -> Result<Vec<u32>> {
        let raw = self.take(count * 4)?;
        Ok(raw
            .chunks_exact(4)
            .map(|c| u32::from_le_bytes(c.try_into().expect("4 bytes")))
            .collect())
    }

    pub fn finish(&self) -> Result<()> {
        if self.pos != self.bytes.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} trailing bytes after payload",
                self.bytes.len() - self.pos
            )));
        }
        Ok(())
    }
}

/// One non-negative integer label per line; `#` comments allowed.
pub fn parse_labels(text: &str) -> Result<Vec<usize>> {
    let mut labels = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let v = line
            .parse()
            .map_err(|_| Error::parse(format!("line {}", lineno + 1), format!("not a class index: `{line}`")))?;
        labels.push(v);
    }
    Ok(labels)
}

pub fn load_labels(path: &Path) -> Result<Vec<usize>> {
    parse_labels(&fs::read_to_string(path)?).map_err(|e| with_path(e, path))
}

pub fn save_labels(path: &Path, labels: &[usize]) -> Result<()> {
    let mut out = String::new();
    for l in labels {
        writeln!(out, "{l}").expect("writing to a String");
    }
    fs::write(path, out)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_identity() {
        let a = parse_csv("1,0\n0,1").unwrap();
        assert_eq!(a, Matrix::identity(2));
    }

    #[test]
    fn csv_header_and_round_trip() {
        let a = Matrix::from_rows(&[vec![0.1, -2.5e-300, 3.0], vec![1.0 / 3.0, 7.0, -0.0]]).unwrap();
        let text = format!("# exported\n{}", to_csv(&a));
        assert_eq!(parse_csv(&text).unwrap(), a);
    }

    #[test]
    fn csv_ragged_names_line() {
        match parse_csv("1,2\n3\n") {
            Err(Error::Parse { location, .. }) => assert_eq!(location, "line 2"),
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn bin_rejects_bad_magic_and_truncation() {
        let a = Matrix::identity(3);
        let mut bytes = encode_bin(&a);
        assert_eq!(decode_bin(&bytes).unwrap(), a);
        bytes.truncate(bytes.len() - 3);
        assert!(matches!(decode_bin(&bytes), Err(Error::DimensionMismatch(_))));
        assert!(matches!(decode_bin(b"NOPE\x01\x00"), Err(Error::Parse { .. })));
    }

    #[test]
    fn labels_parse() {
        assert_eq!(parse_labels("# labels\n0\n2\n\n1\n").unwrap(), vec![0, 2, 1]);
        assert!(parse_labels("0\n-1\n").is_err());
    }
}
