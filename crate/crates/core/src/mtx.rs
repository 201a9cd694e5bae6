//! Matrix Market "array" format I/O for dense complex matrices and vectors.
//!
//! Files use the header `%%MatrixMarket matrix array complex general` and
//! store entries column-major as `real imag` pairs with 17 significant
//! digits, which round-trips `f64` exactly.

use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{CMatrix, CVector};

const HEADER: &str = "%%MatrixMarket matrix array complex general";

/// Formats a float with 17 significant digits (exact f64 round trip).
pub fn fmt_g17(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn write_matrix(w: &mut impl Write, m: &CMatrix) -> Result<()> {
    writeln!(w, "{HEADER}")?;
    writeln!(w, "{} {}", m.rows(), m.cols())?;
    for j in 0..m.cols() {
        for i in 0..m.rows() {
            let z = m[(i, j)];
            writeln!(w, "{} {}", fmt_g17(z.re), fmt_g17(z.im))?;
        }
    }
    Ok(())
}

pub fn write_matrix_file(path: impl AsRef<Path>, m: &CMatrix) -> Result<()> {
    let mut f = std::io::BufWriter::new(std::fs::File::create(path)?);
    write_matrix(&mut f, m)
}

/// Vectors are stored as `n x 1` matrices.
pub fn write_vector_file(path: impl AsRef<Path>, v: &CVector) -> Result<()> {
    let m = CMatrix::from_columns(std::slice::from_ref(v));
    write_matrix_file(path, &m)
}

pub fn read_matrix(r: &mut impl BufRead) -> Result<CMatrix> {
    let mut lines = r.lines().enumerate();

    let (lineno, header) = next_line(&mut lines)?;
    let header = header.trim();
    if !header.starts_with("%%MatrixMarket") {
        return Err(parse_err(lineno, "missing %%MatrixMarket banner"));
    }
    let tokens: Vec<&str> = header.split_whitespace().collect();
    if tokens.len() < 5
        || !tokens[1].eq_ignore_ascii_case("matrix")
        || !tokens[2].eq_ignore_ascii_case("array")
        || !tokens[3].eq_ignore_ascii_case("complex")
        || !tokens[4].eq_ignore_ascii_case("general")
    {
        return Err(parse_err(
            lineno,
            format!("unsupported Matrix Market type: [{header}]"),
        ));
    }

    // skip comment lines
    let (lineno, dims) = loop {
        let (lineno, line) = next_line(&mut lines)?;
        let trimmed = line.trim().to_string();
        if trimmed.is_empty() || trimmed.starts_with('%') {
            continue;
        }
        break (lineno, trimmed);
    };
    let parts: Vec<&str> = dims.split_whitespace().collect();
    if parts.len() != 2 {
        return Err(parse_err(lineno, "expected `rows cols` size line"));
    }
    let rows: usize = parts[0].parse().map_err(|_| parse_err(lineno, "bad row count"))?;
    let cols: usize = parts[1].parse().map_err(|_| parse_err(lineno, "bad column count"))?;

    let mut data = Vec::with_capacity(rows * cols);
    while data.len() < rows * cols {
        let (lineno, line) = next_line(&mut lines)?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('%') {
            continue;
        }
        let parts: Vec<&str> = trimmed.split_whitespace().collect();
        if parts.len() != 2 {
            return Err(parse_err(lineno, "expected `real imag` entry"));
        }
        let re: f64 = parts[0].parse().map_err(|_| parse_err(lineno, "bad real part"))?;
        let im: f64 = parts[1].parse().map_err(|_| parse_err(lineno, "bad imaginary part"))?;
        data.push(Complex64::new(re, im));
    }
    CMatrix::new(rows, cols, data)
}

pub fn read_matrix_file(path: impl AsRef<Path>) -> Result<CMatrix> {
    let mut r = BufReader::new(std::fs::File::open(path)?);
    read_matrix(&mut r)
}

pub fn read_vector_file(path: impl AsRef<Path>) -> Result<CVector> {
    let m = read_matrix_file(path)?;
    if m.cols() != 1 {
        return Err(Error::invalid(format!(
            "expected a single-column vector file, got {} columns",
            m.cols()
        )));
    }
    Ok(m.col(0))
}

fn next_line(
    lines: &mut impl Iterator<Item = (usize, std::io::Result<String>)>,
) -> Result<(usize, String)> {
    match lines.next() {
        Some((i, Ok(line))) => Ok((i + 1, line)),
        Some((i, Err(e))) => Err(Error::Parse { line: i + 1, message: e.to_string() }),
        None => Err(Error::Parse { line: 0, message: "unexpected end of file".into() }),
    }
}

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse { line, message: message.into() }
}
