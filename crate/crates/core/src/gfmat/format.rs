//! `BMAT/1` text format.
//!
//! ```text
//! BMAT 1
//! <rows> <cols>
//! <row 0: exactly cols characters from {0,1}>
//! ...
//! ```
//!
//! Lines end in `\n`; the final newline is optional. Anything else is rejected.

use std::fmt::Write as _;

use super::BitMatrix;
use crate::error::{Error, Result};

pub const BMAT_MAGIC: &str = "BMAT 1";

/// Splits text into `\n`-terminated lines, allowing one optional trailing newline.
pub(crate) fn strict_lines(text: &str) -> Result<Vec<&str>> {
    if text.contains('\r') {
        return Err(Error::parse(0, "carriage returns are not allowed"));
    }
    let body = text.strip_suffix('\n').unwrap_or(text);
    Ok(body.split('\n').collect())
}

/// Parses `"<a> <b>"` where both are canonical positive decimals.
pub(crate) fn parse_dims(line: &str, lineno: usize) -> Result<(usize, usize)> {
    let mut parts = line.split(' ');
    let (Some(a), Some(b), None) = (parts.next(), parts.next(), parts.next()) else {
        return Err(Error::parse(
            lineno,
            format!("expected `<rows> <cols>`, got {line:?}"),
        ));
    };
    Ok((parse_positive(a, lineno)?, parse_positive(b, lineno)?))
}

pub(crate) fn parse_positive(tok: &str, lineno: usize) -> Result<usize> {
    let v = parse_canonical(tok, lineno)?;
    if v == 0 {
        return Err(Error::parse(lineno, "dimension must be positive"));
    }
    Ok(v)
}

pub(crate) fn parse_canonical(tok: &str, lineno: usize) -> Result<usize> {
    let ok = !tok.is_empty()
        && tok.bytes().all(|c| c.is_ascii_digit())
        && (tok == "0" || !tok.starts_with('0'));
    if !ok {
        return Err(Error::parse(lineno, format!("bad integer {tok:?}")));
    }
    tok.parse()
        .map_err(|_| Error::parse(lineno, format!("integer {tok:?} out of range")))
}

impl BitMatrix {
    pub fn to_bmat(&self) -> String {
        let mut out = String::with_capacity(16 + self.rows() * (self.cols() + 1));
        writeln!(out, "{BMAT_MAGIC}").unwrap();
        writeln!(out, "{} {}", self.rows(), self.cols()).unwrap();
        for i in 0..self.rows() {
            for j in 0..self.cols() {
                out.push(if self.get(i, j) { '1' } else { '0' });
            }
            out.push('\n');
        }
        out
    }

    pub fn parse_bmat(text: &str) -> Result<Self> {
        let lines = strict_lines(text)?;
        if lines.first() != Some(&BMAT_MAGIC) {
            return Err(Error::parse(1, format!("expected header {BMAT_MAGIC:?}")));
        }
        let dims = lines
            .get(1)
            .ok_or_else(|| Error::parse(2, "missing dimensions"))?;
        let (rows, cols) = parse_dims(dims, 2)?;
        if lines.len() != rows + 2 {
            return Err(Error::parse(
                lines.len().min(rows + 2) + 1,
                format!("expected {rows} matrix rows, found {}", lines.len() - 2),
            ));
        }
        let mut m = BitMatrix::zeros(rows, cols);
        for (i, line) in lines[2..].iter().enumerate() {
            let lineno = i + 3;
            if line.len() != cols {
                return Err(Error::parse(
                    lineno,
                    format!("expected {cols} characters, found {}", line.len()),
                ));
            }
            for (j, c) in line.bytes().enumerate() {
                match c {
                    b'0' => {}
                    b'1' => m.set(i, j, true),
                    _ => {
                        return Err(Error::parse(
                            lineno,
                            format!("bad character {:?}", c as char),
                        ))
                    }
                }
            }
        }
        Ok(m)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn renders_exactly() {
        let m = BitMatrix::from_rows(&[[1u8, 0, 1], [0, 0, 1]]);
        assert_eq!(m.to_bmat(), "BMAT 1\n2 3\n101\n001\n");
    }

    #[test]
    fn rejects_deviations() {
        for bad in [
            "BMAT 2\n1 1\n1\n",
            "BMAT 1\n1 1\n",
            "BMAT 1\n1 1\n10\n",
            "BMAT 1\n1 1\n2\n",
            "BMAT 1\n01 1\n1\n",
            "BMAT 1\n1  1\n1\n",
            "BMAT 1\n0 1\n",
            "BMAT 1\n1 1\n1\n\n",
            "BMAT 1\r\n1 1\r\n1\r\n",
            "BMAT 1\n2 1\n1\n0\n1\n",
            " BMAT 1\n1 1\n1\n",
        ] {
            assert!(BitMatrix::parse_bmat(bad).is_err(), "{bad:?} accepted");
        }
    }

    #[test]
    fn trailing_newline_optional() {
        let a = BitMatrix::parse_bmat("BMAT 1\n1 2\n10").unwrap();
        let b = BitMatrix::parse_bmat("BMAT 1\n1 2\n10\n").unwrap();
        assert_eq!(a, b);
    }

    proptest! {
        #[test]
        fn roundtrip(rows in 1usize..9, cols in 1usize..140, seed: u64) {
            use rand::SeedableRng;
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let m = BitMatrix::random(rows, cols, &mut rng);
            let text = m.to_bmat();
            prop_assert_eq!(BitMatrix::parse_bmat(&text).unwrap(), m);
        }
    }
}
