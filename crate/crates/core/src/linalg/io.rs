//! Plain-text matrix sample files.
//!
//! Line 1 holds `n N`; then `N` blocks of `n` lines with `n` floats each,
//! printed with 17 significant digits.

use std::io::{BufRead, Write};

use super::group::{validate_group_element, GroupElement};
use super::matrix::Matrix;
use crate::error::{Error, Result};

pub fn write_samples<W: Write>(mut w: W, sample: &[GroupElement]) -> Result<()> {
    let n = sample.first().map_or(0, GroupElement::dim);
    writeln!(w, "{} {}", n, sample.len())?;
    for g in sample {
        if g.dim() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: g.dim(),
            });
        }
        for i in 0..n {
            let row = g.matrix().row(i);
            let mut line = String::with_capacity(n * 25);
            for (j, v) in row.iter().enumerate() {
                if j > 0 {
                    line.push(' ');
                }
                line.push_str(&format!("{v:.16e}"));
            }
            writeln!(w, "{line}")?;
        }
    }
    w.flush()?;
    Ok(())
}

pub fn read_samples<R: BufRead>(r: R, tol: f64) -> Result<Vec<GroupElement>> {
    let mut lines = r
        .lines()
        .enumerate()
        .filter(|(_, l)| l.as_ref().map_or(true, |s| !s.trim().is_empty()));
    let (_, header) = lines.next().ok_or(Error::Parse {
        line: 1,
        reason: "missing header".into(),
    })?;
    let header = header?;
    let mut fields = header.split_whitespace().map(str::parse::<usize>);
    let (n, count) = match (fields.next(), fields.next(), fields.next()) {
        (Some(Ok(n)), Some(Ok(c)), None) => (n, c),
        _ => {
            return Err(Error::Parse {
                line: 1,
                reason: format!("expected `n N`, found `{header}`"),
            })
        }
    };
    let mut out = Vec::with_capacity(count);
    for _ in 0..count {
        let mut data = Vec::with_capacity(n * n);
        for _ in 0..n {
            let (idx, line) = lines.next().ok_or(Error::Parse {
                line: 0,
                reason: "unexpected end of file".into(),
            })?;
            let line = line?;
            let before = data.len();
            for tok in line.split_whitespace() {
                data.push(tok.parse::<f64>().map_err(|e| Error::Parse {
                    line: idx + 1,
                    reason: e.to_string(),
                })?);
            }
            if data.len() - before != n {
                return Err(Error::Parse {
                    line: idx + 1,
                    reason: format!("expected {n} values, found {}", data.len() - before),
                });
            }
        }
        out.push(validate_group_element(Matrix::from_row_major(n, n, data), tol)?);
    }
    Ok(out)
}
