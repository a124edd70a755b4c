//! Field files, result summaries and CSV output.
//!
//! A field file is a text header of `key=value` lines (`n`, `L`, `a`, `rho`, `p`, `kind`),
//! one blank line, then `n³` little-endian `f64` samples in row-major order.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::grid::{make_grid, Field};
use crate::solve::MinimizeResult;

#[derive(Debug, Clone, PartialEq)]
pub struct FieldMeta {
    pub a: f64,
    pub rho: f64,
    pub p: f64,
    /// What the samples hold, e.g. `u` or `phi`.
    pub kind: String,
}

pub fn encode_field(field: &Field, meta: &FieldMeta) -> Vec<u8> {
    let g = field.grid();
    let mut head = String::new();
    let _ = writeln!(head, "n={}", g.n());
    let _ = writeln!(head, "L={}", g.half_width());
    let _ = writeln!(head, "a={}", meta.a);
    let _ = writeln!(head, "rho={}", meta.rho);
    let _ = writeln!(head, "p={}", meta.p);
    let _ = writeln!(head, "kind={}", meta.kind);
    head.push('\n');
    let mut out = head.into_bytes();
    out.reserve(8 * field.values().len());
    for v in field.values() {
        out.extend_from_slice(&v.to_le_bytes());
    }
    out
}

pub fn decode_field(bytes: &[u8]) -> Result<(Field, FieldMeta)> {
    let split = bytes
        .windows(2)
        .position(|w| w == b"\n\n")
        .ok_or_else(|| Error::Format("field file has no blank line after the header".into()))?;
    let head = std::str::from_utf8(&bytes[..split]).map_err(|_| Error::Format("field header is not UTF-8".into()))?;
    let body = &bytes[split + 2..];

    let mut n = None;
    let mut l = None;
    let mut a = None;
    let mut rho = None;
    let mut p = None;
    let mut kind = None;
    for (no, line) in head.lines().enumerate() {
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| Error::Format(format!("header line {}: expected key=value", no + 1)))?;
        let num = || {
            v.trim()
                .parse::<f64>()
                .map_err(|_| Error::Format(format!("header line {}: bad number {v:?}", no + 1)))
        };
        match k.trim() {
            "n" => {
                n = Some(
                    v.trim()
                        .parse::<usize>()
                        .map_err(|_| Error::Format(format!("header line {}: bad integer {v:?}", no + 1)))?,
                )
            }
            "L" => l = Some(num()?),
            "a" => a = Some(num()?),
            "rho" => rho = Some(num()?),
            "p" => p = Some(num()?),
            "kind" => kind = Some(v.trim().to_string()),
            other => return Err(Error::Format(format!("header line {}: unknown key {other:?}", no + 1))),
        }
    }
    let missing = |k: &str| Error::Format(format!("field header lacks {k}"));
    let n = n.ok_or_else(|| missing("n"))?;
    let grid = make_grid(n, l.ok_or_else(|| missing("L"))?)?;
    if body.len() != 8 * grid.len() {
        return Err(Error::Format(format!(
            "field body has {} bytes, expected {}",
            body.len(),
            8 * grid.len()
        )));
    }
    let values = body
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().expect("chunk of 8")))
        .collect();
    let meta = FieldMeta {
        a: a.ok_or_else(|| missing("a"))?,
        rho: rho.ok_or_else(|| missing("rho"))?,
        p: p.ok_or_else(|| missing("p"))?,
        kind: kind.ok_or_else(|| missing("kind"))?,
    };
    Ok((Field::new(&grid, values)?, meta))
}

pub fn write_field(path: &Path, field: &Field, meta: &FieldMeta) -> Result<()> {
    fs::write(path, encode_field(field, meta))?;
    Ok(())
}

pub fn read_field(path: &Path) -> Result<(Field, FieldMeta)> {
    decode_field(&fs::read(path)?)
}

/// Formats a float with 17 significant digits.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

/// `key=value` summary of a solver run.
pub fn summary(res: &MinimizeResult) -> String {
    let e = &res.energy;
    let mut s = String::new();
    for (k, v) in [
        ("J", e.total),
        ("kinetic", e.kinetic),
        ("nonlocal", e.nonlocal),
        ("potential", e.potential),
        ("omega", res.omega),
        ("residual", res.residual),
    ] {
        let _ = writeln!(s, "{k}={}", fmt_f64(v));
    }
    let _ = writeln!(s, "iters={}", res.iters);
    let _ = writeln!(s, "converged={}", res.converged);
    s
}

/// `iter,J,residual` history CSV.
pub fn history_csv(res: &MinimizeResult) -> String {
    let mut s = String::from("iter,J,residual\n");
    for h in &res.history {
        let _ = writeln!(s, "{},{},{}", h.iter, fmt_f64(h.energy), fmt_f64(h.residual));
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_bit_exact() {
        let g = make_grid(8, 1.1).unwrap();
        let f = Field::from_fn(&g, |x, y, z| (x + 2.0 * y).sin() * z.exp() / 3.0);
        let meta = FieldMeta {
            a: 0.1,
            rho: 1.0 / 3.0,
            p: 2.5,
            kind: "u".into(),
        };
        let (back, m) = decode_field(&encode_field(&f, &meta)).unwrap();
        assert_eq!(m, meta);
        assert_eq!(back.grid(), f.grid());
        for (a, b) in back.values().iter().zip(f.values()) {
            assert_eq!(a.to_bits(), b.to_bits());
        }
    }

    #[test]
    fn rejects_malformed() {
        assert!(decode_field(b"n=8\nL=1").is_err());
        assert!(decode_field(b"n=8\nL=1\na=0\nrho=1\np=2.5\nkind=u\n\n1234").is_err());
        assert!(decode_field(b"n=8\nL=1\nzzz=0\n\n").is_err());
        assert!(decode_field(b"n=8\nL=1\na=0\nrho=1\np=2.5\n\n").is_err());
    }
}
