//! RWF1 binary dumps and CSV export.
//!
//! RWF1 layout (little-endian): `b"RWF1"`, `u32 N`, `u32 n`, `f64 L`, then
//! `n^N` pairs `(re, im)` of `f64` in row-major node order.

use std::io::{BufWriter, Read, Write};
use std::path::Path;

use num_complex::Complex64;

use super::{Field, Grid};
use crate::error::{Error, Result};

const MAGIC: &[u8; 4] = b"RWF1";

pub fn write_rwf1(u: &Field, path: &Path) -> Result<()> {
    let mut w = BufWriter::new(std::fs::File::create(path)?);
    write_rwf1_to(u, &mut w)?;
    w.flush()?;
    Ok(())
}

pub(crate) fn write_rwf1_to(u: &Field, w: &mut impl Write) -> Result<()> {
    let g = u.grid();
    w.write_all(MAGIC)?;
    w.write_all(&(g.dim() as u32).to_le_bytes())?;
    w.write_all(&(g.n() as u32).to_le_bytes())?;
    w.write_all(&g.half_width().to_le_bytes())?;
    for v in u.values() {
        w.write_all(&v.re.to_le_bytes())?;
        w.write_all(&v.im.to_le_bytes())?;
    }
    Ok(())
}

pub fn read_rwf1(path: &Path) -> Result<Field> {
    let mut bytes = Vec::new();
    std::fs::File::open(path)?.read_to_end(&mut bytes)?;
    parse_rwf1(&bytes)
}

pub(crate) fn parse_rwf1(bytes: &[u8]) -> Result<Field> {
    if bytes.len() < 20 || &bytes[..4] != MAGIC {
        return Err(Error::Format("missing RWF1 header".into()));
    }
    let u32_at = |o: usize| u32::from_le_bytes(bytes[o..o + 4].try_into().unwrap());
    let f64_at = |o: usize| f64::from_le_bytes(bytes[o..o + 8].try_into().unwrap());
    let dim = u32_at(4) as usize;
    let n = u32_at(8) as usize;
    let half_width = f64_at(12);
    let grid = Grid::new(dim, half_width, n).map_err(|e| Error::Format(e.to_string()))?;
    let expected = 20 + 16 * grid.len();
    if bytes.len() != expected {
        return Err(Error::Format(format!("expected {expected} bytes, found {}", bytes.len())));
    }
    let values = (0..grid.len()).map(|i| Complex64::new(f64_at(20 + 16 * i), f64_at(28 + 16 * i))).collect();
    Field::from_values(grid, values).map_err(|e| Error::Format(e.to_string()))
}

/// One row per node: index vector, coordinates, re, im.
pub fn write_csv(u: &Field, path: &Path) -> Result<()> {
    let mut w = BufWriter::new(std::fs::File::create(path)?);
    let g = u.grid();
    let axes = ["i", "j", "k"];
    let coords = ["x", "y", "z"];
    let header: Vec<&str> = axes[..g.dim()].iter().chain(&coords[..g.dim()]).copied().chain(["re", "im"]).collect();
    writeln!(w, "{}", header.join(","))?;
    for (idx, v) in u.values().iter().enumerate() {
        let m = g.multi_index(idx);
        let p = g.point(idx);
        for mi in m.iter().take(g.dim()) {
            write!(w, "{mi},")?;
        }
        for pi in p.iter().take(g.dim()) {
            write!(w, "{pi:e},")?;
        }
        writeln!(w, "{:e},{:e}", v.re, v.im)?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rwf1_roundtrip() {
        let g = Grid::new(2, 1.5, 5).unwrap();
        let u = Field::from_fn(g, |p| Complex64::new(p[0], -p[1] * 1e-300)).unwrap();
        let mut buf = Vec::new();
        write_rwf1_to(&u, &mut buf).unwrap();
        assert_eq!(&buf[..4], b"RWF1");
        assert_eq!(buf.len(), 20 + 16 * 25);
        assert_eq!(u32::from_le_bytes(buf[4..8].try_into().unwrap()), 2);
        assert_eq!(u32::from_le_bytes(buf[8..12].try_into().unwrap()), 5);
        assert_eq!(f64::from_le_bytes(buf[12..20].try_into().unwrap()), 1.5);
        assert_eq!(parse_rwf1(&buf).unwrap(), u);
    }

    #[test]
    fn rwf1_rejects_garbage() {
        assert!(parse_rwf1(b"RWF0aaaaaaaaaaaaaaaaaaaa").is_err());
        let g = Grid::new(2, 1.0, 3).unwrap();
        let mut buf = Vec::new();
        write_rwf1_to(&Field::zeros(g), &mut buf).unwrap();
        buf.pop();
        assert!(parse_rwf1(&buf).is_err());
    }

    #[test]
    fn csv_rows() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("u.csv");
        let g = Grid::new(2, 1.0, 3).unwrap();
        write_csv(&Field::zeros(g), &path).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        let lines: Vec<_> = text.lines().collect();
        assert_eq!(lines[0], "i,j,x,y,re,im");
        assert_eq!(lines.len(), 10);
        assert_eq!(lines[1], "0,0,-1e0,-1e0,0e0,0e0");
    }
}
