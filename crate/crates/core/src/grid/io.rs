//! Grid function serialization.
//!
//! Binary layout, all little-endian:
//!
//! | bytes | content |
//! |-------|---------|
//! | 4     | magic `DSGF` |
//! | 4     | `u32` format version (1) |
//! | 4     | `u32` dimension |
//! | 4     | `u32` depth |
//! | 16    | two `f64` lower-corner coordinates (unused axis is 0) |
//! | 8     | `f64` side length |
//! | 8·N   | `f64` cell values, row-major with the first axis fastest |
//!
//! CSV layout: a header line `dim,depth,lower0,lower1,side`, one line with
//! those values, then one cell value per line in the same order.

use std::io::{BufRead, Read, Write};

use super::{Geometry, GridBox, GridFunction};
use crate::error::{Error, Result};

const MAGIC: &[u8; 4] = b"DSGF";
const VERSION: u32 = 1;
const CSV_HEADER: &str = "dim,depth,lower0,lower1,side";

fn fmt_err(msg: impl Into<String>) -> Error {
    Error::Format(msg.into())
}

pub fn write_binary(f: &GridFunction, mut out: impl Write) -> Result<()> {
    let g = f.geometry();
    let bx = g.grid_box();
    out.write_all(MAGIC)?;
    out.write_all(&VERSION.to_le_bytes())?;
    out.write_all(&(g.dim() as u32).to_le_bytes())?;
    out.write_all(&g.depth().to_le_bytes())?;
    for a in 0..2 {
        let v = bx.lower().get(a).copied().unwrap_or(0.0);
        out.write_all(&v.to_le_bytes())?;
    }
    out.write_all(&bx.side().to_le_bytes())?;
    for v in f.values() {
        out.write_all(&v.to_le_bytes())?;
    }
    Ok(())
}

pub fn read_binary(mut input: impl Read) -> Result<GridFunction> {
    let mut magic = [0u8; 4];
    input.read_exact(&mut magic)?;
    if &magic != MAGIC {
        return Err(fmt_err("bad magic bytes"));
    }
    let mut u = [0u8; 4];
    let mut read_u32 = |r: &mut dyn Read| -> Result<u32> {
        r.read_exact(&mut u)?;
        Ok(u32::from_le_bytes(u))
    };
    let version = read_u32(&mut input)?;
    if version != VERSION {
        return Err(fmt_err(format!("unsupported version {version}")));
    }
    let dim = read_u32(&mut input)? as usize;
    let depth = read_u32(&mut input)?;
    let mut b = [0u8; 8];
    let mut read_f64 = |r: &mut dyn Read| -> Result<f64> {
        r.read_exact(&mut b)?;
        Ok(f64::from_le_bytes(b))
    };
    let lower = [read_f64(&mut input)?, read_f64(&mut input)?];
    let side = read_f64(&mut input)?;
    let geom = geometry(dim, depth, lower, side)?;
    let mut values = Vec::with_capacity(geom.cell_count());
    for _ in 0..geom.cell_count() {
        values.push(read_f64(&mut input)?);
    }
    GridFunction::new(geom, values)
}

fn geometry(dim: usize, depth: u32, lower: [f64; 2], side: f64) -> Result<Geometry> {
    if dim != 1 && dim != 2 {
        return Err(fmt_err(format!("dimension {dim} is not 1 or 2")));
    }
    let bx = GridBox::new(dim, &lower[..dim], side).map_err(|e| fmt_err(e.to_string()))?;
    Geometry::new(bx, depth).map_err(|e| fmt_err(e.to_string()))
}

pub fn write_csv(f: &GridFunction, mut out: impl Write) -> Result<()> {
    let g = f.geometry();
    let bx = g.grid_box();
    let lo = |a: usize| bx.lower().get(a).copied().unwrap_or(0.0);
    writeln!(out, "{CSV_HEADER}")?;
    writeln!(out, "{},{},{:?},{:?},{:?}", g.dim(), g.depth(), lo(0), lo(1), bx.side())?;
    for v in f.values() {
        writeln!(out, "{v:?}")?;
    }
    Ok(())
}

pub fn read_csv(input: impl BufRead) -> Result<GridFunction> {
    let mut lines = input.lines();
    let mut next =
        || -> Result<String> { lines.next().ok_or_else(|| fmt_err("unexpected end of file"))?.map_err(Error::from) };
    if next()?.trim() != CSV_HEADER {
        return Err(fmt_err("missing grid header"));
    }
    let head = next()?;
    let parts: Vec<&str> = head.trim().split(',').collect();
    if parts.len() != 5 {
        return Err(fmt_err("geometry line needs five fields"));
    }
    let num = |s: &str| s.trim().parse::<f64>().map_err(|e| fmt_err(format!("{s:?}: {e}")));
    let dim = parts[0].trim().parse::<usize>().map_err(|e| fmt_err(e.to_string()))?;
    let depth = parts[1].trim().parse::<u32>().map_err(|e| fmt_err(e.to_string()))?;
    let geom = geometry(dim, depth, [num(parts[2])?, num(parts[3])?], num(parts[4])?)?;
    let mut values = Vec::with_capacity(geom.cell_count());
    for line in lines {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        values.push(num(&line)?);
    }
    GridFunction::new(geom, values)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> GridFunction {
        let g = Geometry::new(GridBox::square([-1.0, 0.5], 2.0).unwrap(), 3).unwrap();
        GridFunction::from_fn(g, |x| x[0] * 0.1 + x[1].sin())
    }

    #[test]
    fn binary_round_trip_is_exact() {
        let f = sample();
        let mut buf = Vec::new();
        write_binary(&f, &mut buf).unwrap();
        assert_eq!(buf.len(), 40 + 8 * 64);
        assert_eq!(&buf[..4], b"DSGF");
        assert_eq!(read_binary(buf.as_slice()).unwrap(), f);
    }

    #[test]
    fn csv_round_trip_is_exact() {
        let f = sample();
        let mut buf = Vec::new();
        write_csv(&f, &mut buf).unwrap();
        assert_eq!(read_csv(buf.as_slice()).unwrap(), f);
    }

    #[test]
    fn truncated_input_is_rejected() {
        let f = sample();
        let mut buf = Vec::new();
        write_binary(&f, &mut buf).unwrap();
        buf.truncate(100);
        assert!(read_binary(buf.as_slice()).is_err());
        let bad = "dim,depth,lower0,lower1,side\n1,2,0,0,1\n1\n2\n";
        assert!(matches!(read_csv(bad.as_bytes()), Err(Error::Format(_))));
    }
}
