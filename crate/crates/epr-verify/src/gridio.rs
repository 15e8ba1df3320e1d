//! Text and binary files for grid functions.
//!
//! Text: a header line `axes points extent`, then one `re im` line per
//! node in storage order. Binary (little endian): `u32 axes`, `u32 points`,
//! `f64 extent`, then `f64` pairs.

use epr_phase::{Axes, ComplexGrid, GridFunction, C64};
use std::io::{self, BufRead, Read, Write};

#[derive(Debug, thiserror::Error)]
pub enum GridIoError {
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error("malformed grid file: {0}")]
    Format(String),
}

fn format_err(msg: impl Into<String>) -> GridIoError {
    GridIoError::Format(msg.into())
}

fn axes_code(axes: Axes) -> u32 {
    axes.count() as u32
}

fn grid_from(axes: u32, points: usize, extent: f64) -> Result<ComplexGrid, GridIoError> {
    let axes = match axes {
        2 => Axes::Two,
        4 => Axes::Four,
        other => return Err(format_err(format!("axes must be 2 or 4, found {other}"))),
    };
    ComplexGrid::new(axes, points, extent).map_err(|e| format_err(e.to_string()))
}

pub fn write_text(f: &GridFunction, mut w: impl Write) -> io::Result<()> {
    let g = f.grid();
    writeln!(w, "{} {} {:?}", axes_code(g.axes()), g.points(), g.extent())?;
    for v in f.samples() {
        writeln!(w, "{:?} {:?}", v.re, v.im)?;
    }
    Ok(())
}

pub fn read_text(r: impl BufRead) -> Result<GridFunction, GridIoError> {
    let mut lines = r.lines();
    let header = lines.next().ok_or_else(|| format_err("empty file"))??;
    let parts: Vec<&str> = header.split_whitespace().collect();
    let [a, p, l] = parts[..] else { return Err(format_err("header needs `axes points extent`")) };
    let parse = |s: &str| s.parse::<f64>().map_err(|_| format_err(format!("bad number `{s}`")));
    let axes = a.parse().map_err(|_| format_err("bad axes"))?;
    let points = p.parse().map_err(|_| format_err("bad point count"))?;
    let grid = grid_from(axes, points, parse(l)?)?;
    let mut samples = Vec::with_capacity(grid.len());
    for line in lines {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let mut it = line.split_whitespace();
        let (Some(re), Some(im), None) = (it.next(), it.next(), it.next()) else {
            return Err(format_err("sample lines hold `re im`"));
        };
        samples.push(C64::new(parse(re)?, parse(im)?));
    }
    GridFunction::new(grid, samples).map_err(|e| format_err(e.to_string()))
}

pub fn write_binary(f: &GridFunction, mut w: impl Write) -> io::Result<()> {
    let g = f.grid();
    w.write_all(&axes_code(g.axes()).to_le_bytes())?;
    w.write_all(&(g.points() as u32).to_le_bytes())?;
    w.write_all(&g.extent().to_le_bytes())?;
    for v in f.samples() {
        w.write_all(&v.re.to_le_bytes())?;
        w.write_all(&v.im.to_le_bytes())?;
    }
    Ok(())
}

pub fn read_binary(mut r: impl Read) -> Result<GridFunction, GridIoError> {
    let mut u = [0u8; 4];
    let mut d = [0u8; 8];
    r.read_exact(&mut u)?;
    let axes = u32::from_le_bytes(u);
    r.read_exact(&mut u)?;
    let points = u32::from_le_bytes(u) as usize;
    r.read_exact(&mut d)?;
    let grid = grid_from(axes, points, f64::from_le_bytes(d))?;
    let mut samples = Vec::with_capacity(grid.len());
    for _ in 0..grid.len() {
        r.read_exact(&mut d)?;
        let re = f64::from_le_bytes(d);
        r.read_exact(&mut d)?;
        samples.push(C64::new(re, f64::from_le_bytes(d)));
    }
    if r.read(&mut d)? != 0 {
        return Err(format_err("trailing bytes"));
    }
    GridFunction::new(grid, samples).map_err(|e| format_err(e.to_string()))
}
