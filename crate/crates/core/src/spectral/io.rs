//! Field serialization.
//!
//! CSV: header `i0[,i1,...],re,im`, one row per grid point in flat order.
//!
//! Binary (all little-endian):
//!
//! | offset | size | content                         |
//! |--------|------|---------------------------------|
//! | 0      | 8    | magic `WBFIELD1`                |
//! | 8      | 4    | `u32` dimension `d`             |
//! | 12     | 4    | `u32` points per axis `n`       |
//! | 16     | 8    | `f64` box length `L`            |
//! | 24     | 8    | `u64` point count `n^d`         |
//! | 32     | 16·N | `(f64 re, f64 im)` per point    |

use std::io::{Read, Write};
use std::path::Path;

use num_complex::Complex64;

use super::{ComplexField, Grid};
use crate::error::{Error, Result};

pub const MAGIC: &[u8; 8] = b"WBFIELD1";
pub const HEADER_LEN: usize = 32;

pub fn write_binary<W: Write>(field: &ComplexField, mut out: W) -> Result<()> {
    let grid = field.grid();
    let mut header = [0u8; HEADER_LEN];
    header[0..8].copy_from_slice(MAGIC);
    header[8..12].copy_from_slice(&(grid.dim() as u32).to_le_bytes());
    header[12..16].copy_from_slice(&(grid.points_per_axis() as u32).to_le_bytes());
    header[16..24].copy_from_slice(&grid.box_length().to_le_bytes());
    header[24..32].copy_from_slice(&(grid.len() as u64).to_le_bytes());
    out.write_all(&header)?;
    let mut body = Vec::with_capacity(16 * grid.len());
    for z in field.values() {
        body.extend_from_slice(&z.re.to_le_bytes());
        body.extend_from_slice(&z.im.to_le_bytes());
    }
    out.write_all(&body)?;
    Ok(())
}

pub fn read_binary<R: Read>(mut input: R) -> Result<ComplexField> {
    let mut header = [0u8; HEADER_LEN];
    input.read_exact(&mut header)?;
    if &header[0..8] != MAGIC {
        return Err(Error::Format("bad magic".into()));
    }
    let word = |r: std::ops::Range<usize>| -> [u8; 4] { header[r].try_into().unwrap() };
    let dword = |r: std::ops::Range<usize>| -> [u8; 8] { header[r].try_into().unwrap() };
    let dim = u32::from_le_bytes(word(8..12)) as usize;
    let n = u32::from_le_bytes(word(12..16)) as usize;
    let length = f64::from_le_bytes(dword(16..24));
    let count = u64::from_le_bytes(dword(24..32)) as usize;
    let grid = Grid::new(dim, n, length)?;
    if count != grid.len() {
        return Err(Error::Format(format!(
            "point count {count} does not match grid size {}",
            grid.len()
        )));
    }
    let mut body = vec![0u8; 16 * count];
    input.read_exact(&mut body)?;
    let values = body
        .chunks_exact(16)
        .map(|chunk| {
            Complex64::new(
                f64::from_le_bytes(chunk[0..8].try_into().unwrap()),
                f64::from_le_bytes(chunk[8..16].try_into().unwrap()),
            )
        })
        .collect();
    ComplexField::new(grid, values)
}

pub fn write_csv<W: Write>(field: &ComplexField, out: W) -> Result<()> {
    let grid = field.grid();
    let mut writer = csv::Writer::from_writer(out);
    let mut header: Vec<String> = (0..grid.dim()).map(|a| format!("i{a}")).collect();
    header.push("re".into());
    header.push("im".into());
    writer.write_record(&header)?;
    for (flat, z) in field.values().iter().enumerate() {
        let mut row: Vec<String> = grid
            .multi_index(flat)
            .iter()
            .map(|i| i.to_string())
            .collect();
        row.push(format!("{:e}", z.re));
        row.push(format!("{:e}", z.im));
        writer.write_record(&row)?;
    }
    writer.flush()?;
    Ok(())
}

/// Reads a CSV field written by [`write_csv`]; the grid must be supplied
/// since the CSV carries only indices.
pub fn read_csv<R: Read>(grid: Grid, input: R) -> Result<ComplexField> {
    let mut reader = csv::Reader::from_reader(input);
    let mut values = vec![Complex64::new(0.0, 0.0); grid.len()];
    let mut seen = vec![false; grid.len()];
    for record in reader.records() {
        let record = record?;
        if record.len() != grid.dim() + 2 {
            return Err(Error::Format(format!(
                "expected {} columns, got {}",
                grid.dim() + 2,
                record.len()
            )));
        }
        let parse_err = |s: &str| Error::Format(format!("unparsable entry '{s}'"));
        let mut idx = Vec::with_capacity(grid.dim());
        for s in record.iter().take(grid.dim()) {
            let i: usize = s.parse().map_err(|_| parse_err(s))?;
            if i >= grid.points_per_axis() {
                return Err(Error::Format(format!("index {i} out of range")));
            }
            idx.push(i);
        }
        let re: f64 = record[grid.dim()]
            .parse()
            .map_err(|_| parse_err(&record[grid.dim()]))?;
        let im: f64 = record[grid.dim() + 1]
            .parse()
            .map_err(|_| parse_err(&record[grid.dim() + 1]))?;
        let flat = grid.flat_index(&idx);
        values[flat] = Complex64::new(re, im);
        seen[flat] = true;
    }
    if let Some(missing) = seen.iter().position(|s| !s) {
        return Err(Error::Format(format!("grid point {missing} missing")));
    }
    ComplexField::new(grid, values)
}

pub fn save_binary(field: &ComplexField, path: &Path) -> Result<()> {
    let file = std::fs::File::create(path)?;
    write_binary(field, std::io::BufWriter::new(file))
}

pub fn load_binary(path: &Path) -> Result<ComplexField> {
    read_binary(std::io::BufReader::new(std::fs::File::open(path)?))
}

pub fn save_csv(field: &ComplexField, path: &Path) -> Result<()> {
    write_csv(field, std::fs::File::create(path)?)
}
