//! Dense operator matrices for cross-checking with external tools.
//!
//! Binary layout: `rows` and `cols` as little-endian `u64`, then the entries in
//! row-major order, each as two little-endian `f64` (real part, imaginary part).
//! CSV layout: header `row,col,re,im`, one line per entry in row-major order.

use crate::{CMatrix, C64};
use std::io::{self, Read, Write};

pub fn write_dense_binary<W: Write>(m: &CMatrix, mut w: W) -> io::Result<()> {
    w.write_all(&(m.nrows() as u64).to_le_bytes())?;
    w.write_all(&(m.ncols() as u64).to_le_bytes())?;
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            let z = m[(i, j)];
            w.write_all(&z.re.to_le_bytes())?;
            w.write_all(&z.im.to_le_bytes())?;
        }
    }
    w.flush()
}

pub fn read_dense_binary<R: Read>(mut r: R) -> io::Result<CMatrix> {
    let mut word = [0u8; 8];
    let mut next = |r: &mut R| -> io::Result<[u8; 8]> {
        r.read_exact(&mut word)?;
        Ok(word)
    };
    let rows = u64::from_le_bytes(next(&mut r)?) as usize;
    let cols = u64::from_le_bytes(next(&mut r)?) as usize;
    let mut m = CMatrix::zeros(rows, cols);
    for i in 0..rows {
        for j in 0..cols {
            let re = f64::from_le_bytes(next(&mut r)?);
            let im = f64::from_le_bytes(next(&mut r)?);
            m[(i, j)] = C64::new(re, im);
        }
    }
    Ok(m)
}

pub fn write_dense_csv<W: Write>(m: &CMatrix, mut w: W) -> io::Result<()> {
    writeln!(w, "row,col,re,im")?;
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            let z = m[(i, j)];
            writeln!(w, "{i},{j},{:e},{:e}", z.re, z.im)?;
        }
    }
    w.flush()
}
