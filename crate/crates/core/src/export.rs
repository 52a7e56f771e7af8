//! Shared artifact writers: PGM images and the CSV shapes used by the
//! command-line tools. All numeric output uses Rust's shortest
//! round-trip decimal formatting, so re-parsing reproduces exact values.

use std::io::{self, Write};

use crate::graph::{Graph, NodeId};
use crate::stats::Histogram;

/// ASCII (P2) 8-bit grayscale image, one pixel row per line.
pub fn write_pgm_p2<W: Write>(
    mut out: W,
    width: usize,
    height: usize,
    pixels: &[u8],
) -> io::Result<()> {
    assert_eq!(pixels.len(), width * height, "pixel buffer shape mismatch");
    writeln!(out, "P2")?;
    writeln!(out, "{width} {height}")?;
    writeln!(out, "255")?;
    for row in pixels.chunks(width.max(1)) {
        let mut line = String::with_capacity(row.len() * 4);
        for (i, px) in row.iter().enumerate() {
            if i > 0 {
                line.push(' ');
            }
            line.push_str(&px.to_string());
        }
        writeln!(out, "{line}")?;
    }
    Ok(())
}

/// Binary (P5) 8-bit grayscale image.
pub fn write_pgm_p5<W: Write>(
    mut out: W,
    width: usize,
    height: usize,
    pixels: &[u8],
) -> io::Result<()> {
    assert_eq!(pixels.len(), width * height, "pixel buffer shape mismatch");
    write!(out, "P5\n{width} {height}\n255\n")?;
    out.write_all(pixels)
}

/// Histogram rows `bin_lo,bin_hi,count`; empty histograms produce only
/// the header.
pub fn write_histogram_csv<W: Write>(mut out: W, h: &Histogram) -> io::Result<()> {
    writeln!(out, "bin_lo,bin_hi,count")?;
    for (window, count) in h.edges.windows(2).zip(&h.counts) {
        writeln!(out, "{},{},{count}", window[0], window[1])?;
    }
    Ok(())
}

/// Per-edge values as `u,w,<name>` rows over canonical compact ids.
pub fn write_edge_values_csv<W: Write>(
    mut out: W,
    g: &Graph,
    values: &[f64],
    name: &str,
) -> io::Result<()> {
    assert_eq!(values.len(), g.edge_count(), "one value per edge");
    writeln!(out, "u,w,{name}")?;
    for (&(u, w), value) in g.edges().iter().zip(values) {
        writeln!(out, "{u},{w},{value}")?;
    }
    Ok(())
}

/// Per-node values as `v,<name>` rows over compact ids.
pub fn write_node_values_csv<W: Write>(mut out: W, values: &[f64], name: &str) -> io::Result<()> {
    writeln!(out, "v,{name}")?;
    for (v, value) in values.iter().enumerate() {
        writeln!(out, "{v},{value}")?;
    }
    Ok(())
}

/// Dense row-major node-by-node matrix as CSV; NaN entries (non-edges)
/// are written as `nan`.
pub fn write_dense_matrix_csv<W: Write>(mut out: W, n: usize, cells: &[f64]) -> io::Result<()> {
    assert_eq!(cells.len(), n * n, "matrix shape mismatch");
    for row in cells.chunks(n.max(1)) {
        let mut line = String::with_capacity(row.len() * 8);
        for (i, cell) in row.iter().enumerate() {
            if i > 0 {
                line.push(',');
            }
            if cell.is_nan() {
                line.push_str("nan");
            } else {
                line.push_str(&cell.to_string());
            }
        }
        writeln!(out, "{line}")?;
    }
    Ok(())
}

/// Sparse matrix triplets as `u,w,<name>` rows.
pub fn write_triplets_csv<W: Write>(
    mut out: W,
    triplets: &[(NodeId, NodeId, f64)],
    name: &str,
) -> io::Result<()> {
    writeln!(out, "u,w,{name}")?;
    for &(u, w, value) in triplets {
        writeln!(out, "{u},{w},{value}")?;
    }
    Ok(())
}
