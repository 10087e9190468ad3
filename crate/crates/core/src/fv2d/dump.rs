//! Snapshot files: one JSON header line, then little-endian f64 planes
//! (ρ, ρv¹, ρv²), each of nx·ny values in storage order.

use super::grid::{Ghost, Grid2D};
use crate::error::{Error, Result};
use crate::riemann::RiemannData;
use crate::state::GasParams;
use crate::{Cons, Prim};
use serde::{Deserialize, Serialize};
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::Path;

pub const FORMAT: &str = "eulerfan-snapshot-1";
pub const FIELDS: [&str; 3] = ["rho", "rho_v1", "rho_v2"];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SnapshotHeader {
    pub format: String,
    pub nx: usize,
    pub ny: usize,
    pub dx1: f64,
    pub dx2: f64,
    pub x1_min: f64,
    pub time: f64,
    pub gamma: f64,
    pub k0: f64,
    pub left: [f64; 3],
    pub right: [f64; 3],
    pub fields: Vec<String>,
}

pub fn header_of(grid: &Grid2D) -> SnapshotHeader {
    let b = &grid.base;
    SnapshotHeader {
        format: FORMAT.to_string(),
        nx: grid.nx,
        ny: grid.ny,
        dx1: grid.dx1,
        dx2: grid.dx2,
        x1_min: grid.x1_min,
        time: grid.time,
        gamma: grid.gas.gamma,
        k0: grid.gas.k0,
        left: [b.left.rho, b.left.v1, b.left.v2],
        right: [b.right.rho, b.right.v1, b.right.v2],
        fields: FIELDS.iter().map(|s| s.to_string()).collect(),
    }
}

pub fn write_snapshot(path: &Path, grid: &Grid2D) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    let header = serde_json::to_string(&header_of(grid)).map_err(|e| Error::Io(e.to_string()))?;
    w.write_all(header.as_bytes())?;
    w.write_all(b"\n")?;
    for comp in 0..3 {
        for u in &grid.cells {
            w.write_all(&u.as_array()[comp].to_le_bytes())?;
        }
    }
    w.flush()?;
    Ok(())
}

pub fn read_snapshot(path: &Path) -> Result<Grid2D> {
    let mut r = BufReader::new(File::open(path)?);
    let mut line = String::new();
    r.read_line(&mut line)?;
    let h: SnapshotHeader = serde_json::from_str(line.trim_end()).map_err(|e| Error::Data(format!("{}: bad header: {e}", path.display())))?;
    if h.format != FORMAT || h.fields != FIELDS {
        return Err(Error::Data(format!("{}: unsupported snapshot format", path.display())));
    }
    let n = h.nx * h.ny;
    let mut buf = Vec::new();
    r.read_to_end(&mut buf)?;
    if buf.len() != 3 * n * 8 {
        return Err(Error::Data(format!("{}: payload has {} bytes, expected {}", path.display(), buf.len(), 3 * n * 8)));
    }
    let val = |k: usize| f64::from_le_bytes(buf[8 * k..8 * k + 8].try_into().unwrap());
    let gas = GasParams::new(h.gamma, h.k0)?;
    let p = |a: [f64; 3]| Prim::new(a[0], a[1], a[2]);
    let cells = (0..n).map(|k| Cons::new(val(k), val(n + k), val(2 * n + k))).collect();
    Ok(Grid2D {
        nx: h.nx,
        ny: h.ny,
        dx1: h.dx1,
        dx2: h.dx2,
        x1_min: h.x1_min,
        time: h.time,
        gas,
        base: RiemannData::new(gas, p(h.left), p(h.right)),
        cells,
        ghost_x1: Ghost::Outflow,
        ghost_x2: Ghost::Periodic,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fv2d::config::{PerturbationKind, RunConfig};
    use crate::fv2d::init::init_perturbed;

    #[test]
    fn round_trip_is_exact() {
        let cfg = RunConfig { nx: 10, ny: 6, epsilon: 0.1, perturbation: PerturbationKind::Full, ..Default::default() };
        let mut g = init_perturbed(&cfg).unwrap();
        g.time = 0.1 + 0.2;
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("s.snap");
        write_snapshot(&p, &g).unwrap();
        assert_eq!(read_snapshot(&p).unwrap(), g);
    }

    #[test]
    fn truncated_payload_is_a_data_error() {
        let cfg = RunConfig { nx: 4, ny: 4, ..Default::default() };
        let g = init_perturbed(&cfg).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("s.snap");
        write_snapshot(&p, &g).unwrap();
        let bytes = std::fs::read(&p).unwrap();
        std::fs::write(&p, &bytes[..bytes.len() - 8]).unwrap();
        assert!(matches!(read_snapshot(&p), Err(Error::Data(_))));
    }
}
