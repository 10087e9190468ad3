//! Primitive field levels, snapshot triples, masks and regions.

use crate::error::{Error, Result};
use crate::field::{Field2, X2Boundary};
use crate::fv2d::Grid2D;
use crate::riemann::{classify_and_solve, WaveKind};
use crate::state::curl_and_specific_vorticity;
use crate::{Data, Fan, Gas, Prim};

/// Relative density jump, and absolute velocity jump over c, that flag a discontinuity.
pub const JUMP_FRACTION: f64 = 0.1;
/// Dilation of the discontinuity mask, in cells.
pub const MASK_DILATION: usize = 3;
/// Cells next to each x₁ edge kept out of every statistic (one-sided stencils).
pub const EDGE_CELLS: usize = 2;

/// Primitive fields at one time level.
#[derive(Debug, Clone, PartialEq)]
pub struct Level {
    pub time: f64,
    pub rho: Field2<f64>,
    pub c: Field2<f64>,
    pub v1: Field2<f64>,
    pub v2: Field2<f64>,
}

impl Level {
    pub fn of_grid(grid: &Grid2D) -> Self {
        let (rho, v1, v2) = grid.prim_fields();
        let g = grid.gas;
        let c = rho.map(|r| if r > 0.0 { g.c_of_rho(r) } else { 0.0 });
        Self { time: grid.time, rho, c, v1, v2 }
    }

    pub fn nx(&self) -> usize {
        self.rho.nx
    }

    pub fn ny(&self) -> usize {
        self.rho.ny
    }

    /// w̄ = c/(γ−1) + v¹/2.
    pub fn wbar(&self, g: &Gas) -> Field2<f64> {
        let k = 1.0 / (g.gamma - 1.0);
        self.c.zip(&self.v1, |c, v| k * c + 0.5 * v)
    }

    /// w = c/(γ−1) − v¹/2.
    pub fn w(&self, g: &Gas) -> Field2<f64> {
        let k = 1.0 / (g.gamma - 1.0);
        self.c.zip(&self.v1, |c, v| k * c - 0.5 * v)
    }

    /// ψ₂ = −v².
    pub fn psi2(&self) -> Field2<f64> {
        self.v2.map(|v| -v)
    }

    /// Ω = (∂₁v² − ∂₂v¹)/ρ; NaN at vacuum.
    pub fn specific_vorticity(&self, dx1: f64, dx2: f64) -> Field2<f64> {
        curl_and_specific_vorticity(&self.rho, &self.v1, &self.v2, dx1, dx2, X2Boundary::Periodic).big_omega
    }
}

/// Mesh metadata shared by every level of a diagnostic.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mesh {
    pub nx: usize,
    pub ny: usize,
    pub dx1: f64,
    pub dx2: f64,
    pub x1_min: f64,
}

impl Mesh {
    pub fn of_grid(g: &Grid2D) -> Self {
        Self { nx: g.nx, ny: g.ny, dx1: g.dx1, dx2: g.dx2, x1_min: g.x1_min }
    }

    pub fn x1(&self, i: usize) -> f64 {
        self.x1_min + (i as f64 + 0.5) * self.dx1
    }

    pub fn x2(&self, j: usize) -> f64 {
        (j as f64 + 0.5) * self.dx2
    }

    pub fn area(&self) -> f64 {
        self.dx1 * self.dx2
    }
}

/// Three equally spaced levels t − δ, t, t + δ on one mesh.
#[derive(Debug, Clone, PartialEq)]
pub struct SnapshotTriple {
    pub mesh: Mesh,
    pub gas: Gas,
    pub base: Data,
    pub levels: [Level; 3],
    pub dt: f64,
}

impl SnapshotTriple {
    pub fn new(grids: [&Grid2D; 3]) -> Result<Self> {
        let mesh = Mesh::of_grid(grids[0]);
        for g in &grids[1..] {
            if Mesh::of_grid(g) != mesh || g.gas != grids[0].gas {
                return Err(Error::Data("snapshot triple mixes meshes or gases".into()));
            }
        }
        let (t0, t1, t2) = (grids[0].time, grids[1].time, grids[2].time);
        let (d0, d1) = (t1 - t0, t2 - t1);
        if !(d0 > 0.0 && d1 > 0.0) || (d0 - d1).abs() > 1e-9 * t2.abs().max(1.0) {
            return Err(Error::Data(format!("snapshot times {t0}, {t1}, {t2} are not equally spaced")));
        }
        Ok(Self {
            mesh,
            gas: grids[0].gas,
            base: grids[0].base,
            levels: [Level::of_grid(grids[0]), Level::of_grid(grids[1]), Level::of_grid(grids[2])],
            dt: 0.5 * (t2 - t0),
        })
    }

    /// Picks consecutive equally spaced triples centred on each requested time.
    pub fn find(snapshots: &[Grid2D], centre: f64) -> Result<Self> {
        let tol = 1e-9 * centre.abs().max(1.0);
        let k = snapshots
            .iter()
            .position(|g| (g.time - centre).abs() <= tol)
            .ok_or_else(|| Error::Data(format!("no snapshot at t = {centre}")))?;
        if k == 0 || k + 1 >= snapshots.len() {
            return Err(Error::Data(format!("snapshot at t = {centre} has no neighbours for a centred difference")));
        }
        Self::new([&snapshots[k - 1], &snapshots[k], &snapshots[k + 1]])
    }

    pub fn mid(&self) -> &Level {
        &self.levels[1]
    }

    pub fn time(&self) -> f64 {
        self.levels[1].time
    }

    /// Centred time derivative of a quantity evaluated per level.
    pub fn dt_of(&self, f: impl Fn(&Level) -> Field2<f64>) -> Field2<f64> {
        let a = f(&self.levels[0]);
        let b = f(&self.levels[2]);
        let h = 2.0 * self.dt;
        a.zip(&b, |x, y| (y - x) / h)
    }
}

/// Point values of the exact self-similar solution at cell centres.
pub fn analytic_grid(data: &Data, nx: usize, ny: usize, half_width: f64, t: f64) -> Result<Grid2D> {
    let fan = classify_and_solve(data)?;
    let mut grid = Grid2D::new(data.g, *data, nx, ny, half_width);
    grid.time = t;
    for i in 0..nx {
        let xi = grid.x1(i) / t;
        let u = fan.sample(xi).to_cons();
        for j in 0..ny {
            let k = grid.idx(i, j);
            grid.cells[k] = u;
        }
    }
    Ok(grid)
}

/// Grid of point values of an arbitrary primitive field at time t.
pub fn grid_from_fn(data: &Data, nx: usize, ny: usize, half_width: f64, t: f64, f: impl Fn(f64, f64, f64) -> Prim) -> Grid2D {
    let mut grid = Grid2D::new(data.g, *data, nx, ny, half_width);
    grid.time = t;
    for j in 0..ny {
        for i in 0..nx {
            let k = grid.idx(i, j);
            grid.cells[k] = f(t, grid.x1(i), grid.x2(j)).to_cons();
        }
    }
    grid
}

/// Analytic levels at t − δ, t, t + δ.
pub fn analytic_triple(data: &Data, nx: usize, ny: usize, half_width: f64, t: f64, delta: f64) -> Result<SnapshotTriple> {
    let g0 = analytic_grid(data, nx, ny, half_width, t - delta)?;
    let g1 = analytic_grid(data, nx, ny, half_width, t)?;
    let g2 = analytic_grid(data, nx, ny, half_width, t + delta)?;
    let mut tr = SnapshotTriple::new([&g0, &g1, &g2])?;
    tr.dt = delta;
    Ok(tr)
}

/// Interrogated set: ξ = x₁/t in [xi_min, xi_max] shrunk by `margin_cells` on each side.
#[derive(Debug, Clone, PartialEq)]
pub struct Region {
    pub name: String,
    pub xi_min: f64,
    pub xi_max: f64,
    pub margin_cells: usize,
}

impl Region {
    pub fn all() -> Self {
        Self { name: "all".into(), xi_min: f64::NEG_INFINITY, xi_max: f64::INFINITY, margin_cells: 0 }
    }

    pub fn slopes(name: &str, xi_min: f64, xi_max: f64, margin_cells: usize) -> Self {
        Self { name: name.into(), xi_min, xi_max, margin_cells }
    }

    /// Interior of the background 3-rarefaction.
    pub fn right_fan(fan: &Fan, margin_cells: usize) -> Result<Self> {
        match fan.right_wave {
            Some(w) if w.kind == WaveKind::Rarefaction => Ok(Self::slopes("right_fan", w.tail, w.head, margin_cells)),
            _ => Err(Error::EmptyRegion(format!("pattern {} has no right rarefaction", fan.pattern))),
        }
    }

    pub fn contains(&self, x1: f64, t: f64, dx1: f64) -> bool {
        if self.xi_min == f64::NEG_INFINITY && self.xi_max == f64::INFINITY {
            return true;
        }
        if !(t > 0.0) {
            return false;
        }
        let m = self.margin_cells as f64 * dx1;
        x1 >= self.xi_min * t + m && x1 <= self.xi_max * t - m
    }

    /// Cell selection on a mesh at time t, excluding the x₁ edge cells and masked cells.
    pub fn select(&self, mesh: &Mesh, t: f64, mask: Option<&[bool]>) -> Vec<bool> {
        let mut out = vec![false; mesh.nx * mesh.ny];
        for i in EDGE_CELLS..mesh.nx.saturating_sub(EDGE_CELLS) {
            if !self.contains(mesh.x1(i), t, mesh.dx1) {
                continue;
            }
            for j in 0..mesh.ny {
                let k = j * mesh.nx + i;
                out[k] = mask.map_or(true, |m| !m[k]);
            }
        }
        out
    }
}

/// Cells whose stencils cross a discontinuity or vacuum, dilated by [`MASK_DILATION`].
pub fn discontinuity_mask(levels: &[&Level]) -> Vec<bool> {
    let (nx, ny) = (levels[0].nx(), levels[0].ny());
    let mut raw = vec![false; nx * ny];
    for lv in levels {
        for j in 0..ny {
            for i in 0..nx {
                let k = j * nx + i;
                let r = lv.rho.data[k];
                if !(r > 0.0) || !(lv.c.data[k] > 0.0) {
                    raw[k] = true;
                    continue;
                }
                let mut nbr = Vec::with_capacity(2);
                if i + 1 < nx {
                    nbr.push(k + 1);
                }
                nbr.push(((j + 1) % ny) * nx + i);
                for kk in nbr {
                    let r2 = lv.rho.data[kk];
                    let c = lv.c.data[k].min(lv.c.data[kk]);
                    let dv = (lv.v1.data[kk] - lv.v1.data[k]).abs().max((lv.v2.data[kk] - lv.v2.data[k]).abs());
                    if !(r2 > 0.0)
                        || (r2 - r).abs() > JUMP_FRACTION * r.min(r2)
                        || !(c > 0.0)
                        || dv > JUMP_FRACTION * c
                    {
                        raw[k] = true;
                        raw[kk] = true;
                    }
                }
            }
        }
    }
    dilate(&raw, nx, ny, MASK_DILATION)
}

fn dilate(raw: &[bool], nx: usize, ny: usize, d: usize) -> Vec<bool> {
    let mut across = vec![false; nx * ny];
    for j in 0..ny {
        for i in 0..nx {
            if raw[j * nx + i] {
                for ii in i.saturating_sub(d)..=(i + d).min(nx - 1) {
                    across[j * nx + ii] = true;
                }
            }
        }
    }
    let mut out = vec![false; nx * ny];
    let dd = d.min(ny / 2);
    for j in 0..ny {
        for i in 0..nx {
            if across[j * nx + i] {
                for s in 0..=2 * dd {
                    let jj = (j + ny + s - dd) % ny;
                    out[jj * nx + i] = true;
                }
            }
        }
    }
    out
}
