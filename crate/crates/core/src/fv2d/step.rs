//! Strang-split Godunov / MUSCL-Hancock update.

use super::config::{Limiter, RunConfig};
use super::flux::godunov_flux;
use super::grid::{Ghost, Grid2D};
use crate::error::{Error, Result};
use crate::state::{is_vacuum, Direction};
use crate::{Cons, Gas, Prim};
use rayon::prelude::*;

pub const DT_MIN: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepParams {
    pub cfl: f64,
    pub order: usize,
    pub limiter: Limiter,
}

impl From<&RunConfig> for StepParams {
    fn from(c: &RunConfig) -> Self {
        Self { cfl: c.cfl, order: c.order, limiter: c.limiter }
    }
}

/// Per-step conservation ledger.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepInfo {
    pub dt: f64,
    /// ∫∫ (U_new − U_old) dx₁dx₂.
    pub change: [f64; 3],
    /// Net inflow through the x₁ edges, ∫ dt (F(x₁_min) − F(x₁_max)) dx₂.
    pub boundary_inflow: [f64; 3],
}

impl StepInfo {
    /// Largest |change − inflow| relative to `scale`.
    pub fn ledger_residual(&self, scale: [f64; 3]) -> f64 {
        (0..3).map(|k| (self.change[k] - self.boundary_inflow[k]).abs() / scale[k].abs().max(1.0)).fold(0.0, f64::max)
    }
}

/// dt = cfl · min(Δx₁ / max(|v¹|+c), Δx₂ / max(|v²|+c)).
pub fn stable_dt(grid: &Grid2D, cfl: f64) -> f64 {
    let g = &grid.gas;
    let (mut s1, mut s2) = (0.0f64, 0.0f64);
    for u in &grid.cells {
        let p = u.to_prim();
        let c = p.c(g);
        s1 = s1.max(p.v1.abs() + c);
        s2 = s2.max(p.v2.abs() + c);
    }
    let a = if s1 > 0.0 { grid.dx1 / s1 } else { f64::INFINITY };
    let b = if s2 > 0.0 { grid.dx2 / s2 } else { f64::INFINITY };
    cfl * a.min(b)
}

#[inline]
/// Monotonized central: minmod(2a, 2b, (a + b)/2).
fn mc(a: f64, b: f64) -> f64 {
    if a * b <= 0.0 {
        return 0.0;
    }
    let m = (2.0 * a.abs()).min(2.0 * b.abs()).min(0.5 * (a + b).abs());
    m.copysign(a)
}

fn minmod(a: f64, b: f64) -> f64 {
    if a * b <= 0.0 {
        0.0
    } else if a > 0.0 {
        a.min(b)
    } else {
        a.max(b)
    }
}

#[inline]
fn ghost_index(k: isize, n: usize, ghost: Ghost) -> usize {
    match ghost {
        Ghost::Outflow => k.clamp(0, n as isize - 1) as usize,
        Ghost::Periodic => k.rem_euclid(n as isize) as usize,
    }
}

/// Interface states (left-extrapolated, right-extrapolated) for one cell.
#[inline]
fn reconstruct(g: &Gas, wm: &Prim, w: &Prim, wp: &Prim, half_lam: f64, limiter: Limiter) -> (Prim, Prim) {
    let slope = |a: f64, b: f64, c: f64| match limiter {
        Limiter::Minmod => minmod(b - a, c - b),
        Limiter::Mc => mc(b - a, c - b),
        Limiter::None => 0.5 * (c - a),
    };
    let d = [slope(wm.rho, w.rho, wp.rho), slope(wm.v1, w.v1, wp.v1), slope(wm.v2, w.v2, wp.v2)];
    if d == [0.0; 3] {
        return (*w, *w);
    }
    let c = w.c(g);
    let adv = [w.v1 * d[0] + w.rho * d[1], w.v1 * d[1] + c * c / w.rho * d[0], w.v1 * d[2]];
    let lo = Prim::new(w.rho - 0.5 * d[0] - half_lam * adv[0], w.v1 - 0.5 * d[1] - half_lam * adv[1], w.v2 - 0.5 * d[2] - half_lam * adv[2]);
    let hi = Prim::new(w.rho + 0.5 * d[0] - half_lam * adv[0], w.v1 + 0.5 * d[1] - half_lam * adv[1], w.v2 + 0.5 * d[2] - half_lam * adv[2]);
    if lo.rho > 0.0 && hi.rho > 0.0 && lo.is_admissible() && hi.is_admissible() {
        (lo, hi)
    } else {
        (*w, *w)
    }
}

/// One conservative 1-D update along a line in the normal frame.
/// Returns (F at the first edge, F at the last edge).
fn sweep_line(
    g: &Gas,
    line: &mut [Cons],
    lam: f64,
    ghost: Ghost,
    params: &StepParams,
    prim: &mut Vec<Prim>,
    faces: &mut Vec<(Prim, Prim)>,
    flux: &mut Vec<[f64; 3]>,
) -> Result<([f64; 3], [f64; 3])> {
    let n = line.len();
    prim.clear();
    prim.extend(line.iter().map(|u| u.to_prim()));
    let at = |k: isize| -> usize { ghost_index(k, n, ghost) };
    faces.clear();
    // Cells −1 ..= n with interface states.
    for k in -1..=(n as isize) {
        let w = prim[at(k)];
        if params.order == 2 {
            let (wm, wp) = (prim[at(k - 1)], prim[at(k + 1)]);
            faces.push(reconstruct(g, &wm, &w, &wp, 0.5 * lam, params.limiter));
        } else {
            faces.push((w, w));
        }
    }
    flux.clear();
    // Interface m sits between cells m−1 and m.
    for m in 0..=n {
        let left = faces[m].1;
        let right = faces[m + 1].0;
        flux.push(godunov_flux(g, &left, &right, Direction::X1)?);
    }
    for (i, u) in line.iter_mut().enumerate() {
        let (fa, fb) = (flux[i], flux[i + 1]);
        u.q0 -= lam * (fb[0] - fa[0]);
        u.q1 -= lam * (fb[1] - fa[1]);
        u.q2 -= lam * (fb[2] - fa[2]);
    }
    Ok((flux[0], flux[n]))
}

#[inline]
fn swap_cons(u: &Cons) -> Cons {
    Cons::new(u.q0, u.q2, u.q1)
}

/// Sweeps every x₁ row; returns Σ_rows (F_first − F_last).
fn sweep_rows(g: &Gas, cells: &mut [Cons], nx: usize, lam: f64, ghost: Ghost, params: &StepParams) -> Result<[f64; 3]> {
    let results: Vec<Result<([f64; 3], [f64; 3])>> = cells
        .par_chunks_mut(nx)
        .map_init(
            || (Vec::new(), Vec::new(), Vec::new()),
            |(p, fa, fl), row| sweep_line(g, row, lam, ghost, params, p, fa, fl),
        )
        .collect();
    let mut net = [0.0; 3];
    for r in results {
        let (a, b) = r?;
        for k in 0..3 {
            net[k] += a[k] - b[k];
        }
    }
    Ok(net)
}

fn sweep_x2(grid: &mut Grid2D, dt: f64, params: &StepParams) -> Result<()> {
    let (nx, ny) = (grid.nx, grid.ny);
    let mut t = vec![Cons::default(); nx * ny];
    for j in 0..ny {
        for i in 0..nx {
            t[i * ny + j] = swap_cons(&grid.cells[j * nx + i]);
        }
    }
    let net = sweep_rows(&grid.gas, &mut t, ny, dt / grid.dx2, grid.ghost_x2, params)?;
    debug_assert!(grid.ghost_x2 == Ghost::Periodic || net.iter().all(|x| x.is_finite()));
    for j in 0..ny {
        for i in 0..nx {
            grid.cells[j * nx + i] = swap_cons(&t[i * ny + j]);
        }
    }
    Ok(())
}

fn check_admissible(grid: &Grid2D) -> Result<()> {
    let rho_ref = grid.base.left.rho.max(grid.base.right.rho);
    for (k, u) in grid.cells.iter().enumerate() {
        let bad = !(u.q0.is_finite() && u.q1.is_finite() && u.q2.is_finite()) || !(u.q0 > 0.0) || is_vacuum(u.q0, rho_ref);
        if bad {
            return Err(Error::Inadmissible { i: k % grid.nx, j: k / grid.nx, rho: u.q0 });
        }
    }
    Ok(())
}

/// Advances by exactly `dt`: half x₂, full x₁, half x₂.
pub fn step_dt(grid: &Grid2D, params: &StepParams, dt: f64) -> Result<(Grid2D, StepInfo)> {
    let before = grid.totals();
    let mut next = grid.clone();
    sweep_x2(&mut next, 0.5 * dt, params)?;
    let (nx, lam, ghost) = (next.nx, dt / next.dx1, next.ghost_x1);
    let gas = next.gas;
    let net = sweep_rows(&gas, &mut next.cells, nx, lam, ghost, params)?;
    sweep_x2(&mut next, 0.5 * dt, params)?;
    next.time = grid.time + dt;
    check_admissible(&next)?;
    let after = next.totals();
    let inflow = if ghost == Ghost::Periodic { [0.0; 3] } else { net.map(|x| x * dt * next.dx2) };
    let change = [0, 1, 2].map(|k| after[k] - before[k]);
    Ok((next, StepInfo { dt, change, boundary_inflow: inflow }))
}

/// One step at the CFL time step.
pub fn step(grid: &Grid2D, params: &StepParams) -> Result<(Grid2D, StepInfo)> {
    let dt = stable_dt(grid, params.cfl);
    if !(dt >= DT_MIN) {
        return Err(Error::DtUnderflow { dt, time: grid.time });
    }
    step_dt(grid, params, dt)
}
