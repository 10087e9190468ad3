use crate::field::Field2;
use crate::{Cons, Data, Gas, Prim};
use std::f64::consts::TAU;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Ghost {
    /// Zero-gradient copy of the edge cell.
    Outflow,
    Periodic,
}

/// Cell-centred conservative states on [x1_min, x1_min + nx·dx1] × [0, 2π).
///
/// Storage is `cells[j * nx + i]` with `i` along x₁.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid2D {
    pub nx: usize,
    pub ny: usize,
    pub dx1: f64,
    pub dx2: f64,
    pub x1_min: f64,
    pub time: f64,
    pub gas: Gas,
    /// Unperturbed Riemann data the run was built from.
    pub base: Data,
    pub cells: Vec<Cons>,
    pub ghost_x1: Ghost,
    pub ghost_x2: Ghost,
}

impl Grid2D {
    pub fn new(gas: Gas, base: Data, nx: usize, ny: usize, half_width: f64) -> Self {
        Self {
            nx,
            ny,
            dx1: 2.0 * half_width / nx as f64,
            dx2: TAU / ny as f64,
            x1_min: -half_width,
            time: 0.0,
            gas,
            base,
            cells: vec![Cons::default(); nx * ny],
            ghost_x1: Ghost::Outflow,
            ghost_x2: Ghost::Periodic,
        }
    }

    #[inline]
    pub fn idx(&self, i: usize, j: usize) -> usize {
        j * self.nx + i
    }

    #[inline]
    pub fn x1(&self, i: usize) -> f64 {
        self.x1_min + (i as f64 + 0.5) * self.dx1
    }

    #[inline]
    pub fn x2(&self, j: usize) -> f64 {
        (j as f64 + 0.5) * self.dx2
    }

    #[inline]
    pub fn cell(&self, i: usize, j: usize) -> Cons {
        self.cells[self.idx(i, j)]
    }

    #[inline]
    pub fn prim(&self, i: usize, j: usize) -> Prim {
        self.cell(i, j).to_prim()
    }

    pub fn cell_area(&self) -> f64 {
        self.dx1 * self.dx2
    }

    /// Σ U dx₁dx₂ over the strip, summed in storage order.
    pub fn totals(&self) -> [f64; 3] {
        let mut t = [0.0; 3];
        for u in &self.cells {
            t[0] += u.q0;
            t[1] += u.q1;
            t[2] += u.q2;
        }
        let a = self.cell_area();
        t.map(|x| x * a)
    }

    /// Primitive fields (ρ, v¹, v²).
    pub fn prim_fields(&self) -> (Field2<f64>, Field2<f64>, Field2<f64>) {
        let n = self.cells.len();
        let (mut r, mut a, mut b) = (Vec::with_capacity(n), Vec::with_capacity(n), Vec::with_capacity(n));
        for u in &self.cells {
            let p = u.to_prim();
            r.push(p.rho);
            a.push(p.v1);
            b.push(p.v2);
        }
        let f = |data| Field2 { nx: self.nx, ny: self.ny, data };
        (f(r), f(a), f(b))
    }

    /// Cyclic shift by `k` cells in x₂.
    pub fn shifted_x2(&self, k: usize) -> Self {
        let mut out = self.clone();
        for j in 0..self.ny {
            let jj = (j + k) % self.ny;
            for i in 0..self.nx {
                out.cells[jj * self.nx + i] = self.cells[j * self.nx + i];
            }
        }
        out
    }
}
