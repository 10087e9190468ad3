//! Pointwise residuals of the wave-transport system and the null-frame vorticity identity.

use crate::diag::fields::{discontinuity_mask, Level, Mesh, Region, SnapshotTriple};
use crate::diag::metric::AcousticMetric;
use crate::diag::report::{DiagnosticsReport, Stat};
use crate::error::Result;
use crate::field::{Field2, X2Boundary};

const P: X2Boundary = X2Boundary::Periodic;

pub const WAVE_TRANSPORT_NAMES: [&str; 4] = ["box_wbar", "box_w", "box_psi2", "B_Omega"];

/// (∂_t f, ∂₁f, ∂₂f) on the middle level.
pub struct Grad {
    pub t: Field2<f64>,
    pub x1: Field2<f64>,
    pub x2: Field2<f64>,
}

impl Grad {
    pub fn of(f: [&Field2<f64>; 3], mesh: &Mesh, dt: f64) -> Self {
        Self {
            t: f[0].zip(f[2], |a, b| (b - a) / (2.0 * dt)),
            x1: f[1].d1(mesh.dx1),
            x2: f[1].d2(mesh.dx2, P),
        }
    }

    fn at(&self, k: usize) -> [f64; 3] {
        [self.t.data[k], self.x1.data[k], self.x2.data[k]]
    }
}

/// g⁻¹(Da, Db) on the middle level.
pub fn g_pair(mid: &Level, a: &Grad, b: &Grad) -> Field2<f64> {
    let mut out = Field2::zeros(mid.nx(), mid.ny());
    for k in 0..out.data.len() {
        let m = AcousticMetric::at(mid.c.data[k], mid.v1.data[k], mid.v2.data[k]);
        out.data[k] = m.dot_upper(&a.at(k), &b.at(k));
    }
    out
}

/// □_g f = c⁻¹ ∂_μ(c g^{μν} ∂_ν f) on the middle level, from three time levels.
///
/// The ∂_t(A⁰⁰∂_t f) term is expanded as ∂_tA⁰⁰ ∂_t f + A⁰⁰ ∂_t² f, so the stencil
/// spans exactly the three levels. Vacuum cells return NaN.
pub fn box_g(f: [&Field2<f64>; 3], levels: [&Level; 3], mesh: &Mesh, dt: f64) -> Field2<f64> {
    let (nx, ny) = (mesh.nx, mesh.ny);
    let a00 = |lv: &Level| lv.c.map(|c| -1.0 / c);
    let a0 = |lv: &Level, i: usize| {
        let v = if i == 0 { &lv.v1 } else { &lv.v2 };
        v.zip(&lv.c, |v, c| -v / c)
    };
    let flux0 = |lv: &Level, f: &Field2<f64>| {
        let (f1, f2) = (f.d1(mesh.dx1), f.d2(mesh.dx2, P));
        let (b1, b2) = (a0(lv, 0), a0(lv, 1));
        Field2::from_fn(nx, ny, |i, j| b1.at(i, j) * f1.at(i, j) + b2.at(i, j) * f2.at(i, j))
    };
    let mid = levels[1];
    let ft = f[0].zip(f[2], |a, b| (b - a) / (2.0 * dt));
    let ftt = Field2::from_fn(nx, ny, |i, j| (f[2].at(i, j) - 2.0 * f[1].at(i, j) + f[0].at(i, j)) / (dt * dt));
    let a00t = a00(levels[0]).zip(&a00(levels[2]), |a, b| (b - a) / (2.0 * dt));
    let a00m = a00(mid);
    let term2 = flux0(levels[0], f[0]).zip(&flux0(levels[2], f[2]), |a, b| (b - a) / (2.0 * dt));
    let (b1, b2) = (a0(mid, 0), a0(mid, 1));
    let g1 = b1.zip(&ft, |a, b| a * b).d1(mesh.dx1);
    let g2 = b2.zip(&ft, |a, b| a * b).d2(mesh.dx2, P);
    let (f1, f2) = (f[1].d1(mesh.dx1), f[1].d2(mesh.dx2, P));
    let mut h1 = Field2::zeros(nx, ny);
    let mut h2 = Field2::zeros(nx, ny);
    for k in 0..nx * ny {
        let (c, u, v) = (mid.c.data[k], mid.v1.data[k], mid.v2.data[k]);
        h1.data[k] = (c - u * u / c) * f1.data[k] - u * v / c * f2.data[k];
        h2.data[k] = -u * v / c * f1.data[k] + (c - v * v / c) * f2.data[k];
    }
    let (h1, h2) = (h1.d1(mesh.dx1), h2.d2(mesh.dx2, P));
    Field2::from_fn(nx, ny, |i, j| {
        let c = mid.c.at(i, j);
        if !(c > 0.0) {
            return f64::NAN;
        }
        let s = a00t.at(i, j) * ft.at(i, j) + a00m.at(i, j) * ftt.at(i, j) + term2.at(i, j) + g1.at(i, j) + g2.at(i, j)
            + h1.at(i, j)
            + h2.at(i, j);
        s / c
    })
}

/// Residual fields of the four wave-transport equations on the middle level.
pub fn wave_transport_fields(tr: &SnapshotTriple) -> [Field2<f64>; 4] {
    let g = tr.gas;
    let gm = g.gamma;
    let mesh = &tr.mesh;
    let lv: [&Level; 3] = [&tr.levels[0], &tr.levels[1], &tr.levels[2]];
    let mid = lv[1];
    let wb = lv.map(|l| l.wbar(&g));
    let w = lv.map(|l| l.w(&g));
    let psi = lv.map(|l| l.psi2());
    let om = lv.map(|l| l.specific_vorticity(mesh.dx1, mesh.dx2));
    let dwb = Grad::of([&wb[0], &wb[1], &wb[2]], mesh, tr.dt);
    let dw = Grad::of([&w[0], &w[1], &w[2]], mesh, tr.dt);
    let dpsi = Grad::of([&psi[0], &psi[1], &psi[2]], mesh, tr.dt);
    let dom = Grad::of([&om[0], &om[1], &om[2]], mesh, tr.dt);
    let dc2 = mid.c.d2(mesh.dx2, P);
    let dc1 = mid.c.d1(mesh.dx1);
    let box_wb = box_g([&wb[0], &wb[1], &wb[2]], lv, mesh, tr.dt);
    let box_w = box_g([&w[0], &w[1], &w[2]], lv, mesh, tr.dt);
    let box_psi = box_g([&psi[0], &psi[1], &psi[2]], lv, mesh, tr.dt);
    let gbb = g_pair(mid, &dwb, &dwb);
    let gww = g_pair(mid, &dw, &dw);
    // g(Dv², Dv²) = g(Dψ₂, Dψ₂).
    let gvv = g_pair(mid, &dpsi, &dpsi);
    let gbp = g_pair(mid, &dwb, &dpsi);
    let gwp = g_pair(mid, &dw, &dpsi);
    let n = mesh.nx * mesh.ny;
    let mut r = [Field2::zeros(mesh.nx, mesh.ny), Field2::zeros(mesh.nx, mesh.ny), Field2::zeros(mesh.nx, mesh.ny), Field2::zeros(mesh.nx, mesh.ny)];
    for k in 0..n {
        let (rho, c) = (mid.rho.data[k], mid.c.data[k]);
        let o = om[1].data[k];
        let ci = 1.0 / c;
        let quad = 0.5 * ci * rho * rho * o * o;
        let vort2 = 0.5 * rho * dom.x2.data[k] + 2.0 / (gm - 1.0) * rho * ci * o * dc2.data[k];
        let rhs_b = -ci * ((7.0 - gm) / 4.0 * gbb.data[k] + (gm + 1.0) / 4.0 * gww.data[k] + 0.5 * gvv.data[k]) + quad - vort2;
        let rhs_w = -ci * ((gm + 1.0) / 4.0 * gbb.data[k] + (7.0 - gm) / 4.0 * gww.data[k] + 0.5 * gvv.data[k]) + quad + vort2;
        let rhs_p = -ci * (3.0 - gm) / 2.0 * (gbp.data[k] + gwp.data[k])
            - rho * dom.x1.data[k]
            - 4.0 / (gm - 1.0) * rho * ci * o * dc1.data[k];
        r[0].data[k] = box_wb.data[k] - rhs_b;
        r[1].data[k] = box_w.data[k] - rhs_w;
        r[2].data[k] = box_psi.data[k] - rhs_p;
        r[3].data[k] = dom.t.data[k] + mid.v1.data[k] * dom.x1.data[k] + mid.v2.data[k] * dom.x2.data[k];
    }
    r
}

fn triple_mask(tr: &SnapshotTriple) -> Vec<bool> {
    discontinuity_mask(&[&tr.levels[0], &tr.levels[1], &tr.levels[2]])
}

/// Statistics of the four wave-transport residuals over `region`, masked at discontinuities.
pub fn wave_transport_residual(tr: &SnapshotTriple, region: &Region) -> Result<DiagnosticsReport> {
    let fields = wave_transport_fields(tr);
    let sel = region.select(&tr.mesh, tr.time(), Some(&triple_mask(tr)));
    let mut rep = DiagnosticsReport::default();
    for (name, f) in WAVE_TRANSPORT_NAMES.iter().zip(&fields) {
        rep.push(Stat::of(name, f, &sel, &tr.mesh, tr.time(), region)?);
    }
    Ok(rep)
}

/// ω − [−∂₂v¹ + (2/(γ−1))∂₂c + c⁻¹L(v²)] in the planar frame, L = ∂_t + (v¹+c)∂₁ + v²∂₂.
pub fn vorticity_frame_field(tr: &SnapshotTriple) -> Field2<f64> {
    let mesh = &tr.mesh;
    let mid = tr.mid();
    let k = 2.0 / (tr.gas.gamma - 1.0);
    let curl = mid.v2.d1(mesh.dx1).zip(&mid.v1.d2(mesh.dx2, P), |a, b| a - b);
    let dv2 = Grad::of([&tr.levels[0].v2, &mid.v2, &tr.levels[2].v2], mesh, tr.dt);
    let d2v1 = mid.v1.d2(mesh.dx2, P);
    let d2c = mid.c.d2(mesh.dx2, P);
    Field2::from_fn(mesh.nx, mesh.ny, |i, j| {
        let (c, u, v) = (mid.c.at(i, j), mid.v1.at(i, j), mid.v2.at(i, j));
        let l = dv2.t.at(i, j) + (u + c) * dv2.x1.at(i, j) + v * dv2.x2.at(i, j);
        curl.at(i, j) - (-d2v1.at(i, j) + k * d2c.at(i, j) + l / c)
    })
}

pub fn vorticity_frame_identity(tr: &SnapshotTriple, region: &Region) -> Result<DiagnosticsReport> {
    let f = vorticity_frame_field(tr);
    let sel = region.select(&tr.mesh, tr.time(), Some(&triple_mask(tr)));
    let mut rep = DiagnosticsReport::default();
    rep.push(Stat::of("frame_vorticity", &f, &sel, &tr.mesh, tr.time(), region)?);
    Ok(rep)
}

/// BΩ residual and sup|Ω| on the middle level.
pub fn transport_residual_omega(tr: &SnapshotTriple, region: &Region) -> Result<DiagnosticsReport> {
    let mesh = &tr.mesh;
    let om: Vec<Field2<f64>> = tr.levels.iter().map(|l| l.specific_vorticity(mesh.dx1, mesh.dx2)).collect();
    let d = Grad::of([&om[0], &om[1], &om[2]], mesh, tr.dt);
    let mid = tr.mid();
    let b = Field2::from_fn(mesh.nx, mesh.ny, |i, j| d.t.at(i, j) + mid.v1.at(i, j) * d.x1.at(i, j) + mid.v2.at(i, j) * d.x2.at(i, j));
    let sel = region.select(mesh, tr.time(), Some(&triple_mask(tr)));
    let mut rep = DiagnosticsReport::default();
    rep.push(Stat::of("B_Omega", &b, &sel, mesh, tr.time(), region)?);
    rep.push(Stat::of("sup_Omega", &om[1], &sel, mesh, tr.time(), region)?);
    Ok(rep)
}

/// sup|Ω| on one snapshot over the unmasked part of `region`.
pub fn sup_vorticity(level: &Level, mesh: &Mesh, region: &Region) -> Result<f64> {
    let om = level.specific_vorticity(mesh.dx1, mesh.dx2);
    let sel = region.select(mesh, level.time, Some(&discontinuity_mask(&[level])));
    Ok(Stat::of("sup_Omega", &om, &sel, mesh, level.time, region)?.max)
}
