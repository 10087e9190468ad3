//! Energy and flux functionals of deviation fields in the second null frame.
//!
//! κ → κ̊ = t, μ → μ̊ = c t, ∇̸ → X̊ = ∂₂, L → L̊. Each energy is reported with the
//! Eulerian measure dx₁dx₂ (`*_raw`) and with dx₁dx₂/t, which is du dϑ in the fan.

use crate::diag::fields::{discontinuity_mask, Level, Region, SnapshotTriple};
use crate::diag::residual::Grad;
use crate::error::{Error, Result};
use crate::field::Field2;
use crate::Gas;
use serde::{Deserialize, Serialize};

pub const WAVE_FIELDS: [&str; 3] = ["wbar", "w", "psi2"];

/// Energies of one wave variable.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct WaveEnergy {
    /// ∫ ½κ̊²(|X̊ψ|² + c⁻²|L̊ψ|²) dx/t.
    pub e_w: f64,
    pub e_w_raw: f64,
    /// ∫ ½(|L̲̊ψ|² + κ̊²|X̊ψ|²) dx/t.
    pub e_w_bar: f64,
    pub e_w_bar_raw: f64,
    /// ∫ c⁻¹κ̊|L̊ψ|² dϑ on the inner region edge; integrate in t with [`FluxSeries`].
    pub f_w_density: f64,
    /// ∫ μ̊|X̊ψ|² dϑ on the inner region edge.
    pub f_w_bar_density: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnergyReport {
    pub time: f64,
    pub region: String,
    pub wbar: WaveEnergy,
    pub w: WaveEnergy,
    pub psi2: WaveEnergy,
    /// ∫ μ̊ Ω² dx/t.
    pub e_t: f64,
    pub e_t_raw: f64,
    /// ∫ c² Ω² dϑ on the inner region edge.
    pub f_t_density: f64,
}

impl EnergyReport {
    pub fn wave(&self, name: &str) -> Option<&WaveEnergy> {
        match name {
            "wbar" => Some(&self.wbar),
            "w" => Some(&self.w),
            "psi2" => Some(&self.psi2),
            _ => None,
        }
    }

    /// (name, value) pairs in a fixed order.
    pub fn entries(&self) -> Vec<(String, f64)> {
        let mut out = Vec::new();
        for n in WAVE_FIELDS {
            let e = self.wave(n).unwrap();
            out.push((format!("E_w_{n}"), e.e_w));
            out.push((format!("E_w_raw_{n}"), e.e_w_raw));
            out.push((format!("Ebar_w_{n}"), e.e_w_bar));
            out.push((format!("Ebar_w_raw_{n}"), e.e_w_bar_raw));
            out.push((format!("F_w_density_{n}"), e.f_w_density));
            out.push((format!("Fbar_w_density_{n}"), e.f_w_bar_density));
        }
        out.push(("E_t_Omega".into(), self.e_t));
        out.push(("E_t_raw_Omega".into(), self.e_t_raw));
        out.push(("F_t_density_Omega".into(), self.f_t_density));
        out
    }
}

fn wave_of(name: &str, lv: &Level, g: &Gas) -> Field2<f64> {
    match name {
        "wbar" => lv.wbar(g),
        "w" => lv.w(g),
        _ => lv.psi2(),
    }
}

/// Energies of `pert − background` over `region`. Both triples must share mesh and times.
pub fn mathring_energies(pert: &SnapshotTriple, background: &SnapshotTriple, region: &Region) -> Result<EnergyReport> {
    if pert.mesh != background.mesh {
        return Err(Error::Data("perturbed and background meshes differ".into()));
    }
    for (a, b) in pert.levels.iter().zip(&background.levels) {
        if (a.time - b.time).abs() > 1e-12 * a.time.abs().max(1.0) {
            return Err(Error::Data(format!("level times differ: {} vs {}", a.time, b.time)));
        }
    }
    let t = pert.time();
    if !(t > 0.0) {
        return Err(Error::Domain(format!("energies need t > 0, got {t}")));
    }
    let mesh = &pert.mesh;
    let g = pert.gas;
    let mut mask = discontinuity_mask(&[&pert.levels[0], &pert.levels[1], &pert.levels[2]]);
    let m2 = discontinuity_mask(&[&background.levels[0], &background.levels[1], &background.levels[2]]);
    for (a, b) in mask.iter_mut().zip(m2) {
        *a |= b;
    }
    let sel = region.select(mesh, t, Some(&mask));
    if !sel.iter().any(|&s| s) {
        return Err(Error::EmptyRegion(format!("region {} selects no cells at t = {t}", region.name)));
    }
    let nx = mesh.nx;
    // Inner edge: the leftmost selected column.
    let edge = (0..nx).find(|&i| (0..mesh.ny).any(|j| sel[j * nx + i])).unwrap();
    let mid = pert.mid();
    let area = mesh.area();
    let mut waves = [WaveEnergy::default(); 3];
    for (slot, name) in waves.iter_mut().zip(WAVE_FIELDS) {
        let d: Vec<Field2<f64>> = (0..3)
            .map(|n| wave_of(name, &pert.levels[n], &g).zip(&wave_of(name, &background.levels[n], &g), |a, b| a - b))
            .collect();
        let gr = Grad::of([&d[0], &d[1], &d[2]], mesh, pert.dt);
        let (mut e, mut eb, mut fw, mut fwb) = (0.0, 0.0, 0.0, 0.0);
        for (k, &on) in sel.iter().enumerate() {
            if !on {
                continue;
            }
            let (c, u, v) = (mid.c.data[k], mid.v1.data[k], mid.v2.data[k]);
            let (dt_, d1, d2) = (gr.t.data[k], gr.x1.data[k], gr.x2.data[k]);
            let l = dt_ + (u + c) * d1 + v * d2;
            let lbar = t / c * l - 2.0 * t * d1;
            e += 0.5 * t * t * (d2 * d2 + l * l / (c * c));
            eb += 0.5 * (lbar * lbar + t * t * d2 * d2);
            if k % nx == edge {
                fw += l * l * t / c;
                fwb += c * t * d2 * d2;
            }
        }
        *slot = WaveEnergy {
            e_w: e * area / t,
            e_w_raw: e * area,
            e_w_bar: eb * area / t,
            e_w_bar_raw: eb * area,
            f_w_density: fw * mesh.dx2,
            f_w_bar_density: fwb * mesh.dx2,
        };
    }
    let om_p = mid.specific_vorticity(mesh.dx1, mesh.dx2);
    let om_b = background.mid().specific_vorticity(mesh.dx1, mesh.dx2);
    let (mut et, mut ft) = (0.0, 0.0);
    for (k, &on) in sel.iter().enumerate() {
        if on {
            let d = om_p.data[k] - om_b.data[k];
            let c = mid.c.data[k];
            et += c * t * d * d;
            if k % nx == edge {
                ft += c * c * d * d;
            }
        }
    }
    Ok(EnergyReport {
        time: t,
        region: region.name.clone(),
        wbar: waves[0],
        w: waves[1],
        psi2: waves[2],
        e_t: et * area / t,
        e_t_raw: et * area,
        f_t_density: ft * mesh.dx2,
    })
}

/// Trapezoidal time integral of a flux density sampled at increasing times.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct FluxSeries {
    pub times: Vec<f64>,
    pub densities: Vec<f64>,
}

impl FluxSeries {
    pub fn push(&mut self, t: f64, density: f64) {
        self.times.push(t);
        self.densities.push(density);
    }

    pub fn integral(&self) -> f64 {
        self.times
            .windows(2)
            .zip(self.densities.windows(2))
            .map(|(t, d)| 0.5 * (t[1] - t[0]) * (d[0] + d[1]))
            .sum()
    }
}

/// Least-squares slope of log y against log x; `None` with fewer than two usable points.
pub fn log_log_slope(x: &[f64], y: &[f64]) -> Option<f64> {
    let pts: Vec<(f64, f64)> =
        x.iter().zip(y).filter(|(a, b)| **a > 0.0 && **b > 0.0).map(|(a, b)| (a.ln(), b.ln())).collect();
    if pts.len() < 2 {
        return None;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    if sxx > 0.0 {
        Some(sxy / sxx)
    } else {
        None
    }
}
