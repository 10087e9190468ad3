//! Fan-law and second-null-frame checks on single snapshots.

use crate::diag::fields::{discontinuity_mask, Level, Mesh, Region};
use crate::diag::report::{DiagnosticsReport, Stat};
use crate::error::{Error, Result};
use crate::field::{Field2, X2Boundary};
use crate::fv2d::Grid2D;
use crate::riemann::{classify_and_solve, WaveKind};

const P: X2Boundary = X2Boundary::Periodic;
const SLOPE_TOL: f64 = 1e-12;

/// Interior slope of ∂₁w̄ in a centred 3-rarefaction: 2/((γ+1)t).
pub fn fan_slope(gamma: f64, t: f64) -> f64 {
    2.0 / ((gamma + 1.0) * t)
}

/// Rejects regions that are not inside the run's background 3-rarefaction.
pub fn validate_fan_region(grid: &Grid2D, region: &Region) -> Result<()> {
    if !(grid.time > 0.0) {
        return Err(Error::Domain(format!("fan checks need t > 0, got {}", grid.time)));
    }
    let fan = classify_and_solve(&grid.base)?;
    match fan.right_wave {
        Some(w) if w.kind == WaveKind::Rarefaction => {
            if region.xi_min < w.tail - SLOPE_TOL || region.xi_max > w.head + SLOPE_TOL {
                return Err(Error::Domain(format!(
                    "region {} = [{}, {}] leaves the right fan [{}, {}]",
                    region.name, region.xi_min, region.xi_max, w.tail, w.head
                )));
            }
            Ok(())
        }
        _ => Err(Error::Domain(format!("pattern {} has no right rarefaction", fan.pattern))),
    }
}

/// max and mean of |∂₁w̄ − 2/((γ+1)t)| over `region`.
pub fn fan_profile_check(grid: &Grid2D, region: &Region) -> Result<DiagnosticsReport> {
    validate_fan_region(grid, region)?;
    let lv = Level::of_grid(grid);
    let mesh = Mesh::of_grid(grid);
    let target = fan_slope(grid.gas.gamma, grid.time);
    let dev = lv.wbar(&grid.gas).d1(mesh.dx1).map(|d| d - target);
    let sel = region.select(&mesh, grid.time, Some(&discontinuity_mask(&[&lv])));
    let mut rep = DiagnosticsReport::default();
    rep.push(Stat::of("fan_slope_dev", &dev, &sel, &mesh, grid.time, region)?);
    Ok(rep)
}

/// Second-null-frame scalars: y = X̊(v¹+c), z = 1 + T̊(v¹+c), χ̊ = −X̊ψ₂, η̊ = −T̊ψ₂.
#[derive(Debug, Clone, PartialEq)]
pub struct MathringQuantities {
    pub time: f64,
    pub y: Field2<f64>,
    pub z: Field2<f64>,
    pub chi: Field2<f64>,
    pub eta: Field2<f64>,
}

impl MathringQuantities {
    /// ẙ = y/κ̊.
    pub fn y_ring(&self) -> Field2<f64> {
        self.y.map(|y| y / self.time)
    }

    /// z̊ = z/κ̊.
    pub fn z_ring(&self) -> Field2<f64> {
        self.z.map(|z| z / self.time)
    }

    /// ζ̊ = −κ̊ y.
    pub fn zeta(&self) -> Field2<f64> {
        self.y.map(|y| -self.time * y)
    }
}

/// X̊ = ∂₂ and T̊ = −t∂₁ applied by central differences.
pub fn mathring_fields(lv: &Level, mesh: &Mesh) -> Result<MathringQuantities> {
    let t = lv.time;
    if !(t > 0.0) {
        return Err(Error::Domain(format!("mathring quantities need t > 0, got {t}")));
    }
    let s = lv.v1.zip(&lv.c, |a, b| a + b);
    let y = s.d2(mesh.dx2, P);
    let z = s.d1(mesh.dx1).map(|d| 1.0 - t * d);
    // ψ₂ = −v², so −X̊ψ₂ = ∂₂v² and −T̊ψ₂ = −t∂₁v².
    let chi = lv.v2.d2(mesh.dx2, P);
    let eta = lv.v2.d1(mesh.dx1).map(|d| -t * d);
    Ok(MathringQuantities { time: t, y, z, chi, eta })
}

/// Fields plus max|z|, max|y|, max|χ̊|, max|η̊| over `region`.
pub fn mathring_quantities(grid: &Grid2D, region: &Region) -> Result<(MathringQuantities, DiagnosticsReport)> {
    let lv = Level::of_grid(grid);
    let mesh = Mesh::of_grid(grid);
    let q = mathring_fields(&lv, &mesh)?;
    let sel = region.select(&mesh, grid.time, Some(&discontinuity_mask(&[&lv])));
    let mut rep = DiagnosticsReport::default();
    for (name, f) in [("z", &q.z), ("y", &q.y), ("chi_ring", &q.chi), ("eta_ring", &q.eta)] {
        rep.push(Stat::of(name, f, &sel, &mesh, grid.time, region)?);
    }
    Ok((q, rep))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diag::fields::analytic_grid;
    use crate::{Data, Gas, Prim};

    fn rr(gamma: f64) -> Data {
        let g = Gas::new(gamma, 1.0).unwrap();
        let c = g.c_of_rho(1.0);
        Data::new(g, Prim::from_c(&g, c, -0.5, 0.2), Prim::from_c(&g, c, 0.5, 0.2))
    }

    #[test]
    fn exact_fan_slope_gamma_two() {
        let d = rr(2.0);
        let fan = classify_and_solve(&d).unwrap();
        let region = Region::right_fan(&fan, 3).unwrap();
        let grid = analytic_grid(&d, 400, 4, 1.5, 0.5).unwrap();
        let rep = fan_profile_check(&grid, &region).unwrap();
        assert!((fan_slope(2.0, 0.5) - 4.0 / 3.0).abs() < 1e-15);
        assert!(rep.rows[0].max < 1e-10, "{:?}", rep.rows[0]);
    }

    #[test]
    fn validator_rejects_constant_regions() {
        let d = rr(1.4);
        let fan = classify_and_solve(&d).unwrap();
        let w = fan.right_wave.unwrap();
        let grid = analytic_grid(&d, 100, 4, 2.0, 0.5).unwrap();
        let outside = Region::slopes("outside", w.head + 0.1, w.head + 0.5, 0);
        assert!(matches!(fan_profile_check(&grid, &outside), Err(Error::Domain(_))));
        let flat = Data::new(d.g, d.right, d.right);
        let mut g2 = analytic_grid(&flat, 100, 4, 2.0, 0.5).unwrap();
        g2.base = flat;
        assert!(fan_profile_check(&g2, &Region::slopes("r", 0.0, 0.1, 0)).is_err());
        let thin = Region::slopes("thin", w.tail, w.tail, 3);
        assert!(matches!(fan_profile_check(&grid, &thin), Err(Error::EmptyRegion(_))));
    }

    #[test]
    fn exact_fan_forces_z_and_y_to_vanish() {
        let d = rr(1.4);
        let fan = classify_and_solve(&d).unwrap();
        let region = Region::right_fan(&fan, 3).unwrap();
        let grid = analytic_grid(&d, 400, 8, 2.0, 0.5).unwrap();
        let (_, rep) = mathring_quantities(&grid, &region).unwrap();
        assert!(rep.get("z").unwrap().max <= 1e-12);
        assert_eq!(rep.get("y").unwrap().max, 0.0);
        assert_eq!(rep.get("chi_ring").unwrap().max, 0.0);
        // Outside the fan z = 1.
        let (q, _) = mathring_quantities(&grid, &Region::all()).unwrap();
        assert!((q.z.at(2, 0) - 1.0).abs() < 1e-15);
    }
}
