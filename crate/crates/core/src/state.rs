//! Polytropic gas, state representations, Riemann invariants and eigenstructure.
//!
//! Velocities are stored physically. The frame potentials ψᵢ = −vᵢ exist only
//! through [`PrimState::psi1`] and [`PrimState::psi2`].

use crate::error::{Error, Result};
use crate::field::{Field2, X2Boundary};
use crate::scalar::Real;
use serde::{Deserialize, Serialize};

/// Densities below `VACUUM_REL * rho_ref` are vacuum.
pub const VACUUM_REL: f64 = 1e-12;

#[inline]
pub fn is_vacuum<T: Real>(rho: T, rho_ref: T) -> bool {
    rho < T::lit(VACUUM_REL) * rho_ref
}

/// EOS p = k₀ ρ^γ.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GasParams<T> {
    pub gamma: T,
    pub k0: T,
}

impl<T: Real> GasParams<T> {
    /// Accepts 1 < γ ≤ 3. γ = 3 is the boundary case used by the worked examples.
    pub fn new(gamma: T, k0: T) -> Result<Self> {
        if !(gamma > T::one() && gamma <= T::lit(3.0)) {
            return Err(Error::Domain(format!("gamma = {gamma} outside (1, 3]")));
        }
        if !(k0 > T::zero()) || !k0.is_finite() {
            return Err(Error::Domain(format!("k0 = {k0} must be positive")));
        }
        Ok(Self { gamma, k0 })
    }

    #[inline]
    pub fn pressure(&self, rho: T) -> T {
        self.k0 * rho.powf(self.gamma)
    }

    /// c = √(γk₀) ρ^((γ−1)/2).
    pub fn sound_speed(&self, rho: T) -> Result<T> {
        if rho < T::zero() || rho.is_nan() {
            return Err(Error::Domain(format!("negative density {rho}")));
        }
        Ok(self.c_of_rho(rho))
    }

    /// Unchecked sound speed; `rho` must be ≥ 0.
    #[inline]
    pub fn c_of_rho(&self, rho: T) -> T {
        if rho <= T::zero() {
            return T::zero();
        }
        (self.gamma * self.k0).sqrt() * rho.powf((self.gamma - T::one()) / T::lit(2.0))
    }

    /// ρ = (c²/(γk₀))^{1/(γ−1)}.
    #[inline]
    pub fn rho_of_c(&self, c: T) -> T {
        if c <= T::zero() {
            return T::zero();
        }
        (c * c / (self.gamma * self.k0)).powf(T::one() / (self.gamma - T::one()))
    }

    /// Specific enthalpy h = c²/(γ−1); ∇h = ∇p/ρ.
    #[inline]
    pub fn enthalpy(&self, rho: T) -> T {
        let c = self.c_of_rho(rho);
        c * c / (self.gamma - T::one())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct PrimState<T> {
    pub rho: T,
    pub v1: T,
    pub v2: T,
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct ConsState<T> {
    pub q0: T,
    pub q1: T,
    pub q2: T,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RiemannInvariants<T> {
    pub wbar: T,
    pub w: T,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Eigenvalues<T> {
    pub l1: T,
    pub l2: T,
    pub l3: T,
    /// Set at vacuum, where all three coincide.
    pub degenerate: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Direction {
    X1,
    X2,
}

impl<T: Real> PrimState<T> {
    pub fn new(rho: T, v1: T, v2: T) -> Self {
        Self { rho, v1, v2 }
    }

    /// State with prescribed sound speed instead of density.
    pub fn from_c(g: &GasParams<T>, c: T, v1: T, v2: T) -> Self {
        Self { rho: g.rho_of_c(c), v1, v2 }
    }

    #[inline]
    pub fn c(&self, g: &GasParams<T>) -> T {
        g.c_of_rho(self.rho)
    }

    #[inline]
    pub fn psi1(&self) -> T {
        -self.v1
    }

    #[inline]
    pub fn psi2(&self) -> T {
        -self.v2
    }

    #[inline]
    pub fn to_cons(&self) -> ConsState<T> {
        ConsState { q0: self.rho, q1: self.rho * self.v1, q2: self.rho * self.v2 }
    }

    pub fn is_admissible(&self) -> bool {
        self.rho >= T::zero() && self.rho.is_finite() && self.v1.is_finite() && self.v2.is_finite()
    }

    /// Swaps the roles of x₁ and x₂.
    #[inline]
    pub fn swapped(&self) -> Self {
        Self { rho: self.rho, v1: self.v2, v2: self.v1 }
    }
}

impl<T: Real> ConsState<T> {
    pub fn new(q0: T, q1: T, q2: T) -> Self {
        Self { q0, q1, q2 }
    }

    /// Velocities are zeroed at (absolute) vacuum ρ ≤ 0.
    #[inline]
    pub fn to_prim(&self) -> PrimState<T> {
        if self.q0 <= T::zero() {
            return PrimState { rho: self.q0.max(T::zero()), v1: T::zero(), v2: T::zero() };
        }
        PrimState { rho: self.q0, v1: self.q1 / self.q0, v2: self.q2 / self.q0 }
    }

    #[inline]
    pub fn as_array(&self) -> [T; 3] {
        [self.q0, self.q1, self.q2]
    }

    #[inline]
    pub fn from_array(a: [T; 3]) -> Self {
        Self { q0: a[0], q1: a[1], q2: a[2] }
    }
}

/// (w̄, w) = (c/(γ−1) + v¹/2, c/(γ−1) − v¹/2).
pub fn invariants_of<T: Real>(g: &GasParams<T>, s: &PrimState<T>) -> Result<RiemannInvariants<T>> {
    let c = g.sound_speed(s.rho)?;
    let a = c / (g.gamma - T::one());
    let half = s.v1 / T::lit(2.0);
    Ok(RiemannInvariants { wbar: a + half, w: a - half })
}

/// Inverse of [`invariants_of`]: c = (γ−1)(w̄+w)/2, v¹ = w̄ − w.
pub fn state_of<T: Real>(g: &GasParams<T>, inv: &RiemannInvariants<T>, v2: T) -> Result<PrimState<T>> {
    let sum = inv.wbar + inv.w;
    if sum < T::zero() {
        return Err(Error::VacuumExceeded(sum.to_f64_lossy()));
    }
    let c = (g.gamma - T::one()) * sum / T::lit(2.0);
    Ok(PrimState { rho: g.rho_of_c(c), v1: inv.wbar - inv.w, v2 })
}

/// (v¹−c, v¹, v¹+c).
pub fn eigenvalues<T: Real>(g: &GasParams<T>, s: &PrimState<T>) -> Eigenvalues<T> {
    let c = s.c(g);
    Eigenvalues { l1: s.v1 - c, l2: s.v1, l3: s.v1 + c, degenerate: !(c > T::zero()) }
}

/// Physical flux in direction `dir`; zero at vacuum.
pub fn analytic_flux<T: Real>(g: &GasParams<T>, s: &PrimState<T>, dir: Direction) -> [T; 3] {
    if s.rho <= T::zero() {
        return [T::zero(); 3];
    }
    let p = g.pressure(s.rho);
    let m1 = s.rho * s.v1;
    let m2 = s.rho * s.v2;
    match dir {
        Direction::X1 => [m1, m1 * s.v1 + p, m1 * s.v2],
        Direction::X2 => [m2, m2 * s.v1, m2 * s.v2 + p],
    }
}

/// F(U) in x₁ from conservative variables.
pub fn flux_of_cons<T: Real>(g: &GasParams<T>, u: &ConsState<T>) -> [T; 3] {
    analytic_flux(g, &u.to_prim(), Direction::X1)
}

/// Analytic Jacobian DF(U) of the x₁ flux, row-major.
pub fn flux_jacobian<T: Real>(g: &GasParams<T>, s: &PrimState<T>) -> [[T; 3]; 3] {
    let c = s.c(g);
    let (u, v) = (s.v1, s.v2);
    let z = T::zero();
    [
        [z, T::one(), z],
        [c * c - u * u, T::lit(2.0) * u, z],
        [-u * v, v, u],
    ]
}

/// Vorticity ω = ∂₁v² − ∂₂v¹ and Ω = ω/ρ; `valid` is false where ρ is vacuum.
#[derive(Debug, Clone)]
pub struct VorticityField<T> {
    pub omega: Field2<T>,
    pub big_omega: Field2<T>,
    pub valid: Vec<bool>,
}

/// Central-difference curl on a lattice of primitive states.
pub fn curl_and_specific_vorticity<T: Real>(
    rho: &Field2<T>,
    v1: &Field2<T>,
    v2: &Field2<T>,
    dx1: T,
    dx2: T,
    bc: X2Boundary,
) -> VorticityField<T> {
    let omega = v2.d1(dx1).zip(&v1.d2(dx2, bc), |a, b| a - b);
    let rho_ref = rho.data.iter().fold(T::zero(), |m, &r| m.max(r));
    let valid: Vec<bool> = rho.data.iter().map(|&r| r > T::zero() && !is_vacuum(r, rho_ref)).collect();
    let mut big_omega = Field2::zeros(rho.nx, rho.ny);
    for k in 0..rho.data.len() {
        big_omega.data[k] = if valid[k] { omega.data[k] / rho.data[k] } else { T::nan() };
    }
    VorticityField { omega, big_omega, valid }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn g2() -> GasParams<f64> {
        GasParams::<f64>::new(2.0, 0.5).unwrap()
    }

    #[test]
    fn sound_speed_examples() {
        assert_eq!(g2().sound_speed(4.0).unwrap(), 2.0);
        let g3 = GasParams::<f64>::new(3.0, 1.0 / 3.0).unwrap();
        assert!((g3.sound_speed(1.0).unwrap() - 1.0).abs() < 1e-15);
        assert_eq!(g3.sound_speed(0.0).unwrap(), 0.0);
        assert!(g3.sound_speed(-1.0).is_err());
    }

    #[test]
    fn gas_params_validation() {
        assert!(GasParams::<f64>::new(1.0, 1.0).is_err());
        assert!(GasParams::<f64>::new(3.5, 1.0).is_err());
        assert!(GasParams::<f64>::new(1.4, 0.0).is_err());
        assert!(GasParams::<f32>::new(1.4, 1.0).is_ok());
    }

    #[test]
    fn invariant_examples() {
        let g = GasParams::<f64>::new(3.0, 1.0 / 3.0).unwrap();
        let s = PrimState::from_c(&g, 2.0, 1.0, 0.0);
        let inv = invariants_of(&g, &s).unwrap();
        assert!((inv.wbar - 1.5).abs() < 1e-14 && (inv.w - 0.5).abs() < 1e-14);
        let back = state_of(&g, &RiemannInvariants { wbar: 0.25, w: 0.25 }, 0.0).unwrap();
        assert!((back.c(&g) - 0.5).abs() < 1e-15 && back.v1 == 0.0);
        assert!(matches!(
            state_of(&g, &RiemannInvariants { wbar: -1.0, w: 0.5 }, 0.0),
            Err(Error::VacuumExceeded(_))
        ));
    }

    #[test]
    fn eigenvalue_examples() {
        let g = GasParams::<f64>::new(3.0, 1.0 / 3.0).unwrap();
        let e = eigenvalues(&g, &PrimState::from_c(&g, 1.0, 0.0, 0.0));
        assert!((e.l1 + 1.0).abs() < 1e-14 && e.l2 == 0.0 && (e.l3 - 1.0).abs() < 1e-14);
        let e = eigenvalues(&g, &PrimState::from_c(&g, 0.5, 2.0, 0.0));
        assert!((e.l1 - 1.5).abs() < 1e-14 && (e.l3 - 2.5).abs() < 1e-14);
        let e = eigenvalues(&g, &PrimState::new(0.0, 0.7, 0.0));
        assert!(e.degenerate && e.l1 == e.l3);
    }

    #[test]
    fn flux_examples() {
        let f = analytic_flux(&g2(), &PrimState::new(1.0, 2.0, 3.0), Direction::X1);
        assert_eq!(f, [2.0, 4.5, 6.0]);
        let f = analytic_flux(&g2(), &PrimState::new(1.0, 0.0, 0.0), Direction::X1);
        assert_eq!(f, [0.0, 0.5, 0.0]);
        let f = analytic_flux(&g2(), &PrimState::new(1.0, 2.0, 3.0), Direction::X2);
        assert_eq!(f, [3.0, 6.0, 9.5]);
        assert_eq!(analytic_flux(&g2(), &PrimState::new(0.0, 1.0, 1.0), Direction::X1), [0.0; 3]);
    }

    #[test]
    fn generic_over_f32() {
        let g = GasParams::<f32>::new(2.0, 0.5).unwrap();
        assert!((g.sound_speed(4.0).unwrap() - 2.0).abs() < 1e-6);
        let s = PrimState::<f32>::new(1.3, 0.2, -0.1);
        let back = state_of(&g, &invariants_of(&g, &s).unwrap(), s.v2).unwrap();
        assert!((back.rho - s.rho).abs() < 1e-5);
    }

    #[test]
    fn uniform_flow_has_no_vorticity() {
        let rho = Field2::from_fn(8, 8, |_, _| 1.3);
        let v1 = Field2::from_fn(8, 8, |_, _| 0.4);
        let v2 = Field2::from_fn(8, 8, |_, _| -0.2);
        let vf = curl_and_specific_vorticity(&rho, &v1, &v2, 0.1, 0.1, X2Boundary::Periodic);
        assert_eq!(vf.big_omega.max_abs(), 0.0);
    }

    #[test]
    fn rigid_rotation_vorticity_is_two() {
        let h = 0.05;
        let n = 21;
        let x = |i: usize| -0.5 + i as f64 * h;
        let rho = Field2::from_fn(n, n, |_, _| 1.0);
        let v1 = Field2::from_fn(n, n, |_, j| -x(j));
        let v2 = Field2::from_fn(n, n, |i, _| x(i));
        let vf = curl_and_specific_vorticity(&rho, &v1, &v2, h, h, X2Boundary::OneSided);
        assert!(vf.big_omega.data.iter().all(|&o| (o - 2.0).abs() < 1e-12));
    }

    #[test]
    fn vacuum_cells_are_masked() {
        let rho = Field2::from_fn(4, 4, |i, _| if i == 0 { 0.0f64 } else { 1.0 });
        let z = Field2::zeros(4, 4);
        let vf = curl_and_specific_vorticity(&rho, &z, &z, 1.0, 1.0, X2Boundary::Periodic);
        assert!(!vf.valid[0] && vf.big_omega.data[0].is_nan() && vf.valid[1]);
    }

    proptest! {
        #[test]
        fn eos_consistency(rho in 1e-6f64..1e3, gamma in 1.01f64..3.0, k0 in 0.1f64..10.0) {
            let g = GasParams::<f64>::new(gamma, k0).unwrap();
            let c = g.c_of_rho(rho);
            let rel = (c * c - gamma * k0 * rho.powf(gamma - 1.0)).abs() / (c * c);
            prop_assert!(rel < 1e-14);
        }

        #[test]
        fn invariant_maps_are_inverse(rho in 1e-3f64..1e2, v1 in -5.0f64..5.0, v2 in -5.0f64..5.0, gamma in 1.05f64..3.0) {
            let g = GasParams::<f64>::new(gamma, 1.0).unwrap();
            let s = PrimState::new(rho, v1, v2);
            let back = state_of(&g, &invariants_of(&g, &s).unwrap(), v2).unwrap();
            prop_assert!((back.rho - rho).abs() <= 1e-13 * rho.max(1.0) * 10.0);
            prop_assert!((back.v1 - v1).abs() <= 1e-13 * v1.abs().max(1.0) * 10.0);
            let c = s.c(&g);
            let c2 = back.c(&g);
            prop_assert!((c - c2).abs() <= 1e-13 * c.max(1.0));
        }

        #[test]
        fn cons_round_trip(rho in 1e-6f64..1e3, v1 in -10.0f64..10.0, v2 in -10.0f64..10.0) {
            let s = PrimState::new(rho, v1, v2);
            let b = s.to_cons().to_prim();
            prop_assert!((b.rho - rho).abs() == 0.0);
            prop_assert!((b.v1 - v1).abs() <= 1e-14 * v1.abs().max(1.0));
            prop_assert!((b.v2 - v2).abs() <= 1e-14 * v2.abs().max(1.0));
        }

        #[test]
        fn eigenvalues_are_ordered(rho in 1e-6f64..1e3, v1 in -10.0f64..10.0, gamma in 1.05f64..3.0) {
            let g = GasParams::<f64>::new(gamma, 1.0).unwrap();
            let e = eigenvalues(&g, &PrimState::new(rho, v1, 0.0));
            prop_assert!(e.l1 < e.l2 && e.l2 < e.l3 && !e.degenerate);
        }

        #[test]
        fn jacobian_matches_central_differences(rho in 0.1f64..10.0, v1 in -3.0f64..3.0, v2 in -3.0f64..3.0, gamma in 1.1f64..3.0) {
            let g = GasParams::<f64>::new(gamma, 1.0).unwrap();
            let s = PrimState::new(rho, v1, v2);
            let jac = flux_jacobian(&g, &s);
            let u = s.to_cons().as_array();
            let h = 1e-6;
            for k in 0..3 {
                let mut up = u;
                let mut dn = u;
                up[k] += h;
                dn[k] -= h;
                let fp = flux_of_cons(&g, &ConsState::from_array(up));
                let fm = flux_of_cons(&g, &ConsState::from_array(dn));
                for r in 0..3 {
                    let fd = (fp[r] - fm[r]) / (2.0 * h);
                    prop_assert!((fd - jac[r][k]).abs() < 1e-6 * jac[r][k].abs().max(1.0));
                }
            }
        }

        #[test]
        fn eigenvalues_match_numerical_diagonalization(rho in 0.01f64..100.0, v1 in -5.0f64..5.0, v2 in -5.0f64..5.0, gamma in 1.05f64..3.0) {
            let g = GasParams::<f64>::new(gamma, 1.0).unwrap();
            let s = PrimState::new(rho, v1, v2);
            let j = flux_jacobian(&g, &s);
            let m = nalgebra::Matrix3::from_fn(|r, c| j[r][c]);
            let ev = m.complex_eigenvalues();
            let mut re: Vec<f64> = ev.iter().map(|z| z.re).collect();
            re.sort_by(|a, b| a.partial_cmp(b).unwrap());
            let e = eigenvalues(&g, &s);
            for (a, b) in re.iter().zip([e.l1, e.l2, e.l3]) {
                prop_assert!((a - b).abs() < 1e-8);
            }
        }
    }
}
