//! Solution traces and first-order L-jets on the initial singularity,
//! with an independent RK4 oracle for the transport ODEs in u.
//!
//! Along the singularity c(u) = c_r − a·u with a = (γ−1)/(γ+1).

use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::state::GasParams;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// Periodic right-state data on a uniform ϑ grid over [0, 2π).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RightBoundaryTrace<T> {
    pub theta: Vec<T>,
    pub c_r: Vec<T>,
    pub v1_r: Vec<T>,
    pub v2_r: Vec<T>,
    pub omega_r: Vec<T>,
    /// ∂₂v²_r
    pub d2v2_r: Vec<T>,
    /// L(w_r)
    pub l_w_r: Vec<T>,
    /// L(ψ₂r)
    pub l_psi2_r: Vec<T>,
    /// L(Ω_r)
    pub l_omega_r: Vec<T>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TracePoint<T> {
    pub c_r: T,
    pub v1_r: T,
    pub v2_r: T,
    pub omega_r: T,
    pub d2v2_r: T,
    pub l_w_r: T,
    pub l_psi2_r: T,
    pub l_omega_r: T,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SingularValues<T> {
    pub c: T,
    pub wbar: T,
    pub w: T,
    pub psi2: T,
    pub omega: T,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Jets<T> {
    pub l_wbar: T,
    pub l_w: T,
    pub l_psi2: T,
    pub l_omega: T,
}

/// Catmull-Rom interpolation through periodic samples.
fn periodic_cubic<T: Real>(values: &[T], theta: T) -> T {
    let n = values.len();
    let tau = T::TAU();
    let h = tau / T::from_usize(n).unwrap();
    let mut s = (theta % tau) / h;
    if s < T::zero() {
        s = s + T::from_usize(n).unwrap();
    }
    let k = s.floor();
    let t = s - k;
    let k = k.to_usize().unwrap_or(0) % n;
    let p0 = values[(k + n - 1) % n];
    let p1 = values[k];
    let p2 = values[(k + 1) % n];
    let p3 = values[(k + 2) % n];
    let half = T::lit(0.5);
    let m1 = half * (p2 - p0);
    let m2 = half * (p3 - p1);
    let t2 = t * t;
    let t3 = t2 * t;
    let two = T::lit(2.0);
    let three = T::lit(3.0);
    (two * t3 - three * t2 + T::one()) * p1 + (t3 - two * t2 + t) * m1 + (-two * t3 + three * t2) * p2 + (t3 - t2) * m2
}

impl<T: Real> RightBoundaryTrace<T> {
    pub fn len(&self) -> usize {
        self.theta.len()
    }

    pub fn is_empty(&self) -> bool {
        self.theta.is_empty()
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.theta.len();
        if n < 4 {
            return Err(Error::Data("trace needs at least 4 samples".into()));
        }
        for col in [&self.c_r, &self.v1_r, &self.v2_r, &self.omega_r, &self.d2v2_r, &self.l_w_r, &self.l_psi2_r, &self.l_omega_r] {
            if col.len() != n {
                return Err(Error::Data("trace columns differ in length".into()));
            }
        }
        if let Some(c) = self.c_r.iter().find(|&&c| !(c > T::zero())) {
            return Err(Error::Data(format!("c_r = {c} must be positive")));
        }
        Ok(())
    }

    /// Node values at index `k`.
    pub fn node(&self, k: usize) -> TracePoint<T> {
        TracePoint {
            c_r: self.c_r[k],
            v1_r: self.v1_r[k],
            v2_r: self.v2_r[k],
            omega_r: self.omega_r[k],
            d2v2_r: self.d2v2_r[k],
            l_w_r: self.l_w_r[k],
            l_psi2_r: self.l_psi2_r[k],
            l_omega_r: self.l_omega_r[k],
        }
    }

    /// Periodic cubic interpolation at ϑ; exact at grid nodes.
    pub fn at(&self, theta: T) -> TracePoint<T> {
        let f = |v: &[T]| periodic_cubic(v, theta);
        TracePoint {
            c_r: f(&self.c_r),
            v1_r: f(&self.v1_r),
            v2_r: f(&self.v2_r),
            omega_r: f(&self.omega_r),
            d2v2_r: f(&self.d2v2_r),
            l_w_r: f(&self.l_w_r),
            l_psi2_r: f(&self.l_psi2_r),
            l_omega_r: f(&self.l_omega_r),
        }
    }

    /// Default extent ū = 0.95 (γ+1)/(γ−1) min c_r.
    pub fn u_bar(&self, g: &GasParams<T>) -> T {
        let cmin = self.c_r.iter().fold(T::infinity(), |m, &c| m.min(c));
        T::lit(0.95) * (g.gamma + T::one()) / (g.gamma - T::one()) * cmin
    }

    /// Uniform right state plus seeded low-mode Fourier perturbations of size `amp`.
    ///
    /// ∂₂v²_r is the exact derivative of the generated v²_r. The L-jets are free data.
    pub fn random(base_c: T, base_v1: T, base_v2: T, n: usize, amp: T, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let modes = 3;
        let mut coef = |_: usize| -> Vec<(T, T)> {
            (0..modes).map(|_| (T::lit(rng.gen_range(-1.0..1.0)), T::lit(rng.gen_range(-1.0..1.0)))).collect()
        };
        let (cc, c1, c2, co, cw, cp, cl) = (coef(0), coef(1), coef(2), coef(3), coef(4), coef(5), coef(6));
        let h = T::TAU() / T::from_usize(n).unwrap();
        let theta: Vec<T> = (0..n).map(|k| T::from_usize(k).unwrap() * h).collect();
        let series = |cs: &[(T, T)], th: T| -> T {
            cs.iter().enumerate().fold(T::zero(), |acc, (m, &(a, b))| {
                let k = T::from_usize(m + 1).unwrap();
                acc + (a * (k * th).cos() + b * (k * th).sin()) / k
            })
        };
        let dseries = |cs: &[(T, T)], th: T| -> T {
            cs.iter().enumerate().fold(T::zero(), |acc, (m, &(a, b))| {
                let k = T::from_usize(m + 1).unwrap();
                acc - a * (k * th).sin() + b * (k * th).cos()
            })
        };
        let col = |f: &dyn Fn(T) -> T| theta.iter().map(|&t| f(t)).collect::<Vec<T>>();
        Self {
            c_r: col(&|t| base_c * (T::one() + amp * series(&cc, t))),
            v1_r: col(&|t| base_v1 + amp * series(&c1, t)),
            v2_r: col(&|t| base_v2 + amp * series(&c2, t)),
            d2v2_r: col(&|t| amp * dseries(&c2, t)),
            omega_r: col(&|t| amp * series(&co, t)),
            l_w_r: col(&|t| amp * series(&cw, t)),
            l_psi2_r: col(&|t| amp * series(&cp, t)),
            l_omega_r: col(&|t| amp * series(&cl, t)),
            theta,
        }
    }
}

/// Boundary datum L(w)(0,ϑ) = 2 c_r ∂₁w_r + ½ c_r ∂₂ψ₂.
pub fn lw_boundary_datum<T: Real>(c_r: T, d1w_r: T, d2psi2: T) -> T {
    T::lit(2.0) * c_r * d1w_r + T::lit(0.5) * c_r * d2psi2
}

fn c_at<T: Real>(g: &GasParams<T>, c_r: T, u: T) -> Result<T> {
    if u < T::zero() {
        return Err(Error::Domain(format!("u = {u} must be non-negative")));
    }
    let c = c_r - (g.gamma - T::one()) * u / (g.gamma + T::one());
    if !(c > T::zero()) {
        return Err(Error::Vacuum(format!("u = {u} reaches vacuum (c = {c})")));
    }
    Ok(c)
}

/// Closed-form traces on the singularity.
pub fn trace_point<T: Real>(g: &GasParams<T>, p: &TracePoint<T>, u: T) -> Result<SingularValues<T>> {
    let c = c_at(g, p.c_r, u)?;
    let gm1 = g.gamma - T::one();
    let gp1 = g.gamma + T::one();
    let half = T::lit(0.5);
    let wbar_r = p.c_r / gm1 + half * p.v1_r;
    let w_r = p.c_r / gm1 - half * p.v1_r;
    Ok(SingularValues { c, wbar: wbar_r - T::lit(2.0) * u / gp1, w: w_r, psi2: -p.v2_r, omega: p.omega_r })
}

pub fn trace<T: Real>(g: &GasParams<T>, right: &RightBoundaryTrace<T>, u: T, theta: T) -> Result<SingularValues<T>> {
    trace_point(g, &right.at(theta), u)
}

/// Below this |3 − γ| the L(w) formula switches to its γ → 3 limit.
const GAMMA3_SWITCH: f64 = 1e-3;

/// First L-jets at (u, ϑ) from the closed forms.
pub fn first_jets_point<T: Real>(g: &GasParams<T>, p: &TracePoint<T>, u: T) -> Result<Jets<T>> {
    let c = c_at(g, p.c_r, u)?;
    let gamma = g.gamma;
    let gm1 = gamma - T::one();
    let gp1 = gamma + T::one();
    let half = T::lit(0.5);
    let two = T::lit(2.0);
    let ratio = c / p.c_r;
    let l_wbar = -half * c * p.d2v2_r;
    // S = ∂₂ψ₂ on the right boundary.
    let s = -p.d2v2_r;
    let pw = gp1 / (two * gm1);
    let l_w = if (T::lit(3.0) - gamma).abs() > T::lit(GAMMA3_SWITCH) {
        let a = gp1 * s / (two * (T::lit(3.0) - gamma));
        a * c - a * p.c_r * ratio.powf(pw) + ratio.powf(pw) * p.l_w_r
    } else {
        // A c (1 − ratio^{p−1}) written through expm1 so the γ → 3 limit is exact.
        let q = pw - T::one();
        let ln = ratio.ln();
        let x = q * ln;
        let expm1_over_q = if x.abs() < T::lit(1e-8) { ln * (T::one() + half * x) } else { x.exp_m1() / q };
        -(gp1 * s / (T::lit(4.0) * gm1)) * c * expm1_over_q + ratio.powf(pw) * p.l_w_r
    };
    let rho = g.rho_of_c(c);
    let l_psi2 = two * u / gp1 * rho * p.omega_r + ratio.powf(two / gm1) * p.l_psi2_r;
    let l_omega = ratio.powf(gp1 / gm1) * p.l_omega_r;
    Ok(Jets { l_wbar, l_w, l_psi2, l_omega })
}

pub fn first_jets<T: Real>(g: &GasParams<T>, right: &RightBoundaryTrace<T>, u: T, theta: T) -> Result<Jets<T>> {
    first_jets_point(g, &right.at(theta), u)
}

/// Factor multiplying ∂₁v²_r in Ω for n = 1, i.e. 1/ρ_r(0,ϑ).
pub fn leading_vorticity_coefficient<T: Real>(
    n: usize,
    _u: T,
    theta: T,
    right: &RightBoundaryTrace<T>,
    g: &GasParams<T>,
) -> Result<T> {
    if n != 1 {
        return Err(Error::Unsupported(format!("vorticity coefficient for n = {n}; only n = 1")));
    }
    Ok(T::one() / g.rho_of_c(right.at(theta).c_r))
}

/// RK4 jets on a u-grid at every ϑ node.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleJets<T> {
    pub u: Vec<T>,
    /// `jets[k][i]`: node `k`, grid point `i`.
    pub jets: Vec<Vec<Jets<T>>>,
}

/// Integrates the transport ODEs in u with classical RK4.
///
/// `2 ∂_u L(w) + c⁻¹ L(w) = ½ ∂_ϑψ₂`, `2 ∂_u L(ψ₂) + 4/((γ+1)c) L(ψ₂) = 4ρΩ/(γ+1)`,
/// `∂_u L(Ω) = −c⁻¹ L(Ω)`, `∂_u L(w̄) = −½ c'(u) ∂₂v²_r`.
pub fn ode_oracle<T: Real>(right: &RightBoundaryTrace<T>, g: &GasParams<T>, u_max: T, step: T) -> Result<OracleJets<T>> {
    right.validate()?;
    if !(step > T::zero()) || step > T::lit(1e-3) * u_max * (T::one() + T::lit(1e-12)) {
        return Err(Error::Config(format!("step {step} must lie in (0, 1e-3 u_max]")));
    }
    let nsteps = (u_max / step).ceil().to_usize().unwrap_or(0).max(1);
    let h = u_max / T::from_usize(nsteps).unwrap();
    let u: Vec<T> = (0..=nsteps).map(|i| T::from_usize(i).unwrap() * h).collect();
    let gm1 = g.gamma - T::one();
    let gp1 = g.gamma + T::one();
    let slope = gm1 / gp1;
    let (half, two, four) = (T::lit(0.5), T::lit(2.0), T::lit(4.0));
    let mut jets = Vec::with_capacity(right.len());
    for k in 0..right.len() {
        let p = right.node(k);
        if p.c_r - slope * u_max <= T::zero() {
            return Err(Error::Vacuum(format!("u_max = {u_max} reaches vacuum at node {k}")));
        }
        let s = -p.d2v2_r;
        let cu = |uu: T| p.c_r - slope * uu;
        let rhs = |uu: T, y: [T; 4]| -> [T; 4] {
            let c = cu(uu);
            let rho = g.rho_of_c(c);
            [
                half * slope * p.d2v2_r,
                (half * s - y[1] / c) / two,
                (four * rho * p.omega_r / gp1 - four / (gp1 * c) * y[2]) / two,
                -y[3] / c,
            ]
        };
        let mut y = [-half * p.c_r * p.d2v2_r, p.l_w_r, p.l_psi2_r, p.l_omega_r];
        let mut row = Vec::with_capacity(nsteps + 1);
        let pack = |y: [T; 4]| Jets { l_wbar: y[0], l_w: y[1], l_psi2: y[2], l_omega: y[3] };
        row.push(pack(y));
        for i in 0..nsteps {
            let u0 = u[i];
            let add = |a: [T; 4], b: [T; 4], f: T| [0, 1, 2, 3].map(|m| a[m] + f * b[m]);
            let k1 = rhs(u0, y);
            let k2 = rhs(u0 + half * h, add(y, k1, half * h));
            let k3 = rhs(u0 + half * h, add(y, k2, half * h));
            let k4 = rhs(u0 + h, add(y, k3, h));
            let sixth = h / T::lit(6.0);
            y = [0, 1, 2, 3].map(|m| y[m] + sixth * (k1[m] + two * k2[m] + two * k3[m] + k4[m]));
            row.push(pack(y));
        }
        jets.push(row);
    }
    Ok(OracleJets { u, jets })
}

/// Residuals of the closed forms in their ODEs, by centred differences in u.
pub fn closed_form_ode_residual<T: Real>(g: &GasParams<T>, p: &TracePoint<T>, u: T, du: T) -> Result<[T; 3]> {
    let jm = first_jets_point(g, p, u - du)?;
    let j0 = first_jets_point(g, p, u)?;
    let jp = first_jets_point(g, p, u + du)?;
    let two = T::lit(2.0);
    let half = T::lit(0.5);
    let gp1 = g.gamma + T::one();
    let c = c_at(g, p.c_r, u)?;
    let rho = g.rho_of_c(c);
    let d = |a: T, b: T| (b - a) / (two * du);
    let r_w = two * d(jm.l_w, jp.l_w) + j0.l_w / c - half * (-p.d2v2_r);
    let r_psi = two * d(jm.l_psi2, jp.l_psi2) + T::lit(4.0) / (gp1 * c) * j0.l_psi2 - T::lit(4.0) / gp1 * rho * p.omega_r;
    let r_om = d(jm.l_omega, jp.l_omega) + j0.l_omega / c;
    Ok([r_w, r_psi, r_om])
}
