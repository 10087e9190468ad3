//! Background S-R and R-V-R constructions, inner-boundary curves, and the
//! supersonic and compatibility predicates.

use crate::error::{Error, Result};
use crate::riemann::{fan_cv, wave_curve_deriv, Family, RiemannData};
use crate::roots::{newton_bisect, RootOptions};
use crate::scalar::Real;
use crate::state::{invariants_of, GasParams, PrimState};
use serde::{Deserialize, Serialize};

/// 1-shock from U_l followed by a centred 3-fan onto U_r.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SRBackground<T> {
    pub g: GasParams<T>,
    pub left: PrimState<T>,
    pub right: PrimState<T>,
    pub shock_speed: T,
    pub middle: PrimState<T>,
    /// Inner fan slope k (fan tail).
    pub fan_inner_slope: T,
    /// Outer fan slope v¹_r + c_r.
    pub fan_outer_slope: T,
}

/// Two centred fans separated by a vortex sheet.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RVRBackground<T> {
    pub g: GasParams<T>,
    pub left: PrimState<T>,
    pub right: PrimState<T>,
    /// (v¹_l − c_l, k_l)
    pub left_fan: (T, T),
    /// (k_r, v¹_r + c_r)
    pub right_fan: (T, T),
    pub mid_left: PrimState<T>,
    pub mid_right: PrimState<T>,
    pub vortex_speed: T,
    /// |c_{m,l} − c_{m,r}|, reported rather than asserted.
    pub c_mismatch: T,
    /// max(|v¹_{m,l} − v_m|, |v¹_{m,r} − v_m|).
    pub v_mismatch: T,
}

fn fan_state<T: Real>(g: &GasParams<T>, outer: &PrimState<T>, family: Family, xi: T) -> PrimState<T> {
    let (c, v) = fan_cv(g, outer.c(g), outer.v1, family, xi);
    PrimState::from_c(g, c.max(T::zero()), v, outer.v2)
}

/// Solves the S-R construction along the right fan.
pub fn build_sr<T: Real>(data: &RiemannData<T>) -> Result<SRBackground<T>> {
    let g = data.g;
    let (l, r) = (data.left, data.right);
    let cr = r.c(&g);
    let cl = l.c(&g);
    let gp1 = g.gamma + T::one();
    let a = (g.gamma - T::one()) / gp1;
    let b = T::lit(2.0) / gp1;
    let head = r.v1 + cr;
    // Slope on the fan where c reaches c_l: zero shock strength.
    let k_zero = (cl - b * cr) / a + r.v1;
    let pad = T::lit(1e-14);
    let lo = k_zero - pad;
    let hi = head + pad;
    if !(k_zero <= head + pad) {
        return Err(Error::Config(format!(
            "left density exceeds right density: no 1-shock meets the right fan (k_zero = {k_zero}, head = {head})"
        )));
    }
    let drho_dk = |k: T| {
        let (c, _) = fan_cv(&g, cr, r.v1, Family::Three, k);
        let rho = g.rho_of_c(c);
        (rho, T::lit(2.0) * rho * a / ((g.gamma - T::one()) * c))
    };
    let h = |k: T| {
        let (_, v) = fan_cv(&g, cr, r.v1, Family::Three, k);
        let (rho, dr) = drho_dk(k);
        let (vs, dvs) = wave_curve_deriv(&g, &l, Family::One, rho.max(l.rho));
        (v - vs, b - dvs * dr)
    };
    let (hlo, _) = h(lo);
    let (hhi, _) = h(hi);
    let k = if hlo.abs() <= T::tol(1e-13) * (T::one() + l.v1.abs() + cl) {
        k_zero
    } else if (hlo > T::zero()) == (hhi > T::zero()) {
        return Err(Error::Config(format!(
            "no S-R root in fan interval [{lo}, {hi}]: h(lo) = {hlo}, h(hi) = {hhi}"
        )));
    } else {
        newton_bisect(h, lo, hi, None, RootOptions::default())?.x.max(k_zero).min(head)
    };
    let middle = fan_state(&g, &r, Family::Three, k);
    let shock_speed = shock_speed_1(&g, &l, &middle);
    Ok(SRBackground { g, left: l, right: r, shock_speed, middle: PrimState { v2: l.v2, ..middle }, fan_inner_slope: k, fan_outer_slope: head })
}

/// j-form 1-shock speed; tends to λ₁(U_l) at zero strength.
pub fn shock_speed_1<T: Real>(g: &GasParams<T>, l: &PrimState<T>, m: &PrimState<T>) -> T {
    let d = m.rho - l.rho;
    let j = if d.abs() <= T::lit(1e-12) * l.rho {
        l.rho * l.c(g)
    } else {
        (l.rho * m.rho * (g.pressure(m.rho) - g.pressure(l.rho)) / d).sqrt()
    };
    l.v1 - j / l.rho
}

impl<T: Real> SRBackground<T> {
    pub fn sample(&self, xi: T) -> PrimState<T> {
        if xi < self.shock_speed {
            self.left
        } else if xi < self.fan_inner_slope {
            self.middle
        } else if xi < self.fan_outer_slope {
            fan_state(&self.g, &self.right, Family::Three, xi)
        } else {
            self.right
        }
    }
}

/// R-V-R construction from the linear invariant equations.
pub fn build_rvr<T: Real>(data: &RiemannData<T>) -> Result<RVRBackground<T>> {
    let g = data.g;
    let (l, r) = (data.left, data.right);
    let il = invariants_of(&g, &l)?;
    let ir = invariants_of(&g, &r)?;
    let sum = ir.w + il.wbar;
    if !(sum > T::zero()) {
        return Err(Error::Vacuum(format!("w_r + wbar_l = {sum} <= 0")));
    }
    let gm1 = g.gamma - T::one();
    let gp1 = g.gamma + T::one();
    let two = T::lit(2.0);
    let (cl, cr) = (l.c(&g), r.c(&g));
    // Right fan: wbar_R(ξ) = 2ξ/(γ+1) + wbar_R(0).
    let (c0, v0) = fan_cv(&g, cr, r.v1, Family::Three, T::zero());
    let beta_r = c0 / gm1 + v0 / two;
    let k_r = (il.wbar - beta_r) * gp1 / two;
    // Left fan: w_L(ξ) = −2ξ/(γ+1) + w_L(0).
    let (c0, v0) = fan_cv(&g, cl, l.v1, Family::One, T::zero());
    let beta_l = c0 / gm1 - v0 / two;
    let k_l = (beta_l - ir.w) * gp1 / two;
    let head_l = l.v1 - cl;
    let head_r = r.v1 + cr;
    let slack = T::tol(1e-12) * (T::one() + head_l.abs() + head_r.abs());
    if k_l < head_l - slack || k_r > head_r + slack {
        return Err(Error::Config(format!(
            "not an R-V-R configuration: k_l = {k_l} < {head_l} or k_r = {k_r} > {head_r}"
        )));
    }
    let mid_left = fan_state(&g, &l, Family::One, k_l);
    let mid_right = fan_state(&g, &r, Family::Three, k_r);
    let vortex_speed = il.wbar - ir.w;
    let c_mismatch = (mid_left.c(&g) - mid_right.c(&g)).abs();
    let v_mismatch = (mid_left.v1 - vortex_speed).abs().max((mid_right.v1 - vortex_speed).abs());
    Ok(RVRBackground {
        g,
        left: l,
        right: r,
        left_fan: (head_l, k_l),
        right_fan: (k_r, head_r),
        mid_left,
        mid_right,
        vortex_speed,
        c_mismatch,
        v_mismatch,
    })
}

impl<T: Real> RVRBackground<T> {
    pub fn sample(&self, xi: T) -> PrimState<T> {
        let (hl, kl) = self.left_fan;
        let (kr, hr) = self.right_fan;
        if xi <= hl {
            self.left
        } else if xi < kl {
            fan_state(&self.g, &self.left, Family::One, xi)
        } else if xi < self.vortex_speed {
            self.mid_left
        } else if xi <= kr {
            self.mid_right
        } else if xi < hr {
            fan_state(&self.g, &self.right, Family::Three, xi)
        } else {
            self.right
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Supersonic<T> {
    pub holds: bool,
    pub margin: T,
}

/// Margin |Δv²| − 2√2·((γ−1)/2)(w_r + w̄_l); the condition is strict.
pub fn supersonic_margin<T: Real>(gamma: T, dv2_abs: T, w_sum: T) -> Supersonic<T> {
    let margin = dv2_abs - T::lit(2.0) * T::SQRT_2() * (gamma - T::one()) / T::lit(2.0) * w_sum;
    Supersonic { holds: margin > T::zero(), margin }
}

pub fn supersonic_predicate<T: Real>(g: &GasParams<T>, ul: &PrimState<T>, ur: &PrimState<T>) -> Result<Supersonic<T>> {
    let il = invariants_of(g, ul)?;
    let ir = invariants_of(g, ur)?;
    Ok(supersonic_margin(g.gamma, (ul.v2 - ur.v2).abs(), ir.w + il.wbar))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct H0Curve<T> {
    pub theta: Vec<T>,
    /// u(ϑ) = (γ+1)/2 (w̄_r − w̄_l)
    pub u: Vec<T>,
    /// Mirrored curve (γ+1)/2 (w_l − w_r).
    pub u_bar: Vec<T>,
}

pub fn h0_from_invariants<T: Real>(
    gamma: T,
    theta: &[T],
    wbar_l: &[T],
    wbar_r: &[T],
    w_l: &[T],
    w_r: &[T],
) -> Result<H0Curve<T>> {
    let n = theta.len();
    if [wbar_l.len(), wbar_r.len(), w_l.len(), w_r.len()].iter().any(|&m| m != n) {
        return Err(Error::Data("traces must share the theta grid".into()));
    }
    let f = (gamma + T::one()) / T::lit(2.0);
    let u: Vec<T> = (0..n).map(|k| f * (wbar_r[k] - wbar_l[k])).collect();
    if let Some(k) = u.iter().position(|&x| !(x > T::zero())) {
        return Err(Error::Config(format!("not an R-R configuration: u({}) = {}", theta[k], u[k])));
    }
    let u_bar = (0..n).map(|k| f * (w_l[k] - w_r[k])).collect();
    Ok(H0Curve { theta: theta.to_vec(), u, u_bar })
}

/// H₀ from left and right boundary traces at x₁ = 0.
pub fn h0_curve<T: Real>(g: &GasParams<T>, theta: &[T], left: &[PrimState<T>], right: &[PrimState<T>]) -> Result<H0Curve<T>> {
    if left.len() != theta.len() || right.len() != theta.len() {
        return Err(Error::Data("traces must share the theta grid".into()));
    }
    let il: Vec<_> = left.iter().map(|s| invariants_of(g, s)).collect::<Result<_>>()?;
    let ir: Vec<_> = right.iter().map(|s| invariants_of(g, s)).collect::<Result<_>>()?;
    h0_from_invariants(
        g.gamma,
        theta,
        &il.iter().map(|i| i.wbar).collect::<Vec<_>>(),
        &ir.iter().map(|i| i.wbar).collect::<Vec<_>>(),
        &il.iter().map(|i| i.w).collect::<Vec<_>>(),
        &ir.iter().map(|i| i.w).collect::<Vec<_>>(),
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CompatReport<T> {
    pub residual: T,
    pub tolerance: T,
    pub pass: bool,
}

pub const COMPAT_EXACT_TOL: f64 = 1e-12;

/// max |v²_l − v²_r| along the interface.
pub fn compat_order0<T: Real>(v2_left: &[T], v2_right: &[T], tolerance: T) -> CompatReport<T> {
    let residual = v2_left.iter().zip(v2_right).fold(T::zero(), |m, (&a, &b)| m.max((a - b).abs()));
    CompatReport { residual, tolerance, pass: residual <= tolerance }
}

/// Order-1 skeleton max |(1/ρ_l)∂₁v²_l − (1/ρ_r)∂₁v²_r| with the lower-order correction set to 0.
///
/// Columns are ordered outward from the interface: `left[0]` and `right[0]` are
/// adjacent to x₁ = 0. One-sided second-order differences with spacing `dx1`.
pub fn compat_order1<T: Real>(
    rho_left: &[T],
    v2_left: [&[T]; 3],
    rho_right: &[T],
    v2_right: [&[T]; 3],
    dx1: T,
    tolerance: T,
) -> CompatReport<T> {
    let (three, four, two) = (T::lit(3.0), T::lit(4.0), T::lit(2.0));
    let n = rho_left.len();
    let mut residual = T::zero();
    for k in 0..n {
        let dl = (three * v2_left[0][k] - four * v2_left[1][k] + v2_left[2][k]) / (two * dx1);
        let dr = (-three * v2_right[0][k] + four * v2_right[1][k] - v2_right[2][k]) / (two * dx1);
        residual = residual.max((dl / rho_left[k] - dr / rho_right[k]).abs());
    }
    CompatReport { residual, tolerance, pass: residual <= tolerance }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::riemann::{classify_and_solve, rh_residual, Pattern};
    use crate::state::eigenvalues;
    use proptest::prelude::*;

    fn g3() -> GasParams<f64> {
        GasParams::<f64>::new(3.0, 1.0 / 3.0).unwrap()
    }

    #[test]
    fn rvr_example() {
        let g = g3();
        let l = PrimState::from_c(&g, 1.0, -0.5, 0.3);
        let r = PrimState::from_c(&g, 1.0, 0.5, -0.2);
        let bg = build_rvr(&RiemannData::new(g, l, r)).unwrap();
        assert!((bg.right_fan.0 - 0.5).abs() < 1e-14);
        assert!(bg.vortex_speed.abs() < 1e-14);
        assert!((bg.mid_left.c(&g) - 0.5).abs() < 1e-14 && (bg.mid_right.c(&g) - 0.5).abs() < 1e-14);
        assert!(bg.c_mismatch < 1e-12 && bg.v_mismatch < 1e-12);
        assert!((bg.left_fan.1 + bg.right_fan.0).abs() < 1e-14);
    }

    #[test]
    fn rvr_vacuum_rejected() {
        let g = g3();
        let l = PrimState::from_c(&g, 1.0, -3.0, 0.0);
        let r = PrimState::from_c(&g, 1.0, 3.0, 0.0);
        assert!(matches!(build_rvr(&RiemannData::new(g, l, r)), Err(Error::Vacuum(_))));
    }

    #[test]
    fn sr_zero_strength_limit() {
        let g = GasParams::<f64>::new(1.4, 1.0).unwrap();
        let r = PrimState::new(1.0, 0.0, 0.0);
        let l = fan_state(&g, &r, Family::Three, 0.3);
        let bg = build_sr(&RiemannData::new(g, l, r)).unwrap();
        assert!((bg.shock_speed - eigenvalues(&g, &l).l1).abs() < 1e-10);
        assert!((bg.middle.rho - l.rho).abs() < 1e-10 && (bg.middle.v1 - l.v1).abs() < 1e-10);
    }

    #[test]
    fn sr_matches_exact_solver() {
        let g = GasParams::<f64>::new(1.4, 1.0).unwrap();
        let l = PrimState::new(1.0, 0.5, 0.0);
        let r = PrimState::new(2.0, 0.8, 0.0);
        let fan = classify_and_solve(&RiemannData::new(g, l, r)).unwrap();
        assert_eq!(fan.pattern, Pattern::SR);
        let bg = build_sr(&RiemannData::new(g, l, r)).unwrap();
        assert!((bg.middle.rho - fan.mid_left.rho).abs() < 1e-10);
        assert!((bg.middle.v1 - fan.mid_left.v1).abs() < 1e-10);
        assert!(rh_residual(&g, &l, &bg.middle, bg.shock_speed).iter().all(|x| x.abs() < 1e-10));
        assert!(eigenvalues(&g, &l).l1 > bg.shock_speed && bg.shock_speed > eigenvalues(&g, &bg.middle).l1);
        let eps = 1e-9;
        let m = bg.sample(bg.fan_inner_slope + eps);
        assert!((m.rho - bg.middle.rho).abs() < 1e-8);
        assert_eq!(bg.sample(bg.shock_speed - eps), l);
    }

    #[test]
    fn sr_rejects_wrong_ordering() {
        let g = GasParams::<f64>::new(1.4, 1.0).unwrap();
        let r = PrimState::new(1.0, 0.0, 0.0);
        let l = PrimState::new(3.0, 0.0, 0.0);
        assert!(build_sr(&RiemannData::new(g, l, r)).is_err());
    }

    #[test]
    fn supersonic_examples() {
        let s = supersonic_margin(3.0f64, 2.0, 0.5);
        assert!(s.holds && (s.margin - (2.0 - 2f64.sqrt())).abs() < 1e-12);
        let g = g3();
        let a = PrimState::from_c(&g, 1.0, 0.0, 0.0);
        assert!(!supersonic_predicate(&g, &a, &a).unwrap().holds);
        let eq = supersonic_margin(3.0f64, 2f64.sqrt(), 0.5);
        assert!(!eq.holds);
    }

    #[test]
    fn h0_examples() {
        let th = [0.0, 1.0, 2.0];
        let c = h0_from_invariants(3.0f64, &th, &[0.1; 3], &[0.5; 3], &[0.0; 3], &[0.0; 3]).unwrap();
        assert!(c.u.iter().all(|&u| (u - 0.8).abs() < 1e-14));
        assert!(h0_from_invariants(3.0f64, &th, &[0.5; 3], &[0.5; 3], &[0.0; 3], &[0.0; 3]).is_err());
    }

    #[test]
    fn h0_perturbation_is_lipschitz() {
        let n = 32;
        let th: Vec<f64> = (0..n).map(|k| k as f64 * std::f64::consts::TAU / n as f64).collect();
        let eps = 1e-3;
        let wl: Vec<f64> = th.iter().map(|t| 0.1 + eps * t.sin()).collect();
        let wr: Vec<f64> = th.iter().map(|t| 0.5 + eps * (2.0 * t).cos()).collect();
        let c = h0_from_invariants(2.0, &th, &wl, &wr, &wl, &wr).unwrap();
        assert!(c.u.iter().all(|&u| (u - 0.6).abs() <= 1.5 * 2.0 * eps + 1e-15));
    }

    #[test]
    fn compat_examples() {
        let a = [0.1f64, 0.2, 0.3];
        assert!(compat_order0(&a, &a, 1e-12).pass);
        let b = [0.11, 0.2, 0.3];
        let r = compat_order0(&a, &b, 1e-12);
        assert!(!r.pass && (r.residual - 0.01).abs() < 1e-15);
    }

    #[test]
    fn compat_order1_on_linear_traces() {
        // v² = x₁·ρ·s on both sides gives (1/ρ)∂₁v² = s on both sides.
        let h = 0.01;
        let s = [0.3, -0.1];
        let rl = [1.0, 2.0];
        let rr = [0.5, 1.5];
        let col = |rho: &[f64; 2], x: f64| [rho[0] * s[0] * x, rho[1] * s[1] * x];
        let (l0, l1, l2) = (col(&rl, -0.5 * h), col(&rl, -1.5 * h), col(&rl, -2.5 * h));
        let (r0, r1, r2) = (col(&rr, 0.5 * h), col(&rr, 1.5 * h), col(&rr, 2.5 * h));
        let rep = compat_order1(&rl, [&l0, &l1, &l2], &rr, [&r0, &r1, &r2], h, 1e-10);
        assert!(rep.pass, "{}", rep.residual);
    }

    proptest! {
        #[test]
        fn sr_agrees_with_solver(gamma in 1.1f64..3.0, rl in 0.2f64..2.0, ratio in 1.05f64..4.0, vl in -1.0f64..1.0, t in 0.05f64..0.95) {
            // Pick U_l, then U_r on the far side of a 1-shock + 3-fan chain.
            let g = GasParams::<f64>::new(gamma, 1.0).unwrap();
            let l = PrimState::new(rl, vl, 0.0);
            let rho_m = rl * ratio;
            let v_m = wave_curve_deriv(&g, &l, Family::One, rho_m).0;
            let m = PrimState::new(rho_m, v_m, 0.0);
            let cm = m.c(&g);
            let cr = cm * (1.0 + 2.0 * t);
            let vr = v_m + 2.0 * (cr - cm) / (gamma - 1.0);
            let r = PrimState::from_c(&g, cr, vr, 0.0);
            let data = RiemannData::new(g, l, r);
            let fan = classify_and_solve(&data).unwrap();
            prop_assert_eq!(fan.pattern, Pattern::SR);
            let bg = build_sr(&data).unwrap();
            prop_assert!((bg.middle.rho - fan.mid_left.rho).abs() <= 1e-10 * rho_m);
            prop_assert!((bg.middle.v1 - fan.mid_left.v1).abs() <= 1e-10 * (1.0 + v_m.abs()));
            prop_assert!(eigenvalues(&g, &l).l1 > bg.shock_speed);
            prop_assert!(bg.fan_inner_slope <= bg.fan_outer_slope);
        }

        #[test]
        fn rvr_agrees_with_solver(gamma in 1.1f64..3.0, cl in 0.5f64..2.0, cr in 0.5f64..2.0, vl in -1.5f64..0.0, vr in 0.0f64..1.5, v2l in -1.0f64..1.0, v2r in -1.0f64..1.0) {
            let g = GasParams::<f64>::new(gamma, 1.0).unwrap();
            let l = PrimState::from_c(&g, cl, vl - 0.2, v2l);
            let r = PrimState::from_c(&g, cr, vr + 0.2, v2r);
            let data = RiemannData::new(g, l, r);
            let fan = classify_and_solve(&data).unwrap();
            if let Ok(bg) = build_rvr(&data) {
                if fan.vacuum_interval.is_none() && matches!(fan.pattern, Pattern::RVR | Pattern::RR) {
                    prop_assert!((bg.mid_left.rho - fan.mid_left.rho).abs() <= 1e-10 * fan.mid_left.rho);
                    prop_assert!((bg.vortex_speed - fan.mid_left.v1).abs() <= 1e-10);
                    prop_assert!(bg.c_mismatch <= 1e-12 * (1.0 + cl + cr));
                    let il = invariants_of(&g, &l).unwrap();
                    let ir = invariants_of(&g, &r).unwrap();
                    let (kr, hr) = bg.right_fan;
                    for k in 0..=10 {
                        let xi = kr + (hr - kr) * k as f64 / 10.0;
                        let w = invariants_of(&g, &bg.sample(xi.min(hr - 1e-15))).unwrap().w;
                        prop_assert!((w - ir.w).abs() <= 1e-12 * (1.0 + ir.w.abs()));
                    }
                    let (hl, kl) = bg.left_fan;
                    for k in 0..=10 {
                        let xi = hl + (kl - hl) * k as f64 / 10.0;
                        let wb = invariants_of(&g, &bg.sample(xi.max(hl + 1e-15))).unwrap().wbar;
                        prop_assert!((wb - il.wbar).abs() <= 1e-12 * (1.0 + il.wbar.abs()));
                    }
                }
            }
        }

        #[test]
        fn h0_positivity_iff_wbar_ordering(a in -1.0f64..1.0, b in -1.0f64..1.0) {
            let ok = h0_from_invariants(2.0f64, &[0.0], &[a], &[b], &[0.0], &[0.0]).is_ok();
            prop_assert_eq!(ok, b > a);
        }
    }
}
