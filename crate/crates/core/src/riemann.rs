//! Exact Riemann solver for the slab-symmetric isentropic system.
//!
//! Wave curves are parametrised by the density behind the wave. The middle
//! density is the unique root of the decreasing function
//! `f(ρ) = v₁(ρ; U_l) − v₃(ρ; U_r)`, with `f(0) = 2(w̄_l + w_r)`.

use crate::error::{Error, Result};
use crate::roots::{newton_bisect_known, RootOptions};
use crate::scalar::Real;
use crate::state::{analytic_flux, is_vacuum, Direction, GasParams, PrimState, RiemannInvariants};
use serde::{Deserialize, Serialize};

/// Strength below which a wave is reported as absent.
pub const ZERO_STRENGTH: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Family {
    One,
    Three,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Pattern {
    Constant,
    S1,
    R1,
    S3,
    R3,
    V,
    SS,
    SR,
    RS,
    RR,
    SV,
    RV,
    VS,
    VR,
    SVS,
    SVR,
    RVS,
    RVR,
    RVacR,
}

impl Pattern {
    pub fn name(&self) -> &'static str {
        match self {
            Pattern::Constant => "CONSTANT",
            Pattern::S1 => "S",
            Pattern::R1 => "R",
            Pattern::S3 => "S3",
            Pattern::R3 => "R3",
            Pattern::V => "V",
            Pattern::SS => "SS",
            Pattern::SR => "SR",
            Pattern::RS => "RS",
            Pattern::RR => "RR",
            Pattern::SV => "SV",
            Pattern::RV => "RV",
            Pattern::VS => "VS",
            Pattern::VR => "VR",
            Pattern::SVS => "SVS",
            Pattern::SVR => "SVR",
            Pattern::RVS => "RVS",
            Pattern::RVR => "RVR",
            Pattern::RVacR => "R_VAC_R",
        }
    }

    fn compose(left: Option<WaveKind>, contact: bool, right: Option<WaveKind>) -> Self {
        use WaveKind::*;
        match (left, contact, right) {
            (None, false, None) => Pattern::Constant,
            (Some(Shock), false, None) => Pattern::S1,
            (Some(Rarefaction), false, None) => Pattern::R1,
            (None, false, Some(Shock)) => Pattern::S3,
            (None, false, Some(Rarefaction)) => Pattern::R3,
            (None, true, None) => Pattern::V,
            (Some(Shock), false, Some(Shock)) => Pattern::SS,
            (Some(Shock), false, Some(Rarefaction)) => Pattern::SR,
            (Some(Rarefaction), false, Some(Shock)) => Pattern::RS,
            (Some(Rarefaction), false, Some(Rarefaction)) => Pattern::RR,
            (Some(Shock), true, None) => Pattern::SV,
            (Some(Rarefaction), true, None) => Pattern::RV,
            (None, true, Some(Shock)) => Pattern::VS,
            (None, true, Some(Rarefaction)) => Pattern::VR,
            (Some(Shock), true, Some(Shock)) => Pattern::SVS,
            (Some(Shock), true, Some(Rarefaction)) => Pattern::SVR,
            (Some(Rarefaction), true, Some(Shock)) => Pattern::RVS,
            (Some(Rarefaction), true, Some(Rarefaction)) => Pattern::RVR,
        }
    }
}

impl std::fmt::Display for Pattern {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum WaveKind {
    Shock,
    Rarefaction,
}

/// A genuinely nonlinear wave. For a shock `head == tail == σ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Wave<T> {
    pub family: Family,
    pub kind: WaveKind,
    /// Slope of the edge adjacent to the outer constant state.
    pub head: T,
    /// Slope of the edge adjacent to the middle state.
    pub tail: T,
}

impl<T: Real> Wave<T> {
    /// Leftmost and rightmost slopes.
    pub fn span(&self) -> (T, T) {
        (self.head.min(self.tail), self.head.max(self.tail))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RiemannData<T> {
    pub left: PrimState<T>,
    pub right: PrimState<T>,
    pub g: GasParams<T>,
}

impl<T: Real> RiemannData<T> {
    pub fn new(g: GasParams<T>, left: PrimState<T>, right: PrimState<T>) -> Self {
        Self { left, right, g }
    }

    /// Data with the roles of x₁ and x₂ exchanged.
    pub fn swapped(&self) -> Self {
        Self { left: self.left.swapped(), right: self.right.swapped(), g: self.g }
    }
}

/// Classified self-similar solution.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WaveFan<T> {
    pub g: GasParams<T>,
    pub left: PrimState<T>,
    pub right: PrimState<T>,
    pub pattern: Pattern,
    /// Middle state on the left of the vortex sheet (carries v²_l).
    pub mid_left: PrimState<T>,
    /// Middle state on the right of the vortex sheet (carries v²_r).
    pub mid_right: PrimState<T>,
    pub left_wave: Option<Wave<T>>,
    pub right_wave: Option<Wave<T>>,
    /// Vortex-sheet speed, present when v² jumps.
    pub contact: Option<T>,
    pub vacuum_interval: Option<(T, T)>,
    pub iterations: usize,
}

/// Anchor quantities reused across wave-curve evaluations.
#[derive(Debug, Clone, Copy)]
struct Anchor<T> {
    rho: T,
    v1: T,
    c: T,
    p: T,
}

impl<T: Real> Anchor<T> {
    #[inline]
    fn new(g: &GasParams<T>, s: &PrimState<T>) -> Self {
        let c = g.c_of_rho(s.rho);
        Self { rho: s.rho, v1: s.v1, c, p: s.rho * c * c / g.gamma }
    }
}

/// Curve value and slope given ρ and its sound speed c(ρ).
#[inline]
fn curve_eval<T: Real>(g: &GasParams<T>, a: &Anchor<T>, family: Family, rho: T, c: T) -> (T, T) {
    let sign = match family {
        Family::One => -T::one(),
        Family::Three => T::one(),
    };
    if rho > a.rho {
        let p = rho * c * c / g.gamma;
        let num = (rho - a.rho) * (p - a.p);
        let den = rho * a.rho;
        let phi = (num / den).max(T::zero());
        let root = phi.sqrt();
        let dphi = ((p - a.p) + (rho - a.rho) * c * c) / den - num / (rho * rho * a.rho);
        let d = if root > T::epsilon() * (c.max(T::min_positive_value())) {
            dphi / (T::lit(2.0) * root)
        } else {
            c / rho
        };
        (a.v1 + sign * root, sign * d)
    } else {
        let v = a.v1 + sign * T::lit(2.0) * (c - a.c) / (g.gamma - T::one());
        let d = if rho > T::zero() { sign * c / rho } else { T::infinity() * sign };
        (v, d)
    }
}

/// v¹ behind a single wave of `family` from `anchor`, with dv/dρ.
pub fn wave_curve_deriv<T: Real>(g: &GasParams<T>, anchor: &PrimState<T>, family: Family, rho: T) -> (T, T) {
    curve_eval(g, &Anchor::new(g, anchor), family, rho, g.c_of_rho(rho))
}

/// v¹ reachable from `anchor` through one wave of `family` with density `rho_probe` behind it.
pub fn wave_curve<T: Real>(g: &GasParams<T>, anchor: &PrimState<T>, family: Family, rho_probe: T) -> Result<T> {
    if !(rho_probe > T::zero()) {
        return Err(Error::Domain(format!("probe density {rho_probe} must be positive")));
    }
    Ok(wave_curve_deriv(g, anchor, family, rho_probe).0)
}

/// Middle-state equation f(ρ) = v₁(ρ; U_l) − v₃(ρ; U_r) and f'(ρ).
#[inline]
pub fn middle_function<T: Real>(g: &GasParams<T>, l: &PrimState<T>, r: &PrimState<T>, rho: T) -> (T, T) {
    let (a, da) = wave_curve_deriv(g, l, Family::One, rho);
    let (b, db) = wave_curve_deriv(g, r, Family::Three, rho);
    (a - b, da - db)
}

/// Fixed bracket `[1e−10 min ρ, 1e4 max ρ]`, widened to 0 when f already changes sign there.
pub fn middle_bracket<T: Real>(g: &GasParams<T>, l: &PrimState<T>, r: &PrimState<T>) -> (T, T) {
    let mut lo = T::lit(1e-10) * l.rho.min(r.rho);
    let hi = T::lit(1e4) * l.rho.max(r.rho);
    if middle_function(g, l, r, lo).0 <= T::zero() {
        lo = T::zero();
    }
    (lo, hi)
}

/// Two-rarefaction estimate ρ from c_m = (γ−1)(w̄_l+w_r)/2.
fn rr_guess<T: Real>(g: &GasParams<T>, wbar_l: T, w_r: T) -> T {
    g.rho_of_c((g.gamma - T::one()) * (wbar_l + w_r) / T::lit(2.0))
}

fn fan_state<T: Real>(g: &GasParams<T>, outer: &PrimState<T>, family: Family, xi: T) -> PrimState<T> {
    let gp1 = g.gamma + T::one();
    let a = (g.gamma - T::one()) / gp1;
    let b = T::lit(2.0) / gp1;
    let co = outer.c(g);
    let (c, v) = match family {
        Family::One => (-a * xi + a * outer.v1 + b * co, b * xi + a * outer.v1 + b * co),
        Family::Three => (a * xi - a * outer.v1 + b * co, b * xi + a * outer.v1 - b * co),
    };
    PrimState::from_c(g, c.max(T::zero()), v, outer.v2)
}

/// Sound speed and velocity inside a centred fan (c, v¹), without EOS inversion.
pub fn fan_cv<T: Real>(g: &GasParams<T>, outer_c: T, outer_v1: T, family: Family, xi: T) -> (T, T) {
    let gp1 = g.gamma + T::one();
    let a = (g.gamma - T::one()) / gp1;
    let b = T::lit(2.0) / gp1;
    match family {
        Family::One => (-a * xi + a * outer_v1 + b * outer_c, b * xi + a * outer_v1 + b * outer_c),
        Family::Three => (a * xi - a * outer_v1 + b * outer_c, b * xi + a * outer_v1 - b * outer_c),
    }
}

fn nonlinear_wave<T: Real>(
    g: &GasParams<T>,
    outer: &PrimState<T>,
    mid: &PrimState<T>,
    family: Family,
    co: T,
    cm: T,
) -> Option<Wave<T>> {
    let rel = (mid.rho - outer.rho).abs() / outer.rho.max(mid.rho);
    if !(rel >= T::lit(ZERO_STRENGTH)) {
        return None;
    }
    if mid.rho > outer.rho {
        let (pm, po) = (mid.rho * cm * cm / g.gamma, outer.rho * co * co / g.gamma);
        let j = (outer.rho * mid.rho * (pm - po) / (mid.rho - outer.rho)).sqrt();
        let s = match family {
            Family::One => outer.v1 - j / outer.rho,
            Family::Three => outer.v1 + j / outer.rho,
        };
        Some(Wave { family, kind: WaveKind::Shock, head: s, tail: s })
    } else {
        let (head, tail) = match family {
            Family::One => (outer.v1 - co, mid.v1 - cm),
            Family::Three => (outer.v1 + co, mid.v1 + cm),
        };
        Some(Wave { family, kind: WaveKind::Rarefaction, head, tail })
    }
}

/// Classifies the Riemann problem and computes its middle state(s).
pub fn classify_and_solve<T: Real>(data: &RiemannData<T>) -> Result<WaveFan<T>> {
    classify_and_solve_with(data, RootOptions::default())
}

pub fn classify_and_solve_with<T: Real>(data: &RiemannData<T>, opts: RootOptions) -> Result<WaveFan<T>> {
    let g = data.g;
    let (l, r) = (data.left, data.right);
    if !l.is_admissible() || !r.is_admissible() {
        return Err(Error::Domain("inadmissible Riemann data".into()));
    }
    let rho_ref = l.rho.max(r.rho);
    let (al, ar) = (Anchor::new(&g, &l), Anchor::new(&g, &r));
    let shear_scale = al.c.max(ar.c).max(l.v2.abs()).max(r.v2.abs()).max(T::min_positive_value());
    let has_contact = (l.v2 - r.v2).abs() >= T::lit(ZERO_STRENGTH) * shear_scale;
    let lvac = rho_ref <= T::zero() || is_vacuum(l.rho, rho_ref);
    let rvac = rho_ref <= T::zero() || is_vacuum(r.rho, rho_ref);
    let base = WaveFan {
        g,
        left: l,
        right: r,
        pattern: Pattern::Constant,
        mid_left: l,
        mid_right: r,
        left_wave: None,
        right_wave: None,
        contact: None,
        vacuum_interval: None,
        iterations: 0,
    };
    if lvac && rvac {
        return Ok(base);
    }
    let gm1 = g.gamma - T::one();
    let half = T::lit(0.5);
    let inv_l = RiemannInvariants { wbar: al.c / gm1 + half * l.v1, w: al.c / gm1 - half * l.v1 };
    let inv_r = RiemannInvariants { wbar: ar.c / gm1 + half * r.v1, w: ar.c / gm1 - half * r.v1 };
    if lvac || rvac || inv_l.wbar + inv_r.w <= T::zero() {
        let vac = PrimState::new(T::zero(), T::zero(), T::zero());
        let mut fan = WaveFan { mid_left: vac, mid_right: vac, pattern: Pattern::RVacR, ..base };
        let lo = if lvac { T::neg_infinity() } else { T::lit(2.0) * inv_l.wbar };
        let hi = if rvac { T::infinity() } else { -T::lit(2.0) * inv_r.w };
        if !lvac {
            fan.left_wave = Some(Wave { family: Family::One, kind: WaveKind::Rarefaction, head: l.v1 - al.c, tail: lo });
        }
        if !rvac {
            fan.right_wave = Some(Wave { family: Family::Three, kind: WaveKind::Rarefaction, head: r.v1 + ar.c, tail: hi });
        }
        if lvac {
            fan.pattern = Pattern::R3;
        } else if rvac {
            fan.pattern = Pattern::R1;
        }
        fan.vacuum_interval = Some((lo, hi));
        return Ok(fan);
    }
    let mf = |rho: T| {
        let c = g.c_of_rho(rho);
        let (a, da) = curve_eval(&g, &al, Family::One, rho, c);
        let (b, db) = curve_eval(&g, &ar, Family::Three, rho, c);
        (a - b, da - db)
    };
    let mut lo = T::lit(1e-10) * l.rho.min(r.rho);
    let mut flo = mf(lo).0;
    if flo <= T::zero() {
        lo = T::zero();
        flo = T::lit(2.0) * (inv_l.wbar + inv_r.w);
    }
    let hi = T::lit(1e4) * l.rho.max(r.rho);
    let fhi = mf(hi).0;
    let guess = rr_guess(&g, inv_l.wbar, inv_r.w);
    let root = newton_bisect_known(mf, (lo, flo), (hi, fhi), Some(guess), opts)?;
    let rho_m = root.x;
    let cm = g.c_of_rho(rho_m);
    let va = curve_eval(&g, &al, Family::One, rho_m, cm).0;
    let vb = curve_eval(&g, &ar, Family::Three, rho_m, cm).0;
    let v_m = T::lit(0.5) * (va + vb);
    let mid_left = PrimState::new(rho_m, v_m, l.v2);
    let mid_right = PrimState::new(rho_m, v_m, r.v2);
    let left_wave = nonlinear_wave(&g, &l, &mid_left, Family::One, al.c, cm);
    let right_wave = nonlinear_wave(&g, &r, &mid_right, Family::Three, ar.c, cm);
    let pattern = Pattern::compose(left_wave.map(|w| w.kind), has_contact, right_wave.map(|w| w.kind));
    Ok(WaveFan {
        pattern,
        mid_left,
        mid_right,
        left_wave,
        right_wave,
        contact: if has_contact { Some(v_m) } else { None },
        iterations: root.iterations,
        ..base
    })
}

impl<T: Real> WaveFan<T> {
    /// Middle states: none for a constant solution or vacuum, two across a vortex sheet.
    pub fn middles(&self) -> Vec<PrimState<T>> {
        if self.pattern == Pattern::Constant || self.vacuum_interval.is_some() {
            Vec::new()
        } else if self.contact.is_some() {
            vec![self.mid_left, self.mid_right]
        } else {
            vec![self.mid_left]
        }
    }

    /// Shock speeds, then the vortex-sheet speed, left to right.
    pub fn speeds(&self) -> Vec<T> {
        let mut out = Vec::new();
        if let Some(w) = self.left_wave.filter(|w| w.kind == WaveKind::Shock) {
            out.push(w.head);
        }
        if let Some(s) = self.contact {
            out.push(s);
        }
        if let Some(w) = self.right_wave.filter(|w| w.kind == WaveKind::Shock) {
            out.push(w.head);
        }
        out
    }

    /// (head, tail) slopes of each rarefaction fan.
    pub fn fan_bounds(&self) -> Vec<(T, T)> {
        [self.left_wave, self.right_wave]
            .into_iter()
            .flatten()
            .filter(|w| w.kind == WaveKind::Rarefaction)
            .map(|w| (w.head, w.tail))
            .collect()
    }

    /// Every wave edge, left to right.
    pub fn edges(&self) -> Vec<T> {
        let mut out = Vec::new();
        if let Some(w) = self.left_wave {
            out.push(w.head);
            if w.kind == WaveKind::Rarefaction {
                out.push(w.tail);
            }
        }
        if let Some(s) = self.contact {
            out.push(s);
        }
        if let Some(w) = self.right_wave {
            if w.kind == WaveKind::Rarefaction {
                out.push(w.tail);
            }
            out.push(w.head);
        }
        out
    }

    pub fn is_vacuum_at(&self, xi: T) -> bool {
        matches!(self.vacuum_interval, Some((lo, hi)) if xi > lo && xi < hi)
    }

    /// Self-similar state at ξ = x₁/t.
    pub fn sample(&self, xi: T) -> PrimState<T> {
        let g = &self.g;
        if let Some((lo, hi)) = self.vacuum_interval {
            if xi > lo && xi < hi {
                return PrimState::new(T::zero(), xi, T::zero());
            }
            if xi <= lo {
                return match self.left_wave {
                    Some(w) if xi > w.head => fan_state(g, &self.left, Family::One, xi),
                    _ => self.left,
                };
            }
            return match self.right_wave {
                Some(w) if xi < w.head => fan_state(g, &self.right, Family::Three, xi),
                _ => self.right,
            };
        }
        let split = self.contact.unwrap_or(self.mid_left.v1);
        if xi < split {
            match self.left_wave {
                None => self.left,
                Some(w) => match w.kind {
                    WaveKind::Shock => {
                        if xi < w.head {
                            self.left
                        } else {
                            self.mid_left
                        }
                    }
                    WaveKind::Rarefaction => {
                        if xi <= w.head {
                            self.left
                        } else if xi < w.tail {
                            fan_state(g, &self.left, Family::One, xi)
                        } else {
                            self.mid_left
                        }
                    }
                },
            }
        } else {
            match self.right_wave {
                None => self.right,
                Some(w) => match w.kind {
                    WaveKind::Shock => {
                        if xi > w.head {
                            self.right
                        } else {
                            self.mid_right
                        }
                    }
                    WaveKind::Rarefaction => {
                        if xi >= w.head {
                            self.right
                        } else if xi > w.tail {
                            fan_state(g, &self.right, Family::Three, xi)
                        } else {
                            self.mid_right
                        }
                    }
                },
            }
        }
    }
}

/// σ(U_R − U_L) − (F(U_R) − F(U_L)).
pub fn rh_residual<T: Real>(g: &GasParams<T>, sl: &PrimState<T>, sr: &PrimState<T>, sigma: T) -> [T; 3] {
    let ul = sl.to_cons().as_array();
    let ur = sr.to_cons().as_array();
    let fl = analytic_flux(g, sl, Direction::X1);
    let fr = analytic_flux(g, sr, Direction::X1);
    [0, 1, 2].map(|k| sigma * (ur[k] - ul[k]) - (fr[k] - fl[k]))
}

/// Mass-jump speed (ρ_r v_r − ρ_l v_l)/(ρ_r − ρ_l).
pub fn mass_jump_speed<T: Real>(sl: &PrimState<T>, sr: &PrimState<T>) -> T {
    (sr.rho * sr.v1 - sl.rho * sl.v1) / (sr.rho - sl.rho)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::state::{eigenvalues, invariants_of};
    use proptest::prelude::*;

    fn g3() -> GasParams<f64> {
        GasParams::<f64>::new(3.0, 1.0 / 3.0).unwrap()
    }

    fn bisection_oracle(g: &GasParams<f64>, l: &PrimState<f64>, r: &PrimState<f64>) -> f64 {
        let f = |rho: f64| wave_curve(g, l, Family::One, rho).unwrap() - wave_curve(g, r, Family::Three, rho).unwrap();
        let (mut lo, mut hi) = (1e-300, 1e4 * l.rho.max(r.rho));
        for _ in 0..2000 {
            let mid = 0.5 * (lo + hi);
            if f(mid) > 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
            if hi - lo <= 1e-15 * hi {
                break;
            }
        }
        0.5 * (lo + hi)
    }

    #[test]
    fn zero_strength_wave() {
        let g = GasParams::<f64>::new(1.4, 1.0).unwrap();
        let a = PrimState::new(1.3, 0.2, 0.0);
        assert_eq!(wave_curve(&g, &a, Family::One, 1.3).unwrap(), 0.2);
        assert_eq!(wave_curve(&g, &a, Family::Three, 1.3).unwrap(), 0.2);
        assert!(wave_curve(&g, &a, Family::One, 0.0).is_err());
    }

    #[test]
    fn shock_curve_example() {
        let g = GasParams::<f64>::new(2.0, 0.5).unwrap();
        let v = wave_curve(&g, &PrimState::new(1.0, 0.0, 0.0), Family::One, 2.0).unwrap();
        assert!((v + 0.75f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn constant_data() {
        let s = PrimState::new(1.0, 0.3, 0.1);
        let fan = classify_and_solve(&RiemannData::new(g3(), s, s)).unwrap();
        assert_eq!(fan.pattern, Pattern::Constant);
        assert!(fan.middles().is_empty() && fan.speeds().is_empty() && fan.fan_bounds().is_empty());
        assert_eq!(fan.sample(0.7), s);
    }

    #[test]
    fn rr_closed_form() {
        let g = g3();
        let l = PrimState::from_c(&g, 1.0, -0.5, 0.0);
        let r = PrimState::from_c(&g, 1.0, 0.5, 0.0);
        let fan = classify_and_solve(&RiemannData::new(g, l, r)).unwrap();
        assert_eq!(fan.pattern, Pattern::RR);
        let m = fan.middles()[0];
        assert!((m.c(&g) - 0.5).abs() < 1e-12 && m.v1.abs() < 1e-12);
    }

    #[test]
    fn vacuum_example() {
        let g = g3();
        let l = PrimState::from_c(&g, 1.0, -3.0, 0.0);
        let r = PrimState::from_c(&g, 1.0, 3.0, 0.0);
        let fan = classify_and_solve(&RiemannData::new(g, l, r)).unwrap();
        assert_eq!(fan.pattern, Pattern::RVacR);
        assert!(fan.middles().is_empty());
        let (lo, hi) = fan.vacuum_interval.unwrap();
        assert!((lo + 2.0).abs() < 1e-12 && (hi - 2.0).abs() < 1e-12);
        assert_eq!(fan.sample(0.0).rho, 0.0);
        assert!(fan.is_vacuum_at(1.0));
    }

    #[test]
    fn symmetric_collision_is_two_shocks() {
        let g = GasParams::<f64>::new(1.4, 1.0).unwrap();
        let fan = classify_and_solve(&RiemannData::new(g, PrimState::new(1.0, 0.8, 0.0), PrimState::new(1.0, -0.8, 0.0))).unwrap();
        assert_eq!(fan.pattern, Pattern::SS);
        assert!(fan.mid_left.v1.abs() < 1e-12);
        let s = fan.speeds();
        assert!((s[0] + s[1]).abs() < 1e-12);
    }

    #[test]
    fn vortex_sheet_patterns_are_distinct() {
        let g = GasParams::<f64>::new(1.4, 1.0).unwrap();
        let l = PrimState::new(2.0, 0.0, 0.5);
        let r = PrimState::new(1.0, 0.0, -0.5);
        let fan = classify_and_solve(&RiemannData::new(g, l, r)).unwrap();
        assert_eq!(fan.pattern, Pattern::RVS);
        let fan = classify_and_solve(&RiemannData::new(g, r, l)).unwrap();
        assert_eq!(fan.pattern, Pattern::SVR);
        let fan = classify_and_solve(&RiemannData::new(g, PrimState::new(1.0, 1.0, 0.0), PrimState::new(1.0, -1.0, 0.7))).unwrap();
        assert_eq!(fan.pattern, Pattern::SVS);
        assert_eq!(fan.middles().len(), 2);
        let only = classify_and_solve(&RiemannData::new(g, PrimState::new(1.0, 0.1, 0.0), PrimState::new(1.0, 0.1, 1.0))).unwrap();
        assert_eq!(only.pattern, Pattern::V);
        assert_eq!(only.speeds(), vec![0.1]);
    }

    #[test]
    fn sampler_examples() {
        let g = GasParams::<f64>::new(2.0, 0.5).unwrap();
        let r = PrimState::from_c(&g, 1.0, 0.0, 0.0);
        let s = fan_state(&g, &r, Family::Three, 1.0);
        assert!((s.c(&g) - 1.0).abs() < 1e-15 && s.v1.abs() < 1e-15);
        let s = fan_state(&g, &r, Family::Three, 0.4);
        assert!((s.c(&g) - 0.8).abs() < 1e-15 && (s.v1 + 0.4).abs() < 1e-15);
    }

    #[test]
    fn rh_examples() {
        let g = GasParams::<f64>::new(2.0, 0.5).unwrap();
        let s = PrimState::new(1.0, 0.3, 0.1);
        assert_eq!(rh_residual(&g, &s, &s, 7.0), [0.0; 3]);
        let l = PrimState::new(1.0, 0.0, 0.0);
        let m = PrimState::new(2.0, wave_curve(&g, &l, Family::One, 2.0).unwrap(), 0.0);
        let sigma = mass_jump_speed(&l, &m);
        assert!(rh_residual(&g, &l, &m, sigma).iter().all(|x| x.abs() < 1e-12));
        let a = PrimState::new(1.0, 0.2, 1.0);
        let b = PrimState::new(1.0, 0.2, -1.0);
        assert_eq!(rh_residual(&g, &a, &b, 0.2), [0.0; 3]);
    }

    #[test]
    fn newton_matches_bisection_on_stiff_data() {
        let g = GasParams::<f64>::new(1.4, 1.0).unwrap();
        let cases = [
            (PrimState::new(1.0, 0.0, 0.0), PrimState::new(0.125, 0.0, 0.0)),
            (PrimState::new(1e3, 0.0, 0.0), PrimState::new(1e-2, 0.0, 0.0)),
            (PrimState::new(1.0, 20.0, 0.0), PrimState::new(1.0, -20.0, 0.0)),
            (PrimState::new(1.0, -1.9, 0.0), PrimState::new(1.0, 1.9, 0.0)),
        ];
        for (l, r) in cases {
            let fan = classify_and_solve(&RiemannData::new(g, l, r)).unwrap();
            let rho = bisection_oracle(&g, &l, &r);
            assert!((fan.mid_left.rho - rho).abs() <= 1e-10 * rho, "{l:?} {r:?}");
        }
    }

    fn arb_data() -> impl Strategy<Value = (f64, PrimState<f64>, PrimState<f64>)> {
        (1.05f64..3.0, 0.05f64..5.0, -2.0f64..2.0, -1.0f64..1.0, 0.05f64..5.0, -2.0f64..2.0, -1.0f64..1.0).prop_map(
            |(gamma, rl, ul, wl, rr, ur, wr)| (gamma, PrimState::new(rl, ul, wl), PrimState::new(rr, ur, wr)),
        )
    }

    fn check_waves(fan: &WaveFan<f64>) -> std::result::Result<(), TestCaseError> {
        let g = &fan.g;
        if let Some(w) = fan.left_wave.filter(|w| w.kind == WaveKind::Shock) {
            let res = rh_residual(g, &fan.left, &fan.mid_left, w.head);
            let scale = fan.left.rho.max(fan.mid_left.rho) * (1.0 + w.head.abs() + fan.left.c(g));
            prop_assert!(res.iter().all(|x| x.abs() <= 1e-10 * scale));
            prop_assert!(eigenvalues(g, &fan.left).l1 > w.head + 1e-12);
            prop_assert!(w.head > eigenvalues(g, &fan.mid_left).l1 + 1e-12);
        }
        if let Some(w) = fan.right_wave.filter(|w| w.kind == WaveKind::Shock) {
            let res = rh_residual(g, &fan.mid_right, &fan.right, w.head);
            let scale = fan.right.rho.max(fan.mid_right.rho) * (1.0 + w.head.abs() + fan.right.c(g));
            prop_assert!(res.iter().all(|x| x.abs() <= 1e-10 * scale));
            prop_assert!(eigenvalues(g, &fan.mid_right).l3 > w.head + 1e-12);
            prop_assert!(w.head > eigenvalues(g, &fan.right).l3 + 1e-12);
        }
        let e = fan.edges();
        prop_assert!(e.windows(2).all(|p| p[0] <= p[1] + 1e-12));
        Ok(())
    }

    proptest! {
        #[test]
        fn newton_agrees_with_bisection((gamma, l, r) in arb_data()) {
            let g = GasParams::<f64>::new(gamma, 1.0).unwrap();
            let fan = classify_and_solve(&RiemannData::new(g, l, r)).unwrap();
            if fan.vacuum_interval.is_none() {
                let rho = bisection_oracle(&g, &l, &r);
                prop_assert!((fan.mid_left.rho - rho).abs() <= 1e-10 * rho.max(1e-300));
                check_waves(&fan)?;
            }
        }

        #[test]
        fn fan_curve_monotone((gamma, a, _r) in arb_data(), rho in 0.01f64..4.0) {
            let g = GasParams::<f64>::new(gamma, 1.0).unwrap();
            let r1 = rho.min(a.rho * 0.999);
            let h = 1e-6 * r1;
            let (v, d) = wave_curve_deriv(&g, &a, Family::One, r1);
            let fd = (wave_curve_deriv(&g, &a, Family::One, r1 + h).0 - wave_curve_deriv(&g, &a, Family::One, r1 - h).0) / (2.0 * h);
            prop_assert!(d < 0.0 && fd < 0.0 && v.is_finite());
            prop_assert!((d - fd).abs() < 1e-5 * d.abs());
            let (_, d3) = wave_curve_deriv(&g, &a, Family::Three, r1);
            prop_assert!(d3 > 0.0);
        }

        #[test]
        fn shock_derivative_matches_differences((gamma, a, _r) in arb_data(), k in 1.01f64..5.0) {
            let g = GasParams::<f64>::new(gamma, 1.0).unwrap();
            let rho = a.rho * k;
            let h = 1e-6 * rho;
            for fam in [Family::One, Family::Three] {
                let (_, d) = wave_curve_deriv(&g, &a, fam, rho);
                let fd = (wave_curve_deriv(&g, &a, fam, rho + h).0 - wave_curve_deriv(&g, &a, fam, rho - h).0) / (2.0 * h);
                prop_assert!((d - fd).abs() < 1e-5 * d.abs().max(1e-3));
            }
        }

        #[test]
        fn sampler_continuity_and_fan_invariants((gamma, l, r) in arb_data()) {
            let g = GasParams::<f64>::new(gamma, 1.0).unwrap();
            let fan = classify_and_solve(&RiemannData::new(g, l, r)).unwrap();
            for w in [fan.left_wave, fan.right_wave].into_iter().flatten() {
                if w.kind != WaveKind::Rarefaction || fan.vacuum_interval.is_some() {
                    continue;
                }
                for edge in [w.head, w.tail] {
                    let d = 1e-12 * (1.0 + edge.abs());
                    let a = fan.sample(edge - d);
                    let b = fan.sample(edge + d);
                    prop_assert!((a.c(&g) - b.c(&g)).abs() <= 1e-10 * (1.0 + a.c(&g)));
                    prop_assert!((a.v1 - b.v1).abs() <= 1e-10 * (1.0 + a.v1.abs()));
                }
                let (lo, hi) = w.span();
                for k in 1..10 {
                    let xi = lo + (hi - lo) * k as f64 / 10.0;
                    let s = fan.sample(xi);
                    let inv = invariants_of(&g, &s).unwrap();
                    match w.family {
                        Family::One => {
                            let wl = invariants_of(&g, &l).unwrap().wbar;
                            prop_assert!((inv.wbar - wl).abs() <= 1e-12 * (1.0 + wl.abs()));
                            prop_assert!((s.v1 - s.c(&g) - xi).abs() <= 1e-12 * (1.0 + xi.abs()));
                        }
                        Family::Three => {
                            let wr = invariants_of(&g, &r).unwrap().w;
                            prop_assert!((inv.w - wr).abs() <= 1e-12 * (1.0 + wr.abs()));
                            prop_assert!((s.v1 + s.c(&g) - xi).abs() <= 1e-12 * (1.0 + xi.abs()));
                        }
                    }
                }
            }
        }

        #[test]
        fn galilean_shift((gamma, l, r) in arb_data(), shift in -3.0f64..3.0) {
            let g = GasParams::<f64>::new(gamma, 1.0).unwrap();
            let a = classify_and_solve(&RiemannData::new(g, l, r)).unwrap();
            let sl = PrimState::new(l.rho, l.v1 + shift, l.v2);
            let sr = PrimState::new(r.rho, r.v1 + shift, r.v2);
            let b = classify_and_solve(&RiemannData::new(g, sl, sr)).unwrap();
            prop_assert_eq!(a.pattern, b.pattern);
            let (ea, eb) = (a.edges(), b.edges());
            prop_assert_eq!(ea.len(), eb.len());
            for (x, y) in ea.iter().zip(&eb) {
                prop_assert!((x + shift - y).abs() <= 1e-12 * (1.0 + x.abs() + shift.abs()) * 10.0);
            }
            let (ca, cb) = (a.mid_left.c(&g), b.mid_left.c(&g));
            prop_assert!((ca - cb).abs() <= 1e-12 * (1.0 + ca));
        }
    }
}
