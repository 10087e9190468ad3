//! Perturbed Riemann data on the strip.

use super::config::{PerturbationKind, RunConfig, Support};
use super::grid::Grid2D;
use crate::error::{Error, Result};
use crate::riemann::classify_and_solve;
use crate::state::eigenvalues;
use crate::Prim;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Compact bump on (−1, 1) with value 1 at 0, and its derivative.
fn bump(z: f64, order: usize) -> (f64, f64) {
    if z.abs() >= 1.0 {
        return (0.0, 0.0);
    }
    let q = 1.0 - z * z;
    if order == 0 {
        let b = (1.0 - 1.0 / q).exp();
        (b, b * (-2.0 * z / (q * q)))
    } else {
        let k = order as i32 + 1;
        (q.powi(k), -(k as f64) * 2.0 * z * q.powi(k - 1))
    }
}

/// Smooth monotone transition from 0 at t ≤ 0 to 1 at t ≥ 1, and its derivative.
fn smooth_step(t: f64, order: usize) -> (f64, f64) {
    if t <= 0.0 {
        return (0.0, 0.0);
    }
    if t >= 1.0 {
        return (1.0, 0.0);
    }
    if order == 0 {
        let f = |x: f64| (-1.0 / x).exp();
        let df = |x: f64| (-1.0 / x).exp() / (x * x);
        let (a, b) = (f(t), f(1.0 - t));
        let (da, db) = (df(t), -df(1.0 - t));
        let s = a + b;
        (a / s, (da * s - a * (da + db)) / (s * s))
    } else {
        let k = order as i32 + 1;
        let (a, b) = (t.powi(k), (1.0 - t).powi(k));
        let (da, db) = (k as f64 * t.powi(k - 1), -(k as f64) * (1.0 - t).powi(k - 1));
        let s = a + b;
        (a / s, (da * s - a * (da + db)) / (s * s))
    }
}

/// Equal to 1 for s ≤ a, 0 for s ≥ b; derivative in s.
fn plateau(s: f64, a: f64, b: f64, order: usize) -> (f64, f64) {
    let (v, dv) = smooth_step((s - a) / (b - a), order);
    (1.0 - v, -dv / (b - a))
}

#[derive(Debug, Clone)]
struct Fourier {
    coef: Vec<(f64, f64)>,
}

impl Fourier {
    fn seeded(rng: &mut ChaCha8Rng, modes: usize) -> Self {
        Self { coef: (0..modes).map(|_| (rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect() }
    }

    fn eval(&self, x: f64) -> (f64, f64) {
        let mut v = 0.0;
        let mut d = 0.0;
        for (m, &(a, b)) in self.coef.iter().enumerate() {
            let k = (m + 1) as f64;
            let (s, c) = (k * x).sin_cos();
            v += (a * c + b * s) / k;
            d += -a * s + b * c;
        }
        (v, d)
    }
}

/// Perturbation generator: `δ(ρ/ρ_σ, v¹, v²)` at a point, linear in ε.
#[derive(Debug, Clone)]
pub struct Perturbation {
    kind: PerturbationKind,
    support: Support,
    epsilon: f64,
    order: usize,
    inner: f64,
    outer: f64,
    shear_width: f64,
    c_ref: f64,
    shear: Fourier,
    potential: Fourier,
    side: [[Fourier; 3]; 2],
}

impl Perturbation {
    pub fn new(cfg: &RunConfig, c_ref: f64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        let m = cfg.modes.max(1);
        let shear = Fourier::seeded(&mut rng, m);
        let potential = Fourier::seeded(&mut rng, m);
        let mut side = || [Fourier::seeded(&mut rng, m), Fourier::seeded(&mut rng, m), Fourier::seeded(&mut rng, m)];
        let l = side();
        let r = side();
        Self {
            kind: cfg.perturbation,
            support: cfg.support,
            epsilon: cfg.epsilon,
            order: cfg.smooth_order,
            inner: cfg.bump_inner,
            outer: cfg.bump_outer,
            shear_width: cfg.shear_width,
            c_ref,
            shear,
            potential,
            side: [l, r],
        }
    }

    /// Side profile in s = |x₁| and its s-derivative.
    fn side_profile(&self, s: f64) -> (f64, f64) {
        match self.support {
            Support::Away => {
                let half = 0.5 * (self.outer - self.inner);
                let mid = 0.5 * (self.outer + self.inner);
                let (b, db) = bump((s - mid) / half, self.order);
                (b, db / half)
            }
            Support::Interface => plateau(s, self.inner, self.outer, self.order),
        }
    }

    fn away_profile(&self, s: f64) -> f64 {
        let half = 0.5 * (self.outer - self.inner);
        let mid = 0.5 * (self.outer + self.inner);
        bump((s - mid) / half, self.order).0
    }

    fn shear_profile(&self, s: f64) -> f64 {
        plateau(s, 0.5 * self.shear_width, self.shear_width, self.order).0
    }

    /// (δρ/ρ_σ, δv¹, δv²) at (x₁, x₂). The side is chosen by the sign of x₁; x₁ = 0⁻ is `left = true`.
    pub fn eval(&self, x1: f64, x2: f64, left: bool) -> [f64; 3] {
        if self.kind == PerturbationKind::None || self.epsilon == 0.0 {
            return [0.0; 3];
        }
        let e = self.epsilon;
        let s = x1.abs();
        let sgn = if left { -1.0 } else { 1.0 };
        let sd = &self.side[if left { 0 } else { 1 }];
        let shear = e * self.c_ref * self.shear.eval(x2).0 * self.shear_profile(s);
        let (b, db) = self.side_profile(s);
        match self.kind {
            PerturbationKind::None => [0.0; 3],
            PerturbationKind::Shear => [0.0, 0.0, shear],
            PerturbationKind::Vortical => [0.0, e * self.c_ref * sd[1].eval(x2).0 * b, shear],
            PerturbationKind::Potential => {
                // φ = ε c_ref ℓ P(x₂) B(s), ℓ the support half-length.
                let ell = 0.5 * (self.outer - self.inner);
                let (p, dp) = self.potential.eval(x2);
                let amp = e * self.c_ref * ell;
                [e * sd[0].eval(x2).0 * b, amp * p * db * sgn, amp * dp * b]
            }
            PerturbationKind::Full => {
                let extra = e * self.c_ref * sd[2].eval(x2).0 * self.away_profile(s);
                [e * sd[0].eval(x2).0 * b, e * self.c_ref * sd[1].eval(x2).0 * b, shear + extra]
            }
        }
    }
}

/// Conservative sizing of the x₁ half-width: 1.2 t_end max|λ|.
pub fn auto_extent(cfg: &RunConfig) -> Result<f64> {
    let base = cfg.base()?;
    let g = base.g;
    let fan = classify_and_solve(&base)?;
    let mut lam: f64 = 0.0;
    for s in [base.left, base.right, fan.mid_left, fan.mid_right] {
        let e = eigenvalues(&g, &s);
        lam = lam.max(e.l1.abs()).max(e.l3.abs());
    }
    for e in fan.edges() {
        if e.is_finite() {
            lam = lam.max(e.abs());
        }
    }
    let x = 1.2 * cfg.t_end * lam;
    Ok(if x > 0.0 { x } else { 1.0 })
}

/// Builds the initial grid.
pub fn init_perturbed(cfg: &RunConfig) -> Result<Grid2D> {
    cfg.validate()?;
    let base = cfg.base()?;
    let g = base.g;
    let fan = classify_and_solve(&base)?;
    if fan.vacuum_interval.is_some() {
        return Err(Error::Setup(format!("base data {} generate vacuum", fan.pattern)));
    }
    let half = match cfg.x1_extent {
        Some(x) => x,
        None => auto_extent(cfg)?,
    };
    let mut grid = Grid2D::new(g, base, cfg.nx, cfg.ny, half);
    let c_ref = base.left.c(&g).max(base.right.c(&g));
    let pert = Perturbation::new(cfg, c_ref);
    for j in 0..cfg.ny {
        let x2 = grid.x2(j);
        for i in 0..cfg.nx {
            let x1 = grid.x1(i);
            let left = x1 < 0.0;
            let s = if left { base.left } else { base.right };
            let [dr, d1, d2] = pert.eval(x1, x2, left);
            let p = Prim::new(s.rho * (1.0 + dr), s.v1 + d1, s.v2 + d2);
            if !(p.rho > 0.0) || !p.is_admissible() {
                return Err(Error::Setup(format!("perturbed density {} not admissible at ({x1}, {x2})", p.rho)));
            }
            let k = grid.idx(i, j);
            grid.cells[k] = p.to_cons();
        }
    }
    Ok(grid)
}

/// v² traces at x₁ = 0⁻ and 0⁺ on the given x₂ points.
pub fn interface_v2_traces(cfg: &RunConfig, x2: &[f64]) -> Result<(Vec<f64>, Vec<f64>)> {
    let base = cfg.base()?;
    let g = base.g;
    let pert = Perturbation::new(cfg, base.left.c(&g).max(base.right.c(&g)));
    let l = x2.iter().map(|&y| base.left.v2 + pert.eval(-0.0, y, true)[2]).collect();
    let r = x2.iter().map(|&y| base.right.v2 + pert.eval(0.0, y, false)[2]).collect();
    Ok((l, r))
}

/// Discrete H¹-type norm of the primitive perturbation (δρ/ρ_σ, δv¹, δv²).
pub fn perturbation_norm(grid: &Grid2D) -> f64 {
    let base = &grid.base;
    let (nx, ny) = (grid.nx, grid.ny);
    let mut d = vec![[0.0f64; 3]; nx * ny];
    for j in 0..ny {
        for i in 0..nx {
            let p = grid.prim(i, j);
            let s = if grid.x1(i) < 0.0 { base.left } else { base.right };
            d[j * nx + i] = [p.rho / s.rho - 1.0, p.v1 - s.v1, p.v2 - s.v2];
        }
    }
    let mut sum = 0.0;
    for j in 0..ny {
        for i in 0..nx {
            let a = d[j * nx + i];
            let jp = d[((j + 1) % ny) * nx + i];
            for k in 0..3 {
                sum += a[k] * a[k];
                sum += ((jp[k] - a[k]) / grid.dx2).powi(2);
                if i + 1 < nx {
                    let ip = d[j * nx + i + 1];
                    sum += ((ip[k] - a[k]) / grid.dx1).powi(2);
                }
            }
        }
    }
    (sum * grid.cell_area()).sqrt()
}
