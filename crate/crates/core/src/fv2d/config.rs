use crate::error::{Error, Result};
use crate::riemann::RiemannData;
use crate::state::{GasParams, PrimState};
use crate::{Data, Gas, Prim};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PerturbationKind {
    None,
    /// v² shear S(x₂)χ(x₁) shared by both sides.
    Shear,
    /// Shear plus a side-specific v¹ perturbation; carries vorticity.
    Vortical,
    /// δv = ∇φ plus a density perturbation; irrotational.
    Potential,
    /// Density, v¹ and v² perturbations together.
    Full,
}

/// Where the side-specific (non-shear) perturbations live.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Support {
    /// Compact support in bump_inner ≤ |x₁| ≤ bump_outer.
    Away,
    /// Plateau on |x₁| ≤ bump_inner decaying to 0 at bump_outer.
    Interface,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Limiter {
    Minmod,
    /// Monotonized central.
    Mc,
    None,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub gamma: f64,
    pub k0: f64,
    pub rho_l: f64,
    pub v1_l: f64,
    pub v2_l: f64,
    pub rho_r: f64,
    pub v1_r: f64,
    pub v2_r: f64,
    /// Sound speeds overriding rho_l / rho_r through the EOS.
    pub c_l: Option<f64>,
    pub c_r: Option<f64>,
    pub epsilon: f64,
    pub perturbation: PerturbationKind,
    pub support: Support,
    pub modes: usize,
    /// 0 selects C^∞ profiles, k selects C^k polynomial profiles.
    pub smooth_order: usize,
    pub bump_inner: f64,
    pub bump_outer: f64,
    pub shear_width: f64,
    pub nx: usize,
    pub ny: usize,
    /// Half-width of the x₁ domain; `None` sizes it from the wave speeds.
    pub x1_extent: Option<f64>,
    pub t_end: f64,
    pub cfl: f64,
    pub order: usize,
    pub limiter: Limiter,
    pub seed: u64,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            gamma: 1.4,
            k0: 1.0,
            rho_l: 1.0,
            v1_l: -0.5,
            v2_l: 0.0,
            rho_r: 1.0,
            v1_r: 0.5,
            v2_r: 0.0,
            c_l: None,
            c_r: None,
            epsilon: 0.0,
            perturbation: PerturbationKind::None,
            support: Support::Away,
            modes: 2,
            smooth_order: 0,
            bump_inner: 0.1,
            bump_outer: 0.5,
            shear_width: 0.4,
            nx: 200,
            ny: 32,
            x1_extent: None,
            t_end: 0.5,
            cfl: 0.8,
            order: 1,
            limiter: Limiter::Minmod,
            seed: 0,
        }
    }
}

pub const CONFIG_KEYS: &[&str] = &[
    "gamma", "k0", "rho_l", "v1_l", "v2_l", "rho_r", "v1_r", "v2_r", "c_l", "c_r", "epsilon", "perturbation", "support",
    "modes", "smooth_order", "bump_inner", "bump_outer", "shear_width", "nx", "ny", "x1_extent", "t_end", "cfl", "order",
    "limiter", "seed",
];

fn num(key: &str, v: &str) -> Result<f64> {
    v.trim().parse::<f64>().map_err(|_| Error::Config(format!("{key}: '{v}' is not a number")))
}

fn int(key: &str, v: &str) -> Result<u64> {
    v.trim().parse::<u64>().map_err(|_| Error::Config(format!("{key}: '{v}' is not a non-negative integer")))
}

impl RunConfig {
    pub fn gas(&self) -> Result<Gas> {
        GasParams::new(self.gamma, self.k0)
    }

    pub fn base(&self) -> Result<Data> {
        let g = self.gas()?;
        let left = match self.c_l {
            Some(c) => PrimState::from_c(&g, c, self.v1_l, self.v2_l),
            None => PrimState::new(self.rho_l, self.v1_l, self.v2_l),
        };
        let right = match self.c_r {
            Some(c) => PrimState::from_c(&g, c, self.v1_r, self.v2_r),
            None => PrimState::new(self.rho_r, self.v1_r, self.v2_r),
        };
        Ok(RiemannData::new(g, left, right))
    }

    pub fn validate(&self) -> Result<()> {
        self.gas()?;
        let b = self.base()?;
        let ok = |s: &Prim| s.rho > 0.0 && s.is_admissible();
        if !ok(&b.left) || !ok(&b.right) {
            return Err(Error::Config("base states need positive density".into()));
        }
        if !(self.cfl > 0.0 && self.cfl < 1.0) {
            return Err(Error::Config(format!("cfl = {} outside (0, 1)", self.cfl)));
        }
        if self.nx < 4 || self.ny < 4 {
            return Err(Error::Config("nx and ny must be at least 4".into()));
        }
        if !(self.epsilon >= 0.0) {
            return Err(Error::Config("epsilon must be non-negative".into()));
        }
        if !(self.t_end >= 0.0) {
            return Err(Error::Config("t_end must be non-negative".into()));
        }
        if self.order != 1 && self.order != 2 {
            return Err(Error::Config(format!("order = {} must be 1 or 2", self.order)));
        }
        if !(self.bump_inner >= 0.0 && self.bump_outer > self.bump_inner) || !(self.shear_width > 0.0) {
            return Err(Error::Config("need 0 <= bump_inner < bump_outer and shear_width > 0".into()));
        }
        if let Some(x) = self.x1_extent {
            if !(x > 0.0) {
                return Err(Error::Config("x1_extent must be positive".into()));
            }
        }
        Ok(())
    }

    /// Applies one `key=value` setting. Unknown keys are rejected.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let v = value.trim();
        match key {
            "gamma" => self.gamma = num(key, v)?,
            "k0" => self.k0 = num(key, v)?,
            "rho_l" => self.rho_l = num(key, v)?,
            "v1_l" => self.v1_l = num(key, v)?,
            "v2_l" => self.v2_l = num(key, v)?,
            "rho_r" => self.rho_r = num(key, v)?,
            "v1_r" => self.v1_r = num(key, v)?,
            "v2_r" => self.v2_r = num(key, v)?,
            "c_l" => self.c_l = if v == "none" { None } else { Some(num(key, v)?) },
            "c_r" => self.c_r = if v == "none" { None } else { Some(num(key, v)?) },
            "epsilon" => self.epsilon = num(key, v)?,
            "perturbation" => {
                self.perturbation = match v {
                    "none" => PerturbationKind::None,
                    "shear" => PerturbationKind::Shear,
                    "vortical" => PerturbationKind::Vortical,
                    "potential" => PerturbationKind::Potential,
                    "full" => PerturbationKind::Full,
                    _ => return Err(Error::Config(format!("perturbation: unknown kind '{v}'"))),
                }
            }
            "support" => {
                self.support = match v {
                    "away" => Support::Away,
                    "interface" => Support::Interface,
                    _ => return Err(Error::Config(format!("support: unknown value '{v}'"))),
                }
            }
            "modes" => self.modes = int(key, v)? as usize,
            "smooth_order" => self.smooth_order = int(key, v)? as usize,
            "bump_inner" => self.bump_inner = num(key, v)?,
            "bump_outer" => self.bump_outer = num(key, v)?,
            "shear_width" => self.shear_width = num(key, v)?,
            "nx" => self.nx = int(key, v)? as usize,
            "ny" => self.ny = int(key, v)? as usize,
            "x1_extent" => self.x1_extent = if v == "auto" { None } else { Some(num(key, v)?) },
            "t_end" => self.t_end = num(key, v)?,
            "cfl" => self.cfl = num(key, v)?,
            "order" => self.order = int(key, v)? as usize,
            "limiter" => {
                self.limiter = match v {
                    "minmod" => Limiter::Minmod,
                    "mc" => Limiter::Mc,
                    "none" => Limiter::None,
                    _ => return Err(Error::Config(format!("limiter: unknown value '{v}'"))),
                }
            }
            "seed" => self.seed = int(key, v)?,
            _ => return Err(Error::Config(format!("unknown key '{key}'"))),
        }
        Ok(())
    }

    /// Effective settings as ordered `(key, value)` pairs.
    pub fn to_pairs(&self) -> Vec<(String, String)> {
        let opt = |x: Option<f64>, none: &str| x.map(|v| format!("{v:?}")).unwrap_or_else(|| none.to_string());
        let kind = match self.perturbation {
            PerturbationKind::None => "none",
            PerturbationKind::Shear => "shear",
            PerturbationKind::Vortical => "vortical",
            PerturbationKind::Potential => "potential",
            PerturbationKind::Full => "full",
        };
        let support = match self.support {
            Support::Away => "away",
            Support::Interface => "interface",
        };
        let limiter = match self.limiter {
            Limiter::Minmod => "minmod",
            Limiter::Mc => "mc",
            Limiter::None => "none",
        };
        let f = |x: f64| format!("{x:?}");
        vec![
            ("gamma", f(self.gamma)),
            ("k0", f(self.k0)),
            ("rho_l", f(self.rho_l)),
            ("v1_l", f(self.v1_l)),
            ("v2_l", f(self.v2_l)),
            ("rho_r", f(self.rho_r)),
            ("v1_r", f(self.v1_r)),
            ("v2_r", f(self.v2_r)),
            ("c_l", opt(self.c_l, "none")),
            ("c_r", opt(self.c_r, "none")),
            ("epsilon", f(self.epsilon)),
            ("perturbation", kind.to_string()),
            ("support", support.to_string()),
            ("modes", self.modes.to_string()),
            ("smooth_order", self.smooth_order.to_string()),
            ("bump_inner", f(self.bump_inner)),
            ("bump_outer", f(self.bump_outer)),
            ("shear_width", f(self.shear_width)),
            ("nx", self.nx.to_string()),
            ("ny", self.ny.to_string()),
            ("x1_extent", opt(self.x1_extent, "auto")),
            ("t_end", f(self.t_end)),
            ("cfl", f(self.cfl)),
            ("order", self.order.to_string()),
            ("limiter", limiter.to_string()),
            ("seed", self.seed.to_string()),
        ]
        .into_iter()
        .map(|(k, v)| (k.to_string(), v))
        .collect()
    }
}
