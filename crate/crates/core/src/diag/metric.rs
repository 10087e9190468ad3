//! Acoustical metric and the flat comparison frame.

/// Planar frame: T̂ = (−1, 0), X̂ = (0, 1), κ̊ = t, μ̊ = c t.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlanarFrame {
    pub t_hat: [f64; 2],
    pub x_hat: [f64; 2],
}

impl Default for PlanarFrame {
    fn default() -> Self {
        Self { t_hat: [-1.0, 0.0], x_hat: [0.0, 1.0] }
    }
}

impl PlanarFrame {
    pub fn kappa(&self, t: f64) -> f64 {
        t
    }

    pub fn mu(&self, c: f64, t: f64) -> f64 {
        c * t
    }

    /// Components (∂_t, ∂₁, ∂₂) of L̊ = ∂_t + (v¹ + c)∂₁ + v²∂₂.
    pub fn l_ring(&self, c: f64, v1: f64, v2: f64) -> [f64; 3] {
        [1.0, v1 - c * self.t_hat[0], v2 - c * self.t_hat[1]]
    }

    /// Components of L̲̊ = c⁻¹κ̊ L̊ + 2T̊ with T̊ = κ̊ T̂.
    pub fn lbar_ring(&self, c: f64, v1: f64, v2: f64, t: f64) -> [f64; 3] {
        let l = self.l_ring(c, v1, v2);
        let k = self.kappa(t);
        [k / c * l[0], k / c * l[1] + 2.0 * k * self.t_hat[0], k / c * l[2] + 2.0 * k * self.t_hat[1]]
    }
}

/// g = −c²dt² + Σ(dxⁱ − vⁱdt)² at one point, coordinates (t, x₁, x₂).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AcousticMetric {
    pub lower: [[f64; 3]; 3],
    pub upper: [[f64; 3]; 3],
    /// √|det g| = c.
    pub sqrt_det: f64,
}

impl AcousticMetric {
    pub fn at(c: f64, v1: f64, v2: f64) -> Self {
        let v = [v1, v2];
        let c2 = c * c;
        let mut lower = [[0.0; 3]; 3];
        let mut upper = [[0.0; 3]; 3];
        lower[0][0] = -c2 + v1 * v1 + v2 * v2;
        upper[0][0] = -1.0 / c2;
        for i in 0..2 {
            lower[0][i + 1] = -v[i];
            lower[i + 1][0] = -v[i];
            upper[0][i + 1] = -v[i] / c2;
            upper[i + 1][0] = -v[i] / c2;
            for j in 0..2 {
                let d = if i == j { 1.0 } else { 0.0 };
                lower[i + 1][j + 1] = d;
                upper[i + 1][j + 1] = d - v[i] * v[j] / c2;
            }
        }
        Self { lower, upper, sqrt_det: c }
    }

    /// g⁻¹(a, b) for covectors a, b.
    pub fn dot_upper(&self, a: &[f64; 3], b: &[f64; 3]) -> f64 {
        let mut s = 0.0;
        for m in 0..3 {
            for n in 0..3 {
                s += self.upper[m][n] * a[m] * b[n];
            }
        }
        s
    }

    /// g(a, b) for vectors a, b.
    pub fn dot_lower(&self, a: &[f64; 3], b: &[f64; 3]) -> f64 {
        let mut s = 0.0;
        for m in 0..3 {
            for n in 0..3 {
                s += self.lower[m][n] * a[m] * b[n];
            }
        }
        s
    }

    /// max |g·g⁻¹ − I|.
    pub fn identity_defect(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..3 {
            for j in 0..3 {
                let s: f64 = (0..3).map(|k| self.lower[i][k] * self.upper[k][j]).sum();
                let d = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((s - d).abs());
            }
        }
        worst
    }

    pub fn det_lower(&self) -> f64 {
        let m = &self.lower;
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    }
}
