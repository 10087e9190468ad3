//! Cell-centred scalar fields on a rectangular lattice and their finite differences.
//!
//! Layout: `data[j * nx + i]`, `i` along x₁ (contiguous), `j` along x₂.

use crate::scalar::Real;

#[derive(Debug, Clone, PartialEq)]
pub struct Field2<T> {
    pub nx: usize,
    pub ny: usize,
    pub data: Vec<T>,
}

/// Boundary treatment for differences along x₂. x₁ edges always use one-sided stencils.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum X2Boundary {
    Periodic,
    OneSided,
}

impl<T: Real> Field2<T> {
    pub fn zeros(nx: usize, ny: usize) -> Self {
        Self { nx, ny, data: vec![T::zero(); nx * ny] }
    }

    pub fn from_fn(nx: usize, ny: usize, f: impl Fn(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(nx * ny);
        for j in 0..ny {
            for i in 0..nx {
                data.push(f(i, j));
            }
        }
        Self { nx, ny, data }
    }

    #[inline]
    pub fn at(&self, i: usize, j: usize) -> T {
        self.data[j * self.nx + i]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: T) {
        self.data[j * self.nx + i] = v;
    }

    pub fn map(&self, f: impl Fn(T) -> T) -> Self {
        Self { nx: self.nx, ny: self.ny, data: self.data.iter().map(|&x| f(x)).collect() }
    }

    pub fn zip(&self, other: &Self, f: impl Fn(T, T) -> T) -> Self {
        assert_eq!((self.nx, self.ny), (other.nx, other.ny));
        Self {
            nx: self.nx,
            ny: self.ny,
            data: self.data.iter().zip(&other.data).map(|(&a, &b)| f(a, b)).collect(),
        }
    }

    /// ∂₁ by second-order central differences; second-order one-sided at x₁ edges.
    pub fn d1(&self, h: T) -> Self {
        let (nx, ny) = (self.nx, self.ny);
        assert!(nx >= 3, "d1 needs nx >= 3");
        let two = T::lit(2.0);
        let three = T::lit(3.0);
        Self::from_fn(nx, ny, |i, j| {
            if i == 0 {
                (three * (self.at(1, j) - self.at(0, j)) - (self.at(2, j) - self.at(1, j))) / (two * h)
            } else if i == nx - 1 {
                (three * (self.at(nx - 1, j) - self.at(nx - 2, j)) - (self.at(nx - 2, j) - self.at(nx - 3, j)))
                    / (two * h)
            } else {
                (self.at(i + 1, j) - self.at(i - 1, j)) / (two * h)
            }
        })
    }

    /// ∂₂ by second-order central differences.
    pub fn d2(&self, h: T, bc: X2Boundary) -> Self {
        let (nx, ny) = (self.nx, self.ny);
        assert!(ny >= 3, "d2 needs ny >= 3");
        let two = T::lit(2.0);
        let three = T::lit(3.0);
        Self::from_fn(nx, ny, |i, j| match bc {
            X2Boundary::Periodic => {
                let jp = (j + 1) % ny;
                let jm = (j + ny - 1) % ny;
                (self.at(i, jp) - self.at(i, jm)) / (two * h)
            }
            X2Boundary::OneSided => {
                if j == 0 {
                    (three * (self.at(i, 1) - self.at(i, 0)) - (self.at(i, 2) - self.at(i, 1))) / (two * h)
                } else if j == ny - 1 {
                    (three * (self.at(i, ny - 1) - self.at(i, ny - 2)) - (self.at(i, ny - 2) - self.at(i, ny - 3)))
                        / (two * h)
                } else {
                    (self.at(i, j + 1) - self.at(i, j - 1)) / (two * h)
                }
            }
        })
    }

    pub fn max_abs(&self) -> T {
        self.data.iter().fold(T::zero(), |m, &x| m.max(x.abs()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn differences_exact_on_quadratics() {
        let h = 0.1;
        let f = Field2::from_fn(6, 5, |i, j| {
            let x = i as f64 * h;
            let y = j as f64 * h;
            x * x + 3.0 * y * y + x * y
        });
        let fx = f.d1(h);
        let fy = f.d2(h, X2Boundary::OneSided);
        for j in 0..5 {
            for i in 0..6 {
                let x = i as f64 * h;
                let y = j as f64 * h;
                assert!((fx.at(i, j) - (2.0 * x + y)).abs() < 1e-12);
                assert!((fy.at(i, j) - (6.0 * y + x)).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn periodic_difference_wraps() {
        let n = 64;
        let h = 2.0 * std::f64::consts::PI / n as f64;
        let f = Field2::from_fn(3, n, |_, j| (j as f64 * h).sin());
        let fy = f.d2(h, X2Boundary::Periodic);
        let err = (0..n).map(|j| (fy.at(1, j) - (j as f64 * h).cos()).abs()).fold(0.0, f64::max);
        assert!(err < 2e-3);
    }
}
