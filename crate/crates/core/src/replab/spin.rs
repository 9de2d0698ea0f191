use nalgebra::{Matrix3, Rotation3, UnitQuaternion};
use num_complex::Complex64;

use super::{CMat, Vec3};
use crate::error::{Error, Result};

/// Spin matrices in the basis `m = s, s-1, ..., -s`.
#[derive(Clone, Debug)]
pub struct SpinRep {
    twice_s: u32,
    pub s: [CMat; 3],
}

impl SpinRep {
    pub fn new(twice_s: u32) -> Self {
        let dim = twice_s as usize + 1;
        let s = twice_s as f64 / 2.0;
        let m = |j: usize| s - j as f64;
        let mut plus = CMat::zeros(dim, dim);
        for j in 1..dim {
            let mj = m(j);
            plus[(j - 1, j)] = Complex64::new((s * (s + 1.0) - mj * (mj + 1.0)).sqrt(), 0.0);
        }
        let minus = plus.adjoint();
        let sx = (&plus + &minus).map(|z| z * 0.5);
        let sy = (&plus - &minus).map(|z| z * Complex64::new(0.0, -0.5));
        let sz = CMat::from_fn(dim, dim, |a, b| if a == b { Complex64::new(m(a), 0.0) } else { Complex64::new(0.0, 0.0) });
        Self { twice_s, s: [sx, sy, sz] }
    }

    pub fn from_spin(s: f64) -> Result<Self> {
        let t = 2.0 * s;
        if s < 0.0 || (t - t.round()).abs() > 1e-12 {
            return Err(Error::Domain(format!("spin must be a nonnegative half-integer, got {s}")));
        }
        Ok(Self::new(t.round() as u32))
    }

    pub fn spin(&self) -> f64 {
        self.twice_s as f64 / 2.0
    }

    pub fn twice_spin(&self) -> u32 {
        self.twice_s
    }

    pub fn dim(&self) -> usize {
        self.twice_s as usize + 1
    }

    pub fn is_integer(&self) -> bool {
        self.twice_s % 2 == 0
    }

    pub fn identity(&self) -> CMat {
        CMat::identity(self.dim(), self.dim())
    }

    /// `n · S`
    pub fn along(&self, n: &Vec3) -> CMat {
        &self.s[0] * Complex64::from(n[0]) + &self.s[1] * Complex64::from(n[1]) + &self.s[2] * Complex64::from(n[2])
    }

    /// `max |[S_i, S_j] - i ε_ijk S_k|`
    pub fn commutator_residual(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for (i, j, k) in [(0, 1, 2), (1, 2, 0), (2, 0, 1)] {
            let c = &self.s[i] * &self.s[j] - &self.s[j] * &self.s[i];
            let d = c - &self.s[k] * Complex64::i();
            worst = worst.max(d.camax());
        }
        worst
    }

    /// `max |Σ S_i² - s(s+1)|`
    pub fn casimir_residual(&self) -> f64 {
        let s = self.spin();
        let c: CMat = self.s.iter().map(|m| m * m).fold(CMat::zeros(self.dim(), self.dim()), |a, b| a + b);
        (c - self.identity() * Complex64::from(s * (s + 1.0))).camax()
    }

    /// `D(R) = exp(-i θ n·S)` from the axis and angle of `R`.
    pub fn rotation(&self, r: &Matrix3<f64>) -> CMat {
        let q = UnitQuaternion::from_rotation_matrix(&Rotation3::from_matrix_unchecked(*r));
        match q.axis_angle() {
            Some((n, theta)) => (self.along(&n.into_inner()) * Complex64::new(0.0, -theta)).exp(),
            None => self.identity(),
        }
    }
}
