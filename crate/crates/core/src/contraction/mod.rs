//! Numeric c → ∞ laboratory: the κ-Poincaré multiplier and representation
//! coefficients, their k-Galilei limits and the scalar identities behind them.

mod appendix;
mod family;
pub mod hp;
mod limits;

pub use appendix::*;
pub use family::*;
pub use hp::Real;
pub use limits::*;

use nalgebra::{Matrix3, Matrix4, Vector3};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type Vec3 = Vector3<f64>;

/// Boost velocity and rotation of a Lorentz transformation.
#[derive(Clone, Debug, PartialEq)]
pub struct RelParams {
    pub v: Vec3,
    pub r: Matrix3<f64>,
    pub c: f64,
}

impl RelParams {
    pub fn new(v: Vec3, r: Matrix3<f64>, c: f64) -> Result<Self> {
        if !(c > 0.0) || !c.is_finite() {
            return Err(Error::Precondition(format!("speed of light must be positive, got {c}")));
        }
        if v.norm() >= c {
            return Err(Error::Precondition(format!("|v| = {} is not below c = {c}", v.norm())));
        }
        if (r.transpose() * r - Matrix3::identity()).amax() > 1e-12 || (r.determinant() - 1.0).abs() > 1e-12 {
            return Err(Error::Precondition("R is not a rotation".into()));
        }
        Ok(Self { v, r, c })
    }

    pub fn gamma(&self) -> f64 {
        1.0 / (1.0 - self.v.norm_squared() / (self.c * self.c)).sqrt()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct LorentzMatrix(pub Matrix4<f64>);

impl LorentzMatrix {
    /// `‖ΛᵀηΛ − η‖_max`.
    pub fn pseudo_orthogonality_defect(&self) -> f64 {
        let eta = Matrix4::from_diagonal(&nalgebra::Vector4::new(1.0, -1.0, -1.0, -1.0));
        (self.0.transpose() * eta * self.0 - eta).amax()
    }
}

/// Λ⁰₀ = γ, Λ⁰_j = (γ/c) v^k R^k_j, Λ^i_0 = γ v^i/c and
/// Λ^i_j = (δ_ik + (γ − 1) v^i v^k / v²) R^k_j.
pub fn lorentz_embed(p: &RelParams) -> Result<LorentzMatrix> {
    let p = RelParams::new(p.v, p.r, p.c)?;
    let g = p.gamma();
    let v2 = p.v.norm_squared();
    let boost = if v2 == 0.0 { Matrix3::identity() } else { Matrix3::identity() + p.v * p.v.transpose() * ((g - 1.0) / v2) };
    let spatial = boost * p.r;
    let row = p.r.transpose() * p.v * (g / p.c);
    let mut m = Matrix4::zeros();
    m[(0, 0)] = g;
    for i in 0..3 {
        m[(0, i + 1)] = row[i];
        m[(i + 1, 0)] = g * p.v[i] / p.c;
        for j in 0..3 {
            m[(i + 1, j + 1)] = spatial[(i, j)];
        }
    }
    let out = LorentzMatrix(m);
    let defect = out.pseudo_orthogonality_defect();
    if defect > 1e-12 * g * g {
        return Err(Error::Domain(format!("embedding lost pseudo-orthogonality: {defect:e}")));
    }
    Ok(out)
}

/// First row of Λ at working precision; γ − 1 is needed to many digits once
/// c is large.
pub fn lorentz_row0(v: &Vec3, r: &Matrix3<f64>, c: &Real) -> Result<(Real, [Real; 3])> {
    let v2 = Real::from_f64(v[0]) * Real::from_f64(v[0])
        + Real::from_f64(v[1]) * Real::from_f64(v[1])
        + Real::from_f64(v[2]) * Real::from_f64(v[2]);
    let beta2 = &v2 / &(c * c);
    let rest = Real::one() - beta2;
    if !rest.is_positive() {
        return Err(Error::Precondition("|v| is not below c".into()));
    }
    let gamma = Real::one() / rest.sqrt();
    let row = std::array::from_fn(|j| {
        let mut s = Real::zero();
        for k in 0..3 {
            s = s + Real::from_f64(v[k]) * Real::from_f64(r[(k, j)]);
        }
        &gamma * &s / c
    });
    Ok((gamma, row))
}

fn mass_domain(mass: f64, k: f64, c: f64) -> Result<()> {
    if !(mass > 0.0) || k == 0.0 || !(c > 0.0) {
        return Err(Error::Precondition(format!("need M > 0, k != 0, c > 0; got M={mass}, k={k}, c={c}")));
    }
    if 1.0 - 2.0 * mass * c * c / k <= 0.0 {
        return Err(Error::MassDomain(format!(
            "1 - 2Mc^2/k = {} <= 0 at M={mass}, k={k}, c={c}: real mass needs k < 0",
            1.0 - 2.0 * mass * c * c / k
        )));
    }
    Ok(())
}

/// m = −(k/2c²) ln(1 − 2Mc²/k).
pub fn mass_of(mass: f64, k: f64, c: f64) -> Result<f64> {
    mass_domain(mass, k, c)?;
    let c2 = c * c;
    Ok(-k / (2.0 * c2) * (-2.0 * mass * c2 / k).ln_1p())
}

pub fn mass_of_hp(mass: f64, k: f64, c: &Real) -> Result<Real> {
    mass_domain(mass, k, c.to_f64())?;
    let (mm, kk) = (Real::from_f64(mass), Real::from_f64(k));
    let c2 = c * c;
    let arg = Real::one() - Real::from_int(2) * &mm * &c2 / &kk;
    Ok(-(&kk / (Real::from_int(2) * &c2)) * arg.ln())
}

/// Exploratory continuation of the mass schedule to k > 0. The principal
/// logarithm of a negative argument makes m complex; nothing downstream treats
/// the value as physical.
pub fn mass_of_complex(mass: f64, k: f64, c: f64) -> Complex64 {
    let c2 = c * c;
    let arg = Complex64::from(1.0 - 2.0 * mass * c2 / k);
    -k / (2.0 * c2) * arg.ln()
}

/// Exponent coefficients φ₀, φ_k of ω = exp(iφ₀⊗a⁰) exp(iφ_k⊗a^k).
#[derive(Clone, Debug)]
pub struct MultiplierCoeffs {
    pub phi0: Real,
    pub phi: [Real; 3],
}

/// Evaluates the coefficients at `x = mc/κ` through
/// ch x + Λ⁰₀ sh x = eˣ ((1 + Λ⁰₀)/2 + (1 − Λ⁰₀) e^{−2x}/2).
pub fn multiplier_coeffs(l00: &Real, l0: &[Real; 3], x: &Real, kappa: &Real) -> Result<MultiplierCoeffs> {
    let one = Real::one();
    let half = Real::parse("0.5");
    let e = (-(x + x)).exp();
    let b = &half * &(&one + l00) + &half * &(&(&one - l00) * &e);
    if !b.is_positive() {
        return Err(Error::Domain(format!(
            "ch(mc/κ) + Λ⁰₀ sh(mc/κ) is not positive (mc/κ = {}, Λ⁰₀ = {})",
            x.to_f64(),
            l00.to_f64()
        )));
    }
    let phi0 = -(kappa * &b.ln());
    // sh x / (ch x + Λ⁰₀ sh x) = (1 − e^{−2x}) / (2b)
    let ratio = (&one - &e) / (&b + &b);
    let phi = std::array::from_fn(|k| -(kappa * &ratio * &l0[k]));
    Ok(MultiplierCoeffs { phi0, phi })
}

/// Direct evaluation with hyperbolic functions, for cross-checking.
pub fn multiplier_coeffs_naive(l00: &Real, l0: &[Real; 3], x: &Real, kappa: &Real) -> MultiplierCoeffs {
    let (ch, sh) = (x.cosh(), x.sinh());
    let den = &ch + &(l00 * &sh);
    let phi0 = kappa * x - kappa * &den.ln();
    let phi = std::array::from_fn(|k| -(kappa * &sh * &l0[k] / &den));
    MultiplierCoeffs { phi0, phi }
}

/// Coefficients at speed of light `c` for fixed k, M, v and R.
pub fn multiplier_coeffs_at(mass: f64, k: f64, v: &Vec3, r: &Matrix3<f64>, c: &Real) -> Result<MultiplierCoeffs> {
    let kappa = Real::from_f64(k) / c;
    let m = mass_of_hp(mass, k, c)?;
    let x = &m * c / &kappa;
    let (l00, l0) = lorentz_row0(v, r, c)?;
    multiplier_coeffs(&l00, &l0, &x, &kappa)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn naive_and_stable_forms_agree() {
        let l0 = [Real::from_f64(3f64.sqrt()), Real::zero(), Real::zero()];
        let (x, kappa) = (Real::one(), Real::one());
        let a = multiplier_coeffs(&Real::from_int(2), &l0, &x, &kappa).unwrap();
        let b = multiplier_coeffs_naive(&Real::from_int(2), &l0, &x, &kappa);
        assert!((&a.phi0 - &b.phi0).abs().to_f64() < 1e-60);
        assert!((&a.phi[0] - &b.phi[0]).abs().to_f64() < 1e-60);
    }
}
