//! Scalar identities behind the multiplier coefficients: the Y₀, Y_k flows
//! generated by a⁰ and the two integrals that assemble ω.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::report::{fmt_residual, CheckReport, Status};

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct AppendixSample {
    pub l00: f64,
    pub l0: [f64; 3],
    pub kappa: f64,
    pub c: f64,
    /// Upper end of the mass interval.
    pub m: f64,
}

impl AppendixSample {
    /// Λ⁰_k is any vector with |Λ⁰_k|² = (Λ⁰₀)² − 1 along `dir`.
    pub fn new(l00: f64, dir: [f64; 3], kappa: f64, c: f64, m: f64) -> Result<Self> {
        if !(l00 >= 1.0) || kappa == 0.0 || !(c > 0.0) || !(m >= 0.0) {
            return Err(Error::Precondition(format!("bad sample Λ⁰₀={l00} κ={kappa} c={c} m={m}")));
        }
        let n = (dir[0] * dir[0] + dir[1] * dir[1] + dir[2] * dir[2]).sqrt();
        let s = if n > 0.0 { (l00 * l00 - 1.0).sqrt() / n } else { 0.0 };
        let sample = Self { l00, l0: dir.map(|d| d * s), kappa, c, m };
        if sample.denominator(m) <= 0.0 {
            return Err(Error::Precondition("ch + Λ⁰₀ sh vanishes inside the interval".into()));
        }
        Ok(sample)
    }

    fn rate(&self) -> f64 {
        self.c / self.kappa
    }

    /// ch(mc/κ) + Λ⁰₀ sh(mc/κ).
    pub fn denominator(&self, m: f64) -> f64 {
        let x = m * self.rate();
        x.cosh() + self.l00 * x.sinh()
    }

    /// (Λ⁰₀ ch + sh)/(Λ⁰₀ sh + ch).
    pub fn y0(&self, m: f64) -> f64 {
        let x = m * self.rate();
        (self.l00 * x.cosh() + x.sinh()) / self.denominator(m)
    }

    /// Λ⁰_k/(ch + Λ⁰₀ sh).
    pub fn yk(&self, m: f64) -> [f64; 3] {
        let d = self.denominator(m);
        self.l0.map(|l| l / d)
    }

    /// κ ln(ch + Λ⁰₀ sh).
    pub fn phase_integral(&self, m: f64) -> f64 {
        self.kappa * self.denominator(m).ln()
    }

    /// (κ/c) sh/(ch + Λ⁰₀ sh).
    pub fn translation_integral(&self, m: f64) -> f64 {
        let x = m * self.rate();
        x.sinh() / (self.rate() * self.denominator(m))
    }
}

type State = [f64; 4];

/// Ẏ₀ = −(c/κ)(Y₀² − 1), Ẏ_k = −(c/κ) Y₀ Y_k.
fn flow(rate: f64, y: &State) -> State {
    [-rate * (y[0] * y[0] - 1.0), -rate * y[0] * y[1], -rate * y[0] * y[2], -rate * y[0] * y[3]]
}

fn rk4(rate: f64, y0: State, t: f64, steps: usize) -> State {
    let h = t / steps as f64;
    let mut y = y0;
    let axpy = |y: &State, a: f64, k: &State| -> State { std::array::from_fn(|i| y[i] + a * k[i]) };
    for _ in 0..steps {
        let k1 = flow(rate, &y);
        let k2 = flow(rate, &axpy(&y, h / 2.0, &k1));
        let k3 = flow(rate, &axpy(&y, h / 2.0, &k2));
        let k4 = flow(rate, &axpy(&y, h, &k3));
        y = std::array::from_fn(|i| y[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]));
    }
    y
}

fn max_diff(a: &State, b: &State) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

/// Integrates the flow with step doubling until two successive step counts
/// agree to `tol / 10`.
pub fn integrate_flow(s: &AppendixSample, tol: f64) -> Result<State> {
    let init = [s.l00, s.l0[0], s.l0[1], s.l0[2]];
    let mut steps = 64;
    let mut prev = rk4(s.rate(), init, s.m, steps);
    while steps < 1 << 20 {
        steps *= 2;
        let next = rk4(s.rate(), init, s.m, steps);
        if max_diff(&prev, &next) < tol / 10.0 {
            return Ok(next);
        }
        prev = next;
    }
    Err(Error::Domain(format!("RK4 step refinement did not settle for {s:?}")))
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize)]
pub struct AppendixResiduals {
    pub y0_ode: f64,
    pub yk_ode: f64,
    pub phase_quadrature: f64,
    pub translation_quadrature: f64,
}

impl AppendixResiduals {
    fn max(self, o: Self) -> Self {
        Self {
            y0_ode: self.y0_ode.max(o.y0_ode),
            yk_ode: self.yk_ode.max(o.yk_ode),
            phase_quadrature: self.phase_quadrature.max(o.phase_quadrature),
            translation_quadrature: self.translation_quadrature.max(o.translation_quadrature),
        }
    }
}

pub fn appendix_residuals(s: &AppendixSample) -> Result<AppendixResiduals> {
    let y = integrate_flow(s, 1e-10)?;
    let y0 = (y[0] - s.y0(s.m)).abs();
    let yk = s.yk(s.m);
    let yk = (0..3).map(|i| (y[i + 1] - yk[i]).abs()).fold(0.0, f64::max);
    let phase = quadrature::integrate(|m| s.c * s.y0(m), 0.0, s.m, 1e-13).integral;
    let trans = quadrature::integrate(|m| s.denominator(m).powi(-2), 0.0, s.m, 1e-13).integral;
    Ok(AppendixResiduals {
        y0_ode: y0,
        yk_ode: yk,
        phase_quadrature: (phase - s.phase_integral(s.m)).abs(),
        translation_quadrature: (trans - s.translation_integral(s.m)).abs(),
    })
}

/// Seeded samples with Λ⁰₀ ∈ [1, 3], |κ| ∈ [0.5, 2] of either sign and
/// c ∈ [0.5, 2]; for κ < 0 the interval stops short of the zero of
/// ch + Λ⁰₀ sh.
pub fn appendix_samples(n: usize, seed: u64) -> Vec<AppendixSample> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        let l00: f64 = rng.gen_range(1.0..3.0);
        let dir = [rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)];
        let kappa: f64 = rng.gen_range(0.5..2.0) * if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
        let c = rng.gen_range(0.5..2.0);
        let x_max: f64 = if kappa > 0.0 { 3.0 } else { (0.8 * (1.0 / l00).atanh()).min(2.0) };
        let x = rng.gen_range(0.1..1.0) * x_max;
        let m = x * kappa.abs() / c;
        if let Ok(s) = AppendixSample::new(l00, dir, kappa, c, m) {
            out.push(s);
        }
    }
    out
}

/// RK4 against the closed flows to `ode_tol`, quadrature against the closed
/// integrals to `quad_tol`.
pub fn appendix_checks(samples: &[AppendixSample], ode_tol: f64, quad_tol: f64) -> Result<CheckReport> {
    let per: Vec<AppendixResiduals> = samples.par_iter().map(appendix_residuals).collect::<Result<_>>()?;
    let worst = per.iter().fold(AppendixResiduals::default(), |a, b| a.max(*b));
    let ok = worst.y0_ode < ode_tol
        && worst.yk_ode < ode_tol
        && worst.phase_quadrature < quad_tol
        && worst.translation_quadrature < quad_tol;
    let overall = worst.y0_ode.max(worst.yk_ode).max(worst.phase_quadrature).max(worst.translation_quadrature);
    Ok(CheckReport::new("contract.appendix", Status::from_bool(ok), fmt_residual(overall))
        .param("samples", samples.len())
        .param("ode_tol", ode_tol)
        .param("quad_tol", quad_tol)
        .artifact("worst", worst))
}
