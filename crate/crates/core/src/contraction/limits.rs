use nalgebra::Matrix3;
use rayon::prelude::*;
use serde_json::json;

use super::{lorentz_row0, mass_of, mass_of_complex, mass_of_hp, multiplier_coeffs, multiplier_coeffs_at, Real, Vec3};
use crate::error::{Error, Result};
use crate::replab::{energy, momentum};
use crate::report::{fmt_residual, CheckReport, ConvergenceReport, Status};

/// `count` log-spaced points from `start` to `stop` inclusive.
pub fn log_grid(start: f64, stop: f64, count: usize) -> Result<Vec<f64>> {
    if !(start > 0.0 && stop > start && count >= 2) {
        return Err(Error::Usage(format!("bad grid {start}:{stop}:{count}")));
    }
    let (a, b) = (start.log10(), stop.log10());
    Ok((0..count).map(|i| 10f64.powf(a + (b - a) * i as f64 / (count - 1) as f64)).collect())
}

/// Parses `start:stop:log-count`.
pub fn parse_grid(spec: &str) -> Result<Vec<f64>> {
    let parts: Vec<&str> = spec.split(':').collect();
    let bad = || Error::Parse(format!("grid spec {spec:?} is not start:stop:count"));
    if parts.len() != 3 {
        return Err(bad());
    }
    let start = parts[0].trim().parse().map_err(|_| bad())?;
    let stop = parts[1].trim().parse().map_err(|_| bad())?;
    let count = parts[2].trim().parse().map_err(|_| bad())?;
    log_grid(start, stop, count)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LimitTolerance {
    pub final_relative: f64,
    pub order: (f64, f64),
    pub decades: f64,
}

impl Default for LimitTolerance {
    fn default() -> Self {
        Self { final_relative: 1e-5, order: (0.8, 2.2), decades: 3.0 }
    }
}

/// A family of c-dependent values approaching closed-form targets.
#[derive(Clone, Debug)]
pub struct LimitOutcome {
    pub report: CheckReport,
    pub convergence: ConvergenceReport,
    pub targets: Vec<f64>,
    pub values: Vec<f64>,
}

fn converge<F>(id: &str, grid: &[f64], targets: Vec<Real>, tol: LimitTolerance, eval: F) -> Result<LimitOutcome>
where
    F: Fn(&Real) -> Result<Vec<Real>> + Sync,
{
    if grid.windows(2).any(|w| !(w[1] > w[0])) || grid.is_empty() {
        return Err(Error::Usage("c grid must be nonempty and strictly increasing".into()));
    }
    let rows: Vec<Vec<Real>> = grid.par_iter().map(|&c| eval(&Real::from_f64(c))).collect::<Result<_>>()?;
    let errors: Vec<f64> = rows
        .iter()
        .map(|vals| vals.iter().zip(&targets).map(|(v, t)| (v - t).abs().to_f64()).fold(0.0, f64::max))
        .collect();
    if errors.iter().any(|e| !e.is_finite()) {
        return Err(Error::Domain(format!("{id}: non-finite error on the grid")));
    }
    let scale = targets.iter().map(|t| t.abs().to_f64()).fold(0.0, f64::max);
    let last = *errors.last().unwrap();
    let final_rel = if scale > 0.0 { last / scale } else { last };
    let conv = ConvergenceReport::new(grid.to_vec(), errors.clone(), final_rel);

    let exact = errors.iter().all(|e| *e == 0.0);
    let order = -conv.slope;
    let top = *grid.last().unwrap();
    let tail = grid.iter().filter(|c| **c >= top / 10f64.powf(tol.decades)).count();
    let ok = exact
        || (final_rel < tol.final_relative
            && order >= tol.order.0
            && order <= tol.order.1
            && conv.monotone_tail(tail));
    let values: Vec<f64> = rows.last().unwrap().iter().map(Real::to_f64).collect();
    let targets_f: Vec<f64> = targets.iter().map(Real::to_f64).collect();
    let report = CheckReport::new(id, Status::from_bool(ok), fmt_residual(final_rel))
        .param("c_max", top)
        .artifact("order", if exact { json!(null) } else { json!(order) })
        .artifact("targets", &targets_f)
        .artifact("values_at_c_max", &values)
        .artifact("rows", conv.rows().iter().map(|(c, e, s)| json!([c, e, if s.is_finite() { json!(s) } else { json!(null) }])).collect::<Vec<_>>());
    Ok(LimitOutcome { report, convergence: conv, targets: targets_f, values })
}

fn rot_v(v: &Vec3, r: &Matrix3<f64>) -> [Real; 3] {
    std::array::from_fn(|j| {
        (0..3).fold(Real::zero(), |s, k| s + Real::from_f64(v[k]) * Real::from_f64(r[(k, j)]))
    })
}

fn norm2(v: &Vec3) -> Real {
    v.iter().fold(Real::zero(), |s, x| s + Real::from_f64(*x) * Real::from_f64(*x))
}

/// −k ln(1 + u²/2Mk) and −u_j/(1 + u²/2Mk) for a momentum-like vector u.
fn galilei_targets(mass: f64, k: f64, u: &[Real; 3], u2: &Real) -> Result<Vec<Real>> {
    let (mm, kk) = (Real::from_f64(mass), Real::from_f64(k));
    let d = Real::one() + u2 / &(Real::from_int(2) * &mm * &kk);
    if !d.is_positive() {
        return Err(Error::Precondition(format!(
            "1 + u^2/2Mk = {} is not positive: outside the regular region",
            d.to_f64()
        )));
    }
    let mut out = vec![-(&kk * &d.ln())];
    out.extend(u.iter().map(|x| -(x / &d)));
    Ok(out)
}

/// c·φ₀ → −k ln(1 + Mv²/2k) and φ_k → −M v^j R^j_k/(1 + Mv²/2k).
pub fn multiplier_limit_check(mass: f64, k: f64, v: &Vec3, r: &Matrix3<f64>, grid: &[f64], tol: LimitTolerance) -> Result<LimitOutcome> {
    let m = Real::from_f64(mass);
    let mv: [Real; 3] = rot_v(v, r).map(|x| &m * &x);
    let targets = galilei_targets(mass, k, &mv, &(&(&m * &m) * &norm2(v)))?;
    let out = converge("contract.multiplier", grid, targets, tol, |c| {
        let w = multiplier_coeffs_at(mass, k, v, r, c)?;
        let mut vals = vec![c * &w.phi0];
        vals.extend(w.phi);
        Ok(vals)
    })?;
    Ok(with_params(out, mass, k).param("v", fmt_vec(v)))
}

fn fmt_vec(v: &Vec3) -> String {
    format!("{},{},{}", v[0], v[1], v[2])
}

impl LimitOutcome {
    pub fn param(mut self, k: &str, v: impl ToString) -> Self {
        self.report = self.report.param(k, v);
        self
    }
}

fn with_params(out: LimitOutcome, mass: f64, k: f64) -> LimitOutcome {
    out.param("M", mass).param("k", k)
}

/// The trivial multiplier ζ*(g)ζ*(g′)ζ(gg′) of ζ = e^{−imca⁰} at fixed m,
/// evaluated through the κ → ∞ end of the deformed coefficients, against
/// −mv²/2 ⊗ τ and −m v^k R^k_i ⊗ a^i.
pub fn classical_multiplier_check(m: f64, v: &Vec3, r: &Matrix3<f64>, grid: &[f64], tol: LimitTolerance) -> Result<LimitOutcome> {
    if !(m > 0.0) {
        return Err(Error::Precondition(format!("mass must be positive, got {m}")));
    }
    let mm = Real::from_f64(m);
    let mut targets = vec![-(&mm * &norm2(v) / Real::from_int(2))];
    targets.extend(rot_v(v, r).map(|x| -(&mm * &x)));
    let kappa = Real::parse("1e40");
    let out = converge("contract.classical-multiplier", grid, targets, tol, |c| {
        let (l00, l0) = lorentz_row0(v, r, c)?;
        let x = &mm * c / &kappa;
        let w = multiplier_coeffs(&l00, &l0, &x, &kappa)?;
        // κ = ∞ reading of the same coefficients: mc(1 − Λ⁰₀) and −mcΛ⁰_k
        let mc = &mm * c;
        let direct0 = &mc * &(Real::one() - &l00);
        let gap = (&w.phi0 - &direct0).abs();
        if gap.to_f64() > 1e-20 * (1.0 + direct0.abs().to_f64()) {
            return Err(Error::Domain(format!("κ → ∞ coefficients disagree with the classical phase by {}", gap.to_f64())));
        }
        let mut vals = vec![c * &w.phi0];
        vals.extend(w.phi);
        Ok(vals)
    })?;
    Ok(out.param("m", m).param("v", fmt_vec(v)))
}

/// c[mc − κ ln(ch + (p₀/mc) sh)] → −k ln(1 + q²/2Mk) and
/// −κ sh p_j/(mc ch + p₀ sh) → −q_j/(1 + q²/2Mk) with p = (m/M)q.
pub fn rep_limit_check(mass: f64, k: f64, q: &Vec3, grid: &[f64], tol: LimitTolerance) -> Result<LimitOutcome> {
    let qs: [Real; 3] = std::array::from_fn(|i| Real::from_f64(q[i]));
    let targets = galilei_targets(mass, k, &qs, &norm2(q))?;
    let mm = Real::from_f64(mass);
    let mut out = converge("contract.rep", grid, targets, tol, |c| {
        let kappa = Real::from_f64(k) / c;
        let m = mass_of_hp(mass, k, c)?;
        let mc = &m * c;
        let p: [Real; 3] = std::array::from_fn(|i| &m / &mm * &qs[i]);
        let p2 = p.iter().fold(Real::zero(), |s, x| s + x * x);
        let p0 = (&mc * &mc + p2).sqrt();
        let l0 = p.clone().map(|x| &x / &mc);
        let w = multiplier_coeffs(&(&p0 / &mc), &l0, &(&mc / &kappa), &kappa)?;
        let mut vals = vec![c * &w.phi0];
        vals.extend(w.phi);
        Ok(vals)
    })?;
    // cross-module oracle: the limits are −H and −P of the representation
    let h = energy(mass, k, q);
    let pk = momentum(mass, k, q);
    let mut oracle = vec![-h];
    oracle.extend(pk.iter().map(|x| -x));
    let agree = out.values.iter().zip(&oracle).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    let closed = out.targets.iter().zip(&oracle).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    let ok = out.report.passed() && agree < 1e-6 && closed < 1e-12;
    out.report.status = Status::from_bool(ok);
    out.report = out.report.artifact("replab_agreement", agree).artifact("replab_closed_form_gap", closed);
    Ok(with_params(out, mass, k).param("q", fmt_vec(q)))
}

/// m decreases to zero while mc² grows without bound along the grid.
pub fn mass_schedule_check(mass: f64, k: f64, grid: &[f64]) -> Result<CheckReport> {
    let ms: Vec<f64> = grid.iter().map(|&c| mass_of(mass, k, c)).collect::<Result<_>>()?;
    let rest: Vec<f64> = grid.iter().zip(&ms).map(|(c, m)| m * c * c).collect();
    let ok = ms.iter().all(|m| *m > 0.0) && ms.windows(2).all(|w| w[1] < w[0]) && rest.windows(2).all(|w| w[1] > w[0]);
    Ok(CheckReport::new("contract.mass-schedule", Status::from_bool(ok), fmt_residual(*ms.last().unwrap_or(&0.0)))
        .param("M", mass)
        .param("k", k)
        .artifact("m", &ms)
        .artifact("mc2", &rest))
}

/// Report-only: the limit formulas at k > 0 are regular everywhere while the
/// mass schedule has no real solution. With `complex_mass` the principal
/// continuation of m is listed as a non-physical curiosity.
pub fn sign_tension_report(mass: f64, k: f64, v: &Vec3, c: f64, complex_mass: bool) -> CheckReport {
    let d = 1.0 + mass * v.norm_squared() / (2.0 * k);
    let limit = if d > 0.0 { Some(-k * d.ln()) } else { None };
    let real_mass = mass_of(mass, k, c);
    let mut r = CheckReport::new("contract.k-sign", Status::ReportOnly, fmt_residual(d))
        .param("M", mass)
        .param("k", k)
        .param("c", c)
        .param("v", fmt_vec(v))
        .artifact("limit_regular", d > 0.0)
        .artifact("phase_limit", limit)
        .artifact("real_mass", real_mass.as_ref().ok())
        .artifact("mass_error", real_mass.err().map(|e| e.to_string()));
    if complex_mass {
        let m = mass_of_complex(mass, k, c);
        r = r.artifact("complex_mass_non_physical", [m.re, m.im]);
    }
    r
}
