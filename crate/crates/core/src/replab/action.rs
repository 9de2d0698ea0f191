use std::num::NonZeroUsize;

use gauss_quad::hermite::GaussHermite;
use nalgebra::{Matrix3, Rotation3, Unit};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::generators::{energy, momentum, Generators};
use super::{CMat, CVec, Vec3};
use crate::error::{Error, Result};
use crate::report::{fmt_residual, CheckReport, ConvergenceReport, Status};

/// A point `(R, v, a, t)` of the classical Galilei group.
#[derive(Clone, Debug, PartialEq)]
pub struct GroupPointNR {
    pub r: Matrix3<f64>,
    pub v: Vec3,
    pub a: Vec3,
    pub t: f64,
}

impl GroupPointNR {
    pub fn new(r: Matrix3<f64>, v: Vec3, a: Vec3, t: f64) -> Result<Self> {
        let defect = (r.transpose() * r - Matrix3::identity()).amax();
        if defect > 1e-12 || r.determinant() < 0.0 {
            return Err(Error::Domain(format!("R is not a proper rotation (|R^T R - I| = {defect:e})")));
        }
        Ok(Self { r, v, a, t })
    }

    pub fn identity() -> Self {
        Self { r: Matrix3::identity(), v: Vec3::zeros(), a: Vec3::zeros(), t: 0.0 }
    }

    /// `exp(θ [n]_×)`, rotating by `θ` about `n`.
    pub fn rotation(axis: &Vec3, angle: f64) -> Self {
        let r = Rotation3::from_axis_angle(&Unit::new_normalize(*axis), angle).into_inner();
        Self { r, ..Self::identity() }
    }

    pub fn boost(v: Vec3) -> Self {
        Self { v, ..Self::identity() }
    }

    pub fn translation(a: Vec3) -> Self {
        Self { a, ..Self::identity() }
    }

    pub fn time(t: f64) -> Self {
        Self { t, ..Self::identity() }
    }

    /// Classical product, dual to the coproduct of the coordinates.
    pub fn compose(&self, o: &Self) -> Self {
        Self { r: self.r * o.r, v: self.v + self.r * o.v, a: self.a + self.r * o.a + self.v * o.t, t: self.t + o.t }
    }
}

/// `f_j(q) = (α_j + β_j · (q - c)) exp(-|q - c|^2 / 2σ^2)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TestFunction {
    pub center: [f64; 3],
    pub width: f64,
    /// Per spin component: `(α, β)` as `[re, im]` pairs.
    pub components: Vec<([f64; 2], [[f64; 2]; 3])>,
}

fn cx(p: [f64; 2]) -> Complex64 {
    Complex64::new(p[0], p[1])
}

impl TestFunction {
    pub fn random(dim: usize, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut pair = || [rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)];
        let components = (0..dim).map(|_| (pair(), [pair(), pair(), pair()])).collect();
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
        Self { center: [0.0; 3].map(|_| rng.gen_range(-0.3..0.3)), width: rng.gen_range(0.6..0.9), components }
    }

    pub fn dim(&self) -> usize {
        self.components.len()
    }

    fn center(&self) -> Vec3 {
        Vec3::from(self.center)
    }

    pub fn value(&self, q: &Vec3) -> CVec {
        let d = q - self.center();
        let g = (-d.norm_squared() / (2.0 * self.width * self.width)).exp();
        CVec::from_iterator(
            self.dim(),
            self.components.iter().map(|(a, b)| (cx(*a) + (0..3).map(|m| cx(b[m]) * d[m]).sum::<Complex64>()) * g),
        )
    }

    pub fn gradient(&self, q: &Vec3) -> [CVec; 3] {
        let d = q - self.center();
        let s2 = self.width * self.width;
        let g = (-d.norm_squared() / (2.0 * s2)).exp();
        std::array::from_fn(|m| {
            CVec::from_iterator(
                self.dim(),
                self.components.iter().map(|(a, b)| {
                    let poly = cx(*a) + (0..3).map(|n| cx(b[n]) * d[n]).sum::<Complex64>();
                    (cx(b[m]) - poly * (d[m] / s2)) * g
                }),
            )
        })
    }
}

/// `(U(g) f)(q) = e^{-i H(q) t} e^{-i P(q)·a} D(R) f(R^T (q + M v))`.
pub fn act_value(gens: &Generators, g: &GroupPointNR, f: &dyn Fn(&Vec3) -> CVec, q: &Vec3) -> Result<CVec> {
    gens.in_domain(q)?;
    let phase = -energy(gens.mass, gens.k, q) * g.t - momentum(gens.mass, gens.k, q).dot(&g.a);
    let arg = g.r.transpose() * (q + g.v * gens.mass);
    let d: CMat = gens.spin.rotation(&g.r);
    Ok((d * f(&arg)) * Complex64::from_polar(1.0, phase))
}

/// Values of `U(g) f` at the given points; only the principal regime `k > 0`.
pub fn act(gens: &Generators, g: &GroupPointNR, f: &TestFunction, points: &[Vec3]) -> Result<Vec<CVec>> {
    if gens.k < 0.0 {
        return Err(Error::Domain("the point action is defined here for k > 0 only".into()));
    }
    let fv = |q: &Vec3| f.value(q);
    points.iter().map(|q| act_value(gens, g, &fv, q)).collect()
}

/// Product Gauss–Hermite rule adapted to a Gaussian of width `scale` at `center`.
pub struct HermiteGrid {
    nodes: Vec<(Vec3, f64)>,
}

impl HermiteGrid {
    pub fn new(center: Vec3, scale: f64, per_axis: usize) -> Self {
        let rule = GaussHermite::new(NonZeroUsize::new(per_axis.max(1)).expect("nonzero"));
        let pairs = rule.as_node_weight_pairs();
        let mut nodes = Vec::with_capacity(pairs.len().pow(3));
        for (x, wx) in pairs {
            for (y, wy) in pairs {
                for (z, wz) in pairs {
                    let xi = Vec3::new(*x, *y, *z);
                    let w = wx * wy * wz * xi.norm_squared().exp() * scale.powi(3);
                    nodes.push((center + xi * scale, w));
                }
            }
        }
        Self { nodes }
    }

    /// `∫ |h(q)|^2 d^3q`, summed in node order.
    pub fn norm2(&self, h: impl Fn(&Vec3) -> Result<CVec> + Sync) -> Result<f64> {
        let vals: Vec<Result<f64>> = self.nodes.par_iter().map(|(q, w)| h(q).map(|v| w * v.norm_squared())).collect();
        vals.into_iter().sum()
    }
}

pub const QUADRATURE_NODES: usize = 40;

fn grid_for(f: &TestFunction, image_center: Vec3) -> HermiteGrid {
    HermiteGrid::new(image_center, f.width, QUADRATURE_NODES)
}

/// `(‖U(g) f‖ - ‖f‖) / ‖f‖`
pub fn norm_defect(gens: &Generators, g: &GroupPointNR, f: &TestFunction) -> Result<f64> {
    let fv = |q: &Vec3| f.value(q);
    let n0 = grid_for(f, f.center()).norm2(|q| Ok(f.value(q)))?.sqrt();
    let image = g.r * f.center() - g.v * gens.mass;
    let n1 = grid_for(f, image).norm2(|q| act_value(gens, g, &fv, q))?.sqrt();
    Ok((n1 - n0).abs() / n0)
}

/// One-parameter directions and the generator each is matched against.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Direction {
    Time,
    Translation(usize),
    Boost(usize),
    Rotation(usize),
}

impl Direction {
    pub fn all() -> Vec<Direction> {
        let mut out = vec![Direction::Time];
        for k in 0..3 {
            out.push(Direction::Translation(k));
        }
        for k in 0..3 {
            out.push(Direction::Boost(k));
        }
        for k in 0..3 {
            out.push(Direction::Rotation(k));
        }
        out
    }

    pub fn point(self, e: f64) -> GroupPointNR {
        let unit = |k: usize| Vec3::from_fn(|i, _| if i == k { 1.0 } else { 0.0 });
        match self {
            Direction::Time => GroupPointNR::time(e),
            Direction::Translation(k) => GroupPointNR::translation(unit(k) * e),
            Direction::Boost(k) => GroupPointNR::boost(unit(k) * e),
            Direction::Rotation(k) => GroupPointNR::rotation(&unit(k), e),
        }
    }

    /// `i d/dε U(e(ε))` at `ε = 0` equals `+H`, `+P_k`, `+L_k`, `+J_k`.
    pub fn generator(self, g: &Generators) -> &super::calculus::FirstOrderOp {
        match self {
            Direction::Time => &g.h,
            Direction::Translation(k) => &g.p[k],
            Direction::Boost(k) => &g.l[k],
            Direction::Rotation(k) => &g.j[k],
        }
    }

    pub fn name(self) -> String {
        match self {
            Direction::Time => "t".into(),
            Direction::Translation(k) => format!("a{}", k + 1),
            Direction::Boost(k) => format!("v{}", k + 1),
            Direction::Rotation(k) => format!("rot{}", k + 1),
        }
    }
}

/// Step schedule `h0, h0/2, ...` for Richardson extrapolation of central differences.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct StepSchedule {
    pub h0: f64,
    pub levels: usize,
}

impl Default for StepSchedule {
    fn default() -> Self {
        Self { h0: 0.05, levels: 5 }
    }
}

/// Richardson-extrapolated central derivative of `F` at 0, with the last
/// table correction as an error estimate.
pub fn richardson(f: impl Fn(f64) -> Result<CVec>, s: StepSchedule) -> Result<(CVec, f64)> {
    let mut table: Vec<Vec<CVec>> = Vec::new();
    let mut h = s.h0;
    for i in 0..s.levels.max(2) {
        let d = (f(h)? - f(-h)?) / Complex64::from(2.0 * h);
        let mut row = vec![d];
        for j in 1..=i {
            let w = 4f64.powi(j as i32);
            let next = (&row[j - 1] * Complex64::from(w) - &table[i - 1][j - 1]) / Complex64::from(w - 1.0);
            row.push(next);
        }
        table.push(row);
        h /= 2.0;
    }
    let last = table.last().expect("at least two levels");
    let n = last.len();
    let est = (&last[n - 1] - &last[n - 2]).camax();
    Ok((last[n - 1].clone(), est))
}

/// For each of the ten directions, `max_q |i d/dε (U f)(q) - (X f)(q)|`.
pub fn extract_generators(gens: &Generators, f: &TestFunction, points: &[Vec3], s: StepSchedule) -> Result<CheckReport> {
    let fv = |q: &Vec3| f.value(q);
    let mut per = std::collections::BTreeMap::new();
    let mut worst: f64 = 0.0;
    for dir in Direction::all() {
        let x = dir.generator(gens);
        let mut w: f64 = 0.0;
        for q in points {
            let (d, _) = richardson(|e| act_value(gens, &dir.point(e), &fv, q), s)?;
            let lhs = d * Complex64::i();
            let rhs = x.apply(q, &f.value(q), &f.gradient(q));
            w = w.max((lhs - rhs).camax());
        }
        per.insert(dir.name(), w);
        worst = worst.max(w);
    }
    Ok(CheckReport::new("replab.extract-generators", Status::from_bool(worst < 1e-8), fmt_residual(worst))
        .param("M", gens.mass)
        .param("k", gens.k)
        .param("s", gens.spin.spin())
        .param("h0", s.h0)
        .param("levels", s.levels)
        .param("convention", "i d/de U(e) at 0: t->H, a_k->P_k, v_k->+L_k, rotation exp(e[e_k]x)->J_k")
        .artifact("directions", per))
}

/// `ω̃(g, g')` at numeric points:
/// `exp(-i k ln(1 + M v^2/2k) t') exp(-i M v·(R a') / (1 + M v^2/2k))`.
pub fn omega_point(mass: f64, k: f64, g: &GroupPointNR, h: &GroupPointNR) -> Complex64 {
    let x = mass * g.v.norm_squared() / (2.0 * k);
    let phase = -k * x.ln_1p() * h.t - mass * g.v.dot(&(g.r * h.a)) / (1.0 + x);
    Complex64::from_polar(1.0, phase)
}

/// `‖U(g)U(g')f - ω̃(g,g') U(gg')f‖ / ‖f‖` with the classical product `gg'`.
pub fn composition_defect_at(gens: &Generators, g: &GroupPointNR, h: &GroupPointNR, f: &TestFunction) -> Result<f64> {
    let fv = |q: &Vec3| f.value(q);
    let gh = g.compose(h);
    let w = omega_point(gens.mass, gens.k, g, h);
    let n0 = grid_for(f, f.center()).norm2(|q| Ok(f.value(q)))?.sqrt();
    let image = gh.r * f.center() - gh.v * gens.mass;
    let inner = |q: &Vec3| act_value(gens, h, &fv, q).expect("k > 0 has no excluded radius");
    let d = grid_for(f, image).norm2(|q| {
        let lhs = act_value(gens, g, &inner, q)?;
        let rhs = act_value(gens, &gh, &fv, q)? * w;
        Ok(lhs - rhs)
    })?;
    Ok(d.sqrt() / n0)
}

/// Defect over increasing `k`; the slope is fitted in log–log.
pub fn composition_defect(
    mass: f64,
    spin: &super::spin::SpinRep,
    ks: &[f64],
    g: &GroupPointNR,
    h: &GroupPointNR,
    f: &TestFunction,
) -> Result<ConvergenceReport> {
    if ks.windows(2).any(|w| w[1] <= w[0]) || ks.iter().any(|k| *k <= 0.0) {
        return Err(Error::Precondition("k ramp must be positive and strictly increasing".into()));
    }
    let errors: Vec<f64> = ks
        .iter()
        .map(|&k| composition_defect_at(&super::generators::build_generators(mass, k, spin)?, g, h, f))
        .collect::<Result<_>>()?;
    let last = *errors.last().unwrap_or(&0.0);
    Ok(ConvergenceReport::new(ks.to_vec(), errors, last))
}

/// Bargmann composition at `k_classical` to `tol`, and the boost × translation
/// defect slope over `ks` inside `[-1.3, -0.7]`.
pub fn composition_check(mass: f64, spin: &super::spin::SpinRep, ks: &[f64], k_classical: f64, seed: u64, tol: f64) -> Result<Vec<CheckReport>> {
    let f = TestFunction::random(spin.dim(), seed);
    let a = GroupPointNR::new(GroupPointNR::rotation(&Vec3::new(1.0, 0.0, 1.0), 0.5).r, Vec3::new(0.2, 0.1, 0.0), Vec3::new(0.3, -0.2, 0.4), 0.6)?;
    let b = GroupPointNR::new(GroupPointNR::rotation(&Vec3::new(0.0, 1.0, 0.0), -0.3).r, Vec3::new(-0.1, 0.2, 0.1), Vec3::new(0.5, 0.0, -0.2), 0.9)?;
    let gens = super::generators::build_generators(mass, k_classical, spin)?;
    let d = composition_defect_at(&gens, &a, &b, &f)?;
    let classical = CheckReport::new("replab.compose-classical", Status::from_bool(d < tol), fmt_residual(d))
        .param("M", mass)
        .param("k", k_classical)
        .param("s", spin.spin())
        .param("seed", seed);
    let ramp = composition_defect(mass, spin, ks, &GroupPointNR::boost(Vec3::new(0.2, 0.0, 0.0)), &GroupPointNR::translation(Vec3::new(1.0, 0.0, 0.0)), &f)?;
    let ok = (-1.3..=-0.7).contains(&ramp.slope);
    let slope = CheckReport::new("replab.compose-defect-slope", Status::from_bool(ok), fmt_residual(ramp.slope))
        .param("M", mass)
        .param("s", spin.spin())
        .param("seed", seed)
        .artifact("k", &ramp.grid)
        .artifact("defect", &ramp.errors);
    Ok(vec![classical, slope])
}
