//! The contracted projective multiplier and its identities.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hopf::{apply_coproduct, coproduct_group, coproduct_group_letter, counit_group_word, reduce_ortho, GroupTensor};
use crate::ncpoly::{gen, set_boosts_zero, v_squared, GroupGen, NCElement, Truncation};
use crate::report::{CheckReport, Status};
use crate::scalars::{q_frac, ExactComplex, GradedScalar};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OmegaForm {
    ProductForm,
    SingleExponential,
}

#[derive(Clone, Debug, PartialEq)]
pub struct MultiplierSeries {
    pub body: GroupTensor,
    pub form: OmegaForm,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Convention {
    /// `(ω⊗1)(Δ⊗id)ω = (1⊗ω)(id⊗Δ)ω`
    Left,
    /// `((Δ⊗id)ω)(ω⊗1) = ((id⊗Δ)ω)(1⊗ω)`
    Right,
}

impl Convention {
    pub fn name(self) -> &'static str {
        match self {
            Convention::Left => "left",
            Convention::Right => "right",
        }
    }
}

fn c(re: i64, im: i64) -> GradedScalar {
    GradedScalar::constant(ExactComplex::new(crate::scalars::q(re), crate::scalars::q(im)))
}

fn slot1(e: &NCElement, g: GroupGen) -> GroupTensor {
    e.tensor(&gen(e.truncation(), g)).expect("same policy")
}

/// `M v^2 / 2`
fn half_mv2(t: Truncation) -> NCElement {
    v_squared(t).scale(&GradedScalar::monomial(ExactComplex::frac(1, 2), 0, 1))
}

/// `Σ_n s_n (L X)^n` for `X = M v^2 / 2`, with the `s_n` supplied.
fn series_in_lx(t: Truncation, coeff: impl Fn(u32) -> GradedScalar) -> NCElement {
    let x = half_mv2(t).scale(&GradedScalar::lambda());
    let mut out = NCElement::zero(1, t);
    let mut power = NCElement::one(1, t);
    for n in 0..=t.n {
        out = &out + &power.scale(&coeff(n));
        power = &power * &x;
    }
    out
}

/// `1 / (1 + L M v^2 / 2)` as a geometric series.
pub fn inverse_factor(t: Truncation) -> NCElement {
    series_in_lx(t, |n| c(if n % 2 == 0 { 1 } else { -1 }, 0))
}

/// `ln(1 + L X) / (L X)` as a power series.
pub fn log_ratio(t: Truncation) -> NCElement {
    series_in_lx(t, |n| {
        let s = if n % 2 == 0 { 1 } else { -1 };
        GradedScalar::constant(ExactComplex::frac(s, n as i64 + 1))
    })
}

/// `Y = (M v^2 / 2) ⊗ τ + M v^k R^k_i ⊗ a^i`
pub fn bargmann_exponent(t: Truncation) -> GroupTensor {
    let mut y = slot1(&half_mv2(t), GroupGen::Tau);
    let m = GradedScalar::mass();
    for i in 1..=3 {
        let mut vr = NCElement::zero(1, t);
        for k in 1..=3 {
            vr = &vr + &(&gen(t, GroupGen::V(k)) * &gen(t, GroupGen::R(k, i)));
        }
        y = &y + &slot1(&vr.scale(&m), GroupGen::A(i));
    }
    y
}

fn check_policy(t: Truncation) -> Result<()> {
    match t.d {
        Some(d) if d >= 2 => Ok(()),
        _ => Err(Error::Precondition(format!("multiplier needs a letter-degree bound D >= 2, got {:?}", t.d))),
    }
}

/// Product form with the imaginary unit on the second exponent optionally
/// dropped, as printed.
fn omega_product(t: Truncation, second_imaginary: bool) -> Result<GroupTensor> {
    check_policy(t)?;
    // k ln(1 + L X) = X ln(1 + L X) / (L X)
    let klog = &half_mv2(t) * &log_ratio(t);
    let first = slot1(&klog, GroupGen::Tau).scale(&c(0, -1));
    let m = GradedScalar::mass();
    let inv = inverse_factor(t);
    let mut second = GroupTensor::zero(2, t);
    for i in 1..=3 {
        let mut vr = NCElement::zero(1, t);
        for k in 1..=3 {
            vr = &vr + &(&gen(t, GroupGen::V(k)) * &gen(t, GroupGen::R(k, i)));
        }
        second = &second + &slot1(&(&vr * &inv).scale(&m), GroupGen::A(i));
    }
    let second = second.scale(&if second_imaginary { c(0, -1) } else { c(-1, 0) });
    first.exp_series()?.try_mul(&second.exp_series()?)
}

pub fn build_omega(t: Truncation) -> Result<MultiplierSeries> {
    Ok(MultiplierSeries { body: omega_product(t, true)?, form: OmegaForm::ProductForm })
}

/// The product form exactly as printed, without `i` in the second exponent.
pub fn build_omega_printed(t: Truncation) -> Result<GroupTensor> {
    omega_product(t, false)
}

pub fn build_omega_bch(t: Truncation) -> Result<MultiplierSeries> {
    check_policy(t)?;
    let f = log_ratio(t).tensor(&NCElement::one(1, t))?;
    let exponent = f.try_mul(&bargmann_exponent(t))?.scale(&c(0, -1));
    Ok(MultiplierSeries { body: exponent.exp_series()?, form: OmegaForm::SingleExponential })
}

/// `exp(-i Y)` computed with `L = 0`, i.e. with commuting coordinates.
pub fn classical_multiplier(d: u32) -> Result<GroupTensor> {
    let t = Truncation::new(0, d);
    bargmann_exponent(t).scale(&c(0, -1)).exp_series()
}

pub fn unitarity_residual(w: &GroupTensor) -> Result<GroupTensor> {
    let t = w.truncation();
    Ok(reduce_ortho(&w.try_mul(&w.star())?.try_sub(&GroupTensor::one(2, t))?))
}

/// `(ε⊗id)ω - 1` and `(id⊗ε)ω - 1`.
pub fn counit_residuals(w: &GroupTensor) -> (NCElement, NCElement) {
    let one = NCElement::one(1, w.truncation());
    let l = w.contract_slot(0, counit_group_word);
    let r = w.contract_slot(1, counit_group_word);
    (reduce_ortho(&(&l - &one)), reduce_ortho(&(&r - &one)))
}

pub fn equivalence_residual(t: Truncation) -> Result<GroupTensor> {
    Ok(reduce_ortho(&build_omega(t)?.body.try_sub(&build_omega_bch(t)?.body)?))
}

/// `ω` minus the classical multiplier, restricted to `L^0`.
pub fn classical_limit_residual(w: &GroupTensor) -> Result<GroupTensor> {
    let d = w.truncation().d.unwrap_or(0);
    let t0 = Truncation::new(0, d);
    let lowest = w.lambda_part(0).with_truncation(t0);
    Ok(reduce_ortho(&lowest.try_sub(&classical_multiplier(d)?)?))
}

fn delta_letter(t: Truncation) -> impl Fn(GroupGen) -> GroupTensor {
    move |g| coproduct_group_letter(t, g)
}

/// Residual of the 2-cocycle identity in three slots.
pub fn cocycle_residual(w: &GroupTensor, conv: Convention) -> Result<GroupTensor> {
    let t = w.truncation();
    let d = delta_letter(t);
    let w12 = w.embed(3, &[0, 1]);
    let w23 = w.embed(3, &[1, 2]);
    let dl = apply_coproduct(w, 0, &d)?;
    let dr = apply_coproduct(w, 1, &d)?;
    let (lhs, rhs) = match conv {
        Convention::Left => (w12.try_mul(&dl)?, w23.try_mul(&dr)?),
        Convention::Right => (dl.try_mul(&w12)?, dr.try_mul(&w23)?),
    };
    Ok(reduce_ortho(&lhs.try_sub(&rhs)?))
}

/// `[τ⊗1 + 1⊗τ, ω] - 2L ω Y (1/(1 + L M v^2/2) ⊗ 1)`, with `Y` as in
/// [`bargmann_exponent`]; `printed` doubles the `v^2 ⊗ τ` term of `Y`.
pub fn tau_commutator_residual(w: &GroupTensor, printed: bool) -> Result<GroupTensor> {
    let t = w.truncation();
    let tt = &gen(t, GroupGen::Tau).embed(2, &[0]) + &gen(t, GroupGen::Tau).embed(2, &[1]);
    let lhs = tt.try_mul(w)?.try_sub(&w.try_mul(&tt)?)?;
    let mut y = bargmann_exponent(t);
    if printed {
        y = &y + &slot1(&half_mv2(t), GroupGen::Tau);
    }
    let inv = inverse_factor(t).tensor(&NCElement::one(1, t))?;
    let rhs = w.try_mul(&y)?.try_mul(&inv)?.scale(&GradedScalar::monomial(ExactComplex::int(2), 1, 0));
    Ok(reduce_ortho(&lhs.try_sub(&rhs)?))
}

/// `[τ⊗1 + 1⊗τ, m] = i L (#a + #v) m` on each monomial.
pub fn grading_action(w: &GroupTensor) -> GroupTensor {
    let mut out = GroupTensor::zero(w.slots(), w.truncation());
    for (k, c) in w.terms() {
        let n = GroupTensor::key_degree(k) as i64;
        out.add_canonical(k.clone(), &c.mul_trunc(&GradedScalar::monomial(ExactComplex::new(crate::scalars::q(0), crate::scalars::q(n)), 1, 0), w.truncation().n));
    }
    out
}

fn require_unitary(z: &NCElement) -> Result<()> {
    let r = reduce_ortho(&z.try_mul(&z.star())?.try_sub(&NCElement::one(1, z.truncation()))?);
    if r.is_zero() {
        Ok(())
    } else {
        Err(Error::Precondition(format!("gauge element is not unitary at this truncation ({} residual terms)", r.len())))
    }
}

/// `ω'` with `(ζ⊗ζ) ω = ω' Δ(ζ)`, i.e. `ω' = (ζ⊗ζ) ω Δ(ζ*)`.
pub fn gauge_transform(w: &MultiplierSeries, z: &NCElement) -> Result<MultiplierSeries> {
    require_unitary(z)?;
    let zz = z.tensor(z)?;
    let body = zz.try_mul(&w.body)?.try_mul(&coproduct_group(&z.star())?)?;
    Ok(MultiplierSeries { body: reduce_ortho(&body), form: w.form })
}

/// `(ζ*⊗ζ*) Δ(ζ)`, a trivial multiplier.
pub fn trivial_multiplier(z: &NCElement) -> Result<MultiplierSeries> {
    require_unitary(z)?;
    let zs = z.star();
    let body = zs.tensor(&zs)?.try_mul(&coproduct_group(z)?)?;
    Ok(MultiplierSeries { body: reduce_ortho(&body), form: OmegaForm::ProductForm })
}

/// `ω` with every boost letter of the first slot set to zero.
pub fn at_zero_boost(w: &GroupTensor) -> GroupTensor {
    reduce_ortho(&set_boosts_zero(w, 0))
}

fn report(id: &str, residual: &GroupTensor) -> CheckReport {
    crate::hopf::residual_report(id, residual)
}

pub fn unitarity_check(t: Truncation) -> Result<Vec<CheckReport>> {
    Ok(vec![
        report("multiplier.unitarity", &unitarity_residual(&build_omega(t)?.body)?).param("form", "product"),
        report("multiplier.unitarity", &unitarity_residual(&build_omega_bch(t)?.body)?).param("form", "single-exponential"),
    ])
}

pub fn counit_check(t: Truncation) -> Result<CheckReport> {
    let (l, r) = counit_residuals(&build_omega(t)?.body);
    Ok(report("multiplier.counit", &l.try_add(&r)?))
}

pub fn equivalence_check(t: Truncation) -> Result<CheckReport> {
    Ok(report("multiplier.form-equivalence", &equivalence_residual(t)?))
}

pub fn classical_limit_check(t: Truncation) -> Result<CheckReport> {
    Ok(report("multiplier.classical-limit", &classical_limit_residual(&build_omega(t)?.body)?))
}

pub fn tau_commutator_check(t: Truncation) -> Result<Vec<CheckReport>> {
    let w = build_omega(t)?.body;
    let printed = tau_commutator_residual(&w, true)?;
    let mut probe = report("erratum.tau-commutator-printed", &printed);
    probe.status = Status::ReportOnly;
    Ok(vec![report("multiplier.tau-commutator", &tau_commutator_residual(&w, false)?), probe])
}

/// The printed product form without `i` is not unitary and misses the
/// classical limit; reported, never asserted.
pub fn missing_i_probe(t: Truncation) -> Result<CheckReport> {
    let printed = build_omega_printed(t)?;
    let unitary = unitarity_residual(&printed)?;
    let classical = classical_limit_residual(&printed)?;
    Ok(CheckReport::new("erratum.omega-missing-i", Status::ReportOnly, unitary.len().to_string())
        .param("N", t.n)
        .param("D", t.d.unwrap_or(0))
        .artifact("unitarity_residual_terms", unitary.len())
        .artifact("classical_limit_residual_terms", classical.len()))
}

/// Runs the cocycle identity in both slot conventions and reports which
/// one holds; neither is assumed.
pub fn cocycle_check(w: &MultiplierSeries, conv: Convention) -> Result<CheckReport> {
    let r = cocycle_residual(&w.body, conv)?;
    Ok(report("multiplier.cocycle", &r).param("convention", conv.name()))
}

pub fn cocycle_convention_report(t: Truncation) -> Result<Vec<CheckReport>> {
    let w = build_omega(t)?;
    let left = cocycle_residual(&w.body, Convention::Left)?;
    let right = cocycle_residual(&w.body, Convention::Right)?;
    let t0 = Truncation::new(0, t.d.unwrap_or(0));
    let c0 = MultiplierSeries { body: w.body.lambda_part(0).with_truncation(t0), form: w.form };
    let l0 = cocycle_residual(&c0.body, Convention::Left)?;
    let r0 = cocycle_residual(&c0.body, Convention::Right)?;
    let passing: Vec<&str> = [(Convention::Left, &left), (Convention::Right, &right)]
        .iter()
        .filter(|(_, r)| r.is_zero())
        .map(|(c, _)| c.name())
        .collect();
    let exactly_one = passing.len() == 1;
    Ok(vec![
        report("multiplier.cocycle", &left).param("convention", "left").with_status(left.is_zero() || !exactly_one, Status::ReportOnly),
        report("multiplier.cocycle", &right).param("convention", "right").with_status(right.is_zero() || !exactly_one, Status::ReportOnly),
        report("multiplier.cocycle-classical", &l0).param("convention", "left"),
        report("multiplier.cocycle-classical", &r0).param("convention", "right"),
        CheckReport::new("multiplier.cocycle-convention", Status::from_bool(exactly_one), passing.join(","))
            .param("N", t.n)
            .param("D", t.d.unwrap_or(0)),
    ])
}

trait WithStatus {
    fn with_status(self, keep: bool, otherwise: Status) -> Self;
}

impl WithStatus for CheckReport {
    /// The convention that fails is expected to fail; it becomes report-only.
    fn with_status(mut self, keep: bool, otherwise: Status) -> Self {
        if !keep {
            self.status = otherwise;
        }
        self
    }
}

/// `exp(i (num/den) L v^2)`, a unitary phase used as a gauge element.
pub fn quadratic_phase(t: Truncation, num: i64, den: i64) -> Result<NCElement> {
    v_squared(t).scale(&GradedScalar::monomial(ExactComplex::new(crate::scalars::q(0), q_frac(num, den)), 1, 0)).exp_series()
}
