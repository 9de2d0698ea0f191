//! Hopf-axiom checks on generators and presentation relations.

use serde::Serialize;

use super::coproduct::{
    apply_coproduct, coproduct_group, coproduct_group_letter, counit_dual_word, counit_group_word, reduce_ortho, BoostCoproduct,
    DualCoproduct, GroupTensor,
};
use super::dual::{DualElement, DualGen};
use crate::error::Result;
use crate::ncpoly::{GroupGen, Letter, NCElement, Tensor, Truncation};
use crate::report::{CheckReport, Status};

/// Largest number of surviving residual terms copied into a report.
const SHOWN_TERMS: usize = 12;

#[derive(Serialize)]
struct ResidualSummary {
    terms: usize,
    shown: Vec<String>,
    dropped: u64,
}

/// Pass/fail report for a symbolic residual that must vanish.
pub fn residual_report<L: Letter>(id: &str, residual: &Tensor<L>) -> CheckReport {
    let shown = residual
        .terms()
        .take(SHOWN_TERMS)
        .map(|(k, c)| format!("({c})*{}", Tensor::<L>::render_key(k)))
        .collect();
    let t = residual.truncation();
    CheckReport::new(id, Status::from_bool(residual.is_zero()), residual.len().to_string())
        .param("N", t.n)
        .param("D", t.d.map_or("none".to_string(), |d| d.to_string()))
        .artifact("residual", ResidualSummary { terms: residual.len(), shown, dropped: residual.dropped() })
}

fn group_delta(trunc: Truncation) -> impl Fn(GroupGen) -> GroupTensor {
    move |g| coproduct_group_letter(trunc, g)
}

pub fn coassociativity_residual_group(g: GroupGen, trunc: Truncation) -> Result<GroupTensor> {
    let d = coproduct_group_letter(trunc, g);
    let delta = group_delta(trunc);
    let left = apply_coproduct(&d, 0, &delta)?;
    let right = apply_coproduct(&d, 1, &delta)?;
    Ok(reduce_ortho(&left.try_sub(&right)?))
}

pub fn coassociativity_check_group(g: GroupGen, trunc: Truncation) -> Result<CheckReport> {
    let r = coassociativity_residual_group(g, trunc)?;
    Ok(residual_report("hopf.coassociativity", &r).param("generator", g))
}

pub fn coassociativity_residual_dual(g: DualGen, cop: &DualCoproduct) -> Result<DualElement> {
    let d = cop.letter(g);
    let left = cop.apply_slot(&d, 0)?;
    let right = cop.apply_slot(&d, 1)?;
    left.try_sub(&right)
}

pub fn coassociativity_check_dual(g: DualGen, cop: &DualCoproduct) -> Result<CheckReport> {
    let r = coassociativity_residual_dual(g, cop)?;
    Ok(residual_report("hopf.coassociativity", &r).param("generator", g))
}

/// `[Δx, Δy] - Δ([x, y])` modulo the orthogonality relations.
pub fn relation_residual_group(x: GroupGen, y: GroupGen, trunc: Truncation) -> Result<GroupTensor> {
    let dx = coproduct_group_letter(trunc, x);
    let dy = coproduct_group_letter(trunc, y);
    let lhs = dx.commutator(&dy)?;
    let c = NCElement::generator(trunc, x).commutator(&NCElement::generator(trunc, y))?;
    let rhs = coproduct_group(&c)?;
    Ok(reduce_ortho(&lhs.try_sub(&rhs)?))
}

pub fn relation_hom_check_group(x: GroupGen, y: GroupGen, trunc: Truncation) -> Result<CheckReport> {
    let r = relation_residual_group(x, y, trunc)?;
    Ok(residual_report("hopf.relation", &r).param("pair", format!("{x},{y}")))
}

pub fn relation_residual_dual(x: DualGen, y: DualGen, cop: &DualCoproduct) -> Result<DualElement> {
    let trunc = cop.truncation();
    let lhs = cop.letter(x).commutator(&cop.letter(y))?;
    let c = DualElement::generator(trunc, x).commutator(&DualElement::generator(trunc, y))?;
    lhs.try_sub(&cop.apply(&c)?)
}

pub fn relation_hom_check_dual(x: DualGen, y: DualGen, cop: &DualCoproduct) -> Result<CheckReport> {
    let r = relation_residual_dual(x, y, cop)?;
    Ok(residual_report("hopf.relation", &r).param("pair", format!("{x},{y}")))
}

/// `Δ(x*) - (Δx)*` for a self-adjoint generator.
pub fn star_residual_group(g: GroupGen, trunc: Truncation) -> Result<GroupTensor> {
    let d = coproduct_group_letter(trunc, g);
    let lhs = coproduct_group(&NCElement::generator(trunc, g).star())?;
    lhs.try_sub(&d.star())
}

pub fn star_residual_dual(g: DualGen, cop: &DualCoproduct) -> Result<DualElement> {
    let trunc = cop.truncation();
    let lhs = cop.apply(&DualElement::generator(trunc, g).star())?;
    lhs.try_sub(&cop.letter(g).star())
}

/// `(ε⊗id)Δg - g` and `(id⊗ε)Δg - g`, modulo the orthogonality relations.
pub fn counit_residuals_group(g: GroupGen, trunc: Truncation) -> (NCElement, NCElement) {
    let d = coproduct_group_letter(trunc, g);
    let gen = NCElement::generator(trunc, g);
    let left = d.contract_slot(0, counit_group_word);
    let right = d.contract_slot(1, counit_group_word);
    (reduce_ortho(&(&left - &gen)), reduce_ortho(&(&right - &gen)))
}

pub fn counit_residuals_dual(g: DualGen, cop: &DualCoproduct) -> (DualElement, DualElement) {
    let d = cop.letter(g);
    let gen = DualElement::generator(cop.truncation(), g);
    (&d.contract_slot(0, counit_dual_word) - &gen, &d.contract_slot(1, counit_dual_word) - &gen)
}

/// All unordered pairs of distinct letters.
pub fn pairs<L: Copy>(all: &[L]) -> Vec<(L, L)> {
    let mut out = Vec::new();
    for (i, &x) in all.iter().enumerate() {
        for &y in &all[i + 1..] {
            out.push((x, y));
        }
    }
    out
}

/// Every Hopf check on both algebras: relations, coassociativity, star and
/// counit compatibility.
pub fn hopf_suite(group: Truncation, dual_n: u32) -> Result<Vec<CheckReport>> {
    let mut out = Vec::new();
    for (x, y) in pairs(&GroupGen::all()) {
        out.push(relation_hom_check_group(x, y, group)?.param("algebra", "group"));
    }
    for g in GroupGen::all() {
        out.push(coassociativity_check_group(g, group)?.param("algebra", "group"));
        out.push(residual_report("hopf.star", &star_residual_group(g, group)?).param("generator", g).param("algebra", "group"));
        let (l, r) = counit_residuals_group(g, group);
        out.push(residual_report("hopf.counit", &l.try_add(&r)?).param("generator", g).param("algebra", "group"));
    }
    let cop = DualCoproduct::new(dual_n, super::coproduct::BOOST_COPRODUCT);
    for (x, y) in pairs(&DualGen::all()) {
        out.push(relation_hom_check_dual(x, y, &cop)?.param("algebra", "dual"));
    }
    for g in DualGen::all() {
        out.push(coassociativity_check_dual(g, &cop)?.param("algebra", "dual"));
        out.push(residual_report("hopf.star", &star_residual_dual(g, &cop)?).param("generator", g).param("algebra", "dual"));
        let (l, r) = counit_residuals_dual(g, &cop);
        out.push(residual_report("hopf.counit", &l.try_add(&r)?).param("generator", g).param("algebra", "dual"));
    }
    Ok(out)
}

/// Which index pattern for the boost coproduct passes every dual check.
pub fn boost_coproduct_probe(n: u32) -> Result<Vec<(BoostCoproduct, usize)>> {
    let mut out = Vec::new();
    for v in BoostCoproduct::all() {
        let cop = DualCoproduct::new(n, v);
        let mut failures = 0;
        for (x, y) in pairs(&DualGen::all()) {
            if !relation_residual_dual(x, y, &cop)?.is_zero() {
                failures += 1;
            }
        }
        for g in DualGen::all() {
            if !coassociativity_residual_dual(g, &cop)?.is_zero() {
                failures += 1;
            }
        }
        out.push((v, failures));
    }
    Ok(out)
}

pub fn boost_coproduct_report(n: u32) -> Result<CheckReport> {
    let probe = boost_coproduct_probe(n)?;
    let passing: Vec<&str> = probe.iter().filter(|(_, f)| *f == 0).map(|(v, _)| v.name()).collect();
    let table: Vec<(String, usize)> = probe.iter().map(|(v, f)| (v.name().to_string(), *f)).collect();
    Ok(CheckReport::new("hopf.boost-coproduct-index", Status::ReportOnly, passing.join(","))
        .param("N", n)
        .artifact("failures_by_variant", table))
}
