//! Bounded-degree duality pairing between coordinates and generators.
//!
//! On letters: `<a^i, P_j> = <v^i, L_j> = i δ_ij`, `<τ, H> = i`,
//! `<R^a_b, J_k> = -i ε_abk`, everything else zero; `<x, 1>` and `<1, X>`
//! are the counits. Products are handled through the coproducts.

use super::coproduct::{coproduct_group_letter, coproduct_word, counit_dual_word, counit_group_word, DualCoproduct, BOOST_COPRODUCT};
use super::dual::{eps, DualElement, DualGen};
use crate::error::{Error, Result};
use crate::ncpoly::{GroupGen, NCElement, Truncation};
use crate::scalars::{ExactComplex, GradedScalar};

/// Which side's coproduct resolves products at the top level.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Route {
    /// Split the coordinate word and use `Δ` of the generator word.
    SplitCoordinates,
    /// Split the generator word and use `Δ` of the coordinate word.
    SplitGenerators,
}

fn i_times(n: i64) -> GradedScalar {
    GradedScalar::constant(ExactComplex::new(crate::scalars::q(0), crate::scalars::q(n)))
}

pub fn pair_letters(x: GroupGen, g: DualGen) -> GradedScalar {
    match (x, g) {
        (GroupGen::A(i), DualGen::P(j)) | (GroupGen::V(i), DualGen::L(j)) if i == j => i_times(1),
        (GroupGen::Tau, DualGen::H) => i_times(1),
        (GroupGen::R(a, b), DualGen::J(k)) => i_times(-eps(a, b, k)),
        _ => GradedScalar::zero(),
    }
}

struct Pairing {
    n: u32,
    group: Truncation,
    dual: DualCoproduct,
}

impl Pairing {
    fn new(n: u32) -> Self {
        Self { n, group: Truncation::lambda_only(n), dual: DualCoproduct::new(n, BOOST_COPRODUCT) }
    }

    fn words(&self, w: &[GroupGen], gw: &[DualGen], route: Route) -> Result<GradedScalar> {
        if w.is_empty() {
            return Ok(counit_dual_word(gw));
        }
        if gw.is_empty() {
            return Ok(counit_group_word(w));
        }
        if w.len() == 1 && gw.len() == 1 {
            return Ok(pair_letters(w[0], gw[0]));
        }
        let split_coords = match route {
            Route::SplitCoordinates => w.len() > 1,
            Route::SplitGenerators => gw.len() == 1,
        };
        let mut acc = GradedScalar::zero();
        if split_coords {
            let trunc = self.dual.truncation();
            let d = coproduct_word(trunc, gw, &|g| self.dual.letter(g))?;
            for (k, c) in d.terms() {
                let a = self.words(&w[..1], &k[0], route)?;
                if a.is_zero() {
                    continue;
                }
                let b = self.words(&w[1..], &k[1], route)?;
                acc.add_assign(&c.mul_trunc(&a, self.n).mul_trunc(&b, self.n));
            }
        } else {
            let trunc = self.group;
            let d = coproduct_word(trunc, w, &|g| coproduct_group_letter(trunc, g))?;
            for (k, c) in d.terms() {
                let a = self.words(&k[0], &gw[..1], route)?;
                if a.is_zero() {
                    continue;
                }
                let b = self.words(&k[1], &gw[1..], route)?;
                acc.add_assign(&c.mul_trunc(&a, self.n).mul_trunc(&b, self.n));
            }
        }
        Ok(acc)
    }
}

fn max_len<L>(terms: impl Iterator<Item = (L, usize)>) -> usize {
    terms.map(|t| t.1).max().unwrap_or(0)
}

/// `<x, X>`, bilinear, with both degrees at most `degree_bound <= 3`.
pub fn pair_route(x: &NCElement, big_x: &DualElement, degree_bound: usize, route: Route) -> Result<GradedScalar> {
    if degree_bound > 3 {
        return Err(Error::Precondition(format!("pairing degree bound {degree_bound} exceeds 3")));
    }
    let dx = max_len(x.terms().map(|(k, _)| ((), k[0].len())));
    let dg = max_len(big_x.terms().map(|(k, _)| ((), k[0].len())));
    if dx > degree_bound || dg > degree_bound {
        return Err(Error::Precondition(format!("pairing inputs of degree {dx}/{dg} exceed bound {degree_bound}")));
    }
    let n = x.truncation().n.min(big_x.truncation().n);
    let p = Pairing::new(n);
    let mut acc = GradedScalar::zero();
    for (k1, c1) in x.terms() {
        for (k2, c2) in big_x.terms() {
            let v = p.words(&k1[0], &k2[0], route)?;
            acc.add_assign(&c1.mul_trunc(c2, n).mul_trunc(&v, n));
        }
    }
    Ok(acc)
}

pub fn pair(x: &NCElement, big_x: &DualElement, degree_bound: usize) -> Result<GradedScalar> {
    pair_route(x, big_x, degree_bound, Route::SplitCoordinates)
}
