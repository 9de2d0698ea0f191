//! Coproducts, counits and reduction modulo the orthogonality relations.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::dual::{eps, exp_minus_lambda_h, DualElement, DualGen};
use crate::error::Result;
use crate::ncpoly::{GroupGen, Letter, NCElement, Tensor, Truncation};
use crate::scalars::ortho::reduce_shared;
use crate::scalars::{ExactComplex, GradedScalar};

pub type GroupTensor = Tensor<GroupGen>;

fn term(trunc: Truncation, words: &[&[GroupGen]]) -> GroupTensor {
    let w: Vec<Vec<GroupGen>> = words.iter().map(|s| s.to_vec()).collect();
    GroupTensor::from_words(trunc, &w, GradedScalar::one())
}

/// `Δ` of a single coordinate, as a two-slot element.
pub fn coproduct_group_letter(trunc: Truncation, g: GroupGen) -> GroupTensor {
    use GroupGen::*;
    let mut out = GroupTensor::zero(2, trunc);
    match g {
        R(i, j) => {
            for k in 1..=3 {
                out = &out + &term(trunc, &[&[R(i, k)], &[R(k, j)]]);
            }
        }
        V(i) => {
            for j in 1..=3 {
                out = &out + &term(trunc, &[&[R(i, j)], &[V(j)]]);
            }
            out = &out + &term(trunc, &[&[V(i)], &[]]);
        }
        A(i) => {
            for j in 1..=3 {
                out = &out + &term(trunc, &[&[R(i, j)], &[A(j)]]);
            }
            out = &out + &term(trunc, &[&[V(i)], &[Tau]]);
            out = &out + &term(trunc, &[&[A(i)], &[]]);
        }
        Tau => {
            out = &out + &term(trunc, &[&[Tau], &[]]);
            out = &out + &term(trunc, &[&[], &[Tau]]);
        }
    }
    out
}

/// `Δ` of a word, as the product of the letter images.
pub fn coproduct_word<L: Letter>(trunc: Truncation, w: &[L], letter: &impl Fn(L) -> Tensor<L>) -> Result<Tensor<L>> {
    let mut acc = Tensor::one(2, trunc);
    for &g in w {
        acc = acc.try_mul(&letter(g))?;
    }
    Ok(acc)
}

pub fn coproduct_group(e: &NCElement) -> Result<GroupTensor> {
    let trunc = e.truncation();
    apply_coproduct(e, 0, &|g| coproduct_group_letter(trunc, g))
}

/// Apply `Δ` (given on letters) to slot `s` of a tensor.
pub fn apply_coproduct<L: Letter>(t: &Tensor<L>, s: usize, letter: &impl Fn(L) -> Tensor<L>) -> Result<Tensor<L>> {
    let trunc = t.truncation();
    t.map_slot(s, 2, |w| coproduct_word(trunc, w, letter))
}

/// Index pattern and coefficient used for the `J ⊗ P` correction in `Δ L_i`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BoostCoproduct {
    /// `-(i L) Σ_{jk} ε_{ijk} J_i ⊗ P_k`, read literally.
    Literal,
    /// `-(i L) Σ_{jk} ε_{ijk} J_j ⊗ P_k`.
    ContractedImaginary,
    /// `-L Σ_{jk} ε_{ijk} J_j ⊗ P_k`.
    ContractedReal,
    /// `+L Σ_{jk} ε_{ijk} J_j ⊗ P_k`.
    ContractedRealFlipped,
}

impl BoostCoproduct {
    pub fn all() -> [BoostCoproduct; 4] {
        [
            BoostCoproduct::Literal,
            BoostCoproduct::ContractedImaginary,
            BoostCoproduct::ContractedReal,
            BoostCoproduct::ContractedRealFlipped,
        ]
    }

    pub fn name(self) -> &'static str {
        match self {
            BoostCoproduct::Literal => "literal",
            BoostCoproduct::ContractedImaginary => "contracted-imaginary",
            BoostCoproduct::ContractedReal => "contracted-real",
            BoostCoproduct::ContractedRealFlipped => "contracted-real-flipped",
        }
    }

    /// Index carried by `J` and coefficient of `ε_{ijk} J ⊗ P_k`.
    fn term(self, i: u8, j: u8) -> (u8, ExactComplex) {
        match self {
            BoostCoproduct::Literal => (i, -ExactComplex::i()),
            BoostCoproduct::ContractedImaginary => (j, -ExactComplex::i()),
            BoostCoproduct::ContractedReal => (j, ExactComplex::int(-1)),
            BoostCoproduct::ContractedRealFlipped => (j, ExactComplex::one()),
        }
    }
}

/// The variant under which all Hopf checks pass.
pub const BOOST_COPRODUCT: BoostCoproduct = BoostCoproduct::ContractedReal;

/// Memoized `Δ` on dual generators at a fixed `L`-order.
pub struct DualCoproduct {
    n: u32,
    variant: BoostCoproduct,
    images: HashMap<DualGen, DualElement>,
}

impl DualCoproduct {
    pub fn new(n: u32, variant: BoostCoproduct) -> Self {
        let mut me = Self { n, variant, images: HashMap::new() };
        for g in DualGen::all() {
            let img = me.build(g);
            me.images.insert(g, img);
        }
        me
    }

    pub fn truncation(&self) -> Truncation {
        Truncation::lambda_only(self.n)
    }

    fn build(&self, g: DualGen) -> DualElement {
        let trunc = self.truncation();
        let one = |x: DualGen| DualElement::from_words(trunc, &[vec![], vec![x]], GradedScalar::one());
        let left = |x: DualGen| DualElement::from_words(trunc, &[vec![x], vec![]], GradedScalar::one());
        let e = exp_minus_lambda_h(self.n);
        let x_tensor_e = |x: DualGen| DualElement::from_words(trunc, &[vec![x]], GradedScalar::one()).tensor(&e).expect("same policy");
        match g {
            DualGen::J(_) | DualGen::H => &left(g) + &one(g),
            DualGen::P(_) => &one(g) + &x_tensor_e(g),
            DualGen::L(i) => {
                let mut out = &one(g) + &x_tensor_e(g);
                for j in 1..=3u8 {
                    for k in 1..=3u8 {
                        let s = eps(i, j, k);
                        if s == 0 {
                            continue;
                        }
                        let (jj, c) = self.variant.term(i, j);
                        let c = GradedScalar::monomial(c.scale(&crate::scalars::q(s)), 1, 0);
                        out = &out + &DualElement::from_words(trunc, &[vec![DualGen::J(jj)], vec![DualGen::P(k)]], c);
                    }
                }
                out
            }
        }
    }

    pub fn letter(&self, g: DualGen) -> DualElement {
        self.images[&g].clone()
    }

    pub fn apply(&self, e: &DualElement) -> Result<DualElement> {
        self.apply_slot(e, 0)
    }

    pub fn apply_slot(&self, e: &DualElement, s: usize) -> Result<DualElement> {
        apply_coproduct(e, s, &|g| self.letter(g))
    }
}

pub fn coproduct_dual(e: &DualElement, n: u32) -> Result<DualElement> {
    DualCoproduct::new(n, BOOST_COPRODUCT).apply(&e.with_truncation(Truncation::lambda_only(n)))
}

/// `ε` on a group word: 1 on products of diagonal rotation entries, else 0.
pub fn counit_group_word(w: &[GroupGen]) -> GradedScalar {
    if w.iter().all(|g| matches!(g, GroupGen::R(i, j) if i == j)) {
        GradedScalar::one()
    } else {
        GradedScalar::zero()
    }
}

pub fn counit_group(e: &NCElement) -> GradedScalar {
    let mut out = GradedScalar::zero();
    for (k, c) in e.terms() {
        out.add_assign(&c.mul_trunc(&counit_group_word(&k[0]), e.truncation().n));
    }
    out
}

/// `ε` on a dual word: 1 on the empty word only.
pub fn counit_dual_word(w: &[DualGen]) -> GradedScalar {
    if w.is_empty() {
        GradedScalar::one()
    } else {
        GradedScalar::zero()
    }
}

fn r_index(g: GroupGen) -> Option<u8> {
    match g {
        GroupGen::R(i, j) => Some(3 * (i - 1) + (j - 1)),
        _ => None,
    }
}

fn r_from_index(idx: u8) -> GroupGen {
    GroupGen::R(idx / 3 + 1, idx % 3 + 1)
}

/// Reduce each slot's rotation sub-word modulo the orthogonality relations.
///
/// Canonical words factor as translations, boosts, rotations, time, so the
/// rotation block is a commutative monomial that can be replaced by its
/// normal form without leaving canonical order.
pub fn reduce_ortho(t: &GroupTensor) -> GroupTensor {
    let mut memo: HashMap<Vec<GroupGen>, Vec<(Vec<GroupGen>, ExactComplex)>> = HashMap::new();
    let mut slot_nf = |w: &Vec<GroupGen>| -> Vec<(Vec<GroupGen>, ExactComplex)> {
        memo.entry(w.clone())
            .or_insert_with(|| {
                let start = w.iter().position(|g| g.is_rotation()).unwrap_or(w.len());
                let end = w.iter().rposition(|g| g.is_rotation()).map_or(start, |p| p + 1);
                if start == end {
                    return vec![(w.clone(), ExactComplex::one())];
                }
                let local: Vec<u8> = w[start..end].iter().filter_map(|&g| r_index(g)).collect();
                reduce_shared(&local)
                    .iter()
                    .map(|(m, c)| {
                        let mut nw = w[..start].to_vec();
                        nw.extend(m.iter().map(|&i| r_from_index(i)));
                        nw.extend_from_slice(&w[end..]);
                        (nw, ExactComplex::real(c.clone()))
                    })
                    .collect()
            })
            .clone()
    };
    let mut out = GroupTensor::zero(t.slots(), t.truncation());
    for (k, c) in t.terms() {
        let mut partial: Vec<(Vec<Vec<GroupGen>>, ExactComplex)> = vec![(Vec::new(), ExactComplex::one())];
        for w in k {
            let nf = slot_nf(w);
            let mut next = Vec::with_capacity(partial.len() * nf.len());
            for (pk, pc) in &partial {
                for (nw, nc) in &nf {
                    let mut key = pk.clone();
                    key.push(nw.clone());
                    next.push((key, pc * nc));
                }
            }
            partial = next;
        }
        for (key, s) in partial {
            out.add_canonical(key, &c.scale(&s));
        }
    }
    out
}
