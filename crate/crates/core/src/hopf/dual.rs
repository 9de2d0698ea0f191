//! Generators and relations of the dual (deformed enveloping) algebra.

use std::cell::RefCell;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::ncpoly::{il_frac, Letter, SlotCache, Tensor, Truncation};
use crate::scalars::{ExactComplex, GradedScalar};

/// Rotations `J`, boosts `L`, momenta `P`, energy `H`, in canonical order.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
pub enum DualGen {
    J(u8),
    L(u8),
    P(u8),
    H,
}

thread_local! {
    static CACHE: RefCell<SlotCache<DualGen>> = RefCell::new(SlotCache::default());
}

/// Levi-Civita symbol on indices 1..=3.
pub fn eps(i: u8, j: u8, k: u8) -> i64 {
    match (i, j, k) {
        (1, 2, 3) | (2, 3, 1) | (3, 1, 2) => 1,
        (1, 3, 2) | (3, 2, 1) | (2, 1, 3) => -1,
        _ => 0,
    }
}

fn i_times(n: i64) -> GradedScalar {
    GradedScalar::constant(ExactComplex::new(crate::scalars::q(0), crate::scalars::q(n)))
}

/// The index completing `{i, j}` to `{1, 2, 3}`; only meaningful for `i != j`.
fn third(i: u8, j: u8) -> u8 {
    6 - i - j
}

impl Letter for DualGen {
    fn degree(self) -> u32 {
        0
    }

    fn bracket(x: Self, y: Self) -> Vec<(GradedScalar, Vec<Self>)> {
        use DualGen::*;
        match (x, y) {
            (J(k), J(i)) if k != i => {
                let l = third(i, k);
                vec![(i_times(eps(k, i, l)), vec![J(l)])]
            }
            (L(k), J(i)) if k != i => {
                let j = third(i, k);
                vec![(i_times(-eps(i, k, j)), vec![L(j)])]
            }
            (P(k), J(i)) if k != i => {
                let j = third(i, k);
                vec![(i_times(-eps(i, k, j)), vec![P(j)])]
            }
            (H, L(i)) => vec![(i_times(-1), vec![P(i)])],
            (P(j), L(i)) => {
                let mut out = Vec::new();
                if i == j {
                    for m in 1..=3 {
                        out.push((il_frac(-1, 2), vec![P(m), P(m)]));
                    }
                }
                out.push((il_frac(1, 1), vec![P(i), P(j)]));
                out
            }
            _ => Vec::new(),
        }
    }

    fn with_cache<R>(f: impl FnOnce(&mut SlotCache<Self>) -> R) -> R {
        CACHE.with(|c| f(&mut c.borrow_mut()))
    }
}

impl fmt::Display for DualGen {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DualGen::J(i) => write!(f, "J[{i}]"),
            DualGen::L(i) => write!(f, "L[{i}]"),
            DualGen::P(i) => write!(f, "P[{i}]"),
            DualGen::H => write!(f, "H"),
        }
    }
}

impl DualGen {
    /// All 10 generators in canonical order.
    pub fn all() -> Vec<DualGen> {
        let mut out: Vec<DualGen> = (1..=3).map(DualGen::J).collect();
        out.extend((1..=3).map(DualGen::L));
        out.extend((1..=3).map(DualGen::P));
        out.push(DualGen::H);
        out
    }
}

pub type DualElement = Tensor<DualGen>;

pub fn dual_gen(n: u32, g: DualGen) -> DualElement {
    DualElement::generator(Truncation::lambda_only(n), g)
}

/// `Σ_m P[m] P[m]`
pub fn p_squared(n: u32) -> DualElement {
    let mut out = DualElement::zero(1, Truncation::lambda_only(n));
    for m in 1..=3 {
        out.add_canonical(vec![vec![DualGen::P(m), DualGen::P(m)]], &GradedScalar::one());
    }
    out
}

/// `e^{-L H}` expanded through `L^n`.
pub fn exp_minus_lambda_h(n: u32) -> DualElement {
    let x = dual_gen(n, DualGen::H).scale(&GradedScalar::lambda().neg());
    x.exp_series().expect("L-weighted exponent")
}
