//! Generators and commutation relations of the coordinate algebra.

use std::cell::RefCell;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::tensor::{Letter, SlotCache, Tensor, Truncation};
use crate::scalars::{ExactComplex, GradedScalar};

/// Coordinate functions, declared in canonical order: translations `a[i]`,
/// boosts `v[i]`, rotation entries `R[i,j]`, time `tau`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
pub enum GroupGen {
    A(u8),
    V(u8),
    R(u8, u8),
    Tau,
}

thread_local! {
    static CACHE: RefCell<SlotCache<GroupGen>> = RefCell::new(SlotCache::default());
}

/// `i L`
pub fn i_lambda() -> GradedScalar {
    GradedScalar::monomial(ExactComplex::i(), 1, 0)
}

pub(crate) fn il_frac(n: i64, d: i64) -> GradedScalar {
    GradedScalar::monomial(ExactComplex::new(crate::scalars::q(0), crate::scalars::q_frac(n, d)), 1, 0)
}

impl Letter for GroupGen {
    fn degree(self) -> u32 {
        matches!(self, GroupGen::A(_) | GroupGen::V(_)) as u32
    }

    fn bracket(x: Self, y: Self) -> Vec<(GradedScalar, Vec<Self>)> {
        use GroupGen::*;
        match (x, y) {
            (Tau, A(i)) => vec![(i_lambda(), vec![A(i)])],
            (Tau, V(i)) => vec![(i_lambda(), vec![V(i)])],
            (V(i), A(j)) => {
                let mut out = Vec::new();
                if i == j {
                    for m in 1..=3 {
                        out.push((il_frac(1, 2), vec![V(m), V(m)]));
                    }
                }
                out.push((il_frac(-1, 1), vec![V(i), V(j)]));
                out
            }
            (R(i, j), A(k)) => {
                let mut out = Vec::new();
                if i == k {
                    for m in 1..=3 {
                        out.push((i_lambda(), vec![V(m), R(m, j)]));
                    }
                }
                out.push((il_frac(-1, 1), vec![V(i), R(k, j)]));
                out
            }
            _ => Vec::new(),
        }
    }

    fn with_cache<R>(f: impl FnOnce(&mut SlotCache<Self>) -> R) -> R {
        CACHE.with(|c| f(&mut c.borrow_mut()))
    }
}

impl fmt::Display for GroupGen {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupGen::A(i) => write!(f, "a[{i}]"),
            GroupGen::V(i) => write!(f, "v[{i}]"),
            GroupGen::R(i, j) => write!(f, "R[{i},{j}]"),
            GroupGen::Tau => write!(f, "tau"),
        }
    }
}

impl GroupGen {
    /// All 16 generators in canonical order.
    pub fn all() -> Vec<GroupGen> {
        let mut out: Vec<GroupGen> = (1..=3).map(GroupGen::A).collect();
        out.extend((1..=3).map(GroupGen::V));
        for i in 1..=3 {
            for j in 1..=3 {
                out.push(GroupGen::R(i, j));
            }
        }
        out.push(GroupGen::Tau);
        out
    }

    pub fn is_boost(self) -> bool {
        matches!(self, GroupGen::V(_))
    }

    pub fn is_rotation(self) -> bool {
        matches!(self, GroupGen::R(..))
    }
}

/// Element of the coordinate algebra (one tensor slot).
pub type NCElement = Tensor<GroupGen>;

/// Drop every cached product of group words on this thread.
pub fn clear_cache() {
    GroupGen::with_cache(|c| c.clear());
}

pub fn gen(trunc: Truncation, g: GroupGen) -> NCElement {
    NCElement::generator(trunc, g)
}

/// `Σ_m v[m] v[m]`
pub fn v_squared(trunc: Truncation) -> NCElement {
    let mut out = NCElement::zero(1, trunc);
    for m in 1..=3 {
        out.add_canonical(vec![vec![GroupGen::V(m), GroupGen::V(m)]], &GradedScalar::one());
    }
    out
}

/// Kill every term containing a boost letter in the given slot.
pub fn set_boosts_zero(t: &Tensor<GroupGen>, slot: usize) -> Tensor<GroupGen> {
    t.filter_keys(|k| !k[slot].iter().any(|g| g.is_boost()))
}
