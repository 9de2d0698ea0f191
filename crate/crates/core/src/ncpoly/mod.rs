//! Noncommutative coordinate algebra: normal ordering, star, exponentials.

mod group;
mod parse;
pub mod rewrite;
mod tensor;

pub use parse::parse_element;
pub use group::{clear_cache, gen, i_lambda, set_boosts_zero, v_squared, GroupGen, NCElement};
pub(crate) use group::il_frac;
pub use tensor::{is_canonical, mul_words, normal_form_word, Letter, SlotCache, Tensor, Truncation, Word};

use crate::error::Result;
use crate::scalars::GradedScalar;

/// Normal form of `Σ c w` for arbitrary words.
pub fn normal_form(trunc: Truncation, terms: &[(GradedScalar, Vec<GroupGen>)]) -> NCElement {
    let mut out = NCElement::zero(1, trunc);
    for (c, w) in terms {
        out = &out + &NCElement::from_words(trunc, &[w.clone()], c.clone());
    }
    out
}

pub fn mul(a: &NCElement, b: &NCElement) -> Result<NCElement> {
    a.try_mul(b)
}

pub fn commutator(a: &NCElement, b: &NCElement) -> Result<NCElement> {
    a.commutator(b)
}

pub fn star(e: &NCElement) -> NCElement {
    e.star()
}

pub fn exp_series(x: &NCElement) -> Result<NCElement> {
    x.exp_series()
}
