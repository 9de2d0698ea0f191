//! Coproducts of both algebras, Hopf-axiom checks and the duality pairing.

mod checks;
mod coproduct;
mod dual;
mod pairing;

pub use checks::*;
pub use coproduct::{
    apply_coproduct, coproduct_dual, coproduct_group, coproduct_group_letter, coproduct_word, counit_dual_word, counit_group,
    counit_group_word, reduce_ortho, BoostCoproduct, DualCoproduct, GroupTensor, BOOST_COPRODUCT,
};
pub use dual::{dual_gen, eps, exp_minus_lambda_h, p_squared, DualElement, DualGen};
pub use pairing::{pair, pair_letters, pair_route, Route};
