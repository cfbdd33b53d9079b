//! Exact sums of squares for linear models and ANOVA.
//!
//! `rmfm` computes the restricted-model-minus-full-model (RMFM) numerator
//! sum of squares for a linear hypothesis `G'β = 0`, reports which part of
//! the hypothesis it actually tests, and builds the contrast-coded design
//! matrices needed to test ANOVA effects in unbalanced layouts. All linear
//! algebra is exact over the rationals; floating point appears only in the
//! F distribution functions.
//!
//! ```
//! use rmfm::effects::{CellLayout, ContrastScheme, EffectId};
//! use rmfm::hypothesis::{type_ss, ResponseVector, SsType};
//! use rmfm::exactlin::rat;
//!
//! let layout = CellLayout::balanced(vec![2, 2], 2).unwrap();
//! let y = ResponseVector::new([1, 1, 2, 2, 3, 3, 4, 4].map(rat).to_vec());
//! let a = EffectId::from_name("A", 2).unwrap();
//! let r = type_ss(SsType::Type2, &a, &layout, &y, &ContrastScheme::Helmert).unwrap();
//! assert_eq!(r.ss_num, rat(8));
//! ```
//!
//! The guide in `book/` walks through the concepts; its code samples are
//! compiled and run as doc-tests of this crate.

pub mod dominance;
pub mod effects;
pub mod error;
pub mod exactlin;
pub mod fdist;
pub mod fixtures;
pub mod hypothesis;
pub mod verify;

pub use error::{Error, Result};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/intro.md")]
    mod intro {}
    #[doc = include_str!("../../../book/src/exact-subspaces.md")]
    mod exact_subspaces {}
    #[doc = include_str!("../../../book/src/rmfm.md")]
    mod rmfm {}
    #[doc = include_str!("../../../book/src/effects.md")]
    mod effects {}
    #[doc = include_str!("../../../book/src/ss-types.md")]
    mod ss_types {}
    #[doc = include_str!("../../../book/src/dominance.md")]
    mod dominance {}
    #[doc = include_str!("../../../book/src/fdist.md")]
    mod fdist {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
