//! Abelian periodicity of fixed points of binary morphisms.
//!
//! Given a nonerasing morphism `f` on `{a, b}` prolongable on `a`, this crate
//! decides whether the infinite fixed point `f^ω(a)` is abelian periodic,
//! splitting the question by primitivity and by the second eigenvalue θ₂ of
//! the incidence matrix:
//!
//! * primitive, θ₂ ≠ 0: a syntactic test (`f(a) = a(ba)^k`, `f(b) = b(ab)^m`)
//!   settles it; every other morphism is refuted through its spectral class;
//! * primitive, θ₂ = 0: pure abelian periodicity is decided exactly by the
//!   cut-configuration automaton of [`rank1`]; eventual periodicity is
//!   searched for witnesses up to a bounded power;
//! * non-primitive: abelian periodicity coincides with periodicity, which is
//!   searched for with machine-checked certificates in [`periodicity`].
//!
//! Every verdict carries a certainty grade. Brute-force oracles in
//! [`abelian`] check the decisions on long prefixes, and [`lift`] re-encodes
//! rank-one fixed points as automatic sequences.
//!
//! ```
//! use abelian_morphic::{classify, parse_morphism, Answer, ClassifyOptions};
//!
//! let thue_morse = parse_morphism("a->ab; b->ba").unwrap();
//! let verdict = classify(&thue_morse, &ClassifyOptions::default()).unwrap();
//! assert_eq!(verdict.answer, Answer::PureAbelianPeriodic);
//! ```

pub mod abelian;
pub(crate) mod bigstr;
pub mod classify;
pub mod error;
pub mod lift;
pub mod matrix;
pub mod periodicity;
pub mod rank1;
pub mod words;

pub use classify::{classify, Answer, Certainty, ClassifyOptions, Reason, Verdict};
pub use error::{Error, Result};
pub use matrix::{
    letter_frequencies, rank1_decompose, spectral_profile, AbsClass, MorphismMatrix, Rank1Form,
    SpectralProfile, Theta2Kind,
};
pub use words::{
    conjugate_normalize, fixed_point_prefix, parikh, parse_morphism, power_lengths,
    BinaryMorphism, Letter, ParikhVector, Word,
};

// The guide's code listings are compiled and run as doc tests.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/words.md")]
    mod words {}
    #[doc = include_str!("../../../book/src/spectra.md")]
    mod spectra {}
    #[doc = include_str!("../../../book/src/rank-one.md")]
    mod rank_one {}
    #[doc = include_str!("../../../book/src/automatic-lift.md")]
    mod automatic_lift {}
    #[doc = include_str!("../../../book/src/periodicity.md")]
    mod periodicity {}
    #[doc = include_str!("../../../book/src/oracles.md")]
    mod oracles {}
    #[doc = include_str!("../../../book/src/classifier.md")]
    mod classifier {}
}
