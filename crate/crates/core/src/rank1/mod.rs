//! The θ₂ = 0 machinery.
//!
//! A primitive binary morphism with singular incidence matrix has
//! `M_f = [[nA, mA], [nB, mB]]` with `gcd(m, n) = 1`. Every image `f(u)` then
//! has a Parikh vector proportional to `(A, B)`, block lengths scale by the
//! trace `nA + mB` under iteration, and `f^t(a)`, `f^t(b)` split into `n` and
//! `m` chunks of the common length `(A + B)(nA + mB)^(t−1)`.
//!
//! * [`decide_pure`] follows the configuration of chunk cut points through the
//!   iteration. The configuration sequence is deterministic and ranges over a
//!   finite set, so it cycles; pure abelian periodicity holds iff some
//!   configuration before the cycle closes has all chunks equivalent.
//! * [`eventual_check_at`] scans cyclic shifts of `f^K(a)`, `f^K(b)` for a
//!   witness of eventual abelian periodicity.
//! * [`block_position_residues`] is an empirical check of how block positions
//!   of proper occurrences spread over residue classes.

mod config;
mod descent;
mod eventual;
mod residues;

pub use config::{
    check_pure_at, configuration_of, cut_balance, decide_pure, decide_pure_with_cap, pure_from_configuration,
    CutConfiguration, CutDescriptor, PureOutcome, PureVerdict, DEFAULT_ITERATION_CAP,
};
pub use descent::{prefix_parikh, LevelCursor, PowerTable};
pub use eventual::{
    eventual_check_at, eventual_check_with_budget, eventual_conditions_at, EventualConditions, EventualWitness, DEFAULT_OFFSET_BUDGET,
};
pub use residues::{block_position_residues, coprime_residue_sets};

use num_bigint::BigUint;

use crate::error::{Error, Result};
use crate::matrix::{rank1_decompose, Rank1Form};
use crate::words::BinaryMorphism;

/// Rank-one form of `f`, or the reason it has none.
pub fn rank1_form(f: &BinaryMorphism) -> Result<Rank1Form> {
    rank1_decompose(&f.matrix())
}

/// Block-length `|f(u)| / (A + B)` of `f(u)`; exact under the rank-one form.
pub fn block_length(form: &Rank1Form, f: &BinaryMorphism, u: &crate::words::Word) -> BigUint {
    use crate::words::Letter;
    let image_len = BigUint::from(f.image_a().len()) * u.count(Letter::A)
        + BigUint::from(f.image_b().len()) * u.count(Letter::B);
    let unit = BigUint::from(form.unit());
    debug_assert!((&image_len % &unit) == BigUint::from(0u32));
    image_len / unit
}

pub(crate) fn require_rank1(f: &BinaryMorphism) -> Result<Rank1Form> {
    let m = f.matrix();
    if m.determinant() != 0 {
        return Err(Error::NotRankOne(m.determinant()));
    }
    rank1_decompose(&m)
}
