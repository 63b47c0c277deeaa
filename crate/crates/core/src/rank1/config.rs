use std::collections::HashSet;

use num_bigint::BigUint;
use num_traits::pow;
use serde::{Deserialize, Serialize};

use super::descent::PowerTable;
use super::require_rank1;
use crate::error::Result;
use crate::matrix::Rank1Form;
use crate::words::{BinaryMorphism, Letter};

/// Hard cap on configurations visited by [`decide_pure`].
pub const DEFAULT_ITERATION_CAP: u64 = 1_000_000;

/// Where an internal chunk boundary falls: inside block `f(block_letter)` at `offset`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CutDescriptor {
    pub block_letter: Letter,
    pub offset: u64,
}

/// Cut descriptors of the `n − 1` internal cuts of `f^t(a)` and the `m − 1` of `f^t(b)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CutConfiguration {
    pub a_cuts: Vec<CutDescriptor>,
    pub b_cuts: Vec<CutDescriptor>,
}

impl CutConfiguration {
    /// The configuration one iteration later. A cut at offset `o` of `f(c)`
    /// moves to offset `(nA + mB)·o` of `f(f(c))`.
    pub fn advance(&self, f: &BinaryMorphism, form: &Rank1Form) -> CutConfiguration {
        let k = form.trace();
        let step = |d: &CutDescriptor| {
            let mut pos = k * d.offset;
            for y in f.image(d.block_letter).iter() {
                let len = f.image(y).len() as u64;
                if pos < len {
                    return CutDescriptor {
                        block_letter: y,
                        offset: pos,
                    };
                }
                pos -= len;
            }
            unreachable!("|f(f(c))| = trace·|f(c)| keeps the cut inside f(f(c))")
        };
        CutConfiguration {
            a_cuts: self.a_cuts.iter().map(step).collect(),
            b_cuts: self.b_cuts.iter().map(step).collect(),
        }
    }

    pub fn descriptors(&self) -> impl Iterator<Item = &CutDescriptor> {
        self.a_cuts.iter().chain(self.b_cuts.iter())
    }
}

/// `B·|p|_a − A·|p|_b` for the block prefix `p = pref_offset(f(block_letter))`.
///
/// A chunk between two cuts has `a`-count `A·len/(A+B)` plus the difference of
/// the balances at its ends divided by `A + B`; the outer ends of `f^t(a)`
/// and `f^t(b)` have balance 0. So all chunks are equivalent iff every cut
/// has balance 0.
pub fn cut_balance(f: &BinaryMorphism, form: &Rank1Form, cut: &CutDescriptor) -> i128 {
    let prefix = f.image(cut.block_letter).prefix(cut.offset as usize);
    form.b_weight as i128 * prefix.count(Letter::A) as i128 - form.a_weight as i128 * prefix.count(Letter::B) as i128
}

/// Chunk equivalence read off a configuration.
pub fn pure_from_configuration(f: &BinaryMorphism, form: &Rank1Form, config: &CutConfiguration) -> bool {
    config.descriptors().all(|d| cut_balance(f, form, d) == 0)
}

/// Configuration at level `t >= 1`, located by descent through `f^t = f ∘ f^(t−1)`.
pub fn configuration_of(f: &BinaryMorphism, form: &Rank1Form, t: u64) -> CutConfiguration {
    let mut table = PowerTable::new(f);
    configuration_with(&mut table, form, t)
}

fn configuration_with(table: &mut PowerTable<'_>, form: &Rank1Form, t: u64) -> CutConfiguration {
    let chunk = form.period_at(t);
    let mut cuts = |seed: Letter, pieces: u64| -> Vec<CutDescriptor> {
        (1..pieces)
            .map(|i| {
                let (block_letter, offset) = table
                    .locate_block(seed, t, &(&chunk * i))
                    .expect("internal cut lies inside f^t(seed)");
                CutDescriptor { block_letter, offset }
            })
            .collect()
    };
    let a_cuts = cuts(Letter::A, form.n);
    let b_cuts = cuts(Letter::B, form.m);
    CutConfiguration { a_cuts, b_cuts }
}

/// Whether the `n` chunks of `f^K(a)` and the `m` chunks of `f^K(b)` of length
/// `(A + B)(nA + mB)^(K−1)` are pairwise abelian equivalent. Chunk Parikh
/// vectors come from prefix queries; `f^K` is never built.
pub fn check_pure_at(f: &BinaryMorphism, form: &Rank1Form, k: u64) -> bool {
    let mut table = PowerTable::new(f);
    let chunk = form.period_at(k);
    let mut reference = None;
    for (seed, pieces) in [(Letter::A, form.n), (Letter::B, form.m)] {
        let mut previous = table
            .prefix_parikh(seed, k, &BigUint::from(0u32))
            .expect("empty prefix");
        for j in 1..=pieces {
            let current = table
                .prefix_parikh(seed, k, &(&chunk * j))
                .expect("chunk boundary within f^K(seed)");
            let piece = current.checked_sub(&previous).expect("prefix counts grow");
            match &reference {
                None => reference = Some(piece),
                Some(r) if *r != piece => return false,
                Some(_) => {}
            }
            previous = current;
        }
    }
    true
}

/// Result of the pure abelian periodicity decision.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "outcome")]
pub enum PureOutcome {
    /// Chunks at level `K` are all equivalent; `period = gcd(|f^K(a)|, |f^K(b)|)`.
    PureAbelianPeriodic {
        #[serde(rename = "K")]
        k: u64,
        #[serde(with = "crate::bigstr")]
        period: BigUint,
    },
    /// The configuration sequence closed a cycle (or passed the bound) without a pure level.
    NotPure {
        #[serde(rename = "iterations")]
        iterations_used: u64,
        cycle_detected: bool,
    },
    /// The iteration cap was reached first.
    ResourceExhausted {
        #[serde(rename = "iterations")]
        iterations_used: u64,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PureVerdict {
    pub form: Rank1Form,
    #[serde(flatten)]
    pub outcome: PureOutcome,
    /// `(|f(a)| + |f(b)|)^(m+n−2)`, the a-priori bound on `K`.
    #[serde(with = "crate::bigstr")]
    pub bound: BigUint,
}

impl PureVerdict {
    pub fn is_pure(&self) -> bool {
        matches!(self.outcome, PureOutcome::PureAbelianPeriodic { .. })
    }
}

/// Decides pure abelian periodicity of `f^ω(a)` for a rank-one `f`.
pub fn decide_pure(f: &BinaryMorphism) -> Result<PureVerdict> {
    decide_pure_with_cap(f, DEFAULT_ITERATION_CAP)
}

pub fn decide_pure_with_cap(f: &BinaryMorphism, cap: u64) -> Result<PureVerdict> {
    f.require_prolongable()?;
    let form = require_rank1(f)?;
    let bound = pow(BigUint::from(f.size()), (form.n + form.m - 2) as usize);
    let mut seen = HashSet::new();
    let mut config = configuration_of(f, &form, 1);
    let mut t = 1u64;
    let outcome = loop {
        if seen.contains(&config) {
            break PureOutcome::NotPure {
                iterations_used: t,
                cycle_detected: true,
            };
        }
        if pure_from_configuration(f, &form, &config) {
            break PureOutcome::PureAbelianPeriodic {
                k: t,
                period: form.period_at(t),
            };
        }
        if BigUint::from(t) >= bound {
            break PureOutcome::NotPure {
                iterations_used: t,
                cycle_detected: false,
            };
        }
        if t >= cap {
            break PureOutcome::ResourceExhausted { iterations_used: t };
        }
        let next = config.advance(f, &form);
        seen.insert(config);
        config = next;
        t += 1;
    };
    Ok(PureVerdict { form, outcome, bound })
}
