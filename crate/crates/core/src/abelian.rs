//! Brute-force oracles over finite prefixes.
//!
//! Nothing here proves a property of an infinite word. The scans give
//! evidence on a horizon, which is how the exact procedures are cross-checked.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{spectral_profile, Theta2Kind};
use crate::words::{BinaryMorphism, Letter, Word};

/// `(r, p)` valid on the first `horizon` letters: every complete block
/// `s[r + kp .. r + (k+1)p)` inside the horizon has the same Parikh vector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct AbelianPeriodWitness {
    pub period: usize,
    pub preperiod: usize,
    pub horizon: usize,
}

/// Running `a`-counts of a word: `counts[i] = |pref_i|_a`.
#[derive(Debug, Clone)]
pub struct PrefixCounts {
    counts: Vec<u32>,
}

impl PrefixCounts {
    pub fn new(source: &Word) -> PrefixCounts {
        PrefixCounts {
            counts: source.prefix_a_counts(),
        }
    }

    /// Number of letters covered.
    pub fn len(&self) -> usize {
        self.counts.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// `|s[i..j)|_a`.
    pub fn count_a(&self, i: usize, j: usize) -> u32 {
        self.counts[j] - self.counts[i]
    }

    /// Whether all complete length-`p` blocks from `r` on are abelian equivalent.
    /// Blocks of one length have equal Parikh vectors iff their `a`-counts agree.
    pub fn holds(&self, r: usize, p: usize) -> bool {
        assert!(p > 0, "period must be positive");
        if r + p > self.len() {
            return true;
        }
        let first = self.count_a(r, r + p);
        (r..=self.len() - p)
            .step_by(p)
            .all(|i| self.count_a(i, i + p) == first)
    }
}

/// Whether `(r, p)` is an abelian period on the whole of `source`.
pub fn abelian_period_holds(source: &Word, r: usize, p: usize) -> bool {
    PrefixCounts::new(source).holds(r, p)
}

/// Lexicographically least `(r, p)` with `r <= max_r`, `1 <= p <= max_p`
/// that holds on all of `source`. The prefix must contain at least two
/// complete blocks for every candidate.
pub fn abelian_period_oracle(source: &Word, max_p: usize, max_r: usize) -> Result<Option<AbelianPeriodWitness>> {
    let need = 2 * max_p + max_r;
    if source.len() < need {
        return Err(Error::HorizonTooShort {
            need,
            have: source.len(),
        });
    }
    let counts = PrefixCounts::new(source);
    Ok(oracle_on(&counts, max_p, max_r))
}

pub(crate) fn oracle_on(counts: &PrefixCounts, max_p: usize, max_r: usize) -> Option<AbelianPeriodWitness> {
    (0..=max_r).find_map(|r| {
        (1..=max_p).find(|&p| counts.holds(r, p)).map(|p| AbelianPeriodWitness {
            period: p,
            preperiod: r,
            horizon: counts.len(),
        })
    })
}

/// Per-length abelian complexity and imbalance of a prefix.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComplexityProfile {
    pub horizon: usize,
    pub rows: Vec<ComplexityRow>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComplexityRow {
    pub length: usize,
    /// Distinct Parikh vectors among length-`length` windows.
    pub abelian_complexity: usize,
    /// Max minus min of `|w|_a` over those windows.
    pub imbalance: usize,
}

impl ComplexityProfile {
    pub fn max_imbalance(&self) -> usize {
        self.rows.iter().map(|r| r.imbalance).max().unwrap_or(0)
    }

    pub fn row(&self, length: usize) -> Option<&ComplexityRow> {
        self.rows.get(length.checked_sub(1)?)
    }

    /// CSV with header `length,complexity,imbalance`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("length,complexity,imbalance\n");
        for row in &self.rows {
            let _ = writeln!(out, "{},{},{}", row.length, row.abelian_complexity, row.imbalance);
        }
        out
    }
}

/// Abelian complexity and imbalance for window lengths `1..=nmax`, each over
/// all windows inside `source`.
pub fn complexity_profile(source: &Word, nmax: usize) -> Result<ComplexityProfile> {
    let need = 2 * nmax;
    if source.len() < need {
        return Err(Error::HorizonTooShort {
            need,
            have: source.len(),
        });
    }
    let counts = PrefixCounts::new(source);
    let rows = (1..=nmax)
        .into_par_iter()
        .map(|length| complexity_row(&counts, length))
        .collect();
    Ok(ComplexityProfile {
        horizon: source.len(),
        rows,
    })
}

fn complexity_row(counts: &PrefixCounts, length: usize) -> ComplexityRow {
    let mut seen = vec![false; length + 1];
    let (mut lo, mut hi) = (u32::MAX, 0);
    let mut distinct = 0;
    for i in 0..=counts.len() - length {
        let c = counts.count_a(i, i + length);
        if !seen[c as usize] {
            seen[c as usize] = true;
            distinct += 1;
        }
        lo = lo.min(c);
        hi = hi.max(c);
    }
    ComplexityRow {
        length,
        abelian_complexity: distinct,
        imbalance: (hi - lo) as usize,
    }
}

/// Largest imbalance over window lengths `1..=nmax` (clamped to half the prefix).
pub fn max_imbalance(source: &Word, nmax: usize) -> usize {
    let nmax = nmax.min(source.len() / 2);
    if nmax == 0 {
        return 0;
    }
    complexity_profile(source, nmax).map(|p| p.max_imbalance()).unwrap_or(0)
}

/// Heights `y_k = |pref_k|_a − |pref_k|_b` for `k = 0..=|source|`: the walk
/// that steps `(1, 1)` on `a` and `(1, −1)` on `b`.
pub fn lattice_path_heights(source: &Word) -> Vec<i64> {
    let mut heights = Vec::with_capacity(source.len() + 1);
    let mut y = 0i64;
    heights.push(y);
    for letter in source.iter() {
        y += if letter == Letter::A { 1 } else { -1 };
        heights.push(y);
    }
    heights
}

/// CSV with header `index,height`.
pub fn path_csv(heights: &[i64]) -> String {
    let mut out = String::from("index,height\n");
    for (i, y) in heights.iter().enumerate() {
        let _ = writeln!(out, "{i},{y}");
    }
    out
}

/// `{ source[r + kd] : r + kd < |source| }`, over any alphabet.
pub fn letters_at_progression<T: Ord + Clone>(source: &[T], r: usize, d: usize) -> Result<BTreeSet<T>> {
    assert!(d > 0, "progression difference must be positive");
    if r >= source.len() {
        return Err(Error::EmptySelection {
            start: r,
            length: source.len(),
        });
    }
    Ok(source[r..].iter().step_by(d).cloned().collect())
}

/// [`letters_at_progression`] for a binary word.
pub fn word_letters_at_progression(source: &Word, r: usize, d: usize) -> Result<BTreeSet<Letter>> {
    let letters: Vec<Letter> = source.iter().collect();
    letters_at_progression(&letters, r, d)
}

/// For `θ₂ = 1` the matrix reads `[[A+1, αA], [B, αB+1]]`, and
/// `B|f(u)|_a − A|f(u)|_b = B|u|_a − A|u|_b`: `(B, −A)` is a left eigenvector
/// for the eigenvalue 1. Returns whether the identity holds for `u`.
pub fn theta2_one_invariant_check(f: &BinaryMorphism, u: &Word) -> Result<bool> {
    let m = f.matrix();
    if spectral_profile(&m).theta2_kind != (Theta2Kind::IntegerNonzero { value: 1 }) {
        return Err(Error::WrongSpectralCase);
    }
    let a = m.m11 as i128 - 1;
    let b = m.m21 as i128;
    let form = |w: &Word| b * w.count(Letter::A) as i128 - a * w.count(Letter::B) as i128;
    Ok(form(&f.apply(u)) == form(u))
}
