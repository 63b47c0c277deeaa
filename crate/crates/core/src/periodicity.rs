//! Certified detection of ultimately periodic fixed points.
//!
//! A candidate `u·w^ω` read off a prefix is accepted only after checking
//! `f(u)·f(w)^ω = u·w^ω` exactly. A fixed point of `f` starting with `a`
//! must equal `f^ω(a)`, so every accepted candidate is correct; a failed
//! search proves nothing beyond its bounds.

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::words::{fixed_point_prefix, BinaryMorphism, Letter, Word};

/// The infinite word `preperiod · period^ω`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EventuallyPeriodicWord {
    pub preperiod: Word,
    pub period: Word,
}

impl EventuallyPeriodicWord {
    pub fn new(preperiod: Word, period: Word) -> EventuallyPeriodicWord {
        assert!(!period.is_empty(), "period must be nonempty");
        EventuallyPeriodicWord { preperiod, period }
    }

    pub fn letter(&self, i: usize) -> Letter {
        let r = self.preperiod.len();
        if i < r {
            self.preperiod.at(i)
        } else {
            self.period.at((i - r) % self.period.len())
        }
    }

    pub fn prefix(&self, len: usize) -> Word {
        (0..len).map(|i| self.letter(i)).collect()
    }

    /// Image under `f`: `f(u)·f(w)^ω`.
    pub fn image(&self, f: &BinaryMorphism) -> EventuallyPeriodicWord {
        EventuallyPeriodicWord::new(f.apply(&self.preperiod), f.apply(&self.period))
    }
}

/// Whether `u1·w1^ω = u2·w2^ω`. Past `max(|u1|, |u2|)` both sides are
/// periodic with period `lcm(|w1|, |w2|)`, so that many further letters decide it.
pub fn eq_eventually_periodic(u1: &Word, w1: &Word, u2: &Word, w2: &Word) -> bool {
    let x = EventuallyPeriodicWord::new(u1.clone(), w1.clone());
    let y = EventuallyPeriodicWord::new(u2.clone(), w2.clone());
    let span = u1.len().max(u2.len()) + w1.len().lcm(&w2.len());
    (0..span).all(|i| x.letter(i) == y.letter(i))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "outcome")]
pub enum PeriodicityVerdict {
    Periodic(EventuallyPeriodicWord),
    NotFoundWithinBounds { max_p: usize, max_r: usize },
}

impl PeriodicityVerdict {
    pub fn is_periodic(&self) -> bool {
        matches!(self, PeriodicityVerdict::Periodic(_))
    }
}

/// `4·(|f(a)| + |f(b)|)²` for both the period and the preperiod bound.
pub fn default_bounds(f: &BinaryMorphism) -> (usize, usize) {
    let size = f.size();
    (4 * size * size, 4 * size * size)
}

/// Whether `candidate` is a fixed point of `f`.
pub fn certify(f: &BinaryMorphism, candidate: &EventuallyPeriodicWord) -> bool {
    let image = candidate.image(f);
    eq_eventually_periodic(&image.preperiod, &image.period, &candidate.preperiod, &candidate.period)
}

/// Searches for `f^ω(a) = u·w^ω` with `|u| <= max_r`, `1 <= |w| <= max_p`,
/// returning the certified candidate with least `|u|`, then least `|w|`.
pub fn decide_periodic(f: &BinaryMorphism, max_p: usize, max_r: usize) -> Result<PeriodicityVerdict> {
    let max_p = max_p.max(1);
    let horizon = 2 * (max_r + 2 * max_p) + 64;
    let s = fixed_point_prefix(f, horizon)?;
    let letters: Vec<Letter> = s.iter().collect();
    let mut candidates: Vec<(usize, usize)> = (1..=max_p)
        .filter_map(|p| {
            // least r such that s[i] = s[i − p] for all i >= r + p within the prefix
            let last_break = (p..letters.len()).rev().find(|&i| letters[i] != letters[i - p]);
            let r = last_break.map_or(0, |i| i + 1 - p);
            (r <= max_r).then_some((r, p))
        })
        .collect();
    candidates.sort_unstable();
    for (r, p) in candidates {
        let candidate = EventuallyPeriodicWord::new(s.prefix(r), s.slice(r, r + p));
        if certify(f, &candidate) {
            return Ok(PeriodicityVerdict::Periodic(candidate));
        }
    }
    Ok(PeriodicityVerdict::NotFoundWithinBounds { max_p, max_r })
}
