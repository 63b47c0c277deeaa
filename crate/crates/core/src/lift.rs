//! Uniform lift of a rank-one morphism and the automaton it defines.
//!
//! With `det M_f = 0` the matrix satisfies `M² = k·M` for `k = tr M`, so
//! `|f(f(c))| = k·|f(c)|`. Tag each letter of `f(c)` with its block and
//! position: `(c, i)` stands for `f(c)[i]`. Cutting the tagged word `f(f(c))`
//! into `|f(c)|` pieces of length `k` defines a `k`-uniform morphism `h` on
//! the tagged letters, and `f^ω(a)` is the letter-to-letter image of
//! `h^ω((a, 0))`. Reading base-`k` digits through the columns of `h` gives
//! a DFAO for `f^ω(a)`.

use std::fmt::{self, Write as _};

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::words::{BinaryMorphism, FixedPointStream, Letter};

/// Position `index` inside the block `f(base)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ExtendedLetter {
    pub base: Letter,
    pub index: usize,
}

impl fmt::Display for ExtendedLetter {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(out, "({},{})", self.base, self.index)
    }
}

/// The `k`-uniform morphism `h` and coding `τ`. States are numbered in
/// alphabet order: positions of `f(a)` first, then positions of `f(b)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct UniformLift {
    pub alphabet: Vec<ExtendedLetter>,
    pub block_length: usize,
    /// `images[q]` is `h(q)`, as state numbers.
    pub images: Vec<Vec<usize>>,
    /// `coding[q]` is `τ(q)`.
    pub coding: Vec<Letter>,
    pub initial: usize,
}

/// Builds the lift of a rank-one morphism prolongable on `a`.
pub fn build_lift(f: &BinaryMorphism) -> Result<UniformLift> {
    f.require_prolongable()?;
    let m = f.matrix();
    if m.determinant() != 0 {
        return Err(Error::NotRankOne(m.determinant()));
    }
    let k = m.trace() as u64;
    if k < 2 {
        return Err(Error::DegenerateTrace(k));
    }
    let k = k as usize;
    let len_a = f.image_a().len();
    let state = |x: ExtendedLetter| match x.base {
        Letter::A => x.index,
        Letter::B => len_a + x.index,
    };
    let mut alphabet = Vec::with_capacity(f.size());
    let mut images = Vec::with_capacity(f.size());
    let mut coding = Vec::with_capacity(f.size());
    for c in Letter::ALL {
        let block = f.image(c);
        let tagged: Vec<usize> = block
            .iter()
            .flat_map(|y| (0..f.image(y).len()).map(move |index| ExtendedLetter { base: y, index }))
            .map(state)
            .collect();
        assert_eq!(tagged.len(), k * block.len(), "rank one gives |f(f(c))| = k·|f(c)|");
        for (index, letter) in block.iter().enumerate() {
            alphabet.push(ExtendedLetter { base: c, index });
            images.push(tagged[index * k..(index + 1) * k].to_vec());
            coding.push(letter);
        }
    }
    Ok(UniformLift {
        alphabet,
        block_length: k,
        images,
        coding,
        initial: 0,
    })
}

impl UniformLift {
    pub fn state_count(&self) -> usize {
        self.alphabet.len()
    }

    /// `pref_len(h^ω(initial))` as state numbers.
    pub fn fixed_point_prefix(&self, len: usize) -> Vec<usize> {
        assert_eq!(self.images[self.initial][0], self.initial, "h is prolongable on the initial state");
        let mut word = vec![self.initial];
        while word.len() < len {
            let next: Vec<usize> = word
                .iter()
                .flat_map(|&q| self.images[q].iter().copied())
                .take(len)
                .collect();
            word = next;
        }
        word.truncate(len);
        word
    }

    /// `τ(pref_len(h^ω(initial)))`.
    pub fn coded_prefix(&self, len: usize) -> Vec<Letter> {
        self.fixed_point_prefix(len).into_iter().map(|q| self.coding[q]).collect()
    }

    /// True iff every digit column `q ↦ h(q)[j]` is a permutation of the states.
    pub fn is_bijective(&self) -> bool {
        (0..self.block_length).all(|j| {
            let mut hit = vec![false; self.state_count()];
            self.images.iter().all(|image| !std::mem::replace(&mut hit[image[j]], true))
        })
    }

    pub fn dfao(&self) -> Dfao {
        Dfao {
            base: self.block_length,
            transitions: self.images.clone(),
            output: self.coding.clone(),
            start: self.initial,
            labels: self.alphabet.clone(),
        }
    }
}

/// Compares `τ(h^ω(initial))` with `f^ω(a)` on the first `len` letters.
pub fn lift_verify(f: &BinaryMorphism, lift: &UniformLift, len: usize) -> Result<bool> {
    let stream = FixedPointStream::new(f)?;
    let coded = lift.coded_prefix(len);
    Ok(coded.into_iter().zip(stream).all(|(x, y)| x == y))
}

/// Deterministic finite automaton with output reading base-`k` digits, most
/// significant first. `transitions[q][j]` is the `j`-th letter of `h(q)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Dfao {
    pub base: usize,
    pub transitions: Vec<Vec<usize>>,
    pub output: Vec<Letter>,
    pub start: usize,
    pub labels: Vec<ExtendedLetter>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DfaoTable {
    pub base: usize,
    pub start: usize,
    pub states: Vec<DfaoRow>,
}

/// One state, numbered from 1; `next[j]` is the target on digit `j`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DfaoRow {
    pub id: usize,
    pub letter: ExtendedLetter,
    pub output: Letter,
    pub next: Vec<usize>,
}

impl Dfao {
    /// State reached on the canonical digits of `n` (`0` is the empty string).
    pub fn run(&self, n: &BigUint) -> usize {
        let mut q = self.start;
        if n.bits() == 0 {
            return q;
        }
        for digit in n.to_radix_be(self.base as u32) {
            q = self.transitions[q][digit as usize];
        }
        q
    }

    pub fn eval(&self, n: &BigUint) -> Letter {
        self.output[self.run(n)]
    }

    pub fn eval_u64(&self, n: u64) -> Letter {
        let mut digits = Vec::new();
        let mut rest = n;
        while rest > 0 {
            digits.push((rest % self.base as u64) as usize);
            rest /= self.base as u64;
        }
        let q = digits.iter().rev().fold(self.start, |q, &d| self.transitions[q][d]);
        self.output[q]
    }

    pub fn table(&self) -> DfaoTable {
        DfaoTable {
            base: self.base,
            start: self.start + 1,
            states: (0..self.transitions.len())
                .map(|q| DfaoRow {
                    id: q + 1,
                    letter: self.labels[q],
                    output: self.output[q],
                    next: self.transitions[q].iter().map(|t| t + 1).collect(),
                })
                .collect(),
        }
    }

    /// Graphviz rendering; node `i` is state `i` numbered from 1.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph dfao {\n  rankdir=LR;\n  start [shape=point];\n");
        for (q, label) in self.labels.iter().enumerate() {
            let _ = writeln!(
                out,
                "  {} [shape=circle, label=\"{}\\n{} / {}\"];",
                q + 1,
                q + 1,
                label,
                self.output[q]
            );
        }
        let _ = writeln!(out, "  start -> {};", self.start + 1);
        for (q, row) in self.transitions.iter().enumerate() {
            for (digit, target) in row.iter().enumerate() {
                let _ = writeln!(out, "  {} -> {} [label=\"{}\"];", q + 1, target + 1, digit);
            }
        }
        out.push_str("}\n");
        out
    }
}
