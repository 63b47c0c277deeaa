//! Queries on `f^t(seed)` that descend through its block decomposition
//! instead of materializing the word.
//!
//! `f^t(x)` is the concatenation of `f^(t−1)(y)` over the letters `y` of
//! `f(x)`. With the Parikh vectors of every `f^j(a)`, `f^j(b)` at hand, a
//! position can be located by walking down one level at a time, touching at
//! most `|f(x)|` children per level.

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::words::{BinaryMorphism, Letter, ParikhVector};

/// Parikh vectors and lengths of `f^j(a)` and `f^j(b)` for `j = 0..=depth`.
#[derive(Debug, Clone)]
pub struct PowerTable<'a> {
    f: &'a BinaryMorphism,
    parikh: Vec<[ParikhVector; 2]>,
    lengths: Vec<[BigUint; 2]>,
}

impl<'a> PowerTable<'a> {
    pub fn new(f: &'a BinaryMorphism) -> PowerTable<'a> {
        PowerTable {
            f,
            parikh: vec![[ParikhVector::unit(Letter::A), ParikhVector::unit(Letter::B)]],
            lengths: vec![[BigUint::one(), BigUint::one()]],
        }
    }

    pub fn morphism(&self) -> &'a BinaryMorphism {
        self.f
    }

    /// Extends the table so that level `t` is available.
    pub fn ensure(&mut self, t: u64) {
        let counts = |x: Letter| {
            let image = self.f.image(x);
            (
                BigUint::from(image.count(Letter::A)),
                BigUint::from(image.count(Letter::B)),
            )
        };
        let weights = [counts(Letter::A), counts(Letter::B)];
        while (self.parikh.len() as u64) <= t {
            let prev = self.parikh.last().expect("level 0 present");
            let next = weights.clone().map(|(ca, cb)| ParikhVector {
                count_a: &ca * &prev[0].count_a + &cb * &prev[1].count_a,
                count_b: &ca * &prev[0].count_b + &cb * &prev[1].count_b,
            });
            self.lengths.push(next.clone().map(|p| p.total()));
            self.parikh.push(next);
        }
    }

    /// Parikh vector of `f^t(x)`; the level must have been prepared with [`ensure`](Self::ensure).
    pub fn parikh(&self, t: u64, x: Letter) -> &ParikhVector {
        &self.parikh[t as usize][x.index()]
    }

    /// `|f^t(x)|`; the level must have been prepared with [`ensure`](Self::ensure).
    pub fn len(&self, t: u64, x: Letter) -> &BigUint {
        &self.lengths[t as usize][x.index()]
    }

    fn is_fixed_letter(&self, x: Letter) -> bool {
        let image = self.f.image(x);
        image.len() == 1 && image.at(0) == x
    }

    fn check_range(&mut self, seed: Letter, t: u64, position: &BigUint, inclusive: bool) -> Result<()> {
        self.ensure(t);
        let len = self.len(t, seed);
        let ok = if inclusive { position <= len } else { position < len };
        if ok {
            Ok(())
        } else {
            Err(Error::OutOfRange {
                position: position.to_string(),
                length: len.to_string(),
            })
        }
    }

    /// Parikh vector of `pref_ℓ(f^t(seed))`.
    pub fn prefix_parikh(&mut self, seed: Letter, t: u64, ell: &BigUint) -> Result<ParikhVector> {
        self.check_range(seed, t, ell, true)?;
        let mut acc = ParikhVector::zero();
        let mut rem = ell.clone();
        let (mut letter, mut level) = (seed, t);
        'descend: while !rem.is_zero() {
            if &rem == self.len(level, letter) {
                acc += self.parikh(level, letter);
                break;
            }
            // rem < |f^level(letter)| and rem > 0, so level >= 1 and letter is not fixed
            for y in self.f.image(letter).iter() {
                let child_len = self.len(level - 1, y);
                if rem >= *child_len {
                    rem -= child_len;
                    acc += self.parikh(level - 1, y);
                } else {
                    letter = y;
                    level -= 1;
                    continue 'descend;
                }
            }
            unreachable!("prefix length exceeds the block it was located in");
        }
        Ok(acc)
    }

    /// Walks from `(seed, t)` down to `stop_level`, returning the letter of the
    /// node at that level containing `position` and the offset inside it.
    fn descend_to(&mut self, seed: Letter, t: u64, position: &BigUint, stop_level: u64) -> Result<(Letter, BigUint)> {
        self.check_range(seed, t, position, false)?;
        let mut rem = position.clone();
        let (mut letter, mut level) = (seed, t);
        'descend: while level > stop_level {
            if self.is_fixed_letter(letter) {
                // f^j(letter) = letter for all j
                break;
            }
            for y in self.f.image(letter).iter() {
                let child_len = self.len(level - 1, y);
                if rem >= *child_len {
                    rem -= child_len;
                } else {
                    letter = y;
                    level -= 1;
                    continue 'descend;
                }
            }
            unreachable!("position exceeds the block it was located in");
        }
        Ok((letter, rem))
    }

    /// Letter at `position` of `f^t(seed)`.
    pub fn letter_at(&mut self, seed: Letter, t: u64, position: &BigUint) -> Result<Letter> {
        self.descend_to(seed, t, position, 0).map(|(letter, _)| letter)
    }

    /// In the factorization `f^t(seed) = f(f^(t−1)(seed))` into blocks, the
    /// block `f(y)` containing `position` and the offset inside it. Needs `t >= 1`.
    pub fn locate_block(&mut self, seed: Letter, t: u64, position: &BigUint) -> Result<(Letter, u64)> {
        assert!(t >= 1, "blocks exist from level 1 on");
        let (letter, offset) = self.descend_to(seed, t, position, 1)?;
        let offset = offset.to_u64().expect("offset inside a single block");
        Ok((letter, offset))
    }

    /// Streams the letters of `f^t(seed)` starting at `position`.
    pub fn cursor(&mut self, seed: Letter, t: u64, position: &BigUint) -> Result<LevelCursor<'a>> {
        self.check_range(seed, t, position, false)?;
        let mut stack = Vec::new();
        let mut rem = position.clone();
        let (mut letter, mut level) = (seed, t);
        'descend: while level > 0 && !self.is_fixed_letter(letter) {
            for (i, y) in self.f.image(letter).iter().enumerate() {
                let child_len = self.len(level - 1, y);
                if rem >= *child_len {
                    rem -= child_len;
                } else {
                    stack.push(CursorFrame {
                        letter,
                        level,
                        next_child: i + 1,
                    });
                    letter = y;
                    level -= 1;
                    continue 'descend;
                }
            }
            unreachable!("position exceeds the block it was located in");
        }
        Ok(LevelCursor {
            f: self.f,
            stack,
            pending: Some(letter),
        })
    }
}

#[derive(Debug, Clone, Copy)]
struct CursorFrame {
    letter: Letter,
    level: u64,
    next_child: usize,
}

/// Sequential reader over `f^t(seed)` from an arbitrary start; amortized
/// constant work per letter. Ends at the end of `f^t(seed)`.
#[derive(Debug, Clone)]
pub struct LevelCursor<'a> {
    f: &'a BinaryMorphism,
    stack: Vec<CursorFrame>,
    pending: Option<Letter>,
}

impl Iterator for LevelCursor<'_> {
    type Item = Letter;

    fn next(&mut self) -> Option<Letter> {
        if let Some(letter) = self.pending.take() {
            return Some(letter);
        }
        loop {
            let top = self.stack.last_mut()?;
            let image = self.f.image(top.letter);
            if top.next_child < image.len() {
                let mut letter = image.at(top.next_child);
                top.next_child += 1;
                let mut level = top.level - 1;
                // leftmost descent to a leaf
                while level > 0 {
                    let img = self.f.image(letter);
                    if img.len() == 1 && img.at(0) == letter {
                        break;
                    }
                    self.stack.push(CursorFrame {
                        letter,
                        level,
                        next_child: 1,
                    });
                    letter = img.at(0);
                    level -= 1;
                }
                return Some(letter);
            }
            self.stack.pop();
        }
    }
}

/// Parikh vector of `pref_ℓ(f^t(seed))`, without materializing `f^t(seed)`.
pub fn prefix_parikh(f: &BinaryMorphism, seed: Letter, t: u64, ell: &BigUint) -> Result<ParikhVector> {
    PowerTable::new(f).prefix_parikh(seed, t, ell)
}
