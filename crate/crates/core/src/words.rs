//! Words over the binary alphabet `{a, b}`, Parikh vectors and binary morphisms.
//!
//! Letters are single bits (`a = 0`, `b = 1`) and [`Word`] is a packed bit
//! vector, so prefixes of fixed points with hundreds of millions of letters
//! stay within a few dozen megabytes.

use std::fmt;
use std::ops::{Add, AddAssign};
use std::str::FromStr;

use bitvec::prelude::*;
use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::Zero;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::matrix::MorphismMatrix;

/// One of the two letters `a` and `b`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Letter {
    A,
    B,
}

impl Letter {
    pub const ALL: [Letter; 2] = [Letter::A, Letter::B];

    #[inline]
    pub fn index(self) -> usize {
        match self {
            Letter::A => 0,
            Letter::B => 1,
        }
    }

    #[inline]
    pub fn from_bit(bit: bool) -> Letter {
        if bit {
            Letter::B
        } else {
            Letter::A
        }
    }

    #[inline]
    pub fn bit(self) -> bool {
        self == Letter::B
    }

    #[inline]
    pub fn other(self) -> Letter {
        match self {
            Letter::A => Letter::B,
            Letter::B => Letter::A,
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Letter::A => 'a',
            Letter::B => 'b',
        }
    }

    pub fn from_char(c: char) -> Result<Letter> {
        match c {
            'a' => Ok(Letter::A),
            'b' => Ok(Letter::B),
            other => Err(Error::BadLetter(other)),
        }
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_char())
    }
}

impl Serialize for Letter {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_char(self.as_char())
    }
}

impl<'de> Deserialize<'de> for Letter {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let c = char::deserialize(d)?;
        Letter::from_char(c).map_err(serde::de::Error::custom)
    }
}

/// A finite word over `{a, b}`, stored one bit per letter.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct Word {
    bits: BitVec<u64, Lsb0>,
}

impl Word {
    pub fn new() -> Word {
        Word::default()
    }

    pub fn with_capacity(capacity: usize) -> Word {
        Word {
            bits: BitVec::with_capacity(capacity),
        }
    }

    /// Parses a string of `a`s and `b`s.
    pub fn parse(text: &str) -> Result<Word> {
        text.chars().map(Letter::from_char).collect()
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.bits.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    /// Letter at `index`; panics when out of bounds.
    #[inline]
    pub fn at(&self, index: usize) -> Letter {
        Letter::from_bit(self.bits[index])
    }

    #[inline]
    pub fn get(&self, index: usize) -> Option<Letter> {
        self.bits.get(index).map(|b| Letter::from_bit(*b))
    }

    pub fn first(&self) -> Option<Letter> {
        self.get(0)
    }

    #[inline]
    pub fn push(&mut self, letter: Letter) {
        self.bits.push(letter.bit());
    }

    pub fn extend_from_word(&mut self, other: &Word) {
        self.bits.extend_from_bitslice(&other.bits);
    }

    pub fn iter(&self) -> impl DoubleEndedIterator<Item = Letter> + ExactSizeIterator + '_ {
        self.bits.iter().by_vals().map(Letter::from_bit)
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut out = self.clone();
        out.extend_from_word(other);
        out
    }

    /// The word repeated `times` times.
    pub fn repeat(&self, times: usize) -> Word {
        let mut out = Word::with_capacity(self.len() * times);
        for _ in 0..times {
            out.extend_from_word(self);
        }
        out
    }

    /// `pref_len(self)`, or the whole word if it is shorter.
    pub fn prefix(&self, len: usize) -> Word {
        let end = len.min(self.len());
        Word {
            bits: self.bits[..end].to_bitvec(),
        }
    }

    pub fn slice(&self, start: usize, end: usize) -> Word {
        Word {
            bits: self.bits[start..end].to_bitvec(),
        }
    }

    pub fn is_prefix_of(&self, other: &Word) -> bool {
        self.len() <= other.len() && other.bits[..self.len()] == self.bits
    }

    /// Cyclic shift moving the first `k` letters to the end.
    pub fn rotate_left(&self, k: usize) -> Word {
        if self.is_empty() {
            return Word::new();
        }
        let mut bits = self.bits.clone();
        bits.rotate_left(k % self.len());
        Word { bits }
    }

    pub fn count(&self, letter: Letter) -> usize {
        let ones = self.bits.count_ones();
        match letter {
            Letter::A => self.len() - ones,
            Letter::B => ones,
        }
    }

    /// Counts of `a` in every prefix: entry `i` is `|pref_i|_a`, for `i = 0..=len`.
    pub fn prefix_a_counts(&self) -> Vec<u32> {
        let mut out = Vec::with_capacity(self.len() + 1);
        let mut acc = 0u32;
        out.push(acc);
        for bit in self.bits.iter().by_vals() {
            if !bit {
                acc += 1;
            }
            out.push(acc);
        }
        out
    }

    /// True iff `self` is `x^k` for some word `x` of the given length.
    pub fn has_period(&self, period: usize) -> bool {
        period > 0 && (period..self.len()).all(|i| self.bits[i] == self.bits[i - period])
    }
}

impl FromIterator<Letter> for Word {
    fn from_iter<I: IntoIterator<Item = Letter>>(iter: I) -> Word {
        Word {
            bits: iter.into_iter().map(Letter::bit).collect(),
        }
    }
}

impl Extend<Letter> for Word {
    fn extend<I: IntoIterator<Item = Letter>>(&mut self, iter: I) {
        self.bits.extend(iter.into_iter().map(Letter::bit));
    }
}

impl FromStr for Word {
    type Err = Error;

    fn from_str(s: &str) -> Result<Word> {
        Word::parse(s)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for letter in self.iter() {
            write!(f, "{}", letter.as_char())?;
        }
        Ok(())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            write!(f, "ε")
        } else {
            write!(f, "\"{self}\"")
        }
    }
}

impl Serialize for Word {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Word {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        Word::parse(&text).map_err(serde::de::Error::custom)
    }
}

/// Occurrence counts `(|u|_a, |u|_b)` of a word.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ParikhVector {
    #[serde(with = "crate::bigstr")]
    pub count_a: BigUint,
    #[serde(with = "crate::bigstr")]
    pub count_b: BigUint,
}

impl ParikhVector {
    pub fn new(count_a: impl Into<BigUint>, count_b: impl Into<BigUint>) -> ParikhVector {
        ParikhVector {
            count_a: count_a.into(),
            count_b: count_b.into(),
        }
    }

    pub fn zero() -> ParikhVector {
        ParikhVector::default()
    }

    pub fn unit(letter: Letter) -> ParikhVector {
        match letter {
            Letter::A => ParikhVector::new(1u32, 0u32),
            Letter::B => ParikhVector::new(0u32, 1u32),
        }
    }

    pub fn get(&self, letter: Letter) -> &BigUint {
        match letter {
            Letter::A => &self.count_a,
            Letter::B => &self.count_b,
        }
    }

    /// Total length `|u|_a + |u|_b`.
    pub fn total(&self) -> BigUint {
        &self.count_a + &self.count_b
    }

    /// Componentwise difference; `None` when `other` is not dominated by `self`.
    pub fn checked_sub(&self, other: &ParikhVector) -> Option<ParikhVector> {
        if self.count_a < other.count_a || self.count_b < other.count_b {
            return None;
        }
        Some(ParikhVector {
            count_a: &self.count_a - &other.count_a,
            count_b: &self.count_b - &other.count_b,
        })
    }

    pub fn is_zero(&self) -> bool {
        self.count_a.is_zero() && self.count_b.is_zero()
    }
}

impl Add for ParikhVector {
    type Output = ParikhVector;

    fn add(mut self, rhs: ParikhVector) -> ParikhVector {
        self += &rhs;
        self
    }
}

impl Add<&ParikhVector> for &ParikhVector {
    type Output = ParikhVector;

    fn add(self, rhs: &ParikhVector) -> ParikhVector {
        ParikhVector {
            count_a: &self.count_a + &rhs.count_a,
            count_b: &self.count_b + &rhs.count_b,
        }
    }
}

impl AddAssign<&ParikhVector> for ParikhVector {
    fn add_assign(&mut self, rhs: &ParikhVector) {
        self.count_a += &rhs.count_a;
        self.count_b += &rhs.count_b;
    }
}

impl fmt::Display for ParikhVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.count_a, self.count_b)
    }
}

/// Parikh vector of `u`.
pub fn parikh(u: &Word) -> ParikhVector {
    ParikhVector::new(u.count(Letter::A), u.count(Letter::B))
}

/// A nonerasing morphism on `{a, b}*`, given by the images of both letters.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BinaryMorphism {
    image_a: Word,
    image_b: Word,
}

impl BinaryMorphism {
    pub fn new(image_a: Word, image_b: Word) -> Result<BinaryMorphism> {
        if image_a.is_empty() {
            return Err(Error::ErasingImage('a'));
        }
        if image_b.is_empty() {
            return Err(Error::ErasingImage('b'));
        }
        Ok(BinaryMorphism { image_a, image_b })
    }

    /// Builds a morphism from two image strings, e.g. `from_images("ab", "bbaa")`.
    pub fn from_images(image_a: &str, image_b: &str) -> Result<BinaryMorphism> {
        BinaryMorphism::new(Word::parse(image_a)?, Word::parse(image_b)?)
    }

    #[inline]
    pub fn image(&self, letter: Letter) -> &Word {
        match letter {
            Letter::A => &self.image_a,
            Letter::B => &self.image_b,
        }
    }

    pub fn image_a(&self) -> &Word {
        &self.image_a
    }

    pub fn image_b(&self) -> &Word {
        &self.image_b
    }

    /// `|f(a)| + |f(b)|`.
    pub fn size(&self) -> usize {
        self.image_a.len() + self.image_b.len()
    }

    pub fn is_uniform(&self) -> bool {
        self.image_a.len() == self.image_b.len()
    }

    /// `f(a)` starts with `a` and `|f(a)| >= 2`.
    pub fn is_prolongable_on_a(&self) -> bool {
        self.image_a.len() >= 2 && self.image_a.at(0) == Letter::A
    }

    pub fn require_prolongable(&self) -> Result<()> {
        if self.is_prolongable_on_a() {
            Ok(())
        } else {
            Err(Error::NotProlongable)
        }
    }

    pub fn apply(&self, u: &Word) -> Word {
        let mut out = Word::with_capacity(u.len() * self.image_a.len().max(self.image_b.len()));
        for letter in u.iter() {
            out.extend_from_word(self.image(letter));
        }
        out
    }

    /// `self ∘ inner`, i.e. `w ↦ self(inner(w))`.
    pub fn compose(&self, inner: &BinaryMorphism) -> BinaryMorphism {
        BinaryMorphism {
            image_a: self.apply(&inner.image_a),
            image_b: self.apply(&inner.image_b),
        }
    }

    /// `f^t` for `t >= 1`; `t = 0` gives the identity.
    pub fn power(&self, t: u32) -> BinaryMorphism {
        let mut out = BinaryMorphism::identity();
        for _ in 0..t {
            out = self.compose(&out);
        }
        out
    }

    pub fn identity() -> BinaryMorphism {
        BinaryMorphism {
            image_a: Word::parse("a").unwrap(),
            image_b: Word::parse("b").unwrap(),
        }
    }

    /// `f^t(letter)`, materialized.
    pub fn iterate(&self, letter: Letter, t: u32) -> Word {
        let mut word: Word = std::iter::once(letter).collect();
        for _ in 0..t {
            word = self.apply(&word);
        }
        word
    }

    /// The same morphism with the roles of `a` and `b` exchanged.
    pub fn swap_letters(&self) -> BinaryMorphism {
        let flip = |w: &Word| w.iter().map(Letter::other).collect::<Word>();
        BinaryMorphism {
            image_a: flip(&self.image_b),
            image_b: flip(&self.image_a),
        }
    }

    pub fn matrix(&self) -> MorphismMatrix {
        MorphismMatrix::of(self)
    }
}

impl fmt::Display for BinaryMorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "a->{}; b->{}", self.image_a, self.image_b)
    }
}

impl fmt::Debug for BinaryMorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BinaryMorphism({self})")
    }
}

impl FromStr for BinaryMorphism {
    type Err = Error;

    fn from_str(s: &str) -> Result<BinaryMorphism> {
        parse_morphism(s)
    }
}

#[derive(Serialize, Deserialize)]
struct MorphismJson {
    a: String,
    b: String,
}

impl Serialize for BinaryMorphism {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        MorphismJson {
            a: self.image_a.to_string(),
            b: self.image_b.to_string(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for BinaryMorphism {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = MorphismJson::deserialize(d)?;
        BinaryMorphism::from_images(&raw.a, &raw.b).map_err(serde::de::Error::custom)
    }
}

/// Parses `a->WORD; b->WORD` (whitespace-insensitive) or the JSON object
/// form `{"a": "ab", "b": "bbaa"}`.
pub fn parse_morphism(text: &str) -> Result<BinaryMorphism> {
    let trimmed = text.trim();
    if trimmed.starts_with('{') {
        let raw: MorphismJson =
            serde_json::from_str(trimmed).map_err(|e| Error::Syntax(e.to_string()))?;
        return BinaryMorphism::from_images(&raw.a, &raw.b);
    }
    // line breaks separate rules like ';'
    let joined = trimmed
        .lines()
        .map(|line| line.trim().trim_end_matches(';'))
        .filter(|line| !line.is_empty())
        .collect::<Vec<_>>()
        .join(";");
    let compact: String = joined.chars().filter(|c| !c.is_whitespace()).collect();
    let mut images: [Option<Word>; 2] = [None, None];
    let rules: Vec<&str> = compact.split(';').collect();
    for (i, rule) in rules.iter().enumerate() {
        if rule.is_empty() {
            if i + 1 == rules.len() && i > 0 {
                // trailing separator
                continue;
            }
            return Err(Error::Syntax("empty rule".into()));
        }
        let (lhs, rhs) = rule
            .split_once("->")
            .ok_or_else(|| Error::Syntax(format!("rule {rule:?} lacks '->'")))?;
        let mut lhs_chars = lhs.chars();
        let letter = match (lhs_chars.next(), lhs_chars.next()) {
            (Some(c), None) => Letter::from_char(c)?,
            _ => return Err(Error::Syntax(format!("left-hand side {lhs:?} is not a single letter"))),
        };
        if images[letter.index()].is_some() {
            return Err(Error::Syntax(format!("letter '{letter}' defined twice")));
        }
        let image = Word::parse(rhs)?;
        if image.is_empty() {
            return Err(Error::ErasingImage(letter.as_char()));
        }
        images[letter.index()] = Some(image);
    }
    match images {
        [Some(a), Some(b)] => BinaryMorphism::new(a, b),
        [None, _] => Err(Error::Syntax("missing rule for a".into())),
        [_, None] => Err(Error::Syntax("missing rule for b".into())),
    }
}

/// Streams the letters of the fixed point `f^ω(a)`.
///
/// With `f(a) = a·x` the fixed point factors as `a · x · f(x) · f²(x) · …`;
/// the stream emits `a` and then expands `f^j(x)` for `j = 0, 1, …` with an
/// explicit stack of `(letter, remaining depth, next child)` frames. Letters
/// with `f(c) = c` are emitted without descending, so long unary chains cost
/// nothing.
#[derive(Debug, Clone)]
pub struct FixedPointStream<'a> {
    f: &'a BinaryMorphism,
    stack: Vec<Frame>,
    depth: u32,
    started: bool,
}

#[derive(Debug, Clone, Copy)]
struct Frame {
    letter: Letter,
    depth: u32,
    next_child: u32,
}

impl<'a> FixedPointStream<'a> {
    pub fn new(f: &'a BinaryMorphism) -> Result<FixedPointStream<'a>> {
        f.require_prolongable()?;
        Ok(FixedPointStream {
            f,
            stack: Vec::new(),
            depth: 0,
            started: false,
        })
    }

    fn push_tail(&mut self) {
        // frames for f^depth(x), x = f(a)[1..], pushed in reverse order
        let tail = self.f.image(Letter::A);
        for i in (1..tail.len()).rev() {
            self.stack.push(Frame {
                letter: tail.at(i),
                depth: self.depth,
                next_child: 0,
            });
        }
        self.depth += 1;
    }
}

impl Iterator for FixedPointStream<'_> {
    type Item = Letter;

    fn next(&mut self) -> Option<Letter> {
        if !self.started {
            self.started = true;
            return Some(Letter::A);
        }
        loop {
            let Some(top) = self.stack.last_mut() else {
                self.push_tail();
                continue;
            };
            let image = self.f.image(top.letter);
            let fixed_letter = image.len() == 1 && image.at(0) == top.letter;
            if top.depth == 0 || fixed_letter {
                let letter = top.letter;
                self.stack.pop();
                return Some(letter);
            }
            if (top.next_child as usize) < image.len() {
                let child = image.at(top.next_child as usize);
                top.next_child += 1;
                let depth = top.depth - 1;
                self.stack.push(Frame {
                    letter: child,
                    depth,
                    next_child: 0,
                });
            } else {
                self.stack.pop();
            }
        }
    }
}

/// `pref_len(f^ω(a))`, produced by streaming expansion.
pub fn fixed_point_prefix(f: &BinaryMorphism, len: usize) -> Result<Word> {
    let stream = FixedPointStream::new(f)?;
    let mut out = Word::with_capacity(len);
    out.extend(stream.take(len));
    Ok(out)
}

/// `(|f^t(a)|, |f^t(b)|)`, via the `t`-th power of the incidence matrix.
pub fn power_lengths(f: &BinaryMorphism, t: u64) -> (BigUint, BigUint) {
    let power = f.matrix().big_power(t);
    (power.column_sum(0), power.column_sum(1))
}

/// How [`conjugate_normalize`] resolved the morphism.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ConjugationKind {
    /// Images already start, or were shifted to start, with `a` and `b` respectively.
    Normalized,
    /// Both images are powers of one word; the fixed point is periodic.
    PowerOfCommonWord,
    /// Shifting produced images starting with `b` and `a`; the result is the square.
    SwappedSquare,
}

/// Outcome of cyclically shifting a morphism until its images start with distinct letters.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConjugationResult {
    pub kind: ConjugationKind,
    pub morphism: BinaryMorphism,
    pub shift_word: Word,
    /// Power of the input morphism the identity `shift·g(w) = f^power(w)·shift` refers to.
    pub power: u32,
}

impl ConjugationResult {
    /// Checks `shift·g(w) = f^power(w)·shift` for one word `w`.
    pub fn identity_holds(&self, f: &BinaryMorphism, w: &Word) -> bool {
        let lhs = self.shift_word.concat(&self.morphism.apply(w));
        let rhs = f.power(self.power).apply(w).concat(&self.shift_word);
        lhs == rhs
    }
}

/// Cyclic conjugation: shifts both images by a common prefix until their
/// first letters differ.
pub fn conjugate_normalize(f: &BinaryMorphism) -> ConjugationResult {
    let (fa, fb) = (f.image_a(), f.image_b());
    if fa.concat(fb) == fb.concat(fa) {
        return ConjugationResult {
            kind: ConjugationKind::PowerOfCommonWord,
            morphism: f.clone(),
            shift_word: Word::new(),
            power: 1,
        };
    }
    // Images are not powers of a common word, so fa^ω and fb^ω differ within
    // lcm(|fa|, |fb|) letters.
    let limit = fa.len().lcm(&fb.len());
    let shift = (0..limit)
        .find(|&s| fa.at(s % fa.len()) != fb.at(s % fb.len()))
        .expect("non-commuting images differ within lcm of their lengths");
    let shift_word: Word = (0..shift).map(|s| fa.at(s % fa.len())).collect();
    let g = BinaryMorphism {
        image_a: fa.rotate_left(shift % fa.len()),
        image_b: fb.rotate_left(shift % fb.len()),
    };
    if g.image_a.at(0) == Letter::A {
        return ConjugationResult {
            kind: ConjugationKind::Normalized,
            morphism: g,
            shift_word,
            power: 1,
        };
    }
    // f(u)·u·g²(w) = f²(w)·f(u)·u
    let squared = g.compose(&g);
    let shift_word = f.apply(&shift_word).concat(&shift_word);
    ConjugationResult {
        kind: ConjugationKind::SwappedSquare,
        morphism: squared,
        shift_word,
        power: 2,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(a: &str, b: &str) -> BinaryMorphism {
        BinaryMorphism::from_images(a, b).unwrap()
    }

    fn w(s: &str) -> Word {
        Word::parse(s).unwrap()
    }

    #[test]
    fn parse_grammar_and_json() {
        let f = parse_morphism("a->ab; b->bbaa").unwrap();
        assert_eq!(f, m("ab", "bbaa"));
        let g = parse_morphism("  b -> bb aa ;a->a b ;").unwrap();
        assert_eq!(g, f);
        let h = parse_morphism(r#"{"a": "ab", "b": "bbaa"}"#).unwrap();
        assert_eq!(h, f);
    }

    #[test]
    fn parse_identity_is_not_prolongable() {
        let id = parse_morphism("a->a; b->b").unwrap();
        assert_eq!(id, BinaryMorphism::identity());
        assert!(!id.is_prolongable_on_a());
    }

    #[test]
    fn parse_errors() {
        assert_eq!(parse_morphism("a->; b->b"), Err(Error::ErasingImage('a')));
        assert_eq!(parse_morphism("a->ab; b->"), Err(Error::ErasingImage('b')));
        assert_eq!(parse_morphism("a->ac; b->b"), Err(Error::BadLetter('c')));
        assert_eq!(parse_morphism("c->a; b->b"), Err(Error::BadLetter('c')));
        assert!(matches!(parse_morphism("a=ab; b->b"), Err(Error::Syntax(_))));
        assert!(matches!(parse_morphism("a->ab"), Err(Error::Syntax(_))));
        assert!(matches!(parse_morphism("a->ab;;b->b"), Err(Error::Syntax(_))));
        assert_eq!(parse_morphism("a -> abba\nb -> ab;\n").unwrap(), m("abba", "ab"));
        assert!(matches!(parse_morphism("a->ab; a->b"), Err(Error::Syntax(_))));
        assert!(matches!(parse_morphism(r#"{"a": "ab"}"#), Err(Error::Syntax(_))));
        assert_eq!(parse_morphism(r#"{"a": "", "b": "b"}"#), Err(Error::ErasingImage('a')));
    }

    #[test]
    fn fixed_point_prefix_examples() {
        let f = m("ab", "bbaa");
        assert_eq!(fixed_point_prefix(&f, 18).unwrap().to_string(), "abbbaabbaabbaaabab");
        assert!(fixed_point_prefix(&f, 0).unwrap().is_empty());
        let fib = m("ab", "a");
        assert_eq!(fixed_point_prefix(&fib, 8).unwrap().to_string(), "abaababa");
    }

    #[test]
    fn fixed_point_matches_direct_iteration() {
        for (a, b) in [("ab", "bbaa"), ("ab", "a"), ("ab", "b"), ("aab", "b"), ("abba", "ab"), ("aba", "bab")] {
            let f = m(a, b);
            let direct = f.iterate(Letter::A, 12);
            let n = direct.len().min(5000);
            assert_eq!(fixed_point_prefix(&f, n).unwrap(), direct.prefix(n), "{f}");
        }
    }

    #[test]
    fn fixed_point_requires_prolongable() {
        assert_eq!(fixed_point_prefix(&m("ba", "b"), 3), Err(Error::NotProlongable));
        assert_eq!(fixed_point_prefix(&m("a", "b"), 3), Err(Error::NotProlongable));
    }

    #[test]
    fn unary_chain_is_linear() {
        // a -> ab, b -> b: the prefix is a b^(L-1); a naive expansion would be quadratic
        let f = m("ab", "b");
        let p = fixed_point_prefix(&f, 200_000).unwrap();
        assert_eq!(p.count(Letter::A), 1);
    }

    #[test]
    fn parikh_examples() {
        assert_eq!(parikh(&w("abbbaa")), ParikhVector::new(3u32, 3u32));
        assert_eq!(parikh(&Word::new()), ParikhVector::zero());
        assert_eq!(parikh(&w("bb")), ParikhVector::new(0u32, 2u32));
    }

    #[test]
    fn power_lengths_examples() {
        let f = m("ab", "bbaa");
        assert_eq!(power_lengths(&f, 2), (6u32.into(), 12u32.into()));
        assert_eq!(power_lengths(&f, 0), (1u32.into(), 1u32.into()));
        let fib = m("ab", "a");
        assert_eq!(power_lengths(&fib, 5), (13u32.into(), 8u32.into()));
        assert_eq!(fib.iterate(Letter::A, 5).len(), 13);
        assert_eq!(fib.iterate(Letter::B, 5).len(), 8);
    }

    #[test]
    fn conjugation_examples() {
        let r = conjugate_normalize(&m("ab", "bbaa"));
        assert_eq!(r.kind, ConjugationKind::Normalized);
        assert!(r.shift_word.is_empty());

        let r = conjugate_normalize(&m("abab", "ab"));
        assert_eq!(r.kind, ConjugationKind::PowerOfCommonWord);

        let f = m("aab", "abab");
        let r = conjugate_normalize(&f);
        assert_eq!(r.kind, ConjugationKind::Normalized);
        assert_eq!(r.morphism, m("aba", "baba"));
        assert_eq!(r.shift_word, w("a"));
        for x in ["a", "b", "", "abba"] {
            assert!(r.identity_holds(&f, &w(x)));
        }
    }

    #[test]
    fn conjugation_swapped_square() {
        // shifting by "a" gives g(a) = ba, g(b) = aba
        let f = m("ab", "aab");
        let r = conjugate_normalize(&f);
        assert_eq!(r.kind, ConjugationKind::SwappedSquare);
        assert_eq!(r.power, 2);
        assert_eq!(r.morphism.image_a().first(), Some(Letter::A));
        assert_eq!(r.morphism.image_b().first(), Some(Letter::B));
        for x in ["a", "b", "ab", "bba"] {
            assert!(r.identity_holds(&f, &w(x)));
        }
    }

    #[test]
    fn word_basics() {
        let u = w("abba");
        assert_eq!(u.rotate_left(1), w("bbaa"));
        assert_eq!(u.rotate_left(5), w("bbaa"));
        assert!(w("ab").is_prefix_of(&u));
        assert!(!w("ba").is_prefix_of(&u));
        assert_eq!(u.prefix_a_counts(), vec![0, 1, 1, 1, 2]);
        assert!(w("ababab").has_period(2));
        assert!(!w("abaabb").has_period(2));
        assert_eq!(format!("{:?}", Word::new()), "ε");
    }
}
