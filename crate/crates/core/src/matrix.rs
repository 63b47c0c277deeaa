//! Incidence matrices of binary morphisms and their exact spectral data.
//!
//! Nothing here touches floating point. The second eigenvalue is classified
//! from the integer trace, determinant and discriminant of the characteristic
//! polynomial `x² − tr·x + det`, and letter frequencies live in the quadratic
//! field `Q(√disc)`.

use std::fmt;

use num_bigint::BigUint;
use num_integer::{Integer, Roots};
use num_rational::Ratio;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::words::BinaryMorphism;

/// `M_f`: entry `(i, j)` counts letter `i` in the image of letter `j`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MorphismMatrix {
    /// `|f(a)|_a`
    pub m11: u64,
    /// `|f(b)|_a`
    pub m12: u64,
    /// `|f(a)|_b`
    pub m21: u64,
    /// `|f(b)|_b`
    pub m22: u64,
}

impl MorphismMatrix {
    pub fn new(rows: [[u64; 2]; 2]) -> MorphismMatrix {
        MorphismMatrix {
            m11: rows[0][0],
            m12: rows[0][1],
            m21: rows[1][0],
            m22: rows[1][1],
        }
    }

    pub fn of(f: &BinaryMorphism) -> MorphismMatrix {
        use crate::words::Letter;
        let (fa, fb) = (f.image_a(), f.image_b());
        MorphismMatrix {
            m11: fa.count(Letter::A) as u64,
            m12: fb.count(Letter::A) as u64,
            m21: fa.count(Letter::B) as u64,
            m22: fb.count(Letter::B) as u64,
        }
    }

    pub fn rows(&self) -> [[u64; 2]; 2] {
        [[self.m11, self.m12], [self.m21, self.m22]]
    }

    pub fn trace(&self) -> i128 {
        self.m11 as i128 + self.m22 as i128
    }

    pub fn determinant(&self) -> i128 {
        self.m11 as i128 * self.m22 as i128 - self.m12 as i128 * self.m21 as i128
    }

    /// `(|f(a)|, |f(b)|)`.
    pub fn column_sums(&self) -> (u64, u64) {
        (self.m11 + self.m21, self.m12 + self.m22)
    }

    pub fn is_positive(&self) -> bool {
        self.m11 > 0 && self.m12 > 0 && self.m21 > 0 && self.m22 > 0
    }

    pub fn mul(&self, rhs: &MorphismMatrix) -> MorphismMatrix {
        let (a, b) = (self.rows(), rhs.rows());
        let mut out = [[0u64; 2]; 2];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                *cell = a[i][0] * b[0][j] + a[i][1] * b[1][j];
            }
        }
        MorphismMatrix::new(out)
    }

    /// Some power is entrywise positive. For 2×2 nonnegative matrices it
    /// suffices to look at `M` and `M²`.
    pub fn is_primitive(&self) -> bool {
        self.is_positive() || self.mul(self).is_positive()
    }

    /// `M^t` with arbitrary-precision entries.
    pub fn big_power(&self, t: u64) -> BigMatrix {
        BigMatrix::from(*self).pow(t)
    }
}

impl fmt::Display for MorphismMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{}, {}], [{}, {}]]", self.m11, self.m12, self.m21, self.m22)
    }
}

/// 2×2 matrix over the naturals with big entries; used for matrix powers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BigMatrix {
    pub entries: [[BigUint; 2]; 2],
}

impl From<MorphismMatrix> for BigMatrix {
    fn from(m: MorphismMatrix) -> BigMatrix {
        BigMatrix {
            entries: [
                [m.m11.into(), m.m12.into()],
                [m.m21.into(), m.m22.into()],
            ],
        }
    }
}

impl BigMatrix {
    pub fn identity() -> BigMatrix {
        BigMatrix {
            entries: [
                [BigUint::one(), BigUint::zero()],
                [BigUint::zero(), BigUint::one()],
            ],
        }
    }

    pub fn mul(&self, rhs: &BigMatrix) -> BigMatrix {
        let (a, b) = (&self.entries, &rhs.entries);
        let cell = |i: usize, j: usize| &a[i][0] * &b[0][j] + &a[i][1] * &b[1][j];
        BigMatrix {
            entries: [[cell(0, 0), cell(0, 1)], [cell(1, 0), cell(1, 1)]],
        }
    }

    pub fn pow(&self, mut t: u64) -> BigMatrix {
        let mut base = self.clone();
        let mut acc = BigMatrix::identity();
        while t > 0 {
            if t & 1 == 1 {
                acc = acc.mul(&base);
            }
            t >>= 1;
            if t > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    pub fn column_sum(&self, j: usize) -> BigUint {
        &self.entries[0][j] + &self.entries[1][j]
    }
}

/// The second eigenvalue θ₂: the root of smaller absolute value, ties going
/// to the negative root.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum Theta2Kind {
    Zero,
    IntegerNonzero {
        #[serde(with = "crate::bigstr::narrow")]
        value: i128,
    },
    /// θ₂ = (trace − √discriminant) / 2 with a non-square discriminant.
    IrrationalQuadratic {
        #[serde(with = "crate::bigstr::narrow")]
        discriminant: i128,
    },
}

/// Position of `|θ₂|` relative to 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum AbsClass {
    EqZero,
    InOpenUnitInterval,
    EqOne,
    GtOne,
}

/// Exact spectral data of an incidence matrix.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpectralProfile {
    pub trace: i128,
    pub determinant: i128,
    pub discriminant: i128,
    pub theta2_kind: Theta2Kind,
    pub theta2_abs_class: AbsClass,
    pub primitive: bool,
}

impl SpectralProfile {
    /// Both eigenvalues as integers `(θ₁, θ₂)`, when the discriminant is a perfect square.
    pub fn integer_eigenvalues(&self) -> Option<(i128, i128)> {
        let root = exact_sqrt(self.discriminant)?;
        let hi = (self.trace + root) / 2;
        let lo = (self.trace - root) / 2;
        // |hi| >= |lo| since trace >= 0; on ties θ₂ is the negative root
        Some(if hi.abs() == lo.abs() {
            (hi.max(lo), hi.min(lo))
        } else if hi.abs() > lo.abs() {
            (hi, lo)
        } else {
            (lo, hi)
        })
    }

    /// θ₂ as a float, for display only.
    pub fn theta2_approx(&self) -> f64 {
        (self.trace as f64 - (self.discriminant as f64).sqrt()) / 2.0
    }
}

fn exact_sqrt(n: i128) -> Option<i128> {
    if n < 0 {
        return None;
    }
    let r = n.sqrt();
    (r * r == n).then_some(r)
}

/// Classifies the spectrum of `m` exactly.
pub fn spectral_profile(m: &MorphismMatrix) -> SpectralProfile {
    let trace = m.trace();
    let determinant = m.determinant();
    let discriminant = trace * trace - 4 * determinant;
    debug_assert!(discriminant >= 0, "nonnegative 2x2 matrices have real spectra");
    let (theta2_kind, theta2_abs_class) = if determinant == 0 {
        (Theta2Kind::Zero, AbsClass::EqZero)
    } else if let Some(root) = exact_sqrt(discriminant) {
        // trace >= 0, so (trace - root)/2 has the smaller absolute value and
        // is the negative root on ties
        let value = (trace - root) / 2;
        let class = match value.abs() {
            0 => AbsClass::EqZero,
            1 => AbsClass::EqOne,
            _ => AbsClass::GtOne,
        };
        (Theta2Kind::IntegerNonzero { value }, class)
    } else {
        // |trace − √disc| < 2  ⇔  trace − 2 < √disc < trace + 2
        let below_upper = discriminant < (trace + 2) * (trace + 2);
        let above_lower = trace < 2 || discriminant > (trace - 2) * (trace - 2);
        let class = if below_upper && above_lower {
            AbsClass::InOpenUnitInterval
        } else {
            AbsClass::GtOne
        };
        (Theta2Kind::IrrationalQuadratic { discriminant }, class)
    };
    SpectralProfile {
        trace,
        determinant,
        discriminant,
        theta2_kind,
        theta2_abs_class,
        primitive: m.is_primitive(),
    }
}

/// An element `rational + coeff·√radicand` of a real quadratic field.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuadraticNumber {
    pub rational: Ratio<i128>,
    pub coeff: Ratio<i128>,
    pub radicand: i128,
}

impl QuadraticNumber {
    pub fn rational(value: Ratio<i128>, radicand: i128) -> QuadraticNumber {
        QuadraticNumber {
            rational: value,
            coeff: Ratio::zero(),
            radicand,
        }
    }

    pub fn is_rational(&self) -> bool {
        self.coeff.is_zero()
    }

    pub fn to_f64(&self) -> f64 {
        let r = |q: &Ratio<i128>| *q.numer() as f64 / *q.denom() as f64;
        r(&self.rational) + r(&self.coeff) * (self.radicand as f64).sqrt()
    }

    pub fn add(&self, other: &QuadraticNumber) -> QuadraticNumber {
        debug_assert!(self.radicand == other.radicand || self.coeff.is_zero() || other.coeff.is_zero());
        QuadraticNumber {
            rational: self.rational + other.rational,
            coeff: self.coeff + other.coeff,
            radicand: self.radicand.max(other.radicand),
        }
    }

    /// `1 − self`.
    pub fn complement(&self) -> QuadraticNumber {
        QuadraticNumber {
            rational: Ratio::one() - self.rational,
            coeff: -self.coeff,
            radicand: self.radicand,
        }
    }

    /// Exact membership in `[0, 1]`.
    pub fn in_unit_interval(&self) -> bool {
        !self.is_negative() && !self.complement().is_negative()
    }

    fn is_negative(&self) -> bool {
        // sign of r + c·√d with d > 0 non-square or c = 0
        let (r, c) = (self.rational, self.coeff);
        if c.is_zero() {
            return r.is_negative();
        }
        let d = Ratio::from_integer(self.radicand);
        match (r.is_negative(), c.is_negative()) {
            (true, true) => true,
            (false, false) => false,
            // r < 0 < c√d: negative iff r² > c²d
            (true, false) => r * r > c * c * d,
            // c√d < 0 <= r: negative iff c²d > r²
            (false, true) => c * c * d > r * r,
        }
    }
}

impl fmt::Display for QuadraticNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeff.is_zero() {
            write!(f, "{}", self.rational)
        } else {
            write!(f, "{} + {}*sqrt({})", self.rational, self.coeff, self.radicand)
        }
    }
}

#[derive(Serialize, Deserialize)]
struct QuadraticJson {
    rational: String,
    sqrt_coeff: String,
    radicand: i128,
}

fn parse_ratio(text: &str) -> std::result::Result<Ratio<i128>, String> {
    text.parse::<Ratio<i128>>().map_err(|e| format!("bad rational {text:?}: {e}"))
}

impl Serialize for QuadraticNumber {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        QuadraticJson {
            rational: self.rational.to_string(),
            sqrt_coeff: self.coeff.to_string(),
            radicand: self.radicand,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for QuadraticNumber {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = QuadraticJson::deserialize(d)?;
        Ok(QuadraticNumber {
            rational: parse_ratio(&raw.rational).map_err(serde::de::Error::custom)?,
            coeff: parse_ratio(&raw.sqrt_coeff).map_err(serde::de::Error::custom)?,
            radicand: raw.radicand,
        })
    }
}

/// Letter frequencies of the fixed point: the normalized Perron eigenvector.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FrequencyReport {
    pub freq_a: QuadraticNumber,
    pub freq_b: QuadraticNumber,
    pub rational: bool,
}

/// Exact letter frequencies of `f^ω(a)` for primitive `f`.
pub fn letter_frequencies(f: &BinaryMorphism) -> Result<FrequencyReport> {
    let m = f.matrix();
    if !m.is_primitive() {
        return Err(Error::NotPrimitive);
    }
    let profile = spectral_profile(&m);
    let (m11, m12, m22) = (m.m11 as i128, m.m12 as i128, m.m22 as i128);
    let disc = profile.discriminant;
    // Perron vector (m12, θ₁ − m11), θ₁ = (tr + √disc)/2, so
    // freq_a = m12 / (m12 + θ₁ − m11) = 2·m12 / (q + √disc), q = 2·m12 + m22 − m11
    let q = 2 * m12 + m22 - m11;
    let freq_a = match exact_sqrt(disc) {
        Some(root) => QuadraticNumber::rational(Ratio::new(2 * m12, q + root), disc),
        None => {
            // rationalize: 2·m12·(q − √disc) / (q² − disc); q² ≠ disc as disc is not a square
            let denom = q * q - disc;
            QuadraticNumber {
                rational: Ratio::new(2 * m12 * q, denom),
                coeff: Ratio::new(-2 * m12, denom),
                radicand: disc,
            }
        }
    };
    let freq_b = freq_a.complement();
    Ok(FrequencyReport {
        rational: freq_a.is_rational(),
        freq_a,
        freq_b,
    })
}

/// Decomposition `M = [[nA, mA], [nB, mB]]` with `gcd(m, n) = 1` of a rank-one matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Rank1Form {
    #[serde(rename = "A")]
    pub a_weight: u64,
    #[serde(rename = "B")]
    pub b_weight: u64,
    pub n: u64,
    pub m: u64,
}

impl Rank1Form {
    /// `A + B`, which equals `gcd(|f(a)|, |f(b)|)`.
    pub fn unit(&self) -> u64 {
        self.a_weight + self.b_weight
    }

    /// `nA + mB`, the trace and the only nonzero eigenvalue.
    pub fn trace(&self) -> u64 {
        self.n * self.a_weight + self.m * self.b_weight
    }

    /// Chunk length `(A + B)(nA + mB)^(t−1)` at level `t >= 1`.
    pub fn period_at(&self, t: u64) -> BigUint {
        assert!(t >= 1, "levels start at 1");
        BigUint::from(self.unit()) * num_traits::pow(BigUint::from(self.trace()), (t - 1) as usize)
    }

    pub fn reconstruct(&self) -> MorphismMatrix {
        MorphismMatrix::new([
            [self.n * self.a_weight, self.m * self.a_weight],
            [self.n * self.b_weight, self.m * self.b_weight],
        ])
    }
}

/// Splits a determinant-zero matrix into its rank-one form.
pub fn rank1_decompose(m: &MorphismMatrix) -> Result<Rank1Form> {
    let det = m.determinant();
    if det != 0 {
        return Err(Error::NotRankOne(det));
    }
    if !m.is_positive() {
        return Err(Error::ZeroEntry);
    }
    let (len_a, len_b) = m.column_sums();
    let g = len_a.gcd(&len_b);
    let (n, mm) = (len_a / g, len_b / g);
    if m.m11 % n != 0 || m.m21 % n != 0 {
        return Err(Error::ZeroEntry);
    }
    let form = Rank1Form {
        a_weight: m.m11 / n,
        b_weight: m.m21 / n,
        n,
        m: mm,
    };
    debug_assert_eq!(form.unit(), g);
    if form.reconstruct() != *m || form.a_weight == 0 || form.b_weight == 0 {
        return Err(Error::ZeroEntry);
    }
    Ok(form)
}
