use std::collections::BTreeSet;

use num_integer::Integer;
use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::matrix::Rank1Form;
use crate::words::{BinaryMorphism, FixedPointStream, Letter};

/// Residues mod `d` of the `t`-block-positions of proper occurrences of
/// `f(a)` inside the first `horizon` letters of `f^ω(a)`.
///
/// Proper occurrences are the blocks `f(x_j)` with `x_j = a` in
/// `f^ω(a) = f(x_0) f(x_1) ⋯`. An occurrence at position `i` has a
/// `t`-block-position when `(A + B)(nA + mB)^(t−1)` divides `i`.
pub fn block_position_residues(
    f: &BinaryMorphism,
    form: &Rank1Form,
    t: u64,
    d: u64,
    horizon: u64,
) -> Result<BTreeSet<u64>> {
    let trace = form.trace();
    if d == 0 || d.gcd(&trace) != 1 {
        return Err(Error::NotCoprime { modulus: d, trace });
    }
    // the unit does not fit in u64 only when no position in range can be a multiple of it
    let unit = form.period_at(t).to_u64().unwrap_or(u64::MAX);
    let len_a = f.image_a().len() as u64;
    let len_b = f.image_b().len() as u64;
    let mut residues = BTreeSet::new();
    let mut position = 0u64;
    for x in FixedPointStream::new(f)? {
        let len = if x == Letter::A { len_a } else { len_b };
        if position + len > horizon || residues.len() as u64 == d {
            break;
        }
        if x == Letter::A && position % unit == 0 {
            residues.insert((position / unit) % d);
        }
        position += len;
    }
    Ok(residues)
}

/// `{α·r·N mod d}` and `{α·r mod d}` over `α ∈ [0, d)`. For `gcd(N, d) = 1`
/// the two sets coincide, since multiplication by `N` permutes residues mod `d`.
pub fn coprime_residue_sets(n: u64, d: u64, r: u64) -> (BTreeSet<u64>, BTreeSet<u64>) {
    assert!(d > 0, "modulus must be positive");
    let (d128, r128, n128) = (d as u128, r as u128 % d as u128, n as u128 % d as u128);
    let scaled = (0..d128).map(|alpha| (alpha * r128 % d128 * n128 % d128) as u64).collect();
    let plain = (0..d128).map(|alpha| (alpha * r128 % d128) as u64).collect();
    (scaled, plain)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(a: &str, b: &str) -> BinaryMorphism {
        BinaryMorphism::from_images(a, b).unwrap()
    }

    fn form(f: &BinaryMorphism) -> Rank1Form {
        super::super::rank1_form(f).unwrap()
    }

    #[test]
    fn full_coverage_examples() {
        let f = m("ab", "bbaa");
        let fm = form(&f);
        let all5: BTreeSet<u64> = (0..5).collect();
        assert_eq!(block_position_residues(&f, &fm, 1, 5, 3u64.pow(9)).unwrap(), all5);
        let all7: BTreeSet<u64> = (0..7).collect();
        assert_eq!(block_position_residues(&f, &fm, 2, 7, 3u64.pow(12)).unwrap(), all7);
        let tm = m("ab", "ba");
        assert_eq!(block_position_residues(&tm, &form(&tm), 1, 1, 100).unwrap(), BTreeSet::from([0]));
    }

    #[test]
    fn modulus_must_be_coprime_to_trace() {
        let f = m("ab", "bbaa");
        assert_eq!(
            block_position_residues(&f, &form(&f), 1, 6, 1000),
            Err(Error::NotCoprime { modulus: 6, trace: 3 })
        );
    }

    #[test]
    fn residue_sets() {
        let (x, y) = coprime_residue_sets(3, 10, 4);
        assert_eq!(x, y);
        assert_eq!(x, BTreeSet::from([0, 2, 4, 6, 8]));
        let (x, y) = coprime_residue_sets(2, 4, 1);
        assert_ne!(x, y);
    }
}
