use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::descent::{LevelCursor, PowerTable};
use crate::error::{Error, Result};
use crate::matrix::Rank1Form;
use crate::words::{BinaryMorphism, Letter, ParikhVector};

/// Largest chunk length the offset scan will walk through.
pub const DEFAULT_OFFSET_BUDGET: u64 = 2_000_000;

/// `f^K(a) = uv`, `f^K(b) = u'v'` with `|u| = |u'| = cut_offset`, `u ~ u'`,
/// and `vu`, `v'u'` cut into chunks of length `period` that are all equivalent.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EventualWitness {
    #[serde(rename = "K")]
    pub k: u64,
    pub cut_offset: u64,
    #[serde(with = "crate::bigstr")]
    pub period: BigUint,
}

/// The two halves of the witness condition at one offset, evaluated separately.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EventualConditions {
    pub chunks_equivalent: bool,
    pub prefixes_equivalent: bool,
    pub prefix_a: ParikhVector,
    pub prefix_b: ParikhVector,
}

impl EventualConditions {
    pub fn holds(&self) -> bool {
        self.chunks_equivalent && self.prefixes_equivalent
    }
}

/// Evaluates the witness condition at `(K, c)` from prefix Parikh queries only.
pub fn eventual_conditions_at(f: &BinaryMorphism, form: &Rank1Form, k: u64, c: &BigUint) -> Result<EventualConditions> {
    let p = form.period_at(k);
    if c >= &p {
        return Err(Error::OutOfRange {
            position: c.to_string(),
            length: p.to_string(),
        });
    }
    let mut table = PowerTable::new(f);
    let mut chunks = Vec::new();
    let mut prefixes = Vec::new();
    for (seed, pieces) in [(Letter::A, form.n), (Letter::B, form.m)] {
        table.ensure(k);
        let whole = table.parikh(k, seed).clone();
        let head = table.prefix_parikh(seed, k, c)?;
        let mut previous = head.clone();
        for j in 1..pieces {
            let current = table.prefix_parikh(seed, k, &(c + &p * j))?;
            chunks.push(current.checked_sub(&previous).expect("prefix counts grow"));
            previous = current;
        }
        // the last chunk wraps: suffix of f^K(seed) followed by its prefix of length c
        chunks.push(whole.checked_sub(&previous).expect("prefix counts grow") + head.clone());
        prefixes.push(head);
    }
    let chunks_equivalent = chunks.windows(2).all(|w| w[0] == w[1]);
    let prefix_b = prefixes.pop().expect("two seeds");
    let prefix_a = prefixes.pop().expect("two seeds");
    Ok(EventualConditions {
        chunks_equivalent,
        prefixes_equivalent: prefix_a == prefix_b,
        prefix_a,
        prefix_b,
    })
}

/// Least cut offset `c ∈ [0, p)` witnessing eventual abelian periodicity at
/// level `K`, or `None`. Offsets beyond `p` repeat the same cyclic shifts.
pub fn eventual_check_at(f: &BinaryMorphism, form: &Rank1Form, k: u64) -> Result<Option<EventualWitness>> {
    eventual_check_with_budget(f, form, k, DEFAULT_OFFSET_BUDGET)
}

/// As [`eventual_check_at`], refusing chunk lengths above `budget`.
///
/// One cursor per chunk start walks `f^K(seed)`; moving the cut from `c` to
/// `c + 1` drops the letter under a chunk's own cursor and appends the letter
/// under the next chunk's cursor (the wrapping chunk appends the letter at
/// `c`, which also extends the common prefix). Each offset costs `O(n + m)`.
pub fn eventual_check_with_budget(
    f: &BinaryMorphism,
    form: &Rank1Form,
    k: u64,
    budget: u64,
) -> Result<Option<EventualWitness>> {
    let period = form.period_at(k);
    let p = match period.to_u64() {
        Some(p) if p <= budget => p,
        _ => {
            return Err(Error::ScanBudgetExceeded {
                needed: period.to_string(),
                budget,
            })
        }
    };
    let mut table = PowerTable::new(f);
    let mut seeds = Vec::with_capacity(2);
    for (seed, pieces) in [(Letter::A, form.n), (Letter::B, form.m)] {
        seeds.push(SeedScan::new(&mut table, seed, k, &period, pieces)?);
    }
    for c in 0..p {
        let reference = seeds[0].chunk_a[0];
        let chunks_equal = seeds.iter().all(|s| s.chunk_a.iter().all(|&x| x == reference));
        if chunks_equal && seeds[0].prefix_a == seeds[1].prefix_a {
            return Ok(Some(EventualWitness {
                k,
                cut_offset: c,
                period,
            }));
        }
        if c + 1 < p {
            for s in seeds.iter_mut() {
                s.advance();
            }
        }
    }
    Ok(None)
}

/// Sliding state for one seed: `a`-counts of its chunks at the current cut
/// and of the prefix before the cut. Chunk lengths are all `p`, so `a`-counts
/// determine Parikh vectors.
struct SeedScan<'a> {
    cursors: Vec<LevelCursor<'a>>,
    chunk_a: Vec<u64>,
    prefix_a: u64,
}

impl<'a> SeedScan<'a> {
    fn new(table: &mut PowerTable<'a>, seed: Letter, k: u64, period: &BigUint, pieces: u64) -> Result<SeedScan<'a>> {
        let mut cursors = Vec::with_capacity(pieces as usize);
        let mut chunk_a = Vec::with_capacity(pieces as usize);
        let mut previous = BigUint::zero();
        for j in 0..pieces {
            let start = period * j;
            let end = period * (j + 1);
            let count = table.prefix_parikh(seed, k, &end)?.count_a - table.prefix_parikh(seed, k, &start)?.count_a;
            chunk_a.push(count.to_u64().expect("bounded by the chunk length"));
            cursors.push(table.cursor(seed, k, &start)?);
            previous = end;
        }
        debug_assert_eq!(&previous, table.len(k, seed));
        Ok(SeedScan {
            cursors,
            chunk_a,
            prefix_a: 0,
        })
    }

    fn advance(&mut self) {
        let letters: Vec<Letter> = self
            .cursors
            .iter_mut()
            .map(|cur| cur.next().expect("cursor stays inside its chunk"))
            .collect();
        let is_a = |l: Letter| u64::from(l == Letter::A);
        let count = letters.len();
        for j in 0..count {
            let incoming = letters[(j + 1) % count];
            self.chunk_a[j] = self.chunk_a[j] + is_a(incoming) - is_a(letters[j]);
        }
        self.prefix_a += is_a(letters[0]);
    }
}
