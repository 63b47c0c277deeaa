//! The full decision tree.
//!
//! Non-primitive morphisms reduce to ordinary periodicity. Primitive ones
//! split on θ₂: when it is nonzero, one syntactic family is periodic and
//! the spectral class refutes everything else; when it is zero, pure abelian
//! periodicity is decided exactly and the eventual question is searched up
//! to a bounded level.

use serde::{Deserialize, Serialize};

use crate::abelian::max_imbalance;
use crate::error::{Error, Result};
use crate::matrix::{spectral_profile, AbsClass, MorphismMatrix, Rank1Form, SpectralProfile, Theta2Kind};
use crate::periodicity::{decide_periodic, default_bounds, EventuallyPeriodicWord, PeriodicityVerdict};
use crate::rank1::{
    decide_pure_with_cap, eventual_check_with_budget, rank1_form, EventualWitness, PureOutcome, PureVerdict,
    DEFAULT_ITERATION_CAP, DEFAULT_OFFSET_BUDGET,
};
use crate::words::{fixed_point_prefix, BinaryMorphism, Letter, Word};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Answer {
    AbelianPeriodic,
    PureAbelianPeriodic,
    NotAbelianPeriodic,
    Unknown,
}

impl Answer {
    /// Abelian periodic in the broad sense (pure answers included).
    pub fn is_abelian_periodic(self) -> bool {
        matches!(self, Answer::AbelianPeriodic | Answer::PureAbelianPeriodic)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Certainty {
    /// Follows from exact computation; no horizon involved.
    Proved,
    /// Depends on the search bounds recorded in the verdict.
    BoundedSearch,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "code")]
pub enum Reason {
    /// `f(a) = a(ba)^k`, `f(b) = b(ab)^m`: the fixed point is `(ab)^ω`.
    #[serde(rename = "SpecialFormABAB")]
    SpecialFormAbab,
    ChunksEquivalent {
        #[serde(rename = "K")]
        k: u64,
        #[serde(with = "crate::bigstr")]
        period: num_bigint::BigUint,
    },
    EventualWitnessFound {
        #[serde(rename = "K")]
        k: u64,
        c: u64,
    },
    #[serde(rename = "Theta2AbsGtOne_Unbalanced")]
    Theta2AbsGtOneUnbalanced,
    IrrationalFrequencies,
    #[serde(rename = "Theta2One_FormFails")]
    Theta2OneFormFails,
    Theta2MinusOne,
    #[serde(rename = "NonPrimitive_PeriodicCertificate")]
    NonPrimitivePeriodicCertificate,
    #[serde(rename = "NonPrimitive_NoPeriodFound")]
    NonPrimitiveNoPeriodFound,
    #[serde(rename = "Rank1_PureRefuted_EventualOpen")]
    Rank1PureRefutedEventualOpen,
    ResourceExhausted,
}

impl Reason {
    /// The reason code as it appears in reports.
    pub fn code(&self) -> &'static str {
        match self {
            Reason::SpecialFormAbab => "SpecialFormABAB",
            Reason::ChunksEquivalent { .. } => "ChunksEquivalent",
            Reason::EventualWitnessFound { .. } => "EventualWitnessFound",
            Reason::Theta2AbsGtOneUnbalanced => "Theta2AbsGtOne_Unbalanced",
            Reason::IrrationalFrequencies => "IrrationalFrequencies",
            Reason::Theta2OneFormFails => "Theta2One_FormFails",
            Reason::Theta2MinusOne => "Theta2MinusOne",
            Reason::NonPrimitivePeriodicCertificate => "NonPrimitive_PeriodicCertificate",
            Reason::NonPrimitiveNoPeriodFound => "NonPrimitive_NoPeriodFound",
            Reason::Rank1PureRefutedEventualOpen => "Rank1_PureRefuted_EventualOpen",
            Reason::ResourceExhausted => "ResourceExhausted",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassifyOptions {
    /// Deepest level tried by the eventual scan.
    pub eventual_k_max: u64,
    /// Period bound for the periodicity search; `None` picks `4·(|f(a)| + |f(b)|)²`.
    pub max_period: Option<usize>,
    /// Preperiod bound for the periodicity search; `None` as for `max_period`.
    pub max_preperiod: Option<usize>,
    pub iteration_cap: u64,
    pub offset_budget: u64,
    /// Prefix length for the imbalance evidence; 0 disables it.
    pub evidence_horizon: usize,
    /// Longest window used for the imbalance evidence.
    pub evidence_nmax: usize,
}

impl Default for ClassifyOptions {
    fn default() -> ClassifyOptions {
        ClassifyOptions {
            eventual_k_max: 8,
            max_period: None,
            max_preperiod: None,
            iteration_cap: DEFAULT_ITERATION_CAP,
            offset_budget: DEFAULT_OFFSET_BUDGET,
            evidence_horizon: 100_000,
            evidence_nmax: 500,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witnesses {
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub pure: Option<PureVerdict>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub eventual: Option<EventualWitness>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub periodic: Option<EventuallyPeriodicWord>,
}

/// Bounds the verdict depends on; empty for answers reached without search.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Bounds {
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub max_period: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub max_preperiod: Option<usize>,
    /// Levels `1..=eventual_levels` were scanned without a witness.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub eventual_levels: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub iteration_cap: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub offset_budget: Option<u64>,
}

/// Measured on a prefix; never part of a proof.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Evidence {
    pub horizon: usize,
    pub window_max: usize,
    pub max_imbalance: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub morphism: BinaryMorphism,
    pub matrix: MorphismMatrix,
    pub spectral: SpectralProfile,
    pub rank1: Option<Rank1Form>,
    pub answer: Answer,
    pub certainty: Certainty,
    pub reason: Reason,
    pub witnesses: Witnesses,
    pub bounds: Bounds,
    pub evidence: Option<Evidence>,
}

/// `f(a) = a(ba)^k` and `f(b) = b(ab)^m` for some `k, m >= 0`.
pub fn is_special_form(f: &BinaryMorphism) -> bool {
    let alternates = |w: &Word, first: Letter| w.len() % 2 == 1 && w.iter().enumerate().all(|(i, l)| l == if i % 2 == 0 { first } else { first.other() });
    alternates(f.image_a(), Letter::A) && alternates(f.image_b(), Letter::B)
}

/// Classifies `f^ω(a)` with respect to abelian periodicity.
pub fn classify(f: &BinaryMorphism, options: &ClassifyOptions) -> Result<Verdict> {
    f.require_prolongable()?;
    let matrix = f.matrix();
    let spectral = spectral_profile(&matrix);
    let mut verdict = Verdict {
        morphism: f.clone(),
        matrix,
        spectral: spectral.clone(),
        rank1: rank1_form(f).ok(),
        answer: Answer::Unknown,
        certainty: Certainty::BoundedSearch,
        reason: Reason::ResourceExhausted,
        witnesses: Witnesses::default(),
        bounds: Bounds::default(),
        evidence: None,
    };
    if !spectral.primitive {
        non_primitive(f, options, &mut verdict)?;
    } else if spectral.theta2_kind != Theta2Kind::Zero {
        spectral_branch(f, &spectral, &mut verdict);
    } else {
        rank_one_branch(f, options, &mut verdict)?;
    }
    if matches!(
        verdict.reason,
        Reason::NonPrimitiveNoPeriodFound | Reason::Theta2AbsGtOneUnbalanced | Reason::Theta2OneFormFails
    ) {
        verdict.evidence = imbalance_evidence(f, options)?;
    }
    Ok(verdict)
}

fn settle(verdict: &mut Verdict, answer: Answer, certainty: Certainty, reason: Reason) {
    verdict.answer = answer;
    verdict.certainty = certainty;
    verdict.reason = reason;
}

fn non_primitive(f: &BinaryMorphism, options: &ClassifyOptions, verdict: &mut Verdict) -> Result<()> {
    if f.image_a().count(Letter::B) == 0 {
        verdict.witnesses.periodic = Some(EventuallyPeriodicWord::new(Word::new(), Word::from_iter([Letter::A])));
        settle(verdict, Answer::AbelianPeriodic, Certainty::Proved, Reason::NonPrimitivePeriodicCertificate);
        return Ok(());
    }
    // a non-primitive matrix with |f(a)|_a >= 1 and |f(a)|_b >= 1 has |f(b)|_a = 0
    let (default_p, default_r) = default_bounds(f);
    let max_p = options.max_period.unwrap_or(default_p);
    let max_r = options.max_preperiod.unwrap_or(default_r);
    match decide_periodic(f, max_p, max_r)? {
        PeriodicityVerdict::Periodic(word) => {
            verdict.witnesses.periodic = Some(word);
            settle(verdict, Answer::AbelianPeriodic, Certainty::Proved, Reason::NonPrimitivePeriodicCertificate);
        }
        PeriodicityVerdict::NotFoundWithinBounds { max_p, max_r } => {
            verdict.bounds.max_period = Some(max_p);
            verdict.bounds.max_preperiod = Some(max_r);
            settle(
                verdict,
                Answer::NotAbelianPeriodic,
                Certainty::BoundedSearch,
                Reason::NonPrimitiveNoPeriodFound,
            );
        }
    }
    Ok(())
}

fn spectral_branch(f: &BinaryMorphism, spectral: &SpectralProfile, verdict: &mut Verdict) {
    if is_special_form(f) {
        let period = Word::parse("ab").expect("literal word");
        verdict.witnesses.periodic = Some(EventuallyPeriodicWord::new(Word::new(), period));
        settle(verdict, Answer::AbelianPeriodic, Certainty::Proved, Reason::SpecialFormAbab);
        return;
    }
    let reason = match (spectral.theta2_kind, spectral.theta2_abs_class) {
        (Theta2Kind::IntegerNonzero { value: 1 }, _) => Reason::Theta2OneFormFails,
        (Theta2Kind::IntegerNonzero { value: -1 }, _) => Reason::Theta2MinusOne,
        (_, AbsClass::GtOne) => Reason::Theta2AbsGtOneUnbalanced,
        (_, AbsClass::InOpenUnitInterval) => Reason::IrrationalFrequencies,
        (kind, class) => unreachable!("θ₂ ≠ 0 with kind {kind:?} and class {class:?}"),
    };
    settle(verdict, Answer::NotAbelianPeriodic, Certainty::Proved, reason);
}

fn rank_one_branch(f: &BinaryMorphism, options: &ClassifyOptions, verdict: &mut Verdict) -> Result<()> {
    let pure = decide_pure_with_cap(f, options.iteration_cap)?;
    let form = pure.form;
    match pure.outcome.clone() {
        PureOutcome::PureAbelianPeriodic { k, period } => {
            verdict.witnesses.pure = Some(pure);
            settle(
                verdict,
                Answer::PureAbelianPeriodic,
                Certainty::Proved,
                Reason::ChunksEquivalent { k, period },
            );
            return Ok(());
        }
        PureOutcome::ResourceExhausted { .. } => {
            verdict.witnesses.pure = Some(pure);
            verdict.bounds.iteration_cap = Some(options.iteration_cap);
            settle(verdict, Answer::Unknown, Certainty::BoundedSearch, Reason::ResourceExhausted);
            return Ok(());
        }
        PureOutcome::NotPure { .. } => verdict.witnesses.pure = Some(pure),
    }
    let mut scanned = 0;
    for k in 1..=options.eventual_k_max {
        match eventual_check_with_budget(f, &form, k, options.offset_budget) {
            Ok(Some(witness)) => {
                let reason = Reason::EventualWitnessFound {
                    k,
                    c: witness.cut_offset,
                };
                verdict.witnesses.eventual = Some(witness);
                settle(verdict, Answer::AbelianPeriodic, Certainty::Proved, reason);
                return Ok(());
            }
            Ok(None) => scanned = k,
            Err(Error::ScanBudgetExceeded { .. }) => {
                verdict.bounds.offset_budget = Some(options.offset_budget);
                break;
            }
            Err(e) => return Err(e),
        }
    }
    verdict.bounds.eventual_levels = Some(scanned);
    settle(
        verdict,
        Answer::Unknown,
        Certainty::BoundedSearch,
        Reason::Rank1PureRefutedEventualOpen,
    );
    Ok(())
}

fn imbalance_evidence(f: &BinaryMorphism, options: &ClassifyOptions) -> Result<Option<Evidence>> {
    if options.evidence_horizon == 0 {
        return Ok(None);
    }
    let prefix = fixed_point_prefix(f, options.evidence_horizon)?;
    let window_max = options.evidence_nmax.min(prefix.len() / 2);
    Ok(Some(Evidence {
        horizon: prefix.len(),
        window_max,
        max_imbalance: max_imbalance(&prefix, window_max),
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(a: &str, b: &str) -> Verdict {
        classify(&BinaryMorphism::from_images(a, b).unwrap(), &ClassifyOptions::default()).unwrap()
    }

    #[test]
    fn spec_examples() {
        let v = run("ab", "ba");
        assert_eq!((v.answer, v.certainty), (Answer::PureAbelianPeriodic, Certainty::Proved));
        assert_eq!(v.reason, Reason::ChunksEquivalent { k: 1, period: 2u32.into() });

        let v = run("aab", "bbaab");
        assert_eq!((v.answer, v.certainty, v.reason), (Answer::NotAbelianPeriodic, Certainty::Proved, Reason::Theta2OneFormFails));

        let v = run("ab", "bbaa");
        assert_eq!((v.answer, v.certainty, v.reason.clone()), (Answer::Unknown, Certainty::BoundedSearch, Reason::Rank1PureRefutedEventualOpen));
        assert!(matches!(v.witnesses.pure.unwrap().outcome, PureOutcome::NotPure { .. }));

        assert_eq!(run("ab", "a").reason, Reason::IrrationalFrequencies);
        assert_eq!(run("aaab", "abbb").reason, Reason::Theta2AbsGtOneUnbalanced);
    }

    #[test]
    fn special_form_detection() {
        let f = |a: &str, b: &str| is_special_form(&BinaryMorphism::from_images(a, b).unwrap());
        assert!(f("aba", "bab"));
        assert!(f("ababa", "bababab"));
        assert!(f("aba", "b"));
        assert!(!f("abb", "bab"));
        assert!(!f("ab", "ba"));
    }

    #[test]
    fn non_primitive_branches() {
        let v = run("aa", "ab");
        assert_eq!((v.answer, v.reason.clone()), (Answer::AbelianPeriodic, Reason::NonPrimitivePeriodicCertificate));
        let v = run("ab", "b");
        let w = v.witnesses.periodic.unwrap();
        assert_eq!((w.preperiod.to_string(), w.period.to_string()), ("a".into(), "b".into()));
        let v = run("aab", "b");
        assert_eq!((v.answer, v.certainty), (Answer::NotAbelianPeriodic, Certainty::BoundedSearch));
        assert!(v.bounds.max_period.is_some());
        assert!(v.evidence.unwrap().max_imbalance >= 2);
    }

    #[test]
    fn theta2_minus_one() {
        // [[1,2],[2,1]]: eigenvalues 3 and −1
        let v = run("abb", "baa");
        assert_eq!(v.reason, Reason::Theta2MinusOne);
    }

    #[test]
    fn reason_codes_round_trip() {
        for v in [run("ab", "ba"), run("ab", "bbaa"), run("aab", "b"), run("aba", "bab")] {
            let text = serde_json::to_string(&v).unwrap();
            let back: Verdict = serde_json::from_str(&text).unwrap();
            assert_eq!(back, v);
            let value: serde_json::Value = serde_json::from_str(&text).unwrap();
            assert_eq!(value["reason"]["code"], v.reason.code());
        }
    }

    #[test]
    fn errors_surface() {
        let f = BinaryMorphism::from_images("ba", "ab").unwrap();
        assert_eq!(classify(&f, &ClassifyOptions::default()), Err(Error::NotProlongable));
    }
}
