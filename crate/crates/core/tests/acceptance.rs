use std::collections::BTreeSet;

use num_bigint::BigUint;
use num_integer::Integer;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use abelian_morphic::abelian::{abelian_period_holds, abelian_period_oracle, letters_at_progression, theta2_one_invariant_check};
use abelian_morphic::lift::{build_lift, lift_verify};
use abelian_morphic::rank1::{
    block_position_residues, configuration_of, coprime_residue_sets, decide_pure, eventual_check_at, eventual_conditions_at,
    prefix_parikh, rank1_form, PureOutcome,
};
use abelian_morphic::{
    classify, fixed_point_prefix, parikh, power_lengths, spectral_profile, Answer, BinaryMorphism, Certainty, ClassifyOptions,
    Letter, Reason, Theta2Kind, Word,
};

fn m(a: &str, b: &str) -> BinaryMorphism {
    BinaryMorphism::from_images(a, b).unwrap()
}

fn w(s: &str) -> Word {
    Word::parse(s).unwrap()
}

fn verdict_line(n: u32, ok: bool) {
    println!("{} criterion {n}", if ok { "PASS" } else { "FAIL" });
    assert!(ok, "criterion {n} failed");
}

fn random_word(rng: &mut ChaCha8Rng, max_len: usize) -> Word {
    let len = rng.gen_range(0..=max_len);
    (0..len).map(|_| Letter::from_bit(rng.gen())).collect()
}

fn random_morphism(rng: &mut ChaCha8Rng, max_len: usize) -> BinaryMorphism {
    loop {
        let a = random_word(rng, max_len);
        let b = random_word(rng, max_len);
        if let Ok(f) = BinaryMorphism::new(a, b) {
            return f;
        }
    }
}

/// Random morphism prolongable on `a` with a primitive matrix.
fn random_primitive(rng: &mut ChaCha8Rng, max_len: usize) -> BinaryMorphism {
    loop {
        let mut a = w("a");
        a.extend_from_word(&random_word(rng, max_len - 1));
        let Ok(f) = BinaryMorphism::new(a, random_word(rng, max_len)) else { continue };
        if f.is_prolongable_on_a() && f.matrix().is_primitive() {
            return f;
        }
    }
}

#[test]
fn criterion_01_worked_example() {
    let f = m("ab", "bbaa");
    let mut ok = f.matrix().rows() == [[1, 2], [1, 2]];
    ok &= spectral_profile(&f.matrix()).theta2_kind == Theta2Kind::Zero;
    let form = rank1_form(&f).unwrap();
    ok &= (form.a_weight, form.b_weight, form.n, form.m) == (1, 1, 1, 2);
    let pure = decide_pure(&f).unwrap();
    ok &= matches!(pure.outcome, PureOutcome::NotPure { iterations_used, cycle_detected: true } if iterations_used <= 2);
    ok &= pure.bound == BigUint::from(6u32);
    ok &= fixed_point_prefix(&f, 18).unwrap() == w("abbbaabbaabbaaabab");
    verdict_line(1, ok);
}

#[test]
fn criterion_02_lift_golden() {
    let f = m("ab", "bbaa");
    let lift = build_lift(&f).unwrap();
    let images: Vec<String> = lift
        .images
        .iter()
        .map(|img| img.iter().map(|q| char::from(b'1' + *q as u8)).collect())
        .collect();
    let mut ok = images == ["123", "456", "345", "634", "561", "212"];
    let coding: String = lift.coding.iter().map(|l| l.as_char()).collect();
    ok &= coding == "abbbaa";
    ok &= lift_verify(&f, &lift, 100_000).unwrap();
    let dfao = lift.dfao();
    let prefix = fixed_point_prefix(&f, 10_000).unwrap();
    ok &= (0..10_000u64).all(|n| dfao.eval_u64(n) == prefix.at(n as usize));
    ok &= lift.is_bijective();
    verdict_line(2, ok);
}

/// The golden corpus with the expected answer, reason code and certainty.
fn golden_corpus() -> Vec<(BinaryMorphism, Answer, &'static str, Certainty)> {
    use Answer::*;
    use Certainty::*;
    vec![
        (m("ab", "ba"), PureAbelianPeriodic, "ChunksEquivalent", Proved),
        (m("aba", "bab"), AbelianPeriodic, "SpecialFormABAB", Proved),
        (m("ab", "a"), NotAbelianPeriodic, "IrrationalFrequencies", Proved),
        (m("aab", "bbaab"), NotAbelianPeriodic, "Theta2One_FormFails", Proved),
        (m("aaab", "abbb"), NotAbelianPeriodic, "Theta2AbsGtOne_Unbalanced", Proved),
        (m("ab", "b"), AbelianPeriodic, "NonPrimitive_PeriodicCertificate", Proved),
        (m("aab", "b"), NotAbelianPeriodic, "NonPrimitive_NoPeriodFound", BoundedSearch),
        (m("ab", "bbaa"), Unknown, "Rank1_PureRefuted_EventualOpen", BoundedSearch),
        (m("abba", "ab"), PureAbelianPeriodic, "ChunksEquivalent", Proved),
        (m("ababa", "bababab"), AbelianPeriodic, "SpecialFormABAB", Proved),
    ]
}

#[test]
fn criterion_03_branch_coverage() {
    let options = ClassifyOptions::default();
    let mut ok = true;
    for (f, answer, code, certainty) in golden_corpus() {
        let v = classify(&f, &options).unwrap();
        let matches = v.answer == answer && v.reason.code() == code && v.certainty == certainty;
        if !matches {
            println!("  {f}: got {:?} / {} / {:?}", v.answer, v.reason.code(), v.certainty);
        }
        ok &= matches;
        match v.reason {
            Reason::ChunksEquivalent { k, ref period } => ok &= k == 1 && *period == BigUint::from(2u32),
            Reason::NonPrimitivePeriodicCertificate => {
                let cert = v.witnesses.periodic.as_ref().unwrap();
                ok &= cert.preperiod == w("a") && cert.period == w("b");
            }
            Reason::Rank1PureRefutedEventualOpen => {
                ok &= v.witnesses.pure.as_ref().is_some_and(|p| matches!(p.outcome, PureOutcome::NotPure { .. }));
            }
            _ => {}
        }
    }
    verdict_line(3, ok);
}

#[test]
fn criterion_04_oracle_agreement() {
    let options = ClassifyOptions::default();
    let mut ok = true;
    for (f, ..) in golden_corpus() {
        let v = classify(&f, &options).unwrap();
        if v.certainty != Certainty::Proved {
            continue;
        }
        let prefix = fixed_point_prefix(&f, 100_000).unwrap();
        let agrees = if v.answer.is_abelian_periodic() {
            let (r, p) = match (&v.reason, &v.witnesses.periodic) {
                (Reason::ChunksEquivalent { period, .. }, _) => (0, usize::try_from(period).unwrap()),
                (_, Some(cert)) => (cert.preperiod.len(), cert.period.len()),
                _ => unreachable!("positive verdict without a witness"),
            };
            abelian_period_holds(&prefix, r, p)
        } else {
            abelian_period_oracle(&prefix, 200, 200).unwrap().is_none()
        };
        if !agrees {
            println!("  {f}: oracle disagrees with {:?}", v.answer);
        }
        ok &= agrees;
    }
    verdict_line(4, ok);
}

#[test]
fn criterion_05_eventual_refutation() {
    let f = m("ab", "bbaa");
    let form = rank1_form(&f).unwrap();
    let mut ok = eventual_check_at(&f, &form, 1).unwrap().is_none();
    let near = eventual_conditions_at(&f, &form, 1, &BigUint::from(1u32)).unwrap();
    ok &= near.chunks_equivalent && !near.prefixes_equivalent;
    ok &= near.prefix_a == parikh(&w("a")) && near.prefix_b == parikh(&w("b"));
    let at_zero = eventual_conditions_at(&f, &form, 1, &BigUint::from(0u32)).unwrap();
    ok &= !at_zero.chunks_equivalent;
    verdict_line(5, ok);
}

#[test]
fn criterion_06_residue_coverage() {
    let f = m("ab", "bbaa");
    let form = rank1_form(&f).unwrap();
    let mut ok = true;
    for t in [1, 2] {
        for d in [5, 7] {
            let residues = block_position_residues(&f, &form, t, d, 3u64.pow(12)).unwrap();
            ok &= residues == (0..d).collect::<BTreeSet<_>>();
        }
    }
    verdict_line(6, ok);
}

#[test]
fn criterion_07_progression_letters() {
    let lift = build_lift(&m("ab", "bbaa")).unwrap();
    let prefix = lift.fixed_point_prefix(3usize.pow(10));
    let mut ok = true;
    for d in [2, 4, 6, 8] {
        for r in 0..d {
            ok &= letters_at_progression(&prefix, r, d).unwrap().len() >= 3;
        }
    }
    verdict_line(7, ok);
}

#[test]
fn criterion_08_prefix_parikh_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut ok = true;
    for _ in 0..1000 {
        let f = random_primitive(&mut rng, 5);
        let ell = rng.gen_range(0..=1_000_000usize);
        let mut t = 1;
        while power_lengths(&f, t).0 < BigUint::from(ell) {
            t += 1;
        }
        let fast = prefix_parikh(&f, Letter::A, t, &BigUint::from(ell)).unwrap();
        ok &= fast == parikh(&fixed_point_prefix(&f, ell).unwrap());
    }
    verdict_line(8, ok);
}

#[test]
fn criterion_09_algebra() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut ok = true;

    for _ in 0..1000 {
        let (u, v) = (random_word(&mut rng, 40), random_word(&mut rng, 40));
        ok &= parikh(&u.concat(&v)) == &parikh(&u) + &parikh(&v);
    }

    for _ in 0..1000 {
        let f = random_morphism(&mut rng, 6);
        let u = random_word(&mut rng, 60);
        let [[m11, m12], [m21, m22]] = f.matrix().rows();
        let (ua, ub) = (u.count(Letter::A) as u64, u.count(Letter::B) as u64);
        let image = f.apply(&u);
        ok &= image.count(Letter::A) as u64 == m11 * ua + m12 * ub && image.count(Letter::B) as u64 == m21 * ua + m22 * ub;
    }

    for _ in 0..200 {
        let (f, g) = (random_morphism(&mut rng, 6), random_morphism(&mut rng, 6));
        ok &= f.compose(&g).matrix() == f.matrix().mul(&g.matrix());
    }

    let mut triples = 0;
    while triples < 500 {
        let (n, d, r) = (rng.gen_range(1..1000u64), rng.gen_range(1..200u64), rng.gen_range(0..1000u64));
        if n.gcd(&d) != 1 {
            continue;
        }
        let (scaled, plain) = coprime_residue_sets(n, d, r);
        ok &= scaled == plain;
        triples += 1;
    }

    let theta_one: Vec<BinaryMorphism> = std::iter::repeat_with(|| random_morphism(&mut rng, 6))
        .filter(|f| spectral_profile(&f.matrix()).theta2_kind == Theta2Kind::IntegerNonzero { value: 1 })
        .take(20)
        .collect();
    for i in 0..1000 {
        let u = random_word(&mut rng, 60);
        ok &= theta2_one_invariant_check(&theta_one[i % theta_one.len()], &u).unwrap();
    }

    for (f, ..) in golden_corpus() {
        let Ok(form) = rank1_form(&f) else { continue };
        if f.matrix().determinant() != 0 {
            continue;
        }
        let mut config = configuration_of(&f, &form, 1);
        for t in 2..=20 {
            config = config.advance(&f, &form);
            ok &= config == configuration_of(&f, &form, t);
        }
    }
    verdict_line(9, ok);
}

/// Every uniform morphism with block length in `2..=4` prolongable on `a`.
fn uniform_morphisms() -> Vec<BinaryMorphism> {
    let words = |len: usize| -> Vec<Word> {
        (0..1u32 << len).map(|bits| (0..len).map(|i| Letter::from_bit(bits >> i & 1 == 1)).collect()).collect()
    };
    let mut out = Vec::new();
    for len in 2..=4 {
        for a in words(len).into_iter().filter(|u| u.at(0) == Letter::A) {
            for b in words(len) {
                out.push(BinaryMorphism::new(a.clone(), b).unwrap());
            }
        }
    }
    out
}

/// The two-case characterization: `θ₂ = 0`, or `f(a) = a(ba)^k`, `f(b) = b(ab)^k`.
fn predicted_abelian_periodic(f: &BinaryMorphism) -> bool {
    let theta2 = f.image_a().count(Letter::A) as i64 - f.image_b().count(Letter::A) as i64;
    theta2 == 0 || abelian_morphic::classify::is_special_form(f)
}

fn uniform_mismatches(primitive_only: bool) -> Vec<String> {
    let options = ClassifyOptions::default();
    let mut mismatches = Vec::new();
    for f in uniform_morphisms() {
        if primitive_only && !f.matrix().is_primitive() {
            continue;
        }
        let v = classify(&f, &options).unwrap();
        let predicted = predicted_abelian_periodic(&f);
        if v.answer.is_abelian_periodic() != predicted || v.answer == Answer::Unknown {
            mismatches.push(format!("{f}: classify {:?} ({}), characterization {predicted}", v.answer, v.reason.code()));
        }
    }
    mismatches
}

#[test]
fn criterion_10_uniform_characterization() {
    let mismatches = uniform_mismatches(false);
    for line in &mismatches {
        println!("  {line}");
    }
    verdict_line(10, mismatches.is_empty());
}

#[test]
fn uniform_characterization_on_primitive_morphisms() {
    assert_eq!(uniform_mismatches(true), Vec::<String>::new());
}
