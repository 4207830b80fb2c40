mod common;

use common::britton;
use num_bigint::BigInt;
use pcgroup::baumslag::{
    blowup_word, conj_bg, conj_bg_core, conjugate_by, division_to_conjugacy, tower_t_power,
    tower_t_power_offset, verify_witness, word_problem, Beta, BetaFactorization, ConjugacyError,
    ConjugacyPath, DEFAULT_WORD_CAP,
};
use pcgroup::bs12::BsElement;
use pcgroup::power_circuit::{steps, BitBudget, PcError, ReducedCircuit};
use pcgroup::word::{Letter, Word};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn w(s: &str) -> Word {
    Word::parse(s, true).unwrap()
}

fn bf(s: &str) -> BetaFactorization {
    BetaFactorization::from_word(&w(s))
}

fn expand(x: &BetaFactorization) -> (BsElement, Vec<(Beta, BsElement)>) {
    x.expand(BitBudget::default()).unwrap()
}

fn random_word<R: Rng>(rng: &mut R, max_len: usize) -> Word {
    let n = rng.gen_range(0..=max_len);
    let all = [Letter::A, Letter::AInv, Letter::T, Letter::TInv, Letter::B, Letter::BInv];
    Word((0..n).map(|_| all[rng.gen_range(0..6)]).collect())
}

/// A word whose cyclically reduced form has positive β-length.
fn random_non_h<R: Rng>(rng: &mut R, max_len: usize) -> (Word, BetaFactorization) {
    loop {
        let x = random_word(rng, max_len);
        let f = BetaFactorization::from_word(&x);
        let (xh, _) = f.cyclically_reduce();
        if xh.beta_length() > 0 {
            return (x, xh);
        }
    }
}

#[test]
fn factorization_examples() {
    let x = bf("b a B");
    assert_eq!(x.beta_length(), 2);
    assert_eq!(x.signature(), vec![Beta::B, Beta::BInv]);
    let (g0, fs) = expand(&x);
    assert!(g0.is_identity());
    assert_eq!(fs[0].1, BsElement::a_pow(1));
    assert!(fs[1].1.is_identity());
    let y = bf("a t");
    assert_eq!(y.beta_length(), 0);
    assert_eq!(expand(&y).0, BsElement::from_ints(1, 1));
    assert_eq!(bf("").beta_length(), 0);
}

#[test]
fn britton_examples() {
    let cases = [("b a B", (0, 1)), ("B t b", (1, 0)), ("b a a B", (0, 2)), ("B b a", (1, 0))];
    for (s, (r, m)) in cases {
        let x = bf(s).britton_reduce();
        assert_eq!(x.beta_length(), 0, "{s}");
        assert_eq!(expand(&x).0, BsElement::from_ints(r, m), "{s}");
    }
    let x = bf("b t B").britton_reduce();
    assert_eq!(x.beta_length(), 2);
    assert!(x.is_britton_reduced());
    assert!(!bf("b a B").is_britton_reduced());
}

#[test]
fn cyclic_reduction_examples() {
    let x = bf("b t B");
    let (xh, u) = x.cyclically_reduce();
    assert!(xh.is_cyclically_reduced());
    assert!(word_problem(&conjugate_by(&u, &x), &xh));
    let x = bf("a b t B A");
    let (xh, u) = x.cyclically_reduce();
    assert!(xh.is_cyclically_reduced());
    assert!(word_problem(&conjugate_by(&u, &x), &xh));
    let x = bf("B a t");
    let (xh, u) = x.cyclically_reduce();
    assert_eq!(xh.beta_length(), 1);
    assert!(word_problem(&u, &BetaFactorization::identity()));
}

#[test]
fn word_problem_examples() {
    assert!(word_problem(&bf("b a B"), &bf("t")));
    let w2 = "b b t a T B a b t A T B B";
    assert_eq!(w(w2), blowup_word(2).unwrap());
    assert!(word_problem(&bf(w2), &bf("t t t t")));
    assert!(britton::equal(&w(w2), &w("t t t t")));
    // Repeating w1 instead of inverting it gives b t² a t² B, not a t-power.
    assert!(!word_problem(&bf("b b t a T B a b t a T B B"), &bf("t t t t")));
    assert!(!britton::equal(&w("b b t a T B a b t a T B B"), &w("t t t t")));
    assert!(!word_problem(&bf("a"), &bf("t")));
    assert!(word_problem(&bf("t a T"), &bf("a a")));
    assert!(!word_problem(&bf("b"), &bf("")));
}

#[test]
fn word_problem_agrees_with_explicit_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut equal = 0;
    for i in 0..3000 {
        let x = random_word(&mut rng, 16);
        // Half the pairs are equal by construction: y = x u u⁻¹ with a pinch pattern inserted.
        let y = if i % 2 == 0 {
            let e = rng.gen_range(-3..=3);
            let mut v = x.0.clone();
            let pos = rng.gen_range(0..=v.len());
            let ins: Vec<Letter> = std::iter::once(Letter::B)
                .chain(Word::power(Letter::A, e).0)
                .chain([Letter::BInv])
                .chain(Word::power(Letter::TInv, e).0)
                .collect();
            v.splice(pos..pos, ins);
            Word(v)
        } else {
            random_word(&mut rng, 16)
        };
        let expect = britton::equal(&x, &y);
        equal += expect as usize;
        let got = word_problem(&BetaFactorization::from_word(&x), &BetaFactorization::from_word(&y));
        assert_eq!(got, expect, "{x} vs {y}");
    }
    assert!(equal >= 1500);
}

#[test]
fn britton_reduction_matches_oracle_shape() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for _ in 0..2000 {
        let x = random_word(&mut rng, 20);
        let r = BetaFactorization::from_word(&x).britton_reduce();
        assert!(r.is_britton_reduced());
        let (g0, fs) = britton::reduce(&x);
        let sig: Vec<Beta> = fs.iter().map(|f| if f.0 { Beta::B } else { Beta::BInv }).collect();
        assert_eq!(r.signature(), sig, "{x}");
        if fs.is_empty() {
            assert_eq!(expand(&r).0, g0);
        }
        assert!(word_problem(&r, &BetaFactorization::from_word(&x)));
    }
}

#[test]
fn tower_words_equal_tower_powers() {
    for n in 0..=8u32 {
        let bw = blowup_word(n).unwrap();
        assert_eq!(bw.len(), (1usize << (n + 2)) - 3);
        let x = BetaFactorization::from_word(&bw);
        let k = n as usize + 1;
        assert!(word_problem(&x, &tower_t_power(k)), "n={n}");
        assert!(!word_problem(&x, &tower_t_power_offset(k, 1)), "n={n}");
        assert!(!word_problem(&x, &tower_t_power_offset(k, -1)), "n={n}");
        assert!(!word_problem(&x, &tower_t_power(n as usize)), "n={n}");
    }
    assert_eq!(blowup_word(0).unwrap().to_string(), "t");
    assert_eq!(blowup_word(1).unwrap().to_string(), "btaTB");
    assert!(blowup_word(21).is_err());
}

#[test]
fn core_examples() {
    let x = bf("B a t");
    let y = bf("B A A t t");
    let ans = conj_bg_core(&x, &y).unwrap();
    assert!(ans.decision);
    assert_eq!(ans.path, ConjugacyPath::NonHCaseN1);
    let z = ans.witness.unwrap();
    assert!(verify_witness(&x, &y, &z));
    assert!(word_problem(&z, &bf("a")));

    let ans = conj_bg_core(&x, &x).unwrap();
    assert!(ans.decision);
    assert!(word_problem(ans.witness.as_ref().unwrap(), &BetaFactorization::identity()));

    let ans = conj_bg_core(&x, &bf("B a a t")).unwrap();
    assert!(!ans.decision);

    assert_eq!(conj_bg_core(&bf("a"), &bf("a")).unwrap_err(), ConjugacyError::ZeroBetaLength);
    assert_eq!(
        conj_bg_core(&bf("b t B t"), &bf("b t B t")).unwrap_err(),
        ConjugacyError::NotCyclicallyReduced
    );
}

/// All words of length at most `n`.
fn all_words(n: usize) -> Vec<Word> {
    let all = [Letter::A, Letter::AInv, Letter::T, Letter::TInv, Letter::B, Letter::BInv];
    let mut out = vec![Word::new()];
    let mut layer = vec![Word::new()];
    for _ in 0..n {
        let mut next = Vec::new();
        for u in &layer {
            for &l in &all {
                if u.letters().last() == Some(&l.inverse()) {
                    continue;
                }
                let mut v = u.clone();
                v.0.push(l);
                next.push(v);
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

#[test]
fn no_answer_survives_bounded_conjugator_search() {
    let x = w("B a t");
    let y = w("B a a t");
    for z in all_words(6) {
        let conj = z.concat(&x).concat(&z.inverse());
        assert!(!britton::equal(&conj, &y), "witness {z}");
    }
}

#[test]
fn conj_bg_decisions_agree_with_bounded_search() {
    // Every yes found by short conjugators must be a yes; every no must
    // survive the search.
    let zs = all_words(3);
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for _ in 0..150 {
        let x = random_word(&mut rng, 6);
        let y = if rng.gen_bool(0.5) {
            let z = &zs[rng.gen_range(0..zs.len())];
            z.concat(&x).concat(&z.inverse())
        } else {
            random_word(&mut rng, 6)
        };
        let (fx, fy) = (BetaFactorization::from_word(&x), BetaFactorization::from_word(&y));
        let ans = conj_bg(&fx, &fy, BitBudget::default()).unwrap();
        if ans.decision {
            assert!(verify_witness(&fx, &fy, ans.witness.as_ref().unwrap()), "{x} {y}");
        } else {
            for z in &zs {
                assert!(!britton::equal(&z.concat(&x).concat(&z.inverse()), &y), "{x} {y} by {z}");
            }
        }
    }
}

#[test]
fn h_path_examples() {
    let budget = BitBudget::default();
    let ans = conj_bg(&bf("a"), &bf("a a"), budget).unwrap();
    assert!(ans.decision);
    assert_eq!(ans.path, ConjugacyPath::HDirect);
    let ans = conj_bg(&bf("t t t"), &bf("t t t t t t"), budget).unwrap();
    assert!(ans.decision);
    assert_eq!(ans.path, ConjugacyPath::HVerdi);
    assert!(verify_witness(&bf("t t t"), &bf("t t t t t t"), ans.witness.as_ref().unwrap()));
    let ans = conj_bg(&bf("t t t"), &bf("t t t t t"), budget).unwrap();
    assert!(!ans.decision);
    assert_eq!(ans.path, ConjugacyPath::HVerdi);
    let ans = conj_bg(&bf("a t t"), &bf("t t t"), budget).unwrap();
    assert!(!ans.decision);
    assert_eq!(ans.path, ConjugacyPath::HNixH);
    let ans = conj_bg(&bf(""), &bf("b B"), budget).unwrap();
    assert!(ans.decision);
    assert!(!conj_bg(&bf(""), &bf("a"), budget).unwrap().decision);
    let ans = conj_bg(&bf("a"), &bf("t"), budget).unwrap();
    assert!(ans.decision);
    assert!(verify_witness(&bf("a"), &bf("t"), ans.witness.as_ref().unwrap()));
}

fn verdi(m: i64, q: i64) -> bool {
    let (mut m, mut q) = (m, q);
    while m % 2 == 0 {
        m /= 2;
    }
    while q % 2 == 0 {
        q /= 2;
    }
    m == q
}

#[test]
fn verdi_exhaustive() {
    let budget = BitBudget::default();
    for m in -20i64..=20 {
        for q in -20i64..=20 {
            if m == 0 || q == 0 {
                continue;
            }
            let x = BetaFactorization::from_bs(&BsElement::t_pow(m));
            let y = BetaFactorization::from_bs(&BsElement::t_pow(q));
            let ans = conj_bg(&x, &y, budget).unwrap();
            assert_eq!(ans.decision, verdi(m, q), "m={m} q={q}");
            if let Some(z) = &ans.witness {
                assert!(verify_witness(&x, &y, z));
            }
        }
    }
}

#[test]
fn division_reduction() {
    let budget = BitBudget::default();
    for m in 1..=8i64 {
        for s in 1..=8i64 {
            let mut rc = ReducedCircuit::new();
            let mm = rc.from_i64(m);
            let ss = rc.from_i64(s);
            let (x, y) = division_to_conjugacy(&rc, &mm, &ss, DEFAULT_WORD_CAP).unwrap();
            let x = BetaFactorization::from_word(&x);
            let y = BetaFactorization::from_word(&y);
            assert!(word_problem(&x, &BetaFactorization::from_bs(&BsElement::t_pow(m))));
            let ans = conj_bg(&x, &y, budget).unwrap();
            assert_eq!(ans.decision, s % m == 0, "m={m} s={s}");
        }
    }
    let mut rc = ReducedCircuit::new();
    let zero = rc.from_i64(0);
    let one = rc.from_i64(1);
    assert!(division_to_conjugacy(&rc, &zero, &one, DEFAULT_WORD_CAP).is_err());
}

#[test]
fn random_conjugates_are_recognized() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let tiny = BitBudget::new(64).unwrap();
    for _ in 0..300 {
        let (x, _) = random_non_h(&mut rng, 40);
        let z = BetaFactorization::from_word(&random_word(&mut rng, 10));
        let fx = BetaFactorization::from_word(&x);
        let y = conjugate_by(&z, &fx);
        // The non-H path never touches the budget.
        let ans = conj_bg(&fx, &y, tiny).unwrap();
        assert!(ans.decision, "{x}");
        assert!(!ans.path.is_h_path());
        assert!(verify_witness(&fx, &y, ans.witness.as_ref().unwrap()));
        let back = conj_bg(&y, &fx, tiny).unwrap();
        assert!(back.decision);
    }
}

#[test]
fn transpositions_are_conjugate() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for _ in 0..200 {
        let (_, xh) = random_non_h(&mut rng, 30);
        for i in 0..xh.beta_length() {
            let (xi, c) = xh.transposition(i);
            assert!(word_problem(&conjugate_by(&c, &xh), &xi));
            let ans = conj_bg(&xh, &xi, BitBudget::default()).unwrap();
            assert!(ans.decision);
        }
    }
}

#[test]
fn conjugacy_is_symmetric_on_random_pairs() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for _ in 0..500 {
        let x = BetaFactorization::from_word(&random_word(&mut rng, 12));
        let y = BetaFactorization::from_word(&random_word(&mut rng, 12));
        let a = conj_bg(&x, &y, BitBudget::default());
        let b = conj_bg(&y, &x, BitBudget::default());
        match (a, b) {
            (Ok(a), Ok(b)) => assert_eq!(a.decision, b.decision),
            (a, b) => panic!("{a:?} {b:?}"),
        }
    }
}

#[test]
fn huge_h_instances_report_budget() {
    // t^tow(6) against a t^tow(6) conjugate with a shifted a-part.
    let x = tower_t_power(6);
    let y = bf("a").mul(&x);
    let r = conj_bg(&x, &y, BitBudget::default());
    assert!(matches!(r, Err(PcError::BudgetExceeded { .. })));
    // Equal inputs are decided symbolically.
    assert!(conj_bg(&x, &x, BitBudget::default()).unwrap().decision);
}

#[test]
fn witness_text_round_trip() {
    let x = bf("B a t b T a B");
    let z = bf("a b t a");
    let y = conjugate_by(&z, &x);
    let ans = conj_bg(&x, &y, BitBudget::default()).unwrap();
    let wit = ans.witness.unwrap();
    let text = wit.to_pc_text();
    let back = BetaFactorization::from_pc_text(&text).unwrap();
    assert!(word_problem(&wit, &back));
    assert_eq!(back.signature(), wit.signature());
    assert!(BetaFactorization::from_pc_text("pc v1\n").is_err());
}

#[test]
fn step_count_grows_polynomially() {
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    let mut means = Vec::new();
    for &n in &[10usize, 20, 40, 80] {
        let mut total = 0u64;
        let reps = 40;
        for _ in 0..reps {
            let (x, _) = loop {
                let x = Word((0..n).map(|_| random_word(&mut rng, 1).0.first().copied().unwrap_or(Letter::B)).collect());
                let f = BetaFactorization::from_word(&x);
                if f.cyclically_reduce().0.beta_length() > 0 {
                    break (x, f);
                }
            };
            let fx = BetaFactorization::from_word(&x);
            let y = conjugate_by(&BetaFactorization::from_word(&random_word(&mut rng, 10)), &fx);
            steps::reset();
            let ans = conj_bg(&fx, &y, BitBudget::default()).unwrap();
            total += steps::count();
            assert!(ans.decision);
        }
        means.push((n as f64, total as f64 / reps as f64));
    }
    let slope = (means[3].1.ln() - means[0].1.ln()) / (means[3].0.ln() - means[0].0.ln());
    assert!(slope <= 4.5, "slope {slope}, {means:?}");
}

fn arb_word(max: usize) -> impl Strategy<Value = Word> {
    proptest::collection::vec(0usize..6, 0..max).prop_map(|v| {
        let all = [Letter::A, Letter::AInv, Letter::T, Letter::TInv, Letter::B, Letter::BInv];
        Word(v.into_iter().map(|i| all[i]).collect())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn britton_output_admits_no_pinch(x in arb_word(30)) {
        let r = BetaFactorization::from_word(&x).britton_reduce();
        prop_assert!(r.is_britton_reduced());
        prop_assert!(word_problem(&r, &BetaFactorization::from_word(&x)));
    }

    #[test]
    fn inserting_pinches_preserves_value(x in arb_word(20), pos in 0usize..21, e in -4i64..=4) {
        let pos = pos.min(x.len());
        let mut v = x.0.clone();
        let ins: Vec<Letter> = std::iter::once(Letter::B)
            .chain(Word::power(Letter::A, e).0)
            .chain([Letter::BInv])
            .chain(Word::power(Letter::TInv, e).0)
            .collect();
        v.splice(pos..pos, ins);
        let a = BetaFactorization::from_word(&x).britton_reduce();
        let b = BetaFactorization::from_word(&Word(v)).britton_reduce();
        prop_assert!(word_problem(&a, &b));
        prop_assert_eq!(a.signature(), b.signature());
    }

    #[test]
    fn signature_is_independent_of_reduction_order(x in arb_word(20), y in arb_word(20)) {
        // (x y) reduced directly vs x and y reduced first.
        let direct = BetaFactorization::from_word(&x.concat(&y)).britton_reduce();
        let staged = BetaFactorization::from_word(&x).britton_reduce()
            .mul(&BetaFactorization::from_word(&y).britton_reduce());
        prop_assert_eq!(direct.signature(), staged.signature());
    }

    #[test]
    fn conjugate_by_inverse_round_trip(z in arb_word(10), x in arb_word(20)) {
        let z = BetaFactorization::from_word(&z);
        let x = BetaFactorization::from_word(&x);
        let back = conjugate_by(&z, &conjugate_by(&z.inverse(), &x));
        prop_assert!(word_problem(&back, &x));
        prop_assert!(word_problem(&conjugate_by(&BetaFactorization::identity(), &x), &x.britton_reduce()));
    }

    #[test]
    fn cyclic_reduction_conjugator_verifies(x in arb_word(30)) {
        let x = BetaFactorization::from_word(&x);
        let (xh, u) = x.cyclically_reduce();
        prop_assert!(xh.is_cyclically_reduced());
        prop_assert!(word_problem(&conjugate_by(&u, &x), &xh));
    }
}

#[test]
fn big_exponents_stay_symbolic() {
    // b^k t B^k style nesting doubles the exponent height each level.
    let mut x = bf("t");
    for _ in 0..12 {
        x = bf("b").mul(&x).mul(&bf("a")).mul(&x.inverse()).mul(&bf("B"));
    }
    assert_eq!(x.beta_length(), 0);
    assert!(x.circuit_size() < 200);
    let _ = BigInt::from(0);
}
