use num_bigint::BigInt;
use num_traits::One;
use pcgroup::bs12::{conj_bs12, conj_bs12_pc, BsConjugacy, BsElement, Dyadic, PcTriple, Triple};
use pcgroup::power_circuit::{BitBudget, PcError, PowerCircuit, ReducedCircuit};
use pcgroup::word::Word;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn el(r: i64, m: i64) -> BsElement {
    BsElement::from_ints(r, m)
}

fn half(num: i64, shift: i64) -> BsElement {
    BsElement::new(Dyadic::new(BigInt::from(num), -shift), 0)
}

#[test]
fn multiplication_and_inverse_examples() {
    assert_eq!(el(1, 0).mul(&el(0, 1)), el(1, 1));
    assert_eq!(el(0, 1).mul(&el(1, 0)), el(2, 1));
    assert_eq!(el(0, 0).inv(), el(0, 0));
    let inv = el(1, 1).inv();
    assert_eq!(inv.r, Dyadic::new(BigInt::from(-1), -1));
    assert_eq!(inv.m, -1);
    assert_eq!(inv.to_string(), "(-1/2,-1)");
    assert_eq!(el(3, -2).inv(), el(-12, 2));
    let _ = half(1, 1);
}

#[test]
fn word_evaluation_examples() {
    assert_eq!(BsElement::parse("t a T").unwrap(), el(2, 0));
    assert_eq!(BsElement::parse("").unwrap(), el(0, 0));
    assert_eq!(BsElement::parse("a t").unwrap(), el(1, 1));
    assert_eq!(BsElement::parse("T a t").unwrap().to_string(), "(1/2,0)");
    assert!(BsElement::parse("a b").is_err());
    assert!(BsElement::parse("a x").is_err());
}

#[test]
fn triple_normalization_examples() {
    let t = Triple::new(0, 12, 5).normalize();
    assert_eq!(t, Triple::new(2, 3, 3));
    assert_eq!(t.to_element(), el(12, 5));
    let z = Triple::new(3, 0, 4).normalize();
    assert_eq!(z, Triple::new(0, 0, 7));
    assert_eq!(z.to_element(), Triple::new(3, 0, 4).to_element());
    let g = BsElement::parse("T T a a a t").unwrap();
    assert_eq!(Triple::from_element(&g).to_element(), g);
}

#[test]
fn conjugacy_examples() {
    match conj_bs12(&el(3, 0), &el(6, 0)) {
        BsConjugacy::Yes(z) => assert_eq!(z, BsElement::t_pow(1)),
        BsConjugacy::No => panic!("3 and 6 are conjugate"),
    }
    match conj_bs12(&el(5, 1), &el(9, 1)) {
        BsConjugacy::Yes(z) => assert_eq!(z, el(-4, 0)),
        BsConjugacy::No => panic!(),
    }
    assert!(conj_bs12(&el(1, 2), &el(2, 2)).is_yes());
    assert!(!conj_bs12(&el(0, 2), &el(7, 2)).is_yes());
    assert!(!conj_bs12(&el(1, 1), &el(1, 2)).is_yes());
}

#[test]
fn mersenne_family_matches_divisibility() {
    for m in 1..=20i64 {
        for s in 1..=40u32 {
            let g = BsElement::new(Dyadic::from_int((BigInt::one() << s) - 1), m);
            let ans = conj_bs12(&el(0, m), &g);
            assert_eq!(ans.is_yes(), s as i64 % m == 0, "m={m} s={s}");
            if let BsConjugacy::Yes(z) = ans {
                assert_eq!(el(0, m).conjugate_by(&z), g);
            }
        }
    }
}

/// Brute-force oracle: search z = (x 2^-e, k) over a small box.
fn brute_conjugate(f: &BsElement, g: &BsElement) -> bool {
    for k in -6..=6 {
        for e in 0..=4 {
            for x in -64..=64 {
                let z = BsElement::new(Dyadic::new(BigInt::from(x), -e), k);
                if &f.conjugate_by(&z) == g {
                    return true;
                }
            }
        }
    }
    false
}

#[test]
fn conjugacy_agrees_with_brute_force_on_small_elements() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let mut yes = 0;
    for _ in 0..300 {
        let f = el(rng.gen_range(-6..=6), rng.gen_range(-3..=3));
        let z = BsElement::new(Dyadic::new(BigInt::from(rng.gen_range(-5..=5)), -rng.gen_range(0..2)), rng.gen_range(-2..=2));
        let g = if rng.gen_bool(0.5) { f.conjugate_by(&z) } else { el(rng.gen_range(-6..=6), f.m) };
        let ans = conj_bs12(&f, &g);
        if ans.is_yes() {
            yes += 1;
            assert_eq!(&f.conjugate_by(ans.witness().unwrap()), &g);
        } else {
            assert!(!brute_conjugate(&f, &g), "missed conjugacy {f} ~ {g}");
        }
    }
    assert!(yes > 100);
}

fn random_element<R: Rng>(rng: &mut R) -> BsElement {
    let len = rng.gen_range(0..20);
    let letters: String = (0..len).map(|_| ['a', 'A', 't', 'T'][rng.gen_range(0..4)]).collect();
    BsElement::parse(&letters).unwrap()
}

#[test]
fn pc_conjugacy_agrees_with_explicit() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let budget = BitBudget::default();
    for i in 0..400 {
        let f = random_element(&mut rng);
        let g = if i % 2 == 0 { f.conjugate_by(&random_element(&mut rng)) } else { random_element(&mut rng) };
        let expect = conj_bs12(&f, &g).is_yes();
        let mut rc = ReducedCircuit::new();
        let pf = PcTriple::from_element(&mut rc, &f);
        let pg = PcTriple::from_element(&mut rc, &g);
        let ans = conj_bs12_pc(&mut rc, &pf, &pg, budget).unwrap();
        assert_eq!(ans.is_yes(), expect, "{f} vs {g}");
        if let BsConjugacy::Yes(z) = ans {
            let mut conj = pf.conjugate_by(&z, &mut rc);
            conj = conj.normalize(&mut rc);
            assert!(conj.equals(&pg, &mut rc));
            let ze = z.to_element(&rc, budget).unwrap();
            assert_eq!(f.conjugate_by(&ze), g);
        }
    }
}

#[test]
fn pc_mersenne_family_from_circuits() {
    let budget = BitBudget::default();
    for m in 1..=16i64 {
        for s in 1..=16u32 {
            let mut rc = ReducedCircuit::new();
            let f = PcTriple::t_pow(rc.from_i64(m));
            let g = PcTriple::from_element(&mut rc, &BsElement::new(Dyadic::from_int((BigInt::one() << s) - 1), m));
            let ans = conj_bs12_pc(&mut rc, &f, &g, budget).unwrap();
            assert_eq!(ans.is_yes(), s as i64 % m == 0, "m={m} s={s}");
        }
    }
}

#[test]
fn pc_equal_towers_need_no_expansion() {
    let (c, m) = PowerCircuit::tower(6);
    let (mut rc, ms) = c.reduce(&[m]).unwrap();
    let f = PcTriple::t_pow(ms[0].clone());
    let tiny = BitBudget::new(64).unwrap();
    let ans = conj_bs12_pc(&mut rc, &f, &f.clone(), tiny).unwrap();
    assert!(ans.is_yes());
    let one = rc.unit();
    let g = PcTriple::t_pow(rc.add(&ms[0], &one));
    assert!(!conj_bs12_pc(&mut rc, &f, &g, tiny).unwrap().is_yes());
    // Different r, same huge m: the modular scan cannot run within budget.
    let a = PcTriple::a_pow(&mut rc, &one);
    let h = a.mul(&f, &mut rc);
    assert!(matches!(conj_bs12_pc(&mut rc, &f, &h, tiny), Err(PcError::BudgetExceeded { .. })));
}

#[test]
fn pc_triple_arithmetic_matches_explicit() {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    let budget = BitBudget::default();
    for _ in 0..500 {
        let (f, g) = (random_element(&mut rng), random_element(&mut rng));
        let mut rc = ReducedCircuit::new();
        let pf = PcTriple::from_element(&mut rc, &f);
        let pg = PcTriple::from_element(&mut rc, &g);
        let prod = pf.mul(&pg, &mut rc);
        assert_eq!(prod.to_element(&rc, budget).unwrap(), f.mul(&g));
        let inv = pf.inv(&mut rc);
        assert_eq!(inv.to_element(&rc, budget).unwrap(), f.inv());
        assert_eq!(pf.a_exponent(&mut rc).is_some(), f.m == 0 && f.r.is_integer());
        assert_eq!(pf.t_exponent(&mut rc).is_some(), f.r.is_zero());
    }
}

fn arb_element() -> impl Strategy<Value = BsElement> {
    (any::<i32>(), -40i64..40, -20i64..20)
        .prop_map(|(p, e, m)| BsElement::new(Dyadic::new(BigInt::from(p), e), m))
}

fn arb_word() -> impl Strategy<Value = String> {
    proptest::collection::vec(prop_oneof![Just('a'), Just('A'), Just('t'), Just('T')], 0..30)
        .prop_map(|v| v.into_iter().collect())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn group_axioms(f in arb_element(), g in arb_element(), h in arb_element()) {
        prop_assert_eq!(f.mul(&g).mul(&h), f.mul(&g.mul(&h)));
        prop_assert!(f.mul(&f.inv()).is_identity());
        prop_assert!(f.inv().mul(&f).is_identity());
    }

    #[test]
    fn eval_word_is_a_morphism(u in arb_word(), v in arb_word()) {
        let uv = format!("{u}{v}");
        let lhs = BsElement::parse(&uv).unwrap();
        let rhs = BsElement::parse(&u).unwrap().mul(&BsElement::parse(&v).unwrap());
        prop_assert_eq!(lhs, rhs);
        let w = Word::parse(&u, false).unwrap();
        prop_assert!(BsElement::eval_word(&w.concat(&w.inverse())).unwrap().is_identity());
    }

    #[test]
    fn conjugacy_is_an_equivalence(f in arb_element(), z in arb_element(), z2 in arb_element(), g in arb_element()) {
        prop_assert!(conj_bs12(&f, &f).is_yes());
        let c = f.conjugate_by(&z);
        let ans = conj_bs12(&f, &c);
        prop_assert!(ans.is_yes());
        prop_assert_eq!(&f.conjugate_by(ans.witness().unwrap()), &c);
        prop_assert!(conj_bs12(&c, &f).is_yes());
        let d = conj_bs12(&f, &g).is_yes();
        prop_assert_eq!(conj_bs12(&g, &f).is_yes(), d);
        prop_assert_eq!(conj_bs12(&f.conjugate_by(&z2), &g.conjugate_by(&z)).is_yes(), d);
    }
}
