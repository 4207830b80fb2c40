//! One line per acceptance criterion, printed straight to stdout so it shows
//! through the test harness's capture. Tolerances and time limits are fixed
//! here; the test fails if any criterion fails.

use std::io::Write;
use std::process::Command;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use pcgroup::baumslag::{
    blowup_word, conj_bg, conjugate_by, division_to_conjugacy, tower_t_power, tower_t_power_offset, verify_witness,
    word_problem, BetaFactorization, DEFAULT_WORD_CAP,
};
use pcgroup::bs12::{conj_bs12, BsElement};
use pcgroup::generic::{
    estimate_back_to_base, estimate_back_to_base_smc, estimate_in_h, estimate_pairing_bounds, Baumslag, Bs12OverZ,
    ExperimentReport, Measure, SmcConfig, Z2,
};
use pcgroup::power_circuit::{steps, BitBudget, Marking, NodeId, PcError, PowerCircuit, ReducedCircuit};
use pcgroup::word::{Letter, Word};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SEED: u64 = 20_240_601;

struct Board {
    failed: Vec<String>,
}

impl Board {
    fn record(&mut self, id: &str, ok: bool, detail: String) {
        let line = format!("{} criterion {id}: {detail}\n", if ok { "PASS" } else { "FAIL" });
        let out = std::io::stdout();
        let mut out = out.lock();
        let _ = out.write_all(line.as_bytes());
        let _ = out.flush();
        if !ok {
            self.failed.push(id.to_string());
        }
    }
}

fn secs(d: Duration) -> f64 {
    d.as_secs_f64()
}

// Direct bignum evaluation of circuits, independent of the library.

fn oracle_node_values(c: &PowerCircuit, max_exp: u64) -> Option<Vec<BigInt>> {
    fn go(c: &PowerCircuit, p: usize, vals: &mut Vec<Option<BigInt>>, max_exp: u64) -> Option<BigInt> {
        if let Some(v) = &vals[p] {
            return Some(v.clone());
        }
        let mut e = BigInt::zero();
        for &(q, s) in c.successors(NodeId(p as u32)).terms() {
            e += BigInt::from(s) * go(c, q.index(), vals, max_exp)?;
        }
        if e.is_negative() {
            return None;
        }
        let v = BigInt::one() << e.to_u64().filter(|&e| e < max_exp)?;
        vals[p] = Some(v.clone());
        Some(v)
    }
    let mut vals = vec![None; c.len()];
    (0..c.len()).map(|p| go(c, p, &mut vals, max_exp)).collect()
}

fn oracle_marking(vals: &[BigInt], m: &Marking) -> BigInt {
    m.terms().iter().map(|&(p, s)| BigInt::from(s) * &vals[p.index()]).sum()
}

fn random_marking<R: Rng>(rng: &mut R, n: usize, density: f64) -> Marking {
    let mut terms = Vec::new();
    for q in 0..n {
        if rng.gen_bool(density) {
            terms.push((NodeId(q as u32), if rng.gen_bool(0.5) { 1 } else { -1 }));
        }
    }
    Marking::new(terms).unwrap()
}

fn random_circuit<R: Rng>(rng: &mut R, max_nodes: usize, max_exp: u64) -> (PowerCircuit, Vec<BigInt>) {
    loop {
        let n = rng.gen_range(1..=max_nodes);
        let mut c = PowerCircuit::new();
        for i in 0..n {
            let m = random_marking(rng, i, 0.4);
            c.add_node(m);
        }
        if let Some(vals) = oracle_node_values(&c, max_exp) {
            return (c, vals);
        }
    }
}

/// Mismatch count for one random circuit and two random markings on it.
fn circuit_mismatches<R: Rng>(rng: &mut R, b: BitBudget) -> usize {
    let (c, vals) = random_circuit(rng, 10, 4096);
    let m1 = random_marking(rng, c.len(), 0.5);
    let m2 = random_marking(rng, c.len(), 0.5);
    let (v1, v2) = (oracle_marking(&vals, &m1), oracle_marking(&vals, &m2));
    let (mut rc, ms) = c.reduce(&[m1, m2]).unwrap();
    let (r1, r2) = (&ms[0], &ms[1]);
    let mut bad = 0;
    let mut check = |ok: bool| bad += !ok as usize;
    check(rc.evaluate(r1, b).ok() == Some(v1.clone()));
    check(rc.compare(r1, r2) == v1.cmp(&v2));
    let s = rc.add(r1, r2);
    check(rc.evaluate(&s, b).ok() == Some(&v1 + &v2));
    let d = rc.sub(r1, r2);
    check(rc.evaluate(&d, b).ok() == Some(&v1 - &v2));
    let (x, u) = rc.decompose_odd(r2);
    match (rc.evaluate(&x, b), rc.evaluate(&u, b)) {
        (Ok(xv), Ok(uv)) if v2.is_zero() => check(xv.is_zero() && uv.is_zero()),
        (Ok(xv), Ok(uv)) => check(!(&uv % 2u8).is_zero() && xv.to_u64().map(|k| &uv << k) == Some(v2.clone())),
        _ => check(false),
    }
    let shift = if !v1.is_negative() && v1 < BigInt::from(4096) {
        r1.clone()
    } else {
        rc.from_i64(rng.gen_range(0..3000))
    };
    let sv = rc.evaluate(&shift, b).unwrap().to_u64().unwrap();
    match rc.mul_pow2(&shift, r2) {
        Ok(p) => check(rc.evaluate(&p, b).ok() == Some(&v2 << sv)),
        Err(_) => check(false),
    }
    match rc.divides(r1, r2, b) {
        Err(PcError::ZeroDivisor) => check(v1.is_zero()),
        Ok(q) => check(!v1.is_zero() && q == (&v2 % &v1).is_zero()),
        Err(_) => check(false),
    }
    bad
}

fn criterion_1(board: &mut Board) {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let b = BitBudget::new(1 << 14).unwrap();
    let circuits = 10_000;
    let bad: usize = (0..circuits).map(|_| circuit_mismatches(&mut rng, b)).sum();
    let t = start.elapsed();
    board.record(
        "1",
        bad == 0 && t < Duration::from_secs(60),
        format!("{circuits} random circuits, {bad} mismatches against bignum evaluation, {:.1} s (limit 60 s)", secs(t)),
    );
}

fn criterion_2(board: &mut Board) {
    let start = Instant::now();
    let mut bad = Vec::new();
    for n in 0..=8u32 {
        let w = BetaFactorization::from_word(&blowup_word(n).unwrap());
        let k = n as usize + 1;
        if !word_problem(&w, &tower_t_power(k)) {
            bad.push(format!("w{n} != t^tow({k})"));
        }
        for d in [-1, 1] {
            if word_problem(&w, &tower_t_power_offset(k, d)) {
                bad.push(format!("w{n} = t^(tow({k}){d:+})"));
            }
        }
    }
    let t = start.elapsed();
    board.record(
        "2",
        bad.is_empty() && t < Duration::from_secs(10),
        format!("tower words n=0..8 equal t^tow(n+1), offsets by 1 rejected, {bad:?} wrong, {:.2} s (limit 10 s)", secs(t)),
    );
}

fn criterion_3(board: &mut Board) {
    let mut bad = 0;
    for m in 1..=20i64 {
        for s in 1..=40u32 {
            let f = BsElement::t_pow(m);
            let g = BsElement::from_ints((1i64 << s) - 1, m);
            bad += (conj_bs12(&f, &g).is_yes() != (s as i64 % m == 0)) as usize;
        }
    }
    board.record("3", bad == 0, format!("800 cases (0,m) ~ (2^s-1,m) against m | s, {bad} mismatches"));
}

fn random_word<R: Rng>(rng: &mut R, max_len: usize) -> Word {
    let n = rng.gen_range(0..=max_len);
    fixed_word(rng, n)
}

fn fixed_word<R: Rng>(rng: &mut R, n: usize) -> Word {
    let all = [Letter::A, Letter::AInv, Letter::T, Letter::TInv, Letter::B, Letter::BInv];
    Word((0..n).map(|_| all[rng.gen_range(0..6)]).collect())
}

/// A cyclically reduced factorization with positive β-length, from a word
/// drawn by `draw`.
fn cyclic_non_h<R: Rng>(rng: &mut R, draw: impl Fn(&mut R) -> Word) -> BetaFactorization {
    loop {
        let (xh, _) = BetaFactorization::from_word(&draw(rng)).cyclically_reduce();
        if xh.beta_length() > 0 {
            return xh;
        }
    }
}

fn criterion_4(board: &mut Board) {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 4);
    let tiny = BitBudget::new(64).unwrap();
    let mut bad = 0;
    for _ in 0..1000 {
        let x = cyclic_non_h(&mut rng, |r| random_word(r, 40));
        let z = BetaFactorization::from_word(&random_word(&mut rng, 10));
        let y = conjugate_by(&z, &x);
        bad += match conj_bg(&x, &y, tiny) {
            Ok(a) => !(a.decision && a.witness.as_ref().is_some_and(|w| verify_witness(&x, &y, w))) as usize,
            Err(_) => 1,
        };
    }
    let lens = [10usize, 20, 40, 80];
    let reps = 40;
    let mut means = Vec::new();
    for &n in &lens {
        let mut total = 0u64;
        for _ in 0..reps {
            let x = cyclic_non_h(&mut rng, |r| fixed_word(r, n));
            let y = conjugate_by(&BetaFactorization::from_word(&random_word(&mut rng, 10)), &x);
            steps::reset();
            let ok = conj_bg(&x, &y, BitBudget::default()).map(|a| a.decision).unwrap_or(false);
            total += steps::count();
            bad += !ok as usize;
        }
        means.push(total as f64 / reps as f64);
    }
    let slope = (means[3].ln() - means[0].ln()) / ((lens[3] as f64).ln() - (lens[0] as f64).ln());
    board.record(
        "4",
        bad == 0 && slope <= 4.5,
        format!(
            "1000 conjugate pairs under a 64-bit budget, {bad} failures; mean steps {:?} at |x| = {lens:?}, log-log slope {slope:.2} (limit 4.5)",
            means.iter().map(|m| m.round() as u64).collect::<Vec<_>>()
        ),
    );
}

fn odd_part(mut v: i64) -> i64 {
    while v % 2 == 0 {
        v /= 2;
    }
    v
}

fn criterion_5(board: &mut Board) {
    let mut bad = 0;
    let mut cases = 0;
    for m in (-20i64..=20).filter(|&v| v != 0) {
        for q in (-20i64..=20).filter(|&v| v != 0) {
            let x = BetaFactorization::from_bs(&BsElement::t_pow(m));
            let y = BetaFactorization::from_bs(&BsElement::t_pow(q));
            let expect = odd_part(m) == odd_part(q);
            bad += conj_bg(&x, &y, BitBudget::default()).map_or(true, |a| a.decision != expect) as usize;
            cases += 1;
        }
    }
    board.record("5", bad == 0, format!("{cases} pairs t^m, t^q against m = 2^k q, {bad} mismatches"));
}

fn criterion_6(board: &mut Board) {
    let start = Instant::now();
    let samples = 10_000_000;
    let rows: Vec<ExperimentReport> =
        (2..=7).map(|n| estimate_in_h(&Measure::mu_m(2 * n).unwrap(), samples, SEED).unwrap()).collect();
    let t = start.elapsed();
    let under = rows.iter().all(|r| r.ci_high < r.bound.unwrap());
    let separated = rows.windows(2).all(|w| w[1].ci_high < w[0].ci_low);
    let ratios: Vec<f64> = rows.windows(2).map(|w| w[1].ci_high / w[0].ci_low).collect();
    let halving = ratios.iter().all(|&r| r <= 0.5);
    let est: Vec<String> = rows.iter().map(|r| format!("{:.2e}", r.estimate)).collect();
    board.record("6a", under, format!("n=2..7 estimates {est:?}, every ci_high below (8/9)^n"));
    board.record("6b", separated, "99% intervals strictly decreasing and disjoint".into());
    board.record(
        "6c",
        halving && t < Duration::from_secs(15 * 60),
        format!(
            "ci_high(n+1)/ci_low(n) = {:?} (limit 0.5), {:.0} s (limit 900 s)",
            ratios.iter().map(|r| (r * 1000.0).round() / 1000.0).collect::<Vec<_>>(),
            secs(t)
        ),
    );
}

fn criterion_7(board: &mut Board) {
    let mut words = 0;
    let mut bad = 0;
    for n in 1..=4 {
        for r in estimate_pairing_bounds(n, 1_000_000, SEED).unwrap() {
            let (m, s) = (&r.matches, &r.success_given_match);
            words += 1;
            bad += (m.estimate > m.bound.unwrap() + 3.0 * m.std_error()) as usize;
            bad += (s.samples > 0 && s.estimate > s.bound.unwrap() + 3.0 * s.std_error()) as usize;
        }
    }
    board.record("7", bad == 0, format!("{words} Dyck words with n <= 4, {bad} bound violations beyond 3 sigma"));
}

fn slope_interval(a: &ExperimentReport, b: &ExperimentReport) -> (f64, f64) {
    let dm = b.param as f64 - a.param as f64;
    ((b.ci_low.ln() - a.ci_high.ln()) / dm, (b.ci_high.ln() - a.ci_low.ln()) / dm)
}

fn criterion_8(board: &mut Board) {
    let start = Instant::now();
    let samples = 1_000_000;
    let ns = [100usize, 400, 1600];

    let z2: Vec<f64> = ns
        .iter()
        .map(|&n| estimate_back_to_base(&Z2, n, samples, SEED).unwrap())
        .map(|r| r.param as f64 * r.estimate * r.estimate)
        .collect();
    let (lo, hi) = z2.iter().fold((f64::INFINITY, 0.0f64), |(l, h), &v| (l.min(v), h.max(v)));
    board.record("8a", lo > 0.0 && hi <= 4.0 * lo, format!("Z2 walk: n*p(n)^2 in [{lo:.4}, {hi:.4}], within a factor 4"));

    let a = estimate_back_to_base(&Bs12OverZ, 100, samples, SEED).unwrap();
    let b = estimate_back_to_base(&Bs12OverZ, 1600, samples, SEED).unwrap();
    let q = b.estimate.ln() / a.estimate.ln();
    board.record("8b", q.is_finite() && q < 6.0, format!("BS(1,2) over Z: log p(1600) / log p(100) = {q:.3} (limit 6)"));

    let bg = Baumslag::base_generated();
    let cfg = SmcConfig::default();
    let rows: Vec<ExperimentReport> =
        [50u64, 100, 200].iter().map(|&m| estimate_back_to_base_smc(&bg, m, cfg, SEED).unwrap()).collect();
    let t = start.elapsed();
    let below = rows.iter().all(|r| r.ci_low <= r.bound.unwrap());
    let slopes: Vec<(f64, f64)> = rows.windows(2).map(|w| slope_interval(&w[0], &w[1])).collect();
    let negative = slopes.iter().all(|s| s.1 < 0.0);
    let linear = slopes[0].0 <= slopes[1].1 && slopes[1].0 <= slopes[0].1;
    let pts: Vec<String> =
        rows.iter().map(|r| format!("m={}: {:.2e} [{:.2e}, {:.2e}]", r.param, r.estimate, r.ci_low, r.ci_high)).collect();
    board.record(
        "8c",
        below && negative && linear && t < Duration::from_secs(20 * 60),
        format!(
            "Baumslag walk {} all at or below (1-4/6^4)^(m/2); slope intervals {:?} negative and overlapping; {:.0} s (limit 1200 s)",
            pts.join(", "),
            slopes.iter().map(|(l, h)| format!("[{l:.3}, {h:.3}]")).collect::<Vec<_>>(),
            secs(t)
        ),
    );
}

fn criterion_9(board: &mut Board) {
    let mut bad = 0;
    for m in 1..=16i64 {
        for s in 1..=16i64 {
            let mut rc = ReducedCircuit::new();
            let mm = rc.from_i64(m);
            let ss = rc.from_i64(s);
            let ok = division_to_conjugacy(&rc, &mm, &ss, DEFAULT_WORD_CAP).ok().and_then(|(x, y)| {
                let x = BetaFactorization::from_word(&x);
                let y = BetaFactorization::from_word(&y);
                conj_bg(&x, &y, BitBudget::default()).ok().map(|a| a.decision == (s % m == 0))
            });
            bad += (ok != Some(true)) as usize;
        }
    }
    board.record("9", bad == 0, format!("256 divisibility instances as conjugacy, {bad} mismatches"));
}

fn criterion_10(board: &mut Board) {
    let (c, top) = PowerCircuit::tower(20);
    let one = Marking::new(vec![(NodeId(0), 1)]).unwrap();
    let (rc, ms) = c.reduce(&[top, one]).unwrap();
    let lib = matches!(rc.divides(&ms[0], &ms[1], BitBudget::new(64).unwrap()), Err(PcError::BudgetExceeded { .. }));

    let dir = tempfile::TempDir::new().unwrap();
    let mut text = String::from("pc v1\nnode p1:\n");
    for i in 2..=20 {
        text += &format!("node p{i}: +p{}\n", i - 1);
    }
    text += "marking S: +p1\nmarking M: +p20\n";
    let path = dir.path().join("d.pc");
    std::fs::write(&path, text).unwrap();
    let code = Command::new(env!("CARGO_BIN_EXE_pcgroup"))
        .args(["pc", "divides", path.to_str().unwrap(), "M", "S", "--budget", "64"])
        .output()
        .unwrap()
        .status
        .code();
    board.record(
        "10",
        lib && code == Some(3),
        format!(
            "out of desk-scale reach and not attempted: the TC0-completeness results, the non-elementary average-case \
             lower bound (it rests on an open hardness assumption) and figure precision at 1.1e10 samples; \
             divides with a tow(20) divisor under a 64-bit budget reports budget exceeded (library {lib}, CLI exit code {code:?})"
        ),
    );
}

#[test]
fn acceptance() {
    let mut board = Board { failed: Vec::new() };
    criterion_1(&mut board);
    criterion_2(&mut board);
    criterion_3(&mut board);
    criterion_4(&mut board);
    criterion_5(&mut board);
    criterion_9(&mut board);
    criterion_10(&mut board);
    criterion_7(&mut board);
    criterion_6(&mut board);
    criterion_8(&mut board);
    assert!(board.failed.is_empty(), "failed criteria: {:?}", board.failed);
}
