//! Seeded, parallel Monte-Carlo estimators.
//!
//! Samples are split into fixed chunks; chunk `c` of an experiment draws from
//! the ChaCha8 stream `(salt << 32) | c` under the experiment seed, so results
//! do not depend on the number of worker threads.

use std::io;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::generic::base::{Baumslag, HnnInstance, Regime};
use crate::generic::dyck::{enumerate_dyck, DyckWord};
use crate::generic::measure::{sample_mu_sigma, Measure};
use crate::generic::pairing::{matches, successful};
use crate::generic::walk::WalkState;
use crate::generic::GenericError;
use crate::word::Letter;

/// Two-sided 99% normal quantile.
pub const Z_99: f64 = 2.5758293035489;

/// Smallest sample count the estimators accept.
pub const MIN_SAMPLES: u64 = 1000;

/// Largest `n` for the pairing experiment.
pub const PAIRING_CAP: usize = 6;

const CHUNK: u64 = 1 << 14;

/// Wilson score interval at 99%.
pub fn wilson(hits: u64, samples: u64) -> (f64, f64) {
    if samples == 0 {
        return (0.0, 1.0);
    }
    let n = samples as f64;
    let p = hits as f64 / n;
    let z2 = Z_99 * Z_99;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let half = Z_99 * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    ((center - half).clamp(0.0, p), (center + half).clamp(p, 1.0))
}

/// One CSV row: a proportion with its interval and the matching bound.
#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentReport {
    pub measure: String,
    pub param: u64,
    pub samples: u64,
    pub hits: u64,
    pub estimate: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub bound: Option<f64>,
    pub seed: u64,
}

impl ExperimentReport {
    pub fn from_counts(
        measure: impl Into<String>,
        param: u64,
        samples: u64,
        hits: u64,
        bound: Option<f64>,
        seed: u64,
    ) -> Self {
        let (ci_low, ci_high) = wilson(hits, samples);
        let estimate = if samples == 0 { 0.0 } else { hits as f64 / samples as f64 };
        ExperimentReport { measure: measure.into(), param, samples, hits, estimate, ci_low, ci_high, bound, seed }
    }

    /// Binomial standard error `√(p(1-p)/N)` of the estimate.
    pub fn std_error(&self) -> f64 {
        if self.samples == 0 {
            return 0.0;
        }
        (self.estimate * (1.0 - self.estimate) / self.samples as f64).max(0.0).sqrt()
    }
}

#[derive(Serialize, Deserialize)]
struct Row {
    measure: String,
    param: u64,
    samples: u64,
    hits: u64,
    estimate: String,
    ci_low: String,
    ci_high: String,
    bound: String,
    seed: u64,
}

/// `x` with six significant digits, in positional notation.
pub fn format_sig6(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let mag = x.abs().log10().floor() as i32;
    let decimals = (5 - mag).max(0) as usize;
    format!("{x:.decimals$}")
}

pub fn write_csv<W: io::Write>(out: W, reports: &[ExperimentReport]) -> Result<(), csv::Error> {
    let mut w = csv::Writer::from_writer(out);
    for r in reports {
        w.serialize(Row {
            measure: r.measure.clone(),
            param: r.param,
            samples: r.samples,
            hits: r.hits,
            estimate: format_sig6(r.estimate),
            ci_low: format_sig6(r.ci_low),
            ci_high: format_sig6(r.ci_high),
            bound: r.bound.map(format_sig6).unwrap_or_default(),
            seed: r.seed,
        })?;
    }
    if reports.is_empty() {
        w.write_record(["measure", "param", "samples", "hits", "estimate", "ci_low", "ci_high", "bound", "seed"])?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_csv<R: io::Read>(input: R) -> Result<Vec<ExperimentReport>, csv::Error> {
    let mut rd = csv::Reader::from_reader(input);
    let num = |s: &str| s.parse::<f64>().unwrap_or(f64::NAN);
    rd.deserialize::<Row>()
        .map(|row| {
            let row = row?;
            Ok(ExperimentReport {
                estimate: num(&row.estimate),
                ci_low: num(&row.ci_low),
                ci_high: num(&row.ci_high),
                bound: (!row.bound.is_empty()).then(|| num(&row.bound)),
                measure: row.measure,
                param: row.param,
                samples: row.samples,
                hits: row.hits,
                seed: row.seed,
            })
        })
        .collect()
}

/// The generator for one chunk of one experiment.
pub fn chunk_rng(seed: u64, salt: u32, chunk: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream((u64::from(salt) << 32) | (chunk & 0xffff_ffff));
    rng
}

/// FNV-1a over the experiment tag and parameter.
fn salt(tag: &str, param: u64) -> u32 {
    let mut h: u32 = 0x811c_9dc5;
    for b in tag.bytes().chain(param.to_le_bytes()) {
        h ^= u32::from(b);
        h = h.wrapping_mul(0x0100_0193);
    }
    h
}

/// Runs `f(rng, count)` on every chunk in parallel; results come back in
/// chunk order.
fn par_chunks<T, F>(samples: u64, seed: u64, salt: u32, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(&mut ChaCha8Rng, u64) -> T + Sync,
{
    let chunks = samples.div_ceil(CHUNK);
    (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = chunk_rng(seed, salt, c);
            let count = CHUNK.min(samples - c * CHUNK);
            f(&mut rng, count)
        })
        .collect()
}

fn check_samples(samples: u64) -> Result<(), GenericError> {
    if samples < MIN_SAMPLES {
        return Err(GenericError::TooFewSamples { samples, min: MIN_SAMPLES });
    }
    Ok(())
}

/// The bound `(8/9)^n` on `Pr[x ∈ H]` under `μ_(2n)`.
pub fn in_h_bound(n: u64) -> f64 {
    (8.0f64 / 9.0).powi(n as i32)
}

/// The bound `(2/3)^(n-k) (2/9)^k` on the probability that `x` matches `d`.
pub fn match_bound(n: usize, k: usize) -> f64 {
    (2.0f64 / 3.0).powi((n - k) as i32) * (2.0f64 / 9.0).powi(k as i32)
}

/// The bound `(5/16)^(n-k)` on success given a match.
pub fn success_bound(n: usize, k: usize) -> f64 {
    (5.0f64 / 16.0).powi((n - k) as i32)
}

/// The bound `(1 - 4/|Δ|⁴)^(m/2)` on returning to the base after `m` β-letters.
pub fn back_to_base_bound(delta: usize, m: u64) -> f64 {
    (1.0 - 4.0 / (delta as f64).powi(4)).powf(m as f64 / 2.0)
}

/// The lower bound `2/|Δ|²` on avoiding a pinch.
pub fn no_pinch_bound(delta: usize) -> f64 {
    2.0 / (delta * delta) as f64
}

/// `Pr[x ∈ H]` for `x` drawn from `measure` over `{a, a⁻¹, b, b⁻¹}`.
pub fn estimate_in_h(measure: &Measure, samples: u64, seed: u64) -> Result<ExperimentReport, GenericError> {
    check_samples(samples)?;
    let inst = Baumslag::two_generator();
    let param = measure.param() as u64;
    let counts = par_chunks(samples, seed, salt(measure.tag(), param), |rng, count| {
        let mut hits = 0u64;
        for _ in 0..count {
            let mut w = WalkState::new(&inst);
            measure.sample_into(rng, |l| {
                w.push(l);
            });
            hits += w.in_base() as u64;
        }
        hits
    });
    let hits = counts.iter().sum();
    let bound = match measure {
        Measure::MuM { m } if m % 2 == 0 => Some(in_h_bound(param / 2)),
        _ => None,
    };
    Ok(ExperimentReport::from_counts(measure.tag(), param, samples, hits, bound, seed))
}

/// Results for one Dyck word.
#[derive(Clone, Debug)]
pub struct PairingReport {
    pub dyck: DyckWord,
    /// Adjacent `()` pairs.
    pub k: usize,
    /// `Pr[x matches d]` with the bound `(2/3)^(n-k) (2/9)^k`.
    pub matches: ExperimentReport,
    /// `Pr[successful | matches]` with the bound `(5/16)^(n-k)`.
    pub success_given_match: ExperimentReport,
    /// Unconditional successes.
    pub successes: u64,
}

/// For every `d ∈ D_n`, the pairing probabilities under `μ_(2n)`. All Dyck
/// words share the same samples.
pub fn estimate_pairing_bounds(n: usize, samples: u64, seed: u64) -> Result<Vec<PairingReport>, GenericError> {
    check_samples(samples)?;
    if n == 0 || n > PAIRING_CAP {
        return Err(GenericError::BadParameter(format!("pairing needs 1 <= n <= {PAIRING_CAP}")));
    }
    let ds = enumerate_dyck(n)?;
    let measure = Measure::MuM { m: 2 * n };
    let per_chunk = par_chunks(samples, seed, salt("pairing", n as u64), |rng, count| {
        let mut c = vec![(0u64, 0u64); ds.len()];
        for _ in 0..count {
            let x = measure.sample(rng);
            for (d, slot) in ds.iter().zip(c.iter_mut()) {
                if matches(&x, d).expect("2n β-letters") {
                    slot.0 += 1;
                    slot.1 += successful(&x, d).expect("2n β-letters") as u64;
                }
            }
        }
        c
    });
    let mut totals = vec![(0u64, 0u64); ds.len()];
    for c in per_chunk {
        for (t, x) in totals.iter_mut().zip(c) {
            t.0 += x.0;
            t.1 += x.1;
        }
    }
    Ok(ds
        .into_iter()
        .zip(totals)
        .map(|(d, (m, s))| {
            let k = d.adjacent_pairs();
            PairingReport {
                matches: ExperimentReport::from_counts(
                    format!("match{d}"),
                    n as u64,
                    samples,
                    m,
                    Some(match_bound(n, k)),
                    seed,
                ),
                success_given_match: ExperimentReport::from_counts(
                    format!("success{d}"),
                    n as u64,
                    m,
                    s,
                    Some(success_bound(n, k)),
                    seed,
                ),
                successes: s,
                dyck: d,
                k,
            }
        })
        .collect())
}

fn uniform_delta<G: HnnInstance, R: Rng>(inst: &G, rng: &mut R) -> Letter {
    let sigma = inst.sigma();
    let i = rng.gen_range(0..sigma.len() + 2);
    match i.checked_sub(sigma.len()) {
        None => sigma[i],
        Some(0) => Letter::B,
        Some(_) => Letter::BInv,
    }
}

/// The reference curve for unconditional back-to-base runs: `√(|Δ|/n)`
/// when `A = H = B`, `(|Δ|/n)^1.5` when `A = H ≠ B`.
pub fn back_to_base_reference(regime: Regime, delta: usize, n: u64) -> Option<f64> {
    if n == 0 {
        return None;
    }
    let q = delta as f64 / n as f64;
    match regime {
        Regime::Semidirect => Some(q.sqrt()),
        Regime::OneSided => Some(q.powf(1.5)),
        Regime::Proper => None,
    }
}

/// `Pr[η(x) ∈ H]` for `x` uniform in `Δ^n`.
pub fn estimate_back_to_base<G: HnnInstance>(
    inst: &G,
    n: usize,
    samples: u64,
    seed: u64,
) -> Result<ExperimentReport, GenericError> {
    check_samples(samples)?;
    let counts = par_chunks(samples, seed, salt(inst.name(), n as u64), |rng, count| {
        let mut hits = 0u64;
        for _ in 0..count {
            let mut w = WalkState::new(inst);
            for _ in 0..n {
                w.push(uniform_delta(inst, rng));
            }
            hits += w.in_base() as u64;
        }
        hits
    });
    let bound = back_to_base_reference(inst.regime(), inst.delta_size(), n as u64);
    Ok(ExperimentReport::from_counts(
        format!("backbase_{}", inst.name()),
        n as u64,
        samples,
        counts.iter().sum(),
        bound,
        seed,
    ))
}

/// Advances a walk by one `μ_m` step: a `μ_Σ` segment (skipped before the
/// first β, where it cannot affect β-lengths) and a uniform β-letter.
fn beta_step<G: HnnInstance, R: Rng>(inst: &G, w: &mut WalkState<'_, G>, first: bool, rng: &mut R) {
    if !first {
        let mut seg = inst.identity();
        sample_mu_sigma(rng, inst.sigma(), |l| inst.mul_letter(&mut seg, l));
        w.push_base(&seg);
    }
    w.push_beta(rng.gen_bool(0.5));
}

/// `Pr_m[η(x) ∈ H]` under `μ_m`: uniform letters of `Δ` until just before
/// the `(m+1)`-th β-letter.
pub fn estimate_back_to_base_given_m<G: HnnInstance>(
    inst: &G,
    m: u64,
    samples: u64,
    seed: u64,
) -> Result<ExperimentReport, GenericError> {
    check_samples(samples)?;
    let counts = par_chunks(samples, seed, salt(&format!("{}-m", inst.name()), m), |rng, count| {
        let mut hits = 0u64;
        for _ in 0..count {
            let mut w = WalkState::new(inst);
            for i in 0..m {
                beta_step(inst, &mut w, i == 0, rng);
            }
            hits += w.in_base() as u64;
        }
        hits
    });
    Ok(ExperimentReport::from_counts(
        format!("backbase_m_{}", inst.name()),
        m,
        samples,
        counts.iter().sum(),
        Some(back_to_base_bound(inst.delta_size(), m)),
        seed,
    ))
}

/// Settings for [`estimate_back_to_base_smc`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SmcConfig {
    /// Particles per run.
    pub particles: usize,
    /// Independent runs; the interval comes from their spread.
    pub runs: u64,
    /// Potential `ψ_i(x) = rho^x` on the reduced β-length `x`.
    pub rho: f64,
}

impl Default for SmcConfig {
    fn default() -> Self {
        SmcConfig { particles: 10_000, runs: 100, rho: 0.2 }
    }
}

/// One sequential Monte-Carlo run. Particles follow `μ_m` exactly and are
/// reweighted by `ψ_i(X_i) / ψ_(i-1)(X_(i-1))`, where `ψ_i(x) = rho^x` while
/// `x ≤ m - i` and `0` otherwise, then resampled. The product of mean
/// weights is an unbiased estimate of `Pr[X_m = 0]`.
fn smc_run<G: HnnInstance, R: Rng>(inst: &G, m: u64, cfg: &SmcConfig, rng: &mut R) -> (f64, u64) {
    let n = cfg.particles;
    let psi = |i: u64, x: usize| -> f64 {
        if x as u64 > m - i {
            0.0
        } else {
            cfg.rho.powi(x as i32)
        }
    };
    let mut particles: Vec<WalkState<'_, G>> = (0..n).map(|_| WalkState::new(inst)).collect();
    let mut log_z = 0.0;
    let mut weights = vec![0.0; n];
    for i in 0..m {
        for (p, wt) in particles.iter_mut().zip(weights.iter_mut()) {
            let before = psi(i, p.depth());
            beta_step(inst, p, i == 0, rng);
            *wt = psi(i + 1, p.depth()) / before;
        }
        let total: f64 = weights.iter().sum();
        if total == 0.0 {
            return (0.0, 0);
        }
        log_z += (total / n as f64).ln();
        if i + 1 == m {
            break;
        }
        // Systematic resampling.
        let step = total / n as f64;
        let mut u = rng.gen::<f64>() * step;
        let mut next = Vec::with_capacity(n);
        let mut acc = 0.0;
        for (p, &wt) in particles.iter().zip(&weights) {
            acc += wt;
            while u < acc && next.len() < n {
                next.push(p.clone());
                u += step;
            }
        }
        while next.len() < n {
            next.push(particles[n - 1].clone());
        }
        particles = next;
    }
    let hits = particles.iter().filter(|p| p.in_base()).count() as u64;
    (log_z.exp(), hits)
}

/// `Pr_m[η(x) ∈ H]` by sequential Monte Carlo, for probabilities far below
/// what direct sampling can see. `samples` is `particles * runs`; `hits`
/// counts particles back in the base at the end; the interval is the 99%
/// normal interval over runs.
pub fn estimate_back_to_base_smc<G: HnnInstance>(
    inst: &G,
    m: u64,
    cfg: SmcConfig,
    seed: u64,
) -> Result<ExperimentReport, GenericError> {
    if cfg.runs < 2 || cfg.particles == 0 || !(cfg.rho > 0.0 && cfg.rho <= 1.0) {
        return Err(GenericError::BadParameter("SMC needs runs >= 2, particles >= 1, 0 < rho <= 1".into()));
    }
    let samples = cfg.particles as u64 * cfg.runs;
    check_samples(samples)?;
    let tag = format!("backbase_m_smc_{}", inst.name());
    let st = salt(&tag, m);
    let runs: Vec<(f64, u64)> = (0..cfg.runs)
        .into_par_iter()
        .map(|r| smc_run(inst, m, &cfg, &mut chunk_rng(seed, st, r)))
        .collect();
    let k = cfg.runs as f64;
    let mean = runs.iter().map(|r| r.0).sum::<f64>() / k;
    let var = runs.iter().map(|r| (r.0 - mean).powi(2)).sum::<f64>() / (k - 1.0);
    let half = Z_99 * (var / k).sqrt();
    Ok(ExperimentReport {
        measure: tag,
        param: m,
        samples,
        hits: runs.iter().map(|r| r.1).sum(),
        estimate: mean,
        ci_low: (mean - half).max(0.0),
        ci_high: mean + half,
        bound: Some(back_to_base_bound(inst.delta_size(), m)),
        seed,
    })
}

/// `Pr[β γ y β⁻¹ ∉ H]` for `y` drawn from `μ_Σ`; `positive` selects `β = b`.
pub fn estimate_no_pinch<G: HnnInstance>(
    inst: &G,
    positive: bool,
    gamma: &[Letter],
    samples: u64,
    seed: u64,
) -> Result<ExperimentReport, GenericError> {
    check_samples(samples)?;
    if let Some(&l) = gamma.iter().find(|l| !inst.sigma().contains(l)) {
        return Err(GenericError::BadParameter(format!("{l:?} is not in Σ")));
    }
    let mut g = inst.identity();
    for &l in gamma {
        inst.mul_letter(&mut g, l);
    }
    let tag = format!("nopinch_{}", inst.name());
    let counts = par_chunks(samples, seed, salt(&tag, gamma.len() as u64), |rng, count| {
        let mut hits = 0u64;
        for _ in 0..count {
            let mut h = g.clone();
            sample_mu_sigma(rng, inst.sigma(), |l| inst.mul_letter(&mut h, l));
            let pinches = if positive { inst.in_a(&h) } else { inst.in_b(&h) };
            hits += !pinches as u64;
        }
        hits
    });
    Ok(ExperimentReport::from_counts(
        tag,
        gamma.len() as u64,
        samples,
        counts.iter().sum(),
        Some(no_pinch_bound(inst.delta_size())),
        seed,
    ))
}
