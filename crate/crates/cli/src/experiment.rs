use std::fs::File;
use std::io::{self, Write};
use std::path::PathBuf;

use clap::{Args, ValueEnum};
use pcgroup::generic::{
    estimate_back_to_base, estimate_back_to_base_smc, estimate_in_h, estimate_pairing_bounds, write_csv,
    Baumslag, Bs12OverZ, ExperimentReport, GenericError, Measure, SmcConfig, MIN_SAMPLES, PAIRING_CAP, Z2,
};

use crate::{CliError, Group, Outcome, DEFAULT_SEED};

/// Largest `n` for `fig1` (words with `2n` β-letters).
pub const FIG1_CAP: u64 = 20;
/// Largest walk length (or β-count for `bg`) for `backbase`.
pub const BACKBASE_CAP: u64 = 100_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Kind {
    Fig1,
    Pairing,
    Backbase,
}

#[derive(Args)]
pub struct ExperimentArgs {
    kind: Kind,
    #[arg(long)]
    n_min: Option<u64>,
    #[arg(long)]
    n_max: Option<u64>,
    #[arg(long)]
    samples: Option<u64>,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Instance for `backbase`; `bg` conditions on the number of β-letters.
    #[arg(long, value_enum, default_value = "bg")]
    group: Group,
    /// CSV destination; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

impl From<GenericError> for CliError {
    fn from(e: GenericError) -> Self {
        CliError::Input(e.to_string())
    }
}

struct Plan {
    params: Vec<u64>,
    samples: u64,
}

fn plan(a: &ExperimentArgs) -> Result<Plan, CliError> {
    let (lo, hi, samples, cap, geometric) = match (a.kind, a.group) {
        (Kind::Fig1, _) => (2, 7, 10_000_000, FIG1_CAP, None),
        (Kind::Pairing, _) => (1, 4, 1_000_000, PAIRING_CAP as u64, None),
        (Kind::Backbase, Group::Bg) => (50, 200, 1_000_000, BACKBASE_CAP, Some(2)),
        (Kind::Backbase, _) => (100, 1600, 1_000_000, BACKBASE_CAP, Some(4)),
    };
    let lo = a.n_min.unwrap_or(lo);
    let hi = a.n_max.unwrap_or(hi);
    let samples = a.samples.unwrap_or(samples);
    if lo == 0 && a.kind != Kind::Backbase {
        return Err(CliError::Input("--n-min must be at least 1".into()));
    }
    if lo > hi || hi > cap {
        return Err(CliError::Input(format!("need n-min <= n-max <= {cap}, got {lo}..{hi}")));
    }
    if samples < MIN_SAMPLES {
        return Err(CliError::Input(format!("--samples must be at least {MIN_SAMPLES}")));
    }
    let params = match geometric {
        None => (lo..=hi).collect(),
        Some(f) => {
            let mut v = vec![lo];
            while let Some(&last) = v.last() {
                let next = (last.max(1)) * f;
                if next > hi {
                    break;
                }
                v.push(next);
            }
            v
        }
    };
    Ok(Plan { params, samples })
}

fn status(ok: bool) -> &'static str {
    if ok {
        "PASS"
    } else {
        "FAIL"
    }
}

fn fig1(p: &Plan, seed: u64, checks: &mut Vec<String>) -> Result<Vec<ExperimentReport>, CliError> {
    let mut rows = Vec::new();
    for &n in &p.params {
        let r = estimate_in_h(&Measure::mu_m(2 * n as usize)?, p.samples, seed)?;
        let bound = r.bound.expect("even m");
        checks.push(format!("{} in-h bound n={n}: ci_high {:.3e} < (8/9)^n {:.3e}", status(r.ci_high < bound), r.ci_high, bound));
        rows.push(r);
    }
    for w in rows.windows(2) {
        let (a, b) = (&w[0], &w[1]);
        checks.push(format!(
            "{} decreasing n={}->{}: ci_high {:.3e} < ci_low {:.3e}",
            status(b.ci_high < a.ci_low),
            a.param / 2,
            b.param / 2,
            b.ci_high,
            a.ci_low
        ));
        let ratio = if a.ci_low > 0.0 { b.ci_high / a.ci_low } else { f64::INFINITY };
        checks.push(format!("{} ratio n={}->{}: <= {ratio:.3} (need <= 0.5)", status(ratio <= 0.5), a.param / 2, b.param / 2));
    }
    Ok(rows)
}

fn pairing(p: &Plan, seed: u64, checks: &mut Vec<String>) -> Result<Vec<ExperimentReport>, CliError> {
    let mut rows = Vec::new();
    for &n in &p.params {
        let reps = estimate_pairing_bounds(n as usize, p.samples, seed)?;
        let mut bad = 0;
        for r in reps {
            let m = &r.matches;
            let s = &r.success_given_match;
            bad += (m.estimate > m.bound.unwrap() + 3.0 * m.std_error()) as usize;
            bad += (s.samples > 0 && s.estimate > s.bound.unwrap() + 3.0 * s.std_error()) as usize;
            rows.push(r.matches);
            rows.push(r.success_given_match);
        }
        checks.push(format!("{} pairing n={n}: {bad} bound violations beyond 3 sigma", status(bad == 0)));
    }
    Ok(rows)
}

fn backbase(p: &Plan, group: Group, seed: u64, checks: &mut Vec<String>) -> Result<Vec<ExperimentReport>, CliError> {
    let rows: Vec<ExperimentReport> = match group {
        Group::Z2 => p.params.iter().map(|&n| estimate_back_to_base(&Z2, n as usize, p.samples, seed)).collect::<Result<_, _>>()?,
        Group::Bs12 => {
            p.params.iter().map(|&n| estimate_back_to_base(&Bs12OverZ, n as usize, p.samples, seed)).collect::<Result<_, _>>()?
        }
        Group::Bg => {
            let bg = Baumslag::base_generated();
            let runs = 100;
            let cfg = SmcConfig { particles: (p.samples / runs).max(1) as usize, runs, ..SmcConfig::default() };
            p.params.iter().map(|&m| estimate_back_to_base_smc(&bg, m, cfg, seed)).collect::<Result<_, _>>()?
        }
    };
    match group {
        Group::Z2 => {
            let scaled: Vec<f64> = rows.iter().map(|r| r.param as f64 * r.estimate * r.estimate).collect();
            let (lo, hi) = scaled.iter().fold((f64::INFINITY, 0.0f64), |(l, h), &v| (l.min(v), h.max(v)));
            checks.push(format!("{} z2: n*p^2 in [{lo:.4}, {hi:.4}], spread within factor 4", status(lo > 0.0 && hi <= 4.0 * lo)));
        }
        Group::Bs12 => {
            if let (Some(a), Some(b)) = (rows.first(), rows.last()) {
                let q = b.estimate.ln() / a.estimate.ln();
                // Polynomial decay keeps the ratio of logs near 1; the limit is (n_max/n_min)/4 * 1.5.
                let limit = b.param as f64 / a.param as f64 / 4.0 * 1.5;
                checks.push(format!(
                    "{} bs12: log p({}) / log p({}) = {q:.3} < {limit:.3}",
                    status(q.is_finite() && q < limit),
                    b.param,
                    a.param
                ));
            }
        }
        Group::Bg => {
            for r in &rows {
                let bound = r.bound.unwrap();
                checks.push(format!("{} bg m={}: ci_low {:.3e} <= (1-4/6^4)^(m/2) {bound:.3e}", status(r.ci_low <= bound), r.param, r.ci_low));
            }
            for w in rows.windows(2) {
                let (lo, hi) = slope_interval(&w[0], &w[1]);
                checks.push(format!("{} bg slope m={}->{}: [{lo:.4}, {hi:.4}] < 0", status(hi < 0.0), w[0].param, w[1].param));
            }
        }
    }
    Ok(rows)
}

/// Range of `d log p / dm` between two reports, from their interval ends.
pub fn slope_interval(a: &ExperimentReport, b: &ExperimentReport) -> (f64, f64) {
    let dm = b.param as f64 - a.param as f64;
    ((b.ci_low.ln() - a.ci_high.ln()) / dm, (b.ci_high.ln() - a.ci_low.ln()) / dm)
}

pub fn run(a: &ExperimentArgs) -> Result<Outcome, CliError> {
    let p = plan(a)?;
    let mut checks = Vec::new();
    let rows = match a.kind {
        Kind::Fig1 => fig1(&p, a.seed, &mut checks)?,
        Kind::Pairing => pairing(&p, a.seed, &mut checks)?,
        Kind::Backbase => backbase(&p, a.group, a.seed, &mut checks)?,
    };
    let header = format!(
        "# pcgroup experiment {:?} seed={} samples={} params={:?}",
        a.kind, a.seed, p.samples, p.params
    )
    .to_lowercase();
    match &a.out {
        Some(path) => {
            let f = File::create(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
            write_csv(f, &rows).map_err(|e| CliError::Input(e.to_string()))?;
            println!("{header}");
            for c in &checks {
                println!("{c}");
            }
        }
        None => {
            let stderr = io::stderr();
            let mut e = stderr.lock();
            let _ = writeln!(e, "{header}");
            for c in &checks {
                let _ = writeln!(e, "{c}");
            }
            write_csv(io::stdout().lock(), &rows).map_err(|e| CliError::Input(e.to_string()))?;
        }
    }
    Ok(Outcome { negative: checks.iter().any(|c| c.starts_with("FAIL")) })
}
