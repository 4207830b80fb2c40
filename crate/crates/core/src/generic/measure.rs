//! Random words over `{a, a⁻¹, b, b⁻¹}` and `μ_Σ` segments.

use std::fmt;

use rand::Rng;

use crate::generic::GenericError;
use crate::word::{Letter, Word};

/// `{a, a⁻¹, b, b⁻¹}`, laid out so that `i ^ 1` is the inverse of `i`.
pub const REDUCED_ALPHABET: [Letter; 4] = [Letter::A, Letter::AInv, Letter::B, Letter::BInv];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Measure {
    /// `n` letters, each uniform.
    UniformDelta { n: usize },
    /// A walk without backtracking of length `n`.
    ReducedUniform { n: usize },
    /// A walk without backtracking that starts with `b` or `b⁻¹` and stops
    /// right before its `(m+1)`-th β-letter.
    MuM { m: usize },
}

impl Measure {
    pub fn uniform_delta(n: usize) -> Result<Self, GenericError> {
        Self::checked(Measure::UniformDelta { n })
    }

    pub fn reduced_uniform(n: usize) -> Result<Self, GenericError> {
        Self::checked(Measure::ReducedUniform { n })
    }

    pub fn mu_m(m: usize) -> Result<Self, GenericError> {
        Self::checked(Measure::MuM { m })
    }

    fn checked(self) -> Result<Self, GenericError> {
        if self.param() == 0 {
            return Err(GenericError::BadParameter(format!("{} needs a positive parameter", self.tag())));
        }
        Ok(self)
    }

    pub fn tag(&self) -> &'static str {
        match self {
            Measure::UniformDelta { .. } => "uniform_delta_n",
            Measure::ReducedUniform { .. } => "reduced_uniform",
            Measure::MuM { .. } => "mu_m",
        }
    }

    pub fn param(&self) -> usize {
        match *self {
            Measure::UniformDelta { n } | Measure::ReducedUniform { n } => n,
            Measure::MuM { m } => m,
        }
    }

    /// Streams one sample into `emit`.
    pub fn sample_into<R: Rng, F: FnMut(Letter)>(&self, rng: &mut R, mut emit: F) {
        match *self {
            Measure::UniformDelta { n } => {
                for _ in 0..n {
                    emit(REDUCED_ALPHABET[rng.gen_range(0..4)]);
                }
            }
            Measure::ReducedUniform { n } => {
                if n == 0 {
                    return;
                }
                let mut prev = rng.gen_range(0..4);
                emit(REDUCED_ALPHABET[prev]);
                for _ in 1..n {
                    prev = next_reduced(rng, prev);
                    emit(REDUCED_ALPHABET[prev]);
                }
            }
            Measure::MuM { m } => {
                if m == 0 {
                    return;
                }
                let mut prev = 2 + rng.gen_range(0..2);
                emit(REDUCED_ALPHABET[prev]);
                let mut betas = 1;
                loop {
                    let next = next_reduced(rng, prev);
                    if next >= 2 {
                        if betas == m {
                            return;
                        }
                        betas += 1;
                    }
                    emit(REDUCED_ALPHABET[next]);
                    prev = next;
                }
            }
        }
    }

    pub fn sample<R: Rng>(&self, rng: &mut R) -> Word {
        let mut out = Vec::new();
        self.sample_into(rng, |l| out.push(l));
        Word(out)
    }
}

impl fmt::Display for Measure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({})", self.tag(), self.param())
    }
}

/// One of the three letters that do not cancel `prev`.
fn next_reduced<R: Rng>(rng: &mut R, prev: usize) -> usize {
    let skip = prev ^ 1;
    let j = rng.gen_range(0..3);
    if j >= skip {
        j + 1
    } else {
        j
    }
}

/// A `μ_Σ` segment: stop with probability `2/|Δ|` before each letter,
/// otherwise a uniform letter of `sigma`.
pub fn sample_mu_sigma<R: Rng, F: FnMut(Letter)>(rng: &mut R, sigma: &[Letter], mut emit: F) {
    let delta = sigma.len() + 2;
    loop {
        let i = rng.gen_range(0..delta);
        if i >= sigma.len() {
            return;
        }
        emit(sigma[i]);
    }
}
