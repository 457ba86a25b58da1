//! Depolarizing noise sampling and prior-rate bookkeeping.
//!
//! Trials are seeded counter-style: `trial_rng(master_seed, trial_index)`
//! derives an independent ChaCha8 stream per trial, so Monte Carlo results do
//! not depend on execution order or worker count.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::code::ErrorPattern;
use crate::error::{Error, Result};
use crate::real::Real;

/// One depolarizing shot split into its X-like and Z-like components.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PauliSample {
    /// Qubits hit by X or Y.
    pub x_part: ErrorPattern,
    /// Qubits hit by Z or Y.
    pub z_part: ErrorPattern,
}

/// How the physical error rate maps to the per-edge prior parameter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum PriorMode {
    /// `2p/3`: the marginal probability that a qubit suffers a flip of one
    /// Pauli type under depolarizing noise of strength `p`.
    #[default]
    Marginal,
    /// Use `p` itself.
    Literal,
}

impl std::fmt::Display for PriorMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            PriorMode::Marginal => write!(f, "marginal"),
            PriorMode::Literal => write!(f, "literal"),
        }
    }
}

impl std::str::FromStr for PriorMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "marginal" => Ok(PriorMode::Marginal),
            "literal" => Ok(PriorMode::Literal),
            other => Err(Error::param(format!("unknown prior mode '{other}'"))),
        }
    }
}

/// Sample i.i.d. depolarizing noise: each qubit gets I with probability
/// `1-p` and X, Y, Z each with probability `p/3`.
pub fn sample_depolarizing<R: Rng>(n: usize, p: f64, rng: &mut R) -> Result<PauliSample> {
    if !(0.0..1.0).contains(&p) {
        return Err(Error::param(format!("p must be in [0, 1), got {p}")));
    }
    let mut x_part = ErrorPattern::zeros(n);
    let mut z_part = ErrorPattern::zeros(n);
    for q in 0..n {
        let u: f64 = rng.gen();
        if u < p {
            // Equal thirds: X, Y, Z.
            if u < p / 3.0 {
                x_part.toggle(q);
            } else if u < 2.0 * p / 3.0 {
                x_part.toggle(q);
                z_part.toggle(q);
            } else {
                z_part.toggle(q);
            }
        }
    }
    Ok(PauliSample { x_part, z_part })
}

/// Per-type flip probability fed into the edge priors.
pub fn marginal_flip_rate<F: Real>(p: F, mode: PriorMode) -> F {
    match mode {
        PriorMode::Marginal => F::from_f64_lossy(2.0) * p / F::from_f64_lossy(3.0),
        PriorMode::Literal => p,
    }
}

/// Independent, reproducible generator for one trial.
///
/// The 256-bit ChaCha seed is expanded from `hash(master_seed, trial_index)`
/// with splitmix64, which is injective in the trial index for a fixed master
/// seed.
pub fn trial_rng(master_seed: u64, trial_index: u64) -> ChaCha8Rng {
    let mut state = splitmix64(master_seed) ^ trial_index;
    let mut seed = [0u8; 32];
    for chunk in seed.chunks_exact_mut(8) {
        state = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        chunk.copy_from_slice(&splitmix64(state).to_le_bytes());
    }
    ChaCha8Rng::from_seed(seed)
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
