//! Seeded random sweeps over weight vectors, checking the closed forms
//! against the test-curve reconstruction and against each other.
//!
//! Weights are drawn uniformly from `[-10, 10]`, then the last entry is
//! replaced so the vector has the required degree. Sweeps that need a
//! negative entry redraw until one appears. The generator is ChaCha8 seeded
//! with the given `u64`, so a seed fixes every trial.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::basis::{Basis, DivisorClass, Moduli};
use crate::error::{Error, Result};
use crate::solver::{reconstruct_t, reconstruct_theta};
use crate::theta::{class_d_direct, class_d_from_theta, class_t, class_theta, PlusConvention, WeightVector};

pub const WEIGHT_RANGE: i64 = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Check {
    T,
    Theta,
    #[serde(rename = "mueller")]
    EffectiveLocus,
}

impl Check {
    pub fn degree(self, m: Moduli) -> i64 {
        match self {
            Check::T => 0,
            Check::Theta | Check::EffectiveLocus => m.g as i64 - 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepReport {
    pub check: Check,
    pub g: usize,
    pub n: usize,
    pub trials: usize,
    pub seed: u64,
    pub passed: usize,
    pub failures: Vec<Failure>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Failure {
    pub d: Vec<i64>,
    pub reason: String,
}

impl SweepReport {
    pub fn ok(&self) -> bool {
        self.failures.is_empty() && self.passed == self.trials
    }
}

pub fn random_weights<R: Rng>(rng: &mut R, n: usize, degree: i64, require_negative: bool) -> Result<Vec<i64>> {
    if require_negative && n == 1 && degree >= 0 {
        return Err(Error::NoNegativeWeight);
    }
    loop {
        let mut d: Vec<i64> = (0..n).map(|_| rng.gen_range(-WEIGHT_RANGE..=WEIGHT_RANGE)).collect();
        let head: i64 = d[..n - 1].iter().sum();
        d[n - 1] = degree - head;
        if !require_negative || d.iter().any(|&x| x < 0) {
            return Ok(d);
        }
    }
}

/// The weight vectors a sweep with this seed will test, in order.
pub fn sweep_weights(check: Check, m: Moduli, trials: usize, seed: u64) -> Result<Vec<WeightVector>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..trials)
        .map(|_| {
            let d = random_weights(&mut rng, m.n, check.degree(m), check == Check::EffectiveLocus)?;
            WeightVector::new(d, m)
        })
        .collect()
}

fn compare(label: &str, left: Result<DivisorClass>, right: Result<DivisorClass>) -> std::result::Result<(), String> {
    match (left, right) {
        (Ok(a), Ok(b)) if a == b => Ok(()),
        (Ok(a), Ok(b)) => Err(format!("{label}: {a} != {b}")),
        (Err(e), _) | (_, Err(e)) => Err(format!("{label}: {e}")),
    }
}

fn run_one(check: Check, basis: &Arc<Basis>, d: &WeightVector, convention: PlusConvention) -> std::result::Result<(), String> {
    match check {
        Check::T => compare("reconstructed T vs closed form", reconstruct_t(basis, d), class_t(basis, d)),
        Check::Theta => {
            compare("reconstructed Theta vs closed form", reconstruct_theta(basis, d), class_theta(basis, d))
        }
        Check::EffectiveLocus => compare(
            "direct D vs Theta minus corrections",
            class_d_direct(basis, d, convention),
            class_d_from_theta(basis, d, convention),
        ),
    }
}

/// Runs `trials` seeded identity checks. Trials run in parallel; the report
/// lists failures in trial order.
pub fn run_sweep(check: Check, m: Moduli, trials: usize, seed: u64, convention: PlusConvention) -> Result<SweepReport> {
    if check != Check::EffectiveLocus {
        m.require_basis_complete()?;
    }
    let basis = Basis::new(m);
    let weights = sweep_weights(check, m, trials, seed)?;
    let outcomes: Vec<std::result::Result<(), String>> =
        weights.par_iter().map(|d| run_one(check, &basis, d, convention)).collect();
    let failures: Vec<Failure> = weights
        .iter()
        .zip(outcomes)
        .filter_map(|(d, r)| r.err().map(|reason| Failure { d: d.as_slice().to_vec(), reason }))
        .collect();
    Ok(SweepReport { check, g: m.g, n: m.n, trials, seed, passed: trials - failures.len(), failures })
}
