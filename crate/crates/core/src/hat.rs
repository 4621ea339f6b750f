//! Diagonal of the hat matrix `H = (diag(w) + λDᵀD)⁻¹ diag(w)`.
//!
//! The exact diagonal comes from the banded inverse of the Cholesky factor.
//! Two cheaper estimates are provided: a reference-size problem whose
//! diagonal profile is transferred to the full length, and a Hutchinson
//! estimator with Rademacher probes.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::signal::Signal;
use crate::smoother::factor_system;

/// Size of the reference problem used by [`HatEstimator::SmallProblemRescale`].
pub const REFERENCE_SIZE: usize = 100;
pub const MIN_PROBES: usize = 16;
/// Largest `n` for which [`HatMethod::Auto`] uses the exact diagonal.
pub const AUTO_EXACT_LIMIT: usize = 2000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HatEstimator {
    SmallProblemRescale,
    StochasticProbe { probes: usize, seed: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum HatMethod {
    /// Exact up to [`AUTO_EXACT_LIMIT`] samples, small-problem rescale above.
    #[default]
    Auto,
    Exact,
    Estimate(HatEstimator),
}

impl HatMethod {
    pub fn diagonal(self, signal: &Signal, lambda: f64, order: usize) -> Result<Vec<f64>> {
        match self {
            HatMethod::Exact => hat_diagonal_exact(signal, lambda, order),
            HatMethod::Auto if signal.len() <= AUTO_EXACT_LIMIT => {
                hat_diagonal_exact(signal, lambda, order)
            }
            HatMethod::Auto => {
                hat_diagonal_estimate(signal, lambda, order, HatEstimator::SmallProblemRescale)
            }
            HatMethod::Estimate(est) => hat_diagonal_estimate(signal, lambda, order, est),
        }
    }
}

pub fn hat_diagonal_exact(signal: &Signal, lambda: f64, order: usize) -> Result<Vec<f64>> {
    let inv = factor_system(signal, lambda, order)?.inverse_band();
    Ok(signal
        .w()
        .iter()
        .enumerate()
        .map(|(i, &w)| if w > 0.0 { inv.get(i, i) * w } else { 0.0 })
        .collect())
}

pub fn hat_diagonal_estimate(
    signal: &Signal,
    lambda: f64,
    order: usize,
    estimator: HatEstimator,
) -> Result<Vec<f64>> {
    match estimator {
        HatEstimator::SmallProblemRescale => rescaled_diagonal(signal, lambda, order),
        HatEstimator::StochasticProbe { probes, seed } => {
            hutchinson_diagonal(signal, lambda, order, probes, seed)
        }
    }
}

/// Transfers the unit-weight diagonal of a [`REFERENCE_SIZE`] problem onto
/// the full signal.
///
/// When the boundary layer of the hat diagonal (a few multiples of the
/// smoothing scale `λ^(1/2d)` samples) fits inside half the reference size,
/// the reference problem is solved at the same λ: its leading and trailing
/// halves are the boundary profiles and its centre value fills the flat
/// interior. Otherwise λ is rescaled to `λ·(m/n)^(2d)` so the smoothing scale
/// keeps its fraction of the record, the reference diagonal is interpolated
/// linearly in relative position and multiplied by `m/n` (the trace, i.e.
/// the effective dimension, is preserved under the rescaling).
///
/// Weights enter only as the final factor `wᵢ`, so the result is exact at
/// gaps (zero) and approximate for fractional weights.
fn rescaled_diagonal(signal: &Signal, lambda: f64, order: usize) -> Result<Vec<f64>> {
    let n = signal.len();
    let m = REFERENCE_SIZE;
    if n < m {
        return Err(Error::SignalTooShort { needed: m, found: n });
    }
    let half = m / 2;
    let scale = lambda.powf(1.0 / (2 * order) as f64);
    let profile: Vec<f64> = if scale <= m as f64 / 8.0 {
        let small = hat_diagonal_exact(&Signal::from_values(vec![0.0; m])?, lambda, order)?;
        let centre = 0.5 * (small[half - 1] + small[half]);
        (0..n)
            .map(|i| {
                if i < half {
                    small[i]
                } else if i >= n - half {
                    small[m - (n - i)]
                } else {
                    centre
                }
            })
            .collect()
    } else {
        let ratio = m as f64 / n as f64;
        let small_lambda = lambda * ratio.powi(2 * order as i32);
        let small = hat_diagonal_exact(&Signal::from_values(vec![0.0; m])?, small_lambda, order)?;
        (0..n)
            .map(|i| {
                let pos = (i as f64 + 0.5) * ratio - 0.5;
                let lo = pos.floor().clamp(0.0, (m - 1) as f64) as usize;
                let hi = (lo + 1).min(m - 1);
                let frac = (pos - lo as f64).clamp(0.0, 1.0);
                ratio * (small[lo] + frac * (small[hi] - small[lo]))
            })
            .collect()
    };
    Ok(profile
        .iter()
        .zip(signal.w())
        .map(|(h, &w)| h * w)
        .collect())
}

fn hutchinson_diagonal(
    signal: &Signal,
    lambda: f64,
    order: usize,
    probes: usize,
    seed: u64,
) -> Result<Vec<f64>> {
    if probes < MIN_PROBES {
        return Err(Error::InvalidProbeCount {
            min: MIN_PROBES,
            found: probes,
        });
    }
    let factor = factor_system(signal, lambda, order)?;
    let n = signal.len();
    let w = signal.w();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut acc = vec![0.0; n];
    let mut z = vec![0.0; n];
    let mut hz = vec![0.0; n];
    for _ in 0..probes {
        for (zi, hzi) in z.iter_mut().zip(hz.iter_mut().zip(w)) {
            *zi = if rng.random::<bool>() { 1.0 } else { -1.0 };
            *hzi.0 = *zi * hzi.1;
        }
        factor.solve_in_place(&mut hz)?;
        for ((a, zi), hzi) in acc.iter_mut().zip(&z).zip(&hz) {
            *a += zi * hzi;
        }
    }
    let inv_probes = 1.0 / probes as f64;
    Ok(acc
        .iter()
        .zip(w)
        .map(|(a, &wi)| if wi > 0.0 { a * inv_probes } else { 0.0 })
        .collect())
}
