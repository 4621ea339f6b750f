//! Whittaker–Eilers penalized least squares.
//!
//! For observations `y`, weights `w` and difference order `d` the smoother
//! minimizes `Σ wᵢ (yᵢ - sᵢ)² + λ ‖D s‖²`, i.e. solves
//! `(diag(w) + λ DᵀD) s = diag(w) y` with the banded Cholesky solver.

use crate::banded::{banded_from_penalty, penalty_residual, BandedCholesky};
use crate::difference::{validate_order, DifferenceOperator};
use crate::error::{Error, Result};
use crate::signal::Signal;

pub const DEFAULT_ORDER: usize = 2;

#[derive(Debug, Clone, PartialEq)]
pub struct SmoothResult {
    pub s_hat: Vec<f64>,
    pub lambda: f64,
    pub order: usize,
    /// `y - s_hat` at observed points, exactly `0.0` at missing points.
    pub residuals: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FitMetrics {
    /// Weighted residual sum of squares.
    pub residual: f64,
    /// Roughness `‖D s_hat‖²`.
    pub roughness: f64,
    /// `residual + lambda * roughness`.
    pub objective: f64,
}

/// Factor of `diag(w) + λ DᵀD` for `signal`, after checking that the system
/// can be positive definite at all.
pub(crate) fn factor_system(signal: &Signal, lambda: f64, order: usize) -> Result<BandedCholesky> {
    validate_order(order)?;
    if !(lambda >= 0.0) || !lambda.is_finite() {
        return Err(Error::InvalidLambda(lambda));
    }
    let observed = signal.observed_count();
    if observed < order + 1 {
        return Err(Error::TooFewObservations {
            needed: order + 1,
            found: observed,
        });
    }
    banded_from_penalty(signal.len(), order, lambda, signal.w())?.cholesky()
}

pub fn whittaker_smooth(signal: &Signal, lambda: f64, order: usize) -> Result<SmoothResult> {
    let factor = factor_system(signal, lambda, order)?;
    // Refining against the operator form rather than the stored matrix keeps
    // the null space of D exact even when λ·ε is far above ε.
    let b = signal.weighted_values();
    let s_hat = factor.solve_refined_by(&b, |x| {
        penalty_residual(order, lambda, signal.w(), x, &b)
    })?;
    if let Some(i) = s_hat.iter().position(|v| !v.is_finite()) {
        return Err(Error::NonFiniteInput { index: i });
    }
    let residuals = signal
        .y()
        .iter()
        .zip(signal.w())
        .zip(&s_hat)
        .map(|((&y, &w), &s)| if w > 0.0 { y - s } else { 0.0 })
        .collect();
    Ok(SmoothResult {
        s_hat,
        lambda,
        order,
        residuals,
    })
}

pub fn fit_metrics(signal: &Signal, result: &SmoothResult) -> Result<FitMetrics> {
    if result.s_hat.len() != signal.len() {
        return Err(Error::DimensionMismatch {
            expected: signal.len(),
            found: result.s_hat.len(),
        });
    }
    let residual = result
        .residuals
        .iter()
        .zip(signal.w())
        .map(|(r, w)| w * r * r)
        .sum();
    let op = DifferenceOperator::new(result.order, signal.len())?;
    let roughness = op.apply(&result.s_hat)?.iter().map(|v| v * v).sum::<f64>();
    Ok(FitMetrics {
        residual,
        roughness,
        objective: residual + result.lambda * roughness,
    })
}
