//! Whittaker–Eilers smoothing with automatic selection of the
//! regularization parameter by leave-one-out cross-validation, the V-curve,
//! or the spectral-entropy S-curve.

pub mod banded;
pub mod benchmark;
pub mod difference;
pub mod error;
pub mod hat;
pub mod selectors;
pub mod signal;
pub mod smoother;
pub mod spectral;

#[cfg(test)]
#[path = "../tests/common/oracle.rs"]
mod oracle;

pub use banded::{banded_cholesky_solve, banded_from_penalty, BandedCholesky, BandedSymMatrix};
pub use benchmark::{
    add_noise, mse, optimal_lambda, run_benchmark, synth_signal, BenchmarkConfig, BenchmarkRecord,
    BenchmarkReport, ErrorMetric, Expression, NoiseSpec, TruthSignal,
};
pub use difference::{difference_apply, DifferenceOperator};
pub use error::{Error, Result};
pub use hat::{hat_diagonal_estimate, hat_diagonal_exact, HatEstimator, HatMethod};
pub use selectors::{
    cv_curve, lambda_grid, lv_points, scurve_points, select, select_scurve, select_vcurve,
    CurvePoints, LambdaGrid, Method, SelectionDiagnostics,
};
pub use signal::Signal;
pub use smoother::{fit_metrics, whittaker_smooth, FitMetrics, SmoothResult, DEFAULT_ORDER};
pub use spectral::{power_spectrum, spectral_entropy, PowerSpectrum, SpectralEntropy};
