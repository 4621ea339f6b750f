//! Simulation protocol comparing each selector's λ with the error-optimal λ.
//!
//! A known analytic truth is corrupted with seeded Gaussian noise, the
//! smoother is swept over the grid (plus the geometric midpoints the distance
//! curves can return) to find the λ with the smallest error against the
//! truth, and every selector's choice is scored against it.

use std::fmt;
use std::io::{self, Write};
use std::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hat::HatMethod;
use crate::selectors::{lambda_grid, select, LambdaGrid, Method};
use crate::signal::Signal;
use crate::smoother::whittaker_smooth;

pub const MIN_TRUTH_LEN: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Expression {
    /// `sin t`
    Sin,
    /// `½ (ln(t + 1) + sin t · sin 3t)`
    LogSineProduct,
    /// `¼ (sin t + sin 9t + sin 17t + sin 23t + ln(t + 1))`
    MultiSineLog,
}

impl Expression {
    pub const ALL: [Expression; 3] = [
        Expression::Sin,
        Expression::LogSineProduct,
        Expression::MultiSineLog,
    ];

    pub fn id(self) -> &'static str {
        match self {
            Expression::Sin => "sin",
            Expression::LogSineProduct => "log-sine-product",
            Expression::MultiSineLog => "multi-sine-log",
        }
    }

    pub fn eval(self, t: f64) -> f64 {
        match self {
            Expression::Sin => t.sin(),
            Expression::LogSineProduct => 0.5 * ((t + 1.0).ln() + t.sin() * (3.0 * t).sin()),
            Expression::MultiSineLog => {
                0.25 * (t.sin() + (9.0 * t).sin() + (17.0 * t).sin() + (23.0 * t).sin()
                    + (t + 1.0).ln())
            }
        }
    }

    fn uses_log(self) -> bool {
        !matches!(self, Expression::Sin)
    }
}

impl fmt::Display for Expression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for Expression {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Expression::ALL
            .into_iter()
            .find(|e| e.id() == s)
            .ok_or_else(|| Error::UnknownExpression(s.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TruthSignal {
    pub expression: Expression,
    pub t: Vec<f64>,
    pub s: Vec<f64>,
}

pub fn synth_signal(expression: Expression, n: usize, t_min: f64, t_max: f64) -> Result<TruthSignal> {
    if n < MIN_TRUTH_LEN {
        return Err(Error::SignalTooShort {
            needed: MIN_TRUTH_LEN,
            found: n,
        });
    }
    if !(t_min < t_max) || !t_min.is_finite() || !t_max.is_finite() {
        return Err(Error::InvalidRange(format!(
            "need t_min < t_max, got [{t_min}, {t_max}]"
        )));
    }
    if expression.uses_log() && t_min < 0.0 {
        return Err(Error::DomainError(format!(
            "`{expression}` takes ln(t + 1) and needs t_min >= 0, got {t_min}"
        )));
    }
    let step = (t_max - t_min) / (n - 1) as f64;
    let t: Vec<f64> = (0..n)
        .map(|i| if i == n - 1 { t_max } else { t_min + step * i as f64 })
        .collect();
    let s = t.iter().map(|&v| expression.eval(v)).collect();
    Ok(TruthSignal { expression, t, s })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NoiseSpec {
    pub sigma: f64,
    pub seed: u64,
}

/// `y = s + σ g` with i.i.d. standard normal `g` drawn from `seed`; unit
/// weights.
pub fn add_noise(truth: &TruthSignal, spec: NoiseSpec) -> Result<Signal> {
    if !(spec.sigma >= 0.0) || !spec.sigma.is_finite() {
        return Err(Error::InvalidNoise(format!("sigma must be >= 0, got {}", spec.sigma)));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let y = truth
        .s
        .iter()
        .map(|&s| {
            let g: f64 = StandardNormal.sample(&mut rng);
            s + spec.sigma * g
        })
        .collect();
    Signal::new(truth.t.clone(), y, vec![1.0; truth.s.len()])
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ErrorMetric {
    /// `(1/n) Σ (sᵢ − ŝᵢ)²`
    #[default]
    MeanSquare,
    /// `Σ |sᵢ − ŝᵢ|`
    SumAbsolute,
}

impl ErrorMetric {
    pub fn evaluate(self, truth: &TruthSignal, estimate: &[f64]) -> Result<f64> {
        if truth.s.len() != estimate.len() {
            return Err(Error::DimensionMismatch {
                expected: truth.s.len(),
                found: estimate.len(),
            });
        }
        let diffs = truth.s.iter().zip(estimate).map(|(s, e)| s - e);
        Ok(match self {
            ErrorMetric::MeanSquare => diffs.map(|d| d * d).sum::<f64>() / estimate.len() as f64,
            ErrorMetric::SumAbsolute => diffs.map(f64::abs).sum(),
        })
    }
}

pub fn mse(truth: &TruthSignal, estimate: &[f64]) -> Result<f64> {
    ErrorMetric::MeanSquare.evaluate(truth, estimate)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptimalLambda {
    pub lambda: f64,
    pub error: f64,
}

pub fn optimal_lambda(
    truth: &TruthSignal,
    noisy: &Signal,
    grid: &LambdaGrid,
    order: usize,
) -> Result<OptimalLambda> {
    optimal_lambda_over(truth, noisy, grid.values(), order, ErrorMetric::MeanSquare)
}

/// Error-minimizing λ among `candidates`; ties go to the earlier candidate.
pub fn optimal_lambda_over(
    truth: &TruthSignal,
    noisy: &Signal,
    candidates: &[f64],
    order: usize,
    metric: ErrorMetric,
) -> Result<OptimalLambda> {
    let mut best: Option<OptimalLambda> = None;
    for &lambda in candidates {
        let fit = whittaker_smooth(noisy, lambda, order)?;
        let error = metric.evaluate(truth, &fit.s_hat)?;
        if best.map_or(true, |b| error < b.error) {
            best = Some(OptimalLambda { lambda, error });
        }
    }
    best.ok_or_else(|| Error::InvalidRange("empty λ candidate list".into()))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub min_exp: f64,
    pub max_exp: f64,
    pub points_per_decade: usize,
}

impl Default for GridSpec {
    fn default() -> Self {
        let g = LambdaGrid::default();
        Self {
            min_exp: g.decades_min(),
            max_exp: g.decades_max(),
            points_per_decade: g.points_per_decade(),
        }
    }
}

impl GridSpec {
    pub fn build(&self) -> Result<LambdaGrid> {
        lambda_grid(self.min_exp, self.max_exp, self.points_per_decade)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BenchmarkConfig {
    pub expression: Expression,
    pub n: usize,
    pub t_min: f64,
    pub t_max: f64,
    pub sigmas: Vec<f64>,
    pub trials: usize,
    pub grid: GridSpec,
    pub order: usize,
    pub base_seed: u64,
    pub metric: ErrorMetric,
}

impl Default for BenchmarkConfig {
    fn default() -> Self {
        Self {
            expression: Expression::Sin,
            n: 1000,
            t_min: 0.0,
            t_max: 4.0 * std::f64::consts::PI,
            sigmas: vec![0.05, 0.1, 0.2, 0.35, 0.5],
            trials: 20,
            grid: GridSpec::default(),
            order: crate::smoother::DEFAULT_ORDER,
            base_seed: 20_250_101,
            metric: ErrorMetric::MeanSquare,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MethodOutcome {
    pub lambda: f64,
    pub error: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchmarkRecord {
    pub sigma: f64,
    pub trial: usize,
    pub lambda_opt: f64,
    pub error_opt: f64,
    /// `None` when that selector failed on this trial.
    pub cv: Option<MethodOutcome>,
    pub vcurve: Option<MethodOutcome>,
    pub scurve: Option<MethodOutcome>,
}

impl BenchmarkRecord {
    pub fn outcome(&self, method: Method) -> Option<MethodOutcome> {
        match method {
            Method::Cv => self.cv,
            Method::VCurve => self.vcurve,
            Method::SCurve => self.scurve,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrialFailure {
    pub sigma: f64,
    pub trial: usize,
    pub method: Option<Method>,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchmarkReport {
    pub config: BenchmarkConfig,
    pub records: Vec<BenchmarkRecord>,
    pub failures: Vec<TrialFailure>,
}

/// Per-sigma medians over trials.
#[derive(Debug, Clone, PartialEq)]
pub struct SigmaSummary {
    pub sigma: f64,
    pub trials: usize,
    pub lambda_opt: f64,
    pub error_opt: f64,
    /// Indexed like [`Method::ALL`]; NaN when no trial succeeded.
    pub lambda: [f64; 3],
    pub error: [f64; 3],
}

pub fn median(values: &mut [f64]) -> f64 {
    if values.is_empty() {
        return f64::NAN;
    }
    values.sort_by(f64::total_cmp);
    let mid = values.len() / 2;
    if values.len() % 2 == 1 {
        values[mid]
    } else {
        0.5 * (values[mid - 1] + values[mid])
    }
}

impl BenchmarkReport {
    pub fn summary(&self) -> Vec<SigmaSummary> {
        self.config
            .sigmas
            .iter()
            .map(|&sigma| {
                let recs: Vec<&BenchmarkRecord> =
                    self.records.iter().filter(|r| r.sigma == sigma).collect();
                let collect = |f: &dyn Fn(&BenchmarkRecord) -> Option<f64>| {
                    let mut v: Vec<f64> = recs.iter().filter_map(|r| f(r)).collect();
                    median(&mut v)
                };
                let mut lambda = [f64::NAN; 3];
                let mut error = [f64::NAN; 3];
                for (k, m) in Method::ALL.into_iter().enumerate() {
                    lambda[k] = collect(&|r| r.outcome(m).map(|o| o.lambda));
                    error[k] = collect(&|r| r.outcome(m).map(|o| o.error));
                }
                SigmaSummary {
                    sigma,
                    trials: recs.len(),
                    lambda_opt: collect(&|r| Some(r.lambda_opt)),
                    error_opt: collect(&|r| Some(r.error_opt)),
                    lambda,
                    error,
                }
            })
            .collect()
    }

    /// One row per (sigma, trial); failed selectors leave empty fields.
    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(
            out,
            "sigma,trial,lambda_opt,mse_opt,lambda_cv,mse_cv,lambda_vc,mse_vc,lambda_s,mse_s"
        )?;
        let pair = |o: Option<MethodOutcome>| match o {
            Some(o) => format!("{:e},{:e}", o.lambda, o.error),
            None => ",".to_string(),
        };
        for r in &self.records {
            writeln!(
                out,
                "{:e},{},{:e},{:e},{},{},{}",
                r.sigma,
                r.trial,
                r.lambda_opt,
                r.error_opt,
                pair(r.cv),
                pair(r.vcurve),
                pair(r.scurve)
            )?;
        }
        Ok(())
    }
}

/// Runs every (sigma, trial) cell. Trial `k` draws its noise from seed
/// `base_seed + k`, so the report depends only on the configuration.
pub fn run_benchmark(config: &BenchmarkConfig) -> Result<BenchmarkReport> {
    if config.sigmas.is_empty() || config.trials == 0 {
        return Err(Error::InvalidRange(
            "benchmark needs at least one sigma and one trial".into(),
        ));
    }
    let grid = config.grid.build()?;
    let candidates = grid.with_midpoints();
    let truth = synth_signal(config.expression, config.n, config.t_min, config.t_max)?;
    crate::difference::validate_order(config.order)?;

    let mut records = Vec::new();
    let mut failures = Vec::new();
    for &sigma in &config.sigmas {
        for trial in 0..config.trials {
            let seed = config.base_seed.wrapping_add(trial as u64);
            let cell = (|| -> Result<BenchmarkRecord> {
                let noisy = add_noise(&truth, NoiseSpec { sigma, seed })?;
                let opt = optimal_lambda_over(&truth, &noisy, &candidates, config.order, config.metric)?;
                let mut rec = BenchmarkRecord {
                    sigma,
                    trial,
                    lambda_opt: opt.lambda,
                    error_opt: opt.error,
                    cv: None,
                    vcurve: None,
                    scurve: None,
                };
                for method in Method::ALL {
                    let outcome = select(&noisy, &grid, config.order, method, HatMethod::Auto)
                        .and_then(|d| {
                            let fit = whittaker_smooth(&noisy, d.chosen_lambda, config.order)?;
                            Ok(MethodOutcome {
                                lambda: d.chosen_lambda,
                                error: config.metric.evaluate(&truth, &fit.s_hat)?,
                            })
                        });
                    match outcome {
                        Ok(o) => match method {
                            Method::Cv => rec.cv = Some(o),
                            Method::VCurve => rec.vcurve = Some(o),
                            Method::SCurve => rec.scurve = Some(o),
                        },
                        Err(e) => failures.push(TrialFailure {
                            sigma,
                            trial,
                            method: Some(method),
                            message: e.to_string(),
                        }),
                    }
                }
                Ok(rec)
            })();
            match cell {
                Ok(rec) => records.push(rec),
                Err(e) => failures.push(TrialFailure {
                    sigma,
                    trial,
                    method: None,
                    message: e.to_string(),
                }),
            }
        }
    }
    Ok(BenchmarkReport {
        config: config.clone(),
        records,
        failures,
    })
}
