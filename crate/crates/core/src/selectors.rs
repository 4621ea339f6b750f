//! Automatic choice of the regularization parameter over a log-spaced grid.
//!
//! * **CV** – leave-one-out standard error from the hat diagonal,
//!   `yᵢ − ŷ₋ᵢ = (yᵢ − ŷᵢ)/(1 − hᵢᵢ)`, minimized.
//! * **V-curve** – distances between consecutive L-curve points
//!   `(ln R, ln S)`, minimized.
//! * **S-curve** – distances between consecutive points
//!   `(ln H(residuals), ln H(D ŝ))` of spectral entropies, maximized.
//!
//! The two distance curves are placed at the geometric mean of the adjacent
//! grid values. Ties go to the smaller λ.

use std::fmt;
use std::str::FromStr;

use crate::difference::DifferenceOperator;
use crate::error::{Error, Result};
use crate::hat::HatMethod;
use crate::signal::Signal;
use crate::smoother::{fit_metrics, whittaker_smooth};
use crate::spectral::SpectrumAnalyzer;

pub const DEFAULT_GRID_MIN_EXP: f64 = -2.0;
pub const DEFAULT_GRID_MAX_EXP: f64 = 8.0;
pub const DEFAULT_POINTS_PER_DECADE: usize = 10;
/// Smallest admissible `1 − hᵢᵢ` in the CV identity.
pub const MIN_LEVERAGE_GAP: f64 = 1e-12;
/// Entropies at or below this are treated as degenerate.
pub const ENTROPY_FLOOR: f64 = 1e-12;
/// Sums of squares below this fraction of the signal energy `Σ w y²` count
/// as rounding noise.
pub const RELATIVE_ENERGY_FLOOR: f64 = 1e-24;

#[derive(Debug, Clone, PartialEq)]
pub struct LambdaGrid {
    values: Vec<f64>,
    decades_min: f64,
    decades_max: f64,
    points_per_decade: usize,
}

/// `10^u` for `u` evenly spaced over `[decades_min, decades_max]` with
/// `points_per_decade` intervals per decade.
pub fn lambda_grid(decades_min: f64, decades_max: f64, points_per_decade: usize) -> Result<LambdaGrid> {
    if !decades_min.is_finite() || !decades_max.is_finite() || !(decades_min < decades_max) {
        return Err(Error::InvalidRange(format!(
            "grid exponents must satisfy min < max (got {decades_min} and {decades_max})"
        )));
    }
    if points_per_decade == 0 {
        return Err(Error::InvalidRange("points per decade must be at least 1".into()));
    }
    let intervals = ((decades_max - decades_min) * points_per_decade as f64)
        .round()
        .max(1.0) as usize;
    let values: Vec<f64> = (0..=intervals)
        .map(|i| {
            let u = decades_min + (decades_max - decades_min) * i as f64 / intervals as f64;
            10f64.powf(u)
        })
        .collect();
    if values.iter().any(|v| !(v.is_finite() && *v > 0.0)) {
        return Err(Error::InvalidRange(format!(
            "grid 10^[{decades_min}, {decades_max}] leaves the floating point range"
        )));
    }
    Ok(LambdaGrid {
        values,
        decades_min,
        decades_max,
        points_per_decade,
    })
}

impl Default for LambdaGrid {
    fn default() -> Self {
        lambda_grid(
            DEFAULT_GRID_MIN_EXP,
            DEFAULT_GRID_MAX_EXP,
            DEFAULT_POINTS_PER_DECADE,
        )
        .expect("default grid is valid")
    }
}

impl LambdaGrid {
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn decades_min(&self) -> f64 {
        self.decades_min
    }

    pub fn decades_max(&self) -> f64 {
        self.decades_max
    }

    pub fn points_per_decade(&self) -> usize {
        self.points_per_decade
    }

    pub fn first(&self) -> f64 {
        self.values[0]
    }

    pub fn last(&self) -> f64 {
        self.values[self.values.len() - 1]
    }

    /// Grid values interleaved with the geometric means of neighbours, i.e.
    /// every λ any selector can return.
    pub fn with_midpoints(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(2 * self.values.len() - 1);
        for pair in self.values.windows(2) {
            out.push(pair[0]);
            out.push(geometric_mean(pair[0], pair[1]));
        }
        out.push(self.last());
        out
    }
}

fn geometric_mean(a: f64, b: f64) -> f64 {
    (a * b).sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    Cv,
    VCurve,
    SCurve,
}

impl Method {
    pub const ALL: [Method; 3] = [Method::Cv, Method::VCurve, Method::SCurve];

    pub fn as_str(self) -> &'static str {
        match self {
            Method::Cv => "cv",
            Method::VCurve => "vcurve",
            Method::SCurve => "scurve",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "cv" => Ok(Method::Cv),
            "vcurve" => Ok(Method::VCurve),
            "scurve" => Ok(Method::SCurve),
            other => Err(Error::InvalidRange(format!("unknown selection method `{other}`"))),
        }
    }
}

/// How residuals at missing samples enter the residual spectrum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum GapResiduals {
    /// Keep the full-length series with zeros at gaps.
    #[default]
    ZeroFill,
    /// Drop gap positions and concatenate the observed residuals.
    Compact,
}

/// Usable 2-d curve points with their grid indices.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct CurvePoints {
    pub indices: Vec<usize>,
    pub points: Vec<(f64, f64)>,
    /// Grid indices skipped by the degeneracy guards.
    pub dropped: Vec<usize>,
}

impl CurvePoints {
    fn push(&mut self, index: usize, point: Option<(f64, f64)>) {
        match point {
            Some(p) => {
                self.indices.push(index);
                self.points.push(p);
            }
            None => self.dropped.push(index),
        }
    }

    fn ensure_usable(self) -> Result<Self> {
        if self.points.len() < 3 {
            Err(Error::AllPointsDegenerate {
                usable: self.points.len(),
            })
        } else {
            Ok(self)
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SelectionDiagnostics {
    pub method: Method,
    pub grid: LambdaGrid,
    /// λ for CV, geometric-mean λ of adjacent usable points otherwise.
    pub curve_x: Vec<f64>,
    /// σ_cv, V-distance or S-distance.
    pub curve_y: Vec<f64>,
    /// L-curve or S-curve points; empty for CV.
    pub points: CurvePoints,
    pub chosen_lambda: f64,
    /// Grid index of the choice (lower end of the pair for distance curves).
    pub chosen_index: usize,
    /// Position of the choice in `curve_x`.
    pub chosen_curve_index: usize,
}

impl SelectionDiagnostics {
    pub fn dropped_count(&self) -> usize {
        self.points.dropped.len()
    }
}

fn energy_floor(signal: &Signal) -> f64 {
    let energy: f64 = signal
        .weighted_values()
        .iter()
        .zip(signal.y())
        .map(|(wy, y)| if *wy == 0.0 { 0.0 } else { wy * y })
        .sum();
    RELATIVE_ENERGY_FLOOR * energy
}

fn above_floor(value: f64, floor: f64) -> bool {
    value.is_finite() && value > floor && value > 0.0
}

/// Index of the first minimum (or maximum) of `values`, ignoring NaN.
fn first_extremum(values: &[f64], maximize: bool) -> Option<usize> {
    let mut best: Option<(usize, f64)> = None;
    for (i, &v) in values.iter().enumerate() {
        if v.is_nan() {
            continue;
        }
        let better = match best {
            None => true,
            Some((_, b)) => {
                if maximize {
                    v > b
                } else {
                    v < b
                }
            }
        };
        if better {
            best = Some((i, v));
        }
    }
    best.map(|(i, _)| i)
}

pub fn cv_curve(
    signal: &Signal,
    grid: &LambdaGrid,
    order: usize,
    hat_method: HatMethod,
) -> Result<SelectionDiagnostics> {
    let observed = signal.observed_count();
    let mut sigma = Vec::with_capacity(grid.len());
    for &lambda in grid.values() {
        let fit = whittaker_smooth(signal, lambda, order)?;
        let h = hat_method.diagonal(signal, lambda, order)?;
        let mut sum = 0.0;
        for (i, (&w, (&r, &hii))) in signal.w().iter().zip(fit.residuals.iter().zip(&h)).enumerate() {
            if w <= 0.0 {
                continue;
            }
            let gap = 1.0 - hii;
            if !(gap >= MIN_LEVERAGE_GAP) {
                return Err(Error::DegenerateHat { index: i, lambda, gap });
            }
            let loo = r / gap;
            sum += loo * loo;
        }
        sigma.push((sum / observed as f64).sqrt());
    }
    let chosen = first_extremum(&sigma, false).ok_or(Error::AllPointsDegenerate { usable: 0 })?;
    Ok(SelectionDiagnostics {
        method: Method::Cv,
        grid: grid.clone(),
        curve_x: grid.values().to_vec(),
        curve_y: sigma,
        points: CurvePoints::default(),
        chosen_lambda: grid.values()[chosen],
        chosen_index: chosen,
        chosen_curve_index: chosen,
    })
}

/// L-curve points `(ln R, ln S)`; grid values where either sum of squares
/// is at rounding level are dropped.
pub fn lv_points(signal: &Signal, grid: &LambdaGrid, order: usize) -> Result<CurvePoints> {
    let floor = energy_floor(signal);
    let mut out = CurvePoints::default();
    for (idx, &lambda) in grid.values().iter().enumerate() {
        let fit = whittaker_smooth(signal, lambda, order)?;
        let m = fit_metrics(signal, &fit)?;
        let point = (above_floor(m.residual, floor) && above_floor(m.roughness, floor))
            .then(|| (m.residual.ln(), m.roughness.ln()));
        out.push(idx, point);
    }
    out.ensure_usable()
}

pub fn scurve_points(signal: &Signal, grid: &LambdaGrid, order: usize) -> Result<CurvePoints> {
    scurve_points_with(signal, grid, order, GapResiduals::default())
}

/// S-curve points `(ln H_res, ln H_smooth)` where `H_res` is the spectral
/// entropy of the residuals and `H_smooth` that of `D ŝ`.
pub fn scurve_points_with(
    signal: &Signal,
    grid: &LambdaGrid,
    order: usize,
    gaps: GapResiduals,
) -> Result<CurvePoints> {
    let floor = energy_floor(signal);
    let op = DifferenceOperator::new(order, signal.len())?;
    let mut analyzer = SpectrumAnalyzer::new();
    let mut out = CurvePoints::default();
    for (idx, &lambda) in grid.values().iter().enumerate() {
        let fit = whittaker_smooth(signal, lambda, order)?;
        let residuals: Vec<f64> = match gaps {
            GapResiduals::ZeroFill => fit.residuals.clone(),
            GapResiduals::Compact => fit
                .residuals
                .iter()
                .zip(signal.w())
                .filter(|(_, &w)| w > 0.0)
                .map(|(r, _)| *r)
                .collect(),
        };
        let slope = op.apply(&fit.s_hat)?;
        let energy = |v: &[f64]| v.iter().map(|x| x * x).sum::<f64>();
        let point = if above_floor(energy(&residuals), floor) && above_floor(energy(&slope), floor) {
            let h_res = analyzer.spectral_entropy(&residuals)?;
            let h_smooth = analyzer.spectral_entropy(&slope)?;
            (h_res.value > ENTROPY_FLOOR && h_smooth.value > ENTROPY_FLOOR)
                .then(|| (h_res.value.ln(), h_smooth.value.ln()))
        } else {
            None
        };
        out.push(idx, point);
    }
    out.ensure_usable()
}

/// Selects along consecutive-point distances of `points`: the minimum for
/// the V-curve, the maximum for the S-curve.
pub fn distance_selection(
    method: Method,
    grid: &LambdaGrid,
    points: CurvePoints,
) -> Result<SelectionDiagnostics> {
    let maximize = match method {
        Method::VCurve => false,
        Method::SCurve => true,
        Method::Cv => {
            return Err(Error::InvalidRange(
                "cross-validation is not a distance curve".into(),
            ))
        }
    };
    let points = points.ensure_usable()?;
    let lambdas = grid.values();
    let (curve_x, curve_y): (Vec<f64>, Vec<f64>) = points
        .indices
        .windows(2)
        .zip(points.points.windows(2))
        .map(|(ix, p)| {
            let d = ((p[1].0 - p[0].0).powi(2) + (p[1].1 - p[0].1).powi(2)).sqrt();
            (geometric_mean(lambdas[ix[0]], lambdas[ix[1]]), d)
        })
        .unzip();
    let chosen = first_extremum(&curve_y, maximize)
        .ok_or(Error::AllPointsDegenerate { usable: 0 })?;
    Ok(SelectionDiagnostics {
        method,
        grid: grid.clone(),
        chosen_lambda: curve_x[chosen],
        chosen_index: points.indices[chosen],
        chosen_curve_index: chosen,
        curve_x,
        curve_y,
        points,
    })
}

pub fn select_vcurve(signal: &Signal, grid: &LambdaGrid, order: usize) -> Result<SelectionDiagnostics> {
    distance_selection(Method::VCurve, grid, lv_points(signal, grid, order)?)
}

pub fn select_scurve(signal: &Signal, grid: &LambdaGrid, order: usize) -> Result<SelectionDiagnostics> {
    distance_selection(Method::SCurve, grid, scurve_points(signal, grid, order)?)
}

pub fn select(
    signal: &Signal,
    grid: &LambdaGrid,
    order: usize,
    method: Method,
    hat_method: HatMethod,
) -> Result<SelectionDiagnostics> {
    match method {
        Method::Cv => cv_curve(signal, grid, order, hat_method),
        Method::VCurve => select_vcurve(signal, grid, order),
        Method::SCurve => select_scurve(signal, grid, order),
    }
}
