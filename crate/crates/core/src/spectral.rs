//! One-sided normalized power spectra and their Shannon entropy.
//!
//! No windowing, detrending or zero padding is applied. Entropies are in
//! nats.

use std::sync::Arc;

use rustfft::num_complex::Complex;
use rustfft::{Fft, FftPlannerScalar};

use crate::error::{Error, Result};

pub const MIN_SPECTRUM_LEN: usize = 4;
/// Spectra whose raw power is at most `POWER_FLOOR * n` are treated as empty.
pub const POWER_FLOOR: f64 = 1e-300;

#[derive(Debug, Clone, PartialEq)]
pub struct PowerSpectrum {
    /// `F(q)` for `q = 0..=n/2`, summing to one unless degenerate.
    pub bins: Vec<f64>,
    /// Raw one-sided power before normalization.
    pub total_power: f64,
    /// Set when the raw power fell below the floor and `bins` are all zero.
    pub degenerate: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralEntropy {
    pub value: f64,
    pub degenerate: bool,
}

impl SpectralEntropy {
    pub fn value(self) -> f64 {
        self.value
    }
}

/// Reusable FFT planner; the scalar planner keeps results independent of
/// the host's SIMD support.
pub struct SpectrumAnalyzer {
    planner: FftPlannerScalar<f64>,
    cached: Option<(usize, Arc<dyn Fft<f64>>)>,
    buffer: Vec<Complex<f64>>,
}

impl Default for SpectrumAnalyzer {
    fn default() -> Self {
        Self {
            planner: FftPlannerScalar::new(),
            cached: None,
            buffer: Vec::new(),
        }
    }
}

impl SpectrumAnalyzer {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn power_spectrum(&mut self, x: &[f64]) -> Result<PowerSpectrum> {
        let n = x.len();
        if n < MIN_SPECTRUM_LEN {
            return Err(Error::SignalTooShort {
                needed: MIN_SPECTRUM_LEN,
                found: n,
            });
        }
        if let Some(index) = x.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFiniteInput { index });
        }
        let fft = match &self.cached {
            Some((len, fft)) if *len == n => Arc::clone(fft),
            _ => {
                let fft = self.planner.plan_fft_forward(n);
                self.cached = Some((n, Arc::clone(&fft)));
                fft
            }
        };
        self.buffer.clear();
        self.buffer.extend(x.iter().map(|&v| Complex::new(v, 0.0)));
        fft.process(&mut self.buffer);

        let mut bins: Vec<f64> = self.buffer[..=n / 2].iter().map(|c| c.norm_sqr()).collect();
        let total_power: f64 = bins.iter().sum();
        let degenerate = !(total_power > POWER_FLOOR * n as f64);
        if degenerate {
            bins.iter_mut().for_each(|b| *b = 0.0);
        } else {
            bins.iter_mut().for_each(|b| *b /= total_power);
        }
        Ok(PowerSpectrum {
            bins,
            total_power,
            degenerate,
        })
    }

    pub fn spectral_entropy(&mut self, x: &[f64]) -> Result<SpectralEntropy> {
        let spectrum = self.power_spectrum(x)?;
        Ok(entropy_of(&spectrum))
    }
}

/// `-Σ F ln F` with `0 ln 0 = 0`; zero for a degenerate spectrum.
pub fn entropy_of(spectrum: &PowerSpectrum) -> SpectralEntropy {
    let value = spectrum
        .bins
        .iter()
        .filter(|&&f| f > 0.0)
        .map(|&f| -f * f.ln())
        .sum::<f64>()
        .max(0.0);
    SpectralEntropy {
        value,
        degenerate: spectrum.degenerate,
    }
}

pub fn power_spectrum(x: &[f64]) -> Result<PowerSpectrum> {
    SpectrumAnalyzer::new().power_spectrum(x)
}

pub fn spectral_entropy(x: &[f64]) -> Result<SpectralEntropy> {
    SpectrumAnalyzer::new().spectral_entropy(x)
}
