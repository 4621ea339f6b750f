//! Shared inputs for the criterion benches.

use whittaker_core::{add_noise, synth_signal, Expression, NoiseSpec, Signal};

/// Problem sizes swept by the size-scaling benches.
pub const SIZES: [usize; 3] = [1_000, 10_000, 100_000];

pub const SEED: u64 = 20_250_101;

/// Noisy `sin` over [0, 4π] with σ = 0.2.
pub fn noisy_sine(n: usize) -> Signal {
    noisy(Expression::Sin, n, 0.2)
}

pub fn noisy(expression: Expression, n: usize, sigma: f64) -> Signal {
    let truth = synth_signal(expression, n, 0.0, 4.0 * std::f64::consts::PI)
        .expect("benchmark signal parameters are valid");
    add_noise(&truth, NoiseSpec { sigma, seed: SEED }).expect("noise spec is valid")
}

/// Same as [`noisy_sine`] with every seventh sample marked missing.
pub fn gappy_sine(n: usize) -> Signal {
    let s = noisy_sine(n);
    let w = (0..n).map(|i| if i % 7 == 3 { 0.0 } else { 1.0 }).collect();
    Signal::new(s.t().to_vec(), s.y().to_vec(), w).expect("gaps keep enough observations")
}
