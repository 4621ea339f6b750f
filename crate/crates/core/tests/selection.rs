mod common;

use whittaker_core::selectors::{select, LambdaGrid, Method};
use whittaker_core::{
    add_noise, mse, synth_signal, whittaker_smooth, Expression, HatMethod, NoiseSpec, Signal,
};

const FOUR_PI: f64 = 4.0 * std::f64::consts::PI;

fn noisy(expression: Expression, n: usize, sigma: f64, seed: u64) -> (whittaker_core::TruthSignal, Signal) {
    let truth = synth_signal(expression, n, 0.0, FOUR_PI).unwrap();
    let y = add_noise(&truth, NoiseSpec { sigma, seed }).unwrap();
    (truth, y)
}

/// V-curve from its definition: smooth at every grid λ, take
/// (ln ‖y − ŝ‖², ln ‖Dŝ‖²), and pick the geometric mean of the pair with the
/// shortest step.
fn scripted_vcurve(y: &[f64], grid: &[f64]) -> f64 {
    let signal = Signal::from_values(y.to_vec()).unwrap();
    let pts: Vec<(f64, f64)> = grid
        .iter()
        .map(|&lam| {
            let s = whittaker_smooth(&signal, lam, 2).unwrap().s_hat;
            let r: f64 = y.iter().zip(&s).map(|(a, b)| (a - b).powi(2)).sum();
            let rough: f64 = (0..s.len() - 2)
                .map(|i| (s[i + 2] - 2.0 * s[i + 1] + s[i]).powi(2))
                .sum();
            (r.ln(), rough.ln())
        })
        .collect();
    let mut best = (f64::INFINITY, 0);
    for i in 0..pts.len() - 1 {
        let d = ((pts[i + 1].0 - pts[i].0).powi(2) + (pts[i + 1].1 - pts[i].1).powi(2)).sqrt();
        if d < best.0 {
            best = (d, i);
        }
    }
    (grid[best.1] * grid[best.1 + 1]).sqrt()
}

#[test]
fn vcurve_agrees_with_scripted_definition() {
    let (_, y) = noisy(Expression::Sin, 500, 0.2, 42);
    let grid = LambdaGrid::default();
    let chosen = select(&y, &grid, 2, Method::VCurve, HatMethod::Exact).unwrap();
    let scripted = scripted_vcurve(y.y(), grid.values());
    let step = grid.values()[1] / grid.values()[0];
    let steps = (chosen.chosen_lambda / scripted).ln().abs() / step.ln();
    assert!(steps <= 2.0 + 1e-9, "{} vs {}", chosen.chosen_lambda, scripted);
}

#[test]
fn scurve_lands_near_the_optimum_on_the_sine_benchmark() {
    let (truth, y) = noisy(Expression::Sin, 1000, 0.2, 7);
    let grid = LambdaGrid::default();
    let chosen = select(&y, &grid, 2, Method::SCurve, HatMethod::Exact).unwrap();
    let at_chosen = mse(&truth, &whittaker_smooth(&y, chosen.chosen_lambda, 2).unwrap().s_hat).unwrap();
    let best = grid
        .values()
        .iter()
        .map(|&lam| mse(&truth, &whittaker_smooth(&y, lam, 2).unwrap().s_hat).unwrap())
        .fold(f64::INFINITY, f64::min);
    assert!(at_chosen <= 1.5 * best, "{at_chosen} vs {best}");
}

#[test]
fn refining_the_grid_keeps_choices_within_one_coarse_step() {
    let coarse = LambdaGrid::default();
    let fine = whittaker_core::lambda_grid(-2.0, 8.0, 20).unwrap();
    let step = (coarse.values()[1] / coarse.values()[0]).ln();
    for expression in [Expression::Sin, Expression::LogSineProduct] {
        let (_, y) = noisy(expression, 1000, 0.2, 3);
        for method in Method::ALL {
            let a = select(&y, &coarse, 2, method, HatMethod::Auto).unwrap().chosen_lambda;
            let b = select(&y, &fine, 2, method, HatMethod::Auto).unwrap().chosen_lambda;
            assert!(
                (a / b).ln().abs() <= step + 1e-9,
                "{expression} {method}: {a} vs {b}"
            );
        }
    }
}

#[test]
fn selection_ignores_amplitude() {
    let grid = LambdaGrid::default();
    for expression in Expression::ALL {
        let (_, y) = noisy(expression, 400, 0.1, 5);
        let scaled = y.scaled(7.3);
        for method in Method::ALL {
            let a = select(&y, &grid, 2, method, HatMethod::Exact).unwrap();
            let b = select(&scaled, &grid, 2, method, HatMethod::Exact).unwrap();
            assert_eq!(a.chosen_index, b.chosen_index, "{expression} {method}");
        }
    }
}
