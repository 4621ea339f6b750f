use std::path::PathBuf;

use clap::{Parser, ValueEnum};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Selection {
    Cv,
    Vcurve,
    Scurve,
    Fixed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum HatChoice {
    /// Exact up to 2000 samples, reference-size estimate above.
    Auto,
    Exact,
    /// Diagonal transferred from a 100-sample reference problem.
    Rescale,
    /// Hutchinson estimator with Rademacher probes (see --probes, --seed).
    Hutchinson,
}

/// Whittaker smoothing with automatic choice of the smoothing parameter.
///
/// Reads a CSV series (missing values: empty, nan, NA), smooths it with a
/// fixed λ or one chosen by cross-validation, the V-curve or the
/// spectral-entropy S-curve, and writes smoothed.csv and diagnostics.csv.
/// With --benchmark-config it instead runs a seeded simulation study and
/// writes benchmark.csv.
#[derive(Debug, Clone, Parser)]
#[command(name = "whittaker", version)]
pub struct Cli {
    /// Input CSV file; standard input when omitted or `-`.
    #[arg(long, value_name = "PATH")]
    pub input: Option<PathBuf>,

    /// Abscissa column (header name or zero-based position).
    #[arg(long, default_value = "t", value_name = "COL")]
    pub t_col: String,

    /// Observation column.
    #[arg(long, default_value = "y", value_name = "COL")]
    pub y_col: String,

    /// Optional weight column with values in [0, 1].
    #[arg(long, value_name = "COL")]
    pub w_col: Option<String>,

    /// Use the row index 0..n-1 as abscissa and ignore --t-col.
    #[arg(long)]
    pub index_as_t: bool,

    /// Field delimiter (a single byte).
    #[arg(long, default_value = ",", value_name = "CHAR")]
    pub delimiter: String,

    /// Difference order of the penalty.
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=3))]
    pub order: Option<u8>,

    #[arg(long, value_enum, default_value_t = Selection::Scurve)]
    pub select: Selection,

    /// Smoothing parameter for --select fixed.
    #[arg(long, allow_negative_numbers = true)]
    pub lambda: Option<f64>,

    #[arg(long, default_value_t = -2.0, allow_negative_numbers = true)]
    pub grid_min_exp: f64,

    #[arg(long, default_value_t = 8.0, allow_negative_numbers = true)]
    pub grid_max_exp: f64,

    /// Grid points per decade of λ.
    #[arg(long, default_value_t = 10)]
    pub grid_ppd: usize,

    /// Hat-diagonal method for cross-validation.
    #[arg(long, value_enum, default_value_t = HatChoice::Auto)]
    pub hat_method: HatChoice,

    /// Probe count for --hat-method hutchinson.
    #[arg(long, default_value_t = 64)]
    pub probes: usize,

    #[arg(long, default_value = ".", value_name = "DIR")]
    pub output_dir: PathBuf,

    /// Also write smoothed.svg and selection.svg.
    #[arg(long)]
    pub emit_svg: bool,

    /// Skip diagnostics.csv even when a selector runs.
    #[arg(long)]
    pub no_diagnostics: bool,

    /// Seed for stochastic hat estimation; in benchmark mode, overrides the
    /// configured base seed.
    #[arg(long)]
    pub seed: Option<u64>,

    /// Benchmark error metric: sum of absolute errors instead of mean square.
    #[arg(long)]
    pub mae: bool,

    /// Treat unequally spaced abscissas as an error instead of a warning.
    #[arg(long)]
    pub strict_spacing: bool,

    /// Permit --select fixed --lambda 0 (exact interpolation, no gaps).
    #[arg(long)]
    pub allow_interpolation: bool,

    /// Run the simulation benchmark described by this TOML file.
    #[arg(long, value_name = "PATH")]
    pub benchmark_config: Option<PathBuf>,
}
