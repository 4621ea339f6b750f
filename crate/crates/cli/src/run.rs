use std::fs;
use std::path::{Path, PathBuf};

use whittaker_core::benchmark::{run_benchmark, BenchmarkConfig};
use whittaker_core::{
    lambda_grid, select, whittaker_smooth, ErrorMetric, HatEstimator, HatMethod, LambdaGrid,
    Method, Signal, DEFAULT_ORDER,
};

use crate::args::{Cli, HatChoice, Selection};
use crate::error::{CliError, IngestError, Result};
use crate::ingest::{ingest_csv, IngestSpec, Source};
use crate::output;

pub const SMOOTHED_FILE: &str = "smoothed.csv";
pub const DIAGNOSTICS_FILE: &str = "diagnostics.csv";
pub const BENCHMARK_FILE: &str = "benchmark.csv";
pub const SMOOTHED_SVG: &str = "smoothed.svg";
pub const SELECTION_SVG: &str = "selection.svg";

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Lambda {
    Fixed(f64),
    Select(Method),
}

#[derive(Debug, Clone, PartialEq)]
pub struct SmoothConfig {
    pub ingest: IngestSpec,
    pub order: usize,
    pub lambda: Lambda,
    pub grid: LambdaGrid,
    pub hat_method: HatMethod,
    pub strict_spacing: bool,
    pub allow_interpolation: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Mode {
    Smooth(SmoothConfig),
    Benchmark(BenchmarkConfig),
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub mode: Mode,
    pub output_dir: PathBuf,
    pub emit_diagnostics: bool,
    pub emit_svg: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub summary: String,
    pub warnings: Vec<String>,
    pub files: Vec<PathBuf>,
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

impl RunConfig {
    pub fn from_cli(cli: &Cli) -> Result<Self> {
        let order = cli.order.map(usize::from);
        let mode = match &cli.benchmark_config {
            Some(path) => {
                let text = fs::read_to_string(path).map_err(|e| CliError::Config {
                    path: path.clone(),
                    message: e.to_string(),
                })?;
                let mut config: BenchmarkConfig =
                    toml::from_str(&text).map_err(|e| CliError::Config {
                        path: path.clone(),
                        message: e.to_string(),
                    })?;
                if let Some(order) = order {
                    config.order = order;
                }
                if let Some(seed) = cli.seed {
                    config.base_seed = seed;
                }
                if cli.mae {
                    config.metric = ErrorMetric::SumAbsolute;
                }
                Mode::Benchmark(config)
            }
            None => Mode::Smooth(smooth_config(cli, order.unwrap_or(DEFAULT_ORDER))?),
        };
        Ok(RunConfig {
            mode,
            output_dir: cli.output_dir.clone(),
            emit_diagnostics: !cli.no_diagnostics,
            emit_svg: cli.emit_svg,
        })
    }
}

fn smooth_config(cli: &Cli, order: usize) -> Result<SmoothConfig> {
    let delimiter = match cli.delimiter.as_bytes() {
        [b] => *b,
        _ if cli.delimiter == "\\t" => b'\t',
        _ => return Err(usage(format!("delimiter must be one byte, got `{}`", cli.delimiter))),
    };
    let source = match &cli.input {
        None => Source::Stdin,
        Some(p) if p.as_os_str() == "-" => Source::Stdin,
        Some(p) => Source::Path(p.clone()),
    };
    let lambda = match cli.select {
        Selection::Fixed => {
            let lambda = cli
                .lambda
                .ok_or_else(|| usage("--select fixed requires --lambda"))?;
            if !lambda.is_finite() || lambda < 0.0 {
                return Err(usage(format!("--lambda must be finite and positive, got {lambda}")));
            }
            if lambda == 0.0 && !cli.allow_interpolation {
                return Err(usage("--lambda 0 interpolates the data; pass --allow-interpolation"));
            }
            Lambda::Fixed(lambda)
        }
        Selection::Cv => Lambda::Select(Method::Cv),
        Selection::Vcurve => Lambda::Select(Method::VCurve),
        Selection::Scurve => Lambda::Select(Method::SCurve),
    };
    if cli.lambda.is_some() && cli.select != Selection::Fixed {
        return Err(usage("--lambda is only used with --select fixed"));
    }
    let grid = lambda_grid(cli.grid_min_exp, cli.grid_max_exp, cli.grid_ppd)
        .map_err(|e| usage(e.to_string()))?;
    let hat_method = match cli.hat_method {
        HatChoice::Auto => HatMethod::Auto,
        HatChoice::Exact => HatMethod::Exact,
        HatChoice::Rescale => HatMethod::Estimate(HatEstimator::SmallProblemRescale),
        HatChoice::Hutchinson => HatMethod::Estimate(HatEstimator::StochasticProbe {
            probes: cli.probes,
            seed: cli.seed.unwrap_or(0),
        }),
    };
    Ok(SmoothConfig {
        ingest: IngestSpec {
            source,
            t_column: (!cli.index_as_t).then(|| cli.t_col.clone()),
            y_column: cli.y_col.clone(),
            w_column: cli.w_col.clone(),
            delimiter,
        },
        order,
        lambda,
        grid,
        hat_method,
        strict_spacing: cli.strict_spacing,
        allow_interpolation: cli.allow_interpolation,
    })
}

/// Executes `config`. Every output is rendered in memory first; if any file
/// cannot be written, those already written by this call are removed.
pub fn run(config: &RunConfig) -> Result<Outcome> {
    let (rendered, summary, warnings) = match &config.mode {
        Mode::Smooth(smooth) => render_smooth(smooth, config)?,
        Mode::Benchmark(bench) => render_benchmark(bench)?,
    };
    let files = write_all(&config.output_dir, &rendered)?;
    Ok(Outcome {
        summary,
        warnings,
        files,
    })
}

type Rendered = (Vec<(&'static str, String)>, String, Vec<String>);

fn render_smooth(cfg: &SmoothConfig, run: &RunConfig) -> Result<Rendered> {
    let ingested = ingest_csv(&cfg.ingest)?;
    let signal: Signal = ingested.signal;
    let mut warnings = Vec::new();
    if !ingested.uniform_spacing {
        if cfg.strict_spacing {
            return Err(IngestError::UnequalSpacing.into());
        }
        warnings.push(
            "warning: abscissa is not equally spaced; smoothing treats samples as unit-spaced"
                .to_string(),
        );
    }
    let (lambda, diag) = match cfg.lambda {
        Lambda::Fixed(lambda) => {
            if lambda == 0.0 && signal.has_gaps() {
                return Err(CliError::Data(whittaker_core::Error::InvalidSignal(
                    "interpolation (lambda = 0) cannot fill missing values".into(),
                )));
            }
            (lambda, None)
        }
        Lambda::Select(method) => {
            let diag = select(&signal, &cfg.grid, cfg.order, method, cfg.hat_method)
                .map_err(CliError::compute)?;
            (diag.chosen_lambda, Some(diag))
        }
    };
    let fit = whittaker_smooth(&signal, lambda, cfg.order).map_err(CliError::compute)?;

    let method = match cfg.lambda {
        Lambda::Fixed(_) => "fixed",
        Lambda::Select(m) => m.as_str(),
    };
    let summary = output::summary_line(
        method,
        lambda,
        diag.as_ref(),
        signal.len(),
        signal.observed_count(),
    );
    let mut files = vec![(SMOOTHED_FILE, output::smoothed_csv(&signal, &fit))];
    if let Some(d) = &diag {
        if run.emit_diagnostics {
            files.push((DIAGNOSTICS_FILE, output::diagnostics_csv(d)));
        }
    }
    if run.emit_svg {
        files.push((SMOOTHED_SVG, output::smoothed_svg(&signal, &fit)));
        if let Some(d) = &diag {
            files.push((SELECTION_SVG, output::selection_svg(d)));
        }
    }
    Ok((files, summary, warnings))
}

fn render_benchmark(cfg: &BenchmarkConfig) -> Result<Rendered> {
    let report = run_benchmark(cfg).map_err(CliError::compute)?;
    let mut csv = Vec::new();
    report
        .write_csv(&mut csv)
        .expect("writing to memory cannot fail");
    let csv = String::from_utf8(csv).expect("report is ASCII");
    let warnings = report
        .failures
        .iter()
        .map(|f| {
            let who = f.method.map(|m| m.as_str()).unwrap_or("trial");
            format!("warning: sigma {} trial {} ({who}): {}", f.sigma, f.trial, f.message)
        })
        .collect();
    let summary = format!(
        "benchmark expression={} n={} sigmas={} trials={} rows={} failures={}",
        cfg.expression,
        cfg.n,
        cfg.sigmas.len(),
        cfg.trials,
        report.records.len(),
        report.failures.len()
    );
    Ok((vec![(BENCHMARK_FILE, csv)], summary, warnings))
}

fn write_all(dir: &Path, files: &[(&'static str, String)]) -> Result<Vec<PathBuf>> {
    let fail = |path: &Path, source| CliError::Output {
        path: path.to_path_buf(),
        source,
    };
    fs::create_dir_all(dir).map_err(|e| fail(dir, e))?;
    let mut written = Vec::with_capacity(files.len());
    for (name, contents) in files {
        let path = dir.join(name);
        if let Err(e) = fs::write(&path, contents) {
            for p in &written {
                let _ = fs::remove_file(p);
            }
            let _ = fs::remove_file(&path);
            return Err(fail(&path, e));
        }
        written.push(path);
    }
    Ok(written)
}
