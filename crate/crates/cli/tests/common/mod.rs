#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

pub struct GoldenCase {
    pub name: &'static str,
    pub sample: &'static str,
    pub args: &'static [&'static str],
}

/// Bundled samples and the selector each golden run uses.
pub const GOLDEN_CASES: &[GoldenCase] = &[
    GoldenCase {
        name: "trend-scurve",
        sample: "trend.csv",
        args: &["--t-col", "day", "--y-col", "close", "--select", "scurve"],
    },
    GoldenCase {
        name: "trend-cv",
        sample: "trend.csv",
        args: &["--t-col", "day", "--y-col", "close", "--select", "cv"],
    },
    GoldenCase {
        name: "spectrum-gaps-scurve",
        sample: "spectrum_gaps.csv",
        args: &["--t-col", "wavelength", "--y-col", "flux", "--select", "scurve"],
    },
    GoldenCase {
        name: "spectrum-gaps-vcurve",
        sample: "spectrum_gaps.csv",
        args: &["--t-col", "wavelength", "--y-col", "flux", "--select", "vcurve", "--order", "3"],
    },
    GoldenCase {
        name: "peaks-vcurve",
        sample: "peaks.csv",
        args: &["--t-col", "ppm", "--y-col", "intensity", "--select", "vcurve"],
    },
];

pub const GOLDEN_FILES: [&str; 2] = ["smoothed.csv", "diagnostics.csv"];

pub fn crate_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
}

pub fn sample(name: &str) -> PathBuf {
    crate_dir().join("samples").join(name)
}

pub fn golden_dir(case: &str) -> PathBuf {
    crate_dir().join("tests").join("golden").join(case)
}

pub fn whittaker(args: &[&str], out: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_whittaker"))
        .args(args)
        .arg("--output-dir")
        .arg(out)
        .output()
        .expect("failed to spawn whittaker")
}

pub fn run_case(case: &GoldenCase, out: &Path) -> Output {
    let input = sample(case.sample);
    let mut args = vec!["--input", input.to_str().unwrap()];
    args.extend_from_slice(case.args);
    whittaker(&args, out)
}
