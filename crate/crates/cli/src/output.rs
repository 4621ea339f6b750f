//! Text renderers for the files the tool writes.
//!
//! All numbers go through [`num`], a fixed 13-significant-digit scientific
//! format, so identical doubles always produce identical bytes.

use std::fmt::Write as _;

use whittaker_core::{Method, SelectionDiagnostics, Signal, SmoothResult};

pub const SMOOTHED_HEADER: &str = "t,y,w,s_hat,residual";
pub const DIAGNOSTICS_HEADER: &str =
    "lambda_x,cv_sigma,v_distance,s_distance,log_R,log_S,log_Hres,log_Hsmooth";

pub fn num(v: f64) -> String {
    format!("{v:.12e}")
}

fn opt(v: Option<f64>) -> String {
    v.map(num).unwrap_or_default()
}

/// `smoothed.csv`: the y cell is left empty at gaps.
pub fn smoothed_csv(signal: &Signal, fit: &SmoothResult) -> String {
    let mut out = String::with_capacity(80 * (signal.len() + 1));
    out.push_str(SMOOTHED_HEADER);
    out.push('\n');
    for i in 0..signal.len() {
        let w = signal.w()[i];
        let y = (w > 0.0).then(|| signal.y()[i]);
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            num(signal.t()[i]),
            opt(y),
            num(w),
            num(fit.s_hat[i]),
            num(fit.residuals[i])
        );
    }
    out
}

#[derive(Debug, Clone, Default, PartialEq)]
struct DiagRow {
    lambda_x: f64,
    cv_sigma: Option<f64>,
    v_distance: Option<f64>,
    s_distance: Option<f64>,
    log_r: Option<f64>,
    log_s: Option<f64>,
    log_h_res: Option<f64>,
    log_h_smooth: Option<f64>,
}

/// `diagnostics.csv`: one row per grid λ, interleaved with one row per
/// distance-curve abscissa; only the columns of the method that ran are
/// filled, and dropped grid points leave their curve columns empty.
pub fn diagnostics_csv(diag: &SelectionDiagnostics) -> String {
    let grid = diag.grid.values();
    let mut rows: Vec<DiagRow> = grid
        .iter()
        .map(|&lambda_x| DiagRow {
            lambda_x,
            ..DiagRow::default()
        })
        .collect();
    match diag.method {
        Method::Cv => {
            for (row, &s) in rows.iter_mut().zip(&diag.curve_y) {
                row.cv_sigma = Some(s);
            }
        }
        method => {
            for (&idx, &(a, b)) in diag.points.indices.iter().zip(&diag.points.points) {
                let row = &mut rows[idx];
                if method == Method::VCurve {
                    row.log_r = Some(a);
                    row.log_s = Some(b);
                } else {
                    row.log_h_res = Some(a);
                    row.log_h_smooth = Some(b);
                }
            }
            for (&x, &d) in diag.curve_x.iter().zip(&diag.curve_y) {
                let pos = rows.iter().position(|r| r.lambda_x.to_bits() == x.to_bits());
                let row = match pos {
                    Some(p) => &mut rows[p],
                    None => {
                        rows.push(DiagRow {
                            lambda_x: x,
                            ..DiagRow::default()
                        });
                        rows.last_mut().expect("just pushed")
                    }
                };
                if method == Method::VCurve {
                    row.v_distance = Some(d);
                } else {
                    row.s_distance = Some(d);
                }
            }
        }
    }
    rows.sort_by(|a, b| a.lambda_x.total_cmp(&b.lambda_x));

    let mut out = String::with_capacity(120 * (rows.len() + 1));
    out.push_str(DIAGNOSTICS_HEADER);
    out.push('\n');
    for r in &rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            num(r.lambda_x),
            opt(r.cv_sigma),
            opt(r.v_distance),
            opt(r.s_distance),
            opt(r.log_r),
            opt(r.log_s),
            opt(r.log_h_res),
            opt(r.log_h_smooth)
        );
    }
    out
}

/// One-line run summary for standard output.
pub fn summary_line(
    method: &str,
    lambda: f64,
    diag: Option<&SelectionDiagnostics>,
    n: usize,
    observed: usize,
) -> String {
    match diag {
        Some(d) => format!(
            "method={method} lambda={} grid=[{},{}]x{} dropped={} n={n} observed={observed}",
            num(lambda),
            num(d.grid.first()),
            num(d.grid.last()),
            d.grid.len(),
            d.dropped_count()
        ),
        None => format!(
            "method={method} lambda={} grid=none dropped=0 n={n} observed={observed}",
            num(lambda)
        ),
    }
}

const WIDTH: f64 = 720.0;
const HEIGHT: f64 = 400.0;
const MARGIN: f64 = 50.0;

struct Frame {
    x0: f64,
    x1: f64,
    y0: f64,
    y1: f64,
}

impl Frame {
    fn fit<'a>(xs: impl Iterator<Item = &'a f64> + Clone, ys: impl Iterator<Item = &'a f64> + Clone) -> Self {
        let bounds = |it: &mut dyn Iterator<Item = &'a f64>| {
            it.filter(|v| v.is_finite())
                .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| (lo.min(v), hi.max(v)))
        };
        let (x0, mut x1) = bounds(&mut xs.clone());
        let (y0, mut y1) = bounds(&mut ys.clone());
        if !(x1 > x0) {
            x1 = x0 + 1.0;
        }
        if !(y1 > y0) {
            y1 = y0 + 1.0;
        }
        Frame { x0, x1, y0, y1 }
    }

    fn px(&self, x: f64) -> f64 {
        MARGIN + (x - self.x0) / (self.x1 - self.x0) * (WIDTH - 2.0 * MARGIN)
    }

    fn py(&self, y: f64) -> f64 {
        HEIGHT - MARGIN - (y - self.y0) / (self.y1 - self.y0) * (HEIGHT - 2.0 * MARGIN)
    }
}

fn svg_open(out: &mut String, title: &str, frame: &Frame, x_label: &str, y_label: &str) {
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="11">"#
    );
    let _ = writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        out,
        r#"<rect x="{MARGIN}" y="{MARGIN}" width="{}" height="{}" fill="none" stroke="black"/>"#,
        WIDTH - 2.0 * MARGIN,
        HEIGHT - 2.0 * MARGIN
    );
    let _ = writeln!(out, r#"<text x="{}" y="30" text-anchor="middle" font-size="14">{title}</text>"#, WIDTH / 2.0);
    let bottom = HEIGHT - MARGIN + 15.0;
    let _ = writeln!(out, r#"<text x="{MARGIN}" y="{bottom}">{:.4}</text>"#, frame.x0);
    let _ = writeln!(
        out,
        r#"<text x="{}" y="{bottom}" text-anchor="end">{:.4}</text>"#,
        WIDTH - MARGIN,
        frame.x1
    );
    let _ = writeln!(out, r#"<text x="{}" y="{}" text-anchor="middle">{x_label}</text>"#, WIDTH / 2.0, HEIGHT - 12.0);
    let _ = writeln!(out, r#"<text x="{}" y="{}" text-anchor="end">{:.4}</text>"#, MARGIN - 4.0, HEIGHT - MARGIN, frame.y0);
    let _ = writeln!(out, r#"<text x="{}" y="{}" text-anchor="end">{:.4}</text>"#, MARGIN - 4.0, MARGIN + 4.0, frame.y1);
    let _ = writeln!(
        out,
        r#"<text x="14" y="{}" transform="rotate(-90 14 {})" text-anchor="middle">{y_label}</text>"#,
        HEIGHT / 2.0,
        HEIGHT / 2.0
    );
}

/// Polylines for `(x, y)` runs; `None` breaks the line.
fn polylines(out: &mut String, frame: &Frame, pts: &[Option<(f64, f64)>], stroke: &str, width: f64) {
    for run in pts.split(|p| p.is_none()) {
        if run.is_empty() {
            continue;
        }
        let coords: Vec<String> = run
            .iter()
            .flatten()
            .map(|&(x, y)| format!("{:.2},{:.2}", frame.px(x), frame.py(y)))
            .collect();
        let _ = writeln!(
            out,
            r#"<polyline fill="none" stroke="{stroke}" stroke-width="{width}" points="{}"/>"#,
            coords.join(" ")
        );
    }
}

/// Observations (broken at gaps) overlaid with the smooth.
pub fn smoothed_svg(signal: &Signal, fit: &SmoothResult) -> String {
    let observed: Vec<f64> = signal
        .y()
        .iter()
        .zip(signal.w())
        .filter(|(_, &w)| w > 0.0)
        .map(|(y, _)| *y)
        .collect();
    let frame = Frame::fit(signal.t().iter(), observed.iter().chain(&fit.s_hat));
    let mut out = String::new();
    svg_open(
        &mut out,
        &format!("Whittaker smooth, lambda = {:.4e}", fit.lambda),
        &frame,
        "t",
        "y",
    );
    let data: Vec<Option<(f64, f64)>> = (0..signal.len())
        .map(|i| (signal.w()[i] > 0.0).then(|| (signal.t()[i], signal.y()[i])))
        .collect();
    let smooth: Vec<Option<(f64, f64)>> =
        signal.t().iter().zip(&fit.s_hat).map(|(&t, &s)| Some((t, s))).collect();
    polylines(&mut out, &frame, &data, "#999999", 1.0);
    polylines(&mut out, &frame, &smooth, "#d62728", 2.0);
    out.push_str("</svg>\n");
    out
}

/// Selection curve against log10 λ with the chosen point marked.
pub fn selection_svg(diag: &SelectionDiagnostics) -> String {
    let xs: Vec<f64> = diag.curve_x.iter().map(|x| x.log10()).collect();
    let frame = Frame::fit(xs.iter(), diag.curve_y.iter());
    let y_label = match diag.method {
        Method::Cv => "sigma_cv",
        Method::VCurve => "V-curve distance",
        Method::SCurve => "S-curve distance",
    };
    let mut out = String::new();
    svg_open(
        &mut out,
        &format!("{} selection, lambda = {:.4e}", diag.method, diag.chosen_lambda),
        &frame,
        "log10 lambda",
        y_label,
    );
    let pts: Vec<Option<(f64, f64)>> = xs
        .iter()
        .zip(&diag.curve_y)
        .map(|(&x, &y)| y.is_finite().then_some((x, y)))
        .collect();
    polylines(&mut out, &frame, &pts, "#1f77b4", 1.5);
    let cx = frame.px(xs[diag.chosen_curve_index]);
    let cy = frame.py(diag.curve_y[diag.chosen_curve_index]);
    let _ = writeln!(
        out,
        r##"<circle cx="{cx:.2}" cy="{cy:.2}" r="5" fill="none" stroke="#d62728" stroke-width="2"/>"##
    );
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use whittaker_core::{lambda_grid, select, whittaker_smooth, HatMethod};

    fn signal() -> Signal {
        let y: Vec<f64> = (0..40).map(|i| (i as f64 * 0.3).sin() + 0.1 * ((i * 7) % 5) as f64).collect();
        let mut w = vec![1.0; 40];
        w[5] = 0.0;
        Signal::new((0..40).map(f64::from).collect(), y, w).unwrap()
    }

    #[test]
    fn number_format_is_fixed() {
        assert_eq!(num(0.0), "0.000000000000e0");
        assert_eq!(num(-1234.5), "-1.234500000000e3");
        assert_eq!(num(1e-7), "1.000000000000e-7");
    }

    #[test]
    fn smoothed_rows_leave_gaps_empty() {
        let s = signal();
        let fit = whittaker_smooth(&s, 3.0, 2).unwrap();
        let text = smoothed_csv(&s, &fit);
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], SMOOTHED_HEADER);
        assert_eq!(lines.len(), 41);
        let gap: Vec<&str> = lines[6].split(',').collect();
        assert_eq!(gap[1], "");
        assert_eq!(gap[2], num(0.0));
        assert_eq!(gap[4], num(0.0));
    }

    #[test]
    fn diagnostics_interleave_midpoints() {
        let s = signal();
        let grid = lambda_grid(-1.0, 3.0, 2).unwrap();
        let d = select(&s, &grid, 2, Method::SCurve, HatMethod::Exact).unwrap();
        let text = diagnostics_csv(&d);
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], DIAGNOSTICS_HEADER);
        assert_eq!(lines.len(), 1 + grid.len() + d.curve_x.len());
        let cells: Vec<Vec<&str>> = lines[1..].iter().map(|l| l.split(',').collect()).collect();
        assert!(cells.iter().all(|c| c.len() == 8 && c[1].is_empty() && c[2].is_empty()));
        // grid rows carry entropies, midpoint rows carry distances
        assert!(!cells[0][6].is_empty() && cells[0][3].is_empty());
        assert!(cells[1][6].is_empty() && !cells[1][3].is_empty());

        let cv = select(&s, &grid, 2, Method::Cv, HatMethod::Exact).unwrap();
        let text = diagnostics_csv(&cv);
        assert_eq!(text.lines().count(), 1 + grid.len());
        assert!(text.lines().skip(1).all(|l| {
            let c: Vec<&str> = l.split(',').collect();
            !c[1].is_empty() && c[2..].iter().all(|v| v.is_empty())
        }));
    }

    #[test]
    fn svgs_are_well_formed() {
        let s = signal();
        let fit = whittaker_smooth(&s, 3.0, 2).unwrap();
        let svg = smoothed_svg(&s, &fit);
        assert!(svg.starts_with("<svg") && svg.trim_end().ends_with("</svg>"));
        // the gap at index 5 splits the data line in two, plus the smooth
        assert_eq!(svg.matches("<polyline").count(), 3);
        let grid = lambda_grid(-1.0, 3.0, 2).unwrap();
        let d = select(&s, &grid, 2, Method::VCurve, HatMethod::Exact).unwrap();
        let svg = selection_svg(&d);
        assert_eq!(svg.matches("<circle").count(), 1);
    }
}
