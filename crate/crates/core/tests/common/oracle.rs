//! Dense reference implementations used as independent test oracles.
//!
//! Nothing here touches the library's banded or FFT code paths: difference
//! matrices are built by repeated row differencing of the identity, systems
//! are solved by partially pivoted Gaussian elimination, and spectra come
//! from direct O(n²) DFT summation.
#![allow(dead_code)]

pub type Dense = Vec<Vec<f64>>;

pub fn identity(n: usize) -> Dense {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
        .collect()
}

/// Order-`d` difference matrix obtained by differencing the rows of `I` `d`
/// times (same construction as `numpy.diff(eye(n), d, axis=0)`).
pub fn difference_matrix(n: usize, d: usize) -> Dense {
    let mut m = identity(n);
    for _ in 0..d {
        m = (0..m.len() - 1)
            .map(|r| (0..n).map(|c| m[r + 1][c] - m[r][c]).collect())
            .collect();
    }
    m
}

pub fn transpose(a: &Dense) -> Dense {
    if a.is_empty() {
        return vec![];
    }
    (0..a[0].len())
        .map(|j| a.iter().map(|row| row[j]).collect())
        .collect()
}

pub fn matmul(a: &Dense, b: &Dense) -> Dense {
    let inner = b.len();
    let cols = b[0].len();
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| (0..inner).map(|k| row[k] * b[k][j]).sum())
                .collect()
        })
        .collect()
}

pub fn matvec(a: &Dense, x: &[f64]) -> Vec<f64> {
    a.iter()
        .map(|row| row.iter().zip(x).map(|(u, v)| u * v).sum())
        .collect()
}

/// `diag(w) + lambda · DᵀD` by explicit multiplication.
pub fn gram(n: usize, d: usize) -> Dense {
    let dm = difference_matrix(n, d);
    matmul(&transpose(&dm), &dm)
}

pub fn penalty_matrix(n: usize, d: usize, lambda: f64, w: &[f64]) -> Dense {
    penalty_from_gram(&gram(n, d), lambda, w)
}

fn penalty_from_gram(dtd: &Dense, lambda: f64, w: &[f64]) -> Dense {
    let n = w.len();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| lambda * dtd[i][j] + if i == j { w[i] } else { 0.0 })
                .collect()
        })
        .collect()
}

/// LU factors with partial pivoting, `P A = L U`, stored in one matrix.
pub struct DenseLu {
    lu: Dense,
    perm: Vec<usize>,
}

pub fn lu_factor(a: &Dense) -> DenseLu {
    let n = a.len();
    let mut lu = a.clone();
    let mut perm: Vec<usize> = (0..n).collect();
    for col in 0..n {
        let piv = (col..n)
            .max_by(|&i, &j| lu[i][col].abs().partial_cmp(&lu[j][col].abs()).unwrap())
            .unwrap();
        lu.swap(col, piv);
        perm.swap(col, piv);
        let p = lu[col][col];
        assert!(p != 0.0, "singular matrix in oracle");
        for r in col + 1..n {
            let f = lu[r][col] / p;
            lu[r][col] = f;
            if f == 0.0 {
                continue;
            }
            for c in col + 1..n {
                lu[r][c] -= f * lu[col][c];
            }
        }
    }
    DenseLu { lu, perm }
}

impl DenseLu {
    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        let n = self.lu.len();
        let mut y: Vec<f64> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            let s: f64 = (0..i).map(|j| self.lu[i][j] * y[j]).sum();
            y[i] -= s;
        }
        for i in (0..n).rev() {
            let s: f64 = (i + 1..n).map(|j| self.lu[i][j] * y[j]).sum();
            y[i] = (y[i] - s) / self.lu[i][i];
        }
        y
    }
}

/// Gaussian elimination with partial pivoting followed by three steps of
/// iterative refinement with residuals accumulated in double-double.
pub fn gaussian_solve(a: &Dense, b: &[f64]) -> Vec<f64> {
    let lu = lu_factor(a);
    let mut x = lu.solve(b);
    for _ in 0..3 {
        let r: Vec<f64> = a
            .iter()
            .zip(b)
            .map(|(row, &bi)| exact_residual_row(row, &x, bi))
            .collect();
        let dx = lu.solve(&r);
        x.iter_mut().zip(&dx).for_each(|(x, d)| *x += d);
    }
    x
}

/// `b - row·x` accumulated as an unevaluated (hi, lo) pair.
fn exact_residual_row(row: &[f64], x: &[f64], b: f64) -> f64 {
    let (mut hi, mut lo) = (b, 0.0f64);
    for (&a, &xi) in row.iter().zip(x) {
        if a != 0.0 {
            dd_add_product(&mut hi, &mut lo, -a, xi);
        }
    }
    hi + lo
}

fn dekker_product(a: f64, b: f64) -> (f64, f64) {
    fn split(v: f64) -> (f64, f64) {
        let c = 134_217_729.0 * v;
        let hi = c - (c - v);
        (hi, v - hi)
    }
    let p = a * b;
    let (ah, al) = split(a);
    let (bh, bl) = split(b);
    // Dekker split product, independent of fused multiply-add.
    let e = ((ah * bh - p) + ah * bl + al * bh) + al * bl;
    (p, e)
}

/// Gauss–Jordan inversion with partial pivoting.
pub fn dense_inverse(a: &Dense) -> Dense {
    let n = a.len();
    let mut m: Dense = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { 1.0 } else { 0.0 }));
            r
        })
        .collect();
    for col in 0..n {
        let piv = (col..n)
            .max_by(|&i, &j| m[i][col].abs().partial_cmp(&m[j][col].abs()).unwrap())
            .unwrap();
        m.swap(col, piv);
        let p = m[col][col];
        assert!(p != 0.0, "singular matrix in oracle");
        for c in 0..2 * n {
            m[col][c] /= p;
        }
        let pivot_row = m[col].clone();
        for (r, row) in m.iter_mut().enumerate() {
            if r == col || row[col] == 0.0 {
                continue;
            }
            let f = row[col];
            for c in 0..2 * n {
                row[c] -= f * pivot_row[c];
            }
        }
    }
    m.into_iter().map(|row| row[n..].to_vec()).collect()
}

/// Dense Whittaker smooth: solves `(diag(w) + λDᵀD) s = diag(w) y`.
///
/// After the elimination, refinement residuals are formed from the integer
/// matrix DᵀD and the scalar λ separately in double-double, so the result is
/// the solution of the exactly specified system rather than of its rounded
/// assembly.
pub fn dense_smooth(y: &[f64], w: &[f64], lambda: f64, d: usize) -> Vec<f64> {
    smooth_with_gram(&gram(y.len(), d), y, w, lambda, d)
}

fn smooth_with_gram(dtd: &Dense, y: &[f64], w: &[f64], lambda: f64, d: usize) -> Vec<f64> {
    let n = y.len();
    let lu = lu_factor(&penalty_from_gram(dtd, lambda, w));
    let rhs: Vec<f64> = y.iter().zip(w).map(|(y, w)| y * w).collect();
    let mut x = lu.solve(&rhs);
    for _ in 0..4 {
        let r: Vec<f64> = (0..n)
            .map(|i| {
                let (mut hi, mut lo) = (0.0f64, 0.0f64);
                for j in i.saturating_sub(d)..(i + d + 1).min(n) {
                    if dtd[i][j] != 0.0 {
                        dd_add_product(&mut hi, &mut lo, dtd[i][j], x[j]);
                    }
                }
                // rhs_i - w_i x_i - λ (hi + lo)
                let (mut rh, mut rl) = (rhs[i], 0.0f64);
                dd_add_product(&mut rh, &mut rl, -w[i], x[i]);
                dd_add_product(&mut rh, &mut rl, -lambda, hi);
                rl -= lambda * lo;
                rh + rl
            })
            .collect();
        let dx = lu.solve(&r);
        x.iter_mut().zip(&dx).for_each(|(x, d)| *x += d);
    }
    x
}

fn dd_add_product(hi: &mut f64, lo: &mut f64, a: f64, b: f64) {
    let (p, pe) = dekker_product(a, b);
    let s = *hi + p;
    let v = s - *hi;
    let e = (*hi - (s - v)) + (p - v);
    *hi = s;
    *lo += e + pe;
}

/// Diagonal of the dense hat matrix `(diag(w) + λDᵀD)⁻¹ diag(w)`.
pub fn dense_hat_diagonal(n: usize, w: &[f64], lambda: f64, d: usize) -> Vec<f64> {
    let inv = dense_inverse(&penalty_matrix(n, d, lambda, w));
    (0..n).map(|i| inv[i][i] * w[i]).collect()
}

/// Brute-force leave-one-out: zero each observed weight in turn, re-smooth
/// densely, and predict the withheld point.
pub fn brute_force_cv_sigma(y: &[f64], w: &[f64], lambda: f64, d: usize) -> f64 {
    let dtd = gram(y.len(), d);
    let mut sum = 0.0;
    let mut m = 0usize;
    for i in 0..y.len() {
        if w[i] <= 0.0 {
            continue;
        }
        let mut wi = w.to_vec();
        wi[i] = 0.0;
        let s = smooth_with_gram(&dtd, y, &wi, lambda, d);
        sum += (y[i] - s[i]).powi(2);
        m += 1;
    }
    (sum / m as f64).sqrt()
}

/// One-sided normalized power spectrum by direct DFT summation.
pub fn naive_power_spectrum(x: &[f64]) -> Vec<f64> {
    let n = x.len();
    let bins = n / 2 + 1;
    let p: Vec<f64> = (0..bins)
        .map(|q| {
            let (mut re, mut im) = (0.0, 0.0);
            for (t, v) in x.iter().enumerate() {
                let ang = -2.0 * std::f64::consts::PI * ((q * t) % n) as f64 / n as f64;
                re += v * ang.cos();
                im += v * ang.sin();
            }
            re * re + im * im
        })
        .collect();
    let total: f64 = p.iter().sum();
    if total <= 1e-300 * n as f64 {
        return vec![0.0; bins];
    }
    p.iter().map(|v| v / total).collect()
}

pub fn naive_spectral_entropy(x: &[f64]) -> f64 {
    naive_power_spectrum(x)
        .iter()
        .filter(|&&f| f > 0.0)
        .map(|f| -f * f.ln())
        .sum()
}

/// Least-squares polynomial of degree `deg` evaluated on the sample index,
/// via normal equations on indices rescaled to [-1, 1].
pub fn polyfit_values(y: &[f64], deg: usize) -> Vec<f64> {
    let n = y.len();
    let u: Vec<f64> = (0..n)
        .map(|i| 2.0 * i as f64 / (n - 1) as f64 - 1.0)
        .collect();
    let k = deg + 1;
    let mut a = vec![vec![0.0; k]; k];
    let mut b = vec![0.0; k];
    for (ui, yi) in u.iter().zip(y) {
        let pw: Vec<f64> = (0..k).map(|p| ui.powi(p as i32)).collect();
        for r in 0..k {
            b[r] += pw[r] * yi;
            for c in 0..k {
                a[r][c] += pw[r] * pw[c];
            }
        }
    }
    let coef = gaussian_solve(&a, &b);
    u.iter()
        .map(|ui| (0..k).map(|p| coef[p] * ui.powi(p as i32)).sum())
        .collect()
}

pub fn norm(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum::<f64>().sqrt()
}

pub fn sub(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}
