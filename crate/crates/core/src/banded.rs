//! Symmetric banded matrices and a non-pivoting banded Cholesky solver.
//!
//! Only the main diagonal and the `bandwidth` sub-diagonals are stored. Band
//! `k` holds `A[j + k][j]` at offset `k * n + j`; slots with `j + k >= n` are
//! structural zeros and stay `0.0`.

use crate::difference::DifferenceOperator;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct BandedSymMatrix {
    n: usize,
    bandwidth: usize,
    bands: Vec<f64>,
}

impl BandedSymMatrix {
    /// All-zero matrix of dimension `n` with `bandwidth` sub-diagonals.
    pub fn zeros(n: usize, bandwidth: usize) -> Result<Self> {
        if n == 0 || bandwidth >= n {
            return Err(Error::InvalidRange(format!(
                "bandwidth {bandwidth} must be smaller than dimension {n}"
            )));
        }
        Ok(Self {
            n,
            bandwidth,
            bands: vec![0.0; (bandwidth + 1) * n],
        })
    }

    pub fn identity(n: usize) -> Result<Self> {
        let mut m = Self::zeros(n, 0)?;
        m.bands.iter_mut().for_each(|v| *v = 1.0);
        Ok(m)
    }

    pub fn from_diagonal(diag: &[f64], bandwidth: usize) -> Result<Self> {
        let mut m = Self::zeros(diag.len(), bandwidth)?;
        m.bands[..diag.len()].copy_from_slice(diag);
        Ok(m)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn bandwidth(&self) -> usize {
        self.bandwidth
    }

    /// Raw band storage, `(bandwidth + 1) * n` values.
    pub fn bands(&self) -> &[f64] {
        &self.bands
    }

    /// Entry `(i, j)` of the full symmetric matrix.
    pub fn get(&self, i: usize, j: usize) -> f64 {
        let (row, col) = if i >= j { (i, j) } else { (j, i) };
        let k = row - col;
        if row >= self.n || k > self.bandwidth {
            0.0
        } else {
            self.bands[k * self.n + col]
        }
    }

    /// Adds `value` to the symmetric pair `(i, j)` / `(j, i)`.
    ///
    /// Panics if the entry lies outside the stored band.
    pub fn add(&mut self, i: usize, j: usize, value: f64) {
        let (row, col) = if i >= j { (i, j) } else { (j, i) };
        let k = row - col;
        assert!(
            row < self.n && k <= self.bandwidth,
            "entry ({i}, {j}) outside band"
        );
        self.bands[k * self.n + col] += value;
    }

    pub fn mul_vec(&self, x: &[f64]) -> Result<Vec<f64>> {
        check_len(self.n, x.len())?;
        let n = self.n;
        let mut out: Vec<f64> = self.bands[..n].iter().zip(x).map(|(d, v)| d * v).collect();
        for k in 1..=self.bandwidth {
            let band = &self.bands[k * n..(k + 1) * n];
            for j in 0..n - k {
                out[j + k] += band[j] * x[j];
                out[j] += band[j] * x[j + k];
            }
        }
        Ok(out)
    }

    /// Row-major dense copy, mainly for tests and small problems.
    pub fn to_dense(&self) -> Vec<Vec<f64>> {
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self.get(i, j)).collect())
            .collect()
    }

    pub fn cholesky(&self) -> Result<BandedCholesky> {
        BandedCholesky::factor(self)
    }
}

/// Lower-triangular banded Cholesky factor `L` with `A = L Lᵀ`, stored with
/// the same band layout as [`BandedSymMatrix`].
#[derive(Debug, Clone)]
pub struct BandedCholesky {
    n: usize,
    bandwidth: usize,
    factor: Vec<f64>,
}

impl BandedCholesky {
    pub fn factor(a: &BandedSymMatrix) -> Result<Self> {
        let n = a.n;
        let bw = a.bandwidth;
        let mut l = a.bands.clone();
        for j in 0..n {
            let lo = j.saturating_sub(bw);
            let mut d = l[j];
            for p in lo..j {
                let ljp = l[(j - p) * n + p];
                d -= ljp * ljp;
            }
            if !(d > 0.0) || !d.is_finite() {
                return Err(Error::NotPositiveDefinite { index: j, pivot: d });
            }
            let ljj = d.sqrt();
            l[j] = ljj;
            for i in j + 1..(j + bw + 1).min(n) {
                let mut s = l[(i - j) * n + j];
                for p in i.saturating_sub(bw)..j {
                    s -= l[(i - p) * n + p] * l[(j - p) * n + p];
                }
                l[(i - j) * n + j] = s / ljj;
            }
        }
        Ok(Self {
            n,
            bandwidth: bw,
            factor: l,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    fn at(&self, i: usize, j: usize) -> f64 {
        self.factor[(i - j) * self.n + j]
    }

    pub fn solve(&self, b: &[f64]) -> Result<Vec<f64>> {
        let mut x = b.to_vec();
        self.solve_in_place(&mut x)?;
        Ok(x)
    }

    pub fn solve_in_place(&self, x: &mut [f64]) -> Result<()> {
        check_len(self.n, x.len())?;
        let n = self.n;
        let bw = self.bandwidth;
        // L z = b
        for i in 0..n {
            let mut s = x[i];
            for p in i.saturating_sub(bw)..i {
                s -= self.at(i, p) * x[p];
            }
            x[i] = s / self.at(i, i);
        }
        // Lᵀ x = z
        for i in (0..n).rev() {
            let mut s = x[i];
            for k in i + 1..(i + bw + 1).min(n) {
                s -= self.at(k, i) * x[k];
            }
            x[i] = s / self.at(i, i);
        }
        Ok(())
    }

    /// Entries of `A⁻¹` inside the band, by the Takahashi recurrence on the
    /// factor. Costs `O(n · bandwidth²)`; the full inverse is never formed.
    pub fn inverse_band(&self) -> BandedSymMatrix {
        let n = self.n;
        let bw = self.bandwidth;
        let mut z = vec![0.0; (bw + 1) * n];
        let zget = |z: &[f64], i: usize, j: usize| {
            let (r, c) = if i >= j { (i, j) } else { (j, i) };
            z[(r - c) * n + c]
        };
        for i in (0..n).rev() {
            let lii = self.at(i, i);
            let hi = (i + bw + 1).min(n);
            for j in (i + 1..hi).rev() {
                let mut s = 0.0;
                for k in i + 1..hi {
                    s -= self.at(k, i) / lii * zget(&z, k, j);
                }
                z[(j - i) * n + i] = s;
            }
            let mut s = 1.0 / (lii * lii);
            for k in i + 1..hi {
                s -= self.at(k, i) / lii * zget(&z, k, i);
            }
            z[i] = s;
        }
        BandedSymMatrix {
            n,
            bandwidth: bw,
            bands: z,
        }
    }
}

/// Maximum number of refinement sweeps in [`BandedCholesky::solve_refined`].
pub const REFINEMENT_STEPS: usize = 2;

impl BandedSymMatrix {
    /// `b - A x` with every row accumulated in compensated (Dot2) arithmetic.
    pub fn residual(&self, x: &[f64], b: &[f64]) -> Result<Vec<f64>> {
        check_len(self.n, x.len())?;
        check_len(self.n, b.len())?;
        let n = self.n;
        let bw = self.bandwidth;
        Ok((0..n)
            .map(|i| {
                let mut sum = b[i];
                let mut comp = 0.0;
                for j in i.saturating_sub(bw)..(i + bw + 1).min(n) {
                    let a = self.get(i, j);
                    let prod = a * x[j];
                    let prod_err = a.mul_add(x[j], -prod);
                    let (s, e) = two_sum(sum, -prod);
                    sum = s;
                    comp += e - prod_err;
                }
                sum + comp
            })
            .collect())
    }
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

impl BandedCholesky {
    /// Solve followed by up to [`REFINEMENT_STEPS`] sweeps of iterative
    /// refinement against `a`, the matrix this factor came from. The
    /// compensated residual keeps the forward error near machine precision
    /// even for the large-λ systems where `cond(a)·ε` is not small.
    pub fn solve_refined(&self, a: &BandedSymMatrix, b: &[f64]) -> Result<Vec<f64>> {
        check_len(self.n, a.n)?;
        self.solve_refined_by(b, |x| a.residual(x, b))
    }

    /// Iterative refinement with a caller-supplied residual `x ↦ b - A x`.
    pub fn solve_refined_by<F>(&self, b: &[f64], mut residual: F) -> Result<Vec<f64>>
    where
        F: FnMut(&[f64]) -> Result<Vec<f64>>,
    {
        let mut x = self.solve(b)?;
        for _ in 0..REFINEMENT_STEPS {
            let mut r = residual(&x)?;
            if r.iter().all(|v| *v == 0.0) {
                break;
            }
            self.solve_in_place(&mut r)?;
            let scale = x.iter().fold(0.0f64, |m, v| m.max(v.abs()));
            let step = r.iter().fold(0.0f64, |m, v| m.max(v.abs()));
            for (xi, di) in x.iter_mut().zip(&r) {
                *xi += di;
            }
            if step <= f64::EPSILON * scale {
                break;
            }
        }
        Ok(x)
    }
}

/// Unevaluated sum `hi + lo` used for compensated accumulation.
#[derive(Clone, Copy, Default)]
struct Compensated {
    hi: f64,
    lo: f64,
}

impl Compensated {
    fn add(&mut self, v: f64) {
        let (s, e) = two_sum(self.hi, v);
        self.hi = s;
        self.lo += e;
    }

    /// Adds the exact product `a·b`.
    fn add_product(&mut self, a: f64, b: f64) {
        let p = a * b;
        self.add(p);
        self.lo += a.mul_add(b, -p);
    }

    fn add_scaled(&mut self, c: f64, v: Compensated) {
        self.add_product(c, v.hi);
        self.lo += c * v.lo;
    }

    fn value(self) -> f64 {
        self.hi + self.lo
    }
}

/// `b - (diag(w) + λ DᵀD) x` evaluated from the difference stencil itself in
/// compensated arithmetic, so that the result does not inherit the rounding
/// of the assembled entries `λ·(DᵀD)ᵢⱼ`.
pub fn penalty_residual(
    order: usize,
    lambda: f64,
    weights: &[f64],
    x: &[f64],
    b: &[f64],
) -> Result<Vec<f64>> {
    let n = x.len();
    check_len(n, weights.len())?;
    check_len(n, b.len())?;
    let op = DifferenceOperator::new(order, n)?;
    let stencil = op.stencil();
    let dx: Vec<Compensated> = (0..op.rows())
        .map(|r| {
            let mut acc = Compensated::default();
            for (k, &c) in stencil.iter().enumerate() {
                acc.add_product(c, x[r + k]);
            }
            acc
        })
        .collect();
    Ok((0..n)
        .map(|i| {
            let mut dtdx = Compensated::default();
            let first = i.saturating_sub(order);
            let last = i.min(op.rows().saturating_sub(1));
            if op.rows() > 0 {
                for r in first..=last {
                    dtdx.add_scaled(stencil[i - r], dx[r]);
                }
            }
            let mut acc = Compensated { hi: b[i], lo: 0.0 };
            acc.add_product(-weights[i], x[i]);
            acc.add_scaled(-lambda, dtdx);
            acc.value()
        })
        .collect())
}

/// Solves `a · x = b` for symmetric positive definite banded `a`.
pub fn banded_cholesky_solve(a: &BandedSymMatrix, b: &[f64]) -> Result<Vec<f64>> {
    check_len(a.n, b.len())?;
    a.cholesky()?.solve_refined(a, b)
}

/// Builds `diag(weights) + lambda · DᵀD` for the order-`order` difference
/// operator on `n` points.
pub fn banded_from_penalty(
    n: usize,
    order: usize,
    lambda: f64,
    weights: &[f64],
) -> Result<BandedSymMatrix> {
    let op = DifferenceOperator::new(order, n)?;
    check_len(n, weights.len())?;
    if !(lambda >= 0.0) || !lambda.is_finite() {
        return Err(Error::InvalidLambda(lambda));
    }
    if let Some(i) = weights.iter().position(|w| !(0.0..=1.0).contains(w)) {
        return Err(Error::InvalidSignal(format!(
            "weight {} at index {i} is outside [0, 1]",
            weights[i]
        )));
    }
    let mut m = BandedSymMatrix::from_diagonal(weights, order)?;
    if lambda == 0.0 {
        return Ok(m);
    }
    // DᵀD has small integer entries, so accumulating it first is exact and
    // each stored entry sees a single rounding: w + λ·(DᵀD)ᵢⱼ.
    let mut gram = vec![0.0; (order + 1) * n];
    let stencil = op.stencil();
    for r in 0..op.rows() {
        for a in 0..=order {
            for b in 0..=a {
                gram[(a - b) * n + r + b] += stencil[a] * stencil[b];
            }
        }
    }
    for (entry, g) in m.bands.iter_mut().zip(&gram) {
        *entry += lambda * g;
    }
    Ok(m)
}

fn check_len(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}
