use crate::error::{Error, Result};

pub const MIN_SIGNAL_LEN: usize = 4;

/// Observed series on (nominally) unit-spaced positions. A weight of zero
/// marks a missing observation; its `y` value is ignored.
#[derive(Debug, Clone, PartialEq)]
pub struct Signal {
    t: Vec<f64>,
    y: Vec<f64>,
    w: Vec<f64>,
}

impl Signal {
    pub fn new(t: Vec<f64>, y: Vec<f64>, w: Vec<f64>) -> Result<Self> {
        let n = y.len();
        if t.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: t.len(),
            });
        }
        if w.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: w.len(),
            });
        }
        if n < MIN_SIGNAL_LEN {
            return Err(Error::SignalTooShort {
                needed: MIN_SIGNAL_LEN,
                found: n,
            });
        }
        if let Some(i) = t.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFiniteInput { index: i });
        }
        if let Some(i) = t.windows(2).position(|p| !(p[1] > p[0])) {
            return Err(Error::InvalidSignal(format!(
                "positions must be strictly increasing (index {})",
                i + 1
            )));
        }
        for (i, (&wi, &yi)) in w.iter().zip(&y).enumerate() {
            if !(0.0..=1.0).contains(&wi) {
                return Err(Error::InvalidSignal(format!(
                    "weight {wi} at index {i} is outside [0, 1]"
                )));
            }
            if wi > 0.0 && !yi.is_finite() {
                return Err(Error::NonFiniteInput { index: i });
            }
        }
        Ok(Self { t, y, w })
    }

    /// Unit weights, positions `0..n`.
    pub fn from_values(y: Vec<f64>) -> Result<Self> {
        let n = y.len();
        Self::new((0..n).map(|i| i as f64).collect(), y, vec![1.0; n])
    }

    pub fn with_weights(y: Vec<f64>, w: Vec<f64>) -> Result<Self> {
        let n = y.len();
        Self::new((0..n).map(|i| i as f64).collect(), y, w)
    }

    pub fn len(&self) -> usize {
        self.y.len()
    }

    pub fn is_empty(&self) -> bool {
        self.y.is_empty()
    }

    pub fn t(&self) -> &[f64] {
        &self.t
    }

    pub fn y(&self) -> &[f64] {
        &self.y
    }

    pub fn w(&self) -> &[f64] {
        &self.w
    }

    /// Number of observed (positive-weight) samples.
    pub fn observed_count(&self) -> usize {
        self.w.iter().filter(|&&w| w > 0.0).count()
    }

    pub fn has_gaps(&self) -> bool {
        self.w.contains(&0.0)
    }

    /// `w ⊙ y`, with zero at missing positions regardless of `y`.
    pub fn weighted_values(&self) -> Vec<f64> {
        self.y
            .iter()
            .zip(&self.w)
            .map(|(&y, &w)| if w > 0.0 { w * y } else { 0.0 })
            .collect()
    }

    /// Same signal with every value multiplied by `c`.
    pub fn scaled(&self, c: f64) -> Self {
        Self {
            t: self.t.clone(),
            y: self.y.iter().map(|v| v * c).collect(),
            w: self.w.clone(),
        }
    }

    /// Same positions and weights, new values.
    pub fn with_values(&self, y: Vec<f64>) -> Result<Self> {
        Self::new(self.t.clone(), y, self.w.clone())
    }

    /// True when consecutive positions differ by the mean step to within
    /// `rel_tol` of that step.
    pub fn is_uniformly_spaced(&self, rel_tol: f64) -> bool {
        let n = self.t.len();
        let step = (self.t[n - 1] - self.t[0]) / (n - 1) as f64;
        self.t
            .windows(2)
            .all(|p| ((p[1] - p[0]) - step).abs() <= rel_tol * step.abs())
    }
}
