use crate::error::{Error, Result};

pub const MAX_ORDER: usize = 3;

/// Order-`d` forward difference operator on `n` unit-spaced samples, with
/// row stencil `(-1)^(d-k) C(d, k)` for `k = 0..=d`.
#[derive(Debug, Clone, PartialEq)]
pub struct DifferenceOperator {
    order: usize,
    n: usize,
    stencil: Vec<f64>,
}

impl DifferenceOperator {
    pub fn new(order: usize, n: usize) -> Result<Self> {
        validate_order(order)?;
        if n < order + 1 {
            return Err(Error::SignalTooShort {
                needed: order + 1,
                found: n,
            });
        }
        let mut stencil = Vec::with_capacity(order + 1);
        let mut binom = 1.0;
        for k in 0..=order {
            let sign = if (order - k) % 2 == 0 { 1.0 } else { -1.0 };
            stencil.push(sign * binom);
            binom = binom * (order - k) as f64 / (k + 1) as f64;
        }
        Ok(Self { order, n, stencil })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn rows(&self) -> usize {
        self.n - self.order
    }

    pub fn stencil(&self) -> &[f64] {
        &self.stencil
    }

    pub fn apply(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: x.len(),
            });
        }
        Ok(x.windows(self.order + 1)
            .map(|w| w.iter().zip(&self.stencil).map(|(v, c)| v * c).sum())
            .collect())
    }
}

/// `D x` for the order-`order` operator sized to `x`.
pub fn difference_apply(op: &DifferenceOperator, x: &[f64]) -> Result<Vec<f64>> {
    op.apply(x)
}

pub(crate) fn validate_order(order: usize) -> Result<()> {
    if (1..=MAX_ORDER).contains(&order) {
        Ok(())
    } else {
        Err(Error::InvalidOrder(order))
    }
}
