//! Residuals between two tensors and the pass rule used by every check.

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::scalar::{Mode, Scalar};
use crate::tensor::Tensor;

/// Float-mode tolerances. Rational mode ignores them and requires exact zero.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tolerance {
    pub abs: f64,
    pub rel: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Self {
            abs: 1e-12,
            rel: 1e-9,
        }
    }
}

/// `max_abs = |a - b|∞`, `max_rel = max_abs / max(|a|∞, |b|∞)` (0 when both vanish).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Residual {
    pub max_abs: f64,
    pub max_rel: f64,
    /// Whether `a - b` is exactly zero in the working arithmetic.
    pub exact_zero: bool,
}

impl Residual {
    pub fn between<S: Scalar>(a: &Tensor<S>, b: &Tensor<S>) -> Result<Self> {
        Ok(Self::of_difference(
            &a.try_sub(b)?,
            a.max_abs().max(b.max_abs()),
        ))
    }

    /// Residual of a tensor that should vanish, relative to `scale`.
    pub fn of_difference<S: Scalar>(diff: &Tensor<S>, scale: f64) -> Self {
        let max_abs = diff.max_abs();
        let max_rel = if scale > 0.0 {
            max_abs / scale
        } else {
            max_abs
        };
        Self {
            max_abs,
            max_rel,
            exact_zero: diff.is_zero(),
        }
    }

    pub fn zero() -> Self {
        Self {
            max_abs: 0.0,
            max_rel: 0.0,
            exact_zero: true,
        }
    }

    pub fn passes(&self, mode: Mode, tol: &Tolerance) -> bool {
        match mode {
            Mode::Rational => self.exact_zero,
            Mode::Float => self.exact_zero || self.max_abs <= tol.abs || self.max_rel <= tol.rel,
        }
    }

    /// The larger of two residuals, entry by entry.
    pub fn max(self, other: Self) -> Self {
        Self {
            max_abs: self.max_abs.max(other.max_abs),
            max_rel: self.max_rel.max(other.max_rel),
            exact_zero: self.exact_zero && other.exact_zero,
        }
    }
}
