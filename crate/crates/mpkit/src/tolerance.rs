use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Numerical policy shared by every kernel.
///
/// * `tol_eig` — relative bound on the eigendecomposition reconstruction
///   residual `||V L V* - T||_F / ||T||_F`.
/// * `tol_clip` — eigenvalues below `tol_clip * max(lambda)` are clipped to
///   zero before square roots; the same constant bounds how negative a
///   "positive semidefinite" matrix may be.
/// * `tol_pinv` — relative singular-value cutoff for pseudoinversion and
///   numerical rank. `None` selects `max(rows, cols) * eps` per call.
/// * `tol_id` — base residual bound for operator-identity checks. Checks
///   scale it by `1 + ||Q||_F^2` (products of two Q-factors square the
///   rounding growth).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    pub tol_eig: f64,
    pub tol_clip: f64,
    pub tol_pinv: Option<f64>,
    pub tol_id: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            tol_eig: 1e-12,
            tol_clip: 1e-10,
            tol_pinv: None,
            tol_id: 1e-8,
        }
    }
}

impl Tolerances {
    /// Validates positivity and the pseudoinverse-cutoff floor.
    pub fn validate(&self) -> Result<()> {
        fn positive(name: &str, value: f64) -> Result<()> {
            if value.is_finite() && value > 0.0 {
                Ok(())
            } else {
                Err(Error::InvalidTolerance(format!("{name} must be > 0")))
            }
        }
        positive("tol_eig", self.tol_eig)?;
        positive("tol_clip", self.tol_clip)?;
        positive("tol_id", self.tol_id)?;
        if let Some(p) = self.tol_pinv {
            positive("tol_pinv", p)?;
            if p < f64::EPSILON {
                return Err(Error::InvalidTolerance(format!(
                    "tol_pinv = {p:e} is below machine epsilon"
                )));
            }
        }
        Ok(())
    }

    /// Relative singular-value cutoff for a `rows x cols` matrix.
    pub fn pinv_cutoff(&self, rows: usize, cols: usize) -> f64 {
        self.tol_pinv
            .unwrap_or_else(|| rows.max(cols).max(1) as f64 * f64::EPSILON)
    }

    /// Identity-check bound scaled for an operator of squared Frobenius
    /// norm `q_frob_sq`.
    pub fn id_bound(&self, q_frob_sq: f64) -> f64 {
        self.tol_id * (1.0 + q_frob_sq)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_validate() {
        Tolerances::default().validate().unwrap();
    }

    #[test]
    fn default_pinv_cutoff_scales_with_size() {
        let tol = Tolerances::default();
        assert_eq!(tol.pinv_cutoff(64, 64), 64.0 * f64::EPSILON);
        assert_eq!(tol.pinv_cutoff(2, 5), 5.0 * f64::EPSILON);
        // overrides win
        let tol = Tolerances {
            tol_pinv: Some(1e-9),
            ..Tolerances::default()
        };
        assert_eq!(tol.pinv_cutoff(64, 64), 1e-9);
    }

    #[test]
    fn rejects_nonpositive() {
        let bad = Tolerances {
            tol_id: 0.0,
            ..Tolerances::default()
        };
        assert!(bad.validate().is_err());
        let bad = Tolerances {
            tol_pinv: Some(1e-20),
            ..Tolerances::default()
        };
        assert!(bad.validate().is_err());
    }
}
