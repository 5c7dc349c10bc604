//! Spectral kernels on dense complex matrices: Hermitian eigendecomposition
//! and the operator functions built on it (absolute value, PSD square root,
//! positive part), plus SVD-backed pseudoinversion, operator norm, numerical
//! rank and range projections.

use crate::eigen::hermitian_eigen_raw;
use crate::error::{Error, Result};
use crate::matrix::{asymmetry, cr, frobenius, hermitian_part, CMatrix};
use crate::svd::Svd;
use crate::tolerance::Tolerances;

/// Eigendecomposition of a Hermitian matrix: real eigenvalues ascending and
/// a unitary matrix whose columns are the eigenvectors.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: CMatrix,
}

impl HermitianEigen {
    /// `V f(L) V*` for a real scalar function applied eigenvalue-wise.
    pub fn apply(&self, f: impl Fn(f64) -> f64) -> CMatrix {
        let n = self.eigenvalues.len();
        let mut scaled = self.eigenvectors.clone();
        for (j, &lambda) in self.eigenvalues.iter().enumerate() {
            let fl = cr(f(lambda));
            for i in 0..n {
                scaled[(i, j)] *= fl;
            }
        }
        &scaled * self.eigenvectors.adjoint()
    }

    /// `V L V*`, the matrix the decomposition represents.
    pub fn reconstruct(&self) -> CMatrix {
        self.apply(|x| x)
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues.first().copied().unwrap_or(0.0)
    }

    pub fn max_eigenvalue(&self) -> f64 {
        self.eigenvalues.last().copied().unwrap_or(0.0)
    }

    /// Largest eigenvalue magnitude (the operator norm of the input).
    pub fn spectral_radius(&self) -> f64 {
        self.min_eigenvalue().abs().max(self.max_eigenvalue().abs())
    }
}

/// Decomposes a Hermitian matrix.
///
/// The input may be Hermitian only up to rounding: asymmetry up to
/// `tol_id * ||T||_F` is symmetrized away, anything larger is
/// [`Error::NotHermitian`]. The reconstruction residual is checked against
/// `tol_eig * ||T||_F` relative to the symmetrized input and a violation
/// reports [`Error::NoConvergence`].
pub fn hermitian_eigen(t: &CMatrix, tol: &Tolerances) -> Result<HermitianEigen> {
    let norm = frobenius(t);
    let asym = asymmetry(t);
    let bound = tol.tol_id * norm;
    if asym > bound {
        return Err(Error::NotHermitian {
            asymmetry: asym,
            bound,
        });
    }
    let sym = hermitian_part(t);
    let (eigenvalues, eigenvectors) = hermitian_eigen_raw(&sym)?;
    let eig = HermitianEigen {
        eigenvalues,
        eigenvectors,
    };
    let residual = (eig.reconstruct() - &sym).norm();
    if residual > tol.tol_eig * frobenius(&sym) {
        return Err(Error::NoConvergence { residual });
    }
    Ok(eig)
}

/// Applies a real scalar function to a Hermitian matrix eigenvalue-wise.
pub fn spectral_apply(t: &CMatrix, tol: &Tolerances, f: impl Fn(f64) -> f64) -> Result<CMatrix> {
    Ok(hermitian_eigen(t, tol)?.apply(f))
}

/// `|T|`, the positive square root of `T*T` (square, `cols x cols`).
///
/// Computed as `V diag(sigma) V*` from the SVD of `T` rather than by
/// eigendecomposing `T*T`: squaring would push the zero-singular-value
/// noise floor up to `sqrt(eps) * sigma_max`, destroying the small end of
/// the spectrum that the operator identities depend on. Singular values
/// below `tol_clip * sigma_max` are clipped to zero, which fixes the
/// numerical rank of the result.
pub fn abs_op(t: &CMatrix, tol: &Tolerances) -> Result<CMatrix> {
    let svd = Svd::compute(t)?;
    let n = t.ncols();
    let thresh = tol.tol_clip * svd.sigma_max();
    let mut out = CMatrix::zeros(n, n);
    for (j, &s) in svd.sigma.iter().enumerate() {
        if s < thresh || s == 0.0 {
            continue;
        }
        let vj = svd.v.column(j);
        for col in 0..n {
            let coeff = vj[col].conj() * cr(s);
            for row in 0..n {
                out[(row, col)] += vj[row] * coeff;
            }
        }
    }
    Ok(out)
}

/// Unique PSD square root of a PSD Hermitian matrix.
///
/// Eigenvalues below `-tol_clip * ||T||` are [`Error::NotPSD`]; eigenvalues
/// below `tol_clip * lambda_max` (including negative rounding noise inside
/// the tolerance band) are clipped to zero before the square root.
pub fn sqrt_psd(t: &CMatrix, tol: &Tolerances) -> Result<CMatrix> {
    let eig = hermitian_eigen(t, tol)?;
    let radius = eig.spectral_radius();
    let floor = tol.tol_clip * radius;
    if eig.min_eigenvalue() < -floor {
        return Err(Error::NotPSD {
            min_eigenvalue: eig.min_eigenvalue(),
            bound: floor,
        });
    }
    let thresh = tol.tol_clip * eig.max_eigenvalue().max(0.0);
    Ok(eig.apply(|l| if l < thresh { 0.0 } else { l.sqrt() }))
}

/// `T_+`, the positive part of a Hermitian matrix: `max(t, 0)` applied
/// eigenvalue-wise. `T = T_+ - (-T)_+`.
pub fn positive_part(t: &CMatrix, tol: &Tolerances) -> Result<CMatrix> {
    spectral_apply(t, tol, |l| l.max(0.0))
}

/// Moore-Penrose pseudoinverse with singular values at or below
/// `pinv_cutoff * sigma_max` treated as zero.
pub fn pinv(t: &CMatrix, tol: &Tolerances) -> Result<CMatrix> {
    let svd = Svd::compute(t)?;
    Ok(svd.pseudoinverse(tol.pinv_cutoff(t.nrows(), t.ncols())))
}

/// Largest singular value. Zero for empty matrices.
pub fn op_norm(t: &CMatrix) -> f64 {
    if t.nrows() == 0 || t.ncols() == 0 {
        return 0.0;
    }
    let scale = t.iter().map(|c| c.norm()).fold(0.0_f64, f64::max);
    if scale == 0.0 {
        return 0.0;
    }
    let scaled = t / cr(scale);
    let gram = hermitian_part(&(scaled.adjoint() * &scaled));
    let (values, _) =
        hermitian_eigen_raw(&gram).expect("QL iteration failed on a Gram matrix");
    let lmax = values.last().copied().unwrap_or(0.0).max(0.0);
    scale * lmax.sqrt()
}

/// Orthogonal projection onto the column space of `T`; Hermitian, idempotent
/// and of rank equal to the numerical rank of `T`.
pub fn range_projection(t: &CMatrix, tol: &Tolerances) -> Result<CMatrix> {
    let m = t.nrows();
    let svd = Svd::compute(t)?;
    let r = svd.rank(tol.pinv_cutoff(t.nrows(), t.ncols()));
    let mut p = CMatrix::zeros(m, m);
    for j in 0..r {
        let uj = svd.u.column(j);
        for col in 0..m {
            let uc = uj[col].conj();
            for row in 0..m {
                p[(row, col)] += uj[row] * uc;
            }
        }
    }
    Ok(p)
}

/// Numerical rank: singular values above `pinv_cutoff * sigma_max`.
pub fn numerical_rank(t: &CMatrix, tol: &Tolerances) -> Result<usize> {
    let svd = Svd::compute(t)?;
    Ok(svd.rank(tol.pinv_cutoff(t.nrows(), t.ncols())))
}
