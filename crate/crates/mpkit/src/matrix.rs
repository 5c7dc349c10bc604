//! Dense complex matrices and the handful of metric helpers the kernels
//! share. `CMatrix` is the universal carrier for every operator in the
//! crate.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Dense column-major complex matrix.
pub type CMatrix = DMatrix<Complex64>;

/// Complex scalar shorthand.
pub type C64 = Complex64;

/// Real number promoted to a complex scalar.
pub fn cr(x: f64) -> C64 {
    C64::new(x, 0.0)
}

/// Identity of the given size.
pub fn identity(n: usize) -> CMatrix {
    CMatrix::identity(n, n)
}

/// Frobenius norm.
pub fn frobenius(m: &CMatrix) -> f64 {
    m.norm()
}

/// Frobenius distance between two matrices of equal shape.
pub fn frobenius_dist(a: &CMatrix, b: &CMatrix) -> f64 {
    (a - b).norm()
}

/// `||T - T*||_F`, zero for Hermitian matrices. Non-square matrices are
/// maximally asymmetric by convention (`f64::INFINITY`).
pub fn asymmetry(m: &CMatrix) -> f64 {
    if m.nrows() != m.ncols() {
        return f64::INFINITY;
    }
    (m - m.adjoint()).norm()
}

/// `(T + T*) / 2`. Caller must pass a square matrix.
pub fn hermitian_part(m: &CMatrix) -> CMatrix {
    (m + m.adjoint()) * cr(0.5)
}

/// Rejects matrices containing NaN or infinite entries.
pub fn ensure_finite(m: &CMatrix) -> Result<()> {
    for col in 0..m.ncols() {
        for row in 0..m.nrows() {
            let v = m[(row, col)];
            if !v.re.is_finite() || !v.im.is_finite() {
                return Err(Error::NonFiniteEntry { row, col });
            }
        }
    }
    Ok(())
}

/// `||U*U - I||_F`, the departure from having orthonormal columns.
pub fn unitarity_residual(u: &CMatrix) -> f64 {
    let gram = u.adjoint() * u;
    (gram - identity(u.ncols())).norm()
}

/// Assembles the 2x2 block matrix `[[tl, tr], [bl, br]]`.
///
/// Block shapes must be conformal; empty blocks (zero rows or columns)
/// are accepted so rank-0 and full-rank idempotents work unchanged.
pub fn block2x2(tl: &CMatrix, tr: &CMatrix, bl: &CMatrix, br: &CMatrix) -> Result<CMatrix> {
    let (r1, c1) = (tl.nrows(), tl.ncols());
    let (r2, c2) = (br.nrows(), br.ncols());
    if tr.nrows() != r1 || tr.ncols() != c2 || bl.nrows() != r2 || bl.ncols() != c1 {
        return Err(Error::ShapeMismatch(format!(
            "block2x2: tl {}x{}, tr {}x{}, bl {}x{}, br {}x{}",
            r1,
            c1,
            tr.nrows(),
            tr.ncols(),
            bl.nrows(),
            bl.ncols(),
            r2,
            c2
        )));
    }
    let mut out = CMatrix::zeros(r1 + r2, c1 + c2);
    out.view_mut((0, 0), (r1, c1)).copy_from(tl);
    out.view_mut((0, c1), (r1, c2)).copy_from(tr);
    out.view_mut((r1, 0), (r2, c1)).copy_from(bl);
    out.view_mut((r1, c1), (r2, c2)).copy_from(br);
    Ok(out)
}

/// Stacks `top` over `bottom` (matching column counts).
pub fn vstack(top: &CMatrix, bottom: &CMatrix) -> Result<CMatrix> {
    if top.ncols() != bottom.ncols() {
        return Err(Error::ShapeMismatch(format!(
            "vstack: {} vs {} columns",
            top.ncols(),
            bottom.ncols()
        )));
    }
    let mut out = CMatrix::zeros(top.nrows() + bottom.nrows(), top.ncols());
    out.view_mut((0, 0), (top.nrows(), top.ncols())).copy_from(top);
    out.view_mut((top.nrows(), 0), (bottom.nrows(), bottom.ncols()))
        .copy_from(bottom);
    Ok(out)
}

/// Builds a matrix from a row-major slice of `(re, im)` pairs.
pub fn from_rows(rows: usize, cols: usize, entries: &[(f64, f64)]) -> Result<CMatrix> {
    if entries.len() != rows * cols {
        return Err(Error::ShapeMismatch(format!(
            "expected {} entries for a {rows}x{cols} matrix, got {}",
            rows * cols,
            entries.len()
        )));
    }
    let m = CMatrix::from_fn(rows, cols, |r, c| {
        let (re, im) = entries[r * cols + c];
        C64::new(re, im)
    });
    ensure_finite(&m)?;
    Ok(m)
}

/// Row-major `(re, im)` pairs, the inverse of [`from_rows`].
pub fn to_rows(m: &CMatrix) -> Vec<(f64, f64)> {
    let mut out = Vec::with_capacity(m.nrows() * m.ncols());
    for r in 0..m.nrows() {
        for c in 0..m.ncols() {
            let v = m[(r, c)];
            out.push((v.re, v.im));
        }
    }
    out
}

/// Real 2x2 matrix shorthand used throughout the tests.
#[cfg(test)]
pub fn mat2(a: f64, b: f64, c: f64, d: f64) -> CMatrix {
    CMatrix::from_row_slice(2, 2, &[cr(a), cr(b), cr(c), cr(d)])
}
