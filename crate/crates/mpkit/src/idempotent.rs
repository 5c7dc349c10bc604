//! Idempotent matrices (`Q^2 = Q`), their canonical block representation
//! `Q = U [[I, A], [0, 0]] U*` with respect to `range(Q) + null(Q*)`, and a
//! seeded random generator with controllable size, rank and skew.

use crate::error::{Error, Result};
use crate::matrix::{
    asymmetry, block2x2, cr, ensure_finite, frobenius, identity, unitarity_residual, CMatrix,
};
use crate::random::{gaussian_matrix, random_unitary, rng_from_seed};
use crate::spectral::{op_norm, range_projection};
use crate::svd::Svd;
use crate::tolerance::Tolerances;

/// A validated idempotent: `||Q^2 - Q||_F` passed the tolerance gate and
/// the numerical rank is cached.
#[derive(Debug, Clone)]
pub struct Idempotent {
    q: CMatrix,
    rank: usize,
    idem_residual: f64,
}

impl Idempotent {
    pub fn matrix(&self) -> &CMatrix {
        &self.q
    }

    pub fn into_matrix(self) -> CMatrix {
        self.q
    }

    pub fn dim(&self) -> usize {
        self.q.nrows()
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// `||Q^2 - Q||_F` measured at validation time.
    pub fn idem_residual(&self) -> f64 {
        self.idem_residual
    }

    /// `||Q - Q*||_F`; zero means `Q` is an orthogonal projection.
    pub fn asymmetry(&self) -> f64 {
        asymmetry(&self.q)
    }
}

/// The corner block and basis of the representation
/// `Q = basis * [[I, A], [0, 0]] * basis*`, where the first `rank` basis
/// columns span `range(Q)` and the rest span `null(Q*)`.
#[derive(Debug, Clone)]
pub struct BlockForm {
    a: CMatrix,
    basis: CMatrix,
}

impl BlockForm {
    /// The corner block `A` (`rank x (n - rank)`); its operator norm is the
    /// skew of the idempotent.
    pub fn a(&self) -> &CMatrix {
        &self.a
    }

    pub fn basis(&self) -> &CMatrix {
        &self.basis
    }

    pub fn rank(&self) -> usize {
        self.a.nrows()
    }

    pub fn dim(&self) -> usize {
        self.basis.nrows()
    }

    /// Assembles `basis * [[I, A], [0, 0]] * basis*`.
    pub fn reconstruct(&self) -> CMatrix {
        let r = self.rank();
        let k = self.a.ncols();
        let block = block2x2(
            &identity(r),
            &self.a,
            &CMatrix::zeros(k, r),
            &CMatrix::zeros(k, k),
        )
        .expect("block shapes are consistent by construction");
        &self.basis * block * self.basis.adjoint()
    }
}

/// Validates `||Q^2 - Q||_F <= tol_id * (1 + ||Q||_F^2)` and caches the
/// numerical rank.
///
/// The rank of an idempotent equals its trace, so it is read off the
/// diagonal and rounded. This matches the singular-value count above the
/// pseudoinverse cutoff for every idempotent the residual gate admits
/// (nonzero singular values are at least one) and stays exact even when
/// the matrix is pure rounding noise, as `I - Q` is for a full-rank `Q`
/// conjugated by a unitary.
pub fn validate_idempotent(q: CMatrix, tol: &Tolerances) -> Result<Idempotent> {
    if q.nrows() != q.ncols() {
        return Err(Error::ShapeMismatch(format!(
            "idempotent must be square, got {}x{}",
            q.nrows(),
            q.ncols()
        )));
    }
    ensure_finite(&q)?;
    let n = q.nrows();
    let fq = frobenius(&q);
    let residual = (&q * &q - &q).norm();
    let bound = tol.id_bound(fq * fq);
    if residual > bound {
        return Err(Error::NotIdempotent { residual, bound });
    }
    let trace: f64 = (0..n).map(|i| q[(i, i)].re).sum();
    let rank = trace.round().clamp(0.0, n as f64) as usize;
    Ok(Idempotent {
        q,
        rank,
        idem_residual: residual,
    })
}

/// Builds the idempotent `basis * [[I, A], [0, 0]] * basis*`.
///
/// `basis` defaults to the identity and must be unitary; the result passes
/// [`validate_idempotent`] by construction.
pub fn make_idempotent_block(
    a: CMatrix,
    basis: Option<CMatrix>,
    tol: &Tolerances,
) -> Result<(Idempotent, BlockForm)> {
    let n = a.nrows() + a.ncols();
    let basis = basis.unwrap_or_else(|| identity(n));
    if basis.nrows() != n || basis.ncols() != n {
        return Err(Error::ShapeMismatch(format!(
            "basis must be {n}x{n} for a {}x{} corner block, got {}x{}",
            a.nrows(),
            a.ncols(),
            basis.nrows(),
            basis.ncols()
        )));
    }
    let unit = unitarity_residual(&basis);
    if unit > tol.tol_id * (n as f64).sqrt().max(1.0) {
        return Err(Error::BasisNotUnitary { residual: unit });
    }
    let form = BlockForm { a, basis };
    let idem = validate_idempotent(form.reconstruct(), tol)?;
    Ok((idem, form))
}

/// Recovers a block form from a validated idempotent: an orthonormal basis
/// of `range(Q)` from the SVD, its orthogonal complement (which equals
/// `null(Q*)`), and the corner block read off in that basis.
pub fn extract_block_form(q: &Idempotent, tol: &Tolerances) -> Result<BlockForm> {
    let n = q.dim();
    let r = q.rank();
    let qm = q.matrix();

    let svd = Svd::compute(qm)?;
    let mut basis = CMatrix::zeros(n, n);
    basis.view_mut((0, 0), (n, r)).copy_from(&svd.u.columns(0, r));

    if r < n {
        // complement via the spectral projector I - U_r U_r*
        let u1 = svd.u.columns(0, r);
        let mut comp = identity(n);
        comp -= u1 * u1.adjoint();
        let eig = crate::spectral::hermitian_eigen(&comp, tol)?;
        // eigenvalues ascend: the trailing n - r columns belong to eigenvalue 1
        basis
            .view_mut((0, r), (n, n - r))
            .copy_from(&eig.eigenvectors.columns(r, n - r));
    }

    let u1 = basis.columns(0, r);
    let u2 = basis.columns(r, n - r);
    let a = u1.adjoint() * qm * u2;
    let form = BlockForm {
        a,
        basis: basis.clone(),
    };

    let fq = frobenius(qm);
    let bound = tol.id_bound(fq * fq);
    let residual = (form.reconstruct() - qm).norm();
    if residual > bound {
        return Err(Error::DecompositionFailed { residual, bound });
    }
    Ok(form)
}

/// Draws a random idempotent of size `n`, rank `r` and target skew
/// `||A|| ~ skew`, deterministically per seed.
///
/// The corner block is a complex Gaussian rescaled to operator norm `skew`
/// and the basis is a Haar-like random unitary, so idempotency holds by
/// construction. `skew = 0` produces an orthogonal projection; `r = 0` and
/// `r = n` produce `0` and `I`.
pub fn random_idempotent(n: usize, r: usize, skew: f64, seed: u64) -> (Idempotent, BlockForm) {
    assert!(r <= n, "rank {r} exceeds size {n}");
    assert!(skew >= 0.0, "skew must be nonnegative");
    let tol = Tolerances::default();
    let mut rng = rng_from_seed(seed);
    let mut a = gaussian_matrix(&mut rng, r, n - r);
    if a.nrows() > 0 && a.ncols() > 0 {
        if skew == 0.0 {
            a = CMatrix::zeros(r, n - r);
        } else {
            let norm = op_norm(&a);
            if norm > 0.0 {
                a *= cr(skew / norm);
            }
        }
    }
    let basis = random_unitary(&mut rng, n);
    make_idempotent_block(a, Some(basis), &tol)
        .expect("block construction yields an exact idempotent")
}

/// Point on the straight-line homotopy `Q_t = (1 - t) P_range(Q) + t Q`,
/// which stays idempotent for every `t` in `[0, 1]`.
pub fn homotopy_point(q: &Idempotent, t: f64, tol: &Tolerances) -> Result<Idempotent> {
    assert!((0.0..=1.0).contains(&t), "t = {t} outside [0, 1]");
    let p = range_projection(q.matrix(), tol)?;
    let qt = p * cr(1.0 - t) + q.matrix() * cr(t);
    validate_idempotent(qt, tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::{hermitian_part, mat2};
    use crate::spectral::{spectral_apply, sqrt_psd};
    use approx::assert_abs_diff_eq;

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    #[test]
    fn validates_projections_and_oblique() {
        let p = validate_idempotent(mat2(1.0, 0.0, 0.0, 0.0), &tol()).unwrap();
        assert_eq!(p.rank(), 1);
        assert_eq!(p.idem_residual(), 0.0);

        // Q^2 = Q checked by direct multiplication
        let q = validate_idempotent(mat2(1.0, 5.0, 0.0, 0.0), &tol()).unwrap();
        assert_eq!(q.rank(), 1);
    }

    #[test]
    fn rejects_non_idempotent() {
        // Q^2 = [[1,0],[2,1]] != Q
        let err = validate_idempotent(mat2(1.0, 0.0, 1.0, 1.0), &tol()).unwrap_err();
        assert!(matches!(err, Error::NotIdempotent { .. }));
        // non-square
        assert!(validate_idempotent(CMatrix::zeros(2, 3), &tol()).is_err());
    }

    #[test]
    fn block_construction_examples() {
        // zero 1x1 corner: the orthogonal projection diag(1, 0)
        let (q, _) = make_idempotent_block(CMatrix::zeros(1, 1), None, &tol()).unwrap();
        assert!((q.matrix() - mat2(1.0, 0.0, 0.0, 0.0)).norm() < 1e-15);

        // scalar corner [1]: Q = [[1,1],[0,0]]
        let a = CMatrix::from_row_slice(1, 1, &[cr(1.0)]);
        let (q, form) = make_idempotent_block(a, None, &tol()).unwrap();
        assert!((q.matrix() - mat2(1.0, 1.0, 0.0, 0.0)).norm() < 1e-15);
        assert_eq!(form.rank(), 1);

        // transported by the Hadamard unitary: still a rank-1 idempotent
        let h = mat2(1.0, 1.0, 1.0, -1.0) / cr(2f64.sqrt());
        let a = CMatrix::from_row_slice(1, 1, &[cr(1.0)]);
        let (q, _) = make_idempotent_block(a, Some(h), &tol()).unwrap();
        assert_eq!(q.rank(), 1);
        assert!(q.idem_residual() < 1e-14);
    }

    #[test]
    fn rejects_non_unitary_basis() {
        let a = CMatrix::from_row_slice(1, 1, &[cr(1.0)]);
        let err = make_idempotent_block(a, Some(mat2(1.0, 1.0, 0.0, 1.0)), &tol()).unwrap_err();
        assert!(matches!(err, Error::BasisNotUnitary { .. }));
    }

    #[test]
    fn extract_block_form_examples() {
        // projection: zero corner
        let q = validate_idempotent(mat2(1.0, 0.0, 0.0, 0.0), &tol()).unwrap();
        let form = extract_block_form(&q, &tol()).unwrap();
        assert_eq!(form.a().shape(), (1, 1));
        assert!(form.a().norm() < 1e-14);

        // Q = [[1,1],[0,0]]: corner is [1] up to a unit phase
        let q = validate_idempotent(mat2(1.0, 1.0, 0.0, 0.0), &tol()).unwrap();
        let form = extract_block_form(&q, &tol()).unwrap();
        assert_abs_diff_eq!(form.a()[(0, 0)].norm(), 1.0, epsilon = 1e-12);
        assert!((form.reconstruct() - q.matrix()).norm() < 1e-12);

        // identity: empty corner
        let q = validate_idempotent(identity(3), &tol()).unwrap();
        let form = extract_block_form(&q, &tol()).unwrap();
        assert_eq!(form.a().shape(), (3, 0));
    }

    #[test]
    fn random_idempotent_degenerate_and_skewed() {
        // skew 0: orthogonal projection
        let (q, _) = random_idempotent(6, 3, 0.0, 21);
        assert!(q.asymmetry() < 1e-13);
        assert_eq!(q.rank(), 3);

        // r = 0 and r = n
        let (q, form) = random_idempotent(4, 0, 1.0, 22);
        assert!(q.matrix().norm() == 0.0);
        assert_eq!(form.a().shape(), (0, 4));
        let (q, form) = random_idempotent(4, 4, 1.0, 23);
        assert!((q.matrix() - identity(4)).norm() < 1e-13);
        assert_eq!(form.a().shape(), (4, 0));

        // skewed: ||Q|| >= skew and ||Q||^2 = 1 + ||A||^2
        let (q, form) = random_idempotent(8, 3, 10.0, 24);
        let opq = op_norm(q.matrix());
        assert!(opq >= 10.0);
        assert_abs_diff_eq!(op_norm(form.a()), 10.0, epsilon = 1e-12);
        assert_abs_diff_eq!(opq * opq, 1.0 + 100.0, epsilon = 1e-9);
    }

    #[test]
    fn random_idempotent_is_deterministic() {
        let (q1, _) = random_idempotent(5, 2, 3.0, 77);
        let (q2, _) = random_idempotent(5, 2, 3.0, 77);
        assert_eq!(q1.matrix(), q2.matrix());
        let (q3, _) = random_idempotent(5, 2, 3.0, 78);
        assert_ne!(q1.matrix(), q3.matrix());
    }

    #[test]
    fn rank_complement_sums_to_dimension() {
        for seed in 0..8u64 {
            let n = 6;
            let r = (seed as usize) % (n + 1);
            let (q, _) = random_idempotent(n, r, 2.0, 100 + seed);
            let iq = validate_idempotent(identity(n) - q.matrix(), &tol()).unwrap();
            assert_eq!(q.rank() + iq.rank(), n, "seed {seed}");
        }
    }

    #[test]
    fn block_round_trip_recovers_corner() {
        for seed in 0..6u64 {
            let (q, form) = random_idempotent(7, 3, 1.5, 200 + seed);
            let recovered = extract_block_form(&q, &tol()).unwrap();
            assert!((recovered.reconstruct() - q.matrix()).norm() < 1e-10);
            // corner is unique up to left/right unitary phases: compare
            // singular values
            let s1 = Svd::compute(form.a()).unwrap().sigma;
            let s2 = Svd::compute(recovered.a()).unwrap().sigma;
            for (a, b) in s1.iter().zip(s2.iter()) {
                assert_abs_diff_eq!(a, b, epsilon = 1e-10);
            }
        }
    }

    #[test]
    fn intertwining_identities() {
        // A* f(I + A A*) = f(I + A* A) A* for continuous f on the spectrum
        let mut rng = rng_from_seed(31);
        let a = gaussian_matrix(&mut rng, 3, 5);
        let left = identity(3) + &a * a.adjoint();
        let right = identity(5) + a.adjoint() * &a;

        let f_left = sqrt_psd(&hermitian_part(&left), &tol()).unwrap();
        let f_right = sqrt_psd(&hermitian_part(&right), &tol()).unwrap();
        assert!((a.adjoint() * f_left - f_right * a.adjoint()).norm() < 1e-12);

        let g_left = spectral_apply(&hermitian_part(&left), &tol(), |x| x.powf(-0.25)).unwrap();
        let g_right = spectral_apply(&hermitian_part(&right), &tol(), |x| x.powf(-0.25)).unwrap();
        assert!((a.adjoint() * &g_left - &g_right * a.adjoint()).norm() < 1e-12);
        assert!((g_left * &a - &a * g_right).norm() < 1e-12);
    }

    #[test]
    fn homotopy_examples() {
        let q = validate_idempotent(mat2(1.0, 1.0, 0.0, 0.0), &tol()).unwrap();

        // endpoints
        let q1 = homotopy_point(&q, 1.0, &tol()).unwrap();
        assert!((q1.matrix() - q.matrix()).norm() < 1e-14);
        let q0 = homotopy_point(&q, 0.0, &tol()).unwrap();
        let p = range_projection(q.matrix(), &tol()).unwrap();
        assert!((q0.matrix() - p).norm() < 1e-14);

        // midpoint by hand: P = diag(1,0), so Q_half = [[1, 1/2], [0, 0]]
        let qh = homotopy_point(&q, 0.5, &tol()).unwrap();
        assert!((qh.matrix() - mat2(1.0, 0.5, 0.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn homotopy_points_validate_along_grid() {
        let (q, _) = random_idempotent(6, 2, 5.0, 91);
        for k in 0..=16 {
            let t = k as f64 / 16.0;
            let qt = homotopy_point(&q, t, &tol()).unwrap();
            assert!(qt.idem_residual() <= tol().id_bound(frobenius(qt.matrix()).powi(2)));
        }
    }
}
