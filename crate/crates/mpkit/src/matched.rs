//! The matched projection `m(Q)` of an idempotent, computed by five
//! algebraically equal but numerically independent routes:
//!
//! * `original` — `(|Q*| + Q*) |Q*|^+ (|Q*| + I)^-1 (|Q*| + Q) / 2`, the
//!   defining expression;
//! * `qstar` — `(I + |Q*| - |I - Q*|) / 2`;
//! * `q` — `(I + |Q| - |I - Q|) / 2`;
//! * `symmetric` — `(2 + |Q + Q*| - |2 - (Q + Q*)|) / 4`, evaluated as a
//!   single spectral function of the Hermitian matrix `Q + Q*`;
//! * `block` — the closed form in the `[[I, A], [0, 0]]` representation
//!   with `B = (I + A A*)^(1/2)`.
//!
//! `symmetric` is the designated reference output: it touches one Hermitian
//! matrix and one eigendecomposition, the smallest floating-point surface.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::idempotent::{extract_block_form, BlockForm, Idempotent};
use crate::matrix::{block2x2, cr, frobenius, identity, CMatrix};
use crate::spectral::{abs_op, pinv, spectral_apply, sqrt_psd};
use crate::tolerance::Tolerances;

/// The five computation routes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Formula {
    Original,
    SimplifiedQStar,
    SimplifiedQ,
    Symmetric,
    Block,
}

impl Formula {
    pub const ALL: [Formula; 5] = [
        Formula::Original,
        Formula::SimplifiedQStar,
        Formula::SimplifiedQ,
        Formula::Symmetric,
        Formula::Block,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Formula::Original => "original",
            Formula::SimplifiedQStar => "qstar",
            Formula::SimplifiedQ => "q",
            Formula::Symmetric => "symmetric",
            Formula::Block => "block",
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Formula {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "original" => Ok(Formula::Original),
            "qstar" => Ok(Formula::SimplifiedQStar),
            "q" => Ok(Formula::SimplifiedQ),
            "symmetric" => Ok(Formula::Symmetric),
            "block" => Ok(Formula::Block),
            other => Err(format!(
                "unknown formula '{other}' (expected original|qstar|q|symmetric|block)"
            )),
        }
    }
}

/// Output of [`matched`]: the consensus value, all five per-formula values
/// and the cross-formula deviation metrics.
#[derive(Debug, Clone)]
pub struct MatchedResult {
    /// Consensus value from the reference formula (`symmetric`).
    pub m: CMatrix,
    pub per_formula: BTreeMap<Formula, CMatrix>,
    /// Largest Frobenius distance between any two formula outputs.
    pub max_pairwise_dev: f64,
    /// `||m^2 - m||_F + ||m - m*||_F`.
    pub proj_residual: f64,
}

/// The defining formula `(|Q*| + Q*) |Q*|^+ (|Q*| + I)^-1 (|Q*| + Q) / 2`.
///
/// `|Q*|^+` uses the pseudoinverse cutoff; `(|Q*| + I)` has spectrum in
/// `[1, 1 + ||Q*||]` and is inverted by direct solve.
pub fn matched_original(q: &Idempotent, tol: &Tolerances) -> Result<CMatrix> {
    let qm = q.matrix();
    let n = q.dim();
    let qh = qm.adjoint();
    let abs_qh = abs_op(&qh, tol)?;
    let abs_pinv = pinv(&abs_qh, tol)?;
    let shifted = &abs_qh + identity(n);
    let rhs = &abs_qh + qm;
    let solved = solve(&shifted, &rhs)?;
    Ok((&abs_qh + &qh) * abs_pinv * solved * cr(0.5))
}

/// `(I + |Q*| - |I - Q*|) / 2`, two operator absolute values.
pub fn matched_simplified_qstar(q: &Idempotent, tol: &Tolerances) -> Result<CMatrix> {
    let n = q.dim();
    let qh = q.matrix().adjoint();
    let abs_qh = abs_op(&qh, tol)?;
    let abs_iqh = abs_op(&(identity(n) - &qh), tol)?;
    Ok((identity(n) + abs_qh - abs_iqh) * cr(0.5))
}

/// `(I + |Q| - |I - Q|) / 2`.
pub fn matched_simplified_q(q: &Idempotent, tol: &Tolerances) -> Result<CMatrix> {
    let n = q.dim();
    let qm = q.matrix();
    let abs_q = abs_op(qm, tol)?;
    let abs_iq = abs_op(&(identity(n) - qm), tol)?;
    Ok((identity(n) + abs_q - abs_iq) * cr(0.5))
}

/// `(2 + |T| - |2 - T|) / 4` for `T = Q + Q*`, computed as one spectral
/// function. On the spectrum of `T` (gap inside `(0, 2)`), the scalar map
/// is exactly 0 below and 1 above, so this is the spectral projector onto
/// the `[2, inf)` part.
pub fn matched_symmetric(q: &Idempotent, tol: &Tolerances) -> Result<CMatrix> {
    let t = q.matrix() + q.matrix().adjoint();
    spectral_apply(&t, tol, |x| (2.0 + x.abs() - (2.0 - x).abs()) / 4.0)
}

/// The block closed form
/// `[[ (B + I) B^-1, B^-1 A ], [ A* B^-1, A* [B (B + I)]^-1 A ]] / 2`
/// in the stored basis, with `B = (I + A A*)^(1/2)`, conjugated back.
pub fn matched_block(bf: &BlockForm, tol: &Tolerances) -> Result<CMatrix> {
    let a = bf.a();
    let r = bf.rank();
    let b = sqrt_psd(&(identity(r) + a * a.adjoint()), tol)?;
    let b_inv = invert(&b)?;
    let shifted = &b + identity(r);
    let bbi_inv = invert(&(&b * &shifted))?;

    let tl = &shifted * &b_inv;
    let tr = &b_inv * a;
    let bl = a.adjoint() * &b_inv;
    let br = a.adjoint() * bbi_inv * a;
    let block = block2x2(&tl, &tr, &bl, &br)? * cr(0.5);
    Ok(bf.basis() * block * bf.basis().adjoint())
}

/// Runs all five formulas, reports their spread, and returns the reference
/// value. Deviation beyond `tol_id * (1 + ||Q||_F^2)` signals an
/// implementation or conditioning bug, never expected behaviour.
pub fn matched(q: &Idempotent, tol: &Tolerances) -> Result<MatchedResult> {
    let result = matched_raw(q, tol)?;
    let bound = tol.id_bound(frobenius(q.matrix()).powi(2));
    if result.max_pairwise_dev > bound {
        return Err(Error::FormulaDisagreement {
            deviation: result.max_pairwise_dev,
            bound,
        });
    }
    if result.proj_residual > bound {
        return Err(Error::NotProjection {
            residual: result.proj_residual,
        });
    }
    Ok(result)
}

/// As [`matched`] but without the deviation gates; the verifier reads the
/// metrics as data.
pub(crate) fn matched_raw(q: &Idempotent, tol: &Tolerances) -> Result<MatchedResult> {
    let bf = extract_block_form(q, tol)?;
    let mut per_formula = BTreeMap::new();
    per_formula.insert(Formula::Original, matched_original(q, tol)?);
    per_formula.insert(Formula::SimplifiedQStar, matched_simplified_qstar(q, tol)?);
    per_formula.insert(Formula::SimplifiedQ, matched_simplified_q(q, tol)?);
    per_formula.insert(Formula::Symmetric, matched_symmetric(q, tol)?);
    per_formula.insert(Formula::Block, matched_block(&bf, tol)?);

    let values: Vec<&CMatrix> = per_formula.values().collect();
    let mut max_pairwise_dev = 0.0_f64;
    for i in 0..values.len() {
        for j in (i + 1)..values.len() {
            max_pairwise_dev = max_pairwise_dev.max((values[i] - values[j]).norm());
        }
    }

    let m = per_formula[&Formula::Symmetric].clone();
    let proj_residual = (&m * &m - &m).norm() + (&m - m.adjoint()).norm();
    Ok(MatchedResult {
        m,
        per_formula,
        max_pairwise_dev,
        proj_residual,
    })
}

/// The symmetry `S = 2 m - I`: Hermitian with `S^2 = I` whenever `m` is a
/// projection, and `S Q S = Q*`.
pub fn symmetry_operator(m: &CMatrix, tol: &Tolerances) -> Result<CMatrix> {
    let residual = (m * m - m).norm() + (m - m.adjoint()).norm();
    let bound = tol.id_bound(frobenius(m).powi(2));
    if residual > bound {
        return Err(Error::NotProjection { residual });
    }
    Ok(m * cr(2.0) - identity(m.nrows()))
}

fn solve(lhs: &CMatrix, rhs: &CMatrix) -> Result<CMatrix> {
    if lhs.nrows() == 0 {
        return Ok(CMatrix::zeros(0, rhs.ncols()));
    }
    lhs.clone()
        .lu()
        .solve(rhs)
        .ok_or_else(|| Error::ShapeMismatch("singular system in direct solve".into()))
}

fn invert(m: &CMatrix) -> Result<CMatrix> {
    if m.nrows() == 0 {
        return Ok(CMatrix::zeros(0, 0));
    }
    m.clone()
        .lu()
        .try_inverse()
        .ok_or_else(|| Error::ShapeMismatch("matrix is numerically singular".into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::idempotent::{random_idempotent, validate_idempotent};
    use crate::matrix::mat2;
    use approx::assert_abs_diff_eq;

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    fn golden_q() -> Idempotent {
        validate_idempotent(mat2(1.0, 1.0, 0.0, 0.0), &tol()).unwrap()
    }

    /// Hand evaluation of the block closed form for A = [1], B = sqrt(2):
    /// m = [[1/2 + s/4, s/4], [s/4, 1/2 - s/4]] with s = sqrt(2) * ... the
    /// entries reduce to (2 + sqrt 2)/4, sqrt(2)/4 and (2 - sqrt 2)/4.
    fn golden_m() -> CMatrix {
        let s = 2f64.sqrt();
        mat2(
            0.5 + s / 4.0,
            s / 4.0,
            s / 4.0,
            0.5 - s / 4.0,
        )
    }

    #[test]
    fn golden_case_all_formulas() {
        let q = golden_q();
        let expected = golden_m();
        let runners: Vec<(Formula, CMatrix)> = vec![
            (Formula::Original, matched_original(&q, &tol()).unwrap()),
            (
                Formula::SimplifiedQStar,
                matched_simplified_qstar(&q, &tol()).unwrap(),
            ),
            (
                Formula::SimplifiedQ,
                matched_simplified_q(&q, &tol()).unwrap(),
            ),
            (Formula::Symmetric, matched_symmetric(&q, &tol()).unwrap()),
            (
                Formula::Block,
                matched_block(&extract_block_form(&q, &tol()).unwrap(), &tol()).unwrap(),
            ),
        ];
        for (formula, value) in runners {
            assert!(
                (value - &expected).norm() < 1e-12,
                "{formula} deviates from the hand-computed value"
            );
        }

        // six-decimal spot values, trace 1, determinant 0
        assert_abs_diff_eq!(expected[(0, 0)].re, 0.853553, epsilon = 5e-7);
        assert_abs_diff_eq!(expected[(0, 1)].re, 0.353553, epsilon = 5e-7);
        assert_abs_diff_eq!(expected[(1, 1)].re, 0.146447, epsilon = 5e-7);
    }

    #[test]
    fn fixed_points_and_degenerate_inputs() {
        // m(P) = P for projections
        let p = validate_idempotent(mat2(1.0, 0.0, 0.0, 0.0), &tol()).unwrap();
        let r = matched(&p, &tol()).unwrap();
        assert!((&r.m - p.matrix()).norm() < 1e-13);
        assert!(r.max_pairwise_dev < 1e-13);

        // Q = 0 and Q = I
        let z = validate_idempotent(CMatrix::zeros(3, 3), &tol()).unwrap();
        let r = matched(&z, &tol()).unwrap();
        assert_eq!(r.per_formula.len(), 5);
        assert!(r.m.norm() < 1e-14);
        for v in r.per_formula.values() {
            assert!(v.norm() < 1e-14);
        }

        let i = validate_idempotent(identity(3), &tol()).unwrap();
        let r = matched(&i, &tol()).unwrap();
        assert!((&r.m - identity(3)).norm() < 1e-13);
    }

    #[test]
    fn five_way_agreement_on_random_idempotents() {
        for (seed, skew) in [(1u64, 0.0), (2, 0.5), (3, 5.0), (4, 40.0)] {
            let (q, _) = random_idempotent(9, 4, skew, seed);
            let r = matched(&q, &tol()).unwrap();
            let bound = tol().id_bound(frobenius(q.matrix()).powi(2));
            assert!(
                r.max_pairwise_dev <= bound,
                "skew {skew}: dev {} > bound {bound}",
                r.max_pairwise_dev
            );
            assert!(r.proj_residual <= bound);
        }
    }

    #[test]
    fn symmetry_operator_examples() {
        let s = symmetry_operator(&identity(2), &tol()).unwrap();
        assert!((s.clone() - identity(2)).norm() < 1e-15);

        let s = symmetry_operator(&CMatrix::zeros(2, 2), &tol()).unwrap();
        assert!((s + identity(2)).norm() < 1e-15);

        let s = symmetry_operator(&mat2(1.0, 0.0, 0.0, 0.0), &tol()).unwrap();
        assert!((s - mat2(1.0, 0.0, 0.0, -1.0)).norm() < 1e-15);

        // not a projection
        let err = symmetry_operator(&mat2(1.0, 1.0, 0.0, 0.0), &tol()).unwrap_err();
        assert!(matches!(err, Error::NotProjection { .. }));
    }

    #[test]
    fn symmetry_squares_to_identity() {
        let (q, _) = random_idempotent(6, 2, 3.0, 55);
        let m = matched(&q, &tol()).unwrap().m;
        let s = symmetry_operator(&m, &tol()).unwrap();
        assert!((&s - s.adjoint()).norm() < 1e-11);
        assert!((&s * &s - identity(6)).norm() < 1e-11);
    }

    #[test]
    fn formula_parsing() {
        for f in Formula::ALL {
            assert_eq!(f.name().parse::<Formula>().unwrap(), f);
        }
        assert!("nope".parse::<Formula>().is_err());
    }
}
