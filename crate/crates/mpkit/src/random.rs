//! Seeded random draws: complex Gaussian matrices and Haar-like random
//! unitaries. The generator is always an explicit value passed in; nothing
//! reads ambient RNG state.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use rand_distr::StandardNormal;

use crate::matrix::{cr, CMatrix, C64};

/// The crate-wide deterministic RNG.
pub fn rng_from_seed(seed: u64) -> ChaCha12Rng {
    ChaCha12Rng::seed_from_u64(seed)
}

/// Matrix with i.i.d. standard complex Gaussian entries
/// (`N(0, 1/2)` real and imaginary parts).
pub fn gaussian_matrix(rng: &mut impl Rng, rows: usize, cols: usize) -> CMatrix {
    let half = 0.5_f64.sqrt();
    CMatrix::from_fn(rows, cols, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        C64::new(re * half, im * half)
    })
}

/// Haar-like random unitary: QR of a complex Ginibre draw with the phases
/// of the R diagonal absorbed into Q.
pub fn random_unitary(rng: &mut impl Rng, n: usize) -> CMatrix {
    if n == 0 {
        return CMatrix::zeros(0, 0);
    }
    let g = gaussian_matrix(rng, n, n);
    let qr = g.qr();
    let mut q = qr.q();
    let r = qr.r();
    for j in 0..n {
        let d = r[(j, j)];
        let phase = if d.norm() == 0.0 { cr(1.0) } else { d / d.norm() };
        for i in 0..n {
            q[(i, j)] *= phase;
        }
    }
    q
}
