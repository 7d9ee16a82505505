//! Shared helpers for the integration suites: seeded random states and the
//! independent PPT oracle.

use nalgebra::Matrix4;
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use xxz_bell::{CorrelationSet, CorrelationSource, PairState};

/// Uniform sample of the physical triangle of the symmetric parameter
/// plane, by rejection from the enclosing square.
pub fn sample_triangle<R: Rng>(rng: &mut R) -> (f64, f64) {
    loop {
        let txx = rng.gen::<f64>() * 2.0 - 1.0;
        let tzz = rng.gen::<f64>() * 2.0 - 1.0;
        if 1.0 - tzz >= 2.0 * txx.abs() && 1.0 + tzz >= 0.0 {
            return (txx, tzz);
        }
    }
}

pub fn symmetric_corr(txx: f64, tzz: f64) -> CorrelationSet {
    CorrelationSet {
        r: 1,
        txx,
        tzz,
        source: CorrelationSource::Bethe,
        low_confidence: false,
    }
}

/// Random full-rank two-qubit density operator (Ginibre ensemble).
pub fn random_state<R: Rng>(rng: &mut R) -> PairState {
    let mut g = Matrix4::<Complex64>::zeros();
    for i in 0..4 {
        for j in 0..4 {
            g[(i, j)] = Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal));
        }
    }
    let rho = &g * g.adjoint();
    let rho = rho.unscale(rho.trace().re);
    PairState::from_density_matrix(&rho)
}

/// Partial transpose over the second qubit.
pub fn partial_transpose_b(rho: &Matrix4<Complex64>) -> Matrix4<Complex64> {
    let mut out = Matrix4::zeros();
    for a in 0..2 {
        for b in 0..2 {
            for c in 0..2 {
                for d in 0..2 {
                    out[(2 * a + b, 2 * c + d)] = rho[(2 * a + d, 2 * c + b)];
                }
            }
        }
    }
    out
}

/// Smallest eigenvalue of a Hermitian 4x4.
pub fn min_eigenvalue(m: &Matrix4<Complex64>) -> f64 {
    let eig = (*m).symmetric_eigen();
    eig.eigenvalues.iter().copied().fold(f64::INFINITY, f64::min)
}
