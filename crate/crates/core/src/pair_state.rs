//! Two-qubit states from Bloch vectors and a correlation tensor, and the
//! region geometry of the symmetric `(t^xx, t^zz)` parameter plane.
//!
//! A general two-qubit density operator is
//! `ρ = (1/4) [I⊗I + a·σ⊗I + I⊗b·σ + Σ_uv T_uv σ_u⊗σ_v]` with real `a`,
//! `b`, `T`; this parametrization is complete. The XXZ-symmetric pair state
//! has `a = b = 0` and `T = diag(txx, txx, tzz)`, whose eigenvalues
//! `(1 + tzz)/4` (twice) and `(1 - tzz ± 2 txx)/4` cut the plane into the
//! physical triangle with vertices (0, 1), (1, -1), (-1, -1).

use nalgebra::{Matrix2, Matrix3, Matrix4, Vector3};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::correlations::{physicality_slack, CorrelationSet};
use crate::error::{Error, Result};

type C = Complex64;

fn c(re: f64, im: f64) -> C {
    C::new(re, im)
}

/// Pauli matrices in the computational basis.
pub(crate) fn pauli(axis: usize) -> Matrix2<C> {
    match axis {
        0 => Matrix2::new(c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)),
        1 => Matrix2::new(c(0.0, 0.0), c(0.0, -1.0), c(0.0, 1.0), c(0.0, 0.0)),
        2 => Matrix2::new(c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(-1.0, 0.0)),
        _ => unreachable!("pauli axis"),
    }
}

/// A two-qubit state given by the local Bloch vectors of the two sites and
/// the 3x3 correlation tensor `T_uv = <sigma_u ⊗ sigma_v>`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairState {
    pub bloch_a: Vector3<f64>,
    pub bloch_b: Vector3<f64>,
    pub corr: Matrix3<f64>,
}

/// Negative-eigenvalue tolerance of a physical density operator.
pub const STATE_EIGENVALUE_TOL: f64 = 1e-10;

impl PairState {
    pub fn new(bloch_a: Vector3<f64>, bloch_b: Vector3<f64>, corr: Matrix3<f64>) -> Self {
        PairState {
            bloch_a,
            bloch_b,
            corr,
        }
    }

    /// State with zero Bloch vectors and `T = diag(txx, txx, tzz)`.
    pub fn symmetric(txx: f64, tzz: f64) -> Self {
        PairState {
            bloch_a: Vector3::zeros(),
            bloch_b: Vector3::zeros(),
            corr: Matrix3::from_diagonal(&Vector3::new(txx, txx, tzz)),
        }
    }

    /// Reconstruct the 4x4 density operator.
    pub fn density_matrix(&self) -> Matrix4<C> {
        let id = Matrix2::identity();
        let mut rho = id.kronecker(&id);
        for u in 0..3 {
            rho += pauli(u).kronecker(&id).scale(self.bloch_a[u]);
            rho += id.kronecker(&pauli(u)).scale(self.bloch_b[u]);
            for v in 0..3 {
                if self.corr[(u, v)] != 0.0 {
                    rho += pauli(u).kronecker(&pauli(v)).scale(self.corr[(u, v)]);
                }
            }
        }
        rho.scale(0.25)
    }

    /// Extract Bloch vectors and correlation tensor from a density operator.
    pub fn from_density_matrix(rho: &Matrix4<C>) -> Self {
        let id = Matrix2::identity();
        let mut bloch_a = Vector3::zeros();
        let mut bloch_b = Vector3::zeros();
        let mut corr = Matrix3::zeros();
        for u in 0..3 {
            bloch_a[u] = (pauli(u).kronecker(&id) * rho).trace().re;
            bloch_b[u] = (id.kronecker(&pauli(u)) * rho).trace().re;
            for v in 0..3 {
                corr[(u, v)] = (pauli(u).kronecker(&pauli(v)) * rho).trace().re;
            }
        }
        PairState {
            bloch_a,
            bloch_b,
            corr,
        }
    }

    /// Smallest eigenvalue of the reconstructed density operator.
    pub fn min_eigenvalue(&self) -> f64 {
        let eig = self.density_matrix().symmetric_eigen();
        eig.eigenvalues.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// Positivity check: the reconstruction has unit trace and is Hermitian
    /// by construction, so only the spectrum needs testing.
    pub fn validate(&self) -> Result<()> {
        let min = self.min_eigenvalue();
        if min < -STATE_EIGENVALUE_TOL {
            return Err(Error::Domain(format!(
                "density operator has eigenvalue {min:.3e} < -{STATE_EIGENVALUE_TOL:.0e}"
            )));
        }
        Ok(())
    }
}

/// Build the XXZ-symmetric pair state from a correlator set, rejecting
/// unphysical input with the violated eigenvalue inequality named.
pub fn symmetric_state(corr: &CorrelationSet) -> Result<PairState> {
    let slack = physicality_slack(corr.source);
    let edge = 1.0 - corr.tzz - 2.0 * corr.txx.abs();
    if edge < -slack {
        return Err(Error::Domain(format!(
            "unphysical correlators: eigenvalue (1 - tzz - 2|txx|)/4 = {:.3e} < 0",
            edge / 4.0
        )));
    }
    let base = 1.0 + corr.tzz;
    if base < -slack {
        return Err(Error::Domain(format!(
            "unphysical correlators: eigenvalue (1 + tzz)/4 = {:.3e} < 0",
            base / 4.0
        )));
    }
    Ok(PairState::symmetric(corr.txx, corr.tzz))
}

/// Classification of a point of the `(txx, tzz)` plane.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum RegionLabel {
    Unphysical,
    Separable,
    /// Entangled but satisfying the CHSH inequality.
    EntangledLocal,
    Nonlocal,
}

impl std::fmt::Display for RegionLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            RegionLabel::Unphysical => "UNPHYSICAL",
            RegionLabel::Separable => "SEPARABLE",
            RegionLabel::EntangledLocal => "ENTANGLED_LOCAL",
            RegionLabel::Nonlocal => "NONLOCAL",
        };
        f.write_str(s)
    }
}

/// Slack that pushes points on the physicality boundary into the physical
/// side.
const PHYSICALITY_SLACK: f64 = 1e-12;

/// Label a point of the symmetric parameter plane.
///
/// Boundary points resolve to the less exotic label: exactly on the
/// separability line is `Separable`, exactly on the CHSH threshold is
/// `EntangledLocal`.
pub fn classify_region(txx: f64, tzz: f64) -> RegionLabel {
    let abs_txx = txx.abs();
    let abs_tzz = tzz.abs();
    if 1.0 - tzz - 2.0 * abs_txx < -PHYSICALITY_SLACK || 1.0 + tzz < -PHYSICALITY_SLACK {
        return RegionLabel::Unphysical;
    }
    let nonlocal = if abs_txx >= abs_tzz {
        abs_txx > std::f64::consts::FRAC_1_SQRT_2
    } else {
        txx * txx + tzz * tzz > 1.0
    };
    if nonlocal {
        return RegionLabel::Nonlocal;
    }
    if 2.0 * abs_txx > 1.0 + tzz {
        return RegionLabel::EntangledLocal;
    }
    RegionLabel::Separable
}

/// A named ordered point list in the `(txx, tzz)` plane.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundaryPolyline {
    pub name: String,
    pub points: Vec<[f64; 2]>,
}

fn segment(a: [f64; 2], b: [f64; 2], resolution: usize) -> Vec<[f64; 2]> {
    (0..resolution)
        .map(|i| {
            let t = i as f64 / (resolution - 1) as f64;
            [a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])]
        })
        .collect()
}

fn polyline(name: &str, vertices: &[[f64; 2]], resolution: usize) -> BoundaryPolyline {
    let mut points = Vec::new();
    for pair in vertices.windows(2) {
        let seg = segment(pair[0], pair[1], resolution);
        let skip = usize::from(!points.is_empty());
        points.extend(seg.into_iter().skip(skip));
    }
    BoundaryPolyline {
        name: name.to_string(),
        points,
    }
}

/// Region boundaries of the parameter plane as ordered point lists:
/// the physicality triangle, the two separability lines `2|txx| = 1 + tzz`,
/// and the CHSH boundary (the verticals `|txx| = 1/sqrt(2)` on their
/// validity domain `|tzz| <= |txx|`, plus the unit-circle arc on
/// `|txx| < |tzz|`).
pub fn region_boundaries(resolution: usize) -> Result<Vec<BoundaryPolyline>> {
    if resolution < 2 {
        return Err(Error::Domain(format!(
            "resolution must be at least 2, got {resolution}"
        )));
    }
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let mut out = vec![
        polyline(
            "physical_triangle",
            &[[0.0, 1.0], [1.0, -1.0], [-1.0, -1.0], [0.0, 1.0]],
            resolution,
        ),
        polyline("separable_boundary_pos", &[[0.0, -1.0], [0.5, 0.0]], resolution),
        polyline("separable_boundary_neg", &[[0.0, -1.0], [-0.5, 0.0]], resolution),
        // Built from two half-segments so (±1/sqrt2, 0) is always a vertex.
        polyline(
            "nonlocal_line_pos",
            &[[s, -s], [s, 0.0], [s, s]],
            resolution,
        ),
        polyline(
            "nonlocal_line_neg",
            &[[-s, -s], [-s, 0.0], [-s, s]],
            resolution,
        ),
    ];
    let arc_points: Vec<[f64; 2]> = (0..2 * resolution - 1)
        .map(|i| {
            let t = i as f64 / (2 * resolution - 2) as f64;
            let theta = -3.0 * std::f64::consts::FRAC_PI_4
                + t * std::f64::consts::FRAC_PI_2;
            [theta.cos(), theta.sin()]
        })
        .collect();
    out.push(BoundaryPolyline {
        name: "nonlocal_circle".to_string(),
        points: arc_points,
    });
    Ok(out)
}
