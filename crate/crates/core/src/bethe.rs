//! Thermodynamic-limit ground-state energy per site of the XXZ chain.
//!
//! The energy splits into branches by the anisotropy Δ:
//!
//! - Δ ≤ -1 (ferromagnetic): the aligned product state, `e0 = Δ/4`,
//! - -1 < Δ < 1 (gapless): `e0 = Δ/4 + (sin πν / 2π) ∫ dx (1/sinh x) coth(νx)`
//!   with Δ = cos πν, integrated along the contour Im(x) = 1/2,
//! - Δ = 1 (isotropic): `e0 = 1/4 - ln 2` exactly,
//! - Δ > 1 (antiferromagnetic): the gapless expression continued through
//!   ν = iφ with Δ = cosh πφ, reduced to a real integrand before quadrature.
//!
//! The contour is parametrized as `x = t + i/2`, which passes midway between
//! the poles of `1/sinh x` at `x = 0` and `x = iπ`; the integrand then decays
//! as `e^{-|t|}` and the truncated range `|t| <= T` is integrated adaptively.
//! By the symmetry `f(-t) = conj(f(t))` the integral is real up to roundoff;
//! the imaginary residue is checked against the configured tolerance and
//! discarded.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::{LN_2, PI};

use crate::error::{Error, Result};
use crate::quad::{self, QuadratureConfig};

/// Phase of the XXZ chain at a given anisotropy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Branch {
    /// Δ ≤ -1: ferromagnetic product ground state.
    Ferro,
    /// -1 < Δ < 1: gapless phase.
    Gapless,
    /// Δ = 1: isotropic Heisenberg point.
    Isotropic,
    /// Δ > 1: gapped antiferromagnetic phase.
    Antiferro,
}

/// Anisotropy Δ together with its branch and spectral parameter.
///
/// On `Gapless` the spectral parameter is ν with Δ = cos πν; on `Antiferro`
/// it is φ with Δ = cosh πφ (the ν = iφ continuation). It is absent on the
/// other branches.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AnisotropyPoint {
    delta: f64,
    branch: Branch,
    spectral: Option<f64>,
}

impl AnisotropyPoint {
    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn branch(&self) -> Branch {
        self.branch
    }

    pub fn spectral(&self) -> Option<f64> {
        self.spectral
    }
}

/// Which side of a point a one-sided derivative is taken on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Side {
    Left,
    Right,
}

/// Determine the branch and spectral parameter for a coupling Δ.
pub fn classify(delta: f64) -> Result<AnisotropyPoint> {
    if !delta.is_finite() {
        return Err(Error::NonFinite {
            what: "anisotropy delta",
            value: delta,
        });
    }
    let (branch, spectral) = if delta <= -1.0 {
        (Branch::Ferro, None)
    } else if delta == 1.0 {
        (Branch::Isotropic, None)
    } else if delta < 1.0 {
        let nu = delta.acos() / PI;
        debug_assert!((0.0..1.0).contains(&nu));
        debug_assert!(((PI * nu).cos() - delta).abs() <= 1e-12);
        (Branch::Gapless, Some(nu))
    } else {
        let phi = delta.acosh() / PI;
        debug_assert!(phi > 0.0);
        debug_assert!(((PI * phi).cosh() - delta).abs() <= 1e-12 * delta.abs().max(1.0));
        (Branch::Antiferro, Some(phi))
    };
    Ok(AnisotropyPoint {
        delta,
        branch,
        spectral,
    })
}

/// Integrand of the gapless branch on the contour `x = t + i/2`.
pub fn gapless_integrand(nu: f64, t: f64) -> Complex64 {
    let x = Complex64::new(t, 0.5);
    let nx = nu * x;
    x.sinh().inv() * nx.cosh() / nx.sinh()
}

/// Antiferromagnetic-branch integrand after the ν = iφ substitution,
/// simplified to an explicitly real expression.
///
/// With `x = t + i/2`, `coth(iφx) = -i cot(φx)` and
/// `sin(iπφ) = i sinh(πφ)`, so the product of the prefactor and the
/// integrand is real; the expression below is
/// `Re[(1/sinh(t + i/2)) cot(φ(t + i/2))]`.
pub fn antiferro_integrand(phi: f64, t: f64) -> f64 {
    let (sh, ch) = (t.sinh(), t.cosh());
    let (s_half, c_half) = (0.5_f64.sin(), 0.5_f64.cos());
    let den1 = sh * sh + s_half * s_half;

    let a = phi * t;
    let b = 0.5 * phi;
    let den2 = a.sin().powi(2) + b.sinh().powi(2);
    let cot_re = 0.5 * (2.0 * a).sin();
    let cot_im = 0.5 * (2.0 * b).sinh();

    (sh * c_half * cot_re - ch * s_half * cot_im) / (den1 * den2)
}

/// Contour integral of the gapless branch, returning the real value and the
/// imaginary residue of the quadrature (which must vanish by symmetry).
pub fn gapless_integral(nu: f64, cfg: &QuadratureConfig) -> Result<(f64, f64)> {
    cfg.validate()?;
    let out = quad::integrate(
        |t| gapless_integrand(nu, t),
        -cfg.truncation,
        cfg.truncation,
        cfg.abs_tol,
        cfg.max_subdivisions,
    )?;
    Ok((out.value.re, out.value.im))
}

/// Ground-state energy per site `e0(Δ)` across all branches.
pub fn ground_energy(point: &AnisotropyPoint, cfg: &QuadratureConfig) -> Result<f64> {
    cfg.validate()?;
    match point.branch {
        Branch::Ferro => Ok(point.delta / 4.0),
        Branch::Isotropic => Ok(0.25 - LN_2),
        Branch::Gapless => {
            let nu = point.spectral.expect("gapless point carries nu");
            let (re, im) = gapless_integral(nu, cfg)?;
            if im.abs() > cfg.abs_tol {
                return Err(Error::Accuracy {
                    context: "imaginary residue of the contour quadrature",
                    requested: cfg.abs_tol,
                    achieved: im.abs(),
                });
            }
            Ok(point.delta / 4.0 + (PI * nu).sin() / (2.0 * PI) * re)
        }
        Branch::Antiferro => {
            let phi = point.spectral.expect("antiferro point carries phi");
            let out = quad::integrate(
                |t| Complex64::new(antiferro_integrand(phi, t), 0.0),
                -cfg.truncation,
                cfg.truncation,
                cfg.abs_tol,
                cfg.max_subdivisions,
            )?;
            Ok(point.delta / 4.0 + (PI * phi).sinh() / (2.0 * PI) * out.value.re)
        }
    }
}

/// Convenience wrapper: classify, then evaluate `e0`.
pub fn ground_energy_at(delta: f64, cfg: &QuadratureConfig) -> Result<f64> {
    ground_energy(&classify(delta)?, cfg)
}

const DERIVATIVE_H0: f64 = 1e-4;
const MAX_HALVINGS: usize = 10;

/// Quadrature tolerance used for derivative stencil evaluations. Tighter
/// than the caller's tolerance so that difference-quotient noise stays well
/// below the extrapolant agreement threshold.
fn stencil_cfg(cfg: &QuadratureConfig) -> QuadratureConfig {
    QuadratureConfig {
        abs_tol: (cfg.abs_tol * 1e-3).max(1e-13),
        ..cfg.clone()
    }
}

/// ∂e0/∂Δ by Richardson-extrapolated central differences.
///
/// Within 10 step-widths of a branch boundary the stencil switches to a
/// one-sided form pointing away from the boundary so no evaluation crosses
/// it. Exactly at Δ = ±1 the derivative is side-dependent; use
/// [`ground_energy_derivative_sided`] there.
pub fn ground_energy_derivative(delta: f64, cfg: &QuadratureConfig) -> Result<f64> {
    let point = classify(delta)?;
    if delta == -1.0 || delta == 1.0 {
        return Err(Error::Domain(format!(
            "delta = {delta} is a branch boundary; specify a side"
        )));
    }
    match point.branch {
        Branch::Ferro => Ok(0.25),
        Branch::Isotropic => unreachable!("handled by the boundary check"),
        Branch::Gapless | Branch::Antiferro => {
            let dist = match point.branch {
                Branch::Gapless => (delta - 1.0).abs().min((delta + 1.0).abs()),
                _ => (delta - 1.0).abs(),
            };
            if dist < 10.0 * DERIVATIVE_H0 {
                // One-sided stencil pointing away from the nearest boundary.
                let toward_boundary_right = match point.branch {
                    Branch::Gapless => (delta - 1.0).abs() < (delta + 1.0).abs(),
                    _ => false,
                };
                let side = if toward_boundary_right {
                    Side::Left
                } else {
                    Side::Right
                };
                ground_energy_derivative_sided(delta, side, cfg)
            } else {
                central_richardson(delta, cfg)
            }
        }
    }
}

/// One-sided ∂e0/∂Δ at `delta`, taken from the given side.
///
/// Valid at branch boundaries: the stencil extends strictly into the chosen
/// side, shrinking its step if another boundary lies within reach.
pub fn ground_energy_derivative_sided(
    delta: f64,
    side: Side,
    cfg: &QuadratureConfig,
) -> Result<f64> {
    classify(delta)?;
    let scfg = stencil_cfg(cfg);
    let sign = match side {
        Side::Left => -1.0,
        Side::Right => 1.0,
    };
    let mut h = DERIVATIVE_H0;
    // Shrink so the far end of the widest stencil stays on this side of any
    // other branch boundary.
    for boundary in [-1.0, 1.0] {
        let offset = (boundary - delta) * sign;
        if offset > 0.0 && offset < 2.0 * h {
            h = offset / 2.0;
        }
    }

    let f0 = ground_energy_at(delta, &scfg)?;
    let one_sided = |h: f64| -> Result<f64> {
        let f1 = ground_energy_at(delta + sign * h, &scfg)?;
        let f2 = ground_energy_at(delta + 2.0 * sign * h, &scfg)?;
        Ok((-3.0 * f0 + 4.0 * f1 - f2) / (2.0 * sign * h))
    };
    let threshold = 10.0 * cfg.abs_tol;

    let mut d_prev = one_sided(h)?;
    let mut r_prev: Option<f64> = None;
    for _ in 0..MAX_HALVINGS {
        h *= 0.5;
        let d = one_sided(h)?;
        let r = (4.0 * d - d_prev) / 3.0;
        if let Some(rp) = r_prev {
            if (r - rp).abs() <= threshold {
                return Ok(r);
            }
        }
        r_prev = Some(r);
        d_prev = d;
    }
    Err(Error::Accuracy {
        context: "one-sided derivative extrapolation",
        requested: threshold,
        achieved: r_prev.map_or(f64::INFINITY, |r| (r - d_prev).abs()),
    })
}

fn central_richardson(delta: f64, cfg: &QuadratureConfig) -> Result<f64> {
    let scfg = stencil_cfg(cfg);
    let central = |h: f64| -> Result<f64> {
        let f_plus = ground_energy_at(delta + h, &scfg)?;
        let f_minus = ground_energy_at(delta - h, &scfg)?;
        Ok((f_plus - f_minus) / (2.0 * h))
    };
    let threshold = 10.0 * cfg.abs_tol;

    let mut h = DERIVATIVE_H0;
    let mut d_prev = central(h)?;
    let mut r_prev: Option<f64> = None;
    for _ in 0..MAX_HALVINGS {
        h *= 0.5;
        let d = central(h)?;
        let r = (4.0 * d - d_prev) / 3.0;
        if let Some(rp) = r_prev {
            if (r - rp).abs() <= threshold {
                return Ok(r);
            }
        }
        r_prev = Some(r);
        d_prev = d;
    }
    Err(Error::Accuracy {
        context: "central derivative extrapolation",
        requested: threshold,
        achieved: r_prev.map_or(f64::INFINITY, |r| (r - d_prev).abs()),
    })
}
