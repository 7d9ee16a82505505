//! Cross-route consistency: the Bethe-ansatz quantities against the
//! finite-size route, and the analytic structure at the two transitions.

mod common;

use std::f64::consts::PI;
use xxz_bell::{
    ed_correlations, nn_correlations, EdConfig, QuadratureConfig,
};

fn quad() -> QuadratureConfig {
    QuadratureConfig::default()
}

fn ed_cfg() -> EdConfig {
    EdConfig::default()
}

/// The finite-size machinery applied to r = 1 against the exact route.
///
/// The 1/N^2 extrapolation model carries an irreducible model error in the
/// gapped phase (the true corrections decay exponentially with a sizable
/// correlation length at Δ = 2), so the stated 2e-3 agreement is not
/// attainable there: the measured deviations are ~5.8e-3 (txx) and ~9.4e-3
/// (tzz) with ring sizes 8-16. The check is kept at its stated tolerance
/// and fails loudly rather than being loosened.
#[test]
fn ed_consistency_r1_matches_bethe() {
    let mut failures = Vec::new();
    for delta in [0.0, 0.5, 1.0, 2.0] {
        let exact = nn_correlations(delta, &quad()).unwrap();
        let extrap = ed_correlations(delta, 1, &ed_cfg()).unwrap();
        let dx = (exact.txx - extrap.txx).abs();
        let dz = (exact.tzz - extrap.tzz).abs();
        println!(
            "ed-consistency delta={delta}: |dtxx|={dx:.2e} |dtzz|={dz:.2e} (tolerance 2e-3)"
        );
        if dx >= 2e-3 || dz >= 2e-3 {
            failures.push(format!("delta={delta}: dtxx={dx:.2e}, dtzz={dz:.2e}"));
        }
    }
    assert!(
        failures.is_empty(),
        "r=1 finite-size route deviates beyond 2e-3 at: {failures:?}"
    );
}

/// Free-fermion point r = 2: the transverse correlator extrapolates to
/// 4/pi^2 while the longitudinal one vanishes identically. The exact
/// longitudinal value comes from the Wick oracle below.
#[test]
fn free_fermion_second_neighbor() {
    // <sigma^z_0 sigma^z_r> = -4 G(r)^2 at the free-fermion point, with
    // G(r) = -sin(pi r / 2) / (pi r) the half-filled propagator.
    let wick_tzz = |r: f64| {
        let g = -(PI * r / 2.0).sin() / (PI * r);
        -4.0 * g * g
    };
    assert!(wick_tzz(2.0).abs() < 1e-30);

    let c2 = ed_correlations(0.0, 2, &ed_cfg()).unwrap();
    println!(
        "free-fermion r=2: txx={:.6} (target {:.6}), tzz={:.2e} (target 0)",
        c2.txx,
        4.0 / (PI * PI),
        c2.tzz
    );
    assert!((c2.txx - 4.0 / (PI * PI)).abs() < 1e-3, "txx {}", c2.txx);
    assert!((c2.tzz - wick_tzz(2.0)).abs() < 1e-6, "tzz {}", c2.tzz);

    // r = 1 longitudinal against the same oracle.
    let c1 = ed_correlations(0.0, 1, &ed_cfg()).unwrap();
    assert!((c1.tzz - wick_tzz(1.0)).abs() < 1e-3, "tzz(1) {}", c1.tzz);
}

/// Isotropy at Δ = 1 forces txx = tzz for every separation.
#[test]
fn isotropic_far_correlators_are_isotropic() {
    for r in [2usize, 3] {
        let c = ed_correlations(1.0, r, &ed_cfg()).unwrap();
        assert!(
            (c.txx - c.tzz).abs() < 2e-3,
            "r={r}: txx={} tzz={}",
            c.txx,
            c.tzz
        );
    }
}

/// The first-order transition: tzz jumps across Δ = -1 while the left side
/// stays pinned at the aligned value.
#[test]
fn first_order_kink_in_tzz() {
    let left = nn_correlations(-1.0, &quad()).unwrap();
    assert_eq!(left.tzz, 1.0);
    let right = nn_correlations(-1.0 + 1e-3, &quad()).unwrap();
    println!("tzz(-1) = {}, tzz(-1+1e-3) = {:.6}", left.tzz, right.tzz);
    assert!(left.tzz - right.tzz > 0.9, "jump too small: {}", right.tzz);
}

/// The KT point is analytic in e0: one-sided first differences of both
/// correlators match across Δ = 1 within 1e-3.
#[test]
fn correlators_are_smooth_at_the_isotropic_point() {
    let eps = 1e-3;
    let q = quad();
    let minus = nn_correlations(1.0 - eps, &q).unwrap();
    let center = nn_correlations(1.0, &q).unwrap();
    let plus = nn_correlations(1.0 + eps, &q).unwrap();

    let left_xx = (center.txx - minus.txx) / eps;
    let right_xx = (plus.txx - center.txx) / eps;
    let left_zz = (center.tzz - minus.tzz) / eps;
    let right_zz = (plus.tzz - center.tzz) / eps;
    println!(
        "one-sided differences at 1: txx {left_xx:.6}/{right_xx:.6}, tzz {left_zz:.6}/{right_zz:.6}"
    );
    assert!((left_xx - right_xx).abs() < 1e-3);
    assert!((left_zz - right_zz).abs() < 1e-3);
}

/// The Bell measure has a local minimum exactly at the branch switch of
/// its maximization, the KT point.
#[test]
fn bell_measure_dips_at_the_isotropic_point() {
    let q = quad();
    let bell = |delta: f64| {
        let corr = nn_correlations(delta, &q).unwrap();
        xxz_bell::bell_measure_symmetric(&corr)
    };
    let center = bell(1.0);
    for offset in [0.02, 0.05, 0.1] {
        assert!(bell(1.0 - offset) > center, "left offset {offset}");
        assert!(bell(1.0 + offset) > center, "right offset {offset}");
    }
}

/// Near the gapless side of Δ = -1 the finite-size gap to the aligned level
/// closes; the extrapolation is delivered flagged rather than rejected.
#[test]
fn near_boundary_extrapolation_is_flagged() {
    let c = ed_correlations(-0.999, 2, &ed_cfg()).unwrap();
    assert!(c.low_confidence);
    // The state right of the jump is entangled for r = 2.
    assert!(2.0 * c.txx.abs() > 1.0 + c.tzz, "({}, {})", c.txx, c.tzz);

    let far = ed_correlations(0.5, 2, &ed_cfg()).unwrap();
    assert!(!far.low_confidence);
}
