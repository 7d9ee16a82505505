//! Property suites over random states: closed forms against general-state
//! routes, the Tsirelson bound, and the region classifier's geometry.

mod common;

use common::{random_state, sample_triangle, symmetric_corr};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::SQRT_2;
use xxz_bell::{
    bell_measure_horodecki, bell_measure_symmetric, chsh_value, classify_region,
    concurrence_general, concurrence_symmetric, maximize_chsh_seeded, symmetric_state,
    MeasurementSettings, PairState, RegionLabel,
};

fn triangle_point() -> impl Strategy<Value = (f64, f64)> {
    (-1.0..1.0f64, -1.0..1.0f64)
        .prop_filter("physical triangle", |(txx, tzz)| {
            1.0 - tzz >= 2.0 * txx.abs() && 1.0 + tzz >= 0.0
        })
}

proptest! {
    #[test]
    fn closed_forms_match_general_routes((txx, tzz) in triangle_point()) {
        let corr = symmetric_corr(txx, tzz);
        let state = symmetric_state(&corr).unwrap();
        let bell_closed = bell_measure_symmetric(&corr);
        let bell_general = bell_measure_horodecki(&state);
        prop_assert!((bell_closed - bell_general).abs() < 1e-12);

        let conc_closed = concurrence_symmetric(&corr);
        let conc_general = concurrence_general(&state).unwrap();
        prop_assert!((conc_closed - conc_general).abs() < 1e-12);
    }

    #[test]
    fn classifier_is_symmetric_in_txx((txx, tzz) in triangle_point()) {
        prop_assert_eq!(classify_region(txx, tzz), classify_region(-txx, tzz));
    }

    #[test]
    fn symmetric_states_are_positive((txx, tzz) in triangle_point()) {
        let state = symmetric_state(&symmetric_corr(txx, tzz)).unwrap();
        prop_assert!(state.min_eigenvalue() >= -1e-10);
        prop_assert!(state.validate().is_ok());
    }

    #[test]
    fn concurrence_positive_exactly_in_entangled_regions((txx, tzz) in triangle_point()) {
        // Skip the measure-zero separability boundary itself.
        prop_assume!((2.0 * txx.abs() - (1.0 + tzz)).abs() > 1e-12);
        let label = classify_region(txx, tzz);
        let entangled = concurrence_symmetric(&symmetric_corr(txx, tzz)) > 0.0;
        let labeled_entangled =
            label == RegionLabel::EntangledLocal || label == RegionLabel::Nonlocal;
        prop_assert_eq!(entangled, labeled_entangled);
    }
}

#[test]
fn tsirelson_bound_on_random_states() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xB0);
    for _ in 0..2000 {
        let state = random_state(&mut rng);
        let bell = bell_measure_horodecki(&state);
        assert!(bell <= 2.0 * SQRT_2 + 1e-12, "bell {bell}");
    }
}

#[test]
fn chsh_value_never_exceeds_the_closed_form() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xB1);
    let unit = |rng: &mut ChaCha8Rng| loop {
        let v = nalgebra::Vector3::new(
            rng.gen::<f64>() * 2.0 - 1.0,
            rng.gen::<f64>() * 2.0 - 1.0,
            rng.gen::<f64>() * 2.0 - 1.0,
        );
        if v.norm() > 1e-3 {
            return v / v.norm();
        }
    };
    for _ in 0..500 {
        let state = random_state(&mut rng);
        let bound = bell_measure_horodecki(&state);
        let settings = MeasurementSettings::new(
            unit(&mut rng),
            unit(&mut rng),
            unit(&mut rng),
            unit(&mut rng),
        )
        .unwrap();
        let value = chsh_value(&state, &settings);
        assert!(value <= bound + 1e-12, "{value} > {bound}");
    }
}

#[test]
fn every_optimizer_restart_respects_the_upper_bound() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xB2);
    for trial in 0..50 {
        let state = random_state(&mut rng);
        let bound = bell_measure_horodecki(&state);
        for seed in 0..3 {
            let (value, _) = maximize_chsh_seeded(&state, 1, seed).unwrap();
            assert!(
                value <= bound + 1e-9,
                "trial {trial} seed {seed}: {value} > {bound}"
            );
        }
    }
}

#[test]
fn chsh_is_independent_of_local_terms() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xB3);
    let settings = MeasurementSettings::new(
        nalgebra::Vector3::z(),
        nalgebra::Vector3::x(),
        nalgebra::Vector3::y(),
        nalgebra::Vector3::z(),
    )
    .unwrap();
    for _ in 0..200 {
        let base = random_state(&mut rng);
        let shifted = PairState::new(
            nalgebra::Vector3::new(rng.gen::<f64>() - 0.5, 0.0, rng.gen::<f64>() - 0.5).scale(0.4),
            nalgebra::Vector3::new(0.0, rng.gen::<f64>() - 0.5, 0.0).scale(0.4),
            base.corr,
        );
        assert_eq!(
            chsh_value(&base, &settings),
            chsh_value(&shifted, &settings)
        );
        assert_eq!(
            bell_measure_horodecki(&base),
            bell_measure_horodecki(&shifted)
        );
    }
}
