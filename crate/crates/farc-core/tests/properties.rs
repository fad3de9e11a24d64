//! Property tests for the model invariants.

use farc_core::dielectric::{DrudeParams, LorenzParams};
use farc_core::measurement::{gamma_from_powers, PowerRecord};
use farc_core::reflection::{
    roughness_factor, smooth_reflection, statfarc_eval, IncidenceGeometry, StatFarcParams,
};
use num_complex::Complex;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

proptest! {
    #[test]
    fn roughness_factor_in_unit_interval(
        sigma in 0.0..1e-4f64,
        theta in 0.0..90.0f64,
        f in 1.0..1000.0f64,
    ) {
        prop_assume!(theta < 90.0);
        let r = roughness_factor(sigma, theta, f);
        prop_assert!(r > 0.0 && r <= 1.0, "r = {r}");
    }

    #[test]
    fn roughness_factor_monotone_in_sigma_and_frequency(
        sigma in 0.0..1e-5f64,
        theta in 0.0..89.0f64,
        f in 1.0..1000.0f64,
        bump in 1e-8..1e-5f64,
    ) {
        prop_assert!(roughness_factor(sigma + bump, theta, f) <= roughness_factor(sigma, theta, f));
        prop_assert!(roughness_factor(sigma, theta, f + 10.0) <= roughness_factor(sigma, theta, f));
    }

    #[test]
    fn gamma_from_powers_scale_invariant(
        p_r in 1e-9..1e3f64,
        p_ref in 1e-9..1e3f64,
        scale in 1e-6..1e6f64,
    ) {
        let base = PowerRecord::new(260.0, 40.0, p_r, p_ref, 0.05, 0.05, 0.10).unwrap();
        let scaled = PowerRecord::new(260.0, 40.0, p_r * scale, p_ref * scale, 0.05, 0.05, 0.10)
            .unwrap();
        let a = gamma_from_powers(&base).gamma_mag();
        let b = gamma_from_powers(&scaled).gamma_mag();
        prop_assert!((a - b).abs() <= 1e-12 * a.max(1e-30), "{a} vs {b}");
    }

    #[test]
    fn gamma_from_powers_monotone_in_received_power(
        p_r in 1e-9..1e3f64,
        p_ref in 1e-9..1e3f64,
        extra in 1e-9..1e3f64,
    ) {
        let lower = PowerRecord::new(260.0, 40.0, p_r, p_ref, 0.05, 0.05, 0.10).unwrap();
        let higher = PowerRecord::new(260.0, 40.0, p_r + extra, p_ref, 0.05, 0.05, 0.10).unwrap();
        prop_assert!(gamma_from_powers(&higher).gamma_mag() > gamma_from_powers(&lower).gamma_mag());
    }

    #[test]
    fn lorenz_imaginary_part_positive(
        omega_p_sq in 1e-3..1e12f64,
        omega_0 in 1e-3..1e6f64,
        gamma in 1e-6..1e6f64,
        omega in 1e-6..1e7f64,
    ) {
        let p = LorenzParams::new(omega_p_sq, omega_0, gamma).unwrap();
        prop_assert!(p.permittivity(omega).im > 0.0);
    }

    #[test]
    fn drude_real_part_below_one(
        omega_p_sq in 1e-3..1e12f64,
        gamma in 1e-6..1e6f64,
        omega in 1e-6..1e7f64,
    ) {
        let p = DrudeParams::new(omega_p_sq, gamma).unwrap();
        prop_assert!(p.permittivity(omega).unwrap().re < 1.0);
    }

    #[test]
    fn statfarc_magnitudes_stay_passive_inside_default_bounds(
        a in -20.0..-10.0f64,
        b in 2.0..8.0f64,
        c in 2.0..6.0f64,
        d in 1e-4..1.0f64,
        theta in 0.0..89.9f64,
        f in 1.0..1000.0f64,
        metallic in proptest::bool::ANY,
    ) {
        let params = if metallic {
            StatFarcParams::metallic(a, b, d).unwrap()
        } else {
            StatFarcParams::non_metallic(a, b, c, d).unwrap()
        };
        let geom = IncidenceGeometry::new(theta, f).unwrap();
        let mag = statfarc_eval(&params, &geom).magnitude();
        prop_assert!((0.0..=1.0).contains(&mag), "|Gamma| = {mag}");
    }
}

/// Branch rule: with the principal square root, the smooth reflection term
/// stays at or below unit magnitude for every passive permittivity
/// (`Re >= 1`, `Im >= 0`). Ten thousand seeded draws.
#[test]
fn smooth_reflection_passive_for_principal_branch() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    for i in 0..10_000 {
        let re = 1.0 + rng.random::<f64>() * 99.0;
        let im = rng.random::<f64>() * 100.0;
        let theta = rng.random::<f64>() * 89.0;
        let gamma = smooth_reflection(Complex::new(re, im), theta);
        let mag = gamma.norm();
        assert!(
            mag <= 1.0 + 1e-12,
            "draw {i}: |Gamma| = {mag} for delta = {re}+{im}j at theta = {theta}"
        );
    }
}
