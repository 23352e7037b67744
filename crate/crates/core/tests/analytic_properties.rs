use num_complex::Complex64 as C64;
use nvce_transfer::analytic::{
    dispersive_coefficients, limit_case, resonant_coefficients, transfer_fidelity, LimitCase,
    TransferMode,
};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn resonant_norm_and_mirror(g in 0.1f64..10.0, j in 0.1f64..10.0, jt in 0.0f64..50.0) {
        let t = jt / j;
        let c = resonant_coefficients(t, g, j).unwrap();
        prop_assert!((c.norm_sqr() - 1.0).abs() <= 1e-10);
        prop_assert!((c.c1() - c.c5() - C64::new(jt.cos(), 0.0)).norm() <= 1e-12);
    }

    #[test]
    fn resonant_qubit_symmetry(g in 0.1f64..10.0, j in 0.1f64..10.0, jt in 0.0f64..50.0) {
        let t = jt / j;
        let c = resonant_coefficients(t, g, j).unwrap();
        let w = (j * j + 2.0 * g * g).sqrt();
        let expected = C64::new(0.0, -(j / w) * (w * t).sin());
        prop_assert!((c.c[1] + c.c[2] - expected).norm() <= 1e-12);
        // the bus amplitude is real and never positive
        prop_assert!(c.c[3].im == 0.0 && c.c[3].re <= 1e-15);
    }

    #[test]
    fn dispersive_norm_and_mirror(lambda in 0.1f64..10.0, j in 0.1f64..10.0, jt in 0.0f64..50.0) {
        let t = jt / j;
        let d = dispersive_coefficients(t, lambda, j).unwrap();
        prop_assert!((d.norm_sqr() - 1.0).abs() <= 1e-10);
        prop_assert!((d.d1() - d.d4() - C64::new(jt.cos(), 0.0)).norm() <= 1e-12);
        let phase = |w: f64| C64::from_polar(1.0, -w * t);
        let expected = (phase(lambda + d.kappa) - phase(lambda - d.kappa)) * (j / (2.0 * d.kappa));
        prop_assert!((d.d[1] + d.d[2] - expected).norm() <= 1e-12);
    }

    #[test]
    fn fidelity_is_bounded(g in 0.1f64..10.0, j in 0.1f64..10.0, jt in 0.0f64..50.0, a2 in 0.0f64..1.0) {
        let (alpha, beta) = (C64::new(a2.sqrt(), 0.0), C64::new((1.0 - a2).sqrt(), 0.0));
        for mode in [TransferMode::Resonant { g, j }, TransferMode::Dispersive { lambda: g, j }] {
            let f = transfer_fidelity(mode, jt / j, alpha, beta).unwrap();
            prop_assert!(f >= a2 - 1e-12 && f <= 1.0 + 1e-10);
        }
    }

    #[test]
    fn strong_inductance_error_bound(ratio in 0.001f64..0.1, jt in 0.0f64..50.0) {
        // J = ratio·g
        let (g, j) = (1.0, ratio);
        let full = resonant_coefficients(jt / j, g, j).unwrap().c5();
        let approx = limit_case(LimitCase::StrongInductance, jt / j, g, j).unwrap().c5;
        prop_assert!((full - approx).norm() <= 3.0 * ratio * ratio);
    }
}

#[test]
fn strong_magnetic_suppresses_transfer() {
    // within one fast period the target barely fills when J ≫ g
    let mut peak: f64 = 0.0;
    for k in 0..=2000 {
        let jt = k as f64 * 0.01;
        peak = peak.max(
            resonant_coefficients(jt, 0.05, 1.0)
                .unwrap()
                .c5()
                .norm_sqr(),
        );
    }
    assert!(peak < 0.01, "peak {peak}");
    let e = limit_case(LimitCase::StrongMagnetic, 3.0, 0.05, 1.0).unwrap();
    assert!(e.in_regime);
}

#[test]
fn strong_magnetic_transfer_is_slow_but_complete() {
    // J = 10g: the first 0.99 crossing is near Jt ≈ 298, far past the other regimes
    let first = |g: f64| {
        (0..200_000)
            .map(|k| k as f64 * 0.01)
            .find(|jt| resonant_coefficients(*jt, g, 1.0).unwrap().c5().norm_sqr() >= 0.99)
    };
    assert!((first(10.0).unwrap() - 3.0221).abs() < 0.02);
    assert!((first(1.0).unwrap() - 47.04).abs() < 0.02);
    let slow = first(0.1).unwrap();
    assert!(
        slow > 200.0 && slow < 1000.0,
        "J = 10g first crossing at {slow}"
    );
}

#[test]
fn dispersive_is_faster_than_resonant() {
    // equilibrium couplings: first time the target exceeds 0.95
    let first = |f: &dyn Fn(f64) -> f64| {
        (0..100_000)
            .map(|k| k as f64 * 0.001)
            .find(|jt| f(*jt) >= 0.95)
    };
    let res = first(&|jt| resonant_coefficients(jt, 1.0, 1.0).unwrap().c5().norm_sqr()).unwrap();
    let disp = first(&|jt| {
        dispersive_coefficients(jt, 1.0, 1.0)
            .unwrap()
            .d4()
            .norm_sqr()
    })
    .unwrap();
    assert!(disp < res, "dispersive {disp} vs resonant {res}");
}
