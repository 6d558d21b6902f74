//! Brute-force quadrature against the closed-form intensities.

use std::f64::consts::{PI, TAU};

use dloop_core::intensity::{mean_sin_power, IntensityOracle, QuadratureConfig, Spectrum};
use dloop_core::quadrature::integrate_real_line_tan;
use dloop_core::{k0_closed, kg_closed, LoopSettings};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_settings(rng: &mut ChaCha8Rng) -> (LoopSettings, Spectrum) {
    let alpha = |rng: &mut ChaCha8Rng| {
        if rng.gen_bool(0.1) {
            f64::INFINITY
        } else {
            rng.gen_range(0.0..3.0)
        }
    };
    let chi_d = rng.gen_range(0.0..TAU);
    let chi_f = rng.gen_range(0.0..TAU);
    let alpha_d = alpha(rng);
    let alpha_f = alpha(rng);
    let eps = [0.0, 0.01, 0.05][rng.gen_range(0..3)];
    (
        LoopSettings::new(chi_d, chi_f, alpha_d, alpha_f).unwrap(),
        Spectrum::new(eps).unwrap(),
    )
}

#[test]
fn oracle_equivalence_random_settings() {
    let oracle = IntensityOracle::new(&QuadratureConfig::default()).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let (s, spec) = random_settings(&mut rng);
        for (numeric, closed) in [
            (oracle.k0(&s, &spec), k0_closed(&s, &spec)),
            (oracle.kg(&s, &spec), kg_closed(&s, &spec)),
        ] {
            let err = (numeric - closed).abs() / closed.max(1e-300);
            worst = worst.max(err);
            assert!(err < 1e-5, "{s:?} {spec:?}: oracle {numeric} closed {closed}");
        }
    }
    eprintln!("worst relative oracle error: {worst:e}");
}

#[test]
fn y_moments_rebuild_forward_weight() {
    let n = 257;
    let moment = |p: i32| integrate_real_line_tan(n, |y| (1.0 + y * y).powi(-p));
    assert!((moment(2) - PI / 2.0).abs() < 1e-12);
    assert!((moment(3) - 3.0 * PI / 8.0).abs() < 1e-12);
    assert!((moment(4) - 5.0 * PI / 16.0).abs() < 1e-12);
    let mean = |n: u32| {
        let r = mean_sin_power(n).unwrap();
        *r.numer() as f64 / *r.denom() as f64
    };
    // |v0|^4 |vG|^4 = s^4/w^2 - 2 s^6/w^3 + s^8/w^4 with s = sin, w = 1 + y^2
    let rebuilt = mean(2) * moment(2) - 2.0 * mean(3) * moment(3) + mean(4) * moment(4);
    assert!((rebuilt - 79.0 * PI / 2048.0).abs() < 1e-13);
}

#[test]
fn oracle_is_bit_reproducible() {
    let q = QuadratureConfig::default();
    let s = LoopSettings::new(0.3, 4.4, 0.2, 1.0).unwrap();
    let spec = Spectrum::new(0.05).unwrap();
    let a = IntensityOracle::new(&q).unwrap().intensities(&s, &spec);
    let b = IntensityOracle::new(&q).unwrap().intensities(&s, &spec);
    assert_eq!(a, b);
}
