use biortho::emission::{resonance_factor, resonance_factor_direct};
use biortho::io::{read_field_json, write_field_json};
use biortho::kg::{kg_scalar_product, probability_density, KgState};
use biortho::lorentz::{boost_k, Boost};
use biortho::photon::{closed_form_projector, photon_probability_density, transverse_projector};
use biortho::random::{random_kg_state, random_photon_state};
use biortho::spectral::apply_power;
use biortho::{Dispersion, Epsilon, GridSpec, SpectralField};
use num_complex::Complex64 as C;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn kg(seed: u64, mass: f64) -> KgState<f64> {
    let g = GridSpec::new(8, 0.5).unwrap();
    random_kg_state(&mut ChaCha8Rng::seed_from_u64(seed), g, Dispersion::new(mass).unwrap(), 1.0)
}

fn vec3() -> impl Strategy<Value = [f64; 3]> {
    [-10.0..10.0f64, -10.0..10.0f64, -10.0..10.0f64]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn scalar_product_hermitian(a in any::<u64>(), b in any::<u64>(), m in 0.1..3.0f64) {
        let (x, y) = (kg(a, m), kg(b, m));
        prop_assert_eq!(kg_scalar_product(&x, &y).unwrap(), kg_scalar_product(&y, &x).unwrap().conj());
        prop_assert!(kg_scalar_product(&x, &x).unwrap().re > 0.0);
    }

    #[test]
    fn densities_nonnegative_and_normalized(seed in any::<u64>(), t in 0.0..50.0f64) {
        let g = GridSpec::new(8, 0.5).unwrap();
        let s = kg(seed, 0.7);
        let p = probability_density(&s, t).unwrap();
        prop_assert!(p.min() >= -1e-12);
        prop_assert!((p.total(&g) - 1.0).abs() < 1e-10);
        let ph = random_photon_state(&mut ChaCha8Rng::seed_from_u64(seed), g, 1.0);
        let q = photon_probability_density(&ph, t).unwrap();
        prop_assert!(q.min() >= -1e-12);
        prop_assert!((q.total(&g) - 1.0).abs() < 1e-10);
    }

    #[test]
    fn density_invariant_under_constants(seed in any::<u64>(), r in 0.01..100.0f64, phase in 0.0..6.3f64) {
        let s = kg(seed, 1.0);
        let p = probability_density(&s, 0.5).unwrap();
        let q = probability_density(&s.scale(C::from_polar(r, phase)), 0.5).unwrap();
        for (a, b) in p.p_plus.iter().zip(&q.p_plus) {
            prop_assert!((a - b).abs() <= 1e-12 * a.max(1e-300));
        }
    }

    #[test]
    fn power_group_law(s1 in -1.0..1.0f64, s2 in -1.0..1.0f64, seed in any::<u64>()) {
        let d = Dispersion::new(0.8).unwrap();
        let f = kg(seed, 0.8).plus;
        let two = apply_power(&d, s1, &apply_power(&d, s2, &f).unwrap()).unwrap();
        let one = apply_power(&d, s1 + s2, &f).unwrap();
        for (a, b) in two.samples.iter().zip(&one.samples) {
            prop_assert!((a - b).norm() <= 1e-13 * b.norm().max(1e-300));
        }
    }

    #[test]
    fn projector_matches_closed_form(k in vec3()) {
        prop_assume!(k[0].abs() + k[1].abs() > 1e-6);
        let p = transverse_projector(&k).unwrap();
        let q = closed_form_projector(&k);
        for i in 0..3 {
            for j in 0..3 {
                prop_assert!((p[i][j] - q[i][j]).norm() < 1e-13);
            }
        }
    }

    #[test]
    fn boost_preserves_mass_shell(k in vec3(), eta in -1.5..1.5f64, axis in vec3(), m in 0.0..10.0f64) {
        let n = (axis[0] * axis[0] + axis[1] * axis[1] + axis[2] * axis[2]).sqrt();
        prop_assume!(n > 1e-3);
        let d = Dispersion::new(m).unwrap();
        let b = Boost::new(eta, axis.map(|v| v / n)).unwrap();
        let (k1, w1) = boost_k(&b, &d, &k, Epsilon::Plus);
        let inv = w1 * w1 - (k1[0] * k1[0] + k1[1] * k1[1] + k1[2] * k1[2]);
        prop_assert!((inv - m * m).abs() <= 1e-12 * (w1 * w1).max(1.0));
        let (k2, _) = boost_k(&b.inverse(), &d, &k1, Epsilon::Plus);
        for a in 0..3 {
            prop_assert!((k2[a] - k[a]).abs() <= 1e-11 * (w1 * w1).max(1.0));
        }
    }

    #[test]
    fn resonance_factor_continuous(t in 0.1..500.0f64, x in 0.5..2.0f64) {
        let delta = x * 1e-6 / t;
        let a = resonance_factor(delta, t);
        let b = resonance_factor_direct(delta, t);
        prop_assert!((a - b).norm() <= 1e-10 * b.norm());
    }

    #[test]
    fn json_round_trip(values in proptest::collection::vec((-1e300..1e300f64, -1e-300..1e-300f64), 64), t in -1e6..1e6f64) {
        let g = GridSpec::new(4, 0.3).unwrap();
        let samples = values.into_iter().map(|(re, im)| C::new(re, im)).collect();
        let f = SpectralField::new(g, samples, Epsilon::Minus).unwrap().with_time(t);
        let mut buf = Vec::new();
        write_field_json(&f, &mut buf).unwrap();
        let back: SpectralField<f64> = read_field_json(buf.as_slice()).unwrap();
        prop_assert_eq!(back, f);
    }
}
