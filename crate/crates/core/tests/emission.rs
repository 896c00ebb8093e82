use biortho::emission::*;
use biortho::photon::photon_dual_norm;
use biortho::{Epsilon, Error, Helicity, SphericalQuadrature};
use num_complex::Complex64 as C;
use std::sync::Arc;

fn z_dipole() -> [C; 3] {
    [C::new(0.0, 0.0), C::new(0.0, 0.0), C::new(1.0, 0.0)]
}

fn model(dipole: [C; 3], t_max: f64) -> EmissionModel<f64> {
    EmissionModel::with_window(1.0, dipole, 1.0, 0.5, t_max, 8, 8).unwrap()
}

#[test]
fn resonance_factor_branches_agree() {
    for t in [1.0, 30.0, 100.0] {
        let delta = SERIES_THRESHOLD / t;
        let below = resonance_factor(delta * (1.0 - 1e-9), t);
        let direct = resonance_factor_direct(delta, t);
        assert!((below - direct).norm() < 1e-12 * direct.norm());
    }
    assert_eq!(resonance_factor(0.3, 0.0), C::new(0.0, 0.0));
    assert_eq!(resonance_factor(0.0, 4.0), C::new(0.0, -4.0));
}

#[test]
fn amplitude_modulus_identity() {
    let m = model(z_dipole(), 50.0);
    let k = [0.4, 0.5, 0.6];
    let kk = (0.77f64).sqrt();
    for t in [0.0, 3.0, 40.0] {
        for h in Helicity::BOTH {
            let c = m.amplitude(h, &k, t).unwrap();
            let d = kk - 1.0;
            let expect = m.coupling(h, &k).unwrap().norm_sqr() * 4.0 * (d * t / 2.0).sin().powi(2) / (d * d);
            assert!((c.norm_sqr() - expect).abs() <= 1e-12 * expect.max(1e-300));
        }
    }
    assert!(matches!(m.amplitude(Helicity::Plus, &k, -1.0), Err(Error::NegativeTime(_))));
}

#[test]
fn initial_state_is_empty() {
    let m = model(z_dipole(), 10.0);
    let s = m.emitted_state(0.0).unwrap();
    assert!(s.c.iter().flatten().all(|f| f.samples.iter().all(|v| v.norm() == 0.0)));
    assert_eq!(m.photon_number(0.0).unwrap(), 0.0);
    let later = m.emitted_state(5.0).unwrap();
    for h in Helicity::BOTH {
        assert!(later.component(Epsilon::Minus, h).samples.iter().all(|v| v.norm() == 0.0));
    }
}

#[test]
fn helicity_populations_equal_for_linear_dipole() {
    let m = model([C::new(1.0, 0.0), C::new(0.0, 0.0), C::new(0.0, 0.0)], 20.0);
    let s = m.emitted_state(20.0).unwrap();
    let w = s.support().dual_weights();
    let pop = |h| s.component(Epsilon::Plus, h).samples.iter().zip(&w).map(|(v, w)| v.norm_sqr() * w).sum::<f64>();
    let (p, q) = (pop(Helicity::Plus), pop(Helicity::Minus));
    assert!((p - q).abs() < 1e-10 * p);
}

#[test]
fn photon_number_grows_and_ignores_dipole_phase() {
    let m = model(z_dipole(), 20.0);
    let mut prev = 0.0;
    for i in 1..=10 {
        let n = m.photon_number(2.0 * i as f64).unwrap();
        assert!(n >= prev);
        prev = n;
    }
    let rotated = model(z_dipole().map(|v| v * C::from_polar(1.0, 0.9)), 20.0);
    let (a, b) = (m.photon_number(13.0).unwrap(), rotated.photon_number(13.0).unwrap());
    assert!((a - b).abs() < 1e-13 * a);
    assert!((photon_dual_norm(&m.emitted_state(13.0).unwrap()) - a).abs() < 1e-14 * a);
}

#[test]
fn detection_density_scale_and_rotation() {
    let t = 20.0;
    let dip = [C::new(0.6, 0.0), C::new(0.0, 0.0), C::new(0.8, 0.0)];
    let m = model(dip, t);
    let pts = [[3.0, 1.0, -2.0], [0.0, 10.0, 4.0], [-7.0, 0.5, 12.0]];
    let p = m.detection_probability(t, &pts).unwrap();
    assert!(p.iter().all(|&v| v >= 0.0));
    let louder = EmissionModel::with_window(1.0, dip, 7.0, 0.5, t, 8, 8).unwrap();
    let q = louder.detection_probability(t, &pts).unwrap();
    for (a, b) in p.iter().zip(&q) {
        assert!((a - b).abs() < 1e-10 * a);
    }
    // rotate dipole and points by 90° about z
    let rot = |v: [f64; 3]| [-v[1], v[0], v[2]];
    let rd = [-dip[1], dip[0], dip[2]];
    let r = model(rd, t).detection_probability(t, &pts.map(rot)).unwrap();
    for (a, b) in p.iter().zip(&r) {
        assert!((a - b).abs() < 1e-6 * a.max(1e-12), "{a} {b}");
    }
}

#[test]
fn detection_probability_is_normalized() {
    let t = 30.0;
    let m = model(z_dipole(), t);
    let radii: Vec<f64> = (0..=240).map(|i| 0.25 * i as f64).collect();
    let prof = m.radial_density(t, &radii).unwrap();
    let total = prof.integral();
    assert!((total - 1.0).abs() < 0.02, "{total}");
}

#[test]
fn window_must_cover_resonance() {
    let q = Arc::new(SphericalQuadrature::new(1.2, 2.0, 4, 8, 4, 4).unwrap());
    assert!(matches!(EmissionModel::new(1.0, z_dipole(), 1.0, q), Err(Error::WindowMisplaced { .. })));
    let q = Arc::new(SphericalQuadrature::new(0.5, 1.5, 4, 8, 4, 4).unwrap());
    assert!(matches!(EmissionModel::new(1.0, [C::new(0.0, 0.0); 3], 1.0, q), Err(Error::ZeroVector)));
}

#[test]
fn config_round_trip() {
    let text = r#"{"omega0": 2.0, "dipole": [[0,0],[1,0],[0,0.5]], "W": 0.4, "n_theta": 6}"#;
    let cfg: EmissionConfig = serde_json::from_str(text).unwrap();
    assert_eq!(cfg.g0, 1.0);
    assert_eq!(cfg.n_phi, 8);
    let m = EmissionModel::from_config(&cfg, 10.0).unwrap();
    assert_eq!(m.omega0, 2.0);
    let back: EmissionConfig = serde_json::from_str(&serde_json::to_string(&cfg).unwrap()).unwrap();
    assert_eq!(back, cfg);
}
