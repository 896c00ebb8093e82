use approx::assert_relative_eq;
use biortho::spectral::{analyze, apply_power, covariant_weight, omega, synthesize, synthesize_with, SphericalQuadrature};
use biortho::{Dispersion, Epsilon, Error, GridSpec, SpectralField};
use num_complex::Complex64 as C;
use std::f64::consts::PI;

#[test]
fn dispersion_examples() {
    assert_eq!(omega(&Dispersion::massless(), &[3.0, 4.0, 0.0]), 5.0);
    assert_eq!(omega(&Dispersion::new(2.0).unwrap(), &[0.0, 0.0, 0.0]), 2.0);
    assert_eq!(omega(&Dispersion::new(1.0).unwrap(), &[1.0, 1.0, 1.0]), 2.0);
}

#[test]
fn covariant_weight_examples() {
    let g = GridSpec::new(4, 0.1).unwrap();
    let w = covariant_weight(&Dispersion::new(1.0).unwrap(), &g, &[0.0; 3]).unwrap();
    assert_relative_eq!(w, 0.001 / ((2.0 * PI).powi(3) * 2.0), max_relative = 1e-14);
    assert!(matches!(covariant_weight(&Dispersion::massless(), &g, &[0.0; 3]), Err(Error::SingularMode)));
    let d = Dispersion::new(0.3).unwrap();
    for k in g.momenta() {
        let a = covariant_weight(&d, &g, &k).unwrap();
        let b = covariant_weight(&d, &g, &[-k[0], -k[1], -k[2]]).unwrap();
        assert_eq!(a, b);
    }
}

fn test_field(g: GridSpec<f64>, eps: Epsilon) -> SpectralField<f64> {
    SpectralField::from_fn(g, eps, |k| {
        let r2 = k[0] * k[0] + k[1] * k[1] + k[2] * k[2];
        C::from_polar((-r2 / 2.0).exp(), 0.7 * k[0] - 0.2 * k[2])
    })
}

#[test]
fn power_examples_and_group_law() {
    let g = GridSpec::new(8, 0.4).unwrap();
    let f = test_field(g, Epsilon::Plus);
    let d = Dispersion::new(0.5).unwrap();
    assert_eq!(apply_power(&d, 0.0, &f).unwrap(), f);
    let m = Dispersion::massless();
    let mut fm = f.clone();
    fm.enforce_regular(&m);
    let half = apply_power(&m, 0.5, &fm).unwrap();
    for (i, (a, b)) in half.samples.iter().zip(&fm.samples).enumerate() {
        let k = g.k_at(i);
        let kk = (k[0] * k[0] + k[1] * k[1] + k[2] * k[2]).sqrt();
        assert!((a - b * kk).norm() <= 1e-15 * b.norm().max(1.0));
    }
    let two = apply_power(&d, 0.3, &apply_power(&d, -0.8, &f).unwrap()).unwrap();
    let one = apply_power(&d, -0.5, &f).unwrap();
    for (a, b) in two.samples.iter().zip(&one.samples) {
        assert!((a - b).norm() <= 1e-14 * b.norm());
    }
}

#[test]
fn single_sample_is_plane_wave() {
    let g = GridSpec::new(8, 0.5).unwrap();
    let d = Dispersion::new(1.0).unwrap();
    let i0 = g.flat(5, 3, 6);
    let k0 = g.k_at(i0);
    let w0 = d.omega(&k0);
    let t = 1.3;
    for eps in Epsilon::BOTH {
        let e: f64 = eps.sign();
        let mut f = SpectralField::zeros(g, eps);
        f.samples[i0] = C::new((2.0 * PI).powi(3) * 2.0 * w0 / g.cell_k(), 0.0);
        let phi = synthesize(&f, &d, t).unwrap();
        for (i, v) in phi.iter().enumerate() {
            let x = g.x_at(i);
            let expect = C::from_polar(1.0, -e * (w0 * t - (k0[0] * x[0] + k0[1] * x[1] + k0[2] * x[2])));
            assert!((v - expect).norm() < 1e-12);
        }
    }
}

#[test]
fn synthesis_matches_direct_sum_on_16_cubed() {
    let g = GridSpec::new(16, 0.35).unwrap();
    let d = Dispersion::new(0.7).unwrap();
    let f = test_field(g, Epsilon::Minus);
    let t = 0.8;
    let fast = synthesize(&f, &d, t).unwrap();
    let modes: Vec<([f64; 3], C)> = (0..g.len())
        .map(|i| {
            let k = g.k_at(i);
            let w = d.omega(&k);
            (k, f.samples[i] * g.cell_k() / ((2.0 * PI).powi(3) * 2.0 * w) * C::from_polar(1.0, w * t))
        })
        .collect();
    let mut worst = 0.0f64;
    let scale = fast.iter().fold(0.0f64, |m, v| m.max(v.norm()));
    for (j, v) in fast.iter().enumerate().step_by(7) {
        let x = g.x_at(j);
        let direct: C = modes.iter().map(|(k, a)| a * C::from_polar(1.0, -(k[0] * x[0] + k[1] * x[1] + k[2] * x[2]))).sum();
        worst = worst.max((v - direct).norm());
    }
    assert!(worst < 1e-12 * scale, "{worst}");

    // Parseval: Σ_x dx³|φ|² against the momentum sum
    let lhs: f64 = fast.iter().map(|v| v.norm_sqr()).sum::<f64>() * g.cell_x();
    let rhs: f64 = modes.iter().map(|(_, a)| a.norm_sqr()).sum::<f64>() * (2.0 * PI).powi(3) / g.cell_k();
    assert_relative_eq!(lhs, rhs, max_relative = 1e-12);
}

#[test]
fn analyze_examples() {
    let g = GridSpec::new(8, 0.5).unwrap();
    let d = Dispersion::new(1.0).unwrap();
    let constant = vec![C::new(2.0, -1.0); g.len()];
    let f = analyze(&constant, Epsilon::Plus, &d, &g, 0.4).unwrap();
    for (i, v) in f.samples.iter().enumerate() {
        if i == g.origin() {
            assert!(v.norm() > 0.0);
        } else {
            assert!(v.norm() < 1e-12 * f.max_abs());
        }
    }
    let zero = analyze(&vec![C::new(0.0, 0.0); g.len()], Epsilon::Minus, &d, &g, 0.0).unwrap();
    assert!(zero.samples.iter().all(|v| v.norm() == 0.0));
    let f = test_field(g, Epsilon::Minus);
    let back = analyze(&synthesize(&f, &d, 2.0).unwrap(), Epsilon::Minus, &d, &g, 2.0).unwrap();
    for (a, b) in back.samples.iter().zip(&f.samples) {
        assert!((a - b).norm() < 1e-12);
    }
}

/// Log-log slope of |ψ| along +x over [r_lo, r_hi] by least squares.
fn tail_slope(g: &GridSpec<f64>, psi: &[C], r_lo: f64, r_hi: f64) -> f64 {
    let h = g.n() / 2;
    let pts: Vec<(f64, f64)> = (h..g.n())
        .map(|j| (g.axis_x(j), psi[g.flat(j, h, h)].norm()))
        .filter(|(r, _)| *r >= r_lo && *r <= r_hi)
        .map(|(r, v)| (r.ln(), v.ln()))
        .collect();
    let m = pts.len() as f64;
    let (mx, my) = (pts.iter().map(|p| p.0).sum::<f64>() / m, pts.iter().map(|p| p.1).sum::<f64>() / m);
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    sxy / sxx
}

#[test]
fn landau_peierls_tail_is_power_law() {
    let g = GridSpec::with_dx(64, 1.0f64).unwrap();
    let d = Dispersion::massless();
    let sk = 0.5f64;
    // covariant synthesis of 2|k|·Gaussian is a Gaussian peak
    let f = SpectralField::from_fn(g, Epsilon::Plus, |k| {
        let r2: f64 = k[0] * k[0] + k[1] * k[1] + k[2] * k[2];
        C::new(2.0 * r2.sqrt() * (-r2 / (2.0 * sk * sk)).exp(), 0.0)
    });
    let peaked = synthesize(&f, &d, 0.0).unwrap();
    let lp = synthesize(&apply_power(&d, -0.25, &f).unwrap(), &d, 0.0).unwrap();
    let h = g.n() / 2;
    let at = |v: &[C], j: usize| v[g.flat(h + j, h, h)].norm();
    // the peak itself is a few cells wide
    assert!(at(&peaked, 8) < 1e-3 * at(&peaked, 0));
    let slope = tail_slope(&g, &lp, 3.0, 30.0);
    assert!((-4.0..=-2.0).contains(&slope), "slope {slope}");
}

#[test]
fn spherical_quadrature_integrates_polynomials() {
    let q = SphericalQuadrature::new(0.5, 1.5, 4, 8, 10, 12).unwrap();
    assert!(q.self_test() < 1e-12);
    // ∫ |k|² d³k over the shell
    let s: f64 = (0..q.len()).map(|i| {
        let k = q.momentum(i);
        q.measure(i) * (k[0] * k[0] + k[1] * k[1] + k[2] * k[2])
    }).sum();
    assert_relative_eq!(s, 4.0 * PI * (1.5f64.powi(5) - 0.5f64.powi(5)) / 5.0, max_relative = 1e-12);
    let rot = q.oriented(&[1.0, 1.0, 0.0]).unwrap();
    let z2: f64 = (0..rot.len()).map(|i| rot.measure(i) * rot.momentum(i)[2].powi(2)).sum();
    assert_relative_eq!(z2, s / 3.0, max_relative = 1e-12);
}

#[test]
fn single_precision_fields_work() {
    let g = GridSpec::new(8, 0.5f32).unwrap();
    let d = Dispersion::new(1.0f32).unwrap();
    let f = SpectralField::from_fn(g, Epsilon::Plus, |k| num_complex::Complex32::new((-k[0] * k[0]).exp(), 0.0));
    let phi = synthesize(&f, &d, 0.5).unwrap();
    let back = analyze(&phi, Epsilon::Plus, &d, &g, 0.5).unwrap();
    for (a, b) in back.samples.iter().zip(&f.samples) {
        assert!((a - b).norm() < 1e-4);
    }
    let unit = synthesize_with(&f, &d, 0.0, |_, _| num_complex::Complex32::new(1.0, 0.0)).unwrap();
    assert_eq!(unit.len(), g.len());
}
