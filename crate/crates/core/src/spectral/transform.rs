//! Fourier synthesis e^{−iε(ωt − k·x)} and its inverse, spectral
//! multipliers D^s and position-space multiplication of k-space arrays.

use super::dispersion::Dispersion;
use super::fft::CenteredFft;
use super::field::{Epsilon, SpectralField, Support};
use super::grid::GridSpec;
use crate::error::{Error, Result};
use crate::vec3::{dot, Vec3};
use crate::Real;
use num_complex::Complex;
use rayon::prelude::*;

/// φ^ε(x, t) = Σ_k w(k)·f(k)·e^{−iε(ω t − k·x)} on every point of the
/// conjugate position grid, with w = dk³/((2π)³2ω).
pub fn synthesize<T: Real>(f: &SpectralField<T>, disp: &Dispersion<T>, t: T) -> Result<Vec<Complex<T>>> {
    f.check_regular(disp)?;
    let grid = *f.grid()?;
    let cell = grid.cell_k() / (T::two_pi_cubed() * T::lit(2.0));
    synthesize_with(f, disp, t, |_, w| Complex::new(cell / w, T::zero()))
}

/// Synthesis with an arbitrary per-mode multiplier `g(k, ω)` in place of
/// the covariant weight: Σ_k g·f·e^{−iε(ωt − k·x)}. The massless k = 0
/// sample is skipped.
pub fn synthesize_with<T, G>(f: &SpectralField<T>, disp: &Dispersion<T>, t: T, g: G) -> Result<Vec<Complex<T>>>
where
    T: Real,
    G: Fn(&Vec3<T>, T) -> Complex<T> + Sync,
{
    let grid = *f.grid()?;
    let eps: T = f.epsilon.sign();
    let mut buf: Vec<Complex<T>> = f
        .samples
        .par_iter()
        .enumerate()
        .map(|(i, c)| {
            let k = grid.k_at(i);
            if disp.is_singular(&k) {
                return Complex::new(T::zero(), T::zero());
            }
            let w = disp.omega(&k);
            let phase = Complex::from_polar(T::one(), -eps * w * t);
            g(&k, w) * *c * phase
        })
        .collect();
    CenteredFft::for_grid(&grid).transform(&mut buf, eps);
    Ok(buf)
}

/// Direct-sum synthesis at arbitrary points; works for any support.
pub fn synthesize_at<T: Real>(
    f: &SpectralField<T>,
    disp: &Dispersion<T>,
    t: T,
    points: &[Vec3<T>],
) -> Result<Vec<Complex<T>>> {
    f.check_regular(disp)?;
    let eps: T = f.epsilon.sign();
    let w = f.support.covariant_weights(disp);
    let terms: Vec<(Vec3<T>, Complex<T>, T)> = (0..f.len())
        .filter(|&i| w[i] != T::zero())
        .map(|i| {
            let k = f.support.momentum(i);
            (k, f.samples[i] * w[i], disp.omega(&k))
        })
        .collect();
    Ok(points
        .par_iter()
        .map(|x| {
            terms.iter().fold(Complex::new(T::zero(), T::zero()), |acc, (k, a, om)| {
                acc + *a * Complex::from_polar(T::one(), -eps * (*om * t - dot(k, x)))
            })
        })
        .collect())
}

/// Exact inverse of [`synthesize`] on the conjugate position grid.
pub fn analyze<T: Real>(
    samples: &[Complex<T>],
    epsilon: Epsilon,
    disp: &Dispersion<T>,
    grid: &GridSpec<T>,
    t: T,
) -> Result<SpectralField<T>> {
    if samples.len() != grid.len() {
        return Err(Error::ShapeMismatch { expected: grid.len(), got: samples.len() });
    }
    let eps: T = epsilon.sign();
    let mut buf = samples.to_vec();
    CenteredFft::for_grid(grid).transform(&mut buf, -eps);
    let norm = T::one() / T::from_count(grid.len());
    let cell = grid.cell_k() / (T::two_pi_cubed() * T::lit(2.0));
    buf.par_iter_mut().enumerate().for_each(|(i, v)| {
        let k = grid.k_at(i);
        if disp.is_singular(&k) {
            *v = Complex::new(T::zero(), T::zero());
            return;
        }
        let w = disp.omega(&k);
        let phase = Complex::from_polar(T::one(), eps * w * t);
        *v = *v * phase * (norm * w / cell);
    });
    Ok(SpectralField { support: Support::Grid(*grid), samples: buf, epsilon, helicity: None, time_label: t })
}

/// D^s: multiply every sample by (|k|² + m²)^s.
pub fn apply_power<T: Real>(disp: &Dispersion<T>, s: T, f: &SpectralField<T>) -> Result<SpectralField<T>> {
    if s < T::zero() {
        f.check_regular(disp)?;
    }
    let mut out = f.clone();
    for (i, v) in out.samples.iter_mut().enumerate() {
        let k = f.support.momentum(i);
        if s < T::zero() && disp.is_singular(&k) {
            continue;
        }
        *v = *v * disp.omega_sq(&k).powf(s);
    }
    Ok(out)
}

/// Apply a position-space multiplier to a k-space array:
/// c̃(x) = n⁻³ Σ_k c(k)e^{iεk·x}, multiply by `m(x)`, transform back.
/// With m(x) = x_a this realizes ε·i∂/∂k_a spectrally.
pub fn position_multiply<T, M>(grid: &GridSpec<T>, c: &[Complex<T>], epsilon: Epsilon, m: M) -> Vec<Complex<T>>
where
    T: Real,
    M: Fn(&Vec3<T>) -> Complex<T> + Sync,
{
    let eps: T = epsilon.sign();
    let plan = CenteredFft::for_grid(grid);
    let mut buf = c.to_vec();
    plan.transform(&mut buf, eps);
    let norm = T::one() / T::from_count(grid.len());
    buf.par_iter_mut().enumerate().for_each(|(i, v)| *v = *v * m(&grid.x_at(i)) * norm);
    plan.transform(&mut buf, -eps);
    buf
}

/// Fraction of Σ|c|² sitting on the outermost index planes, taking the
/// larger of the k-space and position-space representations.
pub fn edge_fraction<T: Real>(grid: &GridSpec<T>, c: &[Complex<T>]) -> f64 {
    let frac = |v: &[Complex<T>]| {
        let (mut edge, mut total) = (0.0f64, 0.0f64);
        for (i, s) in v.iter().enumerate() {
            let a = s.norm_sqr().to_f64_lossy();
            total += a;
            if grid.on_boundary(i) {
                edge += a;
            }
        }
        if total > 0.0 {
            edge / total
        } else {
            0.0
        }
    };
    let mut x = c.to_vec();
    CenteredFft::for_grid(grid).transform(&mut x, T::one());
    frac(c).max(frac(&x))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex<f64> {
        Complex::new(re, im)
    }

    #[test]
    fn delta_in_k_gives_plane_wave() {
        let g = GridSpec::new(8, 0.5).unwrap();
        let d = Dispersion::new(1.0).unwrap();
        let m = g.flat(5, 3, 6);
        let k0 = g.k_at(m);
        let w0 = d.omega(&k0);
        for eps in Epsilon::BOTH {
            let mut f = SpectralField::zeros(g, eps);
            f.samples[m] = c((2.0 * PI).powi(3) * 2.0 * w0 / g.cell_k(), 0.0);
            let t = 0.7;
            let phi = synthesize(&f, &d, t).unwrap();
            let e: f64 = eps.sign();
            for (j, v) in phi.iter().enumerate() {
                let x = g.x_at(j);
                let expect = Complex::from_polar(1.0, -e * (w0 * t - dot(&k0, &x)));
                assert!((v - expect).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn round_trip() {
        let g = GridSpec::new(8, 0.4).unwrap();
        let d = Dispersion::new(0.5).unwrap();
        for eps in Epsilon::BOTH {
            let f = SpectralField::from_fn(g, eps, |k: &Vec3<f64>| c(k[0].sin() + 1.0, k[1] * k[2]));
            let back = analyze(&synthesize(&f, &d, 1.3).unwrap(), eps, &d, &g, 1.3).unwrap();
            for (a, b) in f.samples.iter().zip(&back.samples) {
                assert!((a - b).norm() < 1e-12 * (1.0 + a.norm()));
            }
        }
    }

    #[test]
    fn constant_analyzes_to_zero_mode() {
        let g = GridSpec::new(6, 0.9).unwrap();
        let d = Dispersion::new(1.0).unwrap();
        let f = analyze(&vec![c(2.0, -1.0); g.len()], Epsilon::Plus, &d, &g, 0.0).unwrap();
        for (i, v) in f.samples.iter().enumerate() {
            if i == g.origin() {
                assert!(v.norm() > 1.0);
            } else {
                assert!(v.norm() < 1e-10);
            }
        }
        let z = analyze(&vec![c(0.0, 0.0); g.len()], Epsilon::Minus, &d, &g, 0.0).unwrap();
        assert!(z.samples.iter().all(|v| v.norm() == 0.0));
    }

    #[test]
    fn power_examples() {
        let g = GridSpec::new(4, 1.0).unwrap();
        let d0 = Dispersion::massless();
        let mut f = SpectralField::from_fn(g, Epsilon::Plus, |k| c(1.0 + k[0], k[2]));
        assert!(apply_power(&d0, -0.25, &f).is_err());
        f.enforce_regular(&d0);
        let id = apply_power(&d0, 0.0, &f).unwrap();
        assert_eq!(id.samples, f.samples);
        let half = apply_power(&d0, 0.5, &f).unwrap();
        for i in 0..g.len() {
            let kn = crate::vec3::norm(&g.k_at(i));
            assert!((half.samples[i] - f.samples[i] * kn).norm() < 1e-14);
        }
    }

    #[test]
    fn position_multiply_by_one_is_identity() {
        let g = GridSpec::new(6, 0.3).unwrap();
        let v: Vec<_> = (0..g.len()).map(|i| c(i as f64, 1.0)).collect();
        for eps in Epsilon::BOTH {
            let out = position_multiply(&g, &v, eps, |_| c(1.0, 0.0));
            for (a, b) in v.iter().zip(&out) {
                assert!((a - b).norm() < 1e-10);
            }
        }
    }

    #[test]
    fn synthesize_at_matches_grid_synthesis() {
        let g = GridSpec::new(6, 0.6).unwrap();
        let d = Dispersion::new(0.3).unwrap();
        let f = SpectralField::from_fn(g, Epsilon::Minus, |k: &Vec3<f64>| c((-crate::vec3::norm_sqr(k)).exp(), k[0]));
        let full = synthesize(&f, &d, 0.4).unwrap();
        let pts: Vec<_> = [0usize, 17, 100].iter().map(|&i| g.x_at(i)).collect();
        let some = synthesize_at(&f, &d, 0.4, &pts).unwrap();
        for (p, &i) in some.iter().zip(&[0usize, 17, 100]) {
            assert!((p - full[i]).norm() < 1e-12);
        }
    }
}
