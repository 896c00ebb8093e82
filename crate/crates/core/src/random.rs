//! Random state generators for property suites. Callers supply the RNG,
//! so a seeded generator reproduces every state exactly.

use crate::kg::KgState;
use crate::photon::PhotonState;
use crate::spectral::{Dispersion, Epsilon, GridSpec, Helicity};
use crate::vec3::{dot, norm_sqr, Vec3};
use crate::Real;
use num_complex::Complex;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

fn cnormal<R: Rng + ?Sized>(rng: &mut R) -> Complex<f64> {
    Complex::new(StandardNormal.sample(rng), StandardNormal.sample(rng))
}

fn lit<T: Real>(c: Complex<f64>) -> Complex<T> {
    Complex::new(T::lit(c.re), T::lit(c.im))
}

/// Independent complex Gaussian amplitudes under a Gaussian envelope of
/// width `sigma_k`, in both frequency sectors.
pub fn random_kg_state<T: Real, R: Rng + ?Sized>(rng: &mut R, grid: GridSpec<T>, disp: Dispersion<T>, sigma_k: f64) -> KgState<T> {
    let mut s = KgState::zeros(grid, disp);
    for eps in Epsilon::BOTH {
        let f = s.component_mut(eps);
        for (i, v) in f.samples.iter_mut().enumerate() {
            let k = grid.k_at(i);
            let env = (-norm_sqr(&k).to_f64_lossy() / (2.0 * sigma_k * sigma_k)).exp();
            *v = lit(cnormal(rng) * env);
        }
        f.enforce_regular(&disp);
    }
    s
}

/// Parameters of one Gaussian wave packet in momentum space.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Packet {
    pub k0: Vec3<f64>,
    pub x0: Vec3<f64>,
    pub sigma: f64,
    pub amplitude: Complex<f64>,
}

impl Packet {
    pub fn eval<T: Real>(&self, k: &Vec3<T>) -> Complex<T> {
        let k = [k[0].to_f64_lossy(), k[1].to_f64_lossy(), k[2].to_f64_lossy()];
        let d = [k[0] - self.k0[0], k[1] - self.k0[1], k[2] - self.k0[2]];
        let env = (-norm_sqr(&d) / (2.0 * self.sigma * self.sigma)).exp();
        lit(self.amplitude * Complex::from_polar(env, -dot(&k, &self.x0)))
    }

    pub fn random<R: Rng + ?Sized>(rng: &mut R, k_range: f64, x_range: f64, sigma: f64) -> Self {
        let mut v = || [rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)];
        let (a, b) = (v(), v());
        Self {
            k0: a.map(|c| c * k_range),
            x0: b.map(|c| c * x_range),
            sigma,
            amplitude: cnormal(rng),
        }
    }
}

/// Sum of `n_packets` random Gaussian packets per frequency sector; smooth
/// in k and localized in x, so spectral gradients are well resolved.
#[allow(clippy::too_many_arguments)]
pub fn smooth_kg_state<T: Real, R: Rng + ?Sized>(
    rng: &mut R,
    grid: GridSpec<T>,
    disp: Dispersion<T>,
    n_packets: usize,
    k_range: f64,
    x_range: f64,
    sigma: f64,
    mixed: bool,
) -> KgState<T> {
    let mut s = KgState::zeros(grid, disp);
    for eps in Epsilon::BOTH {
        if eps == Epsilon::Minus && !mixed {
            continue;
        }
        let packets: Vec<Packet> = (0..n_packets).map(|_| Packet::random(rng, k_range, x_range, sigma)).collect();
        let f = s.component_mut(eps);
        for (i, v) in f.samples.iter_mut().enumerate() {
            let k = grid.k_at(i);
            *v = packets.iter().fold(Complex::new(T::zero(), T::zero()), |a, p| a + p.eval(&k));
        }
        f.enforce_regular(&disp);
    }
    s
}

/// Independent complex Gaussian photon amplitudes under a Gaussian
/// envelope, all four (ε, λ) components.
pub fn random_photon_state<T: Real, R: Rng + ?Sized>(rng: &mut R, grid: GridSpec<T>, sigma_k: f64) -> PhotonState<T> {
    let mut s = PhotonState::zeros(grid);
    for eps in Epsilon::BOTH {
        for h in Helicity::BOTH {
            let f = s.component_mut(eps, h);
            for (i, v) in f.samples.iter_mut().enumerate() {
                let k = grid.k_at(i);
                let env = (-norm_sqr(&k).to_f64_lossy() / (2.0 * sigma_k * sigma_k)).exp();
                *v = lit(cnormal(rng) * env);
            }
        }
    }
    s.apply_mask();
    s
}

/// Smooth photon state vanishing as ρ⁴ toward the polar axis
/// (ρ² = k_x² + k_y²), built from random packets in the ε = + sector.
pub fn axis_masked_photon_state<T: Real, R: Rng + ?Sized>(
    rng: &mut R,
    grid: GridSpec<T>,
    n_packets: usize,
    k_range: f64,
    x_range: f64,
    sigma: f64,
) -> PhotonState<T> {
    let mut s = PhotonState::zeros(grid);
    for h in Helicity::BOTH {
        let packets: Vec<Packet> = (0..n_packets).map(|_| Packet::random(rng, k_range, x_range, sigma)).collect();
        let f = s.component_mut(Epsilon::Plus, h);
        for (i, v) in f.samples.iter_mut().enumerate() {
            let k = grid.k_at(i);
            let rho2 = (k[0] * k[0] + k[1] * k[1]).to_f64_lossy();
            let sum = packets.iter().fold(Complex::new(T::zero(), T::zero()), |a, p| a + p.eval(&k));
            *v = sum * T::lit(rho2 * rho2);
        }
    }
    s.apply_mask();
    s
}
