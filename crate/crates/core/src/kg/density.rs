use super::state::{dual_norm, KgState};
use crate::error::{Error, Result};
use crate::spectral::{synthesize_with, Dispersion, Epsilon, GridSpec, SpectralField, Support};
use crate::vec3::{dot, Vec3};
use crate::Real;
use num_complex::Complex;
use rayon::prelude::*;

/// Position probability densities for the two frequency signs.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbabilityDensity<T> {
    pub p_plus: Vec<T>,
    pub p_minus: Vec<T>,
    pub time_label: T,
}

impl<T: Real> ProbabilityDensity<T> {
    pub fn component(&self, eps: Epsilon) -> &[T] {
        match eps {
            Epsilon::Plus => &self.p_plus,
            Epsilon::Minus => &self.p_minus,
        }
    }

    /// Σ_x dx³ (p⁺ + p⁻).
    pub fn total(&self, grid: &GridSpec<T>) -> T {
        let s = self.p_plus.iter().chain(&self.p_minus).fold(T::zero(), |a, &b| a + b);
        s * grid.cell_x()
    }

    pub fn min(&self) -> T {
        self.p_plus.iter().chain(&self.p_minus).fold(T::infinity(), |a, &b| a.min(b))
    }
}

/// ψ^ε(x, t) = Σ_k dk³/((2π)³2)·e^{−iε(ωt − k·x)}·c^ε(k) on the full
/// position grid.
pub fn wavefunction<T: Real>(s: &KgState<T>, eps: Epsilon, t: T) -> Result<Vec<Complex<T>>> {
    let grid = s.grid()?;
    let cell = grid.cell_k() / (T::two_pi_cubed() * T::lit(2.0));
    synthesize_with(s.component(eps), &s.disp, t, |_, _| Complex::new(cell, T::zero()))
}

/// p^ε(x) = 2|ψ^ε(x)|²/⟨ψ̃|ψ⟩.
pub fn probability_density<T: Real>(s: &KgState<T>, t: T) -> Result<ProbabilityDensity<T>> {
    let n = dual_norm(s);
    if !(n > T::zero()) {
        return Err(Error::ZeroNorm);
    }
    let scale = T::lit(2.0) / n;
    let dens = |eps| -> Result<Vec<T>> {
        Ok(wavefunction(s, eps, t)?.par_iter().map(|v| v.norm_sqr() * scale).collect())
    };
    Ok(ProbabilityDensity { p_plus: dens(Epsilon::Plus)?, p_minus: dens(Epsilon::Minus)?, time_label: t })
}

/// Position eigenvector |φ^ε(y)⟩ at time t: c^ε(k) = e^{iε(ωt − k·y)},
/// other component zero.
pub fn position_eigenvector<T: Real>(
    grid: GridSpec<T>,
    disp: Dispersion<T>,
    eps: Epsilon,
    y: &Vec3<T>,
    t: T,
) -> KgState<T> {
    let e: T = eps.sign();
    let f = SpectralField::from_fn(grid, eps, |k| Complex::from_polar(T::one(), e * (disp.omega(k) * t - dot(k, y))));
    let mut s = KgState::zeros(Support::Grid(grid), disp);
    *s.component_mut(eps) = f;
    s.plus.enforce_regular(&disp);
    s.minus.enforce_regular(&disp);
    s
}

/// Resolution of the identity through the position basis:
/// c^ε(k) = 2 Σ_x dx³ e^{iε(ωt − k·x)} ψ^ε(x), rebuilding a state from
/// its two wave functions.
pub fn reconstruct_from_wavefunctions<T: Real>(
    psi_plus: &[Complex<T>],
    psi_minus: &[Complex<T>],
    grid: GridSpec<T>,
    disp: Dispersion<T>,
    t: T,
) -> Result<KgState<T>> {
    let mut out = KgState::zeros(grid, disp);
    for (eps, psi) in [(Epsilon::Plus, psi_plus), (Epsilon::Minus, psi_minus)] {
        if psi.len() != grid.len() {
            return Err(Error::ShapeMismatch { expected: grid.len(), got: psi.len() });
        }
        let e: T = eps.sign();
        let mut buf = psi.to_vec();
        crate::spectral::CenteredFft::for_grid(&grid).transform(&mut buf, -e);
        let two_dx3 = T::lit(2.0) * grid.cell_x();
        let f = out.component_mut(eps);
        for (i, v) in buf.into_iter().enumerate() {
            let k = grid.k_at(i);
            f.samples[i] = v * Complex::from_polar(two_dx3, e * disp.omega(&k) * t);
        }
        f.enforce_regular(&disp);
    }
    Ok(out)
}
