use super::helicity::helicity_vector_or_zero;
use super::state::{photon_dual_norm, PhotonState};
use crate::error::{Error, Result};
use crate::spectral::{synthesize_with, CenteredFft, Epsilon, GridSpec, Helicity, SpectralField};
use crate::vec3::{dot, CVec3, Vec3};
use crate::Real;
use num_complex::Complex;
use rayon::prelude::*;

/// Cartesian components of a vector field on the position grid.
pub type VectorField<T> = [Vec<Complex<T>>; 3];

fn dual_cell<T: Real>(grid: &GridSpec<T>) -> T {
    grid.cell_k() / (T::two_pi_cubed() * T::lit(2.0))
}

/// ψ_λ^ε(x) = i Σ_k dk³/((2π)³2)·e_λ(k)·e^{−iε(ωt − k·x)}·c_λ^ε(k).
pub fn photon_wavefunction<T: Real>(s: &PhotonState<T>, eps: Epsilon, h: Helicity, t: T) -> Result<VectorField<T>> {
    let grid = *s.grid()?;
    let cell = dual_cell(&grid);
    let f = s.component(eps, h);
    let comp = |a: usize| {
        synthesize_with(f, &s.disp, t, |k, _| Complex::new(T::zero(), cell) * helicity_vector_or_zero(k, h)[a])
    };
    Ok([comp(0)?, comp(1)?, comp(2)?])
}

/// Direct-sum evaluation of ψ_λ^ε at arbitrary points; any support.
pub fn photon_wavefunction_at<T: Real>(
    s: &PhotonState<T>,
    eps: Epsilon,
    h: Helicity,
    t: T,
    points: &[Vec3<T>],
) -> Vec<CVec3<T>> {
    let f = s.component(eps, h);
    let e: T = eps.sign();
    let two = T::two_pi_cubed() * T::lit(2.0);
    let terms: Vec<(Vec3<T>, T, CVec3<T>)> = (0..f.len())
        .filter(|&i| f.samples[i].norm_sqr() > T::zero())
        .map(|i| {
            let k = f.support.momentum(i);
            let a = f.samples[i] * Complex::new(T::zero(), f.support.measure(i) / two);
            let ev = helicity_vector_or_zero(&k, h);
            (k, s.disp.omega(&k), [ev[0] * a, ev[1] * a, ev[2] * a])
        })
        .collect();
    points
        .par_iter()
        .map(|x| {
            let mut acc = [Complex::new(T::zero(), T::zero()); 3];
            for (k, om, v) in &terms {
                let ph = Complex::from_polar(T::one(), -e * (*om * t - dot(k, x)));
                for a in 0..3 {
                    acc[a] = acc[a] + v[a] * ph;
                }
            }
            acc
        })
        .collect()
}

/// p[ε][λ](x) = 2|ψ_λ^ε(x)|²/⟨ψ̃|ψ⟩.
#[derive(Debug, Clone, PartialEq)]
pub struct PhotonDensity<T> {
    pub p: [[Vec<T>; 2]; 2],
    pub time_label: T,
}

impl<T: Real> PhotonDensity<T> {
    pub fn total(&self, grid: &GridSpec<T>) -> T {
        self.p.iter().flatten().flatten().fold(T::zero(), |a, &b| a + b) * grid.cell_x()
    }

    pub fn min(&self) -> T {
        self.p.iter().flatten().flatten().fold(T::infinity(), |a, &b| a.min(b))
    }

    pub fn component_total(&self, grid: &GridSpec<T>, e: Epsilon, h: Helicity) -> T {
        self.p[e.index()][h.index()].iter().fold(T::zero(), |a, &b| a + b) * grid.cell_x()
    }
}

pub fn photon_probability_density<T: Real>(s: &PhotonState<T>, t: T) -> Result<PhotonDensity<T>> {
    let n = photon_dual_norm(s);
    if !(n > T::zero()) {
        return Err(Error::ZeroNorm);
    }
    let scale = T::lit(2.0) / n;
    let dens = |e: Epsilon, h: Helicity| -> Result<Vec<T>> {
        if s.component(e, h).samples.iter().all(|v| v.norm_sqr() == T::zero()) {
            return Ok(vec![T::zero(); s.support().len()]);
        }
        let psi = photon_wavefunction(s, e, h, t)?;
        Ok((0..psi[0].len())
            .into_par_iter()
            .map(|i| (psi[0][i].norm_sqr() + psi[1][i].norm_sqr() + psi[2][i].norm_sqr()) * scale)
            .collect())
    };
    Ok(PhotonDensity {
        p: [
            [dens(Epsilon::Plus, Helicity::Plus)?, dens(Epsilon::Plus, Helicity::Minus)?],
            [dens(Epsilon::Minus, Helicity::Plus)?, dens(Epsilon::Minus, Helicity::Minus)?],
        ],
        time_label: t,
    })
}

/// Position basis vector |A_σj^ε(y)⟩ at time t: coefficients
/// −i·conj(e_σj(k))·e^{iε(ωt − k·y)} for each helicity in `helicities`.
pub fn photon_position_eigenvector<T: Real>(
    grid: GridSpec<T>,
    eps: Epsilon,
    helicities: &[Helicity],
    j: usize,
    y: &Vec3<T>,
    t: T,
) -> PhotonState<T> {
    let mut s = PhotonState::zeros(grid);
    let e: T = eps.sign();
    let disp = s.disp;
    for &h in helicities {
        *s.component_mut(eps, h) = SpectralField::from_fn(grid, eps, |k| {
            let ev = helicity_vector_or_zero(k, h);
            Complex::new(T::zero(), -T::one()) * ev[j].conj() * Complex::from_polar(T::one(), e * (disp.omega(k) * t - dot(k, y)))
        })
        .with_helicity(h);
    }
    s.apply_mask();
    s
}

/// Resolution of the identity through the photon position basis:
/// c_λ^ε(k) = 2 Σ_x dx³ e^{iε(ωt − k·x)}·(−i)conj(e_λ(k))·ψ_λ^ε(x).
pub fn reconstruct_photon<T: Real>(
    psi: &[[VectorField<T>; 2]; 2],
    grid: GridSpec<T>,
    t: T,
) -> Result<PhotonState<T>> {
    let mut out = PhotonState::zeros(grid);
    let disp = out.disp;
    let plan = CenteredFft::for_grid(&grid);
    let two_dx3 = T::lit(2.0) * grid.cell_x();
    for eps in Epsilon::BOTH {
        let e: T = eps.sign();
        for h in Helicity::BOTH {
            let field = &psi[eps.index()][h.index()];
            let mut comps = Vec::with_capacity(3);
            for a in 0..3 {
                if field[a].len() != grid.len() {
                    return Err(Error::ShapeMismatch { expected: grid.len(), got: field[a].len() });
                }
                let mut buf = field[a].clone();
                plan.transform(&mut buf, -e);
                comps.push(buf);
            }
            let f = out.component_mut(eps, h);
            for i in 0..grid.len() {
                let k = grid.k_at(i);
                let ev = helicity_vector_or_zero(&k, h);
                let proj = ev[0].conj() * comps[0][i] + ev[1].conj() * comps[1][i] + ev[2].conj() * comps[2][i];
                f.samples[i] = Complex::new(T::zero(), -T::one()) * proj * Complex::from_polar(two_dx3, e * disp.omega(&k) * t);
            }
        }
    }
    out.apply_mask();
    Ok(out)
}

/// Spectral divergence ∇·ψ of a vector field on the grid, for the
/// transversality check. `eps` selects the synthesis sign.
pub fn spectral_divergence<T: Real>(grid: &GridSpec<T>, psi: &VectorField<T>, eps: Epsilon) -> Vec<Complex<T>> {
    let e: T = eps.sign();
    let plan = CenteredFft::for_grid(grid);
    let norm = T::one() / T::from_count(grid.len());
    let mut acc = vec![Complex::new(T::zero(), T::zero()); grid.len()];
    for a in 0..3 {
        let mut buf = psi[a].clone();
        plan.transform(&mut buf, -e);
        for (i, v) in buf.iter_mut().enumerate() {
            let k = grid.k_at(i);
            *v = *v * Complex::new(T::zero(), e * k[a]) * norm;
        }
        for (o, v) in acc.iter_mut().zip(buf) {
            *o = *o + v;
        }
    }
    plan.transform(&mut acc, e);
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::photon::helicity::closed_form_projector;
    use crate::vec3::norm_sqr;

    #[test]
    fn single_mode_plane_wave_along_helicity_vector() {
        let g = GridSpec::new(6, 0.5f64).unwrap();
        let i = g.flat(1, 4, 2);
        let k0 = g.k_at(i);
        let s = PhotonState::from_fn(g, |e, h, k| {
            if e == Epsilon::Plus && h == Helicity::Minus && *k == k0 {
                Complex::new(1.0, 0.0)
            } else {
                Complex::new(0.0, 0.0)
            }
        });
        let psi = photon_wavefunction(&s, Epsilon::Plus, Helicity::Minus, 0.3).unwrap();
        let ev = helicity_vector_or_zero(&k0, Helicity::Minus);
        let cell = g.cell_k() / ((2.0 * std::f64::consts::PI).powi(3) * 2.0);
        let w0 = crate::vec3::norm(&k0);
        for x in [0usize, 50, 200] {
            let xv = g.x_at(x);
            let ph = Complex::from_polar(cell, -(w0 * 0.3 - dot(&k0, &xv))) * Complex::new(0.0, 1.0);
            for a in 0..3 {
                assert!((psi[a][x] - ev[a] * ph).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn eigenvector_gives_transverse_delta() {
        let g = GridSpec::new(6, 0.8f64).unwrap();
        let yi = g.flat(2, 3, 4);
        let y = g.x_at(yi);
        let j = 1;
        let s = photon_position_eigenvector(g, Epsilon::Plus, &Helicity::BOTH, j, &y, 0.0);
        let pp = photon_wavefunction(&s, Epsilon::Plus, Helicity::Plus, 0.0).unwrap();
        let pm = photon_wavefunction(&s, Epsilon::Plus, Helicity::Minus, 0.0).unwrap();
        let n3 = g.len() as f64;
        for x in [yi, 0, 77] {
            let xv = g.x_at(x);
            for i in 0..3 {
                let mut expect = Complex::new(0.0, 0.0);
                for m in 0..g.len() {
                    let k = g.k_at(m);
                    if norm_sqr(&k) == 0.0 || k[0] == 0.0 && k[1] == 0.0 {
                        continue;
                    }
                    let p = closed_form_projector(&k)[i][j];
                    expect += Complex::from_polar(p, dot(&k, &crate::vec3::sub(&xv, &y)));
                }
                expect /= 2.0 * n3 * g.cell_x();
                let got = pp[i][x] + pm[i][x];
                assert!((got - expect).norm() < 1e-10 * (1.0 / g.cell_x()), "{got} {expect}");
            }
        }
    }
}
