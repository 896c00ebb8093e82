use super::helicity::helicity_vector_or_zero;
use super::state::PhotonState;
use crate::error::Result;
use crate::kg::current::populated_omega_max;
use crate::kg::{bilinear_current, FourCurrentSamples, Jet};
use crate::spectral::{Epsilon, Helicity};
use crate::Real;
use num_complex::Complex;

/// Photon current J^μ = i Σ_j A_j* ∂↔^μ A_cj with
/// A = Σ_{ε,λ} Σ_k dk³/((2π)³2ω)·e_λ(k)·c_λ^ε(k)·e^{−iε(ωt − k·x)} and
/// A_c the same sum weighted by ε.
pub fn photon_current<T: Real>(s: &PhotonState<T>, t: T) -> Result<FourCurrentSamples<T>> {
    let grid = *s.grid()?;
    let cell = grid.cell_k() / (T::two_pi_cubed() * T::lit(2.0));
    let mut total: Option<FourCurrentSamples<T>> = None;
    let fields: Vec<_> = s.c.iter().flatten().collect();
    let omega_max = populated_omega_max(&fields, &s.disp);
    for j in 0..3 {
        let mut a = Jet::zeros(grid.len());
        let mut ac = Jet::zeros(grid.len());
        for eps in Epsilon::BOTH {
            for h in Helicity::BOTH {
                let f = s.component(eps, h);
                if f.samples.iter().all(|v| v.norm_sqr() == T::zero()) {
                    continue;
                }
                let jet = Jet::from_field(f, &s.disp, t, |k, w| helicity_vector_or_zero(k, h)[j] * (cell / w))?;
                a = a.axpy(T::one(), &jet);
                ac = ac.axpy(eps.sign(), &jet);
            }
        }
        let part = bilinear_current(&a, &ac, t, omega_max);
        match total.as_mut() {
            None => total = Some(part),
            Some(acc) => acc.add(&part),
        }
    }
    Ok(total.expect("three components"))
}

/// A single Cartesian component of the vector potential, for diagnostics.
pub fn vector_potential<T: Real>(s: &PhotonState<T>, t: T) -> Result<[Vec<Complex<T>>; 3]> {
    let grid = *s.grid()?;
    let cell = grid.cell_k() / (T::two_pi_cubed() * T::lit(2.0));
    let mut out = [
        vec![Complex::new(T::zero(), T::zero()); grid.len()],
        vec![Complex::new(T::zero(), T::zero()); grid.len()],
        vec![Complex::new(T::zero(), T::zero()); grid.len()],
    ];
    for eps in Epsilon::BOTH {
        for h in Helicity::BOTH {
            for (j, o) in out.iter_mut().enumerate() {
                let f = s.component(eps, h);
                let v = crate::spectral::synthesize_with(f, &s.disp, t, |k, w| helicity_vector_or_zero(k, h)[j] * (cell / w))?;
                o.iter_mut().zip(v).for_each(|(a, b)| *a = *a + b);
            }
        }
    }
    Ok(out)
}
