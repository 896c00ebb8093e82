use super::helicity::helicity_triad;
use super::state::{photon_dual_norm, PhotonState};
use crate::error::{Error, Result};
use crate::kg::position::guard_edges;
use crate::spectral::{position_multiply, Epsilon, Helicity};
use crate::vec3::{CVec3, Vec3};
use crate::Real;
use num_complex::Complex;

/// Fixed-frame photon position operator Ê·x̂_a·Ê⁻¹ applied to a state.
///
/// Ê⁻¹ rotates the local frame (e_θ, e_φ, k̂) at every k onto the Cartesian
/// axes, so Σ_λ c_λ e_λ(k) becomes a k-independent combination of x̂ and ŷ.
/// Each Cartesian component is differentiated (ε·i∂/∂k_a), rotated back and
/// projected on conj(e_λ(k)). Masked cells stay zero.
pub fn photon_position_apply<T: Real>(s: &PhotonState<T>, axis: usize) -> Result<PhotonState<T>> {
    let grid = *s.grid()?;
    let n = grid.len();
    let triads: Vec<_> = (0..n).map(|i| helicity_triad(&grid.k_at(i)).ok()).collect();
    let mut out = s.clone();
    let zero = Complex::new(T::zero(), T::zero());
    for eps in Epsilon::BOTH {
        // Cartesian components in the rotated frame
        let mut cart: [Vec<Complex<T>>; 3] = [vec![zero; n], vec![zero; n], vec![zero; n]];
        for h in Helicity::BOTH {
            let c = &s.component(eps, h).samples;
            guard_edges(&grid, c)?;
            for i in 0..n {
                let Some(tr) = &triads[i] else { continue };
                let r = tr.rotation();
                let ev = tr.e(h);
                for (a, row) in r.iter().enumerate() {
                    let proj = ev[0] * row[0] + ev[1] * row[1] + ev[2] * row[2];
                    cart[a][i] = cart[a][i] + proj * c[i];
                }
            }
        }
        let moved: Vec<Vec<Complex<T>>> = cart
            .iter()
            .map(|comp| position_multiply(&grid, comp, eps, |x| Complex::new(x[axis], T::zero())))
            .collect();
        for h in Helicity::BOTH {
            let dst = &mut out.component_mut(eps, h).samples;
            for i in 0..n {
                dst[i] = match &triads[i] {
                    None => zero,
                    Some(tr) => {
                        let r = tr.rotation();
                        let ev = tr.e(h);
                        // back-rotate to the lab frame, then project on conj(e_λ)
                        let mut v: CVec3<T> = [zero; 3];
                        for (a, row) in r.iter().enumerate() {
                            for d in 0..3 {
                                v[d] = v[d] + moved[a][i] * row[d];
                            }
                        }
                        ev[0].conj() * v[0] + ev[1].conj() * v[1] + ev[2].conj() * v[2]
                    }
                };
            }
        }
    }
    Ok(out)
}

/// Max-norm of [x̂_i, x̂_j]ψ over all component pairs, relative to
/// max_a ‖x̂_a x̂_a ψ‖.
pub fn photon_commutator_residual<T: Real>(s: &PhotonState<T>) -> Result<T> {
    let single: Vec<_> = (0..3).map(|a| photon_position_apply(s, a)).collect::<Result<_>>()?;
    let mut worst = T::zero();
    let mut scale = T::zero();
    for i in 0..3 {
        let ii = photon_position_apply(&single[i], i)?;
        scale = scale.max(max_abs(&ii));
        for j in (i + 1)..3 {
            let ij = photon_position_apply(&single[j], i)?;
            let ji = photon_position_apply(&single[i], j)?;
            for (ra, rb) in ij.c.iter().flatten().zip(ji.c.iter().flatten()) {
                for (u, v) in ra.samples.iter().zip(&rb.samples) {
                    worst = worst.max((*u - *v).norm());
                }
            }
        }
    }
    Ok(if scale > T::zero() { worst / scale } else { worst })
}

fn max_abs<T: Real>(s: &PhotonState<T>) -> T {
    s.c.iter().flatten().fold(T::zero(), |m, f| m.max(f.max_abs()))
}

/// ⟨ψ̃|x̂|ψ⟩/⟨ψ̃|ψ⟩ with dual weights.
pub fn photon_position_expectation<T: Real>(s: &PhotonState<T>) -> Result<Vec3<T>> {
    let grid = *s.grid()?;
    let norm = photon_dual_norm(s);
    if !(norm > T::zero()) {
        return Err(Error::ZeroNorm);
    }
    let w = grid.cell_k() / (T::two_pi_cubed() * T::lit(2.0));
    let mut out = [T::zero(); 3];
    for (a, o) in out.iter_mut().enumerate() {
        let xs = photon_position_apply(s, a)?;
        let mut acc = Complex::new(T::zero(), T::zero());
        for (fa, fb) in s.c.iter().flatten().zip(xs.c.iter().flatten()) {
            for (u, v) in fa.samples.iter().zip(&fb.samples) {
                acc = acc + u.conj() * *v;
            }
        }
        *o = acc.re * w / norm;
    }
    Ok(out)
}
