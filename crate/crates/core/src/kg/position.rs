use super::state::{dual_norm, squared_norm, KgState};
use crate::error::{Error, Result};
use crate::spectral::{edge_fraction, position_multiply, Epsilon, GridSpec};
use crate::vec3::Vec3;
use crate::Real;
use num_complex::Complex;

/// Largest boundary fraction of Σ|c|² tolerated by gradient operations.
pub const EDGE_LIMIT: f64 = 1e-8;

pub(crate) fn guard_edges<T: Real>(grid: &GridSpec<T>, c: &[Complex<T>]) -> Result<()> {
    let f = edge_fraction(grid, c);
    if f > EDGE_LIMIT {
        return Err(Error::EdgeMass { fraction: f, limit: EDGE_LIMIT });
    }
    Ok(())
}

/// x̂_a c = ε·i∂c/∂k_a for one component, by spectral differentiation.
pub fn position_apply_component<T: Real>(grid: &GridSpec<T>, c: &[Complex<T>], eps: Epsilon, axis: usize) -> Vec<Complex<T>> {
    position_multiply(grid, c, eps, |x| Complex::new(x[axis], T::zero()))
}

/// Apply x̂_a = ε·i∇_k to both components.
pub fn position_apply<T: Real>(s: &KgState<T>, axis: usize) -> Result<KgState<T>> {
    let grid = *s.grid()?;
    let mut out = s.clone();
    for eps in Epsilon::BOTH {
        let c = &s.component(eps).samples;
        guard_edges(&grid, c)?;
        out.component_mut(eps).samples = position_apply_component(&grid, c, eps, axis);
    }
    Ok(out)
}

/// ⟨ψ̃|x̂|ψ⟩/⟨ψ̃|ψ⟩ with the dual weights dk³/((2π)³2).
pub fn position_expectation<T: Real>(s: &KgState<T>) -> Result<Vec3<T>> {
    let c = position_expectation_complex(s)?;
    Ok([c[0].re, c[1].re, c[2].re])
}

/// Complex form of [`position_expectation`]; the imaginary parts vanish
/// for well-resolved states.
pub fn position_expectation_complex<T: Real>(s: &KgState<T>) -> Result<[Complex<T>; 3]> {
    let grid = *s.grid()?;
    let norm = dual_norm(s);
    if !(norm > T::zero()) {
        return Err(Error::ZeroNorm);
    }
    let w = grid.cell_k() / (T::two_pi_cubed() * T::lit(2.0));
    let mut out = [Complex::new(T::zero(), T::zero()); 3];
    for eps in Epsilon::BOTH {
        let c = &s.component(eps).samples;
        if c.iter().all(|v| v.norm_sqr() == T::zero()) {
            continue;
        }
        guard_edges(&grid, c)?;
        for (a, o) in out.iter_mut().enumerate() {
            let xc = position_apply_component(&grid, c, eps, a);
            let acc = c.iter().zip(&xc).fold(Complex::new(T::zero(), T::zero()), |acc, (u, v)| acc + u.conj() * *v);
            *o = *o + acc * w;
        }
    }
    Ok(out.map(|v| v / norm))
}

/// Newton-Wigner operator ω^{1/2}·x̂_a·ω^{−1/2} on both components.
pub fn nw_apply<T: Real>(s: &KgState<T>, axis: usize) -> Result<KgState<T>> {
    let grid = *s.grid()?;
    if s.disp.is_massless() {
        return Err(Error::SingularMode);
    }
    let mut out = s.clone();
    for eps in Epsilon::BOTH {
        let om = s.support().omegas(&s.disp);
        let c: Vec<_> = s.component(eps).samples.iter().zip(&om).map(|(v, w)| *v / w.sqrt()).collect();
        guard_edges(&grid, &c)?;
        let xc = position_apply_component(&grid, &c, eps, axis);
        out.component_mut(eps).samples = xc.iter().zip(&om).map(|(v, w)| *v * w.sqrt()).collect();
    }
    Ok(out)
}

/// Chain-rule expansion ε·(i∇_k − i k/(2ω²)) of the Newton-Wigner operator.
pub fn nw_expanded<T: Real>(s: &KgState<T>, axis: usize) -> Result<KgState<T>> {
    let grid = *s.grid()?;
    let mut out = position_apply(s, axis)?;
    let half = T::lit(0.5);
    for eps in Epsilon::BOTH {
        let e: T = eps.sign();
        let src = &s.component(eps).samples;
        let dst = &mut out.component_mut(eps).samples;
        for (i, (d, c)) in dst.iter_mut().zip(src).enumerate() {
            let k = grid.k_at(i);
            let corr = half * k[axis] / s.disp.omega_sq(&k);
            *d = *d - Complex::new(T::zero(), e * corr) * *c;
        }
    }
    Ok(out)
}

/// max_a ‖NW_a ψ − expanded_a ψ‖_∞ / ‖expanded_a ψ‖_∞.
pub fn nw_identity_residual<T: Real>(s: &KgState<T>) -> Result<T> {
    let mut worst = T::zero();
    for axis in 0..3 {
        let a = nw_apply(s, axis)?;
        let b = nw_expanded(s, axis)?;
        let mut diff = T::zero();
        let mut scale = T::zero();
        for eps in Epsilon::BOTH {
            for (u, v) in a.component(eps).samples.iter().zip(&b.component(eps).samples) {
                diff = diff.max((*u - *v).norm());
                scale = scale.max(v.norm());
            }
        }
        if scale > T::zero() {
            worst = worst.max(diff / scale);
        }
    }
    Ok(worst)
}

/// Newton-Wigner position expectation under the covariant product.
pub fn nw_expectation<T: Real>(s: &KgState<T>) -> Result<Vec3<T>> {
    let norm = squared_norm(s);
    if !(norm > T::zero()) {
        return Err(Error::ZeroNorm);
    }
    let w = s.support().covariant_weights(&s.disp);
    let mut out = [T::zero(); 3];
    for (a, o) in out.iter_mut().enumerate() {
        let xs = nw_apply(s, a)?;
        let mut acc = Complex::new(T::zero(), T::zero());
        for eps in Epsilon::BOTH {
            for ((wi, u), v) in w.iter().zip(&s.component(eps).samples).zip(&xs.component(eps).samples) {
                acc = acc + u.conj() * *v * *wi;
            }
        }
        *o = acc.re / norm;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::Dispersion;
    use crate::vec3::{dot, norm_sqr};

    fn packet(x0: Vec3<f64>) -> KgState<f64> {
        let g = GridSpec::new(32, 0.4).unwrap();
        let d = Dispersion::new(1.0).unwrap();
        KgState::from_fns(
            g,
            d,
            |k| Complex::from_polar((-norm_sqr(k) / 2.0).exp(), -dot(k, &x0)),
            |_| Complex::new(0.0, 0.0),
        )
    }

    #[test]
    fn expectation_recovers_center() {
        let x0 = [1.0, -2.0, 0.5];
        let e = position_expectation(&packet(x0)).unwrap();
        for a in 0..3 {
            assert!((e[a] - x0[a]).abs() < 1e-9, "{e:?}");
        }
    }

    #[test]
    fn edge_guard_trips() {
        let g = GridSpec::new(8, 1.0).unwrap();
        let d = Dispersion::new(1.0).unwrap();
        let s = KgState::from_fns(g, d, |_| Complex::new(1.0, 0.0), |_| Complex::new(0.0, 0.0));
        assert!(matches!(position_expectation(&s), Err(Error::EdgeMass { .. })));
    }
}
