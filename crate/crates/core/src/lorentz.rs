//! Boosts of on-shell momenta and of scalar amplitude profiles, spacelike
//! hyperplanes, and the quadrature check of scalar-product invariance.

use crate::error::{Error, Result};
use crate::spectral::{Dispersion, Epsilon};
use crate::vec3::{dot, norm, Vec3};
use crate::Real;
use num_complex::Complex;
use rayon::prelude::*;
use serde::Serialize;
use std::sync::Arc;

/// Pure boost with rapidity η along a unit axis (β = tanh η).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Boost<T> {
    rapidity: T,
    axis: Vec3<T>,
}

impl<T: Real> Boost<T> {
    pub fn new(rapidity: T, axis: Vec3<T>) -> Result<Self> {
        let n = norm(&axis);
        if !(n > T::zero()) {
            return Err(Error::ZeroVector);
        }
        if !rapidity.is_finite() {
            return Err(Error::InvalidParameter(format!("rapidity must be finite, got {rapidity}")));
        }
        Ok(Self { rapidity, axis: [axis[0] / n, axis[1] / n, axis[2] / n] })
    }

    pub fn identity() -> Self {
        Self { rapidity: T::zero(), axis: [T::zero(), T::zero(), T::one()] }
    }

    pub fn rapidity(&self) -> T {
        self.rapidity
    }

    pub fn axis(&self) -> Vec3<T> {
        self.axis
    }

    pub fn beta(&self) -> T {
        self.rapidity.tanh()
    }

    pub fn gamma(&self) -> T {
        self.rapidity.cosh()
    }

    pub fn inverse(&self) -> Self {
        Self { rapidity: -self.rapidity, axis: self.axis }
    }

    /// Compose with a boost along the same axis; rapidities add.
    pub fn then_collinear(&self, other: &Self) -> Result<Self> {
        let d = dot(&self.axis, &other.axis);
        if (d.abs() - T::one()).abs() > T::lit(1e-12) {
            return Err(Error::InvalidParameter("boost axes are not collinear".into()));
        }
        Ok(Self { rapidity: self.rapidity + d * other.rapidity, axis: self.axis })
    }

    /// Λ acting on a contravariant four-vector (x⁰, x).
    pub fn apply_four(&self, x: &[T; 4]) -> [T; 4] {
        let (ch, sh) = (self.rapidity.cosh(), self.rapidity.sinh());
        let par = self.axis[0] * x[1] + self.axis[1] * x[2] + self.axis[2] * x[3];
        let t = ch * x[0] - sh * par;
        let par_new = ch * par - sh * x[0];
        let mut out = [t, x[1], x[2], x[3]];
        for d in 0..3 {
            out[d + 1] = out[d + 1] + (par_new - par) * self.axis[d];
        }
        out
    }
}

/// Boost the on-shell four-momentum (εω, k): returns (k', ω') with
/// ω' = γ(ω − εβk∥), k'∥ = γ(k∥ − εβω), transverse parts unchanged.
pub fn boost_k<T: Real>(b: &Boost<T>, disp: &Dispersion<T>, k: &Vec3<T>, eps: Epsilon) -> (Vec3<T>, T) {
    let e: T = eps.sign();
    let w = disp.omega(k);
    let x = b.apply_four(&[e * w, k[0], k[1], k[2]]);
    ([x[1], x[2], x[3]], e * x[0])
}

type ProfileFn<T> = Arc<dyn Fn(&Vec3<T>) -> Complex<T> + Send + Sync>;

/// Closed-form amplitude profile k ↦ π^ε(k) for both frequency signs.
#[derive(Clone)]
pub struct ScalarProfile<T> {
    pub disp: Dispersion<T>,
    plus: Option<ProfileFn<T>>,
    minus: Option<ProfileFn<T>>,
}

impl<T: Real> std::fmt::Debug for ScalarProfile<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ScalarProfile")
            .field("disp", &self.disp)
            .field("plus", &self.plus.is_some())
            .field("minus", &self.minus.is_some())
            .finish()
    }
}

impl<T: Real> ScalarProfile<T> {
    pub fn new(disp: Dispersion<T>) -> Self {
        Self { disp, plus: None, minus: None }
    }

    pub fn with(mut self, eps: Epsilon, f: impl Fn(&Vec3<T>) -> Complex<T> + Send + Sync + 'static) -> Self {
        let f: ProfileFn<T> = Arc::new(f);
        match eps {
            Epsilon::Plus => self.plus = Some(f),
            Epsilon::Minus => self.minus = Some(f),
        }
        self
    }

    /// Gaussian e^{−|k − k₀|²/(2σ²)} times e^{−ik·x₀} in one sector.
    pub fn gaussian(disp: Dispersion<T>, eps: Epsilon, k0: Vec3<T>, sigma: T, x0: Vec3<T>) -> Self {
        Self::new(disp).with(eps, move |k| {
            let d = [k[0] - k0[0], k[1] - k0[1], k[2] - k0[2]];
            let amp = (-dot(&d, &d) / (T::lit(2.0) * sigma * sigma)).exp();
            Complex::from_polar(amp, -dot(k, &x0))
        })
    }

    pub fn eval(&self, eps: Epsilon, k: &Vec3<T>) -> Complex<T> {
        let f = match eps {
            Epsilon::Plus => &self.plus,
            Epsilon::Minus => &self.minus,
        };
        f.as_ref().map_or(Complex::new(T::zero(), T::zero()), |f| f(k))
    }

    pub fn has(&self, eps: Epsilon) -> bool {
        match eps {
            Epsilon::Plus => self.plus.is_some(),
            Epsilon::Minus => self.minus.is_some(),
        }
    }
}

/// π'^ε(k) = π^ε(boost_k(b⁻¹, k)): scalars transform by argument
/// substitution.
pub fn boost_scalar_state<T: Real>(b: &Boost<T>, s: &ScalarProfile<T>) -> ScalarProfile<T> {
    let inv = b.inverse();
    let disp = s.disp;
    let mut out = ScalarProfile::new(disp);
    for eps in Epsilon::BOTH {
        let src = match eps {
            Epsilon::Plus => s.plus.clone(),
            Epsilon::Minus => s.minus.clone(),
        };
        if let Some(f) = src {
            out = out.with(eps, move |k| f(&boost_k(&inv, &disp, k, eps).0));
        }
    }
    out
}

/// Cartesian product Gauss-Legendre rule on the cube [−L, L]³.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoxQuadrature {
    pub half_width: f64,
    pub panels: usize,
    pub order: usize,
}

impl BoxQuadrature {
    pub fn refined(&self) -> Self {
        Self { panels: 2 * self.panels, ..*self }
    }

    fn nodes<T: Real>(&self) -> Vec<(T, T)> {
        crate::spectral::composite_gauss_legendre(-self.half_width, self.half_width, self.panels, self.order)
            .into_iter()
            .map(|(x, w)| (T::lit(x), T::lit(w)))
            .collect()
    }
}

impl Default for BoxQuadrature {
    fn default() -> Self {
        Self { half_width: 10.0, panels: 10, order: 12 }
    }
}

/// Σ_ε ∫dk/((2π)³2ω)·conj(π₁^ε)π₂^ε by product quadrature.
pub fn profile_scalar_product<T: Real>(a: &ScalarProfile<T>, b: &ScalarProfile<T>, q: &BoxQuadrature) -> Complex<T> {
    let nodes = q.nodes::<T>();
    let disp = a.disp;
    let c = T::two_pi_cubed() * T::lit(2.0);
    let mut total = Complex::new(T::zero(), T::zero());
    for eps in Epsilon::BOTH {
        if !(a.has(eps) && b.has(eps)) {
            continue;
        }
        let part = nodes
            .par_iter()
            .map(|&(x, wx)| {
                let mut acc = Complex::new(T::zero(), T::zero());
                for &(y, wy) in &nodes {
                    for &(z, wz) in &nodes {
                        let k = [x, y, z];
                        let w = wx * wy * wz / (c * disp.omega(&k));
                        acc = acc + a.eval(eps, &k).conj() * b.eval(eps, &k) * w;
                    }
                }
                acc
            })
            .collect::<Vec<_>>()
            .into_iter()
            .fold(Complex::new(T::zero(), T::zero()), |u, v| u + v);
        total = total + part;
    }
    total
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct InvarianceReport {
    pub rapidity: f64,
    pub axis: [f64; 3],
    pub original: [f64; 2],
    pub boosted: [f64; 2],
    pub rel_err: f64,
    /// Largest change of either product when the panel width is halved,
    /// relative to |original|.
    pub halving_drift: f64,
    pub converged: bool,
}

/// Compare the scalar product of two profiles before and after the boost.
pub fn invariance_check<T: Real>(
    b: &Boost<T>,
    s1: &ScalarProfile<T>,
    s2: &ScalarProfile<T>,
    q: &BoxQuadrature,
) -> InvarianceReport {
    let (b1, b2) = (boost_scalar_state(b, s1), boost_scalar_state(b, s2));
    let fine = q.refined();
    let o_c = profile_scalar_product(s1, s2, q);
    let b_c = profile_scalar_product(&b1, &b2, q);
    let o_f = profile_scalar_product(s1, s2, &fine);
    let b_f = profile_scalar_product(&b1, &b2, &fine);
    let f = |z: Complex<T>| [z.re.to_f64_lossy(), z.im.to_f64_lossy()];
    let scale = o_f.norm().to_f64_lossy();
    let rel = |d: Complex<T>| {
        let d = d.norm().to_f64_lossy();
        if scale > 0.0 {
            d / scale
        } else {
            d
        }
    };
    let drift = rel(o_f - o_c).max(rel(b_f - b_c));
    if drift >= 1e-8 {
        log::warn!("scalar-product quadrature not converged: halving drift {drift:e}");
    }
    let axis = b.axis();
    InvarianceReport {
        rapidity: b.rapidity().to_f64_lossy(),
        axis: [axis[0].to_f64_lossy(), axis[1].to_f64_lossy(), axis[2].to_f64_lossy()],
        original: f(o_f),
        boosted: f(b_f),
        rel_err: rel(b_f - o_f),
        halving_drift: drift,
        converged: drift < 1e-8,
    }
}

/// Spacelike hyperplane x_μ n^μ = ct₀ with future-timelike unit normal
/// (metric signature +−−−).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Hyperplane<T> {
    n: [T; 4],
    offset: T,
}

impl<T: Real> Hyperplane<T> {
    pub fn new(n: [T; 4], offset: T) -> Result<Self> {
        let nn = n[0] * n[0] - n[1] * n[1] - n[2] * n[2] - n[3] * n[3];
        if !(n[0] > T::zero()) || (nn - T::one()).abs() > T::lit(1e-12) {
            return Err(Error::InvalidParameter("hyperplane normal must be future-timelike with n·n = 1".into()));
        }
        Ok(Self { n, offset })
    }

    /// The plane t' = ct₀ of the observer boosted by `b`, in the original
    /// coordinates.
    pub fn simultaneity(b: &Boost<T>, ct0: T) -> Self {
        let g = b.gamma();
        let gb = g * b.beta();
        let a = b.axis();
        Self { n: [g, gb * a[0], gb * a[1], gb * a[2]], offset: ct0 }
    }

    pub fn normal(&self) -> [T; 4] {
        self.n
    }

    pub fn offset(&self) -> T {
        self.offset
    }

    /// x_μ n^μ − ct₀.
    pub fn signed_distance(&self, x: &[T; 4]) -> T {
        x[0] * self.n[0] - x[1] * self.n[1] - x[2] * self.n[2] - x[3] * self.n[3] - self.offset
    }

    /// The boost whose rest frame has this plane as a simultaneity slice.
    pub fn observer(&self) -> Boost<T> {
        let sp = [self.n[1], self.n[2], self.n[3]];
        let s = norm(&sp);
        if s == T::zero() {
            return Boost::identity();
        }
        Boost { rapidity: self.n[0].acosh(), axis: [sp[0] / s, sp[1] / s, sp[2] / s] }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_and_doppler() {
        let d = Dispersion::massless();
        let b0 = Boost::new(0.0f64, [0.0, 0.0, 1.0]).unwrap();
        let k = [0.3, -0.2, 1.1];
        let (k1, w1) = boost_k(&b0, &d, &k, Epsilon::Plus);
        assert_eq!(k1, k);
        assert!((w1 - d.omega(&k)).abs() < 1e-15);
        let b = Boost::new(0.7f64, [1.0, 0.0, 0.0]).unwrap();
        let (_, w) = boost_k(&b, &d, &[2.0, 0.0, 0.0], Epsilon::Plus);
        assert!((w - 2.0 * (-0.7f64).exp()).abs() < 1e-14);
    }

    #[test]
    fn on_shell_and_group_law() {
        let d = Dispersion::new(1.3f64).unwrap();
        let b = Boost::new(0.4, [1.0, 2.0, -1.0]).unwrap();
        for eps in Epsilon::BOTH {
            let (k, w) = boost_k(&b, &d, &[0.5, -1.0, 2.0], eps);
            assert!((w * w - dot(&k, &k) - 1.69).abs() < 1e-12);
            assert!(w > 0.0);
        }
        let b2 = b.then_collinear(&b.inverse()).unwrap();
        assert!(b2.rapidity().abs() < 1e-15);
    }

    #[test]
    fn simultaneity_plane_matches_boost() {
        let b = Boost::new(0.6f64, [0.0, 1.0, 0.0]).unwrap();
        let p = Hyperplane::simultaneity(&b, 2.0);
        assert!(Hyperplane::new(p.normal(), 2.0).is_ok());
        // an event with t' = 2 lies on the plane
        let ev = b.inverse().apply_four(&[2.0, 0.4, -3.0, 1.0]);
        assert!(p.signed_distance(&ev).abs() < 1e-12);
        let o = p.observer();
        assert!((o.rapidity() - 0.6).abs() < 1e-12);
    }
}
