use super::helicity::POLAR_TOLERANCE;
use crate::error::{Error, Result};
use crate::spectral::{apply_power, Dispersion, Epsilon, GridSpec, Helicity, SpectralField, Support};
use crate::vec3::{norm, Vec3};
use crate::Real;
use num_complex::Complex;

/// Transverse photon state: amplitudes c_λ^ε(k) for ε ∈ {+, −} and
/// λ ∈ {+1, −1}, indexed `c[ε.index()][λ.index()]`.
#[derive(Debug, Clone)]
pub struct PhotonState<T> {
    pub c: [[SpectralField<T>; 2]; 2],
    pub disp: Dispersion<T>,
}

impl<T: Real> PartialEq for PhotonState<T> {
    fn eq(&self, other: &Self) -> bool {
        self.c == other.c
    }
}

/// True where helicity vectors are undefined: k = 0 or sin θ below the
/// polar tolerance.
pub fn is_masked<T: Real>(k: &Vec3<T>) -> bool {
    let kn = norm(k);
    if kn == T::zero() {
        return true;
    }
    let rho = (k[0] * k[0] + k[1] * k[1]).sqrt();
    rho / kn < T::lit(POLAR_TOLERANCE)
}

impl<T: Real> PhotonState<T> {
    pub fn zeros(support: impl Into<Support<T>>) -> Self {
        let support = support.into();
        let mk = |e: Epsilon, h: Helicity| SpectralField::zeros(support.clone(), e).with_helicity(h);
        Self {
            c: [
                [mk(Epsilon::Plus, Helicity::Plus), mk(Epsilon::Plus, Helicity::Minus)],
                [mk(Epsilon::Minus, Helicity::Plus), mk(Epsilon::Minus, Helicity::Minus)],
            ],
            disp: Dispersion::massless(),
        }
    }

    /// Build from `f(ε, λ, k)`; masked cells are zeroed.
    pub fn from_fn<F>(support: impl Into<Support<T>>, f: F) -> Self
    where
        F: Fn(Epsilon, Helicity, &Vec3<T>) -> Complex<T>,
    {
        let mut s = Self::zeros(support);
        for e in Epsilon::BOTH {
            for h in Helicity::BOTH {
                let field = &mut s.c[e.index()][h.index()];
                let sup = field.support.clone();
                for (i, v) in field.samples.iter_mut().enumerate() {
                    *v = f(e, h, &sup.momentum(i));
                }
            }
        }
        s.apply_mask();
        s
    }

    pub fn component(&self, e: Epsilon, h: Helicity) -> &SpectralField<T> {
        &self.c[e.index()][h.index()]
    }

    pub fn component_mut(&mut self, e: Epsilon, h: Helicity) -> &mut SpectralField<T> {
        &mut self.c[e.index()][h.index()]
    }

    pub fn support(&self) -> &Support<T> {
        &self.c[0][0].support
    }

    pub fn grid(&self) -> Result<&GridSpec<T>> {
        self.c[0][0].grid()
    }

    /// Zero every masked sample; returns how many cells are masked.
    pub fn apply_mask(&mut self) -> usize {
        let sup = self.support().clone();
        let masked: Vec<usize> = (0..sup.len()).filter(|&i| is_masked(&sup.momentum(i))).collect();
        for row in self.c.iter_mut() {
            for f in row.iter_mut() {
                for &i in &masked {
                    f.samples[i] = Complex::new(T::zero(), T::zero());
                }
            }
        }
        masked.len()
    }

    pub fn map<F>(&self, f: F) -> Result<Self>
    where
        F: Fn(&SpectralField<T>) -> Result<SpectralField<T>>,
    {
        let mut out = self.clone();
        for e in 0..2 {
            for h in 0..2 {
                out.c[e][h] = f(&self.c[e][h])?;
            }
        }
        Ok(out)
    }

    pub fn scale(&self, a: Complex<T>) -> Self {
        self.map(|f| Ok(f.scale(a))).expect("scaling cannot fail")
    }

    pub fn evolve(&self, t: T) -> Self {
        let disp = self.disp;
        self.map(|f| {
            let e: T = f.epsilon.sign();
            let sup = f.support.clone();
            let mut g = f.map_indexed(|i, v| v * Complex::from_polar(T::one(), -e * disp.omega(&sup.momentum(i)) * t));
            g.time_label = f.time_label + t;
            Ok(g)
        })
        .expect("evolution cannot fail")
    }

    fn pairing(&self, other: &Self, w: &[T]) -> Result<Complex<T>> {
        let mut acc = Complex::new(T::zero(), T::zero());
        for e in 0..2 {
            for h in 0..2 {
                let (a, b) = (&self.c[e][h], &other.c[e][h]);
                a.same_shape(b)?;
                for ((wi, u), v) in w.iter().zip(&a.samples).zip(&b.samples) {
                    acc = acc + u.conj() * *v * *wi;
                }
            }
        }
        Ok(acc)
    }
}

/// Σ_{ε,λ} Σ_k dk³/((2π)³2ω)·conj(c₁)c₂.
pub fn photon_scalar_product<T: Real>(a: &PhotonState<T>, b: &PhotonState<T>) -> Result<Complex<T>> {
    let w = a.support().covariant_weights(&a.disp);
    a.pairing(b, &w)
}

pub fn photon_squared_norm<T: Real>(s: &PhotonState<T>) -> T {
    photon_scalar_product(s, s).map(|v| v.re).unwrap_or_else(|_| T::zero())
}

/// Σ_{ε,λ} Σ_k dk³/((2π)³2)·conj(c₁)c₂, the dual pairing.
pub fn photon_dual_product<T: Real>(a: &PhotonState<T>, b: &PhotonState<T>) -> Result<Complex<T>> {
    let w = a.support().dual_weights();
    a.pairing(b, &w)
}

pub fn photon_dual_norm<T: Real>(s: &PhotonState<T>) -> T {
    photon_dual_product(s, s).map(|v| v.re).unwrap_or_else(|_| T::zero())
}

/// Momentum-space probabilities p[ε][λ](k) = |c|²/Σ dk³|c|² per unit dk³.
pub fn momentum_probability<T: Real>(s: &PhotonState<T>) -> Result<[[Vec<T>; 2]; 2]> {
    let mut total = T::zero();
    for row in &s.c {
        for f in row {
            total = total + f.flat_norm_sqr();
        }
    }
    if !(total > T::zero()) {
        return Err(Error::ZeroNorm);
    }
    let p = |f: &SpectralField<T>| f.samples.iter().map(|v| v.norm_sqr() / total).collect::<Vec<T>>();
    Ok([[p(&s.c[0][0]), p(&s.c[0][1])], [p(&s.c[1][0]), p(&s.c[1][1])]])
}

/// D^{−1/4} on every component.
pub fn landau_peierls<T: Real>(s: &PhotonState<T>) -> Result<PhotonState<T>> {
    let disp = s.disp;
    s.map(|f| apply_power(&disp, T::lit(-0.25), f))
}

/// Flat sum Σ_{ε,λ} Σ_k dk³|c|².
pub fn flat_norm<T: Real>(s: &PhotonState<T>) -> T {
    s.c.iter().flatten().fold(T::zero(), |a, f| a + f.flat_norm_sqr())
}
