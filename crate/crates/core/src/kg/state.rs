use crate::error::{Error, Result};
use crate::spectral::{Dispersion, Epsilon, GridSpec, SpectralField, Support};
use crate::vec3::Vec3;
use crate::Real;
use num_complex::Complex;

/// Klein-Gordon one-particle state: the ε = + and ε = − momentum
/// amplitudes π^ε(k) together with their dispersion.
#[derive(Debug, Clone)]
pub struct KgState<T> {
    pub plus: SpectralField<T>,
    pub minus: SpectralField<T>,
    pub disp: Dispersion<T>,
}

impl<T: Real> PartialEq for KgState<T> {
    fn eq(&self, other: &Self) -> bool {
        self.plus == other.plus && self.minus == other.minus && self.disp == other.disp
    }
}

impl<T: Real> KgState<T> {
    pub fn new(mut plus: SpectralField<T>, mut minus: SpectralField<T>, disp: Dispersion<T>) -> Result<Self> {
        plus.same_shape(&minus)?;
        plus.epsilon = Epsilon::Plus;
        minus.epsilon = Epsilon::Minus;
        plus.enforce_regular(&disp);
        minus.enforce_regular(&disp);
        Ok(Self { plus, minus, disp })
    }

    pub fn zeros(support: impl Into<Support<T>>, disp: Dispersion<T>) -> Self {
        let support = support.into();
        Self {
            plus: SpectralField::zeros(support.clone(), Epsilon::Plus),
            minus: SpectralField::zeros(support, Epsilon::Minus),
            disp,
        }
    }

    pub fn from_fns<F, G>(support: impl Into<Support<T>>, disp: Dispersion<T>, f_plus: F, f_minus: G) -> Self
    where
        F: Fn(&Vec3<T>) -> Complex<T>,
        G: Fn(&Vec3<T>) -> Complex<T>,
    {
        let support = support.into();
        let mut plus = SpectralField::from_fn(support.clone(), Epsilon::Plus, f_plus);
        let mut minus = SpectralField::from_fn(support, Epsilon::Minus, f_minus);
        plus.enforce_regular(&disp);
        minus.enforce_regular(&disp);
        Self { plus, minus, disp }
    }

    /// State with a single nonzero amplitude.
    pub fn single_mode(grid: GridSpec<T>, disp: Dispersion<T>, eps: Epsilon, index: usize, value: Complex<T>) -> Self {
        let mut s = Self::zeros(grid, disp);
        s.component_mut(eps).samples[index] = value;
        s.plus.enforce_regular(&disp);
        s.minus.enforce_regular(&disp);
        s
    }

    pub fn component(&self, eps: Epsilon) -> &SpectralField<T> {
        match eps {
            Epsilon::Plus => &self.plus,
            Epsilon::Minus => &self.minus,
        }
    }

    pub fn component_mut(&mut self, eps: Epsilon) -> &mut SpectralField<T> {
        match eps {
            Epsilon::Plus => &mut self.plus,
            Epsilon::Minus => &mut self.minus,
        }
    }

    pub fn support(&self) -> &Support<T> {
        &self.plus.support
    }

    pub fn grid(&self) -> Result<&GridSpec<T>> {
        self.plus.grid()
    }

    /// Exact free evolution: π^ε(k) → e^{−iεω t}π^ε(k).
    pub fn evolve(&self, t: T) -> Self {
        let mut out = self.clone();
        for eps in Epsilon::BOTH {
            let e: T = eps.sign();
            let f = out.component_mut(eps);
            let sup = f.support.clone();
            for (i, v) in f.samples.iter_mut().enumerate() {
                let w = self.disp.omega(&sup.momentum(i));
                *v = *v * Complex::from_polar(T::one(), -e * w * t);
            }
            f.time_label = f.time_label + t;
        }
        out
    }

    pub fn scale(&self, a: Complex<T>) -> Self {
        Self { plus: self.plus.scale(a), minus: self.minus.scale(a), disp: self.disp }
    }

    /// Keep only the ε component.
    pub fn project(&self, eps: Epsilon) -> Self {
        let mut out = self.clone();
        let other = out.component_mut(eps.flip());
        other.samples.iter_mut().for_each(|v| *v = Complex::new(T::zero(), T::zero()));
        out
    }

    fn compatible(&self, other: &Self) -> Result<()> {
        self.plus.same_shape(&other.plus)?;
        if self.disp != other.disp {
            return Err(Error::InvalidParameter("states carry different dispersions".into()));
        }
        Ok(())
    }

    pub fn combine(&self, a: Complex<T>, other: &Self, b: Complex<T>) -> Result<Self> {
        self.compatible(other)?;
        Ok(Self {
            plus: self.plus.combine(a, &other.plus, b)?,
            minus: self.minus.combine(a, &other.minus, b)?,
            disp: self.disp,
        })
    }
}

/// π_c^ε = ε·π^ε: the k-space form of φ_c = φ⁺ − φ⁻.
pub fn conjugate_amplitudes<T: Real>(s: &KgState<T>) -> KgState<T> {
    KgState { plus: s.plus.clone(), minus: s.minus.scale(Complex::new(-T::one(), T::zero())), disp: s.disp }
}

/// Covariant scalar product Σ_ε Σ_k dk³/((2π)³2ω)·conj(c₁^ε)c₂^ε.
pub fn kg_scalar_product<T: Real>(a: &KgState<T>, b: &KgState<T>) -> Result<Complex<T>> {
    a.compatible(b)?;
    let w = a.support().covariant_weights(&a.disp);
    Ok(weighted_pairing(&w, a, b))
}

/// ⟨ψ|ψ⟩ under the covariant product.
pub fn squared_norm<T: Real>(s: &KgState<T>) -> T {
    let w = s.support().covariant_weights(&s.disp);
    weighted_pairing(&w, s, s).re
}

/// Dual pairing ⟨ψ̃|ψ⟩ = Σ_ε Σ_k dk³/((2π)³2)·|c^ε|², the normalization of
/// the position probability density.
pub fn dual_norm<T: Real>(s: &KgState<T>) -> T {
    let w = s.support().dual_weights();
    weighted_pairing(&w, s, s).re
}

fn weighted_pairing<T: Real>(w: &[T], a: &KgState<T>, b: &KgState<T>) -> Complex<T> {
    let mut acc = Complex::new(T::zero(), T::zero());
    for eps in Epsilon::BOTH {
        let (x, y) = (a.component(eps), b.component(eps));
        for ((wi, u), v) in w.iter().zip(&x.samples).zip(&y.samples) {
            acc = acc + u.conj() * *v * *wi;
        }
    }
    acc
}
