use super::dispersion::Dispersion;
use super::grid::GridSpec;
use super::quadrature::SphericalQuadrature;
use crate::error::{Error, Result};
use crate::vec3::Vec3;
use crate::Real;
use num_complex::Complex;
use serde::{Deserialize, Serialize};
use std::sync::Arc;

/// Frequency sign ε: `Plus` for e^{−iωt}, `Minus` for e^{+iωt}.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Epsilon {
    #[serde(rename = "+")]
    Plus,
    #[serde(rename = "-")]
    Minus,
}

impl Epsilon {
    pub const BOTH: [Epsilon; 2] = [Epsilon::Plus, Epsilon::Minus];

    #[inline]
    pub fn sign<T: Real>(self) -> T {
        match self {
            Epsilon::Plus => T::one(),
            Epsilon::Minus => -T::one(),
        }
    }

    #[inline]
    pub fn index(self) -> usize {
        match self {
            Epsilon::Plus => 0,
            Epsilon::Minus => 1,
        }
    }

    pub fn flip(self) -> Self {
        match self {
            Epsilon::Plus => Epsilon::Minus,
            Epsilon::Minus => Epsilon::Plus,
        }
    }
}

/// Photon helicity λ = ±1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Helicity {
    #[serde(rename = "+1")]
    Plus,
    #[serde(rename = "-1")]
    Minus,
}

impl Helicity {
    pub const BOTH: [Helicity; 2] = [Helicity::Plus, Helicity::Minus];

    #[inline]
    pub fn sign<T: Real>(self) -> T {
        match self {
            Helicity::Plus => T::one(),
            Helicity::Minus => -T::one(),
        }
    }

    #[inline]
    pub fn index(self) -> usize {
        match self {
            Helicity::Plus => 0,
            Helicity::Minus => 1,
        }
    }

    pub fn flip(self) -> Self {
        match self {
            Helicity::Plus => Helicity::Minus,
            Helicity::Minus => Helicity::Plus,
        }
    }
}

/// Where the samples of a [`SpectralField`] live.
#[derive(Debug, Clone)]
pub enum Support<T> {
    Grid(GridSpec<T>),
    Sphere(Arc<SphericalQuadrature<T>>),
}

impl<T: Real> PartialEq for Support<T> {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (Support::Grid(a), Support::Grid(b)) => a == b,
            (Support::Sphere(a), Support::Sphere(b)) => Arc::ptr_eq(a, b),
            _ => false,
        }
    }
}

impl<T: Real> From<GridSpec<T>> for Support<T> {
    fn from(g: GridSpec<T>) -> Self {
        Support::Grid(g)
    }
}

impl<T: Real> From<Arc<SphericalQuadrature<T>>> for Support<T> {
    fn from(q: Arc<SphericalQuadrature<T>>) -> Self {
        Support::Sphere(q)
    }
}

impl<T: Real> Support<T> {
    pub fn len(&self) -> usize {
        match self {
            Support::Grid(g) => g.len(),
            Support::Sphere(q) => q.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    #[inline]
    pub fn momentum(&self, i: usize) -> Vec3<T> {
        match self {
            Support::Grid(g) => g.k_at(i),
            Support::Sphere(q) => q.momentum(i),
        }
    }

    /// Momentum-space volume dk³ carried by sample i.
    #[inline]
    pub fn measure(&self, i: usize) -> T {
        match self {
            Support::Grid(g) => g.cell_k(),
            Support::Sphere(q) => q.measure(i),
        }
    }

    pub fn grid(&self) -> Result<&GridSpec<T>> {
        match self {
            Support::Grid(g) => Ok(g),
            Support::Sphere(_) => Err(Error::RequiresGrid),
        }
    }

    /// Covariant weights measure/((2π)³2ω) per sample; the massless
    /// k = 0 sample gets weight zero.
    pub fn covariant_weights(&self, disp: &Dispersion<T>) -> Vec<T> {
        (0..self.len())
            .map(|i| {
                let k = self.momentum(i);
                disp.covariant_measure(self.measure(i), &k).unwrap_or_else(|_| T::zero())
            })
            .collect()
    }

    /// Dual weights measure/((2π)³2), the 1/ω-free counterpart.
    pub fn dual_weights(&self) -> Vec<T> {
        let c = T::two_pi_cubed() * T::lit(2.0);
        (0..self.len()).map(|i| self.measure(i) / c).collect()
    }

    pub fn omegas(&self, disp: &Dispersion<T>) -> Vec<T> {
        (0..self.len()).map(|i| disp.omega(&self.momentum(i))).collect()
    }
}

/// Complex amplitude samples in momentum space with their ε / λ tags.
#[derive(Debug, Clone)]
pub struct SpectralField<T> {
    pub support: Support<T>,
    pub samples: Vec<Complex<T>>,
    pub epsilon: Epsilon,
    pub helicity: Option<Helicity>,
    pub time_label: T,
}

impl<T: Real> PartialEq for SpectralField<T> {
    fn eq(&self, other: &Self) -> bool {
        self.support == other.support
            && self.samples == other.samples
            && self.epsilon == other.epsilon
            && self.helicity == other.helicity
            && self.time_label == other.time_label
    }
}

impl<T: Real> SpectralField<T> {
    pub fn new(support: impl Into<Support<T>>, samples: Vec<Complex<T>>, epsilon: Epsilon) -> Result<Self> {
        let support = support.into();
        if samples.len() != support.len() {
            return Err(Error::ShapeMismatch { expected: support.len(), got: samples.len() });
        }
        Ok(Self { support, samples, epsilon, helicity: None, time_label: T::zero() })
    }

    pub fn zeros(support: impl Into<Support<T>>, epsilon: Epsilon) -> Self {
        let support = support.into();
        let samples = vec![Complex::new(T::zero(), T::zero()); support.len()];
        Self { support, samples, epsilon, helicity: None, time_label: T::zero() }
    }

    pub fn from_fn<F>(support: impl Into<Support<T>>, epsilon: Epsilon, f: F) -> Self
    where
        F: Fn(&Vec3<T>) -> Complex<T>,
    {
        let support = support.into();
        let samples = (0..support.len()).map(|i| f(&support.momentum(i))).collect();
        Self { support, samples, epsilon, helicity: None, time_label: T::zero() }
    }

    pub fn with_helicity(mut self, h: Helicity) -> Self {
        self.helicity = Some(h);
        self
    }

    pub fn with_time(mut self, t: T) -> Self {
        self.time_label = t;
        self
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn grid(&self) -> Result<&GridSpec<T>> {
        self.support.grid()
    }

    /// Zero the massless k = 0 sample (a no-op for massive dispersion).
    pub fn enforce_regular(&mut self, disp: &Dispersion<T>) {
        if !disp.is_massless() {
            return;
        }
        for (i, s) in self.samples.iter_mut().enumerate() {
            if disp.is_singular(&self.support.momentum(i)) {
                *s = Complex::new(T::zero(), T::zero());
            }
        }
    }

    /// Error if a nonzero sample sits on the singular massless mode.
    pub fn check_regular(&self, disp: &Dispersion<T>) -> Result<()> {
        if !disp.is_massless() {
            return Ok(());
        }
        for (i, s) in self.samples.iter().enumerate() {
            if s.norm_sqr() != T::zero() && disp.is_singular(&self.support.momentum(i)) {
                return Err(Error::SingularMode);
            }
        }
        Ok(())
    }

    pub fn same_shape(&self, other: &Self) -> Result<()> {
        if self.support != other.support {
            return Err(Error::SupportMismatch);
        }
        Ok(())
    }

    pub fn scale(&self, a: Complex<T>) -> Self {
        let mut out = self.clone();
        out.samples.iter_mut().for_each(|s| *s = *s * a);
        out
    }

    /// `a·self + b·other`, keeping the tags of `self`.
    pub fn combine(&self, a: Complex<T>, other: &Self, b: Complex<T>) -> Result<Self> {
        self.same_shape(other)?;
        let mut out = self.clone();
        for (o, s) in out.samples.iter_mut().zip(&other.samples) {
            *o = *o * a + *s * b;
        }
        Ok(out)
    }

    pub fn map_indexed<F>(&self, f: F) -> Self
    where
        F: Fn(usize, Complex<T>) -> Complex<T>,
    {
        let mut out = self.clone();
        for (i, s) in out.samples.iter_mut().enumerate() {
            *s = f(i, *s);
        }
        out
    }

    /// Flat sum Σ measure·|c|².
    pub fn flat_norm_sqr(&self) -> T {
        self.samples
            .iter()
            .enumerate()
            .fold(T::zero(), |acc, (i, s)| acc + self.support.measure(i) * s.norm_sqr())
    }

    pub fn max_abs(&self) -> T {
        self.samples.iter().fold(T::zero(), |m, s| m.max(s.norm()))
    }
}
