use super::grid::GridSpec;
use crate::error::{Error, Result};
use crate::vec3::{norm_sqr, Vec3};
use crate::Real;
use serde::{Deserialize, Serialize};

/// Relativistic dispersion ω(k) = sqrt(|k|² + m²) in natural units.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Dispersion<T> {
    mass: T,
}

impl<T: Real> Dispersion<T> {
    pub fn new(mass: T) -> Result<Self> {
        if !(mass >= T::zero()) || !mass.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "mass must be finite and nonnegative, got {mass}"
            )));
        }
        Ok(Self { mass })
    }

    pub fn massless() -> Self {
        Self { mass: T::zero() }
    }

    #[inline]
    pub fn mass(&self) -> T {
        self.mass
    }

    #[inline]
    pub fn is_massless(&self) -> bool {
        self.mass == T::zero()
    }

    #[inline]
    pub fn omega(&self, k: &Vec3<T>) -> T {
        self.omega_sq(k).sqrt()
    }

    #[inline]
    pub fn omega_sq(&self, k: &Vec3<T>) -> T {
        norm_sqr(k) + self.mass * self.mass
    }

    /// The massless k = 0 mode, where 1/ω has no finite value.
    #[inline]
    pub fn is_singular(&self, k: &Vec3<T>) -> bool {
        self.is_massless() && norm_sqr(k) == T::zero()
    }

    /// Invariant measure weight `measure / ((2π)³ 2ω)` for a node carrying
    /// the given momentum-space volume.
    pub fn covariant_measure(&self, measure: T, k: &Vec3<T>) -> Result<T> {
        if self.is_singular(k) {
            return Err(Error::SingularMode);
        }
        Ok(measure / (T::two_pi_cubed() * T::lit(2.0) * self.omega(k)))
    }

    /// Discrete weight `dk³/((2π)³ 2ω)` for the grid sample at `k`.
    pub fn covariant_weight(&self, grid: &GridSpec<T>, k: &Vec3<T>) -> Result<T> {
        self.covariant_measure(grid.cell_k(), k)
    }
}

/// Free-function form of [`Dispersion::omega`].
pub fn omega<T: Real>(disp: &Dispersion<T>, k: &Vec3<T>) -> T {
    disp.omega(k)
}

/// Free-function form of [`Dispersion::covariant_weight`].
pub fn covariant_weight<T: Real>(disp: &Dispersion<T>, grid: &GridSpec<T>, k: &Vec3<T>) -> Result<T> {
    disp.covariant_weight(grid, k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn omega_examples() {
        let d0 = Dispersion::new(0.0f64).unwrap();
        assert_eq!(d0.omega(&[3.0, 4.0, 0.0]), 5.0);
        let d2 = Dispersion::new(2.0f64).unwrap();
        assert_eq!(d2.omega(&[0.0; 3]), 2.0);
        let d1 = Dispersion::new(1.0f64).unwrap();
        assert_eq!(d1.omega(&[1.0, 1.0, 1.0]), 2.0);
    }

    #[test]
    fn rejects_negative_mass() {
        assert!(Dispersion::new(-1.0f64).is_err());
        assert!(Dispersion::new(f64::NAN).is_err());
    }

    #[test]
    fn weight_examples() {
        let g = GridSpec::new(8, 0.1f64).unwrap();
        let d1 = Dispersion::new(1.0).unwrap();
        let w = covariant_weight(&d1, &g, &[0.0; 3]).unwrap();
        let expect = 0.001 / ((2.0 * PI).powi(3) * 2.0);
        assert!((w - expect).abs() < 1e-18);
        let d0 = Dispersion::<f64>::massless();
        assert!(matches!(covariant_weight(&d0, &g, &[0.0; 3]), Err(Error::SingularMode)));
    }

    #[test]
    fn weight_is_even() {
        let g = GridSpec::new(8, 0.37f64).unwrap();
        let d = Dispersion::new(0.0).unwrap();
        for i in 0..g.len() {
            let k = g.k_at(i);
            if d.is_singular(&k) {
                continue;
            }
            let mk = [-k[0], -k[1], -k[2]];
            assert_eq!(d.covariant_weight(&g, &k).unwrap(), d.covariant_weight(&g, &mk).unwrap());
        }
    }

    #[test]
    fn omega_bounded_below_by_mass() {
        let d = Dispersion::new(0.7f64).unwrap();
        let mut prev = 0.0;
        for i in 0..50 {
            let kk = i as f64 * 0.1;
            let w = d.omega(&[kk, 0.0, 0.0]);
            assert!(w >= 0.7);
            if i > 0 {
                assert!(w > prev);
            }
            prev = w;
        }
    }
}
