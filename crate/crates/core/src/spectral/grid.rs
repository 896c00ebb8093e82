use crate::error::{Error, Result};
use crate::vec3::Vec3;
use crate::Real;
use serde::{Deserialize, Serialize};

/// Cubic momentum grid with its conjugate position grid.
///
/// Both grids are centered: axis index `m` maps to `(m - n/2)·dk` in
/// momentum and `(m - n/2)·dx` in position, with `dx = 2π/(n·dk)`.
/// Flattened storage is row-major with the z index fastest.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec<T> {
    n: usize,
    dk: T,
}

impl<T: Real> GridSpec<T> {
    pub fn new(n_per_axis: usize, dk: T) -> Result<Self> {
        if n_per_axis < 4 || n_per_axis % 2 != 0 {
            return Err(Error::InvalidGrid(format!(
                "points per axis must be even and at least 4, got {n_per_axis}"
            )));
        }
        if !(dk > T::zero()) || !dk.is_finite() {
            return Err(Error::InvalidGrid(format!("dk must be positive and finite, got {dk}")));
        }
        Ok(Self { n: n_per_axis, dk })
    }

    /// Grid whose position spacing is `dx`.
    pub fn with_dx(n_per_axis: usize, dx: T) -> Result<Self> {
        if !(dx > T::zero()) {
            return Err(Error::InvalidGrid(format!("dx must be positive, got {dx}")));
        }
        Self::new(n_per_axis, T::TAU() / (T::from_count(n_per_axis) * dx))
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn dk(&self) -> T {
        self.dk
    }

    #[inline]
    pub fn dx(&self) -> T {
        T::TAU() / (T::from_count(self.n) * self.dk)
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.n * self.n * self.n
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn cell_k(&self) -> T {
        self.dk * self.dk * self.dk
    }

    pub fn cell_x(&self) -> T {
        let dx = self.dx();
        dx * dx * dx
    }

    /// Side length of the periodic position box.
    pub fn box_length(&self) -> T {
        T::from_count(self.n) * self.dx()
    }

    /// Largest |k| component, attained by the Nyquist index 0.
    pub fn k_max(&self) -> T {
        T::from_count(self.n / 2) * self.dk
    }

    #[inline]
    pub fn flat(&self, ix: usize, iy: usize, iz: usize) -> usize {
        (ix * self.n + iy) * self.n + iz
    }

    #[inline]
    pub fn unflat(&self, i: usize) -> [usize; 3] {
        let n = self.n;
        [i / (n * n), (i / n) % n, i % n]
    }

    #[inline]
    pub fn axis_k(&self, m: usize) -> T {
        (T::from_count(m) - T::from_count(self.n / 2)) * self.dk
    }

    #[inline]
    pub fn axis_x(&self, j: usize) -> T {
        (T::from_count(j) - T::from_count(self.n / 2)) * self.dx()
    }

    #[inline]
    pub fn k_at(&self, i: usize) -> Vec3<T> {
        let [a, b, c] = self.unflat(i);
        [self.axis_k(a), self.axis_k(b), self.axis_k(c)]
    }

    #[inline]
    pub fn x_at(&self, i: usize) -> Vec3<T> {
        let [a, b, c] = self.unflat(i);
        [self.axis_x(a), self.axis_x(b), self.axis_x(c)]
    }

    /// Flat index of the k = 0 sample (also the x = 0 sample).
    pub fn origin(&self) -> usize {
        let h = self.n / 2;
        self.flat(h, h, h)
    }

    /// Flat index of the momentum `-k` for the sample at `i`, with the
    /// Nyquist index mapped onto itself.
    pub fn reflect(&self, i: usize) -> usize {
        let n = self.n;
        let r = |m: usize| (n - m) % n;
        let [a, b, c] = self.unflat(i);
        self.flat(r(a), r(b), r(c))
    }

    /// True if any axis index sits on the outer (Nyquist / wrap) plane.
    pub fn on_boundary(&self, i: usize) -> bool {
        self.unflat(i).iter().any(|&m| m == 0)
    }

    pub fn momenta(&self) -> impl Iterator<Item = Vec3<T>> + '_ {
        (0..self.len()).map(move |i| self.k_at(i))
    }

    pub fn positions(&self) -> impl Iterator<Item = Vec3<T>> + '_ {
        (0..self.len()).map(move |i| self.x_at(i))
    }
}
