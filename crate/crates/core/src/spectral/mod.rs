//! Momentum grids, quadratures, the dispersion relation and spectral
//! transforms shared by the scalar and photon sectors.

pub mod dispersion;
pub mod fft;
pub mod field;
pub mod grid;
pub mod quadrature;
pub mod transform;

pub use dispersion::{covariant_weight, omega, Dispersion};
pub use fft::CenteredFft;
pub use field::{Epsilon, Helicity, SpectralField, Support};
pub use grid::GridSpec;
pub use quadrature::{composite_gauss_legendre, gauss_legendre, SphericalQuadrature};
pub use transform::{
    analyze, apply_power, edge_fraction, position_multiply, synthesize, synthesize_at, synthesize_with,
};
