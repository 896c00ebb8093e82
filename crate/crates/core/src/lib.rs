//! Biorthogonal relativistic wave mechanics on spectral grids.

pub mod emission;
pub mod error;
pub mod io;
pub mod kg;
pub mod lorentz;
pub mod photon;
pub mod random;
pub mod scalar;
pub mod spectral;
pub mod vec3;

pub use error::{Error, Result};
pub use scalar::{lit, Real};
pub use spectral::{Dispersion, Epsilon, GridSpec, Helicity, SpectralField, SphericalQuadrature, Support};

pub type GridSpec64 = GridSpec<f64>;
pub type Dispersion64 = Dispersion<f64>;
pub type SpectralField64 = SpectralField<f64>;
pub type SphericalQuadrature64 = SphericalQuadrature<f64>;
pub type GridSpec32 = GridSpec<f32>;
pub type SpectralField32 = SpectralField<f32>;
pub type KgState64 = kg::KgState<f64>;
pub type KgState32 = kg::KgState<f32>;
pub type PhotonState64 = photon::PhotonState<f64>;
pub type EmissionModel64 = emission::EmissionModel<f64>;
