//! Transverse photons in the Coulomb gauge: helicity frames, biorthogonal
//! position bases, densities, the fixed-frame position operator and
//! two-photon amplitudes.

pub mod current;
pub mod density;
pub mod helicity;
pub mod position;
pub mod state;
pub mod two_photon;

pub use current::{photon_current, vector_potential};
pub use density::{
    photon_position_eigenvector, photon_probability_density, photon_wavefunction, photon_wavefunction_at,
    reconstruct_photon, spectral_divergence, PhotonDensity, VectorField,
};
pub use helicity::{
    closed_form_projector, helicity_triad, helicity_vector_or_zero, transverse_delta_check, transverse_projector,
    HelicityTriad, Matrix3, POLAR_TOLERANCE,
};
pub use position::{photon_commutator_residual, photon_position_apply, photon_position_expectation};
pub use state::{
    flat_norm, is_masked, landau_peierls, momentum_probability, photon_dual_norm, photon_dual_product,
    photon_scalar_product, photon_squared_norm, PhotonState,
};
pub use two_photon::{symmetrization_factor, two_photon_amplitude, TwoPhotonField};
