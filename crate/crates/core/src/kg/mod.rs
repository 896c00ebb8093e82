//! Klein-Gordon one-particle states in the biorthogonal formulation.

pub mod causality;
pub mod current;
pub mod density;
pub mod position;
pub mod state;

pub use causality::{causality_probe, default_radius, localized_gaussian, CausalityMode, CausalityReport};
pub use current::{
    bilinear_current, current_biorthogonal, current_conventional, field, scalar_product_config, FourCurrentSamples, Jet,
};
pub use density::{
    position_eigenvector, probability_density, reconstruct_from_wavefunctions, wavefunction, ProbabilityDensity,
};
pub use position::{
    nw_apply, nw_expanded, nw_expectation, nw_identity_residual, position_apply, position_expectation,
    position_expectation_complex, EDGE_LIMIT,
};
pub use state::{conjugate_amplitudes, dual_norm, kg_scalar_product, squared_norm, KgState};
