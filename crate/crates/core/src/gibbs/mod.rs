//! Finite-volume Gibbs specifications of truncated interactions and a
//! single-site Metropolis sampler on tori.

pub mod metropolis;
pub mod specification;

pub use metropolis::{
    detailed_balance_check, metropolis_run, metropolis_run_with, metropolis_runs, ChainConfig, ChainState,
    TelemetryRow, RNG_ALGORITHM,
};
pub use specification::{check_rho_bound, conditional_weights, full_support_rho, FiniteSpecification, RhoCheck, MAX_GIBBS_CONFIGS};
