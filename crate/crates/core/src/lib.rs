//! Entanglement of two-mode photon states in quadrature variables.
//!
//! States are built in the Fock basis ([`states`]), mapped to wave functions
//! `Psi(x, y)` of the two quadratures through oscillator eigenfunctions
//! ([`hermite`]), and their Schmidt parameter `K = 1 / sum lambda_n^2` is
//! computed twice: from the coefficients ([`analytic`]) and from an SVD of the
//! sampled wave function ([`numeric`]).

pub mod analytic;
pub mod error;
pub mod export;
pub mod format;
pub mod hermite;
pub mod numeric;
pub mod pipeline;
pub mod statefile;
pub mod states;

pub use analytic::{
    analytic_report, analytic_spectrum, k_qutrit_polarization, k_qutrit_quadrature, k_single_photon,
    k_squeezed_closed_form, photons_squeezed_closed_form, schmidt_k, EntanglementReport, SchmidtSpectrum,
    Source,
};
pub use error::{Error, Result};
pub use hermite::{eval_psi, eval_psi_batch, make_grid, GridKind, GridSpec, OscillatorIndex};
pub use numeric::{
    k_numeric, numeric_schmidt, reconstruct, sample_wavefunction, DiscretizedSchmidtModes, WaveFunctionSample,
    DEFAULT_LAMBDA_FLOOR,
};
pub use pipeline::{analyze, run_numeric, NumericConfig, NumericRun};
pub use statefile::StateSpec;
pub use states::{
    make_diagonal, make_product, make_qutrit, make_single_photon, make_squeezed_vacuum, make_stationary,
    rotate_basis, stationary_from_product, total_photon_number, ComplexCoefficient, Normalization,
    SqueezeParams, TwoModeState,
};

pub use num_complex::Complex64;
