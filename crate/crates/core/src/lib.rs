//! Simulation of periodic Turing-machine implementations observed at half a
//! machine cycle, with the statistical and complexity tools built on top.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod complexity;
pub mod cycle;
pub mod ensemble;
pub mod error;
pub mod library;
pub mod machine;
pub mod packing;
pub mod rng;
pub mod runner;
pub mod scalar;
pub mod schrodinger;
pub mod spectral;

pub use cycle::{build_alpha_cycle, verify_cycle, CycleReport, CycleSource, LabeledCycle, Phase};
pub use error::{Error, Result};
pub use machine::{run, step, Configuration, Move, ResultValue, StateId, SymbolId, TmSpec, Trace};
pub use scalar::Scalar;
pub use spectral::{
    eigenbasis, halfstep_profile_aperiodic, halfstep_profile_periodic, minimal_periodic_spectrum,
    nu_of, overlap_at, AmplitudeProfile, OrbitSpectrum, Period,
};

/// Requested or achieved window fraction, kept exact.
pub type Alpha = num_rational::Ratio<u64>;
pub type Spectrum = OrbitSpectrum<f64>;
pub type Profile = AmplitudeProfile<f64>;
pub type Spectrum32 = OrbitSpectrum<f32>;
pub type Profile32 = AmplitudeProfile<f32>;
