//! Capacity of the Gaussian channel `Y = X + S1 + S2 + Z` with state `S1`
//! known at the transmitter (correlated with the input `X`) and state `S2`
//! known at the receiver (correlated with the noise `Z`).
//!
//! The numeric core is generic over [`Scalar`] (`f32` or `f64`); the `*F64`
//! and `*F32` aliases below name the common instantiations.
//!
//! - [`model`]: parameters, derived moments, covariance assembly.
//! - [`gaussian_info`]: entropies and mutual informations, log-det and closed form.
//! - [`capacity`]: achievable rate, optimal `alpha`, converse bound, capacity.
//! - [`optimize`]: golden-section maximization and capacity sweeps.
//! - [`montecarlo`]: sampling oracle for all of the above.

pub mod capacity;
pub mod error;
pub mod gaussian_info;
pub mod matrix;
pub mod model;
pub mod montecarlo;
pub mod optimize;
pub mod scalar;

pub use capacity::{
    alpha_star, capacity_cd, capacity_formula, costa_capacity, rate_rd, upper_bound, Capacity,
    CapacityResult, RateResult, Unit,
};
pub use error::{Error, Result};
pub use gaussian_info::{
    closed_form_entropies, diff_entropy, mutual_info, EntropyTable, EntropyValue,
};
pub use matrix::{CovMatrix, Var};
pub use model::{
    derived_moments, joint_covariance, validate, ChannelParams, DerivedMoments, JointModel,
    RawParams,
};
pub use montecarlo::{
    mc_mutual_info, mc_verify, sample, McEstimate, SampleBlock, VerificationReport,
};
pub use optimize::{
    maximize_scalar, sweep_capacity, Bracket, SweepParameter, SweepPoint, SweepValue,
};
pub use scalar::Scalar;

pub type ChannelParamsF64 = ChannelParams<f64>;
pub type ChannelParamsF32 = ChannelParams<f32>;
pub type RawParamsF64 = RawParams<f64>;
pub type DerivedMomentsF64 = DerivedMoments<f64>;
pub type CovMatrixF64 = CovMatrix<f64>;
pub type CovMatrixF32 = CovMatrix<f32>;
pub type JointModelF64 = JointModel<f64>;
pub type EntropyTableF64 = EntropyTable<f64>;
pub type RateResultF64 = RateResult<f64>;
pub type CapacityResultF64 = CapacityResult<f64>;
pub type SampleBlockF64 = SampleBlock<f64>;
pub type VerificationReportF64 = VerificationReport<f64>;
pub type SweepPointF64 = SweepPoint<f64>;
