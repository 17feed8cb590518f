//! Fidelity of continuous-variable single-mode quantum teleportation
//! through lossy channels.
//!
//! The crate models the standard protocol in which a two-mode squeezed
//! vacuum is distributed to the sender and receiver through absorbing
//! arms. It provides
//!
//! - exact single-mode Gaussian Wigner algebra, including the averaged
//!   teleportation map and the overlap functional ([`gaussian`]);
//! - the shared entangled state after transmission and the channel noise
//!   parameters `sigma`, `sigma_inf` and the matched gain `|T2/T1|`
//!   ([`channel`]);
//! - closed-form teleported states and fidelities for squeezed coherent
//!   and number states ([`teleport`]);
//! - the conditional measurement layer and a seeded Monte-Carlo
//!   reconstruction of the averaged output ([`measurement`]);
//! - a brute-force grid oracle that certifies every closed form by direct
//!   quadrature ([`grid`]);
//! - gain and source-placement optimizers, regularized average fidelity
//!   and maximum-distance estimates ([`limits`]).
//!
//! All numerics are generic over the floating-point type through
//! [`scalar::Scalar`]; the `*64` aliases below fix `f64`, which is what
//! the command-line tool and the test suite use.

// `!(x > 0)` guards are negated on purpose: NaN must fall into the error
// branch, which `x <= 0` would let through.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod channel;
pub mod error;
pub mod gaussian;
pub mod grid;
pub mod limits;
pub mod measurement;
pub mod scalar;
pub mod special;
pub mod teleport;

pub use channel::{thermal_occupation, ChannelParams, EntangledState};
pub use error::{Error, Result};
pub use gaussian::GaussianWigner;
pub use grid::{
    auto_grid, convolve_teleport, fidelity_grid, overlap as grid_overlap, rasterize_gaussian,
    rasterize_state, GridSpec, GridWigner,
};
pub use limits::{
    average_fidelity, classical_level, fidelity_at_gain, fidelity_at_position, max_distance,
    optimal_lambda_vs_ncoh, optimize_lambda, optimize_source_position, AverageFidelitySpec,
    NoiseBudget, Squeezing,
};
pub use measurement::{
    conditional_state, monte_carlo_output, outcome_distribution, MonteCarloEstimate,
    OutcomeDistribution,
};
pub use scalar::Scalar;
pub use teleport::{
    classical_sigma, fidelity, fidelity_fock, fidelity_numeric, fidelity_squeezed,
    output_state_fock, output_state_gaussian, FidelityReport, FockTeleported, InputState,
    TeleportSetting, MAX_FOCK,
};

/// `f64` specializations of the core types.
pub type GaussianWigner64 = GaussianWigner<f64>;
pub type ChannelParams64 = ChannelParams<f64>;
pub type EntangledState64 = EntangledState<f64>;
pub type InputState64 = InputState<f64>;
pub type TeleportSetting64 = TeleportSetting<f64>;
pub type FidelityReport64 = FidelityReport<f64>;
pub type GridWigner64 = GridWigner<f64>;
pub type OutcomeDistribution64 = OutcomeDistribution<f64>;
pub type MonteCarloEstimate64 = MonteCarloEstimate<f64>;
pub type NoiseBudget64 = NoiseBudget<f64>;

/// `f32` specializations; usable for quick scans at reduced accuracy.
pub type GaussianWigner32 = GaussianWigner<f32>;
pub type ChannelParams32 = ChannelParams<f32>;
pub type InputState32 = InputState<f32>;
pub type TeleportSetting32 = TeleportSetting<f32>;
