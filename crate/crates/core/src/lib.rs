//! Covert communication with pinching-antenna systems (PASS).
//!
//! A transmitter feeds dielectric waveguides whose radiating points (pinching
//! antennas, PAs) can be slid along each guide. A legitimate receiver should
//! get the highest rate while a warden with uncertain noise power and an
//! uncertain position stays unable to detect the transmission reliably.
//!
//! * [`detection`]: the warden's error statistics and the beam-gain budget.
//! * [`swsp`]: one waveguide, one PA; closed-form placement plus power search.
//! * [`mwmp`]: several waveguides and PAs; two coupled particle swarms.
//! * [`benchmarks`]: fixed-array and heuristic-PASS reference schemes.
//! * [`harness`]: configuration, Monte Carlo sweeps and output files.
//!
//! Everything up to the harness is generic over [`Real`] (`f32` or `f64`).

// `!(x > 0)` is used on purpose: it also rejects NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod benchmarks;
pub mod channel;
pub mod detection;
pub mod error;
pub mod harness;
pub mod mwmp;
pub mod num;
pub mod scenario;
pub mod swsp;

pub use channel::{
    derive_constants, effective_channel, BeamVector, GridSpec, PassGeometry, PatternGrid, PhysConstants, PinchLayout,
    Vec3,
};
pub use detection::{CovertnessSpec, NoiseUncertainty, OptimalDetection, WillieUncertainty};
pub use error::{Error, Result};
pub use num::{Cx, Real};
pub use scenario::Scenario;

pub type Vec3F64 = Vec3<f64>;
pub type PhysConstantsF64 = PhysConstants<f64>;
pub type PassGeometryF64 = PassGeometry<f64>;
pub type PinchLayoutF64 = PinchLayout<f64>;
pub type BeamVectorF64 = BeamVector<f64>;
pub type ScenarioF64 = Scenario<f64>;
pub type ScenarioF32 = Scenario<f32>;
pub type SwspSolutionF64 = swsp::SwspSolution<f64>;
pub type MwmpSolutionF64 = mwmp::MwmpSolution<f64>;
