//! Monte Carlo simulator for temporal ghost imaging used as an optical
//! encryption channel.
//!
//! A message is encoded as a temporal transmittance `M(t)`. Each shot draws a
//! random reference pattern (the key), passes it through the object into a
//! slow bucket detector (the ciphertext), and feeds both into a correlation
//! accumulator. After `N` shots an estimator recovers `M(t)` and the message
//! is decoded symbol by symbol.
//!
//! The numeric code is generic over [`Scalar`] (`f32`/`f64`); the aliases at
//! the crate root fix the common `f64` instantiation.

pub mod detector;
pub mod error;
pub mod experiment;
pub mod reconstruct;
pub mod rng;
pub mod scalar;
pub mod source;
pub mod temporal;

pub use detector::{
    add_electrical_noise, add_optical_noise, bucket_integrate, calibrate_range, ciphertext,
    click_detect, detect, quantize, spad_click, CalibrationResult, DetectionRecord, DetectorConfig,
    GateProfile, NoiseConfig, NoiseKind, OpticalMode, DEFAULT_CALIBRATION_SHOTS,
};
pub use error::{Result, SimError};
pub use experiment::{
    run_scenario, run_scenario_with, run_sweep, run_sweep_with, DividerMode, ReplicateResult,
    RunReport, Scenario, SweepAxis, SweepSpec,
};
pub use reconstruct::{
    click_channels, ctgi_estimate, dtgi_estimate, qdtgi_estimate, qtgi_estimate,
    CoincidenceHistogram, CorrelationAccumulator, Estimator, Moments, Reconstruction,
};
pub use rng::{RandomStream, StreamLabel};
pub use scalar::{Field, Scalar};
pub use source::{
    sample_classical_pulse, sample_quantum_pulse, IntensityDistribution, PairEvent,
    PulseRealization, PulseSource, QuantumConfig, SourceConfig,
};
pub use temporal::{
    check_divider_delta, dar, decode_reconstruction, default_dividers, encode_message, mse,
    normalize_minmax, randomized_dividers, DividerSet, Message, Metrics, Normalized,
    TemporalObject, TimeGrid,
};

/// Double-precision instantiations.
pub type Real = f64;
pub type Object = TemporalObject<Real>;
pub type Pulse = PulseRealization<Real>;
pub type Accumulator = CorrelationAccumulator<Real>;
pub type Calibration = CalibrationResult<Real>;
pub type Detection = DetectionRecord<Real>;
pub type Recon = Reconstruction<Real>;

/// Single-precision instantiations.
pub type Object32 = TemporalObject<f32>;
pub type Pulse32 = PulseRealization<f32>;
pub type Accumulator32 = CorrelationAccumulator<f32>;
pub type Recon32 = Reconstruction<f32>;
