//! Reference-arm sources: classical intensity patterns and photon pairs.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp, Normal};

use crate::error::{Result, SimError};
use crate::rng::{RandomStream, StreamLabel};
use crate::scalar::Scalar;
use crate::temporal::TimeGrid;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum IntensityDistribution {
    /// Thermal-like statistics of chopped ASE.
    #[default]
    Exponential,
    /// Uniform on `[0, 2 * mean]`.
    Uniform,
    /// Normal with standard deviation equal to the mean, clamped at zero.
    GaussianTruncated,
}

impl IntensityDistribution {
    pub fn name(self) -> &'static str {
        match self {
            IntensityDistribution::Exponential => "exponential",
            IntensityDistribution::Uniform => "uniform",
            IntensityDistribution::GaussianTruncated => "gaussian-truncated",
        }
    }
}

impl std::str::FromStr for IntensityDistribution {
    type Err = SimError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exponential" => Ok(Self::Exponential),
            "uniform" => Ok(Self::Uniform),
            "gaussian-truncated" | "gaussian_truncated" => Ok(Self::GaussianTruncated),
            other => Err(SimError::InvalidParameter {
                name: "source.distribution",
                reason: format!("unknown distribution `{other}`"),
            }),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SourceConfig {
    distribution: IntensityDistribution,
    mean_intensity: f64,
}

impl Default for SourceConfig {
    fn default() -> Self {
        Self {
            distribution: IntensityDistribution::Exponential,
            mean_intensity: 1.0,
        }
    }
}

impl SourceConfig {
    pub fn new(distribution: IntensityDistribution, mean_intensity: f64) -> Result<Self> {
        if !(mean_intensity > 0.0 && mean_intensity.is_finite()) {
            return Err(SimError::InvalidParameter {
                name: "source.mean",
                reason: format!("must be positive and finite, got {mean_intensity}"),
            });
        }
        Ok(Self {
            distribution,
            mean_intensity,
        })
    }

    pub fn distribution(&self) -> IntensityDistribution {
        self.distribution
    }

    pub fn mean_intensity(&self) -> f64 {
        self.mean_intensity
    }
}

/// One shot's reference pattern `I_r(t)`: the secret key.
#[derive(Debug, Clone, PartialEq)]
pub struct PulseRealization<T> {
    pub intensities: Vec<T>,
    pub measurement_index: u64,
}

impl<T: Scalar> PulseRealization<T> {
    /// Reference total `R = Σ_t I_r(t)`.
    pub fn total(&self) -> T {
        self.intensities.iter().copied().sum()
    }
}

/// Anything that can produce reference patterns from a generator.
///
/// [`SourceConfig`] is the production source; tests plug in small discrete
/// sources with known moments.
pub trait PulseSource<T: Scalar>: Sync {
    fn draw(&self, grid: &TimeGrid, rng: &mut ChaCha8Rng, index: u64) -> PulseRealization<T>;

    /// Pattern for measurement `index` on `label`'s substream.
    fn sample(
        &self,
        grid: &TimeGrid,
        stream: &RandomStream,
        label: StreamLabel,
        index: u64,
    ) -> PulseRealization<T> {
        let mut rng = stream.substream(label, index);
        self.draw(grid, &mut rng, index)
    }
}

impl<T: Scalar> PulseSource<T> for SourceConfig {
    fn draw(&self, grid: &TimeGrid, rng: &mut ChaCha8Rng, index: u64) -> PulseRealization<T> {
        let mean = self.mean_intensity;
        let bins = grid.total_bins();
        let intensities = match self.distribution {
            IntensityDistribution::Exponential => {
                let exp = Exp::new(1.0 / mean).expect("positive rate");
                (0..bins).map(|_| T::of(exp.sample(rng))).collect()
            }
            IntensityDistribution::Uniform => (0..bins)
                .map(|_| T::of(rng.random_range(0.0..2.0 * mean)))
                .collect(),
            IntensityDistribution::GaussianTruncated => {
                let normal = Normal::new(mean, mean).expect("positive sigma");
                (0..bins)
                    .map(|_| T::of(normal.sample(rng).max(0.0)))
                    .collect()
            }
        };
        PulseRealization {
            intensities,
            measurement_index: index,
        }
    }
}

/// Reference pattern for measurement `index` on the measurement substream.
pub fn sample_classical_pulse<T: Scalar>(
    cfg: &SourceConfig,
    grid: &TimeGrid,
    stream: &RandomStream,
    index: u64,
) -> PulseRealization<T> {
    cfg.sample(grid, stream, StreamLabel::Measurement, index)
}

fn probability(name: &'static str, value: f64) -> Result<f64> {
    if (0.0..=1.0).contains(&value) {
        Ok(value)
    } else {
        Err(SimError::InvalidParameter {
            name,
            reason: format!("must be a probability in [0, 1], got {value}"),
        })
    }
}

/// Photon-pair source and detector parameters for quantum mode.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuantumConfig {
    pub pair_prob: f64,
    pub eta_idler: f64,
    pub eta_signal: f64,
    pub dark_idler: f64,
    pub dark_signal: f64,
}

impl Default for QuantumConfig {
    fn default() -> Self {
        Self {
            pair_prob: 0.1,
            eta_idler: 0.6,
            eta_signal: 0.2,
            dark_idler: 1e-5,
            dark_signal: 1e-5,
        }
    }
}

impl QuantumConfig {
    pub fn new(
        pair_prob: f64,
        eta_idler: f64,
        eta_signal: f64,
        dark_idler: f64,
        dark_signal: f64,
    ) -> Result<Self> {
        Ok(Self {
            pair_prob: probability("quantum.pair_prob", pair_prob)?,
            eta_idler: probability("quantum.eta_idler", eta_idler)?,
            eta_signal: probability("quantum.eta_signal", eta_signal)?,
            dark_idler: probability("quantum.dark_idler", dark_idler)?,
            dark_signal: probability("quantum.dark_signal", dark_signal)?,
        })
    }

    pub fn validate(&self) -> Result<()> {
        Self::new(
            self.pair_prob,
            self.eta_idler,
            self.eta_signal,
            self.dark_idler,
            self.dark_signal,
        )
        .map(|_| ())
    }
}

/// What happened in the reference arm during one pump pulse.
///
/// At most one pair per pulse and at most one idler click.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct PairEvent {
    /// Bin in which the pair was born, if one was.
    pub arrival_bin: Option<usize>,
    /// Bin of the idler click (true detection or dark count).
    pub idler_click_bin: Option<usize>,
}

impl PairEvent {
    pub fn pair_generated(&self) -> bool {
        self.arrival_bin.is_some()
    }

    pub fn idler_clicked(&self) -> bool {
        self.idler_click_bin.is_some()
    }
}

pub fn sample_quantum_pulse(
    qcfg: &QuantumConfig,
    grid: &TimeGrid,
    stream: &RandomStream,
    index: u64,
) -> PairEvent {
    let mut rng = stream.substream(StreamLabel::Quantum, index);
    let bins = grid.total_bins();
    let arrival_bin = rng
        .random_bool(qcfg.pair_prob)
        .then(|| rng.random_range(0..bins));
    let detected = arrival_bin.filter(|_| rng.random_bool(qcfg.eta_idler));
    let idler_click_bin = detected.or_else(|| {
        rng.random_bool(qcfg.dark_idler)
            .then(|| rng.random_range(0..bins))
    });
    PairEvent {
        arrival_bin,
        idler_click_bin,
    }
}
