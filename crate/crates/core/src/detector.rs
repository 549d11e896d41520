//! Test-path (ciphertext) detection.
//!
//! Per classical shot the processing order is fixed:
//!
//! 1. per-bin ciphertext `I_r(t) M(t) g(t)` (`g` is the optional gate profile)
//! 2. optical noise on the ciphertext bins, clamped at zero
//! 3. bucket integration over the whole window
//! 4. electrical noise on the integrated value
//! 5. quantization to `W` levels, or a threshold click when `W = 2`
//!
//! Noise amplitudes are multiples of the calibrated dynamic range `F` of the
//! noise-free bucket signal.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Result, SimError};
use crate::rng::{RandomStream, StreamLabel};
use crate::scalar::Scalar;
use crate::source::{PairEvent, PulseRealization, PulseSource, QuantumConfig};
use crate::temporal::TemporalObject;

/// Default number of calibration shots.
pub const DEFAULT_CALIBRATION_SHOTS: u64 = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum NoiseKind {
    #[default]
    None,
    Optical,
    Electrical,
}

impl NoiseKind {
    pub fn name(self) -> &'static str {
        match self {
            NoiseKind::None => "none",
            NoiseKind::Optical => "optical",
            NoiseKind::Electrical => "electrical",
        }
    }
}

impl FromStr for NoiseKind {
    type Err = SimError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "none" => Ok(Self::None),
            "optical" => Ok(Self::Optical),
            "electrical" => Ok(Self::Electrical),
            other => Err(SimError::InvalidParameter {
                name: "noise.kind",
                reason: format!("expected none|optical|electrical, got `{other}`"),
            }),
        }
    }
}

/// How the optical noise amplitude is spread over the time bins.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum OpticalMode {
    /// Per-bin sigma `na * F / T`.
    #[default]
    Budget,
    /// Per-bin sigma `na * F`.
    PerBin,
}

impl OpticalMode {
    pub fn name(self) -> &'static str {
        match self {
            OpticalMode::Budget => "budget",
            OpticalMode::PerBin => "per_bin",
        }
    }
}

impl FromStr for OpticalMode {
    type Err = SimError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "budget" => Ok(Self::Budget),
            "per_bin" | "per-bin" => Ok(Self::PerBin),
            other => Err(SimError::InvalidParameter {
                name: "noise.optical_mode",
                reason: format!("expected budget|per_bin, got `{other}`"),
            }),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct NoiseConfig {
    pub kind: NoiseKind,
    /// Noise amplitude as a multiple of `F`.
    pub na_ratio: f64,
    pub optical_mode: OpticalMode,
}

impl NoiseConfig {
    pub fn new(kind: NoiseKind, na_ratio: f64, optical_mode: OpticalMode) -> Result<Self> {
        if !(na_ratio >= 0.0 && na_ratio.is_finite()) {
            return Err(SimError::InvalidParameter {
                name: "noise.na_ratio",
                reason: format!("must be nonnegative, got {na_ratio}"),
            });
        }
        Ok(Self {
            kind,
            na_ratio,
            optical_mode,
        })
    }

    pub fn none() -> Self {
        Self::default()
    }
}

/// Per-bin detection efficiency multipliers of a gated detector.
#[derive(Debug, Clone, PartialEq)]
pub struct GateProfile {
    efficiencies: Vec<f64>,
}

impl GateProfile {
    pub const HEADER: &'static str = "# gate-profile v1";

    pub fn new(efficiencies: Vec<f64>) -> Result<Self> {
        if efficiencies.is_empty() {
            return Err(SimError::GateProfile("no bins".into()));
        }
        if let Some((bin, e)) = efficiencies
            .iter()
            .enumerate()
            .find(|(_, e)| !(0.0..=1.0).contains(*e))
        {
            return Err(SimError::GateProfile(format!(
                "efficiency {e} of bin {bin} is outside [0, 1]"
            )));
        }
        Ok(Self { efficiencies })
    }

    /// Parses the two-column `bin_index efficiency` table.
    ///
    /// The first line must be the `# gate-profile v1` header. Further `#`
    /// lines and blank lines are skipped; columns may be separated by
    /// whitespace or a comma. Every bin from 0 up to the largest index must
    /// appear exactly once.
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate();
        match lines.next() {
            Some((_, first)) if first.trim() == Self::HEADER => {}
            _ => {
                return Err(SimError::GateProfile(format!(
                    "line 1: missing `{}` header",
                    Self::HEADER
                )))
            }
        }
        let mut entries: Vec<(usize, f64)> = Vec::new();
        for (i, line) in lines {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = line
                .split(|c: char| c == ',' || c.is_whitespace())
                .filter(|f| !f.is_empty())
                .collect();
            let [bin, eff] = fields.as_slice() else {
                return Err(SimError::GateProfile(format!(
                    "line {}: expected `bin_index efficiency`",
                    i + 1
                )));
            };
            let bin = bin.parse::<usize>().map_err(|_| {
                SimError::GateProfile(format!("line {}: bad bin index `{bin}`", i + 1))
            })?;
            let eff = eff.parse::<f64>().map_err(|_| {
                SimError::GateProfile(format!("line {}: bad efficiency `{eff}`", i + 1))
            })?;
            entries.push((bin, eff));
        }
        entries.sort_by_key(|e| e.0);
        for (expected, (bin, _)) in entries.iter().enumerate() {
            if *bin != expected {
                return Err(SimError::GateProfile(format!(
                    "bins must cover 0..{} exactly once; problem at bin {expected}",
                    entries.len()
                )));
            }
        }
        Self::new(entries.into_iter().map(|e| e.1).collect())
    }

    pub fn efficiencies(&self) -> &[f64] {
        &self.efficiencies
    }

    pub fn len(&self) -> usize {
        self.efficiencies.len()
    }

    pub fn is_empty(&self) -> bool {
        self.efficiencies.is_empty()
    }

    fn check_len(&self, bins: usize) -> Result<()> {
        if self.efficiencies.len() != bins {
            return Err(SimError::GateProfile(format!(
                "profile has {} bins, grid has {bins}",
                self.efficiencies.len()
            )));
        }
        Ok(())
    }
}

impl fmt::Display for GateProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", Self::HEADER)?;
        for (bin, e) in self.efficiencies.iter().enumerate() {
            writeln!(f, "{bin} {e}")?;
        }
        Ok(())
    }
}

fn gate_at(gate: Option<&GateProfile>, bin: usize) -> f64 {
    gate.map_or(1.0, |g| g.efficiencies[bin])
}

/// Slow (bucket) detector model.
#[derive(Debug, Clone, PartialEq)]
pub struct DetectorConfig {
    w: u32,
    p: f64,
    noise: NoiseConfig,
    gate_profile: Option<GateProfile>,
}

impl Default for DetectorConfig {
    fn default() -> Self {
        Self {
            w: 100,
            p: 0.5,
            noise: NoiseConfig::none(),
            gate_profile: None,
        }
    }
}

impl DetectorConfig {
    pub fn new(
        w: u32,
        p: f64,
        noise: NoiseConfig,
        gate_profile: Option<GateProfile>,
    ) -> Result<Self> {
        if w < 2 {
            return Err(SimError::InvalidParameter {
                name: "detector.w",
                reason: format!("must be at least 2, got {w}"),
            });
        }
        if !(p > 0.0 && p < 1.0) {
            return Err(SimError::InvalidParameter {
                name: "detector.p",
                reason: format!("must lie in the open interval (0, 1), got {p}"),
            });
        }
        Ok(Self {
            w,
            p,
            noise,
            gate_profile,
        })
    }

    pub fn w(&self) -> u32 {
        self.w
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn noise(&self) -> &NoiseConfig {
        &self.noise
    }

    pub fn gate_profile(&self) -> Option<&GateProfile> {
        self.gate_profile.as_ref()
    }

    pub fn is_click(&self) -> bool {
        self.w == 2
    }
}

/// Observed range of the noise-free bucket signal.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CalibrationResult<T> {
    pub lo: T,
    pub hi: T,
    /// Dynamic range `F = hi - lo`.
    pub f: T,
}

impl<T: Scalar> CalibrationResult<T> {
    pub fn new(lo: T, hi: T) -> Result<Self> {
        if hi.is_nan() || lo.is_nan() || hi <= lo {
            return Err(SimError::DegenerateCalibration { level: lo.as_f64() });
        }
        Ok(Self { lo, hi, f: hi - lo })
    }

    fn require_range(&self) -> Result<()> {
        if self.f > T::zero() {
            Ok(())
        } else {
            Err(SimError::DegenerateCalibration {
                level: self.lo.as_f64(),
            })
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DetectionRecord<T> {
    /// Bucket value after noise, before digitization.
    pub analog: T,
    /// Value handed to the estimator.
    pub reported: T,
}

fn check_grid<T: Scalar>(pulse: &PulseRealization<T>, obj: &TemporalObject<T>) -> Result<()> {
    if pulse.intensities.len() != obj.len() {
        return Err(SimError::LengthMismatch {
            expected: obj.len(),
            actual: pulse.intensities.len(),
        });
    }
    Ok(())
}

/// Per-bin ciphertext `I_r(t) M(t) g(t)`.
pub fn ciphertext<T: Scalar>(
    pulse: &PulseRealization<T>,
    obj: &TemporalObject<T>,
    gate: Option<&GateProfile>,
) -> Result<Vec<T>> {
    check_grid(pulse, obj)?;
    if let Some(g) = gate {
        g.check_len(obj.len())?;
    }
    Ok(pulse
        .intensities
        .iter()
        .zip(obj.transmittance())
        .enumerate()
        .map(|(t, (&i, &m))| match gate {
            None => i * m,
            Some(_) => i * m * T::of(gate_at(gate, t)),
        })
        .collect())
}

/// Total ciphertext intensity `I_t = Σ_t I_r(t) M(t) g(t)`.
pub fn bucket_integrate<T: Scalar>(
    pulse: &PulseRealization<T>,
    obj: &TemporalObject<T>,
    gate: Option<&GateProfile>,
) -> Result<T> {
    Ok(ciphertext(pulse, obj, gate)?.into_iter().sum())
}

/// Adds zero-mean gaussian noise to every ciphertext bin and clamps at zero.
pub fn add_optical_noise<T: Scalar>(
    ciphertext: &[T],
    cal: &CalibrationResult<T>,
    noise: &NoiseConfig,
    stream: &RandomStream,
    index: u64,
) -> Result<Vec<T>> {
    cal.require_range()?;
    if noise.na_ratio == 0.0 {
        return Ok(ciphertext.to_vec());
    }
    let sigma = match noise.optical_mode {
        OpticalMode::Budget => noise.na_ratio * cal.f.as_f64() / ciphertext.len() as f64,
        OpticalMode::PerBin => noise.na_ratio * cal.f.as_f64(),
    };
    let mut rng = stream.substream(StreamLabel::Noise, index);
    Ok(ciphertext
        .iter()
        .map(|&x| {
            let z: f64 = rng.sample(StandardNormal);
            (x + T::of(sigma * z)).max(T::zero())
        })
        .collect())
}

/// Adds gaussian noise with sigma `na * F` to the integrated bucket value.
pub fn add_electrical_noise<T: Scalar>(
    analog: T,
    cal: &CalibrationResult<T>,
    noise: &NoiseConfig,
    stream: &RandomStream,
    index: u64,
) -> Result<T> {
    cal.require_range()?;
    if noise.na_ratio == 0.0 {
        return Ok(analog);
    }
    let mut rng = stream.substream(StreamLabel::Noise, index);
    let z: f64 = rng.sample(StandardNormal);
    Ok(analog + T::of(noise.na_ratio * cal.f.as_f64() * z))
}

/// Digitizes to one of `W` equal cells of `[lo, hi]`, reporting the cell midpoint.
///
/// Delegates to [`click_detect`] when `W = 2`.
pub fn quantize<T: Scalar>(
    analog: T,
    cfg: &DetectorConfig,
    cal: &CalibrationResult<T>,
) -> Result<DetectionRecord<T>> {
    if cfg.is_click() {
        return click_detect(analog, cfg, cal);
    }
    cal.require_range()?;
    let w = T::of(f64::from(cfg.w));
    let clamped = analog.max(cal.lo).min(cal.hi);
    let level = ((clamped - cal.lo) / cal.f * w)
        .floor()
        .min(w - T::one())
        .max(T::zero());
    let half = T::of(0.5);
    Ok(DetectionRecord {
        analog,
        reported: cal.lo + (level + half) * cal.f / w,
    })
}

/// Threshold click: 1 when `analog >= lo + P * F`, else 0.
pub fn click_detect<T: Scalar>(
    analog: T,
    cfg: &DetectorConfig,
    cal: &CalibrationResult<T>,
) -> Result<DetectionRecord<T>> {
    cal.require_range()?;
    let threshold = cal.lo + T::of(cfg.p) * cal.f;
    Ok(DetectionRecord {
        analog,
        reported: if analog >= threshold {
            T::one()
        } else {
            T::zero()
        },
    })
}

/// Full classical test-path chain for one shot.
pub fn detect<T: Scalar>(
    pulse: &PulseRealization<T>,
    obj: &TemporalObject<T>,
    cfg: &DetectorConfig,
    cal: &CalibrationResult<T>,
    stream: &RandomStream,
) -> Result<DetectionRecord<T>> {
    let index = pulse.measurement_index;
    let noise = cfg.noise();
    let analog = match noise.kind {
        NoiseKind::None => bucket_integrate(pulse, obj, cfg.gate_profile())?,
        NoiseKind::Optical => {
            let bins = ciphertext(pulse, obj, cfg.gate_profile())?;
            add_optical_noise(&bins, cal, noise, stream, index)?
                .into_iter()
                .sum()
        }
        NoiseKind::Electrical => {
            let clean = bucket_integrate(pulse, obj, cfg.gate_profile())?;
            add_electrical_noise(clean, cal, noise, stream, index)?
        }
    };
    quantize(analog, cfg, cal)
}

/// Gated single-photon detector in the signal arm.
///
/// A pair born in bin `t` clicks with probability `eta_signal M(t) g(t)`;
/// a dark click happens independently with probability `dark_signal`.
pub fn spad_click<T: Scalar>(
    event: &PairEvent,
    obj: &TemporalObject<T>,
    qcfg: &QuantumConfig,
    gate: Option<&GateProfile>,
    stream: &RandomStream,
    index: u64,
) -> bool {
    let mut rng = stream.substream(StreamLabel::SignalArm, index);
    let u_signal: f64 = rng.random();
    let u_dark: f64 = rng.random();
    let photon = event.arrival_bin.is_some_and(|t| {
        let prob = qcfg.eta_signal * obj.transmittance()[t].as_f64() * gate_at(gate, t);
        u_signal < prob
    });
    photon || u_dark < qcfg.dark_signal
}

/// Measures the noise-free, unquantized bucket range on the calibration substream.
pub fn calibrate_range<T: Scalar, S: PulseSource<T> + ?Sized>(
    source: &S,
    obj: &TemporalObject<T>,
    gate: Option<&GateProfile>,
    n_cal: u64,
    stream: &RandomStream,
) -> Result<CalibrationResult<T>> {
    if n_cal == 0 {
        return Err(SimError::InvalidParameter {
            name: "calibration.n",
            reason: "must be positive".into(),
        });
    }
    let mut lo = T::infinity();
    let mut hi = T::neg_infinity();
    for i in 0..n_cal {
        let pulse = source.sample(obj.grid(), stream, StreamLabel::Calibration, i);
        let it = bucket_integrate(&pulse, obj, gate)?;
        lo = lo.min(it);
        hi = hi.max(it);
    }
    CalibrationResult::new(lo, hi)
}
