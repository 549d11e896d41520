//! Scenario execution and parameter sweeps.
//!
//! A [`Scenario`] is one parameter point run as `replicates` independent
//! reconstructions of `n` shots each. Seeds form a tree
//! `master_seed → sweep point → replicate → stream label → shot index`, so
//! results depend neither on the worker count nor on which other points a
//! sweep contains.
//!
//! Within a replicate, shots are processed in fixed-size chunks whose
//! accumulators are merged in chunk order. The chunk size is independent of
//! the worker count, which keeps floating point sums bit-identical.

use std::time::Instant;

use rayon::prelude::*;

use crate::detector::{
    calibrate_range, detect, spad_click, CalibrationResult, DetectorConfig, NoiseConfig, NoiseKind,
};
use crate::error::{Result, SimError};
use crate::reconstruct::{
    ctgi_estimate, dtgi_estimate, qdtgi_estimate, qtgi_estimate, CoincidenceHistogram,
    CorrelationAccumulator, Estimator, Reconstruction,
};
use crate::rng::{RandomStream, StreamLabel};
use crate::scalar::Scalar;
use crate::source::{sample_quantum_pulse, PulseSource, QuantumConfig, SourceConfig};
use crate::temporal::{
    dar, decode_reconstruction, default_dividers, encode_message, mse, normalize_minmax,
    randomized_dividers, DividerSet, Message, TemporalObject, TimeGrid,
};

/// Shots per accumulation work unit.
pub const CHUNK_SHOTS: u64 = 4096;

pub const DEFAULT_REPLICATES: u32 = 20;
pub const DEFAULT_SEED: u64 = 42;

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum DividerMode {
    #[default]
    Midpoint,
    /// Midpoints jittered uniformly within `±delta`, drawn once per scenario.
    Randomized { delta: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub mode: Estimator,
    pub grid: TimeGrid,
    pub message: Message,
    pub source: SourceConfig,
    /// Present exactly for the quantum modes.
    pub quantum: Option<QuantumConfig>,
    pub detector: DetectorConfig,
    pub n: u64,
    pub replicates: u32,
    pub master_seed: u64,
    pub divider_mode: DividerMode,
    pub calibration_shots: u64,
}

impl Scenario {
    /// Scenario with every optional setting at its default.
    pub fn new(mode: Estimator, message: Message, n: u64) -> Result<Self> {
        let grid = TimeGrid::new(crate::temporal::DEFAULT_BINS_PER_SYMBOL, message.len())?;
        Ok(Self {
            mode,
            grid,
            message,
            source: SourceConfig::default(),
            quantum: mode.is_quantum().then(QuantumConfig::default),
            detector: DetectorConfig::default(),
            n,
            replicates: DEFAULT_REPLICATES,
            master_seed: DEFAULT_SEED,
            divider_mode: DividerMode::Midpoint,
            calibration_shots: crate::detector::DEFAULT_CALIBRATION_SHOTS,
        })
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(SimError::InvalidParameter {
                name: "n",
                reason: "must be at least 1".into(),
            });
        }
        if self.replicates == 0 {
            return Err(SimError::InvalidParameter {
                name: "replicates",
                reason: "must be at least 1".into(),
            });
        }
        if self.message.len() != self.grid.num_symbols() {
            return Err(SimError::LengthMismatch {
                expected: self.grid.num_symbols(),
                actual: self.message.len(),
            });
        }
        match (&self.quantum, self.mode.is_quantum()) {
            (Some(q), true) => q.validate()?,
            (None, false) => {}
            (_, true) => {
                return Err(SimError::InvalidParameter {
                    name: "quantum",
                    reason: format!("mode {} needs a quantum configuration", self.mode),
                })
            }
            (_, false) => {
                return Err(SimError::InvalidParameter {
                    name: "quantum",
                    reason: format!("mode {} is classical", self.mode),
                })
            }
        }
        if let Some(gate) = self.detector.gate_profile() {
            if gate.len() != self.grid.total_bins() {
                return Err(SimError::GateProfile(format!(
                    "profile has {} bins, grid has {}",
                    gate.len(),
                    self.grid.total_bins()
                )));
            }
        }
        if let DividerMode::Randomized { delta } = self.divider_mode {
            crate::temporal::check_divider_delta(self.message.bit_depth(), delta)?;
        }
        if !self.mode.is_quantum() && self.calibration_shots == 0 {
            return Err(SimError::InvalidParameter {
                name: "calibration.n",
                reason: "must be positive".into(),
            });
        }
        Ok(())
    }
}

/// Outcome of one replicate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReplicateResult {
    pub replicate: u32,
    pub mse: f64,
    pub dar: f64,
    /// Flat reconstruction (or undefined estimator) in this replicate.
    pub degenerate: bool,
}

#[derive(Debug, Clone)]
pub struct RunReport {
    pub scenario: Scenario,
    /// Position of this point within its sweep (0 for a lone scenario).
    pub axis_index: usize,
    pub replicates: Vec<ReplicateResult>,
    pub mse_mean: f64,
    pub mse_std: f64,
    pub dar_mean: f64,
    pub dar_std: f64,
    /// Calibrated bucket range `(lo, hi)` for classical modes.
    pub calibration: Option<(f64, f64)>,
    pub wall_seconds: f64,
}

/// Population mean and standard deviation.
pub fn mean_std(values: &[f64]) -> (f64, f64) {
    if values.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n;
    (mean, var.sqrt())
}

impl RunReport {
    fn new(
        scenario: Scenario,
        axis_index: usize,
        replicates: Vec<ReplicateResult>,
        calibration: Option<(f64, f64)>,
        wall_seconds: f64,
    ) -> Self {
        let mses: Vec<f64> = replicates.iter().map(|r| r.mse).collect();
        let dars: Vec<f64> = replicates.iter().map(|r| r.dar).collect();
        let (mse_mean, mse_std) = mean_std(&mses);
        let (dar_mean, dar_std) = mean_std(&dars);
        Self {
            scenario,
            axis_index,
            replicates,
            mse_mean,
            mse_std,
            dar_mean,
            dar_std,
            calibration,
            wall_seconds,
        }
    }

    /// Equality of everything except the wall time.
    pub fn results_eq(&self, other: &Self) -> bool {
        self.scenario == other.scenario
            && self.axis_index == other.axis_index
            && self.replicates == other.replicates
            && self.calibration == other.calibration
            && [self.mse_mean, self.mse_std, self.dar_mean, self.dar_std]
                .iter()
                .zip([other.mse_mean, other.mse_std, other.dar_mean, other.dar_std])
                .all(|(a, b)| a.to_bits() == b.to_bits())
    }

    /// Standard error of the mean DAR.
    pub fn dar_sem(&self) -> f64 {
        self.dar_std / (self.replicates.len() as f64).sqrt()
    }

    pub fn mse_sem(&self) -> f64 {
        self.mse_std / (self.replicates.len() as f64).sqrt()
    }
}

/// Swept parameter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SweepAxis {
    N,
    W,
    P,
    NaOptical,
    NaElectrical,
}

impl SweepAxis {
    pub fn name(self) -> &'static str {
        match self {
            SweepAxis::N => "n",
            SweepAxis::W => "w",
            SweepAxis::P => "p",
            SweepAxis::NaOptical => "na_optical",
            SweepAxis::NaElectrical => "na_electrical",
        }
    }
}

impl std::str::FromStr for SweepAxis {
    type Err = SimError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "n" => Ok(Self::N),
            "w" => Ok(Self::W),
            "p" => Ok(Self::P),
            "na_optical" => Ok(Self::NaOptical),
            "na_electrical" => Ok(Self::NaElectrical),
            other => Err(SimError::InvalidParameter {
                name: "sweep.axis",
                reason: format!("expected n|w|p|na_optical|na_electrical, got `{other}`"),
            }),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub base: Scenario,
    pub axis: SweepAxis,
    pub points: Vec<f64>,
}

fn integral(name: &'static str, value: f64, min: f64) -> Result<f64> {
    if value.fract() != 0.0 || value < min || value > u32::MAX as f64 * 4096.0 {
        return Err(SimError::InvalidParameter {
            name,
            reason: format!("sweep point {value} must be an integer >= {min}"),
        });
    }
    Ok(value)
}

impl SweepSpec {
    pub fn new(base: Scenario, axis: SweepAxis, points: Vec<f64>) -> Result<Self> {
        let spec = Self { base, axis, points };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if self.points.is_empty() {
            return Err(SimError::InvalidParameter {
                name: "sweep.points",
                reason: "must not be empty".into(),
            });
        }
        let increasing = self.points.windows(2).all(|w| w[0] < w[1]);
        let decreasing = self.points.windows(2).all(|w| w[0] > w[1]);
        if !(increasing || decreasing) {
            return Err(SimError::InvalidParameter {
                name: "sweep.points",
                reason: "must be strictly monotone".into(),
            });
        }
        for i in 0..self.points.len() {
            self.scenario_at(i)?.validate()?;
        }
        Ok(())
    }

    /// Base scenario with the axis parameter replaced by point `index`.
    pub fn scenario_at(&self, index: usize) -> Result<Scenario> {
        let value = self.points[index];
        let mut s = self.base.clone();
        let det = &s.detector;
        match self.axis {
            SweepAxis::N => s.n = integral("n", value, 1.0)? as u64,
            SweepAxis::W => {
                let w = integral("detector.w", value, 2.0)? as u32;
                s.detector =
                    DetectorConfig::new(w, det.p(), *det.noise(), det.gate_profile().cloned())?;
            }
            SweepAxis::P => {
                s.detector =
                    DetectorConfig::new(det.w(), value, *det.noise(), det.gate_profile().cloned())?;
            }
            SweepAxis::NaOptical | SweepAxis::NaElectrical => {
                let kind = if self.axis == SweepAxis::NaOptical {
                    NoiseKind::Optical
                } else {
                    NoiseKind::Electrical
                };
                let noise = NoiseConfig::new(kind, value, det.noise().optical_mode)?;
                s.detector =
                    DetectorConfig::new(det.w(), det.p(), noise, det.gate_profile().cloned())?;
            }
        }
        Ok(s)
    }
}

fn build_pool(workers: usize) -> rayon::ThreadPool {
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .expect("thread pool")
}

/// Runs one scenario in `f64` on a single worker.
pub fn run_scenario(s: &Scenario) -> Result<RunReport> {
    run_scenario_with::<f64>(s, 1)
}

/// Runs one scenario at precision `T` on `workers` threads.
pub fn run_scenario_with<T: Scalar>(s: &Scenario, workers: usize) -> Result<RunReport> {
    let pool = build_pool(workers);
    pool.install(|| run_point::<T>(s, 0))
}

pub fn run_sweep(spec: &SweepSpec) -> Vec<Result<RunReport>> {
    run_sweep_with::<f64>(spec, 1)
}

/// One result per sweep point, in point order. A failing point does not
/// stop the others.
pub fn run_sweep_with<T: Scalar>(spec: &SweepSpec, workers: usize) -> Vec<Result<RunReport>> {
    if let Err(e) = spec.validate() {
        return vec![Err(e); spec.points.len().max(1)];
    }
    let pool = build_pool(workers);
    pool.install(|| {
        (0..spec.points.len())
            .into_par_iter()
            .map(|i| spec.scenario_at(i).and_then(|s| run_point::<T>(&s, i)))
            .collect()
    })
}

fn resolve_dividers(s: &Scenario, point: &RandomStream) -> Result<DividerSet> {
    match s.divider_mode {
        DividerMode::Midpoint => Ok(default_dividers(s.message.bit_depth())),
        DividerMode::Randomized { delta } => {
            let mut rng = point.substream(StreamLabel::Dividers, 0);
            randomized_dividers(s.message.bit_depth(), delta, &mut rng)
        }
    }
}

fn run_point<T: Scalar>(s: &Scenario, axis_index: usize) -> Result<RunReport> {
    let started = Instant::now();
    s.validate()?;
    let point = RandomStream::new(s.master_seed).child(axis_index as u64);
    let obj: TemporalObject<T> = encode_message(&s.message, &s.grid)?;
    let dividers = resolve_dividers(s, &point)?;
    let object_norm = normalize_minmax(obj.transmittance())?.values;

    let calibration = if s.mode.is_quantum() {
        None
    } else {
        Some(calibrate_range(
            &s.source,
            &obj,
            s.detector.gate_profile(),
            s.calibration_shots,
            &point,
        )?)
    };

    let ctx = ReplicateContext {
        scenario: s,
        obj: &obj,
        object_norm: &object_norm,
        dividers: &dividers,
        calibration: calibration.as_ref(),
    };
    let replicates = (0..s.replicates)
        .into_par_iter()
        .map(|r| ctx.run(r, &point.child(u64::from(r))))
        .collect::<Result<Vec<_>>>()?;

    Ok(RunReport::new(
        s.clone(),
        axis_index,
        replicates,
        calibration.map(|c| (c.lo.as_f64(), c.hi.as_f64())),
        started.elapsed().as_secs_f64(),
    ))
}

struct ReplicateContext<'a, T> {
    scenario: &'a Scenario,
    obj: &'a TemporalObject<T>,
    object_norm: &'a [T],
    dividers: &'a DividerSet,
    calibration: Option<&'a CalibrationResult<T>>,
}

fn chunks(n: u64) -> Vec<(u64, u64)> {
    (0..n.div_ceil(CHUNK_SHOTS))
        .map(|c| (c * CHUNK_SHOTS, ((c + 1) * CHUNK_SHOTS).min(n)))
        .collect()
}

/// Errors that mean "this replicate's reconstruction is flat", not "the
/// scenario is broken".
fn is_degenerate(err: &SimError) -> bool {
    matches!(
        err,
        SimError::FlatChannel(_) | SimError::NoIdlerClicks | SimError::ZeroReferenceMean
    )
}

impl<T: Scalar> ReplicateContext<'_, T> {
    fn run(&self, replicate: u32, stream: &RandomStream) -> Result<ReplicateResult> {
        let s = self.scenario;
        let estimate = if s.mode.is_quantum() {
            self.quantum_estimate(stream)?
        } else {
            self.classical_estimate(stream)?
        };
        let bins = s.grid.total_bins();
        let (values, degenerate) = match estimate {
            Ok(rec) => {
                let norm = normalize_minmax(&rec.values)?;
                let values = norm
                    .values
                    .into_iter()
                    .zip(&rec.valid)
                    .map(|(v, &ok)| if ok { v } else { T::zero() })
                    .collect();
                (values, norm.degenerate)
            }
            Err(e) if is_degenerate(&e) => (vec![T::zero(); bins], true),
            Err(e) => return Err(e),
        };
        let decoded = decode_reconstruction(&values, &s.grid, self.dividers)?;
        Ok(ReplicateResult {
            replicate,
            mse: mse(&values, self.object_norm)?.as_f64(),
            dar: dar(&decoded, &s.message)?,
            degenerate,
        })
    }

    fn classical_estimate(&self, stream: &RandomStream) -> Result<Result<Reconstruction<T>>> {
        let s = self.scenario;
        let cal = self.calibration.expect("classical modes are calibrated");
        let bins = s.grid.total_bins();
        let partials = chunks(s.n)
            .into_par_iter()
            .map(|(start, end)| {
                let mut acc = CorrelationAccumulator::<T>::new(bins);
                for i in start..end {
                    let pulse = s
                        .source
                        .sample(&s.grid, stream, StreamLabel::Measurement, i);
                    let det = detect(&pulse, self.obj, &s.detector, cal, stream)?;
                    acc.accumulate(&pulse.intensities, det.reported)?;
                }
                Ok(acc)
            })
            .collect::<Result<Vec<_>>>()?;
        let mut acc = CorrelationAccumulator::new(bins);
        for part in &partials {
            acc.merge(part)?;
        }
        let estimate = match s.mode {
            Estimator::Ctgi => ctgi_estimate(&acc),
            Estimator::Cdtgi => dtgi_estimate(&acc),
            _ => unreachable!("quantum modes take the coincidence path"),
        };
        match estimate {
            Err(e @ SimError::NotEnoughShots { .. }) => Err(e),
            other => Ok(other),
        }
    }

    fn quantum_estimate(&self, stream: &RandomStream) -> Result<Result<Reconstruction<T>>> {
        let s = self.scenario;
        let q = s
            .quantum
            .as_ref()
            .expect("quantum modes carry a quantum config");
        let bins = s.grid.total_bins();
        let gate = s.detector.gate_profile();
        let partials: Vec<CoincidenceHistogram> = chunks(s.n)
            .into_par_iter()
            .map(|(start, end)| {
                let mut hist = CoincidenceHistogram::new(bins);
                for i in start..end {
                    let event = sample_quantum_pulse(q, &s.grid, stream, i);
                    let click = spad_click(&event, self.obj, q, gate, stream, i);
                    hist.accumulate(&event, click);
                }
                hist
            })
            .collect();
        let mut hist = CoincidenceHistogram::new(bins);
        for part in &partials {
            hist.merge(part)?;
        }
        Ok(match s.mode {
            Estimator::Qtgi => qtgi_estimate(&hist),
            Estimator::Qdtgi => qdtgi_estimate(&hist),
            _ => unreachable!("classical modes take the correlation path"),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn scenario(mode: Estimator, msg: &str, bits: u32, n: u64) -> Scenario {
        let mut s = Scenario::new(mode, Message::parse(msg, bits).unwrap(), n).unwrap();
        s.replicates = 4;
        s.calibration_shots = 2_000;
        s
    }

    #[test]
    fn chunking_covers_every_shot_once() {
        assert!(chunks(0).is_empty());
        assert_eq!(chunks(10), vec![(0, 10)]);
        let c = chunks(3 * CHUNK_SHOTS + 1);
        assert_eq!(c.len(), 4);
        assert_eq!(c[3], (3 * CHUNK_SHOTS, 3 * CHUNK_SHOTS + 1));
    }

    #[test]
    fn single_shot_classical_run_fails() {
        let mut s = scenario(Estimator::Ctgi, "010", 1, 1);
        s.replicates = 1;
        assert!(matches!(
            run_scenario(&s),
            Err(SimError::NotEnoughShots { required: 2, .. })
        ));
    }

    #[test]
    fn all_zero_message_fails_calibration() {
        let s = scenario(Estimator::Ctgi, "000", 1, 100);
        assert!(matches!(
            run_scenario(&s),
            Err(SimError::DegenerateCalibration { .. })
        ));
    }

    #[test]
    fn quantum_run_with_no_light_is_degenerate_not_fatal() {
        let mut s = scenario(Estimator::Qdtgi, "010", 1, 200);
        s.quantum = Some(QuantumConfig::new(0.0, 0.5, 0.2, 0.0, 0.0).unwrap());
        let report = run_scenario(&s).unwrap();
        assert!(report.replicates.iter().all(|r| r.degenerate));
    }

    #[test]
    fn validation_catches_mode_config_mismatch() {
        let mut s = scenario(Estimator::Ctgi, "010", 1, 100);
        s.quantum = Some(QuantumConfig::default());
        assert!(s.validate().is_err());
        let mut q = scenario(Estimator::Qtgi, "010", 1, 100);
        q.quantum = None;
        assert!(q.validate().is_err());
        let mut z = scenario(Estimator::Ctgi, "010", 1, 0);
        assert!(z.validate().is_err());
        z.n = 10;
        z.replicates = 0;
        assert!(z.validate().is_err());
    }

    #[test]
    fn identical_runs_are_identical() {
        let s = scenario(Estimator::Ctgi, "0110001000111000", 1, 3_000);
        let a = run_scenario(&s).unwrap();
        let b = run_scenario(&s).unwrap();
        assert!(a.results_eq(&b));
    }

    #[test]
    fn worker_count_does_not_change_results() {
        for mode in Estimator::ALL {
            let s = scenario(mode, "010", 1, 2 * CHUNK_SHOTS + 123);
            let one = run_scenario_with::<f64>(&s, 1).unwrap();
            for workers in [2, 8] {
                assert!(
                    one.results_eq(&run_scenario_with::<f64>(&s, workers).unwrap()),
                    "{mode}"
                );
            }
        }
    }

    #[test]
    fn single_point_sweep_matches_scenario() {
        let base = scenario(Estimator::Cdtgi, "010", 1, 1_000);
        let spec = SweepSpec::new(base.clone(), SweepAxis::W, vec![16.0]).unwrap();
        let swept = run_sweep(&spec).pop().unwrap().unwrap();
        let direct = run_scenario(&spec.scenario_at(0).unwrap()).unwrap();
        assert!(swept.results_eq(&direct));
    }

    #[test]
    fn appending_points_keeps_existing_results() {
        let base = scenario(Estimator::Ctgi, "010", 1, 1_000);
        let short = SweepSpec::new(base.clone(), SweepAxis::P, vec![0.3, 0.5]).unwrap();
        let long = SweepSpec::new(base, SweepAxis::P, vec![0.3, 0.5, 0.7]).unwrap();
        let a = run_sweep(&short);
        let b = run_sweep(&long);
        for (x, y) in a.iter().zip(&b) {
            assert!(x.as_ref().unwrap().results_eq(y.as_ref().unwrap()));
        }
    }

    #[test]
    fn sweep_spec_validation() {
        let base = scenario(Estimator::Ctgi, "010", 1, 1_000);
        assert!(SweepSpec::new(base.clone(), SweepAxis::N, vec![]).is_err());
        assert!(SweepSpec::new(base.clone(), SweepAxis::N, vec![10.0, 10.0]).is_err());
        assert!(SweepSpec::new(base.clone(), SweepAxis::N, vec![10.5]).is_err());
        assert!(SweepSpec::new(base.clone(), SweepAxis::W, vec![1.0, 2.0]).is_err());
        assert!(SweepSpec::new(base.clone(), SweepAxis::P, vec![0.5, 1.0]).is_err());
        assert!(SweepSpec::new(base.clone(), SweepAxis::NaOptical, vec![1.0, 0.5, 0.0]).is_ok());
    }

    #[test]
    fn sweep_substitutes_axis_values() {
        let base = scenario(Estimator::Ctgi, "010", 1, 1_000);
        let spec = SweepSpec::new(base, SweepAxis::NaElectrical, vec![0.0, 0.5]).unwrap();
        let s = spec.scenario_at(1).unwrap();
        assert_eq!(s.detector.noise().kind, NoiseKind::Electrical);
        assert_eq!(s.detector.noise().na_ratio, 0.5);
    }

    #[test]
    fn aggregates_use_population_convention() {
        let s = scenario(Estimator::Ctgi, "010", 1, 500);
        let report = run_scenario(&s).unwrap();
        let dars: Vec<f64> = report.replicates.iter().map(|r| r.dar).collect();
        let (m, sd) = mean_std(&dars);
        assert_eq!(m, report.dar_mean);
        assert_eq!(sd, report.dar_std);
        assert_eq!(mean_std(&[1.0, 3.0]), (2.0, 1.0));
    }

    #[test]
    fn randomized_dividers_are_resolved_once_per_point() {
        let mut s = scenario(Estimator::Ctgi, "0123", 2, 2_000);
        s.divider_mode = DividerMode::Randomized { delta: 0.05 };
        let point = RandomStream::new(s.master_seed).child(0);
        let a = resolve_dividers(&s, &point).unwrap();
        assert_eq!(a, resolve_dividers(&s, &point).unwrap());
        assert_ne!(a, default_dividers(2));
        assert!(run_scenario(&s).is_ok());
    }

    #[test]
    fn single_precision_pipeline_runs() {
        let s = scenario(Estimator::Ctgi, "010", 1, 5_000);
        let report = run_scenario_with::<f32>(&s, 2).unwrap();
        assert!(report.dar_mean > 0.9);
    }
}
