//! Correlation accumulators and the four reconstruction estimators.
//!
//! [`CorrelationAccumulator`] keeps raw power sums, so merging two partial
//! accumulators is plain field-wise addition and every moment is available
//! without a second pass. All moments use the population convention
//! (divide by `n`).

use std::fmt;
use std::str::FromStr;

use crate::error::{Result, SimError};
use crate::scalar::{Field, Scalar};
use crate::source::PairEvent;

/// Reconstruction method; doubles as the simulation mode.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Estimator {
    /// Classical normalized covariance.
    Ctgi,
    /// Classical differential.
    Cdtgi,
    /// Quantum coincidence counting.
    Qtgi,
    /// Quantum differential.
    Qdtgi,
}

impl Estimator {
    pub const ALL: [Estimator; 4] = [Self::Ctgi, Self::Cdtgi, Self::Qtgi, Self::Qdtgi];

    pub fn name(self) -> &'static str {
        match self {
            Estimator::Ctgi => "ctgi",
            Estimator::Cdtgi => "cdtgi",
            Estimator::Qtgi => "qtgi",
            Estimator::Qdtgi => "qdtgi",
        }
    }

    pub fn is_quantum(self) -> bool {
        matches!(self, Estimator::Qtgi | Estimator::Qdtgi)
    }
}

impl fmt::Display for Estimator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Estimator {
    type Err = SimError;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|e| e.name() == s)
            .ok_or_else(|| SimError::InvalidParameter {
                name: "mode",
                reason: format!("expected ctgi|cdtgi|qtgi|qdtgi, got `{s}`"),
            })
    }
}

/// Raw estimator output before min-max normalization.
#[derive(Debug, Clone, PartialEq)]
pub struct Reconstruction<T> {
    pub values: Vec<T>,
    pub estimator: Estimator,
    pub n_used: u64,
    /// False where the estimator is undefined (zero reference variance);
    /// such bins hold 0.
    pub valid: Vec<bool>,
}

impl<T> Reconstruction<T> {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

fn count<T: Field>(n: u64) -> T {
    T::from_u64(n).expect("shot count is representable")
}

/// Mergeable running sums for the classical estimators.
///
/// `R` denotes the per-shot reference total `Σ_t I_r(t)`.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationAccumulator<T> {
    pub n: u64,
    pub s_r: Vec<T>,
    pub s_rr: Vec<T>,
    pub s_rt: Vec<T>,
    pub s_r_total: Vec<T>,
    pub s_t: T,
    pub s_tt: T,
    pub s_total: T,
    pub s_total_sq: T,
    pub s_total_t: T,
}

/// Population moments derived from a [`CorrelationAccumulator`].
#[derive(Debug, Clone, PartialEq)]
pub struct Moments<T> {
    pub mean_r: Vec<T>,
    pub var_r: Vec<T>,
    pub cov_rt: Vec<T>,
    pub cov_r_total: Vec<T>,
    pub mean_t: T,
    pub var_t: T,
    pub mean_total: T,
    pub var_total: T,
    pub cov_total_t: T,
}

impl<T: Field> CorrelationAccumulator<T> {
    pub fn new(bins: usize) -> Self {
        Self {
            n: 0,
            s_r: vec![T::zero(); bins],
            s_rr: vec![T::zero(); bins],
            s_rt: vec![T::zero(); bins],
            s_r_total: vec![T::zero(); bins],
            s_t: T::zero(),
            s_tt: T::zero(),
            s_total: T::zero(),
            s_total_sq: T::zero(),
            s_total_t: T::zero(),
        }
    }

    pub fn bins(&self) -> usize {
        self.s_r.len()
    }

    /// Adds one shot: reference pattern `I_r(t)` and reported bucket value `I_t`.
    pub fn accumulate(&mut self, reference: &[T], bucket: T) -> Result<()> {
        if reference.len() != self.bins() {
            return Err(SimError::LengthMismatch {
                expected: self.bins(),
                actual: reference.len(),
            });
        }
        let total = reference.iter().fold(T::zero(), |acc, &x| acc + x);
        for (t, &r) in reference.iter().enumerate() {
            self.s_r[t] = self.s_r[t] + r;
            self.s_rr[t] = self.s_rr[t] + r * r;
            self.s_rt[t] = self.s_rt[t] + r * bucket;
            self.s_r_total[t] = self.s_r_total[t] + r * total;
        }
        self.n += 1;
        self.s_t = self.s_t + bucket;
        self.s_tt = self.s_tt + bucket * bucket;
        self.s_total = self.s_total + total;
        self.s_total_sq = self.s_total_sq + total * total;
        self.s_total_t = self.s_total_t + total * bucket;
        Ok(())
    }

    /// Field-wise sum with another accumulator over the same grid.
    pub fn merge(&mut self, other: &Self) -> Result<()> {
        if other.bins() != self.bins() {
            return Err(SimError::LengthMismatch {
                expected: self.bins(),
                actual: other.bins(),
            });
        }
        let add = |a: &mut Vec<T>, b: &[T]| a.iter_mut().zip(b).for_each(|(x, &y)| *x = *x + y);
        add(&mut self.s_r, &other.s_r);
        add(&mut self.s_rr, &other.s_rr);
        add(&mut self.s_rt, &other.s_rt);
        add(&mut self.s_r_total, &other.s_r_total);
        self.n += other.n;
        self.s_t = self.s_t + other.s_t;
        self.s_tt = self.s_tt + other.s_tt;
        self.s_total = self.s_total + other.s_total;
        self.s_total_sq = self.s_total_sq + other.s_total_sq;
        self.s_total_t = self.s_total_t + other.s_total_t;
        Ok(())
    }

    pub fn moments(&self) -> Result<Moments<T>> {
        if self.n == 0 {
            return Err(SimError::NotEnoughShots {
                required: 1,
                actual: 0,
            });
        }
        let n = count::<T>(self.n);
        let mean_t = self.s_t / n;
        let mean_total = self.s_total / n;
        let mean_r: Vec<T> = self.s_r.iter().map(|&s| s / n).collect();
        let var_r = self
            .s_rr
            .iter()
            .zip(&mean_r)
            .map(|(&s, &m)| s / n - m * m)
            .collect();
        let cov_rt = self
            .s_rt
            .iter()
            .zip(&mean_r)
            .map(|(&s, &m)| s / n - m * mean_t)
            .collect();
        let cov_r_total = self
            .s_r_total
            .iter()
            .zip(&mean_r)
            .map(|(&s, &m)| s / n - m * mean_total)
            .collect();
        Ok(Moments {
            mean_r,
            var_r,
            cov_rt,
            cov_r_total,
            mean_t,
            var_t: self.s_tt / n - mean_t * mean_t,
            mean_total,
            var_total: self.s_total_sq / n - mean_total * mean_total,
            cov_total_t: self.s_total_t / n - mean_total * mean_t,
        })
    }

    /// Per-bin `cov(I_r(t), d)` and `D(d)` for the differential signal
    /// `d = I_t - (mean(I_t) / mean(R)) R`.
    pub fn differential_moments(&self) -> Result<(Vec<T>, T)> {
        let m = self.moments()?;
        if m.mean_total == T::zero() {
            return Err(SimError::ZeroReferenceMean);
        }
        let k = m.mean_t / m.mean_total;
        let cov_rd = m
            .cov_rt
            .iter()
            .zip(&m.cov_r_total)
            .map(|(&c_t, &c_total)| c_t - k * c_total)
            .collect();
        let two = T::one() + T::one();
        let var_d = m.var_t - two * k * m.cov_total_t + k * k * m.var_total;
        Ok((cov_rd, var_d))
    }
}

fn negligible<T: Scalar>(variance: T, second_moment: T) -> bool {
    let rel = T::of(1e-10).max(T::epsilon() * T::of(64.0));
    variance <= rel * second_moment.abs()
}

fn require_shots<T>(acc: &CorrelationAccumulator<T>) -> Result<()> {
    if acc.n < 2 {
        return Err(SimError::NotEnoughShots {
            required: 2,
            actual: acc.n,
        });
    }
    Ok(())
}

/// Normalizes per-bin covariances by `sqrt(D(I_r(t)) D(x))`, masking bins
/// whose reference variance vanishes.
fn normalized<T: Scalar>(
    acc: &CorrelationAccumulator<T>,
    m: &Moments<T>,
    cov: &[T],
    var_x: T,
    estimator: Estimator,
) -> Reconstruction<T> {
    let n = T::of_usize(acc.n as usize);
    let mut valid = Vec::with_capacity(cov.len());
    let values = cov
        .iter()
        .zip(&m.var_r)
        .zip(&acc.s_rr)
        .map(|((&c, &v), &s_rr)| {
            let ok = !negligible(v, s_rr / n);
            valid.push(ok);
            if ok {
                c / (v * var_x).sqrt()
            } else {
                T::zero()
            }
        })
        .collect();
    Reconstruction {
        values,
        estimator,
        n_used: acc.n,
        valid,
    }
}

/// Normalized covariance `cov(I_r(t), I_t) / sqrt(D(I_r(t)) D(I_t))`.
pub fn ctgi_estimate<T: Scalar>(acc: &CorrelationAccumulator<T>) -> Result<Reconstruction<T>> {
    require_shots(acc)?;
    let m = acc.moments()?;
    let n = T::of_usize(acc.n as usize);
    if negligible(m.var_t, acc.s_tt / n) {
        return Err(SimError::FlatChannel("bucket signal"));
    }
    Ok(normalized(acc, &m, &m.cov_rt, m.var_t, Estimator::Ctgi))
}

/// Normalized covariance of `I_r(t)` with the differential bucket signal.
pub fn dtgi_estimate<T: Scalar>(acc: &CorrelationAccumulator<T>) -> Result<Reconstruction<T>> {
    require_shots(acc)?;
    let m = acc.moments()?;
    let (cov_rd, var_d) = acc.differential_moments()?;
    let n = T::of_usize(acc.n as usize);
    let k = m.mean_t / m.mean_total;
    let scale = acc.s_tt / n + k * k * acc.s_total_sq / n;
    if negligible(var_d, scale) {
        return Err(SimError::FlatChannel("differential bucket signal"));
    }
    Ok(normalized(acc, &m, &cov_rd, var_d, Estimator::Cdtgi))
}

/// Per-bin coincidence counts between idler clicks and signal-arm clicks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoincidenceHistogram {
    pub n: u64,
    /// Idler click at bin `t` together with a signal click.
    pub c: Vec<u64>,
    /// Idler clicks at bin `t`.
    pub n_r: Vec<u64>,
    /// Total signal clicks.
    pub n_b: u64,
    /// Total idler clicks.
    pub n_idler: u64,
}

impl CoincidenceHistogram {
    pub fn new(bins: usize) -> Self {
        Self {
            n: 0,
            c: vec![0; bins],
            n_r: vec![0; bins],
            n_b: 0,
            n_idler: 0,
        }
    }

    pub fn bins(&self) -> usize {
        self.c.len()
    }

    pub fn accumulate(&mut self, event: &PairEvent, spad: bool) {
        self.n += 1;
        if let Some(t) = event.idler_click_bin {
            self.n_r[t] += 1;
            self.n_idler += 1;
            if spad {
                self.c[t] += 1;
            }
        }
        if spad {
            self.n_b += 1;
        }
    }

    pub fn merge(&mut self, other: &Self) -> Result<()> {
        if other.bins() != self.bins() {
            return Err(SimError::LengthMismatch {
                expected: self.bins(),
                actual: other.bins(),
            });
        }
        self.n += other.n;
        self.c.iter_mut().zip(&other.c).for_each(|(a, b)| *a += b);
        self.n_r
            .iter_mut()
            .zip(&other.n_r)
            .for_each(|(a, b)| *a += b);
        self.n_b += other.n_b;
        self.n_idler += other.n_idler;
        Ok(())
    }
}

/// Click indicators of one pulse as classical channels: `I_r(t) = 1` at the
/// idler click bin, `I_t = 1` on a signal click.
pub fn click_channels<T: Field>(event: &PairEvent, spad: bool, bins: usize) -> (Vec<T>, T) {
    let mut reference = vec![T::zero(); bins];
    if let Some(t) = event.idler_click_bin {
        reference[t] = T::one();
    }
    (reference, if spad { T::one() } else { T::zero() })
}

/// Per-pulse coincidence rate `c(t) / n`.
pub fn qtgi_estimate<T: Scalar>(hist: &CoincidenceHistogram) -> Result<Reconstruction<T>> {
    if hist.n == 0 {
        return Err(SimError::NotEnoughShots {
            required: 1,
            actual: 0,
        });
    }
    let n = T::of(hist.n as f64);
    Ok(Reconstruction {
        values: hist.c.iter().map(|&c| T::of(c as f64) / n).collect(),
        estimator: Estimator::Qtgi,
        n_used: hist.n,
        valid: vec![true; hist.bins()],
    })
}

/// Differential coincidence rate `c(t)/n - (n_b / n_idler) n_r(t)/n`.
///
/// With binary reference channels and at most one idler click per pulse this
/// is exactly the differential covariance `cov(I_r(t), d)`.
pub fn qdtgi_estimate<T: Scalar>(hist: &CoincidenceHistogram) -> Result<Reconstruction<T>> {
    if hist.n == 0 {
        return Err(SimError::NotEnoughShots {
            required: 1,
            actual: 0,
        });
    }
    if hist.n_idler == 0 {
        return Err(SimError::NoIdlerClicks);
    }
    let n = T::of(hist.n as f64);
    let k = T::of(hist.n_b as f64) / T::of(hist.n_idler as f64);
    Ok(Reconstruction {
        values: hist
            .c
            .iter()
            .zip(&hist.n_r)
            .map(|(&c, &r)| T::of(c as f64) / n - k * T::of(r as f64) / n)
            .collect(),
        estimator: Estimator::Qdtgi,
        n_used: hist.n,
        valid: vec![true; hist.bins()],
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn single_update() {
        let mut acc = CorrelationAccumulator::<f64>::new(3);
        acc.accumulate(&[1.0, 2.0, 3.0], 4.0).unwrap();
        assert_eq!(acc.n, 1);
        assert_eq!(acc.s_t, 4.0);
        assert_eq!(acc.s_total, 6.0);
        assert_eq!(acc.s_r_total, vec![6.0, 12.0, 18.0]);
        assert!(acc.accumulate(&[1.0], 1.0).is_err());
    }

    #[test]
    fn two_shot_sums() {
        let mut acc = CorrelationAccumulator::<f64>::new(1);
        acc.accumulate(&[0.0], 0.0).unwrap();
        acc.accumulate(&[2.0], 2.0).unwrap();
        assert_eq!(acc.s_rt, vec![4.0]);
        assert_eq!(acc.s_r, vec![2.0]);
        assert_eq!(acc.s_t, 2.0);
    }

    #[test]
    fn merge_equals_single_pass_for_integers() {
        let shots: Vec<(Vec<f64>, f64)> = (0..50)
            .map(|i| (vec![(i % 7) as f64, (i % 3) as f64], (i % 5) as f64))
            .collect();
        let mut whole = CorrelationAccumulator::new(2);
        for (r, t) in &shots {
            whole.accumulate(r, *t).unwrap();
        }
        let mut a = CorrelationAccumulator::new(2);
        let mut b = CorrelationAccumulator::new(2);
        for (r, t) in &shots[..17] {
            a.accumulate(r, *t).unwrap();
        }
        for (r, t) in &shots[17..] {
            b.accumulate(r, *t).unwrap();
        }
        let mut ab = a.clone();
        ab.merge(&b).unwrap();
        let mut ba = b.clone();
        ba.merge(&a).unwrap();
        assert_eq!(ab, whole);
        assert_eq!(ba, whole);
        assert!(ab.merge(&CorrelationAccumulator::new(3)).is_err());
    }

    #[test]
    fn ctgi_needs_two_shots_and_bucket_variance() {
        let mut acc = CorrelationAccumulator::<f64>::new(2);
        acc.accumulate(&[1.0, 0.0], 1.0).unwrap();
        assert!(matches!(
            ctgi_estimate(&acc),
            Err(SimError::NotEnoughShots { .. })
        ));
        acc.accumulate(&[0.0, 1.0], 1.0).unwrap();
        assert!(matches!(ctgi_estimate(&acc), Err(SimError::FlatChannel(_))));
    }

    #[test]
    fn constant_reference_bin_is_masked() {
        let mut acc = CorrelationAccumulator::<f64>::new(2);
        acc.accumulate(&[1.0, 3.0], 1.0).unwrap();
        acc.accumulate(&[2.0, 3.0], 2.0).unwrap();
        acc.accumulate(&[0.5, 3.0], 0.5).unwrap();
        let rec = ctgi_estimate(&acc).unwrap();
        assert_eq!(rec.valid, vec![true, false]);
        assert_eq!(rec.values[1], 0.0);
        assert!((rec.values[0] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn dtgi_rejects_transparent_object() {
        // M = 1 everywhere makes I_t = R, so d is identically zero.
        let mut acc = CorrelationAccumulator::<f64>::new(3);
        for i in 0..20u32 {
            let r = [f64::from(i % 3), f64::from(i % 5), f64::from(i % 2)];
            acc.accumulate(&r, r.iter().sum()).unwrap();
        }
        assert!(matches!(dtgi_estimate(&acc), Err(SimError::FlatChannel(_))));
    }

    #[test]
    fn dtgi_rejects_zero_reference() {
        let mut acc = CorrelationAccumulator::<f64>::new(2);
        acc.accumulate(&[0.0, 0.0], 1.0).unwrap();
        acc.accumulate(&[0.0, 0.0], 2.0).unwrap();
        assert_eq!(dtgi_estimate(&acc), Err(SimError::ZeroReferenceMean));
    }

    #[test]
    fn dtgi_is_invariant_to_reference_rescaling() {
        let mut a = CorrelationAccumulator::<f64>::new(3);
        let mut b = CorrelationAccumulator::<f64>::new(3);
        for i in 0..40u32 {
            let r = [
                f64::from(i % 3),
                f64::from((i * 7) % 5),
                f64::from((i * 3) % 4),
            ];
            let it = 0.2 * r[0] + r[1];
            a.accumulate(&r, it).unwrap();
            b.accumulate(&r.map(|x| 3.5 * x), it).unwrap();
        }
        let ra = dtgi_estimate(&a).unwrap();
        let rb = dtgi_estimate(&b).unwrap();
        for (x, y) in ra.values.iter().zip(&rb.values) {
            assert!((x - y).abs() < 1e-12);
        }
    }

    #[test]
    fn coincidence_examples() {
        let mut h = CoincidenceHistogram::new(5);
        h.accumulate(&PairEvent::default(), false);
        assert_eq!(
            h,
            CoincidenceHistogram {
                n: 1,
                ..CoincidenceHistogram::new(5)
            }
        );

        let ev = PairEvent {
            arrival_bin: Some(3),
            idler_click_bin: Some(3),
        };
        let mut h = CoincidenceHistogram::new(5);
        h.accumulate(&ev, true);
        assert_eq!(h.c[3], 1);
        assert_eq!(h.n_r[3], 1);
        assert_eq!((h.n_b, h.n_idler), (1, 1));
    }

    #[test]
    fn histogram_merge_is_exact() {
        let events: Vec<(PairEvent, bool)> = (0..100usize)
            .map(|i| {
                let bin = (i % 4 != 0).then_some(i % 5);
                (
                    PairEvent {
                        arrival_bin: bin,
                        idler_click_bin: bin,
                    },
                    i % 3 == 0,
                )
            })
            .collect();
        let mut whole = CoincidenceHistogram::new(5);
        events.iter().for_each(|(e, s)| whole.accumulate(e, *s));
        let mut a = CoincidenceHistogram::new(5);
        let mut b = CoincidenceHistogram::new(5);
        events[..33].iter().for_each(|(e, s)| a.accumulate(e, *s));
        events[33..].iter().for_each(|(e, s)| b.accumulate(e, *s));
        a.merge(&b).unwrap();
        assert_eq!(a, whole);
    }

    #[test]
    fn qtgi_examples() {
        let mut h = CoincidenceHistogram::new(3);
        h.n = 1000;
        h.c = vec![0, 40, 0];
        let rec = qtgi_estimate::<f64>(&h).unwrap();
        assert_eq!(rec.values, vec![0.0, 0.04, 0.0]);
        let empty = CoincidenceHistogram {
            n: 10,
            ..CoincidenceHistogram::new(3)
        };
        assert_eq!(qtgi_estimate::<f64>(&empty).unwrap().values, vec![0.0; 3]);
        assert!(qtgi_estimate::<f64>(&CoincidenceHistogram::new(3)).is_err());
    }

    #[test]
    fn qdtgi_examples() {
        let h = CoincidenceHistogram {
            n: 1000,
            c: vec![0, 40, 0],
            n_r: vec![50, 50, 50],
            n_b: 40,
            n_idler: 150,
        };
        let rec = qdtgi_estimate::<f64>(&h).unwrap();
        let side = -40.0 / 150.0 * 50.0 / 1000.0;
        let expected = [side, 0.04 + side, side];
        for (v, e) in rec.values.iter().zip(expected) {
            assert!((v - e).abs() < 1e-15);
        }
        assert!((rec.values[1] - 0.026_666_666_666_666_67).abs() < 1e-15);

        let no_idler = CoincidenceHistogram {
            n: 10,
            ..CoincidenceHistogram::new(3)
        };
        assert_eq!(
            qdtgi_estimate::<f64>(&no_idler),
            Err(SimError::NoIdlerClicks)
        );
    }

    #[test]
    fn estimator_names_roundtrip() {
        for e in Estimator::ALL {
            assert_eq!(e.name().parse::<Estimator>().unwrap(), e);
        }
        assert!("gi".parse::<Estimator>().is_err());
    }

    proptest! {
        #[test]
        fn merge_is_associative_and_commutative(
            shots in proptest::collection::vec((proptest::collection::vec(0u8..10, 3), 0u8..20), 3..60),
            cut1 in 0usize..60,
            cut2 in 0usize..60,
        ) {
            let shots: Vec<(Vec<f64>, f64)> = shots
                .into_iter()
                .map(|(r, t)| (r.into_iter().map(f64::from).collect(), f64::from(t)))
                .collect();
            let (lo, hi) = (cut1.min(cut2).min(shots.len()), cut1.max(cut2).min(shots.len()));
            let part = |range: &[(Vec<f64>, f64)]| {
                let mut acc = CorrelationAccumulator::new(3);
                range.iter().for_each(|(r, t)| acc.accumulate(r, *t).unwrap());
                acc
            };
            let (a, b, c) = (part(&shots[..lo]), part(&shots[lo..hi]), part(&shots[hi..]));
            let mut left = a.clone();
            left.merge(&b).unwrap();
            left.merge(&c).unwrap();
            let mut right = b.clone();
            right.merge(&c).unwrap();
            let mut right_first = c.clone();
            right_first.merge(&b).unwrap();
            right_first.merge(&a).unwrap();
            right.merge(&a).unwrap();
            let whole = part(&shots);
            prop_assert_eq!(&left, &whole);
            prop_assert_eq!(&right, &whole);
            prop_assert_eq!(&right_first, &whole);
        }

        #[test]
        fn qdtgi_matches_qtgi_after_normalization_for_flat_idler_counts(
            c in proptest::collection::vec(0u64..50, 2..20),
            extra in 0u64..100,
            n_b_extra in 0u64..100,
        ) {
            let bins = c.len();
            let flat = c.iter().copied().max().unwrap() + extra;
            let h = CoincidenceHistogram {
                n: 10_000,
                n_r: vec![flat; bins],
                n_idler: flat * bins as u64,
                n_b: c.iter().sum::<u64>() + n_b_extra,
                c,
            };
            let q = crate::temporal::normalize_minmax(&qtgi_estimate::<f64>(&h).unwrap().values).unwrap();
            let d = crate::temporal::normalize_minmax(&qdtgi_estimate::<f64>(&h).unwrap().values).unwrap();
            prop_assert_eq!(q.degenerate, d.degenerate);
            for (a, b) in q.values.iter().zip(&d.values) {
                prop_assert!((a - b).abs() <= 1e-12);
            }
            let argmax = |v: &[f64]| v.iter().enumerate().fold(0, |best, (i, x)| if *x > v[best] { i } else { best });
            let qv = qtgi_estimate::<f64>(&h).unwrap().values;
            let dv = qdtgi_estimate::<f64>(&h).unwrap().values;
            prop_assert_eq!(argmax(&qv), argmax(&dv));
        }
    }
}
