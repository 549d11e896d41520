//! Time grid, message encoding and the decoding-quality metrics.
//!
//! A message of `b`-bit symbols is laid out on a [`TimeGrid`] with each
//! symbol spanning `bins_per_symbol` consecutive bins. Symbol `s` becomes a
//! transmittance of `s / (2^b - 1)`, so every bit depth maps onto `[0, 1]`.
//! Decoding reverses this: average each symbol's bins in a min-max
//! normalized reconstruction and count how many dividers lie below it.

use std::fmt;

use rand::Rng;

use crate::error::{Result, SimError};
use crate::scalar::Scalar;

/// Default number of bins averaged into one decoded symbol.
pub const DEFAULT_BINS_PER_SYMBOL: usize = 5;
/// Default bin width in picoseconds. Metadata only.
pub const DEFAULT_BIN_DURATION_PS: f64 = 800.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeGrid {
    bins_per_symbol: usize,
    num_symbols: usize,
    bin_duration_ps: f64,
}

impl TimeGrid {
    pub fn new(bins_per_symbol: usize, num_symbols: usize) -> Result<Self> {
        Self::with_bin_duration(bins_per_symbol, num_symbols, DEFAULT_BIN_DURATION_PS)
    }

    pub fn with_bin_duration(
        bins_per_symbol: usize,
        num_symbols: usize,
        bin_duration_ps: f64,
    ) -> Result<Self> {
        if bins_per_symbol == 0 || num_symbols == 0 {
            return Err(SimError::InvalidGrid(format!(
                "bins_per_symbol ({bins_per_symbol}) and num_symbols ({num_symbols}) must be positive"
            )));
        }
        if bin_duration_ps <= 0.0 || !bin_duration_ps.is_finite() {
            return Err(SimError::InvalidGrid(format!(
                "bin duration must be positive, got {bin_duration_ps}"
            )));
        }
        Ok(Self {
            bins_per_symbol,
            num_symbols,
            bin_duration_ps,
        })
    }

    pub fn bins_per_symbol(&self) -> usize {
        self.bins_per_symbol
    }

    pub fn num_symbols(&self) -> usize {
        self.num_symbols
    }

    pub fn bin_duration_ps(&self) -> f64 {
        self.bin_duration_ps
    }

    pub fn total_bins(&self) -> usize {
        self.bins_per_symbol * self.num_symbols
    }

    /// Bin index range covered by symbol `k`.
    pub fn symbol_bins(&self, k: usize) -> std::ops::Range<usize> {
        k * self.bins_per_symbol..(k + 1) * self.bins_per_symbol
    }
}

/// A sequence of `bit_depth`-bit symbols.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Message {
    bit_depth: u32,
    symbols: Vec<u32>,
}

impl Message {
    pub fn new(bit_depth: u32, symbols: Vec<u32>) -> Result<Self> {
        if bit_depth == 0 || bit_depth > 16 {
            return Err(SimError::InvalidParameter {
                name: "bit_depth",
                reason: format!("must be in 1..=16, got {bit_depth}"),
            });
        }
        if symbols.is_empty() {
            return Err(SimError::EmptyInput);
        }
        let levels = 1u32 << bit_depth;
        if let Some((position, &symbol)) = symbols.iter().enumerate().find(|(_, &s)| s >= levels) {
            return Err(SimError::SymbolOutOfRange {
                position,
                symbol,
                bit_depth,
            });
        }
        Ok(Self { bit_depth, symbols })
    }

    /// Parses a digit string such as `"0300001000200020"`, or a
    /// comma-separated list when symbols need more than one digit.
    pub fn parse(text: &str, bit_depth: u32) -> Result<Self> {
        let text = text.trim();
        let symbols = if text.contains(',') {
            text.split(',')
                .map(|tok| {
                    tok.trim()
                        .parse::<u32>()
                        .map_err(|_| SimError::InvalidParameter {
                            name: "message",
                            reason: format!("`{}` is not a symbol", tok.trim()),
                        })
                })
                .collect::<Result<Vec<_>>>()?
        } else {
            text.chars()
                .map(|c| {
                    c.to_digit(10).ok_or_else(|| SimError::InvalidParameter {
                        name: "message",
                        reason: format!("`{c}` is not a decimal digit"),
                    })
                })
                .collect::<Result<Vec<_>>>()?
        };
        Self::new(bit_depth, symbols)
    }

    pub fn bit_depth(&self) -> u32 {
        self.bit_depth
    }

    pub fn symbols(&self) -> &[u32] {
        &self.symbols
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    /// Number of distinct levels, `2^bit_depth`.
    pub fn levels(&self) -> u32 {
        1 << self.bit_depth
    }
}

impl fmt::Display for Message {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.levels() <= 10 {
            for s in &self.symbols {
                write!(f, "{s}")?;
            }
            Ok(())
        } else {
            let parts: Vec<String> = self.symbols.iter().map(u32::to_string).collect();
            f.write_str(&parts.join(","))
        }
    }
}

/// Per-bin transmittance `M(t)` of the object, each value in `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct TemporalObject<T> {
    transmittance: Vec<T>,
    grid: TimeGrid,
}

impl<T: Scalar> TemporalObject<T> {
    pub fn new(transmittance: Vec<T>, grid: TimeGrid) -> Result<Self> {
        if transmittance.len() != grid.total_bins() {
            return Err(SimError::LengthMismatch {
                expected: grid.total_bins(),
                actual: transmittance.len(),
            });
        }
        if let Some(bad) = transmittance
            .iter()
            .find(|&&m| !(m >= T::zero() && m <= T::one()))
        {
            return Err(SimError::InvalidParameter {
                name: "transmittance",
                reason: format!("{bad} is outside [0, 1]"),
            });
        }
        Ok(Self {
            transmittance,
            grid,
        })
    }

    pub fn transmittance(&self) -> &[T] {
        &self.transmittance
    }

    pub fn grid(&self) -> &TimeGrid {
        &self.grid
    }

    pub fn len(&self) -> usize {
        self.transmittance.len()
    }

    pub fn is_empty(&self) -> bool {
        self.transmittance.is_empty()
    }
}

/// Lays out `msg` on `grid`, symbol `s` becoming `s / (L - 1)` on each of its bins.
pub fn encode_message<T: Scalar>(msg: &Message, grid: &TimeGrid) -> Result<TemporalObject<T>> {
    if msg.len() != grid.num_symbols() {
        return Err(SimError::LengthMismatch {
            expected: grid.num_symbols(),
            actual: msg.len(),
        });
    }
    let top = T::of(f64::from(msg.levels() - 1));
    let transmittance = msg
        .symbols()
        .iter()
        .flat_map(|&s| std::iter::repeat_n(T::of(f64::from(s)) / top, grid.bins_per_symbol()))
        .collect();
    TemporalObject::new(transmittance, *grid)
}

/// Output of [`normalize_minmax`].
#[derive(Debug, Clone, PartialEq)]
pub struct Normalized<T> {
    pub values: Vec<T>,
    /// Set when the input was constant; `values` is then all zeros.
    pub degenerate: bool,
}

/// Maps samples affinely onto `[0, 1]`.
pub fn normalize_minmax<T: Scalar>(samples: &[T]) -> Result<Normalized<T>> {
    let (&first, rest) = samples.split_first().ok_or(SimError::EmptyInput)?;
    let (lo, hi) = rest
        .iter()
        .fold((first, first), |(lo, hi), &x| (lo.min(x), hi.max(x)));
    let span = hi - lo;
    if span.is_nan() || span <= T::zero() {
        return Ok(Normalized {
            values: vec![T::zero(); samples.len()],
            degenerate: true,
        });
    }
    Ok(Normalized {
        values: samples.iter().map(|&x| (x - lo) / span).collect(),
        degenerate: false,
    })
}

/// Decision thresholds between adjacent normalized symbol levels.
#[derive(Debug, Clone, PartialEq)]
pub struct DividerSet {
    bit_depth: u32,
    dividers: Vec<f64>,
}

impl DividerSet {
    pub fn new(bit_depth: u32, dividers: Vec<f64>) -> Result<Self> {
        let expected = (1usize << bit_depth) - 1;
        if dividers.len() != expected {
            return Err(SimError::LengthMismatch {
                expected,
                actual: dividers.len(),
            });
        }
        let in_range = dividers.iter().all(|&d| d > 0.0 && d < 1.0);
        let increasing = dividers.windows(2).all(|w| w[0] < w[1]);
        if !in_range || !increasing {
            return Err(SimError::InvalidParameter {
                name: "dividers",
                reason: "must be strictly increasing inside (0, 1)".into(),
            });
        }
        Ok(Self {
            bit_depth,
            dividers,
        })
    }

    pub fn bit_depth(&self) -> u32 {
        self.bit_depth
    }

    pub fn dividers(&self) -> &[f64] {
        &self.dividers
    }

    /// Number of dividers strictly below `value`, i.e. the decoded symbol.
    pub fn classify(&self, value: f64) -> u32 {
        self.dividers.partition_point(|&d| d < value) as u32
    }
}

/// Midpoints between adjacent levels `l / (L - 1)`.
pub fn default_dividers(bit_depth: u32) -> DividerSet {
    let top = f64::from((1u32 << bit_depth) - 1);
    let dividers = (0..(1u32 << bit_depth) - 1)
        .map(|l| (f64::from(l) + 0.5) / top)
        .collect();
    DividerSet {
        bit_depth,
        dividers,
    }
}

/// Rejects jitter that could reorder the dividers of `bit_depth`-bit symbols.
pub fn check_divider_delta(bit_depth: u32, delta: f64) -> Result<()> {
    let half_spacing = 0.5 / f64::from((1u32 << bit_depth) - 1);
    if !(0.0..half_spacing).contains(&delta) {
        return Err(SimError::InvalidParameter {
            name: "divider.delta",
            reason: format!(
                "must be in [0, {half_spacing}) for {bit_depth}-bit symbols, got {delta}"
            ),
        });
    }
    Ok(())
}

/// Midpoint dividers each jittered uniformly within `±delta`.
///
/// `delta` must stay below half the level spacing so the dividers keep
/// their order.
pub fn randomized_dividers<R: Rng + ?Sized>(
    bit_depth: u32,
    delta: f64,
    rng: &mut R,
) -> Result<DividerSet> {
    check_divider_delta(bit_depth, delta)?;
    let base = default_dividers(bit_depth);
    let dividers = base
        .dividers
        .iter()
        .map(|&mid| {
            if delta == 0.0 {
                mid
            } else {
                mid + rng.random_range(-delta..delta)
            }
        })
        .collect();
    DividerSet::new(bit_depth, dividers)
}

/// Decodes a normalized reconstruction symbol by symbol.
pub fn decode_reconstruction<T: Scalar>(
    recon: &[T],
    grid: &TimeGrid,
    div: &DividerSet,
) -> Result<Message> {
    if recon.len() != grid.total_bins() {
        return Err(SimError::LengthMismatch {
            expected: grid.total_bins(),
            actual: recon.len(),
        });
    }
    let symbols = recon
        .chunks_exact(grid.bins_per_symbol())
        .map(|bins| {
            let mean = bins.iter().copied().sum::<T>() / T::of_usize(bins.len());
            div.classify(mean.as_f64())
        })
        .collect();
    Message::new(div.bit_depth(), symbols)
}

/// Decoding accuracy rate: fraction of symbol positions decoded correctly.
pub fn dar(decoded: &Message, truth: &Message) -> Result<f64> {
    if decoded.bit_depth() != truth.bit_depth() {
        return Err(SimError::BitDepthMismatch {
            left: decoded.bit_depth(),
            right: truth.bit_depth(),
        });
    }
    if decoded.len() != truth.len() {
        return Err(SimError::LengthMismatch {
            expected: truth.len(),
            actual: decoded.len(),
        });
    }
    let hits = decoded
        .symbols()
        .iter()
        .zip(truth.symbols())
        .filter(|(a, b)| a == b)
        .count();
    Ok(hits as f64 / truth.len() as f64)
}

/// Mean squared error between two equally long sequences.
pub fn mse<T: Scalar>(recon_norm: &[T], object_norm: &[T]) -> Result<T> {
    if recon_norm.len() != object_norm.len() {
        return Err(SimError::LengthMismatch {
            expected: object_norm.len(),
            actual: recon_norm.len(),
        });
    }
    if recon_norm.is_empty() {
        return Err(SimError::EmptyInput);
    }
    let total: T = recon_norm
        .iter()
        .zip(object_norm)
        .map(|(&a, &b)| (a - b) * (a - b))
        .sum();
    Ok(total / T::of_usize(recon_norm.len()))
}

/// Reconstruction quality for one replicate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Metrics {
    pub mse: f64,
    pub dar: f64,
}
