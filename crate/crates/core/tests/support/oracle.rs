//! Brute-force oracles for the classical estimators.

use num_rational::Ratio;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tgi_core::{ctgi_estimate, dtgi_estimate, CorrelationAccumulator, SimError};

type Q = Ratio<i64>;

fn q(n: i64) -> Q {
    Ratio::from_integer(n)
}

/// Every pattern in `symbols^bins` with its integer multiplicity.
fn patterns(symbols: &[(i64, i64)], bins: usize) -> Vec<(Vec<i64>, i64)> {
    // Multiplicities start at 2 so every case has at least two shots.
    let mut out = vec![(Vec::new(), 2)];
    for _ in 0..bins {
        out = out
            .into_iter()
            .flat_map(|(p, w)| {
                symbols.iter().map(move |&(s, ws)| {
                    let mut next = p.clone();
                    next.push(s);
                    (next, w * ws)
                })
            })
            .collect();
    }
    out
}

/// Discrete sources: up to three distinct symbols from `{0, 1, 2, 3}` with
/// weights in `{1, 2}`.
fn sources() -> Vec<Vec<(i64, i64)>> {
    let values = [0i64, 1, 2, 3];
    let mut out = Vec::new();
    for mask in 1u32..16 {
        let chosen: Vec<i64> = values
            .iter()
            .enumerate()
            .filter(|(i, _)| mask & (1 << i) != 0)
            .map(|(_, &v)| v)
            .collect();
        if chosen.len() > 3 {
            continue;
        }
        let k = chosen.len();
        let weight_sets = if k == 1 { 1 } else { 1 << k };
        for wbits in 0..weight_sets {
            out.push(
                chosen
                    .iter()
                    .enumerate()
                    .map(|(i, &v)| (v, if wbits & (1 << i) != 0 { 2 } else { 1 }))
                    .collect(),
            );
        }
    }
    out
}

/// Objects over `bins` with transmittance in halves.
fn objects(bins: usize) -> Vec<Vec<Q>> {
    let levels: &[Q] = if bins < 4 {
        &[
            Ratio::new_raw(0, 1),
            Ratio::new_raw(1, 2),
            Ratio::new_raw(1, 1),
        ]
    } else {
        &[Ratio::new_raw(0, 1), Ratio::new_raw(1, 1)]
    };
    let mut out = vec![Vec::new()];
    for _ in 0..bins {
        out = out
            .into_iter()
            .flat_map(|m: Vec<Q>| {
                levels.iter().map(move |&l| {
                    let mut next = m.clone();
                    next.push(l);
                    next
                })
            })
            .collect();
    }
    out
}

fn to_f64(x: Q) -> f64 {
    *x.numer() as f64 / *x.denom() as f64
}

fn close(actual: &[f64], expected: &[f64], tol: f64) -> bool {
    actual.len() == expected.len()
        && actual
            .iter()
            .zip(expected)
            .all(|(a, e)| (a - e).abs() <= tol)
}

/// Checks exact moments and the `f64` estimates of every enumerated case
/// against closed forms for i.i.d. bins. Returns the number of cases.
pub fn exhaustive_enumeration() -> Result<usize, String> {
    let mut cases = 0;
    for source in sources() {
        let total_w: i64 = source.iter().map(|&(_, w)| w).sum();
        let mean = source.iter().map(|&(s, w)| q(s * w)).sum::<Q>() / q(total_w);
        let var = source.iter().map(|&(s, w)| q(s * s * w)).sum::<Q>() / q(total_w) - mean * mean;
        for bins in 1..=4 {
            let pats = patterns(&source, bins);
            for m in objects(bins) {
                cases += 1;
                let ctx = || format!("source {source:?}, object {m:?}");
                let mut exact = CorrelationAccumulator::<Q>::new(bins);
                let mut float = CorrelationAccumulator::<f64>::new(bins);
                for (p, mult) in &pats {
                    let r: Vec<Q> = p.iter().map(|&s| q(s)).collect();
                    let bucket: Q = r.iter().zip(&m).map(|(&a, &b)| a * b).sum();
                    let rf: Vec<f64> = r.iter().map(|&x| to_f64(x)).collect();
                    for _ in 0..*mult {
                        exact.accumulate(&r, bucket).map_err(|e| e.to_string())?;
                        float
                            .accumulate(&rf, to_f64(bucket))
                            .map_err(|e| e.to_string())?;
                    }
                }

                let sum_m: Q = m.iter().copied().sum();
                let sum_m2: Q = m.iter().map(|&x| x * x).sum();
                let mom = exact.moments().map_err(|e| e.to_string())?;
                let ok = mom.var_r.iter().all(|&v| v == var)
                    && mom.cov_rt.iter().zip(&m).all(|(&c, &mt)| c == mt * var)
                    && mom.var_t == var * sum_m2;
                if !ok {
                    return Err(format!("classical moments differ for {}", ctx()));
                }

                let ctgi = ctgi_estimate(&float);
                if var == q(0) || sum_m2 == q(0) {
                    if !matches!(ctgi, Err(SimError::FlatChannel(_))) {
                        return Err(format!("expected flat bucket for {}", ctx()));
                    }
                } else {
                    let norm = to_f64(sum_m2).sqrt();
                    let expected: Vec<f64> = m.iter().map(|&x| to_f64(x) / norm).collect();
                    let got = ctgi.map_err(|e| e.to_string())?.values;
                    if !close(&got, &expected, 1e-12) {
                        return Err(format!("ctgi {got:?} != {expected:?} for {}", ctx()));
                    }
                }

                if mean == q(0) {
                    if exact.differential_moments() != Err(SimError::ZeroReferenceMean) {
                        return Err(format!("expected zero reference mean for {}", ctx()));
                    }
                    continue;
                }
                let bar = sum_m / q(bins as i64);
                let spread: Q = m.iter().map(|&x| (x - bar) * (x - bar)).sum();
                let (cov_rd, var_d) = exact.differential_moments().map_err(|e| e.to_string())?;
                let ok = cov_rd.iter().zip(&m).all(|(&c, &mt)| c == var * (mt - bar))
                    && var_d == var * spread;
                if !ok {
                    return Err(format!("differential moments differ for {}", ctx()));
                }
                let dtgi = dtgi_estimate(&float);
                if var == q(0) || spread == q(0) {
                    if !matches!(dtgi, Err(SimError::FlatChannel(_))) {
                        return Err(format!("expected flat differential signal for {}", ctx()));
                    }
                } else {
                    let norm = to_f64(spread).sqrt();
                    let expected: Vec<f64> = m.iter().map(|&x| to_f64(x - bar) / norm).collect();
                    let got = dtgi.map_err(|e| e.to_string())?.values;
                    if !close(&got, &expected, 1e-12) {
                        return Err(format!("dtgi {got:?} != {expected:?} for {}", ctx()));
                    }
                }
            }
        }
    }
    Ok(cases)
}

/// Largest deviation of `ctgi_estimate` under `I_t -> a I_t + b`,
/// `I_r -> c I_r` over randomized accumulators.
pub fn affine_invariance(trials: usize, seed: u64) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = 0.0f64;
    for _ in 0..trials {
        let bins = rng.random_range(2..=8);
        let shots = rng.random_range(20..=200);
        let m: Vec<f64> = (0..bins).map(|_| rng.random::<f64>()).collect();
        let a = 10f64.powf(rng.random_range(-1.0..1.0));
        let b = rng.random_range(-1.0..1.0);
        let c = 10f64.powf(rng.random_range(-1.0..1.0));
        let mut base = CorrelationAccumulator::<f64>::new(bins);
        let mut moved = CorrelationAccumulator::<f64>::new(bins);
        for _ in 0..shots {
            let r: Vec<f64> = (0..bins).map(|_| -rng.random::<f64>().ln()).collect();
            let bucket: f64 = r.iter().zip(&m).map(|(x, y)| x * y).sum();
            let scaled: Vec<f64> = r.iter().map(|x| c * x).collect();
            base.accumulate(&r, bucket).unwrap();
            moved.accumulate(&scaled, a * bucket + b).unwrap();
        }
        let x = ctgi_estimate(&base).unwrap().values;
        let y = ctgi_estimate(&moved).unwrap().values;
        for (u, v) in x.iter().zip(&y) {
            worst = worst.max((u - v).abs());
        }
    }
    worst
}
