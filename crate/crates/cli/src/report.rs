//! CSV reports: one row per replicate, then `mean` and `std` rows per point.
//!
//! Floats are written with Rust's shortest round-trip formatting, so every
//! value parses back to the identical `f64`. The `wall_s` column stays empty
//! unless timing is requested, keeping reports byte-identical across runs.

use std::io::Write;

use tgi_core::{RunReport, Scenario, SimError};

pub const HEADER: [&str; 16] = [
    "scenario_id",
    "mode",
    "bit_depth",
    "message",
    "n",
    "replicate",
    "w",
    "p",
    "noise_kind",
    "na_ratio",
    "optical_mode",
    "seed",
    "mse",
    "dar",
    "degenerate",
    "wall_s",
];

/// Outcome of one point together with the scenario it ran.
#[derive(Debug, Clone)]
pub struct PointOutcome {
    pub index: usize,
    pub scenario: Scenario,
    pub result: Result<RunReport, SimError>,
}

fn scenario_fields(index: usize, s: &Scenario) -> Vec<String> {
    let noise = s.detector.noise();
    vec![
        index.to_string(),
        s.mode.name().to_string(),
        s.message.bit_depth().to_string(),
        s.message.to_string(),
        s.n.to_string(),
        String::new(),
        s.detector.w().to_string(),
        s.detector.p().to_string(),
        noise.kind.name().to_string(),
        noise.na_ratio.to_string(),
        noise.optical_mode.name().to_string(),
        s.master_seed.to_string(),
    ]
}

const REPLICATE: usize = 5;

fn row(mut head: Vec<String>, replicate: String, tail: [String; 4]) -> Vec<String> {
    head[REPLICATE] = replicate;
    head.extend(tail);
    head
}

/// Writes the report for `points` to `out`.
pub fn write_csv<W: Write>(out: W, points: &[PointOutcome], timing: bool) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(HEADER)?;
    for point in points {
        let head = scenario_fields(point.index, &point.scenario);
        let report = match &point.result {
            Ok(r) => r,
            Err(_) => {
                w.write_record(row(head, "error".into(), Default::default()))?;
                continue;
            }
        };
        for r in &report.replicates {
            w.write_record(row(
                head.clone(),
                r.replicate.to_string(),
                [
                    r.mse.to_string(),
                    r.dar.to_string(),
                    r.degenerate.to_string(),
                    String::new(),
                ],
            ))?;
        }
        let degenerate = report
            .replicates
            .iter()
            .filter(|r| r.degenerate)
            .count()
            .to_string();
        let wall = if timing {
            format!("{:.3}", report.wall_seconds)
        } else {
            String::new()
        };
        w.write_record(row(
            head.clone(),
            "mean".into(),
            [
                report.mse_mean.to_string(),
                report.dar_mean.to_string(),
                degenerate.clone(),
                wall,
            ],
        ))?;
        w.write_record(row(
            head,
            "std".into(),
            [
                report.mse_std.to_string(),
                report.dar_std.to_string(),
                degenerate,
                String::new(),
            ],
        ))?;
    }
    w.flush()?;
    Ok(())
}

/// Report as an in-memory byte buffer.
pub fn csv_bytes(points: &[PointOutcome], timing: bool) -> Vec<u8> {
    let mut buf = Vec::new();
    write_csv(&mut buf, points, timing).expect("writing to memory cannot fail");
    buf
}

/// One-line console summary of a point.
pub fn summary_line(point: &PointOutcome) -> String {
    let s = &point.scenario;
    let prefix = format!(
        "point {} {} n={} w={} p={} noise={}:{}",
        point.index,
        s.mode,
        s.n,
        s.detector.w(),
        s.detector.p(),
        s.detector.noise().kind.name(),
        s.detector.noise().na_ratio
    );
    match &point.result {
        Ok(r) => format!(
            "{prefix} mse={:.6} (std {:.6}) dar={:.6} (std {:.6})",
            r.mse_mean, r.mse_std, r.dar_mean, r.dar_std
        ),
        Err(e) => format!("{prefix} error: {e}"),
    }
}
