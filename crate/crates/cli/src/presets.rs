//! Sweep bundles behind `tgi figures`, one CSV per panel.
//!
//! Shot counts are reduced to desk scale:
//!
//! | figure | panels | shots |
//! |--------|--------|-------|
//! | fig2 | MSE vs N on `010`, one panel per estimator | classical and quantum up to 3e5 |
//! | fig3 | W, P, optical and electrical noise sweeps per message | 1e4 (1-bit), 3e4 (2-bit) |
//! | fig4 | DAR vs N per estimator and message | classical up to 1e5, quantum up to 5e5 |
//! | fig5 | W and P sweeps per message | 1e2 (1-bit), 3e3 (2-bit), before DAR saturates |
//! | fig6 | optical and electrical noise sweeps per message and classical estimator | 1e4 (1-bit), 3e4 (2-bit) |

use tgi_core::{
    DetectorConfig, Estimator, Message, NoiseConfig, Scenario, SimError, SweepAxis, SweepSpec,
};

pub const FIGURES: [&str; 5] = ["fig2", "fig3", "fig4", "fig5", "fig6"];

pub const MESSAGE_1BIT: &str = "0110001000111000";
pub const MESSAGE_2BIT: &str = "0300001000200020";

pub const W_GRID: [f64; 7] = [2.0, 4.0, 8.0, 16.0, 32.0, 64.0, 100.0];
pub const P_GRID: [f64; 9] = [0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9];
pub const NA_GRID: [f64; 4] = [0.0, 0.25, 0.5, 1.0];

#[derive(Debug, Clone)]
pub struct Panel {
    /// File stem of the panel's CSV.
    pub name: String,
    pub spec: SweepSpec,
}

fn scenario(mode: Estimator, message: &str, bits: u32, n: u64) -> Result<Scenario, SimError> {
    Scenario::new(mode, Message::parse(message, bits)?, n)
}

fn with_detector(mut s: Scenario, w: u32, p: f64) -> Result<Scenario, SimError> {
    s.detector = DetectorConfig::new(w, p, NoiseConfig::none(), None)?;
    Ok(s)
}

fn panel(name: String, base: Scenario, axis: SweepAxis, points: &[f64]) -> Result<Panel, SimError> {
    Ok(Panel {
        name,
        spec: SweepSpec::new(base, axis, points.to_vec())?,
    })
}

fn messages() -> [(&'static str, &'static str, u32); 2] {
    [("1bit", MESSAGE_1BIT, 1), ("2bit", MESSAGE_2BIT, 2)]
}

fn fig2() -> Result<Vec<Panel>, SimError> {
    let classical = [1e2, 1e3, 1e4, 1e5, 3e5];
    let quantum = [1e2, 1e3, 1e4, 5e4, 1e5, 3e5];
    Estimator::ALL
        .into_iter()
        .map(|mode| {
            let points: &[f64] = if mode.is_quantum() {
                &quantum
            } else {
                &classical
            };
            panel(
                format!("fig2_{mode}"),
                scenario(mode, "010", 1, 1)?,
                SweepAxis::N,
                points,
            )
        })
        .collect()
}

fn fig3() -> Result<Vec<Panel>, SimError> {
    let mut out = Vec::new();
    for (tag, msg, bits) in messages() {
        let n = if bits == 1 { 10_000 } else { 30_000 };
        let base = scenario(Estimator::Ctgi, msg, bits, n)?;
        out.push(panel(
            format!("fig3_{tag}_w"),
            base.clone(),
            SweepAxis::W,
            &W_GRID,
        )?);
        out.push(panel(
            format!("fig3_{tag}_p"),
            with_detector(base.clone(), 2, 0.5)?,
            SweepAxis::P,
            &P_GRID,
        )?);
        out.push(panel(
            format!("fig3_{tag}_optical"),
            base.clone(),
            SweepAxis::NaOptical,
            &NA_GRID,
        )?);
        out.push(panel(
            format!("fig3_{tag}_electrical"),
            base,
            SweepAxis::NaElectrical,
            &NA_GRID,
        )?);
    }
    Ok(out)
}

fn fig4() -> Result<Vec<Panel>, SimError> {
    let classical = [1e2, 1e3, 1e4, 1e5];
    let quantum = [1e3, 1e4, 1e5, 5e5];
    let mut out = Vec::new();
    for mode in Estimator::ALL {
        for (tag, msg, bits) in messages() {
            let points: &[f64] = if mode.is_quantum() {
                &quantum
            } else {
                &classical
            };
            out.push(panel(
                format!("fig4_{mode}_{tag}"),
                scenario(mode, msg, bits, 1)?,
                SweepAxis::N,
                points,
            )?);
        }
    }
    Ok(out)
}

fn fig5() -> Result<Vec<Panel>, SimError> {
    let mut out = Vec::new();
    for (tag, msg, bits) in messages() {
        let n = if bits == 1 { 100 } else { 3_000 };
        let base = scenario(Estimator::Ctgi, msg, bits, n)?;
        out.push(panel(
            format!("fig5_{tag}_w"),
            with_detector(base.clone(), 100, 0.5)?,
            SweepAxis::W,
            &W_GRID,
        )?);
        out.push(panel(
            format!("fig5_{tag}_p"),
            with_detector(base, 2, 0.5)?,
            SweepAxis::P,
            &P_GRID,
        )?);
    }
    Ok(out)
}

fn fig6() -> Result<Vec<Panel>, SimError> {
    let mut out = Vec::new();
    for mode in [Estimator::Ctgi, Estimator::Cdtgi] {
        for (tag, msg, bits) in messages() {
            let n = if bits == 1 { 10_000 } else { 30_000 };
            let base = scenario(mode, msg, bits, n)?;
            out.push(panel(
                format!("fig6_{mode}_{tag}_optical"),
                base.clone(),
                SweepAxis::NaOptical,
                &NA_GRID,
            )?);
            out.push(panel(
                format!("fig6_{mode}_{tag}_electrical"),
                base,
                SweepAxis::NaElectrical,
                &NA_GRID,
            )?);
        }
    }
    Ok(out)
}

/// Panels of figure `id`, or `None` for an unknown id.
pub fn preset(id: &str) -> Option<Vec<Panel>> {
    let panels = match id {
        "fig2" => fig2(),
        "fig3" => fig3(),
        "fig4" => fig4(),
        "fig5" => fig5(),
        "fig6" => fig6(),
        _ => return None,
    };
    Some(panels.expect("preset scenarios are valid"))
}
