//! Levinson check: total winding of `Γ` against the number of bound states.

use std::io::Write;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::models::{bound_state_count, ExtendedReal, Model, ModelKind};
use crate::symbols::Direction;
use crate::winding::{boundary_winding, BoundaryWinding};

pub const DEFAULT_TOLERANCE: f64 = 1e-6;
pub const DEFAULT_SAMPLES: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LevinsonSettings {
    pub tolerance: f64,
    /// Initial samples per side before adaptive refinement.
    pub samples_per_side: usize,
}

impl Default for LevinsonSettings {
    fn default() -> Self {
        LevinsonSettings {
            tolerance: DEFAULT_TOLERANCE,
            samples_per_side: DEFAULT_SAMPLES,
        }
    }
}

impl LevinsonSettings {
    pub fn with_tolerance(tolerance: f64) -> Result<Self> {
        let s = LevinsonSettings {
            tolerance,
            ..Default::default()
        };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.tolerance > 0.0 && self.tolerance <= 0.1) {
            return Err(Error::InvalidTolerance(self.tolerance));
        }
        if self.samples_per_side < 1 {
            return Err(Error::TooFewSamples {
                min: 1,
                got: self.samples_per_side,
            });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LevinsonVerdict {
    pub model: ModelKind,
    pub param: ExtendedReal,
    pub winding: BoundaryWinding,
    pub w_total: f64,
    pub snapped_w: i64,
    pub bound_count: usize,
    pub residual: f64,
    pub pass: bool,
}

/// Computes `w(Γ)` for the outgoing loop and compares it with `−#bound states`.
pub fn verify_levinson(model: &Model, settings: &LevinsonSettings) -> Result<LevinsonVerdict> {
    settings.validate()?;
    let winding = boundary_winding(model, settings.samples_per_side, Direction::Minus)?;
    let w_total = winding.w_total;
    let snapped = w_total.round();
    let residual = (w_total - snapped).abs();
    let bound_count = bound_state_count(model);
    let snapped_w = snapped as i64;
    Ok(LevinsonVerdict {
        model: model.kind(),
        param: model.param(),
        winding,
        w_total,
        snapped_w,
        bound_count,
        residual,
        pass: residual < settings.tolerance && snapped_w == -(bound_count as i64),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepItem {
    pub param: ExtendedReal,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verdict: Option<LevinsonVerdict>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl SweepItem {
    pub fn passed(&self) -> bool {
        self.verdict.as_ref().is_some_and(|v| v.pass)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepReport {
    pub model: ModelKind,
    pub tolerance: f64,
    pub samples_per_side: usize,
    pub passes: usize,
    pub failures: usize,
    pub items: Vec<SweepItem>,
}

impl SweepReport {
    pub fn all_pass(&self) -> bool {
        self.failures == 0
    }

    pub fn verdicts(&self) -> impl Iterator<Item = &LevinsonVerdict> {
        self.items.iter().filter_map(|i| i.verdict.as_ref())
    }

    pub fn write_json<W: Write>(&self, out: W) -> std::io::Result<()> {
        serde_json::to_writer_pretty(out, self)?;
        Ok(())
    }

    /// One row per parameter: `model,param,w1,w2,w3,w4,w_total,count,pass`.
    /// Failed evaluations leave the numeric columns empty.
    pub fn write_csv<W: Write>(&self, out: W) -> std::io::Result<()> {
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(out);
        w.write_record([
            "model", "param", "w1", "w2", "w3", "w4", "w_total", "count", "pass",
        ])?;
        for item in &self.items {
            let mut row = vec![self.model.name().to_string(), item.param.to_string()];
            match &item.verdict {
                Some(v) => {
                    row.extend(v.winding.sides().iter().map(|x| x.to_string()));
                    row.push(v.w_total.to_string());
                    row.push(v.bound_count.to_string());
                    row.push(v.pass.to_string());
                }
                None => {
                    row.extend(std::iter::repeat_n(String::new(), 6));
                    row.push("false".into());
                }
            }
            w.write_record(&row)?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Checks every parameter in parallel. Output order follows `params`; a
/// failing item is recorded in the report rather than aborting the sweep.
pub fn sweep(
    kind: ModelKind,
    params: &[ExtendedReal],
    settings: &LevinsonSettings,
) -> Result<SweepReport> {
    if params.is_empty() {
        return Err(Error::EmptySweep);
    }
    settings.validate()?;
    let items: Vec<SweepItem> = params
        .par_iter()
        .map(
            |&param| match Model::new(kind, param).and_then(|m| verify_levinson(&m, settings)) {
                Ok(v) => SweepItem {
                    param,
                    verdict: Some(v),
                    error: None,
                },
                Err(e) => SweepItem {
                    param,
                    verdict: None,
                    error: Some(e.to_string()),
                },
            },
        )
        .collect();
    let passes = items.iter().filter(|i| i.passed()).count();
    Ok(SweepReport {
        model: kind,
        tolerance: settings.tolerance,
        samples_per_side: settings.samples_per_side,
        passes,
        failures: items.len() - passes,
        items,
    })
}

/// `n` parameters per sign region, log-spaced in `[lo, hi]`, followed by 0 and ∞.
pub fn log_sweep_params(n: usize, lo: f64, hi: f64) -> Vec<ExtendedReal> {
    let step = if n > 1 {
        (hi / lo).ln() / (n - 1) as f64
    } else {
        0.0
    };
    let mags: Vec<f64> = (0..n).map(|j| lo * (step * j as f64).exp()).collect();
    let mut out: Vec<ExtendedReal> = mags
        .iter()
        .rev()
        .map(|&m| ExtendedReal::Finite(-m))
        .collect();
    out.extend(mags.iter().map(|&m| ExtendedReal::Finite(m)));
    out.push(ExtendedReal::Finite(0.0));
    out.push(ExtendedReal::PlusInfinity);
    out
}
