//! Winding numbers of piecewise-parametrized closed curves around 0.
//!
//! Every arc is sampled on a uniform grid of its parameter and the phase is
//! accumulated from principal-value differences `arg(z_{j+1} / z_j)`. An
//! interval whose step is not below `π/2` is bisected through the curve's
//! evaluator, up to [`REFINEMENT_CAP`] levels. Once every step is below `π`
//! the accumulated phase is the exact phase increment of the arc, so arc
//! windings are exact up to rounding.

use std::f64::consts::{FRAC_PI_2, TAU};

use serde::Serialize;

use crate::boundary::{gamma_on_side, LoopSamples, Side};
use crate::error::{Error, Result};
use crate::models::Model;
use crate::symbols::{Direction, C64};

/// Largest accepted phase step between neighbouring samples.
pub const MAX_PHASE_STEP: f64 = FRAC_PI_2;
/// Bisection levels per interval.
pub const REFINEMENT_CAP: u32 = 20;
/// Distance within which an arc winding is snapped to a half-integer.
pub const SNAP_TOLERANCE: f64 = 1e-6;
/// Gap allowed between the end of one arc and the start of the next.
pub const CLOSURE_TOLERANCE: f64 = 1e-12;

/// A closed curve given as consecutive arcs, each parametrized by `[0, 1]`.
pub trait PiecewiseCurve {
    fn arc_count(&self) -> usize;
    fn arc_label(&self, arc: usize) -> String;
    fn eval(&self, arc: usize, t: f64) -> Result<C64>;
}

/// Principal-value phase step from `a` to `b`, in `(−π, π]`.
pub fn phase_step(a: C64, b: C64) -> f64 {
    (b * a.conj()).arg()
}

/// Rounds to the nearest half-integer when within [`SNAP_TOLERANCE`].
pub fn snap_half(x: f64) -> Option<f64> {
    let h = (2.0 * x).round() / 2.0;
    ((x - h).abs() < SNAP_TOLERANCE).then_some(h)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ArcWinding {
    pub label: String,
    pub winding: f64,
    pub snapped: Option<f64>,
    pub samples: usize,
    pub max_phase_step: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WindingReport {
    pub arcs: Vec<ArcWinding>,
    /// Sum of the arc windings.
    pub w_total: f64,
    pub max_phase_step: f64,
}

struct ArcAccumulator {
    phase: f64,
    samples: usize,
    max_step: f64,
}

fn refine<C: PiecewiseCurve + ?Sized>(
    curve: &C,
    arc: usize,
    (ta, za): (f64, C64),
    (tb, zb): (f64, C64),
    depth: u32,
    acc: &mut ArcAccumulator,
) -> Result<()> {
    let d = phase_step(za, zb);
    if d.abs() < MAX_PHASE_STEP {
        acc.phase += d;
        acc.max_step = acc.max_step.max(d.abs());
        return Ok(());
    }
    if depth >= REFINEMENT_CAP {
        return Err(Error::RefinementExhausted {
            side: curve.arc_label(arc),
            cap: REFINEMENT_CAP,
        });
    }
    let tm = 0.5 * (ta + tb);
    let zm = curve.eval(arc, tm)?;
    acc.samples += 1;
    refine(curve, arc, (ta, za), (tm, zm), depth + 1, acc)?;
    refine(curve, arc, (tm, zm), (tb, zb), depth + 1, acc)
}

/// Phase increment of one arc divided by `2π`, with adaptive refinement.
pub fn arc_winding<C: PiecewiseCurve + ?Sized>(
    curve: &C,
    arc: usize,
    n0: usize,
) -> Result<ArcWinding> {
    if n0 < 1 {
        return Err(Error::TooFewSamples { min: 1, got: n0 });
    }
    let mut acc = ArcAccumulator {
        phase: 0.0,
        samples: n0 + 1,
        max_step: 0.0,
    };
    let mut prev = (0.0, curve.eval(arc, 0.0)?);
    for j in 1..=n0 {
        let t = j as f64 / n0 as f64;
        let next = (t, curve.eval(arc, t)?);
        refine(curve, arc, prev, next, 0, &mut acc)?;
        prev = next;
    }
    let winding = acc.phase / TAU;
    Ok(ArcWinding {
        label: curve.arc_label(arc),
        winding,
        snapped: snap_half(winding),
        samples: acc.samples,
        max_phase_step: acc.max_step,
    })
}

/// Winding number of a closed piecewise curve around the origin.
pub fn winding_number<C: PiecewiseCurve + ?Sized>(
    curve: &C,
    n_per_arc: usize,
) -> Result<WindingReport> {
    let n = curve.arc_count();
    for i in 0..n {
        let j = (i + 1) % n;
        let end = curve.eval(i, 1.0)?;
        let start = curve.eval(j, 0.0)?;
        let gap = (end - start).norm();
        if gap > CLOSURE_TOLERANCE {
            return Err(Error::NotClosed {
                location: format!("{} -> {}", curve.arc_label(i), curve.arc_label(j)),
                gap,
            });
        }
    }
    let arcs = (0..n)
        .map(|i| arc_winding(curve, i, n_per_arc))
        .collect::<Result<Vec<_>>>()?;
    let w_total = arcs.iter().map(|a| a.winding).sum();
    let max_phase_step = arcs.iter().map(|a| a.max_phase_step).fold(0.0, f64::max);
    Ok(WindingReport {
        arcs,
        w_total,
        max_phase_step,
    })
}

/// `Γ` on the boundary of the spectral square, arcs in loop order B2, B3, B4, B1.
#[derive(Debug, Clone, Copy)]
pub struct BoundaryLoop {
    pub model: Model,
    pub direction: Direction,
}

impl PiecewiseCurve for BoundaryLoop {
    fn arc_count(&self) -> usize {
        4
    }

    fn arc_label(&self, arc: usize) -> String {
        Side::LOOP_ORDER[arc].to_string()
    }

    fn eval(&self, arc: usize, t: f64) -> Result<C64> {
        gamma_on_side(&self.model, Side::LOOP_ORDER[arc], t, self.direction)
    }
}

/// A single side of the boundary, viewed as an open arc.
struct SingleSide {
    model: Model,
    side: Side,
    direction: Direction,
}

impl PiecewiseCurve for SingleSide {
    fn arc_count(&self) -> usize {
        1
    }

    fn arc_label(&self, _: usize) -> String {
        self.side.to_string()
    }

    fn eval(&self, _: usize, t: f64) -> Result<C64> {
        gamma_on_side(&self.model, self.side, t, self.direction)
    }
}

/// Per-side windings of `Γ`, indexed B1..B4.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundaryWinding {
    pub w1: f64,
    pub w2: f64,
    pub w3: f64,
    pub w4: f64,
    pub w_total: f64,
    /// Half-integer snaps of `w1..w4`, `null` when not within tolerance.
    pub snapped: [Option<f64>; 4],
    /// Samples used per side after refinement.
    pub samples: [usize; 4],
    pub max_phase_step: f64,
}

impl BoundaryWinding {
    pub fn sides(&self) -> [f64; 4] {
        [self.w1, self.w2, self.w3, self.w4]
    }

    fn from_report(report: &WindingReport) -> Self {
        let mut w = [0.0; 4];
        let mut snapped = [None; 4];
        let mut samples = [0; 4];
        for (arc, side) in report.arcs.iter().zip(Side::LOOP_ORDER) {
            let i = side.index();
            w[i] = arc.winding;
            snapped[i] = arc.snapped;
            samples[i] = arc.samples;
        }
        BoundaryWinding {
            w1: w[0],
            w2: w[1],
            w3: w[2],
            w4: w[3],
            w_total: report.w_total,
            snapped,
            samples,
            max_phase_step: report.max_phase_step,
        }
    }
}

/// Adaptive winding of `Γ` around the full boundary.
pub fn boundary_winding(
    model: &Model,
    n_per_side: usize,
    direction: Direction,
) -> Result<BoundaryWinding> {
    let report = winding_number(
        &BoundaryLoop {
            model: *model,
            direction,
        },
        n_per_side,
    )?;
    Ok(BoundaryWinding::from_report(&report))
}

/// Adaptive winding `w_i` of `Γ` restricted to one side.
pub fn side_winding(model: &Model, side: Side, n0: usize, direction: Direction) -> Result<f64> {
    let curve = SingleSide {
        model: *model,
        side,
        direction,
    };
    Ok(arc_winding(&curve, 0, n0)?.winding)
}

/// Non-adaptive winding of a pre-sampled full loop.
///
/// Without access to the generating function no refinement is possible, so
/// any step of `π/2` or more is reported as exhausted refinement.
pub fn winding_from_samples(samples: &LoopSamples) -> Result<BoundaryWinding> {
    if !samples.is_closed() {
        let gap = match (samples.samples.first(), samples.samples.last()) {
            (Some(a), Some(b)) => (a.value - b.value).norm(),
            _ => f64::NAN,
        };
        return Err(Error::NotClosed {
            location: "first/last sample".into(),
            gap,
        });
    }
    let mut w = [0.0; 4];
    let mut counts = [0usize; 4];
    let mut max_step: f64 = 0.0;
    let starts = &samples.side_starts;
    for (k, &(side, start)) in starts.iter().enumerate() {
        let end = starts.get(k + 1).map_or(samples.samples.len() - 1, |s| s.1);
        let mut phase = 0.0;
        for pair in samples.samples[start..=end].windows(2) {
            let d = phase_step(pair[0].value, pair[1].value);
            if d.abs() >= MAX_PHASE_STEP {
                return Err(Error::RefinementExhausted {
                    side: side.to_string(),
                    cap: 0,
                });
            }
            max_step = max_step.max(d.abs());
            phase += d;
        }
        w[side.index()] = phase / TAU;
        counts[side.index()] = end - start + 1;
    }
    Ok(BoundaryWinding {
        w1: w[0],
        w2: w[1],
        w3: w[2],
        w4: w[3],
        w_total: w.iter().sum(),
        snapped: w.map(snap_half),
        samples: counts,
        max_phase_step: max_step,
    })
}
