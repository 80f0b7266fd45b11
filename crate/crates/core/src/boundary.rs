//! The boundary function `Γ(ε, a) = φ(a) η(ε) + 1` on the compactified
//! spectral square `[0, +∞] × [−∞, +∞]`.
//!
//! The boundary is split into four sides:
//!
//! | side | frozen      | running            |
//! |------|-------------|--------------------|
//! | B1   | `ε = 0`     | `a: −∞ → +∞`       |
//! | B2   | `a = +∞`    | `ε: 0 → +∞`        |
//! | B3   | `ε = +∞`    | `a: +∞ → −∞`       |
//! | B4   | `a = −∞`    | `ε: +∞ → 0`        |
//!
//! and the closed loop is traversed B2 → B3 → B4 → B1, which puts the natural
//! order of `[0, +∞]` on B2.
//!
//! Each side is parametrized by `t ∈ [0, 1]`. The dilation coordinate uses
//! `a = tan(π(t − ½))`. The energy coordinate is sampled in log-energy,
//! `ln ε = ln ε* + tan(π(t − ½))`, centred on the model's characteristic
//! energy `ε*` (the modulus of the scattering pole, or for the
//! two-dimensional model the energy at which the logarithm in `s` crosses
//! zero). Without the centring the two-dimensional symbol, which varies on
//! the scale `ln ε ~ 4πα`, would hide whole turns between samples.

use std::f64::consts::{LN_2, PI};
use std::fmt;
use std::io::Write;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::models::{ExtendedReal, Model, ModelKind};
use crate::symbols::{eta_function, phi_function, Dilation, Direction, Energy, C64, DIGAMMA_ONE};

/// `|Γ|` below this aborts sampling: Γ is valued in `C \ {0}`.
pub const MODULUS_GUARD: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Side {
    B1,
    B2,
    B3,
    B4,
}

/// Running axis of a side.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Axis {
    Energy,
    Dilation,
}

impl Side {
    /// Sides in id order.
    pub const ALL: [Side; 4] = [Side::B1, Side::B2, Side::B3, Side::B4];
    /// Sides in traversal order of the closed loop.
    pub const LOOP_ORDER: [Side; 4] = [Side::B2, Side::B3, Side::B4, Side::B1];

    pub fn index(self) -> usize {
        match self {
            Side::B1 => 0,
            Side::B2 => 1,
            Side::B3 => 2,
            Side::B4 => 3,
        }
    }

    pub fn running_axis(self) -> Axis {
        match self {
            Side::B1 | Side::B3 => Axis::Dilation,
            Side::B2 | Side::B4 => Axis::Energy,
        }
    }

    /// The frozen coordinate of the side.
    pub fn frozen_value(self) -> ExtendedReal {
        match self {
            Side::B1 => ExtendedReal::Finite(0.0),
            Side::B2 | Side::B3 => ExtendedReal::PlusInfinity,
            Side::B4 => ExtendedReal::MinusInfinity,
        }
    }

    /// Point of the square at parameter `t ∈ [0, 1]` along this side.
    pub fn traversal(self, model: &Model, t: f64) -> (Energy, Dilation) {
        let centre = energy_scale_ln(model);
        let energy = |u: f64| {
            let x = unit_to_line(u);
            Energy::from_ln(centre + x).expect("finite centre")
        };
        let dilation = |u: f64| Dilation::new(unit_to_line(u)).expect("t is not NaN");
        match self {
            Side::B1 => (Energy::Zero, dilation(t)),
            Side::B2 => (energy(t), Dilation::PLUS_INFINITY),
            Side::B3 => (Energy::Infinity, dilation(1.0 - t)),
            Side::B4 => (energy(1.0 - t), Dilation::MINUS_INFINITY),
        }
    }
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Side::B1 => "B1",
            Side::B2 => "B2",
            Side::B3 => "B3",
            Side::B4 => "B4",
        };
        f.write_str(s)
    }
}

/// `[0, 1] → [−∞, +∞]`, `t ↦ tan(π(t − ½))` with exact infinite endpoints.
pub fn unit_to_line(t: f64) -> f64 {
    if t <= 0.0 {
        f64::NEG_INFINITY
    } else if t >= 1.0 {
        f64::INFINITY
    } else if t == 0.5 {
        0.0
    } else {
        (PI * (t - 0.5)).tan()
    }
}

/// Logarithm of the energy around which the model's `s` turns.
pub fn energy_scale_ln(model: &Model) -> f64 {
    let Some(p) = model.param().finite() else {
        return 0.0;
    };
    match model.kind() {
        ModelKind::Delta2 => 2.0 * (LN_2 + DIGAMMA_ONE - 2.0 * PI * p),
        _ if p == 0.0 => 0.0,
        ModelKind::Delta3 => 2.0 * (4.0 * PI * p.abs()).ln(),
        ModelKind::Delta1 => 2.0 * (0.5 * p.abs()).ln(),
        ModelKind::DeltaPrime1 => (4.0f64).ln() - 2.0 * p.abs().ln(),
    }
}

/// `Γ(ε, a)`; only defined when at least one coordinate is a compactification point.
pub fn gamma_at(model: &Model, eps: Energy, a: Dilation, direction: Direction) -> Result<C64> {
    if !eps.is_endpoint() && !a.is_endpoint() {
        return Err(Error::InteriorPoint);
    }
    Ok(phi_function(model, a, direction) * eta_function(model, eps, direction) + 1.0)
}

/// `Γ` restricted to one side, as a function of the side parameter.
pub fn gamma_on_side(model: &Model, side: Side, t: f64, direction: Direction) -> Result<C64> {
    let (eps, a) = side.traversal(model, t);
    let g = gamma_at(model, eps, a, direction)?;
    let modulus = g.norm();
    if modulus.is_nan() || modulus < MODULUS_GUARD {
        return Err(Error::NearZero {
            side: side.to_string(),
            t,
            modulus,
        });
    }
    Ok(g)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LoopSample {
    pub side: Side,
    pub t: f64,
    /// Value of the running coordinate (ε or a); may saturate to 0 or ±inf.
    pub coordinate: f64,
    pub value: C64,
}

/// Sampled restriction of `Γ` to one or more sides.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LoopSamples {
    pub samples: Vec<LoopSample>,
    /// Index of the first sample of each side, in traversal order.
    pub side_starts: Vec<(Side, usize)>,
    pub n_per_side: usize,
}

impl LoopSamples {
    pub fn values(&self) -> Vec<C64> {
        self.samples.iter().map(|s| s.value).collect()
    }

    pub fn is_closed(&self) -> bool {
        match (self.samples.first(), self.samples.last()) {
            (Some(a), Some(b)) => a.value == b.value,
            _ => false,
        }
    }

    /// CSV with header `side,t,eps_or_a,re,im`, LF line endings.
    pub fn write_csv<W: Write>(&self, out: W) -> std::io::Result<()> {
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(out);
        w.write_record(["side", "t", "eps_or_a", "re", "im"])?;
        for s in &self.samples {
            w.write_record([
                s.side.to_string(),
                format!("{}", s.t),
                format!("{}", s.coordinate),
                format!("{}", s.value.re),
                format!("{}", s.value.im),
            ])?;
        }
        w.flush()
    }
}

fn sample_side(
    model: &Model,
    side: Side,
    n: usize,
    direction: Direction,
) -> Result<Vec<LoopSample>> {
    (0..n)
        .map(|j| {
            let t = j as f64 / (n - 1) as f64;
            let (eps, a) = side.traversal(model, t);
            let coordinate = match side.running_axis() {
                Axis::Energy => eps.value(),
                Axis::Dilation => a.value(),
            };
            Ok(LoopSample {
                side,
                t,
                coordinate,
                value: gamma_on_side(model, side, t, direction)?,
            })
        })
        .collect()
}

/// Samples `Γ_i` at `n_samples` equispaced side parameters, endpoints included.
pub fn side_curve(
    model: &Model,
    side: Side,
    n_samples: usize,
    direction: Direction,
) -> Result<LoopSamples> {
    if n_samples < 2 {
        return Err(Error::TooFewSamples {
            min: 2,
            got: n_samples,
        });
    }
    Ok(LoopSamples {
        samples: sample_side(model, side, n_samples, direction)?,
        side_starts: vec![(side, 0)],
        n_per_side: n_samples,
    })
}

/// The closed loop B2 → B3 → B4 → B1; corner samples are shared, so the
/// first and last sample coincide.
pub fn full_loop(model: &Model, n_per_side: usize, direction: Direction) -> Result<LoopSamples> {
    if n_per_side < 2 {
        return Err(Error::TooFewSamples {
            min: 2,
            got: n_per_side,
        });
    }
    let mut samples = Vec::with_capacity(4 * n_per_side);
    let mut side_starts = Vec::with_capacity(4);
    for (i, side) in Side::LOOP_ORDER.into_iter().enumerate() {
        let arc = sample_side(model, side, n_per_side, direction)?;
        if i == 0 {
            side_starts.push((side, 0));
            samples.extend(arc);
        } else {
            // The corner already closes the previous side.
            side_starts.push((side, samples.len() - 1));
            samples.extend(arc.into_iter().skip(1));
        }
    }
    Ok(LoopSamples {
        samples,
        side_starts,
        n_per_side,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbols::s_function;

    fn m(kind: ModelKind, p: f64) -> Model {
        Model::from_f64(kind, p).unwrap()
    }

    #[test]
    fn gamma_examples() {
        let zero_a = Dilation::new(0.0).unwrap();
        let g = gamma_at(
            &m(ModelKind::Delta3, -1.0),
            Energy::Zero,
            zero_a,
            Direction::Minus,
        )
        .unwrap();
        assert_eq!(g, C64::new(1.0, 0.0));
        let g = gamma_at(
            &m(ModelKind::Delta3, 0.0),
            Energy::Zero,
            zero_a,
            Direction::Minus,
        )
        .unwrap();
        assert!((g - C64::new(0.0, 1.0)).norm() < 1e-16);
        for kind in ModelKind::ALL {
            for p in [-2.0, 0.0, 0.5, f64::INFINITY] {
                for eps in [Energy::Zero, Energy::new(0.3).unwrap(), Energy::Infinity] {
                    let g = gamma_at(&m(kind, p), eps, Dilation::MINUS_INFINITY, Direction::Minus)
                        .unwrap();
                    assert_eq!(g, C64::new(1.0, 0.0));
                }
            }
        }
    }

    #[test]
    fn interior_points_rejected() {
        let r = gamma_at(
            &m(ModelKind::Delta1, 1.0),
            Energy::new(1.0).unwrap(),
            Dilation::new(0.2).unwrap(),
            Direction::Minus,
        );
        assert_eq!(r, Err(Error::InteriorPoint));
    }

    #[test]
    fn free_loop_is_constant() {
        let lp = side_curve(
            &m(ModelKind::Delta3, f64::INFINITY),
            Side::B2,
            100,
            Direction::Minus,
        )
        .unwrap();
        assert_eq!(lp.samples.len(), 100);
        assert!(lp.samples.iter().all(|s| s.value == C64::new(1.0, 0.0)));
        let lp = full_loop(&m(ModelKind::Delta3, f64::INFINITY), 50, Direction::Minus).unwrap();
        assert!(lp.samples.iter().all(|s| s.value == C64::new(1.0, 0.0)));
        assert!(lp.is_closed());
    }

    #[test]
    fn side_endpoints() {
        let lp = side_curve(&m(ModelKind::Delta2, 1.0), Side::B2, 33, Direction::Minus).unwrap();
        assert_eq!(lp.samples[0].value, C64::new(1.0, 0.0));
        assert_eq!(lp.samples[32].value, C64::new(1.0, 0.0));

        // Γ1(a) = 1 - 2φ(a) with η(0) = -2.
        let lp = side_curve(&m(ModelKind::Delta1, -2.0), Side::B1, 17, Direction::Minus).unwrap();
        assert_eq!(lp.samples[0].value, C64::new(1.0, 0.0));
        assert_eq!(lp.samples[16].value, C64::new(-1.0, 0.0));
    }

    #[test]
    fn delta2_loop_only_moves_on_b2() {
        let lp = full_loop(&m(ModelKind::Delta2, 3.0), 200, Direction::Minus).unwrap();
        for s in &lp.samples {
            if s.side != Side::B2 {
                assert_eq!(s.value, C64::new(1.0, 0.0), "{:?}", s);
            }
        }
        assert!(lp.samples.iter().any(|s| (s.value - 1.0).norm() > 0.5));
    }

    #[test]
    fn loop_is_closed_and_corners_agree() {
        for kind in ModelKind::ALL {
            for p in [-1.3, 0.0, 0.2, f64::INFINITY] {
                let model = m(kind, p);
                let lp = full_loop(&model, 9, Direction::Minus).unwrap();
                assert!(lp.is_closed());
                assert_eq!(lp.samples.len(), 4 * 8 + 1);
                for side in Side::ALL {
                    let s0 = gamma_on_side(&model, side, 1.0, Direction::Minus).unwrap();
                    let next = Side::LOOP_ORDER
                        [(Side::LOOP_ORDER.iter().position(|&x| x == side).unwrap() + 1) % 4];
                    let s1 = gamma_on_side(&model, next, 0.0, Direction::Minus).unwrap();
                    assert_eq!(s0, s1, "{model} corner {side}->{next}");
                }
            }
        }
    }

    #[test]
    fn b2_is_the_scattering_symbol() {
        for kind in ModelKind::ALL {
            for p in [-0.7, 0.0, 1.9, f64::INFINITY] {
                let model = m(kind, p);
                for j in 0..=64 {
                    let t = j as f64 / 64.0;
                    let (eps, _) = Side::B2.traversal(&model, t);
                    let g = gamma_on_side(&model, Side::B2, t, Direction::Minus).unwrap();
                    assert!((g - s_function(&model, eps)).norm() < 1e-15);
                }
            }
        }
    }

    #[test]
    fn csv_layout() {
        let lp = full_loop(&m(ModelKind::Delta3, -1.0), 5, Direction::Minus).unwrap();
        let mut buf = Vec::new();
        lp.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "side,t,eps_or_a,re,im");
        assert_eq!(lines.len(), 1 + 17);
        assert!(!text.contains('\r'));
        for side in ["B1", "B2", "B3", "B4"] {
            assert!(lines.iter().any(|l| l.starts_with(side)));
        }
    }

    #[test]
    fn too_few_samples() {
        assert!(matches!(
            full_loop(&m(ModelKind::Delta1, 1.0), 1, Direction::Minus),
            Err(Error::TooFewSamples { .. })
        ));
    }
}
