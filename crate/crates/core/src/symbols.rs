//! Scalar symbols `r`, `s`, `φ`, `η` of the factorized wave operators.
//!
//! `Ω₋ − 1 = φ(A) η(−Δ) P`, where `A` is the dilation generator and `P`
//! the projection onto the active sector. For every model
//! `φ = ½(1 − r)` and `η = s − 1`; the outgoing operator `Ω₊ − 1` has the
//! same shape with `φ = ½(1 + r)` and `η = conj(s − 1)`.
//!
//! Endpoint values on the compactified axes are returned from closed-form
//! limits, never from a large surrogate argument, so that `Γ` is exactly
//! continuous at the corners of the spectral square.

use std::f64::consts::{FRAC_PI_2, LN_2, PI};

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::models::{ExtendedReal, Model, ModelKind};

pub type C64 = Complex64;

/// Euler–Mascheroni constant, `-Ψ(1)`.
#[allow(clippy::excessive_precision)]
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_860_606_512_090_082_402_431;

/// Digamma at 1.
pub const DIGAMMA_ONE: f64 = -EULER_GAMMA;

/// A point of the compactified energy axis `[0, +∞]`.
///
/// Positive energies are stored through their logarithm so that energies far
/// outside the `f64` range (needed by the logarithmic two-dimensional
/// symbol) stay representable.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum Energy {
    Zero,
    Positive { ln: f64 },
    Infinity,
}

impl Energy {
    pub fn new(eps: f64) -> Result<Self> {
        if eps.is_nan() || eps < 0.0 {
            Err(Error::EnergyOutOfRange(eps))
        } else if eps == 0.0 {
            Ok(Energy::Zero)
        } else if eps == f64::INFINITY {
            Ok(Energy::Infinity)
        } else {
            Ok(Energy::Positive { ln: eps.ln() })
        }
    }

    /// Energy `e^ln`; `ln = -∞` is zero energy and `ln = +∞` the point at infinity.
    pub fn from_ln(ln: f64) -> Result<Self> {
        if ln.is_nan() {
            Err(Error::EnergyOutOfRange(f64::NAN))
        } else if ln == f64::NEG_INFINITY {
            Ok(Energy::Zero)
        } else if ln == f64::INFINITY {
            Ok(Energy::Infinity)
        } else {
            Ok(Energy::Positive { ln })
        }
    }

    pub fn ln(self) -> f64 {
        match self {
            Energy::Zero => f64::NEG_INFINITY,
            Energy::Positive { ln } => ln,
            Energy::Infinity => f64::INFINITY,
        }
    }

    /// The energy as a float (may saturate to 0 or inf).
    pub fn value(self) -> f64 {
        self.ln().exp()
    }

    /// Momentum `k = √ε`.
    pub fn momentum(self) -> f64 {
        (0.5 * self.ln()).exp()
    }

    pub fn is_endpoint(self) -> bool {
        !matches!(self, Energy::Positive { .. })
    }
}

/// A point of the compactified dilation axis `[−∞, +∞]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Dilation(ExtendedReal);

impl Dilation {
    pub const MINUS_INFINITY: Dilation = Dilation(ExtendedReal::MinusInfinity);
    pub const PLUS_INFINITY: Dilation = Dilation(ExtendedReal::PlusInfinity);

    pub fn new(a: f64) -> Result<Self> {
        ExtendedReal::from_f64(a)
            .map(Dilation)
            .map_err(|_| Error::NanDilation)
    }

    pub fn point(self) -> ExtendedReal {
        self.0
    }

    pub fn value(self) -> f64 {
        self.0.to_f64()
    }

    pub fn is_endpoint(self) -> bool {
        !self.0.is_finite()
    }
}

/// Which wave operator the factorization describes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    /// `Ω₋`, incoming.
    #[default]
    Minus,
    /// `Ω₊`, outgoing.
    Plus,
}

fn sech(x: f64) -> f64 {
    1.0 / x.cosh()
}

/// `r` at a finite dilation coordinate; shared by the operator-level code.
pub(crate) fn r_finite(kind: ModelKind, a: f64) -> C64 {
    match kind {
        ModelKind::Delta3 | ModelKind::DeltaPrime1 => C64::new(-(PI * a).tanh(), sech(PI * a)),
        ModelKind::Delta1 => C64::new(-(PI * a).tanh(), -sech(PI * a)),
        ModelKind::Delta2 => C64::new(-(0.5 * PI * a).tanh(), 0.0),
    }
}

/// The dilation symbol `r(a)`. Its limits are `∓1` at `a = ±∞`.
pub fn r_function(model: &Model, a: Dilation) -> C64 {
    match a.point() {
        ExtendedReal::PlusInfinity => C64::new(-1.0, 0.0),
        ExtendedReal::MinusInfinity => C64::new(1.0, 0.0),
        ExtendedReal::Finite(x) => r_finite(model.kind(), x),
    }
}

/// `z / conj(z)` without overflow for huge components.
fn unimodular_ratio(z: C64) -> C64 {
    if z.re.is_infinite() || z.im.is_infinite() {
        let unit = |x: f64| if x.is_infinite() { x.signum() } else { 0.0 };
        let w = C64::new(unit(z.re), unit(z.im));
        return w * w / w.norm_sqr();
    }
    let m = z.re.abs().max(z.im.abs());
    let w = z / m;
    w * w / w.norm_sqr()
}

/// The scattering symbol `s(ε)`, unimodular on `[0, +∞]`.
pub fn s_function(model: &Model, eps: Energy) -> C64 {
    let one = C64::new(1.0, 0.0);
    let minus_one = C64::new(-1.0, 0.0);
    let param = model.param();
    match model.kind() {
        ModelKind::Delta3 => match param {
            ExtendedReal::Finite(0.0) => minus_one,
            ExtendedReal::Finite(alpha) => match eps {
                Energy::Zero => one,
                Energy::Infinity => minus_one,
                Energy::Positive { .. } => {
                    unimodular_ratio(C64::new(4.0 * PI * alpha, eps.momentum()))
                }
            },
            _ => one,
        },
        ModelKind::Delta2 => match param {
            ExtendedReal::Finite(alpha) => match eps {
                Energy::Zero | Energy::Infinity => one,
                Energy::Positive { ln } => {
                    // ln(√ξ / 2) computed from ln ξ directly.
                    let l = 2.0 * PI * alpha - DIGAMMA_ONE + 0.5 * ln - LN_2;
                    unimodular_ratio(C64::new(l, FRAC_PI_2))
                }
            },
            _ => one,
        },
        ModelKind::Delta1 => match param {
            ExtendedReal::Finite(0.0) => one,
            ExtendedReal::Finite(alpha) => match eps {
                Energy::Zero => minus_one,
                Energy::Infinity => one,
                Energy::Positive { .. } => unimodular_ratio(C64::new(2.0 * eps.momentum(), -alpha)),
            },
            _ => minus_one,
        },
        ModelKind::DeltaPrime1 => match param {
            ExtendedReal::Finite(0.0) => one,
            ExtendedReal::Finite(beta) => match eps {
                Energy::Zero => one,
                Energy::Infinity => minus_one,
                Energy::Positive { .. } => unimodular_ratio(C64::new(2.0, beta * eps.momentum())),
            },
            _ => minus_one,
        },
    }
}

/// `φ(a)`: `½(1 − r)` for `Ω₋`, `½(1 + r)` for `Ω₊`.
pub fn phi_function(model: &Model, a: Dilation, direction: Direction) -> C64 {
    let r = r_function(model, a);
    match direction {
        Direction::Minus => 0.5 * (1.0 - r),
        Direction::Plus => 0.5 * (1.0 + r),
    }
}

/// `η(ε)`: `s − 1` for `Ω₋`, `conj(s − 1)` for `Ω₊`.
pub fn eta_function(model: &Model, eps: Energy, direction: Direction) -> C64 {
    let d = s_function(model, eps) - 1.0;
    match direction {
        Direction::Minus => d,
        Direction::Plus => d.conj(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(kind: ModelKind, p: f64) -> Model {
        Model::from_f64(kind, p).unwrap()
    }

    fn close(a: C64, b: C64, tol: f64) -> bool {
        (a - b).norm() <= tol
    }

    #[test]
    fn r_examples() {
        let d = Dilation::new(0.0).unwrap();
        assert_eq!(
            r_function(&m(ModelKind::Delta3, 1.0), d),
            C64::new(0.0, 1.0)
        );
        assert_eq!(
            r_function(&m(ModelKind::Delta1, 1.0), d),
            C64::new(0.0, -1.0)
        );
        assert_eq!(
            r_function(&m(ModelKind::Delta2, 1.0), Dilation::PLUS_INFINITY),
            C64::new(-1.0, 0.0)
        );
        // -tanh(π) + i sech(π), reference digits from an arbitrary precision evaluation.
        let r = r_function(&m(ModelKind::Delta3, 1.0), Dilation::new(1.0).unwrap());
        assert!(close(
            r,
            C64::new(-0.996_272_076_220_749_9, 0.086_266_738_334_054_4),
            1e-15
        ));
    }

    #[test]
    fn s_examples() {
        let alpha = -1.0 / (4.0 * PI);
        let s = s_function(&m(ModelKind::Delta3, alpha), Energy::new(1.0).unwrap());
        assert!(close(s, C64::new(0.0, -1.0), 1e-15));

        for alpha in [-2.0, 0.3, 7.0] {
            assert_eq!(
                s_function(&m(ModelKind::Delta3, alpha), Energy::Zero),
                C64::new(1.0, 0.0)
            );
            assert_eq!(
                s_function(&m(ModelKind::Delta2, alpha), Energy::Infinity),
                C64::new(1.0, 0.0)
            );
        }
        let s = s_function(
            &m(ModelKind::Delta1, f64::INFINITY),
            Energy::new(4.0).unwrap(),
        );
        assert_eq!(s, C64::new(-1.0, 0.0));
    }

    #[test]
    fn s_rejects_negative_energy() {
        assert!(matches!(Energy::new(-1.0), Err(Error::EnergyOutOfRange(_))));
        assert!(Energy::new(f64::NAN).is_err());
    }

    #[test]
    fn phi_and_eta_examples() {
        let z = Dilation::new(0.0).unwrap();
        let p = phi_function(&m(ModelKind::Delta3, 1.0), z, Direction::Minus);
        assert!(close(p, C64::new(0.5, -0.5), 1e-16));
        let p = phi_function(
            &m(ModelKind::Delta2, 1.0),
            Dilation::MINUS_INFINITY,
            Direction::Minus,
        );
        assert_eq!(p, C64::new(0.0, 0.0));
        let p = phi_function(
            &m(ModelKind::Delta1, 1.0),
            Dilation::PLUS_INFINITY,
            Direction::Plus,
        );
        assert_eq!(p, C64::new(0.0, 0.0));

        assert_eq!(
            eta_function(&m(ModelKind::Delta3, 0.7), Energy::Zero, Direction::Minus),
            C64::new(0.0, 0.0)
        );
        for e in [Energy::Zero, Energy::new(2.5).unwrap(), Energy::Infinity] {
            assert_eq!(
                eta_function(&m(ModelKind::Delta3, 0.0), e, Direction::Minus),
                C64::new(-2.0, 0.0)
            );
        }
        // (2 - 2i)/(2 + 2i) - 1 = -i - 1
        let e = eta_function(
            &m(ModelKind::DeltaPrime1, -2.0),
            Energy::new(1.0).unwrap(),
            Direction::Minus,
        );
        assert!(close(e, C64::new(-1.0, -1.0), 1e-15));
        let ep = eta_function(
            &m(ModelKind::DeltaPrime1, -2.0),
            Energy::new(1.0).unwrap(),
            Direction::Plus,
        );
        assert!(close(ep, e.conj(), 0.0));
    }

    #[test]
    fn endpoint_continuity() {
        let models = [
            m(ModelKind::Delta3, -0.4),
            m(ModelKind::Delta3, 0.9),
            m(ModelKind::Delta2, 0.0),
            m(ModelKind::Delta1, -1.5),
            m(ModelKind::Delta1, 2.0),
            m(ModelKind::DeltaPrime1, 0.8),
        ];
        for model in models {
            let s0 = s_function(&model, Energy::Zero);
            let s_inf = s_function(&model, Energy::Infinity);
            // Delta2 converges only logarithmically in ε; use deep log energies.
            let (low, high): (Vec<f64>, Vec<f64>) = if model.kind() == ModelKind::Delta2 {
                (
                    (1..6).map(|j| -(10f64).powi(j)).collect(),
                    (1..6).map(|j| (10f64).powi(j)).collect(),
                )
            } else {
                (
                    (1..8).map(|j| -4.6 * j as f64).collect(),
                    (1..8).map(|j| 4.6 * j as f64).collect(),
                )
            };
            let d_low: Vec<f64> = low
                .iter()
                .map(|&l| (s_function(&model, Energy::from_ln(l).unwrap()) - s0).norm())
                .collect();
            let d_high: Vec<f64> = high
                .iter()
                .map(|&l| (s_function(&model, Energy::from_ln(l).unwrap()) - s_inf).norm())
                .collect();
            assert!(
                d_low.windows(2).all(|w| w[1] <= w[0] + 1e-15),
                "{model}: {d_low:?}"
            );
            assert!(
                d_high.windows(2).all(|w| w[1] <= w[0] + 1e-15),
                "{model}: {d_high:?}"
            );
            assert!(*d_low.last().unwrap() < 1e-3, "{model}");
            assert!(*d_high.last().unwrap() < 1e-3, "{model}");
        }
    }

    #[test]
    fn modulus_of_r_per_model() {
        for j in -400..=400 {
            let a = j as f64 * 0.01;
            let d = Dilation::new(a).unwrap();
            for kind in [ModelKind::Delta3, ModelKind::Delta1, ModelKind::DeltaPrime1] {
                assert!((r_function(&m(kind, 1.0), d).norm() - 1.0).abs() < 1e-14);
            }
            let r2 = r_function(&m(ModelKind::Delta2, 1.0), d);
            assert!((r2.norm() - (0.5 * PI * a).tanh().abs()).abs() < 1e-15);
        }
    }

    #[test]
    fn huge_momenta_do_not_overflow() {
        let model = m(ModelKind::Delta3, 1.0);
        let s = s_function(&model, Energy::from_ln(1e4).unwrap());
        assert!(close(s, C64::new(-1.0, 0.0), 1e-15));
        let s = s_function(
            &m(ModelKind::Delta2, -500.0),
            Energy::from_ln(6000.0).unwrap(),
        );
        assert!((s.norm() - 1.0).abs() < 1e-15);
    }
}
