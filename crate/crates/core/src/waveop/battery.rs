//! Seeded batteries of models and test functions for the operator checks.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::{verify_case, CaseReport, RadialFunction, Resolution, Sector};
use crate::error::{Error, Result};
use crate::models::{ExtendedReal, Model, ModelKind};
use crate::symbols::C64;

/// Models with a kernel form.
pub const KERNEL_MODELS: [ModelKind; 3] =
    [ModelKind::Delta3, ModelKind::Delta1, ModelKind::DeltaPrime1];

/// Range of the characteristic momentum drawn for random parameters.
pub const KAPPA_RANGE: (f64, f64) = (0.3, 3.0);

/// `e^{−(r−c)²/2σ²} + e^{−(r+c)²/2σ²}`, multiplied by `r` in the odd sector.
/// The mirrored term makes the function smooth at the origin.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TestFunction {
    pub c: f64,
    pub sigma: f64,
}

pub const TEST_FUNCTIONS: [TestFunction; 3] = [
    TestFunction { c: 0.0, sigma: 1.0 },
    TestFunction { c: 2.0, sigma: 0.5 },
    TestFunction { c: 0.0, sigma: 3.0 },
];

impl TestFunction {
    pub fn label(&self, sector: Sector) -> String {
        let odd = if sector == Sector::Odd1 { "r*" } else { "" };
        format!("{odd}gauss(c={},sigma={})", self.c, self.sigma)
    }

    pub fn value(&self, sector: Sector, r: f64) -> f64 {
        let s2 = 2.0 * self.sigma * self.sigma;
        let g = (-(r - self.c).powi(2) / s2).exp() + (-(r + self.c).powi(2) / s2).exp();
        if sector == Sector::Odd1 {
            r * g
        } else {
            g
        }
    }

    /// Sampled on the resolution's radial grid, normalized to unit norm.
    pub fn sample(&self, sector: Sector, res: &Resolution) -> Result<RadialFunction> {
        Ok(RadialFunction::from_fn(res.r_grid(), sector, |r| {
            C64::new(self.value(sector, r), 0.0)
        })?
        .normalized())
    }
}

/// Parameter whose characteristic momentum (bound-state `κ` for negative
/// sign) equals `kappa`.
pub fn param_for_kappa(kind: ModelKind, kappa: f64, negative: bool) -> Result<ExtendedReal> {
    let sign = if negative { -1.0 } else { 1.0 };
    let p = match kind {
        ModelKind::Delta3 => kappa / (4.0 * PI),
        ModelKind::Delta1 => 2.0 * kappa,
        ModelKind::DeltaPrime1 => 2.0 / kappa,
        ModelKind::Delta2 => return Err(Error::Unsupported("no kernel form for delta2".into())),
    };
    Ok(ExtendedReal::Finite(sign * p))
}

/// `count` parameters with log-uniform `κ` in [`KAPPA_RANGE`] and random sign.
/// Each model draws from its own stream derived from `seed`.
pub fn random_params(kind: ModelKind, count: usize, seed: u64) -> Result<Vec<ExtendedReal>> {
    let stream = ModelKind::ALL.iter().position(|k| *k == kind).unwrap_or(0) as u64;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    let (lo, hi) = (KAPPA_RANGE.0.ln(), KAPPA_RANGE.1.ln());
    (0..count)
        .map(|_| {
            let kappa = rng.gen_range(lo..hi).exp();
            let negative = rng.gen_bool(0.5);
            param_for_kappa(kind, kappa, negative)
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BatteryReport {
    pub seed: u64,
    pub resolution: Resolution,
    pub passes: usize,
    pub failures: usize,
    pub max_rel_l2_error: f64,
    pub max_norm_deviation: f64,
    pub cases: Vec<CaseReport>,
}

impl BatteryReport {
    pub fn from_cases(seed: u64, resolution: Resolution, cases: Vec<CaseReport>) -> Self {
        let passes = cases.iter().filter(|c| c.pass).count();
        let max_rel_l2_error = cases.iter().map(|c| c.rel_l2_error).fold(0.0, f64::max);
        let max_norm_deviation = cases
            .iter()
            .map(|c| {
                (c.norm_ratio - 1.0)
                    .abs()
                    .max((c.norm_ratio_plus - 1.0).abs())
            })
            .fold(0.0, f64::max);
        BatteryReport {
            seed,
            resolution,
            passes,
            failures: cases.len() - passes,
            max_rel_l2_error,
            max_norm_deviation,
            cases,
        }
    }

    pub fn all_pass(&self) -> bool {
        self.failures == 0
    }
}

/// All (model, parameter, test function) combinations, in a fixed order.
pub fn battery_cases(
    models: &[ModelKind],
    params_per_model: usize,
    seed: u64,
) -> Result<Vec<(Model, TestFunction)>> {
    let mut out = Vec::new();
    for &kind in models {
        for p in random_params(kind, params_per_model, seed)? {
            let model = Model::new(kind, p)?;
            out.extend(TEST_FUNCTIONS.iter().map(|tf| (model, *tf)));
        }
    }
    Ok(out)
}

/// Runs the random battery; cases are evaluated in parallel and reported in order.
pub fn run_battery(
    models: &[ModelKind],
    params_per_model: usize,
    seed: u64,
    res: &Resolution,
) -> Result<BatteryReport> {
    let cases = battery_cases(models, params_per_model, seed)?;
    let reports = cases
        .par_iter()
        .map(|(model, tf)| {
            let sector = Sector::of_model(model.kind());
            let f = tf.sample(sector, res)?;
            verify_case(model, &f, &tf.label(sector), res)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(BatteryReport::from_cases(seed, *res, reports))
}

/// Fixed cases: a bound-state Delta3 model, the free Delta3 model, and an
/// even input to the δ′ model, which must be left untouched.
pub fn reference_cases(res: &Resolution) -> Result<Vec<CaseReport>> {
    let tf = TEST_FUNCTIONS[0];
    let mut out = Vec::new();
    for p in [-1.0, f64::INFINITY] {
        let model = Model::from_f64(ModelKind::Delta3, p)?;
        let f = tf.sample(Sector::Radial3, res)?;
        out.push(verify_case(&model, &f, &tf.label(Sector::Radial3), res)?);
    }
    let model = Model::from_f64(ModelKind::DeltaPrime1, 2.0)?;
    let f = tf.sample(Sector::Even1, res)?;
    out.push(verify_case(&model, &f, &tf.label(Sector::Even1), res)?);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn params_are_reproducible_and_in_range() {
        let a = random_params(ModelKind::Delta1, 10, 7).unwrap();
        let b = random_params(ModelKind::Delta1, 10, 7).unwrap();
        assert_eq!(a, b);
        let c = random_params(ModelKind::DeltaPrime1, 10, 7).unwrap();
        for (p, q) in a.iter().zip(&c) {
            let kappa = p.to_f64().abs() / 2.0;
            assert!((KAPPA_RANGE.0..KAPPA_RANGE.1).contains(&kappa));
            // Independent streams per model.
            assert!((q.to_f64().abs() - 2.0 / kappa).abs() > 1e-12);
        }
        assert!(a.iter().any(|p| p.to_f64() < 0.0) && a.iter().any(|p| p.to_f64() > 0.0));
    }

    #[test]
    fn kappa_matches_bound_state() {
        use crate::models::{bound_state_energies, BoundStateEnergies};
        for kind in KERNEL_MODELS {
            let p = param_for_kappa(kind, 1.7, true).unwrap();
            let m = Model::new(kind, p).unwrap();
            let BoundStateEnergies::Values { energies, .. } = bound_state_energies(&m) else {
                panic!("expected values");
            };
            assert!((energies[0] + 1.7 * 1.7).abs() < 1e-12);
        }
    }

    #[test]
    fn test_functions_are_smooth_and_normalized() {
        let res = Resolution::default();
        for tf in TEST_FUNCTIONS {
            for sector in [Sector::Radial3, Sector::Even1, Sector::Odd1] {
                let f = tf.sample(sector, &res).unwrap();
                assert!((f.norm_sqr() - 1.0).abs() < 1e-12);
            }
            // even in r: no linear term at the origin
            let d = (tf.value(Sector::Even1, 1e-4) - tf.value(Sector::Even1, 0.0)) / 1e-4;
            assert!(d.abs() < 1e-3);
        }
    }
}
