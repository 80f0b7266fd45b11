//! The wave operator in kernel form, `(Ω₋ − 1)ψ`, as a truncated
//! oscillatory momentum integral.
//!
//! After the angular integration over the sector, every model reduces to
//!
//! `h(r) = √(2/π) · c_n(r) · ∫₀^R w(k) e^{ikr} ψ̂(k) dk`
//!
//! with `c_3(r) = 1/r`, `c_1 = 1`, and
//! `w = k²/(4πα − ik)` (n = 3), `w = −iα/(2k + iα)` (δ on the line),
//! `w = iβk/(2 − iβk)` (δ′ on the line, odd sector, `x > 0`).

use std::f64::consts::{FRAC_2_PI, PI};

use rayon::prelude::*;
use serde::Serialize;

use super::functions::{MomentumFunction, Sector};
use crate::error::{Error, Result};
use crate::models::{ExtendedReal, Model, ModelKind};
use crate::symbols::C64;

/// 10-point Gauss–Legendre rule on `[−1, 1]`, positive half.
const GL_NODES: [f64; 5] = [
    0.148_874_338_981_631_22,
    0.433_395_394_129_247_2,
    0.679_409_568_299_024_4,
    0.865_063_366_688_984_5,
    0.973_906_528_517_171_7,
];
const GL_WEIGHTS: [f64; 5] = [
    0.295_524_224_714_753,
    0.269_266_719_309_996_5,
    0.219_086_362_515_982,
    0.149_451_349_150_580_36,
    0.066_671_344_308_688_07,
];

/// Relative change under doubling of the cutoff above which a result is flagged.
pub const CUTOFF_TOLERANCE: f64 = 1e-6;
/// Panels whose node values are below this fraction of the peak are dropped.
const NEGLIGIBLE: f64 = 1e-20;
const RESEED: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KernelSettings {
    pub r_cutoff: f64,
    /// Widest panel; narrower panels of width `panel_width / 2^L` are used
    /// where `π / (2r)` demands.
    pub panel_width: f64,
}

impl Default for KernelSettings {
    fn default() -> Self {
        KernelSettings {
            r_cutoff: 60.0,
            panel_width: 0.25,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KernelOutput {
    pub radii: Vec<f64>,
    /// Result at cutoff `R`.
    pub values: Vec<C64>,
    /// Result at cutoff `2R`.
    pub values_doubled: Vec<C64>,
    pub r_cutoff: f64,
    /// `‖h_{2R} − h_R‖ / ‖h_{2R}‖` over the output radii, 0 for a zero output.
    pub doubled_delta: f64,
    pub cutoff_warning: bool,
}

/// `w(k)`, or `None` where the kernel vanishes identically.
pub fn kernel_weight(model: &Model, k: f64) -> Option<C64> {
    let i = C64::new(0.0, 1.0);
    match (model.kind(), model.param()) {
        (ModelKind::Delta3, ExtendedReal::Finite(a)) => Some(k * k / C64::new(4.0 * PI * a, -k)),
        (ModelKind::Delta1, ExtendedReal::Finite(0.0)) => None,
        (ModelKind::Delta1, ExtendedReal::Finite(a)) => Some(-i * a / C64::new(2.0 * k, a)),
        (ModelKind::Delta1, _) => Some(C64::new(-1.0, 0.0)),
        (ModelKind::DeltaPrime1, ExtendedReal::Finite(0.0)) => None,
        (ModelKind::DeltaPrime1, ExtendedReal::Finite(b)) => {
            Some(i * b * k / C64::new(2.0, -b * k))
        }
        (ModelKind::DeltaPrime1, _) => Some(C64::new(-1.0, 0.0)),
        _ => None,
    }
}

/// Node data for one panel width, shared by all radii using it.
struct Level {
    width: f64,
    /// Node offsets inside a panel.
    offsets: [f64; 10],
    /// `w(k) ψ̂(k) · weight · width/2` per panel and node.
    values: Vec<[C64; 10]>,
    /// Panels up to `R` and up to `2R`, after dropping negligible tails.
    used_r: usize,
    used_2r: usize,
}

impl Level {
    fn build(model: &Model, psi: &MomentumFunction, width: f64, r_cutoff: f64) -> Level {
        let panels_r = (r_cutoff / width).round() as usize;
        let panels = 2 * panels_r;
        let mut offsets = [0.0; 10];
        let mut weights = [0.0; 10];
        for m in 0..5 {
            offsets[4 - m] = 0.5 * width * (1.0 - GL_NODES[m]);
            offsets[5 + m] = 0.5 * width * (1.0 + GL_NODES[m]);
            weights[4 - m] = GL_WEIGHTS[m];
            weights[5 + m] = GL_WEIGHTS[m];
        }
        let values: Vec<[C64; 10]> = (0..panels)
            .map(|p| {
                let k0 = p as f64 * width;
                let mut v = [C64::new(0.0, 0.0); 10];
                for m in 0..10 {
                    let k = k0 + offsets[m];
                    let w = kernel_weight(model, k).unwrap_or_default();
                    v[m] = w * psi.eval(k) * (weights[m] * 0.5 * width);
                }
                v
            })
            .collect();
        let peak = values
            .iter()
            .flat_map(|v| v.iter().map(|x| x.norm()))
            .fold(0.0, f64::max);
        let last = values
            .iter()
            .rposition(|v| v.iter().any(|x| x.norm() > NEGLIGIBLE * peak))
            .map_or(0, |p| p + 1);
        Level {
            width,
            offsets,
            values,
            used_r: last.min(panels_r),
            used_2r: last.min(panels),
        }
    }

    /// `(∫₀^R, ∫₀^{2R})` of `w ψ̂ e^{ikr}`.
    fn integrate(&self, r: f64) -> (C64, C64) {
        let node_phase: [C64; 10] = self.offsets.map(|o| C64::from_polar(1.0, o * r));
        let step = C64::from_polar(1.0, self.width * r);
        let mut phase = C64::new(1.0, 0.0);
        let mut acc = C64::new(0.0, 0.0);
        let mut at_r = C64::new(0.0, 0.0);
        for p in 0..self.used_2r {
            if p == self.used_r {
                at_r = acc;
            }
            if p % RESEED == 0 {
                phase = C64::from_polar(1.0, p as f64 * self.width * r);
            }
            let v = &self.values[p];
            let mut s = C64::new(0.0, 0.0);
            for m in 0..10 {
                s += v[m] * node_phase[m];
            }
            acc += s * phase;
            phase *= step;
        }
        if self.used_r == self.used_2r {
            at_r = acc;
        }
        (at_r, acc)
    }
}

/// Evaluates the kernel form at the given radii from `ψ̂`.
///
/// A sector the model does not act on gives a zero result.
pub fn kernel_apply(
    psi: &MomentumFunction,
    model: &Model,
    radii: &[f64],
    settings: &KernelSettings,
) -> Result<KernelOutput> {
    let sector = psi.sector();
    if model.kind() == ModelKind::Delta2 {
        return Err(Error::Unsupported(
            "kernel form for the two-dimensional model is not available".into(),
        ));
    }
    if sector.dimension() != model.dimension() {
        return Err(Error::Unsupported(format!(
            "{sector:?} input for a {}-dimensional model",
            model.dimension()
        )));
    }
    if !(settings.r_cutoff > 0.0 && settings.panel_width > 0.0) {
        return Err(Error::GridCoverage(
            "cutoff and panel width must be positive".into(),
        ));
    }
    let k_last = psi.grid().last();
    if k_last < 2.0 * settings.r_cutoff * (1.0 - 1e-12) {
        return Err(Error::GridCoverage(format!(
            "momentum grid ends at {k_last}, below twice the cutoff {}",
            settings.r_cutoff
        )));
    }
    let zero = vec![C64::new(0.0, 0.0); radii.len()];
    let trivial = sector != Sector::of_model(model.kind()) || kernel_weight(model, 1.0).is_none();
    if trivial {
        return Ok(KernelOutput {
            radii: radii.to_vec(),
            values: zero.clone(),
            values_doubled: zero,
            r_cutoff: settings.r_cutoff,
            doubled_delta: 0.0,
            cutoff_warning: false,
        });
    }

    let level_of = |r: f64| -> u32 {
        let mut l = 0;
        while settings.panel_width / f64::from(1u32 << l) > PI / (2.0 * r) && l < 30 {
            l += 1;
        }
        l
    };
    let max_level = radii.iter().map(|&r| level_of(r)).max().unwrap_or(0);
    let levels: Vec<Level> = (0..=max_level)
        .into_par_iter()
        .map(|l| {
            Level::build(
                model,
                psi,
                settings.panel_width / f64::from(1u32 << l),
                settings.r_cutoff,
            )
        })
        .collect();

    let c = FRAC_2_PI.sqrt();
    let three_d = sector == Sector::Radial3;
    let pairs: Vec<(C64, C64)> = radii
        .par_iter()
        .map(|&r| {
            let (a, b) = levels[level_of(r) as usize].integrate(r);
            let pref = if three_d { c / r } else { c };
            (a * pref, b * pref)
        })
        .collect();
    let (values, values_doubled): (Vec<C64>, Vec<C64>) = pairs.into_iter().unzip();
    let diff: f64 = values
        .iter()
        .zip(&values_doubled)
        .map(|(a, b)| (a - b).norm_sqr())
        .sum();
    let size: f64 = values_doubled.iter().map(|b| b.norm_sqr()).sum();
    let doubled_delta = if size > 0.0 {
        (diff / size).sqrt()
    } else {
        0.0
    };
    Ok(KernelOutput {
        radii: radii.to_vec(),
        values,
        values_doubled,
        r_cutoff: settings.r_cutoff,
        doubled_delta,
        cutoff_warning: doubled_delta > CUTOFF_TOLERANCE,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::waveop::functions::UniformGrid;

    fn psi(sector: Sector, f: impl Fn(f64) -> C64) -> MomentumFunction {
        let g = UniformGrid::covering(0.0, 0.01, 120.0);
        MomentumFunction::new(g, sector, g.points().map(f).collect()).unwrap()
    }

    #[test]
    fn gauss_legendre_is_exact_to_degree_19() {
        let mut nodes = Vec::new();
        for m in 0..5 {
            nodes.push((GL_NODES[m], GL_WEIGHTS[m]));
            nodes.push((-GL_NODES[m], GL_WEIGHTS[m]));
        }
        for d in 0..20 {
            let q: f64 = nodes.iter().map(|(x, w)| w * x.powi(d)).sum();
            let exact = if d % 2 == 1 {
                0.0
            } else {
                2.0 / (d as f64 + 1.0)
            };
            assert!((q - exact).abs() < 1e-14, "degree {d}");
        }
    }

    #[test]
    fn free_model_gives_zero() {
        let p = psi(Sector::Radial3, |k| C64::new((-0.5 * k * k).exp(), 0.0));
        let m = Model::from_f64(ModelKind::Delta3, f64::INFINITY).unwrap();
        let out = kernel_apply(&p, &m, &[0.1, 1.0, 10.0], &KernelSettings::default()).unwrap();
        assert!(out.values.iter().all(|v| *v == C64::new(0.0, 0.0)));
    }

    #[test]
    fn wrong_parity_gives_zero() {
        let even = psi(Sector::Even1, |k| C64::new((-0.5 * k * k).exp(), 0.0));
        let m = Model::from_f64(ModelKind::DeltaPrime1, 2.0).unwrap();
        let out = kernel_apply(&even, &m, &[0.5, 2.0], &KernelSettings::default()).unwrap();
        assert!(out.values.iter().all(|v| v.norm() == 0.0));
        let odd = psi(Sector::Odd1, |k| C64::new(0.0, -k * (-0.5 * k * k).exp()));
        let m = Model::from_f64(ModelKind::Delta1, 3.0).unwrap();
        let out = kernel_apply(&odd, &m, &[0.5, 2.0], &KernelSettings::default()).unwrap();
        assert!(out.values.iter().all(|v| v.norm() == 0.0));
    }

    #[test]
    fn dirichlet_limit_matches_closed_form() {
        // δ on the line at α = ∞: w ≡ −1, so for ψ̂ = e^{−k²/2} the real
        // part of h is −√(2/π) ∫ cos(kr) e^{−k²/2} dk = −e^{−r²/2}.
        let p = psi(Sector::Even1, |k| C64::new((-0.5 * k * k).exp(), 0.0));
        let m = Model::from_f64(ModelKind::Delta1, f64::INFINITY).unwrap();
        let radii = [0.01, 0.5, 1.0, 3.0, 40.0];
        let out = kernel_apply(&p, &m, &radii, &KernelSettings::default()).unwrap();
        for (r, v) in radii.iter().zip(&out.values) {
            assert!((v.re + (-0.5 * r * r).exp()).abs() < 1e-8, "r = {r}: {v}");
        }
        assert!(!out.cutoff_warning);
    }

    #[test]
    fn rejects_short_momentum_grid() {
        let g = UniformGrid::covering(0.0, 0.01, 50.0);
        let p = MomentumFunction::new(
            g,
            Sector::Radial3,
            g.points().map(|k| C64::new((-k * k).exp(), 0.0)).collect(),
        )
        .unwrap();
        let m = Model::from_f64(ModelKind::Delta3, 1.0).unwrap();
        assert!(matches!(
            kernel_apply(&p, &m, &[1.0], &KernelSettings::default()),
            Err(Error::GridCoverage(_))
        ));
    }
}
