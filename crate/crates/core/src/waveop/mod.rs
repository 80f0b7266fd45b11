//! Numerical check of the wave operator identities.
//!
//! The kernel form of `Ω₋ − 1` (a truncated momentum integral, see
//! [`kernel`]) is compared with the factorized form `φ(A) η(−Δ) P`, where
//! `η(−Δ)` is a multiplier in momentum space and `φ(A)` a multiplier in the
//! variable dual to `ln r` (see [`dilation`]). Both sides start from the same
//! sampled `ψ̂` and otherwise share no code.

pub mod battery;
pub mod dilation;
pub mod filon;
pub mod functions;
pub mod kernel;
pub mod transform;

use serde::Serialize;

use crate::boundary::Side;
use crate::error::{Error, Result};
use crate::models::{ExtendedReal, Model, ModelKind};
use crate::symbols::{eta_function, s_function, Direction, Energy, C64};

pub use dilation::{apply_phi_dilation, LogFunction, LogGrid};
pub use functions::{MomentumFunction, RadialFunction, Sector, UniformGrid};
pub use kernel::{kernel_apply, KernelOutput, KernelSettings};
pub use transform::{inverse_radial_fourier, radial_fourier};

/// Acceptance bound for the kernel/factorized discrepancy.
pub const IDENTITY_TOLERANCE: f64 = 1e-3;
/// Acceptance bound for `|‖Ωf‖/‖f‖ − 1|`.
pub const ISOMETRY_TOLERANCE: f64 = 1e-4;

/// Grids used by the operator checks.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Resolution {
    pub r_min: f64,
    pub r_max: f64,
    pub dr: f64,
    pub k_max: f64,
    pub dk: f64,
    pub t_min: f64,
    pub t_max: f64,
    pub dt: f64,
    pub pad: usize,
    /// Comparison window in `t = ln r`.
    pub window: (f64, f64),
    pub kernel: KernelSettings,
}

impl Default for Resolution {
    fn default() -> Self {
        Resolution {
            r_min: 1e-3,
            r_max: 100.0,
            dr: 0.01,
            k_max: 120.0,
            dk: 0.01,
            t_min: -30.0,
            t_max: 14.0,
            dt: 0.02,
            pad: 4,
            window: (1e-3f64.ln(), 1e2f64.ln()),
            kernel: KernelSettings::default(),
        }
    }
}

impl Resolution {
    /// Every step (radial, momentum, logarithmic, panel) multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Self {
        Resolution {
            dr: self.dr * factor,
            dk: self.dk * factor,
            dt: self.dt * factor,
            kernel: KernelSettings {
                panel_width: self.kernel.panel_width * factor,
                ..self.kernel
            },
            ..*self
        }
    }

    pub fn halved(&self) -> Self {
        self.scaled(0.5)
    }

    pub fn r_grid(&self) -> UniformGrid {
        UniformGrid::covering(self.r_min, self.dr, self.r_max)
    }

    pub fn k_grid(&self) -> UniformGrid {
        UniformGrid::covering(0.0, self.dk, self.k_max)
    }

    pub fn log_grid(&self) -> LogGrid {
        LogGrid::new(self.t_min, self.t_max, self.dt, self.pad)
    }
}

/// The scattering matrix on the active sector, `S = Ω₊* Ω₋`, at energy `ε`.
pub fn scattering_operator(model: &Model, eps: Energy) -> C64 {
    s_function(model, eps)
}

/// Multiplies `ψ̂(k)` by `η(k²)`.
pub fn apply_eta(mf: &MomentumFunction, model: &Model, direction: Direction) -> MomentumFunction {
    mf.map(|k, v| {
        let eps = if k == 0.0 {
            Energy::Zero
        } else {
            Energy::from_ln(2.0 * k.ln()).expect("finite momentum")
        };
        v * eta_function(model, eps, direction)
    })
}

fn check_dimension(sector: Sector, model: &Model) -> Result<()> {
    if sector.dimension() != model.dimension() {
        return Err(Error::Unsupported(format!(
            "{sector:?} input for a {}-dimensional model",
            model.dimension()
        )));
    }
    Ok(())
}

/// `φ(A) η(−Δ) P f` on the logarithmic grid, from `ψ̂ = (Pf)^`.
pub fn factorized_apply(
    psi: &MomentumFunction,
    model: &Model,
    direction: Direction,
    grid: LogGrid,
) -> Result<LogFunction> {
    let sector = psi.sector();
    check_dimension(sector, model)?;
    if sector != Sector::of_model(model.kind()) {
        return Ok(LogFunction::zeros(grid, sector));
    }
    let g = apply_eta(psi, model, direction);
    if g.values().iter().all(|v| *v == C64::new(0.0, 0.0)) {
        return Ok(LogFunction::zeros(grid, sector));
    }
    let values = transform::inverse_radial_fourier_at(&g, &grid.radii())?;
    dilation::apply_phi(
        &LogFunction::from_radial_values(grid, sector, &values),
        model,
        direction,
    )
}

fn ratio_of_norms(u_f: &LogFunction, u_h: &LogFunction) -> f64 {
    let base = u_f.norm_sqr();
    if base == 0.0 {
        return 1.0;
    }
    (u_f.add(u_h).norm_sqr() / base).sqrt()
}

/// `‖(1 + φ(A) η(−Δ) P) f‖ / ‖f‖`.
pub fn isometry_check(
    model: &Model,
    f: &RadialFunction,
    direction: Direction,
    res: &Resolution,
) -> Result<f64> {
    check_dimension(f.sector(), model)?;
    let grid = res.log_grid();
    let u_f = LogFunction::from_radial(f, grid);
    if f.sector() != Sector::of_model(model.kind()) {
        return Ok(1.0);
    }
    let psi = radial_fourier(f, res.k_grid())?;
    let u_h = factorized_apply(&psi, model, direction, grid)?;
    Ok(ratio_of_norms(&u_f, &u_h))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TimeDelay {
    pub w2: f64,
    /// The same sum on half as many intervals.
    pub w2_half: f64,
    /// Set when the two estimates differ by more than [`TIME_DELAY_WARN`].
    pub warning: bool,
}

pub const TIME_DELAY_WARN: f64 = 1e-6;
pub const TIME_DELAY_INTERVALS: usize = 4096;

fn time_delay_sum(model: &Model, n: usize) -> f64 {
    let s_at = |t: f64| s_function(model, Side::B2.traversal(model, t).0);
    let mut prev = s_at(0.0);
    let mut total = 0.0;
    for j in 0..n {
        let mid = s_at((j as f64 + 0.5) / n as f64);
        let next = s_at((j + 1) as f64 / n as f64);
        total += (mid.conj() * (next - prev)).im;
        prev = next;
    }
    total / (2.0 * std::f64::consts::PI)
}

/// `(1/2πi) ∫₀^∞ conj(s(ε)) s′(ε) dε` along the side B2 parametrization,
/// with `s′` replaced by centered differences over `n` intervals.
pub fn time_delay_w2(model: &Model, n: usize) -> Result<TimeDelay> {
    if n < 4 {
        return Err(Error::TooFewSamples { min: 4, got: n });
    }
    let w2 = time_delay_sum(model, n);
    let w2_half = time_delay_sum(model, n / 2);
    Ok(TimeDelay {
        w2,
        w2_half,
        warning: (w2 - w2_half).abs() > TIME_DELAY_WARN,
    })
}

/// One kernel-versus-factorized comparison.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CaseReport {
    pub model: ModelKind,
    pub param: ExtendedReal,
    pub test_fn: String,
    #[serde(rename = "rel_L2_error")]
    pub rel_l2_error: f64,
    /// `‖Ω₋f‖ / ‖f‖` via the factorized form.
    pub norm_ratio: f64,
    /// The same for `Ω₊`.
    pub norm_ratio_plus: f64,
    #[serde(rename = "R_cutoff")]
    pub r_cutoff: f64,
    #[serde(rename = "R_cutoff_doubled_delta")]
    pub r_cutoff_doubled_delta: f64,
    pub cutoff_warning: bool,
    pub pass: bool,
}

/// Relative distance between kernel and factorized outputs on the window.
fn window_distance(
    kernel: &KernelOutput,
    factorized: &LogFunction,
    range: std::ops::Range<usize>,
) -> f64 {
    let grid = factorized.grid();
    let half_n = 0.5 * factorized.sector().dimension() as f64;
    let (mut num, mut den) = (0.0, 0.0);
    for (i, j) in range.enumerate() {
        let uk = kernel.values[i] * (half_n * grid.t(j)).exp();
        let uf = factorized.values()[j];
        num += (uk - uf).norm_sqr();
        den += uf.norm_sqr();
    }
    match (num == 0.0, den == 0.0) {
        (true, _) => 0.0,
        (false, true) => f64::INFINITY,
        (false, false) => (num / den).sqrt(),
    }
}

/// Kernel form against factorized form for one model and test function,
/// plus both isometry ratios.
pub fn verify_case(
    model: &Model,
    f: &RadialFunction,
    label: &str,
    res: &Resolution,
) -> Result<CaseReport> {
    check_dimension(f.sector(), model)?;
    let grid = res.log_grid();
    let range = grid.window(res.window.0, res.window.1);
    let radii: Vec<f64> = range.clone().map(|j| grid.t(j).exp()).collect();

    let psi = radial_fourier(f, res.k_grid())?;
    let kern = kernel_apply(&psi, model, &radii, &res.kernel)?;
    let minus = factorized_apply(&psi, model, Direction::Minus, grid)?;
    let plus = factorized_apply(&psi, model, Direction::Plus, grid)?;
    let u_f = LogFunction::from_radial(f, grid);

    let rel_l2_error = window_distance(&kern, &minus, range);
    let norm_ratio = ratio_of_norms(&u_f, &minus);
    let norm_ratio_plus = ratio_of_norms(&u_f, &plus);
    let pass = rel_l2_error < IDENTITY_TOLERANCE
        && (norm_ratio - 1.0).abs() <= ISOMETRY_TOLERANCE
        && (norm_ratio_plus - 1.0).abs() <= ISOMETRY_TOLERANCE;
    Ok(CaseReport {
        model: model.kind(),
        param: model.param(),
        test_fn: label.to_string(),
        rel_l2_error,
        norm_ratio,
        norm_ratio_plus,
        r_cutoff: kern.r_cutoff,
        r_cutoff_doubled_delta: kern.doubled_delta,
        cutoff_warning: kern.cutoff_warning,
        pass,
    })
}
