//! Functions of the dilation generator.
//!
//! With `r = e^t` and `u(t) = e^{nt/2} f(e^t)`, the map `f ↦ u` is unitary
//! from the sector onto `L²(R, dt)` (up to the constant surface factor) and
//! the dilation group `(U(θ)f)(r) = e^{nθ/2} f(e^θ r)` becomes the shift
//! `u(t) ↦ u(t + θ)`. Its generator is `−i d/dt`, so a function `φ(A)` acts
//! as the Fourier multiplier `φ(τ)` where `û(τ) = ∫ u(t) e^{−iτt} dt`.

use std::f64::consts::PI;
use std::ops::Range;

use rustfft::FftPlanner;

use super::filon::interp_uniform;
use super::functions::{RadialFunction, Sector};
use crate::error::{Error, Result};
use crate::models::Model;
use crate::symbols::{phi_function, Dilation, Direction, C64};

/// Largest spectral magnitude allowed near the Nyquist frequency, relative to the peak.
pub const NYQUIST_TOLERANCE: f64 = 1e-6;
/// Fraction of the Nyquist frequency above which content counts as aliasing risk.
const NYQUIST_BAND: f64 = 0.9;

/// `t_j = t_min + j·dt`, `j = 0..n`, zero padded to `pad·n` (rounded up to a
/// power of two) before transforming.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct LogGrid {
    pub t_min: f64,
    pub dt: f64,
    pub n: usize,
    pub pad: usize,
}

impl LogGrid {
    pub fn new(t_min: f64, t_max: f64, dt: f64, pad: usize) -> Self {
        let n = ((t_max - t_min) / dt).round() as usize + 1;
        LogGrid {
            t_min,
            dt,
            n,
            pad: pad.max(1),
        }
    }

    pub fn t(&self, j: usize) -> f64 {
        self.t_min + j as f64 * self.dt
    }

    pub fn radii(&self) -> Vec<f64> {
        (0..self.n).map(|j| self.t(j).exp()).collect()
    }

    pub fn fft_len(&self) -> usize {
        (self.n * self.pad).next_power_of_two()
    }

    /// Indices of grid points with `t ∈ [lo, hi]`.
    pub fn window(&self, lo: f64, hi: f64) -> Range<usize> {
        let eps = 1e-9 * self.dt;
        let a = ((lo - self.t_min - eps) / self.dt).ceil().max(0.0) as usize;
        let b = (((hi - self.t_min + eps) / self.dt).floor() as usize + 1).min(self.n);
        a..b.max(a)
    }
}

/// A sector function in the logarithmic variable.
#[derive(Debug, Clone, PartialEq)]
pub struct LogFunction {
    grid: LogGrid,
    sector: Sector,
    u: Vec<C64>,
}

impl LogFunction {
    pub fn zeros(grid: LogGrid, sector: Sector) -> Self {
        LogFunction {
            grid,
            sector,
            u: vec![C64::new(0.0, 0.0); grid.n],
        }
    }

    /// From values `g(r_j)` at the grid radii `r_j = e^{t_j}`.
    pub fn from_radial_values(grid: LogGrid, sector: Sector, g: &[C64]) -> Self {
        let half_n = 0.5 * sector.dimension() as f64;
        let u = g
            .iter()
            .enumerate()
            .map(|(j, v)| v * (half_n * grid.t(j)).exp())
            .collect();
        LogFunction { grid, sector, u }
    }

    /// Interpolates `f` at `e^{t_j}`; radii below the sampled range use the
    /// first cubic, radii beyond it are taken as zero.
    pub fn from_radial(f: &RadialFunction, grid: LogGrid) -> Self {
        let g = f.grid();
        let values: Vec<C64> = grid
            .radii()
            .into_iter()
            .map(|r| {
                if r > g.last() {
                    C64::new(0.0, 0.0)
                } else {
                    f.eval(r)
                }
            })
            .collect();
        Self::from_radial_values(grid, f.sector(), &values)
    }

    pub fn grid(&self) -> LogGrid {
        self.grid
    }

    pub fn sector(&self) -> Sector {
        self.sector
    }

    pub fn values(&self) -> &[C64] {
        &self.u
    }

    /// `g(r_j) = e^{−n t_j/2} u(t_j)`.
    pub fn radial_values(&self) -> Vec<C64> {
        let half_n = 0.5 * self.sector.dimension() as f64;
        self.u
            .iter()
            .enumerate()
            .map(|(j, v)| v * (-half_n * self.grid.t(j)).exp())
            .collect()
    }

    /// `g(r)` by cubic interpolation in `t = ln r`.
    pub fn eval_radial(&self, r: f64) -> C64 {
        let t = r.ln();
        let half_n = 0.5 * self.sector.dimension() as f64;
        interp_uniform(self.grid.t_min, self.grid.dt, &self.u, t) * (-half_n * t).exp()
    }

    /// `∫ |u|² dt`, which equals `∫ |g|² r^{n−1} dr`.
    pub fn norm_sqr(&self) -> f64 {
        self.u.iter().map(|v| v.norm_sqr()).sum::<f64>() * self.grid.dt
    }

    pub fn add(&self, other: &LogFunction) -> LogFunction {
        LogFunction {
            grid: self.grid,
            sector: self.sector,
            u: self.u.iter().zip(&other.u).map(|(a, b)| a + b).collect(),
        }
    }
}

/// The dual variable of FFT bin `m` for length `len`.
fn tau(m: usize, len: usize, dt: f64) -> f64 {
    let f = if m < len / 2 {
        m as f64
    } else {
        m as f64 - len as f64
    };
    2.0 * PI * f / (len as f64 * dt)
}

/// Applies the multiplier `m(τ)` to `u`. Fails when `u` has content near the
/// Nyquist frequency of the grid.
pub fn apply_multiplier(u: &LogFunction, mult: impl Fn(f64) -> C64) -> Result<LogFunction> {
    let grid = u.grid;
    let len = grid.fft_len();
    let mut buf = vec![C64::new(0.0, 0.0); len];
    buf[..grid.n].copy_from_slice(&u.u);
    let mut planner = FftPlanner::new();
    planner.plan_fft_forward(len).process(&mut buf);

    let peak = buf.iter().map(|v| v.norm()).fold(0.0, f64::max);
    if peak == 0.0 {
        return Ok(LogFunction::zeros(grid, u.sector));
    }
    let nyquist = PI / grid.dt;
    let high = buf
        .iter()
        .enumerate()
        .filter(|(m, _)| tau(*m, len, grid.dt).abs() >= NYQUIST_BAND * nyquist)
        .map(|(_, v)| v.norm())
        .fold(0.0, f64::max);
    if high > NYQUIST_TOLERANCE * peak {
        return Err(Error::GridTooCoarse { ratio: high / peak });
    }

    for (m, v) in buf.iter_mut().enumerate() {
        *v *= mult(tau(m, len, grid.dt));
    }
    planner.plan_fft_inverse(len).process(&mut buf);
    let scale = 1.0 / len as f64;
    Ok(LogFunction {
        grid,
        sector: u.sector,
        u: buf[..grid.n].iter().map(|v| v * scale).collect(),
    })
}

/// `φ(A) u` for the model's `φ`.
pub fn apply_phi(u: &LogFunction, model: &Model, direction: Direction) -> Result<LogFunction> {
    apply_multiplier(u, |t| {
        phi_function(
            model,
            Dilation::new(t).expect("finite dual variable"),
            direction,
        )
    })
}

/// `U(θ) = e^{iθA}`, the multiplier `e^{iθτ}`.
pub fn dilation_group(u: &LogFunction, theta: f64) -> Result<LogFunction> {
    apply_multiplier(u, |t| C64::from_polar(1.0, theta * t))
}

/// `φ(A) f` returned on the grid of `f`.
pub fn apply_phi_dilation(
    f: &RadialFunction,
    model: &Model,
    direction: Direction,
    grid: LogGrid,
) -> Result<RadialFunction> {
    let out = apply_phi(&LogFunction::from_radial(f, grid), model, direction)?;
    let values = f.grid().points().map(|r| out.eval_radial(r)).collect();
    Ok(RadialFunction::new_unchecked(f.grid(), f.sector(), values))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::ModelKind;
    use crate::waveop::functions::UniformGrid;

    fn grid() -> LogGrid {
        LogGrid::new(-30.0, 10.0, 0.02, 4)
    }

    fn gaussian(sector: Sector) -> RadialFunction {
        let g = UniformGrid::covering(1e-3, 0.01, 100.0);
        RadialFunction::from_fn(g, sector, |r| {
            C64::new((-0.5 * (r - 1.0).powi(2)).exp(), 0.0)
        })
        .unwrap()
    }

    fn max_diff(a: &[C64], b: &[C64]) -> f64 {
        a.iter()
            .zip(b)
            .map(|(x, y)| (x - y).norm())
            .fold(0.0, f64::max)
    }

    #[test]
    fn grid_layout() {
        let g = grid();
        assert_eq!(g.n, 2001);
        assert_eq!(g.fft_len(), 8192);
        let w = g.window(1e-3f64.ln(), 1e2f64.ln());
        assert!(g.t(w.start) >= 1e-3f64.ln() - 1e-12);
        assert!(g.t(w.end - 1) <= 1e2f64.ln() + 1e-12);
        assert!(g.t(w.end) > 1e2f64.ln());
    }

    #[test]
    fn unit_multiplier_is_identity() {
        let u = LogFunction::from_radial(&gaussian(Sector::Radial3), grid());
        let v = apply_multiplier(&u, |_| C64::new(1.0, 0.0)).unwrap();
        assert!(max_diff(u.values(), v.values()) < 1e-8);
    }

    #[test]
    fn group_action_fixes_the_sign() {
        // U(θ) must give e^{nθ/2} f(e^θ r).
        let theta = 0.3;
        for sector in [Sector::Radial3, Sector::Even1] {
            let f = gaussian(sector);
            let u = LogFunction::from_radial(&f, grid());
            let v = dilation_group(&u, theta).unwrap();
            let n = sector.dimension() as f64;
            for r in [0.01, 0.3, 1.0, 2.5, 7.0] {
                let expect = f.eval(theta.exp() * r) * (0.5 * n * theta).exp();
                assert!(
                    (v.eval_radial(r) - expect).norm() < 1e-6,
                    "{sector:?} r={r}"
                );
            }
        }
    }

    #[test]
    fn minus_and_plus_sum_to_identity() {
        let u = LogFunction::from_radial(&gaussian(Sector::Radial3), grid());
        let m = Model::from_f64(ModelKind::Delta3, -0.3).unwrap();
        let a = apply_phi(&u, &m, Direction::Minus).unwrap();
        let b = apply_phi(&u, &m, Direction::Plus).unwrap();
        assert!(max_diff(a.add(&b).values(), u.values()) < 1e-12);
    }

    #[test]
    fn coarse_grid_is_rejected() {
        let f = gaussian(Sector::Radial3);
        let coarse = LogGrid::new(-30.0, 10.0, 1.0, 4);
        let u = LogFunction::from_radial(&f, coarse);
        assert!(matches!(
            apply_multiplier(&u, |_| C64::new(1.0, 0.0)),
            Err(Error::GridTooCoarse { .. })
        ));
    }
}
