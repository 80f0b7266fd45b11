//! Sampled functions in position and momentum space, restricted to one
//! symmetry sector.

use serde::Serialize;

use super::filon::{interp_uniform, Filon};
use crate::error::{Error, Result};
use crate::models::ModelKind;
use crate::symbols::C64;

/// Smallest radius a position grid must reach down to.
pub const R_MIN_REQUIRED: f64 = 1e-3;
/// Largest radius a position grid must reach up to.
pub const R_MAX_REQUIRED: f64 = 1e2;
/// Relative magnitude a function must fall below at the outer grid end.
pub const DECAY_REQUIRED: f64 = 1e-8;

/// The subspace an operator acts on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Sector {
    /// Rotation invariant functions on `R³`.
    Radial3,
    /// Rotation invariant functions on `R²`.
    Radial2,
    /// Even functions on the line.
    Even1,
    /// Odd functions on the line.
    Odd1,
}

impl Sector {
    pub fn dimension(self) -> u32 {
        match self {
            Sector::Radial3 => 3,
            Sector::Radial2 => 2,
            Sector::Even1 | Sector::Odd1 => 1,
        }
    }

    /// The sector a model's wave operator acts on nontrivially.
    pub fn of_model(kind: ModelKind) -> Sector {
        match kind {
            ModelKind::Delta3 => Sector::Radial3,
            ModelKind::Delta2 => Sector::Radial2,
            ModelKind::Delta1 => Sector::Even1,
            ModelKind::DeltaPrime1 => Sector::Odd1,
        }
    }
}

/// `x_j = x0 + j·step`, `j = 0..n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct UniformGrid {
    pub x0: f64,
    pub step: f64,
    pub n: usize,
}

impl UniformGrid {
    /// Grid from `x0` with the given step, extended until it reaches `x_max`.
    pub fn covering(x0: f64, step: f64, x_max: f64) -> Self {
        let n = ((x_max - x0) / step).ceil() as usize + 1;
        UniformGrid { x0, step, n }
    }

    pub fn point(&self, j: usize) -> f64 {
        self.x0 + j as f64 * self.step
    }

    pub fn last(&self) -> f64 {
        self.point(self.n - 1)
    }

    pub fn points(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.n).map(|j| self.point(j))
    }
}

fn outer_decay_ok(values: &[C64]) -> bool {
    let peak = values.iter().map(|v| v.norm()).fold(0.0, f64::max);
    values
        .last()
        .is_some_and(|v| v.norm() <= DECAY_REQUIRED * peak)
}

/// Samples `f(r)` of a sector function on `r > 0`. For the line sectors the
/// values at negative arguments follow from the parity.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialFunction {
    grid: UniformGrid,
    sector: Sector,
    values: Vec<C64>,
}

impl RadialFunction {
    /// Checks coverage of `[1e-3, 1e2]` and decay at the outer end. Smooth
    /// functions need not vanish at the origin, so only the outer end is
    /// checked.
    pub fn new(grid: UniformGrid, sector: Sector, values: Vec<C64>) -> Result<Self> {
        if values.len() != grid.n || grid.n < 4 {
            return Err(Error::GridCoverage(format!(
                "expected {} samples (at least 4), got {}",
                grid.n,
                values.len()
            )));
        }
        if !(grid.x0 > 0.0 && grid.step > 0.0) {
            return Err(Error::GridCoverage(
                "radii must be positive and increasing".into(),
            ));
        }
        if grid.x0 > R_MIN_REQUIRED || grid.last() < R_MAX_REQUIRED {
            return Err(Error::GridCoverage(format!(
                "radial grid [{}, {}] does not cover [{R_MIN_REQUIRED}, {R_MAX_REQUIRED}]",
                grid.x0,
                grid.last()
            )));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::GridCoverage("non-finite sample".into()));
        }
        if !outer_decay_ok(&values) {
            return Err(Error::GridCoverage(format!(
                "function does not decay below {DECAY_REQUIRED:e} of its peak at r = {}",
                grid.last()
            )));
        }
        Ok(RadialFunction {
            grid,
            sector,
            values,
        })
    }

    /// For operator outputs, which need not satisfy the input decay bound.
    pub(crate) fn new_unchecked(grid: UniformGrid, sector: Sector, values: Vec<C64>) -> Self {
        RadialFunction {
            grid,
            sector,
            values,
        }
    }

    pub fn from_fn(grid: UniformGrid, sector: Sector, f: impl Fn(f64) -> C64) -> Result<Self> {
        let values = grid.points().map(f).collect();
        Self::new(grid, sector, values)
    }

    /// Zero function on the same grid and sector.
    pub fn zeros_like(&self) -> Self {
        RadialFunction {
            grid: self.grid,
            sector: self.sector,
            values: vec![C64::new(0.0, 0.0); self.grid.n],
        }
    }

    pub fn grid(&self) -> UniformGrid {
        self.grid
    }

    pub fn sector(&self) -> Sector {
        self.sector
    }

    pub fn values(&self) -> &[C64] {
        &self.values
    }

    pub fn eval(&self, r: f64) -> C64 {
        interp_uniform(self.grid.x0, self.grid.step, &self.values, r)
    }

    /// `∫₀^∞ |f|² r^{n−1} dr` by the trapezoidal rule; `[0, x0]` is
    /// counted at the first sample.
    /// `∫ |f|² r^{n−1} dr` with the piecewise cubic rule, origin segment included.
    pub fn norm_sqr(&self) -> f64 {
        let n = self.sector.dimension() as i32;
        let w: Vec<C64> = self
            .grid
            .points()
            .zip(&self.values)
            .map(|(r, v)| C64::new(v.norm_sqr() * r.powi(n - 1), 0.0))
            .collect();
        Filon::new(self.grid.x0, self.grid.step, w)
            .integrate(0.0)
            .0
            .re
    }

    pub fn scaled(&self, c: f64) -> Self {
        RadialFunction {
            grid: self.grid,
            sector: self.sector,
            values: self.values.iter().map(|v| v * c).collect(),
        }
    }

    /// Scales to unit norm in the measure of [`Self::norm_sqr`].
    pub fn normalized(&self) -> Self {
        let n = self.norm_sqr().sqrt();
        if n > 0.0 {
            self.scaled(1.0 / n)
        } else {
            self.clone()
        }
    }
}

/// Samples of a sector function's Fourier transform at `k ≥ 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentumFunction {
    grid: UniformGrid,
    sector: Sector,
    values: Vec<C64>,
}

impl MomentumFunction {
    pub fn new(grid: UniformGrid, sector: Sector, values: Vec<C64>) -> Result<Self> {
        if values.len() != grid.n || grid.n < 4 {
            return Err(Error::GridCoverage(format!(
                "expected {} momentum samples (at least 4), got {}",
                grid.n,
                values.len()
            )));
        }
        if !(grid.x0 >= 0.0 && grid.step > 0.0) {
            return Err(Error::GridCoverage(
                "momenta must be non-negative and increasing".into(),
            ));
        }
        if !outer_decay_ok(&values) {
            return Err(Error::GridCoverage(format!(
                "momentum samples do not decay below {DECAY_REQUIRED:e} of their peak at k = {}",
                grid.last()
            )));
        }
        Ok(MomentumFunction {
            grid,
            sector,
            values,
        })
    }

    #[cfg(test)]
    pub(crate) fn new_unchecked(grid: UniformGrid, sector: Sector, values: Vec<C64>) -> Self {
        MomentumFunction {
            grid,
            sector,
            values,
        }
    }

    pub fn grid(&self) -> UniformGrid {
        self.grid
    }

    pub fn sector(&self) -> Sector {
        self.sector
    }

    pub fn values(&self) -> &[C64] {
        &self.values
    }

    pub fn eval(&self, k: f64) -> C64 {
        interp_uniform(self.grid.x0, self.grid.step, &self.values, k)
    }

    pub fn map(&self, f: impl Fn(f64, C64) -> C64) -> Self {
        let values = self
            .values
            .iter()
            .enumerate()
            .map(|(j, &v)| f(self.grid.point(j), v))
            .collect();
        MomentumFunction {
            grid: self.grid,
            sector: self.sector,
            values,
        }
    }
}
