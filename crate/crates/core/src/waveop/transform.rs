//! Fourier transforms restricted to a symmetry sector.
//!
//! | sector | forward `ψ̂(k)`                        | inverse `f(r)`                        |
//! |--------|---------------------------------------|---------------------------------------|
//! | Radial3| `√(2/π) (1/k) ∫ r f(r) sin(kr) dr`     | `√(2/π) (1/r) ∫ k ψ̂(k) sin(kr) dk`    |
//! | Even1  | `√(2/π) ∫ f(r) cos(kr) dr`             | `√(2/π) ∫ ψ̂(k) cos(kr) dk`            |
//! | Odd1   | `−i √(2/π) ∫ f(r) sin(kr) dr`          | `i √(2/π) ∫ ψ̂(k) sin(kr) dk`          |
//!
//! All integrals run over `[0, ∞)`. These are the unitary `n`-dimensional
//! transforms `(2π)^{−n/2} ∫ e^{−ik·x} f(x) dx` evaluated on the sector.

use std::f64::consts::FRAC_2_PI;

use rayon::prelude::*;

use super::filon::Filon;
use super::functions::{MomentumFunction, RadialFunction, Sector, UniformGrid};
use crate::error::{Error, Result};
use crate::symbols::C64;

fn unsupported(sector: Sector) -> Error {
    Error::Unsupported(format!("Fourier transform in sector {sector:?}"))
}

/// `ψ̂` on the given momentum grid.
pub fn radial_fourier(f: &RadialFunction, k_grid: UniformGrid) -> Result<MomentumFunction> {
    let g = f.grid();
    let c = FRAC_2_PI.sqrt();
    let values: Vec<C64> = match f.sector() {
        Sector::Radial3 => {
            let rf: Vec<C64> = g.points().zip(f.values()).map(|(r, v)| v * r).collect();
            let r2f: Vec<C64> = g.points().zip(&rf).map(|(r, v)| v * r).collect();
            let filon = Filon::new(g.x0, g.step, rf);
            let at_zero = Filon::new(g.x0, g.step, r2f).integrate(0.0).0 * c;
            (0..k_grid.n)
                .into_par_iter()
                .map(|j| {
                    let k = k_grid.point(j);
                    if k == 0.0 {
                        at_zero
                    } else {
                        filon.integrate(k).1 * (c / k)
                    }
                })
                .collect()
        }
        Sector::Even1 => {
            let filon = Filon::new(g.x0, g.step, f.values().to_vec());
            (0..k_grid.n)
                .into_par_iter()
                .map(|j| filon.integrate(k_grid.point(j)).0 * c)
                .collect()
        }
        Sector::Odd1 => {
            let filon = Filon::new(g.x0, g.step, f.values().to_vec());
            let m = C64::new(0.0, -c);
            (0..k_grid.n)
                .into_par_iter()
                .map(|j| filon.integrate(k_grid.point(j)).1 * m)
                .collect()
        }
        s @ Sector::Radial2 => return Err(unsupported(s)),
    };
    MomentumFunction::new(k_grid, f.sector(), values)
}

/// Inverse transform evaluated at arbitrary positive radii.
pub fn inverse_radial_fourier_at(mf: &MomentumFunction, radii: &[f64]) -> Result<Vec<C64>> {
    let g = mf.grid();
    let c = FRAC_2_PI.sqrt();
    if radii.iter().any(|&r| !(r > 0.0 && r.is_finite())) {
        return Err(Error::GridCoverage(
            "inverse transform radii must be positive".into(),
        ));
    }
    let out = match mf.sector() {
        Sector::Radial3 => {
            let kf: Vec<C64> = g.points().zip(mf.values()).map(|(k, v)| v * k).collect();
            let filon = Filon::new(g.x0, g.step, kf);
            radii
                .par_iter()
                .map(|&r| filon.integrate(r).1 * (c / r))
                .collect()
        }
        Sector::Even1 => {
            let filon = Filon::new(g.x0, g.step, mf.values().to_vec());
            radii
                .par_iter()
                .map(|&r| filon.integrate(r).0 * c)
                .collect()
        }
        Sector::Odd1 => {
            let filon = Filon::new(g.x0, g.step, mf.values().to_vec());
            let m = C64::new(0.0, c);
            radii
                .par_iter()
                .map(|&r| filon.integrate(r).1 * m)
                .collect()
        }
        s @ Sector::Radial2 => return Err(unsupported(s)),
    };
    Ok(out)
}

/// Inverse transform sampled on a radial grid.
pub fn inverse_radial_fourier(
    mf: &MomentumFunction,
    r_grid: UniformGrid,
) -> Result<RadialFunction> {
    let radii: Vec<f64> = r_grid.points().collect();
    let values = inverse_radial_fourier_at(mf, &radii)?;
    RadialFunction::new(r_grid, mf.sector(), values)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r_grid() -> UniformGrid {
        UniformGrid::covering(1e-3, 0.01, 100.0)
    }

    fn k_grid() -> UniformGrid {
        UniformGrid::covering(0.0, 0.01, 40.0)
    }

    fn rel_l2(a: &[C64], b: &[C64]) -> f64 {
        let num: f64 = a.iter().zip(b).map(|(x, y)| (x - y).norm_sqr()).sum();
        let den: f64 = b.iter().map(|y| y.norm_sqr()).sum();
        (num / den).sqrt()
    }

    #[test]
    fn gaussian_is_self_dual_in_three_dimensions() {
        let f = RadialFunction::from_fn(r_grid(), Sector::Radial3, |r| {
            C64::new((-0.5 * r * r).exp(), 0.0)
        })
        .unwrap();
        let mf = radial_fourier(&f, k_grid()).unwrap();
        for (k, v) in mf.grid().points().zip(mf.values()).step_by(37) {
            assert!(
                (v - C64::new((-0.5 * k * k).exp(), 0.0)).norm() < 1e-8,
                "k = {k}"
            );
        }
    }

    #[test]
    fn odd_sector_oracle() {
        // r e^{-r²/2} on the line has transform −i k e^{-k²/2}.
        let f = RadialFunction::from_fn(r_grid(), Sector::Odd1, |r| {
            C64::new(r * (-0.5 * r * r).exp(), 0.0)
        })
        .unwrap();
        let mf = radial_fourier(&f, k_grid()).unwrap();
        for (k, v) in mf.grid().points().zip(mf.values()).step_by(41) {
            let exact = C64::new(0.0, -k * (-0.5 * k * k).exp());
            assert!((v - exact).norm() < 1e-8, "k = {k}: {v} vs {exact}");
        }
    }

    #[test]
    fn round_trips() {
        for (sector, shift) in [
            (Sector::Radial3, 2.0),
            (Sector::Even1, 1.0),
            (Sector::Odd1, 0.0),
        ] {
            let f = RadialFunction::from_fn(r_grid(), sector, |r| {
                let g = (-2.0 * (r - shift).powi(2)).exp() + (-2.0 * (r + shift).powi(2)).exp();
                let g = if sector == Sector::Odd1 { r * g } else { g };
                C64::new(g, 0.3 * g)
            })
            .unwrap();
            let back =
                inverse_radial_fourier(&radial_fourier(&f, k_grid()).unwrap(), r_grid()).unwrap();
            let e = rel_l2(back.values(), f.values());
            assert!(e < 1e-6, "{sector:?}: {e}");
        }
    }

    #[test]
    fn two_dimensional_sector_is_unsupported() {
        let f =
            RadialFunction::from_fn(r_grid(), Sector::Radial2, |r| C64::new((-r * r).exp(), 0.0))
                .unwrap();
        assert!(matches!(
            radial_fourier(&f, k_grid()),
            Err(Error::Unsupported(_))
        ));
    }
}
