//! Filon-type quadrature for `∫ F(x) cos(ωx) dx` and `∫ F(x) sin(ωx) dx` on a
//! uniform grid.
//!
//! `F` is replaced by its piecewise cubic Lagrange interpolant (four nearest
//! nodes per cell) and each cell is integrated exactly against the
//! oscillatory factor, so the cost does not grow with `ω`. The cosine and
//! sine parts are returned separately: for tiny `ω` the sine part keeps full
//! relative accuracy, which the inverse transforms rely on.

use crate::symbols::C64;

/// Cells whose stencil magnitude is below this fraction of the peak are skipped.
const NEGLIGIBLE: f64 = 1e-20;
/// The phase recurrence is reseeded from `sin_cos` at this stride.
const RESEED: usize = 64;

/// Moments `∫₀¹ uᵐ cos(θu) du` and `∫₀¹ uᵐ sin(θu) du` for `m = 0..3`.
pub fn moments(theta: f64) -> ([f64; 4], [f64; 4]) {
    let mut c = [0.0; 4];
    let mut s = [0.0; 4];
    if theta.abs() < 1.0 {
        // ∫ uᵐ (iθu)ⁿ/n! du = (iθ)ⁿ / (n! (m+n+1))
        for m in 0..4 {
            let mut term = 1.0;
            for n in 0..24 {
                if n > 0 {
                    term *= theta / n as f64;
                }
                let v = term / (m + n + 1) as f64;
                match n % 4 {
                    0 => c[m] += v,
                    1 => s[m] += v,
                    2 => c[m] -= v,
                    _ => s[m] -= v,
                }
            }
        }
    } else {
        let (sn, cs) = theta.sin_cos();
        c[0] = sn / theta;
        s[0] = (1.0 - cs) / theta;
        for m in 1..4 {
            let mf = m as f64;
            c[m] = (sn - mf * s[m - 1]) / theta;
            s[m] = (mf * c[m - 1] - cs) / theta;
        }
    }
    (c, s)
}

/// Monomial coefficients of the Lagrange basis on the given nodes.
fn lagrange_coefficients(nodes: [f64; 4]) -> [[f64; 4]; 4] {
    let mut out = [[0.0; 4]; 4];
    for i in 0..4 {
        let mut poly = [1.0, 0.0, 0.0, 0.0];
        let mut deg = 0;
        let mut denom = 1.0;
        for j in 0..4 {
            if j == i {
                continue;
            }
            // poly *= (u - nodes[j])
            for d in (0..=deg).rev() {
                poly[d + 1] += poly[d];
                poly[d] *= -nodes[j];
            }
            deg += 1;
            denom *= nodes[i] - nodes[j];
        }
        for d in 0..4 {
            out[i][d] = poly[d] / denom;
        }
    }
    out
}

/// Cubic stencil positions relative to the left node of a cell.
const STENCILS: [[f64; 4]; 3] = [
    [0.0, 1.0, 2.0, 3.0],
    [-1.0, 0.0, 1.0, 2.0],
    [-2.0, -1.0, 0.0, 1.0],
];
const STENCIL_OFFSET: [isize; 3] = [0, -1, -2];

/// Samples of `F` on `x_j = x0 + j h`, prepared for repeated integration.
#[derive(Debug, Clone)]
pub struct Filon {
    x0: f64,
    h: f64,
    values: Vec<C64>,
    /// Maximal runs of consecutive non-negligible cells, as `[start, end)`.
    ranges: Vec<(usize, usize)>,
    /// Monomial coefficients per stencil and node.
    coef: [[[f64; 4]; 4]; 3],
    /// Coefficients of the first cubic for the segment `[0, x0]`.
    origin: [C64; 4],
}

impl Filon {
    /// Needs at least four samples. When `x0 > 0` the first cubic is
    /// extended down to 0, so integrals always start at the origin.
    pub fn new(x0: f64, h: f64, values: Vec<C64>) -> Self {
        assert!(values.len() >= 4, "Filon needs at least four samples");
        assert!(h > 0.0 && x0 >= 0.0);
        let n_cells = values.len() - 1;
        let peak = values.iter().map(|v| v.norm()).fold(0.0, f64::max);
        let cut = peak * NEGLIGIBLE;
        let mut ranges = Vec::new();
        let mut start = None;
        for j in 0..n_cells {
            let lo = j.saturating_sub(1);
            let hi = (j + 2).min(values.len() - 1);
            let active = values[lo..=hi].iter().any(|v| v.norm() > cut);
            match (active, start) {
                (true, None) => start = Some(j),
                (false, Some(s)) => {
                    ranges.push((s, j));
                    start = None;
                }
                _ => {}
            }
        }
        if let Some(s) = start {
            ranges.push((s, n_cells));
        }
        let coef = STENCILS.map(lagrange_coefficients);
        let mut origin = [C64::new(0.0, 0.0); 4];
        for (i, basis) in coef[0].iter().enumerate() {
            for m in 0..4 {
                origin[m] += values[i] * basis[m];
            }
        }
        Filon {
            x0,
            h,
            values,
            ranges,
            coef,
            origin,
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    fn stencil_of(&self, cell: usize) -> usize {
        if cell == 0 {
            0
        } else if cell + 2 >= self.values.len() {
            2
        } else {
            1
        }
    }

    /// Returns `(∫₀^X F cos ωx dx, ∫₀^X F sin ωx dx)`, `X` the last node.
    pub fn integrate(&self, omega: f64) -> (C64, C64) {
        let theta = omega * self.h;
        let (mc, ms) = moments(theta);
        let mut wc = [[0.0; 4]; 3];
        let mut ws = [[0.0; 4]; 3];
        for s in 0..3 {
            for i in 0..4 {
                for m in 0..4 {
                    wc[s][i] += self.coef[s][i][m] * mc[m];
                    ws[s][i] += self.coef[s][i][m] * ms[m];
                }
            }
        }
        let (rot_s, rot_c) = theta.sin_cos();
        let zero = C64::new(0.0, 0.0);
        let (mut ic, mut is) = (zero, zero);
        for &(start, end) in &self.ranges {
            let (mut sn, mut cs) = (0.0, 0.0);
            for j in start..end {
                if (j - start) % RESEED == 0 {
                    (sn, cs) = (omega * (self.x0 + j as f64 * self.h)).sin_cos();
                }
                let st = self.stencil_of(j);
                let base = (j as isize + STENCIL_OFFSET[st]) as usize;
                let (mut a, mut b) = (zero, zero);
                for i in 0..4 {
                    let v = self.values[base + i];
                    a += v * wc[st][i];
                    b += v * ws[st][i];
                }
                ic += a * cs - b * sn;
                is += a * sn + b * cs;
                (sn, cs) = (sn * rot_c + cs * rot_s, cs * rot_c - sn * rot_s);
            }
        }
        ic *= self.h;
        is *= self.h;
        if self.x0 > 0.0 {
            let (oc, os) = self.origin_segment(omega);
            ic += oc;
            is += os;
        }
        (ic, is)
    }

    /// `[0, x0]` under the first cubic: with `u = −d·w`, `d = x0/h`, the
    /// integral is `h·d·∫₀¹ p(−dw) e^{iω(x0 − x0·w)} dw`.
    fn origin_segment(&self, omega: f64) -> (C64, C64) {
        let d = self.x0 / self.h;
        let theta = -omega * self.x0;
        let (mc, ms) = moments(theta);
        let zero = C64::new(0.0, 0.0);
        let (mut a, mut b) = (zero, zero);
        let mut scale = 1.0;
        for m in 0..4 {
            let cm = self.origin[m] * scale;
            a += cm * mc[m];
            b += cm * ms[m];
            scale *= -d;
        }
        let (sn, cs) = (omega * self.x0).sin_cos();
        let f = self.h * d;
        ((a * cs - b * sn) * f, (a * sn + b * cs) * f)
    }
}

/// Local cubic Lagrange interpolation on a uniform grid. Within one cell
/// outside the grid the end cubics extrapolate; further out the result is 0.
pub fn interp_uniform(x0: f64, h: f64, values: &[C64], x: f64) -> C64 {
    let n = values.len();
    let pos = (x - x0) / h;
    if !(-1.0..=n as f64).contains(&pos) {
        return C64::new(0.0, 0.0);
    }
    let cell = pos.floor().clamp(0.0, (n - 2) as f64) as usize;
    let base = cell.saturating_sub(1).min(n - 4);
    let mut out = C64::new(0.0, 0.0);
    for i in 0..4 {
        let xi = (base + i) as f64;
        let mut l = 1.0;
        for j in 0..4 {
            if j != i {
                let xj = (base + j) as f64;
                l *= (pos - xj) / (xi - xj);
            }
        }
        out += values[base + i] * l;
    }
    out
}
