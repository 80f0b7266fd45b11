//! Reference tables of side classifications and windings, and the check that
//! reproduces them numerically.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::boundary::{gamma_on_side, Axis, Side};
use crate::error::{Error, Result};
use crate::models::{ExtendedReal, Model, ModelKind};
use crate::symbols::{r_function, s_function, Direction, C64};
use crate::winding::boundary_winding;

const GOLDEN_TOML: &str = include_str!("../data/golden_tables.toml");

/// Tolerance for side windings and totals against the table.
pub const TABLE_TOLERANCE: f64 = 1e-6;
/// Pointwise tolerance used when classifying a side.
const CLASSIFY_TOLERANCE: f64 = 1e-12;

/// What `Γ` reduces to on one side of the square.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum GammaLabel {
    #[serde(rename = "1")]
    One,
    #[serde(rename = "-1")]
    MinusOne,
    #[serde(rename = "r")]
    R,
    #[serde(rename = "s")]
    S,
    #[serde(rename = "?")]
    Other,
}

impl fmt::Display for GammaLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GammaLabel::One => "1",
            GammaLabel::MinusOne => "-1",
            GammaLabel::R => "r",
            GammaLabel::S => "s",
            GammaLabel::Other => "?",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
pub struct GoldenRow {
    pub region: String,
    pub params: Vec<ExtendedReal>,
    pub gamma: [GammaLabel; 4],
    pub w: [f64; 4],
    pub total: f64,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
pub struct GoldenTable {
    pub model: ModelKind,
    #[serde(rename = "row")]
    pub rows: Vec<GoldenRow>,
}

#[derive(Deserialize)]
struct GoldenFile {
    table: Vec<GoldenTable>,
}

/// All reference tables, in catalog order.
pub fn golden_tables() -> Result<Vec<GoldenTable>> {
    let file: GoldenFile = toml::from_str(GOLDEN_TOML).map_err(|e| Error::Golden(e.to_string()))?;
    Ok(file.table)
}

pub fn golden_table(kind: ModelKind) -> Result<GoldenTable> {
    golden_tables()?
        .into_iter()
        .find(|t| t.model == kind)
        .ok_or_else(|| Error::Golden(format!("no table for {kind}")))
}

/// Classifies `Γ` on a side by comparing `n` samples against the candidates.
pub fn classify_side(
    model: &Model,
    side: Side,
    n: usize,
    direction: Direction,
) -> Result<GammaLabel> {
    let n = n.max(2);
    let mut fits = [true; 3];
    for j in 0..n {
        let t = j as f64 / (n - 1) as f64;
        let g = gamma_on_side(model, side, t, direction)?;
        let (eps, a) = side.traversal(model, t);
        let symbol = match side.running_axis() {
            Axis::Dilation => r_function(model, a),
            Axis::Energy => s_function(model, eps),
        };
        let candidates = [C64::new(1.0, 0.0), C64::new(-1.0, 0.0), symbol];
        for (fit, c) in fits.iter_mut().zip(candidates) {
            *fit &= (g - c).norm() <= CLASSIFY_TOLERANCE;
        }
    }
    let label = if fits[0] {
        GammaLabel::One
    } else if fits[1] {
        GammaLabel::MinusOne
    } else if fits[2] {
        match side.running_axis() {
            Axis::Dilation => GammaLabel::R,
            Axis::Energy => GammaLabel::S,
        }
    } else {
        GammaLabel::Other
    };
    Ok(label)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TableRowCheck {
    pub region: String,
    pub param: ExtendedReal,
    pub expected_gamma: [GammaLabel; 4],
    pub gamma: [GammaLabel; 4],
    pub expected_w: [f64; 4],
    pub w: [f64; 4],
    pub expected_total: f64,
    pub w_total: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TableCheck {
    pub model: ModelKind,
    pub rows: Vec<TableRowCheck>,
    pub pass: bool,
}

/// Recomputes every row of the model's reference table.
pub fn check_table(kind: ModelKind, samples_per_side: usize) -> Result<TableCheck> {
    let table = golden_table(kind)?;
    let mut rows = Vec::new();
    for row in &table.rows {
        for &param in &row.params {
            let model = Model::new(kind, param)?;
            let wind = boundary_winding(&model, samples_per_side, Direction::Minus)?;
            let mut gamma = [GammaLabel::Other; 4];
            for side in Side::ALL {
                gamma[side.index()] =
                    classify_side(&model, side, samples_per_side, Direction::Minus)?;
            }
            let w = wind.sides();
            let pass = gamma == row.gamma
                && w.iter()
                    .zip(row.w)
                    .all(|(a, b)| (a - b).abs() < TABLE_TOLERANCE)
                && (wind.w_total - row.total).abs() < TABLE_TOLERANCE;
            rows.push(TableRowCheck {
                region: row.region.clone(),
                param,
                expected_gamma: row.gamma,
                gamma,
                expected_w: row.w,
                w,
                expected_total: row.total,
                w_total: wind.w_total,
                pass,
            });
        }
    }
    let pass = rows.iter().all(|r| r.pass);
    Ok(TableCheck {
        model: kind,
        rows,
        pass,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn data_file_parses() {
        let tables = golden_tables().unwrap();
        let kinds: Vec<ModelKind> = tables.iter().map(|t| t.model).collect();
        assert_eq!(kinds, ModelKind::ALL);
        let rows: Vec<usize> = tables.iter().map(|t| t.rows.len()).collect();
        assert_eq!(rows, [4, 2, 4, 4]);
        for t in &tables {
            for r in &t.rows {
                assert!((r.w.iter().sum::<f64>() - r.total).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn classification_examples() {
        let m = Model::from_f64(ModelKind::Delta3, 0.0).unwrap();
        let labels: Vec<GammaLabel> = Side::ALL
            .iter()
            .map(|&s| classify_side(&m, s, 33, Direction::Minus).unwrap())
            .collect();
        assert_eq!(
            labels,
            [
                GammaLabel::R,
                GammaLabel::MinusOne,
                GammaLabel::R,
                GammaLabel::One
            ]
        );
    }

    #[test]
    fn all_tables_reproduce() {
        for kind in ModelKind::ALL {
            let check = check_table(kind, 32).unwrap();
            assert!(
                check.pass,
                "{kind}: {:?}",
                check.rows.iter().find(|r| !r.pass)
            );
        }
    }
}
