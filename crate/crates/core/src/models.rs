//! The four point-interaction Hamiltonians and their spectral data.
//!
//! Each model is a self-adjoint extension of the Laplacian restricted away
//! from the origin, labelled by a parameter in `R ∪ {∞}`: `α` for the three
//! δ-interactions (dimensions 3, 2, 1) and `β` for the δ′-interaction on the
//! line. The essential spectrum is `[0, ∞)` for every member of the family;
//! the point spectrum is empty or a single negative eigenvalue.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// A point of the extended real line.
///
/// Serialized as a plain number when finite and as `"inf"` / `"-inf"` otherwise.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ExtendedReal {
    Finite(f64),
    PlusInfinity,
    MinusInfinity,
}

impl ExtendedReal {
    /// Maps `±inf` floats onto the tagged infinities. NaN is rejected.
    pub fn from_f64(x: f64) -> Result<Self> {
        if x.is_nan() {
            Err(Error::NanParameter)
        } else if x == f64::INFINITY {
            Ok(ExtendedReal::PlusInfinity)
        } else if x == f64::NEG_INFINITY {
            Ok(ExtendedReal::MinusInfinity)
        } else {
            Ok(ExtendedReal::Finite(x))
        }
    }

    pub fn to_f64(self) -> f64 {
        match self {
            ExtendedReal::Finite(x) => x,
            ExtendedReal::PlusInfinity => f64::INFINITY,
            ExtendedReal::MinusInfinity => f64::NEG_INFINITY,
        }
    }

    pub fn is_finite(self) -> bool {
        matches!(self, ExtendedReal::Finite(_))
    }

    pub fn finite(self) -> Option<f64> {
        match self {
            ExtendedReal::Finite(x) => Some(x),
            _ => None,
        }
    }
}

impl fmt::Display for ExtendedReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtendedReal::Finite(x) => write!(f, "{x}"),
            ExtendedReal::PlusInfinity => f.write_str("inf"),
            ExtendedReal::MinusInfinity => f.write_str("-inf"),
        }
    }
}

impl FromStr for ExtendedReal {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        match s.to_ascii_lowercase().as_str() {
            "inf" | "+inf" | "infinity" | "+infinity" | "∞" => Ok(ExtendedReal::PlusInfinity),
            "-inf" | "-infinity" | "-∞" => Ok(ExtendedReal::MinusInfinity),
            _ => {
                let x: f64 = s
                    .parse()
                    .map_err(|_| Error::ParseParameter(s.to_string()))?;
                ExtendedReal::from_f64(x)
            }
        }
    }
}

impl Serialize for ExtendedReal {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            ExtendedReal::Finite(x) => serializer.serialize_f64(*x),
            _ => serializer.collect_str(self),
        }
    }
}

impl<'de> Deserialize<'de> for ExtendedReal {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(f64),
            Text(String),
        }
        match Raw::deserialize(deserializer)? {
            Raw::Num(x) => ExtendedReal::from_f64(x),
            Raw::Text(s) => s.parse(),
        }
        .map_err(serde::de::Error::custom)
    }
}

/// Which family of point interaction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModelKind {
    /// δ-interaction in three dimensions.
    Delta3,
    /// δ-interaction in two dimensions.
    Delta2,
    /// δ-interaction on the line.
    Delta1,
    /// δ′-interaction on the line.
    DeltaPrime1,
}

/// The invariant subspace on which `Ω₋ − 1` acts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Projection {
    /// Rotation invariant functions.
    P0,
    /// Odd functions on the line.
    P1,
}

impl ModelKind {
    pub const ALL: [ModelKind; 4] = [
        ModelKind::Delta3,
        ModelKind::Delta2,
        ModelKind::Delta1,
        ModelKind::DeltaPrime1,
    ];

    pub fn dimension(self) -> u32 {
        match self {
            ModelKind::Delta3 => 3,
            ModelKind::Delta2 => 2,
            ModelKind::Delta1 | ModelKind::DeltaPrime1 => 1,
        }
    }

    pub fn projection(self) -> Projection {
        match self {
            ModelKind::DeltaPrime1 => Projection::P1,
            _ => Projection::P0,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            ModelKind::Delta3 => "delta3",
            ModelKind::Delta2 => "delta2",
            ModelKind::Delta1 => "delta1",
            ModelKind::DeltaPrime1 => "deltaprime1",
        }
    }

    /// Conventional name of the extension parameter.
    pub fn param_symbol(self) -> &'static str {
        match self {
            ModelKind::DeltaPrime1 => "beta",
            _ => "alpha",
        }
    }
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ModelKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "delta3" => Ok(ModelKind::Delta3),
            "delta2" => Ok(ModelKind::Delta2),
            "delta1" => Ok(ModelKind::Delta1),
            "deltaprime1" => Ok(ModelKind::DeltaPrime1),
            other => Err(Error::Unsupported(format!("unknown model kind '{other}'"))),
        }
    }
}

/// A point-interaction Hamiltonian: family plus extension parameter.
///
/// The parameter lives in `R ∪ {+∞}`; NaN and `-∞` are rejected.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Model {
    kind: ModelKind,
    param: ExtendedReal,
}

/// Coarse classification of the parameter, which is all the tables depend on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ParamRegion {
    Negative,
    Zero,
    Positive,
    Infinite,
}

impl Model {
    pub fn new(kind: ModelKind, param: ExtendedReal) -> Result<Self> {
        match param {
            ExtendedReal::Finite(x) if x.is_nan() => Err(Error::NanParameter),
            ExtendedReal::MinusInfinity => Err(Error::NegativeInfiniteParameter),
            _ => Ok(Model { kind, param }),
        }
    }

    /// Convenience constructor from a float; `f64::INFINITY` maps to `∞`.
    pub fn from_f64(kind: ModelKind, param: f64) -> Result<Self> {
        Model::new(kind, ExtendedReal::from_f64(param)?)
    }

    pub fn kind(&self) -> ModelKind {
        self.kind
    }

    pub fn param(&self) -> ExtendedReal {
        self.param
    }

    pub fn dimension(&self) -> u32 {
        self.kind.dimension()
    }

    pub fn projection(&self) -> Projection {
        self.kind.projection()
    }

    pub fn region(&self) -> ParamRegion {
        match self.param {
            ExtendedReal::Finite(x) if x < 0.0 => ParamRegion::Negative,
            ExtendedReal::Finite(0.0) => ParamRegion::Zero,
            ExtendedReal::Finite(_) => ParamRegion::Positive,
            _ => ParamRegion::Infinite,
        }
    }
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}({}={})",
            self.kind,
            self.kind.param_symbol(),
            self.param
        )
    }
}

/// Number of negative eigenvalues of the extension.
pub fn bound_state_count(model: &Model) -> usize {
    use ParamRegion::*;
    match (model.kind(), model.region()) {
        (_, Infinite) => 0,
        (ModelKind::Delta2, _) => 1,
        (_, Negative) => 1,
        _ => 0,
    }
}

/// Where a reported eigenvalue comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EnergyProvenance {
    /// Closed-form value of the extension (δ in 3D, δ′ on the line).
    ClosedForm,
    /// Pole of the analytically continued scattering function (δ on the
    /// line); derived here, not a tabulated value.
    ScatteringPole,
}

/// Eigenvalue information for a model.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundStateEnergies {
    /// Concrete eigenvalues (possibly none).
    Values {
        energies: Vec<f64>,
        provenance: Option<EnergyProvenance>,
    },
    /// An eigenvalue exists but no value is provided (δ in 2D).
    CountOnly { count: usize },
}

impl BoundStateEnergies {
    pub fn values(&self) -> Option<&[f64]> {
        match self {
            BoundStateEnergies::Values { energies, .. } => Some(energies),
            BoundStateEnergies::CountOnly { .. } => None,
        }
    }
}

pub fn bound_state_energies(model: &Model) -> BoundStateEnergies {
    let empty = BoundStateEnergies::Values {
        energies: Vec::new(),
        provenance: None,
    };
    if bound_state_count(model) == 0 {
        return empty;
    }
    // Only finite parameters reach this point.
    let p = model
        .param()
        .finite()
        .expect("bound state requires a finite parameter");
    match model.kind() {
        ModelKind::Delta3 => BoundStateEnergies::Values {
            energies: vec![-(4.0 * PI * p).powi(2)],
            provenance: Some(EnergyProvenance::ClosedForm),
        },
        ModelKind::DeltaPrime1 => BoundStateEnergies::Values {
            energies: vec![-4.0 / (p * p)],
            provenance: Some(EnergyProvenance::ClosedForm),
        },
        // 2√ξ + iα = 0 with √ξ = iκ gives κ = -α/2.
        ModelKind::Delta1 => BoundStateEnergies::Values {
            energies: vec![-p * p / 4.0],
            provenance: Some(EnergyProvenance::ScatteringPole),
        },
        ModelKind::Delta2 => BoundStateEnergies::CountOnly { count: 1 },
    }
}

/// Spectral summary of a model.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectralFacts {
    /// Lower edge of `σ_ess = σ_ac = [0, ∞)`.
    pub essential_spectrum_start: f64,
    pub bound_state_count: usize,
    pub bound_state_energies: BoundStateEnergies,
}

pub fn spectral_facts(model: &Model) -> SpectralFacts {
    SpectralFacts {
        essential_spectrum_start: 0.0,
        bound_state_count: bound_state_count(model),
        bound_state_energies: bound_state_energies(model),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(kind: ModelKind, p: f64) -> Model {
        Model::from_f64(kind, p).unwrap()
    }

    #[test]
    fn counts_match_examples() {
        assert_eq!(bound_state_count(&m(ModelKind::Delta3, -1.0)), 1);
        assert_eq!(bound_state_count(&m(ModelKind::Delta3, f64::INFINITY)), 0);
        assert_eq!(bound_state_count(&m(ModelKind::Delta2, 5.0)), 1);
        assert_eq!(bound_state_count(&m(ModelKind::DeltaPrime1, 0.0)), 0);
        assert_eq!(bound_state_count(&m(ModelKind::Delta2, 0.0)), 1);
        assert_eq!(bound_state_count(&m(ModelKind::Delta1, 0.0)), 0);
    }

    #[test]
    fn infinite_parameter_has_no_bound_state() {
        for kind in ModelKind::ALL {
            assert_eq!(bound_state_count(&m(kind, f64::INFINITY)), 0);
        }
    }

    #[test]
    fn closed_form_energies() {
        let e = bound_state_energies(&m(ModelKind::Delta3, -1.0 / (4.0 * PI)));
        let v = e.values().unwrap();
        assert_eq!(v.len(), 1);
        assert!((v[0] + 1.0).abs() < 1e-14);

        let e = bound_state_energies(&m(ModelKind::DeltaPrime1, -2.0));
        assert_eq!(e.values().unwrap(), &[-1.0]);

        let e = bound_state_energies(&m(ModelKind::Delta1, 2.0));
        assert!(e.values().unwrap().is_empty());

        assert_eq!(
            bound_state_energies(&m(ModelKind::Delta2, 0.3)),
            BoundStateEnergies::CountOnly { count: 1 }
        );
    }

    #[test]
    fn delta1_energy_matches_continued_pole() {
        // Bisection on the continued denominator 2iκ + iα, i.e. 2κ + α = 0, κ > 0.
        let alpha = -2.0;
        let f = |kappa: f64| 2.0 * kappa + alpha;
        let (mut lo, mut hi) = (0.0_f64, 10.0_f64);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if f(lo) * f(mid) <= 0.0 {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        let kappa = 0.5 * (lo + hi);
        let expected = -kappa * kappa;
        let e = bound_state_energies(&m(ModelKind::Delta1, alpha));
        let v = e.values().unwrap();
        assert!((v[0] - expected).abs() < 1e-12);
        assert!((v[0] + 1.0).abs() < 1e-12);
        assert_eq!(
            e,
            BoundStateEnergies::Values {
                energies: vec![-1.0],
                provenance: Some(EnergyProvenance::ScatteringPole)
            }
        );
    }

    #[test]
    fn rejects_nan_and_minus_infinity() {
        assert_eq!(
            Model::from_f64(ModelKind::Delta3, f64::NAN),
            Err(Error::NanParameter)
        );
        assert_eq!(
            Model::new(ModelKind::Delta1, ExtendedReal::MinusInfinity),
            Err(Error::NegativeInfiniteParameter)
        );
        assert!("nan".parse::<ExtendedReal>().is_err());
        assert_eq!(
            "inf".parse::<ExtendedReal>(),
            Ok(ExtendedReal::PlusInfinity)
        );
        assert_eq!(
            "-0.5".parse::<ExtendedReal>(),
            Ok(ExtendedReal::Finite(-0.5))
        );
    }

    #[test]
    fn count_agrees_with_energy_list() {
        for kind in ModelKind::ALL {
            for p in [-3.0, -0.1, 0.0, 0.1, 3.0, f64::INFINITY] {
                let model = m(kind, p);
                match bound_state_energies(&model) {
                    BoundStateEnergies::Values { energies, .. } => {
                        assert_eq!(energies.len(), bound_state_count(&model));
                        assert!(energies.iter().all(|&e| e < 0.0));
                    }
                    BoundStateEnergies::CountOnly { count } => {
                        assert_eq!(kind, ModelKind::Delta2);
                        assert_eq!(count, bound_state_count(&model));
                    }
                }
            }
        }
    }

    #[test]
    fn projections() {
        assert_eq!(ModelKind::DeltaPrime1.projection(), Projection::P1);
        assert_eq!(ModelKind::Delta1.projection(), Projection::P0);
        assert_eq!(ModelKind::Delta3.dimension(), 3);
    }

    #[test]
    fn extended_real_serde() {
        let xs = [
            ExtendedReal::Finite(-0.5),
            ExtendedReal::PlusInfinity,
            ExtendedReal::MinusInfinity,
        ];
        let json = serde_json::to_string(&xs).unwrap();
        assert_eq!(json, r#"[-0.5,"inf","-inf"]"#);
        let back: Vec<ExtendedReal> = serde_json::from_str(&json).unwrap();
        assert_eq!(back, xs);
        assert!(serde_json::from_str::<ExtendedReal>(r#""nan""#).is_err());
    }
}
