//! Tolerances and search parameters, collected in one place.
//!
//! Every tolerance is relative and dimensionless. Operations take a
//! [`ToleranceConfig`] (or a [`SearchConfig`] that embeds one) by reference so
//! callers can override any value per call.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Numerical tolerances used throughout the crate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ToleranceConfig {
    /// Allowed residual `‖M*JM − J‖ / ‖M‖²` for a matrix to count as an isometry.
    pub tol_unitary: f64,
    /// Band around zero inside which `Φ(z,z)/‖z‖²` is treated as null.
    pub tol_null: f64,
    /// Eigenvalue modulus gap and null-space threshold for eigen-analysis.
    pub tol_eig: f64,
    /// Relative distance below which two matrices are the same PU class.
    pub tol_identity: f64,
}

impl Default for ToleranceConfig {
    fn default() -> Self {
        Self {
            tol_unitary: 1e-9,
            tol_null: 1e-9,
            tol_eig: 1e-6,
            tol_identity: 1e-9,
        }
    }
}

impl ToleranceConfig {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("tol_unitary", self.tol_unitary),
            ("tol_null", self.tol_null),
            ("tol_eig", self.tol_eig),
            ("tol_identity", self.tol_identity),
        ] {
            if !(v > 0.0 && v < 1.0) {
                return Err(Error::InvalidParameter(format!(
                    "{name} must lie in (0, 1), got {v}"
                )));
            }
        }
        Ok(())
    }

    /// Coarse threshold used where a quantity is only known to about half
    /// the working precision: clustering of eigenvalues, null tests on
    /// eigenvectors of defective eigenvalues, fixed-point comparisons.
    pub fn coarse(&self) -> f64 {
        self.tol_eig.sqrt()
    }
}

/// Matrix norm used for `N(f) = ‖f − I‖`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NormKind {
    /// Largest singular value.
    #[default]
    Operator,
    Frobenius,
}

impl NormKind {
    pub fn label(self) -> &'static str {
        match self {
            NormKind::Operator => "operator",
            NormKind::Frobenius => "frobenius",
        }
    }
}

/// Which argument is raised to the powers `1..=n+1` in the elliptic branch of
/// the Jørgensen-type statistic.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PowerSide {
    /// `N([f, g^i])`
    #[default]
    G,
    /// `N([f^i, g])`
    F,
}

/// Whether data-parallel loops run on the rayon pool.
///
/// Without the `parallel` feature, [`Execution::Parallel`] silently runs
/// sequentially. Results never depend on this setting.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Execution {
    Sequential,
    #[default]
    Parallel,
}

/// Parameters for group-level searches.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SearchConfig {
    pub tol: ToleranceConfig,
    pub norm: NormKind,
    pub power_side: PowerSide,
    /// Near-identity evidential threshold (operator norm).
    pub epsilon: f64,
    /// Largest order tried by torsion scans.
    pub k_max: usize,
    /// Cap on enumerated PU classes.
    pub max_states: usize,
    /// Largest word length accepted by the discreteness report.
    pub max_depth: usize,
    /// Orbit points with `Σ|w|² > 1 − radial_cut` are kept by limit-set sampling.
    pub radial_cut: f64,
    /// Cap on loxodromic words paired against each other in two-loxodromic mode.
    pub pair_limit: usize,
    #[serde(skip)]
    pub execution: Execution,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self {
            tol: ToleranceConfig::default(),
            norm: NormKind::Operator,
            power_side: PowerSide::G,
            epsilon: 0.05,
            k_max: 200,
            max_states: 1_000_000,
            max_depth: 12,
            radial_cut: 1e-3,
            pair_limit: 256,
            execution: Execution::Parallel,
        }
    }
}

impl SearchConfig {
    pub fn validate(&self) -> Result<()> {
        self.tol.validate()?;
        if !(self.epsilon > 0.0 && self.epsilon.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "epsilon must be positive, got {}",
                self.epsilon
            )));
        }
        if self.k_max == 0 {
            return Err(Error::InvalidParameter("k_max must be at least 1".into()));
        }
        if self.max_states == 0 || self.max_depth == 0 || self.pair_limit == 0 {
            return Err(Error::InvalidParameter(
                "max_states, max_depth and pair_limit must be positive".into(),
            ));
        }
        if !(self.radial_cut > 0.0 && self.radial_cut < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "radial_cut must lie in (0, 1), got {}",
                self.radial_cut
            )));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_validate() {
        ToleranceConfig::default().validate().unwrap();
        SearchConfig::default().validate().unwrap();
    }

    #[test]
    fn rejects_out_of_range_tolerance() {
        let cfg = ToleranceConfig {
            tol_eig: 1.5,
            ..Default::default()
        };
        assert!(cfg.validate().is_err());
        let cfg = ToleranceConfig {
            tol_null: 0.0,
            ..Default::default()
        };
        assert!(cfg.validate().is_err());
    }
}
