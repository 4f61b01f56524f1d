//! Group files: JSON with named generator matrices.
//!
//! ```json
//! {
//!   "dim_n": 1,
//!   "generators": [
//!     { "name": "a", "matrix": [[[1.54, 0.0], [1.18, 0.0]], [[1.18, 0.0], [1.54, 0.0]]] }
//!   ],
//!   "extras": []
//! }
//! ```
//!
//! Each entry is a row of `[re, im]` pairs. `extras` holds elements that are
//! not generators of the group, such as test maps.

use std::collections::BTreeSet;
use std::path::Path;

use puhyp::{Complexd, GroupInput, Isometry, ToleranceConfig};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NamedMatrix {
    pub name: String,
    pub matrix: Vec<Vec<[f64; 2]>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupFile {
    pub dim_n: usize,
    pub generators: Vec<NamedMatrix>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub extras: Vec<NamedMatrix>,
}

impl NamedMatrix {
    pub fn from_isometry(name: impl Into<String>, f: &Isometry) -> Self {
        let m = f.matrix();
        let matrix = (0..m.nrows())
            .map(|i| {
                (0..m.ncols())
                    .map(|j| [m[(i, j)].re, m[(i, j)].im])
                    .collect()
            })
            .collect();
        Self {
            name: name.into(),
            matrix,
        }
    }

    fn rows(&self) -> Vec<Vec<Complexd>> {
        self.matrix
            .iter()
            .map(|row| row.iter().map(|&[re, im]| Complexd::new(re, im)).collect())
            .collect()
    }

    fn to_isometry(&self, dim_n: usize, tol: &ToleranceConfig) -> Result<Isometry, CliError> {
        let size = dim_n + 1;
        if self.matrix.len() != size || self.matrix.iter().any(|r| r.len() != size) {
            return Err(CliError::Validation(format!(
                "element `{}`: expected a {size}×{size} matrix for dim_n = {dim_n}",
                self.name
            )));
        }
        Isometry::from_rows(&self.rows(), tol).map_err(|e| CliError::Element {
            name: self.name.clone(),
            source: e,
        })
    }
}

impl GroupFile {
    pub fn parse(text: &str, origin: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Parse {
            origin: origin.to_string(),
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })
    }

    pub fn read(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Io {
            path: path.display().to_string(),
            source: e,
        })?;
        Self::parse(&text, &path.display().to_string())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("group files always serialize")
    }

    pub fn from_group(group: &GroupInput, extras: &[(String, Isometry)]) -> Self {
        Self {
            dim_n: group.dim_n(),
            generators: group
                .generators()
                .iter()
                .map(|(n, g)| NamedMatrix::from_isometry(n.clone(), g))
                .collect(),
            extras: extras
                .iter()
                .map(|(n, g)| NamedMatrix::from_isometry(n.clone(), g))
                .collect(),
        }
    }

    /// Validates every matrix and builds the group. With `canonical_phase`
    /// each element is rescaled to determinant 1 first.
    pub fn load(
        &self,
        tol: &ToleranceConfig,
        canonical_phase: bool,
    ) -> Result<LoadedGroup, CliError> {
        if self.dim_n == 0 {
            return Err(CliError::Validation("dim_n must be positive".into()));
        }
        let mut names = BTreeSet::new();
        for nm in self.generators.iter().chain(&self.extras) {
            if nm.name.is_empty() {
                return Err(CliError::Validation(
                    "element names must be nonempty".into(),
                ));
            }
            if !names.insert(nm.name.as_str()) {
                return Err(CliError::Validation(format!(
                    "duplicate element name `{}`",
                    nm.name
                )));
            }
        }
        let convert = |nm: &NamedMatrix| -> Result<(String, Isometry), CliError> {
            let f = nm.to_isometry(self.dim_n, tol)?;
            let f = if canonical_phase {
                f.canonical_phase().0
            } else {
                f
            };
            Ok((nm.name.clone(), f))
        };
        let generators = self
            .generators
            .iter()
            .map(convert)
            .collect::<Result<Vec<_>, _>>()?;
        let extras = self
            .extras
            .iter()
            .map(convert)
            .collect::<Result<Vec<_>, _>>()?;
        let group = GroupInput::new(self.dim_n, generators)?;
        Ok(LoadedGroup { group, extras })
    }
}

#[derive(Debug, Clone)]
pub struct LoadedGroup {
    pub group: GroupInput,
    pub extras: Vec<(String, Isometry)>,
}

impl LoadedGroup {
    /// A generator or extra element by name.
    pub fn element(&self, name: &str) -> Result<&Isometry, CliError> {
        self.group
            .generator(name)
            .or_else(|| self.extras.iter().find(|(n, _)| n == name).map(|(_, g)| g))
            .ok_or_else(|| {
                let known: Vec<&str> = self
                    .group
                    .generators()
                    .iter()
                    .chain(&self.extras)
                    .map(|(n, _)| n.as_str())
                    .collect();
                CliError::Validation(format!(
                    "no element named `{name}` (known: {})",
                    known.join(", ")
                ))
            })
    }
}
