//! Word enumeration over a finite generating set, and the group-level
//! searches built on it.
//!
//! Groups are always given by explicit generator matrices; every statement
//! produced here is about the finitely many words actually enumerated.

pub(crate) mod enumerate;
mod search;
mod stability;
mod transport;
mod word;

pub use enumerate::{enumerate_words, Enumeration};
pub use search::{
    condition_a_scan, elementarity_check, limit_set_sample, near_identity_search,
    stabilizer_elements, StabilizerElement,
};
pub(crate) use search::{
    condition_a_scan_elements, elementarity_from_candidates, near_identity_from_elements,
    stabilizer_from_elements,
};
pub use stability::{perturbation_stability, StabilityReport};
pub use transport::{transport_loxodromic, BoundaryBall, TransportResult};
pub use word::{Letter, Word};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::isometry::Isometry;
use crate::linalg::CMatrix;

/// A finitely generated subgroup of `U(1,n)`, given by named generators.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupInput {
    dim_n: usize,
    generators: Vec<(String, Isometry)>,
}

impl GroupInput {
    pub fn new(dim_n: usize, generators: Vec<(String, Isometry)>) -> Result<Self> {
        if dim_n == 0 {
            return Err(Error::InvalidParameter("dim_n must be positive".into()));
        }
        for (name, g) in &generators {
            if g.dim_n() != dim_n {
                return Err(Error::InvalidParameter(format!(
                    "generator `{name}` has dimension {}, group has {dim_n}",
                    g.dim_n()
                )));
            }
        }
        Ok(Self { dim_n, generators })
    }

    pub fn dim_n(&self) -> usize {
        self.dim_n
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn generators(&self) -> &[(String, Isometry)] {
        &self.generators
    }

    pub fn names(&self) -> Vec<String> {
        self.generators.iter().map(|(n, _)| n.clone()).collect()
    }

    pub fn generator(&self, name: &str) -> Option<&Isometry> {
        self.generators
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, g)| g)
    }

    /// A copy with one more generator appended (its index is the old `len()`).
    pub fn extended(&self, name: impl Into<String>, g: Isometry) -> Result<Self> {
        let mut gens = self.generators.clone();
        gens.push((name.into(), g));
        Self::new(self.dim_n, gens)
    }

    /// The matrix of a word, multiplied left to right.
    pub fn evaluate(&self, word: &Word) -> Result<Isometry> {
        let size = self.dim_n + 1;
        let mut acc = CMatrix::identity(size, size);
        for l in word.letters() {
            let (_, g) = self.generators.get(l.generator).ok_or_else(|| {
                Error::InvalidParameter(format!(
                    "word uses generator {} of {}",
                    l.generator,
                    self.len()
                ))
            })?;
            if l.exponent > 0 {
                acc = &acc * g.matrix();
            } else {
                acc = &acc * g.inverse().matrix();
            }
        }
        Ok(Isometry::trusted(acc))
    }
}

/// An enumerated PU class with its shortlex-minimal witness word.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Element {
    pub word: Word,
    pub isometry: Isometry,
}
