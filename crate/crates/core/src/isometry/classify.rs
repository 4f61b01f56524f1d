//! Eigen-analysis of isometries: the elliptic / parabolic / loxodromic
//! trichotomy, boundary fixed points and torsion.
//!
//! Eigenvalues come from a complex Schur decomposition. They are grouped into
//! clusters (relative spread below `coarse = √tol_eig`) and each cluster's
//! eigenspace is the numerical null space of `M − μI`, read from an SVD:
//! singular values below `tol_eig·‖M‖` count as null, those between that and
//! `coarse·|μ|` make the analysis ambiguous. The fixed boundary set of an
//! eigenspace is decided by the inertia of the form restricted to it.

use nalgebra::DVector;
use serde::{Deserialize, Serialize};

use super::Isometry;
use crate::config::ToleranceConfig;
use crate::error::{Error, Result};
use crate::hermitian::{project, relative_norm, BallPoint, Complexd, HVector};
use crate::linalg::{gram, inertia, null_space, operator_norm, CMatrix};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum ClassTag {
    Identity,
    Elliptic,
    Parabolic,
    Loxodromic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum FixedCardinality {
    Finite(usize),
    Infinite,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IsometryClass {
    pub tag: ClassTag,
    /// Representatives of the finite part of the boundary fixed set, on the unit sphere.
    pub boundary_fixed: Vec<BallPoint>,
    pub interior_fixed_exists: bool,
    pub fixed_cardinality: FixedCardinality,
    pub attracting: Option<BallPoint>,
    pub repelling: Option<BallPoint>,
    /// Eigenvalues after `(λ, 1/λ̄)` pairing, ordered by decreasing modulus.
    pub eigenvalues: Vec<Complexd>,
}

struct Eigenspace {
    /// Cluster mean.
    value: Complexd,
    multiplicity: usize,
    basis: Vec<DVector<Complexd>>,
    negative: usize,
    null_dirs: Vec<DVector<Complexd>>,
    positive: usize,
}

impl Eigenspace {
    fn fixed_part(&self) -> FixedPart {
        let z = self.null_dirs.len();
        if (self.negative >= 1 && (self.positive >= 1 || z >= 1)) || z >= 2 {
            FixedPart::Infinite
        } else if z == 1 {
            FixedPart::Point(self.null_dirs[0].clone())
        } else {
            FixedPart::Empty
        }
    }
}

enum FixedPart {
    Empty,
    Point(DVector<Complexd>),
    Infinite,
}

struct Analysis {
    eigenvalues: Vec<Complexd>,
    spaces: Vec<Eigenspace>,
    /// Some singular value fell in the gray band.
    gray: bool,
}

impl Analysis {
    fn diagonalizable(&self) -> bool {
        self.spaces.iter().all(|s| s.basis.len() == s.multiplicity)
    }

    fn has_negative(&self) -> bool {
        self.spaces.iter().any(|s| s.negative > 0)
    }
}

fn paired_eigenvalues(raw: &[Complexd]) -> Vec<Complexd> {
    raw.iter()
        .map(|&l| {
            let target = 1.0 / l.conj();
            let partner = raw
                .iter()
                .copied()
                .min_by(|a, b| (a - target).norm().total_cmp(&(b - target).norm()))
                .expect("nonempty");
            (l + 1.0 / partner.conj()) * 0.5
        })
        .collect()
}

fn analyze(m: &CMatrix, cfg: &ToleranceConfig) -> Result<Analysis> {
    let size = m.nrows();
    let scale = operator_norm(m).max(1.0);
    let coarse = cfg.coarse();
    let raw: Vec<Complexd> = m
        .clone()
        .schur()
        .eigenvalues()
        .ok_or_else(|| {
            ambiguous(&[
                ClassTag::Elliptic,
                ClassTag::Parabolic,
                ClassTag::Loxodromic,
            ])
        })?
        .iter()
        .copied()
        .collect();
    if raw
        .iter()
        .any(|l| !(l.re.is_finite() && l.im.is_finite()) || l.norm() == 0.0)
    {
        return Err(Error::InternalInvariant("degenerate eigenvalue".into()));
    }
    let mut eigenvalues = paired_eigenvalues(&raw);
    eigenvalues.sort_by(|a, b| {
        b.norm()
            .total_cmp(&a.norm())
            .then(a.arg().total_cmp(&b.arg()))
    });

    // Single-linkage clustering on relative distance.
    let mut cluster_of: Vec<usize> = (0..size).collect();
    let close = |a: Complexd, b: Complexd| (a - b).norm() <= coarse * a.norm().max(b.norm());
    for i in 0..size {
        for j in 0..i {
            if close(eigenvalues[i], eigenvalues[j]) {
                let (from, to) = (cluster_of[i], cluster_of[j]);
                for c in cluster_of.iter_mut() {
                    if *c == from {
                        *c = to;
                    }
                }
            }
        }
    }
    let mut labels: Vec<usize> = cluster_of.clone();
    labels.sort_unstable();
    labels.dedup();

    let j = gram(size);
    let mut gray = false;
    let mut spaces = Vec::with_capacity(labels.len());
    for label in labels {
        let members: Vec<Complexd> = (0..size)
            .filter(|&i| cluster_of[i] == label)
            .map(|i| eigenvalues[i])
            .collect();
        let value = members.iter().sum::<Complexd>() / members.len() as f64;
        let shifted = m - CMatrix::identity(size, size) * value;
        let strict = cfg.tol_eig * scale;
        let ns = null_space(&shifted, strict, strict.max(coarse * value.norm()));
        gray |= ns.gray > 0;
        let (negative, null_dirs, positive) = if ns.basis.is_empty() {
            (0, Vec::new(), 0)
        } else {
            let b = CMatrix::from_columns(&ns.basis);
            let restricted = b.adjoint() * &j * &b;
            let inr = inertia(&restricted, coarse);
            let null_dirs = inr.zero.iter().map(|k| &b * k).collect();
            (inr.negative.len(), null_dirs, inr.positive)
        };
        spaces.push(Eigenspace {
            value,
            multiplicity: members.len(),
            basis: ns.basis,
            negative,
            null_dirs,
            positive,
        });
    }
    Ok(Analysis {
        eigenvalues,
        spaces,
        gray,
    })
}

fn ambiguous(candidates: &[ClassTag]) -> Error {
    Error::NumericallyAmbiguous {
        candidates: candidates.to_vec(),
    }
}

fn boundary_point(v: &DVector<Complexd>, cfg: &ToleranceConfig) -> Result<BallPoint> {
    if relative_norm(v).abs() > cfg.coarse() {
        return Err(Error::InternalInvariant(
            "fixed direction is not null".into(),
        ));
    }
    Ok(project(&HVector::from_dvector(v.clone()), cfg.tol_null)?.to_sphere())
}

fn collect_fixed(
    analysis: &Analysis,
    cfg: &ToleranceConfig,
) -> Result<(Vec<BallPoint>, FixedCardinality)> {
    let mut points = Vec::new();
    let mut infinite = false;
    for space in &analysis.spaces {
        match space.fixed_part() {
            FixedPart::Empty => {}
            FixedPart::Infinite => infinite = true,
            FixedPart::Point(v) => points.push(boundary_point(&v, cfg)?),
        }
    }
    let card = if infinite {
        FixedCardinality::Infinite
    } else {
        FixedCardinality::Finite(points.len())
    };
    Ok((points, card))
}

/// Boundary fixed points of `f` and the cardinality of its boundary fixed set.
pub fn fixed_points_boundary(
    f: &Isometry,
    cfg: &ToleranceConfig,
) -> Result<(Vec<BallPoint>, FixedCardinality)> {
    if f.is_pu_identity(cfg) {
        return Ok((Vec::new(), FixedCardinality::Infinite));
    }
    let analysis = analyze(f.matrix(), cfg)?;
    if analysis.gray {
        return Err(ambiguous(&[ClassTag::Elliptic, ClassTag::Parabolic]));
    }
    collect_fixed(&analysis, cfg)
}

/// Classifies `f` as identity, elliptic, parabolic or loxodromic.
///
/// Returns [`Error::NumericallyAmbiguous`] rather than guessing when the
/// eigenstructure cannot be resolved at the configured tolerances.
pub fn classify_isometry(f: &Isometry, cfg: &ToleranceConfig) -> Result<IsometryClass> {
    if f.is_pu_identity(cfg) {
        return Ok(IsometryClass {
            tag: ClassTag::Identity,
            boundary_fixed: Vec::new(),
            interior_fixed_exists: true,
            fixed_cardinality: FixedCardinality::Infinite,
            attracting: None,
            repelling: None,
            eigenvalues: vec![Complexd::new(1.0, 0.0); f.dim_n() + 1],
        });
    }
    let analysis = analyze(f.matrix(), cfg)?;
    let coarse = cfg.coarse();

    if let Some(class) = try_loxodromic(&analysis, cfg)? {
        return Ok(class);
    }
    let max_mod = analysis
        .eigenvalues
        .first()
        .map(|l| l.norm())
        .unwrap_or(1.0);
    if max_mod > 1.0 + coarse {
        return Err(ambiguous(&[ClassTag::Loxodromic, ClassTag::Parabolic]));
    }
    if analysis.gray {
        return Err(ambiguous(&[ClassTag::Elliptic, ClassTag::Parabolic]));
    }

    let (points, card) = collect_fixed(&analysis, cfg)?;
    if analysis.diagonalizable() {
        if !analysis.has_negative() {
            return Err(ambiguous(&[ClassTag::Elliptic, ClassTag::Parabolic]));
        }
        return Ok(IsometryClass {
            tag: ClassTag::Elliptic,
            boundary_fixed: points,
            interior_fixed_exists: true,
            fixed_cardinality: card,
            attracting: None,
            repelling: None,
            eigenvalues: analysis.eigenvalues,
        });
    }
    if analysis.has_negative() || card != FixedCardinality::Finite(1) {
        return Err(ambiguous(&[ClassTag::Elliptic, ClassTag::Parabolic]));
    }
    Ok(IsometryClass {
        tag: ClassTag::Parabolic,
        boundary_fixed: points,
        interior_fixed_exists: false,
        fixed_cardinality: card,
        attracting: None,
        repelling: None,
        eigenvalues: analysis.eigenvalues,
    })
}

fn try_loxodromic(analysis: &Analysis, cfg: &ToleranceConfig) -> Result<Option<IsometryClass>> {
    let by_modulus = |a: &&Eigenspace, b: &&Eigenspace| a.value.norm().total_cmp(&b.value.norm());
    let (Some(top), Some(bottom)) = (
        analysis.spaces.iter().max_by(by_modulus),
        analysis.spaces.iter().min_by(by_modulus),
    ) else {
        return Ok(None);
    };
    if top.value.norm() <= 1.0 + cfg.tol_eig || std::ptr::eq(top, bottom) {
        return Ok(None);
    }
    let single_null = |s: &Eigenspace| s.basis.len() == 1 && s.null_dirs.len() == 1;
    if !single_null(top) || !single_null(bottom) {
        return Ok(None);
    }
    let attracting = boundary_point(&top.null_dirs[0], cfg)?;
    let repelling = boundary_point(&bottom.null_dirs[0], cfg)?;
    if crate::hermitian::chordal_distance(&attracting, &repelling)? <= cfg.coarse() {
        return Ok(None);
    }
    // Remaining eigenspaces must not contribute boundary points.
    let extra_fixed = analysis
        .spaces
        .iter()
        .filter(|s| !std::ptr::eq(*s, top) && !std::ptr::eq(*s, bottom))
        .any(|s| !matches!(s.fixed_part(), FixedPart::Empty) || s.negative > 0);
    if extra_fixed || analysis.gray {
        return Err(ambiguous(&[ClassTag::Loxodromic]));
    }
    Ok(Some(IsometryClass {
        tag: ClassTag::Loxodromic,
        boundary_fixed: vec![attracting.clone(), repelling.clone()],
        interior_fixed_exists: false,
        fixed_cardinality: FixedCardinality::Finite(2),
        attracting: Some(attracting),
        repelling: Some(repelling),
        eigenvalues: analysis.eigenvalues.clone(),
    }))
}

/// Smallest `k ≤ k_max` with `f^k = I` in PU, if any. `None` means the
/// order exceeds `k_max` (possibly infinite), not that it is infinite.
pub fn finite_order(f: &Isometry, k_max: usize, cfg: &ToleranceConfig) -> Option<usize> {
    let mut acc = f.clone();
    for k in 1..=k_max {
        if acc.is_pu_identity(cfg) {
            return Some(k);
        }
        acc = Isometry::trusted(acc.matrix() * f.matrix());
    }
    None
}
