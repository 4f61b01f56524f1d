//! Elements of `U(1,n)` and their images in `PU(1,n)`.

mod classify;
pub mod random;

pub use classify::{
    classify_isometry, finite_order, fixed_points_boundary, ClassTag, FixedCardinality,
    IsometryClass,
};

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::config::{NormKind, ToleranceConfig};
use crate::error::{Error, Result};
use crate::hermitian::{c, is_finite, lift, project, BallPoint, Complexd, HVector};
use crate::linalg::{gram, operator_norm, CMatrix};

/// An `(n+1)×(n+1)` complex matrix `M` with `M* J M = J`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Isometry {
    matrix: CMatrix,
}

impl Isometry {
    /// Validates `matrix` against the form. Rejects non-square or non-finite
    /// input and residuals above `tol_unitary · ‖M‖²` (Frobenius norms).
    pub fn verify(matrix: CMatrix, cfg: &ToleranceConfig) -> Result<Self> {
        let (rows, cols) = matrix.shape();
        if rows != cols {
            return Err(Error::Dimension {
                expected: rows,
                found: cols,
            });
        }
        if rows < 2 {
            return Err(Error::DegenerateInput(format!(
                "isometry needs size ≥ 2, got {rows}"
            )));
        }
        if !matrix.iter().copied().all(is_finite) {
            return Err(Error::NonFinite("matrix"));
        }
        let residual = unitary_residual(&matrix);
        let allowed = cfg.tol_unitary * matrix.norm_squared();
        if residual > allowed {
            return Err(Error::NotUnitary { residual, allowed });
        }
        Ok(Self { matrix })
    }

    /// Row-major construction followed by [`Isometry::verify`].
    pub fn from_rows(rows: &[Vec<Complexd>], cfg: &ToleranceConfig) -> Result<Self> {
        let size = rows.len();
        if let Some(bad) = rows.iter().find(|r| r.len() != size) {
            return Err(Error::Dimension {
                expected: size,
                found: bad.len(),
            });
        }
        let flat: Vec<Complexd> = rows.iter().flatten().copied().collect();
        Self::verify(DMatrix::from_row_slice(size, size, &flat), cfg)
    }

    /// Products and adjoints of isometries are isometries; skip the check.
    pub(crate) fn trusted(matrix: CMatrix) -> Self {
        Self { matrix }
    }

    pub fn identity(dim_n: usize) -> Self {
        Self {
            matrix: CMatrix::identity(dim_n + 1, dim_n + 1),
        }
    }

    /// The boost `L_t`: `[[cosh t, sinh t], [sinh t, cosh t]]` on `(e₀, e₁)`,
    /// identity on the remaining coordinates.
    pub fn boost(dim_n: usize, t: f64) -> Self {
        let mut m = CMatrix::identity(dim_n + 1, dim_n + 1);
        m[(0, 0)] = c(t.cosh(), 0.0);
        m[(1, 1)] = c(t.cosh(), 0.0);
        m[(0, 1)] = c(t.sinh(), 0.0);
        m[(1, 0)] = c(t.sinh(), 0.0);
        Self { matrix: m }
    }

    /// `diag(e^{iφ₀}, …, e^{iφₙ})`.
    pub fn diagonal_phases(phases: &[f64]) -> Self {
        assert!(phases.len() >= 2, "need at least two phases");
        let d = DVector::from_iterator(
            phases.len(),
            phases.iter().map(|&p| Complexd::from_polar(1.0, p)),
        );
        Self {
            matrix: CMatrix::from_diagonal(&d),
        }
    }

    /// `diag(1, e^{iθ₁}, …, e^{iθₙ})`.
    pub fn rotation(angles: &[f64]) -> Self {
        let mut phases = Vec::with_capacity(angles.len() + 1);
        phases.push(0.0);
        phases.extend_from_slice(angles);
        Self::diagonal_phases(&phases)
    }

    /// `P₀ = [[1+i, −i], [i, 1−i]]` on `(e₀, e₁)`, identity elsewhere. Unipotent
    /// parabolic fixing the boundary point `(1, 0, …, 0)`.
    pub fn parabolic_p0(dim_n: usize) -> Self {
        let mut m = CMatrix::identity(dim_n + 1, dim_n + 1);
        m[(0, 0)] = c(1.0, 1.0);
        m[(0, 1)] = c(0.0, -1.0);
        m[(1, 0)] = c(0.0, 1.0);
        m[(1, 1)] = c(1.0, -1.0);
        Self { matrix: m }
    }

    pub fn dim_n(&self) -> usize {
        self.matrix.nrows() - 1
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMatrix {
        self.matrix
    }

    pub fn residual(&self) -> f64 {
        unitary_residual(&self.matrix)
    }

    pub fn compose(&self, other: &Isometry) -> Result<Isometry> {
        self.same_dim(other)?;
        Ok(Self {
            matrix: &self.matrix * &other.matrix,
        })
    }

    /// Form adjoint `J M* J`, exact for isometries.
    pub fn inverse(&self) -> Isometry {
        let j = gram(self.matrix.nrows());
        Self {
            matrix: &j * self.matrix.adjoint() * &j,
        }
    }

    /// `f g f⁻¹ g⁻¹`.
    pub fn commutator(&self, g: &Isometry) -> Result<Isometry> {
        self.same_dim(g)?;
        Ok(Self {
            matrix: &self.matrix * &g.matrix * self.inverse().matrix * g.inverse().matrix,
        })
    }

    /// `f^k` for any integer `k` by repeated squaring.
    pub fn power(&self, k: i64) -> Isometry {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        let mut e = k.unsigned_abs();
        let mut acc = CMatrix::identity(self.matrix.nrows(), self.matrix.nrows());
        let mut sq = base.matrix;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &sq;
            }
            e >>= 1;
            if e > 0 {
                sq = &sq * &sq;
            }
        }
        Self { matrix: acc }
    }

    /// `N(f) = ‖f − I‖` of this representative (not a PU invariant).
    pub fn norm_n(&self, kind: NormKind) -> f64 {
        let d = &self.matrix - CMatrix::identity(self.matrix.nrows(), self.matrix.nrows());
        match kind {
            NormKind::Operator => operator_norm(&d),
            NormKind::Frobenius => d.norm(),
        }
    }

    /// `min(N(f), N(λf))` where `λ = conj(tr f)/|tr f|` rotates the trace onto
    /// the positive real axis; a phase-insensitive distance to the identity.
    pub fn pu_norm_n(&self, kind: NormKind) -> f64 {
        let raw = self.norm_n(kind);
        let tr = self.matrix.trace();
        if tr.norm() == 0.0 {
            return raw;
        }
        let lambda = tr.conj() / tr.norm();
        let aligned = Self {
            matrix: &self.matrix * lambda,
        };
        raw.min(aligned.norm_n(kind))
    }

    /// Whether `f = λg` for a unit scalar `λ`, within `tol_identity · ‖g‖`
    /// (Frobenius). `λ` is read off the largest-modulus entry of `g`.
    pub fn pu_equal(&self, g: &Isometry, cfg: &ToleranceConfig) -> bool {
        if self.matrix.shape() != g.matrix.shape() {
            return false;
        }
        pu_equal_matrices(&self.matrix, &g.matrix, cfg.tol_identity)
    }

    pub fn is_pu_identity(&self, cfg: &ToleranceConfig) -> bool {
        let id = CMatrix::identity(self.matrix.nrows(), self.matrix.nrows());
        pu_equal_matrices(&self.matrix, &id, cfg.tol_identity)
    }

    /// Rescales by a unit scalar so that `det = 1`, choosing among the
    /// `n+1` admissible roots the one that brings the trace closest to the
    /// positive real axis. Returns the scalar used.
    pub fn canonical_phase(&self) -> (Isometry, Complexd) {
        let size = self.matrix.nrows();
        let det = self.matrix.determinant();
        if det.norm() == 0.0 {
            return (self.clone(), c(1.0, 0.0));
        }
        let base = -det.arg() / size as f64;
        let tr = self.matrix.trace();
        let best = (0..size)
            .map(|k| {
                Complexd::from_polar(1.0, base + std::f64::consts::TAU * k as f64 / size as f64)
            })
            .max_by(|a, b| (a * tr).re.total_cmp(&(b * tr).re))
            .expect("size ≥ 2");
        (
            Self {
                matrix: &self.matrix * best,
            },
            best,
        )
    }

    /// `det` of the representative; unit modulus for an isometry.
    pub fn determinant(&self) -> Complexd {
        self.matrix.determinant()
    }

    /// Action on projective points: `P(M · lift(b))`.
    pub fn apply(&self, b: &BallPoint, tol_null: f64) -> Result<BallPoint> {
        if b.dim_n() != self.dim_n() {
            return Err(Error::Dimension {
                expected: self.dim_n(),
                found: b.dim_n(),
            });
        }
        let v = &self.matrix * lift(b).coords();
        project(&HVector::from_dvector(v), tol_null)
    }

    fn same_dim(&self, other: &Isometry) -> Result<()> {
        if self.matrix.nrows() != other.matrix.nrows() {
            return Err(Error::Dimension {
                expected: self.matrix.nrows(),
                found: other.matrix.nrows(),
            });
        }
        Ok(())
    }
}

fn unitary_residual(m: &CMatrix) -> f64 {
    let j = gram(m.nrows());
    (m.adjoint() * &j * m - j).norm()
}

pub(crate) fn pu_equal_matrices(f: &CMatrix, g: &CMatrix, tol: f64) -> bool {
    let (mut best, mut idx) = (0.0, 0);
    for (i, z) in g.iter().enumerate() {
        let m = z.norm_sqr();
        if m > best {
            best = m;
            idx = i;
        }
    }
    if best == 0.0 {
        return f.norm() == 0.0;
    }
    let ratio = f.as_slice()[idx] / g.as_slice()[idx];
    let modulus = ratio.norm();
    if modulus == 0.0 {
        return false;
    }
    let lambda = ratio / modulus;
    (f - g * lambda).norm() <= tol * g.norm()
}
