use nalgebra::{DMatrix, DVector};

use crate::hermitian::Complexd;

pub(crate) type CMatrix = DMatrix<Complexd>;

/// `J = diag(−1, 1, …, 1)` of size `dim`.
pub(crate) fn gram(dim: usize) -> CMatrix {
    let mut j = CMatrix::identity(dim, dim);
    j[(0, 0)] = Complexd::new(-1.0, 0.0);
    j
}

pub(crate) fn singular_values_desc(m: &CMatrix) -> Vec<f64> {
    let mut s: Vec<f64> = m.clone().singular_values().iter().copied().collect();
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

pub(crate) fn operator_norm(m: &CMatrix) -> f64 {
    singular_values_desc(m).first().copied().unwrap_or(0.0)
}

/// Right singular vectors split by singular value into a null part
/// (`σ ≤ strict`), a gray part (`strict < σ ≤ loose`) and the rest.
pub(crate) struct NullSpace {
    pub basis: Vec<DVector<Complexd>>,
    pub gray: usize,
}

pub(crate) fn null_space(m: &CMatrix, strict: f64, loose: f64) -> NullSpace {
    let svd = m.clone().svd(false, true);
    let v_t = svd.v_t.expect("requested V^H");
    let mut basis = Vec::new();
    let mut gray = 0;
    for (i, &s) in svd.singular_values.iter().enumerate() {
        if s <= strict {
            // Row i of V^H is v_i^H.
            basis.push(v_t.row(i).adjoint());
        } else if s <= loose {
            gray += 1;
        }
    }
    NullSpace { basis, gray }
}

/// Inertia of a Hermitian matrix: counts of eigenvalues below `−tol`,
/// within `±tol`, above `tol`, plus the matching eigenvectors.
pub(crate) struct Inertia {
    pub negative: Vec<DVector<Complexd>>,
    pub zero: Vec<DVector<Complexd>>,
    pub positive: usize,
}

pub(crate) fn inertia(h: &CMatrix, tol: f64) -> Inertia {
    let eig = h.clone().symmetric_eigen();
    let mut out = Inertia {
        negative: Vec::new(),
        zero: Vec::new(),
        positive: 0,
    };
    for (i, &ev) in eig.eigenvalues.iter().enumerate() {
        let v = eig.eigenvectors.column(i).into_owned();
        if ev < -tol {
            out.negative.push(v);
        } else if ev <= tol {
            out.zero.push(v);
        } else {
            out.positive += 1;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hermitian::c;

    #[test]
    fn null_space_of_rank_one() {
        let m = CMatrix::from_row_slice(2, 2, &[c(0., 1.), c(0., -1.), c(0., 1.), c(0., -1.)]);
        let ns = null_space(&m, 1e-12, 1e-6);
        assert_eq!(ns.basis.len(), 1);
        assert_eq!(ns.gray, 0);
        let v = &ns.basis[0];
        assert!((&m * v).norm() < 1e-12);
        assert!((v[0] - v[1]).norm() < 1e-12);
    }

    #[test]
    fn inertia_of_gram() {
        let inr = inertia(&gram(3), 1e-9);
        assert_eq!(
            (inr.negative.len(), inr.zero.len(), inr.positive),
            (1, 0, 2)
        );
    }

    #[test]
    fn operator_norm_diag() {
        let m = CMatrix::from_diagonal(&DVector::from_vec(vec![c(0., 0.), c(-2., 0.)]));
        assert_eq!(operator_norm(&m), 2.0);
    }
}
