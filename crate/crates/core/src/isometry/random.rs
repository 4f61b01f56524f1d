//! Random elements of `U(1,n)` drawn through the Lie algebra.
//!
//! `X = J·A` with `A` skew-Hermitian satisfies `X*J + JX = 0`, so `exp(X)`
//! preserves the form.

use rand::Rng;

use super::Isometry;
use crate::hermitian::c;
use crate::linalg::{gram, operator_norm, CMatrix};

/// A random algebra element of operator norm 1.
pub fn random_algebra<R: Rng + ?Sized>(rng: &mut R, dim_n: usize) -> CMatrix {
    let size = dim_n + 1;
    let mut a = CMatrix::zeros(size, size);
    for i in 0..size {
        a[(i, i)] = c(0.0, rng.random_range(-1.0..1.0));
        for j in 0..i {
            let z = c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
            a[(i, j)] = z;
            a[(j, i)] = -z.conj();
        }
    }
    let x = gram(size) * a;
    let n = operator_norm(&x);
    if n == 0.0 {
        return x;
    }
    x / c(n, 0.0)
}

/// `exp(X)` for an algebra element `X`.
pub fn exp_algebra(x: &CMatrix) -> Isometry {
    Isometry::trusted(x.clone().exp())
}

/// `exp(s·X)` with `X` from [`random_algebra`] and `s` uniform in `[0, scale]`.
pub fn random_isometry<R: Rng + ?Sized>(rng: &mut R, dim_n: usize, scale: f64) -> Isometry {
    let x = random_algebra(rng, dim_n);
    let s = if scale > 0.0 {
        rng.random_range(0.0..=scale)
    } else {
        0.0
    };
    exp_algebra(&(x * c(s, 0.0)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::ToleranceConfig;
    use rand::SeedableRng;

    #[test]
    fn random_elements_preserve_the_form() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
        for n in 1..=3 {
            for _ in 0..50 {
                let f = random_isometry(&mut rng, n, 2.0);
                Isometry::verify(f.into_matrix(), &ToleranceConfig::default()).unwrap();
            }
        }
    }
}
