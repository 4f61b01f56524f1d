//! The signature-(1,n) Hermitian form, point classification, and the ball and
//! Siegel charts.
//!
//! The form is `Φ(z,w) = −z̄₀w₀ + Σ_{j≥1} z̄_j w_j`, Gram matrix
//! `J = diag(−1, 1, …, 1)`. Projectivizing the negative cone gives the unit
//! ball in `Cⁿ`; the null cone gives its boundary sphere.

use nalgebra::{Complex, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Complexd = Complex<f64>;

pub(crate) fn c(re: f64, im: f64) -> Complexd {
    Complex::new(re, im)
}

pub(crate) fn is_finite(z: Complexd) -> bool {
    z.re.is_finite() && z.im.is_finite()
}

/// Homogeneous coordinates `(z₀, z₁, …, zₙ)`.
#[derive(Debug, Clone, PartialEq)]
pub struct HVector {
    coords: DVector<Complexd>,
}

impl HVector {
    pub fn new(coords: Vec<Complexd>) -> Result<Self> {
        if coords.len() < 2 {
            return Err(Error::DegenerateInput(format!(
                "homogeneous vector needs at least 2 coordinates, got {}",
                coords.len()
            )));
        }
        if !coords.iter().copied().all(is_finite) {
            return Err(Error::NonFinite("homogeneous vector"));
        }
        Ok(Self {
            coords: DVector::from_vec(coords),
        })
    }

    pub(crate) fn from_dvector(coords: DVector<Complexd>) -> Self {
        debug_assert!(coords.len() >= 2);
        Self { coords }
    }

    pub fn dim_n(&self) -> usize {
        self.coords.len() - 1
    }

    pub fn coords(&self) -> &DVector<Complexd> {
        &self.coords
    }

    pub fn norm(&self) -> f64 {
        self.coords.norm()
    }

    pub fn scale(&self, alpha: Complexd) -> Self {
        Self {
            coords: &self.coords * alpha,
        }
    }
}

/// Sign class of `Φ(z,z)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PointTag {
    Negative,
    Null,
    Positive,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PointClass {
    pub tag: PointTag,
    /// `Φ(z,z)`, unnormalized.
    pub value: f64,
}

/// Position of an affine point relative to the unit sphere.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Region {
    Interior,
    Boundary,
    Exterior,
}

/// A point of projective space seen through the ball chart `z ↦ z_j / z₀`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BallPoint {
    pub affine: Vec<Complexd>,
    /// The point `P(0,1,0,…,0)`; `affine` is meaningless when set.
    pub at_infinity: bool,
}

impl BallPoint {
    pub fn new(affine: Vec<Complexd>) -> Result<Self> {
        if affine.is_empty() {
            return Err(Error::DegenerateInput(
                "ball point needs at least one coordinate".into(),
            ));
        }
        if !affine.iter().copied().all(is_finite) {
            return Err(Error::NonFinite("ball point"));
        }
        Ok(Self {
            affine,
            at_infinity: false,
        })
    }

    pub fn infinity(dim_n: usize) -> Self {
        Self {
            affine: vec![Complex::default(); dim_n],
            at_infinity: true,
        }
    }

    /// Real 2n-vector convenience constructor: `[re₁, im₁, re₂, im₂, …]`.
    pub fn from_reals(reals: &[f64]) -> Result<Self> {
        if reals.is_empty() || !reals.len().is_multiple_of(2) {
            return Err(Error::DegenerateInput(format!(
                "expected an even, nonzero number of reals, got {}",
                reals.len()
            )));
        }
        Self::new(reals.chunks(2).map(|p| c(p[0], p[1])).collect())
    }

    pub fn dim_n(&self) -> usize {
        self.affine.len()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.affine.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn region(&self, tol_null: f64) -> Option<Region> {
        if self.at_infinity {
            return None;
        }
        let s = self.norm_sqr();
        Some(if (s - 1.0).abs() <= tol_null {
            Region::Boundary
        } else if s < 1.0 {
            Region::Interior
        } else {
            Region::Exterior
        })
    }

    /// Radial projection onto the unit sphere. The origin and infinity are
    /// returned unchanged.
    pub fn to_sphere(&self) -> Self {
        let r = self.norm_sqr().sqrt();
        if self.at_infinity || r == 0.0 {
            return self.clone();
        }
        Self {
            affine: self.affine.iter().map(|z| z / r).collect(),
            at_infinity: false,
        }
    }

    /// `[re₁, im₁, …, reₙ, imₙ]`
    pub fn to_reals(&self) -> Vec<f64> {
        self.affine.iter().flat_map(|z| [z.re, z.im]).collect()
    }
}

/// `Φ(z, w) = −z̄₀w₀ + Σ_{j≥1} z̄_j w_j`.
pub fn form_eval(z: &HVector, w: &HVector) -> Result<Complexd> {
    if z.coords.len() != w.coords.len() {
        return Err(Error::Dimension {
            expected: z.coords.len(),
            found: w.coords.len(),
        });
    }
    Ok(form_raw(&z.coords, &w.coords))
}

pub(crate) fn form_raw(z: &DVector<Complexd>, w: &DVector<Complexd>) -> Complexd {
    let mut acc = -(z[0].conj() * w[0]);
    for j in 1..z.len() {
        acc += z[j].conj() * w[j];
    }
    acc
}

/// Relative value `Φ(z,z)/‖z‖²`, in `[−1, 1]`.
pub(crate) fn relative_norm(z: &DVector<Complexd>) -> f64 {
    let n2 = z.norm_squared();
    if n2 == 0.0 {
        return 0.0;
    }
    form_raw(z, z).re / n2
}

pub fn classify_point(z: &HVector, tol_null: f64) -> Result<PointClass> {
    let n2 = z.coords.norm_squared();
    if n2 == 0.0 {
        return Err(Error::DegenerateInput(
            "zero vector has no projective class".into(),
        ));
    }
    let value = form_raw(&z.coords, &z.coords);
    if value.im.abs() > tol_null * n2 {
        return Err(Error::InternalInvariant(format!(
            "Φ(z,z) has imaginary part {:e}",
            value.im
        )));
    }
    let tag = if value.re.abs() <= tol_null * n2 {
        PointTag::Null
    } else if value.re < 0.0 {
        PointTag::Negative
    } else {
        PointTag::Positive
    };
    Ok(PointClass {
        tag,
        value: value.re,
    })
}

/// The projection `P(z) = (z₁/z₀, …, zₙ/z₀)`.
pub fn project(z: &HVector, tol_null: f64) -> Result<BallPoint> {
    let norm = z.norm();
    if norm == 0.0 {
        return Err(Error::DegenerateInput(
            "cannot project the zero vector".into(),
        ));
    }
    let z0 = z.coords[0];
    if z0.norm() > tol_null * norm {
        let affine = z.coords.iter().skip(1).map(|zj| zj / z0).collect();
        return Ok(BallPoint {
            affine,
            at_infinity: false,
        });
    }
    if classify_point(z, tol_null)?.tag == PointTag::Negative {
        return Err(Error::InternalInvariant(
            "negative vector with vanishing z₀".into(),
        ));
    }
    Ok(BallPoint::infinity(z.dim_n()))
}

/// Section of the projection: `(1, b₁, …, bₙ)`, or `(0, 1, 0, …, 0)` for infinity.
pub fn lift(b: &BallPoint) -> HVector {
    let n = b.dim_n();
    let mut v = DVector::from_element(n + 1, Complex::default());
    if b.at_infinity {
        v[1] = c(1.0, 0.0);
    } else {
        v[0] = c(1.0, 0.0);
        for (j, z) in b.affine.iter().enumerate() {
            v[j + 1] = *z;
        }
    }
    HVector { coords: v }
}

/// Euclidean distance in `Cⁿ ≅ R²ⁿ`.
pub fn chordal_distance(a: &BallPoint, b: &BallPoint) -> Result<f64> {
    if a.at_infinity || b.at_infinity {
        return Err(Error::InfinityNotSupported);
    }
    if a.dim_n() != b.dim_n() {
        return Err(Error::Dimension {
            expected: a.dim_n(),
            found: b.dim_n(),
        });
    }
    Ok(a.affine
        .iter()
        .zip(&b.affine)
        .map(|(x, y)| (x - y).norm_sqr())
        .sum::<f64>()
        .sqrt())
}

/// Cayley transform from the ball to the Siegel domain
/// `{w : Re w₁ > ½ Σ_{j≥2} |w_j|²}`.
///
/// In homogeneous coordinates it is the fixed matrix
///
/// ```text
///   w'₀ = z₀ − z₁,   w'₁ = z₀ + z₁,   w'_j = √2 · z_j  (j ≥ 2)
/// ```
///
/// followed by `w = w'/w'₀`, so that
/// `Re w₁ − ½ Σ|w_j|² = (1 − Σ|z_j|²) / |1 − z₁|²`.
pub fn cayley_to_siegel(b: &BallPoint, tol_null: f64) -> Result<Vec<Complexd>> {
    if b.at_infinity {
        return Err(Error::InfinityNotSupported);
    }
    if b.region(tol_null) == Some(Region::Exterior) {
        return Err(Error::OutsideClosedBall);
    }
    let z1 = b.affine[0];
    let denom = c(1.0, 0.0) - z1;
    let rest: f64 = b.affine.iter().skip(1).map(|z| z.norm_sqr()).sum();
    if denom.norm() <= tol_null.sqrt() && rest <= tol_null {
        return Err(Error::Pole);
    }
    let mut out = Vec::with_capacity(b.dim_n());
    out.push((c(1.0, 0.0) + z1) / denom);
    for zj in b.affine.iter().skip(1) {
        out.push(zj * std::f64::consts::SQRT_2 / denom);
    }
    Ok(out)
}

/// `Re w₁ − ½ Σ_{j≥2} |w_j|²`; positive inside the Siegel domain.
pub fn siegel_height(w: &[Complexd]) -> f64 {
    w[0].re - 0.5 * w.iter().skip(1).map(|z| z.norm_sqr()).sum::<f64>()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const TOL: f64 = 1e-9;

    fn hv(xs: &[(f64, f64)]) -> HVector {
        HVector::new(xs.iter().map(|&(a, b)| c(a, b)).collect()).unwrap()
    }

    #[test]
    fn form_on_basis_and_null_vector() {
        assert_eq!(
            form_eval(&hv(&[(1., 0.), (0., 0.)]), &hv(&[(1., 0.), (0., 0.)])).unwrap(),
            c(-1., 0.)
        );
        assert_eq!(
            form_eval(&hv(&[(0., 0.), (1., 0.)]), &hv(&[(0., 0.), (1., 0.)])).unwrap(),
            c(1., 0.)
        );
        assert_eq!(
            form_eval(&hv(&[(1., 0.), (1., 0.)]), &hv(&[(1., 0.), (1., 0.)])).unwrap(),
            c(0., 0.)
        );
    }

    #[test]
    fn form_dimension_mismatch() {
        let err = form_eval(
            &hv(&[(1., 0.), (0., 0.)]),
            &hv(&[(1., 0.), (0., 0.), (0., 0.)]),
        );
        assert!(matches!(err, Err(Error::Dimension { .. })));
    }

    #[test]
    fn classify_examples() {
        assert_eq!(
            classify_point(&hv(&[(1., 0.), (0., 0.)]), TOL).unwrap().tag,
            PointTag::Negative
        );
        assert_eq!(
            classify_point(&hv(&[(1., 0.), (1., 0.)]), TOL).unwrap().tag,
            PointTag::Null
        );
        assert_eq!(
            classify_point(&hv(&[(0., 0.), (1., 0.)]), TOL).unwrap().tag,
            PointTag::Positive
        );
        assert!(matches!(
            classify_point(&hv(&[(0., 0.), (0., 0.)]), TOL),
            Err(Error::DegenerateInput(_))
        ));
    }

    #[test]
    fn nan_rejected() {
        assert!(HVector::new(vec![c(f64::NAN, 0.), c(0., 0.)]).is_err());
        assert!(BallPoint::new(vec![c(f64::INFINITY, 0.)]).is_err());
    }

    #[test]
    fn project_examples() {
        let p = project(&hv(&[(2., 0.), (1., 0.), (0., 0.)]), TOL).unwrap();
        assert_eq!(p.affine, vec![c(0.5, 0.), c(0., 0.)]);
        assert_eq!(p.region(TOL), Some(Region::Interior));

        let p = project(&hv(&[(1., 0.), (1., 0.)]), TOL).unwrap();
        assert_eq!(p.affine, vec![c(1., 0.)]);
        assert_eq!(p.region(TOL), Some(Region::Boundary));

        let p = project(&hv(&[(0., 0.), (1., 0.), (0., 0.)]), TOL).unwrap();
        assert!(p.at_infinity);
    }

    #[test]
    fn lift_examples() {
        let b = BallPoint::new(vec![c(0.5, 0.), c(0., 0.)]).unwrap();
        assert_eq!(lift(&b), hv(&[(1., 0.), (0.5, 0.), (0., 0.)]));
        let b = BallPoint::new(vec![c(0., 0.)]).unwrap();
        assert_eq!(lift(&b), hv(&[(1., 0.), (0., 0.)]));
        assert_eq!(
            lift(&BallPoint::infinity(2)),
            hv(&[(0., 0.), (1., 0.), (0., 0.)])
        );
        assert!(
            project(&lift(&BallPoint::infinity(2)), TOL)
                .unwrap()
                .at_infinity
        );
    }

    #[test]
    fn chordal_examples() {
        let a = BallPoint::new(vec![c(0.3, -0.2)]).unwrap();
        assert_eq!(chordal_distance(&a, &a).unwrap(), 0.0);
        let p = BallPoint::new(vec![c(1., 0.)]).unwrap();
        let m = BallPoint::new(vec![c(-1., 0.)]).unwrap();
        assert_eq!(chordal_distance(&p, &m).unwrap(), 2.0);
        // |0.6 + 0.8i| = 1
        let o = BallPoint::new(vec![c(0., 0.)]).unwrap();
        let q = BallPoint::new(vec![c(0.6, 0.8)]).unwrap();
        assert!((chordal_distance(&o, &q).unwrap() - 1.0).abs() < 1e-15);
        assert!(matches!(
            chordal_distance(&o, &BallPoint::infinity(1)),
            Err(Error::InfinityNotSupported)
        ));
    }

    #[test]
    fn cayley_examples() {
        let centre = BallPoint::new(vec![c(0., 0.), c(0., 0.)]).unwrap();
        let w = cayley_to_siegel(&centre, TOL).unwrap();
        assert!(w[0].re > 0.0);
        assert!(siegel_height(&w) > 0.0);

        let s = 1.0 / 2f64.sqrt();
        let bdry = BallPoint::new(vec![c(0., s), c(s, 0.)]).unwrap();
        let w = cayley_to_siegel(&bdry, TOL).unwrap();
        assert!(siegel_height(&w).abs() < 1e-9);

        let pole = BallPoint::new(vec![c(1., 0.), c(0., 0.)]).unwrap();
        assert!(matches!(cayley_to_siegel(&pole, TOL), Err(Error::Pole)));
        let outside = BallPoint::new(vec![c(2., 0.), c(0., 0.)]).unwrap();
        assert!(matches!(
            cayley_to_siegel(&outside, TOL),
            Err(Error::OutsideClosedBall)
        ));
    }

    fn arb_c() -> impl Strategy<Value = Complexd> {
        (-3.0..3.0f64, -3.0..3.0f64).prop_map(|(a, b)| c(a, b))
    }

    fn arb_vec(n: usize) -> impl Strategy<Value = HVector> {
        prop::collection::vec(arb_c(), n + 1).prop_map(|v| HVector::new(v).unwrap())
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn conjugate_symmetry((z, w) in (1usize..4).prop_flat_map(|n| (arb_vec(n), arb_vec(n)))) {
            let a = form_eval(&z, &w).unwrap();
            let b = form_eval(&w, &z).unwrap().conj();
            prop_assert!((a - b).norm() <= 1e-12 * (1.0 + a.norm()));
        }

        #[test]
        fn sesquilinear((z, w) in (1usize..4).prop_flat_map(|n| (arb_vec(n), arb_vec(n))), alpha in arb_c()) {
            let lhs = form_eval(&z.scale(alpha), &w).unwrap();
            let rhs = alpha.conj() * form_eval(&z, &w).unwrap();
            prop_assert!((lhs - rhs).norm() <= 1e-12 * (1.0 + rhs.norm()));
        }

        #[test]
        fn projective_class(z in (1usize..4).prop_flat_map(arb_vec), alpha in arb_c()) {
            prop_assume!(alpha.norm() > 1e-3 && z.norm() > 1e-3);
            let a = classify_point(&z, TOL).unwrap();
            let b = classify_point(&z.scale(alpha), TOL).unwrap();
            prop_assert_eq!(a.tag, b.tag);
        }

        #[test]
        fn project_lift_identity(v in prop::collection::vec(arb_c(), 1..4)) {
            let b = BallPoint::new(v).unwrap();
            prop_assert_eq!(project(&lift(&b), TOL).unwrap(), b);
        }
    }

    #[test]
    fn interior_iff_negative_fuzz() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let mut checked = 0;
        for _ in 0..10_000 {
            let n = rng.random_range(1..=3);
            let pts: Vec<Complexd> = (0..n)
                .map(|_| c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
                .collect();
            let b = BallPoint::new(pts).unwrap();
            let s = b.norm_sqr();
            if (s - 1.0).abs() < 1e-6 {
                continue;
            }
            let tag = classify_point(&lift(&b), TOL).unwrap().tag;
            assert_eq!(tag == PointTag::Negative, s < 1.0);
            checked += 1;
        }
        assert!(checked > 9_900);
    }
}
