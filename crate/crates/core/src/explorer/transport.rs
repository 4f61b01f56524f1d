//! Moving a loxodromic element so that its fixed points land in prescribed
//! boundary neighbourhoods: `g = p^m f p^{-m}`, `h = q^r`, then `h gⁿ`.

use serde::{Deserialize, Serialize};

use crate::config::SearchConfig;
use crate::error::{Error, Result};
use crate::hermitian::{chordal_distance, BallPoint, Region};
use crate::isometry::{classify_isometry, ClassTag, Isometry, IsometryClass};

/// Open chordal ball on the boundary sphere.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundaryBall {
    center: BallPoint,
    radius: f64,
}

impl BoundaryBall {
    pub fn new(center: BallPoint, radius: f64, tol_null: f64) -> Result<Self> {
        if center.region(tol_null) != Some(Region::Boundary) {
            return Err(Error::Precondition(
                "ball center must lie on the boundary sphere".into(),
            ));
        }
        if !(radius > 0.0 && radius < 2.0) {
            return Err(Error::InvalidParameter(format!(
                "chordal radius must lie in (0, 2), got {radius}"
            )));
        }
        Ok(Self {
            center: center.to_sphere(),
            radius,
        })
    }

    pub fn center(&self) -> &BallPoint {
        &self.center
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn contains(&self, p: &BallPoint) -> bool {
        !p.at_infinity && chordal_distance(&self.center, p).is_ok_and(|d| d < self.radius)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TransportResult {
    pub element: Isometry,
    pub m: usize,
    pub r: usize,
    pub n: usize,
    pub attracting: BallPoint,
    pub repelling: BallPoint,
}

fn loxodromic(f: &Isometry, label: &str, cfg: &SearchConfig) -> Result<IsometryClass> {
    match classify_isometry(f, &cfg.tol) {
        Ok(c) if c.tag == ClassTag::Loxodromic => Ok(c),
        Ok(c) => Err(Error::Precondition(format!(
            "{label} must be loxodromic, got {:?}",
            c.tag
        ))),
        Err(e) => Err(Error::Precondition(format!(
            "{label} must be loxodromic: {e}"
        ))),
    }
}

fn axis(c: &IsometryClass) -> (BallPoint, BallPoint) {
    (
        c.attracting.clone().expect("loxodromic"),
        c.repelling.clone().expect("loxodromic"),
    )
}

/// Searches, in order, the smallest `m ≤ m_max` with both fixed points of
/// `g = p^m f p^{-m}` in `o1`, the smallest `r ≤ r_max` with
/// `q^r(attracting(g)) ∈ o2`, and the smallest `1 ≤ n ≤ n_max` such that
/// `q^r gⁿ` is loxodromic with one fixed point in each ball.
#[allow(clippy::too_many_arguments)]
pub fn transport_loxodromic(
    p: &Isometry,
    q: &Isometry,
    f: &Isometry,
    o1: &BoundaryBall,
    o2: &BoundaryBall,
    m_max: usize,
    r_max: usize,
    n_max: usize,
    cfg: &SearchConfig,
) -> Result<TransportResult> {
    let dim = p.dim_n();
    for x in [q, f] {
        if x.dim_n() != dim {
            return Err(Error::Dimension {
                expected: dim,
                found: x.dim_n(),
            });
        }
    }
    if o1.center.dim_n() != dim || o2.center.dim_n() != dim {
        return Err(Error::Dimension {
            expected: dim,
            found: o1.center.dim_n().min(o2.center.dim_n()),
        });
    }
    if chordal_distance(&o1.center, &o2.center)? <= o1.radius + o2.radius {
        return Err(Error::Precondition("the two balls must be disjoint".into()));
    }
    let (p_att, _) = axis(&loxodromic(p, "p", cfg)?);
    let (q_att, _) = axis(&loxodromic(q, "q", cfg)?);
    let (f_att, f_rep) = axis(&loxodromic(f, "f", cfg)?);
    if !o1.contains(&p_att) {
        return Err(Error::Precondition(
            "the attracting point of p must lie in O1".into(),
        ));
    }
    if !o2.contains(&q_att) {
        return Err(Error::Precondition(
            "the attracting point of q must lie in O2".into(),
        ));
    }
    let tol = cfg.tol.coarse();
    let moved = |x: &BallPoint| -> Result<bool> {
        Ok(chordal_distance(&p.apply(x, cfg.tol.tol_null)?, x)? > tol)
    };
    if !moved(&f_att)? || !moved(&f_rep)? {
        return Err(Error::Precondition(
            "neither fixed point of f may be fixed by p".into(),
        ));
    }
    let tol_null = cfg.tol.tol_null;

    // Fixed points of g are p^m applied to those of f.
    let mut pm = Isometry::identity(dim);
    let mut found_m = None;
    for m in 0..=m_max {
        let (a, b) = (
            pm.apply(&f_att, tol_null)?.to_sphere(),
            pm.apply(&f_rep, tol_null)?.to_sphere(),
        );
        if o1.contains(&a) && o1.contains(&b) {
            found_m = Some((m, pm.clone(), a));
            break;
        }
        pm = pm.compose(p)?;
    }
    let (m, pm, g_att) = found_m.ok_or(Error::SearchExhausted {
        stage: "m",
        bound: m_max,
    })?;
    let g = pm.compose(f)?.compose(&pm.inverse())?;

    let mut h = Isometry::identity(dim);
    let mut found_r = None;
    for r in 0..=r_max {
        if o2.contains(&h.apply(&g_att, tol_null)?.to_sphere()) {
            found_r = Some(r);
            break;
        }
        h = h.compose(q)?;
    }
    let r = found_r.ok_or(Error::SearchExhausted {
        stage: "r",
        bound: r_max,
    })?;

    let mut gn = g.clone();
    for n in 1..=n_max {
        let candidate = h.compose(&gn)?;
        if let Ok(c) = classify_isometry(&candidate, &cfg.tol) {
            if c.tag == ClassTag::Loxodromic {
                let (a, b) = axis(&c);
                let split =
                    (o1.contains(&a) && o2.contains(&b)) || (o2.contains(&a) && o1.contains(&b));
                if split {
                    return verified(candidate, m, r, n, o1, o2, cfg);
                }
            }
        }
        gn = gn.compose(&g)?;
    }
    Err(Error::SearchExhausted {
        stage: "n",
        bound: n_max,
    })
}

fn verified(
    element: Isometry,
    m: usize,
    r: usize,
    n: usize,
    o1: &BoundaryBall,
    o2: &BoundaryBall,
    cfg: &SearchConfig,
) -> Result<TransportResult> {
    let c = classify_isometry(&element, &cfg.tol)?;
    if c.tag != ClassTag::Loxodromic {
        return Err(Error::InternalInvariant(
            "transported element is not loxodromic".into(),
        ));
    }
    let (attracting, repelling) = axis(&c);
    let ok = (o1.contains(&attracting) && o2.contains(&repelling))
        || (o2.contains(&attracting) && o1.contains(&repelling));
    if !ok {
        return Err(Error::InternalInvariant(
            "transported fixed points left their balls".into(),
        ));
    }
    Ok(TransportResult {
        element,
        m,
        r,
        n,
        attracting,
        repelling,
    })
}
