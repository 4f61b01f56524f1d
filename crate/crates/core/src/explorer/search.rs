use serde::{Deserialize, Serialize};

use super::enumerate::enumerate_partial;
use super::{Element, GroupInput, Word};
use crate::certificates::{Certificate, CertificateKind, Witness};
use crate::config::SearchConfig;
use crate::error::{Error, Result};
use crate::hermitian::{chordal_distance, BallPoint, Region};
use crate::isometry::{
    classify_isometry, finite_order, fixed_points_boundary, ClassTag, FixedCardinality, Isometry,
};
use crate::par;

fn enumerate_lenient(
    group: &GroupInput,
    max_len: usize,
    cfg: &SearchConfig,
) -> Result<Vec<Element>> {
    Ok(enumerate_partial(group, max_len, cfg)?.elements)
}

/// Nontrivial enumerated classes with phase-aligned `N < ε`, ascending by `N`
/// then by word.
pub fn near_identity_search(
    group: &GroupInput,
    max_len: usize,
    epsilon: f64,
    cfg: &SearchConfig,
) -> Result<Vec<(Word, f64)>> {
    if epsilon <= 0.0 {
        return Ok(Vec::new());
    }
    let elements = enumerate_lenient(group, max_len, cfg)?;
    Ok(near_identity_from_elements(&elements, epsilon, cfg))
}

pub(crate) fn near_identity_from_elements(
    elements: &[Element],
    epsilon: f64,
    cfg: &SearchConfig,
) -> Vec<(Word, f64)> {
    if epsilon <= 0.0 {
        return Vec::new();
    }
    let norms = par::map(cfg.execution, elements, |e| e.isometry.pu_norm_n(cfg.norm));
    let mut hits: Vec<(Word, f64)> = elements
        .iter()
        .zip(norms)
        .filter(|(_, n)| *n < epsilon)
        .map(|(e, n)| (e.word.clone(), n))
        .collect();
    hits.sort_by(|a, b| a.1.total_cmp(&b.1).then_with(|| a.0.cmp(&b.0)));
    hits
}

/// Looks for two non-elliptic words of (presumed) infinite order whose
/// boundary fixed sets differ.
pub fn elementarity_check(
    group: &GroupInput,
    max_len: usize,
    cfg: &SearchConfig,
) -> Result<Certificate> {
    let elements = enumerate_lenient(group, max_len, cfg)?;
    let tags = par::map(cfg.execution, &elements, |e| {
        classify_isometry(&e.isometry, &cfg.tol).ok().map(|c| c.tag)
    });
    let candidates: Vec<Element> = elements
        .into_iter()
        .zip(tags)
        .filter(|(_, t)| matches!(t, Some(ClassTag::Loxodromic | ClassTag::Parabolic)))
        .map(|(e, _)| e)
        .collect();
    Ok(elementarity_from_candidates(
        &candidates,
        &group.names(),
        cfg,
    ))
}

fn set_differs(a: &[BallPoint], b: &[BallPoint], tol: f64) -> bool {
    let far = |p: &BallPoint, set: &[BallPoint]| {
        set.iter()
            .all(|q| chordal_distance(p, q).map(|d| d > tol).unwrap_or(true))
    };
    a.iter().any(|p| far(p, b)) || b.iter().any(|q| far(q, a))
}

pub(crate) fn elementarity_from_candidates(
    candidates: &[Element],
    names: &[String],
    cfg: &SearchConfig,
) -> Certificate {
    let assumption = format!(
        "infinite order is assumed for elements with no torsion up to order {}",
        cfg.k_max
    );
    let prepared: Vec<Option<Vec<BallPoint>>> = par::map(cfg.execution, candidates, |e| {
        if finite_order(&e.isometry, cfg.k_max, &cfg.tol).is_some() {
            return None;
        }
        match fixed_points_boundary(&e.isometry, &cfg.tol) {
            Ok((pts, FixedCardinality::Finite(_))) if !pts.is_empty() => Some(pts),
            _ => None,
        }
    });
    let usable: Vec<(&Element, &Vec<BallPoint>)> = candidates
        .iter()
        .zip(&prepared)
        .filter_map(|(e, p)| p.as_ref().map(|p| (e, p)))
        .collect();
    let tol = cfg.tol.coarse();
    for j in 1..usable.len() {
        for i in 0..j.min(cfg.pair_limit) {
            let (a, pa) = usable[i];
            let (b, pb) = usable[j];
            if set_differs(pa, pb, tol) {
                let reals = |pts: &Vec<BallPoint>| {
                    pts.iter().flat_map(|p| p.to_reals()).collect::<Vec<_>>()
                };
                let mut c = Certificate::inconclusive(format!(
                    "{} and {} are non-elliptic with different boundary fixed sets: the group is non-elementary",
                    a.word.display(names),
                    b.word.display(names)
                ));
                c.kind = CertificateKind::NonElementaryWitness;
                c.witnesses = vec![
                    Witness {
                        word: a.word.clone(),
                        values: reals(pa),
                    },
                    Witness {
                        word: b.word.clone(),
                        values: reals(pb),
                    },
                ];
                c.assumptions.push(assumption);
                return c;
            }
        }
    }
    let mut c = Certificate::inconclusive(format!(
        "{} non-elliptic words found, all with a common boundary fixed set",
        usable.len()
    ));
    c.assumptions.push(assumption);
    c
}

/// An enumerated element fixing both given boundary points.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StabilizerElement {
    pub word: Word,
    pub isometry: Isometry,
    /// Order in PU if at most `k_max`.
    pub order: Option<usize>,
}

fn check_boundary_pair(
    x0: &BallPoint,
    y0: &BallPoint,
    dim_n: usize,
    cfg: &SearchConfig,
) -> Result<()> {
    for p in [x0, y0] {
        if p.dim_n() != dim_n {
            return Err(Error::Dimension {
                expected: dim_n,
                found: p.dim_n(),
            });
        }
        if p.region(cfg.tol.tol_null) != Some(Region::Boundary) {
            return Err(Error::Precondition(
                "stabilizer points must lie on the boundary sphere".into(),
            ));
        }
    }
    if chordal_distance(x0, y0)? <= cfg.tol.coarse() {
        return Err(Error::Precondition(
            "stabilizer points must be distinct".into(),
        ));
    }
    Ok(())
}

/// Enumerated classes fixing both boundary points `x0` and `y0`.
pub fn stabilizer_elements(
    group: &GroupInput,
    x0: &BallPoint,
    y0: &BallPoint,
    max_len: usize,
    cfg: &SearchConfig,
) -> Result<Vec<StabilizerElement>> {
    check_boundary_pair(x0, y0, group.dim_n(), cfg)?;
    if group.is_empty() {
        return Ok(Vec::new());
    }
    let elements = enumerate_lenient(group, max_len, cfg)?;
    stabilizer_from_elements(&elements, x0, y0, cfg)
}

pub(crate) fn stabilizer_from_elements(
    elements: &[Element],
    x0: &BallPoint,
    y0: &BallPoint,
    cfg: &SearchConfig,
) -> Result<Vec<StabilizerElement>> {
    let tol = cfg.tol.coarse();
    let fixes = |f: &Isometry, p: &BallPoint| -> bool {
        f.apply(p, cfg.tol.tol_null)
            .and_then(|q| chordal_distance(&q, p))
            .map(|d| d <= tol)
            .unwrap_or(false)
    };
    let kept = par::map(cfg.execution, elements, |e| {
        (fixes(&e.isometry, x0) && fixes(&e.isometry, y0)).then(|| StabilizerElement {
            word: e.word.clone(),
            isometry: e.isometry.clone(),
            order: finite_order(&e.isometry, cfg.k_max, &cfg.tol),
        })
    });
    Ok(kept.into_iter().flatten().collect())
}

/// Scans for torsion elements with infinite boundary fixed sets and small `N`.
pub fn condition_a_scan(
    group: &GroupInput,
    max_len: usize,
    epsilon: f64,
    k_max: usize,
    cfg: &SearchConfig,
) -> Result<Certificate> {
    if epsilon <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "epsilon must be positive, got {epsilon}"
        )));
    }
    let elements = enumerate_lenient(group, max_len, cfg)?;
    Ok(condition_a_scan_elements(&elements, epsilon, k_max, cfg))
}

pub(crate) fn condition_a_scan_elements(
    elements: &[Element],
    epsilon: f64,
    k_max: usize,
    cfg: &SearchConfig,
) -> Certificate {
    let hits: Vec<Option<(f64, usize)>> = par::map(cfg.execution, elements, |e| {
        let n = e.isometry.norm_n(cfg.norm);
        if n >= epsilon {
            return None;
        }
        match fixed_points_boundary(&e.isometry, &cfg.tol) {
            Ok((_, FixedCardinality::Infinite)) => {}
            _ => return None,
        }
        finite_order(&e.isometry, k_max, &cfg.tol).map(|k| (n, k))
    });
    let mut found: Vec<(&Word, f64, usize)> = elements
        .iter()
        .zip(hits)
        .filter_map(|(e, h)| h.map(|(n, k)| (&e.word, n, k)))
        .collect();
    let total = found.len();
    found.sort_by(|a, b| b.1.total_cmp(&a.1).then_with(|| a.0.cmp(b.0)));
    let mut chain: Vec<(&Word, f64, usize)> = Vec::new();
    for item in found {
        if chain.last().is_none_or(|last| item.1 < last.1) {
            chain.push(item);
        }
    }
    if chain.len() >= 3 {
        let mut c = Certificate::inconclusive(format!(
            "{} torsion elements with infinite boundary fixed sets and N < {epsilon}, {} with strictly decreasing N",
            total,
            chain.len()
        ));
        c.kind = CertificateKind::ConditionAEvidence;
        c.witnesses = chain
            .into_iter()
            .map(|(w, n, k)| Witness {
                word: w.clone(),
                values: vec![n, k as f64],
            })
            .collect();
        c.assumptions
            .push("a finite decreasing chain is a shadow of a sequence converging to I".into());
        return c;
    }
    Certificate::inconclusive(format!(
        "{total} torsion elements with infinite boundary fixed sets and N < {epsilon}; fewer than 3 with decreasing N"
    ))
}

/// Orbit of an interior point under the enumerated words, keeping points near
/// the boundary and projecting them radially onto it.
pub fn limit_set_sample(
    group: &GroupInput,
    max_len: usize,
    p: &BallPoint,
    cfg: &SearchConfig,
) -> Result<Vec<BallPoint>> {
    if p.dim_n() != group.dim_n() {
        return Err(Error::Dimension {
            expected: group.dim_n(),
            found: p.dim_n(),
        });
    }
    if p.region(cfg.tol.tol_null) != Some(Region::Interior) {
        return Err(Error::Precondition(
            "basepoint must lie in the open ball".into(),
        ));
    }
    if group.is_empty() {
        return Ok(Vec::new());
    }
    let elements = enumerate_lenient(group, max_len, cfg)?;
    let images = par::map(cfg.execution, &elements, |e| {
        e.isometry.apply(p, cfg.tol.tol_null)
    });
    let mut out = Vec::new();
    for q in images {
        let q = q?;
        if !q.at_infinity && q.norm_sqr() > 1.0 - cfg.radial_cut {
            out.push(q.to_sphere());
        }
    }
    Ok(out)
}
