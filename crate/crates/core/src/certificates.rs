//! Jørgensen-type inequality and the discreteness-report driver.
//!
//! For `f, g` generating a discrete non-elementary subgroup of `PU(1,n)`:
//!
//! * `f` parabolic or loxodromic: `max{N(f), N([f,g])} ≥ 2 − √3`;
//! * `f` elliptic: `max{N(f), N([f,g^i]) : i = 1..n+1} ≥ 2 − √3`.
//!
//! A statistic below the threshold is therefore a certificate that `⟨f,g⟩`
//! is *not both* discrete and non-elementary. Nothing here certifies
//! discreteness: every other outcome is reported as inconclusive.

use serde::{Deserialize, Serialize};

use crate::config::{NormKind, PowerSide, SearchConfig};
use crate::error::{Error, Result};
use crate::explorer::{
    condition_a_scan_elements, elementarity_from_candidates, enumerate::enumerate_partial,
    near_identity_from_elements, stabilizer_from_elements, Element, GroupInput, Word,
};
use crate::hermitian::chordal_distance;
use crate::isometry::{classify_isometry, fixed_points_boundary, ClassTag, Isometry};
use crate::par;

/// `2 − √3 ≈ 0.2679491924`.
pub fn jorgensen_threshold() -> f64 {
    2.0 - 3f64.sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Branch {
    NonElliptic,
    Elliptic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    BoundSatisfied,
    Violation,
}

/// `Violation` iff `statistic < threshold − tol`.
pub fn verdict_for(statistic: f64, tol: f64) -> Verdict {
    if statistic < jorgensen_threshold() - tol {
        Verdict::Violation
    } else {
        Verdict::BoundSatisfied
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JorgensenOutcome {
    pub statistic: f64,
    pub threshold: f64,
    pub verdict: Verdict,
    pub branch: Branch,
    /// The elliptic branch was used because `f` could not be classified; its
    /// statistic dominates the non-elliptic one, so a violation stays sound.
    pub branch_assumed: bool,
    pub norm_used: NormKind,
    pub power_side: PowerSide,
    pub n_f: f64,
    /// `N([f,g^i])` (or `N([f^i,g])`) for `i = 1, …`; one entry in the non-elliptic branch.
    pub commutator_norms: Vec<f64>,
}

/// Evaluates the Jørgensen-type statistic, choosing the branch from the class of `f`.
pub fn jorgensen_statistic(
    f: &Isometry,
    g: &Isometry,
    cfg: &SearchConfig,
) -> Result<JorgensenOutcome> {
    if f.dim_n() != g.dim_n() {
        return Err(Error::Dimension {
            expected: f.dim_n(),
            found: g.dim_n(),
        });
    }
    let (branch, branch_assumed) = match classify_isometry(f, &cfg.tol) {
        Ok(c) if c.tag == ClassTag::Identity => {
            return Err(Error::NotApplicable("f is the identity in PU(1,n)".into()));
        }
        Ok(c) if c.tag == ClassTag::Elliptic => (Branch::Elliptic, false),
        Ok(_) => (Branch::NonElliptic, false),
        Err(Error::NumericallyAmbiguous { .. }) => (Branch::Elliptic, true),
        Err(e) => return Err(e),
    };
    Ok(statistic_for_branch(f, g, branch, branch_assumed, cfg))
}

fn statistic_for_branch(
    f: &Isometry,
    g: &Isometry,
    branch: Branch,
    branch_assumed: bool,
    cfg: &SearchConfig,
) -> JorgensenOutcome {
    let powers = match branch {
        Branch::NonElliptic => 1,
        Branch::Elliptic => f.dim_n() + 1,
    };
    let n_f = f.norm_n(cfg.norm);
    let mut commutator_norms = Vec::with_capacity(powers);
    let (mut fp, mut gp) = (f.clone(), g.clone());
    for i in 1..=powers {
        if i > 1 {
            match cfg.power_side {
                PowerSide::G => gp = Isometry::trusted(gp.matrix() * g.matrix()),
                PowerSide::F => fp = Isometry::trusted(fp.matrix() * f.matrix()),
            }
        }
        let comm = fp.commutator(&gp).expect("same dimension");
        commutator_norms.push(comm.norm_n(cfg.norm));
    }
    let statistic = commutator_norms.iter().copied().fold(n_f, f64::max);
    JorgensenOutcome {
        statistic,
        threshold: jorgensen_threshold(),
        verdict: verdict_for(statistic, cfg.tol.tol_identity),
        branch,
        branch_assumed,
        norm_used: cfg.norm,
        power_side: cfg.power_side,
        n_f,
        commutator_norms,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum CertificateKind {
    JorgensenViolation,
    NearIdentitySequence,
    NonElementaryWitness,
    ConditionAEvidence,
    Inconclusive,
}

/// A word and the numbers it must reproduce when re-evaluated.
///
/// What `values` holds depends on the certificate kind:
///
/// * `JorgensenViolation`: first witness `f` with `[statistic, N(f)]`, second
///   witness `g` with the commutator norms.
/// * `NearIdentitySequence`: `[N]` after phase alignment.
/// * `NonElementaryWitness`: boundary fixed points as `[re, im, …]` per point.
/// * `ConditionAEvidence`: `[N, order]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub word: Word,
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub kind: CertificateKind,
    pub witnesses: Vec<Witness>,
    pub narrative: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub jorgensen: Option<JorgensenOutcome>,
    /// Explicit assumptions the certificate rests on.
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub assumptions: Vec<String>,
}

impl Certificate {
    pub fn inconclusive(narrative: impl Into<String>) -> Self {
        Self {
            kind: CertificateKind::Inconclusive,
            witnesses: Vec::new(),
            narrative: narrative.into(),
            jorgensen: None,
            assumptions: Vec::new(),
        }
    }

    /// Re-evaluates every witness word in `group` and returns the largest
    /// relative deviation from the stored values.
    pub fn reproduce(&self, group: &GroupInput, cfg: &SearchConfig) -> Result<f64> {
        let rel = |a: f64, b: f64| (a - b).abs() / a.abs().max(b.abs()).max(1.0);
        let eval = |w: &Witness| group.evaluate(&w.word);
        let mut worst = 0.0f64;
        match self.kind {
            CertificateKind::Inconclusive => {}
            CertificateKind::JorgensenViolation => {
                let [fw, gw] = self.witnesses.as_slice() else {
                    return Err(Error::InternalInvariant(
                        "violation needs two witnesses".into(),
                    ));
                };
                let stored = self.jorgensen.as_ref().ok_or_else(|| {
                    Error::InternalInvariant("violation certificate without outcome".into())
                })?;
                let again = statistic_for_branch(
                    &eval(fw)?,
                    &eval(gw)?,
                    stored.branch,
                    stored.branch_assumed,
                    cfg,
                );
                worst = worst
                    .max(rel(again.statistic, fw.values[0]))
                    .max(rel(again.n_f, fw.values[1]));
                if again.commutator_norms.len() != gw.values.len() {
                    return Err(Error::InternalInvariant("commutator count mismatch".into()));
                }
                for (a, b) in again.commutator_norms.iter().zip(&gw.values) {
                    worst = worst.max(rel(*a, *b));
                }
            }
            CertificateKind::NearIdentitySequence => {
                for w in &self.witnesses {
                    worst = worst.max(rel(eval(w)?.pu_norm_n(cfg.norm), w.values[0]));
                }
            }
            CertificateKind::ConditionAEvidence => {
                for w in &self.witnesses {
                    worst = worst.max(rel(eval(w)?.norm_n(cfg.norm), w.values[0]));
                }
            }
            CertificateKind::NonElementaryWitness => {
                for w in &self.witnesses {
                    let (pts, _) = fixed_points_boundary(&eval(w)?, &cfg.tol)?;
                    for stored in w.values.chunks(2 * group.dim_n()) {
                        let stored = crate::hermitian::BallPoint::from_reals(stored)?;
                        let d = pts
                            .iter()
                            .map(|p| chordal_distance(p, &stored))
                            .collect::<Result<Vec<_>>>()?
                            .into_iter()
                            .fold(f64::INFINITY, f64::min);
                        worst = worst.max(d);
                    }
                }
            }
        }
        Ok(worst)
    }
}

/// Certificate for a single pair: `f` is generator 0 and `g` generator 1.
pub fn jorgensen_test(f: &Isometry, g: &Isometry, cfg: &SearchConfig) -> Result<Certificate> {
    let outcome = jorgensen_statistic(f, g, cfg)?;
    Ok(pair_certificate(
        Word::generator(0),
        Word::generator(1),
        outcome,
        &["f".to_string(), "g".to_string()],
    ))
}

fn pair_certificate(
    fw: Word,
    gw: Word,
    outcome: JorgensenOutcome,
    names: &[String],
) -> Certificate {
    if outcome.verdict == Verdict::BoundSatisfied {
        let mut c = Certificate::inconclusive(format!(
            "statistic {:.6} ≥ threshold {:.10}; no conclusion about ⟨{}, {}⟩",
            outcome.statistic,
            outcome.threshold,
            fw.display(names),
            gw.display(names)
        ));
        c.jorgensen = Some(outcome);
        return c;
    }
    let mut assumptions = Vec::new();
    if outcome.branch_assumed {
        assumptions.push(
            "f could not be classified; the elliptic branch (which dominates) was used".into(),
        );
    }
    Certificate {
        kind: CertificateKind::JorgensenViolation,
        narrative: format!(
            "statistic {:.6} < threshold {:.10}: ⟨{}, {}⟩ is not both discrete and non-elementary",
            outcome.statistic,
            outcome.threshold,
            fw.display(names),
            gw.display(names)
        ),
        witnesses: vec![
            Witness {
                word: fw,
                values: vec![outcome.statistic, outcome.n_f],
            },
            Witness {
                word: gw,
                values: outcome.commutator_norms.clone(),
            },
        ],
        jorgensen: Some(outcome),
        assumptions,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    /// Pair every enumerated word with conjugates of a fixed test map.
    TestMap,
    /// Pair loxodromic words with each other.
    TwoLoxodromic,
    /// Scan the stabilizer of a loxodromic axis for Condition A violations.
    Stabilizer,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MinNorm {
    pub word: Word,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchStats {
    pub words_explored: usize,
    pub loxodromic_found: usize,
    pub pairs_tested: usize,
    pub ambiguous_classifications: usize,
    pub min_n: Option<MinNorm>,
    pub truncated: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiscretenessReport {
    pub mode: Mode,
    pub depth: usize,
    /// Names of the generators words refer to; in test-map mode the test map is last.
    pub generator_names: Vec<String>,
    /// Strongest certificate: near-identity sequence, then Jørgensen
    /// violation, then Condition A evidence, else inconclusive.
    pub primary: Certificate,
    /// Every certificate kind found, in rank order, including the primary.
    pub found: Vec<Certificate>,
    /// Non-elementarity check on the enumerated words (hypothesis of the criteria).
    pub elementarity: Certificate,
    /// Stabilizer-mode torsion orders `(word, order)`.
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub torsion: Vec<(Word, usize)>,
    /// The test map is elliptic: no theorem backs conclusions drawn from it.
    pub experimental: bool,
    pub stats: SearchStats,
}

fn rank(kind: CertificateKind) -> u8 {
    match kind {
        CertificateKind::NearIdentitySequence => 0,
        CertificateKind::JorgensenViolation => 1,
        CertificateKind::ConditionAEvidence => 2,
        CertificateKind::NonElementaryWitness => 3,
        CertificateKind::Inconclusive => 4,
    }
}

struct Classified {
    tags: Vec<Option<ClassTag>>,
    ambiguous: usize,
}

fn classify_all(elements: &[Element], cfg: &SearchConfig) -> Classified {
    let tags: Vec<Option<ClassTag>> = par::map(cfg.execution, elements, |e| {
        classify_isometry(&e.isometry, &cfg.tol).ok().map(|c| c.tag)
    });
    let ambiguous = tags.iter().filter(|t| t.is_none()).count();
    Classified { tags, ambiguous }
}

/// One orientation of a Jørgensen pair: `(f word, f, g word, g)`.
type Pair<'a> = (&'a Word, &'a Isometry, &'a Word, &'a Isometry);

/// Runs all pairs, keeps violations, returns the shortlex-least `(f, g)` one.
/// Pairs with `N(f) ≥ threshold − tol` are skipped: they cannot violate.
fn best_violation(
    pairs: &[Pair<'_>],
    names: &[String],
    cfg: &SearchConfig,
) -> (Option<Certificate>, usize) {
    let cutoff = jorgensen_threshold() - cfg.tol.tol_identity;
    let live: Vec<&Pair<'_>> = pairs
        .iter()
        .filter(|(_, f, _, _)| f.norm_n(cfg.norm) < cutoff)
        .collect();
    let results: Vec<Option<Certificate>> = par::map(cfg.execution, &live, |(fw, f, gw, g)| {
        let outcome = jorgensen_statistic(f, g, cfg).ok()?;
        (outcome.verdict == Verdict::Violation)
            .then(|| pair_certificate((*fw).clone(), (*gw).clone(), outcome, names))
    });
    let best = results.into_iter().flatten().min_by(|a, b| {
        (&a.witnesses[0].word, &a.witnesses[1].word)
            .cmp(&(&b.witnesses[0].word, &b.witnesses[1].word))
    });
    (best, live.len())
}

/// Searches the words of `group` up to `depth` for evidence of
/// non-discreteness, following one of three strategies (see [`Mode`]).
///
/// `test_map` is required in [`Mode::TestMap`] and need not lie in the group.
pub fn discreteness_report(
    group: &GroupInput,
    mode: Mode,
    depth: usize,
    test_map: Option<(&str, &Isometry)>,
    cfg: &SearchConfig,
) -> Result<DiscretenessReport> {
    cfg.validate()?;
    if depth == 0 || depth > cfg.max_depth {
        return Err(Error::InvalidParameter(format!(
            "depth must lie in 1..={}, got {depth}",
            cfg.max_depth
        )));
    }
    let enumeration = enumerate_partial(group, depth, cfg)?;
    let elements = &enumeration.elements;
    let classified = classify_all(elements, cfg);
    let lox: Vec<&Element> = elements
        .iter()
        .zip(&classified.tags)
        .filter(|(_, t)| **t == Some(ClassTag::Loxodromic))
        .map(|(e, _)| e)
        .collect();

    let mut names = group.names();
    let mut found: Vec<Certificate> = Vec::new();
    let mut pairs_tested = 0;
    let mut experimental = false;
    let mut torsion = Vec::new();

    match mode {
        Mode::TestMap => {
            let (name, h) = test_map
                .ok_or_else(|| Error::InvalidParameter("test-map mode needs a test map".into()))?;
            if h.dim_n() != group.dim_n() {
                return Err(Error::Dimension {
                    expected: group.dim_n(),
                    found: h.dim_n(),
                });
            }
            match classify_isometry(h, &cfg.tol) {
                Ok(c) if c.tag == ClassTag::Identity => {
                    return Err(Error::InvalidParameter(
                        "the test map must be non-trivial".into(),
                    ));
                }
                Ok(c) if c.tag == ClassTag::Elliptic => experimental = true,
                Ok(_) => {}
                Err(Error::NumericallyAmbiguous { .. }) => experimental = true,
                Err(e) => return Err(e),
            }
            names.push(name.to_string());
            let h_index = group.len();
            let h_word = Word::generator(h_index);
            // h and f^k h f^{-k} for the first three loxodromic words, k = 1..3.
            let mut conjugates: Vec<(Word, Isometry)> = vec![(h_word.clone(), h.clone())];
            for f in lox.iter().take(3) {
                for k in 1..=3i64 {
                    let fk = f.isometry.power(k);
                    let conj = fk.compose(h)?.compose(&fk.inverse())?;
                    let w = f.word.power(k).concat(&h_word).concat(&f.word.power(-k));
                    conjugates.push((w, conj));
                }
            }
            let mut pairs: Vec<Pair<'_>> = Vec::new();
            for e in elements {
                for (cw, ch) in &conjugates {
                    pairs.push((&e.word, &e.isometry, cw, ch));
                    pairs.push((cw, ch, &e.word, &e.isometry));
                }
            }
            let (best, tested) = best_violation(&pairs, &names, cfg);
            pairs_tested += tested;
            found.extend(best);
        }
        Mode::TwoLoxodromic | Mode::Stabilizer => {
            if lox.is_empty() {
                return Err(Error::ModeUnavailable(format!(
                    "no loxodromic word up to length {depth}"
                )));
            }
            let used: Vec<&Element> = lox.iter().take(cfg.pair_limit).copied().collect();
            let mut pairs: Vec<Pair<'_>> = Vec::new();
            for f in &used {
                for g in &used {
                    // ⟨w, w⁻¹⟩ is cyclic; such pairs carry no information.
                    if f.word != g.word && f.word != g.word.inverse() {
                        pairs.push((&f.word, &f.isometry, &g.word, &g.isometry));
                    }
                }
            }
            let (best, tested) = best_violation(&pairs, &names, cfg);
            pairs_tested += tested;
            found.extend(best);

            if mode == Mode::Stabilizer {
                let h = lox[0];
                let cls = classify_isometry(&h.isometry, &cfg.tol)?;
                let (x0, y0) = (
                    cls.attracting.expect("loxodromic"),
                    cls.repelling.expect("loxodromic"),
                );
                let stab = stabilizer_from_elements(elements, &x0, &y0, cfg)?;
                torsion = stab
                    .iter()
                    .filter_map(|s| s.order.map(|o| (s.word.clone(), o)))
                    .collect();
                let stab_elems: Vec<Element> = stab
                    .into_iter()
                    .map(|s| Element {
                        word: s.word,
                        isometry: s.isometry,
                    })
                    .collect();
                let mut cert = condition_a_scan_elements(&stab_elems, cfg.epsilon, cfg.k_max, cfg);
                cert.narrative = format!(
                    "stabilizer of the axis of {} ({} elements): {}",
                    h.word.display(&names),
                    stab_elems.len(),
                    cert.narrative
                );
                if cert.kind == CertificateKind::ConditionAEvidence {
                    found.push(cert);
                }
            }
        }
    }

    let near = near_identity_from_elements(elements, cfg.epsilon, cfg);
    if !near.is_empty() {
        found.push(Certificate {
            kind: CertificateKind::NearIdentitySequence,
            narrative: format!(
                "{} distinct classes within {} of the identity (smallest {:.6}): numerical evidence that the group is not discrete",
                near.len(),
                cfg.epsilon,
                near[0].1
            ),
            witnesses: near.into_iter().map(|(word, n)| Witness { word, values: vec![n] }).collect(),
            jorgensen: None,
            assumptions: vec!["finitely many words were explored; convergence to I is inferred, not proven".into()],
        });
    }
    found.sort_by_key(|c| rank(c.kind));

    let min_n = par::map(cfg.execution, elements, |e| e.isometry.pu_norm_n(cfg.norm))
        .into_iter()
        .zip(elements)
        .min_by(|(a, ea), (b, eb)| a.total_cmp(b).then_with(|| ea.word.cmp(&eb.word)))
        .map(|(value, e)| MinNorm {
            word: e.word.clone(),
            value,
        });

    let stats = SearchStats {
        words_explored: elements.len(),
        loxodromic_found: lox.len(),
        pairs_tested,
        ambiguous_classifications: classified.ambiguous,
        min_n,
        truncated: enumeration.truncated,
    };

    let primary = found.first().cloned().unwrap_or_else(|| {
        Certificate::inconclusive(format!(
            "no certificate among {} classes up to length {depth}{}; discreteness is never certified",
            stats.words_explored,
            stats.min_n.as_ref().map(|m| format!(", min N = {:.6} at {}", m.value, m.word.display(&names))).unwrap_or_default()
        ))
    });
    let elementarity = elementarity_check_elements(elements, &classified, group, cfg);

    Ok(DiscretenessReport {
        mode,
        depth,
        generator_names: names,
        primary,
        found,
        elementarity,
        torsion,
        experimental,
        stats,
    })
}

fn elementarity_check_elements(
    elements: &[Element],
    classified: &Classified,
    group: &GroupInput,
    cfg: &SearchConfig,
) -> Certificate {
    let candidates: Vec<Element> = elements
        .iter()
        .zip(&classified.tags)
        .filter(|(_, t)| matches!(t, Some(ClassTag::Loxodromic | ClassTag::Parabolic)))
        .map(|(e, _)| e.clone())
        .collect();
    elementarity_from_candidates(&candidates, &group.names(), cfg)
}
