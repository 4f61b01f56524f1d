use std::fmt::Write as _;
use std::path::Path;

use puhyp::certificates::{Branch, Verdict, Witness};
use puhyp::explorer::{
    condition_a_scan, limit_set_sample, perturbation_stability, transport_loxodromic, BoundaryBall,
};
use puhyp::isometry::{finite_order, FixedCardinality};
use puhyp::{
    classify_isometry, discreteness_report, jorgensen_statistic, jorgensen_test, BallPoint,
    Certificate, CertificateKind, Complexd, Error, Isometry, Mode, SearchConfig,
};
use serde_json::{json, Value};

use crate::error::{exit, CliError};
use crate::groupfile::{GroupFile, LoadedGroup, NamedMatrix};

pub const SCHEMA_VERSION: u32 = 1;

const SCOPE: &str = "input is a finitely generated group given by explicit generator matrices; \
                     statements concern the enumerated words only and never certify discreteness";

/// Everything a command needs besides its own arguments.
#[derive(Debug, Clone)]
pub struct Settings {
    pub search: SearchConfig,
    pub canonical_phase: bool,
    pub seed: u64,
}

/// A finished command: human-readable text, the machine-readable dump, an
/// optional plain-text artifact (the point cloud of `limitset`) and the exit code.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub text: String,
    pub dump: Value,
    pub artifact: Option<String>,
    pub exit: i32,
}

fn header_json(s: &Settings) -> Value {
    let t = &s.search.tol;
    json!({
        "tolerances": {
            "tol_unitary": t.tol_unitary,
            "tol_null": t.tol_null,
            "tol_eig": t.tol_eig,
            "tol_identity": t.tol_identity,
        },
        "norm": s.search.norm.label(),
        "elliptic_power_side": power_side_label(s),
        "phase": phase_label(s),
        "seed": s.seed,
        "scope": SCOPE,
    })
}

fn power_side_label(s: &Settings) -> &'static str {
    match s.search.power_side {
        puhyp::PowerSide::G => "g",
        puhyp::PowerSide::F => "f",
    }
}

fn phase_label(s: &Settings) -> &'static str {
    if s.canonical_phase {
        "rescaled to determinant 1"
    } else {
        "as given"
    }
}

fn header_text(command: &str, s: &Settings) -> String {
    let t = &s.search.tol;
    format!(
        "# puhyp {command} (schema {SCHEMA_VERSION})\n\
         # scope: {SCOPE}\n\
         # tolerances: tol_unitary={:e} tol_null={:e} tol_eig={:e} tol_identity={:e}\n\
         # norm={} elliptic-power-side={} phase={} seed={}\n",
        t.tol_unitary,
        t.tol_null,
        t.tol_eig,
        t.tol_identity,
        s.search.norm.label(),
        power_side_label(s),
        phase_label(s),
        s.seed
    )
}

fn dump(command: &str, s: &Settings, params: Value, result: Value) -> Value {
    json!({
        "schema_version": SCHEMA_VERSION,
        "command": command,
        "header": header_json(s),
        "params": params,
        "result": result,
    })
}

fn to_value<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("report types serialize")
}

pub fn fmt_complex(z: Complexd) -> String {
    format!("{:.6}{:+.6}i", z.re, z.im)
}

pub fn fmt_point(p: &BallPoint) -> String {
    if p.at_infinity {
        return "∞".into();
    }
    let parts: Vec<String> = p.affine.iter().map(|z| fmt_complex(*z)).collect();
    if parts.len() == 1 {
        parts[0].clone()
    } else {
        format!("({})", parts.join(", "))
    }
}

fn fmt_points(ps: &[BallPoint]) -> String {
    format!(
        "{{{}}}",
        ps.iter().map(fmt_point).collect::<Vec<_>>().join(", ")
    )
}

/// `"re,im,re,im,…"` to a point.
pub fn parse_point(text: &str) -> Result<BallPoint, CliError> {
    let reals = text
        .split(',')
        .map(|t| t.trim().parse::<f64>())
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| CliError::Validation(format!("cannot parse point `{text}`: {e}")))?;
    Ok(BallPoint::from_reals(&reals)?)
}

fn load(path: &Path, s: &Settings) -> Result<LoadedGroup, CliError> {
    GroupFile::read(path)?.load(&s.search.tol, s.canonical_phase)
}

pub fn classify(path: &Path, name: &str, s: &Settings) -> Result<Outcome, CliError> {
    let g = load(path, s)?;
    let f = g.element(name)?;
    let tol = &s.search.tol;
    let n = f.norm_n(s.search.norm);
    let order = finite_order(f, s.search.k_max, tol);
    let mut text = header_text("classify", s);
    let _ = writeln!(text, "element: {name}");
    let result = match classify_isometry(f, tol) {
        Ok(c) => {
            let tag = format!("{:?}", c.tag);
            let fixed = match c.fixed_cardinality {
                FixedCardinality::Infinite => "infinite".to_string(),
                FixedCardinality::Finite(k) => k.to_string(),
            };
            let _ = writeln!(
                text,
                "summary: {tag}, fixed {}, N={n:.6}",
                fmt_points(&c.boundary_fixed)
            );
            let _ = writeln!(text, "class: {tag}");
            let _ = writeln!(
                text,
                "eigenvalues: {}",
                c.eigenvalues
                    .iter()
                    .map(|z| fmt_complex(*z))
                    .collect::<Vec<_>>()
                    .join(", ")
            );
            let _ = writeln!(
                text,
                "boundary fixed points: {}",
                fmt_points(&c.boundary_fixed)
            );
            let _ = writeln!(text, "boundary fixed-set cardinality: {fixed}");
            let _ = writeln!(
                text,
                "interior fixed point: {}",
                if c.interior_fixed_exists { "yes" } else { "no" }
            );
            if let (Some(a), Some(r)) = (&c.attracting, &c.repelling) {
                let _ = writeln!(
                    text,
                    "attracting: {}  repelling: {}",
                    fmt_point(a),
                    fmt_point(r)
                );
            }
            to_value(&c)
        }
        Err(Error::NumericallyAmbiguous { candidates }) => {
            let _ = writeln!(text, "class: NumericallyAmbiguous between {candidates:?}");
            json!({ "tag": "NumericallyAmbiguous", "candidates": to_value(&candidates) })
        }
        Err(e) => return Err(e.into()),
    };
    let _ = writeln!(text, "N ({}) = {n:.6}", s.search.norm.label());
    match order {
        Some(k) => {
            let _ = writeln!(text, "torsion: order {k} in PU");
        }
        None => {
            let _ = writeln!(text, "torsion: no finite order up to {}", s.search.k_max);
        }
    }
    let result = json!({ "classification": result, "n": n, "order": order });
    Ok(Outcome {
        text,
        dump: dump(
            "classify",
            s,
            json!({ "element": name, "k_max": s.search.k_max }),
            result,
        ),
        artifact: None,
        exit: exit::OK,
    })
}

pub fn jorgensen(
    path: &Path,
    f_name: &str,
    g_name: &str,
    s: &Settings,
) -> Result<Outcome, CliError> {
    let g = load(path, s)?;
    let (f, h) = (g.element(f_name)?, g.element(g_name)?);
    let outcome = jorgensen_statistic(f, h, &s.search)?;
    let cert = jorgensen_test(f, h, &s.search)?;
    let mut text = header_text("jorgensen", s);
    let _ = writeln!(text, "f = {f_name}, g = {g_name}");
    let branch = match outcome.branch {
        Branch::NonElliptic => "NonElliptic",
        Branch::Elliptic => "Elliptic",
    };
    let _ = writeln!(
        text,
        "branch: {branch}{}",
        if outcome.branch_assumed {
            " (f unclassifiable; elliptic branch used)"
        } else {
            ""
        }
    );
    let _ = writeln!(text, "N(f) = {:.10}", outcome.n_f);
    for (i, v) in outcome.commutator_norms.iter().enumerate() {
        let label = match (outcome.branch, s.search.power_side) {
            (Branch::NonElliptic, _) => "N([f,g])".to_string(),
            (Branch::Elliptic, puhyp::PowerSide::G) => format!("N([f,g^{}])", i + 1),
            (Branch::Elliptic, puhyp::PowerSide::F) => format!("N([f^{},g])", i + 1),
        };
        let _ = writeln!(text, "{label} = {v:.10}");
    }
    let _ = writeln!(text, "statistic = {:.10}", outcome.statistic);
    let _ = writeln!(text, "threshold = {:.16} (2 - sqrt 3)", outcome.threshold);
    let verdict = match outcome.verdict {
        Verdict::Violation => "Violation",
        Verdict::BoundSatisfied => "BoundSatisfied",
    };
    let _ = writeln!(text, "verdict: {verdict}");
    let _ = writeln!(text, "certificate: {:?}: {}", cert.kind, cert.narrative);
    let code = if outcome.verdict == Verdict::Violation {
        exit::EVIDENCE
    } else {
        exit::OK
    };
    Ok(Outcome {
        text,
        dump: dump(
            "jorgensen",
            s,
            json!({ "f": f_name, "g": g_name }),
            json!({ "outcome": to_value(&outcome), "certificate": to_value(&cert) }),
        ),
        artifact: None,
        exit: code,
    })
}

/// Where the analyze test map comes from.
#[derive(Debug, Clone, Default)]
pub struct TestMapSource {
    pub name: Option<String>,
    pub file: Option<std::path::PathBuf>,
}

fn resolve_test_map(
    src: &TestMapSource,
    g: &LoadedGroup,
    s: &Settings,
) -> Result<(String, Isometry), CliError> {
    match (&src.file, &src.name) {
        (None, None) => Err(CliError::Validation(
            "test-map mode needs --test-map or --test-map-file".into(),
        )),
        (None, Some(name)) => Ok((name.clone(), g.element(name)?.clone())),
        (Some(file), name) => {
            let other = load(file, s)?;
            match name {
                Some(n) => Ok((n.clone(), other.element(n)?.clone())),
                None => other
                    .group
                    .generators()
                    .iter()
                    .chain(&other.extras)
                    .next()
                    .cloned()
                    .ok_or_else(|| {
                        CliError::Validation(format!("{} contains no elements", file.display()))
                    }),
            }
        }
    }
}

fn witness_lines(text: &mut String, cert: &Certificate, names: &[String]) {
    let labels: &[&str] = match cert.kind {
        CertificateKind::NearIdentitySequence => &["N"],
        CertificateKind::ConditionAEvidence => &["N", "order"],
        _ => &[],
    };
    for (i, Witness { word, values }) in cert.witnesses.iter().enumerate() {
        let vals = if labels.is_empty() {
            let tag = match (cert.kind, i) {
                (CertificateKind::JorgensenViolation, 0) => "f: statistic, N(f) = ",
                (CertificateKind::JorgensenViolation, _) => "g: commutator norms = ",
                (CertificateKind::NonElementaryWitness, _) => "fixed points = ",
                _ => "",
            };
            format!(
                "{tag}{}",
                values
                    .iter()
                    .map(|v| format!("{v:.6}"))
                    .collect::<Vec<_>>()
                    .join(", ")
            )
        } else {
            labels
                .iter()
                .zip(values)
                .map(|(l, v)| {
                    if *l == "order" {
                        format!("{l}={v}")
                    } else {
                        format!("{l}={v:.6}")
                    }
                })
                .collect::<Vec<_>>()
                .join("  ")
        };
        let _ = writeln!(text, "    {}  {vals}", word.display(names));
    }
}

pub fn analyze(
    path: &Path,
    mode: Mode,
    depth: usize,
    test_map: &TestMapSource,
    s: &Settings,
) -> Result<Outcome, CliError> {
    let g = load(path, s)?;
    let tm = match mode {
        Mode::TestMap => Some(resolve_test_map(test_map, &g, s)?),
        _ => None,
    };
    let report = discreteness_report(
        &g.group,
        mode,
        depth,
        tm.as_ref().map(|(n, h)| (n.as_str(), h)),
        &s.search,
    )?;
    let names = &report.generator_names;
    let mut text = header_text("analyze", s);
    if report.experimental {
        let _ = writeln!(
            text,
            "EXPERIMENTAL: the test map is elliptic; no theorem backs conclusions from it"
        );
    }
    let mode_label = to_value(&mode).as_str().unwrap_or_default().to_string();
    let _ = writeln!(
        text,
        "mode: {mode_label}, depth {depth}, epsilon {}",
        s.search.epsilon
    );
    if let Some((n, _)) = &tm {
        let _ = writeln!(text, "test map: {n}");
    }
    let _ = writeln!(text, "primary certificate: {:?}", report.primary.kind);
    let _ = writeln!(text, "  {}", report.primary.narrative);
    witness_lines(&mut text, &report.primary, names);
    for a in &report.primary.assumptions {
        let _ = writeln!(text, "  assumption: {a}");
    }
    for c in report.found.iter().skip(1) {
        let _ = writeln!(text, "also found: {:?}: {}", c.kind, c.narrative);
        witness_lines(&mut text, c, names);
    }
    let _ = writeln!(
        text,
        "elementarity: {:?}: {}",
        report.elementarity.kind, report.elementarity.narrative
    );
    if !report.torsion.is_empty() {
        let list: Vec<String> = report
            .torsion
            .iter()
            .map(|(w, k)| format!("{} (order {k})", w.display(names)))
            .collect();
        let _ = writeln!(text, "stabilizer torsion: {}", list.join(", "));
    }
    let st = &report.stats;
    let _ = writeln!(
        text,
        "stats: {} classes explored, {} loxodromic, {} pairs tested, {} unclassifiable",
        st.words_explored, st.loxodromic_found, st.pairs_tested, st.ambiguous_classifications
    );
    if let Some(m) = &st.min_n {
        let _ = writeln!(
            text,
            "min N seen: {:.6} at {}",
            m.value,
            m.word.display(names)
        );
    }
    if st.truncated {
        let _ = writeln!(
            text,
            "TRUNCATED: state budget of {} classes reached; results are partial",
            s.search.max_states
        );
    }
    let code = if report.primary.kind != CertificateKind::Inconclusive {
        exit::EVIDENCE
    } else if st.truncated {
        exit::EXHAUSTED
    } else {
        exit::OK
    };
    let params = json!({
        "mode": mode_label,
        "depth": depth,
        "epsilon": s.search.epsilon,
        "max_states": s.search.max_states,
        "pair_limit": s.search.pair_limit,
        "k_max": s.search.k_max,
        "test_map": tm.as_ref().map(|(n, h)| to_value(&NamedMatrix::from_isometry(n.clone(), h))),
    });
    Ok(Outcome {
        text,
        dump: dump("analyze", s, params, to_value(&report)),
        artifact: None,
        exit: code,
    })
}

pub fn limitset(
    path: &Path,
    depth: usize,
    basepoint: &BallPoint,
    s: &Settings,
) -> Result<Outcome, CliError> {
    let g = load(path, s)?;
    let pts = limit_set_sample(&g.group, depth, basepoint, &s.search)?;
    let mut cloud = String::new();
    let _ = writeln!(
        cloud,
        "# limit-set sample: depth {depth}, basepoint {}, radial_cut {}, {} points",
        fmt_point(basepoint),
        s.search.radial_cut,
        pts.len()
    );
    let cols: Vec<String> = (1..=g.group.dim_n())
        .flat_map(|j| [format!("re_z{j}"), format!("im_z{j}")])
        .collect();
    let _ = writeln!(cloud, "# {}", cols.join(" "));
    for p in &pts {
        let row: Vec<String> = p.to_reals().iter().map(|v| v.to_string()).collect();
        let _ = writeln!(cloud, "{}", row.join(" "));
    }
    let mut text = header_text("limitset", s);
    let _ = writeln!(
        text,
        "{} boundary samples from {} orbit points",
        pts.len(),
        depth
    );
    let dumpv = dump(
        "limitset",
        s,
        json!({ "depth": depth, "basepoint": basepoint.to_reals(), "radial_cut": s.search.radial_cut }),
        json!({ "points": pts.iter().map(|p| p.to_reals()).collect::<Vec<_>>() }),
    );
    Ok(Outcome {
        text,
        dump: dumpv,
        artifact: Some(cloud),
        exit: exit::OK,
    })
}

/// Parameters of the `transport` command.
#[derive(Debug, Clone)]
pub struct TransportArgs {
    pub p: String,
    pub q: String,
    pub f: String,
    pub o1: BallPoint,
    pub r1: f64,
    pub o2: BallPoint,
    pub r2: f64,
    pub m_max: usize,
    pub r_max: usize,
    pub n_max: usize,
}

pub fn transport(path: &Path, a: &TransportArgs, s: &Settings) -> Result<Outcome, CliError> {
    let g = load(path, s)?;
    let tol_null = s.search.tol.tol_null;
    let o1 = BoundaryBall::new(a.o1.clone(), a.r1, tol_null)?;
    let o2 = BoundaryBall::new(a.o2.clone(), a.r2, tol_null)?;
    let out = transport_loxodromic(
        g.element(&a.p)?,
        g.element(&a.q)?,
        g.element(&a.f)?,
        &o1,
        &o2,
        a.m_max,
        a.r_max,
        a.n_max,
        &s.search,
    )?;
    let mut text = header_text("transport", s);
    let _ = writeln!(
        text,
        "element = {q}^{} ({p}^{} {f} {p}^-{})^{}",
        out.r,
        out.m,
        out.m,
        out.n,
        p = a.p,
        q = a.q,
        f = a.f
    );
    let _ = writeln!(text, "m = {}, r = {}, n = {}", out.m, out.r, out.n);
    let _ = writeln!(text, "class: Loxodromic (re-verified)");
    let _ = writeln!(
        text,
        "attracting: {}  repelling: {}",
        fmt_point(&out.attracting),
        fmt_point(&out.repelling)
    );
    let params = json!({
        "p": a.p, "q": a.q, "f": a.f,
        "o1": { "center": a.o1.to_reals(), "radius": a.r1 },
        "o2": { "center": a.o2.to_reals(), "radius": a.r2 },
        "m_max": a.m_max, "r_max": a.r_max, "n_max": a.n_max,
    });
    let result = json!({
        "m": out.m, "r": out.r, "n": out.n,
        "attracting": out.attracting.to_reals(),
        "repelling": out.repelling.to_reals(),
        "element": to_value(&NamedMatrix::from_isometry("transported", &out.element)),
    });
    Ok(Outcome {
        text,
        dump: dump("transport", s, params, result),
        artifact: None,
        exit: exit::OK,
    })
}

pub fn stability(
    path: &Path,
    name: &str,
    delta: f64,
    trials: usize,
    s: &Settings,
) -> Result<Outcome, CliError> {
    let g = load(path, s)?;
    let r = perturbation_stability(g.element(name)?, delta, trials, s.seed, &s.search)?;
    let mut text = header_text("stability", s);
    let _ = writeln!(text, "element {name}, delta {delta}, {trials} trials");
    let _ = writeln!(
        text,
        "loxodromic: {}/{} (fraction {}), unclassifiable: {}",
        r.loxodromic, r.trials, r.fraction, r.ambiguous
    );
    Ok(Outcome {
        text,
        dump: dump(
            "stability",
            s,
            json!({ "element": name, "delta": delta, "trials": trials }),
            to_value(&r),
        ),
        artifact: None,
        exit: exit::OK,
    })
}

pub fn condition_a(path: &Path, depth: usize, s: &Settings) -> Result<Outcome, CliError> {
    let g = load(path, s)?;
    let cert = condition_a_scan(&g.group, depth, s.search.epsilon, s.search.k_max, &s.search)?;
    let names = g.group.names();
    let mut text = header_text("conditiona", s);
    let _ = writeln!(
        text,
        "depth {depth}, epsilon {}, k_max {}",
        s.search.epsilon, s.search.k_max
    );
    let _ = writeln!(text, "certificate: {:?}", cert.kind);
    let _ = writeln!(text, "  {}", cert.narrative);
    witness_lines(&mut text, &cert, &names);
    let code = if cert.kind == CertificateKind::ConditionAEvidence {
        exit::EVIDENCE
    } else {
        exit::OK
    };
    Ok(Outcome {
        text,
        dump: dump(
            "conditiona",
            s,
            json!({ "depth": depth, "epsilon": s.search.epsilon, "k_max": s.search.k_max }),
            json!({ "certificate": to_value(&cert), "generator_names": names }),
        ),
        artifact: None,
        exit: code,
    })
}
