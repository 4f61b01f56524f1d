use std::f64::consts::PI;

use proptest::prelude::*;
use puhyp::explorer::{enumerate_words, near_identity_search, Letter, Word};
use puhyp::isometry::random::random_isometry;
use puhyp::{
    discreteness_report, jorgensen_statistic, CertificateKind, GroupInput, Isometry, Mode,
    SearchConfig, ToleranceConfig,
};
use rand::SeedableRng;

fn all_reduced_words(gens: usize, max_len: usize) -> Vec<Word> {
    let mut out = vec![Word::identity()];
    let mut frontier = vec![Word::identity()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &frontier {
            for g in 0..gens {
                for e in [1i8, -1] {
                    let l = Letter::new(g, e).unwrap();
                    if w.last() == Some(l.inverse()) {
                        continue;
                    }
                    let mut letters = w.letters().to_vec();
                    letters.push(l);
                    next.push(Word::new(letters));
                }
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

fn infinite_dihedral() -> GroupInput {
    GroupInput::new(
        1,
        vec![
            ("a".into(), Isometry::boost(1, 1.0)),
            ("s".into(), Isometry::rotation(&[PI])),
        ],
    )
    .unwrap()
}

fn finite_abelian() -> GroupInput {
    GroupInput::new(
        2,
        vec![
            ("a".into(), Isometry::rotation(&[PI / 3.0, 0.0])),
            ("b".into(), Isometry::rotation(&[0.0, PI / 2.0])),
        ],
    )
    .unwrap()
}

#[test]
fn dedup_audit() {
    let tol = ToleranceConfig::default();
    let cfg = SearchConfig::default();
    let mut checks = 0;
    for (group, len) in [(infinite_dihedral(), 6), (finite_abelian(), 6)] {
        let classes = enumerate_words(&group, len, &cfg).unwrap();
        for i in 0..classes.len() {
            for j in 0..i {
                assert!(!classes[i].isometry.pu_equal(&classes[j].isometry, &tol));
            }
        }
        for w in all_reduced_words(group.len(), len) {
            let m = group.evaluate(&w).unwrap();
            if m.is_pu_identity(&tol) {
                continue;
            }
            let witness = classes
                .iter()
                .find(|c| c.isometry.pu_equal(&m, &tol))
                .expect("word has a class");
            assert!(
                witness.word <= w,
                "witness {:?} is not shortlex-minimal for {:?}",
                witness.word,
                w
            );
            checks += 1;
        }
    }
    assert!(checks >= 1000, "only {checks} audited words");
}

#[test]
fn free_cyclic_completeness() {
    let g = GroupInput::new(2, vec![("a".into(), Isometry::parabolic_p0(2))]).unwrap();
    for len in 1..=8 {
        assert_eq!(
            enumerate_words(&g, len, &SearchConfig::default())
                .unwrap()
                .len(),
            2 * len
        );
    }
}

#[test]
fn cyclic_boost_negative_control() {
    let g = GroupInput::new(1, vec![("a".into(), Isometry::boost(1, 1.0))]).unwrap();
    for depth in 1..=12 {
        for mode in [Mode::TestMap, Mode::TwoLoxodromic, Mode::Stabilizer] {
            let h = Isometry::boost(1, 1.0);
            let r = discreteness_report(&g, mode, depth, Some(("h", &h)), &SearchConfig::default())
                .unwrap();
            assert_eq!(r.primary.kind, CertificateKind::Inconclusive);
            let min = r.stats.min_n.unwrap();
            assert!((min.value - (std::f64::consts::E - 1.0)).abs() < 1e-12);
        }
        let cfg = SearchConfig {
            epsilon: 0.2,
            ..Default::default()
        };
        assert!(near_identity_search(&g, depth, 0.2, &cfg)
            .unwrap()
            .is_empty());
    }
}

#[test]
fn commuting_generators_surface_violation() {
    let g = GroupInput::new(
        1,
        vec![
            ("a".into(), Isometry::boost(1, 0.1)),
            ("b".into(), Isometry::boost(1, 0.2)),
        ],
    )
    .unwrap();
    let cfg = SearchConfig::default();
    let r = discreteness_report(&g, Mode::TwoLoxodromic, 3, None, &cfg).unwrap();
    assert_eq!(r.primary.kind, CertificateKind::JorgensenViolation);
    assert!(r.primary.reproduce(&g, &cfg).unwrap() < 1e-8);
}

#[test]
fn golden_rotation_report_prefers_near_identity() {
    let phi = (5f64.sqrt() - 1.0) / 2.0;
    let g = GroupInput::new(1, vec![("r".into(), Isometry::rotation(&[2.0 * PI * phi]))]).unwrap();
    let cfg = SearchConfig {
        max_depth: 100,
        ..Default::default()
    };
    let h = Isometry::boost(1, 1.0);
    let r = discreteness_report(&g, Mode::TestMap, 100, Some(("h", &h)), &cfg).unwrap();
    assert_eq!(r.primary.kind, CertificateKind::NearIdentitySequence);
    assert!(!r.experimental);
    assert!(r.primary.reproduce(&g, &cfg).unwrap() < 1e-8);
    let e = Isometry::rotation(&[PI / 2.0]);
    assert!(
        discreteness_report(&g, Mode::TestMap, 10, Some(("e", &e)), &cfg)
            .unwrap()
            .experimental
    );
    assert!(discreteness_report(&g, Mode::TwoLoxodromic, 10, None, &cfg).is_err());
    assert!(discreteness_report(&g, Mode::TestMap, 0, Some(("h", &h)), &cfg).is_err());
    assert!(discreteness_report(&g, Mode::TestMap, 101, Some(("h", &h)), &cfg).is_err());
}

#[test]
fn elliptic_branch_lists_n_plus_one_commutators() {
    let f = Isometry::rotation(&[2.0 * PI / 3.0]);
    let g = Isometry::boost(1, 1.0);
    let out = jorgensen_statistic(&f, &g, &SearchConfig::default()).unwrap();
    assert_eq!(out.branch, puhyp::certificates::Branch::Elliptic);
    assert_eq!(out.commutator_norms.len(), 2);
    let g2 = g.compose(&g).unwrap();
    let direct = [f.commutator(&g).unwrap(), f.commutator(&g2).unwrap()];
    for (a, b) in out.commutator_norms.iter().zip(&direct) {
        assert!((a - b.norm_n(puhyp::NormKind::Operator)).abs() < 1e-12);
    }
    let fside = SearchConfig {
        power_side: puhyp::PowerSide::F,
        ..Default::default()
    };
    let out_f = jorgensen_statistic(&f, &g, &fside).unwrap();
    let f2 = f.compose(&f).unwrap();
    assert!(
        (out_f.commutator_norms[1] - f2.commutator(&g).unwrap().norm_n(puhyp::NormKind::Operator))
            .abs()
            < 1e-12
    );
}

fn arb_group() -> impl Strategy<Value = GroupInput> {
    (any::<u64>(), 1usize..=2).prop_map(|(seed, n)| {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let gens = (0..2)
            .map(|i| (format!("g{i}"), random_isometry(&mut rng, n, 1.0)))
            .collect();
        GroupInput::new(n, gens).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn evidence_is_monotone_in_depth(g in arb_group()) {
        let cfg = SearchConfig { max_states: 20_000, ..Default::default() };
        let shallow = discreteness_report(&g, Mode::TwoLoxodromic, 2, None, &cfg);
        let deep = discreteness_report(&g, Mode::TwoLoxodromic, 3, None, &cfg);
        if let (Ok(s), Ok(d)) = (shallow, deep) {
            for c in &s.found {
                prop_assert!(d.found.iter().any(|x| x.kind == c.kind), "lost {:?}", c.kind);
            }
            prop_assert!(d.stats.min_n.unwrap().value <= s.stats.min_n.unwrap().value);
        }
    }

    #[test]
    fn certificates_reproduce(g in arb_group()) {
        let cfg = SearchConfig { max_states: 20_000, ..Default::default() };
        if let Ok(r) = discreteness_report(&g, Mode::TwoLoxodromic, 3, None, &cfg) {
            for c in r.found.iter().chain(std::iter::once(&r.elementarity)) {
                prop_assert!(c.reproduce(&g, &cfg).unwrap() < 1e-8);
            }
        }
    }

    #[test]
    fn enumeration_schedule_independent(g in arb_group()) {
        let seq = SearchConfig { execution: puhyp::Execution::Sequential, ..Default::default() };
        let par = SearchConfig { execution: puhyp::Execution::Parallel, ..Default::default() };
        prop_assert_eq!(enumerate_words(&g, 4, &seq).unwrap(), enumerate_words(&g, 4, &par).unwrap());
    }
}
