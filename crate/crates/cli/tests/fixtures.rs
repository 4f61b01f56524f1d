use std::f64::consts::PI;
use std::path::PathBuf;

use proptest::prelude::*;
use puhyp::isometry::random::random_isometry;
use puhyp::{GroupInput, Isometry, ToleranceConfig};
use puhyp_cli::groupfile::{GroupFile, LoadedGroup};
use rand::SeedableRng;

fn load(name: &str) -> LoadedGroup {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(name);
    GroupFile::read(&path)
        .unwrap()
        .load(&ToleranceConfig::default(), false)
        .unwrap()
}

fn axis_boost(alpha: f64, t: f64) -> Isometry {
    let r = Isometry::rotation(&[alpha]);
    r.compose(&Isometry::boost(1, t))
        .unwrap()
        .compose(&r.inverse())
        .unwrap()
}

fn assert_close(a: &Isometry, b: &Isometry, what: &str) {
    let d = (a.matrix() - b.matrix())
        .iter()
        .map(|z| z.norm())
        .fold(0.0, f64::max);
    assert!(d < 1e-14, "{what}: max entry deviation {d:e}");
}

#[test]
fn fixtures_match_constructors() {
    let phi = (5f64.sqrt() - 1.0) / 2.0;
    let cases: Vec<(&str, Vec<(&str, Isometry)>)> = vec![
        ("cyclic_boost.json", vec![("a", Isometry::boost(1, 1.0))]),
        (
            "l_family.json",
            vec![
                ("l0.1", Isometry::boost(1, 0.1)),
                ("l0.5", Isometry::boost(1, 0.5)),
                ("l1", Isometry::boost(1, 1.0)),
                ("l2", Isometry::boost(1, 2.0)),
            ],
        ),
        (
            "rotations.json",
            vec![
                ("r_pi2", Isometry::rotation(&[PI / 2.0])),
                ("r_pi", Isometry::rotation(&[PI])),
                ("r_2pi3", Isometry::rotation(&[2.0 * PI / 3.0])),
                ("r_2pi5", Isometry::rotation(&[2.0 * PI / 5.0])),
                ("l1", Isometry::boost(1, 1.0)),
            ],
        ),
        (
            "elliptic_n2.json",
            vec![
                ("e", Isometry::rotation(&[2.0 * PI / 5.0, 2.0 * PI / 3.0])),
                ("g", Isometry::boost(2, 1.0)),
            ],
        ),
        ("parabolic.json", vec![("p0", Isometry::parabolic_p0(1))]),
        (
            "golden_rotation.json",
            vec![
                ("r", Isometry::rotation(&[2.0 * PI * phi])),
                ("h", Isometry::boost(1, 1.0)),
                ("e", Isometry::rotation(&[PI / 2.0])),
            ],
        ),
        (
            "commuting_pair.json",
            vec![
                ("a", Isometry::boost(1, 0.1)),
                ("b", Isometry::boost(1, 0.2)),
            ],
        ),
        (
            "two_axis.json",
            vec![
                ("a", Isometry::boost(1, 1.0)),
                ("b", axis_boost(PI / 2.0, 1.0)),
            ],
        ),
        (
            "torsion_family.json",
            vec![
                ("t8", Isometry::rotation(&[0.0, PI / 4.0])),
                ("t16", Isometry::rotation(&[0.0, PI / 8.0])),
                ("t32", Isometry::rotation(&[0.0, PI / 16.0])),
            ],
        ),
        ("identity.json", vec![("e", Isometry::identity(1))]),
        (
            "transport.json",
            vec![
                ("p", axis_boost(0.0, 1.0)),
                ("q", axis_boost(PI / 2.0, 1.0)),
                ("f", axis_boost(2.0, 0.5)),
            ],
        ),
    ];
    for (file, elements) in cases {
        let g = load(file);
        for (name, expected) in elements {
            assert_close(
                g.element(name).unwrap(),
                &expected,
                &format!("{file}:{name}"),
            );
        }
    }
    assert!(load("trivial.json").group.is_empty());
}

#[test]
fn non_unitary_fixture_is_rejected() {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures/non_unitary.json");
    assert!(GroupFile::read(&path)
        .unwrap()
        .load(&ToleranceConfig::default(), false)
        .is_err());
}

proptest! {
    #[test]
    fn group_file_roundtrip_is_bit_exact(seed in any::<u64>(), n in 1usize..=3, count in 0usize..=3) {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let gens = (0..count).map(|i| (format!("g{i}"), random_isometry(&mut rng, n, 2.0))).collect();
        let group = GroupInput::new(n, gens).unwrap();
        let file = GroupFile::from_group(&group, &[]);
        let text = file.to_json();
        let back = GroupFile::parse(&text, "roundtrip").unwrap();
        prop_assert_eq!(&back, &file);
        for (a, b) in file.generators.iter().zip(&back.generators) {
            for (ra, rb) in a.matrix.iter().zip(&b.matrix) {
                for (x, y) in ra.iter().zip(rb) {
                    prop_assert_eq!(x[0].to_bits(), y[0].to_bits());
                    prop_assert_eq!(x[1].to_bits(), y[1].to_bits());
                }
            }
        }
        prop_assert_eq!(back.to_json(), text);
    }
}
