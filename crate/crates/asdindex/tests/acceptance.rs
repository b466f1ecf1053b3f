//! Acceptance suite: every numeric claim the library reproduces, run at the
//! stated tolerances over the full catalog ranges. Each test prints one
//! pass line; a failed assertion is the corresponding fail.

use std::process::Command;
use std::time::{Duration, Instant};

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use asdindex::catalog::{
    hyperkahler_entry, hyperkahler_h1_dim, lebrun_index, lebrun_metric_data, lebrun_moduli_bound,
    lebrun_profile, ModuliBound,
};
use asdindex::conjclass::{classify_action, conjugate_by};
use asdindex::indexcore::{
    ale_index_relation, correction_term, orbifold_index, smooth_index, verify_pairing_identity,
};
use asdindex::invariants::{
    conformal_killing_dim_r4_quotient, conformal_killing_dim_s4_quotient, euler_orbifold,
    OrbifoldSpec,
};
use asdindex::quat::{ade_standard_action, generate_group, RotationPair, UnitQuaternion};
use asdindex::{Error, Family, Orientation, SingularityDescriptor};

/// Full catalog sweep: A_1..A_50, D_3..D_50, E_6..E_8.
fn catalog_classes() -> Vec<(Family, u32)> {
    let mut classes: Vec<(Family, u32)> = (1..=50).map(|n| (Family::A, n)).collect();
    classes.extend((3..=50).map(|n| (Family::D, n)));
    classes.extend((6..=8).map(|n| (Family::E, n)));
    classes
}

fn descriptor(family: Family, n: u32, orientation: Orientation) -> SingularityDescriptor {
    SingularityDescriptor::new(family, n, orientation).expect("valid descriptor")
}

fn random_rotation_pair(rng: &mut StdRng) -> RotationPair {
    let mut quat = || loop {
        let comps: [f64; 4] = [
            rng.random_range(-1.0..1.0),
            rng.random_range(-1.0..1.0),
            rng.random_range(-1.0..1.0),
            rng.random_range(-1.0..1.0),
        ];
        if let Ok(q) = UnitQuaternion::new(comps[0], comps[1], comps[2], comps[3]) {
            return q;
        }
    };
    RotationPair::rotation(quat(), quat())
}

#[test]
fn criterion_1_group_orders() {
    for (family, n) in catalog_classes() {
        for orientation in [Orientation::Preserving, Orientation::Reversing] {
            let d = descriptor(family, n, orientation);
            let start = Instant::now();
            let g = ade_standard_action(&d).expect("standard action");
            let elapsed = start.elapsed();
            assert_eq!(g.order() as u64, d.group_order(), "{d}");
            assert!(g.is_free(), "{d} must act freely");
            assert!(
                elapsed < Duration::from_millis(100),
                "{d}: closure took {elapsed:?}, budget 100 ms"
            );
        }
    }
    println!("[PASS] criterion 1: standard action orders match the table for the full catalog");
}

#[test]
fn criterion_2_correction_terms() {
    // Orientation-reversing column.
    assert_eq!(
        correction_term(&descriptor(Family::A, 1, Orientation::Reversing)),
        -4
    );
    for n in 2..=50i64 {
        assert_eq!(
            correction_term(&descriptor(Family::A, n as u32, Orientation::Reversing)),
            4 * n - 10
        );
    }
    assert_eq!(
        correction_term(&descriptor(Family::D, 3, Orientation::Reversing)),
        2
    );
    for n in 4..=50i64 {
        assert_eq!(
            correction_term(&descriptor(Family::D, n as u32, Orientation::Reversing)),
            4 * n - 11
        );
    }
    for n in 6..=8i64 {
        assert_eq!(
            correction_term(&descriptor(Family::E, n as u32, Orientation::Reversing)),
            4 * n - 11
        );
    }
    // Orientation-preserving column: -4n for every family.
    for (family, n) in catalog_classes() {
        assert_eq!(
            correction_term(&descriptor(family, n, Orientation::Preserving)),
            -4 * i64::from(n)
        );
    }
    // Cross-column consistency: A_1 is self-conjugate and D_3 aliases A_3.
    assert_eq!(
        correction_term(&descriptor(Family::A, 1, Orientation::Reversing)),
        correction_term(&descriptor(Family::A, 1, Orientation::Preserving))
    );
    for orientation in [Orientation::Preserving, Orientation::Reversing] {
        assert_eq!(
            correction_term(&descriptor(Family::D, 3, orientation)),
            correction_term(&descriptor(Family::A, 3, orientation))
        );
    }
    println!("[PASS] criterion 2: correction terms match both closed-form columns exactly");
}

#[test]
fn criterion_3_pairing_identity() {
    for (family, n) in catalog_classes() {
        let w = verify_pairing_identity(family, n).expect("witness");
        assert!(
            w.holds,
            "{family}_{n}: dim H0 = {} but 15 + {} + {} = {}",
            w.killing_dim_s4,
            w.reversing_term,
            w.preserving_term,
            w.expected()
        );
        assert_eq!(w.killing_dim_s4 as i64, w.expected());
    }
    println!("[PASS] criterion 3: pairing identity holds with the character-average left side");
}

#[test]
fn criterion_4_conformal_killing_dimensions() {
    let trivial = generate_group(&[]).expect("trivial group");
    assert_eq!(conformal_killing_dim_r4_quotient(&trivial).unwrap(), 15);

    let dim = |family, n| {
        let g = ade_standard_action(&descriptor(family, n, Orientation::Preserving)).unwrap();
        conformal_killing_dim_r4_quotient(&g).unwrap()
    };
    assert_eq!(dim(Family::A, 1), 7);
    for n in 2..=50 {
        assert_eq!(dim(Family::A, n), 5, "A_{n}");
    }
    assert_eq!(dim(Family::D, 3), 5);
    for n in 4..=50 {
        assert_eq!(dim(Family::D, n), 4, "D_{n}");
    }
    for n in 6..=8 {
        assert_eq!(dim(Family::E, n), 4, "E_{n}");
    }
    println!(
        "[PASS] criterion 4: Killing dimensions are exactly 15/7/5/5/4/4 with integral averages"
    );
}

#[test]
fn criterion_5_hyperkahler_indices() {
    for (family, n) in catalog_classes() {
        let entry = hyperkahler_entry(family, n).expect("entry");

        // Route (i): orbifold index formula at the compactified point.
        let spec = OrbifoldSpec::new(
            None,
            entry.euler_compactified,
            entry.signature_compactified,
            vec![descriptor(family, n, Orientation::Reversing)],
        )
        .unwrap();
        let via_orbifold = orbifold_index(&spec).unwrap().total();

        // Route (ii): ALE dimension count with dim H^1 = 3n, dim H^2 = 0.
        let group = ade_standard_action(&descriptor(family, n, Orientation::Preserving)).unwrap();
        let via_ale = ale_index_relation(hyperkahler_h1_dim(&entry), 0, &group).unwrap();

        assert_eq!(via_orbifold, via_ale, "{family}_{n}: routes disagree");
        let ni = i64::from(n);
        let expected = match (family, n) {
            (Family::A, 1) => 4,
            (Family::A, _) => -3 * ni + 5,
            (Family::D, 3) => -4,
            _ => -3 * ni + 4,
        };
        assert_eq!(via_orbifold, expected, "{family}_{n}");
    }
    println!("[PASS] criterion 5: both index routes agree and match the closed forms");
}

#[test]
fn criterion_6_lebrun_suite() {
    for n in 2..=100u32 {
        assert_eq!(lebrun_index(n).unwrap(), 12 - 4 * i64::from(n), "n = {n}");
    }
    for n in 4..=100u32 {
        assert_eq!(
            lebrun_moduli_bound(n).unwrap(),
            ModuliBound::LowerBound(u64::from(4 * n - 12)),
            "n = {n}"
        );
    }
    assert_eq!(lebrun_moduli_bound(1).unwrap(), ModuliBound::Rigid);
    assert_eq!(lebrun_moduli_bound(2).unwrap(), ModuliBound::Rigid);
    assert_eq!(lebrun_moduli_bound(3).unwrap(), ModuliBound::Unknown);
    for n in 1..=100u32 {
        assert_eq!(
            lebrun_profile(n, 1.0).unwrap(),
            0.0,
            "profile must vanish exactly at r = 1"
        );
        let mass = lebrun_metric_data(n).unwrap().mass;
        assert_eq!(mass < 0.0, n > 2, "mass sign at n = {n}");
    }
    println!(
        "[PASS] criterion 6: LeBrun indices 12-4n, bounds 4n-12, exact profile zero, mass signs"
    );
}

#[test]
fn criterion_7_classification_round_trips() {
    let start = Instant::now();
    let mut rng = StdRng::seed_from_u64(0x5eed_ade5);
    for (family, n) in catalog_classes() {
        // Round trip for both orientations.
        for orientation in [Orientation::Preserving, Orientation::Reversing] {
            let d = descriptor(family, n, orientation);
            let g = ade_standard_action(&d).expect("standard action");
            let c = classify_action(&g).expect("classification");
            assert!(c.matches_descriptor(&d), "{d} classified as {}", c.label());
        }

        // Invariance under 100 random SO(4) conjugations.
        let d = descriptor(family, n, Orientation::Preserving);
        let g = ade_standard_action(&d).expect("standard action");
        for _ in 0..100 {
            let outer = random_rotation_pair(&mut rng);
            let moved = conjugate_by(&g, &outer.matrix()).expect("conjugate");
            let c = classify_action(&moved).expect("classification");
            assert!(c.matches_descriptor(&d), "{d} moved to {}", c.label());
        }

        // One reflection conjugation flips the orientation.
        let outer = random_rotation_pair(&mut rng).compose(&RotationPair::CONJUGATION);
        let moved = conjugate_by(&g, &outer.matrix()).expect("conjugate");
        let c = classify_action(&moved).expect("classification");
        assert!(
            c.matches_descriptor(&d.flipped()),
            "{d} reflected to {} with orientations {:?}",
            c.label(),
            c.orientations()
        );
    }
    let elapsed = start.elapsed();
    assert!(
        elapsed < Duration::from_secs(60),
        "round trips took {elapsed:?}, budget 60 s"
    );
    println!(
        "[PASS] criterion 7: classification round trips and conjugation sweeps in {elapsed:.1?}"
    );
}

#[test]
fn criterion_8_property_suite() {
    // Euler formula additivity over singular points.
    let a1 = descriptor(Family::A, 1, Orientation::Reversing);
    let e8 = descriptor(Family::E, 8, Orientation::Reversing);
    let spec1 = OrbifoldSpec::new(None, 3, -1, vec![a1]).unwrap();
    let spec2 = OrbifoldSpec::new(None, 10, 0, vec![e8]).unwrap();
    let combined = OrbifoldSpec::new(None, 13, -1, vec![a1, e8]).unwrap();
    assert_eq!(
        euler_orbifold(&combined),
        euler_orbifold(&spec1) + euler_orbifold(&spec2)
    );

    // Permutation invariance of the orbifold index.
    let sings = vec![
        descriptor(Family::A, 5, Orientation::Reversing),
        descriptor(Family::D, 4, Orientation::Preserving),
        descriptor(Family::E, 7, Orientation::Reversing),
    ];
    let mut reversed = sings.clone();
    reversed.reverse();
    let total = |s: Vec<SingularityDescriptor>| {
        orbifold_index(&OrbifoldSpec::new(None, 4, 0, s).unwrap())
            .unwrap()
            .total()
    };
    assert_eq!(total(sings), total(reversed));

    // Parity guard.
    assert!(matches!(
        smooth_index(3, 0),
        Err(Error::ParityViolation { .. })
    ));
    assert!(matches!(
        OrbifoldSpec::new(None, 3, 0, vec![]),
        Err(Error::ParityViolation { .. })
    ));

    // R^4 and S^4 Killing dimensions agree for nontrivial free groups.
    for (family, n) in [
        (Family::A, 1),
        (Family::A, 9),
        (Family::D, 3),
        (Family::D, 11),
        (Family::E, 8),
    ] {
        let g = ade_standard_action(&descriptor(family, n, Orientation::Preserving)).unwrap();
        assert_eq!(
            conformal_killing_dim_r4_quotient(&g).unwrap(),
            conformal_killing_dim_s4_quotient(&g).unwrap(),
            "{family}_{n}"
        );
    }
    println!("[PASS] criterion 8: additivity, permutation invariance, parity guard, r4 = s4");
}

#[test]
fn criterion_9_golden_files_and_verify() {
    let bin = env!("CARGO_BIN_EXE_asdindex");

    let tables = Command::new(bin)
        .args(["tables"])
        .env_remove("ASDINDEX_WIDTH")
        .output()
        .expect("run tables");
    assert!(tables.status.success());
    let golden_text: &[u8] = include_bytes!("goldens/tables_default.txt");
    assert_eq!(
        tables.stdout, golden_text,
        "tables text output drifted from the committed golden"
    );

    let tables_json = Command::new(bin)
        .args(["tables", "--format", "json"])
        .env_remove("ASDINDEX_WIDTH")
        .output()
        .expect("run tables --format json");
    assert!(tables_json.status.success());
    let golden_json: &[u8] = include_bytes!("goldens/tables_default.json");
    assert_eq!(
        tables_json.stdout, golden_json,
        "tables JSON output drifted from the committed golden"
    );

    let verify = Command::new(bin)
        .args(["verify"])
        .output()
        .expect("run verify");
    assert!(
        verify.status.success(),
        "verify exited {:?}: {}",
        verify.status.code(),
        String::from_utf8_lossy(&verify.stdout)
    );
    println!("[PASS] criterion 9: golden tables byte-identical and verify exits 0");
}
