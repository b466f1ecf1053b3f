//! The index formulas: smooth index, correction-term table for both
//! conjugacy orientations, multi-point orbifold index, the ALE-orbifold
//! index relation, and the pairing identity tying them together.
//!
//! Correction terms are stored as closed forms rather than derived from
//! eta-invariants or representation theory at runtime; the verification
//! suite replays their derivation from the hyperkahler examples.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::invariants::{
    conformal_killing_dim_r4_quotient, conformal_killing_dim_s4_quotient, OrbifoldSpec,
};
use crate::quat::{ade_standard_action, Family, GroupAction, Orientation, SingularityDescriptor};

/// One singular point's contribution to the index.
#[derive(Debug, Clone, Serialize)]
pub struct Correction {
    pub singularity: SingularityDescriptor,
    #[serde(rename = "N")]
    pub n: i64,
}

/// Structured index output: the smooth part (15 chi + 29 tau)/2, the
/// per-point corrections, and their sum.
#[derive(Debug, Clone, Serialize)]
pub struct IndexReport {
    smooth_part: i64,
    corrections: Vec<Correction>,
    total: i64,
    notes: Vec<String>,
}

impl IndexReport {
    pub fn smooth_part(&self) -> i64 {
        self.smooth_part
    }
    pub fn corrections(&self) -> &[Correction] {
        &self.corrections
    }
    pub fn total(&self) -> i64 {
        self.total
    }
    pub fn notes(&self) -> &[String] {
        &self.notes
    }
}

/// Index of the deformation complex on a smooth compact anti-self-dual
/// 4-manifold: (15 chi + 29 tau)/2, exact. Errors when the numerator is odd.
pub fn smooth_index(euler: i64, signature: i64) -> Result<i64> {
    let numerator = 15 * i128::from(euler) + 29 * i128::from(signature);
    if numerator % 2 != 0 {
        return Err(Error::ParityViolation { euler, signature });
    }
    i64::try_from(numerator / 2)
        .map_err(|_| Error::BadRange("euler/signature out of the supported range".to_string()))
}

/// The integer correction term N_Gamma added to the smooth index formula for
/// one orbifold point of the given oriented conjugacy class.
///
/// Reversing: A_1 -> -4, A_n (n >= 2) -> 4n - 10, D_3 -> 2,
/// D_n (n >= 4) and E_n -> 4n - 11. Preserving: -4n for every family.
/// D_3 and A_3 are the same oriented class and give identical values.
pub fn correction_term(d: &SingularityDescriptor) -> i64 {
    let n = i64::from(d.n());
    match d.orientation() {
        Orientation::Preserving => -4 * n,
        Orientation::Reversing => match d.family() {
            Family::A if n == 1 => -4,
            Family::A => 4 * n - 10,
            Family::D if n == 3 => 2,
            Family::D | Family::E => 4 * n - 11,
        },
    }
}

/// Orbifold index: smooth_index(chi, tau) plus the sum of the correction
/// terms of the singular points.
pub fn orbifold_index(spec: &OrbifoldSpec) -> Result<IndexReport> {
    let smooth_part = smooth_index(spec.euler(), spec.signature())?;
    let mut notes = Vec::new();
    let corrections: Vec<Correction> = spec
        .singularities()
        .iter()
        .map(|s| Correction {
            singularity: *s,
            n: correction_term(s),
        })
        .collect();
    for (i, c) in corrections.iter().enumerate() {
        let d = &c.singularity;
        if d.n() == 3 && (d.family() == Family::A || d.family() == Family::D) {
            notes.push(format!(
                "singularity #{i}: {} and {} label the same oriented class; identical correction terms",
                if d.family() == Family::D { "D_3" } else { "A_3" },
                if d.family() == Family::D { "A_3" } else { "D_3" },
            ));
        }
    }
    let total = smooth_part + corrections.iter().map(|c| c.n).sum::<i64>();
    Ok(IndexReport {
        smooth_part,
        corrections,
        total,
        notes,
    })
}

/// Index of the conformal compactification of an ALE space, computed from
/// dimension data of the ALE deformation complex:
/// -dim H^1 + dim H^2 + dim H^0(R^4/Gamma).
pub fn ale_index_relation(h1_dim: u64, h2_dim: u64, g: &GroupAction) -> Result<i64> {
    let killing = conformal_killing_dim_r4_quotient(g)?;
    Ok(killing as i64 - h1_dim as i64 + h2_dim as i64)
}

/// Witness values for the pairing identity on S^4/Gamma: the conformal
/// Killing dimension (computed by the character-average oracle) against
/// 15 + N_Gamma + N_Gamma~ from the correction-term table.
#[derive(Debug, Clone, Serialize)]
pub struct PairingWitness {
    pub holds: bool,
    pub killing_dim_s4: u64,
    pub reversing_term: i64,
    pub preserving_term: i64,
}

impl PairingWitness {
    pub fn expected(&self) -> i64 {
        15 + self.reversing_term + self.preserving_term
    }
}

/// Checks dim H^0(S^4/Gamma) = 15 + N_Gamma + N_Gamma~ for the standard
/// action of the given class, returning the three numbers as witnesses.
pub fn verify_pairing_identity(family: Family, n: u32) -> Result<PairingWitness> {
    let preserving = SingularityDescriptor::new(family, n, Orientation::Preserving)?;
    let reversing = preserving.flipped();
    let group = ade_standard_action(&preserving)?;
    let killing_dim_s4 = conformal_killing_dim_s4_quotient(&group)?;
    let reversing_term = correction_term(&reversing);
    let preserving_term = correction_term(&preserving);
    let holds = killing_dim_s4 as i64 == 15 + reversing_term + preserving_term;
    Ok(PairingWitness {
        holds,
        killing_dim_s4,
        reversing_term,
        preserving_term,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn descriptor(family: Family, n: u32, orientation: Orientation) -> SingularityDescriptor {
        SingularityDescriptor::new(family, n, orientation).unwrap()
    }

    #[test]
    fn smooth_index_examples() {
        assert_eq!(smooth_index(2, 0).unwrap(), 15);
        assert_eq!(smooth_index(3, -1).unwrap(), 8);
        // K3 data.
        assert_eq!(smooth_index(24, -16).unwrap(), -52);
        assert!(matches!(
            smooth_index(3, 0),
            Err(Error::ParityViolation { .. })
        ));
    }

    #[test]
    fn correction_term_table() {
        assert_eq!(
            correction_term(&descriptor(Family::A, 1, Orientation::Reversing)),
            -4
        );
        assert_eq!(
            correction_term(&descriptor(Family::A, 5, Orientation::Reversing)),
            10
        );
        assert_eq!(
            correction_term(&descriptor(Family::D, 3, Orientation::Reversing)),
            2
        );
        assert_eq!(
            correction_term(&descriptor(Family::D, 7, Orientation::Reversing)),
            17
        );
        assert_eq!(
            correction_term(&descriptor(Family::E, 8, Orientation::Reversing)),
            21
        );
        assert_eq!(
            correction_term(&descriptor(Family::D, 3, Orientation::Preserving)),
            -12
        );
        assert_eq!(
            correction_term(&descriptor(Family::E, 6, Orientation::Preserving)),
            -24
        );
    }

    #[test]
    fn a1_and_d3_cross_column_consistency() {
        // A_1 is self-conjugate: both orientations give -4.
        assert_eq!(
            correction_term(&descriptor(Family::A, 1, Orientation::Reversing)),
            correction_term(&descriptor(Family::A, 1, Orientation::Preserving)),
        );
        // D_3 aliases A_3 in both orientations: +2 = 4*3 - 10 and -12 = -4*3.
        for orientation in [Orientation::Preserving, Orientation::Reversing] {
            assert_eq!(
                correction_term(&descriptor(Family::D, 3, orientation)),
                correction_term(&descriptor(Family::A, 3, orientation)),
            );
        }
    }

    #[test]
    fn orbifold_index_examples() {
        let eguchi_hanson = OrbifoldSpec::new(
            None,
            3,
            -1,
            vec![descriptor(Family::A, 1, Orientation::Reversing)],
        )
        .unwrap();
        assert_eq!(orbifold_index(&eguchi_hanson).unwrap().total(), 4);

        let lebrun4 = OrbifoldSpec::new(
            None,
            3,
            -1,
            vec![descriptor(Family::A, 3, Orientation::Preserving)],
        )
        .unwrap();
        let report = orbifold_index(&lebrun4).unwrap();
        assert_eq!(report.total(), -4);
        assert_eq!(report.smooth_part(), 8);
        assert!(!report.notes().is_empty());

        let s4_z2 = OrbifoldSpec::new(
            None,
            2,
            0,
            vec![
                descriptor(Family::A, 1, Orientation::Reversing),
                descriptor(Family::A, 1, Orientation::Reversing),
            ],
        )
        .unwrap();
        assert_eq!(orbifold_index(&s4_z2).unwrap().total(), 7);
    }

    #[test]
    fn ale_relation_examples() {
        let a1 = ade_standard_action(&descriptor(Family::A, 1, Orientation::Preserving)).unwrap();
        assert_eq!(ale_index_relation(3, 0, &a1).unwrap(), 4);
        for n in 2..=6u32 {
            let g =
                ade_standard_action(&descriptor(Family::A, n, Orientation::Preserving)).unwrap();
            assert_eq!(
                ale_index_relation(3 * u64::from(n), 0, &g).unwrap(),
                -3 * i64::from(n) + 5
            );
        }
        let trivial = crate::quat::generate_group(&[]).unwrap();
        assert_eq!(ale_index_relation(0, 0, &trivial).unwrap(), 15);
    }

    #[test]
    fn pairing_identity_examples() {
        let w = verify_pairing_identity(Family::A, 1).unwrap();
        assert!(w.holds);
        assert_eq!(
            (w.killing_dim_s4, w.reversing_term, w.preserving_term),
            (7, -4, -4)
        );

        let w = verify_pairing_identity(Family::D, 3).unwrap();
        assert!(w.holds);
        assert_eq!(
            (w.killing_dim_s4, w.reversing_term, w.preserving_term),
            (5, 2, -12)
        );

        let w = verify_pairing_identity(Family::E, 7).unwrap();
        assert!(w.holds);
        assert_eq!(
            (w.killing_dim_s4, w.reversing_term, w.preserving_term),
            (4, 17, -28)
        );
    }

    #[test]
    fn index_report_serializes_to_schema() {
        let spec = OrbifoldSpec::new(
            Some("eguchi-hanson".into()),
            3,
            -1,
            vec![descriptor(Family::A, 1, Orientation::Reversing)],
        )
        .unwrap();
        let report = orbifold_index(&spec).unwrap();
        let json = serde_json::to_value(&report).unwrap();
        assert_eq!(json["smooth_part"], 8);
        assert_eq!(json["total"], 4);
        assert_eq!(json["corrections"][0]["N"], -4);
        assert_eq!(json["corrections"][0]["singularity"]["family"], "A");
    }
}
