//! Parsers for the two untrusted input file formats: generator lists for
//! `classify` and orbifold specs for `index`. Both are also fuzz targets and
//! must reject malformed input with errors, never panics.

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::invariants::OrbifoldSpec;
use crate::quat::{
    generate_group, isoclinic_decompose, Family, GroupAction, Orientation, RotationPair,
    SingularityDescriptor, UnitQuaternion,
};

/// Unit-norm and orthogonality tolerance for floating generator input.
pub const INPUT_TOL: f64 = 1e-6;

/// Bound on |euler| and |signature| in spec files; keeps the integer index
/// arithmetic far away from overflow.
const TOPOLOGY_BOUND: i64 = 1_000_000_000_000;

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGeneratorFile {
    #[serde(default)]
    generators: Option<Vec<RawGenerator>>,
    #[serde(default)]
    matrices: Option<Vec<[f64; 16]>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGenerator {
    left: [f64; 4],
    right: [f64; 4],
    #[serde(default)]
    conjugated: bool,
}

fn unit_quaternion_from_input(comps: [f64; 4], what: &str) -> Result<UnitQuaternion> {
    if comps.iter().any(|c| !c.is_finite()) {
        return Err(Error::Parse(format!("{what}: components must be finite")));
    }
    let norm = comps.iter().map(|c| c * c).sum::<f64>().sqrt();
    if (norm - 1.0).abs() > INPUT_TOL {
        return Err(Error::Parse(format!(
            "{what}: norm {norm} is not 1 within {INPUT_TOL:e}"
        )));
    }
    UnitQuaternion::new(comps[0], comps[1], comps[2], comps[3])
        .map_err(|_| Error::Parse(format!("{what}: degenerate quaternion")))
}

/// Gram-Schmidt cleanup of a nearly-orthogonal matrix (columns as the images
/// of the basis), so that downstream decomposition sees a matrix orthogonal
/// to well below its own tolerance.
fn orthonormalize_columns(m: &mut [[f64; 4]; 4]) -> Result<()> {
    let mut cols: [[f64; 4]; 4] = std::array::from_fn(|c| [m[0][c], m[1][c], m[2][c], m[3][c]]);
    let mut done: Vec<[f64; 4]> = Vec::with_capacity(4);
    for col in &mut cols {
        for prev in &done {
            let dot: f64 = prev.iter().zip(col.iter()).map(|(a, b)| a * b).sum();
            for (v, p) in col.iter_mut().zip(prev) {
                *v -= dot * p;
            }
        }
        let norm = col.iter().map(|v| v * v).sum::<f64>().sqrt();
        if !norm.is_finite() || norm < 0.5 {
            return Err(Error::Parse(
                "matrix is too far from orthogonal".to_string(),
            ));
        }
        for v in col.iter_mut() {
            *v /= norm;
        }
        done.push(*col);
    }
    for (c, col) in cols.iter().enumerate() {
        for (r, row) in m.iter_mut().enumerate() {
            row[c] = col[r];
        }
    }
    Ok(())
}

fn matrix_defect(m: &[[f64; 4]; 4]) -> f64 {
    let mut defect: f64 = 0.0;
    for i in 0..4 {
        for j in 0..4 {
            let dot: f64 = (0..4).map(|k| m[k][i] * m[k][j]).sum();
            let target = if i == j { 1.0 } else { 0.0 };
            defect = defect.max((dot - target).abs());
        }
    }
    defect
}

/// Parses a classify input file: either `{"generators": [{"left": [4 reals],
/// "right": [4 reals]}]}` or `{"matrices": [[16 reals, row-major]]}`, and
/// closes the generators into a group. Reflection generators
/// (determinant -1) are unsupported.
pub fn parse_generator_file(bytes: &[u8]) -> Result<GroupAction> {
    let raw: RawGeneratorFile =
        serde_json::from_slice(bytes).map_err(|e| Error::Parse(e.to_string()))?;
    let pairs: Vec<RotationPair> = match (raw.generators, raw.matrices) {
        (Some(gens), None) => {
            let mut pairs = Vec::with_capacity(gens.len());
            for (i, g) in gens.iter().enumerate() {
                if g.conjugated {
                    return Err(Error::MixedDeterminant);
                }
                let left = unit_quaternion_from_input(g.left, &format!("generator #{i} left"))?;
                let right = unit_quaternion_from_input(g.right, &format!("generator #{i} right"))?;
                pairs.push(RotationPair::rotation(left, right));
            }
            pairs
        }
        (None, Some(mats)) => {
            let mut pairs = Vec::with_capacity(mats.len());
            for (i, flat) in mats.iter().enumerate() {
                if flat.iter().any(|v| !v.is_finite()) {
                    return Err(Error::Parse(format!("matrix #{i}: entries must be finite")));
                }
                let mut m = [[0.0; 4]; 4];
                for r in 0..4 {
                    for c in 0..4 {
                        m[r][c] = flat[4 * r + c];
                    }
                }
                if matrix_defect(&m) > INPUT_TOL {
                    return Err(Error::Parse(format!(
                        "matrix #{i}: not orthogonal within {INPUT_TOL:e}"
                    )));
                }
                orthonormalize_columns(&mut m)?;
                let pair = isoclinic_decompose(&m)?;
                if pair.conjugated() {
                    return Err(Error::MixedDeterminant);
                }
                pairs.push(pair);
            }
            pairs
        }
        (Some(_), Some(_)) => {
            return Err(Error::Parse(
                "file must contain either \"generators\" or \"matrices\", not both".to_string(),
            ))
        }
        (None, None) => {
            return Err(Error::Parse(
                "file must contain a \"generators\" or \"matrices\" key".to_string(),
            ))
        }
    };
    generate_group(&pairs)
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSpec {
    #[serde(default)]
    name: Option<String>,
    euler: i64,
    signature: i64,
    singularities: Vec<RawSingularity>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSingularity {
    family: String,
    n: u32,
    orientation: String,
    #[serde(default)]
    eta: Option<f64>,
}

/// Parses and validates an orbifold spec file:
/// {"name"?, "euler", "signature", "singularities": [{family, n,
/// orientation, eta?}]}.
pub fn parse_orbifold_spec(bytes: &[u8]) -> Result<OrbifoldSpec> {
    let raw: RawSpec = serde_json::from_slice(bytes).map_err(|e| Error::Parse(e.to_string()))?;
    if raw.euler.abs() > TOPOLOGY_BOUND || raw.signature.abs() > TOPOLOGY_BOUND {
        return Err(Error::Parse(format!(
            "euler and signature must lie in [-{TOPOLOGY_BOUND}, {TOPOLOGY_BOUND}]"
        )));
    }
    let mut singularities = Vec::with_capacity(raw.singularities.len());
    for (i, s) in raw.singularities.iter().enumerate() {
        let family = match s.family.as_str() {
            "A" => Family::A,
            "D" => Family::D,
            "E" => Family::E,
            other => {
                return Err(Error::Parse(format!(
                    "singularity #{i}: unknown family {other:?} (expected \"A\", \"D\" or \"E\")"
                )))
            }
        };
        let orientation = match s.orientation.as_str() {
            "preserving" => Orientation::Preserving,
            "reversing" => Orientation::Reversing,
            other => {
                return Err(Error::Parse(format!(
                    "singularity #{i}: unknown orientation {other:?}"
                )))
            }
        };
        let mut d = SingularityDescriptor::new(family, s.n, orientation)?;
        if let Some(eta) = s.eta {
            if !eta.is_finite() {
                return Err(Error::Parse(format!(
                    "singularity #{i}: eta must be finite"
                )));
            }
            d = d.with_eta(eta);
        }
        singularities.push(d);
    }
    OrbifoldSpec::new(raw.name, raw.euler, raw.signature, singularities)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_generator_quaternions() {
        let file = br#"{"generators": [{"left": [0, 0, 1, 0], "right": [1, 0, 0, 0]}]}"#;
        let g = parse_generator_file(file).unwrap();
        assert_eq!(g.order(), 4);
    }

    #[test]
    fn parses_matrices() {
        let d = SingularityDescriptor::new(Family::D, 7, Orientation::Preserving).unwrap();
        let std = crate::quat::ade_standard_action(&d).unwrap();
        let mats: Vec<Vec<f64>> = std
            .generators()
            .iter()
            .map(|p| p.matrix().iter().flatten().copied().collect())
            .collect();
        let file = serde_json::to_vec(&serde_json::json!({ "matrices": mats })).unwrap();
        let g = parse_generator_file(&file).unwrap();
        assert_eq!(g.order(), 20);
        assert!(g.same_elements(&std));
    }

    #[test]
    fn rejects_malformed_generator_files() {
        assert!(matches!(
            parse_generator_file(b"not json"),
            Err(Error::Parse(_))
        ));
        assert!(matches!(parse_generator_file(b"{}"), Err(Error::Parse(_))));
        let both = br#"{"generators": [], "matrices": []}"#;
        assert!(matches!(parse_generator_file(both), Err(Error::Parse(_))));
        let bad_norm = br#"{"generators": [{"left": [1, 1, 0, 0], "right": [1, 0, 0, 0]}]}"#;
        assert!(matches!(
            parse_generator_file(bad_norm),
            Err(Error::Parse(_))
        ));
    }

    #[test]
    fn rejects_reflections() {
        let refl = br#"{"generators": [{"left": [1, 0, 0, 0], "right": [1, 0, 0, 0], "conjugated": true}]}"#;
        assert!(matches!(
            parse_generator_file(refl),
            Err(Error::MixedDeterminant)
        ));
        // x -> x^bar as a matrix.
        let m = serde_json::json!({ "matrices": [[1.0, 0.0, 0.0, 0.0,
                                                  0.0, -1.0, 0.0, 0.0,
                                                  0.0, 0.0, -1.0, 0.0,
                                                  0.0, 0.0, 0.0, -1.0]] });
        let bytes = serde_json::to_vec(&m).unwrap();
        assert!(matches!(
            parse_generator_file(&bytes),
            Err(Error::MixedDeterminant)
        ));
    }

    #[test]
    fn parses_orbifold_spec() {
        let file = br#"{
            "name": "eguchi-hanson",
            "euler": 3,
            "signature": -1,
            "singularities": [{"family": "A", "n": 1, "orientation": "reversing"}]
        }"#;
        let spec = parse_orbifold_spec(file).unwrap();
        assert_eq!(spec.euler(), 3);
        assert_eq!(spec.singularities().len(), 1);
        assert_eq!(spec.singularities()[0].label(), "A_1");
    }

    #[test]
    fn spec_validation_errors() {
        let parity = br#"{"euler": 3, "signature": 0, "singularities": []}"#;
        assert!(matches!(
            parse_orbifold_spec(parity),
            Err(Error::ParityViolation { .. })
        ));
        let range = br#"{"euler": 2, "signature": 0,
            "singularities": [{"family": "D", "n": 2, "orientation": "preserving"}]}"#;
        assert!(matches!(
            parse_orbifold_spec(range),
            Err(Error::InvalidDescriptor { .. })
        ));
        let family = br#"{"euler": 2, "signature": 0,
            "singularities": [{"family": "B", "n": 2, "orientation": "preserving"}]}"#;
        assert!(matches!(parse_orbifold_spec(family), Err(Error::Parse(_))));
    }
}
