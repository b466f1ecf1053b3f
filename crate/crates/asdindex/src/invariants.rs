//! Topological and conformal invariants: orbifold Euler characteristic and
//! signature conversions, and character-averaged dimensions of conformal
//! Killing fields on R^4/Gamma and S^4/Gamma.
//!
//! Fixed-subspace dimensions are computed by character averaging rather than
//! explicit basis construction; the integer post-condition doubles as a
//! numerical health check.

use num_rational::Ratio;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::quat::{GroupAction, RotationPair, SingularityDescriptor, ANGLE_TOL};

/// Input topology of a compact anti-self-dual orbifold: Euler characteristic,
/// signature, and the list of singular points. 15*euler + 29*signature must
/// be even for the half-integer index formula to be integral.
#[derive(Debug, Clone, Serialize)]
pub struct OrbifoldSpec {
    #[serde(skip_serializing_if = "Option::is_none")]
    name: Option<String>,
    euler: i64,
    signature: i64,
    singularities: Vec<SingularityDescriptor>,
}

impl OrbifoldSpec {
    pub fn new(
        name: Option<String>,
        euler: i64,
        signature: i64,
        singularities: Vec<SingularityDescriptor>,
    ) -> Result<Self> {
        if (15 * i128::from(euler) + 29 * i128::from(signature)) % 2 != 0 {
            return Err(Error::ParityViolation { euler, signature });
        }
        Ok(Self {
            name,
            euler,
            signature,
            singularities,
        })
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }
    pub fn euler(&self) -> i64 {
        self.euler
    }
    pub fn signature(&self) -> i64 {
        self.signature
    }
    pub fn singularities(&self) -> &[SingularityDescriptor] {
        &self.singularities
    }
}

/// Trace of the 4x4 matrix of a rotation.
fn vector_character(p: &RotationPair) -> f64 {
    (0..4)
        .map(|i| {
            let mut e = [0.0; 4];
            e[i] = 1.0;
            p.act(e)[i]
        })
        .sum()
}

/// Trace of the induced action on the 6-dimensional space of 2-forms,
/// via the exterior-square character (chi(g)^2 - chi(g^2))/2.
pub fn lambda2_character(p: &RotationPair) -> f64 {
    assert!(
        !p.conjugated(),
        "lambda2_character is defined for rotations"
    );
    let chi = vector_character(p);
    let chi_sq = vector_character(&p.compose(p));
    (chi * chi - chi_sq) / 2.0
}

/// Rounds a character average that must be an integer; errors on drift.
fn integral_average(avg: f64) -> Result<i64> {
    let rounded = avg.round();
    if (avg - rounded).abs() > ANGLE_TOL {
        return Err(Error::NonIntegralAverage {
            value: avg,
            tolerance: ANGLE_TOL,
        });
    }
    Ok(rounded as i64)
}

/// Dimension of the space of conformal Killing fields on R^4/Gamma: 15 for
/// the trivial group, and otherwise 1 (radial scaling) plus the dimension of
/// the Gamma-fixed subspace of Lambda^2 R^4, computed by character average.
pub fn conformal_killing_dim_r4_quotient(g: &GroupAction) -> Result<u64> {
    if !g.is_free() {
        return Err(Error::NonFreeGroup);
    }
    if g.order() == 1 {
        return Ok(15);
    }
    let avg = g.elements().iter().map(lambda2_character).sum::<f64>() / g.order() as f64;
    let fixed = integral_average(avg)?;
    Ok(u64::try_from(fixed + 1).expect("fixed subspace dimension is nonnegative"))
}

/// Dimension of the space of conformal Killing fields on S^4/Gamma for Gamma
/// acting as rotations around the x5-axis: the character average over Gamma
/// of the trace on Lambda^2 R^6 of gamma + I_2, i.e. avg(Lambda^2 R^4)
/// + 2 avg(trace R^4) + 1.
pub fn conformal_killing_dim_s4_quotient(g: &GroupAction) -> Result<u64> {
    if !g.is_free() {
        return Err(Error::NonFreeGroup);
    }
    if g.order() == 1 {
        return Ok(15);
    }
    let avg = g
        .elements()
        .iter()
        .map(|e| lambda2_character(e) + 2.0 * vector_character(e) + 1.0)
        .sum::<f64>()
        / g.order() as f64;
    let dim = integral_average(avg)?;
    Ok(u64::try_from(dim).expect("Killing dimension is nonnegative"))
}

/// Orbifold Euler characteristic: chi - sum over points of (1 - 1/|Gamma_i|),
/// additively over the singular points.
pub fn euler_orbifold(spec: &OrbifoldSpec) -> Ratio<i64> {
    let mut chi = Ratio::from_integer(spec.euler());
    for s in spec.singularities() {
        chi -= Ratio::from_integer(1) - Ratio::new(1, s.group_order() as i64);
    }
    chi
}

/// Orbifold signature: tau + sum of the user-supplied eta(S^3/Gamma_i).
/// Eta-invariants are inputs, never computed; a missing one is an error
/// naming the point.
pub fn signature_orbifold(spec: &OrbifoldSpec) -> Result<f64> {
    let mut tau = spec.signature() as f64;
    for (index, s) in spec.singularities().iter().enumerate() {
        match s.eta() {
            Some(eta) => tau += eta,
            None => {
                return Err(Error::EtaRequired {
                    index,
                    label: s.label(),
                })
            }
        }
    }
    Ok(tau)
}
