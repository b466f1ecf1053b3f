//! Curated catalog of hyperkahler ALE spaces and LeBrun negative-mass
//! metrics: the invariant table, compactified indices computed by two
//! independent routes, and the moduli-dimension bounds.
//!
//! Rows are generated from closed forms for arbitrary index ranges; the
//! E-rows are additionally pinned by hard-coded spot checks in the tests.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::indexcore::{ale_index_relation, orbifold_index};
use crate::invariants::OrbifoldSpec;
use crate::quat::{ade_standard_action, Family, Orientation, SingularityDescriptor};

/// One row of the hyperkahler ALE invariant table, with the compactified
/// Euler characteristic chi(X) + 1 and signature -b2.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct HyperkahlerEntry {
    pub family: Family,
    pub n: u32,
    pub group_order: u64,
    pub b2_minus: u32,
    pub euler_ale: i64,
    pub euler_compactified: i64,
    pub signature_compactified: i64,
}

impl HyperkahlerEntry {
    pub fn label(&self) -> String {
        format!("{}_{}", self.family, self.n)
    }
}

/// The table row for one type: A_n -> (n+1, n, n+1); D_n -> (4(n-2), n, n+1);
/// E_6 -> (24, 6, 7); E_7 -> (48, 7, 8); E_8 -> (120, 8, 9).
pub fn hyperkahler_entry(family: Family, n: u32) -> Result<HyperkahlerEntry> {
    let d = SingularityDescriptor::new(family, n, Orientation::Preserving)?;
    let b2_minus = n;
    let euler_ale = i64::from(n) + 1;
    Ok(HyperkahlerEntry {
        family,
        n,
        group_order: d.group_order(),
        b2_minus,
        euler_ale,
        euler_compactified: euler_ale + 1,
        signature_compactified: -i64::from(b2_minus),
    })
}

/// All rows with index in [n_min, n_max], A-family first, then D, then E.
pub fn hyperkahler_table(n_min: u32, n_max: u32) -> Result<Vec<HyperkahlerEntry>> {
    if n_min < 1 || n_min > n_max {
        return Err(Error::BadRange(format!(
            "need 1 <= n_min <= n_max, got {n_min}..{n_max}"
        )));
    }
    let mut rows = Vec::new();
    for n in n_min.max(1)..=n_max {
        rows.push(hyperkahler_entry(Family::A, n)?);
    }
    for n in n_min.max(3)..=n_max {
        rows.push(hyperkahler_entry(Family::D, n)?);
    }
    for n in 6..=8 {
        if n_min <= n && n <= n_max {
            rows.push(hyperkahler_entry(Family::E, n)?);
        }
    }
    Ok(rows)
}

/// dim H^1 of the ALE deformation complex on a hyperkahler ALE space:
/// 3 per L^2 harmonic 2-form, i.e. 3 * b2.
pub fn hyperkahler_h1_dim(entry: &HyperkahlerEntry) -> u64 {
    3 * u64::from(entry.b2_minus)
}

/// Index on the conformal compactification, computed two ways and asserted
/// equal: (i) the orbifold index formula with the group at the added point
/// read with reversed orientation, and (ii) the ALE index relation with
/// dim H^1 = 3 b2 and dim H^2 = 0.
pub fn hyperkahler_compactified_index(entry: &HyperkahlerEntry) -> Result<i64> {
    let reversed = SingularityDescriptor::new(entry.family, entry.n, Orientation::Reversing)?;
    let spec = OrbifoldSpec::new(
        None,
        entry.euler_compactified,
        entry.signature_compactified,
        vec![reversed],
    )?;
    let via_orbifold = orbifold_index(&spec)?.total();

    let standard = SingularityDescriptor::new(entry.family, entry.n, Orientation::Preserving)?;
    let group = ade_standard_action(&standard)?;
    let via_ale = ale_index_relation(hyperkahler_h1_dim(entry), 0, &group)?;

    if via_orbifold != via_ale {
        return Err(Error::RouteDisagreement(format!(
            "{}: orbifold route {via_orbifold} != ALE route {via_ale}",
            entry.label()
        )));
    }
    Ok(via_orbifold)
}

/// LeBrun metric data on O(-n): profile coefficients A = n - 2, B = 1 - n,
/// mass -4 pi^2 (n - 2), and compactified topology (chi, tau) = (3, -1).
/// The group at the compactified point is orientation-preserving conjugate
/// to A_{n-1}; it is trivial for n = 1 (the Burns metric), where no
/// orbifold point remains.
#[derive(Debug, Clone, Serialize)]
pub struct LeBrunData {
    pub n: u32,
    pub coeff_a: i64,
    pub coeff_b: i64,
    pub mass: f64,
    pub euler_compactified: i64,
    pub signature_compactified: i64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub group: Option<SingularityDescriptor>,
}

pub fn lebrun_metric_data(n: u32) -> Result<LeBrunData> {
    if n < 1 {
        return Err(Error::BadRange("LeBrun metrics need n >= 1".to_string()));
    }
    let group = if n >= 2 {
        Some(SingularityDescriptor::new(
            Family::A,
            n - 1,
            Orientation::Preserving,
        )?)
    } else {
        None
    };
    Ok(LeBrunData {
        n,
        coeff_a: i64::from(n) - 2,
        coeff_b: 1 - i64::from(n),
        mass: -4.0 * PI * PI * (f64::from(n) - 2.0),
        euler_compactified: 3,
        signature_compactified: -1,
        group,
    })
}

/// The metric profile 1 + A r^-2 + B r^-4 on r >= 1. Vanishes exactly at
/// r = 1, the added CP^1 locus; the numerator is assembled from integer
/// coefficients before the division so the zero is exact.
pub fn lebrun_profile(n: u32, r: f64) -> Result<f64> {
    if n < 1 {
        return Err(Error::BadRange("LeBrun metrics need n >= 1".to_string()));
    }
    if !r.is_finite() || r < 1.0 {
        return Err(Error::BadRange(format!(
            "profile is defined for r >= 1, got {r}"
        )));
    }
    let a = f64::from(n) - 2.0;
    let b = 1.0 - f64::from(n);
    let r2 = r * r;
    let r4 = r2 * r2;
    Ok((r4 + a * r2 + b) / r4)
}

/// Index of the compactified LeBrun metric, via the orbifold index formula
/// with the A_{n-1} preserving point: 12 - 4n. The n = 1 case compactifies
/// smoothly (trivial group at infinity) and is rejected rather than being
/// conflated with the smooth formula.
pub fn lebrun_index(n: u32) -> Result<i64> {
    if n < 2 {
        return Err(Error::BadRange(
            "lebrun_index needs n >= 2; n = 1 is the Burns metric with a smooth compactification"
                .to_string(),
        ));
    }
    let point = SingularityDescriptor::new(Family::A, n - 1, Orientation::Preserving)?;
    let spec = OrbifoldSpec::new(None, 3, -1, vec![point])?;
    Ok(orbifold_index(&spec)?.total())
}

/// dim H^1 of the compactified LeBrun metric: dim H^0 - Ind + dim H^2
/// = 4 - (12 - 4n) + 0 = 4n - 8.
pub fn lebrun_h1_dim(n: u32) -> Result<u64> {
    if n < 2 {
        return Err(Error::BadRange("lebrun_h1_dim needs n >= 2".to_string()));
    }
    let ind = lebrun_index(n)?;
    let h1 = 4 - ind;
    Ok(u64::try_from(h1).expect("4n - 8 is nonnegative for n >= 2"))
}

/// What is known about the local moduli of anti-self-dual metrics near a
/// LeBrun metric.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case", tag = "kind", content = "dim")]
pub enum ModuliBound {
    Rigid,
    Unknown,
    LowerBound(u64),
}

/// n in {1, 2}: rigid. n = 3: open. n >= 4: the moduli space has dimension
/// at least dim H^1 - dim H^0 = (4n - 8) - 4 = 4n - 12.
pub fn lebrun_moduli_bound(n: u32) -> Result<ModuliBound> {
    match n {
        0 => Err(Error::BadRange("LeBrun metrics need n >= 1".to_string())),
        1 | 2 => Ok(ModuliBound::Rigid),
        3 => Ok(ModuliBound::Unknown),
        _ => Ok(ModuliBound::LowerBound(lebrun_h1_dim(n)? - 4)),
    }
}
