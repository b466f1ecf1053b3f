//! Classification of finite fixed-point-free SO(4) actions into ADE type
//! and conjugacy orientation.
//!
//! Orientation-preserving conjugacy in SO(4) acts on isoclinic pairs
//! componentwise, (l, r) -> (p l p^bar, q r q^bar), and conjugation by a
//! determinant -1 map swaps the two factors. The standard ADE actions are
//! left multiplications, so a noncyclic free group is preserving-conjugate
//! to standard exactly when every right factor is +-1, and
//! reversing-conjugate exactly when every left factor is +-1. Free cyclic
//! actions are handled through the normal form with rotation angles
//! 2 pi (1, c)/m; c = -1 is the A-type (preserving) class and c = +1 its
//! orientation reversal.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::sync::Mutex;

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::quat::{
    ade_standard_action, isoclinic_decompose, Family, GroupAction, Orientation,
    SingularityDescriptor, ANGLE_TOL,
};

/// Abstract type tag of a finite subgroup of the unit quaternions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GroupTag {
    Cyclic(u64),
    BinaryDihedral(u64),
    BinaryTetrahedral,
    BinaryOctahedral,
    BinaryIcosahedral,
}

impl fmt::Display for GroupTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupTag::Cyclic(m) => write!(f, "cyclic({m})"),
            GroupTag::BinaryDihedral(k) => write!(f, "binary-dihedral({k})"),
            GroupTag::BinaryTetrahedral => f.write_str("2T"),
            GroupTag::BinaryOctahedral => f.write_str("2O"),
            GroupTag::BinaryIcosahedral => f.write_str("2I"),
        }
    }
}

/// ADE family, index, realizable orientations, and equivalent labels
/// (D_3 aliases A_3). NotADE carries no index and no orientations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Classification {
    ade: Option<(Family, u32)>,
    orientations: BTreeSet<Orientation>,
    aliases: Vec<String>,
}

impl Classification {
    pub fn not_ade() -> Self {
        Self {
            ade: None,
            orientations: BTreeSet::new(),
            aliases: Vec::new(),
        }
    }

    fn ade(
        family: Family,
        n: u32,
        orientations: BTreeSet<Orientation>,
        aliases: Vec<String>,
    ) -> Self {
        Self {
            ade: Some((family, n)),
            orientations,
            aliases,
        }
    }

    pub fn is_ade(&self) -> bool {
        self.ade.is_some()
    }

    pub fn family(&self) -> Option<Family> {
        self.ade.map(|(f, _)| f)
    }

    pub fn n(&self) -> Option<u32> {
        self.ade.map(|(_, n)| n)
    }

    pub fn orientations(&self) -> &BTreeSet<Orientation> {
        &self.orientations
    }

    pub fn aliases(&self) -> &[String] {
        &self.aliases
    }

    /// True when the classification names the descriptor's class, directly
    /// or through an alias, with a matching orientation.
    pub fn matches_descriptor(&self, d: &SingularityDescriptor) -> bool {
        if !self.orientations.contains(&d.orientation()) {
            return false;
        }
        match self.ade {
            Some((f, n)) if f == d.family() && n == d.n() => true,
            Some(_) => self.aliases.iter().any(|a| *a == d.label()),
            None => false,
        }
    }

    pub fn label(&self) -> String {
        match self.ade {
            Some((f, n)) => format!("{f}_{n}"),
            None => "NotADE".to_string(),
        }
    }
}

impl Serialize for Classification {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("Classification", 4)?;
        match self.ade {
            Some((family, n)) => {
                s.serialize_field("family", family.as_str())?;
                s.serialize_field("n", &n)?;
            }
            None => {
                s.serialize_field("family", "NotADE")?;
                s.serialize_field("n", &Option::<u32>::None)?;
            }
        }
        let orientations: Vec<&str> = self.orientations.iter().map(|o| o.as_str()).collect();
        s.serialize_field("orientations", &orientations)?;
        s.serialize_field("aliases", &self.aliases)?;
        s.end()
    }
}

/// Multiset of element orders, the isomorphism invariant used to separate
/// the order-24/48/120 clashes between binary dihedral and 2T/2O/2I.
fn order_multiset(g: &GroupAction) -> Result<BTreeMap<usize, usize>> {
    let m = g.order();
    let mut ms = BTreeMap::new();
    for e in g.elements() {
        *ms.entry(e.rotation_order_in(m)?).or_insert(0) += 1;
    }
    Ok(ms)
}

type OrderMultiset = BTreeMap<usize, usize>;
type MultisetCache = HashMap<(Family, u32), Option<OrderMultiset>>;

/// Order multisets of the standard actions, cached; classification of a
/// candidate group compares against these.
fn standard_multiset(family: Family, n: u32) -> Option<OrderMultiset> {
    static CACHE: Mutex<Option<MultisetCache>> = Mutex::new(None);
    let mut guard = CACHE.lock().expect("multiset cache poisoned");
    let cache = guard.get_or_insert_with(HashMap::new);
    cache
        .entry((family, n))
        .or_insert_with(|| {
            let d = SingularityDescriptor::new(family, n, Orientation::Preserving).ok()?;
            let g = ade_standard_action(&d).ok()?;
            order_multiset(&g).ok()
        })
        .clone()
}

/// Decides the abstract type from the order plus the multiset of element
/// orders. Returns None when the group matches no tag.
pub fn isomorphism_type(g: &GroupAction) -> Option<GroupTag> {
    let m = g.order();
    let ms = order_multiset(g).ok()?;
    if ms.keys().max().copied() == Some(m) || m == 1 {
        return Some(GroupTag::Cyclic(m as u64));
    }
    match m {
        24 if Some(&ms) == standard_multiset(Family::E, 6).as_ref() => {
            return Some(GroupTag::BinaryTetrahedral)
        }
        48 if Some(&ms) == standard_multiset(Family::E, 7).as_ref() => {
            return Some(GroupTag::BinaryOctahedral)
        }
        120 if Some(&ms) == standard_multiset(Family::E, 8).as_ref() => {
            return Some(GroupTag::BinaryIcosahedral)
        }
        _ => {}
    }
    if m.is_multiple_of(4) && m >= 8 {
        let k = m / 4;
        if Some(&ms) == standard_multiset(Family::D, k as u32 + 2).as_ref() {
            return Some(GroupTag::BinaryDihedral(k as u64));
        }
    }
    None
}

fn mod_inverse(a: i64, m: i64) -> Option<i64> {
    // Extended Euclid; None when gcd(a, m) != 1.
    let (mut t, mut new_t) = (0i64, 1i64);
    let (mut r, mut new_r) = (m, a.rem_euclid(m));
    while new_r != 0 {
        let q = r / new_r;
        (t, new_t) = (new_t, t - q * new_t);
        (r, new_r) = (new_r, r - q * new_r);
    }
    if r != 1 {
        return None;
    }
    Some(t.rem_euclid(m))
}

/// Normal form (m, c) of a free cyclic action: a generator rotates the two
/// complex planes by 2 pi (1, c)/m, and c is recorded as the canonical
/// representative min(c, c^{-1} mod m) of its plane-swap equivalence class.
pub fn cyclic_angle_signature(g: &GroupAction) -> Result<(u64, u64)> {
    if !g.is_free() {
        return Err(Error::NonFreeGroup);
    }
    let m = g.order();
    if m < 2 {
        return Err(Error::NotCyclic { order: m });
    }
    let generator = g
        .elements()
        .iter()
        .find(|e| e.rotation_order_in(m).is_ok_and(|t| t == m))
        .ok_or(Error::NotCyclic { order: m })?;
    // Signed angles: the (z1, z2) plane rotations are tl - tr and -(tl + tr).
    let (a, b_neg) = generator.plane_angle_multiples(m)?;
    let mi = m as i64;
    let b = (-b_neg).rem_euclid(mi);
    let a_inv = mod_inverse(a, mi).ok_or(Error::NonFreeGroup)?;
    let c = (a_inv * b).rem_euclid(mi);
    let c_inv = mod_inverse(c, mi).ok_or(Error::NonFreeGroup)?;
    Ok((m as u64, c.min(c_inv) as u64))
}

/// Classifies a finite free orientation-preserving action into ADE type and
/// conjugacy orientation. Unsupported groups classify as NotADE rather than
/// erroring; non-free input is an error.
pub fn classify_action(g: &GroupAction) -> Result<Classification> {
    if !g.is_free() {
        return Err(Error::NonFreeGroup);
    }
    if g.order() == 1 {
        return Ok(Classification::not_ade());
    }
    let Some(tag) = isomorphism_type(g) else {
        return Ok(Classification::not_ade());
    };
    match tag {
        GroupTag::Cyclic(_) => {
            let (m, c) = cyclic_angle_signature(g)?;
            let n = (m - 1) as u32;
            let mut orientations = BTreeSet::new();
            if c == m - 1 {
                orientations.insert(Orientation::Preserving);
            }
            if c == 1 {
                orientations.insert(Orientation::Reversing);
            }
            if orientations.is_empty() {
                return Ok(Classification::not_ade());
            }
            let aliases = if n == 3 {
                vec!["D_3".to_string()]
            } else {
                Vec::new()
            };
            Ok(Classification::ade(Family::A, n, orientations, aliases))
        }
        noncyclic => {
            let right_trivial = g
                .elements()
                .iter()
                .all(|e| e.right().is_real_unit(ANGLE_TOL));
            let left_trivial = g
                .elements()
                .iter()
                .all(|e| e.left().is_real_unit(ANGLE_TOL));
            let orientation = if right_trivial {
                Orientation::Preserving
            } else if left_trivial {
                Orientation::Reversing
            } else {
                return Ok(Classification::not_ade());
            };
            let (family, n) = match noncyclic {
                GroupTag::BinaryDihedral(k) => (Family::D, k as u32 + 2),
                GroupTag::BinaryTetrahedral => (Family::E, 6),
                GroupTag::BinaryOctahedral => (Family::E, 7),
                GroupTag::BinaryIcosahedral => (Family::E, 8),
                GroupTag::Cyclic(_) => unreachable!(),
            };
            Ok(Classification::ade(
                family,
                n,
                BTreeSet::from([orientation]),
                Vec::new(),
            ))
        }
    }
}

/// Conjugates every element by the orthogonal matrix M. det(M) = -1 flips
/// the preserving/reversing classification; det(M) = +1 preserves it.
pub fn conjugate_by(g: &GroupAction, m: &[[f64; 4]; 4]) -> Result<GroupAction> {
    let outer = isoclinic_decompose(m)?;
    let inv = outer.inverse();
    g.map_elements(|e| outer.compose(e).compose(&inv))
}
