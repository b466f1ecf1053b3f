//! Quaternion arithmetic, SO(4) elements as isoclinic pairs, the standard
//! ADE group actions, and finite-group closure.
//!
//! R^4 is identified with the quaternions H by sending (v0, v1, v2, v3) to
//! v0 + v1 i + v2 j + v3 k, and with C^2 by q = z1 + j z2 (so z1 = v0 + v1 i
//! and z2 = v2 - v3 i). Under this identification, left multiplication by
//! e^{i t} acts as (z1, z2) -> (e^{i t} z1, e^{-i t} z2) and right
//! multiplication by e^{-i t} acts diagonally as (z1, z2) -> (e^{i t} z1,
//! e^{i t} z2).

use std::collections::HashMap;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};

/// Unit-norm tolerance after construction.
pub const NORM_TOL: f64 = 1e-12;
/// Componentwise tolerance for element equality and deduplication.
pub const EQ_TOL: f64 = 1e-9;
/// Tolerance for rational angle reconstruction and the freeness margin.
pub const ANGLE_TOL: f64 = 1e-6;
/// Orthogonality tolerance for 4x4 matrix decomposition.
pub const ORTHO_TOL: f64 = 1e-8;
/// Hard cap on group closure; an order-of-magnitude guard above the largest
/// legitimate group (120) that catches tolerance-induced drift promptly.
pub const CLOSURE_CAP: usize = 10_000;

/// Threshold below which a component counts as zero in the canonical-sign scan.
const SIGN_TOL: f64 = 1e-7;

const PHI: f64 = 1.618033988749894848204586834365638118;

/// Hamilton product on raw 4-vectors (w, x, y, z); inputs need not be unit.
fn hamilton(a: [f64; 4], b: [f64; 4]) -> [f64; 4] {
    [
        a[0] * b[0] - a[1] * b[1] - a[2] * b[2] - a[3] * b[3],
        a[0] * b[1] + a[1] * b[0] + a[2] * b[3] - a[3] * b[2],
        a[0] * b[2] - a[1] * b[3] + a[2] * b[0] + a[3] * b[1],
        a[0] * b[3] + a[1] * b[2] - a[2] * b[1] + a[3] * b[0],
    ]
}

fn conj4(a: [f64; 4]) -> [f64; 4] {
    [a[0], -a[1], -a[2], -a[3]]
}

/// True if `v` is (within 1e-9) one of the algebraic values that occur as
/// components of the standard ADE generators: 0, +-1, +-1/2, +-1/sqrt(2),
/// and quarter-integer combinations (a + b*phi)/4 of the golden ratio.
fn is_ade_algebraic(v: f64) -> bool {
    const TOL: f64 = 1e-9;
    if (v - std::f64::consts::FRAC_1_SQRT_2).abs() <= TOL
        || (v + std::f64::consts::FRAC_1_SQRT_2).abs() <= TOL
    {
        return true;
    }
    for a in -4i32..=4 {
        for b in -4i32..=4 {
            let cand = (f64::from(a) + f64::from(b) * PHI) / 4.0;
            if cand.abs() <= 1.0 + TOL && (v - cand).abs() <= TOL {
                return true;
            }
        }
    }
    false
}

/// A unit quaternion q = w + x i + y j + z k.
///
/// The `exact` tag records whether every component lies in the algebraic set
/// spanned by the standard ADE generators; it documents provenance and is
/// never used by the arithmetic.
#[derive(Debug, Clone, Copy)]
pub struct UnitQuaternion {
    w: f64,
    x: f64,
    y: f64,
    z: f64,
    exact: bool,
}

impl UnitQuaternion {
    pub const ONE: Self = Self {
        w: 1.0,
        x: 0.0,
        y: 0.0,
        z: 0.0,
        exact: true,
    };
    pub const I: Self = Self {
        w: 0.0,
        x: 1.0,
        y: 0.0,
        z: 0.0,
        exact: true,
    };
    pub const J: Self = Self {
        w: 0.0,
        x: 0.0,
        y: 1.0,
        z: 0.0,
        exact: true,
    };
    pub const K: Self = Self {
        w: 0.0,
        x: 0.0,
        y: 0.0,
        z: 1.0,
        exact: true,
    };

    /// Normalizes (w, x, y, z) to unit length. Rejects non-finite input and
    /// near-zero vectors.
    pub fn new(w: f64, x: f64, y: f64, z: f64) -> Result<Self> {
        let comps = [w, x, y, z];
        if comps.iter().any(|c| !c.is_finite()) {
            return Err(Error::DegenerateQuaternion(comps));
        }
        let norm = (w * w + x * x + y * y + z * z).sqrt();
        if !norm.is_finite() || norm < 1e-6 {
            return Err(Error::DegenerateQuaternion(comps));
        }
        Ok(Self::renormalized(w / norm, x / norm, y / norm, z / norm))
    }

    /// Internal constructor for products of existing unit quaternions;
    /// renormalizes and recomputes the exactness tag.
    fn renormalized(w: f64, x: f64, y: f64, z: f64) -> Self {
        let norm = (w * w + x * x + y * y + z * z).sqrt();
        let (w, x, y, z) = (w / norm, x / norm, y / norm, z / norm);
        let exact = [w, x, y, z].iter().all(|&c| is_ade_algebraic(c));
        Self { w, x, y, z, exact }
    }

    /// e^{i theta} = cos(theta) + sin(theta) i.
    pub fn exp_i(theta: f64) -> Self {
        Self::renormalized(theta.cos(), theta.sin(), 0.0, 0.0)
    }

    /// Builds q = alpha + j beta from complex parts alpha = (re, im),
    /// beta = (re, im).
    pub fn from_complex_parts(alpha: [f64; 2], beta: [f64; 2]) -> Result<Self> {
        Self::new(alpha[0], alpha[1], beta[0], -beta[1])
    }

    /// The complex parts (alpha, beta) of q = alpha + j beta.
    pub fn complex_parts(&self) -> ([f64; 2], [f64; 2]) {
        ([self.w, self.x], [self.y, -self.z])
    }

    pub fn w(&self) -> f64 {
        self.w
    }
    pub fn x(&self) -> f64 {
        self.x
    }
    pub fn y(&self) -> f64 {
        self.y
    }
    pub fn z(&self) -> f64 {
        self.z
    }

    /// True when every component lies in the ADE algebraic value set.
    pub fn is_exact(&self) -> bool {
        self.exact
    }

    pub fn as_array(&self) -> [f64; 4] {
        [self.w, self.x, self.y, self.z]
    }

    pub fn conjugate(&self) -> Self {
        Self {
            w: self.w,
            x: -self.x,
            y: -self.y,
            z: -self.z,
            exact: self.exact,
        }
    }

    pub fn negate(&self) -> Self {
        Self {
            w: -self.w,
            x: -self.x,
            y: -self.y,
            z: -self.z,
            exact: self.exact,
        }
    }

    /// Rotation half-angle in [0, pi]: acos of the scalar part.
    pub fn angle(&self) -> f64 {
        let v = (self.x * self.x + self.y * self.y + self.z * self.z).sqrt();
        v.atan2(self.w)
    }

    /// True if the quaternion is +1 or -1 within `tol` on the vector part.
    pub fn is_real_unit(&self, tol: f64) -> bool {
        self.x.abs() <= tol && self.y.abs() <= tol && self.z.abs() <= tol
    }

    /// Componentwise equality within `tol`.
    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        (self.w - other.w).abs() <= tol
            && (self.x - other.x).abs() <= tol
            && (self.y - other.y).abs() <= tol
            && (self.z - other.z).abs() <= tol
    }

    /// Equality up to global sign, the relation used for projective
    /// (SO(4)-pair) components.
    pub fn projectively_eq(&self, other: &Self, tol: f64) -> bool {
        self.approx_eq(other, tol) || self.approx_eq(&other.negate(), tol)
    }
}

impl fmt::Display for UnitQuaternion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{:+.6}{:+.6}i{:+.6}j{:+.6}k",
            self.w, self.x, self.y, self.z
        )
    }
}

impl Serialize for UnitQuaternion {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.as_array().serialize(s)
    }
}

/// Hamilton product of two unit quaternions, re-normalized.
pub fn quat_mul(a: &UnitQuaternion, b: &UnitQuaternion) -> UnitQuaternion {
    let p = hamilton(a.as_array(), b.as_array());
    UnitQuaternion::renormalized(p[0], p[1], p[2], p[3])
}

/// An element of O(4) written as x -> l x r^bar (conjugated = false, det +1)
/// or x -> l x^bar r^bar (conjugated = true, det -1).
///
/// (l, r) and (-l, -r) are the same map; the stored form fixes the sign so
/// that the first nonzero component of l is positive.
#[derive(Debug, Clone, Copy)]
pub struct RotationPair {
    left: UnitQuaternion,
    right: UnitQuaternion,
    conjugated: bool,
}

impl RotationPair {
    pub const IDENTITY: Self = Self {
        left: UnitQuaternion::ONE,
        right: UnitQuaternion::ONE,
        conjugated: false,
    };

    /// The determinant -1 map x -> x^bar, i.e. (z1, z2) -> (z1^bar, -z2).
    pub const CONJUGATION: Self = Self {
        left: UnitQuaternion::ONE,
        right: UnitQuaternion::ONE,
        conjugated: true,
    };

    /// A rotation x -> l x r^bar.
    pub fn rotation(left: UnitQuaternion, right: UnitQuaternion) -> Self {
        Self {
            left,
            right,
            conjugated: false,
        }
        .canonicalized()
    }

    /// A reflection x -> l x^bar r^bar.
    pub fn reflection(left: UnitQuaternion, right: UnitQuaternion) -> Self {
        Self {
            left,
            right,
            conjugated: true,
        }
        .canonicalized()
    }

    /// Left multiplication x -> l x.
    pub fn left_mul(l: UnitQuaternion) -> Self {
        Self::rotation(l, UnitQuaternion::ONE)
    }

    /// Right multiplication x -> x r^bar.
    pub fn right_mul(r: UnitQuaternion) -> Self {
        Self::rotation(UnitQuaternion::ONE, r)
    }

    fn canonicalized(self) -> Self {
        for c in self.left.as_array() {
            if c.abs() > SIGN_TOL {
                if c < 0.0 {
                    return Self {
                        left: self.left.negate(),
                        right: self.right.negate(),
                        conjugated: self.conjugated,
                    };
                }
                return self;
            }
        }
        self
    }

    pub fn left(&self) -> &UnitQuaternion {
        &self.left
    }
    pub fn right(&self) -> &UnitQuaternion {
        &self.right
    }
    pub fn conjugated(&self) -> bool {
        self.conjugated
    }

    /// Determinant of the induced 4x4 matrix: -1 iff conjugated.
    pub fn det(&self) -> f64 {
        if self.conjugated {
            -1.0
        } else {
            1.0
        }
    }

    /// Applies the map to a 4-vector.
    pub fn act(&self, v: [f64; 4]) -> [f64; 4] {
        let x = if self.conjugated { conj4(v) } else { v };
        hamilton(
            self.left.as_array(),
            hamilton(x, conj4(self.right.as_array())),
        )
    }

    /// Composition self o other (other applied first). Conjugation flags
    /// compose by XOR.
    pub fn compose(&self, other: &Self) -> Self {
        if self.conjugated {
            Self {
                left: quat_mul(&self.left, &other.right),
                right: quat_mul(&self.right, &other.left),
                conjugated: !other.conjugated,
            }
            .canonicalized()
        } else {
            Self {
                left: quat_mul(&self.left, &other.left),
                right: quat_mul(&self.right, &other.right),
                conjugated: other.conjugated,
            }
            .canonicalized()
        }
    }

    pub fn inverse(&self) -> Self {
        if self.conjugated {
            Self {
                left: self.right.conjugate(),
                right: self.left.conjugate(),
                conjugated: true,
            }
            .canonicalized()
        } else {
            Self {
                left: self.left.conjugate(),
                right: self.right.conjugate(),
                conjugated: false,
            }
            .canonicalized()
        }
    }

    /// The 4x4 matrix of the map; column c is the image of basis vector e_c.
    pub fn matrix(&self) -> [[f64; 4]; 4] {
        let mut m = [[0.0; 4]; 4];
        for c in 0..4 {
            let mut e = [0.0; 4];
            e[c] = 1.0;
            let img = self.act(e);
            for (r, row) in m.iter_mut().enumerate() {
                row[c] = img[r];
            }
        }
        m
    }

    /// Half-angles (theta_l, theta_r) of the two factors, each in [0, pi].
    pub fn angles(&self) -> (f64, f64) {
        (self.left.angle(), self.right.angle())
    }

    /// min |lambda - 1| over the four eigenvalues e^{+-i(tl - tr)},
    /// e^{+-i(tl + tr)} of the rotation. Zero exactly when the element has a
    /// fixed nonzero vector. Rotations only.
    pub fn min_eigenvalue_distance_to_one(&self) -> f64 {
        debug_assert!(!self.conjugated);
        let (tl, tr) = self.angles();
        let d1 = 2.0 * ((tl - tr) / 2.0).sin().abs();
        let d2 = 2.0 * ((tl + tr) / 2.0).sin().abs();
        d1.min(d2)
    }

    pub fn is_identity(&self) -> bool {
        self.approx_eq(&Self::IDENTITY, EQ_TOL)
    }

    /// The two plane rotation angles as multiples of 2*pi/m: rounds
    /// m*(tl - tr)/(2 pi) and m*(tl + tr)/(2 pi) into Z/m. Errors when the
    /// angles are not multiples of 2*pi/m within the reconstruction
    /// tolerance, which cannot happen for elements of a closed group of
    /// order dividing m.
    pub fn plane_angle_multiples(&self, m: usize) -> Result<(i64, i64)> {
        debug_assert!(!self.conjugated);
        let (tl, tr) = self.angles();
        let tau = std::f64::consts::TAU;
        let a = reconstruct_integer(m, (tl - tr) / tau * m as f64)?;
        let b = reconstruct_integer(m, (tl + tr) / tau * m as f64)?;
        Ok((a, b))
    }

    /// Order of the element inside a group of order m, computed exactly from
    /// the reconstructed plane angles: m / gcd(a, b, m).
    pub fn rotation_order_in(&self, m: usize) -> Result<usize> {
        let (a, b) = self.plane_angle_multiples(m)?;
        let g = gcd_i64(gcd_i64(a, b), m as i64);
        Ok(m / g as usize)
    }

    /// Equality of canonical forms within `tol` (flags must match exactly).
    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.conjugated == other.conjugated
            && ((self.left.approx_eq(&other.left, tol) && self.right.approx_eq(&other.right, tol))
                || (self.left.approx_eq(&other.left.negate(), tol)
                    && self.right.approx_eq(&other.right.negate(), tol)))
    }
}

fn gcd_i64(a: i64, b: i64) -> i64 {
    num_integer::gcd(a, b)
}

/// Rounds `scaled` to the nearest integer in Z/m, requiring it to be within
/// the angle-reconstruction tolerance of an integer.
fn reconstruct_integer(m: usize, scaled: f64) -> Result<i64> {
    let r = scaled.round();
    if (scaled - r).abs() > ANGLE_TOL {
        return Err(Error::AngleReconstruction {
            angle: scaled * std::f64::consts::TAU / m as f64,
            scaled,
            tolerance: ANGLE_TOL,
        });
    }
    Ok((r as i64).rem_euclid(m as i64))
}

impl Serialize for RotationPair {
    /// Serializes as the generator-file schema: 8 reals plus the flag.
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("RotationPair", 3)?;
        st.serialize_field("left", &self.left)?;
        st.serialize_field("right", &self.right)?;
        st.serialize_field("conjugated", &self.conjugated)?;
        st.end()
    }
}

/// Smallest t >= 1 with p^t = identity, or None if not found within `cap`.
/// Brute-force companion to [`RotationPair::rotation_order_in`].
pub fn rotation_order(p: &RotationPair, cap: usize) -> Option<usize> {
    let mut acc = *p;
    for t in 1..=cap {
        if acc.is_identity() {
            return Some(t);
        }
        acc = acc.compose(p);
    }
    None
}

/// Identifies vectors and complex pairs: z1 = v0 + v1 i, z2 = v2 - v3 i.
pub fn vector_from_complex_pair(z1: [f64; 2], z2: [f64; 2]) -> [f64; 4] {
    [z1[0], z1[1], z2[0], -z2[1]]
}

pub fn complex_pair_from_vector(v: [f64; 4]) -> ([f64; 2], [f64; 2]) {
    ([v[0], v[1]], [v[2], -v[3]])
}

/// Quantized dedup key; the hash fast path backing the tolerance scan.
type QuantKey = [i64; 9];

fn quant_key(p: &RotationPair) -> QuantKey {
    let l = p.left.as_array();
    let r = p.right.as_array();
    let mut k = [0i64; 9];
    for i in 0..4 {
        k[i] = (l[i] / 1e-6).round() as i64;
        k[4 + i] = (r[i] / 1e-6).round() as i64;
    }
    k[8] = i64::from(p.conjugated);
    k
}

/// Element store with tolerance-aware deduplication. Lookups go through a
/// quantized hash first; misses fall back to a linear scan so that values
/// straddling a quantization boundary are still merged.
struct ElementSet {
    elems: Vec<RotationPair>,
    index: HashMap<QuantKey, usize>,
}

impl ElementSet {
    fn new() -> Self {
        Self {
            elems: Vec::new(),
            index: HashMap::new(),
        }
    }

    /// Returns true if the element was newly inserted.
    fn insert(&mut self, p: RotationPair) -> bool {
        let key = quant_key(&p);
        if self.index.contains_key(&key) {
            return false;
        }
        if let Some(i) = self.elems.iter().position(|e| e.approx_eq(&p, EQ_TOL)) {
            self.index.insert(key, i);
            return false;
        }
        self.elems.push(p);
        self.index.insert(key, self.elems.len() - 1);
        true
    }
}

/// A finite subgroup of SO(4): the full element list (closed under
/// composition, identity first), the generating sublist, and whether the
/// action on S^3 is free.
#[derive(Debug, Clone)]
pub struct GroupAction {
    elements: Vec<RotationPair>,
    generators: Vec<RotationPair>,
    free: bool,
}

impl GroupAction {
    pub fn elements(&self) -> &[RotationPair] {
        &self.elements
    }

    pub fn generators(&self) -> &[RotationPair] {
        &self.generators
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn is_free(&self) -> bool {
        self.free
    }

    pub fn contains(&self, p: &RotationPair) -> bool {
        self.elements.iter().any(|e| e.approx_eq(p, EQ_TOL))
    }

    /// Set equality up to tolerance.
    pub fn same_elements(&self, other: &GroupAction) -> bool {
        self.order() == other.order() && other.elements.iter().all(|e| self.contains(e))
    }

    /// Rebuilds the group with every element mapped by `f`; used for
    /// conjugation, where `f` is an automorphism of the element set.
    pub(crate) fn map_elements(
        &self,
        f: impl Fn(&RotationPair) -> RotationPair,
    ) -> Result<GroupAction> {
        let elements: Vec<RotationPair> = self.elements.iter().map(&f).collect();
        if elements.iter().any(|e| e.conjugated()) {
            return Err(Error::MixedDeterminant);
        }
        let generators = self.generators.iter().map(&f).collect();
        let free = elements_are_free(&elements);
        Ok(GroupAction {
            elements,
            generators,
            free,
        })
    }
}

fn elements_are_free(elements: &[RotationPair]) -> bool {
    elements
        .iter()
        .filter(|e| !e.is_identity())
        .all(|e| e.min_eigenvalue_distance_to_one() > ANGLE_TOL)
}

/// Closes a generator list under composition (BFS over right multiplication
/// by generators; a finite closed set containing the identity is a group).
/// Errors if the closure exceeds [`CLOSURE_CAP`] elements.
pub fn generate_group(gens: &[RotationPair]) -> Result<GroupAction> {
    if gens.iter().any(|g| g.conjugated()) {
        return Err(Error::MixedDeterminant);
    }
    let mut set = ElementSet::new();
    set.insert(RotationPair::IDENTITY);
    let mut i = 0;
    while i < set.elems.len() {
        let e = set.elems[i];
        for g in gens {
            let p = e.compose(g);
            if set.insert(p) && set.elems.len() > CLOSURE_CAP {
                return Err(Error::NotFinite { cap: CLOSURE_CAP });
            }
        }
        i += 1;
    }
    let free = elements_are_free(&set.elems);
    Ok(GroupAction {
        elements: set.elems,
        generators: gens.to_vec(),
        free,
    })
}

/// ADE singularity families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Family {
    A,
    D,
    E,
}

impl Family {
    pub fn as_str(&self) -> &'static str {
        match self {
            Family::A => "A",
            Family::D => "D",
            Family::E => "E",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Conjugacy orientation of a group action (Def. of conjugate actions).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Orientation {
    Preserving,
    Reversing,
}

impl Orientation {
    pub fn flipped(&self) -> Self {
        match self {
            Orientation::Preserving => Orientation::Reversing,
            Orientation::Reversing => Orientation::Preserving,
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Orientation::Preserving => "preserving",
            Orientation::Reversing => "reversing",
        }
    }
}

impl fmt::Display for Orientation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Names an ADE-conjugacy class of orbifold point: family, index, orientation,
/// and an optional user-supplied eta-invariant of S^3/Gamma. Eta is carried,
/// never computed.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct SingularityDescriptor {
    family: Family,
    n: u32,
    orientation: Orientation,
    #[serde(skip_serializing_if = "Option::is_none")]
    eta: Option<f64>,
}

impl SingularityDescriptor {
    /// Validates the index range: A_n needs n >= 1, D_n needs n >= 3,
    /// E_n needs n in {6, 7, 8}.
    pub fn new(family: Family, n: u32, orientation: Orientation) -> Result<Self> {
        let ok = match family {
            Family::A => n >= 1,
            Family::D => n >= 3,
            Family::E => (6..=8).contains(&n),
        };
        if !ok {
            return Err(Error::InvalidDescriptor {
                family: family.as_str(),
                n: i64::from(n),
            });
        }
        Ok(Self {
            family,
            n,
            orientation,
            eta: None,
        })
    }

    pub fn with_eta(mut self, eta: f64) -> Self {
        self.eta = Some(eta);
        self
    }

    pub fn family(&self) -> Family {
        self.family
    }
    pub fn n(&self) -> u32 {
        self.n
    }
    pub fn orientation(&self) -> Orientation {
        self.orientation
    }
    pub fn eta(&self) -> Option<f64> {
        self.eta
    }

    pub fn flipped(&self) -> Self {
        Self {
            orientation: self.orientation.flipped(),
            ..*self
        }
    }

    /// |Gamma|: A_n -> n+1, D_n -> 4(n-2), E_6 -> 24, E_7 -> 48, E_8 -> 120.
    pub fn group_order(&self) -> u64 {
        match self.family {
            Family::A => u64::from(self.n) + 1,
            Family::D => 4 * (u64::from(self.n) - 2),
            Family::E => match self.n {
                6 => 24,
                7 => 48,
                _ => 120,
            },
        }
    }

    pub fn label(&self) -> String {
        format!("{}_{}", self.family, self.n)
    }
}

impl fmt::Display for SingularityDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ({})", self.label(), self.orientation)
    }
}

fn half_quat(w: f64, x: f64, y: f64, z: f64) -> UnitQuaternion {
    UnitQuaternion::renormalized(w / 2.0, x / 2.0, y / 2.0, z / 2.0)
}

/// Left-multiplication generators of the orientation-preserving standard
/// action of the given family.
fn standard_left_generators(family: Family, n: u32) -> Vec<UnitQuaternion> {
    use std::f64::consts::PI;
    match family {
        // Matrix form of the cyclic action: order n+1 for A_n.
        Family::A => vec![UnitQuaternion::exp_i(2.0 * PI / f64::from(n + 1))],
        // Binary dihedral D*_{n-2}: e^{i pi/(n-2)} and j.
        Family::D => vec![
            UnitQuaternion::exp_i(PI / f64::from(n - 2)),
            UnitQuaternion::J,
        ],
        Family::E => {
            // Binary tetrahedral: generated inside the unit Hurwitz quaternions.
            let mut gens = vec![UnitQuaternion::I, half_quat(1.0, 1.0, 1.0, 1.0)];
            match n {
                6 => {}
                // Binary octahedral: adjoin (1 + i)/sqrt(2).
                7 => gens.push(UnitQuaternion::exp_i(PI / 4.0)),
                // Binary icosahedral: icosian generators.
                _ => {
                    gens = vec![
                        half_quat(-1.0, 1.0, 1.0, 1.0),
                        UnitQuaternion::renormalized(1.0 / PHI / 2.0, 0.0, PHI / 2.0, 0.5),
                    ]
                }
            }
            gens
        }
    }
}

/// The standard ADE action for a descriptor: left multiplications for the
/// orientation-preserving classes, and their conjugates by x -> x^bar (pure
/// right multiplications) for the orientation-reversing classes. The result
/// is closed, free, and has the tabulated order.
pub fn ade_standard_action(d: &SingularityDescriptor) -> Result<GroupAction> {
    let expected = d.group_order();
    if expected as usize > CLOSURE_CAP {
        return Err(Error::GroupTooLarge {
            order: expected,
            cap: CLOSURE_CAP,
        });
    }
    let lefts = standard_left_generators(d.family(), d.n());
    let gens: Vec<RotationPair> = match d.orientation() {
        Orientation::Preserving => lefts.into_iter().map(RotationPair::left_mul).collect(),
        Orientation::Reversing => lefts.into_iter().map(RotationPair::right_mul).collect(),
    };
    let group = generate_group(&gens)?;
    if group.order() as u64 != expected {
        return Err(Error::RouteDisagreement(format!(
            "standard {} generators closed to order {} instead of {}",
            d.label(),
            group.order(),
            expected
        )));
    }
    Ok(group)
}

fn mat_mul_transpose(m: &[[f64; 4]; 4]) -> [[f64; 4]; 4] {
    let mut out = [[0.0; 4]; 4];
    for (i, row_out) in out.iter_mut().enumerate() {
        for (j, cell) in row_out.iter_mut().enumerate() {
            *cell = (0..4).map(|k| m[k][i] * m[k][j]).sum();
        }
    }
    out
}

fn orthogonality_defect(m: &[[f64; 4]; 4]) -> f64 {
    let mtm = mat_mul_transpose(m);
    let mut defect: f64 = 0.0;
    for (i, row) in mtm.iter().enumerate() {
        for (j, &v) in row.iter().enumerate() {
            let target = if i == j { 1.0 } else { 0.0 };
            defect = defect.max((v - target).abs());
        }
    }
    defect
}

fn det3(m: [[f64; 3]; 3]) -> f64 {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

fn det4(m: &[[f64; 4]; 4]) -> f64 {
    let mut det = 0.0;
    for c in 0..4 {
        let mut minor = [[0.0; 3]; 3];
        for r in 1..4 {
            let mut cc = 0;
            for (k, &val) in m[r].iter().enumerate() {
                if k == c {
                    continue;
                }
                minor[r - 1][cc] = val;
                cc += 1;
            }
        }
        let sign = if c % 2 == 0 { 1.0 } else { -1.0 };
        det += sign * m[0][c] * det3(minor);
    }
    det
}

/// Unit quaternion s with x -> s x s^bar realizing the 3x3 rotation `r` on
/// the imaginary subspace (Shepperd's branch method).
fn quaternion_from_rotation3(r: &[[f64; 3]; 3]) -> UnitQuaternion {
    let trace = r[0][0] + r[1][1] + r[2][2];
    let (w, x, y, z);
    if trace > 0.0 {
        let s = (trace + 1.0).sqrt() * 2.0;
        w = s / 4.0;
        x = (r[2][1] - r[1][2]) / s;
        y = (r[0][2] - r[2][0]) / s;
        z = (r[1][0] - r[0][1]) / s;
    } else if r[0][0] > r[1][1] && r[0][0] > r[2][2] {
        let s = (1.0 + r[0][0] - r[1][1] - r[2][2]).sqrt() * 2.0;
        w = (r[2][1] - r[1][2]) / s;
        x = s / 4.0;
        y = (r[0][1] + r[1][0]) / s;
        z = (r[0][2] + r[2][0]) / s;
    } else if r[1][1] > r[2][2] {
        let s = (1.0 + r[1][1] - r[0][0] - r[2][2]).sqrt() * 2.0;
        w = (r[0][2] - r[2][0]) / s;
        x = (r[0][1] + r[1][0]) / s;
        y = s / 4.0;
        z = (r[1][2] + r[2][1]) / s;
    } else {
        let s = (1.0 + r[2][2] - r[0][0] - r[1][1]).sqrt() * 2.0;
        w = (r[1][0] - r[0][1]) / s;
        x = (r[0][2] + r[2][0]) / s;
        y = (r[1][2] + r[2][1]) / s;
        z = s / 4.0;
    }
    UnitQuaternion::renormalized(w, x, y, z)
}

/// Factors a 4x4 orthogonal matrix into an isoclinic quaternion pair, with
/// the reflection part detected by the determinant.
///
/// For det +1 this is the Cayley factorization M(x) = l x r^bar: l r^bar is
/// the image of 1, and stripping it off leaves a rotation fixing 1, i.e. a
/// conjugation on the imaginary subspace.
pub fn isoclinic_decompose(m: &[[f64; 4]; 4]) -> Result<RotationPair> {
    let defect = orthogonality_defect(m);
    if defect > ORTHO_TOL {
        return Err(Error::NonOrthogonal {
            defect,
            tolerance: ORTHO_TOL,
        });
    }
    let conjugated = det4(m) < 0.0;
    // For reflections, decompose M o C instead (negate columns 1..3).
    let mut mm = *m;
    if conjugated {
        for row in &mut mm {
            for cell in row.iter_mut().skip(1) {
                *cell = -*cell;
            }
        }
    }
    // p = M(1) = l r^bar.
    let p = UnitQuaternion::new(mm[0][0], mm[1][0], mm[2][0], mm[3][0])?;
    // N = p^bar o M fixes 1; its imaginary 3x3 block is conjugation by s.
    let pc = p.conjugate().as_array();
    let mut n = [[0.0; 4]; 4];
    for c in 0..4 {
        let col = [mm[0][c], mm[1][c], mm[2][c], mm[3][c]];
        let img = hamilton(pc, col);
        for (r, row) in n.iter_mut().enumerate() {
            row[c] = img[r];
        }
    }
    let mut block = [[0.0; 3]; 3];
    for r in 0..3 {
        for c in 0..3 {
            block[r][c] = n[r + 1][c + 1];
        }
    }
    let s = quaternion_from_rotation3(&block);
    let left = quat_mul(&p, &s);
    let pair = if conjugated {
        RotationPair::reflection(left, s)
    } else {
        RotationPair::rotation(left, s)
    };
    Ok(pair)
}
