//! Error type shared across the library.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Quaternion components are non-finite or the norm is too far from 1.
    #[error("degenerate quaternion: components {0:?} cannot be normalized")]
    DegenerateQuaternion([f64; 4]),

    /// A 4x4 input matrix failed the orthogonality check.
    #[error(
        "matrix is not orthogonal (max |M^T M - I| = {defect:.3e}, tolerance {tolerance:.1e})"
    )]
    NonOrthogonal { defect: f64, tolerance: f64 },

    /// Generators mix determinant +1 and -1 maps where a rotation group is required.
    #[error("generators must all be orientation-preserving (determinant +1)")]
    MixedDeterminant,

    /// Group closure exceeded the element cap; the generators do not produce a
    /// finite group at the working tolerance.
    #[error("group not finite at tolerance: closure exceeded {cap} elements")]
    NotFinite { cap: usize },

    /// (family, n) outside the ADE ranges.
    #[error("invalid singularity type {family}_{n}: A needs n >= 1, D needs n >= 3, E needs n in {{6,7,8}}")]
    InvalidDescriptor { family: &'static str, n: i64 },

    /// A standard action was requested whose order exceeds the closure cap.
    #[error("group order {order} exceeds the supported cap {cap}")]
    GroupTooLarge { order: u64, cap: usize },

    /// An operation required a free action.
    #[error("group does not act freely on S^3")]
    NonFreeGroup,

    /// Cyclic-only operation applied to a non-cyclic (or trivial) group.
    #[error("group of order {order} is not cyclic of order >= 2")]
    NotCyclic { order: usize },

    /// Rotation angles could not be reconstructed as multiples of 2*pi/m.
    #[error("angle reconstruction failed: {angle} * m / (2*pi) = {scaled} is not an integer within {tolerance:.1e}")]
    AngleReconstruction {
        angle: f64,
        scaled: f64,
        tolerance: f64,
    },

    /// A character average that must be an integer drifted too far.
    #[error(
        "numerical degradation: character average {value} is not an integer within {tolerance:.1e}"
    )]
    NonIntegralAverage { value: f64, tolerance: f64 },

    /// 15*euler + 29*signature must be even for the half-integer index formula.
    #[error("parity violation: 15*{euler} + 29*{signature} is odd, index formula is not integral")]
    ParityViolation { euler: i64, signature: i64 },

    /// signature_orbifold needs a user-supplied eta on every singular point.
    #[error("eta required for singularity #{index} ({label}): eta-invariants are inputs, never computed")]
    EtaRequired { index: usize, label: String },

    /// Malformed input file or schema violation.
    #[error("parse error: {0}")]
    Parse(String),

    /// Input that parses but is outside what the tool models.
    #[error("unsupported input: {0}")]
    Unsupported(String),

    /// Two independent computation routes disagreed; indicates an internal bug.
    #[error("internal consistency failure: {0}")]
    RouteDisagreement(String),

    /// Out-of-range CLI request (tables/verify sweeps).
    #[error("bad range: {0}")]
    BadRange(String),
}

pub type Result<T> = std::result::Result<T, Error>;
