//! Index of the anti-self-dual deformation complex on compact 4-orbifolds
//! with isolated ADE singularities.
//!
//! The library models finite fixed-point-free subgroups of SO(4) as
//! isoclinic quaternion pairs, classifies them into ADE type and conjugacy
//! orientation, and evaluates the orbifold index formula
//! Ind = (15 chi + 29 tau)/2 + sum of per-point correction terms, together
//! with the consistency identities relating the correction terms to
//! conformal Killing field dimension counts on R^4/Gamma and S^4/Gamma.
//!
//! The `asdindex` binary exposes the same functionality as a CLI; see the
//! crate README for the file formats.

pub mod catalog;
pub mod conjclass;
pub mod error;
pub mod indexcore;
pub mod input;
pub mod invariants;
pub mod quat;

pub use error::{Error, Result};
pub use quat::{
    Family, GroupAction, Orientation, RotationPair, SingularityDescriptor, UnitQuaternion,
};
