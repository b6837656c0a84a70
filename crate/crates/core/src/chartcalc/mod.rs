//! Classical tensor calculus over a single polynomial coordinate chart:
//! multivector fields, differential forms, the exterior derivative, Lie and
//! Schouten–Nijenhuis brackets, and type decomposition relative to an almost
//! complex structure on the tangent bundle.

mod alt;
mod checks;
mod endo;
mod fields;

pub use alt::{sort_sign, AltTensor};
pub use checks::{bivector_sharp, holomorphic_poisson_check, hyperkahler_forms};
pub use endo::{dbar, dpartial, nijenhuis_tangent, type_project, NijTensor, TanEndo};
pub use fields::{ext_d, interior, lie_bracket, lie_derivative, schouten, DiffForm, MultiVec};

use crate::scalars::{Scalar, Vars};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ChartError {
    #[error("endomorphism does not square to -1")]
    NotAlmostComplex,
    #[error("almost complex structure has nonvanishing Nijenhuis torsion")]
    NotIntegrable,
    #[error("endomorphisms do not satisfy the quaternion relations")]
    NotQuaternionic,
    #[error("metric matrix is not symmetric")]
    MetricNotSymmetric,
}

/// A polynomial coordinate chart: just an ordered list of coordinate names.
/// Cheap to clone; two charts agree iff their coordinate lists agree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Chart {
    coords: Vars,
}

impl Chart {
    pub fn new(coords: &[&str]) -> Chart {
        assert!(!coords.is_empty());
        let mut seen = std::collections::BTreeSet::new();
        assert!(coords.iter().all(|c| seen.insert(*c)), "coordinate names must be distinct");
        Chart { coords: crate::scalars::vars(coords) }
    }

    pub fn from_vars(coords: Vars) -> Chart {
        Chart { coords }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn vars(&self) -> Vars {
        self.coords.clone()
    }

    pub fn names(&self) -> &[String] {
        &self.coords
    }

    /// The coordinate function x_a as a scalar.
    pub fn coord(&self, a: usize) -> Scalar {
        Scalar::coord(self.vars(), a)
    }

    pub fn zero(&self) -> Scalar {
        Scalar::zero(self.vars())
    }

    pub fn one(&self) -> Scalar {
        Scalar::one(self.vars())
    }
}
