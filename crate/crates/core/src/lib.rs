//! Spectral theory of operators on finite-dimensional semi-Hilbertian spaces.
//!
//! A positive semidefinite weight A turns Cⁿ into a semi-Hilbertian space with
//! ⟨x, y⟩_A = ⟨Ax, y⟩. This crate computes A-adjoints, A-norms, A-spectra,
//! A-numerical ranges and operator classes relative to A, and ships a seeded
//! property suite that checks the known theorems about them.

pub mod classify;
pub mod error;
pub mod io;
pub mod linalg;
pub mod numrange;
pub mod opcalc;
pub mod par;
pub mod propsuite;
pub mod semispace;
pub mod spectra;
pub mod tensorprod;

pub use error::{Error, Result};
pub use linalg::{CMatrix, CVector, ToleranceConfig};
pub use opcalc::{operator, Monomial, SemiOperator};
pub use par::Exec;
pub use semispace::{MembershipClass, SemiSpace};
pub use spectra::{SpectrumMethod, SpectrumSet};
