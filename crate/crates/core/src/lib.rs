//! Majorana operator algebra, interacting Majorana chain and ladder models,
//! exact diagonalization, and edge zero-mode solvers.
//!
//! The symbolic layer ([`algebra`]) is exact on signs and site bookkeeping;
//! everything numerical is built on top of it:
//!
//! * [`model`] builds Hamiltonians and named operator families,
//! * [`fock`] compiles operators to dense Fock-space matrices,
//! * [`spectral`] diagonalizes, clusters degeneracies and handles quadratic forms,
//! * [`zero_modes`] finds edge zero modes by series expansion and by the
//!   kernel of the adjoint action,
//! * [`edge_index`] runs the ladder degeneracy and Z₂ index experiments.

pub mod algebra;
pub mod edge_index;
pub mod error;
pub mod fock;
pub mod linalg;
pub mod model;
pub mod spectral;
pub mod zero_modes;

pub use algebra::{
    anticommutator, commutator, multiply, Complex, HermitianBasisElement, MajoranaMonomial,
    MajoranaOperator, Parity, SiteSet,
};
pub use error::{MajoranaError, Result};
pub use model::{InteractionSpec, ModelSpec};
