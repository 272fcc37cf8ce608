//! Eigenstate moduli of finite-dimensional Hamiltonian families.
//!
//! The pipeline runs from second-quantized lattice models ([`fock`],
//! [`family`]) through the symbolic Jacobian and its minor ideal to an exact
//! relation `f(ρ) = 0` among expectation values ([`moduli`]), and checks the
//! result against an independent numerical oracle ([`oracle`]).

pub mod family;
pub mod fock;
pub mod linalg;
pub mod moduli;
pub mod oracle;
pub mod surd;
pub mod tolerances;

pub use family::{
    build_dft_family, build_oscillator_family, FamilyDescriptor, FamilyKind, HamiltonianFamily,
    ModelSpec,
};
pub use fock::{
    enumerate_basis, expectation, hopping_operator, interaction_operator, number_operator,
    FockBasis, Operator, Statistics,
};
pub use linalg::{eigh, CMatrix, SpectrumResult};

pub use moduli::{compute_functional, FunctionalConfig, FunctionalResult};
pub use tolerances::Tolerances;

use eigenmoduli_poly::PolyError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CoreError {
    #[error("fermionic sector with {n} particles on {q} sites is empty")]
    EmptySector { q: usize, n: usize },
    #[error("sector with {n} particles on {q} sites exceeds the supported dimension")]
    Capacity { q: usize, n: usize },
    #[error("invalid sector: {0}")]
    InvalidSector(String),
    #[error("site {site} out of range for {sites} sites")]
    SiteOutOfRange { site: usize, sites: usize },
    #[error("hopping needs two distinct sites (got {0} twice); use the number operator")]
    SameSiteHopping(usize),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("expectation value has imaginary part {0:e}; operator is not Hermitian")]
    ComplexExpectation(f64),
    #[error("matrix is not Hermitian (defect {0:e})")]
    NotHermitian(f64),
    #[error("Jacobi iteration did not converge after {sweeps} sweeps")]
    NoConvergence { sweeps: usize },
    #[error("invalid model spec: {0}")]
    InvalidSpec(String),
    #[error("invalid family: {0}")]
    InvalidFamily(String),
    #[error("family operators are linearly dependent (Gram rank {rank} of {size})")]
    LinearlyDependent { rank: usize, size: usize },
    #[error("symbolic elimination needs real exact entries: {0}")]
    NonExactFamily(String),
    #[error("elimination ideal is empty: no relation among the expectation values")]
    EmptyElimination,
    #[error("zero state vector")]
    ZeroState,
    #[error("operation needs a two-site lattice family")]
    NotDimer,
    #[error(transparent)]
    Poly(#[from] PolyError),
}
