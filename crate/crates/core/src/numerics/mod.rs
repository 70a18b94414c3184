//! Matrix, Clifford algebra and finite abelian group kernels shared by the
//! group models.

mod abelian;
mod clifford;
mod matrix;
mod spinor;

pub use abelian::{FiniteAbelianGroup, SquareQuotient, Subgroup};
pub use clifford::{blade_key, parse_blade_key, CliffordElement, MAX_GENERATORS};
pub use matrix::{
    balance_angles, complex_identity, diag_phases, exp_skew, frobenius_distance, is_skew_hermitian,
    is_unitary, principal_angle, unitary_eig, ComplexMatrix, UnitaryEig, CLUSTER_TOL,
};
pub use spinor::{even_from_spinor_matrix, spinor_generator, spinor_matrix, spinor_qubits};

/// Tolerance for membership checks (unitarity, determinant, skewness).
pub const MEMBERSHIP_TOL: f64 = 1e-10;
