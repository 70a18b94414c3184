//! Concrete compact groups, their universal covers and centers.

mod center;
mod covering;
mod descriptor;
mod element;
mod random;
mod torus;

pub use center::{covering_kernel, enumerate_center, CenterElement, CoveringKernel};
pub use covering::{
    givens_factorization, lift_so_to_spin, lift_to_cover, project_cover, spin_square_root, spin_to_rotation, PlaneRotation,
};
pub use descriptor::{center_group, spin_minus_one_coords, Family, GroupDescriptor};
pub use element::{symplectic_j, GroupElement, Payload, RealMatrix};
pub use random::{haar_orthogonal_special, haar_special_unitary, haar_symplectic, haar_unitary, random_element, random_spin};
pub use torus::{central_root_angles, central_square_root_in_torus, conjugate_to_torus, square_root, torus_payload, TorusConjugation};
