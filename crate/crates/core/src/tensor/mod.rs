//! Dense complex linear algebra and the fixed permutation operators.

mod eigen;
mod expm;
mod matrix;
mod ops;

pub use eigen::{hermitian_eigenvalues, min_eigenvalue, schatten_norm, trace_norm};
pub use expm::mat_exp;
pub(crate) use matrix::check_entries;
pub use matrix::{max_entries, set_max_entries, vec_inner, vec_norm, Matrix, DEFAULT_MAX_ENTRIES};
pub use ops::{
    cycswap_operator, gamma_vector, hs_inner, kron, kron_all, kron_vec, partial_trace,
    permute_subsystems, permute_vector, permuted_dims, swap_operator, SystemDims,
};
