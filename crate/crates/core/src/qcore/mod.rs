//! Dense linear algebra over multipartite state spaces.

mod density;
mod io;
mod layout;
mod linalg;
mod ops;

pub use density::{
    validate_matrix, DensityMatrix, ValidationFailure, ValidationReport, HERMITIAN_TOL, PSD_TOL,
    TRACE_TOL,
};
pub use io::{matrix_from_json, matrix_to_json, read_state, state_from_json, state_to_json, write_state, StateFile};
pub use layout::{Factor, SubsystemLayout, DEFAULT_MAX_DIM};
pub use linalg::{
    eig_hermitian, eigvals_hermitian, expm_i_hermitian, hermitian_from_params, hermitian_part,
    hermiticity_residual, max_abs_diff, orthonormality_residual, projector, trace,
    trace_norm_hermitian, unitarity_residual, ComplexMatrix, HermitianEigen, C0, C1,
    EIG_HERMITIAN_TOL,
};
pub(crate) use linalg::{eig_hermitian_unchecked, eigvals_unchecked};
pub use ops::{
    distance, kron_compose, marginal, partial_trace, partial_trace_matrix, partial_transpose,
    partial_transpose_matrix, permute_factors, Metric,
};
