//! Constructors for the concrete states of the study and the Li-Luo
//! classical extension of separable states.

mod classical;
mod extension;
mod random;
mod rsp;
mod separable;

pub use classical::{build_classical, complete_basis, ClassicalStateSpec, ClassicalWitness, ORTHONORMAL_TOL};
pub use extension::{
    li_luo_extend, li_luo_extend_with_witness, ClassicalExtension, FlagSplit, FLAG_ORTHOGONALITY_TOL,
};
pub use random::{
    complex_gaussian, random_mixed_state, random_pure_state, random_separable, random_simplex,
    random_unitary,
};
pub use rsp::{
    build_rho_rsp, build_rsp_extension, opt_flag_split, rsp_four_term, rsp_three_term,
    rsp_three_term_literal, RspVariant,
};
pub use separable::{
    assemble_separable, bloch_qubit, BlochAngles, DecompositionFile, SeparableDecomposition,
    SeparableTerm, TermFile, WEIGHT_TOL,
};
