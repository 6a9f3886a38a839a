//! Scalar correlation measures. Entropic quantities are in bits.

mod classicality;
mod discord;
mod entropy;
mod negativity;
mod result;
mod two_qubit;

pub use classicality::{
    classical_basis, is_classical, local_dephase, BasisCandidate, ClassicalityReport, Verdict,
    CLASSICAL_TOL,
};
pub use discord::{discord_one_sided, DISCORD_DIM_CAP};
pub(crate) use discord::ZERO_FLOOR;
pub use entropy::{entropy, mutual_information, relative_entropy, shannon_bits};
pub use negativity::{negativity, negativity_trace_norm};
pub use result::{Diagnostics, MeasureResult, OptBudget};
pub use two_qubit::{correlation_data, geometric_discord, pauli, rsp_payoff, CorrelationData};
