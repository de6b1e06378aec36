//! Channel representations, the exact e^{𝓛t} oracle, distances between
//! channels and the matrix-free Lindblad applier.

mod action;
mod choi;
mod density;
mod spec;
mod superop;

pub use action::{apply_lindblad_action, default_substeps, jump_generator, JumpAction};
pub use choi::{choi_of, choi_trace_distance, is_cptp, ChoiState, CptpReport};
pub use density::DensityMatrix;
pub use spec::LindbladSpec;
pub use superop::{
    apply_superop, devectorize, exact_channel, generator_superop, liouvillian, vectorize,
    SuperOperator,
};
