//! Dense multi-qubit density matrices and the operations the protocols need:
//! composition, unitary and Kraus evolution, partial trace/transpose and
//! projective post-selection.

mod density;
mod gate;
mod layout;
mod projector;

pub use density::{
    DensityMatrix, COMPLETENESS_TOL, HERMITIAN_TOL, MIN_OUTCOME_PROBABILITY, PSD_TOL, TRACE_TOL,
};
pub use gate::UnitaryGate;
pub use layout::{Layout, Subsystem};
pub use projector::BlochProjector;
