//! The two separable-carrier protocols, direct Bell-pair distribution, the
//! eavesdropper scan and the photon-to-spin (ZALM) transfer.

mod adversary;
mod runs;
mod states;
mod zalm;

use std::fmt;
use std::str::FromStr;

pub use adversary::{adversary_discord, adversary_encoded_state, adversary_scan, AdversaryScan};
pub use runs::{
    distribution_audit, run_alpha, run_alpha_from, run_beta, run_beta_from, run_ded, BoundAudit,
    Stage,
};
pub use states::{
    alpha_initial_state, bell_phi_plus, bell_phi_plus_ket, beta_initial_state, beta_memory_state,
    carrier_state, BETA_CARRIER_CX,
};
pub use zalm::{
    random_two_qubit_state, run_edss_via_zalm, seeded_rng, spin_photon_gate, zalm_map,
    zalm_transfer, BeamsplitterOutcome, ZalmMapReport, PHOTON_A, PHOTON_B,
};

use crate::error::Error;
use crate::qstate::{BlochProjector, DensityMatrix};

/// Iteration counts beyond this are allowed but marked `extended`.
pub const MAX_STUDIED_ITERATIONS: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EdssProtocol {
    /// CNOT encode/decode on a classically correlated resource.
    Alpha,
    /// CPHASE encode/decode with an uncorrelated carrier.
    Beta,
}

impl EdssProtocol {
    /// Carrier outcome that localises the most entanglement without noise.
    pub fn nominal_projector(self) -> BlochProjector {
        match self {
            EdssProtocol::Alpha => BlochProjector::computational(0),
            EdssProtocol::Beta => BlochProjector::x_basis(1),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            EdssProtocol::Alpha => "alpha",
            EdssProtocol::Beta => "beta",
        }
    }
}

impl fmt::Display for EdssProtocol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for EdssProtocol {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s.to_ascii_lowercase().as_str() {
            "alpha" => Ok(EdssProtocol::Alpha),
            "beta" => Ok(EdssProtocol::Beta),
            other => Err(Error::InvalidParameter(format!("unknown protocol `{other}`"))),
        }
    }
}

/// How Bob measures the carrier before post-selecting.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Measurement {
    Projector(BlochProjector),
    /// The protocol's noiseless-optimal outcome.
    Nominal,
    /// Re-optimised per state to maximise the post-selected A:B negativity.
    Optimal,
}

#[derive(Debug, Clone)]
pub struct ProtocolOutcome {
    /// Post-selected state of the memories `A, B`.
    pub final_state: DensityMatrix,
    /// Product of the per-iteration probabilities.
    pub success_probability: f64,
    pub iteration_probabilities: Vec<f64>,
    /// A:B negativity after each iteration.
    pub iteration_negativities: Vec<f64>,
    pub negativity_ab: f64,
    /// K:AB negativity recorded after each stage.
    pub carrier_negativity_trace: Vec<Stage>,
    /// Carrier projector of the last iteration; `None` for direct distribution.
    pub measurement: Option<BlochProjector>,
    pub iteration_measurements: Vec<BlochProjector>,
    /// State of `A, B, K` while the carrier is in flight, one per transmission.
    pub in_flight: Vec<DensityMatrix>,
    /// More beta iterations than were studied.
    pub extended: bool,
}
