//! Photon-to-spin transfer: each photon interacts with its spin through
//! `U = diag(1, -1, -1, -1)`, passes a 50:50 beamsplitter, is detected and
//! traced out; Hadamards and an outcome-dependent Pauli-like correction leave
//! the spins in the photons' state.

use std::f64::consts::FRAC_PI_2;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::{alpha_initial_state, beta_memory_state, run_alpha_from, run_beta_from, EdssProtocol, Measurement, ProtocolOutcome};
use crate::channels::NoiseScenario;
use crate::error::{Error, Result};
use crate::linalg::{self, c, CMatrix, ONE, ZERO};
use crate::qstate::{BlochProjector, DensityMatrix, Layout, UnitaryGate};

pub const PHOTON_A: &str = "P_A";
pub const PHOTON_B: &str = "P_B";

/// Detector click behind the beamsplitter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BeamsplitterOutcome {
    Plus,
    Minus,
}

impl BeamsplitterOutcome {
    pub const ALL: [BeamsplitterOutcome; 2] = [BeamsplitterOutcome::Plus, BeamsplitterOutcome::Minus];

    /// Photon-mode projector `(I +- sigma_y)/2` the click corresponds to.
    pub fn projector(self) -> BlochProjector {
        match self {
            BeamsplitterOutcome::Plus => BlochProjector::y_basis(0),
            BeamsplitterOutcome::Minus => BlochProjector::y_basis(1),
        }
    }

    pub fn correction_phase(self) -> f64 {
        match self {
            BeamsplitterOutcome::Plus => -FRAC_PI_2,
            BeamsplitterOutcome::Minus => FRAC_PI_2,
        }
    }

    /// `[[0, 1], [e^{i phase}, 0]]` applied to the spin after the Hadamard.
    pub fn correction(self) -> CMatrix {
        let e = num_complex::Complex64::from_polar(1.0, self.correction_phase());
        linalg::from_rows(&[&[ZERO, ONE], &[e, ZERO]])
    }

    pub fn label(self) -> &'static str {
        match self {
            BeamsplitterOutcome::Plus => "A+",
            BeamsplitterOutcome::Minus => "A-",
        }
    }
}

impl fmt::Display for BeamsplitterOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Controlled sign acting on `(photon, spin)`: `+1` only on `|0>|0>`.
pub fn spin_photon_gate(photon: &str, spin: &str) -> UnitaryGate {
    let m = CMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![ONE, -ONE, -ONE, -ONE]));
    UnitaryGate::new(m, &[photon, spin]).expect("diagonal of phases is unitary")
}

/// Maps `P_A, P_B` of `rho` onto fresh spins `A, B` for the heralded outcome
/// pair `(j, k)`. Other subsystems are carried along untouched.
/// Returns the state on `A, B, <others>` and the herald probability.
pub fn zalm_transfer(
    rho: &DensityMatrix,
    j: BeamsplitterOutcome,
    k: BeamsplitterOutcome,
) -> Result<(DensityMatrix, f64)> {
    let spectators: Vec<&str> = rho.labels().into_iter().filter(|l| *l != PHOTON_A && *l != PHOTON_B).collect();
    for p in [PHOTON_A, PHOTON_B] {
        if rho.layout().dim_of(p)? != 2 {
            return Err(Error::DimensionMismatch(format!("photon `{p}` must be a qubit")));
        }
    }
    let plus = BlochProjector::x_basis(0).ket();
    let spins = DensityMatrix::pure(&[plus[0] * plus[0], plus[0] * plus[1], plus[1] * plus[0], plus[1] * plus[1]], Layout::qubits(&["A", "B"]))?;
    let mut state = rho.tensor(&spins)?;
    state = state.apply_unitary(&spin_photon_gate(PHOTON_A, "A"))?;
    state = state.apply_unitary(&spin_photon_gate(PHOTON_B, "B"))?;

    let (state, p_j) = state.postselect(&j.projector(), PHOTON_A)?;
    let (state, p_k) = state.postselect(&k.projector(), PHOTON_B)?;

    let state = state
        .apply_unitary(&UnitaryGate::hadamard("A"))?
        .apply_unitary(&UnitaryGate::hadamard("B"))?
        .apply_unitary(&UnitaryGate::new(j.correction(), &["A"])?)?
        .apply_unitary(&UnitaryGate::new(k.correction(), &["B"])?)?;

    let mut order = vec!["A", "B"];
    order.extend(spectators);
    Ok((state.permute(&order)?, p_j * p_k))
}

#[derive(Debug, Clone)]
pub struct ZalmMapReport {
    pub outcome: (BeamsplitterOutcome, BeamsplitterOutcome),
    pub probability: f64,
    /// Spin state on `A, B`.
    pub final_state: DensityMatrix,
    /// Trace distance between the spin state and the input photon state.
    pub transfer_error: f64,
}

/// Runs the transfer for all four herald outcomes of a two-photon state on `P_A, P_B`.
pub fn zalm_map(rho_photons: &DensityMatrix) -> Result<Vec<ZalmMapReport>> {
    if rho_photons.layout().len() != 2 {
        return Err(Error::DimensionMismatch(format!(
            "expected a two-photon state, got {} subsystems",
            rho_photons.layout().len()
        )));
    }
    let photons = rho_photons.permute(&[PHOTON_A, PHOTON_B])?;
    let mut reports = Vec::with_capacity(4);
    for j in BeamsplitterOutcome::ALL {
        for k in BeamsplitterOutcome::ALL {
            let (final_state, probability) = zalm_transfer(&photons, j, k)?;
            let transfer_error = linalg::trace_distance(final_state.data(), photons.data());
            reports.push(ZalmMapReport { outcome: (j, k), probability, final_state, transfer_error });
        }
    }
    Ok(reports)
}

/// Loads the protocol's memory resource through the photonic source (herald
/// `A+ A+`) and then runs the protocol. For alpha the classically correlated
/// carrier rides along as a spectator of the transfer.
pub fn run_edss_via_zalm(
    protocol: EdssProtocol,
    scenario: &NoiseScenario,
    iterations: usize,
    measurement: Measurement,
) -> Result<ProtocolOutcome> {
    let herald = BeamsplitterOutcome::Plus;
    match protocol {
        EdssProtocol::Alpha => {
            let photonic = alpha_initial_state().relabel(&[PHOTON_A, PHOTON_B, "K"])?;
            let (memories, _) = zalm_transfer(&photonic, herald, herald)?;
            run_alpha_from(&memories, scenario, measurement)
        }
        EdssProtocol::Beta => {
            let photonic = beta_memory_state().relabel(&[PHOTON_A, PHOTON_B])?;
            let (memories, _) = zalm_transfer(&photonic, herald, herald)?;
            run_beta_from(&memories, scenario, iterations, measurement)
        }
    }
}

pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

const RANDOM_STATE_COMPONENTS: usize = 4;

/// Mixture of four Haar-random pure states on `P_A, P_B` (normalised complex
/// Gaussian amplitudes) with weights drawn uniformly and normalised.
/// Draw order: per component, 4 (re, im) amplitude pairs, then its weight.
pub fn random_two_qubit_state<R: Rng + ?Sized>(rng: &mut R) -> DensityMatrix {
    let mut m = CMatrix::zeros(4, 4);
    let mut total_weight = 0.0;
    for _ in 0..RANDOM_STATE_COMPONENTS {
        let amps: Vec<_> = (0..4)
            .map(|_| {
                let re: f64 = rng.sample(StandardNormal);
                let im: f64 = rng.sample(StandardNormal);
                c(re, im)
            })
            .collect();
        let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        let ket: Vec<_> = amps.iter().map(|a| a / norm).collect();
        let w: f64 = rng.random();
        total_weight += w;
        m += linalg::outer(&ket) * c(w, 0.0);
    }
    m *= c(1.0 / total_weight, 0.0);
    DensityMatrix::from_parts(m, Layout::qubits(&[PHOTON_A, PHOTON_B])).expect("4x4 on two qubits")
}
