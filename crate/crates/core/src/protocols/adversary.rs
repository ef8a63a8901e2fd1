use rayon::prelude::*;

use super::{alpha_initial_state, beta_initial_state, EdssProtocol, BETA_CARRIER_CX};
use crate::correlations::discord;
use crate::error::{Error, Result};
use crate::qstate::{BlochProjector, DensityMatrix, UnitaryGate};

/// State of `A, B, K` right after encoding, when Eve intercepts the carrier.
pub fn adversary_encoded_state(protocol: EdssProtocol) -> Result<DensityMatrix> {
    match protocol {
        EdssProtocol::Alpha => alpha_initial_state().apply_unitary(&UnitaryGate::cnot("A", "K")),
        EdssProtocol::Beta => beta_initial_state(BETA_CARRIER_CX)?.apply_unitary(&UnitaryGate::cphase("A", "K")),
    }
}

/// Eve measures K in the basis `{proj, I - proj}`; returns the A:B discord
/// averaged over her outcomes, `sum_i p_i D(rho_AB|i)`.
pub fn adversary_discord(protocol: EdssProtocol, proj: &BlochProjector) -> Result<f64> {
    outcome_averaged_discord(&adversary_encoded_state(protocol)?, proj)
}

fn outcome_averaged_discord(encoded: &DensityMatrix, proj: &BlochProjector) -> Result<f64> {
    let mut total = 0.0;
    for outcome in [*proj, proj.complement()] {
        match encoded.postselect(&outcome, "K") {
            Ok((ab, p)) => total += p * discord(&ab, "B")?.value,
            Err(Error::OutcomeUnobservable { .. }) => {}
            Err(e) => return Err(e),
        }
    }
    Ok(total)
}

/// Discord surface over Eve's measurement angles.
#[derive(Debug, Clone, PartialEq)]
pub struct AdversaryScan {
    pub thetas: Vec<f64>,
    pub phis: Vec<f64>,
    /// Row-major: `values[i * phis.len() + j]` belongs to `(thetas[i], phis[j])`.
    pub values: Vec<f64>,
}

impl AdversaryScan {
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.phis.len() + j]
    }
}

pub fn adversary_scan(protocol: EdssProtocol, thetas: &[f64], phis: &[f64]) -> Result<AdversaryScan> {
    let encoded = adversary_encoded_state(protocol)?;
    let points: Vec<(f64, f64)> = thetas.iter().flat_map(|&t| phis.iter().map(move |&p| (t, p))).collect();
    let values = points
        .par_iter()
        .map(|&(t, p)| outcome_averaged_discord(&encoded, &BlochProjector::new(t, p)?))
        .collect::<Result<Vec<f64>>>()?;
    Ok(AdversaryScan { thetas: thetas.to_vec(), phis: phis.to_vec(), values })
}
