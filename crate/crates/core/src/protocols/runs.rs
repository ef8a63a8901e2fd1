use super::{
    alpha_initial_state, beta_memory_state, carrier_state, EdssProtocol, Measurement,
    ProtocolOutcome, BETA_CARRIER_CX, MAX_STUDIED_ITERATIONS,
};
use crate::channels::{apply_carrier_noise, apply_ded_noise, apply_memory_noise, NoiseScenario};
use crate::correlations::{check_distribution_bound, communicated_discord, negativity, Bipartition};
use crate::error::{Error, Result};
use crate::qstate::{BlochProjector, DensityMatrix, UnitaryGate};
use crate::sweeps::optimize_measurement;

/// K:AB negativity after a named step.
#[derive(Debug, Clone, PartialEq)]
pub struct Stage {
    pub name: String,
    pub carrier_negativity: f64,
}

struct Recorder {
    prefix: String,
    stages: Vec<Stage>,
}

impl Recorder {
    fn record(&mut self, name: &str, rho: &DensityMatrix) -> Result<()> {
        let cut = Bipartition::new(&["K"], &["A", "B"])?;
        self.stages.push(Stage {
            name: format!("{}{name}", self.prefix),
            carrier_negativity: negativity(rho, &cut)?,
        });
        Ok(())
    }
}

fn ab_cut() -> Bipartition {
    Bipartition::new(&["A"], &["B"]).expect("static cut")
}

fn resolve(measurement: Measurement, protocol: EdssProtocol, rho_abk: &DensityMatrix) -> Result<BlochProjector> {
    Ok(match measurement {
        Measurement::Projector(p) => p,
        Measurement::Nominal => protocol.nominal_projector(),
        Measurement::Optimal => optimize_measurement(rho_abk)?.projector,
    })
}

/// Protocol alpha from the standard classically correlated resource.
pub fn run_alpha(scenario: &NoiseScenario, measurement: Measurement) -> Result<ProtocolOutcome> {
    run_alpha_from(&alpha_initial_state(), scenario, measurement)
}

/// Memory noise, CNOT(A->K), carrier noise, CNOT(B->K), post-selection on K.
pub fn run_alpha_from(
    initial: &DensityMatrix,
    scenario: &NoiseScenario,
    measurement: Measurement,
) -> Result<ProtocolOutcome> {
    scenario.validate()?;
    let mut rec = Recorder { prefix: String::new(), stages: Vec::new() };
    let mut rho = initial.permute(&["A", "B", "K"])?;
    rec.record("initial", &rho)?;
    if let Some((mem_a, mem_b)) = scenario.memory_channels()? {
        rho = apply_memory_noise(&rho, &mem_a, &mem_b)?;
        rec.record("memory-noise", &rho)?;
    }
    rho = rho.apply_unitary(&UnitaryGate::cnot("A", "K"))?;
    rec.record("encode", &rho)?;
    let in_flight = rho.clone();
    rho = apply_carrier_noise(&rho, &scenario.carrier_channel()?)?;
    rec.record("carrier-noise", &rho)?;
    rho = rho.apply_unitary(&UnitaryGate::cnot("B", "K"))?;
    rec.record("decode", &rho)?;

    let proj = resolve(measurement, EdssProtocol::Alpha, &rho)?;
    let (final_state, probability) = rho.postselect(&proj, "K")?;
    let n = negativity(&final_state, &ab_cut())?;
    Ok(ProtocolOutcome {
        final_state,
        success_probability: probability,
        iteration_probabilities: vec![probability],
        iteration_negativities: vec![n],
        negativity_ab: n,
        carrier_negativity_trace: rec.stages,
        measurement: Some(proj),
        iteration_measurements: vec![proj],
        in_flight: vec![in_flight],
        extended: false,
    })
}

/// Protocol beta from the standard Bell-diagonal memory state.
pub fn run_beta(scenario: &NoiseScenario, iterations: usize, measurement: Measurement) -> Result<ProtocolOutcome> {
    run_beta_from(&beta_memory_state(), scenario, iterations, measurement)
}

/// Each iteration: fresh carrier `(I - X/2)/2`, CPHASE(A,K), carrier noise,
/// CPHASE(B,K), post-selection on K. Memory noise hits before the first
/// encoding only, unless the scenario re-exposes the memories every time.
pub fn run_beta_from(
    memory_ab: &DensityMatrix,
    scenario: &NoiseScenario,
    iterations: usize,
    measurement: Measurement,
) -> Result<ProtocolOutcome> {
    scenario.validate()?;
    if iterations == 0 {
        return Err(Error::InvalidParameter("at least one iteration is required".into()));
    }
    let memory = scenario.memory_channels()?;
    let carrier_noise = scenario.carrier_channel()?;
    let carrier = carrier_state(BETA_CARRIER_CX)?;
    let mut ab = memory_ab.permute(&["A", "B"])?;

    let mut rec = Recorder { prefix: String::new(), stages: Vec::new() };
    let mut probabilities = Vec::with_capacity(iterations);
    let mut negativities = Vec::with_capacity(iterations);
    let mut projectors = Vec::with_capacity(iterations);
    let mut in_flight = Vec::with_capacity(iterations);

    for i in 1..=iterations {
        rec.prefix = format!("iteration-{i}/");
        let mut rho = ab.tensor(&carrier)?;
        rec.record("initial", &rho)?;
        if let Some((mem_a, mem_b)) = &memory {
            if i == 1 || scenario.reexpose_memories {
                rho = apply_memory_noise(&rho, mem_a, mem_b)?;
                rec.record("memory-noise", &rho)?;
            }
        }
        rho = rho.apply_unitary(&UnitaryGate::cphase("A", "K"))?;
        rec.record("encode", &rho)?;
        in_flight.push(rho.clone());
        rho = apply_carrier_noise(&rho, &carrier_noise)?;
        rec.record("carrier-noise", &rho)?;
        rho = rho.apply_unitary(&UnitaryGate::cphase("B", "K"))?;
        rec.record("decode", &rho)?;

        let proj = resolve(measurement, EdssProtocol::Beta, &rho)?;
        let (next, probability) = rho.postselect(&proj, "K")?;
        negativities.push(negativity(&next, &ab_cut())?);
        probabilities.push(probability);
        projectors.push(proj);
        ab = next;
    }

    let negativity_ab = *negativities.last().expect("iterations >= 1");
    Ok(ProtocolOutcome {
        final_state: ab,
        success_probability: probabilities.iter().product(),
        iteration_probabilities: probabilities,
        iteration_negativities: negativities,
        negativity_ab,
        carrier_negativity_trace: rec.stages,
        measurement: projectors.last().copied(),
        iteration_measurements: projectors,
        in_flight,
        extended: iterations > MAX_STUDIED_ITERATIONS,
    })
}

/// Direct distribution of `|Phi+>` through the scenario's DED channels.
pub fn run_ded(scenario: &NoiseScenario) -> Result<ProtocolOutcome> {
    scenario.validate()?;
    let final_state = apply_ded_noise(&super::bell_phi_plus(), scenario)?;
    let n = negativity(&final_state, &ab_cut())?;
    Ok(ProtocolOutcome {
        final_state,
        success_probability: 1.0,
        iteration_probabilities: vec![1.0],
        iteration_negativities: vec![n],
        negativity_ab: n,
        carrier_negativity_trace: Vec::new(),
        measurement: None,
        iteration_measurements: Vec::new(),
        in_flight: Vec::new(),
        extended: false,
    })
}

/// Entanglement gained across Alice's and Bob's labs by one carrier
/// transmission, against the discord the carrier shares with `A, B`.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundAudit {
    pub transmission: usize,
    /// `N(AK : B)`: carrier still with Alice.
    pub e_initial: f64,
    /// `N(A : BK)`: carrier delivered to Bob.
    pub e_final: f64,
    /// Discord of K against `A, B`, measured on K.
    pub d_comm: f64,
    pub holds: bool,
}

pub fn distribution_audit(outcome: &ProtocolOutcome) -> Result<Vec<BoundAudit>> {
    outcome
        .in_flight
        .iter()
        .enumerate()
        .map(|(i, rho)| {
            let e_initial = negativity(rho, &Bipartition::new(&["A", "K"], &["B"])?)?;
            let e_final = negativity(rho, &Bipartition::new(&["A"], &["B", "K"])?)?;
            let d_comm = communicated_discord(rho, "K")?.value;
            Ok(BoundAudit {
                transmission: i + 1,
                e_initial,
                e_final,
                d_comm,
                holds: check_distribution_bound(e_initial, e_final, d_comm),
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channels::ChannelKind;
    use crate::linalg::max_abs_diff;
    use crate::protocols::bell_phi_plus_ket;

    #[test]
    fn alpha_noiseless_yields_bell_pair() {
        let out = run_alpha(&NoiseScenario::noiseless(), Measurement::Nominal).unwrap();
        assert!((out.success_probability - 1.0 / 3.0).abs() < 1e-12);
        assert!((out.negativity_ab - 0.5).abs() < 1e-12);
        assert!(out.final_state.fidelity_with_pure(&bell_phi_plus_ket()) > 1.0 - 1e-12);
        assert!(out.carrier_negativity_trace.iter().all(|s| s.carrier_negativity <= 1e-12));
    }

    #[test]
    fn alpha_decoded_state_matches_closed_form() {
        // sigma = 1/3 |Phi+><Phi+| (x) |0><0| + 2/3 (I/4) (x) |1><1|
        let rho = alpha_initial_state()
            .apply_unitary(&UnitaryGate::cnot("A", "K"))
            .unwrap()
            .apply_unitary(&UnitaryGate::cnot("B", "K"))
            .unwrap();
        let k0 = crate::qstate::BlochProjector::computational(0).matrix();
        let k1 = crate::qstate::BlochProjector::computational(1).matrix();
        let bell = super::super::bell_phi_plus();
        let mixed = crate::linalg::identity(4) * crate::linalg::c(0.25, 0.0);
        let sigma = crate::linalg::kron(bell.data(), &k0) * crate::linalg::c(1.0 / 3.0, 0.0)
            + crate::linalg::kron(&mixed, &k1) * crate::linalg::c(2.0 / 3.0, 0.0);
        assert!(max_abs_diff(rho.data(), &sigma) < 1e-12);
    }

    #[test]
    fn beta_noiseless_single_iteration() {
        let out = run_beta(&NoiseScenario::noiseless(), 1, Measurement::Nominal).unwrap();
        assert!((out.negativity_ab - 0.1).abs() < 1e-12);
        assert!((out.success_probability - 0.625).abs() < 1e-12);
        assert!(!out.extended);
    }

    #[test]
    fn beta_encoding_entangles_a_with_bk() {
        let rho = crate::protocols::beta_initial_state(-0.5)
            .unwrap()
            .apply_unitary(&UnitaryGate::cphase("A", "K"))
            .unwrap();
        let n = negativity(&rho, &Bipartition::new(&["A"], &["B", "K"]).unwrap()).unwrap();
        assert!((n - 1.0 / 16.0).abs() < 1e-12);
    }

    #[test]
    fn beta_extended_iterations_flagged() {
        let out = run_beta(&NoiseScenario::noiseless(), 5, Measurement::Nominal).unwrap();
        assert!(out.extended);
        assert_eq!(out.iteration_negativities.len(), 5);
        assert!(run_beta(&NoiseScenario::noiseless(), 0, Measurement::Nominal).is_err());
    }

    #[test]
    fn unobservable_outcome_propagates() {
        // K is |0> after decoding whenever A,B agree; force a fixed |1> on a
        // state where K never leaves |0>: the |0,0,0> product.
        let start = DensityMatrix::basis_state(&[0, 0, 0], crate::qstate::Layout::qubits(&["A", "B", "K"])).unwrap();
        let err = run_alpha_from(
            &start,
            &NoiseScenario::noiseless(),
            Measurement::Projector(BlochProjector::computational(1)),
        )
        .unwrap_err();
        assert!(matches!(err, Error::OutcomeUnobservable { .. }));
    }

    #[test]
    fn ded_noiseless_and_full_dephasing() {
        let clean = run_ded(&NoiseScenario::noiseless()).unwrap();
        assert!((clean.negativity_ab - 0.5).abs() < 1e-14);
        assert_eq!(clean.success_probability, 1.0);
        let dead = run_ded(&NoiseScenario::single(ChannelKind::Dephasing, 1.0)).unwrap();
        assert_eq!(dead.negativity_ab, 0.0);
    }

    #[test]
    fn alpha_transmission_respects_bound() {
        let out = run_alpha(&NoiseScenario::noiseless(), Measurement::Nominal).unwrap();
        let audit = distribution_audit(&out).unwrap();
        assert_eq!(audit.len(), 1);
        let a = &audit[0];
        assert!(a.e_initial.abs() < 1e-12);
        assert!((a.e_final - 1.0 / 6.0).abs() < 1e-12);
        assert!((a.d_comm - 1.0 / 3.0).abs() < 1e-6);
        assert!(a.holds);
    }
}
