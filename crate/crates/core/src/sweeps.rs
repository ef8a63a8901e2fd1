//! Carrier-measurement optimisation and the parameter sweeps built on it.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::channels::{ChannelKind, NoiseScenario};
use crate::correlations::{two_qubit_negativity, QubitBlocks};
use crate::error::{Error, Result};
use crate::linalg::c;
use crate::optimize::SphereSearch;
use crate::protocols::{run_alpha, run_beta, run_ded, EdssProtocol, Measurement, MAX_STUDIED_ITERATIONS};
use crate::qstate::{BlochProjector, DensityMatrix, MIN_OUTCOME_PROBABILITY};

/// Angular resolution at which measurement refinement stops.
pub const MEASUREMENT_MIN_STEP: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum MeasurementPolicy {
    /// Re-optimise the carrier projector at every point.
    #[default]
    Optimal,
    /// Keep the noiseless-optimal outcome of each protocol.
    Nominal,
}

impl MeasurementPolicy {
    pub fn measurement(self) -> Measurement {
        match self {
            MeasurementPolicy::Optimal => Measurement::Optimal,
            MeasurementPolicy::Nominal => Measurement::Nominal,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeasurementOptimum {
    /// The selected outcome.
    pub projector: BlochProjector,
    /// The measurement basis, represented by its outcome with `theta <= pi/2`.
    pub basis: BlochProjector,
    /// 0 if `projector == basis`, 1 if it is the complement.
    pub outcome_index: u8,
    pub negativity: f64,
    pub probability: f64,
}

/// Post-selected A:B negativity and probability for carrier outcome `proj`.
fn outcome_negativity(blocks: &QubitBlocks, proj: &BlochProjector) -> (f64, f64) {
    let m = blocks.conditional(&proj.ket());
    let p = m.trace().re;
    if !(p >= MIN_OUTCOME_PROBABILITY) {
        return (0.0, p.max(0.0));
    }
    (two_qubit_negativity(&(m * c(1.0 / p, 0.0))), p)
}

/// Rank-1 projector on K maximising the post-selected A:B negativity of a
/// state on `A, B, K`. Every projector's complement is another point of the
/// sphere, so both outcomes of each basis are searched.
pub fn optimize_measurement(rho_abk: &DensityMatrix) -> Result<MeasurementOptimum> {
    for l in ["A", "B"] {
        if rho_abk.layout().dim_of(l)? != 2 {
            return Err(Error::DimensionMismatch(format!("`{l}` must be a qubit")));
        }
    }
    if rho_abk.layout().len() != 3 {
        return Err(Error::DimensionMismatch("expected a state on A, B, K".into()));
    }
    let rho = rho_abk.permute(&["A", "B", "K"])?;
    let blocks = QubitBlocks::new(&rho, "K")?;
    let search = SphereSearch { min_step: MEASUREMENT_MIN_STEP, ..SphereSearch::default() };
    let opt = search.maximize(|t, p| outcome_negativity(&blocks, &BlochProjector::from_sphere(t, p)).0);
    let projector = opt.point;
    let (negativity, probability) = outcome_negativity(&blocks, &projector);
    let (basis, outcome_index) = if projector.theta() > std::f64::consts::FRAC_PI_2 {
        (projector.complement(), 1)
    } else {
        (projector, 0)
    };
    Ok(MeasurementOptimum { projector, basis, outcome_index, negativity, probability })
}

/// Which protocol a sweep record belongs to; `Beta(n)` is `n` iterations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ProtocolTag {
    Alpha,
    Beta(u8),
    Ded,
}

impl ProtocolTag {
    /// alpha, beta-1 .. beta-4 and ded.
    pub fn studied() -> Vec<ProtocolTag> {
        let mut v = vec![ProtocolTag::Alpha];
        v.extend((1..=MAX_STUDIED_ITERATIONS as u8).map(ProtocolTag::Beta));
        v.push(ProtocolTag::Ded);
        v
    }
}

impl fmt::Display for ProtocolTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ProtocolTag::Alpha => f.write_str("alpha"),
            ProtocolTag::Beta(n) => write!(f, "beta-{n}"),
            ProtocolTag::Ded => f.write_str("ded"),
        }
    }
}

impl FromStr for ProtocolTag {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.to_ascii_lowercase();
        match s.as_str() {
            "alpha" => return Ok(ProtocolTag::Alpha),
            "ded" => return Ok(ProtocolTag::Ded),
            "beta" => return Ok(ProtocolTag::Beta(1)),
            _ => {}
        }
        s.strip_prefix("beta-")
            .and_then(|n| n.parse::<u8>().ok())
            .filter(|&n| n >= 1)
            .map(ProtocolTag::Beta)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown protocol `{s}`")))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRecord {
    pub scenario: NoiseScenario,
    pub protocol: ProtocolTag,
    /// The swept strength.
    pub p: f64,
    pub negativity: f64,
    /// Cumulative over iterations for `Beta(n)`; exactly 1 for DED.
    pub success_probability: f64,
    pub optimal_theta: f64,
    pub optimal_phi: f64,
}

/// Runs every protocol of `protocols` at each `(p, scenario)` point.
/// Records are ordered by point, then by the order of `protocols`.
pub fn sweep(
    points: &[(f64, NoiseScenario)],
    protocols: &[ProtocolTag],
    policy: MeasurementPolicy,
) -> Result<Vec<SweepRecord>> {
    let per_point = points
        .par_iter()
        .map(|(p, scenario)| sweep_point(*p, scenario, protocols, policy))
        .collect::<Result<Vec<_>>>()?;
    Ok(per_point.into_iter().flatten().collect())
}

fn sweep_point(
    p: f64,
    scenario: &NoiseScenario,
    protocols: &[ProtocolTag],
    policy: MeasurementPolicy,
) -> Result<Vec<SweepRecord>> {
    let measurement = policy.measurement();
    let max_beta = protocols
        .iter()
        .filter_map(|t| if let ProtocolTag::Beta(n) = t { Some(*n as usize) } else { None })
        .max();
    // One beta run covers every requested iteration count.
    let beta = max_beta.map(|n| run_beta(scenario, n, measurement)).transpose()?;
    let record = |protocol, negativity, success_probability, proj: Option<BlochProjector>| SweepRecord {
        scenario: *scenario,
        protocol,
        p,
        negativity,
        success_probability,
        optimal_theta: proj.map_or(0.0, |m| m.theta()),
        optimal_phi: proj.map_or(0.0, |m| m.phi()),
    };
    protocols
        .iter()
        .map(|&tag| match tag {
            ProtocolTag::Alpha => {
                let out = run_alpha(scenario, measurement)?;
                Ok(record(tag, out.negativity_ab, out.success_probability, out.measurement))
            }
            ProtocolTag::Beta(n) => {
                let out = beta.as_ref().expect("beta run exists when requested");
                let n = n as usize;
                if n == 0 {
                    return Err(Error::InvalidParameter("beta needs at least one iteration".into()));
                }
                let probability = out.iteration_probabilities[..n].iter().product();
                Ok(record(tag, out.iteration_negativities[n - 1], probability, Some(out.iteration_measurements[n - 1])))
            }
            ProtocolTag::Ded => {
                let out = run_ded(scenario)?;
                Ok(record(tag, out.negativity_ab, 1.0, None))
            }
        })
        .collect()
}

/// Single-channel model: carrier noise for the separable-carrier protocols,
/// the same channel on both Bell qubits for DED.
pub fn sweep_single_channel(
    kind: ChannelKind,
    p_grid: &[f64],
    protocols: &[ProtocolTag],
    policy: MeasurementPolicy,
) -> Result<Vec<SweepRecord>> {
    let points: Vec<_> = p_grid.iter().map(|&p| (p, NoiseScenario::single(kind, p))).collect();
    sweep(&points, protocols, policy)
}

/// Multichannel model with one strength for memories and carrier.
pub fn sweep_multichannel_uniform(
    memory: ChannelKind,
    carrier: ChannelKind,
    p_grid: &[f64],
    protocols: &[ProtocolTag],
    policy: MeasurementPolicy,
    reexpose_memories: bool,
) -> Result<Vec<SweepRecord>> {
    let points: Vec<_> = p_grid
        .iter()
        .map(|&p| (p, NoiseScenario::uniform(memory, carrier, p).with_reexposure(reexpose_memories)))
        .collect();
    sweep(&points, protocols, policy)
}

/// Differences of localised A:B negativity at one `(p1, p2, p3)` point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeltaRecord {
    pub p1: f64,
    pub p2: f64,
    pub p3: f64,
    /// `N_beta - N_alpha`.
    pub delta_alpha_beta: f64,
    /// `min(N_alpha - N_ded, 0)`.
    pub delta_alpha_ded: f64,
    /// `min(N_beta - N_ded, 0)`.
    pub delta_beta_ded: f64,
    pub n_alpha: f64,
    pub n_beta: f64,
    pub n_ded: f64,
}

impl DeltaRecord {
    pub fn from_negativities(p1: f64, p2: f64, p3: f64, n_alpha: f64, n_beta: f64, n_ded: f64) -> Self {
        Self {
            p1,
            p2,
            p3,
            delta_alpha_beta: n_beta - n_alpha,
            delta_alpha_ded: (n_alpha - n_ded).min(0.0),
            delta_beta_ded: (n_beta - n_ded).min(0.0),
            n_alpha,
            n_beta,
            n_ded,
        }
    }
}

/// Dissimilar-strength grid: memory A at `p1`, memory B at `p2`, carrier at
/// `p3`; a single beta iteration. Row-major with `p1` outermost.
pub fn sweep_grid_delta(
    memory: ChannelKind,
    carrier: ChannelKind,
    p1_grid: &[f64],
    p2_grid: &[f64],
    p3: f64,
    policy: MeasurementPolicy,
) -> Result<Vec<DeltaRecord>> {
    let points: Vec<(f64, f64)> = p1_grid.iter().flat_map(|&a| p2_grid.iter().map(move |&b| (a, b))).collect();
    let measurement = policy.measurement();
    points
        .par_iter()
        .map(|&(p1, p2)| {
            let scenario = NoiseScenario::dissimilar(memory, carrier, p1, p2, p3);
            let n_alpha = run_alpha(&scenario, measurement)?.negativity_ab;
            let n_beta = run_beta(&scenario, 1, measurement)?.negativity_ab;
            let n_ded = run_ded(&scenario)?.negativity_ab;
            Ok(DeltaRecord::from_negativities(p1, p2, p3, n_alpha, n_beta, n_ded))
        })
        .collect()
}

/// Simulated probability of the nominal outcome, single-channel model, one iteration.
pub fn probability_curves(protocol: EdssProtocol, kind: ChannelKind, p_grid: &[f64]) -> Result<Vec<(f64, f64)>> {
    p_grid
        .par_iter()
        .map(|&p| {
            let scenario = NoiseScenario::single(kind, p);
            let out = match protocol {
                EdssProtocol::Alpha => run_alpha(&scenario, Measurement::Nominal)?,
                EdssProtocol::Beta => run_beta(&scenario, 1, Measurement::Nominal)?,
            };
            Ok((p, out.success_probability))
        })
        .collect()
}

/// Closed-form probability of the nominal outcome under carrier noise of strength `p`.
pub fn nominal_success_probability(protocol: EdssProtocol, kind: ChannelKind, p: f64) -> Option<f64> {
    let value = match (protocol, kind) {
        (EdssProtocol::Alpha, ChannelKind::Depolarizing) => 1.0 / 3.0 + 2.0 * p / 9.0,
        (EdssProtocol::Alpha, ChannelKind::Dephasing) => 1.0 / 3.0,
        (EdssProtocol::Alpha, ChannelKind::AmplitudeDamping) => 1.0 / 3.0 + p / 6.0,
        (EdssProtocol::Alpha, ChannelKind::Identity) => 1.0 / 3.0,
        (EdssProtocol::Beta, ChannelKind::Depolarizing) => 5.0 / 8.0 - p / 6.0,
        (EdssProtocol::Beta, ChannelKind::Dephasing) => 5.0 / 8.0 - p / 8.0,
        (EdssProtocol::Beta, ChannelKind::AmplitudeDamping) => 0.5 + (1.0 - p).sqrt() / 8.0,
        (EdssProtocol::Beta, ChannelKind::Identity) => 5.0 / 8.0,
        (_, ChannelKind::Custom) => return None,
    };
    Some(value)
}

/// Brackets the smallest `p` in `[lo, hi]` with `f(p) == 0`, assuming `f`
/// is positive below it and zero above. `None` if `f(hi) > 0` or `f(lo) == 0`.
pub fn bisect_death<F>(f: F, mut lo: f64, mut hi: f64, tol: f64) -> Result<Option<(f64, f64)>>
where
    F: Fn(f64) -> Result<f64>,
{
    if f(hi)? > 0.0 || f(lo)? <= 0.0 {
        return Ok(None);
    }
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if f(mid)? > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(Some((lo, hi)))
}

/// `n` evenly spaced points on `[0, 1]`, both ends included.
pub fn unit_grid(n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![0.0],
        _ => (0..n).map(|i| i as f64 / (n - 1) as f64).collect(),
    }
}
