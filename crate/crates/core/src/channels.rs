//! Qubit Kraus noise families and the placement models that decide where
//! noise strikes: the carrier only, both halves of a distributed Bell pair,
//! or the memories before encoding and the carrier in flight.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix};
use crate::qstate::DensityMatrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ChannelKind {
    Depolarizing,
    Dephasing,
    AmplitudeDamping,
    Identity,
    /// Operators supplied by the caller.
    Custom,
}

impl ChannelKind {
    pub fn name(self) -> &'static str {
        match self {
            ChannelKind::Depolarizing => "depolarizing",
            ChannelKind::Dephasing => "dephasing",
            ChannelKind::AmplitudeDamping => "amplitude-damping",
            ChannelKind::Identity => "identity",
            ChannelKind::Custom => "custom",
        }
    }
}

impl fmt::Display for ChannelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ChannelKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "depolarizing" | "depolarising" | "depo" => Ok(ChannelKind::Depolarizing),
            "dephasing" | "deph" => Ok(ChannelKind::Dephasing),
            "amplitude-damping" | "amplitude_damping" | "ad" => Ok(ChannelKind::AmplitudeDamping),
            "identity" | "none" => Ok(ChannelKind::Identity),
            other => Err(Error::InvalidParameter(format!("unknown channel kind `{other}`"))),
        }
    }
}

/// A single-qubit CPTP map in operator-sum form.
#[derive(Debug, Clone)]
pub struct KrausChannel {
    kind: ChannelKind,
    strength: f64,
    operators: Vec<CMatrix>,
}

impl KrausChannel {
    pub fn new(kind: ChannelKind, p: f64) -> Result<Self> {
        make_channel(kind, p)
    }

    /// Wraps arbitrary operators; completeness is checked when applied.
    pub fn from_operators(operators: Vec<CMatrix>) -> Self {
        Self { kind: ChannelKind::Custom, strength: 0.0, operators }
    }

    pub fn identity() -> Self {
        Self { kind: ChannelKind::Identity, strength: 0.0, operators: vec![linalg::identity(2)] }
    }

    pub fn kind(&self) -> ChannelKind {
        self.kind
    }

    pub fn strength(&self) -> f64 {
        self.strength
    }

    pub fn operators(&self) -> &[CMatrix] {
        &self.operators
    }

    /// `max |sum_j M_j^dagger M_j - I|` entrywise.
    pub fn completeness_error(&self) -> f64 {
        let Some(first) = self.operators.first() else {
            return f64::INFINITY;
        };
        let n = first.nrows();
        let sum = self
            .operators
            .iter()
            .fold(CMatrix::zeros(n, n), |acc, m| acc + m.adjoint() * m);
        linalg::max_abs_diff(&sum, &linalg::identity(n))
    }
}

/// Kraus set of the named family at strength `p`.
///
/// Depolarizing: `sqrt(1-p) I, sqrt(p/3) X, sqrt(p/3) Y, sqrt(p/3) Z`.
/// Dephasing: `sqrt(1-p) I, sqrt(p) |0><0|, sqrt(p) |1><1|`.
/// Amplitude damping: `diag(1, sqrt(1-p))` and `sqrt(p) |0><1|`.
pub fn make_channel(kind: ChannelKind, p: f64) -> Result<KrausChannel> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::StrengthOutOfRange(p));
    }
    let s = |x: f64, m: CMatrix| m * linalg::c(x.sqrt(), 0.0);
    let operators = match kind {
        ChannelKind::Depolarizing => vec![
            s(1.0 - p, linalg::identity(2)),
            s(p / 3.0, linalg::pauli_x()),
            s(p / 3.0, linalg::pauli_y()),
            s(p / 3.0, linalg::pauli_z()),
        ],
        ChannelKind::Dephasing => vec![
            s(1.0 - p, linalg::identity(2)),
            s(p, linalg::real_matrix(2, &[1.0, 0.0, 0.0, 0.0])),
            s(p, linalg::real_matrix(2, &[0.0, 0.0, 0.0, 1.0])),
        ],
        ChannelKind::AmplitudeDamping => vec![
            linalg::real_matrix(2, &[1.0, 0.0, 0.0, (1.0 - p).sqrt()]),
            linalg::real_matrix(2, &[0.0, p.sqrt(), 0.0, 0.0]),
        ],
        ChannelKind::Identity => vec![linalg::identity(2)],
        ChannelKind::Custom => {
            return Err(Error::InvalidParameter("custom channels need explicit operators".into()))
        }
    };
    Ok(KrausChannel { kind, strength: p, operators })
}

/// Where noise is applied.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NoiseModel {
    /// EDSS: only the carrier in flight. DED: both halves of the Bell pair, same family.
    SingleChannel,
    /// Memories before encoding plus the carrier in flight. DED: memories only.
    Multichannel,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Strengths {
    Uniform(f64),
    /// Memory A, memory B, carrier.
    Dissimilar(f64, f64, f64),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseScenario {
    pub model: NoiseModel,
    pub memory: ChannelKind,
    pub carrier: ChannelKind,
    pub strengths: Strengths,
    /// Re-apply memory noise before every beta iteration instead of once.
    pub reexpose_memories: bool,
}

impl NoiseScenario {
    pub fn noiseless() -> Self {
        Self::single(ChannelKind::Identity, 0.0)
    }

    pub fn single(kind: ChannelKind, p: f64) -> Self {
        Self {
            model: NoiseModel::SingleChannel,
            memory: ChannelKind::Identity,
            carrier: kind,
            strengths: Strengths::Uniform(p),
            reexpose_memories: false,
        }
    }

    pub fn uniform(memory: ChannelKind, carrier: ChannelKind, p: f64) -> Self {
        Self {
            model: NoiseModel::Multichannel,
            memory,
            carrier,
            strengths: Strengths::Uniform(p),
            reexpose_memories: false,
        }
    }

    pub fn dissimilar(memory: ChannelKind, carrier: ChannelKind, p1: f64, p2: f64, p3: f64) -> Self {
        Self {
            model: NoiseModel::Multichannel,
            memory,
            carrier,
            strengths: Strengths::Dissimilar(p1, p2, p3),
            reexpose_memories: false,
        }
    }

    pub fn with_reexposure(mut self, on: bool) -> Self {
        self.reexpose_memories = on;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let (a, b) = self.memory_strengths();
        for p in [a, b, self.carrier_strength()] {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::StrengthOutOfRange(p));
            }
        }
        if self.memory == ChannelKind::Custom || self.carrier == ChannelKind::Custom {
            return Err(Error::InvalidParameter("scenarios use named channel families".into()));
        }
        Ok(())
    }

    pub fn memory_strengths(&self) -> (f64, f64) {
        match self.strengths {
            Strengths::Uniform(p) => (p, p),
            Strengths::Dissimilar(p1, p2, _) => (p1, p2),
        }
    }

    pub fn carrier_strength(&self) -> f64 {
        match self.strengths {
            Strengths::Uniform(p) => p,
            Strengths::Dissimilar(_, _, p3) => p3,
        }
    }

    pub fn carrier_channel(&self) -> Result<KrausChannel> {
        make_channel(self.carrier, self.carrier_strength())
    }

    /// Memory channels for A and B, or `None` when memories are noiseless.
    pub fn memory_channels(&self) -> Result<Option<(KrausChannel, KrausChannel)>> {
        if self.model == NoiseModel::SingleChannel || self.memory == ChannelKind::Identity {
            return Ok(None);
        }
        let (p1, p2) = self.memory_strengths();
        Ok(Some((make_channel(self.memory, p1)?, make_channel(self.memory, p2)?)))
    }

    /// Channels hitting the two Bell-pair qubits in direct distribution.
    pub fn ded_channels(&self) -> Result<(KrausChannel, KrausChannel)> {
        match self.model {
            NoiseModel::SingleChannel => {
                let ch = self.carrier_channel()?;
                Ok((ch.clone(), ch))
            }
            NoiseModel::Multichannel => {
                let (p1, p2) = self.memory_strengths();
                Ok((make_channel(self.memory, p1)?, make_channel(self.memory, p2)?))
            }
        }
    }

    /// Whether the family combination is one of the studied ones: memories
    /// dephased or amplitude damped, carrier depolarized or amplitude damped.
    pub fn is_studied_combination(&self) -> bool {
        match self.model {
            NoiseModel::SingleChannel => true,
            NoiseModel::Multichannel => {
                matches!(self.memory, ChannelKind::Dephasing | ChannelKind::AmplitudeDamping)
                    && matches!(self.carrier, ChannelKind::Depolarizing | ChannelKind::AmplitudeDamping)
            }
        }
    }
}

/// Direct distribution: `M_i(p1) (x) M_j(p2)` applied to the Bell pair.
pub fn apply_ded_noise(bell: &DensityMatrix, scenario: &NoiseScenario) -> Result<DensityMatrix> {
    let (ch_a, ch_b) = scenario.ded_channels()?;
    let [a, b] = two_labels(bell)?;
    bell.apply_channel(&ch_a, a)?.apply_channel(&ch_b, b)
}

/// `sum_j (I_AB (x) M_j) rho (I_AB (x) M_j)^dagger` on the carrier `K`.
pub fn apply_carrier_noise(rho_abk: &DensityMatrix, channel: &KrausChannel) -> Result<DensityMatrix> {
    rho_abk.apply_channel(channel, "K")
}

/// Independent noise on memories `A` and `B`, identity on the rest.
pub fn apply_memory_noise(
    rho_abk: &DensityMatrix,
    mem_a: &KrausChannel,
    mem_b: &KrausChannel,
) -> Result<DensityMatrix> {
    rho_abk.apply_channel(mem_a, "A")?.apply_channel(mem_b, "B")
}

fn two_labels(rho: &DensityMatrix) -> Result<[&str; 2]> {
    match rho.labels().as_slice() {
        [a, b] => Ok([*a, *b]),
        other => Err(Error::NotBipartite(other.len())),
    }
}
