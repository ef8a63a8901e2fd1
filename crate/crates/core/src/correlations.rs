//! Entropy, negativity, one-sided discord and the distributed-entanglement
//! bound `E_final - E_initial <= D_comm`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix};
use crate::optimize::SphereSearch;
use crate::qstate::{BlochProjector, DensityMatrix, Layout};

/// Partial-transpose eigenvalues smaller than this in magnitude are treated as zero.
pub const NEGATIVITY_CLAMP: f64 = 1e-12;
pub const BOUND_SLACK: f64 = 1e-6;

/// Von Neumann entropy in bits.
pub fn entropy(rho: &DensityMatrix) -> f64 {
    linalg::shannon_bits(rho.eigenvalues())
}

/// Split of a layout into two disjoint label sets covering it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bipartition {
    left: Vec<String>,
    right: Vec<String>,
}

impl Bipartition {
    pub fn new(left: &[&str], right: &[&str]) -> Result<Self> {
        if left.is_empty() || right.is_empty() {
            return Err(Error::InvalidParameter("both sides of a cut must be non-empty".into()));
        }
        if let Some(l) = left.iter().find(|l| right.contains(l)) {
            return Err(Error::InvalidParameter(format!("`{l}` is on both sides of the cut")));
        }
        Ok(Self {
            left: left.iter().map(|s| s.to_string()).collect(),
            right: right.iter().map(|s| s.to_string()).collect(),
        })
    }

    /// `left` against every other label of `layout`.
    pub fn against_rest(layout: &Layout, left: &[&str]) -> Result<Self> {
        layout.positions(left)?;
        let right: Vec<&str> = layout.labels().into_iter().filter(|l| !left.contains(l)).collect();
        Self::new(left, &right)
    }

    pub fn left(&self) -> Vec<&str> {
        self.left.iter().map(String::as_str).collect()
    }

    pub fn right(&self) -> Vec<&str> {
        self.right.iter().map(String::as_str).collect()
    }

    fn check(&self, layout: &Layout) -> Result<()> {
        let mut all: Vec<&str> = self.left();
        all.extend(self.right());
        layout.positions(&all)?;
        if all.len() != layout.len() {
            return Err(Error::InvalidParameter(format!(
                "cut {:?}:{:?} does not cover {:?}",
                self.left,
                self.right,
                layout.labels()
            )));
        }
        Ok(())
    }
}

/// Sum of the magnitudes of the negative eigenvalues of a partial transpose.
pub fn negativity_from_spectrum(eigenvalues: &[f64]) -> f64 {
    let n: f64 = eigenvalues
        .iter()
        .filter(|l| l.abs() >= NEGATIVITY_CLAMP)
        .map(|&l| (l.abs() - l) / 2.0)
        .sum();
    if n < NEGATIVITY_CLAMP { 0.0 } else { n }
}

pub fn negativity(rho: &DensityMatrix, cut: &Bipartition) -> Result<f64> {
    cut.check(rho.layout())?;
    let pt = rho.partial_transpose(&cut.left())?;
    Ok(negativity_from_spectrum(&linalg::hermitian_eigenvalues(&pt)))
}

/// Negativity of a normalised two-qubit matrix (A:B), transposing the first qubit.
pub(crate) fn two_qubit_negativity(m: &CMatrix) -> f64 {
    // index = 2a + b; transposing A swaps the a digits of row and column
    let pt = CMatrix::from_fn(4, 4, |r, c| m[((c & 2) | (r & 1), (r & 2) | (c & 1))]);
    negativity_from_spectrum(&linalg::hermitian_eigenvalues(&pt))
}

/// The four blocks `rho^{ab}` of a state with respect to one qubit, so that
/// `<psi| rho |psi> = sum_ab conj(psi_a) psi_b rho^{ab}` on the rest.
#[derive(Debug, Clone)]
pub(crate) struct QubitBlocks {
    blocks: [[CMatrix; 2]; 2],
}

impl QubitBlocks {
    pub fn new(rho: &DensityMatrix, qubit: &str) -> Result<Self> {
        if rho.layout().dim_of(qubit)? != 2 {
            return Err(Error::DimensionMismatch(format!("`{qubit}` is not a qubit")));
        }
        let (b00, _) = rho.block(qubit, 0, 0)?;
        let (b01, _) = rho.block(qubit, 0, 1)?;
        let (b10, _) = rho.block(qubit, 1, 0)?;
        let (b11, _) = rho.block(qubit, 1, 1)?;
        Ok(Self { blocks: [[b00, b01], [b10, b11]] })
    }

    /// Unnormalised conditional state for outcome `|psi>`.
    pub fn conditional(&self, ket: &[Complex64; 2]) -> CMatrix {
        let mut out = &self.blocks[0][0] * (ket[0].conj() * ket[0]);
        out += &self.blocks[0][1] * (ket[0].conj() * ket[1]);
        out += &self.blocks[1][0] * (ket[1].conj() * ket[0]);
        out += &self.blocks[1][1] * (ket[1].conj() * ket[1]);
        out
    }
}

/// One-sided discord with its optimal measurement.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscordResult {
    pub value: f64,
    pub measurement: BlochProjector,
    pub measured: String,
}

/// Ollivier-Zurek discord with rank-1 projective measurements on `measured`
/// (a qubit): `S(rho_m) - S(rho) + min sum_i p_i S(rho_other|i)`.
pub fn discord(rho: &DensityMatrix, measured: &str) -> Result<DiscordResult> {
    discord_with(rho, measured, &SphereSearch::default())
}

pub fn discord_with(rho: &DensityMatrix, measured: &str, search: &SphereSearch) -> Result<DiscordResult> {
    if rho.layout().len() != 2 {
        return Err(Error::NotBipartite(rho.layout().len()));
    }
    let blocks = QubitBlocks::new(rho, measured)?;
    let s_measured = entropy(&rho.partial_trace(&[measured])?);
    let s_joint = entropy(rho);
    let opt = search.minimize(|t, p| {
        let proj = BlochProjector::from_sphere(t, p);
        conditional_entropy_bits(&blocks, &proj)
    });
    let value = (s_measured - s_joint + opt.value).max(0.0);
    Ok(DiscordResult { value, measurement: opt.point, measured: measured.to_string() })
}

/// `sum_i p_i S(rho_other|i)` for the basis `{proj, I - proj}`.
fn conditional_entropy_bits(blocks: &QubitBlocks, proj: &BlochProjector) -> f64 {
    [proj.ket(), proj.complement().ket()]
        .iter()
        .map(|ket| {
            let m = blocks.conditional(ket);
            let eig = linalg::hermitian_eigenvalues(&m);
            let p: f64 = eig.iter().sum();
            // p S(m/p) = -sum l log l + p log p
            linalg::shannon_bits(eig) - linalg::shannon_bits([p])
        })
        .sum()
}

/// Discord between `carrier` and everything else, measured on the carrier.
pub fn communicated_discord(rho: &DensityMatrix, carrier: &str) -> Result<DiscordResult> {
    let rest: Vec<&str> = rho.labels().into_iter().filter(|l| *l != carrier).collect();
    let rest_name = rest.concat();
    let grouped = rho.group(&[(rest_name.as_str(), &rest), (carrier, &[carrier])])?;
    discord(&grouped, carrier)
}

/// `e_final - e_initial <= d_comm` up to `BOUND_SLACK`.
pub fn check_distribution_bound(e_initial: f64, e_final: f64, d_comm: f64) -> bool {
    e_final - e_initial <= d_comm + BOUND_SLACK
}
