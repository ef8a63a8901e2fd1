use num_complex::Complex64;

use super::layout::{Layout, Radix};
use super::{BlochProjector, UnitaryGate};
use crate::channels::KrausChannel;
use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix, ZERO};

pub const TRACE_TOL: f64 = 1e-12;
pub const HERMITIAN_TOL: f64 = 1e-12;
pub const PSD_TOL: f64 = -1e-10;
/// Outcomes less likely than this have no normalised post-measurement state.
pub const MIN_OUTCOME_PROBABILITY: f64 = 1e-14;
pub const COMPLETENESS_TOL: f64 = 1e-10;

/// Density operator over a labelled tensor-product layout.
#[derive(Debug, Clone)]
pub struct DensityMatrix {
    data: CMatrix,
    layout: Layout,
}

impl DensityMatrix {
    /// Validates shape, unit trace, Hermiticity and positivity.
    pub fn new(data: CMatrix, layout: Layout) -> Result<Self> {
        let rho = Self::from_parts(data, layout)?;
        rho.check_invariants()?;
        Ok(rho)
    }

    /// Shape check only.
    pub fn from_parts(data: CMatrix, layout: Layout) -> Result<Self> {
        let d = layout.total_dim();
        if data.nrows() != d || data.ncols() != d {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} matrix for layout of dimension {d}",
                data.nrows(),
                data.ncols()
            )));
        }
        Ok(Self { data, layout })
    }

    pub fn pure(ket: &[Complex64], layout: Layout) -> Result<Self> {
        let norm: f64 = ket.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            return Err(Error::InvalidParameter("zero state vector".into()));
        }
        let normalized: Vec<Complex64> = ket.iter().map(|a| a / norm).collect();
        Self::from_parts(linalg::outer(&normalized), layout)
    }

    pub fn maximally_mixed(layout: Layout) -> Self {
        let d = layout.total_dim();
        let data = linalg::identity(d) * linalg::c(1.0 / d as f64, 0.0);
        Self { data, layout }
    }

    /// Computational basis state `|digits>`.
    pub fn basis_state(digits: &[usize], layout: Layout) -> Result<Self> {
        let radix = layout.radix();
        if digits.len() != layout.len() {
            return Err(Error::DimensionMismatch("digit count differs from layout".into()));
        }
        let mut index = 0;
        for (pos, &d) in digits.iter().enumerate() {
            if d >= layout.parts()[pos].dim {
                return Err(Error::InvalidParameter(format!("digit {d} out of range")));
            }
            index = radix.with_digit(index, pos, d);
        }
        let mut ket = vec![ZERO; layout.total_dim()];
        ket[index] = linalg::ONE;
        Self::pure(&ket, layout)
    }

    pub fn data(&self) -> &CMatrix {
        &self.data
    }

    pub fn into_data(self) -> CMatrix {
        self.data
    }

    pub fn layout(&self) -> &Layout {
        &self.layout
    }

    pub fn labels(&self) -> Vec<&str> {
        self.layout.labels()
    }

    pub fn dim(&self) -> usize {
        self.data.nrows()
    }

    pub fn trace(&self) -> Complex64 {
        self.data.trace()
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        linalg::hermitian_eigenvalues(&self.data)
    }

    pub fn check_invariants(&self) -> Result<()> {
        let tr = self.trace();
        if (tr - linalg::ONE).norm() > TRACE_TOL {
            return Err(Error::InvariantViolation(format!("trace {tr} differs from 1")));
        }
        let herm = linalg::hermiticity_error(&self.data);
        if herm > HERMITIAN_TOL {
            return Err(Error::InvariantViolation(format!("not Hermitian (deviation {herm:.2e})")));
        }
        let min = self.eigenvalues()[0];
        if min < PSD_TOL {
            return Err(Error::InvariantViolation(format!("negative eigenvalue {min:.3e}")));
        }
        Ok(())
    }

    /// `<psi|rho|psi>` for a pure reference state.
    pub fn fidelity_with_pure(&self, ket: &[Complex64]) -> f64 {
        let v = nalgebra::DVector::from_column_slice(ket);
        (v.adjoint() * &self.data * &v)[(0, 0)].re
    }

    pub fn relabel(&self, labels: &[&str]) -> Result<Self> {
        if labels.len() != self.layout.len() {
            return Err(Error::DimensionMismatch("relabel needs one label per subsystem".into()));
        }
        let layout = Layout::new(labels.iter().zip(self.layout.dims()).map(|(l, d)| (*l, d)))?;
        Ok(Self { data: self.data.clone(), layout })
    }

    pub fn tensor(&self, other: &DensityMatrix) -> Result<Self> {
        Ok(Self {
            data: linalg::kron(&self.data, &other.data),
            layout: self.layout.concat(&other.layout)?,
        })
    }

    /// Reduced state on `keep`, listed in the original layout order.
    pub fn partial_trace(&self, keep: &[&str]) -> Result<Self> {
        if keep.is_empty() {
            return Err(Error::InvalidParameter("partial trace must keep at least one subsystem".into()));
        }
        let mut kept = self.layout.positions(keep)?;
        kept.sort_unstable();
        let traced: Vec<usize> = (0..self.layout.len()).filter(|p| !kept.contains(p)).collect();
        let radix = self.layout.radix();
        let out_layout = self.layout.select(&kept);
        let mut out = CMatrix::zeros(out_layout.total_dim(), out_layout.total_dim());
        let d = self.dim();
        for r in 0..d {
            let r_traced = radix.gather(r, &traced);
            let r_kept = radix.gather(r, &kept);
            for c in 0..d {
                if radix.gather(c, &traced) == r_traced {
                    out[(r_kept, radix.gather(c, &kept))] += self.data[(r, c)];
                }
            }
        }
        Ok(Self { data: out, layout: out_layout })
    }

    /// Transposes the digits of `subset`. Not a density matrix in general.
    pub fn partial_transpose(&self, subset: &[&str]) -> Result<CMatrix> {
        let positions = self.layout.positions(subset)?;
        let radix = self.layout.radix();
        let d = self.dim();
        let mut out = CMatrix::zeros(d, d);
        for r in 0..d {
            for c in 0..d {
                let (mut r2, mut c2) = (r, c);
                for &p in &positions {
                    let (dr, dc) = (radix.digit(r, p), radix.digit(c, p));
                    r2 = radix.with_digit(r2, p, dc);
                    c2 = radix.with_digit(c2, p, dr);
                }
                out[(r2, c2)] = self.data[(r, c)];
            }
        }
        Ok(out)
    }

    /// Full-space operator acting as `op` on `targets` (in that order) and as
    /// the identity elsewhere.
    pub fn embed(&self, op: &CMatrix, targets: &[&str]) -> Result<CMatrix> {
        let positions = self.layout.positions(targets)?;
        let local: usize = positions.iter().map(|&p| self.layout.parts()[p].dim).product();
        if op.nrows() != local || op.ncols() != local {
            return Err(Error::DimensionMismatch(format!(
                "operator is {}x{}, targets {:?} span dimension {local}",
                op.nrows(),
                op.ncols(),
                targets
            )));
        }
        let radix = self.layout.radix();
        let rest: Vec<usize> = (0..self.layout.len()).filter(|p| !positions.contains(p)).collect();
        let d = self.dim();
        let mut full = CMatrix::zeros(d, d);
        for r in 0..d {
            let r_rest = radix.gather(r, &rest);
            let r_loc = radix.gather(r, &positions);
            for c in 0..d {
                if radix.gather(c, &rest) == r_rest {
                    full[(r, c)] = op[(r_loc, radix.gather(c, &positions))];
                }
            }
        }
        Ok(full)
    }

    /// `sum_j E_j rho E_j^dagger` with each `E_j` embedded on `targets`.
    pub(crate) fn conjugate_sum(&self, ops: &[CMatrix], targets: &[&str]) -> Result<Self> {
        let mut acc = CMatrix::zeros(self.dim(), self.dim());
        for op in ops {
            let e = self.embed(op, targets)?;
            acc += &e * &self.data * e.adjoint();
        }
        Ok(Self { data: acc, layout: self.layout.clone() })
    }

    pub fn apply_unitary(&self, gate: &UnitaryGate) -> Result<Self> {
        self.conjugate_sum(std::slice::from_ref(gate.matrix()), &gate.targets())
    }

    /// Applies a Kraus channel on one subsystem.
    pub fn apply_channel(&self, channel: &KrausChannel, target: &str) -> Result<Self> {
        let dim = self.layout.dim_of(target)?;
        let ops = channel.operators();
        if ops.iter().any(|m| m.nrows() != dim || m.ncols() != dim) {
            return Err(Error::DimensionMismatch(format!(
                "channel acts on dimension {}, `{target}` has dimension {dim}",
                ops.first().map_or(0, |m| m.nrows())
            )));
        }
        let deviation = channel.completeness_error();
        if deviation > COMPLETENESS_TOL {
            return Err(Error::IncompleteKraus { deviation });
        }
        self.conjugate_sum(ops, &[target])
    }

    /// Unnormalised `<psi|_target rho |psi>_target` on the remaining subsystems.
    pub(crate) fn conditional(&self, ket: &[Complex64], target: &str) -> Result<(CMatrix, Layout)> {
        self.sandwich(ket, ket, target)
    }

    /// `<bra|_target rho |ket>_target`.
    fn sandwich(&self, bra: &[Complex64], ket: &[Complex64], target: &str) -> Result<(CMatrix, Layout)> {
        let pos = self.layout.position(target)?;
        let dim = self.layout.parts()[pos].dim;
        if ket.len() != dim || bra.len() != dim {
            return Err(Error::DimensionMismatch(format!(
                "projector has dimension {}, `{target}` has dimension {dim}",
                ket.len()
            )));
        }
        let rest: Vec<usize> = (0..self.layout.len()).filter(|&p| p != pos).collect();
        if rest.is_empty() {
            return Err(Error::InvalidParameter("cannot post-select the only subsystem".into()));
        }
        let out_layout = self.layout.select(&rest);
        let radix = self.layout.radix();
        let rest_radix = Radix::new(out_layout.dims());
        let n = rest_radix.total();
        let embed_rest = |i: usize, digit: usize| {
            let mut full = 0;
            for (k, &p) in rest.iter().enumerate() {
                full = radix.with_digit(full, p, rest_radix.digit(i, k));
            }
            radix.with_digit(full, pos, digit)
        };
        let mut out = CMatrix::zeros(n, n);
        for r in 0..n {
            for c in 0..n {
                let mut acc = ZERO;
                for a in 0..dim {
                    for b in 0..dim {
                        acc += bra[a].conj() * ket[b] * self.data[(embed_rest(r, a), embed_rest(c, b))];
                    }
                }
                out[(r, c)] = acc;
            }
        }
        Ok((out, out_layout))
    }

    /// `<a|_target rho |b>_target` on the remaining subsystems.
    pub(crate) fn block(&self, target: &str, a: usize, b: usize) -> Result<(CMatrix, Layout)> {
        let dim = self.layout.dim_of(target)?;
        if a >= dim || b >= dim {
            return Err(Error::InvalidParameter(format!("block ({a},{b}) outside dimension {dim}")));
        }
        let mut bra = vec![ZERO; dim];
        let mut ket = vec![ZERO; dim];
        bra[a] = linalg::ONE;
        ket[b] = linalg::ONE;
        self.sandwich(&bra, &ket, target)
    }

    /// Projects `target` onto `proj`, traces it out and renormalises.
    /// Returns the conditional state and the outcome probability.
    pub fn postselect(&self, proj: &BlochProjector, target: &str) -> Result<(Self, f64)> {
        if self.layout.dim_of(target)? != 2 {
            return Err(Error::DimensionMismatch(format!("`{target}` is not a qubit")));
        }
        let (m, layout) = self.conditional(&proj.ket(), target)?;
        let probability = m.trace().re;
        if !(probability >= MIN_OUTCOME_PROBABILITY) {
            return Err(Error::OutcomeUnobservable { probability });
        }
        let data = m * linalg::c(1.0 / probability, 0.0);
        Ok((Self { data, layout }, probability.min(1.0)))
    }

    /// Reorders subsystems to `order` (a permutation of the labels).
    pub fn permute(&self, order: &[&str]) -> Result<Self> {
        if order.len() != self.layout.len() {
            return Err(Error::DimensionMismatch("permutation must list every subsystem".into()));
        }
        let positions = self.layout.positions(order)?;
        let radix = self.layout.radix();
        let d = self.dim();
        let mut out = CMatrix::zeros(d, d);
        let new_index: Vec<usize> = (0..d).map(|i| radix.gather(i, &positions)).collect();
        for r in 0..d {
            for c in 0..d {
                out[(new_index[r], new_index[c])] = self.data[(r, c)];
            }
        }
        Ok(Self { data: out, layout: self.layout.select(&positions) })
    }

    /// Regroups subsystems into composite ones, e.g. `[("AB", &["A","B"]), ("K", &["K"])]`.
    pub fn group(&self, groups: &[(&str, &[&str])]) -> Result<Self> {
        let order: Vec<&str> = groups.iter().flat_map(|(_, members)| members.iter().copied()).collect();
        let permuted = self.permute(&order)?;
        let mut parts = Vec::with_capacity(groups.len());
        for (name, members) in groups {
            let dim = members.iter().map(|m| permuted.layout.dim_of(m)).product::<Result<usize>>()?;
            parts.push((*name, dim));
        }
        Ok(Self { data: permuted.data, layout: Layout::new(parts)? })
    }
}
