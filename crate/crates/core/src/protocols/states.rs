use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix, ONE, ZERO};
use crate::qstate::{BlochProjector, DensityMatrix, Layout};

/// Carrier preparation used by every beta iteration.
pub const BETA_CARRIER_CX: f64 = -0.5;

fn kron_kets(kets: &[[Complex64; 2]]) -> Vec<Complex64> {
    kets.iter().fold(vec![ONE], |acc, k| {
        acc.iter().flat_map(|a| k.iter().map(move |b| a * b)).collect()
    })
}

/// `(|0> + e^{i j pi/2}|1>)/sqrt2`; negative `j` wraps mod 4.
fn gamma(j: i32) -> [Complex64; 2] {
    [linalg::c(FRAC_1_SQRT_2, 0.0), Complex64::from_polar(FRAC_1_SQRT_2, j as f64 * FRAC_PI_2)]
}

const ZERO_KET: [Complex64; 2] = [ONE, ZERO];
const ONE_KET: [Complex64; 2] = [ZERO, ONE];

/// Classically correlated three-qubit resource on `A, B, K`:
/// `(sum_j |g_j, g_-j, 0><..| + sum_l |l, l, 1><..|) / 6`.
pub fn alpha_initial_state() -> DensityMatrix {
    let mut m = CMatrix::zeros(8, 8);
    for j in 0..4 {
        m += linalg::outer(&kron_kets(&[gamma(j), gamma(-j), ZERO_KET]));
    }
    for l in [ZERO_KET, ONE_KET] {
        m += linalg::outer(&kron_kets(&[l, l, ONE_KET]));
    }
    let m = m * linalg::c(1.0 / 6.0, 0.0);
    DensityMatrix::from_parts(m, Layout::qubits(&["A", "B", "K"])).expect("8x8 on three qubits")
}

/// Separable Bell-diagonal memory state on `A, B`:
/// `(sum_j |z_j z_j| + 1/2 sum_j |x_j x_j| + 1/2 sum_j |y_j y_{1-j}|) / 4`.
pub fn beta_memory_state() -> DensityMatrix {
    let pairs: [(BlochProjector, BlochProjector, f64); 6] = [
        (BlochProjector::computational(0), BlochProjector::computational(0), 1.0),
        (BlochProjector::computational(1), BlochProjector::computational(1), 1.0),
        (BlochProjector::x_basis(0), BlochProjector::x_basis(0), 0.5),
        (BlochProjector::x_basis(1), BlochProjector::x_basis(1), 0.5),
        (BlochProjector::y_basis(0), BlochProjector::y_basis(1), 0.5),
        (BlochProjector::y_basis(1), BlochProjector::y_basis(0), 0.5),
    ];
    let mut m = CMatrix::zeros(4, 4);
    for (a, b, w) in pairs {
        m += linalg::kron(&a.matrix(), &b.matrix()) * linalg::c(w / 4.0, 0.0);
    }
    DensityMatrix::from_parts(m, Layout::qubits(&["A", "B"])).expect("4x4 on two qubits")
}

/// `(I + c_x X)/2` on `K`.
pub fn carrier_state(c_x: f64) -> Result<DensityMatrix> {
    if !(-1.0..=1.0).contains(&c_x) {
        return Err(Error::InvalidParameter(format!("c_x = {c_x} outside [-1, 1]")));
    }
    let m = (linalg::identity(2) + linalg::pauli_x() * linalg::c(c_x, 0.0)) * linalg::c(0.5, 0.0);
    DensityMatrix::from_parts(m, Layout::qubits(&["K"]))
}

/// Memory state tensored with an uncorrelated carrier, on `A, B, K`.
pub fn beta_initial_state(c_x: f64) -> Result<DensityMatrix> {
    beta_memory_state().tensor(&carrier_state(c_x)?)
}

pub fn bell_phi_plus() -> DensityMatrix {
    let h = linalg::c(FRAC_1_SQRT_2, 0.0);
    DensityMatrix::pure(&[h, ZERO, ZERO, h], Layout::qubits(&["A", "B"])).expect("Bell state")
}

pub fn bell_phi_plus_ket() -> [Complex64; 4] {
    let h = linalg::c(FRAC_1_SQRT_2, 0.0);
    [h, ZERO, ZERO, h]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::correlations::{negativity, Bipartition};
    use crate::linalg::max_abs_diff;

    #[test]
    fn alpha_state_is_valid_and_carrier_separable() {
        let rho = alpha_initial_state();
        rho.check_invariants().unwrap();
        let cut = Bipartition::new(&["K"], &["A", "B"]).unwrap();
        assert_eq!(negativity(&rho, &cut).unwrap(), 0.0);
    }

    #[test]
    fn alpha_state_spectrum() {
        // The K=0 block is (1/6) sum_j |v_j><v_j| with v_j = |g_j g_-j>; its
        // non-zero spectrum equals that of the Gram matrix G_jk = <v_j|v_k> / 6.
        // The K=1 block adds two eigenvalues 1/6.
        let v: Vec<Vec<Complex64>> = (0..4).map(|j| kron_kets(&[gamma(j), gamma(-j)])).collect();
        let gram = CMatrix::from_fn(4, 4, |j, k| {
            v[j].iter().zip(&v[k]).map(|(a, b)| a.conj() * b).sum::<Complex64>() / 6.0
        });
        let mut expected = linalg::hermitian_eigenvalues(&gram);
        expected.extend([1.0 / 6.0, 1.0 / 6.0, 0.0, 0.0, 0.0, 0.0]);
        expected.retain(|l| l.abs() > 1e-12);
        expected.sort_by(f64::total_cmp);
        let mut ev: Vec<f64> = alpha_initial_state().eigenvalues();
        ev.retain(|l| l.abs() > 1e-12);
        assert_eq!(ev.len(), expected.len());
        for (a, b) in ev.iter().zip(&expected) {
            assert!((a - b).abs() < 1e-12);
        }
        // circulant Gram: {2, 1, 1, 0}/6
        let want = [1.0 / 6.0, 1.0 / 6.0, 1.0 / 6.0, 1.0 / 6.0, 1.0 / 3.0];
        for (a, b) in ev.iter().zip(want) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn alpha_state_invariant_under_gamma_relabeling() {
        // j -> j+1 maps |g_j g_-j> to |g_{j+1} g_{-j-1}>: the phase gate
        // diag(1, i) on A and diag(1, -i) on B; the |l l 1> terms are fixed.
        let rho = alpha_initial_state();
        let s = linalg::from_rows(&[&[ONE, ZERO], &[ZERO, linalg::I]]);
        let u = linalg::kron(&linalg::kron(&s, &s.adjoint()), &linalg::identity(2));
        let rotated = &u * rho.data() * u.adjoint();
        assert!(max_abs_diff(&rotated, rho.data()) < 1e-15);
    }

    #[test]
    fn beta_memory_state_is_ppt() {
        let rho = beta_memory_state();
        rho.check_invariants().unwrap();
        let pt = rho.partial_transpose(&["A"]).unwrap();
        assert!(linalg::hermitian_eigenvalues(&pt)[0] >= -1e-15);
    }

    #[test]
    fn carrier_at_zero_is_maximally_mixed() {
        let k = carrier_state(0.0).unwrap();
        assert!(max_abs_diff(k.data(), &(linalg::identity(2) * linalg::c(0.5, 0.0))) < 1e-15);
        assert!(carrier_state(1.5).is_err());
    }

    #[test]
    fn beta_initial_traces_back_to_memory_state() {
        let full = beta_initial_state(-0.5).unwrap();
        let ab = full.partial_trace(&["A", "B"]).unwrap();
        assert!(max_abs_diff(ab.data(), beta_memory_state().data()) < 1e-15);
    }
}
