//! Protocol results against routes that avoid the label/radix machinery:
//! explicit Kronecker products and closed forms.

use edss_core::channels::{ChannelKind, NoiseScenario};
use edss_core::linalg::{self, c, kron, CMatrix};
use edss_core::protocols::{beta_memory_state, run_beta, run_ded, Measurement};
use edss_core::sweeps::bisect_death;

fn diag(v: &[f64]) -> CMatrix {
    CMatrix::from_diagonal(&nalgebra::DVector::from_iterator(v.len(), v.iter().map(|&x| c(x, 0.0))))
}

/// Negativity of a 4x4 matrix via an explicit partial transpose on the second qubit.
fn negativity_4x4(m: &CMatrix) -> f64 {
    let mut pt = CMatrix::zeros(4, 4);
    for a in 0..2 {
        for b in 0..2 {
            for a2 in 0..2 {
                for b2 in 0..2 {
                    pt[(2 * a + b2, 2 * a2 + b)] = m[(2 * a + b, 2 * a2 + b2)];
                }
            }
        }
    }
    let eig = nalgebra::SymmetricEigen::new(pt).eigenvalues;
    eig.iter().filter(|&&l| l < -1e-12).map(|l| -l).sum()
}

/// Noiseless beta on plain 8x8 matrices, qubit order A, B, K.
fn beta_oracle(iterations: usize) -> Vec<(f64, f64)> {
    let i2 = linalg::identity(2);
    let cz = diag(&[1., 1., 1., -1.]);
    let cz_ak = {
        // CZ on (A, K) = |0><0|_A (x) I (x) I + |1><1|_A (x) I (x) Z
        kron(&kron(&diag(&[1., 0.]), &i2), &i2) + kron(&kron(&diag(&[0., 1.]), &i2), &linalg::pauli_z())
    };
    let cz_bk = kron(&i2, &cz);
    let carrier = (linalg::identity(2) - linalg::pauli_x() * c(0.5, 0.0)) * c(0.5, 0.0);
    let h = std::f64::consts::FRAC_1_SQRT_2;
    // I_AB (x) <x1|
    let bra = CMatrix::from_row_slice(1, 2, &[c(h, 0.), c(-h, 0.)]);
    let proj = kron(&linalg::identity(4), &bra);

    let mut ab = beta_memory_state().data().clone();
    let mut out = Vec::new();
    for _ in 0..iterations {
        let rho = kron(&ab, &carrier);
        let rho = &cz_ak * rho * cz_ak.adjoint();
        let rho = &cz_bk * rho * cz_bk.adjoint();
        let m = &proj * rho * proj.adjoint();
        let p = m.trace().re;
        ab = m * c(1.0 / p, 0.0);
        out.push((negativity_4x4(&ab), p));
    }
    out
}

#[test]
fn beta_iterations_match_explicit_matrices() {
    let oracle = beta_oracle(4);
    let run = run_beta(&NoiseScenario::noiseless(), 4, Measurement::Nominal).unwrap();
    for (i, (n, p)) in oracle.iter().enumerate() {
        assert!((run.iteration_negativities[i] - n).abs() < 1e-12, "iteration {}", i + 1);
        assert!((run.iteration_probabilities[i] - p).abs() < 1e-12, "iteration {}", i + 1);
    }
    // frozen from the oracle
    let frozen = [0.1, 1.0 / 7.0, 0.158536585365854, 0.163934426229508];
    for (n, f) in oracle.iter().zip(frozen) {
        assert!((n.0 - f).abs() < 1e-12, "{} vs {f}", n.0);
    }
}

#[test]
fn ded_matches_closed_forms() {
    for i in 0..=20 {
        let p = i as f64 / 20.0;
        let lambda: f64 = 1.0 - 4.0 * p / 3.0;
        let w = lambda * lambda;
        let cases = [
            (ChannelKind::Dephasing, (1.0 - p).powi(2) / 2.0),
            (ChannelKind::AmplitudeDamping, (1.0 - p).powi(2) / 2.0),
            (ChannelKind::Depolarizing, ((3.0 * w - 1.0) / 4.0).max(0.0)),
        ];
        for (kind, expected) in cases {
            let n = run_ded(&NoiseScenario::single(kind, p)).unwrap().negativity_ab;
            let expected = if expected < 1e-12 { 0.0 } else { expected };
            assert!((n - expected).abs() < 1e-12, "{kind} p={p}: {n} vs {expected}");
        }
    }
}

#[test]
fn depolarizing_ded_death_matches_werner_threshold() {
    // weight (1 - 4p/3)^2 = 1/3
    let p_star = 0.75 * (1.0 - 1.0 / 3f64.sqrt());
    let f = |p| Ok(run_ded(&NoiseScenario::single(ChannelKind::Depolarizing, p))?.negativity_ab);
    let (lo, hi) = bisect_death(f, 0.0, 1.0, 1e-6).unwrap().unwrap();
    assert!(lo <= p_star + 1e-9 && p_star <= hi + 1e-9, "[{lo}, {hi}] vs {p_star}");
}
