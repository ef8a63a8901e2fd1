use std::f64::consts::{FRAC_PI_2, PI, TAU};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix};

/// Rank-1 qubit projector `|psi><psi|` with
/// `|psi> = cos(theta/2)|0> + e^{i phi} sin(theta/2)|1>`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlochProjector {
    theta: f64,
    phi: f64,
}

impl BlochProjector {
    /// `theta` must lie in `[0, pi]`; `phi` is wrapped into `[0, 2pi)`.
    pub fn new(theta: f64, phi: f64) -> Result<Self> {
        if !(0.0..=PI).contains(&theta) || !phi.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "Bloch angles out of domain: theta={theta}, phi={phi}"
            )));
        }
        Ok(Self::from_sphere(theta, phi))
    }

    /// Normalises any point of the sphere. Out-of-range `theta` is reflected
    /// through the pole, which shifts `phi` by `pi`.
    pub(crate) fn from_sphere(theta: f64, phi: f64) -> Self {
        let mut theta = theta.rem_euclid(TAU);
        let mut phi = phi;
        if theta > PI {
            theta = TAU - theta;
            phi += PI;
        }
        let mut phi = phi.rem_euclid(TAU);
        // rem_euclid can round up to exactly TAU
        if phi >= TAU {
            phi = 0.0;
        }
        // phi is meaningless at the poles
        if theta == 0.0 || theta == PI {
            phi = 0.0;
        }
        Self { theta, phi }
    }

    /// `|0>` (`outcome = 0`) or `|1>`.
    pub fn computational(outcome: u8) -> Self {
        if outcome == 0 { Self::from_sphere(0.0, 0.0) } else { Self::from_sphere(PI, 0.0) }
    }

    /// `|x_0> = |+>` or `|x_1> = |->`.
    pub fn x_basis(outcome: u8) -> Self {
        Self::from_sphere(FRAC_PI_2, if outcome == 0 { 0.0 } else { PI })
    }

    /// `|y_0> = (|0> + i|1>)/sqrt2` or `|y_1>`.
    pub fn y_basis(outcome: u8) -> Self {
        Self::from_sphere(FRAC_PI_2, if outcome == 0 { FRAC_PI_2 } else { 3.0 * FRAC_PI_2 })
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    /// The orthogonal outcome `I - Pi`.
    pub fn complement(&self) -> Self {
        Self::from_sphere(PI - self.theta, self.phi + PI)
    }

    pub fn ket(&self) -> [Complex64; 2] {
        let (s, c) = (self.theta / 2.0).sin_cos();
        [linalg::c(c, 0.0), Complex64::from_polar(s, self.phi)]
    }

    pub fn matrix(&self) -> CMatrix {
        linalg::outer(&self.ket())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{hermitian_eigenvalues, hermiticity_error, identity, max_abs_diff};

    #[test]
    fn projector_is_rank_one_idempotent_hermitian() {
        for &(t, p) in &[(0.0, 0.0), (0.3, 1.2), (FRAC_PI_2, 5.0), (PI, 2.0), (2.9, 6.2)] {
            let m = BlochProjector::new(t, p).unwrap().matrix();
            assert!(max_abs_diff(&(&m * &m), &m) < 1e-12);
            assert!(hermiticity_error(&m) < 1e-12);
            let ev = hermitian_eigenvalues(&m);
            assert!(ev[0].abs() < 1e-12 && (ev[1] - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn complement_completes_the_basis() {
        let p = BlochProjector::new(1.1, 4.0).unwrap();
        let sum = p.matrix() + p.complement().matrix();
        assert!(max_abs_diff(&sum, &identity(2)) < 1e-12);
    }

    #[test]
    fn beamsplitter_projectors_are_half_identity_plus_sigma_y() {
        let half = linalg::c(0.5, 0.0);
        let plus = (identity(2) + linalg::pauli_y()) * half;
        let minus = (identity(2) - linalg::pauli_y()) * half;
        assert!(max_abs_diff(&BlochProjector::y_basis(0).matrix(), &plus) < 1e-15);
        assert!(max_abs_diff(&BlochProjector::y_basis(1).matrix(), &minus) < 1e-15);
    }

    #[test]
    fn rejects_theta_outside_domain() {
        assert!(BlochProjector::new(-0.1, 0.0).is_err());
        assert!(BlochProjector::new(3.2, 0.0).is_err());
        assert!((BlochProjector::new(1.0, -FRAC_PI_2).unwrap().phi() - 3.0 * FRAC_PI_2).abs() < 1e-15);
    }
}
