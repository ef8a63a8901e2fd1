use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix, ONE};

/// A unitary acting on an ordered list of named subsystems.
#[derive(Debug, Clone)]
pub struct UnitaryGate {
    matrix: CMatrix,
    targets: Vec<String>,
}

impl UnitaryGate {
    pub fn new(matrix: CMatrix, targets: &[&str]) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::DimensionMismatch("gate matrix is not square".into()));
        }
        let n = matrix.nrows();
        let err = linalg::max_abs_diff(&(matrix.adjoint() * &matrix), &linalg::identity(n));
        if err > 1e-12 {
            return Err(Error::InvariantViolation(format!("gate is not unitary (|U'U - I| = {err:.2e})")));
        }
        Ok(Self { matrix, targets: targets.iter().map(|s| s.to_string()).collect() })
    }

    fn known(matrix: CMatrix, targets: &[&str]) -> Self {
        Self::new(matrix, targets).expect("built-in gates are unitary")
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn targets(&self) -> Vec<&str> {
        self.targets.iter().map(String::as_str).collect()
    }

    pub fn cnot(control: &str, target: &str) -> Self {
        let m = linalg::real_matrix(
            4,
            &[1., 0., 0., 0., 0., 1., 0., 0., 0., 0., 0., 1., 0., 0., 1., 0.],
        );
        Self::known(m, &[control, target])
    }

    /// `diag(1, 1, 1, -1)`; symmetric in its two qubits.
    pub fn cphase(a: &str, b: &str) -> Self {
        let m = CMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![ONE, ONE, ONE, -ONE]));
        Self::known(m, &[a, b])
    }

    pub fn hadamard(target: &str) -> Self {
        Self::known(linalg::hadamard(), &[target])
    }

    pub fn pauli_x(target: &str) -> Self {
        Self::known(linalg::pauli_x(), &[target])
    }

    pub fn pauli_y(target: &str) -> Self {
        Self::known(linalg::pauli_y(), &[target])
    }

    pub fn pauli_z(target: &str) -> Self {
        Self::known(linalg::pauli_z(), &[target])
    }

    pub fn identity(targets: &[&str], dim: usize) -> Self {
        Self::known(linalg::identity(dim), targets)
    }

    /// Tensor product of two gates on disjoint targets.
    pub fn tensor(&self, other: &UnitaryGate) -> Result<Self> {
        if self.targets.iter().any(|t| other.targets.contains(t)) {
            return Err(Error::InvalidParameter("tensor of gates with overlapping targets".into()));
        }
        let mut targets = self.targets();
        targets.extend(other.targets());
        Ok(Self {
            matrix: linalg::kron(&self.matrix, &other.matrix),
            targets: targets.iter().map(|s| s.to_string()).collect(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_non_unitary() {
        let m = linalg::real_matrix(2, &[1.0, 1.0, 0.0, 1.0]);
        assert!(matches!(UnitaryGate::new(m, &["A"]), Err(Error::InvariantViolation(_))));
    }

    #[test]
    fn tensor_rejects_overlap() {
        assert!(UnitaryGate::hadamard("A").tensor(&UnitaryGate::pauli_x("A")).is_err());
        let hh = UnitaryGate::hadamard("A").tensor(&UnitaryGate::hadamard("B")).unwrap();
        assert_eq!(hh.targets(), vec!["A", "B"]);
        assert_eq!(hh.matrix().nrows(), 4);
    }
}
