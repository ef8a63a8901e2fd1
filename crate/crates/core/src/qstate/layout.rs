use crate::error::{Error, Result};

/// One tensor factor of a composite Hilbert space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subsystem {
    pub label: String,
    pub dim: usize,
}

/// Ordered subsystem list. The first entry is the most significant digit of a
/// basis index, so `|a,b,k>` sits at `a*d_b*d_k + b*d_k + k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Layout {
    parts: Vec<Subsystem>,
}

impl Layout {
    pub fn new<S: Into<String>>(parts: impl IntoIterator<Item = (S, usize)>) -> Result<Self> {
        let parts: Vec<Subsystem> = parts
            .into_iter()
            .map(|(label, dim)| Subsystem { label: label.into(), dim })
            .collect();
        for (i, p) in parts.iter().enumerate() {
            if p.dim == 0 {
                return Err(Error::DimensionMismatch(format!("subsystem `{}` has dimension 0", p.label)));
            }
            if parts[..i].iter().any(|q| q.label == p.label) {
                return Err(Error::DuplicateLabel(p.label.clone()));
            }
        }
        Ok(Self { parts })
    }

    /// All-qubit layout.
    pub fn qubits(labels: &[&str]) -> Self {
        Self::new(labels.iter().map(|l| (*l, 2))).expect("qubit labels must be distinct")
    }

    pub fn parts(&self) -> &[Subsystem] {
        &self.parts
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn dims(&self) -> Vec<usize> {
        self.parts.iter().map(|p| p.dim).collect()
    }

    pub fn labels(&self) -> Vec<&str> {
        self.parts.iter().map(|p| p.label.as_str()).collect()
    }

    pub fn total_dim(&self) -> usize {
        self.parts.iter().map(|p| p.dim).product()
    }

    pub fn position(&self, label: &str) -> Result<usize> {
        self.parts
            .iter()
            .position(|p| p.label == label)
            .ok_or_else(|| Error::UnknownLabel(label.to_string()))
    }

    pub fn contains(&self, label: &str) -> bool {
        self.parts.iter().any(|p| p.label == label)
    }

    /// Positions of `labels`, in the order given.
    pub fn positions(&self, labels: &[&str]) -> Result<Vec<usize>> {
        let mut out = Vec::with_capacity(labels.len());
        for l in labels {
            let pos = self.position(l)?;
            if out.contains(&pos) {
                return Err(Error::DuplicateLabel(l.to_string()));
            }
            out.push(pos);
        }
        Ok(out)
    }

    pub fn dim_of(&self, label: &str) -> Result<usize> {
        Ok(self.parts[self.position(label)?].dim)
    }

    pub(crate) fn select(&self, positions: &[usize]) -> Layout {
        Layout { parts: positions.iter().map(|&p| self.parts[p].clone()).collect() }
    }

    pub(crate) fn concat(&self, other: &Layout) -> Result<Layout> {
        Layout::new(
            self.parts
                .iter()
                .chain(other.parts.iter())
                .map(|p| (p.label.clone(), p.dim)),
        )
    }

    pub(crate) fn radix(&self) -> Radix {
        Radix::new(self.dims())
    }
}

/// Mixed-radix digit arithmetic over a fixed list of dimensions.
#[derive(Debug, Clone)]
pub(crate) struct Radix {
    dims: Vec<usize>,
    strides: Vec<usize>,
}

impl Radix {
    pub fn new(dims: Vec<usize>) -> Self {
        let mut strides = vec![1; dims.len()];
        for k in (0..dims.len().saturating_sub(1)).rev() {
            strides[k] = strides[k + 1] * dims[k + 1];
        }
        Self { dims, strides }
    }

    pub fn total(&self) -> usize {
        self.dims.iter().product()
    }

    #[inline]
    pub fn digit(&self, index: usize, pos: usize) -> usize {
        (index / self.strides[pos]) % self.dims[pos]
    }

    #[inline]
    pub fn with_digit(&self, index: usize, pos: usize, value: usize) -> usize {
        index - self.digit(index, pos) * self.strides[pos] + value * self.strides[pos]
    }

    /// Packs the digits at `positions` (most significant first) into a local index.
    pub fn gather(&self, index: usize, positions: &[usize]) -> usize {
        positions
            .iter()
            .fold(0, |acc, &p| acc * self.dims[p] + self.digit(index, p))
    }
}
