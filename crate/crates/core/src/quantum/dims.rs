use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Ordered local dimensions with a unique label per subsystem.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SystemDims {
    dims: Vec<usize>,
    labels: Vec<String>,
}

impl SystemDims {
    pub fn new<S: Into<String>>(dims: Vec<usize>, labels: Vec<S>) -> Result<Self> {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        if dims.is_empty() {
            return Err(Error::InvalidDims("no subsystems".into()));
        }
        if dims.len() != labels.len() {
            return Err(Error::InvalidDims(format!(
                "{} dimensions but {} labels",
                dims.len(),
                labels.len()
            )));
        }
        if let Some(d) = dims.iter().find(|&&d| d == 0) {
            return Err(Error::InvalidDims(format!("local dimension {d}")));
        }
        for (i, l) in labels.iter().enumerate() {
            if labels[..i].contains(l) {
                return Err(Error::InvalidDims(format!("duplicate label `{l}`")));
            }
        }
        Ok(Self { dims, labels })
    }

    /// `n` qubits with the given labels.
    pub fn qubits(labels: &[&str]) -> Self {
        Self::new(vec![2; labels.len()], labels.to_vec()).expect("distinct labels")
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.dims.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dims.is_empty()
    }

    pub fn total(&self) -> usize {
        self.dims.iter().product()
    }

    pub fn index_of(&self, label: &str) -> Result<usize> {
        self.labels
            .iter()
            .position(|l| l == label)
            .ok_or_else(|| Error::UnknownLabel(label.to_string()))
    }

    pub fn dim_of(&self, label: &str) -> Result<usize> {
        Ok(self.dims[self.index_of(label)?])
    }

    /// Product of local dimensions of the given labels.
    pub fn dim_of_set<S: AsRef<str>>(&self, labels: &[S]) -> Result<usize> {
        labels
            .iter()
            .map(|l| self.dim_of(l.as_ref()))
            .product::<Result<usize>>()
    }

    pub fn contains(&self, label: &str) -> bool {
        self.labels.iter().any(|l| l == label)
    }

    /// Stride of subsystem `k` in a row-major basis index.
    pub(crate) fn stride(&self, k: usize) -> usize {
        self.dims[k + 1..].iter().product()
    }

    /// Dims restricted to `keep`, preserving the original order.
    pub fn restrict<S: AsRef<str>>(&self, keep: &[S]) -> Result<Self> {
        let mask = self.mask(keep)?;
        let (dims, labels) = self
            .dims
            .iter()
            .zip(&self.labels)
            .zip(&mask)
            .filter(|(_, &m)| m)
            .map(|((&d, l), _)| (d, l.clone()))
            .unzip();
        Self::new(dims, labels)
    }

    pub(crate) fn mask<S: AsRef<str>>(&self, keep: &[S]) -> Result<Vec<bool>> {
        let mut mask = vec![false; self.len()];
        for l in keep {
            mask[self.index_of(l.as_ref())?] = true;
        }
        Ok(mask)
    }
}
