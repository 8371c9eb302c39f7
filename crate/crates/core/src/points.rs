use alloc::vec::Vec;

use crate::error::{Error, Result};

/// A finite set of vectors in `ℝ^n`, stored row-major.
///
/// Rows are kept in insertion order and duplicates are allowed; the complexity
/// averages only ever take suprema over rows.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct PointSet {
    dim: usize,
    data: Vec<f64>,
}

impl PointSet {
    pub fn new(dim: usize) -> Self {
        PointSet { dim, data: Vec::new() }
    }

    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let first = rows.first().ok_or_else(|| Error::domain("point set needs at least one row"))?;
        let dim = first.as_ref().len();
        if dim == 0 {
            return Err(Error::domain("point set rows must have positive dimension"));
        }
        let mut set = PointSet::new(dim);
        for row in rows {
            set.push(row.as_ref())?;
        }
        Ok(set)
    }

    pub fn push(&mut self, row: &[f64]) -> Result<()> {
        if row.len() != self.dim {
            return Err(Error::domain(alloc::format!(
                "row of length {} in a point set of dimension {}",
                row.len(),
                self.dim
            )));
        }
        if row.iter().any(|v| !v.is_finite()) {
            return Err(Error::domain("point set entries must be finite"));
        }
        self.data.extend_from_slice(row);
        Ok(())
    }

    /// Dimension `n` of the ambient space.
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.data.len().checked_div(self.dim).unwrap_or(0)
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> + '_ {
        self.data.chunks_exact(self.dim.max(1))
    }

    /// Applies `f` to every entry.
    pub fn map(&self, mut f: impl FnMut(f64) -> f64) -> PointSet {
        PointSet { dim: self.dim, data: self.data.iter().map(|&v| f(v)).collect() }
    }

    /// Adds `shift` to every row.
    pub fn translate(&self, shift: &[f64]) -> Result<PointSet> {
        if shift.len() != self.dim {
            return Err(Error::domain("translation vector has the wrong dimension"));
        }
        let mut data = self.data.clone();
        for row in data.chunks_exact_mut(self.dim) {
            for (v, s) in row.iter_mut().zip(shift) {
                *v += s;
            }
        }
        Ok(PointSet { dim: self.dim, data })
    }
}
