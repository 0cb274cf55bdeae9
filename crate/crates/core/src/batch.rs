//! Equal-length batches of univariate series.

use crate::error::{Error, Result};

/// `n` univariate series of identical length `len`, stored row-major in one
/// contiguous buffer.
///
/// Every value is finite; constructors reject NaN and infinity.
#[derive(Debug, Clone, PartialEq)]
pub struct Batch {
    data: Vec<f64>,
    n: usize,
    len: usize,
}

impl Batch {
    /// Builds a batch from a list of rows.
    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let Some(first) = rows.first() else {
            return Err(Error::InvalidInput("batch has no series".into()));
        };
        let len = first.as_ref().len();
        let mut data = Vec::with_capacity(rows.len() * len);
        for (i, row) in rows.iter().enumerate() {
            let row = row.as_ref();
            if row.len() != len {
                return Err(Error::InvalidInput(format!(
                    "series {i} has length {}, expected {len}",
                    row.len()
                )));
            }
            data.extend_from_slice(row);
        }
        Self::from_flat(data, len)
    }

    /// Wraps a row-major buffer holding `data.len() / len` series.
    pub fn from_flat(data: Vec<f64>, len: usize) -> Result<Self> {
        if len == 0 {
            return Err(Error::InvalidInput("series length must be at least 1".into()));
        }
        if data.is_empty() || !data.len().is_multiple_of(len) {
            return Err(Error::InvalidInput(format!(
                "buffer of {} values is not a whole number of series of length {len}",
                data.len()
            )));
        }
        if let Some(pos) = data.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "non-finite value {} in series {} at index {}",
                data[pos],
                pos / len,
                pos % len
            )));
        }
        let n = data.len() / len;
        Ok(Self { data, n, len })
    }

    /// Caller guarantees shape and finiteness.
    pub(crate) fn from_parts_unchecked(data: Vec<f64>, n: usize, len: usize) -> Self {
        debug_assert_eq!(data.len(), n * len);
        Self { data, n, len }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Length of every series.
    pub fn len(&self) -> usize {
        self.len
    }

    /// Always false: a batch holds at least one series.
    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn series(&self, i: usize) -> &[f64] {
        &self.data[i * self.len..(i + 1) * self.len]
    }

    pub fn iter(&self) -> std::slice::ChunksExact<'_, f64> {
        self.data.chunks_exact(self.len)
    }

    pub fn as_flat(&self) -> &[f64] {
        &self.data
    }

    pub fn into_flat(self) -> Vec<f64> {
        self.data
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        self.iter().map(<[f64]>::to_vec).collect()
    }
}
