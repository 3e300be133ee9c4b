//! Mixed-radix indexing of symbol tuples into dense table rows.
//!
//! A tuple `(x_0, …, x_{n-1})` with per-position alphabet sizes
//! `(m_0, …, m_{n-1})` maps to `sum_i x_i * stride_i` where the last
//! position varies fastest (row-major).

use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub struct MixedRadix {
    sizes: Vec<usize>,
    strides: Vec<usize>,
    total: usize,
}

impl MixedRadix {
    pub fn new(sizes: &[usize]) -> Result<Self> {
        let mut total = 1usize;
        for &m in sizes {
            if m == 0 {
                return Err(Error::BadQuery("alphabet size must be positive".into()));
            }
            total = total
                .checked_mul(m)
                .ok_or_else(|| Error::guard("table_size", "tuple space overflows usize"))?;
        }
        let mut strides = vec![1usize; sizes.len()];
        for i in (0..sizes.len().saturating_sub(1)).rev() {
            strides[i] = strides[i + 1] * sizes[i + 1];
        }
        Ok(Self {
            sizes: sizes.to_vec(),
            strides,
            total,
        })
    }

    pub fn total(&self) -> usize {
        self.total
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn index(&self, digits: &[usize]) -> usize {
        debug_assert_eq!(digits.len(), self.sizes.len());
        digits.iter().zip(&self.strides).map(|(&d, &s)| d * s).sum()
    }

    pub fn digit(&self, index: usize, pos: usize) -> usize {
        (index / self.strides[pos]) % self.sizes[pos]
    }

    /// Iterate all tuples in index order, reusing one digits buffer.
    pub fn for_each_tuple(&self, mut f: impl FnMut(usize, &[usize])) {
        let mut digits = vec![0usize; self.sizes.len()];
        for index in 0..self.total {
            f(index, &digits);
            for pos in (0..digits.len()).rev() {
                digits[pos] += 1;
                if digits[pos] < self.sizes[pos] {
                    break;
                }
                digits[pos] = 0;
            }
        }
    }
}
