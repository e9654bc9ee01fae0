//! Dense bit-packed matrices over GF(2) / the Boolean semiring.
//!
//! Storage is row-major. Each row occupies `stride = ceil(cols / 64)` words and
//! bit `j` of a row lives in word `j / 64` at bit position `j % 64` (LSB first).
//! Bits past column `cols` in the last word of a row are always zero.

pub(crate) mod format;
mod kernels;
mod stats;

pub use kernels::{bool_mul_naive, gf2_mul_naive, gf2_mul_strassen};
pub use stats::InstanceStats;

use std::fmt;

use rand::Rng;

/// Width of a storage word in bits.
pub const WORD_BITS: usize = 64;

#[inline]
pub(crate) fn words_for(cols: usize) -> usize {
    cols.div_ceil(WORD_BITS)
}

#[inline]
fn tail_mask(cols: usize) -> u64 {
    match cols % WORD_BITS {
        0 => !0,
        r => (1u64 << r) - 1,
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitMatrix {
    rows: usize,
    cols: usize,
    stride: usize,
    data: Vec<u64>,
}

impl BitMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        let stride = words_for(cols);
        Self {
            rows,
            cols,
            stride,
            data: vec![0; rows * stride],
        }
    }

    pub fn ones(rows: usize, cols: usize) -> Self {
        let mut m = Self::zeros(rows, cols);
        m.data.iter_mut().for_each(|w| *w = !0);
        m.normalize();
        m
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> bool) -> Self {
        let mut m = Self::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                if f(i, j) {
                    m.set(i, j, true);
                }
            }
        }
        m
    }

    /// Builds a matrix from rows of `0`/`1` bytes or bools.
    pub fn from_rows<R: AsRef<[u8]>>(rows: &[R]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.as_ref().len());
        Self::from_fn(r, c, |i, j| {
            let row = rows[i].as_ref();
            assert_eq!(row.len(), c, "ragged rows");
            row[j] != 0
        })
    }

    /// Uniformly random bits.
    pub fn random<G: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut G) -> Self {
        let mut m = Self::zeros(rows, cols);
        rng.fill(&mut m.data[..]);
        m.normalize();
        m
    }

    /// Independent Bernoulli(`density`) bits.
    pub fn random_with_density<G: Rng + ?Sized>(
        rows: usize,
        cols: usize,
        density: f64,
        rng: &mut G,
    ) -> Self {
        Self::from_fn(rows, cols, |_, _| rng.gen_bool(density.clamp(0.0, 1.0)))
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn dims(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    #[inline]
    pub fn stride(&self) -> usize {
        self.stride
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> bool {
        assert!(
            i < self.rows && j < self.cols,
            "bit ({i}, {j}) out of range"
        );
        (self.data[i * self.stride + j / WORD_BITS] >> (j % WORD_BITS)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: bool) {
        assert!(
            i < self.rows && j < self.cols,
            "bit ({i}, {j}) out of range"
        );
        let w = &mut self.data[i * self.stride + j / WORD_BITS];
        let bit = 1u64 << (j % WORD_BITS);
        if v {
            *w |= bit;
        } else {
            *w &= !bit;
        }
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[u64] {
        &self.data[i * self.stride..(i + 1) * self.stride]
    }

    #[inline]
    pub(crate) fn row_mut(&mut self, i: usize) -> &mut [u64] {
        &mut self.data[i * self.stride..(i + 1) * self.stride]
    }

    pub fn words(&self) -> &[u64] {
        &self.data
    }

    /// True when every padding bit is zero.
    pub fn is_normalized(&self) -> bool {
        let mask = tail_mask(self.cols);
        self.stride == 0 || (0..self.rows).all(|i| self.row(i)[self.stride - 1] & !mask == 0)
    }

    pub(crate) fn normalize(&mut self) {
        if self.stride == 0 {
            return;
        }
        let mask = tail_mask(self.cols);
        let stride = self.stride;
        for i in 0..self.rows {
            self.data[i * stride + stride - 1] &= mask;
        }
    }

    pub fn count_ones(&self) -> u64 {
        self.data.iter().map(|w| u64::from(w.count_ones())).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&w| w == 0)
    }

    fn zip_with(&self, other: &Self, op: &'static str, f: impl Fn(u64, u64) -> u64) -> Self {
        assert_eq!(self.dims(), other.dims(), "{op}: shape mismatch");
        Self {
            rows: self.rows,
            cols: self.cols,
            stride: self.stride,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        }
    }

    pub fn xor(&self, other: &Self) -> Self {
        self.zip_with(other, "xor", |a, b| a ^ b)
    }

    pub fn and(&self, other: &Self) -> Self {
        self.zip_with(other, "and", |a, b| a & b)
    }

    pub fn or(&self, other: &Self) -> Self {
        self.zip_with(other, "or", |a, b| a | b)
    }

    pub fn xor_assign(&mut self, other: &Self) {
        assert_eq!(self.dims(), other.dims(), "xor_assign: shape mismatch");
        self.data
            .iter_mut()
            .zip(&other.data)
            .for_each(|(a, b)| *a ^= b);
    }

    /// Entrywise `self <= other`, i.e. every set bit of `self` is set in `other`.
    pub fn is_dominated_by(&self, other: &Self) -> bool {
        self.dims() == other.dims() && self.data.iter().zip(&other.data).all(|(a, b)| a & !b == 0)
    }

    /// Count of positions set in `self` but clear in `other`.
    pub fn count_excess_over(&self, other: &Self) -> u64 {
        assert_eq!(self.dims(), other.dims());
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| u64::from((a & !b).count_ones()))
            .sum()
    }

    /// Copies the `h x w` block whose top-left corner is `(r0, c0)`.
    pub fn block(&self, r0: usize, c0: usize, h: usize, w: usize) -> Self {
        assert!(
            r0 + h <= self.rows && c0 + w <= self.cols,
            "block out of range"
        );
        let mut out = Self::zeros(h, w);
        let shift = c0 % WORD_BITS;
        let w0 = c0 / WORD_BITS;
        for i in 0..h {
            let src = self.row(r0 + i);
            let dst = out.row_mut(i);
            for (j, d) in dst.iter_mut().enumerate() {
                let lo = src.get(w0 + j).copied().unwrap_or(0);
                *d = if shift == 0 {
                    lo
                } else {
                    let hi = src.get(w0 + j + 1).copied().unwrap_or(0);
                    (lo >> shift) | (hi << (WORD_BITS - shift))
                };
            }
        }
        out.normalize();
        out
    }

    /// Overwrites the block at `(r0, c0)` with `src`.
    pub fn put_block(&mut self, r0: usize, c0: usize, src: &Self) {
        assert!(
            r0 + src.rows <= self.rows && c0 + src.cols <= self.cols,
            "block out of range"
        );
        if c0.is_multiple_of(WORD_BITS) {
            let w0 = c0 / WORD_BITS;
            let full = src.cols / WORD_BITS;
            let rem = src.cols % WORD_BITS;
            for i in 0..src.rows {
                let s = src.row(i);
                let d = self.row_mut(r0 + i);
                d[w0..w0 + full].copy_from_slice(&s[..full]);
                if rem != 0 {
                    let mask = (1u64 << rem) - 1;
                    d[w0 + full] = (d[w0 + full] & !mask) | (s[full] & mask);
                }
            }
        } else {
            for i in 0..src.rows {
                for j in 0..src.cols {
                    self.set(r0 + i, c0 + j, src.get(i, j));
                }
            }
        }
    }

    /// Splits an even-dimensioned square matrix into `[A11, A12, A21, A22]`.
    pub fn quadrants(&self) -> [Self; 4] {
        assert!(
            self.rows == self.cols && self.rows.is_multiple_of(2),
            "quadrants need an even square matrix"
        );
        let h = self.rows / 2;
        [
            self.block(0, 0, h, h),
            self.block(0, h, h, h),
            self.block(h, 0, h, h),
            self.block(h, h, h, h),
        ]
    }

    /// Inverse of [`BitMatrix::quadrants`].
    pub fn from_quadrants(q: [Self; 4]) -> Self {
        let h = q[0].rows;
        assert!(
            q.iter().all(|b| b.dims() == (h, h)),
            "quadrant shape mismatch"
        );
        let mut out = Self::zeros(2 * h, 2 * h);
        out.put_block(0, 0, &q[0]);
        out.put_block(0, h, &q[1]);
        out.put_block(h, 0, &q[2]);
        out.put_block(h, h, &q[3]);
        out
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in self.iter_row_ones(i) {
                t.set(j, i, true);
            }
        }
        t
    }

    /// Column indices of the set bits in row `i`, ascending.
    pub fn iter_row_ones(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        self.row(i).iter().enumerate().flat_map(|(wi, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let t = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(wi * WORD_BITS + t)
            })
        })
    }
}

impl fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BitMatrix {}x{}", self.rows, self.cols)?;
        for i in 0..self.rows {
            for j in 0..self.cols {
                f.write_str(if self.get(i, j) { "1" } else { "0" })?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}
