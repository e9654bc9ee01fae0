//! Scalar rings and dense matrices over them.

use std::fmt;
use std::num::Wrapping;

use rand::Rng;

use crate::error::{Error, Result};
use crate::gfmat::BitMatrix;

/// A ring with identity-free multiplication. Commutativity is not assumed.
pub trait Ring: Copy + PartialEq + fmt::Debug + Send + Sync + 'static {
    fn zero() -> Self;
    fn add(self, rhs: Self) -> Self;
    fn sub(self, rhs: Self) -> Self;
    fn mul(self, rhs: Self) -> Self;

    fn is_zero(self) -> bool {
        self == Self::zero()
    }

    /// A uniformly random element (used by tests and benchmarks).
    fn sample<G: Rng + ?Sized>(rng: &mut G) -> Self;
}

/// The field with two elements.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Gf2(pub bool);

impl fmt::Debug for Gf2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", u8::from(self.0))
    }
}

impl Ring for Gf2 {
    fn zero() -> Self {
        Gf2(false)
    }
    fn add(self, rhs: Self) -> Self {
        Gf2(self.0 ^ rhs.0)
    }
    fn sub(self, rhs: Self) -> Self {
        Gf2(self.0 ^ rhs.0)
    }
    fn mul(self, rhs: Self) -> Self {
        Gf2(self.0 & rhs.0)
    }
    fn sample<G: Rng + ?Sized>(rng: &mut G) -> Self {
        Gf2(rng.gen())
    }
}

macro_rules! wrapping_ring {
    ($($t:ty),*) => {$(
        impl Ring for Wrapping<$t> {
            fn zero() -> Self {
                Wrapping(0)
            }
            fn add(self, rhs: Self) -> Self {
                self + rhs
            }
            fn sub(self, rhs: Self) -> Self {
                self - rhs
            }
            fn mul(self, rhs: Self) -> Self {
                self * rhs
            }
            fn sample<G: Rng + ?Sized>(rng: &mut G) -> Self {
                Wrapping(rng.gen())
            }
        }
    )*};
}

wrapping_ring!(u16, u32, u64, i64);

/// Row-major dense matrix over a [`Ring`].
#[derive(Clone, PartialEq)]
pub struct DenseMatrix<R> {
    rows: usize,
    cols: usize,
    data: Vec<R>,
}

impl<R: Ring> DenseMatrix<R> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![R::zero(); rows * cols],
        }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> R) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<R>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::dims(
                "DenseMatrix::from_vec",
                format!("{} elements for {rows}x{cols}", data.len()),
            ));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn random<G: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut G) -> Self {
        Self::from_fn(rows, cols, |_, _| R::sample(rng))
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
    pub fn get(&self, i: usize, j: usize) -> R {
        assert!(i < self.rows && j < self.cols);
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: R) {
        assert!(i < self.rows && j < self.cols);
        self.data[i * self.cols + j] = v;
    }

    pub fn as_slice(&self) -> &[R] {
        &self.data
    }

    pub fn block(&self, r0: usize, c0: usize, h: usize, w: usize) -> Self {
        Self::from_fn(h, w, |i, j| self.get(r0 + i, c0 + j))
    }

    pub fn put_block(&mut self, r0: usize, c0: usize, src: &Self) {
        for i in 0..src.rows {
            let dst = (r0 + i) * self.cols + c0;
            self.data[dst..dst + src.cols]
                .copy_from_slice(&src.data[i * src.cols..(i + 1) * src.cols]);
        }
    }

    pub fn zip_with(&self, other: &Self, f: impl Fn(R, R) -> R) -> Self {
        assert_eq!(
            (self.rows, self.cols),
            (other.rows, other.cols),
            "shape mismatch"
        );
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        }
    }

    /// Exact product by the schoolbook triple loop.
    pub fn mul_naive(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::dims(
                "DenseMatrix::mul_naive",
                format!(
                    "{}x{} times {}x{}",
                    self.rows, self.cols, other.rows, other.cols
                ),
            ));
        }
        let mut c = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let idx = i * other.cols + j;
                    c.data[idx] = c.data[idx].add(a.mul(other.get(k, j)));
                }
            }
        }
        Ok(c)
    }

    /// Classical seven-product Strassen recursion, switching to
    /// [`DenseMatrix::mul_naive`] at dimension `base`. Requires square
    /// operands of dimension `base * 2^t`.
    pub fn mul_strassen(&self, other: &Self, base: usize) -> Result<Self> {
        let n = self.rows;
        if (self.cols, other.rows, other.cols) != (n, n, n) {
            return Err(Error::dims(
                "DenseMatrix::mul_strassen",
                "expected equal square operands",
            ));
        }
        if base == 0 || !n.is_multiple_of(base) || !(n / base).is_power_of_two() {
            return Err(Error::InvalidParameter(format!(
                "strassen needs n = base * 2^t, got n = {n}, base = {base}"
            )));
        }
        Ok(strassen_rec(self, other, base))
    }
}

fn strassen_rec<R: Ring>(a: &DenseMatrix<R>, b: &DenseMatrix<R>, base: usize) -> DenseMatrix<R> {
    let n = a.rows;
    if n <= base {
        return a.mul_naive(b).expect("square blocks");
    }
    let h = n / 2;
    let q = |m: &DenseMatrix<R>| {
        [
            m.block(0, 0, h, h),
            m.block(0, h, h, h),
            m.block(h, 0, h, h),
            m.block(h, h, h, h),
        ]
    };
    let [a11, a12, a21, a22] = q(a);
    let [b11, b12, b21, b22] = q(b);
    let add = |x: &DenseMatrix<R>, y: &DenseMatrix<R>| x.zip_with(y, R::add);
    let sub = |x: &DenseMatrix<R>, y: &DenseMatrix<R>| x.zip_with(y, R::sub);

    let m1 = strassen_rec(&add(&a11, &a22), &add(&b11, &b22), base);
    let m2 = strassen_rec(&add(&a21, &a22), &b11, base);
    let m3 = strassen_rec(&a11, &sub(&b12, &b22), base);
    let m4 = strassen_rec(&a22, &sub(&b21, &b11), base);
    let m5 = strassen_rec(&add(&a11, &a12), &b22, base);
    let m6 = strassen_rec(&sub(&a21, &a11), &add(&b11, &b12), base);
    let m7 = strassen_rec(&sub(&a12, &a22), &add(&b21, &b22), base);

    let mut c = DenseMatrix::zeros(n, n);
    c.put_block(0, 0, &add(&sub(&add(&m1, &m4), &m5), &m7));
    c.put_block(0, h, &add(&m3, &m5));
    c.put_block(h, 0, &add(&m2, &m4));
    c.put_block(h, h, &add(&add(&sub(&m1, &m2), &m3), &m6));
    c
}

impl DenseMatrix<Gf2> {
    pub fn from_bits(m: &BitMatrix) -> Self {
        Self::from_fn(m.rows(), m.cols(), |i, j| Gf2(m.get(i, j)))
    }

    pub fn to_bits(&self) -> BitMatrix {
        BitMatrix::from_fn(self.rows, self.cols, |i, j| self.get(i, j).0)
    }
}

impl<R: Ring> fmt::Debug for DenseMatrix<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut l = f.debug_list();
        for i in 0..self.rows {
            l.entry(&&self.data[i * self.cols..(i + 1) * self.cols]);
        }
        l.finish()
    }
}
