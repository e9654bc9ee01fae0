//! The broken Strassen recursion.
//!
//! One step maps 2x2 block matrices `A`, `B` to
//!
//! ```text
//! C11 = A12 B21
//! C12 = A11 B12 + A12 B22
//! C21 = A21 B11 + A22 B21
//! C22 = A21 B12 + A22 B22
//! ```
//!
//! i.e. the ordinary product without the `A11 B11` summand, using 6 block
//! products and 14 block additions. Iterating it `s` times on matrices of
//! dimension `m = b * 2^s` and multiplying the final `b x b` blocks exactly
//! yields the pseudo-product
//!
//! ```text
//! C[x][y] = sum of A[x][z] B[z][y] over z with x' | y' | z' = 1^s
//! ```
//!
//! where `u' = floor(u / b)` read as an `s`-bit word.

use std::ops::{Add, AddAssign};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::gfmat::{gf2_mul_naive, BitMatrix};
use crate::ring::{DenseMatrix, Ring};

/// Recursion depth beyond which the dimension `b * 2^s` is refused.
pub const MAX_DEPTH: u32 = 40;

/// Sub-products on blocks at least this large are evaluated in parallel.
const PAR_MIN_DIM: usize = 256;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PseudoParams {
    s: u32,
    b: usize,
}

impl PseudoParams {
    pub fn new(s: u32, b: usize) -> Result<Self> {
        if b == 0 {
            return Err(Error::InvalidParameter(
                "base dimension b must be positive".into(),
            ));
        }
        if s > MAX_DEPTH {
            return Err(Error::InvalidParameter(format!(
                "recursion depth s = {s} exceeds {MAX_DEPTH}"
            )));
        }
        if b.checked_shl(s).filter(|m| m >> s == b).is_none() {
            return Err(Error::InvalidParameter(format!(
                "m = {b} * 2^{s} overflows"
            )));
        }
        Ok(Self { s, b })
    }

    #[inline]
    pub fn s(&self) -> u32 {
        self.s
    }

    #[inline]
    pub fn b(&self) -> usize {
        self.b
    }

    /// Matrix dimension `b * 2^s`.
    #[inline]
    pub fn m(&self) -> usize {
        self.b << self.s
    }

    #[inline]
    pub(crate) fn full_mask(&self) -> usize {
        (1usize << self.s) - 1
    }
}

/// Operation counts of one pseudo-product.
///
/// `block_adds` counts additions of `b x b` blocks: adding two matrices of
/// dimension `b * 2^k` counts as `4^k`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct CounterReport {
    pub base_mults: u128,
    pub block_adds: u128,
}

impl CounterReport {
    /// Closed form for one pseudo-product at depth `s`: `(6^s, 7 (6^s - 4^s))`.
    pub fn expected(s: u32) -> Self {
        let six = 6u128.pow(s);
        let four = 4u128.pow(s);
        Self {
            base_mults: six,
            block_adds: 7 * (six - four),
        }
    }
}

impl Add for CounterReport {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self {
            base_mults: self.base_mults + rhs.base_mults,
            block_adds: self.block_adds + rhs.block_adds,
        }
    }
}

impl AddAssign for CounterReport {
    fn add_assign(&mut self, rhs: Self) {
        *self = *self + rhs;
    }
}

impl std::iter::Sum for CounterReport {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Self::default(), Add::add)
    }
}

/// Values that can be added and subtracted blockwise.
pub trait BlockAdd: Sized {
    fn add(&self, rhs: &Self) -> Self;
    fn sub(&self, rhs: &Self) -> Self;
}

/// Square operands that the recursion can split into quadrants.
pub trait Operand: BlockAdd + Send + Sync {
    fn dim(&self) -> usize;
    fn quadrants(&self) -> [Self; 4];
    fn from_quadrants(q: [Self; 4]) -> Self;
}

/// Exact multiplication of `b x b` base blocks.
pub trait BaseMul<Rhs> {
    fn base_mul(&self, rhs: &Rhs) -> Rhs;
}

impl<R: Ring> BlockAdd for R {
    fn add(&self, rhs: &Self) -> Self {
        Ring::add(*self, *rhs)
    }
    fn sub(&self, rhs: &Self) -> Self {
        Ring::sub(*self, *rhs)
    }
}

impl BlockAdd for BitMatrix {
    fn add(&self, rhs: &Self) -> Self {
        self.xor(rhs)
    }
    fn sub(&self, rhs: &Self) -> Self {
        self.xor(rhs)
    }
}

impl Operand for BitMatrix {
    fn dim(&self) -> usize {
        self.rows()
    }
    fn quadrants(&self) -> [Self; 4] {
        BitMatrix::quadrants(self)
    }
    fn from_quadrants(q: [Self; 4]) -> Self {
        BitMatrix::from_quadrants(q)
    }
}

impl BaseMul<BitMatrix> for BitMatrix {
    fn base_mul(&self, rhs: &BitMatrix) -> BitMatrix {
        gf2_mul_naive(self, rhs).expect("base blocks are conformable")
    }
}

impl<R: Ring> BlockAdd for DenseMatrix<R> {
    fn add(&self, rhs: &Self) -> Self {
        self.zip_with(rhs, Ring::add)
    }
    fn sub(&self, rhs: &Self) -> Self {
        self.zip_with(rhs, Ring::sub)
    }
}

impl<R: Ring> Operand for DenseMatrix<R> {
    fn dim(&self) -> usize {
        self.rows()
    }
    fn quadrants(&self) -> [Self; 4] {
        let h = self.rows() / 2;
        [
            self.block(0, 0, h, h),
            self.block(0, h, h, h),
            self.block(h, 0, h, h),
            self.block(h, h, h, h),
        ]
    }
    fn from_quadrants(q: [Self; 4]) -> Self {
        let h = q[0].rows();
        let mut out = Self::zeros(2 * h, 2 * h);
        out.put_block(0, 0, &q[0]);
        out.put_block(0, h, &q[1]);
        out.put_block(h, 0, &q[2]);
        out.put_block(h, h, &q[3]);
        out
    }
}

impl<R: Ring> BaseMul<DenseMatrix<R>> for DenseMatrix<R> {
    fn base_mul(&self, rhs: &DenseMatrix<R>) -> DenseMatrix<R> {
        self.mul_naive(rhs).expect("base blocks are conformable")
    }
}

/// Bit-planes of a matrix with small-integer entries, sharing one recursion.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct PlaneStack(pub Vec<BitMatrix>);

impl BlockAdd for PlaneStack {
    fn add(&self, rhs: &Self) -> Self {
        PlaneStack(self.0.iter().zip(&rhs.0).map(|(a, b)| a.xor(b)).collect())
    }
    fn sub(&self, rhs: &Self) -> Self {
        self.add(rhs)
    }
}

impl Operand for PlaneStack {
    fn dim(&self) -> usize {
        self.0.first().map_or(0, BitMatrix::rows)
    }
    fn quadrants(&self) -> [Self; 4] {
        let mut out: [Self; 4] = Default::default();
        for plane in &self.0 {
            for (dst, q) in out.iter_mut().zip(plane.quadrants()) {
                dst.0.push(q);
            }
        }
        out
    }
    fn from_quadrants(q: [Self; 4]) -> Self {
        let [q11, q12, q21, q22] = q;
        let planes = q11
            .0
            .into_iter()
            .zip(q12.0)
            .zip(q21.0)
            .zip(q22.0)
            .map(|(((a, b), c), d)| BitMatrix::from_quadrants([a, b, c, d]))
            .collect();
        PlaneStack(planes)
    }
}

impl BaseMul<PlaneStack> for BitMatrix {
    fn base_mul(&self, rhs: &PlaneStack) -> PlaneStack {
        PlaneStack(rhs.0.iter().map(|p| self.base_mul(p)).collect())
    }
}

/// One broken step on quadrants `[X11, X12, X21, X22]`.
///
/// `weight` is the number of base blocks in one quadrant; every block
/// addition here is charged `weight`.
fn broken_step<L, R, F>(
    a: [&L; 4],
    b: [&R; 4],
    weight: u128,
    parallel: bool,
    mul: F,
) -> ([R; 4], CounterReport)
where
    L: BlockAdd + Sync,
    R: BlockAdd + Send + Sync,
    F: Fn(&L, &R) -> (R, CounterReport) + Sync,
{
    let [a11, a12, a21, a22] = a;
    let [b11, b12, b21, b22] = b;

    let a_21_22 = a21.add(a22);
    let a_12_21_22 = a_21_22.add(a12);
    let a_all = a_12_21_22.add(a11);
    let a_12_22 = a12.add(a22);

    let b_21_22 = b21.add(b22);
    let b_21_22_m12 = b_21_22.sub(b12);
    let b_22_m12 = b22.sub(b12);
    let b_21_22_m12_m11 = b_21_22_m12.sub(b11);

    let pairs: [(&L, &R); 6] = [
        (a12, b21),
        (&a_21_22, &b_21_22),
        (&a_12_22, &b_22_m12),
        (&a_all, b12),
        (&a_12_21_22, &b_21_22_m12),
        (a21, &b_21_22_m12_m11),
    ];
    let mut products: Vec<(R, CounterReport)> = if parallel {
        pairs.par_iter().map(|&(l, r)| mul(l, r)).collect()
    } else {
        pairs.iter().map(|&(l, r)| mul(l, r)).collect()
    };
    let inner: CounterReport = products.iter().map(|(_, c)| *c).sum();

    let (p6, _) = products.pop().unwrap();
    let (p5, _) = products.pop().unwrap();
    let (p4, _) = products.pop().unwrap();
    let (p3, _) = products.pop().unwrap();
    let (p2, _) = products.pop().unwrap();
    let (p1, _) = products.pop().unwrap();

    let t = p5.sub(&p1);
    let u = p2.sub(&t);
    let c12 = p4.sub(&u);
    let c22 = u.add(&p3);
    let c21 = t.sub(&p6).sub(&p3);

    let counts = inner
        + CounterReport {
            base_mults: 0,
            block_adds: 14 * weight,
        };
    ([p1, c12, c21, c22], counts)
}

/// The broken 2x2 step on scalar entries `[[x11, x12], [x21, x22]]`.
pub fn broken_step_2x2<R: Ring>(a: [[R; 2]; 2], b: [[R; 2]; 2]) -> ([[R; 2]; 2], CounterReport) {
    let ([c11, c12, c21, c22], counts) = broken_step(
        [&a[0][0], &a[0][1], &a[1][0], &a[1][1]],
        [&b[0][0], &b[0][1], &b[1][0], &b[1][1]],
        1,
        false,
        |x: &R, y: &R| {
            (
                x.mul(*y),
                CounterReport {
                    base_mults: 1,
                    block_adds: 0,
                },
            )
        },
    );
    ([[c11, c12], [c21, c22]], counts)
}

fn recurse<L, R>(a: &L, b: &R, s: u32) -> (R, CounterReport)
where
    L: Operand + BaseMul<R>,
    R: Operand,
{
    if s == 0 {
        return (
            a.base_mul(b),
            CounterReport {
                base_mults: 1,
                block_adds: 0,
            },
        );
    }
    let qa = a.quadrants();
    let qb = b.quadrants();
    let weight = 4u128.pow(s - 1);
    let parallel = a.dim() >= PAR_MIN_DIM;
    let (quads, counts) = broken_step(
        [&qa[0], &qa[1], &qa[2], &qa[3]],
        [&qb[0], &qb[1], &qb[2], &qb[3]],
        weight,
        parallel,
        |x, y| recurse(x, y, s - 1),
    );
    (R::from_quadrants(quads), counts)
}

/// Pseudo-product `A (x) B` by the broken recursion, over any operand pair
/// with an exact base multiplication.
pub fn pseudo_product<L, R>(a: &L, b: &R, p: PseudoParams) -> Result<(R, CounterReport)>
where
    L: Operand + BaseMul<R>,
    R: Operand,
{
    let m = p.m();
    if a.dim() != m || b.dim() != m {
        return Err(Error::dims(
            "pseudo_product",
            format!(
                "operands of dimension {} and {} for m = {m}",
                a.dim(),
                b.dim()
            ),
        ));
    }
    Ok(recurse(a, b, p.s()))
}

/// Applies the GF(2) pseudo-product with left operand `a` to every plane.
/// The planes share one recursion tree, so the counters are those of a
/// single pseudo-product.
pub fn pseudo_product_bitplanes(
    a: &BitMatrix,
    planes: &[BitMatrix],
    p: PseudoParams,
) -> Result<(Vec<BitMatrix>, CounterReport)> {
    let m = p.m();
    if a.dims() != (m, m) {
        return Err(Error::dims(
            "pseudo_product_bitplanes",
            format!("left operand {:?} for m = {m}", a.dims()),
        ));
    }
    if let Some(bad) = planes.iter().position(|pl| pl.dims() != (m, m)) {
        return Err(Error::dims(
            "pseudo_product_bitplanes",
            format!("plane {bad} is {:?}, expected {m}x{m}", planes[bad].dims()),
        ));
    }
    if planes.is_empty() {
        return Ok((Vec::new(), CounterReport::default()));
    }
    let (out, counts) = recurse(a, &PlaneStack(planes.to_vec()), p.s());
    Ok((out.0, counts))
}

/// Whether the summand `A[x][z] B[z][y]` survives in the pseudo-product.
pub fn triple_survives(x: usize, y: usize, z: usize, p: PseudoParams) -> Result<bool> {
    let m = p.m();
    if x >= m || y >= m || z >= m {
        return Err(Error::OutOfRange(format!(
            "triple ({x}, {y}, {z}) outside [0, {m})"
        )));
    }
    Ok(survives_unchecked(x, y, z, p))
}

#[inline]
pub(crate) fn survives_unchecked(x: usize, y: usize, z: usize, p: PseudoParams) -> bool {
    let b = p.b();
    ((x / b) | (y / b) | (z / b)) == p.full_mask()
}

/// Direct `O(m^3)` evaluation of the pseudo-product.
pub fn pseudo_product_oracle<R: Ring>(
    a: &DenseMatrix<R>,
    b: &DenseMatrix<R>,
    p: PseudoParams,
) -> Result<DenseMatrix<R>> {
    let m = p.m();
    if (a.rows(), a.cols(), b.rows(), b.cols()) != (m, m, m, m) {
        return Err(Error::dims(
            "pseudo_product_oracle",
            format!(
                "{}x{} and {}x{} for m = {m}",
                a.rows(),
                a.cols(),
                b.rows(),
                b.cols()
            ),
        ));
    }
    Ok(DenseMatrix::from_fn(m, m, |x, y| {
        (0..m)
            .filter(|&z| survives_unchecked(x, y, z, p))
            .fold(R::zero(), |acc, z| acc.add(a.get(x, z).mul(b.get(z, y))))
    }))
}

/// [`pseudo_product_oracle`] over GF(2) on bit-packed operands.
pub fn pseudo_product_oracle_bits(
    a: &BitMatrix,
    b: &BitMatrix,
    p: PseudoParams,
) -> Result<BitMatrix> {
    let m = p.m();
    if a.dims() != (m, m) || b.dims() != (m, m) {
        return Err(Error::dims(
            "pseudo_product_oracle_bits",
            format!("{:?} and {:?} for m = {m}", a.dims(), b.dims()),
        ));
    }
    Ok(BitMatrix::from_fn(m, m, |x, y| {
        (0..m)
            .filter(|&z| survives_unchecked(x, y, z, p))
            .fold(false, |acc, z| acc ^ (a.get(x, z) && b.get(z, y)))
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::Gf2;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::num::Wrapping;

    type Z = Wrapping<i64>;

    fn z(v: i64) -> Z {
        Wrapping(v)
    }

    #[test]
    fn step_on_all_ones() {
        let one = [[z(1), z(1)], [z(1), z(1)]];
        let (c, counts) = broken_step_2x2(one, one);
        assert_eq!(c, [[z(1), z(2)], [z(2), z(2)]]);
        assert_eq!(
            counts,
            CounterReport {
                base_mults: 6,
                block_adds: 14
            }
        );
    }

    #[test]
    fn step_on_identity() {
        let id = [[z(1), z(0)], [z(0), z(1)]];
        let (c, _) = broken_step_2x2(id, id);
        assert_eq!(c, [[z(0), z(0)], [z(0), z(1)]]);
    }

    #[test]
    fn step_matches_formulas_noncommutative_free() {
        // random integers exercise every sign in the recombination
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..100 {
            let a: [[Z; 2]; 2] = [
                [z(rng.gen_range(-50..50)), z(rng.gen_range(-50..50))],
                [z(rng.gen_range(-50..50)), z(rng.gen_range(-50..50))],
            ];
            let b: [[Z; 2]; 2] = [
                [z(rng.gen_range(-50..50)), z(rng.gen_range(-50..50))],
                [z(rng.gen_range(-50..50)), z(rng.gen_range(-50..50))],
            ];
            let (c, _) = broken_step_2x2(a, b);
            assert_eq!(c[0][0], a[0][1] * b[1][0]);
            assert_eq!(c[0][1], a[0][0] * b[0][1] + a[0][1] * b[1][1]);
            assert_eq!(c[1][0], a[1][0] * b[0][0] + a[1][1] * b[1][0]);
            assert_eq!(c[1][1], a[1][0] * b[0][1] + a[1][1] * b[1][1]);
        }
    }

    #[test]
    fn step_gf2_exhaustive() {
        for bits in 0u32..256 {
            let e = |k: u32| Gf2(bits >> k & 1 == 1);
            let a = [[e(0), e(1)], [e(2), e(3)]];
            let b = [[e(4), e(5)], [e(6), e(7)]];
            let (c, _) = broken_step_2x2(a, b);
            let f = |x: Gf2, y: Gf2| Gf2(x.0 & y.0);
            let g = |x: Gf2, y: Gf2| Gf2(x.0 ^ y.0);
            assert_eq!(c[0][0], f(a[0][1], b[1][0]));
            assert_eq!(c[0][1], g(f(a[0][0], b[0][1]), f(a[0][1], b[1][1])));
            assert_eq!(c[1][0], g(f(a[1][0], b[0][0]), f(a[1][1], b[1][0])));
            assert_eq!(c[1][1], g(f(a[1][0], b[0][1]), f(a[1][1], b[1][1])));
        }
    }

    #[test]
    fn triple_predicate_small() {
        let p = PseudoParams::new(1, 1).unwrap();
        assert!(!triple_survives(0, 0, 0, p).unwrap());
        assert!(triple_survives(0, 0, 1, p).unwrap());
        let n = (0..8)
            .filter(|t| triple_survives(t & 1, t >> 1 & 1, t >> 2, p).unwrap())
            .count();
        assert_eq!(n, 7);
        assert!(triple_survives(2, 0, 0, p).is_err());
    }

    #[test]
    fn oracle_all_ones_depth_two() {
        let p = PseudoParams::new(2, 1).unwrap();
        let ones = DenseMatrix::from_fn(4, 4, |_, _| z(1));
        let c = pseudo_product_oracle(&ones, &ones, p).unwrap();
        assert_eq!(c.get(0, 0), z(1));
        assert_eq!(c.get(0, 3), z(4));
        assert_eq!(c.get(3, 3), z(4));
        let (r, _) = pseudo_product(&ones, &ones, p).unwrap();
        assert_eq!(r, c);
    }

    #[test]
    fn depth_zero_is_plain_product() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let p = PseudoParams::new(0, 5).unwrap();
        let a = BitMatrix::random(5, 5, &mut rng);
        let b = BitMatrix::random(5, 5, &mut rng);
        let (c, counts) = pseudo_product(&a, &b, p).unwrap();
        assert_eq!(c, gf2_mul_naive(&a, &b).unwrap());
        assert_eq!(
            counts,
            CounterReport {
                base_mults: 1,
                block_adds: 0
            }
        );
        assert_eq!(pseudo_product_oracle_bits(&a, &b, p).unwrap(), c);
    }

    #[test]
    fn counters_depth_three() {
        let p = PseudoParams::new(3, 1).unwrap();
        let a = BitMatrix::zeros(8, 8);
        let (_, counts) = pseudo_product(&a, &a, p).unwrap();
        assert_eq!(
            counts,
            CounterReport {
                base_mults: 216,
                block_adds: 1064
            }
        );
        assert_eq!(CounterReport::expected(3), counts);
    }

    #[test]
    fn gf2_recursion_matches_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for s in 0..=3 {
            for b in 1..=3 {
                let p = PseudoParams::new(s, b).unwrap();
                let m = p.m();
                let a = BitMatrix::random(m, m, &mut rng);
                let bb = BitMatrix::random(m, m, &mut rng);
                let (c, _) = pseudo_product(&a, &bb, p).unwrap();
                assert_eq!(
                    c,
                    pseudo_product_oracle_bits(&a, &bb, p).unwrap(),
                    "s={s} b={b}"
                );
            }
        }
    }

    #[test]
    fn bitplanes_match_per_plane_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(14);
        let p = PseudoParams::new(2, 3).unwrap();
        let a = BitMatrix::random(12, 12, &mut rng);
        let planes: Vec<_> = (0..3)
            .map(|_| BitMatrix::random(12, 12, &mut rng))
            .collect();
        let (out, counts) = pseudo_product_bitplanes(&a, &planes, p).unwrap();
        assert_eq!(counts, CounterReport::expected(2));
        for (o, pl) in out.iter().zip(&planes) {
            assert_eq!(o, &pseudo_product_oracle_bits(&a, pl, p).unwrap());
        }
        let (single, _) = pseudo_product_bitplanes(&a, &planes[..1], p).unwrap();
        assert_eq!(single[0], pseudo_product(&a, &planes[0], p).unwrap().0);
        let zeros = vec![BitMatrix::zeros(12, 12); 2];
        let (out, _) = pseudo_product_bitplanes(&a, &zeros, p).unwrap();
        assert!(out.iter().all(BitMatrix::is_zero));
    }

    #[test]
    fn rejects_bad_shapes() {
        let p = PseudoParams::new(2, 2).unwrap();
        let a = BitMatrix::zeros(6, 6);
        assert!(pseudo_product(&a, &a, p).is_err());
        let ok = BitMatrix::zeros(8, 8);
        assert!(pseudo_product_bitplanes(&ok, &[a], p).is_err());
        assert!(PseudoParams::new(41, 1).is_err());
        assert!(PseudoParams::new(1, 0).is_err());
    }
}
