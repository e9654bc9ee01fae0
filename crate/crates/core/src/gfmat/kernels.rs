use super::BitMatrix;
use crate::error::{Error, Result};

fn check_inner(op: &'static str, a: &BitMatrix, b: &BitMatrix) -> Result<()> {
    if a.cols() != b.rows() {
        return Err(Error::dims(
            op,
            format!("{}x{} times {}x{}", a.rows(), a.cols(), b.rows(), b.cols()),
        ));
    }
    Ok(())
}

/// Row-selection product: row `i` of the result combines the rows of `b`
/// picked out by the set bits of row `i` of `a`.
fn row_select(a: &BitMatrix, b: &BitMatrix, combine: impl Fn(&mut u64, u64)) -> BitMatrix {
    let mut c = BitMatrix::zeros(a.rows(), b.cols());
    for i in 0..a.rows() {
        let mut acc = vec![0u64; c.stride()];
        for k in a.iter_row_ones(i) {
            for (d, &s) in acc.iter_mut().zip(b.row(k)) {
                combine(d, s);
            }
        }
        c.row_mut(i).copy_from_slice(&acc);
    }
    c
}

/// Exact Boolean product: `C[i][j] = OR_k A[i][k] AND B[k][j]`.
pub fn bool_mul_naive(a: &BitMatrix, b: &BitMatrix) -> Result<BitMatrix> {
    check_inner("bool_mul_naive", a, b)?;
    Ok(row_select(a, b, |d, s| *d |= s))
}

/// Exact product over GF(2): `C[i][j] = XOR_k A[i][k] AND B[k][j]`.
pub fn gf2_mul_naive(a: &BitMatrix, b: &BitMatrix) -> Result<BitMatrix> {
    check_inner("gf2_mul_naive", a, b)?;
    Ok(row_select(a, b, |d, s| *d ^= s))
}

/// Classical seven-product Strassen recursion over GF(2), switching to
/// [`gf2_mul_naive`] at dimension `base`. Requires `n = base * 2^t`.
pub fn gf2_mul_strassen(a: &BitMatrix, b: &BitMatrix, base: usize) -> Result<BitMatrix> {
    let n = a.rows();
    if a.dims() != (n, n) || b.dims() != (n, n) {
        return Err(Error::dims(
            "gf2_mul_strassen",
            format!(
                "expected square operands, got {:?} and {:?}",
                a.dims(),
                b.dims()
            ),
        ));
    }
    if base == 0 || !n.is_multiple_of(base) || !(n / base).is_power_of_two() {
        return Err(Error::InvalidParameter(format!(
            "strassen needs n = base * 2^t, got n = {n}, base = {base}"
        )));
    }
    Ok(strassen_rec(a, b, base))
}

fn strassen_rec(a: &BitMatrix, b: &BitMatrix, base: usize) -> BitMatrix {
    if a.rows() <= base {
        return row_select(a, b, |d, s| *d ^= s);
    }
    let [a11, a12, a21, a22] = a.quadrants();
    let [b11, b12, b21, b22] = b.quadrants();

    let m1 = strassen_rec(&a11.xor(&a22), &b11.xor(&b22), base);
    let m2 = strassen_rec(&a21.xor(&a22), &b11, base);
    let m3 = strassen_rec(&a11, &b12.xor(&b22), base);
    let m4 = strassen_rec(&a22, &b21.xor(&b11), base);
    let m5 = strassen_rec(&a11.xor(&a12), &b22, base);
    let m6 = strassen_rec(&a21.xor(&a11), &b11.xor(&b12), base);
    let m7 = strassen_rec(&a12.xor(&a22), &b21.xor(&b22), base);

    // over GF(2) every sign in Strassen's recombination is +
    let c11 = m1.xor(&m4).xor(&m5).xor(&m7);
    let c12 = m3.xor(&m5);
    let c21 = m2.xor(&m4);
    let c22 = m1.xor(&m2).xor(&m3).xor(&m6);
    BitMatrix::from_quadrants([c11, c12, c21, c22])
}
