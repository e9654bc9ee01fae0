use opbmm::gfmat::BitMatrix;
use opbmm::rng::stream;
use opbmm::{bool_mul_naive, gf2_mul_naive, gf2_mul_strassen};
use proptest::prelude::*;

fn scalar_bool(a: &BitMatrix, b: &BitMatrix) -> BitMatrix {
    BitMatrix::from_fn(a.rows(), b.cols(), |i, j| {
        (0..a.cols()).any(|k| a.get(i, k) && b.get(k, j))
    })
}

fn scalar_gf2(a: &BitMatrix, b: &BitMatrix) -> BitMatrix {
    BitMatrix::from_fn(a.rows(), b.cols(), |i, j| {
        (0..a.cols()).fold(false, |acc, k| acc ^ (a.get(i, k) && b.get(k, j)))
    })
}

#[test]
fn bool_product_all_small_shapes_and_densities() {
    let mut rng = stream(11);
    let densities = [0.0, 0.25, 0.5, 1.0];
    for d1 in 1..=8 {
        for d3 in 1..=8 {
            for d2 in 1..=8 {
                for &pa in &densities {
                    for &pb in &densities {
                        let a = BitMatrix::random_with_density(d1, d3, pa, &mut rng);
                        let b = BitMatrix::random_with_density(d3, d2, pb, &mut rng);
                        let c = bool_mul_naive(&a, &b).unwrap();
                        assert!(c.is_normalized());
                        assert_eq!(c, scalar_bool(&a, &b), "{d1}x{d3}x{d2} at ({pa}, {pb})");
                    }
                }
            }
        }
    }
}

#[test]
fn random_32_instances() {
    let mut rng = stream(12);
    for _ in 0..100 {
        let a = BitMatrix::random(32, 32, &mut rng);
        let b = BitMatrix::random(32, 32, &mut rng);
        assert_eq!(bool_mul_naive(&a, &b).unwrap(), scalar_bool(&a, &b));
        assert_eq!(gf2_mul_naive(&a, &b).unwrap(), scalar_gf2(&a, &b));
    }
}

#[test]
fn boolean_dominates_parity() {
    let mut rng = stream(13);
    for n in [1, 7, 64, 65, 130] {
        let a = BitMatrix::random_with_density(n, n + 3, 0.2, &mut rng);
        let b = BitMatrix::random_with_density(n + 3, n, 0.2, &mut rng);
        let parity = gf2_mul_naive(&a, &b).unwrap();
        assert!(parity.is_dominated_by(&bool_mul_naive(&a, &b).unwrap()));
    }
}

#[test]
fn strassen_up_to_five_levels() {
    let mut rng = stream(14);
    for base in [1, 2, 3, 4] {
        for t in 0..=5 {
            let n = base << t;
            let a = BitMatrix::random(n, n, &mut rng);
            let b = BitMatrix::random(n, n, &mut rng);
            let c = gf2_mul_strassen(&a, &b, base).unwrap();
            assert!(c.is_normalized());
            assert_eq!(c, gf2_mul_naive(&a, &b).unwrap(), "n={n} base={base}");
        }
    }
    let i8 = BitMatrix::identity(8);
    assert_eq!(gf2_mul_strassen(&i8, &i8, 2).unwrap(), i8);
}

#[test]
fn strassen_rejects_bad_sizes() {
    let a = BitMatrix::zeros(12, 12);
    assert!(gf2_mul_strassen(&a, &a, 5).is_err());
    assert!(gf2_mul_strassen(&a, &a, 0).is_err());
    assert!(gf2_mul_strassen(&a, &BitMatrix::zeros(12, 8), 3).is_err());
}

fn matrix(max: usize) -> impl Strategy<Value = BitMatrix> {
    (1..=max, 1..=max, any::<u64>())
        .prop_map(|(r, c, seed)| BitMatrix::random(r, c, &mut stream(seed)))
}

proptest! {
    #[test]
    fn bmat_roundtrip(m in matrix(150)) {
        let text = m.to_bmat();
        let back = BitMatrix::parse_bmat(&text).unwrap();
        prop_assert_eq!(&back, &m);
        prop_assert_eq!(back.to_bmat(), text);
    }

    #[test]
    fn elementwise_ops_stay_normalized(seed in any::<u64>(), r in 1usize..100, c in 1usize..200) {
        let mut rng = stream(seed);
        let a = BitMatrix::random(r, c, &mut rng);
        let b = BitMatrix::random(r, c, &mut rng);
        for m in [a.xor(&b), a.and(&b), a.or(&b), a.transpose(), BitMatrix::ones(r, c)] {
            prop_assert!(m.is_normalized());
        }
        prop_assert_eq!(a.transpose().transpose(), a.clone());
        let h = r / 2;
        let w = c / 3;
        let blk = a.block(r - h, c - w, h, w);
        prop_assert!(blk.is_normalized());
        let mut z = BitMatrix::zeros(r, c);
        z.put_block(r - h, c - w, &blk);
        prop_assert!(z.is_normalized());
        prop_assert!(z.is_dominated_by(&a));
    }
}
