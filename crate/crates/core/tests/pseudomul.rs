use std::num::Wrapping;

use opbmm::pseudomul::{
    broken_step_2x2, pseudo_product_bitplanes, pseudo_product_oracle, pseudo_product_oracle_bits,
    CounterReport,
};
use opbmm::ring::{DenseMatrix, Gf2, Ring};
use opbmm::rng::stream;
use opbmm::{bool_mul_naive, pseudo_product, triple_survives, BitMatrix, PseudoParams};
use proptest::prelude::*;

type Z = Wrapping<u64>;

fn z(v: u64) -> Z {
    Wrapping(v)
}

#[test]
fn two_by_two_examples() {
    let ones = [[z(1), z(1)], [z(1), z(1)]];
    let (c, n) = broken_step_2x2(ones, ones);
    assert_eq!(c, [[z(1), z(2)], [z(2), z(2)]]);
    assert_eq!(n, CounterReport::expected(1));

    let id = [[z(1), z(0)], [z(0), z(1)]];
    assert_eq!(broken_step_2x2(id, id).0, [[z(0), z(0)], [z(0), z(1)]]);
}

#[test]
fn all_ones_depth_two() {
    let p = PseudoParams::new(2, 1).unwrap();
    let ones = DenseMatrix::from_fn(4, 4, |_, _| z(1));
    let c = pseudo_product_oracle(&ones, &ones, p).unwrap();
    let (fast, _) = pseudo_product(&ones, &ones, p).unwrap();
    assert_eq!(c, fast);
    for x in 0..4 {
        for y in 0..4 {
            let free = (!(x | y) & 3u32).count_ones();
            assert_eq!(c.get(x as usize, y as usize), z(1 << (2 - free)));
        }
    }
    assert_eq!((c.get(0, 0), c.get(0, 3), c.get(3, 3)), (z(1), z(4), z(4)));
}

#[test]
fn depth_zero_is_full_product() {
    let mut rng = stream(21);
    for b in [1, 5, 64, 70] {
        let p = PseudoParams::new(0, b).unwrap();
        let a = BitMatrix::random(b, b, &mut rng);
        let bm = BitMatrix::random(b, b, &mut rng);
        let (c, n) = pseudo_product(&a, &bm, p).unwrap();
        assert_eq!(c, opbmm::gf2_mul_naive(&a, &bm).unwrap());
        assert_eq!((n.base_mults, n.block_adds), (1, 0));
    }
}

#[test]
fn survival_examples() {
    let p = PseudoParams::new(1, 1).unwrap();
    assert!(!triple_survives(0, 0, 0, p).unwrap());
    assert!(triple_survives(0, 0, 1, p).unwrap());
    let mut n = 0;
    for x in 0..2 {
        for y in 0..2 {
            for zz in 0..2 {
                n += usize::from(triple_survives(x, y, zz, p).unwrap());
            }
        }
    }
    assert_eq!(n, 7);
    assert!(triple_survives(2, 0, 0, p).is_err());
}

#[test]
fn counters_do_not_depend_on_ring() {
    let mut rng = stream(22);
    for s in 0..=4 {
        let p = PseudoParams::new(s, 2).unwrap();
        let m = p.m();
        let a = BitMatrix::random(m, m, &mut rng);
        let (_, bits) = pseudo_product(&a, &a, p).unwrap();
        let g = DenseMatrix::from_bits(&a);
        let (_, gf2) = pseudo_product(&g, &g, p).unwrap();
        let w = DenseMatrix::<Wrapping<u32>>::random(m, m, &mut rng);
        let (_, int) = pseudo_product(&w, &w, p).unwrap();
        let w = DenseMatrix::<Wrapping<i64>>::random(m, m, &mut rng);
        let (_, signed) = pseudo_product(&w, &w, p).unwrap();
        assert_eq!(bits, CounterReport::expected(s));
        assert!([gf2, int, signed].iter().all(|&c| c == bits));
    }
}

#[test]
fn counters_compose() {
    let total: CounterReport = (0..4).map(CounterReport::expected).sum();
    assert_eq!(total.base_mults, 1 + 6 + 36 + 216);
    assert_eq!(total.block_adds, 14 + 140 + 1064);
}

#[test]
fn bitplane_cases() {
    let mut rng = stream(23);
    let p = PseudoParams::new(2, 3).unwrap();
    let m = p.m();
    let a = BitMatrix::random(m, m, &mut rng);
    let planes: Vec<BitMatrix> = (0..3).map(|_| BitMatrix::random(m, m, &mut rng)).collect();
    let (out, counters) = pseudo_product_bitplanes(&a, &planes, p).unwrap();
    assert_eq!(counters, CounterReport::expected(2));
    for (o, pl) in out.iter().zip(&planes) {
        assert_eq!(o, &pseudo_product_oracle_bits(&a, pl, p).unwrap());
    }

    let (one, _) = pseudo_product_bitplanes(&a, &planes[..1], p).unwrap();
    assert_eq!(one[0], pseudo_product(&a, &planes[0], p).unwrap().0);

    let zeros = vec![BitMatrix::zeros(m, m); 4];
    let (out, _) = pseudo_product_bitplanes(&a, &zeros, p).unwrap();
    assert!(out.iter().all(BitMatrix::is_zero));

    let bad = vec![BitMatrix::zeros(m, m), BitMatrix::zeros(m - 1, m)];
    assert!(pseudo_product_bitplanes(&a, &bad, p).is_err());
}

#[test]
fn dimension_checks() {
    let p = PseudoParams::new(2, 2).unwrap();
    let a = BitMatrix::zeros(8, 8);
    assert!(pseudo_product(&a, &BitMatrix::zeros(7, 7), p).is_err());
    assert!(pseudo_product(&BitMatrix::zeros(4, 4), &BitMatrix::zeros(4, 4), p).is_err());
    assert!(PseudoParams::new(41, 1).is_err());
    assert!(PseudoParams::new(0, 0).is_err());
}

fn params() -> impl Strategy<Value = PseudoParams> {
    (0u32..=4, 1usize..=4).prop_map(|(s, b)| PseudoParams::new(s, b).unwrap())
}

fn dense<R: Ring>(m: usize, seed: u64) -> DenseMatrix<R> {
    DenseMatrix::random(m, m, &mut stream(seed))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn recursion_matches_oracle(p in params(), seed in any::<u64>()) {
        let m = p.m();
        let a: DenseMatrix<Wrapping<u16>> = dense(m, seed);
        let b: DenseMatrix<Wrapping<u16>> = dense(m, seed ^ 1);
        prop_assert_eq!(pseudo_product(&a, &b, p).unwrap().0, pseudo_product_oracle(&a, &b, p).unwrap());
        let a: DenseMatrix<Gf2> = dense(m, seed ^ 2);
        let b: DenseMatrix<Gf2> = dense(m, seed ^ 3);
        prop_assert_eq!(pseudo_product(&a, &b, p).unwrap().0, pseudo_product_oracle(&a, &b, p).unwrap());
    }

    #[test]
    fn pseudo_product_is_a_subset(p in params(), seed in any::<u64>(), density in 0.0f64..1.0) {
        let m = p.m();
        let mut rng = stream(seed);
        let a = BitMatrix::random_with_density(m, m, density, &mut rng);
        let b = BitMatrix::random_with_density(m, m, density, &mut rng);
        let lift = |x: &BitMatrix| DenseMatrix::from_fn(m, m, |i, j| Wrapping(u64::from(x.get(i, j))));
        let (partial, _) = pseudo_product(&lift(&a), &lift(&b), p).unwrap();
        let full = lift(&a).mul_naive(&lift(&b)).unwrap();
        let support = BitMatrix::from_fn(m, m, |i, j| partial.get(i, j).0 > 0);
        for i in 0..m {
            for j in 0..m {
                prop_assert!(partial.get(i, j) <= full.get(i, j));
            }
        }
        prop_assert!(support.is_dominated_by(&bool_mul_naive(&a, &b).unwrap()));
    }
}
