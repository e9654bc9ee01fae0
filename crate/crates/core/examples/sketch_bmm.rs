//! Randomized Boolean product with one-sided error, compared with the exact
//! product.

use opbmm::rng::stream;
use opbmm::sketch::{bmm_with, BmmOptions, BmmPath, Strategy};
use opbmm::{bool_mul_naive, BitMatrix};

fn main() -> opbmm::Result<()> {
    let mut rng = stream(1);
    let a = BitMatrix::random_with_density(96, 96, 0.08, &mut rng);
    let b = BitMatrix::random_with_density(96, 96, 0.08, &mut rng);
    let exact = bool_mul_naive(&a, &b)?;

    for seed in 0..4 {
        let opts = BmmOptions {
            seed,
            strategy: Strategy::Sketch,
            ..BmmOptions::default()
        };
        let out = bmm_with(&a, &b, &opts)?;
        assert!(out.product.is_dominated_by(&exact));
        if let BmmPath::Sketch {
            params, counters, ..
        } = out.path
        {
            println!(
                "seed {seed}: s = {}, m = {}, base_mults = {}, missed {} of {}",
                params.s(),
                params.m(),
                counters.base_mults,
                exact.count_excess_over(&out.product),
                exact.count_ones()
            );
        }
    }
    Ok(())
}
