//! Classical Strassen over GF(2) and over the integers, against the naive
//! products.

use std::time::Instant;

use opbmm::cli::bool_mul_strassen;
use opbmm::rng::stream;
use opbmm::{bool_mul_naive, gf2_mul_naive, gf2_mul_strassen, BitMatrix};

fn main() -> opbmm::Result<()> {
    let mut rng = stream(3);
    for n in [64, 128, 256] {
        let a = BitMatrix::random(n, n, &mut rng);
        let b = BitMatrix::random(n, n, &mut rng);
        let t0 = Instant::now();
        let c = gf2_mul_strassen(&a, &b, 32)?;
        let t_str = t0.elapsed();
        let t0 = Instant::now();
        let d = gf2_mul_naive(&a, &b)?;
        let t_naive = t0.elapsed();
        assert_eq!(c, d);
        println!("gf2 n = {n}: strassen {t_str:?}, naive {t_naive:?}");
    }

    let a = BitMatrix::random_with_density(100, 70, 0.05, &mut rng);
    let b = BitMatrix::random_with_density(70, 90, 0.05, &mut rng);
    let c = bool_mul_strassen(&a, &b, 8)?;
    assert_eq!(c, bool_mul_naive(&a, &b)?);
    println!(
        "boolean 100x70x90 via padded integer Strassen: {} ones",
        c.count_ones()
    );
    Ok(())
}
