//! Boolean product witnesses, checked against the operands.

use opbmm::rng::stream;
use opbmm::witness::{wbmm_detailed, WbmmConfig};
use opbmm::{bool_mul_naive, BitMatrix};

fn main() -> opbmm::Result<()> {
    let mut rng = stream(2);
    let a = BitMatrix::random_with_density(64, 64, 0.1, &mut rng);
    let b = BitMatrix::random_with_density(64, 64, 0.1, &mut rng);
    let rep = wbmm_detailed(&a, &b, &WbmmConfig::default())?;
    let exact = bool_mul_naive(&a, &b)?;

    assert!(rep.witnesses.is_valid_for(&a, &b));
    println!("s_max = {}", rep.s_max);
    for st in &rep.stages {
        println!(
            "s = {}: trials = {}, base_mults = {}",
            st.s, st.trials, st.base_mults
        );
    }
    println!("set before fallback = {}", rep.set_before_fallback);
    println!("fallback probes = {}", rep.fallback_probes);
    println!(
        "witnessed {} of {} product entries",
        rep.witnesses.count_set(),
        exact.count_ones()
    );
    if let Some((i, j)) = (0..64)
        .flat_map(|i| (0..64).map(move |j| (i, j)))
        .find(|&(i, j)| exact.get(i, j))
    {
        let k = rep.witnesses.get(i, j).unwrap() as usize - 1;
        println!("C[{i}][{j}] = A[{i}][{k}] & B[{k}][{j}]");
    }
    Ok(())
}
