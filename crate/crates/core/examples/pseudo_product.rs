//! One broken Strassen pseudo-product over the integers, checked against the
//! survival rule.

use std::num::Wrapping;

use opbmm::pseudomul::{pseudo_product_oracle, CounterReport};
use opbmm::ring::DenseMatrix;
use opbmm::{pseudo_product, PseudoParams};

fn main() -> opbmm::Result<()> {
    let p = PseudoParams::new(3, 2)?;
    let m = p.m();
    let ones = DenseMatrix::from_fn(m, m, |_, _| Wrapping(1u64));
    let (c, counters) = pseudo_product(&ones, &ones, p)?;
    assert_eq!(c, pseudo_product_oracle(&ones, &ones, p)?);
    assert_eq!(counters, CounterReport::expected(3));

    let full = m as u64;
    let kept: u64 = (0..m)
        .flat_map(|x| (0..m).map(move |y| (x, y)))
        .map(|(x, y)| c.get(x, y).0)
        .sum();
    println!("s = {}, b = {}, m = {m}", p.s(), p.b());
    println!(
        "base_mults = {}, block_adds = {}",
        counters.base_mults, counters.block_adds
    );
    println!("surviving triples = {kept} of {}", full * full * full);
    println!(
        "row 0: {:?}",
        (0..m).map(|y| c.get(0, y).0).collect::<Vec<_>>()
    );
    Ok(())
}
