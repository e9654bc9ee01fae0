//! BMAT/1 and WMAT/1 text formats.

use opbmm::{wbmm, BitMatrix, WitnessMatrix};

fn main() -> opbmm::Result<()> {
    let a = BitMatrix::parse_bmat("BMAT 1\n2 3\n101\n010\n")?;
    let b = BitMatrix::from_fn(3, 2, |i, j| (i + j) % 2 == 0);
    print!("{}", a.to_bmat());
    print!("{}", b.to_bmat());

    let w = wbmm(&a, &b, 0)?;
    let text = w.to_wmat();
    print!("{text}");
    assert_eq!(WitnessMatrix::parse_wmat(&text)?, w);
    assert!(BitMatrix::parse_bmat("BMAT 1\n1 2\n1\n").is_err());
    Ok(())
}
