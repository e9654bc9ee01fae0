//! Depth selection and the exact second-moment quantities for a few shapes.

use num_traits::ToPrimitive;
use opbmm::analysis::{check_skew, delta_bound, mu, s_hat, s_max, select_s};
use opbmm::{InstanceStats, PseudoParams};

fn main() -> opbmm::Result<()> {
    for (d1, d2, d3, b) in [
        (128, 128, 128, 1),
        (128, 128, 128, 64),
        (4096, 64, 64, 8),
        (1000, 1000, 10, 4),
    ] {
        let st = InstanceStats::new(d1, d2, d3)?;
        let delta = 1.0 / st.psi3 as f64;
        let s = select_s(&st, b, delta)?;
        let p = PseudoParams::new(s, b)?;
        let skew = check_skew(p, &st);
        println!("{d1}x{d3}x{d2}, b = {b}");
        println!(
            "  select_s = {s}, m = {}, s_max = {}, s_hat = {}",
            p.m(),
            s_max(&st, b),
            s_hat(&st, b, 1)?
        );
        println!(
            "  mu = {:.3}, delta_bound = {:.3}",
            mu(p, &st)?.to_f64().unwrap_or(f64::NAN),
            delta_bound(p, &st)?.to_f64().unwrap_or(f64::NAN)
        );
        println!(
            "  skew ratios {:.4} / {:.4}, warns = {}",
            skew.ratio1,
            skew.ratio2,
            skew.warns()
        );
    }
    Ok(())
}
