//! Parameter selection and the counting/probability quantities that justify it.
//!
//! Rational quantities (`mu`, the dependent-pair bound, exact pair sums) are
//! computed with arbitrary-precision rationals. Quantities that involve
//! logarithms or irrational constants use `f64`, which is ample for the
//! ceilings and comparisons made here (relative error around 1e-15).
//!
//! Every `log` is the natural logarithm.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::gfmat::InstanceStats;
use crate::pseudomul::{survives_unchecked, PseudoParams};

/// Threshold standing in for "much smaller than" in the skew checks.
pub const SKEW_THRESHOLD: f64 = 0.1;

fn big(v: u128) -> BigInt {
    BigInt::from(v)
}

fn ratio(num: BigInt, den: BigInt) -> BigRational {
    BigRational::new(num, den)
}

fn require_psi3(stats: &InstanceStats) -> Result<()> {
    if stats.psi3 == 0 {
        return Err(Error::InvalidParameter("psi3 must be positive".into()));
    }
    Ok(())
}

/// Expected number of good triples: `b^3 7^s / psi3`.
pub fn mu(p: PseudoParams, stats: &InstanceStats) -> Result<BigRational> {
    require_psi3(stats)?;
    let b = big(p.b() as u128);
    let num = b.pow(3) * BigInt::from(7u32).pow(p.s());
    Ok(ratio(num, big(stats.psi3)))
}

/// Upper bound on the dependent-pair sum:
/// `(psi1 b^5 25^s + psi2 b^4 13^s) / psi3^2`.
pub fn delta_bound(p: PseudoParams, stats: &InstanceStats) -> Result<BigRational> {
    require_psi3(stats)?;
    let b = big(p.b() as u128);
    let num = big(stats.psi1) * b.pow(5) * BigInt::from(25u32).pow(p.s())
        + big(stats.psi2) * b.pow(4) * BigInt::from(13u32).pow(p.s());
    Ok(ratio(num, big(stats.psi3).pow(2)))
}

/// `mu` and the dependent-pair bound for one parameter choice.
#[derive(Debug, Clone, PartialEq)]
pub struct JansonStats {
    pub mu: BigRational,
    pub delta_upper: BigRational,
    pub params: PseudoParams,
    pub stats: InstanceStats,
}

impl JansonStats {
    pub fn new(params: PseudoParams, stats: InstanceStats) -> Result<Self> {
        Ok(Self {
            mu: mu(params, &stats)?,
            delta_upper: delta_bound(params, &stats)?,
            params,
            stats,
        })
    }

    /// `exp(-mu + delta/2)`, the bound on the probability of no good triple.
    /// Only informative when it is below 1.
    pub fn miss_probability_bound(&self) -> f64 {
        let mu = self.mu.to_f64().unwrap_or(f64::INFINITY);
        let delta = self.delta_upper.to_f64().unwrap_or(f64::INFINITY);
        (-mu + delta / 2.0).exp().min(1.0)
    }
}

/// Constants of the refined dependent-pair bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundConstants {
    /// `14 * 54^(1/7)`
    pub alpha1: f64,
    /// `7 * 2^(6/7)`
    pub alpha2: f64,
}

impl BoundConstants {
    pub fn new() -> Self {
        Self {
            alpha1: 14.0 * 54f64.powf(1.0 / 7.0),
            alpha2: 7.0 * 2f64.powf(6.0 / 7.0),
        }
    }
}

impl Default for BoundConstants {
    fn default() -> Self {
        Self::new()
    }
}

/// `(psi1 alpha1^s + psi2 alpha2^s) / (psi3^2 sqrt(s))` with the hidden
/// constant set to 1. A comparative index, not a certified bound.
pub fn delta_bound_appendix(p: PseudoParams, stats: &InstanceStats) -> Result<f64> {
    require_psi3(stats)?;
    if p.s() == 0 {
        return Err(Error::InvalidParameter("refined bound needs s >= 1".into()));
    }
    let c = BoundConstants::new();
    let s = f64::from(p.s());
    let psi3 = stats.psi3 as f64;
    Ok(
        (stats.psi1 as f64 * c.alpha1.powf(s) + stats.psi2 as f64 * c.alpha2.powf(s))
            / (psi3 * psi3 * s.sqrt()),
    )
}

/// `e^(r - kappa) (kappa / r)^r`: bound on the probability that fewer than
/// `r` good triples with distinct column indices exist.
pub fn good_tuple_failure_bound(r: u64, kappa: f64) -> Result<f64> {
    if r == 0 || !(kappa.is_finite()) || (r as f64) > kappa {
        return Err(Error::InvalidParameter(format!(
            "need 0 < r <= kappa, got r = {r}, kappa = {kappa}"
        )));
    }
    let r = r as f64;
    Ok((r - kappa + r * (kappa / r).ln()).exp())
}

fn check_delta(delta: f64) -> Result<()> {
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "delta = {delta} must lie in (0, 1)"
        )));
    }
    Ok(())
}

/// Smallest `s >= 0` with `7^s b^3 >= 3 psi3 log(1/delta)`.
pub fn select_s(stats: &InstanceStats, b: usize, delta: f64) -> Result<u32> {
    check_delta(delta)?;
    if b == 0 {
        return Err(Error::InvalidParameter("b must be positive".into()));
    }
    let target = 3.0 * stats.psi3 as f64 * (1.0 / delta).ln();
    let cube = (b as f64).powi(3);
    let mut s = 0u32;
    while 7f64.powi(s as i32) * cube < target {
        s += 1;
    }
    Ok(s)
}

/// `ceil(log_7(b^-3 psi3 log psi3))`, clamped at zero: the largest depth
/// visited by the witness schedule.
pub fn s_max(stats: &InstanceStats, b: usize) -> u32 {
    let psi3 = stats.psi3 as f64;
    let x = psi3 * psi3.ln() / (b as f64).powi(3);
    if x <= 1.0 {
        return 0;
    }
    (x.ln() / 7f64.ln()).ceil().max(0.0) as u32
}

/// `ceil(log_7(b^-3 psi3 log psi3) - 2) - ceil((7/6) log_2 gamma)`; may be negative.
pub fn s_hat(stats: &InstanceStats, b: usize, gamma: u64) -> Result<i64> {
    if gamma == 0 {
        return Err(Error::InvalidParameter("gamma must be at least 1".into()));
    }
    if b == 0 {
        return Err(Error::InvalidParameter("b must be positive".into()));
    }
    let psi3 = stats.psi3 as f64;
    let x = psi3 * psi3.ln() / (b as f64).powi(3);
    let first = (x.ln() / 7f64.ln() - 2.0).ceil();
    let second = (7.0 / 6.0 * (gamma as f64).log2()).ceil();
    Ok((first - second) as i64)
}

/// Witness-schedule trial count at depth `s`: `20 * 4^(s_max - s)`.
pub fn trials_at(s: u32, s_max: u32) -> u64 {
    assert!(s <= s_max);
    20 * 4u64.pow(s_max - s)
}

/// Exhaustive count of `(x, y, z) in [m]^3` whose summand survives.
/// Refuses instances with more than `2^27` triples.
pub fn count_surviving_triples(p: PseudoParams) -> Result<u64> {
    let m = p.m() as u64;
    if m.checked_pow(3).is_none_or(|t| t > 1 << 27) {
        return Err(Error::InvalidParameter(format!(
            "m = {m} too large to enumerate"
        )));
    }
    let m = m as usize;
    let full = p.full_mask();
    let block: Vec<usize> = (0..m).map(|i| i / p.b()).collect();
    let mut n = 0u64;
    for &bx in &block {
        for &by in &block {
            let xy = bx | by;
            n += block.iter().filter(|&&bz| xy | bz == full).count() as u64;
        }
    }
    Ok(n)
}

/// Ordered pairs of surviving triples, bucketed by which coordinates agree.
///
/// `by_shared[mask]` counts pairs `(u, u')` where bit 0 / 1 / 2 of `mask` is
/// set iff `x = x'` / `y = y'` / `z = z'`. `by_shared[7]` counts `u = u'`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairCensus {
    pub by_shared: [u64; 8],
}

impl PairCensus {
    /// Pairs with `x = x'` (other coordinates unrestricted).
    pub fn shared_x(&self) -> u64 {
        [1, 3, 5, 7].iter().map(|&k| self.by_shared[k]).sum()
    }

    /// Pairs with `x = x'` and `y = y'`.
    pub fn shared_xy(&self) -> u64 {
        self.by_shared[3] + self.by_shared[7]
    }
}

/// Enumerates all ordered pairs of surviving triples. Refuses more than
/// `2^13` surviving triples.
pub fn dependent_pair_census(p: PseudoParams) -> Result<PairCensus> {
    let m = p.m();
    let total = (p.b() as u64).pow(3) * 7u64.pow(p.s());
    if total > 1 << 13 {
        return Err(Error::InvalidParameter(format!(
            "{total} surviving triples is too many to pair up"
        )));
    }
    let mut triples = Vec::with_capacity(total as usize);
    for x in 0..m {
        for y in 0..m {
            for z in 0..m {
                if survives_unchecked(x, y, z, p) {
                    triples.push((x, y, z));
                }
            }
        }
    }
    let mut by_shared = [0u64; 8];
    for &(x, y, z) in &triples {
        for &(x2, y2, z2) in &triples {
            let mask = usize::from(x == x2) | usize::from(y == y2) << 1 | usize::from(z == z2) << 2;
            by_shared[mask] += 1;
        }
    }
    Ok(PairCensus { by_shared })
}

/// Exact dependent-pair sum: over ordered pairs of distinct surviving triples
/// sharing at least one coordinate, the probability that both map onto a
/// fixed target `(i, j, k)`.
pub fn delta_exact(p: PseudoParams, stats: &InstanceStats) -> Result<BigRational> {
    require_psi3(stats)?;
    let census = dependent_pair_census(p)?;
    let d = [stats.d1, stats.d2, stats.d3];
    let mut sum = BigRational::zero();
    for mask in 1..7usize {
        let mut den = BigInt::one();
        for (c, &dc) in d.iter().enumerate() {
            let dc = BigInt::from(dc);
            den *= if mask >> c & 1 == 1 {
                dc.clone()
            } else {
                &dc * &dc
            };
        }
        sum += ratio(BigInt::from(census.by_shared[mask]), den);
    }
    Ok(sum)
}

/// Result of [`count_candidates`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CandidateCount {
    pub s: u32,
    pub count: u64,
    /// `7^s`, the number of covering triples.
    pub covering: u64,
    pub ratio: f64,
}

/// Largest `s` accepted by [`count_candidates`].
pub const MAX_CANDIDATE_DEPTH: u32 = 9;

/// Counts `(x, y, z) in ({0,1}^s)^3` with `x | y | z = 1^s`, every weight at
/// most `4s/7` and every pairwise union weight at most `6s/7`.
pub fn count_candidates(s: u32) -> Result<CandidateCount> {
    if s > MAX_CANDIDATE_DEPTH {
        return Err(Error::InvalidParameter(format!(
            "s = {s} exceeds the exhaustive limit {MAX_CANDIDATE_DEPTH}"
        )));
    }
    // weights scaled by 7 so the caps stay integral
    let single_cap = 4 * s;
    let pair_cap = 6 * s;
    let count = candidates_from(s, [0; 6], single_cap, pair_cap);
    let covering = 7u64.pow(s);
    Ok(CandidateCount {
        s,
        count,
        covering,
        ratio: count as f64 / covering as f64,
    })
}

fn candidates_from(left: u32, w: [u32; 6], single_cap: u32, pair_cap: u32) -> u64 {
    if left == 0 {
        return 1;
    }
    let mut n = 0;
    for pat in 1u32..8 {
        let (x, y, z) = (pat & 1, pat >> 1 & 1, pat >> 2 & 1);
        let next = [
            w[0] + x,
            w[1] + y,
            w[2] + z,
            w[3] + (x | y),
            w[4] + (x | z),
            w[5] + (y | z),
        ];
        if next[..3].iter().all(|&v| 7 * v <= single_cap)
            && next[3..].iter().all(|&v| 7 * v <= pair_cap)
        {
            n += candidates_from(left - 1, next, single_cap, pair_cap);
        }
    }
    n
}

/// Whether `|x' | y'| <= 6s/7`, the union-weight cap used when analysing
/// witness isolation.
pub fn union_weight_ok(x: usize, y: usize, p: PseudoParams) -> bool {
    let b = p.b();
    7 * ((x / b) | (y / b)).count_ones() <= 6 * p.s()
}

/// Skew diagnostics for one parameter choice.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SkewReport {
    /// `(25/7)^s b^2 psi1 / psi3`
    pub ratio1: f64,
    /// `(13/7)^s b psi2 / psi3`
    pub ratio2: f64,
    pub ratio1_ok: bool,
    pub ratio2_ok: bool,
    /// `psi3^0.345 >= psi1`
    pub poly_psi1: bool,
    /// `psi3^0.681 >= psi2`
    pub poly_psi2: bool,
    /// `psi3^0.350 >= psi1`
    pub relaxed_psi1: bool,
    /// `psi3^0.694 >= psi2`
    pub relaxed_psi2: bool,
}

impl SkewReport {
    pub fn from_psi(p: PseudoParams, psi1: f64, psi2: f64, psi3: f64) -> Self {
        let s = p.s() as i32;
        let b = p.b() as f64;
        let ratio1 = (25.0f64 / 7.0).powi(s) * b * b * psi1 / psi3;
        let ratio2 = (13.0f64 / 7.0).powi(s) * b * psi2 / psi3;
        Self {
            ratio1,
            ratio2,
            ratio1_ok: ratio1 <= SKEW_THRESHOLD,
            ratio2_ok: ratio2 <= SKEW_THRESHOLD,
            poly_psi1: psi3.powf(0.345) >= psi1,
            poly_psi2: psi3.powf(0.681) >= psi2,
            relaxed_psi1: psi3.powf(0.350) >= psi1,
            relaxed_psi2: psi3.powf(0.694) >= psi2,
        }
    }

    /// True when some ratio exceeds [`SKEW_THRESHOLD`].
    pub fn warns(&self) -> bool {
        !(self.ratio1_ok && self.ratio2_ok)
    }
}

pub fn check_skew(p: PseudoParams, stats: &InstanceStats) -> SkewReport {
    SkewReport::from_psi(p, stats.psi1 as f64, stats.psi2 as f64, stats.psi3 as f64)
}
