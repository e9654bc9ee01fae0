//! Randomized BMM from one GF(2) pseudo-product.
//!
//! Rows, inner indices and columns of the instance are hashed onto `[m]` by
//! random maps `f1`, `f2`, `f3`; `B` is additionally masked by a random bit
//! matrix `D`. After one pseudo-product of the lifted `m x m` matrices, each
//! output entry `(i, j)` is the OR of the lifted entries over the preimages
//! `f1^-1(i) x f2^-1(j)`.
//!
//! Every lifted summand equals `A[i][k] B[k][j] D[z][y]` for the `(i, j, k)`
//! it maps to, so an entry that is 0 in the exact product stays 0 in the
//! estimate for every draw.

use rand::Rng;

use crate::analysis::{check_skew, select_s, SkewReport};
use crate::error::{Error, Result};
use crate::gfmat::{bool_mul_naive, BitMatrix, InstanceStats};
use crate::pseudomul::{pseudo_product, CounterReport, PseudoParams};
use crate::rng::{derive_seed, stream, tags};

/// Base dimension used when none is given.
pub const DEFAULT_BASE: usize = 64;

/// Instances whose largest dimension is at most this are always multiplied
/// exactly by [`bmm`].
pub const NAIVE_MAX_DIM: u64 = 64;

/// The random maps and mask of one sketch.
///
/// Drawn from a single ChaCha8 stream keyed by `seed`, in this order:
/// `f1[0..m]`, `f2[0..m]`, `f3[0..m]` (each by `gen_range(0..d)`), then the
/// words of `D` row by row.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SampleMaps {
    pub f1: Vec<u32>,
    pub f2: Vec<u32>,
    pub f3: Vec<u32>,
    pub d: BitMatrix,
    pub seed: u64,
}

impl SampleMaps {
    pub fn m(&self) -> usize {
        self.f1.len()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SketchConfig {
    pub params: PseudoParams,
    pub seed: u64,
    /// Target per-entry miss probability.
    pub delta: f64,
}

impl SketchConfig {
    pub fn new(params: PseudoParams, seed: u64, delta: f64) -> Result<Self> {
        if !(delta > 0.0 && delta < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "delta = {delta} must lie in (0, 1)"
            )));
        }
        Ok(Self {
            params,
            seed,
            delta,
        })
    }

    /// Depth from [`select_s`] for this instance, base `b`.
    pub fn for_instance(stats: &InstanceStats, b: usize, seed: u64, delta: f64) -> Result<Self> {
        let s = select_s(stats, b, delta)?;
        Self::new(PseudoParams::new(s, b)?, seed, delta)
    }
}

fn draw_map<G: Rng>(rng: &mut G, m: usize, d: u64) -> Vec<u32> {
    (0..m).map(|_| rng.gen_range(0..d) as u32).collect()
}

pub fn draw_sample_maps(stats: &InstanceStats, p: PseudoParams, seed: u64) -> SampleMaps {
    let m = p.m();
    let mut rng = stream(seed);
    let f1 = draw_map(&mut rng, m, stats.d1);
    let f2 = draw_map(&mut rng, m, stats.d2);
    let f3 = draw_map(&mut rng, m, stats.d3);
    let d = BitMatrix::random(m, m, &mut rng);
    SampleMaps {
        f1,
        f2,
        f3,
        d,
        seed,
    }
}

fn check_maps(a: &BitMatrix, b: &BitMatrix, maps: &SampleMaps) -> Result<()> {
    let m = maps.m();
    if a.cols() != b.rows() {
        return Err(Error::dims(
            "lift",
            format!("{:?} times {:?}", a.dims(), b.dims()),
        ));
    }
    let in_range = |f: &[u32], d: usize| f.len() == m && f.iter().all(|&v| (v as usize) < d);
    if !(in_range(&maps.f1, a.rows())
        && in_range(&maps.f2, b.cols())
        && in_range(&maps.f3, a.cols()))
        || maps.d.dims() != (m, m)
    {
        return Err(Error::dims("lift", "sample maps do not fit the instance"));
    }
    Ok(())
}

/// Row `src` of `mat` gathered through `cols`: bit `t` is `mat[src][cols[t]]`.
fn gather_row(mat: &BitMatrix, src: usize, cols: &[u32], out: &mut BitMatrix, dst: usize) {
    for (t, &c) in cols.iter().enumerate() {
        if mat.get(src, c as usize) {
            out.set(dst, t, true);
        }
    }
}

/// Lifted operands: `Abar[x][z] = A[f1 x][f3 z]` and
/// `Bbar[z][y] = B[f3 z][f2 y] & D[z][y]`.
pub fn lift(a: &BitMatrix, b: &BitMatrix, maps: &SampleMaps) -> Result<(BitMatrix, BitMatrix)> {
    check_maps(a, b, maps)?;
    let m = maps.m();

    // one gathered row per source row, then copied out per preimage
    let mut a_rows = BitMatrix::zeros(a.rows(), m);
    for i in 0..a.rows() {
        gather_row(a, i, &maps.f3, &mut a_rows, i);
    }
    let mut b_rows = BitMatrix::zeros(b.rows(), m);
    for k in 0..b.rows() {
        gather_row(b, k, &maps.f2, &mut b_rows, k);
    }

    let mut a_bar = BitMatrix::zeros(m, m);
    let mut b_bar = BitMatrix::zeros(m, m);
    for x in 0..m {
        a_bar
            .row_mut(x)
            .copy_from_slice(a_rows.row(maps.f1[x] as usize));
        let src = b_rows.row(maps.f3[x] as usize);
        let mask = maps.d.row(x);
        for ((dst, &s), &d) in b_bar.row_mut(x).iter_mut().zip(src).zip(mask) {
            *dst = s & d;
        }
    }
    Ok((a_bar, b_bar))
}

/// `est[i][j] = OR of cbar[x][y] over f1(x) = i, f2(y) = j`.
pub fn project(c_bar: &BitMatrix, maps: &SampleMaps, stats: &InstanceStats) -> Result<BitMatrix> {
    let m = maps.m();
    if c_bar.dims() != (m, m) {
        return Err(Error::dims(
            "project",
            format!("{:?} for m = {m}", c_bar.dims()),
        ));
    }
    let (d1, d2) = (stats.d1 as usize, stats.d2 as usize);
    let mut row_union = BitMatrix::zeros(d1, m);
    for x in 0..m {
        let i = maps.f1[x] as usize;
        for (dst, &s) in row_union.row_mut(i).iter_mut().zip(c_bar.row(x)) {
            *dst |= s;
        }
    }
    let mut out = BitMatrix::zeros(d1, d2);
    for i in 0..d1 {
        for y in row_union.iter_row_ones(i) {
            out.set(i, maps.f2[y] as usize, true);
        }
    }
    Ok(out)
}

/// One sketch with its bookkeeping.
#[derive(Debug, Clone)]
pub struct SketchOutcome {
    pub estimate: BitMatrix,
    pub params: PseudoParams,
    pub counters: CounterReport,
}

pub fn bmm_estimate_detailed(
    a: &BitMatrix,
    b: &BitMatrix,
    cfg: &SketchConfig,
) -> Result<SketchOutcome> {
    let stats = InstanceStats::of(a, b)?;
    let maps = draw_sample_maps(&stats, cfg.params, cfg.seed);
    let (a_bar, b_bar) = lift(a, b, &maps)?;
    let (c_bar, counters) = pseudo_product(&a_bar, &b_bar, cfg.params)?;
    Ok(SketchOutcome {
        estimate: project(&c_bar, &maps, &stats)?,
        params: cfg.params,
        counters,
    })
}

/// One-sided estimate of the Boolean product `a * b`.
pub fn bmm_estimate(a: &BitMatrix, b: &BitMatrix, cfg: &SketchConfig) -> Result<BitMatrix> {
    Ok(bmm_estimate_detailed(a, b, cfg)?.estimate)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Strategy {
    /// Sketch unless the exact product is cheaper.
    #[default]
    Auto,
    Sketch,
    Naive,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BmmOptions {
    pub base: usize,
    pub seed: u64,
    /// Per-entry miss target; `None` means `1 / psi3`.
    pub delta: Option<f64>,
    pub strategy: Strategy,
}

impl Default for BmmOptions {
    fn default() -> Self {
        Self {
            base: DEFAULT_BASE,
            seed: 0,
            delta: None,
            strategy: Strategy::Auto,
        }
    }
}

impl BmmOptions {
    pub fn resolved_delta(&self, stats: &InstanceStats) -> f64 {
        self.delta.unwrap_or(if stats.psi3 > 1 {
            1.0 / stats.psi3 as f64
        } else {
            0.5
        })
    }
}

#[derive(Debug, Clone)]
pub enum BmmPath {
    Naive,
    Sketch {
        params: PseudoParams,
        counters: CounterReport,
        skew: SkewReport,
    },
}

#[derive(Debug, Clone)]
pub struct BmmOutcome {
    pub product: BitMatrix,
    pub path: BmmPath,
}

/// Estimated work of a sketch in scalar bit operations, `b^3 6^s`.
pub fn sketch_cost(p: PseudoParams) -> u128 {
    (p.b() as u128)
        .saturating_pow(3)
        .saturating_mul(6u128.saturating_pow(p.s()))
}

pub fn bmm_with(a: &BitMatrix, b: &BitMatrix, opts: &BmmOptions) -> Result<BmmOutcome> {
    let stats = InstanceStats::of(a, b)?;
    let naive = || -> Result<BmmOutcome> {
        Ok(BmmOutcome {
            product: bool_mul_naive(a, b)?,
            path: BmmPath::Naive,
        })
    };
    if opts.strategy == Strategy::Naive
        || (opts.strategy == Strategy::Auto && stats.max_dim() <= NAIVE_MAX_DIM)
    {
        return naive();
    }
    let delta = opts.resolved_delta(&stats);
    let seed = derive_seed(opts.seed, tags::BMM, 0);
    let cfg = SketchConfig::for_instance(&stats, opts.base, seed, delta)?;
    if opts.strategy == Strategy::Auto && sketch_cost(cfg.params) >= stats.psi3 {
        return naive();
    }
    let out = bmm_estimate_detailed(a, b, &cfg)?;
    Ok(BmmOutcome {
        product: out.estimate,
        path: BmmPath::Sketch {
            params: out.params,
            counters: out.counters,
            skew: check_skew(out.params, &stats),
        },
    })
}

/// Boolean product, exact on the naive path and one-sided otherwise.
pub fn bmm(a: &BitMatrix, b: &BitMatrix, seed: u64, delta: f64) -> Result<BitMatrix> {
    let opts = BmmOptions {
        seed,
        delta: Some(delta),
        ..BmmOptions::default()
    };
    Ok(bmm_with(a, b, &opts)?.product)
}
