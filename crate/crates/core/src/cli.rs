//! Command implementations behind the `opbmm` binary.
//!
//! Each `cmd_*` function reads its inputs, writes any output file
//! atomically (temporary file in the same directory, then rename) and prints
//! its report to the supplied writer. The binary only parses flags.

use std::fs;
use std::io::Write;
use std::num::Wrapping;
use std::path::{Path, PathBuf};
use std::time::Instant;

use num_traits::ToPrimitive;

use crate::analysis::{
    check_skew, delta_bound, delta_bound_appendix, good_tuple_failure_bound, mu, s_hat, s_max,
    select_s, BoundConstants,
};
use crate::error::{Error, Result};
use crate::gfmat::{bool_mul_naive, gf2_mul_strassen, BitMatrix, InstanceStats};
use crate::pseudomul::{pseudo_product, CounterReport, PseudoParams};
use crate::ring::DenseMatrix;
use crate::rng::{derive_seed, stream, tags};
use crate::sketch::{bmm_with, BmmOptions, BmmPath, Strategy, DEFAULT_BASE};
use crate::witness::{wbmm_detailed, WbmmConfig, WitnessMatrix};

/// Seed used when none is given.
pub const DEFAULT_SEED: u64 = 0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Algo {
    Naive,
    Strassen,
    #[default]
    Sketch,
}

impl std::str::FromStr for Algo {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "naive" => Ok(Algo::Naive),
            "strassen" => Ok(Algo::Strassen),
            "sketch" => Ok(Algo::Sketch),
            _ => Err(Error::InvalidParameter(format!("unknown algorithm {s:?}"))),
        }
    }
}

/// Inclusive range of recursion depths, written `LO:HI` or `S`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DepthRange {
    pub lo: u32,
    pub hi: u32,
}

impl std::str::FromStr for DepthRange {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidParameter(format!("bad depth range {s:?}, expected LO:HI"));
        let (lo, hi) = match s.split_once(':') {
            Some((lo, hi)) => (
                lo.parse().map_err(|_| bad())?,
                hi.parse().map_err(|_| bad())?,
            ),
            None => {
                let v = s.parse().map_err(|_| bad())?;
                (v, v)
            }
        };
        if lo > hi {
            return Err(bad());
        }
        Ok(DepthRange { lo, hi })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum RunConfig {
    Mul(MulArgs),
    Witness(WitnessArgs),
    Verify(VerifyArgs),
    Stats(StatsArgs),
    Bench(BenchArgs),
}

#[derive(Debug, Clone, PartialEq)]
pub struct MulArgs {
    pub a: PathBuf,
    pub b: PathBuf,
    pub out: PathBuf,
    pub algo: Algo,
    pub seed: u64,
    pub base: usize,
    pub delta: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct WitnessArgs {
    pub a: PathBuf,
    pub b: PathBuf,
    pub out: PathBuf,
    pub seed: u64,
    pub base: usize,
    pub delta: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyArgs {
    pub a: PathBuf,
    pub b: PathBuf,
    pub product: Option<PathBuf>,
    pub witness: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StatsArgs {
    pub d1: usize,
    pub d2: usize,
    pub d3: usize,
    pub s: Option<u32>,
    pub base: usize,
    pub delta: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchArgs {
    pub depths: DepthRange,
    pub base: usize,
    pub seed: u64,
    pub trials: u32,
}

impl Default for BenchArgs {
    fn default() -> Self {
        Self {
            depths: DepthRange { lo: 0, hi: 4 },
            base: DEFAULT_BASE,
            seed: DEFAULT_SEED,
            trials: 1,
        }
    }
}

pub fn read_bmat(path: &Path) -> Result<BitMatrix> {
    BitMatrix::parse_bmat(&fs::read_to_string(path)?)
}

pub fn read_wmat(path: &Path) -> Result<WitnessMatrix> {
    WitnessMatrix::parse_wmat(&fs::read_to_string(path)?)
}

/// Writes `contents` to a sibling temporary file and renames it over `path`.
pub fn write_atomic(path: &Path, contents: &str) -> Result<()> {
    let dir = path
        .parent()
        .filter(|p| !p.as_os_str().is_empty())
        .unwrap_or(Path::new("."));
    let name = path
        .file_name()
        .ok_or_else(|| Error::InvalidParameter(format!("{} is not a file path", path.display())))?;
    let tmp = dir.join(format!(
        ".{}.{}.tmp",
        name.to_string_lossy(),
        std::process::id()
    ));
    fs::write(&tmp, contents)?;
    if let Err(e) = fs::rename(&tmp, path) {
        let _ = fs::remove_file(&tmp);
        return Err(e.into());
    }
    Ok(())
}

fn check_conformable(a: &BitMatrix, b: &BitMatrix) -> Result<InstanceStats> {
    InstanceStats::of(a, b)
}

/// Zero-pads both operands to the smallest `base * 2^t` square that holds them.
fn pad_square(a: &BitMatrix, b: &BitMatrix, base: usize) -> (BitMatrix, BitMatrix, usize) {
    let need = a.rows().max(a.cols()).max(b.cols());
    let base = base.clamp(1, need);
    let mut n = base;
    while n < need {
        n *= 2;
    }
    let mut pa = BitMatrix::zeros(n, n);
    pa.put_block(0, 0, a);
    let mut pb = BitMatrix::zeros(n, n);
    pb.put_block(0, 0, b);
    (pa, pb, base)
}

/// GF(2) product through the Strassen baseline on zero-padded operands.
pub fn strassen_padded(a: &BitMatrix, b: &BitMatrix, base: usize) -> Result<BitMatrix> {
    check_conformable(a, b)?;
    let (pa, pb, base) = pad_square(a, b, base);
    let c = gf2_mul_strassen(&pa, &pb, base)?;
    Ok(c.block(0, 0, a.rows(), b.cols()))
}

/// Exact Boolean product: Strassen over the integers mod 2^32 on the 0/1
/// operands (the counts never exceed `d3`), then `count > 0`.
pub fn bool_mul_strassen(a: &BitMatrix, b: &BitMatrix, base: usize) -> Result<BitMatrix> {
    check_conformable(a, b)?;
    let (pa, pb, base) = pad_square(a, b, base);
    let n = pa.rows();
    let lift = |m: &BitMatrix| DenseMatrix::from_fn(n, n, |i, j| Wrapping(u32::from(m.get(i, j))));
    let counts = lift(&pa).mul_strassen(&lift(&pb), base)?;
    Ok(BitMatrix::from_fn(a.rows(), b.cols(), |i, j| {
        counts.get(i, j).0 > 0
    }))
}

pub fn cmd_mul(args: &MulArgs, log: &mut dyn Write) -> Result<()> {
    let a = read_bmat(&args.a)?;
    let b = read_bmat(&args.b)?;
    let stats = check_conformable(&a, &b)?;
    let product = match args.algo {
        Algo::Naive => {
            writeln!(log, "algo = naive")?;
            bool_mul_naive(&a, &b)?
        }
        Algo::Strassen => {
            writeln!(log, "algo = strassen")?;
            bool_mul_strassen(&a, &b, args.base)?
        }
        Algo::Sketch => {
            let opts = BmmOptions {
                base: args.base,
                seed: args.seed,
                delta: args.delta,
                strategy: Strategy::Sketch,
            };
            let out = bmm_with(&a, &b, &opts)?;
            writeln!(log, "algo = sketch")?;
            writeln!(log, "delta = {}", opts.resolved_delta(&stats))?;
            if let BmmPath::Sketch {
                params,
                counters,
                skew,
            } = &out.path
            {
                writeln!(log, "s = {}", params.s())?;
                writeln!(log, "b = {}", params.b())?;
                writeln!(log, "m = {}", params.m())?;
                writeln!(log, "base_mults = {}", counters.base_mults)?;
                writeln!(log, "block_adds = {}", counters.block_adds)?;
                if skew.warns() {
                    writeln!(
                        log,
                        "warning: skew ratios {:.3} / {:.3} exceed the 0.1 threshold",
                        skew.ratio1, skew.ratio2
                    )?;
                }
            }
            out.product
        }
    };
    write_atomic(&args.out, &product.to_bmat())?;
    writeln!(log, "ones = {}", product.count_ones())?;
    Ok(())
}

pub fn cmd_witness(args: &WitnessArgs, log: &mut dyn Write) -> Result<()> {
    let a = read_bmat(&args.a)?;
    let b = read_bmat(&args.b)?;
    check_conformable(&a, &b)?;
    let cfg = WbmmConfig {
        base: args.base,
        seed: args.seed,
        delta: args.delta,
        strategy: Strategy::Auto,
    };
    let report = wbmm_detailed(&a, &b, &cfg)?;
    writeln!(
        log,
        "bmm_path = {}",
        match report.bmm_path {
            BmmPath::Naive => "naive",
            BmmPath::Sketch { .. } => "sketch",
        }
    )?;
    writeln!(log, "s_max = {}", report.s_max)?;
    for st in &report.stages {
        writeln!(log, "trials[s={}] = {}", st.s, st.trials)?;
    }
    writeln!(log, "block_mults = {}", report.total_base_mults())?;
    writeln!(log, "set_before_fallback = {}", report.set_before_fallback)?;
    writeln!(log, "fallback_probes = {}", report.fallback_probes)?;
    write_atomic(&args.out, &report.witnesses.to_wmat())?;
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct VerifyReport {
    pub false_positives: u64,
    pub false_negatives: u64,
    pub witness_violations: u64,
    pub witness_missing: u64,
}

impl VerifyReport {
    /// No false positives and no invalid witnesses.
    pub fn ok(&self) -> bool {
        self.false_positives == 0 && self.witness_violations == 0
    }
}

pub fn verify(
    a: &BitMatrix,
    b: &BitMatrix,
    product: Option<&BitMatrix>,
    witness: Option<&WitnessMatrix>,
) -> Result<VerifyReport> {
    let exact = bool_mul_naive(a, b)?;
    let mut r = VerifyReport::default();
    if let Some(c) = product {
        if c.dims() != exact.dims() {
            return Err(Error::dims(
                "verify",
                format!("product {:?} vs {:?}", c.dims(), exact.dims()),
            ));
        }
        r.false_positives = c.count_excess_over(&exact);
        r.false_negatives = exact.count_excess_over(c);
    }
    if let Some(w) = witness {
        if (w.rows(), w.cols()) != exact.dims() {
            return Err(Error::dims(
                "verify",
                format!("witness {}x{} vs {:?}", w.rows(), w.cols(), exact.dims()),
            ));
        }
        r.witness_violations = w.invalid_entries(a, b).len() as u64;
        r.witness_missing = w.missing_entries(&exact) as u64;
    }
    Ok(r)
}

pub fn cmd_verify(args: &VerifyArgs, log: &mut dyn Write) -> Result<VerifyReport> {
    let a = read_bmat(&args.a)?;
    let b = read_bmat(&args.b)?;
    check_conformable(&a, &b)?;
    let product = args.product.as_deref().map(read_bmat).transpose()?;
    let witness = args.witness.as_deref().map(read_wmat).transpose()?;
    let r = verify(&a, &b, product.as_ref(), witness.as_ref())?;
    if product.is_some() {
        writeln!(log, "false_positives = {}", r.false_positives)?;
        writeln!(log, "false_negatives = {}", r.false_negatives)?;
    }
    if witness.is_some() {
        writeln!(log, "witness_violations = {}", r.witness_violations)?;
        writeln!(log, "witness_missing = {}", r.witness_missing)?;
    }
    writeln!(log, "status = {}", if r.ok() { "ok" } else { "violation" })?;
    Ok(r)
}

pub fn cmd_stats(args: &StatsArgs, log: &mut dyn Write) -> Result<()> {
    let stats = InstanceStats::new(args.d1, args.d2, args.d3)?;
    let delta = args.delta.unwrap_or(if stats.psi3 > 1 {
        1.0 / stats.psi3 as f64
    } else {
        0.5
    });
    let selected = select_s(&stats, args.base, delta)?;
    let s = args.s.unwrap_or(selected);
    let p = PseudoParams::new(s, args.base)?;
    let mu_v = mu(p, &stats)?;
    let db = delta_bound(p, &stats)?;
    let consts = BoundConstants::new();
    let skew = check_skew(p, &stats);
    let kappa = 3.0 * (1.0 / delta).ln();

    let mut kv = |k: &str, v: String| writeln!(log, "{k} = {v}");
    kv("d1", stats.d1.to_string())?;
    kv("d2", stats.d2.to_string())?;
    kv("d3", stats.d3.to_string())?;
    kv("psi1", stats.psi1.to_string())?;
    kv("psi2", stats.psi2.to_string())?;
    kv("psi3", stats.psi3.to_string())?;
    kv("s", s.to_string())?;
    kv("b", p.b().to_string())?;
    kv("m", p.m().to_string())?;
    kv("delta", delta.to_string())?;
    kv("select_s", selected.to_string())?;
    kv("s_max", s_max(&stats, args.base).to_string())?;
    kv("s_hat_gamma1", s_hat(&stats, args.base, 1)?.to_string())?;
    kv("mu", mu_v.to_string())?;
    kv("mu_f64", mu_v.to_f64().unwrap_or(f64::NAN).to_string())?;
    kv("delta_bound", db.to_string())?;
    kv(
        "delta_bound_f64",
        db.to_f64().unwrap_or(f64::NAN).to_string(),
    )?;
    match delta_bound_appendix(p, &stats) {
        Ok(v) => kv("delta_bound_appendix", v.to_string())?,
        Err(_) => kv("delta_bound_appendix", "undefined".into())?,
    }
    kv("alpha1", consts.alpha1.to_string())?;
    kv("alpha2", consts.alpha2.to_string())?;
    kv("kappa", kappa.to_string())?;
    if kappa >= 1.0 {
        let r = ((kappa / 2.0).floor() as u64).max(1);
        kv(
            "good_tuple_failure_bound_half_kappa",
            good_tuple_failure_bound(r, kappa)?.to_string(),
        )?;
    }
    kv("skew_ratio1", skew.ratio1.to_string())?;
    kv("skew_ratio2", skew.ratio2.to_string())?;
    kv("skew_ratio1_ok", skew.ratio1_ok.to_string())?;
    kv("skew_ratio2_ok", skew.ratio2_ok.to_string())?;
    kv("poly_psi1", skew.poly_psi1.to_string())?;
    kv("poly_psi2", skew.poly_psi2.to_string())?;
    kv("relaxed_psi1", skew.relaxed_psi1.to_string())?;
    kv("relaxed_psi2", skew.relaxed_psi2.to_string())?;
    Ok(())
}

/// One CSV row of `bench`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BenchRow {
    pub s: u32,
    pub m: usize,
    pub counters: CounterReport,
    pub wall_ms: f64,
}

pub fn bench_rows(args: &BenchArgs) -> Result<Vec<BenchRow>> {
    let mut rows = Vec::new();
    for s in args.depths.lo..=args.depths.hi {
        let p = PseudoParams::new(s, args.base)?;
        let m = p.m();
        let mut rng = stream(derive_seed(args.seed, tags::BENCH, u64::from(s)));
        let a = BitMatrix::random(m, m, &mut rng);
        let b = BitMatrix::random(m, m, &mut rng);
        let mut best = f64::INFINITY;
        let mut counters = CounterReport::default();
        for _ in 0..args.trials.max(1) {
            let t0 = Instant::now();
            let (_, c) = pseudo_product(&a, &b, p)?;
            best = best.min(t0.elapsed().as_secs_f64() * 1e3);
            counters = c;
        }
        if counters != CounterReport::expected(s) {
            return Err(Error::InvalidParameter(format!(
                "counter mismatch at s = {s}: got {counters:?}, expected {:?}",
                CounterReport::expected(s)
            )));
        }
        rows.push(BenchRow {
            s,
            m,
            counters,
            wall_ms: best,
        });
    }
    Ok(rows)
}

pub fn cmd_bench(args: &BenchArgs, log: &mut dyn Write) -> Result<()> {
    writeln!(log, "s,m,base_mults,block_adds,wall_ms")?;
    for r in bench_rows(args)? {
        writeln!(
            log,
            "{},{},{},{},{:.3}",
            r.s, r.m, r.counters.base_mults, r.counters.block_adds, r.wall_ms
        )?;
    }
    Ok(())
}

/// Dispatches one command; returns the process exit status.
pub fn run(cfg: &RunConfig, log: &mut dyn Write) -> Result<i32> {
    match cfg {
        RunConfig::Mul(a) => cmd_mul(a, log).map(|_| 0),
        RunConfig::Witness(a) => cmd_witness(a, log).map(|_| 0),
        RunConfig::Verify(a) => cmd_verify(a, log).map(|r| if r.ok() { 0 } else { 1 }),
        RunConfig::Stats(a) => cmd_stats(a, log).map(|_| 0),
        RunConfig::Bench(a) => cmd_bench(a, log).map(|_| 0),
    }
}
