//! Witness recovery.
//!
//! A single estimate lifts the instance as in [`crate::sketch`], but the lifted
//! right operand carries the 1-based inner index `f3(z) + 1` of every nonzero
//! entry, spread over `L` bit-planes. When exactly one surviving summand feeds
//! a lifted entry, the planes spell out its index; any decoded index is kept
//! only after checking `A[i][k] B[k][j] = 1`, so every stored witness is valid.
//!
//! [`wbmm`] sweeps depths `s = 0..=s_max` with `20 * 4^(s_max - s)` estimates
//! each, then finishes any entry the Boolean product marks as 1 but that still
//! lacks a witness by scanning inner indices in a random order.

use std::fmt::Write as _;

use rand::seq::SliceRandom;
use rayon::prelude::*;

use crate::analysis::{s_max, trials_at};
use crate::error::{Error, Result};
use crate::gfmat::format::{parse_canonical, parse_dims, strict_lines};
use crate::gfmat::{BitMatrix, InstanceStats, WORD_BITS};
use crate::pseudomul::{pseudo_product_bitplanes, CounterReport, PseudoParams};
use crate::rng::{derive_seed, stream, tags};
use crate::sketch::{
    bmm_with, draw_sample_maps, lift, BmmOptions, BmmPath, Strategy, DEFAULT_BASE,
};

pub const WMAT_MAGIC: &str = "WMAT 1";

/// `d1 x d2` witness indices; `None` is the empty witness, `Some(k)` the
/// 1-based inner index `k`.
#[derive(Clone, PartialEq, Eq)]
pub struct WitnessMatrix {
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

impl WitnessMatrix {
    pub fn empty(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Option<u32> {
        assert!(i < self.rows && j < self.cols);
        match self.data[i * self.cols + j] {
            0 => None,
            k => Some(k),
        }
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, k: Option<u32>) {
        assert!(i < self.rows && j < self.cols);
        self.data[i * self.cols + j] = k.unwrap_or(0);
    }

    /// Number of non-empty entries.
    pub fn count_set(&self) -> usize {
        self.data.iter().filter(|&&k| k != 0).count()
    }

    /// Copies every non-empty entry of `other` over `self`.
    pub fn merge_from(&mut self, other: &Self) {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        for (dst, &src) in self.data.iter_mut().zip(&other.data) {
            if src != 0 {
                *dst = src;
            }
        }
    }

    /// Entries whose index is out of range or not a witness for `a * b`.
    pub fn invalid_entries(&self, a: &BitMatrix, b: &BitMatrix) -> Vec<(usize, usize)> {
        let mut bad = Vec::new();
        for i in 0..self.rows {
            for j in 0..self.cols {
                if let Some(k) = self.get(i, j) {
                    let k = k as usize - 1;
                    if k >= a.cols() || !(a.get(i, k) && b.get(k, j)) {
                        bad.push((i, j));
                    }
                }
            }
        }
        bad
    }

    pub fn is_valid_for(&self, a: &BitMatrix, b: &BitMatrix) -> bool {
        self.rows == a.rows() && self.cols == b.cols() && self.invalid_entries(a, b).is_empty()
    }

    /// Positions where `product` is 1 but no witness is stored.
    pub fn missing_entries(&self, product: &BitMatrix) -> usize {
        (0..self.rows)
            .flat_map(|i| (0..self.cols).map(move |j| (i, j)))
            .filter(|&(i, j)| product.get(i, j) && self.get(i, j).is_none())
            .count()
    }

    /// Support of the witness matrix as a Boolean matrix.
    pub fn support(&self) -> BitMatrix {
        BitMatrix::from_fn(self.rows, self.cols, |i, j| self.get(i, j).is_some())
    }

    pub fn to_wmat(&self) -> String {
        let mut out = String::new();
        writeln!(out, "{WMAT_MAGIC}").unwrap();
        writeln!(out, "{} {}", self.rows, self.cols).unwrap();
        for i in 0..self.rows {
            let row = &self.data[i * self.cols..(i + 1) * self.cols];
            for (j, k) in row.iter().enumerate() {
                if j > 0 {
                    out.push(' ');
                }
                write!(out, "{k}").unwrap();
            }
            out.push('\n');
        }
        out
    }

    pub fn parse_wmat(text: &str) -> Result<Self> {
        let lines = strict_lines(text)?;
        if lines.first() != Some(&WMAT_MAGIC) {
            return Err(Error::parse(1, format!("expected header {WMAT_MAGIC:?}")));
        }
        let dims = lines
            .get(1)
            .ok_or_else(|| Error::parse(2, "missing dimensions"))?;
        let (rows, cols) = parse_dims(dims, 2)?;
        if lines.len() != rows + 2 {
            return Err(Error::parse(
                lines.len().min(rows + 2) + 1,
                format!("expected {rows} rows, found {}", lines.len() - 2),
            ));
        }
        let mut w = Self::empty(rows, cols);
        for (i, line) in lines[2..].iter().enumerate() {
            let lineno = i + 3;
            let toks: Vec<&str> = line.split(' ').collect();
            if toks.len() != cols {
                return Err(Error::parse(
                    lineno,
                    format!("expected {cols} entries, found {}", toks.len()),
                ));
            }
            for (j, tok) in toks.iter().enumerate() {
                let k = parse_canonical(tok, lineno)?;
                let k = u32::try_from(k)
                    .map_err(|_| Error::parse(lineno, "witness index too large"))?;
                w.data[i * cols + j] = k;
            }
        }
        Ok(w)
    }
}

impl std::fmt::Debug for WitnessMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.to_wmat())
    }
}

/// Number of bit-planes needed for indices `1..=d3`.
pub fn plane_count(d3: usize) -> usize {
    (usize::BITS - d3.leading_zeros()) as usize
}

/// One estimate and the counters of its pseudo-product.
pub fn witness_estimate_detailed(
    a: &BitMatrix,
    b: &BitMatrix,
    p: PseudoParams,
    seed: u64,
) -> Result<(WitnessMatrix, CounterReport)> {
    let stats = InstanceStats::of(a, b)?;
    let maps = draw_sample_maps(&stats, p, seed);
    let (a_bar, b_masked) = lift(a, b, &maps)?;
    let m = p.m();
    let planes_n = plane_count(a.cols());

    let mut planes = vec![BitMatrix::zeros(m, m); planes_n];
    for z in 0..m {
        let payload = maps.f3[z] + 1;
        for (l, plane) in planes.iter_mut().enumerate() {
            if payload >> l & 1 == 1 {
                plane.row_mut(z).copy_from_slice(b_masked.row(z));
            }
        }
    }
    let (c_planes, counters) = pseudo_product_bitplanes(&a_bar, &planes, p)?;

    let mut w = WitnessMatrix::empty(a.rows(), b.cols());
    let d3 = a.cols();
    for x in 0..m {
        let i = maps.f1[x] as usize;
        for wi in 0..c_planes[0].stride() {
            let mut any = c_planes.iter().fold(0u64, |acc, pl| acc | pl.row(x)[wi]);
            while any != 0 {
                let bit = any.trailing_zeros() as usize;
                any &= any - 1;
                let k = c_planes.iter().enumerate().fold(0usize, |acc, (l, pl)| {
                    acc | ((pl.row(x)[wi] >> bit & 1) as usize) << l
                });
                let y = wi * WORD_BITS + bit;
                let j = maps.f2[y] as usize;
                if (1..=d3).contains(&k) && a.get(i, k - 1) && b.get(k - 1, j) {
                    w.set(i, j, Some(k as u32));
                }
            }
        }
    }
    Ok((w, counters))
}

/// Estimated witness matrix from one lifted pseudo-product at parameters `p`.
pub fn witness_estimate(
    a: &BitMatrix,
    b: &BitMatrix,
    p: PseudoParams,
    seed: u64,
) -> Result<WitnessMatrix> {
    Ok(witness_estimate_detailed(a, b, p, seed)?.0)
}

/// Fills every empty entry with `c_tilde[i][j] = 1` by scanning the inner
/// indices in a random order. Returns the number of `(i, j, k)` probes.
pub fn fallback_scan(
    a: &BitMatrix,
    b: &BitMatrix,
    c_tilde: &BitMatrix,
    w: &mut WitnessMatrix,
    seed: u64,
) -> Result<u64> {
    if a.cols() != b.rows()
        || c_tilde.dims() != (a.rows(), b.cols())
        || (w.rows, w.cols) != (a.rows(), b.cols())
    {
        return Err(Error::dims("fallback_scan", "operands disagree on shape"));
    }
    let d3 = a.cols();
    let mut perm: Vec<usize> = (0..d3).collect();
    perm.shuffle(&mut stream(derive_seed(seed, tags::PERMUTATION, 0)));

    let mut probes = 0u64;
    for i in 0..a.rows() {
        for j in c_tilde.iter_row_ones(i) {
            if w.get(i, j).is_some() {
                continue;
            }
            for &k in &perm {
                probes += 1;
                if a.get(i, k) && b.get(k, j) {
                    w.set(i, j, Some(k as u32 + 1));
                    break;
                }
            }
        }
    }
    Ok(probes)
}

/// Probe count [`fallback_scan`] would spend on `w_partial`.
pub fn fallback_scan_cost(
    a: &BitMatrix,
    b: &BitMatrix,
    c_tilde: &BitMatrix,
    w_partial: &WitnessMatrix,
    seed: u64,
) -> Result<u64> {
    let mut w = w_partial.clone();
    fallback_scan(a, b, c_tilde, &mut w, seed)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WbmmConfig {
    pub base: usize,
    pub seed: u64,
    /// Passed to the Boolean-product stage; `None` means `1 / psi3`.
    pub delta: Option<f64>,
    pub strategy: Strategy,
}

impl Default for WbmmConfig {
    fn default() -> Self {
        Self {
            base: DEFAULT_BASE,
            seed: 0,
            delta: None,
            strategy: Strategy::Auto,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StageReport {
    pub s: u32,
    pub trials: u64,
    pub base_mults: u128,
}

#[derive(Debug, Clone)]
pub struct WbmmReport {
    pub witnesses: WitnessMatrix,
    pub c_tilde: BitMatrix,
    pub bmm_path: BmmPath,
    pub s_max: u32,
    pub stages: Vec<StageReport>,
    /// Entries set by the sampling stages, before the fallback scan.
    pub set_before_fallback: usize,
    pub fallback_probes: u64,
}

impl WbmmReport {
    pub fn total_base_mults(&self) -> u128 {
        self.stages.iter().map(|s| s.base_mults).sum()
    }
}

/// Trials evaluated at once; bounds the number of live estimates.
const TRIAL_CHUNK: u64 = 64;

pub fn wbmm_detailed(a: &BitMatrix, b: &BitMatrix, cfg: &WbmmConfig) -> Result<WbmmReport> {
    let stats = InstanceStats::of(a, b)?;
    let bmm = bmm_with(
        a,
        b,
        &BmmOptions {
            base: cfg.base,
            seed: cfg.seed,
            delta: cfg.delta,
            strategy: cfg.strategy,
        },
    )?;
    let c_tilde = bmm.product;

    let top = s_max(&stats, cfg.base);
    let mut w = WitnessMatrix::empty(a.rows(), b.cols());
    let mut stages = Vec::with_capacity(top as usize + 1);
    for s in 0..=top {
        let p = PseudoParams::new(s, cfg.base)?;
        let trials = trials_at(s, top);
        let mut base_mults = 0u128;
        let mut start = 0;
        while start < trials {
            let end = (start + TRIAL_CHUNK).min(trials);
            let results: Vec<Result<(WitnessMatrix, CounterReport)>> = (start..end)
                .into_par_iter()
                .map(|t| {
                    let seed = derive_seed(cfg.seed, tags::WITNESS_TRIAL, (u64::from(s) << 40) | t);
                    witness_estimate_detailed(a, b, p, seed)
                })
                .collect();
            for r in results {
                let (est, counters) = r?;
                w.merge_from(&est);
                base_mults += counters.base_mults;
            }
            start = end;
        }
        stages.push(StageReport {
            s,
            trials,
            base_mults,
        });
    }

    let set_before_fallback = w.count_set();
    let fallback_probes = fallback_scan(a, b, &c_tilde, &mut w, cfg.seed)?;
    Ok(WbmmReport {
        witnesses: w,
        c_tilde,
        bmm_path: bmm.path,
        s_max: top,
        stages,
        set_before_fallback,
        fallback_probes,
    })
}

/// Witness matrix for the Boolean product `a * b`.
pub fn wbmm(a: &BitMatrix, b: &BitMatrix, seed: u64) -> Result<WitnessMatrix> {
    let cfg = WbmmConfig {
        seed,
        ..WbmmConfig::default()
    };
    Ok(wbmm_detailed(a, b, &cfg)?.witnesses)
}
