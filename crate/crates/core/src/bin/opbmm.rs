use std::io;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use opbmm::cli::{
    run, Algo, BenchArgs, DepthRange, MulArgs, RunConfig, StatsArgs, VerifyArgs, WitnessArgs,
    DEFAULT_SEED,
};
use opbmm::sketch::DEFAULT_BASE;

/// Boolean matrix multiplication via opportunistic Strassen pseudo-products.
#[derive(Parser)]
#[command(name = "opbmm", version)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Multiply two BMAT/1 matrices.
    Mul {
        a: PathBuf,
        b: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value = "sketch")]
        algo: Algo,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long = "b", default_value_t = DEFAULT_BASE)]
        base: usize,
        #[arg(long)]
        delta: Option<f64>,
    },
    /// Compute a WMAT/1 witness matrix.
    Witness {
        a: PathBuf,
        b: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long = "b", default_value_t = DEFAULT_BASE)]
        base: usize,
        #[arg(long)]
        delta: Option<f64>,
    },
    /// Check a product and/or witness file against the exact product.
    Verify {
        a: PathBuf,
        b: PathBuf,
        #[arg(long)]
        product: Option<PathBuf>,
        #[arg(long)]
        witness: Option<PathBuf>,
    },
    /// Print parameter and bound quantities as `name = value` lines.
    Stats {
        d1: usize,
        d2: usize,
        d3: usize,
        #[arg(long)]
        s: Option<u32>,
        #[arg(long = "b", default_value_t = DEFAULT_BASE)]
        base: usize,
        #[arg(long)]
        delta: Option<f64>,
    },
    /// Time pseudo-products over a depth range and emit CSV.
    Bench {
        #[arg(long = "s-range", default_value = "0:4")]
        depths: DepthRange,
        #[arg(long = "b", default_value_t = DEFAULT_BASE)]
        base: usize,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        trials: u32,
    },
}

fn main() -> ExitCode {
    let cfg = match Cli::parse().cmd {
        Cmd::Mul {
            a,
            b,
            out,
            algo,
            seed,
            base,
            delta,
        } => RunConfig::Mul(MulArgs {
            a,
            b,
            out,
            algo,
            seed,
            base,
            delta,
        }),
        Cmd::Witness {
            a,
            b,
            out,
            seed,
            base,
            delta,
        } => RunConfig::Witness(WitnessArgs {
            a,
            b,
            out,
            seed,
            base,
            delta,
        }),
        Cmd::Verify {
            a,
            b,
            product,
            witness,
        } => RunConfig::Verify(VerifyArgs {
            a,
            b,
            product,
            witness,
        }),
        Cmd::Stats {
            d1,
            d2,
            d3,
            s,
            base,
            delta,
        } => RunConfig::Stats(StatsArgs {
            d1,
            d2,
            d3,
            s,
            base,
            delta,
        }),
        Cmd::Bench {
            depths,
            base,
            seed,
            trials,
        } => RunConfig::Bench(BenchArgs {
            depths,
            base,
            seed,
            trials,
        }),
    };
    match run(&cfg, &mut io::stdout().lock()) {
        Ok(0) => ExitCode::SUCCESS,
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
