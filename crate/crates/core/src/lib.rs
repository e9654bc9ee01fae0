//! Boolean matrix multiplication (BMM) and witnessing BMM through the
//! broken-Strassen pseudo-product.
//!
//! * [`gfmat`]: bit-packed GF(2)/Boolean matrices and exact kernels.
//! * [`pseudomul`]: the broken recursion `A (x) B` with operation counters.
//! * [`sketch`]: randomized BMM from a single large GF(2) pseudo-product.
//! * [`witness`]: witness recovery on top of the sketch.
//! * [`analysis`]: parameter selection and the counting/probability
//!   quantities behind it.
//! * [`cli`]: the command implementations behind the `opbmm` binary.

pub mod analysis;
pub mod cli;
mod error;
pub mod gfmat;
pub mod pseudomul;
pub mod ring;
pub mod rng;
pub mod sketch;
pub mod witness;

pub use error::{Error, Result};
pub use gfmat::{bool_mul_naive, gf2_mul_naive, gf2_mul_strassen, BitMatrix, InstanceStats};
pub use pseudomul::{pseudo_product, triple_survives, CounterReport, PseudoParams};
pub use sketch::{bmm, bmm_estimate, SketchConfig};
pub use witness::{wbmm, witness_estimate, WitnessMatrix};
