//! Gate-level generation, verification, and analysis of combinational
//! priority encoders.
//!
//! A priority encoder takes an `n`-bit input and reports the index of the
//! most significant high bit (`floor(log2(x))`), together with a valid flag
//! that is low only for the all-zero input. This crate provides:
//!
//! - [`circuit`]: a small gate-level netlist IR plus builders for the
//!   primitive composite blocks (OR trees, mux trees, single-level encoders),
//! - [`arch`]: level sizing and full netlist generation for six encoder
//!   architectures (single-level mux/gate, recursive, tree, two-level, and
//!   composed/cascaded multi-level),
//! - [`sim`]: functional simulation, oracle-based verification, and static
//!   longest-path (normalized transistor) delay analysis,
//! - [`model`]: closed-form analytical cost/delay evaluation for every
//!   architecture in two mux-model modes, plus FPGA LUT normalization,
//! - [`analysis`]: design-space sweeps, relative complexity-delay scoring,
//!   per-precision recommendations, and FPGA synthesis-report ingestion,
//! - [`hdl`]: deterministic structural VHDL/Verilog emission.

pub mod analysis;
pub mod arch;
pub mod cells;
pub mod circuit;
pub mod hdl;
pub mod model;
pub mod netlist;
pub mod sim;

pub use arch::{Arch, Convention, EncoderSpec, ValidMethod};
pub use cells::CellKind;
pub use model::{MuxModel, TechParams};
pub use netlist::Netlist;

/// Crate-wide error type.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// A parameter is outside the supported domain (non-power-of-two width,
    /// out-of-range level count, and so on).
    #[error("invalid parameter: {0}")]
    InvalidParam(String),
    /// A structurally sound request that cannot be realized (level sizing
    /// produced a sub-encoder that is too small, for example).
    #[error("infeasible: {0}")]
    Infeasible(String),
    /// A netlist violated a structural invariant (cycle, undriven net,
    /// duplicate driver, arity mismatch).
    #[error("malformed netlist: {0}")]
    Netlist(String),
    /// An input file did not match the expected schema.
    #[error("schema error: {0}")]
    Schema(String),
    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),
    #[error("JSON error: {0}")]
    Json(#[from] serde_json::Error),
    #[error("CSV error: {0}")]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

/// `floor(log2(n))` for `n >= 1`.
pub(crate) fn ilog2(n: u64) -> u32 {
    debug_assert!(n >= 1);
    63 - n.leading_zeros()
}

/// True if `n` is a power of two (and nonzero).
pub(crate) fn is_pow2(n: u64) -> bool {
    n != 0 && n & (n - 1) == 0
}
