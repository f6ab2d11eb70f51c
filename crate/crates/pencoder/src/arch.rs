//! Level sizing and netlist generation for the six encoder families, plus
//! valid-flag attachment and output-convention handling.
//!
//! All generators take the input length `n` (a power of two) and produce a
//! deterministic netlist:
//!
//! - `build_slpe_mux` / `build_slpe_gate`: single-level encoders.
//! - `build_recursive`: k-way recursive decomposition with a k-input
//!   selector encoder over sub-valid flags.
//! - `build_tree`: recursive halving with the flipped ("native") output
//!   convention; the standard convention is a zero-cost relabeling.
//! - `build_2lpe` / `build_mlpe_composed` / `build_mlpe_cascaded`:
//!   two-level and multi-level encoders (OR layer → coarse encoder → wide
//!   mux → fine encoder), with composed sub-encoders recursing on both
//!   slots and cascaded ones consuming one OR/mux stage per level.

use crate::circuit::{
    build_slpe_gate, build_slpe_mux, mux_wide_frag, or_any_frag, or_tree_frag, slpe_mux_frag,
};
use crate::netlist::{Builder, NetId, Netlist};
use crate::{ilog2, is_pow2, Error, Result};
use serde::{Deserialize, Serialize};

/// Encoder architecture families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Arch {
    SlpeMux,
    SlpeGate,
    Recursive,
    Tree,
    MlpeComposed,
    MlpeCascaded,
}

impl Arch {
    pub const ALL: [Arch; 6] = [
        Arch::SlpeMux,
        Arch::SlpeGate,
        Arch::Recursive,
        Arch::Tree,
        Arch::MlpeComposed,
        Arch::MlpeCascaded,
    ];
}

/// How the valid flag is produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum ValidMethod {
    /// OR tree over the first-stage OR outputs (multi-level encoders) or
    /// over all inputs (single-level encoders).
    #[default]
    StageOr,
    /// Input bit 0 ORed with all output bits.
    LsbOr,
    /// No valid output.
    None,
}

/// Output index convention. `Native` keeps the tree encoder's flipped
/// indexing (`n-1-index`); `Standard` reports the plain MSHB index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Convention {
    #[default]
    Standard,
    Native,
}

/// A complete encoder request: architecture, width, and options.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EncoderSpec {
    pub arch: Arch,
    pub n: u64,
    /// Level count, multi-level encoders only (2..=5; 2 denotes the 2LPE).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m: Option<u32>,
    /// Recursion division factor, recursive encoder only (default 4).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<u64>,
    #[serde(default)]
    pub valid: ValidMethod,
    #[serde(default)]
    pub convention: Convention,
}

impl EncoderSpec {
    pub fn new(arch: Arch, n: u64) -> Self {
        EncoderSpec { arch, n, m: None, k: None, valid: ValidMethod::default(), convention: Convention::default() }
    }

    pub fn with_m(mut self, m: u32) -> Self {
        self.m = Some(m);
        self
    }

    pub fn effective_m(&self) -> u32 {
        self.m.unwrap_or(2)
    }

    pub fn effective_k(&self) -> u64 {
        self.k.unwrap_or(4)
    }

    /// Deterministic unit name, also used as the HDL entity/module name.
    pub fn unit_name(&self) -> String {
        match self.arch {
            Arch::SlpeMux => format!("pe_slpe_{}", self.n),
            Arch::SlpeGate => format!("pe_slpeg_{}", self.n),
            Arch::Recursive => format!("pe_rec_{}", self.n),
            Arch::Tree => format!("pe_tree_{}", self.n),
            Arch::MlpeComposed | Arch::MlpeCascaded if self.effective_m() == 2 => {
                format!("pe_2lpe_{}", self.n)
            }
            Arch::MlpeComposed => format!("pe_mlpeo_{}_m{}", self.n, self.effective_m()),
            Arch::MlpeCascaded => format!("pe_mlpea_{}_m{}", self.n, self.effective_m()),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 2 || !is_pow2(self.n) {
            return Err(Error::InvalidParam(format!(
                "input length must be a power of two >= 2, got {}",
                self.n
            )));
        }
        if matches!(self.arch, Arch::MlpeComposed | Arch::MlpeCascaded) {
            let m = self.effective_m();
            if !(2..=5).contains(&m) {
                return Err(Error::InvalidParam(format!(
                    "level count must be in 2..=5, got {m}"
                )));
            }
        }
        if self.arch == Arch::Recursive {
            let k = self.effective_k();
            if k < 2 || !is_pow2(k) || k >= self.n {
                return Err(Error::InvalidParam(format!(
                    "recursion factor must be a power of two in 2..n, got k={k} n={}",
                    self.n
                )));
            }
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// Level sizing

/// Two-level sizing: L1 = 2^ceil(log2 sqrt(n)), L2 = n / L1.
pub fn size_two_level(n: u64) -> Result<(u64, u64)> {
    if n < 16 || !is_pow2(n) {
        return Err(Error::Infeasible(format!(
            "two-level sizing needs a power of two >= 16, got {n} (sub-encoders would degenerate)"
        )));
    }
    let l1 = ilog2(n).div_ceil(2);
    Ok((1 << l1, n >> l1))
}

/// Cascaded sizing: level i takes the ceiling share of the remaining log2
/// width; the last level takes the remainder. All sizes must stay >= 2.
pub fn size_cascaded(n: u64, m: u32) -> Result<Vec<u64>> {
    if !is_pow2(n) || n < 2 {
        return Err(Error::InvalidParam(format!("n must be a power of two >= 2, got {n}")));
    }
    if m < 2 {
        return Err(Error::InvalidParam(format!("cascaded sizing needs m >= 2, got {m}")));
    }
    let mut remaining = ilog2(n);
    let mut sizes = Vec::with_capacity(m as usize);
    for i in 0..m - 1 {
        let share = remaining.div_ceil(m - i);
        if share == 0 {
            return Err(Error::Infeasible(format!(
                "cascaded sizing of n={n} into m={m} levels leaves an empty level"
            )));
        }
        sizes.push(1u64 << share);
        remaining -= share;
    }
    if remaining == 0 {
        return Err(Error::Infeasible(format!(
            "cascaded sizing of n={n} into m={m} levels leaves an empty level"
        )));
    }
    sizes.push(1u64 << remaining);
    Ok(sizes)
}

// ---------------------------------------------------------------------------
// Builders

/// Composed recursion: one encoder level (OR layer, coarse, wide mux, fine)
/// whose sub-encoders have `m - 1` levels; `m == 1` is a plain SLPE.
/// Returns (outputs, first-stage OR nets).
fn composed_frag(b: &mut Builder, ins: &[NetId], m: u32) -> Result<(Vec<NetId>, Vec<NetId>)> {
    if m == 1 {
        return Ok((slpe_mux_frag(b, ins), Vec::new()));
    }
    let n = ins.len() as u64;
    let (l1, l2) = size_two_level(n)?;
    let (l1, l2) = (l1 as usize, l2 as usize);
    let ors: Vec<NetId> = (0..l1)
        .map(|g| or_tree_frag(b, &ins[g * l2..(g + 1) * l2]))
        .collect();
    let (coarse, _) = composed_frag(b, &ors, m - 1)?;
    let mux = mux_wide_frag(b, ins, l2, &coarse);
    let (fine, _) = composed_frag(b, &mux, m - 1)?;
    let mut outs = fine;
    outs.extend_from_slice(&coarse);
    Ok((outs, ors))
}

/// Cascaded recursion: the first stage consumes the last level size L_m
/// (OR layer of n/L_m groups, wide mux, fine SLPE(L_m)); the remaining
/// m - 1 levels recurse over the group-OR signals.
fn cascaded_frag(b: &mut Builder, ins: &[NetId], m: u32) -> Result<(Vec<NetId>, Vec<NetId>)> {
    if m == 1 {
        return Ok((slpe_mux_frag(b, ins), Vec::new()));
    }
    let n = ins.len() as u64;
    let sizes = size_cascaded(n, m)?;
    if let Some(&bad) = sizes.iter().find(|&&l| l < 4) {
        return Err(Error::Infeasible(format!(
            "cascaded sizing of n={n} into m={m} levels yields a sub-encoder of {bad} inputs (< 4)"
        )));
    }
    let lm = *sizes.last().unwrap() as usize;
    let groups = n as usize / lm;
    let ors: Vec<NetId> = (0..groups)
        .map(|g| or_tree_frag(b, &ins[g * lm..(g + 1) * lm]))
        .collect();
    let (upper, _) = cascaded_frag(b, &ors, m - 1)?;
    let mux = mux_wide_frag(b, ins, lm, &upper);
    let mut outs = slpe_mux_frag(b, &mux);
    outs.extend_from_slice(&upper);
    Ok((outs, ors))
}

/// Two-level encoder: OR layer → coarse SLPE(L1) → n::L2 wide mux → fine
/// SLPE(L2); output is coarse (high bits) over fine (low bits).
pub fn build_2lpe(n: u64) -> Result<Netlist> {
    let mut b = Builder::new(format!("pe_2lpe_{n}"));
    let ins = b.inputs(usize::try_from(n).unwrap());
    let (outs, ors) = composed_frag(&mut b, &ins, 2)?;
    let mut nl = b.finish(outs, None);
    nl.stage_ors = ors;
    Ok(nl)
}

/// Composed multi-level encoder (m >= 3): a 2LPE skeleton whose coarse and
/// fine sub-encoders are composed encoders of m - 1 levels.
pub fn build_mlpe_composed(n: u64, m: u32) -> Result<Netlist> {
    if !(2..=5).contains(&m) {
        return Err(Error::InvalidParam(format!("level count must be in 2..=5, got {m}")));
    }
    if m == 2 {
        return build_2lpe(n);
    }
    let mut b = Builder::new(format!("pe_mlpeo_{n}_m{m}"));
    let ins = b.inputs(usize::try_from(n).unwrap());
    let (outs, ors) = composed_frag(&mut b, &ins, m)?;
    let mut nl = b.finish(outs, None);
    nl.stage_ors = ors;
    Ok(nl)
}

/// Cascaded multi-level encoder (m >= 3): m - 1 OR/mux stages, one SLPE per
/// level, most-significant level encoded by the top of the cascade.
pub fn build_mlpe_cascaded(n: u64, m: u32) -> Result<Netlist> {
    if !(2..=5).contains(&m) {
        return Err(Error::InvalidParam(format!("level count must be in 2..=5, got {m}")));
    }
    if m == 2 {
        return build_2lpe(n);
    }
    let mut b = Builder::new(format!("pe_mlpea_{n}_m{m}"));
    let ins = b.inputs(usize::try_from(n).unwrap());
    let (outs, ors) = cascaded_frag(&mut b, &ins, m)?;
    let mut nl = b.finish(outs, None);
    nl.stage_ors = ors;
    Ok(nl)
}

/// Recursive encoder body. Sub-valid OR trees and the layer valid are
/// tagged as valid logic; the k-input selector encoder is ordinary data
/// logic (its output forms the high output bits).
fn recursive_frag(b: &mut Builder, ins: &[NetId], k: usize) -> (Vec<NetId>, NetId) {
    let n = ins.len();
    if n <= k {
        let outs = slpe_mux_frag(b, ins);
        b.set_valid_scope(true);
        let v = or_tree_frag(b, ins);
        b.set_valid_scope(false);
        return (outs, v);
    }
    let sub_w = n / k;
    let mut sub_outs = Vec::with_capacity(k * (ilog2(sub_w as u64) as usize));
    let mut sub_valids = Vec::with_capacity(k);
    for c in 0..k {
        let (o, v) = recursive_frag(b, &ins[c * sub_w..(c + 1) * sub_w], k);
        sub_outs.extend(o);
        sub_valids.push(v);
    }
    let sel = slpe_mux_frag(b, &sub_valids);
    let w = ilog2(sub_w as u64) as usize;
    let mux = mux_wide_frag(b, &sub_outs, w, &sel);
    b.set_valid_scope(true);
    let v = or_tree_frag(b, &sub_valids);
    b.set_valid_scope(false);
    let mut outs = mux;
    outs.extend(sel);
    (outs, v)
}

/// Recursive encoder: k sub-encoders of n/k bits, a k-input selector SLPE
/// over their valid flags, and a wide mux over their outputs. The valid
/// output is intrinsic.
pub fn build_recursive(n: u64, k: u64) -> Result<Netlist> {
    if !is_pow2(n) || !is_pow2(k) || k < 2 || n <= k {
        return Err(Error::InvalidParam(format!(
            "recursive encoder needs powers of two with n > k, got n={n} k={k}"
        )));
    }
    let mut b = Builder::new(format!("pe_rec_{n}"));
    let ins = b.inputs(usize::try_from(n).unwrap());
    let (outs, v) = recursive_frag(&mut b, &ins, k as usize);
    Ok(b.finish(outs, Some(v)))
}

/// Tree node over ports in priority order (port 0 wins). Returns
/// (outputs, valid). Base: output = NOT(port 0), valid = OR2. Step: the
/// high-priority half's valid selects the low bits and, inverted, becomes
/// the new most significant bit.
fn tree_frag(b: &mut Builder, ports: &[NetId]) -> (Vec<NetId>, NetId) {
    if ports.len() == 2 {
        let o = b.cell(crate::cells::CellKind::Not, &[ports[0]]);
        let v = b.cell(crate::cells::CellKind::Or2, ports);
        return (vec![o], v);
    }
    let half = ports.len() / 2;
    let (oa, va) = tree_frag(b, &ports[..half]);
    let (ob, vb) = tree_frag(b, &ports[half..]);
    let msb = b.cell(crate::cells::CellKind::Not, &[va]);
    let mut outs: Vec<NetId> = oa
        .iter()
        .zip(&ob)
        .map(|(&a, &bb)| b.cell(crate::cells::CellKind::Mux2, &[bb, a, va]))
        .collect();
    outs.push(msb);
    let v = b.cell(crate::cells::CellKind::Or2, &[va, vb]);
    (outs, v)
}

/// Tree encoder in the native (flipped) convention: input bit n-1 maps to
/// port 0, so the raw output is `n-1-index`. Valid is intrinsic and counted
/// as ordinary logic. Standard-convention reporting is a pure relabeling:
/// set [`Netlist::output_complement`] (done by [`generate`]).
pub fn build_tree(n: u64) -> Result<Netlist> {
    if n < 2 || !is_pow2(n) {
        return Err(Error::InvalidParam(format!(
            "tree encoder needs a power of two >= 2, got {n}"
        )));
    }
    let mut b = Builder::new(format!("pe_tree_{n}"));
    let ins = b.inputs(usize::try_from(n).unwrap());
    let ports: Vec<NetId> = ins.iter().rev().copied().collect();
    let (outs, v) = tree_frag(&mut b, &ports);
    Ok(b.finish(outs, Some(v)))
}

// ---------------------------------------------------------------------------
// Valid attachment and dispatch

/// Attach a valid flag to a netlist that lacks one. All added cells are
/// tagged as valid logic. `StageOr` reuses the first-stage OR outputs when
/// present and otherwise reduces all inputs; `LsbOr` ORs input bit 0 with
/// every output bit.
pub fn attach_valid(nl: &Netlist, method: ValidMethod) -> Result<Netlist> {
    if nl.valid.is_some() {
        return Err(Error::InvalidParam(format!(
            "netlist '{}' already has a valid output",
            nl.name
        )));
    }
    if method == ValidMethod::None {
        return Err(Error::InvalidParam("no valid method selected".into()));
    }
    let (mut b, outs) = Builder::reopen(nl);
    b.set_valid_scope(true);
    let v = match method {
        ValidMethod::StageOr => {
            if nl.stage_ors.is_empty() {
                or_tree_frag(&mut b, &nl.inputs)
            } else {
                or_tree_frag(&mut b, &nl.stage_ors)
            }
        }
        ValidMethod::LsbOr => {
            let mut nets = vec![nl.inputs[0]];
            nets.extend_from_slice(&outs);
            or_any_frag(&mut b, &nets)
        }
        ValidMethod::None => unreachable!(),
    };
    b.set_valid_scope(false);
    let mut out = b.finish(outs, Some(v));
    out.output_complement = nl.output_complement;
    out.stage_ors = nl.stage_ors.clone();
    Ok(out)
}

/// Build the netlist described by a spec: dispatch to the architecture
/// builder, attach the requested valid flag, and apply the output
/// convention. Tree and recursive encoders produce their valid flag
/// intrinsically; requesting `NONE` simply unexposes it.
pub fn generate(spec: &EncoderSpec) -> Result<Netlist> {
    spec.validate()?;
    let mut nl = match spec.arch {
        Arch::SlpeMux => build_slpe_mux(spec.n)?,
        Arch::SlpeGate => build_slpe_gate(spec.n)?,
        Arch::Recursive => build_recursive(spec.n, spec.effective_k())?,
        Arch::Tree => build_tree(spec.n)?,
        Arch::MlpeComposed => build_mlpe_composed(spec.n, spec.effective_m())?,
        Arch::MlpeCascaded => build_mlpe_cascaded(spec.n, spec.effective_m())?,
    };
    if nl.valid.is_some() {
        if spec.valid == ValidMethod::None {
            nl.valid = None;
        }
    } else if spec.valid != ValidMethod::None {
        nl = attach_valid(&nl, spec.valid)?;
    }
    if spec.arch == Arch::Tree && spec.convention == Convention::Standard {
        nl.output_complement = true;
    }
    Ok(nl)
}
