//! Functional simulation and static longest-path analysis of netlists.
//!
//! `evaluate` runs exact boolean semantics over the cell list (which is
//! stored in topological order). `verify` sweeps a netlist against the
//! software oracle (`floor(log2 x)` plus the validity bit) under one of
//! four input strategies. `longest_path` computes the weighted critical
//! path by dynamic programming over the DAG, excluding valid-flag logic
//! unless asked otherwise.

use crate::arch::{generate, Arch, Convention, EncoderSpec};
use crate::cells::CellKind;
use crate::model::TechParams;
use crate::netlist::Netlist;
use crate::{Error, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// Evaluate a netlist on one input word (bit i of the word = `input_bits[i]`).
/// Returns the output word, LSB first, and the valid bit when the netlist
/// exposes one. The output-complement convention flag is applied here.
pub fn evaluate(nl: &Netlist, input_bits: &[bool]) -> Result<(Vec<bool>, Option<bool>)> {
    if input_bits.len() != nl.inputs.len() {
        return Err(Error::InvalidParam(format!(
            "expected {} input bits, got {}",
            nl.inputs.len(),
            input_bits.len()
        )));
    }
    let mut vals = vec![false; nl.num_nets()];
    for (i, &net) in nl.inputs.iter().enumerate() {
        vals[net as usize] = input_bits[i];
    }
    for &(net, v) in &nl.consts {
        vals[net as usize] = v;
    }
    let mut ins = [false; 4];
    for cell in &nl.cells {
        for (j, &src) in cell.ins.iter().enumerate() {
            ins[j] = vals[src as usize];
        }
        vals[cell.out as usize] = cell.kind.eval(&ins[..cell.ins.len()]);
    }
    let outs = nl
        .outputs
        .iter()
        .map(|&o| vals[o as usize] ^ nl.output_complement)
        .collect();
    Ok((outs, nl.valid.map(|v| vals[v as usize])))
}

/// Index of the most significant high bit, or `None` for the zero word.
pub fn mshb(bits: &[bool]) -> Option<u64> {
    bits.iter().rposition(|&b| b).map(|i| i as u64)
}

/// Oracle for a spec: expected output index (None when the input is zero)
/// and expected valid bit. The tree encoder's native convention reports
/// the flipped index `n-1-mshb`; every other case is the plain MSHB.
pub fn expected(spec: &EncoderSpec, bits: &[bool]) -> (Option<u64>, bool) {
    match mshb(bits) {
        None => (None, false),
        Some(i) => {
            let idx = if spec.arch == Arch::Tree && spec.convention == Convention::Native {
                spec.n - 1 - i
            } else {
                i
            };
            (Some(idx), true)
        }
    }
}

/// Input-vector selection strategy.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Strategy {
    /// All 2^n words; limited to n <= 16.
    Exhaustive,
    /// One vector per input bit.
    OneHot,
    /// Vectors with bits 0..=i set, one per i.
    PrefixOnes,
    /// Seed-deterministic nonzero words.
    Random { seed: u64, count: u64 },
}

fn vectors(strategy: &Strategy, n: u64) -> Result<Vec<Vec<bool>>> {
    let nu = usize::try_from(n).unwrap();
    match strategy {
        Strategy::Exhaustive => {
            if n > 16 {
                return Err(Error::InvalidParam(format!(
                    "exhaustive verification is limited to n <= 16, got n={n}"
                )));
            }
            Ok((0u64..1 << n)
                .map(|x| (0..nu).map(|b| x >> b & 1 == 1).collect())
                .collect())
        }
        Strategy::OneHot => Ok((0..nu).map(|i| (0..nu).map(|b| b == i).collect()).collect()),
        Strategy::PrefixOnes => Ok((0..nu).map(|i| (0..nu).map(|b| b <= i).collect()).collect()),
        Strategy::Random { seed, count } => {
            let mut rng = ChaCha8Rng::seed_from_u64(*seed);
            let mut vecs = Vec::with_capacity(*count as usize);
            while vecs.len() < *count as usize {
                let bits: Vec<bool> = (0..nu).map(|_| rng.gen()).collect();
                if bits.iter().any(|&b| b) {
                    vecs.push(bits);
                }
            }
            Ok(vecs)
        }
    }
}

/// MSB-first hex rendering of an input word.
pub fn input_hex(bits: &[bool]) -> String {
    let digits = bits.len().div_ceil(4);
    let mut s = String::with_capacity(digits);
    for d in (0..digits).rev() {
        let mut v = 0u32;
        for b in 0..4 {
            let idx = d * 4 + b;
            if idx < bits.len() && bits[idx] {
                v |= 1 << b;
            }
        }
        s.push(char::from_digit(v, 16).unwrap());
    }
    s
}

/// One disagreement between the netlist and the oracle.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Mismatch {
    pub input_hex: String,
    pub expected: String,
    pub got: String,
}

/// Result of a verification sweep.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VerificationReport {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub spec: Option<EncoderSpec>,
    pub strategy: Strategy,
    pub tested: u64,
    pub mismatches: Vec<Mismatch>,
}

impl VerificationReport {
    pub fn ok(&self) -> bool {
        self.mismatches.is_empty()
    }
}

fn fmt_pair(idx: Option<u64>, valid: Option<bool>) -> String {
    let y = idx.map_or_else(|| "-".into(), |i| i.to_string());
    let v = valid.map_or_else(|| "-".into(), |b| if b { "1".into() } else { "0".to_string() });
    format!("y={y} v={v}")
}

/// Sweep a netlist against an arbitrary oracle. The oracle returns the
/// expected output index (`None` = don't care, zero input) and expected
/// valid bit; output bits are not checked when the index is `None`, and
/// the valid bit is only checked when the netlist exposes one.
pub fn verify_with_oracle<F>(
    nl: &Netlist,
    strategy: &Strategy,
    oracle: F,
) -> Result<VerificationReport>
where
    F: Fn(&[bool]) -> (Option<u64>, bool),
{
    let n = nl.inputs.len() as u64;
    let mut mismatches = Vec::new();
    let vecs = vectors(strategy, n)?;
    for bits in &vecs {
        let (out_bits, got_valid) = evaluate(nl, bits)?;
        let got_idx = out_bits
            .iter()
            .enumerate()
            .fold(0u64, |acc, (i, &b)| acc | (u64::from(b) << i));
        let (exp_idx, exp_valid) = oracle(bits);
        let idx_bad = exp_idx.is_some_and(|e| e != got_idx);
        let valid_bad = got_valid.is_some_and(|g| g != exp_valid);
        if idx_bad || valid_bad {
            mismatches.push(Mismatch {
                input_hex: input_hex(bits),
                expected: fmt_pair(exp_idx, Some(exp_valid)),
                got: fmt_pair(Some(got_idx), got_valid),
            });
        }
    }
    Ok(VerificationReport {
        spec: None,
        strategy: strategy.clone(),
        tested: vecs.len() as u64,
        mismatches,
    })
}

/// Generate the encoder described by `spec` and sweep it against the
/// MSHB oracle.
pub fn verify(spec: &EncoderSpec, strategy: &Strategy) -> Result<VerificationReport> {
    let nl = generate(spec)?;
    let mut report = verify_with_oracle(&nl, strategy, |bits| expected(spec, bits))?;
    report.spec = Some(spec.clone());
    Ok(report)
}

/// One cell on the critical path.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PathStep {
    /// Index into the netlist cell list.
    pub cell: usize,
    pub kind: CellKind,
    pub nmos: u32,
    pub pmos: u32,
    pub normalized: f64,
}

/// Critical-path report: `total` is the sum of `normalized` over `path`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DelayReport {
    pub total: f64,
    pub path: Vec<PathStep>,
}

/// Weighted longest path from any source to a primary output, by DAG
/// dynamic programming. Valid-logic cells are excluded unless
/// `include_valid` is set: excluded cells contribute no delay and the
/// nets they drive restart at time zero. With `include_valid`, the valid
/// output also becomes a path endpoint.
pub fn longest_path(nl: &Netlist, tech: &TechParams, include_valid: bool) -> DelayReport {
    let mut arrival = vec![0.0f64; nl.num_nets()];
    let mut driver: Vec<Option<usize>> = vec![None; nl.num_nets()];
    for (ci, cell) in nl.cells.iter().enumerate() {
        if cell.valid_logic && !include_valid {
            continue;
        }
        let at = cell
            .ins
            .iter()
            .map(|&i| arrival[i as usize])
            .fold(0.0f64, f64::max)
            + cell.kind.delay(tech.r);
        arrival[cell.out as usize] = at;
        driver[cell.out as usize] = Some(ci);
    }
    let mut endpoints: Vec<u32> = nl.outputs.clone();
    if include_valid {
        endpoints.extend(nl.valid);
    }
    let mut end = endpoints.first().copied().unwrap_or(0);
    for &e in &endpoints {
        if arrival[e as usize] > arrival[end as usize] {
            end = e;
        }
    }
    let total = arrival[end as usize];
    let mut rev = Vec::new();
    let mut net = end;
    while let Some(ci) = driver[net as usize] {
        let cell = &nl.cells[ci];
        let (nmos, pmos) = cell.kind.crit();
        rev.push(PathStep {
            cell: ci,
            kind: cell.kind,
            nmos,
            pmos,
            normalized: cell.kind.delay(tech.r),
        });
        net = cell.ins.iter().copied().fold(cell.ins[0], |best, i| {
            if arrival[i as usize] > arrival[best as usize] {
                i
            } else {
                best
            }
        });
    }
    rev.reverse();
    DelayReport { total, path: rev }
}
