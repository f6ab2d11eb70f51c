//! Builders for the primitive composite components: OR trees, mux trees,
//! and the two atomic single-level priority encoders (SLPEs).
//!
//! Every composite follows a fixed decomposition so that structural
//! transistor counts and critical paths line up with the analytical model:
//!
//! - OR trees reduce in OR8 units (four NOR2 feeding a NAND4, 24
//!   transistors) with an OR2/OR4A/OR8 root for the residue.
//! - Mux trees reduce in 4::1 units of three atomic MUX2 cells, with a
//!   single MUX2 at the root when a residual factor of two remains.
//! - The mux-based SLPE is a chain of constant-input muxes; the gate-based
//!   SLPE is a sum of priority-masked product terms (fan-in ≤ 4 gates only).
//!
//! The `*_frag` functions append a fragment to an open [`Builder`]; the
//! `build_*` functions wrap a single fragment as a standalone [`Netlist`].

use crate::cells::CellKind;
use crate::netlist::{Builder, NetId, Netlist};
use crate::{ilog2, is_pow2, Error, Result};

fn check_pow2(x: u64, min: u64, what: &str) -> Result<()> {
    if x < min || !is_pow2(x) {
        return Err(Error::InvalidParam(format!(
            "{what} must be a power of two >= {min}, got {x}"
        )));
    }
    Ok(())
}

/// OR8 unit: four NOR2 gates feeding a NAND4.
fn or8_unit(b: &mut Builder, ins: &[NetId]) -> NetId {
    debug_assert_eq!(ins.len(), 8);
    let lows: Vec<NetId> = ins
        .chunks(2)
        .map(|p| b.cell(CellKind::Nor2, p))
        .collect();
    b.cell(CellKind::Nand4, &lows)
}

/// Reduce a power-of-two set of nets to their OR. Base cases: 2 → OR2,
/// 4 → OR4A, 8 → OR8 unit; wider inputs get a leaf layer of OR8 units and
/// recurse on the unit outputs.
pub fn or_tree_frag(b: &mut Builder, nets: &[NetId]) -> NetId {
    match nets.len() {
        1 => nets[0],
        2 => b.cell(CellKind::Or2, nets),
        4 => b.cell(CellKind::Or4a, nets),
        8 => or8_unit(b, nets),
        _ => {
            let ups: Vec<NetId> = nets.chunks(8).map(|c| or8_unit(b, c)).collect();
            or_tree_frag(b, &ups)
        }
    }
}

/// Reduce an arbitrary-width set of nets to their OR with a balanced layer
/// of OR2 gates. Used only where widths are not powers of two (the LSB-OR
/// valid variant); cost fidelity to the OR-tree model is not required there.
pub fn or_any_frag(b: &mut Builder, nets: &[NetId]) -> NetId {
    let mut level = nets.to_vec();
    while level.len() > 1 {
        let mut next = Vec::with_capacity(level.len().div_ceil(2));
        for pair in level.chunks(2) {
            next.push(if pair.len() == 2 {
                b.cell(CellKind::Or2, pair)
            } else {
                pair[0]
            });
        }
        level = next;
    }
    level[0]
}

/// 4::1 mux unit from three atomic MUX2 cells. Select value `s1:s0` picks
/// `d[s1*2+s0]`.
fn mux4_unit(b: &mut Builder, d: &[NetId], s0: NetId, s1: NetId) -> NetId {
    debug_assert_eq!(d.len(), 4);
    let m0 = b.cell(CellKind::Mux2, &[d[0], d[1], s0]);
    let m1 = b.cell(CellKind::Mux2, &[d[2], d[3], s0]);
    b.cell(CellKind::Mux2, &[m0, m1, s1])
}

/// Single-bit mux tree over a power-of-two channel count. Low select bits
/// feed the leaf 4::1 units; a residual factor of two is one MUX2 at the
/// root. `sel.len()` must equal `log2(data.len())`.
pub fn mux_single_frag(b: &mut Builder, data: &[NetId], sel: &[NetId]) -> NetId {
    debug_assert_eq!(1usize << sel.len(), data.len());
    match data.len() {
        1 => data[0],
        2 => b.cell(CellKind::Mux2, &[data[0], data[1], sel[0]]),
        4 => mux4_unit(b, data, sel[0], sel[1]),
        _ => {
            let ups: Vec<NetId> = data
                .chunks(4)
                .map(|c| mux4_unit(b, c, sel[0], sel[1]))
                .collect();
            mux_single_frag(b, &ups, &sel[2..])
        }
    }
}

/// Wide mux: `y` parallel single-bit muxes sharing one select bus. Channel
/// `c` occupies input bits `[c*y, (c+1)*y)`, channel 0 least significant;
/// output bit `j` selects among bit `j` of every channel.
pub fn mux_wide_frag(b: &mut Builder, data: &[NetId], y: usize, sel: &[NetId]) -> Vec<NetId> {
    let channels = data.len() / y;
    debug_assert_eq!(1usize << sel.len(), channels);
    (0..y)
        .map(|j| {
            let lane: Vec<NetId> = (0..channels).map(|c| data[c * y + j]).collect();
            mux_single_frag(b, &lane, sel)
        })
        .collect()
}

/// Mux-based SLPE: a chain of constant-input mux stages. After stage `s`
/// the state encodes the highest set index among inputs `0..=s`; stage `s`
/// is `ceil(log2(s+1))` MUX2 cells selected by input `s`. Works for any
/// power-of-two width ≥ 2 (width 2 is the zero-cell pass-through used
/// inside recursive encoders).
pub fn slpe_mux_frag(b: &mut Builder, ins: &[NetId]) -> Vec<NetId> {
    let n = ins.len();
    let mut state = vec![ins[1]];
    for (s, &sel) in ins.iter().enumerate().take(n).skip(2) {
        let width = (usize::BITS - s.leading_zeros()) as usize; // ceil(log2(s+1))
        let mut next = Vec::with_capacity(width);
        for j in 0..width {
            let a = if j < state.len() { state[j] } else { b.constant(false) };
            let c = b.constant((s >> j) & 1 == 1);
            next.push(b.cell(CellKind::Mux2, &[a, c, sel]));
        }
        state = next;
    }
    state
}

/// Gate-based SLPE: output bit `j` is the OR over positions `p` with bit
/// `j` set of the term `in[p] AND (no higher input set)`. The masks are a
/// shared suffix chain of AND2 gates over inverted inputs.
pub fn slpe_gate_frag(b: &mut Builder, ins: &[NetId]) -> Vec<NetId> {
    let n = ins.len();
    let w = ilog2(n as u64) as usize;
    // suffix[q] = AND of NOT(in[t]) for t in q..n; built from q = n-1 down.
    let mut suffix = vec![0 as NetId; n];
    for q in (2..n).rev() {
        let inv = b.cell(CellKind::Not, &[ins[q]]);
        suffix[q] = if q == n - 1 {
            inv
        } else {
            b.cell(CellKind::And2, &[inv, suffix[q + 1]])
        };
    }
    // term[p] = in[p] masked by "nothing above p"; term 0 is never used.
    let mut term = vec![0 as NetId; n];
    for p in 1..n - 1 {
        term[p] = b.cell(CellKind::And2, &[ins[p], suffix[p + 1]]);
    }
    term[n - 1] = ins[n - 1];
    (0..w)
        .map(|j| {
            let group: Vec<NetId> =
                (1..n).filter(|p| (p >> j) & 1 == 1).map(|p| term[p]).collect();
            or_tree_frag(b, &group)
        })
        .collect()
}

/// Standalone OR tree: `width` inputs, one output.
pub fn build_or_tree(width: u64) -> Result<Netlist> {
    check_pow2(width, 2, "OR-tree width")?;
    let mut b = Builder::new(format!("or_tree_{width}"));
    let ins = b.inputs(width as usize);
    let out = or_tree_frag(&mut b, &ins);
    Ok(b.finish(vec![out], None))
}

/// Standalone single-bit mux: `channels` data inputs followed by
/// `log2(channels)` select inputs, one output.
pub fn build_mux_single(channels: u64) -> Result<Netlist> {
    check_pow2(channels, 2, "mux channel count")?;
    let mut b = Builder::new(format!("mux_single_{channels}"));
    let ins = b.inputs(channels as usize + ilog2(channels) as usize);
    let (data, sel) = ins.split_at(channels as usize);
    let out = mux_single_frag(&mut b, data, sel);
    Ok(b.finish(vec![out], None))
}

/// Standalone wide mux: `x` data inputs in `x/y` channels of `y` bits,
/// followed by `log2(x/y)` select inputs; `y` outputs.
pub fn build_mux_wide(x: u64, y: u64) -> Result<Netlist> {
    check_pow2(x, 2, "mux total width")?;
    check_pow2(y, 1, "mux channel width")?;
    if y >= x || !x.is_multiple_of(y) {
        return Err(Error::InvalidParam(format!(
            "wide mux needs y | x and x/y >= 2, got x={x} y={y}"
        )));
    }
    let channels = (x / y) as usize;
    let mut b = Builder::new(format!("mux_wide_{x}_{y}"));
    let ins = b.inputs(x as usize + ilog2(channels as u64) as usize);
    let (data, sel) = ins.split_at(x as usize);
    let outs = mux_wide_frag(&mut b, data, y as usize, sel);
    Ok(b.finish(outs, None))
}

/// Standalone mux-based SLPE: `n` inputs, `log2(n)` outputs, no valid flag.
pub fn build_slpe_mux(n: u64) -> Result<Netlist> {
    check_pow2(n, 4, "SLPE width")?;
    let mut b = Builder::new(format!("pe_slpe_{n}"));
    let ins = b.inputs(n as usize);
    let outs = slpe_mux_frag(&mut b, &ins);
    Ok(b.finish(outs, None))
}

/// Standalone gate-based SLPE (cross-validation variant, n ≤ 16).
pub fn build_slpe_gate(n: u64) -> Result<Netlist> {
    check_pow2(n, 4, "SLPE width")?;
    if n > 16 {
        return Err(Error::InvalidParam(format!(
            "gate-based SLPE is supported only for n <= 16, got {n}"
        )));
    }
    let mut b = Builder::new(format!("pe_slpeg_{n}"));
    let ins = b.inputs(n as usize);
    let outs = slpe_gate_frag(&mut b, &ins);
    Ok(b.finish(outs, None))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn or_tree_costs_match_reference() {
        for (w, cost) in [(2, 6), (4, 10), (8, 24), (16, 54), (32, 106), (64, 216), (128, 438)] {
            let nl = build_or_tree(w).unwrap();
            assert_eq!(nl.cost(true), cost, "or_tree({w})");
            nl.validate().unwrap();
        }
    }

    #[test]
    fn or8_unit_shape() {
        let nl = build_or_tree(8).unwrap();
        let kinds: Vec<_> = nl.cells.iter().map(|c| c.kind).collect();
        assert_eq!(
            kinds,
            vec![CellKind::Nor2, CellKind::Nor2, CellKind::Nor2, CellKind::Nor2, CellKind::Nand4]
        );
    }

    #[test]
    fn mux_single_costs_match_reference() {
        for (c, cost) in [(2, 8), (4, 24), (8, 56), (16, 120), (32, 248), (64, 504)] {
            let nl = build_mux_single(c).unwrap();
            assert_eq!(nl.cost(true), cost, "mux_single({c})");
        }
    }

    #[test]
    fn mux_wide_costs_match_reference() {
        assert_eq!(build_mux_wide(4, 2).unwrap().cost(true), 16);
        assert_eq!(build_mux_wide(64, 8).unwrap().cost(true), 448);
        // Fig.-5-sized instance: 32 lanes of a 64-channel single-bit mux.
        assert_eq!(build_mux_wide(2048, 32).unwrap().cost(true), 32 * 504);
    }

    #[test]
    fn slpe_mux_counts_match_reference() {
        for (n, muxes) in [(4u64, 4u64), (8, 16), (16, 48), (32, 128)] {
            let nl = build_slpe_mux(n).unwrap();
            assert_eq!(nl.cells.len() as u64, muxes, "M_SLPE-C({n})");
            assert_eq!(nl.cost(true), muxes * 8);
            assert!(nl.cells.iter().all(|c| c.kind == CellKind::Mux2));
        }
    }

    #[test]
    fn gate_slpe_uses_only_small_fanin() {
        let nl = build_slpe_gate(16).unwrap();
        assert!(nl.cells.iter().all(|c| c.ins.len() <= 4));
    }

    #[test]
    fn fragments_reject_bad_widths() {
        assert!(build_or_tree(3).is_err());
        assert!(build_or_tree(1).is_err());
        assert!(build_mux_single(6).is_err());
        assert!(build_mux_wide(64, 64).is_err());
        assert!(build_slpe_mux(2).is_err());
        assert!(build_slpe_gate(32).is_err());
    }
}
