//! Gate-level netlist IR.
//!
//! A netlist is a DAG of typed cells over single-bit nets. Net ids are
//! assigned densely in creation order: primary inputs first, then constants
//! and cell outputs interleaved as they are created, so the cell list is
//! always in topological order. Netlists are immutable once built.

use crate::cells::CellKind;
use crate::{Error, Result};
use serde::{Deserialize, Serialize};

pub type NetId = u32;

/// Tag applied to cells that only exist to produce the valid flag; such
/// cells are excluded from cost and delay reporting by default.
pub const TAG_VALID_LOGIC: &str = "valid-logic";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cell {
    pub kind: CellKind,
    pub ins: Vec<NetId>,
    pub out: NetId,
    /// True for valid-flag-only cells (see [`TAG_VALID_LOGIC`]).
    pub valid_logic: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Netlist {
    pub name: String,
    /// Primary inputs, index 0 = LSB.
    pub inputs: Vec<NetId>,
    /// Primary outputs, index 0 = LSB.
    pub outputs: Vec<NetId>,
    /// Valid flag net, if the encoder exposes one.
    pub valid: Option<NetId>,
    pub cells: Vec<Cell>,
    /// Constant-driven nets (value 0 or 1). Mux-chain encoders wire constant
    /// index bits into mux data pins; everything else leaves this empty.
    pub consts: Vec<(NetId, bool)>,
    /// When set, the reported output is the bitwise complement of the raw
    /// output nets. Used by the tree encoder's standard-convention wrapper:
    /// the native structure indexes ports from the other end, and
    /// `n-1-value` is exactly the complement for power-of-two widths. This
    /// is a relabeling at the boundary, not extra logic.
    pub output_complement: bool,
    /// First-stage OR-layer outputs for multi-level encoders; lets valid
    /// attachment reuse the existing OR results instead of re-reducing all
    /// inputs. Empty for single-stage architectures.
    pub stage_ors: Vec<NetId>,
}

impl Netlist {
    pub fn num_nets(&self) -> usize {
        self.inputs.len() + self.consts.len() + self.cells.len()
    }

    /// Total transistor cost, excluding valid-flag logic unless asked for.
    /// Per-kind cost overrides (if any) are supplied by the caller.
    pub fn cost_with(&self, include_valid: bool, cell_cost: impl Fn(CellKind) -> u64) -> u64 {
        self.cells
            .iter()
            .filter(|c| include_valid || !c.valid_logic)
            .map(|c| cell_cost(c.kind))
            .sum()
    }

    pub fn cost(&self, include_valid: bool) -> u64 {
        self.cost_with(include_valid, CellKind::cost)
    }

    /// Structural sanity: dense ids, unique drivers, correct arities, cell
    /// list in topological order, and all declared ports driven.
    pub fn validate(&self) -> Result<()> {
        let n = self.num_nets() as u32;
        let mut driven = vec![false; n as usize];
        fn mark(driven: &mut [bool], id: NetId, what: &str) -> Result<()> {
            if id as usize >= driven.len() {
                return Err(Error::Netlist(format!("{what} net {id} out of range")));
            }
            if driven[id as usize] {
                return Err(Error::Netlist(format!("net {id} has multiple drivers")));
            }
            driven[id as usize] = true;
            Ok(())
        }
        for &i in &self.inputs {
            mark(&mut driven, i, "input")?;
        }
        for &(c, _) in &self.consts {
            mark(&mut driven, c, "const")?;
        }
        for (idx, cell) in self.cells.iter().enumerate() {
            if cell.ins.len() != cell.kind.arity() {
                return Err(Error::Netlist(format!(
                    "cell {idx} ({}) has {} inputs, arity is {}",
                    cell.kind.name(),
                    cell.ins.len(),
                    cell.kind.arity()
                )));
            }
            for &i in &cell.ins {
                if i >= n {
                    return Err(Error::Netlist(format!("cell {idx} input net {i} out of range")));
                }
                if !driven[i as usize] {
                    return Err(Error::Netlist(format!(
                        "cell {idx} input net {i} not driven yet (cells must be topologically ordered)"
                    )));
                }
            }
            mark(&mut driven, cell.out, "cell output")?;
        }
        for &o in self.outputs.iter().chain(self.valid.iter()) {
            if o >= n || !driven[o as usize] {
                return Err(Error::Netlist(format!("port net {o} is not driven")));
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&NetlistDoc::from(self)).expect("netlist serialization")
    }

    pub fn from_json(s: &str) -> Result<Netlist> {
        let doc: NetlistDoc = serde_json::from_str(s)?;
        let nl = doc.into_netlist();
        nl.validate()?;
        Ok(nl)
    }
}

/// Serialized form: `{name, inputs, outputs, valid, cells:[{kind, ins, out,
/// tags}]}` plus the optional `consts`, `output_complement`, and `stage_ors`
/// extensions (omitted when empty/false).
#[derive(Serialize, Deserialize)]
struct NetlistDoc {
    name: String,
    inputs: Vec<NetId>,
    outputs: Vec<NetId>,
    valid: Option<NetId>,
    cells: Vec<CellDoc>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    consts: Vec<ConstDoc>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    output_complement: bool,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    stage_ors: Vec<NetId>,
}

#[derive(Serialize, Deserialize)]
struct CellDoc {
    kind: CellKind,
    ins: Vec<NetId>,
    out: NetId,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    tags: Vec<String>,
}

#[derive(Serialize, Deserialize)]
struct ConstDoc {
    net: NetId,
    value: u8,
}

impl From<&Netlist> for NetlistDoc {
    fn from(nl: &Netlist) -> Self {
        NetlistDoc {
            name: nl.name.clone(),
            inputs: nl.inputs.clone(),
            outputs: nl.outputs.clone(),
            valid: nl.valid,
            cells: nl
                .cells
                .iter()
                .map(|c| CellDoc {
                    kind: c.kind,
                    ins: c.ins.clone(),
                    out: c.out,
                    tags: if c.valid_logic {
                        vec![TAG_VALID_LOGIC.to_string()]
                    } else {
                        vec![]
                    },
                })
                .collect(),
            consts: nl
                .consts
                .iter()
                .map(|&(net, v)| ConstDoc { net, value: v as u8 })
                .collect(),
            output_complement: nl.output_complement,
            stage_ors: nl.stage_ors.clone(),
        }
    }
}

impl NetlistDoc {
    fn into_netlist(self) -> Netlist {
        Netlist {
            name: self.name,
            inputs: self.inputs,
            outputs: self.outputs,
            valid: self.valid,
            cells: self
                .cells
                .into_iter()
                .map(|c| Cell {
                    kind: c.kind,
                    ins: c.ins,
                    out: c.out,
                    valid_logic: c.tags.iter().any(|t| t == TAG_VALID_LOGIC),
                })
                .collect(),
            consts: self.consts.into_iter().map(|c| (c.net, c.value != 0)).collect(),
            output_complement: self.output_complement,
            stage_ors: self.stage_ors,
        }
    }
}

/// Incremental netlist construction. Allocate all primary inputs first, then
/// add cells; ids come out dense and topologically ordered.
pub struct Builder {
    name: String,
    next: NetId,
    inputs: Vec<NetId>,
    cells: Vec<Cell>,
    consts: Vec<(NetId, bool)>,
    const_nets: [Option<NetId>; 2],
    valid_scope: bool,
}

impl Builder {
    pub fn new(name: impl Into<String>) -> Self {
        Builder {
            name: name.into(),
            next: 0,
            inputs: Vec::new(),
            cells: Vec::new(),
            consts: Vec::new(),
            const_nets: [None, None],
            valid_scope: false,
        }
    }

    fn alloc(&mut self) -> NetId {
        let id = self.next;
        self.next += 1;
        id
    }

    /// Allocate `n` primary inputs. Must be called before any cell is added.
    pub fn inputs(&mut self, n: usize) -> Vec<NetId> {
        assert!(
            self.cells.is_empty() && self.consts.is_empty(),
            "inputs must be allocated before cells"
        );
        (0..n).map(|_| { let id = self.alloc(); self.inputs.push(id); id }).collect()
    }

    /// Net holding a constant 0 or 1 (allocated once, then shared).
    pub fn constant(&mut self, value: bool) -> NetId {
        if let Some(id) = self.const_nets[value as usize] {
            return id;
        }
        let id = self.alloc();
        self.consts.push((id, value));
        self.const_nets[value as usize] = Some(id);
        id
    }

    /// Add a cell and return its output net.
    pub fn cell(&mut self, kind: CellKind, ins: &[NetId]) -> NetId {
        assert_eq!(ins.len(), kind.arity(), "{} arity", kind.name());
        let out = self.alloc();
        self.cells.push(Cell {
            kind,
            ins: ins.to_vec(),
            out,
            valid_logic: self.valid_scope,
        });
        out
    }

    /// Cells added while the returned guard value is `true` are tagged as
    /// valid-flag logic. Scoped manually: call with `true`, add cells, call
    /// with `false`.
    pub fn set_valid_scope(&mut self, on: bool) {
        self.valid_scope = on;
    }

    /// Reopen a finished netlist for appending (used by valid-flag
    /// attachment). Returns the builder plus the original output list; the
    /// caller re-finishes and restores any metadata fields.
    pub fn reopen(nl: &Netlist) -> (Builder, Vec<NetId>) {
        let mut const_nets = [None, None];
        for &(id, v) in &nl.consts {
            const_nets[v as usize] = Some(id);
        }
        let b = Builder {
            name: nl.name.clone(),
            next: nl.num_nets() as NetId,
            inputs: nl.inputs.clone(),
            cells: nl.cells.clone(),
            consts: nl.consts.clone(),
            const_nets,
            valid_scope: false,
        };
        (b, nl.outputs.clone())
    }

    pub fn finish(self, outputs: Vec<NetId>, valid: Option<NetId>) -> Netlist {
        let nl = Netlist {
            name: self.name,
            inputs: self.inputs,
            outputs,
            valid,
            cells: self.cells,
            consts: self.consts,
            output_complement: false,
            stage_ors: Vec::new(),
        };
        debug_assert!(nl.validate().is_ok(), "builder produced invalid netlist");
        nl
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tiny() -> Netlist {
        let mut b = Builder::new("t");
        let ins = b.inputs(2);
        let o = b.cell(CellKind::Or2, &ins);
        let no = b.cell(CellKind::Not, &[o]);
        b.finish(vec![no], Some(o))
    }

    #[test]
    fn ids_are_dense_and_topological() {
        let nl = tiny();
        assert_eq!(nl.num_nets(), 4);
        assert!(nl.validate().is_ok());
    }

    #[test]
    fn duplicate_driver_rejected() {
        let mut nl = tiny();
        nl.cells[1].out = nl.cells[0].out;
        assert!(nl.validate().is_err());
    }

    #[test]
    fn forward_reference_rejected() {
        let mut nl = tiny();
        nl.cells.swap(0, 1);
        assert!(nl.validate().is_err());
    }

    #[test]
    fn json_round_trip() {
        let nl = tiny();
        let s = nl.to_json();
        let back = Netlist::from_json(&s).unwrap();
        assert_eq!(nl, back);
        // No extension fields for a plain netlist.
        assert!(!s.contains("consts"));
        assert!(!s.contains("output_complement"));
    }

    #[test]
    fn cost_excludes_tagged_cells() {
        let mut b = Builder::new("t");
        let ins = b.inputs(2);
        let a = b.cell(CellKind::And2, &ins); // 6
        b.set_valid_scope(true);
        let v = b.cell(CellKind::Or2, &ins); // 6, tagged
        b.set_valid_scope(false);
        let nl = b.finish(vec![a], Some(v));
        assert_eq!(nl.cost(false), 6);
        assert_eq!(nl.cost(true), 12);
    }
}
