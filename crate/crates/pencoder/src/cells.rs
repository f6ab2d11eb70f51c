//! Atomic cell library: the gate and mux primitives every netlist is built
//! from, with their transistor costs and worst-case series-transistor counts
//! (NMOS/PMOS) on the critical path.
//!
//! Delay is reported in "normalized transistors": one series NMOS counts as
//! 1, one series PMOS counts as `r` (the configurable PMOS:NMOS ratio,
//! 2 by default). The `MUX2` entry is the transmission-gate 2:1 mux treated
//! as an atomic 8-transistor cell.

use serde::{Deserialize, Serialize};

/// The ten cell kinds permitted in a netlist.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum CellKind {
    Not,
    Nand2,
    Nand3,
    Nand4,
    Nor2,
    Nor4,
    And2,
    Or2,
    Or4a,
    Mux2,
}

impl CellKind {
    pub const ALL: [CellKind; 10] = [
        CellKind::Not,
        CellKind::Nand2,
        CellKind::Nand3,
        CellKind::Nand4,
        CellKind::Nor2,
        CellKind::Nor4,
        CellKind::And2,
        CellKind::Or2,
        CellKind::Or4a,
        CellKind::Mux2,
    ];

    /// Number of input pins. `MUX2` takes `(a, b, sel)`.
    pub fn arity(self) -> usize {
        match self {
            CellKind::Not => 1,
            CellKind::Nand2 | CellKind::Nor2 | CellKind::And2 | CellKind::Or2 => 2,
            CellKind::Nand3 | CellKind::Mux2 => 3,
            CellKind::Nand4 | CellKind::Nor4 | CellKind::Or4a => 4,
        }
    }

    /// Transistor cost.
    pub fn cost(self) -> u64 {
        match self {
            CellKind::Not => 2,
            CellKind::Nand2 | CellKind::Nor2 => 4,
            CellKind::Nand3 | CellKind::And2 | CellKind::Or2 => 6,
            CellKind::Nand4 | CellKind::Nor4 | CellKind::Mux2 => 8,
            CellKind::Or4a => 10,
        }
    }

    /// Worst-case series (NMOS, PMOS) transistor counts on the critical path.
    pub fn crit(self) -> (u32, u32) {
        match self {
            CellKind::Not => (0, 1),
            CellKind::Nand2 => (0, 1),
            CellKind::Nand3 => (3, 0),
            CellKind::Nand4 => (4, 0),
            CellKind::Nor2 => (0, 2),
            CellKind::Nor4 => (0, 4),
            CellKind::And2 => (0, 2),
            CellKind::Or2 => (0, 3),
            CellKind::Or4a => (0, 5),
            CellKind::Mux2 => (0, 2),
        }
    }

    /// Normalized delay at PMOS:NMOS ratio `r`.
    pub fn delay(self, r: f64) -> f64 {
        let (n, p) = self.crit();
        n as f64 + r * p as f64
    }

    /// Boolean semantics. `MUX2`: `sel = 0` selects `ins[0]` (A),
    /// `sel = 1` selects `ins[1]` (B).
    pub fn eval(self, ins: &[bool]) -> bool {
        match self {
            CellKind::Not => !ins[0],
            CellKind::Nand2 | CellKind::Nand3 | CellKind::Nand4 => !ins.iter().all(|&b| b),
            CellKind::Nor2 | CellKind::Nor4 => !ins.iter().any(|&b| b),
            CellKind::And2 => ins[0] && ins[1],
            CellKind::Or2 | CellKind::Or4a => ins.iter().any(|&b| b),
            CellKind::Mux2 => {
                if ins[2] {
                    ins[1]
                } else {
                    ins[0]
                }
            }
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            CellKind::Not => "NOT",
            CellKind::Nand2 => "NAND2",
            CellKind::Nand3 => "NAND3",
            CellKind::Nand4 => "NAND4",
            CellKind::Nor2 => "NOR2",
            CellKind::Nor4 => "NOR4",
            CellKind::And2 => "AND2",
            CellKind::Or2 => "OR2",
            CellKind::Or4a => "OR4A",
            CellKind::Mux2 => "MUX2",
        }
    }
}
