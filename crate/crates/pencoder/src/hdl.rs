//! Deterministic structural HDL emission (VHDL and Verilog) from netlists.
//!
//! Emission is a pure function of the netlist: one declared signal per
//! internal net (named `n<id>` from the serialization order), one structural
//! assignment per cell in netlist order, and boolean operators only.  2:1
//! muxes become conditional assignments.  The same netlist always produces
//! identical bytes, so emitted units are safe to check in as golden files.

use serde::{Deserialize, Serialize};

use crate::netlist::{Cell, NetId, Netlist};
use crate::cells::CellKind;
use crate::{Error, Result};

/// Target HDL dialect.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Dialect {
    Vhdl,
    Verilog,
}

impl Dialect {
    /// Conventional file extension for the dialect.
    pub fn extension(&self) -> &'static str {
        match self {
            Dialect::Vhdl => "vhd",
            Dialect::Verilog => "v",
        }
    }
}

impl std::str::FromStr for Dialect {
    type Err = Error;
    fn from_str(s: &str) -> Result<Dialect> {
        match s.to_ascii_lowercase().as_str() {
            "vhdl" | "vhd" => Ok(Dialect::Vhdl),
            "verilog" | "v" => Ok(Dialect::Verilog),
            other => Err(Error::InvalidParam(format!(
                "unknown HDL dialect '{other}' (expected vhdl or verilog)"
            ))),
        }
    }
}

/// File name (unit name plus dialect extension) for an emitted netlist.
pub fn file_name(nl: &Netlist, dialect: Dialect) -> String {
    format!("{}.{}", nl.name, dialect.extension())
}

/// Emit a netlist as structural HDL text.
pub fn emit(nl: &Netlist, dialect: Dialect) -> Result<String> {
    nl.validate()?;
    match dialect {
        Dialect::Vhdl => Ok(emit_vhdl(nl)),
        Dialect::Verilog => Ok(emit_verilog(nl)),
    }
}

/// Resolve a net reference to dialect text: input bits map to the input
/// port, everything else to its declared signal.
fn net_ref(nl: &Netlist, dialect: Dialect, net: NetId) -> String {
    if let Some(bit) = nl.inputs.iter().position(|&i| i == net) {
        return match dialect {
            Dialect::Vhdl => format!("x({bit})"),
            Dialect::Verilog => format!("x[{bit}]"),
        };
    }
    format!("n{net}")
}

/// Internal nets that need a declaration, ascending by id.
fn internal_nets(nl: &Netlist) -> Vec<NetId> {
    (0..nl.num_nets() as NetId)
        .filter(|id| !nl.inputs.contains(id))
        .collect()
}

fn cell_expr(nl: &Netlist, dialect: Dialect, cell: &Cell) -> String {
    let arg = |i: usize| net_ref(nl, dialect, cell.ins[i]);
    let join = |sep: &str| -> String {
        cell.ins
            .iter()
            .map(|&n| net_ref(nl, dialect, n))
            .collect::<Vec<_>>()
            .join(sep)
    };
    match dialect {
        Dialect::Vhdl => match cell.kind {
            CellKind::Not => format!("not {}", arg(0)),
            CellKind::And2 => join(" and "),
            CellKind::Or2 | CellKind::Or4a => join(" or "),
            CellKind::Nand2 | CellKind::Nand3 | CellKind::Nand4 => {
                format!("not ({})", join(" and "))
            }
            CellKind::Nor2 | CellKind::Nor4 => format!("not ({})", join(" or ")),
            CellKind::Mux2 => format!("{} when {} = '1' else {}", arg(1), arg(2), arg(0)),
        },
        Dialect::Verilog => match cell.kind {
            CellKind::Not => format!("~{}", arg(0)),
            CellKind::And2 => join(" & "),
            CellKind::Or2 | CellKind::Or4a => join(" | "),
            CellKind::Nand2 | CellKind::Nand3 | CellKind::Nand4 => {
                format!("~({})", join(" & "))
            }
            CellKind::Nor2 | CellKind::Nor4 => format!("~({})", join(" | ")),
            CellKind::Mux2 => format!("{} ? {} : {}", arg(2), arg(1), arg(0)),
        },
    }
}

fn emit_vhdl(nl: &Netlist) -> String {
    let mut s = String::new();
    let n = nl.inputs.len();
    let w = nl.outputs.len();
    s.push_str("library ieee;\n");
    s.push_str("use ieee.std_logic_1164.all;\n\n");
    s.push_str(&format!("entity {} is\n", nl.name));
    s.push_str("  port (\n");
    s.push_str(&format!(
        "    x : in  std_logic_vector({} downto 0);\n",
        n - 1
    ));
    if nl.valid.is_some() {
        s.push_str(&format!(
            "    y : out std_logic_vector({} downto 0);\n",
            w - 1
        ));
        s.push_str("    v : out std_logic\n");
    } else {
        s.push_str(&format!(
            "    y : out std_logic_vector({} downto 0)\n",
            w - 1
        ));
    }
    s.push_str("  );\n");
    s.push_str(&format!("end entity {};\n\n", nl.name));
    s.push_str(&format!("architecture structural of {} is\n", nl.name));
    for id in internal_nets(nl) {
        s.push_str(&format!("  signal n{id} : std_logic;\n"));
    }
    s.push_str("begin\n");
    if !nl.consts.is_empty() {
        s.push_str("  -- constants\n");
        for &(net, value) in &nl.consts {
            let bit = if value { '1' } else { '0' };
            s.push_str(&format!("  n{net} <= '{bit}';\n"));
        }
    }
    s.push_str("  -- cells\n");
    for cell in &nl.cells {
        s.push_str(&format!(
            "  n{} <= {};\n",
            cell.out,
            cell_expr(nl, Dialect::Vhdl, cell)
        ));
    }
    s.push_str("  -- outputs\n");
    for (bit, &net) in nl.outputs.iter().enumerate() {
        let r = net_ref(nl, Dialect::Vhdl, net);
        if nl.output_complement {
            s.push_str(&format!("  y({bit}) <= not {r};\n"));
        } else {
            s.push_str(&format!("  y({bit}) <= {r};\n"));
        }
    }
    if let Some(valid) = nl.valid {
        s.push_str(&format!(
            "  v <= {};\n",
            net_ref(nl, Dialect::Vhdl, valid)
        ));
    }
    s.push_str("end architecture structural;\n");
    s
}

fn emit_verilog(nl: &Netlist) -> String {
    let mut s = String::new();
    let n = nl.inputs.len();
    let w = nl.outputs.len();
    s.push_str(&format!("module {} (\n", nl.name));
    s.push_str(&format!("  input  wire [{}:0] x,\n", n - 1));
    if nl.valid.is_some() {
        s.push_str(&format!("  output wire [{}:0] y,\n", w - 1));
        s.push_str("  output wire v\n");
    } else {
        s.push_str(&format!("  output wire [{}:0] y\n", w - 1));
    }
    s.push_str(");\n\n");
    for id in internal_nets(nl) {
        s.push_str(&format!("  wire n{id};\n"));
    }
    s.push('\n');
    if !nl.consts.is_empty() {
        s.push_str("  // constants\n");
        for &(net, value) in &nl.consts {
            let bit = if value { '1' } else { '0' };
            s.push_str(&format!("  assign n{net} = 1'b{bit};\n"));
        }
    }
    s.push_str("  // cells\n");
    for cell in &nl.cells {
        s.push_str(&format!(
            "  assign n{} = {};\n",
            cell.out,
            cell_expr(nl, Dialect::Verilog, cell)
        ));
    }
    s.push_str("  // outputs\n");
    for (bit, &net) in nl.outputs.iter().enumerate() {
        let r = net_ref(nl, Dialect::Verilog, net);
        if nl.output_complement {
            s.push_str(&format!("  assign y[{bit}] = ~{r};\n"));
        } else {
            s.push_str(&format!("  assign y[{bit}] = {r};\n"));
        }
    }
    if let Some(valid) = nl.valid {
        s.push_str(&format!(
            "  assign v = {};\n",
            net_ref(nl, Dialect::Verilog, valid)
        ));
    }
    s.push_str("\nendmodule\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arch::{generate, Arch, Convention, EncoderSpec, ValidMethod};

    fn cells_section_assignments(text: &str, dialect: Dialect) -> usize {
        let (start, end) = match dialect {
            Dialect::Vhdl => ("  -- cells", "  -- outputs"),
            Dialect::Verilog => ("  // cells", "  // outputs"),
        };
        let mut counting = false;
        let mut count = 0;
        for line in text.lines() {
            if line == start {
                counting = true;
                continue;
            }
            if line == end {
                break;
            }
            if counting {
                count += 1;
            }
        }
        count
    }

    #[test]
    fn tree2_emits_one_not_and_one_or() {
        let spec = EncoderSpec::new(Arch::Tree, 2);
        let nl = generate(&spec).unwrap();
        let vhdl = emit(&nl, Dialect::Vhdl).unwrap();
        assert_eq!(cells_section_assignments(&vhdl, Dialect::Vhdl), 2);
        assert!(vhdl.contains("<= not x(")); // flipped base case encodes bit 0
        assert!(vhdl.contains(" or "));
        let verilog = emit(&nl, Dialect::Verilog).unwrap();
        assert_eq!(cells_section_assignments(&verilog, Dialect::Verilog), 2);
        assert!(verilog.contains("= ~x["));
        assert!(verilog.contains(" | "));
    }

    #[test]
    fn slpe8_has_sixteen_conditional_assignments() {
        let spec = EncoderSpec::new(Arch::SlpeMux, 8);
        let nl = generate(&spec).unwrap();
        let vhdl = emit(&nl, Dialect::Vhdl).unwrap();
        assert_eq!(vhdl.matches(" when ").count(), 16);
        let verilog = emit(&nl, Dialect::Verilog).unwrap();
        assert_eq!(verilog.matches(" ? ").count(), 16);
    }

    #[test]
    fn assignment_count_matches_cell_count() {
        let specs = [
            EncoderSpec::new(Arch::SlpeMux, 16),
            EncoderSpec::new(Arch::Tree, 16),
            EncoderSpec::new(Arch::Recursive, 16),
            EncoderSpec::new(Arch::MlpeComposed, 64).with_m(2),
            EncoderSpec::new(Arch::MlpeCascaded, 64).with_m(3),
        ];
        for spec in specs {
            let nl = generate(&spec).unwrap();
            for dialect in [Dialect::Vhdl, Dialect::Verilog] {
                let text = emit(&nl, dialect).unwrap();
                assert_eq!(
                    cells_section_assignments(&text, dialect),
                    nl.cells.len(),
                    "{} in {:?}",
                    nl.name,
                    dialect
                );
            }
        }
    }

    #[test]
    fn emission_is_deterministic() {
        let spec = EncoderSpec::new(Arch::MlpeComposed, 64).with_m(2);
        let a = emit(&generate(&spec).unwrap(), Dialect::Vhdl).unwrap();
        let b = emit(&generate(&spec).unwrap(), Dialect::Vhdl).unwrap();
        assert_eq!(a, b);
        let c = emit(&generate(&spec).unwrap(), Dialect::Verilog).unwrap();
        let d = emit(&generate(&spec).unwrap(), Dialect::Verilog).unwrap();
        assert_eq!(c, d);
    }

    #[test]
    fn standard_tree_complements_outputs() {
        let spec = EncoderSpec {
            convention: Convention::Standard,
            ..EncoderSpec::new(Arch::Tree, 4)
        };
        let nl = generate(&spec).unwrap();
        assert!(nl.output_complement);
        let vhdl = emit(&nl, Dialect::Vhdl).unwrap();
        assert!(vhdl.contains("y(0) <= not n"));
        let verilog = emit(&nl, Dialect::Verilog).unwrap();
        assert!(verilog.contains("assign y[0] = ~n"));
        // The native convention passes outputs straight through.
        let native = EncoderSpec {
            convention: Convention::Native,
            ..EncoderSpec::new(Arch::Tree, 4)
        };
        let nl = generate(&native).unwrap();
        let vhdl = emit(&nl, Dialect::Vhdl).unwrap();
        assert!(!vhdl.contains("y(0) <= not"));
    }

    #[test]
    fn valid_port_tracks_netlist() {
        let spec = EncoderSpec {
            valid: ValidMethod::None,
            ..EncoderSpec::new(Arch::SlpeMux, 8)
        };
        let nl = generate(&spec).unwrap();
        let vhdl = emit(&nl, Dialect::Vhdl).unwrap();
        assert!(!vhdl.contains("v : out"));
        assert!(!vhdl.contains("\n  v <= "));
        let verilog = emit(&nl, Dialect::Verilog).unwrap();
        assert!(!verilog.contains("output wire v"));

        let spec = EncoderSpec::new(Arch::SlpeMux, 8);
        let nl = generate(&spec).unwrap();
        let vhdl = emit(&nl, Dialect::Vhdl).unwrap();
        assert!(vhdl.contains("v : out std_logic"));
        assert!(vhdl.contains("  v <= n"));
    }

    #[test]
    fn mux_select_render_order() {
        use crate::netlist::Builder;
        let mut b = Builder::new("mux_demo");
        let ins = b.inputs(3);
        let out = b.cell(CellKind::Mux2, &[ins[0], ins[1], ins[2]]);
        let nl = b.finish(vec![out], None);
        let vhdl = emit(&nl, Dialect::Vhdl).unwrap();
        assert!(vhdl.contains("n3 <= x(1) when x(2) = '1' else x(0);"));
        let verilog = emit(&nl, Dialect::Verilog).unwrap();
        assert!(verilog.contains("assign n3 = x[2] ? x[1] : x[0];"));
    }

    #[test]
    fn file_names_follow_unit_names() {
        let nl = generate(&EncoderSpec::new(Arch::Tree, 16)).unwrap();
        assert_eq!(file_name(&nl, Dialect::Vhdl), "pe_tree_16.vhd");
        assert_eq!(file_name(&nl, Dialect::Verilog), "pe_tree_16.v");
    }

    #[test]
    fn broken_netlists_are_rejected() {
        let nl = Netlist {
            name: "broken".into(),
            inputs: vec![0, 1],
            outputs: vec![7],
            valid: None,
            cells: vec![],
            consts: vec![],
            output_complement: false,
            stage_ors: vec![],
        };
        assert!(emit(&nl, Dialect::Vhdl).is_err());
    }
}
