//! Python bindings: generation, verification, analytical costing, HDL
//! emission, and the sizing/normalization helpers, as plain functions on
//! the `pencoder_py` module.

// The #[pyfunction] expansion inserts conversions that are identity for
// some return types; the lint fires inside generated code.
#![allow(clippy::useless_conversion)]

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

use pencoder::analysis::{default_candidates, default_n_grid, recommend, sweep, Objective};
use pencoder::arch::{generate, Arch, Convention, EncoderSpec, ValidMethod};
use pencoder::hdl;
use pencoder::model::{encoder_cost, encoder_delay, MuxModel, TechParams};
use pencoder::sim::{longest_path, verify, Strategy};

fn value_err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn parse_arch(s: &str) -> PyResult<(Arch, Option<u32>)> {
    let t = s.to_ascii_lowercase().replace('_', "-");
    let hit = match t.as_str() {
        "slpe" | "slpe-mux" => Some((Arch::SlpeMux, None)),
        "slpe-gate" | "slpe-g" => Some((Arch::SlpeGate, None)),
        "recursive" | "rec" => Some((Arch::Recursive, None)),
        "tree" => Some((Arch::Tree, None)),
        "2lpe" => Some((Arch::MlpeComposed, Some(2))),
        "composed" | "mlpe-composed" | "mlpe-o" => Some((Arch::MlpeComposed, None)),
        "cascaded" | "mlpe-cascaded" | "mlpe-a" => Some((Arch::MlpeCascaded, None)),
        _ => None,
    };
    if let Some(hit) = hit {
        return Ok(hit);
    }
    for (suffix, arch) in [("lpe-o", Arch::MlpeComposed), ("lpe-a", Arch::MlpeCascaded)] {
        if let Some(rest) = t.strip_suffix(suffix) {
            if let Ok(m) = rest.parse::<u32>() {
                return Ok((arch, Some(m)));
            }
        }
    }
    Err(value_err(format!("unknown architecture '{s}'")))
}

fn build_spec(
    arch: &str,
    n: u64,
    m: Option<u32>,
    k: Option<u64>,
    valid: &str,
    convention: &str,
) -> PyResult<EncoderSpec> {
    let (arch, implied_m) = parse_arch(arch)?;
    let m = match (implied_m, m) {
        (Some(a), Some(b)) if a != b => {
            return Err(value_err(format!("architecture implies m={a}, got m={b}")))
        }
        (Some(a), _) => Some(a),
        (None, b) => b,
    };
    let valid = match valid.to_ascii_lowercase().replace('_', "-").as_str() {
        "stage-or" | "stageor" => ValidMethod::StageOr,
        "lsb-or" | "lsbor" => ValidMethod::LsbOr,
        "none" => ValidMethod::None,
        other => return Err(value_err(format!("unknown valid method '{other}'"))),
    };
    let convention = match convention.to_ascii_lowercase().as_str() {
        "standard" => Convention::Standard,
        "native" => Convention::Native,
        other => return Err(value_err(format!("unknown convention '{other}'"))),
    };
    let spec = EncoderSpec {
        arch,
        n,
        m,
        k,
        valid,
        convention,
    };
    spec.validate().map_err(value_err)?;
    Ok(spec)
}

fn tech_for(mode: &str, r: f64) -> PyResult<TechParams> {
    let mux_model = match mode.to_ascii_lowercase().replace('_', "-").as_str() {
        "literal" | "paper-literal" => MuxModel::PaperLiteral,
        "structural" => MuxModel::Structural,
        other => return Err(value_err(format!("unknown mode '{other}'"))),
    };
    if !(r.is_finite() && r > 0.0) {
        return Err(value_err(format!("drive ratio must be positive, got {r}")));
    }
    Ok(TechParams {
        r,
        mux_model,
        ..TechParams::default()
    })
}

/// Generate a netlist and return it as a JSON string.
#[pyfunction]
#[pyo3(signature = (arch, n, m=None, k=None, valid="stage-or", convention="standard"))]
fn generate_netlist(
    arch: &str,
    n: u64,
    m: Option<u32>,
    k: Option<u64>,
    valid: &str,
    convention: &str,
) -> PyResult<String> {
    let spec = build_spec(arch, n, m, k, valid, convention)?;
    let nl = generate(&spec).map_err(value_err)?;
    Ok(nl.to_json())
}

/// Simulate an encoder against the arithmetic oracle. Returns
/// `(tested, mismatches)`.
#[pyfunction]
#[pyo3(signature = (arch, n, m=None, k=None, strategy="random", seed=0, count=10000))]
fn verify_encoder(
    arch: &str,
    n: u64,
    m: Option<u32>,
    k: Option<u64>,
    strategy: &str,
    seed: u64,
    count: u64,
) -> PyResult<(u64, u64)> {
    let spec = build_spec(arch, n, m, k, "stage-or", "standard")?;
    let strategy = match strategy.to_ascii_lowercase().replace('_', "-").as_str() {
        "exhaustive" => Strategy::Exhaustive,
        "one-hot" | "onehot" => Strategy::OneHot,
        "prefix-ones" | "prefix" => Strategy::PrefixOnes,
        "random" => Strategy::Random { seed, count },
        other => return Err(value_err(format!("unknown strategy '{other}'"))),
    };
    let report = verify(&spec, &strategy).map_err(value_err)?;
    Ok((report.tested, report.mismatches.len() as u64))
}

/// Analytical transistor cost. Returns a dict with `total` and the
/// `or`/`mux`/`sub_encoders` breakdown.
#[pyfunction]
#[pyo3(signature = (arch, n, m=None, k=None, mode="literal", r=2.0))]
fn cost<'py>(
    py: Python<'py>,
    arch: &str,
    n: u64,
    m: Option<u32>,
    k: Option<u64>,
    mode: &str,
    r: f64,
) -> PyResult<Bound<'py, PyDict>> {
    let spec = build_spec(arch, n, m, k, "stage-or", "standard")?;
    let tech = tech_for(mode, r)?;
    let report = encoder_cost(&spec, &tech).map_err(value_err)?;
    let d = PyDict::new_bound(py);
    d.set_item("total", report.total)?;
    d.set_item("or", report.breakdown.or_gates)?;
    d.set_item("mux", report.breakdown.muxes)?;
    d.set_item("sub_encoders", report.breakdown.sub_encoders)?;
    Ok(d)
}

/// Analytical propagation delay in normalized gate units.
#[pyfunction]
#[pyo3(signature = (arch, n, m=None, k=None, mode="literal", r=2.0))]
fn delay(arch: &str, n: u64, m: Option<u32>, k: Option<u64>, mode: &str, r: f64) -> PyResult<f64> {
    let spec = build_spec(arch, n, m, k, "stage-or", "standard")?;
    let tech = tech_for(mode, r)?;
    encoder_delay(&spec, &tech).map_err(value_err)
}

/// Weighted longest path of the generated netlist (valid logic excluded).
#[pyfunction]
#[pyo3(signature = (arch, n, m=None, k=None, r=2.0))]
fn netlist_delay(arch: &str, n: u64, m: Option<u32>, k: Option<u64>, r: f64) -> PyResult<f64> {
    let spec = build_spec(arch, n, m, k, "stage-or", "standard")?;
    let tech = tech_for("structural", r)?;
    let nl = generate(&spec).map_err(value_err)?;
    Ok(longest_path(&nl, &tech, false).total)
}

/// Emit a structural HDL unit as text. `dialect` is "vhdl" or "verilog".
#[pyfunction]
#[pyo3(signature = (arch, n, m=None, k=None, dialect="vhdl", valid="stage-or", convention="standard"))]
fn emit_hdl(
    arch: &str,
    n: u64,
    m: Option<u32>,
    k: Option<u64>,
    dialect: &str,
    valid: &str,
    convention: &str,
) -> PyResult<String> {
    let spec = build_spec(arch, n, m, k, valid, convention)?;
    let nl = generate(&spec).map_err(value_err)?;
    let dialect: hdl::Dialect = dialect.parse().map_err(value_err)?;
    hdl::emit(&nl, dialect).map_err(value_err)
}

/// Balanced two-level split: `(l1, l2)` with `l1 * l2 == n`.
#[pyfunction]
fn size_two_level(n: u64) -> PyResult<(u64, u64)> {
    pencoder::arch::size_two_level(n).map_err(value_err)
}

/// Cascade level sizes, consumed most-significant first.
#[pyfunction]
fn size_cascaded(n: u64, m: u32) -> PyResult<Vec<u64>> {
    pencoder::arch::size_cascaded(n, m).map_err(value_err)
}

/// FPGA complexity normalization: LUTs plus ceil(muxfx / 3).
#[pyfunction]
fn lut_normalized(luts: u64, muxfx: u64) -> u64 {
    pencoder::model::lut_normalized(luts, muxfx)
}

/// Per-width winning architecture for an objective
/// ("complexity", "delay", or "balanced") over the standard width grid.
/// Returns `[(n, winner), ...]`.
#[pyfunction]
#[pyo3(signature = (objective="balanced", mode="literal", r=2.0))]
fn recommend_architectures(objective: &str, mode: &str, r: f64) -> PyResult<Vec<(u64, String)>> {
    let objective: Objective = objective.parse().map_err(value_err)?;
    let tech = tech_for(mode, r)?;
    let table = sweep(
        &default_candidates(),
        &default_n_grid(),
        &tech,
        tech.mux_model,
    );
    let recs = recommend(&table, objective, 0.02).map_err(value_err)?;
    Ok(recs.into_iter().map(|r| (r.n, r.winner)).collect())
}

/// Cost/delay sweep over the standard candidates and width grid, as CSV.
#[pyfunction]
#[pyo3(signature = (mode="literal", r=2.0))]
fn sweep_csv(mode: &str, r: f64) -> PyResult<String> {
    let tech = tech_for(mode, r)?;
    let table = sweep(
        &default_candidates(),
        &default_n_grid(),
        &tech,
        tech.mux_model,
    );
    table.to_csv().map_err(value_err)
}

#[pymodule]
fn pencoder_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(generate_netlist, m)?)?;
    m.add_function(wrap_pyfunction!(verify_encoder, m)?)?;
    m.add_function(wrap_pyfunction!(cost, m)?)?;
    m.add_function(wrap_pyfunction!(delay, m)?)?;
    m.add_function(wrap_pyfunction!(netlist_delay, m)?)?;
    m.add_function(wrap_pyfunction!(emit_hdl, m)?)?;
    m.add_function(wrap_pyfunction!(size_two_level, m)?)?;
    m.add_function(wrap_pyfunction!(size_cascaded, m)?)?;
    m.add_function(wrap_pyfunction!(lut_normalized, m)?)?;
    m.add_function(wrap_pyfunction!(recommend_architectures, m)?)?;
    m.add_function(wrap_pyfunction!(sweep_csv, m)?)?;
    Ok(())
}
