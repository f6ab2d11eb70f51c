//! Design-space sweeps, relative scoring, and recommendation tables.
//!
//! A sweep evaluates a set of architecture candidates over a grid of input
//! widths with the analytical models from [`crate::model`], producing a
//! [`SweepTable`].  Tables can be scored with the relative complexity-delay
//! product ([`rcdp`]), reduced to per-width recommendations
//! ([`recommend`]), or checked against expected component-share bands
//! ([`breakdown_check`]).  FPGA synthesis reports are ingested from CSV and
//! normalized with the same scoring machinery; they are never predicted.

use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::arch::{Arch, EncoderSpec};
use crate::model::{delay_adjusted, encoder_cost, encoder_delay, lut_normalized, MuxModel, TechParams};
use crate::{Error, Result};

/// One architecture candidate in a sweep: a base architecture plus the level
/// count for multi-level families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Candidate {
    pub arch: Arch,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub m: Option<u32>,
}

impl Candidate {
    pub fn new(arch: Arch) -> Candidate {
        Candidate { arch, m: None }
    }

    pub fn with_m(arch: Arch, m: u32) -> Candidate {
        Candidate { arch, m: Some(m) }
    }

    /// Display label used in tables and CSV output.
    pub fn label(&self) -> String {
        match (self.arch, self.m) {
            (Arch::SlpeMux, _) => "SLPE".into(),
            (Arch::SlpeGate, _) => "SLPE-G".into(),
            (Arch::Recursive, _) => "Recursive".into(),
            (Arch::Tree, _) => "Tree".into(),
            (Arch::MlpeComposed, Some(2) | None) => "2LPE".into(),
            (Arch::MlpeComposed, Some(m)) => format!("{m}LPE-O"),
            (Arch::MlpeCascaded, Some(2) | None) => "2LPE".into(),
            (Arch::MlpeCascaded, Some(m)) => format!("{m}LPE-A"),
        }
    }

    /// Encoder spec for this candidate at width `n`.
    pub fn to_spec(&self, n: u64) -> EncoderSpec {
        let mut spec = EncoderSpec::new(self.arch, n);
        spec.m = self.m;
        spec
    }
}

/// Build the candidate list for an architecture set crossed with a level
/// set, preserving the deterministic tie-breaking order of
/// [`default_candidates`]: single-level and fixed-structure architectures
/// first, then composed levels ascending, then cascaded levels ascending.
pub fn candidates_for(archs: &[Arch], m_set: &[u32]) -> Vec<Candidate> {
    let want = |a: Arch| archs.contains(&a);
    let mut ms: Vec<u32> = m_set.to_vec();
    ms.sort_unstable();
    ms.dedup();
    let mut out = Vec::new();
    if want(Arch::SlpeMux) {
        out.push(Candidate::new(Arch::SlpeMux));
    }
    if want(Arch::SlpeGate) {
        out.push(Candidate::new(Arch::SlpeGate));
    }
    if want(Arch::Recursive) {
        out.push(Candidate::new(Arch::Recursive));
    }
    if want(Arch::Tree) {
        out.push(Candidate::new(Arch::Tree));
    }
    if want(Arch::MlpeComposed) {
        for &m in &ms {
            out.push(Candidate::with_m(Arch::MlpeComposed, m));
        }
    }
    if want(Arch::MlpeCascaded) {
        for &m in &ms {
            out.push(Candidate::with_m(Arch::MlpeCascaded, m));
        }
    }
    out
}

/// The standard candidate set, in deterministic tie-breaking order.
pub fn default_candidates() -> Vec<Candidate> {
    vec![
        Candidate::new(Arch::SlpeMux),
        Candidate::new(Arch::Recursive),
        Candidate::new(Arch::Tree),
        Candidate::with_m(Arch::MlpeComposed, 2),
        Candidate::with_m(Arch::MlpeComposed, 3),
        Candidate::with_m(Arch::MlpeComposed, 4),
        Candidate::with_m(Arch::MlpeCascaded, 3),
        Candidate::with_m(Arch::MlpeCascaded, 4),
        Candidate::with_m(Arch::MlpeCascaded, 5),
    ]
}

/// The input-width grid used by the reference recommendation tables.
pub fn default_n_grid() -> Vec<u64> {
    (6..=18u32).map(|e| 1u64 << e).collect()
}

fn mode_tag(mode: MuxModel) -> &'static str {
    match mode {
        MuxModel::PaperLiteral => "PAPER_LITERAL",
        MuxModel::Structural => "STRUCTURAL",
    }
}

/// One evaluated (architecture, width) cell.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SweepRow {
    /// Display label of the architecture candidate.
    pub arch: String,
    pub n: u64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub m: Option<u32>,
    pub cost: f64,
    pub delay: f64,
    pub or_pct: f64,
    pub mux_pct: f64,
    pub pe_pct: f64,
}

/// Metric grid produced by [`sweep`], with per-width best values available
/// for relative scoring.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SweepTable {
    /// Evaluation mode tag the rows were computed under.
    pub mode: String,
    pub rows: Vec<SweepRow>,
    /// Human-readable notes for combinations that were skipped.
    pub skipped: Vec<String>,
}

impl SweepTable {
    /// Sorted unique widths present in the table.
    pub fn ns(&self) -> Vec<u64> {
        let mut ns: Vec<u64> = self.rows.iter().map(|r| r.n).collect();
        ns.sort_unstable();
        ns.dedup();
        ns
    }

    /// Lowest cost over all candidates at width `n`.
    pub fn best_cost(&self, n: u64) -> Option<f64> {
        self.rows
            .iter()
            .filter(|r| r.n == n)
            .map(|r| r.cost)
            .min_by(|a, b| a.partial_cmp(b).expect("finite metrics"))
    }

    /// Lowest delay over all candidates at width `n`.
    pub fn best_delay(&self, n: u64) -> Option<f64> {
        self.rows
            .iter()
            .filter(|r| r.n == n)
            .map(|r| r.delay)
            .min_by(|a, b| a.partial_cmp(b).expect("finite metrics"))
    }

    /// Render the table as CSV (header `arch,n,m,mode,cost,delay,or_pct,mux_pct,pe_pct`).
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record([
            "arch", "n", "m", "mode", "cost", "delay", "or_pct", "mux_pct", "pe_pct",
        ])?;
        for r in &self.rows {
            w.write_record([
                r.arch.clone(),
                r.n.to_string(),
                r.m.map(|m| m.to_string()).unwrap_or_default(),
                self.mode.clone(),
                format_metric(r.cost),
                format_metric(r.delay),
                format!("{:.2}", r.or_pct),
                format!("{:.2}", r.mux_pct),
                format!("{:.2}", r.pe_pct),
            ])?;
        }
        csv_into_string(w)
    }
}

fn format_metric(v: f64) -> String {
    if v.fract() == 0.0 {
        format!("{}", v as i64)
    } else {
        format!("{v}")
    }
}

fn csv_into_string(w: csv::Writer<Vec<u8>>) -> Result<String> {
    let bytes = w
        .into_inner()
        .map_err(|e| Error::Schema(format!("CSV writer flush failed: {e}")))?;
    String::from_utf8(bytes).map_err(|e| Error::Schema(format!("CSV output not UTF-8: {e}")))
}

/// Evaluate `candidates` over the width grid `ns` with the model parameters
/// in `tech`, forcing evaluation mode `mode`.
///
/// Infeasible combinations (unsupported widths, structural configurations
/// that cannot be built, architectures without an analytical model) are
/// skipped and reported in [`SweepTable::skipped`] rather than failing the
/// sweep.  A cascaded candidate with `m = 2` duplicates the two-level PE and
/// is skipped with a note.  Rows are ordered by width, then candidate order.
pub fn sweep(
    candidates: &[Candidate],
    ns: &[u64],
    tech: &TechParams,
    mode: MuxModel,
) -> SweepTable {
    let params = TechParams {
        mux_model: mode,
        ..tech.clone()
    };
    let mut rows = Vec::new();
    let mut skipped = Vec::new();
    for &n in ns {
        for cand in candidates {
            if cand.arch == Arch::MlpeCascaded && cand.m.unwrap_or(2) == 2 {
                skipped.push(format!(
                    "{} at n={n}: cascade with two levels duplicates 2LPE; skipped",
                    cand.label()
                ));
                continue;
            }
            let spec = cand.to_spec(n);
            let (cost, delay) = match (encoder_cost(&spec, &params), encoder_delay(&spec, &params))
            {
                (Ok(c), Ok(d)) => (c, d),
                (Err(e), _) | (_, Err(e)) => {
                    skipped.push(format!("{} at n={n}: {e}", cand.label()));
                    continue;
                }
            };
            rows.push(SweepRow {
                arch: cand.label(),
                n,
                m: cand.m,
                cost: cost.total,
                delay,
                or_pct: cost.percent.or_gates,
                mux_pct: cost.percent.muxes,
                pe_pct: cost.percent.sub_encoders,
            });
        }
    }
    SweepTable {
        mode: mode_tag(mode).into(),
        rows,
        skipped,
    }
}

/// A sweep row with relative scores attached.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ScoredRow {
    pub arch: String,
    pub n: u64,
    pub cost: f64,
    pub delay: f64,
    /// Cost divided by the best cost at this width (>= 1).
    pub rel_cost: f64,
    /// Delay divided by the best delay at this width (>= 1).
    pub rel_delay: f64,
    /// Relative complexity-delay product: `rel_cost * rel_delay`.
    pub rcdp: f64,
}

/// Score every row of `table` against the per-width best cost and delay.
pub fn rcdp(table: &SweepTable) -> Result<Vec<ScoredRow>> {
    if table.rows.is_empty() {
        return Err(Error::InvalidParam("cannot score an empty table".into()));
    }
    let mut scored = Vec::with_capacity(table.rows.len());
    for r in &table.rows {
        let best_cost = table.best_cost(r.n).expect("row width present");
        let best_delay = table.best_delay(r.n).expect("row width present");
        let rel_cost = r.cost / best_cost;
        let rel_delay = r.delay / best_delay;
        scored.push(ScoredRow {
            arch: r.arch.clone(),
            n: r.n,
            cost: r.cost,
            delay: r.delay,
            rel_cost,
            rel_delay,
            rcdp: rel_cost * rel_delay,
        });
    }
    Ok(scored)
}

/// Selection objective for [`recommend`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Objective {
    /// Minimize transistor cost (or normalized LUTs).
    Complexity,
    /// Minimize critical-path delay.
    Delay,
    /// Minimize the relative complexity-delay product.
    Balanced,
}

impl fmt::Display for Objective {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Objective::Complexity => "complexity",
            Objective::Delay => "delay",
            Objective::Balanced => "balanced",
        };
        f.write_str(s)
    }
}

impl std::str::FromStr for Objective {
    type Err = Error;
    fn from_str(s: &str) -> Result<Objective> {
        match s.to_ascii_lowercase().as_str() {
            "complexity" | "cost" => Ok(Objective::Complexity),
            "delay" => Ok(Objective::Delay),
            "balanced" | "rcdp" => Ok(Objective::Balanced),
            other => Err(Error::InvalidParam(format!(
                "unknown objective '{other}' (expected complexity, delay, or balanced)"
            ))),
        }
    }
}

/// Default relative tolerance for reporting co-winners.
pub const DEFAULT_TIE_TOLERANCE: f64 = 0.02;

/// Per-width winner under an objective, with near ties reported.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Recommendation {
    pub n: u64,
    pub winner: String,
    /// The winner's metric value under the objective.
    pub metric: f64,
    /// Other candidates within the tie tolerance of the winner, in table
    /// order.
    pub co_winners: Vec<String>,
}

/// Reduce a sweep table to one winner per width under `objective`.
///
/// The winner is the strict argmin of the objective metric; exact ties go to
/// the earliest candidate in table order.  Candidates whose metric is within
/// `tie_tolerance` (relative) of the winner are listed as co-winners.
pub fn recommend(
    table: &SweepTable,
    objective: Objective,
    tie_tolerance: f64,
) -> Result<Vec<Recommendation>> {
    if table.rows.is_empty() {
        return Err(Error::InvalidParam(
            "cannot recommend from an empty table".into(),
        ));
    }
    let scored = rcdp(table)?;
    let metric = |row: &ScoredRow| match objective {
        Objective::Complexity => row.cost,
        Objective::Delay => row.delay,
        Objective::Balanced => row.rcdp,
    };
    let mut recs = Vec::new();
    for n in table.ns() {
        let rows: Vec<&ScoredRow> = scored.iter().filter(|r| r.n == n).collect();
        let winner = rows
            .iter()
            .fold(None::<&&ScoredRow>, |best, row| match best {
                Some(b) if metric(row) < metric(b) => Some(row),
                Some(b) => Some(b),
                None => Some(row),
            })
            .expect("width has rows");
        let wm = metric(winner);
        let co_winners = rows
            .iter()
            .filter(|r| r.arch != winner.arch && metric(r) <= wm * (1.0 + tie_tolerance))
            .map(|r| r.arch.clone())
            .collect();
        recs.push(Recommendation {
            n,
            winner: winner.arch.clone(),
            metric: wm,
            co_winners,
        });
    }
    Ok(recs)
}

/// Render recommendations as CSV (header `n,winner,metric,co_winners`).
pub fn recommendations_to_csv(recs: &[Recommendation]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["n", "winner", "metric", "co_winners"])?;
    for r in recs {
        w.write_record([
            r.n.to_string(),
            r.winner.clone(),
            format_metric(r.metric),
            r.co_winners.join("|"),
        ])?;
    }
    csv_into_string(w)
}

// ---- component-share checks ---------------------------------------------

/// Component shares for one multi-level row, with band violations flagged.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ShareReport {
    pub arch: String,
    pub n: u64,
    pub or_pct: f64,
    pub mux_pct: f64,
    pub pe_pct: f64,
    /// Violated expectations, empty when all shares look typical.
    pub flags: Vec<String>,
}

/// Check multi-level rows of a sweep against the expected component-share
/// bands: muxes around 60-75% of the total, OR gates around 20-35%, and
/// sub-encoders below 5% once `n` reaches 4096.
pub fn breakdown_check(table: &SweepTable) -> Vec<ShareReport> {
    let mut reports = Vec::new();
    for r in &table.rows {
        let is_mlpe = r.arch.ends_with("LPE") || r.arch.ends_with("LPE-O") || r.arch.ends_with("LPE-A");
        let has_shares = r.or_pct + r.mux_pct + r.pe_pct > 0.0;
        if !is_mlpe || !has_shares {
            continue;
        }
        let mut flags = Vec::new();
        if r.mux_pct < 60.0 || r.mux_pct > 75.0 {
            flags.push(format!("mux share {:.1}% outside [60, 75]", r.mux_pct));
        }
        if r.or_pct < 20.0 || r.or_pct > 35.0 {
            flags.push(format!("OR share {:.1}% outside [20, 35]", r.or_pct));
        }
        if r.n >= 4096 && r.pe_pct >= 5.0 {
            flags.push(format!(
                "sub-encoder share {:.1}% at n={} expected below 5%",
                r.pe_pct, r.n
            ));
        }
        reports.push(ShareReport {
            arch: r.arch.clone(),
            n: r.n,
            or_pct: r.or_pct,
            mux_pct: r.mux_pct,
            pe_pct: r.pe_pct,
            flags,
        });
    }
    reports
}

// ---- FPGA report ingestion ------------------------------------------------

/// One row of an ingested FPGA synthesis report.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FpgaRecord {
    pub arch: String,
    pub n: u64,
    pub luts: u64,
    pub muxfx: u64,
    pub ffs: u64,
    pub path_luts: u64,
    pub path_muxfx: u64,
}

/// Result of [`ingest_fpga_csv`]: parsed records plus per-line diagnostics
/// for rows that could not be parsed.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FpgaIngest {
    pub records: Vec<FpgaRecord>,
    pub diagnostics: Vec<String>,
}

const FPGA_HEADER: [&str; 7] = ["arch", "n", "luts", "muxfx", "ffs", "path_luts", "path_muxfx"];

/// Parse an FPGA synthesis report CSV (`arch,n,luts,muxfx,ffs,path_luts,path_muxfx`).
///
/// Malformed rows are reported with their line numbers and skipped; a
/// duplicate `(arch, n)` pair or a wrong header is an error.
pub fn ingest_fpga_csv(path: &Path) -> Result<FpgaIngest> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(true)
        .from_path(path)?;
    let headers = reader.headers()?.clone();
    let got: Vec<&str> = headers.iter().collect();
    if got != FPGA_HEADER {
        return Err(Error::Schema(format!(
            "unexpected FPGA CSV header {:?}; expected {:?}",
            got.join(","),
            FPGA_HEADER.join(",")
        )));
    }
    let mut records = Vec::new();
    let mut diagnostics = Vec::new();
    let mut seen: Vec<(String, u64)> = Vec::new();
    for row in reader.records() {
        let row = row?;
        let line = row.position().map(|p| p.line()).unwrap_or(0);
        match parse_fpga_row(&row) {
            Ok(rec) => {
                let key = (rec.arch.clone(), rec.n);
                if seen.contains(&key) {
                    return Err(Error::Schema(format!(
                        "line {line}: duplicate record for ({}, {})",
                        rec.arch, rec.n
                    )));
                }
                seen.push(key);
                records.push(rec);
            }
            Err(msg) => diagnostics.push(format!("line {line}: {msg}")),
        }
    }
    Ok(FpgaIngest {
        records,
        diagnostics,
    })
}

fn parse_fpga_row(row: &csv::StringRecord) -> std::result::Result<FpgaRecord, String> {
    if row.len() != FPGA_HEADER.len() {
        return Err(format!(
            "expected {} fields, found {}",
            FPGA_HEADER.len(),
            row.len()
        ));
    }
    let field = |i: usize| row.get(i).unwrap_or("").trim();
    let num = |i: usize| -> std::result::Result<u64, String> {
        field(i)
            .parse::<u64>()
            .map_err(|_| format!("field '{}' is not a nonnegative integer: '{}'", FPGA_HEADER[i], field(i)))
    };
    let arch = field(0).to_string();
    if arch.is_empty() {
        return Err("empty arch tag".into());
    }
    Ok(FpgaRecord {
        arch,
        n: num(1)?,
        luts: num(2)?,
        muxfx: num(3)?,
        ffs: num(4)?,
        path_luts: num(5)?,
        path_muxfx: num(6)?,
    })
}

/// Normalized FPGA metrics for one record.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FpgaMetricsRow {
    pub arch: String,
    pub n: u64,
    /// Effective LUTs counting dedicated mux primitives at one third each.
    pub lut_n: u64,
    /// Critical path in LUT levels with mux primitives at half a level.
    pub adjusted_delay: f64,
}

/// Compute normalized LUT and delay metrics for ingested records.
pub fn fpga_metrics(records: &[FpgaRecord]) -> Vec<FpgaMetricsRow> {
    records
        .iter()
        .map(|r| FpgaMetricsRow {
            arch: r.arch.clone(),
            n: r.n,
            lut_n: lut_normalized(r.luts, r.muxfx),
            adjusted_delay: delay_adjusted(r.path_luts, r.path_muxfx),
        })
        .collect()
}

/// View FPGA metrics as a sweep table (cost = normalized LUTs, delay =
/// adjusted path) so they can be scored and recommended with the same
/// machinery as ASIC sweeps.
pub fn fpga_sweep_table(metrics: &[FpgaMetricsRow]) -> SweepTable {
    let rows = metrics
        .iter()
        .map(|m| SweepRow {
            arch: m.arch.clone(),
            n: m.n,
            m: None,
            cost: m.lut_n as f64,
            delay: m.adjusted_delay,
            or_pct: 0.0,
            mux_pct: 0.0,
            pe_pct: 0.0,
        })
        .collect();
    SweepTable {
        mode: "FPGA".into(),
        rows,
        skipped: Vec::new(),
    }
}
