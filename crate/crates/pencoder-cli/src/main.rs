//! `pencoder` — generate, verify, analyze, and emit priority encoders.
//!
//! Subcommands tie the library into reproducible batch workflows: netlist
//! generation (`generate`), oracle verification (`verify`), cost/delay
//! sweeps (`analyze`), per-width winners (`recommend`, `tables`), single
//! evaluations with structural cross-checks (`cost`, `delay`), HDL emission
//! (`emit`), and FPGA result ingestion (`fpga`).
//!
//! Exit codes: 0 success, 1 usage error, 2 verification or cross-check
//! mismatch, 3 I/O or schema error.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};

use pencoder::analysis::{
    candidates_for, default_candidates, default_n_grid, fpga_metrics, fpga_sweep_table,
    ingest_fpga_csv, rcdp, recommend, recommendations_to_csv, sweep, Candidate, Objective,
    Recommendation, SweepTable, DEFAULT_TIE_TOLERANCE,
};
use pencoder::arch::{generate, Arch, Convention, EncoderSpec, ValidMethod};
use pencoder::hdl::{emit, file_name, Dialect};
use pencoder::model::{
    encoder_cost, encoder_delay, MuxModel, Mux2Variant, Mux4Variant, Or4Variant, TechParams,
};
use pencoder::netlist::Netlist;
use pencoder::sim::{longest_path, verify, verify_with_oracle, Strategy};
use pencoder::Error;

// ---------------------------------------------------------------------------
// Failure → exit code mapping

enum Failure {
    /// Bad flags or an infeasible configuration request.
    Usage(String),
    /// Oracle mismatches or analytical/netlist disagreement.
    Mismatch(String),
    /// File, JSON, or CSV trouble.
    Io(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 1,
            Failure::Mismatch(_) => 2,
            Failure::Io(_) => 3,
        }
    }
    fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Mismatch(m) | Failure::Io(m) => m,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        match e {
            Error::InvalidParam(_) | Error::Infeasible(_) => Failure::Usage(e.to_string()),
            _ => Failure::Io(e.to_string()),
        }
    }
}

type CmdResult = Result<(), Failure>;

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

// ---------------------------------------------------------------------------
// Shared flag groups

#[derive(Args)]
struct SpecArgs {
    /// Architecture: slpe, slpe-gate, recursive, tree, 2lpe, composed,
    /// cascaded, or a level label such as 3lpe-o / 4lpe-a
    #[arg(long)]
    arch: String,

    /// Input width in bits (a power of two)
    #[arg(long)]
    n: u64,

    /// Level count for multi-level encoders (2..=5)
    #[arg(long)]
    m: Option<u32>,

    /// Recursion factor for the recursive architecture (default 4)
    #[arg(long)]
    k: Option<u64>,

    /// Valid-flag method: stage-or, lsb-or, none
    #[arg(long, default_value = "stage-or")]
    valid: String,

    /// Output convention: standard (bit n-1 wins) or native
    #[arg(long, default_value = "standard")]
    convention: String,
}

impl SpecArgs {
    fn to_spec(&self) -> Result<EncoderSpec, Failure> {
        let (arch, implied_m) = parse_arch(&self.arch)?;
        let m = match (implied_m, self.m) {
            (Some(a), Some(b)) if a != b => {
                return Err(usage(format!(
                    "--arch {} implies --m {a}, but --m {b} was given",
                    self.arch
                )))
            }
            (Some(a), _) => Some(a),
            (None, b) => b,
        };
        let valid = match self.valid.to_ascii_lowercase().as_str() {
            "stage-or" | "stage_or" | "stageor" => ValidMethod::StageOr,
            "lsb-or" | "lsb_or" | "lsbor" => ValidMethod::LsbOr,
            "none" => ValidMethod::None,
            other => return Err(usage(format!("unknown valid method '{other}'"))),
        };
        let convention = match self.convention.to_ascii_lowercase().as_str() {
            "standard" => Convention::Standard,
            "native" => Convention::Native,
            other => return Err(usage(format!("unknown convention '{other}'"))),
        };
        let spec = EncoderSpec {
            arch,
            n: self.n,
            m,
            k: self.k,
            valid,
            convention,
        };
        spec.validate()?;
        Ok(spec)
    }
}

fn parse_arch(s: &str) -> Result<(Arch, Option<u32>), Failure> {
    let t = s.to_ascii_lowercase().replace('_', "-");
    let direct = match t.as_str() {
        "slpe" | "slpe-mux" => Some((Arch::SlpeMux, None)),
        "slpe-gate" | "slpe-g" => Some((Arch::SlpeGate, None)),
        "recursive" | "rec" => Some((Arch::Recursive, None)),
        "tree" => Some((Arch::Tree, None)),
        "2lpe" => Some((Arch::MlpeComposed, Some(2))),
        "composed" | "mlpe-composed" | "mlpe-o" => Some((Arch::MlpeComposed, None)),
        "cascaded" | "mlpe-cascaded" | "mlpe-a" => Some((Arch::MlpeCascaded, None)),
        _ => None,
    };
    if let Some(hit) = direct {
        return Ok(hit);
    }
    // Level labels: "3lpe-o" / "4lpe-a" style.
    if let Some(rest) = t.strip_suffix("lpe-o") {
        if let Ok(m) = rest.parse::<u32>() {
            return Ok((Arch::MlpeComposed, Some(m)));
        }
    }
    if let Some(rest) = t.strip_suffix("lpe-a") {
        if let Ok(m) = rest.parse::<u32>() {
            return Ok((Arch::MlpeCascaded, Some(m)));
        }
    }
    Err(usage(format!("unknown architecture '{s}'")))
}

#[derive(Args)]
struct TechArgs {
    /// PMOS/NMOS drive-strength ratio used for delay weighting
    #[arg(long, default_value_t = 2.0)]
    r: f64,

    /// Analytical mux model: literal (closed-form recurrences) or structural
    #[arg(long, default_value = "literal")]
    mode: String,

    /// 2:1 mux implementation: atomic (8T pass-gate) or composite
    #[arg(long, default_value = "atomic")]
    mux2: String,

    /// 4:1 mux implementation: three-mux2 or gate (36T two-stage)
    #[arg(long, default_value = "three-mux2")]
    mux4: String,

    /// 4-input OR implementation: atomic or composite
    #[arg(long, default_value = "atomic")]
    or4: String,
}

impl TechArgs {
    fn mode(&self) -> Result<MuxModel, Failure> {
        match self.mode.to_ascii_lowercase().replace('_', "-").as_str() {
            "literal" | "paper-literal" => Ok(MuxModel::PaperLiteral),
            "structural" => Ok(MuxModel::Structural),
            other => Err(usage(format!("unknown mode '{other}'"))),
        }
    }

    fn to_tech(&self) -> Result<TechParams, Failure> {
        if !(self.r.is_finite() && self.r > 0.0) {
            return Err(usage(format!("drive ratio must be positive, got {}", self.r)));
        }
        let mux2 = match self.mux2.to_ascii_lowercase().as_str() {
            "atomic" => Mux2Variant::Atomic8T,
            "composite" => Mux2Variant::CompositeGate,
            other => return Err(usage(format!("unknown mux2 variant '{other}'"))),
        };
        let mux4 = match self.mux4.to_ascii_lowercase().replace('_', "-").as_str() {
            "three-mux2" => Mux4Variant::ThreeMux2,
            "gate" | "gate-36t" => Mux4Variant::Gate36T,
            other => return Err(usage(format!("unknown mux4 variant '{other}'"))),
        };
        let or4 = match self.or4.to_ascii_lowercase().as_str() {
            "atomic" => Or4Variant::Atomic,
            "composite" => Or4Variant::Composite,
            other => return Err(usage(format!("unknown or4 variant '{other}'"))),
        };
        Ok(TechParams {
            r: self.r,
            mux2_variant: mux2,
            mux4_variant: mux4,
            or4_variant: or4,
            mux_model: self.mode()?,
            ..TechParams::default()
        })
    }
}

#[derive(Args)]
struct GridArgs {
    /// Comma-separated widths (powers of two), e.g. 64,128,256
    #[arg(long)]
    ns: Option<String>,

    /// Smallest width of the default power-of-two grid
    #[arg(long, default_value_t = 64)]
    n_min: u64,

    /// Largest width of the default power-of-two grid
    #[arg(long, default_value_t = 262144)]
    n_max: u64,

    /// Restrict to these architectures (repeatable); default is the full set
    #[arg(long = "arch")]
    archs: Vec<String>,

    /// Comma-separated level counts for multi-level candidates
    #[arg(long, default_value = "2,3,4,5")]
    m_set: String,
}

impl GridArgs {
    fn widths(&self) -> Result<Vec<u64>, Failure> {
        if let Some(list) = &self.ns {
            let mut ns = Vec::new();
            for part in list.split(',') {
                let n: u64 = part
                    .trim()
                    .parse()
                    .map_err(|_| usage(format!("bad width '{part}'")))?;
                if !n.is_power_of_two() || n < 2 {
                    return Err(usage(format!("widths must be powers of two >= 2, got {n}")));
                }
                ns.push(n);
            }
            ns.sort_unstable();
            ns.dedup();
            if ns.is_empty() {
                return Err(usage("--ns is empty"));
            }
            return Ok(ns);
        }
        if !self.n_min.is_power_of_two() || !self.n_max.is_power_of_two() || self.n_min < 2 {
            return Err(usage("--n-min/--n-max must be powers of two >= 2"));
        }
        if self.n_min > self.n_max {
            return Err(usage("--n-min exceeds --n-max"));
        }
        Ok(default_n_grid()
            .into_iter()
            .filter(|&n| n >= self.n_min && n <= self.n_max)
            .collect())
    }

    fn candidates(&self) -> Result<Vec<Candidate>, Failure> {
        if self.archs.is_empty() {
            return Ok(default_candidates());
        }
        let mut archs = Vec::new();
        let mut pinned = Vec::new();
        for name in &self.archs {
            let (arch, m) = parse_arch(name)?;
            match m {
                Some(m) => pinned.push(Candidate::with_m(arch, m)),
                None => archs.push(arch),
            }
        }
        let mut m_set = Vec::new();
        for part in self.m_set.split(',') {
            let m: u32 = part
                .trim()
                .parse()
                .map_err(|_| usage(format!("bad level count '{part}'")))?;
            if !(2..=5).contains(&m) {
                return Err(usage(format!("level counts must be in 2..=5, got {m}")));
            }
            m_set.push(m);
        }
        let mut cands = candidates_for(&archs, &m_set);
        for c in pinned {
            if !cands.iter().any(|x| x.label() == c.label()) {
                cands.push(c);
            }
        }
        if cands.is_empty() {
            return Err(usage("no candidate architectures selected"));
        }
        Ok(cands)
    }
}

// ---------------------------------------------------------------------------
// CLI shape

#[derive(Parser)]
#[command(
    name = "pencoder",
    version,
    about = "Priority-encoder generator, verifier, and design-space analyzer"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Generate a netlist and print it as JSON
    Generate {
        #[command(flatten)]
        spec: SpecArgs,
        /// Write to this file instead of stdout
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Simulate a netlist against the arithmetic oracle
    Verify {
        #[command(flatten)]
        spec: SpecArgs,
        /// Stimulus: exhaustive, one-hot, prefix-ones, random
        #[arg(long, default_value = "random")]
        strategy: String,
        /// Number of random vectors
        #[arg(long, default_value_t = 10000)]
        count: u64,
        /// Random-stimulus seed
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Verify this netlist JSON file instead of a freshly generated one
        #[arg(long)]
        netlist: Option<PathBuf>,
        /// Output format: table or json
        #[arg(long, default_value = "table")]
        format: String,
    },
    /// Sweep cost/delay across architectures and widths (CSV by default)
    Analyze {
        /// Technology: asic (analytical model) or fpga (ingested results)
        #[arg(long, default_value = "asic")]
        tech: String,
        /// Synthesis-results CSV, required when --tech fpga
        #[arg(long)]
        fpga_csv: Option<PathBuf>,
        #[command(flatten)]
        grid: GridArgs,
        #[command(flatten)]
        tech_args: TechArgs,
        /// Output format: csv or table
        #[arg(long, default_value = "csv")]
        format: String,
        /// Write to this file instead of stdout
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Pick the best architecture per width for an objective
    Recommend {
        /// Technology: asic or fpga
        #[arg(long, default_value = "asic")]
        tech: String,
        /// Synthesis-results CSV, required when --tech fpga
        #[arg(long)]
        fpga_csv: Option<PathBuf>,
        /// Objective: complexity, delay, or balanced
        #[arg(long, default_value = "balanced")]
        objective: String,
        /// Relative tie tolerance for co-winners
        #[arg(long, default_value_t = DEFAULT_TIE_TOLERANCE)]
        tolerance: f64,
        #[command(flatten)]
        grid: GridArgs,
        #[command(flatten)]
        tech_args: TechArgs,
        /// Output format: table or csv
        #[arg(long, default_value = "table")]
        format: String,
        /// Write to this file instead of stdout
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Evaluate transistor cost (analytical and structural side by side)
    Cost {
        #[command(flatten)]
        spec: SpecArgs,
        #[command(flatten)]
        tech_args: TechArgs,
        /// Skip the netlist cross-check above this width
        #[arg(long, default_value_t = 16384)]
        max_netlist_n: u64,
        /// Output format: table or json
        #[arg(long, default_value = "table")]
        format: String,
    },
    /// Evaluate propagation delay (analytical and structural side by side)
    Delay {
        #[command(flatten)]
        spec: SpecArgs,
        #[command(flatten)]
        tech_args: TechArgs,
        /// Skip the netlist cross-check above this width
        #[arg(long, default_value_t = 16384)]
        max_netlist_n: u64,
        /// Print the critical path cells
        #[arg(long)]
        path: bool,
        /// Output format: table or json
        #[arg(long, default_value = "table")]
        format: String,
    },
    /// Emit a structural HDL unit
    Emit {
        #[command(flatten)]
        spec: SpecArgs,
        /// Dialect: vhdl, verilog, or both (both requires --out)
        #[arg(long, default_value = "vhdl")]
        dialect: String,
        /// Directory to write <unit>.vhd / <unit>.v into
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Normalize FPGA synthesis results and score them
    Fpga {
        /// Synthesis-results CSV (arch,n,luts,muxfx,ffs,path_luts,path_muxfx)
        #[arg(long)]
        csv: PathBuf,
        /// Output format: csv or table
        #[arg(long, default_value = "csv")]
        format: String,
        /// Write to this file instead of stdout
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Print the per-width winner tables for the standard ASIC model
    Tables {
        #[command(flatten)]
        tech_args: TechArgs,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}

fn run(cli: Cli) -> CmdResult {
    match cli.cmd {
        Cmd::Generate { spec, out } => cmd_generate(&spec, out.as_deref()),
        Cmd::Verify {
            spec,
            strategy,
            count,
            seed,
            netlist,
            format,
        } => cmd_verify(&spec, &strategy, count, seed, netlist.as_deref(), &format),
        Cmd::Analyze {
            tech,
            fpga_csv,
            grid,
            tech_args,
            format,
            out,
        } => cmd_analyze(&tech, fpga_csv.as_deref(), &grid, &tech_args, &format, out.as_deref()),
        Cmd::Recommend {
            tech,
            fpga_csv,
            objective,
            tolerance,
            grid,
            tech_args,
            format,
            out,
        } => cmd_recommend(
            &tech,
            fpga_csv.as_deref(),
            &objective,
            tolerance,
            &grid,
            &tech_args,
            &format,
            out.as_deref(),
        ),
        Cmd::Cost {
            spec,
            tech_args,
            max_netlist_n,
            format,
        } => cmd_cost(&spec, &tech_args, max_netlist_n, &format),
        Cmd::Delay {
            spec,
            tech_args,
            max_netlist_n,
            path,
            format,
        } => cmd_delay(&spec, &tech_args, max_netlist_n, path, &format),
        Cmd::Emit { spec, dialect, out } => cmd_emit(&spec, &dialect, out.as_deref()),
        Cmd::Fpga { csv, format, out } => cmd_fpga(&csv, &format, out.as_deref()),
        Cmd::Tables { tech_args } => cmd_tables(&tech_args),
    }
}

// ---------------------------------------------------------------------------
// Output helpers

fn deliver(out: Option<&std::path::Path>, text: &str) -> CmdResult {
    match out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| Failure::Io(format!("writing {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn fmt_metric(v: f64) -> String {
    if v.fract() == 0.0 && v.abs() < 1e15 {
        format!("{}", v as i64)
    } else {
        format!("{v:.2}")
    }
}

fn size_label(n: u64) -> String {
    format!("{n}:{}", n.ilog2())
}

// ---------------------------------------------------------------------------
// Subcommands

fn cmd_generate(spec_args: &SpecArgs, out: Option<&std::path::Path>) -> CmdResult {
    let spec = spec_args.to_spec()?;
    let nl = generate(&spec)?;
    let mut text = nl.to_json();
    text.push('\n');
    deliver(out, &text)
}

fn parse_strategy(name: &str, count: u64, seed: u64) -> Result<Strategy, Failure> {
    match name.to_ascii_lowercase().replace('_', "-").as_str() {
        "exhaustive" => Ok(Strategy::Exhaustive),
        "one-hot" | "onehot" => Ok(Strategy::OneHot),
        "prefix-ones" | "prefix" => Ok(Strategy::PrefixOnes),
        "random" => Ok(Strategy::Random { seed, count }),
        other => Err(usage(format!("unknown strategy '{other}'"))),
    }
}

fn cmd_verify(
    spec_args: &SpecArgs,
    strategy: &str,
    count: u64,
    seed: u64,
    netlist: Option<&std::path::Path>,
    format: &str,
) -> CmdResult {
    let spec = spec_args.to_spec()?;
    let strategy = parse_strategy(strategy, count, seed)?;
    let report = match netlist {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Failure::Io(format!("reading {}: {e}", path.display())))?;
            let nl = Netlist::from_json(&text).map_err(|e| Failure::Io(e.to_string()))?;
            if nl.inputs.len() as u64 != spec.n {
                return Err(usage(format!(
                    "netlist has {} inputs but --n is {}",
                    nl.inputs.len(),
                    spec.n
                )));
            }
            verify_with_oracle(&nl, &strategy, |bits| pencoder::sim::expected(&spec, bits))?
        }
        None => verify(&spec, &strategy)?,
    };
    match format.to_ascii_lowercase().as_str() {
        "json" => {
            let text = serde_json::to_string_pretty(&report)
                .map_err(|e| Failure::Io(e.to_string()))?;
            println!("{text}");
        }
        "table" => {
            println!(
                "tested {} vectors: {} mismatches",
                report.tested,
                report.mismatches.len()
            );
            for mm in report.mismatches.iter().take(10) {
                println!("  input {} expected {} got {}", mm.input_hex, mm.expected, mm.got);
            }
            if report.mismatches.len() > 10 {
                println!("  ... and {} more", report.mismatches.len() - 10);
            }
        }
        other => return Err(usage(format!("unknown format '{other}'"))),
    }
    if report.ok() {
        Ok(())
    } else {
        Err(Failure::Mismatch(format!(
            "{} of {} vectors mismatched",
            report.mismatches.len(),
            report.tested
        )))
    }
}

fn sweep_for(
    tech_name: &str,
    fpga_csv: Option<&std::path::Path>,
    grid: &GridArgs,
    tech_args: &TechArgs,
) -> Result<SweepTable, Failure> {
    match tech_name.to_ascii_lowercase().as_str() {
        "asic" => {
            let tech = tech_args.to_tech()?;
            let cands = grid.candidates()?;
            let ns = grid.widths()?;
            Ok(sweep(&cands, &ns, &tech, tech_args.mode()?))
        }
        "fpga" => {
            let path = fpga_csv.ok_or_else(|| usage("--tech fpga requires --fpga-csv"))?;
            let ingest = ingest_fpga_csv(path)?;
            for d in &ingest.diagnostics {
                eprintln!("note: {d}");
            }
            let metrics = fpga_metrics(&ingest.records);
            Ok(fpga_sweep_table(&metrics))
        }
        other => Err(usage(format!("unknown tech '{other}'"))),
    }
}

fn sweep_table_text(table: &SweepTable) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        "{:<12} {:>8} {:>3} {:>14} {:>10} {:>8} {:>8} {:>8}",
        "arch", "n", "m", "cost", "delay", "or%", "mux%", "pe%"
    );
    for row in &table.rows {
        let m = row.m.map_or(String::new(), |m| m.to_string());
        let _ = writeln!(
            s,
            "{:<12} {:>8} {:>3} {:>14} {:>10} {:>8.2} {:>8.2} {:>8.2}",
            row.arch,
            row.n,
            m,
            fmt_metric(row.cost),
            fmt_metric(row.delay),
            row.or_pct,
            row.mux_pct,
            row.pe_pct
        );
    }
    s
}

fn cmd_analyze(
    tech_name: &str,
    fpga_csv: Option<&std::path::Path>,
    grid: &GridArgs,
    tech_args: &TechArgs,
    format: &str,
    out: Option<&std::path::Path>,
) -> CmdResult {
    let table = sweep_for(tech_name, fpga_csv, grid, tech_args)?;
    for s in &table.skipped {
        eprintln!("note: skipped {s}");
    }
    let text = match format.to_ascii_lowercase().as_str() {
        "csv" => table.to_csv()?,
        "table" => sweep_table_text(&table),
        other => return Err(usage(format!("unknown format '{other}'"))),
    };
    deliver(out, &text)
}

fn recommendations_text(recs: &[Recommendation]) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        "{:<14} {:<12} {:>14}  Co-winners",
        "Size (bits)", "Winner", "Metric"
    );
    for rec in recs {
        let co = if rec.co_winners.is_empty() {
            "-".to_string()
        } else {
            rec.co_winners.join(", ")
        };
        let _ = writeln!(
            s,
            "{:<14} {:<12} {:>14}  {}",
            size_label(rec.n),
            rec.winner,
            fmt_metric(rec.metric),
            co
        );
    }
    s
}

#[allow(clippy::too_many_arguments)]
fn cmd_recommend(
    tech_name: &str,
    fpga_csv: Option<&std::path::Path>,
    objective: &str,
    tolerance: f64,
    grid: &GridArgs,
    tech_args: &TechArgs,
    format: &str,
    out: Option<&std::path::Path>,
) -> CmdResult {
    let objective: Objective = objective.parse()?;
    if !(0.0..1.0).contains(&tolerance) {
        return Err(usage(format!("tolerance must be in [0, 1), got {tolerance}")));
    }
    let table = sweep_for(tech_name, fpga_csv, grid, tech_args)?;
    let recs = recommend(&table, objective, tolerance)?;
    let text = match format.to_ascii_lowercase().as_str() {
        "csv" => recommendations_to_csv(&recs)?,
        "table" => recommendations_text(&recs),
        other => return Err(usage(format!("unknown format '{other}'"))),
    };
    deliver(out, &text)
}

/// Shared scaffolding for `cost` and `delay`: evaluate under both analytical
/// modes, build the netlist when feasible, and cross-check the structural
/// number against it.
struct Evaluation {
    spec: EncoderSpec,
    literal: Option<f64>,
    structural: Option<f64>,
    netlist: Option<f64>,
}

impl Evaluation {
    /// Structural model and netlist must agree exactly when both exist.
    fn cross_check(&self, what: &str) -> CmdResult {
        if let (Some(st), Some(nl)) = (self.structural, self.netlist) {
            if (st - nl).abs() > 1e-9 {
                return Err(Failure::Mismatch(format!(
                    "structural {what} {} disagrees with netlist {what} {}",
                    fmt_metric(st),
                    fmt_metric(nl)
                )));
            }
        }
        Ok(())
    }
}

fn line(label: &str, v: Option<f64>, suffix: &str) -> String {
    match v {
        Some(v) => format!("{label:<24} {}{suffix}\n", fmt_metric(v)),
        None => format!("{label:<24} n/a\n"),
    }
}

fn cmd_cost(
    spec_args: &SpecArgs,
    tech_args: &TechArgs,
    max_netlist_n: u64,
    format: &str,
) -> CmdResult {
    let spec = spec_args.to_spec()?;
    let lit_tech = TechParams {
        mux_model: MuxModel::PaperLiteral,
        ..tech_args.to_tech()?
    };
    let st_tech = TechParams {
        mux_model: MuxModel::Structural,
        ..lit_tech.clone()
    };
    let literal = encoder_cost(&spec, &lit_tech).ok();
    let structural = encoder_cost(&spec, &st_tech).ok();
    let netlist = if spec.n <= max_netlist_n {
        generate(&spec).ok().map(|nl| nl.cost(false) as f64)
    } else {
        None
    };
    let ev = Evaluation {
        spec,
        literal: literal.as_ref().map(|c| c.total),
        structural: structural.as_ref().map(|c| c.total),
        netlist,
    };
    match format.to_ascii_lowercase().as_str() {
        "json" => {
            let doc = serde_json::json!({
                "arch": ev.spec.arch,
                "n": ev.spec.n,
                "m": ev.spec.m,
                "literal": literal,
                "structural": structural,
                "netlist": ev.netlist,
            });
            println!("{}", serde_json::to_string_pretty(&doc).map_err(|e| Failure::Io(e.to_string()))?);
        }
        "table" => {
            let mut s = String::new();
            s.push_str(&line("analytical (literal):", ev.literal, " transistors"));
            if let Some(c) = &literal {
                let _ = writeln!(
                    s,
                    "{:<24} or {:.1}%  mux {:.1}%  sub-encoders {:.1}%",
                    "  breakdown:", c.percent.or_gates, c.percent.muxes, c.percent.sub_encoders
                );
            }
            s.push_str(&line("analytical (structural):", ev.structural, " transistors"));
            s.push_str(&line("netlist:", ev.netlist, " transistors"));
            print!("{s}");
        }
        other => return Err(usage(format!("unknown format '{other}'"))),
    }
    ev.cross_check("cost")
}

fn cmd_delay(
    spec_args: &SpecArgs,
    tech_args: &TechArgs,
    max_netlist_n: u64,
    show_path: bool,
    format: &str,
) -> CmdResult {
    let spec = spec_args.to_spec()?;
    let lit_tech = TechParams {
        mux_model: MuxModel::PaperLiteral,
        ..tech_args.to_tech()?
    };
    let st_tech = TechParams {
        mux_model: MuxModel::Structural,
        ..lit_tech.clone()
    };
    let literal = encoder_delay(&spec, &lit_tech).ok();
    let structural = encoder_delay(&spec, &st_tech).ok();
    let report = if spec.n <= max_netlist_n {
        generate(&spec).ok().map(|nl| longest_path(&nl, &st_tech, false))
    } else {
        None
    };
    let ev = Evaluation {
        spec,
        literal,
        structural,
        netlist: report.as_ref().map(|r| r.total),
    };
    match format.to_ascii_lowercase().as_str() {
        "json" => {
            let doc = serde_json::json!({
                "arch": ev.spec.arch,
                "n": ev.spec.n,
                "m": ev.spec.m,
                "literal": ev.literal,
                "structural": ev.structural,
                "netlist": report,
            });
            println!("{}", serde_json::to_string_pretty(&doc).map_err(|e| Failure::Io(e.to_string()))?);
        }
        "table" => {
            let mut s = String::new();
            s.push_str(&line("analytical (literal):", ev.literal, ""));
            s.push_str(&line("analytical (structural):", ev.structural, ""));
            s.push_str(&line("netlist longest path:", ev.netlist, ""));
            if let Some(r) = &report {
                let _ = writeln!(s, "{:<24} {} cells", "  path depth:", r.path.len());
                if show_path {
                    for step in &r.path {
                        let _ = writeln!(
                            s,
                            "    cell {:>6}  {:<6} +{}",
                            step.cell,
                            step.kind.name(),
                            fmt_metric(step.normalized)
                        );
                    }
                }
            }
            print!("{s}");
        }
        other => return Err(usage(format!("unknown format '{other}'"))),
    }
    ev.cross_check("delay")
}

fn cmd_emit(spec_args: &SpecArgs, dialect: &str, out: Option<&std::path::Path>) -> CmdResult {
    let spec = spec_args.to_spec()?;
    let nl = generate(&spec)?;
    let dialects: Vec<Dialect> = match dialect.to_ascii_lowercase().as_str() {
        "both" => vec![Dialect::Vhdl, Dialect::Verilog],
        other => vec![other.parse()?],
    };
    match out {
        Some(dir) => {
            std::fs::create_dir_all(dir)
                .map_err(|e| Failure::Io(format!("creating {}: {e}", dir.display())))?;
            for d in dialects {
                let text = emit(&nl, d)?;
                let path = dir.join(file_name(&nl, d));
                std::fs::write(&path, text)
                    .map_err(|e| Failure::Io(format!("writing {}: {e}", path.display())))?;
                println!("{}", path.display());
            }
            Ok(())
        }
        None => {
            if dialects.len() > 1 {
                return Err(usage("--dialect both requires --out <dir>"));
            }
            let text = emit(&nl, dialects[0])?;
            print!("{text}");
            Ok(())
        }
    }
}

fn cmd_fpga(csv: &std::path::Path, format: &str, out: Option<&std::path::Path>) -> CmdResult {
    let ingest = ingest_fpga_csv(csv)?;
    for d in &ingest.diagnostics {
        eprintln!("note: {d}");
    }
    let metrics = fpga_metrics(&ingest.records);
    let table = fpga_sweep_table(&metrics);
    let scored = rcdp(&table)?;
    let text = match format.to_ascii_lowercase().as_str() {
        "csv" => {
            let mut s = String::from("arch,n,lut_n,adjusted_delay,rel_cost,rel_delay,rcdp\n");
            for row in &scored {
                let _ = writeln!(
                    s,
                    "{},{},{},{},{:.4},{:.4},{:.4}",
                    row.arch,
                    row.n,
                    fmt_metric(row.cost),
                    fmt_metric(row.delay),
                    row.rel_cost,
                    row.rel_delay,
                    row.rcdp
                );
            }
            s
        }
        "table" => {
            let mut s = String::new();
            let _ = writeln!(
                s,
                "{:<12} {:>8} {:>8} {:>10} {:>9} {:>9} {:>8}",
                "arch", "n", "LUT_N", "delay", "relCost", "relDelay", "RCDP"
            );
            for row in &scored {
                let _ = writeln!(
                    s,
                    "{:<12} {:>8} {:>8} {:>10} {:>9.3} {:>9.3} {:>8.3}",
                    row.arch,
                    row.n,
                    fmt_metric(row.cost),
                    fmt_metric(row.delay),
                    row.rel_cost,
                    row.rel_delay,
                    row.rcdp
                );
            }
            s
        }
        other => return Err(usage(format!("unknown format '{other}'"))),
    };
    deliver(out, &text)
}

fn cmd_tables(tech_args: &TechArgs) -> CmdResult {
    let tech = tech_args.to_tech()?;
    let table = sweep(&default_candidates(), &default_n_grid(), &tech, tech_args.mode()?);
    let sections = [
        ("Lowest transistor count", Objective::Complexity),
        ("Lowest delay", Objective::Delay),
        ("Best balanced cost-delay (RCDP)", Objective::Balanced),
    ];
    for (i, (title, objective)) in sections.iter().enumerate() {
        let recs = recommend(&table, *objective, DEFAULT_TIE_TOLERANCE)?;
        if i > 0 {
            println!();
        }
        println!("{title}");
        println!("{:<14} Architecture", "Size (bits)");
        for rec in &recs {
            let label = if rec.co_winners.is_empty() {
                rec.winner.clone()
            } else {
                format!("{} ({})", rec.winner, rec.co_winners.join(", "))
            };
            println!("{:<14} {label}", size_label(rec.n));
        }
    }
    Ok(())
}
