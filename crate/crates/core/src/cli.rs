//! Command-line front end. [`run`] parses arguments, executes one command and
//! returns the process exit code, writing to caller-supplied streams.
//!
//! Exit codes: 0 ok or certified, 1 negative verdict, 2 usage, 3 bad input,
//! 4 solver failure, 5 dimension cap, 6 unknown verdict.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::norms::{
    self, default_maps, is_k_block_positive, sk_lower_bound_seesaw, sk_norm_bounds_with, sk_upper_bound,
    SeesawOptions, Verdict,
};
use crate::qops::{load_operator, reduction_map, reduction_map_k, transpose_map, BipartiteDims, HermitianOperator};
use crate::qops::MapRep;
use crate::rng;
use crate::schmidt::schmidt_decompose;
use crate::sdp::{SolveStatus, SolverOptions};
use crate::states::{self, DEFAULT_DIM_CAP};

pub const EXIT_OK: i32 = 0;
pub const EXIT_NEGATIVE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_BAD_INPUT: i32 = 3;
pub const EXIT_SOLVER: i32 = 4;
pub const EXIT_CAP: i32 = 5;
pub const EXIT_UNKNOWN: i32 = 6;

/// Largest joint dimension for which `proj` runs the S(1) SDP; the see-saw and
/// closed forms are reported above it.
pub const PROJ_SDP_DIM_CAP: usize = 100;

#[derive(Debug, Parser)]
#[command(name = "schmidt-norms", version, about = "Schmidt-restricted operator norms via semidefinite programming")]
pub struct Cli {
    /// Output format.
    #[arg(long, value_enum, global = true, default_value_t = Format::Text)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MapChoice {
    /// Transpose and reduction for k = 1, the k-positive reduction map otherwise.
    Auto,
    Transpose,
    Reduction,
    Both,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Bracket ‖X‖_{S(k)} for an operator read from a JSON file.
    Norm {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value_t = 1)]
        k: usize,
        #[arg(long, value_enum, default_value_t = MapChoice::Auto)]
        maps: MapChoice,
        #[arg(long, default_value_t = 20)]
        restarts: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Exact and SDP values of the S(1) norm of four Werner states.
    WernerTable,
    /// Per-sample eigenvalues and norm values of Bures-random states, as CSV.
    BuresDist {
        #[arg(long, value_parser = ["4", "9"])]
        dim: String,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Norms of the recursive projection family.
    Proj {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        r: usize,
    },
    /// r-undistillability thresholds of Werner states.
    Undistill {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        r: usize,
        #[arg(long, allow_hyphen_values = true)]
        alpha: Option<f64>,
    },
    /// Decide k-block positivity of a Hermitian operator read from a JSON file.
    CheckBp {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value_t = 1)]
        k: usize,
        #[arg(long, default_value_t = 20)]
        restarts: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// S(1) brackets of random projections against sqrt(rank / n^(2+eps)).
    Brandao {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        rank: usize,
        #[arg(long, default_value_t = 0.99)]
        eps: f64,
        #[arg(long, default_value_t = 10)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

/// Accumulated solver statistics for the JSON report.
#[derive(Debug, Clone, Serialize)]
struct SolverSummary {
    tol: f64,
    iterations: usize,
    status: String,
}

impl SolverSummary {
    fn none() -> Self {
        Self { tol: SolverOptions::default().tol, iterations: 0, status: "NotRun".into() }
    }

    fn record(&mut self, report: Option<norms::SolverReport>) {
        if let Some(r) = report {
            self.tol = r.tol;
            self.iterations += r.iterations;
            if self.status == "NotRun" || r.status != SolveStatus::Optimal {
                self.status = format!("{:?}", r.status);
            }
        }
    }
}

struct Outcome {
    code: i32,
    text: String,
    inputs: Value,
    results: Value,
    solver: SolverSummary,
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::DimensionCap { .. } => EXIT_CAP,
        Error::Solver(_) => EXIT_SOLVER,
        Error::InvalidParameter(_) | Error::EmptyMapSet => EXIT_USAGE,
        _ => EXIT_BAD_INPUT,
    }
}

/// Full round-trip precision for machine-readable columns.
pub fn sig17(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        x.to_string()
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let rendered = e.render().to_string();
            let _ = if code == EXIT_OK { out.write_all(rendered.as_bytes()) } else { err.write_all(rendered.as_bytes()) };
            return code;
        }
    };
    let name = command_name(&cli.command);
    match execute(&cli.command) {
        Ok(o) => {
            let written = match cli.format {
                Format::Text => out.write_all(o.text.as_bytes()),
                Format::Json => {
                    let doc = json!({ "command": name, "inputs": o.inputs, "results": o.results, "solver": o.solver });
                    writeln!(out, "{}", serde_json::to_string_pretty(&doc).expect("serializable"))
                }
            };
            if let Err(e) = written {
                let _ = writeln!(err, "error: {e}");
                return EXIT_BAD_INPUT;
            }
            o.code
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

/// Convenience wrapper capturing stdout and stderr as strings.
pub fn run_captured<I, T>(args: I) -> (i32, String, String)
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = run(args, &mut out, &mut err);
    (code, String::from_utf8_lossy(&out).into_owned(), String::from_utf8_lossy(&err).into_owned())
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Norm { .. } => "norm",
        Command::WernerTable => "werner-table",
        Command::BuresDist { .. } => "bures-dist",
        Command::Proj { .. } => "proj",
        Command::Undistill { .. } => "undistill",
        Command::CheckBp { .. } => "check-bp",
        Command::Brandao { .. } => "brandao",
    }
}

fn execute(c: &Command) -> Result<Outcome> {
    match c {
        Command::Norm { input, k, maps, restarts, seed } => cmd_norm(input, *k, *maps, *restarts, *seed),
        Command::WernerTable => cmd_werner_table(),
        Command::BuresDist { dim, samples, seed, out } => {
            cmd_bures_dist(dim.parse().expect("validated by clap"), *samples, *seed, out.as_deref())
        }
        Command::Proj { n, r } => cmd_proj(*n, *r),
        Command::Undistill { n, r, alpha } => cmd_undistill(*n, *r, *alpha),
        Command::CheckBp { input, k, restarts, seed } => cmd_check_bp(input, *k, *restarts, *seed),
        Command::Brandao { n, rank, eps, trials, seed } => cmd_brandao(*n, *rank, *eps, *trials, *seed),
    }
}

fn operator_dims(x: &HermitianOperator) -> Result<BipartiteDims> {
    x.dims().ok_or_else(|| Error::DimensionMismatch("input carries no bipartite split".into()))
}

fn choose_maps(choice: MapChoice, k: usize, m: usize) -> Result<Vec<MapRep>> {
    if k >= m {
        return Ok(default_maps(k, m));
    }
    let one_positive_only = || {
        Error::InvalidParameter(format!("the transpose map is only 1-positive and cannot bound S({k})"))
    };
    Ok(match choice {
        MapChoice::Auto => default_maps(k, m),
        MapChoice::Reduction if k == 1 => vec![reduction_map(m)],
        MapChoice::Reduction => vec![reduction_map_k(m, k)],
        MapChoice::Transpose if k == 1 => vec![transpose_map(m)],
        MapChoice::Both if k == 1 => vec![transpose_map(m), reduction_map(m)],
        MapChoice::Transpose | MapChoice::Both => return Err(one_positive_only()),
    })
}

fn cmd_norm(input: &std::path::Path, k: usize, maps: MapChoice, restarts: usize, seed: u64) -> Result<Outcome> {
    let x = load_operator(input)?;
    let dims = operator_dims(&x)?;
    let maps = choose_maps(maps, k, dims.m)?;
    let seesaw = SeesawOptions { restarts, seed, ..SeesawOptions::default() };
    let b = sk_norm_bounds_with(&x, k, dims, &maps, &seesaw, &SolverOptions::default())?;
    let coeffs = match &b.lower_witness {
        Some(w) => schmidt_decompose(w)?.coeffs,
        None => vec![],
    };
    let lambda = b.upper_certificate.as_ref().map(|c| c.lambda);
    let mut solver = SolverSummary::none();
    solver.record(b.solver);

    let mut text = String::new();
    let _ = writeln!(text, "dims      {dims}");
    let _ = writeln!(text, "k         {k}");
    let _ = writeln!(text, "maps      {}", b.maps_used.join(", "));
    let _ = writeln!(text, "lower     {:.10}", b.lower);
    let _ = writeln!(text, "upper     {:.10}", b.upper);
    let _ = writeln!(text, "gap       {:.3e}", b.gap());
    match lambda {
        Some(l) => _ = writeln!(text, "lambda    {l:.10}"),
        None => _ = writeln!(text, "lambda    (spectral, no certificate)"),
    }
    let shown: Vec<String> = coeffs.iter().map(|c| format!("{c:.6}")).collect();
    let _ = writeln!(text, "witness   schmidt coefficients [{}]", shown.join(", "));

    Ok(Outcome {
        code: EXIT_OK,
        text,
        inputs: json!({ "input": input, "k": k, "dims": dims, "restarts": restarts, "seed": seed }),
        results: json!({
            "lower": b.lower,
            "upper": b.upper,
            "gap": b.gap(),
            "certificate_lambda": lambda,
            "maps": b.maps_used,
            "witness_schmidt_coefficients": coeffs,
        }),
        solver,
    })
}

/// One row of the Werner table.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WernerRow {
    pub n: usize,
    pub alpha: f64,
    pub exact: f64,
    pub transpose: f64,
    pub reduction: f64,
}

pub const WERNER_TABLE_CASES: [(usize, f64); 4] = [(2, 0.5), (2, -0.5), (3, 0.5), (3, -0.5)];

/// Exact S(1) norm and the transpose and reduction SDP bounds for the four table rows.
pub fn werner_table() -> Result<Vec<WernerRow>> {
    werner_table_with_iterations().map(|(rows, _)| rows)
}

fn werner_table_with_iterations() -> Result<(Vec<WernerRow>, SolverSummary)> {
    let mut solver = SolverSummary::none();
    let mut rows = Vec::new();
    for (n, alpha) in WERNER_TABLE_CASES {
        let x = states::werner(n, alpha)?;
        let dims = BipartiteDims::new(n, n)?;
        let t = sk_upper_bound(&x, &[transpose_map(n)], dims)?;
        let r = sk_upper_bound(&x, &[reduction_map(n)], dims)?;
        solver.record(t.solver);
        solver.record(r.solver);
        rows.push(WernerRow { n, alpha, exact: states::werner_norm_exact(n, alpha, 1)?, transpose: t.value, reduction: r.value });
    }
    Ok((rows, solver))
}

fn cmd_werner_table() -> Result<Outcome> {
    let (rows, solver) = werner_table_with_iterations()?;
    let mut text = String::from("n,alpha,exact,transpose,reduction\n");
    for r in &rows {
        let _ = writeln!(text, "{},{},{:.4},{:.4},{:.4}", r.n, r.alpha, r.exact, r.transpose, r.reduction);
    }
    Ok(Outcome { code: EXIT_OK, text, inputs: json!({}), results: serde_json::to_value(&rows)?, solver })
}

/// Values recorded for one Bures sample. Norm columns are `None` when the solver failed.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BuresRow {
    pub sample: usize,
    /// Ascending.
    pub eigenvalues: Vec<f64>,
    pub s1_lower: Option<f64>,
    pub s1_upper: Option<f64>,
    pub s2_lower: Option<f64>,
    pub s2_upper: Option<f64>,
}

/// Sample `index` of the stream with base `seed`: dim 4 uses the exact 2⊗2 value
/// (both bounds equal it), dim 9 brackets S(1) and S(2) by see-saw and SDP.
pub fn bures_row(dim: usize, seed: u64, index: usize) -> Result<BuresRow> {
    let side = match dim {
        4 => 2,
        9 => 3,
        _ => return Err(Error::InvalidParameter(format!("dim must be 4 or 9, got {dim}"))),
    };
    let dims = BipartiteDims::new(side, side)?;
    let mut stream = rng::substream(seed, index as u64);
    let rho = states::bures_sample_with(dim, &mut stream);
    let eigenvalues = rho.eigenvalues();
    let mut row = BuresRow { sample: index, eigenvalues, s1_lower: None, s1_upper: None, s2_lower: None, s2_upper: None };
    let seesaw = SeesawOptions { seed: seed ^ (index as u64).rotate_left(32), ..SeesawOptions::default() };
    if dim == 4 {
        if let Ok(v) = norms::sk_exact_small(&rho, dims) {
            row.s1_lower = Some(v);
            row.s1_upper = Some(v);
        }
        return Ok(row);
    }
    let opts = SolverOptions::default();
    if let Ok(b) = sk_norm_bounds_with(&rho, 1, dims, &default_maps(1, 3), &seesaw, &opts) {
        row.s1_lower = Some(b.lower);
        row.s1_upper = Some(b.upper);
    }
    if let Ok(b) = sk_norm_bounds_with(&rho, 2, dims, &default_maps(2, 3), &seesaw, &opts) {
        row.s2_lower = Some(b.lower);
        row.s2_upper = Some(b.upper);
    }
    Ok(row)
}

fn bures_csv(dim: usize, rows: &[BuresRow]) -> String {
    let mut s = String::from("sample");
    for i in 1..=dim {
        let _ = write!(s, ",lambda_{i}");
    }
    s.push_str(if dim == 4 { ",s1\n" } else { ",s1_lower,s1_upper,s2_lower,s2_upper\n" });
    let cell = |v: Option<f64>| v.map(sig17).unwrap_or_default();
    for r in rows {
        let _ = write!(s, "{}", r.sample);
        for e in &r.eigenvalues {
            let _ = write!(s, ",{}", sig17(*e));
        }
        if dim == 4 {
            let _ = writeln!(s, ",{}", cell(r.s1_upper));
        } else {
            let _ = writeln!(s, ",{},{},{},{}", cell(r.s1_lower), cell(r.s1_upper), cell(r.s2_lower), cell(r.s2_upper));
        }
    }
    s
}

fn cmd_bures_dist(dim: usize, samples: usize, seed: u64, out: Option<&std::path::Path>) -> Result<Outcome> {
    if samples == 0 {
        return Err(Error::InvalidParameter("samples must be at least 1".into()));
    }
    let rows = (0..samples).map(|i| bures_row(dim, seed, i)).collect::<Result<Vec<_>>>()?;
    let failed = rows.iter().filter(|r| r.s1_upper.is_none() || (dim == 9 && r.s2_upper.is_none())).count();
    let csv = bures_csv(dim, &rows);
    let code = if failed * 100 > samples { EXIT_SOLVER } else { EXIT_OK };
    let text = match out {
        Some(path) => {
            std::fs::write(path, &csv)?;
            format!("wrote {samples} rows to {} ({failed} solver failures)\n", path.display())
        }
        None => csv,
    };
    if code == EXIT_SOLVER {
        return Err(Error::Solver(SolveStatus::NumericalFailure));
    }
    Ok(Outcome {
        code,
        text,
        inputs: json!({ "dim": dim, "samples": samples, "seed": seed, "out": out }),
        results: json!({ "failed": failed, "rows": rows }),
        solver: SolverSummary::none(),
    })
}

fn cmd_proj(n: usize, r: usize) -> Result<Outcome> {
    let p = states::proj_family_with_cap(n, r, DEFAULT_DIM_CAP)?;
    let dims = p.dims();
    let s1_exact = states::proj_s1_exact(n, r);
    let mut solver = SolverSummary::none();
    let s1 = if dims.total() <= PROJ_SDP_DIM_CAP {
        let b = sk_upper_bound(&p.matrix, &[transpose_map(dims.m)], dims)?;
        solver.record(b.solver);
        Some(b.value)
    } else {
        None
    };
    let s2_upper = states::proj_s2_upper(n, r);
    let s2_lower = sk_lower_bound_seesaw(&p.matrix, 2, dims, &SeesawOptions::default())?.value;
    let mut text = String::new();
    let _ = writeln!(text, "dims              {dims}");
    let _ = writeln!(text, "rank              {}", p.rank());
    let _ = writeln!(text, "S(1) closed form  {s1_exact:.6}");
    match s1 {
        Some(v) => _ = writeln!(text, "S(1) SDP upper    {v:.6}"),
        None => _ = writeln!(text, "S(1) SDP upper    skipped (dimension above {PROJ_SDP_DIM_CAP})"),
    }
    let _ = writeln!(text, "S(2) upper        {s2_upper:.6}");
    let _ = writeln!(text, "S(2) lower        {s2_lower:.6}");
    Ok(Outcome {
        code: EXIT_OK,
        text,
        inputs: json!({ "n": n, "r": r }),
        results: json!({
            "rank": p.rank(),
            "s1_exact": s1_exact,
            "s1_sdp_upper": s1,
            "s2_upper": s2_upper,
            "s2_seesaw_lower": s2_lower,
        }),
        solver,
    })
}

fn cmd_undistill(n: usize, r: usize, alpha: Option<f64>) -> Result<Outcome> {
    if n < 2 || r < 1 {
        return Err(Error::InvalidParameter(format!("need n >= 2 and r >= 1, got n={n}, r={r}")));
    }
    let p = states::p_value(n, r);
    let threshold = states::undistill_threshold(n, r);
    let simple = states::undistill_threshold_simple(n, r);
    let mut text = String::new();
    let _ = writeln!(text, "p                 {p:.6}");
    match threshold {
        Some(t) => _ = writeln!(text, "threshold         {t:.6}"),
        None => _ = writeln!(text, "threshold         none (p < 1)"),
    }
    let _ = writeln!(text, "simple threshold  {simple:.6}");
    let mut results = json!({ "p": p, "threshold": threshold, "simple_threshold": simple });
    let mut code = EXIT_OK;
    if let Some(a) = alpha {
        let report = states::check_r_undistillable(n, r, a)?;
        let _ = writeln!(text, "alpha {a}: {}", if report.certified { "certified" } else { "not certified" });
        results["certified"] = json!(report.certified);
        if !report.certified {
            code = EXIT_NEGATIVE;
        }
    }
    Ok(Outcome { code, text, inputs: json!({ "n": n, "r": r, "alpha": alpha }), results, solver: SolverSummary::none() })
}

fn cmd_check_bp(input: &std::path::Path, k: usize, restarts: usize, seed: u64) -> Result<Outcome> {
    let y = load_operator(input).map_err(|e| match e {
        Error::Json(_) | Error::Io(_) | Error::DimensionMismatch(_) => Error::InvalidParameter(e.to_string()),
        other => other,
    })?;
    let dims = operator_dims(&y)?;
    let seesaw = SeesawOptions { restarts, seed, ..SeesawOptions::default() };
    let tight = SolverOptions::with_tol(1e-10);
    let cert = match is_k_block_positive(&y, k, dims, &seesaw, &tight) {
        Err(Error::Solver(_)) => is_k_block_positive(&y, k, dims, &seesaw, &SolverOptions::default())?,
        other => other?,
    };
    let code = match cert.verdict {
        Verdict::CertifiedYes => EXIT_OK,
        Verdict::CertifiedNo => EXIT_NEGATIVE,
        Verdict::Unknown => EXIT_UNKNOWN,
    };
    let mut text = String::new();
    let _ = writeln!(text, "verdict   {:?}", cert.verdict);
    let _ = writeln!(text, "shift c   {:.10}", cert.shift);
    let _ = writeln!(text, "upper     {:.10}", cert.upper);
    let _ = writeln!(text, "lower     {:.10}", cert.lower);
    let witness: Option<Vec<[f64; 2]>> =
        cert.witness.as_ref().map(|w| w.amplitudes().iter().map(|z| [z.re, z.im]).collect());
    if let (Some(w), Some(v)) = (&cert.witness, cert.witness_value) {
        let _ = writeln!(text, "witness   <v|Y|v> = {v:.10}");
        for (i, z) in w.amplitudes().iter().enumerate() {
            let _ = writeln!(text, "  v[{i}] = {:+.8} {:+.8}i", z.re, z.im);
        }
    }
    Ok(Outcome {
        code,
        text,
        inputs: json!({ "input": input, "k": k, "dims": dims, "restarts": restarts, "seed": seed }),
        results: json!({
            "verdict": cert.verdict,
            "shift": cert.shift,
            "upper": cert.upper,
            "lower": cert.lower,
            "witness": witness,
            "witness_value": cert.witness_value,
        }),
        solver: SolverSummary::none(),
    })
}

/// One trial of the projection comparison.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BrandaoRow {
    pub trial: usize,
    pub s1_lower: f64,
    pub s1_upper: f64,
    pub rhs: f64,
}

pub fn brandao_rows(n: usize, rank: usize, eps: f64, trials: usize, seed: u64) -> Result<Vec<BrandaoRow>> {
    let rhs = states::brandao_rhs(n, rank, eps)?;
    let dims = BipartiteDims::new(n, n)?;
    if dims.total() > DEFAULT_DIM_CAP {
        return Err(Error::DimensionCap { dim: dims.total(), cap: DEFAULT_DIM_CAP });
    }
    (0..trials)
        .map(|trial| {
            let mut stream = rng::substream(seed, trial as u64);
            let p = rng::random_projection(dims.total(), rank, &mut stream);
            let seesaw = SeesawOptions { seed: seed.wrapping_add(trial as u64), ..SeesawOptions::default() };
            let b = sk_norm_bounds_with(&p, 1, dims, &default_maps(1, n), &seesaw, &SolverOptions::default())?;
            Ok(BrandaoRow { trial, s1_lower: b.lower, s1_upper: b.upper, rhs })
        })
        .collect()
}

fn cmd_brandao(n: usize, rank: usize, eps: f64, trials: usize, seed: u64) -> Result<Outcome> {
    let rows = brandao_rows(n, rank, eps, trials, seed)?;
    let mut text = String::from("trial,s1_lower,s1_upper,rhs\n");
    for r in &rows {
        let _ = writeln!(text, "{},{},{},{}", r.trial, sig17(r.s1_lower), sig17(r.s1_upper), sig17(r.rhs));
    }
    Ok(Outcome {
        code: EXIT_OK,
        text,
        inputs: json!({ "n": n, "rank": rank, "eps": eps, "trials": trials, "seed": seed }),
        results: serde_json::to_value(&rows)?,
        solver: SolverSummary::none(),
    })
}
