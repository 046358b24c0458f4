//! Command-line front end. Every command renders its report as text, JSON
//! or CSV from the same values.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::code::{CssCode, VerificationReport};
use crate::decoder::Decoder;
use crate::distance::{prove_distance, DistanceProof, DistanceReport};
use crate::error::Error;
use crate::montecarlo::{run_point, TrialStats};

pub const WORKERS_ENV: &str = "FCC_QEC_WORKERS";

/// Physical error rates of the reference sweep.
pub const DEFAULT_SWEEP: [f64; 6] = [0.0005, 0.001, 0.002, 0.005, 0.01, 0.02];

#[derive(Debug, Parser)]
#[command(name = "fcc-qec", version, about = "FCC-lattice CSS code: parameters, distance proof and MWPM decoding")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Debug, Args)]
pub struct Common {
    /// Lattice side length (even, at least 4).
    #[arg(short = 'L', long = "L", default_value_t = 4)]
    pub size: usize,

    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,

    /// Also write the lattice geometry as JSON to this file.
    #[arg(long, value_name = "FILE")]
    pub dump_lattice: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SimArgs {
    /// Comma-separated physical error rates.
    #[arg(long = "p", value_delimiter = ',')]
    pub p_list: Option<Vec<f64>>,

    #[arg(long, default_value_t = 1000)]
    pub trials: u64,

    #[arg(long, default_value_t = 42)]
    pub seed: u64,

    /// Worker threads; defaults to all cores. Has no effect on results.
    #[arg(long, env = WORKERS_ENV)]
    pub workers: Option<usize>,

    /// Fill the wall_time column (otherwise left empty so output is reproducible).
    #[arg(long)]
    pub timing: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ExportWhat {
    Lattice,
    Hz,
    Hx,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Code parameters n, ranks, k and rate.
    Params(#[command(flatten)] Common),
    /// Check CSS validity, stabilizer weights, ranks and k; nonzero exit on failure.
    Verify(#[command(flatten)] Common),
    /// Certify the minimum distance.
    Distance {
        #[command(flatten)]
        common: Common,
        /// Also count weight-3 logicals over the whole kernel.
        #[arg(long)]
        full_w3: bool,
    },
    /// Monte Carlo block logical error rate (default p = 0.001).
    Decode {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        sim: SimArgs,
    },
    /// Monte Carlo over the reference grid of error rates.
    Sweep {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        sim: SimArgs,
    },
    /// Encoding-rate comparison with literature values.
    Compare {
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Geometry as JSON, or a check matrix in sparse text form.
    Export {
        #[arg(short = 'L', long = "L", default_value_t = 4)]
        size: usize,
        #[arg(long, value_enum, default_value_t = ExportWhat::Lattice)]
        what: ExportWhat,
    },
}

/// Rendered command output and process exit code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub exit_code: i32,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Self {
            stdout,
            stderr: String::new(),
            exit_code: 0,
        }
    }

    fn error(msg: impl std::fmt::Display, code: i32) -> Self {
        Self {
            stdout: String::new(),
            stderr: format!("error: {msg}\n"),
            exit_code: code,
        }
    }
}

/// Floats rounded to 6 significant digits.
pub fn sig6(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let magnitude = x.abs().log10().floor() as i32;
    let decimals = (5 - magnitude).max(0) as usize;
    let s = format!("{x:.decimals$}");
    // re-parse to drop trailing zeros
    let v: f64 = s.parse().expect("formatted float");
    format!("{v}")
}

fn opt_sig6(x: Option<f64>) -> String {
    x.map(sig6).unwrap_or_default()
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports serialize");
    s.push('\n');
    s
}

fn csv_kv(rows: &[(String, String)]) -> String {
    let mut out = String::from("key,value\n");
    for (k, v) in rows {
        let _ = writeln!(out, "{k},{v}");
    }
    out
}

fn build_code(common: &Common) -> Result<CssCode, Outcome> {
    let code = CssCode::from_size(common.size).map_err(|e| match e {
        Error::InvalidLatticeSize(_) => Outcome::error(e, 2),
        other => Outcome::error(other, 1),
    })?;
    if let Some(path) = &common.dump_lattice {
        std::fs::write(path, to_json(&code.lattice().export()))
            .map_err(|e| Outcome::error(format!("cannot write {}: {e}", path.display()), 1))?;
    }
    Ok(code)
}

#[derive(Debug, Serialize)]
pub struct ParamsReport {
    #[serde(rename = "L")]
    pub lattice_size: usize,
    pub n: usize,
    pub rank_z: usize,
    pub rank_x: usize,
    pub k: usize,
    pub rate: f64,
    pub predicted_k: usize,
    pub k_matches_prediction: bool,
}

impl ParamsReport {
    pub fn of(code: &CssCode) -> Self {
        Self {
            lattice_size: code.lattice().size(),
            n: code.n(),
            rank_z: code.rank_z(),
            rank_x: code.rank_x(),
            k: code.k(),
            rate: code.rate(),
            predicted_k: code.predicted_k(),
            k_matches_prediction: code.k() == code.predicted_k(),
        }
    }

    fn render(&self, format: Format) -> String {
        match format {
            Format::Json => to_json(self),
            Format::Csv => format!(
                "L,n,rank_z,rank_x,k,rate,predicted_k,k_matches_prediction\n{},{},{},{},{},{},{},{}\n",
                self.lattice_size,
                self.n,
                self.rank_z,
                self.rank_x,
                self.k,
                sig6(self.rate),
                self.predicted_k,
                self.k_matches_prediction
            ),
            Format::Text => format!(
                "L={}  n={}  rk(H_Z)={}  rk(H_X)={}  k={}  rate={:.1}%\n\
                 predicted k = 2L^3+2 = {} ({})\n",
                self.lattice_size,
                self.n,
                self.rank_z,
                self.rank_x,
                self.k,
                100.0 * self.rate,
                self.predicted_k,
                if self.k_matches_prediction { "match" } else { "MISMATCH" }
            ),
        }
    }
}

fn render_verify(r: &VerificationReport, format: Format) -> String {
    match format {
        Format::Json => {
            #[derive(Serialize)]
            struct WithFailures<'a> {
                #[serde(flatten)]
                report: &'a VerificationReport,
                failures: Vec<String>,
            }
            to_json(&WithFailures {
                report: r,
                failures: r.failures(),
            })
        }
        Format::Csv => {
            let mut rows = vec![
                ("L".to_string(), r.lattice_size.to_string()),
                ("n".to_string(), r.n.to_string()),
                ("css_valid".to_string(), r.css_valid.to_string()),
            ];
            for (name, s) in [("h_z", &r.h_z), ("h_x", &r.h_x)] {
                for (field, value) in [
                    ("rank", s.rank),
                    ("min_row_weight", s.min_row_weight),
                    ("max_row_weight", s.max_row_weight),
                    ("min_col_weight", s.min_col_weight),
                    ("max_col_weight", s.max_col_weight),
                ] {
                    rows.push((format!("{name}_{field}"), value.to_string()));
                }
            }
            for (key, value) in [
                ("k", r.k.to_string()),
                ("rate", sig6(r.rate)),
                ("predicted_k", r.predicted_k.to_string()),
                ("k_matches_prediction", r.k_matches_prediction.to_string()),
                ("z_global_relation", r.z_global_relation.to_string()),
                ("x_global_relation", r.x_global_relation.to_string()),
            ] {
                rows.push((key.to_string(), value));
            }
            csv_kv(&rows)
        }
        Format::Text => {
            let mut out = String::new();
            let _ = writeln!(out, "L={}  n={}", r.lattice_size, r.n);
            let _ = writeln!(out, "CSS valid: {}", r.css_valid);
            for (name, s) in [("H_Z", &r.h_z), ("H_X", &r.h_x)] {
                let _ = writeln!(
                    out,
                    "{name}: {} rows, rank {}, row weights {}..{}, column weights {}..{}",
                    s.rows, s.rank, s.min_row_weight, s.max_row_weight, s.min_col_weight, s.max_col_weight
                );
            }
            let _ = writeln!(
                out,
                "k = {}  rate = {:.3}  (2L^3+2 = {}, {})",
                r.k,
                r.rate,
                r.predicted_k,
                if r.k_matches_prediction { "match" } else { "MISMATCH" }
            );
            let _ = writeln!(
                out,
                "global relation (all rows sum to zero, rank = rows - 1): H_Z {}, H_X {}",
                r.z_global_relation, r.x_global_relation
            );
            let failures = r.failures();
            if failures.is_empty() {
                out.push_str("all claims hold\n");
            } else {
                for f in failures {
                    let _ = writeln!(out, "FAILED: {f}");
                }
            }
            out
        }
    }
}

fn histogram_text(r: &DistanceReport) -> String {
    r.kernel_weight_histogram
        .iter()
        .map(|(w, c)| format!("{w}:{c}"))
        .collect::<Vec<_>>()
        .join(" ")
}

fn render_distance(p: &DistanceProof, format: Format) -> String {
    let d = |x: Option<u32>| x.map(|v| v.to_string()).unwrap_or_else(|| "unproven".into());
    match format {
        Format::Json => to_json(p),
        Format::Csv => {
            let mut out = String::from(
                "L,side,n,kernel_dim,weight1_kernel,weight2_kernel,pairs_checked,weight3_logicals,full_weight3_logicals,histogram,d_side\n",
            );
            for (r, ds) in [(&p.z, p.d_z), (&p.x, p.d_x)] {
                let _ = writeln!(
                    out,
                    "{},{:?},{},{},{},{},{},{},{},{},{}",
                    p.lattice_size,
                    r.side,
                    r.n,
                    r.kernel_dim,
                    r.weight1_kernel_count,
                    r.weight2_kernel_count,
                    r.pairs_checked,
                    r.weight3_logical_count,
                    r.full_weight3_logicals.map(|v| v.to_string()).unwrap_or_default(),
                    histogram_text(r),
                    d(ds)
                );
            }
            out
        }
        Format::Text => {
            let mut out = String::new();
            let _ = writeln!(out, "L={}  n={}", p.lattice_size, p.z.n);
            for (r, ds) in [(&p.z, p.d_z), (&p.x, p.d_x)] {
                let _ = writeln!(
                    out,
                    "  {:?}: weight-1 in kernel = {}, weight-2 in kernel = {} ({} pairs checked)",
                    r.side, r.weight1_kernel_count, r.weight2_kernel_count, r.pairs_checked
                );
                let _ = writeln!(
                    out,
                    "  {:?}: {} weight-3 logicals among {} kernel basis vectors",
                    r.side, r.weight3_logical_count, r.kernel_dim
                );
                if let Some(full) = r.full_weight3_logicals {
                    let _ = writeln!(out, "  {:?}: {} weight-3 logicals in the whole kernel", r.side, full);
                }
                let _ = writeln!(out, "  {:?}: kernel basis weights  {}", r.side, histogram_text(r));
                let _ = writeln!(out, "  d_{:?} = {}", r.side, d(ds));
            }
            let _ = writeln!(out, "d = min(d_Z, d_X) = {}", d(p.d));
            out
        }
    }
}

/// One row of a sweep, with its measured wall time.
#[derive(Debug, Clone, Serialize)]
pub struct SweepRow {
    #[serde(flatten)]
    pub stats: TrialStats,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_time_s: Option<f64>,
}

pub const SWEEP_CSV_HEADER: &str = "L,p,trials,failures,p_L,ci_low,ci_high,bare_rate,gain,wall_time";

fn render_sweep(rows: &[SweepRow], format: Format) -> String {
    match format {
        Format::Json => to_json(&rows),
        Format::Csv => {
            let mut out = String::from(SWEEP_CSV_HEADER);
            out.push('\n');
            for r in rows {
                let s = &r.stats;
                let _ = writeln!(
                    out,
                    "{},{},{},{},{},{},{},{},{},{}",
                    s.lattice_size,
                    sig6(s.p),
                    s.trials,
                    s.block_failures,
                    sig6(s.p_l),
                    sig6(s.ci_low),
                    sig6(s.ci_high),
                    sig6(s.bare_rate),
                    opt_sig6(s.coding_gain),
                    opt_sig6(r.wall_time_s)
                );
            }
            out
        }
        Format::Text => {
            let mut out = String::new();
            let _ = writeln!(
                out,
                "{:>8} {:>3} {:>7} {:>8} {:>8} {:>19} {:>8} {:>9} {:>10} {:>9}",
                "p_phys", "L", "trials", "fail(v/o)", "p_L", "95% CI", "decode", "bare", "gain", "time"
            );
            for r in rows {
                let s = &r.stats;
                let gain = match (s.coding_gain, s.gain_lower_bound) {
                    (Some(g), _) => format!("{g:.1}x"),
                    (None, Some(lb)) => format!(">{lb:.0}x"),
                    (None, None) => "-".into(),
                };
                let _ = writeln!(
                    out,
                    "{:>8} {:>3} {:>7} {:>9} {:>8.4} [{:>7.4}, {:>7.4}] {:>7.1}% {:>9.4} {:>10} {:>9}",
                    s.p,
                    s.lattice_size,
                    s.trials,
                    format!("{}/{}", s.vertex_side_failures, s.oct_side_failures),
                    s.p_l,
                    s.ci_low,
                    s.ci_high,
                    100.0 * s.decode_success,
                    s.bare_rate,
                    gain,
                    r.wall_time_s.map(|t| format!("{t:.2}s")).unwrap_or_else(|| "-".into())
                );
            }
            out
        }
    }
}

fn run_sweep(common: &Common, sim: &SimArgs, default_p: &[f64]) -> Outcome {
    let code = match build_code(common) {
        Ok(c) => c,
        Err(o) => return o,
    };
    if sim.trials == 0 {
        return Outcome::error(Error::NoTrials, 2);
    }
    let p_list = sim.p_list.clone().unwrap_or_else(|| default_p.to_vec());
    if let Some(&bad) = p_list.iter().find(|p| !(0.0..=1.0).contains(*p)) {
        return Outcome::error(Error::InvalidProbability(bad), 2);
    }
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(w) = sim.workers {
        builder = builder.num_threads(w);
    }
    let pool = match builder.build() {
        Ok(p) => p,
        Err(e) => return Outcome::error(e, 1),
    };
    let decoder = Decoder::new(&code);
    let result: Result<Vec<SweepRow>, Error> = pool.install(|| {
        p_list
            .iter()
            .enumerate()
            .map(|(i, &p)| {
                let start = Instant::now();
                let stats = run_point(&decoder, p, i as u64, sim.trials, sim.seed)?;
                let elapsed = start.elapsed().as_secs_f64();
                Ok(SweepRow {
                    stats,
                    wall_time_s: sim.timing.then_some(elapsed),
                })
            })
            .collect()
    });
    match result {
        Ok(rows) => Outcome::ok(render_sweep(&rows, common.format)),
        Err(e) => Outcome::error(e, 1),
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CompareRow {
    pub code: String,
    pub n: String,
    pub k: String,
    pub d: String,
    pub rate: String,
    pub source: &'static str,
}

/// Literature rows quoted for comparison; not computed here.
pub const LITERATURE: [(&str, &str, &str, &str, &str); 3] = [
    ("2D surface (square, L=4)", "32", "1", "4", "3.1%"),
    ("3D toric (cubic, L=4)", "108", "3", "4", "2.8%"),
    ("3D color code (L=4)", "~100", "~1", "4", "~1%"),
];

pub const COMPARISON_CAVEAT: &str =
    "not an apples-to-apples comparison: the FCC code trades distance (d=3) for rate";

#[derive(Debug, Clone, Serialize)]
pub struct CompareReport {
    pub rows: Vec<CompareRow>,
    /// FCC rate at L=4 over the quoted cubic toric rate (3/108).
    pub rate_ratio_vs_cubic: f64,
    pub caveat: &'static str,
}

pub fn compare_report() -> Result<CompareReport, Error> {
    let mut rows: Vec<CompareRow> = LITERATURE
        .iter()
        .map(|&(code, n, k, d, rate)| CompareRow {
            code: code.into(),
            n: n.into(),
            k: k.into(),
            d: d.into(),
            rate: rate.into(),
            source: "literature value",
        })
        .collect();
    let mut rate4 = 0.0;
    for l in [4, 6] {
        let code = CssCode::from_size(l)?;
        let proof = prove_distance(&code, false);
        if l == 4 {
            rate4 = code.rate();
        }
        rows.push(CompareRow {
            code: format!("FCC code (L={l})"),
            n: code.n().to_string(),
            k: code.k().to_string(),
            d: proof.d.map(|d| d.to_string()).unwrap_or_else(|| "?".into()),
            rate: format!("{:.1}%", 100.0 * code.rate()),
            source: "computed",
        });
    }
    Ok(CompareReport {
        rows,
        rate_ratio_vs_cubic: rate4 / (3.0 / 108.0),
        caveat: COMPARISON_CAVEAT,
    })
}

fn render_compare(r: &CompareReport, format: Format) -> String {
    match format {
        Format::Json => to_json(r),
        Format::Csv => {
            let mut out = String::from("code,n,k,d,rate,source\n");
            for row in &r.rows {
                let _ = writeln!(out, "{},{},{},{},{},{}", row.code, row.n, row.k, row.d, row.rate, row.source);
            }
            out
        }
        Format::Text => {
            let mut out = String::new();
            let _ = writeln!(out, "{:<28} {:>5} {:>5} {:>3} {:>7}  source", "code", "n", "k", "d", "rate");
            for row in &r.rows {
                let _ = writeln!(
                    out,
                    "{:<28} {:>5} {:>5} {:>3} {:>7}  {}",
                    row.code, row.n, row.k, row.d, row.rate, row.source
                );
            }
            let _ = writeln!(out, "rate ratio FCC(L=4) / cubic toric: {:.1}x", r.rate_ratio_vs_cubic);
            let _ = writeln!(out, "note: {}", r.caveat);
            out
        }
    }
}

pub fn run(cli: Cli) -> Outcome {
    match cli.command {
        Command::Params(common) => match build_code(&common) {
            Ok(code) => Outcome::ok(ParamsReport::of(&code).render(common.format)),
            Err(o) => o,
        },
        Command::Verify(common) => match build_code(&common) {
            Ok(code) => {
                let report = code.verify();
                let failed = !report.all_hold();
                let mut out = Outcome::ok(render_verify(&report, common.format));
                if failed {
                    out.exit_code = 1;
                }
                out
            }
            Err(o) => o,
        },
        Command::Distance { common, full_w3 } => match build_code(&common) {
            Ok(code) => {
                let proof = prove_distance(&code, full_w3);
                let mut out = Outcome::ok(render_distance(&proof, common.format));
                if proof.d.is_none() {
                    out.exit_code = 1;
                    out.stderr = proof.failures().join("\n") + "\n";
                }
                out
            }
            Err(o) => o,
        },
        Command::Decode { common, sim } => run_sweep(&common, &sim, &[0.001]),
        Command::Sweep { common, sim } => run_sweep(&common, &sim, &DEFAULT_SWEEP),
        Command::Compare { format } => match compare_report() {
            Ok(r) => Outcome::ok(render_compare(&r, format)),
            Err(e) => Outcome::error(e, 1),
        },
        Command::Export { size, what } => match CssCode::from_size(size) {
            Ok(code) => Outcome::ok(match what {
                ExportWhat::Lattice => to_json(&code.lattice().export()),
                ExportWhat::Hz => CssCode::sparse_text(code.h_z()),
                ExportWhat::Hx => CssCode::sparse_text(code.h_x()),
            }),
            Err(e) => Outcome::error(e, 2),
        },
    }
}
