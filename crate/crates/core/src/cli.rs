//! Command-line front end producing threshold tables, eigenvalue records,
//! positivity certificates, and verification-suite reports in JSON, CSV, or
//! plain-text form.

use crate::certify::{self, Verdict};
use crate::eigen;
use crate::error::Result;
use crate::geometry::Dimension;
use crate::interval::Interval;
use crate::thresholds::{self, ThresholdRecord};
use crate::verify::{self, RadialFunction, TrialMode};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::json;
use std::ffi::OsString;
use std::path::PathBuf;
use std::str::FromStr;

/// Inclusive dimension range, written `a..b` or as a single value.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NRange {
    pub lo: u32,
    pub hi: u32,
}

impl NRange {
    pub fn iter(self) -> impl Iterator<Item = u32> {
        self.lo..=self.hi
    }
}

impl FromStr for NRange {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let parse_one = |t: &str| {
            t.parse::<u32>()
                .map_err(|_| format!("invalid dimension '{t}'"))
        };
        let (lo, hi) = match s.split_once("..") {
            Some((a, b)) => (parse_one(a)?, parse_one(b)?),
            None => {
                let v = parse_one(s)?;
                (v, v)
            }
        };
        if lo > hi {
            return Err(format!("empty dimension range {lo}..{hi}"));
        }
        Ok(NRange { lo, hi })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Shooting,
    Fd,
    Both,
}

#[derive(Args, Clone, Debug)]
struct OutputArgs {
    /// Output format
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write the report to a file instead of standard output
    #[arg(long)]
    out: Option<PathBuf>,
    /// Decimal digits for CSV and text numerics (default: full precision
    /// for CSV, 4 for text)
    #[arg(long)]
    digits: Option<usize>,
}

#[derive(Parser, Debug)]
#[command(name = "sphere-rigidity", version, about = "Threshold constants and certified inequalities for scalar-curvature rigidity of geodesic balls in the sphere")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Threshold constants over a dimension range
    Thresholds {
        #[arg(long, default_value = "3..5")]
        n: NRange,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// First nonzero Neumann eigenvalue of the geodesic ball
    Eigen {
        #[arg(long)]
        n: NRange,
        /// Geodesic radius in (0, pi/2]
        #[arg(long)]
        delta: f64,
        #[arg(long, value_enum, default_value_t = MethodArg::Shooting)]
        method: MethodArg,
        /// Eigenvalue tolerance for the shooting solver
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Interval certificate that the combined boundary inequality is
    /// positive on a range of c = cos(delta)
    Certify {
        #[arg(long)]
        n: NRange,
        #[arg(long)]
        c_min: f64,
        #[arg(long, default_value_t = 1.0 - 1e-9)]
        c_max: f64,
        /// Write the accepted subintervals and their lower bounds to a file
        #[arg(long)]
        emit_certificate: Option<PathBuf>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Randomized verification suite for the integral identities
    Verify {
        #[arg(long, default_value = "3..5")]
        n: NRange,
        #[arg(long, default_value_t = 0.9)]
        delta: f64,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Random profiles per dimension
        #[arg(long, default_value_t = 10)]
        profiles: usize,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Which sufficient condition is wider, dimension by dimension
    Compare {
        /// Range must start at 5 or below ends at the largest dimension
        #[arg(long, default_value = "5..12")]
        n: NRange,
        #[command(flatten)]
        output: OutputArgs,
    },
}

/// Top-level machine-readable report.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub command: String,
    pub config: serde_json::Value,
    pub results: Vec<serde_json::Value>,
    pub invariant_failures: Vec<String>,
}

fn fmt_num(x: f64, digits: Option<usize>) -> String {
    match digits {
        Some(d) => format!("{x:.d$}", d = d),
        None => format!("{x:.16e}"),
    }
}

fn to_value<T: Serialize>(t: &T) -> serde_json::Value {
    serde_json::to_value(t).expect("report types serialize")
}

struct Rendered {
    exit: i32,
    text: String,
    out: Option<PathBuf>,
}

/// Parses `args` (including the program name), runs the command, and
/// returns (exit code, report text). Usage errors yield exit code 2 with
/// the usage message as the text.
pub fn run_from_args<I, T>(args: I) -> (i32, String)
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.exit_code() == 0 { 0 } else { 2 };
            return (code, e.render().to_string());
        }
    };
    match execute(cli) {
        Ok(r) => {
            if let Some(path) = r.out {
                if let Err(e) = std::fs::write(&path, &r.text) {
                    return (1, format!("error writing {}: {e}\n", path.display()));
                }
                (r.exit, String::new())
            } else {
                (r.exit, r.text)
            }
        }
        Err(e) => (1, format!("error: {e}\n")),
    }
}

fn execute(cli: Cli) -> Result<Rendered> {
    match cli.cmd {
        Cmd::Thresholds { n, output } => cmd_thresholds(n, output),
        Cmd::Eigen {
            n,
            delta,
            method,
            tol,
            output,
        } => cmd_eigen(n, delta, method, tol, output),
        Cmd::Certify {
            n,
            c_min,
            c_max,
            emit_certificate,
            output,
        } => cmd_certify(n, c_min, c_max, emit_certificate, output),
        Cmd::Verify {
            n,
            delta,
            seed,
            profiles,
            output,
        } => cmd_verify(n, delta, seed, profiles, output),
        Cmd::Compare { n, output } => cmd_compare(n, output),
    }
}

fn render(report: &Report, output: &OutputArgs, csv: String, text: String) -> Result<Rendered> {
    let body = match output.format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(report)?;
            s.push('\n');
            s
        }
        Format::Csv => csv,
        Format::Text => text,
    };
    Ok(Rendered {
        exit: if report.invariant_failures.is_empty() {
            0
        } else {
            1
        },
        text: body,
        out: output.out.clone(),
    })
}

fn cmd_thresholds(n: NRange, output: OutputArgs) -> Result<Rendered> {
    let mut results = Vec::new();
    let mut failures = Vec::new();
    let mut records: Vec<ThresholdRecord<f64>> = Vec::new();
    for k in n.iter() {
        let rec = ThresholdRecord::<f64>::compute(Dimension::at_least_three(k)?)?;
        failures.extend(rec.invariant_violations());
        results.push(to_value(&rec));
        records.push(rec);
    }
    let report = Report {
        command: "thresholds".into(),
        config: json!({"n": n, "format": output.format}),
        results,
        invariant_failures: failures,
    };

    let mut csv =
        String::from("n,bm,zeta,kappa,kappa_tilde,bound_7n,cos_delta0,cos_delta0_tilde\n");
    for r in &records {
        let row = [
            r.bm,
            r.zeta,
            r.kappa,
            r.kappa_tilde,
            r.bound_7n,
            r.cos_delta0,
            r.cos_delta0_tilde,
        ]
        .map(|x| fmt_num(x, output.digits))
        .join(",");
        csv.push_str(&format!("{},{row}\n", r.n.get()));
    }

    let d = output.digits.unwrap_or(4);
    let mut text = String::new();
    let header: String = records
        .iter()
        .map(|r| format!("{:>10}", r.n.get()))
        .collect();
    text.push_str(&format!("{:<12}{header}\n", "n"));
    for (label, pick) in [
        ("zeta", &(|r: &ThresholdRecord<f64>| r.zeta) as &dyn Fn(&ThresholdRecord<f64>) -> f64),
        ("bm", &|r| r.bm),
    ] {
        let row: String = records
            .iter()
            .map(|r| format!("{:>10}", fmt_num(pick(r), Some(d))))
            .collect();
        text.push_str(&format!("{label:<12}{row}\n"));
    }
    text.push('\n');
    text.push_str(&format!("{:<12}{header}\n", "n"));
    for (label, pick) in [
        ("kappa", &(|r: &ThresholdRecord<f64>| r.kappa) as &dyn Fn(&ThresholdRecord<f64>) -> f64),
        ("kappa_tilde", &|r| r.kappa_tilde),
        ("bound_7n", &|r| r.bound_7n),
        ("cos_delta0", &|r| r.cos_delta0),
    ] {
        let row: String = records
            .iter()
            .map(|r| format!("{:>10}", fmt_num(pick(r), Some(d))))
            .collect();
        text.push_str(&format!("{label:<12}{row}\n"));
    }
    render(&report, &output, csv, text)
}

fn cmd_eigen(
    n: NRange,
    delta: f64,
    method: MethodArg,
    tol: f64,
    output: OutputArgs,
) -> Result<Rendered> {
    let mut results = Vec::new();
    let mut records = Vec::new();
    let mut failures = Vec::new();
    for k in n.iter() {
        let dim = Dimension::at_least_three(k)?;
        if matches!(method, MethodArg::Shooting | MethodArg::Both) {
            records.push(eigen::mu_shooting(dim, delta, tol)?);
        }
        if matches!(method, MethodArg::Fd | MethodArg::Both) {
            records.push(eigen::mu_oracle_fd(dim, delta, 4000)?);
        }
    }
    for r in &records {
        let lower = eigen::mu_lower_simple::<f64>(r.n, delta);
        if r.mu <= lower {
            failures.push(format!(
                "mu = {} for n = {} does not exceed the lower bound {lower}",
                r.mu, r.n
            ));
        }
        results.push(to_value(r));
    }
    let report = Report {
        command: "eigen".into(),
        config: json!({"n": n, "delta": delta, "tol": tol, "format": output.format}),
        results,
        invariant_failures: failures,
    };

    let mut csv = String::from("n,delta,mu,method,residual\n");
    for r in &records {
        csv.push_str(&format!(
            "{},{},{},{:?},{}\n",
            r.n.get(),
            fmt_num(r.delta, output.digits),
            fmt_num(r.mu, output.digits),
            r.method,
            fmt_num(r.residual, output.digits)
        ));
    }
    let d = output.digits.unwrap_or(6);
    let mut text = String::new();
    for r in &records {
        text.push_str(&format!(
            "n = {:<3} delta = {:<10} mu = {:<14} ({:?})\n",
            r.n.get(),
            fmt_num(r.delta, Some(d)),
            fmt_num(r.mu, Some(d)),
            r.method
        ));
    }
    render(&report, &output, csv, text)
}

fn cmd_certify(
    n: NRange,
    c_min: f64,
    c_max: f64,
    emit: Option<PathBuf>,
    output: OutputArgs,
) -> Result<Rendered> {
    let mut results = Vec::new();
    let mut failures = Vec::new();
    let mut reports = Vec::new();
    for k in n.iter() {
        let dim = Dimension::at_least_three(k)?;
        let f = |c: Interval<f64>| certify::combined_with_side_condition(dim, c);
        let mut rep = certify::certify_positive(
            &f,
            c_min,
            c_max,
            certify::DEFAULT_MAX_DEPTH,
            emit.is_some(),
        )?;
        rep.n = Some(dim);
        if rep.verdict != Verdict::CertifiedPositive {
            failures.push(format!(
                "combined inequality not certified for n = {k} on [{c_min}, {c_max}]: {:?}",
                rep.verdict
            ));
        }
        if let (Some(path), Some(leaves)) = (&emit, rep.leaves.take()) {
            let payload: Vec<_> = leaves
                .iter()
                .map(|l| json!({"interval": [l.interval.0, l.interval.1], "lower_bound": l.lower_bound}))
                .collect();
            std::fs::write(path, serde_json::to_string_pretty(&payload)?)?;
        }
        results.push(to_value(&rep));
        reports.push(rep);
    }
    let report = Report {
        command: "certify".into(),
        config: json!({"n": n, "c_min": c_min, "c_max": c_max, "format": output.format}),
        results,
        invariant_failures: failures,
    };

    let mut csv = String::from("n,c_min,c_max,verdict,subintervals,max_depth,witness\n");
    for r in &reports {
        csv.push_str(&format!(
            "{},{},{},{:?},{},{},{}\n",
            r.n.map_or(0, Dimension::get),
            fmt_num(r.range.0, output.digits),
            fmt_num(r.range.1, output.digits),
            r.verdict,
            r.subintervals_examined,
            r.max_depth_reached,
            r.witness.map_or(String::new(), |w| fmt_num(w, output.digits))
        ));
    }
    let mut text = String::new();
    for r in &reports {
        text.push_str(&format!(
            "n = {:<3} [{}, {}] -> {:?} ({} subintervals, depth {})\n",
            r.n.map_or(0, Dimension::get),
            r.range.0,
            r.range.1,
            r.verdict,
            r.subintervals_examined,
            r.max_depth_reached
        ));
    }
    render(&report, &output, csv, text)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
struct VerifyRow {
    n: u32,
    delta: f64,
    profile: usize,
    divergence_residual: f64,
    ibp_residual: f64,
    trace_slack_min: f64,
    variational_slack: f64,
    linearized_r_residual: f64,
}

fn cmd_verify(
    n: NRange,
    delta: f64,
    seed: u64,
    profiles: usize,
    output: OutputArgs,
) -> Result<Rendered> {
    let mut rows = Vec::new();
    let mut failures = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for k in n.iter() {
        let dim = Dimension::at_least_three(k)?;
        for profile in 0..profiles {
            let b = RadialFunction::<f64>::random_smooth_profile(&mut rng);
            let u = RadialFunction::<f64>::random_smooth_profile(&mut rng);
            let h = verify::make_divfree(&b, dim, delta)?;
            let (_, _, div_res) = verify::verify_divergence_identity(&h, dim, delta)?;
            let (_, _, ibp_res) = verify::verify_ibp_identity(&u, dim, delta)?;
            let mut trace_slack_min = f64::INFINITY;
            for w in [0.5, std::f64::consts::SQRT_2, 4.0] {
                let (_, _, slack) = verify::verify_trace_estimate(&h, dim, delta, w)?;
                trace_slack_min = trace_slack_min.min(slack);
            }
            let var = verify::verify_variational(&u, dim, delta, TrialMode::Angular)?;
            let lin_r = verify::verify_linearized_r(&h, dim, delta)?;
            let row = VerifyRow {
                n: k,
                delta,
                profile,
                divergence_residual: div_res,
                ibp_residual: ibp_res,
                trace_slack_min,
                variational_slack: var.slack,
                linearized_r_residual: lin_r,
            };
            if div_res > 1e-10 {
                failures.push(format!(
                    "divergence identity residual {div_res} (n = {k}, profile {profile})"
                ));
            }
            if ibp_res > 1e-10 {
                failures.push(format!(
                    "integration-by-parts residual {ibp_res} (n = {k}, profile {profile})"
                ));
            }
            if trace_slack_min < -1e-10 {
                failures.push(format!(
                    "trace estimate slack {trace_slack_min} (n = {k}, profile {profile})"
                ));
            }
            if var.slack < -1e-8 * var.lhs.abs() {
                failures.push(format!(
                    "variational slack {} (n = {k}, profile {profile})",
                    var.slack
                ));
            }
            if lin_r > 1e-6 {
                failures.push(format!(
                    "linearized curvature residual {lin_r} (n = {k}, profile {profile})"
                ));
            }
            rows.push(row);
        }
    }
    let report = Report {
        command: "verify".into(),
        config: json!({
            "n": n, "delta": delta, "seed": seed,
            "profiles": profiles, "format": output.format
        }),
        results: rows.iter().map(to_value).collect(),
        invariant_failures: failures,
    };

    let mut csv = String::from(
        "n,delta,profile,divergence_residual,ibp_residual,trace_slack_min,variational_slack,linearized_r_residual\n",
    );
    for r in &rows {
        csv.push_str(&format!(
            "{},{},{},{},{},{},{},{}\n",
            r.n,
            fmt_num(r.delta, output.digits),
            r.profile,
            fmt_num(r.divergence_residual, output.digits),
            fmt_num(r.ibp_residual, output.digits),
            fmt_num(r.trace_slack_min, output.digits),
            fmt_num(r.variational_slack, output.digits),
            fmt_num(r.linearized_r_residual, output.digits)
        ));
    }
    let mut text = String::new();
    for r in &rows {
        text.push_str(&format!(
            "n = {:<3} profile {:<3} div {:9.2e}  ibp {:9.2e}  slack {:9.2e}  var {:9.2e}  linR {:9.2e}\n",
            r.n,
            r.profile,
            r.divergence_residual,
            r.ibp_residual,
            r.trace_slack_min,
            r.variational_slack,
            r.linearized_r_residual
        ));
    }
    text.push_str(&format!(
        "{} checks, {} failures\n",
        rows.len(),
        report.invariant_failures.len()
    ));
    render(&report, &output, csv, text)
}

fn cmd_compare(n: NRange, output: OutputArgs) -> Result<Rendered> {
    let comparison = thresholds::compare_conditions::<f64>(Dimension::at_least_three(n.hi)?)?;
    let rows: Vec<_> = comparison
        .rows
        .iter()
        .filter(|r| r.n.get() >= n.lo)
        .collect();
    let report = Report {
        command: "compare".into(),
        config: json!({"n": n, "format": output.format}),
        results: rows.iter().map(|r| to_value(r)).collect(),
        invariant_failures: Vec::new(),
    };

    let mut csv = String::from("n,winner,zeta,cos_delta0,kappa,margin,margin_vs_kappa\n");
    for r in &rows {
        csv.push_str(&format!(
            "{},{:?},{},{},{},{},{}\n",
            r.n.get(),
            r.winner,
            fmt_num(r.zeta, output.digits),
            fmt_num(r.cos_delta0, output.digits),
            fmt_num(r.kappa, output.digits),
            fmt_num(r.margin, output.digits),
            fmt_num(r.margin_vs_kappa, output.digits)
        ));
    }
    let d = output.digits.unwrap_or(4);
    let mut text = String::new();
    for r in &rows {
        text.push_str(&format!(
            "n = {:<4} {:?}: zeta = {}, cos_delta0 = {}, margin = {}\n",
            r.n.get(),
            r.winner,
            fmt_num(r.zeta, Some(d)),
            fmt_num(r.cos_delta0, Some(d)),
            fmt_num(r.margin, Some(d))
        ));
    }
    if let Some(cross) = comparison.crossover {
        text.push_str(&format!("first crossover at n = {cross}\n"));
    }
    render(&report, &output, csv, text)
}
