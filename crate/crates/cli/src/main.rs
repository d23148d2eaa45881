//! Verification sweeps for L(1, chi) identities and upper bounds.
//!
//! Exit codes: 0 all checks pass, 1 usage error, 2 a bound check failed
//! (a genuine finding or a bug), 3 work-budget refusal.

mod output;

use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;

use l1chi::arith::{coprime_harmonic, factorize};
use l1chi::bounds::{
    harmonic_main_term, primorial_study, strict_l1_bound, truncation_l1_bound, verify_modulus,
    BoundReport, PrimorialRow,
};
use l1chi::chargroup::MODULUS_CAP;
use l1chi::lfun::l1_cross_validated;
use l1chi::{CharacterGroup, Error};

use output::{csv, emit, json, sci, sci_opt};

const EXIT_PASS: i32 = 0;
const EXIT_USAGE: i32 = 1;
const EXIT_VIOLATION: i32 = 2;
const EXIT_BUDGET: i32 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum Format {
    Csv,
    Json,
}

#[derive(Debug, Parser)]
#[command(
    name = "l1chi",
    about = "Evaluate L(1, chi) for all Dirichlet characters of a modulus by two \
             independent methods and verify the explicit identities and bounds they satisfy.",
    after_help = "Exit codes: 0 pass, 1 usage error, 2 bound violation, 3 work-budget refusal.\n\
                  Character indexing follows the deterministic enumeration order: exponent \
                  vectors against the cyclic components of (Z/qZ)^*, lexicographically, \
                  principal character first (index 0)."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Report format (eval always prints plain text).
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,

    /// Write the report here instead of stdout.
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,

    /// Worker threads for the sweeps; defaults to the available cores.
    /// Row order in reports is deterministic regardless.
    #[arg(long, global = true, value_name = "N")]
    jobs: Option<usize>,

    /// Additive slack applied to every pass/fail comparison (must be
    /// positive; default is exact comparison).
    #[arg(long, global = true, value_name = "EPS")]
    tolerance: Option<f64>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check the explicit coprime-harmonic identity: one row per (q, x)
    /// pair with x in {q, 10q, 100q}, residual compared against tau(q)/x.
    #[command(name = "verify-lemma2")]
    VerifyLemma2 {
        #[arg(long, default_value_t = 1)]
        q_min: u64,
        #[arg(long, default_value_t = 200)]
        q_max: u64,
        /// Drop grid points with x above this cap.
        #[arg(long)]
        x_max: Option<f64>,
    },

    /// Per-modulus bound report over a range of q: strict bound margins,
    /// explicit domination margins, and Polya-Vinogradov ratios.
    #[command(name = "sweep-bounds")]
    SweepBounds {
        #[arg(long, default_value_t = 3)]
        q_min: u64,
        #[arg(long, default_value_t = 100)]
        q_max: u64,
    },

    /// Evaluate every primorial modulus prod_{p <= x} p up to the cutoff
    /// and report the liminf-trend ratios next to their reference constants.
    #[command(name = "primorial-study")]
    PrimorialStudy {
        #[arg(long, default_value_t = 13.0)]
        x_max: f64,
    },

    /// Evaluate one character: L(1, chi) with its error radius, plus both
    /// bound values for that character.
    Eval {
        /// Modulus.
        q: u64,
        /// Character index in enumeration order (0 is principal).
        index: u64,
    },
}

#[derive(Debug, Serialize)]
struct ConfigEcho {
    command: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    q_min: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    q_max: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    x_max: Option<f64>,
    format: Format,
    #[serde(skip_serializing_if = "Option::is_none")]
    out: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    jobs: Option<usize>,
    tolerance: f64,
}

#[derive(Debug, Serialize)]
struct HarmonicRow {
    q: u64,
    x: f64,
    lhs: f64,
    main_term: f64,
    residual: f64,
    tau_over_x: f64,
    pass: bool,
}

#[derive(Debug, Serialize)]
struct SweepRow {
    #[serde(flatten)]
    report: BoundReport,
    pass: bool,
}

fn main() {
    std::process::exit(run());
}

fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_PASS };
            let _ = e.print();
            return code;
        }
    };

    if let Some(jobs) = cli.jobs {
        if jobs == 0 {
            eprintln!("error: --jobs must be at least 1");
            return EXIT_USAGE;
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(jobs).build_global() {
            eprintln!("error: failed to build thread pool: {e}");
            return EXIT_USAGE;
        }
    }

    let tolerance = match cli.tolerance {
        None => 0.0,
        Some(t) if t > 0.0 && t.is_finite() => t,
        Some(t) => {
            eprintln!("error: --tolerance must be a positive real, got {t}");
            return EXIT_USAGE;
        }
    };

    match &cli.command {
        Command::VerifyLemma2 { q_min, q_max, x_max } => {
            cmd_verify_lemma2(&cli, *q_min, *q_max, *x_max, tolerance)
        }
        Command::SweepBounds { q_min, q_max } => cmd_sweep_bounds(&cli, *q_min, *q_max, tolerance),
        Command::PrimorialStudy { x_max } => cmd_primorial_study(&cli, *x_max),
        Command::Eval { q, index } => cmd_eval(*q, *index),
    }
}

fn check_range(q_min: u64, q_max: u64) -> Result<(), String> {
    if q_min == 0 {
        return Err("moduli are positive; --q-min must be at least 1".into());
    }
    if q_min > q_max {
        return Err(format!("empty range: --q-min {q_min} exceeds --q-max {q_max}"));
    }
    if q_max > MODULUS_CAP {
        return Err(format!("--q-max {q_max} exceeds the modulus cap {MODULUS_CAP}"));
    }
    Ok(())
}

fn config_echo(cli: &Cli, command: &'static str) -> ConfigEcho {
    let (q_min, q_max, x_max) = match &cli.command {
        Command::VerifyLemma2 { q_min, q_max, x_max } => (Some(*q_min), Some(*q_max), *x_max),
        Command::SweepBounds { q_min, q_max } => (Some(*q_min), Some(*q_max), None),
        Command::PrimorialStudy { x_max } => (None, None, Some(*x_max)),
        Command::Eval { .. } => (None, None, None),
    };
    ConfigEcho {
        command,
        q_min,
        q_max,
        x_max,
        format: cli.format,
        out: cli.out.as_ref().map(|p| p.display().to_string()),
        jobs: cli.jobs,
        tolerance: cli.tolerance.unwrap_or(0.0),
    }
}

fn emit_or_fail(text: String, out: Option<&PathBuf>) -> Option<i32> {
    if let Err(e) = emit(&text, out) {
        eprintln!("error: failed to write report: {e}");
        return Some(EXIT_USAGE);
    }
    None
}

fn cmd_verify_lemma2(cli: &Cli, q_min: u64, q_max: u64, x_max: Option<f64>, tol: f64) -> i32 {
    if let Err(msg) = check_range(q_min, q_max) {
        eprintln!("error: {msg}");
        return EXIT_USAGE;
    }
    let rows: Vec<HarmonicRow> = (q_min..=q_max)
        .into_par_iter()
        .flat_map_iter(|q| {
            let f = factorize(q).expect("q >= 1");
            let tau = f.tau() as f64;
            let mut rows = Vec::with_capacity(3);
            for mult in [1.0, 10.0, 100.0] {
                let x = q as f64 * mult;
                if x_max.is_some_and(|cap| x > cap) {
                    continue;
                }
                let lhs = coprime_harmonic(x, &f);
                let main_term = harmonic_main_term(&f, x);
                let residual = lhs - main_term;
                let tau_over_x = tau / x;
                rows.push(HarmonicRow {
                    q,
                    x,
                    lhs,
                    main_term,
                    residual,
                    tau_over_x,
                    pass: residual.abs() <= tau_over_x + tol,
                });
            }
            rows
        })
        .collect();

    let all_pass = rows.iter().all(|r| r.pass);
    let text = match cli.format {
        Format::Csv => csv(
            "q,x,lhs,main_term,residual,tau_over_x,pass",
            &rows
                .iter()
                .map(|r| {
                    vec![
                        r.q.to_string(),
                        sci(r.x),
                        sci(r.lhs),
                        sci(r.main_term),
                        sci(r.residual),
                        sci(r.tau_over_x),
                        r.pass.to_string(),
                    ]
                })
                .collect::<Vec<_>>(),
        ),
        Format::Json => json(&config_echo(cli, "verify-lemma2"), &rows),
    };
    if let Some(code) = emit_or_fail(text, cli.out.as_ref()) {
        return code;
    }
    if all_pass {
        EXIT_PASS
    } else {
        EXIT_VIOLATION
    }
}

fn cmd_sweep_bounds(cli: &Cli, q_min: u64, q_max: u64, tol: f64) -> i32 {
    if let Err(msg) = check_range(q_min, q_max) {
        eprintln!("error: {msg}");
        return EXIT_USAGE;
    }
    for q in q_min..=q_max.min(2) {
        eprintln!("warning: skipping q = {q}: no non-principal characters");
    }
    let reports: Vec<BoundReport> = (q_min.max(3)..=q_max)
        .into_par_iter()
        .map(|q| verify_modulus(q).expect("3 <= q <= cap"))
        .collect();
    let rows: Vec<SweepRow> = reports
        .into_iter()
        .map(|report| {
            let pass =
                report.strict_margin_min > -tol && report.truncation_margin_min >= -tol;
            SweepRow { report, pass }
        })
        .collect();

    let all_pass = rows.iter().all(|r| r.pass);
    let text = match cli.format {
        Format::Csv => csv(
            "q,phi_ratio,harmonic_residual_max,strict_bound,refined_main,max_abs_l1,\
             refined_residual_ratio,strict_margin_min,truncation_margin_min,pv_ratio_max,pass",
            &rows
                .iter()
                .map(|r| {
                    vec![
                        r.report.q.to_string(),
                        sci(r.report.phi_ratio),
                        sci(r.report.harmonic_residual_max),
                        sci(r.report.strict_bound),
                        sci(r.report.refined_main),
                        sci(r.report.max_abs_l1),
                        sci_opt(r.report.refined_residual_ratio),
                        sci(r.report.strict_margin_min),
                        sci(r.report.truncation_margin_min),
                        sci(r.report.pv_ratio_max),
                        r.pass.to_string(),
                    ]
                })
                .collect::<Vec<_>>(),
        ),
        Format::Json => json(&config_echo(cli, "sweep-bounds"), &rows),
    };
    if let Some(code) = emit_or_fail(text, cli.out.as_ref()) {
        return code;
    }
    if all_pass {
        EXIT_PASS
    } else {
        EXIT_VIOLATION
    }
}

fn cmd_primorial_study(cli: &Cli, x_max: f64) -> i32 {
    let rows: Vec<PrimorialRow> = match primorial_study(x_max) {
        Ok(rows) => rows,
        Err(e @ Error::WorkBudget { .. }) => {
            eprintln!("refused: {e}");
            return EXIT_BUDGET;
        }
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_USAGE;
        }
    };
    if rows.is_empty() {
        eprintln!(
            "warning: no primorial modulus up to {x_max} carries a non-principal \
             character; nothing to report"
        );
    }
    let text = match cli.format {
        Format::Csv => csv(
            "prime_cutoff,q,phi,loglog_q,max_abs_l1,ratio,refined_reference,\
             strict_ratio,strict_reference,phi_ratio,mertens_reference",
            &rows
                .iter()
                .map(|r| {
                    vec![
                        r.prime_cutoff.to_string(),
                        r.q.to_string(),
                        r.phi.to_string(),
                        sci(r.loglog_q),
                        sci(r.max_abs_l1),
                        sci(r.ratio),
                        sci(r.refined_reference),
                        sci(r.strict_ratio),
                        sci(r.strict_reference),
                        sci(r.phi_ratio),
                        sci(r.mertens_reference),
                    ]
                })
                .collect::<Vec<_>>(),
        ),
        Format::Json => json(&config_echo(cli, "primorial-study"), &rows),
    };
    if let Some(code) = emit_or_fail(text, cli.out.as_ref()) {
        return code;
    }
    EXIT_PASS
}

fn cmd_eval(q: u64, index: u64) -> i32 {
    let group = match CharacterGroup::new(q) {
        Ok(g) => g,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_USAGE;
        }
    };
    let chi = match group.character(index) {
        Ok(chi) => chi,
        Err(_) => {
            eprintln!(
                "error: character index {index} out of range; phi({q}) = {}",
                group.phi()
            );
            return EXIT_USAGE;
        }
    };
    if chi.is_principal() {
        eprintln!("refused: index {index} is the principal character; L(s, chi_0) diverges at s = 1");
        return EXIT_USAGE;
    }
    let est = match l1_cross_validated(&chi) {
        Ok(est) => est,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_VIOLATION;
        }
    };
    let f = factorize(q).expect("q >= 3 here");
    let strict = strict_l1_bound(&f);
    let trunc = truncation_l1_bound(&chi).expect("non-principal");
    println!("q = {q}, index = {index}, exponents = {:?}, order = {}", chi.exponents(), chi.order());
    println!("L(1, chi) = {} + {} i", sci(est.value.re), sci(est.value.im));
    println!("|L(1, chi)| = {}", sci(est.value.norm()));
    println!("abs_error = {} (method: {}, cross-validated)", sci(est.abs_error), est.method);
    println!("strict bound = {}", sci(strict));
    println!("truncation bound = {}", sci(trunc));
    EXIT_PASS
}
