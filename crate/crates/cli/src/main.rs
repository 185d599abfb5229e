use std::fs;
use std::io::{ErrorKind, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use bisubdiv::edgelist::{load_edge_list, save_edge_list};
use bisubdiv::harness::{
    check_contradiction, check_delta_window, compare_size_bound, compute_params, default_jobs,
    f_alpha_canonical, run_batch, run_trial, taylor_gap, TrialConfig,
};
use bisubdiv::joinedness::{extract_expander, is_alpha_joined, verify_extraction};
use bisubdiv::quasirandom::{
    check_density, check_discrepancy, sample_host, DiscrepancyMode, QuasiParams,
};
use bisubdiv::subdiv::{embed_subdivision, load_base_graph, load_sigma_csv, EmbedOptions};
use bisubdiv::{Alpha, Budget, ExtendMode, SubdivisionSpec, YChoice, DEFAULT_BUDGET};
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

#[derive(Parser)]
#[command(
    name = "bisubdiv",
    version,
    about = "Long bipartite subdivisions in expanders"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum CheckMode {
    Density,
    Discrepancy,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Certified,
    Greedy,
}

#[derive(Subcommand)]
enum Cmd {
    /// Sample G(N, N, p) and write it as an edge list.
    Gen {
        #[arg(long = "N")]
        n: usize,
        #[arg(long)]
        p: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Density or discrepancy certificate for a host.
    Check {
        #[arg(long, value_enum)]
        mode: CheckMode,
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        p: f64,
        /// Target size `n` of the density window.
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, default_value_t = 0.25)]
        epsilon: f64,
        #[arg(long, default_value_t = 0.5)]
        delta: f64,
        /// Smallest set size in a discrepancy pair.
        #[arg(long, default_value_t = 1)]
        c3n: usize,
        /// Sample this many pairs instead of enumerating.
        #[arg(long)]
        trials: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
    },
    /// Decide α-joinedness exactly.
    CheckJoined {
        #[arg(long)]
        alpha: Alpha,
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
    },
    /// Extract the expanding subgraph and re-verify it.
    Extract {
        #[arg(long)]
        alpha: Alpha,
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out_report: Option<PathBuf>,
        /// `first` or a seed.
        #[arg(long, default_value = "first")]
        y: YChoice,
        /// Skip the exhaustive re-verification.
        #[arg(long)]
        no_verify: bool,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
    },
    /// Embed a subdivision of a base graph into a host.
    Embed {
        #[arg(long)]
        host: PathBuf,
        #[arg(long)]
        base: PathBuf,
        #[arg(long)]
        sigma: PathBuf,
        #[arg(long)]
        alpha: Alpha,
        #[arg(long, value_enum, default_value_t = Mode::Greedy)]
        mode: Mode,
        #[arg(long, default_value_t = 2)]
        s_max: usize,
        #[arg(long = "D")]
        degree: Option<usize>,
        #[arg(long, default_value = "first")]
        y: YChoice,
        /// Comma-separated edge order.
        #[arg(long, value_delimiter = ',')]
        edge_order: Option<Vec<usize>>,
        #[arg(long)]
        mirror: bool,
        /// Only enforce the structural hypotheses.
        #[arg(long)]
        relaxed: bool,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        report: Option<PathBuf>,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
    },
    /// Print the constant system as JSON.
    Params {
        #[arg(long)]
        r: u32,
        #[arg(long = "D")]
        degree: u32,
        #[arg(long)]
        n: f64,
    },
    /// Check the closed-form inequalities over a range of degrees.
    VerifyNumerics {
        #[arg(long = "D-range", default_value = "2..64")]
        d_range: String,
        #[arg(long = "r-range", default_value = "2..10")]
        r_range: String,
        #[arg(long, default_value_t = 1e6)]
        n: f64,
    },
    /// Run one colouring trial.
    Trial {
        #[arg(long)]
        config: PathBuf,
    },
    /// Run independent trials in parallel.
    Batch {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, default_value_t = 10)]
        trials: usize,
        /// Worker threads; defaults to BISUBDIV_THREADS or all cores.
        #[arg(long)]
        jobs: Option<usize>,
    },
}

fn emit<T: Serialize>(value: &T, path: Option<&Path>) -> Result<()> {
    let text = serde_json::to_string_pretty(value)?;
    match path {
        Some(p) => fs::write(p, text + "\n").with_context(|| format!("writing {}", p.display())),
        None => match writeln!(std::io::stdout().lock(), "{text}") {
            Err(e) if e.kind() == ErrorKind::BrokenPipe => Ok(()),
            r => Ok(r?),
        },
    }
}

/// `a..b`, inclusive at both ends.
fn parse_range(s: &str) -> Result<(u32, u32)> {
    let (a, b) = s.split_once("..").context("range must look like a..b")?;
    let (a, b): (u32, u32) = (a.trim().parse()?, b.trim().parse()?);
    if a > b {
        bail!("empty range {s}");
    }
    Ok((a, b))
}

fn load_config(path: &Path) -> Result<TrialConfig> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    Ok(serde_json::from_str(&text)?)
}

#[derive(Serialize)]
struct NumericRow {
    #[serde(rename = "D")]
    degree: u32,
    alpha: f64,
    f_alpha: f64,
    f_below_one: bool,
    taylor_gap: f64,
    taylor_ok: bool,
    delta_windows_ok: bool,
    worst_delta_margin: f64,
    size_bound_holds: bool,
    size_bound_margin: f64,
    contradiction_margin: f64,
}

#[derive(Serialize)]
struct NumericSummary {
    pass: bool,
    rows: Vec<NumericRow>,
}

fn verify_numerics(d_range: &str, r_range: &str, n: f64) -> Result<NumericSummary> {
    let (d0, d1) = parse_range(d_range)?;
    let (r0, r1) = parse_range(r_range)?;
    let mut rows = Vec::new();
    for d in d0.max(2)..=d1 {
        let alpha = 1.0 / (6.0 * d as f64 + 14.0);
        let f = f_alpha_canonical(alpha);
        let gap = taylor_gap(alpha);
        let mut windows_ok = true;
        let mut worst = f64::INFINITY;
        for r in r0.max(2)..=r1 {
            let w = check_delta_window(&compute_params(r, d, n)?);
            windows_ok &= w.pass;
            worst = worst.min(w.lower_margin.min(w.upper_margin));
        }
        let p = compute_params(r0.max(2), d, n)?;
        let size = compare_size_bound(&p)?;
        let c = check_contradiction(&p, n);
        rows.push(NumericRow {
            degree: d,
            alpha,
            f_alpha: f,
            f_below_one: f < 1.0,
            taylor_gap: gap,
            taylor_ok: gap <= 10.0 * alpha.powi(3),
            delta_windows_ok: windows_ok,
            worst_delta_margin: worst,
            size_bound_holds: size.holds,
            size_bound_margin: size.margin,
            contradiction_margin: c.lower - c.upper,
        });
    }
    let pass = rows
        .iter()
        .all(|r| r.f_below_one && r.taylor_ok && r.delta_windows_ok);
    Ok(NumericSummary { pass, rows })
}

fn run(cli: Cli) -> Result<()> {
    match cli.cmd {
        Cmd::Gen { n, p, seed, out } => {
            if !(0.0..=1.0).contains(&p) {
                bail!("p must lie in [0, 1]");
            }
            let g = sample_host(n, p, seed);
            save_edge_list(&g, &out)?;
            eprintln!("wrote {} edges to {}", g.edge_count(), out.display());
        }
        Cmd::Check {
            mode,
            input,
            p,
            n,
            epsilon,
            delta,
            c3n,
            trials,
            seed,
            budget,
        } => {
            let g = load_edge_list(&input)?;
            let q = QuasiParams {
                n_part: g.size1(),
                p,
                epsilon,
                delta,
                c3n,
            };
            match mode {
                CheckMode::Density => {
                    let rep = check_density(&g, &q, n.unwrap_or(g.size1()))?;
                    emit(&rep, None)?;
                }
                CheckMode::Discrepancy => {
                    let m = match trials {
                        Some(trials) => DiscrepancyMode::Sampled { trials, seed },
                        None => DiscrepancyMode::Exhaustive,
                    };
                    let rep = check_discrepancy(&g, &q, m, &mut Budget::new(budget))?;
                    emit(&rep, None)?;
                }
            }
        }
        Cmd::CheckJoined {
            alpha,
            input,
            budget,
        } => {
            let g = load_edge_list(&input)?;
            emit(&is_alpha_joined(&g, alpha, &mut Budget::new(budget))?, None)?;
        }
        Cmd::Extract {
            alpha,
            input,
            out_report,
            y,
            no_verify,
            budget,
        } => {
            let g = load_edge_list(&input)?;
            let r = extract_expander(&g, alpha, y, &mut Budget::new(budget))?;
            if !no_verify {
                let v = verify_extraction(&g, &r, &mut Budget::new(budget))?;
                eprintln!("verification: {}", if v.pass { "pass" } else { "FAIL" });
                if !v.pass {
                    emit(&v, None)?;
                }
            }
            emit(&r, out_report.as_deref())?;
        }
        Cmd::Embed {
            host,
            base,
            sigma,
            alpha,
            mode,
            s_max,
            degree,
            y,
            edge_order,
            mirror,
            relaxed,
            out,
            report,
            budget,
        } => {
            let g = load_edge_list(&host)?;
            let base = load_base_graph(&base)?;
            let sigma = load_sigma_csv(&sigma, &base)?;
            let spec = SubdivisionSpec::new(base, sigma)?;
            let opts = EmbedOptions {
                edge_order,
                mode: match mode {
                    Mode::Certified => ExtendMode::Certified,
                    Mode::Greedy => ExtendMode::Greedy { s_max },
                },
                mirror,
                y_choice: y,
                degree,
                budget,
                enforce_hypotheses: !relaxed,
            };
            let res = embed_subdivision(&g, &spec, alpha, &opts)?;
            if let Some(path) = out {
                fs::write(&path, res.embedding.to_tsv())
                    .with_context(|| format!("writing {}", path.display()))?;
            }
            emit(&res.report, report.as_deref())?;
            if !res.report.audit.pass {
                bail!("audit failed: {:?}", res.report.audit.failures);
            }
        }
        Cmd::Params { r, degree, n } => emit(&compute_params(r, degree, n)?, None)?,
        Cmd::VerifyNumerics {
            d_range,
            r_range,
            n,
        } => {
            let s = verify_numerics(&d_range, &r_range, n)?;
            emit(&s, None)?;
            if !s.pass {
                bail!("numeric verification failed");
            }
        }
        Cmd::Trial { config } => emit(&run_trial(&load_config(&config)?)?, None)?,
        Cmd::Batch {
            config,
            trials,
            jobs,
        } => {
            let cfg = load_config(&config)?;
            let jobs = jobs.unwrap_or_else(default_jobs);
            emit(&run_batch(&cfg, trials, jobs)?, None)?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
