use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::alpha::Alpha;
use crate::error::{Error, Result};
use crate::good_embed::ExtendMode;
use crate::joinedness::{is_alpha_joined, JoinednessVerdict, YChoice};
use crate::quasirandom::sample_host;
use crate::rng::derive_seed;
use crate::search::{Budget, DEFAULT_BUDGET};
use crate::subdiv::{embed_subdivision, BaseGraph, EmbedOptions, EmbedReport, SubdivisionSpec};

use super::coloring::{color_edges, ColoringStrategy};

/// Environment variable overriding the worker count of batch runs.
pub const THREADS_ENV: &str = "BISUBDIV_THREADS";

fn default_true() -> bool {
    true
}

fn default_budget() -> u64 {
    DEFAULT_BUDGET
}

/// A desk-scale coloring experiment.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrialConfig {
    #[serde(rename = "N")]
    pub n_host: usize,
    pub p: f64,
    pub alpha: Alpha,
    pub r: usize,
    pub strategy: ColoringStrategy,
    pub target: SubdivisionSpec,
    #[serde(rename = "D", default)]
    pub degree: Option<usize>,
    #[serde(default)]
    pub host_seed: u64,
    #[serde(default)]
    pub mode: ExtendMode,
    #[serde(default = "default_true")]
    pub check_joined: bool,
    /// Attempt the embedding even when the class is not certified α-joined.
    #[serde(default)]
    pub force_embed: bool,
    #[serde(default)]
    pub y_choice: YChoice,
    #[serde(default = "default_budget")]
    pub budget: u64,
    #[serde(default)]
    pub timings: bool,
}

impl TrialConfig {
    /// `N = 512`, `p = 40/512`, `α = 1/32`, `D = 3`, two colours, one edge
    /// subdivided 14 times.
    pub fn desk_default() -> Self {
        TrialConfig {
            n_host: 512,
            p: 40.0 / 512.0,
            alpha: Alpha::reciprocal(32).unwrap(),
            r: 2,
            strategy: ColoringStrategy::UniformRandom { seed: 0 },
            target: SubdivisionSpec::uniform(BaseGraph::single_edge(), 14).unwrap(),
            degree: Some(3),
            host_seed: 0,
            mode: ExtendMode::default(),
            check_joined: true,
            force_embed: false,
            y_choice: YChoice::First,
            budget: DEFAULT_BUDGET,
            timings: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_host == 0 || self.r == 0 || !(0.0..=1.0).contains(&self.p) || self.budget == 0 {
            return Err(Error::InvalidParameter(
                "trial needs N >= 1, r >= 1, p in [0, 1] and a positive budget".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HostStats {
    #[serde(rename = "N")]
    pub n: usize,
    pub edges: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct JoinednessOutcome {
    pub verdict: Option<JoinednessVerdict>,
    pub error: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EmbedOutcome {
    pub success: bool,
    pub error: Option<String>,
    pub report: Option<EmbedReport>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Timings {
    pub sample_ms: f64,
    pub color_ms: f64,
    pub joined_ms: f64,
    pub embed_ms: f64,
    pub total_ms: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrialReport {
    pub trial: usize,
    pub host_seed: u64,
    pub host: HostStats,
    pub color_counts: Vec<usize>,
    pub chosen_class: usize,
    pub chosen_edges: usize,
    /// `r · chosen_edges ≥ e(G)`.
    pub pigeonhole: bool,
    pub joinedness: Option<JoinednessOutcome>,
    pub embedding: Option<EmbedOutcome>,
    pub success: bool,
    pub timings: Option<Timings>,
}

fn ms(t: Instant) -> f64 {
    t.elapsed().as_secs_f64() * 1e3
}

/// Samples a host, colours it, keeps the largest colour class (lowest index on
/// ties), checks it for α-joinedness and, if joined or forced, embeds the
/// target into it. Failures of the later stages are recorded, not returned.
pub fn run_trial(config: &TrialConfig) -> Result<TrialReport> {
    run_indexed(config, 0, config.host_seed, config.strategy)
}

fn run_indexed(
    config: &TrialConfig,
    trial: usize,
    host_seed: u64,
    strategy: ColoringStrategy,
) -> Result<TrialReport> {
    config.validate()?;
    let start = Instant::now();
    let g = sample_host(config.n_host, config.p, host_seed);
    let sample_ms = ms(start);

    let t = Instant::now();
    let coloring = color_edges(&g, config.r, strategy, config.alpha)?;
    let counts = coloring.counts();
    let (chosen, &chosen_edges) = counts
        .iter()
        .enumerate()
        .rev()
        .max_by_key(|(_, &c)| c)
        .expect("at least one colour");
    let class = coloring.class(&g, chosen as u32);
    let color_ms = ms(t);

    let t = Instant::now();
    let joinedness = config.check_joined.then(|| {
        match is_alpha_joined(&class, config.alpha, &mut Budget::new(config.budget)) {
            Ok(v) => JoinednessOutcome {
                verdict: Some(v),
                error: None,
            },
            Err(e) => JoinednessOutcome {
                verdict: None,
                error: Some(e.to_string()),
            },
        }
    });
    let joined_ms = ms(t);
    let joined = joinedness
        .as_ref()
        .and_then(|j| j.verdict.as_ref())
        .is_some_and(|v| v.joined);

    let t = Instant::now();
    let embedding = (joined || config.force_embed).then(|| {
        let opts = EmbedOptions {
            mode: config.mode,
            y_choice: config.y_choice,
            degree: config.degree,
            budget: config.budget,
            ..EmbedOptions::default()
        };
        match embed_subdivision(&class, &config.target, config.alpha, &opts) {
            Ok(out) => EmbedOutcome {
                success: out.report.audit.pass,
                error: None,
                report: Some(out.report),
            },
            Err(e) => EmbedOutcome {
                success: false,
                error: Some(e.to_string()),
                report: None,
            },
        }
    });
    let embed_ms = ms(t);

    let success = embedding.as_ref().is_some_and(|e| e.success);
    Ok(TrialReport {
        trial,
        host_seed,
        host: HostStats {
            n: config.n_host,
            edges: g.edge_count(),
        },
        pigeonhole: chosen_edges * config.r >= g.edge_count(),
        color_counts: counts,
        chosen_class: chosen,
        chosen_edges,
        joinedness,
        embedding,
        success,
        timings: config.timings.then(|| Timings {
            sample_ms,
            color_ms,
            joined_ms,
            embed_ms,
            total_ms: ms(start),
        }),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BatchReport {
    pub trials: usize,
    pub successes: usize,
    pub success_rate: f64,
    pub pigeonhole_all: bool,
    pub reports: Vec<TrialReport>,
    pub total_ms: Option<f64>,
}

/// Worker count: the environment override if set, otherwise all cores.
pub fn default_jobs() -> usize {
    std::env::var(THREADS_ENV)
        .ok()
        .and_then(|s| s.parse().ok())
        .filter(|&j| j > 0)
        .unwrap_or_else(rayon::current_num_threads)
}

/// Runs `trials` independent trials on `jobs` threads. Trial `t` derives its
/// host and colouring seeds from `t`, so results do not depend on `jobs`.
pub fn run_batch(config: &TrialConfig, trials: usize, jobs: usize) -> Result<BatchReport> {
    config.validate()?;
    let start = Instant::now();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| Error::InvalidParameter(e.to_string()))?;
    let reports: Vec<TrialReport> = pool.install(|| {
        (0..trials)
            .into_par_iter()
            .map(|t| {
                run_indexed(
                    config,
                    t,
                    derive_seed(config.host_seed, t as u64),
                    config.strategy.reseeded(t as u64),
                )
            })
            .collect::<Result<_>>()
    })?;
    let successes = reports.iter().filter(|r| r.success).count();
    Ok(BatchReport {
        trials,
        successes,
        success_rate: if trials == 0 {
            0.0
        } else {
            successes as f64 / trials as f64
        },
        pigeonhole_all: reports.iter().all(|r| r.pigeonhole),
        reports,
        total_ms: config.timings.then(|| ms(start)),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn complete_config() -> TrialConfig {
        TrialConfig {
            p: 1.0,
            r: 1,
            check_joined: false,
            force_embed: true,
            ..TrialConfig::desk_default()
        }
    }

    #[test]
    fn complete_host_single_colour() {
        let rep = run_trial(&complete_config()).unwrap();
        assert_eq!(rep.chosen_edges, 512 * 512);
        assert!(rep.pigeonhole);
        assert!(rep.success, "{:?}", rep.embedding);
    }

    #[test]
    fn report_round_trips() {
        let rep = run_trial(&complete_config()).unwrap();
        let s = serde_json::to_string(&rep).unwrap();
        let back: TrialReport = serde_json::from_str(&s).unwrap();
        assert_eq!(back, rep);
    }

    #[test]
    fn ties_pick_lowest_colour() {
        let cfg = TrialConfig {
            n_host: 4,
            p: 1.0,
            r: 2,
            strategy: ColoringStrategy::RoundRobin,
            check_joined: false,
            force_embed: false,
            ..TrialConfig::desk_default()
        };
        let rep = run_trial(&cfg).unwrap();
        assert_eq!(rep.color_counts, vec![8, 8]);
        assert_eq!(rep.chosen_class, 0);
    }
}
