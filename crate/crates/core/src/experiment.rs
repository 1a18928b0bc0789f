//! Batch trials: random worlds on a fixed graph, reports from one
//! adversary, one detector, and per-trial soundness and coverage.

use std::fmt::Write as _;
use std::time::Instant;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::detection::{
    detect_connected_labels, detect_directed_budgeted, detect_undirected_budgeted, DetectMode, DetectionResult, Label,
    DEFAULT_SEARCH_BUDGET,
};
use crate::error::{Error, Result};
use crate::generators::{generate, GenSpec};
use crate::graph::Graph;
use crate::orient::orient_regular;
use crate::reporting::{generate_reports, Adversary, World};
use crate::sizes::floor_count;

pub const CSV_HEADER: &str = "n,m,d,delta,adversary,trial,T_size,sound,coverage,error,runtime_ms,seed";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExperimentMode {
    Fast,
    General,
    Connected,
}

impl std::str::FromStr for ExperimentMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "fast" => Ok(ExperimentMode::Fast),
            "general" => Ok(ExperimentMode::General),
            "connected" => Ok(ExperimentMode::Connected),
            other => Err(Error::InvalidParameters(format!("unknown mode `{other}`"))),
        }
    }
}

/// Truthful-set size as a count or as a fraction of `n` (rounded down).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TruthfulSize {
    Count(usize),
    Fraction(f64),
}

impl TruthfulSize {
    pub fn resolve(self, n: usize) -> Result<usize> {
        let t = match self {
            TruthfulSize::Count(t) => t,
            TruthfulSize::Fraction(f) => {
                if !(f.is_finite() && (0.0..=1.0).contains(&f)) {
                    return Err(Error::InvalidParameters(format!("truthful fraction {f} outside [0, 1]")));
                }
                floor_count(f * n as f64)
            }
        };
        if t > n {
            return Err(Error::InvalidParameters(format!("|T| = {t} exceeds n = {n}")));
        }
        Ok(t)
    }
}

/// Adversaries usable in batch runs; per-trial randomness comes from the
/// trial stream.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "strategy", rename_all = "kebab-case")]
pub enum AdversarySpec {
    MirrorConfusion,
    ColludePraise,
    AllAccuse,
    Random,
    ScenarioRi { separator: Vec<usize> },
}

impl AdversarySpec {
    pub fn name(&self) -> &'static str {
        match self {
            AdversarySpec::MirrorConfusion => "mirror-confusion",
            AdversarySpec::ColludePraise => "collude-praise",
            AdversarySpec::AllAccuse => "all-accuse",
            AdversarySpec::Random => "random",
            AdversarySpec::ScenarioRi { .. } => "scenario-ri",
        }
    }

    fn instantiate(&self, rng: &mut ChaCha8Rng) -> Adversary {
        match self {
            AdversarySpec::MirrorConfusion => Adversary::MirrorConfusion { pairing: None },
            AdversarySpec::ColludePraise => Adversary::ColludePraise,
            AdversarySpec::AllAccuse => Adversary::AllAccuse,
            AdversarySpec::Random => Adversary::Random { seed: rng.gen() },
            AdversarySpec::ScenarioRi { separator } => Adversary::ScenarioRi {
                separator: separator.clone(),
            },
        }
    }
}

impl std::str::FromStr for AdversarySpec {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "mirror-confusion" => Ok(AdversarySpec::MirrorConfusion),
            "collude-praise" => Ok(AdversarySpec::ColludePraise),
            "all-accuse" => Ok(AdversarySpec::AllAccuse),
            "random" => Ok(AdversarySpec::Random),
            other => Err(Error::InvalidParameters(format!(
                "unknown batch adversary `{other}` (scenario-ri needs a separator)"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub struct OrientSpec {
    pub k: Option<usize>,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct ExperimentConfig {
    pub graph: GenSpec,
    /// Orient the generated graph before running (directed detection).
    #[serde(default)]
    pub orient: Option<OrientSpec>,
    pub truthful: TruthfulSize,
    pub adversary: AdversarySpec,
    pub mode: ExperimentMode,
    pub delta: f64,
    pub trials: usize,
    pub seed: u64,
    /// Record wall-clock detection time; off by default so output is
    /// reproducible byte for byte.
    #[serde(default)]
    pub timing: bool,
    #[serde(default = "default_budget")]
    pub search_budget: u64,
}

fn default_budget() -> u64 {
    DEFAULT_SEARCH_BUDGET
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        if self.trials < 1 {
            return Err(Error::InvalidParameters("trials must be >= 1".into()));
        }
        let (range, ok) = match self.mode {
            ExperimentMode::Connected => ("(0, 1/3)", self.delta > 0.0 && self.delta < 1.0 / 3.0),
            _ => ("[0, 1/2)", (0.0..0.5).contains(&self.delta)),
        };
        if !(self.delta.is_finite() && ok) {
            return Err(Error::DeltaOutOfRange {
                delta: self.delta,
                range,
            });
        }
        if self.orient.is_some() && self.mode == ExperimentMode::Connected {
            return Err(Error::InvalidParameters("connected mode needs an undirected graph".into()));
        }
        self.graph.validate()
    }

    pub fn build_graph(&self) -> Result<Graph> {
        let g = generate(&self.graph)?;
        match &self.orient {
            Some(o) => Ok(orient_regular(&g, o.k, o.seed)?.graph),
            None => Ok(g),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub n: usize,
    pub m: usize,
    pub d: Option<usize>,
    pub delta: f64,
    pub adversary: String,
    pub trial: usize,
    pub t_size: usize,
    pub sound: bool,
    pub coverage: f64,
    pub error: Option<String>,
    pub runtime_ms: Option<f64>,
    pub seed: u64,
}

impl TrialRecord {
    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{:.6},{},{},{}",
            self.n,
            self.m,
            self.d.map(|d| d.to_string()).unwrap_or_default(),
            self.delta,
            self.adversary,
            self.trial,
            self.t_size,
            self.sound,
            self.coverage,
            self.error.as_deref().unwrap_or(""),
            self.runtime_ms.map(|r| format!("{r:.3}")).unwrap_or_default(),
            self.seed
        )
    }
}

/// World and detector output of one trial, for re-checking a record.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialDetail {
    pub world: World,
    pub result: Option<DetectionResult>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub trials: usize,
    pub errors: usize,
    pub soundness_rate: f64,
    pub min_coverage: f64,
    pub mean_coverage: f64,
    pub runtime_p50_ms: Option<f64>,
    pub runtime_p90_ms: Option<f64>,
    pub runtime_max_ms: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentOutput {
    pub records: Vec<TrialRecord>,
    pub details: Vec<TrialDetail>,
    pub summary: Summary,
}

impl ExperimentOutput {
    pub fn to_csv(&self) -> String {
        let mut out = String::with_capacity(64 * (self.records.len() + 1));
        out.push_str(CSV_HEADER);
        out.push('\n');
        for r in &self.records {
            let _ = writeln!(out, "{}", r.csv_row());
        }
        out
    }
}

/// True iff no label contradicts the world.
pub fn is_sound(result: &DetectionResult, world: &World) -> bool {
    result.labels.iter().enumerate().all(|(v, &l)| match l {
        Label::Unknown => true,
        Label::Truthful => world.is_truthful(v),
        Label::Corrupt => !world.is_truthful(v),
    })
}

/// Random stream of trial `trial` under base seed `seed`.
pub fn trial_rng(seed: u64, trial: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial as u64);
    rng
}

pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentOutput> {
    cfg.validate()?;
    let g = cfg.build_graph()?;
    run_on_graph(cfg, &g)
}

/// Runs the trials of `cfg` on an already built graph (e.g. read from a
/// file); `cfg.graph` is ignored.
pub fn run_on_graph(cfg: &ExperimentConfig, g: &Graph) -> Result<ExperimentOutput> {
    if cfg.trials < 1 {
        return Err(Error::InvalidParameters("trials must be >= 1".into()));
    }
    if cfg.mode == ExperimentMode::Connected && g.is_directed() {
        return Err(Error::WrongOrientation {
            expected: "an undirected",
        });
    }
    let n = g.n();
    let t = cfg.truthful.resolve(n)?;
    let pairs: Vec<(TrialRecord, TrialDetail)> = (0..cfg.trials)
        .into_par_iter()
        .map(|trial| run_trial(cfg, g, t, trial))
        .collect();
    let (records, details): (Vec<_>, Vec<_>) = pairs.into_iter().unzip();
    let summary = summarize(&records);
    Ok(ExperimentOutput {
        records,
        details,
        summary,
    })
}

fn run_trial(cfg: &ExperimentConfig, g: &Graph, t: usize, trial: usize) -> (TrialRecord, TrialDetail) {
    let n = g.n();
    let mut rng = trial_rng(cfg.seed, trial);
    let world = World::random(n, t, &mut rng).expect("t was resolved against n");
    let adversary = cfg.adversary.instantiate(&mut rng);
    let outcome = generate_reports(g, &world, &adversary).and_then(|r| {
        let timer = Instant::now();
        let res = match (cfg.mode, g.is_directed()) {
            (ExperimentMode::Connected, _) => detect_connected_labels(g, &r, cfg.delta),
            (mode, directed) => {
                let mode = if mode == ExperimentMode::Fast {
                    DetectMode::Fast
                } else {
                    DetectMode::General
                };
                if directed {
                    detect_directed_budgeted(g, &r, mode, cfg.delta, cfg.search_budget)
                } else {
                    detect_undirected_budgeted(g, &r, mode, cfg.delta, cfg.search_budget)
                }
            }
        };
        res.map(|res| (res, timer.elapsed()))
    });
    let (sound, coverage, error, runtime_ms, result) = match outcome {
        Ok((res, elapsed)) => (
            is_sound(&res, &world),
            res.labeled_count() as f64 / n.max(1) as f64,
            None,
            cfg.timing.then_some(elapsed.as_secs_f64() * 1e3),
            Some(res),
        ),
        Err(e) => (true, 0.0, Some(e.code().to_string()), None, None),
    };
    let record = TrialRecord {
        n,
        m: g.m(),
        d: g.regular_degree(),
        delta: cfg.delta,
        adversary: cfg.adversary.name().to_string(),
        trial,
        t_size: t,
        sound,
        coverage,
        error,
        runtime_ms,
        seed: cfg.seed,
    };
    (record, TrialDetail { world, result })
}

fn summarize(records: &[TrialRecord]) -> Summary {
    let trials = records.len();
    let errors = records.iter().filter(|r| r.error.is_some()).count();
    let sound = records.iter().filter(|r| r.sound).count();
    let covs: Vec<f64> = records.iter().map(|r| r.coverage).collect();
    let mut times: Vec<f64> = records.iter().filter_map(|r| r.runtime_ms).collect();
    times.sort_by(f64::total_cmp);
    let pct = |p: f64| -> Option<f64> {
        (!times.is_empty()).then(|| times[((times.len() - 1) as f64 * p).round() as usize])
    };
    Summary {
        trials,
        errors,
        soundness_rate: sound as f64 / trials.max(1) as f64,
        min_coverage: covs.iter().copied().fold(f64::INFINITY, f64::min).min(1.0),
        mean_coverage: covs.iter().sum::<f64>() / trials.max(1) as f64,
        runtime_p50_ms: pct(0.5),
        runtime_p90_ms: pct(0.9),
        runtime_max_ms: times.last().copied(),
    }
}
