//! `corruptnet`: command-line front end for corruptnet-core.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_rational::Rational64;
use serde::Serialize;
use serde_json::json;

use corruptnet_core::certify::{certify, CertVerdict, CertifyOptions, Criterion, MethodChoice, DEFAULT_WORK_BUDGET};
use corruptnet_core::constructions::{
    build_np_gadget, build_separator_scenarios, dense_gadget, grid_middle_column, grid_middle_row,
    independence_number, verify_indistinguishable,
};
use corruptnet_core::detection::{
    detect_connected_labels, detect_directed_budgeted, detect_undirected_budgeted, DetectMode, DEFAULT_SEARCH_BUDGET,
};
use corruptnet_core::experiment::{
    run_experiment, run_on_graph, trial_rng, AdversarySpec, ExperimentConfig, ExperimentMode, OrientSpec, TruthfulSize,
};
use corruptnet_core::generators::{generate, GenSpec};
use corruptnet_core::orient::orient_regular;
use corruptnet_core::puzzle::{
    minimal_tests, run_strategy, verify_strategy, DefaultStrategy, PuzzleAdversary, PuzzleInstance, Strategy,
};
use corruptnet_core::reporting::{generate_reports, Adversary, ReportSet, World};
use corruptnet_core::{Error, ErrorClass, Graph};

const CERT_BUDGET_VAR: &str = "CORRUPTNET_CERT_BUDGET";
const SEARCH_BUDGET_VAR: &str = "CORRUPTNET_SEARCH_BUDGET";

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error(transparent)]
    Core(#[from] Error),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{0}")]
    Usage(String),
    #[error("work budget exceeded: {0}")]
    Budget(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(e) => match e.class() {
                ErrorClass::Usage => 1,
                ErrorClass::Instance => 2,
                ErrorClass::Budget => 3,
            },
            CliError::Io { .. } | CliError::Usage(_) => 1,
            CliError::Budget(_) => 3,
        }
    }
}

type CliResult<T> = Result<T, CliError>;

#[derive(Debug, Parser)]
#[command(name = "corruptnet", version, about = "Identify truthful and corrupt vertices from neighbor reports")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, global = true, default_value_t = Format::Text)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Generate a graph in the text format.
    Generate(GenerateArgs),
    /// Check a graph against an expansion criterion.
    Certify(CertifyArgs),
    /// Place a world on a graph and produce the reports.
    Simulate(SimulateArgs),
    /// Label vertices from a graph and a report file.
    Detect(DetectArgs),
    /// Build a hardness gadget over a dense base.
    Gadget(GadgetArgs),
    /// Build indistinguishable separator scenarios on a grid.
    Scenarios(ScenarioArgs),
    /// Play the machine-testing puzzle.
    Puzzle(PuzzleArgs),
    /// Run a batch of random trials and emit CSV.
    Experiment(ExperimentArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Family {
    RandomRegular,
    Grid,
    Star,
    Cycle,
    Complete,
    Blowup,
}

#[derive(Debug, Args, Default)]
struct GraphArgs {
    #[arg(long, value_enum)]
    family: Option<Family>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    d: Option<usize>,
    #[arg(long)]
    rows: Option<usize>,
    #[arg(long)]
    cols: Option<usize>,
    #[arg(long)]
    leaves: Option<usize>,
    /// Base family of a blowup; its size comes from the other size flags.
    #[arg(long, value_enum)]
    base: Option<Family>,
    /// Clique size of a blowup.
    #[arg(long)]
    blowup: Option<usize>,
}

fn need<T: Copy>(v: Option<T>, flag: &str, family: &str) -> CliResult<T> {
    v.ok_or_else(|| CliError::Usage(format!("--{flag} is required for family {family}")))
}

impl GraphArgs {
    fn given(&self) -> bool {
        self.family.is_some()
    }

    fn spec(&self, seed: u64) -> CliResult<GenSpec> {
        let family = self
            .family
            .ok_or_else(|| CliError::Usage("--family is required".into()))?;
        self.spec_for(family, seed)
    }

    fn spec_for(&self, family: Family, seed: u64) -> CliResult<GenSpec> {
        Ok(match family {
            Family::RandomRegular => GenSpec::RandomRegular {
                n: need(self.n, "n", "random-regular")?,
                d: need(self.d, "d", "random-regular")?,
                seed,
            },
            Family::Grid => GenSpec::Grid {
                rows: need(self.rows, "rows", "grid")?,
                cols: need(self.cols, "cols", "grid")?,
            },
            Family::Star => GenSpec::Star {
                leaves: need(self.leaves, "leaves", "star")?,
            },
            Family::Cycle => GenSpec::Cycle {
                n: need(self.n, "n", "cycle")?,
            },
            Family::Complete => GenSpec::Complete {
                n: need(self.n, "n", "complete")?,
            },
            Family::Blowup => {
                let base = need(self.base, "base", "blowup")?;
                if base == Family::Blowup {
                    return Err(CliError::Usage("--base cannot itself be blowup".into()));
                }
                GenSpec::Blowup {
                    base: Box::new(self.spec_for(base, seed)?),
                    k: need(self.blowup, "blowup", "blowup")?,
                }
            }
        })
    }
}

#[derive(Debug, Args)]
struct GenerateArgs {
    #[command(flatten)]
    graph: GraphArgs,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Orient the (regular) graph: Eulerian on a 2k-regular part, random elsewhere.
    #[arg(long)]
    orient: bool,
    /// Half-degree of the Eulerian part; defaults to ceil(3 sqrt d).
    #[arg(long)]
    orient_k: Option<usize>,
    /// Seed of the random orientation; defaults to `--seed`.
    #[arg(long)]
    orient_seed: Option<u64>,
    #[arg(long, short)]
    out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Method {
    Auto,
    Exhaustive,
    Spectral,
}

#[derive(Debug, Args)]
struct CertifyArgs {
    #[arg(long)]
    graph: PathBuf,
    #[arg(long)]
    delta: f64,
    /// undirected-good, directed-good or delta-connected.
    #[arg(long, default_value = "undirected-good")]
    criterion: String,
    #[arg(long, value_enum, default_value_t = Method::Auto)]
    method: Method,
}

#[derive(Debug, Args)]
struct SimulateArgs {
    #[arg(long)]
    graph: PathBuf,
    /// World file (`T: ...` / `B: ...`); otherwise a random placement.
    #[arg(long, conflicts_with_all = ["truthful_count", "truthful_fraction"])]
    world: Option<PathBuf>,
    #[arg(long)]
    truthful_count: Option<usize>,
    #[arg(long)]
    truthful_fraction: Option<f64>,
    /// Placement seed; also seeds the random adversary unless `--adv-seed` is set.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// mirror-confusion, collude-praise, all-accuse, random, scenario-ri or scripted.
    #[arg(long, default_value = "collude-praise")]
    adversary: String,
    #[arg(long)]
    adv_seed: Option<u64>,
    /// Separator vertices for scenario-ri (comma separated).
    #[arg(long, value_delimiter = ',')]
    separator: Vec<usize>,
    /// Report file whose corrupt-source verdicts the scripted adversary replays.
    #[arg(long)]
    script: Option<PathBuf>,
    /// Write PREFIX.world, PREFIX.reports and PREFIX.json instead of stdout.
    #[arg(long, short)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct DetectArgs {
    #[arg(long)]
    graph: PathBuf,
    #[arg(long)]
    reports: PathBuf,
    /// fast, general or connected.
    #[arg(long, default_value = "general")]
    mode: String,
    /// delta for fast/general, epsilon for connected.
    #[arg(long)]
    delta: f64,
    #[arg(long, short)]
    out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum HFamily {
    Path,
    Cycle,
    Complete,
    Star,
    Empty,
}

#[derive(Debug, Args)]
struct GadgetArgs {
    #[arg(long)]
    n: usize,
    /// Graph file for H; otherwise `--h-family` with `--m` vertices.
    #[arg(long, conflicts_with = "h_family")]
    h: Option<PathBuf>,
    #[arg(long, value_enum)]
    h_family: Option<HFamily>,
    #[arg(long)]
    m: Option<usize>,
    /// Fraction `a` as p/q.
    #[arg(long)]
    a: String,
    /// Fraction `b` as p/q; defaults to a/2.
    #[arg(long)]
    b: Option<String>,
    /// Write PREFIX.graph, PREFIX.reports and PREFIX.json.
    #[arg(long, short)]
    out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Cut {
    Row,
    Column,
}

#[derive(Debug, Args)]
struct ScenarioArgs {
    #[arg(long)]
    rows: usize,
    #[arg(long)]
    cols: usize,
    #[arg(long, value_enum, default_value_t = Cut::Row)]
    cut: Cut,
    #[arg(long)]
    eps: f64,
    /// Directory for grid.graph, scenario-i.world/.reports and manifest.json.
    #[arg(long, short)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct PuzzleArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    t: usize,
    /// Check the default strategy against every adaptive adversary.
    #[arg(long, conflicts_with_all = ["minimal", "run"])]
    verify: bool,
    /// Exact minimax number of tests.
    #[arg(long, conflicts_with = "run")]
    minimal: bool,
    /// Play against a randomized adversary (the default action).
    #[arg(long)]
    run: bool,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Debug, Args)]
struct ExperimentArgs {
    /// TOML config; flags override its fields.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Graph file to run on instead of a generated graph.
    #[arg(long)]
    graph_file: Option<PathBuf>,
    #[command(flatten)]
    graph: GraphArgs,
    #[arg(long)]
    graph_seed: Option<u64>,
    #[arg(long)]
    orient_k: Option<usize>,
    #[arg(long)]
    orient_seed: Option<u64>,
    #[arg(long)]
    truthful_count: Option<usize>,
    #[arg(long)]
    truthful_fraction: Option<f64>,
    /// mirror-confusion, collude-praise, all-accuse or random.
    #[arg(long)]
    adversary: Option<String>,
    #[arg(long)]
    mode: Option<String>,
    #[arg(long)]
    delta: Option<f64>,
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Record detection wall-clock time (output is then not reproducible).
    #[arg(long)]
    timing: bool,
    /// Also write worlds and detector outputs as JSON.
    #[arg(long)]
    details: Option<PathBuf>,
    #[arg(long, short)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn run(cli: Cli) -> CliResult<()> {
    let fmt = cli.format;
    match cli.command {
        Command::Generate(a) => cmd_generate(a, fmt),
        Command::Certify(a) => cmd_certify(a, fmt),
        Command::Simulate(a) => cmd_simulate(a, fmt),
        Command::Detect(a) => cmd_detect(a, fmt),
        Command::Gadget(a) => cmd_gadget(a, fmt),
        Command::Scenarios(a) => cmd_scenarios(a, fmt),
        Command::Puzzle(a) => cmd_puzzle(a, fmt),
        Command::Experiment(a) => cmd_experiment(a, fmt),
    }
}

fn read(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_owned(),
        source,
    })
}

fn write(path: &Path, text: &str) -> CliResult<()> {
    fs::write(path, text).map_err(|source| CliError::Io {
        path: path.to_owned(),
        source,
    })
}

fn with_ext(prefix: &Path, ext: &str) -> PathBuf {
    let mut s = prefix.as_os_str().to_owned();
    s.push(".");
    s.push(ext);
    PathBuf::from(s)
}

fn emit(out: Option<&Path>, text: &str) -> CliResult<()> {
    match out {
        Some(p) => write(p, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn to_json<T: Serialize + ?Sized>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable value");
    s.push('\n');
    s
}

/// Serde name of a unit enum value, e.g. `pass` or `undirected-good`.
fn tag<T: Serialize>(v: &T) -> String {
    match serde_json::to_value(v) {
        Ok(serde_json::Value::String(s)) => s,
        Ok(other) => other.to_string(),
        Err(_) => "?".into(),
    }
}

fn env_budget(var: &str, default: u64) -> CliResult<u64> {
    match std::env::var(var) {
        Ok(s) => s
            .trim()
            .parse()
            .map_err(|_| CliError::Usage(format!("{var} must be a non-negative integer, got `{s}`"))),
        Err(_) => Ok(default),
    }
}

fn load_graph(path: &Path) -> CliResult<Graph> {
    Ok(Graph::from_text(&read(path)?)?)
}

fn parse_ratio(s: &str, flag: &str) -> CliResult<Rational64> {
    s.trim()
        .parse::<Rational64>()
        .map_err(|_| CliError::Usage(format!("--{flag} must be a fraction p/q, got `{s}`")))
}

fn ids(v: &[usize]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
}

fn cmd_generate(a: GenerateArgs, fmt: Format) -> CliResult<()> {
    let spec = a.graph.spec(a.seed)?;
    spec.validate()?;
    let mut g = generate(&spec)?;
    let mut orientation = None;
    if a.orient || a.orient_k.is_some() {
        let o = orient_regular(&g, a.orient_k, a.orient_seed.unwrap_or(a.seed))?;
        orientation = Some(json!({ "k": o.k, "seed": a.orient_seed.unwrap_or(a.seed), "in_e1": o.in_e1 }));
        g = o.graph;
    }
    let text = match fmt {
        Format::Text => g.to_text(),
        Format::Json => to_json(&json!({ "spec": spec, "orientation": orientation, "graph": g })),
    };
    emit(a.out.as_deref(), &text)
}

fn cmd_certify(a: CertifyArgs, fmt: Format) -> CliResult<()> {
    let g = load_graph(&a.graph)?;
    let criterion: Criterion = a.criterion.parse()?;
    let opts = CertifyOptions {
        method: match a.method {
            Method::Auto => MethodChoice::Auto,
            Method::Exhaustive => MethodChoice::Exhaustive,
            Method::Spectral => MethodChoice::SpectralSurrogate,
        },
        work_budget: env_budget(CERT_BUDGET_VAR, DEFAULT_WORK_BUDGET)?,
        surrogate_max_eigenvalue: None,
    };
    let cert = certify(&g, a.delta, criterion, &opts)?;
    match fmt {
        Format::Json => print!("{}", to_json(&cert)),
        Format::Text => {
            println!("criterion: {}", tag(&cert.criterion));
            println!("delta: {}", cert.delta);
            println!("verdict: {}", tag(&cert.verdict));
            println!("method: {}", tag(&cert.method));
            println!("work: {} (budget {})", cert.work, cert.work_budget);
            for c in &cert.conditions {
                println!(
                    "condition {}: {} ({} subsets)",
                    tag(&c.condition),
                    tag(&c.verdict),
                    c.subsets_checked
                );
            }
            if let Some(w) = &cert.witness {
                println!("witness: {}", serde_json::to_string(w).expect("serializable witness"));
            }
            if let Some(gap) = cert.spectral_gap {
                println!("second-eigenvalue: {gap}");
            }
            if let Some(th) = cert.surrogate_gap_threshold {
                println!("surrogate-threshold: {th}");
            }
        }
    }
    if cert.verdict == CertVerdict::NotAttempted {
        return Err(CliError::Budget(format!(
            "exhaustive certification needs {} subset checks; raise {CERT_BUDGET_VAR} or use --method spectral",
            cert.work
        )));
    }
    Ok(())
}

fn simulate_adversary(a: &SimulateArgs, g: &Graph) -> CliResult<Adversary> {
    Ok(match a.adversary.as_str() {
        "mirror-confusion" => Adversary::MirrorConfusion { pairing: None },
        "collude-praise" => Adversary::ColludePraise,
        "all-accuse" => Adversary::AllAccuse,
        "random" => Adversary::Random {
            seed: a.adv_seed.unwrap_or(a.seed),
        },
        "scenario-ri" => Adversary::ScenarioRi {
            separator: a.separator.clone(),
        },
        "scripted" => {
            let path = a
                .script
                .as_deref()
                .ok_or_else(|| CliError::Usage("scripted adversary needs --script".into()))?;
            let r = ReportSet::from_text(g, &read(path)?)?;
            Adversary::Scripted {
                verdicts: r.verdicts().to_vec(),
            }
        }
        other => return Err(CliError::Usage(format!("unknown adversary `{other}`"))),
    })
}

fn cmd_simulate(a: SimulateArgs, fmt: Format) -> CliResult<()> {
    let g = load_graph(&a.graph)?;
    let n = g.n();
    let world = match (&a.world, a.truthful_count, a.truthful_fraction) {
        (Some(p), _, _) => World::from_text(&read(p)?)?,
        (None, Some(t), None) => World::random(n, TruthfulSize::Count(t).resolve(n)?, &mut trial_rng(a.seed, 0))?,
        (None, None, Some(f)) => World::random(n, TruthfulSize::Fraction(f).resolve(n)?, &mut trial_rng(a.seed, 0))?,
        _ => {
            return Err(CliError::Usage(
                "give exactly one of --world, --truthful-count, --truthful-fraction".into(),
            ))
        }
    };
    world.check_for(&g)?;
    let adv = simulate_adversary(&a, &g)?;
    let reports = generate_reports(&g, &world, &adv)?;
    match &a.out {
        Some(prefix) => {
            let (wp, rp) = (with_ext(prefix, "world"), with_ext(prefix, "reports"));
            write(&wp, &world.to_text())?;
            write(&rp, &reports.to_text(&g))?;
            let manifest = json!({
                "graph": a.graph,
                "world": wp,
                "reports": rp,
                "n": n,
                "m": g.m(),
                "directed": g.is_directed(),
                "truthful": world.truthful_count(),
                "seed": a.seed,
                "adversary": adv,
            });
            write(&with_ext(prefix, "json"), &to_json(&manifest))?;
        }
        None => match fmt {
            Format::Text => print!("{}{}", world.to_text(), reports.to_text(&g)),
            Format::Json => print!("{}", to_json(&json!({ "world": world, "reports": reports }))),
        },
    }
    Ok(())
}

fn cmd_detect(a: DetectArgs, fmt: Format) -> CliResult<()> {
    let g = load_graph(&a.graph)?;
    let r = ReportSet::from_text(&g, &read(&a.reports)?)?;
    let budget = env_budget(SEARCH_BUDGET_VAR, DEFAULT_SEARCH_BUDGET)?;
    let res = match a.mode.as_str() {
        "connected" => detect_connected_labels(&g, &r, a.delta)?,
        other => {
            let mode: DetectMode = other.parse()?;
            if g.is_directed() {
                detect_directed_budgeted(&g, &r, mode, a.delta, budget)?
            } else {
                detect_undirected_budgeted(&g, &r, mode, a.delta, budget)?
            }
        }
    };
    for notice in &res.notices {
        eprintln!("notice: {}", tag(notice));
    }
    let text = match fmt {
        Format::Text => res.to_text(),
        Format::Json => to_json(&res),
    };
    emit(a.out.as_deref(), &text)
}

fn h_graph(a: &GadgetArgs) -> CliResult<Graph> {
    if let Some(p) = &a.h {
        return load_graph(p);
    }
    let family = a
        .h_family
        .ok_or_else(|| CliError::Usage("give --h FILE or --h-family with --m".into()))?;
    let m = a.m.ok_or_else(|| CliError::Usage("--m is required with --h-family".into()))?;
    let edges: Vec<(usize, usize)> = match family {
        HFamily::Path => (1..m).map(|i| (i - 1, i)).collect(),
        HFamily::Cycle if m >= 3 => (0..m).map(|i| (i, (i + 1) % m)).collect(),
        HFamily::Cycle => return Err(CliError::Usage("cycle H needs --m >= 3".into())),
        HFamily::Complete => (0..m).flat_map(|i| (i + 1..m).map(move |j| (i, j))).collect(),
        HFamily::Star => (1..m).map(|i| (0, i)).collect(),
        HFamily::Empty => Vec::new(),
    };
    Ok(Graph::undirected(m, edges)?)
}

fn cmd_gadget(a: GadgetArgs, fmt: Format) -> CliResult<()> {
    let h = h_graph(&a)?;
    let ra = parse_ratio(&a.a, "a")?;
    let rb = match &a.b {
        Some(b) => parse_ratio(b, "b")?,
        None => ra / 2,
    };
    let spec = dense_gadget(a.n, h.clone(), ra, rb)?;
    let (g, r) = build_np_gadget(&spec)?;
    let alpha = independence_number(&h);
    let manifest = json!({
        "n": spec.n(),
        "m": spec.m(),
        "a": ra.to_string(),
        "b": rb.to_string(),
        "v1": spec.v1,
        "v2": spec.v2,
        "v3": spec.v3,
        "h": h,
        "independence_number": alpha,
        "max_truthful": spec.v1.len() + alpha,
    });
    if let Some(prefix) = &a.out {
        write(&with_ext(prefix, "graph"), &g.to_text())?;
        write(&with_ext(prefix, "reports"), &r.to_text(&g))?;
        write(&with_ext(prefix, "json"), &to_json(&manifest))?;
    }
    match fmt {
        Format::Json => print!("{}", to_json(&manifest)),
        Format::Text => {
            println!("n: {}", spec.n());
            println!("m: {}", spec.m());
            println!("V1: {}", ids(&spec.v1));
            println!("V2: {}", ids(&spec.v2));
            println!("V3: {}", ids(&spec.v3));
            println!("independence-number: {alpha}");
            println!("max-truthful: {}", spec.v1.len() + alpha);
        }
    }
    Ok(())
}

fn cmd_scenarios(a: ScenarioArgs, fmt: Format) -> CliResult<()> {
    let g = generate(&GenSpec::Grid {
        rows: a.rows,
        cols: a.cols,
    })?;
    let sep = match a.cut {
        Cut::Row => grid_middle_row(a.rows, a.cols),
        Cut::Column => grid_middle_column(a.rows, a.cols),
    };
    let fam = build_separator_scenarios(&g, &sep, a.eps)?;
    let same = verify_indistinguishable(&fam);
    let common = fam.common_truthful();
    if let Some(dir) = &a.out {
        fs::create_dir_all(dir).map_err(|source| CliError::Io {
            path: dir.clone(),
            source,
        })?;
        write(&dir.join("grid.graph"), &g.to_text())?;
        for (i, (w, r)) in fam.scenarios.iter().zip(&fam.reports).enumerate() {
            write(&dir.join(format!("scenario-{i}.world")), &w.to_text())?;
            write(&dir.join(format!("scenario-{i}.reports")), &r.to_text(&g))?;
        }
        let manifest = json!({
            "rows": a.rows,
            "cols": a.cols,
            "eps": a.eps,
            "separator": fam.separator,
            "components": fam.components,
            "scenarios": fam.len(),
        });
        write(&dir.join("manifest.json"), &to_json(&manifest))?;
    }
    match fmt {
        Format::Json => print!(
            "{}",
            to_json(&json!({
                "separator": fam.separator,
                "components": fam.components,
                "scenarios": fam.scenarios,
                "indistinguishable": same,
                "common_truthful": common,
            }))
        ),
        Format::Text => {
            println!("separator: {}", ids(&fam.separator));
            for (i, w) in fam.scenarios.iter().enumerate() {
                println!("scenario {i} corrupt: {}", ids(&w.corrupt()));
            }
            println!("indistinguishable: {same}");
            println!("common-truthful: {}", ids(&common));
        }
    }
    Ok(())
}

fn cmd_puzzle(a: PuzzleArgs, fmt: Format) -> CliResult<()> {
    let inst = PuzzleInstance::new(a.n, a.t)?;
    let strat = DefaultStrategy;
    if a.verify {
        let ok = verify_strategy(&inst, &strat)?;
        match fmt {
            Format::Json => print!("{}", to_json(&json!({ "n": a.n, "t": a.t, "strategy": strat.name(), "verified": ok }))),
            Format::Text => println!("verified: {ok}"),
        }
        return Ok(());
    }
    if a.minimal {
        let k = minimal_tests(&inst)?;
        match fmt {
            Format::Json => print!("{}", to_json(&json!({ "n": a.n, "t": a.t, "minimal_tests": k }))),
            Format::Text => println!("minimal-tests: {k}"),
        }
        return Ok(());
    }
    let mut adv = PuzzleAdversary::randomized(&inst, a.seed);
    let out = run_strategy(&inst, &strat, &mut adv)?;
    let correct = out.labels == adv.world();
    let truthful: Vec<usize> = (0..a.n).filter(|&v| out.labels[v]).collect();
    match fmt {
        Format::Json => print!(
            "{}",
            to_json(&json!({
                "n": a.n,
                "t": a.t,
                "seed": a.seed,
                "tests": out.tests,
                "bound": strat.max_tests(&inst),
                "correct": correct,
                "truthful": truthful,
                "history": out.history,
            }))
        ),
        Format::Text => {
            println!("tests: {}", out.tests);
            println!("bound: {}", strat.max_tests(&inst));
            println!("correct: {correct}");
            println!("truthful: {}", ids(&truthful));
        }
    }
    Ok(())
}

fn experiment_config(a: &ExperimentArgs) -> CliResult<ExperimentConfig> {
    let file: Option<ExperimentConfig> = match &a.config {
        Some(p) => Some(
            toml::from_str(&read(p)?).map_err(|e| CliError::Usage(format!("{}: {e}", p.display())))?,
        ),
        None => None,
    };
    let missing = |flag: &str| CliError::Usage(format!("--{flag} is required without --config"));
    let graph = if a.graph.given() {
        a.graph.spec(a.graph_seed.unwrap_or(0))?
    } else if let Some(f) = &file {
        let mut spec = f.graph.clone();
        if let (Some(s), GenSpec::RandomRegular { seed, .. }) = (a.graph_seed, &mut spec) {
            *seed = s;
        }
        spec
    } else if a.graph_file.is_some() {
        GenSpec::Complete { n: 0 }
    } else {
        return Err(missing("family"));
    };
    let truthful = match (a.truthful_count, a.truthful_fraction) {
        (Some(_), Some(_)) => {
            return Err(CliError::Usage(
                "--truthful-count and --truthful-fraction are exclusive".into(),
            ))
        }
        (Some(t), None) => TruthfulSize::Count(t),
        (None, Some(f)) => TruthfulSize::Fraction(f),
        (None, None) => file.as_ref().map(|f| f.truthful).ok_or_else(|| missing("truthful-fraction"))?,
    };
    let adversary: AdversarySpec = match &a.adversary {
        Some(s) => s.parse()?,
        None => file.as_ref().map(|f| f.adversary.clone()).ok_or_else(|| missing("adversary"))?,
    };
    let mode: ExperimentMode = match &a.mode {
        Some(s) => s.parse()?,
        None => file.as_ref().map(|f| f.mode).ok_or_else(|| missing("mode"))?,
    };
    let orient = match (&file, a.orient_k, a.orient_seed) {
        (_, None, None) => file.as_ref().and_then(|f| f.orient.clone()),
        (f, k, s) => {
            let base = f.as_ref().and_then(|f| f.orient.clone());
            Some(OrientSpec {
                k: k.or(base.as_ref().and_then(|b| b.k)),
                seed: s.or(base.as_ref().map(|b| b.seed)).unwrap_or(0),
            })
        }
    };
    Ok(ExperimentConfig {
        graph,
        orient,
        truthful,
        adversary,
        mode,
        delta: a.delta.or(file.as_ref().map(|f| f.delta)).ok_or_else(|| missing("delta"))?,
        trials: a.trials.or(file.as_ref().map(|f| f.trials)).ok_or_else(|| missing("trials"))?,
        seed: a.seed.or(file.as_ref().map(|f| f.seed)).unwrap_or(0),
        timing: a.timing || file.as_ref().is_some_and(|f| f.timing),
        search_budget: env_budget(
            SEARCH_BUDGET_VAR,
            file.as_ref().map_or(DEFAULT_SEARCH_BUDGET, |f| f.search_budget),
        )?,
    })
}

fn cmd_experiment(a: ExperimentArgs, fmt: Format) -> CliResult<()> {
    let cfg = experiment_config(&a)?;
    cfg.validate()?;
    let output = match &a.graph_file {
        Some(p) => {
            let mut g = load_graph(p)?;
            if let Some(o) = &cfg.orient {
                g = orient_regular(&g, o.k, o.seed)?.graph;
            }
            run_on_graph(&cfg, &g)?
        }
        None => run_experiment(&cfg)?,
    };
    if let Some(p) = &a.details {
        write(p, &to_json(&output.details))?;
    }
    let s = &output.summary;
    eprintln!(
        "trials: {}  errors: {}  soundness: {}  coverage min/mean: {:.6}/{:.6}",
        s.trials, s.errors, s.soundness_rate, s.min_coverage, s.mean_coverage
    );
    let text = match fmt {
        Format::Text => output.to_csv(),
        Format::Json => to_json(&json!({ "config": cfg, "records": output.records, "summary": output.summary })),
    };
    emit(a.out.as_deref(), &text)
}
