//! Command-line interface.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::Context;
use clap::{Args, Parser, Subcommand, ValueEnum};
use nervekit_core::bounds::{bound_report, sandwich_check, MyersConvention, SpaceFormParams};
use nervekit_core::cover::Cover;
use nervekit_core::dynamics::{
    growth_table, iterate_cover, stage_bound_check, ActionSpec, FolnerSequence, GrowthConfig, GrowthTable, DEFAULT_GRID_RESOLUTION,
    DEFAULT_MEMBER_CAP,
};
use nervekit_core::homology::{betti_numbers, Coefficients};
use nervekit_core::irreducible::reduce;
use nervekit_core::nerve::build_nerve;
use nervekit_core::rational::{format_rational, Rational};
use nervekit_core::realization::{gh_upper_bound, partition_of_unity, vertex_metric};
use nervekit_core::space::Space;
use nervekit_core::scenarios::{
    catmap_reference_entropy, prismatic_profile, pyramid_growth, registry, scenario, shift_truncation_growth, ExpectedKind, Scenario,
    ScenarioKind, SCENARIO_NAMES,
};
use rayon::prelude::*;
use serde::Serialize;

use crate::files::read_cover;
use crate::output::{
    fmt_real, real, write_growth_csv, write_json, BoundsJson, GrowthJson, HomologyJson, NerveJson, RealizeJson, ReduceJson,
};
use crate::system::{parse_control, parse_folner, parse_system};

/// Largest subcover-search budget (members per exhaustive search).
pub const MAX_BUDGET: usize = 64;

#[derive(Debug, thiserror::Error)]
pub enum RunError {
    #[error(transparent)]
    Invalid(#[from] anyhow::Error),
    #[error("{0}")]
    Truncated(String),
}

impl RunError {
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Invalid(_) => 1,
            RunError::Truncated(_) => 2,
        }
    }
}

impl From<nervekit_core::Error> for RunError {
    fn from(e: nervekit_core::Error) -> Self {
        RunError::Invalid(e.into())
    }
}

type RunResult = Result<(), RunError>;

#[derive(Debug, Parser)]
#[command(name = "nervekit", version, about = "Nerves of open covers, their homology and growth under group actions")]
pub struct Cli {
    /// Members per exhaustive subcover search.
    #[arg(long, global = true, env = "NERVEKIT_BUDGET", default_value_t = 24)]
    pub budget: usize,
    /// Worker threads (defaults to all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct CoverArgs {
    /// JSON cover file.
    #[arg(long)]
    pub cover: PathBuf,
    /// Output file (stdout when absent).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum CoeffArg {
    Rational,
    Mod2,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum ConventionArg {
    Standard,
    Rescaled,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Nerve of a cover.
    Nerve {
        #[command(flatten)]
        io: CoverArgs,
        #[arg(long, default_value_t = 3)]
        max_dim: usize,
    },
    /// Betti numbers of the nerve.
    Homology {
        #[command(flatten)]
        io: CoverArgs,
        #[arg(long, default_value_t = 3)]
        max_dim: usize,
        #[arg(long, value_enum, default_value = "rational")]
        coefficients: CoeffArg,
    },
    /// Remove redundant members.
    Reduce {
        #[command(flatten)]
        io: CoverArgs,
    },
    /// Growth table of an iterated cover.
    Grow(GrowArgs),
    /// Comparison-geometry bounds.
    Bounds(BoundsArgs),
    /// Partition of unity, skeleton metric and Gromov-Hausdorff bound.
    Realize {
        #[command(flatten)]
        io: CoverArgs,
        /// Sample points per circle axis.
        #[arg(long, default_value_t = 8)]
        samples: usize,
    },
    /// Shipped scenarios.
    Example {
        #[command(subcommand)]
        action: ExampleCommand,
    },
}

#[derive(Debug, Args)]
pub struct GrowArgs {
    /// `doubling:K`, `affine:K:SHIFT`, `matrix:a,b;c,d`, `diag:a,b`, `catmap`, `product:S1+S2`, `shift:D:P`.
    #[arg(long)]
    pub system: String,
    /// Base cover (not needed for `shift:`).
    #[arg(long)]
    pub cover: Option<PathBuf>,
    #[arg(long, default_value_t = 5)]
    pub stages: u32,
    #[arg(long, default_value_t = 1)]
    pub k: usize,
    /// `standard`, `log` or `custom:c1,c2,...`.
    #[arg(long, default_value = "standard")]
    pub control: String,
    /// `cube` or `rect:a1,a2,...`.
    #[arg(long)]
    pub folner: Option<String>,
    #[arg(long, default_value_t = DEFAULT_MEMBER_CAP)]
    pub member_cap: usize,
    /// Grid resolution used when a non-diagonal action forces grid regions.
    #[arg(long, default_value_t = DEFAULT_GRID_RESOLUTION)]
    pub resolution: u32,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct BoundsArgs {
    /// Ricci lower bound (curvature of the model space).
    #[arg(long, allow_hyphen_values = true)]
    pub lambda: f64,
    #[arg(long)]
    pub dim: u32,
    #[arg(long)]
    pub diameter: f64,
    #[arg(long)]
    pub epsilon: f64,
    #[arg(long, default_value_t = 0.0)]
    pub ent0: f64,
    #[arg(long, value_enum, default_value = "standard")]
    pub convention: ConventionArg,
    /// Size of a known generator, for the sandwich check.
    #[arg(long)]
    pub generator_size: Option<u64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum ExampleCommand {
    /// List shipped scenarios.
    List,
    /// Run a scenario (or `all`) and write `<name>.csv` / `<name>.json`.
    Run {
        name: String,
        #[arg(long)]
        stages: Option<u32>,
        #[arg(long, default_value = "nervekit-examples")]
        out: PathBuf,
    },
}

fn sink(out: Option<&Path>) -> anyhow::Result<Box<dyn Write>> {
    Ok(match out {
        Some(p) => Box::new(BufWriter::new(File::create(p).with_context(|| format!("cannot create {}", p.display()))?)),
        None => Box::new(BufWriter::new(std::io::stdout().lock())),
    })
}

fn coefficients(c: CoeffArg) -> Coefficients {
    match c {
        CoeffArg::Rational => Coefficients::Rational,
        CoeffArg::Mod2 => Coefficients::Mod2,
    }
}

pub fn run(cli: Cli) -> RunResult {
    if cli.budget == 0 || cli.budget > MAX_BUDGET {
        return Err(anyhow::anyhow!("--budget must be between 1 and {MAX_BUDGET}").into());
    }
    if let Some(t) = cli.threads {
        if t == 0 {
            return Err(anyhow::anyhow!("--threads must be positive").into());
        }
        // A second initialisation in the same process keeps the first pool.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(t).build_global();
    }
    match cli.command {
        Command::Nerve { io, max_dim } => {
            let c = read_cover(&io.cover)?;
            let n = build_nerve(&c, max_dim).context("nerve construction failed")?;
            let mut w = sink(io.out.as_deref())?;
            write_json(&NerveJson::new(&n, max_dim), &mut w)?;
            w.flush().map_err(anyhow::Error::from)?;
        }
        Command::Homology { io, max_dim, coefficients: co } => {
            let c = read_cover(&io.cover)?;
            let n = build_nerve(&c, max_dim).context("nerve construction failed")?;
            let mode = coefficients(co);
            let b = betti_numbers(&n, mode);
            let mut w = sink(io.out.as_deref())?;
            write_json(&HomologyJson::new(&n, mode, &b), &mut w)?;
            w.flush().map_err(anyhow::Error::from)?;
        }
        Command::Reduce { io } => {
            let c = read_cover(&io.cover)?;
            let t = reduce(&c).context("reduction failed")?;
            let mut w = sink(io.out.as_deref())?;
            write_json(&ReduceJson::new(&t)?, &mut w)?;
            w.flush().map_err(anyhow::Error::from)?;
        }
        Command::Grow(g) => return grow(g, cli.budget),
        Command::Bounds(b) => bounds(b)?,
        Command::Realize { io, samples } => {
            if samples == 0 {
                return Err(anyhow::anyhow!("--samples must be positive").into());
            }
            let c = read_cover(&io.cover)?;
            let pts = c.space().sample_grid(samples);
            let pou = partition_of_unity(&c, &pts).context("partition of unity failed")?;
            let n = build_nerve(&c, 1)?;
            let vm = vertex_metric(&c, &n).context("skeleton metric failed")?;
            let gh = gh_upper_bound(&vm).ok();
            let mut w = sink(io.out.as_deref())?;
            write_json(&RealizeJson::new(&pou, &vm, gh.as_ref()), &mut w)?;
            w.flush().map_err(anyhow::Error::from)?;
        }
        Command::Example { action } => return example(action, cli.budget),
    }
    Ok(())
}

fn grow(g: GrowArgs, budget: usize) -> RunResult {
    let act = parse_system(&g.system)?;
    if g.member_cap == 0 || g.resolution == 0 {
        return Err(anyhow::anyhow!("caps must be positive").into());
    }
    let cover = match (&act, &g.cover) {
        (ActionSpec::ShiftTruncation { .. }, _) => Cover::trivial(Space::Circle),
        (_, Some(p)) => read_cover(p)?,
        (_, None) => return Err(anyhow::anyhow!("--cover is required for {:?}", g.system).into()),
    };
    let mut cfg = GrowthConfig::new(g.stages, g.k);
    cfg.control = parse_control(&g.control)?;
    cfg.budget = budget;
    cfg.member_cap = g.member_cap;
    cfg.grid_resolution = g.resolution;
    let rank = match &act {
        ActionSpec::ShiftTruncation { .. } => 1,
        a => a.rank(),
    };
    cfg.folner = g.folner.as_deref().map(|f| parse_folner(f, rank)).transpose()?;
    let t = growth_table(&cover, &act, &cfg).context("growth computation failed")?;
    let mut w = sink(g.out.as_deref())?;
    match g.format {
        Format::Csv => write_growth_csv(&t, &mut w)?,
        Format::Json => write_json(&GrowthJson::new(&t), &mut w)?,
    }
    w.flush().map_err(anyhow::Error::from)?;
    truncation(&t)
}

fn truncation(t: &GrowthTable) -> RunResult {
    if t.truncated {
        return Err(RunError::Truncated(format!("member cap reached; {} stage(s) written", t.rows.len())));
    }
    Ok(())
}

fn bounds(b: BoundsArgs) -> anyhow::Result<()> {
    let convention = match b.convention {
        ConventionArg::Standard => MyersConvention::Standard,
        ConventionArg::Rescaled => MyersConvention::Rescaled,
    };
    let p = SpaceFormParams::new(b.lambda, b.dim, b.diameter, b.epsilon)?.with_convention(convention);
    let r = bound_report(&p, b.ent0)?;
    let s = b.generator_size.map(|g| sandwich_check(b.ent0, g, Some(&p))).transpose()?;
    let mut w = sink(b.out.as_deref())?;
    write_json(&BoundsJson::new(&r, s.as_ref()), &mut w)?;
    w.flush()?;
    Ok(())
}

#[derive(Debug, Serialize)]
struct ExpectedJson {
    quantity: &'static str,
    value: String,
    source: &'static str,
}

#[derive(Debug, Serialize)]
struct StageDiameter {
    n: u32,
    gh_upper_bound: String,
}

#[derive(Debug, Serialize)]
struct ScenarioJson {
    name: &'static str,
    summary: &'static str,
    stages: u32,
    k: usize,
    expected: Vec<ExpectedJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    stage_bound_pass: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    reference_entropy: Option<f64>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    skeleton_gh: Vec<StageDiameter>,
    #[serde(skip_serializing_if = "Option::is_none")]
    profile: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    growth: Option<GrowthJson>,
}

fn source(k: ExpectedKind) -> &'static str {
    match k {
        ExpectedKind::Published => "published",
        ExpectedKind::Elementary => "elementary",
        ExpectedKind::Computed => "computed",
    }
}

/// Gromov-Hausdorff bounds for the skeletons of the iterated covers.
pub fn skeleton_gh(cover: &Cover, act: &ActionSpec, stages: u32) -> anyhow::Result<Vec<(u32, Rational)>> {
    let folner = FolnerSequence::cubes(act.rank());
    (1..=stages)
        .map(|n| {
            let it = iterate_cover(cover, act, &folner.set(n), DEFAULT_GRID_RESOLUTION)?;
            let nerve = build_nerve(&it.cover, 1)?;
            let vm = vertex_metric(&it.cover, &nerve)?;
            Ok((n, gh_upper_bound(&vm)?))
        })
        .collect()
}

/// Runs one scenario, writing its files into `dir`; returns whether it was truncated.
pub fn run_scenario(s: &Scenario, stages: u32, budget: usize, dir: &Path) -> anyhow::Result<bool> {
    let mut json = ScenarioJson {
        name: s.name,
        summary: s.summary,
        stages,
        k: s.k,
        expected: s.expected.iter().map(|e| ExpectedJson { quantity: e.quantity, value: e.value.clone(), source: source(e.kind) }).collect(),
        stage_bound_pass: None,
        reference_entropy: None,
        skeleton_gh: Vec::new(),
        profile: None,
        growth: None,
    };
    let mut truncated = false;
    let csv_path = dir.join(format!("{}.csv", s.name));
    match &s.kind {
        ScenarioKind::Iterated { cover, action, folner, s0 } => {
            let mut cfg = GrowthConfig::new(stages, s.k);
            cfg.budget = budget;
            cfg.folner = Some(folner.clone());
            let t = growth_table(cover, action, &cfg)?;
            json.stage_bound_pass = Some(stage_bound_check(&t, *s0).pass);
            if s.name == "catmap" {
                json.reference_entropy = real(catmap_reference_entropy());
            }
            if matches!(action, ActionSpec::CircleTimes(_)) {
                json.skeleton_gh = skeleton_gh(cover, action, stages.min(8))?
                    .into_iter()
                    .map(|(n, g)| StageDiameter { n, gh_upper_bound: format_rational(&g) })
                    .collect();
            }
            let mut f = BufWriter::new(File::create(&csv_path)?);
            write_growth_csv(&t, &mut f)?;
            f.flush()?;
            truncated = t.truncated;
            json.growth = Some(GrowthJson::new(&t));
        }
        ScenarioKind::Shift { delta0, p } => {
            let sizes: Vec<u64> = (1..=stages as u64).collect();
            let t = shift_truncation_growth(*delta0, *p, &sizes, s.k)?;
            json.stage_bound_pass = Some(stage_bound_check(&t, *delta0).pass);
            let mut f = BufWriter::new(File::create(&csv_path)?);
            write_growth_csv(&t, &mut f)?;
            f.flush()?;
            json.growth = Some(GrowthJson::new(&t));
        }
        ScenarioKind::Pyramid { sizes } => {
            let rows = pyramid_growth(sizes, s.k as u64);
            let mut w = csv::Writer::from_writer(BufWriter::new(File::create(&csv_path)?));
            let mut header = vec!["sizeF".to_string()];
            header.extend((0..=s.k).map(|i| format!("ent{i}")));
            w.write_record(&header)?;
            for (size, row) in sizes.iter().zip(&rows) {
                let mut rec = vec![size.to_string()];
                rec.extend(row.iter().map(|&e| fmt_real(e)));
                w.write_record(&rec)?;
            }
            w.flush()?;
        }
        ScenarioKind::Prismatic { g0 } => {
            json.profile = Some((0..*g0).map(|k| prismatic_profile(*g0, k).map(|v| v.to_string())).collect::<Result<_, _>>()?);
        }
    }
    let mut f = BufWriter::new(File::create(dir.join(format!("{}.json", s.name)))?);
    write_json(&json, &mut f)?;
    f.flush()?;
    Ok(truncated)
}

fn example(action: ExampleCommand, budget: usize) -> RunResult {
    match action {
        ExampleCommand::List => {
            let mut out = std::io::stdout().lock();
            for s in registry() {
                writeln!(out, "{:<18} {}", s.name, s.summary).map_err(anyhow::Error::from)?;
            }
            Ok(())
        }
        ExampleCommand::Run { name, stages, out } => {
            if stages == Some(0) {
                return Err(anyhow::anyhow!("--stages must be positive").into());
            }
            let chosen: Vec<Scenario> = if name == "all" {
                registry()
            } else {
                vec![scenario(&name).map_err(|_| anyhow::anyhow!("unknown scenario {name:?}; one of {}", SCENARIO_NAMES.join(", ")))?]
            };
            std::fs::create_dir_all(&out).with_context(|| format!("cannot create {}", out.display()))?;
            let results: Vec<anyhow::Result<bool>> = chosen
                .par_iter()
                .map(|s| {
                    let n = match s.kind {
                        ScenarioKind::Iterated { .. } | ScenarioKind::Shift { .. } => stages.unwrap_or(s.stages),
                        _ => s.stages,
                    };
                    run_scenario(s, n, budget, &out).with_context(|| format!("scenario {}", s.name))
                })
                .collect();
            let mut truncated = Vec::new();
            for (s, r) in chosen.iter().zip(results) {
                if r? {
                    truncated.push(s.name);
                }
            }
            if truncated.is_empty() {
                Ok(())
            } else {
                Err(RunError::Truncated(format!("member cap reached in {}", truncated.join(", "))))
            }
        }
    }
}
