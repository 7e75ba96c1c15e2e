use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use cryptarith::experiment::{self, Format, Settings, SweepAxis, RNG_NAME, SEED_SCHEME};
use cryptarith::hints::HINT_COUNT;
use cryptarith::search::{SearchParams, Strategy};
use cryptarith::{landscape, Error, HintCatalog, Result};

#[derive(Parser)]
#[command(
    name = "cryptarith",
    version,
    about = "Collective search on DONALD + GERALD = ROBERT"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Independent runs at one parameter point: per-run records and a summary.
    Simulate(Common),
    /// One summary per value of the single list-valued parameter.
    Sweep(Common),
    /// Exhaustive census of the minima of the cost landscape.
    Landscape(Common),
    /// All 351 column hints with correctness flags.
    Catalog(Common),
    /// Analytic and simulated correct-hint probability on random frozen boards.
    NullModel(Common),
}

/// Flags shared by every subcommand; each overrides the config file key of
/// the same name.
#[derive(Args)]
struct Common {
    /// independent, imitative, blackboard or null-model.
    #[arg(long)]
    strategy: Option<String>,
    /// Group size M; sweeps take a list such as 2,5,8 or 1..10.
    #[arg(long)]
    agents: Option<String>,
    /// Imitation probability p; sweeps take a list such as 0,0.5,1.
    #[arg(long)]
    imitation_prob: Option<String>,
    /// Board capacity B (351 = unlimited); sweeps take a list such as 3..30.
    #[arg(long)]
    board_size: Option<String>,
    #[arg(long)]
    runs: Option<String>,
    /// Master seed.
    #[arg(long)]
    seed: Option<String>,
    /// Worker threads; the output does not depend on it.
    #[arg(long)]
    threads: Option<String>,
    /// Censor runs whose computational cost would exceed this value.
    #[arg(long)]
    max_cost: Option<String>,
    /// Output file; standard output when absent or "-".
    #[arg(long)]
    output: Option<String>,
    /// csv or json.
    #[arg(long)]
    format: Option<String>,
    /// Flat key = value file using the flag names as keys.
    #[arg(long)]
    config: Option<PathBuf>,
}

impl Common {
    fn settings(self) -> Result<Settings> {
        let mut s = match &self.config {
            Some(path) => Settings::load(path)?,
            None => Settings::default(),
        };
        s.set("strategy", self.strategy);
        s.set("agents", self.agents);
        s.set("imitation-prob", self.imitation_prob);
        s.set("board-size", self.board_size);
        s.set("runs", self.runs);
        s.set("seed", self.seed);
        s.set("threads", self.threads);
        s.set("max-cost", self.max_cost);
        s.set("output", self.output);
        s.set("format", self.format);
        Ok(s)
    }
}

/// Run-level options resolved from settings.
struct Plan {
    params: SearchParams,
    agents: Vec<usize>,
    probs: Vec<f64>,
    boards: Vec<usize>,
    runs: u64,
    threads: usize,
    max_cost: Option<f64>,
    format: Format,
}

#[derive(Serialize)]
struct Meta {
    strategy: Strategy,
    runs: u64,
    seed: u64,
    max_cost: Option<f64>,
    rng: &'static str,
    seed_scheme: &'static str,
}

/// 0 selects the global pool and is only reachable by omitting the flag.
fn threads(s: &Settings) -> Result<usize> {
    let threads: usize = s.parsed("threads", 0)?;
    if s.get("threads").is_some() && threads == 0 {
        return Err(Error::Config("threads must be at least 1".into()));
    }
    Ok(threads)
}

fn plan(s: &Settings, default_runs: u64) -> Result<Plan> {
    let strategy: Strategy = s.parsed("strategy", Strategy::Independent)?;
    let default_board = if strategy.uses_board() { HINT_COUNT } else { 0 };
    let agents = experiment::parse_int_list(s.get("agents").unwrap_or("10"))?;
    let probs = experiment::parse_real_list(s.get("imitation-prob").unwrap_or("0"))?;
    let boards = match s.get("board-size") {
        Some(v) => experiment::parse_int_list(v)?,
        None => vec![default_board],
    };
    let threads = threads(s)?;
    let max_cost = s
        .get("max-cost")
        .map(|v| {
            v.parse::<f64>()
                .map_err(|_| Error::Config(format!("invalid max-cost {v:?}")))
        })
        .transpose()?;
    if let Some(c) = max_cost {
        if !(c.is_finite() && c > 0.0) {
            return Err(Error::Config(format!("max-cost {c} must be positive")));
        }
    }
    let params = SearchParams {
        strategy,
        agents: agents[0],
        imitation_prob: probs[0],
        board_size: boards[0],
        max_time: None,
        seed: s.parsed("seed", 0)?,
    };
    Ok(Plan {
        params,
        agents,
        probs,
        boards,
        runs: s.parsed("runs", default_runs)?,
        threads,
        max_cost,
        format: s.parsed("format", Format::Json)?,
    })
}

impl Plan {
    fn meta(&self) -> Meta {
        Meta {
            strategy: self.params.strategy,
            runs: self.runs,
            seed: self.params.seed,
            max_cost: self.max_cost,
            rng: RNG_NAME,
            seed_scheme: SEED_SCHEME,
        }
    }

    fn single_point(&self) -> Result<()> {
        if self.agents.len() > 1 || self.probs.len() > 1 || self.boards.len() > 1 {
            return Err(Error::Config(
                "lists of values are only accepted by sweep".into(),
            ));
        }
        Ok(())
    }
}

fn output(s: &Settings) -> Result<Box<dyn Write>> {
    Ok(match s.get("output") {
        None | Some("-") => Box::new(BufWriter::new(io::stdout().lock())),
        Some(path) => Box::new(BufWriter::new(File::create(path)?)),
    })
}

fn simulate(s: &Settings) -> Result<()> {
    let plan = plan(s, 1000)?;
    plan.single_point()?;
    let mut params = plan.params.clone();
    if let Some(c) = plan.max_cost {
        params = params.with_max_cost(c);
    }
    if plan.runs == 0 {
        return Err(Error::Config("runs must be at least 1".into()));
    }
    let records = experiment::run_batch(&params, plan.runs, plan.threads)?;
    let mut out = output(s)?;
    match plan.format {
        Format::Csv => experiment::write_rows(&records, Format::Csv, &mut out)?,
        Format::Json => {
            #[derive(Serialize)]
            struct Doc<'a> {
                config: Meta,
                params: &'a SearchParams,
                summary: experiment::Summary,
                runs: &'a [experiment::RunRecord],
            }
            let doc = Doc {
                config: plan.meta(),
                params: &params,
                summary: experiment::Summary::from_records(&params, &records),
                runs: &records,
            };
            experiment::write_json(&doc, &mut out)?;
        }
    }
    out.flush()?;
    Ok(())
}

fn sweep(s: &Settings) -> Result<()> {
    let plan = plan(s, 1000)?;
    let mut axes = Vec::new();
    if plan.agents.len() > 1 {
        axes.push(SweepAxis::Agents(plan.agents.clone()));
    }
    if plan.probs.len() > 1 {
        axes.push(SweepAxis::ImitationProb(plan.probs.clone()));
    }
    if plan.boards.len() > 1 {
        axes.push(SweepAxis::BoardSize(plan.boards.clone()));
    }
    if axes.len() != 1 {
        return Err(Error::Config(
            "sweep needs exactly one of --agents, --imitation-prob, --board-size as a list".into(),
        ));
    }
    if plan.runs == 0 {
        return Err(Error::Config("runs must be at least 1".into()));
    }
    let axis = &axes[0];
    for i in 0..axis.len() {
        axis.point(&plan.params, i).validate()?;
    }
    let points = experiment::run_sweep(&plan.params, axis, plan.runs, plan.max_cost, plan.threads)?;
    let mut out = output(s)?;
    match plan.format {
        Format::Csv => experiment::write_rows(&points, Format::Csv, &mut out)?,
        Format::Json => {
            #[derive(Serialize)]
            struct Doc<'a> {
                config: Meta,
                axis: &'static str,
                points: &'a [experiment::Summary],
            }
            let doc = Doc {
                config: plan.meta(),
                axis: axis.name(),
                points: &points,
            };
            experiment::write_json(&doc, &mut out)?;
        }
    }
    out.flush()?;
    Ok(())
}

fn landscape(s: &Settings) -> Result<()> {
    let format: Format = s.parsed("format", Format::Json)?;
    let threads = threads(s)?;
    let report = experiment::with_threads(threads, landscape::enumerate_minima)?;
    let mut out = output(s)?;
    match format {
        Format::Csv => experiment::write_rows(&report.minima, Format::Csv, &mut out)?,
        Format::Json => experiment::write_json(&report, &mut out)?,
    }
    out.flush()?;
    Ok(())
}

fn catalog(s: &Settings) -> Result<()> {
    let format: Format = s.parsed("format", Format::Json)?;
    let rows = experiment::catalog_rows(HintCatalog::shared());
    let mut out = output(s)?;
    experiment::write_rows(&rows, format, &mut out)?;
    out.flush()?;
    Ok(())
}

fn null_model(s: &Settings) -> Result<()> {
    let mut s = s.clone();
    if s.get("board-size").is_none() {
        s.set("board-size", Some("7,20,351".into()));
    }
    if s.get("strategy").is_none() {
        s.set("strategy", Some("null-model".into()));
    }
    let plan = plan(&s, 1000)?;
    let max_cost = plan.max_cost.or(Some(0.1));
    let rows = experiment::null_model_table(
        &plan.params,
        &plan.boards,
        plan.runs,
        max_cost,
        plan.threads,
    )?;
    let mut out = output(&s)?;
    match plan.format {
        Format::Csv => experiment::write_rows(&rows, Format::Csv, &mut out)?,
        Format::Json => {
            #[derive(Serialize)]
            struct Doc<'a> {
                config: Meta,
                #[serde(rename = "M")]
                agents: usize,
                rows: &'a [experiment::NullModelRow],
            }
            let mut config = plan.meta();
            config.max_cost = max_cost;
            experiment::write_json(
                &Doc {
                    config,
                    agents: plan.params.agents,
                    rows: &rows,
                },
                &mut out,
            )?;
        }
    }
    out.flush()?;
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Simulate(c) => simulate(&c.settings()?),
        Command::Sweep(c) => sweep(&c.settings()?),
        Command::Landscape(c) => landscape(&c.settings()?),
        Command::Catalog(c) => catalog(&c.settings()?),
        Command::NullModel(c) => null_model(&c.settings()?),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Error::Io(e)) if e.kind() == io::ErrorKind::BrokenPipe => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("cryptarith: {e}");
            ExitCode::FAILURE
        }
    }
}
