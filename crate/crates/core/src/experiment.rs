//! Batches of independent runs, their summaries, and parameter sweeps.
//!
//! Run `r` of a batch with master seed `s` draws from a generator seeded
//! with the `(r + 1)`-th output of SplitMix64 started at `s` (see
//! [`run_seed`]). Records are emitted in run order, so a batch is a pure
//! function of its parameters whatever the worker count.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::Path;

use rand::SeedableRng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hints::HintCatalog;
use crate::search::{run_search_with, SearchParams, Strategy};
use crate::stats::{self, CostSample};
use crate::{Exact, Real, SimRng};

/// Generator used for every run.
pub const RNG_NAME: &str = "xoshiro256++";

/// How per-run seeds are derived from the master seed.
pub const SEED_SCHEME: &str = "splitmix64(master + (run + 1) * 0x9e3779b97f4a7c15)";

/// SplitMix64 output function.
fn mix(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Seed of run `run` under master seed `master`.
pub fn run_seed(master: u64, run: u64) -> u64 {
    mix(master.wrapping_add(run.wrapping_add(1).wrapping_mul(0x9e37_79b9_7f4a_7c15)))
}

/// One run of a batch. Field names double as the CSV header.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub run: u64,
    pub seed: u64,
    pub strategy: Strategy,
    #[serde(rename = "M")]
    pub agents: usize,
    #[serde(rename = "p")]
    pub imitation_prob: f64,
    #[serde(rename = "B")]
    pub board_size: usize,
    pub t_star: f64,
    pub solved: bool,
    pub updates: u64,
    pub hint_selections: u64,
    pub correct_hint_selections: u64,
    #[serde(rename = "C")]
    pub cost: f64,
}

/// Runs `runs` independent searches. `params.seed` is the master seed.
///
/// `threads` sizes a dedicated worker pool; 0 uses the global one.
pub fn run_batch(params: &SearchParams, runs: u64, threads: usize) -> Result<Vec<RunRecord>> {
    params.validate()?;
    let catalog = HintCatalog::shared();
    let one = |run: u64| -> Result<RunRecord> {
        let seed = run_seed(params.seed, run);
        let out = run_search_with(params, catalog, SimRng::seed_from_u64(seed))?;
        Ok(RunRecord {
            run,
            seed,
            strategy: params.strategy,
            agents: params.agents,
            imitation_prob: params.imitation_prob,
            board_size: params.board_size,
            t_star: out.t_star,
            solved: out.solved,
            updates: out.updates,
            hint_selections: out.hint_selections,
            correct_hint_selections: out.correct_hint_selections,
            cost: out.computational_cost(),
        })
    };
    with_threads(threads, || {
        (0..runs)
            .into_par_iter()
            .map(one)
            .collect::<Result<Vec<_>>>()
    })?
}

/// Runs `f` on a dedicated pool of `threads` workers, or on the global pool
/// when `threads` is 0.
pub fn with_threads<T: Send>(threads: usize, f: impl FnOnce() -> T + Send) -> Result<T> {
    if threads == 0 {
        return Ok(f());
    }
    Ok(rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::Config(e.to_string()))?
        .install(f))
}

/// Observables of one batch.
///
/// `mean_C`, `stderr_C`, `rate` and `ks` use solved runs only; with censored
/// runs present the mean is a lower bound. `mean_C_all` counts censored
/// runs at their cutoff cost instead.
#[allow(non_snake_case)]
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub strategy: Strategy,
    pub M: usize,
    pub p: f64,
    pub B: usize,
    pub n_runs: usize,
    pub mean_C: Option<f64>,
    pub stderr_C: Option<f64>,
    pub mean_C_all: Option<f64>,
    pub lower_bound: bool,
    pub rate: Option<f64>,
    pub ks: Option<f64>,
    pub phi: Option<f64>,
    pub phi_stderr: Option<f64>,
    pub phi_null: Option<f64>,
    pub censored: usize,
    pub seed: u64,
    pub rng: String,
}

impl Summary {
    pub fn from_records(params: &SearchParams, records: &[RunRecord]) -> Summary {
        let sample: CostSample<Real> =
            CostSample::from_runs(records.iter().map(|r| (r.cost, r.solved)));
        let summary = stats::summarize(&sample).ok();
        let fit = stats::fit_exponential(&sample).ok();
        let phi = params
            .strategy
            .uses_board()
            .then(|| {
                stats::phi_from_records::<Real>(
                    records
                        .iter()
                        .map(|r| (r.hint_selections, r.correct_hint_selections)),
                )
                .ok()
            })
            .flatten();
        let phi_null = (params.strategy.uses_board() && params.board_size > 0)
            .then(|| stats::null_model_phi::<Real>(params.board_size).ok())
            .flatten();
        let costs: Vec<Real> = records.iter().map(|r| r.cost).collect();
        let mean_all = stats::mean_including_censored(&costs);
        Summary {
            strategy: params.strategy,
            M: params.agents,
            p: params.imitation_prob,
            B: params.board_size,
            n_runs: records.len(),
            mean_C: summary.map(|s| s.mean),
            stderr_C: summary.map(|s| s.stderr),
            mean_C_all: mean_all,
            lower_bound: sample.censored > 0,
            rate: fit.map(|f| f.rate),
            ks: fit.map(|f| f.ks_statistic),
            phi: phi.map(|p| p.phi),
            phi_stderr: phi.map(|p| p.stderr),
            phi_null,
            censored: sample.censored,
            seed: params.seed,
            rng: RNG_NAME.to_string(),
        }
    }
}

/// The parameter a sweep varies.
#[derive(Clone, Debug, PartialEq)]
pub enum SweepAxis {
    ImitationProb(Vec<f64>),
    Agents(Vec<usize>),
    BoardSize(Vec<usize>),
}

impl SweepAxis {
    pub fn len(&self) -> usize {
        match self {
            SweepAxis::ImitationProb(v) => v.len(),
            SweepAxis::Agents(v) => v.len(),
            SweepAxis::BoardSize(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn name(&self) -> &'static str {
        match self {
            SweepAxis::ImitationProb(_) => "p",
            SweepAxis::Agents(_) => "M",
            SweepAxis::BoardSize(_) => "B",
        }
    }

    /// `base` with the axis set to its `i`-th value.
    pub fn point(&self, base: &SearchParams, i: usize) -> SearchParams {
        let mut p = base.clone();
        match self {
            SweepAxis::ImitationProb(v) => p.imitation_prob = v[i],
            SweepAxis::Agents(v) => p.agents = v[i],
            SweepAxis::BoardSize(v) => p.board_size = v[i],
        }
        p
    }
}

/// One summary per axis point. Every point reuses the master seed, so
/// neighboring points are compared on common random numbers.
pub fn run_sweep(
    base: &SearchParams,
    axis: &SweepAxis,
    runs: u64,
    max_cost: Option<f64>,
    threads: usize,
) -> Result<Vec<Summary>> {
    if axis.is_empty() {
        return Err(Error::Config("sweep axis has no values".into()));
    }
    (0..axis.len())
        .map(|i| {
            let mut params = axis.point(base, i);
            if let Some(c) = max_cost {
                params = params.with_max_cost(c);
            }
            let records = run_batch(&params, runs, threads)?;
            Ok(Summary::from_records(&params, &records))
        })
        .collect()
}

/// Simulated and analytic null-model φ at one board size.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NullModelRow {
    #[serde(rename = "B")]
    pub board_size: usize,
    /// Closed form, as a reduced fraction.
    pub phi_null_exact: String,
    pub phi_null: f64,
    pub runs: usize,
    pub phi: Option<f64>,
    pub phi_stderr: Option<f64>,
    pub selections: u64,
    pub correct: u64,
}

/// Null-model φ for each board size; `runs == 0` gives the analytic column only.
pub fn null_model_table(
    base: &SearchParams,
    boards: &[usize],
    runs: u64,
    max_cost: Option<f64>,
    threads: usize,
) -> Result<Vec<NullModelRow>> {
    boards
        .iter()
        .map(|&b| {
            let exact = stats::null_model_phi::<Exact>(b)?;
            let phi_null = stats::null_model_phi::<Real>(b)?;
            let mut row = NullModelRow {
                board_size: b,
                phi_null_exact: exact.to_string(),
                phi_null,
                runs: 0,
                phi: None,
                phi_stderr: None,
                selections: 0,
                correct: 0,
            };
            if runs > 0 {
                let mut params = SearchParams {
                    strategy: Strategy::NullModel,
                    board_size: b,
                    ..base.clone()
                };
                if let Some(c) = max_cost {
                    params = params.with_max_cost(c);
                }
                let records = run_batch(&params, runs, threads)?;
                let est = stats::phi_from_records::<Real>(
                    records
                        .iter()
                        .map(|r| (r.hint_selections, r.correct_hint_selections)),
                )?;
                row.runs = est.runs;
                row.phi = Some(est.phi);
                row.phi_stderr = Some(est.stderr);
                row.selections = est.selections;
                row.correct = est.correct;
            }
            Ok(row)
        })
        .collect()
}

/// Output encoding.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Format {
    Csv,
    #[default]
    Json,
}

impl std::str::FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Format> {
        match s.trim() {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(Error::Config(format!("unknown format {other:?}"))),
        }
    }
}

/// Writes `rows` as CSV (header from the field names) or as a JSON array.
pub fn write_rows<T: Serialize, W: Write>(rows: &[T], format: Format, out: W) -> Result<()> {
    match format {
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            for row in rows {
                w.serialize(row)?;
            }
            w.flush()?;
        }
        Format::Json => write_json(&rows, out)?,
    }
    Ok(())
}

/// Pretty JSON followed by a newline.
pub fn write_json<T: Serialize + ?Sized, W: Write>(value: &T, mut out: W) -> Result<()> {
    serde_json::to_writer_pretty(&mut out, value)?;
    writeln!(out)?;
    Ok(())
}

pub fn read_records_csv<R: std::io::Read>(input: R) -> Result<Vec<RunRecord>> {
    csv::Reader::from_reader(input)
        .deserialize()
        .map(|r| r.map_err(Error::from))
        .collect()
}

/// Parses a list of integers: comma separated items, each a value or an
/// inclusive range `a..b`.
pub fn parse_int_list(s: &str) -> Result<Vec<usize>> {
    let bad = |item: &str| Error::Config(format!("bad integer list item {item:?}"));
    let mut out = Vec::new();
    for item in s.split(',').map(str::trim).filter(|i| !i.is_empty()) {
        match item.split_once("..") {
            Some((a, b)) => {
                let a: usize = a.trim().parse().map_err(|_| bad(item))?;
                let b: usize = b.trim().parse().map_err(|_| bad(item))?;
                if a > b {
                    return Err(bad(item));
                }
                out.extend(a..=b);
            }
            None => out.push(item.parse().map_err(|_| bad(item))?),
        }
    }
    if out.is_empty() {
        return Err(Error::Config(format!("empty list {s:?}")));
    }
    Ok(out)
}

/// Parses comma separated reals.
pub fn parse_real_list(s: &str) -> Result<Vec<f64>> {
    let out: Vec<f64> = s
        .split(',')
        .map(str::trim)
        .filter(|i| !i.is_empty())
        .map(|i| {
            i.parse()
                .map_err(|_| Error::Config(format!("bad number {i:?}")))
        })
        .collect::<Result<_>>()?;
    if out.is_empty() {
        return Err(Error::Config(format!("empty list {s:?}")));
    }
    Ok(out)
}

/// Keys accepted in a config file, one per command-line flag.
pub const CONFIG_KEYS: [&str; 10] = [
    "strategy",
    "agents",
    "imitation-prob",
    "board-size",
    "runs",
    "seed",
    "threads",
    "max-cost",
    "output",
    "format",
];

/// Flat `key = value` settings; `#` starts a comment.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Settings {
    values: BTreeMap<String, String>,
}

impl Settings {
    pub fn parse(text: &str) -> Result<Settings> {
        let mut values = BTreeMap::new();
        for (n, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("line {}: expected key = value", n + 1)))?;
            let k = k.trim().replace('_', "-");
            if !CONFIG_KEYS.contains(&k.as_str()) {
                return Err(Error::Config(format!("line {}: unknown key {k:?}", n + 1)));
            }
            values.insert(k, v.trim().to_string());
        }
        Ok(Settings { values })
    }

    pub fn load(path: &Path) -> Result<Settings> {
        Settings::parse(&std::fs::read_to_string(path)?)
    }

    /// Sets `key` unless `value` is `None`; flags layered over a file.
    pub fn set(&mut self, key: &str, value: Option<String>) {
        if let Some(v) = value {
            self.values.insert(key.to_string(), v);
        }
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(String::as_str)
    }

    /// Parsed value of `key`, or `default` when unset.
    pub fn parsed<T: std::str::FromStr>(&self, key: &str, default: T) -> Result<T> {
        match self.get(key) {
            None => Ok(default),
            Some(v) => v
                .parse()
                .map_err(|_| Error::Config(format!("invalid value {v:?} for {key}"))),
        }
    }
}

/// The catalog as flat rows.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CatalogRow {
    pub id: u16,
    pub column: u8,
    pub epsilon: u8,
    pub pairs: String,
    pub correct: bool,
}

pub fn catalog_rows(catalog: &HintCatalog) -> Vec<CatalogRow> {
    catalog
        .iter()
        .map(|(id, h)| CatalogRow {
            id: id.0,
            column: h.column().index() as u8,
            epsilon: h.epsilon(),
            pairs: h
                .pairs()
                .map(|(l, d)| format!("{l}={d}"))
                .collect::<Vec<_>>()
                .join(","),
            correct: catalog.is_correct(id),
        })
        .collect()
}
