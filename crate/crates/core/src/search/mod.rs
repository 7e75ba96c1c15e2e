//! Group search dynamics: independent agents, imitative learning and the
//! blackboard organization.
//!
//! Every strategy shares one clock. The search starts at `t = 1`; each
//! micro-update touches one uniformly chosen agent and advances time by
//! `1/M`. The run halts as soon as the updated agent holds the solution.
//! Time is never accumulated in floating point: after `n` updates it is
//! `1 + n/M`.

mod blackboard;
mod imitation;

use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use serde::{Deserialize, Serialize};

use crate::draw::pick;
use crate::error::{Error, Result};
use crate::hints::{HintCatalog, HintId, HINT_COUNT};
use crate::puzzle::{Assignment, STATE_COUNT};
use crate::SimRng;

pub use blackboard::{Blackboard, PostOutcome};
pub use imitation::{disagreement, imitate};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Strategy {
    Independent,
    Imitative,
    Blackboard,
    /// Blackboard dynamics over a frozen, randomly drawn board.
    NullModel,
}

impl Strategy {
    pub fn as_str(self) -> &'static str {
        match self {
            Strategy::Independent => "independent",
            Strategy::Imitative => "imitative",
            Strategy::Blackboard => "blackboard",
            Strategy::NullModel => "null-model",
        }
    }

    pub fn uses_board(self) -> bool {
        matches!(self, Strategy::Blackboard | Strategy::NullModel)
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Strategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Strategy> {
        match s.trim() {
            "independent" => Ok(Strategy::Independent),
            "imitative" => Ok(Strategy::Imitative),
            "blackboard" => Ok(Strategy::Blackboard),
            "null-model" => Ok(Strategy::NullModel),
            other => Err(Error::InvalidParams(format!("unknown strategy {other:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SearchParams {
    pub strategy: Strategy,
    /// Group size M.
    pub agents: usize,
    /// Imitation probability p; only read by the imitative strategy.
    pub imitation_prob: f64,
    /// Board capacity B; 351 means unlimited.
    pub board_size: usize,
    /// Censoring time in units of t.
    pub max_time: Option<f64>,
    pub seed: u64,
}

impl SearchParams {
    pub fn independent(agents: usize, seed: u64) -> SearchParams {
        SearchParams {
            strategy: Strategy::Independent,
            agents,
            imitation_prob: 0.0,
            board_size: 0,
            max_time: None,
            seed,
        }
    }

    pub fn imitative(agents: usize, imitation_prob: f64, seed: u64) -> SearchParams {
        SearchParams {
            strategy: Strategy::Imitative,
            imitation_prob,
            ..SearchParams::independent(agents, seed)
        }
    }

    pub fn blackboard(agents: usize, board_size: usize, seed: u64) -> SearchParams {
        SearchParams {
            strategy: Strategy::Blackboard,
            board_size,
            ..SearchParams::independent(agents, seed)
        }
    }

    pub fn null_model(agents: usize, board_size: usize, seed: u64) -> SearchParams {
        SearchParams {
            strategy: Strategy::NullModel,
            board_size,
            ..SearchParams::independent(agents, seed)
        }
    }

    pub fn with_max_time(mut self, max_time: f64) -> SearchParams {
        self.max_time = Some(max_time);
        self
    }

    /// Censor once the computational cost would exceed `max_cost`.
    pub fn with_max_cost(self, max_cost: f64) -> SearchParams {
        let max_time = max_cost * STATE_COUNT as f64 / self.agents.max(1) as f64;
        self.with_max_time(max_time)
    }

    pub fn validate(&self) -> Result<()> {
        if self.agents < 1 {
            return Err(Error::InvalidParams("group size must be at least 1".into()));
        }
        if !(0.0..=1.0).contains(&self.imitation_prob) {
            return Err(Error::InvalidParams(format!(
                "imitation probability {} outside [0, 1]",
                self.imitation_prob
            )));
        }
        if self.board_size > HINT_COUNT {
            return Err(Error::InvalidParams(format!(
                "board size {} above {HINT_COUNT}",
                self.board_size
            )));
        }
        if self.strategy == Strategy::NullModel && self.board_size == 0 {
            return Err(Error::InvalidParams(
                "null model needs a board size of at least 1".into(),
            ));
        }
        if let Some(t) = self.max_time {
            if !t.is_finite() || t <= 0.0 {
                return Err(Error::InvalidParams(format!(
                    "max time {t} must be positive"
                )));
            }
        }
        Ok(())
    }

    /// Largest update count that keeps `t` within `max_time`.
    fn update_limit(&self) -> Option<u64> {
        self.max_time
            .map(|t| (self.agents as f64 * (t - 1.0)).floor().max(0.0) as u64)
    }
}

/// Halting time and telemetry of one run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SearchOutcome {
    pub agents: usize,
    /// Halting time t*, `1 + updates / M`.
    pub t_star: f64,
    pub solved: bool,
    pub updates: u64,
    pub hint_selections: u64,
    pub correct_hint_selections: u64,
}

impl SearchOutcome {
    fn new(agents: usize, updates: u64, solved: bool, selections: u64, correct: u64) -> Self {
        SearchOutcome {
            agents,
            t_star: (agents as u64 + updates) as f64 / agents as f64,
            solved,
            updates,
            hint_selections: selections,
            correct_hint_selections: correct,
        }
    }

    /// `M t* / 10!`, evaluated as `(M + updates) / 10!`.
    pub fn computational_cost(&self) -> f64 {
        (self.agents as u64 + self.updates) as f64 / STATE_COUNT as f64
    }
}

/// The M agents' assignments.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Group {
    agents: Vec<Assignment>,
}

impl Group {
    /// M independent uniform draws from all 10! assignments.
    pub fn init<R: Rng + ?Sized>(agents: usize, rng: &mut R) -> Group {
        Group {
            agents: (0..agents).map(|_| Assignment::random(rng)).collect(),
        }
    }

    pub fn from_assignments(agents: Vec<Assignment>) -> Group {
        Group { agents }
    }

    pub fn len(&self) -> usize {
        self.agents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.agents.is_empty()
    }

    pub fn agents(&self) -> &[Assignment] {
        &self.agents
    }

    pub fn get(&self, i: usize) -> &Assignment {
        &self.agents[i]
    }
}

/// What one micro-update did to the target agent.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Action {
    ElementaryMove,
    Imitation { model: usize },
    Assimilation(HintId),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Update {
    pub target: usize,
    pub action: Action,
    pub solved: bool,
}

/// Agents holding the lowest cost, maintained as costs change.
#[derive(Clone, Debug, Default)]
struct BestTracker {
    costs: Vec<u32>,
    best: u32,
    holders: Vec<usize>,
    /// Position in `holders`, or `usize::MAX`.
    position: Vec<usize>,
}

impl BestTracker {
    fn new(costs: Vec<u32>) -> BestTracker {
        let mut t = BestTracker {
            position: vec![usize::MAX; costs.len()],
            costs,
            best: u32::MAX,
            holders: Vec::new(),
        };
        t.rescan();
        t
    }

    fn rescan(&mut self) {
        self.best = self.costs.iter().copied().min().unwrap_or(u32::MAX);
        for i in 0..self.costs.len() {
            if self.costs[i] == self.best {
                self.position[i] = self.holders.len();
                self.holders.push(i);
            }
        }
    }

    fn clear(&mut self) {
        for &i in &self.holders {
            self.position[i] = usize::MAX;
        }
        self.holders.clear();
    }

    fn insert(&mut self, i: usize) {
        self.position[i] = self.holders.len();
        self.holders.push(i);
    }

    fn remove(&mut self, i: usize) {
        let at = std::mem::replace(&mut self.position[i], usize::MAX);
        self.holders.swap_remove(at);
        if let Some(&moved) = self.holders.get(at) {
            self.position[moved] = at;
        }
    }

    #[inline]
    fn set(&mut self, i: usize, cost: u32) {
        let old = std::mem::replace(&mut self.costs[i], cost);
        if cost == old {
            return;
        }
        if cost < self.best {
            self.clear();
            self.best = cost;
            self.insert(i);
        } else if cost == self.best {
            self.insert(i);
        } else if old == self.best {
            self.remove(i);
            if self.holders.is_empty() {
                self.rescan();
            }
        }
    }
}

/// A run in progress. [`run_search`] drives it to completion; stepping it
/// by hand exposes the state between micro-updates.
pub struct Simulation<'c, R> {
    params: SearchParams,
    catalog: &'c HintCatalog,
    rng: R,
    group: Group,
    board: Option<Blackboard>,
    posting: bool,
    /// Cached agent costs, imitative strategy only.
    best: BestTracker,
    updates: u64,
    solved: bool,
    hint_selections: u64,
    correct_hint_selections: u64,
}

impl<'c, R: Rng> Simulation<'c, R> {
    /// Sets up the group (and board) at `t = 1`.
    pub fn new(params: SearchParams, catalog: &'c HintCatalog, mut rng: R) -> Result<Self> {
        params.validate()?;
        let group = Group::init(params.agents, &mut rng);
        let mut sim = Simulation {
            best: BestTracker::default(),
            board: None,
            posting: false,
            params,
            catalog,
            rng,
            group,
            updates: 0,
            solved: false,
            hint_selections: 0,
            correct_hint_selections: 0,
        };
        match sim.params.strategy {
            Strategy::Independent => {}
            Strategy::Imitative => {
                sim.best =
                    BestTracker::new(sim.group.agents.iter().map(Assignment::cost).collect());
            }
            Strategy::Blackboard => {
                let mut board = Blackboard::new(sim.params.board_size);
                let mut order: Vec<usize> = (0..sim.params.agents).collect();
                order.shuffle(&mut sim.rng);
                for i in order {
                    let hints = catalog.extract(&sim.group.agents[i]);
                    board.post_hint(&hints, &mut sim.rng);
                }
                sim.board = Some(board);
                sim.posting = true;
            }
            Strategy::NullModel => {
                let drawn =
                    rand::seq::index::sample(&mut sim.rng, catalog.len(), sim.params.board_size);
                let ids = drawn.into_iter().map(|i| HintId(i as u16));
                sim.board = Some(Blackboard::with_hints(sim.params.board_size, ids));
            }
        }
        sim.solved = sim.group.agents.iter().any(Assignment::is_solution);
        Ok(sim)
    }

    /// Resumes from an explicit group (and board). Imitative costs are
    /// recomputed; a board is only used by the board strategies.
    pub fn from_state(
        params: SearchParams,
        catalog: &'c HintCatalog,
        rng: R,
        group: Group,
        board: Option<Blackboard>,
    ) -> Result<Self> {
        params.validate()?;
        if group.len() != params.agents {
            return Err(Error::InvalidParams(format!(
                "group has {} agents, params say {}",
                group.len(),
                params.agents
            )));
        }
        let best = match params.strategy {
            Strategy::Imitative => {
                BestTracker::new(group.agents.iter().map(Assignment::cost).collect())
            }
            _ => BestTracker::default(),
        };
        let board = params
            .strategy
            .uses_board()
            .then(|| board.unwrap_or_else(|| Blackboard::new(params.board_size)));
        let solved = group.agents.iter().any(Assignment::is_solution);
        Ok(Simulation {
            posting: params.strategy == Strategy::Blackboard,
            params,
            catalog,
            rng,
            group,
            board,
            best,
            updates: 0,
            solved,
            hint_selections: 0,
            correct_hint_selections: 0,
        })
    }

    pub fn params(&self) -> &SearchParams {
        &self.params
    }

    pub fn group(&self) -> &Group {
        &self.group
    }

    pub fn board(&self) -> Option<&Blackboard> {
        self.board.as_ref()
    }

    pub fn updates(&self) -> u64 {
        self.updates
    }

    pub fn is_solved(&self) -> bool {
        self.solved
    }

    /// Current time, `1 + updates / M`.
    pub fn time(&self) -> f64 {
        (self.params.agents as u64 + self.updates) as f64 / self.params.agents as f64
    }

    /// Cached cost of each agent (imitative strategy only).
    pub fn cached_costs(&self) -> &[u32] {
        &self.best.costs
    }

    pub fn outcome(&self) -> SearchOutcome {
        SearchOutcome::new(
            self.params.agents,
            self.updates,
            self.solved,
            self.hint_selections,
            self.correct_hint_selections,
        )
    }

    /// One micro-update of a uniformly chosen agent.
    #[inline]
    pub fn step(&mut self) -> Update {
        match self.params.strategy {
            Strategy::Independent => self.step_with(Self::independent_update),
            Strategy::Imitative => self.step_with(Self::imitative_update),
            Strategy::Blackboard | Strategy::NullModel => self.step_with(Self::blackboard_update),
        }
    }

    #[inline(always)]
    fn step_with(&mut self, update: impl Fn(&mut Self, usize) -> Action) -> Update {
        let target = pick(&mut self.rng, self.params.agents);
        let action = update(self, target);
        self.updates += 1;
        let solved = self.group.agents[target].is_solution();
        self.solved |= solved;
        Update {
            target,
            action,
            solved,
        }
    }

    #[inline(always)]
    fn run_with(&mut self, limit: u64, update: impl Fn(&mut Self, usize) -> Action + Copy) {
        while !self.step_with(update).solved && self.updates <= limit {}
    }

    #[inline]
    fn independent_update(&mut self, target: usize) -> Action {
        self.group.agents[target].elementary_move_in_place(&mut self.rng);
        Action::ElementaryMove
    }

    /// Lowest cached cost, ties broken uniformly.
    #[inline]
    fn model_agent(&mut self) -> usize {
        let holders = &self.best.holders;
        holders[pick(&mut self.rng, holders.len())]
    }

    #[inline]
    fn imitative_update(&mut self, target: usize) -> Action {
        let p = self.params.imitation_prob;
        let mut action = Action::ElementaryMove;
        if p > 0.0 && self.rng.random_bool(p) {
            let model = self.model_agent();
            let model_assignment = self.group.agents[model];
            let agent = &mut self.group.agents[target];
            if *agent != model_assignment {
                imitation::imitate_in_place(agent, &model_assignment, &mut self.rng);
                action = Action::Imitation { model };
            }
        }
        if action == Action::ElementaryMove {
            self.group.agents[target].elementary_move_in_place(&mut self.rng);
        }
        self.best.set(target, self.group.agents[target].cost());
        action
    }

    #[inline]
    fn blackboard_update(&mut self, target: usize) -> Action {
        let board = self.board.as_mut().expect("board strategies own a board");
        let agent = &mut self.group.agents[target];
        let mut action = Action::ElementaryMove;
        if !board.is_empty() {
            let id = board.get(pick(&mut self.rng, board.len()));
            self.hint_selections += 1;
            if self.catalog.is_correct(id) {
                self.correct_hint_selections += 1;
            }
            let hint = self.catalog.hint(id);
            if !hint.is_exhibited_by(agent) {
                hint.assimilate_in_place(agent);
                action = Action::Assimilation(id);
            }
        }
        if action == Action::ElementaryMove {
            agent.elementary_move_in_place(&mut self.rng);
        }
        if self.posting {
            let hints = self.catalog.extract(agent);
            board.post_hint(&hints, &mut self.rng);
        }
        action
    }

    /// Steps until the solution appears or the time limit is passed.
    pub fn run(&mut self) -> SearchOutcome {
        if self.solved {
            return self.outcome();
        }
        let limit = self.params.update_limit().unwrap_or(u64::MAX);
        match self.params.strategy {
            Strategy::Independent => self.run_with(limit, Self::independent_update),
            Strategy::Imitative => self.run_with(limit, Self::imitative_update),
            Strategy::Blackboard | Strategy::NullModel => {
                self.run_with(limit, Self::blackboard_update)
            }
        }
        self.outcome()
    }
}

/// Runs one search with the generator seeded from `params.seed`.
pub fn run_search(params: &SearchParams) -> Result<SearchOutcome> {
    let rng = SimRng::seed_from_u64(params.seed);
    run_search_with(params, HintCatalog::shared(), rng)
}

pub fn run_search_with<R: Rng>(
    params: &SearchParams,
    catalog: &HintCatalog,
    rng: R,
) -> Result<SearchOutcome> {
    Ok(Simulation::new(params.clone(), catalog, rng)?.run())
}

/// Blackboard dynamics over a board of `B` hints drawn without replacement
/// from the catalog and frozen for the whole run.
pub fn run_null_model<R: Rng>(
    params: &SearchParams,
    catalog: &HintCatalog,
    rng: R,
) -> Result<SearchOutcome> {
    let params = SearchParams {
        strategy: Strategy::NullModel,
        ..params.clone()
    };
    if params.board_size == 0 {
        return Err(Error::BoardSizeOutOfRange(0));
    }
    run_search_with(&params, catalog, rng)
}
