//! Discrete-time execution of the non-competitive, semi-progressive and
//! non-progressive diffusion processes.
//!
//! All three share one synchronous step function. At step `t`, rules read
//! only the state at the end of `t - 1`:
//!
//! 1. nodes whose quiescence expires at `t` become contagious;
//! 2. inactive nodes whose trusted active influence reaches their threshold
//!    enter quiescence for that campaign (ties between campaigns go through
//!    the [`TieBreakRule`](crate::dynamics::TieBreakRule));
//! 3. in the competitive models, an active node switches instantly when the
//!    rival's influence reaches its time-varying threshold and beats the
//!    influence of its own campaign;
//! 4. in the non-progressive model, an active node whose influence from both
//!    campaigns is below its base threshold returns to inactive.
//!
//! Quiescent nodes are frozen and exert no influence. Only nodes whose own
//! state or whose in-neighborhood changed in the previous step are
//! re-evaluated; every other node would reach the same verdict as before.

mod trace;

use std::cmp::Reverse;
use std::collections::BinaryHeap;
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use serde::{Deserialize, Serialize};

pub use trace::{Event, EventKind, Replay, Status, StepCounts, Trace, TraceMeta};

use crate::dynamics::{
    activation_threshold, distrusted_active_mass, quiescence_duration, quiescence_steps,
    trusted_influence, ModelParams, NodeParams, NodeState, Step,
};
use crate::error::{Error, Result};
use crate::graph::{DiffusionGraph, NodeId};

/// Horizon used when a run should go on until nothing can change.
pub const UNBOUNDED_HORIZON: Step = 1_000_000;

/// A competing campaign. `A` is the first-started ("bad") one, `B` the
/// reacting ("good") one; non-competitive runs use `A` only.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Campaign {
    A,
    B,
}

impl Campaign {
    pub fn other(self) -> Campaign {
        match self {
            Campaign::A => Campaign::B,
            Campaign::B => Campaign::A,
        }
    }

    pub fn index(self) -> usize {
        self as usize
    }

    pub const BOTH: [Campaign; 2] = [Campaign::A, Campaign::B];
}

impl fmt::Display for Campaign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Campaign::A => "A",
            Campaign::B => "B",
        })
    }
}

impl FromStr for Campaign {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "A" => Ok(Campaign::A),
            "B" => Ok(Campaign::B),
            other => Err(format!("unknown campaign '{other}'")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Model {
    /// Single campaign, progressive.
    Nc,
    /// Two campaigns; active nodes may switch but never deactivate.
    Sp,
    /// Two campaigns; active nodes may also deactivate.
    Np,
}

impl Model {
    pub fn is_competitive(self) -> bool {
        self != Model::Nc
    }
}

impl FromStr for Model {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "nc" => Ok(Model::Nc),
            "sp" => Ok(Model::Sp),
            "np" => Ok(Model::Np),
            other => Err(Error::Config(format!("unknown model '{other}' (expected nc, sp or np)"))),
        }
    }
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Model::Nc => "nc",
            Model::Sp => "sp",
            Model::Np => "np",
        })
    }
}

/// Runs the non-competitive process from `seeds`.
pub fn run_noncompetitive<R: Rng + ?Sized>(
    g: &DiffusionGraph,
    seeds: &[NodeId],
    nodes: &NodeParams,
    params: &ModelParams,
    rng: &mut R,
) -> Result<Trace> {
    simulate(Model::Nc, g, seeds, &[], 0, nodes, params, rng)
}

/// Runs the semi-progressive process; B's seeds start at `delay_b`.
pub fn run_semiprogressive<R: Rng + ?Sized>(
    g: &DiffusionGraph,
    seeds_a: &[NodeId],
    seeds_b: &[NodeId],
    delay_b: Step,
    nodes: &NodeParams,
    params: &ModelParams,
    rng: &mut R,
) -> Result<Trace> {
    simulate(Model::Sp, g, seeds_a, seeds_b, delay_b, nodes, params, rng)
}

/// Runs the non-progressive process; B's seeds start at `delay_b`.
pub fn run_nonprogressive<R: Rng + ?Sized>(
    g: &DiffusionGraph,
    seeds_a: &[NodeId],
    seeds_b: &[NodeId],
    delay_b: Step,
    nodes: &NodeParams,
    params: &ModelParams,
    rng: &mut R,
) -> Result<Trace> {
    simulate(Model::Np, g, seeds_a, seeds_b, delay_b, nodes, params, rng)
}

/// End time of the non-competitive diffusion from `seeds`: the step of the
/// last activation when run until quiescence, and at least 1.
pub fn compute_horizon(
    g: &DiffusionGraph,
    seeds: &[NodeId],
    nodes: &NodeParams,
    params: &ModelParams,
) -> Result<Step> {
    let unbounded = params.with_horizon(UNBOUNDED_HORIZON);
    // the non-competitive process never draws from the rng
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0);
    let trace = run_noncompetitive(g, seeds, nodes, &unbounded, &mut rng)?;
    Ok(activation_end(&trace))
}

/// Step of the last activation in `trace`, and at least 1.
pub fn activation_end(trace: &Trace) -> Step {
    trace
        .events()
        .iter()
        .filter(|e| e.kind == EventKind::Activate)
        .map(|e| e.step)
        .max()
        .unwrap_or(0)
        .max(1)
}

/// Runs `model` with explicit arguments; the `run_*` functions are thin
/// wrappers around this.
#[allow(clippy::too_many_arguments)]
pub fn simulate<R: Rng + ?Sized>(
    model: Model,
    g: &DiffusionGraph,
    seeds_a: &[NodeId],
    seeds_b: &[NodeId],
    delay_b: Step,
    nodes: &NodeParams,
    params: &ModelParams,
    rng: &mut R,
) -> Result<Trace> {
    params.validate()?;
    let n = g.node_count();
    if nodes.len() != n {
        return Err(Error::InvalidParams(format!(
            "{} node parameters for {} nodes",
            nodes.len(),
            n
        )));
    }
    let seeds_a = normalize_seeds(seeds_a, n)?;
    let seeds_b = normalize_seeds(seeds_b, n)?;
    if !model.is_competitive() && !seeds_b.is_empty() {
        return Err(Error::InvalidParams(
            "the non-competitive model takes a single seed set".into(),
        ));
    }
    if model.is_competitive() && delay_b >= params.horizon {
        return Err(Error::DelayBeyondHorizon {
            delay: delay_b,
            horizon: params.horizon,
        });
    }
    if let Some(&v) = seeds_a.iter().find(|v| seeds_b.binary_search(v).is_ok()) {
        return Err(Error::OverlappingSeeds(v));
    }

    let mut sim = Simulator::new(model, g, nodes, params);
    sim.seed(Campaign::A, &seeds_a, 0);
    let mut skipped = Vec::new();
    if delay_b == 0 {
        skipped = sim.seed(Campaign::B, &seeds_b, 0);
    }
    sim.counts.push(sim.tally);

    let mut last_step = params.horizon;
    let mut t: Step = 1;
    while t <= params.horizon {
        let changed = sim.step(t, rng);
        if t == delay_b {
            skipped = sim.seed(Campaign::B, &seeds_b, t);
        }
        sim.counts.push(sim.tally);
        if changed || t == delay_b || !sim.dirty.is_empty() {
            t += 1;
            continue;
        }
        // Nothing can happen before the next expiry or the delayed seeding.
        let pending_seed = (t < delay_b).then_some(delay_b);
        let next_expiry = sim.expiring.peek().map(|Reverse((expiry, _))| *expiry);
        let next = match (pending_seed, next_expiry) {
            (Some(a), Some(b)) => a.min(b),
            (a, b) => match a.or(b) {
                Some(next) => next,
                None => {
                    last_step = t;
                    break;
                }
            },
        };
        if next > params.horizon {
            last_step = t;
            break;
        }
        for _ in t + 1..next {
            sim.counts.push(sim.tally);
        }
        t = next;
    }

    let meta = TraceMeta {
        model,
        node_count: n,
        seeds_a,
        seeds_b,
        delay_b,
        skipped_seeds_b: skipped,
        horizon: params.horizon,
        last_step,
        params: *params,
        graph_fingerprint: g.fingerprint(),
        node_params_fingerprint: nodes.fingerprint(),
        rng_seed: None,
    };
    Ok(Trace::new(meta, sim.events, sim.counts))
}

fn normalize_seeds(seeds: &[NodeId], n: usize) -> Result<Vec<NodeId>> {
    if let Some(&node) = seeds.iter().find(|&&v| v as usize >= n) {
        return Err(Error::NodeOutOfRange {
            node,
            node_count: n,
        });
    }
    let mut seeds = seeds.to_vec();
    seeds.sort_unstable();
    seeds.dedup();
    Ok(seeds)
}

enum Transition {
    Attempt { campaign: Campaign, steps: Step },
    Switch { to: Campaign },
    Deactivate { from: Campaign },
}

struct Simulator<'a> {
    model: Model,
    g: &'a DiffusionGraph,
    nodes: &'a NodeParams,
    params: &'a ModelParams,
    state: Vec<NodeState>,
    expiring: BinaryHeap<Reverse<(Step, NodeId)>>,
    dirty: Vec<NodeId>,
    is_dirty: Vec<bool>,
    transitions: Vec<(NodeId, Transition)>,
    events: Vec<Event>,
    counts: Vec<StepCounts>,
    tally: StepCounts,
}

impl<'a> Simulator<'a> {
    fn new(model: Model, g: &'a DiffusionGraph, nodes: &'a NodeParams, params: &'a ModelParams) -> Self {
        let n = g.node_count();
        Simulator {
            model,
            g,
            nodes,
            params,
            state: vec![NodeState::Inactive; n],
            expiring: BinaryHeap::new(),
            dirty: Vec::new(),
            is_dirty: vec![false; n],
            transitions: Vec::new(),
            events: Vec::new(),
            counts: Vec::new(),
            tally: StepCounts::default(),
        }
    }

    /// Activates the inactive nodes of `seeds` for `campaign` at `t` and
    /// returns the ones that were skipped.
    fn seed(&mut self, campaign: Campaign, seeds: &[NodeId], t: Step) -> Vec<NodeId> {
        let mut skipped = Vec::new();
        for &v in seeds {
            if self.state[v as usize] != NodeState::Inactive {
                skipped.push(v);
                continue;
            }
            self.state[v as usize] = NodeState::Active { campaign, since: t };
            self.tally.active[campaign.index()] += 1;
            self.emit(t, v, EventKind::Activate, campaign);
            self.touch_influence(v);
        }
        skipped
    }

    fn emit(&mut self, step: Step, node: NodeId, kind: EventKind, campaign: Campaign) {
        self.events.push(Event {
            step,
            node,
            kind,
            campaign,
        });
    }

    fn mark(&mut self, v: NodeId) {
        if !self.is_dirty[v as usize] {
            self.is_dirty[v as usize] = true;
            self.dirty.push(v);
        }
    }

    /// `v` changed its active membership: it and its out-neighbors must be
    /// looked at next step.
    fn touch_influence(&mut self, v: NodeId) {
        self.mark(v);
        let net = self.g.network();
        for e in net.out_edges(v) {
            let w = net.edge(e).dst;
            if !self.is_dirty[w as usize] {
                self.is_dirty[w as usize] = true;
                self.dirty.push(w);
            }
        }
    }

    fn influence(&self, v: NodeId, campaign: Campaign) -> f64 {
        let state = &self.state;
        trusted_influence(self.g, v, |u| state[u as usize].active_campaign() == Some(campaign))
    }

    /// Decides the rule outcome for `v` against the state at `t - 1`.
    fn evaluate<R: Rng + ?Sized>(&self, v: NodeId, t: Step, rng: &mut R) -> Option<Transition> {
        let theta = self.nodes.theta(v);
        let competitive = self.model.is_competitive();
        match self.state[v as usize] {
            NodeState::Quiescent { .. } => None,
            NodeState::Inactive => {
                let reaches_a = self.influence(v, Campaign::A) >= theta;
                let reaches_b = competitive && self.influence(v, Campaign::B) >= theta;
                let campaign = match (reaches_a, reaches_b) {
                    (true, true) => self.params.tie_break.resolve(rng),
                    (true, false) => Campaign::A,
                    (false, true) => Campaign::B,
                    (false, false) => return None,
                };
                let state = &self.state;
                let neg_mass = distrusted_active_mass(self.g, v, |u| state[u as usize].is_active());
                let q = quiescence_duration(self.nodes.tau(v), self.params.lambda, neg_mass);
                Some(Transition::Attempt {
                    campaign,
                    steps: quiescence_steps(q),
                })
            }
            NodeState::Active { campaign, since } => {
                if !competitive {
                    return None;
                }
                let own = self.influence(v, campaign);
                let rival = self.influence(v, campaign.other());
                let threshold = activation_threshold(theta, self.params.delta, t, Some(since));
                if rival >= threshold && rival > own {
                    Some(Transition::Switch {
                        to: campaign.other(),
                    })
                } else if self.model == Model::Np && own < theta && rival < theta {
                    Some(Transition::Deactivate { from: campaign })
                } else {
                    None
                }
            }
        }
    }

    /// Executes step `t`; returns whether any node changed state.
    fn step<R: Rng + ?Sized>(&mut self, t: Step, rng: &mut R) -> bool {
        let mut candidates = std::mem::take(&mut self.dirty);
        candidates.sort_unstable();
        for &v in &candidates {
            self.is_dirty[v as usize] = false;
        }
        let mut transitions = std::mem::take(&mut self.transitions);
        transitions.clear();
        for &v in &candidates {
            if let Some(tr) = self.evaluate(v, t, rng) {
                transitions.push((v, tr));
            }
        }
        candidates.clear();
        self.dirty = candidates;

        let mut changed = false;
        while let Some(&Reverse((expiry, v))) = self.expiring.peek() {
            if expiry > t {
                break;
            }
            self.expiring.pop();
            let NodeState::Quiescent { campaign, .. } = self.state[v as usize] else {
                unreachable!("only quiescent nodes are scheduled");
            };
            self.become_active(v, campaign, t);
            changed = true;
        }

        for (v, tr) in transitions.drain(..) {
            changed = true;
            match tr {
                Transition::Attempt { campaign, steps } => {
                    self.emit(t, v, EventKind::Quiesce, campaign);
                    self.tally.quiescent[campaign.index()] += 1;
                    let expiry = t.saturating_add(steps);
                    self.state[v as usize] = NodeState::Quiescent { campaign, expiry };
                    if steps == 0 {
                        self.become_active(v, campaign, t);
                    } else {
                        self.expiring.push(Reverse((expiry, v)));
                        self.mark(v);
                    }
                }
                Transition::Switch { to } => {
                    self.state[v as usize] = NodeState::Active { campaign: to, since: t };
                    self.tally.active[to.other().index()] -= 1;
                    self.tally.active[to.index()] += 1;
                    self.emit(t, v, EventKind::Switch, to);
                    self.touch_influence(v);
                }
                Transition::Deactivate { from } => {
                    self.state[v as usize] = NodeState::Inactive;
                    self.tally.active[from.index()] -= 1;
                    self.emit(t, v, EventKind::Deactivate, from);
                    self.touch_influence(v);
                }
            }
        }
        self.transitions = transitions;
        changed
    }

    fn become_active(&mut self, v: NodeId, campaign: Campaign, t: Step) {
        self.state[v as usize] = NodeState::Active { campaign, since: t };
        self.tally.quiescent[campaign.index()] -= 1;
        self.tally.active[campaign.index()] += 1;
        self.emit(t, v, EventKind::Activate, campaign);
        self.touch_influence(v);
    }
}
