//! Shared helpers for integration tests: a direct rule interpreter used as an
//! oracle for the engine, and random instance generators.

#![allow(dead_code)]

use std::sync::Arc;

use ffdlt::dynamics::{ModelParams, NodeParams, Step};
use ffdlt::engine::{Campaign, Event, EventKind, Model, Status};
use ffdlt::graph::{DiffusionGraph, Edge, Sign, TrustNetwork};
use rand::Rng;

/// Weighted edge list `(src, dst, w)`; negative weights mark distrust.
pub type WeightedEdges = Vec<(u32, u32, f64)>;

pub fn build_graph(n: usize, edges: &[(u32, u32, f64)], negative: &[bool]) -> DiffusionGraph {
    let mut tagged: Vec<(u32, u32, f64, bool)> = edges
        .iter()
        .zip(negative)
        .map(|(&(s, d, w), &neg)| (s, d, w, neg))
        .collect();
    tagged.sort_by_key(|e| (e.0, e.1));
    let net = TrustNetwork::new(
        n,
        tagged.iter().map(|&(src, dst, _, neg)| Edge {
            src,
            dst,
            sign: if neg { Sign::Distrust } else { Sign::Trust },
            timestamp: None,
        }),
    )
    .unwrap();
    DiffusionGraph::with_weights(Arc::new(net), tagged.iter().map(|e| e.2).collect()).unwrap()
}

#[derive(Clone, Copy, Debug, PartialEq)]
enum OracleState {
    Inactive,
    Quiescent { campaign: Campaign, until: Step },
    Active { campaign: Campaign, since: Step },
}

impl OracleState {
    fn status(self) -> Status {
        match self {
            OracleState::Inactive => Status::Inactive,
            OracleState::Quiescent { campaign, .. } => Status::Quiescent(campaign),
            OracleState::Active { campaign, .. } => Status::Active(campaign),
        }
    }
}

/// What the oracle saw: statuses after each step `0..=horizon` and all events.
pub struct OracleRun {
    pub statuses: Vec<Vec<Status>>,
    pub events: Vec<Event>,
}

/// Applies the rules literally: full edge scans over the previous-step
/// snapshot, every node every step, no early stop.
#[allow(clippy::too_many_arguments)]
pub fn oracle<R: Rng>(
    model: Model,
    g: &DiffusionGraph,
    seeds_a: &[u32],
    seeds_b: &[u32],
    delay_b: Step,
    np: &NodeParams,
    mp: &ModelParams,
    rng: &mut R,
) -> OracleRun {
    let n = g.node_count();
    let edges: Vec<(u32, u32, f64, bool)> = g
        .network()
        .edges()
        .iter()
        .zip(g.weights())
        .map(|(e, &w)| (e.src, e.dst, w, e.sign.is_trust()))
        .collect();
    let ffdlt::dynamics::TieBreakRule::FixedProbability { prob_a } = mp.tie_break;
    let competitive = model != Model::Nc;
    let mut state = vec![OracleState::Inactive; n];
    let mut events = Vec::new();
    let mut statuses = Vec::new();

    let seed = |state: &mut Vec<OracleState>, events: &mut Vec<Event>, seeds: &[u32], c: Campaign, t: Step| {
        for &v in seeds {
            if state[v as usize] == OracleState::Inactive {
                state[v as usize] = OracleState::Active { campaign: c, since: t };
                events.push(Event { step: t, node: v, kind: EventKind::Activate, campaign: c });
            }
        }
    };
    seed(&mut state, &mut events, seeds_a, Campaign::A, 0);
    if delay_b == 0 {
        seed(&mut state, &mut events, seeds_b, Campaign::B, 0);
    }
    statuses.push(state.iter().map(|s| s.status()).collect());

    for t in 1..=mp.horizon {
        let prev = state.clone();
        let active_for = |u: u32, c: Campaign| {
            matches!(prev[u as usize], OracleState::Active { campaign, .. } if campaign == c)
        };
        let is_active = |u: u32| matches!(prev[u as usize], OracleState::Active { .. });
        let influence = |v: u32, c: Campaign| -> f64 {
            edges
                .iter()
                .filter(|e| e.1 == v && e.3 && active_for(e.0, c))
                .map(|e| e.2)
                .sum()
        };
        let mut next = prev.clone();
        let mut step_events = Vec::new();

        for v in 0..n as u32 {
            if let OracleState::Quiescent { campaign, until } = prev[v as usize] {
                if until == t {
                    next[v as usize] = OracleState::Active { campaign, since: t };
                    step_events.push(Event { step: t, node: v, kind: EventKind::Activate, campaign });
                }
            }
        }
        for v in 0..n as u32 {
            let theta = np.theta(v);
            match prev[v as usize] {
                OracleState::Quiescent { .. } => {}
                OracleState::Inactive => {
                    let a = influence(v, Campaign::A) >= theta;
                    let b = competitive && influence(v, Campaign::B) >= theta;
                    let c = match (a, b) {
                        (true, true) => {
                            if rng.random::<f64>() < prob_a {
                                Campaign::A
                            } else {
                                Campaign::B
                            }
                        }
                        (true, false) => Campaign::A,
                        (false, true) => Campaign::B,
                        (false, false) => continue,
                    };
                    let mass: f64 = edges
                        .iter()
                        .filter(|e| e.1 == v && !e.3 && is_active(e.0))
                        .map(|e| -e.2)
                        .sum();
                    let q = if mp.lambda == 0.0 {
                        np.tau(v)
                    } else {
                        np.tau(v) + (mp.lambda * mass).exp()
                    };
                    let until = t + q.ceil() as Step;
                    step_events.push(Event { step: t, node: v, kind: EventKind::Quiesce, campaign: c });
                    if until == t {
                        next[v as usize] = OracleState::Active { campaign: c, since: t };
                        step_events.push(Event { step: t, node: v, kind: EventKind::Activate, campaign: c });
                    } else {
                        next[v as usize] = OracleState::Quiescent { campaign: c, until };
                    }
                }
                OracleState::Active { campaign, since } => {
                    if !competitive {
                        continue;
                    }
                    let own = influence(v, campaign);
                    let rival = influence(v, campaign.other());
                    let g_vt = (theta + mp.delta * (t - since) as f64).min(1.0);
                    if rival >= g_vt && rival > own {
                        next[v as usize] = OracleState::Active { campaign: campaign.other(), since: t };
                        step_events.push(Event {
                            step: t,
                            node: v,
                            kind: EventKind::Switch,
                            campaign: campaign.other(),
                        });
                    } else if model == Model::Np && own < theta && rival < theta {
                        next[v as usize] = OracleState::Inactive;
                        step_events.push(Event { step: t, node: v, kind: EventKind::Deactivate, campaign });
                    }
                }
            }
        }
        state = next;
        events.extend(step_events);
        if t == delay_b {
            seed(&mut state, &mut events, seeds_b, Campaign::B, t);
        }
        statuses.push(state.iter().map(|s| s.status()).collect());
    }
    OracleRun { statuses, events }
}

/// Random signed graph on `n` nodes with weights in {0, 1/4, 1/2, 1} (and
/// their negatives), trimmed so every node's trusted and distrusted
/// in-weights stay within one. Sums of such weights are exact in binary.
pub fn dyadic_instance<R: Rng>(rng: &mut R, n: usize, density: f64) -> DiffusionGraph {
    const MAGNITUDES: [f64; 4] = [0.0, 0.25, 0.5, 1.0];
    let mut edges = Vec::new();
    let mut negative = Vec::new();
    let mut budget = vec![[1.0f64; 2]; n];
    for u in 0..n as u32 {
        for v in 0..n as u32 {
            if u == v || !rng.random_bool(density) {
                continue;
            }
            let neg = rng.random_bool(0.35);
            let slot = &mut budget[v as usize][neg as usize];
            let mut w = MAGNITUDES[rng.random_range(0..MAGNITUDES.len())];
            while w > *slot {
                w /= 2.0;
                if w < 0.25 {
                    w = 0.0;
                }
            }
            *slot -= w;
            edges.push((u, v, if neg { -w } else { w }));
            negative.push(neg);
        }
    }
    build_graph(n, &edges, &negative)
}

/// Two disjoint random seed sets, each possibly empty.
pub fn random_seeds<R: Rng>(rng: &mut R, n: usize, competitive: bool) -> (Vec<u32>, Vec<u32>) {
    let mut a = Vec::new();
    let mut b = Vec::new();
    for v in 0..n as u32 {
        match rng.random_range(0..6) {
            0 | 1 => a.push(v),
            2 if competitive => b.push(v),
            _ => {}
        }
    }
    (a, b)
}

/// One randomized engine instance.
#[derive(Debug, Clone)]
pub struct Instance {
    pub model: Model,
    pub g: DiffusionGraph,
    pub seeds_a: Vec<u32>,
    pub seeds_b: Vec<u32>,
    pub delay_b: Step,
    pub np: NodeParams,
    pub mp: ModelParams,
    pub rng_seed: u64,
}

/// Draws an instance with `n <= max_n`, dyadic weights, `delta` in {0, 0.1},
/// `lambda` in {0, 5} and `tau` in {0, 1, 2}.
pub fn random_instance<R: Rng>(rng: &mut R, max_n: usize) -> Instance {
    let model = [Model::Nc, Model::Sp, Model::Np][rng.random_range(0..3)];
    let n = rng.random_range(1..=max_n);
    let density = rng.random_range(0.2..0.8);
    let g = dyadic_instance(rng, n, density);
    let (seeds_a, seeds_b) = random_seeds(rng, n, model != Model::Nc);
    let theta: Vec<f64> = (0..n)
        .map(|_| {
            if rng.random_bool(0.5) {
                [0.25, 0.5, 0.75, 1.0][rng.random_range(0..4)]
            } else {
                1.0 - rng.random::<f64>()
            }
        })
        .collect();
    let tau: Vec<f64> = (0..n).map(|_| rng.random_range(0..3) as f64).collect();
    let np = NodeParams::new(theta, tau).unwrap();
    let horizon = rng.random_range(1..=12);
    let delta = [0.0, 0.1][rng.random_range(0..2)];
    let lambda = [0.0, 5.0][rng.random_range(0..2)];
    let prob_a = [1.0, 0.5, 0.0][rng.random_range(0..3)];
    let mp = ModelParams::new(delta, lambda, horizon)
        .unwrap()
        .with_tie_break(ffdlt::dynamics::TieBreakRule::FixedProbability { prob_a });
    let delay_b = if model == Model::Nc { 0 } else { rng.random_range(0..horizon) };
    Instance {
        model,
        g,
        seeds_a,
        seeds_b,
        delay_b,
        np,
        mp,
        rng_seed: rng.random(),
    }
}

impl Instance {
    pub fn run(&self) -> ffdlt::engine::Trace {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(self.rng_seed);
        ffdlt::engine::simulate(
            self.model,
            &self.g,
            &self.seeds_a,
            &self.seeds_b,
            self.delay_b,
            &self.np,
            &self.mp,
            &mut rng,
        )
        .unwrap()
    }

    pub fn run_oracle(&self) -> OracleRun {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(self.rng_seed);
        oracle(
            self.model,
            &self.g,
            &self.seeds_a,
            &self.seeds_b,
            self.delay_b,
            &self.np,
            &self.mp,
            &mut rng,
        )
    }

    /// Compares engine and oracle step by step; describes the first mismatch.
    pub fn check(&self) -> Result<(), String> {
        let trace = self.run();
        let expected = self.run_oracle();
        let mut replay = trace.replay();
        for (t, want) in expected.statuses.iter().enumerate() {
            let (step, got) = replay
                .advance()
                .ok_or_else(|| format!("replay ended before step {t}"))?;
            if step as usize != t || got != want.as_slice() {
                return Err(format!("step {t}: engine {got:?}, oracle {want:?}"));
            }
            let counts = trace.counts_at(t as Step);
            for c in Campaign::BOTH {
                let active = want.iter().filter(|s| **s == Status::Active(c)).count() as u32;
                let quiet = want.iter().filter(|s| **s == Status::Quiescent(c)).count() as u32;
                if counts.active[c.index()] != active || counts.quiescent[c.index()] != quiet {
                    return Err(format!("step {t}: counts {counts:?} disagree with statuses"));
                }
            }
        }
        let key = |e: &Event| (e.step, e.node, e.kind, e.campaign);
        let mut got: Vec<_> = trace.events().iter().map(key).collect();
        let mut want: Vec<_> = expected.events.iter().map(key).collect();
        got.sort();
        want.sort();
        if got != want {
            return Err(format!("events differ:\n engine {got:?}\n oracle {want:?}"));
        }
        Ok(())
    }
}
