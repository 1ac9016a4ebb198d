//! Time-varying activation threshold, quiescence duration and the influence
//! sums both depend on.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::engine::Campaign;
use crate::error::{Error, Result};
use crate::graph::{fnv1a, DiffusionGraph, NodeId};

/// Discrete time step.
pub type Step = u32;

/// Exogenous per-node parameters: activation threshold `theta` in `(0, 1]`
/// and quiescence term `tau >= 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct NodeParams {
    theta: Vec<f64>,
    tau: Vec<f64>,
}

impl NodeParams {
    pub fn new(theta: Vec<f64>, tau: Vec<f64>) -> Result<Self> {
        if theta.len() != tau.len() {
            return Err(Error::InvalidParams(format!(
                "{} thresholds but {} quiescence terms",
                theta.len(),
                tau.len()
            )));
        }
        if let Some((v, t)) = theta.iter().enumerate().find(|(_, &t)| !(t > 0.0 && t <= 1.0)) {
            return Err(Error::InvalidParams(format!(
                "node {v}: threshold {t} outside (0, 1]"
            )));
        }
        if let Some((v, t)) = tau.iter().enumerate().find(|(_, &t)| !(t >= 0.0 && t.is_finite())) {
            return Err(Error::InvalidParams(format!(
                "node {v}: quiescence term {t} must be finite and non-negative"
            )));
        }
        Ok(NodeParams { theta, tau })
    }

    /// Same `theta` and `tau` for all `n` nodes.
    pub fn uniform(n: usize, theta: f64, tau: f64) -> Result<Self> {
        Self::new(vec![theta; n], vec![tau; n])
    }

    /// `theta ~ U(0, 1]` and `tau ~ U[0, tau_max]`, independently per node.
    pub fn sample<R: Rng + ?Sized>(n: usize, tau_max: f64, rng: &mut R) -> Self {
        let theta = (0..n).map(|_| 1.0 - rng.random::<f64>()).collect();
        let tau = (0..n).map(|_| rng.random_range(0.0..=tau_max)).collect();
        NodeParams { theta, tau }
    }

    pub fn len(&self) -> usize {
        self.theta.len()
    }

    pub fn is_empty(&self) -> bool {
        self.theta.is_empty()
    }

    pub fn theta(&self, v: NodeId) -> f64 {
        self.theta[v as usize]
    }

    pub fn tau(&self, v: NodeId) -> f64 {
        self.tau[v as usize]
    }

    pub fn set_theta(&mut self, v: NodeId, theta: f64) -> Result<()> {
        if !(theta > 0.0 && theta <= 1.0) {
            return Err(Error::InvalidParams(format!("threshold {theta} outside (0, 1]")));
        }
        self.theta[v as usize] = theta;
        Ok(())
    }

    pub fn set_tau(&mut self, v: NodeId, tau: f64) -> Result<()> {
        if !(tau >= 0.0 && tau.is_finite()) {
            return Err(Error::InvalidParams(format!("quiescence term {tau} invalid")));
        }
        self.tau[v as usize] = tau;
        Ok(())
    }

    pub fn fingerprint(&self) -> u64 {
        fnv1a(self.theta.iter().chain(&self.tau).map(|x| x.to_bits()))
    }
}

/// How a node that both campaigns can activate in the same step is assigned.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum TieBreakRule {
    /// Campaign A wins with probability `prob_a`.
    FixedProbability { prob_a: f64 },
}

impl TieBreakRule {
    pub fn favor_a() -> Self {
        TieBreakRule::FixedProbability { prob_a: 1.0 }
    }

    /// One uniform draw per tie.
    pub fn resolve<R: Rng + ?Sized>(&self, rng: &mut R) -> Campaign {
        match *self {
            TieBreakRule::FixedProbability { prob_a } => {
                if rng.random::<f64>() < prob_a {
                    Campaign::A
                } else {
                    Campaign::B
                }
            }
        }
    }
}

impl Default for TieBreakRule {
    fn default() -> Self {
        Self::favor_a()
    }
}

/// Global model parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    /// Threshold increment per step a node holds the same campaign.
    pub delta: f64,
    /// Sensitivity to active distrusted in-neighbors.
    pub lambda: f64,
    /// Last simulated step.
    pub horizon: Step,
    pub tie_break: TieBreakRule,
}

impl ModelParams {
    pub fn new(delta: f64, lambda: f64, horizon: Step) -> Result<Self> {
        let params = ModelParams {
            delta,
            lambda,
            horizon,
            tie_break: TieBreakRule::default(),
        };
        params.validate()?;
        Ok(params)
    }

    pub fn with_tie_break(mut self, tie_break: TieBreakRule) -> Self {
        self.tie_break = tie_break;
        self
    }

    pub fn with_horizon(mut self, horizon: Step) -> Self {
        self.horizon = horizon;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.delta >= 0.0 && self.delta.is_finite()) {
            return Err(Error::InvalidParams(format!("delta {} must be >= 0", self.delta)));
        }
        if !(self.lambda >= 0.0 && self.lambda.is_finite()) {
            return Err(Error::InvalidParams(format!("lambda {} must be >= 0", self.lambda)));
        }
        if self.horizon < 1 {
            return Err(Error::InvalidParams("horizon must be at least 1".into()));
        }
        let TieBreakRule::FixedProbability { prob_a } = self.tie_break;
        if !(0.0..=1.0).contains(&prob_a) {
            return Err(Error::InvalidParams(format!("tie-break probability {prob_a} outside [0, 1]")));
        }
        if self.delta > 0.5 {
            log::warn!("delta {} is above the studied range [0, 0.5]", self.delta);
        }
        if self.lambda > 5.0 {
            log::warn!("lambda {} is above the studied range [0, 5]", self.lambda);
        }
        Ok(())
    }
}

/// Life-cycle state of a node.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum NodeState {
    Inactive,
    /// Activated for `campaign`, contagious from step `expiry` on.
    Quiescent { campaign: Campaign, expiry: Step },
    /// Contagious for `campaign` since `since` (seeding, quiescence expiry or
    /// the latest switch).
    Active { campaign: Campaign, since: Step },
}

impl NodeState {
    pub fn active_campaign(self) -> Option<Campaign> {
        match self {
            NodeState::Active { campaign, .. } => Some(campaign),
            _ => None,
        }
    }

    pub fn is_active(self) -> bool {
        matches!(self, NodeState::Active { .. })
    }

    pub fn is_quiescent(self) -> bool {
        matches!(self, NodeState::Quiescent { .. })
    }
}

/// Activation threshold of a node at step `t`.
///
/// `theta` plus `delta` per step since `last_activation`, saturating at 1.
/// Nodes without a current activation (and any node when `delta == 0`) use
/// the plain `theta`.
pub fn activation_threshold(theta: f64, delta: f64, t: Step, last_activation: Option<Step>) -> f64 {
    let Some(since) = last_activation else {
        return theta;
    };
    if delta == 0.0 {
        return theta;
    }
    debug_assert!(t >= since);
    let held = t.saturating_sub(since) as f64;
    let saturation = (1.0 - theta) / delta;
    if held >= saturation {
        1.0
    } else {
        (theta + delta * held).min(1.0)
    }
}

/// Quiescence duration for a node whose active foes carry `neg_mass`.
///
/// `tau + exp(lambda * neg_mass)`; with `lambda == 0` the foe term is
/// switched off entirely and the result is `tau`.
pub fn quiescence_duration(tau: f64, lambda: f64, neg_mass: f64) -> f64 {
    if lambda == 0.0 {
        tau
    } else {
        tau + (lambda * neg_mass).exp()
    }
}

/// Whole steps a quiescence of length `q` lasts: `ceil(q)`, saturating.
pub fn quiescence_steps(q: f64) -> Step {
    // `as` saturates, so infinite durations never expire within a horizon.
    q.ceil() as Step
}

/// Sum of the trusted in-weights of `v` coming from nodes in the active set.
pub fn trusted_influence(g: &DiffusionGraph, v: NodeId, is_active: impl Fn(NodeId) -> bool) -> f64 {
    let net = g.network();
    net.trusted_in(v)
        .iter()
        .filter(|&&e| is_active(net.edge(e as usize).src))
        .map(|&e| g.weight(e as usize))
        .sum()
}

/// Sum of `|w|` over distrusted in-edges of `v` whose source is active.
pub fn distrusted_active_mass(
    g: &DiffusionGraph,
    v: NodeId,
    is_active: impl Fn(NodeId) -> bool,
) -> f64 {
    let net = g.network();
    net.distrusted_in(v)
        .iter()
        .filter(|&&e| is_active(net.edge(e as usize).src))
        .map(|&e| -g.weight(e as usize))
        .sum()
}
