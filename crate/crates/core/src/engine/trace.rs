//! Event traces of a diffusion run and their line-delimited serialization.

use std::fmt;
use std::io::{BufRead, Write};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{Campaign, Model};
use crate::dynamics::{ModelParams, Step};
use crate::error::{Error, Result};
use crate::graph::NodeId;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EventKind {
    /// Activation attempt succeeded; the node waits out its quiescence.
    Quiesce,
    /// The node becomes contagious (seeding or quiescence expiry).
    Activate,
    /// Instant change of campaign; `campaign` is the new one.
    Switch,
    /// Return to inactive; `campaign` is the one left.
    Deactivate,
}

impl EventKind {
    pub fn as_str(self) -> &'static str {
        match self {
            EventKind::Quiesce => "quiesce",
            EventKind::Activate => "activate",
            EventKind::Switch => "switch",
            EventKind::Deactivate => "deactivate",
        }
    }
}

impl FromStr for EventKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "quiesce" => Ok(EventKind::Quiesce),
            "activate" => Ok(EventKind::Activate),
            "switch" => Ok(EventKind::Switch),
            "deactivate" => Ok(EventKind::Deactivate),
            other => Err(format!("unknown event kind '{other}'")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Event {
    pub step: Step,
    pub node: NodeId,
    pub kind: EventKind,
    pub campaign: Campaign,
}

impl fmt::Display for Event {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{},{},{}", self.step, self.node, self.kind.as_str(), self.campaign)
    }
}

/// Per-step set sizes, indexed by campaign.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepCounts {
    pub active: [u32; 2],
    pub quiescent: [u32; 2],
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceMeta {
    pub model: Model,
    pub node_count: usize,
    pub seeds_a: Vec<NodeId>,
    pub seeds_b: Vec<NodeId>,
    pub delay_b: Step,
    /// B seeds that were already active or quiescent at `delay_b`.
    pub skipped_seeds_b: Vec<NodeId>,
    pub horizon: Step,
    /// Step at which the run stopped; states are frozen afterwards.
    pub last_step: Step,
    pub params: ModelParams,
    pub graph_fingerprint: u64,
    pub node_params_fingerprint: u64,
    pub rng_seed: Option<u64>,
}

/// Coarse node status as reconstructed from events.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Status {
    Inactive,
    Quiescent(Campaign),
    Active(Campaign),
}

impl Status {
    pub fn active_campaign(self) -> Option<Campaign> {
        match self {
            Status::Active(c) => Some(c),
            _ => None,
        }
    }
}

/// Time-ordered event log of one run plus per-step set sizes.
///
/// Full per-step sets are reconstructed on demand with [`Trace::replay`].
#[derive(Debug, Clone, PartialEq)]
pub struct Trace {
    pub meta: TraceMeta,
    events: Vec<Event>,
    counts: Vec<StepCounts>,
}

impl Trace {
    pub(crate) fn new(meta: TraceMeta, events: Vec<Event>, counts: Vec<StepCounts>) -> Self {
        debug_assert_eq!(counts.len(), meta.last_step as usize + 1);
        Trace { meta, events, counts }
    }

    /// Rebuilds a trace from its metadata and events, recomputing set sizes.
    pub fn from_events(meta: TraceMeta, events: Vec<Event>) -> Self {
        let mut counts = Vec::with_capacity(meta.last_step as usize + 1);
        let mut statuses = vec![Status::Inactive; meta.node_count];
        let mut tally = StepCounts::default();
        let mut pending = events.iter().peekable();
        for t in 0..=meta.last_step {
            while let Some(e) = pending.next_if(|e| e.step == t) {
                let before = statuses[e.node as usize];
                apply_count(&mut tally, e, before);
                statuses[e.node as usize] = status_after(e);
            }
            counts.push(tally);
        }
        Trace { meta, events, counts }
    }

    /// The trace cut at `horizon`, as if the run had been stopped there.
    pub fn truncated(&self, horizon: Step) -> Trace {
        let mut meta = self.meta.clone();
        meta.horizon = horizon;
        meta.params.horizon = horizon;
        meta.last_step = meta.last_step.min(horizon);
        let events = self.events.iter().filter(|e| e.step <= horizon).cloned().collect();
        Trace::from_events(meta, events)
    }

    pub fn model(&self) -> Model {
        self.meta.model
    }

    pub fn horizon(&self) -> Step {
        self.meta.horizon
    }

    pub fn events(&self) -> &[Event] {
        &self.events
    }

    /// Set sizes at step `t`; steps past the end of the run repeat the final
    /// state.
    pub fn counts_at(&self, t: Step) -> StepCounts {
        let idx = (t as usize).min(self.counts.len() - 1);
        self.counts[idx]
    }

    pub fn active_count(&self, t: Step, campaign: Campaign) -> u32 {
        self.counts_at(t).active[campaign.index()]
    }

    /// Replays the events step by step for `t = 0..=horizon`.
    pub fn replay(&self) -> Replay<'_> {
        Replay::over(self.meta.node_count, &self.events, self.meta.horizon)
    }

    /// Status of every node at the horizon.
    pub fn final_statuses(&self) -> Vec<Status> {
        let mut statuses = vec![Status::Inactive; self.meta.node_count];
        for e in &self.events {
            statuses[e.node as usize] = status_after(e);
        }
        statuses
    }

    /// Step of the first `activate` event of each node.
    pub fn first_activation(&self) -> Vec<Option<Step>> {
        let mut first = vec![None; self.meta.node_count];
        for e in &self.events {
            if e.kind == EventKind::Activate && first[e.node as usize].is_none() {
                first[e.node as usize] = Some(e.step);
            }
        }
        first
    }

    /// Writes the JSON metadata line, the column header and one
    /// `step,node,kind,campaign` row per event.
    pub fn write<W: Write>(&self, mut out: W) -> Result<()> {
        let io = |e| Error::io("<trace>", e);
        serde_json::to_writer(&mut out, &self.meta)?;
        writeln!(out).map_err(io)?;
        writeln!(out, "step,node,kind,campaign").map_err(io)?;
        for e in &self.events {
            writeln!(out, "{e}").map_err(io)?;
        }
        Ok(())
    }

    pub fn read<R: BufRead>(reader: R) -> Result<Trace> {
        let mut lines = reader.lines().enumerate();
        let mut next_line = || -> Result<Option<(usize, String)>> {
            match lines.next() {
                None => Ok(None),
                Some((i, line)) => Ok(Some((i + 1, line.map_err(|e| Error::parse(i + 1, e.to_string()))?))),
            }
        };
        let (_, header) = next_line()?.ok_or_else(|| Error::parse(1, "missing metadata line"))?;
        let meta: TraceMeta = serde_json::from_str(&header).map_err(|e| Error::parse(1, e.to_string()))?;
        match next_line()? {
            Some((_, cols)) if cols.trim() == "step,node,kind,campaign" => {}
            _ => return Err(Error::parse(2, "expected header 'step,node,kind,campaign'")),
        }
        let mut events = Vec::new();
        while let Some((no, line)) = next_line()? {
            if line.trim().is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.trim().split(',').collect();
            if fields.len() != 4 {
                return Err(Error::parse(no, "expected 4 fields"));
            }
            let step: Step = fields[0].parse().map_err(|_| Error::parse(no, "invalid step"))?;
            if step > meta.last_step || events.last().is_some_and(|e: &Event| e.step > step) {
                return Err(Error::parse(no, "event steps must be ordered and within the run"));
            }
            let node: NodeId = fields[1].parse().map_err(|_| Error::parse(no, "invalid node"))?;
            if node as usize >= meta.node_count {
                return Err(Error::parse(no, "node out of range"));
            }
            let kind = fields[2].parse().map_err(|e: String| Error::parse(no, e))?;
            let campaign = fields[3].parse().map_err(|e: String| Error::parse(no, e))?;
            events.push(Event { step, node, kind, campaign });
        }
        Ok(Trace::from_events(meta, events))
    }
}

fn status_after(e: &Event) -> Status {
    match e.kind {
        EventKind::Quiesce => Status::Quiescent(e.campaign),
        EventKind::Activate | EventKind::Switch => Status::Active(e.campaign),
        EventKind::Deactivate => Status::Inactive,
    }
}

fn apply_count(tally: &mut StepCounts, e: &Event, before: Status) {
    let c = e.campaign.index();
    match e.kind {
        EventKind::Quiesce => tally.quiescent[c] += 1,
        EventKind::Activate => {
            if before == Status::Quiescent(e.campaign) {
                tally.quiescent[c] -= 1;
            }
            tally.active[c] += 1;
        }
        EventKind::Switch => {
            tally.active[e.campaign.other().index()] -= 1;
            tally.active[c] += 1;
        }
        EventKind::Deactivate => tally.active[c] -= 1,
    }
}

/// Step-by-step reconstruction of node statuses from a trace.
pub struct Replay<'a> {
    events: &'a [Event],
    cursor: usize,
    next_step: Step,
    last_step: Step,
    statuses: Vec<Status>,
}

impl<'a> Replay<'a> {
    fn over(node_count: usize, events: &'a [Event], last_step: Step) -> Self {
        Replay {
            events,
            cursor: 0,
            next_step: 0,
            last_step,
            statuses: vec![Status::Inactive; node_count],
        }
    }

    /// Applies the events of the next step and returns it with the statuses
    /// at the end of that step.
    pub fn advance(&mut self) -> Option<(Step, &[Status])> {
        if self.next_step > self.last_step {
            return None;
        }
        let t = self.next_step;
        while let Some(e) = self.events.get(self.cursor) {
            if e.step != t {
                break;
            }
            self.statuses[e.node as usize] = status_after(e);
            self.cursor += 1;
        }
        self.next_step += 1;
        Some((t, &self.statuses))
    }

    pub fn statuses(&self) -> &[Status] {
        &self.statuses
    }
}
