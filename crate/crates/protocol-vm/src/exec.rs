use std::collections::VecDeque;

use anyon_state::{AnyonState, Policy, StateError, MIN_PROBABILITY};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::ast::{Address, MeasureKind, Pattern, ProtocolScript, Step};
use crate::VmError;

/// Reason string used when the retry budget runs out.
pub const LOOP_BOUND_REASON: &str = "loop bound";

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Mode {
    /// Born-rule sampling from a seeded ChaCha8 stream.
    Sample(u64),
    /// Always take the first-listed branch.
    ForceRecorded,
    /// Take these outcomes at successive measurements, then fall back to the first-listed branch.
    ForcePath(Vec<u8>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct StepRecord {
    pub step: String,
    pub outcome: Option<u8>,
    pub probability: f64,
    pub forced: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum Terminal {
    EmitGate(Option<String>),
    EmitAncilla(Option<String>),
    /// Ran off the end of the script.
    Finished,
    Abort(String),
}

impl Terminal {
    pub fn tag(&self) -> Option<&str> {
        match self {
            Terminal::EmitGate(t) | Terminal::EmitAncilla(t) => t.as_deref(),
            _ => None,
        }
    }

    pub fn is_abort(&self) -> bool {
        matches!(self, Terminal::Abort(_))
    }

    pub fn describe(&self) -> String {
        match self {
            Terminal::EmitGate(t) => tagged("emit_gate", t),
            Terminal::EmitAncilla(t) => tagged("emit_ancilla", t),
            Terminal::Finished => "finished".into(),
            Terminal::Abort(r) => format!("abort {r:?}"),
        }
    }
}

fn tagged(kw: &str, t: &Option<String>) -> String {
    match t {
        Some(t) => format!("{kw} {t}"),
        None => kw.into(),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExecutionTrace {
    pub script: String,
    pub records: Vec<StepRecord>,
    pub terminal: Terminal,
    /// Product of the recorded outcome probabilities.
    pub probability: f64,
    /// Post-measurement state, normalized.
    pub final_state: AnyonState,
    pub retries: u32,
    /// State on every arrival at a checkpoint, including arrivals by `retry`.
    pub checkpoints: Vec<(String, AnyonState)>,
}

impl ExecutionTrace {
    /// Measurement outcomes in the order they happened.
    pub fn outcomes(&self) -> Vec<u8> {
        self.records.iter().filter_map(|r| r.outcome).collect()
    }
}

#[derive(Clone)]
struct Machine {
    addr: Option<Address>,
    state: AnyonState,
    records: Vec<StepRecord>,
    probability: f64,
    retries: u32,
    measurements: usize,
    checkpoints: Vec<(String, AnyonState)>,
}

enum Progress {
    Running,
    Done(Terminal),
    /// A measurement is due; its live outcomes and their probabilities.
    Branch(Vec<(u8, f64)>),
}

fn runtime(script: &ProtocolScript, addr: &[usize], source: StateError) -> VmError {
    VmError::Runtime { at: script.describe(addr), source }
}

impl Machine {
    fn new(script: &ProtocolScript, input: &AnyonState) -> Result<Self, VmError> {
        if input.shape() != &script.shape {
            return Err(VmError::InputShape { expected: script.shape.to_string(), got: input.shape().to_string() });
        }
        let state = input.renormalized().map_err(|e| VmError::Runtime { at: "input".into(), source: e })?;
        Ok(Machine {
            addr: if script.steps.is_empty() { None } else { Some(vec![0]) },
            state,
            records: Vec::new(),
            probability: 1.0,
            retries: 0,
            measurements: 0,
            checkpoints: Vec::new(),
        })
    }

    fn record(&mut self, step: &Step) {
        self.records.push(StepRecord { step: step.headline(), outcome: None, probability: 1.0, forced: false });
    }

    /// Runs deterministic steps until a terminal or a measurement.
    fn progress(&mut self, script: &ProtocolScript) -> Result<Progress, VmError> {
        let Some(addr) = self.addr.clone() else { return Ok(Progress::Done(Terminal::Finished)) };
        let step = script.step_at(&addr).expect("valid address");
        let err = |e| runtime(script, &addr, e);
        let next = script.advance(&addr);
        match step {
            Step::Measure { kind, .. } => {
                let (i, j) = kind.span();
                let probs = self.state.block_probabilities(i, j).map_err(err)?;
                return Ok(Progress::Branch(probs.into_iter().collect()));
            }
            Step::Braid { pos, sign } => self.state = self.state.braid(*pos, *sign).map_err(err)?,
            Step::Unfuse { pos, b, c } => self.state = self.state.unfuse(*pos, *b, *c).map_err(err)?,
            Step::Create { pos, c } => self.state = self.state.create_pair(*pos, *c).map_err(err)?,
            Step::Remove { pos } => {
                self.state = if self.state.leaves().get(pos.wrapping_sub(1)) == Some(&0) {
                    self.state.drop_vacuum_leaf(*pos)
                } else {
                    self.state.remove_pair(*pos)
                }
                .map_err(err)?
            }
            Step::Checkpoint(l) => self.checkpoints.push((l.clone(), self.state.clone())),
            Step::Continue => {}
            Step::Comment(_) => {
                self.addr = next;
                return Ok(Progress::Running);
            }
            Step::Retry(l) => {
                self.record(step);
                if self.retries >= script.loop_bound {
                    return Ok(Progress::Done(Terminal::Abort(LOOP_BOUND_REASON.into())));
                }
                self.retries += 1;
                self.checkpoints.push((l.clone(), self.state.clone()));
                let target = script.find_checkpoint(l).ok_or_else(|| VmError::Static {
                    at: script.describe(&addr),
                    msg: format!("retry target {l} does not exist"),
                })?;
                self.addr = script.advance(&target);
                return Ok(Progress::Running);
            }
            Step::EmitGate(t) => {
                self.record(step);
                return Ok(Progress::Done(Terminal::EmitGate(t.clone())));
            }
            Step::EmitAncilla(t) => {
                self.record(step);
                return Ok(Progress::Done(Terminal::EmitAncilla(t.clone())));
            }
            Step::Abort(r) => {
                self.record(step);
                return Ok(Progress::Done(Terminal::Abort(r.clone())));
            }
        }
        self.record(step);
        self.addr = next;
        Ok(Progress::Running)
    }

    /// Applies outcome `c` of the pending measurement.
    fn take(&mut self, script: &ProtocolScript, c: u8, forced: bool) -> Result<(), VmError> {
        let addr = self.addr.clone().expect("pending measurement");
        let Some(Step::Measure { kind, arms }) = script.step_at(&addr) else { unreachable!("pending measurement") };
        let err = |e| runtime(script, &addr, e);
        let (outcome, state) = match kind {
            MeasureKind::Block(i, j) => self.state.measure_block(*i, *j, Policy::Force(c)),
            MeasureKind::Pair(i) => self.state.measure_pair(*i, Policy::Force(c)),
            MeasureKind::Fuse(i) => self.state.fuse_pair(*i, Policy::Force(c)),
        }
        .map_err(err)?;
        let arm = arms
            .iter()
            .position(|a| a.pattern == Pattern::Charge(c))
            .or_else(|| arms.iter().position(|a| a.pattern == Pattern::Any))
            .ok_or_else(|| VmError::NoBranch { at: script.describe(&addr), charge: c })?;
        self.records.push(StepRecord {
            step: script.step_at(&addr).unwrap().headline(),
            outcome: Some(c),
            probability: outcome.probability,
            forced,
        });
        self.probability *= outcome.probability;
        self.measurements += 1;
        self.state = state;
        let mut body = addr;
        body.extend([arm, 0]);
        self.addr = Some(body);
        Ok(())
    }

    fn finish(self, script: &ProtocolScript, terminal: Terminal) -> ExecutionTrace {
        ExecutionTrace {
            script: script.name.clone(),
            records: self.records,
            terminal,
            probability: self.probability,
            final_state: self.state,
            retries: self.retries,
            checkpoints: self.checkpoints,
        }
    }
}

/// The outcome a forced run takes: the first-listed arm, where `_` means the
/// smallest live outcome not listed explicitly.
fn first_listed(step: &Step, live: &[(u8, f64)]) -> Option<u8> {
    let Step::Measure { arms, .. } = step else { return None };
    match arms.first()?.pattern {
        Pattern::Charge(c) => Some(c),
        Pattern::Any => {
            let listed: Vec<u8> = arms
                .iter()
                .filter_map(|a| match a.pattern {
                    Pattern::Charge(c) => Some(c),
                    Pattern::Any => None,
                })
                .collect();
            live.iter().find(|(c, p)| *p >= MIN_PROBABILITY && !listed.contains(c)).map(|x| x.0)
        }
    }
}

pub fn run(script: &ProtocolScript, input: &AnyonState, mode: &Mode) -> Result<ExecutionTrace, VmError> {
    let mut m = Machine::new(script, input)?;
    let mut rng = match mode {
        Mode::Sample(seed) => Some(ChaCha8Rng::seed_from_u64(*seed)),
        _ => None,
    };
    loop {
        match m.progress(script)? {
            Progress::Running => {}
            Progress::Done(t) => return Ok(m.finish(script, t)),
            Progress::Branch(probs) => {
                let addr = m.addr.clone().unwrap();
                let step = script.step_at(&addr).unwrap();
                let (c, forced) = match (mode, rng.as_mut()) {
                    (Mode::Sample(_), Some(rng)) => (sample(&probs, rng.gen::<f64>()), false),
                    (Mode::ForcePath(path), _) if m.measurements < path.len() => (Some(path[m.measurements]), true),
                    _ => (first_listed(step, &probs), true),
                };
                let c = c.ok_or_else(|| VmError::Runtime { at: script.describe(&addr), source: StateError::ZeroState })?;
                m.take(script, c, forced)?;
            }
        }
    }
}

fn sample(probs: &[(u8, f64)], u: f64) -> Option<u8> {
    let live: Vec<&(u8, f64)> = probs.iter().filter(|x| x.1 >= MIN_PROBABILITY).collect();
    let total: f64 = live.iter().map(|x| x.1).sum();
    let mut acc = 0.0;
    for &&(c, p) in &live {
        acc += p;
        if u * total < acc {
            return Some(c);
        }
    }
    live.last().map(|x| x.0)
}

/// A branch outcome that was listed by the script but never happens.
#[derive(Debug, Clone, PartialEq)]
pub struct ZeroBranch {
    pub at: String,
    pub charge: u8,
    pub probability: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Enumeration {
    /// Every terminal path, sorted by its outcome sequence.
    pub branches: Vec<ExecutionTrace>,
    /// Probability that ended in a loop-bound abort.
    pub truncated_mass: f64,
    pub truncated_paths: usize,
    pub zero_branches: Vec<ZeroBranch>,
}

impl Enumeration {
    pub fn total_probability(&self) -> f64 {
        self.branches.iter().map(|b| b.probability).sum()
    }

    /// Summed probability of the branches ending in `terminal`.
    pub fn probability_of(&self, pred: impl Fn(&Terminal) -> bool) -> f64 {
        self.branches.iter().filter(|b| pred(&b.terminal)).map(|b| b.probability).sum()
    }
}

/// Breadth-first expansion of every live outcome.
pub fn enumerate(script: &ProtocolScript, input: &AnyonState) -> Result<Enumeration, VmError> {
    let mut queue = VecDeque::from([Machine::new(script, input)?]);
    let mut out = Enumeration { branches: Vec::new(), truncated_mass: 0.0, truncated_paths: 0, zero_branches: Vec::new() };
    while let Some(mut m) = queue.pop_front() {
        loop {
            match m.progress(script)? {
                Progress::Running => {}
                Progress::Done(Terminal::Abort(r)) if r == LOOP_BOUND_REASON => {
                    out.truncated_mass += m.probability;
                    out.truncated_paths += 1;
                    break;
                }
                Progress::Done(t) => {
                    out.branches.push(m.finish(script, t));
                    break;
                }
                Progress::Branch(probs) => {
                    let addr = m.addr.clone().unwrap();
                    if let Some(Step::Measure { arms, .. }) = script.step_at(&addr) {
                        for a in arms {
                            if let Pattern::Charge(c) = a.pattern {
                                let p = probs.iter().find(|x| x.0 == c).map_or(0.0, |x| x.1);
                                if p < MIN_PROBABILITY {
                                    let at = script.describe(&addr);
                                    if !out.zero_branches.iter().any(|z| z.at == at && z.charge == c) {
                                        out.zero_branches.push(ZeroBranch { at, charge: c, probability: p });
                                    }
                                }
                            }
                        }
                    }
                    for &(c, p) in &probs {
                        if p >= MIN_PROBABILITY {
                            let mut child = m.clone();
                            child.take(script, c, true)?;
                            queue.push_back(child);
                        }
                    }
                    break;
                }
            }
        }
    }
    out.branches.sort_by(|a, b| a.outcomes().cmp(&b.outcomes()));
    Ok(out)
}
