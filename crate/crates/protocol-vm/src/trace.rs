//! JSON rendering of traces and enumerations (schema 1, fixed key order).

use anyon_state::AnyonState;
use serde::Serialize;

use crate::exec::{Enumeration, ExecutionTrace};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Serialize)]
pub struct StateJson {
    pub leaves: Vec<u8>,
    pub total: u8,
    pub amplitudes: Vec<AmplitudeJson>,
}

#[derive(Debug, Serialize)]
pub struct AmplitudeJson {
    pub labels: Vec<u8>,
    pub re: f64,
    pub im: f64,
}

#[derive(Debug, Serialize)]
pub struct RecordJson {
    pub step: String,
    pub outcome: Option<u8>,
    pub probability: f64,
    pub forced: bool,
}

#[derive(Debug, Serialize)]
pub struct TraceJson {
    pub schema: u32,
    pub script: String,
    pub steps: Vec<RecordJson>,
    pub terminal: String,
    pub tag: Option<String>,
    pub probability: f64,
    pub retries: u32,
    pub final_state: StateJson,
}

#[derive(Debug, Serialize)]
pub struct ZeroBranchJson {
    pub at: String,
    pub outcome: u8,
    pub probability: f64,
}

#[derive(Debug, Serialize)]
pub struct EnumerationJson {
    pub schema: u32,
    pub script: String,
    pub total_probability: f64,
    pub truncated_mass: f64,
    pub truncated_paths: usize,
    pub zero_branches: Vec<ZeroBranchJson>,
    pub branches: Vec<TraceJson>,
}

pub fn state_json(s: &AnyonState) -> StateJson {
    StateJson {
        leaves: s.leaves().to_vec(),
        total: s.shape().total(),
        amplitudes: s
            .amplitudes()
            .iter()
            .map(|(k, v)| AmplitudeJson { labels: k.clone(), re: v.re, im: v.im })
            .collect(),
    }
}

pub fn trace_json(t: &ExecutionTrace) -> TraceJson {
    TraceJson {
        schema: SCHEMA_VERSION,
        script: t.script.clone(),
        steps: t
            .records
            .iter()
            .map(|r| RecordJson { step: r.step.clone(), outcome: r.outcome, probability: r.probability, forced: r.forced })
            .collect(),
        terminal: t.terminal.describe(),
        tag: t.terminal.tag().map(str::to_string),
        probability: t.probability,
        retries: t.retries,
        final_state: state_json(&t.final_state),
    }
}

pub fn enumeration_json(script: &str, e: &Enumeration) -> EnumerationJson {
    EnumerationJson {
        schema: SCHEMA_VERSION,
        script: script.to_string(),
        total_probability: e.total_probability(),
        truncated_mass: e.truncated_mass,
        truncated_paths: e.truncated_paths,
        zero_branches: e
            .zero_branches
            .iter()
            .map(|z| ZeroBranchJson { at: z.at.clone(), outcome: z.charge, probability: z.probability })
            .collect(),
        branches: e.branches.iter().map(trace_json).collect(),
    }
}

impl ExecutionTrace {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&trace_json(self)).expect("trace serializes")
    }
}

impl Enumeration {
    pub fn to_json(&self, script: &str) -> String {
        serde_json::to_string_pretty(&enumeration_json(script, self)).expect("enumeration serializes")
    }
}
