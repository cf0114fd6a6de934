use std::collections::BTreeMap;

use anyon_state::{AnyonState, LogicalKind, TreeShape};
use num_complex::Complex64;
use proptest::prelude::*;
use protocol_vm::{
    enumerate, normalize_whitespace, parse_script, print_script, run, Mode, Terminal, VmError, LOOP_BOUND_REASON,
};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn qutrit(a: [Complex64; 3]) -> AnyonState {
    AnyonState::logical_state(LogicalKind::Qutrit2222, &a).unwrap()
}

#[test]
fn vacuum_pair_measurement_has_one_branch() {
    let s = parse_script("shape 2 2 total 0\nmeasure_pair 1 { 0 => emit_gate }").unwrap();
    let input = AnyonState::new_basis_state(s.shape.clone(), &[]).unwrap();
    let e = enumerate(&s, &input).unwrap();
    assert_eq!(e.branches.len(), 1);
    assert!((e.branches[0].probability - 1.0).abs() < 1e-12);
    assert_eq!(e.truncated_mass, 0.0);
}

#[test]
fn empty_script_finishes_with_the_input() {
    let s = parse_script("shape 1 2 2 1 total 0").unwrap();
    let input = AnyonState::logical_state(LogicalKind::Qubit1221, &[c(0.6, 0.0), c(0.0, 0.8)]).unwrap();
    let t = run(&s, &input, &Mode::ForceRecorded).unwrap();
    assert_eq!(t.terminal, Terminal::Finished);
    assert_eq!(t.final_state, input);
    assert_eq!(t.probability, 1.0);
}

const WALK: &str = "name walk
shape 2 2 2 2 total 0
loop_bound 3

checkpoint top
measure_pair 1 {
  0 => emit_ancilla zero
  _ => braid 2 +; retry top
}
";

#[test]
fn retries_respect_the_loop_bound() {
    let s = parse_script(WALK).unwrap();
    let input = qutrit([c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]);
    let t = run(&s, &input, &Mode::ForcePath(vec![4, 4, 4, 4, 4])).unwrap();
    assert_eq!(t.terminal, Terminal::Abort(LOOP_BOUND_REASON.into()));
    assert_eq!(t.retries, 3);
    assert_eq!(t.outcomes(), vec![4, 4, 4, 4]);
    let ok = run(&s.with_loop_bound(10), &input, &Mode::ForcePath(vec![4, 4, 4, 4])).unwrap();
    assert_eq!(ok.retries, 4);
    assert!(matches!(ok.terminal, Terminal::EmitAncilla(_)));
}

#[test]
fn enumeration_accounts_for_truncated_mass() {
    let s = parse_script(WALK).unwrap();
    let input = qutrit([c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)]);
    let e = enumerate(&s, &input).unwrap();
    assert!(e.truncated_mass > 0.0);
    assert!((e.total_probability() + e.truncated_mass - 1.0).abs() < 1e-9);
    let longer = enumerate(&s.with_loop_bound(12), &input).unwrap();
    assert!(longer.truncated_mass < e.truncated_mass);
}

#[test]
fn forced_impossible_outcome_is_an_error() {
    let s = parse_script("shape 2 2 2 2 total 0\nmeasure_pair 1 { 4 => emit_gate; _ => abort \"miss\" }").unwrap();
    let input = qutrit([c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]);
    assert!(matches!(run(&s, &input, &Mode::ForceRecorded), Err(VmError::Runtime { .. })));
    let e = enumerate(&s, &input).unwrap();
    assert_eq!(e.zero_branches.len(), 1);
    assert_eq!(e.zero_branches[0].charge, 4);
    assert_eq!(e.branches.len(), 1);
    assert_eq!(e.branches[0].terminal, Terminal::Abort("miss".into()));
}

#[test]
fn input_shape_must_match() {
    let s = parse_script("shape 2 2 2 2 total 0").unwrap();
    let input = AnyonState::logical_state(LogicalKind::Qubit1221, &[c(1.0, 0.0), c(0.0, 0.0)]).unwrap();
    assert!(matches!(run(&s, &input, &Mode::ForceRecorded), Err(VmError::InputShape { .. })));
}

#[test]
fn trace_json_has_stable_keys() {
    let s = parse_script(WALK).unwrap();
    let input = qutrit([c(0.5, 0.0), c(0.5, 0.5), c(0.5, 0.0)]);
    let t = run(&s, &input, &Mode::Sample(7)).unwrap();
    let text = t.to_json();
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["schema"], 1);
    let order = ["schema", "script", "steps", "terminal", "tag", "probability", "retries", "final_state"];
    let at: Vec<usize> = order.iter().map(|k| text.find(&format!("\n  \"{k}\"")).unwrap()).collect();
    assert!(at.windows(2).all(|w| w[0] < w[1]), "{text}");
    assert_eq!(v.as_object().unwrap().len(), order.len());
    assert_eq!(t.to_json(), run(&s, &input, &Mode::Sample(7)).unwrap().to_json());
}

#[test]
fn sampling_matches_enumeration() {
    let src = "shape 2 2 2 2 total 0
braid 2 +
measure_pair 2 {
  0 => emit_gate a
  2 =>
    fuse 1 {
      0 => emit_gate b
      _ => emit_gate c
    }
  4 => abort \"four\"
}
";
    let s = parse_script(src).unwrap();
    let input = qutrit([c(0.3, 0.0), c(0.0, 0.7), c(0.5, -0.1)]);
    let e = enumerate(&s, &input).unwrap();
    let mut expected: BTreeMap<Terminal, f64> = BTreeMap::new();
    for b in &e.branches {
        *expected.entry(b.terminal.clone()).or_default() += b.probability;
    }
    let n = 10_000;
    let mut counts: BTreeMap<Terminal, usize> = BTreeMap::new();
    for seed in 0..n {
        *counts.entry(run(&s, &input, &Mode::Sample(seed)).unwrap().terminal).or_default() += 1;
    }
    for (t, p) in &expected {
        let f = *counts.get(t).unwrap_or(&0) as f64 / n as f64;
        let sigma = (p * (1.0 - p) / n as f64).sqrt();
        assert!((f - p).abs() <= 3.0 * sigma + 1e-12, "{t:?}: {f} vs {p}");
    }
    assert!(counts.keys().all(|t| expected.contains_key(t)));
}

/// Builds a valid random script from a stream of choices, tracking the shape.
struct Gen<'a> {
    choices: &'a [u8],
    at: usize,
    out: String,
}

impl Gen<'_> {
    fn pick(&mut self, n: usize) -> usize {
        let v = self.choices.get(self.at).copied().unwrap_or(0) as usize;
        self.at += 1;
        v % n
    }

    fn line(&mut self, indent: usize, s: &str) {
        self.out.push_str(&" ".repeat(indent));
        self.out.push_str(s);
        self.out.push('\n');
    }

    fn terminal(&mut self, indent: usize) {
        match self.pick(3) {
            0 => self.line(indent, "emit_gate"),
            1 => self.line(indent, "emit_ancilla t"),
            _ => self.line(indent, "abort \"gave up\""),
        }
    }

    /// Emits steps at `indent`; returns the final shape, or `None` if the body ended in a terminal.
    fn body(&mut self, mut shape: TreeShape, indent: usize, depth: usize, start: &TreeShape) -> Option<TreeShape> {
        let len = 1 + self.pick(4);
        for _ in 0..len {
            let n = shape.len();
            match self.pick(6) {
                0 | 1 if n >= 2 => {
                    let i = 1 + self.pick(n - 1);
                    let sign = if self.pick(2) == 0 { '+' } else { '-' };
                    self.line(indent, &format!("braid {i} {sign}"));
                    let mut l = shape.leaves().to_vec();
                    l.swap(i - 1, i);
                    shape = TreeShape::new(l, shape.total()).unwrap();
                }
                2 | 3 if n >= 2 && depth > 0 => {
                    let i = 1 + self.pick(n - 1);
                    let fuse = self.pick(2) == 0;
                    let outs = shape.block_outcomes(i, i + 1);
                    self.line(indent, &format!("{} {i} {{", if fuse { "fuse" } else { "measure_pair" }));
                    for &o in &outs {
                        self.line(indent + 2, &format!("{o} =>"));
                        if fuse {
                            let mut l = shape.leaves().to_vec();
                            l.splice(i - 1..i + 1, [o]);
                            let s = TreeShape::new(l, shape.total()).unwrap();
                            if let Some(_end) = self.body(s, indent + 4, depth - 1, start) {
                                self.terminal(indent + 4);
                            }
                        } else if self.pick(3) == 0 && &shape == start {
                            self.line(indent + 4, "retry top");
                        } else if let Some(end) = self.body(shape.clone(), indent + 4, depth - 1, start) {
                            if end != shape {
                                self.terminal(indent + 4);
                            }
                        }
                    }
                    self.line(indent, "}");
                }
                4 => {
                    let pos = 1 + self.pick(n + 1);
                    let ch = 1 + self.pick(2) as u8;
                    self.line(indent, &format!("create {pos} {ch}"));
                    let mut l = shape.leaves().to_vec();
                    l.splice(pos - 1..pos - 1, [ch, ch]);
                    shape = TreeShape::new(l, shape.total()).unwrap();
                }
                _ => self.line(indent, "continue"),
            }
        }
        Some(shape)
    }
}

fn generated(choices: &[u8], qutrit_shape: bool) -> String {
    let kind = if qutrit_shape { LogicalKind::Qutrit2222 } else { LogicalKind::Qubit1221 };
    let shape = kind.shape();
    let mut g = Gen { choices, at: 0, out: String::new() };
    g.out.push_str(&format!("name gen\n{}\nloop_bound 2\n\ncheckpoint top\n", header(&shape)));
    if let Some(end) = g.body(shape.clone(), 0, 2, &shape) {
        let _ = end;
        g.terminal(0);
    }
    g.out
}

fn header(s: &TreeShape) -> String {
    let l: Vec<String> = s.leaves().iter().map(|x| x.to_string()).collect();
    format!("shape {} total {}", l.join(" "), s.total())
}

fn arb_input(qutrit_shape: bool) -> impl Strategy<Value = AnyonState> {
    let n = if qutrit_shape { 3 } else { 2 };
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), n)
        .prop_filter("nonzero", |v| v.iter().map(|(a, b)| a * a + b * b).sum::<f64>() > 1e-3)
        .prop_map(move |v| {
            let amps: Vec<Complex64> = v.into_iter().map(|(a, b)| c(a, b)).collect();
            let kind = if qutrit_shape { LogicalKind::Qutrit2222 } else { LogicalKind::Qubit1221 };
            AnyonState::logical_state(kind, &amps).unwrap()
        })
}

fn arb_case() -> impl Strategy<Value = (String, AnyonState, u64)> {
    any::<bool>().prop_flat_map(|q| {
        (prop::collection::vec(any::<u8>(), 64), arb_input(q), any::<u64>())
            .prop_map(move |(ch, input, seed)| (generated(&ch, q), input, seed))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn generated_scripts_round_trip((src, _input, _seed) in arb_case()) {
        let s = parse_script(&src).map_err(|e| TestCaseError::fail(format!("{e}\n{src}")))?;
        let printed = print_script(&s);
        prop_assert_eq!(normalize_whitespace(&printed), normalize_whitespace(&src));
        let again = parse_script(&printed).unwrap();
        prop_assert_eq!(&again, &s);
        prop_assert_eq!(print_script(&again), printed);
    }

    #[test]
    fn enumeration_conserves_probability((src, input, _seed) in arb_case()) {
        let s = parse_script(&src).unwrap();
        let e = enumerate(&s, &input).unwrap();
        prop_assert!((e.total_probability() + e.truncated_mass - 1.0).abs() < 1e-9,
            "total {} truncated {}", e.total_probability(), e.truncated_mass);
        for b in &e.branches {
            let product: f64 = b.records.iter().map(|r| r.probability).product();
            prop_assert!((product - b.probability).abs() < 1e-12);
            prop_assert!(b.probability > 0.0 && b.probability <= 1.0 + 1e-12);
            prop_assert!((b.final_state.norm() - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn sampling_is_deterministic((src, input, seed) in arb_case()) {
        let s = parse_script(&src).unwrap();
        let a = run(&s, &input, &Mode::Sample(seed)).unwrap();
        let b = run(&s, &input, &Mode::Sample(seed)).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn forced_run_is_one_of_the_enumerated_paths((src, input, _seed) in arb_case()) {
        let s = parse_script(&src).unwrap();
        let e = enumerate(&s, &input).unwrap();
        match run(&s, &input, &Mode::ForceRecorded) {
            Ok(t) if t.terminal != Terminal::Abort(LOOP_BOUND_REASON.into()) => {
                let hit = e.branches.iter().find(|b| b.outcomes() == t.outcomes());
                prop_assert!(hit.is_some());
                let fid = hit.unwrap().final_state.fidelity(&t.final_state).unwrap();
                prop_assert!((fid - 1.0).abs() < 1e-9);
            }
            Ok(_) => {}
            Err(VmError::Runtime { .. }) => {}
            Err(other) => prop_assert!(false, "{other}"),
        }
    }
}
