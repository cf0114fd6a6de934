//! Acceptance criteria 1 to 9. Prints one PASS/FAIL line per criterion and exits nonzero
//! if any fails.

use std::collections::BTreeMap;
use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, PI};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use anyon_state::AnyonState;
use num_complex::Complex64;
use paper_protocols::entangling::*;
use paper_protocols::pipelines::{a1, a1_prime, a_f, b_f, relative_phase};
use paper_protocols::{
    braid_fixture_suite, branch_gates, extract_gate, is_entangling, load, qubit_phase_ancilla, qutrit_phase_ancilla,
    shipped_scripts, swap_gate, vector_overlap, GateMatrix, ProtocolError, ProtocolKind, Register,
};
use phase_number_theory::phases::{gamma, gamma_prime_argument, theta, theta_prime_argument};
use phase_number_theory::{calcut_quadratic_check, calcut_values, density_sweep, lemma3_check, olmsted_empirical, QuadExt};
use protocol_vm::{enumerate, run, Mode, ProtocolScript, Terminal};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use recoupling_core::{build_tables, verify_hexagon, verify_pentagon};

const TOL: f64 = 1e-9;
const ENUMERATION_BOUND: u32 = 3;

struct Verdict {
    passed: bool,
    notes: Vec<String>,
}

impl Verdict {
    fn new() -> Self {
        Verdict { passed: true, notes: Vec::new() }
    }

    fn check(&mut self, ok: bool, what: impl Into<String>) {
        if !ok {
            self.passed = false;
            self.notes.push(format!("failed: {}", what.into()));
        }
    }

    fn note(&mut self, s: impl Into<String>) {
        self.notes.push(s.into());
    }

    fn within(&mut self, started: Instant, limit: Duration) {
        let t = started.elapsed();
        self.check(t < limit, format!("runtime {:.2} s over {:.0} s", t.as_secs_f64(), limit.as_secs_f64()));
    }
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn e(t: f64) -> Complex64 {
    Complex64::from_polar(1.0, t)
}

fn bounded(s: &ProtocolScript) -> ProtocolScript {
    s.with_loop_bound(s.loop_bound.min(ENUMERATION_BOUND))
}

fn close(a: &GateMatrix, b: &GateMatrix) -> bool {
    a.phase_fidelity(b) > 1.0 - TOL
}

fn symbol_fixtures(v: &mut Verdict) {
    let started = Instant::now();
    let t = build_tables().expect("tables");
    let r2 = FRAC_1_SQRT_2;
    // the zero symbol, the triple, the two lemma lists and the qubit-fusion symbol
    let values: &[([u8; 6], f64)] = &[
        ([2, 2, 2, 2, 2, 2], 0.0),
        ([2, 2, 2, 2, 2, 4], -r2),
        ([2, 2, 0, 2, 2, 4], 0.5),
        ([2, 2, 4, 2, 2, 4], 0.5),
        ([2, 2, 1, 1, 1, 2], r2),
        ([2, 2, 3, 1, 1, 2], -r2),
        ([4, 2, 3, 1, 1, 2], 1.0),
        ([2, 1, 2, 1, 2, 1], r2),
        ([2, 3, 2, 1, 2, 1], -r2),
        ([4, 3, 2, 1, 2, 1], 1.0),
        ([2, 2, 2, 2, 2, 0], r2),
        ([1, 1, 2, 1, 3, 2], 1.0),
    ];
    let squared: &[([u8; 6], i32, f64)] = &[
        ([2, 2, 2, 2, 0, 2], 2, 1.0),
        ([2, 2, 0, 2, 2, 0], 1, 0.5),
        ([2, 2, 2, 2, 2, 0], 2, 0.5),
        ([2, 2, 2, 0, 0, 0], 1, 1.0),
        ([2, 2, 2, 2, 2, 4], 2, 0.5),
        ([2, 2, 2, 4, 4, 0], 1, 1.0),
        ([2, 2, 2, 2, 4, 2], 2, 1.0),
        ([2, 2, 4, 2, 2, 0], 1, 0.5),
    ];
    let mut worst = 0.0f64;
    for (s, want) in values {
        let d = (t.six_j(s[0], s[1], s[2], s[3], s[4], s[5]) - want).abs();
        worst = worst.max(d);
        v.check(d < TOL, format!("{s:?} off by {d:e}"));
    }
    for (s, p, want) in squared {
        let d = (t.six_j(s[0], s[1], s[2], s[3], s[4], s[5]).powi(*p) - want).abs();
        worst = worst.max(d);
        v.check(d < TOL, format!("{s:?}^{p} off by {d:e}"));
    }
    v.note(format!("{} values, max deviation {worst:.1e}", values.len() + squared.len()));
    v.within(started, Duration::from_secs(1));
}

fn axioms(v: &mut Verdict) {
    let started = Instant::now();
    let t = build_tables().expect("tables");
    let (p, h) = (verify_pentagon(&t), verify_hexagon(&t));
    v.check(p.instances > 0 && h.instances > 0, "no instances enumerated");
    v.check(p.max_deviation < TOL, format!("pentagon deviation {:e}", p.max_deviation));
    v.check(h.max_deviation < TOL, format!("hexagon deviation {:e}", h.max_deviation));
    v.note(format!(
        "pentagon {} instances max {:.1e}, hexagon {} instances max {:.1e}",
        p.instances, p.max_deviation, h.instances, h.max_deviation
    ));
    v.within(started, Duration::from_secs(10));
}

fn braids(v: &mut Verdict) {
    let rep = braid_fixture_suite().expect("fixtures build");
    for r in &rep.results {
        v.check(r.fidelity > 1.0 - TOL, format!("{} fidelity {}", r.name, r.fidelity));
    }
    v.check(rep.results.len() >= 9, format!("only {} fixtures", rep.results.len()));
    v.note(format!("{} fixtures, worst fidelity 1 - {:.1e}", rep.results.len(), 1.0 - rep.worst_fidelity()));
}

fn wrap(x: f64) -> f64 {
    (x + PI).rem_euclid(2.0 * PI) - PI
}

fn ancillas(v: &mut Verdict) {
    let s3 = 3f64.sqrt();
    let tp = ((-14.0 - 5.0 * s3) / 11.0).atan();
    let a = a1().expect("A1").amplitudes;
    let boxed = [Complex64::from_polar(7f64.sqrt(), tp), Complex64::from_polar(s3, -PI / 12.0)];
    let o = vector_overlap(&a, &boxed);
    v.check(o > 1.0 - TOL, format!("A1 overlap {o}"));
    // the alternative fraction for the same amplitude does not reproduce the simulation
    let alt = ((14.0 + 3.0 * s3) / 13.0).atan();
    let rel = -relative_phase(&a, 1) - PI / 12.0;
    let (d_box, d_alt) = (wrap(rel - tp).abs(), wrap(rel - alt).abs().min((wrap(rel - alt).abs() - PI).abs()));
    v.check(d_box < TOL && d_alt > 1e-3, format!("phase argument resolution: box {d_box:e}, alternative {d_alt:e}"));
    let ap = a1_prime().expect("A1'").amplitudes;
    let o = vector_overlap(&ap, &[c(1.0 / 10f64.sqrt(), 0.0), c(3.0 / 10f64.sqrt(), 0.0)]);
    v.check(o > 1.0 - TOL, format!("A1' overlap {o}"));
    let af = a_f().expect("A_f").amplitudes;
    let o = vector_overlap(&af, &[c(1.0, 0.0), e(2.0 * tp + PI / 6.0)]);
    v.check(o > 1.0 - TOL, format!("A_f overlap {o}"));
    let g = 2.0 * ((3.0 * s3 - 14.0) / 13.0).atan() - FRAC_PI_2;
    let bf = b_f().expect("B_f").amplitudes;
    let o = vector_overlap(&bf, &[c(1.0, 0.0), Complex64::from_polar(2f64.sqrt(), g), c(1.0, 0.0)]);
    v.check(o > 1.0 - TOL, format!("B_f overlap {o}"));
    v.note(format!("simulated A1 follows the boxed argument; the other fraction is off by {d_alt:.3} rad"));
}

/// Gates of every `emit_gate` branch reached with nonzero probability, each checked leak-free.
fn tagged_gates(v: &mut Verdict, name: &str, reg: Register, anc: &AnyonState) -> Vec<(String, GateMatrix)> {
    let p = load(name).expect("catalog");
    let mut out = Vec::new();
    for b in branch_gates(&bounded(&p.script), reg, reg, Some(anc)).expect("enumeration") {
        let Terminal::EmitGate(Some(tag)) = &b.terminal else { continue };
        if b.probabilities.iter().sum::<f64>() < 1e-12 {
            continue;
        }
        v.check(b.leakage() < TOL, format!("{name} {:?} leaks {:e}", b.outcomes, b.leakage()));
        out.push((tag.clone(), b.gate()));
    }
    out
}

fn gate_extraction(v: &mut Verdict) {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    for _ in 0..20 {
        let (x, y) = (rng.gen_range(-PI..PI), rng.gen_range(-PI..PI));
        let anc = Register::Qubit.state(&[e(x), e(y)]).unwrap();
        let gates = tagged_gates(v, "qubit_gate", Register::Qubit, &anc);
        v.check(!gates.is_empty(), "qubit protocol emitted no gate");
        for (tag, g) in gates {
            let want = match tag.as_str() {
                "direct" => GateMatrix::diagonal(&[e(x), e(y)]),
                "swapped" => GateMatrix::diagonal(&[e(y), e(x)]),
                other => {
                    v.check(false, format!("unexpected tag {other}"));
                    continue;
                }
            };
            v.check(close(&g, &want), format!("qubit gate {tag} for ancilla phases ({x:.3}, {y:.3})"));
        }
    }
    for _ in 0..20 {
        let alpha = rng.gen_range(-PI..PI);
        let anc = Register::Qutrit.state(&qutrit_phase_ancilla(alpha)).unwrap();
        let gate = GateMatrix::diagonal(&[c(1.0, 0.0), e(alpha), c(1.0, 0.0)]);
        let mut seen = Vec::new();
        for (tag, g) in tagged_gates(v, "theorem1", Register::Qutrit, &anc) {
            let want = if tag == "case_iii" { gate.adjoint() } else { gate.clone() };
            v.check(close(&g, &want), format!("theorem1 {tag} alpha {alpha:.3}"));
            seen.push(tag);
        }
        for t in ["case_i", "case_ii", "case_iii"] {
            v.check(seen.iter().any(|s| s == t), format!("{t} not reached at alpha {alpha:.3}"));
        }
    }
    let p = load("theorem1").unwrap();
    let anc = Register::Qutrit.state(&qutrit_phase_ancilla(0.7)).unwrap();
    let site = "measure_pair 3 [2] > fuse 3 [2] > fuse 3";
    let mut reported = 0;
    for k in 0..3 {
        let en = enumerate(&bounded(&p.script), &Register::Qutrit.basis_state(k).tensor(&anc).unwrap()).unwrap();
        for charge in [0u8, 4] {
            let z: Vec<_> = en.zero_branches.iter().filter(|z| z.charge == charge && z.at.ends_with(site)).collect();
            v.check(!z.is_empty(), format!("outcome {charge} at the case (iii) fusion not reported"));
            for z in z {
                v.check(z.probability == 0.0, format!("outcome {charge} has probability {:e}", z.probability));
                reported += 1;
            }
        }
    }
    v.note(format!("20 qubit phase pairs, 20 qutrit phases, {reported} zero-probability reports at case (iii)"));
}

fn no_leakage(v: &mut Verdict) {
    let mut count = 0;
    for p in shipped_scripts().unwrap() {
        if p.kind != ProtocolKind::Gate {
            continue;
        }
        let input = p.input.unwrap();
        let anc = p.default_ancilla().unwrap();
        let mut worst = 0.0f64;
        for b in branch_gates(&bounded(&p.script), input, p.output.unwrap_or(input), anc.as_ref()).unwrap() {
            worst = worst.max(b.leakage());
        }
        v.check(worst < TOL, format!("{} column probabilities differ by {worst:e}", p.name));
        count += 1;
    }
    let p = load("qubit_gate").unwrap();
    let broken = Register::Qubit.state(&[c(1.0, 0.0), Complex64::from_polar(2.0, 0.4)]).unwrap();
    let r = extract_gate(&p.script, Register::Qubit, Register::Qubit, Some(&broken), &Mode::ForceRecorded);
    v.check(matches!(r, Err(ProtocolError::Leakage(_))), format!("unequal ancilla gave {r:?}"));
    v.note(format!("{count} gate scripts, every branch path; unequal-modulus ancilla rejected"));
}

fn entangling(v: &mut Verdict) {
    let (e1, e2) = (eg1().unwrap().gate, eg2().unwrap().gate);
    v.check(close(&e1, &eg1_printed()), "EG1");
    v.check(close(&e2, &eg2_printed()), "EG2");
    v.check(close(&aux().mul(&e1), &aux_eg1_printed()), "AUX.EG1");
    v.check(close(&aux().mul(&e2), &aux_eg2_printed()), "AUX.EG2");
    let (ok1, f1) = reaches_cnot_swap(&e1, EgCase::First).unwrap();
    let (ok2, f2) = reaches_cnot_swap(&e2, EgCase::Second).unwrap();
    v.check(ok1, format!("CNOT.SWAP via EG1, fidelity {f1}"));
    v.check(ok2, format!("CNOT.SWAP via EG2, fidelity {f2}"));
    let cnot = cnot_swap_from(&e1, EgCase::First).unwrap().mul(&swap().unwrap());
    v.check(close(&cnot, &cnot_printed()), "CNOT");
    for (name, g, want) in [("EG1", &e1, true), ("EG2", &e2, true), ("CNOT", &cnot, true), ("SWAP", &swap_gate(), false)] {
        v.check(is_entangling(g).unwrap() == want, format!("is_entangling({name}) != {want}"));
    }
    let order = permutation_gate_set().unwrap().group.len();
    v.check(order == 24, format!("group order {order}"));
    v.note(format!("CNOT.SWAP fidelities {f1:.12} / {f2:.12}, group order {order}"));
}

/// Probability of each terminal, with the truncated mass counted as a loop-bound abort.
fn terminal_distribution(script: &ProtocolScript, input: &AnyonState) -> BTreeMap<String, f64> {
    let en = enumerate(script, input).unwrap();
    let mut out = BTreeMap::new();
    for b in &en.branches {
        *out.entry(b.terminal.describe()).or_insert(0.0) += b.probability;
    }
    if en.truncated_paths > 0 {
        *out.entry(Terminal::Abort(protocol_vm::LOOP_BOUND_REASON.into()).describe()).or_insert(0.0) += en.truncated_mass;
    }
    out
}

fn conservation(v: &mut Verdict) {
    let mut worst = 0.0f64;
    let mut runs = 0;
    for p in shipped_scripts().unwrap() {
        for input in p.basis_inputs().unwrap() {
            let en = enumerate(&bounded(&p.script), &input).unwrap();
            let d = (en.total_probability() + en.truncated_mass - 1.0).abs();
            worst = worst.max(d);
            v.check(d < TOL, format!("{}: mass off by {d:e}", p.name));
            runs += 1;
        }
    }
    const SAMPLES: u64 = 10_000;
    let mut categories = 0;
    for (name, k) in [("qubit_gate", 1), ("theorem1", 2), ("eg_protocol", 0), ("fuse_qubit_ancillas_alt", 0)] {
        let p = load(name).unwrap();
        let script = bounded(&p.script);
        let input = if p.ancilla.is_some() {
            p.basis_input(k, p.default_ancilla().unwrap().as_ref()).unwrap()
        } else if name == "fuse_qubit_ancillas_alt" {
            let q = |t: f64| Register::Qubit.state(&qubit_phase_ancilla(t)).unwrap();
            q(0.4).tensor(&q(-1.3)).unwrap()
        } else {
            p.basis_input(k, None).unwrap()
        };
        let exact = terminal_distribution(&script, &input);
        let mut seen: BTreeMap<String, u64> = BTreeMap::new();
        for seed in 0..SAMPLES {
            let t = run(&script, &input, &Mode::Sample(seed)).unwrap();
            *seen.entry(t.terminal.describe()).or_insert(0) += 1;
        }
        for key in exact.keys().chain(seen.keys()).collect::<std::collections::BTreeSet<_>>() {
            let p = exact.get(key).copied().unwrap_or(0.0);
            let f = seen.get(key).copied().unwrap_or(0) as f64 / SAMPLES as f64;
            let sigma = (p * (1.0 - p) / SAMPLES as f64).sqrt();
            v.check((f - p).abs() <= 3.0 * sigma, format!("{name} {key}: frequency {f} vs probability {p:.5} (sigma {sigma:.2e})"));
            categories += 1;
        }
    }
    v.note(format!("{runs} enumerations, worst mass defect {worst:.1e}; {categories} sampled outcome classes within 3 sigma"));
}

fn number_theory(v: &mut Verdict) {
    let started = Instant::now();
    let tp = theta_prime_argument();
    let l = lemma3_check(tp.a(), tp.b(), 3).unwrap();
    let lhs = tp.a() * tp.a();
    let rhs = tp.b() * tp.b() * num_rational::BigRational::from_integer(3.into()) + num_rational::BigRational::from_integer(1.into());
    v.check(
        l.star && l.star_star,
        format!("qubit phase argument {tp}: (*) {} since a^2 = {lhs} and 1 + p b^2 = {rhs}; (**) {}", l.star, l.star_star),
    );
    let gp = gamma_prime_argument();
    let l = lemma3_check(gp.a(), gp.b(), 3).unwrap();
    v.check(!l.star, "qutrit precursor argument should fail (*)");
    for x in [&tp, &gp] {
        let o = olmsted_empirical(x, 200).unwrap();
        v.check(o.no_hits(), format!("{x}: hits {:?} poles {:?}", o.hits, o.poles));
    }
    let list = calcut_values();
    for x in &list {
        v.check(!calcut_quadratic_check(x).unwrap(), format!("{x} accepted"));
    }
    v.check(calcut_quadratic_check(&QuadExt::from_ratios(-14, 13, 3, 13, 3).unwrap()).unwrap(), "(-14+3sqrt3)/13 rejected");
    for (name, t) in [("theta", theta(&tp)), ("gamma", gamma())] {
        let g: Vec<f64> = [100, 1000, 10_000].iter().map(|&n| density_sweep(t, n).max_gap).collect();
        v.check(g[0] > g[1] && g[1] > g[2], format!("{name} gaps not decreasing: {g:?}"));
        v.check(g[2] < 0.01, format!("{name} gap at 10^4 is {}", g[2]));
        v.note(format!("{name} max gaps {:.4} {:.4} {:.5}", g[0], g[1], g[2]));
    }
    v.note(format!("{} listed quadratic values excluded", list.len()));
    v.within(started, Duration::from_secs(5));
}

fn main() {
    let criteria: [(&str, fn(&mut Verdict)); 9] = [
        ("symbol fixtures", symbol_fixtures),
        ("pentagon and hexagon", axioms),
        ("braid fixtures", braids),
        ("ancilla pipeline", ancillas),
        ("gate extraction", gate_extraction),
        ("no leakage", no_leakage),
        ("entangling suite", entangling),
        ("probability conservation", conservation),
        ("number theory", number_theory),
    ];
    let mut failed = Vec::new();
    for (i, (title, f)) in criteria.iter().enumerate() {
        let n = i + 1;
        let started = Instant::now();
        let mut v = Verdict::new();
        if let Err(p) = catch_unwind(AssertUnwindSafe(|| f(&mut v))) {
            let msg = p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()));
            v.check(false, format!("panicked: {}", msg.unwrap_or_default()));
        }
        let status = if v.passed { "PASS" } else { "FAIL" };
        println!("criterion {n} ({title}): {status} [{:.2} s] {}", started.elapsed().as_secs_f64(), v.notes.join("; "));
        if !v.passed {
            failed.push(n);
        }
    }
    if failed.is_empty() {
        println!("acceptance: all 9 criteria pass");
    } else {
        println!("acceptance: criteria {failed:?} fail");
        std::process::exit(1);
    }
}
