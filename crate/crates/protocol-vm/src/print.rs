use std::fmt::Write;

use crate::ast::{Arm, HeaderItem, Pattern, ProtocolScript, Step};

/// Canonical text form; [`crate::parse_script`] reads it back unchanged.
pub fn print_script(script: &ProtocolScript) -> String {
    let mut out = String::new();
    for item in &script.header {
        match item {
            HeaderItem::Comment(c) => writeln!(out, "#{c}"),
            HeaderItem::Name(n) => writeln!(out, "name {n}"),
            HeaderItem::Shape => {
                let leaves: Vec<String> = script.shape.leaves().iter().map(|l| l.to_string()).collect();
                writeln!(out, "shape {} total {}", leaves.join(" "), script.shape.total())
            }
            HeaderItem::LoopBound => writeln!(out, "loop_bound {}", script.loop_bound),
            HeaderItem::Meta(k, v) if v.is_empty() => writeln!(out, "meta {k}"),
            HeaderItem::Meta(k, v) => writeln!(out, "meta {k} {v}"),
        }
        .unwrap();
    }
    if !script.header.is_empty() && !script.steps.is_empty() {
        out.push('\n');
    }
    print_steps(&script.steps, 0, &mut out);
    out
}

fn is_simple(s: &Step) -> bool {
    !matches!(s, Step::Measure { .. } | Step::Comment(_))
}

fn pattern(p: &Pattern) -> String {
    match p {
        Pattern::Charge(c) => c.to_string(),
        Pattern::Any => "_".into(),
    }
}

fn print_steps(steps: &[Step], indent: usize, out: &mut String) {
    for s in steps {
        print_step(s, indent, out);
    }
}

fn print_step(step: &Step, indent: usize, out: &mut String) {
    let pad = " ".repeat(indent);
    match step {
        Step::Measure { arms, .. } => {
            writeln!(out, "{pad}{} {{", step.headline()).unwrap();
            for arm in arms {
                print_arm(arm, indent + 2, out);
            }
            writeln!(out, "{pad}}}").unwrap();
        }
        _ => writeln!(out, "{pad}{}", step.headline()).unwrap(),
    }
}

fn print_arm(arm: &Arm, indent: usize, out: &mut String) {
    let pad = " ".repeat(indent);
    for c in &arm.leading {
        writeln!(out, "{pad}#{c}").unwrap();
    }
    let pat = pattern(&arm.pattern);
    if arm.body.iter().all(is_simple) {
        let parts: Vec<String> = arm.body.iter().map(Step::headline).collect();
        writeln!(out, "{pad}{pat} => {}", parts.join("; ")).unwrap();
    } else {
        writeln!(out, "{pad}{pat} =>").unwrap();
        print_steps(&arm.body, indent + 2, out);
    }
}

/// Token stream of a script with `;` read as a line break, for round-trip comparisons.
pub fn normalize_whitespace(text: &str) -> String {
    text.replace(';', " ").split_whitespace().collect::<Vec<_>>().join(" ")
}
