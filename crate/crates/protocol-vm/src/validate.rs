//! Static checks by symbolic execution over tree shapes.
//!
//! Only shapes are tracked, so the checks see every branch a script could take
//! regardless of amplitudes. Outcomes come from [`TreeShape::block_outcomes`].

use std::collections::{BTreeMap, BTreeSet, HashSet};

use anyon_state::TreeShape;

use crate::ast::{Address, MeasureKind, Pattern, ProtocolScript, Step};
use crate::VmError;

/// Shape after applying a shape-changing step; measurement arms are handled by the caller.
pub(crate) fn shape_after(shape: &TreeShape, step: &Step) -> Result<TreeShape, String> {
    let n = shape.len();
    let lv = shape.leaves();
    let in_range = |p: usize, w: usize| p >= 1 && p + w - 1 <= n;
    let rebuilt = |leaves: Vec<u8>| TreeShape::new(leaves, shape.total()).map_err(|e| e.to_string());
    match step {
        Step::Braid { pos, .. } => {
            if !in_range(*pos, 2) {
                return Err(format!("braid position {pos} out of range for {n} anyons"));
            }
            let mut l = lv.to_vec();
            l.swap(pos - 1, *pos);
            rebuilt(l)
        }
        Step::Unfuse { pos, b, c } => {
            if !in_range(*pos, 1) {
                return Err(format!("unfuse position {pos} out of range for {n} anyons"));
            }
            if !recoupling_admissible(*b, *c, lv[pos - 1]) {
                return Err(format!("cannot split {} into {b} and {c}", lv[pos - 1]));
            }
            let mut l = lv.to_vec();
            l.splice(pos - 1..*pos, [*b, *c]);
            rebuilt(l)
        }
        Step::Create { pos, c } => {
            if *pos == 0 || *pos > n + 1 {
                return Err(format!("create position {pos} out of range for {n} anyons"));
            }
            let mut l = lv.to_vec();
            l.splice(pos - 1..pos - 1, [*c, *c]);
            rebuilt(l)
        }
        Step::Remove { pos } => {
            if in_range(*pos, 1) && lv[pos - 1] == 0 && n >= 2 {
                let mut l = lv.to_vec();
                l.remove(pos - 1);
                rebuilt(l)
            } else if in_range(*pos, 2) && lv[pos - 1] == lv[*pos] && n >= 3 {
                let mut l = lv.to_vec();
                l.drain(pos - 1..pos + 1);
                rebuilt(l)
            } else {
                Err(format!("remove {pos} needs a charge-0 anyon or an equal-charge pair in {shape}"))
            }
        }
        _ => Ok(shape.clone()),
    }
}

fn recoupling_admissible(a: u8, b: u8, c: u8) -> bool {
    a <= b + c && b <= a + c && c <= a + b && a + b + c <= 8 && (a + b + c) % 2 == 0
}

/// Outcomes a measurement can produce on `shape`, or a range error.
pub(crate) fn measure_outcomes(shape: &TreeShape, kind: MeasureKind) -> Result<Vec<u8>, String> {
    let (i, j) = kind.span();
    let n = shape.len();
    if i == 0 || j <= i || j > n {
        return Err(format!("{kind:?} out of range for {n} anyons"));
    }
    Ok(shape.block_outcomes(i, j))
}

/// Leaves after fusing the pair at `i` into charge `c`.
pub(crate) fn fused_shape(shape: &TreeShape, i: usize, c: u8) -> Result<TreeShape, String> {
    let mut l = shape.leaves().to_vec();
    l.splice(i - 1..i + 1, [c]);
    TreeShape::new(l, shape.total()).map_err(|e| e.to_string())
}

pub fn validate(script: &ProtocolScript) -> Result<(), VmError> {
    let fail = |addr: &[usize], msg: String| VmError::Static { at: script.describe(addr), msg };

    let mut labels = BTreeSet::new();
    for (addr, step) in script.all_steps() {
        match step {
            Step::Checkpoint(l) if !labels.insert(l.clone()) => {
                return Err(fail(&addr, format!("duplicate checkpoint {l}")));
            }
            Step::Retry(l) if script.find_checkpoint(l).is_none() => {
                return Err(fail(&addr, format!("retry target {l} does not exist")));
            }
            _ => {}
        }
    }

    let mut seen: HashSet<(Address, TreeShape)> = HashSet::new();
    let mut checkpoint_shapes: BTreeMap<String, BTreeSet<Vec<u8>>> = BTreeMap::new();
    let mut retry_shapes: Vec<(Address, String, TreeShape)> = Vec::new();
    let mut stack: Vec<(Address, TreeShape)> = Vec::new();
    if !script.steps.is_empty() {
        stack.push((vec![0], script.shape.clone()));
    }
    while let Some((addr, shape)) = stack.pop() {
        if !seen.insert((addr.clone(), shape.clone())) {
            continue;
        }
        let step = script.step_at(&addr).expect("addresses come from the script");
        let next = |shape: TreeShape, stack: &mut Vec<(Address, TreeShape)>| {
            if let Some(a) = script.advance(&addr) {
                stack.push((a, shape));
            }
        };
        match step {
            Step::Measure { kind, arms } => {
                let outcomes = measure_outcomes(&shape, *kind).map_err(|m| fail(&addr, m))?;
                let mut listed = BTreeSet::new();
                let mut wildcard = false;
                for arm in arms {
                    match arm.pattern {
                        Pattern::Charge(c) => {
                            if !outcomes.contains(&c) {
                                return Err(fail(
                                    &addr,
                                    format!("outcome {c} is impossible here (possible: {outcomes:?}) on {shape}"),
                                ));
                            }
                            listed.insert(c);
                        }
                        Pattern::Any => wildcard = true,
                    }
                }
                if !wildcard {
                    if let Some(m) = outcomes.iter().find(|c| !listed.contains(c)) {
                        return Err(fail(&addr, format!("no branch for outcome {m} on {shape}")));
                    }
                }
                for (a, arm) in arms.iter().enumerate() {
                    let charges: Vec<u8> = match arm.pattern {
                        Pattern::Charge(c) => vec![c],
                        Pattern::Any => outcomes.iter().copied().filter(|c| !listed.contains(c)).collect(),
                    };
                    let mut body = addr.clone();
                    body.extend([a, 0]);
                    for c in charges {
                        let s = match kind {
                            MeasureKind::Fuse(i) => fused_shape(&shape, *i, c).map_err(|m| fail(&addr, m))?,
                            _ => shape.clone(),
                        };
                        stack.push((body.clone(), s));
                    }
                }
            }
            Step::Checkpoint(l) => {
                checkpoint_shapes.entry(l.clone()).or_default().insert(shape_key(&shape));
                next(shape, &mut stack);
            }
            Step::Retry(l) => retry_shapes.push((addr.clone(), l.clone(), shape)),
            Step::EmitGate(_) | Step::EmitAncilla(_) | Step::Abort(_) => {}
            Step::Continue | Step::Comment(_) => next(shape, &mut stack),
            other => {
                let s = shape_after(&shape, other).map_err(|m| fail(&addr, m))?;
                next(s, &mut stack);
            }
        }
    }
    for (addr, label, shape) in retry_shapes {
        let at_checkpoint = checkpoint_shapes.get(&label).cloned().unwrap_or_default();
        if !at_checkpoint.contains(&shape_key(&shape)) {
            return Err(fail(&addr, format!("retry {label} from shape {shape}, which never reaches that checkpoint")));
        }
    }
    Ok(())
}

fn shape_key(s: &TreeShape) -> Vec<u8> {
    let mut k = s.leaves().to_vec();
    k.push(s.total());
    k
}
