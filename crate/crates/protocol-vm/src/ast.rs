use anyon_state::TreeShape;

/// Which outcomes an arm accepts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Pattern {
    Charge(u8),
    /// `_`: every admissible outcome not listed explicitly.
    Any,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Arm {
    pub pattern: Pattern,
    pub body: Vec<Step>,
    /// Comment lines written above the arm.
    pub leading: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MeasureKind {
    Pair(usize),
    Block(usize, usize),
    /// Measure the pair and merge it into one anyon.
    Fuse(usize),
}

impl MeasureKind {
    /// Inclusive leaf span being measured.
    pub fn span(self) -> (usize, usize) {
        match self {
            MeasureKind::Pair(i) | MeasureKind::Fuse(i) => (i, i + 1),
            MeasureKind::Block(i, j) => (i, j),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Step {
    Braid { pos: usize, sign: i8 },
    Measure { kind: MeasureKind, arms: Vec<Arm> },
    Unfuse { pos: usize, b: u8, c: u8 },
    Create { pos: usize, c: u8 },
    /// Removes a vacuum pair, or a single charge-0 anyon.
    Remove { pos: usize },
    Checkpoint(String),
    Retry(String),
    Continue,
    EmitGate(Option<String>),
    EmitAncilla(Option<String>),
    Abort(String),
    Comment(String),
}

impl Step {
    /// One-line description used in traces.
    pub fn headline(&self) -> String {
        match self {
            Step::Braid { pos, sign } => format!("braid {pos} {}", if *sign > 0 { '+' } else { '-' }),
            Step::Measure { kind, .. } => match kind {
                MeasureKind::Pair(i) => format!("measure_pair {i}"),
                MeasureKind::Block(i, j) => format!("measure_block {i}..{j}"),
                MeasureKind::Fuse(i) => format!("fuse {i}"),
            },
            Step::Unfuse { pos, b, c } => format!("unfuse {pos} {b} {c}"),
            Step::Create { pos, c } => format!("create {pos} {c}"),
            Step::Remove { pos } => format!("remove {pos}"),
            Step::Checkpoint(l) => format!("checkpoint {l}"),
            Step::Retry(l) => format!("retry {l}"),
            Step::Continue => "continue".into(),
            Step::EmitGate(t) => tagged("emit_gate", t),
            Step::EmitAncilla(t) => tagged("emit_ancilla", t),
            Step::Abort(r) => format!("abort {r:?}"),
            Step::Comment(c) => format!("#{c}"),
        }
    }
}

fn tagged(kw: &str, tag: &Option<String>) -> String {
    match tag {
        Some(t) => format!("{kw} {t}"),
        None => kw.to_string(),
    }
}

/// Lines before the first step.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum HeaderItem {
    Comment(String),
    Name(String),
    Shape,
    LoopBound,
    Meta(String, String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProtocolScript {
    pub name: String,
    pub shape: TreeShape,
    pub loop_bound: u32,
    pub meta: Vec<(String, String)>,
    pub steps: Vec<Step>,
    /// Header layout, kept so printing reproduces the source.
    pub header: Vec<HeaderItem>,
}

impl ProtocolScript {
    pub fn meta(&self, key: &str) -> Option<&str> {
        self.meta.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    pub fn meta_all<'a>(&'a self, key: &'a str) -> impl Iterator<Item = &'a str> + 'a {
        self.meta.iter().filter(move |(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    pub fn with_loop_bound(&self, loop_bound: u32) -> Self {
        let mut s = self.clone();
        s.loop_bound = loop_bound.max(1);
        if !s.header.contains(&HeaderItem::LoopBound) {
            s.header.push(HeaderItem::LoopBound);
        }
        s
    }
}

/// Location of a step: `[i0, a0, i1, a1, .., ik]` walks `steps[i0].arms[a0].body[i1]..`.
pub type Address = Vec<usize>;

impl ProtocolScript {
    fn list_at(&self, prefix: &[usize]) -> Option<&[Step]> {
        let mut list: &[Step] = &self.steps;
        for pair in prefix.chunks(2) {
            match list.get(pair[0])? {
                Step::Measure { arms, .. } => list = &arms.get(pair[1])?.body,
                _ => return None,
            }
        }
        Some(list)
    }

    pub fn step_at(&self, addr: &[usize]) -> Option<&Step> {
        let (last, prefix) = addr.split_last()?;
        self.list_at(prefix)?.get(*last)
    }

    /// The step executed after `addr` when no branch is taken; `None` at the end of the script.
    pub fn advance(&self, addr: &[usize]) -> Option<Address> {
        let mut a = addr.to_vec();
        loop {
            let last = *a.last()?;
            let len = self.list_at(&a[..a.len() - 1])?.len();
            if last + 1 < len {
                *a.last_mut().unwrap() += 1;
                return Some(a);
            }
            if a.len() == 1 {
                return None;
            }
            a.truncate(a.len() - 2);
        }
    }

    pub fn find_checkpoint(&self, label: &str) -> Option<Address> {
        fn walk(steps: &[Step], prefix: &mut Address, label: &str) -> Option<Address> {
            for (i, s) in steps.iter().enumerate() {
                prefix.push(i);
                match s {
                    Step::Checkpoint(l) if l == label => return Some(prefix.clone()),
                    Step::Measure { arms, .. } => {
                        for (a, arm) in arms.iter().enumerate() {
                            prefix.push(a);
                            if let Some(found) = walk(&arm.body, prefix, label) {
                                return Some(found);
                            }
                            prefix.pop();
                        }
                    }
                    _ => {}
                }
                prefix.pop();
            }
            None
        }
        walk(&self.steps, &mut Vec::new(), label)
    }

    /// Every step in source order, with its address.
    pub fn all_steps(&self) -> Vec<(Address, &Step)> {
        fn walk<'a>(steps: &'a [Step], prefix: &mut Address, out: &mut Vec<(Address, &'a Step)>) {
            for (i, s) in steps.iter().enumerate() {
                prefix.push(i);
                out.push((prefix.clone(), s));
                if let Step::Measure { arms, .. } = s {
                    for (a, arm) in arms.iter().enumerate() {
                        prefix.push(a);
                        walk(&arm.body, prefix, out);
                        prefix.pop();
                    }
                }
                prefix.pop();
            }
        }
        let mut out = Vec::new();
        walk(&self.steps, &mut Vec::new(), &mut out);
        out
    }

    /// Human-readable path to a step, e.g. `measure_pair 4 [2] > braid 4 +`.
    pub fn describe(&self, addr: &[usize]) -> String {
        let mut parts = Vec::new();
        let mut k = 0;
        while k < addr.len() {
            let Some(step) = self.step_at(&addr[..=k]) else { break };
            let mut part = step.headline();
            if let (Step::Measure { arms, .. }, Some(&a)) = (step, addr.get(k + 1)) {
                if let Some(arm) = arms.get(a) {
                    match arm.pattern {
                        Pattern::Charge(c) => part.push_str(&format!(" [{c}]")),
                        Pattern::Any => part.push_str(" [_]"),
                    }
                }
            }
            parts.push(part);
            k += 2;
        }
        parts.join(" > ")
    }
}
