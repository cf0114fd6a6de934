use anyon_state::TreeShape;

use crate::ast::{Arm, HeaderItem, MeasureKind, Pattern, ProtocolScript, Step};
use crate::VmError;

pub const DEFAULT_LOOP_BOUND: u32 = 10;

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Word(String),
    Int(u64),
    Plus,
    Minus,
    LBrace,
    RBrace,
    Arrow,
    Semi,
    Newline,
    DotDot,
    Under,
    Str(String),
    Comment(String),
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    line: usize,
    col: usize,
}

fn err(line: usize, col: usize, msg: impl Into<String>) -> VmError {
    VmError::Parse { line, col, msg: msg.into() }
}

fn lex(text: &str) -> Result<Vec<Token>, VmError> {
    let mut out = Vec::new();
    for (ln, line) in text.lines().enumerate() {
        let line_no = ln + 1;
        let chars: Vec<char> = line.chars().collect();
        let mut i = 0;
        while i < chars.len() {
            let c = chars[i];
            let col = i + 1;
            let push = |out: &mut Vec<Token>, tok| out.push(Token { tok, line: line_no, col });
            match c {
                ' ' | '\t' | '\r' => i += 1,
                '#' => {
                    push(&mut out, Tok::Comment(chars[i + 1..].iter().collect()));
                    i = chars.len();
                }
                '{' => {
                    push(&mut out, Tok::LBrace);
                    i += 1;
                }
                '}' => {
                    push(&mut out, Tok::RBrace);
                    i += 1;
                }
                ';' => {
                    push(&mut out, Tok::Semi);
                    i += 1;
                }
                '+' => {
                    push(&mut out, Tok::Plus);
                    i += 1;
                }
                '-' => {
                    push(&mut out, Tok::Minus);
                    i += 1;
                }
                '=' if chars.get(i + 1) == Some(&'>') => {
                    push(&mut out, Tok::Arrow);
                    i += 2;
                }
                '.' if chars.get(i + 1) == Some(&'.') => {
                    push(&mut out, Tok::DotDot);
                    i += 2;
                }
                '"' => {
                    let mut s = String::new();
                    let mut j = i + 1;
                    loop {
                        match chars.get(j) {
                            None => return Err(err(line_no, col, "unterminated string")),
                            Some('"') => break,
                            Some('\\') if matches!(chars.get(j + 1), Some('"') | Some('\\')) => {
                                s.push(chars[j + 1]);
                                j += 2;
                            }
                            Some(&ch) => {
                                s.push(ch);
                                j += 1;
                            }
                        }
                    }
                    push(&mut out, Tok::Str(s));
                    i = j + 1;
                }
                c if c.is_ascii_digit() => {
                    let mut j = i;
                    while j < chars.len() && chars[j].is_ascii_digit() {
                        j += 1;
                    }
                    let s: String = chars[i..j].iter().collect();
                    let v = s.parse().map_err(|_| err(line_no, col, "integer too large"))?;
                    push(&mut out, Tok::Int(v));
                    i = j;
                }
                '_' if !chars.get(i + 1).is_some_and(|x| x.is_ascii_alphanumeric() || *x == '_') => {
                    push(&mut out, Tok::Under);
                    i += 1;
                }
                c if c.is_ascii_alphabetic() || c == '_' => {
                    let mut j = i;
                    while j < chars.len() && (chars[j].is_ascii_alphanumeric() || chars[j] == '_') {
                        j += 1;
                    }
                    push(&mut out, Tok::Word(chars[i..j].iter().collect()));
                    i = j;
                }
                other => return Err(err(line_no, col, format!("unexpected character {other:?}"))),
            }
        }
        out.push(Token { tok: Tok::Newline, line: line_no, col: chars.len() + 1 });
    }
    Ok(out)
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.tok)
    }

    fn peek2(&self) -> Option<&Tok> {
        self.toks.get(self.pos + 1).map(|t| &t.tok)
    }

    fn here(&self) -> (usize, usize) {
        match self.toks.get(self.pos).or(self.toks.last()) {
            Some(t) => (t.line, t.col),
            None => (1, 1),
        }
    }

    fn fail<T>(&self, msg: impl Into<String>) -> Result<T, VmError> {
        let (l, c) = self.here();
        Err(err(l, c, msg))
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|t| t.tok.clone());
        self.pos += 1;
        t
    }

    fn skip_separators(&mut self) {
        while matches!(self.peek(), Some(Tok::Newline) | Some(Tok::Semi)) {
            self.pos += 1;
        }
    }

    fn int(&mut self, what: &str) -> Result<u64, VmError> {
        match self.peek() {
            Some(Tok::Int(v)) => {
                let v = *v;
                self.pos += 1;
                Ok(v)
            }
            _ => self.fail(format!("expected {what}")),
        }
    }

    fn position(&mut self) -> Result<usize, VmError> {
        let v = self.int("position")?;
        if v == 0 {
            self.pos -= 1;
            return self.fail("positions start at 1");
        }
        Ok(v as usize)
    }

    fn charge(&mut self) -> Result<u8, VmError> {
        let v = self.int("charge")?;
        if v > 4 {
            self.pos -= 1;
            return self.fail(format!("charge {v} outside 0..=4"));
        }
        Ok(v as u8)
    }

    fn word(&mut self, what: &str) -> Result<String, VmError> {
        match self.peek() {
            Some(Tok::Word(w)) => {
                let w = w.clone();
                self.pos += 1;
                Ok(w)
            }
            _ => self.fail(format!("expected {what}")),
        }
    }

    fn expect(&mut self, t: Tok, what: &str) -> Result<(), VmError> {
        if self.peek() == Some(&t) {
            self.pos += 1;
            Ok(())
        } else {
            self.fail(format!("expected {what}"))
        }
    }

    /// True at an arm header `<c> =>` or `_ =>`.
    fn at_arm(&self) -> bool {
        matches!(self.peek(), Some(Tok::Int(_)) | Some(Tok::Under)) && self.peek2() == Some(&Tok::Arrow)
    }

    /// Whether the comment block starting here sits directly above the next arm.
    fn comments_lead_arm(&self) -> bool {
        let mut k = self.pos;
        while matches!(self.toks.get(k).map(|t| &t.tok), Some(Tok::Comment(_)) | Some(Tok::Newline) | Some(Tok::Semi)) {
            k += 1;
        }
        let tok = |k: usize| self.toks.get(k).map(|t| &t.tok);
        matches!(tok(k), Some(Tok::Int(_)) | Some(Tok::Under)) && tok(k + 1) == Some(&Tok::Arrow)
    }

    fn end_of_step(&mut self) -> Result<(), VmError> {
        match self.peek() {
            None | Some(Tok::Newline) | Some(Tok::Semi) | Some(Tok::RBrace) | Some(Tok::Comment(_)) => Ok(()),
            _ => self.fail("expected end of step"),
        }
    }

    fn optional_tag(&mut self) -> Option<String> {
        if let Some(Tok::Word(w)) = self.peek() {
            let w = w.clone();
            self.pos += 1;
            Some(w)
        } else {
            None
        }
    }

    fn steps(&mut self, in_arm: bool) -> Result<Vec<Step>, VmError> {
        let mut out = Vec::new();
        loop {
            self.skip_separators();
            match self.peek() {
                None | Some(Tok::RBrace) => break,
                _ if in_arm && self.at_arm() => break,
                Some(Tok::Comment(_)) if in_arm && self.comments_lead_arm() => break,
                _ => {}
            }
            out.push(self.step()?);
        }
        Ok(out)
    }

    fn step(&mut self) -> Result<Step, VmError> {
        if let Some(Tok::Comment(c)) = self.peek() {
            let c = c.clone();
            self.pos += 1;
            return Ok(Step::Comment(c));
        }
        let kw = self.word("a step")?;
        let step = match kw.as_str() {
            "braid" => {
                let pos = self.position()?;
                let sign = match self.next() {
                    Some(Tok::Plus) => 1,
                    Some(Tok::Minus) => -1,
                    _ => {
                        self.pos -= 1;
                        return self.fail("expected + or -");
                    }
                };
                Step::Braid { pos, sign }
            }
            "measure_pair" => {
                let i = self.position()?;
                Step::Measure { kind: MeasureKind::Pair(i), arms: self.arms()? }
            }
            "fuse" => {
                let i = self.position()?;
                Step::Measure { kind: MeasureKind::Fuse(i), arms: self.arms()? }
            }
            "measure_block" => {
                let i = self.position()?;
                self.expect(Tok::DotDot, "..")?;
                let j = self.position()?;
                if j < i {
                    return self.fail("empty block");
                }
                Step::Measure { kind: MeasureKind::Block(i, j), arms: self.arms()? }
            }
            "unfuse" => {
                let pos = self.position()?;
                let b = self.charge()?;
                let c = self.charge()?;
                Step::Unfuse { pos, b, c }
            }
            "create" => {
                let pos = self.position()?;
                let c = self.charge()?;
                Step::Create { pos, c }
            }
            "remove" => Step::Remove { pos: self.position()? },
            "checkpoint" => Step::Checkpoint(self.word("label")?),
            "retry" => Step::Retry(self.word("label")?),
            "continue" => Step::Continue,
            "emit_gate" => Step::EmitGate(self.optional_tag()),
            "emit_ancilla" => Step::EmitAncilla(self.optional_tag()),
            "abort" => match self.next() {
                Some(Tok::Str(s)) => Step::Abort(s),
                _ => {
                    self.pos -= 1;
                    return self.fail("expected quoted abort reason");
                }
            },
            other => {
                self.pos -= 1;
                return self.fail(format!("unknown step {other:?}"));
            }
        };
        self.end_of_step()?;
        Ok(step)
    }

    fn arms(&mut self) -> Result<Vec<Arm>, VmError> {
        self.expect(Tok::LBrace, "{")?;
        let mut arms = Vec::new();
        let mut leading = Vec::new();
        loop {
            self.skip_separators();
            match self.peek() {
                Some(Tok::RBrace) => {
                    self.pos += 1;
                    break;
                }
                Some(Tok::Comment(c)) => {
                    leading.push(c.clone());
                    self.pos += 1;
                }
                _ if self.at_arm() => {
                    let pattern = match self.next() {
                        Some(Tok::Int(v)) if v <= 4 => Pattern::Charge(v as u8),
                        Some(Tok::Int(v)) => {
                            self.pos -= 1;
                            return self.fail(format!("charge {v} outside 0..=4"));
                        }
                        _ => Pattern::Any,
                    };
                    self.pos += 1;
                    let body = self.steps(true)?;
                    if body.iter().all(|s| matches!(s, Step::Comment(_))) {
                        return self.fail("empty branch");
                    }
                    if arms.iter().any(|a: &Arm| a.pattern == pattern) {
                        return self.fail("duplicate branch");
                    }
                    arms.push(Arm { pattern, body, leading: std::mem::take(&mut leading) });
                }
                None => return self.fail("unterminated branch table"),
                _ => return self.fail("expected `<charge> =>`, `_ =>` or `}`"),
            }
        }
        if arms.is_empty() {
            return self.fail("branch table without branches");
        }
        if !leading.is_empty() {
            let last = arms.last_mut().unwrap();
            last.body.extend(leading.into_iter().map(Step::Comment));
        }
        Ok(arms)
    }
}

/// Syntax only; see [`parse_script`] for the validated form.
pub fn parse_unchecked(text: &str) -> Result<ProtocolScript, VmError> {
    let mut p = Parser { toks: lex(text)?, pos: 0 };
    let mut header = Vec::new();
    let mut name = None;
    let mut shape = None;
    let mut loop_bound = DEFAULT_LOOP_BOUND;
    let mut meta = Vec::new();
    loop {
        p.skip_separators();
        match p.peek() {
            Some(Tok::Comment(c)) => {
                header.push(HeaderItem::Comment(c.clone()));
                p.pos += 1;
            }
            Some(Tok::Word(w)) if w == "name" => {
                p.pos += 1;
                let n = p.word("script name")?;
                header.push(HeaderItem::Name(n.clone()));
                name = Some(n);
                p.end_of_step()?;
            }
            Some(Tok::Word(w)) if w == "shape" => {
                p.pos += 1;
                let (line, col) = p.here();
                let mut leaves = Vec::new();
                while let Some(Tok::Int(_)) = p.peek() {
                    leaves.push(p.charge()?);
                }
                let kw = p.word("`total`")?;
                if kw != "total" {
                    p.pos -= 1;
                    return p.fail("expected `total`");
                }
                let total = p.charge()?;
                let s = TreeShape::new(leaves, total).map_err(|e| err(line, col, e.to_string()))?;
                shape = Some(s);
                header.push(HeaderItem::Shape);
                p.end_of_step()?;
            }
            Some(Tok::Word(w)) if w == "loop_bound" => {
                p.pos += 1;
                let v = p.int("loop bound")?;
                if v == 0 || v > u32::MAX as u64 {
                    p.pos -= 1;
                    return p.fail("loop_bound must be at least 1");
                }
                loop_bound = v as u32;
                header.push(HeaderItem::LoopBound);
                p.end_of_step()?;
            }
            Some(Tok::Word(w)) if w == "meta" => {
                p.pos += 1;
                let k = p.word("meta key")?;
                let mut parts = Vec::new();
                loop {
                    match p.peek() {
                        Some(Tok::Word(w)) => parts.push(w.clone()),
                        Some(Tok::Int(v)) => parts.push(v.to_string()),
                        _ => break,
                    }
                    p.pos += 1;
                }
                let v = parts.join(" ");
                header.push(HeaderItem::Meta(k.clone(), v.clone()));
                meta.push((k, v));
                p.end_of_step()?;
            }
            _ => break,
        }
    }
    let steps = p.steps(false)?;
    if p.peek().is_some() {
        return p.fail("unmatched }");
    }
    let shape = match shape {
        Some(s) => s,
        None => return Err(err(1, 1, "missing `shape` line")),
    };
    Ok(ProtocolScript {
        name: name.unwrap_or_else(|| "unnamed".into()),
        shape,
        loop_bound,
        meta,
        steps,
        header,
    })
}

/// Parses and statically validates a script.
pub fn parse_script(text: &str) -> Result<ProtocolScript, VmError> {
    let s = parse_unchecked(text)?;
    crate::validate::validate(&s)?;
    Ok(s)
}
