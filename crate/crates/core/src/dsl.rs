//! The line-oriented fixture format.
//!
//! ```text
//! # comment
//! system d4
//!   gens s1 s2 s3 t1
//!   edge s1 t1 3
//! partition fold of d4
//!   block s = s1 s2 s3
//!   block t = t1
//! expect fold coxeter true lusztig true quotient g2
//! ```
//!
//! Absent edges have label 2; `inf` is the infinite label. References may
//! point forward; they are resolved once the whole file is read.

use std::collections::HashMap;
use std::fmt::{self, Write as _};

use thiserror::Error;

use crate::coxeter::{CoxeterError, CoxeterMatrix, Label};
use crate::partition::{PartitionError, PartitionMap};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("{0}")]
    Syntax(String),
    #[error("label {0} is below 2")]
    LabelTooSmall(u64),
    #[error("duplicate {0} {1:?}")]
    Duplicate(&'static str, String),
    #[error("unknown {0} {1:?}")]
    Dangling(&'static str, String),
    #[error("partition {partition:?} is not surjective: block {target:?} is empty")]
    NotSurjective { partition: String, target: String },
    #[error("partition {partition:?} does not assign generator {generator:?}")]
    Unassigned { partition: String, generator: String },
    #[error(transparent)]
    Matrix(#[from] CoxeterError),
    #[error(transparent)]
    Partition(#[from] PartitionError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}, column {column}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SystemDecl {
    pub name: String,
    pub matrix: CoxeterMatrix,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartitionDecl {
    pub name: String,
    pub system: String,
    pub map: PartitionMap,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Expectation {
    pub partition: String,
    pub coxeter: bool,
    pub lusztig: Option<bool>,
    pub quotient: Option<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Document {
    pub systems: Vec<SystemDecl>,
    pub partitions: Vec<PartitionDecl>,
    pub expectations: Vec<Expectation>,
}

impl Document {
    pub fn system(&self, name: &str) -> Option<&SystemDecl> {
        self.systems.iter().find(|s| s.name == name)
    }

    pub fn partition(&self, name: &str) -> Option<&PartitionDecl> {
        self.partitions.iter().find(|p| p.name == name)
    }

    pub fn expectation(&self, partition: &str) -> Option<&Expectation> {
        self.expectations.iter().find(|e| e.partition == partition)
    }
}

/// A token with its 1-based column.
#[derive(Debug, Clone, Copy)]
struct Tok<'a> {
    text: &'a str,
    col: usize,
}

fn tokenize(line: &str) -> Vec<Tok<'_>> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, c) in line.char_indices() {
        if c.is_whitespace() {
            if let Some(s) = start.take() {
                out.push(Tok { text: &line[s..i], col: line[..s].chars().count() + 1 });
            }
        } else if start.is_none() {
            start = Some(i);
        }
    }
    if let Some(s) = start {
        out.push(Tok { text: &line[s..], col: line[..s].chars().count() + 1 });
    }
    out
}

fn is_ident(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_alphabetic() || c == '_')
        && chars.all(|c| c.is_alphanumeric() || c == '_' || c == '\'')
}

struct RawSystem {
    name: String,
    line: usize,
    gens: Vec<(String, usize, usize)>,
    edges: Vec<(usize, String, String, Label, usize)>,
}

struct RawPartition {
    name: String,
    system: String,
    line: usize,
    system_col: usize,
    blocks: Vec<(String, Vec<(String, usize)>, usize, usize)>,
}

struct RawExpect {
    exp: Expectation,
    line: usize,
    col: usize,
    quotient_col: usize,
}

enum Open {
    None,
    System(usize),
    Partition(usize),
}

pub fn parse(text: &str) -> Result<Document, ParseError> {
    let err = |line: usize, column: usize, kind: ParseErrorKind| ParseError { line, column, kind };
    let syntax = |line: usize, column: usize, msg: String| err(line, column, ParseErrorKind::Syntax(msg));

    let mut systems: Vec<RawSystem> = Vec::new();
    let mut partitions: Vec<RawPartition> = Vec::new();
    let mut expects: Vec<RawExpect> = Vec::new();
    let mut open = Open::None;

    for (idx, raw) in text.lines().enumerate() {
        let ln = idx + 1;
        let content = raw.split('#').next().unwrap_or("");
        let toks = tokenize(content);
        let Some(head) = toks.first() else { continue };
        let indented = head.col > 1;
        let ident = |t: &Tok| -> Result<String, ParseError> {
            if is_ident(t.text) {
                Ok(t.text.to_string())
            } else {
                Err(syntax(ln, t.col, format!("expected an identifier, found {:?}", t.text)))
            }
        };
        let arity = |n: usize, usage: &str| -> Result<(), ParseError> {
            if toks.len() == n {
                Ok(())
            } else {
                let col = toks.get(n).map(|t| t.col).unwrap_or(content.trim_end().chars().count() + 1);
                Err(syntax(ln, col, format!("expected `{usage}`")))
            }
        };
        if !indented {
            open = Open::None;
            match head.text {
                "system" => {
                    arity(2, "system <name>")?;
                    let name = ident(&toks[1])?;
                    if systems.iter().any(|s| s.name == name) {
                        return Err(err(ln, toks[1].col, ParseErrorKind::Duplicate("system", name)));
                    }
                    systems.push(RawSystem { name, line: ln, gens: Vec::new(), edges: Vec::new() });
                    open = Open::System(systems.len() - 1);
                }
                "partition" => {
                    arity(4, "partition <name> of <system>")?;
                    let name = ident(&toks[1])?;
                    if toks[2].text != "of" {
                        return Err(syntax(ln, toks[2].col, "expected `of`".into()));
                    }
                    let system = ident(&toks[3])?;
                    if partitions.iter().any(|p| p.name == name) {
                        return Err(err(ln, toks[1].col, ParseErrorKind::Duplicate("partition", name)));
                    }
                    partitions.push(RawPartition {
                        name,
                        system,
                        line: ln,
                        system_col: toks[3].col,
                        blocks: Vec::new(),
                    });
                    open = Open::Partition(partitions.len() - 1);
                }
                "expect" => {
                    let usage = "expect <partition> coxeter <true|false> [lusztig <true|false>] [quotient <system>]";
                    if toks.len() < 4 {
                        return Err(syntax(ln, head.col, format!("expected `{usage}`")));
                    }
                    let partition = ident(&toks[1])?;
                    let mut exp = Expectation { partition, coxeter: false, lusztig: None, quotient: None };
                    let mut seen_coxeter = false;
                    let mut quotient_col = 0;
                    let mut i = 2;
                    while i < toks.len() {
                        let key = toks[i];
                        let Some(value) = toks.get(i + 1) else {
                            return Err(syntax(ln, key.col, format!("missing value after `{}`", key.text)));
                        };
                        let boolean = || match value.text {
                            "true" => Ok(true),
                            "false" => Ok(false),
                            other => Err(syntax(ln, value.col, format!("expected true or false, found {other:?}"))),
                        };
                        match key.text {
                            "coxeter" if !seen_coxeter && i == 2 => {
                                exp.coxeter = boolean()?;
                                seen_coxeter = true;
                            }
                            "lusztig" if exp.lusztig.is_none() && exp.quotient.is_none() => {
                                exp.lusztig = Some(boolean()?)
                            }
                            "quotient" if exp.quotient.is_none() => {
                                exp.quotient = Some(ident(value)?);
                                quotient_col = value.col;
                            }
                            _ => return Err(syntax(ln, key.col, format!("unexpected `{}`; {usage}", key.text))),
                        }
                        i += 2;
                    }
                    if !seen_coxeter {
                        return Err(syntax(ln, toks[2].col, "expected `coxeter`".into()));
                    }
                    if expects.iter().any(|e| e.exp.partition == exp.partition) {
                        return Err(err(ln, toks[1].col, ParseErrorKind::Duplicate("expectation", exp.partition)));
                    }
                    expects.push(RawExpect { exp, line: ln, col: toks[1].col, quotient_col });
                }
                other => return Err(syntax(ln, head.col, format!("unknown directive {other:?}"))),
            }
            continue;
        }
        match (&open, head.text) {
            (Open::System(i), "gens") => {
                if toks.len() < 2 {
                    return Err(syntax(ln, head.col, "expected `gens <id>...`".into()));
                }
                let sys = &mut systems[*i];
                for t in &toks[1..] {
                    let g = ident(t)?;
                    if sys.gens.iter().any(|(n, _, _)| *n == g) {
                        return Err(err(ln, t.col, ParseErrorKind::Duplicate("generator", g)));
                    }
                    sys.gens.push((g, ln, t.col));
                }
            }
            (Open::System(i), "edge") => {
                arity(4, "edge <id> <id> <label|inf>")?;
                let a = ident(&toks[1])?;
                let b = ident(&toks[2])?;
                if a == b {
                    return Err(syntax(ln, toks[2].col, format!("edge from {a:?} to itself")));
                }
                let label = match toks[3].text {
                    "inf" | "∞" => Label::Infinite,
                    t => match t.parse::<u64>() {
                        Ok(m) if m < 2 => return Err(err(ln, toks[3].col, ParseErrorKind::LabelTooSmall(m))),
                        Ok(m) if m <= u32::MAX as u64 => Label::Finite(m as u32),
                        _ => return Err(syntax(ln, toks[3].col, format!("bad label {t:?}"))),
                    },
                };
                let sys = &mut systems[*i];
                if sys.edges.iter().any(|(_, x, y, _, _)| (*x == a && *y == b) || (*x == b && *y == a)) {
                    return Err(err(ln, toks[1].col, ParseErrorKind::Duplicate("edge", format!("{a} {b}"))));
                }
                sys.edges.push((toks[1].col, a, b, label, ln));
            }
            (Open::Partition(i), "block") => {
                if toks.len() < 3 || toks[2].text != "=" {
                    return Err(syntax(ln, head.col, "expected `block <letter> = <id>...`".into()));
                }
                let target = ident(&toks[1])?;
                let part = &mut partitions[*i];
                if part.blocks.iter().any(|(t, ..)| *t == target) {
                    return Err(err(ln, toks[1].col, ParseErrorKind::Duplicate("block", target)));
                }
                let members = toks[3..].iter().map(|t| Ok((ident(t)?, t.col))).collect::<Result<Vec<_>, _>>()?;
                part.blocks.push((target, members, ln, toks[1].col));
            }
            (Open::None, _) => {
                return Err(syntax(ln, head.col, "indented line outside a system or partition".into()))
            }
            (_, other) => return Err(syntax(ln, head.col, format!("unexpected {other:?} here"))),
        }
    }

    // resolve
    let mut doc = Document::default();
    for sys in &systems {
        if sys.gens.is_empty() {
            return Err(syntax(sys.line, 1, format!("system {:?} has no generators", sys.name)));
        }
        let names: Vec<String> = sys.gens.iter().map(|(n, _, _)| n.clone()).collect();
        let index: HashMap<&str, usize> = names.iter().enumerate().map(|(i, n)| (n.as_str(), i)).collect();
        let mut edges = Vec::new();
        for (col, a, b, label, ln) in &sys.edges {
            let ia = *index
                .get(a.as_str())
                .ok_or_else(|| err(*ln, *col, ParseErrorKind::Dangling("generator", a.clone())))?;
            let ib = *index
                .get(b.as_str())
                .ok_or_else(|| err(*ln, *col, ParseErrorKind::Dangling("generator", b.clone())))?;
            edges.push((ia, ib, *label));
        }
        let matrix = CoxeterMatrix::from_edges(&names, &edges).map_err(|e| err(sys.line, 1, e.into()))?;
        doc.systems.push(SystemDecl { name: sys.name.clone(), matrix });
    }
    for part in &partitions {
        let sys = doc
            .system(&part.system)
            .ok_or_else(|| err(part.line, part.system_col, ParseErrorKind::Dangling("system", part.system.clone())))?;
        let matrix = &sys.matrix;
        let mut blocks = Vec::new();
        for (target, members, ln, col) in &part.blocks {
            if members.is_empty() {
                return Err(err(
                    *ln,
                    *col,
                    ParseErrorKind::NotSurjective { partition: part.name.clone(), target: target.clone() },
                ));
            }
            let mut idx = Vec::new();
            for (m, mcol) in members {
                let g = matrix
                    .index_of(m)
                    .ok_or_else(|| err(*ln, *mcol, ParseErrorKind::Dangling("generator", m.clone())))?;
                if blocks.iter().any(|(_, b): &(String, Vec<usize>)| b.contains(&g)) || idx.contains(&g) {
                    return Err(err(*ln, *mcol, PartitionError::AssignedTwice(m.clone()).into()));
                }
                idx.push(g);
            }
            blocks.push((target.clone(), idx));
        }
        if blocks.is_empty() {
            return Err(syntax(part.line, 1, format!("partition {:?} has no blocks", part.name)));
        }
        let map = PartitionMap::from_blocks(matrix.clone(), &blocks).map_err(|e| {
            let kind = match e {
                PartitionError::Unassigned(g) => {
                    ParseErrorKind::Unassigned { partition: part.name.clone(), generator: g }
                }
                other => other.into(),
            };
            err(part.line, 1, kind)
        })?;
        doc.partitions.push(PartitionDecl { name: part.name.clone(), system: part.system.clone(), map });
    }
    for e in expects {
        if doc.partition(&e.exp.partition).is_none() {
            return Err(err(e.line, e.col, ParseErrorKind::Dangling("partition", e.exp.partition)));
        }
        if let Some(q) = &e.exp.quotient {
            if doc.system(q).is_none() {
                return Err(err(e.line, e.quotient_col, ParseErrorKind::Dangling("system", q.clone())));
            }
        }
        doc.expectations.push(e.exp);
    }
    Ok(doc)
}

/// Canonical text: systems, then partitions, then expectations.
pub fn render(doc: &Document) -> String {
    let mut out = String::new();
    for sys in &doc.systems {
        let m = &sys.matrix;
        let _ = writeln!(out, "system {}", sys.name);
        let _ = writeln!(out, "  gens {}", m.names().join(" "));
        for i in 0..m.rank() {
            for j in i + 1..m.rank() {
                if m.get(i, j) != Label::Finite(2) {
                    let _ = writeln!(out, "  edge {} {} {}", m.name(i), m.name(j), m.get(i, j));
                }
            }
        }
        out.push('\n');
    }
    for part in &doc.partitions {
        let _ = writeln!(out, "partition {} of {}", part.name, part.system);
        let src = part.map.source();
        for (t, name) in part.map.target_names().iter().enumerate() {
            let members: Vec<&str> = part.map.block(t).iter().map(|g| src.name(g)).collect();
            let _ = writeln!(out, "  block {name} = {}", members.join(" "));
        }
        out.push('\n');
    }
    for e in &doc.expectations {
        let _ = write!(out, "expect {} coxeter {}", e.partition, e.coxeter);
        if let Some(l) = e.lusztig {
            let _ = write!(out, " lusztig {l}");
        }
        if let Some(q) = &e.quotient {
            let _ = write!(out, " quotient {q}");
        }
        out.push('\n');
    }
    out
}

impl fmt::Display for Document {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render(self))
    }
}
