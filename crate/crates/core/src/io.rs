//! Line-based text formats for frames and models.
//!
//! ```text
//! # comment
//! frame chain2
//! points 2
//! edge 0 1
//! closure          # optional: reflexive-transitive closure on load
//! val p 1          # models only; `closure-upset` closes values upward
//! end
//! ```

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::formula::is_identifier;
use crate::frame::Frame;
use crate::pointset::{PointSet, MAX_POINTS};
use crate::semantics::{Model, Valuation};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NamedFrame {
    pub name: String,
    pub frame: Frame,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NamedModel {
    pub name: String,
    pub model: Model,
}

#[derive(Default)]
struct Block {
    name: Option<String>,
    points: Option<usize>,
    edges: Vec<(usize, usize)>,
    closure: bool,
    closure_upset: bool,
    vals: Vec<(usize, String, Vec<usize>)>,
    ended: bool,
}

fn read_block(text: &str, path: &str, allow_vals: bool) -> Result<Block> {
    let fail = |line: usize, message: String| Error::Format {
        path: path.to_string(),
        line,
        message,
    };
    let mut b = Block::default();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if b.ended {
            return Err(fail(line_no, "content after `end`".into()));
        }
        let words: Vec<&str> = line.split_whitespace().collect();
        let number = |w: &str| {
            w.parse::<usize>()
                .map_err(|_| fail(line_no, format!("expected a point index, found `{w}`")))
        };
        let in_range = |p: usize, n: usize| {
            if p < n {
                Ok(p)
            } else {
                Err(fail(line_no, format!("point {p} out of range for {n} points")))
            }
        };
        if b.name.is_none() {
            match words.as_slice() {
                ["frame", name] => {
                    b.name = Some(name.to_string());
                    continue;
                }
                _ => return Err(fail(line_no, "expected `frame <name>`".into())),
            }
        }
        if b.points.is_none() {
            match words.as_slice() {
                ["points", n] => {
                    let n = n.parse::<usize>().map_err(|_| fail(line_no, format!("bad point count `{n}`")))?;
                    if n == 0 || n > MAX_POINTS {
                        return Err(fail(line_no, format!("point count must be in 1..={MAX_POINTS}")));
                    }
                    b.points = Some(n);
                    continue;
                }
                _ => return Err(fail(line_no, "expected `points <n>`".into())),
            }
        }
        let n = b.points.unwrap();
        match words.as_slice() {
            ["edge", i, j] => {
                let (i, j) = (in_range(number(i)?, n)?, in_range(number(j)?, n)?);
                b.edges.push((i, j));
            }
            ["closure"] => b.closure = true,
            ["closure-upset"] if allow_vals => b.closure_upset = true,
            ["val", var, pts @ ..] if allow_vals => {
                if !is_identifier(var) {
                    return Err(fail(line_no, format!("bad variable name `{var}`")));
                }
                if b.vals.iter().any(|(_, v, _)| v == var) {
                    return Err(fail(line_no, format!("variable `{var}` valued twice")));
                }
                let pts = pts.iter().map(|w| in_range(number(w)?, n)).collect::<Result<_>>()?;
                b.vals.push((line_no, var.to_string(), pts));
            }
            ["end"] => b.ended = true,
            _ => return Err(fail(line_no, format!("unrecognised line `{line}`"))),
        }
    }
    if !b.ended {
        let last = text.lines().count();
        return Err(fail(last, "missing `end`".into()));
    }
    Ok(b)
}

fn build_frame(b: &Block) -> Frame {
    let frame = Frame::new(b.points.unwrap(), b.edges.iter().copied()).expect("edges were range-checked");
    if b.closure {
        frame.reflexive_transitive_closure()
    } else {
        frame
    }
}

pub fn parse_frame(text: &str, path: &str) -> Result<NamedFrame> {
    let b = read_block(text, path, false)?;
    Ok(NamedFrame {
        name: b.name.clone().unwrap(),
        frame: build_frame(&b),
    })
}

/// Values must be upsets unless `closure-upset` is present, in which case
/// each is replaced by its upward closure. The frame must be S4.
pub fn parse_model(text: &str, path: &str) -> Result<NamedModel> {
    let b = read_block(text, path, true)?;
    let frame = build_frame(&b);
    let fail = |line: usize, message: String| Error::Format {
        path: path.to_string(),
        line,
        message,
    };
    if !frame.is_s4() {
        return Err(fail(1, "model frame is not reflexive and transitive (add `closure`?)".into()));
    }
    let mut valuation = Valuation::new();
    for (line, var, pts) in &b.vals {
        let mut set: PointSet = pts.iter().copied().collect();
        if b.closure_upset {
            set = frame.r_image(&set)?;
        } else if !frame.is_upset(&set)? {
            return Err(fail(*line, format!("value of `{var}` is not an upset")));
        }
        valuation.insert(var.clone(), set);
    }
    Ok(NamedModel {
        name: b.name.clone().unwrap(),
        model: Model::new(frame, valuation)?,
    })
}

pub fn read_frame_file(path: &std::path::Path) -> Result<NamedFrame> {
    parse_frame(&read(path)?, &path.display().to_string())
}

pub fn read_model_file(path: &std::path::Path) -> Result<NamedModel> {
    parse_model(&read(path)?, &path.display().to_string())
}

fn read(path: &std::path::Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}

/// Writes every pair of the relation, reflexive ones included, so the
/// file loads back to the same frame without `closure`. `pointmap`, when
/// given, documents what each point stands for.
pub fn write_frame(name: &str, frame: &Frame, pointmap: Option<&[String]>) -> String {
    write_block(name, frame, pointmap, &BTreeMap::new())
}

pub fn write_model(name: &str, model: &Model, pointmap: Option<&[String]>) -> String {
    write_block(name, model.frame(), pointmap, model.valuation())
}

fn write_block(name: &str, frame: &Frame, pointmap: Option<&[String]>, vals: &Valuation) -> String {
    let mut out = String::new();
    if let Some(map) = pointmap {
        for (i, label) in map.iter().enumerate() {
            writeln!(out, "# pointmap {i} {label}").unwrap();
        }
    }
    writeln!(out, "frame {name}").unwrap();
    writeln!(out, "points {}", frame.size()).unwrap();
    for (a, b) in frame.edges() {
        writeln!(out, "edge {a} {b}").unwrap();
    }
    for (var, set) in vals {
        write!(out, "val {var}").unwrap();
        for p in set {
            write!(out, " {p}").unwrap();
        }
        out.push('\n');
    }
    out.push_str("end\n");
    out
}
