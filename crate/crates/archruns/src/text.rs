//! Text and JSON encodings of runs.
//!
//! The text form is whitespace- or comma-separated lowercase tokens such as
//! `a3 b1 x2 c4 m`; parsing is case-insensitive, serialization is lowercase.
//! The JSON form is `{"n": N, "k": K, "run": ["a1", …]}`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::model::{Action, Run, Shape};
use crate::{Error, Result};

impl fmt::Display for Action {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Action::A(i) => write!(f, "a{i}"),
            Action::B(i) => write!(f, "b{i}"),
            Action::C(i) => write!(f, "c{i}"),
            Action::X(i) => write!(f, "x{i}"),
            Action::Merged => write!(f, "m"),
        }
    }
}

impl FromStr for Action {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim().to_ascii_lowercase();
        if t == "m" {
            return Ok(Action::Merged);
        }
        let mut chars = t.chars();
        let head = chars
            .next()
            .ok_or_else(|| Error::Parse("empty action token".into()))?;
        let rest = chars.as_str();
        if rest.is_empty() || !rest.bytes().all(|b| b.is_ascii_digit()) {
            return Err(Error::Parse(format!("unrecognized action token {s:?}")));
        }
        let index: u32 = rest
            .parse()
            .map_err(|_| Error::Parse(format!("action index out of range in {s:?}")))?;
        if index == 0 {
            return Err(Error::Parse(format!("action index must be >= 1 in {s:?}")));
        }
        match head {
            'a' => Ok(Action::A(index)),
            'b' => Ok(Action::B(index)),
            'c' => Ok(Action::C(index)),
            'x' => Ok(Action::X(index)),
            _ => Err(Error::Parse(format!("unrecognized action token {s:?}"))),
        }
    }
}

impl fmt::Display for Run {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, a) in self.actions().iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{a}")?;
        }
        Ok(())
    }
}

/// Parses the whitespace/comma token form. The empty string parses to the
/// empty run (the single run of the trivial shape).
pub fn parse_run_text(s: &str) -> Result<Run> {
    s.split(|c: char| c.is_whitespace() || c == ',')
        .filter(|t| !t.is_empty())
        .map(Action::from_str)
        .collect::<Result<Vec<_>>>()
        .map(Run::new)
}

/// Wire form of a run together with its shape.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunDoc {
    pub n: u32,
    pub k: u32,
    pub run: Vec<String>,
}

impl RunDoc {
    pub fn new(shape: Shape, run: &Run) -> Self {
        RunDoc {
            n: shape.n(),
            k: shape.k(),
            run: run.actions().iter().map(|a| a.to_string()).collect(),
        }
    }
}

/// Parses the JSON wire form; the shape is range-checked, the run tokens are
/// parsed but not validated against the shape (see
/// [`crate::model::validate_run`]).
pub fn parse_run_json(s: &str) -> Result<(Shape, Run)> {
    let doc: RunDoc = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
    let shape = Shape::new(doc.n, doc.k)?;
    let actions = doc
        .run
        .iter()
        .map(|t| t.parse())
        .collect::<Result<Vec<Action>>>()?;
    Ok((shape, Run::new(actions)))
}

pub fn run_to_json(shape: Shape, run: &Run) -> String {
    serde_json::to_string(&RunDoc::new(shape, run)).expect("RunDoc serialization cannot fail")
}
