//! Line-oriented constraint files.
//!
//! ```text
//! # werewolf table with two named dummy indices
//! n = 9
//! M = 2,2,1
//! C[2] = {8}
//! C[3] = {9}
//! dummy = 8,9
//! name[8] = Role B
//! name[9] = Role C
//! ```

use std::collections::BTreeMap;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::grouping::{Constraint, Violation};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConstraintFile {
    pub constraint: Constraint,
    /// Indices labelled as dummies. The engine treats them like any other.
    pub dummies: Vec<usize>,
    /// Optional display names for dummy indices.
    pub names: BTreeMap<usize, String>,
}

impl ConstraintFile {
    pub fn is_dummy(&self, index: usize) -> bool {
        self.dummies.contains(&index)
    }

    /// Indices that are not dummies.
    pub fn players(&self) -> Vec<usize> {
        (1..=self.constraint.n()).filter(|i| !self.is_dummy(*i)).collect()
    }

    /// Display name of a dummy index.
    pub fn dummy_name(&self, index: usize) -> String {
        self.names
            .get(&index)
            .cloned()
            .unwrap_or_else(|| format!("dummy {index}"))
    }
}

impl FromStr for ConstraintFile {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_constraint_file(s)
    }
}

fn line_err(line: usize, msg: impl std::fmt::Display) -> Error {
    Error::Parse(format!("line {line}: {msg}"))
}

fn parse_list(line: usize, text: &str) -> Result<Vec<usize>> {
    let text = text.trim();
    if text.is_empty() {
        return Ok(Vec::new());
    }
    text.split(',')
        .map(|t| {
            t.trim()
                .parse::<usize>()
                .map_err(|_| line_err(line, format!("expected a number, found {:?}", t.trim())))
        })
        .collect()
}

fn strip_delims(line: usize, text: &str, open: char, close: char) -> Result<&str> {
    let t = text.trim();
    match (t.strip_prefix(open), t.ends_with(close)) {
        (Some(inner), true) => Ok(&inner[..inner.len() - close.len_utf8()]),
        _ => Err(line_err(line, format!("expected {open}…{close}, found {t:?}"))),
    }
}

fn bracketed_index(line: usize, key: &str, prefix: &str) -> Result<Option<usize>> {
    let Some(rest) = key.strip_prefix(prefix) else {
        return Ok(None);
    };
    let inner = strip_delims(line, rest, '[', ']')?;
    inner
        .trim()
        .parse()
        .map(Some)
        .map_err(|_| line_err(line, format!("bad index in {key:?}")))
}

pub fn parse_constraint_file(text: &str) -> Result<ConstraintFile> {
    let mut n: Option<(usize, usize)> = None;
    let mut sizes: Option<(usize, Vec<usize>)> = None;
    let mut sets: Vec<(usize, usize, Vec<usize>)> = Vec::new();
    let mut dummies: Option<(usize, Vec<usize>)> = None;
    let mut names: BTreeMap<usize, (usize, String)> = BTreeMap::new();

    for (i, raw) in text.lines().enumerate() {
        let ln = i + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let (key, value) = body
            .split_once('=')
            .ok_or_else(|| line_err(ln, format!("expected `key = value`, found {body:?}")))?;
        let (key, value) = (key.trim(), value.trim());
        if key == "n" {
            if n.is_some() {
                return Err(line_err(ln, "n given twice"));
            }
            let v = value
                .parse()
                .map_err(|_| line_err(ln, format!("n must be a number, found {value:?}")))?;
            n = Some((ln, v));
        } else if key == "M" {
            if sizes.is_some() {
                return Err(line_err(ln, "M given twice"));
            }
            let inner = if value.starts_with('(') {
                strip_delims(ln, value, '(', ')')?
            } else {
                value
            };
            sizes = Some((ln, parse_list(ln, inner)?));
        } else if key == "dummy" {
            if dummies.is_some() {
                return Err(line_err(ln, "dummy given twice"));
            }
            dummies = Some((ln, parse_list(ln, value)?));
        } else if let Some(k) = bracketed_index(ln, key, "C")? {
            sets.push((ln, k, parse_list(ln, strip_delims(ln, value, '{', '}')?)?));
        } else if let Some(d) = bracketed_index(ln, key, "name")? {
            if value.is_empty() {
                return Err(line_err(ln, "empty name"));
            }
            names.insert(d, (ln, value.to_string()));
        } else {
            return Err(line_err(ln, format!("unknown key {key:?}")));
        }
    }

    let (n_line, n) = n.ok_or_else(|| Error::Parse("missing `n = …` line".into()))?;
    let (m_line, tuple) = sizes.ok_or_else(|| Error::Parse("missing `M = …` line".into()))?;
    let mut constraint = Constraint::from_tuple(n, &tuple);
    for (_, k, set) in &sets {
        constraint = constraint.with_set(*k, set.clone());
    }

    let violations = constraint.validate();
    if let Some(v) = violations.first() {
        let line = match v {
            Violation::EmptyIndexSet => n_line,
            Violation::ZeroGroupSize => sets
                .iter()
                .find(|(_, k, _)| *k == 0)
                .map_or(m_line, |(l, _, _)| *l),
            Violation::SizeSum { .. } => m_line,
            Violation::EmptySet { k } => line_of_set(&sets, *k, &[]).unwrap_or(m_line),
            Violation::SetTooLarge { k, set }
            | Violation::OutOfRange { k, set }
            | Violation::NotIncreasing { k, set } => line_of_set(&sets, *k, set).unwrap_or(m_line),
            Violation::Overlap { second, .. } => sets
                .iter()
                .find(|(_, _, s)| s == second)
                .map_or(m_line, |(l, _, _)| *l),
            Violation::TooManySets { k, .. } => sets
                .iter()
                .rev()
                .find(|(_, kk, _)| kk == k)
                .map_or(m_line, |(l, _, _)| *l),
        };
        return Err(line_err(line, v));
    }

    let dummies = match dummies {
        None => Vec::new(),
        Some((ln, d)) => {
            if let Some(bad) = d.iter().find(|&&x| x == 0 || x > n) {
                return Err(line_err(ln, format!("dummy index {bad} outside 1..={n}")));
            }
            if d.windows(2).any(|w| w[0] >= w[1]) {
                return Err(line_err(ln, "dummy indices must be written in increasing order"));
            }
            d
        }
    };
    for (d, (ln, _)) in &names {
        if !dummies.contains(d) {
            return Err(line_err(*ln, format!("name given for {d}, which is not a dummy index")));
        }
    }

    Ok(ConstraintFile {
        constraint,
        dummies,
        names: names.into_iter().map(|(d, (_, s))| (d, s)).collect(),
    })
}

fn line_of_set(sets: &[(usize, usize, Vec<usize>)], k: usize, set: &[usize]) -> Option<usize> {
    sets.iter()
        .find(|(_, kk, s)| *kk == k && s == set)
        .map(|(l, _, _)| *l)
}

#[cfg(test)]
mod tests {
    use super::*;

    const ROLES: &str = "# roles\nn = 9\nM = 2,2,1\nC[2] = {8}\nC[3] = {9}\ndummy = 8,9\nname[8] = Role B\nname[9] = Role C\n";

    #[test]
    fn parses_full_file() {
        let f: ConstraintFile = ROLES.parse().unwrap();
        let want = Constraint::from_tuple(9, &[2, 2, 1])
            .with_set(2, vec![8])
            .with_set(3, vec![9]);
        assert_eq!(f.constraint, want);
        assert_eq!(f.dummies, vec![8, 9]);
        assert_eq!(f.players(), (1..=7).collect::<Vec<_>>());
        assert_eq!(f.dummy_name(8), "Role B");
    }

    #[test]
    fn tuple_may_be_parenthesised() {
        let f = parse_constraint_file("n = 5\nM = (3,1)  # two-player group\n").unwrap();
        assert_eq!(f.constraint, Constraint::from_tuple(5, &[3, 1]));
        assert!(f.dummies.is_empty());
        assert_eq!(f.dummy_name(3), "dummy 3");
    }

    fn err(text: &str) -> String {
        parse_constraint_file(text).unwrap_err().to_string()
    }

    #[test]
    fn errors_carry_line_numbers() {
        assert!(err("n = 4\nM = 0,2\nC[2] = {3,1}\n").contains("line 3"));
        assert!(err("n = 4\nM = 1,1\n").contains("line 2"));
        assert!(err("n = 4\nM = 0,2\nC[2] = {1}\nC[2] = {1,2}\n").contains("line 4"));
        assert!(err("n = 4\nM = 0,2\nC[2] = {5}\n").contains("line 3"));
        assert!(err("n = 4\nM = 0,2\nC[2] = {1,2,3}\n").contains("line 3"));
        assert!(err("n = 4\nM = 0,2\nC[2] = {1}\nC[2] = {2}\nC[2] = {3}\n").contains("line 5"));
        assert!(err("n = 4\nM = 0,2\nwhat = 3\n").contains("line 3"));
        assert!(err("n = x\n").contains("line 1"));
        assert!(err("n = 4\nM = 0,2\ndummy = 5\n").contains("line 3"));
        assert!(err("n = 4\nM = 0,2\nname[2] = B\n").contains("line 3"));
        assert!(err("n = 4\n").contains("missing"));
        assert!(err("n = 4\nM = 0,2\nC[2] = 1,2\n").contains("line 3"));
    }
}
