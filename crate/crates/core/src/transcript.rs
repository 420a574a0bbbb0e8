//! The public record of a protocol run and the hidden randomness beside it.
//!
//! Text format, one event per line, rows and columns 1-based:
//!
//! ```text
//! CREATE rows=1,2,3,4 fronts=2,4,5
//! CREATE rows=5,6 len=3 hidden
//! FACEDOWN rows=1,2 cols=1,2,3
//! SHUFFLE rows=1,2 cols=2,4,5
//! INSERT rows=1,2 cols=1,3 values=1,3
//! OPEN row=1 values=3,1,4,2,5
//! REARRANGE rows=1,2 perm=[3,1,4,2,5]
//! ```

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::perm::Permutation;

/// Row handle on a [`crate::table::Table`]; displayed 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RowId(pub(crate) usize);

impl RowId {
    /// From a 1-based row number.
    pub fn from_number(n: usize) -> Option<RowId> {
        n.checked_sub(1).map(RowId)
    }

    pub fn number(self) -> usize {
        self.0 + 1
    }
}

impl fmt::Display for RowId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.number())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Event {
    /// New rows of `len` cards. `fronts` is the public face-up content shared
    /// by every created row, or `None` when the rows arrive committed.
    RowsCreated {
        rows: Vec<RowId>,
        len: usize,
        fronts: Option<Vec<usize>>,
    },
    FacedDown {
        rows: Vec<RowId>,
        columns: Vec<usize>,
    },
    ShuffleApplied {
        rows: Vec<RowId>,
        columns: Vec<usize>,
    },
    /// Face-up cards placed so that they end at the given columns.
    Inserted {
        rows: Vec<RowId>,
        columns: Vec<usize>,
        values: Vec<usize>,
    },
    Opened {
        row: RowId,
        values: Vec<usize>,
    },
    Rearranged {
        rows: Vec<RowId>,
        perm: Permutation,
    },
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Transcript {
    events: Vec<Event>,
}

impl Transcript {
    pub fn new() -> Transcript {
        Transcript::default()
    }

    pub fn events(&self) -> &[Event] {
        &self.events
    }

    pub fn len(&self) -> usize {
        self.events.len()
    }

    pub fn is_empty(&self) -> bool {
        self.events.is_empty()
    }

    pub(crate) fn push(&mut self, e: Event) {
        self.events.push(e);
    }

    /// Values of every `Opened` event, in order.
    pub fn opened(&self) -> Vec<&[usize]> {
        self.events
            .iter()
            .filter_map(|e| match e {
                Event::Opened { values, .. } => Some(values.as_slice()),
                _ => None,
            })
            .collect()
    }

    /// Number of cards brought to the table by `CREATE` and `INSERT` events.
    pub fn cards_used(&self) -> usize {
        self.events
            .iter()
            .map(|e| match e {
                Event::RowsCreated { rows, len, .. } => rows.len() * len,
                Event::Inserted { rows, columns, .. } => rows.len() * columns.len(),
                _ => 0,
            })
            .sum()
    }
}

fn join<T: fmt::Display>(xs: &[T]) -> String {
    xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

impl fmt::Display for Event {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Event::RowsCreated { rows, len, fronts } => match fronts {
                Some(v) => write!(f, "CREATE rows={} fronts={}", join(rows), join(v)),
                None => write!(f, "CREATE rows={} len={} hidden", join(rows), len),
            },
            Event::FacedDown { rows, columns } => {
                write!(f, "FACEDOWN rows={} cols={}", join(rows), join(columns))
            }
            Event::ShuffleApplied { rows, columns } => {
                write!(f, "SHUFFLE rows={} cols={}", join(rows), join(columns))
            }
            Event::Inserted {
                rows,
                columns,
                values,
            } => write!(
                f,
                "INSERT rows={} cols={} values={}",
                join(rows),
                join(columns),
                join(values)
            ),
            Event::Opened { row, values } => write!(f, "OPEN row={} values={}", row, join(values)),
            Event::Rearranged { rows, perm } => {
                write!(f, "REARRANGE rows={} perm={}", join(rows), perm.one_line())
            }
        }
    }
}

impl fmt::Display for Transcript {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for e in &self.events {
            writeln!(f, "{e}")?;
        }
        Ok(())
    }
}

fn parse_list(s: &str) -> Result<Vec<usize>> {
    if s.is_empty() {
        return Ok(Vec::new());
    }
    s.split(',')
        .map(|p| {
            p.parse::<usize>()
                .map_err(|_| Error::Parse(format!("bad number {p:?}")))
        })
        .collect()
}

fn parse_rows(s: &str) -> Result<Vec<RowId>> {
    parse_list(s)?
        .into_iter()
        .map(|n| RowId::from_number(n).ok_or_else(|| Error::Parse("row 0".to_string())))
        .collect()
}

struct Fields<'a> {
    parts: Vec<&'a str>,
    line: &'a str,
}

impl<'a> Fields<'a> {
    fn get(&self, key: &str) -> Result<&'a str> {
        let prefix = format!("{key}=");
        self.parts
            .iter()
            .find_map(|p| p.strip_prefix(prefix.as_str()))
            .ok_or_else(|| Error::Parse(format!("missing {key}= in {:?}", self.line)))
    }

    fn expect_count(&self, n: usize) -> Result<()> {
        if self.parts.len() != n {
            return Err(Error::Parse(format!("unexpected fields in {:?}", self.line)));
        }
        Ok(())
    }
}

impl FromStr for Event {
    type Err = Error;

    fn from_str(line: &str) -> Result<Event> {
        let mut it = line.split_whitespace();
        let tag = it
            .next()
            .ok_or_else(|| Error::Parse("empty event line".to_string()))?;
        let fields = Fields {
            parts: it.collect(),
            line,
        };
        let event = match tag {
            "CREATE" => {
                let rows = parse_rows(fields.get("rows")?)?;
                if fields.parts.last() == Some(&"hidden") {
                    fields.expect_count(3)?;
                    let len = fields
                        .get("len")?
                        .parse()
                        .map_err(|_| Error::Parse(format!("bad len in {line:?}")))?;
                    Event::RowsCreated {
                        rows,
                        len,
                        fronts: None,
                    }
                } else {
                    fields.expect_count(2)?;
                    let fronts = parse_list(fields.get("fronts")?)?;
                    Event::RowsCreated {
                        rows,
                        len: fronts.len(),
                        fronts: Some(fronts),
                    }
                }
            }
            "FACEDOWN" => {
                fields.expect_count(2)?;
                Event::FacedDown {
                    rows: parse_rows(fields.get("rows")?)?,
                    columns: parse_list(fields.get("cols")?)?,
                }
            }
            "SHUFFLE" => {
                fields.expect_count(2)?;
                Event::ShuffleApplied {
                    rows: parse_rows(fields.get("rows")?)?,
                    columns: parse_list(fields.get("cols")?)?,
                }
            }
            "INSERT" => {
                fields.expect_count(3)?;
                Event::Inserted {
                    rows: parse_rows(fields.get("rows")?)?,
                    columns: parse_list(fields.get("cols")?)?,
                    values: parse_list(fields.get("values")?)?,
                }
            }
            "OPEN" => {
                fields.expect_count(2)?;
                let mut rows = parse_rows(fields.get("row")?)?;
                if rows.len() != 1 {
                    return Err(Error::Parse(format!("OPEN takes one row: {line:?}")));
                }
                Event::Opened {
                    row: rows.remove(0),
                    values: parse_list(fields.get("values")?)?,
                }
            }
            "REARRANGE" => {
                fields.expect_count(2)?;
                Event::Rearranged {
                    rows: parse_rows(fields.get("rows")?)?,
                    perm: fields.get("perm")?.parse()?,
                }
            }
            other => return Err(Error::Parse(format!("unknown event {other:?}"))),
        };
        Ok(event)
    }
}

impl FromStr for Transcript {
    type Err = Error;

    fn from_str(s: &str) -> Result<Transcript> {
        let events = s
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty())
            .map(str::parse)
            .collect::<Result<_>>()?;
        Ok(Transcript { events })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SecretEntry {
    /// The hidden `r` of one pile-scramble shuffle.
    Shuffle { rows: Vec<RowId>, perm: Permutation },
    /// A permutation a protocol derived from earlier shuffles, e.g. the
    /// randomizing `σ`. Never consumed by replay.
    Derived { label: String, perm: Permutation },
}

/// Hidden randomness of a run. Only test, analysis and `--unsafe-secrets`
/// code paths read it.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SecretLog {
    entries: Vec<SecretEntry>,
}

impl SecretLog {
    pub fn entries(&self) -> &[SecretEntry] {
        &self.entries
    }

    pub(crate) fn push(&mut self, e: SecretEntry) {
        self.entries.push(e);
    }

    pub fn shuffles(&self) -> impl Iterator<Item = &Permutation> {
        self.entries.iter().filter_map(|e| match e {
            SecretEntry::Shuffle { perm, .. } => Some(perm),
            _ => None,
        })
    }

    pub fn derived(&self, label: &str) -> Option<&Permutation> {
        self.entries.iter().rev().find_map(|e| match e {
            SecretEntry::Derived { label: l, perm } if l == label => Some(perm),
            _ => None,
        })
    }

    /// Copy with only the first `n` entries.
    pub fn truncated(&self, n: usize) -> SecretLog {
        SecretLog {
            entries: self.entries.iter().take(n).cloned().collect(),
        }
    }

    /// Plain-text dump. Callers must gate this behind an explicit opt-in.
    pub fn render_unsafe(&self) -> String {
        let mut out = String::new();
        for e in &self.entries {
            match e {
                SecretEntry::Shuffle { rows, perm } => {
                    out += &format!("SECRET shuffle rows={} r={}\n", join(rows), perm.one_line())
                }
                SecretEntry::Derived { label, perm } => {
                    out += &format!("SECRET {label}={} ({perm})\n", perm.one_line())
                }
            }
        }
        out
    }
}
