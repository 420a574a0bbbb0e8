//! The public table: rows of cards and the actions allowed on them.
//!
//! Every action that changes card order or facing appends exactly one
//! [`Event`] to the transcript. Hidden shuffle permutations go to the
//! [`SecretLog`] only.

use std::collections::BTreeSet;

use crate::cards::{apply_permutation, Card, CardSequence, Facing};
use crate::error::{Error, Result};
use crate::perm::{check_degree, Permutation};
use crate::source::{PermutationSource, ScriptedSource};
use crate::transcript::{Event, RowId, SecretEntry, SecretLog, Transcript};

#[derive(Debug, Clone)]
struct Row {
    seq: CardSequence,
    alive: bool,
}

pub struct Table {
    degree: usize,
    rows: Vec<Row>,
    source: Box<dyn PermutationSource>,
    transcript: Transcript,
    secret_log: SecretLog,
}

impl std::fmt::Debug for Table {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Table")
            .field("degree", &self.degree)
            .field("rows", &self.rows)
            .field("transcript", &self.transcript)
            .finish_non_exhaustive()
    }
}

impl Table {
    /// A table whose cards carry values in `1..=degree`.
    pub fn new(degree: usize, source: impl PermutationSource + 'static) -> Table {
        assert!(degree >= 1, "degree must be at least 1");
        Table {
            degree,
            rows: Vec::new(),
            source: Box::new(source),
            transcript: Transcript::new(),
            secret_log: SecretLog::default(),
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn transcript(&self) -> &Transcript {
        &self.transcript
    }

    pub fn secret_log(&self) -> &SecretLog {
        &self.secret_log
    }

    pub fn into_logs(self) -> (Transcript, SecretLog) {
        (self.transcript, self.secret_log)
    }

    pub fn row_count(&self) -> usize {
        self.rows.len()
    }

    /// Current content of a row. Reading face-down values from the result
    /// needs secret access; see [`CardSequence::values`].
    pub fn row(&self, id: RowId) -> Result<&CardSequence> {
        self.rows
            .get(id.0)
            .map(|r| &r.seq)
            .ok_or(Error::UnknownRow(id.number()))
    }

    pub fn rows(&self) -> Vec<&CardSequence> {
        self.rows.iter().map(|r| &r.seq).collect()
    }

    pub fn is_alive(&self, id: RowId) -> bool {
        self.rows.get(id.0).is_some_and(|r| r.alive)
    }

    fn live_row_mut(&mut self, id: RowId) -> Result<&mut Row> {
        let row = self
            .rows
            .get_mut(id.0)
            .ok_or(Error::UnknownRow(id.number()))?;
        if !row.alive {
            return Err(Error::DeadRow(id.number()));
        }
        Ok(row)
    }

    fn check_live(&self, ids: &[RowId]) -> Result<()> {
        for &id in ids {
            let row = self.rows.get(id.0).ok_or(Error::UnknownRow(id.number()))?;
            if !row.alive {
                return Err(Error::DeadRow(id.number()));
            }
        }
        let distinct: BTreeSet<_> = ids.iter().collect();
        if distinct.len() != ids.len() {
            return Err(Error::Parse(format!("row listed twice in {ids:?}")));
        }
        Ok(())
    }

    fn common_len(&self, ids: &[RowId]) -> Result<usize> {
        let lens: Vec<usize> = ids.iter().map(|id| self.rows[id.0].seq.len()).collect();
        match lens.first() {
            Some(&m) if lens.iter().all(|&l| l == m) => Ok(m),
            Some(_) => Err(Error::RowLengthMismatch(lens)),
            None => Err(Error::RowLengthMismatch(lens)),
        }
    }

    fn check_columns(columns: &[usize], len: usize) -> Result<()> {
        let mut seen = BTreeSet::new();
        for &c in columns {
            if c == 0 || c > len || !seen.insert(c) {
                return Err(Error::BadColumn { column: c, len });
            }
        }
        Ok(())
    }

    /// `count` new face-up rows, each showing `fronts` left to right.
    pub fn create_rows(&mut self, count: usize, fronts: &[usize]) -> Result<Vec<RowId>> {
        let seq = CardSequence::from_values(self.degree, fronts, Facing::Up)?;
        let ids: Vec<RowId> = (0..count).map(|i| RowId(self.rows.len() + i)).collect();
        for _ in 0..count {
            self.rows.push(Row {
                seq: seq.clone(),
                alive: true,
            });
        }
        self.transcript.push(Event::RowsCreated {
            rows: ids.clone(),
            len: fronts.len(),
            fronts: Some(fronts.to_vec()),
        });
        Ok(ids)
    }

    /// Brings already-committed rows (every card face down) to the table.
    pub fn create_committed_rows(&mut self, seqs: Vec<CardSequence>) -> Result<Vec<RowId>> {
        let len = seqs.first().map(CardSequence::len).unwrap_or(0);
        for (i, s) in seqs.iter().enumerate() {
            check_degree(self.degree, s.degree())?;
            if let Some(p) = s.cards().iter().position(Card::is_up) {
                return Err(Error::WouldLeak {
                    row: self.rows.len() + i + 1,
                    position: p + 1,
                });
            }
        }
        if seqs.iter().any(|s| s.len() != len) {
            return Err(Error::RowLengthMismatch(seqs.iter().map(|s| s.len()).collect()));
        }
        let ids: Vec<RowId> = (0..seqs.len()).map(|i| RowId(self.rows.len() + i)).collect();
        self.rows
            .extend(seqs.into_iter().map(|seq| Row { seq, alive: true }));
        self.transcript.push(Event::RowsCreated {
            rows: ids.clone(),
            len,
            fronts: None,
        });
        Ok(ids)
    }

    /// Turns the given columns of the given rows face down.
    pub fn face_down(&mut self, rows: &[RowId], columns: &[usize]) -> Result<()> {
        self.check_live(rows)?;
        let len = self.common_len(rows)?;
        Self::check_columns(columns, len)?;
        for &id in rows {
            let cards = self.rows[id.0].seq.cards_mut();
            for &c in columns {
                cards[c - 1].facing = Facing::Down;
            }
        }
        self.transcript.push(Event::FacedDown {
            rows: rows.to_vec(),
            columns: columns.to_vec(),
        });
        Ok(())
    }

    /// Pile-scramble shuffle of whole rows: one hidden uniform `r` applied to
    /// every listed row.
    pub fn pile_scramble(&mut self, rows: &[RowId]) -> Result<()> {
        self.check_live(rows)?;
        let len = self.common_len(rows)?;
        let all: Vec<usize> = (1..=len).collect();
        self.pile_scramble_columns(rows, &all)
    }

    /// Pile-scramble shuffle restricted to `columns`: the card in the `j`-th
    /// listed column moves to the `r(j)`-th listed column, identically in all
    /// rows. Other columns stay put.
    pub fn pile_scramble_columns(&mut self, rows: &[RowId], columns: &[usize]) -> Result<()> {
        self.check_live(rows)?;
        let len = self.common_len(rows)?;
        Self::check_columns(columns, len)?;
        for &id in rows {
            let cards = self.rows[id.0].seq.cards();
            if let Some(&c) = columns.iter().find(|&&c| cards[c - 1].is_up()) {
                return Err(Error::WouldLeak {
                    row: id.number(),
                    position: c,
                });
            }
        }
        if columns.is_empty() {
            // S_0 has only the empty permutation: nothing to draw or move
            self.transcript.push(Event::ShuffleApplied {
                rows: rows.to_vec(),
                columns: Vec::new(),
            });
            return Ok(());
        }
        let r = self.source.draw(columns.len())?;
        for &id in rows {
            let cards = self.rows[id.0].seq.cards_mut();
            let picked: Vec<Card> = columns.iter().map(|&c| cards[c - 1]).collect();
            for (j, card) in picked.into_iter().enumerate() {
                cards[columns[r.apply(j + 1) - 1] - 1] = card;
            }
        }
        self.secret_log.push(SecretEntry::Shuffle {
            rows: rows.to_vec(),
            perm: r,
        });
        self.transcript.push(Event::ShuffleApplied {
            rows: rows.to_vec(),
            columns: columns.to_vec(),
        });
        Ok(())
    }

    /// Inserts face-up cards so that `values[j]` ends at absolute column
    /// `columns[j]` of each listed row; existing cards keep their order.
    pub fn insert_cards(&mut self, rows: &[RowId], columns: &[usize], values: &[usize]) -> Result<()> {
        self.check_live(rows)?;
        let len = self.common_len(rows)?;
        if columns.len() != values.len() {
            return Err(Error::Parse("columns and values differ in length".to_string()));
        }
        let new_len = len + columns.len();
        Self::check_columns(columns, new_len)?;
        CardSequence::from_values(self.degree, values, Facing::Up)?;
        for &id in rows {
            let old = self.rows[id.0].seq.cards().to_vec();
            let mut existing = old.into_iter();
            let mut out = Vec::with_capacity(new_len);
            for pos in 1..=new_len {
                match columns.iter().position(|&c| c == pos) {
                    Some(j) => out.push(Card::up(values[j])),
                    None => out.push(existing.next().expect("length accounted")),
                }
            }
            self.rows[id.0].seq = CardSequence::new(self.degree, out)?;
        }
        self.transcript.push(Event::Inserted {
            rows: rows.to_vec(),
            columns: columns.to_vec(),
            values: values.to_vec(),
        });
        Ok(())
    }

    /// Turns a whole row face up and returns what it shows.
    pub fn open_row(&mut self, id: RowId) -> Result<Vec<usize>> {
        let row = self.live_row_mut(id)?;
        for c in row.seq.cards_mut() {
            c.facing = Facing::Up;
        }
        let values = row.seq.values();
        self.transcript.push(Event::Opened {
            row: id,
            values: values.clone(),
        });
        Ok(values)
    }

    /// Applies a publicly known permutation to the columns of each row.
    pub fn rearrange_publicly(&mut self, rows: &[RowId], perm: &Permutation) -> Result<()> {
        self.check_live(rows)?;
        let len = self.common_len(rows)?;
        check_degree(perm.degree(), len)?;
        for &id in rows {
            let row = &mut self.rows[id.0];
            row.seq = apply_permutation(perm, &row.seq)?;
        }
        self.transcript.push(Event::Rearranged {
            rows: rows.to_vec(),
            perm: perm.clone(),
        });
        Ok(())
    }

    /// Marks a row as used up. Its cards stay so row numbers remain stable.
    pub fn retire(&mut self, id: RowId) -> Result<()> {
        self.live_row_mut(id)?.alive = false;
        Ok(())
    }

    /// A player privately looks at one card. Not part of the public record.
    pub fn private_pick(&self, id: RowId, position: usize) -> Result<usize> {
        let seq = self.row(id)?;
        seq.card(position)
            .map(|c| c.value)
            .ok_or(Error::BadColumn {
                column: position,
                len: seq.len(),
            })
    }

    pub(crate) fn log_derived(&mut self, label: &str, perm: Permutation) {
        self.secret_log.push(SecretEntry::Derived {
            label: label.to_string(),
            perm,
        });
    }
}

/// Re-executes a transcript against the recorded shuffle permutations.
///
/// `hidden_inputs` supplies, in order, the rows of every `CREATE … hidden`
/// event. The result matches the original table card for card.
pub fn replay(
    transcript: &Transcript,
    secret_log: &SecretLog,
    hidden_inputs: &[CardSequence],
    degree: usize,
) -> Result<Table> {
    replay_with(transcript, secret_log, hidden_inputs, degree, |_, _| Ok(()))
}

/// Like [`replay`], calling `inspect(table, event)` right after every event
/// so audits can compare what an event disclosed with the table it left.
pub fn replay_with<F>(
    transcript: &Transcript,
    secret_log: &SecretLog,
    hidden_inputs: &[CardSequence],
    degree: usize,
    mut inspect: F,
) -> Result<Table>
where
    F: FnMut(&Table, &Event) -> Result<()>,
{
    let shuffles: Vec<Permutation> = secret_log.shuffles().cloned().collect();
    let total_shuffles = shuffles.len();
    let mut table = Table::new(degree, ScriptedSource::new(shuffles));
    let mut inputs = hidden_inputs.iter();
    let diverged = |i: usize, e: &Event, why: String| {
        Error::ReplayDiverged(format!("event {} ({e}): {why}", i + 1))
    };

    for (i, event) in transcript.events().iter().enumerate() {
        let step = match event {
            Event::RowsCreated { rows, len, fronts } => {
                let ids = match fronts {
                    Some(f) => table.create_rows(rows.len(), f),
                    None => {
                        let seqs: Vec<CardSequence> =
                            inputs.by_ref().take(rows.len()).cloned().collect();
                        if seqs.len() != rows.len() {
                            return Err(diverged(i, event, "hidden inputs exhausted".into()));
                        }
                        if seqs.iter().any(|s| s.len() != *len) {
                            return Err(diverged(i, event, "hidden input length differs".into()));
                        }
                        table.create_committed_rows(seqs)
                    }
                };
                ids.and_then(|ids| {
                    if &ids == rows {
                        Ok(())
                    } else {
                        Err(Error::ReplayDiverged(format!("row numbering differs at event {}", i + 1)))
                    }
                })
            }
            Event::FacedDown { rows, columns } => table.face_down(rows, columns),
            Event::ShuffleApplied { rows, columns } => table.pile_scramble_columns(rows, columns),
            Event::Inserted {
                rows,
                columns,
                values,
            } => table.insert_cards(rows, columns, values),
            Event::Opened { row, values } => {
                let got = table.open_row(*row)?;
                if &got != values {
                    return Err(diverged(i, event, format!("row shows {got:?}")));
                }
                Ok(())
            }
            Event::Rearranged { rows, perm } => table.rearrange_publicly(rows, perm),
        };
        step.map_err(|e| match e {
            Error::ReplayDiverged(_) => e,
            Error::ScriptExhausted => diverged(i, event, "secret log exhausted".into()),
            other => diverged(i, event, other.to_string()),
        })?;
        inspect(&table, event)?;
    }
    let used = table.secret_log.shuffles().count();
    if used != total_shuffles {
        return Err(Error::ReplayDiverged(format!(
            "{} recorded shuffles left unused",
            total_shuffles - used
        )));
    }
    if inputs.next().is_some() {
        return Err(Error::ReplayDiverged("hidden inputs left unused".into()));
    }
    Ok(table)
}
