//! Permutation division and the permutation randomizing protocol with a
//! fixing set, expressed as table actions.

use std::collections::BTreeSet;

use crate::cards::{permutation_of_sequence, Access, CardSequence, Facing};
use crate::error::{Error, Result};
use crate::perm::{check_degree, Permutation};
use crate::table::Table;
use crate::transcript::{Event, RowId, Transcript};

/// Secret-log label of the randomizing permutation `σ`.
pub const SIGMA_LABEL: &str = "sigma";

/// Public parameters of one randomizing run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RandomizingSpec {
    pub degree: usize,
    pub inputs: Vec<Permutation>,
    pub fixing_set: BTreeSet<usize>,
}

impl RandomizingSpec {
    pub fn new(
        degree: usize,
        inputs: Vec<Permutation>,
        fixing_set: impl IntoIterator<Item = usize>,
    ) -> RandomizingSpec {
        RandomizingSpec {
            degree,
            inputs,
            fixing_set: fixing_set.into_iter().collect(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.inputs.is_empty() {
            return Err(Error::NoInputs);
        }
        for t in &self.inputs {
            check_degree(self.degree, t.degree())?;
        }
        if let Some(&a) = self
            .fixing_set
            .iter()
            .find(|&&a| a == 0 || a > self.degree)
        {
            return Err(Error::BadFixingSet(format!(
                "{a} is outside 1..={}",
                self.degree
            )));
        }
        Ok(())
    }

    /// `{1..n} ∖ I` in increasing order.
    pub fn free_points(&self) -> Vec<usize> {
        (1..=self.degree)
            .filter(|a| !self.fixing_set.contains(a))
            .collect()
    }
}

/// Given committed rows for `v` and `w`, leaves the committed row for `v⁻¹w`
/// in place of `w` and returns it. The `v` row is opened and retired.
pub fn permutation_division(table: &mut Table, row_v: RowId, row_w: RowId) -> Result<RowId> {
    for id in [row_v, row_w] {
        let seq = table.row(id)?;
        if let Some(p) = seq.cards().iter().position(|c| c.is_up()) {
            return Err(Error::WouldLeak {
                row: id.number(),
                position: p + 1,
            });
        }
    }
    let (lv, lw) = (table.row(row_v)?.len(), table.row(row_w)?.len());
    check_degree(lv, lw)?;
    check_degree(table.degree(), lv)?;

    table.pile_scramble(&[row_v, row_w])?;
    let opened = table.open_row(row_v)?;
    let rv = permutation_of_sequence(
        &CardSequence::from_values(table.degree(), &opened, Facing::Up)?,
        Access::Public,
    )?;
    // sorting the open row back to 1..n applies (rv)⁻¹ to both rows
    table.rearrange_publicly(&[row_v, row_w], &rv.inverse())?;
    table.retire(row_v)?;
    Ok(row_w)
}

/// Runs the randomizing protocol and returns the `k` committed output rows,
/// row `i` holding `σ⁻¹ τ_i σ` for a hidden `σ` uniform among permutations
/// fixing every point of the fixing set.
pub fn permutation_randomizing(table: &mut Table, spec: &RandomizingSpec) -> Result<Vec<RowId>> {
    spec.validate()?;
    check_degree(table.degree(), spec.degree)?;
    let k = spec.inputs.len();
    let free = spec.free_points();
    let fixed: Vec<usize> = spec.fixing_set.iter().copied().collect();

    // 2k face-down copies of the free numbers in increasing order
    let rows = table.create_rows(2 * k, &free)?;
    let all_free: Vec<usize> = (1..=free.len()).collect();
    table.face_down(&rows, &all_free)?;
    table.pile_scramble(&rows)?;
    if !fixed.is_empty() {
        table.insert_cards(&rows, &fixed, &fixed)?;
        table.face_down(&rows, &fixed)?;
    }
    let sigma = permutation_of_sequence(table.row(rows[0])?, Access::Secret)?;
    table.log_derived(SIGMA_LABEL, sigma);

    let (sigma_rows, tau_rows) = rows.split_at(k);
    for (row, tau) in tau_rows.iter().zip(&spec.inputs) {
        table.rearrange_publicly(&[*row], tau)?;
    }
    sigma_rows
        .iter()
        .zip(tau_rows)
        .map(|(&v, &w)| permutation_division(table, v, w))
        .collect()
}

/// The permutations shown by every opened row, in order.
pub fn adversary_view(transcript: &Transcript) -> Result<Vec<Permutation>> {
    transcript
        .events()
        .iter()
        .filter_map(|e| match e {
            Event::Opened { values, .. } => Some(values),
            _ => None,
        })
        .map(|values| Ok(Permutation::from_images(values)?.inverse()))
        .collect()
}

/// The step-2 shuffle that makes the randomizing protocol produce `sigma`.
/// Used to script a chosen `σ` into a run.
pub fn shuffle_for_sigma(sigma: &Permutation, fixing_set: &BTreeSet<usize>) -> Result<Permutation> {
    if let Some(&a) = fixing_set.iter().find(|&&a| a > sigma.degree() || sigma.apply(a) != a) {
        return Err(Error::BadFixingSet(format!("σ does not fix {a}")));
    }
    let free: Vec<usize> = (1..=sigma.degree())
        .filter(|a| !fixing_set.contains(a))
        .collect();
    let images: Vec<usize> = free
        .iter()
        .map(|&e| {
            let target = sigma.apply(e);
            free.iter().position(|&f| f == target).expect("σ permutes the free points") + 1
        })
        .collect();
    if images.is_empty() {
        return Err(Error::BadFixingSet("no free points to shuffle".into()));
    }
    Permutation::from_images(&images)
}
