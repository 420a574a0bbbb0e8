//! Brute-force oracles and the statistical checks built on them.

use std::collections::{BTreeMap, BTreeSet};

use itertools::Itertools;
use rayon::prelude::*;

use crate::cards::CardSequence;
use crate::error::{Error, Result};
use crate::grouping::{
    grouping_of_permutation, permutation_satisfies_constraint, run_secure_grouping, Constraint,
    Grouping, PlayerView, RunMode,
};
use crate::perm::Permutation;
use crate::protocols::adversary_view;
use crate::source::{PermutationSource, SeededSource};
use crate::stats::{independence, uniform_goodness_of_fit, ChiSquareResult, Significance};
use crate::table::replay_with;
use crate::transcript::{Event, SecretLog, Transcript};

/// Largest `n` for which all of `S_n` is enumerated.
pub const PERMUTATION_ORACLE_LIMIT: usize = 8;
/// Largest `n` for which set partitions are enumerated.
pub const GROUPING_ORACLE_LIMIT: usize = 10;
/// Minimum expected count per cell in goodness-of-fit tests.
pub const MIN_EXPECTED_FIT: f64 = 20.0;
/// Minimum expected count per cell in independence tests.
pub const MIN_EXPECTED_INDEPENDENCE: f64 = 5.0;
/// Buckets the public transcript is hashed into for independence tests.
pub const TRANSCRIPT_BUCKETS: usize = 6;

/// Every permutation of `1..=n` in lexicographic order of one-line form.
pub fn all_permutations(n: usize) -> Result<Vec<Permutation>> {
    if n > PERMUTATION_ORACLE_LIMIT {
        return Err(Error::TooLargeForOracle {
            n,
            limit: PERMUTATION_ORACLE_LIMIT,
        });
    }
    Ok((1..=n)
        .permutations(n)
        .map(|v| Permutation::from_images(&v).expect("itertools yields permutations"))
        .collect())
}

pub fn enumerate_valid_permutations(c: &Constraint) -> Result<Vec<Permutation>> {
    c.check()?;
    Ok(all_permutations(c.n())?
        .into_iter()
        .filter(|p| permutation_satisfies_constraint(p, c))
        .collect())
}

pub fn enumerate_valid_groupings(c: &Constraint) -> Result<Vec<Grouping>> {
    c.check()?;
    let n = c.n();
    if n > GROUPING_ORACLE_LIMIT {
        return Err(Error::TooLargeForOracle {
            n,
            limit: GROUPING_ORACLE_LIMIT,
        });
    }
    let mut out = Vec::new();
    let mut budget = c.sizes().clone();
    let remaining: Vec<usize> = (1..=n).collect();
    partitions(&remaining, &mut budget, &mut Vec::new(), &mut |groups| {
        let g = Grouping::new(n, groups.iter().cloned()).expect("partition by construction");
        if g.satisfies(c) {
            out.push(g);
        }
    });
    out.sort();
    Ok(out)
}

/// All partitions of `remaining` into blocks whose sizes use up `budget`
/// exactly. The smallest unplaced element always opens the next block.
fn partitions(
    remaining: &[usize],
    budget: &mut BTreeMap<usize, usize>,
    acc: &mut Vec<Vec<usize>>,
    emit: &mut dyn FnMut(&[Vec<usize>]),
) {
    let Some((&first, rest)) = remaining.split_first() else {
        if budget.values().all(|&m| m == 0) {
            emit(acc);
        }
        return;
    };
    let sizes: Vec<usize> = budget
        .iter()
        .filter(|(&k, &m)| m > 0 && k >= 1 && k - 1 <= rest.len())
        .map(|(&k, _)| k)
        .collect();
    for k in sizes {
        *budget.get_mut(&k).expect("listed") -= 1;
        for companions in rest.iter().copied().combinations(k - 1) {
            let mut block = vec![first];
            block.extend(&companions);
            let left: Vec<usize> = rest
                .iter()
                .copied()
                .filter(|x| !companions.contains(x))
                .collect();
            acc.push(block);
            partitions(&left, budget, acc, emit);
            acc.pop();
        }
        *budget.get_mut(&k).expect("listed") += 1;
    }
}

/// Fiber sizes of `π ↦ G[π]` over the constraint-satisfying permutations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EnumerationReport {
    pub constraint: Constraint,
    pub valid_permutations: usize,
    pub valid_groupings: usize,
    pub fiber_sizes: BTreeMap<Grouping, usize>,
    /// Whether the image of the valid permutations is exactly the set of
    /// enumerated valid groupings.
    pub support_matches: bool,
}

impl EnumerationReport {
    pub fn fibers_equal(&self) -> bool {
        self.fiber_sizes.values().all_equal()
    }

    /// The common fiber size, if all fibers agree.
    pub fn fiber_size(&self) -> Option<usize> {
        if self.fibers_equal() {
            self.fiber_sizes.values().next().copied()
        } else {
            None
        }
    }

    pub fn render(&self) -> String {
        let mut s = format!(
            "[enumerate]\nconstraint = {}\nvalid_permutations = {}\nvalid_groupings = {}\nfibers_equal = {}\nsupport_matches = {}\n",
            self.constraint,
            self.valid_permutations,
            self.valid_groupings,
            self.fibers_equal(),
            self.support_matches
        );
        for (g, size) in &self.fiber_sizes {
            s += &format!("fiber {g} = {size}\n");
        }
        s
    }
}

pub fn fiber_report(c: &Constraint) -> Result<EnumerationReport> {
    let perms = enumerate_valid_permutations(c)?;
    let groupings: BTreeSet<Grouping> = enumerate_valid_groupings(c)?.into_iter().collect();
    let mut fiber_sizes: BTreeMap<Grouping, usize> = BTreeMap::new();
    for p in &perms {
        *fiber_sizes.entry(grouping_of_permutation(p)).or_insert(0) += 1;
    }
    let image: BTreeSet<&Grouping> = fiber_sizes.keys().collect();
    let support_ok = image.len() == groupings.len() && image.iter().all(|g| groupings.contains(g));
    Ok(EnumerationReport {
        constraint: c.clone(),
        valid_permutations: perms.len(),
        valid_groupings: groupings.len(),
        fiber_sizes,
        support_matches: support_ok,
    })
}

/// One protocol run reduced to what the analyses need.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupingTrial {
    pub views: Vec<PlayerView>,
    /// Permutations shown by the rows opened during the run.
    pub opened: Vec<Permutation>,
    /// `G[ρ]`, reconstructed from the secret log.
    pub grouping: Grouping,
}

/// `trials` independent seeded runs; trial `t` uses stream `t` of `seed`.
/// Results are in trial order regardless of scheduling.
pub fn collect_trials(c: &Constraint, seed: u64, trials: usize) -> Result<Vec<GroupingTrial>> {
    collect_trials_with(c, trials, |t| SeededSource::stream(seed, t))
}

pub fn collect_trials_with<S, F>(c: &Constraint, trials: usize, source: F) -> Result<Vec<GroupingTrial>>
where
    S: PermutationSource + 'static,
    F: Fn(u64) -> S + Sync,
{
    (0..trials as u64)
        .into_par_iter()
        .map(|t| {
            let run = run_secure_grouping(c, source(t), RunMode::Verify)?;
            let opened = adversary_view(&run.transcript)?;
            let grouping = run
                .verification
                .expect("verify mode reconstructs the grouping")
                .grouping;
            Ok(GroupingTrial {
                views: run.views,
                opened,
                grouping,
            })
        })
        .collect()
}

/// Goodness of fit of sampled groupings against the uniform distribution on
/// the oracle's valid groupings.
pub fn uniformity_test(
    samples: &[Grouping],
    c: &Constraint,
    significance: Significance,
) -> Result<ChiSquareResult> {
    let cells = enumerate_valid_groupings(c)?;
    let index: BTreeMap<&Grouping, usize> = cells.iter().enumerate().map(|(i, g)| (g, i)).collect();
    let mut counts = vec![0u64; cells.len()];
    for s in samples {
        let i = index
            .get(s)
            .ok_or_else(|| Error::OutsideSupport(s.to_string()))?;
        counts[*i] += 1;
    }
    uniform_goodness_of_fit(&counts, significance, MIN_EXPECTED_FIT)
}

/// Lexicographic rank of a permutation's one-line form (Lehmer code).
pub fn lex_rank(p: &Permutation) -> u64 {
    let images = p.images();
    let n = images.len();
    let mut rank = 0u64;
    for i in 0..n {
        let smaller_later = images[i + 1..].iter().filter(|&&v| v < images[i]).count() as u64;
        rank = rank * (n - i) as u64 + smaller_later;
    }
    rank
}

/// Hashes the opened sequences of a run into one of `buckets` classes.
pub fn transcript_bucket(opened: &[Permutation], buckets: usize) -> usize {
    let h = opened
        .iter()
        .enumerate()
        .fold(0u64, |acc, (j, p)| acc.wrapping_add((j as u64 + 1).wrapping_mul(lex_rank(p))));
    (h % buckets as u64) as usize
}

fn observer_view(t: &GroupingTrial, observer: usize) -> Result<&PlayerView> {
    observer
        .checked_sub(1)
        .and_then(|i| t.views.get(i))
        .ok_or_else(|| Error::Parse(format!("no player {observer}")))
}

/// Stratified independence test: within each value of the observer's own
/// view, is the transcript bucket independent of how the other players are
/// grouped? Per-stratum statistics are summed.
pub fn transcript_independence_test(
    trials: &[GroupingTrial],
    c: &Constraint,
    observer: usize,
    significance: Significance,
) -> Result<ChiSquareResult> {
    transcript_independence_test_with(trials, c, observer, significance, TRANSCRIPT_BUCKETS)
}

pub fn transcript_independence_test_with(
    trials: &[GroupingTrial],
    c: &Constraint,
    observer: usize,
    significance: Significance,
    buckets: usize,
) -> Result<ChiSquareResult> {
    if trials.len() < 2 {
        return Err(Error::InsufficientSamples(format!("{} trial(s)", trials.len())));
    }
    let mut strata: BTreeMap<Vec<usize>, BTreeMap<usize, BTreeMap<String, u64>>> = BTreeMap::new();
    for t in trials {
        if t.grouping.n() != c.n() {
            return Err(Error::OutsideSupport(t.grouping.to_string()));
        }
        let view = observer_view(t, observer)?;
        let bucket = transcript_bucket(&t.opened, buckets);
        *strata
            .entry(view.picked.clone())
            .or_default()
            .entry(bucket)
            .or_default()
            .entry(t.grouping.rest_key(observer))
            .or_insert(0) += 1;
    }
    let mut parts = Vec::new();
    for rows in strata.values() {
        let cols: BTreeSet<&String> = rows.values().flat_map(|r| r.keys()).collect();
        if cols.len() < 2 {
            continue;
        }
        let table: Vec<Vec<u64>> = rows
            .values()
            .map(|r| cols.iter().map(|k| r.get(*k).copied().unwrap_or(0)).collect())
            .collect();
        parts.push(independence(&table, significance, MIN_EXPECTED_INDEPENDENCE)?);
    }
    ChiSquareResult::combine(&parts, significance)
}

/// Within each value of the observer's view, are the groupings of the other
/// players uniform over every oracle grouping consistent with that view?
pub fn conditional_uniformity_test(
    trials: &[GroupingTrial],
    c: &Constraint,
    observer: usize,
    significance: Significance,
) -> Result<ChiSquareResult> {
    if trials.len() < 2 {
        return Err(Error::InsufficientSamples(format!("{} trial(s)", trials.len())));
    }
    let support = enumerate_valid_groupings(c)?;
    // observer's picks -> (observer's group, counts of the rest)
    type Stratum = (BTreeSet<usize>, BTreeMap<String, u64>);
    let mut strata: BTreeMap<Vec<usize>, Stratum> = BTreeMap::new();
    for t in trials {
        let view = observer_view(t, observer)?;
        let entry = strata
            .entry(view.picked.clone())
            .or_insert_with(|| (view.group.clone(), BTreeMap::new()));
        *entry.1.entry(t.grouping.rest_key(observer)).or_insert(0) += 1;
    }
    let mut parts = Vec::new();
    for (group, seen) in strata.values() {
        let cells: Vec<String> = support
            .iter()
            .filter(|g| {
                g.group_of(observer)
                    .is_some_and(|a| a.iter().copied().collect::<BTreeSet<_>>() == *group)
            })
            .map(|g| g.rest_key(observer))
            .collect();
        if let Some(stray) = seen.keys().find(|k| !cells.contains(k)) {
            return Err(Error::OutsideSupport(stray.clone()));
        }
        if cells.len() < 2 {
            continue;
        }
        let counts: Vec<u64> = cells.iter().map(|k| seen.get(k).copied().unwrap_or(0)).collect();
        parts.push(uniform_goodness_of_fit(&counts, significance, MIN_EXPECTED_FIT)?);
    }
    ChiSquareResult::combine(&parts, significance)
}

/// Exact number of cards one run uses, against the rough `3dn` estimate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CardCount {
    pub max_group_size: usize,
    pub cards: usize,
    pub bound: usize,
}

impl CardCount {
    pub fn within_bound(&self) -> bool {
        self.cards <= self.bound
    }
}

/// `2(d-1)n` cards: the randomizing protocol over `d-1` inputs lays out
/// `2(d-1)` rows of `n` cards (fixed cards included).
pub fn card_count(c: &Constraint) -> Result<CardCount> {
    c.check()?;
    let d = c.max_group_size();
    let n = c.n();
    Ok(CardCount {
        max_group_size: d,
        cards: 2 * d.saturating_sub(1) * n,
        bound: 3 * d * n,
    })
}

/// Replays a run and checks that every value the transcript discloses is
/// face up on the table right after the disclosing event.
pub fn audit_transcript(
    transcript: &Transcript,
    secret_log: &SecretLog,
    hidden_inputs: &[CardSequence],
    degree: usize,
) -> Result<()> {
    let leak = |what: String| Error::ReplayDiverged(format!("disclosure of hidden value: {what}"));
    replay_with(transcript, secret_log, hidden_inputs, degree, |table, event| {
        match event {
            Event::RowsCreated {
                rows,
                fronts: Some(fronts),
                ..
            } => {
                for &r in rows {
                    let seq = table.row(r)?;
                    if !seq.all_up() || &seq.values() != fronts {
                        return Err(leak(event.to_string()));
                    }
                }
            }
            Event::Inserted {
                rows,
                columns,
                values,
            } => {
                for &r in rows {
                    let seq = table.row(r)?;
                    for (c, v) in columns.iter().zip(values) {
                        let card = seq.card(*c).ok_or_else(|| leak(event.to_string()))?;
                        if !card.is_up() || card.value != *v {
                            return Err(leak(event.to_string()));
                        }
                    }
                }
            }
            Event::Opened { row, values } => {
                let seq = table.row(*row)?;
                if !seq.all_up() || &seq.values() != values {
                    return Err(leak(event.to_string()));
                }
            }
            _ => {}
        }
        Ok(())
    })
    .map(|_| ())
}
