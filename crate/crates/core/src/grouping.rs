//! Constrained secure grouping.
//!
//! A constraint fixes how many groups of each size exist (`sizes`, written
//! `(M(1), M(2), …)`) and which index sets must share a group of a given
//! size (`together`). Group sizes weight the count: `Σ_k k·M(k) = n`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::error::{Error, Result};
use crate::perm::Permutation;
use crate::protocols::{permutation_randomizing, RandomizingSpec, SIGMA_LABEL};
use crate::source::{PermutationSource, SeededSource};
use crate::table::Table;
use crate::transcript::{SecretLog, Transcript};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Constraint {
    n: usize,
    sizes: BTreeMap<usize, usize>,
    together: BTreeMap<usize, Vec<Vec<usize>>>,
}

/// One violated condition of a constraint.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    EmptyIndexSet,
    ZeroGroupSize,
    SizeSum { n: usize, total: usize },
    EmptySet { k: usize },
    SetTooLarge { k: usize, set: Vec<usize> },
    OutOfRange { k: usize, set: Vec<usize> },
    NotIncreasing { k: usize, set: Vec<usize> },
    Overlap { first: Vec<usize>, second: Vec<usize> },
    TooManySets { k: usize, sets: usize, groups: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::EmptyIndexSet => write!(f, "n must be at least 1"),
            Violation::ZeroGroupSize => write!(f, "group size 0 is not allowed"),
            Violation::SizeSum { n, total } => {
                write!(f, "group sizes cover {total} indices, expected n = {n}")
            }
            Violation::EmptySet { k } => write!(f, "empty set in C[{k}]"),
            Violation::SetTooLarge { k, set } => {
                write!(f, "set {} has more than {k} elements", set_str(set))
            }
            Violation::OutOfRange { k, set } => {
                write!(f, "set {} in C[{k}] has an index outside 1..=n", set_str(set))
            }
            Violation::NotIncreasing { k, set } => {
                write!(f, "set {} in C[{k}] is not written in increasing order", set_str(set))
            }
            Violation::Overlap { first, second } => write!(
                f,
                "sets {} and {} are not disjoint",
                set_str(first),
                set_str(second)
            ),
            Violation::TooManySets { k, sets, groups } => {
                write!(f, "C[{k}] has {sets} sets but only {groups} groups of size {k}")
            }
        }
    }
}

pub(crate) fn set_str(s: &[usize]) -> String {
    let parts: Vec<String> = s.iter().map(|x| x.to_string()).collect();
    format!("{{{}}}", parts.join(","))
}

impl Constraint {
    /// Stores a constraint without checking it; see [`Constraint::validate`].
    pub fn new(
        n: usize,
        sizes: impl IntoIterator<Item = (usize, usize)>,
        together: impl IntoIterator<Item = (usize, Vec<usize>)>,
    ) -> Constraint {
        let mut s = BTreeMap::new();
        for (k, m) in sizes {
            if m > 0 || k == 0 {
                *s.entry(k).or_insert(0) += m;
            }
        }
        let mut t: BTreeMap<usize, Vec<Vec<usize>>> = BTreeMap::new();
        for (k, set) in together {
            t.entry(k).or_default().push(set);
        }
        Constraint {
            n,
            sizes: s,
            together: t,
        }
    }

    /// From the tuple form `(M(1), M(2), …)` with no together-sets.
    pub fn from_tuple(n: usize, sizes: &[usize]) -> Constraint {
        Constraint::new(n, sizes.iter().enumerate().map(|(i, &m)| (i + 1, m)), [])
    }

    /// Adds a together-set to `C[k]`.
    pub fn with_set(mut self, k: usize, set: Vec<usize>) -> Constraint {
        self.together.entry(k).or_default().push(set);
        self
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `M(k)`.
    pub fn groups_of_size(&self, k: usize) -> usize {
        self.sizes.get(&k).copied().unwrap_or(0)
    }

    pub fn sizes(&self) -> &BTreeMap<usize, usize> {
        &self.sizes
    }

    /// `C[k]` as given.
    pub fn sets(&self, k: usize) -> &[Vec<usize>] {
        self.together.get(&k).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn together(&self) -> &BTreeMap<usize, Vec<Vec<usize>>> {
        &self.together
    }

    pub fn has_sets(&self) -> bool {
        self.together.values().any(|v| !v.is_empty())
    }

    /// Largest `k` with `M(k) > 0`; 0 for an empty size map.
    pub fn max_group_size(&self) -> usize {
        self.sizes
            .iter()
            .filter(|(_, &m)| m > 0)
            .map(|(&k, _)| k)
            .max()
            .unwrap_or(0)
    }

    /// Tuple form `(M(1),…,M(k))`.
    pub fn sizes_tuple(&self) -> String {
        let k = self.max_group_size();
        let parts: Vec<String> = (1..=k).map(|i| self.groups_of_size(i).to_string()).collect();
        format!("({})", parts.join(","))
    }

    /// Every violated condition, in a stable order. Empty means valid.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        if self.n == 0 {
            out.push(Violation::EmptyIndexSet);
        }
        if self.sizes.contains_key(&0) || self.together.contains_key(&0) {
            out.push(Violation::ZeroGroupSize);
        }
        let total: usize = self.sizes.iter().map(|(k, m)| k * m).sum();
        if total != self.n {
            out.push(Violation::SizeSum { n: self.n, total });
        }
        let mut seen: Vec<&Vec<usize>> = Vec::new();
        for (&k, sets) in &self.together {
            for set in sets {
                if set.is_empty() {
                    out.push(Violation::EmptySet { k });
                    continue;
                }
                if set.len() > k {
                    out.push(Violation::SetTooLarge { k, set: set.clone() });
                }
                if set.iter().any(|&a| a == 0 || a > self.n) {
                    out.push(Violation::OutOfRange { k, set: set.clone() });
                }
                if set.windows(2).any(|w| w[0] >= w[1]) {
                    out.push(Violation::NotIncreasing { k, set: set.clone() });
                }
                for prev in &seen {
                    if prev.iter().any(|a| set.contains(a)) {
                        out.push(Violation::Overlap {
                            first: (*prev).clone(),
                            second: set.clone(),
                        });
                    }
                }
                seen.push(set);
            }
            let groups = self.groups_of_size(k);
            if sets.len() > groups {
                out.push(Violation::TooManySets {
                    k,
                    sets: sets.len(),
                    groups,
                });
            }
        }
        out
    }

    pub fn check(&self) -> Result<()> {
        let v = self.validate();
        if v.is_empty() {
            Ok(())
        } else {
            Err(Error::BadConstraint(v))
        }
    }
}

impl fmt::Display for Constraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "n={} M={}", self.n, self.sizes_tuple())?;
        for (k, sets) in &self.together {
            for s in sets {
                write!(f, " C[{k}]={}", set_str(s))?;
            }
        }
        Ok(())
    }
}

pub fn validate_constraint(c: &Constraint) -> std::result::Result<(), Vec<Violation>> {
    let v = c.validate();
    if v.is_empty() {
        Ok(())
    } else {
        Err(v)
    }
}

/// `I`: the union of all together-sets.
pub fn fixing_set(c: &Constraint) -> BTreeSet<usize> {
    c.together.values().flatten().flatten().copied().collect()
}

/// A partition of `{1..n}`, kept canonical: members ascending, groups
/// ordered by their smallest member.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Grouping {
    groups: Vec<Vec<usize>>,
}

impl Grouping {
    pub fn new(n: usize, groups: impl IntoIterator<Item = Vec<usize>>) -> Result<Grouping> {
        let mut gs: Vec<Vec<usize>> = groups
            .into_iter()
            .map(|mut g| {
                g.sort_unstable();
                g
            })
            .collect();
        if gs.iter().any(Vec::is_empty) {
            return Err(Error::Parse("empty group".into()));
        }
        gs.sort();
        let mut all: Vec<usize> = gs.iter().flatten().copied().collect();
        all.sort_unstable();
        if all != (1..=n).collect::<Vec<_>>() {
            return Err(Error::Parse(format!("groups do not partition 1..={n}")));
        }
        Ok(Grouping { groups: gs })
    }

    pub fn groups(&self) -> &[Vec<usize>] {
        &self.groups
    }

    pub fn n(&self) -> usize {
        self.groups.iter().map(Vec::len).sum()
    }

    /// `A[P]`: the group containing `member`.
    pub fn group_of(&self, member: usize) -> Option<&[usize]> {
        self.groups
            .iter()
            .find(|g| g.contains(&member))
            .map(Vec::as_slice)
    }

    /// Groups of size `k`.
    pub fn of_size(&self, k: usize) -> impl Iterator<Item = &Vec<usize>> {
        self.groups.iter().filter(move |g| g.len() == k)
    }

    /// The grouping with `member`'s group removed, rendered canonically.
    pub fn rest_key(&self, member: usize) -> String {
        let rest: Vec<String> = self
            .groups
            .iter()
            .filter(|g| !g.contains(&member))
            .map(|g| join(g))
            .collect();
        rest.join("|")
    }

    /// Whether the partition meets the constraint: `M(k)` groups of size `k`,
    /// every together-set inside one group of its size, distinct sets in
    /// distinct groups.
    pub fn satisfies(&self, c: &Constraint) -> bool {
        if self.n() != c.n() {
            return false;
        }
        let mut by_size: BTreeMap<usize, usize> = BTreeMap::new();
        for g in &self.groups {
            *by_size.entry(g.len()).or_insert(0) += 1;
        }
        if by_size != *c.sizes() {
            return false;
        }
        let mut used: BTreeSet<usize> = BTreeSet::new();
        for (&k, sets) in c.together() {
            for set in sets {
                let Some(first) = set.first() else { return false };
                let Some(idx) = self.groups.iter().position(|g| g.contains(first)) else {
                    return false;
                };
                let g = &self.groups[idx];
                if g.len() != k || !set.iter().all(|a| g.contains(a)) || !used.insert(idx) {
                    return false;
                }
            }
        }
        true
    }

    /// What the players learn jointly: the distinct groups of their views.
    pub fn from_views(views: &[PlayerView]) -> Result<Grouping> {
        let groups: BTreeSet<Vec<usize>> = views.iter().map(|v| v.group.iter().copied().collect()).collect();
        Grouping::new(views.len(), groups)
    }
}

fn join(g: &[usize]) -> String {
    g.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

impl fmt::Display for Grouping {
    /// `1,5|2,3,6|4`
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.groups.iter().map(|g| join(g)).collect();
        f.write_str(&parts.join("|"))
    }
}

/// `G[π]`: the cyclic areas of `π`, fixed points included.
pub fn grouping_of_permutation(pi: &Permutation) -> Grouping {
    let groups = pi
        .decompose()
        .cycles()
        .iter()
        .map(|c| c.elements().to_vec())
        .collect::<Vec<_>>();
    Grouping::new(pi.degree(), groups).expect("cycles partition 1..=n")
}

/// Whether `π` has the constraint's cycle type and threads every
/// together-set `{a_1 < … < a_h}` of `C[k]` consecutively (`π(a_j) = a_{j+1}`)
/// through its own length-`k` cycle.
pub fn permutation_satisfies_constraint(pi: &Permutation, c: &Constraint) -> bool {
    if pi.degree() != c.n() {
        return false;
    }
    if pi.cycle_type().multiplicities() != c.sizes() {
        return false;
    }
    let decomposition = pi.decompose();
    let cycle_of = |a: usize| {
        decomposition
            .cycles()
            .iter()
            .position(|cy| cy.elements().contains(&a))
    };
    let mut used = BTreeSet::new();
    for (&k, sets) in c.together() {
        for set in sets {
            let Some(&first) = set.first() else { return false };
            let Some(idx) = cycle_of(first) else { return false };
            if decomposition.cycles()[idx].len() != k || !used.insert(idx) {
                return false;
            }
            if set.windows(2).any(|w| pi.apply(w[0]) != w[1]) {
                return false;
            }
        }
    }
    true
}

/// `τ` for a constraint without together-sets: consecutive blocks
/// `(a_{i-1}+(j-1)i+1 … a_{i-1}+ji)` with `a_i = a_{i-1} + i·M(i)`.
pub fn precompute_tau_simple(n: usize, sizes: &[usize]) -> Result<Permutation> {
    let c = Constraint::from_tuple(n, sizes);
    c.check()?;
    let mut cycles: Vec<Vec<usize>> = Vec::new();
    let mut offset = 0;
    for (idx, &m) in sizes.iter().enumerate() {
        let len = idx + 1;
        for j in 0..m {
            let start = offset + j * len + 1;
            cycles.push((start..start + len).collect());
        }
        offset += len * m;
    }
    Permutation::from_cycles(n, &cycles)
}

/// State after one step of the general `τ` pre-computation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TauStep {
    /// `None` for the initial state.
    pub position: Option<(usize, usize)>,
    /// Cycles of `τ` so far, each as written (together-set first).
    pub cycles: Vec<Vec<usize>>,
    /// Together-sets not yet consumed, per group size `1..=k`.
    pub remaining: BTreeMap<usize, Vec<Vec<usize>>>,
    /// The pool `B` of unassigned free indices.
    pub pool: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TauComputation {
    pub tau: Permutation,
    pub cycles: Vec<Vec<usize>>,
    pub trace: Vec<TauStep>,
    n: usize,
}

impl TauComputation {
    /// One line per trace step, e.g.
    /// `(λ = 2, μ = 1) τ = (8 3), C_1 = ∅, C_2 = ∅, C_3 = {{9}}, B = {4,5,6,7}`.
    pub fn render_trace(&self) -> Vec<String> {
        self.trace.iter().map(|s| self.render_step(s)).collect()
    }

    fn render_step(&self, s: &TauStep) -> String {
        let head = match s.position {
            None => "(Initialize)".to_string(),
            Some((l, m)) => format!("(λ = {l}, μ = {m})"),
        };
        let nontrivial: String = s
            .cycles
            .iter()
            .filter(|c| c.len() > 1)
            .map(|c| written_cycle(c))
            .collect();
        let tau = match (nontrivial.is_empty(), s.cycles.last()) {
            (false, _) => nontrivial,
            (true, Some(last)) => format!("{} = id_{}", written_cycle(last), self.n),
            (true, None) => format!("id_{}", self.n),
        };
        let sets: Vec<String> = s
            .remaining
            .iter()
            .map(|(k, v)| {
                if v.is_empty() {
                    format!("C_{k} = ∅")
                } else {
                    let inner: Vec<String> = v.iter().map(|x| set_str(x)).collect();
                    format!("C_{k} = {{{}}}", inner.join(","))
                }
            })
            .collect();
        let pool = if s.pool.is_empty() {
            "∅".to_string()
        } else {
            set_str(&s.pool)
        };
        format!("{head} τ = {tau}, {}, B = {pool}", sets.join(", "))
    }
}

fn written_cycle(c: &[usize]) -> String {
    let parts: Vec<String> = c.iter().map(|x| x.to_string()).collect();
    format!("({})", parts.join(" "))
}

/// General pre-computation: for each size `λ` and each of its `M(λ)` groups,
/// consume the together-set of `C_λ` with the smallest element if one is
/// left and pad it with the smallest pool indices, else take `λ` indices
/// from the pool.
pub fn precompute_tau_general(c: &Constraint) -> Result<TauComputation> {
    c.check()?;
    let n = c.n();
    let k = c.max_group_size();
    let mut remaining: BTreeMap<usize, Vec<Vec<usize>>> = (1..=k)
        .map(|l| {
            let mut sets = c.sets(l).to_vec();
            sets.sort_by_key(|s| s[0]);
            (l, sets)
        })
        .collect();
    let fixed = fixing_set(c);
    let mut pool: BTreeSet<usize> = (1..=n).filter(|a| !fixed.contains(a)).collect();
    let mut cycles: Vec<Vec<usize>> = Vec::new();
    let mut trace = vec![TauStep {
        position: None,
        cycles: cycles.clone(),
        remaining: remaining.clone(),
        pool: pool.iter().copied().collect(),
    }];

    for lambda in 1..=k {
        for mu in 1..=c.groups_of_size(lambda) {
            let sets = remaining.get_mut(&lambda).expect("initialised for 1..=k");
            let mut cycle = if sets.is_empty() {
                Vec::new()
            } else {
                sets.remove(0)
            };
            let need = lambda - cycle.len();
            let taken: Vec<usize> = pool.iter().copied().take(need).collect();
            debug_assert_eq!(taken.len(), need, "valid constraints never run the pool dry");
            for b in &taken {
                pool.remove(b);
            }
            cycle.extend(taken);
            cycles.push(cycle);
            trace.push(TauStep {
                position: Some((lambda, mu)),
                cycles: cycles.clone(),
                remaining: remaining.clone(),
                pool: pool.iter().copied().collect(),
            });
        }
    }
    let tau = Permutation::from_cycles(n, &cycles)?;
    Ok(TauComputation {
        tau,
        cycles,
        trace,
        n,
    })
}

/// What player `i` holds after the protocol.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PlayerView {
    pub player: usize,
    /// Fronts of the `i`-th card of the rows for `ρ, ρ², …, ρ^{k-1}`.
    pub picked: Vec<usize>,
    pub group: BTreeSet<usize>,
}

impl PlayerView {
    pub fn new(player: usize, picked: Vec<usize>) -> PlayerView {
        let mut group: BTreeSet<usize> = picked.iter().copied().collect();
        group.insert(player);
        PlayerView {
            player,
            picked,
            group,
        }
    }

    /// The other members of the group.
    pub fn partners(&self) -> Vec<usize> {
        self.group
            .iter()
            .copied()
            .filter(|&m| m != self.player)
            .collect()
    }
}

impl fmt::Display for PlayerView {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let g: Vec<usize> = self.group.iter().copied().collect();
        write!(f, "Player {}: group {}", self.player, set_str(&g))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RunMode {
    /// Also reconstruct the hidden `σ`, `ρ` and `G[ρ]` for checking.
    #[default]
    Verify,
    /// Player views and the public transcript only.
    Strict,
}

/// Hidden values of a run, reconstructed from the secret log.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verification {
    pub tau: Permutation,
    pub sigma: Permutation,
    pub rho: Permutation,
    pub grouping: Grouping,
    pub secret_log: SecretLog,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupingRun {
    pub views: Vec<PlayerView>,
    pub transcript: Transcript,
    pub verification: Option<Verification>,
}

impl GroupingRun {
    pub fn view(&self, player: usize) -> Option<&PlayerView> {
        player.checked_sub(1).and_then(|i| self.views.get(i))
    }
}

/// Runs the secure grouping protocol for `c`, drawing every hidden
/// permutation from `source`.
pub fn run_secure_grouping(
    c: &Constraint,
    source: impl PermutationSource + 'static,
    mode: RunMode,
) -> Result<GroupingRun> {
    let pre = precompute_tau_general(c)?;
    let n = c.n();
    let k = c.max_group_size();

    if k <= 1 {
        let views = (1..=n).map(|i| PlayerView::new(i, Vec::new())).collect();
        let verification = (mode == RunMode::Verify).then(|| Verification {
            tau: pre.tau.clone(),
            sigma: Permutation::identity(n),
            rho: pre.tau.clone(),
            grouping: grouping_of_permutation(&pre.tau),
            secret_log: SecretLog::default(),
        });
        return Ok(GroupingRun {
            views,
            transcript: Transcript::new(),
            verification,
        });
    }

    let inputs: Vec<Permutation> = (1..k as u32).map(|j| pre.tau.power(j)).collect();
    let spec = RandomizingSpec::new(n, inputs, fixing_set(c));
    let mut table = Table::new(n, source);
    let rows = permutation_randomizing(&mut table, &spec)?;

    let views = (1..=n)
        .map(|i| {
            let picked = rows
                .iter()
                .map(|&r| table.private_pick(r, i))
                .collect::<Result<Vec<_>>>()?;
            Ok(PlayerView::new(i, picked))
        })
        .collect::<Result<Vec<_>>>()?;

    let (transcript, secret_log) = table.into_logs();
    let verification = match mode {
        RunMode::Strict => None,
        RunMode::Verify => {
            let sigma = secret_log
                .derived(SIGMA_LABEL)
                .cloned()
                .expect("randomizing protocol logs σ");
            let rho = pre.tau.conjugate_by_relabeling(&sigma)?;
            Some(Verification {
                tau: pre.tau,
                grouping: grouping_of_permutation(&rho),
                sigma,
                rho,
                secret_log,
            })
        }
    };
    Ok(GroupingRun {
        views,
        transcript,
        verification,
    })
}

/// [`run_secure_grouping`] with a ChaCha source seeded from `seed`.
pub fn run_seeded(c: &Constraint, seed: u64, mode: RunMode) -> Result<GroupingRun> {
    run_secure_grouping(c, SeededSource::new(seed), mode)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cyc(n: usize, s: &str) -> Permutation {
        Permutation::parse(s, Some(n)).unwrap()
    }

    fn pinned_triples() -> Constraint {
        Constraint::from_tuple(9, &[0, 0, 3])
            .with_set(3, vec![1])
            .with_set(3, vec![8, 9])
    }

    fn werewolf_roles() -> Constraint {
        Constraint::from_tuple(9, &[2, 2, 1])
            .with_set(2, vec![8])
            .with_set(3, vec![9])
    }

    #[test]
    fn validation_examples() {
        assert_eq!(validate_constraint(&pinned_triples()), Ok(()));
        assert_eq!(validate_constraint(&Constraint::from_tuple(5, &[3, 1])), Ok(()));
        assert_eq!(
            validate_constraint(&Constraint::from_tuple(4, &[0, 1])),
            Err(vec![Violation::SizeSum { n: 4, total: 2 }])
        );
    }

    #[test]
    fn validation_catches_each_condition() {
        let c = Constraint::from_tuple(6, &[0, 3])
            .with_set(2, vec![1, 2, 3])
            .with_set(2, vec![3, 4])
            .with_set(2, vec![6, 5])
            .with_set(2, vec![7]);
        let v = c.validate();
        assert!(v.contains(&Violation::SetTooLarge { k: 2, set: vec![1, 2, 3] }));
        assert!(v.contains(&Violation::Overlap { first: vec![1, 2, 3], second: vec![3, 4] }));
        assert!(v.contains(&Violation::NotIncreasing { k: 2, set: vec![6, 5] }));
        assert!(v.contains(&Violation::OutOfRange { k: 2, set: vec![7] }));
        assert!(v.contains(&Violation::TooManySets { k: 2, sets: 4, groups: 3 }));
        let empty = Constraint::from_tuple(2, &[2]).with_set(1, vec![]);
        assert_eq!(empty.validate(), vec![Violation::EmptySet { k: 1 }]);
        assert!(matches!(precompute_tau_general(&c), Err(Error::BadConstraint(_))));
    }

    #[test]
    fn fixing_set_examples() {
        assert_eq!(fixing_set(&werewolf_roles()), [8, 9].into());
        assert!(fixing_set(&Constraint::from_tuple(5, &[3, 1])).is_empty());
        assert_eq!(fixing_set(&pinned_triples()), [1, 8, 9].into());
    }

    #[test]
    fn tau_simple_examples() {
        assert_eq!(
            precompute_tau_simple(11, &[3, 2, 0, 1]).unwrap(),
            cyc(11, "(4 5)(6 7)(8 9 10 11)")
        );
        assert!(precompute_tau_simple(5, &[5]).unwrap().is_identity());
        assert_eq!(precompute_tau_simple(4, &[0, 2]).unwrap(), cyc(4, "(1 2)(3 4)"));
        assert!(precompute_tau_simple(4, &[0, 1]).is_err());
    }

    #[test]
    fn tau_general_examples() {
        let pre = precompute_tau_general(&werewolf_roles()).unwrap();
        assert_eq!(pre.cycles.iter().filter(|c| c.len() > 1).cloned().collect::<Vec<_>>(),
            vec![vec![8, 3], vec![4, 5], vec![9, 6, 7]]);
        assert_eq!(pre.tau, cyc(9, "(8 3)(4 5)(9 6 7)"));

        let simple = Constraint::from_tuple(11, &[3, 2, 0, 1]);
        assert_eq!(
            precompute_tau_general(&simple).unwrap().tau,
            precompute_tau_simple(11, &[3, 2, 0, 1]).unwrap()
        );

        let pinned = Constraint::from_tuple(3, &[1, 1]).with_set(2, vec![1, 3]);
        assert_eq!(precompute_tau_general(&pinned).unwrap().tau, cyc(3, "(1 3)"));
    }

    #[test]
    fn tau_general_consumes_sets_by_smallest_element() {
        let c = Constraint::from_tuple(6, &[0, 3]).with_set(2, vec![5]).with_set(2, vec![2]);
        let pre = precompute_tau_general(&c).unwrap();
        assert_eq!(pre.cycles, vec![vec![2, 1], vec![5, 3], vec![4, 6]]);
        assert!(permutation_satisfies_constraint(&pre.tau, &c));
    }

    #[test]
    fn grouping_of_permutation_examples() {
        let g = grouping_of_permutation(&cyc(6, "(1 5)(4)(2 6 3)"));
        assert_eq!(g.to_string(), "1,5|2,3,6|4");
        assert_eq!(g.groups().len(), 3);
        let id = grouping_of_permutation(&Permutation::identity(3));
        assert_eq!(id.to_string(), "1|2|3");
        let rho = grouping_of_permutation(&cyc(11, "(1 9 7 4)(2 3)(5 11)"));
        assert_eq!(rho.to_string(), "1,4,7,9|2,3|5,11|6|8|10");
    }

    #[test]
    fn satisfies_examples() {
        let c3 = werewolf_roles();
        let tau = precompute_tau_general(&c3).unwrap().tau;
        assert!(permutation_satisfies_constraint(&tau, &c3));
        assert!(!permutation_satisfies_constraint(
            &Permutation::identity(4),
            &Constraint::from_tuple(4, &[0, 2])
        ));
        assert!(permutation_satisfies_constraint(&cyc(9, "(8 3)(4 5)(9 7 6)"), &c3));
        // 9 in a 2-cycle and 8 in the 3-cycle
        assert!(!permutation_satisfies_constraint(&cyc(9, "(9 3)(4 5)(8 6 7)"), &c3));
    }

    #[test]
    fn satisfies_requires_order_and_separate_cycles() {
        let c = Constraint::from_tuple(3, &[0, 0, 1]).with_set(3, vec![1, 2]);
        assert!(permutation_satisfies_constraint(&cyc(3, "(1 2 3)"), &c));
        assert!(!permutation_satisfies_constraint(&cyc(3, "(1 3 2)"), &c));

        let c = Constraint::from_tuple(6, &[0, 0, 2]).with_set(3, vec![1]).with_set(3, vec![2]);
        assert!(!permutation_satisfies_constraint(&cyc(6, "(1 2 3)(4 5 6)"), &c));
        assert!(permutation_satisfies_constraint(&cyc(6, "(1 3 4)(2 5 6)"), &c));
    }

    #[test]
    fn grouping_satisfies() {
        let g = Grouping::new(9, [vec![1, 4, 6], vec![2, 5, 7], vec![3, 8, 9]]).unwrap();
        assert!(g.satisfies(&pinned_triples()));
        let bad = Grouping::new(9, [vec![1, 8, 9], vec![2, 5, 7], vec![3, 4, 6]]).unwrap();
        assert!(!bad.satisfies(&pinned_triples()));
        assert!(Grouping::new(3, [vec![1, 2]]).is_err());
    }

    #[test]
    fn worked_example_views() {
        let c = Constraint::from_tuple(11, &[3, 2, 0, 1]);
        let sigma = cyc(11, "(1 8)(2 6 3 7 10)(4 11)");
        let src = crate::source::ScriptedSource::new([sigma.clone()]).with_fallback(1);
        let run = run_secure_grouping(&c, src, RunMode::Verify).unwrap();
        assert_eq!(run.view(3).unwrap().picked, vec![2, 3, 2]);
        assert_eq!(run.view(3).unwrap().group, [2, 3].into());
        assert_eq!(run.view(4).unwrap().picked, vec![7, 9, 1]);
        assert_eq!(run.view(4).unwrap().to_string(), "Player 4: group {1,4,7,9}");
        let v = run.verification.unwrap();
        assert_eq!(v.sigma, sigma);
        assert_eq!(v.rho, cyc(11, "(1 9 7 4)(2 3)(5 11)"));
    }

    #[test]
    fn degenerate_all_singletons() {
        let c = Constraint::from_tuple(4, &[4]);
        let run = run_seeded(&c, 3, RunMode::Verify).unwrap();
        assert!(run.transcript.is_empty());
        assert!(run.views.iter().all(|v| v.picked.is_empty() && v.group.len() == 1));
        assert_eq!(run.verification.unwrap().grouping.to_string(), "1|2|3|4");
    }

    #[test]
    fn strict_mode_hides_secrets() {
        let c = Constraint::from_tuple(4, &[0, 2]);
        let run = run_seeded(&c, 3, RunMode::Strict).unwrap();
        assert!(run.verification.is_none());
        let g = Grouping::from_views(&run.views).unwrap();
        assert!(g.satisfies(&c));
    }

    #[test]
    fn views_match_grouping() {
        let c = werewolf_roles();
        for seed in 0..30 {
            let run = run_seeded(&c, seed, RunMode::Verify).unwrap();
            let v = run.verification.as_ref().unwrap();
            assert!(v.grouping.satisfies(&c), "seed {seed}: {}", v.grouping);
            assert!(permutation_satisfies_constraint(&v.rho, &c));
            for view in &run.views {
                let expect: BTreeSet<usize> = v.grouping.group_of(view.player).unwrap().iter().copied().collect();
                assert_eq!(view.group, expect);
            }
        }
    }
}
