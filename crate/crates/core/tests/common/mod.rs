#![allow(dead_code)]

use secgroup::{Constraint, Permutation};

pub fn cyc(n: usize, s: &str) -> Permutation {
    Permutation::parse(s, Some(n)).unwrap()
}

pub fn pinned_triples() -> Constraint {
    Constraint::from_tuple(9, &[0, 0, 3])
        .with_set(3, vec![1])
        .with_set(3, vec![8, 9])
}

pub fn werewolf_roles() -> Constraint {
    Constraint::from_tuple(9, &[2, 2, 1])
        .with_set(2, vec![8])
        .with_set(3, vec![9])
}

/// Constraints small enough for the brute-force oracles. Sets made of
/// high indices play the part of dummies.
pub fn small_corpus() -> Vec<Constraint> {
    vec![
        Constraint::from_tuple(1, &[1]),
        Constraint::from_tuple(2, &[0, 1]),
        Constraint::from_tuple(3, &[0, 0, 1]),
        Constraint::from_tuple(3, &[1, 1]),
        Constraint::from_tuple(4, &[4]),
        Constraint::from_tuple(4, &[0, 2]),
        Constraint::from_tuple(4, &[1, 0, 1]),
        Constraint::from_tuple(5, &[3, 1]),
        Constraint::from_tuple(5, &[1, 2]),
        Constraint::from_tuple(5, &[0, 1, 1]),
        Constraint::from_tuple(6, &[0, 3]),
        Constraint::from_tuple(6, &[0, 0, 2]),
        Constraint::from_tuple(6, &[1, 1, 1]),
        Constraint::from_tuple(6, &[2, 0, 0, 1]),
        Constraint::from_tuple(6, &[0, 0, 0, 0, 0, 1]),
        Constraint::from_tuple(3, &[0, 0, 1]).with_set(3, vec![1, 2]),
        Constraint::from_tuple(3, &[1, 1]).with_set(2, vec![1, 3]),
        Constraint::from_tuple(4, &[0, 2]).with_set(2, vec![4]),
        Constraint::from_tuple(5, &[1, 2]).with_set(2, vec![5]),
        Constraint::from_tuple(5, &[0, 1, 1]).with_set(3, vec![4, 5]),
        Constraint::from_tuple(6, &[0, 3]).with_set(2, vec![5]).with_set(2, vec![6]),
        Constraint::from_tuple(6, &[0, 0, 2]).with_set(3, vec![1]).with_set(3, vec![2]),
        Constraint::from_tuple(6, &[1, 1, 1]).with_set(2, vec![5]).with_set(3, vec![6]),
        Constraint::from_tuple(6, &[2, 2]).with_set(1, vec![6]).with_set(2, vec![5]),
    ]
}

/// The small corpus plus the larger worked examples.
pub fn full_corpus() -> Vec<Constraint> {
    let mut c = small_corpus();
    c.extend([
        pinned_triples(),
        werewolf_roles(),
        Constraint::from_tuple(11, &[3, 2, 0, 1]),
        Constraint::from_tuple(12, &[0, 0, 0, 3]),
    ]);
    c
}
