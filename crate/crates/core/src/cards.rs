//! Number cards and card rows.
//!
//! A row represents `σ` when its `i`-th card shows `σ⁻¹(i)`, equivalently
//! card `k` sits at position `σ(k)`.

use std::fmt;

use crate::error::{Error, Result};
use crate::perm::{check_degree, Permutation};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Facing {
    Up,
    Down,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Card {
    pub value: usize,
    pub facing: Facing,
}

impl Card {
    pub fn up(value: usize) -> Card {
        Card {
            value,
            facing: Facing::Up,
        }
    }

    pub fn down(value: usize) -> Card {
        Card {
            value,
            facing: Facing::Down,
        }
    }

    pub fn is_up(&self) -> bool {
        self.facing == Facing::Up
    }
}

/// Who is reading a row: the public table, or test/player code that may look
/// under face-down cards.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Access {
    Public,
    Secret,
}

/// An ordered row of number cards with values in `1..=degree`.
///
/// Rows inside a protocol may be shorter than `degree` (e.g. before the fixed
/// cards are spliced in), but only full-length rows represent permutations.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CardSequence {
    cards: Vec<Card>,
    degree: usize,
}

impl CardSequence {
    pub fn new(degree: usize, cards: Vec<Card>) -> Result<CardSequence> {
        if degree == 0 {
            return Err(Error::ZeroDegree);
        }
        if let Some(c) = cards.iter().find(|c| c.value == 0 || c.value > degree) {
            return Err(Error::NotAPermutation(format!(
                "card value {} outside 1..={degree}",
                c.value
            )));
        }
        Ok(CardSequence { cards, degree })
    }

    /// A row showing `values` left to right, all with the same facing.
    pub fn from_values(degree: usize, values: &[usize], facing: Facing) -> Result<CardSequence> {
        let cards = values.iter().map(|&value| Card { value, facing }).collect();
        CardSequence::new(degree, cards)
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn len(&self) -> usize {
        self.cards.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cards.is_empty()
    }

    pub fn cards(&self) -> &[Card] {
        &self.cards
    }

    /// Card at 1-based position.
    pub fn card(&self, position: usize) -> Option<&Card> {
        position.checked_sub(1).and_then(|i| self.cards.get(i))
    }

    /// Front values regardless of facing. Only for code holding secret access.
    pub fn values(&self) -> Vec<usize> {
        self.cards.iter().map(|c| c.value).collect()
    }

    /// Front values, failing on the first face-down card.
    pub fn public_values(&self) -> Result<Vec<usize>> {
        self.read(Access::Public)
    }

    fn read(&self, access: Access) -> Result<Vec<usize>> {
        self.cards
            .iter()
            .enumerate()
            .map(|(i, c)| {
                if access == Access::Public && !c.is_up() {
                    Err(Error::HiddenCard { position: i + 1 })
                } else {
                    Ok(c.value)
                }
            })
            .collect()
    }

    pub fn all_down(&self) -> bool {
        self.cards.iter().all(|c| !c.is_up())
    }

    pub fn all_up(&self) -> bool {
        self.cards.iter().all(Card::is_up)
    }

    pub(crate) fn cards_mut(&mut self) -> &mut Vec<Card> {
        &mut self.cards
    }
}

impl fmt::Display for CardSequence {
    /// `? ? 3 ? 5`
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .cards
            .iter()
            .map(|c| {
                if c.is_up() {
                    c.value.to_string()
                } else {
                    "?".to_string()
                }
            })
            .collect();
        f.write_str(&parts.join(" "))
    }
}

/// The row `σ(1, 2, …, n)`: position `i` holds `σ⁻¹(i)`.
pub fn sequence_of_permutation(sigma: &Permutation, facing: Facing) -> CardSequence {
    let values = sigma.inverse().images();
    CardSequence::from_values(sigma.degree(), &values, facing).expect("values are in range")
}

/// Reads back the permutation a row represents.
pub fn permutation_of_sequence(x: &CardSequence, access: Access) -> Result<Permutation> {
    if x.len() != x.degree() {
        return Err(Error::NotAPermutation(format!(
            "row has {} cards, degree is {}",
            x.len(),
            x.degree()
        )));
    }
    let values = x.read(access)?;
    // the row lists σ⁻¹ in one-line form
    Ok(Permutation::from_images(&values)?.inverse())
}

/// `σ(x) = (x_{σ⁻¹(1)}, …, x_{σ⁻¹(n)})`: the card at position `i` moves to
/// position `σ(i)`. Facings travel with their cards.
pub fn apply_permutation(sigma: &Permutation, x: &CardSequence) -> Result<CardSequence> {
    check_degree(sigma.degree(), x.len())?;
    let mut out = x.cards.clone();
    for (i, card) in x.cards.iter().enumerate() {
        out[sigma.apply(i + 1) - 1] = *card;
    }
    Ok(CardSequence {
        cards: out,
        degree: x.degree,
    })
}

pub fn flip_all(x: &CardSequence, facing: Facing) -> CardSequence {
    CardSequence {
        cards: x.cards.iter().map(|c| Card { value: c.value, facing }).collect(),
        degree: x.degree,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cyc(n: usize, s: &str) -> Permutation {
        Permutation::parse(s, Some(n)).unwrap()
    }

    #[test]
    fn encoding_examples() {
        let tau = cyc(7, "(1 2)(3 4)(5 6 7)");
        assert_eq!(sequence_of_permutation(&tau, Facing::Up).values(), vec![2, 1, 4, 3, 7, 5, 6]);
        assert_eq!(
            sequence_of_permutation(&Permutation::identity(4), Facing::Up).values(),
            vec![1, 2, 3, 4]
        );
        let rho = cyc(11, "(1 9 7 4)(2 3)(5 11)");
        assert_eq!(
            sequence_of_permutation(&rho, Facing::Down).values(),
            vec![4, 3, 2, 7, 11, 6, 9, 8, 1, 10, 5]
        );
    }

    #[test]
    fn decoding_examples() {
        let row = CardSequence::from_values(7, &[2, 1, 4, 3, 7, 5, 6], Facing::Up).unwrap();
        assert_eq!(
            permutation_of_sequence(&row, Access::Public).unwrap(),
            cyc(7, "(1 2)(3 4)(5 6 7)")
        );
        let row = CardSequence::from_values(3, &[1, 2, 3], Facing::Up).unwrap();
        assert!(permutation_of_sequence(&row, Access::Public).unwrap().is_identity());

        let row = CardSequence::from_values(7, &[7, 1, 2, 3, 4, 5, 6], Facing::Up).unwrap();
        let sigma = permutation_of_sequence(&row, Access::Public).unwrap();
        for k in 1..=6 {
            assert_eq!(sigma.apply(k), k + 1);
        }
        assert_eq!(sigma.apply(7), 1);
    }

    #[test]
    fn decoding_errors() {
        let dup = CardSequence::from_values(3, &[1, 1, 3], Facing::Up).unwrap();
        assert!(matches!(
            permutation_of_sequence(&dup, Access::Public),
            Err(Error::NotAPermutation(_))
        ));
        let hidden = CardSequence::from_values(3, &[2, 1, 3], Facing::Down).unwrap();
        assert_eq!(
            permutation_of_sequence(&hidden, Access::Public),
            Err(Error::HiddenCard { position: 1 })
        );
        assert_eq!(
            permutation_of_sequence(&hidden, Access::Secret).unwrap(),
            cyc(3, "(1 2)")
        );
        let short = CardSequence::from_values(3, &[2, 1], Facing::Up).unwrap();
        assert!(permutation_of_sequence(&short, Access::Public).is_err());
        assert!(CardSequence::from_values(3, &[4], Facing::Up).is_err());
    }

    #[test]
    fn apply_moves_card_i_to_sigma_i() {
        let sigma = cyc(7, "(1 3)(2 6 5)(4)(7)");
        let x = CardSequence::from_values(7, &[1, 2, 3, 4, 5, 6, 7], Facing::Up).unwrap();
        // x_i is the card showing i, so the result lists indices directly
        assert_eq!(apply_permutation(&sigma, &x).unwrap().values(), vec![3, 5, 1, 4, 6, 2, 7]);
        assert_eq!(apply_permutation(&Permutation::identity(7), &x).unwrap(), x);
        assert!(apply_permutation(&Permutation::identity(6), &x).is_err());
    }

    #[test]
    fn facing_travels_with_card() {
        let x = CardSequence::new(3, vec![Card::up(1), Card::down(2), Card::down(3)]).unwrap();
        let y = apply_permutation(&cyc(3, "(1 2 3)"), &x).unwrap();
        assert_eq!(y.to_string(), "? 1 ?");
        assert_eq!(y.values(), vec![3, 1, 2]);
    }

    #[test]
    fn flip_examples() {
        let tau = cyc(5, "(1 2)(3 4 5)");
        let up = sequence_of_permutation(&tau, Facing::Up);
        let down = flip_all(&up, Facing::Down);
        assert!(down.all_down());
        assert_eq!(down.values(), up.values());
        assert_eq!(down.to_string(), "? ? ? ? ?");
        assert_eq!(flip_all(&down, Facing::Up), up);
    }

    #[test]
    fn render_mixed_row() {
        let x = CardSequence::new(
            5,
            vec![Card::down(1), Card::down(2), Card::up(3), Card::down(4), Card::up(5)],
        )
        .unwrap();
        assert_eq!(x.to_string(), "? ? 3 ? 5");
        assert_eq!(x.public_values(), Err(Error::HiddenCard { position: 1 }));
        assert_eq!(x.card(3), Some(&Card::up(3)));
        assert_eq!(x.card(0), None);
    }
}
