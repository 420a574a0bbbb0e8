//! Where hidden permutations come from.

use std::collections::VecDeque;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::perm::Permutation;

/// Supplies the hidden permutation of each pile-scramble shuffle.
pub trait PermutationSource: Send {
    fn draw(&mut self, degree: usize) -> Result<Permutation>;
}

/// Uniform permutation of `1..=n` by the swap-based (Fisher–Yates) shuffle.
pub fn uniform_permutation<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Permutation {
    let mut images: Vec<usize> = (1..=n).collect();
    for i in (1..n).rev() {
        let j = rng.random_range(0..=i);
        images.swap(i, j);
    }
    Permutation::from_images(&images).expect("shuffled identity is a permutation")
}

/// ChaCha8-backed source. Independent streams of one seed give independent
/// generators, which is how Monte-Carlo trials are split.
#[derive(Debug, Clone)]
pub struct SeededSource {
    rng: ChaCha8Rng,
}

impl SeededSource {
    pub fn new(seed: u64) -> SeededSource {
        SeededSource {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn stream(seed: u64, stream: u64) -> SeededSource {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        SeededSource { rng }
    }
}

impl PermutationSource for SeededSource {
    fn draw(&mut self, degree: usize) -> Result<Permutation> {
        if degree == 0 {
            return Err(Error::ZeroDegree);
        }
        Ok(uniform_permutation(&mut self.rng, degree))
    }
}

/// Yields predetermined permutations in order, then optionally falls back to
/// a seeded generator.
#[derive(Debug, Clone, Default)]
pub struct ScriptedSource {
    script: VecDeque<Permutation>,
    fallback: Option<SeededSource>,
}

impl ScriptedSource {
    pub fn new(script: impl IntoIterator<Item = Permutation>) -> ScriptedSource {
        ScriptedSource {
            script: script.into_iter().collect(),
            fallback: None,
        }
    }

    pub fn with_fallback(mut self, seed: u64) -> ScriptedSource {
        self.fallback = Some(SeededSource::new(seed));
        self
    }

    pub fn remaining(&self) -> usize {
        self.script.len()
    }
}

impl PermutationSource for ScriptedSource {
    fn draw(&mut self, degree: usize) -> Result<Permutation> {
        match self.script.pop_front() {
            Some(p) if p.degree() == degree => Ok(p),
            Some(p) => Err(Error::DegreeMismatch {
                left: degree,
                right: p.degree(),
            }),
            None => match &mut self.fallback {
                Some(f) => f.draw(degree),
                None => Err(Error::ScriptExhausted),
            },
        }
    }
}

impl<S: PermutationSource + ?Sized> PermutationSource for Box<S> {
    fn draw(&mut self, degree: usize) -> Result<Permutation> {
        (**self).draw(degree)
    }
}
