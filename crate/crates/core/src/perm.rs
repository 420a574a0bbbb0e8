//! Permutations of `{1..n}` in one-line form.
//!
//! Composition order: `f.compose(&g)` is the map `i ↦ f(g(i))`, i.e. `g` acts
//! first. This is the order in which applying a permutation to the card row of
//! another permutation composes them (see [`crate::cards::apply_permutation`]).
//!
//! All public positions and values are 1-based.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    // 0-based images; images[i] = π(i + 1) - 1
    images: Vec<usize>,
}

impl Permutation {
    /// The identity of `S_n`. Panics if `n == 0`.
    pub fn identity(n: usize) -> Self {
        assert!(n >= 1, "degree must be at least 1");
        Permutation { images: (0..n).collect() }
    }

    /// Builds a permutation from its one-line form `[π(1), …, π(n)]`.
    pub fn from_images(images: &[usize]) -> Result<Self> {
        if images.is_empty() {
            return Err(Error::ZeroDegree);
        }
        let n = images.len();
        let mut seen = vec![false; n];
        let mut out = Vec::with_capacity(n);
        for (i, &v) in images.iter().enumerate() {
            if v == 0 || v > n {
                return Err(Error::NotAPermutation(format!(
                    "image {v} of {} is outside 1..={n}",
                    i + 1
                )));
            }
            if seen[v - 1] {
                return Err(Error::NotAPermutation(format!("value {v} appears twice")));
            }
            seen[v - 1] = true;
            out.push(v - 1);
        }
        Ok(Permutation { images: out })
    }

    /// Builds a permutation of degree `n` from disjoint cycles, each written
    /// `[i_1, i_2, …, i_r]` meaning `i_1 ↦ i_2 ↦ … ↦ i_r ↦ i_1`.
    pub fn from_cycles<C: AsRef<[usize]>>(n: usize, cycles: &[C]) -> Result<Self> {
        if n == 0 {
            return Err(Error::ZeroDegree);
        }
        let mut images: Vec<usize> = (0..n).collect();
        let mut used = vec![false; n];
        for cycle in cycles {
            let cycle = cycle.as_ref();
            for &e in cycle {
                if e == 0 || e > n {
                    return Err(Error::NotAPermutation(format!(
                        "cycle element {e} outside 1..={n}"
                    )));
                }
                if used[e - 1] {
                    return Err(Error::NotAPermutation(format!(
                        "element {e} appears in more than one cycle position"
                    )));
                }
                used[e - 1] = true;
            }
            for (j, &e) in cycle.iter().enumerate() {
                images[e - 1] = cycle[(j + 1) % cycle.len()] - 1;
            }
        }
        Ok(Permutation { images })
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    /// `π(i)` for `i` in `1..=n`. Panics when `i` is out of range.
    pub fn apply(&self, i: usize) -> usize {
        self.images[i - 1] + 1
    }

    /// One-line form, 1-based.
    pub fn images(&self) -> Vec<usize> {
        self.images.iter().map(|&v| v + 1).collect()
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &v)| i == v)
    }

    /// `self ∘ other`: apply `other` first, then `self`.
    pub fn compose(&self, other: &Permutation) -> Result<Permutation> {
        check_degree(self.degree(), other.degree())?;
        Ok(Permutation {
            images: other.images.iter().map(|&g| self.images[g]).collect(),
        })
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.degree()];
        for (i, &v) in self.images.iter().enumerate() {
            inv[v] = i;
        }
        Permutation { images: inv }
    }

    pub fn power(&self, exponent: u32) -> Permutation {
        // square-and-multiply; degrees always agree so compose cannot fail
        let mut result = Permutation::identity(self.degree());
        let mut base = self.clone();
        let mut e = exponent;
        while e > 0 {
            if e & 1 == 1 {
                result = base.compose(&result).expect("same degree");
            }
            base = base.compose(&base).expect("same degree");
            e >>= 1;
        }
        result
    }

    pub fn decompose(&self) -> CycleDecomposition {
        let n = self.degree();
        let mut visited = vec![false; n];
        let mut cycles = Vec::new();
        for start in 0..n {
            if visited[start] {
                continue;
            }
            let mut elements = Vec::new();
            let mut cur = start;
            while !visited[cur] {
                visited[cur] = true;
                elements.push(cur + 1);
                cur = self.images[cur];
            }
            // `start` is the smallest unvisited element, so the cycle already
            // begins at its minimum and cycles come out sorted by leader
            cycles.push(Cycle { elements });
        }
        CycleDecomposition { cycles, degree: n }
    }

    pub fn cycle_type(&self) -> CycleType {
        let mut multiplicities = BTreeMap::new();
        for c in self.decompose().cycles() {
            *multiplicities.entry(c.len()).or_insert(0) += 1;
        }
        CycleType {
            degree: self.degree(),
            multiplicities,
        }
    }

    /// `ν⁻¹ π ν`, computed by rewriting every number `j` in the cycle
    /// expression of `π` as `ν⁻¹(j)`.
    pub fn conjugate_by_relabeling(&self, nu: &Permutation) -> Result<Permutation> {
        check_degree(self.degree(), nu.degree())?;
        let nu_inv = nu.inverse();
        let relabeled: Vec<Vec<usize>> = self
            .decompose()
            .cycles()
            .iter()
            .map(|c| c.elements().iter().map(|&j| nu_inv.apply(j)).collect())
            .collect();
        Permutation::from_cycles(self.degree(), &relabeled)
    }

    /// `[2,1,4,3]`
    pub fn one_line(&self) -> String {
        let parts: Vec<String> = self.images().iter().map(|v| v.to_string()).collect();
        format!("[{}]", parts.join(","))
    }

    /// Parses either one-line form (`[2,1,3]`) or cycle form (`(1 2)(3)`,
    /// `(1,2)`, `(12)`, `id`). Cycle form needs the degree; a one-line form
    /// must agree with it when one is given.
    pub fn parse(text: &str, degree: Option<usize>) -> Result<Permutation> {
        let t = text.trim();
        if t.starts_with('[') {
            let p: Permutation = t.parse()?;
            if let Some(d) = degree {
                check_degree(d, p.degree())?;
            }
            return Ok(p);
        }
        let n = degree.ok_or_else(|| {
            Error::Parse("cycle notation requires an explicit degree".to_string())
        })?;
        parse_cycles(t, n)
    }
}

impl FromStr for Permutation {
    type Err = Error;

    /// One-line form only: `[3,1,2]`.
    fn from_str(s: &str) -> Result<Self> {
        let inner = s
            .trim()
            .strip_prefix('[')
            .and_then(|r| r.strip_suffix(']'))
            .ok_or_else(|| Error::Parse(format!("expected [..] one-line form, got {s:?}")))?;
        let values = inner
            .split(',')
            .map(|p| {
                p.trim()
                    .parse::<usize>()
                    .map_err(|_| Error::Parse(format!("bad number {:?}", p.trim())))
            })
            .collect::<Result<Vec<_>>>()?;
        Permutation::from_images(&values)
    }
}

fn parse_cycles(text: &str, n: usize) -> Result<Permutation> {
    if text == "id" || text.is_empty() {
        return Permutation::from_cycles::<Vec<usize>>(n, &[]);
    }
    let mut cycles = Vec::new();
    let mut rest = text;
    while !rest.is_empty() {
        rest = rest.trim_start();
        if rest.is_empty() {
            break;
        }
        let body = rest
            .strip_prefix('(')
            .ok_or_else(|| Error::Parse(format!("expected '(' at {rest:?}")))?;
        let close = body
            .find(')')
            .ok_or_else(|| Error::Parse("unclosed cycle".to_string()))?;
        let inner = body[..close].trim();
        rest = &body[close + 1..];

        let separated = inner.contains(',') || inner.contains(char::is_whitespace);
        let elements: Vec<usize> = if separated {
            inner
                .split(|c: char| c == ',' || c.is_whitespace())
                .filter(|s| !s.is_empty())
                .map(|s| {
                    s.parse::<usize>()
                        .map_err(|_| Error::Parse(format!("bad cycle element {s:?}")))
                })
                .collect::<Result<_>>()?
        } else if n <= 9 || inner.len() == 1 {
            // compact "(123)" only makes sense with single-digit labels
            inner
                .chars()
                .map(|c| {
                    c.to_digit(10)
                        .map(|d| d as usize)
                        .ok_or_else(|| Error::Parse(format!("bad cycle element {c:?}")))
                })
                .collect::<Result<_>>()?
        } else {
            inner
                .parse::<usize>()
                .map(|v| vec![v])
                .map_err(|_| Error::Parse(format!("ambiguous cycle {inner:?}")))?
        };
        if elements.is_empty() {
            continue;
        }
        cycles.push(elements);
    }
    Permutation::from_cycles(n, &cycles)
}

impl fmt::Display for Permutation {
    /// Cycle form without fixed points; the identity prints as `id`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.decompose())
    }
}

pub(crate) fn check_degree(left: usize, right: usize) -> Result<()> {
    if left != right {
        return Err(Error::DegreeMismatch { left, right });
    }
    Ok(())
}

/// One cycle in canonical rotation (smallest element first).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cycle {
    elements: Vec<usize>,
}

impl Cycle {
    pub fn new(elements: Vec<usize>) -> Result<Cycle> {
        if elements.is_empty() {
            return Err(Error::Parse("empty cycle".to_string()));
        }
        let mut sorted = elements.clone();
        sorted.sort_unstable();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::NotAPermutation(format!(
                "repeated element in cycle {elements:?}"
            )));
        }
        let lead = elements
            .iter()
            .enumerate()
            .min_by_key(|(_, &v)| v)
            .map(|(i, _)| i)
            .unwrap_or(0);
        let mut elements = elements;
        elements.rotate_left(lead);
        Ok(Cycle { elements })
    }

    pub fn elements(&self) -> &[usize] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }
}

impl fmt::Display for Cycle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.elements.iter().map(|e| e.to_string()).collect();
        write!(f, "({})", parts.join(" "))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CycleDecomposition {
    cycles: Vec<Cycle>,
    degree: usize,
}

impl CycleDecomposition {
    /// All cycles, fixed points included, ordered by leading element.
    pub fn cycles(&self) -> &[Cycle] {
        &self.cycles
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Multiplies the cycles back together.
    pub fn to_permutation(&self) -> Permutation {
        let raw: Vec<&[usize]> = self.cycles.iter().map(|c| c.elements()).collect();
        Permutation::from_cycles(self.degree, &raw).expect("decomposition is disjoint")
    }

    /// Renders with or without the length-1 cycles.
    pub fn render(&self, with_fixed_points: bool) -> String {
        let s: String = self
            .cycles
            .iter()
            .filter(|c| with_fixed_points || c.len() > 1)
            .map(|c| c.to_string())
            .collect();
        if s.is_empty() {
            "id".to_string()
        } else {
            s
        }
    }
}

impl fmt::Display for CycleDecomposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(false))
    }
}

/// Cycle type `⟨1^{m_1}, 2^{m_2}, …⟩`; only non-zero multiplicities are stored.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CycleType {
    degree: usize,
    multiplicities: BTreeMap<usize, usize>,
}

impl CycleType {
    /// Builds a type from `(length, count)` pairs; zero counts are dropped.
    pub fn new(degree: usize, counts: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut multiplicities = BTreeMap::new();
        for (len, count) in counts {
            if len == 0 {
                return Err(Error::Parse("cycle length 0".to_string()));
            }
            if count > 0 {
                *multiplicities.entry(len).or_insert(0) += count;
            }
        }
        let total: usize = multiplicities.iter().map(|(l, c)| l * c).sum();
        if total != degree {
            return Err(Error::NotAPermutation(format!(
                "cycle lengths sum to {total}, expected {degree}"
            )));
        }
        Ok(CycleType {
            degree,
            multiplicities,
        })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// `m_len`, the number of cycles of the given length.
    pub fn count(&self, len: usize) -> usize {
        self.multiplicities.get(&len).copied().unwrap_or(0)
    }

    pub fn multiplicities(&self) -> &BTreeMap<usize, usize> {
        &self.multiplicities
    }
}

impl fmt::Display for CycleType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .multiplicities
            .iter()
            .map(|(l, c)| format!("{l}^{c}"))
            .collect();
        write!(f, "<{}>", parts.join(", "))
    }
}
