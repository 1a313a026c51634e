use std::collections::{HashSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Family {
    A,
    B,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::A => write!(f, "A"),
            Family::B => write!(f, "B"),
        }
    }
}

/// A finite Coxeter system of type A or B.
///
/// Type A of rank `r` acts on `r + 1` letters, `s_g` swapping positions
/// `g, g + 1`. Type B of rank `r` acts by signed permutations of `r`
/// letters: `s_0` negates the first entry and `s_g` swaps `g - 1, g`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CoxeterSpec {
    pub family: Family,
    pub rank: usize,
}

impl CoxeterSpec {
    pub fn type_a(rank: usize) -> Self {
        CoxeterSpec {
            family: Family::A,
            rank,
        }
    }

    pub fn type_b(rank: usize) -> Self {
        CoxeterSpec {
            family: Family::B,
            rank,
        }
    }

    /// Number of letters permuted.
    pub fn letters(&self) -> usize {
        match self.family {
            Family::A => self.rank + 1,
            Family::B => self.rank,
        }
    }

    pub fn m(&self, i: usize, j: usize) -> u32 {
        if i == j {
            1
        } else if i.abs_diff(j) > 1 {
            2
        } else if self.family == Family::B && i.min(j) == 0 {
            4
        } else {
            3
        }
    }

    pub fn coxeter_matrix(&self) -> Vec<Vec<u32>> {
        (0..self.rank)
            .map(|i| (0..self.rank).map(|j| self.m(i, j)).collect())
            .collect()
    }

    pub fn all(&self) -> GenSet {
        GenSet((1u32 << self.rank) - 1)
    }

    pub fn order(&self) -> u128 {
        self.parabolic_order(self.all())
    }

    /// `|W_gamma|`, multiplying over the connected pieces of `gamma`.
    pub fn parabolic_order(&self, gamma: GenSet) -> u128 {
        let mut out = 1u128;
        let mut g = 0;
        while g < self.rank {
            if !gamma.contains(g) {
                g += 1;
                continue;
            }
            let start = g;
            while g < self.rank && gamma.contains(g) {
                g += 1;
            }
            let len = (g - start) as u128;
            let factorial = |m: u128| (1..=m).product::<u128>();
            out *= if self.family == Family::B && start == 0 {
                (1u128 << len) * factorial(len)
            } else {
                factorial(len + 1)
            };
        }
        out
    }

    pub fn identity(&self) -> Element {
        Element((1..=self.letters() as i8).collect())
    }
}

/// A set of simple generators as a bitmask.
#[derive(
    Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize,
)]
pub struct GenSet(pub u32);

impl GenSet {
    pub fn contains(&self, g: usize) -> bool {
        self.0 >> g & 1 == 1
    }

    pub fn len(&self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.0 == 0
    }

    pub fn without(&self, g: usize) -> GenSet {
        GenSet(self.0 & !(1 << g))
    }

    pub fn is_subset(&self, other: GenSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        (0..32).filter(|&g| self.contains(g))
    }

    pub fn from_gens(gens: &[usize]) -> GenSet {
        GenSet(gens.iter().fold(0, |acc, g| acc | 1 << g))
    }

    /// All `k`-subsets of `0..rank` in colex order.
    pub fn subsets(rank: usize, k: usize) -> Vec<GenSet> {
        (0u32..1 << rank)
            .filter(|m| m.count_ones() as usize == k)
            .map(GenSet)
            .collect()
    }

    /// Position of this set among the subsets of the same size in colex order.
    pub fn colex_rank(&self) -> usize {
        self.iter()
            .enumerate()
            .map(|(i, g)| binomial(g, i + 1))
            .sum()
    }
}

impl fmt::Display for GenSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let gens: Vec<String> = self.iter().map(|g| format!("s{g}")).collect();
        write!(f, "{{{}}}", gens.join(","))
    }
}

pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// A group element in one-line notation: `w(i)` for `i = 1..letters`,
/// signed in type B.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Element(pub Vec<i8>);

impl Element {
    /// `w * s_g`: acts on positions.
    pub fn mul_right(&self, family: Family, g: usize) -> Element {
        let mut w = self.0.clone();
        match (family, g) {
            (Family::B, 0) => w[0] = -w[0],
            (Family::B, g) => w.swap(g - 1, g),
            (Family::A, g) => w.swap(g, g + 1),
        }
        Element(w)
    }

    /// `s_g * w`: acts on values.
    pub fn mul_left(&self, family: Family, g: usize) -> Element {
        let (a, b) = match (family, g) {
            (Family::B, 0) => {
                let w = self
                    .0
                    .iter()
                    .map(|&v| if v.abs() == 1 { -v } else { v })
                    .collect();
                return Element(w);
            }
            (Family::B, g) => (g as i8, g as i8 + 1),
            (Family::A, g) => (g as i8 + 1, g as i8 + 2),
        };
        let w = self
            .0
            .iter()
            .map(|&v| match v.abs() {
                x if x == a => v.signum() * b,
                x if x == b => v.signum() * a,
                _ => v,
            })
            .collect();
        Element(w)
    }

    pub fn inverse(&self) -> Element {
        let mut w = vec![0i8; self.0.len()];
        for (i, &v) in self.0.iter().enumerate() {
            w[v.unsigned_abs() as usize - 1] = v.signum() * (i as i8 + 1);
        }
        Element(w)
    }

    pub fn length(&self) -> usize {
        let w = &self.0;
        let mut inv = 0;
        for i in 0..w.len() {
            for j in i + 1..w.len() {
                if w[i] > w[j] {
                    inv += 1;
                }
            }
        }
        let neg: usize = w
            .iter()
            .filter(|&&v| v < 0)
            .map(|&v| v.unsigned_abs() as usize)
            .sum();
        inv + neg
    }

    /// `l(w s_g) < l(w)`.
    pub fn has_right_descent(&self, family: Family, g: usize) -> bool {
        let w = &self.0;
        match (family, g) {
            (Family::B, 0) => w[0] < 0,
            (Family::B, g) => w[g - 1] > w[g],
            (Family::A, g) => w[g] > w[g + 1],
        }
    }

    /// `l(s_g w) < l(w)`.
    pub fn has_left_descent(&self, family: Family, g: usize) -> bool {
        self.inverse().has_right_descent(family, g)
    }

    /// Evaluates a word `s_{i_1} ... s_{i_l}`.
    pub fn from_word(spec: &CoxeterSpec, word: &[usize]) -> Element {
        word.iter()
            .fold(spec.identity(), |w, &g| w.mul_right(spec.family, g))
    }
}

/// Which coset representatives the boundary sums over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Side {
    /// Minimal in `w W'`: no right descents in `W'`, grown by left
    /// multiplication.
    Left,
    /// Minimal in `W' w`: no left descents in `W'`, grown by right
    /// multiplication.
    Right,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Side::Left => write!(f, "left"),
            Side::Right => write!(f, "right"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CosetRep {
    pub element: Element,
    pub length: usize,
    /// Reduced word; `word[0]` is the leftmost letter.
    pub word: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CoxeterError {
    #[error("generator set {gamma:#b} not inside rank {rank}")]
    OutOfRange { gamma: u32, rank: usize },
    #[error("{sub:#b} must be {gamma:#b} with exactly one generator removed")]
    Malformed { gamma: u32, sub: u32 },
}

fn check_subsets(spec: &CoxeterSpec, gamma: GenSet, sub: GenSet) -> Result<(), CoxeterError> {
    if !gamma.is_subset(spec.all()) {
        return Err(CoxeterError::OutOfRange {
            gamma: gamma.0,
            rank: spec.rank,
        });
    }
    if !sub.is_subset(gamma) || gamma.len() != sub.len() + 1 {
        return Err(CoxeterError::Malformed {
            gamma: gamma.0,
            sub: sub.0,
        });
    }
    Ok(())
}

/// Minimal length representatives of the cosets of `W_sub` in `W_gamma`,
/// sorted by length and then by element.
pub fn min_coset_reps(
    spec: &CoxeterSpec,
    gamma: GenSet,
    sub: GenSet,
    side: Side,
) -> Result<Vec<CosetRep>, CoxeterError> {
    check_subsets(spec, gamma, sub)?;
    Ok(coset_reps_unchecked(spec, gamma, sub, side))
}

pub(crate) fn coset_reps_unchecked(
    spec: &CoxeterSpec,
    gamma: GenSet,
    sub: GenSet,
    side: Side,
) -> Vec<CosetRep> {
    let family = spec.family;
    let minimal = |w: &Element| {
        sub.iter().all(|g| match side {
            Side::Left => !w.has_right_descent(family, g),
            Side::Right => !w.has_left_descent(family, g),
        })
    };
    let start = CosetRep {
        element: spec.identity(),
        length: 0,
        word: Vec::new(),
    };
    let mut seen = HashSet::from([start.element.clone()]);
    let mut queue = VecDeque::from([start]);
    let mut out = Vec::new();
    while let Some(rep) = queue.pop_front() {
        for g in gamma.iter() {
            let (next, word) = match side {
                Side::Left => {
                    if rep.element.has_left_descent(family, g) {
                        continue;
                    }
                    let mut word = vec![g];
                    word.extend(&rep.word);
                    (rep.element.mul_left(family, g), word)
                }
                Side::Right => {
                    if rep.element.has_right_descent(family, g) {
                        continue;
                    }
                    let mut word = rep.word.clone();
                    word.push(g);
                    (rep.element.mul_right(family, g), word)
                }
            };
            if minimal(&next) && seen.insert(next.clone()) {
                queue.push_back(CosetRep {
                    element: next,
                    length: rep.length + 1,
                    word,
                });
            }
        }
        out.push(rep);
    }
    out.sort_by(|a, b| (a.length, &a.element).cmp(&(b.length, &b.element)));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn orders() {
        assert_eq!(CoxeterSpec::type_a(3).order(), 24);
        assert_eq!(CoxeterSpec::type_b(3).order(), 48);
        let b = CoxeterSpec::type_b(4);
        assert_eq!(b.parabolic_order(GenSet::from_gens(&[0, 2, 3])), 2 * 6);
        assert_eq!(b.m(0, 1), 4);
        assert_eq!(CoxeterSpec::type_a(4).m(0, 1), 3);
        assert_eq!(CoxeterSpec::type_a(4).m(0, 2), 2);
    }

    #[test]
    fn lengths_and_descents() {
        let a = CoxeterSpec::type_a(2);
        let w = Element::from_word(&a, &[0, 1, 0]);
        assert_eq!(w, Element(vec![3, 2, 1]));
        assert_eq!(w.length(), 3);
        let b = CoxeterSpec::type_b(2);
        let w0 = Element::from_word(&b, &[0, 1, 0, 1]);
        assert_eq!(w0, Element(vec![-1, -2]));
        assert_eq!(w0.length(), 4);
        assert!(w0.has_right_descent(Family::B, 0) && w0.has_left_descent(Family::B, 1));
        let w = Element::from_word(&b, &[1, 0]);
        assert_eq!(w.mul_left(Family::B, 1), Element::from_word(&b, &[1, 1, 0]));
        assert_eq!(w.inverse(), Element::from_word(&b, &[0, 1]));
    }

    #[test]
    fn coset_examples() {
        let a = CoxeterSpec::type_a(2);
        for side in [Side::Left, Side::Right] {
            let reps = min_coset_reps(&a, GenSet(0b11), GenSet(0b10), side).unwrap();
            assert_eq!(reps.len(), 3);
            let reps = min_coset_reps(&a, GenSet(0b1), GenSet(0), side).unwrap();
            assert_eq!(reps.len(), 2);
            let b = CoxeterSpec::type_b(2);
            let reps = min_coset_reps(&b, GenSet(0b11), GenSet(0b10), side).unwrap();
            let lengths: Vec<usize> = reps.iter().map(|r| r.length).collect();
            assert_eq!(lengths, vec![0, 1, 2, 3]);
        }
        assert!(min_coset_reps(&a, GenSet(0b11), GenSet(0b00), Side::Left).is_err());
        assert!(min_coset_reps(&a, GenSet(0b111), GenSet(0b011), Side::Left).is_err());
    }

    #[test]
    fn words_evaluate_to_elements() {
        for spec in [CoxeterSpec::type_a(4), CoxeterSpec::type_b(4)] {
            for side in [Side::Left, Side::Right] {
                for tau in 0..4 {
                    let all = spec.all();
                    let reps = min_coset_reps(&spec, all, all.without(tau), side).unwrap();
                    let index = spec.order() / spec.parabolic_order(all.without(tau));
                    assert_eq!(reps.len() as u128, index);
                    for r in &reps {
                        assert_eq!(Element::from_word(&spec, &r.word), r.element);
                        assert_eq!(r.element.length(), r.length);
                        assert_eq!(r.word.len(), r.length);
                    }
                }
            }
        }
    }

    #[test]
    fn colex() {
        let sets = GenSet::subsets(5, 2);
        assert_eq!(sets.len(), 10);
        for (i, s) in sets.iter().enumerate() {
            assert_eq!(s.colex_rank(), i);
        }
    }
}
