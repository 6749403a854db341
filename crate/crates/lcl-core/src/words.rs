//! Breadth-first enumeration of group elements as freely reduced words in a
//! finite generator list, with exact deduplication in the projective group
//! (matrices agreeing up to global sign count once).

use crate::exactnum::Scalar;
use crate::moebius::Mat2;
use std::collections::HashSet;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WordsError {
    #[error("generator set is empty")]
    EmptyGeneratorSet,
}

/// A freely reduced word: letter k > 0 is generator k-1, letter -k its
/// inverse; the empty word is the identity.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(pub Vec<i32>);

impl Word {
    pub fn identity() -> Word {
        Word(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Extends by one letter, refusing the reducible x x^-1 step.
    /// Concatenation with free reduction at the seam (and through any
    /// cascade of cancellations it opens).
    pub fn concat(&self, other: &Word) -> Word {
        let mut v: Vec<i32> = Vec::with_capacity(self.0.len() + other.0.len());
        for &l in self.0.iter().chain(other.0.iter()) {
            if v.last() == Some(&-l) {
                v.pop();
            } else {
                v.push(l);
            }
        }
        Word(v)
    }

    pub fn push_reduced(&self, letter: i32) -> Option<Word> {
        if let Some(&last) = self.0.last() {
            if last == -letter {
                return None;
            }
        }
        let mut v = self.0.clone();
        v.push(letter);
        Some(Word(v))
    }

    /// Formats with generator names, grouping runs: "T^4 S", "T^-2", "e".
    pub fn format_with_names(&self, names: &[&str]) -> String {
        if self.0.is_empty() {
            return "e".to_string();
        }
        let mut parts: Vec<String> = Vec::new();
        let mut i = 0;
        while i < self.0.len() {
            let letter = self.0[i];
            let mut run = 1usize;
            while i + run < self.0.len() && self.0[i + run] == letter {
                run += 1;
            }
            let idx = (letter.unsigned_abs() - 1) as usize;
            let name = names.get(idx).copied().unwrap_or("?");
            let exp = if letter > 0 { run as i64 } else { -(run as i64) };
            if exp == 1 {
                parts.push(name.to_string());
            } else {
                parts.push(format!("{}^{}", name, exp));
            }
            i += run;
        }
        parts.join(" ")
    }
}

/// Result of a breadth-first enumeration. `elements` starts with the
/// identity (empty word); `truncated` reports an early stop at `cap`.
#[derive(Debug, Clone)]
pub struct Enumeration<S: Scalar> {
    pub elements: Vec<(Word, Mat2<S>)>,
    pub truncated: bool,
}

impl<S: Scalar> Enumeration<S> {
    pub fn nontrivial(&self) -> impl Iterator<Item = &(Word, Mat2<S>)> {
        self.elements.iter().filter(|(w, _)| !w.is_empty())
    }

    pub fn nontrivial_count(&self) -> usize {
        self.elements.len() - 1
    }
}

/// Enumerates the ball of radius `max_len` in the generators, breadth-first
/// by word length, freely reduced, with each projective element emitted once
/// (first-seen geodesic word wins). Stops early once `cap` elements
/// (including the identity) have been emitted.
/// Evaluates a word in the given generators: letter k > 0 means
/// gens[k - 1], a negative letter its inverse.
pub fn evaluate<S: Scalar>(word: &Word, gens: &[Mat2<S>]) -> Mat2<S> {
    let mut acc = Mat2::identity_like(&gens[0].a);
    for &letter in &word.0 {
        let idx = (letter.unsigned_abs() - 1) as usize;
        let g = if letter > 0 {
            gens[idx].clone()
        } else {
            gens[idx].inverse()
        };
        acc = acc.mul(&g);
    }
    acc
}

pub fn enumerate<S: Scalar>(
    gens: &[Mat2<S>],
    max_len: usize,
    cap: usize,
) -> Result<Enumeration<S>, WordsError> {
    if gens.is_empty() {
        return Err(WordsError::EmptyGeneratorSet);
    }
    debug_assert!(gens.iter().all(|g| {
        let d = g.det();
        d == d.one_like()
    }));
    let letters: Vec<(i32, Mat2<S>)> = gens
        .iter()
        .enumerate()
        .flat_map(|(i, g)| {
            let k = (i + 1) as i32;
            [(k, g.clone()), (-k, g.inverse())]
        })
        .collect();
    let identity = Mat2::identity_like(&gens[0].a);
    let mut seen: HashSet<Mat2<S>> = HashSet::new();
    seen.insert(identity.psl_canon());
    let mut elements: Vec<(Word, Mat2<S>)> = vec![(Word::identity(), identity)];
    let mut truncated = false;
    let mut frontier: Vec<usize> = vec![0];
    'outer: for _ in 1..=max_len {
        let mut next = Vec::new();
        for &idx in &frontier {
            let (word, mat) = elements[idx].clone();
            for (letter, gmat) in &letters {
                let Some(w2) = word.push_reduced(*letter) else {
                    continue;
                };
                let m2 = mat.mul(gmat);
                let key = m2.psl_canon();
                if !seen.insert(key) {
                    continue;
                }
                if elements.len() >= cap {
                    truncated = true;
                    break 'outer;
                }
                next.push(elements.len());
                elements.push((w2, m2));
            }
        }
        if next.is_empty() {
            break;
        }
        frontier = next;
    }
    Ok(Enumeration {
        elements,
        truncated,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{rational_field, FieldElement};
    use rug::Rational;
    use std::collections::HashSet;

    fn qmat(entries: [(i64, i64); 4]) -> Mat2<FieldElement> {
        let f = rational_field();
        let el = |(n, d): (i64, i64)| FieldElement::from_rational(&f, Rational::from((n, d)));
        Mat2::new(el(entries[0]), el(entries[1]), el(entries[2]), el(entries[3])).unwrap()
    }

    fn s_t() -> Vec<Mat2<FieldElement>> {
        vec![
            qmat([(0, 1), (1, 1), (-1, 1), (0, 1)]),
            qmat([(1, 1), (1, 1), (0, 1), (1, 1)]),
        ]
    }

    #[test]
    fn single_generator_line() {
        let t = qmat([(1, 1), (1, 1), (0, 1), (1, 1)]);
        let e = enumerate(&[t], 3, 100_000).unwrap();
        assert_eq!(e.nontrivial_count(), 6); // T^{±1}, T^{±2}, T^{±3}
        assert!(!e.truncated);
    }

    #[test]
    fn modular_group_ball_sizes() {
        let gens = s_t();
        let expected = [3usize, 9, 19, 35, 61, 103, 171, 281, 459, 747];
        for (len, want) in expected.iter().enumerate() {
            let e = enumerate(&gens, len + 1, 100_000).unwrap();
            assert_eq!(e.nontrivial_count(), *want, "ball of radius {}", len + 1);
        }
    }

    #[test]
    fn no_duplicates_and_prefix_closure() {
        let gens = s_t();
        let e = enumerate(&gens, 5, 100_000).unwrap();
        let keys: HashSet<_> = e.elements.iter().map(|(_, m)| m.psl_canon()).collect();
        assert_eq!(keys.len(), e.elements.len());
        let words: HashSet<_> = e.elements.iter().map(|(w, _)| w.clone()).collect();
        for (w, _) in &e.elements {
            for k in 0..w.len() {
                assert!(
                    words.contains(&Word(w.0[..k].to_vec())),
                    "missing prefix of {:?}",
                    w
                );
            }
        }
    }

    #[test]
    fn empty_generators_rejected() {
        let gens: Vec<Mat2<FieldElement>> = vec![];
        assert_eq!(
            enumerate(&gens, 3, 100).unwrap_err(),
            WordsError::EmptyGeneratorSet
        );
    }

    #[test]
    fn cap_truncates() {
        let gens = s_t();
        let e = enumerate(&gens, 10, 5).unwrap();
        assert!(e.truncated);
        assert_eq!(e.elements.len(), 5);
    }

    #[test]
    fn word_formatting() {
        let w = Word(vec![2, 2, 2, 2, 1]);
        assert_eq!(w.format_with_names(&["S", "T"]), "T^4 S");
        let w2 = Word(vec![-2, -2]);
        assert_eq!(w2.format_with_names(&["S", "T"]), "T^-2");
        assert_eq!(Word::identity().format_with_names(&["S", "T"]), "e");
    }

    #[test]
    fn words_evaluate_to_their_matrices() {
        let gens = s_t();
        let e = enumerate(&gens, 4, 100_000).unwrap();
        for (w, m) in &e.elements {
            assert!(evaluate(w, &gens).eq_psl(m));
        }
    }

    #[test]
    fn concat_reduces_cascades() {
        let a = Word(vec![1, 2, -1]);
        let b = Word(vec![1, -2, -1, 3]);
        assert_eq!(a.concat(&b), Word(vec![3]));
        assert_eq!(a.concat(&a), Word(vec![1, 2, 2, -1]));
        let inv = Word(vec![1, -2, -1]);
        assert_eq!(a.concat(&inv), Word::identity());
    }
}
