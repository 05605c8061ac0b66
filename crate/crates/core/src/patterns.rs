//! Permutations and the pattern machinery around 312-avoidance: the fast
//! and cubic-time avoidance tests, the `alpha · beta · k` normal form of
//! 312-avoiders, up/down words and descending runs.

use std::fmt;
use std::ops::Deref;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A permutation of `{1, …, n}` in one-line notation. `n` may be zero.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<u32>", into = "Vec<u32>")]
pub struct Permutation(Vec<u32>);

impl Permutation {
    /// Checks that `values` contains each of `1..=len` exactly once.
    pub fn new(values: Vec<u32>) -> Result<Self> {
        let n = values.len();
        let mut seen = vec![false; n + 1];
        for &v in &values {
            if v == 0 || v as usize > n {
                return Err(Error::NotAPermutation(format!(
                    "value {v} is outside 1..={n}"
                )));
            }
            if std::mem::replace(&mut seen[v as usize], true) {
                return Err(Error::NotAPermutation(format!("value {v} repeats")));
            }
        }
        Ok(Permutation(values))
    }

    pub(crate) fn from_vec_unchecked(values: Vec<u32>) -> Self {
        debug_assert!(Permutation::new(values.clone()).is_ok());
        Permutation(values)
    }

    pub fn identity(n: u32) -> Self {
        Permutation((1..=n).collect())
    }

    pub fn decreasing(n: u32) -> Self {
        Permutation((1..=n).rev().collect())
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<u32> {
        self.0
    }
}

impl Deref for Permutation {
    type Target = [u32];

    fn deref(&self) -> &[u32] {
        &self.0
    }
}

impl TryFrom<Vec<u32>> for Permutation {
    type Error = Error;

    fn try_from(values: Vec<u32>) -> Result<Self> {
        Permutation::new(values)
    }
}

impl From<Permutation> for Vec<u32> {
    fn from(p: Permutation) -> Self {
        p.0
    }
}

/// Space-separated one-line notation.
impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

/// An occurrence of the pattern 312: positions `i < j < k` (0-based) with
/// `values[j] < values[k] < values[i]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Witness312 {
    pub positions: [usize; 3],
    pub values: [u32; 3],
}

impl fmt::Display for Witness312 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [i, j, k] = self.positions;
        let [x, y, z] = self.values;
        write!(
            f,
            "entries {x} {y} {z} at positions {} {} {} form a 312 pattern",
            i + 1,
            j + 1,
            k + 1
        )
    }
}

/// Cubic-time reference test: some `i < j < k` has `a_j < a_k < a_i`.
pub fn contains_312_naive(values: &[u32]) -> bool {
    let n = values.len();
    for i in 0..n {
        for j in i + 1..n {
            if values[j] >= values[i] {
                continue;
            }
            for k in j + 1..n {
                if values[j] < values[k] && values[k] < values[i] {
                    return true;
                }
            }
        }
    }
    false
}

/// Finds a 312 occurrence with one left-to-right pass.
///
/// Every earlier inversion `a_i > a_j` forbids later values in the open
/// interval `(a_j, a_i)`. The union of those intervals is kept as a stack of
/// disjoint intervals sorted by value; a new entry pops every interval lying
/// above it and either lands inside the top survivor (a witness) or opens
/// `(x, prefix max)`.
pub fn find_312(values: &[u32]) -> Option<Witness312> {
    struct Gap {
        low: u32,
        high: u32,
        low_pos: usize,
        high_pos: usize,
    }
    let mut gaps: Vec<Gap> = Vec::new();
    let mut max: Option<(u32, usize)> = None;
    for (pos, &x) in values.iter().enumerate() {
        while gaps.last().is_some_and(|g| g.low > x) {
            gaps.pop();
        }
        if let Some(g) = gaps.last() {
            if g.low < x && x < g.high {
                return Some(Witness312 {
                    positions: [g.high_pos, g.low_pos, pos],
                    values: [g.high, g.low, x],
                });
            }
        }
        match max {
            Some((m, m_pos)) if m > x => gaps.push(Gap {
                low: x,
                high: m,
                low_pos: pos,
                high_pos: m_pos,
            }),
            _ => max = Some((x, pos)),
        }
    }
    None
}

pub fn is_312_avoiding(values: &[u32]) -> bool {
    find_312(values).is_none()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Step {
    #[serde(rename = "U")]
    Up,
    #[serde(rename = "D")]
    Down,
}

/// The ascent/descent word of a sequence.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct UpDownWord(Vec<Step>);

impl UpDownWord {
    pub fn steps(&self) -> &[Step] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl fmt::Display for UpDownWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.0 {
            f.write_str(match s {
                Step::Up => "U",
                Step::Down => "D",
            })?;
        }
        Ok(())
    }
}

pub fn up_down_pattern(values: &[u32]) -> UpDownWord {
    UpDownWord(
        values
            .windows(2)
            .map(|w| if w[0] > w[1] { Step::Down } else { Step::Up })
            .collect(),
    )
}

/// Decent: the up/down word starts and ends with `D` and has no `UU`.
/// Sequences shorter than two are never decent.
pub fn is_decent(values: &[u32]) -> bool {
    let word = up_down_pattern(values);
    let steps = word.steps();
    match (steps.first(), steps.last()) {
        (Some(Step::Down), Some(Step::Down)) => !steps
            .windows(2)
            .any(|w| w[0] == Step::Up && w[1] == Step::Up),
        _ => false,
    }
}

/// Maximal strictly decreasing contiguous blocks.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunDecomposition {
    runs: Vec<Vec<u32>>,
}

impl RunDecomposition {
    pub fn runs(&self) -> &[Vec<u32>] {
        &self.runs
    }

    pub fn run_count(&self) -> usize {
        self.runs.len()
    }

    /// Descents inside each run: run length minus one.
    pub fn descent_counts(&self) -> Vec<usize> {
        self.runs.iter().map(|r| r.len() - 1).collect()
    }
}

pub fn descending_runs(values: &[u32]) -> RunDecomposition {
    let mut runs: Vec<Vec<u32>> = Vec::new();
    for &v in values {
        match runs.last_mut() {
            Some(run) if *run.last().unwrap() > v => run.push(v),
            _ => runs.push(vec![v]),
        }
    }
    RunDecomposition { runs }
}

pub fn has_run_signature(values: &[u32], signature: &[usize]) -> bool {
    descending_runs(values).descent_counts() == signature
}

/// The normal form `alpha · beta · k` of a 312-avoider of `{1..m}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decomposition {
    /// The last entry.
    pub k: u32,
    /// A 312-avoider of `{1..k-1}`.
    pub alpha: Permutation,
    /// The `m - k` entries before `k`; exactly the values `{k+1..m}`.
    pub beta: Vec<u32>,
}

pub fn decompose_312(p: &Permutation) -> Result<Decomposition> {
    let Some(&k) = p.last() else {
        return Err(Error::NotAPermutation(
            "cannot decompose the empty permutation".into(),
        ));
    };
    let split = k as usize - 1;
    let (alpha, rest) = p[..p.len() - 1].split_at(split);
    let partition_ok = alpha.iter().all(|&v| v < k) && rest.iter().all(|&v| v > k);
    if !partition_ok || !is_312_avoiding(alpha) || !is_312_avoiding(rest) {
        return Err(not_avoiding(p));
    }
    Ok(Decomposition {
        k,
        alpha: Permutation::from_vec_unchecked(alpha.to_vec()),
        beta: rest.to_vec(),
    })
}

/// Inverse of [`decompose_312`]: `alpha · beta · k` with `k = |alpha| + 1`.
pub fn compose_312(alpha: &Permutation, beta: &[u32], m: u32) -> Result<Permutation> {
    let k = alpha.len() as u32 + 1;
    if k > m {
        return Err(Error::BadValueSets(format!(
            "alpha has {} entries but m = {m}",
            alpha.len()
        )));
    }
    let mut expected: Vec<u32> = beta.to_vec();
    expected.sort_unstable();
    if !expected.iter().copied().eq(k + 1..=m) {
        return Err(Error::BadValueSets(format!(
            "beta must use exactly the values {}..={m}",
            k + 1
        )));
    }
    if let Some(w) = find_312(alpha) {
        return Err(Error::NotAvoiding(w));
    }
    if let Some(mut w) = find_312(beta) {
        w.positions.iter_mut().for_each(|p| *p += alpha.len());
        return Err(Error::NotAvoiding(w));
    }
    let mut values = Vec::with_capacity(m as usize);
    values.extend_from_slice(alpha);
    values.extend_from_slice(beta);
    values.push(k);
    Ok(Permutation::from_vec_unchecked(values))
}

/// Error for a permutation known to contain 312.
pub(crate) fn not_avoiding(p: &[u32]) -> Error {
    match find_312(p) {
        Some(w) => Error::NotAvoiding(w),
        None => Error::invariant(
            "normal-form split failed but no 312 occurrence exists",
            format!("{p:?}"),
        ),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn perm(v: &[u32]) -> Permutation {
        Permutation::new(v.to_vec()).unwrap()
    }

    #[test]
    fn permutation_rejects_gaps_and_repeats() {
        assert!(Permutation::new(vec![2, 2, 3]).is_err());
        assert!(Permutation::new(vec![1, 3]).is_err());
        assert!(Permutation::new(vec![0, 1]).is_err());
        assert!(Permutation::new(vec![]).is_ok());
    }

    #[test]
    fn up_down_examples() {
        assert_eq!(up_down_pattern(&[2, 3, 1, 4]).to_string(), "UDU");
        assert_eq!(up_down_pattern(&[4, 3, 5, 2, 6, 1]).to_string(), "DUDUD");
        assert_eq!(
            up_down_pattern(&[6, 5, 4, 8, 7, 3, 9, 2, 1]).to_string(),
            "DDUDDUDD"
        );
        assert!(up_down_pattern(&[1]).is_empty());
    }

    #[test]
    fn decency_examples() {
        assert!(is_decent(&[2, 1]));
        assert!(!is_decent(&[2, 3, 1, 4]));
        assert!(is_decent(&[6, 5, 4, 8, 7, 3, 9, 2, 1]));
        assert!(!is_decent(&[1]));
        assert!(!is_decent(&[]));
        // UU in the middle
        assert!(!is_decent(&[2, 1, 3, 5, 4]));
    }

    #[test]
    fn run_examples() {
        let r = descending_runs(&[4, 3, 5, 2, 6, 1]);
        assert_eq!(r.runs(), &[vec![4, 3], vec![5, 2], vec![6, 1]]);
        assert_eq!(r.run_count(), 3);
        let r = descending_runs(&[6, 5, 4, 8, 7, 3, 9, 2, 1]);
        assert_eq!(r.runs(), &[vec![6, 5, 4], vec![8, 7, 3], vec![9, 2, 1]]);
        assert_eq!(r.descent_counts(), vec![2, 2, 2]);
        let r = descending_runs(&[1, 2, 3, 4]);
        assert_eq!(r.run_count(), 4);
    }

    #[test]
    fn naive_examples() {
        assert!(contains_312_naive(&[3, 1, 2]));
        assert!(!contains_312_naive(&[3, 2, 4, 1]));
        assert!(contains_312_naive(&[4, 1, 3, 2]));
    }

    #[test]
    fn fast_examples() {
        assert!(is_312_avoiding(&[2, 1, 4, 3]));
        assert!(is_312_avoiding(&[1, 3, 2, 5, 6, 4]));
        assert!(!is_312_avoiding(&[3, 5, 1, 4, 2]));
    }

    #[test]
    fn witness_is_a_real_occurrence() {
        let w = find_312(&[3, 5, 1, 4, 2]).unwrap();
        let [i, j, k] = w.positions;
        assert!(i < j && j < k);
        let v = [3, 5, 1, 4, 2];
        assert_eq!(w.values, [v[i], v[j], v[k]]);
        assert!(v[j] < v[k] && v[k] < v[i]);
    }

    #[test]
    fn decompose_examples() {
        let d = decompose_312(&perm(&[1, 3, 2, 5, 6, 4])).unwrap();
        assert_eq!(
            (d.k, d.alpha.as_slice(), d.beta.as_slice()),
            (4, &[1, 3, 2][..], &[5, 6][..])
        );
        let d = decompose_312(&perm(&[2, 3, 1])).unwrap();
        assert_eq!((d.k, d.alpha.len(), d.beta.as_slice()), (1, 0, &[2, 3][..]));
        let d = decompose_312(&perm(&[2, 1])).unwrap();
        assert_eq!((d.k, d.alpha.len(), d.beta.as_slice()), (1, 0, &[2][..]));
        assert!(matches!(
            decompose_312(&perm(&[3, 1, 2])),
            Err(Error::NotAvoiding(_))
        ));
    }

    #[test]
    fn compose_examples() {
        assert_eq!(
            compose_312(&perm(&[1, 3, 2]), &[5, 6], 6)
                .unwrap()
                .as_slice(),
            &[1, 3, 2, 5, 6, 4]
        );
        assert_eq!(
            compose_312(&perm(&[]), &[2, 3], 3).unwrap().as_slice(),
            &[2, 3, 1]
        );
        assert_eq!(compose_312(&perm(&[]), &[], 1).unwrap().as_slice(), &[1]);
        assert!(matches!(
            compose_312(&perm(&[1]), &[4, 5], 4),
            Err(Error::BadValueSets(_))
        ));
        assert!(matches!(
            compose_312(&perm(&[]), &[4, 2, 3], 4),
            Err(Error::NotAvoiding(_))
        ));
    }

    #[test]
    fn run_signature_examples() {
        assert!(has_run_signature(&[2, 1, 4, 3], &[1, 1]));
        assert!(has_run_signature(&[6, 5, 4, 8, 7, 3, 9, 2, 1], &[2, 2, 2]));
        assert!(!has_run_signature(&[3, 2, 1], &[1, 1]));
    }
}
