//! Exhaustive generators, Catalan numbers, uniform random 312-avoiders and
//! the verification suites built on them.
//!
//! Every generator is lazy and deterministic:
//! - triangulations split on the triangle over the reference edge
//!   `(n-1, n)`, apex ascending, left piece before right piece;
//! - permutations come out in lexicographic order;
//! - dissections are lexicographically ordered subsets of the
//!   lexicographically ordered diagonals.

mod verify;

use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::model::{crossing, is_side, Diagonal, Dissection, Triangulation, Vertex};
use crate::patterns::Permutation;
use crate::tree::Shape;

pub use verify::{
    verify_angulations, verify_clip_bijection, verify_dissection_bijection, verify_postorder,
    VerificationReport,
};

/// Catalan number by the convolution recurrence.
pub fn catalan(m: u32) -> BigUint {
    let mut c: Vec<BigUint> = vec![BigUint::from(1u32)];
    for k in 0..m as usize {
        let next = (0..=k).map(|i| &c[i] * &c[k - i]).sum();
        c.push(next);
    }
    c.pop().unwrap()
}

/// Upper limits on exhaustive enumeration.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Bounds {
    /// Largest polygon size for triangulations and dissections.
    pub polygon: u32,
    /// Largest permutation length.
    pub permutation: u32,
}

impl Default for Bounds {
    fn default() -> Self {
        Bounds {
            polygon: 14,
            permutation: 14,
        }
    }
}

impl Bounds {
    pub const POLYGON_ENV: &'static str = "CLIPSEQ_MAX_POLYGON";
    pub const PERMUTATION_ENV: &'static str = "CLIPSEQ_MAX_PERMUTATION";

    /// Defaults, overridden by `CLIPSEQ_MAX_POLYGON` and
    /// `CLIPSEQ_MAX_PERMUTATION` when set to a number.
    pub fn from_env() -> Self {
        let read = |key: &str, default: u32| {
            std::env::var(key)
                .ok()
                .and_then(|v| v.trim().parse().ok())
                .unwrap_or(default)
        };
        let d = Bounds::default();
        Bounds {
            polygon: read(Self::POLYGON_ENV, d.polygon),
            permutation: read(Self::PERMUTATION_ENV, d.permutation),
        }
    }

    fn check(what: &'static str, value: u32, bound: u32) -> Result<()> {
        if value > bound {
            return Err(Error::BoundExceeded { what, value, bound });
        }
        Ok(())
    }

    pub fn triangulations(&self, n: u32) -> Result<Triangulations> {
        Self::check("polygon size", n, self.polygon)?;
        if n < 3 {
            return Err(Error::PolygonTooSmall(n));
        }
        Ok(Triangulations::new(n))
    }

    pub fn avoiders(&self, m: u32) -> Result<Avoiders> {
        Self::check("permutation length", m, self.permutation)?;
        Ok(Avoiders::all(m))
    }

    pub fn decent_avoiders(&self, n: u32) -> Result<Avoiders> {
        Self::check("permutation length", n, self.permutation)?;
        Ok(Avoiders::decent(n))
    }

    pub fn dissections(&self, n: u32, d: u32) -> Result<Dissections> {
        Self::check("polygon size", n, self.polygon)?;
        if n < 3 {
            return Err(Error::PolygonTooSmall(n));
        }
        if d > n - 3 {
            return Err(Error::BadDiagonalCount { n, d });
        }
        Ok(Dissections::new(n, d))
    }
}

pub fn all_triangulations(n: u32) -> Result<Triangulations> {
    Bounds::default().triangulations(n)
}

pub fn all_312_avoiders(m: u32) -> Result<Avoiders> {
    Bounds::default().avoiders(m)
}

pub fn all_decent_312_avoiders(n: u32) -> Result<Avoiders> {
    Bounds::default().decent_avoiders(n)
}

pub fn all_dissections(n: u32, d: u32) -> Result<Dissections> {
    Bounds::default().dissections(n, d)
}

/// All triangulations of an `n`-gon.
pub struct Triangulations {
    n: u32,
    frames: Vec<TriFrame>,
}

#[derive(Clone, Copy)]
struct Piece {
    w0: Vertex,
    w1: Vertex,
    lo: u32,
    hi: u32,
}

struct TriFrame {
    pending: Vec<Piece>,
    diagonals: Vec<Diagonal>,
    next_apex: u32,
}

impl Triangulations {
    pub(crate) fn new(n: u32) -> Self {
        let top = Piece {
            w0: n,
            w1: n - 1,
            lo: 1,
            hi: n - 2,
        };
        Triangulations {
            n,
            frames: vec![TriFrame {
                pending: vec![top],
                diagonals: Vec::new(),
                next_apex: 1,
            }],
        }
    }
}

impl Iterator for Triangulations {
    type Item = Triangulation;

    fn next(&mut self) -> Option<Triangulation> {
        let n = self.n;
        loop {
            let frame = self.frames.last_mut()?;
            let Some(&piece) = frame.pending.first() else {
                let frame = self.frames.pop().unwrap();
                return Some(
                    Triangulation::new(n, frame.diagonals)
                        .expect("generator emits valid triangulations"),
                );
            };
            if frame.next_apex > piece.hi {
                self.frames.pop();
                continue;
            }
            let k = frame.next_apex;
            frame.next_apex += 1;
            let mut pending = Vec::with_capacity(frame.pending.len() + 1);
            if k > piece.lo {
                pending.push(Piece {
                    w0: piece.w0,
                    w1: k,
                    lo: piece.lo,
                    hi: k - 1,
                });
            }
            if k < piece.hi {
                pending.push(Piece {
                    w0: k,
                    w1: piece.w1,
                    lo: k + 1,
                    hi: piece.hi,
                });
            }
            pending.extend_from_slice(&frame.pending[1..]);
            let mut diagonals = frame.diagonals.clone();
            for x in [piece.w0, piece.w1] {
                if !is_side(x, k, n) {
                    diagonals.push(Diagonal::new(x, k));
                }
            }
            let next_apex = pending.first().map_or(0, |p| p.lo);
            self.frames.push(TriFrame {
                pending,
                diagonals,
                next_apex,
            });
        }
    }
}

/// 312-avoiding permutations in lexicographic order, optionally restricted
/// to decent ones.
///
/// Prefixes are extended depth-first. Each frame carries the forbidden
/// value intervals of its prefix (see [`crate::patterns::find_312`]), so
/// only avoiding prefixes are ever explored; decency prunes on `UU` and a
/// leading ascent.
pub struct Avoiders {
    n: u32,
    decent: bool,
    prefix: Vec<u32>,
    used: Vec<bool>,
    frames: Vec<AvoiderFrame>,
    empty_pending: bool,
}

struct AvoiderFrame {
    next: u32,
    gaps: Vec<(u32, u32)>,
    max: u32,
}

impl Avoiders {
    pub(crate) fn all(n: u32) -> Self {
        Self::with(n, false)
    }

    pub(crate) fn decent(n: u32) -> Self {
        Self::with(n, true)
    }

    fn with(n: u32, decent: bool) -> Self {
        let frames = if n == 0 {
            Vec::new()
        } else {
            vec![AvoiderFrame {
                next: 1,
                gaps: Vec::new(),
                max: 0,
            }]
        };
        Avoiders {
            n,
            decent,
            prefix: Vec::with_capacity(n as usize),
            used: vec![false; n as usize + 1],
            frames,
            // The empty permutation avoids everything but is never decent.
            empty_pending: n == 0 && !decent,
        }
    }

    /// Gap stack after appending `x`, or `None` if `x` completes a 312.
    fn extend(gaps: &[(u32, u32)], max: u32, x: u32) -> Option<Vec<(u32, u32)>> {
        let keep = gaps
            .iter()
            .rposition(|&(lo, _)| lo < x)
            .map_or(0, |i| i + 1);
        if let Some(&(lo, hi)) = gaps[..keep].last() {
            if lo < x && x < hi {
                return None;
            }
        }
        let mut out = gaps[..keep].to_vec();
        if x < max {
            out.push((x, max));
        }
        Some(out)
    }

    fn shape_ok(&self, x: u32) -> bool {
        if !self.decent {
            return true;
        }
        match self.prefix.as_slice() {
            [] => true,
            [a] => x < *a,
            [.., a, b] => !(a < b && *b < x),
        }
    }
}

impl Iterator for Avoiders {
    type Item = Permutation;

    fn next(&mut self) -> Option<Permutation> {
        if std::mem::take(&mut self.empty_pending) {
            return Some(Permutation::identity(0));
        }
        let n = self.n;
        loop {
            let depth = self.frames.len();
            let frame = self.frames.last_mut()?;
            let mut chosen = None;
            while frame.next <= n {
                let x = frame.next;
                frame.next += 1;
                if self.used[x as usize] {
                    continue;
                }
                if let Some(gaps) = Avoiders::extend(&frame.gaps, frame.max, x) {
                    chosen = Some((x, gaps, frame.max.max(x)));
                    break;
                }
            }
            let Some((x, gaps, max)) = chosen else {
                self.frames.pop();
                if let Some(v) = self.prefix.pop() {
                    self.used[v as usize] = false;
                }
                continue;
            };
            if !self.shape_ok(x) {
                continue;
            }
            if depth as u32 == n {
                let mut out = self.prefix.clone();
                out.push(x);
                if self.decent && !crate::patterns::is_decent(&out) {
                    continue;
                }
                return Some(Permutation::from_vec_unchecked(out));
            }
            self.prefix.push(x);
            self.used[x as usize] = true;
            self.frames.push(AvoiderFrame { next: 1, gaps, max });
        }
    }
}

/// All `d`-element non-crossing diagonal sets of an `n`-gon.
pub struct Dissections {
    n: u32,
    d: usize,
    diagonals: Vec<Diagonal>,
    chosen: Vec<usize>,
    cursor: usize,
    done: bool,
}

impl Dissections {
    pub(crate) fn new(n: u32, d: u32) -> Self {
        let diagonals = (1..=n)
            .flat_map(|a| (a + 2..=n).map(move |b| (a, b)))
            .filter(|&(a, b)| !is_side(a, b, n))
            .map(|(a, b)| Diagonal::new(a, b))
            .collect();
        Dissections {
            n,
            d: d as usize,
            diagonals,
            chosen: Vec::new(),
            cursor: 0,
            done: false,
        }
    }

    fn emit(&self) -> Dissection {
        Dissection::new(self.n, self.chosen.iter().map(|&i| self.diagonals[i]))
            .expect("generator emits valid dissections")
    }

    /// Drop the last choice and continue after it. Returns false when
    /// nothing is left to drop.
    fn backtrack(&mut self) -> bool {
        match self.chosen.pop() {
            Some(i) => {
                self.cursor = i + 1;
                true
            }
            None => false,
        }
    }
}

impl Iterator for Dissections {
    type Item = Dissection;

    fn next(&mut self) -> Option<Dissection> {
        while !self.done {
            if self.chosen.len() == self.d {
                let out = self.emit();
                if !self.backtrack() {
                    self.done = true;
                }
                return Some(out);
            }
            let needed = self.d - self.chosen.len();
            if self.cursor + needed > self.diagonals.len() {
                if !self.backtrack() {
                    self.done = true;
                }
                continue;
            }
            let candidate = self.diagonals[self.cursor];
            let fits = self
                .chosen
                .iter()
                .all(|&i| !crossing(self.diagonals[i], candidate));
            if fits {
                self.chosen.push(self.cursor);
            }
            self.cursor += 1;
        }
        None
    }
}

/// A uniformly random 312-avoider of length `m`, reproducible from `seed`.
///
/// Grows a uniform random binary tree with `m` internal nodes by Rémy's
/// insertion and reads its shape through the dual-tree bijection.
pub fn random_312_avoider(m: u32, seed: u64) -> Permutation {
    const NONE: u32 = u32::MAX;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let total = 2 * m as usize + 1;
    let mut children = vec![[NONE; 2]; total];
    let mut parent = vec![NONE; total];
    let mut root = 0u32;
    for i in 0..m {
        let x = rng.random_range(0..2 * i + 1);
        let node = 2 * i + 1;
        let leaf = 2 * i + 2;
        let p = parent[x as usize];
        if p == NONE {
            root = node;
        } else {
            let slot = children[p as usize].iter().position(|&c| c == x).unwrap();
            children[p as usize][slot] = node;
        }
        parent[node as usize] = p;
        children[node as usize] = if rng.random::<bool>() {
            [x, leaf]
        } else {
            [leaf, x]
        };
        parent[x as usize] = node;
        parent[leaf as usize] = node;
    }
    // Leaves are exactly the nodes without children.
    let internal = |v: u32| children[v as usize][0] != NONE;
    let mut preorder = Vec::with_capacity(m as usize);
    let mut stack = if m > 0 { vec![root] } else { vec![] };
    while let Some(v) = stack.pop() {
        let [l, r] = children[v as usize];
        preorder.push((internal(l), internal(r)));
        if internal(r) {
            stack.push(r);
        }
        if internal(l) {
            stack.push(l);
        }
    }
    Shape::from_preorder(preorder).post_order_labels()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn as_vecs(it: impl Iterator<Item = Permutation>) -> Vec<Vec<u32>> {
        it.map(|p| p.into_vec()).collect()
    }

    #[test]
    fn catalan_values() {
        assert_eq!(catalan(0), BigUint::from(1u32));
        assert_eq!(catalan(4), BigUint::from(14u32));
        assert_eq!(catalan(10), BigUint::from(16796u32));
    }

    #[test]
    fn triangulation_counts() {
        let squares: Vec<String> = all_triangulations(4)
            .unwrap()
            .map(|t| t.to_string())
            .collect();
        assert_eq!(squares, vec!["4; 1-3", "4; 2-4"]);
        assert_eq!(all_triangulations(5).unwrap().count(), 5);
        assert_eq!(all_triangulations(6).unwrap().count(), 14);
        assert_eq!(all_triangulations(3).unwrap().count(), 1);
        assert!(matches!(
            all_triangulations(15),
            Err(Error::BoundExceeded { .. })
        ));
    }

    #[test]
    fn avoider_examples() {
        assert_eq!(
            as_vecs(all_312_avoiders(3).unwrap()),
            vec![
                vec![1, 2, 3],
                vec![1, 3, 2],
                vec![2, 1, 3],
                vec![2, 3, 1],
                vec![3, 2, 1]
            ]
        );
        assert_eq!(as_vecs(all_312_avoiders(1).unwrap()), vec![vec![1]]);
        assert_eq!(all_312_avoiders(4).unwrap().count(), 14);
        assert_eq!(
            as_vecs(all_312_avoiders(0).unwrap()),
            vec![Vec::<u32>::new()]
        );
    }

    #[test]
    fn decent_examples() {
        assert_eq!(
            as_vecs(all_decent_312_avoiders(3).unwrap()),
            vec![vec![3, 2, 1]]
        );
        assert_eq!(
            as_vecs(all_decent_312_avoiders(4).unwrap()),
            vec![vec![2, 1, 4, 3], vec![3, 2, 4, 1], vec![4, 3, 2, 1]]
        );
        assert_eq!(all_decent_312_avoiders(1).unwrap().count(), 0);
        assert_eq!(all_decent_312_avoiders(2).unwrap().count(), 1);
    }

    #[test]
    fn dissection_examples() {
        let d: Vec<String> = all_dissections(4, 1)
            .unwrap()
            .map(|d| d.to_string())
            .collect();
        assert_eq!(d, vec!["4; 1-3", "4; 2-4"]);
        assert_eq!(all_dissections(5, 1).unwrap().count(), 5);
        assert_eq!(all_dissections(6, 2).unwrap().count(), 21);
        assert_eq!(all_dissections(6, 0).unwrap().count(), 1);
        assert!(matches!(
            all_dissections(5, 3),
            Err(Error::BadDiagonalCount { .. })
        ));
    }

    #[test]
    fn random_is_deterministic() {
        assert_eq!(random_312_avoider(1, 7).as_slice(), &[1]);
        assert_eq!(random_312_avoider(5, 42), random_312_avoider(5, 42));
        assert!(random_312_avoider(0, 1).is_empty());
        let p = random_312_avoider(200, 9);
        assert!(crate::patterns::is_312_avoiding(&p));
    }
}
