//! Clip sequences: repeatedly delete the smallest-labeled vertex of degree 2
//! and record it. The recorded labels of a triangulated `n`-gon are exactly
//! the 312-avoiding permutations of `{1..n-2}`, and [`build_triangulation`]
//! inverts the map.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{is_side, Diagonal, Triangle, Triangulation, Vertex};
use crate::patterns::{not_avoiding, Permutation};

/// One clip: the removed vertex and the triangle it formed with its two
/// boundary neighbors at that moment.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ClipStep {
    pub label: Vertex,
    pub triangle: Triangle,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClipTrace {
    n_vertices: u32,
    steps: Vec<ClipStep>,
    #[serde(skip)]
    step_of_label: Vec<u32>,
}

impl ClipTrace {
    pub fn n_vertices(&self) -> u32 {
        self.n_vertices
    }

    pub fn steps(&self) -> &[ClipStep] {
        &self.steps
    }

    /// The triangle removed when `label` was clipped.
    pub fn triangle_of(&self, label: Vertex) -> Result<Triangle> {
        let max = self.n_vertices - 2;
        if label < 1 || label > max {
            return Err(Error::LabelOutOfRange { label, max });
        }
        Ok(self.steps[self.step_of_label[label as usize] as usize].triangle)
    }

    pub fn permutation(&self) -> Permutation {
        Permutation::from_vec_unchecked(self.steps.iter().map(|s| s.label).collect())
    }
}

/// Runs the clipping process.
///
/// Degrees start at two plus the number of incident diagonals; a clip
/// lowers the degree of both neighbors by one. Current ears sit in a
/// min-heap, so the whole run is `O(n log n)`.
pub fn clip_sequence(t: &Triangulation) -> Result<(Permutation, ClipTrace)> {
    let n = t.n_vertices();
    let size = n as usize + 1;
    let mut degree = t.degrees();
    let mut prev: Vec<Vertex> = (0..size as u32)
        .map(|v| if v <= 1 { n } else { v - 1 })
        .collect();
    let mut next: Vec<Vertex> = (0..size as u32)
        .map(|v| if v == n { 1 } else { v + 1 })
        .collect();
    let mut alive = vec![true; size];

    let mut ears: BinaryHeap<Reverse<Vertex>> = (1..=n)
        .filter(|&v| degree[v as usize] == 2)
        .map(Reverse)
        .collect();
    let mut ear_count = ears.len();

    let mut steps = Vec::with_capacity(n as usize - 2);
    let mut step_of_label = vec![0u32; n as usize - 1];
    let mut remaining = n;
    while remaining > 2 {
        if remaining >= 4 && ear_count < 2 {
            return Err(Error::invariant(
                format!("fewer than two ears with {remaining} vertices left"),
                t,
            ));
        }
        let Some(Reverse(v)) = ears.pop() else {
            return Err(Error::invariant("no vertex of degree 2 left", t));
        };
        let vi = v as usize;
        if !alive[vi] || degree[vi] != 2 {
            return Err(Error::invariant(format!("stale ear {v}"), t));
        }
        if v > n - 2 {
            return Err(Error::invariant(
                format!("clipped label {v} outside 1..={}", n - 2),
                t,
            ));
        }
        let (u, w) = (prev[vi], next[vi]);
        step_of_label[vi] = steps.len() as u32;
        steps.push(ClipStep {
            label: v,
            triangle: Triangle::new(u, v, w),
        });
        alive[vi] = false;
        ear_count -= 1;
        next[u as usize] = w;
        prev[w as usize] = u;
        for x in [u, w] {
            let d = &mut degree[x as usize];
            *d -= 1;
            match *d {
                2 => {
                    ear_count += 1;
                    ears.push(Reverse(x));
                }
                1 => ear_count -= 1,
                _ => {}
            }
        }
        remaining -= 1;
    }

    if !(alive[n as usize - 1] && alive[n as usize]) {
        return Err(Error::invariant(
            format!("surviving edge is not {{{}, {n}}}", n - 1),
            t,
        ));
    }
    let trace = ClipTrace {
        n_vertices: n,
        steps,
        step_of_label,
    };
    Ok((trace.permutation(), trace))
}

/// Rebuilds the unique triangulation of the `(m+2)`-gon whose clip
/// sequence is `sigma`.
///
/// A pending piece is a boundary path `w0, lo, lo+1, …, hi, w1` closed by
/// the chord `w0–w1`, together with the slice of `sigma` that must clip its
/// interior. The slice's last entry `k` is the apex over the chord; the
/// entries before it split by position into the pieces `w0, lo..k-1, k` and
/// `k, k+1..hi, w1`. A last entry outside `lo..=hi` means `sigma` is not in
/// normal form, i.e. it contains 312.
pub fn build_triangulation(sigma: &Permutation) -> Result<Triangulation> {
    let m = sigma.len() as u32;
    if m == 0 {
        return Err(Error::PolygonTooSmall(2));
    }
    let n = m + 2;
    struct Piece {
        w0: Vertex,
        w1: Vertex,
        lo: u32,
        hi: u32,
        start: usize,
    }
    let mut diagonals = Vec::with_capacity(m as usize - 1);
    let mut pending = vec![Piece {
        w0: n,
        w1: n - 1,
        lo: 1,
        hi: m,
        start: 0,
    }];
    while let Some(Piece {
        w0,
        w1,
        lo,
        hi,
        start,
    }) = pending.pop()
    {
        let len = (hi - lo + 1) as usize;
        let k = sigma[start + len - 1];
        if k < lo || k > hi {
            return Err(not_avoiding(sigma));
        }
        for x in [w0, w1] {
            if !is_side(x, k, n) {
                diagonals.push(Diagonal::new(x, k));
            }
        }
        if k > lo {
            pending.push(Piece {
                w0,
                w1: k,
                lo,
                hi: k - 1,
                start,
            });
        }
        if k < hi {
            pending.push(Piece {
                w0: k,
                w1,
                lo: k + 1,
                hi,
                start: start + (k - lo) as usize,
            });
        }
    }
    Triangulation::new(n, diagonals)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tri(n: u32, pairs: &[(u32, u32)]) -> Triangulation {
        Triangulation::new(n, pairs.iter().map(|&(a, b)| Diagonal::new(a, b))).unwrap()
    }

    fn perm(v: &[u32]) -> Permutation {
        Permutation::new(v.to_vec()).unwrap()
    }

    #[test]
    fn clip_examples() {
        assert_eq!(
            clip_sequence(&tri(4, &[(1, 3)])).unwrap().0.as_slice(),
            &[2, 1]
        );
        assert_eq!(
            clip_sequence(&tri(5, &[(1, 3), (1, 4)]))
                .unwrap()
                .0
                .as_slice(),
            &[2, 3, 1]
        );
        assert_eq!(
            clip_sequence(&tri(6, &[(2, 6), (3, 6), (4, 6)]))
                .unwrap()
                .0
                .as_slice(),
            &[1, 2, 3, 4]
        );
        assert_eq!(clip_sequence(&tri(3, &[])).unwrap().0.as_slice(), &[1]);
    }

    #[test]
    fn build_examples() {
        assert_eq!(
            build_triangulation(&perm(&[2, 3, 1, 4])).unwrap(),
            tri(6, &[(1, 3), (1, 4), (4, 6)])
        );
        assert_eq!(
            build_triangulation(&perm(&[3, 2, 1])).unwrap(),
            tri(5, &[(1, 4), (2, 4)])
        );
        assert_eq!(build_triangulation(&perm(&[1])).unwrap(), tri(3, &[]));
        assert_eq!(
            build_triangulation(&perm(&[1, 2, 3, 4])).unwrap(),
            tri(6, &[(2, 6), (3, 6), (4, 6)])
        );
    }

    #[test]
    fn build_rejects_312_with_witness() {
        match build_triangulation(&perm(&[3, 1, 2])) {
            Err(Error::NotAvoiding(w)) => assert_eq!(w.values, [3, 1, 2]),
            other => panic!("expected NotAvoiding, got {other:?}"),
        }
        assert!(matches!(
            build_triangulation(&perm(&[2, 4, 1, 3])),
            Err(Error::NotAvoiding(_))
        ));
    }

    #[test]
    fn triangle_of_label_examples() {
        let (_, trace) = clip_sequence(&tri(5, &[(1, 4), (2, 4)])).unwrap();
        assert_eq!(trace.triangle_of(3).unwrap(), Triangle::new(2, 3, 4));
        assert_eq!(trace.triangle_of(1).unwrap(), Triangle::new(1, 4, 5));
        assert!(matches!(
            trace.triangle_of(7),
            Err(Error::LabelOutOfRange { label: 7, max: 3 })
        ));
        assert!(trace.triangle_of(0).is_err());
    }

    #[test]
    fn last_step_uses_reference_edge() {
        let t = tri(6, &[(1, 3), (1, 4), (4, 6)]);
        let (p, trace) = clip_sequence(&t).unwrap();
        let last = trace.steps().last().unwrap();
        assert_eq!(last.triangle, Triangle::new(*p.last().unwrap(), 5, 6));
    }
}
