//! Labeled convex polygons and their diagonal sets.
//!
//! Vertices are labeled `1..=n` counterclockwise; the sides are `(i, i+1)`
//! and `(n, 1)`. Everything here is purely combinatorial: coordinates only
//! show up when rendering.

use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Vertex = u32;

/// A chord between two polygon vertices, stored with `a < b`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(into = "[Vertex; 2]", from = "[Vertex; 2]")]
pub struct Diagonal {
    a: Vertex,
    b: Vertex,
}

impl Diagonal {
    pub fn new(x: Vertex, y: Vertex) -> Self {
        if x <= y {
            Diagonal { a: x, b: y }
        } else {
            Diagonal { a: y, b: x }
        }
    }

    pub fn a(&self) -> Vertex {
        self.a
    }

    pub fn b(&self) -> Vertex {
        self.b
    }

    pub fn contains(&self, v: Vertex) -> bool {
        self.a == v || self.b == v
    }
}

impl From<[Vertex; 2]> for Diagonal {
    fn from([x, y]: [Vertex; 2]) -> Self {
        Diagonal::new(x, y)
    }
}

impl From<Diagonal> for [Vertex; 2] {
    fn from(d: Diagonal) -> Self {
        [d.a, d.b]
    }
}

impl fmt::Display for Diagonal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-{}", self.a, self.b)
    }
}

/// True iff the two chords cross in the interior of the polygon.
///
/// Chords sharing an endpoint never cross.
pub fn crossing(d1: Diagonal, d2: Diagonal) -> bool {
    let (a, b, c, d) = (d1.a, d1.b, d2.a, d2.b);
    (a < c && c < b && b < d) || (c < a && a < d && d < b)
}

/// True iff `{x, y}` is a side of the `n`-gon.
pub fn is_side(x: Vertex, y: Vertex, n: u32) -> bool {
    let (a, b) = if x < y { (x, y) } else { (y, x) };
    b - a == 1 || (a == 1 && b == n)
}

/// Range and side checks, then sort and dedup.
fn normalize_diagonals(
    n: u32,
    diagonals: impl IntoIterator<Item = Diagonal>,
) -> Result<Vec<Diagonal>> {
    if n < 3 {
        return Err(Error::PolygonTooSmall(n));
    }
    let mut out: Vec<Diagonal> = diagonals.into_iter().collect();
    for &d in &out {
        if d.a == d.b {
            return Err(Error::DegenerateDiagonal(d.a));
        }
        if d.a < 1 || d.b > n {
            return Err(Error::VertexOutOfRange(d, n));
        }
        if is_side(d.a, d.b, n) {
            return Err(Error::SideAsDiagonal(d, n));
        }
    }
    out.sort_unstable();
    out.dedup();
    Ok(out)
}

/// Returns some crossing pair of a sorted, deduplicated chord list.
///
/// Non-crossing chords form a laminar family of intervals, so a single
/// sweep with a stack of open intervals finds a violation in O(k).
pub(crate) fn find_crossing(sorted: &[Diagonal]) -> Option<(Diagonal, Diagonal)> {
    // Order by left end ascending, right end descending, so that an enclosing
    // interval is always visited before the intervals it contains.
    let mut order: Vec<Diagonal> = sorted.to_vec();
    order.sort_unstable_by(|x, y| x.a.cmp(&y.a).then(y.b.cmp(&x.b)));
    let mut open: Vec<Diagonal> = Vec::new();
    for d in order {
        while let Some(top) = open.last() {
            if top.b <= d.a {
                open.pop();
            } else {
                break;
            }
        }
        if let Some(&top) = open.last() {
            if top.b < d.b {
                return Some((top, d));
            }
        }
        open.push(d);
    }
    None
}

/// Checks everything except the diagonal count, which differs between
/// triangulations and dissections. Used by the text parser so that geometric
/// problems are reported before counting ones.
pub(crate) fn check_non_crossing(n: u32, diagonals: &[Diagonal]) -> Result<Vec<Diagonal>> {
    let sorted = normalize_diagonals(n, diagonals.iter().copied())?;
    if let Some((x, y)) = find_crossing(&sorted) {
        return Err(Error::CrossingDiagonals(x, y));
    }
    Ok(sorted)
}

/// Three vertex labels, sorted ascending.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Triangle([Vertex; 3]);

impl Triangle {
    pub fn new(x: Vertex, y: Vertex, z: Vertex) -> Self {
        let mut v = [x, y, z];
        v.sort_unstable();
        Triangle(v)
    }

    pub fn vertices(&self) -> [Vertex; 3] {
        self.0
    }

    pub fn contains(&self, v: Vertex) -> bool {
        self.0.contains(&v)
    }

    /// The three edges as normalized pairs.
    pub fn edges(&self) -> [(Vertex, Vertex); 3] {
        let [x, y, z] = self.0;
        [(x, y), (x, z), (y, z)]
    }

    /// The vertex opposite the edge `{p, q}`, if the edge belongs to this triangle.
    pub fn opposite(&self, p: Vertex, q: Vertex) -> Option<Vertex> {
        if p == q || !self.contains(p) || !self.contains(q) {
            return None;
        }
        self.0.iter().copied().find(|&v| v != p && v != q)
    }
}

impl fmt::Display for Triangle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.0[0], self.0[1], self.0[2])
    }
}

/// A face of a dissection, listed counterclockwise from its smallest label.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Cell(Vec<Vertex>);

impl Cell {
    /// Builds a cell from a cyclic boundary list, rotating it to start at the
    /// minimum label.
    pub fn from_cycle(mut vertices: Vec<Vertex>) -> Self {
        if let Some((pos, _)) = vertices.iter().enumerate().min_by_key(|(_, &v)| v) {
            vertices.rotate_left(pos);
        }
        Cell(vertices)
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Boundary edges as normalized pairs, in boundary order.
    pub fn edges(&self) -> impl Iterator<Item = (Vertex, Vertex)> + '_ {
        let k = self.0.len();
        (0..k).map(move |i| {
            let (x, y) = (self.0[i], self.0[(i + 1) % k]);
            if x < y {
                (x, y)
            } else {
                (y, x)
            }
        })
    }

    pub fn contains_edge(&self, x: Vertex, y: Vertex) -> bool {
        let key = if x < y { (x, y) } else { (y, x) };
        self.edges().any(|e| e == key)
    }
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{v}")?;
        }
        f.write_str(")")
    }
}

/// A maximal set of `n - 3` pairwise non-crossing diagonals of an `n`-gon.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Triangulation {
    n: u32,
    diagonals: Vec<Diagonal>,
}

impl Triangulation {
    pub fn new(n: u32, diagonals: impl IntoIterator<Item = Diagonal>) -> Result<Self> {
        let diagonals = normalize_diagonals(n, diagonals)?;
        let expected = (n - 3) as usize;
        if diagonals.len() != expected {
            return Err(Error::WrongDiagonalCount {
                n,
                expected,
                got: diagonals.len(),
            });
        }
        if let Some((x, y)) = find_crossing(&diagonals) {
            return Err(Error::CrossingDiagonals(x, y));
        }
        Ok(Triangulation { n, diagonals })
    }

    pub fn n_vertices(&self) -> u32 {
        self.n
    }

    pub fn diagonals(&self) -> &[Diagonal] {
        &self.diagonals
    }

    /// Graph degree of every vertex (index 0 unused): two sides plus the
    /// incident diagonals.
    pub fn degrees(&self) -> Vec<u32> {
        let mut deg = vec![2u32; self.n as usize + 1];
        deg[0] = 0;
        for d in &self.diagonals {
            deg[d.a as usize] += 1;
            deg[d.b as usize] += 1;
        }
        deg
    }

    /// The `n - 2` triangles, sorted.
    pub fn triangles(&self) -> Vec<Triangle> {
        let n = self.n;
        let adjacency = sorted_adjacency(n, &self.diagonals);
        let mut out = Vec::with_capacity(n as usize - 2);
        for v in 1..=n {
            // Around a vertex of a triangulated convex polygon, angularly
            // consecutive neighbors span exactly one triangle.
            for w in adjacency[v as usize].windows(2) {
                let (x, y) = (w[0], w[1]);
                if v < x && v < y {
                    out.push(Triangle::new(v, x, y));
                }
            }
        }
        out.sort_unstable();
        out
    }
}

impl fmt::Display for Triangulation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_polygon(f, self.n, &self.diagonals)
    }
}

/// A set of `0..=n-3` pairwise non-crossing diagonals of an `n`-gon.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Dissection {
    n: u32,
    diagonals: Vec<Diagonal>,
}

impl Dissection {
    pub fn new(n: u32, diagonals: impl IntoIterator<Item = Diagonal>) -> Result<Self> {
        let diagonals = normalize_diagonals(n, diagonals)?;
        let max = (n - 3) as usize;
        if diagonals.len() > max {
            return Err(Error::TooManyDiagonals {
                n,
                max,
                got: diagonals.len(),
            });
        }
        if let Some((x, y)) = find_crossing(&diagonals) {
            return Err(Error::CrossingDiagonals(x, y));
        }
        Ok(Dissection { n, diagonals })
    }

    pub fn n_vertices(&self) -> u32 {
        self.n
    }

    pub fn diagonals(&self) -> &[Diagonal] {
        &self.diagonals
    }

    pub fn is_triangulation(&self) -> bool {
        self.diagonals.len() + 3 == self.n as usize
    }

    /// Faces of the dissection.
    ///
    /// Cells are discovered by walking the sides `1→2, 2→3, …, n→1` in order
    /// and then the remaining diagonal half-edges in lexicographic order;
    /// each cell is listed counterclockwise from its smallest label.
    pub fn cells(&self) -> Vec<Cell> {
        let n = self.n;
        let adjacency = sorted_adjacency(n, &self.diagonals);
        let offset = |from: Vertex, to: Vertex| (to + n - from) % n;
        let key = |u: Vertex, v: Vertex| (u64::from(u) << 32) | u64::from(v);

        let mut starts: Vec<(Vertex, Vertex)> = (1..=n).map(|i| (i, i % n + 1)).collect();
        for d in &self.diagonals {
            starts.push((d.a, d.b));
            starts.push((d.b, d.a));
        }

        let mut seen: HashSet<u64> = HashSet::new();
        let mut cells = Vec::with_capacity(self.diagonals.len() + 1);
        for (u0, v0) in starts {
            if seen.contains(&key(u0, v0)) {
                continue;
            }
            let mut cycle = Vec::new();
            let (mut u, mut v) = (u0, v0);
            loop {
                seen.insert(key(u, v));
                cycle.push(u);
                // Next boundary vertex: the neighbor of v furthest along
                // counterclockwise while still strictly before u.
                let limit = offset(v, u);
                let nbrs = &adjacency[v as usize];
                let idx = nbrs.partition_point(|&w| offset(v, w) < limit);
                let w = nbrs[idx - 1];
                u = v;
                v = w;
                if (u, v) == (u0, v0) {
                    break;
                }
            }
            cells.push(Cell::from_cycle(cycle));
        }
        cells
    }
}

impl From<Triangulation> for Dissection {
    fn from(t: Triangulation) -> Self {
        Dissection {
            n: t.n,
            diagonals: t.diagonals,
        }
    }
}

impl TryFrom<Dissection> for Triangulation {
    type Error = Error;

    fn try_from(d: Dissection) -> Result<Self> {
        if !d.is_triangulation() {
            return Err(Error::WrongDiagonalCount {
                n: d.n,
                expected: (d.n - 3) as usize,
                got: d.diagonals.len(),
            });
        }
        Ok(Triangulation {
            n: d.n,
            diagonals: d.diagonals,
        })
    }
}

impl fmt::Display for Dissection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_polygon(f, self.n, &self.diagonals)
    }
}

fn write_polygon(f: &mut fmt::Formatter<'_>, n: u32, diagonals: &[Diagonal]) -> fmt::Result {
    write!(f, "{n};")?;
    for (i, d) in diagonals.iter().enumerate() {
        f.write_str(if i == 0 { " " } else { "," })?;
        write!(f, "{d}")?;
    }
    Ok(())
}

/// Neighbor lists (sides and diagonals) ordered counterclockwise starting
/// just after each vertex.
fn sorted_adjacency(n: u32, diagonals: &[Diagonal]) -> Vec<Vec<Vertex>> {
    let mut adjacency: Vec<Vec<Vertex>> = vec![Vec::new(); n as usize + 1];
    for v in 1..=n {
        adjacency[v as usize].push(v % n + 1);
        adjacency[v as usize].push((v + n - 2) % n + 1);
    }
    for d in diagonals {
        adjacency[d.a as usize].push(d.b);
        adjacency[d.b as usize].push(d.a);
    }
    for v in 1..=n {
        adjacency[v as usize].sort_unstable_by_key(|&w| (w + n - v) % n);
    }
    adjacency
}
