//! Decent 312-avoiding permutations and polygon dissections.
//!
//! Take a decent 312-avoider `p` of length `n` with descending runs
//! `R_1, …, R_r`, build its triangulation of the `(n+2)`-gon and look up the
//! triangle clipped at every label. Inside run `R_t`, the triangles of all
//! entries but the first are glued into one cell with `|R_t| + 1` vertices.
//! The triangle of the first entry is removed: if both of its edges through
//! the clipped vertex are sides of the original polygon the vertex is simply
//! deleted (an ear); if exactly one is, that side is collapsed by
//! identifying its endpoints (a gap). Relabeling the surviving vertex
//! classes gives a dissection of the `(n - r + 2)`-gon with `r - 1`
//! diagonals, and every such dissection arises exactly once.
//!
//! No direct reverse procedure is implemented. [`Undissector`] inverts the
//! map by tabulating the forward map over all decent 312-avoiders of the
//! required length.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::path::PathBuf;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::{Arc, Mutex, OnceLock};

use serde::Serialize;

use crate::clip::{build_triangulation, clip_sequence};
use crate::enumerate::Avoiders;
use crate::error::{Error, Result};
use crate::model::{is_side, Cell, Diagonal, Dissection, Triangle, Vertex};
use crate::patterns::{
    descending_runs, find_312, is_312_avoiding, is_decent, up_down_pattern, Permutation,
};
use crate::textio::cache;

pub const DEFAULT_UNDISSECT_LIMIT: usize = 14;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum RemovalKind {
    /// Both edges through the clipped vertex are polygon sides; the vertex
    /// is deleted.
    Ear,
    /// Exactly one is; its endpoints are identified.
    Gap { identified: (Vertex, Vertex) },
}

/// The triangle of a run's first entry, which does not join the cell.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct RemovedTriangle {
    pub run_index: usize,
    pub label: u32,
    pub triangle: Triangle,
    #[serde(flatten)]
    pub kind: RemovalKind,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RunCell {
    pub entries: Vec<u32>,
    /// The merged cell in the output polygon's labels.
    pub cell: Cell,
    pub removed: RemovedTriangle,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CellReport {
    pub runs: Vec<RunCell>,
    /// Each surviving class of original vertices and its new label, in
    /// label order.
    pub relabeling: Vec<(Vec<Vertex>, Vertex)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DissectionMap {
    #[serde(serialize_with = "serialize_display")]
    pub dissection: Dissection,
    pub report: CellReport,
}

fn serialize_display<S: serde::Serializer>(
    d: &Dissection,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(d)
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(len: usize) -> Self {
        UnionFind((0..len).collect())
    }

    fn find(&mut self, x: usize) -> usize {
        let mut root = x;
        while self.0[root] != root {
            root = self.0[root];
        }
        let mut x = x;
        while self.0[x] != root {
            let up = self.0[x];
            self.0[x] = root;
            x = up;
        }
        root
    }

    fn union(&mut self, x: usize, y: usize) {
        let (rx, ry) = (self.find(x), self.find(y));
        if rx != ry {
            // Keep the smaller label as root so roots are canonical.
            let (lo, hi) = if rx < ry { (rx, ry) } else { (ry, rx) };
            self.0[hi] = lo;
        }
    }
}

/// Class representative (minimum member) of every vertex `1..=n` after
/// identifying the given pairs.
fn classes(n: u32, pairs: impl Iterator<Item = (Vertex, Vertex)>) -> Vec<usize> {
    let mut uf = UnionFind::new(n as usize + 1);
    for (x, y) in pairs {
        uf.union(x as usize, y as usize);
    }
    (0..=n as usize).map(|v| uf.find(v)).collect()
}

/// Maps a decent 312-avoider to its dissection and the per-run cell report.
pub fn decent_to_dissection(p: &Permutation) -> Result<DissectionMap> {
    if !is_decent(p) {
        return Err(Error::NotDecent(up_down_pattern(p).to_string()));
    }
    if let Some(w) = find_312(p) {
        return Err(Error::NotAvoiding(w));
    }
    let violation = |message: String| Error::invariant(message, p);

    let n = p.len() as u32;
    let big_n = n + 2;
    let triangulation = build_triangulation(p)?;
    let (_, trace) = clip_sequence(&triangulation)?;
    let runs = descending_runs(p);
    let r = runs.run_count() as u32;
    let out_n = n - r + 2;

    let mut removed = Vec::with_capacity(r as usize);
    let mut cell_triangles: Vec<Vec<Triangle>> = Vec::with_capacity(r as usize);
    for (run_index, run) in runs.runs().iter().enumerate() {
        let triangles = run
            .iter()
            .map(|&label| trace.triangle_of(label))
            .collect::<Result<Vec<_>>>()?;
        for (pair, labels) in triangles.windows(2).zip(run.windows(2)) {
            let shared = pair[0]
                .vertices()
                .iter()
                .filter(|&&v| pair[1].contains(v))
                .count();
            if shared != 2 {
                return Err(violation(format!(
                    "triangles of consecutive run entries {} and {} do not share an edge",
                    labels[0], labels[1]
                )));
            }
        }
        let label = run[0];
        let triangle = triangles[0];
        let [u, w] = {
            let mut others = triangle.vertices().into_iter().filter(|&v| v != label);
            [others.next().unwrap(), others.next().unwrap()]
        };
        let kind = match (is_side(u, label, big_n), is_side(label, w, big_n)) {
            (true, true) => RemovalKind::Ear,
            (true, false) | (false, true) => {
                if is_side(u, w, big_n) {
                    return Err(violation(format!(
                        "removed triangle {triangle} has two polygon sides but is not an ear at {label}"
                    )));
                }
                let other = if is_side(u, label, big_n) { u } else { w };
                RemovalKind::Gap {
                    identified: (label.min(other), label.max(other)),
                }
            }
            (false, false) => {
                return Err(Error::InnerTriangle {
                    label,
                    triangle: triangle.to_string(),
                    witness: p.to_string(),
                })
            }
        };
        removed.push(RemovedTriangle {
            run_index,
            label,
            triangle,
            kind,
        });
        let cell = triangles[1..].to_vec();
        let vertex_count = cell
            .iter()
            .flat_map(|t| t.vertices())
            .collect::<BTreeSet<_>>()
            .len();
        if vertex_count != run.len() + 1 {
            return Err(violation(format!(
                "run {run:?} merges into a {vertex_count}-gon, expected {}",
                run.len() + 1
            )));
        }
        cell_triangles.push(cell);
    }

    // Ear deletions and gap identifications do not depend on run order;
    // check that by resolving the identifications in both orders.
    let mut deleted = vec![false; big_n as usize + 1];
    let mut pairs = Vec::new();
    for rt in &removed {
        match rt.kind {
            RemovalKind::Ear => deleted[rt.label as usize] = true,
            RemovalKind::Gap { identified } => pairs.push(identified),
        }
    }
    let class = classes(big_n, pairs.iter().copied());
    if class != classes(big_n, pairs.iter().rev().copied()) {
        return Err(violation(
            "vertex classes depend on processing order".into(),
        ));
    }
    let mut class_size = vec![0usize; big_n as usize + 1];
    for v in 1..=big_n as usize {
        class_size[class[v]] += 1;
    }
    for v in 1..=big_n as usize {
        if deleted[v] && class_size[class[v]] > 1 {
            return Err(violation(format!("deleted vertex {v} was also identified")));
        }
    }

    let mut new_label = vec![0u32; big_n as usize + 1];
    let mut members: Vec<Vec<Vertex>> = Vec::new();
    for v in 1..=big_n {
        if deleted[v as usize] {
            continue;
        }
        let root = class[v as usize];
        if new_label[root] == 0 {
            members.push(Vec::new());
            new_label[root] = members.len() as u32;
        }
        members[new_label[root] as usize - 1].push(v);
    }
    let label_of = |v: Vertex| new_label[class[v as usize]];
    if members.len() as u32 != out_n {
        return Err(violation(format!(
            "{} vertex classes survive, expected {out_n}",
            members.len()
        )));
    }
    if label_of(big_n - 1) != out_n - 1 || label_of(big_n) != out_n {
        return Err(violation(format!(
            "vertices {} and {big_n} do not become {} and {out_n}",
            big_n - 1,
            out_n - 1
        )));
    }
    let mut walk: Vec<u32> = (1..=big_n)
        .filter(|&v| !deleted[v as usize])
        .map(label_of)
        .collect();
    walk.dedup();
    if !walk.iter().copied().eq(1..=out_n) {
        return Err(violation(format!(
            "relabeling breaks the boundary order: {walk:?}"
        )));
    }

    let mut cells = Vec::with_capacity(r as usize);
    let mut edge_use: BTreeMap<(Vertex, Vertex), usize> = BTreeMap::new();
    for (run, triangles) in runs.runs().iter().zip(&cell_triangles) {
        let mut boundary: BTreeMap<(Vertex, Vertex), usize> = BTreeMap::new();
        for t in triangles {
            for e in t.edges() {
                *boundary.entry(e).or_default() += 1;
            }
        }
        let mut mapped_edges = BTreeSet::new();
        for (&(x, y), _) in boundary.iter().filter(|(_, &c)| c == 1) {
            if deleted[x as usize] || deleted[y as usize] {
                return Err(violation(format!(
                    "cell edge {x}-{y} touches a deleted vertex"
                )));
            }
            let (a, b) = (label_of(x), label_of(y));
            if a == b {
                return Err(violation(format!("cell edge {x}-{y} collapses")));
            }
            mapped_edges.insert((a.min(b), a.max(b)));
        }
        let vertices: BTreeSet<Vertex> = mapped_edges.iter().flat_map(|&(a, b)| [a, b]).collect();
        let cell = Cell::from_cycle(vertices.into_iter().collect());
        // Boundary order of a cell is ascending label order, so its edges
        // must be exactly the mapped boundary edges.
        if cell.len() != run.len() + 1 || cell.edges().collect::<BTreeSet<_>>() != mapped_edges {
            return Err(violation(format!(
                "run {run:?} does not map to a convex cell: {cell}"
            )));
        }
        for e in cell.edges() {
            *edge_use.entry(e).or_default() += 1;
        }
        cells.push(cell);
    }

    let mut diagonals = Vec::new();
    for (&(a, b), &count) in &edge_use {
        match (count, is_side(a, b, out_n)) {
            (1, true) => {}
            (2, false) => diagonals.push(Diagonal::new(a, b)),
            _ => return Err(violation(format!("edge {a}-{b} is used by {count} cells"))),
        }
    }
    let sides_used = edge_use
        .keys()
        .filter(|&&(a, b)| is_side(a, b, out_n))
        .count();
    if sides_used != out_n as usize || diagonals.len() != r as usize - 1 {
        return Err(violation(format!(
            "output has {sides_used} sides and {} diagonals, expected {out_n} and {}",
            diagonals.len(),
            r - 1
        )));
    }
    let dissection = Dissection::new(out_n, diagonals).map_err(|e| violation(e.to_string()))?;
    let expected: BTreeSet<&Cell> = cells.iter().collect();
    let actual = dissection.cells();
    if actual.iter().collect::<BTreeSet<_>>() != expected {
        return Err(violation(
            "merged cells differ from the faces of the output".into(),
        ));
    }
    if !cells.last().unwrap().contains_edge(out_n - 1, out_n) {
        return Err(violation(
            "last run's cell misses the reference edge".into(),
        ));
    }

    let report = CellReport {
        runs: runs
            .runs()
            .iter()
            .zip(cells)
            .zip(removed)
            .map(|((entries, cell), removed)| RunCell {
                entries: entries.clone(),
                cell,
                removed,
            })
            .collect(),
        relabeling: members
            .into_iter()
            .enumerate()
            .map(|(i, m)| (m, i as u32 + 1))
            .collect(),
    };
    Ok(DissectionMap { dissection, report })
}

/// True iff `p` avoids 312 and every descending run has exactly `j + 1`
/// entries (`j` descents). `j = 1` is the alternating case.
pub fn corollary_filter(p: &[u32], j: usize) -> bool {
    if j == 0 || p.is_empty() || !is_312_avoiding(p) {
        return false;
    }
    descending_runs(p).descent_counts().iter().all(|&d| d == j)
}

type Table = HashMap<Dissection, Permutation>;

/// Filled at most once, under its own lock.
type Slot = Arc<Mutex<Option<Arc<Table>>>>;

/// Table-driven inverse of [`decent_to_dissection`].
///
/// Tables are built once per permutation length and shared between
/// threads; with a cache directory they are also persisted on disk.
pub struct Undissector {
    limit: usize,
    cache_dir: Option<PathBuf>,
    tables: Mutex<HashMap<usize, Slot>>,
    builds: AtomicUsize,
}

impl Undissector {
    pub fn new(limit: usize) -> Self {
        Undissector {
            limit,
            cache_dir: None,
            tables: Mutex::new(HashMap::new()),
            builds: AtomicUsize::new(0),
        }
    }

    pub fn with_cache_dir(mut self, dir: impl Into<PathBuf>) -> Self {
        self.cache_dir = Some(dir.into());
        self
    }

    pub fn limit(&self) -> usize {
        self.limit
    }

    /// Number of tables computed by enumeration (not loaded from memory or
    /// disk) so far.
    pub fn builds(&self) -> usize {
        self.builds.load(Ordering::SeqCst)
    }

    pub fn invert(&self, d: &Dissection) -> Result<Permutation> {
        self.invert_within(d, self.limit)
    }

    fn invert_within(&self, d: &Dissection, limit: usize) -> Result<Permutation> {
        let n = d.n_vertices() as usize + d.diagonals().len() - 1;
        if n > limit {
            return Err(Error::LimitExceeded { n, limit });
        }
        self.table(n)?
            .get(d)
            .cloned()
            .ok_or_else(|| Error::NoPreimage(d.to_string()))
    }

    /// All dissections reachable from decent 312-avoiders of length `n`.
    pub fn table(&self, n: usize) -> Result<Arc<Table>> {
        let slot = {
            let mut tables = self.tables.lock().unwrap_or_else(|e| e.into_inner());
            tables.entry(n).or_default().clone()
        };
        // Holding the per-length lock while filling means concurrent callers
        // for the same length wait instead of enumerating again.
        let mut guard = slot.lock().unwrap_or_else(|e| e.into_inner());
        if let Some(table) = guard.as_ref() {
            return Ok(table.clone());
        }
        let table = Arc::new(self.load_or_build(n)?);
        *guard = Some(table.clone());
        Ok(table)
    }

    fn load_or_build(&self, n: usize) -> Result<Table> {
        if let Some(dir) = &self.cache_dir {
            if let Some(entries) = cache::cache_read(dir, n)? {
                if let Some(table) = parse_table(&entries) {
                    return Ok(table);
                }
            }
        }
        let table = build_table(n)?;
        self.builds.fetch_add(1, Ordering::SeqCst);
        if let Some(dir) = &self.cache_dir {
            let entries: BTreeMap<String, String> = table
                .iter()
                .map(|(d, p)| (d.to_string(), p.to_string()))
                .collect();
            cache::cache_write(dir, n, &entries)?;
        }
        Ok(table)
    }
}

impl Default for Undissector {
    fn default() -> Self {
        Undissector::new(DEFAULT_UNDISSECT_LIMIT)
    }
}

fn build_table(n: usize) -> Result<Table> {
    let mut table = Table::new();
    for p in Avoiders::decent(n as u32) {
        let image = decent_to_dissection(&p)?;
        if let Some(other) = table.insert(image.dissection.clone(), p.clone()) {
            return Err(Error::invariant(
                format!("{p} and {other} map to the same dissection"),
                image.dissection,
            ));
        }
    }
    Ok(table)
}

fn parse_table(entries: &BTreeMap<String, String>) -> Option<Table> {
    entries
        .iter()
        .map(|(d, p)| {
            let d = crate::textio::parse_dissection(d).ok()?;
            let p = crate::textio::parse_permutation(p).ok()?;
            Some((d, p))
        })
        .collect()
}

/// Inverse of [`decent_to_dissection`] through a process-wide table cache.
pub fn dissection_to_decent(d: &Dissection, limit: usize) -> Result<Permutation> {
    static SHARED: OnceLock<Undissector> = OnceLock::new();
    SHARED
        .get_or_init(|| Undissector::new(usize::MAX))
        .invert_within(d, limit)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn perm(v: &[u32]) -> Permutation {
        Permutation::new(v.to_vec()).unwrap()
    }

    fn dis(n: u32, pairs: &[(u32, u32)]) -> Dissection {
        Dissection::new(n, pairs.iter().map(|&(a, b)| Diagonal::new(a, b))).unwrap()
    }

    #[test]
    fn forward_examples() {
        assert_eq!(
            decent_to_dissection(&perm(&[2, 1])).unwrap().dissection,
            dis(3, &[])
        );
        assert_eq!(
            decent_to_dissection(&perm(&[2, 1, 4, 3]))
                .unwrap()
                .dissection,
            dis(4, &[(2, 4)])
        );
        assert_eq!(
            decent_to_dissection(&perm(&[3, 2, 4, 1]))
                .unwrap()
                .dissection,
            dis(4, &[(1, 3)])
        );
        assert_eq!(
            decent_to_dissection(&perm(&[4, 3, 2, 1]))
                .unwrap()
                .dissection,
            dis(5, &[])
        );
    }

    #[test]
    fn report_for_3241() {
        let map = decent_to_dissection(&perm(&[3, 2, 4, 1])).unwrap();
        let runs = &map.report.runs;
        assert_eq!(runs.len(), 2);
        assert_eq!(runs[0].removed.kind, RemovalKind::Ear);
        assert_eq!(runs[0].removed.triangle, Triangle::new(2, 3, 4));
        assert_eq!(
            runs[1].removed.kind,
            RemovalKind::Gap { identified: (4, 5) }
        );
        assert_eq!(runs[1].removed.triangle, Triangle::new(1, 4, 5));
        assert_eq!(runs[0].cell.vertices(), &[1, 2, 3]);
        assert_eq!(runs[1].cell.vertices(), &[1, 3, 4]);
        assert_eq!(
            map.report.relabeling,
            vec![(vec![1], 1), (vec![2], 2), (vec![4, 5], 3), (vec![6], 4)]
        );
    }

    #[test]
    fn report_for_2143() {
        let map = decent_to_dissection(&perm(&[2, 1, 4, 3])).unwrap();
        let kinds: Vec<_> = map.report.runs.iter().map(|r| r.removed.kind).collect();
        assert_eq!(kinds, vec![RemovalKind::Ear, RemovalKind::Ear]);
        let labels: Vec<_> = map.report.relabeling.iter().map(|(m, _)| m[0]).collect();
        assert_eq!(labels, vec![1, 3, 5, 6]);
    }

    #[test]
    fn forward_rejects_bad_input() {
        assert!(matches!(
            decent_to_dissection(&perm(&[2, 3, 1, 4])),
            Err(Error::NotDecent(_))
        ));
        assert!(matches!(
            decent_to_dissection(&perm(&[1])),
            Err(Error::NotDecent(_))
        ));
        // 4 1 3 2: decent (D U D) but contains 312.
        assert!(matches!(
            decent_to_dissection(&perm(&[4, 1, 3, 2])),
            Err(Error::NotAvoiding(_))
        ));
    }

    #[test]
    fn inverse_examples() {
        assert_eq!(
            dissection_to_decent(&dis(3, &[]), 14).unwrap().as_slice(),
            &[2, 1]
        );
        assert_eq!(
            dissection_to_decent(&dis(4, &[(2, 4)]), 14)
                .unwrap()
                .as_slice(),
            &[2, 1, 4, 3]
        );
        assert_eq!(
            dissection_to_decent(&dis(5, &[]), 14).unwrap().as_slice(),
            &[4, 3, 2, 1]
        );
        assert!(matches!(
            dissection_to_decent(&dis(5, &[]), 3),
            Err(Error::LimitExceeded { n: 4, limit: 3 })
        ));
    }

    #[test]
    fn corollary_filter_examples() {
        assert!(corollary_filter(&[2, 1, 4, 3], 1));
        assert!(corollary_filter(&[6, 5, 4, 8, 7, 3, 9, 2, 1], 2));
        assert!(!corollary_filter(&[3, 2, 1], 1));
        assert!(!corollary_filter(&[4, 1, 3, 2], 1));
    }

    #[test]
    fn concurrent_fill_builds_once() {
        let undissector = Undissector::new(14);
        std::thread::scope(|s| {
            for _ in 0..8 {
                s.spawn(|| undissector.invert(&dis(6, &[(1, 3), (3, 5)])).unwrap());
            }
        });
        assert_eq!(undissector.builds(), 1);
    }
}
