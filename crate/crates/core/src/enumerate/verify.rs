use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt;
use std::time::{Duration, Instant};

use serde::Serialize;

use super::{catalan, Avoiders, Dissections, Triangulations};
use crate::clip::{build_triangulation, clip_sequence};
use crate::dissect::{corollary_filter, decent_to_dissection};
use crate::model::Dissection;
use crate::patterns::{descending_runs, has_run_signature};
use crate::tree::{from_binary_tree, post_order, to_binary_tree};

/// Outcome of an exhaustive check. Failures are data; an empty list means
/// the claim held on every instance.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub scope: String,
    pub instances: usize,
    /// Named tallies, e.g. object counts per class.
    pub counts: BTreeMap<String, u64>,
    pub failures: Vec<String>,
    #[serde(skip)]
    pub wall_time: Duration,
}

impl VerificationReport {
    fn new(scope: String) -> Self {
        VerificationReport {
            scope,
            instances: 0,
            counts: BTreeMap::new(),
            failures: Vec::new(),
            wall_time: Duration::ZERO,
        }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    fn fail(&mut self, msg: impl Into<String>) {
        self.failures.push(msg.into());
    }

    fn expect_eq<T: PartialEq + fmt::Debug>(&mut self, what: &str, got: T, want: T) {
        if got != want {
            self.fail(format!("{what}: got {got:?}, expected {want:?}"));
        }
    }
}

/// Deterministic one-line summary; wall time is left out on purpose so that
/// repeated runs print identical bytes.
impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}: {} instances, {} failures",
            self.scope,
            self.instances,
            self.failures.len()
        )?;
        for (k, v) in &self.counts {
            write!(f, ", {k}={v}")?;
        }
        Ok(())
    }
}

fn catalan_u64(m: u32) -> u64 {
    u64::try_from(catalan(m)).expect("catalan number fits in u64 at verification sizes")
}

/// Both round trips and the image of the clip map on the `n`-gon.
pub fn verify_clip_bijection(n: u32) -> VerificationReport {
    let start = Instant::now();
    let mut report = VerificationReport::new(format!("clip bijection, n={n}"));
    if n < 3 {
        report.fail(format!("polygon size {n} < 3"));
        return report;
    }
    let mut image: HashSet<Vec<u32>> = HashSet::new();
    let mut triangulations = 0u64;
    for t in Triangulations::new(n) {
        triangulations += 1;
        report.instances += 1;
        match clip_sequence(&t) {
            Ok((p, _)) => {
                match build_triangulation(&p) {
                    Ok(back) if back == t => {}
                    Ok(back) => report.fail(format!("build(clip({t})) = {back}")),
                    Err(e) => report.fail(format!("build(clip({t})): {e}")),
                }
                if !image.insert(p.clone().into_vec()) {
                    report.fail(format!("clip sequence {p} produced twice"));
                }
            }
            Err(e) => report.fail(format!("clip({t}): {e}")),
        }
    }
    let mut avoiders = 0u64;
    for sigma in Avoiders::all(n - 2) {
        avoiders += 1;
        report.instances += 1;
        match build_triangulation(&sigma).and_then(|t| clip_sequence(&t)) {
            Ok((p, _)) if p == sigma => {}
            Ok((p, _)) => report.fail(format!("clip(build({sigma})) = {p}")),
            Err(e) => report.fail(format!("clip(build({sigma})): {e}")),
        }
        if !image.contains(sigma.as_slice()) {
            report.fail(format!("avoider {sigma} is not a clip sequence"));
        }
    }
    let expected = catalan_u64(n - 2);
    report.expect_eq("triangulation count", triangulations, expected);
    report.expect_eq("avoider count", avoiders, expected);
    report.expect_eq("image size", image.len() as u64, expected);
    report
        .counts
        .insert("triangulations".into(), triangulations);
    report.counts.insert("avoiders".into(), avoiders);
    report.wall_time = start.elapsed();
    report
}

/// Post-order of the dual tree equals the clip sequence; the tree map is
/// invertible and injective on shapes.
pub fn verify_postorder(n: u32) -> VerificationReport {
    let start = Instant::now();
    let mut report = VerificationReport::new(format!("post-order, n={n}"));
    if n < 3 {
        report.fail(format!("polygon size {n} < 3"));
        return report;
    }
    let mut shapes = HashSet::new();
    for t in Triangulations::new(n) {
        report.instances += 1;
        let tree = to_binary_tree(&t);
        match clip_sequence(&t) {
            Ok((p, _)) => {
                let q = post_order(&tree);
                if p != q {
                    report.fail(format!("{t}: post-order {q} but clip sequence {p}"));
                }
            }
            Err(e) => report.fail(format!("clip({t}): {e}")),
        }
        match from_binary_tree(&tree, n) {
            Ok(back) if back == t => {}
            Ok(back) => report.fail(format!("tree of {t} rebuilds as {back}")),
            Err(e) => report.fail(format!("tree of {t}: {e}")),
        }
        if !shapes.insert(tree.shape()) {
            report.fail(format!("tree shape of {t} repeats"));
        }
    }
    report.expect_eq("shape count", shapes.len() as u64, catalan_u64(n - 2));
    report.counts.insert("shapes".into(), shapes.len() as u64);
    report.wall_time = start.elapsed();
    report
}

/// The decent-permutation map on length `n`: injective, onto the
/// dissections of the `(n-r+2)`-gon with `r-1` diagonals for every run
/// count `r`, with cells of size run length + 1.
pub fn verify_dissection_bijection(n: u32) -> VerificationReport {
    let start = Instant::now();
    let mut report = VerificationReport::new(format!("dissection bijection, n={n}"));
    let mut images: BTreeMap<u32, BTreeSet<Dissection>> = BTreeMap::new();
    let mut per_r: BTreeMap<u32, u64> = BTreeMap::new();
    for p in Avoiders::decent(n) {
        report.instances += 1;
        let runs = descending_runs(&p);
        let r = runs.run_count() as u32;
        *per_r.entry(r).or_default() += 1;
        let map = match decent_to_dissection(&p) {
            Ok(map) => map,
            Err(e) => {
                report.fail(format!("{p}: {e}"));
                continue;
            }
        };
        let d = &map.dissection;
        if d.n_vertices() != n - r + 2 || d.diagonals().len() as u32 != r - 1 {
            report.fail(format!("{p} ({r} runs) maps to {d}"));
        }
        for (run, cell) in runs.runs().iter().zip(&map.report.runs) {
            if cell.cell.len() != run.len() + 1 {
                report.fail(format!("{p}: run {run:?} gives cell {}", cell.cell));
            }
        }
        if let Some(j) = uniform_descents(&p) {
            if corollary_filter(&p, j) {
                let sizes_ok = d.cells().iter().all(|c| c.len() == j + 2);
                if !sizes_ok {
                    report.fail(format!(
                        "{p}: signature [{j};{r}] but {d} is not a {}-angulation",
                        j + 2
                    ));
                }
            }
        }
        if !images.entry(r).or_default().insert(d.clone()) {
            report.fail(format!("{p} collides on {d}"));
        }
    }
    for r in 1..=n / 2 {
        let image = images.remove(&r).unwrap_or_default();
        let expected: BTreeSet<Dissection> = Dissections::new(n - r + 2, r - 1).collect();
        if image != expected {
            let missing = expected.difference(&image).count();
            let extra = image.difference(&expected).count();
            report.fail(format!(
                "r={r}: image misses {missing} and adds {extra} dissections"
            ));
        }
        report.counts.insert(
            format!("permutations r={r}"),
            per_r.get(&r).copied().unwrap_or(0),
        );
        report
            .counts
            .insert(format!("dissections r={r}"), expected.len() as u64);
    }
    for (r, image) in images {
        report.fail(format!(
            "{} permutations with impossible run count {r}",
            image.len()
        ));
    }
    report.wall_time = start.elapsed();
    report
}

/// The 312-avoiders of `{1..(j+1)m}` whose runs all have `j` descents map
/// onto exactly the `(j+2)`-angulations of the `(jm+2)`-gon.
pub fn verify_angulations(j: u32, m: u32) -> VerificationReport {
    let start = Instant::now();
    let mut report = VerificationReport::new(format!("angulations, j={j}, m={m}"));
    if j == 0 || m == 0 {
        report.fail("j and m must be positive");
        return report;
    }
    let n = (j + 1) * m;
    let polygon = j * m + 2;
    let signature = vec![j as usize; m as usize];
    let mut image = BTreeSet::new();
    for p in Avoiders::decent(n).filter(|p| has_run_signature(p, &signature)) {
        report.instances += 1;
        if !corollary_filter(&p, j as usize) {
            report.fail(format!("{p} fails the corollary filter"));
        }
        match decent_to_dissection(&p) {
            Ok(map) => {
                if !image.insert(map.dissection.clone()) {
                    report.fail(format!("{p} collides on {}", map.dissection));
                }
            }
            Err(e) => report.fail(format!("{p}: {e}")),
        }
    }
    let angulations: BTreeSet<Dissection> = Dissections::new(polygon, m - 1)
        .filter(|d| d.cells().iter().all(|c| c.len() == j as usize + 2))
        .collect();
    if image != angulations {
        report.fail(format!(
            "image has {} dissections, {} angulations expected",
            image.len(),
            angulations.len()
        ));
    }
    if j == 1 {
        let triangulations: BTreeSet<Dissection> =
            Triangulations::new(polygon).map(Dissection::from).collect();
        if image != triangulations {
            report.fail("alternating image differs from the triangulations");
        }
    }
    report
        .counts
        .insert("permutations".into(), report.instances as u64);
    report
        .counts
        .insert("angulations".into(), angulations.len() as u64);
    report.wall_time = start.elapsed();
    report
}

fn uniform_descents(p: &[u32]) -> Option<usize> {
    let counts = descending_runs(p).descent_counts();
    let first = *counts.first()?;
    counts.iter().all(|&c| c == first).then_some(first)
}
