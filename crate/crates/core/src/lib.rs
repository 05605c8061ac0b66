//! Clip sequences of polygon triangulations.
//!
//! Clipping the smallest-labeled ear of a triangulated `n`-gon over and over
//! records a permutation of `{1..n-2}`. These clip sequences are exactly the
//! 312-avoiding permutations, and the map is a bijection. Restricted to
//! *decent* 312-avoiders (every maximal descending run has length at least
//! two), merging the triangles of each run yields a bijection onto polygon
//! dissections.
//!
//! The crate provides the maps in both directions, the dual binary tree
//! view, exhaustive generators and verification suites, and text, SVG and
//! DOT input/output.

pub mod clip;
pub mod dissect;
pub mod enumerate;
pub mod error;
pub mod model;
pub mod patterns;
pub mod textio;
pub mod tree;

pub use clip::{build_triangulation, clip_sequence, ClipStep, ClipTrace};
pub use dissect::{
    corollary_filter, decent_to_dissection, dissection_to_decent, CellReport, DissectionMap,
    RemovalKind, RemovedTriangle, RunCell, Undissector, DEFAULT_UNDISSECT_LIMIT,
};
pub use enumerate::{
    all_312_avoiders, all_decent_312_avoiders, all_dissections, all_triangulations, catalan,
    random_312_avoider, verify_angulations, verify_clip_bijection, verify_dissection_bijection,
    verify_postorder, Bounds, VerificationReport,
};
pub use error::{Error, ErrorClass, Result};
pub use model::{crossing, Cell, Diagonal, Dissection, Triangle, Triangulation, Vertex};
pub use patterns::{
    compose_312, contains_312_naive, decompose_312, descending_runs, find_312, has_run_signature,
    is_312_avoiding, is_decent, up_down_pattern, Decomposition, Permutation, RunDecomposition,
    Step, UpDownWord, Witness312,
};
pub use tree::{from_binary_tree, post_order, to_binary_tree, BinaryTree, Node, Shape};
