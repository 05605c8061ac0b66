//! The dual binary tree of a triangulation, rooted at the triangle on the
//! reference edge `(n-1, n)`.
//!
//! A node sits on an oriented base edge `(p, q)` and its entry is the apex of
//! its triangle, the vertex opposite the base. The left child lies across
//! `(apex, q)`, the side with the smaller interior labels; the right child
//! across `(p, apex)`. Read in post-order, the apexes give the clip
//! sequence.

use std::collections::HashMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{is_side, Diagonal, Triangle, Triangulation, Vertex};
use crate::patterns::Permutation;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Node {
    pub apex: Vertex,
    pub triangle: Triangle,
    /// Oriented base edge `(p_end, q_end)`.
    pub base: (Vertex, Vertex),
    pub left: Option<usize>,
    pub right: Option<usize>,
}

/// Arena-backed tree. Nodes are stored in pre-order, so the root is node 0.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BinaryTree {
    nodes: Vec<Node>,
}

impl BinaryTree {
    /// Wraps an arena without checking it; [`from_binary_tree`] does the
    /// validation.
    pub fn from_nodes(nodes: Vec<Node>) -> Self {
        BinaryTree { nodes }
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn root(&self) -> Option<&Node> {
        self.nodes.first()
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn shape(&self) -> Shape {
        Shape(
            self.nodes
                .iter()
                .map(|node| (node.left.is_some(), node.right.is_some()))
                .collect(),
        )
    }
}

fn edge_key(x: Vertex, y: Vertex) -> u64 {
    let (a, b) = if x < y { (x, y) } else { (y, x) };
    (u64::from(a) << 32) | u64::from(b)
}

pub fn to_binary_tree(t: &Triangulation) -> BinaryTree {
    let n = t.n_vertices();
    // Each edge maps to the apexes of the (one or two) triangles on it.
    let mut apexes: HashMap<u64, Vec<Vertex>> = HashMap::new();
    for tri in t.triangles() {
        for (x, y) in tri.edges() {
            apexes
                .entry(edge_key(x, y))
                .or_default()
                .push(tri.opposite(x, y).unwrap());
        }
    }

    struct Pending {
        base: (Vertex, Vertex),
        exclude: Option<Vertex>,
        parent: Option<(usize, bool)>,
    }
    let mut nodes: Vec<Node> = Vec::with_capacity(n as usize - 2);
    let mut stack = vec![Pending {
        base: (n - 1, n),
        exclude: None,
        parent: None,
    }];
    while let Some(Pending {
        base: (p, q),
        exclude,
        parent,
    }) = stack.pop()
    {
        let apex = apexes[&edge_key(p, q)]
            .iter()
            .copied()
            .find(|&w| Some(w) != exclude)
            .expect("every edge of a triangulation bounds a triangle");
        let index = nodes.len();
        if let Some((parent, is_left)) = parent {
            if is_left {
                nodes[parent].left = Some(index);
            } else {
                nodes[parent].right = Some(index);
            }
        }
        nodes.push(Node {
            apex,
            triangle: Triangle::new(p, q, apex),
            base: (p, q),
            left: None,
            right: None,
        });
        // Right pushed first so the left subtree is numbered first.
        if !is_side(p, apex, n) {
            stack.push(Pending {
                base: (p, apex),
                exclude: Some(q),
                parent: Some((index, false)),
            });
        }
        if !is_side(apex, q, n) {
            stack.push(Pending {
                base: (apex, q),
                exclude: Some(p),
                parent: Some((index, true)),
            });
        }
    }
    BinaryTree { nodes }
}

/// Apexes in post-order: left subtree, right subtree, node.
pub fn post_order(tree: &BinaryTree) -> Permutation {
    Permutation::from_vec_unchecked(
        post_order_indices(tree)
            .map(|i| tree.nodes[i].apex)
            .collect(),
    )
}

fn post_order_indices(tree: &BinaryTree) -> impl Iterator<Item = usize> + '_ {
    let mut out = Vec::with_capacity(tree.nodes.len());
    if !tree.nodes.is_empty() {
        // Reverse of (node, right, left) pre-order.
        let mut stack = vec![0usize];
        while let Some(i) = stack.pop() {
            out.push(i);
            let node = &tree.nodes[i];
            stack.extend(node.left);
            stack.extend(node.right);
        }
    }
    out.into_iter().rev()
}

/// Rebuilds the triangulation from a tree, checking that every node is
/// consistent with its parent and with the polygon.
pub fn from_binary_tree(tree: &BinaryTree, n: u32) -> Result<Triangulation> {
    let malformed = |msg: String| Error::MalformedTree(msg);
    if n < 3 {
        return Err(Error::PolygonTooSmall(n));
    }
    let expected = n as usize - 2;
    if tree.nodes.len() != expected {
        return Err(malformed(format!(
            "a tree for a {n}-gon has {expected} nodes, got {}",
            tree.nodes.len()
        )));
    }
    let mut seen_apex = vec![false; n as usize + 1];
    let mut visited = vec![false; tree.nodes.len()];
    let mut diagonals = Vec::with_capacity(n as usize - 3);
    let mut stack = vec![(0usize, (n - 1, n))];
    let mut order = 0usize;
    while let Some((i, (p, q))) = stack.pop() {
        if std::mem::replace(&mut visited[i], true) {
            return Err(malformed(format!("node {i} is reachable twice")));
        }
        if i != order {
            return Err(malformed(format!("node {i} is not stored in pre-order")));
        }
        order += 1;
        let node = &tree.nodes[i];
        if node.base != (p, q) {
            return Err(malformed(format!(
                "node {i} has base {:?}, expected {:?}",
                node.base,
                (p, q)
            )));
        }
        let w = node.apex;
        if w < 1 || w > n - 2 || std::mem::replace(&mut seen_apex[w as usize], true) {
            return Err(malformed(format!(
                "apex {w} of node {i} is out of range or repeated"
            )));
        }
        if node.triangle != Triangle::new(p, q, w) || w == p || w == q {
            return Err(malformed(format!(
                "node {i} triangle {} does not match base {p}-{q} and apex {w}",
                node.triangle
            )));
        }
        // Right first so the left subtree is visited next.
        for (child, (x, y)) in [(node.right, (p, w)), (node.left, (w, q))] {
            match (child, is_side(x, y, n)) {
                (Some(c), false) => {
                    if c >= tree.nodes.len() {
                        return Err(malformed(format!("child index {c} out of range")));
                    }
                    diagonals.push(Diagonal::new(x, y));
                    stack.push((c, (x, y)));
                }
                (None, true) => {}
                (Some(_), true) => {
                    return Err(malformed(format!(
                        "node {i} has a child across polygon side {x}-{y}"
                    )))
                }
                (None, false) => {
                    return Err(malformed(format!(
                        "node {i} is missing the child across diagonal {x}-{y}"
                    )))
                }
            }
        }
    }
    Triangulation::new(n, diagonals).map_err(|e| malformed(e.to_string()))
}

/// The unlabeled shape of a binary tree: `(has_left, has_right)` per node in
/// pre-order.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Shape(Vec<(bool, bool)>);

impl Shape {
    pub(crate) fn from_preorder(preorder: Vec<(bool, bool)>) -> Self {
        Shape(preorder)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Labels the nodes `1..=len` in symmetric order (left, node, right),
    /// which is how apex labels sit in the dual tree, and reads them in
    /// post-order. This is the permutation the tree module's bijection
    /// assigns to a shape.
    pub fn post_order_labels(&self) -> Permutation {
        let len = self.0.len();
        // Recover explicit children from the pre-order flags. Open child
        // slots are stacked right-then-left so the left one fills first.
        let mut left = vec![None; len];
        let mut right = vec![None; len];
        let mut slots: Vec<(usize, bool)> = Vec::new();
        for (i, &(has_left, has_right)) in self.0.iter().enumerate() {
            if i > 0 {
                let (parent, is_left) = slots.pop().expect("shape has more nodes than slots");
                if is_left {
                    left[parent] = Some(i);
                } else {
                    right[parent] = Some(i);
                }
            }
            if has_right {
                slots.push((i, false));
            }
            if has_left {
                slots.push((i, true));
            }
        }
        let mut label = vec![0u32; len];
        let mut next = 1u32;
        let mut stack = Vec::new();
        let mut cur = if len > 0 { Some(0) } else { None };
        while cur.is_some() || !stack.is_empty() {
            while let Some(c) = cur {
                stack.push(c);
                cur = left[c];
            }
            let c = stack.pop().unwrap();
            label[c] = next;
            next += 1;
            cur = right[c];
        }
        let mut out = Vec::with_capacity(len);
        let mut stack = if len > 0 { vec![0usize] } else { vec![] };
        while let Some(c) = stack.pop() {
            out.push(label[c]);
            stack.extend(left[c]);
            stack.extend(right[c]);
        }
        out.reverse();
        Permutation::from_vec_unchecked(out)
    }
}
