//! Deterministic drawings. Polygons are laid out on a circle with vertex 1
//! at the top and labels increasing counterclockwise; every coordinate is
//! printed with three decimals so output is stable across platforms.

use std::f64::consts::PI;
use std::fmt::Write as _;
use std::num::NonZeroU32;

use crate::clip::ClipTrace;
use crate::model::{Diagonal, Dissection, Triangulation, Vertex};
use crate::tree::BinaryTree;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RenderFormat {
    #[default]
    Svg,
    Dot,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RenderOptions {
    /// Width and height of one panel in pixels.
    pub size: NonZeroU32,
    pub show_labels: bool,
    /// Triangles or cells to fill, each given by its vertex labels.
    pub highlight: Vec<Vec<Vertex>>,
    pub format: RenderFormat,
}

impl Default for RenderOptions {
    fn default() -> Self {
        RenderOptions {
            size: NonZeroU32::new(400).unwrap(),
            show_labels: true,
            highlight: Vec::new(),
            format: RenderFormat::Svg,
        }
    }
}

impl RenderOptions {
    fn is_highlighted(&self, vertices: &[Vertex]) -> bool {
        let mut key = vertices.to_vec();
        key.sort_unstable();
        self.highlight.iter().any(|h| {
            let mut h = h.clone();
            h.sort_unstable();
            h == key
        })
    }
}

/// One drawing: the surviving boundary vertices of an `n`-gon, the chords
/// between them, and the filled regions.
struct Frame {
    n: u32,
    alive: Vec<Vertex>,
    chords: Vec<Diagonal>,
    fills: Vec<Vec<Vertex>>,
}

impl Frame {
    fn polygon(n: u32, diagonals: &[Diagonal], opts: &RenderOptions) -> Self {
        Frame {
            n,
            alive: (1..=n).collect(),
            chords: diagonals.to_vec(),
            fills: opts.highlight.clone(),
        }
    }

    fn boundary(&self) -> Vec<(Vertex, Vertex)> {
        match self.alive.len() {
            0 | 1 => Vec::new(),
            2 => vec![(self.alive[0], self.alive[1])],
            k => (0..k)
                .map(|i| (self.alive[i], self.alive[(i + 1) % k]))
                .collect(),
        }
    }
}

fn coord(x: f64) -> String {
    let s = format!("{x:.3}");
    if s == "-0.000" {
        "0.000".to_string()
    } else {
        s
    }
}

fn position(n: u32, v: Vertex, size: f64, radius_scale: f64) -> (f64, f64) {
    let angle = PI / 2.0 + 2.0 * PI * f64::from(v - 1) / f64::from(n);
    let c = size / 2.0;
    let r = size * radius_scale;
    (c + r * angle.cos(), c - r * angle.sin())
}

fn svg_frame(out: &mut String, frame: &Frame, opts: &RenderOptions, index: usize) {
    let size = f64::from(opts.size.get());
    let point = |v: Vertex| position(frame.n, v, size, 0.4);
    let alive: Vec<String> = frame.alive.iter().map(u32::to_string).collect();
    let _ = writeln!(
        out,
        r#"<g class="panel" data-vertices="{}" transform="translate({},0)">"#,
        alive.join(" "),
        coord(size * index as f64)
    );
    for fill in &frame.fills {
        let mut vs: Vec<Vertex> = fill.clone();
        vs.sort_unstable();
        let points: Vec<String> = vs
            .iter()
            .map(|&v| {
                let (x, y) = point(v);
                format!("{},{}", coord(x), coord(y))
            })
            .collect();
        let _ = writeln!(
            out,
            r##"<polygon class="highlight" points="{}" fill="#f4c542" stroke="none"/>"##,
            points.join(" ")
        );
    }
    for (x, y) in frame.boundary() {
        line(out, point(x), point(y), "side");
    }
    for d in &frame.chords {
        line(out, point(d.a()), point(d.b()), "diagonal");
    }
    for &v in &frame.alive {
        let (x, y) = point(v);
        let _ = writeln!(
            out,
            r#"<circle cx="{}" cy="{}" r="3" fill="black"/>"#,
            coord(x),
            coord(y)
        );
        if opts.show_labels {
            let (lx, ly) = position(frame.n, v, size, 0.45);
            let _ = writeln!(
                out,
                r#"<text x="{}" y="{}" text-anchor="middle" dominant-baseline="middle">{v}</text>"#,
                coord(lx),
                coord(ly)
            );
        }
    }
    out.push_str("</g>\n");
}

fn line(out: &mut String, (x1, y1): (f64, f64), (x2, y2): (f64, f64), class: &str) {
    let dash = if class == "diagonal" {
        r#" stroke-dasharray="4 3""#
    } else {
        ""
    };
    let _ = writeln!(
        out,
        r#"<line class="{class}" x1="{}" y1="{}" x2="{}" y2="{}" stroke="black"{dash}/>"#,
        coord(x1),
        coord(y1),
        coord(x2),
        coord(y2)
    );
}

fn svg_document(frames: &[Frame], opts: &RenderOptions) -> String {
    let size = opts.size.get();
    let width = size as usize * frames.len().max(1);
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{size}" viewBox="0 0 {width} {size}" font-family="sans-serif" font-size="14">"#
    );
    for (i, frame) in frames.iter().enumerate() {
        svg_frame(&mut out, frame, opts, i);
    }
    out.push_str("</svg>\n");
    out
}

fn dot_frame(out: &mut String, frame: &Frame, opts: &RenderOptions, prefix: &str, indent: &str) {
    for &v in &frame.alive {
        let label = if opts.show_labels {
            v.to_string()
        } else {
            String::new()
        };
        let _ = writeln!(out, "{indent}{prefix}v{v} [label=\"{label}\"];");
    }
    for (x, y) in frame.boundary() {
        let _ = writeln!(out, "{indent}{prefix}v{x} -- {prefix}v{y};");
    }
    for d in &frame.chords {
        let _ = writeln!(
            out,
            "{indent}{prefix}v{} -- {prefix}v{} [style=dashed];",
            d.a(),
            d.b()
        );
    }
}

fn dot_document(frames: &[Frame], opts: &RenderOptions) -> String {
    let mut out = String::from("graph polygon {\n  node [shape=circle];\n");
    if let [frame] = frames {
        dot_frame(&mut out, frame, opts, "", "  ");
    } else {
        for (i, frame) in frames.iter().enumerate() {
            let _ = writeln!(out, "  subgraph cluster_{i} {{");
            dot_frame(&mut out, frame, opts, &format!("s{i}_"), "    ");
            out.push_str("  }\n");
        }
    }
    out.push_str("}\n");
    out
}

fn document(frames: &[Frame], opts: &RenderOptions) -> String {
    match opts.format {
        RenderFormat::Svg => svg_document(frames, opts),
        RenderFormat::Dot => dot_document(frames, opts),
    }
}

pub fn render_triangulation(t: &Triangulation, opts: &RenderOptions) -> String {
    document(&[Frame::polygon(t.n_vertices(), t.diagonals(), opts)], opts)
}

pub fn render_dissection(d: &Dissection, opts: &RenderOptions) -> String {
    document(&[Frame::polygon(d.n_vertices(), d.diagonals(), opts)], opts)
}

/// All intermediate polygons of a clip run side by side: the full polygon
/// first, then one panel after each clip. The triangle about to be removed
/// is highlighted along with `opts.highlight`.
pub fn render_clip_steps(t: &Triangulation, trace: &ClipTrace, opts: &RenderOptions) -> String {
    let n = t.n_vertices();
    let mut alive = vec![true; n as usize + 1];
    let mut frames = Vec::with_capacity(trace.steps().len() + 1);
    for i in 0..=trace.steps().len() {
        let survivors: Vec<Vertex> = (1..=n).filter(|&v| alive[v as usize]).collect();
        let chords = t
            .diagonals()
            .iter()
            .copied()
            .filter(|d| alive[d.a() as usize] && alive[d.b() as usize])
            .collect();
        let mut fills = opts.highlight.clone();
        if let Some(step) = trace.steps().get(i) {
            fills.push(step.triangle.vertices().to_vec());
            alive[step.label as usize] = false;
        }
        frames.push(Frame {
            n,
            alive: survivors,
            chords,
            fills,
        });
    }
    document(&frames, opts)
}

/// Graph description of the dual tree. Nodes are named by their pre-order
/// index and labeled with their apex.
pub fn render_tree(tree: &BinaryTree, opts: &RenderOptions) -> String {
    let mut out = String::from("digraph tree {\n  node [shape=circle];\n");
    for (i, node) in tree.nodes().iter().enumerate() {
        let label = if opts.show_labels {
            node.apex.to_string()
        } else {
            String::new()
        };
        let style = if opts.is_highlighted(&node.triangle.vertices()) {
            ", style=filled, fillcolor=\"#f4c542\""
        } else {
            ""
        };
        let _ = writeln!(
            out,
            "  n{i} [label=\"{label}\", tooltip=\"{}\"{style}];",
            node.triangle
        );
    }
    for (i, node) in tree.nodes().iter().enumerate() {
        if let Some(l) = node.left {
            let _ = writeln!(out, "  n{i} -> n{l} [label=\"L\"];");
        }
        if let Some(r) = node.right {
            let _ = writeln!(out, "  n{i} -> n{r} [label=\"R\"];");
        }
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::clip::clip_sequence;
    use crate::tree::to_binary_tree;

    fn tri(n: u32, pairs: &[(u32, u32)]) -> Triangulation {
        Triangulation::new(n, pairs.iter().map(|&(a, b)| Diagonal::new(a, b))).unwrap()
    }

    #[test]
    fn triangle_defaults() {
        let svg = render_triangulation(&tri(3, &[]), &RenderOptions::default());
        assert!(svg.starts_with("<svg"));
        assert_eq!(svg.matches("<circle").count(), 3);
        assert_eq!(svg.matches("class=\"side\"").count(), 3);
        for v in 1..=3 {
            assert!(svg.contains(&format!(">{v}</text>")));
        }
        // Vertex 1 sits straight above the center.
        assert!(svg.contains(r#"<circle cx="200.000" cy="40.000""#));
    }

    #[test]
    fn counterclockwise_layout() {
        let svg = render_triangulation(&tri(4, &[(1, 3)]), &RenderOptions::default());
        // Vertex 2 is to the left of vertex 1 when going counterclockwise.
        assert!(svg.contains(r#"<circle cx="40.000" cy="200.000""#));
        assert!(!svg.contains("-0.000"));
        assert_eq!(svg.matches("class=\"diagonal\"").count(), 1);
    }

    #[test]
    fn clip_steps_panels() {
        let t = tri(6, &[(2, 6), (3, 6), (4, 6)]);
        let (_, trace) = clip_sequence(&t).unwrap();
        let svg = render_clip_steps(&t, &trace, &RenderOptions::default());
        let panels: Vec<&str> = svg
            .lines()
            .filter_map(|l| l.split("data-vertices=\"").nth(1))
            .map(|rest| rest.split('"').next().unwrap())
            .collect();
        assert_eq!(
            panels,
            ["1 2 3 4 5 6", "2 3 4 5 6", "3 4 5 6", "4 5 6", "5 6"]
        );
    }

    #[test]
    fn deterministic_bytes() {
        let t = tri(6, &[(1, 3), (1, 4), (4, 6)]);
        let opts = RenderOptions {
            highlight: vec![vec![1, 2, 3]],
            ..RenderOptions::default()
        };
        assert_eq!(
            render_triangulation(&t, &opts),
            render_triangulation(&t, &opts)
        );
        assert!(render_triangulation(&t, &opts).contains("class=\"highlight\""));
        let tree = to_binary_tree(&t);
        assert_eq!(render_tree(&tree, &opts), render_tree(&tree, &opts));
    }

    #[test]
    fn dot_outputs() {
        let t = tri(4, &[(1, 3)]);
        let opts = RenderOptions {
            format: RenderFormat::Dot,
            ..RenderOptions::default()
        };
        let dot = render_triangulation(&t, &opts);
        assert!(dot.starts_with("graph polygon {"));
        assert!(dot.contains("v1 -- v3 [style=dashed];"));
        let tree = render_tree(&to_binary_tree(&t), &opts);
        assert_eq!(tree.matches(" -> ").count(), 1);
        assert_eq!(tree.matches("[label=").count(), 3);
    }
}
