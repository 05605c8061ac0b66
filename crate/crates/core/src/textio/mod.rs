//! Text formats, rendering and the on-disk inverse-table cache.

pub mod cache;
mod parse;
mod render;

pub use parse::{
    format_permutation, format_permutation_compact, format_polygon, parse_dissection,
    parse_permutation, parse_polygon, parse_triangulation, polygon_json, Polygon,
};
pub use render::{
    render_clip_steps, render_dissection, render_tree, render_triangulation, RenderFormat,
    RenderOptions,
};
