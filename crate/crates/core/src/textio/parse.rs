use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{check_non_crossing, Diagonal, Dissection, Triangulation, Vertex};
use crate::patterns::Permutation;

/// Accepts `2 1 4 3`, `2,1,4,3` and the compact `2143`. The compact form is
/// only read when the whole input is a single run of digits, which makes
/// every value a single digit.
pub fn parse_permutation(text: &str) -> Result<Permutation> {
    let tokens: Vec<&str> = text
        .split(|c: char| c.is_whitespace() || c == ',')
        .filter(|t| !t.is_empty())
        .collect();
    if tokens.is_empty() {
        return Err(Error::Parse("empty permutation".into()));
    }
    let values: Vec<u32> = if tokens.len() == 1 && tokens[0].len() > 1 {
        let token = tokens[0];
        token
            .chars()
            .map(|c| {
                c.to_digit(10)
                    .ok_or_else(|| Error::Parse(format!("unexpected character {c:?} in {token:?}")))
            })
            .collect::<Result<_>>()?
    } else {
        tokens
            .iter()
            .map(|t| {
                t.parse::<u32>()
                    .map_err(|_| Error::Parse(format!("{t:?} is not a positive integer")))
            })
            .collect::<Result<_>>()?
    };
    Permutation::new(values)
}

/// Canonical form: values separated by single spaces.
pub fn format_permutation(p: &Permutation) -> String {
    p.to_string()
}

/// Digit-string form when every value is a single digit, the spaced form
/// otherwise.
pub fn format_permutation_compact(p: &Permutation) -> String {
    if p.iter().all(|&v| v <= 9) {
        p.iter().map(|v| char::from(b'0' + *v as u8)).collect()
    } else {
        format_permutation(p)
    }
}

/// A parsed polygon: maximal diagonal sets come back as triangulations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Polygon {
    Triangulation(Triangulation),
    Dissection(Dissection),
}

impl Polygon {
    pub fn n_vertices(&self) -> u32 {
        match self {
            Polygon::Triangulation(t) => t.n_vertices(),
            Polygon::Dissection(d) => d.n_vertices(),
        }
    }

    pub fn diagonals(&self) -> &[Diagonal] {
        match self {
            Polygon::Triangulation(t) => t.diagonals(),
            Polygon::Dissection(d) => d.diagonals(),
        }
    }

    pub fn into_dissection(self) -> Dissection {
        match self {
            Polygon::Triangulation(t) => t.into(),
            Polygon::Dissection(d) => d,
        }
    }
}

impl fmt::Display for Polygon {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Polygon::Triangulation(t) => t.fmt(f),
            Polygon::Dissection(d) => d.fmt(f),
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PolygonJson {
    n_vertices: u32,
    diagonals: Vec<[Vertex; 2]>,
}

/// Reads `N; a-b,c-d` or `{"n_vertices": N, "diagonals": [[a,b],...]}`.
pub fn parse_polygon(text: &str) -> Result<Polygon> {
    let text = text.trim();
    let (n, pairs) = if text.starts_with('{') {
        let json: PolygonJson =
            serde_json::from_str(text).map_err(|e| Error::Parse(format!("polygon JSON: {e}")))?;
        (
            json.n_vertices,
            json.diagonals.into_iter().map(|[a, b]| (a, b)).collect(),
        )
    } else {
        parse_polygon_text(text)?
    };
    let mut seen = HashSet::new();
    let mut diagonals = Vec::with_capacity(pairs.len());
    for (a, b) in pairs {
        let d = Diagonal::new(a, b);
        if !seen.insert(d) {
            return Err(Error::Parse(format!("diagonal {d} listed twice")));
        }
        diagonals.push(d);
    }
    let diagonals = check_non_crossing(n, &diagonals)?;
    if diagonals.len() + 3 == n as usize {
        Triangulation::new(n, diagonals).map(Polygon::Triangulation)
    } else {
        Dissection::new(n, diagonals).map(Polygon::Dissection)
    }
}

fn parse_polygon_text(text: &str) -> Result<(u32, Vec<(u32, u32)>)> {
    let (head, tail) = text
        .split_once(';')
        .ok_or_else(|| Error::Parse(format!("expected `N; a-b,...`, got {text:?}")))?;
    let n = parse_number(head)?;
    let tail = tail.trim();
    if tail.is_empty() {
        return Ok((n, Vec::new()));
    }
    let pairs = tail
        .split(',')
        .map(|item| {
            let (a, b) = item
                .split_once('-')
                .ok_or_else(|| Error::Parse(format!("expected `a-b`, got {:?}", item.trim())))?;
            Ok((parse_number(a)?, parse_number(b)?))
        })
        .collect::<Result<_>>()?;
    Ok((n, pairs))
}

fn parse_number(s: &str) -> Result<u32> {
    let s = s.trim();
    s.parse()
        .map_err(|_| Error::Parse(format!("{s:?} is not a positive integer")))
}

pub fn parse_triangulation(text: &str) -> Result<Triangulation> {
    match parse_polygon(text)? {
        Polygon::Triangulation(t) => Ok(t),
        Polygon::Dissection(d) => Err(Error::WrongDiagonalCount {
            n: d.n_vertices(),
            expected: d.n_vertices() as usize - 3,
            got: d.diagonals().len(),
        }),
    }
}

pub fn parse_dissection(text: &str) -> Result<Dissection> {
    parse_polygon(text).map(Polygon::into_dissection)
}

/// Canonical text form with sorted diagonals.
pub fn format_polygon(p: &Polygon) -> String {
    p.to_string()
}

/// Structured form of a polygon.
pub fn polygon_json(n: u32, diagonals: &[Diagonal]) -> serde_json::Value {
    serde_json::to_value(PolygonJson {
        n_vertices: n,
        diagonals: diagonals.iter().map(|d| [d.a(), d.b()]).collect(),
    })
    .expect("polygon JSON is always serializable")
}
