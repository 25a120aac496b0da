//! Line-oriented position files.
//!
//! ```text
//! mgg-pos 1
//! game nimg-rm
//! convention misere
//! kind ugraph
//! vertices 2
//! edges 1
//! start 0
//! w 0 1
//! w 1 1
//! e 0 1
//! ```
//!
//! `w` lines appear only for NimG games, one per vertex. Lines starting with
//! `#` are comments.

use std::fmt::Write as _;

use crate::error::ParseError;
use crate::game::{Convention, Game, Position};
use crate::graph::{Graph, GraphKind};

pub const MAGIC: &str = "mgg-pos";
pub const VERSION: &str = "1";

/// A position together with the convention it is to be played under.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GameFile {
    pub position: Position,
    pub convention: Convention,
}

impl GameFile {
    pub fn new(position: Position, convention: Convention) -> Self {
        GameFile {
            position,
            convention,
        }
    }
}

struct Lines<'a> {
    inner: std::iter::Enumerate<std::str::Lines<'a>>,
    last: usize,
}

impl<'a> Lines<'a> {
    fn next_tokens(&mut self) -> Option<(usize, Vec<&'a str>)> {
        for (i, line) in self.inner.by_ref() {
            let t = line.trim();
            if t.is_empty() || t.starts_with('#') {
                continue;
            }
            self.last = i + 1;
            return Some((i + 1, t.split_whitespace().collect()));
        }
        None
    }

    fn expect(&mut self, what: &str) -> Result<(usize, Vec<&'a str>), ParseError> {
        self.next_tokens().ok_or_else(|| {
            ParseError::new(
                self.last + 1,
                format!("unexpected end of file, expected {what}"),
            )
        })
    }

    fn keyed(&mut self, key: &str) -> Result<(usize, &'a str), ParseError> {
        let (line, toks) = self.expect(key)?;
        match toks.as_slice() {
            [k, v] if *k == key => Ok((line, v)),
            _ => Err(ParseError::new(line, format!("expected `{key} <value>`"))),
        }
    }
}

fn number<T: std::str::FromStr>(line: usize, s: &str, what: &str) -> Result<T, ParseError> {
    s.parse()
        .map_err(|_| ParseError::new(line, format!("invalid {what} `{s}`")))
}

pub fn parse_position(text: &str) -> Result<GameFile, ParseError> {
    let mut lines = Lines {
        inner: text.lines().enumerate(),
        last: 0,
    };

    let (line, toks) = lines.expect("header")?;
    if toks.as_slice() != [MAGIC, VERSION] {
        return Err(ParseError::new(
            line,
            format!("expected header `{MAGIC} {VERSION}`"),
        ));
    }
    let (line, tag) = lines.keyed("game")?;
    let game = Game::from_tag(tag)
        .ok_or_else(|| ParseError::new(line, format!("unknown game `{tag}`")))?;
    let (line, tag) = lines.keyed("convention")?;
    let convention = Convention::from_tag(tag)
        .ok_or_else(|| ParseError::new(line, format!("unknown convention `{tag}`")))?;
    let (line, tag) = lines.keyed("kind")?;
    let kind = match tag {
        "ugraph" => GraphKind::Undirected,
        "digraph" => GraphKind::Directed,
        _ => return Err(ParseError::new(line, format!("unknown graph kind `{tag}`"))),
    };
    let (line, v) = lines.keyed("vertices")?;
    let n: usize = number(line, v, "vertex count")?;
    if n == 0 {
        return Err(ParseError::new(
            line,
            "a position needs at least one vertex",
        ));
    }
    let (line, v) = lines.keyed("edges")?;
    let m: usize = number(line, v, "edge count")?;
    let (start_line, v) = lines.keyed("start")?;
    let start: usize = number(start_line, v, "start vertex")?;
    if start >= n {
        return Err(ParseError::new(
            start_line,
            format!("start vertex {start} out of range"),
        ));
    }

    let weights = if game.is_nimg() {
        let mut w: Vec<Option<u32>> = vec![None; n];
        for _ in 0..n {
            let (line, toks) = lines.expect("weight line")?;
            let [tag, v, k] = toks.as_slice() else {
                return Err(ParseError::new(line, "expected `w <vertex> <weight>`"));
            };
            if *tag != "w" {
                return Err(ParseError::new(line, "expected `w <vertex> <weight>`"));
            }
            let v: usize = number(line, v, "vertex")?;
            if k.starts_with('-') {
                return Err(ParseError::new(line, format!("negative weight `{k}`")));
            }
            let k: u32 = number(line, k, "weight")?;
            match w.get_mut(v) {
                None => return Err(ParseError::new(line, format!("vertex {v} out of range"))),
                Some(Some(_)) => {
                    return Err(ParseError::new(line, format!("vertex {v} weighted twice")))
                }
                Some(slot) => *slot = Some(k),
            }
        }
        Some(
            w.into_iter()
                .map(|k| k.expect("n distinct vertices filled"))
                .collect(),
        )
    } else {
        None
    };

    let mut edges = Vec::with_capacity(m);
    let mut edge_lines = Vec::with_capacity(m);
    for _ in 0..m {
        let (line, toks) = lines.expect("edge line")?;
        let [tag, u, v] = toks.as_slice() else {
            return Err(ParseError::new(line, "expected `e <u> <v>`"));
        };
        if *tag != "e" {
            return Err(ParseError::new(line, "expected `e <u> <v>`"));
        }
        edges.push((number(line, u, "vertex")?, number(line, v, "vertex")?));
        edge_lines.push(line);
    }
    if let Some((line, _)) = lines.next_tokens() {
        return Err(ParseError::new(
            line,
            "trailing content after the declared edges",
        ));
    }

    let graph = Graph::new(kind, n, &edges).map_err(|e| {
        let bad = match e {
            crate::error::GraphError::EndpointOutOfRange(u, v, _) => (u, v),
            crate::error::GraphError::DuplicateEdge(u, v) => (u, v),
            _ => (usize::MAX, usize::MAX),
        };
        let canon = |(a, b): (usize, usize)| match kind {
            GraphKind::Undirected if a > b => (b, a),
            _ => (a, b),
        };
        let line = edges
            .iter()
            .rposition(|&e| canon(e) == canon(bad))
            .map_or(lines.last, |i| edge_lines[i]);
        ParseError::new(line, e.to_string())
    })?;
    let position = Position::new(game, graph, weights, start)
        .map_err(|e| ParseError::new(start_line, e.to_string()))?;
    Ok(GameFile {
        position,
        convention,
    })
}

/// Canonical text: vertices and edges in ascending order. Positions with
/// removed vertices or edges are written as their detached equivalent.
pub fn serialize_position(file: &GameFile) -> String {
    let p = file.position.detached();
    let g = p.graph();
    let mut out = String::new();
    let _ = writeln!(out, "{MAGIC} {VERSION}");
    let _ = writeln!(out, "game {}", p.game());
    let _ = writeln!(out, "convention {}", file.convention);
    let _ = writeln!(out, "kind {}", g.kind());
    let _ = writeln!(out, "vertices {}", g.vertex_count());
    let _ = writeln!(out, "edges {}", g.edge_count());
    let _ = writeln!(out, "start {}", p.current());
    for (v, w) in p.weights().iter().enumerate() {
        let _ = writeln!(out, "w {v} {w}");
    }
    for &(u, v) in g.edges() {
        let _ = writeln!(out, "e {u} {v}");
    }
    out
}
