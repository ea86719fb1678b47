//! Text formats.
//!
//! Graph: `n m`, then `m` lines `u v w`. Set cover: `n m`, then `n` lines
//! `w k e_1 ... e_k`. Weights are `num` or `num/den`. Blank lines and
//! anything after `#` are ignored.

use std::fmt::Write as _;
use std::path::Path;

use sha2::{Digest, Sha256};

use crate::error::{CoreError, Result};
use crate::graph::{Edge, Graph};
use crate::setcover::SetCoverInstance;
use crate::solution::{Colouring, ColouringKind, Cover, Matching, VertexSet};
use crate::weight::Weight;

/// Significant lines with their 1-based line numbers.
fn records(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(i, line)| {
        let body = line.split('#').next().unwrap_or("");
        let fields: Vec<&str> = body.split_whitespace().collect();
        (!fields.is_empty()).then_some((i + 1, fields))
    })
}

fn parse_err(line: usize, message: impl Into<String>) -> CoreError {
    CoreError::Parse { line, message: message.into() }
}

fn field<T: std::str::FromStr>(line: usize, raw: &str, what: &str) -> Result<T> {
    raw.parse().map_err(|_| parse_err(line, format!("bad {what} `{raw}`")))
}

fn weight<W: Weight>(line: usize, raw: &str) -> Result<W> {
    W::parse_weight(raw).ok_or_else(|| parse_err(line, format!("bad weight `{raw}`")))
}

fn header<'a>(rows: &mut impl Iterator<Item = (usize, Vec<&'a str>)>) -> Result<(usize, usize)> {
    let (line, fields) = rows.next().ok_or_else(|| parse_err(1, "missing header"))?;
    if fields.len() != 2 {
        return Err(parse_err(line, "header must be `n m`"));
    }
    Ok((field(line, fields[0], "count")?, field(line, fields[1], "count")?))
}

pub fn parse_graph<W: Weight>(text: &str) -> Result<Graph<W>> {
    let mut rows = records(text);
    let (n, m) = header(&mut rows)?;
    let mut edges = Vec::with_capacity(m);
    for (line, fields) in rows.by_ref().take(m) {
        if fields.len() != 3 {
            return Err(parse_err(line, "edge line must be `u v w`"));
        }
        edges.push(Edge {
            u: field(line, fields[0], "vertex")?,
            v: field(line, fields[1], "vertex")?,
            w: weight(line, fields[2])?,
        });
    }
    if edges.len() != m {
        return Err(parse_err(0, format!("header promises {m} edges, found {}", edges.len())));
    }
    if let Some((line, _)) = rows.next() {
        return Err(parse_err(line, "trailing content after the last edge"));
    }
    Graph::new(n, edges)
}

pub fn write_graph<W: Weight>(graph: &Graph<W>) -> String {
    let mut out = format!("{} {}\n", graph.n(), graph.m());
    for e in graph.edges() {
        let _ = writeln!(out, "{} {} {}", e.u, e.v, e.w);
    }
    out
}

pub fn parse_set_cover<W: Weight>(text: &str) -> Result<SetCoverInstance<W>> {
    let mut rows = records(text);
    let (n, m) = header(&mut rows)?;
    let mut sets = Vec::with_capacity(n);
    let mut weights = Vec::with_capacity(n);
    for (line, fields) in rows.by_ref().take(n) {
        if fields.len() < 2 {
            return Err(parse_err(line, "set line must be `w k e_1 ... e_k`"));
        }
        let k: usize = field(line, fields[1], "set size")?;
        if fields.len() != k + 2 {
            return Err(parse_err(line, format!("set size {k} but {} elements listed", fields.len() - 2)));
        }
        weights.push(weight(line, fields[0])?);
        sets.push(fields[2..].iter().map(|raw| field(line, raw, "element")).collect::<Result<Vec<usize>>>()?);
    }
    if sets.len() != n {
        return Err(parse_err(0, format!("header promises {n} sets, found {}", sets.len())));
    }
    if let Some((line, _)) = rows.next() {
        return Err(parse_err(line, "trailing content after the last set"));
    }
    SetCoverInstance::new(m, sets, weights)
}

pub fn write_set_cover<W: Weight>(inst: &SetCoverInstance<W>) -> String {
    let mut out = format!("{} {}\n", inst.n(), inst.m());
    for (set, w) in inst.sets().iter().zip(inst.weights()) {
        let _ = write!(out, "{} {}", w, set.len());
        for e in set {
            let _ = write!(out, " {e}");
        }
        out.push('\n');
    }
    out
}

/// Hex SHA-256 of the canonical serialization.
pub fn digest(canonical: &str) -> String {
    hex::encode(Sha256::digest(canonical.as_bytes()))
}

pub fn read_graph<W: Weight>(path: &Path) -> Result<Graph<W>> {
    parse_graph(&std::fs::read_to_string(path)?)
}

pub fn read_set_cover<W: Weight>(path: &Path) -> Result<SetCoverInstance<W>> {
    parse_set_cover(&std::fs::read_to_string(path)?)
}

/// A solution as stored on disk. The first line names the kind
/// (`matching`, `cover`, `vertices`, `colouring vertex|edge`); each following
/// line holds an id, or `id group colour` for colourings.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SolutionFile {
    Matching(Vec<usize>),
    Cover(Cover),
    Vertices(VertexSet),
    Colouring(Colouring),
}

pub fn write_matching(m: &Matching) -> String {
    id_list("matching", &m.edges)
}

pub fn write_cover(c: &Cover) -> String {
    id_list("cover", &c.sets)
}

pub fn write_vertices(s: &VertexSet) -> String {
    id_list("vertices", &s.vertices)
}

fn id_list(kind: &str, ids: &[usize]) -> String {
    let mut out = format!("{kind}\n");
    for id in ids {
        let _ = writeln!(out, "{id}");
    }
    out
}

pub fn write_colouring(c: &Colouring) -> String {
    let mut out = format!("colouring {}\n", c.kind);
    for (id, (group, colour)) in c.assignment.iter().enumerate() {
        let _ = writeln!(out, "{id} {group} {colour}");
    }
    out
}

pub fn parse_solution(text: &str) -> Result<SolutionFile> {
    let mut rows = records(text);
    let (line, head) = rows.next().ok_or_else(|| parse_err(1, "empty solution file"))?;
    let ids = |rows: &mut dyn Iterator<Item = (usize, Vec<&str>)>| -> Result<Vec<usize>> {
        rows.map(|(line, fields)| match fields.as_slice() {
            [raw] => field(line, raw, "id"),
            _ => Err(parse_err(line, "expected a single id")),
        })
        .collect()
    };
    match head.as_slice() {
        ["matching"] => Ok(SolutionFile::Matching(ids(&mut rows)?)),
        ["cover"] => Ok(SolutionFile::Cover(Cover::new(ids(&mut rows)?))),
        ["vertices"] => Ok(SolutionFile::Vertices(VertexSet::new(ids(&mut rows)?))),
        ["colouring", kind] => {
            let kind = match *kind {
                "vertex" => ColouringKind::Vertex,
                "edge" => ColouringKind::Edge,
                other => return Err(parse_err(line, format!("unknown colouring kind `{other}`"))),
            };
            let mut assignment = Vec::new();
            for (line, fields) in rows {
                let [id, group, colour] = fields.as_slice() else {
                    return Err(parse_err(line, "colouring line must be `id group colour`"));
                };
                let id: usize = field(line, id, "id")?;
                if id != assignment.len() {
                    return Err(parse_err(line, format!("expected id {}, found {id}", assignment.len())));
                }
                assignment.push((field(line, group, "group")?, field(line, colour, "colour")?));
            }
            Ok(SolutionFile::Colouring(Colouring { kind, assignment }))
        }
        _ => Err(parse_err(line, "unknown solution kind")),
    }
}
