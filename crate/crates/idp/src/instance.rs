//! Terminal-pair instances and the solution verifier.
//!
//! An instance is a graph plus an ordered list of terminal pairs (s_i, t_i).
//! Pairs may overlap in one vertex but never coincide, terminals of different
//! pairs may be adjacent, and a pair with s = t is allowed at the model level
//! (single-vertex paths satisfy it). A solution is one vertex path per pair;
//! `verify_solution` checks the three mutual-inducedness conditions:
//!
//!   (i)   each path is an induced path from s_i to t_i,
//!   (ii)  two paths share only vertices that are ends of both,
//!   (iii) no inner vertex of one path is adjacent to any vertex of another,
//!         unless that vertex is an end of both paths.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::graph::{self, Graph, ParseError, VertexId};

/// One terminal pair; `index` is the pair's ordinal in the instance and stays
/// stable through reductions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TerminalPair {
    pub index: usize,
    pub s: VertexId,
    pub t: VertexId,
}

impl TerminalPair {
    pub fn vertices(&self) -> [VertexId; 2] {
        [self.s, self.t]
    }

    pub fn vertex_set(&self) -> BTreeSet<VertexId> {
        BTreeSet::from([self.s, self.t])
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InstanceError {
    #[error("pair {i} and pair {j} coincide on the same vertex set")]
    CoincidingPairs { i: usize, j: usize },
    #[error("pair {index} references vertex {v} missing from the graph")]
    UnknownVertex { index: usize, v: VertexId },
}

/// A graph with terminal pairs satisfying the overlap contract: for i < j,
/// the vertex sets {s_i, t_i} and {s_j, t_j} never coincide.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    pub graph: Graph,
    pub pairs: Vec<TerminalPair>,
}

impl Instance {
    pub fn new(graph: Graph, pairs: Vec<(VertexId, VertexId)>) -> Result<Instance, InstanceError> {
        let pairs: Vec<TerminalPair> = pairs
            .into_iter()
            .enumerate()
            .map(|(index, (s, t))| TerminalPair { index, s, t })
            .collect();
        Self::with_pairs(graph, pairs)
    }

    /// Builds an instance from pairs that already carry indices (used by
    /// reductions that drop or rewrite pairs while keeping ordinals).
    pub fn with_pairs(graph: Graph, pairs: Vec<TerminalPair>) -> Result<Instance, InstanceError> {
        for p in &pairs {
            for x in p.vertices() {
                if !graph.contains(x) {
                    return Err(InstanceError::UnknownVertex { index: p.index, v: x });
                }
            }
        }
        for (a, p) in pairs.iter().enumerate() {
            for q in pairs.iter().skip(a + 1) {
                if p.vertex_set() == q.vertex_set() {
                    return Err(InstanceError::CoincidingPairs { i: p.index, j: q.index });
                }
            }
        }
        Ok(Instance { graph, pairs })
    }

    pub fn k(&self) -> usize {
        self.pairs.len()
    }

    /// T_u: the terminals represented by each vertex, as (pair index, end).
    pub fn terminal_multiset(&self) -> BTreeMap<VertexId, Vec<(usize, End)>> {
        let mut map: BTreeMap<VertexId, Vec<(usize, End)>> = BTreeMap::new();
        for p in &self.pairs {
            map.entry(p.s).or_default().push((p.index, End::S));
            map.entry(p.t).or_default().push((p.index, End::T));
        }
        map
    }

    pub fn terminal_vertices(&self) -> BTreeSet<VertexId> {
        self.pairs.iter().flat_map(|p| p.vertices()).collect()
    }

    pub fn is_terminal(&self, v: VertexId) -> bool {
        self.pairs.iter().any(|p| p.s == v || p.t == v)
    }

    /// Number of terminals represented by `v` (0, 1 or more).
    pub fn terminals_at(&self, v: VertexId) -> usize {
        self.pairs.iter().map(|p| usize::from(p.s == v) + usize::from(p.t == v)).sum()
    }

    pub fn pair_by_index(&self, index: usize) -> Option<&TerminalPair> {
        self.pairs.iter().find(|p| p.index == index)
    }
}

/// Which end of a pair a terminal is.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum End {
    S,
    T,
}

// ---------------------------------------------------------------------------
// Independence
// ---------------------------------------------------------------------------

/// Report on whether the terminal vertices form an independent set and no
/// vertex carries both terminals of one pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndependenceReport {
    pub independent: bool,
    /// Adjacent pairs of terminal vertices.
    pub adjacent_terminals: Vec<(VertexId, VertexId)>,
    /// Pair indices whose two terminals sit on one vertex.
    pub same_pair_same_vertex: Vec<usize>,
}

pub fn independence_report(inst: &Instance) -> IndependenceReport {
    let tverts: Vec<VertexId> = inst.terminal_vertices().into_iter().collect();
    let mut adjacent_terminals = Vec::new();
    for (i, &u) in tverts.iter().enumerate() {
        for &v in tverts.iter().skip(i + 1) {
            if inst.graph.has_edge(u, v) {
                adjacent_terminals.push((u, v));
            }
        }
    }
    let same_pair_same_vertex: Vec<usize> =
        inst.pairs.iter().filter(|p| p.s == p.t).map(|p| p.index).collect();
    IndependenceReport {
        independent: adjacent_terminals.is_empty() && same_pair_same_vertex.is_empty(),
        adjacent_terminals,
        same_pair_same_vertex,
    }
}

// ---------------------------------------------------------------------------
// Solutions
// ---------------------------------------------------------------------------

/// One vertex path per pair, aligned with `Instance::pairs` positionally.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Solution {
    pub paths: Vec<Vec<VertexId>>,
}

impl Solution {
    /// Keyed by pair index rather than position.
    pub fn to_map(&self, inst: &Instance) -> BTreeMap<usize, Vec<VertexId>> {
        inst.pairs.iter().zip(&self.paths).map(|(p, path)| (p.index, path.clone())).collect()
    }

    pub fn from_map(inst: &Instance, map: &BTreeMap<usize, Vec<VertexId>>) -> Option<Solution> {
        let mut paths = Vec::with_capacity(inst.pairs.len());
        for p in &inst.pairs {
            paths.push(map.get(&p.index)?.clone());
        }
        Some(Solution { paths })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    PathCount { expected: usize, got: usize },
    EmptyPath { pair: usize },
    WrongEndpoints { pair: usize },
    MissingVertex { pair: usize, v: VertexId },
    RepeatedVertex { pair: usize, v: VertexId },
    NotAPath { pair: usize, u: VertexId, v: VertexId },
    Chord { pair: usize, u: VertexId, v: VertexId },
    IllegalSharing { pair_a: usize, pair_b: usize, v: VertexId },
    IllegalAdjacency { pair_a: usize, inner: VertexId, pair_b: usize, v: VertexId },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::PathCount { expected, got } => {
                write!(f, "solution has {got} paths, instance has {expected} pairs")
            }
            Violation::EmptyPath { pair } => write!(f, "path {pair}: empty"),
            Violation::WrongEndpoints { pair } => {
                write!(f, "path {pair}: endpoints do not match the terminal pair")
            }
            Violation::MissingVertex { pair, v } => {
                write!(f, "path {pair}: vertex {v} is not in the graph")
            }
            Violation::RepeatedVertex { pair, v } => {
                write!(f, "path {pair}: vertex {v} repeats")
            }
            Violation::NotAPath { pair, u, v } => {
                write!(f, "path {pair}: {u} and {v} are consecutive but not adjacent")
            }
            Violation::Chord { pair, u, v } => {
                write!(f, "path {pair}: chord {u}-{v} (path not induced)")
            }
            Violation::IllegalSharing { pair_a, pair_b, v } => {
                write!(f, "paths {pair_a} and {pair_b} share {v}, which is not an end of both")
            }
            Violation::IllegalAdjacency { pair_a, inner, pair_b, v } => write!(
                f,
                "inner vertex {inner} of path {pair_a} is adjacent to {v} of path {pair_b}"
            ),
        }
    }
}

/// Checks conditions (i)-(iii). An empty result means the solution is valid.
/// A pair with s = t is satisfied by the single-vertex path, whose vertex
/// counts as an end (it has no inner vertices).
pub fn verify_solution(inst: &Instance, sol: &Solution) -> Vec<Violation> {
    let mut out = Vec::new();
    if sol.paths.len() != inst.pairs.len() {
        out.push(Violation::PathCount { expected: inst.pairs.len(), got: sol.paths.len() });
        return out;
    }
    let g = &inst.graph;
    for (p, path) in inst.pairs.iter().zip(&sol.paths) {
        let idx = p.index;
        if path.is_empty() {
            out.push(Violation::EmptyPath { pair: idx });
            continue;
        }
        let ends = BTreeSet::from([*path.first().unwrap(), *path.last().unwrap()]);
        if ends != p.vertex_set() {
            out.push(Violation::WrongEndpoints { pair: idx });
        }
        if p.s == p.t && path.len() != 1 {
            out.push(Violation::WrongEndpoints { pair: idx });
        }
        let mut seen = BTreeSet::new();
        for &x in path {
            if !g.contains(x) {
                out.push(Violation::MissingVertex { pair: idx, v: x });
            }
            if !seen.insert(x) {
                out.push(Violation::RepeatedVertex { pair: idx, v: x });
            }
        }
        for w in path.windows(2) {
            if !g.has_edge(w[0], w[1]) {
                out.push(Violation::NotAPath { pair: idx, u: w[0], v: w[1] });
            }
        }
        for (a, &x) in path.iter().enumerate() {
            for &y in path.iter().skip(a + 2) {
                if g.has_edge(x, y) {
                    out.push(Violation::Chord { pair: idx, u: x, v: y });
                }
            }
        }
    }
    // Cross-path conditions (ii) and (iii).
    for (a, (pa, path_a)) in inst.pairs.iter().zip(&sol.paths).enumerate() {
        for (pb, path_b) in inst.pairs.iter().zip(&sol.paths).skip(a + 1) {
            let ends_a: BTreeSet<VertexId> = ends_of(path_a);
            let ends_b: BTreeSet<VertexId> = ends_of(path_b);
            for &x in path_a {
                if path_b.contains(&x) && !(ends_a.contains(&x) && ends_b.contains(&x)) {
                    out.push(Violation::IllegalSharing { pair_a: pa.index, pair_b: pb.index, v: x });
                }
            }
            // Inner of one adjacent to any vertex of the other, unless that
            // vertex is an end of both paths.
            for (pi, path_i, ends_i, pj, path_j, ends_j) in [
                (pa.index, path_a, &ends_a, pb.index, path_b, &ends_b),
                (pb.index, path_b, &ends_b, pa.index, path_a, &ends_a),
            ] {
                for &u in inner_of(path_i) {
                    for &v in path_j {
                        if inst.graph.has_edge(u, v) && !(ends_i.contains(&v) && ends_j.contains(&v)) {
                            out.push(Violation::IllegalAdjacency {
                                pair_a: pi,
                                inner: u,
                                pair_b: pj,
                                v,
                            });
                        }
                    }
                }
            }
        }
    }
    out
}

fn ends_of(path: &[VertexId]) -> BTreeSet<VertexId> {
    match path {
        [] => BTreeSet::new(),
        [only] => BTreeSet::from([*only]),
        _ => BTreeSet::from([path[0], *path.last().unwrap()]),
    }
}

fn inner_of(path: &[VertexId]) -> &[VertexId] {
    if path.len() <= 2 {
        &[]
    } else {
        &path[1..path.len() - 1]
    }
}

// ---------------------------------------------------------------------------
// File formats
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InstanceParseError {
    #[error(transparent)]
    Graph(#[from] ParseError),
    #[error(transparent)]
    Instance(#[from] InstanceError),
}

/// Parses a graph file with `t <s> <t>` terminal lines appended; line order
/// defines pair indices.
pub fn parse_instance(text: &str) -> Result<Instance, InstanceParseError> {
    let parsed = graph::parse_graph_file(text, true)?;
    Ok(Instance::new(parsed.graph, parsed.terminal_lines)?)
}

pub fn format_instance(inst: &Instance, comments: &[String]) -> String {
    let mut out = graph::format_graph(&inst.graph, comments);
    for p in &inst.pairs {
        out.push_str(&format!("t {} {}\n", p.s, p.t));
    }
    out
}

/// Solution file format: one `path <i>: v1 v2 ... vL` line per pair.
pub fn format_solution(inst: &Instance, sol: &Solution) -> String {
    let mut out = String::new();
    for (p, path) in inst.pairs.iter().zip(&sol.paths) {
        let verts: Vec<String> = path.iter().map(|v| v.to_string()).collect();
        out.push_str(&format!("path {}: {}\n", p.index + 1, verts.join(" ")));
    }
    out
}

pub fn parse_solution(text: &str, k: usize) -> Result<Solution, String> {
    let mut by_index: BTreeMap<usize, Vec<VertexId>> = BTreeMap::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('c') {
            continue;
        }
        let rest = line
            .strip_prefix("path ")
            .ok_or_else(|| format!("line {}: expected `path <i>: ...`", lineno + 1))?;
        let (idx, verts) = rest
            .split_once(':')
            .ok_or_else(|| format!("line {}: missing `:`", lineno + 1))?;
        let idx: usize = idx
            .trim()
            .parse()
            .map_err(|_| format!("line {}: bad path index", lineno + 1))?;
        if idx == 0 || idx > k {
            return Err(format!("line {}: path index {} out of range 1..={}", lineno + 1, idx, k));
        }
        let path: Result<Vec<VertexId>, _> = verts
            .split_ascii_whitespace()
            .map(|s| s.parse::<u32>().map(VertexId))
            .collect();
        let path = path.map_err(|_| format!("line {}: bad vertex id", lineno + 1))?;
        by_index.insert(idx - 1, path);
    }
    let mut paths = Vec::new();
    for i in 0..k {
        paths.push(by_index.remove(&i).ok_or(format!("missing path {}", i + 1))?);
    }
    Ok(Solution { paths })
}

// ---------------------------------------------------------------------------
// Subdivision
// ---------------------------------------------------------------------------

/// Subdivides every edge of the instance graph once; terminals stay put.
/// A vertex-disjoint linkage of the original corresponds to an induced
/// linkage of the subdivided instance, and vice versa.
pub fn subdivide_all_edges(inst: &Instance) -> (Instance, BTreeMap<(VertexId, VertexId), VertexId>) {
    let mut g = Graph::with_vertices(inst.graph.vertices());
    let mut next = inst.graph.fresh_id().0;
    let mut mids = BTreeMap::new();
    for (u, v) in inst.graph.edges() {
        let mid = VertexId(next);
        next += 1;
        g.add_edge(u, mid);
        g.add_edge(mid, v);
        mids.insert((u, v), mid);
    }
    let inst2 = Instance::with_pairs(g, inst.pairs.clone()).expect("pairs unchanged");
    (inst2, mids)
}
