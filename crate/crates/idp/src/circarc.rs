//! Circular-arc models and the two arc-based solvers.
//!
//! Arcs are half-open integer intervals [start, start+len) on a circle of
//! integer circumference; two vertices are adjacent iff their arcs intersect.
//! `solve_proper_ca` runs the greedy clockwise sweep that works when no arc
//! contains another: once the terminals pair up consecutively around the
//! circle, each pair is routed by a shortest path inside the window between
//! the previous pair's end arc and its own end arc. `solve_ca` handles
//! general models by guessing the counterclockwise-most inner neighbor of the
//! first pair (which cuts the circle) and then routing pairs clockwise,
//! always minimizing how far right a path reaches and forbidding neighbors of
//! the previous path's rightmost arc.
//!
//! `trim_terminal_arcs` is the model-side counterpart of deleting the edge
//! between two adjacent terminal vertices: the shared piece of circle is cut
//! out of both arcs.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::graph::{Graph, VertexId};
use crate::instance::{independence_report, verify_solution, Instance, Solution};
use crate::oracle::{solve_idp_exact, Limits, OracleError};

/// Half-open arc [start, start+len) on a circle; len == circumference means
/// the full circle.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Arc {
    pub start: u32,
    pub len: u32,
}

impl Arc {
    pub fn end(&self, c: u32) -> u32 {
        (self.start + self.len) % c
    }

    pub fn covers(&self, p: u32, c: u32) -> bool {
        (p + c - self.start) % c < self.len
    }

    pub fn intersects(&self, other: &Arc, c: u32) -> bool {
        self.covers(other.start, c) || other.covers(self.start, c)
    }

    /// Does `self` contain all of `other`?
    pub fn contains(&self, other: &Arc, c: u32) -> bool {
        if self.len == c {
            return true;
        }
        let off = (other.start + c - self.start) % c;
        off < self.len && off + other.len <= self.len
    }
}

/// Arc representation of a graph: one arc per vertex on a common circle.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ArcModel {
    pub circumference: u32,
    pub arcs: BTreeMap<VertexId, Arc>,
    /// Claimed proper: no arc properly contains another.
    pub proper: bool,
}

impl ArcModel {
    pub fn arc(&self, v: VertexId) -> Option<&Arc> {
        self.arcs.get(&v)
    }

    pub fn restrict(&self, keep: &BTreeSet<VertexId>) -> ArcModel {
        ArcModel {
            circumference: self.circumference,
            arcs: self.arcs.iter().filter(|(v, _)| keep.contains(v)).map(|(v, a)| (*v, *a)).collect(),
            proper: self.proper,
        }
    }

    pub fn intersection_graph(&self) -> Graph {
        let mut g = Graph::with_vertices(self.arcs.keys().copied());
        let verts: Vec<VertexId> = self.arcs.keys().copied().collect();
        for (i, &u) in verts.iter().enumerate() {
            for &v in verts.iter().skip(i + 1) {
                if self.arcs[&u].intersects(&self.arcs[&v], self.circumference) {
                    g.add_edge(u, v);
                }
            }
        }
        g
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ModelViolation {
    MissingArc { v: VertexId },
    ExtraArc { v: VertexId },
    AdjacencyMismatch { u: VertexId, v: VertexId, edge: bool, arcs_intersect: bool },
    Containment { outer: VertexId, inner: VertexId },
    EmptyArc { v: VertexId },
}

/// Checks that the model represents exactly the graph, and that a claimed
/// proper model has no proper containment.
pub fn validate_arc_model(g: &Graph, m: &ArcModel) -> Vec<ModelViolation> {
    let c = m.circumference;
    let mut out = Vec::new();
    for v in g.vertices() {
        if !m.arcs.contains_key(&v) {
            out.push(ModelViolation::MissingArc { v });
        }
    }
    for (&v, a) in &m.arcs {
        if !g.contains(v) {
            out.push(ModelViolation::ExtraArc { v });
        }
        if a.len == 0 || a.len > c || a.start >= c {
            out.push(ModelViolation::EmptyArc { v });
        }
    }
    if !out.is_empty() {
        return out;
    }
    let verts: Vec<VertexId> = g.vertices().collect();
    for (i, &u) in verts.iter().enumerate() {
        for &v in verts.iter().skip(i + 1) {
            let edge = g.has_edge(u, v);
            let isect = m.arcs[&u].intersects(&m.arcs[&v], c);
            if edge != isect {
                out.push(ModelViolation::AdjacencyMismatch { u, v, edge, arcs_intersect: isect });
            }
            if m.proper {
                let (au, av) = (m.arcs[&u], m.arcs[&v]);
                if au.contains(&av, c) && au != av {
                    out.push(ModelViolation::Containment { outer: u, inner: v });
                }
                if av.contains(&au, c) && au != av {
                    out.push(ModelViolation::Containment { outer: v, inner: u });
                }
            }
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CircError {
    #[error("arc model does not represent the graph ({0} violations)")]
    InvalidModel(usize),
    #[error("instance is not independent: {0}")]
    NotIndependent(String),
    #[error("non-terminal arc {v} covers the overlap of two terminal arcs (rules not applied?)")]
    OverlapCovered { v: VertexId },
    #[error("terminal arcs of {u} and {v} intersect in two components")]
    DoubleOverlap { u: VertexId, v: VertexId },
    #[error(transparent)]
    Oracle(#[from] OracleError),
}

// ---------------------------------------------------------------------------
// Parsing
// ---------------------------------------------------------------------------

/// Arc file: `circle <C>`, optional `proper`, then `a <v> <start> <end>` per
/// vertex (end == start encodes the full circle).
pub fn parse_arc_model(text: &str) -> Result<ArcModel, String> {
    let mut c: Option<u32> = None;
    let mut proper = false;
    let mut arcs = BTreeMap::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        let lineno = idx + 1;
        if line.is_empty() || (line.starts_with('c') && !line.starts_with("circle")) {
            continue;
        }
        let fields: Vec<&str> = line.split_ascii_whitespace().collect();
        match fields[0] {
            "circle" => {
                let val: u32 = fields
                    .get(1)
                    .and_then(|s| s.parse().ok())
                    .ok_or(format!("line {lineno}: expected `circle <C>`"))?;
                if val == 0 {
                    return Err(format!("line {lineno}: circumference must be positive"));
                }
                c = Some(val);
            }
            "proper" => proper = true,
            "a" => {
                let c = c.ok_or(format!("line {lineno}: `a` before `circle`"))?;
                if fields.len() != 4 {
                    return Err(format!("line {lineno}: expected `a <v> <start> <end>`"));
                }
                let v: u32 = fields[1].parse().map_err(|_| format!("line {lineno}: bad vertex"))?;
                let start: u32 = fields[2].parse().map_err(|_| format!("line {lineno}: bad start"))?;
                let end: u32 = fields[3].parse().map_err(|_| format!("line {lineno}: bad end"))?;
                if start >= c || end >= c {
                    return Err(format!("line {lineno}: endpoint outside [0, {c})"));
                }
                let len = if end == start { c } else { (end + c - start) % c };
                if arcs.insert(VertexId(v), Arc { start, len }).is_some() {
                    return Err(format!("line {lineno}: duplicate arc for vertex {v}"));
                }
            }
            _ => return Err(format!("line {lineno}: unrecognized record `{line}`")),
        }
    }
    let circumference = c.ok_or("missing `circle <C>` line".to_string())?;
    Ok(ArcModel { circumference, arcs, proper })
}

pub fn format_arc_model(m: &ArcModel) -> String {
    let mut out = format!("circle {}\n", m.circumference);
    if m.proper {
        out.push_str("proper\n");
    }
    for (v, a) in &m.arcs {
        out.push_str(&format!("a {} {} {}\n", v, a.start, a.end(m.circumference)));
    }
    out
}

// ---------------------------------------------------------------------------
// Terminal-arc trimming (model-side Rule 4)
// ---------------------------------------------------------------------------

#[derive(Debug, Clone)]
pub struct TrimOutcome {
    pub model: ArcModel,
    /// Pair indices proved unsatisfiable by containment among terminal arcs.
    pub unsatisfiable_pairs: Vec<usize>,
}

/// Removes the overlap region from the arcs of every adjacent pair of
/// terminal vertices. Requires the vertex-deletion rules to have run first:
/// no non-terminal arc may cover the overlap. A terminal arc contained in
/// another terminal arc (or buried in the union of two) makes its pairs
/// unsatisfiable; they are reported rather than trimmed.
pub fn trim_terminal_arcs(inst: &Instance, arcs: &ArcModel) -> Result<TrimOutcome, CircError> {
    let c = arcs.circumference;
    let mut model = arcs.clone();
    let mut unsat: BTreeSet<usize> = BTreeSet::new();
    let tset = inst.terminal_vertices();
    let tvec: Vec<VertexId> = tset.iter().copied().collect();
    for (i, &u) in tvec.iter().enumerate() {
        for &v in tvec.iter().skip(i + 1) {
            if !inst.graph.has_edge(u, v) {
                continue;
            }
            let (au, av) = (model.arcs[&u], model.arcs[&v]);
            if !au.intersects(&av, c) {
                continue; // already separated by an earlier trim
            }
            if au.contains(&av, c) || av.contains(&au, c) {
                let buried = if au.contains(&av, c) { v } else { u };
                for p in &inst.pairs {
                    if p.s == buried || p.t == buried {
                        unsat.insert(p.index);
                    }
                }
                continue;
            }
            // Single- or double-overlap. Orient so `first` starts before the
            // other's start (extends furthest counterclockwise).
            let (first, second, fv, sv) =
                if au.covers(av.start, c) { (au, av, u, v) } else { (av, au, v, u) };
            if second.covers(first.start, c) {
                return Err(CircError::DoubleOverlap { u, v });
            }
            // Overlap region: [second.start, first.end).
            let beta_len = (first.start + first.len + c - second.start) % c;
            debug_assert!(beta_len >= 1 && beta_len < first.len && beta_len < second.len);
            let beta = Arc { start: second.start, len: beta_len };
            // Rules 1-2 must have removed any non-terminal covering the overlap.
            for (&w, aw) in &model.arcs {
                if w == u || w == v || tset.contains(&w) {
                    continue;
                }
                if aw.intersects(&beta, c) {
                    return Err(CircError::OverlapCovered { v: w });
                }
            }
            // A third terminal arc poking into the overlap is buried in the
            // union of the two outermost arcs: its pairs cannot be routed.
            for &w in &tvec {
                if w == u || w == v {
                    continue;
                }
                let aw = model.arcs[&w];
                if aw.intersects(&beta, c) {
                    for p in &inst.pairs {
                        if p.s == w || p.t == w {
                            unsat.insert(p.index);
                        }
                    }
                }
            }
            let trimmed_first = Arc { start: first.start, len: first.len - beta_len };
            let trimmed_second =
                Arc { start: (second.start + beta_len) % c, len: second.len - beta_len };
            model.arcs.insert(fv, trimmed_first);
            model.arcs.insert(sv, trimmed_second);
        }
    }
    Ok(TrimOutcome { model, unsatisfiable_pairs: unsat.into_iter().collect() })
}

// ---------------------------------------------------------------------------
// Shared sweep machinery
// ---------------------------------------------------------------------------

fn off(c: u32, origin: u32, p: u32) -> u32 {
    (p + c - origin) % c
}

/// Terminal blocks (pair position, region start terminal, region end
/// terminal) in clockwise order: partners must sit next to each other in the
/// clockwise order of terminal arcs, and consecutive blocks tile the circle.
/// `None` means the instance is immediately NO (two pairs interleave).
fn cyclic_pairing(inst: &Instance, m: &ArcModel) -> Option<Vec<(usize, VertexId, VertexId)>> {
    let mut terms: Vec<VertexId> = inst.terminal_vertices().into_iter().collect();
    terms.sort_by_key(|v| (m.arcs[v].start, v.0));
    let k2 = terms.len();
    debug_assert_eq!(k2, 2 * inst.pairs.len());
    let find_pair = |x: VertexId, y: VertexId| -> Option<usize> {
        inst.pairs.iter().position(|p| p.vertex_set() == BTreeSet::from([x, y]))
    };
    'phase: for phase in 0..2usize {
        let mut blocks = Vec::new();
        let mut used = vec![false; inst.pairs.len()];
        for b in 0..inst.pairs.len() {
            let x = terms[(2 * b + phase) % k2];
            let y = terms[(2 * b + 1 + phase) % k2];
            match find_pair(x, y) {
                Some(pos) if !used[pos] => {
                    used[pos] = true;
                    blocks.push((pos, x, y));
                }
                _ => continue 'phase,
            }
        }
        return Some(blocks);
    }
    None
}

#[cfg(debug_assertions)]
fn path_is_induced(path: &[VertexId], g: &Graph) -> bool {
    for (i, &x) in path.iter().enumerate() {
        for &y in path.iter().skip(i + 2) {
            if g.has_edge(x, y) {
                return false;
            }
        }
    }
    true
}

// ---------------------------------------------------------------------------
// Proper circular-arc solver
// ---------------------------------------------------------------------------

/// Greedy clockwise sweep for independent instances on a validated proper
/// model. A single pair is routed by plain BFS. Instances where a vertex
/// represents two terminals fall back to the general solver.
pub fn solve_proper_ca(
    inst: &Instance,
    m: &ArcModel,
    limits: &Limits,
) -> Result<Option<Solution>, CircError> {
    let viols = validate_arc_model(&inst.graph, m);
    if !viols.is_empty() || !m.proper {
        return Err(CircError::InvalidModel(viols.len().max(1)));
    }
    if inst.pairs.iter().any(|p| inst.terminals_at(p.s) > 1 || inst.terminals_at(p.t) > 1) {
        // The sweep assumes one terminal per vertex; delegate.
        return solve_ca(inst, m, limits);
    }
    if inst.pairs.len() <= 1 {
        return solve_trivial(inst);
    }
    let rep = independence_report(inst);
    if !rep.independent {
        return Err(CircError::NotIndependent(format!("{rep:?}")));
    }
    let c = m.circumference;
    let Some(blocks) = cyclic_pairing(inst, m) else {
        return Ok(None); // terminals of some pair are separated by another pair
    };
    let tset = inst.terminal_vertices();
    let mut by_index: BTreeMap<usize, Vec<VertexId>> = BTreeMap::new();
    for (j, &(pos, a, b)) in blocks.iter().enumerate() {
        let prev_b = blocks[(j + blocks.len() - 1) % blocks.len()].2;
        let origin = m.arcs[&prev_b].end(c);
        let limit = off(c, origin, m.arcs[&b].start);
        // Window: arcs whose start lies between the previous end terminal's
        // right endpoint and this pair's end terminal's start (inclusive).
        let mut window: BTreeSet<VertexId> = inst
            .graph
            .vertices()
            .filter(|v| !tset.contains(v) && off(c, origin, m.arcs[v].start) <= limit)
            .collect();
        window.insert(a);
        window.insert(b);
        let Some(path) = inst.graph.bfs_path_in(&window, a, b) else {
            return Ok(None);
        };
        debug_assert!(path_is_induced(&path, &inst.graph));
        by_index.insert(inst.pairs[pos].index, path);
    }
    let sol = Solution::from_map(inst, &by_index).expect("all pairs routed");
    debug_assert!(verify_solution(inst, &sol).is_empty(), "sweep produced an invalid certificate");
    Ok(Some(sol))
}

fn solve_trivial(inst: &Instance) -> Result<Option<Solution>, CircError> {
    match inst.pairs.as_slice() {
        [] => Ok(Some(Solution { paths: Vec::new() })),
        [p] => {
            if p.s == p.t {
                return Ok(Some(Solution { paths: vec![vec![p.s]] }));
            }
            Ok(inst.graph.bfs_path(p.s, p.t).map(|path| Solution { paths: vec![path] }))
        }
        _ => unreachable!("solve_trivial called with k >= 2"),
    }
}

// ---------------------------------------------------------------------------
// General circular-arc solver
// ---------------------------------------------------------------------------

/// Solver for independent instances on a general (not necessarily proper)
/// circular-arc model. Enumerates the counterclockwise-most inner neighbor
/// of the first pair's start terminal; each guess cuts the circle and the
/// pairs are routed clockwise with the reach of each path minimized, never
/// touching the neighborhood of the previous path's rightmost arc. Every
/// assembled candidate is verified before being returned. Instances where a
/// vertex represents two terminals are solved by the exact search instead
/// (the ordering arguments need one terminal per vertex).
pub fn solve_ca(inst: &Instance, m: &ArcModel, limits: &Limits) -> Result<Option<Solution>, CircError> {
    let viols = validate_arc_model(&inst.graph, m);
    if !viols.is_empty() {
        return Err(CircError::InvalidModel(viols.len()));
    }
    if inst.pairs.iter().any(|p| inst.terminals_at(p.s) > 1 || inst.terminals_at(p.t) > 1) {
        return Ok(solve_idp_exact(inst, limits)?);
    }
    if inst.pairs.len() <= 1 {
        return solve_trivial(inst);
    }
    let rep = independence_report(inst);
    if !rep.independent {
        return Err(CircError::NotIndependent(format!("{rep:?}")));
    }
    let c = m.circumference;
    let Some(blocks) = cyclic_pairing(inst, m) else {
        return Ok(None);
    };
    let tset = inst.terminal_vertices();
    // Static per-pair candidates: inner arcs may touch no terminal arcs
    // except their own pair's.
    let cand: Vec<BTreeSet<VertexId>> = blocks
        .iter()
        .map(|&(_, a, b)| {
            inst.graph
                .vertices()
                .filter(|&v| {
                    !tset.contains(&v)
                        && inst.graph.neighbors(v).all(|w| !tset.contains(&w) || w == a || w == b)
                })
                .collect()
        })
        .collect();
    let (_, a0, _) = blocks[0];
    let prev_b0 = blocks[blocks.len() - 1].2;
    let mut guesses: Vec<u32> = inst
        .graph
        .neighbors(a0)
        .filter(|v| cand[0].contains(v))
        .map(|v| m.arcs[&v].start)
        .collect();
    guesses.sort();
    guesses.dedup();

    'guess: for cut in guesses {
        let crosses = |v: VertexId| -> bool {
            let a = m.arcs[&v];
            off(c, cut, a.start) + a.len > c
        };
        let offend = |v: VertexId| -> u32 {
            let a = m.arcs[&v];
            off(c, cut, a.start) + a.len
        };
        let mut by_index: BTreeMap<usize, Vec<VertexId>> = BTreeMap::new();
        let mut prev_rightmost: Option<VertexId> = None;
        for (j, &(pos, a, b)) in blocks.iter().enumerate() {
            let mut feas: BTreeSet<VertexId> =
                cand[j].iter().copied().filter(|&v| !crosses(v)).collect();
            if j == 0 {
                // Exclude the slack region behind the cut (between the last
                // pair's end terminal and the guessed leftmost inner arc).
                let slack_origin = m.arcs[&prev_b0].end(c);
                let slack_len = off(c, slack_origin, cut);
                feas.retain(|&v| off(c, slack_origin, m.arcs[&v].start) >= slack_len);
            }
            if let Some(r) = prev_rightmost {
                let nr = inst.graph.neighbor_set(r);
                feas.retain(|v| !nr.contains(v) && *v != r);
            }
            // Minimize the reach: smallest right-endpoint threshold that
            // still connects a to b.
            let mut thresholds: Vec<u32> = feas.iter().map(|&v| offend(v)).collect();
            thresholds.sort();
            thresholds.dedup();
            let mut found: Option<Vec<VertexId>> = None;
            for theta in thresholds {
                let mut allowed: BTreeSet<VertexId> =
                    feas.iter().copied().filter(|&v| offend(v) <= theta).collect();
                allowed.insert(a);
                allowed.insert(b);
                if let Some(path) = inst.graph.bfs_path_in(&allowed, a, b) {
                    found = Some(path);
                    break;
                }
            }
            let Some(path) = found else { continue 'guess };
            prev_rightmost = path[1..path.len() - 1].iter().copied().max_by_key(|&v| offend(v));
            debug_assert!(prev_rightmost.is_some(), "independent terminals need an inner vertex");
            by_index.insert(inst.pairs[pos].index, path);
        }
        let sol = Solution::from_map(inst, &by_index).expect("all pairs routed");
        if verify_solution(inst, &sol).is_empty() {
            return Ok(Some(sol));
        }
        debug_assert!(false, "assembled circular-arc solution failed verification");
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::cycle_graph;
    use crate::oracle::solve_idp_exact;

    fn v(i: u32) -> VertexId {
        VertexId(i)
    }

    /// Proper model for C_n: length-3 arcs starting at even positions.
    fn cn_model(n: u32) -> ArcModel {
        let c = 2 * n;
        let arcs = (1..=n).map(|i| (v(i), Arc { start: 2 * (i - 1), len: 3 })).collect();
        ArcModel { circumference: c, arcs, proper: true }
    }

    #[test]
    fn cn_model_is_valid() {
        for n in [4u32, 5, 6, 8] {
            let g = cycle_graph(n);
            assert!(validate_arc_model(&g, &cn_model(n)).is_empty(), "C_{n}");
        }
    }

    #[test]
    fn validate_catches_mismatch() {
        let mut g = cycle_graph(4);
        g.remove_edge(v(1), v(2));
        let viols = validate_arc_model(&g, &cn_model(4));
        assert!(viols.iter().any(|x| matches!(x, ModelViolation::AdjacencyMismatch { .. })));
    }

    #[test]
    fn validate_catches_containment() {
        let mut m = cn_model(4);
        m.arcs.insert(v(1), Arc { start: 7, len: 6 }); // swallows the arc of 4
        let g = m.intersection_graph();
        let viols = validate_arc_model(&g, &m);
        assert!(viols.iter().any(|x| matches!(x, ModelViolation::Containment { .. })));
    }

    #[test]
    fn sweep_c8_two_pairs_yes() {
        let g = cycle_graph(8);
        let inst = Instance::new(g, vec![(v(1), v(3)), (v(5), v(7))]).unwrap();
        let sol =
            solve_proper_ca(&inst, &cn_model(8), &Limits::default()).unwrap().expect("YES");
        assert!(verify_solution(&inst, &sol).is_empty());
    }

    #[test]
    fn sweep_interleaved_no() {
        // Terminals of the two pairs alternate around C_8: no solution.
        let g = cycle_graph(8);
        let inst = Instance::new(g, vec![(v(1), v(5)), (v(3), v(7))]).unwrap();
        assert!(solve_proper_ca(&inst, &cn_model(8), &Limits::default()).unwrap().is_none());
    }

    #[test]
    fn sweep_single_pair_adjacent() {
        let g = cycle_graph(6);
        let inst = Instance::new(g, vec![(v(1), v(2))]).unwrap();
        let sol =
            solve_proper_ca(&inst, &cn_model(6), &Limits::default()).unwrap().expect("YES");
        assert_eq!(sol.paths[0].len(), 2);
    }

    #[test]
    fn general_matches_sweep_on_cycles() {
        let lim = Limits::default();
        let mut checked = 0;
        for n in [8u32, 10, 12] {
            let g = cycle_graph(n);
            let m = cn_model(n);
            for pairs in [
                vec![(v(1), v(3)), (v(5), v(n - 1))],
                vec![(v(1), v(n / 2)), (v(n / 2 + 2), v(n - 1))],
                vec![(v(1), v(n / 2 + 1)), (v(3), v(n / 2 + 3))],
            ] {
                let inst = Instance::new(g.clone(), pairs).unwrap();
                if !independence_report(&inst).independent {
                    continue;
                }
                let a = solve_proper_ca(&inst, &m, &lim).unwrap().is_some();
                let b = solve_ca(&inst, &m, &lim).unwrap().is_some();
                let o = solve_idp_exact(&inst, &lim).unwrap().is_some();
                assert_eq!(a, o, "sweep vs oracle on C_{n}");
                assert_eq!(b, o, "general vs oracle on C_{n}");
                checked += 1;
            }
        }
        assert!(checked >= 6);
    }

    #[test]
    fn general_non_proper_model() {
        // Interval chain with arc 3 stretched to contain arc 4 (non-proper);
        // a single pair routes through the chain.
        let mut arcs = BTreeMap::new();
        arcs.insert(v(1), Arc { start: 0, len: 3 });
        arcs.insert(v(2), Arc { start: 2, len: 3 });
        arcs.insert(v(3), Arc { start: 4, len: 7 });
        arcs.insert(v(4), Arc { start: 6, len: 3 });
        arcs.insert(v(5), Arc { start: 10, len: 3 });
        let m = ArcModel { circumference: 20, arcs, proper: false };
        let g = m.intersection_graph();
        let inst = Instance::new(g, vec![(v(1), v(5))]).unwrap();
        let sol = solve_ca(&inst, &m, &Limits::default()).unwrap().expect("YES");
        assert!(verify_solution(&inst, &sol).is_empty());
    }

    #[test]
    fn trim_separates_adjacent_terminals() {
        // Interval chain 1-2-3-4-5-6 with pairs (1,3) and (2,6): terminal
        // vertices 1,2 and 2,3 are adjacent (never partners), so their
        // overlaps get cut out.
        let arcs: BTreeMap<VertexId, Arc> =
            (1..=6).map(|i| (v(i), Arc { start: 3 * (i - 1), len: 4 })).collect();
        let m = ArcModel { circumference: 24, arcs, proper: true };
        let g = m.intersection_graph();
        assert_eq!(g.edge_count(), 5, "chain");
        let inst = Instance::new(g.clone(), vec![(v(1), v(3)), (v(2), v(6))]).unwrap();
        let out = trim_terminal_arcs(&inst, &m).unwrap();
        assert!(out.unsatisfiable_pairs.is_empty());
        let trimmed_graph = out.model.intersection_graph();
        let mut expect = g.clone();
        expect.remove_edge(v(1), v(2));
        expect.remove_edge(v(2), v(3));
        assert_eq!(trimmed_graph, expect, "trim removes exactly the terminal edges");
    }

    #[test]
    fn trim_identity_without_adjacency() {
        let g = cycle_graph(8);
        let m = cn_model(8);
        let inst = Instance::new(g, vec![(v(1), v(4))]).unwrap();
        let out = trim_terminal_arcs(&inst, &m).unwrap();
        assert_eq!(out.model, m);
    }

    #[test]
    fn trim_flags_buried_terminal() {
        // Terminal 3's arc sits inside terminal 2's: its pair cannot be routed.
        let mut arcs = BTreeMap::new();
        arcs.insert(v(1), Arc { start: 0, len: 3 });
        arcs.insert(v(2), Arc { start: 2, len: 6 });
        arcs.insert(v(3), Arc { start: 4, len: 2 });
        arcs.insert(v(4), Arc { start: 9, len: 3 });
        let m = ArcModel { circumference: 16, arcs, proper: false };
        let g = m.intersection_graph();
        let inst = Instance::new(g, vec![(v(2), v(4)), (v(3), v(1))]).unwrap();
        let out = trim_terminal_arcs(&inst, &m).unwrap();
        assert_eq!(out.unsatisfiable_pairs, vec![1]);
    }

    #[test]
    fn arc_file_roundtrip() {
        let m = cn_model(5);
        let text = format_arc_model(&m);
        let back = parse_arc_model(&text).unwrap();
        assert_eq!(m, back);
    }

    #[test]
    fn arc_geometry() {
        let c = 10;
        let a = Arc { start: 8, len: 4 }; // covers 8,9,0,1
        assert!(a.covers(8, c) && a.covers(1, c) && !a.covers(2, c));
        let b = Arc { start: 0, len: 2 };
        assert!(a.intersects(&b, c));
        assert!(a.contains(&b, c));
        let d = Arc { start: 2, len: 2 };
        assert!(!a.intersects(&d, c));
    }
}
