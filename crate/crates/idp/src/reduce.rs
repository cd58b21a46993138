//! Solution-preserving preprocessing.
//!
//! `make_independent` applies four rules in fixed order to a claw-free
//! instance: delete non-terminal vertices adjacent to two adjacent terminal
//! vertices; delete non-terminal neighbors of terminal vertices whose
//! terminals all have partners inside the closed neighborhood; drop pairs
//! whose terminals sit on one vertex or on adjacent vertices (recording the
//! one- or two-vertex path that re-inserts them); delete remaining edges
//! between terminal vertices. The result is an independent, claw-free,
//! equivalent instance.
//!
//! `remove_twins` keeps one representative per twin class (the terminal
//! vertex if the class has one). `remove_w_joins` alternates destroying a
//! proper W-join (four cases, depending on where terminal vertices sit) with
//! twin removal until neither applies. Every operation appends reversible
//! steps to a transcript so YES certificates lift back to the original.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::graph::{self, Graph, VertexId, WJoin};
use crate::instance::{independence_report, Instance, TerminalPair};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Step {
    DeleteVertex { v: VertexId, reason: String },
    DeleteEdge { u: VertexId, v: VertexId },
    DropPair { index: usize, splice: Vec<VertexId> },
    ReplacePair { index: usize, old: (VertexId, VertexId), new: (VertexId, VertexId) },
    AddVertex { v: VertexId, neighbors: Vec<VertexId>, reason: String },
}

impl fmt::Display for Step {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Step::DeleteVertex { v, reason } => write!(f, "del-v {v} {reason}"),
            Step::DeleteEdge { u, v } => write!(f, "del-e {u} {v}"),
            Step::DropPair { index, splice } => {
                let s: Vec<String> = splice.iter().map(|v| v.to_string()).collect();
                write!(f, "drop-pair {} splice={}", index + 1, s.join(","))
            }
            Step::ReplacePair { index, old, new } => {
                write!(f, "repl-pair {} {} {} -> {} {}", index + 1, old.0, old.1, new.0, new.1)
            }
            Step::AddVertex { v, neighbors, reason } => {
                let s: Vec<String> = neighbors.iter().map(|v| v.to_string()).collect();
                write!(f, "add-v {v} nbrs={} {reason}", s.join(","))
            }
        }
    }
}

/// Ordered record of reversible reduction steps. Replaying the steps on the
/// original instance yields the reduced instance; `lift_solution` walks them
/// backwards to rebuild a full certificate.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Transcript {
    pub steps: Vec<Step>,
}

impl Transcript {
    pub fn is_identity(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn dump(&self) -> String {
        let mut out = String::new();
        for s in &self.steps {
            out.push_str(&s.to_string());
            out.push('\n');
        }
        out
    }

    pub fn extend(&mut self, other: Transcript) {
        self.steps.extend(other.steps);
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReduceError {
    #[error("input graph is not claw-free: claw at center {0}")]
    NotClawFree(VertexId),
    #[error("input instance is not independent (required before {0})")]
    NotIndependent(&'static str),
    #[error("transcript and solution do not match: {0}")]
    LiftMismatch(String),
}

/// Lifts a reduced-instance solution (keyed by pair index) back to the
/// original instance by replaying the transcript in reverse. Vertex and edge
/// deletions need no path edits; dropped pairs re-insert their recorded
/// splice paths.
pub fn lift_solution(
    transcript: &Transcript,
    mut sol: BTreeMap<usize, Vec<VertexId>>,
) -> Result<BTreeMap<usize, Vec<VertexId>>, ReduceError> {
    for step in transcript.steps.iter().rev() {
        match step {
            Step::DeleteVertex { .. } | Step::DeleteEdge { .. } => {}
            Step::DropPair { index, splice } => {
                if sol.contains_key(index) {
                    return Err(ReduceError::LiftMismatch(format!(
                        "pair {} both dropped and solved",
                        index + 1
                    )));
                }
                sol.insert(*index, splice.clone());
            }
            Step::ReplacePair { index, .. } => {
                if !sol.contains_key(index) {
                    return Err(ReduceError::LiftMismatch(format!(
                        "pair {} replaced but missing from solution",
                        index + 1
                    )));
                }
            }
            Step::AddVertex { .. } => {}
        }
    }
    Ok(sol)
}

// ---------------------------------------------------------------------------
// Rules 1-4
// ---------------------------------------------------------------------------

/// Transforms a claw-free instance into an equivalent independent one.
/// Rules run consecutively, each as one batch pass: Rule 1 and 2 delete
/// non-terminal vertices, Rule 3 drops locally-satisfied pairs, Rule 4
/// deletes terminal-terminal edges.
pub fn make_independent(inst: &Instance) -> Result<(Instance, Transcript), ReduceError> {
    if let Some((c, _)) = graph::find_claw(&inst.graph) {
        return Err(ReduceError::NotClawFree(c));
    }
    let mut g = inst.graph.clone();
    let mut pairs = inst.pairs.clone();
    let mut tr = Transcript::default();

    let terminal_vertices = |pairs: &[TerminalPair]| -> BTreeSet<VertexId> {
        pairs.iter().flat_map(|p| [p.s, p.t]).collect()
    };

    // Rule 1: non-terminal vertices adjacent to two adjacent terminal vertices.
    {
        let tset = terminal_vertices(&pairs);
        let tvec: Vec<VertexId> = tset.iter().copied().collect();
        let mut doomed = BTreeSet::new();
        for (i, &a) in tvec.iter().enumerate() {
            for &b in tvec.iter().skip(i + 1) {
                if !g.has_edge(a, b) {
                    continue;
                }
                for u in g.neighbors(a) {
                    if !tset.contains(&u) && g.has_edge(u, b) {
                        doomed.insert(u);
                    }
                }
            }
        }
        for &u in &doomed {
            tr.steps.push(Step::DeleteVertex { v: u, reason: "rule1".into() });
            g.remove_vertex(u);
        }
    }

    // Rule 2: non-terminal neighbors of terminal vertices all of whose
    // terminals have their partner represented inside N[v].
    {
        let tset = terminal_vertices(&pairs);
        let mut doomed = BTreeSet::new();
        for &v in &tset {
            let closed = g.closed_neighborhood(v);
            let mut local = true;
            for p in &pairs {
                let partner = if p.s == v {
                    Some(p.t)
                } else if p.t == v {
                    Some(p.s)
                } else {
                    None
                };
                if let Some(q) = partner {
                    if !closed.contains(&q) {
                        local = false;
                        break;
                    }
                }
            }
            if !local {
                continue;
            }
            for u in g.neighbors(v) {
                if !tset.contains(&u) {
                    doomed.insert(u);
                }
            }
        }
        for &u in &doomed {
            tr.steps.push(Step::DeleteVertex { v: u, reason: "rule2".into() });
            g.remove_vertex(u);
        }
    }

    // Rule 3: drop pairs whose terminals sit on one vertex or adjacent ones.
    {
        let mut kept = Vec::new();
        for p in pairs {
            if p.s == p.t {
                tr.steps.push(Step::DropPair { index: p.index, splice: vec![p.s] });
            } else if g.has_edge(p.s, p.t) {
                tr.steps.push(Step::DropPair { index: p.index, splice: vec![p.s, p.t] });
            } else {
                kept.push(p);
            }
        }
        pairs = kept;
    }

    // Rule 4: remove remaining edges between terminal vertices.
    {
        let tvec: Vec<VertexId> = terminal_vertices(&pairs).into_iter().collect();
        for (i, &a) in tvec.iter().enumerate() {
            for &b in tvec.iter().skip(i + 1) {
                if g.has_edge(a, b) {
                    tr.steps.push(Step::DeleteEdge { u: a, v: b });
                    g.remove_edge(a, b);
                }
            }
        }
    }

    let out = Instance::with_pairs(g, pairs).expect("reduction keeps pairs valid");
    debug_assert!(independence_report(&out).independent);
    debug_assert!(graph::find_claw(&out.graph).is_none(), "rules must preserve claw-freeness");
    Ok((out, tr))
}

// ---------------------------------------------------------------------------
// Twins
// ---------------------------------------------------------------------------

/// Deletes all but one vertex of every twin class, preferring the terminal
/// vertex as representative (a class holds at most one terminal vertex in an
/// independent instance), otherwise the smallest id. Iterates until twin-free.
pub fn remove_twins(inst: &Instance) -> Result<(Instance, Transcript), ReduceError> {
    if !independence_report(inst).independent {
        return Err(ReduceError::NotIndependent("remove_twins"));
    }
    let mut g = inst.graph.clone();
    let mut tr = Transcript::default();
    let tset = inst.terminal_vertices();
    loop {
        let tp = graph::twin_sets(&g);
        if tp.all_singletons() {
            break;
        }
        for class in tp.nontrivial() {
            let terminals: Vec<VertexId> = class.iter().copied().filter(|v| tset.contains(v)).collect();
            debug_assert!(terminals.len() <= 1, "twins are adjacent; terminals are independent");
            let keep = terminals.first().copied().unwrap_or(*class.iter().next().unwrap());
            for &v in class {
                if v != keep {
                    tr.steps.push(Step::DeleteVertex { v, reason: "twin".into() });
                    g.remove_vertex(v);
                }
            }
        }
    }
    let out = Instance::with_pairs(g, inst.pairs.clone()).expect("terminals survive twin removal");
    Ok((out, tr))
}

// ---------------------------------------------------------------------------
// Proper W-joins
// ---------------------------------------------------------------------------

/// Destroys proper W-joins, alternating with twin removal, until the graph
/// has neither. Requires an independent instance (claw-free by context: each
/// clique of a W-join then carries at most one terminal vertex and each
/// terminal vertex represents at most two terminals). Twin removal runs
/// first and after every destruction.
pub fn remove_w_joins(inst: &Instance) -> Result<(Instance, Transcript), ReduceError> {
    if !independence_report(inst).independent {
        return Err(ReduceError::NotIndependent("remove_w_joins"));
    }
    let mut cur = inst.clone();
    let mut tr = Transcript::default();
    {
        let (t, twin_tr) = remove_twins(&cur)?;
        cur = t;
        tr.extend(twin_tr);
    }
    while let Some(wj) = graph::find_proper_w_join(&cur.graph) {
        let step_tr = destroy_w_join(&mut cur, &wj);
        tr.extend(step_tr);
        let (t, twin_tr) = remove_twins(&cur)?;
        cur = t;
        tr.extend(twin_tr);
    }
    Ok((cur, tr))
}

/// Applies the case analysis for one proper W-join, mutating the instance.
fn destroy_w_join(inst: &mut Instance, wj: &WJoin) -> Transcript {
    let mut tr = Transcript::default();
    let tmap = inst.terminal_multiset();
    let term_in = |side: &BTreeSet<VertexId>| -> Option<VertexId> {
        side.iter().copied().find(|v| tmap.get(v).map_or(false, |t| !t.is_empty()))
    };
    let t_count = |v: VertexId| tmap.get(&v).map_or(0, |t| t.len());

    let ta = term_in(&wj.a);
    let tb = term_in(&wj.b);

    // Case 1: some side has a terminal vertex representing two terminals.
    // Deterministic side choice: the smallest qualifying terminal vertex.
    let case1: Option<(VertexId, &BTreeSet<VertexId>)> = match (ta, tb) {
        (Some(a), Some(b)) if t_count(a) >= 2 && t_count(b) >= 2 => {
            if a < b {
                Some((a, &wj.a))
            } else {
                Some((b, &wj.b))
            }
        }
        (Some(a), _) if t_count(a) >= 2 => Some((a, &wj.a)),
        (_, Some(b)) if t_count(b) >= 2 => Some((b, &wj.b)),
        _ => None,
    };
    if let Some((u, side)) = case1 {
        delete_side_except(inst, &mut tr, side, u, "wjoin-case1");
        return tr;
    }

    match (ta, tb) {
        (Some(u), Some(v)) => {
            // Case 2: one single-terminal vertex on each side.
            let pu = pair_of(inst, u);
            let pv = pair_of(inst, v);
            if pu == pv {
                // Same pair: delete N[A ∪ B], drop the pair, splice u-w-v.
                let w = inst
                    .graph
                    .neighbors(u)
                    .find(|x| wj.b.contains(x))
                    .expect("W-join gives u a neighbor in B");
                let index = pu;
                tr.steps.push(Step::DropPair { index, splice: vec![u, w, v] });
                inst.pairs.retain(|p| p.index != index);
                let mut zone: BTreeSet<VertexId> = wj.a.union(&wj.b).copied().collect();
                zone.extend(inst.graph.set_neighborhood(&zone));
                for x in zone {
                    tr.steps.push(Step::DeleteVertex { v: x, reason: "wjoin-case2".into() });
                    inst.graph.remove_vertex(x);
                }
            } else {
                // Different pairs: delete the side of the smaller terminal.
                let (keep, side) = if u < v { (u, &wj.a) } else { (v, &wj.b) };
                delete_side_except(inst, &mut tr, side, keep, "wjoin-case2");
            }
        }
        (Some(u), None) => delete_side_except(inst, &mut tr, &wj.a, u, "wjoin-case3"),
        (None, Some(v)) => delete_side_except(inst, &mut tr, &wj.b, v, "wjoin-case3"),
        (None, None) => {
            // Case 4: keep the lexicographically smallest (u, v, w) with
            // u, v in A, w in B, uw an edge, vw a non-edge.
            let mut pick: Option<(VertexId, VertexId, VertexId)> = None;
            'outer: for &u in &wj.a {
                for &v in &wj.a {
                    if v == u {
                        continue;
                    }
                    for &w in &wj.b {
                        if inst.graph.has_edge(u, w) && !inst.graph.has_edge(v, w) {
                            pick = Some((u, v, w));
                            break 'outer;
                        }
                    }
                }
            }
            let (u, v, w) = pick.expect("mixed adjacency is part of the W-join definition");
            for &x in wj.a.union(&wj.b) {
                if x != u && x != v && x != w {
                    tr.steps.push(Step::DeleteVertex { v: x, reason: "wjoin-case4".into() });
                    inst.graph.remove_vertex(x);
                }
            }
        }
    }
    tr
}

fn pair_of(inst: &Instance, v: VertexId) -> usize {
    inst.pairs
        .iter()
        .find(|p| p.s == v || p.t == v)
        .map(|p| p.index)
        .expect("terminal vertex has a pair")
}

fn delete_side_except(
    inst: &mut Instance,
    tr: &mut Transcript,
    side: &BTreeSet<VertexId>,
    keep: VertexId,
    reason: &str,
) {
    for &x in side {
        if x != keep {
            tr.steps.push(Step::DeleteVertex { v: x, reason: reason.into() });
            inst.graph.remove_vertex(x);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{complete_graph, cycle_graph, find_claw, find_proper_w_join, path_graph, twin_sets};
    use crate::instance::{verify_solution, Solution};
    use crate::oracle::{solve_idp_exact, Limits};

    fn v(i: u32) -> VertexId {
        VertexId(i)
    }

    fn roundtrip_equivalent(inst: &Instance, reduced: &Instance, tr: &Transcript) {
        let lim = Limits::with_cap(40);
        let before = solve_idp_exact(inst, &lim).unwrap();
        let after = solve_idp_exact(reduced, &lim).unwrap();
        assert_eq!(before.is_some(), after.is_some(), "reduction changed the answer");
        if let Some(sol) = after {
            let lifted = lift_solution(tr, sol.to_map(reduced)).unwrap();
            let full = Solution::from_map(inst, &lifted).expect("all pairs restored");
            assert!(verify_solution(inst, &full).is_empty(), "lifted certificate invalid");
        }
    }

    #[test]
    fn rule1_and_rule3_on_triangle() {
        // Triangle u=1, v=2, w=3 with pair (1,2): Rule 1 deletes 3, Rule 3
        // drops the pair.
        let inst = Instance::new(complete_graph(3), vec![(v(1), v(2))]).unwrap();
        let (red, tr) = make_independent(&inst).unwrap();
        assert_eq!(red.k(), 0);
        assert!(!red.graph.contains(v(3)));
        assert!(tr.steps.iter().any(|s| matches!(s, Step::DeleteVertex { v: x, .. } if *x == v(3))));
        roundtrip_equivalent(&inst, &red, &tr);
    }

    #[test]
    fn already_independent_is_identity() {
        let inst = Instance::new(path_graph(3), vec![(v(1), v(3))]).unwrap();
        let (red, tr) = make_independent(&inst).unwrap();
        assert!(tr.is_identity());
        assert_eq!(red, inst);
    }

    #[test]
    fn rule2_deletes_pendant() {
        // Edge 1-2 with pair (1,2), plus pendant 3 on 1: Rule 2 deletes 3,
        // Rule 3 drops the pair.
        let mut g = Graph::new();
        g.add_edge(v(1), v(2));
        g.add_edge(v(1), v(3));
        let inst = Instance::new(g, vec![(v(1), v(2))]).unwrap();
        let (red, tr) = make_independent(&inst).unwrap();
        assert!(!red.graph.contains(v(3)));
        assert_eq!(red.k(), 0);
        roundtrip_equivalent(&inst, &red, &tr);
    }

    #[test]
    fn rule3_single_vertex_pair() {
        let inst = Instance::new(path_graph(2), vec![(v(1), v(1))]).unwrap();
        let (red, tr) = make_independent(&inst).unwrap();
        assert_eq!(red.k(), 0);
        let lifted = lift_solution(&tr, BTreeMap::new()).unwrap();
        assert_eq!(lifted[&0], vec![v(1)]);
    }

    #[test]
    fn rule4_removes_terminal_edges() {
        // C_5 with pairs (1,3) and (2,5): terminal vertices 2,3 and 1,2 and
        // 1,5 are adjacent but never partners, so Rule 4 cuts those edges.
        let g = cycle_graph(5);
        let inst = Instance::new(g, vec![(v(1), v(3)), (v(2), v(5))]).unwrap();
        let (red, _tr) = make_independent(&inst).unwrap();
        assert!(!red.graph.has_edge(v(2), v(3)));
        assert!(!red.graph.has_edge(v(1), v(2)));
        assert!(!red.graph.has_edge(v(1), v(5)));
        assert!(independence_report(&red).independent);
        assert!(find_claw(&red.graph).is_none());
    }

    #[test]
    fn non_claw_free_rejected() {
        let inst = Instance::new(crate::graph::star_graph(3), vec![(v(2), v(3))]).unwrap();
        assert!(matches!(make_independent(&inst), Err(ReduceError::NotClawFree(_))));
    }

    #[test]
    fn twins_on_diamond() {
        let mut diamond = complete_graph(4);
        diamond.remove_edge(v(1), v(2));
        let inst = Instance::new(diamond, vec![(v(1), v(2))]).unwrap();
        let (red, tr) = remove_twins(&inst).unwrap();
        // 3 and 4 are twins; the smaller id survives.
        assert_eq!(red.graph.n(), 3);
        assert!(red.graph.contains(v(3)) && !red.graph.contains(v(4)));
        assert!(twin_sets(&red.graph).all_singletons());
        roundtrip_equivalent(&inst, &red, &tr);
    }

    #[test]
    fn twin_free_is_identity() {
        let inst = Instance::new(path_graph(4), vec![(v(1), v(4))]).unwrap();
        let (red, tr) = remove_twins(&inst).unwrap();
        assert!(tr.is_identity());
        assert_eq!(red, inst);
    }

    #[test]
    fn twins_keep_terminal_vertex() {
        // Triangle 1-2-3 plus pendant 4 on 1; pair (3,4). Vertices 2 and 3
        // are twins; terminal 3 must be the survivor.
        let mut g = complete_graph(3);
        g.add_edge(v(1), v(4));
        let inst = Instance::new(g, vec![(v(3), v(4))]).unwrap();
        let (red, tr) = remove_twins(&inst).unwrap();
        assert!(red.graph.contains(v(3)));
        assert!(!red.graph.contains(v(2)));
        roundtrip_equivalent(&inst, &red, &tr);
    }

    /// Host graph for W-join tests: C_4 pattern {1,2}x{3,4} with a pendant
    /// path attached homogeneously on each side.
    fn wjoin_host() -> Graph {
        let mut g = Graph::new();
        let (a1, a2, b1, b2) = (v(1), v(2), v(3), v(4));
        g.add_edge(a1, a2);
        g.add_edge(b1, b2);
        g.add_edge(a1, b1);
        g.add_edge(a2, b2);
        g.add_edge(v(5), a1);
        g.add_edge(v(5), a2);
        g.add_edge(v(5), v(6));
        g.add_edge(v(7), b1);
        g.add_edge(v(7), b2);
        g.add_edge(v(7), v(8));
        g
    }

    #[test]
    fn wjoin_case4_keeps_triple() {
        let inst = Instance::new(wjoin_host(), vec![(v(6), v(8))]).unwrap();
        assert!(find_proper_w_join(&inst.graph).is_some());
        let (red, tr) = remove_w_joins(&inst).unwrap();
        assert!(find_proper_w_join(&red.graph).is_none());
        assert!(twin_sets(&red.graph).all_singletons());
        assert!(red.graph.n() < inst.graph.n());
        roundtrip_equivalent(&inst, &red, &tr);
    }

    #[test]
    fn wjoin_case2_same_pair_drops_pair() {
        // Terminals on 1 in A and 4 in B (nonadjacent across), same pair.
        let inst = Instance::new(wjoin_host(), vec![(v(1), v(4))]).unwrap();
        let wj = find_proper_w_join(&inst.graph).expect("host has a W-join");
        let sides: BTreeSet<VertexId> = wj.a.union(&wj.b).copied().collect();
        assert_eq!(sides, BTreeSet::from([v(1), v(2), v(3), v(4)]));
        let (red, tr) = remove_w_joins(&inst).unwrap();
        assert_eq!(red.k(), 0);
        assert!(tr.steps.iter().any(|s| matches!(s, Step::DropPair { splice, .. } if splice.len() == 3)));
        roundtrip_equivalent(&inst, &red, &tr);
    }

    #[test]
    fn wjoin_case3_single_terminal() {
        let inst = Instance::new(wjoin_host(), vec![(v(1), v(8))]).unwrap();
        let (red, tr) = remove_w_joins(&inst).unwrap();
        assert!(find_proper_w_join(&red.graph).is_none());
        assert!(red.graph.contains(v(1)), "terminal vertex survives");
        roundtrip_equivalent(&inst, &red, &tr);
    }

    #[test]
    fn wjoin_free_identity() {
        let inst = Instance::new(path_graph(5), vec![(v(1), v(5))]).unwrap();
        let (red, tr) = remove_w_joins(&inst).unwrap();
        assert!(tr.is_identity());
        assert_eq!(red, inst);
    }

    #[test]
    fn monotone_sizes() {
        let inst = Instance::new(wjoin_host(), vec![(v(6), v(8))]).unwrap();
        let (r1, _) = make_independent(&inst).unwrap();
        assert!(r1.graph.n() <= inst.graph.n() && r1.k() <= inst.k());
        let (r2, _) = remove_twins(&r1).unwrap();
        assert!(r2.graph.n() <= r1.graph.n());
        let (r3, _) = remove_w_joins(&r2).unwrap();
        assert!(r3.graph.n() <= r2.graph.n() && r3.k() <= r2.k());
    }

    #[test]
    fn transcript_dump_format() {
        let tr = Transcript {
            steps: vec![
                Step::DeleteVertex { v: v(3), reason: "rule1".into() },
                Step::DeleteEdge { u: v(1), v: v(2) },
                Step::DropPair { index: 0, splice: vec![v(1), v(2)] },
            ],
        };
        let dump = tr.dump();
        assert!(dump.contains("del-v 3 rule1"));
        assert!(dump.contains("del-e 1 2"));
        assert!(dump.contains("drop-pair 1 splice=1,2"));
    }
}
