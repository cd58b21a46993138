//! Exact desk-scale reference solvers: backtracking search for mutually
//! induced paths, plain vertex-disjoint paths, and (anchored) induced
//! subdivisions. These are the ground truth everything else is checked
//! against, so they favour obvious correctness over speed.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::graph::{Graph, VertexId};
use crate::instance::{verify_solution, Instance, Solution};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("graph has {n} vertices, over the search cap {cap} (override the cap to force)")]
    CapExceeded { n: usize, cap: usize },
}

/// Search budget. The vertex cap is soft: callers can raise it.
#[derive(Debug, Clone, Copy)]
pub struct Limits {
    pub max_vertices: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits { max_vertices: 20 }
    }
}

impl Limits {
    pub fn with_cap(max_vertices: usize) -> Limits {
        Limits { max_vertices }
    }
}

// ---------------------------------------------------------------------------
// Induced disjoint paths
// ---------------------------------------------------------------------------

struct IdpSearch<'a> {
    g: &'a Graph,
    pairs: &'a [(VertexId, VertexId)],
    /// Vertices carrying a terminal of any pair.
    terminal_vertices: BTreeSet<VertexId>,
    /// order[d] = pair searched at depth d.
    order: Vec<usize>,
    chosen: Vec<Vec<VertexId>>,
}

impl<'a> IdpSearch<'a> {
    /// Vertices statically usable as inner vertices of pair i's path: not a
    /// terminal vertex of any other pair and not adjacent to one. (An inner
    /// vertex adjacent to a foreign terminal vertex would violate condition
    /// (iii) against that pair's path, whatever it turns out to be.)
    fn inner_allowed(&self, pair: usize) -> BTreeSet<VertexId> {
        let (s, t) = self.pairs[pair];
        let own = BTreeSet::from([s, t]);
        let mut allowed = BTreeSet::new();
        'vert: for v in self.g.vertices() {
            if self.terminal_vertices.contains(&v) {
                continue;
            }
            for w in self.g.neighbors(v) {
                if self.terminal_vertices.contains(&w) && !own.contains(&w) {
                    continue 'vert;
                }
            }
            allowed.insert(v);
        }
        allowed
    }

    /// Adds the per-pair dynamic restrictions from already chosen paths:
    /// their vertices are off limits, and so is everything adjacent to them
    /// except neighbors of this pair's own terminals where those terminals
    /// are shared ends.
    fn restrict_by_chosen(&self, pair: usize, allowed: &mut BTreeSet<VertexId>) {
        let (s, t) = self.pairs[pair];
        for (d, path) in self.chosen.iter().enumerate() {
            let other = self.pairs[self.order[d]];
            let other_ends = BTreeSet::from([other.0, other.1]);
            for &v in path {
                allowed.remove(&v);
                let shared_end = (v == s || v == t) && other_ends.contains(&v);
                if !shared_end {
                    for w in self.g.neighbors(v) {
                        allowed.remove(&w);
                    }
                }
            }
        }
    }

    /// Can this vertex host an end of pair `pair` given the chosen paths?
    /// Ends may coincide with ends of other chosen paths (shared terminals)
    /// but may not sit on their interiors; interiors avoiding foreign
    /// terminals is already guaranteed by `inner_allowed` of those pairs.
    fn end_ok(&self, v: VertexId) -> bool {
        for path in &self.chosen {
            if path.len() >= 2 {
                if path[1..path.len() - 1].contains(&v) {
                    return false;
                }
            }
        }
        true
    }

    fn solve(&mut self) -> Option<Vec<Vec<VertexId>>> {
        if self.order.len() == self.chosen.len() {
            return Some(self.chosen.clone());
        }
        let pair = self.order[self.chosen.len()];
        let (s, t) = self.pairs[pair];
        if !self.end_ok(s) || !self.end_ok(t) {
            return None;
        }
        if s == t {
            // Single-vertex path. Not allowed to be adjacent to an inner
            // vertex of any chosen path; chosen inners already avoid foreign
            // terminal vertices, so only membership needs a check (done in
            // end_ok above).
            self.chosen.push(vec![s]);
            if let Some(sol) = self.solve() {
                return Some(sol);
            }
            self.chosen.pop();
            return None;
        }
        let mut allowed = self.inner_allowed(pair);
        self.restrict_by_chosen(pair, &mut allowed);
        let mut path = vec![s];
        self.extend_path(pair, t, &allowed, &mut path)
    }

    fn extend_path(
        &mut self,
        pair: usize,
        t: VertexId,
        allowed: &BTreeSet<VertexId>,
        path: &mut Vec<VertexId>,
    ) -> Option<Vec<Vec<VertexId>>> {
        let tail = *path.last().unwrap();
        let nexts: Vec<VertexId> = self.g.neighbors(tail).collect();
        for w in nexts {
            if w == t {
                // Close the path; t must be nonadjacent to all non-tail
                // vertices for the path to be induced.
                if path[..path.len() - 1].iter().any(|&x| self.g.has_edge(x, t) || x == t) {
                    continue;
                }
                path.push(t);
                self.chosen.push(path.clone());
                if let Some(sol) = self.solve() {
                    return Some(sol);
                }
                self.chosen.pop();
                path.pop();
                continue;
            }
            if !allowed.contains(&w) || path.contains(&w) {
                continue;
            }
            // Induced: w may touch only the current tail among path vertices.
            if path[..path.len() - 1].iter().any(|&x| self.g.has_edge(x, w)) {
                continue;
            }
            path.push(w);
            if let Some(sol) = self.extend_path(pair, t, allowed, path) {
                return Some(sol);
            }
            path.pop();
        }
        None
    }
}

/// Core exact search over raw pairs. Tolerates coinciding pairs (a multiset
/// of pairs), which the `Instance` type itself rules out; conditions
/// (i)-(iii) are well defined either way.
pub fn solve_idp_pairs(
    g: &Graph,
    pairs: &[(VertexId, VertexId)],
    limits: &Limits,
) -> Result<Option<Vec<Vec<VertexId>>>, OracleError> {
    if g.n() > limits.max_vertices {
        return Err(OracleError::CapExceeded { n: g.n(), cap: limits.max_vertices });
    }
    if pairs.is_empty() {
        return Ok(Some(Vec::new()));
    }
    // Most constrained pair first: sort by shortest-path distance.
    let mut dist: Vec<(usize, usize)> = Vec::new();
    for (i, &(s, t)) in pairs.iter().enumerate() {
        if !g.contains(s) || !g.contains(t) {
            return Ok(None);
        }
        match g.bfs_dist(s, t) {
            None => return Ok(None),
            Some(d) => dist.push((d, i)),
        }
    }
    dist.sort();
    let order: Vec<usize> = dist.into_iter().map(|(_, i)| i).collect();
    let mut search = IdpSearch {
        g,
        pairs,
        terminal_vertices: pairs.iter().flat_map(|&(s, t)| [s, t]).collect(),
        order: order.clone(),
        chosen: Vec::new(),
    };
    let found = search.solve();
    Ok(found.map(|paths_in_order| {
        let mut by_pair = vec![Vec::new(); pairs.len()];
        for (d, path) in paths_in_order.into_iter().enumerate() {
            by_pair[order[d]] = path;
        }
        by_pair
    }))
}

/// Exact Induced Disjoint Paths on an instance. YES answers come with a
/// verified certificate.
pub fn solve_idp_exact(inst: &Instance, limits: &Limits) -> Result<Option<Solution>, OracleError> {
    let raw: Vec<(VertexId, VertexId)> = inst.pairs.iter().map(|p| (p.s, p.t)).collect();
    let sol = solve_idp_pairs(&inst.graph, &raw, limits)?.map(|paths| Solution { paths });
    if let Some(s) = &sol {
        debug_assert!(verify_solution(inst, s).is_empty(), "oracle produced an invalid certificate");
    }
    Ok(sol)
}

// ---------------------------------------------------------------------------
// Vertex-disjoint paths
// ---------------------------------------------------------------------------

struct VdpSearch<'a> {
    g: &'a Graph,
    pairs: &'a [(VertexId, VertexId)],
    order: Vec<usize>,
    chosen: Vec<Vec<VertexId>>,
}

impl<'a> VdpSearch<'a> {
    fn blocked(&self) -> (BTreeSet<VertexId>, BTreeSet<VertexId>) {
        let mut interior = BTreeSet::new();
        let mut endpoints = BTreeSet::new();
        for path in &self.chosen {
            endpoints.insert(path[0]);
            endpoints.insert(*path.last().unwrap());
            for &v in path.iter().skip(1).take(path.len().saturating_sub(2)) {
                interior.insert(v);
            }
        }
        (interior, endpoints)
    }

    fn solve(&mut self) -> Option<Vec<Vec<VertexId>>> {
        if self.order.len() == self.chosen.len() {
            return Some(self.chosen.clone());
        }
        let pair = self.order[self.chosen.len()];
        let (s, t) = self.pairs[pair];
        let (interior, endpoints) = self.blocked();
        // Endpoints may coincide with other endpoints (legitimate terminal
        // sharing) but never lie inside another path.
        if interior.contains(&s) || interior.contains(&t) {
            return None;
        }
        if s == t {
            self.chosen.push(vec![s]);
            if let Some(sol) = self.solve() {
                return Some(sol);
            }
            self.chosen.pop();
            return None;
        }
        let mut path = vec![s];
        self.extend(t, &interior, &endpoints, &mut path)
    }

    fn extend(
        &mut self,
        t: VertexId,
        interior: &BTreeSet<VertexId>,
        endpoints: &BTreeSet<VertexId>,
        path: &mut Vec<VertexId>,
    ) -> Option<Vec<Vec<VertexId>>> {
        let tail = *path.last().unwrap();
        let nexts: Vec<VertexId> = self.g.neighbors(tail).collect();
        for w in nexts {
            if path.contains(&w) {
                continue;
            }
            if w == t {
                path.push(t);
                self.chosen.push(path.clone());
                if let Some(sol) = self.solve() {
                    return Some(sol);
                }
                self.chosen.pop();
                path.pop();
                continue;
            }
            // Inner vertices must avoid every vertex of every chosen path.
            if interior.contains(&w) || endpoints.contains(&w) {
                continue;
            }
            path.push(w);
            if let Some(sol) = self.extend(t, interior, endpoints, path) {
                return Some(sol);
            }
            path.pop();
        }
        None
    }
}

/// Exact vertex-disjoint paths: paths pairwise share no vertices except that
/// two paths may share a common terminal vertex as an end.
pub fn solve_vdp_exact(
    g: &Graph,
    pairs: &[(VertexId, VertexId)],
    limits: &Limits,
) -> Result<Option<Vec<Vec<VertexId>>>, OracleError> {
    if g.n() > limits.max_vertices {
        return Err(OracleError::CapExceeded { n: g.n(), cap: limits.max_vertices });
    }
    if pairs.is_empty() {
        return Ok(Some(Vec::new()));
    }
    let mut dist: Vec<(usize, usize)> = Vec::new();
    for (i, &(s, t)) in pairs.iter().enumerate() {
        if !g.contains(s) || !g.contains(t) {
            return Ok(None);
        }
        match g.bfs_dist(s, t) {
            None => return Ok(None),
            Some(d) => dist.push((d, i)),
        }
    }
    dist.sort();
    let order: Vec<usize> = dist.into_iter().map(|(_, i)| i).collect();
    let mut search = VdpSearch { g, pairs, order: order.clone(), chosen: Vec::new() };
    let found = search.solve();
    Ok(found.map(|paths| {
        let mut by_pair = vec![Vec::new(); pairs.len()];
        for (d, path) in paths.into_iter().enumerate() {
            by_pair[order[d]] = path;
        }
        by_pair
    }))
}

// ---------------------------------------------------------------------------
// Induced subdivisions (induced topological minors)
// ---------------------------------------------------------------------------

/// Witness that G contains a subdivision of H as an induced subgraph:
/// an injection of branch vertices plus one path per H-edge.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubdivisionWitness {
    pub branch_map: BTreeMap<VertexId, VertexId>,
    /// H-edge (a, b) with a < b -> path in G from branch(a) to branch(b).
    pub path_map: BTreeMap<(VertexId, VertexId), Vec<VertexId>>,
}

/// Mechanical witness check: the union of branch vertices and path interiors
/// must induce exactly a subdivision of H in G (no extra adjacencies).
pub fn validate_subdivision_witness(g: &Graph, h: &Graph, w: &SubdivisionWitness) -> Vec<String> {
    let mut out = Vec::new();
    let mut images: BTreeSet<VertexId> = BTreeSet::new();
    for x in h.vertices() {
        match w.branch_map.get(&x) {
            None => out.push(format!("branch vertex {x} unmapped")),
            Some(&gx) => {
                if !images.insert(gx) {
                    out.push(format!("branch map not injective at {gx}"));
                }
                if !g.contains(gx) {
                    out.push(format!("branch image {gx} not in G"));
                }
            }
        }
    }
    let mut union: BTreeSet<VertexId> = images.clone();
    let mut edge_pairs: BTreeSet<(VertexId, VertexId)> = BTreeSet::new();
    for (a, b) in h.edges() {
        let Some(path) = w.path_map.get(&(a, b)) else {
            out.push(format!("edge {a}-{b} has no path"));
            continue;
        };
        if path.first() != w.branch_map.get(&a) || path.last() != w.branch_map.get(&b) {
            out.push(format!("path for {a}-{b} has wrong endpoints"));
        }
        for win in path.windows(2) {
            if !g.has_edge(win[0], win[1]) {
                out.push(format!("path for {a}-{b} is not a walk at {}-{}", win[0], win[1]));
            }
            let key = (win[0].min(win[1]), win[0].max(win[1]));
            edge_pairs.insert(key);
        }
        for &v in &path[1..path.len().saturating_sub(1)] {
            if images.contains(&v) {
                out.push(format!("path for {a}-{b} runs through branch vertex {v}"));
            }
            if !union.insert(v) {
                out.push(format!("paths share interior vertex {v}"));
            }
        }
    }
    // Every adjacency inside the union must be a consecutive path edge.
    let sub = g.induced(&union);
    for (u, v) in sub.edges() {
        if !edge_pairs.contains(&(u, v)) {
            out.push(format!("extra edge {u}-{v} inside the witness"));
        }
    }
    out
}

/// Searches for H as an induced topological minor of G, optionally anchored:
/// `anchors` pins H-vertices to G-vertices (a full or partial map).
/// Exhaustive over branch injections, with induced paths found by the IDP
/// search (whose conditions are exactly the subdivision requirements).
pub fn find_induced_subdivision(
    g: &Graph,
    h: &Graph,
    anchors: Option<&BTreeMap<VertexId, VertexId>>,
    limits: &Limits,
) -> Result<Option<SubdivisionWitness>, OracleError> {
    if g.n() > limits.max_vertices {
        return Err(OracleError::CapExceeded { n: g.n(), cap: limits.max_vertices });
    }
    let hverts: Vec<VertexId> = h.vertices().collect();
    if hverts.is_empty() {
        return Ok(Some(SubdivisionWitness { branch_map: BTreeMap::new(), path_map: BTreeMap::new() }));
    }
    // Candidate images per H-vertex: anchored ones are fixed.
    let mut cands: Vec<Vec<VertexId>> = Vec::new();
    for &x in &hverts {
        if let Some(&gx) = anchors.and_then(|a| a.get(&x)) {
            if !g.contains(gx) {
                return Ok(None);
            }
            cands.push(vec![gx]);
        } else {
            cands.push(g.vertices().filter(|&v| g.degree(v) >= h.degree(x)).collect());
        }
    }
    // Assign most-constrained vertices first.
    let mut order: Vec<usize> = (0..hverts.len()).collect();
    order.sort_by_key(|&i| (cands[i].len(), usize::MAX - h.degree(hverts[i])));

    fn assign(
        g: &Graph,
        h: &Graph,
        hverts: &[VertexId],
        cands: &[Vec<VertexId>],
        order: &[usize],
        depth: usize,
        map: &mut BTreeMap<VertexId, VertexId>,
        used: &mut BTreeSet<VertexId>,
        limits: &Limits,
    ) -> Option<SubdivisionWitness> {
        if depth == order.len() {
            // Branch vertices fixed; route the subdivided edges.
            let mut pairs = Vec::new();
            let mut keys = Vec::new();
            for (a, b) in h.edges() {
                pairs.push((map[&a], map[&b]));
                keys.push((a, b));
            }
            // Isolated H-vertices become single-vertex pairs, forcing their
            // images to stay clear of every path.
            for x in h.vertices() {
                if h.degree(x) == 0 {
                    pairs.push((map[&x], map[&x]));
                    keys.push((x, x));
                }
            }
            let found = solve_idp_pairs(g, &pairs, limits).ok()??;
            let mut path_map = BTreeMap::new();
            for (key, path) in keys.into_iter().zip(found) {
                if key.0 != key.1 {
                    path_map.insert(key, path);
                }
            }
            let w = SubdivisionWitness { branch_map: map.clone(), path_map };
            debug_assert!(validate_subdivision_witness(g, h, &w).is_empty());
            return Some(w);
        }
        let hi = order[depth];
        let x = hverts[hi];
        'cand: for &gv in &cands[hi] {
            if used.contains(&gv) {
                continue;
            }
            // A subdivision never makes two branch vertices adjacent unless
            // their H-vertices are; and adjacent images realize the H-edge
            // directly, which is consistent either way.
            for (&y, &gy) in map.iter() {
                if !h.has_edge(x, y) && g.has_edge(gv, gy) {
                    continue 'cand;
                }
            }
            map.insert(x, gv);
            used.insert(gv);
            if let Some(w) = assign(g, h, hverts, cands, order, depth + 1, map, used, limits) {
                return Some(w);
            }
            map.remove(&x);
            used.remove(&gv);
        }
        None
    }

    let mut map = BTreeMap::new();
    let mut used = BTreeSet::new();
    if let Some(anchor_map) = anchors {
        // Anchors must be injective between themselves.
        let vals: BTreeSet<VertexId> = anchor_map.values().copied().collect();
        if vals.len() != anchor_map.len() {
            return Ok(None);
        }
    }
    Ok(assign(g, h, &hverts, &cands, &order, 0, &mut map, &mut used, limits))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{complete_graph, cycle_graph, line_graph, path_graph, star_graph};
    use crate::instance::subdivide_all_edges;

    fn v(i: u32) -> VertexId {
        VertexId(i)
    }

    fn lim() -> Limits {
        Limits::default()
    }

    #[test]
    fn idp_path_yes() {
        let inst = Instance::new(path_graph(3), vec![(v(1), v(3))]).unwrap();
        let sol = solve_idp_exact(&inst, &lim()).unwrap().expect("YES");
        assert_eq!(sol.paths, vec![vec![v(1), v(2), v(3)]]);
    }

    #[test]
    fn idp_c4_crossing_no() {
        let inst = Instance::new(cycle_graph(4), vec![(v(1), v(3)), (v(2), v(4))]).unwrap();
        assert!(solve_idp_exact(&inst, &lim()).unwrap().is_none());
    }

    #[test]
    fn idp_empty_pairs_yes() {
        let inst = Instance::new(cycle_graph(4), vec![]).unwrap();
        let sol = solve_idp_exact(&inst, &lim()).unwrap().expect("empty instances are YES");
        assert!(sol.paths.is_empty());
    }

    #[test]
    fn idp_cap() {
        let inst = Instance::new(path_graph(10), vec![(v(1), v(10))]).unwrap();
        let err = solve_idp_exact(&inst, &Limits::with_cap(5)).unwrap_err();
        assert!(matches!(err, OracleError::CapExceeded { .. }));
        assert!(solve_idp_exact(&inst, &Limits::with_cap(10)).is_ok());
    }

    #[test]
    fn idp_c6_two_pairs() {
        // C_6 with pairs (1,4),(2,5) interleaves around the cycle: NO.
        let inst = Instance::new(cycle_graph(6), vec![(v(1), v(4)), (v(2), v(5))]).unwrap();
        assert!(solve_idp_exact(&inst, &lim()).unwrap().is_none());
        // Pairs on opposite arcs: (1,3),(4,6) gives paths 1-2-3 and 4-5-6.
        let inst = Instance::new(cycle_graph(6), vec![(v(1), v(3)), (v(4), v(6))]).unwrap();
        let sol = solve_idp_exact(&inst, &lim()).unwrap().expect("YES");
        assert!(verify_solution(&inst, &sol).is_empty());
    }

    #[test]
    fn vdp_examples() {
        // K_4: two single-edge paths.
        let got = solve_vdp_exact(&complete_graph(4), &[(v(1), v(2)), (v(3), v(4))], &lim())
            .unwrap()
            .expect("YES");
        assert_eq!(got, vec![vec![v(1), v(2)], vec![v(3), v(4)]]);
        // P_4 with nested pairs: any 1-4 path uses 2 and 3.
        assert!(solve_vdp_exact(&path_graph(4), &[(v(1), v(4)), (v(2), v(3))], &lim())
            .unwrap()
            .is_none());
        // Star: both pairs need the center.
        let star = star_graph(3);
        assert!(solve_vdp_exact(&star, &[(v(2), v(3)), (v(4), v(1))], &lim())
            .unwrap()
            .is_none());
    }

    #[test]
    fn vdp_shared_terminal_ends() {
        let star = star_graph(3);
        let got = solve_vdp_exact(&star, &[(v(2), v(1)), (v(3), v(1))], &lim())
            .unwrap()
            .expect("shared end vertex is legal");
        assert_eq!(got[0].last(), Some(&v(1)));
        assert_eq!(got[1].last(), Some(&v(1)));
    }

    #[test]
    fn subdivision_identity_and_cycle() {
        let g = cycle_graph(6);
        let w = find_induced_subdivision(&g, &g, None, &lim()).unwrap().expect("identity");
        assert!(validate_subdivision_witness(&g, &g, &w).is_empty());
        // C_6 is a subdivision of C_3.
        let w = find_induced_subdivision(&g, &cycle_graph(3), None, &lim())
            .unwrap()
            .expect("C_6 subdivides C_3");
        assert!(validate_subdivision_witness(&g, &cycle_graph(3), &w).is_empty());
    }

    #[test]
    fn subdivision_l_k4_anchored_identity() {
        let (lk4, _) = line_graph(&complete_graph(4));
        let anchors: BTreeMap<VertexId, VertexId> =
            lk4.vertices().map(|x| (x, x)).collect();
        let w = find_induced_subdivision(&lk4, &lk4, Some(&anchors), &lim())
            .unwrap()
            .expect("anchored identity");
        assert!(validate_subdivision_witness(&lk4, &lk4, &w).is_empty());
    }

    #[test]
    fn subdivision_absent() {
        // K_3 is not an induced topological minor of a path.
        assert!(find_induced_subdivision(&path_graph(5), &cycle_graph(3), None, &lim())
            .unwrap()
            .is_none());
    }

    #[test]
    fn subdivision_isolated_anchor() {
        // H = edge x1-x2 plus isolated x3; the isolated anchor must be
        // nonadjacent to the realized path.
        let mut h = Graph::new();
        h.add_edge(v(1), v(2));
        h.insert_vertex(v(3));
        let g = path_graph(4); // 1-2-3-4
        let anchors = BTreeMap::from([(v(1), v(1)), (v(2), v(3)), (v(3), v(4))]);
        // Path 1-2-3 would leave anchor 4 adjacent to 3: rejected, and no
        // other route exists.
        assert!(find_induced_subdivision(&g, &h, Some(&anchors), &lim()).unwrap().is_none());
        let mut g2 = path_graph(4);
        g2.insert_vertex(v(9));
        let anchors = BTreeMap::from([(v(1), v(1)), (v(2), v(3)), (v(3), v(9))]);
        let w = find_induced_subdivision(&g2, &h, Some(&anchors), &lim()).unwrap().expect("YES");
        assert!(validate_subdivision_witness(&g2, &h, &w).is_empty());
    }

    /// Subdividing every edge turns vertex-disjoint linkages into induced
    /// linkages and back (checked exhaustively on small graphs).
    #[test]
    fn subdivision_correspondence_small() {
        let mut checked = 0;
        for n in 3u32..=5 {
            for mask in 0u64..(1 << (n * (n - 1) / 2)) {
                if mask % 7 != 0 {
                    continue; // thin out; the acceptance suite covers more
                }
                let mut g = Graph::with_vertices((1..=n).map(v));
                let mut bit = 0;
                for i in 1..=n {
                    for j in i + 1..=n {
                        if mask >> bit & 1 == 1 {
                            g.add_edge(v(i), v(j));
                        }
                        bit += 1;
                    }
                }
                let pairs = vec![(v(1), v(2)), (v(3), v(n))];
                let vdp = solve_vdp_exact(&g, &pairs, &Limits::with_cap(40)).unwrap().is_some();
                let inst = Instance::new(g, pairs).unwrap();
                let (sub, _) = subdivide_all_edges(&inst);
                let idp = solve_idp_exact(&sub, &Limits::with_cap(40)).unwrap().is_some();
                assert_eq!(vdp, idp, "mask {mask} n {n}");
                checked += 1;
            }
        }
        assert!(checked > 100);
    }

    /// Oracle answers are invariant under vertex relabeling.
    #[test]
    fn isomorphism_invariance() {
        let inst = Instance::new(cycle_graph(6), vec![(v(1), v(3)), (v(4), v(6))]).unwrap();
        let base = solve_idp_exact(&inst, &lim()).unwrap().is_some();
        // Relabel i -> 7 - i.
        let mut g2 = Graph::new();
        for (a, b) in inst.graph.edges() {
            g2.add_edge(v(7 - a.0), v(7 - b.0));
        }
        let inst2 = Instance::new(g2, vec![(v(6), v(4)), (v(3), v(1))]).unwrap();
        assert_eq!(base, solve_idp_exact(&inst2, &lim()).unwrap().is_some());
    }
}
