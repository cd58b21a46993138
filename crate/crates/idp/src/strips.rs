//! Strip structures and the branching reduction to line graphs.
//!
//! A strip structure decomposes a claw-free graph into strips hung on a
//! hypergraph R: each hyperedge owns a strip (J, Z) whose interior partitions
//! the graph, with synthetic boundary vertices z_v whose J-neighborhoods glue
//! into cliques C_v of the host graph. Spots are three-vertex paths; stripes
//! have an independent Z with at most one boundary neighbor per interior
//! vertex.
//!
//! `branch_strips` processes the strips one hyperedge at a time. A stripe
//! whose interior carries no terminals collapses to nothing (one boundary) or
//! to a shortest crossing path (two boundaries). Terminal-bearing stripes are
//! resolved by solving small subproblems on (induced subgraphs of) J — the
//! boundary vertices z stand in for the outside — and rewriting the instance
//! onto the rest of the graph with small pendant gadgets replacing the strip.
//! With two boundaries this costs up to six branches; the disjunction of the
//! leaf answers equals the original answer, every leaf is a line graph, and
//! recorded splice steps rebuild a full certificate from any leaf certificate.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::circarc::{solve_ca, solve_proper_ca, validate_arc_model, ArcModel};
use crate::graph::{self, Graph, VertexId};
use crate::instance::{independence_report, Instance, TerminalPair};
use crate::oracle::{solve_idp_pairs, Limits, OracleError};

/// Vertex of the strip hypergraph R.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RId(pub u32);

impl fmt::Display for RId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Debug for RId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "r{}", self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Hyperedge {
    pub id: u32,
    pub r_vertices: Vec<RId>,
}

/// Strip (J, Z): J mixes interior vertices (host graph ids) with synthetic
/// boundary vertices; `z` maps each R-vertex of the hyperedge to its boundary
/// vertex in J.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Strip {
    pub j: Graph,
    pub z: BTreeMap<RId, VertexId>,
    pub arcs: Option<ArcModel>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StripStructure {
    pub r_vertices: BTreeSet<RId>,
    pub hyperedges: Vec<Hyperedge>,
    pub strips: BTreeMap<u32, Strip>,
}

impl StripStructure {
    pub fn strip(&self, hid: u32) -> &Strip {
        &self.strips[&hid]
    }

    fn interior(&self, hid: u32) -> BTreeSet<VertexId> {
        let strip = &self.strips[&hid];
        let zset: BTreeSet<VertexId> = strip.z.values().copied().collect();
        strip.j.vertices().filter(|v| !zset.contains(v)).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StructViolation {
    UnknownHyperedgeVertex { hid: u32, r: RId },
    MissingStrip { hid: u32 },
    ZNotInJ { hid: u32, z: VertexId },
    ZInHostGraph { hid: u32, z: VertexId },
    ZMapMismatch { hid: u32 },
    ZEdge { hid: u32, a: VertexId, b: VertexId },
    JNotClawFree { hid: u32, center: VertexId },
    InteriorEmpty { hid: u32 },
    InteriorNotInHost { hid: u32, v: VertexId },
    InteriorOverlap { v: VertexId },
    HostVertexUncovered { v: VertexId },
    InteriorEdgeMismatch { hid: u32, u: VertexId, v: VertexId },
    BoundaryNotClique { r: RId, u: VertexId, v: VertexId },
    EdgeUncovered { u: VertexId, v: VertexId },
    NotSpotOrStripe { hid: u32, reason: String },
}

/// Kind of a strip, with the solver class a stripe's subproblems dispatch to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StripKind {
    Spot,
    Stripe { z_count: usize },
}

pub fn classify_strip(he: &Hyperedge, strip: &Strip) -> Result<StripKind, String> {
    let zset: BTreeSet<VertexId> = strip.z.values().copied().collect();
    if zset.len() != he.r_vertices.len() || strip.z.len() != he.r_vertices.len() {
        return Err("z map is not a bijection with the hyperedge".into());
    }
    let interior: BTreeSet<VertexId> = strip.j.vertices().filter(|v| !zset.contains(v)).collect();
    // Spot: three-vertex path, Z = both ends.
    if zset.len() == 2 && interior.len() == 1 && strip.j.n() == 3 {
        let mid = *interior.iter().next().unwrap();
        let zs: Vec<VertexId> = zset.iter().copied().collect();
        if strip.j.has_edge(zs[0], mid) && strip.j.has_edge(zs[1], mid) && !strip.j.has_edge(zs[0], zs[1]) {
            return Ok(StripKind::Spot);
        }
    }
    // Stripe: Z pairwise nonadjacent, each interior vertex near at most one z.
    let zs: Vec<VertexId> = zset.iter().copied().collect();
    for (i, &a) in zs.iter().enumerate() {
        for &b in zs.iter().skip(i + 1) {
            if strip.j.has_edge(a, b) {
                return Err(format!("boundary vertices {a} and {b} are adjacent"));
            }
        }
    }
    for &v in &interior {
        let cnt = zs.iter().filter(|&&z| strip.j.has_edge(v, z)).count();
        if cnt > 1 {
            return Err(format!("interior vertex {v} touches {cnt} boundary vertices"));
        }
    }
    Ok(StripKind::Stripe { z_count: zset.len() })
}

/// Checks the six structure axioms plus spot/stripe classifiability.
pub fn validate_strip_structure(g: &Graph, s: &StripStructure) -> Vec<StructViolation> {
    let mut out = Vec::new();
    let mut covered: BTreeMap<VertexId, u32> = BTreeMap::new();
    for he in &s.hyperedges {
        for &r in &he.r_vertices {
            if !s.r_vertices.contains(&r) {
                out.push(StructViolation::UnknownHyperedgeVertex { hid: he.id, r });
            }
        }
        let Some(strip) = s.strips.get(&he.id) else {
            out.push(StructViolation::MissingStrip { hid: he.id });
            continue;
        };
        let keys: BTreeSet<RId> = strip.z.keys().copied().collect();
        if keys != he.r_vertices.iter().copied().collect::<BTreeSet<RId>>()
            || strip.z.values().collect::<BTreeSet<_>>().len() != strip.z.len()
        {
            out.push(StructViolation::ZMapMismatch { hid: he.id });
            continue;
        }
        for &zv in strip.z.values() {
            if !strip.j.contains(zv) {
                out.push(StructViolation::ZNotInJ { hid: he.id, z: zv });
            }
            if g.contains(zv) {
                out.push(StructViolation::ZInHostGraph { hid: he.id, z: zv });
            }
        }
        let zset: BTreeSet<VertexId> = strip.z.values().copied().collect();
        for (i, &a) in zset.iter().enumerate() {
            for &b in zset.iter().skip(i + 1) {
                if strip.j.has_edge(a, b) {
                    out.push(StructViolation::ZEdge { hid: he.id, a, b });
                }
            }
        }
        if let Some((c, _)) = graph::find_claw(&strip.j) {
            out.push(StructViolation::JNotClawFree { hid: he.id, center: c });
        }
        let interior = s.interior(he.id);
        if interior.is_empty() {
            out.push(StructViolation::InteriorEmpty { hid: he.id });
        }
        for &v in &interior {
            if !g.contains(v) {
                out.push(StructViolation::InteriorNotInHost { hid: he.id, v });
            }
            if let Some(_prev) = covered.insert(v, he.id) {
                out.push(StructViolation::InteriorOverlap { v });
            }
        }
        // J restricted to the interior must equal G there.
        let j_int = strip.j.induced(&interior);
        let g_int = g.induced(&interior);
        if j_int != g_int {
            let je: BTreeSet<_> = j_int.edges().into_iter().collect();
            let ge: BTreeSet<_> = g_int.edges().into_iter().collect();
            let (u, v) = je.symmetric_difference(&ge).next().copied().unwrap_or((VertexId(0), VertexId(0)));
            out.push(StructViolation::InteriorEdgeMismatch { hid: he.id, u, v });
        }
        if let Err(reason) = classify_strip(he, strip) {
            out.push(StructViolation::NotSpotOrStripe { hid: he.id, reason });
        }
    }
    for v in g.vertices() {
        if !covered.contains_key(&v) {
            out.push(StructViolation::HostVertexUncovered { v });
        }
    }
    // C_v cliques and edge coverage.
    let mut covered_edges: BTreeSet<(VertexId, VertexId)> = BTreeSet::new();
    for he in &s.hyperedges {
        if let Some(strip) = s.strips.get(&he.id) {
            let interior = s.interior(he.id);
            for (u, v) in strip.j.induced(&interior).edges() {
                covered_edges.insert((u, v));
            }
        }
    }
    for &r in &s.r_vertices {
        let mut cv: BTreeSet<VertexId> = BTreeSet::new();
        for he in &s.hyperedges {
            if !he.r_vertices.contains(&r) {
                continue;
            }
            if let Some(strip) = s.strips.get(&he.id) {
                if let Some(&zv) = strip.z.get(&r) {
                    cv.extend(strip.j.neighbors(zv));
                }
            }
        }
        let cvec: Vec<VertexId> = cv.iter().copied().collect();
        for (i, &u) in cvec.iter().enumerate() {
            for &v in cvec.iter().skip(i + 1) {
                if !g.has_edge(u, v) {
                    out.push(StructViolation::BoundaryNotClique { r, u, v });
                } else {
                    covered_edges.insert((u.min(v), u.max(v)));
                }
            }
        }
    }
    for (u, v) in g.edges() {
        if !covered_edges.contains(&(u, v)) {
            out.push(StructViolation::EdgeUncovered { u, v });
        }
    }
    out
}

// ---------------------------------------------------------------------------
// File format
// ---------------------------------------------------------------------------

/// Parses the strip-structure file. Arc attachments are returned as raw file
/// names for the caller to resolve against its own base directory.
pub fn parse_strip_structure(text: &str) -> Result<(StripStructure, BTreeMap<u32, String>), String> {
    let mut s = StripStructure {
        r_vertices: BTreeSet::new(),
        hyperedges: Vec::new(),
        strips: BTreeMap::new(),
    };
    let mut arc_files = BTreeMap::new();
    let mut current: Option<u32> = None;
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        let lineno = idx + 1;
        if line.is_empty() || line.starts_with("c ") || line == "c" {
            continue;
        }
        let fields: Vec<&str> = line.split_ascii_whitespace().collect();
        match fields[0] {
            "rvertex" => {
                let r: u32 = fields
                    .get(1)
                    .and_then(|x| x.parse().ok())
                    .ok_or(format!("line {lineno}: expected `rvertex <id>`"))?;
                s.r_vertices.insert(RId(r));
            }
            "hedge" => {
                let id: u32 = fields
                    .get(1)
                    .and_then(|x| x.parse().ok())
                    .ok_or(format!("line {lineno}: expected `hedge <id> [r...]`"))?;
                let rs: Result<Vec<RId>, _> =
                    fields[2..].iter().map(|x| x.parse().map(RId)).collect();
                let rs = rs.map_err(|_| format!("line {lineno}: bad r-vertex id"))?;
                s.hyperedges.push(Hyperedge { id, r_vertices: rs });
            }
            "strip" => {
                let id: u32 = fields
                    .get(1)
                    .and_then(|x| x.parse().ok())
                    .ok_or(format!("line {lineno}: expected `strip <hedge-id>`"))?;
                if !s.hyperedges.iter().any(|he| he.id == id) {
                    return Err(format!("line {lineno}: strip for unknown hyperedge {id}"));
                }
                s.strips.insert(id, Strip { j: Graph::new(), z: BTreeMap::new(), arcs: None });
                current = Some(id);
            }
            "jv" => {
                let id = current.ok_or(format!("line {lineno}: `jv` outside a strip block"))?;
                let strip = s.strips.get_mut(&id).unwrap();
                for f in &fields[1..] {
                    let v: u32 = f.parse().map_err(|_| format!("line {lineno}: bad vertex id"))?;
                    strip.j.insert_vertex(VertexId(v));
                }
            }
            "je" => {
                let id = current.ok_or(format!("line {lineno}: `je` outside a strip block"))?;
                if fields.len() != 3 {
                    return Err(format!("line {lineno}: expected `je <u> <v>`"));
                }
                let u: u32 = fields[1].parse().map_err(|_| format!("line {lineno}: bad vertex"))?;
                let v: u32 = fields[2].parse().map_err(|_| format!("line {lineno}: bad vertex"))?;
                if u == v {
                    return Err(format!("line {lineno}: loop edge in strip"));
                }
                s.strips.get_mut(&id).unwrap().j.add_edge(VertexId(u), VertexId(v));
            }
            "z" => {
                let id = current.ok_or(format!("line {lineno}: `z` outside a strip block"))?;
                let spec = fields.get(1).ok_or(format!("line {lineno}: expected `z <r>=<jv>`"))?;
                let (r, jv) = spec
                    .split_once('=')
                    .ok_or(format!("line {lineno}: expected `z <r>=<jv>`"))?;
                let r: u32 = r.parse().map_err(|_| format!("line {lineno}: bad r-vertex"))?;
                let jv: u32 = jv.parse().map_err(|_| format!("line {lineno}: bad j-vertex"))?;
                s.strips.get_mut(&id).unwrap().z.insert(RId(r), VertexId(jv));
            }
            "arcs" => {
                let id = current.ok_or(format!("line {lineno}: `arcs` outside a strip block"))?;
                let f = fields.get(1).ok_or(format!("line {lineno}: expected `arcs <file>`"))?;
                arc_files.insert(id, f.to_string());
            }
            _ => return Err(format!("line {lineno}: unrecognized record `{line}`")),
        }
    }
    Ok((s, arc_files))
}

pub fn format_strip_structure(s: &StripStructure) -> String {
    let mut out = String::new();
    for r in &s.r_vertices {
        out.push_str(&format!("rvertex {r}\n"));
    }
    for he in &s.hyperedges {
        let rs: Vec<String> = he.r_vertices.iter().map(|r| r.to_string()).collect();
        out.push_str(&format!("hedge {} {}\n", he.id, rs.join(" ")).trim_end().to_string());
        out.push('\n');
    }
    for he in &s.hyperedges {
        let strip = &s.strips[&he.id];
        out.push_str(&format!("strip {}\n", he.id));
        let vs: Vec<String> = strip.j.vertices().map(|v| v.to_string()).collect();
        out.push_str(&format!("jv {}\n", vs.join(" ")));
        for (u, v) in strip.j.edges() {
            out.push_str(&format!("je {u} {v}\n"));
        }
        for (r, zv) in &strip.z {
            out.push_str(&format!("z {r}={zv}\n"));
        }
    }
    out
}

// ---------------------------------------------------------------------------
// Builder for line graphs
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StripError {
    #[error("strip structure invalid: {0} violations")]
    Invalid(usize),
    #[error("branching precondition failed: {0}")]
    Precondition(String),
    #[error("strip {hid}: no solver class applies (no arc model, independence number {alpha} > 4)")]
    Unclassifiable { hid: u32, alpha: usize },
    #[error("graph is not a line graph")]
    NotLineGraph,
    #[error("boundary sets at the two ends share {count} vertices (twin-freeness violated?)")]
    SharedBoundary { count: usize },
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error("splice lift failed: {0}")]
    Lift(String),
}

/// Builds the trivial all-spot structure of a connected line graph: R is the
/// preimage, one spot per preimage edge.
pub fn strip_structure_from_line_graph(g: &Graph) -> Result<StripStructure, StripError> {
    if !g.is_connected() || g.n() == 0 {
        return Err(StripError::Precondition("graph must be connected and nonempty".into()));
    }
    let pm = graph::preimage(g).ok_or(StripError::NotLineGraph)?;
    let mut s = StripStructure {
        r_vertices: pm.preimage.vertices().map(|h| RId(h.0)).collect(),
        hyperedges: Vec::new(),
        strips: BTreeMap::new(),
    };
    // Synthetic z ids: above both host ids and preimage-based r ids.
    let mut next_z = g.fresh_id().0;
    let mut edge_to_vertex: BTreeMap<(VertexId, VertexId), VertexId> = BTreeMap::new();
    for (gv, &(a, b)) in &pm.edge_of {
        edge_to_vertex.insert((a, b), *gv);
    }
    for (i, (a, b)) in pm.preimage.edges().into_iter().enumerate() {
        let hid = i as u32 + 1;
        let x = edge_to_vertex[&(a, b)];
        let (za, zb) = (VertexId(next_z), VertexId(next_z + 1));
        next_z += 2;
        let mut j = Graph::new();
        j.add_edge(za, x);
        j.add_edge(zb, x);
        s.hyperedges.push(Hyperedge { id: hid, r_vertices: vec![RId(a.0), RId(b.0)] });
        s.strips.insert(
            hid,
            Strip { j, z: BTreeMap::from([(RId(a.0), za), (RId(b.0), zb)]), arcs: None },
        );
    }
    debug_assert!(validate_strip_structure(g, &s).is_empty());
    Ok(s)
}

// ---------------------------------------------------------------------------
// Claim-1 subproblem dispatch
// ---------------------------------------------------------------------------

/// Solves a subproblem living on (an induced subgraph of) a strip's J: via
/// the circular-arc solvers when an arc model covers the graph, otherwise via
/// the exact search, which is legitimate when the independence number is at
/// most four (the pair count is bounded by it). Paths are positional.
pub fn solve_strip_subproblem(
    g: &Graph,
    pairs: &[(VertexId, VertexId)],
    arcs: Option<&ArcModel>,
    limits: &Limits,
) -> Result<Option<Vec<Vec<VertexId>>>, StripError> {
    let _ = limits;
    if let Some(model) = arcs {
        let m = model.restrict(&g.vertex_set());
        if validate_arc_model(g, &m).is_empty() {
            if let Ok(inst) = Instance::new(g.clone(), pairs.to_vec()) {
                let solved = if m.proper {
                    solve_proper_ca(&inst, &m, &Limits::with_cap(g.n()))
                } else {
                    solve_ca(&inst, &m, &Limits::with_cap(g.n()))
                };
                if let Ok(res) = solved {
                    return Ok(res.map(|sol| sol.paths));
                }
            }
        }
    }
    let alpha = graph::independence_number(g, 64).map_err(|e| StripError::Precondition(e.to_string()))?;
    if alpha <= 4 {
        return Ok(solve_idp_pairs(g, pairs, &Limits::with_cap(g.n()))?);
    }
    Err(StripError::Unclassifiable { hid: 0, alpha })
}

// ---------------------------------------------------------------------------
// Branching
// ---------------------------------------------------------------------------

/// One certificate-rebuilding step recorded by the branching engine.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SpliceStep {
    /// A pair solved inside a strip: its full real-vertex path.
    Insert { pair: usize, path: Vec<VertexId> },
    /// A pair whose path was cut at one or both strip boundaries: the leaf
    /// path starts/ends with the listed gadget vertices, which are stripped
    /// and replaced by the recorded real segments.
    Graft {
        pair: usize,
        front: Vec<VertexId>,
        front_gadgets: Vec<VertexId>,
        back: Vec<VertexId>,
        back_gadgets: Vec<VertexId>,
    },
    /// A terminal-free crossing corridor kept in the leaf graph: if a leaf
    /// path runs through it, the run is replaced by the certified segment.
    CorridorSwap { corridor: Vec<VertexId>, replacement: Vec<VertexId> },
}

#[derive(Debug, Clone)]
pub struct BranchLeaf {
    pub instance: Instance,
    pub splice: Vec<SpliceStep>,
}

#[derive(Debug, Clone)]
pub struct BranchOutcome {
    pub leaves: Vec<BranchLeaf>,
    /// Pairs that had a terminal inside a processed stripe: the leaf count is
    /// bounded by 6^|branching_pairs|.
    pub branching_pairs: BTreeSet<usize>,
}

#[derive(Clone)]
struct StripState {
    hid: u32,
    r: Vec<(RId, VertexId)>,
    j: Graph,
    arcs: Option<ArcModel>,
    is_spot: bool,
}

#[derive(Clone)]
struct Node {
    graph: Graph,
    pairs: Vec<TerminalPair>,
    strips: Vec<StripState>,
    next: usize,
    splice: Vec<SpliceStep>,
    fresh: u32,
}

impl Node {
    fn instance(&self) -> Instance {
        Instance::with_pairs(self.graph.clone(), self.pairs.clone()).expect("pairs stay valid")
    }

    fn terminal_vertices(&self) -> BTreeSet<VertexId> {
        self.pairs.iter().flat_map(|p| [p.s, p.t]).collect()
    }

    fn fresh_vertex(&mut self) -> VertexId {
        let v = VertexId(self.fresh);
        self.fresh += 1;
        v
    }

    /// Deletes vertices everywhere. `covered` lists the pair indices whose
    /// certificates are already recorded, so their terminals may go; hitting
    /// any other pair's terminal kills the branch (returns false).
    fn delete_vertices(&mut self, set: &BTreeSet<VertexId>, covered: &BTreeSet<usize>) -> bool {
        for p in &self.pairs {
            if !covered.contains(&p.index) && (set.contains(&p.s) || set.contains(&p.t)) {
                return false;
            }
        }
        for v in set {
            self.graph.remove_vertex(*v);
        }
        for st in &mut self.strips {
            for v in set {
                st.j.remove_vertex(*v);
            }
        }
        self.pairs.retain(|p| !covered.contains(&p.index));
        true
    }

    /// Interior of a strip that still exists in the current graph.
    fn interior_of(&self, si: usize) -> BTreeSet<VertexId> {
        let st = &self.strips[si];
        let zset: BTreeSet<VertexId> = st.r.iter().map(|&(_, z)| z).collect();
        st.j.vertices().filter(|v| !zset.contains(v) && self.graph.contains(*v)).collect()
    }

    /// X-set of a boundary vertex: its current J-neighborhood.
    fn x_of(&self, si: usize, z: VertexId) -> BTreeSet<VertexId> {
        self.strips[si].j.neighbors(z).filter(|v| self.graph.contains(*v)).collect()
    }

    /// Y-set at an R-vertex: boundary neighborhoods of all other strips there.
    fn y_of(&self, si: usize, r: RId) -> BTreeSet<VertexId> {
        let mut out = BTreeSet::new();
        for (oi, st) in self.strips.iter().enumerate() {
            if oi == si {
                continue;
            }
            if let Some(&(_, z)) = st.r.iter().find(|&&(rr, _)| rr == r) {
                out.extend(st.j.neighbors(z).filter(|v| self.graph.contains(*v)));
            }
        }
        out
    }
}

enum StepResult {
    /// Strip handled in place; move to the next one.
    Advance,
    /// This branch cannot lead to a solution.
    Dead,
    /// Branch into the given children, each resuming at its own `next`.
    Children(Vec<Node>),
}

/// Runs the branching algorithm. The instance must be independent, claw-free
/// and twin-free, with a validated structure whose strips are all spots or
/// stripes. Returns the leaf instances (each a line graph) and splice logs.
pub fn branch_strips(
    inst: &Instance,
    s: &StripStructure,
    limits: &Limits,
) -> Result<BranchOutcome, StripError> {
    let viols = validate_strip_structure(&inst.graph, s);
    if !viols.is_empty() {
        return Err(StripError::Invalid(viols.len()));
    }
    if let Some((c, _)) = graph::find_claw(&inst.graph) {
        return Err(StripError::Precondition(format!("graph has a claw at {c}")));
    }
    if !independence_report(inst).independent {
        return Err(StripError::Precondition("instance is not independent".into()));
    }
    if !graph::twin_sets(&inst.graph).all_singletons() {
        return Err(StripError::Precondition("graph has twins".into()));
    }
    let mut strips = Vec::new();
    let mut max_id = inst.graph.fresh_id().0;
    for he in &s.hyperedges {
        let strip = &s.strips[&he.id];
        let kind = classify_strip(he, strip).map_err(|_| StripError::Invalid(1))?;
        for v in strip.j.vertices() {
            max_id = max_id.max(v.0 + 1);
        }
        strips.push(StripState {
            hid: he.id,
            r: he.r_vertices.iter().map(|&r| (r, strip.z[&r])).collect(),
            j: strip.j.clone(),
            arcs: strip.arcs.clone(),
            is_spot: kind == StripKind::Spot,
        });
    }
    let root = Node {
        graph: inst.graph.clone(),
        pairs: inst.pairs.clone(),
        strips,
        next: 0,
        splice: Vec::new(),
        fresh: max_id,
    };
    let mut out = BranchOutcome { leaves: Vec::new(), branching_pairs: BTreeSet::new() };
    process(root, limits, &mut out)?;
    Ok(out)
}

fn process(mut node: Node, limits: &Limits, out: &mut BranchOutcome) -> Result<(), StripError> {
    loop {
        if node.next >= node.strips.len() {
            out.leaves.push(BranchLeaf { instance: node.instance(), splice: node.splice.clone() });
            return Ok(());
        }
        match process_strip(&mut node, limits, out)? {
            StepResult::Advance => node.next += 1,
            StepResult::Dead => return Ok(()),
            StepResult::Children(children) => {
                for c in children {
                    process(c, limits, out)?;
                }
                return Ok(());
            }
        }
    }
}

fn process_strip(
    node: &mut Node,
    limits: &Limits,
    out: &mut BranchOutcome,
) -> Result<StepResult, StripError> {
    let si = node.next;
    if node.strips[si].is_spot {
        return Ok(StepResult::Advance);
    }
    let interior = node.interior_of(si);
    if interior.is_empty() {
        return Ok(StepResult::Advance);
    }
    // Live boundaries: a boundary participates only while both its inside
    // attachment (X) and outside attachment (Y) are nonempty.
    let mut live: Vec<(RId, VertexId, BTreeSet<VertexId>, BTreeSet<VertexId>)> = Vec::new();
    for &(r, z) in node.strips[si].r.clone().iter() {
        let x = node.x_of(si, z);
        let y = node.y_of(si, r);
        if !x.is_empty() && !y.is_empty() {
            live.push((r, z, x, y));
        }
    }
    let tset = node.terminal_vertices();
    let h_terminals: BTreeSet<VertexId> = interior.intersection(&tset).copied().collect();
    if !h_terminals.is_empty() {
        for p in &node.pairs {
            if interior.contains(&p.s) || interior.contains(&p.t) {
                out.branching_pairs.insert(p.index);
            }
        }
    }
    match live.len() {
        0 => detached_strip(node, si, &interior, &h_terminals, limits),
        1 => {
            let (_, z, x, y) = live.pop().unwrap();
            case_one(node, si, z, &x, &y, &interior, &h_terminals, limits)
        }
        2 => {
            let b = live.pop().unwrap();
            let a = live.pop().unwrap();
            case_two(node, si, a, b, &interior, &h_terminals, limits)
        }
        _ => Err(StripError::Precondition("stripe with more than two boundaries".into())),
    }
}

/// The strip's interior lost both attachments: it is a union of components
/// disconnected from every terminal outside it.
fn detached_strip(
    node: &mut Node,
    si: usize,
    interior: &BTreeSet<VertexId>,
    h_terminals: &BTreeSet<VertexId>,
    limits: &Limits,
) -> Result<StepResult, StripError> {
    if h_terminals.is_empty() {
        node.delete_vertices(interior, &BTreeSet::new());
        return Ok(StepResult::Advance);
    }
    // Pairs straddling the cut are unsatisfiable.
    let mut inside_pairs = Vec::new();
    for p in &node.pairs {
        let ins = interior.contains(&p.s);
        let int = interior.contains(&p.t);
        if ins != int {
            return Ok(StepResult::Dead);
        }
        if ins && int {
            inside_pairs.push((p.index, p.s, p.t));
        }
    }
    let sub_g = node.strips[si].j.induced(interior);
    let raw: Vec<(VertexId, VertexId)> = inside_pairs.iter().map(|&(_, s, t)| (s, t)).collect();
    let Some(paths) = solve_strip_subproblem(&sub_g, &raw, node.strips[si].arcs.as_ref(), limits)?
    else {
        return Ok(StepResult::Dead);
    };
    let solved: BTreeSet<usize> = inside_pairs.iter().map(|&(i, _, _)| i).collect();
    for ((idx, _, _), path) in inside_pairs.iter().zip(paths) {
        node.splice.push(SpliceStep::Insert { pair: *idx, path });
    }
    if !node.delete_vertices(interior, &solved) {
        return Ok(StepResult::Dead);
    }
    Ok(StepResult::Advance)
}

/// Orients a sub-solution path so it starts at `from`.
fn oriented(path: &[VertexId], from: VertexId) -> Vec<VertexId> {
    if path.first() == Some(&from) {
        path.to_vec()
    } else {
        debug_assert_eq!(path.last(), Some(&from));
        let mut p = path.to_vec();
        p.reverse();
        p
    }
}

/// Path from `from`, with the trailing boundary vertex removed.
fn trim_z(path: &[VertexId], from: VertexId) -> Vec<VertexId> {
    let mut p = oriented(path, from);
    p.pop();
    p
}

/// Sets the strip's J to a residual graph describing what replaced it.
fn set_residual(node: &mut Node, si: usize, j: Graph, keep_r: &BTreeSet<RId>) {
    node.strips[si].j = j;
    node.strips[si].r.retain(|(r, _)| keep_r.contains(r));
    node.strips[si].arcs = None;
}

/// Case of a single live boundary z with inside attachment X and outside Y.
#[allow(clippy::too_many_arguments)]
fn case_one(
    node: &mut Node,
    si: usize,
    z: VertexId,
    x: &BTreeSet<VertexId>,
    y: &BTreeSet<VertexId>,
    interior: &BTreeSet<VertexId>,
    h_terminals: &BTreeSet<VertexId>,
    limits: &Limits,
) -> Result<StepResult, StripError> {
    if h_terminals.is_empty() {
        // No path can enter and leave through the single boundary clique.
        if !node.delete_vertices(interior, &BTreeSet::new()) {
            return Ok(StepResult::Dead);
        }
        set_residual(node, si, Graph::new(), &BTreeSet::new());
        return Ok(StepResult::Advance);
    }
    let tset = node.terminal_vertices();
    let u = x.iter().copied().find(|v| tset.contains(v));
    let r_here: BTreeSet<RId> = node.strips[si].r.iter().map(|&(r, _)| r).collect();
    let r_of_z: RId = node.strips[si].r.iter().find(|&&(_, zz)| zz == z).map(|&(r, _)| r).unwrap();
    let _ = r_here;
    match u {
        Some(u) => {
            // X carries the unique terminal vertex u.
            // A pair buried in H with its partner outside can never cross X.
            for p in &node.pairs {
                let deep_in = |v: VertexId| interior.contains(&v) && !x.contains(&v);
                let out_f = |v: VertexId| !interior.contains(&v);
                if (deep_in(p.s) && out_f(p.t)) || (deep_in(p.t) && out_f(p.s)) {
                    return Ok(StepResult::Dead);
                }
            }
            let u_pairs: Vec<TerminalPair> =
                node.pairs.iter().copied().filter(|p| p.s == u || p.t == u).collect();
            let partner_in_h = |p: &TerminalPair| {
                let other = if p.s == u { p.t } else { p.s };
                interior.contains(&other)
            };
            let all_h = u_pairs.iter().all(partner_in_h);
            let all_f = u_pairs.iter().all(|p| !partner_in_h(p));
            if all_h {
                // Everything from u stays inside; outside paths cannot use Y.
                let sub_g = node.strips[si].j.induced(interior);
                let sub_pairs = inherited_pairs(&node.pairs, interior);
                let raw: Vec<(VertexId, VertexId)> = sub_pairs.iter().map(|p| (p.s, p.t)).collect();
                let Some(paths) =
                    solve_strip_subproblem(&sub_g, &raw, node.strips[si].arcs.as_ref(), limits)?
                else {
                    return Ok(StepResult::Dead);
                };
                let solved: BTreeSet<usize> = sub_pairs.iter().map(|p| p.index).collect();
                for (p, path) in sub_pairs.iter().zip(paths) {
                    node.splice.push(SpliceStep::Insert { pair: p.index, path });
                }
                if !node.delete_vertices(interior, &solved) {
                    return Ok(StepResult::Dead);
                }
                if !node.delete_vertices(y, &BTreeSet::new()) {
                    return Ok(StepResult::Dead);
                }
                set_residual(node, si, Graph::new(), &BTreeSet::new());
                Ok(StepResult::Advance)
            } else if all_f {
                if u_pairs.len() >= 2 {
                    // Two paths from u would both need the clique Y.
                    return Ok(StepResult::Dead);
                }
                // Nothing near u inside is usable; solve the far interior.
                let mut keep: BTreeSet<VertexId> = interior.clone();
                for w in node.strips[si].j.neighbors(u) {
                    keep.remove(&w);
                }
                keep.remove(&u);
                let sub_g = node.strips[si].j.induced(&keep);
                let sub_pairs = inherited_pairs(&node.pairs, &keep);
                let raw: Vec<(VertexId, VertexId)> = sub_pairs.iter().map(|p| (p.s, p.t)).collect();
                let Some(paths) =
                    solve_strip_subproblem(&sub_g, &raw, node.strips[si].arcs.as_ref(), limits)?
                else {
                    return Ok(StepResult::Dead);
                };
                let solved: BTreeSet<usize> = sub_pairs.iter().map(|p| p.index).collect();
                for (p, path) in sub_pairs.iter().zip(paths) {
                    node.splice.push(SpliceStep::Insert { pair: p.index, path });
                }
                let doomed: BTreeSet<VertexId> =
                    interior.iter().copied().filter(|&v| v != u).collect();
                if !node.delete_vertices(&doomed, &solved) {
                    return Ok(StepResult::Dead);
                }
                let mut j = Graph::new();
                j.add_edge(z, u);
                set_residual(node, si, j, &BTreeSet::from([r_of_z]));
                Ok(StepResult::Advance)
            } else {
                // u has one partner inside and one outside: the outside path
                // occupies Y, so the rest of X is unusable by anyone.
                let mut keep: BTreeSet<VertexId> = interior.clone();
                for &w in x {
                    if w != u {
                        keep.remove(&w);
                    }
                }
                let sub_g = node.strips[si].j.induced(&keep);
                let sub_pairs = inherited_pairs(&node.pairs, &keep);
                let raw: Vec<(VertexId, VertexId)> = sub_pairs.iter().map(|p| (p.s, p.t)).collect();
                let Some(paths) =
                    solve_strip_subproblem(&sub_g, &raw, node.strips[si].arcs.as_ref(), limits)?
                else {
                    return Ok(StepResult::Dead);
                };
                let solved: BTreeSet<usize> = sub_pairs.iter().map(|p| p.index).collect();
                for (p, path) in sub_pairs.iter().zip(paths) {
                    node.splice.push(SpliceStep::Insert { pair: p.index, path });
                }
                let doomed: BTreeSet<VertexId> =
                    interior.iter().copied().filter(|&v| v != u).collect();
                if !node.delete_vertices(&doomed, &solved) {
                    return Ok(StepResult::Dead);
                }
                let mut j = Graph::new();
                j.add_edge(z, u);
                set_residual(node, si, j, &BTreeSet::from([r_of_z]));
                Ok(StepResult::Advance)
            }
        }
        None => {
            // X terminal-free. Mixed pairs have one end deep inside and one
            // outside; two or more cannot all cross the boundary clique.
            let mixed: Vec<TerminalPair> = node
                .pairs
                .iter()
                .copied()
                .filter(|p| interior.contains(&p.s) != interior.contains(&p.t))
                .collect();
            match mixed.len() {
                0 => {
                    let inner_pairs = inherited_pairs(&node.pairs, interior);
                    let raw: Vec<(VertexId, VertexId)> =
                        inner_pairs.iter().map(|p| (p.s, p.t)).collect();
                    // Prefer a solution avoiding X: then Y stays usable.
                    let avoid_x: BTreeSet<VertexId> =
                        interior.iter().copied().filter(|v| !x.contains(v)).collect();
                    let sub_g = node.strips[si].j.induced(&avoid_x);
                    let arcs = node.strips[si].arcs.clone();
                    let solved_avoiding =
                        solve_strip_subproblem(&sub_g, &raw, arcs.as_ref(), limits)?;
                    let (paths, delete_y) = match solved_avoiding {
                        Some(paths) => (paths, false),
                        None => {
                            let sub_g = node.strips[si].j.induced(interior);
                            match solve_strip_subproblem(&sub_g, &raw, arcs.as_ref(), limits)? {
                                Some(paths) => (paths, true),
                                None => return Ok(StepResult::Dead),
                            }
                        }
                    };
                    let solved: BTreeSet<usize> = inner_pairs.iter().map(|p| p.index).collect();
                    for (p, path) in inner_pairs.iter().zip(paths) {
                        node.splice.push(SpliceStep::Insert { pair: p.index, path });
                    }
                    if !node.delete_vertices(interior, &solved) {
                        return Ok(StepResult::Dead);
                    }
                    if delete_y && !node.delete_vertices(y, &BTreeSet::new()) {
                        return Ok(StepResult::Dead);
                    }
                    set_residual(node, si, Graph::new(), &BTreeSet::new());
                    Ok(StepResult::Advance)
                }
                1 => {
                    let mp = mixed[0];
                    let (sv, _tv) = if interior.contains(&mp.s) { (mp.s, mp.t) } else { (mp.t, mp.s) };
                    // Solve on J itself: the boundary vertex stands in for
                    // everything beyond the clique.
                    let mut verts = interior.clone();
                    verts.insert(z);
                    let sub_g = node.strips[si].j.induced(&verts);
                    let mut sub_pairs = inherited_pairs(&node.pairs, interior);
                    sub_pairs.retain(|p| p.index != mp.index);
                    let mut raw: Vec<(VertexId, VertexId)> =
                        sub_pairs.iter().map(|p| (p.s, p.t)).collect();
                    raw.push((sv, z));
                    let Some(mut paths) =
                        solve_strip_subproblem(&sub_g, &raw, node.strips[si].arcs.as_ref(), limits)?
                    else {
                        return Ok(StepResult::Dead);
                    };
                    let crossing = paths.pop().expect("one path per pair");
                    let front = trim_z(&crossing, sv);
                    let mut solved: BTreeSet<usize> = sub_pairs.iter().map(|p| p.index).collect();
                    for (p, path) in sub_pairs.iter().zip(paths) {
                        node.splice.push(SpliceStep::Insert { pair: p.index, path });
                    }
                    solved.insert(mp.index); // its interior terminal may be deleted
                    if !node.delete_vertices(interior, &solved) {
                        return Ok(StepResult::Dead);
                    }
                    // Rebuild the pair on a pendant gadget behind Y.
                    let w_gadget = node.fresh_vertex();
                    let u_gadget = node.fresh_vertex();
                    for &yv in y {
                        node.graph.add_edge(w_gadget, yv);
                    }
                    node.graph.add_edge(w_gadget, u_gadget);
                    let (new_s, new_t) =
                        if mp.s == sv { (u_gadget, mp.t) } else { (mp.s, u_gadget) };
                    node.pairs.push(TerminalPair { index: mp.index, s: new_s, t: new_t });
                    node.pairs.sort_by_key(|p| p.index);
                    node.splice.push(SpliceStep::Graft {
                        pair: mp.index,
                        front,
                        front_gadgets: vec![u_gadget, w_gadget],
                        back: Vec::new(),
                        back_gadgets: Vec::new(),
                    });
                    let mut j = Graph::new();
                    j.add_edge(z, w_gadget);
                    j.add_edge(w_gadget, u_gadget);
                    set_residual(node, si, j, &BTreeSet::from([r_of_z]));
                    Ok(StepResult::Advance)
                }
                _ => Ok(StepResult::Dead),
            }
        }
    }
}

/// Pairs with both terminals inside `verts`, sorted by index.
fn inherited_pairs(pairs: &[TerminalPair], verts: &BTreeSet<VertexId>) -> Vec<TerminalPair> {
    pairs.iter().copied().filter(|p| verts.contains(&p.s) && verts.contains(&p.t)).collect()
}

type Boundary = (RId, VertexId, BTreeSet<VertexId>, BTreeSet<VertexId>);

/// Case of two live boundaries.
fn case_two(
    node: &mut Node,
    si: usize,
    first: Boundary,
    second: Boundary,
    interior: &BTreeSet<VertexId>,
    h_terminals: &BTreeSet<VertexId>,
    limits: &Limits,
) -> Result<StepResult, StripError> {
    let shared: usize = first.3.intersection(&second.3).count();
    if shared > 1 {
        return Err(StripError::SharedBoundary { count: shared });
    }
    let tset = node.terminal_vertices();
    if h_terminals.is_empty() {
        // Keep only a shortest crossing corridor, if any.
        let within: BTreeSet<VertexId> = interior.clone();
        match node.graph.shortest_path_between_sets(&first.2, &second.2, &within) {
            Some(pi) => {
                let keep: BTreeSet<VertexId> = pi.iter().copied().collect();
                let doomed: BTreeSet<VertexId> =
                    interior.iter().copied().filter(|v| !keep.contains(v)).collect();
                if !node.delete_vertices(&doomed, &BTreeSet::new()) {
                    return Ok(StepResult::Dead);
                }
                let mut verts = keep.clone();
                verts.insert(first.1);
                verts.insert(second.1);
                let j = node.strips[si].j.induced(&verts);
                set_residual(node, si, j, &BTreeSet::from([first.0, second.0]));
            }
            None => {
                if !node.delete_vertices(interior, &BTreeSet::new()) {
                    return Ok(StepResult::Dead);
                }
                set_residual(node, si, Graph::new(), &BTreeSet::new());
            }
        }
        return Ok(StepResult::Advance);
    }
    let u1 = first.2.iter().copied().find(|v| tset.contains(v));
    let u2 = second.2.iter().copied().find(|v| tset.contains(v));
    match (u1, u2) {
        (Some(a), Some(b)) => case_two_a(node, si, first, second, a, b, interior, limits),
        (Some(_), None) => case_two_b(node, si, first, second, interior, limits, out_of(node, interior)),
        (None, Some(_)) => case_two_b(node, si, second, first, interior, limits, out_of(node, interior)),
        (None, None) => case_two_c(node, si, first, second, interior, limits),
    }
}

/// Terminals represented inside `interior` whose partner lies outside, as
/// (pair, inside vertex, outside vertex).
fn out_of(node: &Node, interior: &BTreeSet<VertexId>) -> Vec<(usize, VertexId, VertexId)> {
    let mut out = Vec::new();
    for p in &node.pairs {
        let sin = interior.contains(&p.s);
        let tin = interior.contains(&p.t);
        if sin && !tin {
            out.push((p.index, p.s, p.t));
        } else if tin && !sin {
            out.push((p.index, p.t, p.s));
        }
    }
    out
}

/// Both boundary cliques hold a terminal vertex: no branching, one child.
#[allow(clippy::too_many_arguments)]
fn case_two_a(
    node: &mut Node,
    si: usize,
    first: Boundary,
    second: Boundary,
    u1: VertexId,
    u2: VertexId,
    interior: &BTreeSet<VertexId>,
    limits: &Limits,
) -> Result<StepResult, StripError> {
    let (_, _, x1, y1) = &first;
    let (_, _, x2, y2) = &second;
    // A pair buried deep inside with its partner outside cannot cross either
    // terminal-bearing boundary clique.
    for p in &node.pairs {
        let deep = |v: VertexId| interior.contains(&v) && !x1.contains(&v) && !x2.contains(&v);
        let outside = |v: VertexId| !interior.contains(&v);
        if (deep(p.s) && outside(p.t)) || (deep(p.t) && outside(p.s)) {
            return Ok(StepResult::Dead);
        }
    }
    let partner_info = |u: VertexId| -> Vec<(usize, VertexId, bool)> {
        node.pairs
            .iter()
            .filter(|p| p.s == u || p.t == u)
            .map(|p| {
                let other = if p.s == u { p.t } else { p.s };
                (p.index, other, interior.contains(&other))
            })
            .collect()
    };
    let p1 = partner_info(u1);
    let p2 = partner_info(u2);
    let same_pair = node
        .pairs
        .iter()
        .find(|p| p.vertex_set() == BTreeSet::from([u1, u2]))
        .map(|p| p.index);

    // Helper executing the uniform reduction shape: solve the interior minus
    // a deletion set, insert the certified paths, then keep `keep` vertices
    // of the interior and optionally delete boundary Y-sets.
    let mut run = |node: &mut Node,
                   d: BTreeSet<VertexId>,
                   keep: BTreeSet<VertexId>,
                   del_y1: bool,
                   del_y2: bool|
     -> Result<StepResult, StripError> {
        let verts: BTreeSet<VertexId> = interior.difference(&d).copied().collect();
        let sub_g = node.strips[si].j.induced(&verts);
        let sub_pairs = inherited_pairs(&node.pairs, &verts);
        let raw: Vec<(VertexId, VertexId)> = sub_pairs.iter().map(|p| (p.s, p.t)).collect();
        let Some(paths) = solve_strip_subproblem(&sub_g, &raw, node.strips[si].arcs.as_ref(), limits)?
        else {
            return Ok(StepResult::Dead);
        };
        let solved: BTreeSet<usize> = sub_pairs.iter().map(|p| p.index).collect();
        for (p, path) in sub_pairs.iter().zip(paths) {
            node.splice.push(SpliceStep::Insert { pair: p.index, path });
        }
        let doomed: BTreeSet<VertexId> =
            interior.iter().copied().filter(|v| !keep.contains(v)).collect();
        if !node.delete_vertices(&doomed, &solved) {
            return Ok(StepResult::Dead);
        }
        if del_y1 && !node.delete_vertices(y1, &BTreeSet::new()) {
            return Ok(StepResult::Dead);
        }
        if del_y2 && !node.delete_vertices(y2, &BTreeSet::new()) {
            return Ok(StepResult::Dead);
        }
        // Residual strip: kept boundary terminals hang off their z vertices.
        let mut j = Graph::new();
        let mut keep_r = BTreeSet::new();
        if keep.contains(&u1) {
            j.add_edge(first.1, u1);
            keep_r.insert(first.0);
        }
        if keep.contains(&u2) {
            j.add_edge(second.1, u2);
            keep_r.insert(second.0);
        }
        set_residual(node, si, j, &keep_r);
        Ok(StepResult::Advance)
    };

    if let Some(pair_i) = same_pair {
        // The two boundary terminals are partners.
        let sub_g = node.strips[si].j.induced(interior);
        let all_pairs = inherited_pairs(&node.pairs, interior);
        let raw: Vec<(VertexId, VertexId)> = all_pairs.iter().map(|p| (p.s, p.t)).collect();
        if let Some(paths) =
            solve_strip_subproblem(&sub_g, &raw, node.strips[si].arcs.as_ref(), limits)?
        {
            let solved: BTreeSet<usize> = all_pairs.iter().map(|p| p.index).collect();
            for (p, path) in all_pairs.iter().zip(paths) {
                node.splice.push(SpliceStep::Insert { pair: p.index, path });
            }
            if !node.delete_vertices(interior, &solved) {
                return Ok(StepResult::Dead);
            }
            if !node.delete_vertices(y1, &BTreeSet::new())
                || !node.delete_vertices(y2, &BTreeSet::new())
            {
                return Ok(StepResult::Dead);
            }
            set_residual(node, si, Graph::new(), &BTreeSet::new());
            return Ok(StepResult::Advance);
        }
        // The partner path must route outside; what is banned near each
        // boundary depends on how many terminals its vertex represents.
        let mut d = BTreeSet::new();
        for (u, x, pinfo) in [(u1, x1, &p1), (u2, x2, &p2)] {
            if pinfo.len() == 1 {
                d.insert(u);
                d.extend(node.strips[si].j.neighbors(u).filter(|v| interior.contains(v)));
            } else {
                d.extend(x.iter().copied().filter(|&v| v != u));
            }
        }
        // Other partners of the boundary terminals must still be inside.
        for (idx, other, in_h) in p1.iter().chain(p2.iter()) {
            if *idx != pair_i && !in_h {
                // A second crossing through the same boundary clique is
                // impossible alongside the partner path.
                return run(node, d, BTreeSet::from([u1, u2]), false, false).and_then(|r| {
                    let _ = (idx, other);
                    Ok(r)
                });
            }
        }
        return run(node, d, BTreeSet::from([u1, u2]), false, false);
    }

    // Different pairs: classify each boundary terminal.
    #[derive(PartialEq, Clone, Copy)]
    enum Homog {
        H,
        F,
        Mixed,
    }
    let classify = |pinfo: &[(usize, VertexId, bool)]| -> Homog {
        let any_h = pinfo.iter().any(|&(_, _, h)| h);
        let any_f = pinfo.iter().any(|&(_, _, h)| !h);
        match (any_h, any_f) {
            (true, false) => Homog::H,
            (false, true) => Homog::F,
            _ => Homog::Mixed,
        }
    };
    let c1 = classify(&p1);
    let c2 = classify(&p2);
    let mut d: BTreeSet<VertexId> = BTreeSet::new();
    let mut keep: BTreeSet<VertexId> = BTreeSet::new();
    let mut del_y1 = false;
    let mut del_y2 = false;
    for (u, x, c, del_y) in [(u1, x1, c1, &mut del_y1), (u2, x2, c2, &mut del_y2)] {
        match c {
            Homog::H => {
                // All of u's paths stay inside; its boundary is then sealed.
                *del_y = true;
            }
            Homog::F => {
                d.insert(u);
                d.extend(node.strips[si].j.neighbors(u).filter(|v| interior.contains(v)));
                keep.insert(u);
            }
            Homog::Mixed => {
                d.extend(x.iter().copied().filter(|&v| v != u));
                keep.insert(u);
            }
        }
    }
    run(node, d, keep, del_y1, del_y2)
}

/// Exactly the first boundary clique holds a terminal vertex u: up to five
/// directions (drop X2 / Y1 / Y2, or route through all of them, which may
/// itself split in two).
#[allow(clippy::too_many_arguments)]
fn case_two_b(
    node: &mut Node,
    si: usize,
    first: Boundary,
    second: Boundary,
    interior: &BTreeSet<VertexId>,
    limits: &Limits,
    unpaired: Vec<(usize, VertexId, VertexId)>,
) -> Result<StepResult, StripError> {
    let tset = node.terminal_vertices();
    let u = first.2.iter().copied().find(|v| tset.contains(v)).expect("caller checked");
    let crossers: Vec<&(usize, VertexId, VertexId)> =
        unpaired.iter().filter(|&&(_, sv, _)| sv != u).collect();
    if crossers.len() >= 2 {
        return Ok(StepResult::Dead);
    }
    let mut children: Vec<Node> = Vec::new();
    // Removal directions: no solution vertex in X2 / Y1 / Y2.
    for target in [&second.2, &first.3, &second.3] {
        let mut child = node.clone();
        if child.delete_vertices(target, &BTreeSet::new()) {
            children.push(child); // re-processes the same strip
        }
    }
    // Through-branch: X2, Y1 and Y2 all carry solution vertices.
    let u_partners: Vec<(usize, VertexId, bool)> = node
        .pairs
        .iter()
        .filter(|p| p.s == u || p.t == u)
        .map(|p| {
            let other = if p.s == u { p.t } else { p.s };
            (p.index, other, interior.contains(&other))
        })
        .collect();
    let all_f = u_partners.iter().all(|&(_, _, h)| !h);
    let all_h = u_partners.iter().all(|&(_, _, h)| h);
    let through_children = if all_f {
        case_two_b_through_f(node, si, &first, &second, u, &u_partners, &crossers, interior, limits)?
    } else if all_h {
        case_two_b_through_h(node, si, &first, &second, u, &u_partners, &crossers, interior, limits)?
    } else {
        case_two_b_through_mixed(node, si, &first, &second, u, &u_partners, &crossers, interior, limits)?
    };
    children.extend(through_children);
    if children.is_empty() {
        return Ok(StepResult::Dead);
    }
    Ok(StepResult::Children(children))
}

/// Shared tail of every through-branch in the one-sided case: delete the
/// whole interior, add the gadgets (u1' attached to Y1 directly, u2' behind a
/// pendant on Y2), rewrite the listed pairs, record grafts, advance.
#[allow(clippy::too_many_arguments)]
fn finish_two_b_child(
    mut child: Node,
    si: usize,
    first: &Boundary,
    second: &Boundary,
    interior: &BTreeSet<VertexId>,
    solved: BTreeSet<usize>,
    inserts: Vec<(usize, Vec<VertexId>)>,
    grafts: Vec<SpliceStep>,
    rewrites: BTreeMap<usize, RewriteEnd>,
) -> Option<Node> {
    for (pair, path) in inserts {
        child.splice.push(SpliceStep::Insert { pair, path });
    }
    let mut covered = solved;
    covered.extend(rewrites.keys());
    // Rewritten pairs survive; take them out before the deletion check and
    // re-add them rebuilt on the gadget vertices.
    let kept_rewrites: BTreeMap<usize, TerminalPair> = child
        .pairs
        .iter()
        .filter(|p| rewrites.contains_key(&p.index))
        .map(|p| (p.index, *p))
        .collect();
    if !child.delete_vertices(interior, &covered) {
        return None;
    }
    let u1g = child.fresh_vertex();
    let w2g = child.fresh_vertex();
    let u2g = child.fresh_vertex();
    for &yv in &first.3 {
        child.graph.add_edge(u1g, yv);
    }
    for &yv in &second.3 {
        child.graph.add_edge(w2g, yv);
    }
    child.graph.add_edge(w2g, u2g);
    for (idx, rewrite) in &rewrites {
        let old = kept_rewrites[idx];
        let gadget = match rewrite.side {
            GadgetSide::One => u1g,
            GadgetSide::Two => u2g,
        };
        let (s, t) = match rewrite.keep_outside {
            Some(outside) => (gadget, outside),
            None => (u1g, u2g),
        };
        let _ = old;
        child.pairs.push(TerminalPair { index: *idx, s, t });
    }
    child.pairs.sort_by_key(|p| p.index);
    for g in grafts {
        // Patch gadget ids into the recorded grafts.
        let patched = match g {
            SpliceStep::Graft { pair, front, front_gadgets, back, back_gadgets } => {
                let sub = |v: VertexId| match v.0 {
                    GADGET_U1 => u1g,
                    GADGET_W2 => w2g,
                    GADGET_U2 => u2g,
                    _ => v,
                };
                SpliceStep::Graft {
                    pair,
                    front,
                    front_gadgets: front_gadgets.into_iter().map(sub).collect(),
                    back,
                    back_gadgets: back_gadgets.into_iter().map(sub).collect(),
                }
            }
            other => other,
        };
        child.splice.push(patched);
    }
    let mut j = Graph::new();
    j.add_edge(first.1, u1g);
    j.add_edge(second.1, w2g);
    j.add_edge(w2g, u2g);
    child.strips[si].j = j;
    child.strips[si].r = vec![(first.0, first.1), (second.0, second.1)];
    child.strips[si].arcs = None;
    child.next += 1;
    Some(child)
}

/// Placeholder ids used in grafts before the gadget vertices are allocated.
const GADGET_U1: u32 = u32::MAX - 2;
const GADGET_W2: u32 = u32::MAX - 1;
const GADGET_U2: u32 = u32::MAX;

enum GadgetSide {
    One,
    Two,
}

struct RewriteEnd {
    side: GadgetSide,
    /// The surviving outside terminal; None for a loop pair whose both new
    /// ends are gadgets.
    keep_outside: Option<VertexId>,
}

/// u is F-homogeneous: its own path leaves via Y1; the X2/Y2 crossing is some
/// other pair's, or u's second pair.
#[allow(clippy::too_many_arguments)]
fn case_two_b_through_f(
    node: &Node,
    si: usize,
    first: &Boundary,
    second: &Boundary,
    u: VertexId,
    u_partners: &[(usize, VertexId, bool)],
    crossers: &[&(usize, VertexId, VertexId)],
    interior: &BTreeSet<VertexId>,
    limits: &Limits,
) -> Result<Vec<Node>, StripError> {
    let z2 = second.1;
    let mut children = Vec::new();
    if u_partners.len() == 1 {
        let (pair_i, t_i, _) = u_partners[0];
        let Some(&&(pair_h, sh, th)) = crossers.first() else {
            return Ok(children); // nothing can use X2/Y2
        };
        let mut verts: BTreeSet<VertexId> = interior.clone();
        verts.remove(&u);
        for w in node.strips[si].j.neighbors(u) {
            verts.remove(&w);
        }
        verts.insert(z2);
        let sub_g = node.strips[si].j.induced(&verts);
        let mut sub_pairs = inherited_pairs(&node.pairs, &verts);
        sub_pairs.retain(|p| p.index != pair_h);
        let mut raw: Vec<(VertexId, VertexId)> = sub_pairs.iter().map(|p| (p.s, p.t)).collect();
        raw.push((sh, z2));
        if let Some(mut paths) =
            solve_strip_subproblem(&sub_g, &raw, node.strips[si].arcs.as_ref(), limits)?
        {
            let crossing = paths.pop().unwrap();
            let inserts: Vec<(usize, Vec<VertexId>)> =
                sub_pairs.iter().map(|p| p.index).zip(paths).collect();
            let solved: BTreeSet<usize> = sub_pairs.iter().map(|p| p.index).collect();
            let grafts = vec![
                SpliceStep::Graft {
                    pair: pair_i,
                    front: vec![u],
                    front_gadgets: vec![VertexId(GADGET_U1)],
                    back: Vec::new(),
                    back_gadgets: Vec::new(),
                },
                SpliceStep::Graft {
                    pair: pair_h,
                    front: trim_z(&crossing, sh),
                    front_gadgets: vec![VertexId(GADGET_U2), VertexId(GADGET_W2)],
                    back: Vec::new(),
                    back_gadgets: Vec::new(),
                },
            ];
            let rewrites = BTreeMap::from([
                (pair_i, RewriteEnd { side: GadgetSide::One, keep_outside: Some(t_i) }),
                (pair_h, RewriteEnd { side: GadgetSide::Two, keep_outside: Some(th) }),
            ]);
            if let Some(child) = finish_two_b_child(
                node.clone(),
                si,
                first,
                second,
                interior,
                solved,
                inserts,
                grafts,
                rewrites,
            ) {
                children.push(child);
            }
        }
    } else {
        // Two terminals on u, both with outside partners: one leaves via Y1,
        // the other crosses the strip to X2/Y2. Any further crosser is stuck.
        if !crossers.is_empty() {
            return Ok(children);
        }
        for loop_at in 0..2 {
            let (pair_i, t_i, _) = u_partners[loop_at];
            let (pair_j, t_j, _) = u_partners[1 - loop_at];
            let mut verts: BTreeSet<VertexId> = interior.clone();
            for &w in &first.2 {
                if w != u {
                    verts.remove(&w);
                }
            }
            verts.insert(z2);
            let sub_g = node.strips[si].j.induced(&verts);
            let mut sub_pairs = inherited_pairs(&node.pairs, &verts);
            sub_pairs.retain(|p| p.index != pair_i && p.index != pair_j);
            let mut raw: Vec<(VertexId, VertexId)> = sub_pairs.iter().map(|p| (p.s, p.t)).collect();
            raw.push((u, z2));
            let Some(mut paths) =
                solve_strip_subproblem(&sub_g, &raw, node.strips[si].arcs.as_ref(), limits)?
            else {
                continue;
            };
            let crossing = paths.pop().unwrap();
            let inserts: Vec<(usize, Vec<VertexId>)> =
                sub_pairs.iter().map(|p| p.index).zip(paths).collect();
            let solved: BTreeSet<usize> = sub_pairs.iter().map(|p| p.index).collect();
            let grafts = vec![
                SpliceStep::Graft {
                    pair: pair_i,
                    front: vec![u],
                    front_gadgets: vec![VertexId(GADGET_U1)],
                    back: Vec::new(),
                    back_gadgets: Vec::new(),
                },
                SpliceStep::Graft {
                    pair: pair_j,
                    front: trim_z(&crossing, u),
                    front_gadgets: vec![VertexId(GADGET_U2), VertexId(GADGET_W2)],
                    back: Vec::new(),
                    back_gadgets: Vec::new(),
                },
            ];
            let rewrites = BTreeMap::from([
                (pair_i, RewriteEnd { side: GadgetSide::One, keep_outside: Some(t_i) }),
                (pair_j, RewriteEnd { side: GadgetSide::Two, keep_outside: Some(t_j) }),
            ]);
            if let Some(child) = finish_two_b_child(
                node.clone(),
                si,
                first,
                second,
                interior,
                solved,
                inserts,
                grafts,
                rewrites,
            ) {
                children.push(child);
            }
        }
    }
    Ok(children)
}

/// u is H-homogeneous: one of its paths loops out through Y1 and back in
/// through Y2/X2.
#[allow(clippy::too_many_arguments)]
fn case_two_b_through_h(
    node: &Node,
    si: usize,
    first: &Boundary,
    second: &Boundary,
    u: VertexId,
    u_partners: &[(usize, VertexId, bool)],
    crossers: &[&(usize, VertexId, VertexId)],
    interior: &BTreeSet<VertexId>,
    limits: &Limits,
) -> Result<Vec<Node>, StripError> {
    if !crossers.is_empty() {
        return Ok(Vec::new()); // the loop path occupies both crossings
    }
    let z2 = second.1;
    let mut children = Vec::new();
    let loops: Vec<(usize, VertexId)> = u_partners.iter().map(|&(i, t, _)| (i, t)).collect();
    for (li, &(pair_loop, t_loop)) in loops.iter().enumerate() {
        let mut verts: BTreeSet<VertexId> = interior.clone();
        if loops.len() == 1 {
            verts.remove(&u);
            for w in node.strips[si].j.neighbors(u) {
                verts.remove(&w);
            }
        } else {
            for &w in &first.2 {
                if w != u {
                    verts.remove(&w);
                }
            }
        }
        verts.insert(z2);
        let sub_g = node.strips[si].j.induced(&verts);
        let mut sub_pairs = inherited_pairs(&node.pairs, &verts);
        sub_pairs.retain(|p| !loops.iter().any(|&(i, _)| i == p.index));
        let mut raw: Vec<(VertexId, VertexId)> = sub_pairs.iter().map(|p| (p.s, p.t)).collect();
        // The loop pair re-enters through z2 and ends at its inside partner.
        raw.push((z2, t_loop));
        // The other pair of u (if any) stays entirely inside.
        let other: Option<(usize, VertexId)> =
            (loops.len() == 2).then(|| loops[1 - li]).filter(|_| true);
        if let Some((_, t_other)) = other {
            raw.push((u, t_other));
        }
        let Some(mut paths) =
            solve_strip_subproblem(&sub_g, &raw, node.strips[si].arcs.as_ref(), limits)?
        else {
            continue;
        };
        let other_path = other.map(|_| paths.pop().unwrap());
        let crossing = paths.pop().unwrap();
        let mut inserts: Vec<(usize, Vec<VertexId>)> =
            sub_pairs.iter().map(|p| p.index).zip(paths).collect();
        let mut solved: BTreeSet<usize> = sub_pairs.iter().map(|p| p.index).collect();
        if let (Some((pair_other, _)), Some(path)) = (other, other_path) {
            inserts.push((pair_other, path));
            solved.insert(pair_other);
        }
        let back = trim_z(&crossing, t_loop); // t_loop .. x2, reversed below
        let back: Vec<VertexId> = back.into_iter().rev().collect(); // x2 .. t_loop
        let grafts = vec![SpliceStep::Graft {
            pair: pair_loop,
            front: vec![u],
            front_gadgets: vec![VertexId(GADGET_U1)],
            back,
            back_gadgets: vec![VertexId(GADGET_W2), VertexId(GADGET_U2)],
        }];
        let rewrites =
            BTreeMap::from([(pair_loop, RewriteEnd { side: GadgetSide::One, keep_outside: None })]);
        if let Some(child) = finish_two_b_child(
            node.clone(),
            si,
            first,
            second,
            interior,
            solved,
            inserts,
            grafts,
            rewrites,
        ) {
            children.push(child);
        }
    }
    Ok(children)
}

/// u is mixed: its outside pair leaves via Y1; some other pair crosses X2/Y2.
#[allow(clippy::too_many_arguments)]
fn case_two_b_through_mixed(
    node: &Node,
    si: usize,
    first: &Boundary,
    second: &Boundary,
    u: VertexId,
    u_partners: &[(usize, VertexId, bool)],
    crossers: &[&(usize, VertexId, VertexId)],
    interior: &BTreeSet<VertexId>,
    limits: &Limits,
) -> Result<Vec<Node>, StripError> {
    let Some(&&(pair_h, sh, th)) = crossers.first() else {
        return Ok(Vec::new());
    };
    let (pair_i, t_i, _) = *u_partners.iter().find(|&&(_, _, h)| h).unwrap();
    let (pair_j, t_j, _) = *u_partners.iter().find(|&&(_, _, h)| !h).unwrap();
    let z2 = second.1;
    let mut verts: BTreeSet<VertexId> = interior.clone();
    for &w in &first.2 {
        if w != u {
            verts.remove(&w);
        }
    }
    verts.insert(z2);
    let sub_g = node.strips[si].j.induced(&verts);
    let mut sub_pairs = inherited_pairs(&node.pairs, &verts);
    sub_pairs.retain(|p| p.index != pair_i && p.index != pair_h && p.index != pair_j);
    let mut raw: Vec<(VertexId, VertexId)> = sub_pairs.iter().map(|p| (p.s, p.t)).collect();
    raw.push((u, t_i));
    raw.push((sh, z2));
    let Some(mut paths) =
        solve_strip_subproblem(&sub_g, &raw, node.strips[si].arcs.as_ref(), limits)?
    else {
        return Ok(Vec::new());
    };
    let crossing = paths.pop().unwrap();
    let inside_path = paths.pop().unwrap();
    let mut inserts: Vec<(usize, Vec<VertexId>)> =
        sub_pairs.iter().map(|p| p.index).zip(paths).collect();
    inserts.push((pair_i, inside_path));
    let mut solved: BTreeSet<usize> = sub_pairs.iter().map(|p| p.index).collect();
    solved.insert(pair_i);
    let grafts = vec![
        SpliceStep::Graft {
            pair: pair_j,
            front: vec![u],
            front_gadgets: vec![VertexId(GADGET_U1)],
            back: Vec::new(),
            back_gadgets: Vec::new(),
        },
        SpliceStep::Graft {
            pair: pair_h,
            front: trim_z(&crossing, sh),
            front_gadgets: vec![VertexId(GADGET_U2), VertexId(GADGET_W2)],
            back: Vec::new(),
            back_gadgets: Vec::new(),
        },
    ];
    let rewrites = BTreeMap::from([
        (pair_j, RewriteEnd { side: GadgetSide::One, keep_outside: Some(t_j) }),
        (pair_h, RewriteEnd { side: GadgetSide::Two, keep_outside: Some(th) }),
    ]);
    Ok(finish_two_b_child(node.clone(), si, first, second, interior, solved, inserts, grafts, rewrites)
        .into_iter()
        .collect())
}

/// Neither boundary clique holds a terminal: up to six directions.
fn case_two_c(
    node: &mut Node,
    si: usize,
    first: Boundary,
    second: Boundary,
    interior: &BTreeSet<VertexId>,
    limits: &Limits,
) -> Result<StepResult, StripError> {
    let unpaired = out_of(node, interior);
    if unpaired.len() >= 3 {
        return Ok(StepResult::Dead);
    }
    let mut children: Vec<Node> = Vec::new();
    for target in [&first.2, &second.2, &first.3, &second.3] {
        let mut child = node.clone();
        if child.delete_vertices(target, &BTreeSet::new()) {
            children.push(child);
        }
    }
    match unpaired.len() {
        1 => {} // the lone crossing pair blocks the all-four-sets branch
        0 => children.extend(case_two_c_closed(node, si, &first, &second, interior, limits)?),
        2 => children.extend(case_two_c_two_open(
            node, si, &first, &second, interior, &unpaired, limits,
        )?),
        _ => unreachable!(),
    }
    if children.is_empty() {
        return Ok(StepResult::Dead);
    }
    Ok(StepResult::Children(children))
}

/// All interior pairs are internal. Either the interior tolerates a crossing
/// corridor next to its own solution, or some internal pair must itself loop
/// through the outside.
fn case_two_c_closed(
    node: &Node,
    si: usize,
    first: &Boundary,
    second: &Boundary,
    interior: &BTreeSet<VertexId>,
    limits: &Limits,
) -> Result<Vec<Node>, StripError> {
    let (z1, z2) = (first.1, second.1);
    let mut verts = interior.clone();
    verts.insert(z1);
    verts.insert(z2);
    let sub_g = node.strips[si].j.induced(&verts);
    let sub_pairs = inherited_pairs(&node.pairs, interior);
    let mut raw: Vec<(VertexId, VertexId)> = sub_pairs.iter().map(|p| (p.s, p.t)).collect();
    raw.push((z1, z2)); // corridor probe
    if let Some(mut paths) =
        solve_strip_subproblem(&sub_g, &raw, node.strips[si].arcs.as_ref(), limits)?
    {
        // Keep a shortest crossing corridor; certified paths splice back.
        let probe = paths.pop().unwrap();
        let replacement: Vec<VertexId> = probe[1..probe.len() - 1].to_vec();
        let mut child = node.clone();
        let solved: BTreeSet<usize> = sub_pairs.iter().map(|p| p.index).collect();
        for (p, path) in sub_pairs.iter().zip(paths) {
            child.splice.push(SpliceStep::Insert { pair: p.index, path });
        }
        let pi = child
            .graph
            .shortest_path_between_sets(&first.2, &second.2, interior)
            .expect("corridor probe succeeded");
        let keep: BTreeSet<VertexId> = pi.iter().copied().collect();
        let doomed: BTreeSet<VertexId> =
            interior.iter().copied().filter(|v| !keep.contains(v)).collect();
        if child.delete_vertices(&doomed, &solved) {
            child.splice.push(SpliceStep::CorridorSwap { corridor: pi, replacement });
            let mut jr = keep.clone();
            jr.insert(z1);
            jr.insert(z2);
            let j = child.strips[si].j.induced(&jr);
            child.strips[si].j = j;
            child.strips[si].arcs = None;
            child.next += 1;
            return Ok(vec![child]);
        }
        return Ok(Vec::new());
    }
    // No corridor fits: some internal pair must route its middle outside.
    for p in &sub_pairs {
        for (za, zb) in [(z1, z2), (z2, z1)] {
            let mut raw: Vec<(VertexId, VertexId)> = sub_pairs
                .iter()
                .filter(|q| q.index != p.index)
                .map(|q| (q.s, q.t))
                .collect();
            raw.push((p.s, za));
            raw.push((zb, p.t));
            let Some(mut paths) =
                solve_strip_subproblem(&sub_g, &raw, node.strips[si].arcs.as_ref(), limits)?
            else {
                continue;
            };
            let tail = paths.pop().unwrap();
            let head = paths.pop().unwrap();
            let others: Vec<(usize, Vec<VertexId>)> = sub_pairs
                .iter()
                .filter(|q| q.index != p.index)
                .map(|q| q.index)
                .zip(paths)
                .collect();
            let mut solved: BTreeSet<usize> = others.iter().map(|&(i, _)| i).collect();
            solved.insert(p.index);
            let (fg, bg) = if za == z1 {
                (
                    vec![VertexId(GADGET_U1), VertexId(GADGET_W1)],
                    vec![VertexId(GADGET_W2), VertexId(GADGET_U2)],
                )
            } else {
                (
                    vec![VertexId(GADGET_U2), VertexId(GADGET_W2)],
                    vec![VertexId(GADGET_W1), VertexId(GADGET_U1)],
                )
            };
            let back: Vec<VertexId> = trim_z(&tail, p.t).into_iter().rev().collect();
            let grafts = vec![SpliceStep::Graft {
                pair: p.index,
                front: trim_z(&head, p.s),
                front_gadgets: fg,
                back,
                back_gadgets: bg,
            }];
            let rewrites = BTreeMap::from([(
                p.index,
                RewriteEnd { side: GadgetSide::One, keep_outside: None },
            )]);
            if let Some(child) = finish_two_c_child(
                node.clone(),
                si,
                first,
                second,
                interior,
                solved,
                others,
                grafts,
                rewrites,
            ) {
                return Ok(vec![child]);
            }
        }
    }
    Ok(Vec::new())
}

const GADGET_W1: u32 = u32::MAX - 3;

/// Exactly two terminals inside have outside partners: assign them to the
/// two crossings, both ways.
#[allow(clippy::too_many_arguments)]
fn case_two_c_two_open(
    node: &Node,
    si: usize,
    first: &Boundary,
    second: &Boundary,
    interior: &BTreeSet<VertexId>,
    unpaired: &[(usize, VertexId, VertexId)],
    limits: &Limits,
) -> Result<Vec<Node>, StripError> {
    let (z1, z2) = (first.1, second.1);
    let (pi, svi, tvi) = unpaired[0];
    let (pj, svj, tvj) = unpaired[1];
    let mut verts = interior.clone();
    verts.insert(z1);
    verts.insert(z2);
    let sub_g = node.strips[si].j.induced(&verts);
    let internal = inherited_pairs(&node.pairs, interior);
    let mut children = Vec::new();
    for swap in [false, true] {
        let ((pa, sa, ta), (pb, sb, tb)) = if swap {
            ((pj, svj, tvj), (pi, svi, tvi))
        } else {
            ((pi, svi, tvi), (pj, svj, tvj))
        };
        let mut raw: Vec<(VertexId, VertexId)> = internal.iter().map(|q| (q.s, q.t)).collect();
        raw.push((sa, z1));
        raw.push((sb, z2));
        let Some(mut paths) =
            solve_strip_subproblem(&sub_g, &raw, node.strips[si].arcs.as_ref(), limits)?
        else {
            continue;
        };
        let path_b = paths.pop().unwrap();
        let path_a = paths.pop().unwrap();
        let inserts: Vec<(usize, Vec<VertexId>)> =
            internal.iter().map(|q| q.index).zip(paths).collect();
        let mut solved: BTreeSet<usize> = internal.iter().map(|q| q.index).collect();
        solved.insert(pa);
        solved.insert(pb);
        let grafts = vec![
            SpliceStep::Graft {
                pair: pa,
                front: trim_z(&path_a, sa),
                front_gadgets: vec![VertexId(GADGET_U1), VertexId(GADGET_W1)],
                back: Vec::new(),
                back_gadgets: Vec::new(),
            },
            SpliceStep::Graft {
                pair: pb,
                front: trim_z(&path_b, sb),
                front_gadgets: vec![VertexId(GADGET_U2), VertexId(GADGET_W2)],
                back: Vec::new(),
                back_gadgets: Vec::new(),
            },
        ];
        let rewrites = BTreeMap::from([
            (pa, RewriteEnd { side: GadgetSide::One, keep_outside: Some(ta) }),
            (pb, RewriteEnd { side: GadgetSide::Two, keep_outside: Some(tb) }),
        ]);
        if let Some(child) = finish_two_c_child(
            node.clone(),
            si,
            first,
            second,
            interior,
            solved,
            inserts,
            grafts,
            rewrites,
        ) {
            children.push(child);
        }
    }
    Ok(children)
}

/// Shared tail of the two-open-boundary through-branches: pendant gadgets on
/// both Y-sets.
#[allow(clippy::too_many_arguments)]
fn finish_two_c_child(
    mut child: Node,
    si: usize,
    first: &Boundary,
    second: &Boundary,
    interior: &BTreeSet<VertexId>,
    solved: BTreeSet<usize>,
    inserts: Vec<(usize, Vec<VertexId>)>,
    grafts: Vec<SpliceStep>,
    rewrites: BTreeMap<usize, RewriteEnd>,
) -> Option<Node> {
    for (pair, path) in inserts {
        child.splice.push(SpliceStep::Insert { pair, path });
    }
    let mut covered = solved;
    covered.extend(rewrites.keys());
    let outside_ends: BTreeMap<usize, Option<VertexId>> =
        rewrites.iter().map(|(i, r)| (*i, r.keep_outside)).collect();
    let sides: BTreeMap<usize, bool> = rewrites
        .iter()
        .map(|(i, r)| (*i, matches!(r.side, GadgetSide::One)))
        .collect();
    if !child.delete_vertices(interior, &covered) {
        return None;
    }
    let w1g = child.fresh_vertex();
    let u1g = child.fresh_vertex();
    let w2g = child.fresh_vertex();
    let u2g = child.fresh_vertex();
    for &yv in &first.3 {
        child.graph.add_edge(w1g, yv);
    }
    child.graph.add_edge(w1g, u1g);
    for &yv in &second.3 {
        child.graph.add_edge(w2g, yv);
    }
    child.graph.add_edge(w2g, u2g);
    for (idx, outside) in &outside_ends {
        let (s, t) = match outside {
            Some(o) => {
                let g = if sides[idx] { u1g } else { u2g };
                (g, *o)
            }
            None => (u1g, u2g),
        };
        child.pairs.push(TerminalPair { index: *idx, s, t });
    }
    child.pairs.sort_by_key(|p| p.index);
    for g in grafts {
        let patched = match g {
            SpliceStep::Graft { pair, front, front_gadgets, back, back_gadgets } => {
                let sub = |v: VertexId| match v.0 {
                    GADGET_W1 => w1g,
                    GADGET_U1 => u1g,
                    GADGET_W2 => w2g,
                    GADGET_U2 => u2g,
                    _ => v,
                };
                SpliceStep::Graft {
                    pair,
                    front,
                    front_gadgets: front_gadgets.into_iter().map(sub).collect(),
                    back,
                    back_gadgets: back_gadgets.into_iter().map(sub).collect(),
                }
            }
            other => other,
        };
        child.splice.push(patched);
    }
    let mut j = Graph::new();
    j.add_edge(first.1, w1g);
    j.add_edge(w1g, u1g);
    j.add_edge(second.1, w2g);
    j.add_edge(w2g, u2g);
    child.strips[si].j = j;
    child.strips[si].r = vec![(first.0, first.1), (second.0, second.1)];
    child.strips[si].arcs = None;
    child.next += 1;
    Some(child)
}

// ---------------------------------------------------------------------------
// Certificate lifting
// ---------------------------------------------------------------------------

/// Rebuilds a solution of the branch input from a leaf solution by replaying
/// the leaf's splice log backwards.
pub fn lift_leaf_solution(
    leaf: &BranchLeaf,
    leaf_sol: &BTreeMap<usize, Vec<VertexId>>,
) -> Result<BTreeMap<usize, Vec<VertexId>>, StripError> {
    let mut sol = leaf_sol.clone();
    for step in leaf.splice.iter().rev() {
        match step {
            SpliceStep::Insert { pair, path } => {
                if sol.insert(*pair, path.clone()).is_some() {
                    return Err(StripError::Lift(format!("pair {} inserted twice", pair + 1)));
                }
            }
            SpliceStep::Graft { pair, front, front_gadgets, back, back_gadgets } => {
                let Some(mut path) = sol.remove(pair) else {
                    return Err(StripError::Lift(format!("pair {} missing for graft", pair + 1)));
                };
                // Orient the leaf path so recorded gadget ends line up.
                let needs_reverse = if let Some(&g0) = front_gadgets.first() {
                    if path.first() == Some(&g0) {
                        false
                    } else if path.last() == Some(&g0) {
                        true
                    } else {
                        return Err(StripError::Lift(format!(
                            "pair {}: gadget {g0} not at either end",
                            pair + 1
                        )));
                    }
                } else if let Some(gl) = back_gadgets.last() {
                    if path.last() == Some(gl) {
                        false
                    } else if path.first() == Some(gl) {
                        true
                    } else {
                        return Err(StripError::Lift(format!(
                            "pair {}: gadget {gl} not at either end",
                            pair + 1
                        )));
                    }
                } else {
                    false
                };
                if needs_reverse {
                    path.reverse();
                }
                if !path.starts_with(front_gadgets) || !path.ends_with(back_gadgets) {
                    return Err(StripError::Lift(format!(
                        "pair {}: leaf path does not run through the gadgets",
                        pair + 1
                    )));
                }
                let middle = &path[front_gadgets.len()..path.len() - back_gadgets.len()];
                let mut full = front.clone();
                full.extend_from_slice(middle);
                full.extend_from_slice(back);
                sol.insert(*pair, full);
            }
            SpliceStep::CorridorSwap { corridor, replacement } => {
                let head = corridor[0];
                for path in sol.values_mut() {
                    let Some(pos) = path.iter().position(|&v| v == head) else { continue };
                    // Determine run orientation and extent.
                    let forward = path[pos..].starts_with(corridor);
                    let rev: Vec<VertexId> = corridor.iter().rev().copied().collect();
                    let backward = pos + 1 >= corridor.len()
                        && path[pos + 1 - corridor.len()..=pos].starts_with(&rev);
                    let mut newp = Vec::new();
                    if forward {
                        newp.extend_from_slice(&path[..pos]);
                        newp.extend_from_slice(replacement);
                        newp.extend_from_slice(&path[pos + corridor.len()..]);
                    } else if backward {
                        let start = pos + 1 - corridor.len();
                        newp.extend_from_slice(&path[..start]);
                        newp.extend(replacement.iter().rev().copied());
                        newp.extend_from_slice(&path[pos + 1..]);
                    } else {
                        return Err(StripError::Lift(
                            "path enters a corridor without traversing it".into(),
                        ));
                    }
                    *path = newp;
                    break;
                }
            }
        }
    }
    Ok(sol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{complete_graph, line_graph, path_graph, two_clique_neighborhoods};
    use crate::instance::{verify_solution, Solution};
    use crate::oracle::solve_idp_exact;

    fn v(i: u32) -> VertexId {
        VertexId(i)
    }

    fn lim() -> Limits {
        Limits::with_cap(40)
    }

    #[test]
    fn builder_on_small_line_graphs() {
        // L(P_4) = P_3: three spots.
        let (g, _) = line_graph(&path_graph(4));
        let s = strip_structure_from_line_graph(&g).unwrap();
        assert!(validate_strip_structure(&g, &s).is_empty());
        assert_eq!(s.hyperedges.len(), 3);
        for he in &s.hyperedges {
            assert_eq!(classify_strip(he, &s.strips[&he.id]).unwrap(), StripKind::Spot);
        }
        // L(K_4): six spots on R = K_4.
        let (g, _) = line_graph(&complete_graph(4));
        let s = strip_structure_from_line_graph(&g).unwrap();
        assert!(validate_strip_structure(&g, &s).is_empty());
        assert_eq!(s.hyperedges.len(), 6);
        assert_eq!(s.r_vertices.len(), 4);
    }

    #[test]
    fn builder_rejects_non_line_graph() {
        let claw = crate::graph::star_graph(3);
        assert!(matches!(strip_structure_from_line_graph(&claw), Err(StripError::NotLineGraph)));
    }

    #[test]
    fn all_spot_structure_is_single_leaf() {
        let (g, _) = line_graph(&path_graph(5)); // P_4
        let s = strip_structure_from_line_graph(&g).unwrap();
        let inst = Instance::new(g, vec![(v(1), v(4))]).unwrap();
        let out = branch_strips(&inst, &s, &lim()).unwrap();
        assert_eq!(out.leaves.len(), 1);
        assert_eq!(out.leaves[0].instance, inst);
        assert!(out.leaves[0].splice.is_empty());
    }

    #[test]
    fn structure_file_roundtrip() {
        let (g, _) = line_graph(&path_graph(4));
        let s = strip_structure_from_line_graph(&g).unwrap();
        let text = format_strip_structure(&s);
        let (back, files) = parse_strip_structure(&text).unwrap();
        assert!(files.is_empty());
        assert_eq!(s, back);
    }

    /// Chain fixture: two one-boundary stripes joined by a spot.
    /// G is the path 12-11-21-31-32 plus deeper chain vertices.
    fn chain_fixture() -> (Graph, StripStructure) {
        // E1 {r1}: stripe z=901, interior 11-12 (X = {11})
        // E2 {r1,r2}: spot z=902,21,z=903
        // E3 {r2}: stripe z=904, interior 31-32 (X = {31})
        let mut g = Graph::new();
        g.add_edge(v(11), v(12));
        g.add_edge(v(11), v(21));
        g.add_edge(v(21), v(31));
        g.add_edge(v(31), v(32));
        let mut j1 = Graph::new();
        j1.add_edge(v(901), v(11));
        j1.add_edge(v(11), v(12));
        let mut j2 = Graph::new();
        j2.add_edge(v(902), v(21));
        j2.add_edge(v(903), v(21));
        let mut j3 = Graph::new();
        j3.add_edge(v(904), v(31));
        j3.add_edge(v(31), v(32));
        let s = StripStructure {
            r_vertices: BTreeSet::from([RId(1), RId(2)]),
            hyperedges: vec![
                Hyperedge { id: 1, r_vertices: vec![RId(1)] },
                Hyperedge { id: 2, r_vertices: vec![RId(1), RId(2)] },
                Hyperedge { id: 3, r_vertices: vec![RId(2)] },
            ],
            strips: BTreeMap::from([
                (1, Strip { j: j1, z: BTreeMap::from([(RId(1), v(901))]), arcs: None }),
                (
                    2,
                    Strip {
                        j: j2,
                        z: BTreeMap::from([(RId(1), v(902)), (RId(2), v(903))]),
                        arcs: None,
                    },
                ),
                (3, Strip { j: j3, z: BTreeMap::from([(RId(2), v(904))]), arcs: None }),
            ]),
        };
        (g, s)
    }

    #[test]
    fn chain_fixture_validates() {
        let (g, s) = chain_fixture();
        let viols = validate_strip_structure(&g, &s);
        assert!(viols.is_empty(), "{viols:?}");
    }

    fn check_branching(inst: &Instance, s: &StripStructure) {
        let out = branch_strips(inst, s, &lim()).unwrap();
        assert!(out.leaves.len() <= 6usize.pow(out.branching_pairs.len() as u32));
        let oracle = solve_idp_exact(inst, &lim()).unwrap();
        let mut any_yes = false;
        for leaf in &out.leaves {
            assert!(two_clique_neighborhoods(&leaf.instance.graph), "leaf not 2-clique");
            assert!(independence_report(&leaf.instance).independent);
            assert!(graph::find_claw(&leaf.instance.graph).is_none());
            if let Some(leaf_sol) = solve_idp_exact(&leaf.instance, &lim()).unwrap() {
                any_yes = true;
                let lifted =
                    lift_leaf_solution(leaf, &leaf_sol.to_map(&leaf.instance)).unwrap();
                let full = Solution::from_map(inst, &lifted).expect("all pairs restored");
                let viols = verify_solution(inst, &full);
                assert!(viols.is_empty(), "lifted certificate invalid: {viols:?}");
            }
        }
        assert_eq!(any_yes, oracle.is_some(), "disjunction mismatch");
    }

    #[test]
    fn chain_case1_mixed_pair() {
        let (g, s) = chain_fixture();
        let inst = Instance::new(g, vec![(v(12), v(32))]).unwrap();
        check_branching(&inst, &s);
    }

    #[test]
    fn chain_case1_internal_pairs() {
        let (g, s) = chain_fixture();
        let inst = Instance::new(g, vec![(v(12), v(21))]).unwrap();
        check_branching(&inst, &s);
        let (g, s) = chain_fixture();
        let inst = Instance::new(g, vec![(v(11), v(32))]).unwrap();
        check_branching(&inst, &s);
    }

    /// Two-boundary fixture: a main stripe (processed first) flanked by two
    /// one-boundary stripes. G is a path with ids
    /// 12-11-21-22-...-2x-31-32.
    fn two_sided_fixture(mid_len: u32) -> (Graph, StripStructure) {
        let mids: Vec<VertexId> = (0..mid_len).map(|i| v(21 + i)).collect();
        let mut g = Graph::new();
        g.add_edge(v(11), v(12));
        g.add_edge(v(11), mids[0]);
        for w in mids.windows(2) {
            g.add_edge(w[0], w[1]);
        }
        g.add_edge(*mids.last().unwrap(), v(31));
        g.add_edge(v(31), v(32));
        // Main stripe first in the worklist.
        let mut jm = Graph::new();
        jm.add_edge(v(902), mids[0]);
        for w in mids.windows(2) {
            jm.add_edge(w[0], w[1]);
        }
        jm.add_edge(*mids.last().unwrap(), v(903));
        let mut j1 = Graph::new();
        j1.add_edge(v(901), v(11));
        j1.add_edge(v(11), v(12));
        let mut j3 = Graph::new();
        j3.add_edge(v(904), v(31));
        j3.add_edge(v(31), v(32));
        let s = StripStructure {
            r_vertices: BTreeSet::from([RId(1), RId(2)]),
            hyperedges: vec![
                Hyperedge { id: 1, r_vertices: vec![RId(1), RId(2)] },
                Hyperedge { id: 2, r_vertices: vec![RId(1)] },
                Hyperedge { id: 3, r_vertices: vec![RId(2)] },
            ],
            strips: BTreeMap::from([
                (
                    1,
                    Strip {
                        j: jm,
                        z: BTreeMap::from([(RId(1), v(902)), (RId(2), v(903))]),
                        arcs: None,
                    },
                ),
                (2, Strip { j: j1, z: BTreeMap::from([(RId(1), v(901))]), arcs: None }),
                (3, Strip { j: j3, z: BTreeMap::from([(RId(2), v(904))]), arcs: None }),
            ]),
        };
        (g, s)
    }

    #[test]
    fn two_sided_fixture_validates() {
        let (g, s) = two_sided_fixture(3);
        let viols = validate_strip_structure(&g, &s);
        assert!(viols.is_empty(), "{viols:?}");
    }

    #[test]
    fn case_2a_partners_on_boundaries() {
        let (g, s) = two_sided_fixture(3);
        // Pair (21, 23): both terminals in the boundary cliques, same pair.
        let inst = Instance::new(g, vec![(v(21), v(23))]).unwrap();
        check_branching(&inst, &s);
    }

    #[test]
    fn case_2b_boundary_terminal() {
        let (g, s) = two_sided_fixture(4);
        // 21 in X1, partner outside: one-sided boundary case.
        let inst = Instance::new(g, vec![(v(21), v(32))]).unwrap();
        check_branching(&inst, &s);
    }

    #[test]
    fn case_2b_one_crosser() {
        let (g, s) = two_sided_fixture(4);
        // (21, 32) plus a second pair crossing out to the left.
        let inst = Instance::new(g, vec![(v(21), v(32)), (v(23), v(12))]).unwrap();
        check_branching(&inst, &s);
    }

    #[test]
    fn case_2b_two_crossing_pairs_no() {
        let (g, s) = two_sided_fixture(6);
        // Two deep terminals both need an outside partner next to the
        // boundary terminal 21: at most one can cross.
        let inst =
            Instance::new(g, vec![(v(21), v(32)), (v(23), v(12)), (v(25), v(12))]).unwrap();
        check_branching(&inst, &s);
    }

    #[test]
    fn case_2c_deep_pair() {
        let (g, s) = two_sided_fixture(5);
        // (22, 24): strictly interior pair, boundary cliques terminal-free.
        let inst = Instance::new(g, vec![(v(22), v(24))]).unwrap();
        check_branching(&inst, &s);
    }

    #[test]
    fn case_2c_crossing_pair() {
        let (g, s) = two_sided_fixture(3);
        // (22, 32): one terminal deep inside, partner outside (one unpaired).
        let inst = Instance::new(g, vec![(v(22), v(32))]).unwrap();
        check_branching(&inst, &s);
    }

    /// Fixture with two parallel interior chains 21-22-23 and 26-27-28
    /// joined at both boundary cliques (independence number of J stays 4).
    fn wide_fixture() -> (Graph, StripStructure) {
        let mut g = Graph::new();
        g.add_edge(v(11), v(12));
        for (a, b) in [(21, 22), (22, 23), (26, 27), (27, 28)] {
            g.add_edge(v(a), v(b));
        }
        g.add_edge(v(21), v(26)); // X1 clique
        g.add_edge(v(23), v(28)); // X2 clique
        g.add_edge(v(11), v(21));
        g.add_edge(v(11), v(26)); // C_{r1}
        g.add_edge(v(31), v(23));
        g.add_edge(v(31), v(28)); // C_{r2}
        g.add_edge(v(31), v(32));
        let mut jm = Graph::new();
        for (a, b) in [(21, 22), (22, 23), (26, 27), (27, 28), (21, 26), (23, 28)] {
            jm.add_edge(v(a), v(b));
        }
        jm.add_edge(v(902), v(21));
        jm.add_edge(v(902), v(26));
        jm.add_edge(v(903), v(23));
        jm.add_edge(v(903), v(28));
        let mut j1 = Graph::new();
        j1.add_edge(v(901), v(11));
        j1.add_edge(v(11), v(12));
        let mut j3 = Graph::new();
        j3.add_edge(v(904), v(31));
        j3.add_edge(v(31), v(32));
        let s = StripStructure {
            r_vertices: BTreeSet::from([RId(1), RId(2)]),
            hyperedges: vec![
                Hyperedge { id: 1, r_vertices: vec![RId(1), RId(2)] },
                Hyperedge { id: 2, r_vertices: vec![RId(1)] },
                Hyperedge { id: 3, r_vertices: vec![RId(2)] },
            ],
            strips: BTreeMap::from([
                (
                    1,
                    Strip {
                        j: jm,
                        z: BTreeMap::from([(RId(1), v(902)), (RId(2), v(903))]),
                        arcs: None,
                    },
                ),
                (2, Strip { j: j1, z: BTreeMap::from([(RId(1), v(901))]), arcs: None }),
                (3, Strip { j: j3, z: BTreeMap::from([(RId(2), v(904))]), arcs: None }),
            ]),
        };
        (g, s)
    }

    #[test]
    fn wide_fixture_validates() {
        let (g, s) = wide_fixture();
        let viols = validate_strip_structure(&g, &s);
        assert!(viols.is_empty(), "{viols:?}");
    }

    #[test]
    fn case_2c_cross_chain() {
        let (g, s) = wide_fixture();
        let inst = Instance::new(g, vec![(v(22), v(27))]).unwrap();
        check_branching(&inst, &s);
    }

    /// Fixture where a crossing corridor coexists with an interior pair: the
    /// corridor is the edge 21-23, and the pair lives on a dead-end branch
    /// 26-27-28-29 attached at the X1 clique {21, 26}.
    fn corridor_fixture() -> (Graph, StripStructure) {
        let mut g = Graph::new();
        g.add_edge(v(11), v(12));
        for (a, b) in [(21, 23), (21, 26), (26, 27), (27, 28), (28, 29)] {
            g.add_edge(v(a), v(b));
        }
        g.add_edge(v(11), v(21));
        g.add_edge(v(11), v(26)); // C_{r1} over X1 = {21, 26}
        g.add_edge(v(31), v(23)); // C_{r2} over X2 = {23}
        g.add_edge(v(31), v(32));
        let mut jm = Graph::new();
        for (a, b) in [(21, 23), (21, 26), (26, 27), (27, 28), (28, 29)] {
            jm.add_edge(v(a), v(b));
        }
        jm.add_edge(v(902), v(21));
        jm.add_edge(v(902), v(26));
        jm.add_edge(v(903), v(23));
        let mut j1 = Graph::new();
        j1.add_edge(v(901), v(11));
        j1.add_edge(v(11), v(12));
        let mut j3 = Graph::new();
        j3.add_edge(v(904), v(31));
        j3.add_edge(v(31), v(32));
        let s = StripStructure {
            r_vertices: BTreeSet::from([RId(1), RId(2)]),
            hyperedges: vec![
                Hyperedge { id: 1, r_vertices: vec![RId(1), RId(2)] },
                Hyperedge { id: 2, r_vertices: vec![RId(1)] },
                Hyperedge { id: 3, r_vertices: vec![RId(2)] },
            ],
            strips: BTreeMap::from([
                (
                    1,
                    Strip {
                        j: jm,
                        z: BTreeMap::from([(RId(1), v(902)), (RId(2), v(903))]),
                        arcs: None,
                    },
                ),
                (2, Strip { j: j1, z: BTreeMap::from([(RId(1), v(901))]), arcs: None }),
                (3, Strip { j: j3, z: BTreeMap::from([(RId(2), v(904))]), arcs: None }),
            ]),
        };
        (g, s)
    }

    #[test]
    fn case_2c_corridor() {
        let (g, s) = corridor_fixture();
        assert!(validate_strip_structure(&g, &s).is_empty());
        let inst = Instance::new(g, vec![(v(27), v(29))]).unwrap();
        check_branching(&inst, &s);
    }

    #[test]
    fn terminal_free_strips_contract() {
        let (g, s) = two_sided_fixture(3);
        // Pair entirely outside the main stripe.
        let inst = Instance::new(g, vec![(v(12), v(32))]).unwrap();
        check_branching(&inst, &s);
    }

    #[test]
    fn branching_requires_independent() {
        let (g, s) = two_sided_fixture(3);
        let inst = Instance::new(g, vec![(v(21), v(22))]).unwrap();
        assert!(matches!(branch_strips(&inst, &s, &lim()), Err(StripError::Precondition(_))));
    }

    #[test]
    fn subproblem_dispatch() {
        // alpha <= 4 path: solved by the exact search.
        let g = path_graph(6);
        let got = solve_strip_subproblem(&g, &[(v(1), v(6))], None, &lim()).unwrap().unwrap();
        assert_eq!(got.len(), 1);
        // alpha > 4, no model: dispatch error.
        let empty = Graph::with_vertices((1..=6).map(v));
        assert!(matches!(
            solve_strip_subproblem(&empty, &[], None, &lim()),
            Err(StripError::Unclassifiable { .. })
        ));
    }
}
